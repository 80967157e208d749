//! Weyl modules `V(lambda)` and induced modules `H^0(lambda)` over `F_p`,
//! monomial actions of the hyperalgebra, and the coproduct action on tensor products.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::charzero::{
    admissible_lattice, build_hw_module_q_capped, AdmissibleLattice, DEFAULT_DIM_CAP,
};
use crate::error::{Error, Result};
use crate::field::{as_integer, Field, PrimeField};
use crate::linalg::Matrix;
use crate::module::{GradedOp, Side, WeightModule};
use crate::multiindex::MultiIndex;
use crate::rootsys::{RootSystem, Weight};

/// `V(lambda)` over `F_p`, reduced from the admissible lattice.
#[derive(Clone, Debug)]
pub struct WeylModuleP {
    p: u64,
    lambda: Weight,
    module: WeightModule<PrimeField>,
}

impl WeylModuleP {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn field(&self) -> &PrimeField {
        self.module.field()
    }

    pub fn lambda(&self) -> &Weight {
        &self.lambda
    }

    pub fn module(&self) -> &WeightModule<PrimeField> {
        &self.module
    }

    pub fn dim(&self) -> usize {
        self.module.dim()
    }

    /// Global index of `v_lambda`.
    pub fn highest_vector(&self) -> usize {
        0
    }

    pub(crate) fn from_module(p: u64, module: WeightModule<PrimeField>) -> Self {
        WeylModuleP {
            p,
            lambda: module.highest_weight().clone(),
            module,
        }
    }
}

/// Reduces every divided-power operator of the lattice entrywise mod `p`.
pub fn reduce_mod_p(lat: &AdmissibleLattice, p: u64) -> Result<WeylModuleP> {
    let f = PrimeField::new(p)?;
    let src = lat.module();
    let rs = src.root_system().clone();
    let reduce = |side: Side| -> Vec<Vec<GradedOp<u64>>> {
        (0..rs.num_positive())
            .map(|b| {
                (1..=src.max_power(side, b))
                    .map(|k| {
                        let op = src.op(side, b, k).expect("in range");
                        op.map(|x| {
                            f.from_bigint(&as_integer(x).expect("lattice operators are integral"))
                        })
                        .pruned(&f)
                    })
                    .collect()
            })
            .collect()
    };
    let e_ops = reduce(Side::E);
    let f_ops = reduce(Side::F);
    let module = WeightModule::new(
        f,
        rs.clone(),
        src.layout().clone(),
        lat.lambda().clone(),
        e_ops,
        f_ops,
    );
    Ok(WeylModuleP {
        p,
        lambda: lat.lambda().clone(),
        module,
    })
}

/// Builds `V(lambda)` over `F_p` from scratch with the default dimension cap.
pub fn weyl_module(rs: &Arc<RootSystem>, lambda: &Weight, p: u64) -> Result<WeylModuleP> {
    weyl_module_capped(rs, lambda, p, DEFAULT_DIM_CAP)
}

pub fn weyl_module_capped(
    rs: &Arc<RootSystem>,
    lambda: &Weight,
    p: u64,
    cap: u128,
) -> Result<WeylModuleP> {
    PrimeField::new(p)?;
    let q = build_hw_module_q_capped(rs, lambda, cap)?;
    let lat = admissible_lattice(&q)?;
    reduce_mod_p(&lat, p)
}

/// `prod_beta X_beta^(s(beta))` with the factors in root order (`beta_1` leftmost).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HyperMonomial {
    pub side: Side,
    pub exps: MultiIndex,
}

impl HyperMonomial {
    pub fn new(side: Side, exps: MultiIndex) -> Self {
        HyperMonomial { side, exps }
    }

    pub fn identity(n: usize) -> Self {
        HyperMonomial {
            side: Side::F,
            exps: MultiIndex::zero(n),
        }
    }

    pub fn f(exps: MultiIndex) -> Self {
        HyperMonomial {
            side: Side::F,
            exps,
        }
    }

    pub fn e(exps: MultiIndex) -> Self {
        HyperMonomial {
            side: Side::E,
            exps,
        }
    }

    /// `F_0 = prod_beta F_beta^(p-1)`.
    pub fn f0(n: usize, p: u64) -> Self {
        HyperMonomial {
            side: Side::F,
            exps: MultiIndex::constant(n, (p - 1) as u32),
        }
    }

    /// A single factor `X_beta^(k)`.
    pub fn single(side: Side, n: usize, root: usize, k: u32) -> Self {
        let mut e = vec![0; n];
        e[root] = k;
        HyperMonomial {
            side,
            exps: MultiIndex(e),
        }
    }

    pub fn degree(&self) -> u64 {
        self.exps.degree()
    }
}

/// Applies a monomial to a vector: the rightmost factor `beta_N` acts first.
pub fn act<F: Field>(m: &WeightModule<F>, mono: &HyperMonomial, v: &[F::Elem]) -> Vec<F::Elem> {
    let mut x = v.to_vec();
    for (b, &k) in mono.exps.exps().iter().enumerate().rev() {
        if k > 0 {
            x = m.apply(mono.side, b, k as usize, &x);
        }
    }
    x
}

/// The operator of `prod X_{beta}^(s(beta))` with the factors taken left to right in `order`.
pub fn monomial_operator<F: Field>(
    m: &WeightModule<F>,
    mono: &HyperMonomial,
    order: &[usize],
) -> GradedOp<F::Elem> {
    let f = m.field();
    let mut acc = GradedOp::identity(f, m.layout());
    for &b in order.iter().rev() {
        let k = mono.exps.exps()[b] as usize;
        if k == 0 {
            continue;
        }
        match m.op(mono.side, b, k) {
            Some(op) => acc = op.compose(f, &acc),
            None => return GradedOp::zero(m.layout()),
        }
    }
    acc
}

/// Sparse column `X_beta^(k) e_a` as `(global index, value)` pairs.
pub fn op_column<F: Field>(
    m: &WeightModule<F>,
    side: Side,
    root: usize,
    k: usize,
    a: usize,
) -> Vec<(usize, F::Elem)> {
    let f = m.field();
    if k == 0 {
        return vec![(a, f.one())];
    }
    let layout = m.layout();
    let w = layout.weight_of_basis(a);
    let Some((tgt, blk)) = m.op(side, root, k).and_then(|op| op.block(w)) else {
        return Vec::new();
    };
    let c = a - layout.range(w).start;
    let base = layout.range(*tgt).start;
    (0..blk.rows())
        .filter(|&r| !f.is_zero(blk.get(r, c)))
        .map(|r| (base + r, blk.get(r, c).clone()))
        .collect()
}

/// Sparse element of `M ⊗ N`: basis pairs `(a, b)` to nonzero coefficients.
pub type TensorVec<E> = BTreeMap<(usize, usize), E>;

pub fn tensor_basis<E>(a: usize, b: usize, one: E) -> TensorVec<E> {
    BTreeMap::from([((a, b), one)])
}

fn add_into<F: Field>(f: &F, out: &mut TensorVec<F::Elem>, key: (usize, usize), v: F::Elem) {
    use std::collections::btree_map::Entry;
    match out.entry(key) {
        Entry::Vacant(e) => {
            if !f.is_zero(&v) {
                e.insert(v);
            }
        }
        Entry::Occupied(mut e) => {
            let s = f.add(e.get(), &v);
            if f.is_zero(&s) {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
}

/// `(X^(i) ⊗ Y^(j)) v` for single root operators on each leg.
#[allow(clippy::too_many_arguments)]
pub fn apply_pair<F: Field>(
    m1: &WeightModule<F>,
    m2: &WeightModule<F>,
    side: Side,
    root: usize,
    i: usize,
    j: usize,
    v: &TensorVec<F::Elem>,
) -> TensorVec<F::Elem> {
    let f = m1.field();
    let mut out = TensorVec::new();
    let mut cache1: BTreeMap<usize, Vec<(usize, F::Elem)>> = BTreeMap::new();
    let mut cache2: BTreeMap<usize, Vec<(usize, F::Elem)>> = BTreeMap::new();
    for (&(a, b), c) in v {
        let col1 = cache1
            .entry(a)
            .or_insert_with(|| op_column(m1, side, root, i, a))
            .clone();
        if col1.is_empty() {
            continue;
        }
        let col2 = cache2
            .entry(b)
            .or_insert_with(|| op_column(m2, side, root, j, b));
        for (a2, x) in &col1 {
            let cx = f.mul(c, x);
            for (b2, y) in col2.iter() {
                add_into(f, &mut out, (*a2, *b2), f.mul(&cx, y));
            }
        }
    }
    out
}

/// `Delta(X_beta^(n)) v = sum_{i+j=n} (X^(i) ⊗ X^(j)) v`.
pub fn delta_apply<F: Field>(
    m1: &WeightModule<F>,
    m2: &WeightModule<F>,
    side: Side,
    root: usize,
    n: usize,
    v: &TensorVec<F::Elem>,
) -> TensorVec<F::Elem> {
    let f = m1.field();
    let mut out = TensorVec::new();
    for i in 0..=n {
        for (key, c) in apply_pair(m1, m2, side, root, i, n - i, v) {
            add_into(f, &mut out, key, c);
        }
    }
    out
}

/// `Delta(mono) v`, applying the coproduct factor by factor.
pub fn tensor_act<F: Field>(
    m1: &WeightModule<F>,
    m2: &WeightModule<F>,
    mono: &HyperMonomial,
    v: &TensorVec<F::Elem>,
) -> Result<TensorVec<F::Elem>> {
    if m1.field().characteristic() != m2.field().characteristic() {
        return Err(Error::FieldMismatch);
    }
    let mut x = v.clone();
    for (b, &k) in mono.exps.exps().iter().enumerate().rev() {
        if k > 0 {
            x = delta_apply(m1, m2, mono.side, b, k as usize, &x);
        }
    }
    Ok(x)
}

/// `(mono ⊗ 1) v`.
pub fn act_left<F: Field>(
    m1: &WeightModule<F>,
    mono: &HyperMonomial,
    v: &TensorVec<F::Elem>,
) -> TensorVec<F::Elem> {
    let f = m1.field();
    let mut x = v.clone();
    for (b, &k) in mono.exps.exps().iter().enumerate().rev() {
        if k == 0 {
            continue;
        }
        let mut out = TensorVec::new();
        for (&(a, c2), c) in &x {
            for (a2, y) in op_column(m1, mono.side, b, k as usize, a) {
                add_into(f, &mut out, (a2, c2), f.mul(c, &y));
            }
        }
        x = out;
    }
    x
}

/// `H^0(lambda) = V(lambda^*)^*` with `X` acting by `sigma(X)^T`, `sigma(X^(k)) = (-1)^k X^(k)`.
#[derive(Clone, Debug)]
pub struct DualModuleP {
    lambda: Weight,
    base: Arc<WeylModuleP>,
    module: WeightModule<PrimeField>,
}

impl DualModuleP {
    /// `lambda` with `H^0(lambda)` the dual of `base = V(lambda^*)`.
    pub fn lambda(&self) -> &Weight {
        &self.lambda
    }

    pub fn base(&self) -> &Arc<WeylModuleP> {
        &self.base
    }

    pub fn module(&self) -> &WeightModule<PrimeField> {
        &self.module
    }

    pub fn dim(&self) -> usize {
        self.module.dim()
    }
}

/// The dual of `V(mu)`, i.e. `H^0(mu^*)`; basis is the dual basis, weights negated.
pub fn dual_module(base: Arc<WeylModuleP>) -> DualModuleP {
    let src = base.module();
    let f = *src.field();
    let rs = src.root_system().clone();
    let layout = Arc::new(src.layout().negated());
    let build = |side: Side| -> Vec<Vec<GradedOp<u64>>> {
        (0..rs.num_positive())
            .map(|b| {
                (1..=src.max_power(side, b))
                    .map(|k| {
                        let t = src.op(side, b, k).expect("in range").transpose();
                        if k % 2 == 1 {
                            t.scale(&f, &f.neg(&f.one()))
                        } else {
                            t
                        }
                    })
                    .collect()
            })
            .collect()
    };
    let lambda = rs.star(base.lambda());
    let module = WeightModule::new(
        f,
        rs.clone(),
        layout,
        lambda.clone(),
        build(Side::E),
        build(Side::F),
    );
    DualModuleP {
        lambda,
        base,
        module,
    }
}

/// `eta(xi ⊗ v) = xi(v)`.
pub fn dual_pairing(d: &DualModuleP, xi: &[u64], v: &[u64]) -> u64 {
    let f = d.module.field();
    let mut acc = 0;
    for (a, b) in xi.iter().zip(v) {
        f.add_mul_assign(&mut acc, a, b);
    }
    acc
}

/// Largest dense size `to_matrix` and `to_vec` will allocate.
pub const MAX_DENSE_ENTRIES: usize = 1 << 24;

fn check_dense(n: Option<usize>) -> Result<()> {
    match n {
        Some(n) if n <= MAX_DENSE_ENTRIES => Ok(()),
        _ => Err(Error::Parse(format!(
            "dense size exceeds {MAX_DENSE_ENTRIES} entries"
        ))),
    }
}

/// Sparse triplet form of a matrix: `entries = [[row, col, "value"], ...]`, values in decimal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, String)>,
}

/// Sparse form of a vector: `entries = [[index, "value"], ...]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseVector {
    pub dim: usize,
    pub entries: Vec<(usize, String)>,
}

impl SparseMatrix {
    pub fn from_matrix<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Self {
        let mut entries = Vec::new();
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                let v = m.get(r, c);
                if !f.is_zero(v) {
                    entries.push((r, c, f.render(v)));
                }
            }
        }
        SparseMatrix {
            rows: m.rows(),
            cols: m.cols(),
            entries,
        }
    }

    pub fn to_matrix<F: Field>(
        &self,
        f: &F,
        parse: impl Fn(&str) -> Result<F::Elem>,
    ) -> Result<Matrix<F::Elem>> {
        check_dense(self.rows.checked_mul(self.cols))?;
        let mut m = crate::linalg::zeros(f, self.rows, self.cols);
        for (r, c, v) in &self.entries {
            if *r >= self.rows || *c >= self.cols {
                return Err(Error::Parse(format!(
                    "triplet ({r},{c}) outside {}x{}",
                    self.rows, self.cols
                )));
            }
            m.set(*r, *c, parse(v)?);
        }
        Ok(m)
    }
}

impl SparseVector {
    pub fn from_slice<F: Field>(f: &F, v: &[F::Elem]) -> Self {
        let entries = v
            .iter()
            .enumerate()
            .filter(|(_, x)| !f.is_zero(x))
            .map(|(i, x)| (i, f.render(x)))
            .collect();
        SparseVector {
            dim: v.len(),
            entries,
        }
    }

    pub fn to_vec<F: Field>(
        &self,
        f: &F,
        parse: impl Fn(&str) -> Result<F::Elem>,
    ) -> Result<Vec<F::Elem>> {
        check_dense(Some(self.dim))?;
        let mut out = vec![f.zero(); self.dim];
        for (i, x) in &self.entries {
            *out.get_mut(*i).ok_or_else(|| {
                Error::Parse(format!("index {i} outside dimension {}", self.dim))
            })? = parse(x)?;
        }
        Ok(out)
    }
}

/// Parses a decimal residue, reducing it into `F_p`.
pub fn parse_residue(f: &PrimeField, s: &str) -> Result<u64> {
    let n: num_bigint::BigInt = s
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad integer {s:?}")))?;
    Ok(f.from_bigint(&n))
}
