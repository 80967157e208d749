//! The induced PBW filtration on `V(lambda) ⊗ V(mu)`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::EchelonBasis;
use crate::module::{Side, WeightModule};
use crate::pbw::{essential_set, MonomialEvaluator};
use crate::rootsys::Weight;
use crate::weylmod::{act_left, delta_apply, tensor_act, tensor_basis, HyperMonomial, TensorVec};

/// Coordinates on `M ⊗ N` grouped by total weight.
pub struct TensorSpace<'a, F: Field> {
    m1: &'a WeightModule<F>,
    m2: &'a WeightModule<F>,
    group_weights: Vec<Weight>,
    group_dims: Vec<usize>,
    /// `(w1, w2) -> (group, offset)`
    blocks: HashMap<(usize, usize), (usize, usize)>,
    /// per group: `(w1, w2, offset)`
    members: Vec<Vec<(usize, usize, usize)>>,
}

impl<'a, F: Field> TensorSpace<'a, F> {
    pub fn new(m1: &'a WeightModule<F>, m2: &'a WeightModule<F>) -> Self {
        let (l1, l2) = (m1.layout(), m2.layout());
        let mut index: HashMap<Weight, usize> = HashMap::new();
        let mut group_weights = Vec::new();
        let mut group_dims = Vec::new();
        let mut blocks = HashMap::new();
        let mut members: Vec<Vec<(usize, usize, usize)>> = Vec::new();
        for w1 in 0..l1.num_weights() {
            for w2 in 0..l2.num_weights() {
                let total = l1.weight(w1).add(l2.weight(w2));
                let g = *index.entry(total.clone()).or_insert_with(|| {
                    group_weights.push(total);
                    group_dims.push(0);
                    members.push(Vec::new());
                    group_weights.len() - 1
                });
                let off = group_dims[g];
                blocks.insert((w1, w2), (g, off));
                members[g].push((w1, w2, off));
                group_dims[g] += l1.dim_at(w1) * l2.dim_at(w2);
            }
        }
        TensorSpace {
            m1,
            m2,
            group_weights,
            group_dims,
            blocks,
            members,
        }
    }

    pub fn dim(&self) -> usize {
        self.m1.dim() * self.m2.dim()
    }

    pub fn num_groups(&self) -> usize {
        self.group_dims.len()
    }

    pub fn group_weight(&self, g: usize) -> &Weight {
        &self.group_weights[g]
    }

    pub fn group_dim(&self, g: usize) -> usize {
        self.group_dims[g]
    }

    pub fn group_of_weight(&self, w: &Weight) -> Option<usize> {
        self.group_weights.iter().position(|x| x == w)
    }

    /// `(group, position)` of the basis tensor `e_a ⊗ e_b`.
    pub fn locate(&self, a: usize, b: usize) -> (usize, usize) {
        let (l1, l2) = (self.m1.layout(), self.m2.layout());
        let (w1, w2) = (l1.weight_of_basis(a), l2.weight_of_basis(b));
        let (g, off) = self.blocks[&(w1, w2)];
        let (i, j) = (a - l1.range(w1).start, b - l2.range(w2).start);
        (g, off + i * l2.dim_at(w2) + j)
    }

    /// Dense coordinates of a weight-homogeneous tensor; `None` for zero.
    pub fn to_dense(&self, v: &TensorVec<F::Elem>) -> Option<(usize, Vec<F::Elem>)> {
        let f = self.m1.field();
        let mut out: Option<(usize, Vec<F::Elem>)> = None;
        for (&(a, b), c) in v {
            let (g, pos) = self.locate(a, b);
            let slot = out.get_or_insert_with(|| (g, vec![f.zero(); self.group_dims[g]]));
            assert_eq!(slot.0, g, "tensor is not weight-homogeneous");
            slot.1[pos] = c.clone();
        }
        out
    }

    pub fn from_dense(&self, g: usize, x: &[F::Elem]) -> TensorVec<F::Elem> {
        let f = self.m1.field();
        let (l1, l2) = (self.m1.layout(), self.m2.layout());
        let mut out = TensorVec::new();
        for &(w1, w2, off) in &self.members[g] {
            let (r1, r2) = (l1.range(w1), l2.range(w2));
            let d2 = r2.len();
            for (i, a) in r1.clone().enumerate() {
                for (j, b) in r2.clone().enumerate() {
                    let c = &x[off + i * d2 + j];
                    if !f.is_zero(c) {
                        out.insert((a, b), c.clone());
                    }
                }
            }
        }
        out
    }
}

/// A weight-graded subspace of `M ⊗ N`, kept as one echelon basis per weight.
pub struct GradedSubspace<'s, 'a, F: Field> {
    space: &'s TensorSpace<'a, F>,
    parts: Vec<EchelonBasis<F>>,
    dim: usize,
}

impl<'s, 'a, F: Field> GradedSubspace<'s, 'a, F> {
    pub fn new(space: &'s TensorSpace<'a, F>) -> Self {
        let f = space.m1.field();
        let parts = space
            .group_dims
            .iter()
            .map(|&d| EchelonBasis::new(f.clone(), d))
            .collect();
        GradedSubspace {
            space,
            parts,
            dim: 0,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn dim_at(&self, g: usize) -> usize {
        self.parts[g].rank()
    }

    /// Adds a homogeneous vector; returns `true` if the dimension grew.
    pub fn insert(&mut self, v: &TensorVec<F::Elem>) -> bool {
        let Some((g, x)) = self.space.to_dense(v) else {
            return false;
        };
        let grew = self.parts[g].insert(x);
        if grew {
            self.dim += 1;
        }
        grew
    }

    pub fn contains(&self, v: &TensorVec<F::Elem>) -> bool {
        match self.space.to_dense(v) {
            None => true,
            Some((g, x)) => self.parts[g].contains(&x),
        }
    }

    fn contains_prefix(&self, v: &TensorVec<F::Elem>, counts: &[usize]) -> bool {
        match self.space.to_dense(v) {
            None => true,
            Some((g, x)) => self.parts[g].contains_prefix(&x, counts[g]),
        }
    }

    fn counts(&self) -> Vec<usize> {
        self.parts.iter().map(|p| p.rank()).collect()
    }

    /// Basis vectors added after the given per-weight counts.
    fn vectors_since(&self, counts: &[usize]) -> Vec<TensorVec<F::Elem>> {
        let mut out = Vec::new();
        for (g, part) in self.parts.iter().enumerate() {
            for row in part.basis().skip(counts[g]) {
                out.push(self.space.from_dense(g, row));
            }
        }
        out
    }

    /// Closes the subspace under `Delta F_beta^(k)` for all roots and powers.
    pub fn close_under_delta_f(&mut self) {
        let (m1, m2) = (self.space.m1, self.space.m2);
        let n = m1.root_system().num_positive();
        let mut queue = self.vectors_since(&vec![0; self.parts.len()]);
        while let Some(u) = queue.pop() {
            for root in 0..n {
                let kmax = m1.max_power(Side::F, root) + m2.max_power(Side::F, root);
                for k in 1..=kmax {
                    let w = delta_apply(m1, m2, Side::F, root, k, &u);
                    if w.is_empty() {
                        continue;
                    }
                    let before = self.counts();
                    if self.insert(&w) {
                        queue.extend(self.vectors_since(&before));
                    }
                }
            }
        }
    }
}

/// `VV_n(lambda, mu) = span{(F^s ⊗ 1) Delta F^t (v ⊗ w) : deg s <= n}` for all `n`.
pub struct InducedFiltration<'s, 'a, F: Field> {
    space: &'s TensorSpace<'a, F>,
    all: GradedSubspace<'s, 'a, F>,
    /// per level, per weight group: rank of `VV_n` there
    level_counts: Vec<Vec<usize>>,
}

/// Graded dimensions of the induced filtration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InducedFiltrationTable {
    pub lambda: Weight,
    pub mu: Weight,
    /// `0` over the rationals
    pub p: u64,
    /// `levels[n] = dim VV_n`
    pub levels: Vec<usize>,
    pub full_dim: usize,
}

impl InducedFiltrationTable {
    pub fn graded(&self) -> Vec<usize> {
        let mut prev = 0;
        self.levels
            .iter()
            .map(|&d| {
                let g = d - prev;
                prev = d;
                g
            })
            .collect()
    }

    pub fn level(&self, n: usize) -> usize {
        *self
            .levels
            .get(n)
            .unwrap_or(self.levels.last().expect("nonempty"))
    }
}

fn check_tensor_cap<F: Field>(m1: &WeightModule<F>, m2: &WeightModule<F>, cap: u128) -> Result<()> {
    let need = m1.dim() as u128 * m2.dim() as u128;
    if need > cap {
        return Err(Error::ResourceCap {
            what: "tensor product".into(),
            required: need,
            cap,
        });
    }
    Ok(())
}

impl<'s, 'a, F: Field> InducedFiltration<'s, 'a, F> {
    /// Builds every level up to the F-depth of the first factor, beyond which
    /// `F^s ⊗ 1` with `deg s` larger acts by zero.
    pub fn compute(space: &'s TensorSpace<'a, F>, cap: u128) -> Result<Self> {
        let (m1, m2) = (space.m1, space.m2);
        check_tensor_cap(m1, m2, cap)?;
        let f = m1.field();
        let rs = m1.root_system();
        let n_roots = rs.num_positive();
        let hw = tensor_basis(
            m1.highest_vector_index().expect("highest-weight module"),
            m2.highest_vector_index().expect("highest-weight module"),
            f.one(),
        );
        let mut all = GradedSubspace::new(space);
        all.insert(&hw);
        all.close_under_delta_f();
        let mut level_counts = vec![all.counts()];
        // vectors added at each level
        let mut fresh: Vec<Vec<TensorVec<F::Elem>>> =
            vec![all.vectors_since(&vec![0; space.num_groups()])];
        let depth = rs.depth(m1.highest_weight()).max(0) as usize;
        for n in 1..=depth {
            let before = all.counts();
            for k in 1..=n {
                for root in 0..n_roots {
                    if k > m1.max_power(Side::F, root) {
                        continue;
                    }
                    let mono = HyperMonomial::single(Side::F, n_roots, root, k as u32);
                    for u in &fresh[n - k] {
                        let w = act_left(m1, &mono, u);
                        all.insert(&w);
                    }
                }
            }
            fresh.push(all.vectors_since(&before));
            level_counts.push(all.counts());
        }
        Ok(InducedFiltration {
            space,
            all,
            level_counts,
        })
    }

    pub fn space(&self) -> &TensorSpace<'a, F> {
        self.space
    }

    pub fn num_levels(&self) -> usize {
        self.level_counts.len()
    }

    pub fn level_dim(&self, n: usize) -> usize {
        let n = n.min(self.level_counts.len() - 1);
        self.level_counts[n].iter().sum()
    }

    /// Whether `v` lies in `VV_n`.
    pub fn contains(&self, n: usize, v: &TensorVec<F::Elem>) -> bool {
        let n = n.min(self.level_counts.len() - 1);
        self.all.contains_prefix(v, &self.level_counts[n])
    }

    /// Smallest `n` with `v` in `VV_n`; `None` if `v` is outside the whole filtration.
    pub fn level_of(&self, v: &TensorVec<F::Elem>) -> Option<usize> {
        (0..self.level_counts.len()).find(|&n| self.contains(n, v))
    }

    /// Basis of `VV_n`.
    pub fn basis(&self, n: usize) -> Vec<TensorVec<F::Elem>> {
        let n = n.min(self.level_counts.len() - 1);
        let mut out = Vec::new();
        for (g, part) in self.all.parts.iter().enumerate() {
            for row in part.basis().take(self.level_counts[n][g]) {
                out.push(self.space.from_dense(g, row));
            }
        }
        out
    }

    pub fn table(&self) -> InducedFiltrationTable {
        let m1 = self.space.m1;
        InducedFiltrationTable {
            lambda: m1.highest_weight().clone(),
            mu: self.space.m2.highest_weight().clone(),
            p: m1.field().characteristic(),
            levels: (0..self.num_levels()).map(|n| self.level_dim(n)).collect(),
            full_dim: self.space.dim(),
        }
    }
}

pub fn induced_filtration<F: Field>(
    m1: &WeightModule<F>,
    m2: &WeightModule<F>,
    cap: u128,
) -> Result<InducedFiltrationTable> {
    let space = TensorSpace::new(m1, m2);
    Ok(InducedFiltration::compute(&space, cap)?.table())
}

/// `(A ⊗ 1) · Delta X`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmashOperator {
    pub a: HyperMonomial,
    pub x: HyperMonomial,
}

impl SmashOperator {
    pub fn apply<F: Field>(
        &self,
        m1: &WeightModule<F>,
        m2: &WeightModule<F>,
        v: &TensorVec<F::Elem>,
    ) -> Result<TensorVec<F::Elem>> {
        Ok(act_left(m1, &self.a, &tensor_act(m1, m2, &self.x, v)?))
    }
}

/// Per-level comparison of `Delta U · (U_n ⊗ 1) v` with `(U_n ⊗ 1) · Delta U v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductOrderReport {
    /// `(n, dim of the first span, dim of the second span)`
    pub levels: Vec<(usize, usize, usize)>,
    pub equal: bool,
}

/// Both descriptions of the filtration, level by level up to `n`.
pub fn product_order_equality<F: Field>(
    m1: &WeightModule<F>,
    m2: &WeightModule<F>,
    n: usize,
    cap: u128,
) -> Result<ProductOrderReport> {
    let space = TensorSpace::new(m1, m2);
    let filt = InducedFiltration::compute(&space, cap)?;
    let f = m1.field();
    let w_hw = m2.highest_vector_index().expect("highest-weight module");
    let ess = essential_set(m1, None);
    let mut eval = MonomialEvaluator::new(m1);
    let mut levels = Vec::new();
    let mut equal = true;
    for level in 0..=n {
        // Delta-closure of V_n(lambda) ⊗ w
        let mut left = GradedSubspace::new(&space);
        for s in ess.iter().filter(|s| s.degree() as usize <= level) {
            let x = eval.eval_global(s);
            let mut v = TensorVec::new();
            for (a, c) in x.into_iter().enumerate() {
                if !f.is_zero(&c) {
                    v.insert((a, w_hw), c);
                }
            }
            left.insert(&v);
        }
        left.close_under_delta_f();
        let right = filt.basis(level);
        let same = left.dim() == right.len() && right.iter().all(|v| left.contains(v));
        equal &= same;
        levels.push((level, left.dim(), right.len()));
    }
    Ok(ProductOrderReport { levels, equal })
}

/// The graded map `gr V(lambda) ⊗ chi_mu -> gr(V(lambda) ⊗ V(mu))` induced by `x -> x ⊗ w`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonReport {
    /// `V_n(lambda) ⊗ w` lies in `VV_n` for every `n`
    pub filtration_preserving: bool,
    /// per degree: `(n, dim gr_n V(lambda), kernel dimension)`
    pub kernels: Vec<(usize, usize, usize)>,
}

impl ComparisonReport {
    pub fn injective(&self) -> bool {
        self.kernels.iter().all(|k| k.2 == 0)
    }
}

pub fn comparison_map_check<F: Field>(
    m1: &WeightModule<F>,
    m2: &WeightModule<F>,
    cap: u128,
) -> Result<ComparisonReport> {
    let space = TensorSpace::new(m1, m2);
    let filt = InducedFiltration::compute(&space, cap)?;
    let f = m1.field();
    let w_hw = m2.highest_vector_index().expect("highest-weight module");
    let ess = essential_set(m1, None);
    let mut eval = MonomialEvaluator::new(m1);
    let top = ess.iter().map(|s| s.degree()).max().unwrap_or(0) as usize;
    let mut preserving = true;
    let mut kernels = Vec::new();
    for n in 0..=top {
        let mut sub = GradedSubspace::new(&space);
        if n > 0 {
            for v in filt.basis(n - 1) {
                sub.insert(&v);
            }
        }
        let base = sub.dim();
        let mut graded = 0;
        for s in ess.of_degree(n as u64) {
            graded += 1;
            let x = eval.eval_global(s);
            let mut v = TensorVec::new();
            for (a, c) in x.into_iter().enumerate() {
                if !f.is_zero(&c) {
                    v.insert((a, w_hw), c);
                }
            }
            preserving &= filt.contains(n, &v);
            sub.insert(&v);
        }
        kernels.push((n, graded, graded - (sub.dim() - base)));
    }
    Ok(ComparisonReport {
        filtration_preserving: preserving,
        kernels,
    })
}

/// `dim HH^n = dim V(lambda*) ⊗ V(mu*) - dim VV_{n-1}(lambda*, mu*)`; the modules
/// passed in are `V(lambda*)` and `V(mu*)`.
pub fn dual_filtration_dims<F: Field>(
    m1_star: &WeightModule<F>,
    m2_star: &WeightModule<F>,
    n: usize,
    cap: u128,
) -> Result<usize> {
    let table = induced_filtration(m1_star, m2_star, cap)?;
    Ok(if n == 0 {
        table.full_dim
    } else {
        table.full_dim - table.level(n - 1)
    })
}
