//! Weight-graded modules with divided-power generator operators.

use std::collections::HashMap;
use std::ops::Range;
use std::sync::Arc;

use crate::field::Field;
use crate::linalg::{is_zero_matrix, mat_add, mat_mul, mat_scale, mat_sub, mat_vec, zeros, Matrix};
use crate::rootsys::{RootSystem, Weight};

/// Weights of a module, their multiplicities and the resulting basis offsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layout {
    weights: Vec<Weight>,
    dims: Vec<usize>,
    offsets: Vec<usize>,
    total: usize,
    index: HashMap<Weight, usize>,
}

impl Layout {
    pub fn new(entries: Vec<(Weight, usize)>) -> Self {
        let mut weights = Vec::with_capacity(entries.len());
        let mut dims = Vec::with_capacity(entries.len());
        let mut offsets = Vec::with_capacity(entries.len());
        let mut total = 0;
        let mut index = HashMap::new();
        for (k, (w, d)) in entries.into_iter().enumerate() {
            offsets.push(total);
            total += d;
            let dup = index.insert(w.clone(), k);
            assert!(dup.is_none(), "weight {w} listed twice");
            weights.push(w);
            dims.push(d);
        }
        Layout {
            weights,
            dims,
            offsets,
            total,
            index,
        }
    }

    pub fn num_weights(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> &Weight {
        &self.weights[i]
    }

    pub fn dim_at(&self, i: usize) -> usize {
        self.dims[i]
    }

    pub fn total_dim(&self) -> usize {
        self.total
    }

    pub fn find(&self, w: &Weight) -> Option<usize> {
        self.index.get(w).copied()
    }

    /// Multiplicity of `w` (zero when it is not a weight).
    pub fn multiplicity(&self, w: &Weight) -> usize {
        self.find(w).map_or(0, |i| self.dims[i])
    }

    pub fn range(&self, i: usize) -> Range<usize> {
        self.offsets[i]..self.offsets[i] + self.dims[i]
    }

    /// Weight index of a global basis index.
    pub fn weight_of_basis(&self, b: usize) -> usize {
        assert!(b < self.total, "basis index out of range");
        self.offsets.partition_point(|&o| o <= b) - 1
    }

    /// Same weights negated, same basis order.
    pub fn negated(&self) -> Layout {
        Layout::new(
            self.weights
                .iter()
                .map(|w| w.neg())
                .zip(self.dims.iter().copied())
                .collect(),
        )
    }
}

/// A linear operator that maps each weight space into a single weight space.
///
/// `blocks[i]` is `Some((j, M))` when the operator sends weight `i` into weight
/// `j` by the matrix `M`; absent blocks are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedOp<E> {
    blocks: Vec<Option<(usize, Matrix<E>)>>,
}

impl<E: Clone> GradedOp<E> {
    pub fn zero(layout: &Layout) -> Self {
        GradedOp {
            blocks: vec![None; layout.num_weights()],
        }
    }

    pub fn from_blocks(blocks: Vec<Option<(usize, Matrix<E>)>>) -> Self {
        GradedOp { blocks }
    }

    pub fn block(&self, src: usize) -> Option<&(usize, Matrix<E>)> {
        self.blocks[src].as_ref()
    }

    pub fn blocks(&self) -> &[Option<(usize, Matrix<E>)>] {
        &self.blocks
    }

    pub fn set_block(&mut self, src: usize, tgt: usize, m: Matrix<E>) {
        self.blocks[src] = Some((tgt, m));
    }

    pub fn map<T: Clone>(&self, f: impl Fn(&E) -> T) -> GradedOp<T> {
        GradedOp {
            blocks: self
                .blocks
                .iter()
                .map(|b| b.as_ref().map(|(t, m)| (*t, m.map(&f))))
                .collect(),
        }
    }
}

impl<E: Clone + PartialEq> GradedOp<E> {
    pub fn identity<F: Field<Elem = E>>(f: &F, layout: &Layout) -> Self {
        GradedOp {
            blocks: (0..layout.num_weights())
                .map(|i| Some((i, crate::linalg::identity(f, layout.dim_at(i)))))
                .collect(),
        }
    }

    /// Drops blocks that are identically zero.
    pub fn pruned<F: Field<Elem = E>>(mut self, f: &F) -> Self {
        for b in self.blocks.iter_mut() {
            if matches!(b, Some((_, m)) if is_zero_matrix(f, m)) {
                *b = None;
            }
        }
        self
    }

    pub fn is_zero<F: Field<Elem = E>>(&self, f: &F) -> bool {
        self.blocks
            .iter()
            .all(|b| b.as_ref().map_or(true, |(_, m)| is_zero_matrix(f, m)))
    }

    /// Applies the operator to a vector of weight index `src` given in local coordinates.
    pub fn apply_local<F: Field<Elem = E>>(
        &self,
        f: &F,
        src: usize,
        x: &[E],
    ) -> Option<(usize, Vec<E>)> {
        self.blocks[src]
            .as_ref()
            .map(|(t, m)| (*t, mat_vec(f, m, x)))
    }

    /// Applies the operator to a global coordinate vector.
    pub fn apply<F: Field<Elem = E>>(&self, f: &F, layout: &Layout, x: &[E]) -> Vec<E> {
        let mut out = vec![f.zero(); layout.total_dim()];
        for (src, b) in self.blocks.iter().enumerate() {
            let Some((tgt, m)) = b else { continue };
            let xs = &x[layout.range(src)];
            if xs.iter().all(|v| f.is_zero(v)) {
                continue;
            }
            let y = mat_vec(f, m, xs);
            for (o, v) in out[layout.range(*tgt)].iter_mut().zip(y) {
                f.add_assign(o, &v);
            }
        }
        out
    }

    /// `self * other` (apply `other` first).
    pub fn compose<F: Field<Elem = E>>(&self, f: &F, other: &GradedOp<E>) -> GradedOp<E> {
        let blocks = other
            .blocks
            .iter()
            .map(|b| {
                let (mid, m1) = b.as_ref()?;
                let (tgt, m2) = self.blocks[*mid].as_ref()?;
                Some((*tgt, mat_mul(f, m2, m1)))
            })
            .collect();
        GradedOp { blocks }.pruned(f)
    }

    fn combine<F: Field<Elem = E>>(
        &self,
        f: &F,
        other: &GradedOp<E>,
        op: impl Fn(&F, &Matrix<E>, &Matrix<E>) -> Matrix<E>,
        neg_other: bool,
    ) -> GradedOp<E> {
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| match (a, b) {
                (None, None) => None,
                (Some(x), None) => Some(x.clone()),
                (None, Some((t, m))) => Some((
                    *t,
                    if neg_other {
                        mat_scale(f, m, &f.neg(&f.one()))
                    } else {
                        m.clone()
                    },
                )),
                (Some((t1, m1)), Some((t2, m2))) => {
                    assert_eq!(t1, t2, "operators shift weights differently");
                    Some((*t1, op(f, m1, m2)))
                }
            })
            .collect();
        GradedOp { blocks }.pruned(f)
    }

    pub fn add<F: Field<Elem = E>>(&self, f: &F, other: &GradedOp<E>) -> GradedOp<E> {
        self.combine(f, other, mat_add, false)
    }

    pub fn sub<F: Field<Elem = E>>(&self, f: &F, other: &GradedOp<E>) -> GradedOp<E> {
        self.combine(f, other, mat_sub, true)
    }

    pub fn scale<F: Field<Elem = E>>(&self, f: &F, s: &E) -> GradedOp<E> {
        GradedOp {
            blocks: self
                .blocks
                .iter()
                .map(|b| b.as_ref().map(|(t, m)| (*t, mat_scale(f, m, s))))
                .collect(),
        }
        .pruned(f)
    }

    /// `[self, other] = self*other - other*self`.
    pub fn bracket<F: Field<Elem = E>>(&self, f: &F, other: &GradedOp<E>) -> GradedOp<E> {
        self.compose(f, other).sub(f, &other.compose(f, self))
    }

    /// Transposed operator; `block i -> j` becomes `block j -> i`.
    pub fn transpose(&self) -> GradedOp<E> {
        let mut blocks = vec![None; self.blocks.len()];
        for (src, b) in self.blocks.iter().enumerate() {
            if let Some((tgt, m)) = b {
                blocks[*tgt] = Some((src, m.transpose()));
            }
        }
        GradedOp { blocks }
    }

    /// Operator equality treating absent blocks as zero.
    pub fn equals<F: Field<Elem = E>>(&self, f: &F, other: &GradedOp<E>) -> bool {
        self.sub(f, other).is_zero(f)
    }

    pub fn to_dense<F: Field<Elem = E>>(&self, f: &F, layout: &Layout) -> Matrix<E> {
        let n = layout.total_dim();
        let mut out = zeros(f, n, n);
        for (src, b) in self.blocks.iter().enumerate() {
            let Some((tgt, m)) = b else { continue };
            let (rs, cs) = (layout.range(*tgt), layout.range(src));
            for (r, rr) in rs.clone().enumerate() {
                for (c, cc) in cs.clone().enumerate() {
                    out.set(rr, cc, m.get(r, c).clone());
                }
            }
        }
        out
    }
}

/// Raising (`E`) or lowering (`F`) generators.
#[derive(
    Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize,
)]
pub enum Side {
    E,
    F,
}

/// A module with a weight decomposition and the operators `E_beta^(k)`, `F_beta^(k)`
/// for every positive root `beta` and every `k` at which they are nonzero.
#[derive(Clone, Debug)]
pub struct WeightModule<F: Field> {
    field: F,
    rs: Arc<RootSystem>,
    layout: Arc<Layout>,
    highest: Weight,
    e_ops: Vec<Vec<GradedOp<F::Elem>>>,
    f_ops: Vec<Vec<GradedOp<F::Elem>>>,
}

impl<F: Field> WeightModule<F> {
    /// `e_ops[b][k-1]` is `E_{beta_b}^(k)`; trailing zero powers are trimmed.
    pub fn new(
        field: F,
        rs: Arc<RootSystem>,
        layout: Arc<Layout>,
        highest: Weight,
        e_ops: Vec<Vec<GradedOp<F::Elem>>>,
        f_ops: Vec<Vec<GradedOp<F::Elem>>>,
    ) -> Self {
        let trim = |ops: Vec<Vec<GradedOp<F::Elem>>>| -> Vec<Vec<GradedOp<F::Elem>>> {
            ops.into_iter()
                .map(|mut v| {
                    while v.last().is_some_and(|op| op.is_zero(&field)) {
                        v.pop();
                    }
                    v
                })
                .collect()
        };
        let e_ops = trim(e_ops);
        let f_ops = trim(f_ops);
        WeightModule {
            field,
            rs,
            layout,
            highest,
            e_ops,
            f_ops,
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn root_system(&self) -> &Arc<RootSystem> {
        &self.rs
    }

    pub fn layout(&self) -> &Arc<Layout> {
        &self.layout
    }

    pub fn dim(&self) -> usize {
        self.layout.total_dim()
    }

    /// The highest weight (for a dual module, the highest weight of the dual).
    pub fn highest_weight(&self) -> &Weight {
        &self.highest
    }

    /// Largest `k` with `X_beta^(k)` stored (zero above it).
    pub fn max_power(&self, side: Side, root: usize) -> usize {
        self.ops(side)[root].len()
    }

    fn ops(&self, side: Side) -> &Vec<Vec<GradedOp<F::Elem>>> {
        match side {
            Side::E => &self.e_ops,
            Side::F => &self.f_ops,
        }
    }

    /// `X_beta^(k)` for `k >= 1`; `None` means the operator is zero.
    pub fn op(&self, side: Side, root: usize, k: usize) -> Option<&GradedOp<F::Elem>> {
        assert!(k >= 1, "use the identity for k = 0");
        self.ops(side)[root].get(k - 1)
    }

    /// `X_beta^(k) x` for a global vector.
    pub fn apply(&self, side: Side, root: usize, k: usize, x: &[F::Elem]) -> Vec<F::Elem> {
        if k == 0 {
            return x.to_vec();
        }
        match self.op(side, root, k) {
            Some(op) => op.apply(&self.field, &self.layout, x),
            None => vec![self.field.zero(); self.dim()],
        }
    }

    /// `X_beta^(k)` on a vector of weight index `src` in local coordinates;
    /// `None` when the result is zero for structural reasons.
    pub fn apply_local(
        &self,
        side: Side,
        root: usize,
        k: usize,
        src: usize,
        x: &[F::Elem],
    ) -> Option<(usize, Vec<F::Elem>)> {
        if k == 0 {
            return Some((src, x.to_vec()));
        }
        self.op(side, root, k)?.apply_local(&self.field, src, x)
    }

    /// Weight index obtained from `src` by `X_beta^(k)`, if it is a weight.
    pub fn shifted_weight(&self, side: Side, root: usize, k: usize, src: usize) -> Option<usize> {
        let beta = self.rs.root_weight(root).scale(k as i64);
        let w = self.layout.weight(src);
        let target = match side {
            Side::E => w.add(&beta),
            Side::F => w.sub(&beta),
        };
        self.layout.find(&target)
    }

    /// Unit vector for global basis index `b`.
    pub fn unit(&self, b: usize) -> Vec<F::Elem> {
        let mut v = vec![self.field.zero(); self.dim()];
        v[b] = self.field.one();
        v
    }

    /// Global index of the highest-weight vector (the unique basis vector of the
    /// highest weight space).
    pub fn highest_vector_index(&self) -> Option<usize> {
        let i = self.layout.find(&self.highest)?;
        (self.layout.dim_at(i) == 1).then(|| self.layout.range(i).start)
    }

    /// `H_i` eigenvalue check helper: the weight of a global basis index.
    pub fn basis_weight(&self, b: usize) -> &Weight {
        self.layout.weight(self.layout.weight_of_basis(b))
    }
}

/// Builds the tower `X, X^(2), ..., X^(k)` from `X` over a field where `k!` is invertible.
pub fn divided_tower<F: Field>(
    f: &F,
    x: &GradedOp<F::Elem>,
    max_k: usize,
) -> Vec<GradedOp<F::Elem>> {
    let mut out: Vec<GradedOp<F::Elem>> = Vec::new();
    if x.is_zero(f) {
        return out;
    }
    out.push(x.clone());
    for k in 2..=max_k {
        let prev = out.last().expect("nonempty");
        let inv = f.inv(&f.from_i64(k as i64)).expect("k! invertible");
        let next = x.compose(f, prev).scale(f, &inv);
        if next.is_zero(f) {
            break;
        }
        out.push(next);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    #[test]
    fn layout_indices() {
        let l = Layout::new(vec![
            (Weight(vec![2]), 1),
            (Weight(vec![0]), 2),
            (Weight(vec![-2]), 1),
        ]);
        assert_eq!(l.total_dim(), 4);
        assert_eq!(l.weight_of_basis(0), 0);
        assert_eq!(l.weight_of_basis(2), 1);
        assert_eq!(l.weight_of_basis(3), 2);
        assert_eq!(l.range(1), 1..3);
        assert_eq!(l.multiplicity(&Weight(vec![4])), 0);
        assert_eq!(l.negated().weight(0), &Weight(vec![-2]));
    }

    #[test]
    fn compose_and_transpose() {
        let f = PrimeField::new(7).unwrap();
        let l = Layout::new(vec![(Weight(vec![1]), 1), (Weight(vec![-1]), 1)]);
        let mut down = GradedOp::zero(&l);
        down.set_block(0, 1, Matrix::from_vec(1, 1, vec![3]));
        let up = down.transpose();
        let both = up.compose(&f, &down);
        assert_eq!(both.apply(&f, &l, &[1, 0]), vec![2, 0]);
        assert!(down.compose(&f, &down).is_zero(&f));
        let br = up.bracket(&f, &down);
        assert_eq!(br.apply(&f, &l, &[1, 1]), vec![2, 5]);
    }
}
