//! Weight-by-weight construction of the simple module `V(lambda)` over Q.
//!
//! A vector of weight `mu < lambda` in the quotient of the Verma module by the
//! radical of the contravariant form is zero exactly when every `e_j` kills it.
//! So `V_mu` is spanned by the vectors `f_i u` with `u` in `V_{mu + alpha_i}`,
//! and a subset of them is a basis exactly when their images under
//! `(e_1, ..., e_r)` are linearly independent. Those images are computed from
//! already-built weight spaces via `e_j f_i u = f_i e_j u + delta_ij <mu + alpha_i, alpha_i^vee> u`.

use std::collections::{BTreeSet, HashMap};

use num_rational::BigRational;
use num_traits::Zero;

use crate::field::{Field, Rationals};
use crate::linalg::{rref, zeros, Matrix};
use crate::module::{GradedOp, Layout};
use crate::rootsys::{RootSystem, Weight};

type Q = BigRational;

pub(crate) struct Construction {
    pub layout: Layout,
    pub e_simple: Vec<GradedOp<Q>>,
    pub f_simple: Vec<GradedOp<Q>>,
    /// For each weight index, the basis vectors as `(i, b)`: `f_i` applied to
    /// local basis vector `b` of weight `mu + alpha_i`.
    pub chosen: Vec<Vec<(usize, usize)>>,
}

struct Segment {
    simple: usize,
    weight: usize,
    offset: usize,
    dim: usize,
}

pub(crate) fn construct(rs: &RootSystem, lambda: &Weight) -> Construction {
    let q = Rationals;
    let r = rs.rank();
    let cartan = rs.cartan();

    let mut kappas: Vec<Vec<i64>> = vec![vec![0; r]];
    let mut dims: Vec<usize> = vec![1];
    let mut index: HashMap<Vec<i64>, usize> = HashMap::from([(vec![0; r], 0)]);
    let mut chosen: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
    // e_blocks[j][w] = (target, matrix) for e_j on weight w, likewise for f
    let mut e_blocks: Vec<HashMap<usize, (usize, Matrix<Q>)>> = vec![HashMap::new(); r];
    let mut f_blocks: Vec<HashMap<usize, (usize, Matrix<Q>)>> = vec![HashMap::new(); r];

    let weight_of = |kappa: &[i64]| -> Weight {
        Weight(
            (0..r)
                .map(|a| lambda.0[a] - (0..r).map(|b| cartan.entry(a, b) * kappa[b]).sum::<i64>())
                .collect(),
        )
    };
    let below = |kappa: &[i64], i: usize| -> Option<Vec<i64>> {
        (kappa[i] >= 1).then(|| {
            let mut k = kappa.to_vec();
            k[i] -= 1;
            k
        })
    };

    let mut frontier = vec![0usize];
    while !frontier.is_empty() {
        let mut candidates: BTreeSet<Vec<i64>> = BTreeSet::new();
        for &w in &frontier {
            for i in 0..r {
                let mut k = kappas[w].clone();
                k[i] += 1;
                candidates.insert(k);
            }
        }
        let mut next = Vec::new();
        for kappa in candidates {
            let mu = weight_of(&kappa);

            let mut segments = Vec::new();
            let mut total = 0;
            for j in 0..r {
                if let Some(&w) = below(&kappa, j).and_then(|k| index.get(&k)) {
                    segments.push(Segment {
                        simple: j,
                        weight: w,
                        offset: total,
                        dim: dims[w],
                    });
                    total += dims[w];
                }
            }
            let cands: Vec<(usize, usize, usize)> = segments
                .iter()
                .flat_map(|s| (0..s.dim).map(move |b| (s.simple, s.weight, b)))
                .collect();
            if cands.is_empty() {
                continue;
            }

            // e-images of the candidates, one column each
            let mut img = zeros(&q, total, cands.len());
            for (c, &(i, up, b)) in cands.iter().enumerate() {
                for seg in &segments {
                    let j = seg.simple;
                    let mut val = vec![q.zero(); seg.dim];
                    if let Some((mid, e_blk)) = e_blocks[j].get(&up) {
                        let (tgt, f_blk) =
                            f_blocks[i].get(mid).expect("f_i built on the weight above");
                        debug_assert_eq!(*tgt, seg.weight);
                        let ej_u = e_blk.column(b);
                        for (row, v) in val.iter_mut().enumerate() {
                            for (col, x) in ej_u.iter().enumerate() {
                                if !x.is_zero() {
                                    q.add_mul_assign(v, f_blk.get(row, col), x);
                                }
                            }
                        }
                    }
                    if i == j {
                        let c_i = mu.0[i] + 2;
                        q.add_assign(&mut val[b], &q.from_i64(c_i));
                    }
                    for (row, v) in val.into_iter().enumerate() {
                        img.set(seg.offset + row, c, v);
                    }
                }
            }

            let mut reduced = img.clone();
            let pivots = rref(&q, &mut reduced);
            let m = pivots.len();
            if m == 0 {
                continue;
            }

            let w = kappas.len();
            kappas.push(kappa.clone());
            dims.push(m);
            index.insert(kappa, w);
            chosen.push(pivots.iter().map(|&c| (cands[c].0, cands[c].2)).collect());

            for seg in &segments {
                let mut blk = zeros(&q, seg.dim, m);
                for (col, &p) in pivots.iter().enumerate() {
                    for row in 0..seg.dim {
                        blk.set(row, col, img.get(seg.offset + row, p).clone());
                    }
                }
                e_blocks[seg.simple].insert(w, (seg.weight, blk));

                let first = cands
                    .iter()
                    .position(|&(i, up, _)| i == seg.simple && up == seg.weight)
                    .expect("segment has candidates");
                let mut fblk = zeros(&q, m, seg.dim);
                for b in 0..seg.dim {
                    for row in 0..m {
                        fblk.set(row, b, reduced.get(row, first + b).clone());
                    }
                }
                f_blocks[seg.simple].insert(seg.weight, (w, fblk));
            }
            next.push(w);
        }
        frontier = next;
    }

    let layout = Layout::new(
        kappas
            .iter()
            .map(|k| weight_of(k))
            .zip(dims.iter().copied())
            .collect(),
    );
    let to_op = |blocks: &HashMap<usize, (usize, Matrix<Q>)>| {
        let mut op = GradedOp::zero(&layout);
        for (src, (tgt, m)) in blocks {
            op.set_block(*src, *tgt, m.clone());
        }
        op.pruned(&q)
    };
    let e_simple = e_blocks.iter().map(&to_op).collect();
    let f_simple = f_blocks.iter().map(&to_op).collect();
    Construction {
        layout,
        e_simple,
        f_simple,
        chosen,
    }
}

/// Chevalley generators `E_beta`, `F_beta` for all positive roots, in root order.
///
/// `E_beta = [E_i, E_gamma] / (r + 1)` and `F_beta = -[F_i, F_gamma] / (r + 1)`
/// for the decomposition `beta = alpha_i + gamma` with least `i`.
pub(crate) fn root_generators(
    rs: &RootSystem,
    c: &Construction,
) -> (Vec<GradedOp<Q>>, Vec<GradedOp<Q>>) {
    let q = Rationals;
    let n = rs.num_positive();
    let mut e: Vec<Option<GradedOp<Q>>> = vec![None; n];
    let mut f: Vec<Option<GradedOp<Q>>> = vec![None; n];
    for i in 0..rs.rank() {
        let k = rs.simple_position(i);
        e[k] = Some(c.e_simple[i].clone());
        f[k] = Some(c.f_simple[i].clone());
    }
    // the order is height-decreasing, so walk it backwards
    for k in (0..n).rev() {
        let Some(d) = rs.decomposition(k) else {
            continue;
        };
        let inv = q
            .from_rational(&BigRational::new(1.into(), d.factor.into()))
            .expect("nonzero");
        let ei = &c.e_simple[d.simple];
        let fi = &c.f_simple[d.simple];
        let eg = e[d.rest].as_ref().expect("lower roots first");
        let fg = f[d.rest].as_ref().expect("lower roots first");
        e[k] = Some(ei.bracket(&q, eg).scale(&q, &inv));
        f[k] = Some(fi.bracket(&q, fg).scale(&q, &q.neg(&inv)));
    }
    (
        e.into_iter().map(|x| x.expect("all roots")).collect(),
        f.into_iter().map(|x| x.expect("all roots")).collect(),
    )
}
