//! Chevalley basis of the Lie algebra and its integral structure constants.
//!
//! Brackets are read off a faithful representation built with the
//! characteristic-zero construction: one smallest fundamental weight per
//! connected component of the Dynkin diagram, summed.

use num_rational::BigRational;
use num_traits::Zero;

use crate::charzero::construct::{construct, root_generators};
use crate::error::{Error, Result};
use crate::field::{as_integer, Field, Rationals};
use crate::linalg::{solve_columns, Matrix};
use crate::module::{GradedOp, Layout};
use crate::rootsys::{RootSystem, Weight};

/// Tag identifying the sign convention of the Chevalley basis; part of every cache key.
pub const SIGN_CONVENTION: &str = "simple-bracket-least-index-v1";

/// An element of the Chevalley basis `E_beta, H_i, F_beta`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasisElement {
    E(usize),
    H(usize),
    F(usize),
}

/// Structure constants in the ordered basis `E_{beta_1..beta_N}, H_1..H_r, F_{beta_1..beta_N}`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ChevalleyData {
    n: usize,
    rank: usize,
    /// `bracket[a][b]` = coordinates of `[x_a, x_b]`
    bracket: Vec<Vec<Vec<i64>>>,
}

impl ChevalleyData {
    pub fn dim(&self) -> usize {
        2 * self.n + self.rank
    }

    pub fn index(&self, x: BasisElement) -> usize {
        match x {
            BasisElement::E(k) => k,
            BasisElement::H(i) => self.n + i,
            BasisElement::F(k) => self.n + self.rank + k,
        }
    }

    pub fn element(&self, a: usize) -> BasisElement {
        if a < self.n {
            BasisElement::E(a)
        } else if a < self.n + self.rank {
            BasisElement::H(a - self.n)
        } else {
            BasisElement::F(a - self.n - self.rank)
        }
    }

    /// Coordinates of `[x, y]`.
    pub fn bracket(&self, x: BasisElement, y: BasisElement) -> &[i64] {
        &self.bracket[self.index(x)][self.index(y)]
    }

    /// The scalar `c` with `[x, y] = c z` when `[x, y]` is a multiple of a single basis element `z`.
    pub fn structure_constant(&self, x: BasisElement, y: BasisElement, z: BasisElement) -> i64 {
        self.bracket(x, y)[self.index(z)]
    }

    /// Matrix of `ad(x)` on the ordered basis; column `b` holds `[x, x_b]`.
    pub fn ad(&self, x: BasisElement) -> Matrix<i64> {
        let a = self.index(x);
        let d = self.dim();
        let mut m = Matrix::filled(d, d, 0i64);
        for b in 0..d {
            for (r, &v) in self.bracket[a][b].iter().enumerate() {
                m.set(r, b, v);
            }
        }
        m
    }

    pub fn ad_e(&self, k: usize) -> Matrix<i64> {
        self.ad(BasisElement::E(k))
    }

    pub fn ad_f(&self, k: usize) -> Matrix<i64> {
        self.ad(BasisElement::F(k))
    }

    pub fn ad_h(&self, i: usize) -> Matrix<i64> {
        self.ad(BasisElement::H(i))
    }

    /// Largest absolute value among all structure constants.
    pub fn max_abs_constant(&self) -> i64 {
        self.bracket
            .iter()
            .flatten()
            .flatten()
            .map(|v| v.abs())
            .max()
            .unwrap_or(0)
    }

    /// Checks `[x,[y,z]] + [y,[z,x]] + [z,[x,y]] = 0` for all basis triples.
    pub fn jacobi_holds(&self) -> bool {
        let d = self.dim();
        // [x_a, u] for a general element u
        let ad = |a: usize, u: &[i64], out: &mut [i64]| {
            for (b, &c) in u.iter().enumerate() {
                if c != 0 {
                    for (r, &v) in self.bracket[a][b].iter().enumerate() {
                        out[r] += c * v;
                    }
                }
            }
        };
        for x in 0..d {
            for y in 0..d {
                for z in 0..d {
                    let mut acc = vec![0i64; d];
                    ad(x, &self.bracket[y][z], &mut acc);
                    ad(y, &self.bracket[z][x], &mut acc);
                    ad(z, &self.bracket[x][y], &mut acc);
                    if acc.iter().any(|&v| v != 0) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

fn components(rs: &RootSystem) -> Vec<Vec<usize>> {
    let r = rs.rank();
    let mut seen = vec![false; r];
    let mut out = Vec::new();
    for s in 0..r {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut k = 0;
        while k < comp.len() {
            let i = comp[k];
            for j in 0..r {
                if !seen[j] && rs.cartan().entry(i, j) != 0 {
                    seen[j] = true;
                    comp.push(j);
                }
            }
            k += 1;
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

pub(crate) fn compute(rs: &RootSystem) -> Result<ChevalleyData> {
    let q = Rationals;
    let r = rs.rank();
    let n = rs.num_positive();

    let mut lambda = Weight::zero(r);
    for comp in components(rs) {
        let best = comp
            .iter()
            .copied()
            .min_by_key(|&j| rs.weyl_dimension(&Weight::fundamental(r, j)))
            .expect("nonempty component");
        lambda.0[best] = 1;
    }
    let c = construct(rs, &lambda);
    let layout = &c.layout;
    let (e, f) = root_generators(rs, &c);
    let h: Vec<GradedOp<BigRational>> = (0..r)
        .map(|i| {
            let mut op = GradedOp::zero(layout);
            for w in 0..layout.num_weights() {
                let d = layout.dim_at(w);
                let s = q.from_i64(layout.weight(w).0[i]);
                op.set_block(
                    w,
                    w,
                    crate::linalg::mat_scale(&q, &crate::linalg::identity(&q, d), &s),
                );
            }
            op.pruned(&q)
        })
        .collect();

    let dim = 2 * n + r;
    let mut ops: Vec<&GradedOp<BigRational>> = Vec::with_capacity(dim);
    let mut grading: Vec<Vec<i64>> = Vec::with_capacity(dim);
    for (k, op) in e.iter().enumerate() {
        ops.push(op);
        grading.push(rs.root(k).coords.clone());
    }
    for op in &h {
        ops.push(op);
        grading.push(vec![0; r]);
    }
    for (k, op) in f.iter().enumerate() {
        ops.push(op);
        grading.push(rs.root(k).coords.iter().map(|c| -c).collect());
    }

    let mut bracket = vec![vec![vec![0i64; dim]; dim]; dim];
    for a in 0..dim {
        for b in 0..dim {
            let res = ops[a].bracket(&q, ops[b]);
            let s: Vec<i64> = grading[a]
                .iter()
                .zip(&grading[b])
                .map(|(x, y)| x + y)
                .collect();
            let coords = express(rs, layout, &res, &s, &ops, n).ok_or_else(|| {
                Error::InvalidCartan(format!(
                    "bracket of basis elements {a},{b} is not in the span"
                ))
            })?;
            for (t, v) in coords {
                let v = as_integer(&v)
                    .and_then(|i| i64::try_from(i).ok())
                    .ok_or_else(|| {
                        Error::NotIntegral(format!("structure constant of [{a},{b}] is {v}"))
                    })?;
                bracket[a][b][t] = v;
            }
        }
    }

    let data = ChevalleyData {
        n,
        rank: r,
        bracket,
    };
    for k in 0..n {
        let got = data.bracket(BasisElement::E(k), BasisElement::F(k));
        let coroot = rs.coroot(k);
        let expected: Vec<i64> = (0..dim)
            .map(|t| {
                if (n..n + r).contains(&t) {
                    coroot[t - n]
                } else {
                    0
                }
            })
            .collect();
        if got != expected.as_slice() {
            return Err(Error::InvalidCartan(format!(
                "[E, F] for root {k} is not its coroot"
            )));
        }
    }
    Ok(data)
}

/// Coordinates of `res` (of root-lattice degree `s`) in the Chevalley basis.
fn express(
    rs: &RootSystem,
    layout: &Layout,
    res: &GradedOp<BigRational>,
    s: &[i64],
    ops: &[&GradedOp<BigRational>],
    n: usize,
) -> Option<Vec<(usize, BigRational)>> {
    let q = Rationals;
    let r = rs.rank();
    if res.is_zero(&q) {
        return Some(Vec::new());
    }
    if s.iter().all(|&x| x == 0) {
        // diagonal: solve sum_i h_i mu_i = c_mu over the weights
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for w in 0..layout.num_weights() {
            let c = match res.block(w) {
                Some((t, m)) => {
                    if *t != w {
                        return None;
                    }
                    m.get(0, 0).clone()
                }
                None => BigRational::zero(),
            };
            rows.extend(layout.weight(w).0.iter().map(|&x| q.from_i64(x)));
            rhs.push(c);
        }
        let a = Matrix::from_vec(layout.num_weights(), r, rows);
        let hcoef = solve_columns(&q, &a, &rhs)?;
        let mut check = GradedOp::zero(layout);
        let mut out = Vec::new();
        for (i, c) in hcoef.into_iter().enumerate() {
            if !c.is_zero() {
                check = check.add(&q, &ops[n + i].scale(&q, &c));
                out.push((n + i, c));
            }
        }
        return check.equals(&q, res).then_some(out);
    }
    let (target, _) = if let Some(k) = rs.root_index(s) {
        (k, ())
    } else {
        let neg: Vec<i64> = s.iter().map(|x| -x).collect();
        (n + r + rs.root_index(&neg)?, ())
    };
    let t = ops[target];
    let (src, (_, tm)) = t
        .blocks()
        .iter()
        .enumerate()
        .find_map(|(i, b)| b.as_ref().map(|x| (i, x)))?;
    let (row, col) = (0..tm.rows())
        .flat_map(|a| (0..tm.cols()).map(move |b| (a, b)))
        .find(|&(a, b)| !tm.get(a, b).is_zero())?;
    let got = match res.block(src) {
        Some((_, m)) => m.get(row, col).clone(),
        None => BigRational::zero(),
    };
    let coef = got / tm.get(row, col);
    t.scale(&q, &coef)
        .equals(&q, res)
        .then(|| vec![(target, coef)])
}
