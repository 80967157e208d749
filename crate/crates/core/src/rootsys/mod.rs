//! Root systems of finite type: positive roots in a fixed order, coroot
//! pairings, the `-w_0` involution, Weyl dimensions and a Chevalley basis.

mod cartan;
mod chevalley;

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

pub use cartan::CartanData;
pub use chevalley::{BasisElement, ChevalleyData, SIGN_CONVENTION};

use crate::error::{Error, Result};

/// Default bound on the rank accepted by [`RootSystem::build`].
pub const DEFAULT_RANK_CAP: usize = 4;

/// A weight in the basis of fundamental weights.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    pub fn fundamental(rank: usize, i: usize) -> Self {
        let mut w = vec![0; rank];
        w[i] = 1;
        Weight(w)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> Weight {
        Weight(self.0.iter().map(|a| a * k).collect())
    }

    pub fn neg(&self) -> Weight {
        self.scale(-1)
    }

    /// Parses a comma-separated list of integers such as `"1,0"`.
    pub fn parse(s: &str) -> Result<Weight> {
        let coords = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::Parse(format!("bad weight coordinate {t:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Weight(coords))
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A positive root in the basis of simple roots.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Root {
    pub coords: Vec<i64>,
    pub height: i64,
}

impl Root {
    fn new(coords: Vec<i64>) -> Self {
        let height = coords.iter().sum();
        Root { coords, height }
    }
}

/// How a non-simple positive root `beta` is split as `alpha_i + gamma`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    /// simple root index `i`
    pub simple: usize,
    /// position of `gamma = beta - alpha_i` in the root order
    pub rest: usize,
    /// `r + 1`, where `r` is the largest integer with `gamma - r alpha_i` a root
    pub factor: i64,
}

#[derive(Clone, Debug)]
pub struct RootSystem {
    cartan: CartanData,
    symmetrizer: Vec<i64>,
    roots: Vec<Root>,
    root_weights: Vec<Weight>,
    coroots: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, usize>,
    simple_positions: Vec<usize>,
    decompositions: Vec<Option<Decomposition>>,
    chevalley: ChevalleyData,
}

impl RootSystem {
    pub fn build(cartan: CartanData) -> Result<Self> {
        Self::build_with_cap(cartan, DEFAULT_RANK_CAP)
    }

    pub fn from_label(label: &str) -> Result<Self> {
        Self::build(CartanData::from_label(label)?)
    }

    pub fn build_with_cap(cartan: CartanData, rank_cap: usize) -> Result<Self> {
        let symmetrizer = cartan.validate()?;
        let rank = cartan.rank();
        if rank > rank_cap {
            return Err(Error::RankTooLarge {
                rank,
                bound: rank_cap,
            });
        }
        let mut coords = close_roots(&cartan);
        coords.sort_by(|a, b| root_order(a, b));
        let roots: Vec<Root> = coords.into_iter().map(Root::new).collect();
        let index: HashMap<Vec<i64>, usize> = roots
            .iter()
            .enumerate()
            .map(|(k, r)| (r.coords.clone(), k))
            .collect();

        let root_weights = roots
            .iter()
            .map(|r| simple_to_weight(&cartan, &r.coords))
            .collect();
        let coroots = roots
            .iter()
            .map(|r| coroot_coords(&cartan, &symmetrizer, &r.coords))
            .collect();
        let simple_positions = (0..rank)
            .map(|i| {
                let mut e = vec![0; rank];
                e[i] = 1;
                index[&e]
            })
            .collect();

        let mut rs = RootSystem {
            cartan,
            symmetrizer,
            roots,
            root_weights,
            coroots,
            index,
            simple_positions,
            decompositions: Vec::new(),
            chevalley: ChevalleyData::default(),
        };
        rs.decompositions = (0..rs.roots.len()).map(|k| rs.decompose(k)).collect();
        rs.chevalley = chevalley::compute(&rs)?;
        Ok(rs)
    }

    fn decompose(&self, k: usize) -> Option<Decomposition> {
        let beta = &self.roots[k].coords;
        if self.roots[k].height == 1 {
            return None;
        }
        for i in 0..self.rank() {
            let mut gamma = beta.clone();
            gamma[i] -= 1;
            if let Some(&rest) = self.index.get(&gamma) {
                let mut r = 0;
                let mut g = gamma.clone();
                loop {
                    g[i] -= 1;
                    if self.index.contains_key(&g) {
                        r += 1;
                    } else {
                        break;
                    }
                }
                return Some(Decomposition {
                    simple: i,
                    rest,
                    factor: r + 1,
                });
            }
        }
        unreachable!("every non-simple positive root has a simple predecessor")
    }

    pub fn cartan(&self) -> &CartanData {
        &self.cartan
    }

    pub fn label(&self) -> Option<&str> {
        self.cartan.label.as_deref()
    }

    /// Display name: the label when present, otherwise `"custom"`.
    pub fn name(&self) -> String {
        self.label().unwrap_or("custom").to_string()
    }

    pub fn is_g2(&self) -> bool {
        self.cartan.matrix == CartanData::from_label("G2").expect("G2 label").matrix
    }

    pub fn rank(&self) -> usize {
        self.cartan.rank()
    }

    /// Number `N` of positive roots.
    pub fn num_positive(&self) -> usize {
        self.roots.len()
    }

    pub fn symmetrizer(&self) -> &[i64] {
        &self.symmetrizer
    }

    /// Positive roots `beta_1, ..., beta_N` in the fixed order.
    pub fn positive_roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn root(&self, k: usize) -> &Root {
        &self.roots[k]
    }

    /// The root `beta_k` written in fundamental-weight coordinates.
    pub fn root_weight(&self, k: usize) -> &Weight {
        &self.root_weights[k]
    }

    /// The coroot `beta_k^vee` in the basis of simple coroots.
    pub fn coroot(&self, k: usize) -> &[i64] {
        &self.coroots[k]
    }

    pub fn root_index(&self, coords: &[i64]) -> Option<usize> {
        self.index.get(coords).copied()
    }

    /// Position of the simple root `alpha_i` in the root order.
    pub fn simple_position(&self, i: usize) -> usize {
        self.simple_positions[i]
    }

    pub fn decomposition(&self, k: usize) -> Option<Decomposition> {
        self.decompositions[k]
    }

    pub fn chevalley(&self) -> &ChevalleyData {
        &self.chevalley
    }

    pub fn check_weight(&self, w: &Weight) -> Result<()> {
        if w.rank() != self.rank() {
            return Err(Error::WeightRank {
                got: w.rank(),
                rank: self.rank(),
            });
        }
        Ok(())
    }

    pub fn check_dominant(&self, w: &Weight) -> Result<()> {
        self.check_weight(w)?;
        if !w.is_dominant() {
            return Err(Error::NotDominant(w.0.clone()));
        }
        Ok(())
    }

    /// `alpha_i` in fundamental-weight coordinates (column `i` of the Cartan matrix).
    pub fn simple_root_weight(&self, i: usize) -> Weight {
        Weight((0..self.rank()).map(|r| self.cartan.entry(r, i)).collect())
    }

    /// Converts simple-root coordinates to fundamental-weight coordinates.
    pub fn root_coords_to_weight(&self, coords: &[i64]) -> Weight {
        simple_to_weight(&self.cartan, coords)
    }

    /// Expresses a weight in simple-root coordinates, if it lies in the root lattice.
    pub fn weight_to_root_coords(&self, w: &Weight) -> Option<Vec<i64>> {
        use crate::field::{Field, Rationals};
        use crate::linalg::{solve_columns, Matrix};
        let q = Rationals;
        let n = self.rank();
        let a = Matrix::from_vec(
            n,
            n,
            self.cartan
                .matrix
                .iter()
                .flatten()
                .map(|&x| q.from_i64(x))
                .collect(),
        );
        let b: Vec<_> = w.0.iter().map(|&x| q.from_i64(x)).collect();
        let x = solve_columns(&q, &a, &b).expect("Cartan matrix is invertible");
        x.iter()
            .map(|c| crate::field::as_integer(c).and_then(|i| i64::try_from(i).ok()))
            .collect()
    }

    pub fn rho(&self) -> Weight {
        Weight(vec![1; self.rank()])
    }

    /// `<lambda, beta_k^vee>`.
    pub fn pairing(&self, lambda: &Weight, k: usize) -> i64 {
        lambda
            .0
            .iter()
            .zip(&self.coroots[k])
            .map(|(a, b)| a * b)
            .sum()
    }

    /// Simple reflection `s_i` on weights.
    pub fn reflect(&self, w: &Weight, i: usize) -> Weight {
        let c = w.0[i];
        Weight(
            (0..self.rank())
                .map(|r| w.0[r] - c * self.cartan.entry(r, i))
                .collect(),
        )
    }

    /// The dominant representative of the Weyl orbit of `w`.
    pub fn dominant_conjugate(&self, w: &Weight) -> Weight {
        let mut cur = w.clone();
        while let Some(i) = (0..self.rank()).find(|&i| cur.0[i] < 0) {
            cur = self.reflect(&cur, i);
        }
        cur
    }

    /// `lambda^* = -w_0 lambda`.
    pub fn star(&self, lambda: &Weight) -> Weight {
        self.dominant_conjugate(&lambda.neg())
    }

    /// `nu <= mu` in the dominance order: `mu - nu` is a non-negative sum of simple roots.
    pub fn dominance_le(&self, nu: &Weight, mu: &Weight) -> bool {
        match self.weight_to_root_coords(&mu.sub(nu)) {
            Some(c) => c.iter().all(|&x| x >= 0),
            None => false,
        }
    }

    /// Dimension of the simple characteristic-zero module with highest weight `lambda`.
    pub fn weyl_dimension(&self, lambda: &Weight) -> BigInt {
        let shifted = lambda.add(&self.rho());
        let rho = self.rho();
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for k in 0..self.num_positive() {
            num *= self.pairing(&shifted, k);
            den *= self.pairing(&rho, k);
        }
        num / den
    }

    /// Largest `d` such that `lambda - d beta_k` can be a weight of `V(lambda)` for some chain; an
    /// upper bound on the nonzero divided powers of `F_beta` on any vector.
    pub fn depth(&self, lambda: &Weight) -> i64 {
        // height of lambda - w_0 lambda = lambda + lambda^*
        let total = lambda.add(&self.star(lambda));
        self.weight_to_root_coords(&total)
            .map(|c| c.iter().sum())
            .unwrap_or(0)
    }
}

fn simple_to_weight(cartan: &CartanData, coords: &[i64]) -> Weight {
    let n = cartan.rank();
    Weight(
        (0..n)
            .map(|r| (0..n).map(|j| cartan.entry(r, j) * coords[j]).sum())
            .collect(),
    )
}

fn coroot_coords(cartan: &CartanData, d: &[i64], coords: &[i64]) -> Vec<i64> {
    let n = cartan.rank();
    // (beta, beta) with (alpha_i, alpha_j) = d_i a_ij
    let mut norm = 0;
    for i in 0..n {
        for j in 0..n {
            norm += coords[i] * coords[j] * d[i] * cartan.entry(i, j);
        }
    }
    (0..n)
        .map(|i| {
            let num = 2 * coords[i] * d[i];
            assert_eq!(num % norm, 0, "coroot coordinates are integral");
            num / norm
        })
        .collect()
}

/// Positive roots by repeated root-string extension from the simple roots.
fn close_roots(cartan: &CartanData) -> Vec<Vec<i64>> {
    let n = cartan.rank();
    let mut all: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut e = vec![0; n];
            e[i] = 1;
            e
        })
        .collect();
    let mut seen: std::collections::HashSet<Vec<i64>> = all.iter().cloned().collect();
    let mut layer = all.clone();
    while !layer.is_empty() {
        let mut next = Vec::new();
        for beta in &layer {
            for i in 0..n {
                // <beta, alpha_i^vee>
                let pair: i64 = (0..n).map(|j| cartan.entry(i, j) * beta[j]).sum();
                let mut r = 0;
                let mut g = beta.clone();
                loop {
                    g[i] -= 1;
                    if seen.contains(&g) {
                        r += 1;
                    } else {
                        break;
                    }
                }
                if r - pair > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if seen.insert(up.clone()) {
                        next.push(up);
                    }
                }
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    all
}

/// Height decreasing; ties broken by comparing the last coordinate first, larger first.
fn root_order(a: &[i64], b: &[i64]) -> std::cmp::Ordering {
    let ha: i64 = a.iter().sum();
    let hb: i64 = b.iter().sum();
    hb.cmp(&ha).then_with(|| b.iter().rev().cmp(a.iter().rev()))
}
