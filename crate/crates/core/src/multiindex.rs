//! Exponent tuples over the ordered positive roots and the total order on them.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rootsys::{RootSystem, Weight};

/// `s = (s(beta_1), ..., s(beta_N))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    /// The tuple with every entry equal to `c`; `constant(N, p - 1)` is the exponent of `F_0`.
    pub fn constant(n: usize, c: u32) -> Self {
        MultiIndex(vec![c; n])
    }

    pub fn unit(n: usize, k: usize) -> Self {
        let mut v = vec![0; n];
        v[k] = 1;
        MultiIndex(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&x| x as u64).sum()
    }

    /// `sum_beta s(beta) beta` in simple-root coordinates.
    pub fn root_coords(&self, rs: &RootSystem) -> Vec<i64> {
        let mut out = vec![0i64; rs.rank()];
        for (k, &e) in self.0.iter().enumerate() {
            for (o, c) in out.iter_mut().zip(&rs.root(k).coords) {
                *o += e as i64 * c;
            }
        }
        out
    }

    /// `sum_beta s(beta) beta` in fundamental-weight coordinates: the weight of `x^s`.
    pub fn weight(&self, rs: &RootSystem) -> Weight {
        rs.root_coords_to_weight(&self.root_coords(rs))
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Parses `"0,0,1,0,1,0"`.
    pub fn parse(s: &str) -> Result<MultiIndex> {
        s.split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad exponent {t:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(MultiIndex)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Tie-break for multiindices of equal degree.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MonomialOrder {
    /// Reverse of the lexicographic order: at the first (highest-height) root where
    /// the tuples differ, the smaller exponent is higher. Higher powers of
    /// lower-height roots come out higher, and the greedy essential sets agree
    /// with the essential-set inequalities in type G2.
    #[default]
    RevLex,
    /// At the last (lowest-height) root where the tuples differ, the larger
    /// exponent is higher.
    LastIndex,
}

impl MonomialOrder {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "revlex" | "rev-lex" => Ok(MonomialOrder::RevLex),
            "last-index" => Ok(MonomialOrder::LastIndex),
            _ => Err(Error::Parse(format!("unknown monomial order {s:?}"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MonomialOrder::RevLex => "revlex",
            MonomialOrder::LastIndex => "last-index",
        }
    }

    /// Degree first, then the tie-break.
    pub fn compare(self, s: &MultiIndex, t: &MultiIndex) -> Ordering {
        assert_eq!(s.len(), t.len(), "multiindices over different root systems");
        s.degree().cmp(&t.degree()).then_with(|| match self {
            MonomialOrder::RevLex => t.0.cmp(&s.0),
            MonomialOrder::LastIndex => s.0.iter().rev().cmp(t.0.iter().rev()),
        })
    }
}

/// The total order with the default tie-break.
pub fn order_compare(s: &MultiIndex, t: &MultiIndex) -> Ordering {
    MonomialOrder::default().compare(s, t)
}

/// Newtype giving [`MultiIndex`] the default total order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ordered(pub MultiIndex);

impl PartialOrd for Ordered {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ordered {
    fn cmp(&self, other: &Self) -> Ordering {
        order_compare(&self.0, &other.0)
    }
}

/// All `s` with `sum s(beta) beta = kappa` (simple-root coordinates), optionally of a fixed degree.
pub fn kostant_partitions(rs: &RootSystem, kappa: &[i64], degree: Option<u64>) -> Vec<MultiIndex> {
    let n = rs.num_positive();
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    let mut rest = kappa.to_vec();
    if rest.iter().any(|&x| x < 0) {
        return out;
    }
    fn go(
        rs: &RootSystem,
        k: usize,
        rest: &mut Vec<i64>,
        cur: &mut Vec<u32>,
        deg: u64,
        want: Option<u64>,
        out: &mut Vec<MultiIndex>,
    ) {
        if want.is_some_and(|w| deg > w) {
            return;
        }
        if k == cur.len() {
            if rest.iter().all(|&x| x == 0) && want.map_or(true, |w| w == deg) {
                out.push(MultiIndex(cur.clone()));
            }
            return;
        }
        let beta = &rs.root(k).coords;
        // largest multiple of beta that fits
        let max = beta
            .iter()
            .zip(rest.iter())
            .filter(|(b, _)| **b > 0)
            .map(|(b, r)| r / b)
            .min()
            .unwrap_or(0)
            .max(0);
        for e in 0..=max {
            cur[k] = e as u32;
            for (r, b) in rest.iter_mut().zip(beta) {
                *r -= e * b;
            }
            go(rs, k + 1, rest, cur, deg + e as u64, want, out);
            for (r, b) in rest.iter_mut().zip(beta) {
                *r += e * b;
            }
        }
        cur[k] = 0;
    }
    go(rs, 0, &mut rest, &mut cur, 0, degree, &mut out);
    out
}
