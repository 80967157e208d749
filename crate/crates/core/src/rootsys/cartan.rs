use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A Cartan matrix `a[i][j] = <alpha_j, alpha_i^vee>` with an optional series label.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CartanData {
    pub matrix: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl CartanData {
    pub fn new(matrix: Vec<Vec<i64>>) -> Self {
        CartanData {
            matrix,
            label: None,
        }
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.matrix[i][j]
    }

    /// Cartan matrix of a finite-type series label such as `"A2"`, `"B3"` or `"G2"`.
    ///
    /// Conventions: in `B_n` the last simple root is short, in `C_n` it is long,
    /// and in `G2` the first simple root is short.
    pub fn from_label(label: &str) -> Result<Self> {
        let trimmed = label.trim();
        let bad = || Error::UnknownLabel(label.to_string());
        let mut chars = trimmed.chars();
        let series = chars.next().ok_or_else(bad)?.to_ascii_uppercase();
        let n: usize = chars.as_str().parse().map_err(|_| bad())?;
        let mut m = vec![vec![0i64; n]; n];
        let chain = |m: &mut Vec<Vec<i64>>| {
            for i in 0..n {
                m[i][i] = 2;
                if i + 1 < n {
                    m[i][i + 1] = -1;
                    m[i + 1][i] = -1;
                }
            }
        };
        match (series, n) {
            ('A', n) if n >= 1 => chain(&mut m),
            ('B', n) if n >= 2 => {
                chain(&mut m);
                m[n - 1][n - 2] = -2;
            }
            ('C', n) if n >= 2 => {
                chain(&mut m);
                m[n - 2][n - 1] = -2;
            }
            ('D', n) if n >= 4 => {
                chain(&mut m);
                m[n - 2][n - 1] = 0;
                m[n - 1][n - 2] = 0;
                m[n - 3][n - 1] = -1;
                m[n - 1][n - 3] = -1;
            }
            ('E', n) if (6..=8).contains(&n) => {
                // Bourbaki numbering: 1-3-4-5-..., with 2 attached to 4
                for i in 0..n {
                    m[i][i] = 2;
                }
                let mut link = |a: usize, b: usize| {
                    m[a - 1][b - 1] = -1;
                    m[b - 1][a - 1] = -1;
                };
                link(1, 3);
                link(3, 4);
                link(2, 4);
                for k in 4..n {
                    link(k, k + 1);
                }
            }
            ('F', 4) => {
                chain(&mut m);
                m[2][1] = -2;
            }
            ('G', 2) => {
                m = vec![vec![2, -3], vec![-1, 2]];
            }
            _ => return Err(bad()),
        }
        Ok(CartanData {
            matrix: m,
            label: Some(format!("{series}{n}")),
        })
    }

    /// Checks the axioms of a finite-type Cartan matrix and returns the
    /// symmetrizer `d` (positive integers with `d_i a_ij = d_j a_ji`).
    pub fn validate(&self) -> Result<Vec<i64>> {
        let n = self.rank();
        let bad = |msg: String| Err(Error::InvalidCartan(msg));
        if n == 0 {
            return bad("empty matrix".into());
        }
        for (i, row) in self.matrix.iter().enumerate() {
            if row.len() != n {
                return bad(format!("row {i} has length {}, expected {n}", row.len()));
            }
        }
        for i in 0..n {
            if self.entry(i, i) != 2 {
                return bad(format!(
                    "diagonal entry ({i},{i}) is {}, expected 2",
                    self.entry(i, i)
                ));
            }
            for j in 0..n {
                if i == j {
                    continue;
                }
                let (a, b) = (self.entry(i, j), self.entry(j, i));
                if a > 0 {
                    return bad(format!("off-diagonal entry ({i},{j}) = {a} is positive"));
                }
                if (a == 0) != (b == 0) {
                    return bad(format!("entries ({i},{j}) and ({j},{i}) are not both zero"));
                }
            }
        }

        // symmetrize component by component
        let mut d: Vec<Option<BigRational>> = vec![None; n];
        for start in 0..n {
            if d[start].is_some() {
                continue;
            }
            d[start] = Some(BigRational::one());
            let mut stack = vec![start];
            while let Some(i) = stack.pop() {
                let di = d[i].clone().expect("visited");
                for j in 0..n {
                    if i == j || self.entry(i, j) == 0 {
                        continue;
                    }
                    // d_j = d_i a_ij / a_ji
                    let dj =
                        &di * BigRational::new(self.entry(i, j).into(), self.entry(j, i).into());
                    match &d[j] {
                        Some(existing) if *existing != dj => {
                            return bad("matrix is not symmetrizable".into());
                        }
                        Some(_) => {}
                        None => {
                            d[j] = Some(dj);
                            stack.push(j);
                        }
                    }
                }
            }
        }
        let d: Vec<BigRational> = d.into_iter().map(|x| x.expect("all visited")).collect();
        let lcm = d.iter().fold(BigInt::one(), |acc, x| {
            num_integer::lcm(acc, x.denom().clone())
        });
        let d_int: Vec<BigInt> = d
            .iter()
            .map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer())
            .collect();
        let g = d_int
            .iter()
            .fold(BigInt::zero(), |acc, x| num_integer::gcd(acc, x.clone()));
        let d_int: Vec<i64> = d_int
            .iter()
            .map(|x| {
                i64::try_from(x / &g)
                    .map_err(|_| Error::InvalidCartan("symmetrizer overflow".into()))
            })
            .collect::<Result<_>>()?;

        // positive definiteness of the symmetrized form (Sylvester's criterion)
        let sym: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| BigRational::from_integer((d_int[i] * self.entry(i, j)).into()))
                    .collect()
            })
            .collect();
        for k in 1..=n {
            if !determinant(&sym, k).is_positive() {
                return bad(format!(
                    "not of finite type: leading minor of order {k} is not positive"
                ));
            }
        }
        Ok(d_int)
    }
}

fn determinant(m: &[Vec<BigRational>], k: usize) -> BigRational {
    let mut a: Vec<Vec<BigRational>> = m.iter().take(k).map(|r| r[..k].to_vec()).collect();
    let mut det = BigRational::one();
    for c in 0..k {
        let Some(p) = (c..k).find(|&r| !a[r][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c].clone();
        for r in c + 1..k {
            let factor = &a[r][c] / &a[c][c];
            for cc in c..k {
                let sub = &factor * &a[c][cc];
                a[r][cc] -= sub;
            }
        }
    }
    det
}
