//! Hermite normal form of integer row lattices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Returns the Hermite normal form basis of the Z-span of `rows`.
///
/// The result is in row echelon form with strictly increasing pivot columns,
/// positive pivots, and entries above each pivot reduced into `[0, pivot)`.
/// Zero generators are ignored; an empty result means the span is `{0}`.
pub fn hnf_rows(rows: Vec<Vec<BigInt>>, ncols: usize) -> Vec<Vec<BigInt>> {
    let mut pending: Vec<Vec<BigInt>> = rows
        .into_iter()
        .inspect(|r| assert_eq!(r.len(), ncols, "generator has wrong length"))
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect();
    let mut basis: Vec<(usize, Vec<BigInt>)> = Vec::new();

    for col in 0..ncols {
        loop {
            let mut active: Vec<usize> = (0..pending.len())
                .filter(|&i| !pending[i][col].is_zero())
                .collect();
            if active.len() <= 1 {
                if let Some(&i) = active.first() {
                    let mut row = pending.swap_remove(i);
                    if row[col].is_negative() {
                        row.iter_mut().for_each(|x| *x = -&*x);
                    }
                    basis.push((col, row));
                }
                break;
            }
            // smallest entry in this column becomes the provisional pivot
            active.sort_by(|&a, &b| pending[a][col].abs().cmp(&pending[b][col].abs()));
            let piv = active[0];
            let pivot_row = pending[piv].clone();
            for &i in &active[1..] {
                let q = pending[i][col].div_floor(&pivot_row[col]);
                for (x, y) in pending[i].iter_mut().zip(&pivot_row).skip(col) {
                    *x -= &q * y;
                }
            }
            pending.retain(|r| r.iter().any(|x| !x.is_zero()));
        }
    }

    // reduce entries above each pivot
    for i in 0..basis.len() {
        let (col, pivot_row) = basis[i].clone();
        for (_, row) in basis.iter_mut().take(i) {
            let q = row[col].div_floor(&pivot_row[col]);
            if !q.is_zero() {
                for (x, y) in row.iter_mut().zip(&pivot_row).skip(col) {
                    *x -= &q * y;
                }
            }
        }
    }
    basis.into_iter().map(|(_, r)| r).collect()
}
