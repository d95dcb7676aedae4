//! Matrix permanent via Ryser's inclusion-exclusion formula.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest matrix dimension accepted by [`permanent`].
pub const MAX_PERMANENT_DIM: usize = 8;

/// Permanent of a square complex matrix.
///
/// Uses Ryser's formula with Gray-code subset ordering, so each of the
/// `2^n` column subsets costs `O(n)` to update: one column is added or
/// removed from the running row sums per step.
pub fn permanent(m: &DMatrix<Complex64>) -> Result<Complex64> {
    let (rows, cols) = m.shape();
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    let n = rows;
    if n > MAX_PERMANENT_DIM {
        return Err(Error::MatrixTooLarge {
            n,
            max: MAX_PERMANENT_DIM,
        });
    }
    if n == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }

    let mut row_sums = vec![Complex64::new(0.0, 0.0); n];
    let mut total = Complex64::new(0.0, 0.0);
    let mut gray: u32 = 0;
    for k in 1u32..(1 << n) {
        let next = k ^ (k >> 1);
        let changed = (gray ^ next).trailing_zeros() as usize;
        let adding = next & (1 << changed) != 0;
        for (i, s) in row_sums.iter_mut().enumerate() {
            if adding {
                *s += m[(i, changed)];
            } else {
                *s -= m[(i, changed)];
            }
        }
        gray = next;

        let prod: Complex64 = row_sums.iter().product();
        // (-1)^(n - |S|)
        if (n - next.count_ones() as usize).is_multiple_of(2) {
            total += prod;
        } else {
            total -= prod;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_2x2() {
        let m = DMatrix::<Complex64>::identity(2, 2);
        assert!((permanent(&m).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn two_by_two_is_ad_plus_bc() {
        let (a, b, cc, d) = (c(1.0, 2.0), c(-0.5, 0.3), c(0.7, -1.1), c(2.0, 0.0));
        let m = DMatrix::from_row_slice(2, 2, &[a, b, cc, d]);
        assert!((permanent(&m).unwrap() - (a * d + b * cc)).norm() < 1e-14);
    }

    #[test]
    fn all_ones_is_factorial() {
        for (n, fact) in [(1usize, 1.0), (3, 6.0), (5, 120.0), (8, 40320.0)] {
            let m = DMatrix::from_element(n, n, c(1.0, 0.0));
            let p = permanent(&m).unwrap();
            assert!((p - c(fact, 0.0)).norm() < 1e-9, "n = {n}: {p}");
        }
    }

    #[test]
    fn rejects_non_square_and_oversized() {
        let m = DMatrix::from_element(2, 3, c(1.0, 0.0));
        assert!(matches!(permanent(&m), Err(Error::NotSquare { rows: 2, cols: 3 })));
        let m = DMatrix::from_element(9, 9, c(1.0, 0.0));
        assert!(matches!(permanent(&m), Err(Error::MatrixTooLarge { n: 9, .. })));
    }

    #[test]
    fn empty_matrix_has_unit_permanent() {
        let m = DMatrix::<Complex64>::zeros(0, 0);
        assert_eq!(permanent(&m).unwrap(), c(1.0, 0.0));
    }
}
