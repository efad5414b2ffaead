use num_traits::Zero;

use crate::rational::Rat;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("linear system is singular")]
pub struct Singular;

/// Solves `a x = b` exactly by Gauss-Jordan elimination.
pub fn solve(mut a: Vec<Vec<Rat>>, mut b: Vec<Rat>) -> Result<Vec<Rat>, Singular> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(Singular)?;
        a.swap(col, piv);
        b.swap(col, piv);
        let p = a[col][col].clone();
        if !num_traits::One::is_one(&p) {
            for x in a[col][col..].iter_mut() {
                *x /= &p;
            }
            b[col] /= &p;
        }
        let (pivot_row, pivot_b) = (a[col].clone(), b[col].clone());
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for (x, y) in a[r][col..].iter_mut().zip(&pivot_row[col..]) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
            b[r] -= &f * &pivot_b;
        }
    }
    Ok(b)
}
