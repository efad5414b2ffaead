//! Infimum of a quasi-convex function on `[0,1]` from approximate queries.

use num_traits::{One, Zero};

use crate::rational::{rat, Rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfResult {
    pub value: Rat,
    /// Point whose query produced `value`.
    pub argmin: Rat,
    /// Recursive calls made after the initial one.
    pub calls: u32,
    /// Oracle queries issued.
    pub queries: u32,
}

/// Upper bound on recursive calls, `ceil(log_{3/2}(2/eps))`.
pub fn call_bound(eps: &Rat) -> u32 {
    // Smallest k with (3/2)^k * eps/2 >= 1, found exactly.
    let mut width = eps / rat(2, 1);
    let mut k = 0;
    while width < Rat::one() {
        width *= rat(3, 2);
        k += 1;
    }
    k
}

/// Trisection search. `f_hat(x, tol)` must return a value within `tol` of a
/// quasi-convex 1-Lipschitz `f`; the result is within `eps` of `inf f`.
pub fn inf_f_search<F, E>(mut f_hat: F, eps: &Rat) -> Result<InfResult, E>
where
    F: FnMut(&Rat, &Rat) -> Result<Rat, E>,
{
    let half = eps / rat(2, 1);
    let tol = eps * eps / rat(48, 1);
    let slack = eps * eps / rat(24, 1);
    let (mut x, mut t) = (Rat::zero(), Rat::one());
    let mut calls = 0;
    let mut queries = 0;
    loop {
        if &t - &x <= half {
            queries += 1;
            let value = f_hat(&x, &half)?;
            return Ok(InfResult {
                value,
                argmin: x,
                calls,
                queries,
            });
        }
        let y = (rat(2, 1) * &x + &t) / rat(3, 1);
        let z = (&x + rat(2, 1) * &t) / rat(3, 1);
        let u = (&y + &z) / rat(2, 1);
        let ay = f_hat(&y, &tol)?;
        let az = f_hat(&z, &tol)?;
        let au = f_hat(&u, &tol)?;
        queries += 3;
        if au > &az + &slack || ay > &au + &slack {
            x = y;
        } else if au > &ay + &slack || az > &au + &slack {
            t = z;
        } else {
            return Ok(InfResult {
                value: au,
                argmin: u,
                calls,
                queries,
            });
        }
        calls += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::convert::Infallible;

    fn exact(f: impl Fn(&Rat) -> Rat) -> impl FnMut(&Rat, &Rat) -> Result<Rat, Infallible> {
        move |x, _| Ok(f(x))
    }

    fn close(a: &Rat, b: &Rat, eps: &Rat) -> bool {
        let d = a - b;
        &d <= eps && &-d <= eps
    }

    #[test]
    fn tent_bottom() {
        let eps = rat(1, 100);
        let r = inf_f_search(exact(|x| (Rat::one() - x).max(x.clone())), &eps).unwrap();
        assert!(close(&r.value, &rat(1, 2), &eps), "{}", r.value);
    }

    #[test]
    fn constant() {
        let eps = rat(1, 20);
        let r = inf_f_search(exact(|_| rat(3, 7)), &eps).unwrap();
        assert_eq!(r.value, rat(3, 7));
        assert_eq!(r.calls, 0);
    }

    #[test]
    fn flat_bottom_with_call_bound() {
        let eps = rat(1, 100);
        let f = |x: &Rat| (Rat::one() - x).max(x.clone()).max(rat(3, 4));
        let r = inf_f_search(exact(f), &eps).unwrap();
        assert!(close(&r.value, &rat(3, 4), &eps));
        assert!(r.calls <= call_bound(&eps));
    }

    #[test]
    fn off_center_minimum() {
        let eps = rat(1, 64);
        // Minimum 15/23 at x = 15/23.
        let f = |x: &Rat| {
            let a = (rat(3, 5) * x).max(rat(1, 4) * (Rat::one() - x));
            let b = (rat(2, 5) * x).max(rat(3, 4) * (Rat::one() - x));
            a + b
        };
        // f is 1-Lipschitz-ish up to a constant; scale to fit the contract.
        let g = |x: &Rat| f(x) / rat(2, 1);
        let r = inf_f_search(exact(g), &eps).unwrap();
        assert!(close(&r.value, &rat(15, 46), &eps), "{}", r.value);
    }

    #[test]
    fn bound_values() {
        assert_eq!(call_bound(&rat(1, 100)), 14);
        assert_eq!(call_bound(&rat(1, 2)), 4);
    }

    #[test]
    fn oracle_errors_propagate() {
        let r: Result<InfResult, &str> = inf_f_search(|_, _| Err("boom"), &rat(1, 10));
        assert_eq!(r, Err("boom"));
    }
}
