//! Convergence constants of an MEMDP: how many distinguishing steps are
//! enough for the belief to become small with high probability.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::interval::Interval;
use crate::model::Memdp;
use crate::rational::{ceil_log2, fmt_rat, log2_interval, rat_interval, Rat};

/// A real number known exactly when rational, otherwise by an enclosure.
#[derive(Debug, Clone, PartialEq)]
pub struct Real {
    pub exact: Option<Rat>,
    pub iv: Interval,
}

impl Real {
    pub fn rat(r: Rat) -> Self {
        Real {
            iv: rat_interval(&r),
            exact: Some(r),
        }
    }

    fn approx(iv: Interval) -> Self {
        Real { exact: None, iv }
    }

    pub fn log2(r: &Rat) -> Self {
        match exact_log2(r) {
            Some(k) => Real::rat(Rat::from_integer(k.into())),
            None => Real::approx(log2_interval(r)),
        }
    }

    fn zip(
        &self,
        o: &Real,
        f: impl Fn(&Rat, &Rat) -> Rat,
        g: impl Fn(Interval, Interval) -> Interval,
    ) -> Real {
        match (&self.exact, &o.exact) {
            (Some(a), Some(b)) => Real::rat(f(a, b)),
            _ => Real::approx(g(self.iv, o.iv)),
        }
    }

    pub fn add(&self, o: &Real) -> Real {
        self.zip(o, |a, b| a + b, |a, b| a + b)
    }

    pub fn mul(&self, o: &Real) -> Real {
        self.zip(o, |a, b| a * b, |a, b| a * b)
    }

    pub fn div(&self, o: &Real) -> Real {
        self.zip(o, |a, b| a / b, |a, b| a / b)
    }

    pub fn abs(&self) -> Real {
        match &self.exact {
            Some(a) => Real::rat(a.abs()),
            None => Real::approx(self.iv.abs()),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.exact.as_ref().is_some_and(Zero::is_zero)
    }

    /// A sound integer upper bound on the ceiling: exact when the value is
    /// rational, otherwise the ceiling of the enclosure's upper end.
    pub fn ceil_upper(&self) -> Option<u64> {
        match &self.exact {
            Some(r) => r.ceil().to_integer().max(BigInt::zero()).to_u64(),
            None => {
                let hi = self.iv.hi.ceil();
                if hi.is_finite() && hi < 1.8e19 {
                    Some(hi.max(0.0) as u64)
                } else {
                    None
                }
            }
        }
    }

    pub fn approx_f64(&self) -> f64 {
        self.iv.mid()
    }
}

impl Serialize for Real {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Real", 3)?;
        st.serialize_field("exact", &self.exact.as_ref().map(fmt_rat))?;
        st.serialize_field("lo", &self.iv.lo)?;
        st.serialize_field("hi", &self.iv.hi)?;
        st.end()
    }
}

/// `log2(r)` when `r` is an integral power of two.
fn exact_log2(r: &Rat) -> Option<i64> {
    let pow = |n: &BigInt| -> Option<i64> {
        let (_, mag) = n.clone().into_parts();
        if mag.count_ones() == 1 {
            Some(mag.bits() as i64 - 1)
        } else {
            None
        }
    };
    if !r.is_positive() {
        return None;
    }
    Some(pow(r.numer())? - pow(r.denom())?)
}

/// Exact square root of a rational that is a perfect square.
fn exact_sqrt(r: &Rat) -> Option<Rat> {
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rat::new(n, d))
    } else {
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConstantsError {
    #[error("epsilon must lie in (0,1), got {0}")]
    BadEpsilon(String),
    #[error("transition ({state}, {action}) has an empty support")]
    EmptySupport { state: String, action: String },
    #[error("constant {0} exceeds the 64-bit range")]
    Overflow(&'static str),
}

#[derive(Debug, Clone, Serialize)]
pub struct GammaConstants {
    #[serde(serialize_with = "ser_rat")]
    pub ratio_min: Rat,
    #[serde(serialize_with = "ser_rat")]
    pub ratio_max: Rat,
    #[serde(serialize_with = "ser_rat")]
    pub ratio_min_gt1: Rat,
    #[serde(serialize_with = "ser_rat")]
    pub p_min: Rat,
    pub iota: Real,
    pub eta: Real,
    pub n1: u64,
    pub n2: u64,
    pub n3: u64,
    pub m: u64,
}

fn ser_rat<S: serde::Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rat(r))
}

/// Model-only part of the constants (independent of epsilon).
#[derive(Debug, Clone)]
pub struct Ratios {
    pub ratio_min: Rat,
    pub ratio_max: Rat,
    pub ratio_min_gt1: Rat,
    pub p_min: Rat,
}

pub fn ratios(m: &Memdp) -> Result<Ratios, ConstantsError> {
    let mut rmin: Option<Rat> = None;
    let mut rmax: Option<Rat> = None;
    let mut rgt1: Option<Rat> = None;
    let mut pmin: Option<Rat> = None;
    let k = m.num_envs();
    for q in 0..m.num_states() {
        for (slot, &a) in m.enabled[q].iter().enumerate() {
            for e in 0..k {
                let d = &m.delta[e][q][slot];
                if d.is_empty() {
                    return Err(ConstantsError::EmptySupport {
                        state: m.states.name(q).into(),
                        action: m.actions.name(a).into(),
                    });
                }
                for (_, p) in d {
                    if pmin.as_ref().is_none_or(|x| p < x) {
                        pmin = Some(p.clone());
                    }
                }
                for f in 0..k {
                    if e == f {
                        continue;
                    }
                    let other = &m.delta[f][q][slot];
                    for (t, pe) in d {
                        let Ok(i) = other.binary_search_by_key(t, |(s, _)| *s) else {
                            continue;
                        };
                        let r = pe / &other[i].1;
                        if rmin.as_ref().is_none_or(|x| &r < x) {
                            rmin = Some(r.clone());
                        }
                        if rmax.as_ref().is_none_or(|x| &r > x) {
                            rmax = Some(r.clone());
                        }
                        if r > Rat::one() && rgt1.as_ref().is_none_or(|x| &r < x) {
                            rgt1 = Some(r);
                        }
                    }
                }
            }
        }
    }
    let one = Rat::one();
    Ok(Ratios {
        ratio_min: rmin.unwrap_or_else(|| one.clone()).min(one.clone()),
        ratio_max: rmax.unwrap_or_else(|| one.clone()).max(one.clone()),
        ratio_min_gt1: rgt1.unwrap_or_else(|| one.clone()),
        p_min: pmin.unwrap_or(one),
    })
}

/// Smallest `n` with `pred(n)`, for a monotone predicate, starting the
/// search from an estimate.
fn smallest_true(guess: u64, pred: impl Fn(u64) -> bool) -> u64 {
    let mut n = guess;
    if pred(n) {
        while n > 0 && pred(n - 1) {
            n -= 1;
        }
    } else {
        n += 1;
        while !pred(n) {
            n += 1;
        }
    }
    n
}

pub fn compute_constants(m: &Memdp, eps: &Rat) -> Result<GammaConstants, ConstantsError> {
    if !eps.is_positive() || eps >= &Rat::one() {
        return Err(ConstantsError::BadEpsilon(fmt_rat(eps)));
    }
    let r = ratios(m)?;
    let k = Rat::from_integer((m.num_envs() as i64).into());
    let one = Rat::one();
    let two = Rat::from_integer(2.into());
    let small = eps / (&two * &k);

    // n1: (1 - p_min)^n <= eps / (2|E|).
    let n1 = if r.p_min.is_one() {
        0
    } else {
        let base = &one - &r.p_min;
        let est = (log2_interval(&small) / log2_interval(&base)).lo;
        smallest_true(est.max(0.0).floor() as u64, |n| {
            num_traits::pow(base.clone(), n as usize) <= small
        })
    };

    // n2: 2^n >= ratio_max^n1 / eps^2.
    let bound = num_traits::pow(r.ratio_max.clone(), n1 as usize) / (eps * eps);
    let n2 = ceil_log2(&bound).max(0) as u64;

    let rgt = &r.ratio_min_gt1;
    let iota = if rgt.is_one() {
        Real::rat(Rat::zero())
    } else if rgt >= &Rat::from_integer(4.into()) {
        Real::rat(one.clone())
    } else if let Some(s) = exact_sqrt(rgt) {
        let d = s - &one;
        Real::rat(&d * &d)
    } else {
        let s = rat_interval(rgt).sqrt() - Interval::point(1.0);
        Real::approx(s.sqr().min_with(Interval::point(1.0)))
    };
    let inner = Real::rat(one.clone()).add(&Real::rat(-r.p_min.clone()).mul(&iota));
    let eta = match &inner.exact {
        Some(x) => Real::log2(x),
        None => {
            let iv = inner.iv;
            Real::approx(Interval::new(iv.lo.max(f64::MIN_POSITIVE), iv.hi).log2())
        }
    };

    let n3 = if eta.is_zero() {
        0
    } else {
        let lse = Real::log2(&small).abs();
        let spread = Real::log2(&(&r.ratio_max / &r.ratio_min));
        let two_r = Real::rat(two.clone());
        let first = two_r.mul(&lse).mul(&spread).mul(&spread).div(&eta.mul(&eta));
        let second = two_r
            .mul(&Real::rat(Rat::from_integer(n2.into())))
            .div(&eta.abs());
        first
            .add(&second)
            .ceil_upper()
            .ok_or(ConstantsError::Overflow("n3"))?
    };
    let mm = (n1.checked_add(n3))
        .and_then(|s| s.checked_mul(m.num_envs() as u64))
        .ok_or(ConstantsError::Overflow("m"))?;
    Ok(GammaConstants {
        ratio_min: r.ratio_min,
        ratio_max: r.ratio_max,
        ratio_min_gt1: r.ratio_min_gt1,
        p_min: r.p_min,
        iota,
        eta,
        n1,
        n2,
        n3,
        m: mm,
    })
}
