//! Big rationals plus a cheap floating interval used as a sign filter.

use num_traits::{Signed, ToPrimitive, Zero};

pub type Int = num_bigint::BigInt;
pub type Rat = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

/// Parse "a/b" or "a". The denominator must be nonzero.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: Int = n.trim().parse().map_err(|e| format!("bad numerator {n:?}: {e}"))?;
        let d: Int = d.trim().parse().map_err(|e| format!("bad denominator {d:?}: {e}"))?;
        if d.is_zero() {
            return Err(format!("zero denominator in {s:?}"));
        }
        Ok(Rat::new(n, d))
    } else {
        let n: Int = s.parse().map_err(|e| format!("bad integer {s:?}: {e}"))?;
        Ok(Rat::from_integer(n))
    }
}

/// Canonical rendering: "n" for integers, "n/d" otherwise.
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom() == &Int::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat_sign(r: &Rat) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// Closed floating interval with outward rounding; `[-inf, inf]` when unknown.
/// Only a filter: any operation that could misround widens by a few ulps.
#[derive(Clone, Copy, Debug)]
pub struct FInt {
    pub lo: f64,
    pub hi: f64,
}

fn widen_lo(x: f64) -> f64 {
    if x.is_finite() {
        x.next_down().next_down()
    } else {
        f64::NEG_INFINITY
    }
}

fn widen_hi(x: f64) -> f64 {
    if x.is_finite() {
        x.next_up().next_up()
    } else {
        f64::INFINITY
    }
}

impl FInt {
    pub const UNKNOWN: FInt = FInt {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    pub fn point(x: f64) -> FInt {
        if x.is_finite() {
            FInt { lo: x, hi: x }
        } else {
            FInt::UNKNOWN
        }
    }

    pub fn from_rat(r: &Rat) -> FInt {
        match r.to_f64() {
            Some(x) if x.is_finite() => FInt {
                lo: widen_lo(x),
                hi: widen_hi(x),
            },
            _ => FInt::UNKNOWN,
        }
    }

    fn make(lo: f64, hi: f64) -> FInt {
        if lo.is_nan() || hi.is_nan() {
            FInt::UNKNOWN
        } else {
            FInt {
                lo: widen_lo(lo),
                hi: widen_hi(hi),
            }
        }
    }

    pub fn add(self, o: FInt) -> FInt {
        FInt::make(self.lo + o.lo, self.hi + o.hi)
    }

    pub fn sub(self, o: FInt) -> FInt {
        FInt::make(self.lo - o.hi, self.hi - o.lo)
    }

    pub fn neg(self) -> FInt {
        FInt { lo: -self.hi, hi: -self.lo }
    }

    pub fn mul(self, o: FInt) -> FInt {
        let c = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for v in c {
            if v.is_nan() {
                return FInt::UNKNOWN;
            }
            lo = lo.min(v);
            hi = hi.max(v);
        }
        FInt::make(lo, hi)
    }

    /// Determined sign, or `None` when the interval straddles zero.
    pub fn sign(self) -> Option<i8> {
        if self.lo > 0.0 {
            Some(1)
        } else if self.hi < 0.0 {
            Some(-1)
        } else if self.lo == 0.0 && self.hi == 0.0 {
            Some(0)
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        assert_eq!(parse_rat("3").unwrap(), rat_int(3));
        assert_eq!(parse_rat("-1/2").unwrap(), rat(-1, 2));
        assert_eq!(parse_rat(" 4/6 ").unwrap(), rat(2, 3));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
        assert_eq!(rat_to_string(&rat(-4, 6)), "-2/3");
        assert_eq!(rat_to_string(&rat_int(7)), "7");
    }

    #[test]
    fn interval_filter_signs() {
        let a = FInt::from_rat(&rat(1, 3));
        let b = FInt::from_rat(&rat(-1, 3));
        assert_eq!(a.sign(), Some(1));
        assert_eq!(b.sign(), Some(-1));
        assert_eq!(a.add(b).sign(), None); // tiny straddle, filter gives up
        assert_eq!(a.mul(b).sign(), Some(-1));
        assert_eq!(a.sub(b).sign(), Some(1));
    }
}
