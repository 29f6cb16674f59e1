//! Exact comparison of angles given by rational vectors.
//!
//! Every angle the engine compares is either the angle between two rational
//! vectors (value in [0, pi]) or a target whose cosine is an exact field
//! scalar (multiples of alpha, pi/3, arccos(1/beta), ...). Comparisons reduce
//! to single-radical sign tests, so they stay exact.

use std::cmp::Ordering;
use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::field::{cmp_minus_sqrt, NumberField, Scalar};
use crate::geom::RatPoint;
use crate::num::{rat_sign, Rat};

/// The angle between two rational vectors, kept as exact cos/sin numerators
/// over sqrt(n2).
#[derive(Debug, Clone)]
pub struct VecAngle {
    /// <u, v>
    pub dot: Rat,
    /// |u x v| >= 0
    pub cross_abs: Rat,
    /// |u|^2 |v|^2 > 0
    pub n2: Rat,
}

impl VecAngle {
    pub fn between(u: &RatPoint, v: &RatPoint) -> VecAngle {
        let dot = u.dot(v);
        let cross_abs = u.cross(v).abs();
        let n2 = u.norm2() * v.norm2();
        debug_assert!(n2.is_positive(), "angle of a zero vector");
        VecAngle { dot, cross_abs, n2 }
    }

    pub fn is_zero_angle(&self) -> bool {
        self.cross_abs.is_zero() && self.dot.is_positive()
    }

    pub fn is_pi(&self) -> bool {
        self.cross_abs.is_zero() && self.dot.is_negative()
    }

    /// Compare this angle (in [0, pi]) against arccos(cos_t), cos_t in [-1, 1].
    pub fn cmp_vs_cos(&self, cos_t: &Scalar) -> Ordering {
        let field = cos_t.field();
        let a = Scalar::from_rat(field, self.dot.clone());
        let r = Scalar::from_rat(field, self.n2.clone());
        // theta < T  <=>  cos theta > cos T  <=>  dot - cosT*sqrt(n2) > 0
        match cmp_minus_sqrt(&a, cos_t, &r) {
            1 => Ordering::Less,
            -1 => Ordering::Greater,
            _ => Ordering::Equal,
        }
    }

    /// Compare two vector angles.
    pub fn cmp(&self, o: &VecAngle) -> Ordering {
        // cos a ? cos b  <=>  da * sqrt(Nb) ? db * sqrt(Na)
        let sa = rat_sign(&self.dot);
        let sb = rat_sign(&o.dot);
        let s = if sa != sb {
            if sa > sb {
                1
            } else {
                -1
            }
        } else if sa == 0 {
            0
        } else {
            let lhs = &self.dot * &self.dot * &o.n2;
            let rhs = &o.dot * &o.dot * &self.n2;
            rat_sign(&(lhs - rhs)) * sa
        };
        // cos bigger means angle smaller
        match s {
            1 => Ordering::Less,
            -1 => Ordering::Greater,
            _ => Ordering::Equal,
        }
    }

    pub fn to_degrees(&self) -> f64 {
        use num_traits::ToPrimitive;
        let c = self.dot.to_f64().unwrap_or(f64::NAN) / self.n2.to_f64().unwrap_or(f64::NAN).sqrt();
        c.clamp(-1.0, 1.0).acos().to_degrees()
    }
}

/// Compare (A + B) against arccos(cos_t) with A, B and the target in [0, pi]
/// (the sum may exceed pi; it then compares Greater unless the target is pi
/// and the sum is exactly pi).
pub fn cmp_sum_vs_cos(
    a: &VecAngle,
    b: &VecAngle,
    cos_t: &Scalar,
    field: &Arc<NumberField>,
) -> Ordering {
    // cos(A+B)*sqrt(Na*Nb) = da*db - xa*xb, sin(A+B)*sqrt(Na*Nb) = xa*db + da*xb
    let cos_num = &a.dot * &b.dot - &a.cross_abs * &b.cross_abs;
    let sin_num = &a.cross_abs * &b.dot + &a.dot * &b.cross_abs;
    let n2 = &a.n2 * &b.n2;
    let minus_one = Scalar::from_int(field, -1);
    let one = Scalar::one(field);
    if sin_num.is_negative() {
        // sum in (pi, 2pi), target at most pi
        return Ordering::Greater;
    }
    if sin_num.is_zero() {
        // sum is exactly 0 or pi
        return if cos_num.is_negative() {
            if cos_t.sub(&minus_one).is_zero() {
                Ordering::Equal
            } else {
                Ordering::Greater
            }
        } else {
            if cos_t.sub(&one).is_zero() {
                Ordering::Equal
            } else {
                Ordering::Less
            }
        };
    }
    let an = Scalar::from_rat(field, cos_num);
    let r = Scalar::from_rat(field, n2);
    match cmp_minus_sqrt(&an, cos_t, &r) {
        1 => Ordering::Less,
        -1 => Ordering::Greater,
        _ => Ordering::Equal,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::NumberField;
    use crate::num::{rat, rat_int};

    fn pt(x: i64, y: i64) -> RatPoint {
        RatPoint::new(rat_int(x), rat_int(y))
    }

    #[test]
    fn right_angles() {
        let q = NumberField::rationals();
        let a = VecAngle::between(&pt(1, 0), &pt(0, 1)); // 90 degrees
        let c60 = Scalar::from_rat(&q, rat(1, 2));
        assert_eq!(a.cmp_vs_cos(&c60), Ordering::Greater);
        assert_eq!(a.cmp_vs_cos(&Scalar::zero(&q)), Ordering::Equal);
        assert_eq!(a.cmp_vs_cos(&Scalar::from_rat(&q, rat(-1, 2))), Ordering::Less);
    }

    #[test]
    fn ordering_between_angles() {
        let a = VecAngle::between(&pt(1, 0), &pt(1, 1)); // 45
        let b = VecAngle::between(&pt(1, 0), &pt(0, 1)); // 90
        let c = VecAngle::between(&pt(1, 0), &pt(-1, 1)); // 135
        assert_eq!(a.cmp(&b), Ordering::Less);
        assert_eq!(c.cmp(&b), Ordering::Greater);
        assert_eq!(b.cmp(&VecAngle::between(&pt(2, 0), &pt(0, 5))), Ordering::Equal);
    }

    #[test]
    fn sums_against_targets() {
        let q = NumberField::rationals();
        let a = VecAngle::between(&pt(1, 0), &pt(1, 1)); // 45
        let b = VecAngle::between(&pt(1, 0), &pt(0, 1)); // 90
        // 45 + 90 = 135 vs 90 (cos 0): greater
        assert_eq!(cmp_sum_vs_cos(&a, &b, &Scalar::zero(&q), &q), Ordering::Greater);
        // 45 + 45 = 90 vs 90: equal
        assert_eq!(cmp_sum_vs_cos(&a, &a, &Scalar::zero(&q), &q), Ordering::Equal);
        // 90 + 90 = 180 vs pi: equal
        let m1 = Scalar::from_int(&q, -1);
        assert_eq!(cmp_sum_vs_cos(&b, &b, &m1, &q), Ordering::Equal);
        // 90 + 135 beyond pi: greater even against pi
        let c = VecAngle::between(&pt(1, 0), &pt(-1, 1));
        assert_eq!(cmp_sum_vs_cos(&b, &c, &m1, &q), Ordering::Greater);
    }
}
