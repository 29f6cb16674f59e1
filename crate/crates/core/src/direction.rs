//! The k equally spaced unit directions u_j = (cos(2 pi j / k), -sin(2 pi j / k)).
//!
//! Indices run clockwise and are cyclic (u_j = u_{j+k}); u_j and u_{j+s} are
//! antipodal for k = 2s. All coordinates are exact elements of a number
//! field chosen per k.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{NumberField, Scalar};
use crate::geom::Vec2;
use crate::num::{rat_int, Rat};
use num_traits::One;

#[derive(Debug, Clone)]
pub struct DirectionSet {
    pub k: usize,
    pub s: usize,
    field: Arc<NumberField>,
    /// cos(2 pi j / k), sin(2 pi j / k) for j in 0..k.
    cos: Vec<Scalar>,
    sin: Vec<Scalar>,
}

impl DirectionSet {
    /// Build the direction set for an even k >= 4.
    pub fn new(k: usize) -> Result<DirectionSet> {
        if k < 4 || k % 2 != 0 {
            return Err(Error::UnsupportedK(k));
        }
        let (field, cos_a, sin_a) = match NumberField::tan_pi_over(k) {
            Some(field) => {
                // cos(2pi/k) = (1 - t^2)/(1 + t^2), sin = 2t/(1 + t^2), t = tan(pi/k)
                let t = if k == 4 {
                    Scalar::from_rat(&field, Rat::one())
                } else {
                    Scalar::generator(&field)
                };
                let one = Scalar::one(&field);
                let den = one.add(&t.square()).inv();
                let c = one.sub(&t.square()).mul(&den);
                let s = t.scale_rat(&rat_int(2)).mul(&den);
                (field, c, s)
            }
            None => {
                // gamma = 2 cos(2pi/(4k)); cos/sin of 2pi/k from gamma powers
                let field = NumberField::cos_cyclotomic(4 * k);
                let g = Scalar::generator(&field); // 2 cos(beta), beta = 2pi/(4k)
                let cb = g.scale_rat(&crate::num::rat(1, 2));
                // sin(beta) = cos((k-1) beta) since k*beta = pi/2
                let sb = chebyshev_cos(&g, k - 1);
                // double angle twice: 2beta then alpha = 4beta? no: alpha = 2pi/k = 4*beta
                let (c2, s2) = rotate(&cb, &sb, &cb, &sb);
                let (c4, s4) = rotate(&c2, &s2, &c2, &s2);
                (field, c4, s4)
            }
        };
        let mut cos = Vec::with_capacity(k);
        let mut sin = Vec::with_capacity(k);
        let mut c = Scalar::one(&field);
        let mut s = Scalar::zero(&field);
        for _ in 0..k {
            cos.push(c.clone());
            sin.push(s.clone());
            let (nc, ns) = rotate(&c, &s, &cos_a, &sin_a);
            c = nc;
            s = ns;
        }
        debug_assert!(c.sub(&Scalar::one(&field)).is_zero() && s.is_zero());
        let ds = DirectionSet { k, s: k / 2, field, cos, sin };
        debug_assert!(ds.self_check());
        Ok(ds)
    }

    fn self_check(&self) -> bool {
        let one = Scalar::one(&self.field);
        for j in 0..self.k {
            if !self.cos[j].square().add(&self.sin[j].square()).sub(&one).is_zero() {
                return false;
            }
            // antipodal pairs
            let a = self.u(j);
            let b = self.u(j + self.s);
            if !a.x.add(&b.x).is_zero() || !a.y.add(&b.y).is_zero() {
                return false;
            }
        }
        true
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    /// alpha = 2 pi / k as its exact cosine/sine pair.
    pub fn cos_alpha(&self) -> &Scalar {
        &self.cos[1]
    }

    pub fn sin_alpha(&self) -> &Scalar {
        &self.sin[1]
    }

    /// Exact (cos, sin) of m * alpha for any integer m.
    pub fn cos_sin_multiple(&self, m: i64) -> (Scalar, Scalar) {
        let j = m.rem_euclid(self.k as i64) as usize;
        (self.cos[j].clone(), self.sin[j].clone())
    }

    /// Direction u_j (indices cyclic, clockwise with increasing j).
    pub fn u(&self, j: usize) -> Vec2 {
        let j = j % self.k;
        Vec2 {
            x: self.cos[j].clone(),
            y: self.sin[j].neg(),
        }
    }

    pub fn u_i64(&self, j: i64) -> Vec2 {
        self.u(j.rem_euclid(self.k as i64) as usize)
    }
}

fn rotate(c1: &Scalar, s1: &Scalar, c2: &Scalar, s2: &Scalar) -> (Scalar, Scalar) {
    (
        c1.mul(c2).sub(&s1.mul(s2)),
        s1.mul(c2).add(&c1.mul(s2)),
    )
}

/// cos(m * beta) written over g = 2 cos(beta): returns C_m(g)/2.
fn chebyshev_cos(g: &Scalar, m: usize) -> Scalar {
    let field = g.field().clone();
    let mut prev = Scalar::from_int(&field, 2); // C_0
    let mut cur = g.clone(); // C_1
    if m == 0 {
        return Scalar::one(&field);
    }
    for _ in 1..m {
        let next = g.mul(&cur).sub(&prev);
        prev = cur;
        cur = next;
    }
    cur.scale_rat(&crate::num::rat(1, 2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) {
        assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }

    #[test]
    fn rejects_bad_k() {
        assert!(DirectionSet::new(7).is_err());
        assert!(DirectionSet::new(2).is_err());
        assert!(DirectionSet::new(0).is_err());
    }

    #[test]
    fn exact_small_k() {
        let d = DirectionSet::new(4).unwrap();
        assert_eq!(d.field().degree(), 1);
        let u0 = d.u(0);
        assert!(u0.x.sub(&Scalar::one(d.field())).is_zero() && u0.y.is_zero());
        let u1 = d.u(1);
        assert!(u1.x.is_zero() && u1.y.add(&Scalar::one(d.field())).is_zero()); // (0, -1)
    }

    #[test]
    fn tables_match_floats() {
        for k in [6usize, 8, 12, 16] {
            let d = DirectionSet::new(k).unwrap();
            for j in 0..k {
                let ang = 2.0 * std::f64::consts::PI * j as f64 / k as f64;
                let u = d.u(j);
                close(u.x.to_f64(), ang.cos());
                close(u.y.to_f64(), -ang.sin());
            }
        }
    }

    #[test]
    fn cyclotomic_k10_exact() {
        let d = DirectionSet::new(10).unwrap();
        for j in 0..10 {
            let ang = 2.0 * std::f64::consts::PI * j as f64 / 10.0;
            let u = d.u(j);
            close(u.x.to_f64(), ang.cos());
            close(u.y.to_f64(), -ang.sin());
        }
    }
}
