//! Dense univariate polynomials, rational-coefficient (trajectories) and
//! field-coefficient (certificate conditions).

use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::field::{NumberField, Scalar};
use crate::num::{rat_int, Int, Rat};

// ---------------------------------------------------------------------------
// rational polynomials (trajectory coordinates)
// ---------------------------------------------------------------------------

/// Polynomial with rational coefficients, lowest degree first, trimmed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatPoly(pub Vec<Rat>);

impl RatPoly {
    pub fn new(mut c: Vec<Rat>) -> RatPoly {
        while c.last().map_or(false, |x| x.is_zero()) {
            c.pop();
        }
        RatPoly(c)
    }

    pub fn zero() -> RatPoly {
        RatPoly(vec![])
    }

    pub fn constant(r: Rat) -> RatPoly {
        RatPoly::new(vec![r])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn eval(&self, t: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.0.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    pub fn derivative(&self) -> RatPoly {
        if self.0.len() <= 1 {
            return RatPoly::zero();
        }
        RatPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rat::from_integer(Int::from(i)))
                .collect(),
        )
    }

    pub fn add(&self, o: &RatPoly) -> RatPoly {
        let mut c = vec![Rat::zero(); self.0.len().max(o.0.len())];
        for (i, v) in self.0.iter().enumerate() {
            c[i] += v;
        }
        for (i, v) in o.0.iter().enumerate() {
            c[i] += v;
        }
        RatPoly::new(c)
    }

    pub fn sub(&self, o: &RatPoly) -> RatPoly {
        let mut c = vec![Rat::zero(); self.0.len().max(o.0.len())];
        for (i, v) in self.0.iter().enumerate() {
            c[i] += v;
        }
        for (i, v) in o.0.iter().enumerate() {
            c[i] -= v;
        }
        RatPoly::new(c)
    }

    pub fn mul(&self, o: &RatPoly) -> RatPoly {
        if self.is_zero() || o.is_zero() {
            return RatPoly::zero();
        }
        let mut c = vec![Rat::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        RatPoly::new(c)
    }

    pub fn scale(&self, r: &Rat) -> RatPoly {
        RatPoly::new(self.0.iter().map(|c| c * r).collect())
    }
}

// ---------------------------------------------------------------------------
// field polynomials
// ---------------------------------------------------------------------------

/// Polynomial with `Scalar` coefficients, lowest degree first, trimmed.
#[derive(Clone)]
pub struct Poly {
    field: Arc<NumberField>,
    c: Vec<Scalar>,
}

impl std::fmt::Debug for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Poly(deg {} over {})", self.degree(), self.field.label())
    }
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.c.len() == other.c.len() && self.c.iter().zip(&other.c).all(|(a, b)| a == b)
    }
}
impl Eq for Poly {}

impl Poly {
    pub fn new(field: &Arc<NumberField>, mut c: Vec<Scalar>) -> Poly {
        while c.last().map_or(false, |x| x.is_zero()) {
            c.pop();
        }
        Poly { field: field.clone(), c }
    }

    pub fn zero(field: &Arc<NumberField>) -> Poly {
        Poly { field: field.clone(), c: vec![] }
    }

    pub fn constant(s: Scalar) -> Poly {
        let field = s.field().clone();
        Poly::new(&field, vec![s])
    }

    pub fn from_rat_poly(field: &Arc<NumberField>, p: &RatPoly) -> Poly {
        Poly::new(
            field,
            p.0.iter().map(|r| Scalar::from_rat(field, r.clone())).collect(),
        )
    }

    /// t - r, the linear polynomial with rational root r.
    pub fn linear_root(field: &Arc<NumberField>, r: &Rat) -> Poly {
        Poly::new(
            field,
            vec![Scalar::from_rat(field, -r.clone()), Scalar::one(field)],
        )
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn eval_rat(&self, t: &Rat) -> Scalar {
        let mut acc = Scalar::zero(&self.field);
        for c in self.c.iter().rev() {
            acc = acc.scale_rat(t).add(c);
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        if self.c.len() <= 1 {
            return Poly::zero(&self.field);
        }
        Poly::new(
            &self.field,
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.scale_rat(&rat_int(i as i64)))
                .collect(),
        )
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.c.get(i);
            let b = o.c.get(i);
            c.push(match (a, b) {
                (Some(a), Some(b)) => a.add(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Poly::new(&self.field, c)
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly::new(&self.field, self.c.iter().map(|a| a.neg()).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(&self.field);
        }
        let mut c = vec![Scalar::zero(&self.field); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                c[i + j] = c[i + j].add(&a.mul(b));
            }
        }
        Poly::new(&self.field, c)
    }

    pub fn scale(&self, s: &Scalar) -> Poly {
        Poly::new(&self.field, self.c.iter().map(|a| a.mul(s)).collect())
    }

    /// Divide every coefficient by the positive rational content; keeps the
    /// sign pattern while taming coefficient growth in remainder chains.
    pub fn reduce_content(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut gcd_num = Int::zero();
        let mut lcm_den = Int::from(1);
        for s in &self.c {
            for r in s.coeffs() {
                if r.is_zero() {
                    continue;
                }
                gcd_num = num_integer::Integer::gcd(&gcd_num, &r.numer().abs());
                lcm_den = num_integer::Integer::lcm(&lcm_den, r.denom());
            }
        }
        if gcd_num.is_zero() {
            return self.clone();
        }
        let inv_content = Rat::new(lcm_den, gcd_num);
        Poly::new(
            &self.field,
            self.c.iter().map(|s| s.scale_rat(&inv_content)).collect(),
        )
    }

    /// Euclidean remainder (o nonzero).
    pub fn rem(&self, o: &Poly) -> Poly {
        assert!(!o.is_zero());
        let db = o.degree();
        let lead_inv = o.c[db].inv();
        let mut r = self.c.clone();
        while r.len() > db {
            let dr = r.len() - 1;
            let f = r[dr].mul(&lead_inv);
            if !f.is_zero() {
                for i in 0..=db {
                    let v = o.c[i].mul(&f);
                    r[dr - db + i] = r[dr - db + i].sub(&v);
                }
            }
            r.pop();
            while r.last().map_or(false, |x| x.is_zero()) {
                r.pop();
            }
        }
        Poly::new(&self.field, r)
    }

    /// Monic gcd.
    pub fn gcd(&self, o: &Poly) -> Poly {
        let mut a = self.reduce_content();
        let mut b = o.reduce_content();
        while !b.is_zero() {
            let r = a.rem(&b).reduce_content();
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let inv = a.c[a.degree()].inv();
        a.scale(&inv)
    }

    /// p / gcd(p, p'): same distinct roots, all simple.
    pub fn squarefree_part(&self) -> Poly {
        if self.is_zero() || self.degree() == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        if g.degree() == 0 {
            return self.reduce_content();
        }
        self.divide_exactly(&g).reduce_content()
    }

    fn divide_exactly(&self, o: &Poly) -> Poly {
        let db = o.degree();
        let lead_inv = o.c[db].inv();
        let mut r = self.c.clone();
        let mut q = vec![Scalar::zero(&self.field); self.c.len() - db];
        while r.len() > db {
            let dr = r.len() - 1;
            let f = r[dr].mul(&lead_inv);
            q[dr - db] = f.clone();
            for i in 0..=db {
                let v = o.c[i].mul(&f);
                r[dr - db + i] = r[dr - db + i].sub(&v);
            }
            r.pop();
            while r.last().map_or(false, |x| x.is_zero()) {
                r.pop();
            }
        }
        debug_assert!(r.is_empty(), "division was not exact");
        Poly::new(&self.field, q)
    }

    /// Sign of the polynomial at a rational point.
    pub fn sign_at_rat(&self, t: &Rat) -> i8 {
        self.eval_rat(t).sign()
    }

    /// Cheap interval filter: true when the polynomial certainly has no zero
    /// on [lo, hi]. False negatives are fine; false positives are not.
    pub fn fint_no_zero(&self, lo: &Rat, hi: &Rat) -> bool {
        use crate::num::FInt;
        if self.is_zero() {
            return false;
        }
        let t = FInt {
            lo: FInt::from_rat(lo).lo,
            hi: FInt::from_rat(hi).hi,
        };
        let mut acc = FInt::point(0.0);
        for c in self.c.iter().rev() {
            acc = acc.mul(t).add(c.to_fint());
        }
        matches!(acc.sign(), Some(s) if s != 0)
    }
}

/// Sturm chain of a squarefree polynomial; counts distinct real roots.
pub struct SturmChain {
    chain: Vec<Poly>,
}

impl SturmChain {
    pub fn new(p: &Poly) -> SturmChain {
        let p = p.reduce_content();
        let dp = p.derivative().reduce_content();
        let mut chain = vec![p, dp];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let r = chain[n - 2].rem(&chain[n - 1]).neg().reduce_content();
            if r.is_zero() {
                break;
            }
            chain.push(r);
        }
        SturmChain { chain }
    }

    fn variations(&self, t: &Rat) -> usize {
        let mut v = 0;
        let mut last = 0i8;
        for p in &self.chain {
            let s = p.sign_at_rat(t);
            if s == 0 {
                continue;
            }
            if last != 0 && s != last {
                v += 1;
            }
            last = s;
        }
        v
    }

    /// Distinct real roots in (a, b]; with non-root endpoints this equals the
    /// closed and open counts.
    pub fn count(&self, a: &Rat, b: &Rat) -> usize {
        debug_assert!(a <= b);
        self.variations(a).saturating_sub(self.variations(b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rat;

    fn q() -> Arc<NumberField> {
        NumberField::rationals()
    }

    fn rp(coeffs: &[i64]) -> Poly {
        let f = q();
        Poly::new(
            &f,
            coeffs.iter().map(|&c| Scalar::from_int(&f, c)).collect(),
        )
    }

    #[test]
    fn arithmetic_and_eval() {
        let p = rp(&[1, 0, 1]); // 1 + t^2
        let d = p.derivative();
        assert_eq!(d, rp(&[0, 2]));
        assert_eq!(p.eval_rat(&rat(1, 2)).as_rat().unwrap(), &rat(5, 4));
        let prod = p.mul(&rp(&[-1, 1])); // (t-1)(t^2+1)
        assert_eq!(prod, rp(&[-1, 1, -1, 1]));
    }

    #[test]
    fn gcd_and_squarefree() {
        // (t-1)^2 (t+2)
        let p = rp(&[-1, 1]).mul(&rp(&[-1, 1])).mul(&rp(&[2, 1]));
        let sf = p.squarefree_part();
        assert_eq!(sf.degree(), 2);
        // roots of sf are exactly {1, -2}
        assert_eq!(sf.sign_at_rat(&rat_int(1)), 0);
        assert_eq!(sf.sign_at_rat(&rat_int(-2)), 0);
        assert_ne!(sf.sign_at_rat(&rat_int(0)), 0);
        let g = rp(&[-1, 1]).gcd(&p);
        assert_eq!(g.degree(), 1);
        assert_eq!(g.sign_at_rat(&rat_int(1)), 0);
    }

    #[test]
    fn sturm_counting() {
        // (t - 1/3)(t - 2/3)
        let f = q();
        let p = Poly::new(
            &f,
            vec![
                Scalar::from_rat(&f, rat(2, 9)),
                Scalar::from_rat(&f, rat_int(-1)),
                Scalar::one(&f),
            ],
        );
        let chain = SturmChain::new(&p);
        assert_eq!(chain.count(&rat_int(0), &rat_int(1)), 2);
        assert_eq!(chain.count(&rat_int(0), &rat(1, 2)), 1);
        assert_eq!(chain.count(&rat(1, 2), &rat_int(1)), 1);
        // t^2 + 1 has no real roots
        let none = SturmChain::new(&rp(&[1, 0, 1]));
        assert_eq!(none.count(&rat_int(-10), &rat_int(10)), 0);
    }
}
