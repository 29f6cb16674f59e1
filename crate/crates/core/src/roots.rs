//! Event times as isolated real roots of field polynomials.
//!
//! A `TimeRoot` owns a squarefree defining polynomial and an open isolating
//! interval with rational non-root endpoints. Comparison refines intervals
//! until they separate, with exact equality detected through the gcd of the
//! defining polynomials.

use std::cell::RefCell;
use std::rc::Rc;


use crate::error::{Error, Result};
use crate::num::{rat_int, Rat};
use crate::poly::{Poly, SturmChain};

#[derive(Clone)]
pub struct TimeRoot {
    poly: Rc<Poly>,
    chain: Rc<SturmChain>,
    iv: RefCell<(Rat, Rat)>,
}

impl std::fmt::Debug for TimeRoot {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let (lo, hi) = self.iv.borrow().clone();
        write!(f, "TimeRoot(~{:.6} in [{}, {}])", self.approx(), lo, hi)
    }
}

impl TimeRoot {
    fn assemble(poly: Rc<Poly>, chain: Rc<SturmChain>, lo: Rat, hi: Rat) -> TimeRoot {
        debug_assert!(poly.sign_at_rat(&lo) != 0 && poly.sign_at_rat(&hi) != 0);
        debug_assert_eq!(chain.count(&lo, &hi), 1);
        TimeRoot { poly, chain, iv: RefCell::new((lo, hi)) }
    }

    /// The root that is exactly the rational r.
    pub fn rational(field: &std::sync::Arc<crate::field::NumberField>, r: &Rat) -> TimeRoot {
        let poly = Poly::linear_root(field, r);
        let chain = SturmChain::new(&poly);
        let lo = r - rat_int(1);
        let hi = r + rat_int(1);
        TimeRoot::assemble(Rc::new(poly), Rc::new(chain), lo, hi)
    }

    pub fn defining_poly(&self) -> &Poly {
        &self.poly
    }

    pub fn interval(&self) -> (Rat, Rat) {
        self.iv.borrow().clone()
    }

    /// Current interval width (the spec's cached refinement state).
    pub fn width(&self) -> Rat {
        let (lo, hi) = self.iv.borrow().clone();
        hi - lo
    }

    pub fn approx(&self) -> f64 {
        use num_traits::ToPrimitive;
        let (lo, hi) = self.iv.borrow().clone();
        let m = (&lo + &hi) / rat_int(2);
        m.to_f64().unwrap_or(f64::NAN)
    }

    /// Halve the isolating interval.
    pub fn refine(&self) {
        let (lo, hi) = self.iv.borrow().clone();
        let mid = (&lo + &hi) / rat_int(2);
        let sm = self.poly.sign_at_rat(&mid);
        if sm == 0 {
            // the root is exactly mid; re-center a tight interval around it
            let w = (&hi - &lo) / rat_int(8);
            *self.iv.borrow_mut() = (&mid - &w, &mid + &w);
            debug_assert!(self.poly.sign_at_rat(&(&mid - &w)) != 0);
            debug_assert!(self.poly.sign_at_rat(&(&mid + &w)) != 0);
            return;
        }
        let slo = self.poly.sign_at_rat(&lo);
        if sm != slo {
            *self.iv.borrow_mut() = (lo, mid);
        } else {
            *self.iv.borrow_mut() = (mid, hi);
        }
    }

    /// Refine until the interval width is below the bound.
    pub fn refine_below(&self, w: &Rat) {
        while &self.width() > w {
            self.refine();
        }
    }

    /// Exact order on the real roots; equal algebraic numbers compare Equal
    /// even when defined by different polynomials.
    pub fn cmp_root(&self, other: &TimeRoot) -> std::cmp::Ordering {
        use std::cmp::Ordering::*;
        if Rc::ptr_eq(&self.poly, &other.poly) && self.interval() == other.interval() {
            return Equal;
        }
        let mut tried_gcd = false;
        loop {
            let (alo, ahi) = self.interval();
            let (blo, bhi) = other.interval();
            if ahi <= blo {
                return Less;
            }
            if bhi <= alo {
                return Greater;
            }
            if !tried_gcd {
                tried_gcd = true;
                let g = self.poly.gcd(&other.poly);
                if !g.is_zero() && g.degree() >= 1 {
                    let gc = SturmChain::new(&g);
                    let in_a = gc.count(&alo, &ahi) == 1;
                    let in_b = gc.count(&blo, &bhi) == 1;
                    if in_a && in_b {
                        let lo = alo.clone().min(blo.clone());
                        let hi = ahi.clone().max(bhi.clone());
                        if gc.count(&lo, &hi) == 1 {
                            return Equal;
                        }
                    }
                }
            }
            self.refine();
            other.refine();
        }
    }

    /// Order against a rational time.
    pub fn cmp_rat(&self, r: &Rat) -> std::cmp::Ordering {
        use std::cmp::Ordering::*;
        loop {
            let (lo, hi) = self.interval();
            if &hi <= r {
                return Less;
            }
            if &lo >= r {
                return Greater;
            }
            if self.poly.sign_at_rat(r) == 0 {
                return Equal; // r is inside the interval and is a root, hence the root
            }
            self.refine();
        }
    }

    pub fn is_rational(&self, r: &Rat) -> bool {
        self.cmp_rat(r) == std::cmp::Ordering::Equal
    }

    /// Exact sign of f at this root.
    pub fn sign_of(&self, f: &Poly) -> i8 {
        if f.is_zero() {
            return 0;
        }
        let g = self.poly.gcd(f);
        if !g.is_zero() && g.degree() >= 1 {
            let gc = SturmChain::new(&g);
            let (lo, hi) = self.interval();
            if gc.count(&lo, &hi) == 1 {
                return 0;
            }
        }
        loop {
            let (lo, hi) = self.interval();
            let slo = f.sign_at_rat(&lo);
            let shi = f.sign_at_rat(&hi);
            if slo == shi && slo != 0 {
                // sign-definite over the interval? only if f has no root inside
                let fc = SturmChain::new(&f.squarefree_part());
                if fc.count(&lo, &hi) == 0 {
                    return slo;
                }
            }
            self.refine();
        }
    }

    /// Sign of f on (root, root + eps): the first nonvanishing derivative wins.
    pub fn sign_just_after(&self, f: &Poly) -> i8 {
        if f.is_zero() {
            return 0;
        }
        let s = self.sign_of(f);
        if s != 0 {
            return s;
        }
        self.sign_just_after(&f.derivative())
    }

    /// Sign of f on (root - eps, root).
    pub fn sign_just_before(&self, f: &Poly) -> i8 {
        if f.is_zero() {
            return 0;
        }
        let s = self.sign_of(f);
        if s != 0 {
            return s;
        }
        -self.sign_just_before(&f.derivative())
    }

    /// A rational time strictly inside (self, other).
    pub fn rational_between(&self, other: &TimeRoot) -> Rat {
        debug_assert_eq!(self.cmp_root(other), std::cmp::Ordering::Less);
        loop {
            let (_, ahi) = self.interval();
            let (blo, _) = other.interval();
            if ahi < blo {
                return (&ahi + &blo) / rat_int(2);
            }
            if ahi == blo {
                return ahi;
            }
            self.refine();
            other.refine();
        }
    }
}

/// Distinct real roots of p in the closed horizon [lo, hi], increasing.
/// Errors with DegenerateMotion when p is identically zero.
pub fn isolate_roots(p: &Poly, lo: &Rat, hi: &Rat) -> Result<Vec<TimeRoot>> {
    if p.is_zero() {
        return Err(Error::DegenerateMotion(
            "identically-zero certificate polynomial".into(),
        ));
    }
    if p.degree() == 0 {
        return Ok(vec![]);
    }
    let sf = Rc::new(p.squarefree_part());
    let chain = Rc::new(SturmChain::new(&sf));
    let mut out: Vec<TimeRoot> = Vec::new();

    // nudge the working window so its endpoints are non-roots but the window
    // still covers [lo, hi]
    let mut a = lo.clone();
    let mut step = rat_int(1);
    while sf.sign_at_rat(&a) == 0 {
        // lo itself is a root: widen left past it, taking care not to pick
        // up another root. (cand, a] then contains exactly the root at a.
        let cand = &a - &step;
        if chain.count(&cand, &a) == 1 && sf.sign_at_rat(&cand) != 0 {
            a = cand;
            break;
        }
        step = step / rat_int(2);
    }
    debug_assert!(sf.sign_at_rat(&a) != 0);
    let mut b = hi.clone();
    let mut step = rat_int(1);
    while sf.sign_at_rat(&b) == 0 {
        // hi itself is a root: widen right past it without catching another
        let cand = &b + &step;
        if chain.count(&b, &cand) == 0 && sf.sign_at_rat(&cand) != 0 {
            b = cand;
            break;
        }
        step = step / rat_int(2);
    }
    debug_assert!(sf.sign_at_rat(&b) != 0);

    let total = chain.count(&a, &b);
    if total == 0 {
        return Ok(out);
    }
    let mut stack = vec![(a, b, total)];
    while let Some((x, y, n)) = stack.pop() {
        if n == 1 {
            out.push(TimeRoot::assemble(sf.clone(), chain.clone(), x, y));
            continue;
        }
        let mut mid = (&x + &y) / rat_int(2);
        if sf.sign_at_rat(&mid) == 0 {
            // rational root exactly at mid: shrink a private interval for it
            let mut w = (&y - &x) / rat_int(4);
            loop {
                let l = &mid - &w;
                let r = &mid + &w;
                if sf.sign_at_rat(&l) != 0
                    && sf.sign_at_rat(&r) != 0
                    && chain.count(&l, &r) == 1
                {
                    let left_n = chain.count(&x, &l);
                    let right_n = chain.count(&r, &y);
                    out.push(TimeRoot::assemble(sf.clone(), chain.clone(), l.clone(), r.clone()));
                    if left_n > 0 {
                        stack.push((x.clone(), l, left_n));
                    }
                    if right_n > 0 {
                        stack.push((r, y.clone(), right_n));
                    }
                    break;
                }
                w = w / rat_int(2);
            }
            continue;
        }
        let left = chain.count(&x, &mid);
        let right = n - left;
        if left > 0 {
            stack.push((x, mid.clone(), left));
        }
        if right > 0 {
            stack.push((mid, y, right));
        }
    }
    out.sort_by(|p, q| p.cmp_root(q));
    Ok(out)
}

/// First root strictly after `now` and at most `horizon_end`, if any.
pub fn first_root_after(p: &Poly, now: &Rat, horizon_end: &Rat) -> Result<Option<TimeRoot>> {
    if p.is_zero() {
        return Err(Error::DegenerateMotion(
            "identically-zero certificate polynomial".into(),
        ));
    }
    let roots = isolate_roots(p, now, horizon_end)?;
    for r in roots {
        if r.cmp_rat(now) == std::cmp::Ordering::Greater {
            return Ok(Some(r));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{NumberField, Scalar};
    use crate::num::rat;
    use std::sync::Arc;

    fn q() -> Arc<NumberField> {
        NumberField::rationals()
    }

    fn ipoly(coeffs: &[i64]) -> Poly {
        let f = q();
        Poly::new(&f, coeffs.iter().map(|&c| Scalar::from_int(&f, c)).collect())
    }

    fn qpoly(coeffs: &[Rat]) -> Poly {
        let f = q();
        Poly::new(&f, coeffs.iter().map(|c| Scalar::from_rat(&f, c.clone())).collect())
    }

    #[test]
    fn isolates_simple_roots() {
        // t^2 - 1 on [0, 3]: one root near 1
        let roots = isolate_roots(&ipoly(&[-1, 0, 1]), &rat_int(0), &rat_int(3)).unwrap();
        assert_eq!(roots.len(), 1);
        assert_eq!(roots[0].cmp_rat(&rat_int(1)), std::cmp::Ordering::Equal);

        // t^2 + 1: none
        let roots = isolate_roots(&ipoly(&[1, 0, 1]), &rat_int(0), &rat_int(3)).unwrap();
        assert!(roots.is_empty());

        // zero polynomial: degenerate motion
        let f = q();
        assert!(matches!(
            isolate_roots(&Poly::zero(&f), &rat_int(0), &rat_int(1)),
            Err(Error::DegenerateMotion(_))
        ));
    }

    #[test]
    fn isolates_two_close_roots_ordered() {
        // (t - 1/3)(t - 2/3) = t^2 - t + 2/9 on [0,1]
        let p = qpoly(&[rat(2, 9), rat_int(-1), rat_int(1)]);
        let roots = isolate_roots(&p, &rat_int(0), &rat_int(1)).unwrap();
        assert_eq!(roots.len(), 2);
        let (l0, h0) = roots[0].interval();
        let (l1, h1) = roots[1].interval();
        assert!(h0 <= l1 || l0 < l1); // ordered
        assert_eq!(roots[0].cmp_rat(&rat(1, 3)), std::cmp::Ordering::Equal);
        assert_eq!(roots[1].cmp_rat(&rat(2, 3)), std::cmp::Ordering::Equal);
        assert!(h1 >= l1 && h0 >= l0);
        // cross-check: sign changes at 0, 1/2, 1
        assert_eq!(p.sign_at_rat(&rat_int(0)), 1);
        assert_eq!(p.sign_at_rat(&rat(1, 2)), -1);
        assert_eq!(p.sign_at_rat(&rat_int(1)), 1);
    }

    #[test]
    fn root_at_horizon_endpoint() {
        // root exactly at 0 and at 1
        let p = ipoly(&[0, 1]).mul(&ipoly(&[-1, 1]));
        let roots = isolate_roots(&p, &rat_int(0), &rat_int(1)).unwrap();
        assert_eq!(roots.len(), 2);
        assert!(roots[0].is_rational(&rat_int(0)));
        assert!(roots[1].is_rational(&rat_int(1)));
    }

    #[test]
    fn compare_roots_total_order() {
        // root of t-1 vs root of t-2
        let a = TimeRoot::rational(&q(), &rat_int(1));
        let b = TimeRoot::rational(&q(), &rat_int(2));
        assert_eq!(a.cmp_root(&b), std::cmp::Ordering::Less);

        // same algebraic number from different polynomials: t^2-2 vs 2t^2-4
        let p1 = ipoly(&[-2, 0, 1]);
        let p2 = ipoly(&[-4, 0, 2]);
        let r1 = &isolate_roots(&p1, &rat_int(1), &rat_int(2)).unwrap()[0];
        let r2 = &isolate_roots(&p2, &rat_int(1), &rat_int(2)).unwrap()[0];
        assert_eq!(r1.cmp_root(r2), std::cmp::Ordering::Equal);

        // 1/3 vs 1/3 + 1e-9: resolved by refinement
        let x = TimeRoot::rational(&q(), &rat(1, 3));
        let y = TimeRoot::rational(&q(), &(rat(1, 3) + rat(1, 1_000_000_000)));
        assert_eq!(x.cmp_root(&y), std::cmp::Ordering::Less);
        x.refine_below(&rat(1, 2_000_000_000));
        assert!(x.width() < rat(1, 1_000_000_000));
    }

    #[test]
    fn signs_at_and_after_roots() {
        // tau = sqrt(2) isolated in (1,2); f = t^2 - 2 vanishes there
        let p = ipoly(&[-2, 0, 1]);
        let tau = &isolate_roots(&p, &rat_int(1), &rat_int(2)).unwrap()[0];
        assert_eq!(tau.sign_of(&p), 0);
        assert_eq!(tau.sign_of(&ipoly(&[-1, 1])), 1); // t - 1 > 0 at sqrt2
        assert_eq!(tau.sign_of(&ipoly(&[2, -1])), 1); // 2 - t
        assert_eq!(tau.sign_just_after(&p), 1); // increasing through the root
        assert_eq!(tau.sign_just_before(&p), -1);
        // double contact: f = (t^2-2)^2 stays nonnegative
        let sq = p.mul(&p);
        assert_eq!(tau.sign_just_after(&sq), 1);
        assert_eq!(tau.sign_just_before(&sq), 1);
    }

    #[test]
    fn first_root_after_skips_now() {
        let p = ipoly(&[0, 1]).mul(&ipoly(&[-1, 2])); // roots 0 and 1/2
        let r = first_root_after(&p, &rat_int(0), &rat_int(2)).unwrap().unwrap();
        assert!(r.is_rational(&rat(1, 2)));
        let none = first_root_after(&p, &rat(3, 4), &rat_int(2)).unwrap();
        assert!(none.is_none());
    }
}
