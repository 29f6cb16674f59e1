//! Exact planar vectors over field scalars, plus rational points.

use std::sync::Arc;

use crate::field::{NumberField, Scalar};
use crate::num::Rat;

/// A point or vector with exact field coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vec2 {
    pub x: Scalar,
    pub y: Scalar,
}

impl Vec2 {
    pub fn new(x: Scalar, y: Scalar) -> Vec2 {
        Vec2 { x, y }
    }

    pub fn zero(field: &Arc<NumberField>) -> Vec2 {
        Vec2 { x: Scalar::zero(field), y: Scalar::zero(field) }
    }

    pub fn from_rats(field: &Arc<NumberField>, x: &Rat, y: &Rat) -> Vec2 {
        Vec2 {
            x: Scalar::from_rat(field, x.clone()),
            y: Scalar::from_rat(field, y.clone()),
        }
    }

    pub fn add(&self, o: &Vec2) -> Vec2 {
        Vec2 { x: self.x.add(&o.x), y: self.y.add(&o.y) }
    }

    pub fn sub(&self, o: &Vec2) -> Vec2 {
        Vec2 { x: self.x.sub(&o.x), y: self.y.sub(&o.y) }
    }

    pub fn neg(&self) -> Vec2 {
        Vec2 { x: self.x.neg(), y: self.y.neg() }
    }

    pub fn scale(&self, s: &Scalar) -> Vec2 {
        Vec2 { x: self.x.mul(s), y: self.y.mul(s) }
    }

    pub fn scale_rat(&self, r: &Rat) -> Vec2 {
        Vec2 { x: self.x.scale_rat(r), y: self.y.scale_rat(r) }
    }

    pub fn dot(&self, o: &Vec2) -> Scalar {
        self.x.mul(&o.x).add(&self.y.mul(&o.y))
    }

    pub fn cross(&self, o: &Vec2) -> Scalar {
        self.x.mul(&o.y).sub(&self.y.mul(&o.x))
    }

    pub fn norm2(&self) -> Scalar {
        self.dot(self)
    }

    /// Counterclockwise quarter turn.
    pub fn perp(&self) -> Vec2 {
        Vec2 { x: self.y.neg(), y: self.x.clone() }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }
}

/// A point with plain rational coordinates (trajectory evaluations).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RatPoint {
    pub x: Rat,
    pub y: Rat,
}

impl RatPoint {
    pub fn new(x: Rat, y: Rat) -> RatPoint {
        RatPoint { x, y }
    }

    pub fn to_vec2(&self, field: &Arc<NumberField>) -> Vec2 {
        Vec2::from_rats(field, &self.x, &self.y)
    }

    pub fn sub(&self, o: &RatPoint) -> RatPoint {
        RatPoint::new(&self.x - &o.x, &self.y - &o.y)
    }

    pub fn dot(&self, o: &RatPoint) -> Rat {
        &self.x * &o.x + &self.y * &o.y
    }

    pub fn cross(&self, o: &RatPoint) -> Rat {
        &self.x * &o.y - &self.y * &o.x
    }

    pub fn norm2(&self) -> Rat {
        &self.x * &self.x + &self.y * &self.y
    }

    pub fn to_f64(&self) -> (f64, f64) {
        use num_traits::ToPrimitive;
        (self.x.to_f64().unwrap_or(f64::NAN), self.y.to_f64().unwrap_or(f64::NAN))
    }
}
