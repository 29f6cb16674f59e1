//! Trajectories, scenarios and the scenario file format.
//!
//! A scenario fixes k, a horizon [0, T], a seed and one polynomial
//! trajectory per point. Coordinates are rational polynomials of t
//! (lowest degree first), capped at a configurable maximum degree.

use std::path::Path;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::euclid;
use crate::geom::RatPoint;
use crate::num::{parse_rat, rat, rat_int, rat_to_string, Rat};
use crate::poly::RatPoly;

pub const DEFAULT_MAX_DEGREE: usize = 4;

/// Trajectory degree cap; SDG_MAX_DEGREE overrides the default of 4.
pub fn max_degree_cap() -> usize {
    std::env::var("SDG_MAX_DEGREE")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_DEGREE)
}

/// Per-point polynomial coordinate functions of time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    pub x: RatPoly,
    pub y: RatPoly,
}

impl Trajectory {
    pub fn stationary(p: &RatPoint) -> Trajectory {
        Trajectory {
            x: RatPoly::constant(p.x.clone()),
            y: RatPoly::constant(p.y.clone()),
        }
    }

    pub fn eval(&self, t: &Rat) -> RatPoint {
        RatPoint::new(self.x.eval(t), self.y.eval(t))
    }

    pub fn degree(&self) -> usize {
        self.x.degree().max(self.y.degree())
    }

    pub fn is_stationary(&self) -> bool {
        self.x.degree() == 0 && self.y.degree() == 0
    }
}

/// Exact polynomial evaluation of a trajectory at rational time t.
pub fn eval_trajectory(traj: &Trajectory, t: &Rat) -> RatPoint {
    traj.eval(t)
}

/// Orientation of three trajectories at time t: 1 counterclockwise,
/// 0 collinear, -1 clockwise.
pub fn orientation_at(a: &Trajectory, b: &Trajectory, c: &Trajectory, t: &Rat) -> i8 {
    euclid::orient(&a.eval(t), &b.eval(t), &c.eval(t))
}

/// Position of d relative to the circumcircle of (a, b, c) at time t:
/// 1 inside, 0 on, -1 outside. Requires a, b, c counterclockwise at t.
pub fn incircle_at(
    a: &Trajectory,
    b: &Trajectory,
    c: &Trajectory,
    d: &Trajectory,
    t: &Rat,
) -> i8 {
    euclid::incircle(&a.eval(t), &b.eval(t), &c.eval(t), &d.eval(t))
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub k: usize,
    pub horizon: Rat,
    pub seed: u64,
    pub trajectories: Vec<Trajectory>,
}

impl Scenario {
    pub fn n(&self) -> usize {
        self.trajectories.len()
    }

    pub fn eval_points(&self, t: &Rat) -> Vec<RatPoint> {
        self.trajectories.iter().map(|tr| tr.eval(t)).collect()
    }

    pub fn is_stationary(&self) -> bool {
        self.trajectories.iter().all(|t| t.is_stationary())
    }

    /// Maximum trajectory degree present.
    pub fn degree(&self) -> usize {
        self.trajectories.iter().map(|t| t.degree()).max().unwrap_or(0)
    }

    // -- file format -------------------------------------------------------

    pub fn from_json(text: &str) -> Result<Scenario> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::ParseError {
            at: format!("line {} column {}", e.line(), e.column()),
            msg: e.to_string(),
        })?;
        let obj = v.as_object().ok_or_else(|| Error::ParseError {
            at: "$".into(),
            msg: "scenario must be a JSON object".into(),
        })?;
        let k = obj
            .get("k")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::ParseError {
                at: "$.k".into(),
                msg: "missing or non-integer k".into(),
            })? as usize;
        let horizon_str = obj
            .get("horizon")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::ParseError {
                at: "$.horizon".into(),
                msg: "missing horizon string".into(),
            })?;
        let horizon = parse_rat(horizon_str).map_err(|msg| Error::ParseError {
            at: "$.horizon".into(),
            msg,
        })?;
        let seed = obj.get("seed").and_then(Value::as_u64).unwrap_or(0);
        let pts = obj
            .get("points")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::ParseError {
                at: "$.points".into(),
                msg: "missing points array".into(),
            })?;
        let mut trajectories = Vec::with_capacity(pts.len());
        for (i, p) in pts.iter().enumerate() {
            let parse_coord = |axis: &str| -> Result<RatPoly> {
                let arr = p
                    .get(axis)
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::ParseError {
                        at: format!("$.points[{i}].{axis}"),
                        msg: "missing coefficient array".into(),
                    })?;
                let mut coeffs = Vec::with_capacity(arr.len());
                for (j, c) in arr.iter().enumerate() {
                    let s = c.as_str().ok_or_else(|| Error::ParseError {
                        at: format!("$.points[{i}].{axis}[{j}]"),
                        msg: "coefficient must be a rational string".into(),
                    })?;
                    coeffs.push(parse_rat(s).map_err(|msg| Error::ParseError {
                        at: format!("$.points[{i}].{axis}[{j}]"),
                        msg,
                    })?);
                }
                if coeffs.is_empty() {
                    return Err(Error::ParseError {
                        at: format!("$.points[{i}].{axis}"),
                        msg: "empty coefficient array".into(),
                    });
                }
                Ok(RatPoly::new(coeffs))
            };
            trajectories.push(Trajectory {
                x: parse_coord("x")?,
                y: parse_coord("y")?,
            });
        }
        let sc = Scenario { k, horizon, seed, trajectories };
        sc.validate()?;
        Ok(sc)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k % 2 != 0 {
            return Err(Error::SchemaError(format!("k = {} is odd", self.k)));
        }
        if self.k < 8 {
            return Err(Error::SchemaError(format!("k = {} is below 8", self.k)));
        }
        if self.horizon <= rat_int(0) {
            return Err(Error::SchemaError("horizon must be positive".into()));
        }
        let cap = max_degree_cap();
        for (i, t) in self.trajectories.iter().enumerate() {
            if t.degree() > cap {
                return Err(Error::SchemaError(format!(
                    "point {i} has degree {} over the cap {cap}",
                    t.degree()
                )));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let points: Vec<Value> = self
            .trajectories
            .iter()
            .map(|t| {
                json!({
                    "x": t.x.0.iter().map(|c| rat_to_string(c)).collect::<Vec<_>>(),
                    "y": t.y.0.iter().map(|c| rat_to_string(c)).collect::<Vec<_>>(),
                })
            })
            .collect();
        let v = json!({
            "k": self.k,
            "horizon": rat_to_string(&self.horizon),
            "seed": self.seed,
            "points": points,
        });
        serde_json::to_string_pretty(&v).unwrap()
    }

    pub fn load(path: &Path) -> Result<Scenario> {
        let text = std::fs::read_to_string(path)?;
        Scenario::from_json(&text)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    // -- generation --------------------------------------------------------

    /// Stationary scenario over the given points.
    pub fn from_static(points: &[RatPoint], k: usize) -> Scenario {
        Scenario {
            k,
            horizon: rat_int(1),
            seed: 0,
            trajectories: points.iter().map(Trajectory::stationary).collect(),
        }
    }

    /// Seeded random scenario: positions on a coarse rational grid, motion
    /// coefficients smaller by one scale each degree.
    pub fn random(seed: u64, n: usize, k: usize, degree: usize, horizon: Rat) -> Scenario {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let den = 8i64;
        let vel_span = 2 * den;
        // initial positions avoid the rational grid directions (shared x, y,
        // x+y or x-y would be exactly degenerate under the polygon norms)
        let positions = grid_points(&mut rng, n, 12 * den);
        let mut trajectories = Vec::with_capacity(n);
        for (px, py) in positions {
            let mut coord = |c0: Rat| {
                let mut c = vec![c0];
                for d in 1..=degree {
                    let span = (vel_span / d as i64).max(1);
                    c.push(rat(rng.gen_range(-span..=span), den));
                }
                RatPoly::new(c)
            };
            let x = coord(rat(px, den));
            let y = coord(rat(py, den));
            trajectories.push(Trajectory { x, y });
        }
        Scenario { k, horizon, seed, trajectories }
    }
}

/// Integer grid points with pairwise distinct x, y, x+y and x-y.
fn grid_points(rng: &mut rand_chacha::ChaCha8Rng, n: usize, span: i64) -> Vec<(i64, i64)> {
    use rand::Rng;
    let mut out: Vec<(i64, i64)> = Vec::with_capacity(n);
    'next: while out.len() < n {
        let c = (rng.gen_range(-span..=span), rng.gen_range(-span..=span));
        for &(x, y) in &out {
            if x == c.0 || y == c.1 || x + y == c.0 + c.1 || x - y == c.0 - c.1 {
                continue 'next;
            }
        }
        out.push(c);
    }
    out
}

/// Seeded random static points on a coarse rational grid, avoiding the
/// exactly-degenerate grid directions (shared x, y, x+y or x-y).
pub fn random_points(seed: u64, n: usize, span: i64) -> Vec<RatPoint> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let den = 8i64;
    grid_points(&mut rng, n, span * den)
        .into_iter()
        .map(|(x, y)| RatPoint::new(rat(x, den), rat(y, den)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trajectory_eval_examples() {
        // x = t, y = 0 at t = 3 -> (3, 0)
        let tr = Trajectory {
            x: RatPoly::new(vec![rat_int(0), rat_int(1)]),
            y: RatPoly::new(vec![rat_int(0)]),
        };
        assert_eq!(eval_trajectory(&tr, &rat_int(3)), RatPoint::new(rat_int(3), rat_int(0)));
        // stationary (1, 2)
        let st = Trajectory {
            x: RatPoly::new(vec![rat_int(1)]),
            y: RatPoly::new(vec![rat_int(2)]),
        };
        assert_eq!(eval_trajectory(&st, &rat(7, 3)), RatPoint::new(rat_int(1), rat_int(2)));
        // x = t^2, y = t at 1/2 -> (1/4, 1/2)
        let sq = Trajectory {
            x: RatPoly::new(vec![rat_int(0), rat_int(0), rat_int(1)]),
            y: RatPoly::new(vec![rat_int(0), rat_int(1)]),
        };
        assert_eq!(eval_trajectory(&sq, &rat(1, 2)), RatPoint::new(rat(1, 4), rat(1, 2)));
    }

    #[test]
    fn orientation_and_incircle_at() {
        let p = |x: i64, y: i64| Trajectory::stationary(&RatPoint::new(rat_int(x), rat_int(y)));
        let t = rat_int(0);
        assert_eq!(orientation_at(&p(0, 0), &p(1, 0), &p(0, 1), &t), 1);
        assert_eq!(orientation_at(&p(0, 0), &p(1, 0), &p(2, 0), &t), 0);
        assert_eq!(orientation_at(&p(0, 0), &p(1, 0), &p(1, -1), &t), -1);
        assert_eq!(incircle_at(&p(0, 0), &p(1, 0), &p(0, 1), &p(1, 1), &t), 0);
        assert_eq!(
            incircle_at(&p(0, 0), &p(2, 0), &p(0, 2), &p(1, 1), &t),
            1
        );
        assert_eq!(incircle_at(&p(0, 0), &p(1, 0), &p(0, 1), &p(2, 2), &t), -1);
    }

    #[test]
    fn json_round_trip_and_schema() {
        let sc = Scenario::random(7, 5, 8, 2, rat_int(1));
        let text = sc.to_json();
        let back = Scenario::from_json(&text).unwrap();
        assert_eq!(back.k, 8);
        assert_eq!(back.n(), 5);
        assert_eq!(back.trajectories, sc.trajectories);

        let bad_k = text.replace("\"k\": 8", "\"k\": 7");
        assert!(matches!(Scenario::from_json(&bad_k), Err(Error::SchemaError(_))));
        let small_k = text.replace("\"k\": 8", "\"k\": 6");
        assert!(matches!(Scenario::from_json(&small_k), Err(Error::SchemaError(_))));
    }

    #[test]
    fn parse_errors() {
        let minimal = r#"{"k": 8, "horizon": "1", "seed": 1,
            "points": [{"x": ["0"], "y": ["0"]},
                       {"x": ["1"], "y": ["0"]},
                       {"x": ["0"], "y": ["1"]}]}"#;
        assert!(Scenario::from_json(minimal).is_ok());
        let bad = minimal.replace("\"1\"], \"y\": [\"0\"]},\n", "\"1/0\"], \"y\": [\"0\"]},\n");
        match Scenario::from_json(&bad) {
            Err(Error::ParseError { at, .. }) => assert!(at.contains("points"), "{at}"),
            other => panic!("expected ParseError, got {other:?}"),
        }
        assert!(matches!(
            Scenario::from_json("{"),
            Err(Error::ParseError { .. })
        ));
    }

    #[test]
    fn degree_cap_enforced() {
        let mut sc = Scenario::random(7, 3, 8, 2, rat_int(1));
        sc.trajectories[0].x = RatPoly::new(vec![
            rat_int(0),
            rat_int(1),
            rat_int(1),
            rat_int(1),
            rat_int(1),
            rat_int(1),
        ]);
        assert!(matches!(sc.validate(), Err(Error::SchemaError(_))));
    }
}
