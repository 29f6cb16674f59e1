//! The quadratic-space SDG baseline: one kinetic tournament K_i(p) per point
//! and direction over the directional distances phi_i[p, .]; an edge pq is
//! stable when q wins two cyclically-consecutive tournaments of p (or p of
//! q). Maintains a (2 alpha, alpha)-stable Delaunay graph.

use std::collections::BTreeSet;

use serde_json::json;

use crate::direction::DirectionSet;
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::num::{rat_int, Rat};
use crate::poly::{Poly, RatPoly};
use crate::roots::{isolate_roots, TimeRoot};
use crate::scenario::{Scenario, Trajectory};
use crate::tournament::{CertUpdate, Entry, KineticTournament, ValueFn};
use crate::trace::{EventKind, EventQueue, Stats, TraceEvent};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum BEvent {
    /// Tournament comparison certificate.
    Cert { tid: usize, node: usize, gen: u64 },
    /// <q-p, u_i> changes sign (p < q): one geometric event that flips q's
    /// membership in K_i(p) and p's membership in the antipodal K_{i+s}(q).
    Domain { p: usize, q: usize, i: usize },
}

/// phi_i[p,q](t) as a ratio of polynomials over the direction field:
/// |q-p|^2 / (2 <q-p, u_i>).
fn phi_value(
    dirs: &DirectionSet,
    trajs: &[Trajectory],
    p: usize,
    q: usize,
    i: usize,
) -> (ValueFn, Poly) {
    let field = dirs.field();
    let dx = trajs[q].x.sub(&trajs[p].x);
    let dy = trajs[q].y.sub(&trajs[p].y);
    let n2 = dx.mul(&dx).add(&dy.mul(&dy));
    let num = Poly::from_rat_poly(field, &n2);
    let u = dirs.u(i);
    let den = Poly::from_rat_poly(field, &dx)
        .scale(&u.x)
        .add(&Poly::from_rat_poly(field, &dy).scale(&u.y))
        .scale(&Scalar::from_int(field, 2));
    (ValueFn::Ratio { num: num.clone(), den: den.clone() }, den)
}

pub struct BaselineSdg {
    pub dirs: DirectionSet,
    trajs: Vec<Trajectory>,
    pub horizon: Rat,
    /// tournament for (p, i) at index p * k + i
    tournaments: Vec<KineticTournament>,
    winners: Vec<Option<usize>>,
    queue: EventQueue<BEvent>,
    pub now: TimeRoot,
    pub sdg: BTreeSet<(usize, usize)>,
    pub trace: Vec<TraceEvent>,
    pub stats: Stats,
}

impl BaselineSdg {
    pub fn new(scenario: &Scenario) -> Result<BaselineSdg> {
        let dirs = DirectionSet::new(scenario.k)?;
        let n = scenario.n();
        let k = dirs.k;
        let field = dirs.field().clone();
        let now = TimeRoot::rational(&field, &rat_int(0));
        let horizon = scenario.horizon.clone();
        let mut s = BaselineSdg {
            dirs,
            trajs: scenario.trajectories.clone(),
            horizon: horizon.clone(),
            tournaments: Vec::with_capacity(n * k),
            winners: vec![None; n * k],
            queue: EventQueue::new(),
            now,
            sdg: BTreeSet::new(),
            trace: Vec::new(),
            stats: Stats::default(),
        };
        for p in 0..n {
            for i in 0..k {
                let mut entries = Vec::new();
                for q in 0..n {
                    if q == p {
                        continue;
                    }
                    let (val, den) = phi_value(&s.dirs, &s.trajs, p, q, i);
                    // membership while the denominator is positive; an
                    // identically-zero denominator means phi is forever
                    // infinite (ray parallel to the bisector)
                    if s.now.sign_just_after(&den) > 0 {
                        entries.push(Entry { id: q, val });
                    }
                    if p < q && i < s.dirs.s {
                        s.schedule_domain_events(p, q, i, &den)?;
                    }
                }
                let (t, ups) = KineticTournament::build(entries, &s.now, horizon.clone())?;
                let tid = p * k + i;
                s.winners[tid] = t.root_winner();
                s.tournaments.push(t);
                s.push_cert_updates(tid, ups);
            }
        }
        let mut initial = BTreeSet::new();
        for p in 0..n {
            for q in 0..n {
                if p < q && s.pair_is_stable(p, q) {
                    initial.insert((p, q));
                }
            }
        }
        s.sdg = initial;
        Ok(s)
    }

    fn schedule_domain_events(&mut self, p: usize, q: usize, i: usize, den: &Poly) -> Result<()> {
        if den.is_zero() || den.fint_no_zero(&rat_int(0), &self.horizon) {
            return Ok(());
        }
        let roots = isolate_roots(den, &rat_int(0), &self.horizon)?;
        for r in roots {
            if r.cmp_root(&self.now) != std::cmp::Ordering::Greater {
                continue;
            }
            let before = r.sign_just_before(den);
            let after = r.sign_just_after(den);
            if before == after {
                continue; // touch: momentary infinity, no membership change
            }
            if after == 0 {
                return Err(Error::DegenerateMotion(
                    "denominator root without sign resolution".into(),
                ));
            }
            self.queue.push(r, BEvent::Domain { p, q, i });
        }
        Ok(())
    }

    fn push_cert_updates(&mut self, tid: usize, ups: Vec<CertUpdate>) {
        for u in ups {
            if let Some(due) = u.due {
                self.queue.push(due, BEvent::Cert { tid, node: u.node, gen: u.gen });
            }
        }
    }

    /// Is (p, q) an SDG edge under the two-consecutive-wins rule?
    fn pair_is_stable(&self, p: usize, q: usize) -> bool {
        let k = self.dirs.k;
        let wins = |a: usize, b: usize| -> bool {
            (0..k).any(|i| {
                self.winners[a * k + i] == Some(b) && self.winners[a * k + (i + 1) % k] == Some(b)
            })
        };
        wins(p, q) || wins(q, p)
    }

    fn update_pair(&mut self, p: usize, q: usize, at: &TimeRoot) {
        let key = if p < q { (p, q) } else { (q, p) };
        let stable = self.pair_is_stable(p, q);
        let present = self.sdg.contains(&key);
        if stable && !present {
            self.sdg.insert(key);
            self.stats.count(EventKind::SdgAdd);
            self.trace.push(TraceEvent::new(at, EventKind::SdgAdd, Some(key), json!({})));
        } else if !stable && present {
            self.sdg.remove(&key);
            self.stats.count(EventKind::SdgRemove);
            self.trace.push(TraceEvent::new(at, EventKind::SdgRemove, Some(key), json!({})));
        }
    }

    /// Process all events strictly before t_target.
    pub fn advance_to(&mut self, target: &Rat) -> Result<()> {
        if target > &self.horizon {
            return Err(Error::SchemaError(format!(
                "target {target} beyond horizon {}",
                self.horizon
            )));
        }
        while let Some((due, ev)) = self.queue.pop_before(target) {
            // staleness: certificates carry generations
            let fresh = match &ev {
                BEvent::Cert { tid, node, gen } => self.tournaments[*tid].is_fresh(*node, *gen),
                BEvent::Domain { .. } => true,
            };
            if !fresh {
                continue;
            }
            if due.cmp_root(&self.now) != std::cmp::Ordering::Greater {
                return Err(Error::DegenerateMotion(format!(
                    "coincident event times in the baseline queue at ~{} ({ev:?})",
                    due.approx()
                )));
            }
            self.now = due.clone();
            match ev {
                BEvent::Cert { tid, node, gen } => {
                    let now = self.now.clone();
                    if let Some((root_changed, ups)) =
                        self.tournaments[tid].handle_cert(node, gen, &now)?
                    {
                        self.push_cert_updates(tid, ups);
                        if root_changed {
                            self.on_winner_change(tid, &due);
                        }
                    }
                }
                BEvent::Domain { p, q, i } => {
                    let k = self.dirs.k;
                    let now = self.now.clone();
                    // after-sign of <q-p, u_i> decides which side enters
                    let (_, den) = phi_value(&self.dirs, &self.trajs, p, q, i);
                    let after = now.sign_just_after(&den);
                    if after == 0 {
                        return Err(Error::DegenerateMotion(
                            "denominator vanishes on an interval".into(),
                        ));
                    }
                    // one root of <q-p, u_i> flips four memberships:
                    // directions i and i+s have opposite denominators, and
                    // <p-q, u_{i+s}> = <q-p, u_i> pairs owners antipodally
                    let s_half = self.dirs.s;
                    let sides = [
                        (p, i, q, after > 0),
                        (q, (i + s_half) % k, p, after > 0),
                        (p, (i + s_half) % k, q, after < 0),
                        (q, i, p, after < 0),
                    ];
                    for (owner, dir, member, enters) in sides {
                        let tid = owner * k + dir;
                        let ups = if enters {
                            let (val, _) = phi_value(&self.dirs, &self.trajs, owner, member, dir);
                            self.tournaments[tid].insert(Entry { id: member, val }, &now)?
                        } else {
                            self.tournaments[tid].remove(member, &now)?
                        };
                        self.push_cert_updates(tid, ups);
                        if self.winners[tid] != self.tournaments[tid].root_winner() {
                            self.on_winner_change(tid, &due);
                        }
                    }
                }
            }
            self.stats.max_queue = self.stats.max_queue.max(self.queue.len());
        }
        Ok(())
    }

    fn on_winner_change(&mut self, tid: usize, at: &TimeRoot) {
        let k = self.dirs.k;
        let p = tid / k;
        let old = self.winners[tid];
        let new = self.tournaments[tid].root_winner();
        self.winners[tid] = new;
        self.stats.count(EventKind::Tournament);
        self.trace.push(TraceEvent::new(
            at,
            EventKind::Tournament,
            None,
            json!({"p": p, "dir": tid % k, "old": old, "new": new}),
        ));
        for cand in [old, new].into_iter().flatten() {
            self.update_pair(p, cand, at);
        }
    }

    pub fn current_sdg(&self) -> &BTreeSet<(usize, usize)> {
        &self.sdg
    }

    /// Static oracle: evaluate the two-consecutive-wins rule from scratch at
    /// rational time t.
    pub fn static_sdg_at(
        dirs: &DirectionSet,
        trajs: &[Trajectory],
        t: &Rat,
    ) -> Result<BTreeSet<(usize, usize)>> {
        let n = trajs.len();
        let k = dirs.k;
        let points: Vec<crate::geom::RatPoint> = trajs.iter().map(|tr| tr.eval(t)).collect();
        let mut winners = vec![None; n * k];
        for (p, row) in winners.chunks_mut(k).enumerate() {
            for (i, w) in row.iter_mut().enumerate() {
                *w = crate::euclid::neighbor_in_direction(&points, p, &dirs.u(i))?;
            }
        }
        let mut sdg = BTreeSet::new();
        for p in 0..n {
            for q in p + 1..n {
                let wins = |a: usize, b: usize| -> bool {
                    (0..k).any(|i| {
                        winners[a * k + i] == Some(b) && winners[a * k + (i + 1) % k] == Some(b)
                    })
                };
                if wins(p, q) || wins(q, p) {
                    sdg.insert((p, q));
                }
            }
        }
        Ok(sdg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::RatPoint;
    use crate::num::rat;

    fn pt(x: i64, y: i64) -> RatPoint {
        RatPoint::new(rat_int(x), rat_int(y))
    }

    #[test]
    fn two_points_always_stable() {
        let sc = Scenario::from_static(&[pt(0, 0), pt(2, 1)], 8);
        let mut b = BaselineSdg::new(&sc).unwrap();
        assert!(b.sdg.contains(&(0, 1)));
        b.advance_to(&rat_int(1)).unwrap();
        assert!(b.sdg.contains(&(0, 1)));
        assert!(b.trace.is_empty(), "stationary scenario produced events");
    }

    #[test]
    fn stationary_matches_static_oracle() {
        let pts = vec![pt(0, 0), pt(5, 1), pt(1, 6), pt(7, 7), pt(-3, 4)];
        let sc = Scenario::from_static(&pts, 8);
        let b = BaselineSdg::new(&sc).unwrap();
        let stat = BaselineSdg::static_sdg_at(&b.dirs, &sc.trajectories, &rat(1, 7)).unwrap();
        assert_eq!(b.sdg, stat);
    }

    #[test]
    fn kinetic_matches_static_along_the_run() {
        // two moving points among statics, degree 1
        let mut sc = Scenario::from_static(
            &[pt(0, 0), pt(8, 1), pt(2, 7), pt(9, 8), pt(-4, 5)],
            8,
        );
        sc.trajectories[1].x = RatPoly::new(vec![rat_int(8), rat_int(-3)]);
        sc.trajectories[2].y = RatPoly::new(vec![rat_int(7), rat(5, 2)]);
        let mut b = BaselineSdg::new(&sc).unwrap();
        for i in 1..=16 {
            let t = rat(i, 16) * sc.horizon.clone();
            b.advance_to(&t).unwrap();
            let stat = BaselineSdg::static_sdg_at(&b.dirs, &sc.trajectories, &t).unwrap();
            assert_eq!(b.sdg, stat, "at t = {t}");
        }
    }
}
