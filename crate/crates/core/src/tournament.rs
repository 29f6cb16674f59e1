//! Kinetic and dynamic tournaments: a balanced binary tree of winners over
//! time-varying values, with one comparison certificate per internal node.
//!
//! The tree is array-backed with a complete shape: insertions append a leaf,
//! deletions swap-remove with the last leaf, so the height is always
//! ceil(log2 n) + O(1) and each update touches the certificates on at most
//! two leaf-to-root paths.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::num::Rat;
use crate::poly::Poly;
use crate::roots::{first_root_after, TimeRoot};

/// A value changing with time: a polynomial or a ratio with a denominator
/// positive throughout the entry's presence in the tree.
#[derive(Debug, Clone)]
pub enum ValueFn {
    Poly(Poly),
    Ratio { num: Poly, den: Poly },
}

impl ValueFn {
    pub fn num(&self) -> Poly {
        match self {
            ValueFn::Poly(p) => p.clone(),
            ValueFn::Ratio { num, .. } => num.clone(),
        }
    }

    pub fn den(&self) -> Option<&Poly> {
        match self {
            ValueFn::Poly(_) => None,
            ValueFn::Ratio { den, .. } => Some(den),
        }
    }

    /// Exact value at a rational time; None when the denominator is not
    /// positive there (the value is infinite / undefined).
    pub fn eval_at(&self, t: &Rat) -> Option<Scalar> {
        match self {
            ValueFn::Poly(p) => Some(p.eval_rat(t)),
            ValueFn::Ratio { num, den } => {
                let d = den.eval_rat(t);
                if d.sign() <= 0 {
                    None
                } else {
                    Some(num.eval_rat(t).div(&d))
                }
            }
        }
    }

    /// num_a * den_b - num_b * den_a: sign matches value order while both
    /// denominators are positive.
    pub fn cross(&self, other: &ValueFn) -> Poly {
        let field = self.num().field().clone();
        let one = Poly::constant(Scalar::one(&field));
        let (na, da) = match self {
            ValueFn::Poly(p) => (p.clone(), one.clone()),
            ValueFn::Ratio { num, den } => (num.clone(), den.clone()),
        };
        let (nb, db) = match other {
            ValueFn::Poly(p) => (p.clone(), one),
            ValueFn::Ratio { num, den } => (num.clone(), den.clone()),
        };
        na.mul(&db).sub(&nb.mul(&da))
    }
}

/// First time strictly after `now` (and at most `horizon`) where f changes
/// sign. Touch roots (no sign change) are skipped.
pub fn first_sign_change_after(f: &Poly, now: &TimeRoot, horizon: &Rat) -> Result<Option<TimeRoot>> {
    if f.is_zero() {
        return Err(Error::DegenerateMotion(
            "identically zero comparison polynomial".into(),
        ));
    }
    let (now_lo, _) = now.interval();
    if &now_lo >= horizon {
        return Ok(None);
    }
    // cheap interval filter: no roots at all in the window
    if f.fint_no_zero(&now_lo, horizon) {
        return Ok(None);
    }
    let roots = crate::roots::isolate_roots(f, &now_lo, horizon)?;
    for r in roots {
        if r.cmp_root(now) != Ordering::Greater {
            continue;
        }
        if r.sign_just_before(f) != r.sign_just_after(f) {
            return Ok(Some(r));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone)]
pub struct Entry {
    pub id: usize,
    pub val: ValueFn,
}

/// Certificate (re)scheduling instruction for the owner's event queue.
#[derive(Debug, Clone)]
pub struct CertUpdate {
    pub node: usize,
    pub gen: u64,
    pub due: Option<TimeRoot>,
}

#[derive(Debug)]
pub struct KineticTournament {
    cap: usize,
    len: usize,
    leaves: Vec<Option<Entry>>,
    /// winner id per tree node (1-based heap layout, leaves at cap..2cap)
    winner: Vec<Option<usize>>,
    cert: Vec<Option<TimeRoot>>,
    gen: Vec<u64>,
    id_slot: BTreeMap<usize, usize>,
    horizon: Rat,
}

impl KineticTournament {
    pub fn new(horizon: Rat) -> KineticTournament {
        KineticTournament {
            cap: 1,
            len: 0,
            leaves: vec![None],
            winner: vec![None; 2],
            cert: vec![None; 2],
            gen: vec![0; 2],
            id_slot: BTreeMap::new(),
            horizon,
        }
    }

    /// Build with all entries present at `now`.
    pub fn build(entries: Vec<Entry>, now: &TimeRoot, horizon: Rat) -> Result<(KineticTournament, Vec<CertUpdate>)> {
        let mut t = KineticTournament::new(horizon);
        let mut ups = Vec::new();
        for e in entries {
            ups.extend(t.insert(e, now)?);
        }
        Ok((t, ups))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains(&self, id: usize) -> bool {
        self.id_slot.contains_key(&id)
    }

    pub fn root_winner(&self) -> Option<usize> {
        self.winner[1]
    }

    pub fn height(&self) -> usize {
        let mut h = 0;
        let mut c = self.cap;
        while c > 1 {
            c /= 2;
            h += 1;
        }
        h + 1
    }

    fn value_of(&self, id: usize) -> &ValueFn {
        let slot = self.id_slot[&id];
        &self.leaves[slot].as_ref().unwrap().val
    }

    /// Winner of a, b on the interval just after `now`; persistent ties are
    /// degenerate motion.
    fn beats(&self, a: usize, b: usize, now: &TimeRoot) -> Result<bool> {
        let cr = self.value_of(a).cross(self.value_of(b));
        match now.sign_just_after(&cr) {
            -1 => Ok(true),
            1 => Ok(false),
            _ => Err(Error::DegenerateMotion(format!(
                "tournament entries {a} and {b} have identical values"
            ))),
        }
    }

    fn grow(&mut self, now: &TimeRoot) -> Result<Vec<CertUpdate>> {
        let old: Vec<Entry> = self.leaves.iter().flatten().cloned().collect();
        self.cap *= 2;
        self.leaves = vec![None; self.cap];
        self.winner = vec![None; 2 * self.cap];
        let mut gens = vec![0u64; 2 * self.cap];
        for (i, g) in self.gen.iter().enumerate() {
            // keep generations monotone so stale queue entries stay stale
            gens[i] = *g;
        }
        self.gen = gens;
        self.cert = vec![None; 2 * self.cap];
        self.len = 0;
        self.id_slot.clear();
        let mut ups = Vec::new();
        for e in old {
            ups.extend(self.insert_inner(e, now)?);
        }
        Ok(ups)
    }

    pub fn insert(&mut self, e: Entry, now: &TimeRoot) -> Result<Vec<CertUpdate>> {
        if self.id_slot.contains_key(&e.id) {
            return Err(Error::DuplicateId(e.id));
        }
        self.insert_inner(e, now)
    }

    fn insert_inner(&mut self, e: Entry, now: &TimeRoot) -> Result<Vec<CertUpdate>> {
        let mut ups = Vec::new();
        if self.len == self.cap {
            ups.extend(self.grow(now)?);
        }
        let slot = self.len;
        self.id_slot.insert(e.id, slot);
        self.leaves[slot] = Some(e);
        self.len += 1;
        ups.extend(self.refresh_path(slot, now)?);
        Ok(ups)
    }

    pub fn remove(&mut self, id: usize, now: &TimeRoot) -> Result<Vec<CertUpdate>> {
        let slot = *self.id_slot.get(&id).ok_or(Error::UnknownId(id))?;
        let last = self.len - 1;
        self.id_slot.remove(&id);
        if slot != last {
            let moved = self.leaves[last].take().unwrap();
            self.id_slot.insert(moved.id, slot);
            self.leaves[slot] = Some(moved);
        } else {
            self.leaves[slot] = None;
        }
        self.leaves[last] = None;
        self.len -= 1;
        // reinstate the moved entry first so no node compares a dead id
        let mut ups = Vec::new();
        if slot != last {
            ups.extend(self.refresh_path(slot, now)?);
        }
        ups.extend(self.refresh_path(last, now)?);
        Ok(ups)
    }

    /// Recompute winners and certificates from leaf `slot` up to the root.
    fn refresh_path(&mut self, slot: usize, now: &TimeRoot) -> Result<Vec<CertUpdate>> {
        let mut ups = Vec::new();
        let leaf_node = self.cap + slot;
        self.winner[leaf_node] = self.leaves[slot].as_ref().map(|e| e.id);
        let mut node = leaf_node / 2;
        while node >= 1 {
            ups.extend(self.refresh_node(node, now)?);
            if node == 1 {
                break;
            }
            node /= 2;
        }
        Ok(ups)
    }

    fn refresh_node(&mut self, node: usize, now: &TimeRoot) -> Result<Vec<CertUpdate>> {
        let (lw, rw) = (self.winner[2 * node], self.winner[2 * node + 1]);
        let new_winner = match (lw, rw) {
            (None, None) => None,
            (Some(a), None) => Some(a),
            (None, Some(b)) => Some(b),
            // equal ids appear transiently mid-removal; the second refresh
            // pass repairs the stale side
            (Some(a), Some(b)) if a == b => Some(a),
            (Some(a), Some(b)) => {
                if self.beats(a, b, now)? {
                    Some(a)
                } else {
                    Some(b)
                }
            }
        };
        self.winner[node] = new_winner;
        self.gen[node] += 1;
        let due = match (lw, rw) {
            (Some(a), Some(b)) if a != b => {
                let cr = self.value_of(a).cross(self.value_of(b));
                first_sign_change_after(&cr, now, &self.horizon)?
            }
            _ => None,
        };
        self.cert[node] = due.clone();
        Ok(vec![CertUpdate { node, gen: self.gen[node], due }])
    }

    /// Generation check for externally queued certificates.
    pub fn is_fresh(&self, node: usize, gen: u64) -> bool {
        node < self.gen.len() && self.gen[node] == gen
    }

    /// All currently scheduled certificates, for seeding an event queue.
    pub fn live_certs(&self) -> Vec<CertUpdate> {
        (1..self.cap)
            .filter_map(|node| {
                self.cert[node].as_ref().map(|due| CertUpdate {
                    node,
                    gen: self.gen[node],
                    due: Some(due.clone()),
                })
            })
            .collect()
    }

    /// Process a due certificate. Returns None when the event is stale;
    /// otherwise whether the root winner changed, plus fresh updates.
    pub fn handle_cert(
        &mut self,
        node: usize,
        gen: u64,
        now: &TimeRoot,
    ) -> Result<Option<(bool, Vec<CertUpdate>)>> {
        if node >= self.gen.len() || self.gen[node] != gen {
            return Ok(None);
        }
        let old_root = self.winner[1];
        let mut ups = Vec::new();
        let mut cur = node;
        loop {
            ups.extend(self.refresh_node(cur, now)?);
            if cur == 1 {
                break;
            }
            cur /= 2;
        }
        Ok(Some((self.winner[1] != old_root, ups)))
    }

    /// Static oracle: the argmin of the entry values at rational time t,
    /// skipping entries whose value is infinite there. Exact ties are
    /// degenerate.
    pub fn static_winner_at(&self, t: &Rat) -> Result<Option<usize>> {
        static_argmin(self.leaves.iter().flatten(), t)
    }
}

/// Brute-force argmin of entry values at time t (the test oracle).
pub fn static_argmin<'a>(
    entries: impl Iterator<Item = &'a Entry>,
    t: &Rat,
) -> Result<Option<usize>> {
    let mut best: Option<(usize, Scalar)> = None;
    for e in entries {
        if let Some(v) = e.val.eval_at(t) {
            best = match best {
                None => Some((e.id, v)),
                Some((bi, bv)) => match v.cmp(&bv) {
                    Ordering::Less => Some((e.id, v)),
                    Ordering::Equal => {
                        return Err(Error::DegenerateConfiguration(format!(
                            "tournament value tie between {bi} and {} at t={t}",
                            e.id
                        )))
                    }
                    Ordering::Greater => Some((bi, bv)),
                },
            };
        }
    }
    Ok(best.map(|(i, _)| i))
}

// ---------------------------------------------------------------------------
// a standalone event loop over one tournament (used by tests and the spec's
// advance operation; the maintenance structures run their own queues)
// ---------------------------------------------------------------------------

pub struct TournamentRun {
    pub tree: KineticTournament,
    pub now: TimeRoot,
    queue: std::collections::BinaryHeap<QItem>,
}

struct QItem {
    due: TimeRoot,
    node: usize,
    gen: u64,
}

impl PartialEq for QItem {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for QItem {}
impl PartialOrd for QItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for QItem {
    fn cmp(&self, other: &Self) -> Ordering {
        // max-heap: reverse on time, tiebreak for determinism
        other
            .due
            .cmp_root(&self.due)
            .then_with(|| other.node.cmp(&self.node))
            .then_with(|| other.gen.cmp(&self.gen))
    }
}

impl TournamentRun {
    pub fn new(entries: Vec<Entry>, start: &Rat, horizon: Rat) -> Result<TournamentRun> {
        let field = entries
            .first()
            .map(|e| e.val.num().field().clone())
            .unwrap_or_else(crate::field::NumberField::rationals);
        let now = TimeRoot::rational(&field, start);
        let (tree, ups) = KineticTournament::build(entries, &now, horizon)?;
        let mut run = TournamentRun {
            tree,
            now,
            queue: std::collections::BinaryHeap::new(),
        };
        run.push_updates(ups);
        Ok(run)
    }

    fn push_updates(&mut self, ups: Vec<CertUpdate>) {
        for u in ups {
            if let Some(due) = u.due {
                self.queue.push(QItem { due, node: u.node, gen: u.gen });
            }
        }
    }

    pub fn insert(&mut self, e: Entry) -> Result<()> {
        let ups = self.tree.insert(e, &self.now)?;
        self.push_updates(ups);
        Ok(())
    }

    pub fn remove(&mut self, id: usize) -> Result<()> {
        let ups = self.tree.remove(id, &self.now)?;
        self.push_updates(ups);
        Ok(())
    }

    /// Advance to the target time, processing winner-swap certificates in
    /// time order; returns the root-winner change history.
    pub fn advance_to(&mut self, target: &Rat) -> Result<Vec<(TimeRoot, Option<usize>)>> {
        let mut changes = Vec::new();
        loop {
            let due = match self.queue.peek() {
                Some(item) => {
                    if item.due.cmp_rat(target) != Ordering::Less {
                        break;
                    }
                    item.due.clone()
                }
                None => break,
            };
            let item = self.queue.pop().unwrap();
            // stale check before the equal-time check: stale entries are noise
            let fresh = item.node < self.tree.gen.len() && self.tree.gen[item.node] == item.gen;
            if !fresh {
                continue;
            }
            if let Some(next) = self.queue.peek() {
                let next_fresh =
                    next.node < self.tree.gen.len() && self.tree.gen[next.node] == next.gen;
                if next_fresh && next.due.cmp_root(&due) == Ordering::Equal {
                    return Err(Error::DegenerateMotion(
                        "two tournament certificates fail at the same time".into(),
                    ));
                }
            }
            if due.cmp_root(&self.now) != Ordering::Greater {
                return Err(Error::DegenerateMotion(
                    "non-advancing tournament event".into(),
                ));
            }
            self.now = due.clone();
            if let Some((root_changed, ups)) = self.tree.handle_cert(item.node, item.gen, &self.now)? {
                self.push_updates(ups);
                if root_changed {
                    changes.push((due, self.tree.root_winner()));
                }
            }
        }
        Ok(changes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::NumberField;
    use crate::num::{rat, rat_int};
    use std::sync::Arc;

    fn q() -> Arc<NumberField> {
        NumberField::rationals()
    }

    fn poly_entry(id: usize, coeffs: &[i64]) -> Entry {
        let f = q();
        Entry {
            id,
            val: ValueFn::Poly(Poly::new(
                &f,
                coeffs.iter().map(|&c| Scalar::from_int(&f, c)).collect(),
            )),
        }
    }

    fn rat_entry(id: usize, coeffs: &[Rat]) -> Entry {
        let f = q();
        Entry {
            id,
            val: ValueFn::Poly(Poly::new(
                &f,
                coeffs.iter().map(|c| Scalar::from_rat(&f, c.clone())).collect(),
            )),
        }
    }

    #[test]
    fn single_entry_wins_forever() {
        let mut run = TournamentRun::new(vec![poly_entry(7, &[3])], &rat_int(0), rat_int(10)).unwrap();
        assert_eq!(run.tree.root_winner(), Some(7));
        let ch = run.advance_to(&rat_int(10)).unwrap();
        assert!(ch.is_empty());
    }

    #[test]
    fn constant_entries_no_failures() {
        let mut run = TournamentRun::new(
            vec![poly_entry(0, &[1]), poly_entry(1, &[2])],
            &rat_int(0),
            rat_int(10),
        )
        .unwrap();
        assert_eq!(run.tree.root_winner(), Some(0));
        assert!(run.advance_to(&rat_int(10)).unwrap().is_empty());
    }

    #[test]
    fn linear_crossing_at_half() {
        // t vs 1 - t: winner switches at t = 1/2
        let mut run = TournamentRun::new(
            vec![poly_entry(0, &[0, 1]), poly_entry(1, &[1, -1])],
            &rat_int(0),
            rat_int(1),
        )
        .unwrap();
        assert_eq!(run.tree.root_winner(), Some(0));
        let ch = run.advance_to(&rat_int(1)).unwrap();
        assert_eq!(ch.len(), 1);
        assert!(ch[0].0.is_rational(&rat(1, 2)));
        assert_eq!(ch[0].1, Some(1));
    }

    #[test]
    fn insert_delete_with_brute_force() {
        let mut run = TournamentRun::new(
            vec![poly_entry(0, &[5]), poly_entry(1, &[9])],
            &rat_int(0),
            rat_int(1),
        )
        .unwrap();
        run.insert(poly_entry(2, &[1])).unwrap();
        assert_eq!(run.tree.root_winner(), Some(2));
        run.remove(2).unwrap();
        assert_eq!(run.tree.root_winner(), Some(0));
        run.remove(0).unwrap();
        assert_eq!(run.tree.root_winner(), Some(1));
        assert!(matches!(run.remove(0), Err(Error::UnknownId(0))));
        assert!(matches!(
            run.insert(poly_entry(1, &[0])),
            Err(Error::DuplicateId(1))
        ));
    }

    #[test]
    fn random_quadratics_pointwise_argmin() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let entries: Vec<Entry> = (0..10)
            .map(|id| {
                rat_entry(
                    id,
                    &[
                        rat(rng.gen_range(-40..40), 8),
                        rat(rng.gen_range(-16..16), 8),
                        rat(rng.gen_range(-8..8), 8),
                    ],
                )
            })
            .collect();
        let copy = entries.clone();
        let mut run = TournamentRun::new(entries, &rat_int(0), rat_int(1)).unwrap();
        let mut t = rat_int(0);
        for i in 1..=200 {
            let next = rat(i, 200);
            run.advance_to(&next).unwrap();
            t = next;
            let expect = static_argmin(copy.iter(), &t).unwrap();
            assert_eq!(run.tree.root_winner(), expect, "at t = {t}");
        }
        // structural bound
        let n = run.tree.len() as f64;
        assert!(run.tree.height() as f64 <= 2.0 * n.log2().ceil() + 1.0);
    }

    #[test]
    fn touch_without_crossing_is_skipped() {
        // (t - 1/2)^2 vs 0: values touch at 1/2 but never cross
        let f = q();
        let touch = Poly::new(
            &f,
            vec![
                Scalar::from_rat(&f, rat(1, 4)),
                Scalar::from_rat(&f, rat(-1, 1)),
                Scalar::one(&f),
            ],
        );
        let e0 = Entry { id: 0, val: ValueFn::Poly(touch) };
        let e1 = poly_entry(1, &[0]);
        let mut run = TournamentRun::new(vec![e1, e0], &rat_int(0), rat_int(1)).unwrap();
        assert_eq!(run.tree.root_winner(), Some(1));
        let ch = run.advance_to(&rat_int(1)).unwrap();
        assert!(ch.is_empty(), "touch must not produce a winner change");
    }

    #[test]
    fn identical_values_degenerate() {
        let r = TournamentRun::new(
            vec![poly_entry(0, &[1, 2]), poly_entry(1, &[1, 2])],
            &rat_int(0),
            rat_int(1),
        );
        assert!(matches!(r, Err(Error::DegenerateMotion(_))));
    }
}
