//! Static Q-Delaunay triangulation under the regular k-gon norm.
//!
//! The bisector of two points under d_Q is a polyline whose breakpoints are
//! corner placements: homothets touching one point at a polygon vertex and
//! the other on an edge. The Q-Voronoi edge of a pair is the connected part
//! of the bisector whose placements are empty. Breakpoints of an edge
//! alternate between corner contacts at p and at q, and a pair belongs to
//! the stable graph when its edge carries at least seven of them.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::geom::{RatPoint, Vec2};
use crate::gon::RegularGon;

/// Number of breakpoints an edge needs to enter the stable graph.
pub const SDG_BREAKPOINT_THRESHOLD: usize = 7;

/// A homothet of Q: center + scale.
#[derive(Debug, Clone)]
pub struct Placement {
    pub center: Vec2,
    pub lambda: Scalar,
}

impl Placement {
    pub fn eq_place(&self, o: &Placement) -> bool {
        self.center == o.center && self.lambda == o.lambda
    }
}

/// Which of the two sites of a bisector owns the corner contact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CornerSite {
    P,
    Q,
}

/// A corner placement on the bisector of (p, q).
#[derive(Debug, Clone)]
pub struct Breakpoint {
    pub site: CornerSite,
    /// Vertex of Q at the corner contact.
    pub vertex: usize,
    /// Contact edge of the opposite site.
    pub other_edge: usize,
    pub place: Placement,
}

/// Contact edges at a Voronoi vertex placement (triangle circumhomothet).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ContactTriple {
    pub e_p: usize,
    pub e_q: usize,
    pub e_r: usize,
}

/// One end of a clipped Q-Voronoi edge.
#[derive(Debug, Clone)]
pub enum QEdgeEnd {
    /// Finite endpoint: a third point r touches the placement on edge e_r.
    Vertex {
        r: usize,
        contacts: ContactTriple,
        place: Placement,
    },
    /// Unbounded end: the limiting wedge with p on edge e_p, q on edge e_q
    /// (consecutive edges of Q).
    Wedge { e_p: usize, e_q: usize },
}

/// A Q-Voronoi edge: the clipped portion of the bisector of (p, q).
#[derive(Debug, Clone)]
pub struct QEdge {
    pub p: usize,
    pub q: usize,
    /// Corner placements interior to the edge, in bisector order.
    pub breakpoints: Vec<Breakpoint>,
    pub ends: [QEdgeEnd; 2],
}

impl QEdge {
    pub fn breakpoint_count(&self) -> usize {
        self.breakpoints.len()
    }

    pub fn is_periphery(&self) -> bool {
        self.ends.iter().any(|e| matches!(e, QEdgeEnd::Wedge { .. }))
    }
}

/// A triangle of the Q-Delaunay triangulation with its circumhomothet.
#[derive(Debug, Clone)]
pub struct QTriangle {
    /// Sorted vertex triple.
    pub tri: [usize; 3],
    pub place: Placement,
    /// Contact edge per vertex, aligned with `tri`.
    pub contacts: [usize; 3],
}

#[derive(Debug, Clone)]
pub struct QTriangulationState {
    pub points: Vec<RatPoint>,
    pub gon: RegularGon,
    pub edges: BTreeMap<(usize, usize), QEdge>,
    pub triangles: BTreeMap<[usize; 3], QTriangle>,
    /// N-diamond table (point x direction), used for breakpoint counting.
    pub neighbors: Vec<Vec<Option<usize>>>,
}

impl QTriangulationState {
    pub fn build(points: &[RatPoint], gon: &RegularGon) -> Result<QTriangulationState> {
        build_qdt(points, gon)
    }

    pub fn triangle_set(&self) -> BTreeSet<[usize; 3]> {
        self.triangles.keys().cloned().collect()
    }

    pub fn edge_set(&self) -> BTreeSet<(usize, usize)> {
        self.edges.keys().cloned().collect()
    }

    /// Breakpoints interior to the Voronoi edge of pq.
    pub fn count_edge_breakpoints(&self, p: usize, q: usize) -> Result<usize> {
        let key = if p < q { (p, q) } else { (q, p) };
        self.edges
            .get(&key)
            .map(|e| e.breakpoint_count())
            .ok_or(Error::NotDelaunayEdge(p, q))
    }

    pub fn breakpoint_counts(&self) -> BTreeMap<(usize, usize), usize> {
        self.edges
            .iter()
            .map(|(k, e)| (*k, e.breakpoint_count()))
            .collect()
    }

    /// Pairs whose Voronoi edge carries at least seven breakpoints.
    pub fn extract_sdg(&self) -> BTreeSet<(usize, usize)> {
        self.edges
            .iter()
            .filter(|(_, e)| e.breakpoint_count() >= SDG_BREAKPOINT_THRESHOLD)
            .map(|(k, _)| *k)
            .collect()
    }

    /// The union of triangles need not cover the hull: vertices on the
    /// periphery (some incident edge has a wedge end).
    pub fn periphery_points(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for e in self.edges.values() {
            if e.is_periphery() {
                out.insert(e.p);
                out.insert(e.q);
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------
// breakpoint counting straight from the neighbor table
// ---------------------------------------------------------------------------

/// Breakpoint counts of all pairs, by counting empty corner placements:
/// a v_j corner placement at p touching q is on the Voronoi edge exactly
/// when N-diamond_j[p] = q.
pub fn breakpoint_counts_from_neighbors(
    table: &[Vec<Option<usize>>],
) -> BTreeMap<(usize, usize), usize> {
    let mut counts: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (p, row) in table.iter().enumerate() {
        for n in row {
            if let Some(q) = n {
                let key = if p < *q { (p, *q) } else { (*q, p) };
                *counts.entry(key).or_insert(0) += 1;
            }
        }
    }
    counts
}

/// Static SDG extraction without building the full diagram: pairs with at
/// least seven empty corner placements.
pub fn extract_sdg_static(points: &[RatPoint], gon: &RegularGon) -> Result<BTreeSet<(usize, usize)>> {
    let table = gon.q_neighbor_table(points)?;
    Ok(breakpoint_counts_from_neighbors(&table)
        .into_iter()
        .filter(|(_, c)| *c >= SDG_BREAKPOINT_THRESHOLD)
        .map(|(k, _)| k)
        .collect())
}

// ---------------------------------------------------------------------------
// bisector geometry
// ---------------------------------------------------------------------------

/// Position of a contact point along the polygon boundary: edge index plus
/// an exact fraction numerator (denominator |v_{e+1} - v_e|^2, shared).
#[derive(Debug, Clone)]
struct BoundaryParam {
    edge: usize,
    tnum: Scalar,
}

fn boundary_param(gon: &RegularGon, w: &Vec2) -> Result<BoundaryParam> {
    let k = gon.k();
    for e in 0..k {
        let ne = &gon.edge_normals[e];
        if !w.dot(ne).sub(&gon.kappa).is_zero() {
            continue;
        }
        let ve = &gon.vertices[e];
        let vf = &gon.vertices[(e + 1) % k];
        let dir = vf.sub(ve);
        let tnum = w.sub(ve).dot(&dir);
        let s0 = tnum.sign();
        let s1 = w.sub(vf).dot(&dir).sign();
        if s0 >= 0 && s1 <= 0 {
            if s0 == 0 || s1 == 0 {
                return Err(Error::DegenerateConfiguration(
                    "contact exactly at a polygon vertex".into(),
                ));
            }
            return Ok(BoundaryParam { edge: e, tnum });
        }
    }
    Err(Error::DegenerateConfiguration(
        "contact point not on the polygon boundary".into(),
    ))
}

/// The full bisector of a pair, as ordered breakpoints plus contact-edge
/// families between them.
#[derive(Debug, Clone)]
pub struct BisectorGeom {
    /// Ordered along the bisector (increasing p-contact parameter).
    pub breakpoints: Vec<Breakpoint>,
    /// Families: contacts (e_p, e_q) for the pieces between breakpoints;
    /// families[0] and families[m] are the unbounded end families.
    pub families: Vec<(usize, usize)>,
}

/// Compute the bisector polyline of points p, q (exact, generic position).
pub fn bisector(gon: &RegularGon, p: &RatPoint, q: &RatPoint) -> Result<BisectorGeom> {
    let field = gon.field();
    let k = gon.k();
    let pv = p.to_vec2(field);
    let qv = q.to_vec2(field);
    let d = qv.sub(&pv);

    // cut parameter: the boundary point of Q in direction d (no contact of p
    // can sit there)
    let cut = {
        let mut best_e = 0usize;
        let mut best: Option<Scalar> = None;
        for e in 0..k {
            let v = d.dot(&gon.edge_normals[e]);
            match &best {
                None => {
                    best = Some(v);
                    best_e = e;
                }
                Some(b) => match v.cmp(b) {
                    Ordering::Greater => {
                        best = Some(v);
                        best_e = e;
                    }
                    Ordering::Equal => {
                        // d points at the shared vertex; take the later edge
                        if (best_e + 1) % k == e {
                            best_e = e;
                        }
                    }
                    Ordering::Less => {}
                },
            }
        }
        let denom = best.unwrap();
        // w* = d * kappa / <d, N_e*>
        let w = d.scale(&gon.kappa.div(&denom));
        let ve = &gon.vertices[best_e];
        let vf = &gon.vertices[(best_e + 1) % k];
        let dir = vf.sub(ve);
        BoundaryParam { edge: best_e, tnum: w.sub(ve).dot(&dir) }
    };

    // collect corner placements with their p-contact parameter
    struct Item {
        key: (usize, Scalar),
        bp: Breakpoint,
    }
    let mut items: Vec<Item> = Vec::new();
    let rel = |param: &BoundaryParam| -> Result<(usize, Scalar)> {
        let mut pos = (param.edge + k - cut.edge) % k;
        if pos == 0 {
            match param.tnum.cmp(&cut.tnum) {
                Ordering::Greater => {}
                Ordering::Less => pos = k,
                Ordering::Equal => {
                    return Err(Error::DegenerateConfiguration(
                        "contact parameter at the cut".into(),
                    ))
                }
            }
        }
        Ok((pos, param.tnum.clone()))
    };
    for j in 0..k {
        if let Some(pl) = gon.vj_placement(&pv, &qv, j) {
            if pl.contact_vertex.is_some() {
                return Err(Error::DegenerateConfiguration(
                    "double corner contact on a bisector".into(),
                ));
            }
            let lambda = pl.lambda;
            let center = gon.vj_center(&pv, j, &lambda);
            let param = BoundaryParam { edge: j, tnum: Scalar::zero(field) };
            // vertex params sort as (edge j, t = 0)
            let key = rel(&param)?;
            items.push(Item {
                key,
                bp: Breakpoint {
                    site: CornerSite::P,
                    vertex: j,
                    other_edge: pl.contact_edge,
                    place: Placement { center, lambda },
                },
            });
        }
        if let Some(pl) = gon.vj_placement(&qv, &pv, j) {
            if pl.contact_vertex.is_some() {
                return Err(Error::DegenerateConfiguration(
                    "double corner contact on a bisector".into(),
                ));
            }
            let lambda = pl.lambda;
            let center = gon.vj_center(&qv, j, &lambda);
            // parameter of p's contact on this placement
            let w_p = pv.sub(&center).scale(&lambda.inv());
            let param = boundary_param(gon, &w_p)?;
            if param.edge != pl.contact_edge {
                return Err(Error::DegenerateConfiguration(
                    "inconsistent contact edge for corner placement".into(),
                ));
            }
            let key = rel(&param)?;
            items.push(Item {
                key,
                bp: Breakpoint {
                    site: CornerSite::Q,
                    vertex: j,
                    other_edge: param.edge,
                    place: Placement { center, lambda },
                },
            });
        }
    }
    if items.is_empty() {
        return Err(Error::DegenerateConfiguration(
            "bisector with no corner placements".into(),
        ));
    }
    // exact sort; equal keys are degenerate
    let mut err = None;
    items.sort_by(|a, b| {
        a.key.0.cmp(&b.key.0).then_with(|| {
            let c = a.key.1.cmp(&b.key.1);
            if c == Ordering::Equal {
                err = Some(());
            }
            c
        })
    });
    if err.is_some() {
        return Err(Error::DegenerateConfiguration(
            "coincident breakpoints on a bisector".into(),
        ));
    }
    let breakpoints: Vec<Breakpoint> = items.into_iter().map(|i| i.bp).collect();

    // walk contact families; p-contacts increase, q-contacts decrease
    let first = &breakpoints[0];
    let (mut e_p, mut e_q) = match first.site {
        CornerSite::P => ((first.vertex + k - 1) % k, first.other_edge),
        CornerSite::Q => (first.other_edge, first.vertex),
    };
    let mut families = vec![(e_p, e_q)];
    for bp in &breakpoints {
        match bp.site {
            CornerSite::P => {
                if e_p != (bp.vertex + k - 1) % k || e_q != bp.other_edge {
                    return Err(Error::DegenerateConfiguration(
                        "inconsistent contact walk on a bisector".into(),
                    ));
                }
                e_p = bp.vertex;
            }
            CornerSite::Q => {
                if e_q != bp.vertex || e_p != bp.other_edge {
                    return Err(Error::DegenerateConfiguration(
                        "inconsistent contact walk on a bisector".into(),
                    ));
                }
                e_q = (bp.vertex + k - 1) % k;
            }
        }
        families.push((e_p, e_q));
    }
    // end families carry consecutive contact edges (the limiting wedges)
    let ok_wedge = |ep: usize, eq: usize| -> bool {
        (ep + 1) % k == eq || (eq + 1) % k == ep
    };
    let (fp, fq) = families[0];
    let (lp, lq) = *families.last().unwrap();
    if !ok_wedge(fp, fq) || !ok_wedge(lp, lq) {
        return Err(Error::DegenerateConfiguration(
            "end family of a bisector is not a wedge".into(),
        ));
    }
    Ok(BisectorGeom { breakpoints, families })
}

// ---------------------------------------------------------------------------
// clipping against the other points
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
enum SBound {
    NegInf,
    Fin(Scalar),
    PosInf,
}

impl SBound {
    fn cmp_b(&self, o: &SBound) -> Ordering {
        use SBound::*;
        match (self, o) {
            (NegInf, NegInf) | (PosInf, PosInf) => Ordering::Equal,
            (NegInf, _) | (_, PosInf) => Ordering::Less,
            (_, NegInf) | (PosInf, _) => Ordering::Greater,
            (Fin(a), Fin(b)) => a.cmp(b),
        }
    }
}

/// Linear placement family P(s) = (c0 + s dc, l0 + s dl) on an s-range.
#[derive(Debug, Clone)]
struct Family {
    e_p: usize,
    e_q: usize,
    c0: Vec2,
    l0: Scalar,
    dc: Vec2,
    dl: Scalar,
    lo: SBound,
    hi: SBound,
}

impl Family {
    fn at(&self, s: &Scalar) -> Placement {
        Placement {
            center: self.c0.add(&self.dc.scale(s)),
            lambda: self.l0.add(&self.dl.mul(s)),
        }
    }
}

#[derive(Debug, Clone)]
struct Forbidden {
    lo: SBound,
    hi: SBound,
    lo_edge: Option<usize>,
    hi_edge: Option<usize>,
    r: usize,
}

/// A maximal allowed piece of one family.
#[derive(Debug, Clone)]
struct Piece {
    fam: usize,
    lo: SBound,
    hi: SBound,
    /// binding blocker at a finite clipped bound
    lo_block: Option<(usize, usize)>,
    hi_block: Option<(usize, usize)>,
}

fn build_families(gon: &RegularGon, p: &RatPoint, q: &RatPoint, geom: &BisectorGeom) -> Result<Vec<Family>> {
    let field = gon.field();
    let k = gon.k();
    let kappa = &gon.kappa;
    let m = geom.breakpoints.len();
    let mut fams = Vec::with_capacity(m + 1);
    let wedge_dir = |e_p: usize, e_q: usize, sign_hint: i8| -> Result<(Vec2, Scalar)> {
        let np = &gon.edge_normals[e_p];
        let nq = &gon.edge_normals[e_q];
        let dn = np.sub(nq);
        if dn.x.is_zero() && dn.y.is_zero() {
            return Err(Error::DegenerateConfiguration(
                "coincident contact normals".into(),
            ));
        }
        let mut dc = dn.perp();
        let mut dl = dc.dot(np).neg().div(kappa);
        debug_assert!(dc.dot(nq).add(&dl.mul(kappa)).is_zero());
        let s = dl.sign();
        if s == 0 {
            return Err(Error::DegenerateConfiguration(
                "end family with constant scale".into(),
            ));
        }
        if s != sign_hint {
            dc = dc.neg();
            dl = dl.neg();
        }
        Ok((dc, dl))
    };
    let _ = field;
    let _ = k;
    for (i, &(e_p, e_q)) in geom.families.iter().enumerate() {
        let fam = if i == 0 {
            let base = &geom.breakpoints[0].place;
            // lambda grows toward s -> -inf
            let (dc, dl) = wedge_dir(e_p, e_q, -1)?;
            Family {
                e_p,
                e_q,
                c0: base.center.clone(),
                l0: base.lambda.clone(),
                dc,
                dl,
                lo: SBound::NegInf,
                hi: SBound::Fin(Scalar::zero(gon.field())),
            }
        } else if i == m {
            let base = &geom.breakpoints[m - 1].place;
            let (dc, dl) = wedge_dir(e_p, e_q, 1)?;
            Family {
                e_p,
                e_q,
                c0: base.center.clone(),
                l0: base.lambda.clone(),
                dc,
                dl,
                lo: SBound::Fin(Scalar::zero(gon.field())),
                hi: SBound::PosInf,
            }
        } else {
            let a = &geom.breakpoints[i - 1].place;
            let b = &geom.breakpoints[i].place;
            Family {
                e_p,
                e_q,
                c0: a.center.clone(),
                l0: a.lambda.clone(),
                dc: b.center.sub(&a.center),
                dl: b.lambda.sub(&a.lambda),
                lo: SBound::Fin(Scalar::zero(gon.field())),
                hi: SBound::Fin(Scalar::one(gon.field())),
            }
        };
        // contact-constraint sanity at the base placement
        debug_assert!({
            let pv = p.to_vec2(gon.field());
            let qv = q.to_vec2(gon.field());
            let okp = pv.sub(&fam.c0).dot(&gon.edge_normals[fam.e_p]).sub(&fam.l0.mul(kappa)).is_zero();
            let okq = qv.sub(&fam.c0).dot(&gon.edge_normals[fam.e_q]).sub(&fam.l0.mul(kappa)).is_zero();
            okp && okq
        });
        fams.push(fam);
    }
    Ok(fams)
}

/// Open s-interval of family `fam` on which r is strictly inside the
/// placement, clipped to the family range.
fn forbidden_on(gon: &RegularGon, fam: &Family, rp: &Vec2, r: usize) -> Option<Forbidden> {
    let kappa = &gon.kappa;
    let mut lo = fam.lo.clone();
    let mut hi = fam.hi.clone();
    let mut lo_edge = None;
    let mut hi_edge = None;
    for (e, ne) in gon.edge_normals.iter().enumerate() {
        // g(s) = (l0 + s dl) kappa - <r - c0 - s dc, ne> > 0
        let a = fam.dl.mul(kappa).add(&fam.dc.dot(ne));
        let b = fam.l0.mul(kappa).sub(&rp.sub(&fam.c0).dot(ne));
        match a.sign() {
            0 => {
                if b.sign() <= 0 {
                    return None;
                }
            }
            1 => {
                // s > -b/a
                let bound = b.neg().div(&a);
                if lo.cmp_b(&SBound::Fin(bound.clone())) == Ordering::Less {
                    lo = SBound::Fin(bound);
                    lo_edge = Some(e);
                }
            }
            _ => {
                let bound = b.neg().div(&a);
                if hi.cmp_b(&SBound::Fin(bound.clone())) == Ordering::Greater {
                    hi = SBound::Fin(bound);
                    hi_edge = Some(e);
                }
            }
        }
    }
    if lo.cmp_b(&hi) != Ordering::Less {
        return None;
    }
    Some(Forbidden { lo, hi, lo_edge, hi_edge, r })
}

/// Allowed pieces of one family after removing all blockers. A bound with
/// blocker metadata None coincides with the family range boundary.
fn allowed_pieces(
    gon: &RegularGon,
    fam_idx: usize,
    fam: &Family,
    points: &[RatPoint],
    p: usize,
    q: usize,
) -> Result<Vec<Piece>> {
    let field = gon.field();
    let mut forb: Vec<Forbidden> = Vec::new();
    for (r, rp) in points.iter().enumerate() {
        if r == p || r == q {
            continue;
        }
        if let Some(f) = forbidden_on(gon, fam, &rp.to_vec2(field), r) {
            forb.push(f);
        }
    }
    forb.sort_by(|a, b| a.lo.cmp_b(&b.lo));
    let mut pieces = Vec::new();
    let mut cur_lo = fam.lo.clone();
    // blocker binding at cur_lo, None when cur_lo is the family boundary
    let mut cur_block: Option<(usize, usize)> = None;
    let mut i = 0;
    while i < forb.len() {
        // merge overlapping forbidden intervals
        let flo = forb[i].lo.clone();
        let mut fhi = forb[i].hi.clone();
        let lo_meta = (forb[i].r, forb[i].lo_edge);
        let mut hi_meta = (forb[i].r, forb[i].hi_edge);
        let mut j = i + 1;
        while j < forb.len() && forb[j].lo.cmp_b(&fhi) != Ordering::Greater {
            if forb[j].lo.cmp_b(&fhi) == Ordering::Equal {
                // two open blocker intervals touching: the shared placement
                // has two extra points on its boundary
                return Err(Error::DegenerateConfiguration(
                    "two blockers bind at the same placement".into(),
                ));
            }
            if forb[j].hi.cmp_b(&fhi) == Ordering::Greater {
                fhi = forb[j].hi.clone();
                hi_meta = (forb[j].r, forb[j].hi_edge);
            }
            j += 1;
        }
        // allowed piece before this forbidden block
        if cur_lo.cmp_b(&flo) == Ordering::Less {
            let hi_block = Some((
                lo_meta.0,
                lo_meta.1.expect("interior forbidden bound must bind an edge"),
            ));
            pieces.push(Piece {
                fam: fam_idx,
                lo: cur_lo.clone(),
                hi: flo.clone(),
                lo_block: cur_block,
                hi_block,
            });
        }
        cur_lo = fhi.clone();
        cur_block = hi_meta.1.map(|e| (hi_meta.0, e));
        i = j;
    }
    if cur_lo.cmp_b(&fam.hi) == Ordering::Less {
        pieces.push(Piece {
            fam: fam_idx,
            lo: cur_lo,
            hi: fam.hi.clone(),
            lo_block: cur_block,
            hi_block: None,
        });
    }
    Ok(pieces)
}

// ---------------------------------------------------------------------------
// full build
// ---------------------------------------------------------------------------

fn build_qdt(points: &[RatPoint], gon: &RegularGon) -> Result<QTriangulationState> {
    let n = points.len();
    if n < 2 {
        return Err(Error::DegenerateConfiguration(
            "need at least 2 points".into(),
        ));
    }
    for i in 0..n {
        for j in i + 1..n {
            if points[i] == points[j] {
                return Err(Error::DegenerateConfiguration(format!(
                    "points {i} and {j} coincide"
                )));
            }
        }
    }
    let neighbors = gon.q_neighbor_table(points)?;
    let mut edges: BTreeMap<(usize, usize), QEdge> = BTreeMap::new();
    for p in 0..n {
        for q in p + 1..n {
            if let Some(edge) = clip_pair(points, gon, p, q)? {
                edges.insert((p, q), edge);
            }
        }
    }
    // cross-check both breakpoint-counting routes
    let table_counts = breakpoint_counts_from_neighbors(&neighbors);
    for (key, e) in &edges {
        let c = table_counts.get(key).copied().unwrap_or(0);
        if c != e.breakpoint_count() {
            return Err(Error::DegenerateConfiguration(format!(
                "breakpoint count mismatch on edge {key:?}: table {c}, clip {}",
                e.breakpoint_count()
            )));
        }
    }
    for key in table_counts.keys() {
        if !edges.contains_key(key) {
            return Err(Error::DegenerateConfiguration(format!(
                "corner placements on a pair {key:?} that is not an edge"
            )));
        }
    }

    // assemble triangles from finite edge ends
    let mut triangles: BTreeMap<[usize; 3], QTriangle> = BTreeMap::new();
    let mut seen: BTreeMap<[usize; 3], usize> = BTreeMap::new();
    for ((p, q), e) in &edges {
        for end in &e.ends {
            if let QEdgeEnd::Vertex { r, contacts, place } = end {
                let mut tri = [*p, *q, *r];
                tri.sort();
                let mut contact_by_point = [(0usize, 0usize); 3];
                contact_by_point[0] = (*p, contacts.e_p);
                contact_by_point[1] = (*q, contacts.e_q);
                contact_by_point[2] = (*r, contacts.e_r);
                contact_by_point.sort();
                let aligned = [
                    contact_by_point[0].1,
                    contact_by_point[1].1,
                    contact_by_point[2].1,
                ];
                *seen.entry(tri).or_insert(0) += 1;
                match triangles.get(&tri) {
                    None => {
                        triangles.insert(
                            tri,
                            QTriangle { tri, place: place.clone(), contacts: aligned },
                        );
                    }
                    Some(existing) => {
                        if !existing.place.eq_place(place) || existing.contacts != aligned {
                            return Err(Error::DegenerateConfiguration(format!(
                                "inconsistent circumhomothet for triangle {tri:?}"
                            )));
                        }
                    }
                }
            }
        }
    }
    for (tri, cnt) in &seen {
        if *cnt != 3 {
            return Err(Error::DegenerateConfiguration(format!(
                "triangle {tri:?} seen from {cnt} edge ends, expected 3"
            )));
        }
    }
    // every circumhomothet is empty
    let field = gon.field();
    for t in triangles.values() {
        for (ri, rp) in points.iter().enumerate() {
            if t.tri.contains(&ri) {
                continue;
            }
            let side = gon.side_of_homothet(&t.place.center, &t.place.lambda, &rp.to_vec2(field));
            if side >= 0 {
                return Err(Error::DegenerateConfiguration(format!(
                    "point {ri} violates the empty circumhomothet of {:?}",
                    t.tri
                )));
            }
        }
    }
    Ok(QTriangulationState {
        points: points.to_vec(),
        gon: gon.clone(),
        edges,
        triangles,
        neighbors,
    })
}

/// Clip the bisector of (p, q) against all other points; None when no empty
/// placement survives (pq is not a Q-Delaunay edge).
fn clip_pair(
    points: &[RatPoint],
    gon: &RegularGon,
    p: usize,
    q: usize,
) -> Result<Option<QEdge>> {
    let geom = bisector(gon, &points[p], &points[q])?;
    let fams = build_families(gon, &points[p], &points[q], &geom)?;
    let mut pieces: Vec<Piece> = Vec::new();
    for (i, fam) in fams.iter().enumerate() {
        pieces.extend(allowed_pieces(gon, i, fam, points, p, q)?);
    }
    if pieces.is_empty() {
        return Ok(None);
    }
    // a piece boundary that reaches the family range boundary must be a
    // clean junction; a blocker binding exactly there is a placement tie
    for piece in &pieces {
        let at_lo_boundary = piece.lo.cmp_b(&fams[piece.fam].lo) == Ordering::Equal;
        let at_hi_boundary = piece.hi.cmp_b(&fams[piece.fam].hi) == Ordering::Equal;
        if (at_lo_boundary && piece.lo_block.is_some())
            || (at_hi_boundary && piece.hi_block.is_some())
        {
            return Err(Error::DegenerateConfiguration(
                "blocker binds exactly at a breakpoint placement".into(),
            ));
        }
        if (!at_lo_boundary && piece.lo_block.is_none() && !matches!(piece.lo, SBound::NegInf))
            || (!at_hi_boundary && piece.hi_block.is_none() && !matches!(piece.hi, SBound::PosInf))
        {
            unreachable!("interior piece bound without blocker metadata");
        }
    }
    // glue pieces that meet at family junctions (breakpoints)
    let mut runs: Vec<Vec<Piece>> = Vec::new();
    for piece in pieces {
        let glue = match runs.last() {
            Some(run) => {
                let last = run.last().unwrap();
                last.fam + 1 == piece.fam
                    && last.hi.cmp_b(&fams[last.fam].hi) == Ordering::Equal
                    && piece.lo.cmp_b(&fams[piece.fam].lo) == Ordering::Equal
            }
            None => false,
        };
        if glue {
            runs.last_mut().unwrap().push(piece);
        } else {
            runs.push(vec![piece]);
        }
    }
    if runs.len() > 1 {
        return Err(Error::DegenerateConfiguration(format!(
            "disconnected Voronoi edge for pair ({p}, {q})"
        )));
    }
    let run = runs.pop().unwrap();
    let first = run.first().unwrap();
    let last = run.last().unwrap();

    let make_end = |piece: &Piece, low_side: bool| -> Result<QEdgeEnd> {
        let fam = &fams[piece.fam];
        let bound = if low_side { &piece.lo } else { &piece.hi };
        let block = if low_side { &piece.lo_block } else { &piece.hi_block };
        match bound {
            SBound::NegInf | SBound::PosInf => Ok(QEdgeEnd::Wedge { e_p: fam.e_p, e_q: fam.e_q }),
            SBound::Fin(s) => {
                let (r, e_r) = block.ok_or_else(|| {
                    Error::DegenerateConfiguration(
                        "edge end at a breakpoint placement".into(),
                    )
                })?;
                let place = fam.at(s);
                // no other point may touch the end placement
                for (ri, rp) in points.iter().enumerate() {
                    if ri == p || ri == q || ri == r {
                        continue;
                    }
                    if gon.side_of_homothet(&place.center, &place.lambda, &rp.to_vec2(gon.field())) >= 0 {
                        return Err(Error::DegenerateConfiguration(format!(
                            "two points touch the Voronoi vertex of ({p}, {q}, {r})"
                        )));
                    }
                }
                Ok(QEdgeEnd::Vertex {
                    r,
                    contacts: ContactTriple { e_p: fam.e_p, e_q: fam.e_q, e_r },
                    place,
                })
            }
        }
    };
    let lo_end = make_end(first, true)?;
    let hi_end = make_end(last, false)?;

    // interior breakpoints: family junctions crossed by the run
    let mut bps = Vec::new();
    for w in run.windows(2) {
        // junction between family w[0].fam and w[1].fam is breakpoint index w[1].fam - 1...
        // families[i] precedes breakpoint[i]
        bps.push(geom.breakpoints[w[1].fam - 1].clone());
    }
    Ok(Some(QEdge {
        p,
        q,
        breakpoints: bps,
        ends: [lo_end, hi_end],
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{rat, rat_int as ri};

    fn pt(x: i64, y: i64) -> RatPoint {
        RatPoint::new(ri(x), ri(y))
    }

    fn ptr(xn: i64, xd: i64, yn: i64, yd: i64) -> RatPoint {
        RatPoint::new(rat(xn, xd), rat(yn, yd))
    }

    #[test]
    fn full_bisector_has_k_minus_2_breakpoints() {
        // generic two-point instances: the full bisector carries exactly
        // k - 2 breakpoints, alternating p/q corners
        for k in [8usize, 10, 12, 16] {
            let gon = RegularGon::new(k).unwrap();
            let pts = vec![pt(0, 0), ptr(13, 7, 5, 11)];
            let qdt = QTriangulationState::build(&pts, &gon).unwrap();
            let e = &qdt.edges[&(0, 1)];
            assert_eq!(e.breakpoint_count(), k - 2, "k = {k}");
            assert!(e.is_periphery());
            for w in e.breakpoints.windows(2) {
                assert_ne!(w[0].site, w[1].site, "alternation violated");
            }
            // n=2 pair enters the SDG iff k - 2 >= 7, i.e. k >= 10 for even k
            let sdg = qdt.extract_sdg();
            assert_eq!(sdg.contains(&(0, 1)), k >= 10, "k = {k}");
            let sdg2 = extract_sdg_static(&pts, &gon).unwrap();
            assert_eq!(sdg, sdg2);
        }
    }

    #[test]
    fn three_points_one_triangle() {
        let gon = RegularGon::new(8).unwrap();
        let pts = vec![pt(0, 0), ptr(25, 7, 3, 5), ptr(4, 3, 29, 9)];
        let qdt = QTriangulationState::build(&pts, &gon).unwrap();
        assert_eq!(qdt.triangles.len(), 1);
        assert_eq!(qdt.edges.len(), 3);
        for e in qdt.edges.values() {
            assert!(e.is_periphery());
            // one wedge end, one finite end
            let finite = e
                .ends
                .iter()
                .filter(|x| matches!(x, QEdgeEnd::Vertex { .. }))
                .count();
            assert_eq!(finite, 1);
            for w in e.breakpoints.windows(2) {
                assert_ne!(w[0].site, w[1].site);
            }
        }
    }

    #[test]
    fn counts_agree_between_routes_random() {
        for (k, seed, n) in [(8usize, 11u64, 7usize), (12, 23, 8), (8, 37, 9)] {
            let gon = RegularGon::new(k).unwrap();
            let pts = crate::scenario::random_points(seed, n, 10);
            let qdt = match QTriangulationState::build(&pts, &gon) {
                Ok(q) => q,
                Err(Error::DegenerateConfiguration(_)) => continue,
                Err(e) => panic!("{e}"),
            };
            // the cross-check already runs inside build; also sanity-check
            // the SDG extraction routes
            assert_eq!(qdt.extract_sdg(), extract_sdg_static(&pts, &gon).unwrap());
        }
    }

    #[test]
    fn quad_flip_matches_euclid_on_perturbed_square() {
        // a clearly-off-cocircular quad: the Q-Delaunay diagonal matches the
        // Euclidean one when k is moderately large
        let pts = vec![pt(0, 0), pt(10, 1), pt(11, 12), ptr(-3, 2, 21, 2)];
        let gon = RegularGon::new(12).unwrap();
        let qdt = QTriangulationState::build(&pts, &gon).unwrap();
        let dt = crate::euclid::TriangulationState::build(&pts).unwrap();
        let qdt_tris = qdt.triangle_set();
        let dt_tris: BTreeSet<[usize; 3]> = dt
            .triangles
            .iter()
            .map(|t| {
                let mut s = *t;
                s.sort();
                s
            })
            .collect();
        assert_eq!(qdt_tris, dt_tris);
    }
}
