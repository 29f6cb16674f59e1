//! Exact static Euclidean Delaunay/Voronoi oracle.
//!
//! Builds DT(P) at a time instant with exact rational predicates, computes
//! Voronoi edge extents, classifies alpha-long edges and evaluates the
//! directional distances phi_i and neighbors N_i(p).

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use num_traits::Signed;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::angle::{cmp_sum_vs_cos, VecAngle};
use crate::direction::DirectionSet;
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::geom::{RatPoint, Vec2};
use crate::num::{rat_int, rat_sign, Rat};

const GHOST: usize = usize::MAX;

/// Sign of the orientation determinant of (b - a, c - a).
pub fn orient(a: &RatPoint, b: &RatPoint, c: &RatPoint) -> i8 {
    let d = (&b.x - &a.x) * (&c.y - &a.y) - (&b.y - &a.y) * (&c.x - &a.x);
    rat_sign(&d)
}

/// Position of d relative to the circumcircle of the ccw triangle (a, b, c):
/// 1 inside, 0 on, -1 outside.
pub fn incircle(a: &RatPoint, b: &RatPoint, c: &RatPoint, d: &RatPoint) -> i8 {
    debug_assert!(orient(a, b, c) > 0, "incircle expects ccw triangle");
    let adx = &a.x - &d.x;
    let ady = &a.y - &d.y;
    let bdx = &b.x - &d.x;
    let bdy = &b.y - &d.y;
    let cdx = &c.x - &d.x;
    let cdy = &c.y - &d.y;
    let ad = &adx * &adx + &ady * &ady;
    let bd = &bdx * &bdx + &bdy * &bdy;
    let cd = &cdx * &cdx + &cdy * &cdy;
    let det = &adx * (&bdy * &cd - &bd * &cdy) - &ady * (&bdx * &cd - &bd * &cdx)
        + &ad * (&bdx * &cdy - &bdy * &cdx);
    rat_sign(&det)
}

/// Circumcenter of a non-degenerate triangle.
pub fn circumcenter(a: &RatPoint, b: &RatPoint, c: &RatPoint) -> RatPoint {
    let d = (&a.x * (&b.y - &c.y) + &b.x * (&c.y - &a.y) + &c.x * (&a.y - &b.y)) * rat_int(2);
    let a2 = a.norm2();
    let b2 = b.norm2();
    let c2 = c.norm2();
    let ux = (&a2 * (&b.y - &c.y) + &b2 * (&c.y - &a.y) + &c2 * (&a.y - &b.y)) / &d;
    let uy = (&a2 * (&c.x - &b.x) + &b2 * (&a.x - &c.x) + &c2 * (&b.x - &a.x)) / &d;
    RatPoint::new(ux, uy)
}

pub fn sorted_pair(p: usize, q: usize) -> (usize, usize) {
    if p < q {
        (p, q)
    } else {
        (q, p)
    }
}

/// Static Euclidean Delaunay triangulation with Voronoi annotations.
#[derive(Debug, Clone)]
pub struct TriangulationState {
    pub points: Vec<RatPoint>,
    /// ccw triangles, sorted by vertex triple.
    pub triangles: Vec<[usize; 3]>,
    /// undirected edge -> indices into `triangles` (1 = hull edge, 2 = interior)
    edge_tris: BTreeMap<(usize, usize), Vec<usize>>,
    /// counterclockwise hull vertex order
    pub hull: Vec<usize>,
    /// circumcenter per triangle
    pub circumcenters: Vec<RatPoint>,
}

impl TriangulationState {
    /// Randomized incremental (Bowyer-Watson with ghost triangles) build.
    /// Rejects cocircular quadruples across final Delaunay triangles,
    /// collinear hull triples, coincident points and fully collinear inputs.
    pub fn build(points: &[RatPoint]) -> Result<TriangulationState> {
        build_dt(points)
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edge_tris.keys().cloned()
    }

    pub fn edge_set(&self) -> BTreeSet<(usize, usize)> {
        self.edge_tris.keys().cloned().collect()
    }

    pub fn is_edge(&self, p: usize, q: usize) -> bool {
        self.edge_tris.contains_key(&sorted_pair(p, q))
    }

    /// Apexes of the triangles incident to edge pq (1 for hull edges).
    pub fn opposites(&self, p: usize, q: usize) -> Result<Vec<usize>> {
        let tris = self
            .edge_tris
            .get(&sorted_pair(p, q))
            .ok_or(Error::NotDelaunayEdge(p, q))?;
        Ok(tris
            .iter()
            .map(|&t| {
                let tri = self.triangles[t];
                *tri.iter().find(|&&v| v != p && v != q).unwrap()
            })
            .collect())
    }

    fn tri_indices(&self, p: usize, q: usize) -> Option<&Vec<usize>> {
        self.edge_tris.get(&sorted_pair(p, q))
    }

    /// The extent of the Voronoi edge dual to pq: the angle at which p (and
    /// equally q) sees e_pq.
    pub fn extent(&self, p: usize, q: usize) -> Result<ExtentAngle> {
        if self.points.len() == 2 {
            return Ok(ExtentAngle::FullLine);
        }
        let tris = self.tri_indices(p, q).ok_or(Error::NotDelaunayEdge(p, q))?;
        let pp = &self.points[p];
        match tris.as_slice() {
            [t] => {
                let cc = self.circumcenters[*t].clone();
                let apex = self.opposites(p, q)?[0];
                // outward normal of pq, away from the apex
                let pq = self.points[q].sub(pp);
                let mut n = RatPoint::new(-pq.y.clone(), pq.x.clone());
                let ap = self.points[apex].sub(pp);
                if rat_sign(&n.dot(&ap)) > 0 {
                    n = RatPoint::new(pq.y.clone(), -pq.x.clone());
                }
                Ok(ExtentAngle::Hull { from_p: cc.sub(pp), inf_dir: n })
            }
            [t1, t2] => Ok(ExtentAngle::Interior {
                w1: self.circumcenters[*t1].sub(pp),
                w2: self.circumcenters[*t2].sub(pp),
            }),
            _ => unreachable!("edge with more than two triangles"),
        }
    }

    /// Is edge pq m*alpha-long (extent at least m * 2pi/k)?
    pub fn is_alpha_long(&self, p: usize, q: usize, dirs: &DirectionSet, m: i64) -> Result<bool> {
        let e = self.extent(p, q)?;
        Ok(e.at_least_m_alpha(dirs, m))
    }

    /// Same classification through the Delaunay-angle route:
    /// extent >= m*alpha  <=>  sum of opposite angles <= pi - m*alpha.
    /// Independent cross-check of `extent`.
    pub fn is_alpha_long_by_angles(
        &self,
        p: usize,
        q: usize,
        dirs: &DirectionSet,
        m: i64,
    ) -> Result<bool> {
        if self.points.len() == 2 {
            return Ok(m <= dirs.s as i64);
        }
        let opp = self.opposites(p, q)?;
        if m <= 0 {
            return Ok(true);
        }
        if m > dirs.s as i64 {
            // target beyond pi; extents of n >= 3 instances are < pi
            return Ok(false);
        }
        let field = dirs.field();
        // target for the angle sum: pi - m*alpha, cosine -cos(m*alpha)
        let (cm, _) = dirs.cos_sin_multiple(m);
        let target = cm.neg();
        let pp = &self.points[p];
        let qq = &self.points[q];
        let angles: Vec<VecAngle> = opp
            .iter()
            .map(|&r| {
                let rp = &self.points[r];
                VecAngle::between(&pp.sub(rp), &qq.sub(rp))
            })
            .collect();
        let ord = match angles.as_slice() {
            [a] => a.cmp_vs_cos(&target),
            [a, b] => cmp_sum_vs_cos(a, b, &target, field),
            _ => unreachable!(),
        };
        Ok(ord != Ordering::Greater)
    }

    /// All alpha-long edges at the given multiple m.
    pub fn long_edges(&self, dirs: &DirectionSet, m: i64) -> Result<BTreeSet<(usize, usize)>> {
        let mut out = BTreeSet::new();
        for (p, q) in self.edge_set() {
            if self.is_alpha_long(p, q, dirs, m)? {
                out.insert((p, q));
            }
        }
        Ok(out)
    }
}

/// Exact representation of an extent: direction vectors from p toward the
/// two endpoints of the Voronoi edge (a point at infinity contributes its
/// direction).
#[derive(Debug, Clone)]
pub enum ExtentAngle {
    /// n = 2: the bisector line, extent pi.
    FullLine,
    /// Hull edge: one circumcenter, one infinite direction.
    Hull { from_p: RatPoint, inf_dir: RatPoint },
    /// Interior edge: two circumcenters.
    Interior { w1: RatPoint, w2: RatPoint },
}

impl ExtentAngle {
    pub fn angle(&self) -> Option<VecAngle> {
        match self {
            ExtentAngle::FullLine => None,
            ExtentAngle::Hull { from_p, inf_dir } => Some(VecAngle::between(from_p, inf_dir)),
            ExtentAngle::Interior { w1, w2 } => Some(VecAngle::between(w1, w2)),
        }
    }

    /// extent >= m * alpha, exact.
    pub fn at_least_m_alpha(&self, dirs: &DirectionSet, m: i64) -> bool {
        if m <= 0 {
            return true;
        }
        match self.angle() {
            None => m <= dirs.s as i64, // extent == pi
            Some(a) => {
                if m > dirs.s as i64 {
                    return false;
                }
                let (cm, _) = dirs.cos_sin_multiple(m);
                a.cmp_vs_cos(&cm) != Ordering::Less
            }
        }
    }

    /// extent >= target given by its exact cosine (target in [0, pi]).
    pub fn at_least_cos_target(&self, cos_t: &Scalar) -> bool {
        match self.angle() {
            None => true,
            Some(a) => a.cmp_vs_cos(cos_t) != Ordering::Less,
        }
    }

    pub fn to_degrees(&self) -> f64 {
        match self.angle() {
            None => 180.0,
            Some(a) => a.to_degrees(),
        }
    }
}

// ---------------------------------------------------------------------------
// construction
// ---------------------------------------------------------------------------

fn build_dt(points: &[RatPoint]) -> Result<TriangulationState> {
    let n = points.len();
    if n < 3 {
        return Err(Error::DegenerateConfiguration(format!(
            "need at least 3 points, got {n}"
        )));
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
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5d9);
    order.shuffle(&mut rng);

    // initial non-collinear triple from the shuffled order
    let mut k = 2;
    while k < n && orient(&points[order[0]], &points[order[1]], &points[order[k]]) == 0 {
        k += 1;
    }
    if k == n {
        return Err(Error::DegenerateConfiguration("all points collinear".into()));
    }
    order.swap(2, k);
    let (i0, i1, i2) = (order[0], order[1], order[2]);
    let tri0 = if orient(&points[i0], &points[i1], &points[i2]) > 0 {
        [i0, i1, i2]
    } else {
        [i1, i0, i2]
    };

    // live triangle soup including ghosts
    let mut tris: Vec<[usize; 3]> = vec![
        tri0,
        [tri0[1], tri0[0], GHOST],
        [tri0[2], tri0[1], GHOST],
        [tri0[0], tri0[2], GHOST],
    ];
    let mut live = vec![true; 4];

    for &pi in order.iter().skip(3) {
        let p = &points[pi];
        let mut cav = Vec::new();
        for (ti, t) in tris.iter().enumerate() {
            if !live[ti] {
                continue;
            }
            let hit = if t[2] == GHOST {
                // ghost triples store the reversed hull edge, so "outside"
                // is the positive side of t[0] -> t[1]
                let a = &points[t[0]];
                let b = &points[t[1]];
                match orient(a, b, p) {
                    x if x > 0 => true,
                    0 => {
                        // on the hull line: conflict only strictly inside the segment
                        let ab = b.sub(a);
                        let ap = p.sub(a);
                        let d = ab.dot(&ap);
                        d.is_positive() && d < ab.norm2()
                    }
                    _ => false,
                }
            } else {
                incircle(&points[t[0]], &points[t[1]], &points[t[2]], p) >= 0
            };
            if hit {
                cav.push(ti);
            }
        }
        if cav.is_empty() {
            return Err(Error::DegenerateConfiguration(format!(
                "point {pi} conflicts with no triangle"
            )));
        }
        let mut dir_edges: BTreeSet<(usize, usize)> = BTreeSet::new();
        for &ti in &cav {
            let t = tris[ti];
            for e in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                dir_edges.insert(e);
            }
        }
        for &ti in &cav {
            live[ti] = false;
        }
        for &(u, v) in &dir_edges {
            if dir_edges.contains(&(v, u)) {
                continue; // interior to the cavity
            }
            let newt = if u == GHOST {
                [v, pi, GHOST]
            } else if v == GHOST {
                [pi, u, GHOST]
            } else {
                [u, v, pi]
            };
            tris.push(newt);
            live.push(true);
        }
    }

    // collect real triangles and the hull, then validate
    let mut triangles: Vec<[usize; 3]> = Vec::new();
    let mut hull_next: BTreeMap<usize, usize> = BTreeMap::new();
    for (ti, t) in tris.iter().enumerate() {
        if !live[ti] {
            continue;
        }
        if t[2] == GHOST {
            // ghost holds the reversed hull edge; walk t[1] -> t[0] for ccw
            hull_next.insert(t[1], t[0]);
        } else {
            if orient(&points[t[0]], &points[t[1]], &points[t[2]]) <= 0 {
                return Err(Error::DegenerateConfiguration(format!(
                    "degenerate triangle {t:?}"
                )));
            }
            triangles.push(*t);
        }
    }
    if triangles.is_empty() {
        return Err(Error::DegenerateConfiguration("no real triangles".into()));
    }
    let mut hull = Vec::with_capacity(hull_next.len());
    let start = *hull_next.keys().next().unwrap();
    let mut cur = start;
    loop {
        hull.push(cur);
        cur = *hull_next
            .get(&cur)
            .ok_or_else(|| Error::DegenerateConfiguration("broken hull cycle".into()))?;
        if cur == start {
            break;
        }
        if hull.len() > hull_next.len() {
            return Err(Error::DegenerateConfiguration("broken hull cycle".into()));
        }
    }
    if hull.len() != hull_next.len() {
        return Err(Error::DegenerateConfiguration("disconnected hull".into()));
    }
    let h = hull.len();
    for i in 0..h {
        let a = &points[hull[i]];
        let b = &points[hull[(i + 1) % h]];
        let c = &points[hull[(i + 2) % h]];
        if orient(a, b, c) == 0 {
            return Err(Error::DegenerateConfiguration(format!(
                "collinear hull triple ({}, {}, {})",
                hull[i],
                hull[(i + 1) % h],
                hull[(i + 2) % h]
            )));
        }
    }
    // empty-circumcircle certification; an "on" hit is a cocircular quadruple
    for t in &triangles {
        let (a, b, c) = (&points[t[0]], &points[t[1]], &points[t[2]]);
        for (pi, p) in points.iter().enumerate() {
            if t.contains(&pi) {
                continue;
            }
            match incircle(a, b, c, p) {
                1 => {
                    return Err(Error::DegenerateConfiguration(format!(
                        "triangle {t:?} circumcircle contains point {pi}: not Delaunay"
                    )))
                }
                0 => {
                    return Err(Error::DegenerateConfiguration(format!(
                        "cocircular quadruple: triangle {t:?} and point {pi}"
                    )))
                }
                _ => {}
            }
        }
    }

    triangles.sort();
    let circumcenters = triangles
        .iter()
        .map(|t| circumcenter(&points[t[0]], &points[t[1]], &points[t[2]]))
        .collect();
    let mut edge_tris: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (ti, t) in triangles.iter().enumerate() {
        for (u, v) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
            edge_tris.entry(sorted_pair(u, v)).or_default().push(ti);
        }
    }
    Ok(TriangulationState {
        points: points.to_vec(),
        triangles,
        edge_tris,
        hull,
        circumcenters,
    })
}

// ---------------------------------------------------------------------------
// directional distances
// ---------------------------------------------------------------------------

/// phi_u[p,q] = |q-p|^2 / (2 <q-p, u>), or None when the bisector misses the
/// ray u[p].
pub fn phi_dir(p: &RatPoint, q: &RatPoint, u: &Vec2) -> Option<Scalar> {
    let field = u.x.field().clone();
    let d = q.sub(p);
    let dv = Vec2::from_rats(&field, &d.x, &d.y);
    let den = dv.dot(u);
    if den.sign() <= 0 {
        return None;
    }
    let num = Scalar::from_rat(&field, d.norm2());
    Some(num.div(&den.scale_rat(&rat_int(2))))
}

/// N_u(p): the neighbor of p in direction u over the whole point set.
/// Exact ties raise DegenerateConfiguration.
pub fn neighbor_in_direction(points: &[RatPoint], p: usize, u: &Vec2) -> Result<Option<usize>> {
    let mut best: Option<(usize, Scalar)> = None;
    for (qi, q) in points.iter().enumerate() {
        if qi == p {
            continue;
        }
        if let Some(v) = phi_dir(&points[p], q, u) {
            best = match best {
                None => Some((qi, v)),
                Some((bi, bv)) => match v.cmp(&bv) {
                    Ordering::Less => Some((qi, v)),
                    Ordering::Equal => {
                        return Err(Error::DegenerateConfiguration(format!(
                            "tie in neighbor_in_direction at p={p}: {bi} vs {qi}"
                        )))
                    }
                    Ordering::Greater => Some((bi, bv)),
                },
            };
        }
    }
    Ok(best.map(|(i, _)| i))
}

/// Table of N_i(p) for all points and directions; errors on exact ties.
pub fn neighbor_table(points: &[RatPoint], dirs: &DirectionSet) -> Result<Vec<Vec<Option<usize>>>> {
    let mut out = Vec::with_capacity(points.len());
    for p in 0..points.len() {
        let mut row = Vec::with_capacity(dirs.k);
        for i in 0..dirs.k {
            row.push(neighbor_in_direction(points, p, &dirs.u(i))?);
        }
        out.push(row);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rat;

    fn pt(x: i64, y: i64) -> RatPoint {
        RatPoint::new(rat_int(x), rat_int(y))
    }

    #[test]
    fn orientation_cases() {
        assert_eq!(orient(&pt(0, 0), &pt(1, 0), &pt(0, 1)), 1);
        assert_eq!(orient(&pt(0, 0), &pt(1, 0), &pt(2, 0)), 0);
        assert_eq!(orient(&pt(0, 0), &pt(1, 0), &pt(1, -1)), -1);
    }

    #[test]
    fn incircle_cases() {
        let (a, b, c) = (pt(0, 0), pt(1, 0), pt(0, 1));
        assert_eq!(incircle(&a, &b, &c, &pt(1, 1)), 0); // cocircular square
        let half = RatPoint::new(rat(1, 2), rat(1, 2));
        assert_eq!(incircle(&a, &b, &c, &half), 1);
        assert_eq!(incircle(&a, &b, &c, &pt(2, 2)), -1);
    }

    #[test]
    fn single_triangle() {
        let pts = vec![pt(0, 0), pt(2, 0), pt(0, 2)];
        let dt = TriangulationState::build(&pts).unwrap();
        assert_eq!(dt.triangles.len(), 1);
        assert_eq!(dt.hull.len(), 3);
        for (p, q) in [(0, 1), (1, 2), (0, 2)] {
            assert!(dt.is_edge(p, q));
            assert_eq!(dt.opposites(p, q).unwrap().len(), 1);
        }
        assert!(matches!(
            dt.extent(1, 1),
            Err(Error::NotDelaunayEdge(_, _))
        ));
    }

    #[test]
    fn two_triangles_shared_edge() {
        // (2,-3) lies outside the circumcircle of the upper triangle
        let pts = vec![pt(0, 0), pt(4, 0), pt(2, 3), pt(2, -3)];
        let dt = TriangulationState::build(&pts).unwrap();
        assert_eq!(dt.triangles.len(), 2);
        assert!(dt.is_edge(0, 1));
        assert_eq!(dt.opposites(0, 1).unwrap().len(), 2);
        assert!(!dt.is_edge(2, 3));
    }

    #[test]
    fn cocircular_square_rejected() {
        let pts = vec![pt(0, 0), pt(1, 0), pt(0, 1), pt(1, 1)];
        assert!(matches!(
            TriangulationState::build(&pts),
            Err(Error::DegenerateConfiguration(_))
        ));
    }

    #[test]
    fn collinear_inputs_rejected() {
        let pts = vec![pt(0, 0), pt(1, 0), pt(2, 0)];
        assert!(matches!(
            TriangulationState::build(&pts),
            Err(Error::DegenerateConfiguration(_))
        ));
        let pts = vec![pt(0, 0), pt(1, 0), pt(2, 0), pt(1, 1)];
        assert!(matches!(
            TriangulationState::build(&pts),
            Err(Error::DegenerateConfiguration(_))
        ));
    }

    #[test]
    fn hull_edge_extent() {
        // extent of (0,0)-(2,0) in the single right triangle is 3pi/4
        let pts = vec![pt(0, 0), pt(2, 0), pt(0, 2)];
        let dt = TriangulationState::build(&pts).unwrap();
        let dirs = DirectionSet::new(8).unwrap(); // alpha = 45 degrees
        assert!(dt.is_alpha_long(0, 1, &dirs, 3).unwrap()); // 135 >= 135
        assert!(!dt.is_alpha_long(0, 1, &dirs, 4).unwrap()); // 135 < 180
        for m in 0..=4 {
            assert_eq!(
                dt.is_alpha_long(0, 1, &dirs, m).unwrap(),
                dt.is_alpha_long_by_angles(0, 1, &dirs, m).unwrap()
            );
        }
    }

    #[test]
    fn interior_edge_extent_double_route() {
        // edge (0,0)-(4,0): extent = pi - 2*arccos(5/13), about 45.24 degrees
        let pts = vec![pt(0, 0), pt(4, 0), pt(2, 3), pt(2, -3)];
        let dt = TriangulationState::build(&pts).unwrap();
        let e = dt.extent(0, 1).unwrap();
        assert!((e.to_degrees() - 45.2397).abs() < 1e-3, "{}", e.to_degrees());
        let dirs = DirectionSet::new(8).unwrap();
        assert!(dt.is_alpha_long(0, 1, &dirs, 1).unwrap()); // 45.24 >= 45
        assert!(!dt.is_alpha_long(0, 1, &dirs, 2).unwrap());
        for (p, q) in dt.edge_set() {
            for m in 0..=5 {
                assert_eq!(
                    dt.is_alpha_long(p, q, &dirs, m).unwrap(),
                    dt.is_alpha_long_by_angles(p, q, &dirs, m).unwrap(),
                    "edge ({p},{q}) m={m}"
                );
            }
        }
    }

    #[test]
    fn phi_examples() {
        let dirs = DirectionSet::new(4).unwrap();
        let u0 = dirs.u(0); // (1, 0)
        let p = pt(0, 0);
        let v = phi_dir(&p, &pt(2, 0), &u0).unwrap();
        assert_eq!(v.as_rat().unwrap(), &rat_int(1));
        let down = dirs.u(1); // (0, -1)
        assert!(phi_dir(&p, &pt(2, 0), &down).is_none());
        let v = phi_dir(&p, &pt(2, 2), &u0).unwrap();
        assert_eq!(v.as_rat().unwrap(), &rat_int(2));
        let _ = rat(1, 2);
    }

    #[test]
    fn neighbor_examples() {
        let dirs = DirectionSet::new(4).unwrap();
        let u0 = dirs.u(0);
        let pts = vec![pt(0, 0), pt(2, 0)];
        assert_eq!(neighbor_in_direction(&pts, 0, &u0).unwrap(), Some(1));
        let pts = vec![pt(0, 0), pt(2, 0), pt(0, 2)];
        assert_eq!(neighbor_in_direction(&pts, 0, &u0).unwrap(), Some(1));
        let left = dirs.u(2);
        let pts = vec![pt(0, 0), pt(2, 0)];
        assert_eq!(neighbor_in_direction(&pts, 0, &left).unwrap(), None);
    }
}
