//! Point-line incidence geometries with the generalized-quadrangle
//! verification battery: axioms, perp/span calculus, regularity and
//! antiregularity, triads and Property (G), duality, isomorphism.

mod iso;

pub use iso::{gq_isomorphic, GqIsoVerdict};

use fixedbitset::FixedBitSet;
use std::sync::OnceLock;
use thiserror::Error;

/// Full GQ verification is desk-scale; larger geometries are validated on
/// the group side (Kantor axioms) and sampled.
pub const VERIFY_MAX_POINTS: usize = 5000;

#[derive(Debug, Error)]
pub enum GqError {
    #[error("geometry is empty")]
    Empty,
    #[error("line sizes differ: line {0} has {1} points, line {2} has {3}")]
    LineSize(usize, usize, usize, usize),
    #[error("point degrees differ: point {0} lies on {1} lines, point {2} on {3}")]
    PointDegree(usize, usize, usize, usize),
    #[error("digon: points {0} and {1} lie on lines {2} and {3}")]
    Digon(usize, usize, usize, usize),
    #[error("triangle witnessed at points {0}, {1}, {2}")]
    Triangle(usize, usize, usize),
    #[error("antiflag ({point}, line {line}) has {count} incident chains, expected 1")]
    Antiflag { point: usize, line: usize, count: usize },
    #[error("no pentagon: geometry is not thick")]
    NoPentagon,
    #[error("point/line counts {0}/{1} off the (1+s)(1+st)/(1+t)(1+st) formulas for order ({2},{3})")]
    CountMismatch(usize, usize, usize, usize),
    #[error("geometry with {0} points exceeds verification bound {VERIFY_MAX_POINTS}")]
    TooLarge(usize),
    #[error("{0}")]
    Precondition(String),
}

/// Immutable bitset-backed incidence structure.
pub struct PointLineGeometry {
    n_points: usize,
    line_points: Vec<Vec<u32>>,
    point_lines: Vec<Vec<u32>>,
    order: Option<(usize, usize)>,
    collinearity: OnceLock<Vec<FixedBitSet>>,
    line_sets: OnceLock<Vec<FixedBitSet>>,
}

impl std::fmt::Debug for PointLineGeometry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PointLineGeometry({} pts, {} lines, order {:?})", self.n_points, self.n_lines(), self.order)
    }
}

impl Clone for PointLineGeometry {
    fn clone(&self) -> Self {
        PointLineGeometry {
            n_points: self.n_points,
            line_points: self.line_points.clone(),
            point_lines: self.point_lines.clone(),
            order: self.order,
            collinearity: OnceLock::new(),
            line_sets: OnceLock::new(),
        }
    }
}

/// A triad of pairwise noncollinear points with its centers and span.
#[derive(Debug, Clone)]
pub struct TriadRecord {
    pub triad: [usize; 3],
    pub centers: Vec<u32>,
    pub span: Vec<u32>,
}

impl PointLineGeometry {
    pub fn from_lines(n_points: usize, lines: Vec<Vec<u32>>) -> PointLineGeometry {
        let mut line_points: Vec<Vec<u32>> = lines;
        for l in line_points.iter_mut() {
            l.sort_unstable();
            l.dedup();
        }
        let mut point_lines = vec![Vec::new(); n_points];
        for (li, l) in line_points.iter().enumerate() {
            for &p in l {
                point_lines[p as usize].push(li as u32);
            }
        }
        PointLineGeometry {
            n_points,
            line_points,
            point_lines,
            order: None,
            collinearity: OnceLock::new(),
            line_sets: OnceLock::new(),
        }
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn n_lines(&self) -> usize {
        self.line_points.len()
    }

    pub fn order(&self) -> Option<(usize, usize)> {
        self.order
    }

    pub fn points_on_line(&self, l: usize) -> &[u32] {
        &self.line_points[l]
    }

    pub fn lines_on_point(&self, p: usize) -> &[u32] {
        &self.point_lines[p]
    }

    pub fn incident(&self, p: usize, l: usize) -> bool {
        self.line_points[l].binary_search(&(p as u32)).is_ok()
    }

    fn line_set(&self, l: usize) -> &FixedBitSet {
        let sets = self.line_sets.get_or_init(|| {
            self.line_points
                .iter()
                .map(|pts| {
                    let mut b = FixedBitSet::with_capacity(self.n_points);
                    for &p in pts {
                        b.insert(p as usize);
                    }
                    b
                })
                .collect()
        });
        &sets[l]
    }

    /// p^perp as a bitset, p included.
    pub fn perp_point(&self, p: usize) -> &FixedBitSet {
        let coll = self.collinearity.get_or_init(|| {
            (0..self.n_points)
                .map(|p| {
                    let mut b = FixedBitSet::with_capacity(self.n_points);
                    b.insert(p);
                    for &l in &self.point_lines[p] {
                        b.union_with(self.line_set(l as usize));
                    }
                    b
                })
                .collect()
        });
        &coll[p]
    }

    pub fn collinear(&self, p: usize, q: usize) -> bool {
        self.perp_point(p).contains(q)
    }

    /// The common line of two distinct collinear points.
    pub fn line_through(&self, p: usize, q: usize) -> Option<usize> {
        self.point_lines[p]
            .iter()
            .find(|&&l| self.incident(q, l as usize))
            .map(|&l| l as usize)
    }

    /// Unique point of L collinear with p, for p off L of a verified GQ.
    pub fn proj_point(&self, p: usize, l: usize) -> usize {
        debug_assert!(!self.incident(p, l));
        let perp = self.perp_point(p);
        self.line_points[l]
            .iter()
            .map(|&q| q as usize)
            .find(|&q| perp.contains(q))
            .expect("GQ projection exists")
    }

    /// Unique line on p concurrent with L, for p off L of a verified GQ.
    pub fn proj_line(&self, p: usize, l: usize) -> usize {
        let q = self.proj_point(p, l);
        self.line_through(p, q).expect("projection line exists")
    }

    /// Intersection of the perps of a point set.
    pub fn perp_of_set(&self, pts: &[usize]) -> Vec<u32> {
        assert!(!pts.is_empty());
        let mut acc = self.perp_point(pts[0]).clone();
        for &p in &pts[1..] {
            acc.intersect_with(self.perp_point(p));
        }
        acc.ones().map(|x| x as u32).collect()
    }

    /// {p,q}^perp for distinct points.
    pub fn perp_pair(&self, p: usize, q: usize) -> Vec<u32> {
        self.perp_of_set(&[p, q])
    }

    /// {p,q}^perpperp for distinct points.
    pub fn span_pair(&self, p: usize, q: usize) -> Vec<u32> {
        assert_ne!(p, q, "span of a point with itself");
        let t = self.perp_pair(p, q);
        self.perp_of_set(&t.iter().map(|&x| x as usize).collect::<Vec<_>>())
    }

    /// Regularity of a pair per the span-size criterion.
    pub fn is_regular_pair(&self, p: usize, q: usize) -> bool {
        let (_, t) = self.order.expect("verify_gq first");
        if self.collinear(p, q) {
            true
        } else {
            self.span_pair(p, q).len() == t + 1
        }
    }

    pub fn is_regular_point(&self, p: usize) -> bool {
        (0..self.n_points).filter(|&q| q != p).all(|q| self.is_regular_pair(p, q))
    }

    pub fn regular_point_count(&self) -> usize {
        (0..self.n_points).filter(|&p| self.is_regular_point(p)).count()
    }

    /// Antiregularity: |{x,y}^perp ∩ z^perp| <= 2 for all z off {x,y}.
    pub fn is_antiregular_pair(&self, x: usize, y: usize) -> bool {
        if self.collinear(x, y) {
            return false;
        }
        let perp: Vec<usize> = self.perp_pair(x, y).iter().map(|&v| v as usize).collect();
        (0..self.n_points).filter(|&z| z != x && z != y).all(|z| {
            let zp = self.perp_point(z);
            perp.iter().filter(|&&u| zp.contains(u)).count() <= 2
        })
    }

    pub fn is_antiregular_point(&self, x: usize) -> bool {
        (0..self.n_points)
            .filter(|&y| y != x && !self.collinear(x, y))
            .all(|y| self.is_antiregular_pair(x, y))
    }

    /// Transposed geometry: lines become points.
    pub fn dualize(&self) -> PointLineGeometry {
        let mut g = PointLineGeometry::from_lines(
            self.n_lines(),
            self.point_lines.clone(),
        );
        g.order = self.order.map(|(s, t)| (t, s));
        g
    }

    /// Centers and span of a triad of pairwise noncollinear points.
    pub fn triad_centers(&self, triad: [usize; 3]) -> Result<TriadRecord, GqError> {
        let [a, b, c] = triad;
        if a == b || b == c || a == c || self.collinear(a, b) || self.collinear(b, c) || self.collinear(a, c) {
            return Err(GqError::Precondition("triad must be pairwise noncollinear".into()));
        }
        let centers = self.perp_of_set(&[a, b, c]);
        let span = if centers.is_empty() {
            Vec::new()
        } else {
            self.perp_of_set(&centers.iter().map(|&x| x as usize).collect::<Vec<_>>())
        };
        Ok(TriadRecord { triad, centers, span })
    }

    /// 3-regularity of a point triad: |perp| = |span| = t + 1.
    pub fn three_regular_points(&self, triad: [usize; 3]) -> Result<bool, GqError> {
        let (_, t) = self.order.ok_or_else(|| GqError::Precondition("verify_gq first".into()))?;
        let rec = self.triad_centers(triad)?;
        Ok(rec.centers.len() == t + 1 && rec.span.len() == t + 1)
    }

    /// GQ axioms; stores and returns the order on success.
    pub fn verify_gq(&mut self) -> Result<(usize, usize), GqError> {
        let (s, t) = self.check_gq_axioms()?;
        self.order = Some((s, t));
        Ok((s, t))
    }

    fn check_gq_axioms(&self) -> Result<(usize, usize), GqError> {
        if self.n_points == 0 || self.n_lines() == 0 {
            return Err(GqError::Empty);
        }
        if self.n_points > VERIFY_MAX_POINTS {
            return Err(GqError::TooLarge(self.n_points));
        }

        let line_size = self.line_points[0].len();
        for (l, pts) in self.line_points.iter().enumerate() {
            if pts.len() != line_size {
                return Err(GqError::LineSize(0, line_size, l, pts.len()));
            }
        }
        let degree = self.point_lines[0].len();
        for (p, ls) in self.point_lines.iter().enumerate() {
            if ls.len() != degree {
                return Err(GqError::PointDegree(0, degree, p, ls.len()));
            }
        }
        if line_size < 2 || degree < 2 {
            return Err(GqError::NoPentagon);
        }
        let s = line_size - 1;
        let t = degree - 1;

        // No digons: two lines share at most one point.
        for p in 0..self.n_points {
            for (i, &l1) in self.point_lines[p].iter().enumerate() {
                for &l2 in &self.point_lines[p][i + 1..] {
                    let mut shared = self.line_set(l1 as usize).clone();
                    shared.intersect_with(self.line_set(l2 as usize));
                    if shared.count_ones(..) > 1 {
                        let mut it = shared.ones();
                        let a = it.next().unwrap();
                        let b = it.next().unwrap();
                        return Err(GqError::Digon(a, b, l1 as usize, l2 as usize));
                    }
                }
            }
        }

        // No triangles: the common perp of a collinear pair is its line.
        for l in 0..self.n_lines() {
            let pts = &self.line_points[l];
            for (i, &p) in pts.iter().enumerate() {
                for &q in &pts[i + 1..] {
                    let mut common = self.perp_point(p as usize).clone();
                    common.intersect_with(self.perp_point(q as usize));
                    common.difference_with(self.line_set(l));
                    if let Some(r) = common.ones().next() {
                        return Err(GqError::Triangle(p as usize, q as usize, r));
                    }
                }
            }
        }

        // Antiflag axiom: exactly one incident chain.
        for l in 0..self.n_lines() {
            let set = self.line_set(l).clone();
            for p in 0..self.n_points {
                if set.contains(p) {
                    continue;
                }
                let mut hits = self.perp_point(p).clone();
                hits.intersect_with(&set);
                let count = hits.count_ones(..);
                if count != 1 {
                    return Err(GqError::Antiflag { point: p, line: l, count });
                }
            }
        }

        self.find_pentagon().ok_or(GqError::NoPentagon)?;

        let expect_points = (1 + s) * (1 + s * t);
        let expect_lines = (1 + t) * (1 + s * t);
        if self.n_points != expect_points || self.n_lines() != expect_lines {
            return Err(GqError::CountMismatch(self.n_points, self.n_lines(), s, t));
        }
        Ok((s, t))
    }

    /// Earliest-index DFS for an ordinary pentagon through point 0.
    /// With constant degrees and the digon/triangle/antiflag axioms already
    /// holding, a pentagon exists somewhere iff one passes through every
    /// point, so anchoring at 0 loses nothing.
    pub fn find_pentagon(&self) -> Option<[usize; 5]> {
        if self.n_points == 0 {
            return None;
        }
        let p0 = 0usize;
        let n0 = self.perp_point(p0).clone();
        for p1 in n0.ones().filter(|&x| x != p0) {
            for p2 in self.perp_point(p1).ones() {
                if p2 == p0 || p2 == p1 || n0.contains(p2) {
                    continue;
                }
                for p3 in self.perp_point(p2).ones() {
                    if p3 == p0 || p3 == p1 || p3 == p2 || n0.contains(p3) || self.collinear(p1, p3) {
                        continue;
                    }
                    // p4 collinear with both p3 and p0, off the others.
                    let mut cands = self.perp_point(p3).clone();
                    cands.intersect_with(&n0);
                    for p4 in cands.ones() {
                        if p4 != p0
                            && p4 != p1
                            && p4 != p2
                            && p4 != p3
                            && !self.collinear(p4, p1)
                            && !self.collinear(p4, p2)
                        {
                            return Some([p0, p1, p2, p3, p4]);
                        }
                    }
                }
            }
        }
        None
    }
}

/// 3-regularity of a line triad of a GQ of order (s, t): the line perp and
/// double perp both have t + 1 elements. Computed via the dual geometry but
/// measured against the primal t.
pub fn three_regular_lines(geom: &PointLineGeometry, triad: [usize; 3]) -> Result<bool, GqError> {
    let (_, t) = geom.order().ok_or_else(|| GqError::Precondition("verify_gq first".into()))?;
    let dual = geom.dualize();
    let rec = dual.triad_centers(triad)?;
    Ok(rec.centers.len() == t + 1 && rec.span.len() == t + 1)
}

/// Property (G) at the line pair {u, v} of a GQ of order (t^2, t): every
/// triad of lines {v, w, z} inside u^perp is 3-regular. Evaluated on the
/// dual geometry.
pub fn property_g_at_line_pair(geom: &PointLineGeometry, u: usize, v: usize) -> Result<bool, GqError> {
    let (s, t) = geom.order().ok_or_else(|| GqError::Precondition("verify_gq first".into()))?;
    if s != t * t {
        return Err(GqError::Precondition(format!("Property (G) needs order (t^2,t), got ({s},{t})")));
    }
    let shared = geom.points_on_line(u).iter().any(|&p| geom.incident(p as usize, v));
    if u == v || !shared {
        return Err(GqError::Precondition("need distinct concurrent lines".into()));
    }
    let dual = geom.dualize();
    // In the dual: u, v are collinear points; scan w, z in u^perp with
    // {v,w,z} pairwise noncollinear.
    let up: Vec<usize> = dual.perp_point(u).ones().filter(|&w| w != u).collect();
    for (i, &w) in up.iter().enumerate() {
        if w == v || dual.collinear(v, w) {
            continue;
        }
        for &z in &up[i + 1..] {
            if z == v || dual.collinear(v, z) || dual.collinear(w, z) {
                continue;
            }
            let rec = dual.triad_centers([v, w, z])?;
            if rec.centers.len() != t + 1 || rec.span.len() != t + 1 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Property (G) at the flag (x, l): all pairs {l, m} on x have (G).
pub fn property_g_at_flag(geom: &PointLineGeometry, x: usize, l: usize) -> Result<bool, GqError> {
    if !geom.incident(x, l) {
        return Err(GqError::Precondition("flag is not incident".into()));
    }
    for &m in geom.lines_on_point(x) {
        if m as usize != l && !property_g_at_line_pair(geom, l, m as usize)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Property (G) at the point x: all line pairs on x have (G).
pub fn property_g_at_point(geom: &PointLineGeometry, x: usize) -> Result<bool, GqError> {
    let lines = geom.lines_on_point(x);
    for (i, &u) in lines.iter().enumerate() {
        for &v in &lines[i + 1..] {
            if !property_g_at_line_pair(geom, u as usize, v as usize)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// (AR1) with respect to the base point x: no line triad {u, v, w} with
/// u on x and some center on x has more than one center off x.
pub fn ar1_check(geom: &PointLineGeometry, x: usize) -> Result<bool, GqError> {
    if geom.order().is_none() {
        return Err(GqError::Precondition("verify_gq first".into()));
    }
    let dual = geom.dualize();
    // Dual view: lines of geom are points of dual; lines through x form a
    // clique. For u on x and v, w making a pairwise-noncollinear triple
    // with a center on x, count centers off x.
    let on_x: Vec<usize> = geom.lines_on_point(x).iter().map(|&l| l as usize).collect();
    let off_mask: Vec<bool> = (0..geom.n_lines()).map(|l| !geom.incident(x, l)).collect();
    for &u in &on_x {
        let all: Vec<usize> = (0..dual.n_points()).collect();
        for (i, &v) in all.iter().enumerate() {
            if v == u || dual.collinear(u, v) {
                continue;
            }
            for &w in &all[i + 1..] {
                if w == u || dual.collinear(u, w) || dual.collinear(v, w) {
                    continue;
                }
                let centers = dual.perp_of_set(&[u, v, w]);
                let has_center_on_x = centers.iter().any(|&c| !off_mask[c as usize]);
                if !has_center_on_x {
                    continue;
                }
                let off = centers.iter().filter(|&&c| off_mask[c as usize]).count();
                if off > 1 {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// (AR1) restricted to the concurrent pair (x-line X, x-line Y): triads
/// {X, V, W} with center Y must not have two centers off the common point.
/// Used as the precondition of the derived affine plane.
pub fn ar1_check_for_pair(geom: &PointLineGeometry, x_line: usize, y_line: usize) -> Result<bool, GqError> {
    if geom.order().is_none() {
        return Err(GqError::Precondition("verify_gq first".into()));
    }
    let dual = geom.dualize();
    if !dual.collinear(x_line, y_line) || x_line == y_line {
        return Err(GqError::Precondition("lines must be distinct and concurrent".into()));
    }
    // The common point of X and Y in the primal is "x"; centers off x are
    // lines not through it.
    let x = geom
        .points_on_line(x_line)
        .iter()
        .find(|&&p| geom.incident(p as usize, y_line))
        .copied()
        .unwrap() as usize;
    let off_mask: Vec<bool> = (0..geom.n_lines()).map(|l| !geom.incident(x, l)).collect();
    for v in 0..dual.n_points() {
        if v == x_line || dual.collinear(x_line, v) {
            continue;
        }
        for w in (v + 1)..dual.n_points() {
            if w == x_line || dual.collinear(x_line, w) || dual.collinear(v, w) {
                continue;
            }
            let centers = dual.perp_of_set(&[x_line, v, w]);
            if !centers.contains(&(y_line as u32)) {
                continue;
            }
            let off = centers.iter().filter(|&&c| off_mask[c as usize]).count();
            if off > 1 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The (s+1) x (s+1) grid: a thin geometry of order (s, 1).
    pub fn grid(n: usize) -> PointLineGeometry {
        let mut lines = Vec::new();
        for r in 0..n {
            lines.push((0..n).map(|c| (r * n + c) as u32).collect());
        }
        for c in 0..n {
            lines.push((0..n).map(|r| (r * n + c) as u32).collect());
        }
        PointLineGeometry::from_lines(n * n, lines)
    }

    #[test]
    fn grid_fails_thickness() {
        let mut g = grid(3);
        match g.verify_gq() {
            Err(GqError::NoPentagon) => {}
            other => panic!("expected NoPentagon, got {other:?}"),
        }
    }

    #[test]
    fn digon_detected() {
        let mut g = PointLineGeometry::from_lines(4, vec![vec![0, 1, 2], vec![0, 1, 3]]);
        assert!(matches!(g.verify_gq(), Err(GqError::Digon(..)) | Err(GqError::PointDegree(..))));
    }

    #[test]
    fn dual_of_dual_is_original() {
        let g = grid(3);
        let dd = g.dualize().dualize();
        assert_eq!(dd.n_points(), g.n_points());
        assert_eq!(dd.n_lines(), g.n_lines());
        for l in 0..g.n_lines() {
            assert_eq!(dd.points_on_line(l), g.points_on_line(l));
        }
    }

    #[test]
    fn span_of_collinear_pair_is_their_line_in_grid() {
        let g = grid(3);
        // Points 0 and 1 lie on row 0: {0,1}^perpperp should be that row.
        let span = g.span_pair(0, 1);
        assert_eq!(span, vec![0, 1, 2]);
    }
}
