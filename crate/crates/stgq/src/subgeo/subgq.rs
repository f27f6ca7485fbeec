//! SubGQ machinery: a constrained automorphism backtracker, the two subGQ
//! detection routes (fixed structures of involutions, and dual-net
//! subplane lifting), the intersection trichotomy of ideal subGQs, and the
//! subGQ plane.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use crate::autm::GeometryAutomorphism;
use crate::gq::PointLineGeometry;

use super::{dual_net, verify_affine_plane, SubgeoError};

/// A verified subquadrangle given by global point and line indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubGq {
    pub points: Vec<u32>,
    pub lines: Vec<u32>,
    pub order: (usize, usize),
}

impl SubGq {
    /// Restricts the ambient geometry to the given point set, keeping the
    /// lines with at least two chosen points; verifies the result.
    pub fn from_points(geom: &PointLineGeometry, points: &[u32]) -> Option<SubGq> {
        let pset: HashSet<u32> = points.iter().copied().collect();
        let mut lines: Vec<u32> = Vec::new();
        let reindex: HashMap<u32, u32> =
            points.iter().enumerate().map(|(i, &p)| (p, i as u32)).collect();
        let mut restricted: Vec<Vec<u32>> = Vec::new();
        for l in 0..geom.n_lines() {
            let inside: Vec<u32> = geom
                .points_on_line(l)
                .iter()
                .filter(|p| pset.contains(p))
                .map(|&p| reindex[&p])
                .collect();
            if inside.len() >= 2 {
                lines.push(l as u32);
                restricted.push(inside);
            }
        }
        let mut sub = PointLineGeometry::from_lines(points.len(), restricted);
        let order = sub.verify_gq().ok()?;
        let mut sorted_points = points.to_vec();
        sorted_points.sort_unstable();
        Some(SubGq { points: sorted_points, lines, order })
    }

    pub fn contains_point(&self, p: usize) -> bool {
        self.points.binary_search(&(p as u32)).is_ok()
    }
}

/// Backtracking enumeration of automorphisms with prescribed point images.
/// Collects at most `limit` solutions, in deterministic candidate order.
pub fn automorphisms_with_constraints(
    geom: &PointLineGeometry,
    forced: &[(usize, usize)],
    limit: usize,
) -> Vec<GeometryAutomorphism> {
    let n = geom.n_points();
    // Joint color refinement with forced points individualized on both
    // sides, so the search space collapses early.
    let mut col: Vec<u64> = vec![0; n];
    let mut col_img: Vec<u64> = vec![0; n];
    for (i, &(p, q)) in forced.iter().enumerate() {
        col[p] = (i + 1) as u64;
        col_img[q] = (i + 1) as u64;
    }
    for _ in 0..n {
        let next = refine(geom, &col);
        let next_img = refine(geom, &col_img);
        if next == col && next_img == col_img {
            break;
        }
        col = next;
        col_img = next_img;
    }

    // BFS order from the forced points.
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    let mut queue = std::collections::VecDeque::new();
    for &(p, _) in forced {
        if !seen[p] {
            seen[p] = true;
            queue.push_back(p);
        }
    }
    if queue.is_empty() && n > 0 {
        seen[0] = true;
        queue.push_back(0);
    }
    while let Some(p) = queue.pop_front() {
        order.push(p);
        for q in geom.perp_point(p).ones() {
            if !seen[q] {
                seen[q] = true;
                queue.push_back(q);
            }
        }
    }
    for p in 0..n {
        if !seen[p] {
            order.push(p);
        }
    }

    let mut map = vec![u32::MAX; n];
    let mut used = vec![false; n];
    for &(p, q) in forced {
        map[p] = q as u32;
        used[q] = true;
    }
    let mut out: Vec<GeometryAutomorphism> = Vec::new();
    search(geom, &col, &col_img, &order, 0, forced, &mut map, &mut used, limit, &mut out);
    out
}

fn refine(geom: &PointLineGeometry, col: &[u64]) -> Vec<u64> {
    let sigs: Vec<(u64, Vec<u64>)> = (0..geom.n_points())
        .map(|p| {
            let mut neigh: Vec<u64> =
                geom.perp_point(p).ones().filter(|&q| q != p).map(|q| col[q]).collect();
            neigh.sort_unstable();
            (col[p], neigh)
        })
        .collect();
    let mut ids: BTreeMap<&(u64, Vec<u64>), u64> = BTreeMap::new();
    for s in &sigs {
        let next = ids.len() as u64;
        ids.entry(s).or_insert(next);
    }
    sigs.iter().map(|s| ids[s]).collect()
}

#[allow(clippy::too_many_arguments)]
fn search(
    geom: &PointLineGeometry,
    col: &[u64],
    col_img: &[u64],
    order: &[usize],
    depth: usize,
    forced: &[(usize, usize)],
    map: &mut Vec<u32>,
    used: &mut Vec<bool>,
    limit: usize,
    out: &mut Vec<GeometryAutomorphism>,
) -> bool {
    if out.len() >= limit {
        return true;
    }
    // skip already-assigned prefix positions
    let mut d = depth;
    while d < order.len() && map[order[d]] != u32::MAX {
        d += 1;
    }
    if d == order.len() {
        if let Some(auto) = complete(geom, map) {
            out.push(auto);
        }
        return out.len() >= limit;
    }
    let p = order[d];
    for cand in 0..geom.n_points() {
        if used[cand] || col_img[cand] != col[p] {
            continue;
        }
        let ok = order[..d].iter().chain(forced.iter().map(|(a, _)| a)).all(|&q| {
            map[q] == u32::MAX || geom.collinear(p, q) == geom.collinear(cand, map[q] as usize)
        });
        if !ok {
            continue;
        }
        map[p] = cand as u32;
        used[cand] = true;
        if search(geom, col, col_img, order, d + 1, forced, map, used, limit, out) {
            return true;
        }
        map[p] = u32::MAX;
        used[cand] = false;
    }
    false
}

/// Derives the line permutation and replays incidence; None when the
/// point map is not an automorphism.
fn complete(geom: &PointLineGeometry, map: &[u32]) -> Option<GeometryAutomorphism> {
    let mut line_perm = vec![u32::MAX; geom.n_lines()];
    for l in 0..geom.n_lines() {
        let pts = geom.points_on_line(l);
        let a = map[pts[0] as usize] as usize;
        let b = map[pts[1] as usize] as usize;
        let img = geom.line_through(a, b)?;
        let mut mapped: Vec<u32> = pts.iter().map(|&p| map[p as usize]).collect();
        mapped.sort_unstable();
        if mapped != geom.points_on_line(img) {
            return None;
        }
        line_perm[l] = img as u32;
    }
    let mut seen = vec![false; geom.n_lines()];
    for &m in &line_perm {
        if seen[m as usize] {
            return None;
        }
        seen[m as usize] = true;
    }
    Some(GeometryAutomorphism { point_perm: map.to_vec(), line_perm })
}

/// Finds subGQs of the target order: fixed structures of involutions found
/// by the constrained search seeded with the apartment, merged with
/// dual-net subplane lifts when the parameters allow them.
pub fn find_subgqs(
    geom: &PointLineGeometry,
    seed_apartment: &[usize],
    target: (usize, usize),
) -> Result<Vec<SubGq>, SubgeoError> {
    let (s, t) = geom.order().ok_or_else(|| SubgeoError::Precondition("verify_gq first".into()))?;
    let mut found: BTreeSet<Vec<u32>> = BTreeSet::new();
    let mut out: Vec<SubGq> = Vec::new();

    // (a) fixed-structure route
    let forced: Vec<(usize, usize)> = seed_apartment.iter().map(|&p| (p, p)).collect();
    let autos = automorphisms_with_constraints(geom, &forced, 4096);
    for a in autos {
        if a.is_identity() || !a.compose(&a).is_identity() {
            continue;
        }
        let fixed = a.fixed_points();
        if let Some(sub) = SubGq::from_points(geom, &fixed) {
            if sub.order == target && found.insert(sub.points.clone()) {
                out.push(sub);
            }
        }
    }

    // (b) net route, available at a regular point of a (t^2, t) geometry
    // when the target is the ideal order (t, t).
    if s == t * t && target == (t, t) {
        for &x in seed_apartment {
            if !geom.is_regular_point(x) {
                continue;
            }
            for sub in net_route_subgqs(geom, x, t)? {
                if found.insert(sub.points.clone()) {
                    out.push(sub);
                }
            }
        }
    }

    out.sort_by(|a, b| a.points.cmp(&b.points));
    Ok(out)
}

/// Lifts affine-plane subnets of the dual net at x to ideal subGQs of
/// order t.
fn net_route_subgqs(geom: &PointLineGeometry, x: usize, t: usize) -> Result<Vec<SubGq>, SubgeoError> {
    let dn = dual_net(geom, x)?;
    // Work in the net N_x = Pi(x)^D: net points are the spans, net lines
    // the points of x^perp minus x.
    let net = dn.net.dualize();
    let n_pts = net.n_points();
    let want = t * t;
    if n_pts < want || binomial(n_pts, want) > 2_000_000 {
        return Ok(Vec::new());
    }
    let mut result = Vec::new();
    let mut combo: Vec<usize> = (0..want).collect();
    loop {
        if let Some(sub) = try_lift(geom, &dn, &net, &combo, t) {
            result.push(sub);
        }
        // next combination
        let mut i = want;
        loop {
            if i == 0 {
                return Ok(result);
            }
            i -= 1;
            if combo[i] != i + n_pts - want {
                combo[i] += 1;
                for j in i + 1..want {
                    combo[j] = combo[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn binomial(n: usize, k: usize) -> usize {
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
        if acc > 10_000_000 {
            return acc;
        }
    }
    acc
}

/// Attempts to read a chosen net-point subset as an affine subplane and
/// reconstruct the subGQ it determines.
fn try_lift(
    geom: &PointLineGeometry,
    dn: &super::DualNet,
    net: &PointLineGeometry,
    combo: &[usize],
    t: usize,
) -> Option<SubGq> {
    // induced structure on the chosen net points
    let reindex: HashMap<usize, u32> = combo.iter().enumerate().map(|(i, &p)| (p, i as u32)).collect();
    let mut lines: BTreeSet<Vec<u32>> = BTreeSet::new();
    let mut degree = vec![0usize; combo.len()];
    for l in 0..net.n_lines() {
        let inside: Vec<u32> = net
            .points_on_line(l)
            .iter()
            .filter_map(|&p| reindex.get(&(p as usize)).copied())
            .collect();
        if inside.len() >= 2 {
            for &p in &inside {
                degree[p as usize] += 1;
            }
            lines.insert(inside);
        }
    }
    // same degree t+1 as the ambient net, with plane line size t
    if degree.iter().any(|&d| d != t + 1) {
        return None;
    }
    let plane = PointLineGeometry::from_lines(combo.len(), lines.into_iter().collect());
    if verify_affine_plane(&plane).ok() != Some(t) {
        return None;
    }
    // perp part of the subGQ: the net lines (= geometry points of
    // x^perp minus x) covering the subplane
    let mut perp_part: BTreeSet<u32> = BTreeSet::new();
    for l in 0..net.n_lines() {
        let covered = net
            .points_on_line(l)
            .iter()
            .filter(|&&p| reindex.contains_key(&(p as usize)))
            .count();
        if covered >= 2 {
            perp_part.insert(dn.point_of[l]);
        }
    }
    let x = dn.base_point;
    let mut points: Vec<u32> = vec![x as u32];
    points.extend(perp_part.iter().copied());
    // affine points: z opposite x with {x,z}^perp inside the chosen part
    for z in 0..geom.n_points() {
        if geom.perp_point(x).contains(z) {
            continue;
        }
        let centers = geom.perp_pair(x, z);
        if centers.iter().all(|c| perp_part.contains(c)) {
            points.push(z as u32);
        }
    }
    let sub = SubGq::from_points(geom, &points)?;
    if sub.order == (t, t) {
        Some(sub)
    } else {
        None
    }
}

/// How two distinct ideal subGQs of order t meet inside a GQ of order
/// (t^2, t).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IntersectionShape {
    /// t^2 + 1 pairwise nonconcurrent shared lines, no shared points.
    LineSpread { lines: Vec<u32> },
    /// a shared line with all subGQ points on it and the lines through
    /// those points.
    PencilOnLine { line: usize, points: Vec<u32> },
    /// a dual grid of order (1, t).
    DualGrid { points: Vec<u32>, lines: Vec<u32> },
}

pub fn subgq_intersection_classify(
    geom: &PointLineGeometry,
    s1: &SubGq,
    s2: &SubGq,
) -> Result<IntersectionShape, SubgeoError> {
    let (s, t) = geom.order().ok_or_else(|| SubgeoError::Precondition("verify_gq first".into()))?;
    if s != t * t || s1.order != (t, t) || s2.order != (t, t) {
        return Err(SubgeoError::Precondition("need ideal subGQs of order t in a (t^2,t) quadrangle".into()));
    }
    if s1 == s2 {
        return Err(SubgeoError::Precondition("subGQs must be distinct".into()));
    }
    let common_points: Vec<u32> = crate::util::sorted_intersect(&s1.points, &s2.points);
    let common_lines: Vec<u32> = crate::util::sorted_intersect(&s1.lines, &s2.lines);

    if common_points.is_empty() {
        let dual = geom.dualize();
        let pairwise_opposite = common_lines.iter().enumerate().all(|(i, &l)| {
            common_lines[i + 1..].iter().all(|&m| !dual.collinear(l as usize, m as usize))
        });
        if common_lines.len() == t * t + 1 && pairwise_opposite {
            return Ok(IntersectionShape::LineSpread { lines: common_lines });
        }
    }
    // pencil case: one line, its subGQ points, and their lines
    for &l in &common_lines {
        let on_l: Vec<u32> = common_points
            .iter()
            .copied()
            .filter(|&p| geom.incident(p as usize, l as usize))
            .collect();
        if on_l.len() == t + 1 && on_l == common_points {
            let expected: BTreeSet<u32> = on_l
                .iter()
                .flat_map(|&p| {
                    s1.lines
                        .iter()
                        .copied()
                        .filter(move |&m| geom.incident(p as usize, m as usize))
                })
                .collect();
            if expected == common_lines.iter().copied().collect() {
                return Ok(IntersectionShape::PencilOnLine { line: l as usize, points: on_l });
            }
        }
    }
    // remaining shape: a dual grid (GQ of order (1, t))
    Ok(IntersectionShape::DualGrid { points: common_points, lines: common_lines })
}

/// The subGQ plane Pi(K): points are the subGQs, lines the point sets
/// S'' n M for lines M on x, incidence by reverse containment. Verified
/// as an affine plane of order t.
pub fn subgq_plane(
    geom: &PointLineGeometry,
    x: usize,
    subgqs: &[SubGq],
) -> Result<PointLineGeometry, SubgeoError> {
    let (_, t) = geom.order().ok_or_else(|| SubgeoError::Precondition("verify_gq first".into()))?;
    if subgqs.len() != t * t {
        return Err(SubgeoError::Precondition(format!(
            "need t^2 = {} subGQs, got {}",
            t * t,
            subgqs.len()
        )));
    }
    let mut lines: BTreeSet<Vec<u32>> = BTreeSet::new();
    for sub in subgqs.iter() {
        for &m in geom.lines_on_point(x) {
            let trace: BTreeSet<u32> = geom
                .points_on_line(m as usize)
                .iter()
                .copied()
                .filter(|&p| sub.contains_point(p as usize))
                .collect();
            let members: Vec<u32> = subgqs
                .iter()
                .enumerate()
                .filter(|(_, other)| trace.iter().all(|&p| other.contains_point(p as usize)))
                .map(|(j, _)| j as u32)
                .collect();
            if members.len() >= 2 {
                lines.insert(members);
            }
        }
    }
    let plane = PointLineGeometry::from_lines(subgqs.len(), lines.into_iter().collect());
    verify_affine_plane(&plane)?;
    Ok(plane)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{build_h3, build_w};

    fn apartment_through(geom: &PointLineGeometry, x: usize) -> Vec<usize> {
        // x -- y on L1, x -- w on L2, z = proj of y onto a line through w
        let ls = geom.lines_on_point(x);
        let l1 = ls[0] as usize;
        let l2 = ls[1] as usize;
        let y = *geom.points_on_line(l1).iter().find(|&&p| p as usize != x).unwrap() as usize;
        let w = *geom.points_on_line(l2).iter().find(|&&p| p as usize != x).unwrap() as usize;
        // a point z collinear with both y and w, not equal to x
        let z = geom
            .perp_pair(y, w)
            .iter()
            .map(|&p| p as usize)
            .find(|&p| p != x)
            .expect("apartment closes");
        vec![x, y, z, w]
    }

    #[test]
    fn h3_q2_has_ideal_w2_subgqs() {
        let m = build_h3(2).unwrap();
        let apt = apartment_through(&m.geometry, 0);
        let subs = find_subgqs(&m.geometry, &apt, (2, 2)).unwrap();
        assert!(!subs.is_empty());
        for sub in &subs {
            assert_eq!(sub.order, (2, 2));
            assert_eq!(sub.points.len(), 15);
            assert_eq!(sub.lines.len(), 15);
            assert!(apt.iter().any(|&p| sub.contains_point(p)));
        }
        assert!(subs.iter().any(|sub| apt.iter().all(|&p| sub.contains_point(p))));
    }

    #[test]
    fn w3_has_no_thick_proper_subgq() {
        let m = build_w(3).unwrap();
        let apt = apartment_through(&m.geometry, 0);
        // s = t: by the subGQ parameter restrictions t' = 1, so nothing
        // thick can appear.
        for target in [(3usize, 1usize), (2, 2), (3, 3)] {
            let subs = find_subgqs(&m.geometry, &apt, target).unwrap();
            let proper_thick: Vec<_> = subs
                .iter()
                .filter(|s| s.order.0 >= 2 && s.order.1 >= 2 && s.points.len() < m.geometry.n_points())
                .collect();
            assert!(proper_thick.is_empty(), "unexpected thick subGQ of order {target:?}");
        }
    }

    #[test]
    fn constrained_search_finds_identity() {
        let m = build_w(3).unwrap();
        let forced: Vec<(usize, usize)> = (0..m.geometry.n_points()).map(|p| (p, p)).collect();
        let autos = automorphisms_with_constraints(&m.geometry, &forced, 10);
        assert_eq!(autos.len(), 1);
        assert!(autos[0].is_identity());
    }
}
