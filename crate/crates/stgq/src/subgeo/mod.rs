//! Substructures of quadrangles: the dual net at a regular point and its
//! plane completion, the affine plane attached to an (AR1) line pair,
//! substructure classification, subGQ detection and intersection shapes,
//! the subGQ plane, the twisting construction, the Frattini geometry with
//! F-factor typing, and partial congruence partitions.

mod frattini;
mod pcp;
mod subgq;
mod twist;

pub use frattini::{f_factor_type, frattini_geometry, FFactorType, FrattiniGeometryReport};
pub use pcp::{factor_analysis, pcp_verify, FactorAnalysis, FactorClass, PcpReport, PcpSpec};
pub use subgq::{
    automorphisms_with_constraints, find_subgqs, subgq_intersection_classify, subgq_plane, IntersectionShape,
    SubGq,
};
pub use twist::{twist, TwistDecomposition, TwistError};

use thiserror::Error;

use crate::gq::{ar1_check_for_pair, GqError, PointLineGeometry};

#[derive(Debug, Error)]
pub enum SubgeoError {
    #[error("point {0} is not regular")]
    NotRegular(usize),
    #[error("lines {0} and {1} are not concurrent")]
    NotConcurrent(usize, usize),
    #[error("(AR1) fails for the line pair ({0}, {1})")]
    Ar1Fails(usize, usize),
    #[error("not a net: {0}")]
    NotANet(String),
    #[error("not an affine plane: {0}")]
    NotAffinePlane(String),
    #[error("not a projective plane: {0}")]
    NotProjectivePlane(String),
    #[error("substructure conditions violated: {0}")]
    SubstructureConditions(String),
    #[error("{0}")]
    Precondition(String),
    #[error(transparent)]
    Gq(#[from] GqError),
    #[error(transparent)]
    Autm(#[from] crate::autm::AutmError),
    #[error(transparent)]
    Group(#[from] crate::grp::GroupError),
}

/// The dual net at a regular point: net points are the other points of
/// x^perp, net lines the spans of its noncollinear pairs.
pub struct DualNet {
    pub base_point: usize,
    pub net: PointLineGeometry,
    /// net point index -> geometry point index.
    pub point_of: Vec<u32>,
}

pub fn dual_net(geom: &PointLineGeometry, x: usize) -> Result<DualNet, SubgeoError> {
    if geom.order().is_none() {
        return Err(SubgeoError::Precondition("verify_gq first".into()));
    }
    if !geom.is_regular_point(x) {
        return Err(SubgeoError::NotRegular(x));
    }
    let point_of: Vec<u32> = geom.perp_point(x).ones().filter(|&p| p != x).map(|p| p as u32).collect();
    let index_of: std::collections::HashMap<u32, u32> =
        point_of.iter().enumerate().map(|(i, &p)| (p, i as u32)).collect();
    let mut lines: std::collections::BTreeSet<Vec<u32>> = Default::default();
    for (i, &q) in point_of.iter().enumerate() {
        for &r in &point_of[i + 1..] {
            if geom.collinear(q as usize, r as usize) {
                continue;
            }
            let span = geom.span_pair(q as usize, r as usize);
            let net_line: Vec<u32> = span
                .iter()
                .filter_map(|p| index_of.get(p).copied())
                .collect();
            lines.insert(net_line);
        }
    }
    let net = PointLineGeometry::from_lines(point_of.len(), lines.into_iter().collect());
    Ok(DualNet { base_point: x, net, point_of })
}

/// Net axioms for the dual structure: constant line size (the net order),
/// constant point degree (the degree), pairwise line meets at most one,
/// and disjointness classes that partition the points. Returns
/// (order, degree) of the net N = dual of the input.
pub fn verify_net_dual(dualnet: &PointLineGeometry) -> Result<(usize, usize), SubgeoError> {
    // The dual net has: lines of size degree... verify on the transpose.
    let net = dualnet.dualize();
    verify_net(&net)
}

/// Net axioms on a direct net presentation.
pub fn verify_net(net: &PointLineGeometry) -> Result<(usize, usize), SubgeoError> {
    if net.n_points() == 0 || net.n_lines() == 0 {
        return Err(SubgeoError::NotANet("empty".into()));
    }
    let order = net.points_on_line(0).len();
    for l in 0..net.n_lines() {
        if net.points_on_line(l).len() != order {
            return Err(SubgeoError::NotANet(format!("line {l} has {} points, expected {order}", net.points_on_line(l).len())));
        }
    }
    let degree = net.lines_on_point(0).len();
    for p in 0..net.n_points() {
        if net.lines_on_point(p).len() != degree {
            return Err(SubgeoError::NotANet(format!("point {p} on {} lines, expected {degree}", net.lines_on_point(p).len())));
        }
    }
    if net.n_points() != order * order {
        return Err(SubgeoError::NotANet(format!("{} points, expected order^2 = {}", net.n_points(), order * order)));
    }
    // two lines meet in at most one point; parallel classes partition
    let meet = |a: usize, b: usize| -> usize {
        net.points_on_line(a).iter().filter(|p| net.points_on_line(b).binary_search(p).is_ok()).count()
    };
    for a in 0..net.n_lines() {
        for b in (a + 1)..net.n_lines() {
            if meet(a, b) > 1 {
                return Err(SubgeoError::NotANet(format!("lines {a}, {b} share two points")));
            }
        }
    }
    // parallelism = disjointness; classes must partition the point set
    let mut class = vec![usize::MAX; net.n_lines()];
    let mut n_classes = 0;
    for l in 0..net.n_lines() {
        if class[l] != usize::MAX {
            continue;
        }
        let c = n_classes;
        n_classes += 1;
        class[l] = c;
        for m in 0..net.n_lines() {
            if m != l && meet(l, m) == 0 {
                if class[m] == usize::MAX {
                    class[m] = c;
                } else if class[m] != c {
                    return Err(SubgeoError::NotANet("parallelism is not transitive".into()));
                }
            }
        }
    }
    for c in 0..n_classes {
        let covered: usize = (0..net.n_lines()).filter(|&l| class[l] == c).map(|l| net.points_on_line(l).len()).sum();
        if covered != net.n_points() {
            return Err(SubgeoError::NotANet(format!("parallel class {c} does not partition the points")));
        }
    }
    if n_classes != degree {
        return Err(SubgeoError::NotANet(format!("{n_classes} parallel classes for degree {degree}")));
    }
    Ok((order, degree))
}

/// Affine plane axioms; returns the order.
pub fn verify_affine_plane(plane: &PointLineGeometry) -> Result<usize, SubgeoError> {
    let (order, degree) = verify_net(plane).map_err(|e| SubgeoError::NotAffinePlane(e.to_string()))?;
    if degree != order + 1 {
        return Err(SubgeoError::NotAffinePlane(format!(
            "degree {degree} != order + 1 = {}",
            order + 1
        )));
    }
    // two distinct points joined by exactly one line
    for p in 0..plane.n_points() {
        for q in (p + 1)..plane.n_points() {
            let joins = plane
                .lines_on_point(p)
                .iter()
                .filter(|&&l| plane.incident(q, l as usize))
                .count();
            if joins != 1 {
                return Err(SubgeoError::NotAffinePlane(format!("points {p}, {q} on {joins} common lines")));
            }
        }
    }
    if order < 2 {
        return Err(SubgeoError::NotAffinePlane("degenerate order".into()));
    }
    Ok(order)
}

/// Projective plane axioms; returns the order.
pub fn verify_projective_plane(plane: &PointLineGeometry) -> Result<usize, SubgeoError> {
    if plane.n_points() == 0 {
        return Err(SubgeoError::NotProjectivePlane("empty".into()));
    }
    let k = plane.points_on_line(0).len();
    let n = k.checked_sub(1).filter(|&n| n >= 2).ok_or_else(|| SubgeoError::NotProjectivePlane("thin lines".into()))?;
    if plane.n_points() != n * n + n + 1 || plane.n_lines() != n * n + n + 1 {
        return Err(SubgeoError::NotProjectivePlane(format!(
            "{} points / {} lines, expected {}",
            plane.n_points(),
            plane.n_lines(),
            n * n + n + 1
        )));
    }
    for l in 0..plane.n_lines() {
        if plane.points_on_line(l).len() != k {
            return Err(SubgeoError::NotProjectivePlane("line sizes differ".into()));
        }
    }
    for p in 0..plane.n_points() {
        for q in (p + 1)..plane.n_points() {
            let joins = plane
                .lines_on_point(p)
                .iter()
                .filter(|&&l| plane.incident(q, l as usize))
                .count();
            if joins != 1 {
                return Err(SubgeoError::NotProjectivePlane(format!("points {p}, {q} on {joins} common lines")));
            }
        }
    }
    for a in 0..plane.n_lines() {
        for b in (a + 1)..plane.n_lines() {
            let meets = plane
                .points_on_line(a)
                .iter()
                .filter(|p| plane.points_on_line(b).binary_search(p).is_ok())
                .count();
            if meets != 1 {
                return Err(SubgeoError::NotProjectivePlane(format!("lines {a}, {b} meet {meets} times")));
            }
        }
    }
    Ok(n)
}

/// For s = t: the completion with point set x^perp and span lines, which
/// must verify as a projective plane of order s.
pub fn plane_completion(geom: &PointLineGeometry, x: usize) -> Result<PointLineGeometry, SubgeoError> {
    let (s, t) = geom.order().ok_or_else(|| SubgeoError::Precondition("verify_gq first".into()))?;
    if s != t {
        return Err(SubgeoError::Precondition(format!("plane completion needs s = t, got ({s},{t})")));
    }
    if !geom.is_regular_point(x) {
        return Err(SubgeoError::NotRegular(x));
    }
    let pts: Vec<u32> = geom.perp_point(x).ones().map(|p| p as u32).collect();
    let index_of: std::collections::HashMap<u32, u32> =
        pts.iter().enumerate().map(|(i, &p)| (p, i as u32)).collect();
    let mut lines: std::collections::BTreeSet<Vec<u32>> = Default::default();
    for (i, &q) in pts.iter().enumerate() {
        for &r in &pts[i + 1..] {
            let span: Vec<u32> = if geom.collinear(q as usize, r as usize) {
                let l = geom.line_through(q as usize, r as usize).expect("collinear");
                geom.points_on_line(l).to_vec()
            } else {
                geom.span_pair(q as usize, r as usize)
            };
            let line: Vec<u32> = span.iter().filter_map(|p| index_of.get(p).copied()).collect();
            lines.insert(line);
        }
    }
    let plane = PointLineGeometry::from_lines(pts.len(), lines.into_iter().collect());
    verify_projective_plane(&plane)?;
    Ok(plane)
}

/// The affine plane Pi(X, Y) carried by an (AR1) pair of concurrent lines:
/// points are the lines meeting X away from z = X n Y; lines are the sets
/// {Z,X}^perp minus Y for Z in Y^perp off z, plus one line per point of
/// X minus z.
pub fn comblem_plane(
    geom: &PointLineGeometry,
    x_line: usize,
    y_line: usize,
) -> Result<PointLineGeometry, SubgeoError> {
    if geom.order().is_none() {
        return Err(SubgeoError::Precondition("verify_gq first".into()));
    }
    let dual = geom.dualize();
    if x_line == y_line || !dual.collinear(x_line, y_line) {
        return Err(SubgeoError::NotConcurrent(x_line, y_line));
    }
    if !ar1_check_for_pair(geom, x_line, y_line)? {
        return Err(SubgeoError::Ar1Fails(x_line, y_line));
    }
    let z = geom
        .points_on_line(x_line)
        .iter()
        .find(|&&p| geom.incident(p as usize, y_line))
        .copied()
        .unwrap() as usize;

    // plane points: lines concurrent with X, not through z (so X itself
    // and Y are excluded).
    let plane_points: Vec<u32> = dual
        .perp_point(x_line)
        .ones()
        .filter(|&l| l != x_line && !geom.incident(z, l))
        .map(|l| l as u32)
        .collect();
    let index_of: std::collections::HashMap<u32, u32> =
        plane_points.iter().enumerate().map(|(i, &l)| (l, i as u32)).collect();

    let mut lines: std::collections::BTreeSet<Vec<u32>> = Default::default();
    // type 1: Z concurrent with Y, not through z
    for zl in dual.perp_point(y_line).ones() {
        if zl == y_line || geom.incident(z, zl) {
            continue;
        }
        let mut pencil: Vec<u32> = Vec::new();
        for w in dual.perp_point(zl).ones() {
            if w != y_line {
                if let Some(&i) = index_of.get(&(w as u32)) {
                    pencil.push(i);
                }
            }
        }
        pencil.sort_unstable();
        lines.insert(pencil);
    }
    // type 2: the points of X besides z
    for &u in geom.points_on_line(x_line) {
        if u as usize == z {
            continue;
        }
        let pencil: Vec<u32> = geom
            .lines_on_point(u as usize)
            .iter()
            .filter_map(|l| index_of.get(l).copied())
            .collect();
        lines.insert(pencil);
    }
    let plane = PointLineGeometry::from_lines(plane_points.len(), lines.into_iter().collect());
    verify_affine_plane(&plane)?;
    Ok(plane)
}

/// The four shapes of a line-closed substructure with full lines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubstructureClass {
    DualGrid,
    Pencil { vertex: usize },
    Coclique,
    SubQuadrangle { s: usize, t_prime: usize },
}

/// Checks the two closure conditions and classifies.
pub fn substructure_classify(
    geom: &PointLineGeometry,
    points: &[usize],
    lines: &[usize],
) -> Result<SubstructureClass, SubgeoError> {
    let (s, _) = geom.order().ok_or_else(|| SubgeoError::Precondition("verify_gq first".into()))?;
    let pset: std::collections::HashSet<usize> = points.iter().copied().collect();
    let lset: std::collections::HashSet<usize> = lines.iter().copied().collect();
    // (i) joining lines of collinear point pairs belong to the structure
    for (i, &p) in points.iter().enumerate() {
        for &q in &points[i + 1..] {
            if p != q && geom.collinear(p, q) {
                let l = geom.line_through(p, q).expect("collinear");
                if !lset.contains(&l) {
                    return Err(SubgeoError::SubstructureConditions(format!(
                        "joining line {l} of points {p}, {q} missing"
                    )));
                }
            }
        }
    }
    // (ii) lines are full
    for &l in lines {
        let inside = geom.points_on_line(l).iter().filter(|&&p| pset.contains(&(p as usize))).count();
        if inside != s + 1 {
            return Err(SubgeoError::SubstructureConditions(format!(
                "line {l} carries {inside} structure points, expected {}",
                s + 1
            )));
        }
    }

    if lines.is_empty() {
        return Ok(SubstructureClass::Coclique);
    }
    // pencil: all lines through one point, points = union of the lines
    let vertex = geom
        .points_on_line(lines[0])
        .iter()
        .map(|&p| p as usize)
        .find(|&v| lines.iter().all(|&l| geom.incident(v, l)));
    if let Some(v) = vertex {
        let mut covered: std::collections::HashSet<usize> = Default::default();
        for &l in lines {
            covered.extend(geom.points_on_line(l).iter().map(|&p| p as usize));
        }
        if covered == pset {
            return Ok(SubstructureClass::Pencil { vertex: v });
        }
    }
    // restricted geometry: dual grid or subGQ
    let reindex: std::collections::HashMap<usize, u32> =
        points.iter().enumerate().map(|(i, &p)| (p, i as u32)).collect();
    let restr: Vec<Vec<u32>> = lines
        .iter()
        .map(|&l| {
            geom.points_on_line(l)
                .iter()
                .filter_map(|&p| reindex.get(&(p as usize)).copied())
                .collect()
        })
        .collect();
    // dual grid: the transpose is a grid
    let mut point_lines = vec![Vec::new(); points.len()];
    for (li, pts) in restr.iter().enumerate() {
        for &p in pts {
            point_lines[p as usize].push(li as u32);
        }
    }
    let mut sub = PointLineGeometry::from_lines(points.len(), restr);
    if let Ok((s2, t2)) = sub.verify_gq() {
        return Ok(SubstructureClass::SubQuadrangle { s: s2, t_prime: t2 });
    }
    // a dual grid is a GQ of order (1, n); detect directly
    let dual_grid_ok = {
        let transposed = PointLineGeometry::from_lines(sub.n_lines(), point_lines);
        let sizes: std::collections::HashSet<usize> =
            (0..transposed.n_lines()).map(|l| transposed.points_on_line(l).len()).collect();
        sizes.len() <= 2 && (0..sub.n_lines()).all(|l| sub.points_on_line(l).len() == 2)
    };
    if dual_grid_ok {
        return Ok(SubstructureClass::DualGrid);
    }
    Err(SubgeoError::SubstructureConditions("structure fits none of the four shapes".into()))
}
