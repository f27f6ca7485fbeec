//! Per-automorphism fixed-structure records and the three taxonomies the
//! analysis uses: the general fixed-substructure cases, the whorl cases,
//! and the STGQ elation cases. Overlapping cases are resolved by first
//! match in the theorems' listed order.

use crate::gq::PointLineGeometry;

use super::{AutmError, GeometryAutomorphism};

/// Fixed-substructure cases (i), (i)', (ii), (ii)', (iii), (iii)', (iv).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Taxonomy241 {
    NoLinesCoclique,
    NoPointsDualCoclique,
    StarAtPoint,
    StarAtLine,
    Grid,
    DualGrid,
    SubGq,
    Outside,
}

/// Whorl cases (1), (2), (3); `NotAWhorl` for inputs outside the theorem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Taxonomy811 {
    NoFixedOppositePoint,
    SpanConfiguration,
    SubGqFullT,
    Outside,
    NotAWhorl,
}

/// STGQ elation-element cases: fix = x^perp, fix = {x}, fix inside one
/// line on x.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TaxonomyFix1 {
    PerpOfX,
    OnlyX,
    SubsetOfLineOnX,
    Identity,
    Outside,
}

#[derive(Debug, Clone)]
pub struct FixProfile {
    pub fixed_points: Vec<u32>,
    pub fixed_lines: Vec<u32>,
    /// points mapped to a distinct collinear image.
    pub g_count: usize,
    /// |fix on its line| - 1 in the line-subset case.
    pub alpha: Option<usize>,
    /// fixed affine lines (not through the base point).
    pub k_lines: Vec<u32>,
    pub f_count: usize,
    pub taxonomy_241: Taxonomy241,
    pub taxonomy_811: Taxonomy811,
    pub taxonomy_fix1: TaxonomyFix1,
    /// even exponent from the transfer law, when alpha and f are powers of
    /// p with f > 0 and s > t.
    pub o_exponent: Option<i64>,
}

/// Full profile of theta with respect to the base point x.
pub fn fix_profile(
    geom: &PointLineGeometry,
    theta: &GeometryAutomorphism,
    x: usize,
) -> Result<FixProfile, AutmError> {
    let (s, t) = geom
        .order()
        .ok_or_else(|| AutmError::Precondition("verify_gq first".into()))?;
    theta.verify_on(geom)?;
    let fixed_points = theta.fixed_points();
    let fixed_lines = theta.fixed_lines();
    let g_count = (0..geom.n_points())
        .filter(|&p| {
            let q = theta.point_perm[p] as usize;
            q != p && geom.collinear(p, q)
        })
        .count();
    let k_lines: Vec<u32> = fixed_lines
        .iter()
        .copied()
        .filter(|&l| !geom.incident(x, l as usize))
        .collect();
    let f_count = k_lines.len();

    let taxonomy_fix1 = classify_fix1(geom, theta, x, &fixed_points);
    let alpha = match taxonomy_fix1 {
        TaxonomyFix1::SubsetOfLineOnX => Some(fixed_points.len() - 1),
        _ => None,
    };
    let taxonomy_241 = classify_241(geom, &fixed_points, &fixed_lines);
    let taxonomy_811 = classify_811(geom, theta, x, &fixed_points, s, t);

    let o_exponent = match (alpha, f_count) {
        (Some(a), f) if s > t && f > 0 && a > 0 => transfer_exponent(a, f, s, t),
        _ => None,
    };

    Ok(FixProfile {
        fixed_points,
        fixed_lines,
        g_count,
        alpha,
        k_lines,
        f_count,
        taxonomy_241,
        taxonomy_811,
        taxonomy_fix1,
        o_exponent,
    })
}

/// Solves alpha/f = (s/t)^o for an even integer o, if everything is a
/// power of the same prime.
pub(crate) fn transfer_exponent(alpha: usize, f: usize, s: usize, t: usize) -> Option<i64> {
    let ratio_base = s / t;
    if t * ratio_base != s || ratio_base < 2 {
        return None;
    }
    let (big, small, sign) = if alpha >= f { (alpha, f, 1i64) } else { (f, alpha, -1i64) };
    if big % small != 0 {
        return None;
    }
    let mut quotient = big / small;
    let mut o = 0i64;
    while quotient > 1 {
        if quotient % ratio_base != 0 {
            return None;
        }
        quotient /= ratio_base;
        o += 1;
    }
    Some(sign * o)
}

fn classify_fix1(
    geom: &PointLineGeometry,
    theta: &GeometryAutomorphism,
    x: usize,
    fixed_points: &[u32],
) -> TaxonomyFix1 {
    if theta.is_identity() {
        return TaxonomyFix1::Identity;
    }
    if !fixed_points.contains(&(x as u32)) {
        return TaxonomyFix1::Outside;
    }
    let perp: Vec<u32> = geom.perp_point(x).ones().map(|p| p as u32).collect();
    if fixed_points == perp.as_slice() {
        return TaxonomyFix1::PerpOfX;
    }
    if fixed_points == [x as u32] {
        return TaxonomyFix1::OnlyX;
    }
    for &l in geom.lines_on_point(x) {
        let pts = geom.points_on_line(l as usize);
        if fixed_points.iter().all(|p| pts.binary_search(p).is_ok()) {
            return TaxonomyFix1::SubsetOfLineOnX;
        }
    }
    TaxonomyFix1::Outside
}

fn classify_241(geom: &PointLineGeometry, fixed_points: &[u32], fixed_lines: &[u32]) -> Taxonomy241 {
    let pairwise_noncollinear = |pts: &[u32]| {
        pts.iter().enumerate().all(|(i, &p)| {
            pts[i + 1..].iter().all(|&q| !geom.collinear(p as usize, q as usize))
        })
    };
    if fixed_lines.is_empty() && pairwise_noncollinear(fixed_points) {
        return Taxonomy241::NoLinesCoclique;
    }
    let dual = geom.dualize();
    let pairwise_nonconcurrent = |lines: &[u32]| {
        lines.iter().enumerate().all(|(i, &l)| {
            lines[i + 1..].iter().all(|&m| !dual.collinear(l as usize, m as usize))
        })
    };
    if fixed_points.is_empty() && pairwise_nonconcurrent(fixed_lines) {
        return Taxonomy241::NoPointsDualCoclique;
    }
    // (ii): a fixed point collinear with every fixed point and on every
    // fixed line.
    let star_center = fixed_points.iter().find(|&&c| {
        fixed_points.iter().all(|&p| geom.collinear(c as usize, p as usize))
            && fixed_lines.iter().all(|&l| geom.incident(c as usize, l as usize))
    });
    if star_center.is_some() {
        return Taxonomy241::StarAtPoint;
    }
    let star_axis = fixed_lines.iter().find(|&&a| {
        fixed_lines.iter().all(|&l| dual.collinear(a as usize, l as usize))
            && fixed_points.iter().all(|&p| geom.incident(p as usize, a as usize))
    });
    if star_axis.is_some() {
        return Taxonomy241::StarAtLine;
    }
    match restricted_structure_kind(geom, fixed_points, fixed_lines) {
        StructureKind::Grid => Taxonomy241::Grid,
        StructureKind::DualGrid => Taxonomy241::DualGrid,
        StructureKind::SubGq { .. } => Taxonomy241::SubGq,
        StructureKind::Other => Taxonomy241::Outside,
    }
}

fn classify_811(
    geom: &PointLineGeometry,
    theta: &GeometryAutomorphism,
    x: usize,
    fixed_points: &[u32],
    _s: usize,
    t: usize,
) -> Taxonomy811 {
    if theta.is_identity()
        || !geom.lines_on_point(x).iter().all(|&l| theta.line_perm[l as usize] == l)
    {
        return Taxonomy811::NotAWhorl;
    }
    let xperp = geom.perp_point(x);
    let fixed_opposite: Vec<usize> = fixed_points
        .iter()
        .map(|&p| p as usize)
        .filter(|&p| !xperp.contains(p))
        .collect();
    if fixed_opposite.is_empty() {
        return Taxonomy811::NoFixedOppositePoint;
    }
    // (2): V u {x,y} <= P_theta <= V u U with V = {x,y}^perp, U = V^perp,
    // and the fixed lines join V to U n P_theta.
    let y = fixed_opposite[0];
    let v = geom.perp_pair(x, y);
    let u = geom.perp_of_set(&v.iter().map(|&w| w as usize).collect::<Vec<_>>());
    let fixed_set: std::collections::HashSet<u32> = fixed_points.iter().copied().collect();
    let v_set: std::collections::HashSet<u32> = v.iter().copied().collect();
    let u_set: std::collections::HashSet<u32> = u.iter().copied().collect();
    let lower_ok = v.iter().all(|w| fixed_set.contains(w));
    let upper_ok = fixed_points.iter().all(|p| v_set.contains(p) || u_set.contains(p));
    if lower_ok && upper_ok && fixed_set.contains(&(x as u32)) {
        let lines_ok = theta.fixed_lines().iter().all(|&l| {
            let pts = geom.points_on_line(l as usize);
            let has_v = pts.iter().any(|p| v_set.contains(p));
            let has_u_fixed = pts.iter().any(|p| u_set.contains(p) && fixed_set.contains(p));
            has_v && has_u_fixed
        });
        if lines_ok {
            return Taxonomy811::SpanConfiguration;
        }
    }
    // (3): fixed structure a subGQ of order (s', t).
    if let StructureKind::SubGq { t_prime } = restricted_structure_kind(geom, fixed_points, &theta.fixed_lines()) {
        if t_prime == t {
            return Taxonomy811::SubGqFullT;
        }
    }
    Taxonomy811::Outside
}

enum StructureKind {
    Grid,
    DualGrid,
    SubGq { t_prime: usize },
    Other,
}

/// Classifies the substructure induced on the fixed elements, with line
/// point sets restricted to fixed points.
fn restricted_structure_kind(
    geom: &PointLineGeometry,
    fixed_points: &[u32],
    fixed_lines: &[u32],
) -> StructureKind {
    if fixed_points.is_empty() || fixed_lines.is_empty() {
        return StructureKind::Other;
    }
    let reindex: std::collections::HashMap<u32, u32> =
        fixed_points.iter().enumerate().map(|(i, &p)| (p, i as u32)).collect();
    let lines: Vec<Vec<u32>> = fixed_lines
        .iter()
        .map(|&l| {
            geom.points_on_line(l as usize)
                .iter()
                .filter_map(|p| reindex.get(p).copied())
                .collect()
        })
        .collect();
    if is_grid(fixed_points.len(), &lines) {
        return StructureKind::Grid;
    }
    // dual grid: transpose and test
    let mut point_lines = vec![Vec::new(); fixed_points.len()];
    for (li, pts) in lines.iter().enumerate() {
        for &p in pts {
            point_lines[p as usize].push(li as u32);
        }
    }
    if is_grid(lines.len(), &point_lines) {
        return StructureKind::DualGrid;
    }
    let mut sub = PointLineGeometry::from_lines(fixed_points.len(), lines);
    if let Ok((s2, t2)) = sub.verify_gq() {
        if s2 >= 2 && t2 >= 2 {
            return StructureKind::SubGq { t_prime: t2 };
        }
    }
    StructureKind::Other
}

/// A grid: two parallel classes of lines, constant sizes, every point the
/// meet of exactly one line per class, one class's lines pairwise
/// disjoint, and every cross pair meeting once.
fn is_grid(n_points: usize, lines: &[Vec<u32>]) -> bool {
    if lines.len() < 2 || lines.iter().any(|l| l.is_empty()) {
        return false;
    }
    let mut degree = vec![0usize; n_points];
    for pts in lines {
        for &p in pts {
            degree[p as usize] += 1;
        }
    }
    if degree.iter().any(|&d| d != 2) {
        return false;
    }
    // 2-color lines: nonmeeting lines share a class.
    let meets = |a: &Vec<u32>, b: &Vec<u32>| a.iter().any(|p| b.contains(p));
    let mut class = vec![usize::MAX; lines.len()];
    class[0] = 0;
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..lines.len() {
            if class[i] == usize::MAX {
                continue;
            }
            for j in 0..lines.len() {
                if i == j {
                    continue;
                }
                let want = if meets(&lines[i], &lines[j]) { 1 - class[i] } else { class[i] };
                if class[j] == usize::MAX {
                    class[j] = want;
                    changed = true;
                } else if class[j] != want {
                    return false;
                }
            }
        }
    }
    let rows: Vec<usize> = (0..lines.len()).filter(|&i| class[i] == 0).collect();
    let cols: Vec<usize> = (0..lines.len()).filter(|&i| class[i] == 1).collect();
    if rows.is_empty() || cols.is_empty() {
        return false;
    }
    let row_size = lines[rows[0]].len();
    let col_size = lines[cols[0]].len();
    rows.iter().all(|&r| lines[r].len() == row_size)
        && cols.iter().all(|&c| lines[c].len() == col_size)
        && rows.len() == col_size
        && cols.len() == row_size
        && n_points == row_size * col_size
}
