//! GQ isomorphism: invariant prefilter, then backtracking on the
//! collinearity graph with iterated color refinement. For thick GQs the
//! collinearity graph determines the geometry (lines are the maximal
//! cliques), so a collinearity isomorphism induces the line bijection.

use std::collections::BTreeMap;

use super::{GqError, PointLineGeometry};

const ISO_MAX_POINTS: usize = 500;

#[derive(Debug, Clone)]
pub enum GqIsoVerdict {
    Isomorphic { point_map: Vec<u32>, line_map: Vec<u32> },
    NotIsomorphic(String),
}

impl GqIsoVerdict {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, GqIsoVerdict::Isomorphic { .. })
    }
}

pub fn gq_isomorphic(g1: &PointLineGeometry, g2: &PointLineGeometry) -> Result<GqIsoVerdict, GqError> {
    let o1 = g1.order().ok_or_else(|| GqError::Precondition("first geometry unverified".into()))?;
    let o2 = g2.order().ok_or_else(|| GqError::Precondition("second geometry unverified".into()))?;
    if g1.n_points() > ISO_MAX_POINTS || g2.n_points() > ISO_MAX_POINTS {
        return Err(GqError::TooLarge(g1.n_points().max(g2.n_points())));
    }
    if o1 != o2 {
        return Ok(GqIsoVerdict::NotIsomorphic(format!("orders differ: {o1:?} vs {o2:?}")));
    }
    if g1.n_points() != g2.n_points() || g1.n_lines() != g2.n_lines() {
        return Ok(GqIsoVerdict::NotIsomorphic("point/line counts differ".into()));
    }

    let r1 = g1.regular_point_count();
    let r2 = g2.regular_point_count();
    if r1 != r2 {
        return Ok(GqIsoVerdict::NotIsomorphic(format!("regular point counts differ: {r1} vs {r2}")));
    }

    // Joint initial coloring from per-point span-size signatures, then
    // 1-dimensional refinement over collinearity until stable.
    let sig1 = span_signatures(g1);
    let sig2 = span_signatures(g2);
    let (mut col1, mut col2) = joint_colors(&sig1, &sig2);
    loop {
        let h1 = histogram(&col1);
        let h2 = histogram(&col2);
        if h1 != h2 {
            return Ok(GqIsoVerdict::NotIsomorphic("color histograms differ under refinement".into()));
        }
        let r1 = refine_step(g1, &col1);
        let r2 = refine_step(g2, &col2);
        let (n1, n2) = joint_colors(&r1, &r2);
        if n1 == col1 && n2 == col2 {
            break;
        }
        col1 = n1;
        col2 = n2;
    }
    if histogram(&col1) != histogram(&col2) {
        return Ok(GqIsoVerdict::NotIsomorphic("color histograms differ".into()));
    }

    // Backtracking over points in a BFS order.
    let n = g1.n_points();
    let order = bfs_order(g1);
    let mut point_map = vec![u32::MAX; n];
    let mut used = vec![false; n];
    if !assign(g1, g2, &col1, &col2, &order, 0, &mut point_map, &mut used) {
        return Ok(GqIsoVerdict::NotIsomorphic("backtracking search exhausted".into()));
    }

    // Induced line map, replayed exactly.
    let mut line_map = vec![u32::MAX; g1.n_lines()];
    for l in 0..g1.n_lines() {
        let pts = g1.points_on_line(l);
        let a = point_map[pts[0] as usize] as usize;
        let b = point_map[pts[1] as usize] as usize;
        let img = match g2.line_through(a, b) {
            Some(m) => m,
            None => return Ok(GqIsoVerdict::NotIsomorphic("induced line map undefined".into())),
        };
        let mut mapped: Vec<u32> = pts.iter().map(|&p| point_map[p as usize]).collect();
        mapped.sort_unstable();
        if mapped != g2.points_on_line(img) {
            return Ok(GqIsoVerdict::NotIsomorphic("induced line map not incidence-exact".into()));
        }
        line_map[l] = img as u32;
    }
    let mut seen = vec![false; g2.n_lines()];
    for &m in &line_map {
        if seen[m as usize] {
            return Ok(GqIsoVerdict::NotIsomorphic("line map not injective".into()));
        }
        seen[m as usize] = true;
    }
    Ok(GqIsoVerdict::Isomorphic { point_map, line_map })
}

fn span_signatures(g: &PointLineGeometry) -> Vec<Vec<usize>> {
    (0..g.n_points())
        .map(|p| {
            let mut sizes: Vec<usize> = (0..g.n_points())
                .filter(|&q| q != p && !g.collinear(p, q))
                .map(|q| g.span_pair(p, q).len())
                .collect();
            sizes.sort_unstable();
            sizes
        })
        .collect()
}

/// Maps arbitrary per-point signatures of both geometries to shared dense
/// color ids.
fn joint_colors<T: Ord + Clone>(sig1: &[T], sig2: &[T]) -> (Vec<u32>, Vec<u32>) {
    let mut all: Vec<T> = sig1.iter().chain(sig2.iter()).cloned().collect();
    all.sort();
    all.dedup();
    let index: BTreeMap<&T, u32> = all.iter().enumerate().map(|(i, s)| (s, i as u32)).collect();
    (
        sig1.iter().map(|s| index[s]).collect(),
        sig2.iter().map(|s| index[s]).collect(),
    )
}

fn refine_step(g: &PointLineGeometry, colors: &[u32]) -> Vec<(u32, Vec<u32>)> {
    (0..g.n_points())
        .map(|p| {
            let mut neigh: Vec<u32> =
                g.perp_point(p).ones().filter(|&q| q != p).map(|q| colors[q]).collect();
            neigh.sort_unstable();
            (colors[p], neigh)
        })
        .collect()
}

fn histogram(colors: &[u32]) -> BTreeMap<u32, usize> {
    let mut h = BTreeMap::new();
    for &c in colors {
        *h.entry(c).or_insert(0) += 1;
    }
    h
}

fn bfs_order(g: &PointLineGeometry) -> Vec<usize> {
    let n = g.n_points();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(0usize);
    seen[0] = true;
    while let Some(p) = queue.pop_front() {
        order.push(p);
        for q in g.perp_point(p).ones() {
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
    order
}

#[allow(clippy::too_many_arguments)]
fn assign(
    g1: &PointLineGeometry,
    g2: &PointLineGeometry,
    col1: &[u32],
    col2: &[u32],
    order: &[usize],
    depth: usize,
    point_map: &mut Vec<u32>,
    used: &mut Vec<bool>,
) -> bool {
    if depth == order.len() {
        return true;
    }
    let p = order[depth];
    let mapped: Vec<usize> = order[..depth].to_vec();
    for cand in 0..g2.n_points() {
        if used[cand] || col2[cand] != col1[p] {
            continue;
        }
        let consistent = mapped.iter().all(|&q| {
            g1.collinear(p, q) == g2.collinear(cand, point_map[q] as usize)
        });
        if !consistent {
            continue;
        }
        point_map[p] = cand as u32;
        used[cand] = true;
        if assign(g1, g2, col1, col2, order, depth + 1, point_map, used) {
            return true;
        }
        point_map[p] = u32::MAX;
        used[cand] = false;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    /// W(2), the unique GQ of order 2, via the pentagon-free construction:
    /// points are the 15 2-subsets of {0..5}, lines the 15 perfect
    /// matchings triples (partitions of six symbols into three pairs).
    pub fn doily() -> PointLineGeometry {
        let mut pairs = Vec::new();
        for a in 0..6u8 {
            for b in (a + 1)..6 {
                pairs.push((a, b));
            }
        }
        let pair_idx = |a: u8, b: u8| pairs.iter().position(|&p| p == (a.min(b), a.max(b))).unwrap() as u32;
        let mut lines = Vec::new();
        // all partitions of {0..5} into three pairs
        let items: Vec<u8> = (0..6).collect();
        fn partitions(rem: &[u8], cur: &mut Vec<(u8, u8)>, out: &mut Vec<Vec<(u8, u8)>>) {
            if rem.is_empty() {
                out.push(cur.clone());
                return;
            }
            let a = rem[0];
            for i in 1..rem.len() {
                let b = rem[i];
                let rest: Vec<u8> = rem[1..].iter().copied().filter(|&x| x != b).collect();
                cur.push((a, b));
                partitions(&rest, cur, out);
                cur.pop();
            }
        }
        let mut parts = Vec::new();
        partitions(&items, &mut Vec::new(), &mut parts);
        for part in parts {
            lines.push(part.iter().map(|&(a, b)| pair_idx(a, b)).collect());
        }
        PointLineGeometry::from_lines(15, lines)
    }

    #[test]
    fn doily_is_gq_of_order_2() {
        let mut g = doily();
        assert_eq!(g.verify_gq().unwrap(), (2, 2));
        assert_eq!(g.n_lines(), 15);
    }

    #[test]
    fn doily_selfdual_and_self_isomorphic() {
        let mut g = doily();
        g.verify_gq().unwrap();
        let v = gq_isomorphic(&g, &g).unwrap();
        assert!(v.is_isomorphic());
        // W(2) is self-dual.
        let mut d = g.dualize();
        d.verify_gq().unwrap();
        let vd = gq_isomorphic(&g, &d).unwrap();
        assert!(vd.is_isomorphic());
    }

    #[test]
    fn witness_preserves_incidence() {
        let mut g = doily();
        g.verify_gq().unwrap();
        let mut d = g.dualize();
        d.verify_gq().unwrap();
        match gq_isomorphic(&g, &d).unwrap() {
            GqIsoVerdict::Isomorphic { point_map, line_map } => {
                for p in 0..g.n_points() {
                    for l in 0..g.n_lines() {
                        assert_eq!(
                            g.incident(p, l),
                            d.incident(point_map[p] as usize, line_map[l] as usize)
                        );
                    }
                }
            }
            other => panic!("expected isomorphism, got {other:?}"),
        }
    }
}
