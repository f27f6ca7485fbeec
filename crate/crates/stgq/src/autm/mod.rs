//! Automorphism-level analysis: whorls and symmetries, elation-group
//! verification, the Benson congruence, fixed-structure taxonomies,
//! property (*), centrality, Moufang i-roots, the averaging and transfer
//! validators, semifield-type and structure-theorem reports, and the
//! projection lemma.

mod fixprofile;
mod moufang;
mod star;

pub use fixprofile::{fix_profile, FixProfile, Taxonomy241, Taxonomy811, TaxonomyFix1};
pub use moufang::{m_x_check, moufang_iroot_check, mstgq_check, MoufangVerdict, MstgqReport, RootSpec};
pub use star::{
    ab1_equivalence, averaging_check, centrality_check, projection_lemma_check, property_star_check,
    semifield_type_check, structure_equiv_report, transfer_check, Ab1Report, AveragingReport,
    CentralityVerdict, GroupAction, ProjectionReport, SemifieldVerdict, StarVerdict,
    StructureEquivReport, TransferReport,
};

use thiserror::Error;

use crate::gq::PointLineGeometry;

#[derive(Debug, Error)]
pub enum AutmError {
    #[error("map does not preserve incidence: point {point} on line {line} maps off it")]
    NotIncidencePreserving { point: usize, line: usize },
    #[error("permutation arrays have wrong lengths")]
    BadLengths,
    #[error("action is not closed under composition (elements {0}, {1})")]
    NotClosed(usize, usize),
    #[error("{0}")]
    Precondition(String),
    #[error(transparent)]
    Gq(#[from] crate::gq::GqError),
    #[error(transparent)]
    Group(#[from] crate::grp::GroupError),
}

/// An automorphism stored as explicit point and line permutations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeometryAutomorphism {
    pub point_perm: Vec<u32>,
    pub line_perm: Vec<u32>,
}

impl GeometryAutomorphism {
    pub fn identity(geom: &PointLineGeometry) -> GeometryAutomorphism {
        GeometryAutomorphism {
            point_perm: (0..geom.n_points() as u32).collect(),
            line_perm: (0..geom.n_lines() as u32).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.point_perm.iter().enumerate().all(|(i, &v)| v as usize == i)
            && self.line_perm.iter().enumerate().all(|(i, &v)| v as usize == i)
    }

    pub fn point_image(&self, p: usize) -> usize {
        self.point_perm[p] as usize
    }

    pub fn line_image(&self, l: usize) -> usize {
        self.line_perm[l] as usize
    }

    /// self followed by other.
    pub fn compose(&self, other: &GeometryAutomorphism) -> GeometryAutomorphism {
        GeometryAutomorphism {
            point_perm: self.point_perm.iter().map(|&p| other.point_perm[p as usize]).collect(),
            line_perm: self.line_perm.iter().map(|&l| other.line_perm[l as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> GeometryAutomorphism {
        let mut point_perm = vec![0u32; self.point_perm.len()];
        let mut line_perm = vec![0u32; self.line_perm.len()];
        for (i, &v) in self.point_perm.iter().enumerate() {
            point_perm[v as usize] = i as u32;
        }
        for (i, &v) in self.line_perm.iter().enumerate() {
            line_perm[v as usize] = i as u32;
        }
        GeometryAutomorphism { point_perm, line_perm }
    }

    /// Exhaustive incidence-preservation replay.
    pub fn verify_on(&self, geom: &PointLineGeometry) -> Result<(), AutmError> {
        if self.point_perm.len() != geom.n_points() || self.line_perm.len() != geom.n_lines() {
            return Err(AutmError::BadLengths);
        }
        for l in 0..geom.n_lines() {
            let img = self.line_perm[l] as usize;
            for &p in geom.points_on_line(l) {
                if !geom.incident(self.point_perm[p as usize] as usize, img) {
                    return Err(AutmError::NotIncidencePreserving { point: p as usize, line: l });
                }
            }
        }
        Ok(())
    }

    pub fn fixed_points(&self) -> Vec<u32> {
        self.point_perm
            .iter()
            .enumerate()
            .filter(|&(i, &v)| v as usize == i)
            .map(|(i, _)| i as u32)
            .collect()
    }

    pub fn fixed_lines(&self) -> Vec<u32> {
        self.line_perm
            .iter()
            .enumerate()
            .filter(|&(i, &v)| v as usize == i)
            .map(|(i, _)| i as u32)
            .collect()
    }

    /// Order as a permutation.
    pub fn order(&self) -> usize {
        let mut acc = self.clone();
        let mut n = 1;
        while !acc.is_identity() {
            acc = acc.compose(self);
            n += 1;
        }
        n
    }
}

/// Verifies that an explicit list of automorphisms is closed under
/// composition and contains the identity and all inverses; returns the
/// index-level group operation table.
pub fn action_closure_table(autos: &[GeometryAutomorphism]) -> Result<Vec<Vec<u32>>, AutmError> {
    use std::collections::HashMap;
    let index: HashMap<&[u32], usize> =
        autos.iter().enumerate().map(|(i, a)| (a.point_perm.as_slice(), i)).collect();
    if index.len() != autos.len() {
        return Err(AutmError::Precondition("duplicate automorphisms in action".into()));
    }
    let mut table = vec![vec![0u32; autos.len()]; autos.len()];
    for (i, a) in autos.iter().enumerate() {
        for (j, b) in autos.iter().enumerate() {
            let c = a.compose(b);
            match index.get(c.point_perm.as_slice()) {
                Some(&k) => table[i][j] = k as u32,
                None => return Err(AutmError::NotClosed(i, j)),
            }
        }
    }
    Ok(table)
}

/// Whorls about x within a candidate action: automorphisms fixing every
/// line on x.
pub fn whorls_about(
    geom: &PointLineGeometry,
    x: usize,
    action: &[GeometryAutomorphism],
) -> Result<Vec<usize>, AutmError> {
    action_closure_table(action)?;
    Ok(action
        .iter()
        .enumerate()
        .filter(|(_, a)| {
            geom.lines_on_point(x).iter().all(|&l| a.line_perm[l as usize] == l)
        })
        .map(|(i, _)| i)
        .collect())
}

/// Symmetries with center x within the action: whorls fixing x^perp
/// pointwise.
pub fn symmetries_with_center(
    geom: &PointLineGeometry,
    x: usize,
    action: &[GeometryAutomorphism],
) -> Result<Vec<usize>, AutmError> {
    let whorls = whorls_about(geom, x, action)?;
    Ok(whorls
        .into_iter()
        .filter(|&i| {
            geom.perp_point(x).ones().all(|p| action[i].point_perm[p] as usize == p)
        })
        .collect())
}

/// Elation-group verdict: every element a whorl about x, and the action is
/// sharply transitive on the points off x^perp.
#[derive(Debug, Clone)]
pub struct ElationVerdict {
    pub is_elation_group: bool,
    pub failures: Vec<String>,
}

pub fn verify_elation_group(
    geom: &PointLineGeometry,
    x: usize,
    action: &[GeometryAutomorphism],
) -> Result<ElationVerdict, AutmError> {
    let mut failures = Vec::new();
    let whorls = whorls_about(geom, x, action)?;
    if whorls.len() != action.len() {
        failures.push(format!("{} of {} elements are not whorls about {x}", action.len() - whorls.len(), action.len()));
    }
    let affine: Vec<usize> = (0..geom.n_points()).filter(|&p| !geom.perp_point(x).contains(p)).collect();
    if affine.is_empty() {
        failures.push("no affine points".into());
    } else {
        if action.len() != affine.len() {
            failures.push(format!("action size {} != {} affine points", action.len(), affine.len()));
        }
        let base = affine[0];
        let mut seen = vec![false; geom.n_points()];
        let mut stabilizer_hits = 0usize;
        for a in action {
            let img = a.point_perm[base] as usize;
            if seen[img] {
                stabilizer_hits += 1;
            }
            seen[img] = true;
        }
        let orbit = affine.iter().filter(|&&p| seen[p]).count();
        if orbit != affine.len() {
            failures.push(format!("orbit of point {base} covers {orbit} of {} affine points", affine.len()));
        }
        if stabilizer_hits > 0 {
            failures.push(format!("action is not semiregular on affine points ({stabilizer_hits} collisions)"));
        }
    }
    Ok(ElationVerdict { is_elation_group: failures.is_empty(), failures })
}

/// Benson congruence for one automorphism:
/// (t+1) |fix| + g == st + 1 (mod s+t).
#[derive(Debug, Clone)]
pub struct BensonReport {
    pub fixed_points: usize,
    pub moved_collinear: usize,
    pub lhs: usize,
    pub rhs: usize,
    pub modulus: usize,
    pub passes: bool,
}

pub fn benson_check(geom: &PointLineGeometry, theta: &GeometryAutomorphism) -> Result<BensonReport, AutmError> {
    let (s, t) = geom
        .order()
        .ok_or_else(|| AutmError::Precondition("verify_gq first".into()))?;
    theta.verify_on(geom)?;
    let fixed_points = theta.fixed_points().len();
    let moved_collinear = (0..geom.n_points())
        .filter(|&p| {
            let q = theta.point_perm[p] as usize;
            q != p && geom.collinear(p, q)
        })
        .count();
    let modulus = s + t;
    let lhs = ((t + 1) * fixed_points + moved_collinear) % modulus;
    let rhs = (s * t + 1) % modulus;
    Ok(BensonReport {
        fixed_points,
        moved_collinear,
        lhs: (t + 1) * fixed_points + moved_collinear,
        rhs: s * t + 1,
        modulus,
        passes: lhs == rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> PointLineGeometry {
        // 3x3 grid
        let mut lines = Vec::new();
        for r in 0..3u32 {
            lines.push((0..3).map(|c| r * 3 + c).collect());
        }
        for c in 0..3u32 {
            lines.push((0..3).map(|r| r * 3 + c).collect());
        }
        PointLineGeometry::from_lines(9, lines)
    }

    #[test]
    fn identity_is_automorphism() {
        let g = tiny();
        let id = GeometryAutomorphism::identity(&g);
        assert!(id.verify_on(&g).is_ok());
        assert!(id.is_identity());
        assert_eq!(id.order(), 1);
    }

    #[test]
    fn transpose_of_grid() {
        let g = tiny();
        // point (r,c) -> (c,r); row lines <-> column lines
        let point_perm: Vec<u32> = (0..9).map(|i| {
            let (r, c) = (i / 3, i % 3);
            (c * 3 + r) as u32
        }).collect();
        let line_perm: Vec<u32> = (0..6).map(|l| ((l + 3) % 6) as u32).collect();
        let a = GeometryAutomorphism { point_perm, line_perm };
        assert!(a.verify_on(&g).is_ok());
        assert_eq!(a.order(), 2);
        assert_eq!(a.fixed_points(), vec![0, 4, 8]);
    }

    #[test]
    fn bad_map_rejected() {
        let g = tiny();
        let mut a = GeometryAutomorphism::identity(&g);
        a.point_perm.swap(0, 5);
        assert!(a.verify_on(&g).is_err());
    }
}
