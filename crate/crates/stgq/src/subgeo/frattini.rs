//! The Frattini geometry Gamma(Phi) of an STGQ and the F-factor typing of
//! Phi: either a central subgroup inside every A*, or the carrier of an
//! induced Kantor family of type (sigma, t).

use std::collections::{BTreeMap, BTreeSet};

use crate::gq::PointLineGeometry;
use crate::grp::Subgroup;
use crate::kantor::{verify_kantor_family, CosetGeometry, KantorReport};

use super::SubgeoError;

#[derive(Debug)]
pub enum FFactorType {
    /// (U n Phi)(V n Phi) = Phi fails at the named member pair of F u F*.
    NotAnFFactor { witness: (usize, usize) },
    /// sigma = 1: Phi lies inside the intersection of all A*.
    Central { tau: usize },
    /// sigma > 1: the induced family in Phi, with its axiom report.
    ThickKantor { sigma: usize, tau: usize, report: KantorReport },
}

pub struct FrattiniGeometryReport {
    pub gamma: PointLineGeometry,
    pub dual_partial_linear: bool,
    pub point_degree_constant: bool,
    pub f_factor: FFactorType,
    pub phi: Subgroup,
}

/// Builds Gamma(Phi): points are the Phi-orbits on affine points, lines
/// the Phi-orbits on the points of x^perp minus x, incidence by
/// collinearity of representatives. Also types Phi as an F-factor.
pub fn frattini_geometry(cg: &CosetGeometry) -> Result<FrattiniGeometryReport, SubgeoError> {
    let g = cg.group();
    let phi = g.frattini_subgroup()?;
    let n = g.order();

    // affine orbits: right cosets Phi g under left multiplication
    let mut affine_orbit = vec![u32::MAX; n];
    let mut n_orbits = 0usize;
    for e in 0..n {
        if affine_orbit[e] != u32::MAX {
            continue;
        }
        for &p in phi.members() {
            affine_orbit[g.mul(p as usize, e)] = n_orbits as u32;
        }
        n_orbits += 1;
    }

    // line orbits: Phi-orbits on the coset points k A*_i; as sets of
    // group elements each orbit is Phi k A*_i.
    let k = cg.family.f.len();
    let mut lines: Vec<Vec<u32>> = Vec::new();
    for i in 0..k {
        let mut seen = vec![false; n];
        for e in 0..n {
            if seen[e] {
                continue;
            }
            // the union Phi e A*_i
            let mut elems: BTreeSet<usize> = BTreeSet::new();
            for &p in phi.members() {
                let pe = g.mul(p as usize, e);
                for &a in cg.family.fstar[i].members() {
                    elems.insert(g.mul(pe, a as usize));
                }
            }
            for &m in &elems {
                seen[m] = true;
            }
            // incident point orbits: orbits meeting the element set
            let incident: BTreeSet<u32> = elems.iter().map(|&m| affine_orbit[m]).collect();
            lines.push(incident.into_iter().collect());
        }
    }
    let gamma = PointLineGeometry::from_lines(n_orbits, lines);

    let mut dual_partial_linear = true;
    'dp: for a in 0..gamma.n_lines() {
        for b in (a + 1)..gamma.n_lines() {
            let shared = gamma
                .points_on_line(a)
                .iter()
                .filter(|p| gamma.points_on_line(b).binary_search(p).is_ok())
                .count();
            if shared > 1 {
                dual_partial_linear = false;
                break 'dp;
            }
        }
    }
    let degree0 = gamma.lines_on_point(0).len();
    let point_degree_constant = (0..gamma.n_points()).all(|p| gamma.lines_on_point(p).len() == degree0);

    let f_factor = f_factor_type(cg, &phi)?;
    Ok(FrattiniGeometryReport { gamma, dual_partial_linear, point_degree_constant, f_factor, phi })
}

/// Types a subgroup X against the family per the F-factor dichotomy.
pub fn f_factor_type(cg: &CosetGeometry, x: &Subgroup) -> Result<FFactorType, SubgeoError> {
    let g = cg.group();
    let fam = &cg.family;
    // all members of F u F*, indexed
    let members: Vec<&Subgroup> = fam.f.iter().chain(fam.fstar.iter()).collect();
    for (i, u) in members.iter().enumerate() {
        for (j, v) in members.iter().enumerate() {
            if i == j {
                continue;
            }
            if u.product_set(v).len() != g.order() {
                continue; // condition only ranges over pairs with UV = G
            }
            let ux = u.intersect(x);
            let vx = v.intersect(x);
            if ux.product_set(&vx) != *x.members() {
                return Ok(FFactorType::NotAnFFactor { witness: (i, j) });
            }
        }
    }
    let sigma_set: BTreeSet<usize> = fam.f.iter().map(|a| a.intersect(x).order()).collect();
    let sigmatau_set: BTreeSet<usize> = fam.fstar.iter().map(|a| a.intersect(x).order()).collect();
    if sigma_set.len() != 1 || sigmatau_set.len() != 1 {
        return Ok(FFactorType::NotAnFFactor { witness: (0, 0) });
    }
    let sigma = *sigma_set.first().unwrap();
    let sigmatau = *sigmatau_set.first().unwrap();
    let tau = sigmatau / sigma.max(1);
    if sigma == 1 {
        // Phi must sit inside every A*
        let inside = fam.fstar.iter().all(|astar| x.is_subset_of(astar));
        if inside {
            return Ok(FFactorType::Central { tau: x.order() });
        }
        return Ok(FFactorType::NotAnFFactor { witness: (0, 0) });
    }
    // thick case: the induced family inside X, re-indexed through the
    // abstract group on X.
    let xg = x.as_group()?;
    let index_of: BTreeMap<u32, usize> =
        x.members().iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let reindex = |sub: &Subgroup| -> Subgroup {
        let members: Vec<u32> =
            sub.intersect(x).members().iter().map(|m| index_of[m] as u32).collect();
        xg.subgroup_from_members(members)
    };
    let kf: Vec<Subgroup> = fam.f.iter().map(&reindex).collect();
    let kfstar: Vec<Subgroup> = fam.fstar.iter().map(&reindex).collect();
    let report = verify_kantor_family(&xg, &kf, &kfstar, sigma, tau)
        .map_err(|e| SubgeoError::Precondition(e.to_string()))?;
    Ok(FFactorType::ThickKantor { sigma, tau, report })
}
