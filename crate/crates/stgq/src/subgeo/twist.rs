//! Twisting: from an elation group H of a GQ of order (q^2, q), q even,
//! and an involution fixing an ideal subGQ pointwise, build the second
//! elation group H^- = H_1 u theta [H \ H_1] and certify it.

use thiserror::Error;

use crate::autm::{verify_elation_group, GeometryAutomorphism, GroupAction};
use crate::gq::PointLineGeometry;
use crate::grp::{all_subgroups, group_isomorphic, IsoVerdict};

use super::subgq::SubGq;
use super::SubgeoError;

#[derive(Debug, Error)]
pub enum TwistError {
    #[error("geometry must have order (q^2, q) with q even, got {0:?}")]
    BadOrder((usize, usize)),
    #[error("theta must be a nontrivial involution")]
    NotInvolution,
    #[error("theta does not fix a thick subGQ of order (s', q) pointwise")]
    NoFixedSubGq,
    #[error("H is abelian; the Sylow argument needs a nonabelian elation group")]
    AbelianH,
    #[error("second hypothesis fails: |H(x,L,y)| = {found} != q^2 at line {line}, point {point}")]
    RootGroupSize { line: usize, point: usize, found: usize },
    #[error("second hypothesis fails: H^2 is not central")]
    SquaresNotCentral,
    #[error("S_2 = H u theta H is not closed under composition")]
    SylowNotClosed,
    #[error("no index-2 subgroup containing the fixed-subGQ involutions besides H")]
    NoSecondCaseSubgroup,
    #[error("twisted set is not a group")]
    TwistNotAGroup,
    #[error("twisted group is not an elation group: {0:?}")]
    NotElation(Vec<String>),
    #[error("{0}")]
    Other(String),
}

/// The four pieces of the Sylow 2-group and the twisted elation group.
pub struct TwistDecomposition {
    pub theta: GeometryAutomorphism,
    pub fixed_subgq: SubGq,
    /// S_2 = H u theta H as one action list (H first).
    pub sylow: GroupAction,
    /// indices into `sylow` of the involutions fixing ideal subGQs
    /// pointwise.
    pub subgq_involutions: Vec<usize>,
    /// their fixed subGQs, matching `subgq_involutions`.
    pub fixed_subgqs: Vec<SubGq>,
    pub involutions_conjugate: bool,
    /// indices (into the original H) of H_1 = H'' n H.
    pub h1: Vec<usize>,
    pub h4: Vec<usize>,
    pub hminus: GroupAction,
    pub hminus_is_elation: bool,
    pub h_vs_hminus: IsoVerdict,
}

pub fn twist(
    geom: &PointLineGeometry,
    x: usize,
    h_action: &GroupAction,
    theta: &GeometryAutomorphism,
) -> Result<TwistDecomposition, SubgeoError> {
    let (s, t) = geom
        .order()
        .ok_or_else(|| SubgeoError::Precondition("verify_gq first".into()))?;
    let q = t;
    if s != q * q || q % 2 != 0 {
        return Err(TwistError::BadOrder((s, t)).into());
    }
    if theta.is_identity() || !theta.compose(theta).is_identity() {
        return Err(TwistError::NotInvolution.into());
    }
    theta.verify_on(geom)?;
    let fixed_subgq = SubGq::from_points(geom, &theta.fixed_points())
        .filter(|sub| sub.order.1 == q && sub.order.0 > 1)
        .ok_or(TwistError::NoFixedSubGq)?;
    if h_action.group.is_abelian() {
        return Err(TwistError::AbelianH.into());
    }

    // Second hypothesis, part 1: |H(x, L, y)| = q^2 for every line L on x
    // and point y != x on L.
    for &l in geom.lines_on_point(x) {
        for &y in geom.points_on_line(l as usize) {
            if y as usize == x {
                continue;
            }
            let count = h_action
                .autos
                .iter()
                .filter(|a| {
                    geom.lines_on_point(x).iter().all(|&m| a.line_perm[m as usize] == m)
                        && geom.lines_on_point(y as usize).iter().all(|&m| a.line_perm[m as usize] == m)
                        && geom.points_on_line(l as usize).iter().all(|&p| a.point_perm[p as usize] == p)
                })
                .count();
            if count != q * q {
                return Err(TwistError::RootGroupSize { line: l as usize, point: y as usize, found: count }.into());
            }
        }
    }
    // Second hypothesis, part 2: H^2 <= Z(H).
    let hg = &h_action.group;
    let center = hg.center();
    for g in hg.elements() {
        if !center.contains(hg.mul(g, g)) {
            return Err(TwistError::SquaresNotCentral.into());
        }
    }

    // S_2 = H u theta H.
    let n = h_action.len();
    let mut sylow_autos: Vec<GeometryAutomorphism> = h_action.autos.clone();
    for a in &h_action.autos {
        sylow_autos.push(theta.compose(a));
    }
    let sylow = GroupAction::from_automorphisms(sylow_autos).map_err(|_| TwistError::SylowNotClosed)?;

    // The involutions in S_2 fixing ideal subGQs pointwise.
    let mut subgq_involutions: Vec<usize> = Vec::new();
    let mut fixed_subgqs: Vec<SubGq> = Vec::new();
    for (i, a) in sylow.autos.iter().enumerate() {
        if a.is_identity() || !a.compose(a).is_identity() {
            continue;
        }
        if let Some(sub) = SubGq::from_points(geom, &a.fixed_points()) {
            if sub.order.1 == q && sub.order.0 > 1 {
                subgq_involutions.push(i);
                fixed_subgqs.push(sub);
            }
        }
    }
    // mutual conjugacy inside S_2: all conjugate to the first one
    let sg = &sylow.group;
    let involutions_conjugate = match subgq_involutions.first() {
        Some(&first) => subgq_involutions
            .iter()
            .all(|&i| sg.elements().any(|g| sg.conjugate(first, g) == i)),
        None => true,
    };

    // Index-2 subgroups of S_2 containing every such involution, besides H.
    // H sits inside the sylow action as the index set of its automorphisms.
    let h_indices: Vec<u32> = (0..sylow.len() as u32)
        .filter(|&i| {
            let a = &sylow.autos[i as usize];
            h_action.autos.iter().any(|b| b == a)
        })
        .collect();
    let subs = all_subgroups(sg)?;
    let candidates: Vec<&crate::grp::Subgroup> = subs
        .iter()
        .filter(|sub| {
            sub.order() == n
                && sub.members() != h_indices.as_slice()
                && subgq_involutions.iter().all(|&i| sub.contains(i))
        })
        .collect();
    let hpp = candidates.first().ok_or(TwistError::NoSecondCaseSubgroup)?;

    // H_1 = H'' n H, H_4 = H \ H_1, H^- = H_1 u theta H_4.
    let h_index_in_sylow: std::collections::HashMap<&[u32], usize> = sylow
        .autos
        .iter()
        .enumerate()
        .map(|(i, a)| (a.point_perm.as_slice(), i))
        .collect();
    let mut h1: Vec<usize> = Vec::new();
    let mut h4: Vec<usize> = Vec::new();
    for (gi, a) in h_action.autos.iter().enumerate() {
        let sylow_idx = h_index_in_sylow[a.point_perm.as_slice()];
        if hpp.contains(sylow_idx) {
            h1.push(gi);
        } else {
            h4.push(gi);
        }
    }
    let mut hminus_autos: Vec<GeometryAutomorphism> =
        h1.iter().map(|&i| h_action.autos[i].clone()).collect();
    for &i in &h4 {
        hminus_autos.push(theta.compose(&h_action.autos[i]));
    }
    let hminus = GroupAction::from_automorphisms(hminus_autos).map_err(|_| TwistError::TwistNotAGroup)?;

    let elation = verify_elation_group(geom, x, &hminus.autos)?;
    if !elation.is_elation_group {
        return Err(TwistError::NotElation(elation.failures).into());
    }
    let h_vs_hminus = group_isomorphic(&h_action.group, &hminus.group)?;

    Ok(TwistDecomposition {
        theta: theta.clone(),
        fixed_subgq,
        sylow,
        subgq_involutions,
        fixed_subgqs,
        involutions_conjugate,
        h1,
        h4,
        hminus,
        hminus_is_elation: elation.is_elation_group,
        h_vs_hminus,
    })
}

impl From<TwistError> for SubgeoError {
    fn from(e: TwistError) -> SubgeoError {
        SubgeoError::Precondition(e.to_string())
    }
}
