//! Property (*) and its group-theoretic equivalent, centrality, the
//! averaging and transfer validators, semifield-type recognition, the
//! square-order structure equivalences, and the projection lemma.

use crate::gq::PointLineGeometry;
use crate::grp::{maximal_subgroups, prime_power, FiniteGroup, Subgroup};

use super::fixprofile::{transfer_exponent, FixProfile, TaxonomyFix1};
use super::moufang::m_x_check;
use super::{AutmError, GeometryAutomorphism};

/// An action together with its abstract group: group element i acts as
/// autos[i]. Built from an explicit closed list, or assembled directly by
/// the coset-geometry constructor.
pub struct GroupAction {
    pub group: FiniteGroup,
    pub autos: Vec<GeometryAutomorphism>,
}

impl GroupAction {
    /// Closes over composition (the list must already be a group of
    /// permutations; closure failures error out).
    pub fn from_automorphisms(mut autos: Vec<GeometryAutomorphism>) -> Result<GroupAction, AutmError> {
        let id_at = autos
            .iter()
            .position(|a| a.is_identity())
            .ok_or_else(|| AutmError::Precondition("action has no identity".into()))?;
        autos.swap(0, id_at);
        let table = super::action_closure_table(&autos)?;
        let group = FiniteGroup::from_law(autos.len(), move |a, b| table[a][b] as usize)?;
        Ok(GroupAction { group, autos })
    }

    pub fn len(&self) -> usize {
        self.autos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.autos.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct StarVerdict {
    pub holds: bool,
    /// (action element, fixed collinear point) violating (*).
    pub witness: Option<(usize, usize)>,
}

/// Direct scan of property (*): an element fixing y ~ x (y != x) must fix
/// the line xy pointwise.
pub fn property_star_check(
    geom: &PointLineGeometry,
    x: usize,
    action: &[GeometryAutomorphism],
) -> Result<StarVerdict, AutmError> {
    if geom.order().is_none() {
        return Err(AutmError::Precondition("verify_gq first".into()));
    }
    for (i, a) in action.iter().enumerate() {
        for y in geom.perp_point(x).ones() {
            if y == x || a.point_perm[y] as usize != y {
                continue;
            }
            let xy = geom.line_through(x, y).expect("collinear");
            let pointwise = geom.points_on_line(xy).iter().all(|&p| a.point_perm[p as usize] == p);
            if !pointwise {
                return Ok(StarVerdict { holds: false, witness: Some((i, y)) });
            }
        }
    }
    Ok(StarVerdict { holds: true, witness: None })
}

#[derive(Debug, Clone)]
pub struct Ab1Report {
    pub star_holds: bool,
    pub quotient_abelian: bool,
    pub agree: bool,
}

/// Independent evaluation of the two sides of the (*) <=> T abelian
/// equivalence.
pub fn ab1_equivalence(
    geom: &PointLineGeometry,
    x: usize,
    action: &GroupAction,
    s_members: &[u32],
) -> Result<Ab1Report, AutmError> {
    let star_holds = property_star_check(geom, x, &action.autos)?.holds;
    let s = action.group.subgroup_from_members(s_members.to_vec());
    let (t, _) = action.group.quotient(&s)?;
    let quotient_abelian = t.is_abelian();
    Ok(Ab1Report { star_holds, quotient_abelian, agree: star_holds == quotient_abelian })
}

#[derive(Debug, Clone)]
pub struct CentralityVerdict {
    pub central: bool,
    /// (s element, group element) with nontrivial commutator.
    pub witness: Option<(usize, usize)>,
}

/// S <= Z(H)?
pub fn centrality_check(h: &FiniteGroup, s: &Subgroup) -> CentralityVerdict {
    for &a in s.members() {
        for g in h.elements() {
            if h.commutator(a as usize, g) != 0 {
                return CentralityVerdict { central: false, witness: Some((a as usize, g)) };
            }
        }
    }
    CentralityVerdict { central: true, witness: None }
}

#[derive(Debug, Clone)]
pub struct AveragingReport {
    pub applicable: bool,
    pub reason: String,
    pub all_pass: bool,
    /// (element index, fixed affine lines, total fixed lines) failures.
    pub failures: Vec<(usize, usize, usize)>,
    pub checked: usize,
}

/// Every nontrivial element fixing an affine line fixes exactly s of them
/// (t + s + 1 lines in total). Hypotheses: (*) holds and s is odd if s = t.
pub fn averaging_check(
    geom: &PointLineGeometry,
    x: usize,
    action: &[GeometryAutomorphism],
) -> Result<AveragingReport, AutmError> {
    let (s, t) = geom
        .order()
        .ok_or_else(|| AutmError::Precondition("verify_gq first".into()))?;
    if s == t && s % 2 == 0 {
        return Ok(AveragingReport {
            applicable: false,
            reason: "square even order excluded".into(),
            all_pass: false,
            failures: Vec::new(),
            checked: 0,
        });
    }
    let star = property_star_check(geom, x, action)?;
    if !star.holds {
        return Ok(AveragingReport {
            applicable: false,
            reason: "(*) fails".into(),
            all_pass: false,
            failures: Vec::new(),
            checked: 0,
        });
    }
    let mut failures = Vec::new();
    let mut checked = 0usize;
    for (i, a) in action.iter().enumerate() {
        if a.is_identity() {
            continue;
        }
        let fixed_lines = a.fixed_lines();
        let affine = fixed_lines.iter().filter(|&&l| !geom.incident(x, l as usize)).count();
        if affine == 0 {
            continue;
        }
        checked += 1;
        if affine != s || fixed_lines.len() != t + s + 1 {
            failures.push((i, affine, fixed_lines.len()));
        }
    }
    Ok(AveragingReport {
        applicable: true,
        reason: String::new(),
        all_pass: failures.is_empty(),
        failures,
        checked,
    })
}

#[derive(Debug, Clone)]
pub struct TransferReport {
    pub applicable: bool,
    pub reason: String,
    pub f_nonzero: bool,
    pub congruence_ok: bool,
    /// Some((o, o_even)) when alpha and f are powers of the characteristic.
    pub power_law: Option<(i64, bool)>,
}

/// Validates alpha - f = 0 mod (s/t + 1) and, in the p-power case, the
/// even-exponent law alpha/f = (s/t)^o.
pub fn transfer_check(profile: &FixProfile, s: usize, t: usize) -> TransferReport {
    if s <= t || profile.taxonomy_fix1 != TaxonomyFix1::SubsetOfLineOnX {
        return TransferReport {
            applicable: false,
            reason: "needs s > t and fixed points confined to one line on x".into(),
            f_nonzero: false,
            congruence_ok: false,
            power_law: None,
        };
    }
    let alpha = profile.alpha.expect("line-subset case has alpha");
    let f = profile.f_count;
    let modulus = (s / t + 1) as i64;
    let congruence_ok = (alpha as i64 - f as i64).rem_euclid(modulus) == 0;
    let p = prime_power(s * t).map(|(p, _)| p as usize);
    let is_p_pow = |n: usize| -> bool {
        match p {
            None => false,
            Some(p) => {
                let mut m = n;
                while m % p == 0 {
                    m /= p;
                }
                m == 1
            }
        }
    };
    let power_law = if f > 0 && alpha > 0 && is_p_pow(alpha) && is_p_pow(f) {
        transfer_exponent(alpha, f, s, t).map(|o| (o, o % 2 == 0))
    } else {
        None
    };
    TransferReport {
        applicable: true,
        reason: String::new(),
        f_nonzero: f > 0,
        congruence_ok,
        power_law,
    }
}

#[derive(Debug, Clone)]
pub struct SemifieldVerdict {
    pub is_semifield_type: bool,
    pub failures: Vec<String>,
}

/// H of order q^3 with normal elementary abelian M, N of order q^2,
/// H = MN, and [m,n] = id only when m or n lies in M n N.
pub fn semifield_type_check(h: &FiniteGroup, m: &Subgroup, n: &Subgroup) -> SemifieldVerdict {
    let mut failures = Vec::new();
    let order = h.order();
    let q = (1..=order).find(|&q| q * q * q == order);
    let q = match q {
        Some(q) => q,
        None => {
            return SemifieldVerdict {
                is_semifield_type: false,
                failures: vec![format!("|H| = {order} is not a cube")],
            }
        }
    };
    if m.members() == n.members() {
        failures.push("M and N are not distinct".into());
    }
    for (name, sub) in [("M", m), ("N", n)] {
        if sub.order() != q * q {
            failures.push(format!("|{name}| = {} != q^2 = {}", sub.order(), q * q));
        }
        if !sub.is_elementary_abelian() {
            failures.push(format!("{name} is not elementary abelian"));
        }
        if !sub.is_normal() {
            failures.push(format!("{name} is not normal"));
        }
    }
    if m.product_set(n).len() != order {
        failures.push("H != MN".into());
    }
    if failures.is_empty() {
        let meet = m.intersect(n);
        'scan: for &a in m.members() {
            for &b in n.members() {
                if h.commutator(a as usize, b as usize) == 0 && !meet.contains(a as usize) && !meet.contains(b as usize)
                {
                    failures.push(format!("[{a},{b}] = id with both outside M n N"));
                    break 'scan;
                }
            }
        }
    }
    SemifieldVerdict { is_semifield_type: failures.is_empty(), failures }
}

#[derive(Debug, Clone)]
pub struct StructureEquivReport {
    pub fstar_abelian: bool,
    pub m_x: bool,
    pub special_of_exponent_p: bool,
    pub s_in_center: bool,
    pub s_equals_center: bool,
    pub all_equal: bool,
}

/// The five square-odd-order structure conditions, evaluated independently.
pub fn structure_equiv_report(
    geom: &PointLineGeometry,
    x: usize,
    action: &GroupAction,
    fstar: &[Subgroup],
    s_members: &[u32],
) -> Result<StructureEquivReport, AutmError> {
    let fstar_abelian = fstar.iter().all(|a| a.is_abelian());
    let (m_x, _) = m_x_check(geom, x, &action.autos)?;
    let profile = action.group.structure_profile()?;
    let p = prime_power(action.group.order()).map(|(p, _)| p).unwrap_or(0);
    let special_of_exponent_p = profile.is_special && profile.exponent == p;
    let s = action.group.subgroup_from_members(s_members.to_vec());
    let center = action.group.center();
    let s_in_center = s.is_subset_of(&center);
    let s_equals_center = s.members() == center.members();
    let verdicts = [fstar_abelian, m_x, special_of_exponent_p, s_in_center, s_equals_center];
    Ok(StructureEquivReport {
        fstar_abelian,
        m_x,
        special_of_exponent_p,
        s_in_center,
        s_equals_center,
        all_equal: verdicts.iter().all(|&v| v) || verdicts.iter().all(|&v| !v),
    })
}

#[derive(Debug, Clone)]
pub struct ProjectionReport {
    pub holds: bool,
    /// maximal subgroup index witnessing M S = H, if any.
    pub witness: Option<usize>,
    pub maximal_count: usize,
    pub s_in_frattini: bool,
    pub routes_agree: bool,
}

/// No proper (maximal) subgroup M has M S = H; equivalently S <= Phi(H).
/// Both routes are evaluated and compared.
pub fn projection_lemma_check(h: &FiniteGroup, s: &Subgroup) -> Result<ProjectionReport, AutmError> {
    let maxes = maximal_subgroups(h)?;
    let mut witness = None;
    for (i, m) in maxes.iter().enumerate() {
        if m.product_set(s).len() == h.order() {
            witness = Some(i);
            break;
        }
    }
    let holds = witness.is_none();
    let frattini = h.frattini_subgroup()?;
    let s_in_frattini = s.is_subset_of(&frattini);
    Ok(ProjectionReport {
        holds,
        witness,
        maximal_count: maxes.len(),
        s_in_frattini,
        routes_agree: holds == s_in_frattini,
    })
}
