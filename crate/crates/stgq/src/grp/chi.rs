//! The commutator form chi on V = G/Phi(G) for class-2 groups with
//! Phi(G) = [G,G] <= Z(G), and the BAN-form battery: bi-additivity,
//! alternation, nondegeneracy and F_q-bilinearity under a declared,
//! deterministically chosen scalar transport.

use std::collections::HashMap;

use crate::ff::field_build;

use super::{prime_power, FiniteGroup, GroupError, Subgroup};

/// chi(a Phi, b Phi) = [a, b], tabulated over V x V.
#[derive(Debug, Clone)]
pub struct ChiForm {
    pub group: FiniteGroup,
    /// V = G/Phi as an abstract group.
    pub v: FiniteGroup,
    /// projection G -> V (class indices).
    pub projection: Vec<u32>,
    /// coset representatives of V in G (minimal indices).
    pub reps: Vec<u32>,
    pub derived: Subgroup,
    /// |V|^2 values, as elements of the parent group (members of [G,G]).
    pub table: Vec<u32>,
}

#[derive(Debug, Clone)]
pub struct BanReport {
    pub q: usize,
    pub well_defined: bool,
    pub biadditive: bool,
    pub alternating: bool,
    pub nondegenerate: bool,
    /// None when no scalar transport applies (with the reason in
    /// `scalar_note`); Some(verdict) otherwise.
    pub bilinear: Option<bool>,
    pub scalar_note: String,
    /// Greedy F_p-basis of V (as V indices) and of [G,G] (as G indices)
    /// that define the declared transport.
    pub v_basis: Vec<u32>,
    pub derived_basis: Vec<u32>,
}

impl BanReport {
    pub fn all_pass(&self) -> bool {
        self.well_defined
            && self.biadditive
            && self.alternating
            && self.nondegenerate
            && self.bilinear == Some(true)
    }
}

/// Tabulates chi; errors if G fails the class-2 hypotheses.
pub fn chi_form(group: &FiniteGroup) -> Result<ChiForm, GroupError> {
    let derived = group.derived_subgroup();
    if derived.is_trivial() || derived.order() == group.order() {
        return Err(GroupError::Parameter("chi form needs a nonabelian nilpotent group of class 2".into()));
    }
    let center = group.center();
    if !derived.is_subset_of(&center) {
        return Err(GroupError::Parameter("[G,G] is not central".into()));
    }
    let frattini = group.frattini_subgroup()?;
    if frattini.members() != derived.members() {
        return Err(GroupError::Parameter("Phi(G) differs from [G,G]".into()));
    }
    let (v, projection) = group.quotient(&derived)?;
    let mut reps = vec![u32::MAX; v.order()];
    for g in 0..group.order() {
        let c = projection[g] as usize;
        if reps[c] == u32::MAX || g < reps[c] as usize {
            reps[c] = g as u32;
        }
    }
    let nv = v.order();
    let mut table = vec![0u32; nv * nv];
    for a in 0..nv {
        for b in 0..nv {
            table[a * nv + b] = group.commutator(reps[a] as usize, reps[b] as usize) as u32;
        }
    }
    Ok(ChiForm { group: group.clone(), v, projection, reps, derived, table })
}

impl ChiForm {
    pub fn eval(&self, a: usize, b: usize) -> usize {
        self.table[a * self.v.order() + b] as usize
    }
}

/// Runs the full BAN battery against the target field order q.
pub fn ban_check(chi: &ChiForm, q: usize) -> Result<BanReport, GroupError> {
    if chi.derived.order() != q {
        return Err(GroupError::Parameter(format!(
            "|[G,G]| = {} but q = {q}",
            chi.derived.order()
        )));
    }
    let (p, h) = prime_power(q).ok_or_else(|| GroupError::Parameter(format!("q = {q} is not a prime power")))?;
    let g = &chi.group;
    let v = &chi.v;
    let nv = v.order();

    // Well-definedness: the commutator of arbitrary coset members agrees
    // with the tabulated rep-pair value.
    let mut well_defined = true;
    'wd: for a in 0..g.order() {
        for b in 0..g.order() {
            if g.commutator(a, b) != chi.eval(chi.projection[a] as usize, chi.projection[b] as usize) {
                well_defined = false;
                break 'wd;
            }
        }
    }

    // Bi-additivity over V (V is written multiplicatively; it is abelian).
    let mut biadditive = true;
    'ba: for u in 0..nv {
        for w in 0..nv {
            for x in 0..nv {
                let lhs = chi.eval(v.mul(u, w), x);
                let rhs = g.mul(chi.eval(u, x), chi.eval(w, x));
                if lhs != rhs {
                    biadditive = false;
                    break 'ba;
                }
                let lhs2 = chi.eval(x, v.mul(u, w));
                let rhs2 = g.mul(chi.eval(x, u), chi.eval(x, w));
                if lhs2 != rhs2 {
                    biadditive = false;
                    break 'ba;
                }
            }
        }
    }

    let alternating = (0..nv).all(|u| chi.eval(u, u) == 0);
    let nondegenerate = (1..nv).all(|u| (0..nv).any(|w| chi.eval(u, w) != 0));

    // Scalar transport: greedy F_p-bases of V and of [G,G].
    let field = field_build(p as u32, h)?;
    let mut bilinear = None;
    let scalar_note;
    let mut v_basis: Vec<u32> = Vec::new();
    let mut derived_basis: Vec<u32> = Vec::new();

    let v_elem_ok = v.exponent() == p;
    let d_elem_ok = chi.derived.is_elementary_abelian();
    if !v_elem_ok || !d_elem_ok {
        scalar_note = "no transport: V or [G,G] is not elementary abelian".into();
    } else {
        v_basis = greedy_basis(v);
        let d = v_basis.len();
        if d % h as usize != 0 {
            scalar_note = format!("no transport: dim V = {d} is not divisible by h = {h}");
        } else {
            // coordinates of every V element in the greedy basis
            let coords = span_coordinates(v, &v_basis, p as usize);
            let elem_of: HashMap<Vec<u8>, usize> = coords.iter().enumerate().map(|(e, c)| (c.clone(), e)).collect();
            // additive isomorphism [G,G] -> F_q via its own greedy basis
            let dgrp = chi.derived.as_group()?;
            derived_basis = greedy_basis(&dgrp).iter().map(|&i| chi.derived.members()[i as usize]).collect();
            let dcoords = span_coordinates(&dgrp, &greedy_basis(&dgrp), p as usize);
            // map member of [G,G] (as G index) -> field index
            let mut to_field = HashMap::new();
            for (i, &m) in chi.derived.members().iter().enumerate() {
                let mut idx = 0usize;
                for &c in dcoords[i].iter().rev() {
                    idx = idx * p as usize + c as usize;
                }
                to_field.insert(m, idx);
            }
            let blocks = d / h as usize;
            let scale = |lambda: usize, u: usize| -> usize {
                let c = &coords[u];
                let mut out = vec![0u8; d];
                for blk in 0..blocks {
                    let mut digit = 0usize;
                    for j in (0..h as usize).rev() {
                        digit = digit * p as usize + c[blk * h as usize + j] as usize;
                    }
                    let scaled = field.mul(lambda, digit);
                    let mut rest = scaled;
                    for j in 0..h as usize {
                        out[blk * h as usize + j] = (rest % p as usize) as u8;
                        rest /= p as usize;
                    }
                }
                elem_of[&out]
            };
            let mut ok = true;
            'bl: for lambda in 0..q {
                for u in 0..nv {
                    for w in 0..nv {
                        let lhs = to_field[&(chi.eval(scale(lambda, u), w) as u32)];
                        let rhs = field.mul(lambda, to_field[&(chi.eval(u, w) as u32)]);
                        if lhs != rhs {
                            ok = false;
                            break 'bl;
                        }
                    }
                }
            }
            bilinear = Some(ok);
            scalar_note = format!(
                "transport via greedy bases: dim_F{p}(V) = {d} read as F_{q}^{blocks}, [G,G] basis mapped to 1, x, ..."
            );
        }
    }

    Ok(BanReport {
        q,
        well_defined,
        biadditive,
        alternating,
        nondegenerate,
        bilinear,
        scalar_note,
        v_basis,
        derived_basis,
    })
}

/// First-found F_p-basis of an elementary abelian group, scanning indices
/// in increasing order.
fn greedy_basis(g: &FiniteGroup) -> Vec<u32> {
    let mut basis: Vec<u32> = Vec::new();
    let mut span = g.trivial_subgroup();
    for x in g.elements() {
        if !span.contains(x) {
            basis.push(x as u32);
            let gens: Vec<usize> = basis.iter().map(|&b| b as usize).collect();
            span = g.subgroup_generate(&gens);
            if span.order() == g.order() {
                break;
            }
        }
    }
    basis
}

/// Coordinates of every element in the given basis of an elementary
/// abelian p-group, by exhausting all combinations.
fn span_coordinates(g: &FiniteGroup, basis: &[u32], p: usize) -> Vec<Vec<u8>> {
    let d = basis.len();
    let mut coords = vec![Vec::new(); g.order()];
    let total = p.pow(d as u32);
    assert_eq!(total, g.order(), "basis does not span");
    for combo in 0..total {
        let mut digits = vec![0u8; d];
        let mut rest = combo;
        let mut elem = 0usize;
        for (i, slot) in digits.iter_mut().enumerate() {
            *slot = (rest % p) as u8;
            rest /= p;
            for _ in 0..*slot {
                elem = g.mul(elem, basis[i] as usize);
            }
        }
        coords[elem] = digits;
    }
    coords
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grp::heisenberg;

    #[test]
    fn chi_on_heisenberg_2_3_is_ban() {
        let g = heisenberg(2, 3).unwrap();
        let chi = chi_form(&g).unwrap();
        assert_eq!(chi.v.order(), 81);
        let report = ban_check(&chi, 3).unwrap();
        assert!(report.well_defined);
        assert!(report.biadditive);
        assert!(report.alternating);
        assert!(report.nondegenerate);
        assert_eq!(report.bilinear, Some(true));
        assert!(report.all_pass());
    }

    #[test]
    fn chi_alternates_on_admissible_groups() {
        for (n, q) in [(1usize, 3usize), (1, 5), (2, 2)] {
            let g = heisenberg(n, q).unwrap();
            let chi = chi_form(&g).unwrap();
            for u in 0..chi.v.order() {
                assert_eq!(chi.eval(u, u), 0);
            }
        }
    }

    #[test]
    fn chi_on_heisenberg_1_5() {
        let g = heisenberg(1, 5).unwrap();
        let chi = chi_form(&g).unwrap();
        // V is 2-dimensional over F_5
        assert_eq!(chi.v.order(), 25);
        let report = ban_check(&chi, 5).unwrap();
        assert!(report.all_pass());
    }

    #[test]
    fn chi_with_extension_field_scalars() {
        // H_1(4): |[G,G]| = 4 = 2^2, natural coordinates make the greedy
        // transport line up with the field structure.
        let g = heisenberg(1, 4).unwrap();
        let chi = chi_form(&g).unwrap();
        let report = ban_check(&chi, 4).unwrap();
        assert!(report.all_pass(), "{report:?}");
    }

    #[test]
    fn chi_rejects_abelian() {
        let g = FiniteGroup::from_law(16, |a, b| a ^ b).unwrap();
        assert!(chi_form(&g).is_err());
    }

    #[test]
    fn ban_rejects_wrong_q() {
        let g = heisenberg(1, 3).unwrap();
        let chi = chi_form(&g).unwrap();
        assert!(ban_check(&chi, 9).is_err());
    }
}
