//! Exhaustive backtracking search for Kantor families of a given type in
//! a small group, with orbit deduplication under the automorphism group.

use std::collections::BTreeSet;

use crate::grp::{all_subgroups, automorphism_group, FiniteGroup, Subgroup};
use crate::util::sorted_intersect;

use super::{KantorError, KantorFamily};

pub const SEARCH_MAX_ORDER: usize = 256;
const DEDUP_MAX_ORDER: usize = 64;

type PairList = Vec<(Vec<u32>, Vec<u32>)>;

/// All Kantor families of type (s, t) in the group, up to automorphisms
/// when the group order is at most 64 (raw list above). When `fixed_s` is
/// given, only families with A* = A fixed_s are considered.
pub fn search_kantor_families(
    group: &FiniteGroup,
    s: usize,
    t: usize,
    fixed_s: Option<&Subgroup>,
) -> Result<Vec<KantorFamily>, KantorError> {
    let n = group.order();
    if n != s * s * t {
        return Err(KantorError::Parameter(format!("|G| = {n} != s^2 t = {}", s * s * t)));
    }
    if n > SEARCH_MAX_ORDER {
        return Err(KantorError::Parameter(format!("search capped at order {SEARCH_MAX_ORDER}, got {n}")));
    }
    let subs = all_subgroups(group)?;
    let cand_a: Vec<&Subgroup> = subs.iter().filter(|h| h.order() == s).collect();
    let cand_star: BTreeSet<Vec<u32>> =
        subs.iter().filter(|h| h.order() == s * t).map(|h| h.members().to_vec()).collect();

    // candidate pairs (A, A*) honoring axiom (b) and the fixed_s restriction
    let mut pairs: Vec<(usize, Vec<Vec<u32>>)> = Vec::new();
    for (i, a) in cand_a.iter().enumerate() {
        let stars: Vec<Vec<u32>> = match fixed_s {
            Some(sym) => {
                let prod = a.product_set(sym);
                if prod.len() == s * t && cand_star.contains(&prod) {
                    vec![prod]
                } else {
                    Vec::new()
                }
            }
            None => cand_star
                .iter()
                .filter(|star| crate::util::sorted_is_subset(a.members(), star))
                .cloned()
                .collect(),
        };
        if !stars.is_empty() {
            pairs.push((i, stars));
        }
    }

    let mut found: Vec<PairList> = Vec::new();
    let mut chosen: PairList = Vec::new();
    extend(group, &cand_a, &pairs, t + 1, 0, &mut chosen, &mut found);

    // orbit deduplication
    let deduped: Vec<PairList> = if n <= DEDUP_MAX_ORDER {
        match automorphism_group(group) {
            Ok(autos) => {
                let mut canon_seen: BTreeSet<PairList> = BTreeSet::new();
                let mut reps = Vec::new();
                for fam in &found {
                    let mut canon = fam.clone();
                    for auto in &autos {
                        let mut img: PairList = fam
                            .iter()
                            .map(|(a, astar)| {
                                let mut ai: Vec<u32> = a.iter().map(|&x| auto[x as usize]).collect();
                                let mut si: Vec<u32> = astar.iter().map(|&x| auto[x as usize]).collect();
                                ai.sort_unstable();
                                si.sort_unstable();
                                (ai, si)
                            })
                            .collect();
                        img.sort();
                        if img < canon {
                            canon = img;
                        }
                    }
                    if canon_seen.insert(canon.clone()) {
                        reps.push(canon);
                    }
                }
                reps.sort();
                reps
            }
            Err(_) => found,
        }
    } else {
        found
    };

    Ok(deduped
        .into_iter()
        .map(|pairs| {
            let f = pairs.iter().map(|(a, _)| group.subgroup_from_members(a.clone())).collect();
            let fstar = pairs.iter().map(|(_, st)| group.subgroup_from_members(st.clone())).collect();
            KantorFamily::new(group.clone(), f, fstar, s, t)
        })
        .collect())
}

fn extend(
    group: &FiniteGroup,
    cand_a: &[&Subgroup],
    pairs: &[(usize, Vec<Vec<u32>>)],
    want: usize,
    from: usize,
    chosen: &mut PairList,
    found: &mut Vec<PairList>,
) {
    if chosen.len() == want {
        found.push(chosen.clone());
        return;
    }
    for (pi, (ai, stars)) in pairs.iter().enumerate().skip(from) {
        let a = cand_a[*ai].members();
        if !admissible_a(group, chosen, a) {
            continue;
        }
        for star in stars {
            if !admissible_pair(chosen, a, star) {
                continue;
            }
            chosen.push((a.to_vec(), star.clone()));
            extend(group, cand_a, pairs, want, pi + 1, chosen, found);
            chosen.pop();
        }
    }
}

/// Axiom (c) incrementally: products of chosen pairs against the new A and
/// products involving the new A against chosen ones.
fn admissible_a(group: &FiniteGroup, chosen: &PairList, a: &[u32]) -> bool {
    let prod = |x: &[u32], y: &[u32]| -> Vec<u32> {
        let mut out = Vec::with_capacity(x.len() * y.len());
        for &u in x {
            for &v in y {
                out.push(group.mul(u as usize, v as usize) as u32);
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    };
    // pairs among chosen vs new C = a
    for (i, (b, _)) in chosen.iter().enumerate() {
        for (j, (c, _)) in chosen.iter().enumerate() {
            if i != j && sorted_intersect(&prod(b, c), a).len() != 1 {
                return false;
            }
        }
        // products involving the new member
        for (k, (c, _)) in chosen.iter().enumerate() {
            if k != i {
                if sorted_intersect(&prod(b, a), c).len() != 1 {
                    return false;
                }
                if sorted_intersect(&prod(a, b), c).len() != 1 {
                    return false;
                }
            }
        }
    }
    true
}

/// Axiom (d) incrementally for the new pair.
fn admissible_pair(chosen: &PairList, a: &[u32], star: &[u32]) -> bool {
    for (b, bstar) in chosen {
        if sorted_intersect(a, bstar).len() != 1 {
            return false;
        }
        if sorted_intersect(b, star).len() != 1 {
            return false;
        }
    }
    true
}
