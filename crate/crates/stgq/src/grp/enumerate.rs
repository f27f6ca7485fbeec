//! Bounded subgroup-lattice enumeration by the cyclic extension method.
//!
//! Every subgroup of a finite solvable group has a normal subgroup of prime
//! index, so climbing from the trivial subgroup through prime-index cyclic
//! extensions reaches the whole lattice. All groups this crate constructs
//! are p-groups or small abelian groups, hence solvable.

use std::collections::HashSet;

use super::{FiniteGroup, GroupError, Subgroup};

/// Hard cap on the group order for full lattice work.
pub const MAXIMAL_ENUM_BOUND: usize = 1024;

/// Safety valve against combinatorially explosive lattices.
const MAX_SUBGROUPS: usize = 200_000;

/// All subgroups, deterministically ordered by (order, member list).
pub fn all_subgroups(group: &FiniteGroup) -> Result<Vec<Subgroup>, GroupError> {
    let n = group.order();
    if n > MAXIMAL_ENUM_BOUND {
        return Err(GroupError::OrderBound { order: n, bound: MAXIMAL_ENUM_BOUND, what: "subgroup enumeration" });
    }
    let primes = prime_divisors(n);

    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let trivial = vec![0u32];
    seen.insert(trivial.clone());
    let mut worklist: Vec<Vec<u32>> = vec![trivial];
    let mut head = 0;

    while head < worklist.len() {
        let members = worklist[head].clone();
        head += 1;
        if members.len() == n {
            continue;
        }
        let mut mask = vec![false; n];
        for &m in &members {
            mask[m as usize] = true;
        }
        // Normalizer scan: g with V^g = V.
        let normalizer: Vec<usize> = (0..n)
            .filter(|&g| members.iter().all(|&v| mask[group.conjugate(v as usize, g)]))
            .collect();
        for &g in &normalizer {
            if mask[g] {
                continue;
            }
            let extends = primes.iter().any(|&p| mask[group.pow(g, p)]);
            if !extends {
                continue;
            }
            let mut gens: Vec<usize> = members.iter().map(|&m| m as usize).collect();
            gens.push(g);
            let bigger = group.subgroup_generate(&gens);
            let key = bigger.members().to_vec();
            if seen.insert(key.clone()) {
                if seen.len() > MAX_SUBGROUPS {
                    return Err(GroupError::EnumerationTooLarge(MAX_SUBGROUPS));
                }
                worklist.push(key);
            }
        }
    }

    let mut lists: Vec<Vec<u32>> = seen.into_iter().collect();
    lists.sort_unstable_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(lists.into_iter().map(|m| group.subgroup_from_members(m)).collect())
}

/// All subgroups of one fixed order.
pub fn subgroups_of_order(group: &FiniteGroup, m: usize) -> Result<Vec<Subgroup>, GroupError> {
    Ok(all_subgroups(group)?.into_iter().filter(|s| s.order() == m).collect())
}

/// Complete list of abelian subgroups of order m, deterministic order.
pub fn abelian_subgroups_of_order(group: &FiniteGroup, m: usize) -> Result<Vec<Subgroup>, GroupError> {
    if group.order() % m != 0 {
        return Err(GroupError::Parameter(format!(
            "{m} does not divide the group order {}",
            group.order()
        )));
    }
    Ok(subgroups_of_order(group, m)?.into_iter().filter(|s| s.is_abelian()).collect())
}

/// Maximal proper subgroups, from the full lattice.
pub fn maximal_subgroups(group: &FiniteGroup) -> Result<Vec<Subgroup>, GroupError> {
    let subs = all_subgroups(group)?;
    let n = group.order();
    let proper: Vec<&Subgroup> = subs.iter().filter(|s| s.order() < n).collect();
    let mut maxes = Vec::new();
    for s in &proper {
        let is_max = !proper.iter().any(|t| t.order() > s.order() && s.is_subset_of(t));
        if is_max {
            maxes.push((*s).clone());
        }
    }
    Ok(maxes)
}

fn prime_divisors(mut n: usize) -> Vec<u64> {
    let mut primes = Vec::new();
    let mut p = 2usize;
    while p * p <= n {
        if n % p == 0 {
            primes.push(p as u64);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        primes.push(n as u64);
    }
    primes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grp::heisenberg;

    #[test]
    fn z6_lattice() {
        let g = FiniteGroup::from_law(6, |a, b| (a + b) % 6).unwrap();
        let subs = all_subgroups(&g).unwrap();
        // 1, Z2, Z3, Z6
        assert_eq!(subs.len(), 4);
        let maxes = maximal_subgroups(&g).unwrap();
        assert_eq!(maxes.len(), 2);
    }

    #[test]
    fn trivial_order_query() {
        let g = heisenberg(1, 3).unwrap();
        let ones = abelian_subgroups_of_order(&g, 1).unwrap();
        assert_eq!(ones.len(), 1);
        assert!(ones[0].is_trivial());
    }

    #[test]
    fn heisenberg_q3_maximal_abelians() {
        // |W| = q + 1 for the Desarguesian case.
        let g = heisenberg(1, 3).unwrap();
        let abs = abelian_subgroups_of_order(&g, 9).unwrap();
        assert_eq!(abs.len(), 4);
        for s in &abs {
            assert!(s.is_normal());
        }
    }

    #[test]
    fn heisenberg_q5_maximal_abelians() {
        let g = heisenberg(1, 5).unwrap();
        let abs = abelian_subgroups_of_order(&g, 25).unwrap();
        assert_eq!(abs.len(), 6);
    }

    #[test]
    fn non_divisor_rejected() {
        let g = heisenberg(1, 3).unwrap();
        assert!(abelian_subgroups_of_order(&g, 4).is_err());
    }

    #[test]
    fn frattini_paths_agree_on_small_instances() {
        for g in [
            heisenberg(1, 3).unwrap(),
            heisenberg(2, 2).unwrap(),
            FiniteGroup::from_law(8, |a, b| (a + b) % 8).unwrap(),
            FiniteGroup::from_law(16, |a, b| a ^ b).unwrap(),
        ] {
            let by_intersection = g.frattini_subgroup().unwrap();
            let (p, _) = crate::grp::prime_power(g.order()).unwrap();
            let by_formula = g.frattini_p_group(p);
            assert_eq!(by_intersection.members(), by_formula.members(), "{g:?}");
        }
    }
}
