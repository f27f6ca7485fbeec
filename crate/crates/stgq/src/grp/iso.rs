//! Group isomorphism by invariant fingerprint plus generator-mapping
//! backtracking, and full automorphism-group enumeration for small groups.

use std::collections::BTreeMap;

use super::{FiniteGroup, GroupError};

const WITNESS_BOUND: usize = 1024;
const MAX_AUTOMORPHISMS: usize = 500_000;

#[derive(Debug, Clone)]
pub enum IsoVerdict {
    /// Witness maps indices of the first group onto the second.
    Isomorphic(Vec<u32>),
    /// Names the separating invariant, or reports an exhausted search.
    NotIsomorphic(String),
    /// Fingerprints tie but the order exceeds the witness-search bound.
    Inconclusive(String),
}

impl IsoVerdict {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, IsoVerdict::Isomorphic(_))
    }
}

#[derive(Debug, PartialEq, Eq)]
struct Fingerprint {
    order: usize,
    element_orders: BTreeMap<u64, usize>,
    center_order: usize,
    derived_order: usize,
    exponent: u64,
    nilpotency_class: Option<usize>,
    abelianization_orders: BTreeMap<u64, usize>,
}

fn fingerprint(g: &FiniteGroup) -> Fingerprint {
    let mut element_orders: BTreeMap<u64, usize> = BTreeMap::new();
    for x in g.elements() {
        *element_orders.entry(g.element_order(x)).or_insert(0) += 1;
    }
    let derived = g.derived_subgroup();
    let series = g.lower_central_series();
    let class = if series.last().map(|s| s.order()) == Some(1) { Some(series.len() - 1) } else { None };
    let mut abelianization_orders: BTreeMap<u64, usize> = BTreeMap::new();
    if let Ok((ab, _)) = g.quotient(&derived) {
        for x in ab.elements() {
            *abelianization_orders.entry(ab.element_order(x)).or_insert(0) += 1;
        }
    }
    Fingerprint {
        order: g.order(),
        element_orders,
        center_order: g.center().order(),
        derived_order: derived.order(),
        exponent: g.exponent(),
        nilpotency_class: class,
        abelianization_orders,
    }
}

/// Exact isomorphism verdict for groups up to the witness-search bound;
/// fingerprint-only (possibly inconclusive) above it.
pub fn group_isomorphic(g1: &FiniteGroup, g2: &FiniteGroup) -> Result<IsoVerdict, GroupError> {
    if g1.order() != g2.order() {
        return Ok(IsoVerdict::NotIsomorphic(format!(
            "orders differ: {} vs {}",
            g1.order(),
            g2.order()
        )));
    }
    let f1 = fingerprint(g1);
    let f2 = fingerprint(g2);
    if f1 != f2 {
        let which = if f1.element_orders != f2.element_orders {
            "element order multiset"
        } else if f1.center_order != f2.center_order {
            "center order"
        } else if f1.derived_order != f2.derived_order {
            "derived subgroup order"
        } else if f1.exponent != f2.exponent {
            "exponent"
        } else if f1.nilpotency_class != f2.nilpotency_class {
            "nilpotency class"
        } else {
            "abelianization type"
        };
        return Ok(IsoVerdict::NotIsomorphic(which.to_string()));
    }
    if g1.order() > WITNESS_BOUND {
        return Ok(IsoVerdict::Inconclusive("fingerprints tie; order above witness-search bound".into()));
    }
    let mut found = None;
    search_isomorphisms(g1, g2, &mut |map| {
        found = Some(map.to_vec());
        true
    });
    Ok(match found {
        Some(map) => IsoVerdict::Isomorphic(map),
        None => IsoVerdict::NotIsomorphic("generator-mapping search exhausted".into()),
    })
}

/// All automorphisms of a small group, as permutations of its indices.
/// Deterministically ordered.
pub fn automorphism_group(g: &FiniteGroup) -> Result<Vec<Vec<u32>>, GroupError> {
    if g.order() > WITNESS_BOUND {
        return Err(GroupError::OrderBound { order: g.order(), bound: WITNESS_BOUND, what: "automorphism enumeration" });
    }
    let mut autos: Vec<Vec<u32>> = Vec::new();
    let mut overflow = false;
    search_isomorphisms(g, g, &mut |map| {
        autos.push(map.to_vec());
        if autos.len() > MAX_AUTOMORPHISMS {
            overflow = true;
            return true;
        }
        false
    });
    if overflow {
        return Err(GroupError::EnumerationTooLarge(MAX_AUTOMORPHISMS));
    }
    autos.sort_unstable();
    Ok(autos)
}

/// Greedy minimal-ish generating chain: repeatedly adjoin the smallest
/// element outside the running closure.
fn generating_chain(g: &FiniteGroup) -> Vec<usize> {
    let mut gens: Vec<usize> = Vec::new();
    let mut closure = g.trivial_subgroup();
    while closure.order() < g.order() {
        let next = g.elements().find(|&x| !closure.contains(x)).expect("proper closure has a complement");
        gens.push(next);
        let all: Vec<usize> = gens.clone();
        closure = g.subgroup_generate(&all);
    }
    gens
}

/// Backtracking over generator images. Calls `emit` with each witness map
/// (g1 index -> g2 index); stops early when `emit` returns true.
fn search_isomorphisms(
    g1: &FiniteGroup,
    g2: &FiniteGroup,
    emit: &mut dyn FnMut(&[u32]) -> bool,
) {
    let gens = generating_chain(g1);
    if gens.is_empty() {
        // trivial group
        emit(&[0]);
        return;
    }
    // Per-slot candidate pools: order and centralizer order must match.
    let pools: Vec<Vec<usize>> = gens
        .iter()
        .map(|&a| {
            let ord = g1.element_order(a);
            let cen = g1.centralizer(a).order();
            g2.elements()
                .filter(|&b| g2.element_order(b) == ord && g2.centralizer(b).order() == cen)
                .collect()
        })
        .collect();

    // Word expressions: BFS over g1 assigning parent and generator edge.
    let n = g1.order();
    let mut images = vec![u32::MAX; n];
    images[0] = 0;

    fn extend(
        g1: &FiniteGroup,
        g2: &FiniteGroup,
        gens: &[usize],
        pools: &[Vec<usize>],
        depth: usize,
        images: &mut Vec<u32>,
        emit: &mut dyn FnMut(&[u32]) -> bool,
    ) -> bool {
        if depth == gens.len() {
            // Full map built; final check: bijective + compatible with
            // right-multiplication by every generator.
            let n = g1.order();
            let mut seen = vec![false; n];
            for &im in images.iter() {
                if im == u32::MAX || seen[im as usize] {
                    return false;
                }
                seen[im as usize] = true;
            }
            for x in 0..n {
                for (j, &a) in gens.iter().enumerate() {
                    let _ = j;
                    let xa = g1.mul(x, a);
                    if g2.mul(images[x] as usize, images[a] as usize) != images[xa] as usize {
                        return false;
                    }
                }
            }
            return emit(images);
        }
        let a = gens[depth];
        for &b in &pools[depth] {
            // Tentatively map the closure of gens[..=depth].
            let saved = images.clone();
            images[a] = b as u32;
            if propagate(g1, g2, &gens[..=depth], images)
                && extend(g1, g2, gens, pools, depth + 1, images, emit)
            {
                return true;
            }
            *images = saved;
        }
        false
    }

    /// Grows images over the closure of the assigned generators; returns
    /// false on any inconsistency (non-injective or conflicting values).
    fn propagate(g1: &FiniteGroup, g2: &FiniteGroup, assigned: &[usize], images: &mut [u32]) -> bool {
        let mut queue: Vec<usize> = vec![0];
        let mut in_queue = vec![false; g1.order()];
        in_queue[0] = true;
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for &a in assigned {
                let xa = g1.mul(x, a);
                let im = g2.mul(images[x] as usize, images[a] as usize) as u32;
                if images[xa] == u32::MAX {
                    images[xa] = im;
                } else if images[xa] != im {
                    return false;
                }
                if !in_queue[xa] {
                    in_queue[xa] = true;
                    queue.push(xa);
                }
            }
        }
        // injectivity on the mapped part
        let mut seen = vec![false; g2.order()];
        for &im in images.iter() {
            if im != u32::MAX {
                if seen[im as usize] {
                    return false;
                }
                seen[im as usize] = true;
            }
        }
        true
    }

    extend(g1, g2, &gens, &pools, 0, &mut images, emit);
}
