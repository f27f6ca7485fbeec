//! Finite groups on dense element indices, with the subgroup-lattice and
//! structure queries the quadrangle machinery needs.
//!
//! Groups of order at most [`TABLE_MAX_ORDER`] store a full Cayley table;
//! larger groups (the Suzuki-Tits group at q = 8) evaluate a coordinate law
//! directly and keep a memoized inverse table. Index 0 is always the
//! identity.

mod chi;
mod enumerate;
mod iso;
mod models;

pub use chi::{ban_check, chi_form, BanReport, ChiForm};
pub use enumerate::{abelian_subgroups_of_order, all_subgroups, maximal_subgroups};
pub use iso::{automorphism_group, group_isomorphic, IsoVerdict};
pub use models::{heisenberg, suzuki_tits_group, suzuki_tits_matrix_product, HeisenbergCoords, SuzukiTitsModel};

use std::collections::HashSet;
use std::sync::Arc;

use thiserror::Error;

use crate::util::{lcm, sorted_intersect, sorted_is_subset, SplitMix64};

/// Largest order for which a Cayley table is stored.
pub const TABLE_MAX_ORDER: usize = 4096;

/// Exhaustive associativity checking up to here, sampled above.
const EXHAUSTIVE_ASSOC_ORDER: usize = 512;
const SAMPLED_ASSOC_TRIPLES: usize = 1_000_000;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("law has no identity element")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("law is not associative at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("law output {0} out of domain")]
    OutOfDomain(usize),
    #[error("group order {order} exceeds bound {bound} for {what}")]
    OrderBound { order: usize, bound: usize, what: &'static str },
    #[error("subgroup is not normal (witness conjugate of {0} by {1} escapes)")]
    NotNormal(usize, usize),
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error("subgroup enumeration exceeded {0} subgroups")]
    EnumerationTooLarge(usize),
    #[error(transparent)]
    Field(#[from] crate::ff::FieldError),
}

enum MulImpl {
    Table(Vec<u32>),
    Law(Box<dyn Fn(usize, usize) -> usize + Send + Sync>),
}

struct GroupInner {
    order: usize,
    mul: MulImpl,
    inv: Vec<u32>,
    gens: Vec<u32>,
    name: String,
    label: Option<Box<dyn Fn(usize) -> String + Send + Sync>>,
}

/// A finite group; cheap to clone (shared immutable internals).
#[derive(Clone)]
pub struct FiniteGroup {
    inner: Arc<GroupInner>,
}

impl std::fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.inner.name, self.order())
    }
}

/// A subgroup as a sorted index set inside its parent group.
#[derive(Clone)]
pub struct Subgroup {
    parent: FiniteGroup,
    members: Arc<Vec<u32>>,
}

impl std::fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subgroup(order {} of {})", self.order(), self.parent.inner.name)
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.parent.same_group(&other.parent) && self.members == other.members
    }
}
impl Eq for Subgroup {}

/// Structure invariants of a group, per [`FiniteGroup::structure_profile`].
#[derive(Debug, Clone)]
pub struct GroupProfile {
    pub center: Subgroup,
    pub derived: Subgroup,
    pub frattini: Subgroup,
    pub exponent: u64,
    pub nilpotency_class: Option<usize>,
    pub lower_central_series: Vec<Subgroup>,
    pub is_special: bool,
}

impl FiniteGroup {
    /// Builds a verified group from a total binary law on `0..domain_size`.
    /// The identity is located and translated to index 0.
    pub fn from_law<F>(domain_size: usize, law: F) -> Result<FiniteGroup, GroupError>
    where
        F: Fn(usize, usize) -> usize + Send + Sync + 'static,
    {
        if domain_size == 0 {
            return Err(GroupError::NoIdentity);
        }
        // Locate the identity: the unique e with e*x = x*e = x for all x.
        let mut identity = None;
        'outer: for e in 0..domain_size {
            for x in 0..domain_size {
                let l = law(e, x);
                let r = law(x, e);
                if l >= domain_size || r >= domain_size {
                    return Err(GroupError::OutOfDomain(l.max(r)));
                }
                if l != x || r != x {
                    continue 'outer;
                }
            }
            identity = Some(e);
            break;
        }
        let e = identity.ok_or(GroupError::NoIdentity)?;

        // Relabel by swapping 0 and e so the identity sits at index 0.
        let relabel = move |x: usize| -> usize {
            if x == 0 {
                e
            } else if x == e {
                0
            } else {
                x
            }
        };
        let wrapped = move |a: usize, b: usize| relabel(law(relabel(a), relabel(b)));

        if domain_size <= TABLE_MAX_ORDER {
            let mut table = vec![0u32; domain_size * domain_size];
            for a in 0..domain_size {
                for b in 0..domain_size {
                    let c = wrapped(a, b);
                    if c >= domain_size {
                        return Err(GroupError::OutOfDomain(c));
                    }
                    table[a * domain_size + b] = c as u32;
                }
            }
            FiniteGroup::from_parts(domain_size, MulImpl::Table(table), "from_law".into(), None)
        } else {
            FiniteGroup::from_parts(domain_size, MulImpl::Law(Box::new(wrapped)), "from_law".into(), None)
        }
    }

    /// Builds a group from an explicit Cayley table (row-major, identity must
    /// already be index 0 or will be translated there).
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<FiniteGroup, GroupError> {
        let n = table.len();
        for row in &table {
            if row.len() != n {
                return Err(GroupError::Parameter("Cayley table is not square".into()));
            }
        }
        FiniteGroup::from_law(n, move |a, b| table[a][b])
    }

    fn from_parts(
        order: usize,
        mul: MulImpl,
        name: String,
        label: Option<Box<dyn Fn(usize) -> String + Send + Sync>>,
    ) -> Result<FiniteGroup, GroupError> {
        let raw_mul = |a: usize, b: usize| -> usize {
            match &mul {
                MulImpl::Table(t) => t[a * order + b] as usize,
                MulImpl::Law(f) => f(a, b),
            }
        };

        // Identity law at 0.
        for x in 0..order {
            if raw_mul(0, x) != x || raw_mul(x, 0) != x {
                return Err(GroupError::NoIdentity);
            }
        }

        // Associativity: exhaustive for small orders, sampled above.
        if order <= EXHAUSTIVE_ASSOC_ORDER {
            for a in 0..order {
                for b in 0..order {
                    let ab = raw_mul(a, b);
                    for c in 0..order {
                        if raw_mul(ab, c) != raw_mul(a, raw_mul(b, c)) {
                            return Err(GroupError::NotAssociative(a, b, c));
                        }
                    }
                }
            }
        } else {
            let mut rng = SplitMix64::new(0x5747_4751);
            for _ in 0..SAMPLED_ASSOC_TRIPLES {
                let a = rng.below(order);
                let b = rng.below(order);
                let c = rng.below(order);
                if raw_mul(raw_mul(a, b), c) != raw_mul(a, raw_mul(b, c)) {
                    return Err(GroupError::NotAssociative(a, b, c));
                }
            }
        }

        // Inverses by cycling through powers (every element of a finite
        // group has finite order, so this terminates at the identity).
        let mut inv = vec![u32::MAX; order];
        for g in 0..order {
            let mut prev = g;
            let mut cur = raw_mul(g, g);
            let mut steps = 1usize;
            while cur != 0 {
                prev = cur;
                cur = raw_mul(cur, g);
                steps += 1;
                if steps > order {
                    return Err(GroupError::NoInverse(g));
                }
            }
            inv[g] = prev as u32;
            if g == 0 {
                inv[0] = 0;
            }
        }

        let mut group = FiniteGroup {
            inner: Arc::new(GroupInner { order, mul, inv, gens: Vec::new(), name, label }),
        };
        let gens = group.find_generators();
        Arc::get_mut(&mut group.inner).expect("sole owner during construction").gens = gens;
        Ok(group)
    }

    /// Constructor used by the coordinate models, which provide their own
    /// generating set and element labels.
    pub(crate) fn from_verified_law(
        order: usize,
        law: Box<dyn Fn(usize, usize) -> usize + Send + Sync>,
        gens: Vec<u32>,
        name: String,
        label: Option<Box<dyn Fn(usize) -> String + Send + Sync>>,
    ) -> Result<FiniteGroup, GroupError> {
        let mul = if order <= TABLE_MAX_ORDER {
            let mut table = vec![0u32; order * order];
            for a in 0..order {
                for b in 0..order {
                    table[a * order + b] = law(a, b) as u32;
                }
            }
            MulImpl::Table(table)
        } else {
            MulImpl::Law(law)
        };
        let mut g = FiniteGroup::from_parts(order, mul, name, label)?;
        if !gens.is_empty() {
            debug_assert_eq!(g.subgroup_generate(&gens.iter().map(|&x| x as usize).collect::<Vec<_>>()).order(), order);
            Arc::get_mut(&mut g.inner).expect("sole owner").gens = gens;
        }
        Ok(g)
    }

    pub fn order(&self) -> usize {
        self.inner.order
    }

    pub fn name(&self) -> &str {
        &self.inner.name
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.inner.mul {
            MulImpl::Table(t) => t[a * self.inner.order + b] as usize,
            MulImpl::Law(f) => f(a, b),
        }
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inner.inv[a] as usize
    }

    pub fn has_table(&self) -> bool {
        matches!(self.inner.mul, MulImpl::Table(_))
    }

    /// A stored generating set.
    pub fn generators(&self) -> &[u32] {
        &self.inner.gens
    }

    pub fn label(&self, g: usize) -> String {
        match &self.inner.label {
            Some(f) => f(g),
            None => g.to_string(),
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> {
        0..self.inner.order
    }

    /// Pointer identity: do two handles refer to the same built group?
    pub fn same_group(&self, other: &FiniteGroup) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
    }

    pub fn pow(&self, g: usize, n: u64) -> usize {
        let mut acc = 0usize;
        let mut base = g;
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    /// [a,b] = a^-1 b^-1 a b.
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    /// a^g = g^-1 a g.
    pub fn conjugate(&self, a: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(g), a), g)
    }

    pub fn element_order(&self, g: usize) -> u64 {
        let mut n = 1u64;
        let mut x = g;
        while x != 0 {
            x = self.mul(x, g);
            n += 1;
        }
        n
    }

    fn find_generators(&self) -> Vec<u32> {
        let mut gens: Vec<u32> = Vec::new();
        let mut have = vec![false; self.order()];
        have[0] = true;
        let mut count = 1usize;
        for g in 1..self.order() {
            if have[g] {
                continue;
            }
            gens.push(g as u32);
            // Extend the closure with the new generator.
            let mut queue: Vec<usize> = (0..self.order()).filter(|&x| have[x]).collect();
            have[g] = true;
            queue.push(g);
            count += 1;
            let mut head = 0;
            while head < queue.len() {
                let x = queue[head];
                head += 1;
                for &h in gens.iter() {
                    for y in [self.mul(x, h as usize), self.mul(h as usize, x)] {
                        if !have[y] {
                            have[y] = true;
                            count += 1;
                            queue.push(y);
                        }
                    }
                }
            }
            if count == self.order() {
                break;
            }
        }
        gens
    }

    /// Closure of a generating set: the smallest subgroup containing it.
    pub fn subgroup_generate(&self, gens: &[usize]) -> Subgroup {
        let mut seeds: Vec<usize> = Vec::with_capacity(gens.len() * 2);
        for &g in gens {
            assert!(g < self.order(), "generator out of range");
            seeds.push(g);
            seeds.push(self.inv(g));
        }
        let mut have = vec![false; self.order()];
        have[0] = true;
        let mut queue = vec![0usize];
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for &s in &seeds {
                let y = self.mul(x, s);
                if !have[y] {
                    have[y] = true;
                    queue.push(y);
                }
            }
        }
        let mut members: Vec<u32> = queue.iter().map(|&x| x as u32).collect();
        members.sort_unstable();
        Subgroup { parent: self.clone(), members: Arc::new(members) }
    }

    /// Normal closure of a set of elements.
    pub fn normal_closure(&self, seeds: &[usize]) -> Subgroup {
        let mut have = vec![false; self.order()];
        have[0] = true;
        let mut queue = vec![0usize];
        let mut all: Vec<usize> = Vec::new();
        for &s in seeds {
            if !have[s] {
                have[s] = true;
                queue.push(s);
            }
        }
        let gens = self.generators().to_vec();
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            all.push(x);
            let push = |y: usize, have: &mut Vec<bool>, queue: &mut Vec<usize>| {
                if !have[y] {
                    have[y] = true;
                    queue.push(y);
                }
            };
            // close under multiplication by found elements' seeds and inverses
            push(self.inv(x), &mut have, &mut queue);
            for &s in seeds {
                push(self.mul(x, s), &mut have, &mut queue);
            }
            for &g in &gens {
                push(self.conjugate(x, g as usize), &mut have, &mut queue);
                push(self.conjugate(x, self.inv(g as usize)), &mut have, &mut queue);
            }
        }
        // The loop so far closes under conjugation and seed-multiplication;
        // finish with a plain subgroup closure over everything found.
        self.subgroup_generate(&queue)
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup { parent: self.clone(), members: Arc::new(vec![0]) }
    }

    pub fn full_subgroup(&self) -> Subgroup {
        Subgroup { parent: self.clone(), members: Arc::new((0..self.order() as u32).collect()) }
    }

    pub fn subgroup_from_members(&self, members: Vec<u32>) -> Subgroup {
        let mut m = members;
        m.sort_unstable();
        m.dedup();
        debug_assert!(self.is_closed(&m), "member set is not a subgroup");
        Subgroup { parent: self.clone(), members: Arc::new(m) }
    }

    fn is_closed(&self, sorted: &[u32]) -> bool {
        if sorted.first() != Some(&0) {
            return false;
        }
        sorted.iter().all(|&a| {
            sorted.binary_search(&(self.inv(a as usize) as u32)).is_ok()
                && sorted
                    .iter()
                    .all(|&b| sorted.binary_search(&(self.mul(a as usize, b as usize) as u32)).is_ok())
        })
    }

    /// Center via the stored generating set.
    pub fn center(&self) -> Subgroup {
        let gens = self.generators();
        let members: Vec<u32> = (0..self.order() as u32)
            .filter(|&z| {
                gens.iter().all(|&g| {
                    self.mul(z as usize, g as usize) == self.mul(g as usize, z as usize)
                })
            })
            .collect();
        Subgroup { parent: self.clone(), members: Arc::new(members) }
    }

    /// Centralizer of an element.
    pub fn centralizer(&self, a: usize) -> Subgroup {
        let members: Vec<u32> = (0..self.order() as u32)
            .filter(|&g| self.mul(g as usize, a) == self.mul(a, g as usize))
            .collect();
        Subgroup { parent: self.clone(), members: Arc::new(members) }
    }

    /// Derived subgroup [G,G]: normal closure of generator commutators.
    pub fn derived_subgroup(&self) -> Subgroup {
        let gens = self.generators();
        let mut seeds = Vec::new();
        for &a in gens {
            for &b in gens {
                seeds.push(self.commutator(a as usize, b as usize));
            }
        }
        self.normal_closure(&seeds)
    }

    /// lcm of all element orders.
    pub fn exponent(&self) -> u64 {
        let mut e = 1u64;
        for g in 0..self.order() {
            e = lcm(e, self.element_order(g));
        }
        e
    }

    pub fn is_abelian(&self) -> bool {
        let gens = self.generators();
        gens.iter().all(|&a| {
            gens.iter().all(|&b| self.mul(a as usize, b as usize) == self.mul(b as usize, a as usize))
        })
    }

    /// Lower central series G = g1 >= g2 >= ... down to the point it
    /// stabilizes; for nilpotent groups the last entry is trivial.
    pub fn lower_central_series(&self) -> Vec<Subgroup> {
        let mut series = vec![self.full_subgroup()];
        loop {
            let cur = series.last().unwrap();
            if cur.order() == 1 {
                break;
            }
            let cur_gens: Vec<usize> = if cur.order() <= 4096 {
                cur.members().iter().map(|&x| x as usize).collect()
            } else {
                self.generators().iter().map(|&x| x as usize).collect()
            };
            let mut seeds = Vec::new();
            for &x in &cur_gens {
                for &g in self.generators() {
                    seeds.push(self.commutator(x, g as usize));
                }
            }
            let next = self.normal_closure(&seeds);
            if next.order() == cur.order() {
                break;
            }
            series.push(next);
        }
        series
    }

    /// Frattini subgroup. Small groups go through the maximal-subgroup
    /// intersection; p-groups above the enumeration bound use
    /// Phi = [G,G] G^p.
    pub fn frattini_subgroup(&self) -> Result<Subgroup, GroupError> {
        if self.order() <= enumerate::MAXIMAL_ENUM_BOUND {
            let maxes = maximal_subgroups(self)?;
            let mut acc: Vec<u32> = (0..self.order() as u32).collect();
            for m in &maxes {
                acc = sorted_intersect(&acc, m.members());
            }
            Ok(Subgroup { parent: self.clone(), members: Arc::new(acc) })
        } else if let Some((p, _)) = prime_power(self.order()) {
            Ok(self.frattini_p_group(p))
        } else {
            Err(GroupError::OrderBound {
                order: self.order(),
                bound: enumerate::MAXIMAL_ENUM_BOUND,
                what: "Frattini of a non-p-group",
            })
        }
    }

    /// Phi(G) = [G,G] G^p for p-groups.
    pub(crate) fn frattini_p_group(&self, p: u64) -> Subgroup {
        let mut seeds: HashSet<usize> = HashSet::new();
        for &a in self.generators() {
            for &b in self.generators() {
                seeds.insert(self.commutator(a as usize, b as usize));
            }
        }
        for g in 0..self.order() {
            seeds.insert(self.pow(g, p));
        }
        let seeds: Vec<usize> = seeds.into_iter().collect();
        self.normal_closure(&seeds)
    }

    /// Full structural profile.
    pub fn structure_profile(&self) -> Result<GroupProfile, GroupError> {
        if self.order() > (1 << 15) {
            return Err(GroupError::OrderBound { order: self.order(), bound: 1 << 15, what: "structure_profile" });
        }
        let center = self.center();
        let derived = self.derived_subgroup();
        let frattini = self.frattini_subgroup()?;
        let exponent = self.exponent();
        let series = self.lower_central_series();
        let nilpotency_class =
            if series.last().map(|s| s.order()) == Some(1) { Some(series.len() - 1) } else { None };
        let is_special = center.members() == derived.members() && derived.members() == frattini.members();
        Ok(GroupProfile {
            center,
            derived,
            frattini,
            exponent,
            nilpotency_class,
            lower_central_series: series,
            is_special,
        })
    }

    /// Quotient by a normal subgroup, with the canonical projection. Coset
    /// representatives are minimal element indices, sorted.
    pub fn quotient(&self, n: &Subgroup) -> Result<(FiniteGroup, Vec<u32>), GroupError> {
        assert!(n.parent.same_group(self), "subgroup of a different group");
        if let Some((a, g)) = n.normality_witness() {
            return Err(GroupError::NotNormal(a, g));
        }
        let order = self.order();
        let mut coset_of = vec![u32::MAX; order];
        let mut reps: Vec<u32> = Vec::new();
        for g in 0..order {
            if coset_of[g] != u32::MAX {
                continue;
            }
            let idx = reps.len() as u32;
            reps.push(g as u32);
            for &h in n.members().iter() {
                coset_of[self.mul(g, h as usize)] = idx;
            }
        }
        let q_order = reps.len();
        let parent = self.clone();
        let reps_arc = reps.clone();
        let coset_arc = coset_of.clone();
        let law = move |a: usize, b: usize| -> usize {
            coset_arc[parent.mul(reps_arc[a] as usize, reps_arc[b] as usize)] as u32 as usize
        };
        let q = if q_order <= 1024 {
            let mut table = vec![0u32; q_order * q_order];
            for a in 0..q_order {
                for b in 0..q_order {
                    table[a * q_order + b] = law(a, b) as u32;
                }
            }
            FiniteGroup::from_parts(q_order, MulImpl::Table(table), format!("{}/N", self.inner.name), None)?
        } else {
            FiniteGroup::from_parts(
                q_order,
                MulImpl::Law(Box::new(law)),
                format!("{}/N", self.inner.name),
                None,
            )?
        };
        Ok((q, coset_of))
    }
}

impl Subgroup {
    pub fn parent(&self) -> &FiniteGroup {
        &self.parent
    }

    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.members.binary_search(&(g as u32)).is_ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    /// None when normal; otherwise a witness (member, conjugator).
    pub fn normality_witness(&self) -> Option<(usize, usize)> {
        let g = &self.parent;
        for &a in self.members.iter() {
            for &w in g.generators() {
                if !self.contains(g.conjugate(a as usize, w as usize)) {
                    return Some((a as usize, w as usize));
                }
            }
        }
        None
    }

    pub fn is_normal(&self) -> bool {
        self.normality_witness().is_none()
    }

    pub fn is_abelian(&self) -> bool {
        self.members.iter().all(|&a| {
            self.members
                .iter()
                .all(|&b| self.parent.mul(a as usize, b as usize) == self.parent.mul(b as usize, a as usize))
        })
    }

    pub fn exponent(&self) -> u64 {
        self.members.iter().fold(1u64, |e, &g| lcm(e, self.parent.element_order(g as usize)))
    }

    pub fn is_elementary_abelian(&self) -> bool {
        if self.order() == 1 {
            return true;
        }
        let e = self.exponent();
        prime_power(self.order()).map(|(p, _)| p) == Some(e) && self.is_abelian()
    }

    pub fn intersect(&self, other: &Subgroup) -> Subgroup {
        Subgroup {
            parent: self.parent.clone(),
            members: Arc::new(sorted_intersect(&self.members, &other.members)),
        }
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        sorted_is_subset(&self.members, &other.members)
    }

    /// The product set AB = {ab}; a subgroup only when one factor
    /// normalizes the other, so the result is a plain sorted set.
    pub fn product_set(&self, other: &Subgroup) -> Vec<u32> {
        let g = &self.parent;
        let mut out: Vec<u32> = Vec::with_capacity(self.order() * other.order());
        for &a in self.members.iter() {
            for &b in other.members.iter() {
                out.push(g.mul(a as usize, b as usize) as u32);
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn conjugate_by(&self, g: usize) -> Subgroup {
        let mut members: Vec<u32> =
            self.members.iter().map(|&a| self.parent.conjugate(a as usize, g) as u32).collect();
        members.sort_unstable();
        Subgroup { parent: self.parent.clone(), members: Arc::new(members) }
    }

    /// Membership bitmask over the parent order.
    pub fn mask(&self) -> Vec<bool> {
        let mut m = vec![false; self.parent.order()];
        for &x in self.members.iter() {
            m[x as usize] = true;
        }
        m
    }

    /// Builds the abstract group on this subgroup's elements (re-indexed).
    pub fn as_group(&self) -> Result<FiniteGroup, GroupError> {
        let g = self.parent.clone();
        let members = self.members.clone();
        let index_of: std::collections::HashMap<u32, usize> =
            members.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let m2 = members.clone();
        FiniteGroup::from_law(members.len(), move |a, b| {
            index_of[&(g.mul(m2[a] as usize, m2[b] as usize) as u32)]
        })
    }
}

/// Decomposes n as (p, k) with n = p^k, if possible.
pub fn prime_power(n: usize) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let mut p = 2usize;
    while p * p <= n {
        if n % p == 0 {
            let mut m = n;
            let mut k = 0;
            while m % p == 0 {
                m /= p;
                k += 1;
            }
            return if m == 1 { Some((p as u64, k)) } else { None };
        }
        p += 1;
    }
    Some((n as u64, 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_law_gives_z5() {
        let g = FiniteGroup::from_law(5, |a, b| (a + b) % 5).unwrap();
        assert_eq!(g.order(), 5);
        assert!(g.is_abelian());
        assert_eq!(g.element_order(1), 5);
        assert_eq!(g.inv(2), 3);
    }

    #[test]
    fn xor_law_gives_elementary_abelian_8() {
        let g = FiniteGroup::from_law(8, |a, b| a ^ b).unwrap();
        assert_eq!(g.order(), 8);
        assert!(g.is_abelian());
        assert_eq!(g.exponent(), 2);
    }

    #[test]
    fn non_associative_magma_rejected() {
        // A magma with identity 0 but a*(b*c) != (a*b)*c somewhere.
        let table = vec![vec![0, 1, 2], vec![1, 2, 2], vec![2, 2, 1]];
        let err = FiniteGroup::from_table(table).unwrap_err();
        assert!(matches!(err, GroupError::NotAssociative(..) | GroupError::NoInverse(_)));
    }

    #[test]
    fn identity_translated_to_zero() {
        // Z3 with identity at index 2: law(a,b) over relabeled symbols.
        // Map: 0 <-> 2 of the usual Z3 = {0,1,2} addition.
        let relabel = [2usize, 1, 0];
        let g = FiniteGroup::from_law(3, move |a, b| relabel[(relabel[a] + relabel[b]) % 3]).unwrap();
        assert_eq!(g.mul(0, 1), 1);
        assert_eq!(g.order(), 3);
        assert_eq!(g.element_order(1), 3);
    }

    #[test]
    fn subgroup_generate_identity_only() {
        let g = FiniteGroup::from_law(6, |a, b| (a + b) % 6).unwrap();
        let t = g.subgroup_generate(&[0]);
        assert_eq!(t.members(), &[0]);
        let h = g.subgroup_generate(&[2]);
        assert_eq!(h.members(), &[0, 2, 4]);
        assert!(h.is_normal());
    }

    #[test]
    fn quotient_of_z6_by_z3() {
        let g = FiniteGroup::from_law(6, |a, b| (a + b) % 6).unwrap();
        let n = g.subgroup_generate(&[2]);
        let (q, proj) = g.quotient(&n).unwrap();
        assert_eq!(q.order(), 2);
        // projection is a homomorphism
        for a in 0..6 {
            for b in 0..6 {
                assert_eq!(proj[g.mul(a, b)] as usize, q.mul(proj[a] as usize, proj[b] as usize));
            }
        }
    }

    #[test]
    fn heisenberg_quotients_by_center() {
        let g = models::heisenberg(1, 3).unwrap();
        let (q, proj) = g.quotient(&g.center()).unwrap();
        assert_eq!(q.order(), 9);
        assert!(q.is_abelian());
        assert_eq!(q.exponent(), 3);
        for a in 0..g.order() {
            for b in 0..g.order() {
                assert_eq!(proj[g.mul(a, b)] as usize, q.mul(proj[a] as usize, proj[b] as usize));
            }
        }
        let h = models::heisenberg(2, 2).unwrap();
        let (q2, _) = h.quotient(&h.center()).unwrap();
        assert_eq!(q2.order(), 16);
        assert!(q2.is_abelian());
    }

    #[test]
    fn s3_profile() {
        // S3 as permutation composition on 6 indexed elements.
        let perms: Vec<[usize; 3]> =
            vec![[0, 1, 2], [1, 2, 0], [2, 0, 1], [1, 0, 2], [0, 2, 1], [2, 1, 0]];
        let compose = move |a: usize, b: usize| {
            let pa = perms[a];
            let pb = perms[b];
            let c = [pb[pa[0]], pb[pa[1]], pb[pa[2]]];
            perms.iter().position(|p| *p == c).unwrap()
        };
        let g = FiniteGroup::from_law(6, compose).unwrap();
        assert!(!g.is_abelian());
        assert_eq!(g.center().order(), 1);
        assert_eq!(g.derived_subgroup().order(), 3);
        assert_eq!(g.exponent(), 6);
        let profile = g.structure_profile().unwrap();
        assert_eq!(profile.nilpotency_class, None); // S3 is not nilpotent
        assert_eq!(profile.frattini.order(), 1);
    }

    #[test]
    fn prime_power_decomposition() {
        assert_eq!(prime_power(32), Some((2, 5)));
        assert_eq!(prime_power(243), Some((3, 5)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(1), None);
    }
}
