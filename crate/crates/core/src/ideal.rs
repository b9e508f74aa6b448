//! Ideals of a table ring: closure generation, lattice enumeration,
//! prime/maximal classification, annihilators, radicals, quotients.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hom::RingHom;
use crate::limits::Limits;
use crate::ring::{FiniteRing, RingKind};

/// An ideal, stored as its full member set.
#[derive(Debug, Clone)]
pub struct Ideal {
    ring: Arc<FiniteRing>,
    members: BTreeSet<usize>,
}

impl PartialEq for Ideal {
    fn eq(&self, other: &Self) -> bool {
        FiniteRing::same(&self.ring, &other.ring) && self.members == other.members
    }
}
impl Eq for Ideal {}

impl Ideal {
    /// Wraps a member set, verifying the ideal axioms (0 in I, closure under
    /// addition and negation, absorption of ring multiples).
    pub fn from_members(ring: &Arc<FiniteRing>, members: BTreeSet<usize>) -> Result<Ideal> {
        if let Some(&bad) = members.iter().find(|&&m| m >= ring.order()) {
            return Err(Error::Invalid(format!("member {bad} out of range")));
        }
        if !members.contains(&ring.zero()) {
            return Err(Error::Axiom("an ideal contains 0".into()));
        }
        for &a in &members {
            if !members.contains(&ring.neg(a)) {
                return Err(Error::Axiom(format!("ideal not closed under negation at {a}")));
            }
            for &b in &members {
                if !members.contains(&ring.add(a, b)) {
                    return Err(Error::Axiom(format!(
                        "ideal not closed under addition at ({a}, {b})"
                    )));
                }
            }
            for r in ring.elements() {
                if !members.contains(&ring.mul(r, a)) {
                    return Err(Error::Axiom(format!(
                        "ideal does not absorb multiplication at ({r}, {a})"
                    )));
                }
            }
        }
        Ok(Ideal {
            ring: Arc::clone(ring),
            members,
        })
    }

    pub fn ring(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    pub fn members(&self) -> &BTreeSet<usize> {
        &self.members
    }

    pub fn contains(&self, a: usize) -> bool {
        self.members.contains(&a)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false // an ideal always contains 0
    }

    /// Proper means it omits 1 (equivalently, is not the whole ring).
    pub fn is_proper(&self) -> bool {
        !self.members.contains(&self.ring.one())
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.members.len() == 1
    }

    /// Set intersection of two ideals of the same ring (again an ideal).
    pub fn intersect(&self, other: &Ideal) -> Result<Ideal> {
        if !FiniteRing::same(&self.ring, &other.ring) {
            return Err(Error::Invalid("ideals of different rings".into()));
        }
        let members = self.members.intersection(&other.members).copied().collect();
        Ideal::from_members(&self.ring, members)
    }

    /// Ideal sum, i.e. the ideal generated by the union.
    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        if !FiniteRing::same(&self.ring, &other.ring) {
            return Err(Error::Invalid("ideals of different rings".into()));
        }
        let gens: Vec<usize> = self.members.union(&other.members).copied().collect();
        ideal_from_generators(&self.ring, &gens)
    }
}

/// Smallest ideal containing the given elements.
pub fn ideal_from_generators(ring: &Arc<FiniteRing>, generators: &[usize]) -> Result<Ideal> {
    if let Some(&bad) = generators.iter().find(|&&g| g >= ring.order()) {
        return Err(Error::Invalid(format!("generator {bad} out of range")));
    }
    let mut members: BTreeSet<usize> = BTreeSet::new();
    members.insert(ring.zero());
    let mut frontier: Vec<usize> = Vec::new();
    for &g in generators {
        if members.insert(g) {
            frontier.push(g);
        }
    }
    // close under ring multiples first (absorption), then under sums
    while let Some(a) = frontier.pop() {
        for r in ring.elements() {
            let m = ring.mul(r, a);
            if members.insert(m) {
                frontier.push(m);
            }
        }
        let snapshot: Vec<usize> = members.iter().copied().collect();
        for &b in &snapshot {
            let s = ring.add(a, b);
            if members.insert(s) {
                frontier.push(s);
            }
        }
    }
    // a final sweep: sums of established members may still be missing
    loop {
        let snapshot: Vec<usize> = members.iter().copied().collect();
        let mut grew = false;
        for &a in &snapshot {
            for &b in &snapshot {
                if members.insert(ring.add(a, b)) {
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    Ideal::from_members(ring, members)
}

/// All ideals, found by saturating the lattice from the zero ideal upward
/// (adjoining one new element at a time and closing).
///
/// The result is sorted by (size, members), so the zero ideal comes first
/// and the unit ideal last. Aborts with a capacity error if the count
/// exceeds `limits.max_ideals`.
pub fn enumerate_ideals(ring: &Arc<FiniteRing>, limits: &Limits) -> Result<Vec<Ideal>> {
    let zero = ideal_from_generators(ring, &[])?;
    let mut seen: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    seen.insert(zero.members().clone());
    let mut queue: Vec<Ideal> = vec![zero];
    let mut idx = 0;
    while idx < queue.len() {
        let current = queue[idx].clone();
        idx += 1;
        for a in ring.elements() {
            if current.contains(a) {
                continue;
            }
            let mut gens: Vec<usize> = current.members().iter().copied().collect();
            gens.push(a);
            let bigger = ideal_from_generators(ring, &gens)?;
            if seen.insert(bigger.members().clone()) {
                if seen.len() > limits.max_ideals {
                    return Err(Error::Capacity(format!(
                        "more than {} ideals",
                        limits.max_ideals
                    )));
                }
                queue.push(bigger);
            }
        }
    }
    queue.sort_by(|a, b| {
        (a.len(), a.members().iter().collect::<Vec<_>>())
            .cmp(&(b.len(), b.members().iter().collect::<Vec<_>>()))
    });
    Ok(queue)
}

/// The verdicts of `classify_ideal`, with witnesses where they exist.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealClassification {
    pub is_proper: bool,
    pub is_prime: bool,
    pub is_maximal: bool,
    /// A pair (a, b) with a*b in the ideal but neither factor in it.
    pub prime_witness: Option<(usize, usize)>,
}

/// Classifies an ideal as proper / prime / maximal.
///
/// Primality is an exhaustive pair scan. Maximality is a containment scan
/// against the full ideal lattice (the quotient-is-a-field criterion is used
/// as an independent cross-check in the test suite, not here).
pub fn classify_ideal(
    ring: &Arc<FiniteRing>,
    ideal: &Ideal,
    limits: &Limits,
) -> Result<IdealClassification> {
    let all = enumerate_ideals(ring, limits)?;
    Ok(classify_with(ring, &all, ideal))
}

pub(crate) fn classify_with(
    ring: &Arc<FiniteRing>,
    all_ideals: &[Ideal],
    ideal: &Ideal,
) -> IdealClassification {
    let is_proper = ideal.is_proper();

    let mut prime_witness = None;
    if is_proper {
        'scan: for a in ring.elements() {
            if ideal.contains(a) {
                continue;
            }
            for b in ring.elements() {
                if !ideal.contains(b) && ideal.contains(ring.mul(a, b)) {
                    prime_witness = Some((a, b));
                    break 'scan;
                }
            }
        }
    }
    let is_prime = is_proper && prime_witness.is_none();

    let is_maximal = is_proper
        && !all_ideals.iter().any(|j| {
            j.is_proper()
                && j.len() > ideal.len()
                && ideal.members().is_subset(j.members())
        });

    IdealClassification {
        is_proper,
        is_prime,
        is_maximal,
        prime_witness,
    }
}

/// The annihilator ideal of an element: everything that multiplies it to 0.
pub fn annihilator(ring: &Arc<FiniteRing>, a: usize) -> Result<Ideal> {
    if a >= ring.order() {
        return Err(Error::Invalid(format!("element {a} out of range")));
    }
    let members = ring
        .elements()
        .filter(|&h| ring.mul(h, a) == ring.zero())
        .collect();
    Ideal::from_members(ring, members)
}

/// The radical of an ideal: elements with some power inside it.
///
/// A power scan up to the ring order suffices, because the powers of an
/// element repeat within at most `order` steps.
pub fn radical(ring: &Arc<FiniteRing>, ideal: &Ideal) -> Result<Ideal> {
    if !FiniteRing::same(ideal.ring(), ring) {
        return Err(Error::Invalid("ideal of a different ring".into()));
    }
    let mut members = BTreeSet::new();
    for a in ring.elements() {
        let mut acc = ring.one();
        for _ in 1..=ring.order() {
            acc = ring.mul(acc, a);
            if ideal.contains(acc) {
                members.insert(a);
                break;
            }
        }
    }
    Ideal::from_members(ring, members)
}

/// Quotient ring by an ideal, with the projection homomorphism.
///
/// Cosets are represented by their least element; quotienting by the unit
/// ideal gives the zero ring.
pub fn quotient(
    ring: &Arc<FiniteRing>,
    ideal: &Ideal,
    limits: &Limits,
) -> Result<(Arc<FiniteRing>, RingHom)> {
    if !FiniteRing::same(ideal.ring(), ring) {
        return Err(Error::Invalid("ideal of a different ring".into()));
    }
    // map every element to the least member of its coset
    let mut coset_rep = vec![usize::MAX; ring.order()];
    for a in ring.elements() {
        if coset_rep[a] != usize::MAX {
            continue;
        }
        let coset: BTreeSet<usize> = ideal.members().iter().map(|&i| ring.add(a, i)).collect();
        let rep = *coset.iter().next().unwrap();
        for &c in &coset {
            coset_rep[c] = rep;
        }
    }
    let reps: Vec<usize> = {
        let set: BTreeSet<usize> = coset_rep.iter().copied().collect();
        set.into_iter().collect()
    };
    let index_of: BTreeMap<usize, usize> = reps.iter().enumerate().map(|(i, &r)| (r, i)).collect();

    let order = reps.len();
    let mut add = Vec::with_capacity(order * order);
    let mut mul = Vec::with_capacity(order * order);
    for &a in &reps {
        for &b in &reps {
            add.push(index_of[&coset_rep[ring.add(a, b)]]);
            mul.push(index_of[&coset_rep[ring.mul(a, b)]]);
        }
    }
    let zero = index_of[&coset_rep[ring.zero()]];
    let one = index_of[&coset_rep[ring.one()]];
    let members: Vec<String> = ideal.members().iter().map(|m| m.to_string()).collect();
    let presentation = format!("({})/({})", ring.presentation(), members.join(","));
    let q = FiniteRing::from_tables_kind(
        order,
        add,
        mul,
        zero,
        one,
        presentation,
        RingKind::Other,
        vec![],
        limits,
    )?;
    let table: Vec<usize> = ring.elements().map(|a| index_of[&coset_rep[a]]).collect();
    let projection = RingHom::new(ring, &q, table)?;
    Ok((q, projection))
}
