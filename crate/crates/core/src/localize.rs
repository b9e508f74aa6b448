//! Localization of a finite ring at a multiplicative set.
//!
//! Elements are equivalence classes of pairs (numerator, denominator) with
//! the witnessed relation (a, t) ~ (b, u) iff v·(a·u - b·t) = 0 for some v
//! in the multiplicative set. If the set reaches 0, the localization
//! degenerates to the zero ring — legal, not an error.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hom::RingHom;
use crate::ideal::Ideal;
use crate::limits::Limits;
use crate::ring::FiniteRing;

/// A localization, keeping the pair bookkeeping so callers can reason about
/// fractions a/t and not just abstract classes.
#[derive(Debug, Clone)]
pub struct LocalizedRing {
    base: Arc<FiniteRing>,
    /// The saturated (multiplicatively closed, 1-containing) denominator set.
    denominators: BTreeSet<usize>,
    result: Arc<FiniteRing>,
    /// The canonical map a -> a/1.
    map: RingHom,
    /// For each result element, every pair (a, t) in its class.
    classes: Vec<Vec<(usize, usize)>>,
    pair_class: BTreeMap<(usize, usize), usize>,
}

impl LocalizedRing {
    pub fn base(&self) -> &Arc<FiniteRing> {
        &self.base
    }

    pub fn denominators(&self) -> &BTreeSet<usize> {
        &self.denominators
    }

    pub fn ring(&self) -> &Arc<FiniteRing> {
        &self.result
    }

    pub fn map(&self) -> &RingHom {
        &self.map
    }

    /// The class of the fraction a/t (requires `t` in the denominator set).
    pub fn class_of_pair(&self, numerator: usize, denominator: usize) -> Option<usize> {
        self.pair_class.get(&(numerator, denominator)).copied()
    }

    pub fn pairs_of_class(&self, class: usize) -> &[(usize, usize)] {
        &self.classes[class]
    }

    /// The unique homomorphism g with g ∘ (canonical map) = psi, for psi
    /// inverting every denominator. Built from the forced formula
    /// g(a/t) = psi(a) · psi(t)^{-1} and validated: well-definedness across
    /// every pair of every class, the homomorphism laws, and the
    /// factorization identity.
    pub fn induced_hom(&self, psi: &RingHom) -> Result<RingHom> {
        if !FiniteRing::same(psi.source(), &self.base) {
            return Err(Error::Invalid("psi must start at the base ring".into()));
        }
        let t_ring = psi.target();
        let mut inverses = BTreeMap::new();
        for &t in &self.denominators {
            match t_ring.inverse(psi.apply(t)) {
                Some(inv) => {
                    inverses.insert(t, inv);
                }
                None => {
                    return Err(Error::Invalid(format!(
                        "psi({t}) is not a unit, so psi does not factor through this localization"
                    )))
                }
            }
        }
        let mut table = vec![usize::MAX; self.result.order()];
        for (class, pairs) in self.classes.iter().enumerate() {
            for &(a, t) in pairs {
                let value = t_ring.mul(psi.apply(a), inverses[&t]);
                if table[class] == usize::MAX {
                    table[class] = value;
                } else if table[class] != value {
                    return Err(Error::Verification(format!(
                        "induced map ill-defined on class {class}: pair ({a}, {t}) gives {value}, expected {}",
                        table[class]
                    )));
                }
            }
        }
        let g = RingHom::new(&self.result, t_ring, table)?;
        let composite = self.map.then(&g)?;
        if composite.image_table() != psi.image_table() {
            return Err(Error::Verification(
                "induced map does not reproduce psi through the canonical map".into(),
            ));
        }
        Ok(g)
    }
}

/// Localizes at the multiplicative closure of the given elements.
pub fn localize(
    ring: &Arc<FiniteRing>,
    generators: &[usize],
    limits: &Limits,
) -> Result<LocalizedRing> {
    if let Some(&bad) = generators.iter().find(|&&g| g >= ring.order()) {
        return Err(Error::Invalid(format!("generator {bad} out of range")));
    }

    // saturate: 1 plus all products of generators
    let mut denominators: BTreeSet<usize> = BTreeSet::new();
    denominators.insert(ring.one());
    let mut frontier: Vec<usize> = Vec::new();
    for &g in generators {
        if denominators.insert(g) {
            frontier.push(g);
        }
    }
    while let Some(t) = frontier.pop() {
        let snapshot: Vec<usize> = denominators.iter().copied().collect();
        for &u in &snapshot {
            let p = ring.mul(t, u);
            if denominators.insert(p) {
                frontier.push(p);
            }
        }
    }

    let pres_set: Vec<String> = denominators.iter().map(|t| t.to_string()).collect();
    let presentation = format!("loc({}; {{{}}})", ring.presentation(), pres_set.join(","));

    if denominators.contains(&ring.zero()) {
        // inverting 0 collapses everything
        let result = FiniteRing::from_tables(1, vec![0], vec![0], 0, 0, presentation, limits)?;
        let map = RingHom::new(ring, &result, vec![0; ring.order()])?;
        let mut pair_class = BTreeMap::new();
        let mut class = Vec::new();
        for a in ring.elements() {
            for &t in &denominators {
                pair_class.insert((a, t), 0);
                class.push((a, t));
            }
        }
        return Ok(LocalizedRing {
            base: Arc::clone(ring),
            denominators,
            result,
            map,
            classes: vec![class],
            pair_class,
        });
    }

    let pairs: Vec<(usize, usize)> = ring
        .elements()
        .flat_map(|a| denominators.iter().map(move |&t| (a, t)))
        .collect();
    // torsion[x] ⇔ some denominator kills x; (a,t) ~ (b,u) ⇔ torsion[au - bt]
    let torsion: Vec<bool> = ring
        .elements()
        .map(|x| {
            denominators
                .iter()
                .any(|&v| ring.mul(v, x) == ring.zero())
        })
        .collect();
    let equivalent = |&(a, t): &(usize, usize), &(b, u): &(usize, usize)| -> bool {
        torsion[ring.sub(ring.mul(a, u), ring.mul(b, t))]
    };

    // union-find over pairs; the witnessed relation is transitive, so the
    // generated partition is the relation itself
    let mut parent: Vec<usize> = (0..pairs.len()).collect();
    fn find(parent: &mut Vec<usize>, mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..pairs.len() {
        for j in (i + 1)..pairs.len() {
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri != rj && equivalent(&pairs[i], &pairs[j]) {
                parent[rj] = ri;
            }
        }
    }

    // canonical class order: by least pair
    let mut root_to_pairs: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for i in 0..pairs.len() {
        let r = find(&mut parent, i);
        root_to_pairs.entry(r).or_default().push(pairs[i]);
    }
    let mut classes: Vec<Vec<(usize, usize)>> = root_to_pairs.into_values().collect();
    for c in classes.iter_mut() {
        c.sort();
    }
    classes.sort_by_key(|c| c[0]);

    let mut pair_class = BTreeMap::new();
    for (ci, c) in classes.iter().enumerate() {
        for &p in c {
            pair_class.insert(p, ci);
        }
    }

    let class_of = |a: usize, t: usize| -> usize { pair_class[&(a, t)] };
    let order = classes.len();
    let mut add = Vec::with_capacity(order * order);
    let mut mul = Vec::with_capacity(order * order);
    for ci in 0..order {
        let (a, t) = classes[ci][0];
        for cj in 0..order {
            let (b, u) = classes[cj][0];
            let num = ring.add(ring.mul(a, u), ring.mul(b, t));
            let den = ring.mul(t, u);
            add.push(class_of(num, den));
            mul.push(class_of(ring.mul(a, b), den));
        }
    }
    let zero = class_of(ring.zero(), ring.one());
    let one = class_of(ring.one(), ring.one());
    let result = FiniteRing::from_tables(order, add, mul, zero, one, presentation, limits)?;

    let map_table: Vec<usize> = ring.elements().map(|a| class_of(a, ring.one())).collect();
    let map = RingHom::new(ring, &result, map_table)?;

    // every denominator must become a unit
    for &t in &denominators {
        let image = map.apply(t);
        if result.inverse(image).is_none() {
            return Err(Error::Verification(format!(
                "denominator {t} failed to become a unit in the localization"
            )));
        }
    }

    Ok(LocalizedRing {
        base: Arc::clone(ring),
        denominators,
        result,
        map,
        classes,
        pair_class,
    })
}

fn is_prime_quick(ring: &FiniteRing, ideal: &Ideal) -> bool {
    if !ideal.is_proper() {
        return false;
    }
    for a in ring.elements() {
        if ideal.contains(a) {
            continue;
        }
        for b in ring.elements() {
            if !ideal.contains(b) && ideal.contains(ring.mul(a, b)) {
                return false;
            }
        }
    }
    true
}

/// Localization at a prime: denominators are the prime's complement.
pub fn localize_at_prime(
    ring: &Arc<FiniteRing>,
    prime: &Ideal,
    limits: &Limits,
) -> Result<LocalizedRing> {
    if !FiniteRing::same(prime.ring(), ring) {
        return Err(Error::Invalid("ideal of a different ring".into()));
    }
    if !is_prime_quick(ring, prime) {
        return Err(Error::Invalid(
            "localization at an ideal requires a prime ideal".into(),
        ));
    }
    let complement: Vec<usize> = ring.elements().filter(|e| !prime.contains(*e)).collect();
    localize(ring, &complement, limits)
}

/// Localization at the powers of a single element.
pub fn localize_at_element(
    ring: &Arc<FiniteRing>,
    f: usize,
    limits: &Limits,
) -> Result<LocalizedRing> {
    if f >= ring.order() {
        return Err(Error::Invalid(format!("element {f} out of range")));
    }
    localize(ring, &[f], limits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hom::{enumerate_homs, find_isomorphism, hom_from_generator_images};
    use crate::ideal::ideal_from_generators;
    use crate::ring::zmod;

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn powers_of_two_in_z12() {
        let r = zmod(12, &lim()).unwrap();
        let loc = localize_at_element(&r, 2, &lim()).unwrap();
        assert_eq!(loc.denominators(), &BTreeSet::from([1, 2, 4, 8]));
        let z3 = zmod(3, &lim()).unwrap();
        assert!(find_isomorphism(loc.ring(), &z3, &lim()).unwrap().is_some());
    }

    #[test]
    fn inverting_a_nilpotent_collapses() {
        let r = zmod(12, &lim()).unwrap();
        let loc = localize_at_element(&r, 6, &lim()).unwrap();
        assert!(loc.ring().is_zero_ring());
        assert!(loc.denominators().contains(&0));
    }

    #[test]
    fn localization_at_primes_of_z12() {
        let r = zmod(12, &lim()).unwrap();
        let p2 = ideal_from_generators(&r, &[2]).unwrap();
        let at2 = localize_at_prime(&r, &p2, &lim()).unwrap();
        assert!(find_isomorphism(at2.ring(), &zmod(4, &lim()).unwrap(), &lim())
            .unwrap()
            .is_some());

        let p3 = ideal_from_generators(&r, &[3]).unwrap();
        let at3 = localize_at_prime(&r, &p3, &lim()).unwrap();
        assert!(find_isomorphism(at3.ring(), &zmod(3, &lim()).unwrap(), &lim())
            .unwrap()
            .is_some());
    }

    #[test]
    fn non_prime_rejected() {
        let r = zmod(12, &lim()).unwrap();
        let four = ideal_from_generators(&r, &[4]).unwrap();
        assert!(localize_at_prime(&r, &four, &lim()).is_err());
    }

    #[test]
    fn universal_property_via_induced_and_exhaustive_search() {
        let r = zmod(12, &lim()).unwrap();
        let loc = localize_at_element(&r, 2, &lim()).unwrap();
        // psi: Z/12 -> Z/3 inverts 2, so it must factor uniquely
        let z3 = zmod(3, &lim()).unwrap();
        let psi = hom_from_generator_images(&r, &z3, &[]).unwrap();
        let g = loc.induced_hom(&psi).unwrap();
        assert_eq!(loc.map().then(&g).unwrap().image_table(), psi.image_table());

        // uniqueness, the brute-force way: every hom out of the localization
        // that reproduces psi equals g
        let all = enumerate_homs(loc.ring(), &z3, &lim()).unwrap();
        let matching: Vec<_> = all
            .iter()
            .filter(|h| loc.map().then(h).unwrap().image_table() == psi.image_table())
            .collect();
        assert_eq!(matching.len(), 1);
        assert_eq!(matching[0].image_table(), g.image_table());
    }

    #[test]
    fn fraction_classes_are_reachable() {
        let r = zmod(12, &lim()).unwrap();
        let loc = localize_at_element(&r, 2, &lim()).unwrap();
        // 3/1 = 0 in the localization: witness v = 4 kills 3
        assert_eq!(
            loc.class_of_pair(3, 1).unwrap(),
            loc.ring().zero()
        );
    }
}
