//! Unital ring homomorphisms as total image tables, plus exhaustive
//! homomorphism and isomorphism searches.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ideal::Ideal;
use crate::limits::Limits;
use crate::ring::FiniteRing;

/// A unital homomorphism between two table rings.
///
/// The map is stored as `image[source_element]`; construction checks the
/// additive and multiplicative laws over every pair and the preservation of
/// 0 and 1, so a `RingHom` value is always law-abiding.
#[derive(Debug, Clone)]
pub struct RingHom {
    source: Arc<FiniteRing>,
    target: Arc<FiniteRing>,
    image: Vec<usize>,
}

impl RingHom {
    pub fn new(
        source: &Arc<FiniteRing>,
        target: &Arc<FiniteRing>,
        image: Vec<usize>,
    ) -> Result<RingHom> {
        if image.len() != source.order() {
            return Err(Error::Invalid(format!(
                "image table has {} entries for a source of order {}",
                image.len(),
                source.order()
            )));
        }
        if let Some(&bad) = image.iter().find(|&&v| v >= target.order()) {
            return Err(Error::Invalid(format!(
                "image {bad} is out of range for a target of order {}",
                target.order()
            )));
        }
        if let Some((law, a, b)) = hom_law_violation(source, target, &image) {
            return Err(Error::Axiom(format!(
                "{law} law fails at ({a}, {b}): not a ring homomorphism"
            )));
        }
        Ok(RingHom {
            source: Arc::clone(source),
            target: Arc::clone(target),
            image,
        })
    }

    pub fn identity(ring: &Arc<FiniteRing>) -> RingHom {
        RingHom {
            source: Arc::clone(ring),
            target: Arc::clone(ring),
            image: ring.elements().collect(),
        }
    }

    pub fn source(&self) -> &Arc<FiniteRing> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteRing> {
        &self.target
    }

    pub fn apply(&self, a: usize) -> usize {
        self.image[a]
    }

    pub fn image_table(&self) -> &[usize] {
        &self.image
    }

    /// Composition `other . self` (apply `self` first).
    pub fn then(&self, other: &RingHom) -> Result<RingHom> {
        if !FiniteRing::same(&self.target, &other.source) {
            return Err(Error::Invalid(
                "composition requires the first target to be the second source".into(),
            ));
        }
        let image = self.image.iter().map(|&v| other.apply(v)).collect();
        Ok(RingHom {
            source: Arc::clone(&self.source),
            target: Arc::clone(&other.target),
            image,
        })
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.order()];
        for &v in &self.image {
            if seen[v] {
                return false;
            }
            seen[v] = true;
        }
        true
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.target.order()];
        for &v in &self.image {
            seen[v] = true;
        }
        seen.into_iter().all(|b| b)
    }

    pub fn is_bijective(&self) -> bool {
        self.source.order() == self.target.order() && self.is_injective()
    }

    pub fn image_set(&self) -> BTreeSet<usize> {
        self.image.iter().copied().collect()
    }

    /// Elements mapping to zero, packaged as an ideal of the source.
    pub fn kernel(&self) -> Result<Ideal> {
        let members = self
            .source
            .elements()
            .filter(|&a| self.apply(a) == self.target.zero())
            .collect();
        Ideal::from_members(&self.source, members)
    }

    /// Preimage of an ideal of the target; always an ideal of the source.
    pub fn preimage_ideal(&self, ideal: &Ideal) -> Result<Ideal> {
        if !FiniteRing::same(ideal.ring(), &self.target) {
            return Err(Error::Invalid(
                "preimage requires an ideal of the homomorphism's target".into(),
            ));
        }
        let members = self
            .source
            .elements()
            .filter(|&a| ideal.contains(self.apply(a)))
            .collect();
        Ideal::from_members(&self.source, members)
    }
}

/// Returns the first law violation of a candidate image table, if any.
fn hom_law_violation(
    source: &FiniteRing,
    target: &FiniteRing,
    image: &[usize],
) -> Option<(&'static str, usize, usize)> {
    if image[source.zero()] != target.zero() {
        return Some(("zero preservation", source.zero(), source.zero()));
    }
    if image[source.one()] != target.one() {
        return Some(("one preservation", source.one(), source.one()));
    }
    for a in source.elements() {
        for b in source.elements() {
            if image[source.add(a, b)] != target.add(image[a], image[b]) {
                return Some(("additive", a, b));
            }
            if image[source.mul(a, b)] != target.mul(image[a], image[b]) {
                return Some(("multiplicative", a, b));
            }
        }
    }
    None
}

fn is_hom_table(source: &FiniteRing, target: &FiniteRing, image: &[usize]) -> bool {
    hom_law_violation(source, target, image).is_none()
}

/// Builds the homomorphism determined by images of 1 and of the named
/// generators, by propagating the ring laws to a total map.
///
/// `pins` are (source element, target element) pairs. Rejection carries a
/// witness: either a law conflict discovered during propagation, or an
/// element the pinned images do not generate.
pub fn hom_from_generator_images(
    source: &Arc<FiniteRing>,
    target: &Arc<FiniteRing>,
    pins: &[(usize, usize)],
) -> Result<RingHom> {
    let mut image: Vec<Option<usize>> = vec![None; source.order()];
    let set = |img: &mut Vec<Option<usize>>, elt: usize, val: usize, why: &str| -> Result<()> {
        match img[elt] {
            None => {
                img[elt] = Some(val);
                Ok(())
            }
            Some(old) if old == val => Ok(()),
            Some(old) => Err(Error::Axiom(format!(
                "conflicting images for element {elt}: {why} forces {val}, already mapped to {old}"
            ))),
        }
    };

    set(&mut image, source.zero(), target.zero(), "zero preservation")?;
    set(&mut image, source.one(), target.one(), "one preservation")?;
    for &(s, t) in pins {
        if s >= source.order() || t >= target.order() {
            return Err(Error::Invalid("generator binding out of range".into()));
        }
        set(&mut image, s, t, "explicit binding")?;
    }

    // propagate: whenever both arguments of an operation have images, the
    // result's image is forced
    loop {
        let mut grew = false;
        let known: Vec<usize> = (0..source.order()).filter(|&e| image[e].is_some()).collect();
        for &a in &known {
            for &b in &known {
                let (ia, ib) = (image[a].unwrap(), image[b].unwrap());
                let s = source.add(a, b);
                let forced = target.add(ia, ib);
                if image[s] != Some(forced) {
                    set(&mut image, s, forced, &format!("{a} + {b}"))?;
                    grew = true;
                }
                let p = source.mul(a, b);
                let forced = target.mul(ia, ib);
                if image[p] != Some(forced) {
                    set(&mut image, p, forced, &format!("{a} * {b}"))?;
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }

    if let Some(missing) = (0..source.order()).find(|&e| image[e].is_none()) {
        return Err(Error::Invalid(format!(
            "the given generator images do not determine a total map; element {missing} is not generated"
        )));
    }
    RingHom::new(source, target, image.into_iter().map(Option::unwrap).collect())
}

/// All unital homomorphisms `source -> target`.
///
/// The search assigns images to the structural generators (pruned by
/// invariants any homomorphism preserves) and replays the derivation of the
/// remaining elements; every candidate is validated exhaustively.
pub fn enumerate_homs(
    source: &Arc<FiniteRing>,
    target: &Arc<FiniteRing>,
    limits: &Limits,
) -> Result<Vec<RingHom>> {
    let trace = source.trace();
    let mut candidate_sets: Vec<Vec<usize>> = Vec::with_capacity(trace.generators.len());
    for &g in &trace.generators {
        let g_add = source.additive_order(g);
        let g_idem = source.is_idempotent(g);
        let g_nil = source.nilpotency_index(g);
        let cands: Vec<usize> = target
            .elements()
            .filter(|&c| {
                g_add % target.additive_order(c) == 0
                    && (!g_idem || target.is_idempotent(c))
                    && match g_nil {
                        // the image of a nilpotent is nilpotent with index
                        // dividing... at most the original index
                        Some(k) => matches!(target.nilpotency_index(c), Some(j) if j <= k),
                        None => true,
                    }
            })
            .collect();
        candidate_sets.push(cands);
    }

    let space: u128 = candidate_sets
        .iter()
        .map(|c| c.len() as u128)
        .product();
    if space > limits.max_search {
        return Err(Error::Capacity(format!(
            "homomorphism search space {space} exceeds the configured bound {}",
            limits.max_search
        )));
    }

    let mut found = Vec::new();
    let mut assignment = vec![0usize; candidate_sets.len()];
    enumerate_assignments(&candidate_sets, 0, &mut assignment, &mut |gen_images| {
        let image = trace.evaluate(target, gen_images);
        if is_hom_table(source, target, &image) {
            found.push(RingHom {
                source: Arc::clone(source),
                target: Arc::clone(target),
                image,
            });
        }
    });
    Ok(found)
}

fn enumerate_assignments(
    sets: &[Vec<usize>],
    depth: usize,
    current: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]),
) {
    if depth == sets.len() {
        visit(current);
        return;
    }
    for &c in &sets[depth] {
        current[depth] = c;
        enumerate_assignments(sets, depth + 1, current, visit);
    }
}

/// Searches for a ring isomorphism; sound and complete for orders within
/// `limits.max_order`.
///
/// Returns `None` when no isomorphism exists (in particular whenever the
/// orders differ). Generator images are pruned by isomorphism invariants
/// (additive order, idempotency, nilpotency index, multiplicative order of
/// units), which only discards provably impossible assignments.
pub fn find_isomorphism(
    a: &Arc<FiniteRing>,
    b: &Arc<FiniteRing>,
    limits: &Limits,
) -> Result<Option<RingHom>> {
    if a.order() != b.order() {
        return Ok(None);
    }
    if a.order() > limits.max_order {
        return Err(Error::Capacity(format!(
            "isomorphism search on order {} exceeds the configured bound {}",
            a.order(),
            limits.max_order
        )));
    }

    let trace = a.trace();
    let mut candidate_sets: Vec<Vec<usize>> = Vec::with_capacity(trace.generators.len());
    for &g in &trace.generators {
        let g_add = a.additive_order(g);
        let g_idem = a.is_idempotent(g);
        let g_nil = a.nilpotency_index(g);
        let g_unit = a.unit_order(g);
        let cands: Vec<usize> = b
            .elements()
            .filter(|&c| {
                b.additive_order(c) == g_add
                    && b.is_idempotent(c) == g_idem
                    && b.nilpotency_index(c) == g_nil
                    && b.unit_order(c) == g_unit
            })
            .collect();
        if cands.is_empty() {
            return Ok(None);
        }
        candidate_sets.push(cands);
    }

    let space: u128 = candidate_sets
        .iter()
        .map(|c| c.len() as u128)
        .product();
    if space > limits.max_search {
        return Err(Error::Capacity(format!(
            "isomorphism search space {space} exceeds the configured bound {}",
            limits.max_search
        )));
    }

    let mut result: Option<RingHom> = None;
    let mut assignment = vec![0usize; candidate_sets.len()];
    search_iso(
        &candidate_sets,
        0,
        &mut assignment,
        &mut |gen_images| -> bool {
            let image = trace.evaluate(b, gen_images);
            let mut seen = vec![false; b.order()];
            for &v in &image {
                if seen[v] {
                    return false;
                }
                seen[v] = true;
            }
            if is_hom_table(a, b, &image) {
                result = Some(RingHom {
                    source: Arc::clone(a),
                    target: Arc::clone(b),
                    image,
                });
                true
            } else {
                false
            }
        },
    );
    Ok(result)
}

fn search_iso(
    sets: &[Vec<usize>],
    depth: usize,
    current: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]) -> bool,
) -> bool {
    if depth == sets.len() {
        return visit(current);
    }
    for &c in &sets[depth] {
        // generators are distinct, so an isomorphism maps them to distinct images
        if current[..depth].contains(&c) {
            continue;
        }
        current[depth] = c;
        if search_iso(sets, depth + 1, current, visit) {
            return true;
        }
    }
    false
}

/// Convenience map collecting, for each target element, its preimages.
pub fn fibers(hom: &RingHom) -> BTreeMap<usize, Vec<usize>> {
    let mut m: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for a in hom.source().elements() {
        m.entry(hom.apply(a)).or_default().push(a);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{poly_quotient, product, zmod};

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn reduction_map_is_a_hom() {
        let z12 = zmod(12, &lim()).unwrap();
        let z4 = zmod(4, &lim()).unwrap();
        let h = hom_from_generator_images(&z12, &z4, &[]).unwrap();
        for a in 0..12 {
            assert_eq!(h.apply(a), a % 4);
        }
        let k = h.kernel().unwrap();
        assert_eq!(k.members(), &[0, 4, 8].into_iter().collect());
    }

    #[test]
    fn impossible_unital_map_rejected_with_witness() {
        let z12 = zmod(12, &lim()).unwrap();
        let z5 = zmod(5, &lim()).unwrap();
        // 12 * 1 = 0 in Z/12 but 12 = 2 mod 5: propagation must conflict
        let err = hom_from_generator_images(&z12, &z5, &[]).unwrap_err();
        assert!(matches!(err, Error::Axiom(_)), "got {err:?}");
    }

    #[test]
    fn underdetermined_map_rejected() {
        let z2 = zmod(2, &lim()).unwrap();
        let (prod, _, _) = product(&z2, &z2, &lim()).unwrap();
        // 1 alone generates only {0, 1} inside Z/2 x Z/2
        let err = hom_from_generator_images(&prod.ring, &z2, &[]).unwrap_err();
        assert!(matches!(err, Error::Invalid(_)), "got {err:?}");
    }

    #[test]
    fn unique_hom_out_of_zmod() {
        let z6 = zmod(6, &lim()).unwrap();
        let z3 = zmod(3, &lim()).unwrap();
        let homs = enumerate_homs(&z6, &z3, &lim()).unwrap();
        assert_eq!(homs.len(), 1);
        let none = enumerate_homs(&z6, &zmod(4, &lim()).unwrap(), &lim()).unwrap();
        assert!(none.is_empty());
    }

    #[test]
    fn crt_isomorphism_found() {
        let z6 = zmod(6, &lim()).unwrap();
        let z2 = zmod(2, &lim()).unwrap();
        let z3 = zmod(3, &lim()).unwrap();
        let (prod, _, _) = product(&z2, &z3, &lim()).unwrap();
        let iso = find_isomorphism(&z6, &prod.ring, &lim()).unwrap();
        assert!(iso.is_some());
        assert!(iso.unwrap().is_bijective());
    }

    #[test]
    fn no_isomorphism_between_distinct_order_four_rings() {
        let z4 = zmod(4, &lim()).unwrap();
        let z2 = zmod(2, &lim()).unwrap();
        let (prod, _, _) = product(&z2, &z2, &lim()).unwrap();
        assert!(find_isomorphism(&z4, &prod.ring, &lim()).unwrap().is_none());
        // and the nilpotent order-4 ring differs from both
        let dual = poly_quotient(&z2, &[0, 0, 1], &lim()).unwrap();
        assert!(find_isomorphism(&z4, &dual, &lim()).unwrap().is_none());
        assert!(find_isomorphism(&dual, &prod.ring, &lim()).unwrap().is_none());
    }

    #[test]
    fn self_isomorphism_exists() {
        let r = poly_quotient(&zmod(2, &lim()).unwrap(), &[0, 1, 1], &lim()).unwrap();
        let iso = find_isomorphism(&r, &r, &lim()).unwrap().unwrap();
        assert!(iso.is_bijective());
    }

    #[test]
    fn evaluation_hom_from_binding() {
        let z2 = zmod(2, &lim()).unwrap();
        let r = poly_quotient(&z2, &[0, 1, 1], &lim()).unwrap(); // x^2 + x
        let x = r.named_generators()[0].1;
        let h = hom_from_generator_images(&r, &z2, &[(x, 0)]).unwrap();
        assert_eq!(h.apply(x), 0);
        assert!(h.is_surjective());
    }
}
