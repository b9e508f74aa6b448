//! The prime spectrum of a finite ring as a finite topological space.
//!
//! Points are the prime ideals (in the canonical ideal order); the topology
//! is generated by the basic opens D(f) = { p : f ∉ p }, whose complements
//! are exactly the vanishing sets V(a).

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hom::RingHom;
use crate::ideal::{classify_with, enumerate_ideals, ideal_from_generators, Ideal};
use crate::limits::Limits;
use crate::ring::FiniteRing;
use crate::topology::{generate_topology, ContinuousMap, FiniteTopology, OpenSet};

/// Spec of a finite ring: its primes and their Zariski topology.
#[derive(Debug, Clone)]
pub struct SpecSpace {
    ring: Arc<FiniteRing>,
    points: Vec<Ideal>,
    topology: Arc<FiniteTopology>,
}

impl SpecSpace {
    pub fn ring(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    pub fn points(&self) -> &[Ideal] {
        &self.points
    }

    pub fn point_count(&self) -> usize {
        self.points.len()
    }

    pub fn point(&self, index: usize) -> &Ideal {
        &self.points[index]
    }

    pub fn point_index(&self, prime: &Ideal) -> Option<usize> {
        self.points.iter().position(|p| p.members() == prime.members())
    }

    pub fn topology(&self) -> &Arc<FiniteTopology> {
        &self.topology
    }
}

fn basic_open_members(points: &[Ideal], f: usize) -> Vec<usize> {
    (0..points.len()).filter(|&i| !points[i].contains(f)).collect()
}

/// Builds Spec: primes from the full ideal enumeration, topology generated
/// by { D(f) : f in the ring }.
pub fn spec(ring: &Arc<FiniteRing>, limits: &Limits) -> Result<SpecSpace> {
    let all = enumerate_ideals(ring, limits)?;
    let points: Vec<Ideal> = all
        .iter()
        .filter(|ideal| classify_with(ring, &all, ideal).is_prime)
        .cloned()
        .collect();

    let mut basis: Vec<Vec<usize>> = ring
        .elements()
        .map(|f| basic_open_members(&points, f))
        .collect();
    basis.sort();
    basis.dedup();
    let topology = Arc::new(generate_topology(points.len(), &basis)?);

    Ok(SpecSpace {
        ring: Arc::clone(ring),
        points,
        topology,
    })
}

/// V(a): indices of the primes containing the ideal.
pub fn vanishing_set(space: &SpecSpace, a: &Ideal) -> Result<Vec<usize>> {
    if !FiniteRing::same(a.ring(), space.ring()) {
        return Err(Error::Invalid("ideal of a different ring".into()));
    }
    Ok((0..space.point_count())
        .filter(|&i| a.members().is_subset(space.point(i).members()))
        .collect())
}

/// D(f): the open set of primes not containing f.
pub fn basic_open(space: &SpecSpace, f: usize) -> Result<OpenSet> {
    if f >= space.ring().order() {
        return Err(Error::Invalid(format!("element {f} out of range")));
    }
    let members = basic_open_members(space.points(), f);
    OpenSet::new(space.topology(), &members)
}

/// The continuous map Spec(target of phi) -> Spec(source of phi) sending a
/// prime q to its preimage under phi.
///
/// Both continuity (preimages of all opens) and the closed-set identity
/// f⁻¹(V(a)) = V(⟨phi(a)⟩), for every enumerated ideal a of the source
/// ring, are verified exhaustively; a failure of either would signal a bug
/// and surfaces as a verification error.
pub fn spec_map(
    phi: &RingHom,
    spec_of_target: &SpecSpace,
    spec_of_source: &SpecSpace,
    limits: &Limits,
) -> Result<ContinuousMap> {
    if !FiniteRing::same(spec_of_target.ring(), phi.target()) {
        return Err(Error::Invalid(
            "first space must be Spec of the homomorphism's target ring".into(),
        ));
    }
    if !FiniteRing::same(spec_of_source.ring(), phi.source()) {
        return Err(Error::Invalid(
            "second space must be Spec of the homomorphism's source ring".into(),
        ));
    }

    let mut point_map = Vec::with_capacity(spec_of_target.point_count());
    for q in spec_of_target.points() {
        let preimage = phi.preimage_ideal(q)?;
        match spec_of_source.point_index(&preimage) {
            Some(i) => point_map.push(i),
            None => {
                return Err(Error::Verification(format!(
                    "preimage {:?} of prime {:?} is not a prime of the source ring",
                    preimage.members(),
                    q.members()
                )))
            }
        }
    }

    let map = ContinuousMap::new(
        spec_of_target.topology(),
        spec_of_source.topology(),
        point_map,
    )?;

    // closed-set identity, for every ideal of the source ring
    for a in enumerate_ideals(phi.source(), limits)? {
        let v_source = vanishing_set(spec_of_source, &a)?;
        let pulled: Vec<usize> = (0..spec_of_target.point_count())
            .filter(|&j| v_source.binary_search(&map.apply(j)).is_ok())
            .collect();
        let image_gens: Vec<usize> = a.members().iter().map(|&x| phi.apply(x)).collect();
        let pushed = ideal_from_generators(phi.target(), &image_gens)?;
        let v_target = vanishing_set(spec_of_target, &pushed)?;
        if pulled != v_target {
            return Err(Error::Verification(format!(
                "closed-set identity failed for ideal {:?}: preimage of V is {pulled:?} but V of the pushed ideal is {v_target:?}",
                a.members()
            )));
        }
    }

    Ok(map)
}
