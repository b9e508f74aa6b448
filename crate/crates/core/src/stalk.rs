//! Stalks of presheaves on finite spaces, computed as filtered colimits
//! over the opens containing a point, and the stalk-preservation check for
//! presheaf morphisms.
//!
//! On a finite space the colimit collapses onto the sections over the
//! minimal open neighborhood; the colimit machinery verifies that collapse
//! internally, so every stalk is computed by two routes and cross-checked.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::diagram::{filtered_colimit, Diagram};
use crate::error::{Error, Result};
use crate::hom::{find_isomorphism, RingHom};
use crate::limits::Limits;
use crate::presheaf::{Presheaf, PresheafMorphism};
use crate::ring::FiniteRing;
use crate::topology::is_subset;

/// The stalk of a presheaf at a point.
#[derive(Debug, Clone)]
pub struct Stalk {
    pub point: usize,
    pub ring: std::sync::Arc<FiniteRing>,
    /// Germ map per open containing the point, keyed by open index.
    pub germ_maps: BTreeMap<usize, RingHom>,
    /// The minimal open neighborhood of the point.
    pub minimal_open: usize,
}

/// Computes the stalk as the filtered colimit of sections over the opens
/// containing `point`, ordered by reverse inclusion.
pub fn stalk(presheaf: &Presheaf, point: usize, limits: &Limits) -> Result<Stalk> {
    let space = presheaf.space();
    if point >= space.point_count() {
        return Err(Error::Invalid(format!("point {point} out of range")));
    }
    let around: Vec<usize> = space.opens_containing(point);
    let nodes = around
        .iter()
        .map(|&u| std::sync::Arc::clone(presheaf.section(u)))
        .collect();
    // arrows run from bigger to smaller open (the restriction direction),
    // so upper bounds in the index order are smaller opens
    let mut arrows = BTreeMap::new();
    for (i, &ui) in around.iter().enumerate() {
        for (j, &uj) in around.iter().enumerate() {
            if i != j && is_subset(space.open(uj), space.open(ui)) {
                arrows.insert((i, j), presheaf.restriction(ui, uj)?);
            }
        }
    }
    let diagram = Diagram::new(nodes, arrows)?;
    let colimit = filtered_colimit(&diagram, limits)?;

    let minimal_open = around[colimit.maximum_node];
    debug_assert_eq!(minimal_open, space.minimal_open_index(point));

    let germ_maps: BTreeMap<usize, RingHom> = around
        .iter()
        .enumerate()
        .map(|(i, &u)| (u, colimit.injections[i].clone()))
        .collect();

    // cross-checks: germs commute with restrictions, and the minimal-open
    // germ map is the isomorphism the finite-space theory predicts
    for (&ui, germ_i) in &germ_maps {
        for (&uj, germ_j) in &germ_maps {
            if ui != uj && is_subset(space.open(uj), space.open(ui)) {
                let through = presheaf.restriction(ui, uj)?.then(germ_j)?;
                if through.image_table() != germ_i.image_table() {
                    return Err(Error::Verification(format!(
                        "germ map of open #{ui} disagrees with restriction to #{uj}"
                    )));
                }
            }
        }
    }
    if !germ_maps[&minimal_open].is_bijective() {
        return Err(Error::Verification(
            "stalk does not collapse onto the minimal open's sections".into(),
        ));
    }

    Ok(Stalk {
        point,
        ring: colimit.ring,
        germ_maps,
        minimal_open,
    })
}

/// Outcome of comparing the stalks of a morphism's source and target at
/// one point, through the morphism.
#[derive(Debug, Clone, Serialize)]
pub struct StalkPreservation {
    pub point: usize,
    pub source_stalk_order: usize,
    pub target_stalk_order: usize,
    /// The germ-level map induced by the morphism is a single-valued
    /// homomorphism (it always should be; false signals a bug witness).
    pub induced_map_well_defined: bool,
    /// The induced map is bijective: the morphism preserves this stalk.
    pub induced_map_is_isomorphism: bool,
    /// The two stalk rings are isomorphic at all (ignoring the morphism).
    pub stalks_abstractly_isomorphic: bool,
}

/// Checks whether a presheaf morphism induces an isomorphism on the stalk
/// at `point`: germs map along θ by (U, s) ↦ (U, θ_U(s)).
pub fn check_stalk_preservation(
    theta: &PresheafMorphism,
    point: usize,
    limits: &Limits,
) -> Result<StalkPreservation> {
    let source_stalk = stalk(theta.source(), point, limits)?;
    let target_stalk = stalk(theta.target(), point, limits)?;
    let space = theta.source().space();

    let mut table: Vec<Option<usize>> = vec![None; source_stalk.ring.order()];
    let mut well_defined = true;
    for &u in space.opens_containing(point).iter() {
        for s in theta.source().section(u).elements() {
            let from = source_stalk.germ_maps[&u].apply(s);
            let to = target_stalk.germ_maps[&u].apply(theta.component(u).apply(s));
            match table[from] {
                None => table[from] = Some(to),
                Some(existing) if existing != to => {
                    well_defined = false;
                }
                Some(_) => {}
            }
        }
    }

    let induced = if well_defined && table.iter().all(|t| t.is_some()) {
        let flat: Vec<usize> = table.into_iter().map(|t| t.unwrap()).collect();
        RingHom::new(&source_stalk.ring, &target_stalk.ring, flat).ok()
    } else {
        None
    };
    let induced_map_is_isomorphism = induced.as_ref().map_or(false, |h| h.is_bijective());
    let stalks_abstractly_isomorphic =
        find_isomorphism(&source_stalk.ring, &target_stalk.ring, limits)?.is_some();

    Ok(StalkPreservation {
        point,
        source_stalk_order: source_stalk.ring.order(),
        target_stalk_order: target_stalk.ring.order(),
        induced_map_well_defined: induced.is_some(),
        induced_map_is_isomorphism,
        stalks_abstractly_isomorphic,
    })
}
