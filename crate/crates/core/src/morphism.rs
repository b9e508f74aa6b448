//! Scheme morphisms induced by ring homomorphisms: the continuous map on
//! spectra together with the comparison of structure sheaves, packaged with
//! its compatibility checks.

use serde_json::json;

use crate::error::Error;
use crate::hom::RingHom;
use crate::limits::Limits;
use crate::presheaf::{direct_image, Presheaf, PresheafMorphism};
use crate::report::CheckReport;
use crate::scheme::{affine_scheme, AffineScheme};
use crate::spec_space::spec_map;
use crate::topology::ContinuousMap;
use crate::Result;

/// A morphism of affine schemes Spec B → Spec A induced by a ring
/// homomorphism phi: A → B.
///
/// The sheaf-level datum runs from the sections on Spec A into the direct
/// image of the sections on Spec B. (The opposite direction cannot carry
/// unital components: an open of Spec A with empty preimage would need a
/// unital map out of the zero ring.) Componentwise it is induced by the
/// localizations of phi, and on global sections it restricts to phi itself.
#[derive(Debug, Clone)]
pub struct SchemeMorphism {
    source: AffineScheme,
    target: AffineScheme,
    inducing_hom: RingHom,
    point_map: ContinuousMap,
    pushforward: Presheaf,
    sheaf_map: PresheafMorphism,
}

impl SchemeMorphism {
    /// The scheme being mapped (Spec of the homomorphism's target ring).
    pub fn source(&self) -> &AffineScheme {
        &self.source
    }

    /// The scheme mapped into (Spec of the homomorphism's source ring).
    pub fn target(&self) -> &AffineScheme {
        &self.target
    }

    pub fn inducing_hom(&self) -> &RingHom {
        &self.inducing_hom
    }

    /// The continuous map on spectra: a prime goes to its preimage.
    pub fn point_map(&self) -> &ContinuousMap {
        &self.point_map
    }

    /// The direct image of the source structure sheaf along the point map.
    pub fn pushforward(&self) -> &Presheaf {
        &self.pushforward
    }

    /// The comparison from the target's structure sheaf into the direct
    /// image of the source's structure sheaf.
    pub fn sheaf_map(&self) -> &PresheafMorphism {
        &self.sheaf_map
    }
}

/// Builds the scheme morphism induced by phi: A → B, constructing both
/// affine schemes, the map on spectra, and the sheaf comparison; verifies
/// naturality and that the global-sections component reproduces phi.
pub fn induced_morphism(phi: &RingHom, limits: &Limits) -> Result<SchemeMorphism> {
    let target = affine_scheme(phi.source(), limits)?;
    let source = affine_scheme(phi.target(), limits)?;
    let point_map = spec_map(phi, source.space(), target.space(), limits)?;
    let pushforward = direct_image(&point_map, source.structure())?;

    let topo = target.space().topology();
    let mut components = Vec::with_capacity(topo.open_count());
    for u in 0..topo.open_count() {
        let v = point_map.preimage_open(u);
        let target_points = &target.section_data(u).points;
        let source_points = source.section_data(v).points.clone();

        // per point q of the preimage: carry the component at the image
        // point through the localization of phi
        let mut carriers = Vec::with_capacity(source_points.len());
        for &q in &source_points {
            let fq = point_map.apply(q);
            let k = target_points
                .iter()
                .position(|&p| p == fq)
                .expect("image of a preimage point lies in the open");
            let psi = phi.then(source.local_at_prime(q).map())?;
            let carrier = target.local_at_prime(fq).induced_hom(&psi).map_err(|e| {
                Error::Verification(format!(
                    "no localized map at point {q} over point {fq}: {e}"
                ))
            })?;
            carriers.push((k, carrier));
        }

        let table: Vec<usize> = target
            .section_data(u)
            .families
            .iter()
            .map(|family| {
                let image: Vec<usize> = carriers
                    .iter()
                    .map(|(k, carrier)| carrier.apply(family[*k]))
                    .collect();
                source.section_index_of_family(v, &image).ok_or_else(|| {
                    Error::Verification(format!(
                        "pushed section over open #{u} left the section ring; this is a bug"
                    ))
                })
            })
            .collect::<Result<_>>()?;
        components.push(RingHom::new(
            target.structure().section(u),
            pushforward.section(u),
            table,
        )?);
    }
    let sheaf_map = PresheafMorphism::new(target.structure(), &pushforward, components)?;

    // on global sections the comparison must reproduce phi itself
    let u_full = topo.full_index();
    let v_full = point_map.preimage_open(u_full);
    let component = sheaf_map.component(u_full);
    for a in phi.source().elements() {
        let via_sheaf = component.apply(target.rho(u_full).apply(a));
        let via_phi = source.rho(v_full).apply(phi.apply(a));
        if via_sheaf != via_phi {
            return Err(Error::Verification(format!(
                "global-sections component disagrees with the inducing homomorphism at element {a}"
            )));
        }
    }

    Ok(SchemeMorphism {
        source,
        target,
        inducing_hom: phi.clone(),
        point_map,
        pushforward,
        sheaf_map,
    })
}

/// The report for a successfully constructed morphism: records the point
/// map and the conventions used for the two compatibility identities.
pub fn morphism_report(morphism: &SchemeMorphism) -> CheckReport {
    let name = format!(
        "{} -> {}",
        morphism.inducing_hom.source().presentation(),
        morphism.inducing_hom.target().presentation()
    );
    CheckReport::pass(name, "morphism")
        .with_note(
            "points map to preimages of primes; the closed-set identity holds with the ideal \
             generated by the image; the sheaf comparison runs from the codomain's sections \
             into the direct image of the domain's sections and restricts to the inducing \
             homomorphism on global sections",
        )
        .with_table(morphism.point_map.point_map().to_vec())
}

/// Serializable summary of a scheme morphism for machine consumption.
pub fn morphism_summary(morphism: &SchemeMorphism) -> serde_json::Value {
    let report = morphism_report(morphism);
    json!({
        "inducing_hom": {
            "source": morphism.inducing_hom.source().presentation(),
            "target": morphism.inducing_hom.target().presentation(),
            "table": morphism.inducing_hom.image_table(),
        },
        "point_map": morphism.point_map.point_map(),
        "source_points": morphism.source.space().point_count(),
        "target_points": morphism.target.space().point_count(),
        "components_are_isomorphisms": morphism.sheaf_map.is_isomorphism(),
        "report": report,
    })
}
