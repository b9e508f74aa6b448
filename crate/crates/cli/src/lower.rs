//! Lowering parsed expressions into concrete rings and homomorphisms.

use std::sync::Arc;

use zariski_core::hom::{hom_from_generator_images, RingHom};
use zariski_core::ring::{poly_quotient, product_many, zmod};
use zariski_core::{Error, FiniteRing, Limits, Result};

use crate::ast::{HomExpr, Poly, RingExpr};

pub fn lower_ring(expr: &RingExpr, limits: &Limits) -> Result<Arc<FiniteRing>> {
    match expr {
        RingExpr::Modular(n) => {
            let n = usize::try_from(*n)
                .map_err(|_| Error::Capacity(format!("modulus {n} is out of range")))?;
            // checked before zmod materializes n-by-n tables
            if n > limits.max_order {
                return Err(Error::Capacity(format!(
                    "ring of order {n} exceeds the configured bound {}",
                    limits.max_order
                )));
            }
            zmod(n, limits)
        }
        RingExpr::PolyQuotient { modulus, var: _, poly } => {
            let n = usize::try_from(*modulus)
                .map_err(|_| Error::Capacity(format!("modulus {modulus} is out of range")))?;
            if n > limits.max_order {
                return Err(Error::Capacity(format!(
                    "base ring of order {n} exceeds the configured bound {}",
                    limits.max_order
                )));
            }
            let base = zmod(n, limits)?;
            poly_quotient(&base, &poly.coeffs, limits)
        }
        RingExpr::Product(factors) => {
            let lowered: Vec<Arc<FiniteRing>> = factors
                .iter()
                .map(|f| lower_ring(f, limits))
                .collect::<Result<_>>()?;
            Ok(product_many(&lowered, limits)?.ring)
        }
    }
}

/// Evaluates an integer polynomial at the ring's named generator (constant
/// polynomials need no generator).
fn evaluate_poly(ring: &Arc<FiniteRing>, poly: &Poly) -> Result<usize> {
    let generator = ring.named_generators().first().map(|(_, e)| *e);
    let mut value = ring.zero();
    for (degree, &c) in poly.coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let base = if degree == 0 {
            ring.one()
        } else {
            let g = generator.ok_or_else(|| {
                Error::Invalid("the target ring has no generator to evaluate at".into())
            })?;
            ring.pow(g, degree)
        };
        // scale `base` by the integer c: repeated addition of +/-base
        let steps = c.unsigned_abs() as usize % ring.additive_order(base).max(1);
        let signed_base = if c < 0 { ring.neg(base) } else { base };
        let mut term = ring.zero();
        for _ in 0..steps {
            term = ring.add(term, signed_base);
        }
        value = ring.add(value, term);
    }
    Ok(value)
}

/// Builds the homomorphism an expression denotes. Parse-level validation
/// has already matched binding names against the source's generators; the
/// ring laws are enforced here and a law violation is reported with a
/// witness in the message.
pub fn lower_hom(expr: &HomExpr, limits: &Limits) -> Result<RingHom> {
    let source = lower_ring(&expr.source, limits)?;
    let target = lower_ring(&expr.target, limits)?;
    let mut pins = Vec::new();
    for (position, (_, poly)) in expr.bindings.iter().enumerate() {
        let generator = source
            .named_generators()
            .get(position)
            .map(|(_, e)| *e)
            .ok_or_else(|| Error::Invalid("binding without a matching generator".into()))?;
        pins.push((generator, evaluate_poly(&target, poly)?));
    }
    hom_from_generator_images(&source, &target, &pins)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_hom, parse_ring};

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn lowered_rings_match_their_presentations() {
        let r = lower_ring(&parse_ring("Z/12").unwrap(), &lim()).unwrap();
        assert_eq!(r.presentation(), "Z/12");
        assert_eq!(r.order(), 12);

        let q = lower_ring(&parse_ring("Z/2[x]/(x^2+x)").unwrap(), &lim()).unwrap();
        assert_eq!(q.presentation(), "Z/2[x]/(x^2+x)");
        assert_eq!(q.order(), 4);

        let p = lower_ring(&parse_ring("Z/4 x Z/3").unwrap(), &lim()).unwrap();
        assert_eq!(p.presentation(), "Z/4 x Z/3");
        assert_eq!(p.order(), 12);
    }

    #[test]
    fn oversized_modulus_hits_the_capacity_guard_without_materializing() {
        let err = lower_ring(&parse_ring("Z/4294967295").unwrap(), &lim()).unwrap_err();
        assert!(matches!(err, Error::Capacity(_)));
    }

    #[test]
    fn canonical_quotient_hom_lowers() {
        let hom = lower_hom(&parse_hom("Z/12 -> Z/4").unwrap(), &lim()).unwrap();
        assert_eq!(hom.apply(7), 3);
        assert!(hom.is_surjective());
    }

    #[test]
    fn incompatible_characteristic_rejected_with_witness() {
        let err = lower_hom(&parse_hom("Z/12 -> Z/5").unwrap(), &lim()).unwrap_err();
        let text = format!("{err}");
        assert!(
            matches!(err, Error::Axiom(_) | Error::Invalid(_)),
            "unexpected class: {text}"
        );
    }

    #[test]
    fn evaluation_hom_respects_binding() {
        let hom = lower_hom(&parse_hom("Z/2[x]/(x^2+x) -> Z/2 : x -> 0").unwrap(), &lim());
        let hom = hom.unwrap();
        assert!(hom.is_surjective());
        // x (index 2 in base-2 little-endian coefficient encoding) maps to 0
        let source_x = 2;
        assert_eq!(hom.apply(source_x), 0);
    }

    #[test]
    fn variable_to_variable_binding_evaluates_via_generator() {
        let hom = lower_hom(
            &parse_hom("Z/2[x]/(x^2) -> Z/2[y]/(y^2) : x -> y").unwrap(),
            &lim(),
        )
        .unwrap();
        assert!(hom.is_bijective());
    }

    #[test]
    fn negative_constant_images_wrap_modulo_the_characteristic() {
        let hom = lower_hom(
            &parse_hom("Z/2[x]/(x^2+1) -> Z/2[y]/(y^2+1) : x -> -y").unwrap(),
            &lim(),
        )
        .unwrap();
        assert!(hom.is_bijective());
    }
}
