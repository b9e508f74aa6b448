//! Presheaves of finite rings on finite topological spaces, and morphisms
//! between them.
//!
//! A presheaf stores one ring per open and one restriction homomorphism per
//! strict inclusion of opens (identity restrictions are implicit);
//! functoriality over every chain of three opens is checked exhaustively at
//! construction.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hom::RingHom;
use crate::ring::FiniteRing;
use crate::topology::{is_subset, ContinuousMap, FiniteTopology, OpenSet};

#[derive(Debug, Clone)]
pub struct Presheaf {
    space: Arc<FiniteTopology>,
    sections: Vec<Arc<FiniteRing>>,
    /// Keyed by (bigger open, strictly smaller open).
    restrictions: BTreeMap<(usize, usize), RingHom>,
}

impl Presheaf {
    /// Validates a full presheaf: one section ring per open, one
    /// restriction per strict inclusion pair with matching endpoints, and
    /// composition agreement on every chain W ⊂ V ⊂ U.
    pub fn new(
        space: &Arc<FiniteTopology>,
        sections: Vec<Arc<FiniteRing>>,
        restrictions: BTreeMap<(usize, usize), RingHom>,
    ) -> Result<Presheaf> {
        if sections.len() != space.open_count() {
            return Err(Error::Invalid(format!(
                "expected {} section rings, got {}",
                space.open_count(),
                sections.len()
            )));
        }
        for (&(u, v), hom) in &restrictions {
            if u >= space.open_count() || v >= space.open_count() {
                return Err(Error::Invalid(format!("restriction ({u}, {v}) out of range")));
            }
            if u == v || !is_subset(space.open(v), space.open(u)) {
                return Err(Error::Invalid(format!(
                    "restriction ({u}, {v}) is not along a strict inclusion of opens"
                )));
            }
            if !FiniteRing::same(hom.source(), &sections[u])
                || !FiniteRing::same(hom.target(), &sections[v])
            {
                return Err(Error::Invalid(format!(
                    "restriction ({u}, {v}) does not connect the section rings"
                )));
            }
        }
        for u in 0..space.open_count() {
            for v in 0..space.open_count() {
                if u != v
                    && is_subset(space.open(v), space.open(u))
                    && !restrictions.contains_key(&(u, v))
                {
                    return Err(Error::Invalid(format!(
                        "missing restriction for {:?} ⊆ {:?}",
                        space.open(v),
                        space.open(u)
                    )));
                }
            }
        }
        let presheaf = Presheaf {
            space: Arc::clone(space),
            sections,
            restrictions,
        };
        // functoriality on all strict chains
        for (&(u, v), first) in &presheaf.restrictions {
            for (&(v2, w), second) in &presheaf.restrictions {
                if v != v2 {
                    continue;
                }
                let composite = first.then(second)?;
                let direct = &presheaf.restrictions[&(u, w)];
                if composite.image_table() != direct.image_table() {
                    return Err(Error::Axiom(format!(
                        "restrictions not functorial on the chain {:?} ⊃ {:?} ⊃ {:?}",
                        presheaf.space.open(u),
                        presheaf.space.open(v),
                        presheaf.space.open(w)
                    )));
                }
            }
        }
        Ok(presheaf)
    }

    pub fn space(&self) -> &Arc<FiniteTopology> {
        &self.space
    }

    pub fn sections(&self) -> &[Arc<FiniteRing>] {
        &self.sections
    }

    pub fn section(&self, open: usize) -> &Arc<FiniteRing> {
        &self.sections[open]
    }

    /// The restriction homomorphism section(u) → section(v) for v ⊆ u
    /// (identity when u = v).
    pub fn restriction(&self, u: usize, v: usize) -> Result<RingHom> {
        if u == v {
            return Ok(RingHom::identity(&self.sections[u]));
        }
        match self.restrictions.get(&(u, v)) {
            Some(hom) => Ok(hom.clone()),
            None => Err(Error::Invalid(format!(
                "no restriction: {:?} is not a subset of {:?}",
                self.space.open(v),
                self.space.open(u)
            ))),
        }
    }

    pub fn strict_restrictions(&self) -> &BTreeMap<(usize, usize), RingHom> {
        &self.restrictions
    }
}

/// The constant presheaf: the same ring on every open (including the empty
/// one), identity restrictions.
pub fn constant_presheaf(space: &Arc<FiniteTopology>, ring: &Arc<FiniteRing>) -> Presheaf {
    let sections = vec![Arc::clone(ring); space.open_count()];
    let mut restrictions = BTreeMap::new();
    for u in 0..space.open_count() {
        for v in 0..space.open_count() {
            if u != v && is_subset(space.open(v), space.open(u)) {
                restrictions.insert((u, v), RingHom::identity(ring));
            }
        }
    }
    Presheaf::new(space, sections, restrictions).expect("constant data is functorial")
}

/// A natural transformation between presheaves on the same space.
#[derive(Debug, Clone)]
pub struct PresheafMorphism {
    source: Presheaf,
    target: Presheaf,
    components: Vec<RingHom>,
}

impl PresheafMorphism {
    pub fn new(source: &Presheaf, target: &Presheaf, components: Vec<RingHom>) -> Result<Self> {
        if !FiniteTopology::same(source.space(), target.space()) {
            return Err(Error::Invalid(
                "presheaf morphism requires both presheaves on the same space".into(),
            ));
        }
        let opens = source.space().open_count();
        if components.len() != opens {
            return Err(Error::Invalid(format!(
                "expected {opens} components, got {}",
                components.len()
            )));
        }
        for (u, comp) in components.iter().enumerate() {
            if !FiniteRing::same(comp.source(), source.section(u))
                || !FiniteRing::same(comp.target(), target.section(u))
            {
                return Err(Error::Invalid(format!(
                    "component at open #{u} does not connect the section rings"
                )));
            }
        }
        for &(u, v) in source.strict_restrictions().keys() {
            let down_then_across = source.restriction(u, v)?.then(&components[v])?;
            let across_then_down = components[u].then(&target.restriction(u, v)?)?;
            if down_then_across.image_table() != across_then_down.image_table() {
                return Err(Error::Axiom(format!(
                    "not natural on {:?} ⊆ {:?}",
                    source.space().open(v),
                    source.space().open(u)
                )));
            }
        }
        Ok(PresheafMorphism {
            source: source.clone(),
            target: target.clone(),
            components,
        })
    }

    pub fn source(&self) -> &Presheaf {
        &self.source
    }

    pub fn target(&self) -> &Presheaf {
        &self.target
    }

    pub fn component(&self, open: usize) -> &RingHom {
        &self.components[open]
    }

    pub fn components(&self) -> &[RingHom] {
        &self.components
    }

    pub fn is_isomorphism(&self) -> bool {
        self.components.iter().all(|c| c.is_bijective())
    }
}

/// Restriction of a presheaf to an open subspace: opens of the subspace are
/// exactly the opens contained in it; sections and restrictions carry over.
pub fn restrict_presheaf(presheaf: &Presheaf, u: &OpenSet) -> Result<Presheaf> {
    if !FiniteTopology::same(u.topology(), presheaf.space()) {
        return Err(Error::Invalid("open set of a different space".into()));
    }
    let parent = presheaf.space();
    let (sub, _points) = parent.open_subspace(u.index());
    let within = parent.opens_within(u.index());
    assert_eq!(
        sub.open_count(),
        within.len(),
        "subspace opens must correspond one-to-one to opens within u"
    );
    let sub = Arc::new(sub);
    let sections: Vec<Arc<FiniteRing>> = within
        .iter()
        .map(|&w| Arc::clone(presheaf.section(w)))
        .collect();
    let mut restrictions = BTreeMap::new();
    for i in 0..within.len() {
        for j in 0..within.len() {
            if i != j && is_subset(sub.open(j), sub.open(i)) {
                restrictions.insert((i, j), presheaf.restriction(within[i], within[j])?);
            }
        }
    }
    Presheaf::new(&sub, sections, restrictions)
}

/// Direct image along a continuous map: sections over U are the sections
/// over the preimage of U.
pub fn direct_image(cmap: &ContinuousMap, presheaf: &Presheaf) -> Result<Presheaf> {
    if !FiniteTopology::same(presheaf.space(), cmap.source()) {
        return Err(Error::Invalid(
            "presheaf must live on the source of the continuous map".into(),
        ));
    }
    let target = cmap.target();
    let sections: Vec<Arc<FiniteRing>> = (0..target.open_count())
        .map(|u| Arc::clone(presheaf.section(cmap.preimage_open(u))))
        .collect();
    let mut restrictions = BTreeMap::new();
    for u in 0..target.open_count() {
        for v in 0..target.open_count() {
            if u != v && is_subset(target.open(v), target.open(u)) {
                restrictions.insert(
                    (u, v),
                    presheaf.restriction(cmap.preimage_open(u), cmap.preimage_open(v))?,
                );
            }
        }
    }
    Presheaf::new(target, sections, restrictions)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limits::Limits;
    use crate::ring::{product, zmod};
    use crate::topology::{chain, discrete, sierpinski};

    fn lim() -> Limits {
        Limits::default()
    }

    /// The Sierpinski-space presheaf with zero ring on ∅, Z/2 on the open
    /// point, Z/4 on the whole space, and the mod-2 restriction.
    pub(crate) fn sierpinski_chain(limits: &Limits) -> (Arc<FiniteTopology>, Presheaf) {
        crate::corpus::sierpinski_chain_presheaf(limits).unwrap()
    }

    #[test]
    fn constant_presheaves_validate() {
        let z2 = zmod(2, &lim()).unwrap();
        constant_presheaf(&Arc::new(sierpinski()), &z2);
        constant_presheaf(&Arc::new(discrete(3)), &z2);
        constant_presheaf(&Arc::new(chain(3)), &z2);
    }

    #[test]
    fn sierpinski_chain_presheaf_validates() {
        let (_space, presheaf) = sierpinski_chain(&lim());
        assert_eq!(presheaf.section(2).order(), 4);
        assert_eq!(presheaf.restriction(2, 1).unwrap().apply(3), 1);
    }

    #[test]
    fn non_functorial_restrictions_rejected() {
        // all sections Z/2 × Z/2; a coordinate swap inserted on one level
        // breaks composition on the chain
        let space = Arc::new(chain(2));
        let (data, _p1, _p2) = product(
            &zmod(2, &lim()).unwrap(),
            &zmod(2, &lim()).unwrap(),
            &lim(),
        )
        .unwrap();
        let p = data.ring.clone();
        let swap_table: Vec<usize> = p
            .elements()
            .map(|e| {
                let d = data.decode(e);
                data.encode(&[d[1], d[0]])
            })
            .collect();
        let swap = RingHom::new(&p, &p, swap_table).unwrap();
        let mut restrictions = BTreeMap::new();
        restrictions.insert((2, 1), swap.clone());
        restrictions.insert((1, 0), swap.clone());
        restrictions.insert((2, 0), swap.clone()); // should be swap ∘ swap = id
        let err = Presheaf::new(&space, vec![Arc::clone(&p); 3], restrictions).unwrap_err();
        assert!(err.to_string().contains("functorial"));
    }

    #[test]
    fn morphism_naturality_checked() {
        let (space, chain_presheaf) = sierpinski_chain(&lim());
        let z4 = Arc::clone(chain_presheaf.section(2));
        let constant = constant_presheaf(&space, &z4);
        let components = vec![
            chain_presheaf.restriction(2, 0).unwrap(),
            chain_presheaf.restriction(2, 1).unwrap(),
            RingHom::identity(&z4),
        ];
        let theta = PresheafMorphism::new(&constant, &chain_presheaf, components).unwrap();
        assert!(!theta.is_isomorphism());

        // breaking naturality: swap on one open of a constant Z/2 × Z/2
        let space2 = Arc::new(discrete(2));
        let (data, _p1, _p2) = product(
            &zmod(2, &lim()).unwrap(),
            &zmod(2, &lim()).unwrap(),
            &lim(),
        )
        .unwrap();
        let p = data.ring.clone();
        let cp = constant_presheaf(&space2, &p);
        let swap_table: Vec<usize> = p
            .elements()
            .map(|e| {
                let d = data.decode(e);
                data.encode(&[d[1], d[0]])
            })
            .collect();
        let swap = RingHom::new(&p, &p, swap_table).unwrap();
        let mut comps: Vec<RingHom> = (0..space2.open_count())
            .map(|_| RingHom::identity(&p))
            .collect();
        comps[1] = swap; // only on one singleton open
        let err = PresheafMorphism::new(&cp, &cp, comps).unwrap_err();
        assert!(err.to_string().contains("natural"));
    }

    #[test]
    fn restriction_to_open_subspace() {
        let (space, presheaf) = sierpinski_chain(&lim());
        let u = OpenSet::new(&space, &[0]).unwrap();
        let restricted = restrict_presheaf(&presheaf, &u).unwrap();
        assert_eq!(restricted.space().open_count(), 2);
        assert_eq!(restricted.section(1).order(), 2);
    }

    #[test]
    fn direct_image_along_identity_and_collapse() {
        let (space, presheaf) = sierpinski_chain(&lim());
        let id = ContinuousMap::identity(&space);
        let push = direct_image(&id, &presheaf).unwrap();
        assert_eq!(push.section(2).order(), 4);

        let point = Arc::new(FiniteTopology::new(1, vec![vec![], vec![0]]).unwrap());
        let collapse = ContinuousMap::new(&space, &point, vec![0, 0]).unwrap();
        let push = direct_image(&collapse, &presheaf).unwrap();
        // sections over the single point = sections over the whole source
        assert_eq!(push.section(1).order(), 4);
    }
}
