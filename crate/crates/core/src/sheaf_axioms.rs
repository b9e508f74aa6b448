//! The two sheaf-axiom checking strategies.
//!
//! Strategy one enumerates every covering family of every open and tests
//! the identity axiom (a section restricting to zero everywhere is zero)
//! and unique gluing directly; it refuses spaces with more than 12 opens.
//! Strategy two compares each section ring against the projective limit
//! over the minimal open neighborhoods of the points it covers; on finite
//! spaces this characterizes sheaves and is always available.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::diagram::{diagram_limit, Diagram};
use crate::error::{Error, Result};
use crate::hom::RingHom;
use crate::limits::Limits;
use crate::presheaf::Presheaf;
use crate::topology::union;

/// How a cover-based axiom check failed.
#[derive(Debug, Clone, Serialize)]
pub enum AxiomFailure {
    /// A nonzero section of `open` restricts to zero on every member of
    /// `cover` (opens listed by index).
    Identity {
        open: usize,
        cover: Vec<usize>,
        section: usize,
    },
    /// A compatible family over `cover` admits no gluing.
    GluingNone {
        open: usize,
        cover: Vec<usize>,
        family: Vec<usize>,
    },
    /// A compatible family over `cover` admits several gluings.
    GluingMultiple {
        open: usize,
        cover: Vec<usize>,
        family: Vec<usize>,
        gluings: Vec<usize>,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct ExhaustiveReport {
    pub passed: bool,
    pub failures: Vec<AxiomFailure>,
}

/// One open where the canonical map into the minimal-open limit is not an
/// isomorphism.
#[derive(Debug, Clone, Serialize)]
pub struct BasisFailure {
    pub open: usize,
    pub section_order: usize,
    pub limit_order: usize,
    pub injective: bool,
    pub surjective: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct BasisReport {
    pub passed: bool,
    pub failures: Vec<BasisFailure>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SheafAxiomReport {
    /// None when the space has more than 12 opens and cover enumeration
    /// was refused.
    pub exhaustive: Option<ExhaustiveReport>,
    pub basis: BasisReport,
}

impl SheafAxiomReport {
    /// Every strategy that ran passed.
    pub fn passed(&self) -> bool {
        self.basis.passed && self.exhaustive.as_ref().map_or(true, |e| e.passed)
    }
}

const MAX_OPENS_FOR_COVER_ENUMERATION: usize = 12;

/// All restriction homs (u, v ⊆ u) materialized once, identities included.
fn restriction_table(presheaf: &Presheaf) -> Result<BTreeMap<(usize, usize), RingHom>> {
    let space = presheaf.space();
    let mut table = BTreeMap::new();
    for u in 0..space.open_count() {
        for v in space.opens_within(u) {
            table.insert((u, v), presheaf.restriction(u, v)?);
        }
    }
    Ok(table)
}

fn check_exhaustive(presheaf: &Presheaf, limits: &Limits) -> Result<ExhaustiveReport> {
    let space = presheaf.space();
    let res = restriction_table(presheaf)?;
    let mut failures = Vec::new();

    for u in 0..space.open_count() {
        let within = space.opens_within(u);
        let target = space.open(u).to_vec();
        for mask in 0u32..(1 << within.len()) {
            let cover: Vec<usize> = (0..within.len())
                .filter(|&k| mask >> k & 1 == 1)
                .map(|k| within[k])
                .collect();
            let mut covered: Vec<usize> = Vec::new();
            for &v in &cover {
                covered = union(&covered, space.open(v));
            }
            if covered != target {
                continue;
            }

            // identity axiom
            let section_ring = presheaf.section(u);
            for s in section_ring.elements() {
                if s != section_ring.zero()
                    && cover
                        .iter()
                        .all(|&v| res[&(u, v)].apply(s) == presheaf.section(v).zero())
                {
                    failures.push(AxiomFailure::Identity {
                        open: u,
                        cover: cover.clone(),
                        section: s,
                    });
                }
            }

            // unique gluing for every compatible family
            let mut family_space: u128 = 1;
            for &v in &cover {
                family_space = family_space.saturating_mul(presheaf.section(v).order() as u128);
            }
            if family_space > limits.max_limit_product {
                return Err(Error::Capacity(format!(
                    "cover of open #{u} spans {family_space} candidate families"
                )));
            }
            let mut family = vec![0usize; cover.len()];
            'families: loop {
                let compatible = (0..cover.len()).all(|i| {
                    (i + 1..cover.len()).all(|j| {
                        let (vi, vj) = (cover[i], cover[j]);
                        let meet_members =
                            crate::topology::intersect(space.open(vi), space.open(vj));
                        let meet = space
                            .open_index(&meet_members)
                            .expect("opens are intersection-closed");
                        res[&(vi, meet)].apply(family[i]) == res[&(vj, meet)].apply(family[j])
                    })
                });
                if compatible {
                    let gluings: Vec<usize> = section_ring
                        .elements()
                        .filter(|&s| {
                            (0..cover.len()).all(|i| res[&(u, cover[i])].apply(s) == family[i])
                        })
                        .collect();
                    if gluings.is_empty() {
                        failures.push(AxiomFailure::GluingNone {
                            open: u,
                            cover: cover.clone(),
                            family: family.clone(),
                        });
                    } else if gluings.len() > 1 {
                        failures.push(AxiomFailure::GluingMultiple {
                            open: u,
                            cover: cover.clone(),
                            family: family.clone(),
                            gluings,
                        });
                    }
                }

                for slot in (0..cover.len()).rev() {
                    family[slot] += 1;
                    if family[slot] < presheaf.section(cover[slot]).order() {
                        continue 'families;
                    }
                    family[slot] = 0;
                }
                break;
            }
        }
    }

    Ok(ExhaustiveReport {
        passed: failures.is_empty(),
        failures,
    })
}

/// The diagram of section rings over the distinct minimal opens of the
/// points of `u`, with restriction arrows along inclusions.
pub(crate) fn minimal_open_diagram(presheaf: &Presheaf, u: usize) -> Result<(Diagram, Vec<usize>)> {
    let space = presheaf.space();
    let mut minimal: Vec<usize> = space
        .open(u)
        .iter()
        .map(|&x| space.minimal_open_index(x))
        .collect();
    minimal.sort();
    minimal.dedup();

    let nodes = minimal
        .iter()
        .map(|&m| std::sync::Arc::clone(presheaf.section(m)))
        .collect();
    let mut arrows = BTreeMap::new();
    for (i, &mi) in minimal.iter().enumerate() {
        for (j, &mj) in minimal.iter().enumerate() {
            if i != j && crate::topology::is_subset(space.open(mj), space.open(mi)) {
                arrows.insert((i, j), presheaf.restriction(mi, mj)?);
            }
        }
    }
    Ok((Diagram::new(nodes, arrows)?, minimal))
}

fn check_basis(presheaf: &Presheaf, limits: &Limits) -> Result<BasisReport> {
    let space = presheaf.space();
    let mut failures = Vec::new();
    for u in 0..space.open_count() {
        let (diagram, minimal) = minimal_open_diagram(presheaf, u)?;
        let cone = diagram_limit(&diagram, limits)?;
        let section_ring = presheaf.section(u);

        let mut images = Vec::with_capacity(section_ring.order());
        let mut all_defined = true;
        for s in section_ring.elements() {
            let family: Vec<usize> = minimal
                .iter()
                .map(|&m| presheaf.restriction(u, m).map(|r| r.apply(s)))
                .collect::<Result<_>>()?;
            match cone.family_index(&family) {
                Some(e) => images.push(e),
                None => {
                    all_defined = false;
                    break;
                }
            }
        }
        let injective = all_defined && {
            let mut sorted = images.clone();
            sorted.sort_unstable();
            sorted.dedup();
            sorted.len() == section_ring.order()
        };
        let surjective = all_defined && {
            let mut sorted = images.clone();
            sorted.sort_unstable();
            sorted.dedup();
            sorted.len() == cone.ring.order()
        };
        if !(injective && surjective) {
            failures.push(BasisFailure {
                open: u,
                section_order: section_ring.order(),
                limit_order: cone.ring.order(),
                injective,
                surjective,
            });
        }
    }
    Ok(BasisReport {
        passed: failures.is_empty(),
        failures,
    })
}

/// Runs both strategies (the exhaustive one only on spaces with at most 12
/// opens) and reports every failure found.
pub fn check_sheaf_axioms(presheaf: &Presheaf, limits: &Limits) -> Result<SheafAxiomReport> {
    let exhaustive = if presheaf.space().open_count() <= MAX_OPENS_FOR_COVER_ENUMERATION {
        Some(check_exhaustive(presheaf, limits)?)
    } else {
        None
    };
    let basis = check_basis(presheaf, limits)?;
    Ok(SheafAxiomReport { exhaustive, basis })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hom::RingHom;
    use crate::presheaf::{constant_presheaf, Presheaf};
    use crate::ring::zmod;
    use crate::topology::{discrete, sierpinski};
    use std::collections::BTreeMap;
    use std::sync::Arc;

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn constant_presheaf_on_discrete_space_is_not_a_sheaf() {
        let space = Arc::new(discrete(2));
        let z2 = zmod(2, &lim()).unwrap();
        let presheaf = constant_presheaf(&space, &z2);
        let report = check_sheaf_axioms(&presheaf, &lim()).unwrap();
        assert!(!report.passed());
        let exhaustive = report.exhaustive.unwrap();
        assert!(!exhaustive.passed);
        // F(∅) = Z/2 breaks the empty cover of ∅; identity restrictions to ∅
        // force the two singleton sections of any compatible family to agree,
        // so the failures are extra gluings rather than missing ones.
        assert!(exhaustive
            .failures
            .iter()
            .any(|f| matches!(f, AxiomFailure::GluingMultiple { open: 0, .. })));
        assert!(!report.basis.passed);
    }

    #[test]
    fn constant_functions_fail_gluing_on_discrete_space() {
        // F(U) = Z/2 for nonempty U, F(∅) = 0: the compatible family
        // (1 on {0}, 0 on {1}) has no gluing over {0, 1}.
        let space = Arc::new(discrete(2));
        let z1 = zmod(1, &lim()).unwrap();
        let z2 = zmod(2, &lim()).unwrap();
        let to_zero = RingHom::new(&z2, &z1, vec![0; 2]).unwrap();
        let mut restrictions = BTreeMap::new();
        restrictions.insert((3, 1), RingHom::identity(&z2));
        restrictions.insert((3, 2), RingHom::identity(&z2));
        restrictions.insert((3, 0), to_zero.clone());
        restrictions.insert((1, 0), to_zero.clone());
        restrictions.insert((2, 0), to_zero);
        let sections = vec![z1, z2.clone(), z2.clone(), z2];
        let presheaf = Presheaf::new(&space, sections, restrictions).unwrap();
        let report = check_sheaf_axioms(&presheaf, &lim()).unwrap();
        let exhaustive = report.exhaustive.unwrap();
        assert!(exhaustive
            .failures
            .iter()
            .any(|f| matches!(f, AxiomFailure::GluingNone { open: 3, .. })));
        assert!(!report.basis.passed);
    }

    #[test]
    fn constant_presheaf_fails_already_at_the_empty_open() {
        // F(∅) = Z/2 breaks unique gluing for the empty cover of ∅
        let space = Arc::new(sierpinski());
        let z2 = zmod(2, &lim()).unwrap();
        let presheaf = constant_presheaf(&space, &z2);
        let report = check_sheaf_axioms(&presheaf, &lim()).unwrap();
        let exhaustive = report.exhaustive.unwrap();
        assert!(exhaustive.failures.iter().any(|f| matches!(
            f,
            AxiomFailure::GluingMultiple { open: 0, cover, .. } if cover.is_empty()
        )));
    }

    #[test]
    fn chain_presheaf_with_zero_empty_section_is_a_sheaf() {
        let (_space, presheaf) = crate::corpus::sierpinski_chain_presheaf(&lim()).unwrap();
        let report = check_sheaf_axioms(&presheaf, &lim()).unwrap();
        assert!(report.passed());
        assert!(report.exhaustive.unwrap().passed);
        assert!(report.basis.passed);
    }

    #[test]
    fn basis_and_exhaustive_agree_on_small_examples() {
        let z2 = zmod(2, &lim()).unwrap();
        for space in [Arc::new(discrete(2)), Arc::new(sierpinski()), Arc::new(discrete(3))] {
            let presheaf = constant_presheaf(&space, &z2);
            let report = check_sheaf_axioms(&presheaf, &lim()).unwrap();
            assert_eq!(
                report.basis.passed,
                report.exhaustive.as_ref().unwrap().passed
            );
        }
    }
}
