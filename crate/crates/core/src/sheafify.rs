//! Two sheafification operators, the universal-property checker, and
//! machinery for comparing presheaves up to natural isomorphism.
//!
//! Both operators assign to each open a projective limit of section rings:
//!
//! * `sheafify_standard` takes the limit over the minimal open
//!   neighborhoods of the points of the open. On finite (Alexandrov)
//!   spaces this computes the sheafification.
//! * `sheafify_proper_limit` takes the limit over the *proper* open
//!   subsets of the open (keeping the original sections on minimal
//!   nonempty opens, where that index set is empty). This operator is the
//!   subject of the divergence analysis: it does not agree with the
//!   standard one in general, and the comparison tooling here produces the
//!   witnesses.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::diagram::{diagram_limit, Diagram, LimitCone};
use crate::error::{Error, Result};
use crate::hom::{enumerate_homs, find_isomorphism, RingHom};
use crate::limits::Limits;
use crate::presheaf::{Presheaf, PresheafMorphism};
use crate::ring::FiniteRing;
use crate::sheaf_axioms::check_sheaf_axioms;
use crate::topology::is_subset;

/// Whether the proper-subset index of the limit includes the empty open.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EmptySetConvention {
    /// Index over nonempty proper subopens (the default reading).
    ExcludeEmpty,
    /// Index over all proper subopens including ∅.
    IncludeEmpty,
}

/// Per-open data of a limit-built presheaf.
enum LocalData {
    /// The empty open: always the zero ring.
    Zero,
    /// An open whose index set is empty: the input section is kept.
    Copy,
    /// A genuine limit with its cone.
    Cone(LimitCone),
}

impl LocalData {
    fn family_of(&self, element: usize) -> Vec<usize> {
        match self {
            LocalData::Zero => Vec::new(),
            LocalData::Copy => vec![element],
            LocalData::Cone(cone) => cone.families[element].clone(),
        }
    }

    fn element_of(&self, family: &[usize]) -> Option<usize> {
        match self {
            LocalData::Zero => family.is_empty().then_some(0),
            LocalData::Copy => (family.len() == 1).then(|| family[0]),
            LocalData::Cone(cone) => cone.family_index(family),
        }
    }
}

fn zero_ring(limits: &Limits) -> Result<Arc<FiniteRing>> {
    FiniteRing::from_tables(1, vec![0], vec![0], 0, 0, "lim()".to_string(), limits)
}

/// Shared builder: for each open, a limit over the listed index opens of
/// the input's sections (with restriction arrows along inclusion), plus
/// the canonical morphism sending a section to its family of restrictions.
///
/// `node_opens[u]` must be sorted and, for every inclusion w ⊆ u, satisfy
/// node_opens[w] ⊆ node_opens[u]; restrictions are then component
/// selections.
fn limit_presheaf(
    input: &Presheaf,
    node_opens: &[Vec<usize>],
    limits: &Limits,
) -> Result<(Presheaf, PresheafMorphism)> {
    let space = input.space();
    let empty_index = space.empty_index();

    let mut data = Vec::with_capacity(space.open_count());
    let mut sections = Vec::with_capacity(space.open_count());
    for u in 0..space.open_count() {
        if u == empty_index {
            data.push(LocalData::Zero);
            sections.push(zero_ring(limits)?);
        } else if node_opens[u].is_empty() {
            data.push(LocalData::Copy);
            sections.push(Arc::clone(input.section(u)));
        } else {
            let nodes = node_opens[u]
                .iter()
                .map(|&v| Arc::clone(input.section(v)))
                .collect();
            let mut arrows = BTreeMap::new();
            for (i, &vi) in node_opens[u].iter().enumerate() {
                for (j, &vj) in node_opens[u].iter().enumerate() {
                    if i != j && is_subset(space.open(vj), space.open(vi)) {
                        arrows.insert((i, j), input.restriction(vi, vj)?);
                    }
                }
            }
            let cone = diagram_limit(&Diagram::new(nodes, arrows)?, limits)?;
            sections.push(Arc::clone(&cone.ring));
            data.push(LocalData::Cone(cone));
        }
    }

    // index list of the copy-case open itself, for uniform family handling
    let effective_nodes = |u: usize| -> Vec<usize> {
        match data[u] {
            LocalData::Zero => Vec::new(),
            LocalData::Copy => vec![u],
            LocalData::Cone(_) => node_opens[u].clone(),
        }
    };

    let mut restrictions = BTreeMap::new();
    for u in 0..space.open_count() {
        let nodes_u = effective_nodes(u);
        for w in space.opens_within(u) {
            if w == u {
                continue;
            }
            let nodes_w = effective_nodes(w);
            let positions: Vec<usize> = nodes_w
                .iter()
                .map(|m| {
                    nodes_u.binary_search(m).map_err(|_| {
                        Error::Verification(format!(
                            "index open {m} of open #{w} does not appear in the index of open #{u}"
                        ))
                    })
                })
                .collect::<Result<_>>()?;
            let mut table = Vec::with_capacity(sections[u].order());
            for e in sections[u].elements() {
                let family_u = data[u].family_of(e);
                let family_w: Vec<usize> = positions.iter().map(|&p| family_u[p]).collect();
                let downstairs = data[w].element_of(&family_w).ok_or_else(|| {
                    Error::Verification(format!(
                        "selected components of a compatible family over open #{u} are not compatible over open #{w}"
                    ))
                })?;
                table.push(downstairs);
            }
            restrictions.insert((u, w), RingHom::new(&sections[u], &sections[w], table)?);
        }
    }

    let output = Presheaf::new(space, sections, restrictions)?;

    let mut components = Vec::with_capacity(space.open_count());
    for u in 0..space.open_count() {
        let nodes_u = effective_nodes(u);
        let mut table = Vec::with_capacity(input.section(u).order());
        for s in input.section(u).elements() {
            let family: Vec<usize> = nodes_u
                .iter()
                .map(|&v| input.restriction(u, v).map(|r| r.apply(s)))
                .collect::<Result<_>>()?;
            let e = data[u].element_of(&family).ok_or_else(|| {
                Error::Verification(format!(
                    "restrictions of a section over open #{u} do not form a compatible family"
                ))
            })?;
            table.push(e);
        }
        components.push(RingHom::new(input.section(u), output.section(u), table)?);
    }
    let theta = PresheafMorphism::new(input, &output, components)?;
    Ok((output, theta))
}

/// Sheafification via limits over minimal open neighborhoods. The output
/// is verified to satisfy both sheaf-axiom strategies before being
/// returned.
pub fn sheafify_standard(
    input: &Presheaf,
    limits: &Limits,
) -> Result<(Presheaf, PresheafMorphism)> {
    let space = input.space();
    let node_opens: Vec<Vec<usize>> = (0..space.open_count())
        .map(|u| {
            let mut minimal: Vec<usize> = space
                .open(u)
                .iter()
                .map(|&x| space.minimal_open_index(x))
                .collect();
            minimal.sort();
            minimal.dedup();
            minimal
        })
        .collect();
    let (output, theta) = limit_presheaf(input, &node_opens, limits)?;
    let report = check_sheaf_axioms(&output, limits)?;
    if !report.passed() {
        return Err(Error::Verification(
            "minimal-open sheafification produced a non-sheaf; this is a bug".into(),
        ));
    }
    Ok((output, theta))
}

/// The limit-over-proper-subopens operator, returned together with its
/// canonical morphism (section ↦ family of restrictions). No sheaf check
/// is imposed on the output: whether and when it is a sheaf is exactly
/// what the divergence analysis investigates.
pub fn sheafify_proper_limit(
    input: &Presheaf,
    convention: EmptySetConvention,
    limits: &Limits,
) -> Result<(Presheaf, PresheafMorphism)> {
    let space = input.space();
    let empty_index = space.empty_index();
    let node_opens: Vec<Vec<usize>> = (0..space.open_count())
        .map(|u| {
            space
                .opens_within(u)
                .into_iter()
                .filter(|&v| v != u)
                .filter(|&v| convention == EmptySetConvention::IncludeEmpty || v != empty_index)
                .collect()
        })
        .collect();
    limit_presheaf(input, &node_opens, limits)
}

/// Outcome of the factorization search for the universal property.
#[derive(Debug)]
pub enum Factorization {
    /// No morphism ψ with ψ ∘ θ = φ exists.
    None,
    /// Exactly one exists.
    Unique(PresheafMorphism),
    /// Several exist: uniqueness fails.
    Multiple { count: usize },
}

/// Exhaustively searches for morphisms ψ: candidate → g with ψ ∘ θ = φ,
/// where θ: f → candidate and φ: f → g. The target g must be a sheaf
/// (basis criterion); the search is over per-open homomorphism sets with
/// naturality enforced, guarded by the configured search budget.
pub fn check_universal_property(
    theta: &PresheafMorphism,
    phi: &PresheafMorphism,
    limits: &Limits,
) -> Result<Factorization> {
    let f = theta.source();
    let candidate = theta.target();
    let g = phi.target();
    if !crate::topology::FiniteTopology::same(f.space(), phi.source().space())
        || f.sections()
            .iter()
            .zip(phi.source().sections())
            .any(|(a, b)| !FiniteRing::same(a, b))
    {
        return Err(Error::Invalid(
            "the two morphisms must start at the same presheaf".into(),
        ));
    }
    let g_report = check_sheaf_axioms(g, limits)?;
    if !g_report.basis.passed {
        return Err(Error::Invalid(
            "the factorization target must be a sheaf".into(),
        ));
    }

    let opens = candidate.space().open_count();
    let mut per_open: Vec<Vec<RingHom>> = Vec::with_capacity(opens);
    let mut space_size: u128 = 1;
    for u in 0..opens {
        let all = enumerate_homs(candidate.section(u), g.section(u), limits)?;
        let factoring: Vec<RingHom> = all
            .into_iter()
            .filter(|h| {
                f.section(u)
                    .elements()
                    .all(|s| h.apply(theta.component(u).apply(s)) == phi.component(u).apply(s))
            })
            .collect();
        space_size = space_size.saturating_mul(factoring.len().max(1) as u128);
        if space_size > limits.max_search {
            return Err(Error::Capacity(
                "factorization search space exceeds the configured budget".into(),
            ));
        }
        if factoring.is_empty() {
            return Ok(Factorization::None);
        }
        per_open.push(factoring);
    }

    let strict_pairs: Vec<(usize, usize)> = candidate
        .strict_restrictions()
        .keys()
        .copied()
        .collect();
    let mut chosen: Vec<usize> = Vec::with_capacity(opens);
    let mut solutions: Vec<Vec<usize>> = Vec::new();
    fn dfs(
        u: usize,
        opens: usize,
        per_open: &[Vec<RingHom>],
        strict_pairs: &[(usize, usize)],
        candidate: &Presheaf,
        g: &Presheaf,
        chosen: &mut Vec<usize>,
        solutions: &mut Vec<Vec<usize>>,
    ) -> Result<()> {
        if u == opens {
            solutions.push(chosen.clone());
            return Ok(());
        }
        'next: for (k, h) in per_open[u].iter().enumerate() {
            for &(a, b) in strict_pairs {
                let (other, first_is_a) = if a == u && b < u {
                    (b, true)
                } else if b == u && a < u {
                    (a, false)
                } else {
                    continue;
                };
                let (hi, lo, big, small) = if first_is_a {
                    (h, &per_open[other][chosen[other]], u, other)
                } else {
                    (&per_open[other][chosen[other]], h, other, u)
                };
                let down_then = candidate.restriction(big, small)?.then(lo)?;
                let then_down = hi.then(&g.restriction(big, small)?)?;
                if down_then.image_table() != then_down.image_table() {
                    continue 'next;
                }
            }
            chosen.push(k);
            dfs(u + 1, opens, per_open, strict_pairs, candidate, g, chosen, solutions)?;
            chosen.pop();
        }
        Ok(())
    }
    dfs(
        0,
        opens,
        &per_open,
        &strict_pairs,
        candidate,
        g,
        &mut chosen,
        &mut solutions,
    )?;

    match solutions.len() {
        0 => Ok(Factorization::None),
        1 => {
            let components: Vec<RingHom> = solutions[0]
                .iter()
                .enumerate()
                .map(|(u, &k)| per_open[u][k].clone())
                .collect();
            Ok(Factorization::Unique(PresheafMorphism::new(
                candidate, g, components,
            )?))
        }
        n => Ok(Factorization::Multiple { count: n }),
    }
}

/// Searches for a natural isomorphism between two presheaves on the same
/// space (exhaustive over per-open ring isomorphisms, with naturality
/// pruning).
pub fn find_presheaf_isomorphism(
    a: &Presheaf,
    b: &Presheaf,
    limits: &Limits,
) -> Result<Option<PresheafMorphism>> {
    if !crate::topology::FiniteTopology::same(a.space(), b.space()) {
        return Err(Error::Invalid("presheaves live on different spaces".into()));
    }
    let opens = a.space().open_count();
    let mut per_open: Vec<Vec<RingHom>> = Vec::with_capacity(opens);
    let mut space_size: u128 = 1;
    for u in 0..opens {
        let isos: Vec<RingHom> = enumerate_homs(a.section(u), b.section(u), limits)?
            .into_iter()
            .filter(|h| h.is_bijective())
            .collect();
        if isos.is_empty() {
            return Ok(None);
        }
        space_size = space_size.saturating_mul(isos.len() as u128);
        if space_size > limits.max_search {
            return Err(Error::Capacity(
                "isomorphism search space exceeds the configured budget".into(),
            ));
        }
        per_open.push(isos);
    }

    let strict_pairs: Vec<(usize, usize)> = a.strict_restrictions().keys().copied().collect();
    let mut chosen: Vec<usize> = Vec::new();
    fn dfs(
        u: usize,
        opens: usize,
        per_open: &[Vec<RingHom>],
        strict_pairs: &[(usize, usize)],
        a: &Presheaf,
        b: &Presheaf,
        chosen: &mut Vec<usize>,
    ) -> Result<Option<Vec<usize>>> {
        if u == opens {
            return Ok(Some(chosen.clone()));
        }
        'next: for k in 0..per_open[u].len() {
            for &(big, small) in strict_pairs {
                let (hi, lo) = if big == u && small < u {
                    (&per_open[u][k], &per_open[small][chosen[small]])
                } else if small == u && big < u {
                    (&per_open[big][chosen[big]], &per_open[u][k])
                } else {
                    continue;
                };
                let down_then = a.restriction(big, small)?.then(lo)?;
                let then_down = hi.then(&b.restriction(big, small)?)?;
                if down_then.image_table() != then_down.image_table() {
                    continue 'next;
                }
            }
            chosen.push(k);
            if let Some(hit) = dfs(u + 1, opens, per_open, strict_pairs, a, b, chosen)? {
                return Ok(Some(hit));
            }
            chosen.pop();
        }
        Ok(None)
    }
    let hit = dfs(0, opens, &per_open, &strict_pairs, a, b, &mut chosen)?;
    match hit {
        Some(assignment) => {
            let components: Vec<RingHom> = assignment
                .iter()
                .enumerate()
                .map(|(u, &k)| per_open[u][k].clone())
                .collect();
            Ok(Some(PresheafMorphism::new(a, b, components)?))
        }
        None => Ok(None),
    }
}

/// Per-open outcome of comparing two presheaves.
#[derive(Debug, Clone, Serialize)]
pub struct OpenComparison {
    pub open: usize,
    pub members: Vec<usize>,
    pub order_a: usize,
    pub order_b: usize,
    pub sections_isomorphic: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PresheafComparison {
    pub per_open: Vec<OpenComparison>,
    /// All sections isomorphic AND a natural isomorphism exists.
    pub agree: bool,
    /// The first open (canonical order) whose sections are not isomorphic.
    pub first_divergence: Option<usize>,
}

/// Compares two presheaves on the same space: per-open section orders and
/// isomorphy, then (if all sections match) a search for a full natural
/// isomorphism.
pub fn compare_presheaves(
    a: &Presheaf,
    b: &Presheaf,
    limits: &Limits,
) -> Result<PresheafComparison> {
    if !crate::topology::FiniteTopology::same(a.space(), b.space()) {
        return Err(Error::Invalid("presheaves live on different spaces".into()));
    }
    let mut per_open = Vec::new();
    for u in 0..a.space().open_count() {
        let iso = find_isomorphism(a.section(u), b.section(u), limits)?;
        per_open.push(OpenComparison {
            open: u,
            members: a.space().open(u).to_vec(),
            order_a: a.section(u).order(),
            order_b: b.section(u).order(),
            sections_isomorphic: iso.is_some(),
        });
    }
    let first_divergence = per_open
        .iter()
        .find(|c| !c.sections_isomorphic)
        .map(|c| c.open);
    let agree = first_divergence.is_none()
        && find_presheaf_isomorphism(a, b, limits)?.is_some();
    Ok(PresheafComparison {
        per_open,
        agree,
        first_divergence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presheaf::constant_presheaf;
    use crate::ring::zmod;
    use crate::topology::discrete;

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn standard_operator_on_constant_presheaf_over_three_points() {
        let space = Arc::new(discrete(3));
        let z2 = zmod(2, &lim()).unwrap();
        let presheaf = constant_presheaf(&space, &z2);
        let (sheaf, theta) = sheafify_standard(&presheaf, &lim()).unwrap();
        let full = space.open_count() - 1;
        assert_eq!(sheaf.section(full).order(), 8);
        assert_eq!(sheaf.section(0).order(), 1);
        // θ on the full open is the diagonal
        assert!(theta.component(full).is_injective());
    }

    #[test]
    fn standard_operator_fixes_sheaves() {
        let (_space, presheaf) = crate::corpus::sierpinski_chain_presheaf(&lim()).unwrap();
        let (_sheaf, theta) = sheafify_standard(&presheaf, &lim()).unwrap();
        assert!(theta.is_isomorphism());
    }

    #[test]
    fn standard_operator_is_idempotent_up_to_natural_isomorphism() {
        let space = Arc::new(discrete(2));
        let z3 = zmod(3, &lim()).unwrap();
        let presheaf = constant_presheaf(&space, &z3);
        let (once, _) = sheafify_standard(&presheaf, &lim()).unwrap();
        let (twice, theta2) = sheafify_standard(&once, &lim()).unwrap();
        assert!(theta2.is_isomorphism());
        assert!(find_presheaf_isomorphism(&once, &twice, &lim())
            .unwrap()
            .is_some());
    }

    #[test]
    fn proper_limit_diverges_on_three_point_constant_presheaf() {
        let space = Arc::new(discrete(3));
        let z2 = zmod(2, &lim()).unwrap();
        let presheaf = constant_presheaf(&space, &z2);
        let (standard, _) = sheafify_standard(&presheaf, &lim()).unwrap();
        let (proper, _) =
            sheafify_proper_limit(&presheaf, EmptySetConvention::ExcludeEmpty, &lim()).unwrap();
        let full = space.open_count() - 1;
        assert_eq!(proper.section(full).order(), 2);
        assert_eq!(standard.section(full).order(), 8);
        let cmp = compare_presheaves(&proper, &standard, &lim()).unwrap();
        assert!(!cmp.agree);
        assert_eq!(cmp.first_divergence, Some(full));
    }

    #[test]
    fn operators_agree_on_two_point_discrete_space() {
        let space = Arc::new(discrete(2));
        let z2 = zmod(2, &lim()).unwrap();
        let presheaf = constant_presheaf(&space, &z2);
        let (standard, _) = sheafify_standard(&presheaf, &lim()).unwrap();
        let (proper, _) =
            sheafify_proper_limit(&presheaf, EmptySetConvention::ExcludeEmpty, &lim()).unwrap();
        let full = space.open_count() - 1;
        assert_eq!(proper.section(full).order(), 4);
        let cmp = compare_presheaves(&proper, &standard, &lim()).unwrap();
        assert!(cmp.agree);
    }

    #[test]
    fn proper_limit_shrinks_the_sierpinski_sheaf() {
        let (_space, presheaf) = crate::corpus::sierpinski_chain_presheaf(&lim()).unwrap();
        let (proper, _) =
            sheafify_proper_limit(&presheaf, EmptySetConvention::ExcludeEmpty, &lim()).unwrap();
        // the input was a sheaf with order 4 on the full open; the proper
        // limit sees only the single open point and drops to order 2
        assert_eq!(proper.section(2).order(), 2);
        let (standard, _) = sheafify_standard(&presheaf, &lim()).unwrap();
        let cmp = compare_presheaves(&proper, &standard, &lim()).unwrap();
        assert_eq!(cmp.first_divergence, Some(2));
    }

    #[test]
    fn universal_property_of_the_standard_operator() {
        let space = Arc::new(discrete(2));
        let z2 = zmod(2, &lim()).unwrap();
        let presheaf = constant_presheaf(&space, &z2);
        let (sheaf, theta) = sheafify_standard(&presheaf, &lim()).unwrap();
        // factor θ through itself: the unique ψ is the identity
        let outcome = check_universal_property(&theta, &theta, &lim()).unwrap();
        match outcome {
            Factorization::Unique(psi) => {
                assert!(psi.is_isomorphism());
                for u in 0..sheaf.space().open_count() {
                    assert!(psi.component(u).image_table().iter().enumerate().all(|(i, &v)| i == v));
                }
            }
            other => panic!("expected a unique factorization, got {other:?}"),
        }
    }

    #[test]
    fn universal_property_fails_for_the_proper_limit_on_sierpinski() {
        let (_space, presheaf) = crate::corpus::sierpinski_chain_presheaf(&lim()).unwrap();
        let (_proper, theta) =
            sheafify_proper_limit(&presheaf, EmptySetConvention::ExcludeEmpty, &lim()).unwrap();
        // the input is itself a sheaf; ask for ψ with ψ ∘ θ = id. On the
        // full open θ collapses Z/4 onto Z/2, so no ψ can recover it.
        let identity = PresheafMorphism::new(
            &presheaf,
            &presheaf,
            presheaf
                .sections()
                .iter()
                .map(RingHom::identity)
                .collect(),
        )
        .unwrap();
        let outcome = check_universal_property(&theta, &identity, &lim()).unwrap();
        assert!(matches!(outcome, Factorization::None));
    }

    #[test]
    fn include_empty_convention_collapses_minimal_opens() {
        let (_space, presheaf) = crate::corpus::sierpinski_chain_presheaf(&lim()).unwrap();
        let (proper, _) =
            sheafify_proper_limit(&presheaf, EmptySetConvention::IncludeEmpty, &lim()).unwrap();
        // minimal nonempty open now indexes over {∅} alone, and the input's
        // ∅-section is the zero ring
        assert_eq!(proper.section(1).order(), 1);
    }
}
