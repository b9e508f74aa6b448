//! Affine schemes of finite rings: the structure sheaf on the prime spectrum,
//! built from localizations, together with end-to-end verifiers for its
//! defining properties — the sheaf axioms, the comparison of basic sections
//! with localizations, stalks, and the projective-limit description of
//! sections over arbitrary opens.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde_json::json;

use crate::diagram::{diagram_limit, Diagram};
use crate::error::Error;
use crate::hom::{find_isomorphism, RingHom};
use crate::ideal::{annihilator, radical};
use crate::limits::Limits;
use crate::localize::{localize_at_element, localize_at_prime, LocalizedRing};
use crate::presheaf::Presheaf;
use crate::report::CheckReport;
use crate::ring::{product_many, FiniteRing, ProductData};
use crate::sheaf_axioms::{check_sheaf_axioms, SheafAxiomReport};
use crate::sheafify::sheafify_standard;
use crate::spec_space::{basic_open, spec, vanishing_set, SpecSpace};
use crate::stalk::stalk;
use crate::Result;

/// Explicit description of the section ring over one open: the points of the
/// open, each section as its family of local components, and — when the
/// search succeeds — a fraction normal form (a, b) with the section equal to
/// rho(a) * rho(b)^-1 and b invertible at every point of the open.
#[derive(Debug, Clone)]
pub struct SectionData {
    pub points: Vec<usize>,
    pub families: Vec<Vec<usize>>,
    pub normal_forms: Vec<Option<(usize, usize)>>,
}

/// The prime spectrum of a finite commutative ring with its structure sheaf,
/// all localizations precomputed, and the results of the construction-time
/// sanity checks.
#[derive(Debug, Clone)]
pub struct AffineScheme {
    ring: Arc<FiniteRing>,
    space: SpecSpace,
    structure: Presheaf,
    local_at_prime: Vec<LocalizedRing>,
    local_at_element: Vec<LocalizedRing>,
    ambient: Vec<ProductData>,
    ambient_members: Vec<Vec<usize>>,
    section_data: Vec<SectionData>,
    rho: Vec<RingHom>,
    sheaf_report: SheafAxiomReport,
    theta_is_isomorphism: bool,
}

impl AffineScheme {
    pub fn ring(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    pub fn space(&self) -> &SpecSpace {
        &self.space
    }

    pub fn structure(&self) -> &Presheaf {
        &self.structure
    }

    /// The localization at the prime with the given point index.
    pub fn local_at_prime(&self, point: usize) -> &LocalizedRing {
        &self.local_at_prime[point]
    }

    /// The localization at the powers of the given ring element.
    pub fn local_at_element(&self, f: usize) -> &LocalizedRing {
        &self.local_at_element[f]
    }

    pub fn section_data(&self, open: usize) -> &SectionData {
        &self.section_data[open]
    }

    /// The canonical map from the ring to the sections over the given open.
    pub fn rho(&self, open: usize) -> &RingHom {
        &self.rho[open]
    }

    pub fn sheaf_report(&self) -> &SheafAxiomReport {
        &self.sheaf_report
    }

    /// Whether the comparison map into the standard sheafification is an
    /// isomorphism (the presheaf was already a sheaf).
    pub fn theta_is_isomorphism(&self) -> bool {
        self.theta_is_isomorphism
    }

    /// Looks up the section over `open` whose family of local components is
    /// the given tuple (ordered like `section_data(open).points`).
    pub fn section_index_of_family(&self, open: usize, family: &[usize]) -> Option<usize> {
        if family.len() != self.section_data[open].points.len() {
            return None;
        }
        let code = self.ambient[open].encode(family);
        self.ambient_members[open].binary_search(&code).ok()
    }

    fn missing_normal_forms(&self) -> Vec<(usize, usize)> {
        let mut missing = Vec::new();
        for (u, data) in self.section_data.iter().enumerate() {
            for (s, nf) in data.normal_forms.iter().enumerate() {
                if nf.is_none() {
                    missing.push((u, s));
                }
            }
        }
        missing
    }
}

/// Constructs the scheme without judging the check outcomes; errors only on
/// capacity or internal inconsistencies.
fn build(ring: &Arc<FiniteRing>, limits: &Limits) -> Result<AffineScheme> {
    let space = spec(ring, limits)?;
    let topo = Arc::clone(space.topology());

    let local_at_prime: Vec<LocalizedRing> = space
        .points()
        .iter()
        .map(|p| localize_at_prime(ring, p, limits))
        .collect::<Result<_>>()?;
    let local_at_element: Vec<LocalizedRing> = ring
        .elements()
        .map(|f| localize_at_element(ring, f, limits))
        .collect::<Result<_>>()?;

    let mut sections: Vec<Arc<FiniteRing>> = Vec::with_capacity(topo.open_count());
    let mut ambient: Vec<ProductData> = Vec::with_capacity(topo.open_count());
    let mut ambient_members: Vec<Vec<usize>> = Vec::with_capacity(topo.open_count());
    let mut section_data: Vec<SectionData> = Vec::with_capacity(topo.open_count());
    let mut rho: Vec<RingHom> = Vec::with_capacity(topo.open_count());

    for u in 0..topo.open_count() {
        let points: Vec<usize> = topo.open(u).to_vec();
        let factors: Vec<Arc<FiniteRing>> = points
            .iter()
            .map(|&p| Arc::clone(local_at_prime[p].ring()))
            .collect();
        let amb = product_many(&factors, limits)?;

        // image of the ring inside the product of its localizations
        let image: Vec<usize> = ring
            .elements()
            .map(|a| {
                let family: Vec<usize> = points
                    .iter()
                    .map(|&p| local_at_prime[p].map().apply(a))
                    .collect();
                amb.encode(&family)
            })
            .collect();

        // sections = subring generated by the image and the inverses of its
        // invertible members; closing under + and * suffices in a finite ring
        let mut members: BTreeSet<usize> = image.iter().copied().collect();
        for &x in &image {
            if let Some(inv) = amb.ring.inverse(x) {
                members.insert(inv);
            }
        }
        loop {
            let snapshot: Vec<usize> = members.iter().copied().collect();
            let before = members.len();
            for &x in &snapshot {
                for &y in &snapshot {
                    members.insert(amb.ring.add(x, y));
                    members.insert(amb.ring.mul(x, y));
                }
            }
            if members.len() == before {
                break;
            }
        }
        let members: Vec<usize> = members.into_iter().collect();
        let pos: BTreeMap<usize, usize> = members
            .iter()
            .enumerate()
            .map(|(i, &x)| (x, i))
            .collect();

        let order = members.len();
        let mut add = Vec::with_capacity(order * order);
        let mut mul = Vec::with_capacity(order * order);
        for &x in &members {
            for &y in &members {
                add.push(pos[&amb.ring.add(x, y)]);
                mul.push(pos[&amb.ring.mul(x, y)]);
            }
        }
        let labels: Vec<String> = points.iter().map(|p| p.to_string()).collect();
        let presentation = format!("O({{{}}}; {})", labels.join(","), ring.presentation());
        let section_ring = FiniteRing::from_tables(
            order,
            add,
            mul,
            pos[&amb.ring.zero()],
            pos[&amb.ring.one()],
            presentation,
            limits,
        )?;

        let rho_table: Vec<usize> = image.iter().map(|x| pos[x]).collect();
        let rho_u = RingHom::new(ring, &section_ring, rho_table.clone())?;

        let families: Vec<Vec<usize>> = members.iter().map(|&x| amb.decode(x)).collect();

        // fraction normal forms: s = rho(a) * rho(b)^-1 with b invertible at
        // every point of the open (first such pair in lexicographic order)
        let mut normal_forms: Vec<Option<(usize, usize)>> = vec![None; order];
        for s in 0..order {
            'search: for a in ring.elements() {
                for b in ring.elements() {
                    if points.iter().any(|&p| space.point(p).contains(b)) {
                        continue;
                    }
                    let rb = rho_table[b];
                    let Some(rb_inv) = section_ring.inverse(rb) else {
                        continue;
                    };
                    if section_ring.mul(rho_table[a], rb_inv) == s {
                        normal_forms[s] = Some((a, b));
                        break 'search;
                    }
                }
            }
        }

        sections.push(section_ring);
        ambient.push(amb);
        ambient_members.push(members);
        section_data.push(SectionData {
            points,
            families,
            normal_forms,
        });
        rho.push(rho_u);
    }

    // restrictions forget the components of the points that drop out
    let mut restrictions = BTreeMap::new();
    for u in 0..topo.open_count() {
        for v in topo.opens_within(u) {
            if v == u {
                continue;
            }
            let select: Vec<usize> = section_data[v]
                .points
                .iter()
                .map(|p| {
                    section_data[u]
                        .points
                        .iter()
                        .position(|q| q == p)
                        .expect("points of a subopen are points of the open")
                })
                .collect();
            let table: Vec<usize> = ambient_members[u]
                .iter()
                .map(|&x| {
                    let family = ambient[u].decode(x);
                    let sub: Vec<usize> = select.iter().map(|&k| family[k]).collect();
                    let code = ambient[v].encode(&sub);
                    ambient_members[v].binary_search(&code).map_err(|_| {
                        Error::Verification(format!(
                            "restriction of a section over open #{u} left the section ring over open #{v}; this is a bug"
                        ))
                    })
                })
                .collect::<Result<_>>()?;
            restrictions.insert((u, v), RingHom::new(&sections[u], &sections[v], table)?);
        }
    }
    let structure = Presheaf::new(&topo, sections, restrictions)?;

    let sheaf_report = check_sheaf_axioms(&structure, limits)?;
    let (_sheafified, theta) = sheafify_standard(&structure, limits)?;
    let theta_is_isomorphism = theta.is_isomorphism();

    Ok(AffineScheme {
        ring: Arc::clone(ring),
        space,
        structure,
        local_at_prime,
        local_at_element,
        ambient,
        ambient_members,
        section_data,
        rho,
        sheaf_report,
        theta_is_isomorphism,
    })
}

fn structure_report(scheme: &AffineScheme) -> CheckReport {
    let ring = scheme.ring.presentation().to_string();
    let missing = scheme.missing_normal_forms();
    if scheme.sheaf_report.passed() && scheme.theta_is_isomorphism && missing.is_empty() {
        CheckReport::pass(ring, "lemma31").with_note(format!(
            "sheaf axioms hold on all {} opens; the comparison map into the sheafification is an isomorphism; every section has a fraction normal form",
            scheme.structure.space().open_count()
        ))
    } else {
        CheckReport::fail(
            ring,
            "lemma31",
            json!({
                "sheaf_axioms": scheme.sheaf_report,
                "sheafification_comparison_is_isomorphism": scheme.theta_is_isomorphism,
                "sections_without_normal_form": missing,
            }),
        )
    }
}

/// Builds the structure sheaf of Spec of the ring as a presheaf value.
pub fn structure_presheaf(ring: &Arc<FiniteRing>, limits: &Limits) -> Result<Presheaf> {
    Ok(build(ring, limits)?.structure)
}

/// Constructs the affine scheme and insists that its structure presheaf
/// passes the sheaf checks; a failure here is a verification error.
pub fn affine_scheme(ring: &Arc<FiniteRing>, limits: &Limits) -> Result<AffineScheme> {
    let scheme = build(ring, limits)?;
    let report = structure_report(&scheme);
    if !report.passed() {
        return Err(Error::Verification(format!(
            "structure presheaf of {} failed its sheaf checks: {}",
            scheme.ring.presentation(),
            serde_json::to_string(&report.witness).unwrap_or_default()
        )));
    }
    Ok(scheme)
}

/// Builds the structure presheaf and reports — without failing — whether it
/// satisfies the sheaf axioms, whether sheafification changes it, and whether
/// every section admits a fraction normal form.
pub fn verify_structure_sheaf(ring: &Arc<FiniteRing>, limits: &Limits) -> Result<CheckReport> {
    let scheme = build(ring, limits)?;
    Ok(structure_report(&scheme))
}

/// The comparison map from a localization at one element to the sections
/// over its basic open, with every well-definedness failure witnessed.
pub(crate) struct BasicComparison {
    pub open: usize,
    pub hom: Option<RingHom>,
    pub failures: Vec<serde_json::Value>,
}

/// Sends the class of (a, t) to the section whose component at each point p
/// of the basic open is the class of (a, t) in the localization at p.
pub(crate) fn compare_basic(scheme: &AffineScheme, f: usize) -> Result<BasicComparison> {
    if f >= scheme.ring.order() {
        return Err(Error::Invalid(format!("element {f} out of range")));
    }
    let loc = &scheme.local_at_element[f];
    let open = basic_open(&scheme.space, f)?.index();
    let points = scheme.section_data[open].points.clone();
    let mut failures: Vec<serde_json::Value> = Vec::new();

    let pair_section = |a: usize, t: usize| -> Option<usize> {
        let mut family = Vec::with_capacity(points.len());
        for &p in &points {
            family.push(scheme.local_at_prime[p].class_of_pair(a, t)?);
        }
        scheme.section_index_of_family(open, &family)
    };

    let mut table = Vec::with_capacity(loc.ring().order());
    for class in 0..loc.ring().order() {
        let mut chosen: Option<usize> = None;
        for &(a, t) in loc.pairs_of_class(class) {
            match pair_section(a, t) {
                None => failures.push(json!({
                    "class": class,
                    "pair": [a, t],
                    "reason": "the pair has no image among the sections",
                })),
                Some(s) => match chosen {
                    None => chosen = Some(s),
                    Some(prev) if prev != s => failures.push(json!({
                        "class": class,
                        "pair": [a, t],
                        "reason": "the image depends on the representative",
                        "sections": [prev, s],
                    })),
                    _ => {}
                },
            }
        }
        table.push(chosen.unwrap_or(0));
    }
    if !failures.is_empty() {
        return Ok(BasicComparison {
            open,
            hom: None,
            failures,
        });
    }

    let section_ring = scheme.structure.section(open);
    let hom = match RingHom::new(loc.ring(), section_ring, table) {
        Ok(h) => h,
        Err(e) => {
            failures.push(json!({
                "reason": "the pairwise map is not a ring homomorphism",
                "detail": e.to_string(),
            }));
            return Ok(BasicComparison {
                open,
                hom: None,
                failures,
            });
        }
    };

    // the comparison must factor the canonical map of the base ring
    for a in scheme.ring.elements() {
        if hom.apply(loc.map().apply(a)) != scheme.rho[open].apply(a) {
            failures.push(json!({
                "reason": "the comparison does not factor the canonical map",
                "element": a,
            }));
        }
    }
    if !failures.is_empty() {
        return Ok(BasicComparison {
            open,
            hom: None,
            failures,
        });
    }
    Ok(BasicComparison {
        open,
        hom: Some(hom),
        failures,
    })
}

/// Verifies that the localization at f is isomorphic — via the canonical
/// comparison — to the sections over the basic open of f, and cross-checks
/// both inclusions of the textbook proof: the kernel chain through
/// annihilators and radicals, and the fraction chain through normal forms.
pub fn verify_basic_sections(
    scheme: &AffineScheme,
    f: usize,
    _limits: &Limits,
) -> Result<CheckReport> {
    let ring_name = scheme.ring.presentation().to_string();
    let comparison = compare_basic(scheme, f)?;
    let open = comparison.open;
    let loc = &scheme.local_at_element[f];
    let mut failures = comparison.failures;

    if let Some(hom) = &comparison.hom {
        let section_ring = scheme.structure.section(open);
        if !hom.is_injective() {
            failures.push(json!({ "reason": "the comparison map is not injective" }));
        }
        if !hom.is_surjective() {
            failures.push(json!({
                "reason": "the comparison map is not surjective",
                "localization_order": loc.ring().order(),
                "section_order": section_ring.order(),
            }));
        }

        // kernel chain: rho(a) = 0 on the open forces the annihilator's
        // vanishing locus away from the open, puts f in the radical of the
        // annihilator, and kills a by a power of f
        for a in scheme.ring.elements() {
            if scheme.rho[open].apply(a) != section_ring.zero() {
                continue;
            }
            let ann = annihilator(&scheme.ring, a)?;
            let vanish = vanishing_set(&scheme.space, &ann)?;
            if vanish
                .iter()
                .any(|p| scheme.section_data[open].points.contains(p))
            {
                failures.push(json!({
                    "reason": "the vanishing locus of the annihilator meets the open",
                    "element": a,
                }));
                continue;
            }
            let rad = radical(&scheme.ring, &ann)?;
            if !rad.contains(f) {
                failures.push(json!({
                    "reason": "the inverted element is missing from the radical of the annihilator",
                    "element": a,
                }));
                continue;
            }
            let mut power = scheme.ring.one();
            let mut killed = false;
            for _ in 1..=scheme.ring.order() {
                power = scheme.ring.mul(power, f);
                if scheme.ring.mul(power, a) == scheme.ring.zero() {
                    killed = true;
                    break;
                }
            }
            if !killed {
                failures.push(json!({
                    "reason": "no power of the inverted element kills the element",
                    "element": a,
                }));
                continue;
            }
            if loc.map().apply(a) != loc.ring().zero() {
                failures.push(json!({
                    "reason": "an element with vanishing sections survives in the localization",
                    "element": a,
                }));
            }
        }

        // fraction chain: each section s = rho(a)/rho(b) comes from the
        // localization as (h a) / f^n where f^n = h b
        for (s, nf) in scheme.section_data[open].normal_forms.iter().enumerate() {
            let Some((a, b)) = *nf else {
                failures.push(json!({
                    "reason": "section without a fraction normal form",
                    "section": s,
                }));
                continue;
            };
            let mut power = scheme.ring.one();
            let mut found: Option<(usize, usize)> = None;
            'search: for _ in 1..=scheme.ring.order() {
                power = scheme.ring.mul(power, f);
                for h in scheme.ring.elements() {
                    if scheme.ring.mul(h, b) == power {
                        found = Some((h, power));
                        break 'search;
                    }
                }
            }
            let Some((h, fk)) = found else {
                failures.push(json!({
                    "reason": "no power of the inverted element is a multiple of the denominator",
                    "section": s,
                    "denominator": b,
                }));
                continue;
            };
            let fraction = loc.class_of_pair(scheme.ring.mul(h, a), fk);
            if fraction.map(|c| hom.apply(c)) != Some(s) {
                failures.push(json!({
                    "reason": "the fraction form does not reproduce the section",
                    "section": s,
                    "numerator": scheme.ring.mul(h, a),
                    "denominator_power": fk,
                }));
            }
        }
    }

    if failures.is_empty() {
        let hom = comparison.hom.expect("failures are empty only with a hom");
        Ok(CheckReport::pass(ring_name, "prop32_2")
            .with_table(hom.image_table().to_vec())
            .with_note(format!(
                "localization at element {f} matches the {} sections over its basic open; kernel and fraction chains verified",
                hom.source().order()
            )))
    } else {
        Ok(CheckReport::fail(
            ring_name,
            "prop32_2",
            json!({ "f": f, "open": open, "failures": failures }),
        ))
    }
}

/// Verifies that the stalk at a point is isomorphic to the localization at
/// that prime via the canonical map sending the germ of a section to its
/// component at the point.
pub fn verify_stalk(scheme: &AffineScheme, point: usize, limits: &Limits) -> Result<CheckReport> {
    let ring_name = scheme.ring.presentation().to_string();
    if point >= scheme.space.point_count() {
        return Err(Error::Invalid(format!("point {point} out of range")));
    }
    let st = stalk(&scheme.structure, point, limits)?;
    let local = scheme.local_at_prime[point].ring();

    let min_open = st.minimal_open;
    let germ = &st.germ_maps[&min_open];
    // the germ map at the minimal open is bijective; invert it
    let mut from_stalk = vec![usize::MAX; st.ring.order()];
    for s in 0..germ.source().order() {
        from_stalk[germ.apply(s)] = s;
    }
    let k = scheme.section_data[min_open]
        .points
        .iter()
        .position(|&p| p == point)
        .expect("the minimal open contains its point");
    let table: Vec<usize> = from_stalk
        .iter()
        .map(|&s| scheme.section_data[min_open].families[s][k])
        .collect();

    match RingHom::new(&st.ring, local, table) {
        Ok(h) if h.is_bijective() => Ok(CheckReport::pass(ring_name, "prop32_1")
            .with_table(h.image_table().to_vec())
            .with_note(format!(
                "stalk at point {point} matches the localization at its prime (order {})",
                local.order()
            ))),
        Ok(h) => Ok(CheckReport::fail(
            ring_name,
            "prop32_1",
            json!({
                "point": point,
                "reason": "the canonical comparison is not bijective",
                "stalk_order": st.ring.order(),
                "localization_order": local.order(),
                "injective": h.is_injective(),
                "surjective": h.is_surjective(),
                "abstractly_isomorphic": find_isomorphism(&st.ring, local, limits)?.is_some(),
            }),
        )),
        Err(e) => Ok(CheckReport::fail(
            ring_name,
            "prop32_1",
            json!({
                "point": point,
                "reason": "the canonical comparison is not a ring homomorphism",
                "detail": e.to_string(),
                "abstractly_isomorphic": find_isomorphism(&st.ring, local, limits)?.is_some(),
            }),
        )),
    }
}

/// Verifies that the sections over an open are the projective limit of the
/// localizations at the (deduplicated) basic opens it contains, compared
/// through the canonical cone of restrictions.
pub fn verify_basis_limit(
    scheme: &AffineScheme,
    open: usize,
    limits: &Limits,
) -> Result<CheckReport> {
    let ring_name = scheme.ring.presentation().to_string();
    let topo = scheme.space.topology();
    if open >= topo.open_count() {
        return Err(Error::Invalid(format!("open #{open} out of range")));
    }
    let u_members = topo.open(open).to_vec();

    // one representative element per distinct basic open inside the open
    let mut reps: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for g in scheme.ring.elements() {
        let d = basic_open(&scheme.space, g)?;
        let members = topo.open(d.index()).to_vec();
        if members.iter().all(|p| u_members.contains(p)) {
            reps.entry(members).or_insert(g);
        }
    }
    let mut nodes: Vec<(Vec<usize>, usize)> = reps.into_iter().collect();
    nodes.sort_by(|(a, _), (b, _)| a.len().cmp(&b.len()).then(a.cmp(b)));

    let node_rings: Vec<Arc<FiniteRing>> = nodes
        .iter()
        .map(|(_, g)| Arc::clone(scheme.local_at_element[*g].ring()))
        .collect();
    let mut arrows = BTreeMap::new();
    for i in 0..nodes.len() {
        for j in 0..nodes.len() {
            if i == j || nodes[i].0 == nodes[j].0 {
                continue;
            }
            if !nodes[j].0.iter().all(|p| nodes[i].0.contains(p)) {
                continue;
            }
            let (gi, gj) = (nodes[i].1, nodes[j].1);
            let hom = scheme.local_at_element[gi]
                .induced_hom(scheme.local_at_element[gj].map())
                .map_err(|e| {
                    Error::Verification(format!(
                        "no transition map between the localizations at {gi} and {gj} although their basic opens are nested: {e}"
                    ))
                })?;
            arrows.insert((i, j), hom);
        }
    }
    let diagram = Diagram::new(node_rings, arrows)?;
    let cone = diagram_limit(&diagram, limits)?;

    // legs: restrict the sections to each basic open, then carry them into
    // the localization through the inverse of the basic comparison
    let mut legs = Vec::with_capacity(nodes.len());
    let mut prerequisites: Vec<serde_json::Value> = Vec::new();
    for (_, g) in &nodes {
        let comparison = compare_basic(scheme, *g)?;
        let phi = match comparison.hom {
            Some(h) if h.is_bijective() => h,
            Some(h) => {
                prerequisites.push(json!({
                    "f": g,
                    "reason": "basic comparison is not bijective",
                    "localization_order": h.source().order(),
                    "section_order": h.target().order(),
                }));
                continue;
            }
            None => {
                prerequisites.push(json!({ "f": g, "failures": comparison.failures }));
                continue;
            }
        };
        let mut inverse = vec![usize::MAX; phi.target().order()];
        for x in 0..phi.source().order() {
            inverse[phi.apply(x)] = x;
        }
        let phi_inv = RingHom::new(phi.target(), phi.source(), inverse)?;
        let res = scheme.structure.restriction(open, comparison.open)?;
        legs.push(res.then(&phi_inv)?);
    }
    if !prerequisites.is_empty() {
        return Ok(CheckReport::fail(
            ring_name,
            "corollary",
            json!({ "open": open, "prerequisite_failures": prerequisites }),
        ));
    }

    match cone.factor(&diagram, &legs) {
        Err(e) => Ok(CheckReport::fail(
            ring_name,
            "corollary",
            json!({
                "open": open,
                "reason": "the restrictions do not factor through the limit of the basic localizations",
                "detail": e.to_string(),
            }),
        )),
        Ok(h) if h.is_bijective() => Ok(CheckReport::pass(ring_name, "corollary")
            .with_table(h.image_table().to_vec())
            .with_note(format!(
                "sections over open #{open} are the limit of {} basic localizations",
                nodes.len()
            ))),
        Ok(h) => Ok(CheckReport::fail(
            ring_name,
            "corollary",
            json!({
                "open": open,
                "reason": "the factorization through the limit is not bijective",
                "section_order": h.source().order(),
                "limit_order": h.target().order(),
            }),
        )),
    }
}
