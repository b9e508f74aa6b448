//! Shared fixtures: the standard verification corpus of rings and the named
//! example presheaves used by the command-line presets and the test suites.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::hom::{hom_from_generator_images, RingHom};
use crate::limits::Limits;
use crate::presheaf::{constant_presheaf, Presheaf};
use crate::ring::{poly_quotient, product_many, zmod, FiniteRing};
use crate::topology::{sierpinski, FiniteTopology};
use crate::Result;

/// The standard corpus: Z/n for 2 <= n <= 24, three quadratic quotients, and
/// two explicit products. Every end-to-end verifier is run over this list.
pub fn standard_corpus(limits: &Limits) -> Result<Vec<Arc<FiniteRing>>> {
    let mut rings = Vec::new();
    for n in 2..=24 {
        rings.push(zmod(n, limits)?);
    }
    let z2 = zmod(2, limits)?;
    let z3 = zmod(3, limits)?;
    let z4 = zmod(4, limits)?;
    rings.push(poly_quotient(&z2, &[0, 0, 1], limits)?);
    rings.push(poly_quotient(&z2, &[0, 1, 1], limits)?);
    rings.push(poly_quotient(&z3, &[1, 0, 1], limits)?);
    rings.push(product_many(&[z4, z3.clone()], limits)?.ring);
    rings.push(product_many(&[z2.clone(), z2], limits)?.ring);
    Ok(rings)
}

/// The chain presheaf on the Sierpinski space: Z/4 on the full open, Z/2 on
/// the open point, reduction mod 2 in between. A sheaf whose proper-limit
/// image diverges from the standard sheafification.
pub fn sierpinski_chain_presheaf(limits: &Limits) -> Result<(Arc<FiniteTopology>, Presheaf)> {
    let space = Arc::new(sierpinski());
    let presheaf = chain_preset(&space, limits)?;
    Ok((space, presheaf))
}

/// The chain presheaf built on a caller-supplied copy of the Sierpinski
/// space (the opens must be exactly {}, {0}, {0,1}).
pub fn chain_preset(space: &Arc<FiniteTopology>, limits: &Limits) -> Result<Presheaf> {
    let expected: &[Vec<usize>] = &[vec![], vec![0], vec![0, 1]];
    if space.opens() != expected {
        return Err(crate::Error::Invalid(
            "the chain preset is defined on the Sierpinski space only".into(),
        ));
    }
    let z1 = zmod(1, limits)?;
    let z2 = zmod(2, limits)?;
    let z4 = zmod(4, limits)?;
    let mut restrictions = BTreeMap::new();
    restrictions.insert((2, 1), hom_from_generator_images(&z4, &z2, &[])?);
    restrictions.insert((2, 0), RingHom::new(&z4, &z1, vec![0; 4])?);
    restrictions.insert((1, 0), RingHom::new(&z2, &z1, vec![0; 2])?);
    Presheaf::new(space, vec![z1, z2, z4], restrictions)
}

/// The constant presheaf with value Z/n on the given space.
pub fn constant_preset(space: &Arc<FiniteTopology>, n: usize, limits: &Limits) -> Result<Presheaf> {
    let ring = zmod(n, limits)?;
    Ok(constant_presheaf(space, &ring))
}

/// The sheaf of locally constant Z/n-valued functions on the given space: a
/// section over U takes one value per connected class of U, where two points
/// are joined whenever one lies in the minimal open of the other.
pub fn locally_constant_preset(
    space: &Arc<FiniteTopology>,
    n: usize,
    limits: &Limits,
) -> Result<Presheaf> {
    let base = zmod(n, limits)?;
    // per open: its points partitioned into locally-joined classes
    let mut blocks: Vec<Vec<Vec<usize>>> = Vec::new();
    for u in 0..space.open_count() {
        let pts = space.open(u);
        let mut parent: Vec<usize> = (0..pts.len()).collect();
        fn find(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        for (i, &p) in pts.iter().enumerate() {
            for &q in space.minimal_open(p) {
                let j = pts
                    .iter()
                    .position(|&x| x == q)
                    .expect("the minimal open of a point stays inside the open");
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[rj] = ri;
                }
            }
        }
        let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..pts.len() {
            let r = find(&mut parent, i);
            by_root.entry(r).or_default().push(pts[i]);
        }
        let mut classes: Vec<Vec<usize>> = by_root.into_values().collect();
        classes.sort();
        blocks.push(classes);
    }
    let mut sections = Vec::new();
    let mut products = Vec::new();
    for classes in &blocks {
        let factors: Vec<Arc<FiniteRing>> = classes.iter().map(|_| base.clone()).collect();
        let data = product_many(&factors, limits)?;
        sections.push(data.ring.clone());
        products.push(data);
    }
    let mut restrictions = BTreeMap::new();
    for u in 0..space.open_count() {
        for v in space.opens_within(u) {
            if u == v {
                continue;
            }
            // each class of the subopen sits inside exactly one class of u
            let keep: Vec<usize> = blocks[v]
                .iter()
                .map(|class| {
                    blocks[u]
                        .iter()
                        .position(|big| big.contains(&class[0]))
                        .expect("classes refine under restriction")
                })
                .collect();
            let table: Vec<usize> = (0..sections[u].order())
                .map(|e| {
                    let family = products[u].decode(e);
                    let sub: Vec<usize> = keep.iter().map(|&k| family[k]).collect();
                    products[v].encode(&sub)
                })
                .collect();
            restrictions.insert((u, v), RingHom::new(&sections[u], &sections[v], table)?);
        }
    }
    Presheaf::new(space, sections, restrictions)
}
