//! Machine-readable exports and imports: JSON objects for rings, topologies,
//! and presheaves (round-trippable), and DOT renderings of a spectrum's
//! specialization order and open lattice.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hom::RingHom;
use crate::limits::Limits;
use crate::presheaf::Presheaf;
use crate::ring::FiniteRing;
use crate::spec_space::SpecSpace;
use crate::topology::FiniteTopology;

/// A ring as plain data: dense row-major operation tables.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RingDto {
    pub order: usize,
    pub presentation: String,
    pub add_table: Vec<usize>,
    pub mul_table: Vec<usize>,
    pub zero: usize,
    pub one: usize,
}

pub fn ring_dto(ring: &FiniteRing) -> RingDto {
    let n = ring.order();
    let mut add_table = Vec::with_capacity(n * n);
    let mut mul_table = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            add_table.push(ring.add(i, j));
            mul_table.push(ring.mul(i, j));
        }
    }
    RingDto {
        order: n,
        presentation: ring.presentation().to_string(),
        add_table,
        mul_table,
        zero: ring.zero(),
        one: ring.one(),
    }
}

/// A prime spectrum as plain data: primes as member lists, opens as point
/// index lists, both in their canonical orders.
#[derive(Debug, Clone, Serialize)]
pub struct SpaceDto {
    pub ring: String,
    pub points: Vec<Vec<usize>>,
    pub opens: Vec<Vec<usize>>,
}

pub fn space_dto(space: &SpecSpace) -> SpaceDto {
    SpaceDto {
        ring: space.ring().presentation().to_string(),
        points: space
            .points()
            .iter()
            .map(|p| p.members().iter().copied().collect())
            .collect(),
        opens: space
            .topology()
            .opens()
            .iter()
            .map(|o| o.to_vec())
            .collect(),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RestrictionDto {
    pub from: usize,
    pub to: usize,
    pub table: Vec<usize>,
}

/// A presheaf as plain data: opens, section rings, and the strict
/// restriction tables.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PresheafDto {
    pub opens: Vec<Vec<usize>>,
    pub sections: Vec<RingDto>,
    pub restrictions: Vec<RestrictionDto>,
}

pub fn presheaf_dto(presheaf: &Presheaf) -> PresheafDto {
    let space = presheaf.space();
    PresheafDto {
        opens: space.opens().iter().map(|o| o.to_vec()).collect(),
        sections: (0..space.open_count())
            .map(|u| ring_dto(presheaf.section(u)))
            .collect(),
        restrictions: presheaf
            .strict_restrictions()
            .iter()
            .map(|(&(from, to), hom)| RestrictionDto {
                from,
                to,
                table: hom.image_table().to_vec(),
            })
            .collect(),
    }
}

/// A bare finite topology as plain data.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TopologyDto {
    pub points: usize,
    pub opens: Vec<Vec<usize>>,
}

pub fn topology_dto(space: &FiniteTopology) -> TopologyDto {
    TopologyDto {
        points: space.point_count(),
        opens: space.opens().iter().map(|o| o.to_vec()).collect(),
    }
}

/// Rebuilds a ring from exported tables, re-validating every axiom.
pub fn ring_from_dto(dto: &RingDto, limits: &Limits) -> Result<Arc<FiniteRing>> {
    FiniteRing::from_tables(
        dto.order,
        dto.add_table.clone(),
        dto.mul_table.clone(),
        dto.zero,
        dto.one,
        dto.presentation.clone(),
        limits,
    )
}

pub fn topology_from_dto(dto: &TopologyDto) -> Result<Arc<FiniteTopology>> {
    Ok(Arc::new(FiniteTopology::new(
        dto.points,
        dto.opens.clone(),
    )?))
}

/// Rebuilds a presheaf over the given space from exported data, re-validating
/// the rings, the opens, and the functoriality of the restriction tables.
pub fn presheaf_from_dto(
    space: &Arc<FiniteTopology>,
    dto: &PresheafDto,
    limits: &Limits,
) -> Result<Presheaf> {
    if dto.opens.as_slice() != space.opens() {
        return Err(Error::Invalid(
            "presheaf data lists different opens than the space".into(),
        ));
    }
    let sections: Vec<Arc<FiniteRing>> = dto
        .sections
        .iter()
        .map(|r| ring_from_dto(r, limits))
        .collect::<Result<_>>()?;
    let mut restrictions = BTreeMap::new();
    for r in &dto.restrictions {
        if r.from >= sections.len() || r.to >= sections.len() {
            return Err(Error::Invalid(format!(
                "restriction {} -> {} references a missing open",
                r.from, r.to
            )));
        }
        let hom = RingHom::new(&sections[r.from], &sections[r.to], r.table.clone())?;
        if restrictions.insert((r.from, r.to), hom).is_some() {
            return Err(Error::Invalid(format!(
                "duplicate restriction {} -> {}",
                r.from, r.to
            )));
        }
    }
    Presheaf::new(space, sections, restrictions)
}

fn set_label(members: &[usize]) -> String {
    let inner: Vec<String> = members.iter().map(|m| m.to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

/// Renders the spectrum as DOT: one cluster with the points under the
/// specialization order (an arrow means the head is a specialization of the
/// tail), one cluster with the Hasse diagram of the open sets.
pub fn spec_dot(space: &SpecSpace) -> String {
    let topo = space.topology();
    let mut out = String::new();
    let _ = writeln!(out, "digraph spec {{");
    let _ = writeln!(out, "  rankdir=BT;");
    let _ = writeln!(out, "  subgraph cluster_points {{");
    let _ = writeln!(out, "    label=\"specialization order\";");
    for (i, prime) in space.points().iter().enumerate() {
        let members: Vec<usize> = prime.members().iter().copied().collect();
        let _ = writeln!(out, "    p{i} [label=\"p{i} = {}\"];", set_label(&members));
    }
    // Hasse reduction of the specialization order: y -> x when x lies in the
    // closure of y with no point strictly between them.
    let n = space.point_count();
    for y in 0..n {
        for x in 0..n {
            if x == y || !topo.in_closure_of(x, y) {
                continue;
            }
            let between = (0..n).any(|z| {
                z != x && z != y && topo.in_closure_of(z, y) && topo.in_closure_of(x, z)
            });
            if !between {
                let _ = writeln!(out, "    p{y} -> p{x};");
            }
        }
    }
    let _ = writeln!(out, "  }}");
    let _ = writeln!(out, "  subgraph cluster_opens {{");
    let _ = writeln!(out, "    label=\"open sets\";");
    for (u, members) in topo.opens().iter().enumerate() {
        let _ = writeln!(out, "    u{u} [label=\"{}\"];", set_label(members));
    }
    // Hasse diagram of the inclusion order on opens
    let opens = topo.opens();
    for (v, small) in opens.iter().enumerate() {
        for (u, big) in opens.iter().enumerate() {
            if u == v || small.len() >= big.len() {
                continue;
            }
            if !small.iter().all(|p| big.contains(p)) {
                continue;
            }
            let between = opens.iter().enumerate().any(|(w, mid)| {
                w != u
                    && w != v
                    && small.len() < mid.len()
                    && mid.len() < big.len()
                    && small.iter().all(|p| mid.contains(p))
                    && mid.iter().all(|p| big.contains(p))
            });
            if !between {
                let _ = writeln!(out, "    u{v} -> u{u};");
            }
        }
    }
    let _ = writeln!(out, "  }}");
    let _ = writeln!(out, "}}");
    out
}
