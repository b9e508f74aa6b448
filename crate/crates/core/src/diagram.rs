//! Finite diagrams of rings over a poset, their projective limits, and
//! filtered colimits.
//!
//! A diagram is a DAG of ring homomorphisms closed under composition
//! (identities are implicit). Limits are computed as rings of
//! arrow-compatible families, enumerated from the diagram's root nodes;
//! colimits of directed diagrams as classes of eventually-equal elements.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hom::RingHom;
use crate::limits::Limits;
use crate::ring::FiniteRing;

/// A finite poset-shaped diagram: nodes carry rings, arrows carry
/// homomorphisms. The arrow key (i, j) means a homomorphism node i → node j.
#[derive(Debug, Clone)]
pub struct Diagram {
    nodes: Vec<Arc<FiniteRing>>,
    arrows: BTreeMap<(usize, usize), RingHom>,
}

impl Diagram {
    /// Validates shape: arrows match their endpoint rings, no self- or
    /// two-cycles, the arrow set is transitively closed, and composites
    /// agree with the direct arrows.
    pub fn new(
        nodes: Vec<Arc<FiniteRing>>,
        arrows: BTreeMap<(usize, usize), RingHom>,
    ) -> Result<Self> {
        for (&(i, j), hom) in &arrows {
            if i >= nodes.len() || j >= nodes.len() {
                return Err(Error::Invalid(format!("arrow ({i}, {j}) out of range")));
            }
            if i == j {
                return Err(Error::Invalid(format!(
                    "arrow ({i}, {j}): identities are implicit, self-arrows not allowed"
                )));
            }
            if !FiniteRing::same(hom.source(), &nodes[i]) || !FiniteRing::same(hom.target(), &nodes[j]) {
                return Err(Error::Invalid(format!(
                    "arrow ({i}, {j}) does not connect the stated node rings"
                )));
            }
            if arrows.contains_key(&(j, i)) {
                return Err(Error::Invalid(format!(
                    "arrows ({i}, {j}) and ({j}, {i}) form a cycle; the index must be a poset"
                )));
            }
        }
        for (&(i, j), first) in &arrows {
            for (&(j2, k), second) in &arrows {
                if j != j2 {
                    continue;
                }
                if i == k {
                    return Err(Error::Invalid(format!(
                        "arrows through {j} close a cycle at {i}"
                    )));
                }
                let composite = first.then(second)?;
                match arrows.get(&(i, k)) {
                    None => {
                        return Err(Error::Invalid(format!(
                            "missing composite arrow ({i}, {k}) for ({i}, {j}) ∘ ({j}, {k})"
                        )))
                    }
                    Some(direct) if direct.image_table() != composite.image_table() => {
                        return Err(Error::Axiom(format!(
                            "arrow ({i}, {k}) disagrees with the composite through {j}"
                        )))
                    }
                    Some(_) => {}
                }
            }
        }
        Ok(Diagram { nodes, arrows })
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn node(&self, i: usize) -> &Arc<FiniteRing> {
        &self.nodes[i]
    }

    pub fn nodes(&self) -> &[Arc<FiniteRing>] {
        &self.nodes
    }

    pub fn arrows(&self) -> &BTreeMap<(usize, usize), RingHom> {
        &self.arrows
    }

    pub fn arrow(&self, i: usize, j: usize) -> Option<&RingHom> {
        self.arrows.get(&(i, j))
    }

    /// Nodes with no incoming arrows. In an acyclic finite diagram every
    /// node is reachable from one of these.
    pub fn roots(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&j| !self.arrows.keys().any(|&(_, dst)| dst == j))
            .collect()
    }

    /// Is every pair of nodes bounded above (i = k, j = k, or arrows into k)?
    pub fn is_directed(&self) -> bool {
        let leq = |i: usize, k: usize| i == k || self.arrows.contains_key(&(i, k));
        (0..self.nodes.len()).all(|i| {
            (0..self.nodes.len())
                .all(|j| (0..self.nodes.len()).any(|k| leq(i, k) && leq(j, k)))
        })
    }
}

/// A projective limit: the ring of arrow-compatible families, with its
/// projection homomorphisms and the explicit family behind each element.
#[derive(Debug, Clone)]
pub struct LimitCone {
    pub ring: Arc<FiniteRing>,
    /// projections[k]: limit ring → node k.
    pub projections: Vec<RingHom>,
    /// families[e][k] = the node-k component of limit element e; sorted
    /// lexicographically, so binary search doubles as the index.
    pub families: Vec<Vec<usize>>,
}

impl LimitCone {
    pub fn family_index(&self, family: &[usize]) -> Option<usize> {
        self.families
            .binary_search_by(|probe| probe.as_slice().cmp(family))
            .ok()
    }

    /// Factors an external cone through the limit: given maps t_k: T →
    /// node k commuting with every arrow, returns the unique u: T → limit
    /// with projection ∘ u = t_k. Uniqueness is automatic because the
    /// projections are jointly injective on families.
    pub fn factor(&self, diagram: &Diagram, cone: &[RingHom]) -> Result<RingHom> {
        if cone.len() != diagram.node_count() {
            return Err(Error::Invalid("cone has the wrong number of legs".into()));
        }
        if diagram.node_count() == 0 {
            let apex_src = match cone.first() {
                Some(first) => Arc::clone(first.source()),
                None => {
                    return Err(Error::Invalid(
                        "cannot infer the cone apex for an empty diagram".into(),
                    ))
                }
            };
            let table = vec![self.ring.zero(); apex_src.order()];
            return RingHom::new(&apex_src, &self.ring, table);
        }
        let apex = cone[0].source();
        for (k, leg) in cone.iter().enumerate() {
            if !FiniteRing::same(leg.source(), apex) {
                return Err(Error::Invalid("cone legs start at different rings".into()));
            }
            if !FiniteRing::same(leg.target(), diagram.node(k)) {
                return Err(Error::Invalid(format!("cone leg {k} hits the wrong node ring")));
            }
        }
        for (&(i, j), hom) in diagram.arrows() {
            let through = cone[i].then(hom)?;
            if through.image_table() != cone[j].image_table() {
                return Err(Error::Invalid(format!(
                    "not a cone: leg {j} differs from leg {i} pushed along ({i}, {j})"
                )));
            }
        }
        let mut table = Vec::with_capacity(apex.order());
        for t in apex.elements() {
            let family: Vec<usize> = cone.iter().map(|leg| leg.apply(t)).collect();
            match self.family_index(&family) {
                Some(e) => table.push(e),
                None => {
                    return Err(Error::Verification(format!(
                        "cone value {family:?} is not a compatible family (limit too small?)"
                    )))
                }
            }
        }
        RingHom::new(apex, &self.ring, table)
    }
}

/// Computes the projective limit by enumerating assignments on the root
/// nodes, deriving the remaining components along arrows, and keeping the
/// families on which every arrow commutes.
pub fn diagram_limit(diagram: &Diagram, limits: &Limits) -> Result<LimitCone> {
    let n = diagram.node_count();
    if n == 0 {
        let ring = FiniteRing::from_tables(1, vec![0], vec![0], 0, 0, "lim()".to_string(), limits)?;
        return Ok(LimitCone {
            ring,
            projections: Vec::new(),
            families: vec![Vec::new()],
        });
    }

    let roots = diagram.roots();
    if roots.is_empty() {
        return Err(Error::Invalid(
            "diagram has no root nodes; the index is not a finite poset".into(),
        ));
    }
    let mut space: u128 = 1;
    for &r in &roots {
        space = space.saturating_mul(diagram.node(r).order() as u128);
        if space > limits.max_limit_product {
            return Err(Error::Capacity(format!(
                "root assignment space exceeds {}",
                limits.max_limit_product
            )));
        }
    }

    let mut families: Vec<Vec<usize>> = Vec::new();
    let mut assignment = vec![0usize; roots.len()];
    'outer: loop {
        // derive all node values from the current root assignment
        let mut values = vec![usize::MAX; n];
        for (slot, &r) in roots.iter().enumerate() {
            values[r] = assignment[slot];
        }
        let mut changed = true;
        while changed {
            changed = false;
            for (&(i, j), hom) in diagram.arrows() {
                if values[i] != usize::MAX && values[j] == usize::MAX {
                    values[j] = hom.apply(values[i]);
                    changed = true;
                }
            }
        }
        if values.iter().any(|&v| v == usize::MAX) {
            return Err(Error::Verification(
                "a node is unreachable from the roots; the diagram is not acyclic".into(),
            ));
        }
        if diagram
            .arrows()
            .iter()
            .all(|(&(i, j), hom)| hom.apply(values[i]) == values[j])
        {
            families.push(values);
        }

        // advance the odometer over root assignments
        for slot in (0..roots.len()).rev() {
            assignment[slot] += 1;
            if assignment[slot] < diagram.node(roots[slot]).order() {
                continue 'outer;
            }
            assignment[slot] = 0;
        }
        break;
    }

    families.sort();
    let order = families.len();
    if order == 0 {
        return Err(Error::Verification(
            "no compatible family exists, yet the all-zeros family is always one".into(),
        ));
    }
    if order > limits.max_order {
        return Err(Error::Capacity(format!(
            "limit has {order} elements, above the ring order cap {}",
            limits.max_order
        )));
    }

    let index: BTreeMap<&[usize], usize> = families
        .iter()
        .enumerate()
        .map(|(e, f)| (f.as_slice(), e))
        .collect();
    let combine = |op: &dyn Fn(&FiniteRing, usize, usize) -> usize,
                   a: &[usize],
                   b: &[usize]|
     -> Result<usize> {
        let out: Vec<usize> = (0..n)
            .map(|k| op(diagram.node(k), a[k], b[k]))
            .collect();
        index.get(out.as_slice()).copied().ok_or_else(|| {
            Error::Verification("componentwise result is not a compatible family".into())
        })
    };
    let mut add = Vec::with_capacity(order * order);
    let mut mul = Vec::with_capacity(order * order);
    for a in &families {
        for b in &families {
            add.push(combine(&FiniteRing::add, a, b)?);
            mul.push(combine(&FiniteRing::mul, a, b)?);
        }
    }
    let zero_family: Vec<usize> = (0..n).map(|k| diagram.node(k).zero()).collect();
    let one_family: Vec<usize> = (0..n).map(|k| diagram.node(k).one()).collect();
    let zero = index[zero_family.as_slice()];
    let one = *index.get(one_family.as_slice()).ok_or_else(|| {
        Error::Verification("the all-ones family is not compatible; arrows are not unital".into())
    })?;
    let presentation = format!(
        "lim({})",
        diagram
            .nodes()
            .iter()
            .map(|r| r.presentation().to_string())
            .collect::<Vec<_>>()
            .join(", ")
    );
    let ring = FiniteRing::from_tables(order, add, mul, zero, one, presentation, limits)?;

    let mut projections = Vec::with_capacity(n);
    for k in 0..n {
        let table: Vec<usize> = families.iter().map(|f| f[k]).collect();
        projections.push(RingHom::new(&ring, diagram.node(k), table)?);
    }

    Ok(LimitCone {
        ring,
        projections,
        families,
    })
}

/// A filtered colimit: the ring of eventual-equality classes with the
/// canonical injection from every node.
#[derive(Debug, Clone)]
pub struct ColimitData {
    pub ring: Arc<FiniteRing>,
    /// injections[k]: node k → colimit ring.
    pub injections: Vec<RingHom>,
    /// The node index at the poset maximum (every directed finite poset
    /// has one); the colimit is isomorphic to that node's ring.
    pub maximum_node: usize,
}

/// Computes the colimit of a directed diagram as classes of node elements
/// under the relation generated by x ~ (its image along any arrow), with
/// ring operations evaluated at a common upper bound.
///
/// As a built-in cross-check, the map from the maximum node's ring is
/// verified to be an isomorphism onto the colimit.
pub fn filtered_colimit(diagram: &Diagram, limits: &Limits) -> Result<ColimitData> {
    let n = diagram.node_count();
    if n == 0 {
        return Err(Error::Invalid("colimit of an empty diagram".into()));
    }
    if !diagram.is_directed() {
        return Err(Error::Invalid(
            "diagram is not directed: some pair of nodes has no upper bound".into(),
        ));
    }
    let leq =
        |i: usize, k: usize| i == k || diagram.arrow(i, k).is_some();
    let maximum_node = (0..n)
        .find(|&m| (0..n).all(|i| leq(i, m)))
        .expect("a finite directed poset has a maximum");

    // flat indexing of (node, element) pairs
    let mut offsets = vec![0usize; n + 1];
    for k in 0..n {
        offsets[k + 1] = offsets[k] + diagram.node(k).order();
    }
    let total = offsets[n];
    let mut parent: Vec<usize> = (0..total).collect();
    fn find(parent: &mut Vec<usize>, mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for (&(i, j), hom) in diagram.arrows() {
        for x in diagram.node(i).elements() {
            let a = find(&mut parent, offsets[i] + x);
            let b = find(&mut parent, offsets[j] + hom.apply(x));
            if a != b {
                parent[a] = b;
            }
        }
    }

    // canonical class numbering: by least flat index
    let mut class_of_flat = vec![usize::MAX; total];
    let mut class_count = 0;
    for flat in 0..total {
        let root = find(&mut parent, flat);
        if class_of_flat[root] == usize::MAX {
            class_of_flat[root] = class_count;
            class_count += 1;
        }
        class_of_flat[flat] = class_of_flat[root];
    }

    // push an element to the maximum node to compute with it
    let to_max = |k: usize, x: usize| -> usize {
        if k == maximum_node {
            x
        } else {
            diagram
                .arrow(k, maximum_node)
                .expect("maximum bounds every node")
                .apply(x)
        }
    };
    // one representative (node, element) per class, least flat index
    let mut representative = vec![usize::MAX; class_count];
    for flat in (0..total).rev() {
        representative[class_of_flat[flat]] = flat;
    }
    let unflatten = |flat: usize| -> (usize, usize) {
        let k = (0..n).rfind(|&k| offsets[k] <= flat).unwrap();
        (k, flat - offsets[k])
    };

    let order = class_count;
    let mut add = Vec::with_capacity(order * order);
    let mut mul = Vec::with_capacity(order * order);
    let max_ring = diagram.node(maximum_node);
    let class_at_max = |x: usize| class_of_flat[offsets[maximum_node] + x];
    for a in 0..order {
        let (ka, xa) = unflatten(representative[a]);
        let va = to_max(ka, xa);
        for b in 0..order {
            let (kb, xb) = unflatten(representative[b]);
            let vb = to_max(kb, xb);
            add.push(class_at_max(max_ring.add(va, vb)));
            mul.push(class_at_max(max_ring.mul(va, vb)));
        }
    }
    let zero = class_at_max(max_ring.zero());
    let one = class_at_max(max_ring.one());
    let presentation = format!(
        "colim({})",
        diagram
            .nodes()
            .iter()
            .map(|r| r.presentation().to_string())
            .collect::<Vec<_>>()
            .join(", ")
    );
    let ring = FiniteRing::from_tables(order, add, mul, zero, one, presentation, limits)?;

    let mut injections = Vec::with_capacity(n);
    for k in 0..n {
        let table: Vec<usize> = diagram
            .node(k)
            .elements()
            .map(|x| class_of_flat[offsets[k] + x])
            .collect();
        injections.push(RingHom::new(diagram.node(k), &ring, table)?);
    }

    // cross-check: the maximum node maps isomorphically onto the colimit
    if !injections[maximum_node].is_bijective() {
        return Err(Error::Verification(
            "colimit disagrees with the maximum node; eventual equality collapsed wrongly".into(),
        ));
    }

    Ok(ColimitData {
        ring,
        injections,
        maximum_node,
    })
}
