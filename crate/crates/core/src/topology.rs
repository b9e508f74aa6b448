//! Finite topological spaces with explicitly enumerated opens, and
//! continuous maps between them.
//!
//! Opens are stored as strictly increasing index vectors in a canonical
//! order (by size, then lexicographically), so every quantifier over opens
//! or covers is a plain loop and all outputs are deterministic.

use std::sync::Arc;

use crate::error::{Error, Result};

/// Sorted-set union of two ascending index vectors.
pub(crate) fn union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) if x == y => {
                out.push(x);
                i += 1;
                j += 1;
            }
            (Some(&x), Some(&y)) if x < y => {
                out.push(x);
                i += 1;
            }
            (Some(_), Some(&y)) => {
                out.push(y);
                j += 1;
            }
            (Some(&x), None) => {
                out.push(x);
                i += 1;
            }
            (None, Some(&y)) => {
                out.push(y);
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

/// Sorted-set intersection of two ascending index vectors.
pub(crate) fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] == b[j] {
            out.push(a[i]);
            i += 1;
            j += 1;
        } else if a[i] < b[j] {
            i += 1;
        } else {
            j += 1;
        }
    }
    out
}

/// Is the ascending vector `a` a subset of the ascending vector `b`?
pub(crate) fn is_subset(a: &[usize], b: &[usize]) -> bool {
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j == b.len() || b[j] != x {
            return false;
        }
        j += 1;
    }
    true
}

fn canonical_key(open: &[usize]) -> (usize, Vec<usize>) {
    (open.len(), open.to_vec())
}

/// A topology on points 0..point_count with every open listed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteTopology {
    point_count: usize,
    opens: Vec<Vec<usize>>,
}

impl FiniteTopology {
    /// Validates and canonicalizes a full list of opens: each must be a
    /// strictly increasing vector of in-range points, the empty and full
    /// sets must be present, and the family must be closed under pairwise
    /// union and intersection.
    pub fn new(point_count: usize, mut opens: Vec<Vec<usize>>) -> Result<Self> {
        for open in &opens {
            if open.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Invalid(format!(
                    "open {open:?} is not strictly increasing"
                )));
            }
            if let Some(&p) = open.iter().find(|&&p| p >= point_count) {
                return Err(Error::Invalid(format!(
                    "open {open:?} mentions point {p}, out of range"
                )));
            }
        }
        opens.sort_by_key(|o| canonical_key(o));
        opens.dedup();

        if !opens.iter().any(|o| o.is_empty()) {
            return Err(Error::Axiom("the empty set is not open".into()));
        }
        let full: Vec<usize> = (0..point_count).collect();
        if !opens.contains(&full) {
            return Err(Error::Axiom("the full point set is not open".into()));
        }
        for i in 0..opens.len() {
            for j in (i + 1)..opens.len() {
                let u = union(&opens[i], &opens[j]);
                if !opens.contains(&u) {
                    return Err(Error::Axiom(format!(
                        "not closed under union: {:?} ∪ {:?} = {u:?} is missing",
                        opens[i], opens[j]
                    )));
                }
                let v = intersect(&opens[i], &opens[j]);
                if !opens.contains(&v) {
                    return Err(Error::Axiom(format!(
                        "not closed under intersection: {:?} ∩ {:?} = {v:?} is missing",
                        opens[i], opens[j]
                    )));
                }
            }
        }
        Ok(FiniteTopology { point_count, opens })
    }

    /// Pointer identity: the convention for "same space" everywhere.
    pub fn same(a: &Arc<FiniteTopology>, b: &Arc<FiniteTopology>) -> bool {
        Arc::ptr_eq(a, b)
    }

    pub fn point_count(&self) -> usize {
        self.point_count
    }

    pub fn opens(&self) -> &[Vec<usize>] {
        &self.opens
    }

    pub fn open_count(&self) -> usize {
        self.opens.len()
    }

    pub fn open(&self, index: usize) -> &[usize] {
        &self.opens[index]
    }

    pub fn open_index(&self, members: &[usize]) -> Option<usize> {
        self.opens.iter().position(|o| o == members)
    }

    pub fn is_open(&self, members: &[usize]) -> bool {
        self.open_index(members).is_some()
    }

    pub fn empty_index(&self) -> usize {
        0 // canonical order puts the empty set first
    }

    pub fn full_index(&self) -> usize {
        self.open_index(&(0..self.point_count).collect::<Vec<_>>())
            .expect("validated at construction")
    }

    /// Indices of opens containing the point, ascending.
    pub fn opens_containing(&self, point: usize) -> Vec<usize> {
        (0..self.opens.len())
            .filter(|&i| self.opens[i].binary_search(&point).is_ok())
            .collect()
    }

    /// Indices of opens contained in the given open, ascending (includes
    /// the open itself and the empty set).
    pub fn opens_within(&self, open: usize) -> Vec<usize> {
        (0..self.opens.len())
            .filter(|&i| is_subset(&self.opens[i], &self.opens[open]))
            .collect()
    }

    /// The minimal open neighborhood of a point: the intersection of all
    /// opens containing it (open, because the family is intersection-closed
    /// and finite).
    pub fn minimal_open_index(&self, point: usize) -> usize {
        let mut current: Vec<usize> = (0..self.point_count).collect();
        for i in self.opens_containing(point) {
            current = intersect(&current, &self.opens[i]);
        }
        self.open_index(&current)
            .expect("intersection closure guarantees minimal opens")
    }

    pub fn minimal_open(&self, point: usize) -> &[usize] {
        self.open(self.minimal_open_index(point))
    }

    /// x lies in the closure of {y} iff every open containing x contains y,
    /// i.e. iff y belongs to the minimal open of x.
    pub fn in_closure_of(&self, x: usize, y: usize) -> bool {
        self.minimal_open(x).binary_search(&y).is_ok()
    }

    pub fn is_discrete(&self) -> bool {
        (0..self.point_count).all(|p| self.minimal_open(p) == [p])
    }

    /// The subspace on an open: points renumbered by position, opens =
    /// every open contained in it. Returns the subspace and the map from
    /// subspace point index to original point index.
    pub fn open_subspace(&self, open: usize) -> (FiniteTopology, Vec<usize>) {
        let points = self.opens[open].clone();
        let reindex = |set: &[usize]| -> Vec<usize> {
            set.iter()
                .map(|p| points.binary_search(p).expect("subset of the open"))
                .collect()
        };
        let sub_opens: Vec<Vec<usize>> = self
            .opens_within(open)
            .into_iter()
            .map(|i| reindex(&self.opens[i]))
            .collect();
        let topology = FiniteTopology::new(points.len(), sub_opens)
            .expect("subspace of a valid topology is valid");
        (topology, points)
    }
}

/// The topology generated by a basis: all unions of basis sets plus the
/// empty set. The basis must cover all points, and the generated family
/// must come out intersection-closed (rejected with a witness otherwise).
pub fn generate_topology(point_count: usize, basis: &[Vec<usize>]) -> Result<FiniteTopology> {
    for set in basis {
        if set.windows(2).any(|w| w[0] >= w[1])
            || set.iter().any(|&p| p >= point_count)
        {
            return Err(Error::Invalid(format!(
                "basis set {set:?} is not an ascending in-range vector"
            )));
        }
    }
    let mut covered = vec![false; point_count];
    for set in basis {
        for &p in set {
            covered[p] = true;
        }
    }
    if let Some(p) = covered.iter().position(|c| !c) {
        return Err(Error::Invalid(format!(
            "basis does not cover point {p}, so the full set would not be open"
        )));
    }

    let mut opens: Vec<Vec<usize>> = vec![Vec::new()];
    let mut frontier: Vec<Vec<usize>> = vec![Vec::new()];
    while let Some(current) = frontier.pop() {
        for set in basis {
            let u = union(&current, set);
            if !opens.contains(&u) {
                opens.push(u.clone());
                frontier.push(u);
            }
        }
    }

    opens.sort_by_key(|o| canonical_key(o));
    for i in 0..opens.len() {
        for j in (i + 1)..opens.len() {
            let v = intersect(&opens[i], &opens[j]);
            if !opens.contains(&v) {
                return Err(Error::Axiom(format!(
                    "basis is not intersection-stable up to unions: {:?} ∩ {:?} = {v:?} is not a union of basis sets",
                    opens[i], opens[j]
                )));
            }
        }
    }
    FiniteTopology::new(point_count, opens)
}

/// The two-point space with one open point (index 0) and one closed point
/// (index 1): opens are {}, {0}, {0,1}.
pub fn sierpinski() -> FiniteTopology {
    FiniteTopology::new(2, vec![vec![], vec![0], vec![0, 1]]).expect("fixed valid data")
}

/// The discrete topology: every subset open.
pub fn discrete(point_count: usize) -> FiniteTopology {
    assert!(point_count <= 16, "discrete spaces kept deliberately small");
    let mut opens = Vec::with_capacity(1 << point_count);
    for mask in 0..(1u32 << point_count) {
        opens.push((0..point_count).filter(|&p| mask >> p & 1 == 1).collect());
    }
    FiniteTopology::new(point_count, opens).expect("fixed valid data")
}

/// The chain space on n points: opens are the nested initial segments
/// {}, {0}, {0,1}, ..., {0..n-1}. chain(2) is the Sierpinski space.
pub fn chain(point_count: usize) -> FiniteTopology {
    let opens = (0..=point_count).map(|k| (0..k).collect()).collect();
    FiniteTopology::new(point_count, opens).expect("fixed valid data")
}

/// A point-index map whose open preimages are all open.
#[derive(Debug, Clone)]
pub struct ContinuousMap {
    source: Arc<FiniteTopology>,
    target: Arc<FiniteTopology>,
    point_map: Vec<usize>,
}

impl ContinuousMap {
    pub fn new(
        source: &Arc<FiniteTopology>,
        target: &Arc<FiniteTopology>,
        point_map: Vec<usize>,
    ) -> Result<Self> {
        if point_map.len() != source.point_count() {
            return Err(Error::Invalid("point map has the wrong length".into()));
        }
        if let Some(&q) = point_map.iter().find(|&&q| q >= target.point_count()) {
            return Err(Error::Invalid(format!("image point {q} out of range")));
        }
        let map = ContinuousMap {
            source: Arc::clone(source),
            target: Arc::clone(target),
            point_map,
        };
        for (i, open) in target.opens().iter().enumerate() {
            let pre = map.preimage_members(open);
            if !source.is_open(&pre) {
                return Err(Error::Axiom(format!(
                    "not continuous: preimage {pre:?} of open #{i} {open:?} is not open"
                )));
            }
        }
        Ok(map)
    }

    pub fn identity(space: &Arc<FiniteTopology>) -> Self {
        ContinuousMap::new(space, space, (0..space.point_count()).collect())
            .expect("identity is continuous")
    }

    pub fn source(&self) -> &Arc<FiniteTopology> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteTopology> {
        &self.target
    }

    pub fn apply(&self, point: usize) -> usize {
        self.point_map[point]
    }

    pub fn point_map(&self) -> &[usize] {
        &self.point_map
    }

    fn preimage_members(&self, target_open: &[usize]) -> Vec<usize> {
        (0..self.source.point_count())
            .filter(|&p| target_open.binary_search(&self.point_map[p]).is_ok())
            .collect()
    }

    /// Index (in the source topology) of the preimage of a target open.
    pub fn preimage_open(&self, target_open: usize) -> usize {
        let pre = self.preimage_members(self.target.open(target_open));
        self.source
            .open_index(&pre)
            .expect("validated continuous at construction")
    }
}

/// A validated reference to one open of a topology.
#[derive(Debug, Clone)]
pub struct OpenSet {
    topology: Arc<FiniteTopology>,
    index: usize,
}

impl OpenSet {
    pub fn new(topology: &Arc<FiniteTopology>, members: &[usize]) -> Result<Self> {
        match topology.open_index(members) {
            Some(index) => Ok(OpenSet {
                topology: Arc::clone(topology),
                index,
            }),
            None => Err(Error::Invalid(format!("{members:?} is not an open set"))),
        }
    }

    pub fn from_index(topology: &Arc<FiniteTopology>, index: usize) -> Result<Self> {
        if index >= topology.open_count() {
            return Err(Error::Invalid(format!("open index {index} out of range")));
        }
        Ok(OpenSet {
            topology: Arc::clone(topology),
            index,
        })
    }

    pub fn topology(&self) -> &Arc<FiniteTopology> {
        &self.topology
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn members(&self) -> &[usize] {
        self.topology.open(self.index)
    }
}
