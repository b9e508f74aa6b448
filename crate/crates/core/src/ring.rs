//! Finite commutative unital rings as dense operation tables.
//!
//! Elements are the indices `0..order`; addition and multiplication are
//! row-major lookup tables. Ring equality is identity of construction
//! (pointer equality of the `Arc`), so every derived object keeps a handle
//! to the ring it lives in.
//!
//! Every constructor validates the full ring axioms: exhaustively for
//! order <= 16, by fixed-seed random sampling of the ternary laws above
//! that (the binary laws are always checked exhaustively).


use std::sync::Arc;

use crate::error::{Error, Result};
use crate::limits::Limits;

/// How many sampled triples the axiom check uses for large rings.
const AXIOM_SAMPLES: usize = 8192;
/// Exhaustive triple checking is used up to this order.
const EXHAUSTIVE_ORDER: usize = 16;

/// Construction provenance, used where an operation is only defined for a
/// particular shape of ring (e.g. polynomial quotients over Z/n).
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum RingKind {
    Zmod(usize),
    PolyQuotient { modulus: usize, coeffs: Vec<usize> },
    Other,
}

/// A finite commutative unital ring given by dense operation tables.
#[derive(Debug)]
pub struct FiniteRing {
    order: usize,
    add: Vec<usize>,
    mul: Vec<usize>,
    zero: usize,
    one: usize,
    neg: Vec<usize>,
    presentation: String,
    kind: RingKind,
    /// Generators with user-facing names (the variable of a polynomial
    /// quotient); used to resolve symbolic homomorphism bindings.
    named_generators: Vec<(String, usize)>,
    /// Structural generating set plus a derivation of every element from it;
    /// drives homomorphism searches.
    trace: GenTrace,
}

/// A derivation of every ring element from a small generating set.
///
/// `steps[e]` explains how element `e` first arises; `discovery` lists the
/// elements in an order where every step only refers to earlier elements.
#[derive(Debug, Clone)]
pub(crate) struct GenTrace {
    pub steps: Vec<Step>,
    pub discovery: Vec<usize>,
    pub generators: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Step {
    Zero,
    One,
    Gen(usize),
    Add(usize, usize),
    Mul(usize, usize),
}

impl FiniteRing {
    /// Builds a ring from raw tables, validating the full axiom set.
    ///
    /// `limits.max_order` caps the order; zero rings (order 1, 0 = 1) are
    /// legal and arise naturally from degenerate quotients and localizations.
    pub fn from_tables(
        order: usize,
        add: Vec<usize>,
        mul: Vec<usize>,
        zero: usize,
        one: usize,
        presentation: String,
        limits: &Limits,
    ) -> Result<Arc<FiniteRing>> {
        Self::from_tables_kind(order, add, mul, zero, one, presentation, RingKind::Other, vec![], limits)
    }

    #[allow(clippy::too_many_arguments)]
    pub(crate) fn from_tables_kind(
        order: usize,
        add: Vec<usize>,
        mul: Vec<usize>,
        zero: usize,
        one: usize,
        presentation: String,
        kind: RingKind,
        named_generators: Vec<(String, usize)>,
        limits: &Limits,
    ) -> Result<Arc<FiniteRing>> {
        if order == 0 {
            return Err(Error::Invalid("a ring has at least one element".into()));
        }
        if order > limits.max_order {
            return Err(Error::Capacity(format!(
                "ring of order {order} exceeds the configured bound {}",
                limits.max_order
            )));
        }
        if add.len() != order * order || mul.len() != order * order {
            return Err(Error::Invalid(format!(
                "operation tables must have {0}x{0} entries",
                order
            )));
        }
        if zero >= order || one >= order {
            return Err(Error::Invalid("distinguished elements out of range".into()));
        }
        for (pos, &v) in add.iter().chain(mul.iter()).enumerate() {
            if v >= order {
                return Err(Error::Invalid(format!(
                    "table entry {v} at position {pos} is out of range"
                )));
            }
        }

        check_axioms(order, &add, &mul, zero, one)?;

        let mut neg = vec![usize::MAX; order];
        for a in 0..order {
            for b in 0..order {
                if add[a * order + b] == zero {
                    neg[a] = b;
                    break;
                }
            }
            // check_axioms has already guaranteed an inverse exists
            debug_assert_ne!(neg[a], usize::MAX);
        }

        let trace = build_trace(order, &add, &mul, zero, one);
        Ok(Arc::new(FiniteRing {
            order,
            add,
            mul,
            zero,
            one,
            neg,
            presentation,
            kind,
            named_generators,
            trace,
        }))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn one(&self) -> usize {
        self.one
    }

    /// True for the one-element ring, where 0 = 1.
    pub fn is_zero_ring(&self) -> bool {
        self.order == 1
    }

    pub fn presentation(&self) -> &str {
        &self.presentation
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.order + b]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    pub fn neg(&self, a: usize) -> usize {
        self.neg[a]
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    /// `a^k` with `a^0 = 1`.
    pub fn pow(&self, a: usize, k: usize) -> usize {
        let mut acc = self.one;
        for _ in 0..k {
            acc = self.mul(acc, a);
        }
        acc
    }

    /// Multiplicative inverse, if `a` is a unit.
    pub fn inverse(&self, a: usize) -> Option<usize> {
        (0..self.order).find(|&b| self.mul(a, b) == self.one)
    }

    pub fn is_unit(&self, a: usize) -> bool {
        self.inverse(a).is_some()
    }

    /// Order of `a` in the additive group.
    pub fn additive_order(&self, a: usize) -> usize {
        let mut acc = a;
        let mut n = 1;
        while acc != self.zero {
            acc = self.add(acc, a);
            n += 1;
        }
        n
    }

    pub fn is_idempotent(&self, a: usize) -> bool {
        self.mul(a, a) == a
    }

    /// Smallest `k >= 1` with `a^k = 0`, if `a` is nilpotent.
    pub fn nilpotency_index(&self, a: usize) -> Option<usize> {
        let mut acc = self.one;
        for k in 1..=self.order {
            acc = self.mul(acc, a);
            if acc == self.zero {
                return Some(k);
            }
        }
        None
    }

    /// Multiplicative order of a unit.
    pub fn unit_order(&self, a: usize) -> Option<usize> {
        if !self.is_unit(a) {
            return None;
        }
        let mut acc = a;
        let mut n = 1;
        while acc != self.one {
            acc = self.mul(acc, a);
            n += 1;
        }
        Some(n)
    }

    /// Named generators (e.g. the variable of a polynomial quotient).
    pub fn named_generators(&self) -> &[(String, usize)] {
        &self.named_generators
    }

    pub(crate) fn kind(&self) -> &RingKind {
        &self.kind
    }

    pub(crate) fn trace(&self) -> &GenTrace {
        &self.trace
    }

    /// Two handles denote "the same ring" only if they are the same object.
    pub fn same(a: &Arc<FiniteRing>, b: &Arc<FiniteRing>) -> bool {
        Arc::ptr_eq(a, b)
    }
}

/// An element tagged with the ring it lives in.
#[derive(Debug, Clone)]
pub struct RingElement {
    pub ring: Arc<FiniteRing>,
    pub index: usize,
}

impl RingElement {
    pub fn new(ring: &Arc<FiniteRing>, index: usize) -> Result<RingElement> {
        if index >= ring.order() {
            return Err(Error::Invalid(format!(
                "element index {index} out of range for a ring of order {}",
                ring.order()
            )));
        }
        Ok(RingElement {
            ring: Arc::clone(ring),
            index,
        })
    }
}

/// Validates commutativity, associativity, identities, additive inverses and
/// distributivity. Ternary laws are sampled with a fixed seed above order 16.
fn check_axioms(order: usize, add: &[usize], mul: &[usize], zero: usize, one: usize) -> Result<()> {
    let a_ = |x: usize, y: usize| add[x * order + y];
    let m_ = |x: usize, y: usize| mul[x * order + y];

    for x in 0..order {
        if a_(x, zero) != x {
            return Err(Error::Axiom(format!("{x} + 0 != {x}")));
        }
        if m_(x, one) != x {
            return Err(Error::Axiom(format!("{x} * 1 != {x}")));
        }
        if !(0..order).any(|y| a_(x, y) == zero) {
            return Err(Error::Axiom(format!("{x} has no additive inverse")));
        }
        for y in 0..order {
            if a_(x, y) != a_(y, x) {
                return Err(Error::Axiom(format!("addition not commutative at ({x}, {y})")));
            }
            if m_(x, y) != m_(y, x) {
                return Err(Error::Axiom(format!(
                    "multiplication not commutative at ({x}, {y})"
                )));
            }
        }
    }

    let check_triple = |x: usize, y: usize, z: usize| -> Result<()> {
        if a_(a_(x, y), z) != a_(x, a_(y, z)) {
            return Err(Error::Axiom(format!("addition not associative at ({x}, {y}, {z})")));
        }
        if m_(m_(x, y), z) != m_(x, m_(y, z)) {
            return Err(Error::Axiom(format!(
                "multiplication not associative at ({x}, {y}, {z})"
            )));
        }
        if m_(x, a_(y, z)) != a_(m_(x, y), m_(x, z)) {
            return Err(Error::Axiom(format!("distributivity fails at ({x}, {y}, {z})")));
        }
        Ok(())
    };

    if order <= EXHAUSTIVE_ORDER {
        for x in 0..order {
            for y in 0..order {
                for z in 0..order {
                    check_triple(x, y, z)?;
                }
            }
        }
    } else {
        // splitmix64 with a fixed seed: reproducible sampling
        let mut state: u64 = 0x9e37_79b9_7f4a_7c15;
        let mut next = move || {
            state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
            z ^ (z >> 31)
        };
        for _ in 0..AXIOM_SAMPLES {
            let x = (next() % order as u64) as usize;
            let y = (next() % order as u64) as usize;
            let z = (next() % order as u64) as usize;
            check_triple(x, y, z)?;
        }
    }
    Ok(())
}

/// Finds a small generating set by greedy closure and records how every
/// element derives from it.
fn build_trace(order: usize, add: &[usize], mul: &[usize], zero: usize, one: usize) -> GenTrace {
    let mut steps = vec![None; order];
    let mut discovery = Vec::with_capacity(order);
    let mut generators = Vec::new();

    steps[zero] = Some(Step::Zero);
    discovery.push(zero);
    if one != zero {
        steps[one] = Some(Step::One);
        discovery.push(one);
    }

    loop {
        // close under both operations
        let mut grew = true;
        while grew {
            grew = false;
            let snapshot = discovery.clone();
            for &a in &snapshot {
                for &b in &snapshot {
                    for (table, mk) in [
                        (add, Step::Add as fn(usize, usize) -> Step),
                        (mul, Step::Mul as fn(usize, usize) -> Step),
                    ] {
                        let c = table[a * order + b];
                        if steps[c].is_none() {
                            steps[c] = Some(mk(a, b));
                            discovery.push(c);
                            grew = true;
                        }
                    }
                }
            }
        }
        if discovery.len() == order {
            break;
        }
        let g = (0..order).find(|&e| steps[e].is_none()).unwrap();
        steps[g] = Some(Step::Gen(generators.len()));
        generators.push(g);
        discovery.push(g);
    }

    GenTrace {
        steps: steps.into_iter().map(Option::unwrap).collect(),
        discovery,
        generators,
    }
}

impl GenTrace {
    /// Replays the derivation in another ring, given images for the
    /// generators. The result is a total map; whether it is a homomorphism
    /// must be validated separately.
    pub(crate) fn evaluate(&self, target: &FiniteRing, gen_images: &[usize]) -> Vec<usize> {
        let mut image = vec![usize::MAX; self.steps.len()];
        for &e in &self.discovery {
            image[e] = match self.steps[e] {
                Step::Zero => target.zero(),
                Step::One => target.one(),
                Step::Gen(k) => gen_images[k],
                Step::Add(a, b) => target.add(image[a], image[b]),
                Step::Mul(a, b) => target.mul(image[a], image[b]),
            };
        }
        image
    }
}

/// The ring of integers modulo `n` (`n >= 1`; `n = 1` is the zero ring).
pub fn zmod(n: usize, limits: &Limits) -> Result<Arc<FiniteRing>> {
    if n == 0 {
        return Err(Error::Invalid("Z/0 is not finite".into()));
    }
    let mut add = Vec::with_capacity(n * n);
    let mut mul = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            add.push((i + j) % n);
            mul.push((i * j) % n);
        }
    }
    let one = if n == 1 { 0 } else { 1 };
    FiniteRing::from_tables_kind(
        n,
        add,
        mul,
        0,
        one,
        format!("Z/{n}"),
        RingKind::Zmod(n),
        vec![],
        limits,
    )
}

/// Renders a reduced coefficient vector (ascending degree) as a polynomial.
pub(crate) fn format_poly(coeffs: &[usize]) -> String {
    let mut terms = Vec::new();
    for (deg, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let t = match (deg, c) {
            (0, c) => format!("{c}"),
            (1, 1) => "x".to_string(),
            (1, c) => format!("{c}x"),
            (d, 1) => format!("x^{d}"),
            (d, c) => format!("{c}x^{d}"),
        };
        terms.push(t);
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join("+")
    }
}

/// `Z/n[x]` modulo a monic polynomial.
///
/// `base` must be a `zmod(n)` with `n >= 2`. Coefficients are given in
/// ascending degree, reduced modulo `n`; after reduction the polynomial must
/// still be monic of degree >= 1 (a non-monic modulus would not bound the
/// representatives, and over `Z/n` could present an infinite ring).
pub fn poly_quotient(
    base: &Arc<FiniteRing>,
    coefficients: &[i64],
    limits: &Limits,
) -> Result<Arc<FiniteRing>> {
    let n = match base.kind() {
        RingKind::Zmod(n) => *n,
        _ => {
            return Err(Error::Invalid(
                "polynomial quotients are built over Z/n bases".into(),
            ))
        }
    };
    if n < 2 {
        return Err(Error::Invalid(
            "polynomial quotients need a base Z/n with n >= 2".into(),
        ));
    }
    let mut reduced: Vec<usize> = coefficients
        .iter()
        .map(|&c| (c.rem_euclid(n as i64)) as usize)
        .collect();
    while reduced.last() == Some(&0) {
        reduced.pop();
    }
    let degree = reduced.len().saturating_sub(1);
    if degree < 1 {
        return Err(Error::Invalid("the modulus polynomial must have degree >= 1".into()));
    }
    if reduced[degree] != 1 {
        return Err(Error::Invalid(format!(
            "the modulus polynomial must be monic; leading coefficient reduces to {}",
            reduced[degree]
        )));
    }

    let order = n
        .checked_pow(degree as u32)
        .ok_or_else(|| Error::Capacity("polynomial quotient order overflows".into()))?;
    if order > limits.max_order {
        return Err(Error::Capacity(format!(
            "polynomial quotient of order {order} exceeds the configured bound {}",
            limits.max_order
        )));
    }

    // element index <-> coefficient vector of degree < `degree`, little-endian base n
    let decode = |mut e: usize| -> Vec<usize> {
        let mut v = vec![0; degree];
        for slot in v.iter_mut() {
            *slot = e % n;
            e /= n;
        }
        v
    };
    let encode = |v: &[usize]| -> usize {
        let mut e = 0;
        for &c in v.iter().rev() {
            e = e * n + c;
        }
        e
    };

    // x^degree = -(sum of lower terms)
    let reduction: Vec<usize> = (0..degree).map(|i| (n - reduced[i]) % n).collect();

    let mut add = Vec::with_capacity(order * order);
    let mut mul = Vec::with_capacity(order * order);
    for i in 0..order {
        let vi = decode(i);
        for j in 0..order {
            let vj = decode(j);
            let sum: Vec<usize> = vi.iter().zip(&vj).map(|(a, b)| (a + b) % n).collect();
            add.push(encode(&sum));

            let mut conv = vec![0usize; 2 * degree - 1];
            for (di, &a) in vi.iter().enumerate() {
                for (dj, &b) in vj.iter().enumerate() {
                    conv[di + dj] = (conv[di + dj] + a * b) % n;
                }
            }
            for k in (degree..conv.len()).rev() {
                let carry = conv[k];
                if carry == 0 {
                    continue;
                }
                conv[k] = 0;
                for (i_low, &r) in reduction.iter().enumerate() {
                    conv[k - degree + i_low] = (conv[k - degree + i_low] + carry * r) % n;
                }
            }
            conv.truncate(degree);
            mul.push(encode(&conv));
        }
    }

    let x_index = if degree >= 2 { n } else { reduction[0] };
    let presentation = format!("Z/{n}[x]/({})", format_poly(&reduced));
    FiniteRing::from_tables_kind(
        order,
        add,
        mul,
        0,
        1,
        presentation,
        RingKind::PolyQuotient {
            modulus: n,
            coeffs: reduced,
        },
        vec![("x".to_string(), x_index)],
        limits,
    )
}

/// A finite product of rings together with the tuple bookkeeping needed to
/// take it apart again.
#[derive(Debug, Clone)]
pub struct ProductData {
    pub ring: Arc<FiniteRing>,
    pub factor_orders: Vec<usize>,
}

impl ProductData {
    /// The tuple of factor components encoded by an element index.
    pub fn decode(&self, mut e: usize) -> Vec<usize> {
        let mut v = vec![0; self.factor_orders.len()];
        for (slot, &m) in v.iter_mut().zip(&self.factor_orders).rev() {
            *slot = e % m;
            e /= m;
        }
        v
    }

    pub fn encode(&self, tuple: &[usize]) -> usize {
        debug_assert_eq!(tuple.len(), self.factor_orders.len());
        let mut e = 0;
        for (&t, &m) in tuple.iter().zip(&self.factor_orders) {
            e = e * m + t;
        }
        e
    }
}

/// Componentwise product of an arbitrary finite list of rings.
///
/// The empty product is the zero ring. Element indices are row-major over
/// the factor tuple.
pub fn product_many(factors: &[Arc<FiniteRing>], limits: &Limits) -> Result<ProductData> {
    let mut order: u128 = 1;
    for f in factors {
        order = order.saturating_mul(f.order() as u128);
    }
    if order > limits.max_order as u128 {
        return Err(Error::Capacity(format!(
            "product of order {order} exceeds the configured bound {}",
            limits.max_order
        )));
    }
    let order = order as usize;
    let factor_orders: Vec<usize> = factors.iter().map(|f| f.order()).collect();

    let presentation = if factors.is_empty() {
        "Z/1".to_string()
    } else {
        factors
            .iter()
            .map(|f| {
                let p = f.presentation();
                if p.contains(" x ") {
                    format!("({p})")
                } else {
                    p.to_string()
                }
            })
            .collect::<Vec<_>>()
            .join(" x ")
    };

    let scratch = ProductData {
        // placeholder ring handle is not needed for encode/decode; build
        // tables with a local copy of the stride data instead
        ring: zmod(1, limits)?,
        factor_orders: factor_orders.clone(),
    };

    let mut add = Vec::with_capacity(order * order);
    let mut mul = Vec::with_capacity(order * order);
    for i in 0..order {
        let vi = scratch.decode(i);
        for j in 0..order {
            let vj = scratch.decode(j);
            let sum: Vec<usize> = vi
                .iter()
                .zip(&vj)
                .zip(factors)
                .map(|((&a, &b), f)| f.add(a, b))
                .collect();
            let prod: Vec<usize> = vi
                .iter()
                .zip(&vj)
                .zip(factors)
                .map(|((&a, &b), f)| f.mul(a, b))
                .collect();
            add.push(scratch.encode(&sum));
            mul.push(scratch.encode(&prod));
        }
    }
    let zero = scratch.encode(&factors.iter().map(|f| f.zero()).collect::<Vec<_>>());
    let one = scratch.encode(&factors.iter().map(|f| f.one()).collect::<Vec<_>>());

    let ring = FiniteRing::from_tables(order, add, mul, zero, one, presentation, limits)?;
    Ok(ProductData {
        ring,
        factor_orders,
    })
}

/// Binary product with its two projection homomorphisms.
pub fn product(
    left: &Arc<FiniteRing>,
    right: &Arc<FiniteRing>,
    limits: &Limits,
) -> Result<(ProductData, crate::hom::RingHom, crate::hom::RingHom)> {
    let data = product_many(&[Arc::clone(left), Arc::clone(right)], limits)?;
    let order = data.ring.order();
    let mut p1 = Vec::with_capacity(order);
    let mut p2 = Vec::with_capacity(order);
    for e in 0..order {
        let t = data.decode(e);
        p1.push(t[0]);
        p2.push(t[1]);
    }
    let proj1 = crate::hom::RingHom::new(&data.ring, left, p1)?;
    let proj2 = crate::hom::RingHom::new(&data.ring, right, p2)?;
    Ok((data, proj1, proj2))
}
