//! Abstract syntax for ring and homomorphism expressions, with a canonical
//! renderer: printing a tree and reparsing it yields the identical tree.

use std::fmt;

/// A univariate polynomial as little-endian integer coefficients, with no
/// trailing zero (the zero polynomial is the empty list).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    pub coeffs: Vec<i64>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<i64>) -> Poly {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    /// Does the rendering mention the variable at all?
    pub fn uses_variable(&self) -> bool {
        self.coeffs.iter().skip(1).any(|&c| c != 0)
    }

    /// Renders with the given variable name: descending degree, zero terms
    /// skipped, unit coefficients and first powers elided, terms joined by
    /// the sign of the following coefficient ("x^2-3x+1").
    pub fn render(&self, var: &str) -> String {
        let mut out = String::new();
        for (degree, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if c < 0 {
                out.push('-');
            } else if !out.is_empty() {
                out.push('+');
            }
            let magnitude = c.unsigned_abs();
            match degree {
                0 => out.push_str(&magnitude.to_string()),
                _ => {
                    if magnitude != 1 {
                        out.push_str(&magnitude.to_string());
                    }
                    out.push_str(var);
                    if degree > 1 {
                        out.push_str(&format!("^{degree}"));
                    }
                }
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

/// A ring presentation: Z/n, a monic univariate quotient over Z/n, or a
/// finite product. Product lists hold at least two factors; a
/// parenthesized product inside another product stays a nested node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RingExpr {
    Modular(u64),
    PolyQuotient {
        modulus: u64,
        var: String,
        poly: Poly,
    },
    Product(Vec<RingExpr>),
}

impl fmt::Display for RingExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingExpr::Modular(n) => write!(f, "Z/{n}"),
            RingExpr::PolyQuotient { modulus, var, poly } => {
                write!(f, "Z/{modulus}[{var}]/({})", poly.render(var))
            }
            RingExpr::Product(factors) => {
                for (i, factor) in factors.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" x ")?;
                    }
                    if matches!(factor, RingExpr::Product(_)) {
                        write!(f, "({factor})")?;
                    } else {
                        write!(f, "{factor}")?;
                    }
                }
                Ok(())
            }
        }
    }
}

impl RingExpr {
    /// The generator names the presentation declares (one per polynomial
    /// quotient at the top level; products and Z/n declare none).
    pub fn generator_names(&self) -> Vec<String> {
        match self {
            RingExpr::PolyQuotient { var, .. } => vec![var.clone()],
            _ => Vec::new(),
        }
    }
}

/// A homomorphism presentation: source, target, and generator-image
/// bindings (polynomials in the target's generator, or constants).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomExpr {
    pub source: RingExpr,
    pub target: RingExpr,
    pub bindings: Vec<(String, Poly)>,
}

impl fmt::Display for HomExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.source, self.target)?;
        if !self.bindings.is_empty() {
            let target_var = match &self.target {
                RingExpr::PolyQuotient { var, .. } => var.as_str(),
                _ => "x",
            };
            f.write_str(" : ")?;
            for (i, (name, poly)) in self.bindings.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{name} -> {}", poly.render(target_var))?;
            }
        }
        Ok(())
    }
}
