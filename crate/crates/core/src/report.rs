//! Serializable verification reports: the per-check report emitted by the
//! scheme verifiers and the operator-divergence report.

use serde::Serialize;

use crate::sheafify::PresheafComparison;

/// One verification outcome. `check` is one of the stable tokens
/// "lemma31", "prop32_1", "prop32_2", "corollary", "morphism".
#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub ring: String,
    pub check: String,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub isomorphism_table: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckReport {
    pub fn pass(ring: impl Into<String>, check: impl Into<String>) -> Self {
        CheckReport {
            ring: ring.into(),
            check: check.into(),
            status: "pass".to_string(),
            witness: None,
            isomorphism_table: None,
            note: None,
        }
    }

    pub fn fail(
        ring: impl Into<String>,
        check: impl Into<String>,
        witness: serde_json::Value,
    ) -> Self {
        CheckReport {
            ring: ring.into(),
            check: check.into(),
            status: "fail".to_string(),
            witness: Some(witness),
            isomorphism_table: None,
            note: None,
        }
    }

    pub fn with_table(mut self, table: Vec<usize>) -> Self {
        self.isomorphism_table = Some(table);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == "pass"
    }
}

/// Comparison of the two sheafification operators on one presheaf.
#[derive(Debug, Clone, Serialize)]
pub struct DivergenceReport {
    pub space: String,
    pub presheaf: String,
    pub operator_a: String,
    pub operator_b: String,
    /// Members of the first open with non-isomorphic sections, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_open: Option<Vec<usize>>,
    /// (order under operator a, order under operator b) at the witness.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orders: Option<(usize, usize)>,
    pub agree: bool,
    pub comparison: PresheafComparison,
}

impl DivergenceReport {
    pub fn from_comparison(
        space: impl Into<String>,
        presheaf: impl Into<String>,
        operator_a: impl Into<String>,
        operator_b: impl Into<String>,
        comparison: PresheafComparison,
    ) -> Self {
        let witness = comparison
            .first_divergence
            .map(|u| comparison.per_open[u].clone());
        DivergenceReport {
            space: space.into(),
            presheaf: presheaf.into(),
            operator_a: operator_a.into(),
            operator_b: operator_b.into(),
            witness_open: witness.as_ref().map(|w| w.members.clone()),
            orders: witness.as_ref().map(|w| (w.order_a, w.order_b)),
            agree: comparison.agree,
            comparison,
        }
    }
}
