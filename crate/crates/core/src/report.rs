//! Uniform JSON-serializable result records for verification operations.

use crate::gf2n::Elem;
use crate::kasami::SweepCheck;
use serde::Serialize;

/// One verification outcome in the shared report shape:
/// `{"op": ..., "n": ..., "k": ..., "pass": ..., "counterexamples": [...],
/// "elapsed_ms": ...}`.
///
/// `k` is omitted for operations that do not take one, `elapsed_ms` is
/// omitted when timing is suppressed for byte-stable output, and `note`
/// carries human-readable context (for example, findings that are reported
/// rather than asserted).
#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub op: String,
    pub n: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    pub pass: bool,
    pub counterexamples: Vec<Elem>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl VerifyReport {
    pub fn new(op: impl Into<String>, n: u32, k: Option<u32>, pass: bool) -> VerifyReport {
        VerifyReport {
            op: op.into(),
            n,
            k,
            pass,
            counterexamples: Vec::new(),
            elapsed_ms: None,
            note: None,
        }
    }

    pub fn from_sweep(
        op: impl Into<String>,
        n: u32,
        k: Option<u32>,
        sweep: &SweepCheck,
    ) -> VerifyReport {
        VerifyReport {
            op: op.into(),
            n,
            k,
            pass: sweep.pass,
            counterexamples: sweep.counterexamples.clone(),
            elapsed_ms: None,
            note: None,
        }
    }

    pub fn with_counterexamples(mut self, counterexamples: Vec<Elem>) -> VerifyReport {
        self.counterexamples = counterexamples;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> VerifyReport {
        self.note = Some(note.into());
        self
    }

    pub fn with_elapsed_ms(mut self, elapsed_ms: u64) -> VerifyReport {
        self.elapsed_ms = Some(elapsed_ms);
        self
    }
}
