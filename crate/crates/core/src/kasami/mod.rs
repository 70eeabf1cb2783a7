//! Differential analysis of Kasami-type power functions and the verification
//! machinery for the equation systems behind their 2-uniformity.
//!
//! The centrepiece is [`PowerFunction`], which evaluates `x -> x^d` over a
//! binary field and measures its differential spectrum. Around it sit
//! exhaustive checkers that connect the differential count of the Kasami
//! exponent `2^(2k) - 2^k + 1` to the root structure of the affine-reduced
//! equation `(v+1)^(q+1) + c v = 0` (with `q = 2^k`), split by field parity:
//!
//! * [`odd`]-degree fields: closed-form roots and trace admissibility,
//! * [`even`]-degree fields: the GF(4) subfield structure and the
//!   three-to-one cubing map,
//! * [`reduction`]: the pair-counting equivalence between derivative
//!   solutions and admissible roots,
//! * [`mcm`]: the Müller–Cohen–Matthews polynomial identity that feeds the
//!   odd case,
//! * [`catalog`]: the reference list of known APN power-function families.

mod catalog;
mod even;
mod mcm;
mod odd;
mod reduction;
mod spectrum;

pub use catalog::{catalog_table1, Family, FamilyEntry};
pub use even::{
    discussion_sweep, even_discussion_check, verify_even_facts, verify_three_to_one_cubing,
    DiscussionChecker, DiscussionReport, DiscussionSweep, Gf4Embedding, ThreeToOneReport,
};
pub use mcm::{
    mcm_eval, tk_eval, verify_derivative_two_to_one, verify_kasami_gold_identity,
    verify_mcm_permutation, McmPermutationReport,
};
pub use odd::{
    closed_form_v_and_trace_check, verify_odd_system, ClosedFormReport, OddSystemChecker,
};
pub use reduction::{
    reduction_equivalence, Parity, ReductionChecker, ReductionPair, ReductionRecord,
};
pub use spectrum::{DifferentialSpectrum, PowerFunction};

use crate::gf2n::Elem;
use serde::Serialize;

/// The Kasami exponent `2^(2k) - 2^k + 1`.
///
/// Panics if `k` is 0 or large enough to overflow (`k > 31`).
pub fn kasami_exponent(k: u32) -> u64 {
    assert!(
        (1..=31).contains(&k),
        "kasami exponent parameter out of range: {k}"
    );
    (1u64 << (2 * k)) - (1u64 << k) + 1
}

/// Outcome of an exhaustive check over a field: a pass flag, the number of
/// cases inspected, and a capped list of counterexample inputs.
#[derive(Clone, Debug, Serialize)]
pub struct SweepCheck {
    pub pass: bool,
    pub checked: u64,
    pub counterexamples: Vec<Elem>,
}

/// Cap on stored counterexamples so reports stay readable; the pass flag
/// still reflects every case checked.
pub(crate) const COUNTEREXAMPLE_CAP: usize = 8;

impl SweepCheck {
    pub(crate) fn new() -> Self {
        SweepCheck {
            pass: true,
            checked: 0,
            counterexamples: Vec::new(),
        }
    }

    /// Record one checked case; on failure, remember the witness (up to the cap).
    pub(crate) fn record(&mut self, ok: bool, witness: Elem) {
        self.checked += 1;
        if !ok {
            self.pass = false;
            if self.counterexamples.len() < COUNTEREXAMPLE_CAP {
                self.counterexamples.push(witness);
            }
        }
    }
}
