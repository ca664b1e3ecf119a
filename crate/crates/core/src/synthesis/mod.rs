//! Synthesis of supremal sublanguages. The homogeneous bound has a counter
//! route and an independent language route; the heterogeneous variants
//! work one plant marker at a time.

mod hqc;
mod language;
mod supcon;
mod supqc;
mod trace;

pub use hqc::{ensure_result_within, sup_chqc, sup_chqc_traced, sup_hqc, sup_hqc_traced};
pub use language::{extend_by, short_strings, sup_qc_language, sup_qc_language_traced};
pub use supcon::{sup_cqc, sup_cqc_traced, supcon, supcon_traced};
pub use supqc::{sup_qc, sup_qc_with, Frontier};
pub use trace::{RemovedTransition, SynthesisTrace, TraceStep};

use crate::automaton::{marked_language_compare, Generator};
use crate::error::Result;

/// Which route computes the supremal quantitatively completable sublanguage.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum SupQcMethod {
    #[default]
    Generator,
    Language,
    /// Run both and insist that they agree.
    Both,
}

/// `sup_qc` by the chosen route. With [`SupQcMethod::Both`] a disagreement
/// between the two routes is an internal error and panics.
pub fn sup_qc_by(
    k: &Generator,
    n: u32,
    method: SupQcMethod,
    mut trace: Option<&mut SynthesisTrace>,
) -> Result<Generator> {
    match method {
        SupQcMethod::Generator => sup_qc_with(k, n, Frontier::Stack, trace),
        SupQcMethod::Language => sup_qc_language_traced(k, n, trace),
        SupQcMethod::Both => {
            let a = sup_qc_with(k, n, Frontier::Stack, trace.as_deref_mut())?;
            let b = sup_qc_language_traced(k, n, trace)?;
            let rel = marked_language_compare(&a, &b)?;
            assert!(
                rel.is_equal(),
                "generator and language routes disagree for N={n}: {rel:?}"
            );
            Ok(a)
        }
    }
}
