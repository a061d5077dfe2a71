//! Evolution engines for deterministic and multiway computational systems,
//! the free complexity categories their evolutions generate, and additivity
//! defect metrics that quantify computational and multicomputational
//! reducibility.
//!
//! The crate is organized around five layers:
//!
//! - [`tm`]: canonically numbered Turing machines and their evolution;
//! - [`hypergraph`]: ordered hypergraphs, canonical isomorphism
//!   certificates, and set-substitution (double-pushout) rewriting;
//! - [`multiway`]: multiway evolution graphs for any system exposing
//!   successors and canonical keys, plus branchial, causal, and
//!   token-event (glocal) derivatives;
//! - [`category`]: free categories generated by evolution quivers,
//!   step-count metadata on morphisms, the interval-valued time map, and
//!   its functor/monoidal law checks;
//! - [`defect`]: sequential and parallel additivity defects and the
//!   aggregated reducibility report.

pub mod category;
pub mod defect;
pub mod dot;
pub mod error;
pub mod hypergraph;
pub mod multiway;
pub mod tm;

pub use error::{Error, Result};

/// Serialize with sorted object keys and a trailing newline; all emitted
/// quantities are integers or strings, so output is byte-stable.
pub fn to_canonical_json<T: serde::Serialize>(value: &T) -> Result<String> {
    let value = serde_json::to_value(value)
        .map_err(|e| Error::MalformedInput(format!("serialization failed: {e}")))?;
    let mut text = serde_json::to_string_pretty(&value)
        .map_err(|e| Error::MalformedInput(format!("serialization failed: {e}")))?;
    text.push('\n');
    Ok(text)
}
