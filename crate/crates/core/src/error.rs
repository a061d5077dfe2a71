use thiserror::Error;

/// Errors surfaced by the engines and the analysis layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("rule number {number} out of range: the {states}-state {colors}-color space holds {bound} rules")]
    RuleNumberOutOfRange {
        number: u128,
        states: u32,
        colors: u32,
        bound: u128,
    },

    #[error("invalid machine shape: {0}")]
    InvalidSpec(String),

    #[error("rule table cannot be encoded: {0}")]
    UnencodableRule(String),

    #[error("invalid match: {0}")]
    InvalidMatch(String),

    #[error("invalid rewrite rule: {0}")]
    InvalidRule(String),

    #[error("morphisms do not compose: target of inner is object {inner_target}, source of outer is object {outer_source}")]
    CompositionMismatch {
        inner_target: usize,
        outer_source: usize,
    },

    #[error("tensored morphisms have mismatched widths: {left} vs {right}")]
    TensorWidthMismatch { left: usize, right: usize },

    #[error("quiver contains a cycle; a finite composite bound is required")]
    BoundRequired,

    #[error("quiver arrow {arrow} references a missing object")]
    DanglingArrow { arrow: String },

    #[error("system does not expose token data; causal and glocal constructions are unavailable")]
    TokensUnavailable,

    #[error("layer {layer} out of range (graph has layers 0..={depth})")]
    LayerOutOfRange { layer: usize, depth: usize },

    #[error("internal consistency violated: {0}")]
    InternalConsistency(String),

    #[error("malformed input: {0}")]
    MalformedInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
