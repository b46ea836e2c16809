//! Structural complexity of symbol sequences via L-system rewriting grammars.
//!
//! A bit window of length `2^d` is read as a perfect binary tree. Every node
//! becomes a rewriting rule `P -> [-F T_L][+F T_R]`; rules are grouped into
//! classes by depth-bounded isomorphism, and the resulting context-free
//! grammar is turned into a system of generating functions `V_i(z)`. The
//! structural complexity is `K0 = -ln R`, where `R` is the largest `z` in
//! `[0, 1]` at which the root function's fixpoint iteration converges.
//!
//! The crate also provides the text encoders that produce bit strings (fixed
//! width `BIN` and `LZW`), the topological-entropy and linguistic-complexity
//! baselines, and a sliding-window driver with a robust anomaly flagger.
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the `*64`
//! aliases below fix the scalar to `f64`.

pub mod analysis;
pub mod baselines;
pub mod complexity;
pub mod encoding;
mod error;
pub mod grammar;
pub mod scalar;

pub use analysis::{
    analyze, flag_anomalies, segment, AnalysisConfig, Measures, Segmentation, WindowPlan,
    WindowRecord, WindowSeries,
};
pub use baselines::{
    distinct_counts, entropy_fixed_length, entropy_word_length, linguistic_complexity,
    topological_entropy, LcBreakdown, SubstringIndex,
};
pub use complexity::{
    iterate, k0_of_window, radius, radius_traced, system_from_grammar, ComplexityResult,
    ConvergenceParams, GenFunSystem, KMode, Probe, RadiusSearch, Verdict,
};
pub use encoding::{
    decode_lzw, encode_bin, encode_lzw, indices_to_bits, pack_fields, preprocess_text,
    symbol_indices, Alphabet, BitFileHeader, BitString, EncodingTag, LzwDictionary, NormalizedText,
};
pub use error::{Error, Result};
pub use grammar::{
    classify, depth_signature, grammar_stats, tree_to_bracketed, BitTree, BracketedString, ClassId,
    Grammar, GrammarStats, Node, Rhs, RuleClass, Signature, Variant,
};
pub use scalar::Scalar;

/// Generating-function system evaluated in `f64`.
pub type GenFunSystem64 = GenFunSystem<f64>;
/// Generating-function system evaluated in `f32`.
pub type GenFunSystem32 = GenFunSystem<f32>;
pub type ConvergenceParams64 = ConvergenceParams<f64>;
pub type ConvergenceParams32 = ConvergenceParams<f32>;
pub type ComplexityResult64 = ComplexityResult<f64>;
pub type ComplexityResult32 = ComplexityResult<f32>;
pub type LcBreakdown64 = LcBreakdown<f64>;
pub type AnalysisConfig64 = AnalysisConfig<f64>;
pub type WindowRecord64 = WindowRecord<f64>;
pub type WindowSeries64 = WindowSeries<f64>;
