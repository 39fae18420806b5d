//! Classes in `H^{n,n}` and `H^{n+1,n}`: zero tests, ramification, residues.

pub mod global;
pub mod local;

pub use global::{
    as_normal_form, compact, cyclic_kill_check, filtration_level, form_is_zero, global_decompose, hnn_is_zero,
    is_zero_global, reciprocity_check, residue, CohClass, Decomposition, NormalForm, Verdict,
};
pub use local::{analyze, laurent, localize, places, Graded, LocalAnalysis, Place};
