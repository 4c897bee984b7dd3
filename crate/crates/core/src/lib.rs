//! Exact computations with bi-orders on free products of groups.

pub mod aut;
pub mod magnus;
pub mod noniso;
pub mod oracle;
pub mod par;
pub mod pl;
pub mod rational;
pub mod realization;
pub mod saturate;
pub mod sign;
pub mod types;
pub mod word;

pub use aut::{apply_aut, AutWord, NielsenMove};
pub use noniso::{nonisolation_witness, NonIsoInput, NonIsoWitness};
pub use oracle::{compare, OrderOracle, Provenance, SharedOracle};
pub use par::Exec;
pub use pl::{Critical, PLMap};
pub use rational::Rational;
pub use realization::{FactorSpec, MergeReport, Realization};
pub use sign::Sign;
pub use word::{ball, free_ball, normal_form, Exponent, Letter, Word};
