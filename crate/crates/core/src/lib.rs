//! Exact tools for deciding whether a self-similar set
//! `E(Σ, q) = {Σ_{i≥1} σ_i q^i : σ_i ∈ Σ}` at the critical ratio `q = 1/|Σ|`
//! has positive Lebesgue measure.

pub mod cyclotomic;
pub mod decide;
pub mod frontends;
pub mod levelsets;
pub mod numeric;
pub mod report;
pub mod sigma;

mod serde_bigint;
