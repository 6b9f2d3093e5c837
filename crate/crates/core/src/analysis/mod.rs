//! Quantitative side of the Liouville-type uniqueness results: the growth
//! integral bound, regime classification, covering predicates, Legendre
//! conjugates and the envelope of the unilateral ramp wave.

mod conjugate;
mod covering;
mod envelope;
mod growth;
mod regime;

pub use conjugate::{beta, beta_asymptotic, legendre_conjugate_beta};
pub use covering::{covering_radius, q_covering_check, q_covering_witness, CoveringSpec};
pub use envelope::{u1_envelope_check, EnvelopeReport};
pub use growth::{
    anqa_integral, bound_constants, bound_sweep, lemma_bound, log_growth_integral, log_lemma_bound,
    numeric_growth_integral, AnqaResult, BoundConstants, BoundSweepRow,
};
pub use regime::{psi, regime_classify, y_star_min, Regime, Verdict, YStar};
