//! Exact number theory of the frequency α and the phase θ.

pub mod exact;
mod frequency;
mod lnsin;
mod orbit;
mod phase;
mod resonance;
mod x0;

pub use exact::{ln_torus_norm, torus_norm};
pub use frequency::{continued_fraction, from_coefficients, Convergent, Frequency, FrequencyJson};
pub use lnsin::ln_sin_sum;
pub use orbit::Orbit;
pub use phase::{construct_phase, verify_construction, Phase, PhaseJson, DEFAULT_PHASE_SCAN, DEFAULT_SIGMA};
pub use resonance::{
    find_resonances, fit_gap_constant, resonance_exponent, Mode, ResonanceEntry, ResonanceSequence, ScanRange,
    DEFAULT_MIN_RESONANCE,
};
pub use x0::{locate_x0_eta, X0Eta, X0Table};
