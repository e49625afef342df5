//! Finite-size acceptance margins, shared by `--check` and the test suites.

/// Absolute tolerance on the mean first moment of a rescaled state spectrum.
pub const STATE_FIRST_MOMENT: f64 = 0.02;
/// Minimum fraction of `d²ρ^Γ` eigenvalues inside the limit support padded by
/// [`SUPPORT_PAD`].
pub const PADDED_SUPPORT_MASS: f64 = 0.99;
pub const SUPPORT_PAD: f64 = 0.5;

/// Tolerances on mean moments `k = 1..4` of `Y − Id` against `SC(0, 1/α)`.
pub const CENTRAL_MOMENTS: [f64; 4] = [0.05, 0.05, 0.05, 0.10];
/// Bound on the mean KS distance to `SC(1, 1/α)`.
pub const MEAN_KS: f64 = 0.08;
/// Bound on a single trial's KS distance, required in 90% of trials.
pub const TRIAL_KS: f64 = 0.08;
pub const TRIAL_KS_FRACTION: f64 = 0.9;

/// Margin on `λ_min`, `λ_max` around `1 ± 2/√α` for `α ≥ 4`.
pub const EDGE_WIDE_ALPHA: f64 = 0.25;
/// Margin for `α < 4`.
pub const EDGE_ALPHA_ONE: f64 = 0.3;
/// Bound on the mean of `max_i |W_ii − 1|`.
pub const DIAG_DEVIATION: f64 = 0.15;

/// Required PPT frequency deep in the PPT phase.
pub const PPT_HIGH_FREQUENCY: f64 = 0.9;

/// Margins on the mean moments `k = 2, 4` of `d·ρ^Γ` for pure states.
pub const PURE_SECOND_MOMENT: f64 = 0.1;
pub const PURE_FOURTH_MOMENT: f64 = 0.4;
/// Largest gap between the formula and eigensolver pure spectra.
pub const PURE_METHOD_GAP: f64 = 1e-8;

/// Quadrature moment tolerance.
pub const LAW_MOMENT: f64 = 1e-6;
/// Tolerance on total mass.
pub const LAW_MASS: f64 = 1e-8;

/// Edge margin used at a given `α`.
pub fn edge_margin(alpha: f64) -> f64 {
    if alpha >= 4.0 {
        EDGE_WIDE_ALPHA
    } else {
        EDGE_ALPHA_ONE
    }
}
