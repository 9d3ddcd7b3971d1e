//! Resonators, their moments against the Gaussian kernel, and the
//! Euler-product lower bounds for the moment ratio.

mod moments;
mod ratio;
mod resonator;

pub use moments::{
    double_sum_n_max, max_quadrature_step, moment_diagonal_closed_form, moment_double_sum_oracle,
    moment_quadrature, square_sum_closed_form, square_sum_tail_ratio, KernelSpec, MomentEstimate,
    MomentMethod, Objective, QuadratureConfig, DOUBLE_SUM_TAIL_TOLERANCE,
};
pub use ratio::{ratio_lower_bound_line, ratio_lower_bound_strip, RatioBreakdown};
pub use resonator::{
    build_resonator, line_one_cutoff, log_resonator_abs, resonator_sup, restore_table,
    smooth_support, strip_cutoff, ResonatorMode, ResonatorSpec, ResonatorTable,
};
