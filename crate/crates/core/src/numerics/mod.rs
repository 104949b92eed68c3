//! Integration, return maps, cycle search and the fits built on them.

mod charts;
mod cycles;
mod fit;
mod ode;
mod poincare;
mod sweep;

pub use charts::{chart_consistency, compare_trajectories, curve_hausdorff, hausdorff, ChartCheck};
pub use cycles::{
    confirm_certificate, cycle_orbit, describe_cycle, find_cycles, CycleNumeric, CycleOptions,
};
pub use fit::{least_squares, power_fit, return_time_expansion, slope_through_origin, PowerFit};
pub use ode::{
    integrate, ChartKind, Crossing, DenseStep, FnFlow, Flow, OdeOptions, Reversed, Section,
    Termination, Trajectory,
};
pub use poincare::{poincare_return, ReturnOptions, ReturnSample};
pub use sweep::{epsilon_sweep, log_grid, SweepReport, SweepRow};
