//! From a quadratic system to `x' = y`, `y' = -f(x) y - g(x)`.

mod family;
mod lienard;
mod prop4;
mod system;
mod transform;

pub use family::{LienardFamily, QuadraticFamily};
pub use lienard::{reduce, to_lienard, Chart, LienardForm, Source, WeightKind};
pub use prop4::{lienard_coeffs, prop4_map, LienardCoeffs, Prop4Output};
pub use system::{QuadraticSystem, COEFFICIENT_NAMES};
pub use transform::{eliminate_c1, line_type, normalize_unit, LineType, Step, TransformRecord};
