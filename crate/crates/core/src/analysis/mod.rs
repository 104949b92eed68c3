//! Equilibria and the analytic cycle certificates.

mod certificate;
mod equilibria;
mod focus;
mod theorem1;
mod theorem5;
mod transversal;

pub use certificate::{
    CertificateKind, CycleCertificate, Inequality, Orientation, Region, Relation, Witness,
};
pub use equilibria::{
    classify, find_equilibria_lienard, find_equilibria_system, jet, EquilibriumKind,
    EquilibriumReport, Jet, Stability, DISCRIMINANT_TOL, TRACE_TOL,
};
pub use focus::{abcd_criterion, FocusCriterion};
pub use theorem1::{continue_zero, lyapunov_quantity, theorem1_certify, EQUILIBRIUM_TOL};
pub use theorem5::{conditions21_check, theorem5_certify, Conditions21, Theorem5Outcome, CONDITION_NAMES};
pub use transversal::{
    build_transversal, check_transversality, default_anchors, sample_abscissas, Segment,
    TransversalCurve, TransversalOptions, TransversalityReport,
};
