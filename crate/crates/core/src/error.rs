use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("polynomial is identically zero")]
    ZeroPolynomial,

    #[error("pole at x = {pole} lies in the integration interval [{lo}, {hi}]")]
    PoleInInterval { pole: f64, lo: f64, hi: f64 },

    #[error("first equation does not depend on y: |b1| + |beta1| = 0")]
    DegenerateFirstEquation,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("exponent q = {q} makes 2q - 1 vanish")]
    QDegenerate { q: f64 },

    #[error("x = {x} is not an equilibrium: f = {f}, g = {g}")]
    NotAnEquilibrium { x: f64, f: f64, g: f64 },

    #[error("continuation of the zero near x = {x0} failed at epsilon = {eps}")]
    NoZeroNearby { x0: f64, eps: f64 },

    #[error("equilibria are not isolated")]
    NonIsolatedEquilibrium,

    #[error("transversal-curve hypotheses violated: {0}")]
    ConditionsViolated(String),

    #[error("no balanced pair (mu1, mu2): {0}")]
    NoBalancedPair(String),

    #[error("step size underflow at t = {t} (h = {h:e})")]
    StepSizeUnderflow { t: f64, h: f64 },

    #[error("no return to the section from x = {x_start}: {reason}")]
    NoReturn { x_start: f64, reason: String },

    #[error("non-finite value: {0}")]
    NonFinite(String),
}

impl Error {
    /// True for errors caused by inputs outside an operation's domain.
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::Precondition(_)
                | Error::DegenerateFirstEquation
                | Error::QDegenerate { .. }
                | Error::NotAnEquilibrium { .. }
                | Error::ConditionsViolated(_)
                | Error::PoleInInterval { .. }
                | Error::ZeroPolynomial
                | Error::NonIsolatedEquilibrium
        )
    }
}
