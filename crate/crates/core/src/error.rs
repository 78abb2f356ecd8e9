use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("special-function overflow at order {order} (argument {argument})")]
    SpecialFunctionOverflow { order: usize, argument: f64 },

    #[error("Mie denominator underflow at order {order}")]
    DenominatorUnderflow { order: usize },

    #[error("Mie series not converged after {order_max} orders (tail estimate {tail:.3e})")]
    NotConverged { order_max: usize, tail: f64 },

    #[error("no steady state: max Re eig(A) = {max_re_eig:.6e}")]
    NoSteadyState { max_re_eig: f64 },

    #[error("degenerate denominator in {0}")]
    DegenerateDenominator(&'static str),

    #[error("eigensolver failed to converge")]
    Eigensolver,

    #[error("singular Lyapunov operator")]
    SingularLyapunov,

    #[error("no steady state attainable on the detuning grid [{min:.6e}, {max:.6e}] rad/s")]
    NoStableDetuning { min: f64, max: f64 },

    #[error("propagation step failed: {0}")]
    StepFailure(String),
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
