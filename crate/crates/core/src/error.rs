use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parameter `{name}` must be strictly positive and finite, got {value}")]
    InvalidParameter { name: &'static str, value: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("no crossing of the e^-1 level found within depth {max_depth}")]
    NoRoot { max_depth: f64 },

    #[error("degenerate trace: the surface field vanishes at the sampled point")]
    DegenerateTrace,

    #[error("unsupported impedance order k = {0} (expected 0, 1 or 2)")]
    UnsupportedOrder(u32),

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("Bessel function of order {order} has a pole at z = 0")]
    Pole { order: u32 },

    #[error("Bessel order {0} exceeds the supported maximum of 200")]
    OrderTooLarge(u32),

    #[error("linear system is singular (condition number {condition:e})")]
    SingularSystem { condition: f64 },

    #[error("post-solve check failed for {condition}: relative residual {residual:e}")]
    ResidualCheck { condition: String, residual: f64 },

    #[error("solutions are defined on different benchmarks: {0}")]
    Mismatch(String),

    #[error("convergence fit rejected: {0}")]
    FitRejected(String),
}
