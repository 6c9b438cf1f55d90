use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("degree of the zero polynomial is undefined")]
    ZeroPolynomial,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid harmonic index (m={m}, n={n}): need |n| <= m and m = n mod 2")]
    InvalidIndex { m: i64, n: i64 },

    /// The leading factor `2v - alpha - n - m + 1` of the coefficient
    /// recurrence vanishes before the series terminates.
    #[error("recurrence degenerate for (alpha={alpha}, m={m}, n={n}) at v={v}")]
    DegenerateRecurrence { alpha: i64, m: u32, n: i64, v: u32 },

    #[error("hypergeometric series does not terminate: a = {0} is not a non-positive integer")]
    NonTerminating(String),

    #[error("hypergeometric pole: (c)_v vanishes for c = {c} at v = {v}")]
    Pole { c: String, v: u32 },

    #[error("construction failed for (alpha={alpha}, m={m}, n={n}): {reason}")]
    Construction {
        alpha: i64,
        m: u32,
        n: i64,
        reason: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
