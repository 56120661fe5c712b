use thiserror::Error;

/// Errors raised by constructions, lookups and parsers in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{a} is not invertible modulo {m}")]
    NotInvertible { a: u64, m: u64 },
    #[error("order {d} does not divide {q} - 1")]
    OrderDoesNotDivide { q: u64, d: u64 },
    #[error("{alpha} is not a primitive root of {q}")]
    NotPrimitiveRoot { alpha: u64, q: u64 },
    #[error("residue is zero modulo {0}; it belongs to no cyclotomic class")]
    ZeroResidue(u64),
    #[error("class index {index} out of range for order {d}")]
    ClassIndexOutOfRange { index: usize, d: usize },
    #[error("no closed form for cyclotomic numbers of order {0} (only 2 and 6)")]
    UnsupportedOrder(u64),
    #[error("order 6 closed form needs the Hall parameter x")]
    MissingHallParameter,
    #[error("{0} is not a Hall prime (need q = x^2 + 27, q = 1 mod 6)")]
    NotHallPrime(u64),
    #[error("x = {x} is not a valid Hall parameter for q = {q}")]
    InvalidHallParameter { q: u64, x: i64 },
    #[error("cyclotomic table mismatch for q = {q} at ({i}, {j}): table gives {expected}, counted {computed}")]
    TableMismatch {
        q: u64,
        i: usize,
        j: usize,
        expected: i64,
        computed: i64,
    },
    #[error("{q} is not congruent to {residue} mod {modulus}")]
    BadCongruence { q: u64, residue: u64, modulus: u64 },
    #[error("{q} and {q} + 2 are not both prime")]
    NotTwinPrime { q: u64 },
    #[error("{r} is not coprime to {n}")]
    NotCoprime { r: u64, n: u64 },
    #[error("a sequence needs a positive period")]
    EmptySequence,
    #[error("period mismatch: {left} vs {right}")]
    PeriodMismatch { left: usize, right: usize },
    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: usize, right: usize },
    #[error("supports have different sizes: {left} vs {right}")]
    WeightMismatch { left: usize, right: usize },
    #[error("pair [{i}, {j}] is not a valid pair of distinct conjugates")]
    BadPair { i: usize, j: usize },
    #[error("computed multiplier group differs from the product-set prediction for q = {q} (expected {expected:?}, computed {computed:?})")]
    MultiplierMismatch {
        q: u64,
        expected: Vec<usize>,
        computed: Vec<usize>,
    },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
