use alloc::string::String;

use crate::matrix::Matrix;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("q must be odd (characteristic {p} given)")]
    EvenCharacteristic { p: u32 },
    #[error("{p} is not a prime")]
    NotPrime { p: u32 },
    #[error("{q} is not a prime power")]
    NotPrimePower { q: u32 },
    #[error("extension degree {e} unsupported (1..=4)")]
    UnsupportedDegree { e: u32 },
    #[error("field order {q} exceeds the table limit {limit}")]
    OrderTooLarge { q: u64, limit: u32 },
    #[error("value {value} is not an element of F_{q}")]
    InvalidElement { value: u64, q: u32 },
    #[error("division by zero")]
    DivisionByZero,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not invertible")]
    SingularMatrix,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix is not antisymmetric with zero diagonal")]
    NotAntisymmetric,
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("inadmissible parameters: {0}")]
    InadmissibleParams(String),
    #[error("assembled alternating form has radical of dimension {found}, expected {expected}")]
    RadicalMismatch { expected: usize, found: usize },
    #[error("the zero form does not define a hyperplane")]
    ZeroForm,
    #[error("zero vector does not define a projective point")]
    ZeroVector,
    #[error("point is singular for the quadratic form")]
    SingularPoint,
    #[error("point is not on the quadric")]
    NotOnQuadric,
    #[error("line class triple (+{plus}, W{w}, -{minus}) matches no line type")]
    TypeNotInTable { plus: usize, w: usize, minus: usize },

    #[error("generator matrix has rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error("zero message")]
    ZeroMessage,
    #[error("{required} messages exceed the exhaustive budget of {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error("codeword of weight {weight} found below the claimed minimum {claimed}")]
    CounterexampleFound {
        weight: usize,
        claimed: u64,
        form: Matrix,
    },

    #[error("case 4 has no closed form census")]
    Case4NoClosedForm,
    #[error("closed form did not evaluate to an integer: {0}")]
    NonIntegerResult(&'static str),
    #[error("maximum of f^{case} found at (r, d) = ({r}, {d}), table disagrees")]
    TableMismatch { case: u8, r: usize, d: usize },
}
