use crate::gf2n::Elem;

/// Error type shared by all modules.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// Field construction failed: degree out of range or reducible polynomial.
    #[error("invalid field: {0}")]
    InvalidField(String),

    /// Inversion of zero, or zero raised to a negative power.
    #[error("division by zero")]
    DivisionByZero,

    /// Exponent not invertible modulo 2^n - 1.
    #[error("exponent {e} shares factor {gcd} with 2^n-1 = {modulus}")]
    NotInvertibleExponent { e: u64, modulus: u64, gcd: u64 },

    /// Frobenius step k must be coprime to the field degree.
    #[error("k = {k} is not coprime to n = {n}")]
    NotCoprime { k: u32, n: u32 },

    /// u lies in an excluded subfield, so the witness formulas do not apply.
    #[error("u = {u} rejected: {reason}")]
    InvalidU { u: Elem, reason: UExclusion },

    /// u + u^(q^2) = 0, so the witness denominators vanish.
    #[error("u = {u} is degenerate: u + u^(q^2) = 0")]
    DegenerateU { u: Elem },

    /// Witness recovery requires the equation to have three roots.
    #[error("equation has {count} roots at a = {a}; three are required")]
    NoThreeSolutions { a: Elem, count: usize },

    /// a = 0 is handled by convention, not by the three-root parameterization.
    #[error("a = 0 lies outside the three-root parameterization")]
    OutsideLemmaScope,

    /// A root count other than 0/1/3 would contradict the equation's structure.
    #[error("unexpected root count {count} at a = {a}")]
    UnexpectedRootCount { a: Elem, count: usize },

    /// Derivative direction must be nonzero.
    #[error("derivative direction a = 0 is not allowed")]
    ZeroDirection,

    /// Operation requires the other field-degree parity.
    #[error("field degree n = {n} has the wrong parity: {required}")]
    ParityError { n: u32, required: &'static str },

    /// Requested reduction chain does not match the field-degree parity.
    #[error("requested {requested} reduction chain but n = {n}")]
    ParityMismatch { n: u32, requested: &'static str },

    /// omega' must be one of the three nonzero elements of the GF(4) subfield.
    #[error("omega' = {omega} is not in GF(4)*")]
    InvalidOmega { omega: Elem },

    /// The even-degree machinery labels the three cube cosets by the GF(4)
    /// units; when 6 divides n those units are cubes themselves and the
    /// labelling collapses.
    #[error("degree n = {n} is divisible by 6: the GF(4) units are cubes and cannot label the cube cosets")]
    CosetCollapse { n: u32 },
}

/// Which subfield constraint rejected a witness parameter u.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UExclusion {
    /// u ∈ {0, 1}; always excluded.
    Gf2,
    /// u in the GF(4) subfield; excluded whenever n is even.
    Gf4,
}

impl std::fmt::Display for UExclusion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            UExclusion::Gf2 => write!(f, "u lies in GF(2)"),
            UExclusion::Gf4 => write!(f, "u lies in the GF(4) subfield"),
        }
    }
}
