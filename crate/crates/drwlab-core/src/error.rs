use std::fmt;

/// Errors surfaced by the library.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// `p` failed the primality check or the truncation length is invalid.
    BadContext(String),
    /// A requested truncation level does not exist (e.g. `F` below length 1).
    LevelUnderflow { have: u32 },
    /// The modulus `p^n` would overflow the coefficient word.
    ModulusOverflow { p: u64, n: u32 },
    /// A window does not contain mandatory generators or element support.
    WindowTooSmall(String),
    /// An intermediate integer polynomial exceeded the term budget.
    TermBudget { terms: usize, budget: usize },
    /// Integer coefficient overflow while building universal polynomials.
    CoefficientOverflow,
    /// Cartier operator applied to an element outside the image of `F`.
    NotInFImage,
    /// Mixing elements over different `(p, n)` contexts.
    ContextMismatch,
    /// Form degrees do not match the operation (e.g. pairing two 1-forms).
    DegreeMismatch,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::BadContext(msg) => write!(f, "bad context: {msg}"),
            Error::LevelUnderflow { have } => {
                write!(f, "cannot lower truncation length below 1 (have {have})")
            }
            Error::ModulusOverflow { p, n } => write!(f, "modulus {p}^{n} overflows"),
            Error::WindowTooSmall(msg) => write!(f, "window too small: {msg}"),
            Error::TermBudget { terms, budget } => {
                write!(f, "term budget exceeded: {terms} > {budget}")
            }
            Error::CoefficientOverflow => write!(f, "integer coefficient overflow"),
            Error::NotInFImage => write!(f, "element is not in the image of F"),
            Error::ContextMismatch => write!(f, "prime context mismatch"),
            Error::DegreeMismatch => write!(f, "form degree mismatch"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
