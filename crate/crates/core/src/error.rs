use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UflError {
    #[error("valuation is indeterminate at precision {precision}")]
    IndeterminateValuation { precision: i64 },
    #[error("division by exact zero")]
    DivisionByZero,
    #[error("factor {id}: gamma does not generate the extension")]
    NotAGenerator { id: String },
    #[error("factor {id}: tau(gamma) != -gamma")]
    NotAntiHermitian { id: String },
    #[error("factors {a} and {b} have a common root")]
    FactorsNotCoprime { a: String, b: String },
    #[error("characteristic {p} must exceed the total degree {n}")]
    CharacteristicTooSmall { p: u32, n: usize },
    #[error("inconsistent invariants: {0}")]
    InconsistentInvariants(String),
    #[error("element is not fixed by tau")]
    NotInFixedField,
    #[error("generator matrix is rank deficient")]
    RankDeficient,
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("lattice is not stable under gamma")]
    NotStable,
    #[error("search space of dimension {dim} exceeds the cap {cap} (class {class})")]
    SearchTooLarge { dim: usize, cap: usize, class: String },
    #[error("class {0} does not have even total parity")]
    ClassNotAdmissible(String),
    #[error("{message}")]
    Schema { path: String, message: String },
    #[error("unknown field {field}")]
    UnknownField { path: String, field: String },
    #[error("{0}")]
    Io(String),
}

impl UflError {
    pub fn code(&self) -> &'static str {
        match self {
            UflError::IndeterminateValuation { .. } => "IndeterminateValuation",
            UflError::DivisionByZero => "DivisionByZero",
            UflError::NotAGenerator { .. } => "NotAGenerator",
            UflError::NotAntiHermitian { .. } => "NotAntiHermitian",
            UflError::FactorsNotCoprime { .. } => "FactorsNotCoprime",
            UflError::CharacteristicTooSmall { .. } => "CharacteristicTooSmall",
            UflError::InconsistentInvariants(_) => "InconsistentInvariants",
            UflError::NotInFixedField => "NotInFixedField",
            UflError::RankDeficient => "RankDeficient",
            UflError::PrecisionExhausted(_) => "PrecisionExhausted",
            UflError::NotStable => "NotStable",
            UflError::SearchTooLarge { .. } => "SearchTooLarge",
            UflError::ClassNotAdmissible(_) => "ClassNotAdmissible",
            UflError::Schema { .. } => "SchemaError",
            UflError::UnknownField { .. } => "UnknownFieldError",
            UflError::Io(_) => "IoError",
        }
    }

    /// JSON pointer of the offending input location, if any.
    pub fn path(&self) -> Option<&str> {
        match self {
            UflError::Schema { path, .. } | UflError::UnknownField { path, .. } => Some(path),
            _ => None,
        }
    }

    pub fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        UflError::Schema { path: path.into(), message: message.into() }
    }

    pub(crate) fn is_precision(&self) -> bool {
        matches!(
            self,
            UflError::IndeterminateValuation { .. } | UflError::PrecisionExhausted(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, UflError>;
