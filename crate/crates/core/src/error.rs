use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid gas model: {0}")]
    InvalidGas(String),

    #[error("invalid state{}: density {rho}, internal energy density {internal}", node_suffix(.node))]
    InvalidState {
        node: Option<usize>,
        rho: f64,
        internal: f64,
    },

    #[error("invalid characteristic triple: r_plus {r_plus} must exceed r_minus {r_minus}")]
    InvalidCharacteristics { r_plus: f64, r_minus: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("node index {index} outside the allowed range {lo}..={hi}")]
    IndexOutOfRange { index: usize, lo: usize, hi: usize },

    #[error("solution blew up at step {step}, node {node}")]
    BlowUp { step: usize, node: usize },

    #[error("Courant number {courant:.4} exceeds 1 at step {step}")]
    CflViolation { step: usize, courant: f64 },

    #[error("supersonic boundary state at node {node} (Mach {mach:.3}); only subsonic boundaries are supported")]
    UnsupportedRegime { node: usize, mach: f64 },

    #[error("simple-wave solve failed at t = {t} s: characteristics cross (shock regime, s >= 1)")]
    ShockRegime { t: f64 },

    #[error("wide-tube correction {correction:.4} is outside the validity range (< 0.5)")]
    OutOfValidity { correction: f64 },

    #[error("signal evaluated at t = {t} s beyond its table end {end} s")]
    SignalRange { t: f64, end: f64 },

    #[error("misaligned window: {0}")]
    MisalignedWindow(String),

    #[error("reference series has zero norm")]
    UndefinedReference,

    #[error("length mismatch: {a} vs {b}")]
    LengthMismatch { a: usize, b: usize },

    #[error("line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("I/O error: {0}")]
    Io(String),
}

fn node_suffix(node: &Option<usize>) -> String {
    match node {
        Some(j) => format!(" at node {j}"),
        None => String::new(),
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// Attach a node index to a state error raised without one.
    pub fn at_node(self, j: usize) -> Self {
        match self {
            Error::InvalidState { node: None, rho, internal } => Error::InvalidState {
                node: Some(j),
                rho,
                internal,
            },
            other => other,
        }
    }

    /// Process exit status: 2 for bad input, 3 for a failed computation, 4 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidGas(_)
            | Error::InvalidGrid(_)
            | Error::InvalidParameter(_)
            | Error::MisalignedWindow(_)
            | Error::UndefinedReference
            | Error::LengthMismatch { .. }
            | Error::SignalRange { .. }
            | Error::Config { .. } => 2,
            Error::InvalidState { .. }
            | Error::InvalidCharacteristics { .. }
            | Error::IndexOutOfRange { .. }
            | Error::BlowUp { .. }
            | Error::CflViolation { .. }
            | Error::UnsupportedRegime { .. }
            | Error::ShockRegime { .. }
            | Error::OutOfValidity { .. } => 3,
            Error::Io(_) => 4,
        }
    }
}
