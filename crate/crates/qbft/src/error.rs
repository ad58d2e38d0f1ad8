//! Crate-wide error type.
//!
//! Errors fall into two broad classes that the command-line front end maps
//! onto distinct exit codes:
//!
//! * **usage/input errors** (exit code 2) — malformed arguments, unreadable
//!   or malformed truth-table files, arity mismatches, out-of-range
//!   parameters;
//! * **promise/representability errors** (exit code 3) — a requested bias or
//!   distance cannot be realized exactly on a table of size 2ⁿ, or the input
//!   pair violates the promise a tester requires.
//!
//! [`Error::exit_class`] returns the machine-parsable class label used as the
//! error-line prefix, and [`Error::exit_code`] the matching process status.

use thiserror::Error;

/// Convenience alias used by every fallible operation in this crate.
pub type Result<T> = std::result::Result<T, Error>;

/// All error conditions surfaced by the library and the CLI.
#[derive(Debug, Error)]
pub enum Error {
    /// Two functions that must share an arity do not.
    #[error("arity mismatch: one operand has n={left}, the other n={right}")]
    ArityMismatch {
        /// Arity of the first operand.
        left: u32,
        /// Arity of the second operand.
        right: u32,
    },

    /// A truth table's bit count disagrees with its declared arity.
    #[error("truth table for arity {n} needs {expected} bits, got {got}")]
    TableLength {
        /// Declared arity.
        n: u32,
        /// Required table length 2ⁿ.
        expected: usize,
        /// Length actually supplied.
        got: usize,
    },

    /// Arity outside the supported range for the requested operation.
    #[error("arity {n} outside supported range [1, {max}] for {what}")]
    ArityRange {
        /// Requested arity.
        n: u32,
        /// Maximum supported by the operation.
        max: u32,
        /// Operation that rejected the arity.
        what: &'static str,
    },

    /// A Hamming distance outside `[0, 2ⁿ]`.
    #[error("distance {d} outside [0, {max}]")]
    DistanceRange {
        /// Requested distance.
        d: u64,
        /// Table size 2ⁿ.
        max: u64,
    },

    /// A bias magnitude that no table of the given arity realizes exactly.
    ///
    /// A function on 2ⁿ points has bias `k/2ⁿ⁻¹ − 1` for an integer weight
    /// `k`, so the reachable magnitudes form the grid `j/2ⁿ⁻¹`. The two
    /// nearest grid values bracket the request.
    #[error(
        "bias {c} is not representable at arity {n}: nearest representable \
         values are {below} and {above}"
    )]
    UnrepresentableBias {
        /// Requested bias magnitude.
        c: f64,
        /// Arity of the would-be function.
        n: u32,
        /// Largest representable value ≤ `c`.
        below: f64,
        /// Smallest representable value ≥ `c`.
        above: f64,
    },

    /// A distance fraction ε that is not an exact multiple of 1/2ⁿ.
    #[error(
        "epsilon {eps} is not representable at arity {n}: nearest \
         representable values are {below} and {above}"
    )]
    UnrepresentableEpsilon {
        /// Requested fraction.
        eps: f64,
        /// Arity of the would-be instance.
        n: u32,
        /// Largest representable value ≤ `eps`.
        below: f64,
        /// Smallest representable value ≥ `eps`.
        above: f64,
    },

    /// ε outside the interval an operation supports.
    #[error("epsilon {eps} outside {range} for {what}")]
    EpsilonRange {
        /// Offending value.
        eps: f64,
        /// Human-readable interval, e.g. `"(0, 1/2]"`.
        range: &'static str,
        /// Operation that rejected it.
        what: &'static str,
    },

    /// Oracle mode was requested without the true quantity it amplifies on.
    #[error("oracle mode requires the true {0}")]
    MissingTrueValue(&'static str),

    /// An input pair violates the promise a tester requires.
    #[error("promise violated: {0}")]
    PromiseViolation(String),

    /// Malformed truth-table text (see the two-line file format).
    #[error("malformed truth table: {0}")]
    TruthTableFormat(String),

    /// A builtin function name that does not parse.
    #[error("unknown builtin function '{0}' (try const0, const1, parity, and, majority, with an optional arity suffix)")]
    UnknownBuiltin(String),

    /// A generator spec that does not parse.
    #[error("malformed generator spec '{spec}': {reason}")]
    GeneratorSpec {
        /// The spec as given.
        spec: String,
        /// What went wrong.
        reason: String,
    },

    /// An ε argument that is neither a decimal nor a `p/q` fraction.
    #[error("malformed epsilon '{0}': expected a decimal or a fraction p/q")]
    EpsilonParse(String),

    /// Slope fitting was asked to work on unusable data.
    #[error("cannot fit slope: {0}")]
    SlopeFit(&'static str),

    /// Two experiment cells derived the same RNG stream seed.
    #[error(
        "seed reuse detected: streams {first} and {second} derived the same seed from base {base}"
    )]
    SeedReuse {
        /// Base seed of the experiment.
        base: u64,
        /// First stream index involved.
        first: u64,
        /// Second stream index involved.
        second: u64,
    },

    /// An experiment configuration that cannot be run as given.
    #[error("invalid experiment configuration: {0}")]
    ExperimentConfig(String),

    /// Underlying I/O failure (file input/output in the CLI).
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Machine-parsable class label for single-line CLI error reporting.
    pub fn exit_class(&self) -> &'static str {
        match self {
            Error::UnrepresentableBias { .. } | Error::UnrepresentableEpsilon { .. } => {
                "representability"
            }
            Error::PromiseViolation(_) => "promise",
            Error::EpsilonRange { .. }
            | Error::EpsilonParse(_)
            | Error::MissingTrueValue(_)
            | Error::GeneratorSpec { .. }
            | Error::ExperimentConfig(_) => "usage",
            _ => "input",
        }
    }

    /// Process exit status the CLI uses for this error.
    ///
    /// 2 for usage/input problems, 3 for promise/representability problems
    /// (0 is reserved for completed runs, whatever the verdict).
    pub fn exit_code(&self) -> i32 {
        match self.exit_class() {
            "representability" | "promise" => 3,
            _ => 2,
        }
    }
}
