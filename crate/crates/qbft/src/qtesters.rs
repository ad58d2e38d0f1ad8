//! Quantum property testers built on amplitude amplification.
//!
//! Three testers share one circuit shape — prepare `A|0…0⟩`, apply the
//! amplification operator `Q` a planned number of times, measure, and decide
//! from whether the outcome is the all-zero index:
//!
//! * **Identity** ([`test_identity`]): given oracles for `f` and `g` promised
//!   either identical or ε-far in normalized Hamming distance, decide which.
//!   Good states are the nonzero indices; `m` iterations cost `4m+2` queries;
//!   measuring `z = 0` means identical. One-sided: identical pairs *always*
//!   measure zero.
//! * **Exact correlation** ([`test_correlation_exact`]): given the promise
//!   `|C(f,g)| ∈ {ε, 1}` with `ε ∈ [0, √3/2]`, decide which case holds with
//!   certainty using exactly 6 queries. A single `Q` with the matched phases
//!   [`correlation_phase`] drives the `|0…0⟩` amplitude exactly to zero in
//!   the `|C| = ε` case, while `|C| = 1` pins the state at `|0…0⟩` up to
//!   phase. At ε = 0 this solves the Deutsch–Jozsa promise (balanced versus
//!   constant `f⊕g`) with two evaluations of each function.
//! * **Balancedness** ([`test_balance`]): decide whether a single `f` is
//!   balanced or has bias `|W_f(0)| ≥ ε`. Good state is `z = 0` (the bias
//!   lives in the zero amplitude), preparation costs one query, so `m`
//!   iterations cost `2m+1`. One-sided: balanced functions *never* measure
//!   zero.
//!
//! # Plan modes
//!
//! [`Mode::Bound`] derives the iteration count from ε alone, the only thing
//! a black-box tester knows. [`Mode::Oracle`] reads the truth tables to plan
//! with the true good-state probability `a` (iterations `⌊π/4θ_a⌋`,
//! `sin²θ_a = a`), which is the regime the amplification success bound
//! `P ≥ max(a, 1−a)` speaks about; it exists for validating that bound, not
//! for testing unknown functions.
//!
//! Promise checking is deliberately *not* done here: a promise tester is
//! allowed arbitrary output on promise-violating inputs, and checking would
//! read the whole table. Front ends that hold explicit tables (e.g. the CLI)
//! validate promises before calling in.

use std::cell::Cell;
use std::f64::consts::PI;
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::amplify::{prepare_a, AmplificationPlan, GoodStates, Mode, Preparation, StateVector};
use crate::boolfn::BooleanFunction;
use crate::error::{Error, Result};

/// Largest ε for which the identity plan's success argument applies; larger
/// values still run but carry a plan warning.
pub const IDENTITY_EPSILON_GUARANTEE: f64 = 1.0 / 15.0;

/// Upper end of the admissible ε range for exact correlation testing (√3/2).
pub const CORRELATION_EPSILON_MAX: f64 = 0.8660254037844386;

/// A Boolean function wrapped with query counters.
///
/// Testers receive functions through handles so every oracle access is
/// tallied: quantum queries are charged by the phase-oracle application in
/// [`crate::amplify`], classical queries by [`OracleHandle::eval_classical`].
/// Counters use interior mutability so the handle can be shared immutably
/// across the circuit.
#[derive(Debug)]
pub struct OracleHandle {
    function: BooleanFunction,
    quantum: Cell<u64>,
    classical: Cell<u64>,
}

impl OracleHandle {
    /// Wraps a function with fresh (zero) counters.
    pub fn new(function: BooleanFunction) -> Self {
        OracleHandle {
            function,
            quantum: Cell::new(0),
            classical: Cell::new(0),
        }
    }

    /// The wrapped function. Reading it directly is free; only oracle-style
    /// access points charge the counters.
    pub fn function(&self) -> &BooleanFunction {
        &self.function
    }

    /// Quantum queries charged so far.
    pub fn quantum_queries(&self) -> u64 {
        self.quantum.get()
    }

    /// Classical queries charged so far.
    pub fn classical_queries(&self) -> u64 {
        self.classical.get()
    }

    pub(crate) fn charge_quantum(&self) {
        self.quantum.set(self.quantum.get() + 1);
    }

    /// Evaluates `f(x)` as a classical query (charges one).
    pub fn eval_classical(&self, x: usize) -> bool {
        self.classical.set(self.classical.get() + 1);
        self.function.eval(x)
    }
}

/// The outcome of a tester.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    /// Identity: `f = g`.
    Identical,
    /// Identity: `Dist(f,g) ≥ ε`.
    EpsFar,
    /// Correlation: `|C(f,g)| = 1`.
    CorrOne,
    /// Correlation: `|C(f,g)| = ε`.
    CorrEps,
    /// Balancedness: `W_f(0…0) = 0`.
    Balanced,
    /// Balancedness: `|W_f(0…0)| ≥ ε`.
    EpsFarBalanced,
    /// The input provably violates the tester's promise (only the
    /// deterministic correlation tester can detect this).
    PromiseViolation,
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Decision::Identical => "identical",
            Decision::EpsFar => "eps_far",
            Decision::CorrOne => "corr_one",
            Decision::CorrEps => "corr_eps",
            Decision::Balanced => "balanced",
            Decision::EpsFarBalanced => "eps_far_balanced",
            Decision::PromiseViolation => "promise_violation",
        })
    }
}

/// Everything a tester run reports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    /// The decision reached.
    pub decision: Decision,
    /// Measured basis index, when the tester measures a register.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub measured_z: Option<usize>,
    /// Exact pre-measurement distribution over basis indices, when the
    /// tester is a simulated quantum circuit.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub outcome_probabilities: Option<Vec<f64>>,
    /// Quantum queries charged across all oracle handles.
    pub quantum_queries: u64,
    /// Classical queries charged across all oracle handles.
    pub classical_queries: u64,
    /// The amplification plan executed, for quantum testers.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub plan: Option<AmplificationPlan>,
    /// The seed that drove the (single) measurement or sampling pass.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
}

impl Verdict {
    /// Probability of measuring the all-zero index, when a distribution was
    /// recorded.
    pub fn p_zero(&self) -> Option<f64> {
        self.outcome_probabilities.as_ref().map(|p| p[0])
    }
}

/// Validates `in_range(eps)`, written so NaN always fails.
fn check_epsilon(
    eps: f64,
    in_range: impl Fn(f64) -> bool,
    range: &'static str,
    what: &'static str,
) -> Result<()> {
    if !in_range(eps) {
        return Err(Error::EpsilonRange { eps, range, what });
    }
    Ok(())
}

/// Iterations `⌊π/4θ⌋` for good-probability lower bound `a` (`sin²θ = a`).
fn iterations_for(a: f64) -> u32 {
    if a <= 0.0 {
        // Nothing to amplify: the good component is empty, and any number of
        // iterations leaves it empty. Measure straight after preparation.
        return 0;
    }
    let theta = a.sqrt().min(1.0).asin();
    (PI / (4.0 * theta)).floor() as u32
}

/// Plans the identity tester.
///
/// Bound mode uses the worst-case good probability `4ε(1−ε)` of an ε-far
/// pair. Oracle mode needs the true distance `d` in `true_dist` and uses
/// `a = 1−(1−2d)²`. Phases are π. ε must lie in (0, 1); above
/// [`IDENTITY_EPSILON_GUARANTEE`] the plan carries a warning.
///
/// # Errors
///
/// [`Error::EpsilonRange`] outside (0, 1); [`Error::MissingTrueValue`] in
/// oracle mode without a distance.
pub fn plan_identity(
    epsilon: f64,
    mode: Mode,
    true_dist: Option<f64>,
) -> Result<AmplificationPlan> {
    check_epsilon(
        epsilon,
        |e| e > 0.0 && e < 1.0,
        "(0, 1)",
        "identity testing",
    )?;
    let a = match mode {
        Mode::Bound => 4.0 * epsilon * (1.0 - epsilon),
        Mode::Oracle => {
            let d = true_dist.ok_or(Error::MissingTrueValue(
                "identity planning in oracle mode needs the true distance",
            ))?;
            1.0 - (1.0 - 2.0 * d) * (1.0 - 2.0 * d)
        }
    };
    let warning = (epsilon > IDENTITY_EPSILON_GUARANTEE).then(|| {
        format!(
            "epsilon {epsilon} exceeds {IDENTITY_EPSILON_GUARANTEE:.6}; the 2/3 success guarantee is not established in this range"
        )
    });
    Ok(AmplificationPlan {
        epsilon,
        good: GoodStates::Nonzero,
        iterations: iterations_for(a),
        phase_s0: PI,
        phase_schi: PI,
        mode,
        warning,
    })
}

/// Plans the balancedness tester.
///
/// Bound mode uses `m = ⌊π/4arcsin(ε)⌋` (worst-case bias amplitude ε).
/// Oracle mode needs the true bias and uses `a = bias²`. Phases are π and
/// the good state is `z = 0`. ε must lie in (0, 1/2].
///
/// # Errors
///
/// [`Error::EpsilonRange`] outside (0, 1/2]; [`Error::MissingTrueValue`] in
/// oracle mode without a bias.
pub fn plan_balance(epsilon: f64, mode: Mode, true_bias: Option<f64>) -> Result<AmplificationPlan> {
    check_epsilon(
        epsilon,
        |e| e > 0.0 && e <= 0.5,
        "(0, 1/2]",
        "balancedness testing",
    )?;
    let iterations = match mode {
        Mode::Bound => {
            let theta = epsilon.asin();
            (PI / (4.0 * theta)).floor() as u32
        }
        Mode::Oracle => {
            let bias = true_bias.ok_or(Error::MissingTrueValue(
                "balance planning in oracle mode needs the true bias",
            ))?;
            iterations_for(bias * bias)
        }
    };
    Ok(AmplificationPlan {
        epsilon,
        good: GoodStates::Zero,
        iterations,
        phase_s0: PI,
        phase_schi: PI,
        mode,
        warning: None,
    })
}

/// The matched phase `ϕ = φ = 2·arcsin(1/(2√(1−ε²)))` that solves
/// `(1−ε²)(1−e^{iϕ})(e^{iφ}−1) = e^{iϕ}`, sending the `|0…0⟩` amplitude of
/// a `|C| = ε` instance exactly to zero after one amplification step.
///
/// Ranges from π/3 at ε = 0 to π at ε = √3/2.
///
/// # Errors
///
/// [`Error::EpsilonRange`] outside [0, √3/2].
pub fn correlation_phase(epsilon: f64) -> Result<f64> {
    check_epsilon(
        epsilon,
        |e| (0.0..=CORRELATION_EPSILON_MAX).contains(&e),
        "[0, sqrt(3)/2]",
        "exact correlation testing",
    )?;
    // At ε = √3/2 the argument is 1 up to one ulp; clamp for asin's domain.
    let arg = (1.0 / (2.0 * (1.0 - epsilon * epsilon).sqrt())).min(1.0);
    Ok(2.0 * arg.asin())
}

/// Plans the exact correlation tester: one iteration of `Q` with the matched
/// phases from [`correlation_phase`].
///
/// # Errors
///
/// [`Error::EpsilonRange`] outside [0, √3/2].
pub fn plan_correlation(epsilon: f64) -> Result<AmplificationPlan> {
    let phase = correlation_phase(epsilon)?;
    Ok(AmplificationPlan {
        epsilon,
        good: GoodStates::Nonzero,
        iterations: 1,
        phase_s0: phase,
        phase_schi: phase,
        mode: Mode::Bound,
        warning: None,
    })
}

/// A tester circuit run to completion, holding the exact pre-measurement
/// state. Splitting the circuit from the measurement lets front ends inspect
/// or dump the state without re-running (and re-charging) the oracles.
pub struct AmplifiedCircuit {
    plan: AmplificationPlan,
    state: StateVector,
    quantum_queries: u64,
    on_zero: Decision,
    on_nonzero: Decision,
}

impl AmplifiedCircuit {
    /// The plan that was executed.
    pub fn plan(&self) -> &AmplificationPlan {
        &self.plan
    }

    /// The exact state right before measurement.
    pub fn state(&self) -> &StateVector {
        &self.state
    }

    /// Quantum queries charged while running the circuit.
    pub fn quantum_queries(&self) -> u64 {
        self.quantum_queries
    }

    /// Measures once (seeded) and forms the verdict.
    pub fn conclude(&self, seed: u64) -> Verdict {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let z = self.state.sample(&mut rng);
        let decision = if z == 0 {
            self.on_zero
        } else {
            self.on_nonzero
        };
        Verdict {
            decision,
            measured_z: Some(z),
            outcome_probabilities: Some(self.state.measure_distribution()),
            quantum_queries: self.quantum_queries,
            classical_queries: 0,
            plan: Some(self.plan.clone()),
            seed: Some(seed),
        }
    }
}

fn run_amplified(
    prep: &Preparation<'_>,
    plan: AmplificationPlan,
    queries: impl Fn() -> u64,
    on_zero: Decision,
    on_nonzero: Decision,
) -> Result<AmplifiedCircuit> {
    let mut state = prepare_a(prep)?;
    for _ in 0..plan.iterations {
        state.apply_q(prep, &plan)?;
    }
    Ok(AmplifiedCircuit {
        plan,
        state,
        quantum_queries: queries(),
        on_zero,
        on_nonzero,
    })
}

/// Runs the identity-testing circuit (no measurement yet). Oracle mode reads
/// the true distance off the handles' tables without charging queries — it
/// is a validation mode, not a black-box tester.
///
/// # Errors
///
/// Epsilon or arity validation.
pub fn identity_circuit(
    of: &OracleHandle,
    og: &OracleHandle,
    epsilon: f64,
    mode: Mode,
) -> Result<AmplifiedCircuit> {
    let true_dist = match mode {
        Mode::Bound => None,
        Mode::Oracle => Some(of.function().dist(og.function())?),
    };
    let plan = plan_identity(epsilon, mode, true_dist)?;
    let before = of.quantum_queries() + og.quantum_queries();
    let prep = Preparation::pair(of, og)?;
    run_amplified(
        &prep,
        plan,
        || of.quantum_queries() + og.quantum_queries() - before,
        Decision::Identical,
        Decision::EpsFar,
    )
}

/// Identity tester: decides `Identical` versus `EpsFar` from one measurement
/// after bound- or oracle-planned amplification. Costs `4m+2` quantum
/// queries for `m` planned iterations. One-sided: identical inputs always
/// yield `Identical`.
///
/// # Errors
///
/// Epsilon or arity validation.
pub fn test_identity(
    of: &OracleHandle,
    og: &OracleHandle,
    epsilon: f64,
    mode: Mode,
    seed: u64,
) -> Result<Verdict> {
    Ok(identity_circuit(of, og, epsilon, mode)?.conclude(seed))
}

/// Runs the exact-correlation circuit (no measurement yet).
///
/// # Errors
///
/// Epsilon or arity validation.
pub fn correlation_circuit(
    of: &OracleHandle,
    og: &OracleHandle,
    epsilon: f64,
) -> Result<AmplifiedCircuit> {
    let plan = plan_correlation(epsilon)?;
    let before = of.quantum_queries() + og.quantum_queries();
    let prep = Preparation::pair(of, og)?;
    run_amplified(
        &prep,
        plan,
        || of.quantum_queries() + og.quantum_queries() - before,
        Decision::CorrOne,
        Decision::CorrEps,
    )
}

/// Exact correlation tester: under the promise `|C(f,g)| ∈ {ε, 1}`, decides
/// which case holds with certainty in exactly 6 quantum queries. The promise
/// is not checked (see the module docs); callers with explicit tables should
/// validate it first. Under the promise the seed cannot affect the decision —
/// it only selects which nonzero witness index gets reported in the `|C| = ε`
/// branch.
///
/// # Errors
///
/// Epsilon or arity validation.
pub fn test_correlation_exact(
    of: &OracleHandle,
    og: &OracleHandle,
    epsilon: f64,
    seed: u64,
) -> Result<Verdict> {
    Ok(correlation_circuit(of, og, epsilon)?.conclude(seed))
}

/// Runs the balancedness circuit (no measurement yet). Oracle mode reads the
/// true bias off the handle's table without charging queries.
///
/// # Errors
///
/// Epsilon or arity validation.
pub fn balance_circuit(of: &OracleHandle, epsilon: f64, mode: Mode) -> Result<AmplifiedCircuit> {
    let true_bias = match mode {
        Mode::Bound => None,
        Mode::Oracle => Some(of.function().bias()),
    };
    let plan = plan_balance(epsilon, mode, true_bias)?;
    let before = of.quantum_queries();
    let prep = Preparation::single(of)?;
    run_amplified(
        &prep,
        plan,
        || of.quantum_queries() - before,
        Decision::EpsFarBalanced,
        Decision::Balanced,
    )
}

/// Balancedness tester: decides `Balanced` versus `EpsFarBalanced` from one
/// measurement. Costs `2m+1` quantum queries for `m` planned iterations.
/// One-sided: balanced inputs always yield `Balanced`.
///
/// # Errors
///
/// Epsilon or arity validation.
pub fn test_balance(of: &OracleHandle, epsilon: f64, mode: Mode, seed: u64) -> Result<Verdict> {
    Ok(balance_circuit(of, epsilon, mode)?.conclude(seed))
}
