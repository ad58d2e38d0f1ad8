//! Reproducible experiment harness: sweeps ε, generates promise-satisfying
//! instances, runs the quantum testers (exact probabilities) and classical
//! testers (Monte Carlo), and reports query-complexity scaling.
//!
//! # Report layout
//!
//! One [`ReportRow`] per (ε, promise branch, algorithm). Quantum rows carry
//! *exact* success probabilities read from the simulated amplitudes — no
//! trials, no standard error. Classical rows carry success frequencies over
//! `trials` Monte Carlo runs plus a binomial standard error. Deterministic
//! rows (the correlation scan) carry exact worst-case query counts on
//! adversarially ordered instances.
//!
//! Per algorithm, the report fits an ordinary-least-squares line to
//! `log(queries)` versus `log(ε)` over the property-holding branch (whose
//! query cost is deterministic for every tester here). The expected slopes
//! are the headline separations: identity −½ quantum vs −1 classical,
//! balancedness −1 quantum vs −2 classical, exact correlation 0 (a constant
//! 6 queries) vs the Θ(2ⁿ) deterministic scan.
//!
//! # Determinism
//!
//! A run is a pure function of its [`ExperimentConfig`]. Every random choice
//! draws from a ChaCha stream whose seed is derived from `(base_seed,
//! stream-id)` by a SplitMix64 finalizer, with one reserved stream per
//! instance generator and per Monte Carlo trial; derived seeds are checked
//! for collisions. Trials run in parallel and are reduced in index order, so
//! serialized reports are byte-identical across runs and thread counts.
//! Wall-clock timings are kept in memory but excluded from serialization for
//! exactly that reason.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::amplify::{GoodStates, Mode};
use crate::boolfn::{
    check_bias_representable, gen_at_distance, gen_with_bias, BooleanFunction, Sign,
};
use crate::ctesters::{
    classical_balance, classical_identity, deterministic_correlation, ClassicalConfig,
};
use crate::error::{Error, Result};
use crate::qtesters::{
    balance_circuit, correlation_circuit, identity_circuit, Decision, OracleHandle,
    CORRELATION_EPSILON_MAX,
};

/// Which tester family an experiment sweeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Problem {
    /// Identity testing: quantum amplification vs. random probing.
    Identity,
    /// Exact correlation: the 6-query quantum tester vs. the Θ(2ⁿ)
    /// deterministic scan.
    Correlation,
    /// Balancedness: quantum bias amplification vs. bias estimation.
    Balance,
    /// The constant-vs-balanced promise (exact correlation at ε = 0):
    /// constant quantum cost against the linear deterministic scan.
    Dj,
}

impl FromStr for Problem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identity" => Ok(Problem::Identity),
            "correlation" => Ok(Problem::Correlation),
            "balance" => Ok(Problem::Balance),
            "dj" => Ok(Problem::Dj),
            other => Err(Error::ExperimentConfig(format!(
                "unknown problem '{other}' (expected identity|correlation|balance|dj)"
            ))),
        }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Problem::Identity => "identity",
            Problem::Correlation => "correlation",
            Problem::Balance => "balance",
            Problem::Dj => "dj",
        })
    }
}

/// A full experiment specification; the report is a pure function of this.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    /// Tester family to sweep.
    pub problem: Problem,
    /// Arity of every generated instance (1 ≤ n ≤ 16).
    pub n: u32,
    /// The ε grid. Ignored (a single ε = 0 cell) for [`Problem::Dj`].
    pub epsilons: Vec<f64>,
    /// Monte Carlo trials per classical cell; quantum cells are exact.
    pub trials: u64,
    /// Base seed all per-cell streams are derived from.
    pub base_seed: u64,
    /// Iteration-planning mode for the quantum testers.
    pub mode: Mode,
}

impl ExperimentConfig {
    /// Validates ranges and the representability of every ε at this `n`
    /// before anything runs, so a sweep cannot die halfway through.
    ///
    /// # Errors
    ///
    /// [`Error::ExperimentConfig`] on empty grids or bad `n`/`trials`;
    /// representability errors carry the nearest valid neighbours.
    pub fn validate(&self) -> Result<()> {
        if self.n < 1 || self.n > 16 {
            return Err(Error::ExperimentConfig(format!(
                "n must be in [1, 16], got {}",
                self.n
            )));
        }
        if self.trials == 0 || self.trials >= u64::from(u32::MAX) {
            return Err(Error::ExperimentConfig(format!(
                "trials must be in [1, 2³²−2], got {}",
                self.trials
            )));
        }
        if self.problem != Problem::Dj && self.epsilons.is_empty() {
            return Err(Error::ExperimentConfig("epsilon grid is empty".into()));
        }
        let len = 1u64 << self.n;
        for &eps in &self.epsilons {
            match self.problem {
                // Far instances sit at Hamming distance exactly ε·N.
                Problem::Identity => {
                    let d = eps * len as f64;
                    if !(eps > 0.0 && eps < 1.0) || d.fract() != 0.0 {
                        return Err(Error::UnrepresentableEpsilon {
                            eps,
                            n: self.n,
                            below: d.floor().max(1.0) / len as f64,
                            above: d.ceil() / len as f64,
                        });
                    }
                }
                // ε-correlated instances need (1−ε)N/2 integral.
                Problem::Correlation => {
                    if !(0.0..=CORRELATION_EPSILON_MAX).contains(&eps) {
                        return Err(Error::EpsilonRange {
                            eps,
                            range: "[0, √3/2]",
                            what: "correlation sweeps",
                        });
                    }
                    let dd = (1.0 - eps) * (len / 2) as f64;
                    if dd.fract() != 0.0 {
                        return Err(Error::UnrepresentableEpsilon {
                            eps,
                            n: self.n,
                            below: (1.0 - 2.0 * dd.ceil() / len as f64).max(0.0),
                            above: 1.0 - 2.0 * dd.floor() / len as f64,
                        });
                    }
                }
                // Biased instances need bias exactly ε: ε·2ⁿ⁻¹ integral.
                Problem::Balance => {
                    if !(eps > 0.0 && eps <= 0.5) {
                        return Err(Error::EpsilonRange {
                            eps,
                            range: "(0, 1/2]",
                            what: "balancedness sweeps",
                        });
                    }
                    check_bias_representable(self.n, eps)?;
                }
                Problem::Dj => {}
            }
        }
        Ok(())
    }
}

/// Derives the seed of an independent RNG stream from `(base, stream)` by
/// the SplitMix64 finalizer — the standard splittable-RNG construction.
pub fn derive_stream_seed(base: u64, stream: u64) -> u64 {
    let mut z = base.wrapping_add((stream.wrapping_add(1)).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Registers a derived seed, failing loudly on a collision (two streams
/// mapping to the same ChaCha seed would silently correlate cells).
fn register_seed(seen: &mut HashMap<u64, u64>, base: u64, stream: u64) -> Result<u64> {
    let seed = derive_stream_seed(base, stream);
    if let Some(&first) = seen.get(&seed) {
        return Err(Error::SeedReuse {
            base,
            first,
            second: stream,
        });
    }
    seen.insert(seed, stream);
    Ok(seed)
}

/// One report cell: a (ε, branch, algorithm) triple with its success measure
/// and query cost.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    /// Problem the row belongs to (echoed for self-contained CSV).
    pub problem: Problem,
    /// Instance arity.
    pub n: u32,
    /// Planning mode of the quantum rows in this report.
    pub mode: Mode,
    /// `quantum`, `classical`, or `deterministic`.
    pub algorithm: String,
    /// Promise branch of the instance (`identical`/`far`, `balanced`/
    /// `biased`, `corr_one`/`corr_eps`).
    pub branch: String,
    /// The ε this cell ran at.
    pub epsilon: f64,
    /// Exact probability (quantum/deterministic) or Monte Carlo frequency
    /// (classical) of the correct decision.
    pub success_probability: f64,
    /// Binomial standard error — only for frequency rows. Kept as an
    /// explicit null/empty field so CSV rows stay rectangular.
    pub stderr: Option<f64>,
    /// Trial count — only for frequency rows.
    pub trials: Option<u64>,
    /// Mean queries per run (exact for quantum and deterministic rows).
    pub mean_queries: f64,
    /// The planned iteration count m (quantum) or sample budget r/T
    /// (classical); absent for the deterministic scan.
    pub m_or_t: Option<u64>,
    /// Wall-clock seconds spent producing this row. Deliberately not
    /// serialized: reports must be byte-identical across runs.
    #[serde(skip)]
    pub elapsed: f64,
}

/// The outcome of [`run_experiment`]: config echo, rows, and fitted slopes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    /// The exact configuration that produced this report.
    pub config: ExperimentConfig,
    /// One row per (ε, branch, algorithm).
    pub rows: Vec<ReportRow>,
    /// Fitted log-log slope of queries vs ε per algorithm, over the
    /// property-holding branch. Present when the grid has ≥ 3 distinct ε
    /// (never for the deterministic scan, whose cost scales in N, not ε).
    pub slopes: BTreeMap<String, f64>,
}

impl ExperimentReport {
    /// Renders the rows as CSV (header + one line per row), byte-identical
    /// for identical configs.
    ///
    /// # Errors
    ///
    /// I/O errors from the in-memory writer (practically unreachable).
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in &self.rows {
            w.serialize(row)
                .map_err(|e| Error::ExperimentConfig(format!("csv: {e}")))?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| Error::ExperimentConfig(format!("csv: {e}")))?;
        String::from_utf8(bytes).map_err(|e| Error::ExperimentConfig(format!("csv: {e}")))
    }

    /// Renders the full report (config echo, rows, slopes) as pretty JSON.
    ///
    /// # Errors
    ///
    /// Serialization failures (practically unreachable).
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self)
            .map_err(|e| Error::ExperimentConfig(format!("json: {e}")))
    }

    /// A human-oriented text rendering: aligned rows plus the slope table.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "problem={} n={} mode={} trials={} base_seed={}\n",
            self.config.problem,
            self.config.n,
            self.config.mode,
            self.config.trials,
            self.config.base_seed
        ));
        out.push_str(&format!(
            "{:<14}{:<12}{:>10}{:>10}{:>9}{:>12}{:>10}\n",
            "algorithm", "branch", "epsilon", "success", "stderr", "queries", "m_or_T"
        ));
        for r in &self.rows {
            let m = r.m_or_t.map_or(String::new(), |v| v.to_string());
            let err = r.stderr.map_or(String::new(), |e| format!("{e:.4}"));
            out.push_str(&format!(
                "{:<14}{:<12}{:>10.6}{:>10.6}{:>9}{:>12.1}{:>10}\n",
                r.algorithm, r.branch, r.epsilon, r.success_probability, err, r.mean_queries, m
            ));
        }
        for (alg, slope) in &self.slopes {
            out.push_str(&format!("slope[{alg}] = {slope:.4}\n"));
        }
        out
    }
}

/// Ordinary least-squares slope of `log(queries)` against `log(ε)`.
///
/// # Errors
///
/// [`Error::SlopeFit`] when fewer than 3 points, any coordinate is not
/// strictly positive, or all ε coincide.
pub fn fit_slope(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 3 {
        return Err(Error::SlopeFit("slope fit needs at least 3 points"));
    }
    if points.iter().any(|&(x, y)| x <= 0.0 || y <= 0.0) {
        return Err(Error::SlopeFit(
            "slope fit needs strictly positive coordinates",
        ));
    }
    let first = points[0].0;
    if points.iter().all(|&(x, _)| x == first) {
        return Err(Error::SlopeFit(
            "slope fit is degenerate: all epsilons equal",
        ));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let inv = 1.0 / logs.len() as f64;
    let x_mean = logs.iter().map(|p| p.0).sum::<f64>() * inv;
    let y_mean = logs.iter().map(|p| p.1).sum::<f64>() * inv;
    let sxx: f64 = logs.iter().map(|p| (p.0 - x_mean) * (p.0 - x_mean)).sum();
    if sxx == 0.0 {
        return Err(Error::SlopeFit(
            "slope fit is degenerate: all epsilons equal",
        ));
    }
    let sxy: f64 = logs.iter().map(|p| (p.0 - x_mean) * (p.1 - y_mean)).sum();
    Ok(sxy / sxx)
}

/// Stream-id layout: each (row-cell, purpose) pair gets a disjoint id.
fn stream_id(cell: u64, trial_or_tag: u64) -> u64 {
    (cell << 32) | trial_or_tag
}

/// Tag reserved for a cell's instance-generation stream (trials use
/// 0..trials, which stays far below it).
const INSTANCE_TAG: u64 = 0xFFFF_FFFF;

struct Cells<'a> {
    config: &'a ExperimentConfig,
    seen: HashMap<u64, u64>,
    next_cell: u64,
    rows: Vec<ReportRow>,
}

impl<'a> Cells<'a> {
    fn new(config: &'a ExperimentConfig) -> Self {
        Cells {
            config,
            seen: HashMap::new(),
            next_cell: 0,
            rows: Vec::new(),
        }
    }

    fn instance_rng(&mut self) -> Result<ChaCha8Rng> {
        let seed = register_seed(
            &mut self.seen,
            self.config.base_seed,
            stream_id(self.next_cell, INSTANCE_TAG),
        )?;
        Ok(ChaCha8Rng::seed_from_u64(seed))
    }

    fn trial_seeds(&mut self) -> Result<Vec<u64>> {
        (0..self.config.trials)
            .map(|t| {
                register_seed(
                    &mut self.seen,
                    self.config.base_seed,
                    stream_id(self.next_cell, t),
                )
            })
            .collect()
    }

    #[allow(clippy::too_many_arguments)] // private row builder; the args are the row
    fn push_exact(
        &mut self,
        algorithm: &str,
        branch: &str,
        epsilon: f64,
        success: f64,
        queries: f64,
        m_or_t: Option<u64>,
        elapsed: f64,
    ) {
        self.rows.push(ReportRow {
            problem: self.config.problem,
            n: self.config.n,
            mode: self.config.mode,
            algorithm: algorithm.to_string(),
            branch: branch.to_string(),
            epsilon,
            success_probability: success,
            stderr: None,
            trials: None,
            mean_queries: queries,
            m_or_t,
            elapsed,
        });
        self.next_cell += 1;
    }

    /// Runs `trials` Monte Carlo runs in parallel (index-ordered reduction)
    /// and records the correct-decision frequency with its standard error.
    fn push_monte_carlo(
        &mut self,
        algorithm: &str,
        branch: &str,
        epsilon: f64,
        m_or_t: u64,
        run: impl Fn(u64) -> Result<(Decision, u64)> + Sync,
        correct: Decision,
    ) -> Result<()> {
        let started = Instant::now();
        let seeds = self.trial_seeds()?;
        let outcomes: Vec<(Decision, u64)> = seeds
            .par_iter()
            .map(|&seed| run(seed))
            .collect::<Result<_>>()?;
        let trials = outcomes.len() as f64;
        let hits = outcomes.iter().filter(|(d, _)| *d == correct).count() as f64;
        let queries: u64 = outcomes.iter().map(|(_, q)| q).sum();
        let p = hits / trials;
        self.rows.push(ReportRow {
            problem: self.config.problem,
            n: self.config.n,
            mode: self.config.mode,
            algorithm: algorithm.to_string(),
            branch: branch.to_string(),
            epsilon,
            success_probability: p,
            stderr: Some((p * (1.0 - p) / trials).sqrt()),
            trials: Some(outcomes.len() as u64),
            mean_queries: queries as f64 / trials,
            m_or_t: Some(m_or_t),
            elapsed: started.elapsed().as_secs_f64(),
        });
        self.next_cell += 1;
        Ok(())
    }
}

/// Checks a generated instance against the promise it is supposed to
/// satisfy. Generators are tested in their own right; this guards the
/// report's claims against drift between the two.
fn assert_promise(ok: bool, what: &str) {
    assert!(ok, "generated instance violates its promise: {what}");
}

fn run_identity(cells: &mut Cells<'_>) -> Result<()> {
    let config = cells.config;
    let len = 1u64 << config.n;
    for &eps in &config.epsilons {
        let mut rng = cells.instance_rng()?;
        let f = BooleanFunction::random(config.n, &mut rng)?;
        let far = gen_at_distance(&f, (eps * len as f64) as u64, &mut rng)?;
        assert_promise(f.dist(&far)? == eps, "Dist(f,far) = ε");

        // Quantum rows: exact decision probabilities from the amplitudes.
        for (g, branch, good_is_correct) in [(&f, "identical", false), (&far, "far", true)] {
            let started = Instant::now();
            let circuit = identity_circuit(
                &OracleHandle::new(f.clone()),
                &OracleHandle::new(g.clone()),
                eps,
                config.mode,
            )?;
            let p_good = circuit.state().good_probability(GoodStates::Nonzero);
            let success = if good_is_correct {
                p_good
            } else {
                1.0 - p_good
            };
            let m = circuit.plan().iterations;
            cells.push_exact(
                "quantum",
                branch,
                eps,
                success,
                circuit.quantum_queries() as f64,
                Some(u64::from(m)),
                started.elapsed().as_secs_f64(),
            );
        }

        // Classical rows: Monte Carlo over derived per-trial seeds.
        let r = ClassicalConfig::new(eps)?.r_identity;
        for (g, branch, correct) in [
            (f.clone(), "identical", Decision::Identical),
            (far.clone(), "far", Decision::EpsFar),
        ] {
            let f = f.clone();
            cells.push_monte_carlo(
                "classical",
                branch,
                eps,
                r,
                move |seed| {
                    let v = classical_identity(
                        &OracleHandle::new(f.clone()),
                        &OracleHandle::new(g.clone()),
                        eps,
                        seed,
                    )?;
                    Ok((v.decision, v.classical_queries))
                },
                correct,
            )?;
        }
    }
    Ok(())
}

fn run_balance(cells: &mut Cells<'_>) -> Result<()> {
    let config = cells.config;
    for &eps in &config.epsilons {
        let mut rng = cells.instance_rng()?;
        let balanced = gen_with_bias(config.n, 0.0, Sign::Positive, &mut rng)?;
        let biased = gen_with_bias(config.n, eps, Sign::Positive, &mut rng)?;
        assert_promise(balanced.bias() == 0.0, "C(balanced) = 0");
        assert_promise(biased.bias() == eps, "C(biased) = ε");

        for (inst, branch, good_is_correct) in
            [(&balanced, "balanced", false), (&biased, "biased", true)]
        {
            let started = Instant::now();
            let circuit = balance_circuit(&OracleHandle::new((*inst).clone()), eps, config.mode)?;
            // Good state is z = 0 here; measuring it means "biased".
            let p_zero = circuit.state().good_probability(GoodStates::Zero);
            let success = if good_is_correct {
                p_zero
            } else {
                1.0 - p_zero
            };
            cells.push_exact(
                "quantum",
                branch,
                eps,
                success,
                circuit.quantum_queries() as f64,
                Some(u64::from(circuit.plan().iterations)),
                started.elapsed().as_secs_f64(),
            );
        }

        let t = ClassicalConfig::new(eps)?.t_balance;
        for (inst, branch, correct) in [
            (balanced.clone(), "balanced", Decision::Balanced),
            (biased.clone(), "biased", Decision::EpsFarBalanced),
        ] {
            cells.push_monte_carlo(
                "classical",
                branch,
                eps,
                t,
                move |seed| {
                    let v = classical_balance(&OracleHandle::new(inst.clone()), eps, seed)?;
                    Ok((v.decision, v.classical_queries))
                },
                correct,
            )?;
        }
    }
    Ok(())
}

/// The adversarial orderings realizing the deterministic worst cases: an
/// all-agree pair for the `|C| = 1` branch and a disagreements-first pair
/// for the `|C| = ε` branch.
fn adversarial_pair(n: u32, eps: f64) -> Result<(BooleanFunction, BooleanFunction)> {
    let len = 1usize << n;
    let f = BooleanFunction::constant(n, false)?;
    let d_total = ((1.0 - eps) * (len / 2) as f64) as usize;
    let g = BooleanFunction::from_fn(n, |x| x < d_total)?;
    Ok((f, g))
}

fn run_correlation_at(cells: &mut Cells<'_>, eps: f64) -> Result<()> {
    let config = cells.config;
    let len = 1u64 << config.n;
    let mut rng = cells.instance_rng()?;
    let f = BooleanFunction::random(config.n, &mut rng)?;
    let d_eps = ((1.0 - eps) * (len / 2) as f64) as u64;
    let g_eps = gen_at_distance(&f, d_eps, &mut rng)?;
    assert_promise(f.correlation(&g_eps)? == eps, "C(f,g) = ε");

    for (g, branch, zero_is_correct) in [(&f, "corr_one", true), (&g_eps, "corr_eps", false)] {
        let started = Instant::now();
        let circuit = correlation_circuit(
            &OracleHandle::new(f.clone()),
            &OracleHandle::new((*g).clone()),
            eps,
        )?;
        let p_zero = circuit.state().probability(0);
        let success = if zero_is_correct {
            p_zero
        } else {
            1.0 - p_zero
        };
        cells.push_exact(
            "quantum",
            branch,
            eps,
            success,
            circuit.quantum_queries() as f64,
            Some(1),
            started.elapsed().as_secs_f64(),
        );
    }

    // Deterministic rows use the adversarial orderings so the reported
    // counts are the true worst cases (1±ε)N+2, not a lucky average.
    let (af, ag) = adversarial_pair(config.n, eps)?;
    for (of, og, branch, correct) in [
        (&af, &af, "corr_one", Decision::CorrOne),
        (&af, &ag, "corr_eps", Decision::CorrEps),
    ] {
        let started = Instant::now();
        let v = deterministic_correlation(
            &OracleHandle::new(of.clone()),
            &OracleHandle::new(og.clone()),
            eps,
        )?;
        assert_promise(
            v.decision == correct,
            "deterministic scan agrees with ground truth",
        );
        cells.push_exact(
            "deterministic",
            branch,
            eps,
            1.0,
            v.classical_queries as f64,
            None,
            started.elapsed().as_secs_f64(),
        );
    }
    Ok(())
}

fn run_correlation(cells: &mut Cells<'_>) -> Result<()> {
    let config = cells.config;
    for &eps in &config.epsilons {
        run_correlation_at(cells, eps)?;
    }
    Ok(())
}

fn run_dj(cells: &mut Cells<'_>) -> Result<()> {
    run_correlation_at(cells, 0.0)
}

/// Runs the configured sweep and assembles the report.
///
/// # Errors
///
/// Config validation (including ε representability with suggested
/// neighbours), seed-collision detection, and any tester error.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let mut cells = Cells::new(config);
    match config.problem {
        Problem::Identity => run_identity(&mut cells)?,
        Problem::Balance => run_balance(&mut cells)?,
        Problem::Correlation => run_correlation(&mut cells)?,
        Problem::Dj => run_dj(&mut cells)?,
    }
    let rows = cells.rows;

    // Slopes over the property-holding branch, whose per-run query cost is
    // deterministic for every algorithm (no early halting).
    let holding = match config.problem {
        Problem::Identity => "identical",
        Problem::Balance => "balanced",
        Problem::Correlation | Problem::Dj => "corr_one",
    };
    let mut slopes = BTreeMap::new();
    for algorithm in ["quantum", "classical"] {
        let points: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| r.algorithm == algorithm && r.branch == holding)
            .map(|r| (r.epsilon, r.mean_queries))
            .collect();
        if points.len() >= 3 && points.iter().all(|&(x, y)| x > 0.0 && y > 0.0) {
            slopes.insert(algorithm.to_string(), fit_slope(&points)?);
        }
    }
    Ok(ExperimentReport {
        config: config.clone(),
        rows,
        slopes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_config(problem: Problem) -> ExperimentConfig {
        ExperimentConfig {
            problem,
            n: 10,
            epsilons: vec![0.125, 0.0625, 0.03125],
            trials: 100,
            base_seed: 11,
            mode: Mode::Bound,
        }
    }

    #[test]
    fn derived_streams_differ_and_collisions_are_caught() {
        let mut seen = HashMap::new();
        let a = register_seed(&mut seen, 7, stream_id(0, 0)).unwrap();
        let b = register_seed(&mut seen, 7, stream_id(0, 1)).unwrap();
        let c = register_seed(&mut seen, 7, stream_id(1, 0)).unwrap();
        assert!(a != b && b != c && a != c);
        assert!(matches!(
            register_seed(&mut seen, 7, stream_id(0, 0)),
            Err(Error::SeedReuse { .. })
        ));
        // Same stream, different base: different seed.
        assert_ne!(derive_stream_seed(7, 0), derive_stream_seed(8, 0));
    }

    #[test]
    fn slope_of_exact_power_laws() {
        let inverse: Vec<(f64, f64)> = [0.125, 0.0625, 0.03125, 0.015625]
            .iter()
            .map(|&e| (e, 3.0 / e))
            .collect();
        assert!((fit_slope(&inverse).unwrap() + 1.0).abs() < 1e-9);

        let constant: Vec<(f64, f64)> =
            [0.125, 0.0625, 0.03125].iter().map(|&e| (e, 6.0)).collect();
        assert!(fit_slope(&constant).unwrap().abs() < 1e-12);

        // Floor-quantized square-root law: slope lands near −1/2, inside
        // the band the floor effects allow.
        let floored: Vec<(f64, f64)> = [0.125, 0.0625, 0.03125, 0.015625, 0.0078125]
            .iter()
            .map(|&e: &f64| (e, (10.0 / e.sqrt()).floor()))
            .collect();
        let slope = fit_slope(&floored).unwrap();
        assert!((-0.6..=-0.4).contains(&slope), "slope={slope}");
        assert!((slope - -0.5025648080715168).abs() < 1e-12);
    }

    #[test]
    fn slope_fit_rejects_degenerate_input() {
        assert!(fit_slope(&[(0.1, 2.0), (0.2, 3.0)]).is_err());
        assert!(fit_slope(&[(0.1, 2.0), (0.2, 3.0), (0.3, -1.0)]).is_err());
        assert!(fit_slope(&[(0.1, 2.0), (0.1, 3.0), (0.1, 4.0)]).is_err());
    }

    #[test]
    fn identity_report_has_exact_quantum_rows_and_frequency_classical_rows() {
        let report = run_experiment(&base_config(Problem::Identity)).unwrap();
        assert_eq!(report.rows.len(), 3 * 2 * 2);
        for row in &report.rows {
            match row.algorithm.as_str() {
                "quantum" => {
                    assert!(row.stderr.is_none() && row.trials.is_none());
                    if row.branch == "identical" {
                        assert_eq!(row.success_probability, 1.0);
                    } else {
                        assert!(row.success_probability > 0.5);
                    }
                    let m = row.m_or_t.unwrap();
                    assert_eq!(row.mean_queries, (4 * m + 2) as f64);
                }
                "classical" => {
                    assert!(row.stderr.is_some() && row.trials == Some(100));
                    if row.branch == "identical" {
                        // One-sided: never rejected, always the full budget.
                        assert_eq!(row.success_probability, 1.0);
                        assert_eq!(row.mean_queries, (2 * row.m_or_t.unwrap()) as f64);
                    }
                }
                other => panic!("unexpected algorithm {other}"),
            }
        }
        assert!(report.slopes.contains_key("quantum"));
        assert!(report.slopes.contains_key("classical"));
        let classical = report.slopes["classical"];
        assert!((-1.1..=-0.9).contains(&classical), "classical={classical}");
    }

    #[test]
    fn balance_report_slopes_match_the_expected_orders() {
        let mut config = base_config(Problem::Balance);
        config.epsilons = vec![0.125, 0.0625, 0.03125, 0.015625];
        config.trials = 60;
        let report = run_experiment(&config).unwrap();
        let quantum = report.slopes["quantum"];
        let classical = report.slopes["classical"];
        assert!((-1.1..=-0.9).contains(&quantum), "quantum={quantum}");
        assert!((-2.1..=-1.9).contains(&classical), "classical={classical}");
    }

    #[test]
    fn dj_report_is_constant_cost_with_certain_success() {
        let mut config = base_config(Problem::Dj);
        config.epsilons.clear();
        let report = run_experiment(&config).unwrap();
        assert_eq!(report.rows.len(), 4);
        for row in &report.rows {
            assert!((row.success_probability - 1.0).abs() < 1e-10);
            match row.algorithm.as_str() {
                "quantum" => assert_eq!(row.mean_queries, 6.0),
                "deterministic" => {
                    // ε = 0: both branches cost N+2 on adversarial orderings.
                    assert_eq!(row.mean_queries, (1024 + 2) as f64);
                }
                other => panic!("unexpected algorithm {other}"),
            }
        }
        assert!(report.slopes.is_empty());
    }

    #[test]
    fn correlation_report_reproduces_worst_case_scan_counts() {
        let mut config = base_config(Problem::Correlation);
        config.n = 8;
        config.epsilons = vec![0.25];
        let report = run_experiment(&config).unwrap();
        let scan: Vec<&ReportRow> = report
            .rows
            .iter()
            .filter(|r| r.algorithm == "deterministic")
            .collect();
        assert_eq!(scan.len(), 2);
        for row in scan {
            let expected = match row.branch.as_str() {
                "corr_one" => (1.0 + 0.25) * 256.0 + 2.0,
                _ => (1.0 - 0.25) * 256.0 + 2.0,
            };
            assert_eq!(row.mean_queries, expected);
        }
    }

    #[test]
    fn reports_are_byte_identical_across_runs() {
        let config = base_config(Problem::Identity);
        let a = run_experiment(&config).unwrap();
        let b = run_experiment(&config).unwrap();
        assert_eq!(a.to_csv().unwrap(), b.to_csv().unwrap());
        assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
        // ...and a different base seed changes the classical frequencies'
        // sampling, not the schema.
        let mut other = config.clone();
        other.base_seed = 12;
        let c = run_experiment(&other).unwrap();
        assert_ne!(a.to_json().unwrap(), c.to_json().unwrap());
    }

    #[test]
    fn json_round_trips_the_full_report() {
        let mut config = base_config(Problem::Balance);
        config.trials = 20;
        config.epsilons = vec![0.125, 0.25, 0.5];
        let report = run_experiment(&config).unwrap();
        let back: ExperimentReport = serde_json::from_str(&report.to_json().unwrap()).unwrap();
        // Timings are skipped in serialization by design.
        let mut expected = report;
        for row in &mut expected.rows {
            row.elapsed = 0.0;
        }
        assert_eq!(back, expected);
    }

    #[test]
    fn unrepresentable_epsilons_are_rejected_with_suggestions() {
        let mut config = base_config(Problem::Identity);
        config.epsilons = vec![0.1];
        config.n = 8;
        match run_experiment(&config).unwrap_err() {
            Error::UnrepresentableEpsilon { below, above, .. } => {
                assert_eq!(below, 25.0 / 256.0);
                assert_eq!(above, 26.0 / 256.0);
            }
            other => panic!("unexpected error {other:?}"),
        }

        let mut config = base_config(Problem::Balance);
        config.epsilons = vec![0.3];
        config.n = 4;
        assert!(matches!(
            run_experiment(&config).unwrap_err(),
            Error::UnrepresentableBias { .. }
        ));

        let mut config = base_config(Problem::Correlation);
        config.epsilons = vec![0.5];
        config.n = 10;
        assert!(run_experiment(&config).is_ok());
        config.epsilons = vec![0.1];
        config.n = 4;
        assert!(matches!(
            run_experiment(&config).unwrap_err(),
            Error::UnrepresentableEpsilon { .. }
        ));
    }

    #[test]
    fn config_validation_guards_ranges() {
        let mut config = base_config(Problem::Identity);
        config.n = 17;
        assert!(config.validate().is_err());
        let mut config = base_config(Problem::Identity);
        config.trials = 0;
        assert!(config.validate().is_err());
        let mut config = base_config(Problem::Identity);
        config.epsilons.clear();
        assert!(config.validate().is_err());
    }
}
