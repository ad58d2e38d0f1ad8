//! Truth-table representation of Boolean functions.
//!
//! A Boolean function `f: {0,1}ⁿ → {0,1}` is stored as a bit-packed truth
//! table of `N = 2ⁿ` bits. Throughout the crate one index convention is fixed
//! globally:
//!
//! > **bit `i` of the table is `f(x)` where `x₁…xₙ` is the n-bit big-endian
//! > encoding of `i` (`x₁` is the most significant bit).**
//!
//! The module provides
//!
//! * distance and correlation measures: Hamming distance, normalized distance
//!   `Dist(f,g) = Ham(f,g)/2ⁿ`, correlation `C(f,g) = (1/2ⁿ)Σ(−1)^{f(x)+g(x)}`
//!   and bias `C(f) = C(f, 0)`;
//! * the Walsh transform `W_f(ω) = (1/2ⁿ) Σ_x (−1)^{f(x)+ω·x}`, both as a
//!   quadratic-time direct summation ([`BooleanFunction::walsh_spectrum_naive`],
//!   the cross-check oracle) and as the `O(N log N)` fast Walsh–Hadamard
//!   butterfly ([`BooleanFunction::walsh_spectrum_fast`]);
//! * controlled instance generators: [`gen_at_distance`] (exact Hamming
//!   distance) and [`gen_with_bias`] (exact bias with chosen sign), used to
//!   build promise-satisfying test instances;
//! * named builtins and a two-line hexadecimal text format for file exchange.
//!
//! # Exactness
//!
//! Every spectral quantity here is a dyadic rational: spectra are computed as
//! exact integer character sums and divided by `2ⁿ` only at the end, and an
//! `f64` holds any such value exactly for `n ≤ 24`. Identities like
//! `C(f,g) = 1 − 2·Dist(f,g) = W_{f⊕g}(0)` therefore hold *exactly* on these
//! values, not merely within a tolerance, and tests may compare with `==`.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest arity supported by the truth-table core (memory guard: 2 MiB table).
pub const MAX_ARITY: u32 = 24;

/// Largest arity for the quadratic-time direct-summation Walsh transform.
pub const MAX_NAIVE_ARITY: u32 = 16;

/// A Boolean function `{0,1}ⁿ → {0,1}` as a bit-packed truth table.
///
/// Immutable after construction; operations return new values. Cloning is
/// cheap (`2ⁿ⁻³` bytes). The padding bits above index `2ⁿ − 1` in the last
/// word are kept zero so that equality and hashing work structurally.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BooleanFunction {
    arity: u32,
    words: Vec<u64>,
}

impl fmt::Debug for BooleanFunction {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            fm,
            "BooleanFunction(n={}, hex={})",
            self.arity,
            self.to_hex()
        )
    }
}

fn check_arity(n: u32, max: u32, what: &'static str) -> Result<()> {
    if n < 1 || n > max {
        return Err(Error::ArityRange { n, max, what });
    }
    Ok(())
}

fn check_same_arity(f: &BooleanFunction, g: &BooleanFunction) -> Result<()> {
    if f.arity != g.arity {
        return Err(Error::ArityMismatch {
            left: f.arity,
            right: g.arity,
        });
    }
    Ok(())
}

impl BooleanFunction {
    fn zeroed(n: u32) -> Self {
        let words = vec![0u64; (1usize << n).div_ceil(64)];
        BooleanFunction { arity: n, words }
    }

    /// Builds a function from an explicit truth table.
    ///
    /// `bits[i]` becomes `f(x)` for `x` the big-endian encoding of `i`.
    ///
    /// # Errors
    ///
    /// [`Error::ArityRange`] if `n ∉ [1, 24]`; [`Error::TableLength`] if
    /// `bits.len() ≠ 2ⁿ`.
    pub fn from_truth_table(bits: &[bool], n: u32) -> Result<Self> {
        check_arity(n, MAX_ARITY, "truth table construction")?;
        let expected = 1usize << n;
        if bits.len() != expected {
            return Err(Error::TableLength {
                n,
                expected,
                got: bits.len(),
            });
        }
        let mut f = Self::zeroed(n);
        for (i, &b) in bits.iter().enumerate() {
            if b {
                f.words[i >> 6] |= 1u64 << (i & 63);
            }
        }
        Ok(f)
    }

    /// Builds a function by evaluating a closure on every input index.
    pub fn from_fn(n: u32, mut f: impl FnMut(usize) -> bool) -> Result<Self> {
        check_arity(n, MAX_ARITY, "truth table construction")?;
        let mut out = Self::zeroed(n);
        for i in 0..1usize << n {
            if f(i) {
                out.words[i >> 6] |= 1u64 << (i & 63);
            }
        }
        Ok(out)
    }

    /// Uniformly random function: every one of the `2^{2ⁿ}` tables is equally
    /// likely.
    pub fn random(n: u32, rng: &mut impl Rng) -> Result<Self> {
        check_arity(n, MAX_ARITY, "random function generation")?;
        let mut f = Self::zeroed(n);
        for w in &mut f.words {
            *w = rng.random();
        }
        f.mask_padding();
        Ok(f)
    }

    fn mask_padding(&mut self) {
        let bits = 1usize << self.arity;
        let rem = bits & 63;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    /// Number of input variables `n`.
    pub fn arity(&self) -> u32 {
        self.arity
    }

    /// Table size `N = 2ⁿ`.
    pub fn table_len(&self) -> usize {
        1usize << self.arity
    }

    /// Evaluates `f` at the input with index `x`.
    ///
    /// # Panics
    ///
    /// If `x ≥ 2ⁿ`.
    #[inline]
    pub fn eval(&self, x: usize) -> bool {
        assert!(x < self.table_len(), "input index {x} out of range");
        (self.words[x >> 6] >> (x & 63)) & 1 == 1
    }

    /// Number of inputs mapped to 1 (the Hamming weight of the table).
    pub fn weight(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Pointwise complement `x ↦ 1 ⊕ f(x)`.
    pub fn complement(&self) -> Self {
        let mut out = self.clone();
        for w in &mut out.words {
            *w = !*w;
        }
        out.mask_padding();
        out
    }

    /// Pointwise sum `h(x) = f(x) ⊕ g(x)`.
    ///
    /// # Errors
    ///
    /// [`Error::ArityMismatch`] if the arities differ.
    pub fn xor(&self, g: &BooleanFunction) -> Result<Self> {
        check_same_arity(self, g)?;
        let mut out = self.clone();
        for (w, v) in out.words.iter_mut().zip(&g.words) {
            *w ^= v;
        }
        Ok(out)
    }

    /// `Ham(f,g) = |{x : f(x) ≠ g(x)}|`.
    ///
    /// # Errors
    ///
    /// [`Error::ArityMismatch`] if the arities differ.
    pub fn hamming_distance(&self, g: &BooleanFunction) -> Result<u64> {
        check_same_arity(self, g)?;
        Ok(self
            .words
            .iter()
            .zip(&g.words)
            .map(|(w, v)| (w ^ v).count_ones() as u64)
            .sum())
    }

    /// Normalized distance `Dist(f,g) = Ham(f,g)/2ⁿ ∈ [0,1]` (exact dyadic).
    pub fn dist(&self, g: &BooleanFunction) -> Result<f64> {
        let ham = self.hamming_distance(g)?;
        Ok(ham as f64 / self.table_len() as f64)
    }

    /// Correlation `C(f,g) = (agreements − disagreements)/2ⁿ`.
    ///
    /// Computed exactly from the Hamming distance via
    /// `C(f,g) = 1 − 2·Dist(f,g) = (N − 2·Ham)/N`.
    pub fn correlation(&self, g: &BooleanFunction) -> Result<f64> {
        let ham = self.hamming_distance(g)? as i64;
        let n = self.table_len() as i64;
        Ok((n - 2 * ham) as f64 / n as f64)
    }

    /// Bias `C(f) = (1/2ⁿ)Σ(−1)^{f(x)} = W_f(0)`, the correlation with the
    /// constant-0 function (exact dyadic).
    pub fn bias(&self) -> f64 {
        let n = self.table_len() as i64;
        (n - 2 * self.weight() as i64) as f64 / n as f64
    }

    /// Walsh transform by direct double summation over the definition,
    /// in exact integer arithmetic. Quadratic time; the cross-check oracle
    /// for [`BooleanFunction::walsh_spectrum_fast`].
    ///
    /// # Errors
    ///
    /// [`Error::ArityRange`] if `n > 16`.
    pub fn walsh_spectrum_naive(&self) -> Result<WalshSpectrum> {
        check_arity(self.arity, MAX_NAIVE_ARITY, "naive Walsh transform")?;
        let len = self.table_len();
        let mut sums = vec![0i64; len];
        for (omega, sum) in sums.iter_mut().enumerate() {
            let mut acc = 0i64;
            for x in 0..len {
                // (−1)^{f(x) + ω·x} with ω·x the GF(2) inner product.
                let e = self.eval(x) as u32 + (omega & x).count_ones();
                acc += if e & 1 == 0 { 1 } else { -1 };
            }
            *sum = acc;
        }
        Ok(WalshSpectrum::from_scaled(self.arity, &sums))
    }

    /// Walsh transform by the fast Walsh–Hadamard butterfly, `O(N log N)`
    /// in exact integer arithmetic. Identical output to
    /// [`BooleanFunction::walsh_spectrum_naive`].
    ///
    /// # Errors
    ///
    /// [`Error::ArityRange`] if `n > 24`.
    pub fn walsh_spectrum_fast(&self) -> Result<WalshSpectrum> {
        check_arity(self.arity, MAX_ARITY, "fast Walsh transform")?;
        let len = self.table_len();
        let mut v: Vec<i64> = (0..len)
            .map(|x| if self.eval(x) { -1 } else { 1 })
            .collect();
        let mut h = 1;
        while h < len {
            for chunk in v.chunks_mut(2 * h) {
                for i in 0..h {
                    let (a, b) = (chunk[i], chunk[i + h]);
                    chunk[i] = a + b;
                    chunk[i + h] = a - b;
                }
            }
            h *= 2;
        }
        Ok(WalshSpectrum::from_scaled(self.arity, &v))
    }

    /// Encodes the table as the hexadecimal string used by the file format.
    ///
    /// The table is read as the integer `T = Σᵢ f(i)·2ⁱ`, shifted left so the
    /// string has exactly `⌈2ⁿ/4⌉` digits, and printed most significant digit
    /// first — so the string starts with the highest table indices and any
    /// pad bits (arity 1 only) trail at the least significant end.
    pub fn to_hex(&self) -> String {
        let len = self.table_len();
        let digits = len.div_ceil(4);
        let pad = 4 * digits - len;
        let mut out = String::with_capacity(digits);
        // Build from the most significant nibble downwards. Bit position p of
        // the padded integer corresponds to table index p − pad.
        for q in (0..digits).rev() {
            let mut nibble = 0u8;
            for b in 0..4 {
                let p = 4 * q + b;
                if p >= pad && self.eval(p - pad) {
                    nibble |= 1 << b;
                }
            }
            out.push(char::from_digit(nibble as u32, 16).unwrap());
        }
        out
    }

    /// Decodes a hexadecimal table string (inverse of
    /// [`BooleanFunction::to_hex`]); case-insensitive.
    ///
    /// # Errors
    ///
    /// [`Error::TruthTableFormat`] on wrong digit count, non-hex characters,
    /// or nonzero pad bits.
    pub fn from_hex(n: u32, hex: &str) -> Result<Self> {
        check_arity(n, MAX_ARITY, "truth table construction")?;
        let len = 1usize << n;
        let digits = len.div_ceil(4);
        let pad = 4 * digits - len;
        if hex.len() != digits {
            return Err(Error::TruthTableFormat(format!(
                "arity {n} needs exactly {digits} hex digits, got {}",
                hex.len()
            )));
        }
        let mut f = Self::zeroed(n);
        for (pos, ch) in hex.chars().enumerate() {
            let nibble = ch.to_digit(16).ok_or_else(|| {
                Error::TruthTableFormat(format!("'{ch}' is not a hexadecimal digit"))
            })? as usize;
            let q = digits - 1 - pos;
            for b in 0..4 {
                if nibble >> b & 1 == 1 {
                    let p = 4 * q + b;
                    if p < pad {
                        return Err(Error::TruthTableFormat(
                            "trailing pad bits must be zero".into(),
                        ));
                    }
                    let i = p - pad;
                    f.words[i >> 6] |= 1u64 << (i & 63);
                }
            }
        }
        Ok(f)
    }

    /// Serializes to the two-line text file format:
    /// line 1 is the decimal arity, line 2 the hexadecimal table.
    pub fn to_table_text(&self) -> String {
        format!("{}\n{}\n", self.arity, self.to_hex())
    }

    /// Parses the two-line text file format (tolerates surrounding
    /// whitespace and a missing final newline).
    ///
    /// # Errors
    ///
    /// [`Error::TruthTableFormat`] on any structural problem.
    pub fn from_table_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let n_line = lines
            .next()
            .ok_or_else(|| Error::TruthTableFormat("empty input".into()))?;
        let hex_line = lines
            .next()
            .ok_or_else(|| Error::TruthTableFormat("missing table line".into()))?;
        if let Some(extra) = lines.next() {
            return Err(Error::TruthTableFormat(format!(
                "unexpected extra line '{}'",
                extra.trim()
            )));
        }
        let n: u32 = n_line.trim().parse().map_err(|_| {
            Error::TruthTableFormat(format!("'{}' is not a decimal arity", n_line.trim()))
        })?;
        Self::from_hex(n, hex_line.trim())
    }
}

// ------------------------------------------------------------------
// Builtins
// ------------------------------------------------------------------

impl BooleanFunction {
    /// Constant function `x ↦ bit`.
    pub fn constant(n: u32, bit: bool) -> Result<Self> {
        let f = Self::from_fn(n, |_| bit)?;
        Ok(f)
    }

    /// Parity `x ↦ x₁ ⊕ … ⊕ xₙ`.
    pub fn parity(n: u32) -> Result<Self> {
        Self::from_fn(n, |i| i.count_ones() & 1 == 1)
    }

    /// n-way AND `x ↦ x₁ ∧ … ∧ xₙ`.
    pub fn and(n: u32) -> Result<Self> {
        Self::from_fn(n, move |i| i == (1usize << n) - 1)
    }

    /// Majority vote (requires odd `n` so ties cannot occur).
    pub fn majority(n: u32) -> Result<Self> {
        if n % 2 == 0 {
            return Err(Error::UnknownBuiltin(format!(
                "majority{n} (majority requires odd arity)"
            )));
        }
        Self::from_fn(n, move |i| 2 * i.count_ones() > n)
    }

    /// Resolves a builtin name with an optional decimal arity suffix:
    /// `const0`, `const1`, `parity`, `and`, `majority`, e.g. `parity10` or
    /// `and4`. Without a suffix the arity defaults to 8 (9 for `majority`,
    /// which needs an odd arity).
    ///
    /// # Errors
    ///
    /// [`Error::UnknownBuiltin`] if the name does not resolve.
    pub fn builtin(name: &str) -> Result<Self> {
        // Longest names first so `const0`/`const1` keep their digit.
        const BUILTINS: [&str; 5] = ["majority", "const0", "const1", "parity", "and"];
        let (base, suffix) = BUILTINS
            .iter()
            .find_map(|b| name.strip_prefix(b).map(|rest| (*b, rest)))
            .ok_or_else(|| Error::UnknownBuiltin(name.to_string()))?;
        let n: u32 = if suffix.is_empty() {
            if base == "majority" {
                9
            } else {
                8
            }
        } else {
            suffix
                .parse()
                .map_err(|_| Error::UnknownBuiltin(name.to_string()))?
        };
        match base {
            "const0" => Self::constant(n, false),
            "const1" => Self::constant(n, true),
            "parity" => Self::parity(n),
            "and" => Self::and(n),
            "majority" => Self::majority(n),
            _ => unreachable!(),
        }
    }
}

// ------------------------------------------------------------------
// Serde: compact {n, hex} representation
// ------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct TableRepr {
    n: u32,
    hex: String,
}

impl Serialize for BooleanFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TableRepr {
            n: self.arity,
            hex: self.to_hex(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BooleanFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = TableRepr::deserialize(d)?;
        BooleanFunction::from_hex(repr.n, &repr.hex).map_err(serde::de::Error::custom)
    }
}

// ------------------------------------------------------------------
// Walsh spectrum
// ------------------------------------------------------------------

/// The `2ⁿ` Walsh coefficients `W_f(ω)` of a Boolean function.
///
/// Frequencies ω use the same index encoding as the truth table. Every
/// coefficient is an exact dyadic rational of the form `(2ⁿ − 2k)/2ⁿ`, stored
/// exactly in `f64`; [`WalshSpectrum::scaled`] recovers the integer character
/// sum `2ⁿ·W_f(ω)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WalshSpectrum {
    arity: u32,
    coeffs: Vec<f64>,
}

impl WalshSpectrum {
    fn from_scaled(arity: u32, sums: &[i64]) -> Self {
        let scale = 1.0 / (1usize << arity) as f64;
        WalshSpectrum {
            arity,
            coeffs: sums.iter().map(|&s| s as f64 * scale).collect(),
        }
    }

    /// Number of input variables `n`.
    pub fn arity(&self) -> u32 {
        self.arity
    }

    /// The coefficient `W_f(ω)`.
    pub fn coeff(&self, omega: usize) -> f64 {
        self.coeffs[omega]
    }

    /// All `2ⁿ` coefficients in frequency-index order.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// The exact integer character sum `2ⁿ·W_f(ω)` (always `≡ 2ⁿ (mod 2)`).
    pub fn scaled(&self, omega: usize) -> i64 {
        let v = self.coeffs[omega] * (1usize << self.arity) as f64;
        debug_assert_eq!(v, v.round());
        v as i64
    }

    /// `Σ_ω W_f(ω)²` — exactly 1 for any spectrum of a Boolean function
    /// (Parseval), up to `f64` summation order.
    pub fn parseval_sum(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }
}

// ------------------------------------------------------------------
// Instance generators
// ------------------------------------------------------------------

/// Sign selector for [`gen_with_bias`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    /// Target bias `+c`.
    Positive,
    /// Target bias `−c`.
    Negative,
}

impl std::str::FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" | "positive" => Ok(Sign::Positive),
            "-" | "minus" | "negative" => Ok(Sign::Negative),
            other => Err(Error::GeneratorSpec {
                spec: other.to_string(),
                reason: "sign must be '+' or '-'".into(),
            }),
        }
    }
}

/// Returns `f` with `Ham(f,g) = d` exactly, flipping `d` positions of `g`
/// chosen uniformly without replacement.
///
/// # Errors
///
/// [`Error::DistanceRange`] if `d > 2ⁿ`.
pub fn gen_at_distance(g: &BooleanFunction, d: u64, rng: &mut impl Rng) -> Result<BooleanFunction> {
    let len = g.table_len() as u64;
    if d > len {
        return Err(Error::DistanceRange { d, max: len });
    }
    let mut f = g.clone();
    for i in rand::seq::index::sample(rng, len as usize, d as usize) {
        f.words[i >> 6] ^= 1u64 << (i & 63);
    }
    Ok(f)
}

/// Checks that bias magnitude `c` is representable at arity `n`, i.e. that
/// the weight `(1−c)·2ⁿ⁻¹` is an integer.
///
/// # Errors
///
/// [`Error::UnrepresentableBias`] carrying the two nearest representable
/// values; [`Error::EpsilonRange`] if `c ∉ [0,1]`.
pub fn check_bias_representable(n: u32, c: f64) -> Result<()> {
    check_arity(n, MAX_ARITY, "bias representability check")?;
    if !(0.0..=1.0).contains(&c) {
        return Err(Error::EpsilonRange {
            eps: c,
            range: "[0, 1]",
            what: "bias magnitude",
        });
    }
    let half = (1u64 << (n - 1)) as f64;
    // c is a dyadic f64, so c·2ⁿ⁻¹ is computed exactly; a fractional part
    // proves the bias sits off the grid j/2ⁿ⁻¹.
    let k = c * half;
    if k.fract() != 0.0 {
        return Err(Error::UnrepresentableBias {
            c,
            n,
            below: k.floor() / half,
            above: k.ceil() / half,
        });
    }
    Ok(())
}

/// Returns `f` with bias exactly `sign·c`: the table gets exactly
/// `w = (1∓c)·2ⁿ⁻¹` ones (`−` for [`Sign::Positive`], `+` for
/// [`Sign::Negative`]) at positions chosen uniformly without replacement.
///
/// # Errors
///
/// As for [`check_bias_representable`].
pub fn gen_with_bias(n: u32, c: f64, sign: Sign, rng: &mut impl Rng) -> Result<BooleanFunction> {
    check_bias_representable(n, c)?;
    let half = (1u64 << (n - 1)) as f64;
    let k = (c * half) as u64;
    let w = match sign {
        Sign::Positive => (1u64 << (n - 1)) - k,
        Sign::Negative => (1u64 << (n - 1)) + k,
    };
    let mut f = BooleanFunction::constant(n, false)?;
    for i in rand::seq::index::sample(rng, f.table_len(), w as usize) {
        f.words[i >> 6] |= 1u64 << (i & 63);
    }
    Ok(f)
}
