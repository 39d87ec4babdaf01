//! The random model for intersection data.
//!
//! Parameters `(n, m, k)`: intersection numbers `i(α_j, β_l)` are drawn
//! uniformly from `{0, …, k−1}` and multiplicities uniformly from
//! `{1, …, k}`, all independently. The "bad event" is that some selected
//! curve violates the ping-pong margin exactly at the boundary:
//! `∃α: n_α·i(α, [B]) = 1` or `∃β: m_β·i([A], β) = 1`. Its probability is
//! bounded by
//!
//! `P(bad) ≤ 2 − (1 − m/k^{m+1})^n − (1 − n/k^{n+1})^m`,
//!
//! which tends to 0 as `k → ∞`: random twist groups are asymptotically
//! free. This module evaluates the bound, the exact probability where
//! inclusion–exclusion is tractable, Monte Carlo estimates, and exhaustive
//! enumeration for small parameter sets.

use alloc::vec;
use alloc::vec::Vec;

use rand_core::RngCore;

use crate::construction::{DataError, IntersectionData};
use crate::rng::{stream, uniform_below};

/// Errors from the random model.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("model parameters require n ≥ 1, m ≥ 1, k ≥ 2")]
    BadParams,
    #[error("state space exceeds the enumeration cap of 10^8")]
    TooLargeToEnumerate,
}

/// Validated model parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModelParams {
    n: u32,
    m: u32,
    k: u64,
}

/// Cap on exhaustive enumeration.
const ENUM_CAP: u128 = 100_000_000;

/// `x^e` by binary exponentiation (exact for exactly representable cases
/// like small integer bases and exponents).
fn powi(x: f64, mut e: u64) -> f64 {
    let mut base = x;
    let mut acc = 1.0;
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
        }
        e >>= 1;
        base *= base;
    }
    acc
}

impl ModelParams {
    pub fn new(n: u32, m: u32, k: u64) -> Result<ModelParams, ModelError> {
        if n == 0 || m == 0 || k < 2 {
            return Err(ModelError::BadParams);
        }
        Ok(ModelParams { n, m, k })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    /// The closed-form bound `2 − (1 − m/k^{m+1})^n − (1 − n/k^{n+1})^m`.
    ///
    /// Both addends are exact probabilities (`P(some row margin fails)` and
    /// `P(some column margin fails)`); their sum is a union bound on the
    /// bad event.
    pub fn exact_bound(&self) -> f64 {
        let k = self.k as f64;
        let row_fail = 1.0 - powi(1.0 - self.m as f64 / powi(k, self.m as u64 + 1), self.n as u64);
        let col_fail = 1.0 - powi(1.0 - self.n as f64 / powi(k, self.n as u64 + 1), self.m as u64);
        row_fail + col_fail
    }

    /// The probability of the bad event with the row/column overlap
    /// accounted for where tractable.
    ///
    /// For `n = m = 1` the events overlap in a single cell and
    /// inclusion–exclusion gives the exact value `2/k² − 1/k³`. For larger
    /// shapes the overlap correction has no comparable closed form and this
    /// returns the union bound, i.e. the same value as
    /// [`ModelParams::exact_bound`].
    pub fn bad_event_prob_exact(&self) -> f64 {
        if self.n == 1 && self.m == 1 {
            let k = self.k as f64;
            2.0 / (k * k) - 1.0 / (k * k * k)
        } else {
            self.exact_bound()
        }
    }

    /// Draws one sample: intersection entries row-major, then row
    /// multiplicities, then column multiplicities.
    pub fn sample(&self, rng: &mut impl RngCore) -> ModelSample {
        let (n, m) = (self.n as usize, self.m as usize);
        let intersections: Vec<Vec<u64>> = (0..n)
            .map(|_| (0..m).map(|_| uniform_below(rng, self.k)).collect())
            .collect();
        let row_mult: Vec<u64> = (0..n).map(|_| 1 + uniform_below(rng, self.k)).collect();
        let col_mult: Vec<u64> = (0..m).map(|_| 1 + uniform_below(rng, self.k)).collect();
        ModelSample {
            intersections,
            row_mult,
            col_mult,
        }
    }

    /// Whether a sample realizes the bad event.
    pub fn sample_is_bad(&self, s: &ModelSample) -> bool {
        let row_bad = s.intersections.iter().zip(&s.row_mult).any(|(row, &mult)| {
            let total: u128 = row.iter().map(|&x| x as u128).sum();
            mult as u128 * total == 1
        });
        if row_bad {
            return true;
        }
        (0..self.m as usize).any(|j| {
            let total: u128 = s.intersections.iter().map(|row| row[j] as u128).sum();
            s.col_mult[j] as u128 * total == 1
        })
    }

    /// Monte Carlo estimate of the bad-event probability. Trials are
    /// processed in fixed-size chunks, each with its own derived stream, so
    /// the result is independent of evaluation order and reproducible.
    pub fn mc_estimate(&self, trials: u64, seed: u64) -> McEstimate {
        const CHUNK: u64 = 1 << 16;
        let mut bad = 0u64;
        let chunks = trials.div_ceil(CHUNK);
        for chunk in 0..chunks {
            let mut rng = stream(seed, chunk);
            let in_chunk = CHUNK.min(trials - chunk * CHUNK);
            for _ in 0..in_chunk {
                if self.sample_is_bad(&self.sample(&mut rng)) {
                    bad += 1;
                }
            }
        }
        let p_hat = bad as f64 / trials as f64;
        McEstimate {
            p_hat,
            std_error: crate::geometry::sqrt(p_hat * (1.0 - p_hat) / trials as f64),
            trials,
            bad,
        }
    }

    /// Number of equally likely outcomes, `k^(nm + n + m)`, if it fits.
    fn state_count(&self) -> Option<u128> {
        let digits = self.n * self.m + self.n + self.m;
        let mut total: u128 = 1;
        for _ in 0..digits {
            total = total.checked_mul(self.k as u128)?;
        }
        Some(total)
    }

    /// Exhaustive enumeration of the bad-event probability as an exact
    /// rational. Requires `k^(nm+n+m) ≤ 10^8`.
    pub fn brute_force_prob(&self) -> Result<ExactProb, ModelError> {
        let total = self
            .state_count()
            .filter(|&t| t <= ENUM_CAP)
            .ok_or(ModelError::TooLargeToEnumerate)?;
        let (n, m) = (self.n as usize, self.m as usize);
        let digit_count = n * m + n + m;
        let mut digits = vec![0u64; digit_count];
        let mut sample = ModelSample {
            intersections: vec![vec![0; m]; n],
            row_mult: vec![1; n],
            col_mult: vec![1; m],
        };
        let mut bad: u128 = 0;
        loop {
            for (pos, &d) in digits.iter().enumerate() {
                if pos < n * m {
                    sample.intersections[pos / m][pos % m] = d;
                } else if pos < n * m + n {
                    sample.row_mult[pos - n * m] = d + 1;
                } else {
                    sample.col_mult[pos - n * m - n] = d + 1;
                }
            }
            if self.sample_is_bad(&sample) {
                bad += 1;
            }
            // Odometer increment in base k.
            let mut pos = digit_count;
            while pos > 0 {
                digits[pos - 1] += 1;
                if digits[pos - 1] < self.k {
                    break;
                }
                digits[pos - 1] = 0;
                pos -= 1;
            }
            if pos == 0 {
                break;
            }
        }
        Ok(ExactProb { bad, total })
    }
}

/// One draw from the model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelSample {
    pub intersections: Vec<Vec<u64>>,
    pub row_mult: Vec<u64>,
    pub col_mult: Vec<u64>,
}

impl ModelSample {
    /// Converts the sample into intersection data (shape is valid by
    /// construction; the conversion is fallible only in the degenerate
    /// sense of the shared validator).
    pub fn into_data(self) -> Result<IntersectionData, DataError> {
        IntersectionData::with_multiplicities(self.intersections, self.row_mult, self.col_mult)
    }
}

/// Monte Carlo estimate with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub p_hat: f64,
    pub std_error: f64,
    pub trials: u64,
    pub bad: u64,
}

/// An exact probability `bad / total` over equally likely outcomes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactProb {
    pub bad: u128,
    pub total: u128,
}

impl ExactProb {
    /// The fraction in lowest terms.
    pub fn reduced(&self) -> (u128, u128) {
        fn gcd(mut a: u128, mut b: u128) -> u128 {
            while b != 0 {
                (a, b) = (b, a % b);
            }
            a
        }
        let g = gcd(self.bad, self.total).max(1);
        (self.bad / g, self.total / g)
    }

    pub fn as_f64(&self) -> f64 {
        self.bad as f64 / self.total as f64
    }
}
