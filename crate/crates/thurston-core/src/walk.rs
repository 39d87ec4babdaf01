//! Random walks on the twist group `⟨T_A, T_B⟩`.
//!
//! A walk is driven by a finitely supported probability measure whose atoms
//! are reduced words. Trajectories multiply on the right,
//! `ω_n = ω_{n−1} · g_n`, tracking both the reduced word (for combinatorial
//! classification) and the matrix image (for Teichmüller displacement and
//! stretch factors). Each trajectory draws from its own deterministic
//! random stream, so trajectory `t` of a run is reproducible in isolation
//! and independent of evaluation order.
//!
//! Aggregations over a set of trajectories estimate the drift
//! `L = lim d(X₀, ω_n X₀)/n`, expose the Fekete upper bounds
//! `E_n = mean(d_n)/n ≥ L`, and compare the spectral quantity
//! `log λ(ω_n)/n` against the drift.

use alloc::string::String;
use alloc::vec::Vec;

use crate::construction::ThurstonRep;
use crate::geometry::{
    self, chordal_distance, fixed_points, BoundaryPoint, FixedPoints, ScaledMat,
};
use crate::rng::{stream, unit_f64};
use crate::words::{AbelianImage, ElementClass, Word, WordParseError};

/// One raw measure atom: word text plus its probability.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureEntry {
    pub word: String,
    pub prob: f64,
}

/// A finitely supported measure as supplied by the caller, before
/// validation. Atom words use letter syntax (`a`, `b`, `A`, `B`).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MeasureSpec {
    pub entries: Vec<MeasureEntry>,
}

impl MeasureSpec {
    /// The uniform measure on the given atom words.
    pub fn uniform<I, S>(atoms: I) -> MeasureSpec
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let words: Vec<String> = atoms.into_iter().map(Into::into).collect();
        let prob = 1.0 / words.len() as f64;
        MeasureSpec {
            entries: words
                .into_iter()
                .map(|word| MeasureEntry { word, prob })
                .collect(),
        }
    }
}

/// Rejections from [`validate_measure`].
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MeasureError {
    #[error("atom {index}: {source}")]
    InvalidWord {
        index: usize,
        source: WordParseError,
    },
    /// The atom text freely reduces to a different word (e.g. `aA b`), so
    /// the intended support is ambiguous.
    #[error("atom {index} is not a freely reduced word")]
    UnreducedAtom { index: usize },
    /// Two atoms denote the same group element.
    #[error("atoms {first} and {second} are the same group element")]
    DuplicateAtom { first: usize, second: usize },
    #[error("measure has no atoms")]
    EmptySupport,
    #[error("atom {index} has nonpositive probability {prob}")]
    BadProb { index: usize, prob: f64 },
    #[error("atom probabilities sum to {sum}; expected 1 within 1e-9")]
    BadProbabilitySum { sum: f64 },
}

/// Non-fatal observations from [`validate_measure`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureWarning {
    /// The bounded search did not find two pseudo-Anosov products with
    /// disjoint axes, so non-elementarity of the generated subgroup could
    /// not be confirmed. Drift positivity is only guaranteed for
    /// non-elementary measures.
    NonElementarityUnverified,
}

impl core::fmt::Display for MeasureWarning {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            MeasureWarning::NonElementarityUnverified => f.write_str(
                "could not verify that the support generates a non-elementary subgroup",
            ),
        }
    }
}

/// One validated atom: reduced word, normalized probability, and the
/// precomputed matrix image under the representation the measure was
/// validated against.
#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub word: Word,
    pub prob: f64,
    pub(crate) mat: ScaledMat,
    /// Cumulative probability up to and including this atom; the last
    /// atom's value is exactly 1.
    pub(crate) cum: f64,
}

/// A measure that passed validation, bound to the representation whose
/// matrices it carries.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidatedMeasure {
    atoms: Vec<Atom>,
    warnings: Vec<MeasureWarning>,
}

impl ValidatedMeasure {
    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn warnings(&self) -> &[MeasureWarning] {
        &self.warnings
    }

    /// Atom selected by a uniform variate `u ∈ [0, 1)`.
    pub(crate) fn pick(&self, u: f64) -> &Atom {
        let idx = self.atoms.partition_point(|a| a.cum <= u);
        &self.atoms[idx.min(self.atoms.len() - 1)]
    }
}

/// Caps for the non-elementarity search: products of at most three atoms,
/// a bounded number of examined products, and a bounded candidate store.
const PROBE_MAX_FACTORS: usize = 3;
const PROBE_MAX_PRODUCTS: usize = 4096;
const PROBE_MAX_CANDIDATES: usize = 64;
/// Two axes count as disjoint when every endpoint pair is at least this far
/// apart in the chordal metric on the boundary circle.
const PROBE_SEPARATION: f64 = 1e-6;

/// Checks a measure against a representation: parses and reduces atoms,
/// rejects duplicates and bad probabilities, normalizes the total mass to
/// exactly 1, and attempts to certify that the support generates a
/// non-elementary subgroup (two pseudo-Anosov products with disjoint axes).
/// Failure to certify is reported as a warning, not an error.
pub fn validate_measure(
    rep: &ThurstonRep,
    spec: &MeasureSpec,
) -> Result<ValidatedMeasure, MeasureError> {
    if spec.entries.is_empty() {
        return Err(MeasureError::EmptySupport);
    }
    let mut words = Vec::with_capacity(spec.entries.len());
    for (index, entry) in spec.entries.iter().enumerate() {
        let word = Word::parse_reduced(&entry.word).map_err(|e| match e {
            WordParseError::NotReduced { .. } => MeasureError::UnreducedAtom { index },
            other => MeasureError::InvalidWord {
                index,
                source: other,
            },
        })?;
        if !(entry.prob > 0.0 && entry.prob.is_finite()) {
            return Err(MeasureError::BadProb {
                index,
                prob: entry.prob,
            });
        }
        words.push(word);
    }
    for second in 1..words.len() {
        if let Some(first) = (0..second).find(|&first| words[first] == words[second]) {
            return Err(MeasureError::DuplicateAtom { first, second });
        }
    }
    let sum: f64 = spec.entries.iter().map(|e| e.prob).sum();
    if geometry::abs(sum - 1.0) > 1e-9 {
        return Err(MeasureError::BadProbabilitySum { sum });
    }
    let mut cum = 0.0;
    let count = words.len();
    let mut atoms: Vec<Atom> = words
        .into_iter()
        .zip(&spec.entries)
        .enumerate()
        .map(|(i, (word, entry))| {
            let prob = entry.prob / sum;
            cum += prob;
            let mat = rep.matrix_of(&word);
            Atom {
                word,
                prob,
                mat,
                cum: if i + 1 == count { 1.0 } else { cum },
            }
        })
        .collect();
    atoms.last_mut().expect("nonempty").cum = 1.0;

    let mut warnings = Vec::new();
    if !probe_nonelementary(rep, &atoms) {
        warnings.push(MeasureWarning::NonElementarityUnverified);
    }
    Ok(ValidatedMeasure { atoms, warnings })
}

/// Bounded search for two pseudo-Anosov products of support atoms whose
/// axis endpoints are pairwise separated on the boundary.
fn probe_nonelementary(rep: &ThurstonRep, atoms: &[Atom]) -> bool {
    let k = atoms.len();
    let mut candidates: Vec<[BoundaryPoint; 2]> = Vec::new();
    let mut examined = 0usize;
    for len in 1..=PROBE_MAX_FACTORS {
        let mut idx = alloc::vec![0usize; len];
        loop {
            examined += 1;
            if examined > PROBE_MAX_PRODUCTS {
                return false;
            }
            let mut word = Word::identity();
            let mut mat = ScaledMat::identity();
            for &i in &idx {
                word.push_word(&atoms[i].word);
                mat = mat.mul(&atoms[i].mat);
            }
            if word.classify(rep.mu_is_four) == ElementClass::PseudoAnosov {
                if let Ok(FixedPoints::Two(p, q)) = fixed_points(&mat) {
                    let axis = [p, q];
                    let disjoint = |other: &[BoundaryPoint; 2]| {
                        axis.iter().all(|&x| {
                            other.iter().all(|&y| chordal_distance(x, y) >= PROBE_SEPARATION)
                        })
                    };
                    if candidates.iter().any(disjoint) {
                        return true;
                    }
                    if candidates.len() < PROBE_MAX_CANDIDATES {
                        candidates.push(axis);
                    }
                }
            }
            // Odometer over ordered index tuples of this length.
            let mut pos = len;
            while pos > 0 {
                idx[pos - 1] += 1;
                if idx[pos - 1] < k {
                    break;
                }
                idx[pos - 1] = 0;
                pos -= 1;
            }
            if pos == 0 {
                break;
            }
        }
    }
    false
}

/// Errors from sampling and aggregation.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WalkError {
    #[error("walk configuration fields must all be positive")]
    BadConfig,
    #[error("estimation needs at least {needed} trajectories, got {got}")]
    InsufficientTrajectories { needed: usize, got: usize },
    #[error("trajectories were recorded on different step grids")]
    MismatchedRecords,
    #[error("trajectory contains no recorded steps")]
    NoRecords,
}

/// Parameters of a walk run. All fields must be positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WalkConfig {
    /// Steps per trajectory.
    pub steps: u64,
    /// Number of trajectories.
    pub trajectories: u64,
    /// Master seed; trajectory `t` uses the derived stream `(seed, t)`.
    pub seed: u64,
    /// Record every `record_stride` steps (the final step is always
    /// recorded).
    pub record_stride: u64,
}

impl WalkConfig {
    pub fn validate(&self) -> Result<(), WalkError> {
        if self.steps == 0 || self.trajectories == 0 || self.record_stride == 0 {
            return Err(WalkError::BadConfig);
        }
        Ok(())
    }
}

/// State captured at one recorded step of one trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    /// Step index `n ≥ 1`.
    pub n: u64,
    /// Reduced word length `|ω_n|`.
    pub word_norm: u64,
    /// Cyclically reduced length `‖ω_n‖`.
    pub cyclic_norm: u64,
    /// Combinatorial classification of `ω_n`.
    pub class: ElementClass,
    /// `log λ(ω_n)` for pseudo-Anosov steps, `None` otherwise.
    pub log_lambda: Option<f64>,
    /// Set when the word classification says pseudo-Anosov but the matrix
    /// trace is numerically too close to 2 to extract `log λ`; the stored
    /// `log_lambda` is then 0.
    pub stretch_flagged_zero: bool,
    /// Teichmüller displacement `d_T(X₀, ω_n X₀)`.
    pub displacement: f64,
}

/// All recorded steps of one trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRun {
    pub traj: u64,
    pub records: Vec<StepRecord>,
}

fn make_record(rep: &ThurstonRep, word: &Word, mat: &ScaledMat, n: u64) -> StepRecord {
    let reduction = word.cyclic_reduce();
    let class = Word::classify_core(&reduction.core, rep.mu_is_four);
    let (log_lambda, stretch_flagged_zero) = if class == ElementClass::PseudoAnosov {
        match geometry::log_stretch_factor(mat) {
            Ok(l) => (Some(l), false),
            // Word-level classification is authoritative; the matrix trace
            // has merely lost the margin over |tr| = 2 in f64.
            Err(_) => (Some(0.0), true),
        }
    } else {
        (None, false)
    };
    StepRecord {
        n,
        word_norm: word.norm(),
        cyclic_norm: reduction.core.norm(),
        class,
        log_lambda,
        stretch_flagged_zero,
        displacement: geometry::teich_displacement(mat),
    }
}

/// Samples one trajectory, recording every `record_stride` steps and at the
/// final step. Deterministic in `(config.seed, traj)`.
pub fn sample_trajectory(
    rep: &ThurstonRep,
    measure: &ValidatedMeasure,
    config: &WalkConfig,
    traj: u64,
) -> Result<TrajectoryRun, WalkError> {
    config.validate()?;
    let mut rng = stream(config.seed, traj);
    let mut word = Word::identity();
    let mut mat = ScaledMat::identity();
    let mut records =
        Vec::with_capacity((config.steps / config.record_stride) as usize + 1);
    for n in 1..=config.steps {
        let atom = measure.pick(unit_f64(&mut rng));
        word.push_word(&atom.word);
        mat = mat.mul(&atom.mat);
        if n % config.record_stride == 0 || n == config.steps {
            records.push(make_record(rep, &word, &mat, n));
        }
    }
    Ok(TrajectoryRun { traj, records })
}

/// Samples trajectories `0..config.trajectories` sequentially. Callers that
/// parallelize should map [`sample_trajectory`] over the same indices; the
/// result is identical because each trajectory has its own stream.
pub fn run_walk(
    rep: &ThurstonRep,
    measure: &ValidatedMeasure,
    config: &WalkConfig,
) -> Result<Vec<TrajectoryRun>, WalkError> {
    (0..config.trajectories)
        .map(|traj| sample_trajectory(rep, measure, config, traj))
        .collect()
}

/// Replays the sampling stream of one trajectory and returns the image of
/// `ω_n` in the abelianization `ℤ²` at every recorded step. Uses the exact
/// random stream of [`sample_trajectory`], so the records correspond
/// step-for-step.
pub fn abelian_track(
    measure: &ValidatedMeasure,
    config: &WalkConfig,
    traj: u64,
) -> Result<Vec<(u64, AbelianImage)>, WalkError> {
    config.validate()?;
    let mut rng = stream(config.seed, traj);
    let mut image = AbelianImage::default();
    let mut out = Vec::new();
    for n in 1..=config.steps {
        let atom = measure.pick(unit_f64(&mut rng));
        let step = atom.word.abelianize();
        image.a += step.a;
        image.b += step.b;
        if n % config.record_stride == 0 || n == config.steps {
            out.push((n, image));
        }
    }
    Ok(out)
}

/// Drift estimate from final-step displacements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftEstimate {
    /// Mean of `d_T(X₀, ω_N X₀)/N` across trajectories.
    pub value: f64,
    /// Standard error of that mean (sample standard deviation / √M).
    pub std_error: f64,
    pub trajectories: usize,
    /// The common final step count `N`.
    pub steps: u64,
}

fn final_records(runs: &[TrajectoryRun]) -> Result<Vec<&StepRecord>, WalkError> {
    let mut finals = Vec::with_capacity(runs.len());
    for run in runs {
        finals.push(run.records.last().ok_or(WalkError::NoRecords)?);
    }
    if finals.windows(2).any(|w| w[0].n != w[1].n) {
        return Err(WalkError::MismatchedRecords);
    }
    Ok(finals)
}

/// Estimates the drift `L` from the final step of at least two trajectories.
pub fn drift_estimate(runs: &[TrajectoryRun]) -> Result<DriftEstimate, WalkError> {
    if runs.len() < 2 {
        return Err(WalkError::InsufficientTrajectories {
            needed: 2,
            got: runs.len(),
        });
    }
    let finals = final_records(runs)?;
    let steps = finals[0].n;
    let xs: Vec<f64> = finals
        .iter()
        .map(|r| r.displacement / r.n as f64)
        .collect();
    let m = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / m;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (m - 1.0);
    Ok(DriftEstimate {
        value: mean,
        std_error: geometry::sqrt(var / m),
        trajectories: runs.len(),
        steps,
    })
}

/// One row of the Fekete (subadditivity) bound sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FKRow {
    pub n: u64,
    /// `E_n = mean over trajectories of d_T(X₀, ω_n X₀)/n`, an upper bound
    /// for the drift in expectation.
    pub mean: f64,
    /// `min_{k ≤ n} E_k` over the recorded grid.
    pub running_min: f64,
}

/// Checks all runs share one record grid and returns the per-step records
/// grouped by grid position.
fn grid_columns(runs: &[TrajectoryRun]) -> Result<Vec<Vec<&StepRecord>>, WalkError> {
    let first = runs.first().ok_or(WalkError::NoRecords)?;
    if first.records.is_empty() {
        return Err(WalkError::NoRecords);
    }
    let grid: Vec<u64> = first.records.iter().map(|r| r.n).collect();
    for run in runs {
        if run.records.len() != grid.len()
            || run.records.iter().zip(&grid).any(|(r, &n)| r.n != n)
        {
            return Err(WalkError::MismatchedRecords);
        }
    }
    Ok((0..grid.len())
        .map(|i| runs.iter().map(|run| &run.records[i]).collect())
        .collect())
}

/// The sequence `E_n` with its running minimum over the recorded grid.
pub fn fk_upper_bounds(runs: &[TrajectoryRun]) -> Result<Vec<FKRow>, WalkError> {
    let columns = grid_columns(runs)?;
    let m = runs.len() as f64;
    let mut running_min = f64::INFINITY;
    Ok(columns
        .iter()
        .map(|col| {
            let n = col[0].n;
            let mean = col
                .iter()
                .map(|r| r.displacement / r.n as f64)
                .sum::<f64>()
                / m;
            running_min = running_min.min(mean);
            FKRow {
                n,
                mean,
                running_min,
            }
        })
        .collect())
}

/// One row of the spectral comparison report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralRow {
    pub n: u64,
    /// Fraction of trajectories whose step-`n` element is pseudo-Anosov.
    pub fraction_pa: f64,
    /// Mean over pseudo-Anosov steps of `|log λ(ω_n)/n − drift|`;
    /// `None` when no usable pseudo-Anosov step exists at this `n`.
    /// Steps whose stretch factor was numerically unreadable are excluded.
    pub mean_abs_dev: Option<f64>,
}

/// Compares the spectral ratio `log λ(ω_n)/n` against a drift estimate.
pub fn spectral_report(
    runs: &[TrajectoryRun],
    drift: f64,
) -> Result<Vec<SpectralRow>, WalkError> {
    let columns = grid_columns(runs)?;
    let m = runs.len() as f64;
    Ok(columns
        .iter()
        .map(|col| {
            let n = col[0].n;
            let pa = col
                .iter()
                .filter(|r| r.class == ElementClass::PseudoAnosov)
                .count();
            let devs: Vec<f64> = col
                .iter()
                .filter(|r| !r.stretch_flagged_zero)
                .filter_map(|r| r.log_lambda)
                .map(|l| geometry::abs(l / n as f64 - drift))
                .collect();
            SpectralRow {
                n,
                fraction_pa: pa as f64 / m,
                mean_abs_dev: if devs.is_empty() {
                    None
                } else {
                    Some(devs.iter().sum::<f64>() / devs.len() as f64)
                },
            }
        })
        .collect())
}

/// The last recorded step of each trajectory whose element is NOT
/// pseudo-Anosov (`None` when every recorded step is pseudo-Anosov).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LastNonPa {
    pub traj: u64,
    pub last: Option<u64>,
}

/// Per-trajectory last non-pseudo-Anosov recorded step.
pub fn last_non_pa(runs: &[TrajectoryRun]) -> Vec<LastNonPa> {
    runs.iter()
        .map(|run| LastNonPa {
            traj: run.traj,
            last: run
                .records
                .iter()
                .rev()
                .find(|r| r.class != ElementClass::PseudoAnosov)
                .map(|r| r.n),
        })
        .collect()
}
