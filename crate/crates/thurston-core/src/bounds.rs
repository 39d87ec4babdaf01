//! Closed-form bounds on stretch factors and their auditing.
//!
//! For a pseudo-Anosov `φ` in the twist group with cyclically reduced
//! length `‖φ‖`:
//!
//! * upper bound: `log λ_φ ≤ K·‖φ‖` where
//!   `K = log((√μ + √(4+μ))/2)` is the Teichmüller displacement of one
//!   generator twist;
//! * lower bound (free case): `log λ_φ ≥ ¼·log ‖φ‖`.
//!
//! Derived consequences: the window of exponents `k` for which a Salem
//! number `λ_s` could satisfy `λ_φ = λ_s^k`, and the upper bound
//! `vol ≤ 3π(2g−2)·log λ_φ` on the volume of the mapping torus of a genus-g
//! surface. The corpus auditor samples random reduced words and checks
//! every pseudo-Anosov one against the two bounds.

use alloc::vec::Vec;

use crate::construction::ThurstonRep;
use crate::geometry::{self, ln, sqrt};
use crate::rng::{random_letter_word, stream, uniform_below};
use crate::words::{ElementClass, Word};

/// Errors from bound evaluation.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BoundsError {
    /// The upper-bound constant is only meaningful in the regime `μ ≥ 4`
    /// (free twist group).
    #[error("bound constant requires μ ≥ 4, got {mu}")]
    MuBelowFour { mu: f64 },
    /// The element is not pseudo-Anosov, so it has no stretch factor.
    #[error("element is not pseudo-Anosov")]
    NotPseudoAnosov,
    /// The word classification says pseudo-Anosov but the matrix trace is
    /// numerically indistinguishable from the parabolic boundary.
    #[error("matrix trace too close to 2 to extract a stretch factor")]
    MatrixNotHyperbolic,
    /// A Salem comparison needs a positive `log λ_s`.
    #[error("log of the Salem number must be positive")]
    NonpositiveSalemLog,
    /// The volume bound applies to closed surfaces of genus at least 2.
    #[error("mapping-torus volume bound requires genus ≥ 2, got {genus}")]
    GenusBelowTwo { genus: u64 },
}

/// Slack used when comparing audited quantities: the upper bound is
/// attained exactly (e.g. by `T_A T_B^{-1}` at `μ = 4`, where
/// `log λ = 2K`), so strict floating-point comparisons would flip on
/// rounding.
pub const AUDIT_TOL: f64 = 1e-9;

/// The per-letter displacement constant `K = log((√μ + √(4+μ))/2)`.
pub fn k_constant(mu: f64) -> Result<f64, BoundsError> {
    if mu.is_nan() || mu < 4.0 {
        return Err(BoundsError::MuBelowFour { mu });
    }
    Ok(ln((sqrt(mu) + sqrt(4.0 + mu)) / 2.0))
}

/// Audit record for one pseudo-Anosov element.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub word: Word,
    pub cyclic_norm: u64,
    pub log_lambda: f64,
    /// `¼·log ‖φ‖`; present only when the group is known to be free.
    pub lower: Option<f64>,
    /// `K·‖φ‖`.
    pub upper: f64,
    pub pass_lower: bool,
    pub pass_upper: bool,
}

impl BoundReport {
    pub fn passed(&self) -> bool {
        self.pass_lower && self.pass_upper
    }
}

/// Checks one element against the stretch-factor bounds.
///
/// `free_group` asserts that the twist group is free (e.g. via the
/// configuration-graph criterion); only then is the lower bound valid and
/// included.
pub fn audit_element(
    rep: &ThurstonRep,
    word: &Word,
    free_group: bool,
) -> Result<BoundReport, BoundsError> {
    if word.classify(rep.mu_is_four) != ElementClass::PseudoAnosov {
        return Err(BoundsError::NotPseudoAnosov);
    }
    let mat = rep.matrix_of(word);
    let log_lambda =
        geometry::log_stretch_factor(&mat).map_err(|_| BoundsError::MatrixNotHyperbolic)?;
    let k = k_constant(rep.mu)?;
    let cyclic_norm = word.cyclic_norm();
    let lower = free_group.then(|| 0.25 * ln(cyclic_norm as f64));
    let upper = k * cyclic_norm as f64;
    Ok(BoundReport {
        word: word.clone(),
        cyclic_norm,
        log_lambda,
        lower,
        upper,
        pass_lower: lower.is_none_or(|l| log_lambda >= l - AUDIT_TOL),
        pass_upper: log_lambda <= upper + AUDIT_TOL,
    })
}

/// Window of admissible exponents for writing a stretch factor as a power
/// of a fixed Salem (or other algebraic) number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SalemWindow {
    /// `log ‖φ‖ / (4·log λ_s)`; present only in the free case.
    pub k_min: Option<f64>,
    /// `K·‖φ‖ / log λ_s`.
    pub k_max: f64,
}

/// The exponent window for a given cyclic norm: if `λ_φ = λ_s^k` then
/// `k ∈ [log ‖φ‖/(4·log λ_s), K·‖φ‖/log λ_s]` (lower endpoint only in the
/// free case).
pub fn salem_window_from_norm(
    cyclic_norm: u64,
    k_constant: f64,
    log_salem: f64,
    free_group: bool,
) -> Result<SalemWindow, BoundsError> {
    if !log_salem.is_finite() || log_salem <= 0.0 {
        return Err(BoundsError::NonpositiveSalemLog);
    }
    Ok(SalemWindow {
        k_min: free_group.then(|| ln(cyclic_norm as f64) / (4.0 * log_salem)),
        k_max: k_constant * cyclic_norm as f64 / log_salem,
    })
}

/// The exponent window for a specific pseudo-Anosov element.
pub fn salem_power_window(
    rep: &ThurstonRep,
    word: &Word,
    log_salem: f64,
    free_group: bool,
) -> Result<SalemWindow, BoundsError> {
    if word.classify(rep.mu_is_four) != ElementClass::PseudoAnosov {
        return Err(BoundsError::NotPseudoAnosov);
    }
    salem_window_from_norm(word.cyclic_norm(), k_constant(rep.mu)?, log_salem, free_group)
}

/// Upper bound `3π(2g−2)·entropy` on the hyperbolic volume of the mapping
/// torus of a pseudo-Anosov with the given entropy (`log λ`) on a closed
/// genus-`g` surface.
pub fn volume_upper_bound(genus: u64, entropy: f64) -> Result<f64, BoundsError> {
    if genus < 2 {
        return Err(BoundsError::GenusBelowTwo { genus });
    }
    Ok(3.0 * core::f64::consts::PI * (2.0 * genus as f64 - 2.0) * entropy)
}

/// Parameters for the random-corpus audit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusParams {
    /// Number of words to sample.
    pub count: u64,
    /// Sampled letter counts are uniform on `1..=max_norm`.
    pub max_norm: u64,
    pub seed: u64,
    /// Whether the lower bound applies (free twist group).
    pub free_group: bool,
}

/// Distribution of the audited ratios `log λ_φ / ‖φ‖`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioStats {
    pub min: f64,
    pub mean: f64,
    pub max: f64,
}

/// Outcome of a corpus audit.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusSummary {
    /// Words sampled in total.
    pub sampled: u64,
    /// Words classified pseudo-Anosov.
    pub pseudo_anosov: u64,
    /// Pseudo-Anosov words actually audited.
    pub audited: u64,
    /// Pseudo-Anosov words skipped because the stretch factor was
    /// numerically unreadable (trace pinned at the parabolic boundary).
    pub skipped_near_parabolic: u64,
    /// Reports that failed a bound. Empty is the expected outcome.
    pub violations: Vec<BoundReport>,
    /// Ratio statistics over audited words; `None` if nothing was audited.
    pub ratio: Option<RatioStats>,
}

/// The `index`-th word of the audit corpus for a given seed: letter count
/// uniform on `1..=max_norm`, letters uniform, drawn from the derived
/// stream `(seed, index)`.
pub fn corpus_word(seed: u64, index: u64, max_norm: u64) -> Word {
    let mut rng = stream(seed, index);
    let letters = 1 + uniform_below(&mut rng, max_norm.max(1));
    random_letter_word(&mut rng, letters)
}

/// Samples `count` random letter words (lengths uniform on `1..=max_norm`,
/// letters uniform) and audits every pseudo-Anosov one. Deterministic in
/// the seed: word `i` uses the derived stream `(seed, i)`.
pub fn audit_corpus(
    rep: &ThurstonRep,
    params: &CorpusParams,
) -> Result<CorpusSummary, BoundsError> {
    let mut summary = CorpusSummary {
        sampled: 0,
        pseudo_anosov: 0,
        audited: 0,
        skipped_near_parabolic: 0,
        violations: Vec::new(),
        ratio: None,
    };
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    let mut sum = 0.0;
    for i in 0..params.count {
        let word = corpus_word(params.seed, i, params.max_norm);
        summary.sampled += 1;
        if word.classify(rep.mu_is_four) != ElementClass::PseudoAnosov {
            continue;
        }
        summary.pseudo_anosov += 1;
        match audit_element(rep, &word, params.free_group) {
            Ok(report) => {
                summary.audited += 1;
                let ratio = report.log_lambda / report.cyclic_norm as f64;
                min = min.min(ratio);
                max = max.max(ratio);
                sum += ratio;
                if !report.passed() {
                    summary.violations.push(report);
                }
            }
            Err(BoundsError::MatrixNotHyperbolic) => {
                summary.skipped_near_parabolic += 1;
            }
            Err(other) => return Err(other),
        }
    }
    if summary.audited > 0 {
        summary.ratio = Some(RatioStats {
            min,
            mean: sum / summary.audited as f64,
            max,
        });
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{build_representation, IntersectionData};
    use crate::geometry::abs;

    fn rep_mu(entry: u64) -> ThurstonRep {
        build_representation(&IntersectionData::new(alloc::vec![alloc::vec![entry]]).unwrap())
            .unwrap()
    }

    #[test]
    fn k_constant_frozen_values() {
        // K(4) = log(1 + √2).
        let k4 = k_constant(4.0).unwrap();
        assert!(abs(k4 - ln(1.0 + sqrt(2.0))) <= 1e-15);
        assert!(abs(k4 - 0.881373587019543) <= 1e-12);
        // K(9) = log((3 + √13)/2).
        let k9 = k_constant(9.0).unwrap();
        assert!(abs(k9 - ln((3.0 + sqrt(13.0)) / 2.0)) <= 1e-15);
        // K equals the displacement of one generator twist.
        let rep = rep_mu(3);
        assert!(abs(k9 - geometry::teich_displacement(&rep.mat_a)) <= 1e-12);
        assert_eq!(
            k_constant(3.9),
            Err(BoundsError::MuBelowFour { mu: 3.9 })
        );
        assert!(k_constant(f64::NAN).is_err());
    }

    #[test]
    fn audit_element_frozen_cases() {
        let rep = rep_mu(2); // μ = 4
        // aB: log λ = log(3 + 2√2) = 2K — the upper bound is attained.
        let report = audit_element(&rep, &Word::parse("aB").unwrap(), true).unwrap();
        assert_eq!(report.cyclic_norm, 2);
        assert!(abs(report.log_lambda - ln(3.0 + 2.0 * sqrt(2.0))) <= 1e-12);
        assert!(abs(report.upper - report.log_lambda) <= 1e-12);
        assert!(abs(report.lower.unwrap() - 0.25 * ln(2.0)) <= 1e-15);
        assert!(report.passed(), "equality case must pass within AUDIT_TOL");

        // Without the free flag there is no lower bound.
        let report = audit_element(&rep, &Word::parse("aB").unwrap(), false).unwrap();
        assert_eq!(report.lower, None);
        assert!(report.pass_lower);

        // Non-pseudo-Anosov elements are refused: ab is parabolic at μ = 4,
        // a is a twist power, the identity is the identity.
        for text in ["ab", "a", ""] {
            assert_eq!(
                audit_element(&rep, &Word::parse(text).unwrap(), true),
                Err(BoundsError::NotPseudoAnosov)
            );
        }

        // μ = 9: ab is pseudo-Anosov with λ = (7 + 3√5)/2.
        let rep9 = rep_mu(3);
        let report = audit_element(&rep9, &Word::parse("ab").unwrap(), true).unwrap();
        assert!(abs(report.log_lambda - ln((7.0 + 3.0 * sqrt(5.0)) / 2.0)) <= 1e-12);
        assert!(report.passed());

        // Conjugation does not change the audited quantities.
        let w = Word::parse("BBaBab").unwrap();
        let conj = Word::parse("abA")
            .unwrap()
            .concat(&w)
            .concat(&Word::parse("abA").unwrap().inverse());
        let r1 = audit_element(&rep, &w, true).unwrap();
        let r2 = audit_element(&rep, &conj, true).unwrap();
        assert_eq!(r1.cyclic_norm, r2.cyclic_norm);
        assert!(abs(r1.log_lambda - r2.log_lambda) <= 1e-9);
    }

    #[test]
    fn salem_window_arithmetic() {
        let k4 = k_constant(4.0).unwrap();
        let log_lehmer = 0.162357612007738; // log of Lehmer's number
        // Norm 1: window [0, K/log λ_s].
        let w = salem_window_from_norm(1, k4, log_lehmer, true).unwrap();
        assert_eq!(w.k_min, Some(0.0));
        assert!(abs(w.k_max * log_lehmer - k4) <= 1e-15);
        assert!(abs(w.k_max - 5.428591) <= 1e-5);
        // Norm 100 window scales.
        let w100 = salem_window_from_norm(100, k4, log_lehmer, true).unwrap();
        assert!(abs(w100.k_max - 100.0 * w.k_max) <= 1e-9);
        assert!(abs(w100.k_min.unwrap() * 4.0 * log_lehmer - ln(100.0)) <= 1e-15);
        // Invalid Salem logs.
        for bad in [0.0, -1.0, f64::NAN] {
            assert_eq!(
                salem_window_from_norm(1, k4, bad, true),
                Err(BoundsError::NonpositiveSalemLog)
            );
        }
        // Element-level wrapper respects the classification.
        let rep = rep_mu(2);
        assert_eq!(
            salem_power_window(&rep, &Word::parse("a").unwrap(), log_lehmer, true),
            Err(BoundsError::NotPseudoAnosov)
        );
        let w = salem_power_window(&rep, &Word::parse("aB").unwrap(), log_lehmer, true).unwrap();
        assert!(abs(w.k_max * log_lehmer - 2.0 * k4) <= 1e-12);
    }

    #[test]
    fn volume_bound_values() {
        // Genus 2: 3π(2·2−2) = 6π per unit entropy.
        let v = volume_upper_bound(2, 1.0).unwrap();
        assert!(abs(v - 6.0 * core::f64::consts::PI) <= 1e-12);
        let k4 = k_constant(4.0).unwrap();
        let v = volume_upper_bound(2, k4).unwrap();
        assert!(abs(v - 16.613) <= 1e-3);
        // Linear in genus term: genus 3 gives 12π·entropy.
        let v3 = volume_upper_bound(3, 1.0).unwrap();
        assert!(abs(v3 - 12.0 * core::f64::consts::PI) <= 1e-12);
        for g in [0, 1] {
            assert_eq!(
                volume_upper_bound(g, 1.0),
                Err(BoundsError::GenusBelowTwo { genus: g })
            );
        }
    }

    #[test]
    fn corpus_audit_finds_no_violations() {
        for (entry, free) in [(2u64, true), (3, true)] {
            let rep = rep_mu(entry);
            let params = CorpusParams {
                count: 400,
                max_norm: 30,
                seed: 20260814,
                free_group: free,
            };
            let summary = audit_corpus(&rep, &params).unwrap();
            assert_eq!(summary.sampled, 400);
            assert!(summary.pseudo_anosov > 200, "random words are mostly pA");
            assert_eq!(summary.audited, summary.pseudo_anosov);
            assert_eq!(summary.skipped_near_parabolic, 0);
            assert!(
                summary.violations.is_empty(),
                "violations at μ from entry {entry}: {:?}",
                summary.violations
            );
            let ratio = summary.ratio.unwrap();
            let k = k_constant(rep.mu).unwrap();
            assert!(0.0 < ratio.min);
            assert!(ratio.min <= ratio.mean && ratio.mean <= ratio.max);
            assert!(ratio.max <= k + AUDIT_TOL);
        }
    }

    #[test]
    fn corpus_audit_is_reproducible() {
        let rep = rep_mu(2);
        let params = CorpusParams {
            count: 50,
            max_norm: 12,
            seed: 7,
            free_group: true,
        };
        let a = audit_corpus(&rep, &params).unwrap();
        let b = audit_corpus(&rep, &params).unwrap();
        assert_eq!(a, b);
        let c = audit_corpus(
            &rep,
            &CorpusParams {
                seed: 8,
                ..params
            },
        )
        .unwrap();
        assert_ne!(a, c);
    }
}
