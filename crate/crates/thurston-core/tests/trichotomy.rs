//! Coherence of the combinatorial and the matrix-level trichotomies.
//!
//! For a free twist group the Nielsen–Thurston type of a word is decided
//! combinatorially (identity / conjugate twist power / pseudo-Anosov), and
//! the represented matrix must land in the matching `PSL(2, ℝ)` class
//! (identity / parabolic / hyperbolic). The parabolic direction is only
//! checked on words of moderate total length: the parabolic trace signal
//! `|tr| = 2` sits at an unstable boundary and long conjugators wash it out
//! in f64, which is precisely why the word-level classifier is the
//! authority in the library.

use thurston_core::construction::{build_representation, IntersectionData, ThurstonRep};
use thurston_core::geometry::classify_matrix;
use thurston_core::rng::{random_letter_word, stream, uniform_below};
use thurston_core::words::ElementClass;
use thurston_core::{IsomClass, Word};

fn rep_mu(entry: u64) -> ThurstonRep {
    build_representation(&IntersectionData::new(vec![vec![entry]]).unwrap()).unwrap()
}

fn expected_class(class: ElementClass) -> IsomClass {
    match class {
        ElementClass::Identity => IsomClass::Identity,
        ElementClass::ConjPowerA | ElementClass::ConjPowerB | ElementClass::ConjPowerAB => {
            IsomClass::Parabolic
        }
        ElementClass::PseudoAnosov => IsomClass::Hyperbolic,
    }
}

#[test]
fn parabolic_classes_match_on_short_conjugates() {
    // Cores a^k, b^k (k ≤ 4) and, at μ = 4, (ab)^{±k}; conjugators of at
    // most 4 letters keep the |tr| = 2 signal well inside the tolerance.
    let rep4 = rep_mu(2);
    let rep9 = rep_mu(3);
    let mut rng = stream(0xC0DE, 0);
    let mut parabolic_checked = 0;
    for _ in 0..400 {
        let conj_len = uniform_below(&mut rng, 5);
        let conj = random_letter_word(&mut rng, conj_len);
        let k = 1 + uniform_below(&mut rng, 4) as i64;
        let sign = if uniform_below(&mut rng, 2) == 0 { 1 } else { -1 };
        let cores: Vec<Word> = vec![
            Word::parse("a").unwrap().pow(sign * k),
            Word::parse("b").unwrap().pow(sign * k),
            Word::parse("ab").unwrap().pow(sign * k),
        ];
        for (rep, core) in [(&rep4, &cores[0]), (&rep4, &cores[1]), (&rep9, &cores[0]), (&rep4, &cores[2])] {
            let w = conj.concat(core).concat(&conj.inverse());
            let class = w.classify(rep.mu_is_four);
            let mat_class = classify_matrix(&rep.matrix_of(&w));
            assert_eq!(
                mat_class,
                expected_class(class),
                "word {w}, μ = {}",
                rep.mu
            );
            if mat_class == IsomClass::Parabolic {
                parabolic_checked += 1;
            }
        }
    }
    assert!(parabolic_checked >= 1000, "only {parabolic_checked} parabolic cases hit");
}

#[test]
fn ab_power_is_parabolic_exactly_at_mu_four() {
    let rep4 = rep_mu(2);
    let rep9 = rep_mu(3);
    let w = Word::parse("ababab").unwrap();
    assert_eq!(w.classify(rep4.mu_is_four), ElementClass::ConjPowerAB);
    assert_eq!(classify_matrix(&rep4.matrix_of(&w)), IsomClass::Parabolic);
    assert_eq!(w.classify(rep9.mu_is_four), ElementClass::PseudoAnosov);
    assert_eq!(classify_matrix(&rep9.matrix_of(&w)), IsomClass::Hyperbolic);
}

#[test]
fn random_words_agree_on_the_hyperbolic_side() {
    // Pseudo-Anosov words of norm up to 40: the hyperbolic trace margin
    // grows with length, so the matrix class must match everywhere.
    for (entry, index) in [(2u64, 0u64), (3, 1)] {
        let rep = rep_mu(entry);
        let mut rng = stream(0xC0DE, 1 + index);
        let mut pa = 0;
        for _ in 0..2000 {
            let letters = 1 + uniform_below(&mut rng, 40);
            let w = random_letter_word(&mut rng, letters);
            let class = w.classify(rep.mu_is_four);
            if class != ElementClass::PseudoAnosov {
                continue;
            }
            pa += 1;
            assert_eq!(
                classify_matrix(&rep.matrix_of(&w)),
                IsomClass::Hyperbolic,
                "word {w} at μ = {}",
                rep.mu
            );
        }
        assert!(pa > 1000, "too few pseudo-Anosov samples: {pa}");
    }
}

#[test]
fn identity_class_is_exact() {
    let rep = rep_mu(2);
    let w = Word::parse("abBA").unwrap();
    assert!(w.is_identity());
    assert_eq!(w.classify(true), ElementClass::Identity);
    assert_eq!(classify_matrix(&rep.matrix_of(&w)), IsomClass::Identity);
}
