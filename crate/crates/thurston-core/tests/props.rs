//! Property-based invariants for words, matrices, and their interplay.

use proptest::prelude::*;

use thurston_core::bounds::AUDIT_TOL;
use thurston_core::construction::{build_representation, IntersectionData, ThurstonRep};
use thurston_core::geometry::{log_stretch_factor, teich_displacement, word_matrix};
use thurston_core::words::ElementClass;
use thurston_core::{Generator, Word};

fn rep_mu(entry: u64) -> ThurstonRep {
    build_representation(&IntersectionData::new(vec![vec![entry]]).unwrap()).unwrap()
}

/// Words with up to `syllables` parts and exponents in `±max_exp`.
fn word_strategy(syllables: usize, max_exp: i64) -> impl Strategy<Value = Word> {
    prop::collection::vec((any::<bool>(), -max_exp..=max_exp), 0..=syllables).prop_map(|parts| {
        Word::from_parts(parts.into_iter().map(|(is_a, e)| {
            (if is_a { Generator::A } else { Generator::B }, e)
        }))
    })
}

proptest! {
    #[test]
    fn inverse_is_an_involution_and_antihomomorphism(
        u in word_strategy(8, 5),
        v in word_strategy(8, 5),
    ) {
        prop_assert_eq!(u.inverse().inverse(), u.clone());
        prop_assert_eq!(
            u.concat(&v).inverse(),
            v.inverse().concat(&u.inverse())
        );
        prop_assert!(u.concat(&u.inverse()).is_identity());
    }

    #[test]
    fn concatenation_is_associative_and_subadditive(
        u in word_strategy(6, 4),
        v in word_strategy(6, 4),
        w in word_strategy(6, 4),
    ) {
        prop_assert_eq!(u.concat(&v).concat(&w), u.concat(&v.concat(&w)));
        prop_assert!(u.concat(&v).norm() <= u.norm() + v.norm());
        prop_assert_eq!(u.concat(&Word::identity()), u.clone());
        prop_assert_eq!(Word::identity().concat(&u), u);
    }

    #[test]
    fn cyclic_reduction_postconditions(w in word_strategy(10, 6)) {
        let r = w.cyclic_reduce();
        // Rebuild: w = conjugator · core · conjugator⁻¹.
        let rebuilt = r.conjugator.concat(&r.core).concat(&r.conjugator.inverse());
        prop_assert_eq!(&rebuilt, &w);
        // The core is cyclically reduced: its ends do not cancel.
        let syl = r.core.syllables();
        if syl.len() >= 2 {
            let first = syl[0];
            let last = syl[syl.len() - 1];
            prop_assert!(
                first.base != last.base
                    || first.exponent.signum() == last.exponent.signum()
            );
        }
        prop_assert!(r.core.norm() <= w.norm());
        prop_assert_eq!(r.core.cyclic_reduce().core, r.core.clone());
    }

    #[test]
    fn classification_is_conjugation_and_inversion_invariant(
        w in word_strategy(8, 4),
        g in word_strategy(5, 3),
        mu_is_four in any::<bool>(),
    ) {
        let conjugate = g.concat(&w).concat(&g.inverse());
        prop_assert_eq!(w.classify(mu_is_four), conjugate.classify(mu_is_four));
        prop_assert_eq!(w.classify(mu_is_four), w.inverse().classify(mu_is_four));
    }

    #[test]
    fn abelianization_is_a_homomorphism(
        u in word_strategy(8, 5),
        v in word_strategy(8, 5),
    ) {
        let ab = u.concat(&v).abelianize();
        let (au, av) = (u.abelianize(), v.abelianize());
        prop_assert_eq!(ab.a, au.a + av.a);
        prop_assert_eq!(ab.b, au.b + av.b);
        let inv = u.inverse().abelianize();
        prop_assert_eq!((inv.a, inv.b), (-au.a, -au.b));
    }

    #[test]
    fn word_matrix_is_a_homomorphism(
        u in word_strategy(5, 3),
        v in word_strategy(5, 3),
    ) {
        // ρ(u·v) = ρ(u)·ρ(v), compared in the normalized representation
        // (max-abs entry pinned to 1), which is unique up to rounding.
        // Heavy cancellation in u·v makes the matrix product lose the small
        // true result to rounding (error ~ ‖ρ(u)‖·‖ρ(v)‖·ε), so the
        // property is asserted for boundedly-cancelling pairs.
        prop_assume!(u.norm() + v.norm() <= u.concat(&v).norm() + 8);
        let sqrt_mu = 2.0;
        let lhs = word_matrix(&u.concat(&v), sqrt_mu);
        let rhs = word_matrix(&u, sqrt_mu).mul(&word_matrix(&v, sqrt_mu));
        for i in 0..2 {
            for j in 0..2 {
                prop_assert!(
                    (lhs.m[i][j] - rhs.m[i][j]).abs() <= 1e-9,
                    "entry ({i},{j}): {} vs {}", lhs.m[i][j], rhs.m[i][j]
                );
            }
        }
        prop_assert!(
            (lhs.log_scale - rhs.log_scale).abs()
                <= 1e-9 * lhs.log_scale.abs().max(1.0)
        );
    }

    #[test]
    fn displacement_properties(w in word_strategy(8, 5), g in word_strategy(8, 5)) {
        let sqrt_mu = 2.0;
        let mw = word_matrix(&w, sqrt_mu);
        let mg = word_matrix(&g, sqrt_mu);
        // Symmetry is exact: the adjugate inverse has the same entry set.
        prop_assert_eq!(teich_displacement(&mw), teich_displacement(&mw.inverse()));
        prop_assert!(teich_displacement(&mw) >= 0.0);
        // Triangle inequality for the induced metric.
        let product = mw.mul(&mg);
        prop_assert!(
            teich_displacement(&product)
                <= teich_displacement(&mw) + teich_displacement(&mg) + 1e-9
        );
    }

    #[test]
    fn stretch_factor_bounds_hold_along_random_words(w in word_strategy(9, 4)) {
        for rep in [rep_mu(2), rep_mu(3)] {
            if w.classify(rep.mu_is_four) != ElementClass::PseudoAnosov {
                continue;
            }
            let mat = rep.matrix_of(&w);
            let Ok(log_lambda) = log_stretch_factor(&mat) else {
                continue;
            };
            // Bers: translation length ≤ base-point displacement.
            prop_assert!(log_lambda <= teich_displacement(&mat) + 1e-9);
            // Inversion invariance of the spectrum.
            let back = log_stretch_factor(&mat.inverse()).unwrap();
            prop_assert!((log_lambda - back).abs() <= 1e-9 * log_lambda.max(1.0));
            // The closed-form upper bound, word-length version.
            let k = thurston_core::bounds::k_constant(rep.mu).unwrap();
            prop_assert!(
                log_lambda <= k * w.cyclic_norm() as f64 + AUDIT_TOL
            );
        }
    }
}
