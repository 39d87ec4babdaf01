//! Freely reduced words in the two Dehn-twist generators.
//!
//! Elements of the twist group `⟨T_A, T_B⟩` are written as words over the
//! alphabet `{a, b, A, B}` (lowercase = generator, uppercase = inverse) and
//! stored in run-length form: a list of syllables `(base, exponent)` with
//! nonzero exponents and adjacent syllables on distinct bases. All operations
//! keep words freely reduced.
//!
//! The combinatorial classification [`Word::classify`] implements the
//! free-group criterion for pseudo-Anosov elements: a nontrivial element
//! fails to be pseudo-Anosov exactly when it is conjugate into `⟨T_A⟩` or
//! `⟨T_B⟩`, and additionally — when `μ = 4` — into `⟨T_A T_B⟩` (whose
//! conjugates have cyclically reduced form a rotation of `(ab)^{±k}`).

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// One of the two Dehn-twist generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    /// The multitwist `T_A` (letter `a`).
    A,
    /// The multitwist `T_B` (letter `b`).
    B,
}

impl Generator {
    /// The other generator.
    pub fn other(self) -> Generator {
        match self {
            Generator::A => Generator::B,
            Generator::B => Generator::A,
        }
    }
}

/// A maximal run `base^exponent` inside a reduced word; `exponent != 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Syllable {
    pub base: Generator,
    pub exponent: i64,
}

/// Outcome of the combinatorial element classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ElementClass {
    /// The empty word.
    Identity,
    /// Conjugate to a nonzero power of `T_A` (reducible multitwist).
    ConjPowerA,
    /// Conjugate to a nonzero power of `T_B` (reducible multitwist).
    ConjPowerB,
    /// Conjugate to a nonzero power of `T_A T_B`; arises only when `μ = 4`,
    /// where that element is parabolic rather than pseudo-Anosov.
    ConjPowerAB,
    /// Pseudo-Anosov.
    PseudoAnosov,
}

impl ElementClass {
    /// Stable lowercase tag used in CSV output.
    pub fn tag(self) -> &'static str {
        match self {
            ElementClass::Identity => "identity",
            ElementClass::ConjPowerA => "conj_a",
            ElementClass::ConjPowerB => "conj_b",
            ElementClass::ConjPowerAB => "conj_ab",
            ElementClass::PseudoAnosov => "pseudo_anosov",
        }
    }
}

/// Image of a word in the abelianization `ℤ² = ⟨T_A⟩ × ⟨T_B⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct AbelianImage {
    /// Total exponent of `T_A`.
    pub a: i64,
    /// Total exponent of `T_B`.
    pub b: i64,
}

/// Error from [`Word::parse`] / [`Word::parse_reduced`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WordParseError {
    /// A character outside `{a, b, A, B}` was encountered.
    #[error("invalid character {ch:?} at byte {index}; words use only a, b, A, B")]
    InvalidCharacter { ch: char, index: usize },
    /// Strict parsing found a cancelling letter pair (e.g. `aA`).
    #[error("word is not freely reduced: cancellation at byte {index}")]
    NotReduced { index: usize },
}

/// Result of cyclic reduction: `word = conjugator · core · conjugator⁻¹`
/// with `core` cyclically reduced (its first and last letters are not
/// mutually inverse) and of minimal length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicReduction {
    pub core: Word,
    pub conjugator: Word,
}

/// A freely reduced word over `{T_A^{±1}, T_B^{±1}}` in run-length form.
///
/// Invariants: every exponent is nonzero and adjacent syllables have
/// distinct bases. The empty word is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    syllables: Vec<Syllable>,
}

impl Word {
    /// The identity element (empty word).
    pub fn identity() -> Word {
        Word::default()
    }

    /// Builds a reduced word from `(base, exponent)` parts, cancelling and
    /// merging as needed; parts with exponent 0 are skipped.
    pub fn from_parts(parts: impl IntoIterator<Item = (Generator, i64)>) -> Word {
        let mut w = Word::identity();
        for (base, exponent) in parts {
            w.push_part(base, exponent);
        }
        w
    }

    /// A single-generator power `base^exponent`.
    pub fn power(base: Generator, exponent: i64) -> Word {
        Word::from_parts([(base, exponent)])
    }

    /// Parses word text over `{a, b, A, B}`, freely reducing the result.
    /// Lowercase letters are generators, uppercase their inverses; any other
    /// character is rejected. The empty string parses to the identity.
    pub fn parse(text: &str) -> Result<Word, WordParseError> {
        Self::parse_impl(text, false)
    }

    /// Like [`Word::parse`] but rejects input that is not already freely
    /// reduced (i.e. contains a cancelling pair such as `aA` or `Bb`).
    pub fn parse_reduced(text: &str) -> Result<Word, WordParseError> {
        Self::parse_impl(text, true)
    }

    fn parse_impl(text: &str, strict: bool) -> Result<Word, WordParseError> {
        let mut w = Word::identity();
        for (index, ch) in text.char_indices() {
            let (base, sign) = match ch {
                'a' => (Generator::A, 1),
                'A' => (Generator::A, -1),
                'b' => (Generator::B, 1),
                'B' => (Generator::B, -1),
                _ => return Err(WordParseError::InvalidCharacter { ch, index }),
            };
            if strict {
                if let Some(last) = w.syllables.last() {
                    if last.base == base && last.exponent.signum() == -sign {
                        return Err(WordParseError::NotReduced { index });
                    }
                }
            }
            w.push_part(base, sign);
        }
        Ok(w)
    }

    /// The syllables of the word, in order.
    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    /// True for the identity (empty word).
    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Word norm: the number of letters `|w|` (sum of `|exponent|`).
    pub fn norm(&self) -> u64 {
        self.syllables
            .iter()
            .map(|s| s.exponent.unsigned_abs())
            .sum()
    }

    /// Cyclic norm: the word norm of the cyclically reduced core.
    pub fn cyclic_norm(&self) -> u64 {
        self.cyclic_reduce().core.norm()
    }

    /// Appends `base^exponent` to the end, keeping the word reduced.
    pub fn push_part(&mut self, base: Generator, exponent: i64) {
        if exponent == 0 {
            return;
        }
        if let Some(last) = self.syllables.last_mut() {
            if last.base == base {
                let merged = last.exponent + exponent;
                if merged == 0 {
                    self.syllables.pop();
                } else {
                    last.exponent = merged;
                }
                return;
            }
        }
        self.syllables.push(Syllable { base, exponent });
    }

    /// In-place right concatenation: `self ← self · other`, freely reduced.
    /// Amortized cost is `O(|other| in syllables)` plus cancellations.
    pub fn push_word(&mut self, other: &Word) {
        for s in &other.syllables {
            self.push_part(s.base, s.exponent);
        }
    }

    /// The reduced product `self · other`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        w.push_word(other);
        w
    }

    /// The inverse word (syllables reversed, exponents negated).
    pub fn inverse(&self) -> Word {
        Word {
            syllables: self
                .syllables
                .iter()
                .rev()
                .map(|s| Syllable {
                    base: s.base,
                    exponent: -s.exponent,
                })
                .collect(),
        }
    }

    /// The reduced power `self^k` (negative `k` uses the inverse).
    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut w = Word::identity();
        for _ in 0..k.unsigned_abs() {
            w.push_word(&base);
        }
        w
    }

    /// Cyclic reduction by repeatedly stripping matching first/last letters.
    ///
    /// Returns `(core, conjugator)` with
    /// `self = conjugator · core · conjugator⁻¹`, the core cyclically reduced
    /// and of minimal length among all such decompositions.
    pub fn cyclic_reduce(&self) -> CyclicReduction {
        let mut syl = self.syllables.clone();
        let mut conjugator: Vec<Syllable> = Vec::new();
        let mut lo = 0usize;
        let mut hi = syl.len();
        while hi - lo >= 2 {
            let first = syl[lo];
            let last = syl[hi - 1];
            // Reduced words never place equal bases adjacently, so when the
            // outer bases match there are at least three syllables and the
            // ends cancel iff their exponents have opposite signs.
            if first.base != last.base || first.exponent.signum() != -last.exponent.signum() {
                break;
            }
            let strip = first.exponent.abs().min(last.exponent.abs());
            let sign = first.exponent.signum();
            conjugator.push(Syllable {
                base: first.base,
                exponent: sign * strip,
            });
            if first.exponent.abs() == strip {
                lo += 1;
            } else {
                syl[lo].exponent -= sign * strip;
            }
            if last.exponent.abs() == strip {
                hi -= 1;
            } else {
                syl[hi - 1].exponent += sign * strip;
            }
        }
        CyclicReduction {
            core: Word {
                syllables: syl[lo..hi].to_vec(),
            },
            conjugator: Word {
                syllables: conjugator,
            },
        }
    }

    /// Classifies the element combinatorially.
    ///
    /// * the empty word is [`ElementClass::Identity`];
    /// * a core on a single base is a conjugate of a twist power;
    /// * when `mu_is_four` is set, a core that is a cyclic rotation of
    ///   `(ab)^k` or `(ab)^{-k}` (all exponents `+1`, or all `-1`, with an
    ///   even number of syllables) is [`ElementClass::ConjPowerAB`];
    /// * everything else is pseudo-Anosov.
    ///
    /// The result is invariant under conjugation and inversion.
    pub fn classify(&self, mu_is_four: bool) -> ElementClass {
        Self::classify_core(&self.cyclic_reduce().core, mu_is_four)
    }

    /// Classification of a word already known to be cyclically reduced,
    /// skipping the reduction pass.
    pub(crate) fn classify_core(core: &Word, mu_is_four: bool) -> ElementClass {
        let syl = &core.syllables;
        if syl.is_empty() {
            return ElementClass::Identity;
        }
        if syl.iter().all(|s| s.base == Generator::A) {
            return ElementClass::ConjPowerA;
        }
        if syl.iter().all(|s| s.base == Generator::B) {
            return ElementClass::ConjPowerB;
        }
        if mu_is_four
            && syl.len().is_multiple_of(2)
            && (syl.iter().all(|s| s.exponent == 1) || syl.iter().all(|s| s.exponent == -1))
        {
            // Bases already alternate in a reduced word, so an even count of
            // unit-exponent syllables is exactly a rotation of (ab)^{±k}.
            return ElementClass::ConjPowerAB;
        }
        ElementClass::PseudoAnosov
    }

    /// Image in the abelianization: total exponents of each generator.
    pub fn abelianize(&self) -> AbelianImage {
        let mut image = AbelianImage::default();
        for s in &self.syllables {
            match s.base {
                Generator::A => image.a += s.exponent,
                Generator::B => image.b += s.exponent,
            }
        }
        image
    }

    /// Renders the word in letter syntax (`a`, `b` generators; `A`, `B`
    /// inverses); the identity renders as the empty string.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.norm() as usize);
        for s in &self.syllables {
            let ch = match (s.base, s.exponent > 0) {
                (Generator::A, true) => 'a',
                (Generator::A, false) => 'A',
                (Generator::B, true) => 'b',
                (Generator::B, false) => 'B',
            };
            for _ in 0..s.exponent.unsigned_abs() {
                out.push(ch);
            }
        }
        out
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}
