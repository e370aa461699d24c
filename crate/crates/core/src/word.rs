//! Words in a free group, stored run-length encoded.
//!
//! A [`Word`] is a sequence of [`Syllable`]s `gen^exp`. The representation is
//! kept *freely reduced* at all times: exponents are nonzero and adjacent
//! syllables use distinct generators. Every constructor normalizes, so
//! structural equality of two `Word`s is equality in the free group.

use std::fmt;

/// A maximal run `gen^exp` inside a word. `exp` is never zero in a [`Word`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Syllable {
    pub gen: u32,
    pub exp: i64,
}

impl Syllable {
    pub fn new(gen: u32, exp: i64) -> Self {
        Syllable { gen, exp }
    }

    pub fn inverse(self) -> Self {
        Syllable {
            gen: self.gen,
            exp: -self.exp,
        }
    }

    /// Letter length of the run, `|exp|`.
    pub fn len(self) -> usize {
        self.exp.unsigned_abs() as usize
    }
}

/// A freely reduced word over generators `0..n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word {
    syllables: Vec<Syllable>,
}

/// Merge a syllable onto the end of a reduced syllable stack, preserving the
/// reduction invariant.
fn push_reduced(stack: &mut Vec<Syllable>, s: Syllable) {
    if s.exp == 0 {
        return;
    }
    match stack.last_mut() {
        Some(top) if top.gen == s.gen => {
            top.exp += s.exp;
            if top.exp == 0 {
                stack.pop();
            }
        }
        _ => stack.push(s),
    }
}

/// Freely reduce an arbitrary syllable sequence.
pub fn free_reduce_syllables<I: IntoIterator<Item = Syllable>>(syllables: I) -> Vec<Syllable> {
    let mut stack = Vec::new();
    for s in syllables {
        push_reduced(&mut stack, s);
    }
    stack
}

impl Word {
    /// The empty word.
    pub fn identity() -> Self {
        Word::default()
    }

    /// `gen^exp`, the identity if `exp == 0`.
    pub fn letter(gen: u32, exp: i64) -> Self {
        if exp == 0 {
            Word::identity()
        } else {
            Word {
                syllables: vec![Syllable { gen, exp }],
            }
        }
    }

    /// Build a word from any syllable sequence, freely reducing it.
    pub fn from_syllables<I: IntoIterator<Item = Syllable>>(syllables: I) -> Self {
        Word {
            syllables: free_reduce_syllables(syllables),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    /// Letter length: the sum of `|exp|` over all syllables.
    pub fn len(&self) -> usize {
        self.syllables.iter().map(|s| s.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Iterate over single letters as `(gen, sign)` with `sign = ±1`.
    pub fn letters(&self) -> impl Iterator<Item = (u32, i8)> + '_ {
        self.syllables.iter().flat_map(|s| {
            let sgn: i8 = if s.exp > 0 { 1 } else { -1 };
            std::iter::repeat((s.gen, sgn)).take(s.len())
        })
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut stack = self.syllables.clone();
        for &s in &other.syllables {
            push_reduced(&mut stack, s);
        }
        Word { syllables: stack }
    }

    pub fn inverse(&self) -> Word {
        Word {
            syllables: self.syllables.iter().rev().map(|s| s.inverse()).collect(),
        }
    }

    /// `self^n` for any integer `n`.
    pub fn pow(&self, n: i64) -> Word {
        if n == 0 || self.is_identity() {
            return Word::identity();
        }
        if self.syllables.len() == 1 {
            let s = self.syllables[0];
            return Word::letter(s.gen, s.exp * n);
        }
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut acc = Word::identity();
        for _ in 0..n.unsigned_abs() {
            acc = acc.concat(&base);
        }
        acc
    }

    /// The commutator `[self, other] = self · other · self⁻¹ · other⁻¹`.
    pub fn commutator(&self, other: &Word) -> Word {
        self.concat(other)
            .concat(&self.inverse())
            .concat(&other.inverse())
    }

    /// Largest generator index appearing in the word.
    pub fn max_gen(&self) -> Option<u32> {
        self.syllables.iter().map(|s| s.gen).max()
    }

    /// Does `gen` occur anywhere in the word?
    pub fn uses_gen(&self, gen: u32) -> bool {
        self.syllables.iter().any(|s| s.gen == gen)
    }

    /// Net exponent of `gen` (the image in the free abelianization).
    pub fn exponent_sum(&self, gen: u32) -> i64 {
        self.syllables
            .iter()
            .filter(|s| s.gen == gen)
            .map(|s| s.exp)
            .sum()
    }

    /// Cyclically reduce: repeatedly cancel inverse runs that meet across the
    /// wraparound. The result is conjugate to `self` and no shorter reduced
    /// word is conjugate to it.
    pub fn cyclic_reduce(&self) -> Word {
        let mut syl = self.syllables.clone();
        loop {
            if syl.len() < 2 {
                break;
            }
            let first = syl[0];
            let last = *syl.last().unwrap();
            if first.gen != last.gen || first.exp.signum() == last.exp.signum() {
                break;
            }
            let merged = first.exp + last.exp;
            syl.remove(0);
            if merged == 0 {
                syl.pop();
            } else {
                syl.last_mut().unwrap().exp = merged;
            }
        }
        Word { syllables: syl }
    }

    /// Is the word cyclically reduced (no cancellation across the wraparound)?
    pub fn is_cyclically_reduced(&self) -> bool {
        self.syllables.len() < 2 || {
            let first = self.syllables[0];
            let last = *self.syllables.last().unwrap();
            first.gen != last.gen || first.exp.signum() == last.exp.signum()
        }
    }

    /// Replace each generator by an arbitrary word. The callback receives the
    /// generator index; its image is raised to the syllable's exponent.
    pub fn substitute<F: Fn(u32) -> Word>(&self, f: F) -> Word {
        let mut acc: Vec<Syllable> = Vec::new();
        for &s in &self.syllables {
            let image = f(s.gen).pow(s.exp);
            for &t in image.syllables() {
                push_reduced(&mut acc, t);
            }
        }
        Word { syllables: acc }
    }

    /// Rename generators through `f`, preserving exponents. Unlike
    /// [`Word::substitute`] this cannot collapse anything as long as `f` is
    /// injective; the result is re-reduced regardless so the invariant holds
    /// for arbitrary `f`.
    pub fn rename_gens<F: Fn(u32) -> u32>(&self, f: F) -> Word {
        Word::from_syllables(
            self.syllables
                .iter()
                .map(|s| Syllable::new(f(s.gen), s.exp)),
        )
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "ε");
        }
        let mut first = true;
        for s in &self.syllables {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if s.exp == 1 {
                write!(f, "g{}", s.gen)?;
            } else {
                write!(f, "g{}^{}", s.gen, s.exp)?;
            }
        }
        Ok(())
    }
}
