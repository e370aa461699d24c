//! Small-cancellation analysis: pieces, the metric condition C′(1/λ), and
//! Dehn reduction.
//!
//! Everything here works on the *symmetrized* relator set: all cyclic
//! rotations of the relators and of their inverses. An *occurrence* of a word
//! `u` is a triple (relator, sign, start position) at which `u` can be read
//! off the cyclic relator word; `u` is a *piece* if it has two distinct
//! occurrences. Per relator we record the longest piece readable inside it
//! (capped at one letter less than the relator, so a relator duplicated
//! elsewhere scores length − 1 rather than "everything").
//!
//! Relators here routinely have runs like `a₂^40000`, so all matching is done
//! on run-length views; nothing below is linear in the letter length except
//! the final slice extraction in Dehn reduction, which is linear in the
//! *output*.

use crate::par;
use crate::presentation::Presentation;
use crate::word::{Syllable, Word};
use serde::Serialize;
use thiserror::Error;

/// A cyclically reduced word viewed as a cyclic sequence of runs. Unlike a
/// linear [`Word`], runs that meet across the wraparound are merged, so
/// cyclically adjacent runs always use distinct generators (for words with
/// at least two runs).
#[derive(Clone, Debug)]
pub struct CyclicWord {
    runs: Vec<Syllable>,
    len: usize,
}

impl CyclicWord {
    pub fn from_word(word: &Word) -> CyclicWord {
        let reduced = word.cyclic_reduce();
        let mut runs: Vec<Syllable> = reduced.syllables().to_vec();
        if runs.len() >= 2 {
            let first = runs[0];
            let last = *runs.last().unwrap();
            if first.gen == last.gen {
                // Cyclic reducedness rules out opposite signs here.
                debug_assert_eq!(first.exp.signum(), last.exp.signum());
                let m = runs.len();
                runs[m - 1].exp += first.exp;
                runs.remove(0);
            }
        }
        let len = runs.iter().map(|s| s.len()).sum();
        CyclicWord { runs, len }
    }

    pub fn inverse(&self) -> CyclicWord {
        CyclicWord {
            runs: self.runs.iter().rev().map(|s| s.inverse()).collect(),
            len: self.len,
        }
    }

    /// Letter length of the cyclic word.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn runs(&self) -> &[Syllable] {
        &self.runs
    }

    /// Extract `count` letters starting at cyclic letter position `from`.
    fn slice(&self, from: usize, count: usize) -> Word {
        assert!(count <= self.len, "slice longer than the cyclic word");
        if count == 0 {
            return Word::identity();
        }
        let mut out: Vec<Syllable> = Vec::new();
        // Locate the run containing letter `from`.
        let from = from % self.len;
        let mut pos = 0usize;
        let mut run = 0usize;
        while pos + self.runs[run].len() <= from {
            pos += self.runs[run].len();
            run += 1;
        }
        let mut offset = from - pos; // letters of `run` to skip
        let mut remaining = count;
        while remaining > 0 {
            let s = self.runs[run % self.runs.len()];
            let avail = s.len() - offset;
            let take = avail.min(remaining);
            let sgn = if s.exp > 0 { 1 } else { -1 };
            out.push(Syllable::new(s.gen, sgn * take as i64));
            remaining -= take;
            offset = 0;
            run += 1;
        }
        Word::from_syllables(out)
    }
}

fn same_kind(a: Syllable, b: Syllable) -> bool {
    a.gen == b.gen && a.exp.signum() == b.exp.signum()
}

/// Length of the longest match extending rightward from the run boundaries
/// `p` (in `a`) and `q` (in `b`), both cyclic. Counts run-by-run: an exact
/// exponent match continues, a same-kind partial match contributes and stops.
fn extend_right(a: &CyclicWord, b: &CyclicWord, p: usize, q: usize) -> usize {
    let (ma, mb) = (a.runs.len(), b.runs.len());
    let cap = a.len.min(b.len);
    let mut len = 0usize;
    let mut step = 0usize;
    loop {
        let ra = a.runs[(p + step) % ma];
        let rb = b.runs[(q + step) % mb];
        if !same_kind(ra, rb) {
            break;
        }
        if ra.exp == rb.exp {
            len += ra.len();
            step += 1;
            if len >= cap {
                break;
            }
        } else {
            len += ra.len().min(rb.len());
            break;
        }
    }
    len.min(cap)
}

fn extend_left(a: &CyclicWord, b: &CyclicWord, p: usize, q: usize) -> usize {
    let (ma, mb) = (a.runs.len(), b.runs.len());
    let cap = a.len.min(b.len);
    let mut len = 0usize;
    let mut step = 0usize;
    loop {
        let ra = a.runs[(p + ma - 1 - step % ma) % ma];
        let rb = b.runs[(q + mb - 1 - step % mb) % mb];
        if !same_kind(ra, rb) {
            break;
        }
        if ra.exp == rb.exp {
            len += ra.len();
            step += 1;
            if len >= cap {
                break;
            }
        } else {
            len += ra.len().min(rb.len());
            break;
        }
    }
    len.min(cap)
}

/// Longest common subword of two cyclic words, as letter count. With
/// `same_occurrence` set, the two arguments denote the *same* occurrence
/// word, so a match must use two distinct positions (the aligned identity
/// match is excluded; in-run self alignment is credited at one letter less).
///
/// Any common subword either stays inside a single run on both sides, or
/// contains a run boundary — and a boundary forces a generator change at the
/// same offset on both sides, so boundaries align pairwise. That makes the
/// enumeration below (run pairs + anchored boundary pairs) exhaustive.
fn max_common_cyclic(a: &CyclicWord, b: &CyclicWord, same_occurrence: bool) -> usize {
    let (ma, mb) = (a.runs.len(), b.runs.len());
    if ma == 0 || mb == 0 {
        return 0;
    }
    let cap = a.len.min(b.len);
    let mut best = 0usize;
    for (ia, ra) in a.runs.iter().enumerate() {
        for (ib, rb) in b.runs.iter().enumerate() {
            if !same_kind(*ra, *rb) {
                continue;
            }
            let cand = if same_occurrence && ia == ib {
                // A run shifted against itself: offsets differ by ≥ 1.
                ra.len() - 1
            } else {
                ra.len().min(rb.len())
            };
            best = best.max(cand);
        }
    }
    if ma >= 2 && mb >= 2 {
        for p in 0..ma {
            for q in 0..mb {
                if same_occurrence && p == q {
                    continue;
                }
                let total = extend_left(a, b, p, q) + extend_right(a, b, p, q);
                best = best.max(total.min(cap));
            }
        }
    }
    best.min(cap)
}

/// For each relator, the length of the longest piece readable inside it
/// (0 if it has no piece). Computed per relator against the full symmetrized
/// family, in parallel when the `parallel` feature is on.
pub fn piece_lengths(p: &Presentation) -> Vec<usize> {
    let words: Vec<CyclicWord> = p.relators().iter().map(CyclicWord::from_word).collect();
    let inverses: Vec<CyclicWord> = words.iter().map(CyclicWord::inverse).collect();
    par::par_map_range(words.len(), |i| {
        let a = &words[i];
        if a.len == 0 {
            return 0;
        }
        let mut best = 0usize;
        for j in 0..words.len() {
            best = best.max(max_common_cyclic(a, &words[j], i == j));
            best = best.max(max_common_cyclic(a, &inverses[j], false));
        }
        best.min(a.len - 1)
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct RelatorMetric {
    pub index: usize,
    /// Letter length of the cyclically reduced relator.
    pub length: usize,
    pub max_piece: usize,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct MetricReport {
    pub lambda: u64,
    pub satisfied: bool,
    pub relators: Vec<RelatorMetric>,
}

impl MetricReport {
    /// The relator with the worst piece-to-length ratio, if any.
    pub fn worst(&self) -> Option<&RelatorMetric> {
        self.relators
            .iter()
            .max_by(|x, y| (x.max_piece * y.length).cmp(&(y.max_piece * x.length)))
    }
}

/// Check the metric small-cancellation condition C′(1/λ): every piece of
/// every relator must be strictly shorter than `length / λ`. All arithmetic
/// is exact (no floats). An identity relator never satisfies the condition.
pub fn check_metric(p: &Presentation, lambda: u64) -> MetricReport {
    let pieces = piece_lengths(p);
    let relators: Vec<RelatorMetric> = p
        .relators()
        .iter()
        .zip(&pieces)
        .enumerate()
        .map(|(index, (r, &max_piece))| {
            let length = r.cyclic_reduce().len();
            let ok = length > 0 && (lambda as u128) * (max_piece as u128) < length as u128;
            RelatorMetric {
                index,
                length,
                max_piece,
                ok,
            }
        })
        .collect();
    MetricReport {
        lambda,
        satisfied: relators.iter().all(|r| r.ok),
        relators,
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DehnError {
    #[error(
        "Dehn reduction requires C'(1/6); relator {index} (length {length}) has a piece of length {piece}"
    )]
    MetricNotSatisfied {
        index: usize,
        length: usize,
        piece: usize,
    },
}

#[derive(Clone, Debug)]
pub struct DehnOutcome {
    /// The reduced word: no subword remains that covers more than half of a
    /// symmetrized relator, and the word is cyclically reduced.
    pub word: Word,
    /// Number of replacement steps performed.
    pub steps: usize,
}

impl DehnOutcome {
    /// Under C′(1/6) this is exact: the input represents the identity iff
    /// reduction terminates at the empty word (Greendlinger's lemma).
    pub fn is_trivial(&self) -> bool {
        self.word.is_identity()
    }
}

/// One candidate replacement site in the word being reduced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct HalfMatch {
    start: usize,     // letter position in w
    len: usize,       // letters matched
    rel: usize,       // index into the prepared symmetrized family
    rot: usize,       // letter position in the relator where the match begins
}

impl HalfMatch {
    /// Leftmost-longest, then lowest relator id, then lowest rotation.
    fn better_than(&self, other: &HalfMatch) -> bool {
        (self.start, std::cmp::Reverse(self.len), self.rel, self.rot)
            < (other.start, std::cmp::Reverse(other.len), other.rel, other.rot)
    }
}

/// Search `w` (a linear word) for a subword matching more than half of one of
/// the cyclic relator words.
fn find_half_match(w: &Word, rels: &[CyclicWord]) -> Option<HalfMatch> {
    let runs = w.syllables();
    let mw = runs.len();
    // Letter positions where each run of w starts.
    let mut run_start = Vec::with_capacity(mw + 1);
    let mut acc = 0usize;
    for s in runs {
        run_start.push(acc);
        acc += s.len();
    }
    run_start.push(acc);
    let w_len = acc;

    let mut best: Option<HalfMatch> = None;
    let mut consider = |cand: HalfMatch| {
        if 2 * cand.len > rels[cand.rel].len
            && best.map_or(true, |b| cand.better_than(&b))
        {
            best = Some(cand);
        }
    };

    for (rel_id, rel) in rels.iter().enumerate() {
        let mr = rel.runs.len();
        if mr == 0 {
            continue;
        }
        // Matches inside a single run of w and a single run of the relator.
        let mut rel_pos = 0usize;
        for rr in rel.runs.iter() {
            for (iw, rw) in runs.iter().enumerate() {
                if !same_kind(*rw, *rr) {
                    continue;
                }
                // A single-run cyclic word can supply up to its full length.
                let rel_avail = if mr == 1 { rel.len } else { rr.len() };
                let len = rw.len().min(rel_avail);
                consider(HalfMatch {
                    start: run_start[iw],
                    len,
                    rel: rel_id,
                    rot: rel_pos,
                });
            }
            rel_pos += rr.len();
        }
        // Matches spanning run boundaries: anchor an interior boundary of w
        // against each cyclic boundary of the relator.
        if mw >= 2 && mr >= 2 {
            let mut rel_bpos = vec![0usize; mr];
            let mut acc_r = 0usize;
            for (j, rr) in rel.runs.iter().enumerate() {
                rel_bpos[j] = acc_r;
                acc_r += rr.len();
            }
            for bw in 1..mw {
                for q in 0..mr {
                    // Rightward: runs bw.., q.. (relator cyclic).
                    let mut right = 0usize;
                    let mut step = 0usize;
                    loop {
                        if bw + step >= mw {
                            break;
                        }
                        let ra = runs[bw + step];
                        let rb = rel.runs[(q + step) % mr];
                        if !same_kind(ra, rb) {
                            break;
                        }
                        if ra.exp == rb.exp {
                            right += ra.len();
                            step += 1;
                            if right >= rel.len {
                                break;
                            }
                        } else {
                            right += ra.len().min(rb.len());
                            break;
                        }
                    }
                    // Leftward: runs bw-1.., q-1.. .
                    let mut left = 0usize;
                    let mut step = 0usize;
                    loop {
                        if step >= bw {
                            break;
                        }
                        let ra = runs[bw - 1 - step];
                        let rb = rel.runs[(q + mr - 1 - step % mr) % mr];
                        if !same_kind(ra, rb) {
                            break;
                        }
                        if ra.exp == rb.exp {
                            left += ra.len();
                            step += 1;
                            if left >= rel.len {
                                break;
                            }
                        } else {
                            left += ra.len().min(rb.len());
                            break;
                        }
                    }
                    let total = (left + right).min(rel.len);
                    if total == 0 {
                        continue;
                    }
                    // When clipped to rel.len, keep the left end: the match
                    // still begins at start and reads `total` letters.
                    let len = total.min(w_len - (run_start[bw] - left));
                    consider(HalfMatch {
                        start: run_start[bw] - left,
                        len,
                        rel: rel_id,
                        rot: (rel_bpos[q] + rel.len - (left % rel.len)) % rel.len,
                    });
                }
            }
        }
    }
    best
}

/// Dehn's algorithm: repeatedly cyclically reduce and replace any subword
/// that covers more than half of a symmetrized relator by the inverse of the
/// relator's complementary part. Requires the presentation to satisfy
/// C′(1/6), which makes the empty-word outcome a complete triviality test.
///
/// Cyclic reduction conjugates, so the result is a reduced form of a
/// *conjugate* of the input; trivial stays trivial both ways.
pub fn dehn_reduce(p: &Presentation, w: &Word) -> Result<DehnOutcome, DehnError> {
    let metric = check_metric(p, 6);
    if let Some(bad) = metric.relators.iter().find(|r| !r.ok) {
        return Err(DehnError::MetricNotSatisfied {
            index: bad.index,
            length: bad.length,
            piece: bad.max_piece,
        });
    }
    // Symmetrized family: (r₀, +), (r₀, −), (r₁, +), … — index order is the
    // tie-breaking order for match selection.
    let mut rels: Vec<CyclicWord> = Vec::with_capacity(2 * p.relators().len());
    for r in p.relators() {
        let c = CyclicWord::from_word(r);
        let inv = c.inverse();
        rels.push(c);
        rels.push(inv);
    }

    let mut word = w.cyclic_reduce();
    let mut steps = 0usize;
    loop {
        if word.is_identity() {
            break;
        }
        let Some(m) = find_half_match(&word, &rels) else {
            break;
        };
        let rel = &rels[m.rel];
        // word = prefix · u · suffix with u = rel[rot .. rot+len); replace u
        // by the inverse of the complementary arc rel[rot+len .. rot+n).
        let complement = rel.slice(m.rot + m.len, rel.len - m.len);
        let prefix = take_letters(&word, 0, m.start);
        let suffix = take_letters(&word, m.start + m.len, word.len() - m.start - m.len);
        let replaced = prefix.concat(&complement.inverse()).concat(&suffix);
        debug_assert!(replaced.len() < word.len(), "Dehn step failed to shorten");
        word = replaced.cyclic_reduce();
        steps += 1;
    }
    Ok(DehnOutcome { word, steps })
}

/// Letters `[from, from+count)` of a linear word, as a word.
fn take_letters(w: &Word, from: usize, count: usize) -> Word {
    if count == 0 {
        return Word::identity();
    }
    let mut out: Vec<Syllable> = Vec::new();
    let mut pos = 0usize;
    for s in w.syllables() {
        let run_len = s.len();
        let lo = from.max(pos);
        let hi = (from + count).min(pos + run_len);
        if lo < hi {
            let sgn = if s.exp > 0 { 1 } else { -1 };
            out.push(Syllable::new(s.gen, sgn * (hi - lo) as i64));
        }
        pos += run_len;
        if pos >= from + count {
            break;
        }
    }
    Word::from_syllables(out)
}

/// Allocator for the padding-word family: positive words a₁a₂^{v}a₁a₂^{v+1}⋯
/// whose a₂-run lengths are drawn from one strictly increasing global
/// sequence. Within a word runs strictly increase; across words the run
/// values occupy disjoint windows. Any common subword of two distinct such
/// words (or of a word against a shifted copy of itself) therefore contains
/// no a₂-run that is flanked by a₁ on both sides — such a run's length
/// pins it to a unique position — so it is confined to one adjacent-run
/// window: at most two (possibly full) runs and the separator between them.
#[derive(Debug)]
pub(crate) struct PadMinter {
    a1: u32,
    a2: u32,
    next_value: i64,
}

impl PadMinter {
    pub(crate) fn new(a1: u32, a2: u32) -> Self {
        assert_ne!(a1, a2, "padding alphabet letters must be distinct");
        PadMinter {
            a1,
            a2,
            next_value: 1,
        }
    }

    pub(crate) fn fresh_value(&mut self) -> i64 {
        let v = self.next_value;
        self.next_value += 1;
        v
    }

    /// Largest run value handed out so far (0 if none).
    pub(crate) fn global_max(&self) -> i64 {
        self.next_value - 1
    }

    /// Append blocks a₁a₂^{v} with fresh ascending values until the word has
    /// length ≥ `min_len` and its largest adjacent-run window (two last run
    /// values plus the separators, plus `extra` letters of surrounding
    /// context the caller expects pieces to extend into) is smaller than
    /// 1/`margin` of the word's length.
    pub(crate) fn mint_word(&mut self, min_len: usize, margin: u64, extra: usize) -> Word {
        assert!(margin >= 1);
        let mut w = Word::identity();
        let mut last = 0i64;
        loop {
            let v = self.fresh_value();
            w = w
                .concat(&Word::letter(self.a1, 1))
                .concat(&Word::letter(self.a2, v));
            let prev = last;
            last = v;
            let len = w.len() as u128;
            let window = (prev + last) as u128 + 2 + extra as u128;
            if w.len() >= min_len && (margin as u128) * window < len {
                return w;
            }
        }
    }
}

/// The deterministic padding-word family: `n` pairwise distinct positive
/// words over the two letters `a1`, `a2`, each of length ≥ `l`, in the block
/// form a₁a₂^{k}a₁a₂^{k+1}⋯ with strictly increasing run lengths and
/// disjoint run-length windows across different words. Common subwords of
/// distinct outputs are confined to a single adjacent-run window, kept below
/// a tenth of each word's length, so the presentation on {a₁, a₂} with these
/// words as relators satisfies the metric condition C′(1/10).
pub fn rips_pad_words(n: usize, l: usize, a1: u32, a2: u32) -> Vec<Word> {
    assert!(n >= 1, "need at least one padding word");
    assert!(l >= 1, "base length must be positive");
    let mut minter = PadMinter::new(a1, a2);
    (0..n).map(|_| minter.mint_word(l, 10, 0)).collect()
}
