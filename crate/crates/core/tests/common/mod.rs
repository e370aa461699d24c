//! Shared brute-force machinery for the integration suites: a library of
//! finite groups given both by a presentation and by an explicit faithful
//! permutation model, plus letter-level oracles recomputing engine results
//! by the dumbest correct method available.

#![allow(dead_code)]

use fpwb_core::presentation::Presentation;
use fpwb_core::word::{Syllable, Word};
use std::collections::{BTreeSet, HashMap};

pub fn w(pairs: &[(u32, i64)]) -> Word {
    Word::from_syllables(pairs.iter().map(|&(g, e)| Syllable::new(g, e)))
}

// ---------------------------------------------------------------------------
// Permutations (point-image vectors) and word evaluation.
// ---------------------------------------------------------------------------

pub type Perm = Vec<usize>;

pub fn perm_identity(n: usize) -> Perm {
    (0..n).collect()
}

/// `a` then `b`: the returned permutation sends x to b[a[x]].
pub fn perm_compose(a: &Perm, b: &Perm) -> Perm {
    a.iter().map(|&x| b[x]).collect()
}

pub fn perm_inverse(a: &Perm) -> Perm {
    let mut inv = vec![0; a.len()];
    for (x, &y) in a.iter().enumerate() {
        inv[y] = x;
    }
    inv
}

/// Evaluate a word letter by letter, applying earlier letters first.
pub fn eval_word(gens: &[Perm], word: &Word) -> Perm {
    let n = gens.first().map_or(1, Vec::len);
    let mut acc = perm_identity(n);
    for (g, sign) in word.letters() {
        let step = if sign > 0 {
            gens[g as usize].clone()
        } else {
            perm_inverse(&gens[g as usize])
        };
        acc = perm_compose(&acc, &step);
    }
    acc
}

// ---------------------------------------------------------------------------
// A finite group materialized from permutation generators: element list,
// multiplication by ids, and one word per element over the presentation's
// generators (breadth-first, so generators get single-letter words).
// ---------------------------------------------------------------------------

pub struct PermGroup {
    pub elems: Vec<Perm>,
    pub ids: HashMap<Perm, usize>,
    /// A word over the presentation's generators evaluating to each element.
    pub words: Vec<Word>,
    pub gens: Vec<Perm>,
}

impl PermGroup {
    pub fn generate(gens: &[Perm]) -> PermGroup {
        let n = gens.first().map_or(1, Vec::len);
        let mut elems = vec![perm_identity(n)];
        let mut ids = HashMap::new();
        ids.insert(elems[0].clone(), 0usize);
        let mut words = vec![Word::identity()];
        let mut frontier = vec![0usize];
        while let Some(id) = frontier.pop() {
            let base = elems[id].clone();
            let base_word = words[id].clone();
            for (g, perm) in gens.iter().enumerate() {
                for sign in [1i64, -1] {
                    let step = if sign > 0 { perm.clone() } else { perm_inverse(perm) };
                    let next = perm_compose(&base, &step);
                    if !ids.contains_key(&next) {
                        let next_id = elems.len();
                        ids.insert(next.clone(), next_id);
                        elems.push(next);
                        words.push(base_word.concat(&Word::letter(g as u32, sign)));
                        frontier.push(next_id);
                    }
                }
            }
        }
        PermGroup {
            elems,
            ids,
            words,
            gens: gens.to_vec(),
        }
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn id_of(&self, p: &Perm) -> usize {
        self.ids[p]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.ids[&perm_compose(&self.elems[a], &self.elems[b])]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.ids[&perm_inverse(&self.elems[a])]
    }

    /// Element id of a word over the generators.
    pub fn eval(&self, word: &Word) -> usize {
        self.ids[&eval_word(&self.gens, word)]
    }

    /// Close a set of element ids into a subgroup (as a sorted id set).
    pub fn close_subgroup(&self, seed: &[usize]) -> BTreeSet<usize> {
        let mut sub: BTreeSet<usize> = BTreeSet::new();
        sub.insert(0);
        let mut frontier: Vec<usize> = vec![0];
        while let Some(a) = frontier.pop() {
            for &s in seed {
                for b in [self.mul(a, s), self.mul(a, self.inv(s))] {
                    if sub.insert(b) {
                        frontier.push(b);
                    }
                }
            }
        }
        sub
    }

    /// Every subgroup, by closing all generating subsets of size ≤ 3. For
    /// groups of order ≤ 24 whose subgroups are all ≤ 3-generated (true of
    /// the whole fixture library) this is exhaustive.
    pub fn all_subgroups(&self) -> Vec<BTreeSet<usize>> {
        let n = self.order();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut push = |sub: BTreeSet<usize>, out: &mut Vec<BTreeSet<usize>>| {
            if seen.insert(sub.iter().copied().collect()) {
                out.push(sub);
            }
        };
        let mut out = Vec::new();
        push(self.close_subgroup(&[]), &mut out);
        for a in 0..n {
            push(self.close_subgroup(&[a]), &mut out);
            for b in (a + 1)..n {
                push(self.close_subgroup(&[a, b]), &mut out);
                for c in (b + 1)..n {
                    push(self.close_subgroup(&[a, b, c]), &mut out);
                }
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------
// The fixture library: classical presentations paired with faithful
// permutation models. Construction asserts that the permutations satisfy
// every relator and that the permutation group has the classical order, so
// a typo here fails loudly rather than silently skewing the oracles.
// ---------------------------------------------------------------------------

pub struct FixtureGroup {
    pub name: &'static str,
    pub presentation: Presentation,
    pub perm: PermGroup,
    pub order: usize,
}

fn fixture(
    name: &'static str,
    gens: &[&str],
    relators: &[&[(u32, i64)]],
    perm_gens: &[&[usize]],
    order: usize,
) -> FixtureGroup {
    let presentation = Presentation::new(
        gens.iter().map(|s| s.to_string()).collect(),
        relators.iter().map(|r| w(r)).collect(),
    )
    .unwrap();
    let perms: Vec<Perm> = perm_gens.iter().map(|p| p.to_vec()).collect();
    for r in presentation.relators() {
        assert!(
            eval_word(&perms, r) == perm_identity(perms[0].len()),
            "{name}: permutation model violates a relator"
        );
    }
    let perm = PermGroup::generate(&perms);
    assert_eq!(perm.order(), order, "{name}: permutation model has wrong order");
    FixtureGroup {
        name,
        presentation,
        perm,
        order,
    }
}

/// Finite groups of order ≤ 24 with classical presentations and models.
pub fn fixture_library() -> Vec<FixtureGroup> {
    vec![
        fixture("c1", &["a"], &[&[(0, 1)]], &[&[0]], 1),
        fixture("c2", &["a"], &[&[(0, 2)]], &[&[1, 0]], 2),
        fixture("c3", &["a"], &[&[(0, 3)]], &[&[1, 2, 0]], 3),
        fixture("c4", &["a"], &[&[(0, 4)]], &[&[1, 2, 3, 0]], 4),
        fixture(
            "v4",
            &["a", "b"],
            &[&[(0, 2)], &[(1, 2)], &[(0, 1), (1, 1), (0, 1), (1, 1)]],
            &[&[1, 0, 2, 3], &[0, 1, 3, 2]],
            4,
        ),
        fixture("c5", &["a"], &[&[(0, 5)]], &[&[1, 2, 3, 4, 0]], 5),
        fixture("c6", &["a"], &[&[(0, 6)]], &[&[1, 2, 3, 4, 5, 0]], 6),
        fixture(
            "s3",
            &["s", "t"],
            &[
                &[(0, 2)],
                &[(1, 2)],
                &[(0, 1), (1, 1), (0, 1), (1, 1), (0, 1), (1, 1)],
            ],
            &[&[1, 0, 2], &[0, 2, 1]],
            6,
        ),
        fixture("c8", &["a"], &[&[(0, 8)]], &[&[1, 2, 3, 4, 5, 6, 7, 0]], 8),
        fixture(
            "d4",
            &["r", "s"],
            &[&[(0, 4)], &[(1, 2)], &[(1, 1), (0, 1), (1, 1), (0, 1)]],
            &[&[1, 2, 3, 0], &[0, 3, 2, 1]],
            8,
        ),
        fixture(
            "q8",
            &["a", "b"],
            &[&[(0, 4)], &[(0, 2), (1, -2)], &[(1, 1), (0, 1), (1, -1), (0, 1)]],
            // Left-multiplication table of {1,-1,i,-i,j,-j,k,-k}.
            &[&[2, 3, 1, 0, 6, 7, 5, 4], &[4, 5, 7, 6, 1, 0, 2, 3]],
            8,
        ),
        fixture(
            "c3xc3",
            &["a", "b"],
            &[&[(0, 3)], &[(1, 3)], &[(0, 1), (1, 1), (0, -1), (1, -1)]],
            &[&[1, 2, 0, 3, 4, 5], &[0, 1, 2, 4, 5, 3]],
            9,
        ),
        fixture(
            "d5",
            &["r", "s"],
            &[&[(0, 5)], &[(1, 2)], &[(1, 1), (0, 1), (1, 1), (0, 1)]],
            &[&[1, 2, 3, 4, 0], &[0, 4, 3, 2, 1]],
            10,
        ),
        fixture(
            "a4",
            &["a", "b"],
            &[
                &[(0, 2)],
                &[(1, 3)],
                &[(0, 1), (1, 1), (0, 1), (1, 1), (0, 1), (1, 1)],
            ],
            &[&[1, 0, 3, 2], &[1, 2, 0, 3]],
            12,
        ),
        fixture(
            "d6",
            &["r", "s"],
            &[&[(0, 6)], &[(1, 2)], &[(1, 1), (0, 1), (1, 1), (0, 1)]],
            &[&[1, 2, 3, 4, 5, 0], &[0, 5, 4, 3, 2, 1]],
            12,
        ),
        fixture(
            "c12",
            &["a"],
            &[&[(0, 12)]],
            &[&[1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 0]],
            12,
        ),
        fixture(
            "s4",
            &["a", "b"],
            &[
                &[(0, 2)],
                &[(1, 3)],
                &[(0, 1), (1, 1), (0, 1), (1, 1), (0, 1), (1, 1), (0, 1), (1, 1)],
            ],
            &[&[1, 0, 2, 3], &[0, 2, 3, 1]],
            24,
        ),
    ]
}

// ---------------------------------------------------------------------------
// Letter-level piece oracle: quadratic scan over expanded letters, against
// which the run-level engine is checked.
// ---------------------------------------------------------------------------

type Letter = (u32, i8);

fn expand_letters(word: &Word) -> Vec<Letter> {
    word.letters().collect()
}

fn cyclic_reduce_letters(mut letters: Vec<Letter>) -> Vec<Letter> {
    while letters.len() >= 2 {
        let first = letters[0];
        let last = letters[letters.len() - 1];
        if first.0 == last.0 && first.1 == -last.1 {
            letters.remove(0);
            letters.pop();
        } else {
            break;
        }
    }
    letters
}

fn invert_letters(letters: &[Letter]) -> Vec<Letter> {
    letters.iter().rev().map(|&(g, s)| (g, -s)).collect()
}

/// Longest cyclic match between positions `sa` of `a` and `sb` of `b`,
/// counted letter by letter, never exceeding `cap`.
fn match_len(a: &[Letter], sa: usize, b: &[Letter], sb: usize, cap: usize) -> usize {
    let mut k = 0;
    while k < cap && a[(sa + k) % a.len()] == b[(sb + k) % b.len()] {
        k += 1;
    }
    k
}

/// The longest common cyclic subword of `a` and `b` over all pairs of start
/// positions; with `same_occurrence`, the two sides denote the same word and
/// aligned starts are excluded (a match may then wrap, so it is capped one
/// letter short of full length).
fn oracle_common(a: &[Letter], b: &[Letter], same_occurrence: bool) -> usize {
    if a.is_empty() || b.is_empty() {
        return 0;
    }
    let mut best = 0;
    for sa in 0..a.len() {
        for sb in 0..b.len() {
            if same_occurrence && sa == sb {
                continue;
            }
            let cap = if same_occurrence {
                a.len() - 1
            } else {
                a.len().min(b.len())
            };
            best = best.max(match_len(a, sa, b, sb, cap));
        }
    }
    best
}

/// Quadratic letter-level recomputation of the per-relator maximal piece
/// lengths: each relator against every relator and every inverse, aligned
/// identity excluded, capped at one letter below the relator's length.
pub fn piece_lengths_oracle(p: &Presentation) -> Vec<usize> {
    let words: Vec<Vec<Letter>> = p
        .relators()
        .iter()
        .map(|r| cyclic_reduce_letters(expand_letters(r)))
        .collect();
    let inverses: Vec<Vec<Letter>> = words.iter().map(|ls| invert_letters(ls)).collect();
    words
        .iter()
        .enumerate()
        .map(|(i, a)| {
            if a.is_empty() {
                return 0;
            }
            let mut best = 0;
            for (j, b) in words.iter().enumerate() {
                best = best.max(oracle_common(a, b, i == j));
            }
            for inv in &inverses {
                best = best.max(oracle_common(a, inv, false));
            }
            best.min(a.len() - 1)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Epimorphism enumeration between permutation-modelled fixture groups.
// ---------------------------------------------------------------------------

/// Every epimorphism from `g` onto `q`, as the list of image element ids of
/// `g`'s presentation generators (one entry per generator).
pub fn all_epimorphisms(g: &FixtureGroup, q: &FixtureGroup) -> Vec<Vec<usize>> {
    let ng = g.presentation.n_gens() as usize;
    let mut out = Vec::new();
    let mut images = vec![0usize; ng];
    enumerate_epis(g, q, 0, &mut images, &mut out);
    out
}

fn enumerate_epis(
    g: &FixtureGroup,
    q: &FixtureGroup,
    pos: usize,
    images: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if pos == images.len() {
        // Relators of g must map to the identity of q.
        let q_perm_images: Vec<Perm> = images.iter().map(|&e| q.perm.elems[e].clone()).collect();
        for r in g.presentation.relators() {
            if eval_word(&q_perm_images, r) != perm_identity(q_perm_images[0].len()) {
                return;
            }
        }
        // And the images must generate all of q.
        if q.perm.close_subgroup(images).len() == q.order {
            out.push(images.clone());
        }
        return;
    }
    for e in 0..q.order {
        images[pos] = e;
        enumerate_epis(g, q, pos + 1, images, out);
    }
}

/// A word over `q`'s presentation generators evaluating to element `e`,
/// preferring a verbatim single letter when `e` is a generator's element
/// (this maximizes the chance that a section exists).
pub fn word_for_element(q: &FixtureGroup, e: usize) -> Word {
    for g in 0..q.presentation.n_gens() {
        if q.perm.eval(&Word::letter(g, 1)) == e {
            return Word::letter(g, 1);
        }
    }
    q.perm.words[e].clone()
}
