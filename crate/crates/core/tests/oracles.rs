//! Engine-against-oracle agreement: every core algorithm is replayed here by
//! a slower, independently written method — explicit permutation models for
//! coset enumeration, letter-level scans for pieces, and algebraic
//! re-verification for Smith normal form — and the answers must match
//! exactly.

mod common;

use common::*;
use fpwb_core::coset::enumerate;
use fpwb_core::intmat::IntMatrix;
use fpwb_core::lowindex::low_index_subgroups;
use fpwb_core::presentation::Presentation;
use fpwb_core::smallcanc::piece_lengths;
use fpwb_core::spectrum::quotient_spectrum;
use fpwb_core::word::{Syllable, Word};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::collections::BTreeSet;

const TC_BUDGET: usize = 100_000;

// ---------------------------------------------------------------------------
// Smith normal form.
// ---------------------------------------------------------------------------

#[test]
fn snf_on_a_thousand_random_matrices() {
    let mut rng = StdRng::seed_from_u64(0x5EED_CAFE);
    for trial in 0..1000 {
        let rows = rng.gen_range(1..=8);
        let cols = rng.gen_range(1..=8);
        let entries: Vec<Vec<i64>> = (0..rows)
            .map(|_| (0..cols).map(|_| rng.gen_range(-50..=50)).collect())
            .collect();
        let m = IntMatrix::from_rows(&entries);
        let snf = m.smith_normal_form();
        assert!(
            snf.verify(&m),
            "trial {trial}: U·M·V ≠ D or transforms not unimodular or chain broken\n{entries:?}"
        );
        if rows == cols {
            let det = m.det_bareiss();
            if !det.is_zero() {
                let product: BigInt = snf.factors.iter().product();
                assert_eq!(
                    product,
                    det.abs(),
                    "trial {trial}: invariant factor product ≠ |det|\n{entries:?}"
                );
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Todd–Coxeter against explicit permutation models: the enumerated index of
// every subgroup of every library group must equal order/|H|.
// ---------------------------------------------------------------------------

#[test]
fn coset_enumeration_agrees_with_permutation_models() {
    let mut subgroups_checked = 0usize;
    for g in fixture_library() {
        let whole = enumerate(&g.presentation, &[], TC_BUDGET).unwrap();
        assert_eq!(whole.index(), g.order, "{}: full enumeration", g.name);
        for sub in g.perm.all_subgroups() {
            let words: Vec<Word> = sub.iter().map(|&e| g.perm.words[e].clone()).collect();
            let enumerated = enumerate(&g.presentation, &words, TC_BUDGET).unwrap();
            assert_eq!(
                enumerated.index(),
                g.order / sub.len(),
                "{}: subgroup of order {}",
                g.name,
                sub.len()
            );
            subgroups_checked += 1;
        }
    }
    // The library is genuinely exercised: S4 alone has 30 subgroups.
    assert!(subgroups_checked > 100, "only {subgroups_checked} subgroups");
}

// ---------------------------------------------------------------------------
// Piece lengths against the quadratic letter-level oracle.
// ---------------------------------------------------------------------------

fn assert_pieces_match(p: &Presentation, label: &str) {
    let total: usize = p.relators().iter().map(Word::len).sum();
    assert!(total <= 200, "{label}: oracle is only honest up to length 200");
    assert_eq!(
        piece_lengths(p),
        piece_lengths_oracle(p),
        "{label}: engine and oracle disagree on {p:?}"
    );
}

#[test]
fn pieces_agree_with_letter_oracle_on_handpicked_cases() {
    let cases: Vec<(&str, u32, Vec<Word>)> = vec![
        ("single power", 1, vec![w(&[(0, 5)])]),
        ("commutator", 2, vec![w(&[(0, 1), (1, 1), (0, -1), (1, -1)])]),
        ("shared block", 2, vec![w(&[(0, 3), (1, 2)]), w(&[(0, 3), (1, -4)])]),
        (
            "rotation pair",
            2,
            vec![w(&[(0, 2), (1, 1), (0, 1)]), w(&[(0, 3), (1, 1)])],
        ),
        ("duplicate relators", 2, vec![w(&[(0, 2), (1, 2)]), w(&[(0, 2), (1, 2)])]),
        (
            "inverse pair",
            2,
            vec![w(&[(0, 2), (1, 3)]), w(&[(1, -3), (0, -2)])],
        ),
        (
            "needs cyclic reduction",
            2,
            vec![w(&[(0, 1), (1, 2), (0, -1)]), w(&[(1, 3), (0, 2)])],
        ),
        (
            "triangle-ish triple",
            3,
            vec![
                w(&[(0, 2), (1, 2), (2, 2)]),
                w(&[(0, 2), (1, -2), (2, 1)]),
                w(&[(2, 3), (1, 1), (0, 1)]),
            ],
        ),
        ("mixed signs single", 2, vec![w(&[(0, 2), (1, 1), (0, -2), (1, 1)])]),
    ];
    for (label, n_gens, relators) in cases {
        let p = Presentation::with_auto_names(n_gens, relators).unwrap();
        assert_pieces_match(&p, label);
    }
    for g in fixture_library() {
        assert_pieces_match(&g.presentation, g.name);
    }
}

#[test]
fn pieces_agree_with_letter_oracle_on_random_presentations() {
    let mut rng = StdRng::seed_from_u64(0x9E3C_E5);
    for trial in 0..300 {
        let n_gens = rng.gen_range(1..=3);
        let n_relators = rng.gen_range(1..=4);
        let relators: Vec<Word> = (0..n_relators)
            .filter_map(|_| {
                let n_syll = rng.gen_range(1..=6);
                let word = Word::from_syllables((0..n_syll).map(|_| {
                    let gen = rng.gen_range(0..n_gens);
                    let mut exp = rng.gen_range(-4i64..=4);
                    if exp == 0 {
                        exp = 1;
                    }
                    Syllable::new(gen, exp)
                }));
                (!word.is_identity()).then_some(word)
            })
            .collect();
        if relators.is_empty() {
            continue;
        }
        let total: usize = relators.iter().map(Word::len).sum();
        if total > 200 {
            continue;
        }
        let p = Presentation::with_auto_names(n_gens, relators).unwrap();
        assert_pieces_match(&p, &format!("random trial {trial}"));
    }
}

// ---------------------------------------------------------------------------
// Low-index search against brute-force enumeration of transitive actions.
// ---------------------------------------------------------------------------

#[test]
fn free_group_of_rank_two_has_three_index_two_classes() {
    let f2 = Presentation::with_auto_names(2, vec![]).unwrap();
    let subs = low_index_subgroups(&f2, 2, None).unwrap();
    let index_two = subs.iter().filter(|s| s.index == 2).count();
    assert_eq!(index_two, 3);
    let index_one = subs.iter().filter(|s| s.index == 1).count();
    assert_eq!(index_one, 1);
}

/// All permutations of {0..k-1}, as point-image vectors.
fn symmetric_group(k: usize) -> Vec<Perm> {
    let mut perms = vec![vec![]];
    for _ in 0..k {
        let mut next = Vec::new();
        for p in perms {
            for slot in 0..=p.len() {
                let mut q = p.clone();
                q.insert(slot, p.len());
                next.push(q);
            }
        }
        perms = next;
    }
    perms
}

fn is_transitive(gens: &[Perm], k: usize) -> bool {
    let mut seen = vec![false; k];
    seen[0] = true;
    let mut frontier = vec![0usize];
    while let Some(x) = frontier.pop() {
        for g in gens {
            for y in [g[x], g.iter().position(|&im| im == x).unwrap()] {
                if !seen[y] {
                    seen[y] = true;
                    frontier.push(y);
                }
            }
        }
    }
    seen.into_iter().all(|b| b)
}

/// Conjugacy classes of index-k subgroups, counted the slow way: transitive
/// relator-respecting generator assignments into S_k, up to simultaneous
/// conjugation.
fn brute_transitive_classes(p: &Presentation, k: usize) -> usize {
    let sk = symmetric_group(k);
    let n = p.n_gens() as usize;
    let mut canonical: BTreeSet<Vec<Perm>> = BTreeSet::new();
    let mut assignment = vec![0usize; n];
    loop {
        let gens: Vec<Perm> = assignment.iter().map(|&i| sk[i].clone()).collect();
        let respects = p
            .relators()
            .iter()
            .all(|r| eval_word(&gens, r) == perm_identity(k));
        if respects && is_transitive(&gens, k) {
            let class_rep = sk
                .iter()
                .map(|c| {
                    let ci = perm_inverse(c);
                    gens.iter()
                        .map(|g| perm_compose(&perm_compose(&ci, g), c))
                        .collect::<Vec<Perm>>()
                })
                .min()
                .unwrap();
            canonical.insert(class_rep);
        }
        // Odometer over assignments.
        let mut pos = 0;
        loop {
            if pos == n {
                return canonical.len();
            }
            assignment[pos] += 1;
            if assignment[pos] < sk.len() {
                break;
            }
            assignment[pos] = 0;
            pos += 1;
        }
    }
}

#[test]
fn low_index_counts_agree_with_brute_force_actions() {
    let f2 = Presentation::with_auto_names(2, vec![]).unwrap();
    let zxz = Presentation::new(
        vec!["a".into(), "b".into()],
        vec![w(&[(0, 1), (1, 1), (0, -1), (1, -1)])],
    )
    .unwrap();
    let lib = fixture_library();
    let by_name = |n: &str| {
        lib.iter()
            .find(|g| g.name == n)
            .unwrap()
            .presentation
            .clone()
    };
    let cases = vec![
        ("f2", f2),
        ("zxz", zxz),
        ("v4", by_name("v4")),
        ("s3", by_name("s3")),
        ("c6", by_name("c6")),
        ("a4", by_name("a4")),
    ];
    for (label, p) in cases {
        let subs = low_index_subgroups(&p, 4, None).unwrap();
        for k in 1..=4 {
            let engine = subs.iter().filter(|s| s.index == k).count();
            let brute = brute_transitive_classes(&p, k);
            assert_eq!(engine, brute, "{label}: index {k}");
        }
    }
}

// ---------------------------------------------------------------------------
// Quotient spectra are presentation-invariant under renaming.
// ---------------------------------------------------------------------------

#[test]
fn spectrum_is_stable_under_tietze_renaming() {
    // S3 in Coxeter form, and the same group with the generators listed in
    // the other order and fresh names.
    let original = Presentation::new(
        vec!["s".into(), "t".into()],
        vec![
            w(&[(0, 2)]),
            w(&[(1, 2)]),
            w(&[(0, 1), (1, 1), (0, 1), (1, 1), (0, 1), (1, 1)]),
        ],
    )
    .unwrap();
    let renamed = Presentation::new(
        vec!["u".into(), "v".into()],
        vec![
            w(&[(1, 2)]),
            w(&[(0, 2)]),
            w(&[(1, 1), (0, 1), (1, 1), (0, 1), (1, 1), (0, 1)]),
        ],
    )
    .unwrap();
    let a = quotient_spectrum(&original, 6, None);
    let b = quotient_spectrum(&renamed, 6, None);
    assert_eq!(a.certified_to, 6);
    assert_eq!(b.certified_to, 6);
    assert_eq!(a.signatures, b.signatures);
    // Sanity: C2, C3(?) no — S3's transitive images include S3 itself and C2.
    assert!(a.signatures.iter().any(|s| s.order == 6 && !s.abelian));
    assert!(a.signatures.iter().any(|s| s.order == 2));
}
