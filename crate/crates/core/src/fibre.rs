//! Fibre products of equal factors over a common quotient.
//!
//! Given an epimorphism q: G → Q whose kernel is normally generated by a
//! known finite set, the d-fold fibre product
//! P = { (g₁, …, g_d) ∈ G^d : q(g₁) = ⋯ = q(g_d) }
//! is generated by: each kernel generator placed in each slot, a diagonal
//! lift of each Q-generator, and a first-slot lift of each Q-relator. The
//! diagonal conjugates the slotted kernel generators onto all of N in every
//! slot, and the relator lifts make the first slot's fibre over a Q-element
//! independent of the chosen lift.

use thiserror::Error;

use crate::coset::TcError;
use crate::hom::{GroupHom, SubgroupGens, TupleWord};
use crate::presentation::{fresh_name_among, Presentation};
use crate::word::Word;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FibreError {
    #[error("fibre products need at least two factors, got {0}")]
    ArityTooSmall(usize),
    #[error("no domain generator maps verbatim to quotient generator {q_gen}; cannot lift")]
    NoSection { q_gen: u32 },
    #[error("exhaustive check: enumeration ran out of budget ({0})")]
    Enumeration(#[from] TcError),
    #[error("exhaustive check: state space of {states} tuples exceeds the cap {cap}")]
    TooLarge { states: usize, cap: usize },
}

/// A per-generator section of q: G → Q: for each Q-generator, a G-generator
/// mapping to it verbatim. All quotient maps built by this crate (Rips
/// quotients, identity maps) have one.
fn section(q: &GroupHom) -> Result<Vec<u32>, FibreError> {
    let n_q = q.codomain().n_gens();
    let mut sec = Vec::with_capacity(n_q as usize);
    for c in 0..n_q {
        let target = Word::letter(c, 1);
        match (0..q.domain().n_gens()).find(|&g| *q.image_of_gen(g) == target) {
            Some(g) => sec.push(g),
            None => return Err(FibreError::NoSection { q_gen: c }),
        }
    }
    Ok(sec)
}

/// Generating tuples for the d-fold fibre product of q: G → Q, where
/// `kernel_gens` (words over G) normally generate ker q.
pub fn fibre_product_gens(
    q: &GroupHom,
    d: usize,
    kernel_gens: &[Word],
) -> Result<SubgroupGens, FibreError> {
    if d < 2 {
        return Err(FibreError::ArityTooSmall(d));
    }
    let g = q.domain();
    for w in kernel_gens {
        assert!(
            w.max_gen().map_or(true, |m| m < g.n_gens()),
            "kernel generator outside the domain presentation"
        );
    }
    let sec = section(q)?;
    let lift_letter = |c: u32| Word::letter(sec[c as usize], 1);
    let mut gens = Vec::new();
    for slot in 0..d {
        for k in kernel_gens {
            gens.push(TupleWord::slotted(d, slot, k.clone()));
        }
    }
    for c in 0..q.codomain().n_gens() {
        gens.push(TupleWord::diagonal(d, lift_letter(c)));
    }
    for r in q.codomain().relators() {
        let lifted = r.substitute(|c| lift_letter(c));
        gens.push(TupleWord::slotted(d, 0, lifted));
    }
    Ok(SubgroupGens::Tuples {
        factor: g.clone(),
        arity: d,
        gens,
    })
}

/// The presentation of G^d: d commuting copies of G. Copy i's generator j
/// has index `i * G.n_gens() + j` and a name derived from G's by suffixing
/// the slot number.
pub fn direct_power_presentation(g: &Presentation, d: usize) -> Presentation {
    assert!(d >= 1);
    let n = g.n_gens();
    let mut names: Vec<String> = Vec::with_capacity(d * n as usize);
    for slot in 0..d {
        for j in 0..n {
            let stem = format!("{}_{}", g.name_of(j), slot);
            let fresh = fresh_name_among(names.iter().map(String::as_str), &stem);
            names.push(fresh);
        }
    }
    let mut relators = Vec::new();
    for slot in 0..d {
        let off = slot as u32 * n;
        for r in g.relators() {
            relators.push(r.rename_gens(|x| off + x));
        }
    }
    for i in 0..d {
        for j in (i + 1)..d {
            for a in 0..n {
                for b in 0..n {
                    let x = Word::letter(i as u32 * n + a, 1);
                    let y = Word::letter(j as u32 * n + b, 1);
                    relators.push(x.commutator(&y));
                }
            }
        }
    }
    Presentation::new(names, relators).expect("minted names are unique and in range")
}

/// Flatten a tuple over G into a word over `direct_power_presentation(G, d)`:
/// slot components concatenated in slot order (legitimate because distinct
/// copies commute in the ambient).
pub fn flatten_tuple(t: &TupleWord, g: &Presentation) -> Word {
    let n = g.n_gens();
    let mut out = Word::identity();
    for (slot, comp) in t.components().iter().enumerate() {
        out = out.concat(&comp.rename_gens(|x| slot as u32 * n + x));
    }
    out
}

/// Flatten subgroup data to (ambient presentation, generator words), turning
/// tuple data into words over the direct power.
pub fn flatten_subgroup(sg: &SubgroupGens) -> (Presentation, Vec<Word>) {
    match sg {
        SubgroupGens::Words { ambient, gens } => (ambient.clone(), gens.clone()),
        SubgroupGens::Tuples {
            factor,
            arity,
            gens,
        } => {
            let ambient = direct_power_presentation(factor, *arity);
            let words = gens.iter().map(|t| flatten_tuple(t, factor)).collect();
            (ambient, words)
        }
    }
}

/// Brute-force verification on finite toys: materialize G and Q by regular
/// coset enumeration, then check that the subgroup of G^d generated by the
/// emitted tuples is exactly the set of tuples with equal images in Q.
/// `max_cosets` bounds both enumerations; the tuple space |G|^d is capped
/// internally.
pub fn exhaustive_fibre_check(
    q: &GroupHom,
    d: usize,
    kernel_gens: &[Word],
    max_cosets: usize,
) -> Result<bool, FibreError> {
    const STATE_CAP: usize = 1 << 22;
    let gens = match fibre_product_gens(q, d, kernel_gens)? {
        SubgroupGens::Tuples { gens, .. } => gens,
        SubgroupGens::Words { .. } => unreachable!("fibre gens are tuples"),
    };
    // Work directly on regular coset tables: coset 0 is the identity, and
    // tracing a word from 0 lands on the element it represents.
    let g_enum = crate::coset::enumerate(q.domain(), &[], max_cosets)?;
    let q_enum = crate::coset::enumerate(q.codomain(), &[], max_cosets)?;
    let ng = g_enum.index();
    let n_states = match ng.checked_pow(d as u32) {
        Some(s) if s <= STATE_CAP => s,
        other => {
            return Err(FibreError::TooLarge {
                states: other.unwrap_or(usize::MAX),
                cap: STATE_CAP,
            })
        }
    };
    let g_elem_of_word = |w: &Word| g_enum.table.trace(0, w) as usize;
    let q_elem_of_word = |w: &Word| q_enum.table.trace(0, w) as usize;
    // Image in Q of each G-element.
    let q_img: Vec<usize> = (0..ng)
        .map(|x| q_elem_of_word(&q.apply(&g_enum.table.rep_word(x as u32))))
        .collect();
    // G multiplication aligned with g_enum numbering: x·y is where coset x
    // moves under a word representing y.
    let rep: Vec<Word> = (0..ng).map(|x| g_enum.table.rep_word(x as u32)).collect();
    let mul: Vec<usize> = (0..ng)
        .flat_map(|x| {
            let (table, rep) = (&g_enum.table, &rep);
            (0..ng).map(move |y| table.trace(x as u32, &rep[y]) as usize)
        })
        .collect();
    let encode = |tuple: &[usize]| -> usize {
        tuple.iter().fold(0usize, |acc, &x| acc * ng + x)
    };
    // Target: tuples with equal Q-images.
    let mut target = vec![false; n_states];
    let mut tuple = vec![0usize; d];
    loop {
        let img0 = q_img[tuple[0]];
        if tuple.iter().all(|&x| q_img[x] == img0) {
            target[encode(&tuple)] = true;
        }
        // odometer
        let mut i = d;
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            tuple[i] += 1;
            if tuple[i] < ng {
                break;
            }
            tuple[i] = 0;
        }
        if tuple.iter().all(|&x| x == 0) {
            break;
        }
    }
    // Generated: closure of the identity tuple under right multiplication by
    // the generator tuples (a subgroup, since everything is finite).
    let gen_elems: Vec<Vec<usize>> = gens
        .iter()
        .map(|t| t.components().iter().map(|w| g_elem_of_word(w)).collect())
        .collect();
    let mut reached = vec![false; n_states];
    reached[0] = true;
    let mut work = vec![vec![0usize; d]];
    while let Some(cur) = work.pop() {
        for ge in &gen_elems {
            let next: Vec<usize> = cur
                .iter()
                .zip(ge)
                .map(|(&x, &y)| mul[x * ng + y])
                .collect();
            let code = encode(&next);
            if !reached[code] {
                reached[code] = true;
                work.push(next);
            }
        }
    }
    Ok(reached == target)
}
