//! Finite-quotient spectra.
//!
//! Every transitive action of a group on at most `n` points factors through a
//! finite quotient (the permutation image); conversely every quotient of
//! order m ≤ n appears as the image of the regular action on the cosets of an
//! index-m subgroup. Enumerating subgroups level by level therefore yields
//! the complete set of finite quotients up to the certified bound, plus
//! possibly some larger quotients that happen to act faithfully on few
//! points.
//!
//! Quotients are recorded as isomorphism signatures (order, element-order
//! histogram, derived-subgroup order, abelianization). The signature is a
//! strong invariant but not a complete one: for the group orders this crate
//! certifies in practice (tens, not thousands) it separates everything we
//! care about, and a collision only ever *under*-counts distinct quotients.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::lowindex::low_index_subgroups_by_level;
use crate::perm::{self, Perm};
use crate::presentation::Presentation;

/// Hard cap on the size of a permutation image we are willing to expand.
/// Index-n actions have images of order ≤ n!, so this only matters for
/// unusually large `max_index`.
const IMAGE_CAP: usize = 250_000;

/// Isomorphism signature of a finite quotient.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct QuotientSignature {
    pub order: usize,
    pub abelian: bool,
    pub derived_order: usize,
    /// Invariant factors of the abelianization, ascending divisibility chain
    /// (empty for perfect quotients).
    pub abelianization: Vec<u64>,
    /// Element order → multiplicity.
    pub element_orders: BTreeMap<usize, usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumReport {
    pub max_index: usize,
    /// Every finite quotient of order ≤ this bound is present in
    /// `signatures`; equals `max_index` unless the node budget ran out.
    pub certified_to: usize,
    pub nodes_used: usize,
    /// Transitive actions whose images were analyzed.
    pub actions_analyzed: usize,
    /// Actions skipped because their image exceeded the internal cap.
    pub images_capped: usize,
    pub signatures: BTreeSet<QuotientSignature>,
}

/// Compute the spectrum of finite quotients detected by transitive actions
/// on at most `max_index` points.
pub fn quotient_spectrum(
    p: &Presentation,
    max_index: usize,
    node_budget: Option<usize>,
) -> SpectrumReport {
    let lev = low_index_subgroups_by_level(p, max_index, node_budget);
    let mut signatures = BTreeSet::new();
    let mut actions_analyzed = 0usize;
    let mut images_capped = 0usize;
    for sub in &lev.subgroups {
        let n = sub.table.n_cosets();
        let gens: Vec<Perm> = (0..p.n_gens())
            .map(|g| sub.table.generator_permutation(g))
            .collect();
        match perm::closure(n, &gens, IMAGE_CAP) {
            Some(elements) => {
                signatures.insert(signature_of_image(&elements, &gens));
                actions_analyzed += 1;
            }
            None => images_capped += 1,
        }
    }
    SpectrumReport {
        max_index,
        certified_to: lev.completed_index,
        nodes_used: lev.nodes_used,
        actions_analyzed,
        images_capped,
        signatures,
    }
}

/// Signature of a concrete permutation group given as its full element list
/// together with a generating set.
fn signature_of_image(elements: &[Perm], gens: &[Perm]) -> QuotientSignature {
    let order = elements.len();
    let mut element_orders: BTreeMap<usize, usize> = BTreeMap::new();
    for x in elements {
        *element_orders.entry(perm::order(x)).or_insert(0) += 1;
    }
    let derived = derived_subgroup(elements, gens);
    let derived_order = derived.len();
    let abelianization = abelian_invariants(elements, &derived);
    QuotientSignature {
        order,
        abelian: derived_order == 1,
        derived_order,
        abelianization,
        element_orders,
    }
}

/// Derived subgroup of a finite permutation group: the normal closure of the
/// commutators of its generators — close the seeds under conjugation by the
/// generators, then take the subgroup they generate.
fn derived_subgroup(elements: &[Perm], gens: &[Perm]) -> BTreeSet<Perm> {
    let n = elements[0].len();
    let mut seeds: BTreeSet<Perm> = BTreeSet::new();
    for a in gens {
        for b in gens {
            let ab = perm::compose(a, b);
            let ba = perm::compose(b, a);
            // [a, b] = a⁻¹ b⁻¹ a b  =  (ba)⁻¹ (ab)
            seeds.insert(perm::compose(&perm::inverse(&ba), &ab));
        }
    }
    // Conjugation closure of the seed set.
    let mut work: Vec<Perm> = seeds.iter().cloned().collect();
    while let Some(s) = work.pop() {
        for g in gens {
            let conj = perm::compose(&perm::compose(&perm::inverse(g), &s), g);
            if seeds.insert(conj.clone()) {
                work.push(conj);
            }
        }
    }
    // Subgroup closure under multiplication.
    let id = perm::identity(n);
    let mut sub: BTreeSet<Perm> = BTreeSet::new();
    sub.insert(id.clone());
    let mut work = vec![id];
    while let Some(x) = work.pop() {
        for s in &seeds {
            let y = perm::compose(&x, s);
            if sub.insert(y.clone()) {
                work.push(y);
            }
        }
    }
    debug_assert_eq!(elements.len() % sub.len(), 0);
    sub
}

/// Invariant factors of `G/D` (which is abelian for `D` ⊇ derived subgroup),
/// computed without constructing the quotient: for each prime p dividing
/// |G/D|, the count `c_k = #{x ∈ G : x^(p^k) ∈ D} / |D|` equals the number of
/// quotient elements killed by p^k, and the jumps `log_p(c_k / c_(k-1))` form
/// the conjugate of the partition of p-exponents.
fn abelian_invariants(elements: &[Perm], derived: &BTreeSet<Perm>) -> Vec<u64> {
    let a_order = elements.len() / derived.len();
    if a_order == 1 {
        return Vec::new();
    }
    // exponents of the p-primary cyclic factors, descending, per prime
    let mut per_prime: Vec<(u64, Vec<u32>)> = Vec::new();
    for (prime, _mult) in factorize(a_order as u64) {
        let p = prime as usize;
        let mut jumps: Vec<u32> = Vec::new();
        let mut c_prev = 1usize;
        let mut pk = 1usize;
        loop {
            pk *= p;
            let preimage = elements
                .iter()
                .filter(|x| derived.contains(&perm::power(x, pk)))
                .count();
            debug_assert_eq!(preimage % derived.len(), 0);
            let c_k = preimage / derived.len();
            if c_k == c_prev {
                break;
            }
            let mut ratio = c_k / c_prev;
            debug_assert_eq!(c_prev * ratio, c_k);
            let mut r = 0u32;
            while ratio > 1 {
                debug_assert_eq!(ratio % p, 0);
                ratio /= p;
                r += 1;
            }
            debug_assert!(jumps.last().map_or(true, |&prev| prev >= r));
            jumps.push(r);
            c_prev = c_k;
        }
        // `jumps[k-1]` is the number of cyclic p-factors of exponent ≥ k —
        // the conjugate of the exponent partition. Conjugating once recovers
        // the exponents themselves, descending.
        let n_factors = jumps.first().copied().unwrap_or(0);
        let exponents: Vec<u32> = (1..=n_factors)
            .map(|i| jumps.iter().filter(|&&r| r >= i).count() as u32)
            .collect();
        per_prime.push((prime, exponents));
    }
    // Align largest-with-largest across primes to get the divisibility chain.
    let width = per_prime.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
    let mut chain: Vec<u64> = (0..width)
        .map(|j| {
            per_prime
                .iter()
                .map(|(p, e)| e.get(j).map_or(1, |&k| p.pow(k)))
                .product()
        })
        .collect();
    chain.reverse();
    chain
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut m = 0;
            while n % d == 0 {
                n /= d;
                m += 1;
            }
            out.push((d, m));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}
