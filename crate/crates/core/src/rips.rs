//! The Rips construction: a small-cancellation group G surjecting onto a
//! given finitely presented group Q with two-generator kernel.
//!
//! From Q = ⟨X | R⟩ we build G = ⟨X ∪ {a₁, a₂} | R̃ ∪ V⟩ where
//! R̃ = { r·v_r⁻¹ : r ∈ R } and V = { xᵉ a_i x⁻ᵉ · u⁻¹ } for every x ∈ X,
//! sign ε, and i ∈ {1, 2}, with all padding words v, u pairwise distinct
//! positive words in a₁, a₂ drawn from one global run-length allocator.
//! Killing a₁, a₂ recovers Q verbatim, so x ↦ x, a_i ↦ 1 is a surjection
//! G → Q whose kernel N is normally generated (in fact generated, by the
//! V-relations) by a₁ and a₂.
//!
//! Two properties are engineered, then verified rather than trusted:
//!
//! * **Metric small cancellation.** Every padding word keeps its largest
//!   adjacent-run window well under 1/(2λ) of its length, with room for a
//!   piece to extend across the short non-pad segment of a relator, so the
//!   whole presentation satisfies C′(1/λ). `check_metric` confirms.
//! * **Perfectness transfer.** When Q is perfect, H₁(G) is the quotient of
//!   ℤ² (the a₁/a₂ exponent lattice) by rows (δ_{i1} − blocks(u),
//!   δ_{i2} − valsum(u)) contributed by the V-relators — the R̃ rows reduce
//!   away against Q's unimodular relation lattice and can only enlarge the
//!   span. Two designated pads are minted with exact block counts (V, V+1)
//!   and value sums ((V−1)k−1, Vk−1), making their two rows have
//!   determinant (1−V)(1−Vk) + V(1−(V−1)k) = 1, hence span exactly ℤ².
//!   `is_perfect` (Smith normal form) confirms.
//!
//! If either verification fails, the construction retries with the base pad
//! length doubled, a bounded number of times.

use thiserror::Error;

use crate::abelian::is_perfect;
use crate::hom::GroupHom;
use crate::presentation::{fresh_name_among, Presentation};
use crate::smallcanc::{check_metric, PadMinter};
use crate::word::Word;

/// Construction attempts before giving up (pad length doubles each time).
const MAX_ATTEMPTS: usize = 4;
/// Largest base width considered when sizing the two designated pads.
const MAX_DESIGNATED_WIDTH: i64 = 100_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RipsError {
    #[error(
        "could not mint a pad family passing verification within {attempts} attempts \
         (pad length doubled each time)"
    )]
    PadExhaustion { attempts: usize },
}

/// A verified Rips construction.
#[derive(Debug, Clone)]
pub struct RipsOutput {
    /// The small-cancellation group G.
    pub g: Presentation,
    /// The surjection G → Q killing the two pad generators.
    pub quotient: GroupHom,
    /// Generator indices of a₁ and a₂ inside G.
    pub kernel_gens: [u32; 2],
    /// The λ for which C′(1/λ) was verified.
    pub lambda_used: u64,
    /// The base pad length that succeeded (≥ the requested one).
    pub pad_length: usize,
}

/// Run the construction. `lambda` ≥ 6 is the small-cancellation target
/// (strict C′(1/λ)); `pad` is the base length for padding words, grown
/// automatically if verification demands it.
pub fn rips(q: &Presentation, lambda: u64, pad: usize) -> Result<RipsOutput, RipsError> {
    assert!(lambda >= 6, "metric small cancellation needs λ ≥ 6");
    assert!(q.n_gens() >= 1, "Rips construction needs at least one generator");
    let want_perfect = is_perfect(q);
    let mut l = pad.max(1);
    for _ in 0..MAX_ATTEMPTS {
        if let Some(out) = attempt(q, lambda, l, want_perfect) {
            return Ok(out);
        }
        l *= 2;
    }
    Err(RipsError::PadExhaustion {
        attempts: MAX_ATTEMPTS,
    })
}

fn attempt(q: &Presentation, lambda: u64, l: usize, want_perfect: bool) -> Option<RipsOutput> {
    let n = q.n_gens();
    let mut names = q.names().to_vec();
    let a1_name = fresh_name_among(names.iter().map(String::as_str), "a1");
    names.push(a1_name);
    let a2_name = fresh_name_among(names.iter().map(String::as_str), "a2");
    names.push(a2_name);
    let (a1, a2) = (n, n + 1);

    // Letters of non-pad context a piece can pick up crossing a pad
    // boundary: the longest Q-relator (R̃ case) or the 3-letter conjugation
    // segment (V case), plus the two junction letters.
    let q_guard = q
        .relators()
        .iter()
        .map(|r| r.cyclic_reduce().len())
        .max()
        .unwrap_or(0)
        .max(3)
        + 2;

    let n_r = q.relators().len();
    let n_pads = n_r + 4 * n as usize;
    // Slots n_r (x₀, +, a₁) and n_r + 2 (x₀, −, a₁) carry the exponent
    // fix-up; they are minted last so their run values top the family.
    let designated = if want_perfect {
        Some((n_r, n_r + 2))
    } else {
        None
    };

    let mut minter = PadMinter::new(a1, a2);
    let mut pads: Vec<Option<Word>> = vec![None; n_pads];
    for (slot, pad_slot) in pads.iter_mut().enumerate() {
        if designated.is_some_and(|(d1, d2)| slot == d1 || slot == d2) {
            continue;
        }
        *pad_slot = Some(minter.mint_word(l, 2 * lambda, q_guard));
    }
    if let Some((d1, d2)) = designated {
        let (pa, pb) = mint_designated(&mut minter, a1, a2, l, lambda, q_guard)?;
        pads[d1] = Some(pa);
        pads[d2] = Some(pb);
    }
    let pads: Vec<Word> = pads.into_iter().map(|p| p.expect("every slot minted")).collect();

    // R̃ = r·v_r⁻¹, then V = xᵉ a_i x⁻ᵉ·u⁻¹ in (x, ε, i) order.
    let mut relators = Vec::with_capacity(n_pads);
    for (j, r) in q.relators().iter().enumerate() {
        relators.push(r.concat(&pads[j].inverse()));
    }
    for x in 0..n {
        for (e_idx, eps) in [1i64, -1].into_iter().enumerate() {
            for (i_idx, ai) in [a1, a2].into_iter().enumerate() {
                let slot = n_r + 4 * x as usize + 2 * e_idx + i_idx;
                let w = Word::letter(x, eps)
                    .concat(&Word::letter(ai, 1))
                    .concat(&Word::letter(x, -eps))
                    .concat(&pads[slot].inverse());
                relators.push(w);
            }
        }
    }
    let g = Presentation::new(names, relators).expect("names fresh, letters in range");

    // Killing the pad generators must recover Q verbatim.
    let killed = g.kill_generators(&[a1, a2]);
    assert_eq!(killed.names(), q.names(), "kill-check: generator names");
    assert_eq!(killed.relators(), q.relators(), "kill-check: relators");

    // The quotient map x ↦ x, a_i ↦ 1 respects every relator syntactically.
    let images: Vec<Word> = (0..n)
        .map(|x| Word::letter(x, 1))
        .chain([Word::identity(), Word::identity()])
        .collect();
    let quotient = GroupHom::new(g.clone(), q.clone(), images).expect("images in range");
    quotient
        .verify_relators_syntactically()
        .expect("R̃ maps to Q-relators, V maps to the identity");

    // Engineered, now verified.
    if !check_metric(&g, lambda).satisfied {
        return None;
    }
    if want_perfect && !is_perfect(&g) {
        return None;
    }
    Some(RipsOutput {
        g,
        quotient,
        kernel_gens: [a1, a2],
        lambda_used: lambda,
        pad_length: l,
    })
}

/// The arithmetic of one candidate designated pair at base width `w`:
/// base A takes the odd allocator offsets g₀+1, g₀+3, …, g₀+2w−1 and base B
/// the even ones plus one extra (so widths are w and w+1; interleaving keeps
/// the value sums close, which keeps the closing runs small). The closing
/// runs X₁ = wk − 1 − s₁ and X₂ = (w+1)k − 1 − s₂ realize block counts
/// (V, V+1) = (w+1, w+2) and value sums ((V−1)k−1, Vk−1).
#[derive(Clone, Copy, Debug)]
struct DesignatedPlan {
    w: i64,
    x1: i64,
    x2: i64,
}

fn plan_designated(g0: i64, w: i64, lambda: i64, q_guard: i64, l: i64) -> Option<DesignatedPlan> {
    let div_ceil = |num: i64, den: i64| -> i64 { (num + den - 1) / den };
    let s1 = w * g0 + w * w;
    let s2 = w * g0 + w * (w + 1) + g0 + 2 * w + 1;
    let g = g0 + 2 * w + 1;
    let last_a = g0 + 2 * w - 1;
    let last_b = g;
    let mut k = div_ceil(g + 2 + s1, w).max(div_ceil(g + 2 + s2, w + 1));
    if w * k - s1 == (w + 1) * k - s2 {
        k += 1;
    }
    let x1 = w * k - 1 - s1;
    let x2 = (w + 1) * k - 1 - s2;
    debug_assert!(x1 > g && x2 > g && x1 != x2);
    let len_a = (w + 1) + s1 + x1;
    let len_b = (w + 2) + s2 + x2;
    let margin = 2 * lambda;
    let fits = len_a >= l
        && len_b >= l
        && margin * (last_a + x1 + 2 + q_guard) < len_a
        && margin * (last_b + x2 + 2 + q_guard) < len_b;
    fits.then_some(DesignatedPlan { w, x1, x2 })
}

/// Mint the two designated pads: block counts (V, V+1), value sums
/// ((V−1)k−1, Vk−1) for a k large enough that the two closing runs exceed
/// every other run value (global uniqueness) and stay within the metric
/// margin. Returns None only if no base width up to the search bound meets
/// the size targets.
fn mint_designated(
    minter: &mut PadMinter,
    a1: u32,
    a2: u32,
    l: usize,
    lambda: u64,
    q_guard: usize,
) -> Option<(Word, Word)> {
    let g0 = minter.global_max();
    let plan = (2..=MAX_DESIGNATED_WIDTH)
        .find_map(|w| plan_designated(g0, w, lambda as i64, q_guard as i64, l as i64))?;
    let mut values_a = Vec::with_capacity(plan.w as usize + 1);
    let mut values_b = Vec::with_capacity(plan.w as usize + 2);
    for j in 0..plan.w {
        let odd = minter.fresh_value();
        let even = minter.fresh_value();
        debug_assert_eq!((odd, even), (g0 + 2 * j + 1, g0 + 2 * j + 2));
        values_a.push(odd);
        values_b.push(even);
    }
    values_b.push(minter.fresh_value());
    values_a.push(plan.x1);
    values_b.push(plan.x2);
    let word_of = |values: &[i64]| -> Word {
        let mut w = Word::identity();
        for &v in values {
            w = w.concat(&Word::letter(a1, 1)).concat(&Word::letter(a2, v));
        }
        w
    };
    Some((word_of(&values_a), word_of(&values_b)))
}
