//! Restricted wreath products A ≀ B with B a concrete finite group.
//!
//! A ≀ B = A^B ⋊ B is presented on one copy of A's generators per element of
//! B plus one letter per B-generator: the copies satisfy A's relators and
//! commute pairwise, the t-letters satisfy B's relators, and conjugation by
//! t_β shifts copy b to copy βb. Specifying the action only on B's
//! generators suffices: the action of a product is the composite of the
//! generator actions, and because left multiplication is a genuine
//! homomorphism B → Aut(A^B), every B-relator automatically acts trivially.

use crate::fingroup::FiniteGroupTable;
use crate::hom::{GroupHom, SubgroupGens, TupleWord};
use crate::presentation::{fresh_name_among, Presentation};
use crate::word::Word;

/// A presented wreath product, with the bookkeeping needed to talk about
/// individual copies of the base group.
#[derive(Debug, Clone)]
pub struct WreathProduct {
    presentation: Presentation,
    base: Presentation,
    b_order: usize,
    /// Generator indices of the t-letters, parallel to `b_generators`.
    t_gens: Vec<u32>,
    /// Elements of B (as table indices) realized by the t-letters.
    b_generators: Vec<usize>,
    /// μ_b: A → A≀B sending A's generator i to copy b's generator, one per
    /// element of B in table order.
    embeddings: Vec<GroupHom>,
}

impl WreathProduct {
    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn base(&self) -> &Presentation {
        &self.base
    }

    pub fn b_order(&self) -> usize {
        self.b_order
    }

    pub fn t_gens(&self) -> &[u32] {
        &self.t_gens
    }

    pub fn b_generators(&self) -> &[usize] {
        &self.b_generators
    }

    pub fn embeddings(&self) -> &[GroupHom] {
        &self.embeddings
    }

    /// Generator index of copy `b`'s image of A-generator `i`.
    pub fn copy_gen(&self, b: usize, i: u32) -> u32 {
        assert!(b < self.b_order && i < self.base.n_gens());
        b as u32 * self.base.n_gens() + i
    }

    /// Push a |B|-tuple over A into the wreath product: the product over
    /// copies, in table order, of each component placed in its copy. Tuple
    /// components land in distinct commuting copies, so the concatenation
    /// order is a convention, not a choice.
    pub fn inflate_tuple(&self, t: &TupleWord) -> Word {
        assert_eq!(t.arity(), self.b_order, "tuple arity must equal |B|");
        let n = self.base.n_gens();
        let mut out = Word::identity();
        for (b, comp) in t.components().iter().enumerate() {
            out = out.concat(&comp.rename_gens(|x| b as u32 * n + x));
        }
        out
    }
}

/// Present A ≀ B. Copy b of A-generator i gets index `b·|A.gens| + i` and a
/// name suffixing the element index; the t-letters follow, named t0, t1, …
/// after B's chosen generators.
pub fn wreath_presentation(a: &Presentation, b: &FiniteGroupTable) -> WreathProduct {
    let na = a.n_gens();
    let nb = b.order();
    let b_pres = b.to_presentation();
    let n_t = b_pres.generators.len();

    let mut names: Vec<String> = Vec::with_capacity(nb * na as usize + n_t);
    for copy in 0..nb {
        for i in 0..na {
            let stem = format!("{}_{}", a.name_of(i), copy);
            let fresh = fresh_name_among(names.iter().map(String::as_str), &stem);
            names.push(fresh);
        }
    }
    for j in 0..n_t {
        let fresh = fresh_name_among(names.iter().map(String::as_str), &format!("t{j}"));
        names.push(fresh);
    }
    let t_gens: Vec<u32> = (0..n_t as u32).map(|j| nb as u32 * na + j).collect();

    let mut relators = Vec::new();
    // Each copy satisfies A's relators.
    for copy in 0..nb {
        let off = copy as u32 * na;
        for r in a.relators() {
            relators.push(r.rename_gens(|x| off + x));
        }
    }
    // Distinct copies commute.
    for c1 in 0..nb {
        for c2 in (c1 + 1)..nb {
            for i in 0..na {
                for j in 0..na {
                    let x = Word::letter(c1 as u32 * na + i, 1);
                    let y = Word::letter(c2 as u32 * na + j, 1);
                    relators.push(x.commutator(&y));
                }
            }
        }
    }
    // The t-letters satisfy B's relators.
    for r in b_pres.presentation.relators() {
        relators.push(r.rename_gens(|j| t_gens[j as usize]));
    }
    // Conjugation by t_j sends copy c to copy β_j·c.
    for (j, &beta) in b_pres.generators.iter().enumerate() {
        let t = Word::letter(t_gens[j], 1);
        for c in 0..nb {
            let target = b.mul(beta, c);
            for i in 0..na {
                let x = Word::letter(c as u32 * na + i, 1);
                let y = Word::letter(target as u32 * na + i, 1);
                relators.push(t.concat(&x).concat(&t.inverse()).concat(&y.inverse()));
            }
        }
    }
    let presentation =
        Presentation::new(names, relators).expect("minted names are unique and in range");

    let embeddings = (0..nb)
        .map(|copy| {
            let images = (0..na)
                .map(|i| Word::letter(copy as u32 * na + i, 1))
                .collect();
            GroupHom::new(a.clone(), presentation.clone(), images)
                .expect("copy images are in range and respect relators verbatim")
        })
        .collect();

    WreathProduct {
        presentation,
        base: a.clone(),
        b_order: nb,
        t_gens,
        b_generators: b_pres.generators,
        embeddings,
    }
}

/// Generators of the subgroup Δ(A) × B ≤ A ≀ B: the full diagonal of each
/// A-generator together with all t-letters. For finite A and B this has
/// index |A|^(|B|−1).
pub fn diagonal_times_b_gens(w: &WreathProduct) -> SubgroupGens {
    let na = w.base.n_gens();
    let mut gens = Vec::with_capacity(na as usize + w.t_gens.len());
    for i in 0..na {
        let mut d = Word::identity();
        for b in 0..w.b_order {
            d = d.concat(&Word::letter(w.copy_gen(b, i), 1));
        }
        gens.push(d);
    }
    for &t in &w.t_gens {
        gens.push(Word::letter(t, 1));
    }
    SubgroupGens::Words {
        ambient: w.presentation.clone(),
        gens,
    }
}
