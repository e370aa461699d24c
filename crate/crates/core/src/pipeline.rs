//! The full workbench pipeline: from an input presentation Q to the triple
//! M = N≀B ↪ P = P_B⋊B ↪ Γ = G≀B, with every desk-checkable claim verified
//! and every non-desk-checkable claim recorded as an explicit assertion.
//!
//! Stages: input certificates on Q (perfectness, an H₂ certificate, a
//! small-quotient sweep) → Rips construction G ↠ Q with kernel N = ⟨a₁,a₂⟩
//! → wreath product Γ = G≀B → generating sets for M (all copies of the
//! kernel generators plus the t-letters) and P (the |B|-fold fibre-product
//! tuples inflated into the copies, plus the t-letters) → density checks
//! for both inclusions against every low-index subgroup of Γ.
//!
//! The report is deterministic: check records appear in one fixed order
//! with schedule-independent content, so serialized reports are byte-stable
//! across reruns.

use serde::Serialize;
use thiserror::Error;

use crate::abelian::{abelianization, h2_certificate, is_perfect, H2Verdict};
use crate::density::{density_check, DensityReport, DensityVerdict};
use crate::fibre::fibre_product_gens;
use crate::fingroup::FiniteGroupTable;
use crate::hom::SubgroupGens;
use crate::lowindex::{certify_no_small_quotients, SmallQuotientVerdict};
use crate::par;
use crate::presentation::Presentation;
use crate::rips::{rips, RipsError};
use crate::smallcanc::{check_metric, dehn_reduce};
use crate::text::format_word_names;
use crate::word::Word;
use crate::wreath::wreath_presentation;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PipelineError {
    #[error("the acting group must have order d+1: |B| = {b_order} but d = {d}")]
    BOrderMismatch { b_order: usize, d: usize },
    #[error(transparent)]
    Rips(#[from] RipsError),
}

/// Enumeration budgets for the verification passes.
#[derive(Clone, Copy, Debug)]
pub struct PipelineBudgets {
    /// Node budget for each coset/low-index enumeration pass.
    pub coset_budget: usize,
    /// Subgroup index bound for the density checks.
    pub max_index: usize,
    /// Quotient-order bound for the input small-quotient sweep.
    pub quotient_bound: usize,
}

impl Default for PipelineBudgets {
    fn default() -> Self {
        PipelineBudgets {
            coset_budget: 1_000_000,
            max_index: 3,
            quotient_bound: 6,
        }
    }
}

/// Construction parameters.
#[derive(Clone, Copy, Debug)]
pub struct PipelineConfig {
    /// Small-cancellation target C′(1/λ) for the Rips construction.
    pub lambda: u64,
    /// Base padding-word length.
    pub pad: usize,
    /// The exponent parameter the input file was instantiated at, if any
    /// (echoed into the report; the presentation itself is already concrete).
    pub p_label: Option<i64>,
    pub budgets: PipelineBudgets,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            lambda: 10,
            pad: 64,
            p_label: None,
            budgets: PipelineBudgets::default(),
        }
    }
}

/// Verdict vocabulary for report checks. `AssertedByPaper` marks claims the
/// workbench inherits from the source construction's literature and records
/// without attempting to verify (no desk algorithm exists for them).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail")]
    Fail,
    #[serde(rename = "budget-exhausted")]
    BudgetExhausted,
    #[serde(rename = "asserted-by-paper")]
    AssertedByPaper,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub verdict: Verdict,
    pub evidence: String,
    /// For budgeted checks: the bound actually certified (index, order, λ).
    pub bound: Option<u64>,
}

impl CheckRecord {
    fn new(name: &str, verdict: Verdict, evidence: String, bound: Option<u64>) -> Self {
        CheckRecord {
            name: name.to_string(),
            verdict,
            evidence,
            bound,
        }
    }

    fn pass_fail(name: &str, ok: bool, evidence: String, bound: Option<u64>) -> Self {
        let verdict = if ok { Verdict::Pass } else { Verdict::Fail };
        CheckRecord::new(name, verdict, evidence, bound)
    }

    fn asserted(name: &str, evidence: &str) -> Self {
        CheckRecord::new(name, Verdict::AssertedByPaper, evidence.to_string(), None)
    }
}

/// A presentation rendered to generator names and relator strings.
#[derive(Clone, Debug, Serialize)]
pub struct PresentationText {
    pub names: Vec<String>,
    pub relators: Vec<String>,
}

impl PresentationText {
    pub fn from_presentation(p: &Presentation) -> Self {
        PresentationText {
            names: p.names().to_vec(),
            relators: p
                .relators()
                .iter()
                .map(|r| format_word_names(r, p.names()))
                .collect(),
        }
    }
}

/// A subgroup generating set rendered over the ambient presentation.
#[derive(Clone, Debug, Serialize)]
pub struct SubgroupGensText {
    pub description: String,
    pub count: usize,
    pub gens: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineParameters {
    pub d: usize,
    pub b_name: String,
    pub b_order: usize,
    pub p: Option<i64>,
    pub lambda: u64,
    pub pad: usize,
    pub pad_length_used: usize,
    pub coset_budget: usize,
    pub max_index: usize,
    pub quotient_bound: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineReport {
    pub parameters: PipelineParameters,
    pub q: PresentationText,
    pub gamma: PresentationText,
    pub m_gens: SubgroupGensText,
    pub p_gens: SubgroupGensText,
    pub checks: Vec<CheckRecord>,
}

/// Certified density bound the pipeline insists on. Reaching the requested
/// index is the goal; a clean certificate down to this bound still passes,
/// while exhausting the budget below it is a failure of the run.
pub const DENSITY_REQUIRED_BOUND: usize = 2;

fn density_record(name: &str, rep: &DensityReport, subject: &str) -> CheckRecord {
    let verdict = match rep.verdict {
        DensityVerdict::Dense => Verdict::Pass,
        DensityVerdict::NotDense => Verdict::Fail,
        DensityVerdict::InconclusiveBudget => {
            if rep.max_index_reached >= DENSITY_REQUIRED_BOUND {
                Verdict::Pass
            } else {
                Verdict::BudgetExhausted
            }
        }
    };
    let evidence = match rep.verdict {
        DensityVerdict::NotDense => {
            let indices: Vec<usize> = rep.violations.iter().map(|v| v.index).collect();
            format!(
                "{subject} fails to act transitively on cosets of subgroups at indices {indices:?}"
            )
        }
        _ => format!(
            "{subject} acts transitively on the cosets of every subgroup of index ≤ {} \
             (requested {}, required ≥ {DENSITY_REQUIRED_BOUND}; {} conjugacy classes checked, {} nodes used)",
            rep.max_index_reached, rep.max_index_requested, rep.classes_checked, rep.nodes_used
        ),
    };
    CheckRecord::new(name, verdict, evidence, Some(rep.max_index_reached as u64))
}

/// Run the whole pipeline and assemble the report. Input-certificate
/// failures are recorded but do not stop the construction; only the |B| =
/// d+1 gate and an unrecoverable Rips failure abort.
pub fn assemble_triple(
    q: &Presentation,
    d: usize,
    b: &FiniteGroupTable,
    config: &PipelineConfig,
) -> Result<PipelineReport, PipelineError> {
    if b.order() != d + 1 {
        return Err(PipelineError::BOrderMismatch {
            b_order: b.order(),
            d,
        });
    }
    let budgets = config.budgets;

    // Input certificates on Q.
    let input_ab = abelianization(q);
    let input_h2 = h2_certificate(q);
    let small_q = certify_no_small_quotients(q, budgets.quotient_bound, Some(budgets.coset_budget));

    // Rips construction G ↠ Q with kernel N = ⟨a₁, a₂⟩.
    let rips_out = rips(q, config.lambda, config.pad)?;
    let g = &rips_out.g;
    let [a1, a2] = rips_out.kernel_gens;

    // Re-verify the construction invariants so the report carries evidence
    // independent of construction-time assertions.
    let killed = g.kill_generators(&[a1, a2]);
    let kill_ok = killed.names() == q.names() && killed.relators() == q.relators();
    let (metric, g_perfect) = par::join(|| check_metric(g, config.lambda), || is_perfect(g));

    let kernel_nontrivial: Vec<bool> = [a1, a2]
        .iter()
        .map(|&ai| {
            dehn_reduce(g, &Word::letter(ai, 1)).map_or(false, |out| !out.is_trivial())
        })
        .collect();
    let normal_witness_ok = (0..q.n_gens()).all(|x| {
        [a1, a2].iter().all(|&ai| {
            let conj = Word::letter(x, 1)
                .concat(&Word::letter(ai, 1))
                .concat(&Word::letter(x, -1));
            let in_kernel = rips_out.quotient.apply(&conj).is_identity();
            let nontrivial = dehn_reduce(g, &conj).map_or(false, |out| !out.is_trivial());
            in_kernel && nontrivial
        })
    });

    // Γ = G≀B with its copy bookkeeping.
    let wr = wreath_presentation(g, b);
    let gamma = wr.presentation();

    // M = N≀B: every copy of each kernel generator, plus the t-letters.
    let mut m_words: Vec<Word> = Vec::new();
    for copy in 0..b.order() {
        for &ai in &[a1, a2] {
            m_words.push(Word::letter(wr.copy_gen(copy, ai), 1));
        }
    }
    for &t in wr.t_gens() {
        m_words.push(Word::letter(t, 1));
    }

    // P = P_B⋊B: |B|-fold fibre-product tuples inflated into the copies,
    // plus the t-letters.
    let kernel_words = [Word::letter(a1, 1), Word::letter(a2, 1)];
    let fib = fibre_product_gens(&rips_out.quotient, b.order(), &kernel_words)
        .expect("|B| = d+1 ≥ 2 and the Rips quotient maps generators verbatim");
    let SubgroupGens::Tuples { gens: tuples, .. } = &fib else {
        unreachable!("fibre generators are tuples")
    };
    let mut p_words: Vec<Word> = tuples.iter().map(|t| wr.inflate_tuple(t)).collect();
    for &t in wr.t_gens() {
        p_words.push(Word::letter(t, 1));
    }

    // Witness for the surjection P ↠ Q (slot-0 image under the quotient):
    // slotted kernel generators map to 1, each Q-generator is the image of
    // its diagonal lift, relator lifts map to literal relators of Q, and the
    // t-letters map to 1 by construction of the semidirect splitting.
    let n_k = kernel_words.len() * b.order();
    let n_qg = q.n_gens() as usize;
    let n_qr = q.relators().len();
    let onto_ok = tuples.len() == n_k + n_qg + n_qr
        && tuples.iter().enumerate().all(|(j, t)| {
            let img = rips_out.quotient.apply(&t.components()[0]);
            if j < n_k {
                img.is_identity()
            } else if j < n_k + n_qg {
                img == Word::letter((j - n_k) as u32, 1)
            } else {
                img == q.relators()[j - n_k - n_qg]
            }
        });

    // The two density passes are independent; run them side by side.
    let (density_p, density_m) = par::join(
        || density_check(gamma, &p_words, budgets.max_index, Some(budgets.coset_budget)),
        || density_check(gamma, &m_words, budgets.max_index, Some(budgets.coset_budget)),
    );

    // Assemble the records in their fixed order.
    let mut checks = Vec::with_capacity(21);
    checks.push(CheckRecord::new(
        "b_gate_order",
        Verdict::Pass,
        format!("|B| = {} equals d+1 with d = {}", b.order(), d),
        Some(b.order() as u64),
    ));
    checks.push(CheckRecord::pass_fail(
        "input_perfect",
        input_ab.is_trivial(),
        format!(
            "abelianization of Q: free rank {}, torsion {:?}",
            input_ab.free_rank,
            input_ab.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>()
        ),
        None,
    ));
    checks.push(CheckRecord::new(
        "input_h2",
        match input_h2.verdict {
            H2Verdict::Certified => Verdict::Pass,
            H2Verdict::Inconclusive => Verdict::BudgetExhausted,
        },
        format!(
            "deficiency certificate: H₁ free rank {}, {} generators, {} relators — {}",
            input_h2.h1_free_rank,
            input_h2.n_gens,
            input_h2.n_relators,
            match input_h2.verdict {
                H2Verdict::Certified => "balanced with finite H₁, so H₂ = 0",
                H2Verdict::Inconclusive => "certificate does not apply; nothing claimed",
            }
        ),
        None,
    ));
    checks.push(match &small_q.verdict {
        SmallQuotientVerdict::NoneUpTo { bound } => CheckRecord::new(
            "input_no_small_quotients",
            Verdict::Pass,
            format!(
                "no proper subgroup of index ≤ {bound}, hence no nontrivial quotient of order ≤ {bound} ({} nodes)",
                small_q.nodes_used
            ),
            Some(*bound as u64),
        ),
        SmallQuotientVerdict::Found { index, .. } => CheckRecord::new(
            "input_no_small_quotients",
            Verdict::Fail,
            format!("proper subgroup of index {index} found — Q has a nontrivial small quotient"),
            Some(*index as u64),
        ),
        SmallQuotientVerdict::BudgetExhausted { completed } => CheckRecord::new(
            "input_no_small_quotients",
            Verdict::BudgetExhausted,
            format!(
                "indices 2..={completed} are clean; the node budget stopped the sweep before {}",
                small_q.bound
            ),
            Some(*completed as u64),
        ),
    });
    checks.push(CheckRecord::asserted(
        "input_amalgam_assumption",
        "Q is taken to be a non-trivial amalgamated free product; no desk algorithm \
         detects amalgam decompositions, so this input hypothesis is recorded unchecked",
    ));
    checks.push(CheckRecord::asserted(
        "input_type_finf",
        "Q is taken to be of type F_∞ as an input hypothesis; finiteness properties \
         beyond the presentation itself are not desk-checkable",
    ));
    checks.push(CheckRecord::pass_fail(
        "rips_kill_check",
        kill_ok,
        "killing a₁ and a₂ in G recovers Q's generators and relators verbatim".to_string(),
        None,
    ));
    checks.push(CheckRecord::pass_fail(
        "rips_metric",
        metric.satisfied,
        match metric.worst() {
            Some(worst) => format!(
                "C′(1/{}) verified: worst relator has length {} with maximal piece {}",
                config.lambda, worst.length, worst.max_piece
            ),
            None => "no relators to check".to_string(),
        },
        Some(config.lambda),
    ));
    checks.push(CheckRecord::pass_fail(
        "rips_perfect",
        g_perfect,
        "Smith normal form of G's relation matrix certifies H₁(G) = 0 (pad exponents \
         were adjusted by construction, then verified)"
            .to_string(),
        None,
    ));
    checks.push(CheckRecord::pass_fail(
        "rips_kernel_nontrivial",
        kernel_nontrivial.iter().all(|&b| b),
        "Dehn reduction leaves a₁ and a₂ nonempty, so N ≠ 1 (valid under C′(1/6) \
         via Greendlinger's lemma)"
            .to_string(),
        None,
    ));
    checks.push(CheckRecord::pass_fail(
        "rips_kernel_normal_witness",
        normal_witness_ok,
        "for every generator x of Q and i ∈ {1,2}: x a_i x⁻¹ maps to 1 in Q (lies in N) \
         and Dehn-reduces to a nonempty word (stays nontrivial)"
            .to_string(),
        None,
    ));
    checks.push(CheckRecord::asserted(
        "rips_hyperbolic",
        "G is hyperbolic because C′(1/6) presentations define word-hyperbolic groups; \
         accepted from the construction's literature, not desk-checked",
    ));
    checks.push(CheckRecord::asserted(
        "rips_residually_finite",
        "G is residually finite via the virtually-special machinery for small-cancellation \
         groups; accepted from the construction's literature, not desk-checked",
    ));
    checks.push(CheckRecord::pass_fail(
        "m_finitely_generated",
        !m_words.is_empty(),
        format!(
            "M = N≀B is generated by the {} listed words: one copy of each kernel \
             generator per element of B, plus the t-letters",
            m_words.len()
        ),
        None,
    ));
    checks.push(CheckRecord::asserted(
        "p_finitely_presented",
        "finite presentability of P is inherited from the source construction \
         (an effective presentation is out of the workbench's scope; only the \
         generating set is emitted)",
    ));
    checks.push(CheckRecord::asserted(
        "gamma_type_finf",
        "for the ambient group, \"we could take it to be virtually of type F if desired\" — \
         recorded verbatim as an assertion, never acted on",
    ));
    checks.push(CheckRecord::pass_fail(
        "onto_q",
        onto_ok,
        "slot-0 images under G ↠ Q: kernel-slot generators ↦ 1, each Q-generator is \
         the image of its diagonal lift, relator lifts ↦ literal relators of Q, and \
         the t-letters ↦ 1 — witnessing P ↠ Q"
            .to_string(),
        None,
    ));
    checks.push(density_record("density_p", &density_p, "P"));
    checks.push(density_record("density_m", &density_m, "M"));
    checks.push(CheckRecord::asserted(
        "fixd",
        &format!(
            "the fixed-point property Fix_{d} for P's actions on d-dimensional complete \
             CAT(0) spaces is the source theorem's conclusion; no desk algorithm applies"
        ),
    ));
    checks.push(CheckRecord::asserted(
        "p_amalgam_no_fa",
        "P decomposes as a non-trivial amalgam (hence fails property FA); accepted from \
         the source construction, not desk-checked",
    ));
    debug_assert_eq!(checks.len(), 21);

    let gamma_names = gamma.names();
    let report = PipelineReport {
        parameters: PipelineParameters {
            d,
            b_name: b.name().to_string(),
            b_order: b.order(),
            p: config.p_label,
            lambda: config.lambda,
            pad: config.pad,
            pad_length_used: rips_out.pad_length,
            coset_budget: budgets.coset_budget,
            max_index: budgets.max_index,
            quotient_bound: budgets.quotient_bound,
        },
        q: PresentationText::from_presentation(q),
        gamma: PresentationText::from_presentation(gamma),
        m_gens: SubgroupGensText {
            description: "N≀B inside G≀B".to_string(),
            count: m_words.len(),
            gens: m_words
                .iter()
                .map(|w| format_word_names(w, gamma_names))
                .collect(),
        },
        p_gens: SubgroupGensText {
            description: "P_B⋊B inside G≀B".to_string(),
            count: p_words.len(),
            gens: p_words
                .iter()
                .map(|w| format_word_names(w, gamma_names))
                .collect(),
        },
        checks,
    };
    Ok(report)
}
