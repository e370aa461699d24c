//! Command implementations. Every handler returns the JSON `result` payload
//! plus the exit class; `main` wraps both in the report envelope.
//!
//! Exit contract: 0 = everything the run claims is verified or explicitly
//! carried as an assertion; 1 = a verifiable check came back false; 2 = a
//! budget or resource cap stopped a required computation; 3 = the request
//! itself was unusable (bad flags, unreadable file, malformed presentation).

use crate::cli::*;
use fpwb_core::abelian::{abelianization, h2_certificate};
use fpwb_core::coset::{enumerate, TcError};
use fpwb_core::density::{density_check, DensityVerdict};
use fpwb_core::fibre::{exhaustive_fibre_check, fibre_product_gens, flatten_subgroup, FibreError};
use fpwb_core::fingroup::FiniteGroupTable;
use fpwb_core::hom::{GroupHom, SubgroupGens};
use fpwb_core::lowindex::{low_index_subgroups, LowIndexError};
use fpwb_core::par;
use fpwb_core::pipeline::{
    assemble_triple, PipelineBudgets, PipelineConfig, PipelineError, PipelineReport, Verdict,
};
use fpwb_core::presentation::Presentation;
use fpwb_core::rips::{rips, RipsError};
use fpwb_core::smallcanc::{check_metric, dehn_reduce, DehnError};
use fpwb_core::spectrum::quotient_spectrum;
use fpwb_core::text::{
    format_word, parse_group_file, parse_word, print_group_file, GroupFile, ParseOptions,
};
use fpwb_core::word::Word;
use serde_json::{json, Value};
use std::fmt;
use std::path::{Path, PathBuf};

/// Exit classes the JSON-emitting path can produce (usage errors short-circuit
/// through [`CliError`] instead and exit 3).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitClass {
    Success = 0,
    CheckFailed = 1,
    BudgetExhausted = 2,
}

impl ExitClass {
    pub fn label(self) -> &'static str {
        match self {
            ExitClass::Success => "pass",
            ExitClass::CheckFailed => "check-failed",
            ExitClass::BudgetExhausted => "budget-exhausted",
        }
    }

    fn worst(self, other: ExitClass) -> ExitClass {
        // Severity order: a definite failure outranks a budget stop.
        match (self, other) {
            (ExitClass::CheckFailed, _) | (_, ExitClass::CheckFailed) => ExitClass::CheckFailed,
            (ExitClass::BudgetExhausted, _) | (_, ExitClass::BudgetExhausted) => {
                ExitClass::BudgetExhausted
            }
            _ => ExitClass::Success,
        }
    }
}

/// Anything that makes the request unusable; always exit 3.
#[derive(Debug)]
pub enum CliError {
    Io { path: PathBuf, message: String },
    Parse { path: PathBuf, message: String },
    Word { text: String, message: String },
    Usage(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io { path, message } => write!(f, "{}: {message}", path.display()),
            CliError::Parse { path, message } => write!(f, "{}: {message}", path.display()),
            CliError::Word { text, message } => write!(f, "word `{text}`: {message}"),
            CliError::Usage(message) => write!(f, "{message}"),
        }
    }
}

pub struct Outcome {
    pub command: &'static str,
    pub config: Value,
    pub result: Value,
    pub exit: ExitClass,
}

fn load(file: &Path, p: i64) -> Result<GroupFile, CliError> {
    let text = std::fs::read_to_string(file).map_err(|e| CliError::Io {
        path: file.to_path_buf(),
        message: e.to_string(),
    })?;
    parse_group_file(&text, ParseOptions { p: Some(p) }).map_err(|e| CliError::Parse {
        path: file.to_path_buf(),
        message: e.to_string(),
    })
}

fn word_over(text: &str, pres: &Presentation) -> Result<Word, CliError> {
    parse_word(text, pres).map_err(|e| CliError::Word {
        text: text.to_string(),
        message: e.to_string(),
    })
}

fn require(ok: bool, message: &str) -> Result<(), CliError> {
    if ok {
        Ok(())
    } else {
        Err(CliError::Usage(message.to_string()))
    }
}

fn preset_table(name: &str) -> Result<FiniteGroupTable, CliError> {
    FiniteGroupTable::preset(name).ok_or_else(|| {
        CliError::Usage(format!(
            "unknown top group `{name}` (expected C<n>, V4, S3, S4, A4, D4, D5, or D6)"
        ))
    })
}

fn emit_grp(path: &Path, name: Option<String>, pres: &Presentation) -> Result<(), CliError> {
    let file = GroupFile {
        name,
        presentation: pres.clone(),
    };
    std::fs::write(path, print_group_file(&file)).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

pub fn run(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Parse(args) => cmd_parse(args),
        Command::Abelianize(args) => cmd_abelianize(args),
        Command::H2cert(args) => cmd_h2cert(args),
        Command::Smallcanc(cmd) => match cmd {
            SmallcancCmd::Check { input, lambda } => cmd_smallcanc_check(input, *lambda),
            SmallcancCmd::Reduce { input, word } => cmd_smallcanc_reduce(input, word),
        },
        Command::Rips(args) => cmd_rips(args),
        Command::Fibre(args) => cmd_fibre(args),
        Command::Wreath(args) => cmd_wreath(args),
        Command::Enumerate(cmd) => match cmd {
            EnumerateCmd::Index {
                input,
                gens,
                budget,
            } => cmd_enumerate_index(input, gens, *budget),
            EnumerateCmd::Lowindex {
                input,
                max_index,
                budget,
            } => cmd_enumerate_lowindex(input, *max_index, *budget),
            EnumerateCmd::Spectrum {
                input,
                max_index,
                budget,
            } => cmd_enumerate_spectrum(input, *max_index, *budget),
            EnumerateCmd::Density {
                input,
                gens,
                max_index,
                budget,
            } => cmd_enumerate_density(input, gens, *max_index, *budget),
        },
        Command::Pipeline(args) => cmd_pipeline(args),
        Command::Batch(args) => cmd_batch(args),
    }
}

// ---------------------------------------------------------------------------
// Inspection commands.
// ---------------------------------------------------------------------------

fn cmd_parse(args: &InputArgs) -> Result<Outcome, CliError> {
    let file = load(&args.file, args.p)?;
    let p = &file.presentation;
    let result = json!({
        "name": file.name,
        "generators": p.names(),
        "n_gens": p.n_gens(),
        "relators": p.relators().iter().map(|r| format_word(r, p)).collect::<Vec<_>>(),
        "n_relators": p.relators().len(),
        "total_relator_length": p.total_relator_length(),
    });
    Ok(Outcome {
        command: "parse",
        config: serde_json::to_value(args).unwrap(),
        result,
        exit: ExitClass::Success,
    })
}

fn cmd_abelianize(args: &InputArgs) -> Result<Outcome, CliError> {
    let file = load(&args.file, args.p)?;
    let ab = abelianization(&file.presentation);
    let result = json!({
        "free_rank": ab.free_rank,
        "torsion": ab.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
        "trivial": ab.is_trivial(),
        "display": ab.to_string(),
    });
    Ok(Outcome {
        command: "abelianize",
        config: serde_json::to_value(args).unwrap(),
        result,
        exit: ExitClass::Success,
    })
}

fn cmd_h2cert(args: &InputArgs) -> Result<Outcome, CliError> {
    let file = load(&args.file, args.p)?;
    let cert = h2_certificate(&file.presentation);
    // The certificate is one-sided: Inconclusive claims nothing, so it is
    // not a failed check.
    Ok(Outcome {
        command: "h2cert",
        config: serde_json::to_value(args).unwrap(),
        result: serde_json::to_value(&cert).unwrap(),
        exit: ExitClass::Success,
    })
}

// ---------------------------------------------------------------------------
// Small cancellation.
// ---------------------------------------------------------------------------

fn cmd_smallcanc_check(input: &InputArgs, lambda: u64) -> Result<Outcome, CliError> {
    require(lambda >= 6, "--lambda must be at least 6")?;
    let file = load(&input.file, input.p)?;
    let report = check_metric(&file.presentation, lambda);
    let exit = if report.satisfied {
        ExitClass::Success
    } else {
        ExitClass::CheckFailed
    };
    Ok(Outcome {
        command: "smallcanc check",
        config: json!({"file": input.file, "p": input.p, "lambda": lambda}),
        result: serde_json::to_value(&report).unwrap(),
        exit,
    })
}

fn cmd_smallcanc_reduce(input: &InputArgs, word_text: &str) -> Result<Outcome, CliError> {
    let file = load(&input.file, input.p)?;
    let p = &file.presentation;
    let word = word_over(word_text, p)?;
    let config = json!({"file": input.file, "p": input.p, "word": word_text});
    match dehn_reduce(p, &word) {
        Ok(outcome) => Ok(Outcome {
            command: "smallcanc reduce",
            config,
            result: json!({
                "applicable": true,
                "input": format_word(&word, p),
                "reduced": format_word(&outcome.word, p),
                "trivial": outcome.is_trivial(),
                "steps": outcome.steps,
            }),
            exit: ExitClass::Success,
        }),
        // The metric precondition was checked and found false — a verifiable
        // check failed, not a usage error.
        Err(err @ DehnError::MetricNotSatisfied { .. }) => Ok(Outcome {
            command: "smallcanc reduce",
            config,
            result: json!({"applicable": false, "reason": err.to_string()}),
            exit: ExitClass::CheckFailed,
        }),
    }
}

// ---------------------------------------------------------------------------
// Constructions.
// ---------------------------------------------------------------------------

fn run_rips(
    file: &GroupFile,
    lambda: u64,
    pad: usize,
) -> Result<Result<fpwb_core::rips::RipsOutput, RipsError>, CliError> {
    require(lambda >= 6, "--lambda must be at least 6")?;
    require(pad >= 1, "--pad must be strictly positive")?;
    Ok(rips(&file.presentation, lambda, pad))
}

fn cmd_rips(args: &RipsArgs) -> Result<Outcome, CliError> {
    let file = load(&args.input.file, args.input.p)?;
    let config = serde_json::to_value(args).unwrap();
    let out = match run_rips(&file, args.lambda, args.pad)? {
        Ok(out) => out,
        Err(err @ RipsError::PadExhaustion { .. }) => {
            return Ok(Outcome {
                command: "rips",
                config,
                result: json!({"constructed": false, "reason": err.to_string()}),
                exit: ExitClass::BudgetExhausted,
            })
        }
    };
    let g = &out.g;
    let mut result = json!({
        "constructed": true,
        "n_gens": g.n_gens(),
        "n_relators": g.relators().len(),
        "total_relator_length": g.total_relator_length(),
        "generators": g.names(),
        "kernel_gens": out.kernel_gens.iter().map(|&a| g.name_of(a)).collect::<Vec<_>>(),
        "lambda_used": out.lambda_used,
        "pad_length_requested": args.pad,
        "pad_length_used": out.pad_length,
    });
    if args.full {
        result["relators"] = Value::Array(
            g.relators()
                .iter()
                .map(|r| Value::String(format_word(r, g)))
                .collect(),
        );
    }
    if let Some(path) = &args.emit {
        let name = file.name.clone().map(|n| format!("{n}_sc")).or(Some("sc".into()));
        emit_grp(path, name, g)?;
    }
    Ok(Outcome {
        command: "rips",
        config,
        result,
        exit: ExitClass::Success,
    })
}

/// A quotient map defined by matching generator names: every domain relator
/// must already hold in the codomain file (as a literal relator, up to
/// rotation and inversion, or by free triviality), and the extra codomain
/// relators lift to normal generators of the kernel.
fn name_matched_quotient(
    domain: &Presentation,
    codomain: &Presentation,
    budget: usize,
) -> Result<(GroupHom, Vec<Word>), CliError> {
    let mut images = Vec::with_capacity(domain.n_gens() as usize);
    for g in 0..domain.n_gens() {
        let name = domain.name_of(g);
        let target = codomain.gen_by_name(name).ok_or_else(|| {
            CliError::Usage(format!("quotient file has no generator named `{name}`"))
        })?;
        images.push(Word::letter(target, 1));
    }
    for name in codomain.names() {
        require(
            domain.gen_by_name(name).is_some(),
            &format!("quotient generator `{name}` does not occur in the domain file"),
        )?;
    }
    let hom = GroupHom::new(domain.clone(), codomain.clone(), images)
        .expect("images are single in-range letters");
    // Verify the map is a homomorphism: every domain relator must die in the
    // codomain. Exact when the codomain is finite and enumerable within the
    // budget; otherwise fall back to a syntactic containment check.
    let codomain_table = enumerate(codomain, &[], budget).ok();
    let holds_in_codomain = |w: &Word| {
        let image = hom.apply(w);
        match &codomain_table {
            Some(e) => e.table.trace(0, &image) == 0,
            None => {
                image.is_identity()
                    || codomain
                        .relators()
                        .iter()
                        .any(|r| cyclically_equal(r, &image))
            }
        }
    };
    for (i, r) in domain.relators().iter().enumerate() {
        require(
            holds_in_codomain(r),
            &format!(
                "domain relator {i} does not hold in the quotient file's group; \
                 the quotient file must present a quotient of the domain"
            ),
        )?;
    }
    // Every codomain relator, read back over the domain generators, lies in
    // the kernel; together they normally generate it.
    let back = |w: &Word| {
        w.rename_gens(|g| {
            domain
                .gen_by_name(codomain.name_of(g))
                .expect("name sets match")
        })
    };
    let kernel = codomain.relators().iter().map(back).collect();
    Ok((hom, kernel))
}

/// Equality as cyclic words, up to rotation and inversion.
fn cyclically_equal(a: &Word, b: &Word) -> bool {
    let a = a.cyclic_reduce();
    let b = b.cyclic_reduce();
    if a.len() != b.len() {
        return false;
    }
    let letters = |w: &Word| w.letters().map(|(g, s)| (g, s)).collect::<Vec<_>>();
    let xs = letters(&a);
    for candidate in [letters(&b), letters(&b.inverse())] {
        for shift in 0..candidate.len().max(1) {
            let rotated: Vec<_> = candidate
                .iter()
                .cycle()
                .skip(shift)
                .take(candidate.len())
                .copied()
                .collect();
            if xs == rotated {
                return true;
            }
        }
    }
    xs.is_empty()
}

fn cmd_fibre(args: &FibreArgs) -> Result<Outcome, CliError> {
    require(args.d >= 2, "--d must be at least 2 (number of fibre factors)")?;
    require(args.budget >= 1, "--budget must be strictly positive")?;
    let file = load(&args.input.file, args.input.p)?;
    let config = serde_json::to_value(args).unwrap();
    let (quotient, kernel) = match &args.quotient {
        Some(path) => {
            let codomain = load(path, args.input.p)?;
            name_matched_quotient(&file.presentation, &codomain.presentation, args.budget)?
        }
        None => match run_rips(&file, args.lambda, args.pad)? {
            Ok(out) => {
                let kernel: Vec<Word> =
                    out.kernel_gens.iter().map(|&a| Word::letter(a, 1)).collect();
                (out.quotient, kernel)
            }
            Err(err) => {
                return Ok(Outcome {
                    command: "fibre",
                    config,
                    result: json!({"constructed": false, "reason": err.to_string()}),
                    exit: ExitClass::BudgetExhausted,
                })
            }
        },
    };
    let gens = fibre_product_gens(&quotient, args.d, &kernel)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let (factor, tuples) = match &gens {
        SubgroupGens::Tuples { factor, gens, .. } => (factor.clone(), gens.clone()),
        SubgroupGens::Words { .. } => unreachable!("fibre generators are tuples"),
    };
    let mut result = json!({
        "arity": args.d,
        "factor_n_gens": factor.n_gens(),
        "n_gens": tuples.len(),
        "gens": tuples
            .iter()
            .map(|t| {
                t.components()
                    .iter()
                    .map(|c| format_word(c, &factor))
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>(),
    });
    let mut exit = ExitClass::Success;
    if args.index {
        let (ambient, words) = flatten_subgroup(&gens);
        match enumerate(&ambient, &words, args.budget) {
            Ok(e) => result["index"] = json!(e.index()),
            Err(err @ TcError::Overflow { .. }) => {
                result["index"] = json!({"reason": err.to_string()});
                exit = exit.worst(ExitClass::BudgetExhausted);
            }
        }
    }
    if args.check {
        match exhaustive_fibre_check(&quotient, args.d, &kernel, args.budget) {
            Ok(equal) => {
                result["check"] = json!({"performed": true, "equal": equal});
                if !equal {
                    exit = exit.worst(ExitClass::CheckFailed);
                }
            }
            Err(err @ (FibreError::Enumeration(_) | FibreError::TooLarge { .. })) => {
                result["check"] = json!({"performed": false, "reason": err.to_string()});
                exit = exit.worst(ExitClass::BudgetExhausted);
            }
            Err(other) => return Err(CliError::Usage(other.to_string())),
        }
    }
    Ok(Outcome {
        command: "fibre",
        config,
        result,
        exit,
    })
}

fn cmd_wreath(args: &WreathArgs) -> Result<Outcome, CliError> {
    require(args.budget >= 1, "--budget must be strictly positive")?;
    let file = load(&args.input.file, args.input.p)?;
    let top = preset_table(&args.b)?;
    let wr = fpwb_core::wreath::wreath_presentation(&file.presentation, &top);
    let g = wr.presentation();
    let config = serde_json::to_value(args).unwrap();
    let mut result = json!({
        "b": top.name(),
        "b_order": wr.b_order(),
        "n_gens": g.n_gens(),
        "n_relators": g.relators().len(),
        "total_relator_length": g.total_relator_length(),
        "generators": g.names(),
    });
    let mut exit = ExitClass::Success;
    if args.order {
        match enumerate(g, &[], args.budget) {
            Ok(e) => result["order"] = json!(e.index()),
            Err(err @ TcError::Overflow { .. }) => {
                result["order"] = json!({"reason": err.to_string()});
                exit = exit.worst(ExitClass::BudgetExhausted);
            }
        }
    }
    if args.diagonal_index {
        let (ambient, words) = flatten_subgroup(&fpwb_core::wreath::diagonal_times_b_gens(&wr));
        match enumerate(&ambient, &words, args.budget) {
            Ok(e) => result["diagonal_index"] = json!(e.index()),
            Err(err @ TcError::Overflow { .. }) => {
                result["diagonal_index"] = json!({"reason": err.to_string()});
                exit = exit.worst(ExitClass::BudgetExhausted);
            }
        }
    }
    if let Some(path) = &args.emit {
        let name = file
            .name
            .clone()
            .map(|n| format!("{n}_wr_{}", top.name().to_lowercase()))
            .or(Some("wr".into()));
        emit_grp(path, name, g)?;
    }
    Ok(Outcome {
        command: "wreath",
        config,
        result,
        exit,
    })
}

// ---------------------------------------------------------------------------
// Enumeration.
// ---------------------------------------------------------------------------

fn cmd_enumerate_index(
    input: &InputArgs,
    gen_texts: &[String],
    budget: usize,
) -> Result<Outcome, CliError> {
    require(budget >= 1, "--budget must be strictly positive")?;
    let file = load(&input.file, input.p)?;
    let p = &file.presentation;
    let gens = gen_texts
        .iter()
        .map(|t| word_over(t, p))
        .collect::<Result<Vec<_>, _>>()?;
    let config = json!({"file": input.file, "p": input.p, "gens": gen_texts, "budget": budget});
    match enumerate(p, &gens, budget) {
        Ok(e) => Ok(Outcome {
            command: "enumerate index",
            config,
            result: json!({
                "index": e.index(),
                "total_cosets_defined": e.total_defined,
            }),
            exit: ExitClass::Success,
        }),
        Err(err @ TcError::Overflow { .. }) => Ok(Outcome {
            command: "enumerate index",
            config,
            result: json!({"reason": err.to_string()}),
            exit: ExitClass::BudgetExhausted,
        }),
    }
}

fn cmd_enumerate_lowindex(
    input: &InputArgs,
    max_index: usize,
    budget: usize,
) -> Result<Outcome, CliError> {
    require(max_index >= 1, "--max-index must be strictly positive")?;
    require(budget >= 1, "--budget must be strictly positive")?;
    let file = load(&input.file, input.p)?;
    let p = &file.presentation;
    let config =
        json!({"file": input.file, "p": input.p, "max_index": max_index, "budget": budget});
    match low_index_subgroups(p, max_index, Some(budget)) {
        Ok(subs) => {
            let classes: Vec<Value> = subs
                .iter()
                .map(|s| {
                    json!({
                        "index": s.index,
                        "generator_actions": (0..p.n_gens())
                            .map(|g| s.table.generator_permutation(g))
                            .collect::<Vec<_>>(),
                    })
                })
                .collect();
            let mut counts = serde_json::Map::new();
            for k in 1..=max_index {
                let n = subs.iter().filter(|s| s.index == k).count();
                counts.insert(k.to_string(), json!(n));
            }
            Ok(Outcome {
                command: "enumerate lowindex",
                config,
                result: json!({
                    "max_index": max_index,
                    "n_classes": subs.len(),
                    "classes_per_index": counts,
                    "classes": classes,
                }),
                exit: ExitClass::Success,
            })
        }
        Err(err @ LowIndexError::Budget { .. }) => Ok(Outcome {
            command: "enumerate lowindex",
            config,
            result: json!({"reason": err.to_string()}),
            exit: ExitClass::BudgetExhausted,
        }),
    }
}

fn cmd_enumerate_spectrum(
    input: &InputArgs,
    max_index: usize,
    budget: usize,
) -> Result<Outcome, CliError> {
    require(max_index >= 1, "--max-index must be strictly positive")?;
    require(budget >= 1, "--budget must be strictly positive")?;
    let file = load(&input.file, input.p)?;
    let config =
        json!({"file": input.file, "p": input.p, "max_index": max_index, "budget": budget});
    let report = quotient_spectrum(&file.presentation, max_index, Some(budget));
    let exit = if report.certified_to == max_index {
        ExitClass::Success
    } else {
        ExitClass::BudgetExhausted
    };
    Ok(Outcome {
        command: "enumerate spectrum",
        config,
        result: serde_json::to_value(&report).unwrap(),
        exit,
    })
}

fn cmd_enumerate_density(
    input: &InputArgs,
    gen_texts: &[String],
    max_index: usize,
    budget: usize,
) -> Result<Outcome, CliError> {
    require(max_index >= 1, "--max-index must be strictly positive")?;
    require(budget >= 1, "--budget must be strictly positive")?;
    let file = load(&input.file, input.p)?;
    let p = &file.presentation;
    let gens = gen_texts
        .iter()
        .map(|t| word_over(t, p))
        .collect::<Result<Vec<_>, _>>()?;
    let config = json!({
        "file": input.file, "p": input.p, "gens": gen_texts,
        "max_index": max_index, "budget": budget,
    });
    let report = density_check(p, &gens, max_index, Some(budget));
    let exit = match report.verdict {
        DensityVerdict::Dense => ExitClass::Success,
        DensityVerdict::NotDense => ExitClass::CheckFailed,
        DensityVerdict::InconclusiveBudget => ExitClass::BudgetExhausted,
    };
    Ok(Outcome {
        command: "enumerate density",
        config,
        result: serde_json::to_value(&report).unwrap(),
        exit,
    })
}

// ---------------------------------------------------------------------------
// Pipeline and batch.
// ---------------------------------------------------------------------------

struct PipelineSetup {
    top: FiniteGroupTable,
    config: PipelineConfig,
}

fn validate_pipeline_params(
    d: usize,
    b: &str,
    p: i64,
    lambda: u64,
    pad: usize,
    coset_budget: usize,
    max_index: usize,
    quotient_bound: usize,
) -> Result<PipelineSetup, CliError> {
    require(d >= 1, "--d must be at least 1")?;
    require(lambda >= 6, "--lambda must be at least 6")?;
    require(pad >= 1, "--pad must be strictly positive")?;
    require(coset_budget >= 1, "--coset-budget must be strictly positive")?;
    require(max_index >= 1, "--max-index must be strictly positive")?;
    require(quotient_bound >= 2, "--quotient-bound must be at least 2")?;
    let top = preset_table(b)?;
    if top.order() != d + 1 {
        return Err(CliError::Usage(format!(
            "top group {} has order {}, but d = {d} requires order {}",
            top.name(),
            top.order(),
            d + 1
        )));
    }
    Ok(PipelineSetup {
        top,
        config: PipelineConfig {
            lambda,
            pad,
            p_label: Some(p),
            budgets: PipelineBudgets {
                coset_budget,
                max_index,
                quotient_bound,
            },
        },
    })
}

fn pipeline_exit(report: &PipelineReport) -> ExitClass {
    if report.checks.iter().any(|c| c.verdict == Verdict::Fail) {
        ExitClass::CheckFailed
    } else if report
        .checks
        .iter()
        .any(|c| c.verdict == Verdict::BudgetExhausted)
    {
        ExitClass::BudgetExhausted
    } else {
        ExitClass::Success
    }
}

fn verdict_counts(report: &PipelineReport) -> Value {
    let count = |v: Verdict| report.checks.iter().filter(|c| c.verdict == v).count();
    json!({
        "pass": count(Verdict::Pass),
        "fail": count(Verdict::Fail),
        "budget_exhausted": count(Verdict::BudgetExhausted),
        "asserted_by_paper": count(Verdict::AssertedByPaper),
    })
}

fn cmd_pipeline(args: &PipelineArgs) -> Result<Outcome, CliError> {
    let setup = validate_pipeline_params(
        args.d,
        &args.b,
        args.p,
        args.lambda,
        args.pad,
        args.coset_budget,
        args.max_index,
        args.quotient_bound,
    )?;
    let file = load(&args.q, args.p)?;
    let config = serde_json::to_value(args).unwrap();
    match assemble_triple(&file.presentation, args.d, &setup.top, &setup.config) {
        Ok(report) => {
            let exit = pipeline_exit(&report);
            let mut result = serde_json::to_value(&report).unwrap();
            result["verdict_counts"] = verdict_counts(&report);
            Ok(Outcome {
                command: "pipeline",
                config,
                result,
                exit,
            })
        }
        // The order gate is validated above, so only construction failures
        // reach this branch.
        Err(PipelineError::BOrderMismatch { .. }) => unreachable!("validated before the run"),
        Err(PipelineError::Rips(err)) => Ok(Outcome {
            command: "pipeline",
            config,
            result: json!({"constructed": false, "reason": err.to_string()}),
            exit: ExitClass::BudgetExhausted,
        }),
    }
}

fn cmd_batch(args: &BatchArgs) -> Result<Outcome, CliError> {
    let params = &args.params;
    let setup = validate_pipeline_params(
        params.d,
        &params.b,
        params.p,
        params.lambda,
        params.pad,
        params.coset_budget,
        params.max_index,
        params.quotient_bound,
    )?;
    let entries = std::fs::read_dir(&args.dir).map_err(|e| CliError::Io {
        path: args.dir.clone(),
        message: e.to_string(),
    })?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "grp"))
        .collect();
    files.sort();

    // Items run concurrently; a failing or even panicking item must not
    // take the batch down with it.
    let items: Vec<Value> = par::par_map(&files, |path| {
        let display = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| {
            let file = load(path, params.p)?;
            assemble_triple(&file.presentation, params.d, &setup.top, &setup.config)
                .map_err(|e| CliError::Parse {
                    path: path.clone(),
                    message: e.to_string(),
                })
        }));
        match outcome {
            Ok(Ok(report)) => {
                let exit = pipeline_exit(&report);
                json!({
                    "file": display,
                    "status": "ok",
                    "exit": exit.label(),
                    "verdict_counts": verdict_counts(&report),
                    "report": serde_json::to_value(&report).unwrap(),
                })
            }
            Ok(Err(err)) => json!({
                "file": display,
                "status": "error",
                "error": err.to_string(),
            }),
            Err(_) => json!({
                "file": display,
                "status": "error",
                "error": "internal panic while processing this item",
            }),
        }
    });

    let mut exit = ExitClass::Success;
    let mut ok = 0usize;
    let mut errors = 0usize;
    let mut budget = 0usize;
    let mut failed = 0usize;
    for item in &items {
        match item["status"].as_str() {
            Some("ok") => match item["exit"].as_str() {
                Some("pass") => ok += 1,
                Some("budget-exhausted") => {
                    budget += 1;
                    exit = exit.worst(ExitClass::BudgetExhausted);
                }
                _ => {
                    failed += 1;
                    exit = exit.worst(ExitClass::CheckFailed);
                }
            },
            // A malformed member is a failed item, not a usage error of the
            // batch itself: isolation is the point.
            _ => {
                errors += 1;
                exit = exit.worst(ExitClass::CheckFailed);
            }
        }
    }
    Ok(Outcome {
        command: "batch",
        config: serde_json::to_value(args).unwrap(),
        result: json!({
            "summary": {
                "files": items.len(),
                "passed": ok,
                "check_failed": failed,
                "budget_exhausted": budget,
                "errors": errors,
            },
            "items": items,
        }),
        exit,
    })
}
