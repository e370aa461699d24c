//! Finite presentations `⟨ generators | relators ⟩`.

use crate::word::Word;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PresentationError {
    #[error("relator {index} uses generator {gen}, but only {n_gens} generators are declared")]
    GeneratorOutOfRange { index: usize, gen: u32, n_gens: u32 },
    #[error("duplicate generator name `{0}`")]
    DuplicateName(String),
    #[error("generator name `{0}` is empty or contains whitespace")]
    BadName(String),
}

/// A finite presentation. Generators are indexed `0..n_gens`; `names` gives
/// each one a printable name. Relators are kept freely reduced (a `Word`
/// invariant) but are *not* cyclically reduced or deduplicated — callers that
/// need those views ask for them explicitly.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Presentation {
    names: Vec<String>,
    relators: Vec<Word>,
}

impl Presentation {
    pub fn new(names: Vec<String>, relators: Vec<Word>) -> Result<Self, PresentationError> {
        let mut seen = std::collections::HashSet::new();
        for name in &names {
            if name.is_empty() || name.chars().any(char::is_whitespace) {
                return Err(PresentationError::BadName(name.clone()));
            }
            if !seen.insert(name.clone()) {
                return Err(PresentationError::DuplicateName(name.clone()));
            }
        }
        let n = names.len() as u32;
        for (index, r) in relators.iter().enumerate() {
            if let Some(g) = r.max_gen() {
                if g >= n {
                    return Err(PresentationError::GeneratorOutOfRange {
                        index,
                        gen: g,
                        n_gens: n,
                    });
                }
            }
        }
        Ok(Presentation { names, relators })
    }

    /// Presentation with auto-generated names `x0, x1, …`.
    pub fn with_auto_names(n_gens: u32, relators: Vec<Word>) -> Result<Self, PresentationError> {
        let names = (0..n_gens).map(|i| format!("x{i}")).collect();
        Presentation::new(names, relators)
    }

    pub fn n_gens(&self) -> u32 {
        self.names.len() as u32
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name_of(&self, gen: u32) -> &str {
        &self.names[gen as usize]
    }

    /// Index of the generator called `name`, if any.
    pub fn gen_by_name(&self, name: &str) -> Option<u32> {
        self.names.iter().position(|n| n == name).map(|i| i as u32)
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// Total letter length of all relators.
    pub fn total_relator_length(&self) -> usize {
        self.relators.iter().map(|r| r.len()).sum()
    }

    /// Kill a set of generators: substitute the identity for each of them in
    /// every relator, drop relators that become trivial, and renumber the
    /// surviving generators (preserving order and names).
    pub fn kill_generators(&self, dead: &[u32]) -> Presentation {
        let dead_set: std::collections::HashSet<u32> = dead.iter().copied().collect();
        let mut remap = vec![u32::MAX; self.names.len()];
        let mut names = Vec::new();
        for (i, name) in self.names.iter().enumerate() {
            if !dead_set.contains(&(i as u32)) {
                remap[i] = names.len() as u32;
                names.push(name.clone());
            }
        }
        let relators = self
            .relators
            .iter()
            .map(|r| {
                r.substitute(|g| {
                    if dead_set.contains(&g) {
                        Word::identity()
                    } else {
                        Word::letter(remap[g as usize], 1)
                    }
                })
            })
            .filter(|r| !r.is_identity())
            .collect();
        Presentation { names, relators }
    }

    /// A fresh generator name based on `stem` that does not collide with any
    /// existing name: `stem` itself if free, else `stem_1`, `stem_2`, ….
    pub fn fresh_name(&self, stem: &str) -> String {
        fresh_name_among(self.names.iter().map(String::as_str), stem)
    }
}

/// Pick a name based on `stem` avoiding every name in `taken`.
pub fn fresh_name_among<'a, I: IntoIterator<Item = &'a str>>(taken: I, stem: &str) -> String {
    let taken: std::collections::HashSet<&str> = taken.into_iter().collect();
    if !taken.contains(stem) {
        return stem.to_string();
    }
    for k in 1u64.. {
        let candidate = format!("{stem}_{k}");
        if !taken.contains(candidate.as_str()) {
            return candidate;
        }
    }
    unreachable!()
}
