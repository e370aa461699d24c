//! Homomorphisms given by generator images, tuples over direct powers, and
//! subgroup generating data.

use thiserror::Error;

use crate::presentation::Presentation;
use crate::word::Word;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HomError {
    #[error("expected {expected} generator images, got {got}")]
    ImageCount { expected: usize, got: usize },
    #[error("image of generator {gen} uses generator {bad}, outside the codomain")]
    ImageOutOfRange { gen: u32, bad: u32 },
    #[error("relator {index} does not map to a syntactically trivial word")]
    RelatorNotRespected { index: usize },
}

/// A homomorphism between presented groups, recorded as the images of the
/// domain's generators.
#[derive(Clone, Debug)]
pub struct GroupHom {
    domain: Presentation,
    codomain: Presentation,
    images: Vec<Word>,
}

impl GroupHom {
    pub fn new(
        domain: Presentation,
        codomain: Presentation,
        images: Vec<Word>,
    ) -> Result<GroupHom, HomError> {
        if images.len() != domain.n_gens() as usize {
            return Err(HomError::ImageCount {
                expected: domain.n_gens() as usize,
                got: images.len(),
            });
        }
        for (gen, w) in images.iter().enumerate() {
            if let Some(bad) = w.max_gen() {
                if bad >= codomain.n_gens() {
                    return Err(HomError::ImageOutOfRange {
                        gen: gen as u32,
                        bad,
                    });
                }
            }
        }
        Ok(GroupHom {
            domain,
            codomain,
            images,
        })
    }

    /// The identity homomorphism of a presentation.
    pub fn identity(p: &Presentation) -> GroupHom {
        let images = (0..p.n_gens()).map(|g| Word::letter(g, 1)).collect();
        GroupHom::new(p.clone(), p.clone(), images).expect("identity images are valid")
    }

    pub fn domain(&self) -> &Presentation {
        &self.domain
    }

    pub fn codomain(&self) -> &Presentation {
        &self.codomain
    }

    pub fn image_of_gen(&self, g: u32) -> &Word {
        &self.images[g as usize]
    }

    pub fn apply(&self, w: &Word) -> Word {
        w.substitute(|g| self.images[g as usize].clone())
    }

    /// Syntactic well-definedness: every domain relator must map to a word
    /// that freely reduces to the identity or literally equals a codomain
    /// relator (or its inverse). Sufficient, not necessary — but it is exact
    /// for the quotient maps this crate constructs, where relators map to
    /// relators verbatim.
    pub fn verify_relators_syntactically(&self) -> Result<(), HomError> {
        for (index, r) in self.domain.relators().iter().enumerate() {
            let image = self.apply(r);
            let ok = image.is_identity()
                || self
                    .codomain
                    .relators()
                    .iter()
                    .any(|c| *c == image || c.inverse() == image);
            if !ok {
                return Err(HomError::RelatorNotRespected { index });
            }
        }
        Ok(())
    }

    /// Surjectivity witness: true when every codomain generator appears
    /// verbatim (as the single-letter word g) among the generator images.
    pub fn hits_every_codomain_generator(&self) -> bool {
        (0..self.codomain.n_gens())
            .all(|c| self.images.iter().any(|w| *w == Word::letter(c, 1)))
    }
}

/// An element of a direct power, one word per slot.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TupleWord {
    components: Vec<Word>,
}

impl TupleWord {
    pub fn new(components: Vec<Word>) -> TupleWord {
        assert!(!components.is_empty(), "tuples need at least one slot");
        TupleWord { components }
    }

    pub fn identity(arity: usize) -> TupleWord {
        TupleWord::new(vec![Word::identity(); arity])
    }

    /// `w` placed in `slot`, identity elsewhere.
    pub fn slotted(arity: usize, slot: usize, w: Word) -> TupleWord {
        assert!(slot < arity);
        let mut components = vec![Word::identity(); arity];
        components[slot] = w;
        TupleWord::new(components)
    }

    pub fn diagonal(arity: usize, w: Word) -> TupleWord {
        TupleWord::new(vec![w; arity])
    }

    pub fn arity(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Word] {
        &self.components
    }

    pub fn concat(&self, other: &TupleWord) -> TupleWord {
        assert_eq!(self.arity(), other.arity());
        TupleWord::new(
            self.components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.concat(b))
                .collect(),
        )
    }

    pub fn inverse(&self) -> TupleWord {
        TupleWord::new(self.components.iter().map(Word::inverse).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.components.iter().all(Word::is_identity)
    }
}

/// A subgroup described by a generating set, either directly over an ambient
/// presentation or as tuples over a direct power of one factor.
#[derive(Clone, Debug)]
pub enum SubgroupGens {
    Words {
        ambient: Presentation,
        gens: Vec<Word>,
    },
    Tuples {
        factor: Presentation,
        arity: usize,
        gens: Vec<TupleWord>,
    },
}

impl SubgroupGens {
    pub fn len(&self) -> usize {
        match self {
            SubgroupGens::Words { gens, .. } => gens.len(),
            SubgroupGens::Tuples { gens, .. } => gens.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
