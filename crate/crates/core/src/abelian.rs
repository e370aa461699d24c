//! Abelian invariants of a presentation, and a syntactic certificate for
//! trivial Schur multiplier.

use crate::intmat::IntMatrix;
use crate::presentation::Presentation;
use num_bigint::BigInt;
use num_traits::One;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::fmt;

/// Exponent-sum matrix: one row per relator, one column per generator.
pub fn relation_matrix(p: &Presentation) -> IntMatrix {
    let rows: Vec<Vec<i64>> = p
        .relators()
        .iter()
        .map(|r| (0..p.n_gens()).map(|g| r.exponent_sum(g)).collect())
        .collect();
    if rows.is_empty() {
        IntMatrix::zeros(0, p.n_gens() as usize)
    } else {
        IntMatrix::from_rows(&rows)
    }
}

/// The abelianization `ℤ^free_rank ⊕ ℤ/t₁ ⊕ … ⊕ ℤ/tₖ` with `t₁ | t₂ | …`,
/// all `tᵢ > 1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Abelianization {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl Abelianization {
    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }
}

// Display as "0", "Z", "Z^2 + Z/2 + Z/6", ….
impl fmt::Display for Abelianization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl Serialize for Abelianization {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Abelianization", 3)?;
        s.serialize_field("free_rank", &self.free_rank)?;
        let torsion: Vec<String> = self.torsion.iter().map(|t| t.to_string()).collect();
        s.serialize_field("torsion", &torsion)?;
        s.serialize_field("display", &self.to_string())?;
        s.end()
    }
}

/// First homology (the abelianization), computed from the Smith normal form
/// of the relation matrix.
pub fn abelianization(p: &Presentation) -> Abelianization {
    let m = relation_matrix(p);
    let snf = m.smith_normal_form();
    debug_assert!(snf.verify(&m));
    Abelianization {
        free_rank: p.n_gens() as usize - snf.rank(),
        torsion: snf
            .factors
            .iter()
            .filter(|f| !f.is_one())
            .cloned()
            .collect(),
    }
}

pub fn is_perfect(p: &Presentation) -> bool {
    abelianization(p).is_trivial()
}

/// Verdict of the syntactic second-homology certificate.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum H2Verdict {
    /// `H₂ = 0` is certified by a deficiency count.
    Certified,
    /// The certificate does not apply; nothing is claimed either way.
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct H2Certificate {
    pub verdict: H2Verdict,
    /// `rank H₁` (the free rank of the abelianization).
    pub h1_free_rank: usize,
    /// `rank H₁ + #generators − #relators`, a lower bound on the deficiency.
    pub n_gens: usize,
    pub n_relators: usize,
}

/// Certify `H₂ = 0` when the presentation's deficiency argument applies:
/// `H₂` embeds into `ℤ^{#relators}` with corank at least
/// `#gens − rank H₁`, so if `H₁` has free rank 0 and there are no more
/// relators than generators, `H₂` must vanish. Anything else is reported as
/// `Inconclusive` — the certificate is one-sided.
pub fn h2_certificate(p: &Presentation) -> H2Certificate {
    let ab = abelianization(p);
    let n_gens = p.n_gens() as usize;
    let n_relators = p.relators().len();
    let verdict = if ab.free_rank == 0 && n_relators <= n_gens {
        H2Verdict::Certified
    } else {
        H2Verdict::Inconclusive
    };
    H2Certificate {
        verdict,
        h1_free_rank: ab.free_rank,
        n_gens,
        n_relators,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{Syllable, Word};

    fn w(pairs: &[(u32, i64)]) -> Word {
        Word::from_syllables(pairs.iter().map(|&(g, e)| Syllable::new(g, e)))
    }

    #[test]
    fn free_groups() {
        let f2 = Presentation::with_auto_names(2, vec![]).unwrap();
        let ab = abelianization(&f2);
        assert_eq!(ab.free_rank, 2);
        assert!(ab.torsion.is_empty());
        assert_eq!(ab.to_string(), "Z^2");
        assert_eq!(h2_certificate(&f2).verdict, H2Verdict::Inconclusive);
    }

    #[test]
    fn cyclic_and_klein() {
        // ⟨a | a^6⟩ -> Z/6
        let c6 = Presentation::with_auto_names(1, vec![w(&[(0, 6)])]).unwrap();
        let ab = abelianization(&c6);
        assert_eq!(ab.free_rank, 0);
        assert_eq!(ab.torsion, vec![BigInt::from(6)]);
        assert_eq!(ab.to_string(), "Z/6");
        // Klein bottle ⟨a, b | a b a b^-1⟩ -> Z + Z/2
        let klein =
            Presentation::with_auto_names(2, vec![w(&[(0, 1), (1, 1), (0, 1), (1, -1)])]).unwrap();
        let ab = abelianization(&klein);
        assert_eq!(ab.free_rank, 1);
        assert_eq!(ab.torsion, vec![BigInt::from(2)]);
        assert_eq!(ab.to_string(), "Z + Z/2");
    }

    #[test]
    fn z_squared_is_inconclusive() {
        // ⟨a, b | [a,b]⟩: H₂ = Z, and indeed the certificate refuses.
        let zz = Presentation::with_auto_names(
            2,
            vec![w(&[(0, 1), (1, 1), (0, -1), (1, -1)])],
        )
        .unwrap();
        assert_eq!(h2_certificate(&zz).verdict, H2Verdict::Inconclusive);
        assert_eq!(abelianization(&zz).free_rank, 2);
    }

    #[test]
    fn perfect_balanced_is_certified() {
        // Binary icosahedral group ⟨a, b | (ab)^2 a^-3, a^3 b^-5⟩:
        // perfect and balanced.
        let p = Presentation::with_auto_names(
            2,
            vec![
                w(&[(0, 1), (1, 1), (0, 1), (1, 1), (0, -3)]),
                w(&[(0, 3), (1, -5)]),
            ],
        )
        .unwrap();
        assert!(is_perfect(&p));
        assert_eq!(h2_certificate(&p).verdict, H2Verdict::Certified);
    }

    #[test]
    fn trivial_display() {
        let p = Presentation::with_auto_names(1, vec![w(&[(0, 1)])]).unwrap();
        assert_eq!(abelianization(&p).to_string(), "0");
        assert!(is_perfect(&p));
    }
}
