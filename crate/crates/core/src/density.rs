//! Density of a subgroup against the finite-index lattice.
//!
//! Given an ambient finitely presented group Γ and a subgroup P ≤ Γ specified
//! by generator words, check whether P·H = Γ for every finite-index subgroup
//! H of index at most `max_index`. This is the obstruction that separates a
//! genuine Grothendieck-style pair from a trivially deficient inclusion: if
//! some finite-index H misses P·H, the inclusion P ↪ Γ is visible on a finite
//! quotient.
//!
//! For one conjugacy class of subgroups, acting on the n cosets of a
//! representative H: the P-orbit of the point gH corresponds to P·(gHg⁻¹)
//! translated by g, so "P·H′ = Γ for every conjugate H′ of H" holds exactly
//! when the permutations of the P-generators are *transitive* on all n
//! points. Checking transitivity per class therefore covers every subgroup,
//! not just class representatives.

use serde::Serialize;

use crate::lowindex::low_index_subgroups_by_level;
use crate::par;
use crate::perm::{self, Perm};
use crate::presentation::Presentation;
use crate::word::Word;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DensityViolation {
    /// Index of the conjugacy class of subgroups witnessing the failure.
    pub index: usize,
    /// Position of the class in the deterministic low-index enumeration.
    pub class_id: usize,
    /// Number of orbits of the subgroup's image (1 would mean dense).
    pub orbits: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityVerdict {
    /// P·H = Γ for every subgroup H of index ≤ the requested bound.
    Dense,
    /// Some finite-index subgroup separates P from Γ (see violations).
    NotDense,
    /// No violation found, but the node budget stopped the enumeration
    /// before the requested bound.
    InconclusiveBudget,
}

#[derive(Clone, Debug, Serialize)]
pub struct DensityReport {
    pub max_index_requested: usize,
    /// Every class of subgroups with index ≤ this value was checked.
    pub max_index_reached: usize,
    pub nodes_used: usize,
    pub classes_checked: usize,
    pub violations: Vec<DensityViolation>,
    pub verdict: DensityVerdict,
}

/// Check P·H = Γ for all subgroups H ≤ Γ of index ≤ `max_index`, where P is
/// generated by `subgroup_gens` (words over Γ's generators).
pub fn density_check(
    gamma: &Presentation,
    subgroup_gens: &[Word],
    max_index: usize,
    node_budget: Option<usize>,
) -> DensityReport {
    for w in subgroup_gens {
        assert!(
            w.max_gen().map_or(true, |g| g < gamma.n_gens()),
            "subgroup generator uses a generator outside the ambient presentation"
        );
    }
    let lev = low_index_subgroups_by_level(gamma, max_index, node_budget);
    let orbit_counts: Vec<(usize, usize)> = par::par_map(&lev.subgroups, |sub| {
        let n = sub.table.n_cosets();
        let perms: Vec<Perm> = subgroup_gens
            .iter()
            .map(|w| (0..n as u32).map(|x| sub.table.trace(x, w)).collect())
            .collect();
        (sub.index, perm::orbit_count(n, &perms))
    });
    let violations: Vec<DensityViolation> = orbit_counts
        .iter()
        .enumerate()
        .filter(|(_, &(_, orbits))| orbits != 1)
        .map(|(class_id, &(index, orbits))| DensityViolation {
            index,
            class_id,
            orbits,
        })
        .collect();
    let verdict = if !violations.is_empty() {
        DensityVerdict::NotDense
    } else if lev.completed_index < max_index {
        DensityVerdict::InconclusiveBudget
    } else {
        DensityVerdict::Dense
    };
    DensityReport {
        max_index_requested: max_index,
        max_index_reached: lev.completed_index,
        nodes_used: lev.nodes_used,
        classes_checked: lev.subgroups.len(),
        violations,
        verdict,
    }
}
