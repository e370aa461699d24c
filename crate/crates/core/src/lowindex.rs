//! Low-index subgroup search.
//!
//! Depth-first search over partial coset tables in canonical (first-
//! appearance) numbering, yielding every subgroup of index at most `n` —
//! equivalently every transitive action of the group on at most `n` points
//! with a marked base point. Results are deduplicated up to conjugacy by a
//! canonical-form comparison and returned sorted.
//!
//! Very long relators are withheld from constraint propagation and enforced
//! only when a table closes: on tables this small a 10⁵-letter relator scan
//! at every search node costs far more than the pruning it buys. This only
//! delays pruning; it cannot change the solution set.

use crate::coset::CosetTable;
use crate::presentation::Presentation;
use crate::word::Word;
use thiserror::Error;

const UNDEF: u32 = u32::MAX;

/// Relators longer than this (in letters) are checked only on closed tables.
pub const PROPAGATION_LETTER_LIMIT: usize = 512;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LowIndexError {
    #[error("search budget exhausted after {nodes} nodes")]
    Budget { nodes: usize },
}

#[derive(Clone, Debug)]
pub struct LowIndexSubgroup {
    pub index: usize,
    /// Canonical-form coset table of the action on the subgroup's cosets.
    pub table: CosetTable,
}

/// All subgroups of index ≤ `max_index`, one per conjugacy class (the whole
/// group — index 1 — included), sorted by index and then by table content.
///
/// `node_budget` caps the number of consistent partial tables the search
/// constructs (None = unlimited) — the low-index analogue of a coset budget
/// in enumeration: every unit corresponds to a table extension that survived
/// propagation, and the work spent rejecting candidates is bounded by
/// (index + 1) probes per counted node.
pub fn low_index_subgroups(
    p: &Presentation,
    max_index: usize,
    node_budget: Option<usize>,
) -> Result<Vec<LowIndexSubgroup>, LowIndexError> {
    let mut search = Search::new(p, max_index, node_budget);
    search.run(None, false)?;
    Ok(finish(p, search))
}

/// Result of a level-by-level enumeration: one representative per conjugacy
/// class for every index from 1 through `completed_index`. Indices beyond
/// `completed_index` ran out of node budget before finishing.
#[derive(Clone, Debug)]
pub struct LevelledSubgroups {
    pub completed_index: usize,
    pub nodes_used: usize,
    pub subgroups: Vec<LowIndexSubgroup>,
}

/// Enumerate subgroups index by index so that budget exhaustion yields a
/// clean prefix ("everything up to index k") instead of nothing. Used by the
/// quotient-spectrum and density checks, which need exactly that guarantee.
pub fn low_index_subgroups_by_level(
    p: &Presentation,
    max_index: usize,
    node_budget: Option<usize>,
) -> LevelledSubgroups {
    let mut nodes_used = 0usize;
    let mut subgroups = Vec::new();
    let mut completed_index = 0usize;
    for level in 1..=max_index {
        let remaining = node_budget.map(|b| b.saturating_sub(nodes_used));
        if remaining == Some(0) {
            break;
        }
        let mut search = Search::new(p, level, remaining);
        let outcome = search.run(Some(level), false);
        nodes_used += search.nodes;
        match outcome {
            Err(LowIndexError::Budget { .. }) => break,
            Ok(()) => {
                subgroups.extend(finish(p, search));
                completed_index = level;
            }
        }
    }
    LevelledSubgroups {
        completed_index,
        nodes_used,
        subgroups,
    }
}

fn finish(p: &Presentation, search: Search) -> Vec<LowIndexSubgroup> {
    let ncols = search.ncols;
    let mut reps = std::collections::BTreeSet::new();
    for flat in &search.solutions {
        let n = flat.len() / ncols;
        reps.insert((n, canonical_form(flat, n, ncols)));
    }
    // BTreeSet ordering = (index, canonical table): deterministic output.
    reps.into_iter()
        .map(|(n, canon)| LowIndexSubgroup {
            index: n,
            table: CosetTable::from_flat(p.n_gens(), n, canon),
        })
        .collect()
}

/// Verdict of [`certify_no_small_quotients`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SmallQuotientVerdict {
    /// No proper subgroup of index ≤ bound exists; hence no nontrivial
    /// quotient of order ≤ bound exists either.
    NoneUpTo { bound: usize },
    /// A proper subgroup of the stated index was found (the certificate
    /// fails); its Schreier generators witness it.
    Found {
        index: usize,
        schreier_generators: Vec<Word>,
    },
    /// The node budget ran out; indices `2..=completed` were fully searched
    /// and are clean.
    BudgetExhausted { completed: usize },
}

#[derive(Clone, Debug)]
pub struct SmallQuotientReport {
    pub bound: usize,
    pub nodes_used: usize,
    pub verdict: SmallQuotientVerdict,
}

/// Search for proper subgroups level by level (index 2, 3, … up to `bound`).
/// Any nontrivial quotient of order q ≤ bound would pull back to a proper
/// subgroup of index q (the preimage of a point stabilizer of the regular
/// action), so a clean sweep certifies there is no such quotient.
pub fn certify_no_small_quotients(
    p: &Presentation,
    bound: usize,
    node_budget: Option<usize>,
) -> SmallQuotientReport {
    // An existence sweep may prune whole symmetry orbits of actions: if any
    // subgroup of index k exists, one survives the extended prune.
    let symmetries = relator_symmetries(p);
    let mut nodes_used = 0usize;
    for level in 2..=bound {
        let remaining = node_budget.map(|b| b.saturating_sub(nodes_used));
        if remaining == Some(0) {
            return SmallQuotientReport {
                bound,
                nodes_used,
                verdict: SmallQuotientVerdict::BudgetExhausted { completed: level - 1 },
            };
        }
        let mut search = Search::new(p, level, remaining).with_symmetries(&symmetries);
        let outcome = search.run(Some(level), true);
        nodes_used += search.nodes;
        match outcome {
            Err(LowIndexError::Budget { .. }) => {
                return SmallQuotientReport {
                    bound,
                    nodes_used,
                    verdict: SmallQuotientVerdict::BudgetExhausted { completed: level - 1 },
                };
            }
            Ok(()) => {
                if let Some(flat) = search.solutions.first() {
                    let n = flat.len() / search.ncols;
                    let table = CosetTable::from_flat(p.n_gens(), n, flat.clone());
                    return SmallQuotientReport {
                        bound,
                        nodes_used,
                        verdict: SmallQuotientVerdict::Found {
                            index: n,
                            schreier_generators: table.schreier_generators(),
                        },
                    };
                }
            }
        }
    }
    SmallQuotientReport {
        bound,
        nodes_used,
        verdict: SmallQuotientVerdict::NoneUpTo { bound },
    }
}

struct Search {
    ncols: usize,
    max_rows: usize,
    /// Relators short enough to propagate during the search,
    /// sorted shortest-first so cheap contradictions surface early.
    short: Vec<Vec<u16>>,
    /// Long relators, enforced only on closed tables. Kept in syllable form:
    /// a padding word carries exponents in the tens of thousands, and on a
    /// table with at most `max_rows` points a power of a permutation costs
    /// one lookup rather than one step per letter.
    long: Vec<Vec<(u32, i64)>>,
    table: Vec<u32>,
    rows: usize,
    trail: Vec<(u32, u16)>,
    nodes: usize,
    budget: Option<usize>,
    solutions: Vec<Vec<u32>>,
    /// Abandon the search as soon as one table has been recorded.
    stop_after_first: bool,
    /// Column maps of generator symmetries of the presentation, used to
    /// extend the canonicity prune. Installing these makes the search keep
    /// only one branch per symmetry orbit, so it is only valid for existence
    /// questions — never for full conjugacy-class enumeration.
    auts: Vec<Vec<u16>>,
}

fn col_of(gen: u32, positive: bool) -> u16 {
    (2 * gen + if positive { 0 } else { 1 }) as u16
}

fn inv_col(col: u16) -> u16 {
    col ^ 1
}

fn compile(w: &Word) -> Vec<u16> {
    w.letters().map(|(g, s)| col_of(g, s > 0)).collect()
}

struct Conflict;

impl Search {
    fn new(p: &Presentation, max_rows: usize, budget: Option<usize>) -> Search {
        assert!(max_rows >= 1);
        let mut short = Vec::new();
        let mut long = Vec::new();
        for r in p.relators() {
            let r = r.cyclic_reduce();
            if r.is_identity() {
                continue;
            }
            if r.len() <= PROPAGATION_LETTER_LIMIT {
                short.push(compile(&r));
            } else {
                long.push(r.syllables().iter().map(|s| (s.gen, s.exp)).collect());
            }
        }
        short.sort_by_key(|r| r.len());
        let ncols = 2 * p.n_gens() as usize;
        Search {
            ncols,
            max_rows,
            short,
            long,
            table: vec![UNDEF; max_rows * ncols],
            rows: 1,
            trail: Vec::new(),
            nodes: 0,
            budget: None,
            solutions: Vec::new(),
            stop_after_first: false,
            auts: Vec::new(),
        }
        .with_budget(budget)
    }

    fn with_budget(mut self, budget: Option<usize>) -> Search {
        self.budget = budget;
        self
    }

    fn with_symmetries(mut self, auts: &[Vec<u16>]) -> Search {
        self.auts = auts.to_vec();
        self
    }

    fn get(&self, row: u32, col: u16) -> u32 {
        self.table[row as usize * self.ncols + col as usize]
    }

    fn set_raw(&mut self, row: u32, col: u16, v: u32) {
        self.table[row as usize * self.ncols + col as usize] = v;
    }

    /// Record the mutually inverse pair on the trail.
    fn assign(&mut self, row: u32, col: u16, v: u32) {
        debug_assert_eq!(self.get(row, col), UNDEF);
        debug_assert_eq!(self.get(v, inv_col(col)), UNDEF);
        self.set_raw(row, col, v);
        self.trail.push((row, col));
        self.set_raw(v, inv_col(col), row);
        self.trail.push((v, inv_col(col)));
    }

    fn rollback(&mut self, mark: usize, rows_mark: usize) {
        while self.trail.len() > mark {
            let (row, col) = self.trail.pop().unwrap();
            self.set_raw(row, col, UNDEF);
        }
        self.rows = rows_mark;
    }

    /// Scan one relator at one coset on the partial table. Returns whether a
    /// new cell was deduced; a completed cycle landing elsewhere is a
    /// conflict (low-index search never merges cosets).
    fn scan(&mut self, alpha: u32, word: &[u16]) -> Result<bool, Conflict> {
        let n = word.len();
        let mut f = alpha;
        let mut i = 0usize;
        while i < n {
            let next = self.get(f, word[i]);
            if next == UNDEF {
                break;
            }
            f = next;
            i += 1;
        }
        if i == n {
            return if f == alpha { Ok(false) } else { Err(Conflict) };
        }
        let mut b = alpha;
        let mut j = n;
        while j > i {
            let next = self.get(b, inv_col(word[j - 1]));
            if next == UNDEF {
                break;
            }
            b = next;
            j -= 1;
        }
        if j == i {
            return if f == b { Ok(false) } else { Err(Conflict) };
        }
        if j == i + 1 {
            self.assign(f, word[i], b);
            return Ok(true);
        }
        Ok(false)
    }

    /// Propagate short relators to a fixpoint.
    fn propagate(&mut self) -> Result<(), Conflict> {
        loop {
            let mut changed = false;
            for ri in 0..self.short.len() {
                let word = std::mem::take(&mut self.short[ri]);
                for alpha in 0..self.rows as u32 {
                    match self.scan(alpha, &word) {
                        Ok(c) => changed |= c,
                        Err(e) => {
                            self.short[ri] = word;
                            return Err(e);
                        }
                    }
                }
                self.short[ri] = word;
            }
            if !changed {
                return Ok(());
            }
        }
    }

    fn first_undefined(&self) -> Option<(u32, u16)> {
        for row in 0..self.rows as u32 {
            for col in 0..self.ncols as u16 {
                if self.get(row, col) == UNDEF {
                    return Some((row, col));
                }
            }
        }
        None
    }

    /// Check every long relator on the closed table, tracing syllable by
    /// syllable: each generator acts as a permutation of the ≤ `rows` cosets,
    /// so `g^e` is the `e mod order(g)`-th power, found by table lookup.
    fn closed_long_ok(&self) -> bool {
        if self.long.is_empty() {
            return true;
        }
        let n = self.rows;
        let n_gens = self.ncols / 2;
        // powers[g] = [g^0, g^1, …, g^(order-1)] as point-image rows.
        let powers: Vec<Vec<Vec<u32>>> = (0..n_gens)
            .map(|g| {
                let one: Vec<u32> = (0..n as u32)
                    .map(|r| self.get(r, col_of(g as u32, true)))
                    .collect();
                let mut pows = vec![(0..n as u32).collect::<Vec<u32>>()];
                loop {
                    let prev = pows.last().unwrap();
                    let next: Vec<u32> = prev.iter().map(|&r| one[r as usize]).collect();
                    if next == pows[0] {
                        break;
                    }
                    pows.push(next);
                }
                pows
            })
            .collect();
        self.long.iter().all(|word| {
            (0..n as u32).all(|alpha| {
                let mut c = alpha;
                for &(g, e) in word {
                    let pows = &powers[g as usize];
                    let e = e.rem_euclid(pows.len() as i64) as usize;
                    c = pows[e][c as usize];
                }
                c == alpha
            })
        })
    }

    /// Conservative in-search canonicity prune (the standardization test):
    /// relabel the partial table by first appearance starting from coset
    /// `beta` — reading columns through `colmap` when a generator symmetry
    /// is being applied — and compare against the table itself in scan
    /// order. `Less` means every completion of this table relabels to
    /// something lexically smaller, so a representative of the same class
    /// lives in a branch that sorts earlier and this one can be abandoned.
    /// An undefined cell on either side stops the walk — the comparison is
    /// then inconclusive and nothing is pruned.
    fn beta_compare(&self, beta: u32, colmap: Option<&[u16]>) -> Option<std::cmp::Ordering> {
        use std::cmp::Ordering;
        let mut old_of_new: Vec<u32> = vec![beta];
        let mut new_of_old = vec![UNDEF; self.rows];
        new_of_old[beta as usize] = 0;
        let mut row = 0usize;
        while row < old_of_new.len() {
            for col in 0..self.ncols as u16 {
                let ours = self.get(row as u32, col);
                let their_col = colmap.map_or(col, |m| m[col as usize]);
                let theirs_old = self.get(old_of_new[row], their_col);
                if ours == UNDEF || theirs_old == UNDEF {
                    return None;
                }
                let theirs = match new_of_old[theirs_old as usize] {
                    UNDEF => {
                        let fresh = old_of_new.len() as u32;
                        new_of_old[theirs_old as usize] = fresh;
                        old_of_new.push(theirs_old);
                        fresh
                    }
                    v => v,
                };
                match theirs.cmp(&ours) {
                    Ordering::Equal => {}
                    decided => return Some(decided),
                }
            }
            row += 1;
        }
        if old_of_new.len() == self.rows {
            Some(std::cmp::Ordering::Equal)
        } else {
            None
        }
    }

    fn conjugate_pruned(&self) -> bool {
        use std::cmp::Ordering;
        if (1..self.rows as u32).any(|beta| self.beta_compare(beta, None) == Some(Ordering::Less))
        {
            return true;
        }
        // Generator symmetries widen the prune to whole orbits of classes.
        // Only sound when the caller asks a pure existence question, so the
        // list is empty unless `with_symmetries` installed one.
        self.auts.iter().any(|map| {
            (0..self.rows as u32).any(|beta| self.beta_compare(beta, Some(map)) == Some(Ordering::Less))
        })
    }

    fn run(&mut self, exactly: Option<usize>, stop_after_first: bool) -> Result<(), LowIndexError> {
        self.stop_after_first = stop_after_first;
        // The empty start table must be propagation-clean (it is unless a
        // relator is a nonempty word on zero rows — impossible). Seed scan:
        if self.propagate().is_err() {
            return Ok(());
        }
        self.dfs(exactly)
            .map(|_stop| ())
    }

    /// Returns Ok(true) when the search should stop (first solution found in
    /// `exactly` mode).
    fn dfs(&mut self, exactly: Option<usize>) -> Result<bool, LowIndexError> {
        let Some((row, col)) = self.first_undefined() else {
            // A closed search table reproduces itself under the identity
            // relabel walk — the invariant the canonicity prune relies on.
            debug_assert_eq!(self.beta_compare(0, None), Some(std::cmp::Ordering::Equal));
            // Closed table: enforce the withheld long relators, then record.
            if self.closed_long_ok() {
                let keep = match exactly {
                    Some(k) => self.rows == k,
                    None => true,
                };
                if keep {
                    self.solutions
                        .push(self.table[..self.rows * self.ncols].to_vec());
                    if self.stop_after_first {
                        return Ok(true);
                    }
                }
            }
            return Ok(false);
        };
        // Candidates: every existing coset whose inverse slot is free, then
        // a fresh coset (keeping first-appearance numbering canonical).
        let mut candidates: Vec<u32> = (0..self.rows as u32)
            .filter(|&d| self.get(d, inv_col(col)) == UNDEF)
            .collect();
        if self.rows < self.max_rows {
            candidates.push(self.rows as u32);
        }
        for cand in candidates {
            if let Some(b) = self.budget {
                if self.nodes >= b {
                    return Err(LowIndexError::Budget { nodes: self.nodes });
                }
            }
            let mark = self.trail.len();
            let rows_mark = self.rows;
            if cand as usize == self.rows {
                self.rows += 1;
            }
            self.assign(row, col, cand);
            let ok = self.propagate().is_ok() && !self.conjugate_pruned();
            if ok {
                self.nodes += 1;
                if self.dfs(exactly)? {
                    return Ok(true);
                }
            }
            self.rollback(mark, rows_mark);
        }
        Ok(false)
    }
}

/// Renumber a flat table by BFS from `base` (columns in order), returning
/// the renumbered flat table.
fn bfs_renumber(flat: &[u32], n: usize, ncols: usize, base: u32) -> Vec<u32> {
    let mut new_of_old = vec![UNDEF; n];
    let mut old_of_new = Vec::with_capacity(n);
    new_of_old[base as usize] = 0;
    old_of_new.push(base);
    let mut head = 0usize;
    while head < old_of_new.len() {
        let old = old_of_new[head];
        head += 1;
        for col in 0..ncols {
            let d = flat[old as usize * ncols + col];
            if new_of_old[d as usize] == UNDEF {
                new_of_old[d as usize] = old_of_new.len() as u32;
                old_of_new.push(d);
            }
        }
    }
    debug_assert_eq!(old_of_new.len(), n, "table must be transitive");
    let mut out = vec![UNDEF; n * ncols];
    for new_row in 0..n {
        let old_row = old_of_new[new_row] as usize;
        for col in 0..ncols {
            out[new_row * ncols + col] = new_of_old[flat[old_row * ncols + col] as usize];
        }
    }
    out
}

/// Canonical form of a transitive action table: the lexicographically least
/// BFS renumbering over all choices of base point. Two closed tables have
/// equal canonical forms iff they are isomorphic actions — iff their point
/// stabilizers are conjugate subgroups.
fn canonical_form(flat: &[u32], n: usize, ncols: usize) -> Vec<u32> {
    (0..n as u32)
        .map(|base| bfs_renumber(flat, n, ncols, base))
        .min()
        .expect("nonempty table")
}

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    fn heap(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(cur.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, cur, out);
            if k % 2 == 0 {
                cur.swap(i, k - 1);
            } else {
                cur.swap(0, k - 1);
            }
        }
    }
    heap(n, &mut cur, &mut out);
    out
}

/// Signed generator permutations (g ↦ h or g ↦ h⁻¹) that map the cyclically
/// reduced relator multiset to itself up to rotation and inversion — i.e.
/// symmetries of the presentation that descend to automorphisms of the
/// group, the identity excluded. Returned as column maps for the search
/// table. Detection is deliberately bounded: presentations with more than 6
/// generators, more than 16 relators, or a relator longer than 64 letters
/// yield no symmetries (the search simply loses an optional prune).
pub(crate) fn relator_symmetries(p: &Presentation) -> Vec<Vec<u16>> {
    let n = p.n_gens() as usize;
    let rels: Vec<Vec<(u32, i8)>> = p
        .relators()
        .iter()
        .map(|r| r.cyclic_reduce())
        .filter(|r| !r.is_identity())
        .map(|r| r.letters().collect())
        .collect();
    if n == 0 || n > 6 || rels.len() > 16 || rels.iter().any(|r| r.len() > 64) {
        return Vec::new();
    }
    // Least rotation of the word or its inverse: the class invariant.
    let canon = |r: &[(u32, i8)]| -> Vec<(u32, i8)> {
        let inv: Vec<(u32, i8)> = r.iter().rev().map(|&(g, s)| (g, -s)).collect();
        let mut best: Option<Vec<(u32, i8)>> = None;
        for w in [r, &inv[..]] {
            for k in 0..w.len() {
                let rot: Vec<(u32, i8)> = w[k..].iter().chain(&w[..k]).copied().collect();
                if best.as_ref().is_none_or(|b| rot < *b) {
                    best = Some(rot);
                }
            }
        }
        best.expect("nonempty relator")
    };
    let esums = |words: &[Vec<(u32, i8)>], map: Option<(&[usize], u32)>| -> Vec<Vec<i64>> {
        let mut vs: Vec<Vec<i64>> = words
            .iter()
            .map(|r| {
                let mut v = vec![0i64; n];
                for &(g, s) in r {
                    let (h, sign) = match map {
                        None => (g as usize, 1i64),
                        Some((pi, mask)) => (
                            pi[g as usize],
                            if mask >> g & 1 == 1 { -1 } else { 1 },
                        ),
                    };
                    v[h] += s as i64 * sign;
                }
                v
            })
            .collect();
        vs.sort();
        vs
    };
    let target_esums = esums(&rels, None);
    let mut target_canon: Vec<Vec<(u32, i8)>> = rels.iter().map(|r| canon(r)).collect();
    target_canon.sort();
    let mut out = Vec::new();
    for pi in all_permutations(n) {
        let pi_is_id = pi.iter().enumerate().all(|(i, &x)| x == i);
        for mask in 0u32..(1 << n) {
            if pi_is_id && mask == 0 {
                continue;
            }
            // Cheap filter: the multiset of exponent-sum vectors is
            // invariant under any presentation symmetry.
            if esums(&rels, Some((&pi, mask))) != target_esums {
                continue;
            }
            let mut mapped: Vec<Vec<(u32, i8)>> = rels
                .iter()
                .map(|r| {
                    let img: Vec<(u32, i8)> = r
                        .iter()
                        .map(|&(g, s)| {
                            let h = pi[g as usize] as u32;
                            let flip = mask >> g & 1 == 1;
                            (h, if flip { -s } else { s })
                        })
                        .collect();
                    canon(&img)
                })
                .collect();
            mapped.sort();
            if mapped != target_canon {
                continue;
            }
            let mut colmap = vec![0u16; 2 * n];
            for g in 0..n {
                let h = pi[g] as u32;
                let flip = mask >> g & 1 == 1;
                colmap[col_of(g as u32, true) as usize] = col_of(h, !flip);
                colmap[col_of(g as u32, false) as usize] = col_of(h, flip);
            }
            out.push(colmap);
        }
    }
    out
}
