//! Todd–Coxeter coset enumeration (HLT strategy with lookahead).
//!
//! Enumerates the cosets of a finitely generated subgroup `H ≤ G` for a
//! finite presentation of `G`. Successful enumeration yields a closed
//! [`CosetTable`]; running out of the coset budget yields
//! [`TcError::Overflow`]. Enumerating against the trivial subgroup of a
//! finite group gives the regular representation, whose cosets are the group
//! elements themselves.

use crate::presentation::Presentation;
use crate::word::Word;
use std::collections::VecDeque;
use thiserror::Error;

const UNDEF: u32 = u32::MAX;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TcError {
    #[error("coset budget exhausted: {defined} cosets defined (budget {budget})")]
    Overflow { defined: usize, budget: usize },
}

/// Column index for a signed generator: `2g` acts by `g`, `2g+1` by `g⁻¹`.
fn col_of(gen: u32, positive: bool) -> u16 {
    (2 * gen + if positive { 0 } else { 1 }) as u16
}

fn inv_col(col: u16) -> u16 {
    col ^ 1
}

fn compile_word(w: &Word) -> Vec<u16> {
    w.letters().map(|(g, s)| col_of(g, s > 0)).collect()
}

/// A complete (closed) coset table: every action of every signed generator
/// is defined on every coset. Coset 0 is the subgroup itself.
#[derive(Clone, Debug)]
pub struct CosetTable {
    n_gens: u32,
    n_cosets: usize,
    table: Vec<u32>, // n_cosets × 2·n_gens, row-major
    /// BFS spanning tree: `tree[c] = (parent, column)` for `c > 0`.
    tree: Vec<(u32, u16)>,
}

impl CosetTable {
    /// Assemble a table from a closed flat action table (row-major,
    /// `2·n_gens` columns). The caller guarantees closure; the BFS tree for
    /// representative words is built here.
    pub(crate) fn from_flat(n_gens: u32, n_cosets: usize, table: Vec<u32>) -> CosetTable {
        let ncols = 2 * n_gens as usize;
        debug_assert_eq!(table.len(), n_cosets * ncols);
        let tree = bfs_tree(&table, n_cosets, ncols);
        CosetTable {
            n_gens,
            n_cosets,
            table,
            tree,
        }
    }

    pub fn n_cosets(&self) -> usize {
        self.n_cosets
    }

    pub fn n_gens(&self) -> u32 {
        self.n_gens
    }

    fn cols(&self) -> usize {
        2 * self.n_gens as usize
    }

    pub fn act_col(&self, coset: u32, col: u16) -> u32 {
        self.table[coset as usize * self.cols() + col as usize]
    }

    pub fn act(&self, coset: u32, gen: u32, positive: bool) -> u32 {
        self.act_col(coset, col_of(gen, positive))
    }

    /// Apply a whole word, left to right.
    pub fn trace(&self, start: u32, w: &Word) -> u32 {
        let mut c = start;
        for (g, s) in w.letters() {
            c = self.act(c, g, s > 0);
        }
        c
    }

    /// The permutation a generator induces on the cosets.
    pub fn generator_permutation(&self, gen: u32) -> Vec<u32> {
        (0..self.n_cosets as u32)
            .map(|c| self.act(c, gen, true))
            .collect()
    }

    /// A word carrying coset 0 to `coset`, read off the BFS spanning tree.
    /// In a regular (trivial-subgroup) table this is a representative word
    /// for the group element the coset stands for.
    pub fn rep_word(&self, coset: u32) -> Word {
        let mut cols = Vec::new();
        let mut c = coset;
        while c != 0 {
            let (p, col) = self.tree[c as usize];
            cols.push(col);
            c = p;
        }
        cols.reverse();
        Word::from_syllables(cols.into_iter().map(|col| {
            let gen = (col / 2) as u32;
            let exp = if col % 2 == 0 { 1 } else { -1 };
            crate::word::Syllable::new(gen, exp)
        }))
    }

    /// Schreier generators of the subgroup this table enumerates: for every
    /// coset `c` and generator `g`, the word `rep(c) · g · rep(c·g)⁻¹`,
    /// skipping the trivial ones coming from spanning-tree edges.
    pub fn schreier_generators(&self) -> Vec<Word> {
        let mut gens = Vec::new();
        for c in 0..self.n_cosets as u32 {
            let u = self.rep_word(c);
            for g in 0..self.n_gens {
                let d = self.act(c, g, true);
                let v = self.rep_word(d);
                let s = u.concat(&Word::letter(g, 1)).concat(&v.inverse());
                if !s.is_identity() {
                    gens.push(s);
                }
            }
        }
        gens
    }

    /// Re-check from scratch that this is a coset table for `(p, subgroup)`:
    /// mutually inverse columns, relators acting trivially everywhere, and
    /// subgroup generators fixing coset 0.
    pub fn is_valid_for(&self, p: &Presentation, subgroup: &[Word]) -> bool {
        if self.n_gens != p.n_gens() || self.n_cosets == 0 {
            return false;
        }
        let n = self.n_cosets as u32;
        for c in 0..n {
            for col in 0..self.cols() as u16 {
                let d = self.act_col(c, col);
                if d >= n || self.act_col(d, inv_col(col)) != c {
                    return false;
                }
            }
        }
        for r in p.relators() {
            if (0..n).any(|c| self.trace(c, r) != c) {
                return false;
            }
        }
        subgroup.iter().all(|h| self.trace(0, h) == 0)
    }
}

/// Successful enumeration: the closed table plus effort statistics.
#[derive(Clone, Debug)]
pub struct Enumeration {
    pub table: CosetTable,
    /// Total cosets ever defined, including ones later merged away.
    pub total_defined: usize,
}

impl Enumeration {
    pub fn index(&self) -> usize {
        self.table.n_cosets()
    }
}

struct Enumerator {
    ncols: usize,
    table: Vec<u32>,
    uf: Vec<u32>, // union-find parent; uf[x] == x iff x is a live root
    total: usize,
    live: usize,
    budget: usize,
}

impl Enumerator {
    fn new(n_gens: u32, budget: usize) -> Self {
        let mut e = Enumerator {
            ncols: 2 * n_gens as usize,
            table: Vec::new(),
            uf: Vec::new(),
            total: 0,
            live: 0,
            budget,
        };
        e.alloc().expect("budget must allow at least one coset");
        e
    }

    fn alloc(&mut self) -> Result<u32, TcError> {
        if self.total >= self.budget {
            return Err(TcError::Overflow {
                defined: self.total,
                budget: self.budget,
            });
        }
        let id = self.uf.len() as u32;
        self.table.extend(std::iter::repeat(UNDEF).take(self.ncols));
        self.uf.push(id);
        self.total += 1;
        self.live += 1;
        Ok(id)
    }

    fn find(&mut self, mut x: u32) -> u32 {
        let mut root = x;
        while self.uf[root as usize] != root {
            root = self.uf[root as usize];
        }
        while self.uf[x as usize] != root {
            let next = self.uf[x as usize];
            self.uf[x as usize] = root;
            x = next;
        }
        root
    }

    fn is_live(&self, x: u32) -> bool {
        self.uf[x as usize] == x
    }

    fn raw(&self, x: u32, col: u16) -> u32 {
        self.table[x as usize * self.ncols + col as usize]
    }

    fn set(&mut self, x: u32, col: u16, y: u32) {
        self.table[x as usize * self.ncols + col as usize] = y;
    }

    /// Resolved read: follows merges and writes the resolution back.
    fn lookup(&mut self, x: u32, col: u16) -> Option<u32> {
        let v = self.raw(x, col);
        if v == UNDEF {
            return None;
        }
        let r = self.find(v);
        if r != v {
            self.set(x, col, r);
        }
        Some(r)
    }

    /// Define the mutually inverse pair `x·col = y`, `y·col⁻¹ = x`.
    /// Both cells must be undefined.
    fn set_pair(&mut self, x: u32, col: u16, y: u32) {
        debug_assert_eq!(self.raw(x, col), UNDEF);
        debug_assert_eq!(self.raw(y, inv_col(col)), UNDEF);
        self.set(x, col, y);
        self.set(y, inv_col(col), x);
    }

    fn new_coset(&mut self, from: u32, col: u16) -> Result<u32, TcError> {
        let nu = self.alloc()?;
        self.set_pair(from, col, nu);
        Ok(nu)
    }

    /// Merge the classes of `a` and `b`, propagating through their rows.
    /// The smaller-numbered root always survives, so coset 0 is immortal.
    fn coincide(&mut self, a: u32, b: u32) {
        let mut queue: VecDeque<(u32, u32)> = VecDeque::new();
        queue.push_back((a, b));
        while let Some((a, b)) = queue.pop_front() {
            let a = self.find(a);
            let b = self.find(b);
            if a == b {
                continue;
            }
            let (winner, loser) = if a < b { (a, b) } else { (b, a) };
            self.uf[loser as usize] = winner;
            self.live -= 1;
            for col in 0..self.ncols as u16 {
                let d = self.raw(loser, col);
                if d == UNDEF {
                    continue;
                }
                self.set(loser, col, UNDEF);
                let d = self.find(d);
                match self.lookup(winner, col) {
                    None => {
                        self.set(winner, col, d);
                        match self.lookup(d, inv_col(col)) {
                            None => self.set(d, inv_col(col), winner),
                            Some(x) if x != winner => queue.push_back((x, winner)),
                            _ => {}
                        }
                    }
                    Some(x) => {
                        if x != d {
                            queue.push_back((x, d));
                        }
                    }
                }
            }
        }
    }

    /// Scan `word` at coset `alpha`: confirm the closed cycle, deduce a
    /// single missing edge, or (with `fill`) define new cosets across the
    /// gap. Restarts after any coincidence, since local state goes stale.
    fn scan(&mut self, alpha0: u32, word: &[u16], fill: bool) -> Result<(), TcError> {
        'restart: loop {
            let alpha = self.find(alpha0);
            let n = word.len();
            let mut f = alpha;
            let mut i = 0usize;
            while i < n {
                match self.lookup(f, word[i]) {
                    Some(next) => {
                        f = next;
                        i += 1;
                    }
                    None => break,
                }
            }
            if i == n {
                if f != alpha {
                    self.coincide(f, alpha);
                    continue 'restart;
                }
                return Ok(());
            }
            let mut b = alpha;
            let mut j = n;
            while j > i {
                match self.lookup(b, inv_col(word[j - 1])) {
                    Some(next) => {
                        b = next;
                        j -= 1;
                    }
                    None => break,
                }
            }
            if j == i {
                if f != b {
                    self.coincide(f, b);
                    continue 'restart;
                }
                return Ok(());
            }
            if j == i + 1 {
                // Deduction: both cells are undefined by the stop conditions.
                self.set_pair(f, word[i], b);
                return Ok(());
            }
            if !fill {
                return Ok(());
            }
            while j > i + 1 {
                f = self.new_coset(f, word[i])?;
                i += 1;
            }
            // Closing edge f —word[i]→ b. Filling may itself have defined
            // b's half of this edge: a word that is not cyclically reduced
            // (legal for subgroup generators) can approach the same cell
            // from both ends. In that case the freshly filled coset must
            // coincide with the existing neighbour instead.
            match self.lookup(b, inv_col(word[i])) {
                None => {
                    self.set_pair(f, word[i], b);
                    return Ok(());
                }
                Some(c) => {
                    if c != f {
                        self.coincide(f, c);
                    }
                    continue 'restart;
                }
            }
        }
    }
}

/// Enumerate the cosets of `⟨subgroup⟩` in the group presented by `p`.
/// `budget` caps the total number of cosets ever defined.
pub fn enumerate(
    p: &Presentation,
    subgroup: &[Word],
    budget: usize,
) -> Result<Enumeration, TcError> {
    assert!(budget >= 1, "budget must allow at least one coset");
    assert!(
        p.n_gens() < u16::MAX as u32 / 2,
        "generator count exceeds column encoding"
    );
    let relators: Vec<Vec<u16>> = p
        .relators()
        .iter()
        .map(|r| r.cyclic_reduce())
        .filter(|r| !r.is_identity())
        .map(|r| compile_word(&r))
        .collect();
    let subs: Vec<Vec<u16>> = subgroup
        .iter()
        .filter(|w| !w.is_identity())
        .map(compile_word)
        .collect();

    let mut e = Enumerator::new(p.n_gens(), budget);
    for s in &subs {
        e.scan(0, s, true)?;
    }
    let mut next_lookahead = 1000usize;
    let mut alpha = 0u32;
    while (alpha as usize) < e.uf.len() {
        if !e.is_live(alpha) {
            alpha += 1;
            continue;
        }
        if e.total >= next_lookahead {
            // Deduction-only sweep over everything currently live: lets
            // pending collapses happen before we define more cosets.
            for beta in 0..e.uf.len() as u32 {
                if e.is_live(beta) {
                    for r in &relators {
                        e.scan(beta, r, false)?;
                    }
                }
            }
            next_lookahead *= 2;
            if !e.is_live(alpha) {
                alpha += 1;
                continue;
            }
        }
        for r in &relators {
            e.scan(alpha, r, true)?;
            if !e.is_live(alpha) {
                break;
            }
        }
        if e.is_live(alpha) {
            // Relators need not mention every generator: complete the row.
            for col in 0..e.ncols as u16 {
                let a = e.find(alpha);
                if !e.is_live(alpha) {
                    break;
                }
                if e.lookup(a, col).is_none() {
                    e.new_coset(a, col)?;
                }
            }
        }
        alpha += 1;
    }

    // Compact live cosets in ascending order.
    let mut map = vec![UNDEF; e.uf.len()];
    let mut live_ids = Vec::new();
    for x in 0..e.uf.len() as u32 {
        if e.is_live(x) {
            map[x as usize] = live_ids.len() as u32;
            live_ids.push(x);
        }
    }
    let n_cosets = live_ids.len();
    let ncols = e.ncols;
    let mut table = vec![UNDEF; n_cosets * ncols];
    for (new_id, &old_id) in live_ids.iter().enumerate() {
        for col in 0..ncols as u16 {
            let v = e.raw(old_id, col);
            debug_assert_ne!(v, UNDEF, "table not closed after enumeration");
            table[new_id * ncols + col as usize] = map[e.find(v) as usize];
        }
    }

    let result = CosetTable::from_flat(p.n_gens(), n_cosets, table);
    debug_assert!(result.is_valid_for(p, subgroup));
    Ok(Enumeration {
        table: result,
        total_defined: e.total,
    })
}

/// BFS spanning tree over a closed flat table, visiting columns in order.
/// `tree[c] = (parent, column)`; entry 0 is a placeholder for the root.
fn bfs_tree(table: &[u32], n_cosets: usize, ncols: usize) -> Vec<(u32, u16)> {
    let mut tree = vec![(0u32, 0u16); n_cosets];
    let mut seen = vec![false; n_cosets];
    seen[0] = true;
    let mut queue = VecDeque::from([0u32]);
    while let Some(c) = queue.pop_front() {
        for col in 0..ncols as u16 {
            let d = table[c as usize * ncols + col as usize];
            if !seen[d as usize] {
                seen[d as usize] = true;
                tree[d as usize] = (c, col);
                queue.push_back(d);
            }
        }
    }
    debug_assert!(seen.iter().all(|&s| s), "coset graph must be connected");
    tree
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Syllable;

    fn w(pairs: &[(u32, i64)]) -> Word {
        Word::from_syllables(pairs.iter().map(|&(g, e)| Syllable::new(g, e)))
    }

    fn pres(n: u32, rels: &[&[(u32, i64)]]) -> Presentation {
        Presentation::with_auto_names(n, rels.iter().map(|r| w(r)).collect()).unwrap()
    }

    #[test]
    fn conjugate_subgroup_generators_close_correctly() {
        // Subgroup generators need not be cyclically reduced; a conjugate
        // like b⁻¹ a b walks out of the base coset and back into it, so the
        // filling scan meets its own first definition at the closing edge.
        let a4 = pres(
            2,
            &[&[(0, 2)], &[(1, 3)], &[(0, 1), (1, 1), (0, 1), (1, 1), (0, 1), (1, 1)]],
        );
        let conj = w(&[(1, -1), (0, 1), (1, 1)]);
        let e = enumerate(&a4, &[conj.clone()], 1000).unwrap();
        assert_eq!(e.index(), 6);
        assert!(e.table.is_valid_for(&a4, &[conj]));
        // Doubly wrapped: a conjugate of a conjugate.
        let deep = w(&[(0, -1), (1, -1), (0, 1), (1, 1), (0, 1)]);
        let e = enumerate(&a4, &[deep.clone()], 1000).unwrap();
        assert!(e.table.is_valid_for(&a4, &[deep]));
    }

    #[test]
    fn cyclic_group_regular() {
        let c6 = pres(1, &[&[(0, 6)]]);
        let e = enumerate(&c6, &[], 100).unwrap();
        assert_eq!(e.index(), 6);
        assert!(e.table.is_valid_for(&c6, &[]));
        // a acts as a 6-cycle
        let perm = e.table.generator_permutation(0);
        let mut c = 0u32;
        for _ in 0..6 {
            c = perm[c as usize];
        }
        assert_eq!(c, 0);
    }

    #[test]
    fn cyclic_group_subgroup() {
        let c6 = pres(1, &[&[(0, 6)]]);
        // ⟨a²⟩ has order 3, index 2
        let e = enumerate(&c6, &[w(&[(0, 2)])], 100).unwrap();
        assert_eq!(e.index(), 2);
        // ⟨a³⟩ has order 2, index 3
        let e = enumerate(&c6, &[w(&[(0, 3)])], 100).unwrap();
        assert_eq!(e.index(), 3);
    }

    #[test]
    fn symmetric_group_three() {
        // S3 = ⟨r, s | r³, s², (rs)²⟩
        let s3 = pres(2, &[&[(0, 3)], &[(1, 2)], &[(0, 1), (1, 1), (0, 1), (1, 1)]]);
        assert_eq!(enumerate(&s3, &[], 100).unwrap().index(), 6);
        assert_eq!(enumerate(&s3, &[w(&[(0, 1)])], 100).unwrap().index(), 2);
        assert_eq!(enumerate(&s3, &[w(&[(1, 1)])], 100).unwrap().index(), 3);
    }

    #[test]
    fn coincidence_collapse() {
        // a⁲ = a³ = 1 forces a = 1.
        let p = pres(1, &[&[(0, 2)], &[(0, 3)]]);
        let e = enumerate(&p, &[], 100).unwrap();
        assert_eq!(e.index(), 1);
        assert!(e.total_defined >= 2, "must have merged something");
    }

    #[test]
    fn classic_trivial_group() {
        // ⟨a, b | a b a⁻¹ b⁻², b a b⁻¹ a⁻²⟩ is trivial; heavy on coincidences.
        let p = pres(
            2,
            &[
                &[(0, 1), (1, 1), (0, -1), (1, -2)],
                &[(1, 1), (0, 1), (1, -1), (0, -2)],
            ],
        );
        let e = enumerate(&p, &[], 50_000).unwrap();
        assert_eq!(e.index(), 1);
    }

    #[test]
    fn free_group_overflows() {
        let f2 = pres(2, &[]);
        let err = enumerate(&f2, &[], 500).unwrap_err();
        assert_eq!(
            err,
            TcError::Overflow {
                defined: 500,
                budget: 500
            }
        );
        // ... but a finite-index subgroup of Z enumerates fine.
        let z = pres(1, &[]);
        assert_eq!(enumerate(&z, &[w(&[(0, 5)])], 100).unwrap().index(), 5);
    }

    #[test]
    fn quaternion_group() {
        // Q8 = ⟨i, j | i⁴, j² = i², j i j⁻¹ = i⁻¹⟩
        let q8 = pres(
            2,
            &[
                &[(0, 4)],
                &[(1, 2), (0, -2)],
                &[(1, 1), (0, 1), (1, -1), (0, 1)],
            ],
        );
        let e = enumerate(&q8, &[], 200).unwrap();
        assert_eq!(e.index(), 8);
        assert_eq!(enumerate(&q8, &[w(&[(0, 1)])], 200).unwrap().index(), 2);
    }

    #[test]
    fn rep_words_are_coset_representatives() {
        let s3 = pres(2, &[&[(0, 3)], &[(1, 2)], &[(0, 1), (1, 1), (0, 1), (1, 1)]]);
        let e = enumerate(&s3, &[], 100).unwrap();
        for c in 0..e.index() as u32 {
            let word = e.table.rep_word(c);
            assert_eq!(e.table.trace(0, &word), c);
        }
        // rep word of coset 0 is the empty word
        assert!(e.table.rep_word(0).is_identity());
    }

    #[test]
    fn schreier_generators_fix_base_coset() {
        let z = pres(1, &[]);
        let e = enumerate(&z, &[w(&[(0, 5)])], 100).unwrap();
        let gens = e.table.schreier_generators();
        assert!(!gens.is_empty());
        for s in &gens {
            assert_eq!(e.table.trace(0, s), 0);
            // In Z, the subgroup 5Z: every Schreier generator has exponent
            // sum divisible by 5.
            assert_eq!(s.exponent_sum(0).rem_euclid(5), 0);
        }
    }

    #[test]
    fn trace_respects_inverses() {
        let c6 = pres(1, &[&[(0, 6)]]);
        let e = enumerate(&c6, &[], 100).unwrap();
        let word = w(&[(0, -2)]);
        let back = e.table.trace(0, &word);
        assert_eq!(e.table.trace(back, &w(&[(0, 2)])), 0);
    }

    #[test]
    fn lookahead_path_runs() {
        // Large enough to trip the lookahead threshold: Z/2000.
        let p = pres(1, &[&[(0, 2000)]]);
        let e = enumerate(&p, &[], 5000).unwrap();
        assert_eq!(e.index(), 2000);
    }

    #[test]
    fn whole_group_as_subgroup() {
        let s3 = pres(2, &[&[(0, 3)], &[(1, 2)], &[(0, 1), (1, 1), (0, 1), (1, 1)]]);
        let e = enumerate(&s3, &[w(&[(0, 1)]), w(&[(1, 1)])], 100).unwrap();
        assert_eq!(e.index(), 1);
    }
}
