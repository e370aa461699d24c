//! Finite groups as validated multiplication tables.
//!
//! A `FiniteGroupTable` is the most neutral encoding of a finite group: it
//! directly yields the permutation action on its own elements, subgroup
//! closures, and — via a breadth-first spanning tree of its Cayley graph — a
//! deterministic finite presentation. Element 0 is always the identity.

use thiserror::Error;

use crate::coset::{self, TcError};
use crate::perm::{self, Perm};
use crate::presentation::Presentation;
use crate::word::Word;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TableError {
    #[error("table has {got} entries, expected {expected} for order {order}")]
    BadSize {
        order: usize,
        expected: usize,
        got: usize,
    },
    #[error("table entry at ({a}, {b}) is out of range")]
    EntryRange { a: usize, b: usize },
    #[error("element 0 is not a two-sided identity")]
    Identity,
    #[error("associativity fails at ({a}, {b}, {c})")]
    Associativity { a: usize, b: usize, c: usize },
    #[error("element {a} has no inverse")]
    NoInverse { a: usize },
    #[error("permutation closure exceeded the cap of {cap} elements")]
    ClosureCap { cap: usize },
}

#[derive(Clone, Debug)]
pub struct FiniteGroupTable {
    name: String,
    order: usize,
    /// Row-major: `table[a * order + b]` is the product a·b.
    table: Vec<u32>,
    inv: Vec<u32>,
}

impl FiniteGroupTable {
    /// Validate the full group axioms (identity at 0, associativity,
    /// inverses) and build the inverse map.
    pub fn from_table(name: &str, order: usize, table: Vec<u32>) -> Result<Self, TableError> {
        assert!(order >= 1, "groups are nonempty");
        if table.len() != order * order {
            return Err(TableError::BadSize {
                order,
                expected: order * order,
                got: table.len(),
            });
        }
        for a in 0..order {
            for b in 0..order {
                if table[a * order + b] as usize >= order {
                    return Err(TableError::EntryRange { a, b });
                }
            }
        }
        for a in 0..order {
            if table[a] as usize != a || table[a * order] as usize != a {
                return Err(TableError::Identity);
            }
        }
        for a in 0..order {
            for b in 0..order {
                let ab = table[a * order + b] as usize;
                for c in 0..order {
                    let bc = table[b * order + c] as usize;
                    if table[ab * order + c] != table[a * order + bc] {
                        return Err(TableError::Associativity { a, b, c });
                    }
                }
            }
        }
        let mut inv = vec![u32::MAX; order];
        for a in 0..order {
            match (0..order).find(|&b| table[a * order + b] == 0) {
                Some(b) => inv[a] = b as u32,
                None => return Err(TableError::NoInverse { a }),
            }
        }
        Ok(FiniteGroupTable {
            name: name.to_string(),
            order,
            table,
            inv,
        })
    }

    /// The group generated by permutations, with elements numbered in
    /// breadth-first closure order (identity first).
    pub fn from_permutations(
        name: &str,
        n_points: usize,
        gens: &[Perm],
        cap: usize,
    ) -> Result<Self, TableError> {
        let elements =
            perm::closure(n_points, gens, cap).ok_or(TableError::ClosureCap { cap })?;
        let order = elements.len();
        let index: std::collections::HashMap<&Perm, u32> = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p, i as u32))
            .collect();
        let mut table = vec![0u32; order * order];
        for (a, pa) in elements.iter().enumerate() {
            for (b, pb) in elements.iter().enumerate() {
                table[a * order + b] = index[&perm::compose(pa, pb)];
            }
        }
        Self::from_table(name, order, table)
    }

    /// Materialize a finitely presented group that happens to be finite, by
    /// coset enumeration over the trivial subgroup (the regular action).
    pub fn from_presentation(
        name: &str,
        p: &Presentation,
        max_cosets: usize,
    ) -> Result<Self, TcError> {
        let e = coset::enumerate(p, &[], max_cosets)?;
        let n = e.index();
        let rep_words: Vec<Word> = (0..n as u32).map(|c| e.table.rep_word(c)).collect();
        let mut table = vec![0u32; n * n];
        for x in 0..n {
            for y in 0..n {
                table[x * n + y] = e.table.trace(x as u32, &rep_words[y]);
            }
        }
        Ok(Self::from_table(name, n, table).expect("regular coset action satisfies group axioms"))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut n = 1;
        while x != 0 {
            x = self.mul(x, a);
            n += 1;
        }
        n
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (a..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// The permutation x ↦ b·x of the element set.
    pub fn left_mul_perm(&self, b: usize) -> Perm {
        (0..self.order).map(|x| self.mul(b, x) as u32).collect()
    }

    /// Elements of the subgroup generated by `gens`, ascending.
    pub fn subgroup_closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut in_sub = vec![false; self.order];
        in_sub[0] = true;
        let mut work = vec![0usize];
        while let Some(x) = work.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !in_sub[y] {
                    in_sub[y] = true;
                    work.push(y);
                }
            }
        }
        (0..self.order).filter(|&x| in_sub[x]).collect()
    }

    /// Evaluate a word over `gens` (generator i stands for element gens[i]).
    pub fn eval_word(&self, gens: &[usize], w: &Word) -> usize {
        let mut acc = 0usize;
        for (g, s) in w.letters() {
            let e = gens[g as usize];
            acc = self.mul(acc, if s > 0 { e } else { self.inv(e) });
        }
        acc
    }

    /// A deterministic presentation read off the table: a greedy minimal
    /// generating sequence, then one relator per non-tree edge of the
    /// breadth-first Cayley spanning tree (w_x · g · w_{x·g}⁻¹). The relators
    /// are Schreier generators of the kernel of the free group surjection,
    /// which is its own normal closure, so the quotient is exactly this
    /// group.
    pub fn to_presentation(&self) -> TablePresentation {
        let mut generators: Vec<usize> = Vec::new();
        let mut closed = vec![0usize];
        while closed.len() < self.order {
            let mut in_closed = vec![false; self.order];
            for &x in &closed {
                in_closed[x] = true;
            }
            let next = (0..self.order).find(|&x| !in_closed[x]).unwrap();
            generators.push(next);
            closed = self.subgroup_closure(&generators);
        }
        // Breadth-first spanning tree of the Cayley graph.
        let mut rep_words: Vec<Option<Word>> = vec![None; self.order];
        rep_words[0] = Some(Word::identity());
        let mut tree_edge: Vec<Option<(usize, usize)>> = vec![None; self.order];
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (j, &g) in generators.iter().enumerate() {
                let y = self.mul(x, g);
                if rep_words[y].is_none() {
                    rep_words[y] =
                        Some(rep_words[x].as_ref().unwrap().concat(&Word::letter(j as u32, 1)));
                    tree_edge[y] = Some((x, j));
                    queue.push_back(y);
                }
            }
        }
        let rep_words: Vec<Word> = rep_words.into_iter().map(Option::unwrap).collect();
        let mut relators = Vec::new();
        for x in 0..self.order {
            for (j, &g) in generators.iter().enumerate() {
                let y = self.mul(x, g);
                if tree_edge[y] == Some((x, j)) {
                    continue;
                }
                let r = rep_words[x]
                    .concat(&Word::letter(j as u32, 1))
                    .concat(&rep_words[y].inverse());
                if !r.is_identity() {
                    relators.push(r);
                }
            }
        }
        let presentation =
            Presentation::with_auto_names(generators.len() as u32, relators).unwrap();
        TablePresentation {
            generators,
            presentation,
            rep_words,
        }
    }

    /// Named presets: `C<n>` (cyclic), `V4`, `S3`, `S4`, `A4`, `D4`, `D5`,
    /// `D6`. Case-insensitive. Returns None for unknown names.
    pub fn preset(spec: &str) -> Option<FiniteGroupTable> {
        let up = spec.to_ascii_uppercase();
        if let Some(ns) = up.strip_prefix('C') {
            let n: usize = ns.parse().ok().filter(|&n| n >= 1 && n <= 1024)?;
            let table: Vec<u32> = (0..n)
                .flat_map(|a| (0..n).map(move |b| ((a + b) % n) as u32))
                .collect();
            return Some(Self::from_table(&up, n, table).unwrap());
        }
        let from_perms = |name: &str, n: usize, gens: &[&[u32]]| {
            let gens: Vec<Perm> = gens.iter().map(|g| g.to_vec()).collect();
            Self::from_permutations(name, n, &gens, 1 << 16).unwrap()
        };
        match up.as_str() {
            "V4" => {
                let table: Vec<u32> = (0..4)
                    .flat_map(|a| (0..4).map(move |b| (a ^ b) as u32))
                    .collect();
                Some(Self::from_table("V4", 4, table).unwrap())
            }
            "S3" => Some(from_perms("S3", 3, &[&[1, 2, 0], &[1, 0, 2]])),
            "A4" => Some(from_perms("A4", 4, &[&[1, 2, 0, 3], &[1, 0, 3, 2]])),
            "S4" => Some(from_perms("S4", 4, &[&[1, 2, 3, 0], &[1, 0, 2, 3]])),
            "D4" => Some(from_perms("D4", 4, &[&[1, 2, 3, 0], &[3, 2, 1, 0]])),
            "D5" => Some(from_perms("D5", 5, &[&[1, 2, 3, 4, 0], &[4, 3, 2, 1, 0]])),
            "D6" => Some(from_perms(
                "D6",
                6,
                &[&[1, 2, 3, 4, 5, 0], &[5, 4, 3, 2, 1, 0]],
            )),
            _ => None,
        }
    }
}

/// A presentation read off a multiplication table, together with the chosen
/// generator elements and a word for every element.
#[derive(Clone, Debug)]
pub struct TablePresentation {
    /// Element ids of the chosen generators, in choice order.
    pub generators: Vec<usize>,
    /// Presentation over those generators (auto-named).
    pub presentation: Presentation,
    /// For each element, a word over the chosen generators evaluating to it.
    pub rep_words: Vec<Word>,
}
