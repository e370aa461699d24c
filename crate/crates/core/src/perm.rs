//! Small permutation-group utilities shared by the spectrum, density, and
//! finite-group machinery. Permutations act on `0..n` and are stored as
//! images (`p[x]` is the image of `x`).

pub(crate) type Perm = Vec<u32>;

pub(crate) fn identity(n: usize) -> Perm {
    (0..n as u32).collect()
}

/// `a` then `b`: `(a·b)[x] = b[a[x]]`.
pub(crate) fn compose(a: &[u32], b: &[u32]) -> Perm {
    a.iter().map(|&x| b[x as usize]).collect()
}

pub(crate) fn inverse(a: &[u32]) -> Perm {
    let mut out = vec![0u32; a.len()];
    for (x, &y) in a.iter().enumerate() {
        out[y as usize] = x as u32;
    }
    out
}

/// Multiplicative order: lcm of the cycle lengths.
pub(crate) fn order(a: &[u32]) -> usize {
    let n = a.len();
    let mut seen = vec![false; n];
    let mut ord = 1usize;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut len = 0usize;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = a[x] as usize;
            len += 1;
        }
        ord = num_integer::lcm(ord, len);
    }
    ord
}

pub(crate) fn power(a: &[u32], mut k: usize) -> Perm {
    let mut acc = identity(a.len());
    let mut base = a.to_vec();
    while k > 0 {
        if k & 1 == 1 {
            acc = compose(&acc, &base);
        }
        base = compose(&base, &base);
        k >>= 1;
    }
    acc
}

/// BFS closure of the group generated by `gens` (identity included), in a
/// deterministic order. Returns `None` if the group exceeds `cap` elements.
pub(crate) fn closure(n: usize, gens: &[Perm], cap: usize) -> Option<Vec<Perm>> {
    use std::collections::{BTreeSet, VecDeque};
    let id = identity(n);
    let mut seen: BTreeSet<Perm> = BTreeSet::new();
    seen.insert(id.clone());
    let mut order_out = vec![id];
    let mut queue: VecDeque<usize> = VecDeque::from([0]);
    while let Some(i) = queue.pop_front() {
        let cur = order_out[i].clone();
        for g in gens {
            let next = compose(&cur, g);
            if seen.insert(next.clone()) {
                if order_out.len() >= cap {
                    return None;
                }
                order_out.push(next);
                queue.push_back(order_out.len() - 1);
            }
        }
    }
    Some(order_out)
}

/// Number of orbits of the group generated by `gens` on `0..n`.
pub(crate) fn orbit_count(n: usize, gens: &[Perm]) -> usize {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for g in gens {
        for x in 0..n {
            let (a, b) = (find(&mut parent, x), find(&mut parent, g[x] as usize));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    (0..n).filter(|&x| find(&mut parent, x) == x).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_and_inverse() {
        let a = vec![1, 2, 0]; // 3-cycle
        let b = vec![1, 0, 2]; // transposition
        assert_eq!(compose(&a, &inverse(&a)), identity(3));
        assert_eq!(compose(&a, &b), vec![0, 2, 1]);
        assert_eq!(order(&a), 3);
        assert_eq!(order(&b), 2);
        assert_eq!(order(&identity(5)), 1);
        assert_eq!(power(&a, 2), vec![2, 0, 1]);
        assert_eq!(power(&a, 3), identity(3));
    }

    #[test]
    fn closure_of_s3() {
        let gens = vec![vec![1, 2, 0], vec![1, 0, 2]];
        let g = closure(3, &gens, 100).unwrap();
        assert_eq!(g.len(), 6);
        assert!(closure(3, &gens, 5).is_none());
        // generated by a 3-cycle only: C3
        assert_eq!(closure(3, &gens[..1].to_vec(), 100).unwrap().len(), 3);
    }

    #[test]
    fn orbits() {
        // ⟨(01)⟩ on 4 points: orbits {0,1}, {2}, {3}
        assert_eq!(orbit_count(4, &[vec![1, 0, 2, 3]]), 3);
        assert_eq!(orbit_count(4, &[vec![1, 2, 3, 0]]), 1);
        assert_eq!(orbit_count(3, &[]), 3);
    }
}
