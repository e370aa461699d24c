//! Dense integer matrices, Smith normal form, and determinants.
//!
//! Entries are arbitrary-precision (`BigInt`): Smith normal form is notorious
//! for intermediate coefficient blowup even when inputs and invariant factors
//! are tiny.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>, // row-major
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(
            rows.iter().all(|row| row.len() == c),
            "ragged row lengths"
        );
        IntMatrix {
            rows: r,
            cols: c,
            data: rows
                .iter()
                .flat_map(|row| row.iter().map(|&x| BigInt::from(x)))
                .collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * &other[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += q * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let delta = q * &self[(src, j)];
            self[(dst, j)] += delta;
        }
    }

    /// col[dst] += q * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let delta = q * &self[(i, src)];
            self[(i, dst)] += delta;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -self[(r, j)].clone();
            self[(r, j)] = v;
        }
    }

    /// Determinant by Bareiss fraction-free elimination (exact divisions,
    /// polynomial entry growth). Panics on non-square input.
    pub fn det_bareiss(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !m[(i, k)].is_zero()) {
                    Some(i) => {
                        m.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)];
                    m[(i, j)] = num / &prev; // exact by Bareiss' identity
                }
                m[(i, k)] = BigInt::zero();
            }
            prev = m[(k, k)].clone();
        }
        let det = m[(n - 1, n - 1)].clone();
        if sign < 0 {
            -det
        } else {
            det
        }
    }

    /// Smith normal form with transformations: returns `(d, u, v)` with
    /// `u * self * v = d`, `u`, `v` unimodular, `d` diagonal with each
    /// diagonal entry nonnegative and dividing the next.
    pub fn smith_normal_form(&self) -> SnfResult {
        let mut m = self.clone();
        let mut u = IntMatrix::identity(self.rows);
        let mut v = IntMatrix::identity(self.cols);
        let bound = self.rows.min(self.cols);
        let mut t = 0;
        'outer: while t < bound {
            // Choose the entry of least nonzero magnitude in the trailing
            // submatrix as pivot (ties: lowest row, then lowest column).
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..m.rows {
                for j in t..m.cols {
                    if m[(i, j)].is_zero() {
                        continue;
                    }
                    let better = match pivot {
                        None => true,
                        Some(p) => m[(i, j)].abs() < m[p].abs(),
                    };
                    if better {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                break; // trailing submatrix is zero: done
            };
            m.swap_rows(t, pi);
            u.swap_rows(t, pi);
            m.swap_cols(t, pj);
            v.swap_cols(t, pj);

            // Clear column t and row t by rounded division. If any remainder
            // survives it is strictly smaller than the pivot, so re-running
            // pivot selection makes progress.
            let mut clean = true;
            for i in t + 1..m.rows {
                if m[(i, t)].is_zero() {
                    continue;
                }
                let q = -round_div(&m[(i, t)], &m[(t, t)]);
                m.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                if !m[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..m.cols {
                if m[(t, j)].is_zero() {
                    continue;
                }
                let q = -round_div(&m[(t, j)], &m[(t, t)]);
                m.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                if !m[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue 'outer;
            }
            // Row ops may have disturbed column t only via remainders, which
            // `clean` excludes; both the pivot row and column are now zero
            // off the diagonal. Enforce divisibility: the pivot must divide
            // every entry of the remaining submatrix.
            for i in t + 1..m.rows {
                for j in t + 1..m.cols {
                    if !(&m[(i, j)] % &m[(t, t)]).is_zero() {
                        let one = BigInt::one();
                        m.add_row_multiple(t, i, &one);
                        u.add_row_multiple(t, i, &one);
                        continue 'outer;
                    }
                }
            }
            if m[(t, t)].is_negative() {
                m.negate_row(t);
                u.negate_row(t);
            }
            t += 1;
        }
        let factors: Vec<BigInt> = (0..bound)
            .map(|i| m[(i, i)].clone())
            .take_while(|d| !d.is_zero())
            .collect();
        SnfResult {
            d: m,
            u,
            v,
            factors,
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        let c = self.cols;
        &mut self.data[i * c + j]
    }
}

/// Quotient nearest to `a / b`: the remainder `a - q·b` has magnitude at most
/// `|b| / 2`.
fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut q, r) = a.div_rem(b);
    if &r.abs() * 2 > b.abs() {
        if r.sign() == b.sign() {
            q += 1;
        } else {
            q -= 1;
        }
    }
    q
}

/// Outcome of [`IntMatrix::smith_normal_form`].
#[derive(Clone, Debug)]
pub struct SnfResult {
    /// The diagonal form.
    pub d: IntMatrix,
    /// Left transformation (unimodular, `rows × rows`).
    pub u: IntMatrix,
    /// Right transformation (unimodular, `cols × cols`).
    pub v: IntMatrix,
    /// Nonzero diagonal entries, in divisibility order.
    pub factors: Vec<BigInt>,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    /// Re-derive `u · original · v` and the unimodularity of `u`, `v` from
    /// scratch, via Bareiss determinants — an algebraic route independent of
    /// the elimination bookkeeping.
    pub fn verify(&self, original: &IntMatrix) -> bool {
        if self.u.mul(original).mul(&self.v) != self.d {
            return false;
        }
        if !self.u.det_bareiss().abs().is_one() || !self.v.det_bareiss().abs().is_one() {
            return false;
        }
        // Diagonal, nonnegative, divisibility chain.
        for i in 0..self.d.rows {
            for j in 0..self.d.cols {
                if i != j && !self.d[(i, j)].is_zero() {
                    return false;
                }
            }
        }
        for k in 0..self.d.rows.min(self.d.cols) {
            let cur = &self.d[(k, k)];
            if cur.is_negative() {
                return false;
            }
            if k > 0 {
                let prev = &self.d[(k - 1, k - 1)];
                if prev.is_zero() && !cur.is_zero() {
                    return false;
                }
                if !prev.is_zero() && !(cur % prev).is_zero() {
                    return false;
                }
            }
        }
        true
    }
}
