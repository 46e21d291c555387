//! Dense integer matrices and Smith normal form with unimodular
//! transforms. Every call verifies its own postcondition: the transform
//! product reproduces the diagonal exactly and the transforms pass a
//! modular determinant check.

use std::fmt;
use std::ops::{Index, IndexMut};

#[inline]
fn cadd(a: i64, b: i64) -> i64 {
    a.checked_add(b)
        .expect("integer overflow in exact arithmetic")
}

#[inline]
fn cmul(a: i64, b: i64) -> i64 {
    a.checked_mul(b)
        .expect("integer overflow in exact arithmetic")
}

#[derive(Clone, PartialEq, Eq)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMat {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        IntMat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn diagonal(rows: usize, cols: usize, diag: &[i64]) -> Self {
        let mut m = IntMat::zeros(rows, cols);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> IntMat {
        let mut t = IntMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = IntMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other[(k, j)];
                    if b != 0 {
                        out[(i, j)] = cadd(out[(i, j)], cmul(a, b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).fold(0i64, |acc, j| cadd(acc, cmul(self[(i, j)], v[j]))))
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn from_columns(rows: usize, cols: Vec<Vec<i64>>) -> Self {
        let c = cols.len();
        let mut m = IntMat::zeros(rows, c);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for i in 0..rows {
                m[(i, j)] = col[i];
            }
        }
        m
    }

    pub fn hstack(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.rows, other.rows);
        let mut m = IntMat::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)];
            }
            for j in 0..other.cols {
                m[(i, self.cols + j)] = other[(i, j)];
            }
        }
        m
    }

    pub fn vstack(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.cols);
        let mut m = IntMat::zeros(self.rows + other.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)];
            }
        }
        for i in 0..other.rows {
            for j in 0..self.cols {
                m[(self.rows + i, j)] = other[(i, j)];
            }
        }
        m
    }

    pub fn scaled(&self, k: i64) -> IntMat {
        let mut m = self.clone();
        for x in &mut m.data {
            *x = cmul(*x, k);
        }
        m
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

    /// row[dst] += k * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: i64) {
        if k == 0 {
            return;
        }
        for j in 0..self.cols {
            let v = cmul(k, self[(src, j)]);
            self[(dst, j)] = cadd(self[(dst, j)], v);
        }
    }

    fn add_col_multiple(&mut self, dst: usize, src: usize, k: i64) {
        if k == 0 {
            return;
        }
        for i in 0..self.rows {
            let v = cmul(k, self[(i, src)]);
            self[(i, dst)] = cadd(self[(i, dst)], v);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            self[(i, j)] = -self[(i, j)];
        }
    }

    /// Determinant modulo a prime, by Gaussian elimination over F_p.
    #[allow(clippy::needless_range_loop)]
    pub fn det_mod(&self, p: i64) -> i64 {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| self[(i, j)].rem_euclid(p)).collect())
            .collect();
        let mut det: i64 = 1;
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| a[r][col] != 0) else {
                return 0;
            };
            if piv != col {
                a.swap(piv, col);
                det = (p - det) % p;
            }
            let inv = mod_inverse(a[col][col], p);
            det = mulmod(det, a[col][col], p);
            for r in col + 1..n {
                if a[r][col] != 0 {
                    let f = mulmod(a[r][col], inv, p);
                    for c in col..n {
                        let sub = mulmod(f, a[col][c], p);
                        a[r][c] = (a[r][c] + p - sub) % p;
                    }
                }
            }
        }
        det
    }
}

fn mulmod(a: i64, b: i64, p: i64) -> i64 {
    ((a as i128 * b as i128).rem_euclid(p as i128)) as i64
}

fn mod_inverse(a: i64, p: i64) -> i64 {
    // Fermat: p is prime.
    let mut result: i64 = 1;
    let mut base = a.rem_euclid(p);
    let mut exp = p - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mulmod(result, base, p);
        }
        base = mulmod(base, base, p);
        exp >>= 1;
    }
    result
}

impl Index<(usize, usize)> for IntMat {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{} ", self[(i, j)])?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Result of Smith normal form: `left * m * right` equals the diagonal
/// matrix with entries `diag`, `d_1 | d_2 | ... >= 0`, with the inverse
/// transforms maintained alongside.
#[derive(Clone, Debug)]
pub struct Snf {
    pub diag: Vec<i64>,
    pub left: IntMat,
    pub left_inv: IntMat,
    pub right: IntMat,
    pub right_inv: IntMat,
}

impl Snf {
    pub fn rank(&self) -> usize {
        self.diag.iter().take_while(|&&d| d != 0).count()
    }

    pub fn nonzero_factors(&self) -> Vec<i64> {
        self.diag.iter().copied().filter(|&d| d != 0).collect()
    }
}

struct Calc {
    a: IntMat,
    left: IntMat,
    left_inv: IntMat,
    right: IntMat,
    right_inv: IntMat,
}

impl Calc {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.left.swap_rows(i, j);
        self.left_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.right.swap_cols(i, j);
        self.right_inv.swap_rows(i, j);
    }

    fn add_row(&mut self, dst: usize, src: usize, k: i64) {
        self.a.add_row_multiple(dst, src, k);
        self.left.add_row_multiple(dst, src, k);
        self.left_inv.add_col_multiple(src, dst, -k);
    }

    fn add_col(&mut self, dst: usize, src: usize, k: i64) {
        self.a.add_col_multiple(dst, src, k);
        self.right.add_col_multiple(dst, src, k);
        self.right_inv.add_row_multiple(src, dst, -k);
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        self.left.negate_row(i);
        for r in 0..self.left_inv.nrows() {
            self.left_inv[(r, i)] = -self.left_inv[(r, i)];
        }
    }
}

/// Quotient rounded to nearest, so the remainder magnitude shrinks.
fn div_round(a: i64, b: i64) -> i64 {
    let q = a / b;
    let r = a - q * b;
    if 2 * r.abs() > b.abs() {
        q + if (r > 0) == (b > 0) { 1 } else { -1 }
    } else {
        q
    }
}

/// Computes the Smith normal form of an integer matrix. Total on all
/// inputs, including empty ones. Panics only on arithmetic overflow.
pub fn smith_normal_form(m: &IntMat) -> Snf {
    let rows = m.nrows();
    let cols = m.ncols();
    let mut c = Calc {
        a: m.clone(),
        left: IntMat::identity(rows),
        left_inv: IntMat::identity(rows),
        right: IntMat::identity(cols),
        right_inv: IntMat::identity(cols),
    };
    let n = rows.min(cols);
    let mut t = 0;
    while t < n {
        // Pivot: smallest nonzero magnitude in the trailing submatrix.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if c.a[(i, j)] != 0
                    && pivot.is_none_or(|(pi, pj)| c.a[(i, j)].abs() < c.a[(pi, pj)].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        c.swap_rows(t, pi);
        c.swap_cols(t, pj);

        loop {
            let mut swapped = false;
            for i in t + 1..rows {
                if c.a[(i, t)] != 0 {
                    let q = div_round(c.a[(i, t)], c.a[(t, t)]);
                    c.add_row(i, t, -q);
                    if c.a[(i, t)] != 0 {
                        c.swap_rows(t, i);
                        swapped = true;
                    }
                }
            }
            for j in t + 1..cols {
                if c.a[(t, j)] != 0 {
                    let q = div_round(c.a[(t, j)], c.a[(t, t)]);
                    c.add_col(j, t, -q);
                    if c.a[(t, j)] != 0 {
                        c.swap_cols(t, j);
                        swapped = true;
                    }
                }
            }
            if !swapped {
                break;
            }
        }

        // The pivot must divide every remaining entry.
        let mut fixed = true;
        'scan: for i in t + 1..rows {
            for j in t + 1..cols {
                if c.a[(i, j)] % c.a[(t, t)] != 0 {
                    c.add_row(t, i, 1);
                    fixed = false;
                    break 'scan;
                }
            }
        }
        if fixed {
            t += 1;
        }
    }
    for i in 0..n {
        if c.a[(i, i)] < 0 {
            c.negate_row(i);
        }
    }
    let diag: Vec<i64> = (0..n).map(|i| c.a[(i, i)]).collect();
    let snf = Snf {
        diag,
        left: c.left,
        left_inv: c.left_inv,
        right: c.right,
        right_inv: c.right_inv,
    };
    verify(m, &snf);
    snf
}

/// Exact postcondition check, run on every call.
fn verify(m: &IntMat, s: &Snf) {
    let d = IntMat::diagonal(m.nrows(), m.ncols(), &s.diag);
    assert_eq!(
        s.left.matmul(m).matmul(&s.right),
        d,
        "snf transform product mismatch"
    );
    assert_eq!(
        s.left.matmul(&s.left_inv),
        IntMat::identity(m.nrows()),
        "left transform inverse mismatch"
    );
    assert_eq!(
        s.right.matmul(&s.right_inv),
        IntMat::identity(m.ncols()),
        "right transform inverse mismatch"
    );
    for w in s.diag.windows(2) {
        assert!(
            (w[1] == 0 && w[0] >= 0) || (w[0] != 0 && w[1] % w[0] == 0),
            "snf divisibility chain violated: {:?}",
            s.diag
        );
    }
    const P: i64 = 1_000_000_007;
    for t in [&s.left, &s.right] {
        if t.nrows() > 0 {
            let d = t.det_mod(P);
            assert!(d == 1 || d == P - 1, "transform is not unimodular");
        }
    }
}

/// Basis of the integer kernel of `m`, as matrix columns. The basis is
/// saturated: it spans a direct summand of the ambient lattice.
pub fn kernel_basis(m: &IntMat) -> IntMat {
    if m.nrows() == 0 {
        return IntMat::identity(m.ncols());
    }
    let s = smith_normal_form(m);
    let rank = s.rank();
    let cols: Vec<Vec<i64>> = (rank..m.ncols()).map(|j| s.right.column(j)).collect();
    IntMat::from_columns(m.ncols(), cols)
}

/// Solves `m x = b` over the integers, if an integral solution exists.
pub fn solve(m: &IntMat, b: &[i64]) -> Option<Vec<i64>> {
    assert_eq!(m.nrows(), b.len());
    let s = smith_normal_form(m);
    let y = s.left.mul_vec(b);
    let mut z = vec![0i64; m.ncols()];
    let n = m.nrows().min(m.ncols());
    for (i, &yi) in y.iter().enumerate() {
        if i < n && s.diag[i] != 0 {
            if yi % s.diag[i] != 0 {
                return None;
            }
            z[i] = yi / s.diag[i];
        } else if yi != 0 {
            return None;
        }
    }
    Some(s.right.mul_vec(&z))
}

/// Solves `m X = b` column-by-column; `None` if any column fails.
pub fn solve_matrix(m: &IntMat, b: &IntMat) -> Option<IntMat> {
    assert_eq!(m.nrows(), b.nrows());
    let s = smith_normal_form(m);
    let n = m.nrows().min(m.ncols());
    let mut cols = Vec::with_capacity(b.ncols());
    for j in 0..b.ncols() {
        let y = s.left.mul_vec(&b.column(j));
        let mut z = vec![0i64; m.ncols()];
        for (i, &yi) in y.iter().enumerate() {
            if i < n && s.diag[i] != 0 {
                if yi % s.diag[i] != 0 {
                    return None;
                }
                z[i] = yi / s.diag[i];
            } else if yi != 0 {
                return None;
            }
        }
        cols.push(s.right.mul_vec(&z));
    }
    Some(IntMat::from_columns(m.ncols(), cols))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_case() {
        let s = smith_normal_form(&IntMat::identity(2));
        assert_eq!(s.diag, vec![1, 1]);
    }

    #[test]
    fn zero_matrix() {
        let s = smith_normal_form(&IntMat::from_rows(vec![vec![0]]));
        assert_eq!(s.diag, vec![0]);
    }

    // Independent derivation for [[2,4],[6,8]]: every entry is divisible
    // by 2 and no unimodular combination produces an odd entry, so
    // d1 = 2; |det| = |16 - 24| = 8 forces d1*d2 = 8, hence diag(2, 4).
    #[test]
    fn two_by_two() {
        let s = smith_normal_form(&IntMat::from_rows(vec![vec![2, 4], vec![6, 8]]));
        assert_eq!(s.diag, vec![2, 4]);
    }

    #[test]
    fn rectangular_and_empty() {
        let s = smith_normal_form(&IntMat::from_rows(vec![vec![1, 2, 3], vec![4, 5, 6]]));
        assert_eq!(s.diag, vec![1, 3]);
        let e = smith_normal_form(&IntMat::zeros(0, 3));
        assert!(e.diag.is_empty());
        let e2 = smith_normal_form(&IntMat::zeros(3, 0));
        assert!(e2.diag.is_empty());
    }

    #[test]
    fn coprime_diagonal_merges() {
        let s = smith_normal_form(&IntMat::diagonal(2, 2, &[2, 3]));
        assert_eq!(s.diag, vec![1, 6]);
    }

    #[test]
    fn kernel_is_saturated() {
        let m = IntMat::from_rows(vec![vec![2, 4]]);
        let k = kernel_basis(&m);
        assert_eq!(k.ncols(), 1);
        // (2,-1) spans the kernel; (4,-2) would not be saturated.
        let col = k.column(0);
        assert_eq!(col[0].abs(), 2);
        assert_eq!(col[1].abs(), 1);
    }

    #[test]
    fn solve_exact() {
        let m = IntMat::from_rows(vec![vec![2, 0], vec![0, 3]]);
        assert_eq!(solve(&m, &[4, 9]), Some(vec![2, 3]));
        assert_eq!(solve(&m, &[1, 0]), None);
    }

    #[test]
    fn random_shapes_verify() {
        // verify() runs inside smith_normal_form; exercise assorted shapes.
        let cases = vec![
            vec![
                vec![-20, -7, -27, 2, 29],
                vec![17, 8, 14, -4, -10],
                vec![13, 8, 10, -4, -6],
                vec![-9, -2, -14, 0, 16],
                vec![5, 0, 5, -1, -4],
            ],
            vec![vec![0, 0], vec![0, 0]],
            vec![vec![6], vec![10], vec![15]],
        ];
        for rows in cases {
            let m = IntMat::from_rows(rows);
            let _ = smith_normal_form(&m);
        }
        let m = IntMat::from_rows(vec![
            vec![-20, -7, -27, 2, 29],
            vec![17, 8, 14, -4, -10],
            vec![13, 8, 10, -4, -6],
            vec![-9, -2, -14, 0, 16],
            vec![5, 0, 5, -1, -4],
        ]);
        let s = smith_normal_form(&m);
        assert_eq!(s.diag, vec![1, 1, 1, 2, 60]);
    }
}
