//! Exact rational linear algebra: vectors, matrices, Gaussian elimination
//! and Hermite-normal-form lattice solving.

use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;
pub type Z = BigInt;

pub fn q(n: i64) -> Q {
    Q::from_integer(Z::from(n))
}

pub fn q_ratio(num: i64, den: i64) -> Q {
    Q::new(Z::from(num), Z::from(den))
}

/// Exact rational vector of fixed dimension. `BigRational` keeps every
/// coordinate in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QVec {
    coords: Vec<Q>,
}

impl QVec {
    pub fn new(coords: Vec<Q>) -> Self {
        QVec { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        QVec::new(coords.iter().map(|&c| q(c)).collect())
    }

    pub fn from_integers(coords: Vec<Z>) -> Self {
        QVec::new(coords.into_iter().map(Q::from_integer).collect())
    }

    pub fn zero(dim: usize) -> Self {
        QVec::new(vec![Q::zero(); dim])
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut coords = vec![Q::zero(); dim];
        coords[i] = Q::one();
        QVec::new(coords)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Q] {
        &self.coords
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Q> {
        self.coords.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_integer(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    pub fn to_integers(&self) -> Option<Vec<Z>> {
        self.coords
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }

    pub fn dot(&self, other: &QVec) -> Q {
        debug_assert_eq!(self.dim(), other.dim());
        self.coords
            .iter()
            .zip(other.coords.iter())
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn scale(&self, s: &Q) -> QVec {
        QVec::new(self.coords.iter().map(|c| c * s).collect())
    }

    /// Least common multiple of the coordinate denominators.
    pub fn denominator_lcm(&self) -> Z {
        self.coords
            .iter()
            .fold(Z::one(), |acc, c| acc.lcm(c.denom()))
    }

    pub fn check_dim(&self, expected: usize) -> Result<()> {
        if self.dim() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: self.dim(),
            });
        }
        Ok(())
    }
}

impl Index<usize> for QVec {
    type Output = Q;
    fn index(&self, i: usize) -> &Q {
        &self.coords[i]
    }
}

impl Add for &QVec {
    type Output = QVec;
    fn add(self, other: &QVec) -> QVec {
        debug_assert_eq!(self.dim(), other.dim());
        QVec::new(
            self.coords
                .iter()
                .zip(other.coords.iter())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl Sub for &QVec {
    type Output = QVec;
    fn sub(self, other: &QVec) -> QVec {
        debug_assert_eq!(self.dim(), other.dim());
        QVec::new(
            self.coords
                .iter()
                .zip(other.coords.iter())
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

impl Neg for &QVec {
    type Output = QVec;
    fn neg(self) -> QVec {
        QVec::new(self.coords.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for QVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", c)?;
        }
        Ok(())
    }
}

/// Rectangular rational matrix. The column count is stored explicitly so
/// that matrices with zero rows keep a well-defined shape.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QMatrix {
    n_cols: usize,
    rows: Vec<QVec>,
}

impl QMatrix {
    pub fn new(n_cols: usize, rows: Vec<QVec>) -> Result<Self> {
        for r in &rows {
            r.check_dim(n_cols)?;
        }
        Ok(QMatrix { n_cols, rows })
    }

    pub fn from_rows(n_cols: usize, rows: Vec<QVec>) -> Self {
        QMatrix::new(n_cols, rows).expect("rectangular matrix")
    }

    pub fn identity(n: usize) -> Self {
        QMatrix::from_rows(n, (0..n).map(|i| QVec::unit(n, i)).collect())
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn rows(&self) -> &[QVec] {
        &self.rows
    }

    pub fn mul_vec(&self, v: &QVec) -> QVec {
        QVec::new(self.rows.iter().map(|r| r.dot(v)).collect())
    }

    pub fn transpose(&self) -> QMatrix {
        let rows = (0..self.n_cols)
            .map(|j| QVec::new(self.rows.iter().map(|r| r[j].clone()).collect()))
            .collect();
        QMatrix::from_rows(self.n_rows(), rows)
    }

    pub fn rank(&self) -> usize {
        gauss_kernel(self).0
    }

    /// Reduced row echelon form; returns (rref rows, pivot column per row).
    fn rref(&self) -> (Vec<Vec<Q>>, Vec<usize>) {
        let mut m: Vec<Vec<Q>> = self.rows.iter().map(|r| r.coords().to_vec()).collect();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.n_cols {
            if row == m.len() {
                break;
            }
            let Some(p) = (row..m.len()).find(|&i| !m[i][col].is_zero()) else {
                continue;
            };
            m.swap(row, p);
            let inv = m[row][col].recip();
            for c in col..self.n_cols {
                m[row][c] = &m[row][c] * &inv;
            }
            for i in 0..m.len() {
                if i != row && !m[i][col].is_zero() {
                    let factor = m[i][col].clone();
                    for c in col..self.n_cols {
                        m[i][c] = &m[i][c] - &(&factor * &m[row][c]);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        m.truncate(pivots.len());
        (m, pivots)
    }

    /// A particular solution of `self * x = b`, if one exists.
    pub fn solve(&self, b: &QVec) -> Option<QVec> {
        debug_assert_eq!(b.dim(), self.n_rows());
        // Eliminate on the augmented matrix.
        let mut aug_rows: Vec<QVec> = Vec::with_capacity(self.n_rows());
        for (r, rhs) in self.rows.iter().zip(b.iter()) {
            let mut coords = r.coords().to_vec();
            coords.push(rhs.clone());
            aug_rows.push(QVec::new(coords));
        }
        let aug = QMatrix::from_rows(self.n_cols + 1, aug_rows);
        let (m, pivots) = aug.rref();
        if pivots.contains(&self.n_cols) {
            return None; // pivot in the rhs column: inconsistent
        }
        let mut x = vec![Q::zero(); self.n_cols];
        for (row, &col) in pivots.iter().enumerate() {
            x[col] = m[row][self.n_cols].clone();
        }
        Some(QVec::new(x))
    }
}

/// Rank and a basis of the rational kernel `{x : Mx = 0}`.
///
/// An empty matrix has rank 0 and the full standard basis as kernel.
pub fn gauss_kernel(m: &QMatrix) -> (usize, Vec<QVec>) {
    let (rref, pivots) = m.rref();
    let rank = pivots.len();
    let mut kernel = Vec::with_capacity(m.n_cols() - rank);
    let pivot_set: Vec<bool> = {
        let mut s = vec![false; m.n_cols()];
        for &c in &pivots {
            s[c] = true;
        }
        s
    };
    for free in 0..m.n_cols() {
        if pivot_set[free] {
            continue;
        }
        let mut v = vec![Q::zero(); m.n_cols()];
        v[free] = Q::one();
        for (row, &col) in pivots.iter().enumerate() {
            v[col] = -rref[row][free].clone();
        }
        kernel.push(QVec::new(v));
    }
    (rank, kernel)
}

/// True iff `v` lies in the rational span of `basis`.
pub fn in_span(basis: &[QVec], v: &QVec) -> bool {
    if v.is_zero() {
        return true;
    }
    if basis.is_empty() {
        return false;
    }
    let dim = v.dim();
    let m = QMatrix::from_rows(dim, basis.to_vec());
    let base_rank = m.rank();
    let mut rows = basis.to_vec();
    rows.push(v.clone());
    QMatrix::from_rows(dim, rows).rank() == base_rank
}

/// Equality of rational subspaces given by spanning sets.
pub fn same_span(a: &[QVec], b: &[QVec], dim: usize) -> bool {
    let ra = QMatrix::from_rows(dim, a.to_vec()).rank();
    let rb = QMatrix::from_rows(dim, b.to_vec()).rank();
    if ra != rb {
        return false;
    }
    a.iter().all(|v| in_span(b, v)) || ra == 0
}

/// Solve `xᵀ L = t` over the integers via a column-style Hermite normal
/// form of `Lᵀ`. Returns the integer coefficient vector when one exists.
pub fn hnf_solve(l_rows: &[Vec<Z>], t: &[Z]) -> Option<Vec<Z>> {
    let m = l_rows.len(); // unknowns
    let n = t.len(); // equations
    for r in l_rows {
        assert_eq!(r.len(), n, "lattice row length mismatch");
    }
    if m == 0 {
        return t.iter().all(|x| x.is_zero()).then(Vec::new);
    }
    // a[r][j] = L[j][r]: columns of `a` are the lattice generators.
    let mut a: Vec<Vec<Z>> = (0..n)
        .map(|r| (0..m).map(|j| l_rows[j][r].clone()).collect())
        .collect();
    // v tracks column operations so that a_current = a_original * v.
    let mut v: Vec<Vec<Z>> = (0..m)
        .map(|i| (0..m).map(|j| if i == j { Z::one() } else { Z::zero() }).collect())
        .collect();

    let col_op_sub = |a: &mut Vec<Vec<Z>>, v: &mut Vec<Vec<Z>>, dst: usize, src: usize, f: &Z| {
        for row in a.iter_mut() {
            let d = &row[dst] - f * &row[src];
            row[dst] = d;
        }
        for row in v.iter_mut() {
            let d = &row[dst] - f * &row[src];
            row[dst] = d;
        }
    };
    let col_swap = |a: &mut Vec<Vec<Z>>, v: &mut Vec<Vec<Z>>, i: usize, j: usize| {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        for row in v.iter_mut() {
            row.swap(i, j);
        }
    };
    let col_neg = |a: &mut Vec<Vec<Z>>, v: &mut Vec<Vec<Z>>, i: usize| {
        for row in a.iter_mut() {
            row[i] = -row[i].clone();
        }
        for row in v.iter_mut() {
            row[i] = -row[i].clone();
        }
    };

    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut pc = 0;
    for r in 0..n {
        if pc == m {
            break;
        }
        loop {
            // Smallest nonzero entry in row r among columns >= pc.
            let Some(best) = (pc..m)
                .filter(|&j| !a[r][j].is_zero())
                .min_by_key(|&j| a[r][j].abs())
            else {
                break;
            };
            col_swap(&mut a, &mut v, pc, best);
            if a[r][pc].is_negative() {
                col_neg(&mut a, &mut v, pc);
            }
            let mut done = true;
            for j in pc + 1..m {
                if !a[r][j].is_zero() {
                    let f = a[r][j].div_floor(&a[r][pc]);
                    col_op_sub(&mut a, &mut v, j, pc, &f);
                    if !a[r][j].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if !a[r][pc].is_zero() {
            pivots.push((r, pc));
            pc += 1;
        }
    }

    // Forward substitution over the pivot columns.
    let mut w = vec![Z::zero(); m];
    for (k, &(pr, pcol)) in pivots.iter().enumerate() {
        let mut residual = t[pr].clone();
        for &(_, cj) in &pivots[..k] {
            residual -= &a[pr][cj] * &w[cj];
        }
        let (quot, rem) = residual.div_rem(&a[pr][pcol]);
        if !rem.is_zero() {
            return None;
        }
        w[pcol] = quot;
    }
    // Non-pivot rows must match exactly.
    for r in 0..n {
        let mut acc = Z::zero();
        for &(_, cj) in &pivots {
            acc += &a[r][cj] * &w[cj];
        }
        if acc != t[r] {
            return None;
        }
    }
    let x: Vec<Z> = (0..m)
        .map(|i| (0..m).map(|j| &v[i][j] * &w[j]).sum())
        .collect();
    debug_assert!({
        let mut check = vec![Z::zero(); n];
        for (j, row) in l_rows.iter().enumerate() {
            for (c, entry) in row.iter().enumerate() {
                check[c] += &x[j] * entry;
            }
        }
        check.iter().zip(t.iter()).all(|(a, b)| a == b)
    });
    Some(x)
}
