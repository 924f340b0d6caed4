//! Exact LP feasibility over the rationals.
//!
//! Decides `{x >= 0 : A x >= b, E x = c}` with a two-phase simplex under
//! Bland's pivot rule. Feasible instances yield an exact witness,
//! infeasible ones an exact Farkas multiplier vector.

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{Q, QMatrix, QVec};

#[derive(Clone, Debug)]
pub enum LpResult {
    /// A nonnegative rational point satisfying every constraint exactly.
    Feasible(QVec),
    /// Farkas certificate y = (u, v) with u >= 0 on the inequality rows,
    /// yᵀ[A; E] <= 0 componentwise and yᵀ(b, c) > 0.
    Infeasible(QVec),
}

impl LpResult {
    pub fn is_feasible(&self) -> bool {
        matches!(self, LpResult::Feasible(_))
    }

    pub fn witness(&self) -> Option<&QVec> {
        match self {
            LpResult::Feasible(w) => Some(w),
            LpResult::Infeasible(_) => None,
        }
    }
}

/// Decide `{x >= 0 : a_geq x >= b, a_eq x = c}`.
pub fn lp_feasible(a_geq: &QMatrix, b: &QVec, a_eq: &QMatrix, c: &QVec) -> Result<LpResult> {
    if a_geq.n_rows() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a_geq.n_rows(),
            got: b.dim(),
        });
    }
    if a_eq.n_rows() != c.dim() {
        return Err(Error::DimensionMismatch {
            expected: a_eq.n_rows(),
            got: c.dim(),
        });
    }
    let n = a_geq.n_cols().max(a_eq.n_cols());
    if (a_geq.n_rows() > 0 && a_geq.n_cols() != n) || (a_eq.n_rows() > 0 && a_eq.n_cols() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: a_geq.n_cols().min(a_eq.n_cols()),
        });
    }

    let m_geq = a_geq.n_rows();
    let m = m_geq + a_eq.n_rows();
    if m == 0 {
        return Ok(LpResult::Feasible(QVec::zero(n)));
    }

    // Standard equality form: [A -I; E 0] x~ = (b, c), x~ >= 0, with rows
    // flipped so the right-hand side is nonnegative, plus one artificial
    // variable per row. Columns: n structural, m_geq slacks, m artificials.
    let n_slack = m_geq;
    let n_total = n + n_slack + m;
    let mut tab: Vec<Vec<Q>> = Vec::with_capacity(m);
    let mut rhs: Vec<Q> = Vec::with_capacity(m);
    let mut flipped = vec![false; m];

    for i in 0..m {
        let mut row = vec![Q::zero(); n_total];
        let (body, rv) = if i < m_geq {
            (a_geq.rows()[i].clone(), b[i].clone())
        } else {
            (a_eq.rows()[i - m_geq].clone(), c[i - m_geq].clone())
        };
        for (j, e) in body.iter().enumerate() {
            row[j] = e.clone();
        }
        if i < m_geq {
            row[n + i] = -Q::one();
        }
        let mut r = rv;
        if r.is_negative() {
            flipped[i] = true;
            for e in row.iter_mut() {
                *e = -e.clone();
            }
            r = -r;
        }
        row[n + n_slack + i] = Q::one();
        tab.push(row);
        rhs.push(r);
    }

    // Phase 1: minimise the sum of artificials. Artificial columns never
    // re-enter once they leave the basis.
    let mut basis: Vec<usize> = (0..m).map(|i| n + n_slack + i).collect();
    let cost = |j: usize| -> Q {
        if j >= n + n_slack {
            Q::one()
        } else {
            Q::zero()
        }
    };

    loop {
        // Multipliers y_i = sum_k cost(basis[k]) * (B^-1)_{k,i}; with the
        // artificial block initialised to the identity, B^-1 sits in the
        // artificial columns of the tableau.
        let y: Vec<Q> = (0..m)
            .map(|i| {
                (0..m)
                    .map(|k| cost(basis[k]) * &tab[k][n + n_slack + i])
                    .sum()
            })
            .collect();
        // Bland: smallest-index non-artificial column with negative reduced cost.
        let mut entering = None;
        'cols: for j in 0..n + n_slack {
            if basis.contains(&j) {
                continue;
            }
            let mut d = cost(j);
            for i in 0..m {
                let col = if j < n {
                    let mut v = if i < m_geq {
                        a_geq.rows()[i][j].clone()
                    } else {
                        a_eq.rows()[i - m_geq][j].clone()
                    };
                    if flipped[i] {
                        v = -v;
                    }
                    v
                } else {
                    // Slack column j-n: -1 in its own row (sign-flipped rows included).
                    let r = j - n;
                    if r == i {
                        if flipped[i] {
                            Q::one()
                        } else {
                            -Q::one()
                        }
                    } else {
                        Q::zero()
                    }
                };
                d -= &y[i] * col;
            }
            if d.is_negative() {
                entering = Some(j);
                break 'cols;
            }
        }

        let Some(e) = entering else {
            // Optimal for phase 1.
            let obj: Q = basis
                .iter()
                .zip(rhs.iter())
                .map(|(&bj, r)| cost(bj) * r)
                .sum();
            if obj.is_zero() {
                let mut x = vec![Q::zero(); n];
                for (k, &bj) in basis.iter().enumerate() {
                    if bj < n {
                        x[bj] = rhs[k].clone();
                    }
                }
                return Ok(LpResult::Feasible(QVec::new(x)));
            }
            // Farkas certificate, un-flipping the sign-normalised rows.
            let mut cert = Vec::with_capacity(m);
            for i in 0..m {
                let yi = if flipped[i] { -y[i].clone() } else { y[i].clone() };
                cert.push(yi);
            }
            return Ok(LpResult::Infeasible(QVec::new(cert)));
        };

        // Column of the entering variable in the current tableau.
        let col: Vec<Q> = (0..m).map(|i| tab[i][e].clone()).collect();
        // Ratio test; ties broken by smallest leaving basis index (Bland).
        let mut leave: Option<usize> = None;
        for i in 0..m {
            if col[i].is_positive() {
                let better = match leave {
                    None => true,
                    Some(l) => {
                        let ri = &rhs[i] / &col[i];
                        let rl = &rhs[l] / &col[l];
                        ri < rl || (ri == rl && basis[i] < basis[l])
                    }
                };
                if better {
                    leave = Some(i);
                }
            }
        }
        let Some(l) = leave else {
            return Err(Error::Internal(
                "phase-1 objective unbounded below".into(),
            ));
        };

        // Pivot on (l, e).
        let inv = col[l].recip();
        for j in 0..n_total {
            tab[l][j] = &tab[l][j] * &inv;
        }
        rhs[l] = &rhs[l] * &inv;
        for i in 0..m {
            if i != l && !tab[i][e].is_zero() {
                let f = tab[i][e].clone();
                for j in 0..n_total {
                    tab[i][j] = &tab[i][j] - &(&f * &tab[l][j]);
                }
                rhs[i] = &rhs[i] - &(&f * &rhs[l]);
            }
        }
        basis[l] = e;
    }
}

/// Check a Farkas certificate against the original system; used by tests
/// and the internal post-validation of separation results.
pub fn certificate_refutes(
    cert: &QVec,
    a_geq: &QMatrix,
    b: &QVec,
    a_eq: &QMatrix,
    c: &QVec,
) -> bool {
    let m_geq = a_geq.n_rows();
    let n = a_geq.n_cols().max(a_eq.n_cols());
    if cert.dim() != m_geq + a_eq.n_rows() {
        return false;
    }
    for i in 0..m_geq {
        if cert[i].is_negative() {
            return false;
        }
    }
    for j in 0..n {
        let mut s = Q::zero();
        for i in 0..m_geq {
            s += &cert[i] * &a_geq.rows()[i][j];
        }
        for i in 0..a_eq.n_rows() {
            s += &cert[m_geq + i] * &a_eq.rows()[i][j];
        }
        if s.is_positive() {
            return false;
        }
    }
    let mut rhs_val = Q::zero();
    for i in 0..m_geq {
        rhs_val += &cert[i] * &b[i];
    }
    for i in 0..a_eq.n_rows() {
        rhs_val += &cert[m_geq + i] * &c[i];
    }
    rhs_val.is_positive()
}

/// True iff `witness >= 0` satisfies every constraint of the system.
pub fn witness_satisfies(
    witness: &QVec,
    a_geq: &QMatrix,
    b: &QVec,
    a_eq: &QMatrix,
    c: &QVec,
) -> bool {
    if witness.iter().any(|x| x.is_negative()) {
        return false;
    }
    for (row, bound) in a_geq.rows().iter().zip(b.iter()) {
        if &row.dot(witness) < bound {
            return false;
        }
    }
    for (row, bound) in a_eq.rows().iter().zip(c.iter()) {
        if &row.dot(witness) != bound {
            return false;
        }
    }
    true
}
