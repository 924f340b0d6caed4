//! Finitely generated torsion-free abelian groups realised as subgroups
//! of Q^n containing Z^n, together with the canonical embeddings between
//! the group, the integer lattice and the ambient rational space.

use num::{Integer, Signed};

use crate::error::{Error, Result};
use crate::linalg::{hnf_solve, Q, QMatrix, QVec, Z};

/// A subgroup of Q^n generated by the given vectors. The standard unit
/// vectors form the maximal independent set, so the subgroup must contain
/// Z^n and the generators must span Q^n.
#[derive(Clone, Debug)]
pub struct GroupPresentation {
    dim: usize,
    generators: Vec<QVec>,
}

/// Minimal pair (q, p) with q > 0 the least integer making q*g integral
/// and p = q*g.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CanonicalRep {
    pub q: Z,
    pub p: Vec<Z>,
}

impl GroupPresentation {
    pub fn new(dim: usize, generators: Vec<QVec>) -> Result<Self> {
        for g in &generators {
            g.check_dim(dim)?;
        }
        let m = QMatrix::from_rows(dim, generators.clone());
        if m.rank() != dim {
            return Err(Error::InvalidGroup(
                "generators do not span the ambient rational space".into(),
            ));
        }
        let group = GroupPresentation { dim, generators };
        for i in 0..dim {
            if !group.contains(&QVec::unit(dim, i)) {
                return Err(Error::InvalidGroup(format!(
                    "generated subgroup does not contain unit vector e{}",
                    i + 1
                )));
            }
        }
        Ok(group)
    }

    /// The integer lattice Z^n itself.
    pub fn lattice(dim: usize) -> Self {
        GroupPresentation::new(dim, (0..dim).map(|i| QVec::unit(dim, i)).collect())
            .expect("unit vectors present a valid group")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[QVec] {
        &self.generators
    }

    /// True iff `v` is an integer combination of the generators; decided
    /// exactly by clearing denominators and solving over the integer
    /// lattice via Hermite normal form.
    pub fn contains(&self, v: &QVec) -> bool {
        if v.dim() != self.dim {
            return false;
        }
        let mut scale = v.denominator_lcm();
        for g in &self.generators {
            scale = scale.lcm(&g.denominator_lcm());
        }
        let scale_q = Q::from_integer(scale);
        let rows: Vec<Vec<Z>> = self
            .generators
            .iter()
            .map(|g| {
                g.iter()
                    .map(|c| (c * &scale_q).to_integer())
                    .collect()
            })
            .collect();
        let target: Vec<Z> = v.iter().map(|c| (c * &scale_q).to_integer()).collect();
        hnf_solve(&rows, &target).is_some()
    }

    /// The embedding of a group element into the ambient space; the
    /// identity on coordinates once membership is established.
    pub fn phi(&self, g: &QVec) -> Result<QVec> {
        g.check_dim(self.dim)?;
        if !self.contains(g) {
            return Err(Error::NotInGroup);
        }
        Ok(g.clone())
    }
}

/// Minimal canonical representation q*g = sum p(a) e_a.
pub fn canonical_rep(g: &QVec) -> CanonicalRep {
    let q = g.denominator_lcm();
    debug_assert!(q.is_positive());
    let qq = Q::from_integer(q.clone());
    let p: Vec<Z> = g.iter().map(|c| (c * &qq).to_integer()).collect();
    CanonicalRep { q, p }
}

/// View an integer vector as a group element (the inverse embedding on
/// the integer lattice).
pub fn psi(r: &QVec) -> Result<QVec> {
    if !r.is_integer() {
        return Err(Error::NotInteger);
    }
    Ok(r.clone())
}
