//! Finitely generated positive cones as partial orders, purity and
//! directedness validation, and the semiclosed closure.

use crate::error::{Error, Result};
use crate::group::GroupPresentation;
use crate::linalg::{QMatrix, QVec};
use crate::lp::{lp_feasible, LpResult};

/// Finitely generated rational cone; the positive cone of a partial
/// order on the associated group. Zero generators are dropped.
#[derive(Clone, Debug)]
pub struct ConeSpec {
    dim: usize,
    generators: Vec<QVec>,
}

#[derive(Clone, Debug)]
pub struct ConeReport {
    /// Antisymmetry of the induced order: no nonzero g with g and -g positive.
    pub pure: bool,
    /// A rational functional f with f*gen >= 1 for every generator, when pure.
    pub pointed_witness: Option<QVec>,
    /// Rational span of the generators is the whole space.
    pub directed: bool,
}

impl ConeSpec {
    pub fn new(dim: usize, generators: Vec<QVec>) -> Result<Self> {
        let mut gens = Vec::with_capacity(generators.len());
        for g in generators {
            g.check_dim(dim)?;
            if !g.is_zero() {
                gens.push(g);
            }
        }
        Ok(ConeSpec {
            dim,
            generators: gens,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[QVec] {
        &self.generators
    }

    /// Nonnegative rational coefficients expressing `v` over the
    /// generators, when `v` lies in the rational cone.
    pub fn member(&self, v: &QVec) -> Result<Option<QVec>> {
        v.check_dim(self.dim)?;
        if self.generators.is_empty() {
            return Ok(v.is_zero().then(|| QVec::zero(0)));
        }
        // lambda >= 0 with G^T lambda = v.
        let cols = self.generators.len();
        let a_eq = QMatrix::from_rows(
            cols,
            (0..self.dim)
                .map(|i| QVec::new(self.generators.iter().map(|g| g[i].clone()).collect()))
                .collect(),
        );
        let empty = QMatrix::from_rows(cols, vec![]);
        match lp_feasible(&empty, &QVec::zero(0), &a_eq, v)? {
            LpResult::Feasible(lambda) => Ok(Some(lambda)),
            LpResult::Infeasible(_) => Ok(None),
        }
    }

    /// A rational functional f with f*gen_i >= 1 for all generators, if
    /// one exists; its existence is equivalent to pointedness.
    pub fn separating_functional(&self) -> Result<Option<QVec>> {
        if self.generators.is_empty() {
            // The trivial cone is pointed; any functional works.
            return Ok(Some(QVec::zero(self.dim)));
        }
        find_functional(self.dim, &self.generators, &[], &[], None)
    }
}

/// Find a rational functional f (free-signed) with f*g >= 1 for each g in
/// `strict`, f*g >= 0 for each g in `nonneg`, f*g = 0 for each g in
/// `zeros`, and optionally f*target <= -1. Strict inequalities are
/// normalised to `>= 1`, sound for homogeneous systems. Encoded as an LP
/// over f = p - q with p, q >= 0.
pub fn find_functional(
    dim: usize,
    strict: &[QVec],
    nonneg: &[QVec],
    zeros: &[QVec],
    negative_target: Option<&QVec>,
) -> Result<Option<QVec>> {
    let cols = 2 * dim;
    let split = |g: &QVec, flip: bool| -> QVec {
        let mut coords = Vec::with_capacity(cols);
        for c in g.iter() {
            coords.push(if flip { -c } else { c.clone() });
        }
        for c in g.iter() {
            coords.push(if flip { c.clone() } else { -c });
        }
        QVec::new(coords)
    };
    let mut geq_rows = Vec::new();
    let mut b = Vec::new();
    for g in strict {
        geq_rows.push(split(g, false));
        b.push(crate::linalg::q(1));
    }
    for g in nonneg {
        geq_rows.push(split(g, false));
        b.push(crate::linalg::q(0));
    }
    if let Some(t) = negative_target {
        geq_rows.push(split(t, true));
        b.push(crate::linalg::q(1));
    }
    let mut eq_rows = Vec::new();
    let mut c = Vec::new();
    for g in zeros {
        eq_rows.push(split(g, false));
        c.push(crate::linalg::q(0));
    }
    let a_geq = QMatrix::from_rows(cols, geq_rows);
    let a_eq = QMatrix::from_rows(cols, eq_rows);
    match lp_feasible(&a_geq, &QVec::new(b), &a_eq, &QVec::new(c))? {
        LpResult::Feasible(w) => {
            let f = QVec::new(
                (0..dim)
                    .map(|i| &w[i] - &w[dim + i])
                    .collect(),
            );
            Ok(Some(f))
        }
        LpResult::Infeasible(_) => Ok(None),
    }
}

/// Purity, pointedness witness and directedness of the cone's order.
pub fn validate_cone(group: &GroupPresentation, cone: &ConeSpec) -> Result<ConeReport> {
    if group.dim() != cone.dim() {
        return Err(Error::DimensionMismatch {
            expected: group.dim(),
            got: cone.dim(),
        });
    }
    for g in cone.generators() {
        if !group.contains(g) {
            return Err(Error::InvalidCone(format!(
                "generator {} is not a group member",
                g
            )));
        }
    }
    let witness = cone.separating_functional()?;
    let directed = QMatrix::from_rows(cone.dim(), cone.generators().to_vec()).rank() == cone.dim();
    Ok(ConeReport {
        pure: witness.is_some(),
        pointed_witness: witness,
        directed,
    })
}

/// Membership in the positive set of the semiclosed closure: the
/// rational convex cone intersected with the group.
pub fn closure_contains(group: &GroupPresentation, cone: &ConeSpec, g: &QVec) -> Result<bool> {
    if g.dim() != cone.dim() {
        return Ok(false);
    }
    Ok(group.contains(g) && cone.member(g)?.is_some())
}

/// The semiclosed closure of the cone's order: the same generators with
/// closure membership semantics. Idempotent by construction.
#[derive(Clone, Debug)]
pub struct ClosureCone {
    cone: ConeSpec,
}

impl ClosureCone {
    pub fn new(cone: ConeSpec) -> Self {
        ClosureCone { cone }
    }

    pub fn cone(&self) -> &ConeSpec {
        &self.cone
    }

    pub fn contains(&self, group: &GroupPresentation, g: &QVec) -> Result<bool> {
        closure_contains(group, &self.cone, g)
    }
}
