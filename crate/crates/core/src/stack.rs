//! Linear orders as lexicographic stacks of hyperplane functionals:
//! evaluation, rational kernels, clarification, order equality,
//! archimedean classification and the Hölder embedding.

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::freal::{nth_prime, FormalReal, Functional};
use crate::group::GroupPresentation;
use crate::linalg::{in_span, q_ratio, Q, QMatrix, QVec};

/// Trichotomy verdict of a stack evaluation.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Sign {
    Neg,
    Zero,
    Pos,
}

impl Sign {
    pub fn of(i: i8) -> Sign {
        match i.cmp(&0) {
            std::cmp::Ordering::Less => Sign::Neg,
            std::cmp::Ordering::Equal => Sign::Zero,
            std::cmp::Ordering::Greater => Sign::Pos,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Neg => Sign::Pos,
            Sign::Zero => Sign::Zero,
            Sign::Pos => Sign::Neg,
        }
    }
}

/// Ordered list of hyperplane functionals; level 1 is the most
/// significant. The sign of a vector is the sign of the first level that
/// does not vanish on it.
#[derive(Clone, Debug)]
pub struct OrderStack {
    dim: usize,
    levels: Vec<Functional>,
}

/// Result of clarification: the stack with rationally passive levels
/// removed, plus a flag telling whether the clarified stack is linear on
/// the rational vectors (full rational kernel trivial).
#[derive(Clone, Debug)]
pub struct Clarified {
    pub stack: OrderStack,
    pub linear: bool,
}

#[derive(Clone, Debug)]
pub enum OrderEquality {
    Equal,
    /// A rational vector with strictly opposite signs under the two stacks.
    Different { witness: QVec },
}

impl OrderStack {
    pub fn new(dim: usize, levels: Vec<Functional>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::InvalidStack("stack has no levels".into()));
        }
        if levels.len() > dim {
            return Err(Error::InvalidStack(format!(
                "{} levels exceed dimension {}",
                levels.len(),
                dim
            )));
        }
        for l in &levels {
            if l.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: l.dim(),
                });
            }
            if l.is_zero() {
                return Err(Error::InvalidStack("zero functional level".into()));
            }
        }
        Ok(OrderStack { dim, levels })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn levels(&self) -> &[Functional] {
        &self.levels
    }

    /// Sign of the first level with a nonzero value on `v`.
    pub fn sign(&self, v: &QVec) -> Result<Sign> {
        v.check_dim(self.dim)?;
        for level in &self.levels {
            let value = level.dot(v)?;
            let s = value.sign();
            if s != 0 {
                return Ok(Sign::of(s));
            }
        }
        Ok(Sign::Zero)
    }

    /// Basis of `{x in Q^n : level_i(x) = 0 for i <= k}`, computed from
    /// one rational row per basis symbol of each level.
    pub fn rational_kernel(&self, k: usize) -> Result<Vec<QVec>> {
        if k < 1 || k > self.levels.len() {
            return Err(Error::InvalidStack(format!(
                "level count {} out of range 1..={}",
                k,
                self.levels.len()
            )));
        }
        let rows: Vec<QVec> = self.levels[..k]
            .iter()
            .flat_map(|l| l.rational_rows())
            .collect();
        let m = QMatrix::from_rows(self.dim, rows);
        Ok(crate::linalg::gauss_kernel(&m).1)
    }

    /// Removes rationally passive levels; the result signs every
    /// rational vector exactly as the original stack does.
    pub fn clarify(&self) -> Clarified {
        let mut kept: Vec<Functional> = Vec::new();
        let mut rows: Vec<QVec> = Vec::new();
        let mut kernel_dim = self.dim;
        for level in &self.levels {
            let mut candidate = rows.clone();
            candidate.extend(level.rational_rows());
            let new_dim = self.dim - QMatrix::from_rows(self.dim, candidate.clone()).rank();
            if new_dim < kernel_dim {
                kept.push(level.clone());
                rows = candidate;
                kernel_dim = new_dim;
            }
            // Passive level: discriminates no additional rational vectors.
        }
        let stack = OrderStack::new(self.dim, kept).expect("active levels remain");
        Clarified {
            stack,
            linear: kernel_dim == 0,
        }
    }
}

/// True iff the stack induces a linear order on Q^n (and hence on any
/// group presented in it): the full rational kernel is trivial.
pub fn is_linear_on(group: &GroupPresentation, stack: &OrderStack) -> Result<bool> {
    if group.dim() != stack.dim() {
        return Err(Error::DimensionMismatch {
            expected: group.dim(),
            got: stack.dim(),
        });
    }
    Ok(stack.rational_kernel(stack.levels().len())?.is_empty())
}

/// Archimedean iff the top hyperplane meets Q^n only at the origin.
pub fn is_archimedean(group: &GroupPresentation, stack: &OrderStack) -> Result<bool> {
    if !is_linear_on(group, stack)? {
        return Err(Error::NotLinear);
    }
    Ok(stack.rational_kernel(1)?.is_empty())
}

/// The Hölder embedding of an archimedean order: evaluation of the top
/// functional. Order-preserving and injective on the group.
pub fn holder_map(group: &GroupPresentation, stack: &OrderStack) -> Result<Functional> {
    if !is_archimedean(group, stack)? {
        return Err(Error::NotArchimedean);
    }
    Ok(stack.levels()[0].clone())
}

pub fn holder_value(group: &GroupPresentation, stack: &OrderStack, g: &QVec) -> Result<FormalReal> {
    holder_map(group, stack)?.dot(g)
}

/// Single-level archimedean stack with functional (1, sqrt 2, sqrt 3,
/// sqrt 5, ...): the first n elements of {1} ∪ {sqrt p : p prime}.
pub fn zajceva_stack(n: usize) -> Result<OrderStack> {
    if n == 0 {
        return Err(Error::InvalidStack("dimension must be positive".into()));
    }
    let mut entries = vec![FormalReal::one()];
    for i in 0..n - 1 {
        entries.push(FormalReal::sqrt(nth_prime(i)));
    }
    OrderStack::new(n, vec![Functional::new(entries)])
}

/// Extend `base` (independent set) to include directions of `pool`;
/// returns the added vectors.
fn complement_basis(base: &[QVec], pool: &[QVec]) -> Vec<QVec> {
    let mut current: Vec<QVec> = base.to_vec();
    let mut added = Vec::new();
    for v in pool {
        if !in_span(&current, v) {
            current.push(v.clone());
            added.push(v.clone());
        }
    }
    added
}

/// Decide whether two linear stacks induce the same order on Q^n.
/// Inequality is certified by a rational witness with strictly opposite
/// signs under the two stacks.
pub fn orders_equal(
    group: &GroupPresentation,
    s1: &OrderStack,
    s2: &OrderStack,
) -> Result<OrderEquality> {
    if !is_linear_on(group, s1)? || !is_linear_on(group, s2)? {
        return Err(Error::NotLinear);
    }
    let dim = s1.dim();
    if s2.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: s2.dim(),
        });
    }
    let c1 = s1.clarify().stack;
    let c2 = s2.clarify().stack;
    let depth = c1.levels().len().max(c2.levels().len());
    let standard: Vec<QVec> = (0..dim).map(|i| QVec::unit(dim, i)).collect();

    let mut prev_kernel = standard;
    for k in 1..=depth {
        if k > c1.levels().len() || k > c2.levels().len() {
            // Equal kernels at every earlier level force equal clarified
            // depth; reaching this means a passive/active disagreement.
            return Err(Error::Internal(
                "clarified stacks disagree in depth with equal kernels".into(),
            ));
        }
        let k1 = c1.rational_kernel(k)?;
        let k2 = c2.rational_kernel(k)?;
        if !crate::linalg::same_span(&k1, &k2, dim) {
            let witness = kernel_mismatch_witness(&c1, &c2, k, &k1, &k2)?;
            return Ok(OrderEquality::Different { witness });
        }
        // Induced functionals on a rational complement of kernel(k)
        // inside kernel(k-1).
        let complement = complement_basis(&k1, &prev_kernel);
        debug_assert!(!complement.is_empty());
        let a: Vec<FormalReal> = complement
            .iter()
            .map(|c| c1.levels()[k - 1].dot(c))
            .collect::<Result<_>>()?;
        let b: Vec<FormalReal> = complement
            .iter()
            .map(|c| c2.levels()[k - 1].dot(c))
            .collect::<Result<_>>()?;
        for j in 0..complement.len() {
            debug_assert!(!a[j].is_zero() && !b[j].is_zero());
            if a[j].sign() != b[j].sign() {
                return Ok(OrderEquality::Different {
                    witness: complement[j].clone(),
                });
            }
        }
        for i in 0..complement.len() {
            for j in i + 1..complement.len() {
                let cross = a[i].mul(&b[j]).sub(&a[j].mul(&b[i]));
                if !cross.is_zero() {
                    let witness =
                        plane_witness(&complement[i], &complement[j], &a[i], &a[j], &b[i], &b[j])?;
                    return Ok(OrderEquality::Different { witness });
                }
            }
        }
        prev_kernel = k1;
        if prev_kernel.is_empty() {
            break;
        }
    }
    Ok(OrderEquality::Equal)
}

/// Witness construction when kernels at level k differ: combine a vector
/// in one kernel (infinitesimal for that stack) with a small negative
/// direction of the other.
fn kernel_mismatch_witness(
    c1: &OrderStack,
    c2: &OrderStack,
    k: usize,
    k1: &[QVec],
    k2: &[QVec],
) -> Result<QVec> {
    // v in one kernel but not the other; orient so v is in ker(S1, k).
    let (sa, sb, v) = {
        if let Some(v) = k1.iter().find(|v| !in_span(k2, v)) {
            (c1, c2, v.clone())
        } else {
            let v = k2
                .iter()
                .find(|v| !in_span(k1, v))
                .expect("kernels differ")
                .clone();
            (c2, c1, v)
        }
    };
    // sb signs v at level k; normalise to Pos.
    let mut v = v;
    if sb.sign(&v)? == Sign::Neg {
        v = -&v;
    }
    debug_assert_eq!(sb.sign(&v)?, Sign::Pos);
    if sa.sign(&v)? == Sign::Neg {
        return Ok(orient(sa, v)?);
    }
    // Find u in ker(sa, k-1) with level-k value negative under sa.
    let prev = if k == 1 {
        (0..sa.dim()).map(|i| QVec::unit(sa.dim(), i)).collect()
    } else {
        sa.rational_kernel(k - 1)?
    };
    let ka = sa.rational_kernel(k)?;
    let complement = complement_basis(&ka, &prev);
    let c = complement.first().expect("active level has a complement");
    let val = sa.levels()[k - 1].dot(c)?;
    let u = if val.sign() < 0 { c.clone() } else { -c };
    // v + t*u is Neg under sa for every t > 0 and Pos under sb for small t.
    let mut t = Q::one();
    loop {
        let w = &v + &u.scale(&t);
        if sb.sign(&w)? == Sign::Pos {
            debug_assert_eq!(sa.sign(&w)?, Sign::Neg);
            return Ok(orient(sa, w)?);
        }
        t = t * q_ratio(1, 2);
    }
}

/// Orient a witness so the first stack signs it Neg.
fn orient(first_stack: &OrderStack, w: QVec) -> Result<QVec> {
    Ok(match first_stack.sign(&w)? {
        Sign::Neg => w,
        _ => -&w,
    })
}

/// Rational point in the plane span(ci, cj) where the induced functionals
/// (ai, aj) and (bi, bj) take strictly opposite signs. Candidates come
/// from a floating-point normal-difference direction and are verified
/// exactly before use.
fn plane_witness(
    ci: &QVec,
    cj: &QVec,
    ai: &FormalReal,
    aj: &FormalReal,
    bi: &FormalReal,
    bj: &FormalReal,
) -> Result<QVec> {
    let alpha = (ai.approx_f64(), aj.approx_f64());
    let beta = (bi.approx_f64(), bj.approx_f64());
    let norm = |v: (f64, f64)| (v.0 * v.0 + v.1 * v.1).sqrt();
    let na = norm(alpha);
    let nb = norm(beta);
    let dir = (alpha.0 / na - beta.0 / nb, alpha.1 / na - beta.1 / nb);
    let check = |gi: &Q, gj: &Q| -> Result<Option<QVec>> {
        let va = ai.scale(gi).add(&aj.scale(gj));
        let vb = bi.scale(gi).add(&bj.scale(gj));
        if va.sign() == 1 && vb.sign() == -1 {
            return Ok(Some(&ci.scale(gi) + &cj.scale(gj)));
        }
        if va.sign() == -1 && vb.sign() == 1 {
            let w = &ci.scale(gi) + &cj.scale(gj);
            return Ok(Some(-&w));
        }
        Ok(None)
    };
    for shift in [20u32, 30, 40] {
        let den = 1i64 << shift;
        let gi = Q::new(((dir.0 * den as f64).round() as i64).into(), den.into());
        let gj = Q::new(((dir.1 * den as f64).round() as i64).into(), den.into());
        if gi.is_zero() && gj.is_zero() {
            continue;
        }
        if let Some(w) = check(&gi, &gj)? {
            return Ok(w);
        }
    }
    // Deterministic fallback: search small rational directions.
    for n in [8i64, 64, 512] {
        for p in -n..=n {
            for qd in -n..=n {
                if p == 0 && qd == 0 {
                    continue;
                }
                if let Some(w) = check(&Q::from_integer(p.into()), &Q::from_integer(qd.into()))? {
                    return Ok(w);
                }
            }
        }
    }
    Err(Error::Internal(
        "failed to locate a sign-disagreement witness".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freal::{FormalReal, Functional};
    use crate::linalg::q;

    fn fr(s: &str) -> FormalReal {
        s.parse().unwrap()
    }

    fn stack(dim: usize, levels: &[&[&str]]) -> OrderStack {
        OrderStack::new(
            dim,
            levels
                .iter()
                .map(|l| Functional::new(l.iter().map(|e| fr(e)).collect()))
                .collect(),
        )
        .unwrap()
    }

    fn lex2() -> OrderStack {
        stack(2, &[&["1", "0"], &["0", "1"]])
    }

    fn sqrt2_stack() -> OrderStack {
        stack(2, &[&["1", "sqrt2"]])
    }

    #[test]
    fn sign_of_irrational_level() {
        let s = sqrt2_stack();
        assert_eq!(s.sign(&QVec::from_ints(&[1, -1])).unwrap(), Sign::Neg);
    }

    #[test]
    fn lexicographic_sign() {
        let s = lex2();
        assert_eq!(s.sign(&QVec::from_ints(&[0, -5])).unwrap(), Sign::Neg);
        assert_eq!(s.sign(&QVec::from_ints(&[1, -100])).unwrap(), Sign::Pos);
        assert_eq!(s.sign(&QVec::zero(2)).unwrap(), Sign::Zero);
    }

    #[test]
    fn rational_kernels() {
        let s = sqrt2_stack();
        assert!(s.rational_kernel(1).unwrap().is_empty());

        let diag = stack(2, &[&["1", "1"]]);
        let k = diag.rational_kernel(1).unwrap();
        assert_eq!(k.len(), 1);
        assert!(in_span(&k, &QVec::from_ints(&[1, -1])));

        let s = lex2();
        let k1 = s.rational_kernel(1).unwrap();
        assert_eq!(k1.len(), 1);
        assert!(in_span(&k1, &QVec::from_ints(&[0, 1])));
        assert!(s.rational_kernel(2).unwrap().is_empty());
    }

    #[test]
    fn linearity() {
        let g = GroupPresentation::lattice(2);
        assert!(is_linear_on(&g, &sqrt2_stack()).unwrap());
        assert!(!is_linear_on(&g, &stack(2, &[&["1", "1"]])).unwrap());
        assert!(is_linear_on(&g, &lex2()).unwrap());
    }

    #[test]
    fn archimedean_classification() {
        let g = GroupPresentation::lattice(2);
        assert!(is_archimedean(&g, &sqrt2_stack()).unwrap());
        assert!(!is_archimedean(&g, &lex2()).unwrap());
        let s = stack(2, &[&["sqrt2", "sqrt3"]]);
        assert!(is_archimedean(&g, &s).unwrap());
        let nonlinear = stack(2, &[&["1", "1"]]);
        assert!(matches!(
            is_archimedean(&g, &nonlinear),
            Err(Error::NotLinear)
        ));
    }

    #[test]
    fn clarify_drops_passive_level() {
        let s = stack(2, &[&["1", "sqrt2"], &["0", "1"]]);
        let c = s.clarify();
        assert_eq!(c.stack.levels().len(), 1);
        assert!(c.linear);

        let s = lex2();
        let c = s.clarify();
        assert_eq!(c.stack.levels().len(), 2);
        assert!(c.linear);

        let s = stack(2, &[&["1", "1"], &["1", "1"]]);
        let c = s.clarify();
        assert_eq!(c.stack.levels().len(), 1);
        assert!(!c.linear);
    }

    #[test]
    fn clarify_preserves_signs() {
        let s = stack(2, &[&["1", "sqrt2"], &["0", "1"]]);
        let c = s.clarify();
        for x in -3i64..=3 {
            for y in -3i64..=3 {
                let v = QVec::from_ints(&[x, y]);
                assert_eq!(s.sign(&v).unwrap(), c.stack.sign(&v).unwrap());
            }
        }
    }

    #[test]
    fn equality_under_scaling() {
        let g = GroupPresentation::lattice(2);
        let s1 = sqrt2_stack();
        let s2 = stack(2, &[&["2", "2*sqrt2"]]);
        assert!(matches!(
            orders_equal(&g, &s1, &s2).unwrap(),
            OrderEquality::Equal
        ));
    }

    #[test]
    fn equality_modulo_passive_levels() {
        let g = GroupPresentation::lattice(2);
        let s1 = stack(2, &[&["1", "sqrt2"], &["0", "1"]]);
        let s2 = sqrt2_stack();
        assert!(matches!(
            orders_equal(&g, &s1, &s2).unwrap(),
            OrderEquality::Equal
        ));
    }

    #[test]
    fn inequality_with_witness() {
        let g = GroupPresentation::lattice(2);
        let s1 = lex2();
        let s2 = stack(2, &[&["1", "0"], &["0", "-1"]]);
        match orders_equal(&g, &s1, &s2).unwrap() {
            OrderEquality::Different { witness } => {
                let a = s1.sign(&witness).unwrap();
                let b = s2.sign(&witness).unwrap();
                assert!(matches!(
                    (a, b),
                    (Sign::Neg, Sign::Pos) | (Sign::Pos, Sign::Neg)
                ));
            }
            OrderEquality::Equal => panic!("orders must differ"),
        }
    }

    #[test]
    fn inequality_between_slopes() {
        let g = GroupPresentation::lattice(2);
        let s1 = sqrt2_stack();
        let s2 = stack(2, &[&["1", "sqrt3"]]);
        match orders_equal(&g, &s1, &s2).unwrap() {
            OrderEquality::Different { witness } => {
                let a = s1.sign(&witness).unwrap();
                let b = s2.sign(&witness).unwrap();
                assert!(matches!(
                    (a, b),
                    (Sign::Neg, Sign::Pos) | (Sign::Pos, Sign::Neg)
                ));
            }
            OrderEquality::Equal => panic!("different slopes give different orders"),
        }
    }

    #[test]
    fn holder_values() {
        let g = GroupPresentation::lattice(2);
        let s = sqrt2_stack();
        let v = holder_value(&g, &s, &QVec::from_ints(&[1, -1])).unwrap();
        assert_eq!(v, fr("1-sqrt2"));
        assert_eq!(Sign::of(v.sign()), s.sign(&QVec::from_ints(&[1, -1])).unwrap());
        let v = holder_value(&g, &s, &QVec::from_ints(&[2, 1])).unwrap();
        assert_eq!(v, fr("2+sqrt2"));
        assert!(matches!(
            holder_map(&g, &lex2()),
            Err(Error::NotArchimedean)
        ));
    }

    #[test]
    fn zajceva_construction() {
        let s = zajceva_stack(1).unwrap();
        assert_eq!(s.levels().len(), 1);
        let s = zajceva_stack(2).unwrap();
        assert_eq!(s.levels()[0], Functional::new(vec![fr("1"), fr("sqrt2")]));
        let s = zajceva_stack(4).unwrap();
        let g = GroupPresentation::lattice(4);
        assert!(is_archimedean(&g, &s).unwrap());
        let _ = q(0);
    }

    #[test]
    fn constructor_rejects_bad_stacks() {
        assert!(OrderStack::new(2, vec![]).is_err());
        let zero = Functional::new(vec![FormalReal::zero(), FormalReal::zero()]);
        assert!(OrderStack::new(2, vec![zero]).is_err());
        let one = Functional::new(vec![fr("1")]);
        assert!(OrderStack::new(1, vec![one.clone(), one]).is_err());
    }
}
