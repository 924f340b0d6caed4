//! Linear order extensions of a cone order: the extension criterion, its
//! geometric hyperplane form, constructive separating extensions, the
//! intersection harness, and the archimedean directed product order.

use num::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cone::{closure_contains, find_functional, ConeSpec};
use crate::error::{Error, Result};
use crate::freal::{nth_prime, FormalReal, Functional};
use crate::group::GroupPresentation;
use crate::linalg::{in_span, Q, QMatrix, QVec, Z};
use crate::stack::{OrderStack, Sign};

#[derive(Clone, Debug)]
pub struct ExtensionReport {
    pub is_extension: bool,
    /// First cone generator signed Neg by the stack, when not an extension.
    pub violating_generator: Option<QVec>,
    /// Per level, the generators still unsigned before that level.
    pub face_chain: Vec<(usize, Vec<QVec>)>,
}

/// Generator nonnegativity test: the stack extends the cone order iff
/// every cone generator is signed Pos.
pub fn is_extension(
    stack: &OrderStack,
    cone: &ConeSpec,
    group: &GroupPresentation,
) -> Result<ExtensionReport> {
    check_linear(stack, group.dim())?;
    if cone.dim() != stack.dim() {
        return Err(Error::DimensionMismatch {
            expected: stack.dim(),
            got: cone.dim(),
        });
    }
    let mut violating = None;
    for g in cone.generators() {
        match stack.sign(g)? {
            Sign::Neg => {
                violating = Some(g.clone());
                break;
            }
            Sign::Zero => {
                return Err(Error::Internal(
                    "linear stack signed a nonzero generator Zero".into(),
                ))
            }
            Sign::Pos => {}
        }
    }
    // Face chain: generators grouped by the level that first signs them.
    let mut face_chain = Vec::new();
    let mut face: Vec<QVec> = cone.generators().to_vec();
    for k in 1..=stack.levels().len() {
        if face.is_empty() {
            break;
        }
        face_chain.push((k, face.clone()));
        let mut next = Vec::new();
        for g in &face {
            if stack.levels()[k - 1].dot(g)?.is_zero() {
                next.push(g.clone());
            }
        }
        face = next;
    }
    Ok(ExtensionReport {
        is_extension: violating.is_none(),
        violating_generator: violating,
        face_chain,
    })
}

/// Geometric form of the extension criterion: walking the stack top
/// down, the cone face lying inside the rational kernel of the levels so
/// far must sit on the nonnegative side of the next level. Kept as an
/// independent verifier; its equivalence with [`is_extension`] is a
/// tested property.
pub fn check_hyperplane_condition(stack: &OrderStack, cone: &ConeSpec) -> Result<bool> {
    check_linear(stack, cone.dim())?;
    let mut face: Vec<QVec> = cone.generators().to_vec();
    for k in 1..=stack.levels().len() {
        if face.is_empty() {
            return Ok(true);
        }
        for g in &face {
            if stack.levels()[k - 1].dot(g)?.sign() < 0 {
                return Ok(false);
            }
        }
        if k == stack.levels().len() {
            break;
        }
        let kernel = stack.rational_kernel(k)?;
        face.retain(|g| in_span(&kernel, g));
    }
    // A linear stack signs every remaining nonzero generator at some level.
    Ok(true)
}

fn check_linear(stack: &OrderStack, dim: usize) -> Result<()> {
    if stack.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: stack.dim(),
        });
    }
    if !stack.rational_kernel(stack.levels().len())?.is_empty() {
        return Err(Error::NotLinear);
    }
    Ok(())
}

/// Coordinates of `v` with respect to the independent set `basis`.
fn kernel_coords(basis: &[QVec], v: &QVec) -> Option<QVec> {
    if basis.is_empty() {
        return v.is_zero().then(|| QVec::zero(0));
    }
    let dim = v.dim();
    let cols = QMatrix::from_rows(
        basis.len(),
        (0..dim)
            .map(|i| QVec::new(basis.iter().map(|b| b[i].clone()).collect()))
            .collect(),
    );
    cols.solve(v)
}

/// Lift a rational functional on kernel coordinates to an ambient
/// rational functional f with f * basis_j = lambda_j.
fn lift_rational(basis: &[QVec], lambda: &QVec, dim: usize) -> Result<QVec> {
    let rows = QMatrix::from_rows(dim, basis.to_vec());
    rows.solve(lambda)
        .ok_or_else(|| Error::Internal("kernel lift has no solution".into()))
}

/// Ambient functional acting as (r_1 sqrt p_1, ..., r_m sqrt p_m) on the
/// kernel coordinates; its rational kernel inside the subspace is {0}.
fn lift_zajceva(basis: &[QVec], scales: &[Q], dim: usize) -> Result<Functional> {
    let mut entries = vec![FormalReal::zero(); dim];
    for (j, scale) in scales.iter().enumerate() {
        let lambda = QVec::new(
            (0..basis.len())
                .map(|i| if i == j { scale.clone() } else { Q::zero() })
                .collect(),
        );
        let y = lift_rational(basis, &lambda, dim)?;
        let sym = FormalReal::sqrt(nth_prime(j));
        for (entry, coeff) in entries.iter_mut().zip(y.iter()) {
            *entry = entry.add(&sym.scale(coeff));
        }
    }
    Ok(Functional::new(entries))
}

/// Generators of the cone lying in the rational span of `kernel`.
fn surviving_generators(cone: &ConeSpec, kernel: &[QVec]) -> Vec<QVec> {
    cone.generators()
        .iter()
        .filter(|g| in_span(kernel, g))
        .cloned()
        .collect()
}

/// Construct a linear extension of the cone order that signs `target`
/// negative. Farkas separation provides the top level; lower levels make
/// the surviving cone face positive and exhaust the remaining rational
/// kernel with a square-root functional.
pub fn separating_extension(
    group: &GroupPresentation,
    cone: &ConeSpec,
    target: &QVec,
) -> Result<OrderStack> {
    target.check_dim(group.dim())?;
    if !group.contains(target) {
        return Err(Error::NotInGroup);
    }
    if closure_contains(group, cone, target)? {
        return Err(Error::NotSeparable);
    }
    let dim = group.dim();
    let f = find_functional(dim, &[], cone.generators(), &[], Some(target))?
        .ok_or_else(|| Error::Internal("separation LP infeasible outside the closure".into()))?;
    let mut levels = vec![Functional::from_rationals(&f)];
    complete_extension(cone, &mut levels, dim, None)?;
    let stack = OrderStack::new(dim, levels)?;
    // Post-validation of the construction's contract.
    let report = is_extension(&stack, cone, group)?;
    if !report.is_extension || stack.sign(target)? != Sign::Neg {
        return Err(Error::Internal(
            "separating extension failed post-validation".into(),
        ));
    }
    Ok(stack)
}

/// Fill the remaining levels: positivise surviving face generators, then
/// close the rational kernel. `rng` adds level-by-level variety for the
/// randomized constructor.
fn complete_extension(
    cone: &ConeSpec,
    levels: &mut Vec<Functional>,
    dim: usize,
    mut rng: Option<&mut ChaCha8Rng>,
) -> Result<()> {
    loop {
        let kernel = if levels.is_empty() {
            (0..dim).map(|i| QVec::unit(dim, i)).collect()
        } else {
            let probe = OrderStack::new(dim, levels.clone())?;
            probe.rational_kernel(levels.len())?
        };
        if kernel.is_empty() {
            return Ok(());
        }
        let survivors = surviving_generators(cone, &kernel);
        if survivors.is_empty() {
            let scales: Vec<Q> = if let Some(r) = rng.as_deref_mut() {
                if kernel.len() > 1 && r.gen_bool(0.5) {
                    // Random rational level first: produces lexicographic
                    // (non-archimedean) extensions as well.
                    let lambda = random_nonzero(r, kernel.len());
                    let f = lift_rational(&kernel, &lambda, dim)?;
                    levels.push(Functional::from_rationals(&f));
                    continue;
                }
                (0..kernel.len())
                    .map(|_| Q::new(Z::from(r.gen_range(1..=4i64)), Z::from(r.gen_range(1..=4i64))))
                    .collect()
            } else {
                vec![Q::one(); kernel.len()]
            };
            levels.push(lift_zajceva(&kernel, &scales, dim)?);
            continue;
        }
        // Coordinates of the survivors inside the kernel.
        let coords: Vec<QVec> = survivors
            .iter()
            .map(|g| {
                kernel_coords(&kernel, g)
                    .ok_or_else(|| Error::Internal("survivor outside its own kernel".into()))
            })
            .collect::<Result<_>>()?;
        let mut zero_set: Vec<QVec> = Vec::new();
        let mut strict_set: Vec<QVec> = coords.clone();
        if let Some(r) = rng.as_deref_mut() {
            // Occasionally hold a proper subset of the face at zero so the
            // construction explores deeper face chains.
            if coords.len() > 1 && r.gen_bool(0.4) {
                let keep = r.gen_range(1..coords.len());
                zero_set = coords[..keep].to_vec();
                strict_set = coords[keep..].to_vec();
            }
        }
        let found = find_functional(kernel.len(), &strict_set, &[], &zero_set, None)?;
        let lambda = match found {
            Some(l) => l,
            None => {
                // Zero subset infeasible; the pointed face always admits a
                // fully strict functional.
                zero_set.clear();
                find_functional(kernel.len(), &coords, &[], &[], None)?.ok_or_else(|| {
                    Error::InvalidCone("cone face admits no separating functional (not pointed)".into())
                })?
            }
        };
        let f = lift_rational(&kernel, &lambda, dim)?;
        levels.push(Functional::from_rationals(&f));
    }
}

fn random_nonzero(rng: &mut ChaCha8Rng, len: usize) -> QVec {
    loop {
        let v = QVec::new(
            (0..len)
                .map(|_| Q::from_integer(Z::from(rng.gen_range(-3..=3i64))))
                .collect(),
        );
        if !v.is_zero() {
            return v;
        }
    }
}

/// A linear extension of the cone order sampled by randomized level
/// objectives; deterministic per seed.
pub fn random_extension(
    group: &GroupPresentation,
    cone: &ConeSpec,
    seed: u64,
) -> Result<OrderStack> {
    let dim = group.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut levels: Vec<Functional> = Vec::new();
    let gens = cone.generators();
    if !gens.is_empty() {
        // Top level: strictly positive on a random generator subset, the
        // rest held at zero when the LP allows it.
        let mut strict = Vec::new();
        let mut zeros = Vec::new();
        for g in gens {
            if rng.gen_bool(0.75) {
                strict.push(g.clone());
            } else {
                zeros.push(g.clone());
            }
        }
        if strict.is_empty() {
            strict = gens.to_vec();
            zeros.clear();
        }
        let f = match find_functional(dim, &strict, &[], &zeros, None)? {
            Some(f) => f,
            None => find_functional(dim, gens, &[], &[], None)?.ok_or_else(|| {
                Error::InvalidCone("cone admits no separating functional (not pointed)".into())
            })?,
        };
        levels.push(Functional::from_rationals(&f));
    }
    complete_extension(cone, &mut levels, dim, Some(&mut rng))?;
    let stack = OrderStack::new(dim, levels)?;
    let report = is_extension(&stack, cone, group)?;
    if !report.is_extension {
        return Err(Error::Internal(
            "random extension failed post-validation".into(),
        ));
    }
    Ok(stack)
}

#[derive(Clone, Debug)]
pub struct PointReport {
    pub point: QVec,
    pub in_closure: bool,
    /// A separating extension was constructed for this point.
    pub separated: bool,
    /// Extensions in the final pool signing the point non-negative.
    pub nonneg_extensions: usize,
}

#[derive(Clone, Debug)]
pub struct HarnessReport {
    /// Membership is always evaluated against the semiclosed closure of
    /// the input cone.
    pub closure_applied: bool,
    pub pool_size: usize,
    pub points: Vec<PointReport>,
}

/// Intersection harness: closure members must be non-negative in every
/// extension of the pool; non-members must each admit a separating
/// extension, which joins the pool.
pub fn intersection_harness(
    group: &GroupPresentation,
    cone: &ConeSpec,
    sample_points: &[QVec],
    k_extensions: usize,
    seed: u64,
) -> Result<HarnessReport> {
    harness_impl(group, cone, sample_points, k_extensions, seed, cfg!(feature = "parallel"))
}

/// Sequential run of the same harness; kept callable for benchmarking
/// against the data-parallel path.
pub fn intersection_harness_seq(
    group: &GroupPresentation,
    cone: &ConeSpec,
    sample_points: &[QVec],
    k_extensions: usize,
    seed: u64,
) -> Result<HarnessReport> {
    harness_impl(group, cone, sample_points, k_extensions, seed, false)
}

fn harness_impl(
    group: &GroupPresentation,
    cone: &ConeSpec,
    sample_points: &[QVec],
    k_extensions: usize,
    seed: u64,
    parallel: bool,
) -> Result<HarnessReport> {
    // Phase A: per point, closure membership and (outside) a separating
    // extension. Independent per point, so data-parallel.
    let classify = |p: &QVec| -> Result<(bool, Option<OrderStack>)> {
        if closure_contains(group, cone, p)? {
            Ok((true, None))
        } else {
            let s = separating_extension(group, cone, p)?;
            Ok((false, Some(s)))
        }
    };
    let classified: Vec<(bool, Option<OrderStack>)> = map_points(sample_points, classify, parallel)?;

    // Phase B: deterministic pool assembly, random extensions first.
    let mut pool: Vec<OrderStack> = (0..k_extensions)
        .map(|i| random_extension(group, cone, seed.wrapping_add(i as u64)))
        .collect::<Result<_>>()?;
    for (_, s) in &classified {
        if let Some(s) = s {
            pool.push(s.clone());
        }
    }

    // Phase C: evaluate every point against the final pool.
    let pool_ref = &pool;
    let evaluate = |idx_point: &(usize, &QVec)| -> Result<PointReport> {
        let (i, p) = *idx_point;
        let (in_closure, ref separated) = classified[i];
        let mut nonneg = 0usize;
        for s in pool_ref {
            match s.sign(p)? {
                Sign::Neg => {
                    if in_closure {
                        return Err(Error::Internal(format!(
                            "closure member {} signed negative by a pool extension",
                            p
                        )));
                    }
                }
                _ => nonneg += 1,
            }
        }
        Ok(PointReport {
            point: p.clone(),
            in_closure,
            separated: separated.is_some(),
            nonneg_extensions: nonneg,
        })
    };
    let indexed: Vec<(usize, &QVec)> = sample_points.iter().enumerate().collect();
    let points = map_points(&indexed, evaluate, parallel)?;

    Ok(HarnessReport {
        closure_applied: true,
        pool_size: pool.len(),
        points,
    })
}

#[cfg(feature = "parallel")]
fn map_points<I, T, F>(items: &[I], f: F, parallel: bool) -> Result<Vec<T>>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> Result<T> + Sync,
{
    use rayon::prelude::*;
    if parallel {
        items.par_iter().map(|i| f(i)).collect()
    } else {
        items.iter().map(|i| f(i)).collect()
    }
}

#[cfg(not(feature = "parallel"))]
fn map_points<I, T, F>(items: &[I], f: F, _parallel: bool) -> Result<Vec<T>>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> Result<T> + Sync,
{
    items.iter().map(|i| f(i)).collect()
}

/// Coordinatewise comparison verdict in the directed product order.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ProductOrder {
    Le,
    Ge,
    Eq,
    Incomparable,
}

pub fn product_leq(a: &QVec, b: &QVec) -> Result<ProductOrder> {
    b.check_dim(a.dim())?;
    let mut le = true;
    let mut ge = true;
    for (x, y) in a.iter().zip(b.iter()) {
        if x < y {
            ge = false;
        }
        if x > y {
            le = false;
        }
    }
    Ok(match (le, ge) {
        (true, true) => ProductOrder::Eq,
        (true, false) => ProductOrder::Le,
        (false, true) => ProductOrder::Ge,
        (false, false) => ProductOrder::Incomparable,
    })
}

/// Coordinatewise least integer upper bound; lies in the integer lattice.
pub fn directed_join(a: &QVec, b: &QVec) -> Result<QVec> {
    b.check_dim(a.dim())?;
    Ok(QVec::new(
        a.iter()
            .zip(b.iter())
            .map(|(x, y)| {
                let m = if x >= y { x.clone() } else { y.clone() };
                Q::from_integer(m.ceil().to_integer())
            })
            .collect(),
    ))
}

/// Least n >= 1 with n*a not <= b in the product order; requires a, b
/// strictly positive in the product order.
pub fn archimedean_witness(a: &QVec, b: &QVec) -> Result<u64> {
    b.check_dim(a.dim())?;
    let positive = |v: &QVec| !v.is_zero() && v.iter().all(|c| !c.is_negative());
    if !positive(a) || !positive(b) {
        return Err(Error::InvalidCone(
            "arguments must be strictly positive in the product order".into(),
        ));
    }
    // Scan bound: max over coordinates with a(e) > 0 of ceil(b/a) + 1.
    let bound = a
        .iter()
        .zip(b.iter())
        .filter(|(x, _)| x.is_positive())
        .map(|(x, y)| {
            let ratio = y / x;
            let c = ratio.ceil().to_integer();
            c + Z::one()
        })
        .max()
        .expect("a has a positive coordinate");
    let mut n = Z::one();
    while n <= bound {
        let scaled = a.scale(&Q::from_integer(n.clone()));
        let verdict = product_leq(&scaled, b)?;
        if verdict != ProductOrder::Le && verdict != ProductOrder::Eq {
            return u64::try_from(&n)
                .map_err(|_| Error::Internal("witness exceeds u64".into()));
        }
        n += Z::one();
    }
    Err(Error::Internal("archimedean scan exceeded its bound".into()))
}
