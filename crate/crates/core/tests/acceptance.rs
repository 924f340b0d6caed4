//! End-to-end acceptance suite. Each test prints one `pass`/`fail` line
//! and asserts the same verdict. All randomness is seeded; every check is
//! exact (no tolerances).

use std::collections::HashMap;

use num::{One, Signed};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use lexorder::extension::{archimedean_witness, directed_join, product_leq, ProductOrder};
use lexorder::freal::Functional;
use lexorder::linalg::{QMatrix, QVec, Q, Z};
use lexorder::stack::{
    holder_map, is_archimedean, is_linear_on, orders_equal, zajceva_stack, OrderEquality,
    OrderStack, Sign,
};
use lexorder::{
    check_hyperplane_condition, closure_contains, intersection_harness, is_extension, psi,
    random_extension, separating_extension, ConeSpec, GroupPresentation,
};

fn report(name: &str, pass: bool) {
    println!("{}: {}", name, if pass { "pass" } else { "fail" });
    assert!(pass, "{} failed", name);
}

fn rand_int(rng: &mut ChaCha8Rng, height: i64) -> Q {
    Q::from_integer(Z::from(rng.gen_range(-height..=height)))
}

fn rand_q(rng: &mut ChaCha8Rng, height: i64) -> Q {
    Q::new(
        Z::from(rng.gen_range(-height..=height)),
        Z::from(rng.gen_range(1..=height)),
    )
}

fn rand_int_vec(rng: &mut ChaCha8Rng, n: usize, height: i64) -> QVec {
    QVec::new((0..n).map(|_| rand_int(rng, height)).collect())
}

fn rand_q_vec(rng: &mut ChaCha8Rng, n: usize, height: i64) -> QVec {
    QVec::new((0..n).map(|_| rand_q(rng, height)).collect())
}

fn rand_nonzero_q_vec(rng: &mut ChaCha8Rng, n: usize, height: i64) -> QVec {
    loop {
        let v = rand_q_vec(rng, n, height);
        if !v.is_zero() {
            return v;
        }
    }
}

/// Random linear stack: a random extension of the trivial (zero) cone.
fn random_linear_stack(rng: &mut ChaCha8Rng, n: usize) -> OrderStack {
    let group = GroupPresentation::lattice(n);
    let cone = ConeSpec::new(n, vec![]).unwrap();
    random_extension(&group, &cone, rng.gen()).unwrap()
}

/// Random pointed cone with 1..=max_gens nonzero generators.
fn random_pointed_cone(rng: &mut ChaCha8Rng, n: usize, max_gens: usize, height: i64) -> ConeSpec {
    loop {
        let k = rng.gen_range(1..=max_gens);
        let gens: Vec<QVec> = (0..k).map(|_| rand_int_vec(rng, n, height)).collect();
        if gens.iter().all(|g| g.is_zero()) {
            continue;
        }
        let cone = ConeSpec::new(n, gens).unwrap();
        if cone.separating_functional().unwrap().is_some() {
            return cone;
        }
    }
}

#[test]
fn criterion_01_embedding_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut ok = true;
    for _ in 0..10_000 {
        let n = rng.gen_range(1..=6);
        let group = GroupPresentation::lattice(n);
        let r = rand_int_vec(&mut rng, n, 1000);
        // phi(psi(r)) = r and psi(phi(g)) = g, both identities on coordinates.
        let g = psi(&r).unwrap();
        ok &= group.phi(&g).unwrap() == r;
        ok &= psi(&group.phi(&g).unwrap()).unwrap() == g;
    }
    report("criterion 1 embedding round-trip", ok);
}

#[test]
fn criterion_02_trichotomy() {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut ok = true;
    for _ in 0..1000 {
        let n = rng.gen_range(1..=4);
        let stack = random_linear_stack(&mut rng, n).clarify().stack;
        let v = rand_nonzero_q_vec(&mut rng, n, 20);
        let s = stack.sign(&v).unwrap();
        ok &= s != Sign::Zero;
        ok &= stack.sign(&(-&v)).unwrap() == s.flip();
        let mut scale = rand_q(&mut rng, 50);
        if !scale.is_positive() {
            scale = Q::one() - scale;
        }
        ok &= stack.sign(&v.scale(&scale)).unwrap() == s;
        ok &= stack.sign(&QVec::zero(n)).unwrap() == Sign::Zero;
    }
    report("criterion 2 trichotomy", ok);
}

#[test]
fn criterion_03_closure_laws() {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let mut ok = true;
    // Idempotence: adjoining a closure member to the generators changes
    // no membership verdict. 40 cones x 25 probes = 10^3.
    for _ in 0..40 {
        let n = rng.gen_range(1..=3);
        let group = GroupPresentation::lattice(n);
        let cone = random_pointed_cone(&mut rng, n, n + 1, 4);
        let member = cone.generators()[0].scale(&rand_q(&mut rng, 3).abs());
        let mut gens = cone.generators().to_vec();
        gens.push(member);
        let extended = ConeSpec::new(n, gens).unwrap();
        for _ in 0..25 {
            let p = rand_int_vec(&mut rng, n, 6);
            ok &= closure_contains(&group, &cone, &p).unwrap()
                == closure_contains(&group, &extended, &p).unwrap();
        }
    }
    // Semiclosed implication: m*g in the closure forces g in the closure.
    for _ in 0..1000 {
        let n = rng.gen_range(1..=3);
        let group = GroupPresentation::lattice(n);
        let cone = random_pointed_cone(&mut rng, n, n + 1, 4);
        let g = rand_int_vec(&mut rng, n, 5);
        let m = rng.gen_range(1..=20i64);
        if closure_contains(&group, &cone, &g.scale(&Q::from_integer(Z::from(m)))).unwrap() {
            ok &= closure_contains(&group, &cone, &g).unwrap();
        }
    }
    // Purity: pointed cones never contain a nonzero g together with -g.
    for _ in 0..200 {
        let n = rng.gen_range(1..=3);
        let group = GroupPresentation::lattice(n);
        let cone = random_pointed_cone(&mut rng, n, n + 1, 4);
        let g = rand_int_vec(&mut rng, n, 5);
        if !g.is_zero()
            && closure_contains(&group, &cone, &g).unwrap()
            && closure_contains(&group, &cone, &(-&g)).unwrap()
        {
            ok = false;
        }
    }
    report("criterion 3 closure laws", ok);
}

/// Brute-force cone membership: by Caratheodory a member is a nonnegative
/// combination of some linearly independent generator subset, where the
/// coefficients are the unique exact solution of a square-ish system.
fn oracle_in_cone(cone: &ConeSpec, v: &QVec) -> bool {
    if v.is_zero() {
        return true;
    }
    let n = cone.dim();
    let gens = cone.generators();
    let k = gens.len();
    for mask in 1u32..(1 << k) {
        let subset: Vec<&QVec> = (0..k).filter(|i| mask & (1 << i) != 0).map(|i| &gens[i]).collect();
        if subset.len() > n {
            continue;
        }
        let m = QMatrix::from_rows(n, subset.iter().map(|g| (*g).clone()).collect());
        if m.rank() != subset.len() {
            continue;
        }
        // Columns are the subset generators; solve for the coefficients.
        let cols = QMatrix::from_rows(
            subset.len(),
            (0..n)
                .map(|r| QVec::new(subset.iter().map(|g| g[r].clone()).collect()))
                .collect(),
        );
        if let Some(lambda) = cols.solve(v) {
            if lambda.iter().all(|c| !c.is_negative()) {
                return true;
            }
        }
    }
    false
}

#[test]
fn criterion_04_membership_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut probes = 0;
    let mut ok = true;
    while probes < 500 {
        let n = rng.gen_range(1..=3);
        let k = rng.gen_range(1..=4);
        let gens: Vec<QVec> = (0..k).map(|_| rand_int_vec(&mut rng, n, 5)).collect();
        let cone = ConeSpec::new(n, gens).unwrap();
        let group = GroupPresentation::lattice(n);
        for _ in 0..10 {
            let v = rand_int_vec(&mut rng, n, 8);
            let lp_verdict = closure_contains(&group, &cone, &v).unwrap();
            let oracle_verdict = group.contains(&v) && oracle_in_cone(&cone, &v);
            ok &= lp_verdict == oracle_verdict;
            probes += 1;
        }
    }
    report("criterion 4 membership oracle agreement", ok);
}

#[test]
fn criterion_05_extension_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let mut ok = true;
    for _ in 0..200 {
        let n = rng.gen_range(1..=4);
        let group = GroupPresentation::lattice(n);
        let cone = random_pointed_cone(&mut rng, n, n + 1, 5);
        let stack = random_linear_stack(&mut rng, n);
        let a = is_extension(&stack, &cone, &group).unwrap().is_extension;
        let b = check_hyperplane_condition(&stack, &cone).unwrap();
        ok &= a == b;
    }
    report("criterion 5 extension criterion equivalence", ok);
}

#[test]
fn criterion_06_separation_and_harness() {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let mut ok = true;
    for _ in 0..50 {
        let n = rng.gen_range(1..=4);
        let group = GroupPresentation::lattice(n);
        let cone = random_pointed_cone(&mut rng, n, n + 1, 4);
        let mut outsiders = Vec::new();
        while outsiders.len() < 10 {
            let p = rand_int_vec(&mut rng, n, 6);
            if !closure_contains(&group, &cone, &p).unwrap() {
                outsiders.push(p);
            }
        }
        for p in &outsiders {
            let s = separating_extension(&group, &cone, p).unwrap();
            ok &= s.sign(p).unwrap() == Sign::Neg;
            ok &= is_extension(&s, &cone, &group).unwrap().is_extension;
        }
        // Harness with members mixed in; it fails internally if any
        // closure member goes negative in any pool extension.
        let mut samples = outsiders;
        samples.push(cone.generators()[0].clone());
        samples.push(QVec::zero(n));
        let r = intersection_harness(&group, &cone, &samples, 3, rng.gen()).unwrap();
        ok &= r.closure_applied;
        for pr in r.points.iter().take(10) {
            ok &= !pr.in_closure && pr.separated && pr.nonneg_extensions < r.pool_size;
        }
    }
    report("criterion 6 separation soundness and harness", ok);
}

#[test]
fn criterion_07_archimedean_and_holder() {
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let mut ok = true;
    for n in 1..=6 {
        let group = GroupPresentation::lattice(n);
        ok &= is_archimedean(&group, &zajceva_stack(n).unwrap()).unwrap();
    }
    // Rational lex stacks with >= 2 levels are never archimedean.
    for _ in 0..50 {
        let n = rng.gen_range(2..=4);
        let group = GroupPresentation::lattice(n);
        let stack = loop {
            let levels: Vec<Functional> = (0..n)
                .map(|_| Functional::from_rationals(&rand_nonzero_q_vec(&mut rng, n, 5)))
                .collect();
            let s = match OrderStack::new(n, levels) {
                Ok(s) => s,
                Err(_) => continue,
            };
            if is_linear_on(&group, &s).unwrap() {
                break s;
            }
        };
        ok &= !is_archimedean(&group, &stack).unwrap();
    }
    // Holder embedding: sign agreement and injectivity on a sample.
    let n = 4;
    let group = GroupPresentation::lattice(n);
    let stack = zajceva_stack(n).unwrap();
    let f = holder_map(&group, &stack).unwrap();
    let mut seen: HashMap<String, QVec> = HashMap::new();
    for _ in 0..1000 {
        let v = rand_int_vec(&mut rng, n, 50);
        let value = f.dot(&v).unwrap();
        ok &= Sign::of(value.sign()) == stack.sign(&v).unwrap();
        // Formal reals print canonically, so equal strings mean equal values.
        if let Some(prev) = seen.insert(value.to_string(), v.clone()) {
            ok &= prev == v;
        }
    }
    report("criterion 7 archimedean classification and embedding", ok);
}

#[test]
fn criterion_08_directed_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    let mut ok = true;
    for _ in 0..1000 {
        let n = rng.gen_range(1..=4);
        let a = rand_q_vec(&mut rng, n, 30);
        let b = rand_q_vec(&mut rng, n, 30);
        let j = directed_join(&a, &b).unwrap();
        ok &= j.is_integer();
        ok &= matches!(product_leq(&a, &j).unwrap(), ProductOrder::Le | ProductOrder::Eq);
        ok &= matches!(product_leq(&b, &j).unwrap(), ProductOrder::Le | ProductOrder::Eq);
        // Least integer bound: dropping any coordinate by 1 undercuts max(a, b).
        for i in 0..n {
            let lowered = &j[i] - Q::one();
            ok &= lowered < a[i] || lowered < b[i];
        }
    }
    let mut found = 0;
    while found < 500 {
        let n = rng.gen_range(1..=4);
        let a = QVec::new((0..n).map(|_| rand_q(&mut rng, 10).abs()).collect());
        let b = QVec::new((0..n).map(|_| rand_q(&mut rng, 10).abs()).collect());
        if a.is_zero() || b.is_zero() {
            continue;
        }
        found += 1;
        let w = archimedean_witness(&a, &b).unwrap();
        let wq = Q::from_integer(Z::from(w));
        ok &= !matches!(
            product_leq(&a.scale(&wq), &b).unwrap(),
            ProductOrder::Le | ProductOrder::Eq
        );
        if w > 1 {
            let prev = Q::from_integer(Z::from(w - 1));
            ok &= matches!(
                product_leq(&a.scale(&prev), &b).unwrap(),
                ProductOrder::Le | ProductOrder::Eq
            );
        }
        // Stated scan bound over coordinates with a(e) > 0.
        let bound = a
            .iter()
            .zip(b.iter())
            .filter(|(x, _)| x.is_positive())
            .map(|(x, y)| (y / x).ceil().to_integer() + Z::one())
            .max()
            .unwrap();
        ok &= Z::from(w) <= bound;
    }
    report("criterion 8 directed joins and archimedean witnesses", ok);
}

#[test]
fn criterion_09_order_equality() {
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let mut ok = true;
    let mut sign_samples = 0;
    while sign_samples < 1000 {
        let n = rng.gen_range(2..=4);
        let group = GroupPresentation::lattice(n);
        let base = random_linear_stack(&mut rng, n);
        // Positive per-level rescaling.
        let scaled_levels: Vec<Functional> = base
            .levels()
            .iter()
            .map(|l| {
                let c = rand_q(&mut rng, 5).abs() + Q::one();
                Functional::new(l.entries().iter().map(|e| e.scale(&c)).collect())
            })
            .collect();
        let scaled = OrderStack::new(n, scaled_levels).unwrap();
        ok &= matches!(
            orders_equal(&group, &base, &scaled).unwrap(),
            OrderEquality::Equal
        );
        // Passive-level insertion, when depth allows.
        if base.levels().len() < n {
            let mut levels = base.levels().to_vec();
            levels.insert(1.min(levels.len()), levels[0].clone());
            let padded = OrderStack::new(n, levels).unwrap();
            ok &= matches!(
                orders_equal(&group, &base, &padded).unwrap(),
                OrderEquality::Equal
            );
        }
        for _ in 0..20 {
            let v = rand_nonzero_q_vec(&mut rng, n, 20);
            ok &= base.sign(&v).unwrap() == scaled.sign(&v).unwrap();
            sign_samples += 1;
        }
        // Flipping the last level breaks equality with a checkable witness.
        let mut levels = base.levels().to_vec();
        let last = levels.len() - 1;
        levels[last] =
            Functional::new(levels[last].entries().iter().map(|e| e.neg()).collect());
        let flipped = OrderStack::new(n, levels).unwrap();
        match orders_equal(&group, &base, &flipped).unwrap() {
            OrderEquality::Different { witness } => {
                let a = base.sign(&witness).unwrap();
                let b = flipped.sign(&witness).unwrap();
                ok &= matches!((a, b), (Sign::Neg, Sign::Pos) | (Sign::Pos, Sign::Neg));
            }
            OrderEquality::Equal => ok = false,
        }
    }
    report("criterion 9 order equality invariances", ok);
}

#[test]
fn criterion_10_cli_contract() {
    use std::io::Write as _;
    let mut ok = true;

    let run = |args: &[&str]| -> (i32, String) {
        let mut argv: Vec<String> = vec!["lexorder".into()];
        argv.extend(args.iter().map(|s| s.to_string()));
        let mut out = Vec::new();
        let code = lexorder::cli::run(&argv, &mut out);
        (code, String::from_utf8(out).unwrap())
    };

    // Golden parse/print round-trip.
    let golden_in = "dim 2\n\
        group g { gen 1 0; gen 0 1; gen 1/2 1/2; }\n\
        cone c { gen 2 1; gen 2 -1; }\n\
        stack s { level 1+2*sqrt2-1/3*sqrt5 7; }\n";
    let golden_out = "dim 2\n\
        group g {\n  gen 1 0;\n  gen 0 1;\n  gen 1/2 1/2;\n}\n\
        cone c {\n  gen 2 1;\n  gen 2 -1;\n}\n\
        stack s {\n  level 1+2*sqrt2-1/3*sqrt5 7;\n}\n";
    let parsed = lexorder::dsl::parse_spec(golden_in).unwrap();
    ok &= parsed.to_dsl() == golden_out;
    ok &= lexorder::dsl::parse_spec(golden_out).unwrap().to_dsl() == golden_out;

    // separate -> is-extension pipeline on 20 scenarios.
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    let mut done = 0;
    while done < 20 {
        let n = rng.gen_range(2..=3);
        let group = GroupPresentation::lattice(n);
        let cone = random_pointed_cone(&mut rng, n, n + 1, 4);
        let target = loop {
            let p = rand_int_vec(&mut rng, n, 5);
            if !closure_contains(&group, &cone, &p).unwrap() {
                break p;
            }
        };
        let mut spec_text = format!("dim {}\ncone c {{\n", n);
        for g in cone.generators() {
            spec_text.push_str(&format!("  gen {};\n", lexorder::dsl::format_qvec(g)));
        }
        spec_text.push_str("}\n");
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(spec_text.as_bytes()).unwrap();
        let path = f.path().to_str().unwrap().to_string();
        let target_str = lexorder::dsl::format_qvec(&target);
        let (code, out) = run(&[
            "separate", "--spec", &path, "--cone", "c", "--point", &target_str,
        ]);
        ok &= code == 0;
        let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
        ok &= v["separated"] == true;
        // Feed the emitted stack back through is-extension and sign; the
        // emitted document repeats the dim line, so drop it before merging.
        let dsl = v["dsl"].as_str().unwrap();
        let stack_block = dsl.split_once('\n').unwrap().1;
        let combined = format!("{}{}", spec_text, stack_block);
        let mut f2 = tempfile::NamedTempFile::new().unwrap();
        f2.write_all(combined.as_bytes()).unwrap();
        let path2 = f2.path().to_str().unwrap().to_string();
        let (code, _) = run(&[
            "is-extension", "--spec", &path2, "--cone", "c", "--stack", "sep",
        ]);
        ok &= code == 0;
        let (code, out) = run(&[
            "sign", "--spec", &path2, "--stack", "sep", "--point", &target_str,
        ]);
        ok &= code == 0;
        let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
        ok &= v["sign"] == "neg";
        done += 1;
    }

    // Exit-code contract: 0 true, 1 false, 2 malformed input.
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(b"dim 2\ncone c { gen 1 0; gen 0 1; }\n").unwrap();
    let path = f.path().to_str().unwrap().to_string();
    ok &= run(&["closure", "--spec", &path, "--cone", "c", "--point", "1 1"]).0 == 0;
    ok &= run(&["closure", "--spec", &path, "--cone", "c", "--point", "-1 0"]).0 == 1;
    ok &= run(&["closure", "--spec", &path, "--cone", "c", "--point", "bogus"]).0 == 2;
    ok &= run(&["closure", "--spec", "/no/such/file", "--cone", "c", "--point", "1 1"]).0 == 2;

    report("criterion 10 CLI contract", ok);
}
