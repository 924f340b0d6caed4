//! Command-line front end. Every command prints one JSON line; exit code
//! 0 means success (and a true verdict for yes/no commands), 1 a false
//! verdict, 2 a malformed input.

use std::io::Write;

use clap::{Args, Parser, Subcommand};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::cone::{closure_contains, validate_cone};
use crate::dsl::{format_qvec, parse_point, parse_spec, SpecFile};
use crate::error::{Error, Result};
use crate::extension::{
    directed_join, intersection_harness, is_extension, separating_extension,
};
use crate::group::GroupPresentation;
use crate::linalg::QVec;
use crate::stack::{
    holder_value, is_archimedean, is_linear_on, orders_equal, OrderEquality, OrderStack, Sign,
};

pub const EXIT_TRUE: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Parser)]
#[command(name = "lexorder", version, about = "Exact linear orders on subgroups of Q^n")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SpecArg {
    /// Path to a spec file in the text DSL.
    #[arg(long)]
    spec: String,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a spec file; with a group and cone, check purity and directedness.
    Validate {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        cone: Option<String>,
    },
    /// Membership of a point in the semiclosed closure of a cone order.
    Closure {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        cone: String,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Sign of a point under an order stack.
    Sign {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        stack: String,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Does the stack's linear order extend the cone order?
    IsExtension {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        cone: String,
        #[arg(long)]
        stack: String,
    },
    /// Construct a linear extension signing the point negative.
    Separate {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        cone: String,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Linearity and archimedean classification of a stack.
    Classify {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        stack: String,
    },
    /// Do two linear stacks induce the same order?
    Equal {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        stack: String,
        #[arg(long)]
        stack2: String,
    },
    /// Real value of a point under the order embedding of an archimedean stack.
    Holder {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        stack: String,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        /// Fractional bits of the printed decimal approximation.
        #[arg(long, default_value_t = 64)]
        bits: u64,
    },
    /// Coordinatewise least integer upper bound of two rational points.
    Join {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// Sampling harnesses over pools of linear extensions.
    Harness {
        #[command(subcommand)]
        mode: HarnessMode,
    },
}

#[derive(Subcommand)]
enum HarnessMode {
    /// Check sample points against a pool of extensions of a cone order:
    /// closure members stay non-negative everywhere, outsiders are separated.
    Intersection {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        cone: String,
        /// Number of random integer sample points.
        #[arg(long, default_value_t = 0)]
        samples: usize,
        /// Number of random extensions in the pool.
        #[arg(long, default_value_t = 3)]
        extensions: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Explicit sample points, repeatable.
        #[arg(long = "point", allow_hyphen_values = true)]
        points: Vec<String>,
    },
}

fn load_spec(path: &str) -> Result<SpecFile> {
    let src = std::fs::read_to_string(path)
        .map_err(|e| Error::UnknownName(format!("cannot read {}: {}", path, e)))?;
    parse_spec(&src)
}

/// The named group, or the integer lattice when no name is given.
fn group_or_lattice(spec: &SpecFile, name: &Option<String>) -> Result<GroupPresentation> {
    match name {
        Some(n) => spec.group(n).cloned(),
        None => Ok(GroupPresentation::lattice(spec.dim)),
    }
}

fn sign_str(s: Sign) -> &'static str {
    match s {
        Sign::Neg => "neg",
        Sign::Zero => "zero",
        Sign::Pos => "pos",
    }
}

fn stack_to_dsl(dim: usize, stack: &OrderStack) -> String {
    let mut out = format!("dim {}\nstack sep {{\n", dim);
    for level in stack.levels() {
        out.push_str(&format!("  level {};\n", level));
    }
    out.push_str("}\n");
    out
}

/// Run the CLI on `argv` (including the program name), writing output to
/// `out`. Returns the process exit code.
pub fn run(argv: &[String], out: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(out, "{}", e.render());
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_TRUE };
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(out, "{}", json!({ "error": e.to_string() }));
            EXIT_ERROR
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    let mut emit = |v: serde_json::Value| -> Result<()> {
        writeln!(out, "{}", v).map_err(|e| Error::Internal(e.to_string()))
    };
    match cli.command {
        Command::Validate { spec, group, cone } => {
            let file = load_spec(&spec.spec)?;
            match cone {
                None => {
                    emit(json!({
                        "ok": true,
                        "dim": file.dim,
                        "groups": file.groups.len(),
                        "cones": file.cones.len(),
                        "stacks": file.stacks.len(),
                    }))?;
                    Ok(EXIT_TRUE)
                }
                Some(cname) => {
                    let g = group_or_lattice(&file, &group)?;
                    let c = file.cone(&cname)?;
                    let report = validate_cone(&g, c)?;
                    emit(json!({
                        "ok": report.pure && report.directed,
                        "pure": report.pure,
                        "directed": report.directed,
                        "pointed_witness": report.pointed_witness.as_ref().map(format_qvec),
                    }))?;
                    Ok(if report.pure && report.directed {
                        EXIT_TRUE
                    } else {
                        EXIT_FALSE
                    })
                }
            }
        }
        Command::Closure {
            spec,
            group,
            cone,
            point,
        } => {
            let file = load_spec(&spec.spec)?;
            let g = group_or_lattice(&file, &group)?;
            let c = file.cone(&cone)?;
            let p = parse_point(&point, file.dim)?;
            let contains = closure_contains(&g, c, &p)?;
            emit(json!({ "contains": contains }))?;
            Ok(if contains { EXIT_TRUE } else { EXIT_FALSE })
        }
        Command::Sign { spec, stack, point } => {
            let file = load_spec(&spec.spec)?;
            let s = file.stack(&stack)?;
            let p = parse_point(&point, file.dim)?;
            let sign = s.sign(&p)?;
            emit(json!({ "sign": sign_str(sign) }))?;
            Ok(EXIT_TRUE)
        }
        Command::IsExtension {
            spec,
            group,
            cone,
            stack,
        } => {
            let file = load_spec(&spec.spec)?;
            let g = group_or_lattice(&file, &group)?;
            let c = file.cone(&cone)?;
            let s = file.stack(&stack)?;
            let report = is_extension(s, c, &g)?;
            emit(json!({
                "is_extension": report.is_extension,
                "violating_generator": report.violating_generator.as_ref().map(format_qvec),
            }))?;
            Ok(if report.is_extension {
                EXIT_TRUE
            } else {
                EXIT_FALSE
            })
        }
        Command::Separate {
            spec,
            group,
            cone,
            point,
        } => {
            let file = load_spec(&spec.spec)?;
            let g = group_or_lattice(&file, &group)?;
            let c = file.cone(&cone)?;
            let p = parse_point(&point, file.dim)?;
            match separating_extension(&g, c, &p) {
                Ok(s) => {
                    emit(json!({
                        "separated": true,
                        "dsl": stack_to_dsl(file.dim, &s),
                    }))?;
                    Ok(EXIT_TRUE)
                }
                Err(Error::NotSeparable) => {
                    emit(json!({ "separated": false }))?;
                    Ok(EXIT_FALSE)
                }
                Err(e) => Err(e),
            }
        }
        Command::Classify { spec, group, stack } => {
            let file = load_spec(&spec.spec)?;
            let g = group_or_lattice(&file, &group)?;
            let s = file.stack(&stack)?;
            let linear = is_linear_on(&g, s)?;
            let archimedean = if linear {
                Some(is_archimedean(&g, s)?)
            } else {
                None
            };
            let clarified = s.clarify();
            emit(json!({
                "linear": linear,
                "archimedean": archimedean,
                "clarified_levels": clarified.stack.levels().len(),
            }))?;
            Ok(EXIT_TRUE)
        }
        Command::Equal {
            spec,
            group,
            stack,
            stack2,
        } => {
            let file = load_spec(&spec.spec)?;
            let g = group_or_lattice(&file, &group)?;
            let s1 = file.stack(&stack)?;
            let s2 = file.stack(&stack2)?;
            match orders_equal(&g, s1, s2)? {
                OrderEquality::Equal => {
                    emit(json!({ "equal": true }))?;
                    Ok(EXIT_TRUE)
                }
                OrderEquality::Different { witness } => {
                    emit(json!({ "equal": false, "witness": format_qvec(&witness) }))?;
                    Ok(EXIT_FALSE)
                }
            }
        }
        Command::Holder {
            spec,
            group,
            stack,
            point,
            bits,
        } => {
            let file = load_spec(&spec.spec)?;
            let g = group_or_lattice(&file, &group)?;
            let s = file.stack(&stack)?;
            let p = parse_point(&point, file.dim)?;
            let value = holder_value(&g, s, &p)?;
            emit(json!({
                "value": value.to_string(),
                "decimal": value.decimal(bits),
            }))?;
            Ok(EXIT_TRUE)
        }
        Command::Join { a, b } => {
            let av: Vec<&str> = a.split_whitespace().collect();
            let pa = parse_point(&a, av.len())?;
            let pb = parse_point(&b, av.len())?;
            let j = directed_join(&pa, &pb)?;
            emit(json!({ "join": format_qvec(&j) }))?;
            Ok(EXIT_TRUE)
        }
        Command::Harness { mode } => {
            let HarnessMode::Intersection {
                spec,
                group,
                cone,
                samples,
                extensions,
                seed,
                points,
            } = mode;
            let file = load_spec(&spec.spec)?;
            let g = group_or_lattice(&file, &group)?;
            let c = file.cone(&cone)?;
            let mut pts: Vec<QVec> = points
                .iter()
                .map(|p| parse_point(p, file.dim))
                .collect::<Result<_>>()?;
            // Random integer samples lie in the group: it contains the
            // integer lattice by construction.
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e3779b97f4a7c15);
            for _ in 0..samples {
                pts.push(QVec::from_ints(
                    &(0..file.dim)
                        .map(|_| rng.gen_range(-9..=9i64))
                        .collect::<Vec<_>>(),
                ));
            }
            let report = intersection_harness(&g, c, &pts, extensions, seed)?;
            let points_json: Vec<serde_json::Value> = report
                .points
                .iter()
                .map(|p| {
                    json!({
                        "point": format_qvec(&p.point),
                        "in_closure": p.in_closure,
                        "separated": p.separated,
                        "nonneg_extensions": p.nonneg_extensions,
                    })
                })
                .collect();
            emit(json!({
                "closure_applied": report.closure_applied,
                "pool_size": report.pool_size,
                "points": points_json,
            }))?;
            Ok(EXIT_TRUE)
        }
    }
}
