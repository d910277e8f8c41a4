//! Command-line driver. Exit codes: 0 success, 1 a verified property failed,
//! 2 bad input.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bounds::{bound_eval, dyadic_degree_sum, recurrence_certify, BoundKind, BoundParams};
use crate::cutting::{lens_cutting_with, verify_cut};
use crate::dual::{audit_lenses, dual_plane, lens_line_of, lift_circle};
use crate::error::{Error, Result};
use crate::family::{select_family_with, SelectMode, SelectOptions, EXACT_CAP};
use crate::generators::{random_scene, GeneratorSpec, Model};
use crate::incidence::{count_incidences, lens_circle_incidences, szekely_stats_with};
use crate::io::{csv_string, parse_rational, parse_scene, serialize_scene};
use crate::par::Exec;
use crate::pencil::{brute_force_lenses, enumerate_lenses_with, rich_lenses};
use crate::scene::Scene;
use crate::slope::order_reversal_check;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

pub const FAMILY_HEADER: [&str; 8] = [
    "n",
    "k",
    "lenses",
    "family_size",
    "total_degree",
    "mode",
    "bound_thm1",
    "ratio",
];

#[derive(Parser, Debug)]
#[command(name = "lensarr", version, about = "Lenses in arrangements of circles")]
struct Cli {
    /// Run every kernel on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    /// Write output to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a generated scene.
    Generate {
        #[arg(long, default_value = "uniform-random")]
        model: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "1")]
        spread: String,
    },
    /// List every lens (or every k-rich lens) of a scene.
    Lenses {
        scene: PathBuf,
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// Select a non-overlapping family of k-rich lenses.
    Family(FamilyArgs),
    /// Cut circles so no k-rich lens survives.
    Cut {
        scene: PathBuf,
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// Check a property of a scene; exits 1 on any violation.
    Verify {
        #[arg(long, value_enum)]
        property: Property,
        scene: PathBuf,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value = "greedy")]
        mode: String,
    },
    /// Incidence and drawing statistics for the scene's points.
    Incidence {
        scene: PathBuf,
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// Evaluate a bound, a dyadic sum, or a recurrence certificate.
    Bound(BoundArgs),
}

#[derive(Args, Debug)]
struct FamilyArgs {
    scene: PathBuf,
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value = "greedy")]
    mode: String,
    #[arg(long, default_value_t = EXACT_CAP)]
    exact_cap: usize,
}

#[derive(Args, Debug)]
struct BoundArgs {
    /// A bound kind, or `dyadic` / `recurrence`.
    #[arg(long)]
    kind: String,
    #[arg(long)]
    n: f64,
    #[arg(long, default_value_t = 2.0)]
    k: f64,
    #[arg(long, default_value_t = 1.0)]
    m: f64,
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    #[arg(long, default_value_t = 1.0)]
    a0: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Property {
    Duality,
    Coplanarity,
    OrderReversal,
    Oracle,
}

/// Text produced by a subcommand and whether the checked property held.
struct Outcome {
    text: String,
    ok: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, ok: true }
    }
}

fn load(path: &PathBuf) -> Result<Scene> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    parse_scene(&text)
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code. Results go to `out` unless `--out` names a file; diagnostics go to
/// `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{e}");
            return code;
        }
    };
    let exec = if cli.sequential {
        Exec::Sequential
    } else {
        Exec::default()
    };
    let outcome = match dispatch(cli.command, exec) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_INPUT;
        }
    };
    let written = match &cli.out {
        Some(path) => fs::write(path, &outcome.text).map_err(|e| e.to_string()),
        None => out
            .write_all(outcome.text.as_bytes())
            .map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: {e}");
        return EXIT_INPUT;
    }
    if outcome.ok {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}

fn dispatch(cmd: Command, exec: Exec) -> Result<Outcome> {
    match cmd {
        Command::Generate {
            model,
            n,
            k,
            seed,
            spread,
        } => {
            let spec = GeneratorSpec {
                model: model.parse::<Model>()?,
                n,
                k,
                seed,
                spread: parse_rational(&spread).map_err(Error::InvalidInput)?,
            };
            Ok(Outcome::ok(serialize_scene(&random_scene(&spec)?)))
        }
        Command::Lenses { scene, k } => {
            let scene = load(&scene)?;
            let lenses = rich_lenses(&enumerate_lenses_with(&scene, exec), k)?;
            let rows = lenses.iter().map(|l| {
                let ids: Vec<String> = l.circles().iter().map(usize::to_string).collect();
                vec![
                    l.p().x.to_string(),
                    l.p().y.to_string(),
                    l.q().x.to_string(),
                    l.q().y.to_string(),
                    l.degree().to_string(),
                    ids.join(" "),
                ]
            });
            Ok(Outcome::ok(csv_string(
                &["px", "py", "qx", "qy", "degree", "circles"],
                rows,
            )))
        }
        Command::Family(args) => family(args, exec),
        Command::Cut { scene, k } => {
            let scene = load(&scene)?;
            let res = lens_cutting_with(&scene, k, exec)?;
            let violations = verify_cut(&scene, &res, exec);
            let bound = bound_eval(
                BoundKind::Thm1Degree,
                &BoundParams::new(scene.len() as f64, 0.0, k as f64),
            )?;
            let row = vec![
                scene.len().to_string(),
                k.to_string(),
                res.rich.len().to_string(),
                res.cut_count.to_string(),
                res.arcs.len().to_string(),
                violations.len().to_string(),
                bound.to_string(),
                (res.cut_count as f64 / bound).to_string(),
            ];
            Ok(Outcome {
                text: csv_string(
                    &[
                        "n",
                        "k",
                        "rich_lenses",
                        "cut_count",
                        "arcs",
                        "violations",
                        "bound_thm1_degree",
                        "ratio",
                    ],
                    [row],
                ),
                ok: violations.is_empty(),
            })
        }
        Command::Verify {
            property,
            scene,
            k,
            mode,
        } => {
            let scene = load(&scene)?;
            match property {
                Property::Duality => Ok(verify_duality(&scene, exec)),
                Property::Coplanarity => {
                    let lenses = rich_lenses(&enumerate_lenses_with(&scene, exec), k)?;
                    let opts = SelectOptions {
                        exec,
                        ..SelectOptions::default()
                    };
                    let fam = select_family_with(&scene, &lenses, mode.parse()?, opts)?;
                    let mut report = audit_lenses(&scene, fam.members(), exec);
                    report.certified = fam.is_certified();
                    Ok(Outcome {
                        ok: report.is_clean() && report.certified,
                        text: report.to_string(),
                    })
                }
                Property::OrderReversal => Ok(verify_order_reversal(&scene, exec)),
                Property::Oracle => {
                    let fast = enumerate_lenses_with(&scene, exec);
                    let slow = brute_force_lenses(&scene)?;
                    let ok = fast == slow;
                    Ok(Outcome {
                        text: format!(
                            "property oracle\nlenses {}\noracle_lenses {}\nstatus {}\n",
                            fast.len(),
                            slow.len(),
                            if ok { "ok" } else { "fail" }
                        ),
                        ok,
                    })
                }
            }
        }
        Command::Incidence { scene, k } => {
            let scene = load(&scene)?;
            let stats = szekely_stats_with(scene.points(), &scene, k, exec)?;
            let direct = count_incidences(scene.points(), &scene);
            let lenses = rich_lenses(&enumerate_lenses_with(&scene, exec), k)?;
            let opts = SelectOptions {
                exec,
                ..SelectOptions::default()
            };
            let fam = select_family_with(&scene, &lenses, SelectMode::Greedy, opts)?;
            let ok = stats.incidences == stats.neighborhood_sizes.iter().sum::<usize>()
                && stats.crossings <= stats.n * stats.n.saturating_sub(1)
                && stats.g0 + stats.g1 == stats.edges;
            let row = [
                stats.m,
                stats.n,
                direct,
                stats.edges,
                stats.g0,
                stats.g1,
                stats.max_multiplicity,
                stats.crossings,
                lens_circle_incidences(&fam),
            ]
            .map(|v| v.to_string());
            Ok(Outcome {
                text: csv_string(
                    &[
                        "m",
                        "n",
                        "incidences",
                        "edges",
                        "g0",
                        "g1",
                        "max_multiplicity",
                        "crossings",
                        "lens_circle_incidences",
                    ],
                    [row],
                ),
                ok,
            })
        }
        Command::Bound(args) => bound(args),
    }
}

fn family(args: FamilyArgs, exec: Exec) -> Result<Outcome> {
    let scene = load(&args.scene)?;
    let mode: SelectMode = args.mode.parse()?;
    let lenses = rich_lenses(&enumerate_lenses_with(&scene, exec), args.k)?;
    let opts = SelectOptions {
        exact_cap: args.exact_cap,
        exec,
    };
    let fam = select_family_with(&scene, &lenses, mode, opts)?;
    let n = scene.len();
    let bound = bound_eval(
        BoundKind::Thm1Count,
        &BoundParams::new(n.max(1) as f64, 0.0, args.k as f64),
    )?;
    let row = vec![
        n.to_string(),
        args.k.to_string(),
        lenses.len().to_string(),
        fam.len().to_string(),
        fam.total_degree().to_string(),
        mode.to_string(),
        bound.to_string(),
        (fam.len() as f64 / bound).to_string(),
    ];
    Ok(Outcome {
        text: csv_string(&FAMILY_HEADER, [row]),
        ok: fam.is_certified(),
    })
}

fn bound(args: BoundArgs) -> Result<Outcome> {
    match args.kind.as_str() {
        "dyadic" => {
            let d = dyadic_degree_sum(args.n, args.k, args.a)?;
            let row = [
                args.n.to_string(),
                args.k.to_string(),
                d.j0.to_string(),
                d.sum.to_string(),
                d.closed_form.to_string(),
                d.ratio.to_string(),
            ];
            Ok(Outcome::ok(csv_string(
                &["n", "k", "j0", "sum", "closed_form", "ratio"],
                [row],
            )))
        }
        "recurrence" => {
            let cert = recurrence_certify(args.n, args.k, args.a, args.a0)?;
            let mut text = csv_string(
                &["j", "n_j", "d_j", "bound_j"],
                cert.trace.iter().map(|r| {
                    [
                        r.j.to_string(),
                        r.n_j.to_string(),
                        r.d_j.to_string(),
                        r.bound_j.to_string(),
                    ]
                }),
            );
            text.push('\n');
            text.push_str(&csv_string(
                &["j", "check", "lhs", "rhs", "pass"],
                cert.checks.iter().map(|c| {
                    [
                        c.j.to_string(),
                        c.name.to_string(),
                        c.lhs.to_string(),
                        c.rhs.to_string(),
                        c.pass.to_string(),
                    ]
                }),
            ));
            text.push('\n');
            text.push_str(&csv_string(
                &["z", "s", "b", "final_bound", "passed"],
                [[
                    cert.z.to_string(),
                    cert.s.to_string(),
                    cert.b.to_string(),
                    cert.final_bound.to_string(),
                    cert.passed().to_string(),
                ]],
            ));
            Ok(Outcome {
                ok: cert.passed(),
                text,
            })
        }
        kind => {
            let kind: BoundKind = kind.parse()?;
            let params = BoundParams {
                n: args.n,
                m: args.m,
                k: args.k,
                a: args.a,
            };
            let v = bound_eval(kind, &params)?;
            Ok(Outcome::ok(csv_string(
                &["kind", "n", "m", "k", "value"],
                [[
                    kind.to_string(),
                    args.n.to_string(),
                    args.m.to_string(),
                    args.k.to_string(),
                    v.to_string(),
                ]],
            )))
        }
    }
}

/// Point-plane transport for every scene point against every circle, and
/// lens-line membership plus injectivity for every lens.
fn verify_duality(scene: &Scene, exec: Exec) -> Outcome {
    let lifts: Vec<_> = scene.circles().iter().map(lift_circle).collect();
    let mut violations = 0;
    for p in scene.points() {
        let plane = dual_plane(p);
        for (c, lift) in scene.circles().iter().zip(&lifts) {
            let on = {
                let dx = &p.x - c.cx();
                let dy = &p.y - c.cy();
                &dx * &dx + &dy * &dy == *c.r2()
            };
            if on != plane.contains(lift) {
                violations += 1;
            }
        }
    }
    let lenses = enumerate_lenses_with(scene, exec);
    let lines = exec.map_slice(&lenses, lens_line_of);
    for (lens, line) in lenses.iter().zip(&lines) {
        match line {
            Ok(line) => {
                violations += (0..scene.len())
                    .filter(|&c| line.contains(&lifts[c]) != lens.contains_circle(c))
                    .count();
            }
            Err(_) => violations += 1,
        }
    }
    let mut canon: Vec<String> = lines.iter().flatten().map(ToString::to_string).collect();
    let total = canon.len();
    canon.sort();
    canon.dedup();
    violations += total - canon.len();
    Outcome {
        text: format!(
            "property duality\npairs {}\nlens_lines {}\nviolations {}\nstatus {}\n",
            scene.points().len() * scene.len(),
            lenses.len(),
            violations,
            if violations == 0 { "ok" } else { "fail" }
        ),
        ok: violations == 0,
    }
}

fn verify_order_reversal(scene: &Scene, exec: Exec) -> Outcome {
    let lenses = enumerate_lenses_with(scene, exec);
    let results = exec.map_slice(&lenses, |l| order_reversal_check(scene, l));
    let mut checked = 0;
    let mut inconclusive = 0;
    let mut failed = 0;
    // failures that still reverse cyclically with slopes straddling the pole
    let mut cyclic = 0;
    for r in &results {
        match r {
            Ok(r) if r.reversed => checked += 1,
            Ok(r) => {
                failed += 1;
                cyclic += (r.cyclically_reversed && r.straddles_pole) as usize;
            }
            Err(Error::Inconclusive(_)) => inconclusive += 1,
            Err(_) => failed += 1,
        }
    }
    Outcome {
        text: format!(
            "property order-reversal\nlenses {}\nreversed {checked}\ninconclusive {inconclusive}\nfailed {failed}\nfailed_cyclic_reversed {cyclic}\nstatus {}\n",
            lenses.len(),
            if failed == 0 { "ok" } else { "fail" }
        ),
        ok: failed == 0,
    }
}
