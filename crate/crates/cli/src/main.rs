//! Command-line front end: every engine behind machine-readable output.
//!
//! All subcommands print one JSON document to stdout (or a plain rendering
//! with `--format plain`). Exit codes: 0 on success, 1 when a computation
//! reports failures (a relation check with mismatches, an inconsistent
//! calibration), 2 on usage or input errors. Identical invocations produce
//! byte-identical output. `HILBGEN_THREADS` caps internal parallelism.

use std::fmt::Write as _;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hilbgen_core::curves;
use hilbgen_core::dmvv;
use hilbgen_core::fock;
use hilbgen_core::hilb;
use hilbgen_core::orbifold;
use hilbgen_core::partitions::DEFAULT_BRUTE_FORCE_BOUND;
use hilbgen_core::rat::Rat;
use hilbgen_core::surface::{self, SurfaceFixture};
use hilbgen_core::virasoro;
use hilbgen_core::walls;

#[derive(Parser)]
#[command(name = "hilbgen", version, about = "Exact generating-function engine for Hilbert schemes of points on surfaces", max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Plain,
}

#[derive(Args)]
struct SurfaceOpt {
    /// Surface preset (k3, p2, abelian) or path to a fixture JSON file.
    #[arg(long, default_value = "k3")]
    surface: String,
}

impl SurfaceOpt {
    fn load(&self) -> Result<SurfaceFixture, CliError> {
        if let Some(fx) = surface::preset(&self.surface) {
            return Ok(fx);
        }
        let text = std::fs::read_to_string(&self.surface)
            .map_err(|e| CliError::usage(format!("cannot read surface {}: {e}", self.surface)))?;
        surface::parse_surface_json(&text)
            .map_err(|e| CliError::usage(format!("bad surface file {}: {e}", self.surface)))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Betti numbers of the Hilbert schemes of points, per n up to the order.
    HilbBetti {
        #[command(flatten)]
        surface: SurfaceOpt,
        #[arg(long, default_value_t = 6)]
        order: usize,
    },
    /// Euler-number generating series of the Hilbert schemes.
    HilbEuler {
        #[command(flatten)]
        surface: SurfaceOpt,
        #[arg(long, default_value_t = 20)]
        order: usize,
    },
    /// Betti numbers of the symmetric powers.
    SymPoincare {
        #[command(flatten)]
        surface: SurfaceOpt,
        #[arg(long, default_value_t = 6)]
        order: usize,
    },
    /// Cross-check the product expansion against the partition
    /// stratification, coefficient for coefficient.
    StrataCheck {
        #[command(flatten)]
        surface: SurfaceOpt,
        #[arg(long, default_value_t = 8)]
        order: usize,
    },
    /// Expand the elliptic-genus triple product from a coefficient table
    /// (lines `m l c`).
    Dmvv {
        /// Path of the coefficient table.
        #[arg(long)]
        counts: String,
        /// p- and q-order of the expansion.
        #[arg(long, default_value_t = 4)]
        order: usize,
    },
    /// Verify the Heisenberg (and, on even models, Virasoro) commutation
    /// relations on the Fock space.
    FockCheck {
        #[command(flatten)]
        surface: SurfaceOpt,
        #[arg(long, default_value_t = 6)]
        weight_bound: u32,
        #[arg(long, default_value_t = 4)]
        level_bound: u32,
    },
    /// Orbifold Euler number of a symmetric product.
    OrbEuler {
        #[command(flatten)]
        surface: SurfaceOpt,
        #[arg(long, default_value_t = 4)]
        order: usize,
    },
    /// Age-graded orbifold dimensions of a symmetric product.
    OrbPoincare {
        #[command(flatten)]
        surface: SurfaceOpt,
        #[arg(long, default_value_t = 4)]
        order: usize,
    },
    /// Brute-force orbifold Euler number over commuting pairs.
    OrbBrute {
        #[command(flatten)]
        surface: SurfaceOpt,
        #[arg(long, default_value_t = 4)]
        order: u32,
    },
    /// Rational-curve counts on a K3 surface.
    Yz {
        #[arg(long, default_value_t = 20)]
        order: usize,
    },
    /// The quasimodular divisor-sum series.
    G2 {
        #[arg(long, default_value_t = 20)]
        order: usize,
    },
    /// Node-count generating function; formal in the four invariants unless
    /// all of them are given numerically.
    Nodegf {
        #[arg(long, default_value_t = 6)]
        order: usize,
        #[arg(long)]
        chi_l: Option<i64>,
        #[arg(long)]
        chi_o: Option<i64>,
        #[arg(long)]
        lk: Option<i64>,
        #[arg(long)]
        k2: Option<i64>,
        /// Known-counts file to calibrate the correction series first.
        #[arg(long)]
        counts: Option<String>,
    },
    /// Node polynomials in the four formal invariants.
    Nodepolys {
        #[arg(long, default_value_t = 4)]
        order: usize,
        #[arg(long)]
        counts: Option<String>,
    },
    /// Calibrate the two universal correction series from known counts
    /// (lines `chiL chiO LK K2 delta count`).
    Calibrate {
        #[arg(long)]
        counts: String,
        #[arg(long, default_value_t = 4)]
        order: usize,
    },
    /// Compare node counts at K3 invariants against the rational-curve
    /// series, genus by genus.
    K3Check {
        #[arg(long, default_value_t = 8)]
        order: usize,
    },
    /// Enumerate wall classes of a lattice inside a coordinate box.
    Walls {
        /// Path of the lattice JSON file ({"gram", "c1", "c2", "H"?, "L"?}).
        #[arg(long)]
        lattice: String,
        /// Coordinate box `lo,hi`.
        #[arg(long, default_value = "-4,4", value_parser = parse_box, allow_hyphen_values = true)]
        r#box: (i64, i64),
    },
}

fn parse_box(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s.split_once(',').ok_or("expected `lo,hi`")?;
    Ok((
        lo.trim().parse().map_err(|e| format!("bad lower bound: {e}"))?,
        hi.trim().parse().map_err(|e| format!("bad upper bound: {e}"))?,
    ))
}

struct CliError {
    message: String,
    code: u8,
}

impl CliError {
    fn usage(message: String) -> Self {
        CliError { message, code: 2 }
    }
}

/// A computed document plus whether the computation reported failures.
struct Outcome {
    value: Value,
    passed: bool,
}

impl Outcome {
    fn ok(value: Value) -> Self {
        Outcome { value, passed: true }
    }
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("HILBGEN_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(outcome) => {
            match cli.format {
                Format::Json => println!("{}", outcome.value),
                Format::Plain => println!("{}", render_plain(&outcome.value)),
            }
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn run(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::HilbBetti { surface, order } => {
            let fx = surface.load()?;
            let table = hilb::hilbert_poincare(&fx.topology, *order);
            Ok(Outcome::ok(json!({
                "surface": fx.topology.name,
                "order": order,
                "table": poincare_rows(&table),
            })))
        }
        Command::SymPoincare { surface, order } => {
            let fx = surface.load()?;
            let table = hilb::symmetric_power_poincare(&fx.topology, *order);
            Ok(Outcome::ok(json!({
                "surface": fx.topology.name,
                "order": order,
                "table": poincare_rows(&table),
            })))
        }
        Command::HilbEuler { surface, order } => {
            let fx = surface.load()?;
            let e = fx.topology.euler_number();
            let series = hilb::hilbert_euler_series(e, *order);
            Ok(Outcome::ok(json!({
                "surface": fx.topology.name,
                "e": e,
                "order": order,
                "coeffs": series_values(series.coeffs()),
            })))
        }
        Command::StrataCheck { surface, order } => {
            let fx = surface.load()?;
            let table = hilb::hilbert_poincare(&fx.topology, *order);
            let mut rows = Vec::new();
            let mut passed = true;
            for n in 0..=*order {
                let strata = hilb::hilbert_poincare_via_strata(&fx.topology, n);
                let matches = strata == *table.poly(n);
                passed &= matches;
                rows.push(json!({"n": n, "matches": matches}));
            }
            Ok(Outcome {
                value: json!({
                    "surface": fx.topology.name,
                    "order": order,
                    "rows": rows,
                    "all_match": passed,
                }),
                passed,
            })
        }
        Command::Dmvv { counts, order } => {
            let text = std::fs::read_to_string(counts)
                .map_err(|e| CliError::usage(format!("cannot read table {counts}: {e}")))?;
            let table = dmvv::DmvvTable::parse(&text, Some((*order * *order) as u32), None)
                .map_err(CliError::usage)?;
            let series = dmvv::dmvv_product(&table, *order, *order)
                .map_err(|e| CliError::usage(e.to_string()))?;
            let mut terms = Vec::new();
            for p in 0..=series.order() {
                for ((q, y), c) in series.coeff(p).terms() {
                    terms.push(json!([p, q, y, rat_value(c)]));
                }
            }
            Ok(Outcome::ok(json!({
                "p_order": order,
                "q_order": order,
                "terms": terms,
            })))
        }
        Command::FockCheck { surface, weight_bound, level_bound } => {
            let fx = surface.load()?;
            let validation = fx.frobenius.validate(Some(&fx.topology));
            if !validation.passed() {
                return Err(CliError::usage(format!(
                    "frobenius model invalid: {}",
                    validation.failures.join("; ")
                )));
            }
            let heis = fock::check_heisenberg_relations(&fx.frobenius, *weight_bound, *level_bound);
            let mut passed = heis.passed();
            let mut value = json!({
                "surface": fx.topology.name,
                "weight_bound": weight_bound,
                "level_bound": level_bound,
                "heisenberg": report_value(&heis),
            });
            if !fx.frobenius.has_odd_classes() {
                let vir = virasoro::check_virasoro_relations(
                    &fx.frobenius,
                    (*level_bound).min(3),
                    *weight_bound,
                    None,
                )
                .expect("even model");
                passed &= vir.passed();
                value["virasoro"] = report_value(&vir);
            } else {
                value["virasoro"] = Value::String(
                    "skipped: model has odd cohomology (sign conventions not fixed)".into(),
                );
            }
            Ok(Outcome { value, passed })
        }
        Command::OrbEuler { surface, order } => {
            let fx = surface.load()?;
            let datum = orbifold::symmetric_orbifold_datum(&fx.topology, *order as u32);
            let euler = orbifold::orbifold_euler(&datum);
            Ok(Outcome::ok(json!({
                "surface": fx.topology.name,
                "n": order,
                "orbifold_euler": rat_value(&euler),
            })))
        }
        Command::OrbPoincare { surface, order } => {
            let fx = surface.load()?;
            let datum = orbifold::symmetric_orbifold_datum(&fx.topology, *order as u32);
            let poly = orbifold::orbifold_poincare(&datum);
            let euler = orbifold::orbifold_euler(&datum);
            let graded: Vec<Value> = poly
                .dense_coeffs(4 * *order as i64)
                .expect("non-negative exponents")
                .iter()
                .map(rat_value)
                .collect();
            Ok(Outcome::ok(json!({
                "surface": fx.topology.name,
                "n": order,
                "orbifold_euler": rat_value(&euler),
                "graded": graded,
            })))
        }
        Command::OrbBrute { surface, order } => {
            let fx = surface.load()?;
            let e = fx.topology.euler_number();
            let value = orbifold::orbifold_euler_bruteforce(e, *order, DEFAULT_BRUTE_FORCE_BOUND)
                .map_err(|e| CliError::usage(e.to_string()))?;
            Ok(Outcome::ok(json!({
                "surface": fx.topology.name,
                "e": e,
                "n": order,
                "value": rat_value(&value),
                "integral": value.is_integer(),
            })))
        }
        Command::Yz { order } => {
            let series = curves::yau_zaslow(*order);
            Ok(Outcome::ok(json!({ "coeffs": series_values(series.coeffs()) })))
        }
        Command::G2 { order } => {
            let series = curves::g2_series(*order);
            Ok(Outcome::ok(json!({ "coeffs": series_values(series.coeffs()) })))
        }
        Command::Nodegf { order, chi_l, chi_o, lk, k2, counts } => {
            let b = load_b_pair(counts.as_deref(), *order)?;
            match (chi_l, chi_o, lk, k2) {
                (Some(x), Some(y), Some(z), Some(w)) => {
                    let inv = curves::Invariants { chi_l: *x, chi_o: *y, lk: *z, k2: *w };
                    let ngf = curves::node_generating_function(&inv, &b, *order)
                        .map_err(|e| CliError::usage(e.to_string()))?;
                    Ok(Outcome::ok(json!({
                        "invariants": inv,
                        "order": order,
                        "coeffs": series_values(ngf.coeffs()),
                    })))
                }
                (None, None, None, None) => {
                    let ngf = curves::node_generating_function_formal(&b, *order)
                        .map_err(|e| CliError::usage(e.to_string()))?;
                    let coeffs: Vec<Value> = ngf.coeffs().iter().map(poly_value).collect();
                    Ok(Outcome::ok(json!({
                        "invariants": "formal (x, y, z, w)",
                        "order": order,
                        "coeffs": coeffs,
                    })))
                }
                _ => Err(CliError::usage(
                    "give all of --chi-l --chi-o --lk --k2 for a numeric series, or none for the formal one".into(),
                )),
            }
        }
        Command::Nodepolys { order, counts } => {
            let b = load_b_pair(counts.as_deref(), *order + 1)?;
            let polys = curves::extract_node_polynomials(&b, *order)
                .map_err(|e| CliError::usage(e.to_string()))?;
            let rows: Vec<Value> = polys
                .iter()
                .map(|t| json!({"delta": t.delta, "poly": poly_value(&t.poly)}))
                .collect();
            Ok(Outcome::ok(json!({ "delta_max": order, "polynomials": rows })))
        }
        Command::Calibrate { counts, order } => {
            let text = std::fs::read_to_string(counts)
                .map_err(|e| CliError::usage(format!("cannot read counts {counts}: {e}")))?;
            let known = curves::KnownCount::parse_lines(&text).map_err(CliError::usage)?;
            match curves::calibrate_b(&known, *order) {
                Ok((pair, report)) => Ok(Outcome::ok(json!({
                    "b1": series_values(pair.b1.coeffs()),
                    "b2": series_values(pair.b2.coeffs()),
                    "known_order": pair.known_order,
                    "underdetermined": report.underdetermined,
                    "b1_integral": report.b1_integral,
                    "b2_integral": report.b2_integral,
                }))),
                Err(e) => Ok(Outcome {
                    value: json!({"error": e.to_string()}),
                    passed: false,
                }),
            }
        }
        Command::K3Check { order } => {
            let report = curves::k3_consistency(*order)
                .map_err(|e| CliError::usage(e.to_string()))?;
            let passed = report.passed();
            Ok(Outcome {
                value: serde_json::to_value(&report).expect("serializable"),
                passed,
            })
        }
        Command::Walls { lattice, r#box } => {
            let text = std::fs::read_to_string(lattice)
                .map_err(|e| CliError::usage(format!("cannot read lattice {lattice}: {e}")))?;
            let input: walls::WallsInput = serde_json::from_str(&text)
                .map_err(|e| CliError::usage(format!("bad lattice file: {e}")))?;
            let lat = walls::Lattice::new(input.gram.clone())
                .map_err(|e| CliError::usage(e.to_string()))?;
            let (lo, hi) = *r#box;
            let classes = walls::enumerate_wall_classes(&lat, &input.c1, input.c2, lo, hi)
                .map_err(|e| CliError::usage(e.to_string()))?;
            let rows: Vec<Value> = classes
                .iter()
                .map(|xi| {
                    let norm = Rat::from_bigint(lat.norm(xi).expect("checked dims"));
                    let mut row = json!({
                        "xi": xi,
                        "xi2": rat_value(&norm),
                    });
                    if let (Some(h), Some(l)) = (&input.h, &input.l) {
                        row["separates"] = Value::Bool(
                            walls::separates(&lat, xi, h, l).expect("checked dims"),
                        );
                    }
                    row
                })
                .collect();
            Ok(Outcome::ok(json!({
                "c1": input.c1,
                "c2": input.c2,
                "box": [lo, hi],
                "walls": rows,
            })))
        }
    }
}

fn load_b_pair(counts: Option<&str>, order: usize) -> Result<curves::BSeriesPair, CliError> {
    match counts {
        None => Ok(curves::BSeriesPair::trivial(order)),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::usage(format!("cannot read counts {path}: {e}")))?;
            let known = curves::KnownCount::parse_lines(&text).map_err(CliError::usage)?;
            let delta_max = known.iter().map(|k| k.delta).max().unwrap_or(0).max(1);
            let (pair, _) = curves::calibrate_b(&known, delta_max)
                .map_err(|e| CliError::usage(e.to_string()))?;
            Ok(pair)
        }
    }
}

/// Rationals as JSON: integers become (arbitrary-precision) numbers,
/// everything else a `num/den` string.
fn rat_value(r: &Rat) -> Value {
    if r.is_integer() {
        if let Ok(n) = serde_json::Number::from_str(&r.numer().to_string()) {
            return Value::Number(n);
        }
    }
    Value::String(r.to_fraction_string())
}

fn series_values(coeffs: &[Rat]) -> Vec<Value> {
    coeffs.iter().map(rat_value).collect()
}

fn poly_value(p: &hilbgen_core::InvariantPoly) -> Value {
    let terms: Vec<Value> = p
        .terms()
        .map(|(exps, c)| json!({"exps": exps.to_vec(), "coeff": rat_value(c)}))
        .collect();
    json!(terms)
}

fn poincare_rows(table: &hilb::PoincareTable) -> Vec<Value> {
    (0..=table.order())
        .map(|n| {
            json!({
                "n": n,
                "poincare": table.betti_row(n).iter().map(rat_value).collect::<Vec<_>>(),
            })
        })
        .collect()
}

fn report_value(report: &hilbgen_core::CheckReport) -> Value {
    serde_json::to_value(report).expect("serializable")
}

/// Minimal human rendering: one line per top-level field, nested JSON kept
/// inline.
fn render_plain(value: &Value) -> String {
    let mut out = String::new();
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let _ = writeln!(out, "{k}: {v}");
            }
        }
        other => {
            let _ = writeln!(out, "{other}");
        }
    }
    out.trim_end().to_string()
}
