use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use k3lat_core::clifford_ks::{kuga_satake_report, QuaternionAlgebra};
use k3lat_core::disc_form::{discriminant_form, isometry_orbits, nikulin_invariants, orbit_sizes, FiniteQuadraticForm};
use k3lat_core::elliptic_fib::{builtin_scenarios, ns_discriminant, verify};
use k3lat_core::gaussian::{format_gaussian, GaussianMatrix};
use k3lat_core::group_iso::{m_of_y, phi};
use k3lat_core::lattice::{lattice_from_json, lattice_to_json, parse_sum};
use k3lat_core::report::Report;
use k3lat_core::selftest::{seed_from_env, selftest};
use k3lat_core::symbolic::verify_d1;
use k3lat_core::wall_orbits::{canonical_rep, classify_y, delta_of_t, orbit_table, vector_type, TVector, YVector};
use k3lat_core::{Error, IntLattice};

#[derive(Parser)]
#[command(name = "k3lat", version, about = "Exact lattice computations for double planes branched along six lines")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integer lattices given by a sum like `U+D6^2+A1^2` or a JSON file.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Discriminant forms.
    #[command(subcommand)]
    Disc(DiscCmd),
    /// Vectors of T = U+U+<-1>+<-1> and the special-divisor table.
    #[command(subcommand)]
    Orbit(OrbitCmd),
    /// Registered elliptic fibration scenarios.
    #[command(subcommand)]
    Scenario(ScenarioCmd),
    /// Image of a 4x4 Gaussian matrix in SO(T).
    Phi {
        /// JSON file holding the matrix, entries `[re_num, re_den, im_num, im_den]`.
        #[arg(long)]
        matrix: PathBuf,
    },
    /// The skew matrix M(y) and its Pfaffian.
    Pfaffian {
        /// Six comma-separated integers.
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
    /// Kuga-Satake algebra data for the transcendental lattice with invariant delta.
    Ks {
        #[arg(long)]
        delta: u64,
    },
    /// Ramification of the quaternion algebra (a, b) over Q.
    Quat {
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long, allow_hyphen_values = true)]
        b: i64,
    },
    /// Polynomial identity checks.
    #[command(subcommand)]
    Symbolic(SymbolicCmd),
    /// Every acceptance check and every scenario.
    Selftest,
}

#[derive(Args)]
struct LatticeInput {
    /// Sum of standard lattices, e.g. `U(2)^2+A1^2`.
    spec: Option<String>,
    /// Lattice JSON file `{"label": ..., "gram": [[...]]}`.
    #[arg(long, conflicts_with = "spec")]
    file: Option<PathBuf>,
}

impl LatticeInput {
    fn load(&self) -> Result<IntLattice, CliError> {
        match (&self.spec, &self.file) {
            (Some(spec), None) => Ok(parse_sum(spec)?),
            (None, Some(path)) => Ok(lattice_from_json(&read(path)?)?),
            _ => Err(Error::input("give a lattice sum or --file").into()),
        }
    }
}

#[derive(Subcommand)]
enum LatticeCmd {
    /// Rank, signature, determinant, parity and scale.
    Info(LatticeInput),
    /// Orthogonal sum of several lattices, printed as JSON.
    Sum {
        #[arg(required = true)]
        specs: Vec<String>,
    },
    /// The lattice with its form multiplied by a factor, printed as JSON.
    Scale {
        #[command(flatten)]
        input: LatticeInput,
        #[arg(long, allow_hyphen_values = true)]
        by: i64,
    },
}

#[derive(Subcommand)]
enum DiscCmd {
    /// Group structure, form values on generators and Nikulin invariants.
    Form(LatticeInput),
    /// Orbits of the isometry group of the discriminant form.
    Orbits(LatticeInput),
}

#[derive(Subcommand)]
enum OrbitCmd {
    /// Norm, type, canonical representative and delta of a vector of T,
    /// or the classification of a y-vector with --y.
    Classify {
        /// Six comma-separated coordinates.
        #[arg(allow_hyphen_values = true)]
        vector: String,
        /// Interpret the coordinates as a y-vector.
        #[arg(long)]
        y: bool,
    },
    /// n(delta) for 1 <= delta <= delta-max.
    Table {
        #[arg(long, default_value_t = 16)]
        delta_max: i64,
    },
}

#[derive(Subcommand)]
enum ScenarioCmd {
    List,
    Verify { name: String },
}

#[derive(Subcommand)]
enum SymbolicCmd {
    #[command(name = "verify-d1")]
    VerifyD1,
}

#[derive(Debug)]
enum CliError {
    Core(Error),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) | CliError::Core(Error::InvalidInput(_)) => 2,
            CliError::Core(Error::Precondition(_) | Error::NotRepresented(_)) => 3,
            CliError::Core(Error::Internal(_)) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(msg) => write!(f, "{msg}"),
        }
    }
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))
}

fn six(text: &str) -> Result<[i64; 6], CliError> {
    let parts: Vec<i64> = text
        .split(',')
        .map(|s| s.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|e| Error::input(format!("bad integer in `{text}`: {e}")))?;
    parts.try_into().map_err(|v: Vec<i64>| Error::input(format!("expected 6 coordinates, got {}", v.len())).into())
}

/// What a subcommand produced: a JSON payload with its text rendering, or a report.
enum Output {
    Data { json: Value, text: String },
    Report(Report),
}

fn lattice_json(l: &IntLattice) -> Value {
    serde_json::from_str(&lattice_to_json(l)).expect("lattice JSON parses back")
}

fn lattice_info(l: &IntLattice) -> Output {
    let sig = l.signature();
    let (scale, norm_gcd) = l.scale_and_norm();
    let json = json!({
        "label": l.label(),
        "rank": l.rank(),
        "signature": [sig.pos, sig.neg],
        "determinant": l.determinant().to_string(),
        "even": l.is_even(),
        "scale": scale,
        "norm_gcd": norm_gcd,
    });
    let text = format!(
        "{}\nrank {}\nsignature {sig}\ndeterminant {}\n{}\nscale {scale}, norm gcd {norm_gcd}",
        l.label(),
        l.rank(),
        l.determinant(),
        if l.is_even() { "even" } else { "odd" }
    );
    Output::Data { json, text }
}

fn element_string(x: &[i64]) -> String {
    let parts: Vec<String> = x.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

fn disc_form_output(l: &IntLattice, form: &FiniteQuadraticForm) -> Output {
    let b: Vec<Vec<String>> = form.b_matrix().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
    let q: Vec<String> = form.q_generators().iter().map(ToString::to_string).collect();
    let nikulin = nikulin_invariants(l).ok();
    let json = json!({
        "lattice": l.label(),
        "orders": form.orders(),
        "order": form.order(),
        "b": b,
        "q": q,
        "nikulin": nikulin.map(|n| json!({
            "signature": [n.signature.pos, n.signature.neg],
            "length": n.length,
            "integer_valued": n.integer_valued,
        })),
    });
    let mut text = format!("discriminant group of {}: orders {:?} (order {})\n", l.label(), form.orders(), form.order());
    text.push_str(&format!("q on generators: {}\n", q.join(", ")));
    for row in &b {
        text.push_str(&format!("  [{}]\n", row.join(", ")));
    }
    match nikulin {
        Some(n) => text.push_str(&format!(
            "2-elementary: signature {}, length {}, {}",
            n.signature,
            n.length,
            if n.integer_valued { "q integer-valued" } else { "q not integer-valued" }
        )),
        None => text.push_str("not 2-elementary"),
    }
    Output::Data { json, text }
}

fn t_vector_output(x: TVector) -> Result<Output, CliError> {
    let ty = vector_type(&x)?;
    let rep = if x.norm() < 0 { Some(canonical_rep(x.norm(), ty)?) } else { None };
    let json = json!({
        "vector": x.0,
        "norm": x.norm(),
        "primitive": x.is_primitive(),
        "type": ty.to_string(),
        "delta": delta_of_t(&x).to_string(),
        "canonical_rep": rep.map(|r| r.0),
    });
    let text = format!(
        "{x}: norm {}, {ty}, delta {}{}",
        x.norm(),
        delta_of_t(&x),
        rep.map(|r| format!(", canonical representative {r}")).unwrap_or_default()
    );
    Ok(Output::Data { json, text })
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Lattice(LatticeCmd::Info(input)) => Ok(lattice_info(&input.load()?)),
        Command::Lattice(LatticeCmd::Sum { specs }) => {
            let parts = specs.iter().map(|s| parse_sum(s)).collect::<Result<Vec<_>, _>>()?;
            let sum = IntLattice::sum_of(&parts).with_label(specs.join("+"));
            Ok(Output::Data { json: lattice_json(&sum), text: lattice_to_json(&sum) })
        }
        Command::Lattice(LatticeCmd::Scale { input, by }) => {
            let scaled = input.load()?.rescale(*by)?;
            Ok(Output::Data { json: lattice_json(&scaled), text: lattice_to_json(&scaled) })
        }
        Command::Disc(DiscCmd::Form(input)) => {
            let l = input.load()?;
            let form = discriminant_form(&l)?;
            Ok(disc_form_output(&l, &form))
        }
        Command::Disc(DiscCmd::Orbits(input)) => {
            let l = input.load()?;
            let orbits = isometry_orbits(&discriminant_form(&l)?)?;
            let sizes = orbit_sizes(&orbits);
            let json = json!({
                "lattice": l.label(),
                "sizes": sizes,
                "orbits": orbits,
            });
            let mut text = format!("{} orbits of sizes {sizes:?}\n", orbits.len());
            for o in &orbits {
                text.push_str(&format!("  {:>3}: {}\n", o.len(), element_string(&o[0])));
            }
            Ok(Output::Data { json, text: text.trim_end().to_string() })
        }
        Command::Orbit(OrbitCmd::Classify { vector, y: false }) => t_vector_output(TVector(six(vector)?)),
        Command::Orbit(OrbitCmd::Classify { vector, y: true }) => {
            let y = YVector(six(vector)?);
            let c = classify_y(&y)?;
            let json = serde_json::to_value(c).expect("classification serializes");
            let text = format!(
                "{y}: delta {}, {:?}, primitive {}, representative {}",
                c.delta, c.case, c.primitive, c.representative
            );
            Ok(Output::Data { json, text })
        }
        Command::Orbit(OrbitCmd::Table { delta_max }) => {
            if *delta_max < 1 {
                return Err(Error::input("--delta-max must be positive").into());
            }
            let rows = orbit_table(*delta_max);
            let json = serde_json::to_value(&rows).expect("rows serialize");
            let text = rows
                .iter()
                .map(|r| match r.n_delta {
                    Some(n) => format!("{:>4} {n:>3}", r.delta),
                    None => format!("{:>4}   -", r.delta),
                })
                .collect::<Vec<_>>()
                .join("\n");
            Ok(Output::Data { json, text: format!("delta n\n{text}") })
        }
        Command::Scenario(ScenarioCmd::List) => {
            let all = builtin_scenarios();
            let json = Value::Array(
                all.iter().map(|s| json!({"name": s.name, "description": s.description, "ns": s.expected_ns, "t": s.expected_t})).collect(),
            );
            let text = all.iter().map(|s| format!("{:<18} {}", s.name, s.description)).collect::<Vec<_>>().join("\n");
            Ok(Output::Data { json, text })
        }
        Command::Scenario(ScenarioCmd::Verify { name }) => {
            let s = k3lat_core::elliptic_fib::scenario(name)?;
            let disc = ns_discriminant(&s.config)?;
            Ok(Output::Report(verify(&s).with_data(json!({ "ns_discriminant": disc.to_string() }))))
        }
        Command::Phi { matrix } => {
            let a = GaussianMatrix::from_json(&read(matrix)?)?;
            let image = phi(&a)?;
            let rows = image.rows();
            let text = rows.iter().map(|r| element_string(r)).collect::<Vec<_>>().join("\n");
            Ok(Output::Data { json: json!({ "phi": rows, "determinant": image.determinant().to_string() }), text })
        }
        Command::Pfaffian { y } => {
            let y = YVector(six(y)?);
            let m = m_of_y(&y);
            let entries: Vec<Vec<String>> = m.matrix().rows().iter().map(|r| r.iter().map(format_gaussian).collect()).collect();
            let pf = format_gaussian(&m.pfaffian());
            let text = entries.iter().map(|r| format!("[{}]", r.join(", "))).collect::<Vec<_>>().join("\n");
            Ok(Output::Data { json: json!({ "y": y.0, "matrix": entries, "pfaffian": pf }), text: format!("{text}\nPf = {pf}") })
        }
        Command::Ks { delta } => {
            let r = kuga_satake_report(*delta)?;
            let text = format!(
                "delta {}\neven Clifford algebra: {}\nBrauer class: {}\nsplit: {}\nKuga-Satake dimension {}\n{}",
                r.delta, r.clifford_even, r.brauer_class, r.is_split, r.ks_dimension, r.decomposition
            );
            Ok(Output::Data { json: serde_json::to_value(&r).expect("report serializes"), text })
        }
        Command::Quat { a, b } => {
            let alg = QuaternionAlgebra::from_ints(*a, *b)?;
            let ram = alg.ramification()?;
            let places: Vec<String> = ram.places().iter().map(ToString::to_string).collect();
            let text = format!("{alg}: ramified at {ram}, {}", if ram.is_split() { "split" } else { "division algebra" });
            Ok(Output::Data { json: json!({ "a": a, "b": b, "ramified": places, "split": ram.is_split() }), text })
        }
        Command::Symbolic(SymbolicCmd::VerifyD1) => Ok(Output::Report(verify_d1()?)),
        Command::Selftest => Ok(Output::Report(selftest(seed_from_env()))),
    }
}

/// Writes to stdout, ignoring a closed pipe (`k3lat ... | head`).
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|()| out.flush());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Output::Data { json, text }) => {
            if cli.json {
                emit(&format!("{}\n", serde_json::to_string_pretty(&json).expect("value serializes")));
            } else {
                emit(&format!("{text}\n"));
            }
            ExitCode::SUCCESS
        }
        Ok(Output::Report(report)) => {
            if cli.json {
                emit(&format!("{}\n", report.to_json()));
            } else {
                emit(&report.to_text());
            }
            if report.all_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
