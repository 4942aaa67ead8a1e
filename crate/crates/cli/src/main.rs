//! `localroots`: k-th roots of matrices over local and global fields.
//!
//! Exit status 0 on success, 1 on malformed input or other errors, and 2
//! when the answer is "undecided" or needs more precision than was given.

mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};
use localroots::arith::first_primes;
use localroots::cartan::{density_report, GroupSpecJson};
use localroots::gf::FiniteField;
use localroots::global::{finite_order_coprimality, global_unipotent_power, Coprimality};
use localroots::lab::{
    cyclic_tower, eigenvalue_congruence_check, has_kth_root, is_distal, is_unipotent,
    roots_all_orders, torsion_exponent_bound, unipotent_power_bound, unipotent_power_exponent,
    unipotent_tower, verify_tower, CyclicClosure, Order, RootStatus,
};
use localroots::laurent::LaurentProfile;
use localroots::local::{FieldDescriptor, LocalMatrix, DEFAULT_PRECISION};
use localroots::padic::FieldProfile;
use localroots::Error;
use num_bigint::BigUint;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "localroots", version, about = "Roots of matrices over Q, Q_p and F_q((t))")]
struct Cli {
    /// Print the report as JSON
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Distality, unipotency, exponents and roots of all orders
    Analyze {
        /// View a rational matrix inside Q_P
        #[arg(long)]
        prime: Option<u64>,
        /// Working precision in digits
        #[arg(long)]
        precision: Option<u32>,
        file: PathBuf,
    },
    /// Decide whether Y^k = M has a solution
    Root {
        #[arg(long)]
        k: u64,
        file: PathBuf,
    },
    /// Build and verify a chain of successive q-th roots
    Tower {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        depth: usize,
        file: PathBuf,
    },
    /// Power-map density for a disconnected circle group
    Density {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        k: u64,
    },
    /// Per-prime exponents of a rational matrix
    Global {
        /// Comma-separated primes, or first:N
        #[arg(long)]
        primes: String,
        file: PathBuf,
    },
    /// Closed-form exponent bounds
    #[command(group(ArgGroup::new("field").required(true).args(["prime", "laurent"])))]
    Bound {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        prime: Option<u64>,
        /// Order of the residue field of F_q((t))
        #[arg(long)]
        laurent: Option<u64>,
    },
}

enum Failure {
    Lib(Error),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

struct Outcome {
    report: Value,
    undecided: bool,
}

impl Outcome {
    fn decided(report: Value) -> Self {
        Outcome { report, undecided: false }
    }
}

fn read_matrix(path: &Path, precision: Option<u32>) -> Result<LocalMatrix, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    Ok(LocalMatrix::from_json_str(&text, precision)?)
}

/// `Ok(None)` for an answer that needs more precision; other errors pass.
fn tolerate<T>(r: localroots::Result<T>, undecided: &mut bool) -> Result<Option<T>, Failure> {
    match r {
        Ok(x) => Ok(Some(x)),
        Err(Error::InsufficientPrecision(_)) => {
            *undecided = true;
            Ok(None)
        }
        Err(e) => Err(e.into()),
    }
}

fn or_undecided(v: Option<Value>) -> Value {
    v.unwrap_or_else(|| Value::from("undecided"))
}

fn analyze(file: &Path, prime: Option<u64>, precision: Option<u32>) -> Result<Outcome, Failure> {
    let mut m = read_matrix(file, precision)?;
    if let Some(p) = prime {
        m = match m.field() {
            FieldDescriptor::Rational => {
                let prof = FieldProfile::new(p, precision.unwrap_or(DEFAULT_PRECISION))?;
                m.with_field(FieldDescriptor::Padic(prof))?
            }
            f if f.residue_prime() == Some(p) => m,
            f => {
                return Err(Failure::Input(format!(
                    "--prime {p} does not match a matrix over {}",
                    f.describe()
                )))
            }
        };
    }
    let mut undecided = false;
    let local = m.field().residue_prime().is_some();
    let distal = if local {
        or_undecided(tolerate(is_distal(&m), &mut undecided)?.map(Value::from))
    } else {
        Value::Null
    };
    let newton = if local {
        or_undecided(
            tolerate(m.newton_polygon(), &mut undecided)?
                .map(|np| serde_json::to_value(np.to_json()).expect("segments serialize")),
        )
    } else {
        Value::Null
    };
    let unipotent = or_undecided(tolerate(is_unipotent(&m), &mut undecided)?.map(Value::from));
    let exponent = or_undecided(
        tolerate(unipotent_power_exponent(&m), &mut undecided)?
            .map(|r| r.map_or(Value::Null, |r| Value::String(r.to_string()))),
    );
    let order = or_undecided(tolerate(CyclicClosure::of(&m), &mut undecided)?.map(|h| report::order(&h.order)));
    let (all, cert) = match tolerate(roots_all_orders(&m), &mut undecided)? {
        Some(v) => report::all_orders(&v),
        None => (Value::from("undecided"), Value::Null),
    };
    let verdict = json!({
        "distal": distal,
        "newton_polygon": newton,
        "unipotent": unipotent,
        "unipotent_power_exponent": exponent,
        "order": order,
        "roots_all_orders": all,
    });
    let mut r = report::envelope("analyze", verdict, cert, report::precision(m.field()));
    r["input"] = report::matrix(&m);
    Ok(Outcome { report: r, undecided })
}

fn root(file: &Path, k: u64) -> Result<Outcome, Failure> {
    let m = read_matrix(file, None)?;
    let v = has_kth_root(&m, k)?;
    let status = serde_json::to_value(v.status).expect("status serializes");
    let mut r = report::envelope("root", status, report::root(&v), report::precision(m.field()));
    r["k"] = Value::from(k);
    r["input"] = report::matrix(&m);
    Ok(Outcome {
        report: r,
        undecided: v.status == RootStatus::Undecided,
    })
}

fn tower(file: &Path, q: u64, depth: usize) -> Result<Outcome, Failure> {
    if q < 2 {
        return Err(Failure::Input("--q must be at least 2".into()));
    }
    let m = read_matrix(file, None)?;
    let prec = report::precision(m.field());
    let finish = |verdict: &str, cert: Value, undecided: bool| {
        let mut r = report::envelope("tower", Value::from(verdict), cert, prec.clone());
        r["input"] = report::matrix(&m);
        Outcome { report: r, undecided }
    };
    let char_zero = m.field().characteristic() == 0;
    if char_zero && is_unipotent(&m)? {
        let t = unipotent_tower(&m, q, depth)?;
        let mut cert = report::tower(&t, verify_tower(&t));
        if matches!(m.field(), FieldDescriptor::Padic(_)) {
            let checks = (1..=depth as u32)
                .map(|k| eigenvalue_congruence_check(&m, &BigUint::from(1u32), k))
                .collect::<localroots::Result<Vec<bool>>>()?;
            cert["congruence"] = Value::from(checks);
        }
        return Ok(finish("yes", cert, false));
    }
    if !matches!(m.field(), FieldDescriptor::Padic(_)) {
        let h = CyclicClosure::of(&m)?;
        if let Order::Finite(d) = &h.order {
            if let Some(t) = cyclic_tower(&h, q, depth)? {
                let mut cert = report::tower(&t, verify_tower(&t));
                cert["order"] = Value::String(d.to_string());
                return Ok(finish("yes", cert, false));
            }
            let mut cert = json!({"order": d.to_string(), "reason": format!("{q} divides the order")});
            if localroots::arith::is_prime(q) {
                if let Coprimality::Violated { no_root_depth, .. } = finite_order_coprimality(&m, q, depth)? {
                    cert["no_root_depth"] = Value::from(no_root_depth);
                    if depth as u32 >= no_root_depth {
                        return Ok(finish("no", cert, false));
                    }
                }
            }
            cert["reason"] = Value::from(format!("{q} divides the order; no root inside the cyclic group"));
            return Ok(finish("undecided", cert, true));
        }
    }
    // Otherwise a tower of depth D fails as soon as some q^j has no root.
    let mut qj = BigUint::from(1u32);
    for j in 1..=depth as u32 {
        qj *= q;
        let Ok(k) = u64::try_from(&qj) else { break };
        let v = has_kth_root(&m, k)?;
        if v.status == RootStatus::No {
            let cert = json!({"failing_level": j, "reason": v.reason});
            return Ok(finish("no", cert, false));
        }
    }
    Ok(finish("undecided", json!({"reason": "outside decision scope"}), true))
}

fn density(spec: &Path, k: u64) -> Result<Outcome, Failure> {
    let text = std::fs::read_to_string(spec)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", spec.display())))?;
    let parsed: GroupSpecJson =
        serde_json::from_str(&text).map_err(|e| Failure::Input(format!("bad group spec: {e}")))?;
    let d = density_report(&parsed.resolve()?, k)?;
    let verdict = json!({"dense": d.dense});
    let cert = serde_json::to_value(&d).expect("density reports serialize");
    Ok(Outcome::decided(report::envelope("density", verdict, cert, Value::Null)))
}

fn parse_primes(list: &str) -> Result<Vec<u64>, Failure> {
    let bad = || Failure::Input(format!("--primes expects \"2,3,5\" or \"first:N\", got {list:?}"));
    if let Some(n) = list.strip_prefix("first:") {
        let n: usize = n.trim().parse().map_err(|_| bad())?;
        if n == 0 {
            return Err(bad());
        }
        return Ok(first_primes(n));
    }
    let primes = list
        .split(',')
        .map(|s| s.trim().parse::<u64>().map_err(|_| bad()))
        .collect::<Result<Vec<_>, _>>()?;
    for &p in &primes {
        localroots::arith::checked_prime(p)?;
    }
    Ok(primes)
}

fn global(file: &Path, primes: &str) -> Result<Outcome, Failure> {
    let primes = parse_primes(primes)?;
    let m = read_matrix(file, None)?;
    let g = global_unipotent_power(&m, &primes)?;
    let (all, all_cert) = report::all_orders(&g.roots_all_orders);
    let verdict = json!({
        "is_unipotent": g.is_unipotent,
        "exponent": g.exponent.as_ref().map(|e| e.to_string()),
        "order": report::order(&g.order),
        "roots_all_orders": all,
    });
    let per_prime: Vec<Value> = g
        .per_prime
        .iter()
        .map(|e| {
            json!({
                "prime": e.prime,
                "distal": e.is_distal,
                "unipotent_power_exponent": e.unipotent_power_exponent.as_ref().map(|r| r.to_string()),
            })
        })
        .collect();
    let cert = json!({"per_prime": per_prime, "roots_all_orders": all_cert});
    let mut r = report::envelope("global", verdict, cert, Value::from(DEFAULT_PRECISION));
    r["input"] = report::matrix(&m);
    Ok(Outcome::decided(r))
}

fn bound(n: usize, prime: Option<u64>, laurent: Option<u64>) -> Result<Outcome, Failure> {
    let field = match (prime, laurent) {
        (Some(p), None) => FieldDescriptor::Padic(FieldProfile::new(p, DEFAULT_PRECISION)?),
        (None, Some(q)) => FieldDescriptor::Laurent(LaurentProfile::new(FiniteField::of_order(q)?, DEFAULT_PRECISION)?),
        _ => unreachable!("clap enforces exactly one of --prime and --laurent"),
    };
    let b = unipotent_power_bound(n, &field)?;
    let t = torsion_exponent_bound(n, &field)?;
    let factorization: Vec<String> = b
        .factored
        .primes()
        .map(|(p, e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") })
        .collect();
    let verdict = json!({
        "unipotent_power_bound": b.value().to_string(),
        "torsion_exponent_bound": t.value().to_string(),
    });
    let cert = json!({
        "field": field.describe(),
        "n": n,
        "factorization": factorization.join(" * "),
        "profiles": serde_json::to_value(&b.profiles).expect("profiles serialize"),
    });
    Ok(Outcome::decided(report::envelope("bound", verdict, cert, Value::Null)))
}

fn op_name(c: &Command) -> &'static str {
    match c {
        Command::Analyze { .. } => "analyze",
        Command::Root { .. } => "root",
        Command::Tower { .. } => "tower",
        Command::Density { .. } => "density",
        Command::Global { .. } => "global",
        Command::Bound { .. } => "bound",
    }
}

fn run(c: &Command) -> Result<Outcome, Failure> {
    match c {
        Command::Analyze { prime, precision, file } => analyze(file, *prime, *precision),
        Command::Root { k, file } => root(file, *k),
        Command::Tower { q, depth, file } => tower(file, *q, *depth),
        Command::Density { spec, k } => density(spec, *k),
        Command::Global { primes, file } => global(file, primes),
        Command::Bound { n, prime, laurent } => bound(*n, *prime, *laurent),
    }
}

fn emit(report: &Value, as_json: bool) {
    if as_json {
        println!("{}", serde_json::to_string_pretty(report).expect("reports serialize"));
    } else {
        print!("{}", report::render_text(report));
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli.command) {
        Ok(out) => {
            emit(&out.report, cli.json);
            ExitCode::from(if out.undecided { 2 } else { 0 })
        }
        Err(Failure::Lib(Error::InsufficientPrecision(msg))) => {
            let cert = json!({"reason": format!("insufficient precision: {msg}")});
            emit(&report::envelope(op_name(&cli.command), Value::from("undecided"), cert, Value::Null), cli.json);
            ExitCode::from(2)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
