//! Command-line front end: every library operation behind a subcommand with
//! text, JSON, and CSV output. JSON objects are emitted with sorted keys and
//! a fixed decimal policy so that byte-identical round trips hold; big
//! integers are rendered as decimal strings.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use pellfrac::{
    aac_check, attached_intervals, classify, cross_check_parameterizations, expand_omega,
    fundamental_unit, integer_in_interval, least_type_density, pell4_solutions,
    predecessor_density, progressions_for_key, reduced_family, unit_size_stats,
    zeta_partial_diagnostic, Error, Ring, Side,
};

/// Environment variable holding the default worker count for surveys.
pub const JOBS_ENV: &str = "PELLFRAC_JOBS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "pellfrac",
    about = "Exact continued fractions, Pell equations, inverse problems, and density surveys",
    version
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Write the report to a file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Periodic expansion of omega_d.
    Expand {
        d: u64,
        /// 0 for sqrt(d), 1 for (1+sqrt(d))/2; default follows d mod 4.
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
        ring: Option<u8>,
    },
    /// Fundamental unit of Z[omega_d].
    Unit {
        d: u64,
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
        ring: Option<u8>,
    },
    /// Solutions of X^2 - D Y^2 = 4.
    Pell {
        d: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
        ring: Option<u8>,
    },
    /// Quadratic progressions of d for a key (y, x).
    Inverse {
        #[arg(long)]
        y: BigInt,
        #[arg(long)]
        x: BigInt,
        #[arg(long, default_value_t = 3)]
        count: usize,
    },
    /// Attached intervals of p/q and their integer hits.
    Interval {
        #[arg(long)]
        p: BigInt,
        #[arg(long)]
        q: BigInt,
        #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=1))]
        ring: u8,
    },
    /// Position of d inside its reduced family.
    Classify {
        d: u64,
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
        ring: Option<u8>,
    },
    /// Density surveys over 1..=limit.
    Survey {
        #[arg(long)]
        limit: u64,
        /// Least-type density report (the default mode).
        #[arg(long, conflicts_with_all = ["predecessor", "zeta"])]
        density: bool,
        /// Predecessor density for a comma-separated prefix a1,a2,...
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        predecessor: Option<Vec<u64>>,
        /// Partial-sum diagnostic at exponent s > 1.
        #[arg(long)]
        zeta: Option<f64>,
        #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=1))]
        ring: u8,
        /// Worker count; 0 reads PELLFRAC_JOBS and defaults to 1.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Residue u mod p for epsilon_p = (t + u sqrt(p))/2, p prime = 1 mod 4.
    Aac { p: u64 },
    /// Set equality of the congruence progressions and the polynomial family.
    Crosscheck {
        #[arg(long)]
        y: BigInt,
        #[arg(long)]
        x: BigInt,
        #[arg(long)]
        bound: BigInt,
    },
}

fn ring_for(d: u64, flag: Option<u8>) -> Ring {
    match flag {
        None if d % 4 == 1 => Ring::Half,
        None => Ring::Sqrt,
        Some(i) => Ring::from_index(i).expect("clap restricts the range"),
    }
}

fn omega_name(d: u64, ring: Ring) -> String {
    match ring {
        Ring::Sqrt => format!("sqrt({d})"),
        Ring::Half => format!("(1+sqrt({d}))/2"),
    }
}

/// 12 significant digits, fixed policy for every reported decimal.
fn decimal12(x: f64) -> String {
    format!("{x:.11e}")
}

fn big(v: &BigInt) -> Value {
    Value::String(v.to_string())
}

/// One report in all three formats.
struct Report {
    text: String,
    json: Value,
    /// (header, rows)
    csv: (String, Vec<String>),
}

fn run_command(cmd: &Command) -> Result<Report, Error> {
    match cmd {
        Command::Expand { d, ring } => expand_report(*d, ring_for(*d, *ring)),
        Command::Unit { d, ring } => unit_report(*d, ring_for(*d, *ring)),
        Command::Pell { d, count, ring } => pell_report(*d, ring_for(*d, *ring), *count),
        Command::Inverse { y, x, count } => inverse_report(y, x, *count),
        Command::Interval { p, q, ring } => {
            let ring = Ring::from_index(*ring).expect("clap restricts the range");
            interval_report(p, q, ring)
        }
        Command::Classify { d, ring } => classify_report(*d, ring_for(*d, *ring)),
        Command::Survey { limit, density, predecessor, zeta, ring, jobs } => {
            let jobs = resolve_jobs(*jobs);
            let ring = Ring::from_index(*ring).expect("clap restricts the range");
            if let Some(prefix) = predecessor {
                predecessor_report(prefix, *limit, ring, jobs)
            } else if let Some(s) = zeta {
                zeta_report(*s, *limit)
            } else {
                let _ = density;
                density_report(*limit)
            }
        }
        Command::Aac { p } => aac_report(*p),
        Command::Crosscheck { y, x, bound } => crosscheck_report(y, x, bound),
    }
}

fn aac_report(p: u64) -> Result<Report, Error> {
    let r = aac_check(p)?;
    let text = format!("p = {p}: u mod p = {}, conjecture holds: {}\n", r.u_mod_p, r.holds);
    let json = json!({
        "holds": r.holds,
        "p": p,
        "u_mod_p": r.u_mod_p,
    });
    let csv = kv_csv(&[
        ("p", p.to_string()),
        ("u_mod_p", r.u_mod_p.to_string()),
        ("holds", r.holds.to_string()),
    ]);
    Ok(Report { text, json, csv })
}

fn resolve_jobs(flag: usize) -> usize {
    if flag > 0 {
        return flag;
    }
    std::env::var(JOBS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&j| j > 0)
        .unwrap_or(1)
}

fn kv_csv(pairs: &[(&str, String)]) -> (String, Vec<String>) {
    (
        "metric,value".to_string(),
        pairs.iter().map(|(k, v)| format!("{k},{v}")).collect(),
    )
}

fn expand_report(d: u64, ring: Ring) -> Result<Report, Error> {
    let e = expand_omega(d, ring)?;
    let text = format!("{} = {}\n", omega_name(d, ring), e);
    let json = json!({
        "a0": e.a0,
        "d": d,
        "period": e.period,
        "ring": ring.index(),
    });
    let csv = kv_csv(&[
        ("d", d.to_string()),
        ("ring", ring.index().to_string()),
        ("a0", e.a0.to_string()),
        (
            "period",
            e.period.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(";"),
        ),
        ("period_length", e.period_len().to_string()),
    ]);
    Ok(Report { text, json, csv })
}

fn unit_report(d: u64, ring: Ring) -> Result<Report, Error> {
    let fu = fundamental_unit(d, ring)?;
    let stats = unit_size_stats(d, ring)?;
    let (x, y) = fu.xy();
    let disc = ring.discriminant(d);
    let text = format!(
        "epsilon = {}  = ({} + {}*sqrt({}))/2\nnorm = {}\nperiod = {}\nlog = {}\n",
        fu.unit,
        x,
        y,
        disc,
        fu.norm,
        fu.period,
        decimal12(stats.log_unit)
    );
    let json = json!({
        "X": big(&x),
        "Y": big(&y),
        "a": big(&fu.unit.a),
        "b": big(&fu.unit.b),
        "d": d,
        "discriminant": disc,
        "log": decimal12(stats.log_unit),
        "norm": fu.norm,
        "period": fu.period,
        "ring": ring.index(),
    });
    let csv = kv_csv(&[
        ("d", d.to_string()),
        ("ring", ring.index().to_string()),
        ("X", x.to_string()),
        ("Y", y.to_string()),
        ("norm", fu.norm.to_string()),
        ("period", fu.period.to_string()),
        ("log", decimal12(stats.log_unit)),
    ]);
    Ok(Report { text, json, csv })
}

fn pell_report(d: u64, ring: Ring, count: usize) -> Result<Report, Error> {
    let sols = pell4_solutions(d, ring, count)?;
    let disc = ring.discriminant(d);
    let mut text = format!("X^2 - {disc} Y^2 = 4\n");
    for (i, s) in sols.iter().enumerate() {
        let _ = writeln!(text, "{}: X = {}, Y = {}", i + 1, s.x, s.y);
    }
    let json = json!({
        "d": d,
        "discriminant": disc,
        "ring": ring.index(),
        "solutions": sols
            .iter()
            .map(|s| json!({"X": big(&s.x), "Y": big(&s.y)}))
            .collect::<Vec<_>>(),
    });
    let rows = sols
        .iter()
        .enumerate()
        .map(|(i, s)| format!("{},{},{}", i + 1, s.x, s.y))
        .collect();
    Ok(Report { text, json, csv: ("index,X,Y".to_string(), rows) })
}

fn inverse_report(y: &BigInt, x: &BigInt, count: usize) -> Result<Report, Error> {
    let progs = progressions_for_key(y, x)?;
    let mut text = format!("progressions for (y = {y}, x = {x})\n");
    let mut cases = Vec::new();
    let mut rows = Vec::new();
    for prog in &progs {
        let fam = reduced_family(&prog.key)?;
        let elems = prog.elements(count);
        let _ = writeln!(
            text,
            "case ({}) ring {} sign {}: a0 = {} + {} k, palindrome {}",
            prog.case_id,
            prog.key.ring.index(),
            prog.key.sign,
            prog.frak_a,
            prog.y_tilde,
            fam.palindrome
        );
        for (a0, d) in &elems.pairs {
            let discarded = fam.discarded_least.as_ref() == Some(d);
            let mark = if discarded { "  [discarded: short period]" } else { "" };
            let _ = writeln!(text, "  a0 = {a0}: d = {d}{mark}");
            rows.push(format!(
                "{},{},{},{},{},{}",
                prog.case_id,
                prog.key.ring.index(),
                prog.key.sign,
                a0,
                d,
                discarded
            ));
        }
        for (a0, d) in &elems.skipped {
            let _ = writeln!(text, "  a0 = {a0}: d = {d}  [skipped: not a valid d]");
        }
        cases.push(json!({
            "case": prog.case_id,
            "discarded_least": fam.discarded_least.as_ref().map(big),
            "elements": elems
                .pairs
                .iter()
                .map(|(a0, d)| json!({"a0": big(a0), "d": big(d)}))
                .collect::<Vec<_>>(),
            "frak_a": big(&prog.frak_a),
            "palindrome": fam.palindrome.terms(),
            "ring": prog.key.ring.index(),
            "sign": prog.key.sign.value(),
            "skipped": elems
                .skipped
                .iter()
                .map(|(a0, d)| json!({"a0": big(a0), "d": big(d)}))
                .collect::<Vec<_>>(),
            "y_tilde": big(&prog.y_tilde),
        }));
    }
    let json = json!({
        "cases": cases,
        "x": big(x),
        "y": big(y),
    });
    Ok(Report { text, json, csv: ("case,ring,sign,a0,d,discarded".to_string(), rows) })
}

fn interval_report(p: &BigInt, q: &BigInt, ring: Ring) -> Result<Report, Error> {
    let (lower, upper) = attached_intervals(p, q, ring)?;
    let mut text = format!("attached intervals of {p}/{q}, ring {}\n", ring.index());
    let mut sides = Vec::new();
    let mut rows = Vec::new();
    for (iv, side) in [(&lower, Side::Lower), (&upper, Side::Upper)] {
        let hit = integer_in_interval(p, q, ring, side)?;
        let _ = writeln!(
            text,
            "I^{} = ({}, {})  d = {}",
            side.symbol(),
            iv.lo,
            iv.hi,
            hit.as_ref()
                .map(|h| format!("{} (norm {})", h.d, h.norm))
                .unwrap_or_else(|| "none".to_string()),
        );
        rows.push(format!(
            "{},{},{},{},{}",
            side.symbol(),
            iv.lo,
            iv.hi,
            hit.as_ref().map(|h| h.d.to_string()).unwrap_or_default(),
            hit.as_ref().map(|h| h.norm.to_string()).unwrap_or_default(),
        ));
        sides.push(json!({
            "d": hit.as_ref().map(|h| big(&h.d)),
            "hi": iv.hi.to_string(),
            "lo": iv.lo.to_string(),
            "norm": hit.as_ref().map(|h| h.norm),
            "side": side.symbol().to_string(),
        }));
    }
    let json = json!({
        "p": big(p),
        "q": big(q),
        "ring": ring.index(),
        "sides": sides,
    });
    Ok(Report { text, json, csv: ("side,lo,hi,d,norm".to_string(), rows) })
}

fn classify_report(d: u64, ring: Ring) -> Result<Report, Error> {
    let c = classify(d, ring)?;
    let fam = reduced_family(&c.key)?;
    let text = format!(
        "d = {d}, ring {}\nkey = {}\npalindrome = {}\nfamily minimum = {}\ndiscarded least = {}\nis_least = {}\n",
        ring.index(),
        c.key,
        c.palindrome,
        fam.min_element(),
        fam.discarded_least
            .as_ref()
            .map(|v| v.to_string())
            .unwrap_or_else(|| "none".to_string()),
        c.is_least
    );
    let json = json!({
        "d": d,
        "discarded_least": fam.discarded_least.as_ref().map(big),
        "is_least": c.is_least,
        "min_element": big(fam.min_element()),
        "palindrome": c.palindrome.terms(),
        "ring": ring.index(),
        "sign": c.key.sign.value(),
        "x": big(&c.key.x),
        "y": big(&c.key.y),
    });
    let csv = kv_csv(&[
        ("d", d.to_string()),
        ("ring", ring.index().to_string()),
        ("y", c.key.y.to_string()),
        ("x", c.key.x.to_string()),
        ("sign", c.key.sign.value().to_string()),
        (
            "palindrome",
            c.palindrome.terms().iter().map(|a| a.to_string()).collect::<Vec<_>>().join(";"),
        ),
        ("min_element", fam.min_element().to_string()),
        ("is_least", c.is_least.to_string()),
    ]);
    Ok(Report { text, json, csv })
}

fn density_report(limit: u64) -> Result<Report, Error> {
    let r = least_type_density(limit);
    let (n0, d0) = r.ratio_least0();
    let (n1, d1) = r.ratio_least1();
    let ratio0 = n0 as f64 / d0 as f64;
    let ratio1 = n1 as f64 / d1 as f64;
    let text = format!(
        "least-type survey to {limit}\n\
         non-squares: {}\n\
         square-free: {} (mod 4 classes 1/2/3: {}/{}/{})\n\
         least to 0 among square-free: {n0}/{d0} = {}\n\
         least to 1 among square-free 1 mod 4: {n1}/{d1} = {}\n\
         least-type fields: {}\n\
         non-least-type: {}\n",
        r.total_nonsquares,
        r.squarefree_total,
        r.squarefree_mod4[0],
        r.squarefree_mod4[1],
        r.squarefree_mod4[2],
        decimal12(ratio0),
        decimal12(ratio1),
        r.least_type_fields,
        r.non_least_type,
    );
    let json = json!({
        "least_to_0": n0,
        "least_to_1": n1,
        "least_type_fields": r.least_type_fields,
        "limit": limit,
        "non_least_type": r.non_least_type,
        "ratio_least0": decimal12(ratio0),
        "ratio_least1": decimal12(ratio1),
        "squarefree_mod4_1": r.squarefree_mod4[0],
        "squarefree_mod4_2": r.squarefree_mod4[1],
        "squarefree_mod4_3": r.squarefree_mod4[2],
        "squarefree_total": r.squarefree_total,
        "total_nonsquares": r.total_nonsquares,
    });
    let csv = kv_csv(&[
        ("limit", limit.to_string()),
        ("total_nonsquares", r.total_nonsquares.to_string()),
        ("squarefree_total", r.squarefree_total.to_string()),
        ("squarefree_1_mod4", r.squarefree_mod4[0].to_string()),
        ("squarefree_2_mod4", r.squarefree_mod4[1].to_string()),
        ("squarefree_3_mod4", r.squarefree_mod4[2].to_string()),
        ("least_to_0", n0.to_string()),
        ("least_to_1", n1.to_string()),
        ("least_type_fields", r.least_type_fields.to_string()),
        ("non_least_type", r.non_least_type.to_string()),
        ("ratio_least0", decimal12(ratio0)),
        ("ratio_least1", decimal12(ratio1)),
    ]);
    Ok(Report { text, json, csv })
}

fn predecessor_report(prefix: &[u64], limit: u64, ring: Ring, jobs: usize) -> Result<Report, Error> {
    let r = predecessor_density(prefix, limit, ring, jobs);
    let prefix_str = prefix.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(";");
    let text = format!(
        "predecessor density of [{prefix_str}] to {limit}, ring {}\n\
         count = {}\nempirical = {}\nexpected = {}/{} = {}\n",
        ring.index(),
        r.count,
        decimal12(r.empirical_ratio()),
        r.expected_num,
        r.expected_den,
        decimal12(r.expected_ratio()),
    );
    let json = json!({
        "count": r.count,
        "empirical": decimal12(r.empirical_ratio()),
        "expected": decimal12(r.expected_ratio()),
        "expected_den": big(&r.expected_den),
        "expected_num": big(&r.expected_num),
        "limit": limit,
        "prefix": prefix,
        "ring": ring.index(),
    });
    let csv = kv_csv(&[
        ("limit", limit.to_string()),
        ("ring", ring.index().to_string()),
        ("prefix", prefix_str),
        ("count", r.count.to_string()),
        ("empirical", decimal12(r.empirical_ratio())),
        ("expected", decimal12(r.expected_ratio())),
    ]);
    Ok(Report { text, json, csv })
}

fn zeta_report(s: f64, limit: u64) -> Result<Report, Error> {
    if s.is_nan() || s <= 1.0 {
        return Err(Error::ExponentTooSmall);
    }
    let z = zeta_partial_diagnostic(s, limit);
    let text = format!(
        "partial sums at s = {s}, limit {limit}\n\
         sum over least-to-0: {}\nsum over non-squares: {}\n\
         difference = {}\nrelative difference = {}\n",
        decimal12(z.sum_least),
        decimal12(z.sum_nonsquare),
        decimal12(z.difference),
        decimal12(z.relative_difference),
    );
    let json = json!({
        "difference": decimal12(z.difference),
        "limit": limit,
        "relative_difference": decimal12(z.relative_difference),
        "s": decimal12(s),
        "sum_least": decimal12(z.sum_least),
        "sum_nonsquare": decimal12(z.sum_nonsquare),
    });
    let csv = kv_csv(&[
        ("s", decimal12(s)),
        ("limit", limit.to_string()),
        ("sum_least", decimal12(z.sum_least)),
        ("sum_nonsquare", decimal12(z.sum_nonsquare)),
        ("difference", decimal12(z.difference)),
        ("relative_difference", decimal12(z.relative_difference)),
    ]);
    Ok(Report { text, json, csv })
}

fn crosscheck_report(y: &BigInt, x: &BigInt, bound: &BigInt) -> Result<Report, Error> {
    let r = cross_check_parameterizations(y, x, bound)?;
    let mut text = format!(
        "cross-check for (y = {y}, x = {x}) up to {bound}: {}\n",
        if r.all_equal { "EQUAL" } else { "MISMATCH" }
    );
    let mut rows = Vec::new();
    let mut cases = Vec::new();
    for c in &r.cases {
        let list = |v: &Vec<BigInt>| {
            v.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(";")
        };
        let _ = writeln!(
            text,
            "case ({}) ring {}: progression {{{}}} vs polynomial {{{}}} -> {}",
            c.case_id,
            c.ring.index(),
            list(&c.progression),
            list(&c.halter_koch),
            if c.equal { "equal" } else { "MISMATCH" }
        );
        rows.push(format!(
            "{},{},{},{},{}",
            c.case_id,
            c.ring.index(),
            list(&c.progression),
            list(&c.halter_koch),
            c.equal
        ));
        cases.push(json!({
            "case": c.case_id,
            "equal": c.equal,
            "halter_koch": c.halter_koch.iter().map(big).collect::<Vec<_>>(),
            "progression": c.progression.iter().map(big).collect::<Vec<_>>(),
            "ring": c.ring.index(),
            "sign": c.sign.value(),
        }));
    }
    let json = json!({
        "all_equal": r.all_equal,
        "bound": big(bound),
        "cases": cases,
        "coverage_equal": r.coverage_equal,
        "x": big(x),
        "y": big(y),
    });
    Ok(Report { text, json, csv: ("case,ring,progression,halter_koch,equal".to_string(), rows) })
}

fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Text => report.text.clone(),
        Format::Json => {
            let mut s = serde_json::to_string(&report.json).expect("serializable");
            s.push('\n');
            s
        }
        Format::Csv => {
            let (header, rows) = &report.csv;
            let mut s = String::with_capacity(64 * (rows.len() + 1));
            let _ = writeln!(s, "{header}");
            for row in rows {
                let _ = writeln!(s, "{row}");
            }
            s
        }
    }
}

/// Parses argv, runs the subcommand, and writes the report. Returns the
/// process exit code: 0 on success, 2 on usage errors, 3 on domain errors.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let report = match run_command(&cli.command) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return 3;
        }
    };
    let rendered = render(&report, cli.format);
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, rendered) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return 3;
            }
        }
        None => {
            if out.write_all(rendered.as_bytes()).is_err() {
                return 3;
            }
        }
    }
    0
}
