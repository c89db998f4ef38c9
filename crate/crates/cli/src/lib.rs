//! Command-line front end: tables, solver runs, certificate files.

pub mod certfile;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use hetbundle_core::assembly::{
    ch_component, ch_total, evaluate_constraints, ext_lower_bound, hprime_class, moduli_tally, BundleParams,
    ConstraintName, ConstraintReport, HPrimePolicy, Slack,
};
use hetbundle_core::fm_chern::{linear_system_dims, spectral_genus};
use hetbundle_core::hecke::HeckeMultiplicities;
use hetbundle_core::lattice;
use hetbundle_core::prym;
use hetbundle_core::rational::{format_rational, frac, rat};
use hetbundle_core::solver::{
    consistency_check, enumerate_table1, solve, verify_certificate, worked_certificate, SearchBounds, SolveOptions,
};
use hetbundle_core::Error;
use serde::{Deserialize, Serialize};

use certfile::{class_from_strings, parse_certificates, CertificateFile, HPrimeDto, SchemaError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

pub const WORKERS_ENV: &str = "HETBUNDLE_WORKERS";

#[derive(Debug, Parser)]
#[command(name = "hetbundle", version, about = "Exact constraint solver for rank-5 spectral bundles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the admissible (k2, k3) rows with L2.f' and L3.f'.
    Table1 {
        #[arg(long)]
        json: bool,
    },
    /// Enumerate certificates for one admissible row.
    Solve(SolveArgs),
    /// Re-check certificates from a JSON file (one object or an array).
    Verify { file: PathBuf },
    /// Ampleness test for h' = a f' + b e1' + c xi'.
    Ample {
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long, allow_hyphen_values = true)]
        b: i64,
        #[arg(long, allow_hyphen_values = true)]
        c: i64,
    },
    /// Print ch(V2), ch(V3), ch(V) for a parameter file.
    Chern {
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Character lattice checks for the nodal spectral curve.
    Chars {
        /// Also compute the rank of the full kernel lattice.
        #[arg(long)]
        kernel: bool,
        #[arg(long)]
        json: bool,
    },
    /// Run the golden checks and print one line per check.
    Report,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[arg(long)]
    k2: i64,
    #[arg(long)]
    k3: i64,
    #[arg(long, allow_hyphen_values = true, default_value_t = -6)]
    u_min: i64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 6)]
    u_max: i64,
    #[arg(long, allow_hyphen_values = true, default_value_t = -20)]
    x_min: i64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 20)]
    x_max: i64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
    z_min: i64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 3)]
    z_max: i64,
    #[arg(long, allow_hyphen_values = true, default_value_t = -40)]
    d2_min: i64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 40)]
    d2_max: i64,
    #[arg(long, allow_hyphen_values = true, default_value_t = -40)]
    d3_min: i64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 40)]
    d3_max: i64,
    #[arg(long, default_value_t = 5)]
    a_max: i64,
    /// Allow non-constant Hecke multiplicity lists.
    #[arg(long)]
    nonconstant_a: bool,
    /// Search M over thirds of the (m1, m2, m3) lattice instead of z(e4' - e5').
    #[arg(long)]
    general_m: bool,
    #[arg(long, default_value_t = 1)]
    m_bound: i64,
    #[arg(long, default_value_t = 25)]
    ha: i64,
    #[arg(long, default_value_t = 144)]
    hb: i64,
    #[arg(long, default_value_t = 168)]
    hc: i64,
    /// Write certificates here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Keep only the first N certificates (in the deterministic order).
    #[arg(long)]
    limit: Option<usize>,
}

/// Parameters for `chern`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsFile {
    pub k2: i64,
    pub k3: i64,
    pub d2: i64,
    pub d3: i64,
    pub a2: Vec<i64>,
    pub a3: Vec<i64>,
    #[serde(rename = "L2")]
    pub l2: Vec<String>,
    #[serde(rename = "L3")]
    pub l3: Vec<String>,
    #[serde(default)]
    pub hprime: Option<HPrimeDto>,
}

impl ParamsFile {
    pub fn to_params(&self) -> Result<BundleParams, String> {
        Ok(BundleParams {
            k2: self.k2,
            k3: self.k3,
            d2: self.d2,
            d3: self.d3,
            a2: HeckeMultiplicities::new(2, self.a2.clone()).map_err(|e| e.to_string())?,
            a3: HeckeMultiplicities::new(3, self.a3.clone()).map_err(|e| e.to_string())?,
            l2: class_from_strings(&self.l2, "L2").map_err(|e| e.to_string())?,
            l3: class_from_strings(&self.l3, "L3").map_err(|e| e.to_string())?,
        })
    }
}

/// Sets the global worker count from `HETBUNDLE_WORKERS` (default: one per
/// processor).
fn configure_workers() -> Result<(), String> {
    let Ok(raw) = std::env::var(WORKERS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| format!("{WORKERS_ENV} must be a positive integer, got {raw:?}"))?;
    // A second call in the same process keeps the first pool.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if code == EXIT_OK { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    if let Err(msg) = configure_workers() {
        let _ = writeln!(err, "error: {msg}");
        return EXIT_INPUT;
    }
    let result = match cli.command {
        Command::Table1 { json } => cmd_table1(json, out),
        Command::Solve(args) => cmd_solve(&args, out),
        Command::Verify { file } => cmd_verify(&file, out),
        Command::Ample { a, b, c } => cmd_ample(a, b, c, out),
        Command::Chern { params, json } => cmd_chern(&params, json, out),
        Command::Chars { kernel, json } => cmd_chars(kernel, json, out),
        Command::Report => cmd_report(out),
    };
    match result {
        Ok(code) => code,
        Err(CmdError { code, message }) => {
            let _ = writeln!(err, "error: {message}");
            code
        }
    }
}

struct CmdError {
    code: i32,
    message: String,
}

type CmdResult = Result<i32, CmdError>;

fn input_error(message: impl Into<String>) -> CmdError {
    CmdError { code: EXIT_INPUT, message: message.into() }
}

fn io_error(e: std::io::Error) -> CmdError {
    input_error(e.to_string())
}

fn core_error(e: Error) -> CmdError {
    let code = match e {
        Error::Tamper(_) | Error::NotAmple(_) => EXIT_FAILED,
        _ => EXIT_INPUT,
    };
    CmdError { code, message: e.to_string() }
}

fn schema_error(e: SchemaError) -> CmdError {
    input_error(e.to_string())
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Table1Json {
    pub k2: i64,
    pub k3: i64,
    pub l2f: i64,
    pub l3f: i64,
}

fn cmd_table1(json: bool, out: &mut dyn Write) -> CmdResult {
    let rows = enumerate_table1();
    if json {
        let rows: Vec<Table1Json> =
            rows.iter().map(|r| Table1Json { k2: r.k2, k3: r.k3, l2f: r.l2f, l3f: r.l3f }).collect();
        writeln!(out, "{}", serde_json::to_string_pretty(&rows).expect("serializable")).map_err(io_error)?;
    } else {
        writeln!(out, "{:>3} {:>3} {:>6} {:>6}", "k2", "k3", "L2.f'", "L3.f'").map_err(io_error)?;
        for r in rows {
            writeln!(out, "{:>3} {:>3} {:>6} {:>6}", r.k2, r.k3, r.l2f, r.l3f).map_err(io_error)?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_solve(args: &SolveArgs, out: &mut dyn Write) -> CmdResult {
    let opts = SolveOptions {
        bounds: SearchBounds {
            u: (args.u_min, args.u_max),
            x: (args.x_min, args.x_max),
            z: (args.z_min, args.z_max),
            d2: (args.d2_min, args.d2_max),
            d3: (args.d3_min, args.d3_max),
            a_max: args.a_max,
            nonconstant_a: args.nonconstant_a,
            general_m: args.general_m,
            m_bound: args.m_bound,
        },
        hprime: (args.ha, args.hb, args.hc),
    };
    if opts.bounds.a_max < 0 || opts.bounds.m_bound < 0 {
        return Err(input_error("a-max and m-bound must be nonnegative"));
    }
    let mut certs =
        solve(args.k2, args.k3, &opts).map_err(|e| CmdError { code: EXIT_INPUT, message: e.to_string() })?;
    let total = certs.len();
    if let Some(n) = args.limit {
        certs.truncate(n);
    }
    let files: Vec<CertificateFile> = certs.iter().map(CertificateFile::from_certificate).collect();
    let text = serde_json::to_string_pretty(&files).expect("serializable");
    match &args.out {
        Some(path) => {
            fs::write(path, text + "\n").map_err(io_error)?;
            writeln!(
                out,
                "(k2, k3) = ({}, {}): {} certificates, {} written to {}",
                args.k2,
                args.k3,
                total,
                files.len(),
                path.display()
            )
            .map_err(io_error)?;
            let mut groups: Vec<(i64, i64, String, usize)> = Vec::new();
            for c in &certs {
                let m = match c.m.ray() {
                    Some(z) => format!("z={z}"),
                    None => format!("M={}", c.m.class()),
                };
                match groups.last_mut() {
                    Some(g) if g.0 == c.u && g.1 == c.x && g.2 == m => g.3 += 1,
                    _ => groups.push((c.u, c.x, m, 1)),
                }
            }
            for (u, x, m, n) in groups {
                writeln!(out, "  u={u} x={x} {m}: {n}").map_err(io_error)?;
            }
        }
        None => writeln!(out, "{text}").map_err(io_error)?,
    }
    Ok(EXIT_OK)
}

fn describe_report(r: &ConstraintReport, out: &mut dyn Write) -> std::io::Result<()> {
    for e in &r.entries {
        let slack = match &e.slack {
            Slack::Scalar(x) => format_rational(x),
            Slack::Class(c) => c.to_string(),
        };
        writeln!(out, "  {:<12} {:<4} slack {}", e.name.label(), if e.pass { "pass" } else { "FAIL" }, slack)?;
    }
    writeln!(
        out,
        "  c2 deficit ({}, {}), c3 = {}, h' verified: {}",
        format_rational(&r.c2_deficit.0),
        format_rational(&r.c2_deficit.1),
        format_rational(&r.c3),
        r.hprime_verified
    )
}

fn cmd_verify(path: &PathBuf, out: &mut dyn Write) -> CmdResult {
    let text = fs::read_to_string(path).map_err(io_error)?;
    let files = parse_certificates(&text).map_err(schema_error)?;
    let certs = files.iter().map(|f| f.to_certificate()).collect::<Result<Vec<_>, _>>().map_err(schema_error)?;
    let mut all_ok = true;
    for (i, cert) in certs.iter().enumerate() {
        let label = format!(
            "#{i} (k2,k3)=({},{}) u={} x={} d2={} d3={} a2={:?} a3={:?}",
            cert.row.k2, cert.row.k3, cert.u, cert.x, cert.d2, cert.d3, cert.a2, cert.a3
        );
        match verify_certificate(cert) {
            Ok(report) if report.all_pass() => {
                writeln!(out, "ok      {label}").map_err(io_error)?;
            }
            Ok(report) => {
                all_ok = false;
                let failed: Vec<&str> = report.failures().iter().map(|n| n.label()).collect();
                writeln!(out, "failed  {label}: {}", failed.join(", ")).map_err(io_error)?;
                describe_report(&report, out).map_err(io_error)?;
            }
            Err(e) => {
                let e = core_error(e);
                if e.code == EXIT_INPUT {
                    return Err(e);
                }
                all_ok = false;
                writeln!(out, "failed  {label}: {}", e.message).map_err(io_error)?;
            }
        }
    }
    Ok(if all_ok { EXIT_OK } else { EXIT_FAILED })
}

fn cmd_ample(a: i64, b: i64, c: i64, out: &mut dyn Write) -> CmdResult {
    let chk = lattice::is_ample_fxi(a, b, c);
    let w = &chk.witness;
    writeln!(out, "h' = {a} f' + {b} e1' + {c} xi': ample = {}", chk.ample).map_err(io_error)?;
    for (name, v) in [
        ("h'.e1'", &w.with_e1),
        ("h'.xi'", &w.with_xi),
        ("h'.f'", &w.with_f),
        ("h'.n_i'", &w.with_n),
        ("h'.o_i'", &w.with_o),
        ("h'^2", &w.self_intersection),
    ] {
        writeln!(out, "  {name:<8} {}", format_rational(v)).map_err(io_error)?;
    }
    Ok(if chk.ample { EXIT_OK } else { EXIT_FAILED })
}

#[derive(Debug, Serialize)]
struct ChernJson {
    rank: String,
    c1_b: Vec<String>,
    c1_bprime: Vec<String>,
    f_pt: String,
    pt_f: String,
    pt: String,
}

impl From<&hetbundle_core::ChernX> for ChernJson {
    fn from(c: &hetbundle_core::ChernX) -> Self {
        ChernJson {
            rank: format_rational(&c.rank),
            c1_b: c.c1_b.coeffs().iter().map(format_rational).collect(),
            c1_bprime: c.c1_bprime.coeffs().iter().map(format_rational).collect(),
            f_pt: format_rational(&c.f_pt),
            pt_f: format_rational(&c.pt_f),
            pt: format_rational(&c.pt),
        }
    }
}

fn cmd_chern(path: &PathBuf, json: bool, out: &mut dyn Write) -> CmdResult {
    let text = fs::read_to_string(path).map_err(io_error)?;
    let file: ParamsFile = serde_json::from_str(&text).map_err(|e| input_error(e.to_string()))?;
    let p = file.to_params().map_err(input_error)?;
    let v2 = ch_component(2, &p).map_err(core_error)?;
    let v3 = ch_component(3, &p).map_err(core_error)?;
    let v = ch_total(&p).map_err(core_error)?;
    if json {
        let doc = serde_json::json!({
            "V2": ChernJson::from(&v2),
            "V3": ChernJson::from(&v3),
            "V": ChernJson::from(&v),
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("serializable")).map_err(io_error)?;
    } else {
        writeln!(out, "ch(V2): {v2}").map_err(io_error)?;
        writeln!(out, "ch(V3): {v3}").map_err(io_error)?;
        writeln!(out, "ch(V):  {v}").map_err(io_error)?;
    }
    let Some(h) = file.hprime else {
        return Ok(EXIT_OK);
    };
    let report = evaluate_constraints(&p, &hprime_class(h.a, h.b, h.c), HPrimePolicy::Require).map_err(core_error)?;
    if !json {
        writeln!(out, "constraints with h' = ({}, {}, {}):", h.a, h.b, h.c).map_err(io_error)?;
        describe_report(&report, out).map_err(io_error)?;
    }
    Ok(if report.all_pass() { EXIT_OK } else { EXIT_FAILED })
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CharsJson {
    pub labels: Vec<String>,
    pub lambda: Vec<[i64; 8]>,
    pub rank: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub kernel_rank: Option<usize>,
}

fn cmd_chars(kernel: bool, json: bool, out: &mut dyn Write) -> CmdResult {
    let chars = prym::characters();
    let mut all_in = true;
    let mut lambdas = Vec::new();
    for (k, chi) in chars.iter().enumerate() {
        let inside = prym::chi_in_lattice(chi).expect("twelve entries");
        all_in &= inside;
        let lambda = prym::lambda_representation(chi).ok();
        if !json {
            let shown = lambda.map_or_else(|| "-".to_string(), |l| format!("{:?}", l.0));
            writeln!(out, "chi{}: in lattice = {inside}, lambda = {shown}", k + 1).map_err(io_error)?;
        }
        lambdas.extend(lambda);
    }
    let rank = prym::lambda_rank(&lambdas);
    let kernel_rank = kernel.then(prym::lattice_kernel_rank);
    if json {
        let doc = CharsJson {
            labels: prym::LambdaVector::LABELS.iter().map(|s| s.to_string()).collect(),
            lambda: lambdas.iter().map(|l| l.0).collect(),
            rank,
            kernel_rank,
        };
        writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("serializable")).map_err(io_error)?;
    } else {
        writeln!(out, "coordinates: {}", prym::LambdaVector::LABELS.join(" ")).map_err(io_error)?;
        writeln!(out, "rank of lambda_1..lambda_7: {rank}").map_err(io_error)?;
        if let Some(r) = kernel_rank {
            writeln!(out, "rank of the kernel lattice: {r}").map_err(io_error)?;
        }
    }
    Ok(if all_in && rank == 7 { EXIT_OK } else { EXIT_FAILED })
}

fn cmd_report(out: &mut dyn Write) -> CmdResult {
    let bp = lattice::Surface::BPrime;
    let mut checks: Vec<(&str, bool, String)> = Vec::new();

    let rows: Vec<_> = enumerate_table1().iter().map(|r| (r.k2, r.k3, r.l2f, r.l3f)).collect();
    checks.push((
        "admissible (k2, k3) rows",
        rows == [(2, 4, 9, -6), (2, 6, 3, -2), (3, 5, 18, -12), (3, 6, 6, -4), (4, 7, 9, -6)],
        format!("{rows:?}"),
    ));

    let t2 = lattice::pairing_table(&[lattice::e_plus_zeta(bp), lattice::fiber(bp), lattice::n1_plus_o2(bp)])
        .expect("same surface");
    let t2_ints: Vec<Vec<String>> = t2.entries.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
    let want = [[-2, 2, 2], [2, 0, 0], [2, 0, -4]];
    let t2_ok = (0..3).all(|i| (0..3).all(|j| t2.entries[i][j] == rat(want[i][j])));
    checks.push(("pairing of e'+zeta', f', n1'+o2'", t2_ok, format!("{t2_ints:?}")));

    let g = (spectral_genus(2, 2), spectral_genus(3, 6));
    checks.push(("genus of C2, C3", g == (Ok(2), Ok(13)), format!("{:?}", g)));

    let d36 = linear_system_dims(3, 6).expect("supported");
    let d22 = linear_system_dims(2, 2).expect("supported");
    checks.push((
        "linear systems |3e+6f|, |2e+2f|",
        d36.projective() == (8, 6) && d22.projective().0 == 2,
        format!("{:?} {:?}", d36.projective(), d22.projective()),
    ));
    let tally = moduli_tally(&[2, 8, 1, 6, 79]);
    checks.push(("moduli tally", tally == 96, tally.to_string()));

    let ext = ext_lower_bound(3, 6, &rat(6), &rat(-4));
    checks.push(("Ext lower bound", ext == rat(150), ext.to_string()));

    let amp = lattice::is_ample_fxi(25, 144, 168);
    let w: Vec<String> = amp.witness.as_array().iter().map(|x| x.to_string()).collect();
    checks.push(("h' = 25f'+144e1'+168xi' ample", amp.ample, w.join(",")));

    let e1 = lattice::DivisorClass::exceptional(bp, 1);
    let mu = &(&e1.scale(&rat(6)) + &lattice::xi(bp).scale(&rat(6))) - &lattice::fiber(bp);
    let descent = lattice::descent_not_effective(&mu).expect("in span");
    checks.push((
        "6e1'+6xi'-f' not effective",
        descent.verdict == lattice::DescentVerdict::NotEffective,
        format!("{} steps, ends at {}", descent.steps.len(), descent.terminal),
    ));

    let cert = worked_certificate();
    let report = verify_certificate(&cert);
    let (ok, detail) = match &report {
        Ok(r) => (
            r.all_pass()
                && r.get(ConstraintName::SS).slack == Slack::Scalar(rat(-12))
                && r.c2_deficit == (rat(2), rat(3))
                && r.c3 == rat(12),
            format!(
                "S_s {}, deficit ({}, {}), c3 {}",
                r.get(ConstraintName::SS).slack.as_scalar().map(|x| x.to_string()).unwrap_or_default(),
                r.c2_deficit.0,
                r.c2_deficit.1,
                r.c3
            ),
        ),
        Err(e) => (false, e.to_string()),
    };
    checks.push(("worked certificate", ok, detail));
    let v = ch_total(&cert.params().expect("valid lists")).expect("vertical");
    checks.push((
        "ch(V) of worked certificate",
        v.rank == rat(5) && v.c1_is_zero() && v.h4() == (rat(-10), rat(-9)) && v.pt == rat(6),
        v.to_string(),
    ));

    let obstruction = lattice::invariant_subspace_has_integral_point();
    checks.push((
        "invariant subspace misses Pic(B)",
        !obstruction.has_point,
        obstruction.obstruction_value.map(|v| format!("witness value {v}")).unwrap_or_default(),
    ));

    let lambdas: Vec<_> = prym::characters().iter().filter_map(|c| prym::lambda_representation(c).ok()).collect();
    checks.push((
        "characters independent",
        lambdas.len() == 7 && prym::lambda_rank(&lambdas) == 7,
        format!("rank {}", prym::lambda_rank(&lambdas)),
    ));

    let centers_ok =
        [1i64, 2, 3, 6].iter().all(|&k| consistency_check(k, &frac(-9, k), &frac(3, k)) == (true, rat(-12)));
    checks.push(("consistency region nonempty for k = 1, 2, 3, 6", centers_ok, String::new()));

    let mut all = true;
    for (name, ok, detail) in &checks {
        all &= ok;
        writeln!(
            out,
            "{} {name}{}{detail}",
            if *ok { "PASS" } else { "FAIL" },
            if detail.is_empty() { "" } else { ": " }
        )
        .map_err(io_error)?;
    }
    Ok(if all { EXIT_OK } else { EXIT_FAILED })
}
