//! Library behind the `askzeta` binary: argument parsing, subcommands and
//! report formatting.

pub mod schema;

use askzeta::ask::{ask_series, EngineConfig, Method};
use askzeta::catalog::{catalog_module, lie_algebra};
use askzeta::closed_forms::{brenti_at_minus_q_inv, brenti_identity_check, brenti_polynomial, catalog_entries, closed_form, CatalogEntry, Validity, ZetaKind};
use askzeta::grouporbits::{cc_coefficients_direct, exp_generators, gl_generators, negation_group, oc_coefficients, semidirect_embed, swap_group, GroupGenSet, NilpotentAlgebra};
use askzeta::matmodule::{structure_constants, MatrixModule};
use askzeta::ratfun::{functional_equation_check, parse_qt, QTRational};
use askzeta::structural::{structure_report, CertOptions, Certificate, StructureReport};
use askzeta::{AskError, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use schema::{int_str, module_to_json, rational_json, SCHEMA};
use serde_json::{json, Value};
use std::io::Write;
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "askzeta", version, about = "Average kernel sizes, ask zeta functions and orbit counts over Z/p^n")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for enumeration (1 disables parallelism).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args, Debug, Clone)]
pub struct Source {
    /// Catalog key, e.g. "so(3)", "n(3)", "L_{4,3}", "cc:L_{3,2}".
    #[arg(long, conflicts_with = "input")]
    pub catalog: Option<String>,
    /// JSON file with a module, algebra or group.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct Levels {
    /// Comma-separated primes.
    #[arg(long, value_delimiter = ',', required = true)]
    pub p: Vec<u64>,
    #[arg(long, default_value_t = 2)]
    pub n_max: u32,
    /// auto, average or orbit.
    #[arg(long, default_value = "auto")]
    pub method: String,
    /// Maximal number of enumerated representatives.
    #[arg(long, default_value_t = askzeta::ask::DEFAULT_BUDGET)]
    pub budget: u128,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Ask coefficients ask(M_n) for n = 0..=n_max.
    Ask {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        levels: Levels,
    },
    /// Compare enumerated coefficients with a closed form.
    Verify {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        levels: Levels,
        /// Formula to check instead of the catalog one.
        #[arg(long)]
        form: Option<String>,
        /// Also run the other enumeration method and compare.
        #[arg(long)]
        cross_check: bool,
    },
    /// Generic ranks, orbit-maximality and kernel-minimality certificates.
    Structure {
        #[command(flatten)]
        source: Source,
        /// Prime for the constant-rank check over F_q.
        #[arg(long)]
        q: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Conjugacy class counts of exp(L): direct and through ad(L).
    Cc {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        levels: Levels,
        /// Skip the direct count.
        #[arg(long)]
        no_direct: bool,
    },
    /// Orbit counts of a group on (Z/p^n)^d.
    Oc {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        levels: Levels,
    },
    /// Check W(1/q, 1/T) = -q^d T W(q, T).
    Feqn {
        #[arg(long, conflicts_with = "catalog")]
        form: Option<String>,
        #[arg(long)]
        d: Option<i64>,
        #[arg(long)]
        catalog: Option<String>,
    },
    /// List catalog entries, or show one.
    Catalog {
        #[arg(long)]
        catalog: Option<String>,
    },
    /// Brenti's type-B Eulerian polynomial and its identity check.
    Brenti {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 6)]
        order: usize,
    },
}

/// A report in all three output formats.
pub struct Report {
    pub json: Value,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub text: String,
    pub code: i32,
}

impl Report {
    fn new(command: &str, mut json: Value) -> Self {
        json["schema"] = json!(SCHEMA);
        json["command"] = json!(command);
        Report { json, header: Vec::new(), rows: Vec::new(), text: String::new(), code: EXIT_OK }
    }

    fn render(&self, format: Format) -> std::result::Result<String, String> {
        Ok(match format {
            Format::Json => serde_json::to_string_pretty(&self.json).map_err(|e| e.to_string())? + "\n",
            Format::Text => self.text.clone(),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                if !self.header.is_empty() {
                    w.write_record(&self.header).map_err(|e| e.to_string())?;
                }
                for r in &self.rows {
                    w.write_record(r).map_err(|e| e.to_string())?;
                }
                String::from_utf8(w.into_inner().map_err(|e| e.to_string())?).map_err(|e| e.to_string())?
            }
        })
    }
}

pub fn exit_code(e: &AskError) -> i32 {
    match e {
        AskError::BudgetExceeded { .. } => EXIT_BUDGET,
        AskError::Internal(_) => EXIT_INTERNAL,
        _ => EXIT_INPUT,
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    if let Some(j) = cli.jobs {
        // a second call in the same process fails harmlessly
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global();
    }
    let cfg_parallel = cli.jobs != Some(1);
    let report = match execute(&cli.command, cfg_parallel) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    let body = match report.render(cli.format) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INTERNAL;
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, body.as_bytes()).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout().write_all(body.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return EXIT_INPUT;
    }
    report.code
}

pub fn execute(cmd: &Command, parallel: bool) -> Result<Report> {
    match cmd {
        Command::Ask { source, levels } => cmd_ask(source, levels, parallel),
        Command::Verify { source, levels, form, cross_check } => cmd_verify(source, levels, form.as_deref(), *cross_check, parallel),
        Command::Structure { source, q, seed } => cmd_structure(source, *q, *seed),
        Command::Cc { source, levels, no_direct } => cmd_cc(source, levels, *no_direct, parallel),
        Command::Oc { source, levels } => cmd_oc(source, levels, parallel),
        Command::Feqn { form, d, catalog } => cmd_feqn(form.as_deref(), *d, catalog.as_deref()),
        Command::Catalog { catalog } => cmd_catalog(catalog.as_deref()),
        Command::Brenti { n, order } => cmd_brenti(*n, *order),
    }
}

fn input_error<T>(msg: impl Into<String>) -> Result<T> {
    Err(AskError::InvalidInput(msg.into()))
}

fn engine(levels: &Levels, parallel: bool) -> Result<(Method, EngineConfig)> {
    let method: Method = levels.method.parse()?;
    Ok((method, EngineConfig { budget: levels.budget, parallel }))
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Auto => "auto",
        Method::Average => "average",
        Method::Orbit => "orbit",
    }
}

fn ratio_str(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn list_str(v: &[BigRational]) -> String {
    v.iter().map(ratio_str).collect::<Vec<_>>().join(", ")
}

/// Module from `--input` or `--catalog`.
fn load_module(source: &Source) -> Result<(MatrixModule, bool)> {
    match (&source.catalog, &source.input) {
        (Some(k), None) => Ok((catalog_module(k)?, k.starts_with("L_"))),
        (None, Some(path)) => {
            let v = schema::read_json(path)?;
            if schema::is_group(&v) {
                return input_error("expected a module, got a group");
            }
            schema::module_from_json(&v)
        }
        _ => input_error("give exactly one of --catalog and --input"),
    }
}

fn module_summary(m: &MatrixModule) -> Value {
    json!({"label": m.label, "d": m.d, "e": m.e, "ell": m.ell()})
}

fn cmd_ask(source: &Source, levels: &Levels, parallel: bool) -> Result<Report> {
    let (m, _) = load_module(source)?;
    let (method, cfg) = engine(levels, parallel)?;
    let mut results = Vec::new();
    let mut rows = Vec::new();
    let mut text = String::new();
    for &p in &levels.p {
        let s = ask_series(&m, p, levels.n_max, method, &cfg)?;
        for (n, c) in s.iter().enumerate() {
            rows.push(vec![p.to_string(), n.to_string(), ratio_str(c)]);
        }
        text += &format!("p={p}: {}\n", list_str(&s));
        results.push(json!({"p": p, "coefficients": s.iter().map(rational_json).collect::<Vec<_>>()}));
    }
    let mut r = Report::new(
        "ask",
        json!({"module": module_summary(&m), "method": method_name(method), "n_max": levels.n_max, "budget": levels.budget.to_string(), "results": results}),
    );
    r.header = vec!["p".into(), "n".into(), "ask".into()];
    r.rows = rows;
    r.text = text;
    Ok(r)
}

fn validity_str(v: &Validity) -> String {
    match v {
        Validity::AllPrimes => "all primes".into(),
        Validity::OddPrimes => "odd primes".into(),
        Validity::PrimesAtLeast(k) => format!("p >= {k}"),
        Validity::LargePrimes(k) => format!("p >= {k} (sufficiently large p)"),
    }
}

fn kind_str(k: ZetaKind) -> &'static str {
    match k {
        ZetaKind::Ask => "ask",
        ZetaKind::Cc => "cc",
        ZetaKind::Oc => "oc",
    }
}

fn cmd_verify(source: &Source, levels: &Levels, form: Option<&str>, cross_check: bool, parallel: bool) -> Result<Report> {
    let (method, cfg) = engine(levels, parallel)?;
    let (module, entry): (MatrixModule, Option<CatalogEntry>) = match (&source.catalog, &source.input) {
        (Some(k), None) => match closed_form(k) {
            Ok(e) => match e.ask_module()? {
                Some(m) => (m, Some(e)),
                None => return input_error(format!("catalog entry {k} has no module to enumerate")),
            },
            Err(_) if form.is_some() => (catalog_module(k)?, None),
            Err(e) => return Err(e),
        },
        _ => (load_module(source)?.0, None),
    };
    let fixed = form.map(parse_qt).transpose()?;
    if fixed.is_none() && entry.is_none() {
        return input_error("no formula: pass --form or a catalog key with a closed form");
    }
    let mut results = Vec::new();
    let mut rows = Vec::new();
    let mut text = String::new();
    let mut first_mismatch: Option<(u64, usize)> = None;
    for &p in &levels.p {
        if fixed.is_none() {
            let e = entry.as_ref().expect("checked above");
            if !e.validity.holds_at(p) {
                results.push(json!({"p": p, "status": "skipped", "reason": format!("formula valid for {}", validity_str(&e.validity))}));
                rows.push(vec![p.to_string(), String::new(), String::new(), String::new(), "skipped".into()]);
                text += &format!("p={p}: skipped ({})\n", validity_str(&e.validity));
                continue;
            }
        }
        let w = match &fixed {
            Some(w) => w.clone(),
            None => entry.as_ref().expect("checked above").formula_at(p)?,
        };
        let got = ask_series(&module, p, levels.n_max, method, &cfg)?;
        if cross_check {
            let other = if method == Method::Orbit { Method::Average } else { Method::Orbit };
            let alt = ask_series(&module, p, levels.n_max, other, &cfg)?;
            if alt != got {
                return Err(AskError::Internal(format!("enumeration methods disagree at p = {p}")));
            }
        }
        let want = w.expand_at(p, levels.n_max as usize + 1)?;
        let mut per_n = Vec::new();
        for (n, (g, x)) in got.iter().zip(&want).enumerate() {
            let ok = g == x;
            if !ok && first_mismatch.is_none() {
                first_mismatch = Some((p, n));
            }
            rows.push(vec![p.to_string(), n.to_string(), ratio_str(g), ratio_str(x), if ok { "match" } else { "mismatch" }.into()]);
            per_n.push(json!({"n": n, "computed": rational_json(g), "expected": rational_json(x), "status": if ok { "match" } else { "mismatch" }}));
            text += &format!("p={p} n={n}: {} {} {}\n", ratio_str(g), if ok { "==" } else { "!=" }, ratio_str(x));
        }
        results.push(json!({"p": p, "levels": per_n}));
    }
    let mut json = json!({
        "module": module_summary(&module),
        "method": method_name(method),
        "n_max": levels.n_max,
        "formula": match &fixed { Some(w) => w.canonical(), None => entry.as_ref().map(|e| e.formula.clone()).unwrap_or_default() },
        "results": results,
        "match": first_mismatch.is_none(),
    });
    if let Some(e) = &entry {
        json["entry"] = json!({"key": e.key, "kind": kind_str(e.kind), "validity": validity_str(&e.validity)});
    }
    if let Some((p, n)) = first_mismatch {
        json["first_mismatch"] = json!({"p": p, "n": n});
        text += &format!("first mismatch at p={p}, n={n}\n");
    } else {
        text += "match\n";
    }
    let mut r = Report::new("verify", json);
    r.header = ["p", "n", "computed", "expected", "status"].map(String::from).to_vec();
    r.rows = rows;
    r.text = text;
    r.code = if first_mismatch.is_some() { EXIT_MISMATCH } else { EXIT_OK };
    Ok(r)
}

fn certificate_json(c: &Certificate) -> Value {
    json!({
        "status": format!("{:?}", c.status).to_lowercase(),
        "rank": c.rank,
        "degrees": c.degrees.iter().map(|d| json!({"degree": d.degree, "minors": d.minors, "span_dim": d.span_dim, "powers_in_span": d.powers_in_span})).collect::<Vec<_>>(),
        "excluded_primes": c.excluded_primes.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "non_isolated_primes": c.non_isolated_primes.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "witness": c.witness.as_ref().map(|w| w.iter().map(int_str).collect::<Vec<_>>()),
        "note": c.note,
    })
}

fn structure_text(r: &StructureReport) -> String {
    let mut t = format!("d={} e={} ell={} grk={} gor={}\n", r.d, r.e, r.ell, r.grk, r.gor);
    for (name, c) in [("o-maximal", &r.o_maximal), ("k-minimal", &r.k_minimal)] {
        t += &format!("{name}: {:?}", c.status).to_lowercase();
        if let Some(w) = &c.witness {
            t += &format!(" witness=({})", w.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
        }
        if !c.excluded_primes.is_empty() || !c.non_isolated_primes.is_empty() {
            let ps: Vec<String> = c.excluded_primes.iter().chain(&c.non_isolated_primes).map(|p| p.to_string()).collect();
            t += &format!(" excluded primes: {}", ps.join(","));
        }
        t += "\n";
    }
    if let Some(c) = &r.constant_rank {
        t += &format!("constant rank over F_{}: {} (ranks {:?})\n", c.q, c.constant, c.ranks_seen);
    }
    match &r.template {
        Some(tp) => t += &format!("template {}: {}\n", tp.label(), tp.formula()),
        None => t += "no template\n",
    }
    t
}

fn cmd_structure(source: &Source, q: Option<u64>, seed: u64) -> Result<Report> {
    let (m, _) = load_module(source)?;
    let opts = CertOptions { seed, ..CertOptions::default() };
    let rep = structure_report(&m, &opts, q)?;
    let json = json!({
        "module": module_summary(&m),
        "seed": seed,
        "grk": rep.grk,
        "gor": rep.gor,
        "o_maximal": certificate_json(&rep.o_maximal),
        "k_minimal": certificate_json(&rep.k_minimal),
        "constant_orbit_dim": format!("{:?}", rep.constant_orbit_dim).to_lowercase(),
        "constant_rank": rep.constant_rank.as_ref().map(|c| json!({"q": c.q, "constant": c.constant, "rank": c.rank, "ranks_seen": c.ranks_seen, "no_nonzero_elements": c.no_nonzero_elements})),
        "template": rep.template.as_ref().map(|t| json!({"label": t.label(), "formula": t.formula().canonical()})),
    });
    let mut r = Report::new("structure", json);
    r.header = vec!["field".into(), "value".into()];
    r.rows = vec![
        vec!["grk".into(), rep.grk.to_string()],
        vec!["gor".into(), rep.gor.to_string()],
        vec!["o_maximal".into(), format!("{:?}", rep.o_maximal.status).to_lowercase()],
        vec!["k_minimal".into(), format!("{:?}", rep.k_minimal.status).to_lowercase()],
        vec!["template".into(), rep.template.as_ref().map(|t| t.label()).unwrap_or_default()],
    ];
    r.text = structure_text(&rep);
    Ok(r)
}

/// An algebra from the source: a matrix realization when one exists, and
/// its `ad` module either way.
fn load_algebra(source: &Source) -> Result<(Option<NilpotentAlgebra>, MatrixModule, String)> {
    if let Some(k) = &source.catalog {
        if k.starts_with("L_") {
            let entry = lie_algebra(k)?;
            let ad = entry.constants.ad_module().with_label(&format!("ad({k})"));
            let alg = entry.realization.map(NilpotentAlgebra::new).transpose()?;
            return Ok((alg, ad, k.clone()));
        }
    }
    let (m, _) = load_module(source)?;
    let alg = NilpotentAlgebra::new(m)?;
    let ad = structure_constants(&alg.module)?.ad_module();
    let label = alg.module.label.clone().unwrap_or_else(|| "input".into());
    Ok((Some(alg), ad, label))
}

fn cmd_cc(source: &Source, levels: &Levels, no_direct: bool, parallel: bool) -> Result<Report> {
    let (method, cfg) = engine(levels, parallel)?;
    let (alg, ad, label) = load_algebra(source)?;
    let mut results = Vec::new();
    let mut rows = Vec::new();
    let mut text = String::new();
    let mut code = EXIT_OK;
    for &p in &levels.p {
        let mut warnings = Vec::new();
        if let Some(a) = &alg {
            if (p as u128) < a.d() as u128 {
                return input_error(format!("exp undefined: factorial denominators not invertible (p = {p} < d = {})", a.d()));
            }
            if askzeta::structural::non_isolated_primes(&a.module).contains(&p.into()) {
                warnings.push(format!("Theorem hypothesis violated: the algebra is not isolated at p = {p}"));
            }
        } else {
            warnings.push("no matrix realization; direct count unavailable".to_string());
        }
        let via = ask_series(&ad, p, levels.n_max, method, &cfg)?;
        let direct = match (&alg, no_direct) {
            (Some(a), false) => Some(cc_coefficients_direct(a, p, levels.n_max, &cfg)?),
            _ => None,
        };
        if let Some(dv) = &direct {
            let agree = dv.iter().zip(&via).all(|(x, y)| &BigRational::from_integer(x.clone()) == y);
            if !agree && warnings.is_empty() {
                code = EXIT_INTERNAL;
                warnings.push("direct count and ask(ad) disagree".into());
            }
        }
        for (n, v) in via.iter().enumerate() {
            let dstr = direct.as_ref().map(|d| d[n].to_string()).unwrap_or_default();
            rows.push(vec![p.to_string(), n.to_string(), ratio_str(v), dstr]);
        }
        text += &format!("p={p}: via ask(ad): {}", list_str(&via));
        if let Some(d) = &direct {
            text += &format!("; direct: {}", d.iter().map(BigInt::to_string).collect::<Vec<_>>().join(", "));
        }
        text += "\n";
        for w in &warnings {
            text += &format!("  warning: {w}\n");
        }
        results.push(json!({
            "p": p,
            "via_ask": via.iter().map(rational_json).collect::<Vec<_>>(),
            "direct": direct.as_ref().map(|d| d.iter().map(int_str).collect::<Vec<_>>()),
            "warnings": warnings,
        }));
    }
    let mut r = Report::new("cc", json!({"algebra": label, "ad": module_summary(&ad), "n_max": levels.n_max, "results": results}));
    r.header = ["p", "n", "via_ask", "direct"].map(String::from).to_vec();
    r.rows = rows;
    r.text = text;
    r.code = code;
    Ok(r)
}

enum OcSource {
    Group(GroupGenSet),
    Gl(usize),
    Algebra(NilpotentAlgebra),
}

fn load_oc_source(source: &Source) -> Result<OcSource> {
    if let Some(k) = &source.catalog {
        let (name, args) = askzeta::catalog::parse_key(k)?;
        match (name.as_str(), &args[..]) {
            ("GL", [d]) => return Ok(OcSource::Gl(*d)),
            ("neg", [d]) => return Ok(OcSource::Group(negation_group(*d))),
            ("swap", []) => return Ok(OcSource::Group(swap_group())),
            _ => {}
        }
        if let Some(inner) = k.strip_prefix("semidirect:") {
            return Ok(OcSource::Group(semidirect_embed(&catalog_module(inner)?)));
        }
    }
    if let Some(path) = &source.input {
        let v = schema::read_json(path)?;
        if schema::is_group(&v) {
            return Ok(OcSource::Group(schema::group_from_json(&v)?));
        }
    }
    Ok(OcSource::Algebra(NilpotentAlgebra::new(load_module(source)?.0)?))
}

fn cmd_oc(source: &Source, levels: &Levels, parallel: bool) -> Result<Report> {
    let (method, cfg) = engine(levels, parallel)?;
    let src = load_oc_source(source)?;
    let mut results = Vec::new();
    let mut rows = Vec::new();
    let mut text = String::new();
    let mut code = EXIT_OK;
    for &p in &levels.p {
        let (group, via) = match &src {
            OcSource::Group(g) => (g.clone(), None),
            OcSource::Gl(d) => (gl_generators(*d, p, levels.n_max)?, None),
            OcSource::Algebra(a) => {
                let g = exp_generators(a, p, levels.n_max)?;
                (g, Some(ask_series(&a.module, p, levels.n_max, method, &cfg)?))
            }
        };
        let counts = oc_coefficients(&group, p, levels.n_max, &cfg)?;
        let mut warnings = Vec::new();
        if let Some(v) = &via {
            if !counts.iter().zip(v).all(|(x, y)| &BigRational::from_integer(x.clone()) == y) {
                code = EXIT_INTERNAL;
                warnings.push("orbit counts and ask coefficients disagree".to_string());
            }
        }
        for (n, c) in counts.iter().enumerate() {
            rows.push(vec![p.to_string(), n.to_string(), c.to_string(), via.as_ref().map(|v| ratio_str(&v[n])).unwrap_or_default()]);
        }
        text += &format!("p={p}: {}", counts.iter().map(BigInt::to_string).collect::<Vec<_>>().join(", "));
        if let Some(v) = &via {
            text += &format!("; via ask: {}", list_str(v));
        }
        text += "\n";
        results.push(json!({
            "p": p,
            "counts": counts.iter().map(int_str).collect::<Vec<_>>(),
            "via_ask": via.as_ref().map(|v| v.iter().map(rational_json).collect::<Vec<_>>()),
            "warnings": warnings,
        }));
    }
    let label = match &src {
        OcSource::Group(g) => g.label.clone(),
        OcSource::Gl(d) => Some(format!("GL({d})")),
        OcSource::Algebra(a) => a.module.label.as_ref().map(|l| format!("exp({l})")),
    };
    let mut r = Report::new("oc", json!({"group": label, "n_max": levels.n_max, "results": results}));
    r.header = ["p", "n", "orbits", "via_ask"].map(String::from).to_vec();
    r.rows = rows;
    r.text = text;
    r.code = code;
    Ok(r)
}

fn cmd_feqn(form: Option<&str>, d: Option<i64>, catalog: Option<&str>) -> Result<Report> {
    let (holds, shown, degree) = match (form, catalog) {
        (Some(f), None) => {
            let Some(d) = d else { return input_error("--form needs --d") };
            let w = parse_qt(f)?;
            (functional_equation_check(&w, d), w.canonical(), d)
        }
        (None, Some(k)) => {
            let e = closed_form(k)?;
            let d = d.unwrap_or(e.feqn_degree);
            let holds = if d == e.feqn_degree { e.functional_equation_holds()? } else { functional_equation_check(&e.formula()?, d) };
            (holds, e.formula.clone(), d)
        }
        _ => return input_error("give exactly one of --form and --catalog"),
    };
    let msg = if holds { "functional equation holds" } else { "functional equation fails" };
    let mut r = Report::new("feqn", json!({"formula": shown, "d": degree, "holds": holds}));
    r.header = vec!["d".into(), "holds".into()];
    r.rows = vec![vec![degree.to_string(), holds.to_string()]];
    r.text = format!("{msg}\n");
    r.code = if holds { EXIT_OK } else { EXIT_MISMATCH };
    Ok(r)
}

fn entry_json(e: &CatalogEntry) -> Value {
    json!({
        "key": e.key,
        "kind": kind_str(e.kind),
        "formula": e.formula,
        "module": e.module_ref,
        "validity": validity_str(&e.validity),
        "feqn_degree": e.feqn_degree,
        "uses_point_count": e.uses_point_count,
    })
}

fn cmd_catalog(key: Option<&str>) -> Result<Report> {
    let Some(key) = key else {
        let entries = catalog_entries();
        let mut r = Report::new("catalog", json!({"entries": entries.iter().map(entry_json).collect::<Vec<_>>()}));
        r.header = ["key", "kind", "validity", "formula"].map(String::from).to_vec();
        for e in &entries {
            r.rows.push(vec![e.key.clone(), kind_str(e.kind).into(), validity_str(&e.validity), e.formula.clone()]);
            r.text += &format!("{:<16} {:<4} {}\n", e.key, kind_str(e.kind), e.formula);
        }
        return Ok(r);
    };
    let entry = closed_form(key).ok();
    let module = match &entry {
        Some(e) => e.module_ref.as_deref().map(catalog_module).transpose().ok().flatten(),
        None => Some(catalog_module(key)?),
    };
    let mut json = json!({"key": key});
    let mut text = String::new();
    if let Some(e) = &entry {
        json["entry"] = entry_json(e);
        text += &format!("{} [{}], valid for {}\n  {}\n", e.key, kind_str(e.kind), validity_str(&e.validity), e.formula);
        if let Ok(w) = e.formula() {
            json["canonical"] = json!(w.canonical());
        }
    }
    if let Some(m) = &module {
        json["module_json"] = module_to_json(m, key.starts_with("L_"));
        text += &format!("module: d={} e={} ell={}\n", m.d, m.e, m.ell());
    }
    let mut r = Report::new("catalog", json);
    r.header = vec!["key".into(), "formula".into()];
    r.rows = vec![vec![key.to_string(), entry.map(|e| e.formula).unwrap_or_default()]];
    r.text = text;
    Ok(r)
}

fn cmd_brenti(n: u32, order: usize) -> Result<Report> {
    let b = brenti_polynomial(n)?;
    let identity = if n <= 6 { Some(brenti_identity_check(n, order)?) } else { None };
    let w: QTRational = parse_qt(&format!("({})/(1 - T)^{}", brenti_at_minus_q_inv(&b), n + 1))?;
    let json = json!({
        "n": n,
        "coefficients": b.iter().map(|row| row.iter().map(int_str).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "at_minus_q_inv": brenti_at_minus_q_inv(&b),
        "diag_formula": w.canonical(),
        "identity_order": order,
        "identity_holds": identity,
    });
    let mut r = Report::new("brenti", json);
    r.header = vec!["k".into(), "coefficients".into()];
    for (k, row) in b.iter().enumerate() {
        r.rows.push(vec![k.to_string(), row.iter().map(BigInt::to_string).collect::<Vec<_>>().join(" ")]);
    }
    r.text = format!("B_{n}(-1/q, T) = {}\ndiag({n}): {}\n", brenti_at_minus_q_inv(&b), w);
    if let Some(h) = identity {
        r.text += &format!("identity to order {order}: {}\n", if h { "holds" } else { "fails" });
    }
    r.code = if identity == Some(false) { EXIT_INTERNAL } else { EXIT_OK };
    Ok(r)
}
