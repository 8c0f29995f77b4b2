use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use rfk_core::cy_pairing::{
    chain_pairings, cy_scalar, default_generators, frobenius_category, frobenius_input, pairing_nondegenerate,
    spanning_chains, standard_traces, trace_pairing, verify_diagram, zigzag_a2, FiniteCategoryPresentation,
    PairingData,
};
use rfk_core::ginzburg::{condition3_report, TreeQuiver};
use rfk_core::limit_systems::{
    cotelescope, direct_limit_homology, inverse_limit_homology, quotient_tower_chain, telescope, DirectedSystem,
};
use rfk_core::popsicle::{census, Family, PopsicleType};
use rfk_core::rabinowitz::build_rfc_from_system;
use rfk_core::random::{random_system, rng};
use rfk_core::reeb_period::{
    degree_windows, good_pair_check, profile_report, rs_index, Block, HamiltonianProfile, SymplecticBlockPath,
};
use rfk_core::selftest::{self, SCHEMA_VERSION};
use rfk_core::{Error, Field, Rat};

#[derive(Parser)]
#[command(name = "rfk", version, about = "Exact chain-level computations for Rabinowitz Fukaya categories")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// q or fp:P
    #[arg(long, global = true, default_value = "q")]
    field: String,
    /// Degree window LO HI
    #[arg(long, global = true, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    window: Option<Vec<i64>>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, global = true, default_value_t = selftest::DEFAULT_SEED)]
    seed: u64,
    /// Write the report into this directory instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PairingMode {
    Scalar,
    Diagram,
    Nondegenerate,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Fixture {
    Zigzag,
    Frobenius,
}

#[derive(Subcommand)]
enum Cmd {
    /// Finiteness, unit and nonvanishing report for the Ginzburg algebra of a tree quiver
    Ginzburg {
        #[arg(long)]
        quiver: PathBuf,
        /// overrides `n` from the quiver file (default 3)
        #[arg(long)]
        n: Option<i64>,
    },
    /// Telescope and cotelescope homology against the limit dimensions
    Limits {
        /// directed system as JSON; a seeded random system when omitted
        #[arg(long)]
        system: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        levels: usize,
    },
    /// Rabinowitz complex of a directed system
    Rabinowitz {
        #[arg(long)]
        system: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        levels: usize,
        #[arg(long, default_value_t = 3)]
        n: i64,
    },
    /// Codimension-one census of a popsicle type
    Popsicle {
        #[arg(long)]
        k: usize,
        /// sprinkled inputs, comma separated
        #[arg(long, value_delimiter = ',')]
        flavor: Vec<usize>,
    },
    /// Calabi-Yau pairing checks
    Pairing {
        #[arg(long, value_enum)]
        mode: PairingMode,
        #[arg(long, default_value_t = 3)]
        n: i64,
        #[arg(long, value_enum, default_value_t = Fixture::Zigzag)]
        fixture: Fixture,
        /// category as JSON, replacing the fixture
        #[arg(long)]
        category: Option<PathBuf>,
        /// second pairing as JSON (scalar mode) or the pairing to test
        #[arg(long)]
        pairing: Option<PathBuf>,
        /// scalar applied to the trace pairing when no pairing file is given
        #[arg(long, default_value = "2")]
        scale: String,
        /// chain-level fixture with identity continuation (diagram mode)
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        continuation: bool,
    },
    /// Actions, chord radii, Robbin-Salamon indices and degree windows
    Reeb {
        /// profile TOML; the quadratic profile when omitted
        #[arg(long)]
        profile: Option<PathBuf>,
        /// larger profile of a good pair
        #[arg(long)]
        pair: Option<PathBuf>,
        /// chord periods, comma separated rationals
        #[arg(long, value_delimiter = ',')]
        spec: Vec<String>,
        /// block path: `;`-separated blocks, each `t:theta,...` nodes or `hyp:LAMBDA`
        #[arg(long)]
        maslov: Option<String>,
        #[arg(long, num_args = 4, value_names = ["A", "B", "MU", "D"], allow_negative_numbers = true)]
        windows: Option<Vec<i64>>,
    },
    /// Run the acceptance suite
    Selftest,
}

struct Report {
    name: &'static str,
    pass: bool,
    /// module, operation and witness of the first failure
    failure: Option<String>,
    json: Value,
    csv: String,
    table: String,
}

enum Failure {
    Input(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Failure {
        Failure::Input(format!("{e:#}"))
    }
}

fn core(module: &str, e: Error) -> Failure {
    Failure::Input(format!("{module}: {e}"))
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(Failure::from)
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = read(path)?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn parse_rat(s: &str) -> Result<Rat, Failure> {
    s.trim().parse().map_err(|e| Failure::Input(format!("bad rational {s:?}: {e}")))
}

fn window(cli: &Cli, default: (i64, i64)) -> Result<(i64, i64), Failure> {
    match &cli.window {
        None => Ok(default),
        Some(w) if w[0] <= w[1] => Ok((w[0], w[1])),
        Some(w) => Err(Failure::Input(format!("empty window {} {}", w[0], w[1]))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let field = match Field::parse(&cli.field) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: field: {e}");
            return ExitCode::from(2);
        }
    };
    let result = match &cli.cmd {
        Cmd::Ginzburg { quiver, n } => ginzburg(&cli, field, quiver, *n),
        Cmd::Limits { system, levels } => limits(&cli, field, system.as_deref(), *levels),
        Cmd::Rabinowitz { system, levels, n } => rabinowitz(&cli, field, system.as_deref(), *levels, *n),
        Cmd::Popsicle { k, flavor } => popsicle(*k, flavor),
        Cmd::Pairing { mode, n, fixture, category, pairing: pfile, scale, continuation } => pairing(
            field,
            *mode,
            *n,
            *fixture,
            category.as_deref(),
            pfile.as_deref(),
            scale,
            *continuation,
        ),
        Cmd::Reeb { profile, pair, spec, maslov, windows } => {
            reeb(profile.as_deref(), pair.as_deref(), spec, maslov.as_deref(), windows.as_deref())
        }
        Cmd::Selftest => Ok(selftest_report(cli.seed)),
    };
    let report = match result {
        Ok(r) => r,
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = emit(&cli, &report) {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    if report.pass {
        eprintln!("{}: PASS", report.name);
        ExitCode::SUCCESS
    } else {
        eprintln!("{}: FAIL {}", report.name, report.failure.as_deref().unwrap_or(""));
        ExitCode::from(1)
    }
}

fn emit(cli: &Cli, r: &Report) -> anyhow::Result<()> {
    let (body, ext) = match cli.format {
        Format::Json => {
            let v = json!({
                "schema_version": SCHEMA_VERSION,
                "command": r.name,
                "field": cli.field,
                "pass": r.pass,
                "failure": r.failure,
                "report": r.json,
            });
            (serde_json::to_string_pretty(&v)? + "\n", "json")
        }
        Format::Csv => (r.csv.clone(), "csv"),
        Format::Table => (r.table.clone(), "txt"),
    };
    match &cli.out {
        None => {
            use std::io::Write;
            match std::io::stdout().lock().write_all(body.as_bytes()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return Err(e.into()),
                _ => {}
            }
        }
        Some(dir) => {
            std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            let path = dir.join(format!("{}.{ext}", r.name));
            std::fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
        }
    }
    Ok(())
}

fn ginzburg(cli: &Cli, field: Field, quiver: &Path, n: Option<i64>) -> Result<Report, Failure> {
    let text = read(quiver)?;
    let (q, file_n) = TreeQuiver::from_toml(&text).map_err(|e| core(&format!("ginzburg {}", quiver.display()), e))?;
    let n = n.or(file_n).unwrap_or(3);
    let win = window(cli, (-6, 0))?;
    let r = condition3_report(&q, n, win, field).map_err(|e| core("ginzburg", e))?;
    let failure = if r.pass {
        None
    } else if !r.finite {
        Some(format!("ginzburg finiteness: path length {} above bound {}", r.max_path_length, r.length_bound))
    } else if !r.unit_ok {
        Some("ginzburg unit: some H^0(e_v G e_v) is not one-dimensional".into())
    } else if let Some(s) = r.shortest.iter().find(|s| !s.nonzero) {
        Some(format!("ginzburg shortest path {} -> {} ({}) in degree {}", s.v, s.w, s.path, s.degree))
    } else {
        Some("ginzburg adjacency: an arrow class vanishes".into())
    };
    let mut table = format!("n = {n}, window [{}, {}], field {}\n", win.0, win.1, field.name());
    for c in &r.cells {
        let dims: Vec<String> = c.cohomology.iter().map(|(d, h)| format!("{d}:{h}")).collect();
        let _ = writeln!(table, "{} -> {}  {}", c.v, c.w, dims.join(" "));
    }
    let _ = writeln!(table, "verdict: {}", if r.pass { "PASS" } else { "FAIL" });
    Ok(Report { name: "ginzburg", pass: r.pass, failure, json: r.to_json(), csv: r.csv(), table })
}

fn load_system(field: Field, path: Option<&Path>, levels: usize, seed: u64) -> Result<(DirectedSystem, usize), Failure> {
    match path {
        Some(p) => {
            let v = read_json(p)?;
            let sys = DirectedSystem::from_json(field, &v).map_err(|e| core("limit_systems", e))?;
            let ws = sys.levels().keys();
            let w = ws.clone().max().copied().unwrap_or(0).min(-ws.min().copied().unwrap_or(0));
            if w < 1 {
                return Err(Failure::Input("limit_systems: system needs levels -W..=W with W >= 1".into()));
            }
            Ok((sys, w as usize))
        }
        None => {
            if levels < 1 {
                return Err(Failure::Input("limit_systems: --levels must be at least 1".into()));
            }
            let mut r = rng(seed);
            Ok((random_system(&mut r, field, levels as i64, 6), levels))
        }
    }
}

fn dims_json(m: &std::collections::BTreeMap<i64, usize>) -> Value {
    m.iter().map(|(k, v)| (k.to_string(), json!(v))).collect::<serde_json::Map<_, _>>().into()
}

fn limits(cli: &Cli, field: Field, path: Option<&Path>, levels: usize) -> Result<Report, Failure> {
    let (sys, w) = load_system(field, path, levels, cli.seed)?;
    let tel = telescope(&sys, w).map_err(|e| core("limit_systems telescope", e))?;
    let cot = cotelescope(&sys, w).map_err(|e| core("limit_systems cotelescope", e))?;
    let tower = quotient_tower_chain(&sys, w as i64, &Default::default()).map_err(|e| core("limit_systems", e))?;
    let mut ks: BTreeSet<i64> = sys.degrees().into_iter().collect();
    ks.extend(tel.degrees());
    ks.extend(cot.degrees());
    if let Some(win) = &cli.window {
        ks.retain(|k| *k >= win[0] && *k <= win[1]);
    }
    let mut rows = Vec::new();
    let mut failure = None;
    let mut csv = String::from("degree,telescope,direct_limit,direct_stable,cotelescope,inverse_limit,inverse_stable\n");
    let mut table = String::from("deg  tel  lim  stable  cot  lim  stable\n");
    for k in ks {
        let d = direct_limit_homology(&sys, k, w).map_err(|e| core("limit_systems", e))?;
        let i = inverse_limit_homology(&sys, k, w).map_err(|e| core("limit_systems", e))?;
        let (t, c) = (tel.homology_dim(k), cot.homology_dim(k));
        if (d.stabilized_at.is_some() || w == 1) && d.dimension != t && failure.is_none() {
            failure = Some(format!("limit_systems direct_limit_homology: degree {k}, telescope {t}, limit {}", d.dimension));
        }
        if i.stabilized_at.is_some() && i.dimension != c && failure.is_none() {
            failure = Some(format!("limit_systems inverse_limit_homology: degree {k}, cotelescope {c}, limit {}", i.dimension));
        }
        let _ = writeln!(csv, "{k},{t},{},{:?},{c},{},{:?}", d.dimension, d.stabilized_at, i.dimension, i.stabilized_at);
        let _ = writeln!(table, "{k:>3}  {t:>3}  {:>3}  {:>6}  {c:>3}  {:>3}  {:>6}", d.dimension, fmt_opt(d.stabilized_at), i.dimension, fmt_opt(i.stabilized_at));
        rows.push(json!({"degree": k, "telescope": t, "cotelescope": c, "direct": d, "inverse": i}));
    }
    if !tower.certified() && failure.is_none() {
        failure = Some(format!("limit_systems quotient_tower: step {:?}", tower.first_failure()));
    }
    let _ = writeln!(table, "quotient tower: {}", if tower.certified() { "certified" } else { "FAIL" });
    Ok(Report {
        name: "limits",
        pass: failure.is_none(),
        failure,
        json: json!({
            "window": w,
            "degrees": rows,
            "telescope_homology": dims_json(&tel.homology()),
            "cotelescope_homology": dims_json(&cot.homology()),
            "tower_steps": tower.steps,
            "tower_certified": tower.certified(),
        }),
        csv,
        table,
    })
}

fn fmt_opt(x: Option<i64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_else(|| "-".into())
}

fn rabinowitz(cli: &Cli, field: Field, path: Option<&Path>, levels: usize, n: i64) -> Result<Report, Failure> {
    let (sys, w) = load_system(field, path, levels, cli.seed)?;
    let rfc = build_rfc_from_system(&sys, w, n).map_err(|e| core("rabinowitz build_rfc", e))?;
    let les = rfc
        .long_exact_sequence()
        .and_then(|l| l.verify())
        .map_err(|e| core("rabinowitz long_exact_sequence", e))?;
    let bounds = rfc.continuation_rank_bound().map_err(|e| core("rabinowitz", e))?;
    let failure = if !rfc.ses.pass {
        Some("rabinowitz short exact sequence: not exact".to_string())
    } else if !les.pass {
        Some(format!("rabinowitz long exact sequence: {:?}", les.failures().first()))
    } else if !rfc.dimension_identity() {
        Some("rabinowitz dimension identity fails".to_string())
    } else {
        bounds.iter().find(|b| !b.ok).map(|b| format!("rabinowitz continuation_rank_bound: degree {}", b.degree))
    };
    let mut j = rfc.to_json();
    j["les_exact"] = json!(les.pass);
    j["rank_bounds"] = serde_json::to_value(&bounds).unwrap_or(Value::Null);
    let rfh = rfc.homology();
    let mut csv = String::from("degree,rfh,hw_upper,cw_lower_cohomological\n");
    let mut table = String::from("deg  RFH  HW^  HW_(n-deg)\n");
    let ks: BTreeSet<i64> = rfh.keys().chain(rfc.cw_plus.degrees().iter()).copied().collect();
    for k in ks {
        let (a, b, c) = (rfh.get(&k).copied().unwrap_or(0), rfc.cw_plus.homology_dim(k), rfc.cw_minus.homology_dim(k));
        let _ = writeln!(csv, "{k},{a},{b},{c}");
        let _ = writeln!(table, "{k:>3}  {a:>3}  {b:>3}  {c:>3}");
    }
    Ok(Report { name: "rabinowitz", pass: failure.is_none(), failure, json: j, csv, table })
}

fn popsicle(k: usize, flavor: &[usize]) -> Result<Report, Failure> {
    let t = PopsicleType::unweighted(k, flavor).map_err(|e| core("popsicle", e))?;
    let c = census(&t).map_err(|e| core("popsicle census", e))?;
    let expect = k as i64 - 2 + flavor.iter().collect::<BTreeSet<_>>().len() as i64;
    let failure = (c.dimension != expect).then(|| format!("popsicle moduli_dim: {} != {expect}", c.dimension));
    let mut csv = String::from("i,j,f1,family,outer\n");
    for s in &c.strata {
        let f1: Vec<String> = s.f1.iter().map(|x| x.to_string()).collect();
        let outer: Vec<String> = s.outer_labels.iter().map(|l| l.to_string()).collect();
        let fam = if s.family == Family::One { 1 } else { 2 };
        let _ = writeln!(csv, "{},{},\"{}\",{fam},\"{}\"", s.i, s.j, f1.join(" "), outer.join(" "));
    }
    Ok(Report { name: "popsicle", pass: failure.is_none(), failure, json: c.to_json(), csv, table: c.table() })
}

#[allow(clippy::too_many_arguments)]
fn pairing(
    field: Field,
    mode: PairingMode,
    n: i64,
    fixture: Fixture,
    category: Option<&Path>,
    pairing: Option<&Path>,
    scale: &str,
    continuation: bool,
) -> Result<Report, Failure> {
    let m = |e: Error| core("cy_pairing", e);
    if mode == PairingMode::Diagram {
        let input = frobenius_input(field, n, continuation).map_err(m)?;
        let p = chain_pairings(&input).map_err(m)?;
        let r = verify_diagram(&p, &input).map_err(m)?;
        let failure = if r.pass() {
            None
        } else {
            Some(match r.failures().first() {
                Some((sq, k)) => format!("cy_pairing verify_diagram: square {sq} at degree {k}"),
                None => "cy_pairing verify_diagram: five lemma not certified".into(),
            })
        };
        let mut csv = String::from("square,degree,commutes\n");
        let mut table = String::new();
        for s in &r.squares {
            let ok = s.first && s.second;
            let _ = writeln!(csv, "first,{},{}", s.degree, s.first);
            let _ = writeln!(csv, "second,{},{}", s.degree, s.second);
            let _ = writeln!(table, "degree {:>3}: {}", s.degree, if ok { "both squares commute" } else { "FAIL" });
        }
        let _ = writeln!(table, "five lemma: {}", if r.five_lemma_certified { "certified" } else { "not certified" });
        return Ok(Report { name: "pairing", pass: failure.is_none(), failure, json: r.to_json(), csv, table });
    }
    let cat = match category {
        Some(p) => FiniteCategoryPresentation::from_json(field, &read_json(p)?).map_err(m)?,
        None => match fixture {
            Fixture::Zigzag => zigzag_a2(field, n).map_err(m)?,
            Fixture::Frobenius => frobenius_category(field, n).map_err(m)?,
        },
    };
    cat.validate().map_err(m)?;
    let trace = trace_pairing(&cat, &standard_traces(&cat).map_err(m)?).map_err(m)?;
    let other = match pairing {
        Some(p) => PairingData::from_json(field, &read_json(p)?).map_err(m)?,
        None => trace.scaled(&field.from_rat(&parse_rat(scale)?).map_err(m)?),
    };
    match mode {
        PairingMode::Nondegenerate => {
            let rows = pairing_nondegenerate(&cat, &other);
            let mut csv = String::from("i,j,k,rows,cols,rank,nondegenerate\n");
            let mut table = String::new();
            let mut failure = None;
            for ((i, j, k), nd) in &rows {
                let _ = writeln!(csv, "{i},{j},{k},{},{},{},{}", nd.rows, nd.cols, nd.rank, nd.nondegenerate);
                let _ = writeln!(table, "({i},{j},{k:>2}) {}x{} rank {} {}", nd.rows, nd.cols, nd.rank, if nd.nondegenerate { "ok" } else { "DEGENERATE" });
                if !nd.nondegenerate && failure.is_none() {
                    failure = Some(format!("cy_pairing nondegenerate: block ({i},{j},{k}) rank {} of {}x{}", nd.rank, nd.rows, nd.cols));
                }
            }
            let json = json!(rows.iter().map(|((i, j, k), nd)| json!({"i": i, "j": j, "k": k, "check": nd})).collect::<Vec<_>>());
            Ok(Report { name: "pairing", pass: failure.is_none(), failure, json, csv, table })
        }
        PairingMode::Scalar => {
            let gens = default_generators(&cat).map_err(m)?;
            let chains = spanning_chains(&cat).map_err(m)?;
            match cy_scalar(&cat, &trace, &other, &gens, &chains) {
                Ok(r) => {
                    let c = field.format(&r.c);
                    Ok(Report {
                        name: "pairing",
                        pass: true,
                        failure: None,
                        json: r.to_json(field),
                        csv: format!("c\n{c}\n"),
                        table: format!("c = {c} over {} links\n", r.links.len()),
                    })
                }
                Err(e @ (Error::Inconsistent { .. } | Error::HypothesisFailed(_))) => {
                    let w = format!("cy_pairing cy_scalar: {e}");
                    Ok(Report {
                        name: "pairing",
                        pass: false,
                        failure: Some(w.clone()),
                        json: json!({ "error": e.to_string() }),
                        csv: format!("error\n\"{w}\"\n"),
                        table: format!("{w}\n"),
                    })
                }
                Err(e) => Err(m(e)),
            }
        }
        PairingMode::Diagram => unreachable!(),
    }
}

fn parse_path(s: &str) -> Result<SymplecticBlockPath, Failure> {
    let mut blocks = Vec::new();
    for b in s.split(';').map(str::trim).filter(|b| !b.is_empty()) {
        if let Some(l) = b.strip_prefix("hyp:") {
            blocks.push(Block::Hyperbolic(parse_rat(l)?));
            continue;
        }
        let mut nodes = Vec::new();
        for node in b.split(',') {
            let (t, th) = node
                .split_once(':')
                .ok_or_else(|| Failure::Input(format!("reeb: node {node:?} is not t:theta")))?;
            nodes.push((parse_rat(t)?, parse_rat(th)?));
        }
        blocks.push(Block::Rotation(nodes));
    }
    SymplecticBlockPath::new(blocks).map_err(|e| core("reeb_period", e))
}

fn reeb(
    profile: Option<&Path>,
    pair: Option<&Path>,
    spec: &[String],
    maslov: Option<&str>,
    windows: Option<&[i64]>,
) -> Result<Report, Failure> {
    let m = |e: Error| core("reeb_period", e);
    let load = |p: &Path| -> Result<HamiltonianProfile, Failure> {
        HamiltonianProfile::from_toml(&read(p)?).map_err(|e| core(&format!("reeb_period {}", p.display()), e))
    };
    let p = match profile {
        Some(path) => load(path)?,
        None => HamiltonianProfile::quadratic(),
    };
    let spec: Vec<Rat> = spec.iter().map(|s| parse_rat(s)).collect::<Result<_, _>>()?;
    let mut out = serde_json::Map::new();
    let mut table = String::new();
    let mut csv = String::from("kind,key,value\n");
    let mut failure = None;
    let prof = profile_report(&p, &spec).map_err(m)?;
    let _ = writeln!(table, "slope {} kink {} kink action {}", p.slope(), p.kink(), prof["kink_action"].as_str().unwrap_or(""));
    for c in prof["chords"].as_array().into_iter().flatten() {
        let _ = writeln!(table, "chord T = {} at r = {} action {}", c["period"].as_str().unwrap_or(""), c["radius"].as_str().unwrap_or(""), c["action"].as_str().unwrap_or(""));
        let _ = writeln!(csv, "chord,{},{}", c["period"].as_str().unwrap_or(""), c["action"].as_str().unwrap_or(""));
    }
    out.insert("profile".into(), prof);
    if let Some(path) = pair {
        let big = load(path)?;
        let r = good_pair_check(&p, &big, &spec).map_err(m)?;
        let _ = writeln!(table, "good pair: {} window agrees: {}", r.good, r.window_agrees);
        let _ = writeln!(csv, "good_pair,good,{}", r.good);
        let _ = writeln!(csv, "good_pair,window_agrees,{}", r.window_agrees);
        if r.good && !r.window_agrees {
            failure = Some(format!("reeb_period good_pair_check: chords differ above action {}", r.window_low));
        }
        out.insert("good_pair".into(), serde_json::to_value(&r).unwrap_or(Value::Null));
    }
    if let Some(s) = maslov {
        let path = parse_path(s)?;
        let v = rs_index(&path).map_err(m)?;
        let _ = writeln!(table, "rs index {v}");
        let _ = writeln!(csv, "rs_index,doubled,{}", v.doubled);
        out.insert("rs_index".into(), json!({"value": v.to_string(), "doubled": v.doubled}));
    }
    if let Some(w) = windows {
        let (a, b, mu, d) = (w[0], w[1], w[2], w[3]);
        let r = degree_windows(mu, a, b, d).map_err(m)?;
        let _ = writeln!(table, "iterates m with degree {d} in window: {:?} (bound {})", r.iterates, r.bound());
        let list: Vec<String> = r.iterates.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(csv, "degree_windows,iterates,\"{}\"", list.join(" "));
        if r.iterates.len() as i64 > r.bound() {
            failure = Some(format!("reeb_period degree_windows: {} iterates above bound {}", r.iterates.len(), r.bound()));
        }
        out.insert("degree_windows".into(), serde_json::to_value(&r).unwrap_or(Value::Null));
    }
    Ok(Report { name: "reeb", pass: failure.is_none(), failure, json: out.into(), csv, table })
}

fn selftest_report(seed: u64) -> Report {
    let r = selftest::run(seed);
    let failure = r
        .criteria
        .iter()
        .find(|c| !c.pass)
        .map(|c| format!("selftest criterion {} ({}): {}", c.id, c.name, c.detail));
    let j = r.to_json();
    Report { name: "selftest", pass: r.pass(), failure, json: j["criteria"].clone(), csv: r.csv(), table: r.table() }
}
