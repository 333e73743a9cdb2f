use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use penning_core::emit::{format_g, write_csv, write_factor_csv, write_pgm, CSV_DIGITS};
use penning_core::landscape::{objective_gradient, LandscapeResult};
use penning_core::scenario::{load_table, read_input, ProcessSelection};
use penning_core::symmetry::InvarianceReport;
use penning_core::{
    d_matrix, phase_only_factor, refine_extremum, rotate_axis, scan_with_threads, verify_rotation_invariance, wigner_d,
    Axis, ChannelTable, Composer, CompositionResult, Error, Extremum, GridSpec, Objective, PreparedState, ProductState,
    ScenarioConfig, StateSpec, TwiceInt,
};
use serde_json::{json, Value};

use crate::{GridArgs, ObjectiveArg, OptimizeArgs, ProcessArg, ScanArgs, ScenarioArgs, SymmetryArgs, WignerArgs};

pub const EXIT_PARSE: u8 = 2;
pub const EXIT_PHYSICS: u8 = 3;
pub const EXIT_IO: u8 = 4;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: Option<String>,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: Some(message.into()) }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Input { .. } | Error::Parse(_) => EXIT_PARSE,
            Error::Io(_) => EXIT_IO,
            _ => EXIT_PHYSICS,
        };
        Failure::new(code, e.to_string())
    }
}

type CmdResult = std::result::Result<(), Failure>;

pub struct Output {
    pub json: bool,
    pub threads: Option<usize>,
}

impl Output {
    fn emit_json(&self, value: &Value) {
        println!("{}", serde_json::to_string_pretty(value).expect("JSON values always serialize"));
    }
}

fn write_file(path: &Path, body: impl FnOnce(&mut BufWriter<File>) -> io::Result<()>) -> CmdResult {
    let fail = |e: io::Error| Failure::new(EXIT_IO, format!("cannot write {}: {e}", path.display()));
    let mut w = BufWriter::new(File::create(path).map_err(fail)?);
    body(&mut w).map_err(fail)?;
    w.flush().map_err(fail)
}

impl From<ProcessArg> for ProcessSelection {
    fn from(p: ProcessArg) -> Self {
        match p {
            ProcessArg::Pi => ProcessSelection::Pi,
            ProcessArg::Ai => ProcessSelection::Ai,
            ProcessArg::Both => ProcessSelection::Both,
        }
    }
}

impl From<ObjectiveArg> for Objective {
    fn from(o: ObjectiveArg) -> Self {
        match o {
            ObjectiveArg::Pi => Objective::Pi,
            ObjectiveArg::Ai => Objective::Ai,
            ObjectiveArg::Ratio => Objective::Ratio,
        }
    }
}

struct Scenario {
    config: ScenarioConfig,
    base: Option<PathBuf>,
    table: ChannelTable,
    state: PreparedState,
}

impl Scenario {
    fn resolve(args: &ScenarioArgs) -> std::result::Result<Self, Failure> {
        let (mut config, base) = match &args.config {
            Some(path) => {
                let (cfg, base) = ScenarioConfig::load(path)?;
                (cfg, Some(base))
            }
            None => {
                let state = if let (Some(eta_rad), Some(xi_rad)) = (args.eta_rad, args.xi_rad) {
                    StateSpec::Hopf { eta_rad, xi_rad }
                } else if let Some(beta_rad) = args.beta_rad {
                    if args.molecular {
                        StateSpec::MolecularPhase { beta_rad }
                    } else {
                        StateSpec::AtomicPhase { beta_rad }
                    }
                } else if let Some(path) = &args.state {
                    serde_json::from_str(&read_input(path)?).map_err(Error::from)?
                } else {
                    return Err(Failure::new(EXIT_PARSE, "no state given"));
                };
                let table = args.table.clone().unwrap_or_else(|| default_table(&state).to_string());
                let config = ScenarioConfig {
                    system: None,
                    table,
                    state,
                    process: ProcessSelection::Both,
                    channel_overrides: Vec::new(),
                    synthetic_cross_terms: Vec::new(),
                };
                (config, None)
            }
        };
        if let Some(p) = args.process {
            config.process = p.into();
        }
        let table = config.table(base.as_deref())?;
        let state = config.state.build()?;
        Ok(Scenario { config, base, table, state })
    }

    fn composer(&self) -> Composer<'_> {
        Composer::new(&self.table).with_synthetic(self.config.synthetic_cross_terms.iter().copied())
    }

    /// Scenario with the state written out amplitude by amplitude and an
    /// absolute table reference.
    fn explicit(&self) -> std::result::Result<ScenarioConfig, Failure> {
        Ok(ScenarioConfig {
            table: self.config.absolute_table_ref(self.base.as_deref()),
            state: StateSpec::explicit(&self.state)?,
            ..self.config.clone()
        })
    }
}

fn default_table(state: &StateSpec) -> &'static str {
    match state {
        StateSpec::Hopf { .. } | StateSpec::Superposition(_) => "bundled:ne_ar_50mK",
        _ => "bundled:he_li",
    }
}

fn result_json(r: &CompositionResult, process: ProcessSelection) -> Value {
    let mut v = json!({
        "weights": r.weights.iter().map(|(k, w)| json!({"key": k, "weight": w})).collect::<Vec<_>>(),
        "surviving_cross_terms": r.surviving_cross_terms,
        "imaginary_residual": r.imaginary_residual,
    });
    if process != ProcessSelection::Ai {
        v["sigma_pi_au"] = json!(r.sigma_pi);
    }
    if process != ProcessSelection::Pi {
        v["sigma_ai_au"] = json!(r.sigma_ai);
    }
    if process == ProcessSelection::Both {
        v["ratio_ai_pi"] = r.ratio_ai_pi().map_or(Value::Null, |x| json!(x));
    }
    v
}

fn pair_text(p: &penning_core::ChannelPairKey) -> String {
    format!("({}, {}) x ({}, {})", p.s.0, p.s.1, p.s_prime.0, p.s_prime.1)
}

pub fn compose(out: &Output, args: &ScenarioArgs) -> CmdResult {
    let sc = Scenario::resolve(args)?;
    let r = sc.composer().compose(&sc.state)?;
    let process = sc.config.process;
    if out.json {
        let mut v = serde_json::to_value(sc.explicit()?).map_err(Error::from)?;
        v["result"] = result_json(&r, process);
        out.emit_json(&v);
        return Ok(());
    }
    println!("table: {} ({})", sc.config.table, sc.table.system());
    if process != ProcessSelection::Ai {
        println!("sigma_PI: {:.6} a.u.", r.sigma_pi);
    }
    if process != ProcessSelection::Pi {
        println!("sigma_AI: {:.6} a.u.", r.sigma_ai);
    }
    if process == ProcessSelection::Both {
        match r.ratio_ai_pi() {
            Ok(x) => println!("ratio AI/PI: {x:.6}"),
            Err(_) => println!("ratio AI/PI: undefined (sigma_PI = 0)"),
        }
    }
    println!("channel weights:");
    for (k, w) in &r.weights {
        println!("  {k}: {w:.6}");
    }
    if r.surviving_cross_terms.is_empty() {
        println!("surviving cross terms: none");
    } else {
        println!("surviving cross terms:");
        for p in &r.surviving_cross_terms {
            println!("  {}", pair_text(p));
        }
    }
    Ok(())
}

fn grid(args: &GridArgs) -> std::result::Result<(ChannelTable, GridSpec), Failure> {
    let table = load_table(&args.table, None)?;
    let spec = GridSpec::new(args.eta_points, args.xi_points, args.objective.into())?;
    Ok((table, spec))
}

fn run_scan(out: &Output, table: &ChannelTable, spec: &GridSpec) -> std::result::Result<LandscapeResult, Failure> {
    let threads = out.threads.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    Ok(scan_with_threads(table, spec, threads)?)
}

fn params_json(eta: f64, xi: f64) -> Value {
    json!({"eta_rad": eta, "xi_rad": xi})
}

pub fn scan(out: &Output, args: &ScanArgs) -> CmdResult {
    let (table, spec) = grid(&args.grid)?;
    let expected = args.expect_range.as_ref().map(|v| (v[0], v[1]));
    if let Some((lo, hi)) = expected {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(Failure::new(EXIT_PARSE, format!("--expect-range needs LO <= HI, got {lo} {hi}")));
        }
    }
    let r = run_scan(out, &table, &spec)?;
    if let Some(path) = &args.csv {
        write_file(path, |w| write_csv(&r, w))?;
    }
    if let Some(path) = &args.pgm {
        write_file(path, |w| write_pgm(&r, w))?;
    }
    if out.json {
        let mut v = json!({
            "table": args.grid.table,
            "objective": spec.objective,
            "eta_points": spec.eta_points,
            "xi_points": spec.xi_points,
            "max": r.max,
            "argmax": params_json(r.argmax.eta, r.argmax.xi),
            "min": r.min,
            "argmin": params_json(r.argmin.eta, r.argmin.xi),
            "control_factor": r.control_factor,
            "channel_bounds": [r.channel_bounds.0, r.channel_bounds.1],
        });
        if let Some((lo, hi)) = expected {
            let check = penning_core::landscape::check_range(r.min, r.max, lo, hi);
            v["expected_range"] = json!([lo, hi]);
            v["expected_range_check"] = json!(format!("{check:?}"));
        }
        out.emit_json(&v);
    } else {
        print!("{}", r.report(expected));
    }
    Ok(())
}

pub fn optimize(out: &Output, args: &OptimizeArgs) -> CmdResult {
    let (table, spec) = grid(&args.grid)?;
    let objective = spec.objective;
    let r = run_scan(out, &table, &spec)?;
    let max = refine_extremum(&table, r.argmax, Extremum::Max, objective)?;
    let min = refine_extremum(&table, r.argmin, Extremum::Min, objective)?;
    let grad = |p| objective_gradient(&table, p, objective, 1e-6);
    let (gmax, gmin) = (grad(max.params)?, grad(min.params)?);
    let phase = phase_only_factor(&table, objective, args.factor_points)?;
    if let Some(path) = &args.factor_csv {
        write_file(path, |w| write_factor_csv(&phase, w))?;
    }
    let factor = if min.value > 0.0 { max.value / min.value } else { f64::INFINITY };

    if out.json {
        let refined = |value: f64, eta: f64, xi: f64, evaluations: usize, g: (f64, f64)| {
            json!({
                "value": value,
                "params": params_json(eta, xi),
                "evaluations": evaluations,
                "gradient": [g.0, g.1],
            })
        };
        out.emit_json(&json!({
            "table": args.grid.table,
            "objective": objective,
            "grid": {"eta_points": spec.eta_points, "xi_points": spec.xi_points, "max": r.max, "min": r.min},
            "max": refined(max.value, max.params.eta, max.params.xi, max.evaluations, gmax),
            "min": refined(min.value, min.params.eta, min.params.xi, min.evaluations, gmin),
            "control_factor": if factor.is_finite() { json!(factor) } else { Value::Null },
            "phase_only": {
                "eta_rad": phase.eta_star,
                "factor": if phase.factor.is_finite() { json!(phase.factor) } else { Value::Null },
            },
        }));
        return Ok(());
    }
    println!("objective: {}", objective.name());
    println!("grid: {} x {} (max {:.6}, min {:.6})", spec.eta_points, spec.xi_points, r.max, r.min);
    for (label, x, g) in [("max", &max, gmax), ("min", &min, gmin)] {
        println!(
            "refined {label}: {:.9} at eta_rad={:.9}, xi_rad={:.9} ({} evaluations, gradient ({:.3e}, {:.3e}))",
            x.value, x.params.eta, x.params.xi, x.evaluations, g.0, g.1
        );
    }
    println!("control factor: {factor:.6}");
    println!("phase-only factor: {:.6} at eta_rad={:.9} (xi alone, maximized over eta)", phase.factor, phase.eta_star);
    Ok(())
}

fn to_z(state: &PreparedState) -> std::result::Result<PreparedState, Failure> {
    Ok(match state {
        PreparedState::Single(s) if s.axis() == Axis::X => rotate_axis(s, Axis::X, Axis::Z)?.into(),
        PreparedState::Product(p) if p.atom_a().axis() == Axis::X => {
            ProductState::new(rotate_axis(p.atom_a(), Axis::X, Axis::Z)?, rotate_axis(p.atom_b(), Axis::X, Axis::Z)?)?
                .into()
        }
        other => other.clone(),
    })
}

pub fn check_symmetry(out: &Output, args: &SymmetryArgs) -> CmdResult {
    let sc = Scenario::resolve(&args.scenario)?;
    let state = if sc.state.axis() == Axis::Z {
        sc.state.clone()
    } else if args.rotate_first {
        to_z(&sc.state)?
    } else {
        return Err(Failure::new(
            EXIT_PHYSICS,
            "state is quantized along X; pass --rotate-first to rotate it to the beam axis",
        ));
    };
    let mut composer = sc.composer();
    if args.no_filter {
        composer = composer.without_filter();
    }
    let InvarianceReport { samples, max_deviation, pass } =
        verify_rotation_invariance(&composer, &state, args.samples as usize)?;
    if out.json {
        out.emit_json(&json!({
            "samples": samples,
            "max_deviation": max_deviation,
            "tolerance": penning_core::symmetry::INVARIANCE_TOL,
            "filter": !args.no_filter,
            "pass": pass,
        }));
    } else {
        println!(
            "{}: max relative deviation {max_deviation:.3e} over {samples} rotations (tolerance {:.0e}, filter {})",
            if pass { "PASS" } else { "FAIL" },
            penning_core::symmetry::INVARIANCE_TOL,
            if args.no_filter { "off" } else { "on" }
        );
    }
    if pass {
        Ok(())
    } else {
        Err(Failure { code: EXIT_PHYSICS, message: None })
    }
}

pub fn wigner(out: &Output, args: &WignerArgs) -> CmdResult {
    let j = TwiceInt(args.j2);
    if let (Some(mp), Some(m)) = (args.m2p, args.m2) {
        let d = wigner_d(j, TwiceInt(mp), TwiceInt(m), args.theta_rad)?;
        if out.json {
            out.emit_json(&json!({"j2": args.j2, "m2p": mp, "m2": m, "theta_rad": args.theta_rad, "value": d}));
        } else {
            println!("{}", format_g(d, 17));
        }
        return Ok(());
    }
    let d = d_matrix(j, args.theta_rad)?;
    let projections: Vec<i32> = penning_core::angmom::projections(j).map(|m| m.0).collect();
    let rows: Vec<Vec<f64>> = (0..d.dim()).map(|r| (0..d.dim()).map(|c| d.at(r, c)).collect()).collect();
    if out.json {
        out.emit_json(&json!({"j2": args.j2, "theta_rad": args.theta_rad, "m2": projections, "matrix": rows}));
    } else {
        println!("# rows m', columns m, both in doubled units: {projections:?}");
        for row in rows {
            let cells: Vec<String> = row.iter().map(|x| format!("{:>16}", format_g(*x, CSV_DIGITS))).collect();
            println!("{}", cells.join(" "));
        }
    }
    Ok(())
}

pub fn couple(out: &Output, args: &ScenarioArgs) -> CmdResult {
    let sc = Scenario::resolve(args)?;
    let product = match to_z(&sc.state)? {
        PreparedState::Product(p) => p,
        _ => return Err(Failure::new(EXIT_PHYSICS, "couple needs a two-atom product state")),
    };
    let coupled = penning_core::couple(&product)?;
    if out.json {
        let spec = StateSpec::explicit(&coupled.into())?;
        out.emit_json(&serde_json::to_value(spec).map_err(Error::from)?);
        return Ok(());
    }
    println!("{:>5} {:>5} {:>20} {:>20} {:>12}", "S", "M", "re", "im", "prob");
    for (l, a) in coupled.terms() {
        println!(
            "{:>5} {:>5} {:>20} {:>20} {:>12.9}",
            l.s.to_string(),
            l.m.to_string(),
            format_g(a.re, 15),
            format_g(a.im, 15),
            a.norm_sqr()
        );
    }
    Ok(())
}
