//! qcorr: classify two-qubit X states, emit dephasing trajectories and
//! phase diagrams, compute event times, and cross-check the analytic channel
//! against its Monte Carlo oracle.
//!
//! Exit codes follow sysexits conventions where they exist: 0 success,
//! 1 I/O failure, 2 invalid physical parameters (the message names the
//! violated constraint), 64 usage errors.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use qcorr::analysis::{
    classify, phase_diagram, sudden_death_time, sudden_transition_time, trajectory,
    write_phase_diagram_csv, write_trajectory_csv, Trajectory,
};
use qcorr::channel::{apply_dephasing, monte_carlo_evolve, ChannelParams, NoiseSampleConfig};
use qcorr::correlations::{lqu_family, negativity_family, pt_spectrum_family};
use qcorr::states::{build_xstate, XStateParams};

const USAGE: &str = "\
usage: qcorr <command> [flags]

commands:
  classify       region and LQU-regime of a parameter point   (needs --r, --s)
  events         sudden-death / sudden-transition times       (needs --r, --s)
  trajectory     correlations along the dephasing flow        (needs --r, --s)
  phase-diagram  sweep the whole (r, s) triangle
  mc-verify      Monte Carlo vs analytic channel report       (needs --r, --s)

flags:
  --r <float>        family parameter r in [0, 1/2]
  --s <float>        family parameter s with |s| <= r
  --gamma <float>    damping rate Γ > 0                  (default 1)
  --t-max <float>    trajectory horizon, units of 1/Γ    (default 8/Γ)
  --steps <int>      trajectory grid points, >= 2        (default 400)
  --grid-n <int>     phase-diagram points per r axis     (default 201)
  --samples <int>    Monte Carlo realizations, >= 1      (default 100000)
  --seed <int>       Monte Carlo seed (fallback: QCORR_SEED, then 42)
  --out <path>       write output here instead of stdout
  --format <fmt>     csv or json (default: json for classify/events/mc-verify,
                     csv for trajectory/phase-diagram)

Identical invocations (including the seed) produce byte-identical output.
A trajectory written with --out FILE also writes FILE's events/region
sidecar next to it as <stem>.events.json.
";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    Classify,
    Events,
    Trajectory,
    PhaseDiagram,
    McVerify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone)]
struct RunConfig {
    command: Command,
    r: Option<f64>,
    s: Option<f64>,
    gamma: f64,
    t_max: Option<f64>,
    steps: usize,
    grid_n: usize,
    samples: usize,
    seed: u64,
    out: Option<PathBuf>,
    format: Option<Format>,
}

enum CliError {
    Usage(String),
    Physics(String),
    Io(String),
}

impl From<qcorr::Error> for CliError {
    fn from(e: qcorr::Error) -> Self {
        CliError::Physics(e.to_string())
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.iter().any(|a| a == "-h" || a == "--help")
        || args.first().map(String::as_str) == Some("help")
    {
        print!("{USAGE}");
        return ExitCode::SUCCESS;
    }
    match parse(&args).and_then(run) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Io(msg)) => {
            eprintln!("qcorr: i/o error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Physics(msg)) => {
            eprintln!("qcorr: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("qcorr: {msg}");
            eprint!("{USAGE}");
            ExitCode::from(64)
        }
    }
}

fn parse(args: &[String]) -> Result<RunConfig, CliError> {
    let Some(cmd_name) = args.first() else {
        return Err(CliError::Usage("missing command".into()));
    };
    let command = match cmd_name.as_str() {
        "classify" => Command::Classify,
        "events" => Command::Events,
        "trajectory" => Command::Trajectory,
        "phase-diagram" => Command::PhaseDiagram,
        "mc-verify" => Command::McVerify,
        other => return Err(CliError::Usage(format!("unknown command `{other}`"))),
    };

    let mut cfg = RunConfig {
        command,
        r: None,
        s: None,
        gamma: 1.0,
        t_max: None,
        steps: 400,
        grid_n: 201,
        samples: 100_000,
        seed: 42,
        out: None,
        format: None,
    };
    let mut seed_flag = None;

    let mut it = args[1..].iter();
    while let Some(flag) = it.next() {
        let mut value = || {
            it.next()
                .ok_or_else(|| CliError::Usage(format!("flag {flag} needs a value")))
        };
        match flag.as_str() {
            "--r" => cfg.r = Some(parse_num(flag, value()?)?),
            "--s" => cfg.s = Some(parse_num(flag, value()?)?),
            "--gamma" => cfg.gamma = parse_num(flag, value()?)?,
            "--t-max" => cfg.t_max = Some(parse_num(flag, value()?)?),
            "--steps" => cfg.steps = parse_num(flag, value()?)?,
            "--grid-n" => cfg.grid_n = parse_num(flag, value()?)?,
            "--samples" => cfg.samples = parse_num(flag, value()?)?,
            "--seed" => seed_flag = Some(parse_num(flag, value()?)?),
            "--out" => cfg.out = Some(PathBuf::from(value()?)),
            "--format" => {
                cfg.format = Some(match value()?.as_str() {
                    "csv" => Format::Csv,
                    "json" => Format::Json,
                    other => {
                        return Err(CliError::Usage(format!(
                            "--format must be csv or json, got `{other}`"
                        )))
                    }
                })
            }
            other => return Err(CliError::Usage(format!("unknown flag `{other}`"))),
        }
    }

    // QCORR_SEED is only a fallback; an explicit --seed wins outright
    cfg.seed = match seed_flag {
        Some(seed) => seed,
        None => env_seed()?.unwrap_or(42),
    };

    // per-command required flags, before any computation
    let needs_point = matches!(
        command,
        Command::Classify | Command::Events | Command::Trajectory | Command::McVerify
    );
    if needs_point {
        if cfg.r.is_none() {
            return Err(CliError::Usage(format!("{cmd_name} requires --r")));
        }
        if cfg.s.is_none() {
            return Err(CliError::Usage(format!("{cmd_name} requires --s")));
        }
    }
    if cfg.steps < 2 {
        return Err(CliError::Usage("--steps must be >= 2".into()));
    }
    if cfg.grid_n < 2 {
        return Err(CliError::Usage("--grid-n must be >= 2".into()));
    }
    if cfg.samples < 1 {
        return Err(CliError::Usage("--samples must be >= 1".into()));
    }
    Ok(cfg)
}

fn parse_num<T: std::str::FromStr>(flag: &str, raw: &String) -> Result<T, CliError> {
    raw.parse()
        .map_err(|_| CliError::Usage(format!("could not parse `{raw}` for {flag}")))
}

fn env_seed() -> Result<Option<u64>, CliError> {
    match std::env::var("QCORR_SEED") {
        Ok(raw) => raw
            .parse()
            .map(Some)
            .map_err(|_| CliError::Usage(format!("QCORR_SEED must be an integer, got `{raw}`"))),
        Err(_) => Ok(None),
    }
}

fn run(cfg: RunConfig) -> Result<(), CliError> {
    let ch = ChannelParams::new(cfg.gamma)?;
    let t_max = cfg.t_max.unwrap_or(8.0 / cfg.gamma);
    if t_max <= 0.0 || !t_max.is_finite() {
        return Err(CliError::Physics(format!(
            "t-max must be positive and finite, got {t_max}"
        )));
    }

    match cfg.command {
        Command::Classify => {
            let p = point(&cfg)?;
            let tag = classify(p);
            let body = match cfg.format.unwrap_or(Format::Json) {
                Format::Json => pretty(&serde_json::json!({
                    "r": p.r(),
                    "s": p.s(),
                    "region": tag.region,
                    "subregion": tag.subregion,
                    "eta": pt_spectrum_family(p),
                    "negativity": negativity_family(p),
                    "lqu": lqu_family(p).0,
                })),
                Format::Csv => {
                    let mut text = String::from("r,s,region,subregion,negativity,lqu\n");
                    let _ = writeln!(
                        text,
                        "{},{},{},{},{},{}",
                        p.r(),
                        p.s(),
                        tag.region.as_str(),
                        tag.subregion.map(|x| x.as_str()).unwrap_or(""),
                        negativity_family(p),
                        lqu_family(p).0
                    );
                    text
                }
            };
            emit(&cfg, body.as_bytes())
        }

        Command::Events => {
            let p = point(&cfg)?;
            let t_sd = sudden_death_time(p, &ch);
            let t_st = sudden_transition_time(p, &ch);
            let body = match cfg.format.unwrap_or(Format::Json) {
                Format::Json => pretty(&serde_json::json!({
                    "r": p.r(),
                    "s": p.s(),
                    "gamma": cfg.gamma,
                    "t_sd": t_sd,
                    "t_st": t_st,
                })),
                Format::Csv => {
                    let mut text = String::from("r,s,gamma,t_sd,t_st\n");
                    let _ = writeln!(
                        text,
                        "{},{},{},{},{}",
                        p.r(),
                        p.s(),
                        cfg.gamma,
                        opt_field(t_sd),
                        opt_field(t_st)
                    );
                    text
                }
            };
            emit(&cfg, body.as_bytes())
        }

        Command::Trajectory => {
            let p = point(&cfg)?;
            let traj = trajectory(p, &ch, t_max, cfg.steps)?;
            match cfg.format.unwrap_or(Format::Csv) {
                Format::Json => emit(&cfg, pretty(&trajectory_json(&cfg, &traj)).as_bytes()),
                Format::Csv => {
                    let mut csv = Vec::new();
                    write_trajectory_csv(&traj, &mut csv)?;
                    emit(&cfg, &csv)?;
                    // events/region sidecar rides along when writing to a file
                    if let Some(out) = &cfg.out {
                        let meta = pretty(&serde_json::json!({
                            "r": p.r(),
                            "s": p.s(),
                            "gamma": cfg.gamma,
                            "region": traj.region.region,
                            "subregion": traj.region.subregion,
                            "t_sd": traj.events.t_sd,
                            "t_st": traj.events.t_st,
                        }));
                        fs::write(sidecar_path(out), meta.as_bytes())?;
                    }
                    Ok(())
                }
            }
        }

        Command::PhaseDiagram => {
            let pd = phase_diagram(cfg.grid_n, &ch)?;
            match cfg.format.unwrap_or(Format::Csv) {
                Format::Json => emit(
                    &cfg,
                    pretty(&serde_json::json!({
                        "gamma": cfg.gamma,
                        "grid_n": pd.grid_n,
                        "points": pd.points,
                    }))
                    .as_bytes(),
                ),
                Format::Csv => {
                    let mut csv = Vec::new();
                    write_phase_diagram_csv(&pd, &mut csv)?;
                    emit(&cfg, &csv)
                }
            }
        }

        Command::McVerify => mc_verify(&cfg, &ch, t_max),
    }
}

fn point(cfg: &RunConfig) -> Result<XStateParams, CliError> {
    Ok(XStateParams::new(
        cfg.r.expect("required flag checked at parse"),
        cfg.s.expect("required flag checked at parse"),
    )?)
}

fn trajectory_json(cfg: &RunConfig, traj: &Trajectory) -> serde_json::Value {
    serde_json::json!({
        "gamma": cfg.gamma,
        "region": traj.region.region,
        "subregion": traj.region.subregion,
        "t_sd": traj.events.t_sd,
        "t_st": traj.events.t_st,
        "points": traj.reports,
    })
}

/// Monte Carlo vs analytic map at 10 time points (t = 0 included); PASS
/// means the elementwise discrepancy sat within the 3σ bound at >= 9 points.
fn mc_verify(cfg: &RunConfig, ch: &ChannelParams, t_max: f64) -> Result<(), CliError> {
    let p = point(cfg)?;
    let rho0 = build_xstate(p);

    #[derive(serde::Serialize)]
    struct McPoint {
        t: f64,
        max_abs_diff: f64,
        bound_3sigma: f64,
        within_bound: bool,
        rho23_diff: f64,
    }

    let mut points = Vec::with_capacity(10);
    for i in 0..10u64 {
        let t = t_max * (i as f64 / 9.0);
        let mc_cfg = NoiseSampleConfig::new(cfg.samples, cfg.seed.wrapping_add(i));
        let (mc, bound) = monte_carlo_evolve(&rho0, t, ch, &mc_cfg)?;
        let exact = apply_dephasing(&rho0, t, ch)?;
        let diff = mc.matrix().max_abs_diff(exact.matrix());
        points.push(McPoint {
            t,
            max_abs_diff: diff,
            bound_3sigma: bound,
            within_bound: diff <= bound,
            rho23_diff: (mc.entry(1, 2) - exact.entry(1, 2)).norm(),
        });
    }
    let within = points.iter().filter(|pt| pt.within_bound).count();
    let pass = within >= 9;

    let body = match cfg.format.unwrap_or(Format::Json) {
        Format::Json => pretty(&serde_json::json!({
            "r": p.r(),
            "s": p.s(),
            "gamma": cfg.gamma,
            "t_max": t_max,
            "samples": cfg.samples,
            "seed": cfg.seed,
            "points": points,
            "within_bound": within,
            "pass": pass,
        })),
        Format::Csv => {
            let mut text = String::from("t,max_abs_diff,bound_3sigma,within_bound,rho23_diff\n");
            for pt in &points {
                let _ = writeln!(
                    text,
                    "{},{},{},{},{}",
                    pt.t, pt.max_abs_diff, pt.bound_3sigma, pt.within_bound, pt.rho23_diff
                );
            }
            eprintln!(
                "qcorr: mc-verify {} ({within}/10 points within bound, samples={}, seed={})",
                if pass { "PASS" } else { "FAIL" },
                cfg.samples,
                cfg.seed
            );
            text
        }
    };
    emit(cfg, body.as_bytes())
}

fn opt_field(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn pretty(value: &serde_json::Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable value");
    text.push('\n');
    text
}

fn sidecar_path(out: &Path) -> PathBuf {
    out.with_extension("events.json")
}

fn emit(cfg: &RunConfig, bytes: &[u8]) -> Result<(), CliError> {
    match &cfg.out {
        Some(path) => fs::write(path, bytes)?,
        None => io::stdout().write_all(bytes)?,
    }
    Ok(())
}
