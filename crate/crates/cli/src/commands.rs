use std::io;
use std::path::Path;

use serde_json::json;

use jdrift::chain::{self, DistanceChain};
use jdrift::hitting::{self, HittingTimeTable};
use jdrift::numeric::{self, Exactness};
use jdrift::oracle::{self, SuiteOptions};
use jdrift::shell::ShellProfile;
use jdrift::walker::{self, WalkConfig, WalkMode};
use jdrift::JohnsonParams;

use crate::manifest::RunManifest;
use crate::output::{fmt_f64, CsvFile};
use crate::svg::{padded, Chart, Element, PALETTE};
use crate::{AnalyzeArgs, HittingArgs, Instance, Mode, SimulateArgs, VerifyArgs};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] jdrift::Error),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
    #[error("verification failed: {0} of {1} checks")]
    Verification(usize, usize),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(jdrift::Error::Internal(_)) => 1,
            CliError::Core(_) => 2,
            CliError::Io(_) | CliError::Verification(..) => 1,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn params(inst: &Instance) -> Result<JohnsonParams> {
    Ok(JohnsonParams::new(inst.n, inst.k)?)
}

fn write_svg(path: &Path, chart: &Chart) -> io::Result<()> {
    std::fs::write(path, chart.render())
}

pub fn analyze(args: &AnalyzeArgs, out: &Path) -> Result<()> {
    let params = params(&args.instance)?;
    // Chain quantities are undefined on J(2,1); reject before writing anything.
    let chain = DistanceChain::new(params, args.beta)?;
    let profile = ShellProfile::new(params);
    let drift = chain.drift_profile();
    let d_max = params.d_max();
    let d_hat = profile.continuous_argmax_f64();
    let d_star = chain::equilibrium_distance(params, args.beta)?;

    let mut manifest = RunManifest::new("analyze", json!({ "n": params.n(), "k": params.k(), "beta": args.beta }));

    let mut shells = CsvFile::create(
        &out.join("analyze_shells.csv"),
        "analyze_shells/1",
        &["d", "shell_size", "log_shell_size", "entropy_increment", "drift"],
    )?;
    for d in 0..=d_max {
        let inc = if d < d_max { fmt_f64(profile.increments[d]) } else { String::new() };
        shells.row(&[
            d.to_string(),
            profile.sizes[d].to_string(),
            fmt_f64(profile.log_sizes[d]),
            inc,
            fmt_f64(drift.drift[d]),
        ])?;
    }
    manifest.push(shells.finish()?);

    let mut rates = CsvFile::create(&out.join("analyze_chain.csv"), "analyze_chain/1", &["d", "p", "q", "r", "drift", "variance"])?;
    for d in 0..=d_max {
        rates.row(&[
            d.to_string(),
            fmt_f64(chain.p[d]),
            fmt_f64(chain.q[d]),
            fmt_f64(chain.r[d]),
            fmt_f64(drift.drift[d]),
            fmt_f64(drift.variance[d]),
        ])?;
    }
    manifest.push(rates.finish()?);

    let d_star_exact = (args.beta == 0.0).then(|| chain::equilibrium_distance_exact(params).to_string());
    let scalars_rows = [
        ("d_hat_star", fmt_f64(d_hat), profile.continuous_argmax.to_string()),
        ("d_star", fmt_f64(d_star), d_star_exact.unwrap_or_default()),
        ("d_max", d_max.to_string(), d_max.to_string()),
        ("beta", fmt_f64(args.beta), String::new()),
    ];
    let mut scalars = CsvFile::create(&out.join("analyze_scalars.csv"), "analyze_scalars/1", &["name", "value", "exact"])?;
    for (name, value, exact) in &scalars_rows {
        scalars.row(&[name.to_string(), value.clone(), exact.clone()])?;
    }
    manifest.push(scalars.finish()?);

    if args.svg {
        let xs = (0.0, d_max as f64);
        let top = profile.log_sizes.iter().copied().fold(0.0, f64::max);
        let entropy = Chart {
            title: format!("Shell entropy on {params}"),
            x_label: "distance d".into(),
            y_label: "S(d) = ln |shell|".into(),
            x_range: xs,
            y_range: padded(0.0, top),
            elements: vec![
                line((0..=d_max).map(|d| (d as f64, profile.log_sizes[d])).collect(), PALETTE[0], Some("S(d)")),
                Element::VLine { x: d_hat, label: format!("argmax {d_hat:.2}") },
            ],
        };
        let path = out.join("analyze_entropy.svg");
        write_svg(&path, &entropy)?;
        manifest.push(path);

        let (lo, hi) = drift.drift.iter().fold((0.0f64, 0.0f64), |(a, b), &x| (a.min(x), b.max(x)));
        let drift_chart = Chart {
            title: format!("Drift on {params}, beta = {}", args.beta),
            x_label: "distance d".into(),
            y_label: "E[d' - d]".into(),
            x_range: xs,
            y_range: padded(lo, hi),
            elements: vec![
                line((0..=d_max).map(|d| (d as f64, drift.drift[d])).collect(), PALETTE[1], Some("drift")),
                Element::HLine { y: 0.0, label: String::new() },
                Element::VLine { x: d_star, label: format!("d* = {d_star:.2}") },
            ],
        };
        let path = out.join("analyze_drift.svg");
        write_svg(&path, &drift_chart)?;
        manifest.push(path);
    }
    manifest.write(out)?;

    println!("{params}  beta = {}", args.beta);
    println!("d_hat_star = {d_hat:.2} ({})", fmt_f64(d_hat));
    println!("d_star     = {d_star:.2} ({})", fmt_f64(d_star));
    println!("d_max      = {d_max}");
    Ok(())
}

fn line(points: Vec<(f64, f64)>, stroke: &str, label: Option<&str>) -> Element {
    Element::Line { points, stroke: stroke.into(), width: 2.0, opacity: 1.0, label: label.map(Into::into) }
}

pub fn hitting(args: &HittingArgs, out: &Path) -> Result<()> {
    let params = params(&args.instance)?;
    params.require_chain()?;
    let d_max = params.d_max();
    let range = args.m.clone().unwrap_or(1..=d_max);
    if *range.end() > d_max {
        return Err(CliError::Usage(format!("m range ends at {} but d_max = {d_max} on {params}", range.end())));
    }
    let exactness = Exactness { cutoff: args.exact_cutoff };
    let tables: Vec<HittingTimeTable> =
        args.beta.iter().map(|&b| HittingTimeTable::with_exactness(params, b, exactness)).collect::<jdrift::Result<_>>()?;

    let mut manifest = RunManifest::new(
        "hitting",
        json!({
            "n": params.n(), "k": params.k(), "beta": args.beta,
            "m": [range.start(), range.end()], "exact_cutoff": args.exact_cutoff,
        }),
    );

    let mut csv = CsvFile::create(
        &out.join("hitting.csv"),
        "hitting/1",
        &["m", "h_exact_num", "h_exact_den", "log_h", "h_float", "beta"],
    )?;
    for table in &tables {
        for m in range.clone() {
            let h = &table.h[m];
            let (num, den) = match &h.exact {
                Some(x) => (x.numer().to_string(), x.denom().to_string()),
                None => (String::new(), String::new()),
            };
            csv.row(&[m.to_string(), num, den, fmt_f64(h.ln), fmt_f64(h.value()), fmt_f64(table.beta)])?;
        }
    }
    manifest.push(csv.finish()?);

    let ratios = args.beta.contains(&0.0).then(|| hitting::log_ratios(params));
    if let Some(ratios) = &ratios {
        let mut csv = CsvFile::create(&out.join("hitting_ratio.csv"), "hitting_ratio/1", &["m", "log_ratio"])?;
        for m in range.clone().filter(|&m| m > 0) {
            csv.row(&[m.to_string(), fmt_f64(ratios[m])])?;
        }
        manifest.push(csv.finish()?);
    }

    if args.svg {
        let log10 = std::f64::consts::LN_10;
        let baseline = numeric::ln_biguint(&tables[0].iid_baseline) / log10;
        let mut elements = Vec::new();
        let mut hi = baseline;
        for (i, table) in tables.iter().enumerate() {
            let points: Vec<(f64, f64)> =
                range.clone().filter(|&m| m > 0).map(|m| (m as f64, table.h[m].ln / log10)).collect();
            hi = points.iter().fold(hi, |a, p| a.max(p.1));
            elements.push(line(points, PALETTE[i % PALETTE.len()], Some(&format!("beta = {}", table.beta))));
        }
        elements.push(Element::HLine { y: baseline, label: "IID baseline C(n,k)".into() });
        let chart = Chart {
            title: format!("Expected hitting time on {params}"),
            x_label: "initial distance m".into(),
            y_label: "log10 E[tau]".into(),
            x_range: (*range.start() as f64, *range.end() as f64),
            y_range: padded(0.0, hi),
            elements,
        };
        let path = out.join("hitting.svg");
        write_svg(&path, &chart)?;
        manifest.push(path);

        if let Some(ratios) = &ratios {
            let points: Vec<(f64, f64)> = range.clone().filter(|&m| m > 0).map(|m| (m as f64, ratios[m])).collect();
            let (lo, hi) = points.iter().fold((0.0f64, 0.0f64), |(a, b), p| (a.min(p.1), b.max(p.1)));
            let chart = Chart {
                title: format!("Hitting time relative to IID sampling on {params}"),
                x_label: "initial distance m".into(),
                y_label: "ln(h_m / C(n,k))".into(),
                x_range: (*range.start() as f64, *range.end() as f64),
                y_range: padded(lo, hi),
                elements: vec![line(points, PALETTE[0], None), Element::HLine { y: 0.0, label: "parity".into() }],
            };
            let path = out.join("hitting_ratio.svg");
            write_svg(&path, &chart)?;
            manifest.push(path);
        }
    }
    manifest.write(out)?;

    for table in &tables {
        let last = &table.h[*range.end()];
        println!("beta = {}: ln h_{} = {:.6}", table.beta, last.m, last.ln);
    }
    Ok(())
}

pub fn simulate(args: &SimulateArgs, out: &Path) -> Result<()> {
    let params = params(&args.instance)?;
    let mode = match args.mode {
        Mode::Full => WalkMode::FullState,
        Mode::Lumped => WalkMode::Lumped,
    };
    let config = WalkConfig::new(params, args.beta, args.start, args.trajectories, args.steps)
        .seed(args.seed)
        .mode(mode)
        .absorbing(args.absorbing);
    let batch = walker::simulate(&config)?;
    let d_star = chain::equilibrium_distance(params, args.beta)?;

    let mut manifest = RunManifest::new(
        "simulate",
        json!({
            "n": params.n(), "k": params.k(), "beta": args.beta, "start": args.start,
            "trajectories": args.trajectories, "steps": args.steps, "seed": args.seed,
            "mode": format!("{:?}", args.mode).to_lowercase(), "absorbing": args.absorbing,
        }),
    );

    let mut csv = CsvFile::create(&out.join("trajectories.csv"), "trajectories/1", &["trajectory_id", "t", "d"])?;
    for (id, row) in batch.rows().enumerate() {
        for (t, d) in row.iter().enumerate() {
            csv.row(&[id.to_string(), t.to_string(), d.to_string()])?;
        }
    }
    manifest.push(csv.finish()?);

    let mut csv = CsvFile::create(&out.join("summary.csv"), "summary/1", &["t", "mean", "std"])?;
    for (t, (m, s)) in batch.mean_path.iter().zip(&batch.std_path).enumerate() {
        csv.row(&[t.to_string(), fmt_f64(*m), fmt_f64(*s)])?;
    }
    manifest.push(csv.finish()?);

    if args.absorbing {
        let mut csv = CsvFile::create(&out.join("hits.csv"), "hits/1", &["trajectory_id", "hit_step"])?;
        for (id, hit) in batch.hit_times.iter().enumerate() {
            csv.row(&[id.to_string(), hit.map(|h| h.to_string()).unwrap_or_default()])?;
        }
        manifest.push(csv.finish()?);
    }

    if args.svg {
        let path = out.join("trajectories.svg");
        write_svg(&path, &trajectory_chart(&batch, d_star))?;
        manifest.push(path);
    }
    manifest.write(out)?;

    let last = batch.mean_path.last().copied().unwrap_or(f64::NAN);
    println!("{params}  beta = {}  d* = {d_star:.4}", args.beta);
    println!("final mean distance = {last:.4} after {} steps", args.steps);
    if let Some(h) = batch.mean_hit_time() {
        println!("mean hitting step = {h:.4}");
    }
    Ok(())
}

/// Individual paths in light gray, a +/-1 std band, the mean curve and a
/// dashed line at the equilibrium distance.
fn trajectory_chart(batch: &walker::TrajectoryBatch, d_star: f64) -> Chart {
    let ts: Vec<f64> = (0..batch.mean_path.len()).map(|t| t as f64).collect();
    let mut elements: Vec<Element> = batch
        .rows()
        .take(100)
        .map(|row| Element::Line {
            points: row.iter().enumerate().map(|(t, &d)| (t as f64, d as f64)).collect(),
            stroke: "#888888".into(),
            width: 0.6,
            opacity: 0.35,
            label: None,
        })
        .collect();
    elements.push(Element::Band {
        xs: ts.clone(),
        lower: batch.mean_path.iter().zip(&batch.std_path).map(|(m, s)| m - s).collect(),
        upper: batch.mean_path.iter().zip(&batch.std_path).map(|(m, s)| m + s).collect(),
        fill: PALETTE[0].into(),
        opacity: 0.2,
    });
    elements.push(line(ts.iter().copied().zip(batch.mean_path.iter().copied()).collect(), PALETTE[0], Some("mean")));
    elements.push(Element::HLine { y: d_star, label: format!("d* = {d_star:.2}") });
    Chart {
        title: format!("Distance to target on {}, beta = {}", batch.params, batch.beta),
        x_label: "step t".into(),
        y_label: "distance d".into(),
        x_range: (0.0, batch.steps.max(1) as f64),
        y_range: (0.0, batch.params.d_max() as f64),
        elements,
    }
}

pub fn verify(args: &VerifyArgs, out: &Path) -> Result<()> {
    if args.max_n < 2 {
        return Err(CliError::Usage("--max-n must be at least 2".into()));
    }
    let report = oracle::run_suite(&SuiteOptions::new(args.max_n))?;
    let mut manifest = RunManifest::new("verify", json!({ "max_n": args.max_n }));
    let path = out.join("verify_report.json");
    std::fs::write(&path, report.to_json() + "\n")?;
    manifest.push(path);
    manifest.write(out)?;

    println!("{report}");
    let failed = report.failures().count();
    if failed > 0 {
        return Err(CliError::Verification(failed, report.checks.len()));
    }
    Ok(())
}
