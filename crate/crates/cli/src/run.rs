use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use netcorr::analysis::{
    decay_fit, lifetimes, offdiag_ratio, peak_scaling, period_zscore, plateau_detect_with,
    power_law, DecayFit, LifetimeOptions, LineFit, NullModel,
};
use netcorr::engine::{centered_corr_matrix_with, corr_curve, corr_matrix_with};
use netcorr::formats::{
    atomic_write, open_input, read_curve, read_trajectory, save_matrix, write_curve,
    write_trajectory, MatrixFormat, MatrixSidecar,
};
use netcorr::generators::{
    build_dictionary, gen_darn, gen_darn_cross, gen_logistic, gen_periodic, gen_white,
    DarnCrossParams, DarnParams, LogisticParams, PeriodicParams, WhiteParams,
};
use netcorr::ingest::{
    bin_to_trajectory, parse_contacts, BinningSpec, ContactFormat, ParseOptions,
};
use netcorr::{seed, CorrCurve, EngineConfig, Kernel, LagRange, Trajectory};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::*;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Files touched by a run, for the manifest.
#[derive(Debug, Default)]
pub struct Touched {
    pub inputs: Vec<PathBuf>,
    pub outputs: Vec<PathBuf>,
}

fn reader(path: Option<&Path>) -> Result<Box<dyn BufRead>> {
    match path {
        Some(p) => Ok(open_input(p)?),
        None => Ok(Box::new(std::io::stdin().lock())),
    }
}

fn emit<F>(out: Option<&Path>, fill: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> netcorr::Result<()>,
{
    match out {
        Some(p) => atomic_write(p, fill)?,
        None => {
            let mut lock = std::io::stdout().lock();
            fill(&mut lock)?;
            lock.flush()?;
        }
    }
    Ok(())
}

/// Report lines go to stdout when the JSON goes to a file, else stderr.
fn summarize(out: Option<&Path>, lines: &[String]) {
    for l in lines {
        if out.is_some() {
            println!("{l}");
        } else {
            eprintln!("{l}");
        }
    }
}

fn load_traj(path: Option<&Path>, touched: &mut Touched) -> Result<(Trajectory, Vec<String>)> {
    touched.inputs.extend(path.map(Path::to_path_buf));
    let file = read_trajectory(reader(path)?)?;
    Ok((file.trajectory, file.comments))
}

fn load_curves(inputs: &[PathBuf], touched: &mut Touched) -> Result<Vec<(String, CorrCurve)>> {
    if inputs.is_empty() {
        return Ok(vec![("-".into(), read_curve(reader(None)?)?)]);
    }
    touched.inputs.extend(inputs.iter().cloned());
    inputs
        .iter()
        .map(|p| Ok((p.display().to_string(), read_curve(open_input(p)?)?)))
        .collect()
}

fn write_json(out: Option<&Path>, value: &Value, touched: &mut Touched) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    emit(out, |w| {
        writeln!(w, "{text}").map_err(|e| netcorr::Error::io("writing report", e))
    })?;
    touched.outputs.extend(out.map(Path::to_path_buf));
    Ok(())
}

fn write_generated(
    out: Option<&Path>,
    model: &str,
    record: Value,
    traj: &Trajectory,
    touched: &mut Touched,
) -> Result<()> {
    let comments = vec![
        format!("netcorr {VERSION} generate {model}"),
        format!("params: {record}"),
        format!("seed: {}", record["seed"]),
    ];
    emit(out, |w| write_trajectory(w, traj, &comments))?;
    touched.outputs.extend(out.map(Path::to_path_buf));
    Ok(())
}

pub fn execute(cli: &Cli) -> Result<Touched> {
    let mut touched = Touched::default();
    let master = cli.seed;
    match &cli.command {
        Command::Generate(model) => generate(model, master, &mut touched)?,
        Command::Correlate(a) => correlate(a, &mut touched)?,
        Command::Analyze(kind) => analyze(kind, master, &mut touched)?,
        Command::Ingest(a) => ingest(a, &mut touched)?,
    }
    Ok(touched)
}

fn generate(model: &Model, master: u64, touched: &mut Touched) -> Result<()> {
    let darn = |c: &DarnCommon, order| DarnParams {
        m: c.m,
        n: c.n,
        order,
        q: c.q,
        y: c.y,
        seed: master,
        burn_in: c.burn_in,
    };
    match model {
        Model::White(a) => {
            let p = WhiteParams {
                m: a.m,
                n: a.n,
                p: a.p,
                seed: master,
                directed: a.directed,
            };
            let t = gen_white(&p)?;
            write_generated(a.output.out.as_deref(), "white", json!(p), &t, touched)
        }
        Model::Periodic(a) => {
            let p = PeriodicParams {
                m: a.m,
                n: a.n,
                period: a.period,
                p: a.p,
                q: a.q,
                seed: master,
            };
            let t = gen_periodic(&p)?;
            write_generated(a.output.out.as_deref(), "periodic", json!(p), &t, touched)
        }
        Model::Darn(a) => {
            let p = darn(&a.common, a.order);
            let t = gen_darn(&p)?;
            write_generated(a.output.out.as_deref(), "darn", json!(p), &t, touched)
        }
        Model::DarnCross(a) => {
            let p = DarnCrossParams {
                base: darn(&a.common, 1),
                w: a.w,
                shift: a.shift,
            };
            let t = gen_darn_cross(&p)?;
            let mut record = json!(p);
            record["seed"] = json!(master);
            write_generated(a.output.out.as_deref(), "darn-cross", record, &t, touched)
        }
        Model::Logistic(a) => {
            let dict_seed = seed::derive(master, seed::DICTIONARY_STREAM);
            let dict = build_dictionary(a.m, a.l, a.p, dict_seed)?;
            let p = LogisticParams {
                r: a.r,
                x0: a.x0,
                n: a.n,
                transient: a.transient,
            };
            let t = gen_logistic(&p, &dict)?;
            let record = json!({
                "map": p,
                "dictionary": {"m": a.m, "l": a.l, "p": a.p, "seed": dict_seed},
                "seed": master,
            });
            write_generated(a.output.out.as_deref(), "logistic", record, &t, touched)
        }
    }
}

/// `dir/stem.C<tau>.csv` (or `Craw`) next to the curve file.
fn matrix_path(out: &Path, tau: usize, raw: bool) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = format!("{stem}.{}{tau}.csv", if raw { "Craw" } else { "C" });
    out.with_file_name(name)
}

fn seed_from_comments(comments: &[String]) -> Option<u64> {
    comments
        .iter()
        .find_map(|c| c.strip_prefix("seed: ")?.trim().parse().ok())
}

fn correlate(a: &CorrelateArgs, touched: &mut Touched) -> Result<()> {
    let out = a.output.out.as_deref();
    if !a.matrices.is_empty() && out.is_none() {
        bail!(netcorr::Error::invalid(
            "matrices",
            "matrix export needs --out to place the files"
        ));
    }
    let (traj, comments) = load_traj(a.input.as_deref(), touched)?;
    let range = LagRange::new(a.tau_min, a.tau_max, a.step)?;
    let curve = corr_curve(&traj, &range)?;

    let cfg = EngineConfig {
        kernel: match a.kernel {
            KernelArg::Auto => Kernel::Auto,
            KernelArg::Sparse => Kernel::Sparse,
            KernelArg::Dense => Kernel::Dense,
        },
        ..EngineConfig::default()
    };
    let format = match a.matrix_format {
        MatrixFormatArg::Dense => MatrixFormat::Dense,
        MatrixFormatArg::Sparse => MatrixFormat::Sparse,
    };
    let mu = (!a.raw && !a.matrices.is_empty()).then(|| traj.annealed_mean());
    let mut matrices = Vec::new();
    for &tau in &a.matrices {
        let matrix = match &mu {
            Some(mu) => centered_corr_matrix_with(&traj, tau, mu, &cfg)?,
            None => corr_matrix_with(&traj, tau, &cfg)?,
        };
        matrices.push(matrix);
    }

    emit(out, |w| write_curve(w, &curve))?;
    touched.outputs.extend(out.map(Path::to_path_buf));
    if let Some(out) = out {
        for (&tau, matrix) in a.matrices.iter().zip(&matrices) {
            let path = matrix_path(out, tau, a.raw);
            let sidecar = MatrixSidecar {
                m: traj.m(),
                n: traj.len(),
                tau,
                centered: !a.raw,
                format,
                source: a.input.as_ref().map(|p| p.display().to_string()),
                seed: seed_from_comments(&comments),
            };
            save_matrix(&path, matrix, &sidecar)?;
            touched.outputs.push(path);
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct Entry<T: Serialize> {
    input: String,
    #[serde(flatten)]
    result: T,
}

fn analyze(kind: &Analysis, master: u64, touched: &mut Touched) -> Result<()> {
    match kind {
        Analysis::Zscore(a) => {
            let out = a.output.out.as_deref();
            let mut entries = Vec::new();
            let mut lines = Vec::new();
            for (input, curve) in load_curves(&a.curves.inputs, touched)? {
                let r = period_zscore(&curve, a.period)?;
                lines.push(labelled(&input, a.curves.inputs.len(), r.to_string()));
                entries.push(Entry { input, result: r });
            }
            write_json(
                out,
                &json!({"analysis": "zscore", "t": a.period, "results": entries}),
                touched,
            )?;
            summarize(out, &lines);
        }
        Analysis::Decay(a) => decay(a, touched)?,
        Analysis::Lifetimes(a) => {
            let out = a.output.out.as_deref();
            let (traj, _) = load_traj(a.input.as_deref(), touched)?;
            let curve = corr_curve(&traj, &LagRange::up_to(a.tau_max))?;
            let opts = LifetimeOptions {
                n_shuffles: a.shuffles,
                seed: master,
                null: match a.null {
                    NullArg::SnapshotOrder => NullModel::SnapshotOrder,
                    NullArg::EdgeTime => NullModel::EdgeTime,
                },
                revival_fraction: a.revival,
                ..LifetimeOptions::default()
            };
            let r = lifetimes(&traj, &curve, &opts)?;
            let show = |v: Option<usize>| v.map_or("undefined".to_string(), |t| t.to_string());
            let line = format!(
                "tau_CLT={} tau_ACLT={} shuffles={} null={}",
                show(r.tau_clt),
                show(r.tau_aclt),
                r.n_shuffles,
                serde_json::to_value(r.null_model)?
                    .as_str()
                    .unwrap_or_default()
            );
            write_json(
                out,
                &json!({"analysis": "lifetimes", "tau_max": a.tau_max, "report": r}),
                touched,
            )?;
            summarize(out, &[line]);
        }
        Analysis::Scaling(a) => {
            let out = a.output.out.as_deref();
            let mut entries = Vec::new();
            let mut lines = Vec::new();
            for (input, curve) in load_curves(&a.curves.inputs, touched)? {
                let f = peak_scaling(&curve, a.k_min, a.k_max)?;
                let line = format!(
                    "alpha={:.3} k={}..{} r2={:.3}",
                    f.alpha, a.k_min, a.k_max, f.r_squared
                );
                lines.push(labelled(&input, a.curves.inputs.len(), line));
                entries.push(Entry { input, result: f });
            }
            write_json(
                out,
                &json!({"analysis": "scaling", "results": entries}),
                touched,
            )?;
            summarize(out, &lines);
        }
        Analysis::Offdiag(a) => {
            let out = a.output.out.as_deref();
            let sources: Vec<Option<&Path>> = if a.inputs.is_empty() {
                vec![None]
            } else {
                a.inputs.iter().map(|p| Some(p.as_path())).collect()
            };
            let mut entries = Vec::new();
            let mut lines = Vec::new();
            for src in sources {
                let (traj, _) = load_traj(src, touched)?;
                let cfg = EngineConfig::default();
                let matrix = if a.raw {
                    corr_matrix_with(&traj, a.tau, &cfg)?
                } else {
                    centered_corr_matrix_with(&traj, a.tau, &traj.annealed_mean(), &cfg)?
                };
                let ratio = offdiag_ratio(&matrix)?;
                let input = src.map_or("-".into(), |p| p.display().to_string());
                lines.push(labelled(
                    &input,
                    a.inputs.len(),
                    format!("offdiag={ratio:.6} tau={}", a.tau),
                ));
                entries.push(Entry {
                    input,
                    result: json!({"ratio": ratio}),
                });
            }
            write_json(
                out,
                &json!({"analysis": "offdiag", "tau": a.tau, "centered": !a.raw, "results": entries}),
                touched,
            )?;
            summarize(out, &lines);
        }
    }
    Ok(())
}

fn labelled(input: &str, count: usize, line: String) -> String {
    if count > 1 {
        format!("{input}: {line}")
    } else {
        line
    }
}

#[derive(Serialize)]
struct DecayEntry {
    plateau: usize,
    fit: DecayFit,
}

fn decay(a: &DecayArgs, touched: &mut Touched) -> Result<()> {
    let out = a.output.out.as_deref();
    let curves = load_curves(&a.curves.inputs, touched)?;
    if a.order.len() > 1 && a.order.len() != curves.len() {
        bail!(netcorr::Error::invalid(
            "order",
            format!("{} orders for {} curves", a.order.len(), curves.len())
        ));
    }
    let window = match a.window.as_deref() {
        None => None,
        Some(&[lo, hi]) => Some((lo, hi)),
        Some(_) => bail!(netcorr::Error::invalid("window", "expected `a,b`")),
    };
    let mut entries = Vec::new();
    let mut lines = Vec::new();
    for (k, (input, curve)) in curves.into_iter().enumerate() {
        let order = a.order.get(k).or(a.order.first()).copied();
        let plateau = plateau_detect_with(&curve, a.tolerance)?;
        let fit = decay_fit(&curve, window, order.or(Some(plateau)))?;
        lines.push(labelled(
            &input,
            a.curves.inputs.len(),
            format!(
                "p={} plateau={} beta={:.4} window=[{},{}] r2={:.3}",
                fit.plateau_end,
                plateau,
                fit.beta,
                fit.fit_window.0,
                fit.fit_window.1,
                fit.r_squared
            ),
        ));
        entries.push(Entry {
            input,
            result: DecayEntry { plateau, fit },
        });
    }
    let exponent: Option<LineFit> = if entries.len() > 1 {
        let ps: Vec<f64> = entries
            .iter()
            .map(|e| e.result.fit.plateau_end as f64)
            .collect();
        let betas: Vec<f64> = entries.iter().map(|e| e.result.fit.beta).collect();
        let f = power_law(&ps, &betas).context("fitting beta against memory order")?;
        lines.push(format!("beta ~ p^{:.3} r2={:.3}", f.slope, f.r_squared));
        Some(f)
    } else {
        None
    };
    write_json(
        out,
        &json!({"analysis": "decay", "tolerance": a.tolerance, "results": entries, "exponent": exponent}),
        touched,
    )?;
    summarize(out, &lines);
    Ok(())
}

fn ingest(a: &IngestArgs, touched: &mut Touched) -> Result<()> {
    let out = a.output.out.as_deref();
    let opts = ParseOptions {
        format: match a.format {
            ContactFormatArg::Tij => ContactFormat::Tij,
            ContactFormatArg::Csv => ContactFormat::Csv,
        },
        delimiter: a.delimiter,
        columns: a.cols.as_deref().map(str::parse).transpose()?,
    };
    touched.inputs.extend(a.input.clone());
    let events = parse_contacts(reader(a.input.as_deref())?, &opts)?;
    let mut spec = BinningSpec::new(a.resolution);
    match a.window.as_deref() {
        None => {}
        Some(&[start, end]) => {
            spec.start = Some(start);
            spec.end = Some(end);
        }
        Some(_) => bail!(netcorr::Error::invalid("window", "expected `start,end`")),
    }
    let traj = bin_to_trajectory(&events, &spec)?;
    let comments = vec![
        format!("netcorr {VERSION} ingest"),
        format!(
            "source: {}",
            a.input
                .as_ref()
                .map_or("-".into(), |p| p.display().to_string())
        ),
        format!("binning: {}", json!(spec)),
        format!(
            "events: {} dropped_self_loops: {}",
            events.len(),
            events.dropped_self_loops()
        ),
    ];
    emit(out, |w| write_trajectory(w, &traj, &comments))?;
    touched.outputs.extend(out.map(Path::to_path_buf));
    eprintln!(
        "m={} n={} events={} dropped_self_loops={}",
        traj.m(),
        traj.len(),
        events.len(),
        events.dropped_self_loops()
    );
    Ok(())
}
