use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use ergolab_core::diagnostics::{poisson_r_pdf, reference_density, surmise_pdf, ReferenceDensity};
use ergolab_core::ensemble::{
    run_ensemble, Diagnostic, EnsembleResult, EnsembleSpec, ExportFormat, RunOptions,
};
use ergolab_core::stategraph::to_state_graph;
use serde::Deserialize;
use serde_json::Value;

use crate::spec_args::parse_spec;
use crate::{CliError, Format, GraphArgs, ReferenceArgs, ReferenceKind, RunArgs, SweepArgs};

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

fn write_file(path: &Path, body: &str) -> Result<(), CliError> {
    std::fs::write(path, body).map_err(|e| io_err(path, e))
}

fn emit(out: Option<&Path>, body: &str) -> Result<(), CliError> {
    match out {
        Some(p) => write_file(p, body),
        None => std::io::stdout()
            .write_all(body.as_bytes())
            .map_err(|e| CliError::Io(format!("stdout: {e}"))),
    }
}

fn options(workers: Option<usize>) -> Result<RunOptions, CliError> {
    match workers {
        Some(0) => Err(CliError::Validation("--workers must be at least 1".into())),
        Some(w) => Ok(RunOptions::with_workers(w)),
        None => Ok(RunOptions::default()),
    }
}

/// Writes the requested formats plus a `<stem>.spec.json` echo that reruns
/// the same experiment.
fn write_result(
    result: &EnsembleResult,
    dir: &Path,
    format: Format,
) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let mut written = Vec::new();
    if matches!(format, Format::Csv | Format::Both) {
        written.push(result.export(dir, ExportFormat::Csv)?);
    }
    if matches!(format, Format::Json | Format::Both) {
        written.push(result.export(dir, ExportFormat::Json)?);
    }
    let stem = result.file_name(ExportFormat::Json);
    let stem = stem.trim_end_matches(".json");
    let echo = dir.join(format!("{stem}.spec.json"));
    let mut body =
        serde_json::to_string_pretty(&result.spec).map_err(ergolab_core::error::Error::from)?;
    body.push('\n');
    write_file(&echo, &body)?;
    written.push(echo);
    Ok(written)
}

fn report(result: &EnsembleResult) {
    eprintln!(
        "{}: {} realizations ({} failed), {} states, {:.2}s",
        result.spec.model.name(),
        result.realizations,
        result.failed,
        result.diagnosed_states(),
        result.timing.wall_time_seconds
    );
    for (d, s) in &result.summaries {
        eprintln!(
            "  {:<15} mean {:.6}  std {:.6}  n {}",
            d.name(),
            s.mean,
            s.std(),
            s.count
        );
    }
    for (r, ks) in &result.r_ks {
        eprintln!("  ks_r {:<10} {ks:.4}", r.name());
    }
}

pub fn run(args: &RunArgs) -> Result<(), CliError> {
    let spec = args.spec.to_spec()?;
    let opts = options(args.workers)?;
    if args.dry_run {
        let resolved = spec.resolved()?;
        let body =
            serde_json::to_string_pretty(&resolved).map_err(ergolab_core::error::Error::from)?;
        println!("{body}");
        return Ok(());
    }
    let result = run_ensemble(&spec, &opts)?;
    let written = write_result(&result, &args.out, args.format)?;
    if !args.quiet {
        report(&result);
    }
    for p in written {
        println!("{}", p.display());
    }
    Ok(())
}

fn parse_grid(raw: Option<&str>, default: (f64, f64)) -> Result<(f64, f64, usize), CliError> {
    let bad = || {
        CliError::Validation(format!(
            "--grid `{}` must look like LO:HI:N with LO < HI and N >= 2",
            raw.unwrap_or("")
        ))
    };
    let Some(raw) = raw else {
        return Ok((default.0, default.1, 1001));
    };
    let parts: Vec<&str> = raw.split(':').collect();
    let [lo, hi, n] = parts[..] else {
        return Err(bad());
    };
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    let n: usize = n.trim().parse().map_err(|_| bad())?;
    if !(lo.is_finite() && hi.is_finite()) || lo >= hi || n < 2 {
        return Err(bad());
    }
    Ok((lo, hi, n))
}

pub fn reference(args: &ReferenceArgs) -> Result<(), CliError> {
    let ratio = matches!(args.kind, ReferenceKind::PoissonR | ReferenceKind::Surmise);
    let (lo, hi, n) = parse_grid(
        args.grid.as_deref(),
        if ratio { (0.0, 1.0) } else { (-2.0, 2.0) },
    )?;
    let pdf: Box<dyn Fn(f64) -> Result<f64, CliError>> = match args.kind {
        ReferenceKind::PoissonR => Box::new(|x| Ok(poisson_r_pdf(x))),
        ReferenceKind::Surmise => {
            let beta = args.beta;
            surmise_pdf(beta, 0.5)?;
            Box::new(move |x| Ok(surmise_pdf(beta, x)?))
        }
        ReferenceKind::Semicircle => {
            Box::new(|x| Ok(reference_density(ReferenceDensity::Semicircle, x)?))
        }
        ReferenceKind::KestenMckay => {
            let kind = ReferenceDensity::KestenMckay { d: args.d };
            kind.validate()?;
            Box::new(move |x| Ok(reference_density(kind, x)?))
        }
    };
    let mut body = String::from("x,pdf\n");
    for i in 0..n {
        let x = lo + (hi - lo) * i as f64 / (n - 1) as f64;
        let _ = writeln!(body, "{x},{}", pdf(x)?);
    }
    emit(args.out.as_deref(), &body)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepFile {
    base: Value,
    sweep: Value,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Axis {
    parameter: String,
    values: Vec<Value>,
}

/// Sets a dotted path (`model.params.lambda`, `model.disorder.params.1`) in a
/// JSON document. Missing object keys are created; array indices must exist.
fn set_path(doc: &mut Value, path: &str, value: Value) -> Result<(), CliError> {
    let bad = |why: &str| CliError::Validation(format!("sweep parameter `{path}`: {why}"));
    let keys: Vec<&str> = path.split('.').collect();
    if keys.iter().any(|k| k.is_empty()) {
        return Err(bad("empty path segment"));
    }
    let mut node = doc;
    for (i, key) in keys.iter().enumerate() {
        let last = i + 1 == keys.len();
        node = match node {
            Value::Object(map) => {
                if last {
                    map.insert((*key).to_owned(), value);
                    return Ok(());
                }
                map.entry(*key)
                    .or_insert_with(|| Value::Object(Default::default()))
            }
            Value::Array(items) => {
                let idx: usize = key.parse().map_err(|_| bad("expected an array index"))?;
                let len = items.len();
                let slot = items
                    .get_mut(idx)
                    .ok_or_else(|| bad(&format!("index {idx} out of range for length {len}")))?;
                if last {
                    *slot = value;
                    return Ok(());
                }
                slot
            }
            _ => return Err(bad("path runs through a scalar")),
        };
    }
    unreachable!("loop returns on the last segment")
}

fn value_label(v: &Value) -> String {
    let raw = match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    raw.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || matches!(c, '.' | '-' | '_') {
                c
            } else {
                '_'
            }
        })
        .collect()
}

fn load_sweep(path: &Path) -> Result<(String, Vec<(Value, EnsembleSpec)>), CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let file: SweepFile = serde_json::from_str(&text).map_err(|e| {
        CliError::Validation(format!(
            "{}: line {} column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })?;
    if file.sweep.is_array() {
        return Err(CliError::Validation(
            "multi-axis sweeps are not supported; give a single {\"parameter\", \"values\"} object"
                .into(),
        ));
    }
    let axis: Axis = serde_json::from_value(file.sweep)
        .map_err(|e| CliError::Validation(format!("sweep: {e}")))?;
    if axis.values.is_empty() {
        return Err(CliError::Validation("sweep: `values` is empty".into()));
    }
    if axis.values.iter().any(|v| v.is_array() || v.is_object()) {
        return Err(CliError::Validation(
            "sweep: values must be scalars; multi-axis sweeps are not supported".into(),
        ));
    }
    // Every point is validated before anything runs.
    let mut points = Vec::with_capacity(axis.values.len());
    for v in axis.values {
        let mut doc = file.base.clone();
        set_path(&mut doc, &axis.parameter, v.clone())?;
        let spec =
            parse_spec(doc).map_err(|e| CliError::Validation(format!("sweep value {v}: {e}")))?;
        points.push((v, spec));
    }
    Ok((axis.parameter, points))
}

pub fn sweep(args: &SweepArgs) -> Result<(), CliError> {
    let (parameter, points) = load_sweep(&args.spec)?;
    let opts = options(args.workers)?;
    let leaf = parameter
        .rsplit('.')
        .next()
        .unwrap_or(&parameter)
        .to_owned();
    let mut results = Vec::with_capacity(points.len());
    for (v, spec) in &points {
        let result = run_ensemble(spec, &opts)?;
        if !args.quiet {
            eprint!("{parameter} = {v}: ");
            report(&result);
        }
        results.push((v, result));
    }
    let mut table = String::from("parameter,value,mean_omega,mean_r\n");
    for (v, result) in &results {
        let dir = args.out.join(format!("{leaf}_{}", value_label(v)));
        for p in write_result(result, &dir, Format::Both)? {
            println!("{}", p.display());
        }
        let omega = result
            .mean(Diagnostic::OmegaPosition)
            .or_else(|| result.mean(Diagnostic::OmegaMomentum));
        let fmt = |x: Option<f64>| x.map(|x| x.to_string()).unwrap_or_default();
        let _ = writeln!(
            table,
            "{parameter},{},{},{}",
            value_label(v),
            fmt(omega),
            fmt(result.mean(Diagnostic::RStats))
        );
    }
    let summary = args.out.join("sweep_summary.csv");
    write_file(&summary, &table)?;
    println!("{}", summary.display());
    Ok(())
}

pub fn graph(args: &GraphArgs) -> Result<(), CliError> {
    let spec = args.spec.to_spec()?;
    let h = spec.model.build(args.realization)?;
    let g = to_state_graph(&h, args.threshold)?;
    emit(args.out.as_deref(), &g.to_edge_list())
}
