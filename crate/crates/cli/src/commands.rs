use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use forcebench::coupling::{coupled_response, mixed_stability_check, small_gain_check};
use forcebench::lti::{settling_horizon, step_response};
use forcebench::metrics::{pii, render_csv, render_markdown, Flag};
use forcebench::sysid::fit_rational;
use forcebench::{
    benchmark_report, load_system, CsvLayout, Error, FitConfig, FrequencyGrid,
    FrequencyResponseData, InputKind, LoadModel, MetricReport, ModelFile, ReportConfig, System,
    TransferFunction,
};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::args::{Format, InputFormat, RunArgs};

pub enum Failure {
    Usage(String),
    Run(Error),
    Write(PathBuf, std::io::Error),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(msg) => write!(f, "{msg}"),
            Failure::Run(e) => write!(f, "{e}"),
            Failure::Write(path, e) => write!(f, "{}: {e}", path.display()),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e)
    }
}

/// `Ok(true)` means the output is partial (exit code 2).
pub type Outcome = Result<bool, Failure>;

pub struct Context {
    pub run: RunArgs,
}

impl Context {
    fn grid(&self) -> Result<FrequencyGrid, Failure> {
        Ok(FrequencyGrid::new(
            self.run.grid_min,
            self.run.grid_max,
            self.run.grid_points,
        )?)
    }

    fn report_config(&self) -> Result<ReportConfig, Failure> {
        Ok(ReportConfig {
            epsilon: self.run.epsilon,
            grid: self.grid()?,
            omega_b: self.run.omega_b,
        })
    }

    fn kind(&self) -> Option<InputKind> {
        self.run.input_format.map(|f| match f {
            InputFormat::Model => InputKind::Model,
            InputFormat::Data => InputKind::Data,
        })
    }

    fn load(&self, path: &Path) -> Result<System, Failure> {
        Ok(load_system(path, self.kind())?)
    }

    fn load_model(&self, path: &Path) -> Result<TransferFunction, Failure> {
        match self.load(path)? {
            System::Model(tf) => Ok(tf),
            System::Data(_) => Err(Failure::Run(Error::Io {
                path: path.to_path_buf(),
                message: Error::NeedsModel.to_string(),
            })),
        }
    }

    fn emit(&self, text: &str) -> Result<(), Failure> {
        match &self.run.out {
            Some(path) => std::fs::write(path, text).map_err(|e| Failure::Write(path.clone(), e)),
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(text.as_bytes())
                    .and_then(|_| out.flush())
                    .map_err(|e| Failure::Write("<stdout>".into(), e))
            }
        }
    }
}

fn with_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn render_reports(reports: &[MetricReport], format: Format) -> String {
    match format {
        Format::Json if reports.len() == 1 => with_newline(reports[0].to_json()),
        Format::Json => {
            let values: Vec<Value> = reports
                .iter()
                .map(|r| serde_json::from_str(&r.to_json()).expect("report JSON"))
                .collect();
            with_newline(serde_json::to_string_pretty(&values).expect("plain JSON"))
        }
        Format::Markdown => render_markdown(reports),
        Format::Csv => render_csv(reports),
    }
}

fn stem(path: &Path) -> String {
    path.file_stem().map_or_else(
        || "controller".to_string(),
        |s| s.to_string_lossy().into_owned(),
    )
}

pub fn metrics(ctx: &Context, zb: &Path, zt: &Path, name: Option<&str>) -> Outcome {
    let config = ctx.report_config()?;
    let zb_sys = ctx.load(zb)?;
    let zt_sys = ctx.load(zt)?;
    let name = name.map_or_else(|| stem(zt), str::to_string);
    let report = benchmark_report(&zb_sys, &zt_sys, &config, &name)?;
    ctx.emit(&render_reports(
        std::slice::from_ref(&report),
        ctx.run.format.unwrap_or(Format::Json),
    ))?;
    Ok(report.is_partial())
}

enum Row {
    Pair {
        name: String,
        zb: PathBuf,
        zt: PathBuf,
    },
    Stored(PathBuf),
}

fn parse_controller(spec: &str) -> Result<Row, Failure> {
    let bad = || {
        Failure::Usage(format!(
            "--controller expects NAME=ZB_PATH,ZT_PATH, got {spec:?}"
        ))
    };
    let (name, paths) = spec.split_once('=').ok_or_else(bad)?;
    let (zb, zt) = paths.split_once(',').ok_or_else(bad)?;
    if name.is_empty() || zb.is_empty() || zt.is_empty() {
        return Err(bad());
    }
    Ok(Row::Pair {
        name: name.to_string(),
        zb: zb.into(),
        zt: zt.into(),
    })
}

fn compute_row(ctx: &Context, config: &ReportConfig, row: &Row) -> Result<MetricReport, Failure> {
    match row {
        Row::Pair { name, zb, zt } => {
            let loaded = ctx.load(zb).and_then(|zb| Ok((zb, ctx.load(zt)?)));
            match loaded {
                Ok((zb, zt)) => Ok(benchmark_report(&zb, &zt, config, name)?),
                Err(e) => Ok(MetricReport::blank(
                    name,
                    config.epsilon,
                    vec![Flag::failed("load", e)],
                )),
            }
        }
        Row::Stored(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
                path: path.clone(),
                message: e.to_string(),
            })?;
            MetricReport::from_json(&text).map_err(|e| {
                Failure::Run(Error::Parse {
                    path: path.clone(),
                    line: e.line() as u64,
                    column: e.column(),
                    message: e.to_string(),
                })
            })
        }
    }
}

pub fn compare(ctx: &Context, controllers: &[String], reports: &[PathBuf]) -> Outcome {
    let mut rows = controllers
        .iter()
        .map(|c| parse_controller(c))
        .collect::<Result<Vec<_>, _>>()?;
    rows.extend(reports.iter().cloned().map(Row::Stored));
    if rows.len() < 2 {
        return Err(Failure::Usage(format!(
            "compare needs at least two controllers (--controller or --report), got {}",
            rows.len()
        )));
    }
    let config = ctx.report_config()?;

    // One thread per row; results keep the command-line order.
    let results: Vec<Result<MetricReport, Failure>> = std::thread::scope(|scope| {
        let handles: Vec<_> = rows
            .iter()
            .map(|row| scope.spawn(|| compute_row(ctx, &config, row)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("row worker panicked"))
            .collect()
    });
    let reports = results.into_iter().collect::<Result<Vec<_>, _>>()?;

    ctx.emit(&render_reports(
        &reports,
        ctx.run.format.unwrap_or(Format::Markdown),
    ))?;
    Ok(reports.iter().any(MetricReport::is_partial))
}

/// Finite numbers as JSON numbers, infinities as strings.
fn number(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        Value::Null
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

fn roots_json(roots: &[Complex64]) -> Value {
    Value::Array(
        roots
            .iter()
            .map(|r| json!({"re": number(r.re), "im": number(r.im)}))
            .collect(),
    )
}

fn format_root(r: &Complex64) -> String {
    if r.im == 0.0 {
        format!("{:.6}", r.re)
    } else {
        format!(
            "{:.6} {} {:.6}j",
            r.re,
            if r.im < 0.0 { "-" } else { "+" },
            r.im.abs()
        )
    }
}

fn load_admittance(ctx: &Context, path: &Path) -> Result<TransferFunction, Failure> {
    let is_model = std::fs::read_to_string(path)
        .ok()
        .and_then(|text| serde_json::from_str::<Value>(&text).ok())
        .is_some_and(|v| v.get("num").is_some());
    if is_model {
        ctx.load_model(path)
    } else {
        Ok(LoadModel::from_json_file(path)?.admittance())
    }
}

pub fn coupled(
    ctx: &Context,
    zb: &Path,
    zt: &Path,
    load: &Path,
    step_out: Option<&Path>,
) -> Outcome {
    let grid = ctx.grid()?;
    let zb_tf = ctx.load_model(zb)?;
    let zt_tf = ctx.load_model(zt)?;
    let y = load_admittance(ctx, load)?;

    let coupled = coupled_response(&zb_tf, &zt_tf, &y)?;
    let zt_sys = System::Model(zt_tf.clone());
    let y_sys = System::Model(y.clone());
    let small_gain = small_gain_check(&zt_sys, &y_sys, &grid)?;
    let interval = pii(&zt_sys, ctx.run.epsilon, &grid)?;
    let mixed = mixed_stability_check(&zt_sys, &y_sys, &interval, &grid)?;

    let mut step_written = None;
    if let (true, Some(path)) = (coupled.stable, step_out) {
        let series = step_response(&coupled.t_y, settling_horizon(&coupled.t_y), None)?;
        let mut buf = Vec::new();
        series.write_csv(&mut buf).expect("in-memory write");
        std::fs::write(path, buf).map_err(|e| Failure::Write(path.to_path_buf(), e))?;
        step_written = Some(path.display().to_string());
    }

    let poles = coupled.t_y.uncancelled_poles();
    let text = match ctx.run.format.unwrap_or(Format::Json) {
        Format::Json => {
            let value = json!({
                "stable": coupled.stable,
                "t_y": {"num": coupled.t_y.num(), "den": coupled.t_y.den()},
                "poles": roots_json(&poles),
                "characteristic_poles": roots_json(&coupled.characteristic_poles),
                "small_gain": {
                    "holds": small_gain.holds,
                    "worst_omega_rad_s": number(small_gain.worst_omega),
                    "worst_product": number(small_gain.worst_product),
                },
                "mixed": {"guaranteed": mixed.guaranteed, "reason": mixed.reason},
                "step_response_csv": step_written,
            });
            with_newline(serde_json::to_string_pretty(&value).expect("plain JSON"))
        }
        Format::Markdown => {
            let mut s = format!(
                "### Coupled system\n\n- T_y = {}\n- stable: {}\n- poles: {}\n",
                coupled.t_y,
                if coupled.stable { "yes" } else { "no" },
                poles.iter().map(format_root).collect::<Vec<_>>().join(", ")
            );
            s.push_str(&format!(
                "- small gain: {} (worst |Z_t||Y| = {} at {} rad/s)\n- mixed passivity/small gain: {} ({})\n",
                if small_gain.holds { "holds" } else { "fails" },
                small_gain.worst_product,
                small_gain.worst_omega,
                if mixed.guaranteed { "guaranteed" } else { "not guaranteed" },
                mixed.reason
            ));
            if let Some(p) = &step_written {
                s.push_str(&format!("- step response: {p}\n"));
            }
            s
        }
        Format::Csv => {
            return Err(Failure::Usage(
                "coupled supports --format json or markdown".into(),
            ))
        }
    };
    ctx.emit(&text)?;
    Ok(false)
}

pub fn fit(ctx: &Context, frd: &Path, cfg: &FitConfig, name: Option<&str>) -> Outcome {
    let data = FrequencyResponseData::from_csv(frd)?;
    let result = fit_rational(&data, cfg)?;
    let name = name.map_or_else(|| format!("fit of {}", stem(frd)), str::to_string);
    ctx.emit(&with_newline(ModelFile::new(name, &result.tf).to_json()))?;
    eprintln!("relative RMS fit error: {:e}", result.relative_rms_error);
    if !result.stable {
        eprintln!("warning: the fitted model is unstable");
    }
    Ok(false)
}

pub fn bode(ctx: &Context, input: &Path) -> Outcome {
    let data = match ctx.load(input)? {
        System::Model(tf) => FrequencyResponseData::from_tf(&tf, &ctx.grid()?)?,
        System::Data(frd) => frd,
    };
    let mut buf = Vec::new();
    data.write_csv(&mut buf, CsvLayout::MagPhase)
        .expect("in-memory write");
    ctx.emit(&String::from_utf8(buf).expect("utf-8 CSV"))?;
    Ok(false)
}
