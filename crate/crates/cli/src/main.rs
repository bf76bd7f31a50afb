mod args;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use nnforecast::eval::{self, ModelSpec};
use nnforecast::timeseries::{load_csv, make_windows};
use nnforecast::{DatasetF64, Error};

use args::{Cli, Command, Common, KernelName};
use output::{commit, stage, table, Staged};

const LAGS: usize = 3;

#[derive(Debug)]
enum Failure {
    Data(String),
    Numerical(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Data(_) => 2,
            Failure::Numerical(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Data(m) | Failure::Numerical(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Data(e.to_string())
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Data(format!("cannot write output: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(&cli.command) {
        Ok(paths) => {
            for p in paths {
                eprintln!("wrote {}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn run(command: &Command) -> Result<Vec<PathBuf>, Failure> {
    let common = command.common();
    if common.models.is_empty() {
        return Err(Failure::Data("no models selected".into()));
    }
    let series = load_csv::<f64>(&common.data)?;
    let ds = make_windows(&series, LAGS)?.split(common.train_frac)?;
    let staged = match command {
        Command::Benchmark(c) => benchmark(c, &ds)?,
        Command::Kernels(c) => kernels(c, &ds)?,
        Command::Stability { common, runs } => stability(common, *runs as usize, &ds)?,
        Command::Lag(c) => lag(c, &ds)?,
    };
    Ok(commit(staged)?)
}

fn fixed3(v: f64) -> String {
    format!("{v:.3}")
}

fn scored_rows(
    labels: &[&str],
    entries: Vec<eval::BenchmarkEntry<f64>>,
) -> Result<(String, Vec<Vec<String>>), Failure> {
    let mut csv = String::new();
    let mut rows = Vec::new();
    let mut first_error = None;
    let mut any_ok = false;
    for (label, entry) in labels.iter().zip(entries) {
        match entry.outcome {
            Ok(r) => {
                any_ok = true;
                csv.push_str(&format!("{label},{},{}\n", r.mse, r.mape));
                rows.push(vec![label.to_string(), fixed3(r.mse), fixed3(r.mape)]);
            }
            Err(e) => {
                eprintln!("warning: {label} failed: {e}");
                csv.push_str(&format!("{label},,\n"));
                rows.push(vec![label.to_string(), "-".into(), "-".into()]);
                first_error.get_or_insert(e);
            }
        }
    }
    match first_error {
        Some(e) if !any_ok => Err(e.into()),
        _ => Ok((csv, rows)),
    }
}

fn benchmark(c: &Common, ds: &DatasetF64) -> Result<Vec<Staged>, Failure> {
    let specs = c.models.iter().map(|&m| c.spec(m)).collect::<Result<Vec<_>, _>>()?;
    if specs.iter().any(|s| matches!(s, ModelSpec::Grnn { scaled: true, .. })) {
        eprintln!("warning: GRNN runs on scaled prices; --grnn-beta is interpreted in scaled units");
    }
    let labels: Vec<&str> = specs.iter().map(ModelSpec::name).collect();
    let (body, rows) = scored_rows(&labels, eval::benchmark(ds, &specs)?)?;
    let naive = eval::naive_forecast(ds)?.report()?;
    print!("{}", table(&["model", "mse", "mape"], &rows));
    println!("naive baseline: mse {} mape {}", fixed3(naive.mse), fixed3(naive.mape));
    let config = c.describe("benchmark", &[]);
    Ok(vec![stage(&c.out, "results.csv", &config, &format!("model,mse,mape\n{body}"))?])
}

fn kernels(c: &Common, ds: &DatasetF64) -> Result<Vec<Staged>, Failure> {
    let order = [
        (KernelName::Linear, "linear"),
        (KernelName::Poly, "poly"),
        (KernelName::Mlp, "sigmoid-mlp"),
        (KernelName::Rbf, "rbf"),
    ];
    let specs = order
        .iter()
        .map(|&(k, _)| Ok(c.svr_spec(c.kernel_of(k)?)))
        .collect::<Result<Vec<_>, Error>>()?;
    let labels: Vec<&str> = order.iter().map(|&(_, l)| l).collect();
    let (body, rows) = scored_rows(&labels, eval::benchmark(ds, &specs)?)?;
    print!("{}", table(&["kernel", "mse", "mape"], &rows));
    let config = c.describe("kernels", &[]);
    Ok(vec![stage(&c.out, "kernels.csv", &config, &format!("kernel,mse,mape\n{body}"))?])
}

fn stability(c: &Common, runs: usize, ds: &DatasetF64) -> Result<Vec<Staged>, Failure> {
    let r = eval::stability(ds, c.hidden, &c.sgd(), runs, c.seed)?;
    print!(
        "{}",
        table(
            &["runs", "mse_mean", "mse_std", "mape_mean", "mape_std"],
            &[vec![
                r.runs.to_string(),
                fixed3(r.mse_mean),
                format!("{:.3e}", r.mse_std),
                fixed3(r.mape_mean),
                format!("{:.3e}", r.mape_std),
            ]],
        )
    );
    let body = format!(
        "runs,mse_mean,mse_std,mape_mean,mape_std\n{},{},{},{},{}\n",
        r.runs, r.mse_mean, r.mse_std, r.mape_mean, r.mape_std
    );
    let config = c.describe("stability", &[("runs", runs.to_string())]);
    Ok(vec![stage(&c.out, "stability.csv", &config, &body)?])
}

fn lag(c: &Common, ds: &DatasetF64) -> Result<Vec<Staged>, Failure> {
    let config = c.describe("lag", &[]);
    let mut staged = Vec::new();
    let mut rows = Vec::new();
    for &m in &c.models {
        let spec = c.spec(m)?;
        let f = eval::forecast(ds, &spec)?;
        let r = eval::lag_one_analysis(&f.actual, &f.predicted)?;
        let mut body = String::from("t,e\n");
        for (t, e) in r.errors.iter().enumerate() {
            body.push_str(&format!("{},{e}\n", t + 1));
        }
        staged.push(stage(&c.out, &format!("lag_{}.csv", spec.name()), &config, &body)?);
        rows.push(vec![
            spec.name().to_string(),
            fixed3(r.mean),
            fixed3(r.std),
            fixed3(r.frac_negative),
        ]);
    }
    print!("{}", table(&["model", "mean", "std", "frac_negative"], &rows));
    Ok(staged)
}
