use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nnforecast::bpnn::{self, SgdConfig};
use nnforecast::eval::{ModelSpec, DEFAULT_GRNN_BETA};
use nnforecast::kernels::KernelSpec;
use nnforecast::{lssvm, svr};

#[derive(Debug, Parser)]
#[command(name = "nnforecast", version, about = "Benchmark five regressors on weekly price series")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Score every selected model on the test split (results.csv).
    Benchmark(Common),
    /// Score SVR under the four kernels (kernels.csv).
    Kernels(Common),
    /// Repeat BP training over consecutive seeds (stability.csv).
    Stability {
        #[command(flatten)]
        common: Common,
        /// Number of seeded runs.
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(2..))]
        runs: u64,
    },
    /// Lag-one error series for each selected model (lag_<model>.csv).
    Lag(Common),
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Benchmark(c) | Command::Kernels(c) | Command::Lag(c) => c,
            Command::Stability { common, .. } => common,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelName {
    Bp,
    Rbf,
    Grnn,
    Svr,
    Lssvm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelName {
    Linear,
    Poly,
    Rbf,
    Mlp,
}

#[derive(Debug, Args)]
pub struct Common {
    /// `date,close` CSV of weekly prices.
    #[arg(long)]
    pub data: PathBuf,

    /// Directory for the report files.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,

    #[arg(long, value_delimiter = ',', default_value = "bp,rbf,grnn,svr,lssvm")]
    pub models: Vec<ModelName>,

    #[arg(long, default_value_t = 42)]
    pub seed: u64,

    /// Fraction of samples used for training.
    #[arg(long, default_value_t = 0.8)]
    pub train_frac: f64,

    /// Kernel for SVR and LS-SVM; defaults to RBF with the median-distance width.
    #[arg(long, value_enum)]
    pub kernel: Option<KernelName>,
    #[arg(long, default_value_t = 2)]
    pub poly_d: u32,
    #[arg(long, default_value_t = 1.0)]
    pub poly_c: f64,
    /// RBF kernel width; defaults to the median pairwise distance.
    #[arg(long)]
    pub rbf_sigma: Option<f64>,
    #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
    pub mlp_k: f64,
    #[arg(long, default_value_t = -0.5, allow_negative_numbers = true)]
    pub mlp_theta: f64,

    #[arg(long, default_value_t = bpnn::DEFAULT_ETA)]
    pub eta: f64,
    #[arg(long, default_value_t = bpnn::DEFAULT_BATCH_SIZE)]
    pub batch: usize,
    #[arg(long, default_value_t = bpnn::DEFAULT_EPOCHS)]
    pub epochs: usize,
    /// Hidden width; defaults to the rule of thumb.
    #[arg(long)]
    pub hidden: Option<usize>,

    /// Number of RBF centers; defaults to max(3, floor(sqrt(n))).
    #[arg(long)]
    pub rbf_centers: Option<usize>,

    #[arg(long, default_value_t = DEFAULT_GRNN_BETA)]
    pub grnn_beta: f64,
    /// Keep the GRNN neuron set fixed during the test walk.
    #[arg(long)]
    pub grnn_static: bool,
    /// Feed GRNN min-max scaled prices instead of raw prices.
    #[arg(long)]
    pub grnn_scaled: bool,

    #[arg(long, default_value_t = svr::DEFAULT_EPSILON)]
    pub svr_eps: f64,
    #[arg(long, default_value_t = svr::DEFAULT_C)]
    pub svr_c: f64,

    #[arg(long, default_value_t = lssvm::DEFAULT_GAMMA)]
    pub lssvm_gamma: f64,
}

impl Common {
    pub fn sgd(&self) -> SgdConfig {
        SgdConfig {
            eta: self.eta,
            batch_size: self.batch,
            epochs: self.epochs,
            seed: self.seed,
        }
    }

    /// Kernel built from the parameter flags; `None` for the median RBF default.
    pub fn kernel_of(&self, name: KernelName) -> nnforecast::Result<Option<KernelSpec<f64>>> {
        Ok(Some(match name {
            KernelName::Linear => KernelSpec::Linear,
            KernelName::Poly => KernelSpec::polynomial(self.poly_d, self.poly_c)?,
            KernelName::Mlp => KernelSpec::mlp(self.mlp_k, self.mlp_theta)?,
            KernelName::Rbf => match self.rbf_sigma {
                Some(s) => KernelSpec::rbf(s)?,
                None => return Ok(None),
            },
        }))
    }

    pub fn selected_kernel(&self) -> nnforecast::Result<Option<KernelSpec<f64>>> {
        match self.kernel {
            Some(k) => self.kernel_of(k),
            None => self.kernel_of(KernelName::Rbf),
        }
    }

    pub fn svr_spec(&self, kernel: Option<KernelSpec<f64>>) -> ModelSpec<f64> {
        ModelSpec::Svr {
            kernel,
            epsilon: self.svr_eps,
            c: self.svr_c,
            tol: svr::DEFAULT_TOL,
            max_passes: svr::DEFAULT_MAX_PASSES,
        }
    }

    pub fn spec(&self, model: ModelName) -> nnforecast::Result<ModelSpec<f64>> {
        Ok(match model {
            ModelName::Bp => ModelSpec::Bp {
                hidden: self.hidden,
                sgd: self.sgd(),
            },
            ModelName::Rbf => ModelSpec::Rbf {
                centers: self.rbf_centers,
                seed: self.seed,
            },
            ModelName::Grnn => ModelSpec::Grnn {
                beta: self.grnn_beta,
                dynamic: !self.grnn_static,
                scaled: self.grnn_scaled,
            },
            ModelName::Svr => self.svr_spec(self.selected_kernel()?),
            ModelName::Lssvm => ModelSpec::Lssvm {
                kernel: self.selected_kernel()?,
                gamma: self.lssvm_gamma,
            },
        })
    }

    /// Every resolved setting, as one `key=value` line.
    pub fn describe(&self, command: &str, extra: &[(&str, String)]) -> String {
        let models: Vec<String> = self.models.iter().map(|m| value_name(*m)).collect();
        let opt = |v: Option<String>| v.unwrap_or_else(|| "auto".to_string());
        let kernel = self.kernel.map(value_name);
        let mut s = format!("command={command} data={} models={}", self.data.display(), models.join(","));
        let fields = [
            ("seed", self.seed.to_string()),
            ("train_frac", self.train_frac.to_string()),
            ("kernel", opt(kernel)),
            ("poly_d", self.poly_d.to_string()),
            ("poly_c", self.poly_c.to_string()),
            ("rbf_sigma", opt(self.rbf_sigma.map(|v| v.to_string()))),
            ("mlp_k", self.mlp_k.to_string()),
            ("mlp_theta", self.mlp_theta.to_string()),
            ("eta", self.eta.to_string()),
            ("batch", self.batch.to_string()),
            ("epochs", self.epochs.to_string()),
            ("hidden", opt(self.hidden.map(|v| v.to_string()))),
            ("rbf_centers", opt(self.rbf_centers.map(|v| v.to_string()))),
            ("grnn_beta", self.grnn_beta.to_string()),
            ("grnn_dynamic", (!self.grnn_static).to_string()),
            ("grnn_scaled", self.grnn_scaled.to_string()),
            ("svr_eps", self.svr_eps.to_string()),
            ("svr_c", self.svr_c.to_string()),
            ("lssvm_gamma", self.lssvm_gamma.to_string()),
        ];
        for (k, v) in fields.iter().chain(extra) {
            let _ = write!(s, " {k}={v}");
        }
        s
    }
}

fn value_name(v: impl ValueEnum) -> String {
    v.to_possible_value()
        .map(|p| p.get_name().to_string())
        .unwrap_or_default()
}
