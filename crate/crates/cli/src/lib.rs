//! Command implementations for the `gtd-noise` binary.
//!
//! Every command renders a complete output document (CSV with a `#` metadata
//! header, or JSON with a `meta` object) from a fully resolved
//! configuration, so identical configurations produce byte-identical output.

use serde::Serialize;

use gtd_noise::dephasing::{self, Regime};
use gtd_noise::params::amplitude_aj;
use gtd_noise::{cosmo, spectral, tables, verify};
use gtd_noise::{Error, GtdParams, PhysicalConstants, Result};

pub const TOOL_NAME: &str = "gtd-noise";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn as_str(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

/// Fully resolved run configuration, echoed into every output.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: String,
    pub format: OutputFormat,
    pub seed: u64,
    pub sig_figs: Option<u8>,
    pub params: GtdParams,
    pub constants: PhysicalConstants,
}

impl RunConfig {
    pub fn new(command: impl Into<String>, format: OutputFormat, seed: u64, sig_figs: Option<u8>) -> Result<Self> {
        let constants = PhysicalConstants::si();
        constants.validate()?;
        let params = GtdParams::si_holographic(&constants)?;
        Ok(RunConfig { command: command.into(), format, seed, sig_figs, params, constants })
    }

    pub fn with_params_json(mut self, text: &str) -> Result<Self> {
        self.params = GtdParams::from_json(text, &self.constants)?;
        Ok(self)
    }

    fn fmt(&self, x: f64) -> String {
        match self.sig_figs {
            None => format!("{x:e}"),
            Some(n) => format!("{:.*e}", n.max(1) as usize - 1, x),
        }
    }

    fn meta_header(&self) -> String {
        let params = serde_json::to_string(&self.params).unwrap_or_default();
        format!(
            "# tool = {TOOL_NAME} {TOOL_VERSION}\n# command = {}\n# format = {}\n# seed = {}\n# sig_figs = {}\n# params = {}\n",
            self.command,
            self.format.as_str(),
            self.seed,
            self.sig_figs.map_or("full".to_string(), |n| n.to_string()),
            params,
        )
    }

    fn meta_json(&self) -> serde_json::Value {
        serde_json::json!({
            "tool": TOOL_NAME,
            "version": TOOL_VERSION,
            "command": self.command,
            "seed": self.seed,
            "sig_figs": self.sig_figs,
            "params": self.params,
        })
    }

    fn render_rows<T: Serialize>(&self, columns: &[&str], rows: &[T], cells: impl Fn(&T) -> Vec<String>) -> Result<String> {
        match self.format {
            OutputFormat::Csv => {
                let mut out = self.meta_header();
                out.push_str(&columns.join(","));
                out.push('\n');
                for row in rows {
                    out.push_str(&cells(row).join(","));
                    out.push('\n');
                }
                Ok(out)
            }
            OutputFormat::Json => {
                let doc = serde_json::json!({ "meta": self.meta_json(), "data": rows });
                Ok(format!("{}\n", serde_json::to_string_pretty(&doc)?))
            }
        }
    }
}

/// `tables {suppression|populated|thresholds}`
pub fn cmd_tables(which: &str, cfg: &RunConfig) -> Result<String> {
    match which {
        "suppression" => {
            let rows = tables::suppression_table(&cfg.constants)?;
            cfg.render_rows(&["band", "omega_s", "suppression"], &rows, |r| {
                vec![r.band.to_string(), cfg.fmt(r.omega_s), cfg.fmt(r.suppression)]
            })
        }
        "populated" => {
            let rows = tables::populated_table();
            cfg.render_rows(
                &["beta_hbar_omega0", "n_F", "backward_over_forward", "pedestal_weight"],
                &rows,
                |r| {
                    vec![
                        cfg.fmt(r.beta_hbar_omega0),
                        cfg.fmt(r.n_f),
                        cfg.fmt(r.backward_over_forward),
                        cfg.fmt(r.pedestal_weight),
                    ]
                },
            )
        }
        "thresholds" => {
            let rows = tables::threshold_table(&cfg.constants)?;
            cfg.render_rows(&["C_match", "lambda", "N_star", "mass_kg"], &rows, |r| {
                vec![cfg.fmt(r.c_match), cfg.fmt(r.lambda), cfg.fmt(r.n_star), cfg.fmt(r.mass_kg)]
            })
        }
        other => Err(Error::InvalidParameter(format!(
            "unknown table '{other}' (expected suppression, populated, or thresholds)"
        ))),
    }
}

/// `verify {wick|hasvac|bateman|dephasing|cp|all}`: JSON report; the bool is
/// the overall pass flag (exit 1 when false).
pub fn cmd_verify(suite: &str, cfg: &RunConfig) -> Result<(String, bool)> {
    let reports = verify::run_suite(suite, cfg.seed)?;
    let passed = reports.iter().all(|r| r.passed);
    let doc = serde_json::json!({
        "meta": cfg.meta_json(),
        "passed": passed,
        "suites": reports,
    });
    Ok((format!("{}\n", serde_json::to_string_pretty(&doc)?), passed))
}

#[derive(Debug, Clone)]
pub struct DephaseArgs {
    pub t_grid: Vec<f64>,
    pub gamma: Option<f64>,
    pub omega0: Option<f64>,
    pub a_j: Option<f64>,
    pub mc_samples: Option<u64>,
}

#[derive(Serialize)]
struct DephaseRow {
    t: f64,
    d_exact: f64,
    d_broadened: f64,
    regime: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    mc_estimate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mc_stderr: Option<f64>,
}

/// `dephase --t-grid ... [--gamma --omega0 --aj --mc-samples]`
pub fn cmd_dephase(args: &DephaseArgs, cfg: &RunConfig) -> Result<String> {
    if args.t_grid.is_empty() {
        return Err(Error::InvalidGrid("empty T grid".into()));
    }
    let omega0 = args.omega0.unwrap_or(cfg.params.omega0);
    let gamma = args.gamma.unwrap_or(cfg.params.gamma_width);
    let a_j = match args.a_j {
        Some(v) => v,
        None => amplitude_aj(&cfg.params, cfg.constants.hbar)?,
    };
    if omega0.is_nan() || omega0 <= 0.0 {
        return Err(Error::InvalidParameter(format!("omega0 must be > 0, got {omega0}")));
    }

    let big_omega = 2.0 * omega0;
    let mut rows = Vec::with_capacity(args.t_grid.len());
    for (i, &t) in args.t_grid.iter().enumerate() {
        let (mc_estimate, mc_stderr) = match args.mc_samples {
            Some(n) if n > 0 => {
                let est = dephasing::mc_d_estimate(a_j, omega0, t, n, cfg.seed.wrapping_add(i as u64));
                (Some(est.mean), Some(est.std_error))
            }
            _ => (None, None),
        };
        rows.push(DephaseRow {
            t,
            d_exact: dephasing::d_exact(a_j, omega0, t)?,
            d_broadened: dephasing::d_broadened(a_j, big_omega, gamma, t)?,
            regime: Regime::classify(t, big_omega, gamma).as_str(),
            mc_estimate,
            mc_stderr,
        });
    }

    let with_mc = args.mc_samples.is_some_and(|n| n > 0);
    let columns: Vec<&str> = if with_mc {
        vec!["T", "D_exact", "D_broadened", "regime", "mc_estimate", "mc_stderr"]
    } else {
        vec!["T", "D_exact", "D_broadened", "regime"]
    };
    cfg.render_rows(&columns, &rows, |r| {
        let mut cells = vec![cfg.fmt(r.t), cfg.fmt(r.d_exact), cfg.fmt(r.d_broadened), r.regime.to_string()];
        if with_mc {
            cells.push(cfg.fmt(r.mc_estimate.unwrap_or(f64::NAN)));
            cells.push(cfg.fmt(r.mc_stderr.unwrap_or(f64::NAN)));
        }
        cells
    })
}

/// Scannable observables paired with the parameter each one varies.
pub const SCAN_OBSERVABLES: [(&str, &str); 5] = [
    ("suppression", "omega_s"),
    ("lambda_natural", "c_match"),
    ("S0", "gamma"),
    ("threshold_N", "c_match"),
    ("t1_exponent", "mass"),
];

#[derive(Serialize)]
struct ScanRow {
    param: f64,
    value: f64,
}

/// `scan --param <name> --range <spec> --observable <name>`
pub fn cmd_scan(param: &str, grid: &[f64], observable: &str, cfg: &RunConfig) -> Result<String> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid("empty scan range".into()));
    }
    let expected_param = SCAN_OBSERVABLES
        .iter()
        .find(|(obs, _)| *obs == observable)
        .map(|(_, p)| *p)
        .ok_or_else(|| {
            Error::InvalidParameter(format!(
                "unknown observable '{observable}' (expected one of {:?})",
                SCAN_OBSERVABLES.map(|(o, _)| o)
            ))
        })?;
    if param != expected_param {
        return Err(Error::InvalidParameter(format!(
            "observable '{observable}' scans parameter '{expected_param}', got '{param}'"
        )));
    }

    let k = &cfg.constants;
    let p = &cfg.params;
    let a_j = amplitude_aj(p, k.hbar)?;
    let lambda_bench = cosmo::lambda_natural(k, k.alpha_em * k.alpha_em)?;
    let eval = |x: f64| -> Result<f64> {
        match observable {
            "suppression" => spectral::offres_suppression(x, p.omega0, p.gamma_width),
            "lambda_natural" => cosmo::lambda_natural(k, x),
            "S0" => spectral::lorentzian_s(0.0, a_j, -2.0 * p.sigma_branch.sign() * p.omega0, x),
            "threshold_N" => {
                let lambda = cosmo::lambda_natural(k, x)?;
                Ok(cosmo::amplification_threshold(lambda, k.m_nucleon)?.0)
            }
            "t1_exponent" => cosmo::t1_exponent(lambda_bench, x, k.m_nucleon, 1.0),
            _ => unreachable!(),
        }
    };

    let mut rows = Vec::with_capacity(grid.len());
    for &x in grid {
        rows.push(ScanRow { param: x, value: eval(x)? });
    }
    cfg.render_rows(&[param, observable], &rows, |r| vec![cfg.fmt(r.param), cfg.fmt(r.value)])
}

#[derive(Debug, Clone)]
pub struct SpectrumArgs {
    pub model: String,
    pub n_b: f64,
    pub n_d: f64,
    pub n_bose: f64,
}

/// `spectrum --model {wightman|symmetrized|populated-fermion|populated-boson}`
pub fn cmd_spectrum(args: &SpectrumArgs, cfg: &RunConfig) -> Result<String> {
    let hbar = cfg.constants.hbar;
    let model = match args.model.as_str() {
        "wightman" => spectral::wightman_line(&cfg.params, hbar)?,
        "symmetrized" => spectral::symmetrized_model(&cfg.params, hbar)?,
        "populated-fermion" => spectral::populated_fermion_model(&cfg.params, hbar, args.n_b, args.n_d)?,
        "populated-boson" => spectral::populated_boson_model(&cfg.params, hbar, args.n_bose)?,
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown spectrum model '{other}' (expected wightman, symmetrized, populated-fermion, or populated-boson)"
            )))
        }
    };
    let doc = serde_json::json!({ "meta": cfg.meta_json(), "spectrum": model });
    Ok(format!("{}\n", serde_json::to_string_pretty(&doc)?))
}

/// Parse a grid spec: either a comma list `0,0.5,1` or `start:stop:count`
/// (append `:log` for log spacing).
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let spec = spec.trim();
    if spec.is_empty() {
        return Err(Error::InvalidGrid("empty grid spec".into()));
    }
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 && !(parts.len() == 4 && parts[3] == "log") {
            return Err(Error::InvalidGrid(format!(
                "range must be start:stop:count or start:stop:count:log, got '{spec}'"
            )));
        }
        let start: f64 = parts[0]
            .parse()
            .map_err(|_| Error::InvalidGrid(format!("bad range start '{}'", parts[0])))?;
        let stop: f64 = parts[1]
            .parse()
            .map_err(|_| Error::InvalidGrid(format!("bad range stop '{}'", parts[1])))?;
        let count: usize = parts[2]
            .parse()
            .map_err(|_| Error::InvalidGrid(format!("bad range count '{}'", parts[2])))?;
        if count == 0 {
            return Err(Error::InvalidGrid("range count must be positive".into()));
        }
        let log = parts.len() == 4;
        if log && (start <= 0.0 || stop <= 0.0) {
            return Err(Error::InvalidGrid("log range needs positive endpoints".into()));
        }
        if count == 1 {
            return Ok(vec![start]);
        }
        let pts = (0..count)
            .map(|i| {
                let f = i as f64 / (count - 1) as f64;
                if log {
                    (start.ln() + f * (stop.ln() - start.ln())).exp()
                } else {
                    start + f * (stop - start)
                }
            })
            .collect();
        Ok(pts)
    } else {
        spec.split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidGrid(format!("bad grid value '{s}'")))
            })
            .collect()
    }
}
