//! Flat `key = value` run configuration.
//!
//! One assignment per line, `#` starts a comment. Values may be
//! comma-separated lists; `snr_db_grid` is always a list and also accepts
//! `start:step:stop`. In a sweep every other list-valued key is expanded
//! as a cartesian product.

use crate::an::SignOption;
use crate::analysis::DEFAULT_ENUMERATION_CAP;
use crate::constellation::{optimal_rotation, BaseKind};
use crate::{is_power_of_two, Error, Result};
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

/// Recognised keys, in the order they are echoed into CSV headers.
pub const KEYS: &[&str] = &[
    "mode",
    "n",
    "m",
    "base_kind",
    "rotation_deg",
    "alpha",
    "p_tot",
    "sigma_sq_bob",
    "sigma_sq_eve",
    "snr_db_grid",
    "max_blocks",
    "min_bit_errors",
    "channel_draws",
    "noise_samples",
    "seed",
    "workers",
    "an_sign",
    "bound",
    "enumeration_cap",
    "bound_exact_cap",
    "bound_pairs",
];

/// Which computation a config (or a sweep) drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Ber,
    Esr,
    Bound,
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ber" => Ok(Mode::Ber),
            "esr" => Ok(Mode::Esr),
            "bound" => Ok(Mode::Bound),
            other => Err(Error::Config(format!("unknown mode `{other}`"))),
        }
    }
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Ber => "ber",
            Mode::Esr => "esr",
            Mode::Bound => "bound",
        }
    }
}

/// Parsed but not yet typed configuration: key to list of raw values, in
/// file order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    entries: Vec<(String, Vec<String>)>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut raw = RawConfig::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", lineno + 1)))?;
            let key = key.trim();
            if !KEYS.contains(&key) {
                return Err(Error::Config(format!("line {}: unknown key `{key}`", lineno + 1)));
            }
            let values: Vec<String> = value.split(',').map(|v| v.trim().to_string()).collect();
            if values.iter().any(|v| v.is_empty()) {
                return Err(Error::Config(format!("line {}: empty value for `{key}`", lineno + 1)));
            }
            raw.set(key, values);
        }
        Ok(raw)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn get(&self, key: &str) -> Option<&[String]> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_slice())
    }

    /// Replaces (or appends) a key.
    pub fn set(&mut self, key: &str, values: Vec<String>) {
        match self.entries.iter_mut().find(|(k, _)| k == key) {
            Some(slot) => slot.1 = values,
            None => self.entries.push((key.to_string(), values)),
        }
    }

    /// Cartesian product over list-valued keys other than `snr_db_grid`;
    /// the last listed key varies fastest.
    pub fn expand(&self) -> Vec<RawConfig> {
        let mut out = vec![RawConfig::default()];
        for (key, values) in &self.entries {
            let choices: Vec<Vec<String>> = if key == "snr_db_grid" {
                vec![values.clone()]
            } else {
                values.iter().map(|v| vec![v.clone()]).collect()
            };
            out = out
                .into_iter()
                .flat_map(|base| {
                    choices.iter().map(move |c| {
                        let mut next = base.clone();
                        next.set(key, c.clone());
                        next
                    })
                })
                .collect();
        }
        out
    }
}

/// Fully typed and validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub mode: Option<Mode>,
    pub n: usize,
    pub m: usize,
    pub base_kind: BaseKind,
    pub rotation_deg: f64,
    pub alpha: f64,
    pub alpha_defaulted: bool,
    pub p_tot: f64,
    pub sigma_sq_bob: f64,
    pub sigma_sq_eve: f64,
    pub snr_db_grid: Vec<f64>,
    pub max_blocks: u64,
    pub min_bit_errors: u64,
    pub channel_draws: usize,
    pub noise_samples: usize,
    pub seed: u64,
    pub workers: usize,
    pub an_sign: SignOption,
    /// Also compute the union bound in `ber` runs.
    pub bound: bool,
    pub enumeration_cap: u64,
    /// Largest codebook for which the bound is summed exactly.
    pub bound_exact_cap: u64,
    /// Pairs drawn when the bound is sampled.
    pub bound_pairs: usize,
}

pub const DEFAULT_ALPHA: f64 = 0.5;

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            mode: None,
            n: 4,
            m: 4,
            base_kind: BaseKind::Psk,
            rotation_deg: optimal_rotation(BaseKind::Psk, 4).unwrap_or(0.0),
            alpha: DEFAULT_ALPHA,
            alpha_defaulted: true,
            p_tot: 1.0,
            sigma_sq_bob: 0.0,
            sigma_sq_eve: 0.0,
            snr_db_grid: vec![0.0, 5.0, 10.0, 15.0, 20.0],
            max_blocks: 10_000_000,
            min_bit_errors: 200,
            channel_draws: 200,
            noise_samples: 200,
            seed: 1,
            workers: 1,
            an_sign: SignOption::First,
            bound: false,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
            bound_exact_cap: 1000,
            bound_pairs: 100_000,
        }
    }
}

fn single<'a>(raw: &'a RawConfig, key: &str) -> Result<Option<&'a str>> {
    match raw.get(key) {
        None => Ok(None),
        Some([v]) => Ok(Some(v.as_str())),
        Some(_) => Err(Error::Config(format!("`{key}` takes a single value outside a sweep"))),
    }
}

fn typed<T: FromStr>(raw: &RawConfig, key: &str) -> Result<Option<T>> {
    single(raw, key)?
        .map(|v| v.parse::<T>().map_err(|_| Error::Config(format!("invalid value `{v}` for `{key}`"))))
        .transpose()
}

/// Accepts plain integers and float notation such as `1e7`.
fn count(raw: &RawConfig, key: &str) -> Result<Option<u64>> {
    let Some(v) = single(raw, key)? else { return Ok(None) };
    if let Ok(x) = v.parse::<u64>() {
        return Ok(Some(x));
    }
    match v.parse::<f64>() {
        Ok(x) if x >= 0.0 && x.fract() == 0.0 && x < 1.8e19 => Ok(Some(x as u64)),
        _ => Err(Error::Config(format!("invalid count `{v}` for `{key}`"))),
    }
}

fn parse_grid(values: &[String]) -> Result<Vec<f64>> {
    let bad = |v: &str| Error::Config(format!("invalid snr_db_grid entry `{v}`"));
    if let [single] = values {
        let parts: Vec<&str> = single.split(':').collect();
        if parts.len() == 3 {
            let p: Vec<f64> =
                parts.iter().map(|s| s.trim().parse::<f64>().map_err(|_| bad(single))).collect::<Result<_>>()?;
            let (start, step, stop) = (p[0], p[1], p[2]);
            if !(step > 0.0) || stop < start {
                return Err(bad(single));
            }
            let k = ((stop - start) / step + 1e-9).floor() as usize;
            return Ok((0..=k).map(|i| start + step * i as f64).collect());
        }
    }
    values.iter().map(|v| v.parse::<f64>().map_err(|_| bad(v))).collect()
}

impl SimConfig {
    pub fn from_raw(raw: &RawConfig) -> Result<Self> {
        let d = SimConfig::default();
        let base_kind: BaseKind = typed(raw, "base_kind")?.unwrap_or(d.base_kind);
        let m: usize = typed(raw, "m")?.unwrap_or(d.m);
        let rotation_deg = match typed::<f64>(raw, "rotation_deg")? {
            Some(r) => r,
            None => optimal_rotation(base_kind, m)?,
        };
        let alpha_value: Option<f64> = typed(raw, "alpha")?;
        let sigma_sq_bob: f64 = typed(raw, "sigma_sq_bob")?.unwrap_or(d.sigma_sq_bob);
        let snr_db_grid = match raw.get("snr_db_grid") {
            Some(v) => parse_grid(v)?,
            None => d.snr_db_grid.clone(),
        };
        let cfg = SimConfig {
            mode: typed(raw, "mode")?,
            n: typed(raw, "n")?.unwrap_or(d.n),
            m,
            base_kind,
            rotation_deg,
            alpha: alpha_value.unwrap_or(DEFAULT_ALPHA),
            alpha_defaulted: alpha_value.is_none(),
            p_tot: typed(raw, "p_tot")?.unwrap_or(d.p_tot),
            sigma_sq_bob,
            sigma_sq_eve: typed(raw, "sigma_sq_eve")?.unwrap_or(sigma_sq_bob),
            snr_db_grid,
            max_blocks: count(raw, "max_blocks")?.unwrap_or(d.max_blocks),
            min_bit_errors: count(raw, "min_bit_errors")?.unwrap_or(d.min_bit_errors),
            channel_draws: count(raw, "channel_draws")?.map_or(d.channel_draws, |x| x as usize),
            noise_samples: count(raw, "noise_samples")?.map_or(d.noise_samples, |x| x as usize),
            seed: typed(raw, "seed")?.unwrap_or(d.seed),
            workers: count(raw, "workers")?.map_or(d.workers, |x| x as usize),
            an_sign: typed(raw, "an_sign")?.unwrap_or(d.an_sign),
            bound: typed(raw, "bound")?.unwrap_or(d.bound),
            enumeration_cap: count(raw, "enumeration_cap")?.unwrap_or(d.enumeration_cap),
            bound_exact_cap: count(raw, "bound_exact_cap")?.unwrap_or(d.bound_exact_cap),
            bound_pairs: count(raw, "bound_pairs")?.map_or(d.bound_pairs, |x| x as usize),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::from_raw(&RawConfig::parse(text)?)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.n < 4 || !is_power_of_two(self.n) {
            return fail(format!("n must be a power of two >= 4, got {}", self.n));
        }
        if self.m < 2 || !is_power_of_two(self.m) {
            return fail(format!("m must be a power of two >= 2, got {}", self.m));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return fail(format!("alpha must lie in (0, 1], got {}", self.alpha));
        }
        if !(self.p_tot > 0.0) {
            return fail(format!("p_tot must be positive, got {}", self.p_tot));
        }
        for (key, s2) in [("sigma_sq_bob", self.sigma_sq_bob), ("sigma_sq_eve", self.sigma_sq_eve)] {
            if !(0.0..1.0).contains(&s2) {
                return fail(format!("{key} must lie in [0, 1), got {s2}"));
            }
        }
        if self.snr_db_grid.is_empty() {
            return fail("snr_db_grid is empty".into());
        }
        if self.snr_db_grid.iter().any(|x| !x.is_finite()) {
            return fail("snr_db_grid must be finite".into());
        }
        if self.snr_db_grid.windows(2).any(|w| w[1] <= w[0]) {
            return fail("snr_db_grid must be strictly increasing".into());
        }
        if self.max_blocks == 0 {
            return fail("max_blocks must be >= 1".into());
        }
        if self.channel_draws == 0 || self.noise_samples == 0 {
            return fail("channel_draws and noise_samples must be >= 1".into());
        }
        if self.workers == 0 {
            return fail("workers must be >= 1".into());
        }
        if self.bound_pairs == 0 {
            return fail("bound_pairs must be >= 1".into());
        }
        Ok(())
    }

    /// `E_s = alpha P / 8`, the per-symbol data energy.
    pub fn symbol_energy(&self) -> f64 {
        self.alpha * self.p_tot / 8.0
    }

    /// `N0 = E_s / 10^(snr/10)`.
    pub fn n0(&self, snr_db: f64) -> f64 {
        self.symbol_energy() / 10f64.powf(snr_db / 10.0)
    }

    /// `# key = value` lines describing everything that affects the output.
    /// `workers` is left out so that results are byte-identical across
    /// worker counts.
    pub fn echo(&self, mode: Mode) -> String {
        let grid: Vec<String> = self.snr_db_grid.iter().map(|x| x.to_string()).collect();
        let sign = match self.an_sign {
            SignOption::First => "first",
            SignOption::Second => "second",
        };
        let mut s = String::new();
        let mut line = |k: &str, v: String| {
            let _ = writeln!(s, "# {k} = {v}");
        };
        line("mode", mode.name().into());
        line("n", self.n.to_string());
        line("m", self.m.to_string());
        line("base_kind", self.base_kind.to_string());
        line("rotation_deg", self.rotation_deg.to_string());
        let alpha_note = if self.alpha_defaulted { " (default)" } else { "" };
        line("alpha", format!("{}{alpha_note}", self.alpha));
        line("p_tot", self.p_tot.to_string());
        line("sigma_sq_bob", self.sigma_sq_bob.to_string());
        line("sigma_sq_eve", self.sigma_sq_eve.to_string());
        line("snr_db_grid", grid.join(", "));
        line("max_blocks", self.max_blocks.to_string());
        line("min_bit_errors", self.min_bit_errors.to_string());
        line("channel_draws", self.channel_draws.to_string());
        line("noise_samples", self.noise_samples.to_string());
        line("seed", self.seed.to_string());
        line("an_sign", sign.into());
        line("bound", self.bound.to_string());
        line("enumeration_cap", self.enumeration_cap.to_string());
        line("bound_exact_cap", self.bound_exact_cap.to_string());
        line("bound_pairs", self.bound_pairs.to_string());
        s
    }
}
