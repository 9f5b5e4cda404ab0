//! Run configuration: defaults, then an optional `key=value` file, then
//! command-line flags.

use std::path::{Path, PathBuf};

use tricurve::factor::FactorBudget;

#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    /// Primes up to `n` enter the Mestre–Nagao sum.
    pub n: u64,
    /// Fraction of sieved candidates processed in full.
    pub keep: f64,
    /// Good primes used for the torsion bound.
    pub primes: usize,
    /// Target accuracy of canonical heights.
    pub eps: f64,
    /// Naive height bound of the point search.
    pub height_bound: f64,
    pub factor_budget: u64,
    pub jobs: Option<usize>,
    pub out: Option<PathBuf>,
    pub long: bool,
    pub timings: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            n: 1000,
            keep: 0.01,
            primes: 20,
            eps: 1e-6,
            height_bound: 6.0,
            factor_budget: FactorBudget::default().0,
            jobs: None,
            out: None,
            long: false,
            timings: false,
        }
    }
}

/// Values as given on the command line or in the file, all optional.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub n: Option<u64>,
    pub keep: Option<f64>,
    pub primes: Option<usize>,
    pub eps: Option<f64>,
    pub height_bound: Option<f64>,
    pub factor_budget: Option<u64>,
    pub jobs: Option<usize>,
    pub out: Option<PathBuf>,
    pub long: bool,
    pub timings: bool,
}

fn parse<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, String> {
    v.trim().parse().map_err(|_| format!("bad value for {key}: {v:?}"))
}

fn parse_bool(key: &str, v: &str) -> Result<bool, String> {
    match v.trim() {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(format!("bad value for {key}: {v:?}")),
    }
}

impl Overrides {
    pub fn from_file(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        Self::from_text(&text)
    }

    pub fn from_text(text: &str) -> Result<Self, String> {
        let mut o = Overrides::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| format!("line {}: expected key=value", i + 1))?;
            let k = k.trim();
            match k {
                "N" => o.n = Some(parse(k, v)?),
                "keep" => o.keep = Some(parse(k, v)?),
                "primes" => o.primes = Some(parse(k, v)?),
                "eps" => o.eps = Some(parse(k, v)?),
                "height-bound" => o.height_bound = Some(parse(k, v)?),
                "factor-budget" => o.factor_budget = Some(parse(k, v)?),
                "jobs" => o.jobs = Some(parse(k, v)?),
                "out" => o.out = Some(PathBuf::from(v.trim())),
                "long" => o.long = parse_bool(k, v)?,
                "timings" => o.timings = parse_bool(k, v)?,
                _ => return Err(format!("line {}: unknown key {k:?}", i + 1)),
            }
        }
        Ok(o)
    }
}

impl Config {
    pub fn apply(&mut self, o: &Overrides) {
        if let Some(v) = o.n {
            self.n = v;
        }
        if let Some(v) = o.keep {
            self.keep = v;
        }
        if let Some(v) = o.primes {
            self.primes = v;
        }
        if let Some(v) = o.eps {
            self.eps = v;
        }
        if let Some(v) = o.height_bound {
            self.height_bound = v;
        }
        if let Some(v) = o.factor_budget {
            self.factor_budget = v;
        }
        if o.jobs.is_some() {
            self.jobs = o.jobs;
        }
        if o.out.is_some() {
            self.out = o.out.clone();
        }
        self.long |= o.long;
        self.timings |= o.timings;
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.n == 0 {
            return Err("N must be positive".into());
        }
        if !(self.keep > 0.0 && self.keep <= 1.0) {
            return Err("keep must lie in (0, 1]".into());
        }
        if self.primes == 0 {
            return Err("primes must be positive".into());
        }
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return Err("eps must be positive".into());
        }
        if !(self.height_bound >= 0.0 && self.height_bound <= 12.0) {
            return Err("height-bound must lie in [0, 12]".into());
        }
        if self.factor_budget == 0 || self.jobs == Some(0) {
            return Err("factor-budget and jobs must be positive".into());
        }
        Ok(())
    }
}
