//! Flat `key = value` experiment files.
//!
//! ```text
//! # known-Hessian sweep
//! experiment   = dependent-1-4-9
//! algorithm    = dependent            # dependent | universal | kl1d
//! eigenvalues  = 1, 4, 9              # diagonal Hessian
//! # hessian    = 2, 1; 1, 2           # or explicit rows separated by ';'
//! minimizer    = hard-instance        # hard-instance | random-in-ball | comma list
//! noise        = gaussian             # zero | gaussian | rademacher | uniform | student-t:<dof>
//! budgets      = 10000, 40000, 160000
//! replications = 500
//! base_seed    = 1
//! records      = out/records.csv
//! summary      = out/summary.json
//! wall_clock   = false                # record wall time (breaks byte-identical reruns)
//! ```
//!
//! `kl1d` experiments use `function` (`quartic` or `sextic`), `eps` and
//! `delta` instead of the Hessian, minimizer and budget keys.

use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};

use zoquad_core::kl1d::KlProblem;
use zoquad_core::solvers::minimal_universal_budget;
use zoquad_core::theory::hard_instance_min_budget;
use zoquad_core::{jacobi_eigh, NoiseModel, SymmetricMatrix};

use crate::error::{LabError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Dependent,
    Universal,
    Kl1d,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Dependent => "dependent",
            Algorithm::Universal => "universal",
            Algorithm::Kl1d => "kl1d",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum HessianSpec {
    Diagonal(Vec<f64>),
    Explicit(SymmetricMatrix),
}

impl HessianSpec {
    pub fn matrix(&self) -> Result<SymmetricMatrix> {
        match self {
            HessianSpec::Diagonal(v) => Ok(SymmetricMatrix::diagonal(v)?),
            HessianSpec::Explicit(m) => Ok(m.clone()),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            HessianSpec::Diagonal(v) => v.len(),
            HessianSpec::Explicit(m) => m.dim(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MinimizerSpec {
    Explicit(Vec<f64>),
    /// Hard-set minimizer at the row's budget, signs drawn per replication.
    HardInstance,
    /// Uniform in the unit ball, drawn per replication.
    RandomInBall,
}

/// Named 1D test functions with certified KL constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestFunction {
    /// `(x − 0.3)⁴`: `|f'| = 4 f^{3/4}`, `f'' ≤ 1.08` on `[0, 0.6]`.
    Quartic,
    /// `(x + 0.2)⁶`: `|f'| = 6 f^{5/6}`, `f'' ≤ 0.048` on `[−0.4, 0]`.
    Sextic,
}

impl TestFunction {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "quartic" => Some(TestFunction::Quartic),
            "sextic" => Some(TestFunction::Sextic),
            _ => None,
        }
    }

    pub fn eval(self, x: f64) -> f64 {
        match self {
            TestFunction::Quartic => (x - 0.3).powi(4),
            TestFunction::Sextic => (x + 0.2).powi(6),
        }
    }

    pub fn problem(self) -> KlProblem {
        let (c1, c2, alpha) = match self {
            TestFunction::Quartic => (4.0, 1.08, 0.75),
            TestFunction::Sextic => (6.0, 0.048, 5.0 / 6.0),
        };
        KlProblem::new(c1, c2, alpha).expect("constants are valid")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KlSettings {
    pub function: TestFunction,
    pub eps: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    /// Label written to the `experiment` column.
    pub name: String,
    pub algorithm: Algorithm,
    /// Absent for `kl1d`.
    pub hessian: Option<HessianSpec>,
    pub minimizer: MinimizerSpec,
    pub noise: NoiseModel,
    /// Budget list; `[0]` for `kl1d`, whose runs are not budget-driven.
    pub budgets: Vec<u64>,
    pub replications: u32,
    pub base_seed: u64,
    pub records_path: Option<PathBuf>,
    pub summary_path: Option<PathBuf>,
    pub wall_clock: bool,
    pub kl: Option<KlSettings>,
}

impl ExperimentConfig {
    pub fn dim(&self) -> usize {
        match (&self.hessian, self.algorithm) {
            (_, Algorithm::Kl1d) => 1,
            (Some(h), _) => h.dim(),
            (None, _) => 0,
        }
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut entries: HashMap<String, (usize, String)> = HashMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| LabError::ConfigLine {
                line: line_no,
                message: format!("expected `key = value`, found `{line}`"),
            })?;
            let key = key.trim().to_string();
            if !KEYS.contains(&key.as_str()) {
                return Err(LabError::ConfigLine {
                    line: line_no,
                    message: format!("unknown key `{key}`"),
                });
            }
            if entries.insert(key.clone(), (line_no, value.trim().to_string())).is_some() {
                return Err(LabError::ConfigLine {
                    line: line_no,
                    message: format!("duplicate key `{key}`"),
                });
            }
        }
        let cfg = Builder { entries }.build()?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Checks `R ≥ 1` and every budget against the algorithm's guards.
    pub fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(LabError::Config("replications must be at least 1".into()));
        }
        if self.budgets.is_empty() {
            return Err(LabError::Config("budget list is empty".into()));
        }
        if self.algorithm == Algorithm::Kl1d {
            let kl = self.kl.ok_or_else(|| LabError::Config("kl1d needs function, eps and delta".into()))?;
            if kl.eps.is_nan() || kl.eps <= 0.0 {
                return Err(LabError::Config("eps must be positive".into()));
            }
            if !(kl.delta > 0.0 && kl.delta < 1.0) {
                return Err(LabError::Config("delta must lie in (0, 1)".into()));
            }
            return Ok(());
        }
        let hessian = self
            .hessian
            .as_ref()
            .ok_or_else(|| LabError::Config("missing `eigenvalues` or `hessian`".into()))?;
        let d = hessian.dim();
        let eig = jacobi_eigh(&hessian.matrix()?)?;
        eig.positive_part()
            .map_err(|e| LabError::Config(format!("Hessian: {e}")))?;
        if let MinimizerSpec::Explicit(x) = &self.minimizer {
            if x.len() != d {
                return Err(LabError::Config(format!("minimizer has {} entries, Hessian dimension is {d}", x.len())));
            }
            if x.iter().map(|v| v * v).sum::<f64>().sqrt() > 1.0 {
                return Err(LabError::Config("minimizer lies outside the unit ball".into()));
            }
        }
        let minimum = match self.algorithm {
            Algorithm::Dependent => 4 * d as u64 + 2,
            Algorithm::Universal => minimal_universal_budget(d),
            Algorithm::Kl1d => unreachable!(),
        };
        let hard_minimum = if self.minimizer == MinimizerSpec::HardInstance {
            let tol = eig.zero_tolerance();
            if eig.eigenvalues().iter().any(|&l| l <= tol) {
                return Err(LabError::Config("hard instances need a positive definite Hessian".into()));
            }
            hard_instance_min_budget(eig.eigenvalues())?
        } else {
            0
        };
        for &t in &self.budgets {
            if t < minimum {
                return Err(LabError::Config(format!(
                    "budget {t} below the {} minimum {minimum}",
                    self.algorithm
                )));
            }
            if t < hard_minimum {
                return Err(LabError::Config(format!(
                    "budget {t} below the hard-instance minimum {hard_minimum}"
                )));
            }
        }
        Ok(())
    }
}

const KEYS: &[&str] = &[
    "experiment",
    "algorithm",
    "dimension",
    "eigenvalues",
    "hessian",
    "minimizer",
    "noise",
    "budgets",
    "replications",
    "base_seed",
    "records",
    "summary",
    "wall_clock",
    "function",
    "eps",
    "delta",
];

struct Builder {
    entries: HashMap<String, (usize, String)>,
}

impl Builder {
    fn get(&self, key: &str) -> Option<(usize, &str)> {
        self.entries.get(key).map(|(l, v)| (*l, v.as_str()))
    }

    fn parse_with<T>(&self, key: &str, f: impl Fn(&str) -> std::result::Result<T, String>) -> Result<Option<T>> {
        match self.get(key) {
            None => Ok(None),
            Some((line, v)) => f(v)
                .map(Some)
                .map_err(|message| LabError::ConfigLine { line, message: format!("{key}: {message}") }),
        }
    }

    fn build(self) -> Result<ExperimentConfig> {
        let algorithm = self
            .parse_with("algorithm", |v| match v {
                "dependent" => Ok(Algorithm::Dependent),
                "universal" => Ok(Algorithm::Universal),
                "kl1d" => Ok(Algorithm::Kl1d),
                _ => Err(format!("unknown algorithm `{v}`")),
            })?
            .ok_or_else(|| LabError::Config("missing `algorithm`".into()))?;

        let diagonal = self.parse_with("eigenvalues", parse_reals)?;
        let explicit = self.parse_with("hessian", parse_matrix)?;
        let hessian = match (diagonal, explicit) {
            (Some(_), Some(_)) => {
                return Err(LabError::Config("give either `eigenvalues` or `hessian`, not both".into()))
            }
            (Some(v), None) => Some(HessianSpec::Diagonal(v)),
            (None, Some(m)) => Some(HessianSpec::Explicit(m)),
            (None, None) => None,
        };
        if let (Some(d), Some(h)) = (self.parse_with("dimension", parse_int::<usize>)?, &hessian) {
            if d != h.dim() {
                return Err(LabError::Config(format!("dimension {d} does not match Hessian dimension {}", h.dim())));
            }
        }

        let minimizer = self
            .parse_with("minimizer", |v| match v {
                "hard-instance" => Ok(MinimizerSpec::HardInstance),
                "random-in-ball" => Ok(MinimizerSpec::RandomInBall),
                _ => parse_reals(v).map(MinimizerSpec::Explicit),
            })?
            .unwrap_or(MinimizerSpec::HardInstance);
        let noise = self.parse_with("noise", parse_noise)?.unwrap_or(NoiseModel::Gaussian);
        let replications = self.parse_with("replications", parse_int::<u32>)?.unwrap_or(1);
        let base_seed = self.parse_with("base_seed", parse_int::<u64>)?.unwrap_or(0);
        let wall_clock = self
            .parse_with("wall_clock", |v| match v {
                "true" => Ok(true),
                "false" => Ok(false),
                _ => Err(format!("expected true or false, found `{v}`")),
            })?
            .unwrap_or(false);

        let (budgets, kl) = if algorithm == Algorithm::Kl1d {
            let function = self
                .parse_with("function", |v| TestFunction::parse(v).ok_or(format!("unknown function `{v}`")))?
                .unwrap_or(TestFunction::Quartic);
            let eps = self.parse_with("eps", parse_real)?;
            let delta = self.parse_with("delta", parse_real)?;
            let kl = match (eps, delta) {
                (Some(eps), Some(delta)) => Some(KlSettings { function, eps, delta }),
                _ => None,
            };
            (vec![0], kl)
        } else {
            let budgets = self
                .parse_with("budgets", |v| v.split(',').map(|s| parse_int::<u64>(s.trim())).collect())?
                .ok_or_else(|| LabError::Config("missing `budgets`".into()))?;
            (budgets, None)
        };

        let mut cfg = ExperimentConfig {
            name: String::new(),
            algorithm,
            hessian,
            minimizer,
            noise,
            budgets,
            replications,
            base_seed,
            records_path: self.get("records").map(|(_, v)| PathBuf::from(v)),
            summary_path: self.get("summary").map(|(_, v)| PathBuf::from(v)),
            wall_clock,
            kl,
        };
        cfg.name = match self.get("experiment") {
            Some((_, v)) => v.to_string(),
            None => format!("{:016x}", config_hash(&cfg)),
        };
        Ok(cfg)
    }
}

/// Hash of the parts of a config that determine its records.
pub fn config_hash(cfg: &ExperimentConfig) -> u64 {
    let text = format!(
        "{:?}|{:?}|{:?}|{:?}|{:?}|{}|{}|{:?}",
        cfg.algorithm, cfg.hessian, cfg.minimizer, cfg.noise, cfg.budgets, cfg.replications, cfg.base_seed, cfg.kl
    );
    text.bytes()
        .fold(0u64, |h, b| crate::seed::splitmix64(h ^ u64::from(b)))
}

fn parse_int<T: std::str::FromStr>(v: &str) -> std::result::Result<T, String> {
    if let Ok(n) = v.parse::<T>() {
        return Ok(n);
    }
    // accept integral scientific notation such as 1e5
    let x: f64 = v.parse().map_err(|_| format!("expected an integer, found `{v}`"))?;
    if x.fract() != 0.0 || x < 0.0 {
        return Err(format!("expected a non-negative integer, found `{v}`"));
    }
    format!("{x:.0}").parse().map_err(|_| format!("integer out of range: `{v}`"))
}

fn parse_real(v: &str) -> std::result::Result<f64, String> {
    match v.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(format!("expected a finite real, found `{v}`")),
    }
}

/// Comma-separated finite reals.
pub fn parse_reals(v: &str) -> std::result::Result<Vec<f64>, String> {
    v.split(',').map(|s| parse_real(s.trim())).collect()
}

fn parse_matrix(v: &str) -> std::result::Result<SymmetricMatrix, String> {
    let rows: Vec<Vec<f64>> = v.split(';').map(parse_reals).collect::<std::result::Result<_, _>>()?;
    if rows.iter().any(|r| r.len() != rows.len()) {
        return Err("Hessian rows must form a square matrix".into());
    }
    for (i, row) in rows.iter().enumerate() {
        for (j, other) in rows.iter().enumerate().take(i) {
            if (row[j] - other[i]).abs() > 1e-12 * (1.0 + row[j].abs()) {
                return Err(format!("Hessian is not symmetric at ({i}, {j})"));
            }
        }
    }
    SymmetricMatrix::from_rows(&rows).map_err(|e| e.to_string())
}

/// `zero`, `gaussian`, `rademacher`, `uniform` or `student-t:<dof>`.
pub fn parse_noise(v: &str) -> std::result::Result<NoiseModel, String> {
    match v {
        "zero" => Ok(NoiseModel::Zero),
        "gaussian" => Ok(NoiseModel::Gaussian),
        "rademacher" => Ok(NoiseModel::Rademacher),
        "uniform" => Ok(NoiseModel::Uniform),
        _ => {
            let dof = v
                .strip_prefix("student-t:")
                .ok_or_else(|| format!("unknown noise `{v}`"))?;
            let dof = parse_real(dof.trim())?;
            NoiseModel::student_t(dof).map_err(|e| e.to_string())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = "
        # comment line
        experiment   = sweep1
        algorithm    = dependent
        eigenvalues  = 1, 4, 9
        minimizer    = hard-instance
        noise        = gaussian   # trailing comment
        budgets      = 10000, 4e4, 160000
        replications = 500
        base_seed    = 7
        records      = out/records.csv
    ";

    #[test]
    fn parses_documented_example() {
        let cfg = ExperimentConfig::parse(EXAMPLE).unwrap();
        assert_eq!(cfg.name, "sweep1");
        assert_eq!(cfg.algorithm, Algorithm::Dependent);
        assert_eq!(cfg.hessian, Some(HessianSpec::Diagonal(vec![1.0, 4.0, 9.0])));
        assert_eq!(cfg.budgets, [10_000, 40_000, 160_000]);
        assert_eq!(cfg.replications, 500);
        assert_eq!(cfg.base_seed, 7);
        assert_eq!(cfg.records_path, Some(PathBuf::from("out/records.csv")));
        assert_eq!(cfg.summary_path, None);
        assert!(!cfg.wall_clock);
        assert_eq!(cfg.dim(), 3);
    }

    #[test]
    fn explicit_hessian_and_minimizer() {
        let cfg = ExperimentConfig::parse(
            "algorithm = universal\nhessian = 2, 1; 1, 2\nminimizer = 0.3, -0.2\nnoise = student-t:3\nbudgets = 100000",
        )
        .unwrap();
        assert_eq!(cfg.dim(), 2);
        assert_eq!(cfg.minimizer, MinimizerSpec::Explicit(vec![0.3, -0.2]));
        assert_eq!(cfg.noise, NoiseModel::student_t(3.0).unwrap());
        assert_eq!(cfg.name.len(), 16);
    }

    #[test]
    fn kl1d_config() {
        let cfg = ExperimentConfig::parse("algorithm = kl1d\nfunction = quartic\neps = 0.05\ndelta = 0.1\nreplications = 3")
            .unwrap();
        assert_eq!(cfg.budgets, [0]);
        assert_eq!(cfg.kl.unwrap().function, TestFunction::Quartic);
        assert!(ExperimentConfig::parse("algorithm = kl1d\neps = 0.05").is_err());
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = ExperimentConfig::parse("algorithm = dependent\n\nnoise = purple").unwrap_err();
        assert!(matches!(err, LabError::ConfigLine { line: 3, .. }), "{err}");
        let err = ExperimentConfig::parse("algorithm = dependent\nbogus = 1").unwrap_err();
        assert!(matches!(err, LabError::ConfigLine { line: 2, .. }));
        let err = ExperimentConfig::parse("no equals sign").unwrap_err();
        assert!(matches!(err, LabError::ConfigLine { line: 1, .. }));
        let err = ExperimentConfig::parse("algorithm = dependent\nalgorithm = universal").unwrap_err();
        assert!(matches!(err, LabError::ConfigLine { line: 2, .. }));
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn validation_guards() {
        let base = "algorithm = dependent\neigenvalues = 1, 4, 9\nminimizer = random-in-ball\n";
        assert!(ExperimentConfig::parse(&format!("{base}budgets = 14")).is_ok());
        assert!(ExperimentConfig::parse(&format!("{base}budgets = 13")).is_err());
        assert!(ExperimentConfig::parse(&format!("{base}budgets = 100\nreplications = 0")).is_err());
        // λ = 1e-4 needs T ≥ 100 · 1e6 / 2 for the hard instance to fit
        let hard = "algorithm = dependent\neigenvalues = 1e-4\nminimizer = hard-instance\nbudgets = 1000";
        assert!(ExperimentConfig::parse(hard).is_err());
        assert!(ExperimentConfig::parse("algorithm = dependent\neigenvalues = 1, -1\nbudgets = 100").is_err());
        assert!(ExperimentConfig::parse("algorithm = universal\neigenvalues = 1\nbudgets = 10").is_err());
        assert!(ExperimentConfig::parse("algorithm = dependent\nhessian = 1, 2; 3, 1\nbudgets = 100").is_err());
        assert!(ExperimentConfig::parse(&format!("{base}budgets = 100\ndimension = 2")).is_err());
        assert!(
            ExperimentConfig::parse("algorithm = dependent\neigenvalues = 1\nminimizer = 2\nbudgets = 100").is_err()
        );
    }

    #[test]
    fn test_function_constants_hold() {
        for f in [TestFunction::Quartic, TestFunction::Sextic] {
            let p = f.problem();
            let f0 = f.eval(0.0);
            // check |f'| ≥ C1 f^α and |f''| ≤ C2 on the sublevel set {f ≤ f(0)}
            for i in 0..=10_000 {
                let x = -1.0 + 2.0 * i as f64 / 10_000.0;
                let v = f.eval(x);
                if v > f0 || v == 0.0 {
                    continue;
                }
                let h = 1e-5;
                let d1 = (f.eval(x + h) - f.eval(x - h)) / (2.0 * h);
                let d2 = (f.eval(x + h) - 2.0 * v + f.eval(x - h)) / (h * h);
                assert!(d1.abs() >= p.c1 * v.powf(p.alpha) * (1.0 - 1e-6), "{f:?} at {x}");
                assert!(d2 <= p.c2 * (1.0 + 1e-4), "{f:?} at {x}: {d2}");
            }
        }
    }
}
