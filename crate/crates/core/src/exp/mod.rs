//! Deterministic Monte Carlo sweeps along a density grid.
//!
//! Every sample's seed is derived up front from `(master seed, stream, index)`,
//! and per-point counts are plain sums, so a sweep's output does not depend on
//! thread count or scheduling.

mod io;
mod plot;

pub use io::{
    read_comparison_csv, read_sweep_csv, read_theory_csv, write_comparison_csv, write_sweep_csv,
    write_theory_csv,
};
pub use plot::{render_svg, Series};

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gen::{clauses_for_density, derive_seed, generate, GenConfig};
use crate::graph::analyze_graph;
use crate::model::QxorInstance;
use crate::solver::{
    analyze, brute_force_decide, brute_force_maxrank, brute_force_xorsat, Verdicts,
    BRUTE_FORCE_LIMIT,
};
use crate::theory::{DensityGrid, TheoryCurve};

/// Quantile for the 95% Wilson interval.
pub const Z_95: f64 = 1.96;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Property {
    Qxor,
    Xorsat,
    Maxrank,
}

impl Property {
    pub const ALL: [Property; 3] = [Property::Qxor, Property::Xorsat, Property::Maxrank];

    pub fn of(self, v: &Verdicts) -> bool {
        match self {
            Property::Qxor => v.qxor,
            Property::Xorsat => v.xorsat,
            Property::Maxrank => v.maxrank,
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Property::Qxor => "qxor",
            Property::Xorsat => "xorsat",
            Property::Maxrank => "maxrank",
        })
    }
}

impl FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "qxor" => Ok(Property::Qxor),
            "xorsat" => Ok(Property::Xorsat),
            "maxrank" => Ok(Property::Maxrank),
            _ => Err(Error::invalid(format!("unknown property {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Engine {
    /// Graph when `e = 2`, elimination otherwise.
    Auto,
    Gauss,
    Graph,
    Brute,
}

impl Engine {
    /// The concrete engine used for arity `e`.
    pub fn resolve(self, e: usize) -> Engine {
        match self {
            Engine::Auto if e == 2 => Engine::Graph,
            Engine::Auto => Engine::Gauss,
            other => other,
        }
    }

    /// All three verdicts for one instance.
    pub fn verdicts(self, inst: &QxorInstance) -> Result<Verdicts> {
        match self.resolve(inst.e()) {
            Engine::Gauss => Ok(analyze(inst)),
            Engine::Graph => Ok(analyze_graph(inst)?.verdicts()),
            Engine::Brute => Ok(Verdicts {
                maxrank: brute_force_maxrank(inst)?,
                qxor: brute_force_decide(inst)?,
                xorsat: brute_force_xorsat(inst)?,
            }),
            Engine::Auto => unreachable!("resolved above"),
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Auto => "auto",
            Engine::Gauss => "gauss",
            Engine::Graph => "graph",
            Engine::Brute => "brute",
        })
    }
}

impl FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Engine::Auto),
            "gauss" => Ok(Engine::Gauss),
            "graph" => Ok(Engine::Graph),
            "brute" => Ok(Engine::Brute),
            _ => Err(Error::invalid(format!("unknown engine {s:?}"))),
        }
    }
}

/// How the universal count `m` follows `n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MMode {
    EqualN,
    Constant(usize),
    Ratio(f64),
}

impl MMode {
    pub fn m_for(self, n: usize) -> usize {
        match self {
            MMode::EqualN => n,
            MMode::Constant(k) => k,
            MMode::Ratio(r) => (r * n as f64).floor() as usize,
        }
    }
}

impl fmt::Display for MMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MMode::EqualN => f.write_str("eq-n"),
            MMode::Constant(k) => write!(f, "const={k}"),
            MMode::Ratio(r) => write!(f, "ratio={r}"),
        }
    }
}

impl FromStr for MMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::invalid(format!("m-mode must be eq-n, const=K or ratio=R, got {s:?}"));
        if s == "eq-n" {
            return Ok(MMode::EqualN);
        }
        if let Some(k) = s.strip_prefix("const=") {
            return k.parse().map(MMode::Constant).map_err(|_| bad());
        }
        if let Some(r) = s.strip_prefix("ratio=") {
            let r: f64 = r.parse().map_err(|_| bad())?;
            if r.is_finite() && r >= 0.0 {
                return Ok(MMode::Ratio(r));
            }
        }
        Err(bad())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub property: Property,
    pub a: usize,
    pub e: usize,
    pub n: usize,
    pub m_mode: MMode,
    pub grid: DensityGrid,
    pub samples: usize,
    pub seed: u64,
    pub engine: Engine,
    /// Evaluate all three properties on one shared set of instances.
    pub matched: bool,
}

impl SweepConfig {
    /// Defaults of the classic experiments: `c = 0.05, 0.10, .., 1.0`, 1000 samples.
    pub fn new(property: Property, a: usize, e: usize, n: usize, m_mode: MMode) -> Self {
        SweepConfig {
            property,
            a,
            e,
            n,
            m_mode,
            grid: DensityGrid { from: 0.05, to: 1.0, step: 0.05 },
            samples: 1000,
            seed: 0,
            engine: Engine::Auto,
            matched: false,
        }
    }

    pub fn m(&self) -> usize {
        self.m_mode.m_for(self.n)
    }

    pub fn validate(&self) -> Result<()> {
        self.grid.validate()?;
        if self.samples == 0 {
            return Err(Error::invalid("samples must be at least 1"));
        }
        GenConfig { m: self.m(), n: self.n, clauses: 0, a: self.a, e: self.e, seed: 0 }.validate()?;
        match self.engine.resolve(self.e) {
            Engine::Graph if self.e != 2 => Err(Error::capability(format!(
                "graph engine needs e = 2, got e = {}",
                self.e
            ))),
            Engine::Brute if self.m() > BRUTE_FORCE_LIMIT || self.n > BRUTE_FORCE_LIMIT => {
                Err(Error::capability(format!(
                    "brute engine limited to m, n <= {BRUTE_FORCE_LIMIT}"
                )))
            }
            _ => Ok(()),
        }
    }

    /// Properties reported by this sweep, in output order.
    pub fn properties(&self) -> Vec<Property> {
        if self.matched {
            Property::ALL.to_vec()
        } else {
            vec![self.property]
        }
    }

    fn stream(&self, point: usize) -> String {
        if self.matched {
            format!("matched:{point}")
        } else {
            format!("{}:{point}", self.property)
        }
    }
}

/// Estimate at one grid point.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvePoint {
    pub c: f64,
    pub n: usize,
    pub m: usize,
    pub a: usize,
    pub e: usize,
    pub property: Property,
    /// Resolved engine that produced the verdicts.
    pub engine: Engine,
    /// Realized clause count `L`.
    pub clauses: usize,
    pub samples: usize,
    pub true_count: usize,
    pub p_hat: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

/// Wilson score interval for `k` successes out of `s`.
pub fn wilson_ci(k: usize, s: usize, z: f64) -> Result<(f64, f64)> {
    if s == 0 || k > s {
        return Err(Error::invalid(format!("need 0 <= k <= s and s >= 1, got k = {k}, s = {s}")));
    }
    if !(z.is_finite() && z >= 0.0) {
        return Err(Error::invalid(format!("quantile must be finite and non-negative, got {z}")));
    }
    let sf = s as f64;
    let p = k as f64 / sf;
    let z2 = z * z;
    let denom = 1.0 + z2 / sf;
    let center = (p + z2 / (2.0 * sf)) / denom;
    let half = z * (p * (1.0 - p) / sf + z2 / (4.0 * sf * sf)).sqrt() / denom;
    let lo = if k == 0 { 0.0 } else { (center - half).clamp(0.0, p) };
    let hi = if k == s { 1.0 } else { (center + half).clamp(p, 1.0) };
    Ok((lo, hi))
}

/// How samples are scheduled. Results are identical for both.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    /// Rayon work stealing; runs sequentially without the `parallel` feature.
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

/// Runs `f` on a dedicated pool of `threads` workers (0 = machine default).
#[cfg(feature = "parallel")]
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

#[cfg(not(feature = "parallel"))]
pub fn with_threads<T: Send>(_threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    Ok(f())
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<CurvePoint>> {
    run_sweep_with(cfg, Exec::default())
}

/// Points for each reported property in grid order; with `matched`, one
/// block per property (qxor, xorsat, maxrank).
pub fn run_sweep_with(cfg: &SweepConfig, exec: Exec) -> Result<Vec<CurvePoint>> {
    cfg.validate()?;
    let grid = cfg.grid.points();
    let engine = cfg.engine.resolve(cfg.e);
    let m = cfg.m();
    let streams: Vec<String> = (0..grid.len()).map(|i| cfg.stream(i)).collect();

    // One bit per property, indexed like Property::ALL.
    let task = |job: usize| -> Result<u8> {
        let (point, sample) = (job / cfg.samples, job % cfg.samples);
        let inst = generate(&GenConfig {
            m,
            n: cfg.n,
            clauses: clauses_for_density(grid[point], cfg.n),
            a: cfg.a,
            e: cfg.e,
            seed: derive_seed(cfg.seed, &streams[point], sample as u64),
        })?;
        let v = engine.verdicts(&inst)?;
        Ok(Property::ALL
            .iter()
            .enumerate()
            .fold(0, |bits, (i, p)| bits | u8::from(p.of(&v)) << i))
    };
    let jobs = grid.len() * cfg.samples;
    let outcomes: Vec<u8> = match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            (0..jobs).into_par_iter().map(task).collect::<Result<_>>()?
        }
        _ => (0..jobs).map(task).collect::<Result<_>>()?,
    };

    let mut out = Vec::new();
    for property in cfg.properties() {
        let bit = Property::ALL.iter().position(|&p| p == property).unwrap();
        for (point, chunk) in outcomes.chunks(cfg.samples).enumerate() {
            let true_count = chunk.iter().filter(|&&b| b >> bit & 1 == 1).count();
            let (ci_lo, ci_hi) = wilson_ci(true_count, cfg.samples, Z_95)?;
            out.push(CurvePoint {
                c: grid[point],
                n: cfg.n,
                m,
                a: cfg.a,
                e: cfg.e,
                property,
                engine,
                clauses: clauses_for_density(grid[point], cfg.n),
                samples: cfg.samples,
                true_count,
                p_hat: true_count as f64 / cfg.samples as f64,
                ci_lo,
                ci_hi,
            });
        }
    }
    Ok(out)
}

/// Density where the estimate first falls through `level`, by linear
/// interpolation between consecutive points.
pub fn crossing(points: &[CurvePoint], level: f64) -> Option<f64> {
    points.windows(2).find_map(|w| {
        let (p, q) = (&w[0], &w[1]);
        if p.p_hat >= level && q.p_hat < level {
            Some(p.c + (p.p_hat - level) / (p.p_hat - q.p_hat) * (q.c - p.c))
        } else {
            None
        }
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonRow {
    pub c: f64,
    pub p_hat: f64,
    pub theory: f64,
    /// `p_hat - theory`.
    pub residual: f64,
    pub ci_excludes_theory: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonReport {
    pub rows: Vec<ComparisonRow>,
    pub max_abs_residual: f64,
    pub excluded_count: usize,
}

/// Grid points are matched up to this absolute difference, enough to absorb
/// the rounding of CSV round trips.
const GRID_TOL: f64 = 1e-6;

pub fn compare(points: &[CurvePoint], curve: &TheoryCurve) -> Result<ComparisonReport> {
    if points.len() != curve.points.len() {
        return Err(Error::invalid(format!(
            "grid mismatch: {} sweep points vs {} theory points",
            points.len(),
            curve.points.len()
        )));
    }
    let rows = points
        .iter()
        .zip(&curve.points)
        .map(|(p, &(c, theory))| {
            if (p.c - c).abs() > GRID_TOL {
                return Err(Error::invalid(format!("grid mismatch: c = {} vs {c}", p.c)));
            }
            Ok(ComparisonRow {
                c: p.c,
                p_hat: p.p_hat,
                theory,
                residual: p.p_hat - theory,
                ci_excludes_theory: theory < p.ci_lo || theory > p.ci_hi,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ComparisonReport {
        max_abs_residual: rows.iter().map(|r| r.residual.abs()).fold(0.0, f64::max),
        excluded_count: rows.iter().filter(|r| r.ci_excludes_theory).count(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::{tabulate, CurveId};

    fn small(property: Property) -> SweepConfig {
        SweepConfig {
            grid: DensityGrid::new(0.0, 0.6, 0.1).unwrap(),
            samples: 40,
            seed: 11,
            ..SweepConfig::new(property, 1, 2, 60, MMode::EqualN)
        }
    }

    #[test]
    fn wilson_examples() {
        let (lo, hi) = wilson_ci(500, 1000, Z_95).unwrap();
        assert!((lo - 0.469_069_034_179_36).abs() < 1e-12);
        assert!((hi - 0.530_930_965_820_64).abs() < 1e-12);
        let (lo, hi) = wilson_ci(0, 10, Z_95).unwrap();
        assert_eq!(lo, 0.0);
        assert!((hi - 0.277_540_168_766_62).abs() < 1e-12);
        let (lo, hi) = wilson_ci(10, 10, Z_95).unwrap();
        assert!((lo - 0.722_459_831_233_38).abs() < 1e-12);
        assert_eq!(hi, 1.0);
        let (lo, hi) = wilson_ci(3, 20, Z_95).unwrap();
        assert!((lo - 0.052_367_791_959_50).abs() < 1e-12);
        assert!((hi - 0.360_423_295_886_96).abs() < 1e-12);
        assert!(wilson_ci(1, 0, Z_95).is_err());
        assert!(wilson_ci(5, 4, Z_95).is_err());
    }

    proptest::proptest! {
        #[test]
        fn wilson_brackets_estimate(s in 1usize..5000, frac in 0.0f64..=1.0, z in 0.0f64..4.0) {
            let k = (frac * s as f64).round() as usize;
            let (lo, hi) = wilson_ci(k, s, z).unwrap();
            let p = k as f64 / s as f64;
            proptest::prop_assert!(0.0 <= lo && lo <= p && p <= hi && hi <= 1.0);
        }
    }

    #[test]
    fn zero_density_is_always_true() {
        for property in Property::ALL {
            for engine in [Engine::Auto, Engine::Gauss, Engine::Graph] {
                let cfg = SweepConfig {
                    grid: DensityGrid::new(0.0, 0.0, 1.0).unwrap(),
                    samples: 10,
                    engine,
                    ..SweepConfig::new(property, 1, 2, 100, MMode::EqualN)
                };
                let pts = run_sweep(&cfg).unwrap();
                assert_eq!(pts.len(), 1);
                assert_eq!(pts[0].clauses, 0);
                assert_eq!(pts[0].p_hat, 1.0);
            }
        }
    }

    #[test]
    fn config_errors() {
        let cfg = SweepConfig { engine: Engine::Graph, ..small(Property::Qxor) };
        assert!(run_sweep(&SweepConfig { e: 3, ..cfg.clone() }).is_err_and(|e| matches!(e, Error::Capability(_))));
        assert!(run_sweep(&SweepConfig { samples: 0, ..cfg.clone() }).is_err());
        assert!(run_sweep(&SweepConfig { m_mode: MMode::Constant(0), ..cfg.clone() }).is_err());
        let brute = SweepConfig { engine: Engine::Brute, ..cfg };
        assert!(matches!(run_sweep(&brute), Err(Error::Capability(_))));
    }

    #[test]
    fn execution_mode_does_not_change_results() {
        for property in Property::ALL {
            let cfg = small(property);
            let seq = run_sweep_with(&cfg, Exec::Sequential).unwrap();
            assert_eq!(seq, run_sweep_with(&cfg, Exec::Parallel).unwrap());
            let four = with_threads(4, || run_sweep_with(&cfg, Exec::Parallel)).unwrap().unwrap();
            assert_eq!(seq, four);
        }
    }

    #[test]
    fn engines_agree_on_true_counts() {
        for property in Property::ALL {
            let counts = |engine| -> Vec<usize> {
                let cfg = SweepConfig { engine, n: 12, m_mode: MMode::Constant(3), ..small(property) };
                run_sweep(&cfg).unwrap().iter().map(|p| p.true_count).collect()
            };
            let gauss = counts(Engine::Gauss);
            assert_eq!(gauss, counts(Engine::Graph));
            assert_eq!(gauss, counts(Engine::Brute));
        }
    }

    #[test]
    fn matched_estimates_are_ordered() {
        let cfg = SweepConfig { matched: true, ..small(Property::Qxor) };
        let pts = run_sweep(&cfg).unwrap();
        let k = cfg.grid.points().len();
        assert_eq!(pts.len(), 3 * k);
        for i in 0..k {
            let (q, x, r) = (&pts[i], &pts[k + i], &pts[2 * k + i]);
            assert_eq!((q.property, x.property, r.property), (Property::Qxor, Property::Xorsat, Property::Maxrank));
            assert!(r.true_count <= q.true_count && q.true_count <= x.true_count);
        }
    }

    #[test]
    fn points_follow_grid() {
        let pts = run_sweep(&small(Property::Maxrank)).unwrap();
        let grid = small(Property::Maxrank).grid.points();
        assert_eq!(pts.iter().map(|p| p.c).collect::<Vec<_>>(), grid);
        assert!(pts.iter().all(|p| p.engine == Engine::Graph && p.m == 60));
        assert_eq!(pts[3].clauses, 18);
    }

    #[test]
    fn m_modes() {
        assert_eq!(MMode::EqualN.m_for(50), 50);
        assert_eq!(MMode::Constant(1).m_for(50), 1);
        assert_eq!(MMode::Ratio(0.5).m_for(51), 25);
        for s in ["eq-n", "const=3", "ratio=0.25"] {
            assert_eq!(s.parse::<MMode>().unwrap().to_string(), s);
        }
        assert!("ratio=-1".parse::<MMode>().is_err());
        assert!("const".parse::<MMode>().is_err());
    }

    #[test]
    fn compare_against_itself() {
        let curve = tabulate(CurveId::HInf, &DensityGrid::new(0.0, 0.45, 0.05).unwrap()).unwrap();
        let points: Vec<CurvePoint> = curve
            .points
            .iter()
            .map(|&(c, v)| CurvePoint {
                c,
                n: 1,
                m: 1,
                a: 1,
                e: 2,
                property: Property::Qxor,
                engine: Engine::Graph,
                clauses: 0,
                samples: usize::MAX,
                true_count: 0,
                p_hat: v,
                ci_lo: v,
                ci_hi: v,
            })
            .collect();
        let report = compare(&points, &curve).unwrap();
        assert!(report.rows.iter().all(|r| r.residual == 0.0));
        assert_eq!(report.max_abs_residual, 0.0);
        assert_eq!(report.excluded_count, 0);

        assert!(compare(&points[1..], &curve).is_err());
        let mut shifted = points.clone();
        shifted[2].c += 0.01;
        assert!(compare(&shifted, &curve).is_err());
    }

    #[test]
    fn max_residual_bounds_each_residual() {
        let cfg = small(Property::Qxor);
        let pts = run_sweep(&cfg).unwrap();
        let report = compare(&pts, &tabulate(CurveId::HInf, &cfg.grid).unwrap()).unwrap();
        assert!(report.rows.iter().all(|r| r.residual.abs() <= report.max_abs_residual));
    }

    #[test]
    fn crossing_interpolates() {
        let mut pts = run_sweep(&small(Property::Qxor)).unwrap()[..2].to_vec();
        pts[0].p_hat = 0.9;
        pts[1].p_hat = 0.1;
        let x = crossing(&pts, 0.5).unwrap();
        assert!((x - 0.05).abs() < 1e-12);
        assert_eq!(crossing(&pts[..1], 0.5), None);
    }
}
