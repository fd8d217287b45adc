//! Choosing a copula parameter to hit a target assortativity or motif
//! density.
//!
//! The objective is deterministic: r_W or t(F, W) from quadrature, never a
//! sampled statistic. Sampling only enters in [`verify_by_sampling`].

use rayon::prelude::*;

use crate::copula::{CopulaFamily, INDEPENDENCE_LIMIT};
use crate::density::{default_order, density_report, theoretical_assortativity};
use crate::error::{Error, Result};
use crate::graphon::{Graphon, GraphonTemplate, KernelKind, ThetaSlot};
use crate::metrics::{combinatorial_assortativity, empirical_density, subgraph_counts, Motif};
use crate::report::{fmt_num, fmt_opt, KeyValue};
use crate::sampler::sample_batch;

/// Scan size used by [`solve`].
pub const DEFAULT_SCAN_POINTS: usize = 32;

/// Distance kept from open ends of a parameter domain.
const BOUNDARY_PAD: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Target {
    Assortativity,
    MotifDensity(Motif),
}

impl Target {
    pub fn name(self) -> &'static str {
        match self {
            Target::Assortativity => "assortativity",
            Target::MotifDensity(_) => "motif_density",
        }
    }
}

/// Default search interval for a family used through `kind`.
///
/// The clamped Clayton density narrows to a thin band as θ approaches -1,
/// which a 128-point grid cannot resolve; its interval starts at -0.8.
pub fn default_bounds(family: CopulaFamily, kind: KernelKind) -> Option<(f64, f64)> {
    match family {
        CopulaFamily::Clayton if kind == KernelKind::Density => Some((-0.8, 10.0)),
        CopulaFamily::Clayton => Some((-1.0, 10.0)),
        CopulaFamily::Frank => Some((-10.0, 10.0)),
        CopulaFamily::Gumbel | CopulaFamily::Joe => Some((1.0, 10.0)),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationProblem {
    template: GraphonTemplate,
    family: CopulaFamily,
    target: Target,
    target_value: f64,
    n: usize,
    bounds: (f64, f64),
    grid_order: usize,
}

impl CalibrationProblem {
    /// Target r_W = `r` on `n` nodes.
    pub fn assortativity(template: GraphonTemplate, r: f64, n: usize) -> Result<Self> {
        if !(r > -1.0 && r < 1.0) {
            return Err(Error::usage(format!(
                "target r must lie in (-1, 1), got {r}"
            )));
        }
        if n < 4 {
            return Err(Error::usage(format!("n must be at least 4, got {n}")));
        }
        Self::build(template, Target::Assortativity, r, n)
    }

    /// Target t(motif, W) = `p`.
    pub fn motif_density(template: GraphonTemplate, motif: Motif, p: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::usage(format!(
                "target density must lie in (0, 1), got {p}"
            )));
        }
        Self::build(template, Target::MotifDensity(motif), p, 0)
    }

    fn build(template: GraphonTemplate, target: Target, value: f64, n: usize) -> Result<Self> {
        if template.free_slots() != 1 {
            return Err(Error::usage(format!(
                "calibration needs exactly one free parameter '?', '{template}' has {}",
                template.free_slots()
            )));
        }
        let free = template
            .components()
            .iter()
            .find(|c| c.theta == ThetaSlot::Free)
            .expect("one free slot");
        let family = free.family;
        let bounds = default_bounds(family, free.kind).expect("free slots are archimedean");
        let mut problem = CalibrationProblem {
            template,
            family,
            target,
            target_value: value,
            n,
            bounds,
            grid_order: 0,
        };
        problem.grid_order = problem.default_grid_order()?;
        Ok(problem)
    }

    pub fn with_bounds(mut self, lo: f64, hi: f64) -> Result<Self> {
        let (dlo, dhi) = self.family.parameter_range().expect("archimedean");
        if lo.is_nan()
            || hi.is_nan()
            || lo >= hi
            || !lo.is_finite()
            || !hi.is_finite()
            || lo < dlo
            || hi > dhi
        {
            return Err(Error::usage(format!(
                "invalid bounds [{lo}, {hi}] for {} (domain [{dlo}, {dhi}])",
                self.family
            )));
        }
        self.bounds = (lo, hi);
        self.grid_order = self.default_grid_order()?;
        Ok(self)
    }

    pub fn with_grid_order(mut self, order: usize) -> Result<Self> {
        if order < crate::density::MIN_REPORT_ORDER {
            return Err(Error::usage(format!(
                "grid order must be at least 16, got {order}"
            )));
        }
        self.grid_order = order;
        Ok(self)
    }

    /// Kinked anywhere in the interval means the finer grid throughout, so
    /// the objective does not jump where the default order would change.
    fn default_grid_order(&self) -> Result<usize> {
        let (lo, hi) = self.bounds;
        let a = default_order(&self.graphon_at(lo)?);
        let b = default_order(&self.graphon_at(hi)?);
        Ok(a.max(b))
    }

    pub fn template(&self) -> &GraphonTemplate {
        &self.template
    }

    pub fn target(&self) -> Target {
        self.target
    }

    pub fn target_value(&self) -> f64 {
        self.target_value
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bounds(&self) -> (f64, f64) {
        self.bounds
    }

    pub fn grid_order(&self) -> usize {
        self.grid_order
    }

    /// The graphon at `theta`. θ = 0 for Clayton or Frank, excluded from
    /// the domain, is replaced by its independence limit.
    pub fn graphon_at(&self, theta: f64) -> Result<Graphon> {
        let theta =
            if theta == 0.0 && matches!(self.family, CopulaFamily::Clayton | CopulaFamily::Frank) {
                INDEPENDENCE_LIMIT / 2.0
            } else {
                theta
            };
        self.template.instantiate(&[theta])
    }

    /// Objective value at `theta`: r_W or the motif density.
    pub fn evaluate(&self, theta: f64) -> Result<f64> {
        let report = density_report(&self.graphon_at(theta)?, self.grid_order)?;
        match self.target {
            Target::Assortativity => theoretical_assortativity(&report, self.n),
            Target::MotifDensity(m) => Ok(report.get(m)),
        }
    }

    /// Bounds shifted inward where the domain is open at that end.
    fn search_interval(&self) -> (f64, f64) {
        let (lo, hi) = self.bounds;
        let lo = if self.family == CopulaFamily::Clayton && lo == -1.0 {
            lo + BOUNDARY_PAD
        } else {
            lo
        };
        (lo, hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monotonicity {
    Nondecreasing,
    Nonincreasing,
    Neither,
}

impl Monotonicity {
    pub fn name(self) -> &'static str {
        match self {
            Monotonicity::Nondecreasing => "nondecreasing",
            Monotonicity::Nonincreasing => "nonincreasing",
            Monotonicity::Neither => "neither",
        }
    }
}

/// `(θ, value)` pairs; `None` where the objective is undefined.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveCurve {
    pub points: Vec<(f64, Option<f64>)>,
}

impl ObjectiveCurve {
    pub fn monotonicity(&self) -> Monotonicity {
        let values: Vec<f64> = self.points.iter().filter_map(|p| p.1).collect();
        let up = values.windows(2).all(|w| w[1] >= w[0]);
        let down = values.windows(2).all(|w| w[1] <= w[0]);
        match (up, down) {
            (true, _) => Monotonicity::Nondecreasing,
            (_, true) => Monotonicity::Nonincreasing,
            _ => Monotonicity::Neither,
        }
    }

    pub fn range(&self) -> Option<(f64, f64)> {
        let mut it = self.points.iter().filter_map(|p| p.1);
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), v| (lo.min(v), hi.max(v))))
    }

    pub const CSV_HEADER: &'static str = "theta,value";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for &(theta, value) in &self.points {
            out.push_str(&format!("{},{}\n", fmt_num(theta), fmt_opt(value)));
        }
        out
    }
}

/// Uniform scan of the objective over the problem's bounds.
pub fn scan(problem: &CalibrationProblem, grid_points: usize) -> Result<ObjectiveCurve> {
    if grid_points < 3 {
        return Err(Error::usage(format!(
            "scan needs at least 3 points, got {grid_points}"
        )));
    }
    let (lo, hi) = problem.search_interval();
    let step = (hi - lo) / (grid_points - 1) as f64;
    let thetas: Vec<f64> = (0..grid_points)
        .map(|i| {
            if i + 1 == grid_points {
                hi
            } else {
                lo + step * i as f64
            }
        })
        .collect();
    let points = thetas
        .par_iter()
        .map(|&theta| match problem.evaluate(theta) {
            Ok(v) => Ok((theta, Some(v))),
            Err(Error::Undefined(_)) => Ok((theta, None)),
            Err(e) => Err(e),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ObjectiveCurve { points })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CalibrationStatus {
    Converged,
    Boundary,
    Unreachable,
}

impl CalibrationStatus {
    pub fn name(self) -> &'static str {
        match self {
            CalibrationStatus::Converged => "converged",
            CalibrationStatus::Boundary => "boundary",
            CalibrationStatus::Unreachable => "unreachable",
        }
    }
}

impl std::fmt::Display for CalibrationStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationResult {
    pub theta_star: f64,
    pub achieved_value: f64,
    pub target_value: f64,
    pub residual: f64,
    pub objective_curve: ObjectiveCurve,
    pub status: CalibrationStatus,
    pub iterations: usize,
}

impl CalibrationResult {
    pub fn key_value(&self, problem: &CalibrationProblem) -> String {
        let mut kv = KeyValue::default();
        kv.push("template", problem.template());
        kv.push("target_kind", problem.target().name());
        if let Target::MotifDensity(m) = problem.target() {
            kv.push("motif", m);
        }
        kv.push_num("target", self.target_value);
        if problem.target() == Target::Assortativity {
            kv.push("n", problem.n());
        }
        let (lo, hi) = problem.bounds();
        kv.push_num("theta_lo", lo);
        kv.push_num("theta_hi", hi);
        kv.push("grid_order", problem.grid_order());
        kv.push_num("theta_star", self.theta_star);
        kv.push_num("achieved", self.achieved_value);
        kv.push_num("residual", self.residual);
        kv.push("status", self.status);
        kv.push("iterations", self.iterations);
        kv.push(
            "curve_monotonicity",
            self.objective_curve.monotonicity().name(),
        );
        kv.finish()
    }
}

/// Scan, then bisection inside the first sign change. Without a sign change,
/// golden-section search on |value - target| around the best scan point.
pub fn solve(
    problem: &CalibrationProblem,
    tolerance: f64,
    max_iters: usize,
) -> Result<CalibrationResult> {
    if tolerance.is_nan() || tolerance <= 0.0 {
        return Err(Error::usage(format!(
            "tolerance must be positive, got {tolerance}"
        )));
    }
    let curve = scan(problem, DEFAULT_SCAN_POINTS)?;
    let target = problem.target_value;
    let (lo, hi) = problem.search_interval();

    let defined: Vec<(f64, f64)> = curve
        .points
        .iter()
        .filter_map(|&(t, v)| v.map(|v| (t, v - target)))
        .collect();
    if defined.is_empty() {
        return Err(Error::Numerical(format!(
            "objective undefined at every scan point of {}",
            problem.template()
        )));
    }

    let bracket = defined
        .windows(2)
        .find(|w| w[0].1 == 0.0 || w[0].1.signum() != w[1].1.signum())
        .map(|w| (w[0], w[1]));

    let finish =
        |theta: f64, value: f64, status: CalibrationStatus, iterations: usize| CalibrationResult {
            theta_star: theta,
            achieved_value: value,
            target_value: target,
            residual: (value - target).abs(),
            objective_curve: curve.clone(),
            status,
            iterations,
        };

    if let Some(((mut a, mut fa), (mut b, _))) = bracket {
        let mut best = (a, fa);
        let mut iterations = 0;
        if fa == 0.0 {
            return Ok(finish(a, target, CalibrationStatus::Converged, 0));
        }
        while iterations < max_iters && (b - a) > 1e-12 * (1.0 + a.abs()) {
            iterations += 1;
            let mid = 0.5 * (a + b);
            let fm = match problem.evaluate(mid) {
                Ok(v) => v - target,
                Err(Error::Undefined(_)) => break,
                Err(e) => return Err(e),
            };
            if fm.abs() < best.1.abs() {
                best = (mid, fm);
            }
            if fm == 0.0 || fm.abs() <= tolerance * 1e-3 {
                break;
            }
            if fm.signum() == fa.signum() {
                a = mid;
                fa = fm;
            } else {
                b = mid;
            }
        }
        let (theta, f) = best;
        let status = if f.abs() <= tolerance {
            CalibrationStatus::Converged
        } else {
            CalibrationStatus::Unreachable
        };
        return Ok(finish(theta, f + target, status, iterations));
    }

    // no sign change: the target lies outside the scanned range or touches
    // the curve tangentially
    let (k, &(best_theta, best_f)) = defined
        .iter()
        .enumerate()
        .min_by(|x, y| x.1 .1.abs().total_cmp(&y.1 .1.abs()))
        .expect("nonempty");
    if best_f.abs() > 10.0 * tolerance {
        return Ok(finish(
            best_theta,
            best_f + target,
            CalibrationStatus::Unreachable,
            0,
        ));
    }
    let left = if k > 0 { defined[k - 1].0 } else { lo };
    let right = if k + 1 < defined.len() {
        defined[k + 1].0
    } else {
        hi
    };
    let (theta, f, iterations) =
        golden_section(problem, left, right, (best_theta, best_f), max_iters)?;

    let at_bound = |t: f64| {
        (t - lo).abs() <= 1e-9 * (1.0 + lo.abs()) || (t - hi).abs() <= 1e-9 * (1.0 + hi.abs())
    };
    let outside_range = curve
        .range()
        .is_some_and(|(vmin, vmax)| target < vmin || target > vmax);
    let status = if at_bound(theta) || (outside_range && (at_bound(left) || at_bound(right))) {
        CalibrationStatus::Boundary
    } else if f.abs() <= tolerance && !outside_range {
        CalibrationStatus::Converged
    } else {
        CalibrationStatus::Unreachable
    };
    Ok(finish(theta, f + target, status, iterations))
}

/// Minimises |value - target| on `[a, b]`; returns the best point seen,
/// including `start`.
fn golden_section(
    problem: &CalibrationProblem,
    mut a: f64,
    mut b: f64,
    start: (f64, f64),
    max_iters: usize,
) -> Result<(f64, f64, usize)> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let target = problem.target_value;
    let f = |t: f64| -> Result<f64> {
        match problem.evaluate(t) {
            Ok(v) => Ok(v - target),
            Err(Error::Undefined(_)) => Ok(f64::INFINITY),
            Err(e) => Err(e),
        }
    };
    let mut best = start;
    for t in [a, b] {
        let v = f(t)?;
        if v.abs() < best.1.abs() {
            best = (t, v);
        }
    }
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    let mut iterations = 0;
    while iterations < max_iters && (b - a) > 1e-10 * (1.0 + a.abs()) {
        iterations += 1;
        for (t, v) in [(c, fc), (d, fd)] {
            if v.abs() < best.1.abs() {
                best = (t, v);
            }
        }
        if fc.abs() < fd.abs() {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
    }
    for (t, v) in [(c, fc), (d, fd)] {
        if v.abs() < best.1.abs() {
            best = (t, v);
        }
    }
    Ok((best.0, best.1, iterations))
}

/// Sampled check of a calibrated or fixed model.
#[derive(Debug, Clone, PartialEq)]
pub struct Verification {
    pub reps: usize,
    pub base_seed: u64,
    /// Mean, min and max of the sampled statistic over defined reps.
    pub mean: Option<f64>,
    pub min: Option<f64>,
    pub max: Option<f64>,
    /// |mean - target|.
    pub gap: Option<f64>,
    /// Reps where the statistic was undefined.
    pub missing: usize,
}

impl Verification {
    pub fn key_value(&self) -> String {
        let mut kv = KeyValue::default();
        kv.push("verify_reps", self.reps);
        kv.push("verify_seed", self.base_seed);
        kv.push("verify_mean", fmt_opt(self.mean));
        kv.push("verify_min", fmt_opt(self.min));
        kv.push("verify_max", fmt_opt(self.max));
        kv.push("verify_gap", fmt_opt(self.gap));
        kv.push("verify_missing", self.missing);
        kv.finish()
    }
}

/// Samples `reps` graphs at θ* and compares the empirical statistic
/// (degree assortativity, or the injective motif density) with the target.
pub fn verify_by_sampling(
    result: &CalibrationResult,
    problem: &CalibrationProblem,
    reps: usize,
    base_seed: u64,
) -> Result<Verification> {
    if result.status == CalibrationStatus::Unreachable {
        return Err(Error::usage("cannot verify an unreachable calibration"));
    }
    let n = match problem.target {
        Target::Assortativity => problem.n,
        // motif targets carry no n; use the conventional experiment size
        Target::MotifDensity(_) => 1000,
    };
    let graphon = problem.graphon_at(result.theta_star)?;
    verify_graphon(
        &graphon,
        n,
        problem.target,
        problem.target_value,
        reps,
        base_seed,
    )
}

/// Sampling check for a fixed graphon.
pub fn verify_graphon(
    graphon: &Graphon,
    n: usize,
    target: Target,
    target_value: f64,
    reps: usize,
    base_seed: u64,
) -> Result<Verification> {
    if reps == 0 {
        return Err(Error::usage("reps must be at least 1"));
    }
    let graphs = sample_batch(graphon, n, base_seed, reps)?;
    let stats: Vec<Option<f64>> = graphs
        .par_iter()
        .map(|g| {
            let counts = subgraph_counts(&g.graph);
            match target {
                Target::Assortativity => combinatorial_assortativity(&counts).ok(),
                Target::MotifDensity(m) => empirical_density(&counts, m).ok(),
            }
        })
        .collect();
    let values: Vec<f64> = stats.iter().flatten().copied().collect();
    let missing = reps - values.len();
    let (mean, min, max) = if values.is_empty() {
        (None, None, None)
    } else {
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (Some(mean), Some(min), Some(max))
    };
    Ok(Verification {
        reps,
        base_seed,
        mean,
        min,
        max,
        gap: mean.map(|m| (m - target_value).abs()),
        missing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn template(s: &str) -> GraphonTemplate {
        s.parse().unwrap()
    }

    fn gumbel_r(r: f64) -> CalibrationProblem {
        CalibrationProblem::assortativity(template("gumbel:?:cdf"), r, 1000).unwrap()
    }

    #[test]
    fn problem_validation() {
        assert!(CalibrationProblem::assortativity(template("pi"), 0.1, 1000).is_err());
        assert!(CalibrationProblem::assortativity(template("gumbel:?*joe:?"), 0.1, 1000).is_err());
        assert!(CalibrationProblem::assortativity(template("gumbel:?"), 1.0, 1000).is_err());
        assert!(CalibrationProblem::motif_density(template("gumbel:?"), Motif::P1, 0.0).is_err());
        let p = gumbel_r(0.05);
        assert_eq!(p.bounds(), (1.0, 10.0));
        assert_eq!(p.grid_order(), 64);
        assert!(matches!(
            p.clone().with_bounds(0.5, 3.0),
            Err(Error::Usage(_))
        ));
        assert!(matches!(
            p.clone().with_bounds(3.0, 2.0),
            Err(Error::Usage(_))
        ));
        assert!(p.with_bounds(1.0, 4.0).is_ok());
        let dens = CalibrationProblem::assortativity(
            template("joe:2:density*gumbel:?:density"),
            0.5,
            1000,
        )
        .unwrap();
        assert_eq!(dens.grid_order(), 128);
        let clayton =
            CalibrationProblem::assortativity(template("clayton:?:density"), -0.2, 1000).unwrap();
        assert_eq!(clayton.bounds(), (-0.8, 10.0));
    }

    #[test]
    fn gumbel_scan_rises_from_zero() {
        let curve = scan(&gumbel_r(0.05), 10).unwrap();
        assert_eq!(curve.monotonicity(), Monotonicity::Nondecreasing);
        let first = curve.points[0].1.unwrap();
        assert!(first.abs() < 0.005, "{first}");
        assert_eq!(curve.points[0].0, 1.0);
        assert_eq!(curve.points[9].0, 10.0);
        assert!(scan(&gumbel_r(0.05), 2).is_err());
    }

    #[test]
    fn clayton_near_zero_approaches_independence() {
        let p = CalibrationProblem::motif_density(template("clayton:?"), Motif::P1, 0.3).unwrap();
        assert!((p.evaluate(1e-6).unwrap() - 0.25).abs() < 1e-6);
        assert!((p.evaluate(0.0).unwrap() - 0.25).abs() < 1e-12);
        let r = CalibrationProblem::assortativity(template("clayton:?"), 0.1, 1000).unwrap();
        assert!(r.evaluate(1e-6).unwrap().abs() < 0.005);
    }

    #[test]
    fn solve_reachable_target() {
        let p = gumbel_r(0.05);
        let res = solve(&p, 1e-4, 100).unwrap();
        assert_eq!(res.status, CalibrationStatus::Converged);
        assert!(res.theta_star > 1.0 && res.theta_star < 10.0);
        assert!(res.residual < 1e-4);
        assert!((res.residual - (res.achieved_value - 0.05).abs()).abs() < 1e-15);
        let again = solve(&p, 1e-4, 100).unwrap();
        assert_eq!(res.theta_star.to_bits(), again.theta_star.to_bits());
    }

    #[test]
    fn solve_unreachable_target() {
        let res = solve(&gumbel_r(0.9), 1e-4, 100).unwrap();
        assert_eq!(res.status, CalibrationStatus::Unreachable);
        assert!(res.residual > 1e-4);
        for &(_, v) in &res.objective_curve.points {
            assert!((v.unwrap() - 0.9).abs() > 1e-4);
        }
        let err = verify_by_sampling(&res, &gumbel_r(0.9), 2, 0).unwrap_err();
        assert!(matches!(err, Error::Usage(_)));
    }

    #[test]
    fn target_just_outside_range_is_not_converged() {
        let p = gumbel_r(0.05);
        let curve = scan(&p, DEFAULT_SCAN_POINTS).unwrap();
        let (_, top) = curve.range().unwrap();
        let beyond = gumbel_r(top + 5e-4);
        let res = solve(&beyond, 1e-4, 100).unwrap();
        assert_ne!(res.status, CalibrationStatus::Converged);
        assert_eq!(res.status, CalibrationStatus::Boundary);
        assert_eq!(res.theta_star, 10.0);
    }

    #[test]
    fn motif_density_target() {
        let p = CalibrationProblem::motif_density(template("gumbel:?"), Motif::P1, 0.3).unwrap();
        let res = solve(&p, 1e-6, 100).unwrap();
        assert_eq!(res.status, CalibrationStatus::Converged);
        assert!((p.evaluate(res.theta_star).unwrap() - 0.3).abs() < 1e-6);
        let kv = res.key_value(&p);
        assert!(kv.contains("target_kind=motif_density\nmotif=P1\n"));
        assert!(kv.contains("status=converged\n"));
    }

    #[test]
    fn frank_spans_both_signs() {
        let p = CalibrationProblem::assortativity(template("frank:?"), -0.1, 1000).unwrap();
        let res = solve(&p, 1e-4, 100).unwrap();
        assert_eq!(res.status, CalibrationStatus::Converged);
        assert!(res.theta_star < 0.0);
    }

    #[test]
    fn verification_reps() {
        let p = gumbel_r(0.05);
        let res = solve(&p, 1e-4, 100).unwrap();
        assert!(matches!(
            verify_by_sampling(&res, &p, 0, 1),
            Err(Error::Usage(_))
        ));
        let v = verify_by_sampling(&res, &p, 3, 1).unwrap();
        assert_eq!(v.missing, 0);
        let (lo, mean, hi) = (v.min.unwrap(), v.mean.unwrap(), v.max.unwrap());
        assert!(lo <= mean && mean <= hi);
    }

    #[test]
    fn fixed_independence_model_has_zero_r() {
        let pi: Graphon = "pi".parse().unwrap();
        let v = verify_graphon(&pi, 1000, Target::Assortativity, 0.0, 10, 3).unwrap();
        assert!(v.mean.unwrap().abs() < 0.02, "{:?}", v.mean);
        assert!(verify_graphon(&pi, 100, Target::Assortativity, 0.0, 0, 3).is_err());
    }

    #[test]
    fn curve_csv() {
        let curve = ObjectiveCurve {
            points: vec![(1.0, Some(0.5)), (2.0, None)],
        };
        assert_eq!(curve.to_csv(), "theta,value\n1,0.5\n2,undefined\n");
    }
}
