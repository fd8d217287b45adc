//! Homomorphism densities of graphons by Gauss–Legendre quadrature, and the
//! assortativity they imply.
//!
//! Conventions: t(P1) = ∬W, t(P2) = ∫λ², t(P3) = ∬λ(x)W(x,y)λ(y),
//! t(S_k) = ∫λ^k and t(C3) = ∭W(x,y)W(y,z)W(x,z), where λ(x) = ∫W(x,y)dy.
//! A tensor graphon's densities are products of its components' densities.

use crate::error::{Error, Result};
use crate::graphon::{Component, Graphon, KernelKind};
use crate::metrics::Motif;
use crate::quadrature::QuadratureGrid;
use crate::report::fmt_num;

/// Default order for smooth kernels.
pub const SMOOTH_ORDER: usize = 64;
/// Default order for kernels with kinks: C⁺, C⁻, negative-θ Clayton and
/// every clamped density.
pub const KINKED_ORDER: usize = 128;
/// Smallest order accepted by [`density_report`].
pub const MIN_REPORT_ORDER: usize = 16;

/// Order used when the caller does not choose one.
pub fn default_order(graphon: &Graphon) -> usize {
    use crate::copula::CopulaFamily::*;
    let kinked = graphon.components().iter().any(|c| {
        c.kind() == KernelKind::Density
            || matches!(c.copula().family(), Comonotone | Countermonotone)
            || (c.copula().family() == Clayton && c.copula().theta() < 0.0)
    });
    if kinked {
        KINKED_ORDER
    } else {
        SMOOTH_ORDER
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityReport {
    pub t_p1: f64,
    pub t_p2: f64,
    pub t_p3: f64,
    pub t_c3: f64,
    pub t_s3: f64,
    pub descriptor: String,
    pub grid_order: usize,
}

impl DensityReport {
    pub fn get(&self, motif: Motif) -> f64 {
        match motif {
            Motif::P1 => self.t_p1,
            Motif::P2 => self.t_p2,
            Motif::P3 => self.t_p3,
            Motif::C3 => self.t_c3,
            Motif::S3 => self.t_s3,
        }
    }

    fn from_values(values: [f64; 5], descriptor: String, grid_order: usize) -> Self {
        let [t_p1, t_p2, t_p3, t_c3, t_s3] = values.map(|v| v.clamp(0.0, 1.0));
        DensityReport {
            t_p1,
            t_p2,
            t_p3,
            t_c3,
            t_s3,
            descriptor,
            grid_order,
        }
    }

    fn values(&self) -> [f64; 5] {
        [self.t_p1, self.t_p2, self.t_p3, self.t_c3, self.t_s3]
    }

    pub const CSV_HEADER: &'static str = "descriptor,grid_order,t_p1,t_p2,t_p3,t_c3,t_s3,r_w_at_n";

    /// One CSV row; the last field is r_W at `n`, or `undefined`.
    pub fn csv_row(&self, n: usize) -> String {
        let r = theoretical_assortativity(self, n)
            .map(fmt_num)
            .unwrap_or_else(|_| "undefined".into());
        format!(
            "{},{},{},{},{},{},{},{}",
            self.descriptor,
            self.grid_order,
            fmt_num(self.t_p1),
            fmt_num(self.t_p2),
            fmt_num(self.t_p3),
            fmt_num(self.t_c3),
            fmt_num(self.t_s3),
            r
        )
    }
}

/// Kernel values of one component on a tensor grid, with λ cached.
struct KernelGrid<'a> {
    grid: &'a QuadratureGrid,
    values: Vec<f64>,
    lambda: Vec<f64>,
}

impl<'a> KernelGrid<'a> {
    fn new(component: &Component, grid: &'a QuadratureGrid) -> Self {
        let nodes = grid.nodes();
        let n = nodes.len();
        let mut values = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let w = component.eval(nodes[i], nodes[j]);
                values[i * n + j] = w;
                values[j * n + i] = w;
            }
        }
        Self::from_matrix(values, grid.weights(), grid)
    }

    fn from_matrix(values: Vec<f64>, weights: &[f64], grid: &'a QuadratureGrid) -> Self {
        let n = weights.len();
        let lambda = (0..n)
            .map(|i| {
                values[i * n..(i + 1) * n]
                    .iter()
                    .zip(weights)
                    .map(|(k, w)| k * w)
                    .sum()
            })
            .collect();
        KernelGrid {
            grid,
            values,
            lambda,
        }
    }

    fn star(&self, k: i32, weights: &[f64]) -> f64 {
        self.lambda
            .iter()
            .zip(weights)
            .map(|(l, w)| w * l.powi(k))
            .sum()
    }

    fn p3(&self, weights: &[f64]) -> f64 {
        let n = weights.len();
        let wl: Vec<f64> = self
            .lambda
            .iter()
            .zip(weights)
            .map(|(l, w)| l * w)
            .collect();
        (0..n)
            .map(|i| {
                let row = &self.values[i * n..(i + 1) * n];
                wl[i] * row.iter().zip(&wl).map(|(k, x)| k * x).sum::<f64>()
            })
            .sum()
    }

    fn c3(&self, weights: &[f64]) -> f64 {
        use rayon::prelude::*;
        let n = weights.len();
        // row i of kw is K(x_i, ·) * w
        let kw: Vec<f64> = self
            .values
            .iter()
            .enumerate()
            .map(|(idx, k)| k * weights[idx % n])
            .collect();
        // row sums are collected and then added in order, so the result does
        // not depend on thread scheduling
        let rows: Vec<f64> = (0..n)
            .into_par_iter()
            .map(|i| {
                let ri = &kw[i * n..(i + 1) * n];
                let ki = &self.values[i * n..(i + 1) * n];
                let mut acc = 0.0;
                for (j, &kij_wj) in ri.iter().enumerate() {
                    if kij_wj == 0.0 {
                        continue;
                    }
                    let rj = &kw[j * n..(j + 1) * n];
                    let s: f64 = ki.iter().zip(rj).map(|(a, b)| a * b).sum();
                    acc += kij_wj * s;
                }
                weights[i] * acc
            })
            .collect();
        rows.iter().sum()
    }

    fn report_values(&self) -> [f64; 5] {
        let w = self.grid.weights();
        [
            self.star(1, w),
            self.star(2, w),
            self.p3(w),
            self.c3(w),
            self.star(3, w),
        ]
    }
}

fn check_order(order: usize) -> Result<()> {
    if order < MIN_REPORT_ORDER {
        return Err(Error::usage(format!(
            "grid order must be at least {MIN_REPORT_ORDER}, got {order}"
        )));
    }
    Ok(())
}

fn component_values(component: &Component, grid: &QuadratureGrid) -> [f64; 5] {
    KernelGrid::new(component, grid).report_values()
}

/// All five densities. Tensor graphons are evaluated one component at a
/// time and multiplied.
pub fn density_report(graphon: &Graphon, grid_order: usize) -> Result<DensityReport> {
    check_order(grid_order)?;
    let grid = QuadratureGrid::gauss_legendre(grid_order);
    let reports: Vec<DensityReport> = graphon
        .components()
        .iter()
        .map(|c| DensityReport::from_values(component_values(c, &grid), c.to_string(), grid_order))
        .collect();
    let mut product = tensor_density(&reports)?;
    product.descriptor = graphon.descriptor();
    Ok(product)
}

/// Densities from the full kernel on the product grid over `[0,1]^s`
/// (`grid_order^s` nodes), without using the tensor factorisation.
/// Cost grows as `grid_order^(3s)`; intended for checking small cases.
pub fn direct_density_report(graphon: &Graphon, grid_order: usize) -> Result<DensityReport> {
    if grid_order == 0 {
        return Err(Error::usage("grid order must be positive"));
    }
    let s = graphon.latent_dim();
    let grid = QuadratureGrid::gauss_legendre(grid_order);
    let total = grid_order
        .checked_pow(s as u32)
        .filter(|&t| t <= 4096)
        .ok_or_else(|| {
            Error::usage(format!(
                "product grid {grid_order}^{s} is too large for direct quadrature"
            ))
        })?;

    // node index -> coordinates and product weight
    let mut points = Vec::with_capacity(total * s);
    let mut weights = Vec::with_capacity(total);
    for idx in 0..total {
        let mut rest = idx;
        let mut w = 1.0;
        for _ in 0..s {
            let a = rest % grid_order;
            rest /= grid_order;
            points.push(grid.nodes()[a]);
            w *= grid.weights()[a];
        }
        weights.push(w);
    }
    let mut values = vec![0.0; total * total];
    for i in 0..total {
        for j in i..total {
            let k =
                graphon.eval_unchecked(&points[i * s..(i + 1) * s], &points[j * s..(j + 1) * s]);
            values[i * total + j] = k;
            values[j * total + i] = k;
        }
    }
    let kg = KernelGrid::from_matrix(values, &weights, &grid);
    let values = [
        kg.star(1, &weights),
        kg.star(2, &weights),
        kg.p3(&weights),
        kg.c3(&weights),
        kg.star(3, &weights),
    ];
    Ok(DensityReport::from_values(
        values,
        graphon.descriptor(),
        grid_order,
    ))
}

/// Per-motif product of component densities.
pub fn tensor_density(reports: &[DensityReport]) -> Result<DensityReport> {
    let Some(first) = reports.first() else {
        return Err(Error::usage("tensor_density needs at least one report"));
    };
    let mut values = [1.0; 5];
    for r in reports {
        for (acc, v) in values.iter_mut().zip(r.values()) {
            *acc *= v;
        }
    }
    let descriptor = reports
        .iter()
        .map(|r| r.descriptor.as_str())
        .collect::<Vec<_>>()
        .join("*");
    let grid_order = reports
        .iter()
        .map(|r| r.grid_order)
        .max()
        .unwrap_or(first.grid_order);
    Ok(DensityReport::from_values(values, descriptor, grid_order))
}

/// λ(u) = ∫ W(u, v) dv; for tensor graphons the product of the component
/// degree operators at the matching coordinates.
pub fn degree_operator(graphon: &Graphon, u: &[f64], grid_order: usize) -> Result<f64> {
    if u.len() != graphon.latent_dim() {
        return Err(Error::DimensionMismatch {
            expected: graphon.latent_dim(),
            got: u.len(),
        });
    }
    let grid = QuadratureGrid::gauss_legendre(grid_order.max(1));
    Ok(graphon
        .components()
        .iter()
        .zip(u)
        .map(|(c, &x)| grid.integrate(|v| c.eval(x, v)))
        .product())
}

fn per_component(
    graphon: &Graphon,
    grid_order: usize,
    f: impl Fn(&KernelGrid, &[f64]) -> f64,
) -> f64 {
    let grid = QuadratureGrid::gauss_legendre(grid_order.max(1));
    graphon
        .components()
        .iter()
        .map(|c| {
            let kg = KernelGrid::new(c, &grid);
            f(&kg, grid.weights())
        })
        .product()
}

/// t(P_k, W) for k ∈ {1, 2, 3}.
pub fn t_path(graphon: &Graphon, k: usize, grid_order: usize) -> Result<f64> {
    match k {
        1 => Ok(per_component(graphon, grid_order, |kg, w| kg.star(1, w))),
        2 => Ok(per_component(graphon, grid_order, |kg, w| kg.star(2, w))),
        3 => Ok(per_component(graphon, grid_order, |kg, w| kg.p3(w))),
        _ => Err(Error::usage(format!("t_path supports k in 1..=3, got {k}"))),
    }
}

/// t(S_k, W) = ∫ λ^k.
pub fn t_star(graphon: &Graphon, k: usize, grid_order: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::usage("star size must be at least 1"));
    }
    Ok(per_component(graphon, grid_order, |kg, w| {
        kg.star(k as i32, w)
    }))
}

pub fn t_cycle3(graphon: &Graphon, grid_order: usize) -> f64 {
    per_component(graphon, grid_order, |kg, w| kg.c3(w))
}

/// D_W(u) = ∫₀ᵘ λ(t) dt, for graphons with one latent coordinate.
pub fn cumulative_degree_distribution(graphon: &Graphon, u: f64, grid_order: usize) -> Result<f64> {
    if graphon.latent_dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: graphon.latent_dim(),
        });
    }
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::usage(format!("u must lie in [0, 1], got {u}")));
    }
    if u == 0.0 {
        return Ok(0.0);
    }
    let grid = QuadratureGrid::gauss_legendre(grid_order.max(1));
    let c = &graphon.components()[0];
    Ok(grid.integrate_on(0.0, u, |t| grid.integrate(|v| c.eval(t, v))))
}

/// Degree assortativity of the W-random graph on `n` nodes:
///
/// ```text
///        (n-3) t(P3) + t(C3) - (n-2) t(P2)² / t(P1)
/// r_W = --------------------------------------------
///        (n-3) t(S3) + t(P2) - (n-2) t(P2)² / t(P1)
/// ```
///
/// This is the edge-end Pearson correlation with every motif count replaced
/// by its expectation: |P1| = (n)₂ t/2, |P2| = (n)₃ t/2, |P3| = (n)₄ t/2,
/// |S3| = (n)₄ t/6 and 3|C3| = (n)₃ t/2.
pub fn theoretical_assortativity(report: &DensityReport, n: usize) -> Result<f64> {
    if n < 4 {
        return Err(Error::usage(format!("r_W needs n >= 4, got {n}")));
    }
    if report.t_p1 <= 0.0 {
        return Err(Error::undefined("t(P1) is zero"));
    }
    let n = n as f64;
    let mixing = (n - 2.0) * report.t_p2 * report.t_p2 / report.t_p1;
    let num = (n - 3.0) * report.t_p3 + report.t_c3 - mixing;
    let den = (n - 3.0) * report.t_s3 + report.t_p2 - mixing;
    let scale = (n - 3.0) * report.t_s3 + report.t_p2 + mixing;
    if den.abs() <= 1e-10 * scale {
        return Err(Error::undefined("degree variance of the graphon is zero"));
    }
    Ok(num / den)
}
