//! Bivariate Archimedean copulas and the three fundamental copulas.
//!
//! Every family is evaluated through a validated [`Copula`]. Evaluation is
//! symmetric by construction: arguments are put in ascending order before
//! any arithmetic, so `cdf(u, v)` and `cdf(v, u)` are bit-identical.
//!
//! Boundary conventions:
//! - Clayton and Frank with `|θ| < 1e-8` evaluate as the independence copula
//!   (their common limit). The generator then reduces to `-ln t`.
//! - Gumbel and Joe with `θ = 1` are exactly the independence copula.
//! - Densities of Clayton, Gumbel and Joe are 0 when `u` or `v` is 0 or 1
//!   (the limit along the edge of the unit square).

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Below this magnitude Clayton and Frank are evaluated as Π.
pub const INDEPENDENCE_LIMIT: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CopulaFamily {
    Clayton,
    Frank,
    Gumbel,
    Joe,
    /// Π(u, v) = uv
    Independence,
    /// C⁺(u, v) = min(u, v)
    Comonotone,
    /// C⁻(u, v) = max(u + v - 1, 0)
    Countermonotone,
}

impl CopulaFamily {
    pub const ALL: [CopulaFamily; 7] = [
        CopulaFamily::Clayton,
        CopulaFamily::Frank,
        CopulaFamily::Gumbel,
        CopulaFamily::Joe,
        CopulaFamily::Independence,
        CopulaFamily::Comonotone,
        CopulaFamily::Countermonotone,
    ];

    pub fn is_archimedean(self) -> bool {
        matches!(
            self,
            CopulaFamily::Clayton | CopulaFamily::Frank | CopulaFamily::Gumbel | CopulaFamily::Joe
        )
    }

    /// Short name used in graphon descriptors.
    pub fn name(self) -> &'static str {
        match self {
            CopulaFamily::Clayton => "clayton",
            CopulaFamily::Frank => "frank",
            CopulaFamily::Gumbel => "gumbel",
            CopulaFamily::Joe => "joe",
            CopulaFamily::Independence => "pi",
            CopulaFamily::Comonotone => "cplus",
            CopulaFamily::Countermonotone => "cminus",
        }
    }

    /// Closed parameter interval `[lo, hi]` of the family. Clayton and Frank
    /// additionally exclude `θ = 0`.
    pub fn parameter_range(self) -> Option<(f64, f64)> {
        match self {
            CopulaFamily::Clayton => Some((-1.0, f64::INFINITY)),
            CopulaFamily::Frank => Some((f64::NEG_INFINITY, f64::INFINITY)),
            CopulaFamily::Gumbel | CopulaFamily::Joe => Some((1.0, f64::INFINITY)),
            _ => None,
        }
    }
}

impl fmt::Display for CopulaFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CopulaFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "clayton" => Ok(CopulaFamily::Clayton),
            "frank" => Ok(CopulaFamily::Frank),
            "gumbel" => Ok(CopulaFamily::Gumbel),
            "joe" => Ok(CopulaFamily::Joe),
            "pi" | "independence" => Ok(CopulaFamily::Independence),
            "cplus" | "comonotone" => Ok(CopulaFamily::Comonotone),
            "cminus" | "countermonotone" => Ok(CopulaFamily::Countermonotone),
            other => Err(Error::Parse(format!("unknown copula family '{other}'"))),
        }
    }
}

/// A family tag plus its parameter. Not necessarily valid; see
/// [`CopulaSpec::validate`] and [`CopulaSpec::build`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CopulaSpec {
    pub family: CopulaFamily,
    /// Ignored by the fundamental copulas.
    pub theta: f64,
}

impl CopulaSpec {
    pub fn new(family: CopulaFamily, theta: f64) -> Self {
        CopulaSpec { family, theta }
    }

    pub fn clayton(theta: f64) -> Self {
        Self::new(CopulaFamily::Clayton, theta)
    }

    pub fn frank(theta: f64) -> Self {
        Self::new(CopulaFamily::Frank, theta)
    }

    pub fn gumbel(theta: f64) -> Self {
        Self::new(CopulaFamily::Gumbel, theta)
    }

    pub fn joe(theta: f64) -> Self {
        Self::new(CopulaFamily::Joe, theta)
    }

    pub fn independence() -> Self {
        Self::new(CopulaFamily::Independence, 0.0)
    }

    pub fn comonotone() -> Self {
        Self::new(CopulaFamily::Comonotone, 0.0)
    }

    pub fn countermonotone() -> Self {
        Self::new(CopulaFamily::Countermonotone, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        let theta = self.theta;
        let fail = |reason| {
            Err(Error::Domain {
                family: self.family,
                theta,
                reason,
            })
        };
        match self.family {
            CopulaFamily::Clayton => {
                if !theta.is_finite() || theta < -1.0 {
                    fail("clayton requires theta in [-1, inf) without 0")
                } else if theta == 0.0 {
                    fail("clayton excludes theta = 0 (use pi)")
                } else {
                    Ok(())
                }
            }
            CopulaFamily::Frank => {
                if !theta.is_finite() {
                    fail("frank requires a finite nonzero theta")
                } else if theta == 0.0 {
                    fail("frank excludes theta = 0 (use pi)")
                } else {
                    Ok(())
                }
            }
            CopulaFamily::Gumbel | CopulaFamily::Joe => {
                if !theta.is_finite() || theta < 1.0 {
                    fail("gumbel and joe require theta in [1, inf)")
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    pub fn build(self) -> Result<Copula> {
        Copula::new(self)
    }
}

impl fmt::Display for CopulaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.family.is_archimedean() {
            write!(f, "{}:{}", self.family, self.theta)
        } else {
            write!(f, "{}", self.family)
        }
    }
}

/// Evaluation form after resolving limits.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Form {
    Clayton(f64),
    Frank(f64),
    Gumbel(f64),
    Joe(f64),
    Independence,
    Upper,
    Lower,
}

/// A validated bivariate copula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Copula {
    spec: CopulaSpec,
    form: Form,
}

impl Copula {
    pub fn new(spec: CopulaSpec) -> Result<Self> {
        spec.validate()?;
        let t = spec.theta;
        let form = match spec.family {
            CopulaFamily::Clayton | CopulaFamily::Frank if t.abs() < INDEPENDENCE_LIMIT => {
                Form::Independence
            }
            CopulaFamily::Clayton => Form::Clayton(t),
            CopulaFamily::Frank => Form::Frank(t),
            CopulaFamily::Gumbel | CopulaFamily::Joe if t == 1.0 => Form::Independence,
            CopulaFamily::Gumbel => Form::Gumbel(t),
            CopulaFamily::Joe => Form::Joe(t),
            CopulaFamily::Independence => Form::Independence,
            CopulaFamily::Comonotone => Form::Upper,
            CopulaFamily::Countermonotone => Form::Lower,
        };
        Ok(Copula { spec, form })
    }

    pub fn spec(&self) -> CopulaSpec {
        self.spec
    }

    pub fn family(&self) -> CopulaFamily {
        self.spec.family
    }

    pub fn theta(&self) -> f64 {
        self.spec.theta
    }

    /// True when a density exists (everything except C⁺ and C⁻).
    pub fn has_density(&self) -> bool {
        !matches!(self.form, Form::Upper | Form::Lower)
    }

    fn no_generator(&self) -> Error {
        Error::Domain {
            family: self.spec.family,
            theta: self.spec.theta,
            reason: "fundamental copulas expose no generator",
        }
    }

    /// φ_θ(t) for `t ∈ [0, 1]`; `+inf` at `t = 0` for strict generators.
    pub fn generator(&self, t: f64) -> Result<f64> {
        if !self.spec.family.is_archimedean() {
            return Err(self.no_generator());
        }
        Ok(match self.form {
            Form::Independence => -t.ln(),
            Form::Clayton(th) => (-th * t.ln()).exp_m1() / th,
            Form::Frank(th) => -(ln_abs_expm1(-th * t) - ln_abs_expm1(-th)),
            Form::Gumbel(th) => (-t.ln()).powf(th),
            Form::Joe(th) => -ln_abs_expm1(th * (-t).ln_1p()),
            Form::Upper | Form::Lower => unreachable!(),
        })
    }

    /// φ'_θ(t).
    pub fn generator_derivative(&self, t: f64) -> Result<f64> {
        if !self.spec.family.is_archimedean() {
            return Err(self.no_generator());
        }
        Ok(match self.form {
            Form::Independence => -1.0 / t,
            Form::Clayton(th) => -t.powf(-th - 1.0),
            Form::Frank(th) => -th / (th * t).exp_m1(),
            Form::Gumbel(th) => {
                let l = -t.ln();
                -th * l.powf(th - 1.0) / t
            }
            Form::Joe(th) => {
                let s = 1.0 - t;
                let w = s.powf(th);
                -th * s.powf(th - 1.0) / (1.0 - w)
            }
            Form::Upper | Form::Lower => unreachable!(),
        })
    }

    /// φ''_θ(t).
    pub fn generator_second_derivative(&self, t: f64) -> Result<f64> {
        if !self.spec.family.is_archimedean() {
            return Err(self.no_generator());
        }
        Ok(match self.form {
            Form::Independence => 1.0 / (t * t),
            Form::Clayton(th) => (1.0 + th) * t.powf(-th - 2.0),
            Form::Frank(th) => {
                let e = (th * t).exp_m1();
                th * th * (th * t).exp() / (e * e)
            }
            Form::Gumbel(th) => {
                let l = -t.ln();
                th * l.powf(th - 2.0) * (th - 1.0 + l) / (t * t)
            }
            Form::Joe(th) => {
                let s = 1.0 - t;
                let w = s.powf(th);
                th * s.powf(th - 2.0) * (th - 1.0 + w) / ((1.0 - w) * (1.0 - w))
            }
            Form::Upper | Form::Lower => unreachable!(),
        })
    }

    /// φ^{[-1]}(x): the inverse on `[0, φ(0)]`, zero beyond.
    pub fn generator_pseudo_inverse(&self, x: f64) -> Result<f64> {
        if !self.spec.family.is_archimedean() {
            return Err(self.no_generator());
        }
        if x <= 0.0 {
            return Ok(1.0);
        }
        Ok(match self.form {
            Form::Independence => (-x).exp(),
            Form::Clayton(th) => {
                // φ(0) = -1/θ for θ < 0, infinite otherwise.
                if th < 0.0 && x >= -1.0 / th {
                    0.0
                } else {
                    (-(th * x).ln_1p() / th).exp()
                }
            }
            Form::Frank(th) => {
                if th > 0.0 {
                    // 1 + e^{-x}(e^{-θ} - 1) = (1 - e^{-x}) + e^{-x-θ}
                    -((-(-x).exp_m1()) + (-x - th).exp()).ln() / th
                } else {
                    let a = -th;
                    softplus(ln_abs_expm1(a) - x) / a
                }
            }
            Form::Gumbel(th) => (-x.powf(1.0 / th)).exp(),
            Form::Joe(th) => -(ln_abs_expm1(-x) / th).exp_m1(),
            Form::Upper | Form::Lower => unreachable!(),
        })
    }

    /// C(u, v). Inputs outside `[0, 1]` are clamped.
    pub fn cdf(&self, u: f64, v: f64) -> f64 {
        let (u, v) = ordered(u.clamp(0.0, 1.0), v.clamp(0.0, 1.0));
        let upper = u;
        let lower = (u + v - 1.0).max(0.0).min(upper);
        let value = match self.form {
            Form::Independence => u * v,
            Form::Upper => upper,
            Form::Lower => lower,
            Form::Clayton(th) => clayton_cdf(th, u, v),
            Form::Frank(th) => {
                if th > 0.0 {
                    frank_cdf_pos(th, u, v)
                } else {
                    // C_{-a}(u, v) = u - C_a(u, 1 - v)
                    let (a, b) = ordered(u, 1.0 - v);
                    let c = frank_cdf_pos(-th, a, b);
                    u - c
                }
            }
            Form::Gumbel(th) => gumbel_cdf(th, u, v),
            Form::Joe(th) => joe_cdf(th, u, v),
        };
        value.clamp(lower, upper)
    }

    /// c(u, v) = ∂²C/∂u∂v, not truncated. Errors for C⁺ and C⁻.
    pub fn density(&self, u: f64, v: f64) -> Result<f64> {
        self.density_value(u, v).ok_or(Error::Domain {
            family: self.spec.family,
            theta: self.spec.theta,
            reason: "singular copula has no density",
        })
    }

    pub(crate) fn density_value(&self, u: f64, v: f64) -> Option<f64> {
        let (u, v) = ordered(u.clamp(0.0, 1.0), v.clamp(0.0, 1.0));
        let value = match self.form {
            Form::Upper | Form::Lower => return None,
            Form::Independence => 1.0,
            Form::Clayton(th) => clayton_density(th, u, v),
            Form::Frank(th) => {
                if th > 0.0 {
                    frank_density_pos(th, u, v)
                } else {
                    let (a, b) = ordered(u, 1.0 - v);
                    frank_density_pos(-th, a, b)
                }
            }
            Form::Gumbel(th) => gumbel_density(th, u, v),
            Form::Joe(th) => joe_density(th, u, v),
        };
        Some(value)
    }
}

#[inline]
fn ordered(u: f64, v: f64) -> (f64, f64) {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

/// ln|e^x - 1| without overflow for large positive x.
fn ln_abs_expm1(x: f64) -> f64 {
    if x > 30.0 {
        x + (-(-x).exp()).ln_1p()
    } else if x > 0.0 {
        x.exp_m1().ln()
    } else if x < -std::f64::consts::LN_2 {
        (-x.exp()).ln_1p()
    } else if x < 0.0 {
        (-x.exp_m1()).ln()
    } else {
        f64::NEG_INFINITY
    }
}

/// ln(1 + e^x)
fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

fn clayton_cdf(th: f64, u: f64, v: f64) -> f64 {
    if u <= 0.0 {
        return 0.0;
    }
    if th > 0.0 {
        let a = -th * u.ln();
        let b = -th * v.ln();
        let (m, big) = ordered(a, b);
        // ln(e^a + e^b - 1) factored by the larger exponent
        let s = big + ((m - big).exp() - (-big).exp()).ln_1p();
        (-s / th).exp()
    } else {
        let base = u.powf(-th) + v.powf(-th) - 1.0;
        if base <= 0.0 {
            0.0
        } else {
            base.powf(-1.0 / th)
        }
    }
}

fn clayton_density(th: f64, u: f64, v: f64) -> f64 {
    if u <= 0.0 {
        return 0.0;
    }
    let lu = u.ln();
    let lv = v.ln();
    if th > 0.0 {
        let a = -th * lu;
        let b = -th * lv;
        let (m, big) = ordered(a, b);
        let s = big + ((m - big).exp() - (-big).exp()).ln_1p();
        ((1.0 + th).ln() + (-th - 1.0) * (lu + lv) + (-2.0 - 1.0 / th) * s).exp()
    } else {
        let base = u.powf(-th) + v.powf(-th) - 1.0;
        if base <= 0.0 || th == -1.0 {
            0.0
        } else {
            (1.0 + th) * (u * v).powf(-th - 1.0) * base.powf(-2.0 - 1.0 / th)
        }
    }
}

/// Frank, θ > 0, u ≤ v.
///
/// With x = e^{-θu}, y = e^{-θv}, z = e^{-θ}, the shared term
/// `x + y - xy - z` is rewritten as `x(1 - y) + y(1 - e^{-θ(1-v)})`, a sum of
/// two nonnegative terms, and scaled by e^{-θu}.
fn frank_parts(th: f64, u: f64, v: f64) -> (f64, f64) {
    let q = (-th * (v - u)).exp();
    let a = -(-th * v).exp_m1();
    let b = -(-th * (1.0 - v)).exp_m1();
    (q, a + q * b)
}

fn frank_cdf_pos(th: f64, u: f64, v: f64) -> f64 {
    let (_, scaled) = frank_parts(th, u, v);
    u - (scaled.ln() - (-(-th).exp_m1()).ln()) / th
}

fn frank_density_pos(th: f64, u: f64, v: f64) -> f64 {
    let (q, scaled) = frank_parts(th, u, v);
    th * -(-th).exp_m1() * q / (scaled * scaled)
}

fn gumbel_s(th: f64, x: f64, y: f64) -> f64 {
    let (m, big) = ordered(x, y);
    if big == 0.0 {
        return 0.0;
    }
    big * (1.0 + (m / big).powf(th)).powf(1.0 / th)
}

fn gumbel_cdf(th: f64, u: f64, v: f64) -> f64 {
    if u <= 0.0 {
        return 0.0;
    }
    (-gumbel_s(th, -u.ln(), -v.ln())).exp()
}

fn gumbel_density(th: f64, u: f64, v: f64) -> f64 {
    if u <= 0.0 || v >= 1.0 {
        return 0.0;
    }
    let x = -u.ln();
    let y = -v.ln();
    let s = gumbel_s(th, x, y);
    (-s + (s + th - 1.0).ln() + (1.0 - 2.0 * th) * s.ln() + (th - 1.0) * (x.ln() + y.ln()) + x + y)
        .exp()
}

/// ln((1-u)^θ + (1-v)^θ - (1-u)^θ (1-v)^θ), and the logs of 1-u, 1-v.
fn joe_ln_base(th: f64, u: f64, v: f64) -> (f64, f64, f64) {
    let lu = (-u).ln_1p();
    let lv = (-v).ln_1p();
    let la = th * lu;
    let lb = th * lv;
    // base = 1 - (1-a)(1-b); the product form is accurate when a and b are
    // near one, the log-sum form when they are small
    let one_minus_a = -la.exp_m1();
    let one_minus_b = -lb.exp_m1();
    let prod = one_minus_a * one_minus_b;
    let ln_base = if prod < 0.5 {
        (-prod).ln_1p()
    } else {
        let m = la.max(lb);
        m + ((la - m).exp() + (lb - m).exp() * one_minus_a).ln()
    };
    (ln_base, lu, lv)
}

fn joe_cdf(th: f64, u: f64, v: f64) -> f64 {
    if u <= 0.0 {
        return 0.0;
    }
    if v >= 1.0 {
        return u;
    }
    let (ln_base, _, _) = joe_ln_base(th, u, v);
    -(ln_base / th).exp_m1()
}

fn joe_density(th: f64, u: f64, v: f64) -> f64 {
    if u <= 0.0 || v >= 1.0 {
        return 0.0;
    }
    let (ln_base, lu, lv) = joe_ln_base(th, u, v);
    ((-2.0 + 1.0 / th) * ln_base + (th - 1.0) * (lu + lv) + (th - 1.0 + ln_base.exp()).ln()).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_specs() -> Vec<CopulaSpec> {
        let mut specs = vec![
            CopulaSpec::independence(),
            CopulaSpec::comonotone(),
            CopulaSpec::countermonotone(),
        ];
        for th in [-1.0, -0.5, 0.5, 1.0, 3.0, 10.0] {
            specs.push(CopulaSpec::clayton(th));
        }
        for th in [-30.0, -5.0, -0.5, 0.5, 5.0, 30.0] {
            specs.push(CopulaSpec::frank(th));
        }
        for th in [1.0, 1.5, 3.0, 10.0] {
            specs.push(CopulaSpec::gumbel(th));
            specs.push(CopulaSpec::joe(th));
        }
        specs
    }

    fn archimedean_specs() -> Vec<CopulaSpec> {
        all_specs()
            .into_iter()
            .filter(|s| s.family.is_archimedean())
            .collect()
    }

    #[test]
    fn validate_examples() {
        assert!(matches!(
            CopulaSpec::gumbel(0.5).validate(),
            Err(Error::Domain {
                family: CopulaFamily::Gumbel,
                theta,
                ..
            }) if theta == 0.5
        ));
        assert!(CopulaSpec::gumbel(1.0).validate().is_ok());
        assert!(CopulaSpec::new(CopulaFamily::Independence, f64::NAN)
            .validate()
            .is_ok());
        assert!(CopulaSpec::clayton(-1.0).validate().is_ok());
        assert!(CopulaSpec::clayton(-1.01).validate().is_err());
        assert!(CopulaSpec::clayton(0.0).validate().is_err());
        assert!(CopulaSpec::frank(0.0).validate().is_err());
        assert!(CopulaSpec::frank(-50.0).validate().is_ok());
        assert!(CopulaSpec::joe(0.99).validate().is_err());
        assert!(CopulaSpec::joe(f64::INFINITY).validate().is_err());
    }

    #[test]
    fn generator_examples() {
        let clayton = CopulaSpec::clayton(1.0).build().unwrap();
        assert!((clayton.generator(0.5).unwrap() - 1.0).abs() < 1e-15);
        let gumbel = CopulaSpec::gumbel(2.0).build().unwrap();
        assert!((gumbel.generator((-1.0f64).exp()).unwrap() - 1.0).abs() < 1e-14);
        for spec in archimedean_specs() {
            let c = spec.build().unwrap();
            assert_eq!(c.generator(1.0).unwrap(), 0.0, "{spec}");
        }
        let pi = CopulaSpec::independence().build().unwrap();
        assert!(pi.generator(0.5).is_err());
        assert!(pi.generator_pseudo_inverse(0.5).is_err());
    }

    #[test]
    fn generator_is_strictly_decreasing() {
        for spec in archimedean_specs() {
            let c = spec.build().unwrap();
            let mut prev = f64::INFINITY;
            for i in 1..=200 {
                let t = i as f64 / 200.0;
                let g = c.generator(t).unwrap();
                assert!(g < prev || (g == 0.0 && prev == 0.0), "{spec} at {t}");
                prev = g;
            }
        }
    }

    #[test]
    fn pseudo_inverse_examples() {
        let clayton = CopulaSpec::clayton(1.0).build().unwrap();
        assert!((clayton.generator_pseudo_inverse(1.0).unwrap() - 0.5).abs() < 1e-15);
        let frank = CopulaSpec::frank(5.0).build().unwrap();
        let x = frank.generator(0.3).unwrap();
        assert!((frank.generator_pseudo_inverse(x).unwrap() - 0.3).abs() < 1e-12);
        for spec in archimedean_specs() {
            let c = spec.build().unwrap();
            assert_eq!(c.generator_pseudo_inverse(0.0).unwrap(), 1.0);
        }
        // non-strict generator: φ(0) = 2 for clayton θ = -0.5
        let c = CopulaSpec::clayton(-0.5).build().unwrap();
        assert!((c.generator(0.0).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(c.generator_pseudo_inverse(2.5).unwrap(), 0.0);
    }

    #[test]
    fn generator_round_trip() {
        for spec in archimedean_specs() {
            let c = spec.build().unwrap();
            for i in 1..=100 {
                let t = i as f64 / 100.0;
                let back = c.generator_pseudo_inverse(c.generator(t).unwrap()).unwrap();
                assert!((back - t).abs() < 1e-10, "{spec} t={t} back={back}");
            }
        }
    }

    #[test]
    fn generator_derivatives_match_finite_differences() {
        for spec in archimedean_specs() {
            let c = spec.build().unwrap();
            for t in [0.2, 0.45, 0.7, 0.9] {
                let h = 1e-5;
                let fd1 = (c.generator(t + h).unwrap() - c.generator(t - h).unwrap()) / (2.0 * h);
                let d1 = c.generator_derivative(t).unwrap();
                assert!(
                    (fd1 - d1).abs() <= 1e-5 * (1.0 + d1.abs()),
                    "{spec} φ' at {t}"
                );
                let fd2 = (c.generator_derivative(t + h).unwrap()
                    - c.generator_derivative(t - h).unwrap())
                    / (2.0 * h);
                let d2 = c.generator_second_derivative(t).unwrap();
                assert!(
                    (fd2 - d2).abs() <= 1e-4 * (1.0 + d2.abs()),
                    "{spec} φ'' at {t}"
                );
            }
        }
    }

    #[test]
    fn cdf_examples() {
        let pi = CopulaSpec::independence().build().unwrap();
        assert_eq!(pi.cdf(0.5, 0.5), 0.25);
        let clayton = CopulaSpec::clayton(1.0).build().unwrap();
        assert!((clayton.cdf(0.5, 0.5) - 1.0 / 3.0).abs() < 1e-15);
        let gumbel = CopulaSpec::gumbel(1.0).build().unwrap();
        assert!((gumbel.cdf(0.3, 0.7) - 0.21).abs() < 1e-15);
        let lower = CopulaSpec::countermonotone().build().unwrap();
        assert_eq!(lower.cdf(0.4, 0.4), 0.0);
    }

    #[test]
    fn cdf_matches_generator_construction() {
        // C(u, v) = φ^{[-1]}(φ(u) + φ(v)), an independent route to every family
        for spec in archimedean_specs() {
            let c = spec.build().unwrap();
            for i in 1..20 {
                for j in 1..20 {
                    let u = i as f64 / 20.0;
                    let v = j as f64 / 20.0;
                    let via_gen = c
                        .generator_pseudo_inverse(c.generator(u).unwrap() + c.generator(v).unwrap())
                        .unwrap();
                    assert!((c.cdf(u, v) - via_gen).abs() < 1e-12, "{spec} ({u},{v})");
                }
            }
        }
    }

    #[test]
    fn frechet_bounds_and_margins() {
        for spec in all_specs() {
            let c = spec.build().unwrap();
            for i in 0..=50 {
                for j in 0..=50 {
                    let u = i as f64 / 50.0;
                    let v = j as f64 / 50.0;
                    let value = c.cdf(u, v);
                    // u + v - 1 is itself rounded, hence the slack
                    let lower = (u + v - 1.0).max(0.0) - 1e-15;
                    assert!(value >= lower && value <= u.min(v), "{spec}");
                }
                let u = i as f64 / 50.0;
                assert!((c.cdf(u, 1.0) - u).abs() < 1e-12, "{spec} margin at {u}");
                assert!((c.cdf(1.0, u) - u).abs() < 1e-12, "{spec} margin at {u}");
            }
        }
    }

    #[test]
    fn cdf_is_two_increasing() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for spec in all_specs() {
            let c = spec.build().unwrap();
            for _ in 0..1000 {
                let (a1, b1) = ordered(rng.random::<f64>(), rng.random::<f64>());
                let (a2, b2) = ordered(rng.random::<f64>(), rng.random::<f64>());
                let vol = c.cdf(b1, b2) - c.cdf(a1, b2) - c.cdf(b1, a2) + c.cdf(a1, a2);
                assert!(vol >= -1e-12, "{spec} rectangle volume {vol}");
            }
        }
    }

    #[test]
    fn density_examples() {
        let pi = CopulaSpec::independence().build().unwrap();
        assert_eq!(pi.density(0.2, 0.9).unwrap(), 1.0);
        let clayton = CopulaSpec::clayton(1.0).build().unwrap();
        assert!((clayton.density(0.5, 0.5).unwrap() - 32.0 / 27.0).abs() < 1e-14);
        assert!(CopulaSpec::comonotone()
            .build()
            .unwrap()
            .density(0.3, 0.3)
            .is_err());
        assert!(CopulaSpec::countermonotone()
            .build()
            .unwrap()
            .density(0.3, 0.3)
            .is_err());
    }

    #[test]
    fn density_matches_generator_formula() {
        // c = -φ''(C) φ'(u) φ'(v) / φ'(C)^3
        for spec in archimedean_specs() {
            if spec.family == CopulaFamily::Clayton && spec.theta < 0.0 {
                continue;
            }
            let c = spec.build().unwrap();
            for u in [0.1, 0.35, 0.6, 0.85] {
                for v in [0.15, 0.4, 0.65, 0.9] {
                    let w = c.cdf(u, v);
                    let d1w = c.generator_derivative(w).unwrap();
                    let generic = -c.generator_second_derivative(w).unwrap()
                        * c.generator_derivative(u).unwrap()
                        * c.generator_derivative(v).unwrap()
                        / (d1w * d1w * d1w);
                    let closed = c.density(u, v).unwrap();
                    assert!(
                        (generic - closed).abs() <= 1e-7 * (1.0 + closed),
                        "{spec} ({u},{v}): {generic} vs {closed}"
                    );
                }
            }
        }
    }

    #[test]
    fn density_matches_mixed_difference() {
        let h = 1e-4;
        for spec in all_specs() {
            let c = spec.build().unwrap();
            if !c.has_density() {
                continue;
            }
            for u in [0.2, 0.5, 0.8] {
                for v in [0.25, 0.55, 0.75] {
                    let mixed = (c.cdf(u + h, v + h) - c.cdf(u - h, v + h) - c.cdf(u + h, v - h)
                        + c.cdf(u - h, v - h))
                        / (4.0 * h * h);
                    let d = c.density(u, v).unwrap();
                    // Frank |θ| = 30 has very steep interior densities
                    let tol = 1e-4 * (1.0 + d);
                    assert!((mixed - d).abs() < tol, "{spec} ({u},{v}): {mixed} vs {d}");
                }
            }
        }
    }

    #[test]
    fn density_integrates_to_one_across_v() {
        let grid = crate::quadrature::QuadratureGrid::gauss_legendre(200);
        for spec in [
            CopulaSpec::clayton(1.0),
            CopulaSpec::frank(5.0),
            CopulaSpec::frank(-5.0),
            CopulaSpec::gumbel(1.5),
            CopulaSpec::joe(2.0),
        ] {
            let c = spec.build().unwrap();
            for u in [0.3, 0.5, 0.7] {
                let total: f64 = grid.iter().map(|(v, w)| w * c.density(u, v).unwrap()).sum();
                assert!((total - 1.0).abs() < 1e-6, "{spec} at u={u}: {total}");
            }
        }
    }

    #[test]
    fn extreme_parameters_stay_finite() {
        for spec in [
            CopulaSpec::frank(-800.0),
            CopulaSpec::frank(800.0),
            CopulaSpec::clayton(200.0),
            CopulaSpec::gumbel(200.0),
            CopulaSpec::joe(200.0),
        ] {
            let c = spec.build().unwrap();
            for u in [1e-9, 0.01, 0.3, 0.5, 0.99] {
                for v in [1e-9, 0.2, 0.5, 0.7, 1.0 - 1e-9] {
                    let value = c.cdf(u, v);
                    assert!(value.is_finite(), "{spec} cdf({u},{v})");
                    assert!(value >= (u + v - 1.0).max(0.0) && value <= u.min(v));
                    let d = c.density(u, v).unwrap();
                    assert!(d.is_finite() && d >= 0.0, "{spec} density({u},{v}) = {d}");
                }
            }
        }
        let f = CopulaSpec::frank(-800.0).build().unwrap();
        let x = f.generator(0.4).unwrap();
        assert!((f.generator_pseudo_inverse(x).unwrap() - 0.4).abs() < 1e-10);
    }

    #[test]
    fn near_zero_theta_is_independence() {
        for spec in [CopulaSpec::clayton(1e-9), CopulaSpec::frank(-1e-9)] {
            let c = spec.build().unwrap();
            assert_eq!(c.cdf(0.3, 0.6), 0.3 * 0.6);
            assert_eq!(c.density(0.3, 0.6).unwrap(), 1.0);
        }
        // and continuous across the switch
        let small = CopulaSpec::clayton(1e-6).build().unwrap();
        assert!((small.cdf(0.3, 0.6) - 0.18).abs() < 1e-6);
    }

    #[test]
    fn symmetry_is_exact() {
        for spec in all_specs() {
            let c = spec.build().unwrap();
            for (u, v) in [(0.1, 0.7), (0.33, 0.9), (0.5, 0.51)] {
                assert_eq!(c.cdf(u, v).to_bits(), c.cdf(v, u).to_bits());
                if c.has_density() {
                    assert_eq!(c.density(u, v).unwrap(), c.density(v, u).unwrap());
                }
            }
        }
    }

    #[test]
    fn family_names_round_trip() {
        for family in CopulaFamily::ALL {
            assert_eq!(family.name().parse::<CopulaFamily>().unwrap(), family);
        }
        assert!("gauss".parse::<CopulaFamily>().is_err());
    }
}
