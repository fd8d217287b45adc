//! Copula graphons: the copula CDF itself, the copula density clamped at one,
//! and tensor products of either.
//!
//! Descriptor grammar, used by the CLI and written into edge-list headers:
//!
//! ```text
//! graphon   := component ("*" component)*
//! component := family [":" theta] [":" kind]
//! family    := clayton | frank | gumbel | joe | pi | cplus | cminus
//! theta     := float | "?"            (required for the four Archimedean families,
//!                                      absent for pi / cplus / cminus)
//! kind      := cdf | density          (default cdf)
//! ```
//!
//! `?` marks a free parameter; such descriptors parse as [`GraphonTemplate`]s.

use std::fmt;
use std::str::FromStr;

use crate::copula::{Copula, CopulaFamily, CopulaSpec};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelKind {
    /// W(x, y) = C(x, y)
    Cdf,
    /// W(x, y) = min(c(x, y), 1)
    Density,
}

impl KernelKind {
    pub fn name(self) -> &'static str {
        match self {
            KernelKind::Cdf => "cdf",
            KernelKind::Density => "density",
        }
    }
}

impl FromStr for KernelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cdf" => Ok(KernelKind::Cdf),
            "density" => Ok(KernelKind::Density),
            other => Err(Error::Parse(format!(
                "unknown kernel kind '{other}' (expected cdf or density)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphonKind {
    CopulaCdf,
    CopulaDensityClamped,
    Tensor,
}

/// One factor of a graphon: a copula used through its CDF or clamped density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Component {
    copula: Copula,
    kind: KernelKind,
}

impl Component {
    pub fn new(spec: CopulaSpec, kind: KernelKind) -> Result<Self> {
        let copula = spec.build()?;
        if kind == KernelKind::Density && !copula.has_density() {
            return Err(Error::Domain {
                family: spec.family,
                theta: spec.theta,
                reason: "singular copula has no density graphon",
            });
        }
        Ok(Component { copula, kind })
    }

    pub fn copula(&self) -> &Copula {
        &self.copula
    }

    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    #[inline]
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match self.kind {
            KernelKind::Cdf => self.copula.cdf(x, y),
            KernelKind::Density => self
                .copula
                .density_value(x, y)
                .expect("checked at construction")
                .min(1.0),
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.copula.spec(), self.kind.name())
    }
}

/// A symmetric kernel on `[0,1]^s × [0,1]^s` with values in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Graphon {
    components: Vec<Component>,
}

impl Graphon {
    pub fn copula(spec: CopulaSpec) -> Result<Self> {
        Ok(Graphon {
            components: vec![Component::new(spec, KernelKind::Cdf)?],
        })
    }

    pub fn density(spec: CopulaSpec) -> Result<Self> {
        Ok(Graphon {
            components: vec![Component::new(spec, KernelKind::Density)?],
        })
    }

    /// Tensor product of at least two factors; node latents become vectors
    /// with one coordinate per factor.
    pub fn tensor(parts: &[(CopulaSpec, KernelKind)]) -> Result<Self> {
        if parts.len() < 2 {
            return Err(Error::usage(format!(
                "tensor graphon needs at least two components, got {}",
                parts.len()
            )));
        }
        let components = parts
            .iter()
            .map(|&(spec, kind)| Component::new(spec, kind))
            .collect::<Result<Vec<_>>>()?;
        Ok(Graphon { components })
    }

    pub(crate) fn from_components(components: Vec<Component>) -> Self {
        assert!(!components.is_empty());
        Graphon { components }
    }

    pub fn kind(&self) -> GraphonKind {
        match self.components.as_slice() {
            [single] => match single.kind {
                KernelKind::Cdf => GraphonKind::CopulaCdf,
                KernelKind::Density => GraphonKind::CopulaDensityClamped,
            },
            _ => GraphonKind::Tensor,
        }
    }

    /// Latent dimension s.
    pub fn latent_dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn evaluate(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        let s = self.latent_dim();
        for len in [x.len(), y.len()] {
            if len != s {
                return Err(Error::DimensionMismatch {
                    expected: s,
                    got: len,
                });
            }
        }
        Ok(self.eval_unchecked(x, y))
    }

    /// Like [`Graphon::evaluate`] without the length check.
    #[inline]
    pub fn eval_unchecked(&self, x: &[f64], y: &[f64]) -> f64 {
        let mut p = 1.0;
        for (j, c) in self.components.iter().enumerate() {
            p *= c.eval(x[j], y[j]);
            if p == 0.0 {
                break;
            }
        }
        p
    }

    pub fn descriptor(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Graphon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for Graphon {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let template: GraphonTemplate = s.parse()?;
        if template.free_slots() > 0 {
            return Err(Error::Parse(format!(
                "'{s}' has a free parameter '?'; a concrete theta is required"
            )));
        }
        template.instantiate(&[])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThetaSlot {
    Fixed(f64),
    Free,
    /// Fundamental copulas carry no parameter.
    None,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TemplateComponent {
    pub family: CopulaFamily,
    pub theta: ThetaSlot,
    pub kind: KernelKind,
}

/// A graphon descriptor whose parameters may be left free (`?`).
#[derive(Debug, Clone, PartialEq)]
pub struct GraphonTemplate {
    components: Vec<TemplateComponent>,
}

impl GraphonTemplate {
    pub fn components(&self) -> &[TemplateComponent] {
        &self.components
    }

    pub fn free_slots(&self) -> usize {
        self.components
            .iter()
            .filter(|c| c.theta == ThetaSlot::Free)
            .count()
    }

    /// Family of the `k`-th free slot, in left-to-right order.
    pub fn free_family(&self, k: usize) -> Option<CopulaFamily> {
        self.components
            .iter()
            .filter(|c| c.theta == ThetaSlot::Free)
            .nth(k)
            .map(|c| c.family)
    }

    /// Fills free slots left to right.
    pub fn instantiate(&self, thetas: &[f64]) -> Result<Graphon> {
        if thetas.len() != self.free_slots() {
            return Err(Error::usage(format!(
                "template has {} free parameter(s), {} value(s) supplied",
                self.free_slots(),
                thetas.len()
            )));
        }
        let mut next = thetas.iter();
        let components = self
            .components
            .iter()
            .map(|c| {
                let theta = match c.theta {
                    ThetaSlot::Fixed(t) => t,
                    ThetaSlot::Free => *next.next().expect("length checked"),
                    ThetaSlot::None => 0.0,
                };
                Component::new(CopulaSpec::new(c.family, theta), c.kind)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Graphon::from_components(components))
    }
}

impl fmt::Display for GraphonTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            match c.theta {
                ThetaSlot::Fixed(t) => write!(f, "{}:{}:{}", c.family, t, c.kind.name())?,
                ThetaSlot::Free => write!(f, "{}:?:{}", c.family, c.kind.name())?,
                ThetaSlot::None => write!(f, "{}:{}", c.family, c.kind.name())?,
            }
        }
        Ok(())
    }
}

impl FromStr for GraphonTemplate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::Parse("empty graphon descriptor".into()));
        }
        let components = s
            .split('*')
            .map(parse_component)
            .collect::<Result<Vec<_>>>()?;
        Ok(GraphonTemplate { components })
    }
}

fn parse_component(token: &str) -> Result<TemplateComponent> {
    let fields: Vec<&str> = token.split(':').collect();
    let family: CopulaFamily = fields[0]
        .parse()
        .map_err(|_| Error::Parse(format!("unknown copula family '{}'", fields[0])))?;
    let rest = &fields[1..];
    let (theta, kind_field) = if family.is_archimedean() {
        let Some(&raw) = rest.first() else {
            return Err(Error::Parse(format!("'{token}': {family} needs a theta")));
        };
        let theta = if raw == "?" {
            ThetaSlot::Free
        } else {
            let value: f64 = raw
                .parse()
                .map_err(|_| Error::Parse(format!("bad theta '{raw}' in '{token}'")))?;
            ThetaSlot::Fixed(value)
        };
        (theta, &rest[1..])
    } else {
        (ThetaSlot::None, rest)
    };
    let kind = match kind_field {
        [] => KernelKind::Cdf,
        [k] => k.parse()?,
        _ => return Err(Error::Parse(format!("too many fields in '{token}'"))),
    };
    Ok(TemplateComponent {
        family,
        theta,
        kind,
    })
}
