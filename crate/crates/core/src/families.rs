//! Closed-form copula families and the survival transform.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::domain::{check_dim, check_same_dim, UnitPoint};
use crate::error::{Error, Result};

/// A copula family together with its parameter.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// Independence copula `Π^n`.
    Product,
    /// Upper Fréchet bound `M^n(u) = min u_i`.
    UpperFrechet,
    /// Lower Fréchet bound `W^2(u, v) = max(0, u + v - 1)`; a copula only for `n = 2`.
    LowerFrechet,
    /// Farlie-Gumbel-Morgenstern: `Π u_i [1 + λ Π (1 - u_i)]`, `λ ∈ [-1, 1]`.
    Fgm { lambda: f64 },
    /// Ali-Mikhail-Haq: `uv / (1 + δ(1 - u)(1 - v))`, `δ ∈ [-1, 1]`, bivariate.
    Amh { delta: f64 },
    /// `θ Π^n + (1 - θ) M^n`, `θ ∈ [0, 1]`.
    ConvexPiM { theta: f64 },
    /// The survival copula of the inner family.
    SurvivalOf(Box<Family>),
}

impl Family {
    /// Command-line tag: `product`, `m`, `w`, `fgm`, `amh`, `convexpim`, `survival-of:<tag>`.
    pub fn tag(&self) -> String {
        match self {
            Family::Product => "product".into(),
            Family::UpperFrechet => "m".into(),
            Family::LowerFrechet => "w".into(),
            Family::Fgm { .. } => "fgm".into(),
            Family::Amh { .. } => "amh".into(),
            Family::ConvexPiM { .. } => "convexpim".into(),
            Family::SurvivalOf(inner) => format!("survival-of:{}", inner.tag()),
        }
    }

    /// Builds a family from its tag and whichever parameters were supplied.
    /// The parameter the family needs must be present; the others are ignored.
    pub fn from_tag(
        tag: &str,
        lambda: Option<f64>,
        delta: Option<f64>,
        theta: Option<f64>,
    ) -> Result<Family> {
        let need =
            |name: &'static str, value: Option<f64>| value.ok_or(Error::MissingParameter(name));
        let tag = tag.trim();
        if let Some(inner) = tag.strip_prefix("survival-of:") {
            let inner = Family::from_tag(inner, lambda, delta, theta)?;
            return Ok(Family::SurvivalOf(Box::new(inner)));
        }
        match tag.to_ascii_lowercase().as_str() {
            "product" | "pi" | "independence" => Ok(Family::Product),
            "m" | "upper-frechet" => Ok(Family::UpperFrechet),
            "w" | "lower-frechet" => Ok(Family::LowerFrechet),
            "fgm" => Ok(Family::Fgm {
                lambda: need("lambda", lambda)?,
            }),
            "amh" => Ok(Family::Amh {
                delta: need("delta", delta)?,
            }),
            "convexpim" => Ok(Family::ConvexPiM {
                theta: need("theta", theta)?,
            }),
            _ => Err(Error::UnknownFamily(tag.to_string())),
        }
    }

    fn params(&self) -> (Option<f64>, Option<f64>, Option<f64>) {
        match self {
            Family::Fgm { lambda } => (Some(*lambda), None, None),
            Family::Amh { delta } => (None, Some(*delta), None),
            Family::ConvexPiM { theta } => (None, None, Some(*theta)),
            Family::SurvivalOf(inner) => inner.params(),
            _ => (None, None, None),
        }
    }

    fn validate(&self, dim: usize, nested: bool) -> Result<()> {
        fn in_range(
            name: &'static str,
            value: f64,
            lo: f64,
            hi: f64,
            range: &'static str,
        ) -> Result<()> {
            if value.is_finite() && (lo..=hi).contains(&value) {
                Ok(())
            } else {
                Err(Error::ParameterOutOfRange { name, value, range })
            }
        }
        match self {
            Family::Product | Family::UpperFrechet => Ok(()),
            Family::LowerFrechet if dim != 2 => Err(Error::BivariateOnly { family: "W", dim }),
            Family::LowerFrechet => Ok(()),
            Family::Fgm { lambda } => in_range("lambda", *lambda, -1.0, 1.0, "[-1, 1]"),
            Family::Amh { delta } => {
                in_range("delta", *delta, -1.0, 1.0, "[-1, 1]")?;
                if dim != 2 {
                    return Err(Error::BivariateOnly { family: "AMH", dim });
                }
                Ok(())
            }
            Family::ConvexPiM { theta } => in_range("theta", *theta, 0.0, 1.0, "[0, 1]"),
            Family::SurvivalOf(_) if nested => Err(Error::NestedSurvival),
            Family::SurvivalOf(inner) => inner.validate(dim, true),
        }
    }

    fn eval_raw(&self, u: &[f64]) -> f64 {
        match self {
            Family::Product => u.iter().product(),
            Family::UpperFrechet => u.iter().copied().fold(1.0, f64::min),
            Family::LowerFrechet => lower_frechet(u),
            Family::Fgm { lambda } => {
                let prod: f64 = u.iter().product();
                let co: f64 = u.iter().map(|x| 1.0 - x).product();
                prod * (1.0 + lambda * co)
            }
            Family::Amh { delta } => {
                let (a, b) = (u[0], u[1]);
                a * b / (1.0 + delta * (1.0 - a) * (1.0 - b))
            }
            Family::ConvexPiM { theta } => {
                let prod: f64 = u.iter().product();
                let min = u.iter().copied().fold(1.0, f64::min);
                theta * prod + (1.0 - theta) * min
            }
            Family::SurvivalOf(inner) => survival_raw(|w| inner.eval_raw(w), u),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Product => f.write_str("Π"),
            Family::UpperFrechet => f.write_str("M"),
            Family::LowerFrechet => f.write_str("W"),
            Family::Fgm { lambda } => write!(f, "FGM(λ={lambda})"),
            Family::Amh { delta } => write!(f, "AMH(δ={delta})"),
            Family::ConvexPiM { theta } => write!(f, "ConvexPiM(θ={theta})"),
            Family::SurvivalOf(inner) => write!(f, "Survival[{inner}]"),
        }
    }
}

/// `W^n(u) = max(0, Σ u_i - n + 1)`. A copula only for `n = 2`, but a valid
/// pointwise lower bound in every dimension.
pub fn lower_frechet(u: &[f64]) -> f64 {
    let n = u.len() as f64;
    (u.iter().sum::<f64>() - n + 1.0).max(0.0)
}

/// `M^n(u) = min u_i`.
pub fn upper_frechet(u: &[f64]) -> f64 {
    u.iter().copied().fold(1.0, f64::min)
}

/// Inclusion-exclusion over every subset `S` of the axes:
/// `Σ_S (-1)^|S| C(w_S)` with `w_i = 1 - u_i` on `S` and `1` elsewhere.
fn survival_raw<F: Fn(&[f64]) -> f64>(eval: F, u: &[f64]) -> f64 {
    let n = u.len();
    let mut w = vec![1.0; n];
    let mut total = 1.0; // S = ∅: the empty marginal is 1
    for mask in 1..1u32 << n {
        for (i, x) in w.iter_mut().enumerate() {
            *x = if mask >> i & 1 == 1 { 1.0 - u[i] } else { 1.0 };
        }
        let term = eval(&w);
        if mask.count_ones() % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total.clamp(0.0, 1.0)
}

/// A validated copula: family plus dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct CopulaSpec {
    family: Family,
    dim: usize,
}

impl CopulaSpec {
    pub fn new(family: Family, dim: usize) -> Result<Self> {
        validate(&family, dim)?;
        Ok(Self { family, dim })
    }

    pub fn product(dim: usize) -> Result<Self> {
        Self::new(Family::Product, dim)
    }

    pub fn upper_frechet(dim: usize) -> Result<Self> {
        Self::new(Family::UpperFrechet, dim)
    }

    pub fn lower_frechet() -> Self {
        Self {
            family: Family::LowerFrechet,
            dim: 2,
        }
    }

    pub fn fgm(dim: usize, lambda: f64) -> Result<Self> {
        Self::new(Family::Fgm { lambda }, dim)
    }

    pub fn amh(delta: f64) -> Result<Self> {
        Self::new(Family::Amh { delta }, 2)
    }

    pub fn convex_pi_m(dim: usize, theta: f64) -> Result<Self> {
        Self::new(Family::ConvexPiM { theta }, dim)
    }

    /// The survival copula of `self`. Fails if `self` already is one.
    pub fn survival(&self) -> Result<Self> {
        Self::new(Family::SurvivalOf(Box::new(self.family.clone())), self.dim)
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, u: &UnitPoint) -> Result<f64> {
        check_same_dim(self.dim, u.dim())?;
        Ok(self.family.eval_raw(u.coords()))
    }

    /// Evaluates the copula at raw coordinates. The caller guarantees that
    /// `u.len() == self.dim()` and every entry lies in `[0, 1]`.
    #[inline]
    pub fn eval_slice(&self, u: &[f64]) -> f64 {
        debug_assert_eq!(u.len(), self.dim);
        self.family.eval_raw(u)
    }

    /// The survival copula `Ĉ(u) = P[U_1 > 1 - u_1, ..., U_n > 1 - u_n]`.
    pub fn survival_eval(&self, u: &UnitPoint) -> Result<f64> {
        check_same_dim(self.dim, u.dim())?;
        Ok(self.survival_eval_slice(u.coords()))
    }

    pub fn survival_eval_slice(&self, u: &[f64]) -> f64 {
        debug_assert_eq!(u.len(), self.dim);
        survival_raw(|w| self.family.eval_raw(w), u)
    }
}

/// Checks parameter ranges and dimension restrictions for `family` in dimension `dim`.
pub fn validate(family: &Family, dim: usize) -> Result<()> {
    check_dim(dim)?;
    family.validate(dim, false)
}

impl fmt::Display for CopulaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (n={})", self.family, self.dim)
    }
}

/// Flat wire form, shared with the command line: `family`, `dim` and the one
/// parameter the family uses.
#[derive(Serialize, Deserialize)]
struct SpecRepr {
    family: String,
    dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    theta: Option<f64>,
}

impl Serialize for CopulaSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let (lambda, delta, theta) = self.family.params();
        SpecRepr {
            family: self.family.tag(),
            dim: self.dim,
            lambda,
            delta,
            theta,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CopulaSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let r = SpecRepr::deserialize(deserializer)?;
        Family::from_tag(&r.family, r.lambda, r.delta, r.theta)
            .and_then(|family| CopulaSpec::new(family, r.dim))
            .map_err(serde::de::Error::custom)
    }
}

impl FromStr for Family {
    type Err = Error;

    /// Parses a parameter-free tag (`product`, `m`, `w`). Parametric families
    /// go through [`Family::from_tag`].
    fn from_str(s: &str) -> Result<Self> {
        Family::from_tag(s, None, None, None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(xs: &[f64]) -> UnitPoint {
        UnitPoint::new(xs.to_vec()).unwrap()
    }

    #[test]
    fn validate_examples() {
        assert!(CopulaSpec::fgm(4, 0.5).is_ok());
        assert_eq!(
            CopulaSpec::new(Family::LowerFrechet, 3),
            Err(Error::BivariateOnly {
                family: "W",
                dim: 3
            })
        );
        assert!(matches!(
            CopulaSpec::amh(1.5),
            Err(Error::ParameterOutOfRange { name: "delta", .. })
        ));
        assert!(matches!(
            CopulaSpec::new(Family::Amh { delta: 0.5 }, 3),
            Err(Error::BivariateOnly { family: "AMH", .. })
        ));
        assert!(CopulaSpec::fgm(2, -1.0001).is_err());
        assert!(CopulaSpec::fgm(2, f64::NAN).is_err());
        assert!(CopulaSpec::convex_pi_m(3, 1.2).is_err());
        assert!(CopulaSpec::product(1).is_err());
        assert!(matches!(
            Family::from_tag("gumbel", None, None, None),
            Err(Error::UnknownFamily(_))
        ));
    }

    #[test]
    fn nested_survival_rejected() {
        let s = CopulaSpec::fgm(2, 0.5).unwrap().survival().unwrap();
        assert_eq!(s.survival(), Err(Error::NestedSurvival));
    }

    #[test]
    fn eval_examples() {
        let fgm = CopulaSpec::fgm(2, 1.0).unwrap();
        assert!((fgm.eval(&pt(&[0.5, 0.5])).unwrap() - 0.3125).abs() < 1e-15);

        let m3 = CopulaSpec::upper_frechet(3).unwrap();
        assert_eq!(m3.eval(&pt(&[0.2, 0.5, 0.7])).unwrap(), 0.2);

        let w = CopulaSpec::lower_frechet();
        assert_eq!(w.eval(&pt(&[0.3, 0.4])).unwrap(), 0.0);

        let amh = CopulaSpec::amh(1.0).unwrap();
        assert!((amh.eval(&pt(&[0.5, 0.5])).unwrap() - 0.2).abs() < 1e-15);
    }

    #[test]
    fn eval_dimension_mismatch() {
        let pi = CopulaSpec::product(3).unwrap();
        assert!(matches!(
            pi.eval(&pt(&[0.1, 0.2])),
            Err(Error::DimensionMismatch {
                expected: 3,
                actual: 2
            })
        ));
    }

    #[test]
    fn survival_examples() {
        let pi = CopulaSpec::product(2).unwrap();
        assert!((pi.survival_eval(&pt(&[0.3, 0.7])).unwrap() - 0.21).abs() < 1e-15);

        let m = CopulaSpec::upper_frechet(2).unwrap();
        assert!((m.survival_eval(&pt(&[0.3, 0.7])).unwrap() - 0.3).abs() < 1e-15);

        // FGM with an even number of factors is radially symmetric.
        let fgm = CopulaSpec::fgm(2, 0.5).unwrap();
        let u = pt(&[0.4, 0.6]);
        let direct = 0.4 * 0.6 * (1.0 + 0.5 * 0.6 * 0.4);
        assert!((fgm.survival_eval(&u).unwrap() - direct).abs() < 1e-15);
        assert!((fgm.eval(&u).unwrap() - direct).abs() < 1e-15);
    }

    #[test]
    fn convex_endpoints() {
        let u = pt(&[0.3, 0.8, 0.55]);
        let c0 = CopulaSpec::convex_pi_m(3, 0.0).unwrap();
        let c1 = CopulaSpec::convex_pi_m(3, 1.0).unwrap();
        assert_eq!(
            c0.eval(&u).unwrap(),
            CopulaSpec::upper_frechet(3).unwrap().eval(&u).unwrap()
        );
        assert_eq!(
            c1.eval(&u).unwrap(),
            CopulaSpec::product(3).unwrap().eval(&u).unwrap()
        );
    }

    #[test]
    fn fgm_bivariate_margins_are_product() {
        let fgm = CopulaSpec::fgm(3, 0.8).unwrap();
        for &(a, b) in &[(0.2, 0.9), (0.5, 0.5), (0.71, 0.13)] {
            let v = fgm.eval(&pt(&[a, b, 1.0])).unwrap();
            assert!((v - a * b).abs() < 1e-15);
            let v = fgm.eval(&pt(&[1.0, a, b])).unwrap();
            assert!((v - a * b).abs() < 1e-15);
        }
    }

    #[test]
    fn spec_json_round_trip() {
        let spec = CopulaSpec::fgm(3, -0.25).unwrap().survival().unwrap();
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(
            json,
            r#"{"family":"survival-of:fgm","dim":3,"lambda":-0.25}"#
        );
        let back: CopulaSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, spec);
        assert!(serde_json::from_str::<CopulaSpec>(r#"{"family":"w","dim":3}"#).is_err());
    }
}
