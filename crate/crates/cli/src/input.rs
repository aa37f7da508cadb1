//! Strict JSON input formats. Rationals are `"p/q"` strings or integers;
//! unknown keys are rejected and errors carry the path of the offending key.

use std::fs;
use std::path::Path;

use mldkit::germs::{BoundaryDivisor, CyclicAction, GermTag, HyperquotientGerm};
use mldkit::lattice::LatticePoint;
use mldkit::newton::NewtonPolytope;
use mldkit::rat::{self, Rat};
use mldkit::reid::{BasketConfig, FictitiousPoint};
use mldkit::toric::{quotient_germ_to_toric, QuotientToric, ToricGerm, ToricPair};
use mldkit::weighted::{parse_poly, Poly};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer};

use crate::CliError;

/// Reads and deserializes `path`, reporting the JSON path of any error.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input {
        path: path.display().to_string(),
        msg: e.to_string(),
    })?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let at = e.path().to_string();
        CliError::Input {
            path: path.display().to_string(),
            msg: if at == "." {
                e.into_inner().to_string()
            } else {
                format!("at {at}: {}", e.into_inner())
            },
        }
    })
}

/// An exact rational from `"p/q"` or a JSON integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JsonRat(pub Rat);

impl<'de> Deserialize<'de> for JsonRat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(d).map_err(|_| {
            serde::de::Error::custom("expected a rational as a \"p/q\" string or an integer")
        })? {
            Raw::Int(n) => Ok(JsonRat(rat::int(n))),
            Raw::Text(s) => rat::parse_rat(&s)
                .map(JsonRat)
                .map_err(serde::de::Error::custom),
        }
    }
}

fn rats(xs: Vec<JsonRat>) -> Vec<Rat> {
    xs.into_iter().map(|r| r.0).collect()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuotientSpec {
    pub n: i64,
    pub chars: Vec<i64>,
}

/// A cone given by rays, or the quotient shorthand, with optional boundary
/// coefficients on the rays and an optional divisor for thresholds.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeFile {
    pub dim: Option<usize>,
    pub rays: Option<Vec<Vec<i64>>>,
    pub quotient: Option<QuotientSpec>,
    #[serde(default)]
    pub coeffs: Option<Vec<JsonRat>>,
    #[serde(default)]
    pub divisor: Option<Vec<JsonRat>>,
}

/// A parsed cone and, for the quotient shorthand, its rebasing.
pub struct Cone {
    pub pair: ToricPair,
    pub quotient: Option<QuotientToric>,
    pub divisor: Option<Vec<Rat>>,
}

impl ConeFile {
    pub fn into_cone(self) -> Result<Cone, CliError> {
        let (germ, quotient) = match (self.rays, self.quotient) {
            (Some(rays), None) => {
                let dim = self.dim.unwrap_or_else(|| rays.first().map_or(0, Vec::len));
                let rays = rays.into_iter().map(LatticePoint).collect();
                (ToricGerm::new(dim, rays)?, None)
            }
            (None, Some(q)) => {
                let qt = quotient_germ_to_toric(q.n, &q.chars)?;
                if self.dim.is_some_and(|d| d != q.chars.len()) {
                    return Err(CliError::Domain(format!(
                        "dim {} does not match {} characters",
                        self.dim.unwrap_or(0),
                        q.chars.len()
                    )));
                }
                (qt.germ.clone(), Some(qt))
            }
            _ => {
                return Err(CliError::Domain(
                    "cone file needs exactly one of \"rays\" and \"quotient\"".into(),
                ))
            }
        };
        let pair = match self.coeffs {
            Some(c) => ToricPair::new(germ, rats(c))?,
            None => ToricPair::without_boundary(germ),
        };
        Ok(Cone {
            pair,
            quotient,
            divisor: self.divisor.map(rats),
        })
    }
}

/// A polynomial in text form or as a list of terms.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum PolyInput {
    Text(String),
    Terms(Vec<TermInput>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermInput {
    pub coef: JsonRat,
    pub exp: Vec<i64>,
}

impl PolyInput {
    pub fn to_poly(&self, dim: usize) -> Result<Poly, CliError> {
        match self {
            PolyInput::Text(s) => Ok(parse_poly(dim, s)?),
            PolyInput::Terms(ts) => {
                let mut p = Poly::zero(dim);
                for t in ts {
                    if t.exp.len() != dim {
                        return Err(CliError::Domain(format!(
                            "term exponent {:?} has dimension {}, expected {dim}",
                            t.exp,
                            t.exp.len()
                        )));
                    }
                    p = &p + &Poly::monomial(t.coef.0.clone(), LatticePoint(t.exp.clone()))?;
                }
                Ok(p)
            }
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryInput {
    pub coeff: JsonRat,
    pub poly: PolyInput,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GermFile {
    pub dim: usize,
    #[serde(default = "one")]
    pub order: i64,
    pub chars: Option<Vec<i64>>,
    #[serde(default)]
    pub eqs: Vec<PolyInput>,
    pub tag: Option<String>,
    #[serde(default)]
    pub boundary: Vec<BoundaryInput>,
}

fn one() -> i64 {
    1
}

impl GermFile {
    pub fn into_germ(self) -> Result<(HyperquotientGerm, Vec<BoundaryDivisor>), CliError> {
        let chars = self.chars.unwrap_or_else(|| vec![0; self.dim]);
        if chars.len() != self.dim {
            return Err(CliError::Domain(format!(
                "{} characters for dimension {}",
                chars.len(),
                self.dim
            )));
        }
        let action = CyclicAction::new(self.order, &chars)?;
        let eqs = self
            .eqs
            .iter()
            .map(|e| e.to_poly(self.dim))
            .collect::<Result<Vec<_>, _>>()?;
        let tag = self.tag.map(|t| t.parse::<GermTag>()).transpose()?;
        let germ = HyperquotientGerm::new(action, eqs, tag)?;
        let boundary = self
            .boundary
            .iter()
            .map(|b| {
                Ok(BoundaryDivisor::new(
                    b.coeff.0.clone(),
                    b.poly.to_poly(self.dim)?,
                ))
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        Ok((germ, boundary))
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NewtonFile {
    pub dim: usize,
    pub vertices: Vec<Vec<i64>>,
}

impl NewtonFile {
    pub fn into_polytope(self) -> Result<NewtonPolytope, CliError> {
        let pts: Vec<LatticePoint> = self.vertices.into_iter().map(LatticePoint).collect();
        Ok(NewtonPolytope::from_generators(self.dim, &pts)?)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointInput {
    pub r: i64,
    pub b: i64,
    pub d: i64,
    pub v: i64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasketFile {
    pub n: i64,
    pub a: i64,
    pub b: i64,
    pub points: Vec<PointInput>,
}

impl BasketFile {
    pub fn into_config(self) -> Result<BasketConfig, CliError> {
        let pts = self
            .points
            .iter()
            .map(|p| FictitiousPoint::new(p.r, p.b, p.d, p.v))
            .collect::<Result<Vec<_>, _>>()?;
        let points: [FictitiousPoint; 2] = pts.try_into().map_err(|v: Vec<_>| {
            CliError::Domain(format!("basket needs exactly 2 points, got {}", v.len()))
        })?;
        Ok(BasketConfig::new(self.n, self.a, self.b, points)?)
    }
}
