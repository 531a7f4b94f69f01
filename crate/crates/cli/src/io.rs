//! JSON documents and exact point literals for the command-line surface.
//!
//! Every emitted document carries `"schema": "blaschke-dyn/1"`. A finite
//! Blaschke product serializes as `{"rho": {"re", "im"}, "zeros": [{"re",
//! "im"}, ...]}` in exactly that field order; exact maps carry their data as
//! `a/b+c/d*i` strings so nothing is lost to floating point.

use blaschke_core::blaschke::FiniteBlaschkeProduct;
use blaschke_core::dynamics::{ExactBlaschke, ExactEndo, GaussianRational};
use blaschke_core::C64;
use serde::{Deserialize, Serialize};

pub const SCHEMA: &str = "blaschke-dyn/1";

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for ComplexJson {
    fn from(z: C64) -> Self {
        ComplexJson { re: z.re, im: z.im }
    }
}

impl From<ComplexJson> for C64 {
    fn from(z: ComplexJson) -> Self {
        C64::new(z.re, z.im)
    }
}

/// A finite Blaschke product document (field order: rho, then zeros).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FbpJson {
    pub schema: Option<String>,
    pub rho: ComplexJson,
    pub zeros: Vec<ComplexJson>,
}

impl FbpJson {
    pub fn from_product(f: &FiniteBlaschkeProduct) -> Self {
        FbpJson {
            schema: Some(SCHEMA.to_string()),
            rho: f.rho().into(),
            zeros: f.zeros().iter().map(|&z| z.into()).collect(),
        }
    }

    pub fn to_product(&self) -> blaschke_core::Result<FiniteBlaschkeProduct> {
        FiniteBlaschkeProduct::new(
            self.rho.into(),
            self.zeros.iter().map(|&z| z.into()).collect(),
        )
    }
}

/// One exact Blaschke factor with string-encoded Q(i) entries.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExactFactorJson {
    pub rho: String,
    pub zeros: Vec<String>,
}

impl ExactFactorJson {
    pub fn to_factor(&self) -> Result<ExactBlaschke, String> {
        let rho: GaussianRational = self.rho.parse().map_err(|e| format!("{e}"))?;
        let zeros = self
            .zeros
            .iter()
            .map(|s| s.parse::<GaussianRational>().map_err(|e| format!("{e}")))
            .collect::<Result<Vec<_>, _>>()?;
        ExactBlaschke::new(rho, zeros).map_err(|e| format!("{e}"))
    }
}

/// An exact endomorphism: a composition chain, outermost factor first.
/// A bare factor object is accepted as a one-element chain.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ExactMapJson {
    Chain {
        schema: Option<String>,
        factors: Vec<ExactFactorJson>,
    },
    Single(ExactFactorJson),
}

impl ExactMapJson {
    pub fn to_endo(&self) -> Result<ExactEndo, String> {
        let factors = match self {
            ExactMapJson::Chain { factors, .. } => factors
                .iter()
                .map(|f| f.to_factor())
                .collect::<Result<Vec<_>, _>>()?,
            ExactMapJson::Single(f) => vec![f.to_factor()?],
        };
        ExactEndo::new(factors).map_err(|e| format!("{e}"))
    }
}

/// Parse a `--map` argument: either a path to an exact-map JSON file or the
/// shorthand `z^N` for the power map.
pub fn parse_exact_map(spec: &str) -> Result<ExactEndo, String> {
    if let Some(rest) = spec.strip_prefix("z^") {
        let d: usize = rest
            .parse()
            .map_err(|_| format!("bad power-map shorthand: {spec}"))?;
        if d == 0 {
            return Err("power map needs degree >= 1".to_string());
        }
        return ExactEndo::power_map(d).map_err(|e| format!("{e}"));
    }
    let text = std::fs::read_to_string(spec).map_err(|e| format!("cannot read {spec}: {e}"))?;
    let doc: ExactMapJson =
        serde_json::from_str(&text).map_err(|e| format!("bad exact map JSON in {spec}: {e}"))?;
    doc.to_endo()
}

pub fn read_fbp(path: &str) -> Result<FiniteBlaschkeProduct, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?;
    let doc: FbpJson =
        serde_json::from_str(&text).map_err(|e| format!("bad product JSON in {path}: {e}"))?;
    doc.to_product()
        .map_err(|e| format!("invalid product in {path}: {e}"))
}
