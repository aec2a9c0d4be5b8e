//! JSON model configuration.

use serde::Deserialize;

use ellharm::ellipsoid::EllipsoidalSystem;
use ellharm::pcm::{seeded_charges, DielectricModel, PointCharge};

/// Cavity, permittivities and charges. Charges are given either explicitly
/// or as a (seed, count) pair for the documented deterministic sampler —
/// exactly one of the two.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub eps_in: f64,
    pub eps_out: f64,
    #[serde(default)]
    pub charges: Option<Vec<ChargeSpec>>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub count: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChargeSpec {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub q: f64,
}

impl ModelConfig {
    pub fn load(path: &std::path::Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        let config: ModelConfig = serde_json::from_str(&text)
            .map_err(|e| format!("cannot parse {}: {e}", path.display()))?;
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<(), String> {
        match (&self.charges, self.seed, self.count) {
            (Some(_), None, None) => Ok(()),
            (None, Some(_), Some(_)) => Ok(()),
            (Some(_), _, _) => Err("config must give either `charges` or (`seed`, `count`), not both".into()),
            _ => Err("config needs either `charges` or both `seed` and `count`".into()),
        }
    }

    pub fn build_model(&self) -> Result<DielectricModel, String> {
        let sys = EllipsoidalSystem::new(self.a, self.b, self.c).map_err(|e| e.to_string())?;
        let charges: Vec<PointCharge> = match &self.charges {
            Some(list) => list
                .iter()
                .map(|c| PointCharge {
                    position: [c.x, c.y, c.z],
                    q: c.q,
                })
                .collect(),
            None => seeded_charges(&sys, self.seed.unwrap(), self.count.unwrap()),
        };
        DielectricModel::new(sys, self.eps_in, self.eps_out, charges).map_err(|e| e.to_string())
    }
}
