//! JSON run configuration.

use std::path::Path;

use nearsphere::expansions::StabilityTheorem;
use nearsphere::numeric::t_ladder;
use nearsphere::spherefield::{harmonic_combination, random_harmonic_field, AmbientPolynomial, RadialField, Term};
use nearsphere::{Curvature, SpaceForm};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// −1, 0 or +1
    pub curvature: i64,
    pub n: usize,
    pub rho: f64,
    /// Polynomial exactness degree L of the quadrature grid.
    pub grid_exactness: u32,
    #[serde(default)]
    pub field: FieldSpec,
    #[serde(default)]
    pub task: TaskParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FieldSpec {
    #[default]
    Zero,
    /// Σ c·Y_{l,i} over the orthonormal bases of the harmonics module.
    Harmonics { terms: Vec<HarmonicTerm> },
    /// Raw monomials in x₁..x_{n+1}; tied to one n.
    Polynomial { terms: Vec<Term> },
    /// Uniform(−1, 1) coefficients on every basis harmonic of the listed
    /// degrees, scaled by `amplitude`, drawn from the run seed.
    Random { degrees: Vec<u32>, amplitude: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HarmonicTerm {
    pub degree: u32,
    pub index: usize,
    pub coefficient: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theorem: Option<StabilityTheorem>,
    /// Scale applied to the field before constraining; 1 when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    /// Amplitudes for ladders and sweeps; the standard ladder when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ts: Option<Vec<f64>>,
    /// Enforce A_j(Ω) = ψ_j(ρ) and the barycenter condition before
    /// evaluating (eval, deficit, asymmetry).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constrain_j: Option<i64>,
}

/// Cartesian parameter grid for `stability-sweep`. Absent lists fall back to
/// the single top-level value; absent `indices` means every admissible (k, j).
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curvatures: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ns: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rhos: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theorems: Option<Vec<StabilityTheorem>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub indices: Option<Vec<(i64, i64)>>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| CliError::Validation(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Validation(m));
        Curvature::from_int(self.curvature)?;
        if !(2..=5).contains(&self.n) {
            return bad(format!("n must be in 2..=5, got {}", self.n));
        }
        if !(self.rho > 0.0 && self.rho.is_finite()) {
            return bad(format!("rho must be positive, got {}", self.rho));
        }
        if self.grid_exactness < 2 {
            return bad(format!("grid_exactness must be >= 2, got {}", self.grid_exactness));
        }
        match &self.field {
            FieldSpec::Random { degrees, amplitude } => {
                if degrees.is_empty() || !amplitude.is_finite() {
                    return bad("random field needs degrees and a finite amplitude".into());
                }
            }
            FieldSpec::Polynomial { terms } => {
                if terms.iter().any(|t| t.exponents.len() != self.n + 1) {
                    return bad(format!("polynomial terms need {} exponents", self.n + 1));
                }
            }
            FieldSpec::Harmonics { terms } => {
                if terms.iter().any(|t| !t.coefficient.is_finite()) {
                    return bad("harmonic coefficients must be finite".into());
                }
            }
            FieldSpec::Zero => {}
        }
        if self.task.t.is_some_and(|t| !t.is_finite()) {
            return bad("t must be finite".into());
        }
        if let Some(ts) = &self.task.ts {
            if ts.is_empty() || ts.iter().any(|t| !t.is_finite()) {
                return bad("ts must be a non-empty list of finite amplitudes".into());
            }
        }
        if let Some(s) = &self.sweep {
            for c in s.curvatures.iter().flatten() {
                Curvature::from_int(*c)?;
            }
            if s.ns.iter().flatten().any(|n| !(2..=5).contains(n)) {
                return bad("sweep ns must lie in 2..=5".into());
            }
            if s.rhos.iter().flatten().any(|r| !(*r > 0.0 && r.is_finite())) {
                return bad("sweep rhos must be positive".into());
            }
            if matches!(self.field, FieldSpec::Polynomial { .. })
                && s.ns.as_ref().is_some_and(|ns| ns.iter().any(|n| *n != self.n))
            {
                return bad("a polynomial field cannot be swept over n".into());
            }
        }
        Ok(())
    }

    pub fn form(&self) -> Result<SpaceForm, CliError> {
        Ok(SpaceForm::new(Curvature::from_int(self.curvature)?, self.n)?)
    }

    pub fn ts(&self) -> Vec<f64> {
        self.task.ts.clone().unwrap_or_else(|| t_ladder().to_vec())
    }

    /// The configured field on Sⁿ.
    pub fn field(&self, n: usize, seed: u64) -> Result<RadialField, CliError> {
        Ok(match &self.field {
            FieldSpec::Zero => RadialField::zero(n),
            FieldSpec::Harmonics { terms } => {
                let t: Vec<(u32, usize, f64)> = terms.iter().map(|t| (t.degree, t.index, t.coefficient)).collect();
                harmonic_combination(n, &t)?
            }
            FieldSpec::Polynomial { terms } => {
                if n != self.n {
                    return Err(CliError::Validation("a polynomial field is tied to the configured n".into()));
                }
                RadialField::new(n, AmbientPolynomial::new(n + 1, terms.clone())?)?
            }
            FieldSpec::Random { degrees, amplitude } => random_harmonic_field(n, degrees, seed)?.scale(*amplitude),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"{
        "curvature": -1, "n": 2, "rho": 1.0, "grid_exactness": 24,
        "field": {"kind": "harmonics", "terms": [{"degree": 2, "index": 0, "coefficient": 1.0}]},
        "task": {"k": 1, "j": 0, "theorem": "T1.1", "ts": [0.01, 0.003]},
        "sweep": {"curvatures": [-1, 1], "indices": [[1, -1], [1, 0]]}
    }"#;

    #[test]
    fn round_trip() {
        let c = RunConfig::parse(SAMPLE).unwrap();
        assert_eq!(c.task.theorem, Some(StabilityTheorem::T1_1));
        assert_eq!(RunConfig::parse(&c.to_json()).unwrap(), c);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(RunConfig::parse(&SAMPLE.replace("\"curvature\": -1", "\"curvature\": 2")).is_err());
        assert!(RunConfig::parse(&SAMPLE.replace("\"rho\": 1.0", "\"rho\": -1.0")).is_err());
        assert!(RunConfig::parse(&SAMPLE.replace("\"n\": 2", "\"n\": 2, \"extra\": 1")).is_err());
        assert!(RunConfig::parse(&SAMPLE.replace("T1.1", "T9")).is_err());
    }

    #[test]
    fn random_fields_follow_the_seed() {
        let c = RunConfig::parse(
            r#"{"curvature": 0, "n": 2, "rho": 1.0, "grid_exactness": 8,
            "field": {"kind": "random", "degrees": [2], "amplitude": 0.1}}"#,
        )
        .unwrap();
        assert_eq!(c.field(2, 3).unwrap(), c.field(2, 3).unwrap());
        assert_ne!(c.field(2, 3).unwrap(), c.field(2, 4).unwrap());
    }
}
