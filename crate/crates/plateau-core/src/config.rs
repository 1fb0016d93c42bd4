//! Run configuration shared by the CLI stages.

use crate::error::{Error, Result};
use crate::family::SweepConfig;
use crate::geometry::GridSpec;
use crate::reconstruct::ReconstructConfig;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, rename_all = "camelCase")]
pub struct Tolerances {
    pub moment: f64,
    pub newton: f64,
    pub stokes: f64,
    pub dbar: f64,
    pub green_moment: f64,
    pub jump: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            moment: 1e-6,
            newton: 1e-6,
            stokes: 1e-6,
            dbar: 1e-3,
            green_moment: 1e-3,
            jump: 5e-3,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, rename_all = "camelCase")]
pub struct RunConfig {
    pub quadrature_n: usize,
    pub zeta_grid: GridSpec,
    /// None -> 2 * max bounded winding + 2.
    pub kmax: Option<usize>,
    pub tolerances: Tolerances,
    pub collar_factor: f64,
    /// None -> geometry default (2x max chord with a diameter floor).
    pub dist_to_curve_cutoff: Option<f64>,
    pub disc_tol_rel: f64,
    pub lipschitz_bound: Option<f64>,
    pub green_nodes: usize,
    /// Stage subset for `validate`; None runs everything applicable.
    pub stages: Option<Vec<String>>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            quadrature_n: 256,
            zeta_grid: GridSpec::square(2.0, 64),
            kmax: None,
            tolerances: Tolerances::default(),
            collar_factor: 1.1,
            dist_to_curve_cutoff: None,
            disc_tol_rel: 1e-8,
            lipschitz_bound: None,
            green_nodes: 10_000,
            stages: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let t = &self.tolerances;
        for (name, v) in [
            ("moment", t.moment),
            ("newton", t.newton),
            ("stokes", t.stokes),
            ("dbar", t.dbar),
            ("green-moment", t.green_moment),
            ("jump", t.jump),
        ] {
            if !(v > 0.0) {
                return Err(Error::InvalidSpec(format!("tolerance {name} must be positive")));
            }
        }
        if self.quadrature_n < 16 || !self.quadrature_n.is_power_of_two() {
            return Err(Error::InvalidSpec(
                "quadratureN must be a power of two >= 16".into(),
            ));
        }
        if self.zeta_grid.nx < 8 || self.zeta_grid.ny < 8 {
            return Err(Error::InvalidSpec("zeta grid too coarse".into()));
        }
        if self.collar_factor <= 1.0 || self.collar_factor > 2.0 {
            return Err(Error::InvalidSpec(
                "collarFactor must lie in (1, 2]".into(),
            ));
        }
        Ok(())
    }

    pub fn sweep_config(&self) -> SweepConfig {
        SweepConfig {
            grid: self.zeta_grid,
            quadrature_n: self.quadrature_n,
            kmax: self.kmax,
            cutoff: self.dist_to_curve_cutoff,
            reconstruct: ReconstructConfig {
                moment_tol: self.tolerances.moment,
                newton_tol: self.tolerances.newton,
                stokes_tol: self.tolerances.stokes,
                disc_tol_rel: self.disc_tol_rel,
                ..ReconstructConfig::default()
            },
            lipschitz_bound: self.lipschitz_bound,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_valid() {
        RunConfig::default().validate().unwrap();
    }

    #[test]
    fn rejects_nonpositive_tolerance() {
        let mut cfg = RunConfig::default();
        cfg.tolerances.stokes = 0.0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn config_json_roundtrip() {
        let cfg = RunConfig::default();
        let s = serde_json::to_string(&cfg).unwrap();
        let back: RunConfig = serde_json::from_str(&s).unwrap();
        assert_eq!(back.quadrature_n, cfg.quadrature_n);
        assert_eq!(back.zeta_grid, cfg.zeta_grid);
    }
}
