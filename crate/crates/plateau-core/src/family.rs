//! Parameter sweep: reconstruct every slice, resolve one global boundary
//! sign, collate the singular locus, and check cross-slice continuity.

use crate::error::{Error, Result};
use crate::geometry::{classify_components, project_z1, CurveFamily, GridSpec, PlanarCurve};
use crate::moments::{build_moment_table, moment_residual};
use crate::reconstruct::{discriminant_locus, reconstruct_slice, ChainSlice, ReconstructConfig};
use num_complex::Complex64;

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub grid: GridSpec,
    pub quadrature_n: usize,
    pub kmax: Option<usize>,
    pub cutoff: Option<f64>,
    pub reconstruct: ReconstructConfig,
    pub lipschitz_bound: Option<f64>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            grid: GridSpec::square(2.0, 64),
            quadrature_n: 256,
            kmax: None,
            cutoff: None,
            reconstruct: ReconstructConfig::default(),
            lipschitz_bound: None,
        }
    }
}

/// One (t, cell) entry of the collated singular locus.
#[derive(Debug, Clone, Copy)]
pub struct SingularCell {
    pub t: f64,
    pub zeta: Complex64,
    pub disc_abs: f64,
}

#[derive(Debug, Clone)]
pub struct LeviFlatSet {
    pub t_grid: Vec<f64>,
    pub slices: Vec<ChainSlice>,
    pub moment_residuals: Vec<f64>,
    pub singular: Vec<SingularCell>,
    /// Per slice pair max root displacement / |dt|; NaN when not comparable.
    pub continuity: Vec<f64>,
    pub sign: i8,
    pub grid: GridSpec,
}

impl LeviFlatSet {
    pub fn max_stokes_residual(&self) -> f64 {
        self.slices
            .iter()
            .map(|s| s.stokes_residual)
            .fold(0.0, f64::max)
    }
}

/// Reconstruct all slices of the family. Per-slice failures are annotated
/// with their parameter; an inconsistent boundary sign across slices is an
/// error of the family, not of a slice.
pub fn sweep(family: &CurveFamily, cfg: &SweepConfig) -> Result<LeviFlatSet> {
    let mut slices = Vec::with_capacity(family.t_grid.len());
    let mut moment_residuals = Vec::with_capacity(family.t_grid.len());
    let mut singular = Vec::new();
    for (i, &t) in family.t_grid.iter().enumerate() {
        let slice = &family.slices[i];
        if slice.is_empty() {
            slices.push(ChainSlice::empty(t));
            moment_residuals.push(0.0);
            continue;
        }
        let run = || -> Result<(ChainSlice, f64, Vec<SingularCell>)> {
            let planar: Vec<PlanarCurve> = slice
                .curves
                .iter()
                .map(project_z1)
                .collect::<Result<_>>()?;
            let cutoff = cfg
                .cutoff
                .unwrap_or_else(|| crate::geometry::default_cutoff(&slice.curves));
            let map = classify_components(&planar, cfg.grid, cutoff)?;
            let maxwind = map.winding.iter().map(|&w| w.max(0) as usize).max().unwrap_or(0);
            let kmax = cfg.kmax.unwrap_or(2 * maxwind + 2).max(maxwind.max(1));
            let table = build_moment_table(&slice.curves, &map, kmax)?;
            let resid = moment_residual(&table);
            let chain = reconstruct_slice(t, &slice.curves, &planar, &table, &cfg.reconstruct)?;
            let mut cells = Vec::new();
            for fiber in &chain.fibers {
                for gidx in discriminant_locus(fiber, &map, cfg.reconstruct.disc_tol_rel) {
                    let i_in_fiber = fiber.points.binary_search(&gidx).unwrap();
                    cells.push(SingularCell {
                        t,
                        zeta: map.grid.point(gidx),
                        disc_abs: fiber.disc_abs[i_in_fiber],
                    });
                }
            }
            Ok((chain, resid, cells))
        };
        let (chain, resid, cells) = run().map_err(|e| e.at_parameter(t))?;
        slices.push(chain);
        moment_residuals.push(resid);
        singular.extend(cells);
    }

    // one global boundary sign; slices whose battery did not discriminate
    // (sign_strength ~ 0) do not vote
    let mut sign = 0i8;
    for s in &slices {
        if s.is_empty() || s.sign_strength < 1e-9 {
            continue;
        }
        if sign == 0 {
            sign = s.sign;
        } else if sign != s.sign {
            return Err(Error::OrientationInconsistency(format!(
                "slice t = {} resolved sign {}, earlier slices {}",
                s.t, s.sign, sign
            )));
        }
    }
    if sign == 0 {
        sign = 1;
    }

    let continuity = continuity_ratios(&family.t_grid, &slices);
    Ok(LeviFlatSet {
        t_grid: family.t_grid.clone(),
        slices,
        moment_residuals,
        singular,
        continuity,
        sign,
        grid: cfg.grid,
    })
}

fn continuity_ratios(t_grid: &[f64], slices: &[ChainSlice]) -> Vec<f64> {
    let mut out = Vec::new();
    for w in 0..t_grid.len().saturating_sub(1) {
        let (a, b) = (&slices[w], &slices[w + 1]);
        let dt = t_grid[w + 1] - t_grid[w];
        if a.is_empty() || b.is_empty() {
            out.push(f64::NAN);
            continue;
        }
        let mut disp = 0.0f64;
        for fa in &a.fibers {
            let Some(fb) = b.fibers.iter().find(|f| f.component == fa.component) else {
                continue;
            };
            // symmetric nearest-root displacement at shared grid points
            let shared: std::collections::HashMap<usize, usize> = fb
                .points
                .iter()
                .enumerate()
                .map(|(i, &g)| (g, i))
                .collect();
            for (ia, &g) in fa.points.iter().enumerate() {
                let Some(&ib) = shared.get(&g) else { continue };
                let ra = fa.root_row(ia);
                let rb = fb.root_row(ib);
                for &x in ra {
                    let d = rb.iter().map(|&y| (y - x).norm()).fold(f64::INFINITY, f64::min);
                    disp = disp.max(d);
                }
                for &y in rb {
                    let d = ra.iter().map(|&x| (y - x).norm()).fold(f64::INFINITY, f64::min);
                    disp = disp.max(d);
                }
            }
        }
        out.push(disp / dt.abs());
    }
    out
}

/// Max displacement ratio over adjacent nonempty slice pairs, checked against
/// the configured Lipschitz bound when one is set.
pub fn continuity_check(set: &LeviFlatSet, bound: Option<f64>) -> (f64, bool) {
    let max_ratio = set
        .continuity
        .iter()
        .copied()
        .filter(|r| r.is_finite())
        .fold(0.0, f64::max);
    let pass = bound.map(|b| max_ratio <= b).unwrap_or(true);
    (max_ratio, pass)
}

/// The collated singular locus, ordered by (t, grid position).
pub fn collate_singular(set: &LeviFlatSet) -> Vec<SingularCell> {
    let mut cells = set.singular.clone();
    cells.sort_by(|a, b| {
        (a.t, a.zeta.re, a.zeta.im)
            .partial_cmp(&(b.t, b.zeta.re, b.zeta.im))
            .unwrap()
    });
    cells
}

/// Crude default Lipschitz tripwire: ten times the largest finite-difference
/// t-derivative of the boundary nodes.
pub fn default_lipschitz_bound(family: &CurveFamily) -> Option<f64> {
    let mut max_fd = 0.0f64;
    let mut seen = false;
    for w in 0..family.t_grid.len().saturating_sub(1) {
        let dt = family.t_grid[w + 1] - family.t_grid[w];
        let (a, b) = (&family.slices[w], &family.slices[w + 1]);
        for (ca, cb) in a.curves.iter().zip(&b.curves) {
            if ca.len() != cb.len() {
                continue;
            }
            for j in 0..ca.len() {
                let d1 = (cb.z1[j] - ca.z1[j]).norm();
                let d2 = (cb.z2[j] - ca.z2[j]).norm();
                max_fd = max_fd.max((d1.powi(2) + d2.powi(2)).sqrt() / dt.abs());
                seen = true;
            }
        }
    }
    seen.then_some(10.0 * max_fd)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn sweep_torus_matches_oracle() {
        let fam = fixtures::torus_family(9, 256);
        let set = sweep(&fam, &SweepConfig::default()).unwrap();
        assert_eq!(set.slices.len(), 9);
        for (i, slice) in set.slices.iter().enumerate() {
            let t = set.t_grid[i];
            let a = (1.0 - t * t).sqrt();
            assert_eq!(slice.fibers.len(), 1);
            let fiber = &slice.fibers[0];
            assert_eq!(fiber.degree, 2);
            for (p, &gidx) in fiber.points.iter().enumerate() {
                let zeta = set.grid.point(gidx);
                for &w in fiber.root_row(p) {
                    let err = (w - a * zeta).norm().min((w + a * zeta).norm());
                    assert!(err < 1e-6, "sheet error {err} at t={t}, zeta={zeta}");
                }
            }
        }
    }

    #[test]
    fn sweep_error_annotated_with_t() {
        let mut fam = fixtures::torus_family(5, 256);
        // corrupt one slice: an anti-holomorphic 0.1 e^{-i theta} term in z2
        // (a plain z2 shift would still bound a translated chain)
        let bad = 2;
        let spec = fam.slices[bad].curves[0].source.clone().unwrap();
        let mut z2 = spec.z2.clone();
        z2.terms.push((-1, num_complex::Complex64::new(0.1, 0.0)));
        let corrupted = crate::geometry::CurveSpec {
            z2: crate::geometry::ComponentSpec::new(z2.terms),
            ..spec
        };
        fam.slices[bad].curves[0] = crate::geometry::sample_curve(&corrupted, 256).unwrap();
        match sweep(&fam, &SweepConfig::default()) {
            Err(Error::AtParameter { t, source }) => {
                assert!((t - fam.t_grid[bad]).abs() < 1e-12);
                assert!(matches!(*source, Error::MomentViolation { .. }));
            }
            other => panic!("expected per-slice failure, got {other:?}"),
        }
    }

    #[test]
    fn sweep_empty_rim_slices() {
        let fam = fixtures::torus_family_padded(11, 256, 1.3);
        let set = sweep(&fam, &SweepConfig::default()).unwrap();
        assert!(set.slices.first().unwrap().is_empty());
        assert!(set.slices.last().unwrap().is_empty());
        let nonempty = set.slices.iter().filter(|s| !s.is_empty()).count();
        assert!(nonempty >= 5);
    }

    #[test]
    fn continuity_constant_family() {
        let fam = fixtures::constant_graph_family(5, 256);
        let set = sweep(&fam, &SweepConfig::default()).unwrap();
        let (ratio, _) = continuity_check(&set, None);
        assert!(ratio < 1e-8, "ratio {ratio}");
    }

    #[test]
    fn continuity_torus_bounded_by_oracle() {
        let fam = fixtures::torus_family(21, 256);
        let set = sweep(&fam, &SweepConfig::default()).unwrap();
        // |d/dt sqrt(1-t^2) z| <= |t|/a * |z| <= 2 * 0.95/a(0.95) on the disk
        let t_max: f64 = 0.95;
        let a_min = (1.0 - t_max * t_max).sqrt();
        let oracle = t_max / a_min * 2.0;
        let (ratio, _) = continuity_check(&set, Some(2.0 * oracle));
        assert!(ratio <= 2.0 * oracle, "ratio {ratio} vs oracle {oracle}");
    }

    #[test]
    fn continuity_single_slice_skipped() {
        let fam = fixtures::constant_graph_family(1, 256);
        let set = sweep(&fam, &SweepConfig::default()).unwrap();
        let (ratio, pass) = continuity_check(&set, Some(1.0));
        assert_eq!(ratio, 0.0);
        assert!(pass);
    }

    #[test]
    fn singular_locus_tracks_branch() {
        let fam = fixtures::sqrt_family(5, 256);
        let set = sweep(&fam, &SweepConfig::default()).unwrap();
        let cells = collate_singular(&set);
        assert!(!cells.is_empty());
        let step = set.grid.step();
        for c in &cells {
            let dist = (c.zeta - num_complex::Complex64::new(c.t, 0.0)).norm();
            assert!(dist <= 2.0 * step + 1e-12, "cell at {} for t={}", c.zeta, c.t);
        }
    }

    #[test]
    fn singular_locus_empty_for_graphs() {
        let fam = fixtures::constant_graph_family(3, 256);
        let set = sweep(&fam, &SweepConfig::default()).unwrap();
        assert!(set.singular.is_empty());
    }

    #[test]
    fn refinement_reproduces_shared_slices() {
        let coarse = fixtures::sqrt_family(3, 256);
        let fine = fixtures::sqrt_family(5, 256);
        let cfg = SweepConfig::default();
        let a = sweep(&coarse, &cfg).unwrap();
        let b = sweep(&fine, &cfg).unwrap();
        // t = -0.5, 0, 0.5 are shared; fibers must be bitwise identical
        for (ia, &t) in a.t_grid.iter().enumerate() {
            let ib = b.t_grid.iter().position(|&x| x == t).unwrap();
            let (fa, fb) = (&a.slices[ia].fibers, &b.slices[ib].fibers);
            assert_eq!(fa.len(), fb.len());
            for (x, y) in fa.iter().zip(fb) {
                assert_eq!(x.points, y.points);
                assert!(x
                    .roots
                    .iter()
                    .zip(&y.roots)
                    .all(|(p, q)| p.re.to_bits() == q.re.to_bits()
                        && p.im.to_bits() == q.im.to_bits()));
            }
        }
    }
}
