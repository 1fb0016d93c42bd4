//! Power-sum moments S_k(zeta) of a slice, the moment condition on the
//! unbounded component, and the family integral I_{M,h} evaluated directly on
//! transverse slices or through the Poincare form.

use crate::error::{Error, Result};
use crate::geometry::{
    min_distance_to_curves, ComponentMap, CurveFamily, ParamCurve, PlanarCurve, BOUNDARY,
};
use crate::poly::Poly2;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Contour quadrature data of one slice, reused across evaluation points.
///
/// Away from the contour the plain trapezoid sums are spectrally accurate.
/// Near it, the ratio form `winding * T_k / T_0` cancels the shared aliasing
/// of numerator and denominator (exactly so for circle fixtures), which keeps
/// root evaluation uniformly accurate up to the label band.
pub struct CauchyEvaluator {
    /// Flattened nodes over all curves of the slice.
    z1: Vec<Complex64>,
    z2: Vec<Complex64>,
    /// dz1/dtheta times the trapezoid weight and orientation.
    wdz1: Vec<Complex64>,
}

impl CauchyEvaluator {
    pub fn new(curves: &[ParamCurve]) -> CauchyEvaluator {
        let mut z1 = Vec::new();
        let mut z2 = Vec::new();
        let mut wdz1 = Vec::new();
        for c in curves {
            let w = c.theta_period / c.len() as f64 * c.orientation as f64;
            z1.extend_from_slice(&c.z1);
            z2.extend_from_slice(&c.z2);
            wdz1.extend(c.dz1.iter().map(|&d| d * w));
        }
        CauchyEvaluator { z1, z2, wdz1 }
    }

    pub fn is_empty(&self) -> bool {
        self.z1.is_empty()
    }

    /// Plain trapezoid sums T_k(zeta) = (1/2 pi i) sum z2^k wdz1 / (z1 - zeta)
    /// for k = 0..=kmax.
    pub fn sums_plain(&self, zeta: Complex64, kmax: usize) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); kmax + 1];
        for i in 0..self.z1.len() {
            let ker = self.wdz1[i] / (self.z1[i] - zeta);
            let mut pw = Complex64::new(1.0, 0.0);
            out[0] += ker;
            for k in 1..=kmax {
                pw *= self.z2[i];
                out[k] += ker * pw;
            }
        }
        let norm = Complex64::new(0.0, 2.0 * PI);
        out.iter_mut().for_each(|v| *v /= norm);
        out
    }

    /// Ratio-compensated sums for a point inside a component of nonzero
    /// winding d: S_k = d * T_k / T_0 (and S_0 = the raw T_0 so the
    /// cross-check against the labeled winding stays meaningful).
    pub fn sums_compensated(&self, zeta: Complex64, kmax: usize, winding: i32) -> Vec<Complex64> {
        let mut out = self.sums_plain(zeta, kmax);
        let t0 = out[0];
        if winding != 0 && t0.norm() > 1e-12 {
            let scale = Complex64::new(winding as f64, 0.0) / t0;
            for v in out.iter_mut().skip(1) {
                *v *= scale;
            }
        }
        out
    }

    /// Compensated sums together with their zeta-derivatives.
    pub fn sums_and_derivs(
        &self,
        zeta: Complex64,
        kmax: usize,
        winding: i32,
    ) -> (Vec<Complex64>, Vec<Complex64>) {
        let mut t = vec![Complex64::new(0.0, 0.0); kmax + 1];
        let mut td = vec![Complex64::new(0.0, 0.0); kmax + 1];
        for i in 0..self.z1.len() {
            let inv = 1.0 / (self.z1[i] - zeta);
            let ker = self.wdz1[i] * inv;
            let kerd = ker * inv;
            let mut pw = Complex64::new(1.0, 0.0);
            t[0] += ker;
            td[0] += kerd;
            for k in 1..=kmax {
                pw *= self.z2[i];
                t[k] += ker * pw;
                td[k] += kerd * pw;
            }
        }
        let norm = Complex64::new(0.0, 2.0 * PI);
        t.iter_mut().for_each(|v| *v /= norm);
        td.iter_mut().for_each(|v| *v /= norm);
        if winding != 0 && t[0].norm() > 1e-12 {
            let d = Complex64::new(winding as f64, 0.0);
            let t0 = t[0];
            let t0d = td[0];
            let mut s = vec![Complex64::new(0.0, 0.0); kmax + 1];
            let mut sd = vec![Complex64::new(0.0, 0.0); kmax + 1];
            s[0] = t0;
            sd[0] = t0d;
            for k in 1..=kmax {
                s[k] = d * t[k] / t0;
                sd[k] = d * (td[k] * t0 - t[k] * t0d) / (t0 * t0);
            }
            (s, sd)
        } else {
            (t, td)
        }
    }
}

/// Power sum S_k(zeta) of one slice by trapezoid contour quadrature.
pub fn power_sum(
    curves: &[ParamCurve],
    k: usize,
    zeta: Complex64,
    cutoff: f64,
) -> Result<Complex64> {
    let planar: Vec<PlanarCurve> = curves
        .iter()
        .map(crate::geometry::project_z1)
        .collect::<Result<_>>()?;
    let dist = min_distance_to_curves(&planar, zeta);
    if dist <= cutoff {
        return Err(Error::NearBoundary { zeta, dist, cutoff });
    }
    let eval = CauchyEvaluator::new(curves);
    Ok(eval.sums_plain(zeta, k)[k])
}

/// Values S_k on the evaluation grid with the component labeling attached.
#[derive(Debug, Clone)]
pub struct MomentTable {
    pub map: ComponentMap,
    pub kmax: usize,
    pub quadrature_n: usize,
    /// Dense rows of kmax+1 values per grid point; `valid[i]` marks rows
    /// actually computed (non-BOUNDARY points).
    pub values: Vec<Complex64>,
    pub valid: Vec<bool>,
    /// Max |S_0 - winding| over computed points, before rounding.
    pub s0_residual: f64,
}

impl MomentTable {
    pub fn row(&self, idx: usize) -> &[Complex64] {
        &self.values[idx * (self.kmax + 1)..(idx + 1) * (self.kmax + 1)]
    }
}

/// Build the moment table of one slice. Bounded components with nonzero
/// winding use the compensated evaluation; the unbounded component keeps the
/// plain sums so the moment residual is an honest measurement.
pub fn build_moment_table(
    curves: &[ParamCurve],
    map: &ComponentMap,
    kmax: usize,
) -> Result<MomentTable> {
    let maxwind = map.winding.iter().map(|&w| w.max(0) as usize).max().unwrap_or(0);
    if kmax < maxwind {
        return Err(Error::InvalidSpec(format!(
            "kmax = {kmax} below the maximal component winding {maxwind}"
        )));
    }
    let npts = map.grid.len();
    let quadrature_n = curves.iter().map(|c| c.len()).max().unwrap_or(0);
    let eval = CauchyEvaluator::new(curves);
    let mut values = vec![Complex64::new(0.0, 0.0); npts * (kmax + 1)];
    let mut valid = vec![false; npts];
    if curves.is_empty() {
        return Ok(MomentTable {
            map: map.clone(),
            kmax,
            quadrature_n,
            values,
            valid,
            s0_residual: 0.0,
        });
    }

    use rayon::prelude::*;
    let rows: Vec<Option<Vec<Complex64>>> = (0..npts)
        .into_par_iter()
        .map(|idx| {
            let lab = map.label[idx];
            if lab == BOUNDARY {
                return None;
            }
            let zeta = map.grid.point(idx);
            let wind = map.winding[lab as usize];
            Some(if wind != 0 {
                eval.sums_compensated(zeta, kmax, wind)
            } else {
                eval.sums_plain(zeta, kmax)
            })
        })
        .collect();

    let mut s0_residual = 0.0f64;
    for (idx, row) in rows.into_iter().enumerate() {
        if let Some(r) = row {
            let lab = map.label[idx] as usize;
            let dev = (r[0] - Complex64::new(map.winding[lab] as f64, 0.0)).norm();
            s0_residual = s0_residual.max(dev);
            values[idx * (kmax + 1)..(idx + 1) * (kmax + 1)].copy_from_slice(&r);
            valid[idx] = true;
        }
    }
    if s0_residual >= 1e-3 {
        return Err(Error::QuadratureFailure(format!(
            "S_0 deviates from the labeled winding by {s0_residual:.3e}"
        )));
    }
    Ok(MomentTable {
        map: map.clone(),
        kmax,
        quadrature_n,
        values,
        valid,
        s0_residual,
    })
}

/// Max |S_k| over unbounded-component grid points, 1 <= k <= kmax.
pub fn moment_residual(table: &MomentTable) -> f64 {
    let mut res = 0.0f64;
    for idx in 0..table.map.grid.len() {
        if !table.valid[idx] || table.map.label[idx] != 0 {
            continue;
        }
        let row = table.row(idx);
        for k in 1..=table.kmax {
            res = res.max(row[k].norm());
        }
    }
    res
}

/// Poincare form coefficients at theta for a puncture at t. Only n = 1 is
/// wired to fixtures: P_t(theta) = sign(theta - t)/2.
pub fn poincare_form(theta: &[f64], t: &[f64]) -> Result<Vec<f64>> {
    if theta.len() != t.len() || theta.is_empty() {
        return Err(Error::InvalidSpec("dimension mismatch in poincare_form".into()));
    }
    if theta == t {
        return Err(Error::SingularPoint);
    }
    match theta.len() {
        1 => Ok(vec![0.5 * (theta[0] - t[0]).signum()]),
        n => Err(Error::InvalidSpec(format!(
            "poincare_form implemented for n = 1, got n = {n}"
        ))),
    }
}

/// Holomorphic 1-form h1 dz1 + h2 dz2 with bivariate polynomial coefficients.
#[derive(Debug, Clone)]
pub struct HolomorphicTestForm {
    pub h1: Poly2,
    pub h2: Poly2,
}

impl HolomorphicTestForm {
    /// Monomial form z1^a z2^b dz_c (c = 1 or 2).
    pub fn monomial(a: usize, b: usize, c: usize) -> HolomorphicTestForm {
        let mut p = Poly2::zero(a, b);
        p.set(a, b, Complex64::new(1.0, 0.0));
        match c {
            1 => HolomorphicTestForm {
                h1: p,
                h2: Poly2::zero(0, 0),
            },
            _ => HolomorphicTestForm {
                h1: Poly2::zero(0, 0),
                h2: p,
            },
        }
    }

    /// All monomial forms of total coefficient degree <= deg.
    pub fn battery(deg: usize) -> Vec<HolomorphicTestForm> {
        let mut out = Vec::new();
        for c in 1..=2 {
            for a in 0..=deg {
                for b in 0..=(deg - a) {
                    out.push(HolomorphicTestForm::monomial(a, b, c));
                }
            }
        }
        out
    }

    /// d-bar-free exterior factor: dh = (dh2/dz1 - dh1/dz2) dz1 ^ dz2.
    pub fn curl(&self) -> Poly2 {
        let a = self.h2.partial_z1();
        let b = self.h1.partial_z2();
        let d1 = a.deg1().max(b.deg1());
        let d2 = a.deg2().max(b.deg2());
        let mut out = Poly2::zero(d1, d2);
        for i in 0..=d1 {
            for j in 0..=d2 {
                let av = a
                    .coeff
                    .get(i)
                    .and_then(|r| r.get(j))
                    .copied()
                    .unwrap_or_default();
                let bv = b
                    .coeff
                    .get(i)
                    .and_then(|r| r.get(j))
                    .copied()
                    .unwrap_or_default();
                out.set(i, j, av - bv);
            }
        }
        out
    }

    pub fn is_closed(&self) -> bool {
        self.curl().max_abs_coeff() < 1e-15
    }
}

/// Contour integral of h over the curves of one slice.
pub fn integrate_form(curves: &[ParamCurve], h: &HolomorphicTestForm) -> Complex64 {
    let mut total = Complex64::new(0.0, 0.0);
    for c in curves {
        let w = c.theta_period / c.len() as f64 * c.orientation as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..c.len() {
            acc += h.h1.eval(c.z1[i], c.z2[i]) * c.dz1[i] + h.h2.eval(c.z1[i], c.z2[i]) * c.dz2[i];
        }
        total += acc * w;
    }
    total
}

/// I_{M,h}(t) evaluated directly on the slice at a grid parameter t.
pub fn family_moment_direct(
    family: &CurveFamily,
    h: &HolomorphicTestForm,
    t: f64,
) -> Result<Complex64> {
    let idx = family
        .slice_index(t)
        .ok_or_else(|| {
            let (lo, hi) = family.hull();
            Error::OutOfRange { t, lo, hi }
        })?;
    if !family.transverse[idx] {
        return Err(Error::UseAlternative { t });
    }
    Ok(integrate_form(&family.slices[idx].curves, h))
}

/// I_{M,h}(t) as the surface integral of dh weighted by the Poincare form,
/// over the family mesh in (t', theta). Works at any t inside the grid hull,
/// transverse or not.
pub fn family_moment_poincare(
    family: &CurveFamily,
    h: &HolomorphicTestForm,
    t: f64,
) -> Result<Complex64> {
    let (lo, hi) = family.hull();
    if t < lo - 1e-12 || t > hi + 1e-12 {
        return Err(Error::OutOfRange { t, lo, hi });
    }
    let curl = h.curl();
    if curl.max_abs_coeff() < 1e-15 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let nt = family.t_grid.len();
    // G(t_i) = integral over the slice fibers of dh against the mixed
    // (t', theta) surface element.
    let mut g = vec![Complex64::new(0.0, 0.0); nt];
    for i in 0..nt {
        let slice = &family.slices[i];
        if slice.is_empty() {
            continue;
        }
        for (ci, curve) in slice.curves.iter().enumerate() {
            let n = curve.len();
            let w = curve.theta_period / n as f64 * curve.orientation as f64;
            for j in 0..n {
                // dz/dt' exact from the family spec, else centered differences
                let (dz1_dt, dz2_dt) = slice_t_derivative(family, i, ci, j)?;
                let jac = dz1_dt * curve.dz2[j] - dz2_dt * curve.dz1[j];
                g[i] += curl.eval(curve.z1[j], curve.z2[j]) * jac * w;
            }
        }
    }
    // integral over t' of G * sign(t'-t)/2, trapezoid with the kink cell split
    let tg = &family.t_grid;
    let mut above = Complex64::new(0.0, 0.0);
    let mut below = Complex64::new(0.0, 0.0);
    for i in 0..nt - 1 {
        let (a, b) = (tg[i], tg[i + 1]);
        let (ga, gb) = (g[i], g[i + 1]);
        if b <= t {
            below += (ga + gb) * 0.5 * (b - a);
        } else if a >= t {
            above += (ga + gb) * 0.5 * (b - a);
        } else {
            let gt = ga + (gb - ga) * ((t - a) / (b - a));
            below += (ga + gt) * 0.5 * (t - a);
            above += (gt + gb) * 0.5 * (b - t);
        }
    }
    Ok((above - below) * 0.5)
}

/// dz/dt' of curve node (slice i, curve ci, node j): exact when the family
/// carries polynomial t-dependence, centered finite differences otherwise.
fn slice_t_derivative(
    family: &CurveFamily,
    i: usize,
    ci: usize,
    j: usize,
) -> Result<(Complex64, Complex64)> {
    let slice = &family.slices[i];
    if let Some(derivs) = &slice.t_deriv {
        let spec = &derivs[ci];
        let th = slice.curves[ci].params[j];
        return Ok((
            spec.z1.eval(th, spec.cover),
            spec.z2.eval(th, spec.cover),
        ));
    }
    let nt = family.t_grid.len();
    let neighbor = |k: usize| -> Option<&ParamCurve> {
        family.slices[k].curves.get(ci).filter(|c| {
            c.len() == slice.curves[ci].len()
        })
    };
    let (klo, khi) = match (i > 0, i + 1 < nt) {
        (true, true) => (i - 1, i + 1),
        (false, true) => (i, i + 1),
        (true, false) => (i - 1, i),
        (false, false) => {
            return Err(Error::InvalidSpec(
                "single-slice family has no t-derivative".into(),
            ))
        }
    };
    match (neighbor(klo), neighbor(khi)) {
        (Some(a), Some(b)) => {
            let dt = family.t_grid[khi] - family.t_grid[klo];
            Ok(((b.z1[j] - a.z1[j]) / dt, (b.z2[j] - a.z2[j]) / dt))
        }
        _ => {
            // a neighbor slice is empty or mismatched: treat the fiber as
            // frozen there; the quadrature weight of such rims is small
            Ok((Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::geometry::{classify_components, default_cutoff, project_z1, GridSpec};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn power_sum_flat_disk_vanishes() {
        let curves = vec![fixtures::flat_circle(64)];
        let s = power_sum(&curves, 1, c(0.3, 0.0), 0.1).unwrap();
        assert!(s.norm() < 1e-14);
    }

    #[test]
    fn power_sum_graph_square() {
        // boundary of w = z^2: S_1(zeta) = zeta^2
        let curves = vec![fixtures::graph_power(2, 128)];
        let s = power_sum(&curves, 1, c(0.3, 0.0), 0.1).unwrap();
        assert!((s - c(0.09, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn power_sum_two_sheets() {
        // {w^2 = z}: S_2(zeta) = 2 zeta
        let curves = vec![fixtures::two_sheet_sqrt(256)];
        let s = power_sum(&curves, 2, c(0.25, 0.0), 0.1).unwrap();
        assert!((s - c(0.5, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn near_boundary_rejected() {
        let curves = vec![fixtures::graph_power(2, 128)];
        assert!(matches!(
            power_sum(&curves, 1, c(0.99, 0.0), 0.1),
            Err(Error::NearBoundary { .. })
        ));
    }

    fn table_for(curves: &[ParamCurve], kmax: usize) -> MomentTable {
        let planar: Vec<_> = curves.iter().map(|c| project_z1(c).unwrap()).collect();
        let cutoff = default_cutoff(curves);
        let map = classify_components(&planar, GridSpec::square(2.0, 64), cutoff).unwrap();
        build_moment_table(curves, &map, kmax).unwrap()
    }

    #[test]
    fn table_graph_square_moments() {
        let curves = vec![fixtures::graph_power(2, 256)];
        let table = table_for(&curves, 3);
        assert!(table.s0_residual < 1e-6);
        for idx in 0..table.map.grid.len() {
            if !table.valid[idx] {
                continue;
            }
            let zeta = table.map.grid.point(idx);
            let row = table.row(idx);
            if table.map.label[idx] == 0 {
                for k in 1..=3 {
                    assert!(row[k].norm() < 1e-9, "exterior S_{k} = {}", row[k].norm());
                }
            } else {
                assert!((row[1] - zeta * zeta).norm() < 1e-9);
                assert!((row[2] - (zeta * zeta).powu(2)).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn table_empty_slice() {
        let map = classify_components(&[], GridSpec::square(2.0, 16), 0.1).unwrap();
        let table = build_moment_table(&[], &map, 2).unwrap();
        // no curve, empty table
        assert!(table.valid.iter().all(|&v| !v));
        assert!(moment_residual(&table) == 0.0);
    }

    #[test]
    fn table_two_sheet_structure() {
        let curves = vec![fixtures::two_sheet_sqrt(256)];
        let table = table_for(&curves, 4);
        for idx in 0..table.map.grid.len() {
            if !table.valid[idx] || table.map.label[idx] == 0 {
                continue;
            }
            let row = table.row(idx);
            // S_0 = 2 inside, odd sums vanish
            assert!((row[0] - c(2.0, 0.0)).norm() < 1e-6);
            assert!(row[1].norm() < 1e-8);
            assert!(row[3].norm() < 1e-8);
        }
    }

    #[test]
    fn residual_spectral_on_graph() {
        let curves = vec![fixtures::graph_power(2, 256)];
        let table = table_for(&curves, 4);
        assert!(moment_residual(&table) < 1e-10);
    }

    #[test]
    fn residual_zero_on_flat_disk() {
        let curves = vec![fixtures::flat_circle(256)];
        let table = table_for(&curves, 3);
        assert!(moment_residual(&table) < 1e-15);
    }

    #[test]
    fn poincare_form_sign() {
        assert_eq!(poincare_form(&[0.7], &[0.2]).unwrap(), vec![0.5]);
        assert_eq!(poincare_form(&[-0.1], &[0.2]).unwrap(), vec![-0.5]);
        assert!(matches!(
            poincare_form(&[0.2], &[0.2]),
            Err(Error::SingularPoint)
        ));
    }

    #[test]
    fn orientation_negates_sums() {
        let curve = fixtures::graph_power(2, 128);
        let rev = curve.reversed_orientation();
        let a = power_sum(&[curve], 1, c(0.4, 0.1), 0.1).unwrap();
        let b = power_sum(&[rev], 1, c(0.4, 0.1), 0.1).unwrap();
        assert!((a + b).norm() < 1e-13);
    }

    #[test]
    fn sums_additive_over_components() {
        let a = fixtures::graph_power(2, 128);
        let b = {
            // same graph shifted: z1 = 3 + e^{i th}, z2 = z1^2 evaluated on it
            let spec = crate::geometry::CurveSpec {
                z1: crate::geometry::ComponentSpec::new(vec![
                    (0, c(3.0, 0.0)),
                    (1, c(1.0, 0.0)),
                ]),
                z2: crate::geometry::ComponentSpec::new(vec![
                    (0, c(9.0, 0.0)),
                    (1, c(6.0, 0.0)),
                    (2, c(1.0, 0.0)),
                ]),
                cover: 1,
                orientation: 1,
            };
            crate::geometry::sample_curve(&spec, 128).unwrap()
        };
        let zeta = c(-1.2, 0.4);
        let s_both = power_sum(&[a.clone(), b.clone()], 2, zeta, 0.1).unwrap();
        let s_a = power_sum(&[a], 2, zeta, 0.1).unwrap();
        let s_b = power_sum(&[b], 2, zeta, 0.1).unwrap();
        assert!((s_both - s_a - s_b).norm() < 1e-12);
    }

    #[test]
    fn family_direct_torus_vanishes() {
        let fam = fixtures::torus_family(9, 128);
        let h = HolomorphicTestForm::monomial(0, 1, 1); // z2 dz1
        for (&t, &tv) in fam.t_grid.iter().zip(&fam.transverse) {
            if !tv {
                continue;
            }
            let v = family_moment_direct(&fam, &h, t).unwrap();
            assert!(v.norm() < 1e-10, "I(t={t}) = {}", v.norm());
        }
    }

    #[test]
    fn family_direct_exact_form() {
        let fam = fixtures::torus_family(5, 64);
        let h = HolomorphicTestForm::monomial(0, 0, 1); // dz1
        let v = family_moment_direct(&fam, &h, fam.t_grid[2]).unwrap();
        assert!(v.norm() < 1e-13);
    }

    #[test]
    fn family_poincare_matches_direct() {
        let fam = fixtures::torus_family(41, 128);
        for h in [
            HolomorphicTestForm::monomial(0, 1, 1),
            HolomorphicTestForm::monomial(1, 1, 1),
            HolomorphicTestForm::monomial(0, 2, 2),
        ] {
            for &t in &[fam.t_grid[20], fam.t_grid[9]] {
                let d = family_moment_direct(&fam, &h, t).unwrap();
                let p = family_moment_poincare(&fam, &h, t).unwrap();
                assert!((d - p).norm() < 1e-6, "direct {} poincare {}", d, p);
            }
        }
    }

    #[test]
    fn family_poincare_closed_form_zero() {
        let fam = fixtures::torus_family(9, 64);
        let h = HolomorphicTestForm::monomial(2, 0, 1); // z1^2 dz1, closed
        assert!(h.is_closed());
        let v = family_moment_poincare(&fam, &h, 0.11).unwrap();
        assert!(v.norm() == 0.0);
    }

    #[test]
    fn family_out_of_range() {
        let fam = fixtures::torus_family(9, 64);
        let h = HolomorphicTestForm::monomial(0, 1, 1);
        assert!(matches!(
            family_moment_poincare(&fam, &h, 3.0),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn family_beyond_support_is_zero() {
        // pad the torus family with empty rim slices; beyond the support the
        // integral agrees with the (empty) direct value 0
        let fam = fixtures::torus_family_padded(21, 128, 1.3);
        let h = HolomorphicTestForm::monomial(0, 1, 1);
        let t = 1.15;
        let p = family_moment_poincare(&fam, &h, t).unwrap();
        assert!(p.norm() < 1e-6);
        let d = family_moment_direct(&fam, &h, fam.t_grid[fam.t_grid.len() - 1]).unwrap();
        assert!(d.norm() == 0.0);
    }
}
