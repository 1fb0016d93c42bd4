//! Slice reconstruction: monic fiber polynomials from power sums by Newton's
//! identities, all-roots extraction, the discriminant locus, Stokes boundary
//! validation and the mass estimate.

use crate::error::{Error, Result};
use crate::geometry::{ComponentMap, ParamCurve, PlanarCurve};
use crate::moments::{moment_residual, CauchyEvaluator, MomentTable};
use crate::poly::{eval_monic, eval_monic_deriv, Poly4};
use crate::region::{
    build_cell_rule, build_rule, plan_region_with_center, RegionQuad, RegionRule,
};
use num_complex::Complex64;
use rayon::prelude::*;

/// Newton's identities: elementary symmetric coefficients (e_1..e_d) of the
/// monic polynomial with the given power sums. When more than d sums are
/// supplied, the surplus ones are recomputed from the returned polynomial's
/// roots and must agree within `tol` (relative to the root scale); data that
/// fails this needs poles and is refused.
pub fn newton_to_monic(power_sums: &[Complex64], d: usize, tol: f64) -> Result<Vec<Complex64>> {
    if d == 0 || power_sums.len() < d {
        return Err(Error::InvalidSpec(format!(
            "need at least d = {d} power sums, got {}",
            power_sums.len()
        )));
    }
    let mut e = vec![Complex64::new(1.0, 0.0)];
    for k in 1..=d {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut sign = 1.0;
        for i in 1..=k {
            acc += sign * e[k - i] * power_sums[i - 1];
            sign = -sign;
        }
        e.push(acc / k as f64);
    }
    let e_out: Vec<Complex64> = e[1..].to_vec();
    if power_sums.len() > d {
        let roots = fiber_roots(&e_out)?;
        let scale = roots.iter().map(|r| r.norm()).fold(1.0, f64::max);
        let mut pw: Vec<Complex64> = roots.iter().map(|&r| r.powu(d as u32)).collect();
        for (k, &target) in power_sums.iter().enumerate().skip(d) {
            for (p, &r) in pw.iter_mut().zip(&roots) {
                *p *= r;
            }
            let _ = k;
            let got: Complex64 = pw.iter().sum();
            let bound = tol * scale.powi((k + 1) as i32).max(1.0);
            if (got - target).norm() > bound {
                return Err(Error::NonPositiveChain {
                    component: -1,
                    detail: format!(
                        "surplus power sum p_{} mismatch {:.3e} > {:.3e}",
                        k + 1,
                        (got - target).norm(),
                        bound
                    ),
                });
            }
        }
    }
    Ok(e_out)
}

/// Ascending low coefficients of w^d - e1 w^{d-1} + ... + (-1)^d e_d.
fn monic_low_coeffs(e: &[Complex64]) -> Vec<Complex64> {
    let d = e.len();
    let mut low = vec![Complex64::new(0.0, 0.0); d];
    let mut sign = -1.0;
    for k in 1..=d {
        low[d - k] = sign * e[k - 1];
        sign = -sign;
    }
    low
}

/// All d roots (with multiplicity) of the monic polynomial described by its
/// elementary symmetric coefficients, by Aberth-Ehrlich iteration with a
/// backward-error acceptance test.
pub fn fiber_roots(e: &[Complex64]) -> Result<Vec<Complex64>> {
    let d = e.len();
    if d > 12 {
        return Err(Error::InvalidSpec(format!("degree {d} beyond the supported 12")));
    }
    let low = monic_low_coeffs(e);
    all_roots_monic(&low)
}

fn all_roots_monic(low: &[Complex64]) -> Result<Vec<Complex64>> {
    let d = low.len();
    match d {
        0 => return Ok(vec![]),
        1 => return Ok(vec![-low[0]]),
        2 => return Ok(quadratic_roots(low[0], low[1])),
        _ => {}
    }
    // deflate exact zero roots
    let nz = low.iter().take_while(|c| c.norm_sqr() == 0.0).count();
    if nz > 0 {
        let mut roots = vec![Complex64::new(0.0, 0.0); nz];
        roots.extend(all_roots_monic(&low[nz..])?);
        return Ok(roots);
    }

    let radius = 1.0 + low.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let center = -low[d - 1] / d as f64;
    let mut w: Vec<Complex64> = (0..d)
        .map(|i| {
            let ang = 2.0 * std::f64::consts::PI * (i as f64 + 0.37) / d as f64;
            center + Complex64::new(0.0, ang).exp() * (0.65 * radius)
        })
        .collect();
    let mut converged = false;
    for _ in 0..400 {
        let mut max_step = 0.0f64;
        for i in 0..d {
            let p = eval_monic(low, w[i]);
            let dp = eval_monic_deriv(low, w[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = if dp.norm() > 1e-290 { p / dp } else { p };
            let mut repulse = Complex64::new(0.0, 0.0);
            for j in 0..d {
                if j != i {
                    let diff = w[i] - w[j];
                    if diff.norm() > 1e-290 {
                        repulse += Complex64::new(1.0, 0.0) / diff;
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - ratio * repulse;
            let step = if denom.norm() > 1e-12 { ratio / denom } else { ratio };
            w[i] -= step;
            max_step = max_step.max(step.norm() / (1.0 + w[i].norm()));
        }
        if max_step < 1e-15 {
            converged = true;
            break;
        }
    }
    let backward = w
        .iter()
        .map(|&wi| eval_monic(low, wi).norm() / (1.0 + wi.norm()).powi(d as i32))
        .fold(0.0, f64::max);
    if backward > 1e-10 {
        let _ = converged;
        return Err(Error::RootFailure {
            degree: d,
            backward,
        });
    }
    Ok(w)
}

fn quadratic_roots(c0: Complex64, c1: Complex64) -> Vec<Complex64> {
    // w^2 + c1 w + c0, stable form
    let disc = (c1 * c1 - 4.0 * c0).sqrt();
    let q = if (c1 + disc).norm() >= (c1 - disc).norm() {
        -(c1 + disc) * 0.5
    } else {
        -(c1 - disc) * 0.5
    };
    if q.norm() == 0.0 {
        return vec![Complex64::new(0.0, 0.0); 2];
    }
    vec![q, c0 / q]
}

/// |discriminant| of the monic polynomial, through the Sylvester resultant of
/// p and p'.
pub fn discriminant_abs(e: &[Complex64]) -> f64 {
    let d = e.len();
    if d <= 1 {
        return f64::INFINITY;
    }
    let low = monic_low_coeffs(e);
    // p descending: [1, low[d-1], ..., low[0]]
    let mut p = vec![Complex64::new(1.0, 0.0)];
    p.extend(low.iter().rev());
    // p' descending
    let mut dp = Vec::with_capacity(d);
    for (i, &c) in p.iter().take(d).enumerate() {
        dp.push(c * (d - i) as f64);
    }
    let n = 2 * d - 1;
    let mut m = vec![Complex64::new(0.0, 0.0); n * n];
    for r in 0..d - 1 {
        for (k, &c) in p.iter().enumerate() {
            m[r * n + r + k] = c;
        }
    }
    for r in 0..d {
        for (k, &c) in dp.iter().enumerate() {
            m[(d - 1 + r) * n + r + k] = c;
        }
    }
    // LU with partial pivoting, modulus of the determinant
    let mut det = 1.0f64;
    for col in 0..n {
        let (piv, pv) = (col..n)
            .map(|r| (r, m[r * n + col].norm()))
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap();
        if pv == 0.0 {
            return 0.0;
        }
        if piv != col {
            for k in 0..n {
                m.swap(col * n + k, piv * n + k);
            }
        }
        let diag = m[col * n + col];
        det *= diag.norm();
        for r in col + 1..n {
            let f = m[r * n + col] / diag;
            if f.norm_sqr() == 0.0 {
                continue;
            }
            for k in col..n {
                let v = m[col * n + k];
                m[r * n + k] -= f * v;
            }
        }
    }
    det
}

/// Root-magnitude scale of a monic polynomial from its coefficients.
pub fn coefficient_scale(e: &[Complex64]) -> f64 {
    e.iter()
        .enumerate()
        .map(|(k, c)| c.norm().powf(1.0 / (k + 1) as f64))
        .fold(1.0, f64::max)
}

/// A root field over one component: the fiber sheets and their derivatives at
/// arbitrary interior points.
pub trait RootField: Sync {
    fn degree(&self) -> usize;
    fn roots_and_derivs(&self, zeta: Complex64) -> Result<Vec<(Complex64, Complex64)>>;
}

/// The genuine field: power sums -> Newton -> roots, with sheet derivatives
/// from implicit differentiation of the fiber polynomial.
pub struct MomentRootField<'a> {
    pub eval: &'a CauchyEvaluator,
    pub winding: i32,
}

impl<'a> RootField for MomentRootField<'a> {
    fn degree(&self) -> usize {
        self.winding.max(0) as usize
    }

    fn roots_and_derivs(&self, zeta: Complex64) -> Result<Vec<(Complex64, Complex64)>> {
        let d = self.degree();
        let (s, sd) = self.eval.sums_and_derivs(zeta, d, self.winding);
        let e = newton_to_monic(&s[1..=d], d, 1e-6)?;
        // e_k' from the differentiated recurrence
        let mut ed = vec![Complex64::new(0.0, 0.0)];
        let mut efull = vec![Complex64::new(1.0, 0.0)];
        efull.extend(e.iter().copied());
        for k in 1..=d {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut sign = 1.0;
            for i in 1..=k {
                acc += sign * (ed[k - i] * s[i] + efull[k - i] * sd[i]);
                sign = -sign;
            }
            ed.push(acc / k as f64);
        }
        let roots = fiber_roots(&e)?;
        let low = monic_low_coeffs(&e);
        let out = roots
            .iter()
            .map(|&w| {
                // dp/dzeta = sum_k (-1)^k e_k' w^{d-k}
                let mut dpz = Complex64::new(0.0, 0.0);
                let mut sign = -1.0;
                for k in 1..=d {
                    dpz += sign * ed[k] * w.powu((d - k) as u32);
                    sign = -sign;
                }
                let dpw = eval_monic_deriv(&low, w);
                let wprime = if dpw.norm() > 1e-250 {
                    -dpz / dpw
                } else {
                    Complex64::new(0.0, 0.0)
                };
                (w, wprime)
            })
            .collect();
        Ok(out)
    }
}

/// Decorator that offsets every sheet by a constant: the constructed-failure
/// input for the Stokes check.
pub struct ShiftedRootField<F: RootField> {
    pub inner: F,
    pub offset: Complex64,
}

impl<F: RootField> RootField for ShiftedRootField<F> {
    fn degree(&self) -> usize {
        self.inner.degree()
    }

    fn roots_and_derivs(&self, zeta: Complex64) -> Result<Vec<(Complex64, Complex64)>> {
        Ok(self
            .inner
            .roots_and_derivs(zeta)?
            .into_iter()
            .map(|(w, wp)| (w + self.offset, wp))
            .collect())
    }
}

/// A smooth 1-form with real polynomial coefficients in (x1, y1, x2, y2).
#[derive(Debug, Clone, Default)]
pub struct RealOneForm {
    /// phi = sum_m comps[m] dx_m.
    pub comps: [Poly4; 4],
}

impl RealOneForm {
    pub fn coefficient(axis: usize, p: Poly4) -> RealOneForm {
        let mut f = RealOneForm::default();
        f.comps[axis] = p;
        f
    }

    /// Exterior derivative coefficients c_{lm} = d_l comps_m - d_m comps_l
    /// for l < m.
    pub fn curl(&self) -> Vec<(usize, usize, Poly4)> {
        let mut out = Vec::new();
        for l in 0..4 {
            for m in l + 1..4 {
                let mut p = self.comps[m].partial(l);
                let q = self.comps[l].partial(m);
                for t in q.terms.iter() {
                    p.terms.push(crate::poly::RealTerm {
                        exp: t.exp,
                        coeff: -t.coeff,
                    });
                }
                if !p.terms.is_empty() {
                    out.push((l, m, p));
                }
            }
        }
        out
    }
}

/// The default Stokes battery: a base-area anchor plus shift- and
/// slope-sensitive fiber forms.
pub fn default_stokes_forms() -> Vec<RealOneForm> {
    vec![
        RealOneForm::coefficient(1, Poly4::monomial([1, 0, 0, 0], 1.0)), // x1 dy1
        RealOneForm::coefficient(3, Poly4::monomial([0, 0, 1, 0], 1.0)), // x2 dy2
        RealOneForm::coefficient(3, Poly4::monomial([0, 0, 2, 0], 1.0)), // x2^2 dy2
        RealOneForm::coefficient(1, Poly4::monomial([0, 0, 1, 0], 1.0)), // x2 dy1
        RealOneForm::coefficient(0, Poly4::monomial([0, 0, 0, 1], 1.0)), // y2 dx1
        RealOneForm::coefficient(3, Poly4::monomial([1, 0, 1, 0], 1.0)), // x1 x2 dy2
    ]
}

/// Contour integral of a real 1-form over the slice curves.
pub fn boundary_integral(curves: &[ParamCurve], form: &RealOneForm) -> f64 {
    let mut total = 0.0;
    for c in curves {
        let w = c.theta_period / c.len() as f64 * c.orientation as f64;
        let mut acc = 0.0;
        for j in 0..c.len() {
            let x = [c.z1[j].re, c.z1[j].im, c.z2[j].re, c.z2[j].im];
            let dx = [c.dz1[j].re, c.dz1[j].im, c.dz2[j].re, c.dz2[j].im];
            for m in 0..4 {
                if !form.comps[m].terms.is_empty() {
                    acc += form.comps[m].eval(x) * dx[m];
                }
            }
        }
        total += acc * w;
    }
    total
}

/// One reconstructed component: geometry plus its root field inputs.
pub struct ComponentField<'a> {
    pub component: i32,
    pub region: RegionQuad,
    pub field: Box<dyn RootField + 'a>,
}

fn region_rule(
    entry: &ComponentField,
    map: &ComponentMap,
    planar: &[PlanarCurve],
    n_s: usize,
    n_theta: usize,
) -> Result<RegionRule> {
    match entry.region {
        RegionQuad::Cells => Ok(build_cell_rule(map, entry.component, 2)),
        ref q => build_rule(q, planar, n_s, n_theta),
    }
}

/// Surface integral of d(phi) over the reconstructed chain for each form.
fn chain_exterior_integrals(
    fields: &[ComponentField],
    map: &ComponentMap,
    planar: &[PlanarCurve],
    forms: &[RealOneForm],
    n_s: usize,
    n_theta: usize,
) -> Result<Vec<f64>> {
    let curls: Vec<Vec<(usize, usize, Poly4)>> = forms.iter().map(|f| f.curl()).collect();
    let mut totals = vec![0.0f64; forms.len()];
    for entry in fields {
        let rule = region_rule(entry, map, planar, n_s, n_theta)?;
        let partials: Vec<Result<Vec<f64>>> = rule
            .nodes
            .par_iter()
            .zip(rule.weights.par_iter())
            .map(|(&zeta, &w)| {
                let sheets = entry.field.roots_and_derivs(zeta)?;
                let mut vals = vec![0.0f64; forms.len()];
                for &(ws, wp) in &sheets {
                    let x = [zeta.re, zeta.im, ws.re, ws.im];
                    // holomorphic sheet: d/dxi -> (1, 0, Re w', Im w'),
                    // d/deta -> (0, 1, -Im w', Re w')
                    let vxi = [1.0, 0.0, wp.re, wp.im];
                    let veta = [0.0, 1.0, -wp.im, wp.re];
                    for (fi, curl) in curls.iter().enumerate() {
                        let mut pull = 0.0;
                        for (l, m, p) in curl {
                            pull += p.eval(x) * (vxi[*l] * veta[*m] - vxi[*m] * veta[*l]);
                        }
                        vals[fi] += pull * w;
                    }
                }
                Ok(vals)
            })
            .collect();
        for part in partials {
            let part = part?;
            for (t, v) in totals.iter_mut().zip(part) {
                *t += v;
            }
        }
    }
    Ok(totals)
}

#[derive(Debug, Clone, Copy)]
pub struct StokesReport {
    pub residual: f64,
    pub sign: i8,
    /// Largest |boundary integral| seen; a tiny value means the sign is not
    /// actually discriminated by the battery.
    pub sign_strength: f64,
}

/// Compare the surface integrals of d(phi) with the boundary integrals of phi
/// under the best global sign.
pub fn validate_boundary(
    curves: &[ParamCurve],
    map: &ComponentMap,
    planar: &[PlanarCurve],
    fields: &[ComponentField],
    forms: &[RealOneForm],
    n_s: usize,
    n_theta: usize,
    tol: f64,
) -> Result<StokesReport> {
    let surface = chain_exterior_integrals(fields, map, planar, forms, n_s, n_theta)?;
    let boundary: Vec<f64> = forms.iter().map(|f| boundary_integral(curves, f)).collect();
    let resid = |sign: f64| -> f64 {
        surface
            .iter()
            .zip(&boundary)
            .map(|(s, b)| (s - sign * b).abs())
            .fold(0.0, f64::max)
    };
    let (rp, rm) = (resid(1.0), resid(-1.0));
    let (residual, sign) = if rp <= rm { (rp, 1) } else { (rm, -1) };
    let sign_strength = boundary.iter().map(|b| b.abs()).fold(0.0, f64::max);
    if residual > tol {
        return Err(Error::BoundaryMismatch { residual, tol });
    }
    Ok(StokesReport {
        residual,
        sign,
        sign_strength,
    })
}

/// Graph area of the chain: sum over sheets of the (1 + |dw/dzeta|^2) element.
pub fn mass_estimate(
    fields: &[ComponentField],
    map: &ComponentMap,
    planar: &[PlanarCurve],
    n_s: usize,
    n_theta: usize,
) -> Result<f64> {
    let mut total = 0.0;
    for entry in fields {
        let rule = region_rule(entry, map, planar, n_s, n_theta)?;
        let parts: Vec<Result<f64>> = rule
            .nodes
            .par_iter()
            .zip(rule.weights.par_iter())
            .map(|(&zeta, &w)| {
                let sheets = entry.field.roots_and_derivs(zeta)?;
                Ok(sheets
                    .iter()
                    .map(|&(_, wp)| 1.0 + wp.norm_sqr())
                    .sum::<f64>()
                    * w)
            })
            .collect();
        for p in parts {
            total += p?;
        }
    }
    Ok(total)
}

/// Monic fiber data of one bounded component.
#[derive(Debug, Clone)]
pub struct FiberPolynomial {
    pub component: i32,
    pub degree: usize,
    /// Grid indices carrying fiber data, ascending.
    pub points: Vec<usize>,
    /// e_1..e_d per point, row-major.
    pub coeffs: Vec<Complex64>,
    /// Sheet values per point, continuity-ordered where matching succeeded.
    pub roots: Vec<Complex64>,
    pub disc_abs: Vec<f64>,
    /// Points where nearest-neighbor matching exceeded its displacement cap.
    pub near_singular: Vec<bool>,
}

impl FiberPolynomial {
    pub fn coeff_row(&self, i: usize) -> &[Complex64] {
        &self.coeffs[i * self.degree..(i + 1) * self.degree]
    }

    pub fn root_row(&self, i: usize) -> &[Complex64] {
        &self.roots[i * self.degree..(i + 1) * self.degree]
    }
}

/// The reconstructed holomorphic 1-chain of one slice.
#[derive(Debug, Clone)]
pub struct ChainSlice {
    pub t: f64,
    pub fibers: Vec<FiberPolynomial>,
    pub stokes_residual: f64,
    pub sign: i8,
    pub sign_strength: f64,
    pub mass: f64,
    pub mass_bound: f64,
}

impl ChainSlice {
    pub fn empty(t: f64) -> ChainSlice {
        ChainSlice {
            t,
            fibers: Vec::new(),
            stokes_residual: 0.0,
            sign: 1,
            sign_strength: 0.0,
            mass: 0.0,
            mass_bound: 0.0,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.fibers.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct ReconstructConfig {
    pub moment_tol: f64,
    pub newton_tol: f64,
    pub stokes_tol: f64,
    pub disc_tol_rel: f64,
    pub mass_slack: f64,
    pub region_n_s: usize,
    pub region_n_theta: usize,
    pub match_cap_steps: f64,
}

impl Default for ReconstructConfig {
    fn default() -> Self {
        ReconstructConfig {
            moment_tol: 1e-6,
            newton_tol: 1e-6,
            stokes_tol: 1e-6,
            disc_tol_rel: 1e-8,
            mass_slack: 0.1,
            region_n_s: 48,
            region_n_theta: 256,
            match_cap_steps: 4.0,
        }
    }
}

/// Reconstruct the filling chain of one slice from its moment table.
pub fn reconstruct_slice(
    t: f64,
    curves: &[ParamCurve],
    planar: &[PlanarCurve],
    table: &MomentTable,
    cfg: &ReconstructConfig,
) -> Result<ChainSlice> {
    if curves.is_empty() {
        return Ok(ChainSlice::empty(t));
    }
    let residual = moment_residual(table);
    if residual >= cfg.moment_tol {
        return Err(Error::MomentViolation {
            residual,
            tol: cfg.moment_tol,
        });
    }
    let map = &table.map;
    for comp in map.bounded_components() {
        let w = map.winding[comp as usize];
        if w < 0 {
            return Err(Error::NonPositiveChain {
                component: comp,
                detail: format!("winding {w} < 0; poles are unsupported"),
            });
        }
    }

    let eval = CauchyEvaluator::new(curves);
    let mut fibers = Vec::new();
    for comp in map.bounded_components() {
        let degree = map.winding[comp as usize] as usize;
        if degree == 0 {
            continue;
        }
        let points = map.points_of(comp);
        let rows: Vec<Result<(Vec<Complex64>, Vec<Complex64>, f64)>> = points
            .par_iter()
            .map(|&idx| {
                let row = table.row(idx);
                let e = newton_to_monic(&row[1..=table.kmax], degree, cfg.newton_tol)
                    .map_err(|err| match err {
                        Error::NonPositiveChain { detail, .. } => Error::NonPositiveChain {
                            component: comp,
                            detail,
                        },
                        other => other,
                    })?;
                let roots = fiber_roots(&e)?;
                let disc = discriminant_abs(&e);
                Ok((e, roots, disc))
            })
            .collect();
        let mut coeffs = Vec::with_capacity(points.len() * degree);
        let mut roots = Vec::with_capacity(points.len() * degree);
        let mut disc_abs = Vec::with_capacity(points.len());
        for r in rows {
            let (e, rt, disc) = r?;
            coeffs.extend(e);
            roots.extend(rt);
            disc_abs.push(disc);
        }
        let mut fiber = FiberPolynomial {
            component: comp,
            degree,
            points,
            coeffs,
            roots,
            disc_abs,
            near_singular: Vec::new(),
        };
        match_roots(&mut fiber, map, cfg.match_cap_steps);
        fibers.push(fiber);
    }

    let fields: Vec<ComponentField> = fibers
        .iter()
        .map(|f| {
            let field = MomentRootField {
                eval: &eval,
                winding: f.degree as i32,
            };
            let hint = branch_center(f, map, &field);
            ComponentField {
                component: f.component,
                region: plan_region_with_center(map, f.component, planar, hint),
                field: Box::new(field) as Box<dyn RootField>,
            }
        })
        .collect();

    let report = validate_boundary(
        curves,
        map,
        planar,
        &fields,
        &default_stokes_forms(),
        cfg.region_n_s,
        cfg.region_n_theta,
        cfg.stokes_tol,
    )?;
    let mass = mass_estimate(&fields, map, planar, cfg.region_n_s, cfg.region_n_theta)?;
    let radius = curves
        .iter()
        .map(|c| c.circumscribing_radius())
        .fold(0.0, f64::max);
    let length: f64 = curves.iter().map(|c| c.length()).sum();
    let mass_bound = 2.0 * radius * length * (1.0 + cfg.mass_slack);
    if mass > mass_bound {
        return Err(Error::MassBoundViolation {
            mass,
            bound: mass_bound,
        });
    }

    Ok(ChainSlice {
        t,
        fibers,
        stokes_residual: report.residual,
        sign: report.sign,
        sign_strength: report.sign_strength,
        mass,
        mass_bound,
    })
}

/// The discriminant as a holomorphic function of zeta, from the sheet values.
fn disc_at(field: &MomentRootField, zeta: Complex64) -> Result<Complex64> {
    let roots = field.roots_and_derivs(zeta)?;
    let mut acc = Complex64::new(1.0, 0.0);
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            let d = roots[i].0 - roots[j].0;
            acc *= d * d;
        }
    }
    Ok(acc)
}

/// Newton-polish the discriminant zero of a multi-sheet fiber, starting from
/// the grid point of smallest |disc|. The star map is only smooth through a
/// branch point when the branch sits at the map center.
fn branch_center(
    fiber: &FiberPolynomial,
    map: &ComponentMap,
    field: &MomentRootField,
) -> Option<Complex64> {
    if fiber.degree < 2 || fiber.points.is_empty() {
        return None;
    }
    let (imin, dmin) = fiber
        .disc_abs
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())?;
    // only bother when the discriminant actually dips near the grid floor
    let dmax = fiber.disc_abs.iter().cloned().fold(0.0, f64::max);
    if *dmin > 0.25 * dmax {
        return None;
    }
    let mut z = map.grid.point(fiber.points[imin]);
    let h = 1e-6 * (1.0 + z.norm());
    for _ in 0..40 {
        let d0 = disc_at(field, z).ok()?;
        if d0.norm() < 1e-26 {
            break;
        }
        let dp = (disc_at(field, z + Complex64::new(h, 0.0)).ok()? - d0) / h;
        if dp.norm() < 1e-300 {
            return None;
        }
        let step = d0 / dp;
        z -= step;
        if step.norm() < 1e-13 {
            break;
        }
    }
    z.is_finite().then_some(z)
}

/// Order sheet values continuously across grid neighbors by greedy nearest
/// matching; cells whose displacement exceeds the cap are flagged.
fn match_roots(fiber: &mut FiberPolynomial, map: &ComponentMap, cap_steps: f64) {
    let d = fiber.degree;
    let npts = fiber.points.len();
    fiber.near_singular = vec![false; npts];
    if d <= 1 || npts == 0 {
        return;
    }
    let cap = cap_steps * map.grid.step();
    let index_of: std::collections::HashMap<usize, usize> = fiber
        .points
        .iter()
        .enumerate()
        .map(|(i, &g)| (g, i))
        .collect();
    let mut done = vec![false; npts];
    let mut queue = std::collections::VecDeque::new();
    done[0] = true;
    queue.push_back(0usize);
    while let Some(i) = queue.pop_front() {
        let gidx = fiber.points[i];
        for nb in map.grid.neighbors4(gidx) {
            let Some(&j) = index_of.get(&nb) else { continue };
            if done[j] {
                continue;
            }
            let prev: Vec<Complex64> = fiber.root_row(i).to_vec();
            let row = &mut fiber.roots[j * d..(j + 1) * d];
            let mut used = vec![false; d];
            let mut ordered = vec![Complex64::new(0.0, 0.0); d];
            let mut worst = 0.0f64;
            for (slot, &p) in prev.iter().enumerate() {
                let mut best = usize::MAX;
                let mut best_d = f64::INFINITY;
                for (k, &r) in row.iter().enumerate() {
                    if !used[k] {
                        let dd = (r - p).norm();
                        if dd < best_d {
                            best_d = dd;
                            best = k;
                        }
                    }
                }
                used[best] = true;
                ordered[slot] = row[best];
                worst = worst.max(best_d);
            }
            row.copy_from_slice(&ordered);
            if worst > cap {
                fiber.near_singular[j] = true;
            }
            done[j] = true;
            queue.push_back(j);
        }
    }
}

/// Grid cells where the discriminant can vanish: the cell value must be small
/// against both the relative floor and a first-order bound from neighboring
/// cells (a fixed relative tolerance alone never fires on a coarse grid).
pub fn discriminant_locus(fiber: &FiberPolynomial, map: &ComponentMap, tol_rel: f64) -> Vec<usize> {
    if fiber.degree <= 1 {
        return Vec::new();
    }
    let index_of: std::collections::HashMap<usize, usize> = fiber
        .points
        .iter()
        .enumerate()
        .map(|(i, &g)| (g, i))
        .collect();
    let mut out = Vec::new();
    for (i, &gidx) in fiber.points.iter().enumerate() {
        let scale = coefficient_scale(fiber.coeff_row(i));
        let floor = tol_rel * scale.powi(2 * fiber.degree as i32 - 2);
        let here = fiber.disc_abs[i];
        let mut grad = 0.0f64;
        for nb in map.grid.neighbors4(gidx) {
            if let Some(&j) = index_of.get(&nb) {
                grad = grad.max((fiber.disc_abs[j] - here).abs());
            }
        }
        if here <= floor || here <= std::f64::consts::SQRT_2 * grad {
            out.push(gidx);
        }
    }
    out
}
