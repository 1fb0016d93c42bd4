//! Area quadrature over one component of the projection complement.
//!
//! The preferred parametrization maps a (s, theta) rectangle onto the region
//! through its boundary curves: a star map from an interior center for
//! simply-connected components, a linear blend for annular ones. The radial
//! variable is substituted r = s^2 so that half-integer branch behaviour at
//! the center stays smooth. A cartesian cell sum over the labeled grid is the
//! fallback for shapes the maps do not cover.

use crate::error::{Error, Result};
use crate::geometry::{ComponentMap, ComponentSpec, PlanarCurve, BOUNDARY};
use crate::spectral::gauss_legendre_on;
use num_complex::Complex64;

/// How a component's boundary curves surround it.
#[derive(Debug, Clone)]
pub enum RegionQuad {
    /// zeta = c + s^2 (gamma(theta) - c), one boundary loop.
    Star {
        center: Complex64,
        curve: usize,
        /// parametrization restricted to one pass when the projected curve
        /// repeats over the cover
        reduce_cover: bool,
    },
    /// zeta = (1-s^2) inner(theta) + s^2 outer(theta).
    Ring {
        outer: usize,
        inner: usize,
        reverse_inner: bool,
    },
    /// Midpoint sums over the labeled grid cells.
    Cells,
}

pub struct RegionRule {
    /// Quadrature nodes in the zeta-plane with positive area weights.
    pub nodes: Vec<Complex64>,
    pub weights: Vec<f64>,
    /// True when the rule is boundary-fitted (spectral-grade), false for the
    /// cartesian fallback.
    pub fitted: bool,
}

/// Evaluate a projected curve spec at an arbitrary angle.
fn spec_point(spec: &ComponentSpec, cover: u32, theta: f64) -> Complex64 {
    spec.eval(theta, cover)
}

fn spec_deriv(spec: &ComponentSpec, cover: u32, theta: f64) -> Complex64 {
    spec.eval_deriv(theta, cover)
}

fn winding_of_point(curve: &PlanarCurve, zeta: Complex64) -> f64 {
    let n = curve.len() as f64;
    let w = curve.theta_period / n * curve.orientation as f64;
    let sum: Complex64 = curve
        .z
        .iter()
        .zip(&curve.dz)
        .map(|(&z, &dz)| dz / (z - zeta))
        .sum();
    (sum * w / Complex64::new(0.0, 2.0 * std::f64::consts::PI)).re
}

/// Signed plane area enclosed by the projected curve.
fn loop_area(curve: &PlanarCurve) -> f64 {
    let n = curve.len() as f64;
    let w = curve.theta_period / n * curve.orientation as f64;
    let sum: f64 = curve
        .z
        .iter()
        .zip(&curve.dz)
        .map(|(&z, &dz)| (z.conj() * dz).im)
        .sum();
    0.5 * sum * w
}

/// Choose a region parametrization for the component and check it against the
/// labeled grid.
pub fn plan_region(map: &ComponentMap, comp: i32, curves: &[PlanarCurve]) -> RegionQuad {
    plan_region_with_center(map, comp, curves, None)
}

/// `center_hint` places the star center (branch points belong there: the
/// radial substitution is only smooth across a branch sitting at the center).
pub fn plan_region_with_center(
    map: &ComponentMap,
    comp: i32,
    curves: &[PlanarCurve],
    center_hint: Option<Complex64>,
) -> RegionQuad {
    // in-component anchor: the component point closest to its centroid (the
    // bare centroid of an annulus lands in the hole)
    let anchor = match map.centroid(comp) {
        Some(c) => {
            let pts = map.points_of(comp);
            pts.iter()
                .map(|&i| map.grid.point(i))
                .min_by(|a, b| {
                    (a - c).norm().partial_cmp(&(b - c).norm()).unwrap()
                })
                .unwrap_or(c)
        }
        None => return RegionQuad::Cells,
    };
    let center = center_hint
        .filter(|&h| {
            grid_index_of(map, h)
                .map(|idx| map.label[idx] == comp || map.label[idx] == BOUNDARY)
                .unwrap_or(false)
        })
        .unwrap_or(anchor);
    // Boundary curves of this component: those whose offset samples touch it.
    let mut adjacent = Vec::new();
    for (ci, c) in curves.iter().enumerate() {
        if c.is_empty() {
            continue;
        }
        if curve_touches_component(map, comp, c) {
            adjacent.push(ci);
        }
    }
    if adjacent.is_empty() {
        return RegionQuad::Cells;
    }
    // Outer candidates: nonzero winding around the component, largest area
    // first.
    let rep_zeta = center;
    let mut outer: Vec<usize> = adjacent
        .iter()
        .copied()
        .filter(|&ci| winding_of_point(&curves[ci], rep_zeta).round().abs() >= 0.5)
        .collect();
    outer.sort_by(|&a, &b| {
        loop_area(&curves[b])
            .abs()
            .partial_cmp(&loop_area(&curves[a]).abs())
            .unwrap()
    });
    let holes: Vec<usize> = adjacent
        .iter()
        .copied()
        .filter(|&ci| winding_of_point(&curves[ci], rep_zeta).round().abs() < 0.5)
        .collect();

    for &ci in &outer {
        if holes.is_empty() {
            let reduce_cover = match &curves[ci].source {
                Some(spec) => spec.is_cover_periodic(curves[ci].cover),
                None => false,
            };
            if curves[ci].cover > 1 && !reduce_cover {
                continue;
            }
            let quad = RegionQuad::Star {
                center,
                curve: ci,
                reduce_cover,
            };
            if validate_region(&quad, map, comp, curves) {
                return quad;
            }
        } else if holes.len() == 1 {
            for reverse_inner in [false, true] {
                let quad = RegionQuad::Ring {
                    outer: ci,
                    inner: holes[0],
                    reverse_inner,
                };
                if validate_region(&quad, map, comp, curves) {
                    return quad;
                }
            }
        }
    }
    RegionQuad::Cells
}

fn curve_touches_component(map: &ComponentMap, comp: i32, curve: &PlanarCurve) -> bool {
    let off = 1.8 * map.cutoff;
    let n = curve.len();
    let stride = (n / 16).max(1);
    for i in (0..n).step_by(stride) {
        let tangent = curve.dz[i];
        if tangent.norm() < 1e-14 {
            continue;
        }
        let normal = Complex64::new(0.0, 1.0) * tangent / tangent.norm();
        for side in [1.0, -1.0] {
            let p = curve.z[i] + normal * off * side;
            if let Some(idx) = grid_index_of(map, p) {
                if map.label[idx] == comp {
                    return true;
                }
            }
        }
    }
    false
}

fn grid_index_of(map: &ComponentMap, p: Complex64) -> Option<usize> {
    let g = &map.grid;
    let fi = (p.re - g.re_min) / g.dx();
    let fj = (p.im - g.im_min) / g.dy();
    if fi < 0.0 || fj < 0.0 {
        return None;
    }
    let i = fi.round() as usize;
    let j = fj.round() as usize;
    if i >= g.nx || j >= g.ny {
        return None;
    }
    Some(j * g.nx + i)
}

/// Sample the map on a coarse lattice; every sample must land in the
/// component or its label band and the area Jacobian must keep one sign.
fn validate_region(
    quad: &RegionQuad,
    map: &ComponentMap,
    comp: i32,
    curves: &[PlanarCurve],
) -> bool {
    let probe = build_rule(quad, curves, 8, 32);
    let probe = match probe {
        Ok(p) => p,
        Err(_) => return false,
    };
    if probe.weights.iter().any(|&w| w <= 0.0) {
        return false;
    }
    probe.nodes.iter().all(|&z| match grid_index_of(map, z) {
        Some(idx) => map.label[idx] == comp || map.label[idx] == BOUNDARY,
        None => false,
    })
}

/// Materialize the quadrature rule at the requested resolution.
pub fn build_rule(
    quad: &RegionQuad,
    curves: &[PlanarCurve],
    n_s: usize,
    n_theta: usize,
) -> Result<RegionRule> {
    match *quad {
        RegionQuad::Star {
            center,
            curve,
            reduce_cover,
        } => {
            let c = &curves[curve];
            let spec = c
                .source
                .as_ref()
                .ok_or_else(|| Error::InvalidSpec("star map needs a curve spec".into()))?;
            let period = if reduce_cover {
                c.theta_period / c.cover as f64
            } else {
                c.theta_period
            };
            let (s_nodes, s_w) = gauss_legendre_on(n_s, 0.0, 1.0);
            let dth = period / n_theta as f64;
            let mut nodes = Vec::with_capacity(n_s * n_theta);
            let mut weights = Vec::with_capacity(n_s * n_theta);
            let mut signed = 0.0;
            for j in 0..n_theta {
                let th = dth * j as f64;
                let rho = spec_point(spec, c.cover, th) - center;
                let dgam = spec_deriv(spec, c.cover, th);
                for (i, &s) in s_nodes.iter().enumerate() {
                    let r = s * s;
                    let zeta = center + rho * r;
                    // d(zeta)/ds = 2 s rho, d(zeta)/dtheta = r dgam
                    let jac = (2.0 * s * r) * (rho.conj() * dgam).im;
                    nodes.push(zeta);
                    weights.push(jac * s_w[i] * dth);
                    signed += jac * s_w[i] * dth;
                }
            }
            if signed < 0.0 {
                weights.iter_mut().for_each(|w| *w = -*w);
            }
            Ok(RegionRule {
                nodes,
                weights,
                fitted: true,
            })
        }
        RegionQuad::Ring {
            outer,
            inner,
            reverse_inner,
        } => {
            let co = &curves[outer];
            let ci = &curves[inner];
            let so = co
                .source
                .as_ref()
                .ok_or_else(|| Error::InvalidSpec("ring map needs curve specs".into()))?;
            let si = ci
                .source
                .as_ref()
                .ok_or_else(|| Error::InvalidSpec("ring map needs curve specs".into()))?;
            let period = co.theta_period;
            let (s_nodes, s_w) = gauss_legendre_on(n_s, 0.0, 1.0);
            let dth = period / n_theta as f64;
            let mut nodes = Vec::with_capacity(n_s * n_theta);
            let mut weights = Vec::with_capacity(n_s * n_theta);
            let mut signed = 0.0;
            let inner_period = ci.theta_period;
            for j in 0..n_theta {
                let th = dth * j as f64;
                let th_in = if reverse_inner {
                    inner_period - th * inner_period / period
                } else {
                    th * inner_period / period
                };
                let zo = spec_point(so, co.cover, th);
                let zi = spec_point(si, ci.cover, th_in);
                let dzo = spec_deriv(so, co.cover, th);
                let dzi = spec_deriv(si, ci.cover, th_in)
                    * (if reverse_inner { -1.0 } else { 1.0 })
                    * (inner_period / period);
                for (i, &s) in s_nodes.iter().enumerate() {
                    let v = s * s;
                    let zeta = zi + (zo - zi) * v;
                    let dz_ds = (zo - zi) * (2.0 * s);
                    let dz_dth = dzi + (dzo - dzi) * v;
                    let jac = (dz_ds.conj() * dz_dth).im;
                    nodes.push(zeta);
                    weights.push(jac * s_w[i] * dth);
                    signed += jac * s_w[i] * dth;
                }
            }
            if signed < 0.0 {
                weights.iter_mut().for_each(|w| *w = -*w);
            }
            Ok(RegionRule {
                nodes,
                weights,
                fitted: true,
            })
        }
        RegionQuad::Cells => Err(Error::InvalidSpec(
            "cell rule is built against a component map".into(),
        )),
    }
}

/// Midpoint rule over the cells of a labeled component, refined `refine`-fold.
pub fn build_cell_rule(map: &ComponentMap, comp: i32, refine: usize) -> RegionRule {
    let g = &map.grid;
    let dx = g.dx();
    let dy = g.dy();
    let sub = refine.max(1);
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for idx in 0..g.len() {
        if map.label[idx] != comp {
            continue;
        }
        let p = g.point(idx);
        for a in 0..sub {
            for b in 0..sub {
                let q = Complex64::new(
                    p.re - 0.5 * dx + dx * (a as f64 + 0.5) / sub as f64,
                    p.im - 0.5 * dy + dy * (b as f64 + 0.5) / sub as f64,
                );
                nodes.push(q);
                weights.push(dx * dy / (sub * sub) as f64);
            }
        }
    }
    RegionRule {
        nodes,
        weights,
        fitted: false,
    }
}
