//! Curve and family data model: Fourier-Laurent sampling, projection to the
//! z1-plane, winding numbers, and labeling of the projection complement.

use crate::error::{Error, Result};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

pub const BOUNDARY: i32 = -1;

/// One complex coordinate of a curve spec: terms c * e^{i k theta / cover},
/// indexed by the integer harmonic k of the fundamental e^{i theta / cover}.
#[derive(Debug, Clone, Default)]
pub struct ComponentSpec {
    /// (harmonic degree, coefficient), sorted by degree.
    pub terms: Vec<(i32, Complex64)>,
}

impl ComponentSpec {
    pub fn new(mut terms: Vec<(i32, Complex64)>) -> Self {
        terms.sort_by_key(|t| t.0);
        ComponentSpec { terms }
    }

    pub fn eval(&self, theta: f64, cover: u32) -> Complex64 {
        let base = theta / cover as f64;
        self.terms
            .iter()
            .map(|&(k, c)| c * Complex64::new(0.0, k as f64 * base).exp())
            .sum()
    }

    pub fn eval_deriv(&self, theta: f64, cover: u32) -> Complex64 {
        let base = theta / cover as f64;
        let inv = 1.0 / cover as f64;
        self.terms
            .iter()
            .map(|&(k, c)| {
                c * Complex64::new(0.0, k as f64 * inv)
                    * Complex64::new(0.0, k as f64 * base).exp()
            })
            .sum()
    }

    pub fn is_finite(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.re.is_finite() && c.im.is_finite())
    }

    /// True when every harmonic is a multiple of the cover, i.e. the
    /// component repeats identically on each sheet pass.
    pub fn is_cover_periodic(&self, cover: u32) -> bool {
        self.terms.iter().all(|&(k, _)| k.rem_euclid(cover as i32) == 0)
    }

    pub fn translate(&self, c: Complex64) -> ComponentSpec {
        let mut terms = self.terms.clone();
        if let Some(t0) = terms.iter_mut().find(|t| t.0 == 0) {
            t0.1 += c;
        } else {
            terms.push((0, c));
        }
        ComponentSpec::new(terms)
    }

    pub fn scale(&self, s: Complex64) -> ComponentSpec {
        ComponentSpec::new(self.terms.iter().map(|&(k, c)| (k, c * s)).collect())
    }
}

/// Full Fourier-Laurent spec of a closed curve in C^2.
#[derive(Debug, Clone)]
pub struct CurveSpec {
    pub z1: ComponentSpec,
    pub z2: ComponentSpec,
    pub cover: u32,
    pub orientation: i8,
}

impl CurveSpec {
    pub fn theta_period(&self) -> f64 {
        2.0 * PI * self.cover as f64
    }
}

/// A sampled closed oriented real curve in C^2 (one slice component).
#[derive(Debug, Clone)]
pub struct ParamCurve {
    pub z1: Vec<Complex64>,
    pub z2: Vec<Complex64>,
    /// dz/dtheta at the nodes.
    pub dz1: Vec<Complex64>,
    pub dz2: Vec<Complex64>,
    pub params: Vec<f64>,
    pub theta_period: f64,
    pub cover: u32,
    pub closed: bool,
    pub orientation: i8,
    pub source: Option<CurveSpec>,
}

impl ParamCurve {
    pub fn len(&self) -> usize {
        self.z1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z1.is_empty()
    }

    /// Curve length by spectral quadrature of |dz/dtheta|.
    pub fn length(&self) -> f64 {
        let w = self.theta_period / self.len() as f64;
        self.dz1
            .iter()
            .zip(&self.dz2)
            .map(|(a, b)| (a.norm_sqr() + b.norm_sqr()).sqrt())
            .sum::<f64>()
            * w
    }

    /// Largest chord between consecutive projected nodes.
    pub fn max_projected_chord(&self) -> f64 {
        let n = self.len();
        (0..n)
            .map(|i| (self.z1[(i + 1) % n] - self.z1[i]).norm())
            .fold(0.0, f64::max)
    }

    pub fn projected_diameter(&self) -> f64 {
        let mut d = 0.0;
        // far-point pairs only matter to within a factor; a coarse double loop
        // over a stride keeps this O(n^2/64)
        let n = self.len();
        let stride = (n / 64).max(1);
        for i in (0..n).step_by(stride) {
            for j in (0..n).step_by(stride) {
                d = f64::max(d, (self.z1[i] - self.z1[j]).norm());
            }
        }
        d
    }

    /// Radius of the smallest origin-centered ball containing the curve.
    pub fn circumscribing_radius(&self) -> f64 {
        self.z1
            .iter()
            .zip(&self.z2)
            .map(|(a, b)| (a.norm_sqr() + b.norm_sqr()).sqrt())
            .fold(0.0, f64::max)
    }

    pub fn reversed_orientation(&self) -> ParamCurve {
        let mut c = self.clone();
        c.orientation = -c.orientation;
        if let Some(ref mut s) = c.source {
            s.orientation = -s.orientation;
        }
        c
    }
}

/// Sample a curve spec at N equispaced parameters.
pub fn sample_curve(spec: &CurveSpec, n: usize) -> Result<ParamCurve> {
    if n < 16 || !n.is_power_of_two() {
        return Err(Error::InvalidSpec(format!(
            "node count {n} must be >= 16 and a power of 2"
        )));
    }
    if !spec.z1.is_finite() || !spec.z2.is_finite() {
        return Err(Error::InvalidSpec("non-finite coefficient".into()));
    }
    if spec.cover == 0 {
        return Err(Error::InvalidSpec("cover must be >= 1".into()));
    }
    if spec.orientation != 1 && spec.orientation != -1 {
        return Err(Error::InvalidSpec("orientation must be +1 or -1".into()));
    }
    let period = spec.theta_period();
    let mut z1 = Vec::with_capacity(n);
    let mut z2 = Vec::with_capacity(n);
    let mut dz1 = Vec::with_capacity(n);
    let mut dz2 = Vec::with_capacity(n);
    let mut params = Vec::with_capacity(n);
    for j in 0..n {
        let th = period * j as f64 / n as f64;
        params.push(th);
        z1.push(spec.z1.eval(th, spec.cover));
        z2.push(spec.z2.eval(th, spec.cover));
        dz1.push(spec.z1.eval_deriv(th, spec.cover));
        dz2.push(spec.z2.eval_deriv(th, spec.cover));
    }
    Ok(ParamCurve {
        z1,
        z2,
        dz1,
        dz2,
        params,
        theta_period: period,
        cover: spec.cover,
        closed: true,
        orientation: spec.orientation,
        source: Some(spec.clone()),
    })
}

/// The z1-projection of a curve, keeping parametrization and orientation.
#[derive(Debug, Clone)]
pub struct PlanarCurve {
    pub z: Vec<Complex64>,
    pub dz: Vec<Complex64>,
    pub theta_period: f64,
    pub cover: u32,
    pub orientation: i8,
    pub source: Option<ComponentSpec>,
}

impl PlanarCurve {
    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    pub fn min_distance(&self, zeta: Complex64) -> f64 {
        self.z
            .iter()
            .map(|&p| (p - zeta).norm())
            .fold(f64::INFINITY, f64::min)
    }
}

pub fn project_z1(curve: &ParamCurve) -> Result<PlanarCurve> {
    if !curve.closed {
        return Err(Error::InvalidSpec("projection requires a closed curve".into()));
    }
    Ok(PlanarCurve {
        z: curve.z1.clone(),
        dz: curve.dz1.clone(),
        theta_period: curve.theta_period,
        cover: curve.cover,
        orientation: curve.orientation,
        source: curve.source.as_ref().map(|s| s.z1.clone()),
    })
}

pub fn min_distance_to_curves(curves: &[PlanarCurve], zeta: Complex64) -> f64 {
    curves
        .iter()
        .map(|c| c.min_distance(zeta))
        .fold(f64::INFINITY, f64::min)
}

/// Default evaluation-point cutoff: twice the maximum projected chord, with a
/// floor of 5% of the projected diameter per cover sheet, so that trapezoid
/// tails on the unbounded component stay below the documented residual
/// levels (a cover-k curve has 1/k of the node density per pass).
pub fn default_cutoff(curves: &[ParamCurve]) -> f64 {
    let chord = curves
        .iter()
        .map(|c| c.max_projected_chord())
        .fold(0.0, f64::max);
    let floor = curves
        .iter()
        .map(|c| 0.05 * c.projected_diameter() * c.cover as f64)
        .fold(0.0, f64::max);
    f64::max(2.0 * chord, floor)
}

/// Winding number with its rounding residual.
#[derive(Debug, Clone, Copy)]
pub struct Winding {
    pub value: i32,
    pub residual: f64,
}

/// Index of a point with respect to one planar curve by trapezoid quadrature
/// of the Cauchy kernel. The caller is responsible for the distance cutoff.
fn winding_raw(curve: &PlanarCurve, zeta: Complex64) -> Complex64 {
    let n = curve.len() as f64;
    let w = curve.theta_period / n;
    let sum: Complex64 = curve
        .z
        .iter()
        .zip(&curve.dz)
        .map(|(&z, &dz)| dz / (z - zeta))
        .sum();
    sum * w * curve.orientation as f64 / Complex64::new(0.0, 2.0 * PI)
}

pub fn winding_number(curves: &[PlanarCurve], zeta: Complex64, cutoff: f64) -> Result<Winding> {
    let dist = min_distance_to_curves(curves, zeta);
    if dist <= cutoff {
        return Err(Error::NearBoundary { zeta, dist, cutoff });
    }
    let raw: Complex64 = curves.iter().map(|c| winding_raw(c, zeta)).sum();
    let value = raw.re.round();
    let residual = (raw - Complex64::new(value, 0.0)).norm();
    if residual >= 1e-3 {
        return Err(Error::QuadratureFailure(format!(
            "winding residual {residual:.3e} at zeta = {zeta}"
        )));
    }
    Ok(Winding {
        value: value as i32,
        residual,
    })
}

/// Rectangular evaluation grid in the zeta-plane.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct GridSpec {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn square(half_width: f64, n: usize) -> GridSpec {
        GridSpec {
            re_min: -half_width,
            re_max: half_width,
            im_min: -half_width,
            im_max: half_width,
            nx: n,
            ny: n,
        }
    }

    pub fn dx(&self) -> f64 {
        (self.re_max - self.re_min) / (self.nx - 1) as f64
    }

    pub fn dy(&self) -> f64 {
        (self.im_max - self.im_min) / (self.ny - 1) as f64
    }

    pub fn step(&self) -> f64 {
        f64::max(self.dx(), self.dy())
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn point(&self, idx: usize) -> Complex64 {
        let i = idx % self.nx;
        let j = idx / self.nx;
        Complex64::new(
            self.re_min + self.dx() * i as f64,
            self.im_min + self.dy() * j as f64,
        )
    }

    pub fn neighbors4(&self, idx: usize) -> impl Iterator<Item = usize> {
        let nx = self.nx;
        let ny = self.ny;
        let i = idx % nx;
        let j = idx / nx;
        let mut out = Vec::with_capacity(4);
        if i > 0 {
            out.push(idx - 1);
        }
        if i + 1 < nx {
            out.push(idx + 1);
        }
        if j > 0 {
            out.push(idx - nx);
        }
        if j + 1 < ny {
            out.push(idx + nx);
        }
        out.into_iter()
    }

    pub fn is_edge(&self, idx: usize) -> bool {
        let i = idx % self.nx;
        let j = idx / self.nx;
        i == 0 || j == 0 || i == self.nx - 1 || j == self.ny - 1
    }
}

/// Labeling of the complement of the projected slice curves.
#[derive(Debug, Clone)]
pub struct ComponentMap {
    pub grid: GridSpec,
    /// Per grid point: BOUNDARY (-1) or a component id; 0 is unbounded.
    pub label: Vec<i32>,
    /// Winding value per component id.
    pub winding: Vec<i32>,
    pub cutoff: f64,
}

impl ComponentMap {
    pub fn component_count(&self) -> usize {
        self.winding.len()
    }

    pub fn points_of(&self, comp: i32) -> Vec<usize> {
        (0..self.grid.len())
            .filter(|&i| self.label[i] == comp)
            .collect()
    }

    /// Lowest-index point of a component, used as its representative.
    pub fn representative(&self, comp: i32) -> Option<usize> {
        (0..self.grid.len()).find(|&i| self.label[i] == comp)
    }

    pub fn bounded_components(&self) -> Vec<i32> {
        (1..self.winding.len() as i32).collect()
    }

    /// Mean of the component's grid points, a star-map candidate center.
    pub fn centroid(&self, comp: i32) -> Option<Complex64> {
        let pts = self.points_of(comp);
        if pts.is_empty() {
            return None;
        }
        let sum: Complex64 = pts.iter().map(|&i| self.grid.point(i)).sum();
        Some(sum / pts.len() as f64)
    }
}

/// Flood-fill classification of the grid complement of the projected curves,
/// with winding computed at one representative per component and verified at
/// three randomly chosen points.
pub fn classify_components(
    curves: &[PlanarCurve],
    grid: GridSpec,
    cutoff: f64,
) -> Result<ComponentMap> {
    let npts = grid.len();
    let mut label = vec![i32::MIN; npts];
    for idx in 0..npts {
        let p = grid.point(idx);
        if min_distance_to_curves(curves, p) <= cutoff {
            label[idx] = BOUNDARY;
        }
    }

    // Component 0 grows from the grid edge; the grid must have margin.
    let mut queue = std::collections::VecDeque::new();
    for idx in 0..npts {
        if grid.is_edge(idx) && label[idx] == i32::MIN {
            label[idx] = 0;
            queue.push_back(idx);
        }
    }
    if queue.is_empty() && !curves.iter().all(|c| c.is_empty()) {
        return Err(Error::ResolutionTooCoarse(
            "no free edge points; grid does not enclose the curves".into(),
        ));
    }
    let flood = |start_label: i32, queue: &mut std::collections::VecDeque<usize>,
                 label: &mut Vec<i32>| {
        while let Some(idx) = queue.pop_front() {
            for nb in grid.neighbors4(idx) {
                if label[nb] == i32::MIN {
                    label[nb] = start_label;
                    queue.push_back(nb);
                }
            }
        }
    };
    flood(0, &mut queue, &mut label);

    let mut next = 1;
    for idx in 0..npts {
        if label[idx] == i32::MIN {
            label[idx] = next;
            let mut q = std::collections::VecDeque::new();
            q.push_back(idx);
            flood(next, &mut q, &mut label);
            next += 1;
        }
    }

    // Winding per component: representative plus three random checks.
    let mut winding = Vec::with_capacity(next as usize);
    for comp in 0..next {
        let pts: Vec<usize> = (0..npts).filter(|&i| label[i] == comp).collect();
        if pts.is_empty() {
            winding.push(0);
            continue;
        }
        let rep = winding_number(curves, grid.point(pts[0]), cutoff)?;
        let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE ^ comp as u64);
        for _ in 0..3.min(pts.len().saturating_sub(1)) {
            let pick = pts[rng.gen_range(0..pts.len())];
            let check = winding_number(curves, grid.point(pick), cutoff)?;
            if check.value != rep.value {
                return Err(Error::ResolutionTooCoarse(format!(
                    "winding disagrees inside component {comp}: {} vs {}",
                    rep.value, check.value
                )));
            }
        }
        winding.push(rep.value);
    }
    if !winding.is_empty() && winding[0] != 0 {
        return Err(Error::ResolutionTooCoarse(format!(
            "unbounded component has winding {}; grid margin too small",
            winding[0]
        )));
    }

    Ok(ComponentMap {
        grid,
        label,
        winding,
        cutoff,
    })
}

/// One parameter slice: component curves of M_t.
#[derive(Debug, Clone, Default)]
pub struct Slice {
    pub curves: Vec<ParamCurve>,
    /// Exact t-derivative specs of the curves, when the family input carried
    /// polynomial t-dependence.
    pub t_deriv: Option<Vec<CurveSpec>>,
    /// Section reduced to a point (representable, never consumed).
    pub point_slice: bool,
    pub degenerate: bool,
}

impl Slice {
    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    pub fn total_length(&self) -> f64 {
        self.curves.iter().map(|c| c.length()).sum()
    }
}

/// A family of slices over a strictly increasing t-grid (n = 1).
#[derive(Debug, Clone)]
pub struct CurveFamily {
    pub t_grid: Vec<f64>,
    pub slices: Vec<Slice>,
    pub transverse: Vec<bool>,
}

impl CurveFamily {
    pub fn new(t_grid: Vec<f64>, mut slices: Vec<Slice>) -> Result<CurveFamily> {
        if t_grid.len() != slices.len() {
            return Err(Error::InvalidSpec(
                "tGrid and slice list lengths differ".into(),
            ));
        }
        if t_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSpec("tGrid must be strictly increasing".into()));
        }
        let mut transverse = Vec::with_capacity(slices.len());
        for s in slices.iter_mut() {
            if !s.is_empty() && s.total_length() < 1e-3 {
                // near-degenerate section: carries no quadrature information
                s.curves.clear();
                s.degenerate = true;
            }
            transverse.push(!s.degenerate);
        }
        Ok(CurveFamily {
            t_grid,
            slices,
            transverse,
        })
    }

    pub fn slice_index(&self, t: f64) -> Option<usize> {
        self.t_grid.iter().position(|&g| (g - t).abs() < 1e-12)
    }

    pub fn hull(&self) -> (f64, f64) {
        (
            *self.t_grid.first().unwrap_or(&0.0),
            *self.t_grid.last().unwrap_or(&0.0),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn circle_spec() -> CurveSpec {
        CurveSpec {
            z1: ComponentSpec::new(vec![(1, Complex64::new(1.0, 0.0))]),
            z2: ComponentSpec::default(),
            cover: 1,
            orientation: 1,
        }
    }

    #[test]
    fn sample_unit_circle() {
        let c = sample_curve(&circle_spec(), 64).unwrap();
        assert_eq!(c.len(), 64);
        for j in 0..64 {
            let th = 2.0 * PI * j as f64 / 64.0;
            assert!((c.z1[j] - Complex64::new(th.cos(), th.sin())).norm() < 1e-14);
            assert!(c.z2[j].norm() < 1e-14);
        }
        // closure: spec at theta = period equals first node
        let s = circle_spec();
        assert!((s.z1.eval(s.theta_period(), 1) - c.z1[0]).norm() < 1e-12);
    }

    #[test]
    fn sample_rejects_bad_input() {
        assert!(matches!(
            sample_curve(&circle_spec(), 12),
            Err(Error::InvalidSpec(_))
        ));
        assert!(matches!(
            sample_curve(&circle_spec(), 100),
            Err(Error::InvalidSpec(_))
        ));
        let mut bad = circle_spec();
        bad.z1.terms[0].1 = Complex64::new(f64::NAN, 0.0);
        assert!(matches!(sample_curve(&bad, 64), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn graph_boundary_nodes() {
        // z1 = e^{i theta}, z2 = e^{2 i theta}: boundary of w = z^2
        let spec = CurveSpec {
            z1: ComponentSpec::new(vec![(1, Complex64::new(1.0, 0.0))]),
            z2: ComponentSpec::new(vec![(2, Complex64::new(1.0, 0.0))]),
            cover: 1,
            orientation: 1,
        };
        let c = sample_curve(&spec, 128).unwrap();
        for j in 0..128 {
            assert!((c.z2[j] - c.z1[j] * c.z1[j]).norm() < 1e-13);
        }
    }

    #[test]
    fn double_cover_closes() {
        // z1 = e^{i theta}, z2 = e^{i theta / 2} over theta in [0, 4 pi)
        let spec = CurveSpec {
            z1: ComponentSpec::new(vec![(2, Complex64::new(1.0, 0.0))]),
            z2: ComponentSpec::new(vec![(1, Complex64::new(1.0, 0.0))]),
            cover: 2,
            orientation: 1,
        };
        let c = sample_curve(&spec, 256).unwrap();
        assert!((c.theta_period - 4.0 * PI).abs() < 1e-14);
        // w^2 = z on every node
        for j in 0..256 {
            assert!((c.z2[j] * c.z2[j] - c.z1[j]).norm() < 1e-13);
        }
        // single closed curve: spec at period matches node 0
        assert!((spec.z1.eval(4.0 * PI, 2) - c.z1[0]).norm() < 1e-12);
    }

    #[test]
    fn projection_carries_orientation() {
        let c = sample_curve(&circle_spec(), 64).unwrap();
        let p = project_z1(&c).unwrap();
        assert_eq!(p.orientation, 1);
        let p2 = project_z1(&c.reversed_orientation()).unwrap();
        assert_eq!(p2.orientation, -1);
    }

    #[test]
    fn winding_circle() {
        let c = sample_curve(&circle_spec(), 64).unwrap();
        let p = project_z1(&c).unwrap();
        let w = winding_number(&[p.clone()], Complex64::new(0.0, 0.0), 0.2).unwrap();
        assert_eq!(w.value, 1);
        assert!(w.residual < 1e-12);
        let w = winding_number(&[p.clone()], Complex64::new(2.0, 0.0), 0.2).unwrap();
        assert_eq!(w.value, 0);
        let rev = project_z1(&sample_curve(&circle_spec(), 64).unwrap().reversed_orientation())
            .unwrap();
        let w = winding_number(&[rev], Complex64::new(0.0, 0.0), 0.2).unwrap();
        assert_eq!(w.value, -1);
        assert!(matches!(
            winding_number(&[p], Complex64::new(1.01, 0.0), 0.2),
            Err(Error::NearBoundary { .. })
        ));
    }

    #[test]
    fn winding_spectral_convergence() {
        // error(2N) <= error(N)^2 + eps_machine at a fixed point
        let zeta = Complex64::new(0.62, 0.31);
        let mut errs = Vec::new();
        for &n in &[32usize, 64] {
            let c = sample_curve(&circle_spec(), n).unwrap();
            let p = project_z1(&c).unwrap();
            let raw = winding_raw(&p, zeta);
            errs.push((raw - Complex64::new(1.0, 0.0)).norm());
        }
        assert!(errs[1] <= errs[0] * errs[0] + 1e-14);
    }

    #[test]
    fn winding_invariant_under_resampling() {
        let zeta = Complex64::new(0.3, -0.2);
        for &n in &[64usize, 128] {
            let c = sample_curve(&circle_spec(), n).unwrap();
            let p = project_z1(&c).unwrap();
            assert_eq!(winding_number(&[p], zeta, 0.2).unwrap().value, 1);
        }
    }

    fn classify_circle(n_grid: usize) -> ComponentMap {
        let c = sample_curve(&circle_spec(), 256).unwrap();
        let p = project_z1(&c).unwrap();
        classify_components(&[p], GridSpec::square(2.0, n_grid), 0.12).unwrap()
    }

    #[test]
    fn classify_unit_circle() {
        let map = classify_circle(64);
        assert_eq!(map.component_count(), 2);
        assert_eq!(map.winding[0], 0);
        assert_eq!(map.winding[1], 1);
    }

    #[test]
    fn classify_stable_under_refinement() {
        let coarse = classify_circle(64);
        let fine = classify_circle(128);
        assert_eq!(coarse.component_count(), fine.component_count());
        assert_eq!(coarse.winding, fine.winding);
    }

    #[test]
    fn classify_two_disjoint_circles() {
        let big = sample_curve(&circle_spec(), 256).unwrap();
        let small_spec = CurveSpec {
            z1: ComponentSpec::new(vec![
                (0, Complex64::new(3.0, 0.0)),
                (1, Complex64::new(0.5, 0.0)),
            ]),
            z2: ComponentSpec::default(),
            cover: 1,
            orientation: 1,
        };
        let small = sample_curve(&small_spec, 256).unwrap();
        let ps: Vec<PlanarCurve> = [&big, &small]
            .iter()
            .map(|c| project_z1(c).unwrap())
            .collect();
        let grid = GridSpec {
            re_min: -2.0,
            re_max: 4.5,
            im_min: -2.0,
            im_max: 2.0,
            nx: 104,
            ny: 64,
        };
        let map = classify_components(&ps, grid, 0.1).unwrap();
        assert_eq!(map.component_count(), 3);
    }

    #[test]
    fn classify_annulus_windings() {
        // |z| = 2 positively oriented, |z| = 1 reversed
        let outer = CurveSpec {
            z1: ComponentSpec::new(vec![(1, Complex64::new(2.0, 0.0))]),
            z2: ComponentSpec::default(),
            cover: 1,
            orientation: 1,
        };
        let inner = CurveSpec {
            z1: ComponentSpec::new(vec![(-1, Complex64::new(1.0, 0.0))]),
            z2: ComponentSpec::default(),
            cover: 1,
            orientation: 1,
        };
        let ps: Vec<PlanarCurve> = [&outer, &inner]
            .iter()
            .map(|s| project_z1(&sample_curve(s, 256).unwrap()).unwrap())
            .collect();
        let map = classify_components(&ps, GridSpec::square(3.0, 96), 0.15).unwrap();
        assert_eq!(map.component_count(), 3);
        let mut ws = map.winding.clone();
        ws.sort();
        assert_eq!(ws, vec![0, 0, 1]);
    }

    #[test]
    fn orientation_reversal_negates_windings() {
        let c = sample_curve(&circle_spec(), 256).unwrap();
        let p = project_z1(&c.reversed_orientation()).unwrap();
        let map = classify_components(&[p], GridSpec::square(2.0, 64), 0.12).unwrap();
        assert_eq!(map.winding[1], -1);
    }

    #[test]
    fn family_degenerate_slices_empty() {
        let tiny = CurveSpec {
            z1: ComponentSpec::new(vec![(1, Complex64::new(1e-5, 0.0))]),
            z2: ComponentSpec::default(),
            cover: 1,
            orientation: 1,
        };
        let slice = Slice {
            curves: vec![sample_curve(&tiny, 64).unwrap()],
            ..Default::default()
        };
        let fam = CurveFamily::new(vec![0.0, 1.0], vec![slice, Slice::default()]).unwrap();
        assert!(fam.slices[0].is_empty());
        assert!(fam.slices[0].degenerate);
        assert!(!fam.transverse[0]);
        assert!(fam.transverse[1]);
    }
}
