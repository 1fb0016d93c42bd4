//! Integral machinery on a defining curve {F_t = 0}: Hefer decomposition,
//! kernels, the d-bar solver, Green functions, Cauchy data and the harmonic
//! extension with its jump relation.
//!
//! Normalization: g is scaled so that the distributional identity
//! <g_{z*}, i d d-bar chi> = chi(z*) holds in the leaf chart, and the
//! extension operator is scaled so that compatible boundary data reproduce
//! their harmonic extension (both pinned by the disk oracles below).

use crate::error::{Error, Result};
use crate::geometry::{sample_curve, ParamCurve};
use crate::poly::{horner_complex, horner_complex_at, Poly2};
use crate::spectral::periodic_derivative_real;
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Value normalization of the Green quadrature: g = C_GREEN_VALUE * raw
/// kernel integral, fixed by the plane-disk distributional oracle
/// (g = ln(|zeta - z*|/rho)/pi there).
const C_GREEN_VALUE: Complex64 = Complex64::new(0.0, 1.0 / (4.0 * PI * PI));

/// Derivative normalization: d g(z, .) = C_GREEN_DERIV * k(., z) omega,
/// fixed by the constant-extension oracle.
const C_GREEN_DERIV: f64 = -1.0 / (2.0 * PI);

/// U = C_EXT * contour integral of (u dg + g conj(alpha)); fixed by the
/// constant-extension oracle.
const C_EXT: Complex64 = Complex64::new(0.0, -1.0);

/// Bivariate defining polynomial with polynomial t-dependence per
/// coefficient.
#[derive(Debug, Clone)]
pub struct DefiningFunction {
    /// (i, j, t-poly): the z1^i z2^j coefficient as a polynomial in t.
    pub coeff: Vec<(usize, usize, Vec<Complex64>)>,
    pub d1: usize,
    pub d2: usize,
}

impl DefiningFunction {
    pub fn at(&self, t: f64) -> Poly2 {
        let mut p = Poly2::zero(self.d1, self.d2);
        for (i, j, tp) in &self.coeff {
            p.set(*i, *j, horner_complex(tp, t));
        }
        p
    }

    /// Max |F| over the sampled points (the vanishing check against
    /// reconstructed slices).
    pub fn max_abs_on(&self, t: f64, points: &[[Complex64; 2]]) -> f64 {
        let p = self.at(t);
        points
            .iter()
            .map(|z| p.eval(z[0], z[1]).norm())
            .fold(0.0, f64::max)
    }
}

/// Hefer decomposition at parameter t: F(z') - F(z) = <Q, z' - z>.
pub fn hefer(f: &DefiningFunction, t: f64, zp: [Complex64; 2], z: [Complex64; 2]) -> [Complex64; 2] {
    f.at(t).hefer(zp, z)
}

/// Chart and coefficient of the curve form at a regular point: (1, -1/F_z2)
/// where the z2-partial dominates, (2, +1/F_z1) otherwise.
pub fn omega_form(f_t: &Poly2, z: [Complex64; 2]) -> Result<(u8, Complex64)> {
    let f1 = f_t.partial_z1().eval(z[0], z[1]);
    let f2 = f_t.partial_z2().eval(z[0], z[1]);
    if f1.norm() < 1e-10 && f2.norm() < 1e-10 {
        return Err(Error::SingularPointOfCurve);
    }
    if f2.norm() >= f1.norm() {
        Ok((1, -Complex64::new(1.0, 0.0) / f2))
    } else {
        Ok((2, Complex64::new(1.0, 0.0) / f1))
    }
}

/// k_t(z', z) = det[ (conj(z') - conj(z)) / |z' - z|^2 , Q_t(z', z) ].
pub fn kernel_k(f_t: &Poly2, zp: [Complex64; 2], z: [Complex64; 2]) -> Result<Complex64> {
    let diff0 = zp[0] - z[0];
    let diff1 = zp[1] - z[1];
    let nsq = diff0.norm_sqr() + diff1.norm_sqr();
    if nsq == 0.0 {
        return Err(Error::SingularPoint);
    }
    let beta = [diff0.conj() / nsq, diff1.conj() / nsq];
    let q = f_t.hefer(zp, z);
    Ok(beta[0] * q[1] - beta[1] * q[0])
}

/// Area discretization of a chart-disk piece of {F_t = 0}: concentric rings
/// of near-square cells, symmetric enough that excluded self-cells cost
/// O(h^2).
#[derive(Debug, Clone)]
pub struct CurveDiscretization {
    pub f_t: Poly2,
    pub center: Complex64,
    pub radius: f64,
    pub zeta: Vec<Complex64>,
    pub w: Vec<Complex64>,
    /// chart-area weights
    pub area: Vec<f64>,
    pub f2: Vec<Complex64>,
    /// outermost ring marker
    pub boundary: Vec<bool>,
    /// the kernel reduces exactly to the base Cauchy kernel (graph leaves)
    pub exact_graph: bool,
    /// w(zeta) ascending coefficients when the leaf is a graph
    pub graph_poly: Option<Vec<Complex64>>,
    pub h_cell: f64,
}

impl CurveDiscretization {
    /// Build the chart-1 disk domain of a defining function of degree one in
    /// z2 (w = -A(z1)/B with constant B): nodes on the leaf over the disk
    /// |z1 - center| < radius.
    pub fn graph_domain(
        f: &DefiningFunction,
        t: f64,
        center: Complex64,
        radius: f64,
        n_target: usize,
    ) -> Result<CurveDiscretization> {
        let f_t = f.at(t);
        if f.d2 != 1 {
            return Err(Error::UnsupportedDomain(format!(
                "z2-degree {} defining function; graph domains need degree 1",
                f.d2
            )));
        }
        // F = A(z1) + B(z1) z2
        let a_poly: Vec<Complex64> = f_t.coeff.iter().map(|row| row[0]).collect();
        let b_poly: Vec<Complex64> = f_t
            .coeff
            .iter()
            .map(|row| row.get(1).copied().unwrap_or_default())
            .collect();
        let b_const = b_poly
            .iter()
            .skip(1)
            .all(|c| c.norm() < 1e-14)
            .then(|| b_poly[0]);
        let Some(b0) = b_const.filter(|b| b.norm() > 1e-10) else {
            return Err(Error::UnsupportedDomain(
                "z2-coefficient must be a nonzero constant".into(),
            ));
        };
        let graph_poly: Vec<Complex64> = a_poly.iter().map(|&c| -c / b0).collect();

        let h = radius * (PI / n_target as f64).sqrt();
        let n_rings = ((radius / h).round() as usize).max(2);
        let h_r = radius / n_rings as f64;
        let mut zeta = Vec::new();
        let mut area = Vec::new();
        let mut boundary = Vec::new();
        for m in 0..n_rings {
            let r = (m as f64 + 0.5) * h_r;
            let n_m = ((2.0 * PI * r / h_r).round() as usize).max(8);
            let dth = 2.0 * PI / n_m as f64;
            let wgt = r * h_r * dth;
            for k in 0..n_m {
                let ang = dth * (k as f64 + 0.5);
                zeta.push(center + Complex64::new(0.0, ang).exp() * r);
                area.push(wgt);
                boundary.push(m + 1 == n_rings);
            }
        }
        let w: Vec<Complex64> = zeta.iter().map(|&z| horner_complex_at(&graph_poly, z)).collect();
        let df2 = f_t.partial_z2();
        let f2: Vec<Complex64> = zeta
            .iter()
            .zip(&w)
            .map(|(&z, &wv)| df2.eval(z, wv))
            .collect();
        if f2.iter().any(|v| v.norm() < 1e-10) {
            return Err(Error::SingularPointOfCurve);
        }
        Ok(CurveDiscretization {
            f_t,
            center,
            radius,
            zeta,
            w,
            area,
            f2,
            boundary,
            exact_graph: true,
            graph_poly: Some(graph_poly),
            h_cell: h_r,
        })
    }

    pub fn len(&self) -> usize {
        self.zeta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeta.is_empty()
    }

    pub fn node(&self, j: usize) -> [Complex64; 2] {
        [self.zeta[j], self.w[j]]
    }

    /// Lift a chart point onto the leaf.
    pub fn lift(&self, zeta: Complex64) -> Result<[Complex64; 2]> {
        match &self.graph_poly {
            Some(p) => Ok([zeta, horner_complex_at(p, zeta)]),
            None => Err(Error::UnsupportedDomain("no graph lift available".into())),
        }
    }

    /// Kernel k_t(z', z), through the exact graph shortcut when valid.
    pub fn kernel(&self, zp: [Complex64; 2], z: [Complex64; 2]) -> Result<Complex64> {
        if self.exact_graph {
            let d = zp[0] - z[0];
            if d.norm_sqr() == 0.0 {
                return Err(Error::SingularPoint);
            }
            Ok(Complex64::new(1.0, 0.0) / d)
        } else {
            kernel_k(&self.f_t, zp, z)
        }
    }

    /// Exact area Cauchy transforms on the disk: T(z) = -(1/pi) int k/F2 dA
    /// and the companions used by the singularity subtractions.
    fn cauchy_of_one(&self, zeta: Complex64) -> Option<Complex64> {
        self.exact_graph.then(|| (zeta - self.center).conj())
    }

    /// nu-measure factor: omega ^ conj(omega) = nu dA with nu = -2i/|F2|^2.
    fn nu(&self, j: usize) -> Complex64 {
        Complex64::new(0.0, -2.0) * self.area[j] / self.f2[j].norm_sqr()
    }

}

/// d-bar solver: (R phi)(z_i) at every node from chart-1 samples of phi
/// (the coefficient of d(conj z1)). Singularity subtraction against the
/// exact transform of 1 keeps the error at cell-size order.
pub fn dbar_solve(disc: &CurveDiscretization, phi_hat: &[Complex64]) -> Result<Vec<Complex64>> {
    if phi_hat.len() != disc.len() {
        return Err(Error::InvalidSpec("phi sample count mismatch".into()));
    }
    let n = disc.len();
    let vals: Vec<Complex64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let zi = disc.node(i);
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j == i {
                    continue;
                }
                let k = disc.kernel(disc.node(j), zi).unwrap_or_default();
                let m = disc.area[j] / disc.f2[j];
                acc += k * (phi_hat[j] - phi_hat[i]) * m;
            }
            let t_exact = match disc.cauchy_of_one(zi[0]) {
                Some(t) => t,
                None => {
                    // discrete fallback: transform of 1 by plain exclusion
                    let mut s = Complex64::new(0.0, 0.0);
                    for j in 0..n {
                        if j != i {
                            let k = disc.kernel(disc.node(j), zi).unwrap_or_default();
                            s += k * disc.area[j] / disc.f2[j];
                        }
                    }
                    -s / PI
                }
            };
            -acc / PI + phi_hat[i] * t_exact
        })
        .collect();
    Ok(vals)
}

/// The Green kernel field of one pole: evaluates the calibrated g(pole, .)
/// anywhere on the chart domain by bilinearly-subtracted quadrature.
pub struct GreenField<'a> {
    disc: &'a CurveDiscretization,
    pole: [Complex64; 2],
    /// k(pole, z_j) nu_j, precomputed
    kpj: Vec<Complex64>,
    /// sum_j k(pole, z_j) nu_j replaced by its exact value when available
    v_exact: Option<Complex64>,
    nu_total: Complex64,
}

impl<'a> GreenField<'a> {
    pub fn new(disc: &'a CurveDiscretization, pole: [Complex64; 2]) -> GreenField<'a> {
        let n = disc.len();
        let mut kpj = vec![Complex64::new(0.0, 0.0); n];
        let mut nu_total = Complex64::new(0.0, 0.0);
        for j in 0..n {
            nu_total += disc.nu(j);
            if let Ok(k) = disc.kernel(pole, disc.node(j)) {
                kpj[j] = k;
            }
        }
        // V(pole) = int k(pole, z') nu dA' = -2 pi i conj(zeta* - c) on exact
        // disk domains
        let v_exact = disc
            .cauchy_of_one(pole[0])
            .map(|t| Complex64::new(0.0, -2.0 * PI) * t);
        GreenField {
            disc,
            pole,
            kpj,
            v_exact,
            nu_total,
        }
    }

    /// Calibrated g(pole, target).
    pub fn eval(&self, target: [Complex64; 2]) -> Result<Complex64> {
        if (target[0] - self.pole[0]).norm() < 1e-14
            && (target[1] - self.pole[1]).norm() < 1e-14
        {
            return Err(Error::SingularPoint);
        }
        let disc = self.disc;
        let n = disc.len();
        // A(z') = conj(k(z', target)), singular at target;
        // B(z') = k(pole, z'), singular at the pole
        let a_at_pole = disc.kernel(self.pole, target)?.conj();
        let b_at_target = disc.kernel(self.pole, target)?;
        let mut main = Complex64::new(0.0, 0.0);
        for j in 0..n {
            let zj = disc.node(j);
            let near_pole = (zj[0] - self.pole[0]).norm() < 1e-11;
            let near_target = (zj[0] - target[0]).norm() < 1e-11;
            if near_pole || near_target {
                continue;
            }
            let a_j = disc.kernel(zj, target)?.conj();
            main += (a_j - a_at_pole) * (self.kpj[j] - b_at_target) * disc.nu(j);
        }
        let v = match self.v_exact {
            Some(v) => v,
            None => {
                let mut s = Complex64::new(0.0, 0.0);
                for j in 0..n {
                    s += self.kpj[j] * disc.nu(j);
                }
                s
            }
        };
        let w = match disc.cauchy_of_one(target[0]) {
            // W(target) = int conj(k(z', target)) nu dA' = 2 pi i (zeta - c)
            Some(t) => Complex64::new(0.0, 2.0 * PI) * t.conj(),
            None => {
                let mut s = Complex64::new(0.0, 0.0);
                for j in 0..n {
                    let zj = disc.node(j);
                    if (zj[0] - target[0]).norm() < 1e-11 {
                        continue;
                    }
                    s += disc.kernel(zj, target)?.conj() * disc.nu(j);
                }
                s
            }
        };
        let raw = main + a_at_pole * v + b_at_target * w - a_at_pole * b_at_target * self.nu_total;
        Ok(raw * C_GREEN_VALUE)
    }
}

/// Green function value between two nodes, Richardson-extrapolated over two
/// mesh levels (n and n/2 nodes).
pub fn green_eval(
    f: &DefiningFunction,
    t: f64,
    center: Complex64,
    radius: f64,
    n_nodes: usize,
    z_star: Complex64,
    z: Complex64,
) -> Result<Complex64> {
    if (z_star - z).norm() < 1e-14 {
        return Err(Error::SingularPoint);
    }
    let mut vals = Vec::new();
    for n in [n_nodes, n_nodes / 2] {
        let disc = CurveDiscretization::graph_domain(f, t, center, radius, n)?;
        let pole = disc.lift(z_star)?;
        let tgt = disc.lift(z)?;
        vals.push(GreenField::new(&disc, pole).eval(tgt)?);
    }
    // levels h and sqrt(2) h: val + (val - coarse) removes the leading term
    Ok(vals[0] + (vals[0] - vals[1]))
}

/// Smooth compactly supported radial bump chi(zeta) = exp(s/(s - s0)) q(zeta)
/// with s = |zeta - c|^2 and holomorphic polynomial q.
#[derive(Debug, Clone)]
pub struct Bump {
    pub center: Complex64,
    pub s0: f64,
    pub q: Vec<Complex64>,
}

impl Bump {
    pub fn radial(center: Complex64, radius: f64) -> Bump {
        Bump {
            center,
            s0: radius * radius,
            q: vec![Complex64::new(1.0, 0.0)],
        }
    }

    fn profile(&self, s: f64) -> (f64, f64, f64) {
        if s >= self.s0 {
            return (0.0, 0.0, 0.0);
        }
        let d = s - self.s0;
        let b = (s / d).exp();
        let bp = b * (-self.s0 / (d * d));
        let bpp = b * (self.s0 * self.s0 / (d * d * d * d) + 2.0 * self.s0 / (d * d * d));
        (b, bp, bpp)
    }

    pub fn chi(&self, zeta: Complex64) -> Complex64 {
        let s = (zeta - self.center).norm_sqr();
        let (b, _, _) = self.profile(s);
        b * horner_complex_at(&self.q, zeta)
    }

    /// Coefficient of d(conj zeta) in d-bar chi.
    pub fn dbar_coeff(&self, zeta: Complex64) -> Complex64 {
        let s = (zeta - self.center).norm_sqr();
        let (_, bp, _) = self.profile(s);
        bp * (zeta - self.center) * horner_complex_at(&self.q, zeta)
    }

    /// Laplacian in the chart coordinate (radial q = const only).
    pub fn laplacian(&self, zeta: Complex64) -> f64 {
        let s = (zeta - self.center).norm_sqr();
        let (_, bp, bpp) = self.profile(s);
        4.0 * (bpp * s + bp)
    }
}

/// The bump-polynomial test battery for the d-bar solver on the unit disk:
/// three compactly supported chi with support radius <= 0.9.
pub fn dbar_test_bumps() -> Vec<Bump> {
    vec![
        Bump::radial(Complex64::new(0.0, 0.0), 0.85),
        Bump {
            center: Complex64::new(0.2, 0.0),
            s0: 0.55,
            q: vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        },
        Bump {
            center: Complex64::new(-0.05, 0.05),
            s0: 0.64,
            q: vec![
                Complex64::new(0.8, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.3, 0.0),
            ],
        },
    ]
}

/// <g_{z*}, i d d-bar chi> by node quadrature, to compare against chi(z*).
pub fn distributional_pairing(
    disc: &CurveDiscretization,
    z_star: Complex64,
    bump: &Bump,
) -> Result<Complex64> {
    let pole = disc.lift(z_star)?;
    let field = GreenField::new(disc, pole);
    let lap: Vec<f64> = disc.zeta.iter().map(|&z| bump.laplacian(z)).collect();
    let terms: Vec<Complex64> = (0..disc.len())
        .into_par_iter()
        .map(|i| {
            if lap[i] == 0.0 || (disc.zeta[i] - z_star).norm() < 1e-12 {
                return Complex64::new(0.0, 0.0);
            }
            let g = field.eval(disc.node(i)).unwrap_or_default();
            g * (0.5 * lap[i] * disc.area[i])
        })
        .collect();
    Ok(terms.iter().sum())
}

/// Mean-value harmonicity probe: 4 (ring mean - center value) / rho^2, which
/// vanishes identically for functions harmonic in the chart.
pub fn harmonicity_defect(
    disc: &CurveDiscretization,
    z_star: Complex64,
    probe: Complex64,
    rho: f64,
    n_ring: usize,
) -> Result<f64> {
    let pole = disc.lift(z_star)?;
    let field = GreenField::new(disc, pole);
    let g0 = field.eval(disc.lift(probe)?)?;
    let mut mean = Complex64::new(0.0, 0.0);
    for k in 0..n_ring {
        let ang = 2.0 * PI * k as f64 / n_ring as f64;
        let z = probe + Complex64::new(0.0, ang).exp() * rho;
        mean += field.eval(disc.lift(z)?)?;
    }
    mean /= n_ring as f64;
    Ok((4.0 * (mean - g0) / (rho * rho)).norm())
}

/// Boundary data on a slice curve: u, its Neumann coefficient u', frames and
/// the assembled Cauchy form alpha = (u' - i Tu)(nu* + i tau*)/2.
#[derive(Debug, Clone)]
pub struct CauchyDatum {
    pub curve: ParamCurve,
    pub u: Vec<f64>,
    pub u_prime: Vec<f64>,
    /// alpha components in dz1, dz2 per node.
    pub alpha: Vec<[Complex64; 2]>,
    pub tau: Vec<[Complex64; 2]>,
    pub nu: Vec<[Complex64; 2]>,
}

/// Assemble the Cauchy datum: tau is the unit tangent in the orientation
/// direction, nu = -i tau (so (nu, tau) is direct in the leaf), Tu is the
/// spectral arclength derivative of u.
pub fn cauchy_datum(curve: &ParamCurve, u: &[f64], u_prime: &[f64]) -> Result<CauchyDatum> {
    let n = curve.len();
    if u.len() != n || u_prime.len() != n {
        return Err(Error::InvalidSpec("boundary samples must match curve nodes".into()));
    }
    let du = periodic_derivative_real(u, curve.theta_period);
    let scale = curve
        .dz1
        .iter()
        .zip(&curve.dz2)
        .map(|(a, b)| (a.norm_sqr() + b.norm_sqr()).sqrt())
        .fold(0.0, f64::max);
    let mut alpha = Vec::with_capacity(n);
    let mut tau = Vec::with_capacity(n);
    let mut nu = Vec::with_capacity(n);
    let orient = curve.orientation as f64;
    for j in 0..n {
        let g1 = curve.dz1[j] * orient;
        let g2 = curve.dz2[j] * orient;
        let speed = (g1.norm_sqr() + g2.norm_sqr()).sqrt();
        if speed < 1e-10 * scale.max(1.0) {
            return Err(Error::DegenerateParametrization { node: j, speed });
        }
        let t = [g1 / speed, g2 / speed];
        let v = [-I * t[0], -I * t[1]];
        let tu = orient * du[j] / speed;
        let lu = 0.5 * Complex64::new(u_prime[j], -tu);
        alpha.push([lu * v[0].conj(), lu * v[1].conj()]);
        tau.push(t);
        nu.push(v);
    }
    Ok(CauchyDatum {
        curve: curve.clone(),
        u: u.to_vec(),
        u_prime: u_prime.to_vec(),
        alpha,
        tau,
        nu,
    })
}

/// Trigonometric resampling of periodic samples onto a finer power-of-two
/// grid (zero-padded Fourier interpolation).
pub fn resample_periodic(vals: &[f64], new_n: usize) -> Vec<f64> {
    use rustfft::FftPlanner;
    let n = vals.len();
    if new_n == n {
        return vals.to_vec();
    }
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(n);
    let ifft = planner.plan_fft_inverse(new_n);
    let mut buf: Vec<Complex64> = vals.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft.process(&mut buf);
    let mut padded = vec![Complex64::new(0.0, 0.0); new_n];
    let half = n / 2;
    for k in 0..=half {
        padded[k] = buf[k];
    }
    for k in 1..half {
        padded[new_n - k] = buf[n - k];
    }
    // split the unmatched Nyquist mode symmetrically
    if n % 2 == 0 && half >= 1 && new_n > n {
        padded[half] = buf[half] * 0.5;
        padded[new_n - half] = buf[half] * 0.5;
    }
    ifft.process(&mut padded);
    padded.iter().map(|v| v.re / n as f64).collect()
}

/// The pullback of omega along the curve at node j: the dtheta-coefficient.
fn omega_pullback(disc: &CurveDiscretization, datum: &CauchyDatum, j: usize) -> Complex64 {
    let c = &datum.curve;
    let z = [c.z1[j], c.z2[j]];
    let f2 = disc.f_t.partial_z2().eval(z[0], z[1]);
    let f1 = disc.f_t.partial_z1().eval(z[0], z[1]);
    if f2.norm() >= f1.norm() {
        -c.dz1[j] / f2
    } else {
        c.dz2[j] / f1
    }
}

/// One evaluation of the extension integrand family at a target point:
/// U(z) = C_EXT * sum_gamma [ u dg(z, .) + g(z, .) conj(alpha) ].
fn extension_value(
    disc: &CurveDiscretization,
    datum: &CauchyDatum,
    target: [Complex64; 2],
) -> Result<Complex64> {
    let c = &datum.curve;
    let n = c.len();
    let wq = c.theta_period / n as f64 * c.orientation as f64;
    let field = GreenField::new(disc, target);
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..n {
        let gam = [c.z1[j], c.z2[j]];
        // dg(z, .) pulled back: C_GREEN * k(gamma, z) * omega_pullback
        let k = disc.kernel(gam, target)?;
        let dg = C_GREEN_DERIV * k * omega_pullback(disc, datum, j);
        let mut term = Complex64::new(datum.u[j], 0.0) * dg;
        let apb = (datum.alpha[j][0] * c.dz1[j] + datum.alpha[j][1] * c.dz2[j]).conj();
        if apb.norm() > 0.0 {
            let g = field.eval(gam)?;
            term += g * apb;
        }
        acc += term * wq;
    }
    Ok(C_EXT * acc)
}

/// Univaluedness test: max |extension integral| over exterior targets.
pub fn green_moment_test(
    disc: &CurveDiscretization,
    datum: &CauchyDatum,
    exterior: &[[Complex64; 2]],
) -> Result<f64> {
    let vals: Vec<Result<f64>> = exterior
        .par_iter()
        .map(|&z| Ok(extension_value(disc, datum, z)?.norm()))
        .collect();
    let mut max = 0.0f64;
    for v in vals {
        max = max.max(v?);
    }
    Ok(max)
}

#[derive(Debug, Clone)]
pub struct ExtensionResult {
    pub values: Vec<f64>,
    pub max_imag: f64,
}

/// Harmonic extension at target points (real part; the imaginary residue is
/// a quadrature diagnostic).
pub fn harmonic_extend(
    disc: &CurveDiscretization,
    datum: &CauchyDatum,
    targets: &[[Complex64; 2]],
) -> Result<ExtensionResult> {
    let vals: Vec<Result<Complex64>> = targets
        .par_iter()
        .map(|&z| extension_value(disc, datum, z))
        .collect();
    let mut values = Vec::with_capacity(vals.len());
    let mut max_imag = 0.0f64;
    for v in vals {
        let v = v?;
        max_imag = max_imag.max(v.im.abs());
        values.push(v.re);
    }
    Ok(ExtensionResult { values, max_imag })
}

#[derive(Debug, Clone)]
pub struct JumpReport {
    pub residual: f64,
    /// collocation chart points used
    pub points: Vec<Complex64>,
}

/// Jump relation u = U+ - U-: approach the curve from both sides along the
/// chart normal at two distances and extrapolate each side to the boundary.
pub fn jump_check(
    disc: &CurveDiscretization,
    datum: &CauchyDatum,
    n_colloc: usize,
    deltas: (f64, f64),
) -> Result<JumpReport> {
    let c = &datum.curve;
    let n = c.len();
    let stride = (n / n_colloc.max(1)).max(1);
    let mut residual = 0.0f64;
    let mut points = Vec::new();
    let jobs: Vec<usize> = (0..n).step_by(stride).collect();
    let vals: Vec<Result<(Complex64, f64)>> = jobs
        .par_iter()
        .map(|&j| {
            let zeta = c.z1[j];
            let tz = c.dz1[j] * c.orientation as f64;
            if tz.norm() < 1e-12 {
                return Ok((zeta, 0.0));
            }
            // outward chart normal relative to the oriented tangent
            let normal = -I * tz / tz.norm();
            let one_sided = |side: f64| -> Result<f64> {
                let mut us = [0.0; 2];
                for (idx, &d) in [deltas.0, deltas.1].iter().enumerate() {
                    let z = disc.lift(zeta + normal * (side * d))?;
                    us[idx] = extension_value(disc, datum, z)?.re;
                }
                // linear extrapolation to the boundary: d2 = d1/2
                Ok(2.0 * us[1] - us[0])
            };
            let u_out = one_sided(1.0)?;
            let u_in = one_sided(-1.0)?;
            Ok((zeta, (datum.u[j] - (u_in - u_out)).abs()))
        })
        .collect();
    for v in vals {
        let (zeta, r) = v?;
        residual = residual.max(r);
        points.push(zeta);
    }
    Ok(JumpReport { residual, points })
}

/// Interior targets: mesh nodes at chart distance > margin inside the curve,
/// decided by the winding number of the projected curve.
pub fn interior_targets(
    disc: &CurveDiscretization,
    curve: &ParamCurve,
    margin: f64,
    max_count: usize,
) -> Result<Vec<[Complex64; 2]>> {
    let planar = crate::geometry::project_z1(curve)?;
    let mut out = Vec::new();
    let stride = (disc.len() / (4 * max_count).max(1)).max(1);
    for j in (0..disc.len()).step_by(stride) {
        let z = disc.zeta[j];
        if planar.min_distance(z) <= margin {
            continue;
        }
        if let Ok(wdg) = crate::geometry::winding_number(&[planar.clone()], z, margin * 0.9) {
            if wdg.value != 0 {
                out.push(disc.node(j));
                if out.len() >= max_count {
                    break;
                }
            }
        }
    }
    Ok(out)
}

/// Exterior targets in the collar between the curve and the domain edge.
pub fn exterior_targets(
    disc: &CurveDiscretization,
    curve: &ParamCurve,
    margin: f64,
    max_count: usize,
) -> Result<Vec<[Complex64; 2]>> {
    let planar = crate::geometry::project_z1(curve)?;
    let mut out = Vec::new();
    for j in 0..disc.len() {
        let z = disc.zeta[j];
        if disc.boundary[j] || planar.min_distance(z) <= margin {
            continue;
        }
        if let Ok(wdg) = crate::geometry::winding_number(&[planar.clone()], z, margin * 0.9) {
            if wdg.value == 0 {
                out.push(disc.node(j));
                if out.len() >= max_count {
                    break;
                }
            }
        }
    }
    Ok(out)
}

/// Resample a curve and its boundary samples onto a finer node count.
pub fn upsample_datum(datum: &CauchyDatum, n_new: usize) -> Result<CauchyDatum> {
    if n_new == datum.curve.len() {
        return Ok(datum.clone());
    }
    let spec = datum
        .curve
        .source
        .as_ref()
        .ok_or_else(|| Error::InvalidSpec("upsampling needs the curve spec".into()))?;
    let curve = sample_curve(spec, n_new)?;
    let u = resample_periodic(&datum.u, n_new);
    let up = resample_periodic(&datum.u_prime, n_new);
    cauchy_datum(&curve, &u, &up)
}
