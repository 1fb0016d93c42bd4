//! Spectral utilities on equispaced periodic grids plus Gauss-Legendre rules.

use num_complex::Complex64;
use rustfft::FftPlanner;

/// Derivative of a periodic sample vector with period `period`, computed by
/// Fourier differentiation. Sample count must match the grid the values were
/// taken on (equispaced, first point at 0).
pub fn periodic_derivative(values: &[Complex64], period: f64) -> Vec<Complex64> {
    let n = values.len();
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(n);
    let ifft = planner.plan_fft_inverse(n);
    let mut buf = values.to_vec();
    fft.process(&mut buf);
    let base = 2.0 * std::f64::consts::PI / period;
    for (k, v) in buf.iter_mut().enumerate() {
        // signed frequency; drop the unmatched Nyquist mode for even n
        let freq = if 2 * k < n {
            k as isize
        } else if 2 * k == n {
            0
        } else {
            k as isize - n as isize
        };
        *v *= Complex64::new(0.0, base * freq as f64);
    }
    ifft.process(&mut buf);
    let scale = 1.0 / n as f64;
    buf.iter_mut().for_each(|v| *v *= scale);
    buf
}

pub fn periodic_derivative_real(values: &[f64], period: f64) -> Vec<f64> {
    let cx: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    periodic_derivative(&cx, period).iter().map(|v| v.re).collect()
}

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// three-term recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = (n + 1) / 2;
    for i in 0..m {
        // Chebyshev-like initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p0 = 1.0;
            let mut p1 = 0.0;
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) as f64 * x * p1 - j as f64 * p2) / (j + 1) as f64;
            }
            pp = n as f64 * (x * p0 - p1) / (x * x - 1.0);
            let dx = p0 / pp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Gauss-Legendre rule mapped to [a, b].
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    (
        x.iter().map(|&xi| mid + half * xi).collect(),
        w.iter().map(|&wi| wi * half).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fourier_derivative_of_sin() {
        let n = 64;
        let period = 2.0 * std::f64::consts::PI;
        let vals: Vec<Complex64> = (0..n)
            .map(|j| {
                let th = period * j as f64 / n as f64;
                Complex64::new((3.0 * th).sin(), 0.0)
            })
            .collect();
        let dv = periodic_derivative(&vals, period);
        for j in 0..n {
            let th = period * j as f64 / n as f64;
            assert!((dv[j].re - 3.0 * (3.0 * th).cos()).abs() < 1e-10);
            assert!(dv[j].im.abs() < 1e-10);
        }
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(8);
        // degree-15 exactness: integrate x^14 over [-1,1] = 2/15
        let val: f64 = x.iter().zip(&w).map(|(&xi, &wi)| wi * xi.powi(14)).sum();
        assert!((val - 2.0 / 15.0).abs() < 1e-13);
        let (x, w) = gauss_legendre_on(16, 0.0, 1.0);
        let val: f64 = x.iter().zip(&w).map(|(&xi, &wi)| wi * xi.sqrt()).sum();
        assert!((val - 2.0 / 3.0).abs() < 1e-4);
    }
}
