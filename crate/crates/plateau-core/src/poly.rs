//! Small polynomial helpers: univariate complex polynomials, bivariate
//! polynomials in (z1, z2) with optional polynomial t-dependence, and real
//! polynomials in the four real coordinates of C^2.

use num_complex::Complex64;

/// Real-coefficient polynomial in t, evaluated by Horner.
pub fn horner_real(coeffs: &[f64], t: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
}

pub fn horner_complex(coeffs: &[Complex64], t: f64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * t + c)
}

pub fn horner_complex_at(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// Evaluate a monic polynomial w^d + c[d-1] w^{d-1} + ... + c[0] at w.
/// `low` holds the non-leading coefficients in ascending order.
pub fn eval_monic(low: &[Complex64], w: Complex64) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for &c in low.iter().rev() {
        acc = acc * w + c;
    }
    acc
}

/// Derivative of the same monic polynomial at w.
pub fn eval_monic_deriv(low: &[Complex64], w: Complex64) -> Complex64 {
    let d = low.len();
    let mut acc = Complex64::new(d as f64, 0.0);
    for k in (1..d).rev() {
        acc = acc * w + low[k] * k as f64;
    }
    if d == 0 {
        Complex64::new(0.0, 0.0)
    } else {
        acc
    }
}

/// Divided power sum (a^n - b^n)/(a - b) written in the cancellation-free
/// form sum_{l<n} a^l b^{n-1-l}; equals n a^{n-1} at coincidence.
pub fn divided_power(a: Complex64, b: Complex64, n: usize) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut apow = Complex64::new(1.0, 0.0);
    let mut bpows = vec![Complex64::new(1.0, 0.0); n];
    for l in 1..n {
        bpows[l] = bpows[l - 1] * b;
    }
    for l in 0..n {
        sum += apow * bpows[n - 1 - l];
        apow *= a;
    }
    sum
}

/// Bivariate polynomial in (z1, z2) with complex coefficients whose entries
/// may depend polynomially on a real parameter t.
#[derive(Debug, Clone)]
pub struct Poly2 {
    /// coeff[i][j] multiplies z1^i z2^j.
    pub coeff: Vec<Vec<Complex64>>,
}

impl Poly2 {
    pub fn zero(d1: usize, d2: usize) -> Self {
        Poly2 {
            coeff: vec![vec![Complex64::new(0.0, 0.0); d2 + 1]; d1 + 1],
        }
    }

    pub fn constant(c: Complex64) -> Self {
        Poly2 { coeff: vec![vec![c]] }
    }

    pub fn deg1(&self) -> usize {
        self.coeff.len() - 1
    }

    pub fn deg2(&self) -> usize {
        self.coeff.first().map(|r| r.len() - 1).unwrap_or(0)
    }

    pub fn set(&mut self, i: usize, j: usize, c: Complex64) {
        self.coeff[i][j] = c;
    }

    pub fn eval(&self, z1: Complex64, z2: Complex64) -> Complex64 {
        // Horner in z1 of Horner-in-z2 rows.
        let mut acc = Complex64::new(0.0, 0.0);
        for row in self.coeff.iter().rev() {
            let rowval = row
                .iter()
                .rev()
                .fold(Complex64::new(0.0, 0.0), |a, &c| a * z2 + c);
            acc = acc * z1 + rowval;
        }
        acc
    }

    pub fn partial_z1(&self) -> Poly2 {
        if self.coeff.len() <= 1 {
            return Poly2::zero(0, 0);
        }
        let coeff = self
            .coeff
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, row)| row.iter().map(|&c| c * i as f64).collect())
            .collect();
        Poly2 { coeff }
    }

    pub fn partial_z2(&self) -> Poly2 {
        let d2 = self.deg2();
        if d2 == 0 {
            return Poly2::zero(0, 0);
        }
        let coeff = self
            .coeff
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .skip(1)
                    .map(|(j, &c)| c * j as f64)
                    .collect()
            })
            .collect();
        Poly2 { coeff }
    }

    /// Hefer divided differences: Q1 = [F(z1', z2') - F(z1, z2')]/(z1' - z1),
    /// Q2 = [F(z1, z2') - F(z1, z2)]/(z2' - z2), both total polynomials.
    pub fn hefer(&self, zp: [Complex64; 2], z: [Complex64; 2]) -> [Complex64; 2] {
        let mut q1 = Complex64::new(0.0, 0.0);
        let mut q2 = Complex64::new(0.0, 0.0);
        // powers of z2' and z2
        let d2 = self.deg2();
        let mut z2p_pow = vec![Complex64::new(1.0, 0.0); d2 + 1];
        for j in 1..=d2 {
            z2p_pow[j] = z2p_pow[j - 1] * zp[1];
        }
        let mut z1_pow = vec![Complex64::new(1.0, 0.0); self.coeff.len()];
        for i in 1..self.coeff.len() {
            z1_pow[i] = z1_pow[i - 1] * z[0];
        }
        for (i, row) in self.coeff.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                if c.norm_sqr() == 0.0 {
                    continue;
                }
                if i >= 1 {
                    q1 += c * divided_power(zp[0], z[0], i) * z2p_pow[j];
                }
                if j >= 1 {
                    q2 += c * z1_pow[i] * divided_power(zp[1], z[1], j);
                }
            }
        }
        [q1, q2]
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeff
            .iter()
            .flat_map(|r| r.iter())
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }
}

/// Monomial in the real coordinates (x1, y1, x2, y2) of C^2.
#[derive(Debug, Clone, Copy)]
pub struct RealTerm {
    pub exp: [u8; 4],
    pub coeff: f64,
}

/// Real polynomial in the four real coordinates.
#[derive(Debug, Clone, Default)]
pub struct Poly4 {
    pub terms: Vec<RealTerm>,
}

impl Poly4 {
    pub fn monomial(exp: [u8; 4], coeff: f64) -> Self {
        Poly4 {
            terms: vec![RealTerm { exp, coeff }],
        }
    }

    pub fn eval(&self, x: [f64; 4]) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let mut v = t.coeff;
                for a in 0..4 {
                    for _ in 0..t.exp[a] {
                        v *= x[a];
                    }
                }
                v
            })
            .sum()
    }

    /// Partial derivative with respect to coordinate `axis`.
    pub fn partial(&self, axis: usize) -> Poly4 {
        let terms = self
            .terms
            .iter()
            .filter(|t| t.exp[axis] > 0)
            .map(|t| {
                let mut exp = t.exp;
                exp[axis] -= 1;
                RealTerm {
                    exp,
                    coeff: t.coeff * t.exp[axis] as f64,
                }
            })
            .collect();
        Poly4 { terms }
    }
}
