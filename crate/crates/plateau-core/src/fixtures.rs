//! Canned boundary families used throughout the test suites and the CLI
//! examples: graphs over the disk, the two-sheet square root, an annulus
//! graph, and the torus family whose slices bound pairs of disks.

use crate::geometry::{
    sample_curve, ComponentSpec, CurveFamily, CurveSpec, ParamCurve, Slice,
};
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// (e^{i theta}, 0): boundary of the flat unit disk.
pub fn flat_circle(n: usize) -> ParamCurve {
    let spec = CurveSpec {
        z1: ComponentSpec::new(vec![(1, c(1.0, 0.0))]),
        z2: ComponentSpec::default(),
        cover: 1,
        orientation: 1,
    };
    sample_curve(&spec, n).unwrap()
}

/// (e^{i theta}, e^{i p theta}): boundary of the graph w = z^p over the disk.
pub fn graph_power(p: i32, n: usize) -> ParamCurve {
    let spec = CurveSpec {
        z1: ComponentSpec::new(vec![(1, c(1.0, 0.0))]),
        z2: ComponentSpec::new(vec![(p, c(1.0, 0.0))]),
        cover: 1,
        orientation: 1,
    };
    sample_curve(&spec, n).unwrap()
}

/// Double cover of the circle: the slice boundary of {w^2 = z}.
pub fn two_sheet_sqrt(n: usize) -> ParamCurve {
    let spec = CurveSpec {
        z1: ComponentSpec::new(vec![(2, c(1.0, 0.0))]),
        z2: ComponentSpec::new(vec![(1, c(1.0, 0.0))]),
        cover: 2,
        orientation: 1,
    };
    sample_curve(&spec, n).unwrap()
}

/// Boundary of {w^2 = z - t} over the disk |z - t| <= 1.
pub fn sqrt_shifted(t: f64, n: usize) -> ParamCurve {
    let spec = CurveSpec {
        z1: ComponentSpec::new(vec![(0, c(t, 0.0)), (2, c(1.0, 0.0))]),
        z2: ComponentSpec::new(vec![(1, c(1.0, 0.0))]),
        cover: 2,
        orientation: 1,
    };
    sample_curve(&spec, n).unwrap()
}

/// Graph w = z over the annulus 1/2 < |z| < 1: outer circle positively
/// oriented, inner circle traversed backwards.
pub fn annulus_pair(n: usize) -> Vec<ParamCurve> {
    let outer = CurveSpec {
        z1: ComponentSpec::new(vec![(1, c(1.0, 0.0))]),
        z2: ComponentSpec::new(vec![(1, c(1.0, 0.0))]),
        cover: 1,
        orientation: 1,
    };
    let inner = CurveSpec {
        z1: ComponentSpec::new(vec![(-1, c(0.5, 0.0))]),
        z2: ComponentSpec::new(vec![(-1, c(0.5, 0.0))]),
        cover: 1,
        orientation: 1,
    };
    vec![
        sample_curve(&outer, n).unwrap(),
        sample_curve(&inner, n).unwrap(),
    ]
}

/// Torus slice at parameter t: the two circles (e^{i th}, +-a e^{i th}) with
/// a = sqrt(1 - t^2). Empty for |t| >= 1.
pub fn torus_slice(t: f64, n: usize) -> Slice {
    if t.abs() >= 1.0 {
        return Slice::default();
    }
    let a = (1.0 - t * t).sqrt();
    let make = |sign: f64| {
        let spec = CurveSpec {
            z1: ComponentSpec::new(vec![(1, c(1.0, 0.0))]),
            z2: ComponentSpec::new(vec![(1, c(sign * a, 0.0))]),
            cover: 1,
            orientation: 1,
        };
        sample_curve(&spec, n).unwrap()
    };
    Slice {
        curves: vec![make(1.0), make(-1.0)],
        t_deriv: None,
        point_slice: false,
        degenerate: false,
    }
}

/// The torus family on nt parameters spread over (-0.95, 0.95).
pub fn torus_family(nt: usize, n: usize) -> CurveFamily {
    let t_grid: Vec<f64> = (0..nt)
        .map(|i| -0.95 + 1.9 * i as f64 / (nt - 1) as f64)
        .collect();
    let slices = t_grid.iter().map(|&t| torus_slice(t, n)).collect();
    CurveFamily::new(t_grid, slices).unwrap()
}

/// Torus family padded with empty slices out to |t| = extent.
pub fn torus_family_padded(nt: usize, n: usize, extent: f64) -> CurveFamily {
    let t_grid: Vec<f64> = (0..nt)
        .map(|i| -extent + 2.0 * extent * i as f64 / (nt - 1) as f64)
        .collect();
    let slices = t_grid.iter().map(|&t| torus_slice(t, n)).collect();
    CurveFamily::new(t_grid, slices).unwrap()
}

/// Family whose slices all bound {w^2 = z - t}: the singular locus tracks
/// zeta = t.
pub fn sqrt_family(nt: usize, n: usize) -> CurveFamily {
    let t_grid: Vec<f64> = (0..nt)
        .map(|i| -0.5 + 1.0 * i as f64 / (nt - 1) as f64)
        .collect();
    let slices = t_grid
        .iter()
        .map(|&t| {
            let curve = sqrt_shifted(t, n);
            let deriv = CurveSpec {
                z1: ComponentSpec::new(vec![(0, c(1.0, 0.0))]),
                z2: ComponentSpec::default(),
                cover: 2,
                orientation: 1,
            };
            Slice {
                curves: vec![curve],
                t_deriv: Some(vec![deriv]),
                point_slice: false,
                degenerate: false,
            }
        })
        .collect();
    CurveFamily::new(t_grid, slices).unwrap()
}

/// Constant family: every slice bounds w = z^2.
pub fn constant_graph_family(nt: usize, n: usize) -> CurveFamily {
    let t_grid: Vec<f64> = (0..nt).map(|i| i as f64 * 0.1).collect();
    let slices = t_grid
        .iter()
        .map(|_| {
            let curve = graph_power(2, n);
            let deriv = CurveSpec {
                z1: ComponentSpec::default(),
                z2: ComponentSpec::default(),
                cover: 1,
                orientation: 1,
            };
            Slice {
                curves: vec![curve],
                t_deriv: Some(vec![deriv]),
                point_slice: false,
                degenerate: false,
            }
        })
        .collect();
    CurveFamily::new(t_grid, slices).unwrap()
}

/// Single negatively oriented circle bounding the graph w = z: every interior
/// winding is -1, which the positive-chain reconstruction must refuse.
pub fn negative_winding_slice(n: usize) -> Slice {
    let spec = CurveSpec {
        z1: ComponentSpec::new(vec![(1, c(1.0, 0.0))]),
        z2: ComponentSpec::new(vec![(1, c(1.0, 0.0))]),
        cover: 1,
        orientation: -1,
    };
    Slice {
        curves: vec![sample_curve(&spec, n).unwrap()],
        t_deriv: None,
        point_slice: false,
        degenerate: false,
    }
}
