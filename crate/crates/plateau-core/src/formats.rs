//! On-disk formats: the curve-family input document, defining-function and
//! boundary-data files, CSV/JSON exports and machine-readable reports. Every
//! float written into a machine-readable file carries 17 significant digits.

use crate::error::{Error, Result};
use crate::family::LeviFlatSet;
use crate::geometry::{
    sample_curve, ComponentSpec, CurveFamily, CurveSpec, ParamCurve, Slice,
};
use crate::green::DefiningFunction;
use crate::moments::MomentTable;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

/// One Fourier-Laurent coefficient: a constant [re, im] or a polynomial in t
/// given as a list of [re, im] entries by ascending power.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffValue {
    Const([f64; 2]),
    TPoly(Vec<[f64; 2]>),
}

impl CoeffValue {
    pub fn eval(&self, t: f64) -> Complex64 {
        match self {
            CoeffValue::Const([re, im]) => Complex64::new(*re, *im),
            CoeffValue::TPoly(cs) => {
                let coeffs: Vec<Complex64> =
                    cs.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
                crate::poly::horner_complex(&coeffs, t)
            }
        }
    }

    pub fn t_derivative(&self) -> Option<Vec<[f64; 2]>> {
        match self {
            CoeffValue::Const(_) => None,
            CoeffValue::TPoly(cs) => Some(
                cs.iter()
                    .enumerate()
                    .skip(1)
                    .map(|(k, [re, im])| [re * k as f64, im * k as f64])
                    .collect(),
            ),
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ComponentInput {
    /// Keyed by harmonic degree (integer, possibly negative, in the
    /// fundamental e^{i theta / cover}).
    pub coeffs: BTreeMap<String, CoeffValue>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurveInput {
    pub t: f64,
    #[serde(default = "one")]
    pub cover: u32,
    pub z1: ComponentInput,
    pub z2: ComponentInput,
    #[serde(default = "one_i8")]
    pub orientation: i8,
}

fn one() -> u32 {
    1
}

fn one_i8() -> i8 {
    1
}

/// The curve-family input document.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FamilyInput {
    pub n: usize,
    pub t_grid: Vec<f64>,
    pub curves: Vec<CurveInput>,
    #[serde(default)]
    pub point_slices: Vec<f64>,
}

fn parse_degree(key: &str) -> Result<i32> {
    key.parse::<i32>()
        .map_err(|_| Error::Parse(format!("coefficient degree key '{key}' is not an integer")))
}

fn component_at(input: &ComponentInput, t: f64) -> Result<ComponentSpec> {
    let mut terms = Vec::new();
    for (key, val) in &input.coeffs {
        let c = val.eval(t);
        if !c.re.is_finite() || !c.im.is_finite() {
            return Err(Error::InvalidSpec(format!("non-finite coefficient at degree {key}")));
        }
        terms.push((parse_degree(key)?, c));
    }
    Ok(ComponentSpec::new(terms))
}

fn component_t_deriv(input: &ComponentInput, t: f64) -> Result<ComponentSpec> {
    let mut terms = Vec::new();
    for (key, val) in &input.coeffs {
        if let Some(dp) = val.t_derivative() {
            let coeffs: Vec<Complex64> =
                dp.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
            terms.push((parse_degree(key)?, crate::poly::horner_complex(&coeffs, t)));
        }
    }
    Ok(ComponentSpec::new(terms))
}

impl FamilyInput {
    pub fn parse(text: &str) -> Result<FamilyInput> {
        serde_json::from_str(text).map_err(|e| {
            Error::Parse(format!(
                "family JSON invalid at line {}, column {}: {e}",
                e.line(),
                e.column()
            ))
        })
    }

    /// Instantiate the runtime family at the given quadrature node count.
    pub fn build(&self, n_nodes: usize) -> Result<CurveFamily> {
        if self.n != 1 {
            return Err(Error::InvalidSpec(format!(
                "only n = 1 parameter dimension is supported, got {}",
                self.n
            )));
        }
        let mut slices: Vec<Slice> = self.t_grid.iter().map(|_| Slice::default()).collect();
        let has_tpoly = self
            .curves
            .iter()
            .any(|c| {
                c.z1.coeffs.values().chain(c.z2.coeffs.values()).any(|v| matches!(v, CoeffValue::TPoly(_)))
            });
        for entry in &self.curves {
            let idx = self
                .t_grid
                .iter()
                .position(|&g| (g - entry.t).abs() < 1e-12)
                .ok_or_else(|| {
                    Error::Parse(format!("curve t = {} is not on the tGrid", entry.t))
                })?;
            let spec = CurveSpec {
                z1: component_at(&entry.z1, entry.t)?,
                z2: component_at(&entry.z2, entry.t)?,
                cover: entry.cover,
                orientation: entry.orientation,
            };
            let curve = sample_curve(&spec, n_nodes)?;
            let slice = &mut slices[idx];
            slice.curves.push(curve);
            if has_tpoly {
                let deriv = CurveSpec {
                    z1: component_t_deriv(&entry.z1, entry.t)?,
                    z2: component_t_deriv(&entry.z2, entry.t)?,
                    cover: entry.cover,
                    orientation: entry.orientation,
                };
                slice.t_deriv.get_or_insert_with(Vec::new).push(deriv);
            }
        }
        for (i, &t) in self.t_grid.iter().enumerate() {
            if self.point_slices.iter().any(|&p| (p - t).abs() < 1e-12) {
                slices[i].point_slice = true;
            }
        }
        CurveFamily::new(self.t_grid.clone(), slices)
    }
}

/// Defining-function document: {"d1":., "d2":., "coeffs":[{"i":., "j":.,
/// "t_poly":[...]}]}; t_poly entries are numbers or [re, im] pairs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DefiningFunctionInput {
    pub d1: usize,
    pub d2: usize,
    pub coeffs: Vec<DefiningCoeff>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DefiningCoeff {
    pub i: usize,
    pub j: usize,
    pub t_poly: Vec<ReOrPair>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ReOrPair {
    Re(f64),
    Pair([f64; 2]),
}

impl ReOrPair {
    fn to_complex(&self) -> Complex64 {
        match self {
            ReOrPair::Re(x) => Complex64::new(*x, 0.0),
            ReOrPair::Pair([re, im]) => Complex64::new(*re, *im),
        }
    }
}

impl DefiningFunctionInput {
    pub fn parse(text: &str) -> Result<DefiningFunctionInput> {
        serde_json::from_str(text).map_err(|e| {
            Error::Parse(format!(
                "defining function JSON invalid at line {}, column {}: {e}",
                e.line(),
                e.column()
            ))
        })
    }

    pub fn build(&self) -> Result<DefiningFunction> {
        let mut coeff = Vec::new();
        for c in &self.coeffs {
            if c.i > self.d1 || c.j > self.d2 {
                return Err(Error::InvalidSpec(format!(
                    "coefficient ({}, {}) outside degrees ({}, {})",
                    c.i, c.j, self.d1, self.d2
                )));
            }
            let tp: Vec<Complex64> = c.t_poly.iter().map(|x| x.to_complex()).collect();
            if tp.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
                return Err(Error::InvalidSpec("non-finite coefficient".into()));
            }
            coeff.push((c.i, c.j, tp));
        }
        Ok(DefiningFunction {
            coeff,
            d1: self.d1,
            d2: self.d2,
        })
    }
}

/// Boundary data for the extension stage: u and u' samples per slice curve,
/// aligned with the sweep's quadrature nodes.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BoundaryDataInput {
    pub slices: Vec<BoundarySlice>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BoundarySlice {
    pub t: f64,
    pub curves: Vec<BoundaryCurveData>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BoundaryCurveData {
    pub u: Vec<f64>,
    pub u_prime: Vec<f64>,
}

impl BoundaryDataInput {
    pub fn parse(text: &str) -> Result<BoundaryDataInput> {
        serde_json::from_str(text).map_err(|e| {
            Error::Parse(format!(
                "boundary data JSON invalid at line {}, column {}: {e}",
                e.line(),
                e.column()
            ))
        })
    }
}

/// Format a float with 17 significant digits (round-trip exact).
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_c(z: Complex64) -> String {
    format!("{},{}", fmt_f64(z.re), fmt_f64(z.im))
}

/// serde_json formatter printing every f64 with 17 significant digits.
struct SigDigitFormatter;

impl serde_json::ser::Formatter for SigDigitFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

/// Serialize to JSON with deterministic float formatting.
pub fn to_json_17<T: Serialize>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SigDigitFormatter);
    value
        .serialize(&mut ser)
        .map_err(|e| Error::Parse(format!("serialization failed: {e}")))?;
    String::from_utf8(out).map_err(|e| Error::Parse(format!("non-utf8 JSON: {e}")))
}

/// Moment table CSV: Re zeta, Im zeta, component, k, Re S_k, Im S_k.
pub fn moment_table_csv(table: &MomentTable) -> String {
    let mut s = String::from("re_zeta,im_zeta,component,k,re_s,im_s\n");
    for idx in 0..table.map.grid.len() {
        if !table.valid[idx] {
            continue;
        }
        let z = table.map.grid.point(idx);
        let row = table.row(idx);
        for (k, v) in row.iter().enumerate() {
            s.push_str(&format!(
                "{},{},{},{k},{}\n",
                fmt_f64(z.re),
                fmt_f64(z.im),
                table.map.label[idx],
                fmt_c(*v)
            ));
        }
    }
    s
}

/// Point-cloud CSV of one reconstructed slice.
pub fn slice_csv(set: &LeviFlatSet, slice_index: usize) -> String {
    let slice = &set.slices[slice_index];
    let mut s = String::from("re_zeta,im_zeta,re_w,im_w,sheet,component\n");
    for fiber in &slice.fibers {
        for (i, &gidx) in fiber.points.iter().enumerate() {
            let z = set.grid.point(gidx);
            for (sheet, &w) in fiber.root_row(i).iter().enumerate() {
                s.push_str(&format!(
                    "{},{},{},{sheet},{}\n",
                    fmt_c(z),
                    fmt_c(w),
                    "",
                    fiber.component
                ));
            }
        }
    }
    s
}

/// ChainSlice JSON export: fiber coefficients and roots per grid point.
pub fn chain_slice_json(set: &LeviFlatSet, slice_index: usize) -> Result<String> {
    #[derive(Serialize)]
    struct PointOut {
        zeta: [f64; 2],
        coeffs: Vec<[f64; 2]>,
        roots: Vec<[f64; 2]>,
        abs_disc: f64,
    }
    #[derive(Serialize)]
    struct FiberOut {
        component: i32,
        degree: usize,
        points: Vec<PointOut>,
    }
    #[derive(Serialize)]
    struct SliceOut {
        t: f64,
        sign: i8,
        stokes_residual: f64,
        mass: f64,
        mass_bound: f64,
        fibers: Vec<FiberOut>,
    }
    let slice = &set.slices[slice_index];
    let fibers = slice
        .fibers
        .iter()
        .map(|f| FiberOut {
            component: f.component,
            degree: f.degree,
            points: f
                .points
                .iter()
                .enumerate()
                .map(|(i, &gidx)| {
                    let z = set.grid.point(gidx);
                    PointOut {
                        zeta: [z.re, z.im],
                        coeffs: f.coeff_row(i).iter().map(|c| [c.re, c.im]).collect(),
                        roots: f.root_row(i).iter().map(|c| [c.re, c.im]).collect(),
                        abs_disc: f.disc_abs[i],
                    }
                })
                .collect(),
        })
        .collect();
    to_json_17(&SliceOut {
        t: slice.t,
        sign: slice.sign,
        stokes_residual: slice.stokes_residual,
        mass: slice.mass,
        mass_bound: slice.mass_bound,
        fibers,
    })
}

/// Parse one slice point cloud back from its CSV (used by the extension
/// stage's vanishing check).
pub fn parse_slice_csv(text: &str) -> Result<Vec<[Complex64; 2]>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() < 4 {
            return Err(Error::Parse(format!(
                "slice CSV line {}: expected at least 4 columns",
                lineno + 1
            )));
        }
        let take = |i: usize| -> Result<f64> {
            cols[i]
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("slice CSV line {}: {e}", lineno + 1)))
        };
        out.push([
            Complex64::new(take(0)?, take(1)?),
            Complex64::new(take(2)?, take(3)?),
        ]);
    }
    Ok(out)
}

/// Singular-locus CSV of the whole set.
pub fn singular_csv(set: &LeviFlatSet) -> String {
    let cells = crate::family::collate_singular(set);
    let mut s = String::from("t,re_zeta,im_zeta,abs_disc\n");
    for c in cells {
        s.push_str(&format!(
            "{},{},{},{}\n",
            fmt_f64(c.t),
            fmt_f64(c.zeta.re),
            fmt_f64(c.zeta.im),
            fmt_f64(c.disc_abs)
        ));
    }
    s
}

/// Sweep manifest: everything the extension stage needs to rebuild state.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SweepManifest {
    pub t_grid: Vec<f64>,
    pub sign: i8,
    pub grid: crate::geometry::GridSpec,
    pub moment_residuals: Vec<f64>,
    pub stokes_residuals: Vec<f64>,
    pub mass: Vec<f64>,
    pub mass_bounds: Vec<f64>,
    pub continuity: Vec<f64>,
    pub slice_files: Vec<String>,
    pub config: crate::config::RunConfig,
    pub input: FamilyInput,
}

/// Write the sweep export directory: manifest.json, slice_<i>.csv,
/// singular.csv.
pub fn write_sweep_dir(
    dir: &Path,
    set: &LeviFlatSet,
    cfg: &crate::config::RunConfig,
    input: &FamilyInput,
) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut slice_files = Vec::new();
    for i in 0..set.slices.len() {
        let name = format!("slice_{i}.csv");
        let mut f = std::fs::File::create(dir.join(&name))?;
        f.write_all(slice_csv(set, i).as_bytes())?;
        slice_files.push(name);
    }
    let manifest = SweepManifest {
        t_grid: set.t_grid.clone(),
        sign: set.sign,
        grid: set.grid,
        moment_residuals: set.moment_residuals.clone(),
        stokes_residuals: set.slices.iter().map(|s| s.stokes_residual).collect(),
        mass: set.slices.iter().map(|s| s.mass).collect(),
        mass_bounds: set.slices.iter().map(|s| s.mass_bound).collect(),
        continuity: set.continuity.clone(),
        slice_files,
        config: cfg.clone(),
        input: input.clone(),
    };
    std::fs::File::create(dir.join("manifest.json"))?
        .write_all(to_json_17(&manifest)?.as_bytes())?;
    std::fs::File::create(dir.join("singular.csv"))?.write_all(singular_csv(set).as_bytes())?;
    Ok(())
}

pub fn read_manifest(dir: &Path) -> Result<SweepManifest> {
    let text = std::fs::read_to_string(dir.join("manifest.json"))?;
    serde_json::from_str(&text).map_err(|e| {
        Error::Parse(format!(
            "manifest.json invalid at line {}, column {}: {e}",
            e.line(),
            e.column()
        ))
    })
}

/// Family input equivalent to the built-in fixtures, for CLI examples.
pub fn family_input_from_curves(t_grid: Vec<f64>, curves: Vec<(f64, &ParamCurve)>) -> FamilyInput {
    let mut entries = Vec::new();
    for (t, curve) in curves {
        let spec = curve.source.as_ref().expect("fixture curves carry specs");
        let comp = |cs: &ComponentSpec| -> ComponentInput {
            ComponentInput {
                coeffs: cs
                    .terms
                    .iter()
                    .map(|(k, c)| (k.to_string(), CoeffValue::Const([c.re, c.im])))
                    .collect(),
            }
        };
        entries.push(CurveInput {
            t,
            cover: spec.cover,
            z1: comp(&spec.z1),
            z2: comp(&spec.z2),
            orientation: spec.orientation,
        });
    }
    FamilyInput {
        n: 1,
        t_grid,
        curves: entries,
        point_slices: Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_family_with_tpoly() {
        let doc = r#"{
            "n": 1,
            "tGrid": [-0.5, 0.0, 0.5],
            "curves": [
                {"t": -0.5, "cover": 2,
                 "z1": {"coeffs": {"0": [[0,0],[1,0]], "2": [1,0]}},
                 "z2": {"coeffs": {"1": [1,0]}}},
                {"t": 0.0, "cover": 2,
                 "z1": {"coeffs": {"0": [[0,0],[1,0]], "2": [1,0]}},
                 "z2": {"coeffs": {"1": [1,0]}}},
                {"t": 0.5, "cover": 2,
                 "z1": {"coeffs": {"0": [[0,0],[1,0]], "2": [1,0]}},
                 "z2": {"coeffs": {"1": [1,0]}}}
            ]
        }"#;
        let input = FamilyInput::parse(doc).unwrap();
        let fam = input.build(64).unwrap();
        assert_eq!(fam.t_grid.len(), 3);
        // z1(theta=0) = t + 1
        assert!((fam.slices[0].curves[0].z1[0] - Complex64::new(0.5, 0.0)).norm() < 1e-12);
        assert!(fam.slices[0].t_deriv.is_some());
    }

    #[test]
    fn parse_rejects_off_grid_entry() {
        let doc = r#"{"n":1,"tGrid":[0.0],"curves":[{"t":0.3,
            "z1":{"coeffs":{"1":[1,0]}},"z2":{"coeffs":{}}}]}"#;
        let input = FamilyInput::parse(doc).unwrap();
        assert!(matches!(input.build(64), Err(Error::Parse(_))));
    }

    #[test]
    fn parse_reports_position() {
        let bad = "{\"n\": 1,\n  \"tGrid\": [0.0\n}";
        match FamilyInput::parse(bad) {
            Err(Error::Parse(msg)) => assert!(msg.contains("line"), "{msg}"),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn defining_function_roundtrip() {
        let doc = r#"{"d1": 2, "d2": 1, "coeffs": [
            {"i": 0, "j": 1, "t_poly": [1]},
            {"i": 2, "j": 0, "t_poly": [-1]},
            {"i": 0, "j": 0, "t_poly": [0, -1]}
        ]}"#;
        let f = DefiningFunctionInput::parse(doc).unwrap().build().unwrap();
        // F = z2 - z1^2 - t at t = 0.3
        let p = f.at(0.3);
        let v = p.eval(Complex64::new(0.5, 0.0), Complex64::new(0.55, 0.0));
        assert!((v - Complex64::new(0.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn json_17_digits() {
        #[derive(Serialize)]
        struct S {
            x: f64,
        }
        let s = to_json_17(&S { x: 1.0 / 3.0 }).unwrap();
        assert!(s.contains("3.3333333333333331e-1"), "{s}");
    }
}
