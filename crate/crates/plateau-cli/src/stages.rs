//! Stage implementations behind the subcommands. Every stage writes its
//! machine-readable report under the output directory and prints one summary
//! line per checked quantity.

use num_complex::Complex64;
use plateau_core::config::RunConfig;
use plateau_core::error::Error;
use plateau_core::family::{self, LeviFlatSet};
use plateau_core::formats::{self, FamilyInput};
use plateau_core::geometry::CurveFamily;
use plateau_core::green::{
    cauchy_datum, dbar_solve, dbar_test_bumps, distributional_pairing, exterior_targets,
    green_moment_test, harmonic_extend, harmonicity_defect, interior_targets, jump_check,
    upsample_datum, Bump, CurveDiscretization, DefiningFunction,
};
use plateau_core::moments::{
    build_moment_table, family_moment_direct, family_moment_poincare, moment_residual,
    HolomorphicTestForm,
};
use serde::Serialize;
use std::path::Path;

/// A stage failure carrying its CI exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn new(code: u8, message: impl Into<String>) -> Failure {
        Failure {
            code,
            message: message.into(),
        }
    }

    pub fn input(message: impl Into<String>) -> Failure {
        Failure::new(2, message)
    }

    pub fn check(message: impl Into<String>) -> Failure {
        Failure::new(1, message)
    }
}

/// Exit-code contract: every documented failure mode maps to exactly one
/// code.
pub fn classify(err: &Error) -> u8 {
    match err {
        Error::AtParameter { source, .. } => classify(source),
        Error::Parse(_) | Error::Io(_) | Error::InvalidSpec(_) => 2,
        Error::MomentViolation { .. }
        | Error::BoundaryMismatch { .. }
        | Error::OrientationInconsistency(_) => 1,
        Error::NonPositiveChain { .. } => 4,
        Error::ObstructedExtension { .. } => 5,
        _ => 3,
    }
}

fn from_core(err: Error) -> Failure {
    Failure::new(classify(&err), err.to_string())
}

fn read_family(path: &Path, cfg: &RunConfig) -> Result<(FamilyInput, CurveFamily), Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    let input = FamilyInput::parse(&text).map_err(from_core)?;
    let fam = input.build(cfg.quadrature_n).map_err(from_core)?;
    Ok((input, fam))
}

fn write_out(dir: &Path, name: &str, content: &str) -> Result<(), Failure> {
    std::fs::create_dir_all(dir)
        .map_err(|e| Failure::input(format!("cannot create {}: {e}", dir.display())))?;
    std::fs::write(dir.join(name), content)
        .map_err(|e| Failure::input(format!("cannot write {name}: {e}")))
}

#[derive(Serialize)]
struct MomentReport {
    max_residual: f64,
    tolerance: f64,
    pass: bool,
    per_t: Vec<MomentRow>,
    form_count: usize,
}

#[derive(Serialize)]
struct MomentRow {
    t: f64,
    transverse: bool,
    table_residual: f64,
    max_family_integral: f64,
}

fn moment_rows(fam: &CurveFamily, cfg: &RunConfig) -> Result<(Vec<MomentRow>, usize), Failure> {
    let forms = HolomorphicTestForm::battery(3);
    let mut rows = Vec::new();
    for (i, &t) in fam.t_grid.iter().enumerate() {
        let slice = &fam.slices[i];
        let mut table_residual = 0.0;
        if !slice.is_empty() {
            let planar: Vec<_> = slice
                .curves
                .iter()
                .map(plateau_core::geometry::project_z1)
                .collect::<Result<_, _>>()
                .map_err(from_core)?;
            let cutoff = cfg
                .dist_to_curve_cutoff
                .unwrap_or_else(|| plateau_core::geometry::default_cutoff(&slice.curves));
            let map = plateau_core::geometry::classify_components(&planar, cfg.zeta_grid, cutoff)
                .map_err(|e| from_core(e.at_parameter(t)))?;
            let maxwind = map
                .winding
                .iter()
                .map(|&w| w.max(0) as usize)
                .max()
                .unwrap_or(0);
            let kmax = cfg.kmax.unwrap_or(2 * maxwind + 2).max(maxwind.max(1));
            let table = build_moment_table(&slice.curves, &map, kmax)
                .map_err(|e| from_core(e.at_parameter(t)))?;
            table_residual = moment_residual(&table);
        }
        let mut max_i = 0.0f64;
        for h in &forms {
            let v = match family_moment_direct(fam, h, t) {
                Ok(v) => v,
                Err(Error::UseAlternative { .. }) => {
                    family_moment_poincare(fam, h, t).map_err(from_core)?
                }
                Err(e) => return Err(from_core(e.at_parameter(t))),
            };
            max_i = max_i.max(v.norm());
        }
        rows.push(MomentRow {
            t,
            transverse: fam.transverse[i],
            table_residual,
            max_family_integral: max_i,
        });
    }
    Ok((rows, forms.len()))
}

pub fn check_moments(input: &Path, out: &Path, cfg: &RunConfig) -> Result<(), Failure> {
    let (_, fam) = read_family(input, cfg)?;
    let (rows, form_count) = moment_rows(&fam, cfg)?;
    let max_residual = rows
        .iter()
        .map(|r| r.table_residual.max(r.max_family_integral))
        .fold(0.0, f64::max);
    let pass = max_residual < cfg.tolerances.moment;
    let report = MomentReport {
        max_residual,
        tolerance: cfg.tolerances.moment,
        pass,
        per_t: rows,
        form_count,
    };
    write_out(
        out,
        "check_moments_report.json",
        &formats::to_json_17(&report).map_err(from_core)?,
    )?;
    println!(
        "check-moments: max residual {max_residual:.3e} (tol {:.1e}) -> {}",
        cfg.tolerances.moment,
        if pass { "pass" } else { "FAIL" }
    );
    if pass {
        Ok(())
    } else {
        let worst = report
            .per_t
            .iter()
            .max_by(|a, b| {
                (a.table_residual.max(a.max_family_integral))
                    .partial_cmp(&b.table_residual.max(b.max_family_integral))
                    .unwrap()
            })
            .map(|r| r.t)
            .unwrap_or(f64::NAN);
        Err(Failure::check(format!(
            "moment condition violated, worst at t = {worst}"
        )))
    }
}

fn gate_moments(fam: &CurveFamily, cfg: &RunConfig, force: bool) -> Result<(), Failure> {
    let (rows, _) = moment_rows(fam, cfg)?;
    let max = rows
        .iter()
        .map(|r| r.table_residual.max(r.max_family_integral))
        .fold(0.0, f64::max);
    if max >= cfg.tolerances.moment && !force {
        return Err(Failure::check(format!(
            "moment gate failed: residual {max:.3e} >= {:.1e} (use --force to proceed)",
            cfg.tolerances.moment
        )));
    }
    Ok(())
}

fn run_sweep(fam: &CurveFamily, cfg: &RunConfig) -> Result<LeviFlatSet, Failure> {
    family::sweep(fam, &cfg.sweep_config()).map_err(from_core)
}

fn sweep_gate(set: &LeviFlatSet, cfg: &RunConfig) -> Result<(), Failure> {
    let max_stokes = set.max_stokes_residual();
    if max_stokes >= cfg.tolerances.stokes {
        return Err(Failure::check(format!(
            "Stokes residual {max_stokes:.3e} >= {:.1e}",
            cfg.tolerances.stokes
        )));
    }
    Ok(())
}

pub fn sweep(input: &Path, out: &Path, cfg: &RunConfig, force: bool) -> Result<(), Failure> {
    let (raw, fam) = read_family(input, cfg)?;
    gate_moments(&fam, cfg, force)?;
    let set = run_sweep(&fam, cfg)?;
    formats::write_sweep_dir(out, &set, cfg, &raw).map_err(from_core)?;
    let (ratio, _) = family::continuity_check(&set, cfg.lipschitz_bound);
    println!(
        "sweep: {} slices, sign {}, max stokes {:.3e}, continuity ratio {:.3e}",
        set.slices.len(),
        set.sign,
        set.max_stokes_residual(),
        ratio
    );
    sweep_gate(&set, cfg)
}

pub fn reconstruct_one(
    input: &Path,
    t_index: usize,
    out: &Path,
    cfg: &RunConfig,
    force: bool,
) -> Result<(), Failure> {
    let (raw, fam) = read_family(input, cfg)?;
    if t_index >= fam.t_grid.len() {
        return Err(Failure::input(format!(
            "t-index {t_index} outside the {}-point grid",
            fam.t_grid.len()
        )));
    }
    gate_moments(&fam, cfg, force)?;
    // single-slice family view so the sweep machinery is reused verbatim
    let single = CurveFamily::new(
        vec![fam.t_grid[t_index]],
        vec![fam.slices[t_index].clone()],
    )
    .map_err(from_core)?;
    let set = run_sweep(&single, cfg)?;
    std::fs::create_dir_all(out)
        .map_err(|e| Failure::input(format!("cannot create {}: {e}", out.display())))?;
    write_out(out, "slice_0.csv", &formats::slice_csv(&set, 0))?;
    write_out(
        out,
        "slice_0.json",
        &formats::chain_slice_json(&set, 0).map_err(from_core)?,
    )?;
    write_out(out, "singular.csv", &formats::singular_csv(&set))?;
    formats::write_sweep_dir(&out.join("sweep"), &set, cfg, &raw).map_err(from_core)?;
    println!(
        "reconstruct: t = {}, stokes {:.3e}, mass {:.6}",
        set.t_grid[0], set.slices[0].stokes_residual, set.slices[0].mass
    );
    sweep_gate(&set, cfg)
}

#[derive(Serialize)]
struct GreenReport {
    nodes: usize,
    pairing: Vec<PairingRow>,
    harmonicity: Vec<f64>,
    dbar_error: Vec<f64>,
    pass: bool,
}

#[derive(Serialize)]
struct PairingRow {
    got: [f64; 2],
    want: f64,
    error: f64,
}

fn parse_center(text: &str) -> Result<Complex64, Failure> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err(Failure::input("center must be \"re,im\""));
    }
    let re = parts[0]
        .trim()
        .parse::<f64>()
        .map_err(|e| Failure::input(format!("center: {e}")))?;
    let im = parts[1]
        .trim()
        .parse::<f64>()
        .map_err(|e| Failure::input(format!("center: {e}")))?;
    Ok(Complex64::new(re, im))
}

fn read_defining(path: &Path) -> Result<DefiningFunction, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    formats::DefiningFunctionInput::parse(&text)
        .and_then(|d| d.build())
        .map_err(from_core)
}

pub fn green_selftest(
    f_path: &Path,
    t: f64,
    center: &str,
    radius: f64,
    nodes: Option<usize>,
    out: &Path,
    cfg: &RunConfig,
) -> Result<(), Failure> {
    let f = read_defining(f_path)?;
    let center = parse_center(center)?;
    let n = nodes.unwrap_or(cfg.green_nodes);
    let disc = CurveDiscretization::graph_domain(&f, t, center, radius, n).map_err(from_core)?;

    // distributional identity at a pole near the center
    let z_star = center + Complex64::new(0.045 * radius, 0.045 * radius);
    let scale = radius / 1.1;
    let mut pairing = Vec::new();
    for bump in [
        Bump::radial(center + Complex64::new(0.1, 0.2) * scale, 0.55 * scale),
        Bump::radial(center + Complex64::new(-0.3, 0.0) * scale, 0.65 * scale),
        Bump::radial(center + Complex64::new(0.0, 0.25) * scale, 0.5 * scale),
    ] {
        let got = distributional_pairing(&disc, z_star, &bump).map_err(from_core)?;
        let want = bump.chi(z_star).re;
        pairing.push(PairingRow {
            got: [got.re, got.im],
            want,
            error: (got - want).norm(),
        });
    }

    let mut harmonicity = Vec::new();
    for probe in [
        center + Complex64::new(0.56, 0.0) * scale,
        center + Complex64::new(-0.41, 0.36) * scale,
        center + Complex64::new(0.05, -0.55) * scale,
    ] {
        harmonicity
            .push(harmonicity_defect(&disc, z_star, probe, 0.41 * scale, 64).map_err(from_core)?);
    }

    // d-bar recovery of the bump battery, similarity-scaled by the domain
    // radius so the recovery error matches its unit-disk calibration
    let mut dbar_error = Vec::new();
    for bump in dbar_test_bumps() {
        let mut q = bump.q.clone();
        let mut lam = 1.0;
        for c in q.iter_mut() {
            *c = *c / lam;
            lam *= radius;
        }
        let bump = Bump {
            center: center + bump.center * radius,
            s0: bump.s0 * radius * radius,
            q,
        };
        let phi: Vec<Complex64> = disc.zeta.iter().map(|&z| bump.dbar_coeff(z)).collect();
        let sol = dbar_solve(&disc, &phi).map_err(from_core)?;
        let err = disc
            .zeta
            .iter()
            .zip(&sol)
            .map(|(&z, &s)| (s - bump.chi(z)).norm())
            .fold(0.0, f64::max);
        dbar_error.push(err);
    }

    let pass = pairing.iter().all(|p| p.error < 5e-2)
        && harmonicity.iter().all(|&h| h < 1e-3 * 10.0)
        && dbar_error.iter().all(|&e| e < cfg.tolerances.dbar);
    let report = GreenReport {
        nodes: n,
        pairing,
        harmonicity,
        dbar_error,
        pass,
    };
    write_out(
        out,
        "green_report.json",
        &formats::to_json_17(&report).map_err(from_core)?,
    )?;
    println!(
        "green: pairing err {:.3e}, harmonicity {:.3e}, dbar {:.3e} -> {}",
        report
            .pairing
            .iter()
            .map(|p| p.error)
            .fold(0.0f64, f64::max),
        report.harmonicity.iter().cloned().fold(0.0f64, f64::max),
        report.dbar_error.iter().cloned().fold(0.0f64, f64::max),
        if report.pass { "pass" } else { "FAIL" }
    );
    if report.pass {
        Ok(())
    } else {
        Err(Failure::new(3, "green self-test failed"))
    }
}

#[derive(Serialize)]
struct ExtendReport {
    per_slice: Vec<ExtendRow>,
    pass: bool,
}

#[derive(Serialize)]
struct ExtendRow {
    t: f64,
    green_moment_residual: f64,
    jump_residual: f64,
    max_imag: f64,
    interior_count: usize,
    f_vanishing: f64,
}

pub fn extend(
    sweep_dir: &Path,
    f_path: &Path,
    data_path: &Path,
    out: &Path,
    cfg: &RunConfig,
) -> Result<(), Failure> {
    let manifest = formats::read_manifest(sweep_dir).map_err(from_core)?;
    let f = read_defining(f_path)?;
    let data_text = std::fs::read_to_string(data_path)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", data_path.display())))?;
    let data = formats::BoundaryDataInput::parse(&data_text).map_err(from_core)?;
    let fam = manifest
        .input
        .build(manifest.config.quadrature_n)
        .map_err(from_core)?;

    let mut rows = Vec::new();
    let mut csv = String::from("t,re_z1,im_z1,re_z2,im_z2,side,value\n");
    for (i, &t) in fam.t_grid.iter().enumerate() {
        let slice = &fam.slices[i];
        if slice.is_empty() {
            continue;
        }
        let Some(bd) = data.slices.iter().find(|s| (s.t - t).abs() < 1e-12) else {
            continue;
        };
        if slice.curves.len() != 1 || bd.curves.len() != 1 {
            return Err(Failure::new(
                3,
                format!("extension supports single-curve slices (t = {t})"),
            ));
        }
        let curve = &slice.curves[0];
        // chart geometry for the collar domain
        let zmean: Complex64 = curve.z1.iter().sum::<Complex64>() / curve.len() as f64;
        let r_gamma = curve
            .z1
            .iter()
            .map(|&z| (z - zmean).norm())
            .fold(0.0, f64::max);
        let disc = CurveDiscretization::graph_domain(
            &f,
            t,
            zmean,
            r_gamma * cfg.collar_factor,
            cfg.green_nodes,
        )
        .map_err(from_core)?;

        // the defining function must vanish on the reconstructed slice
        let cloud_path = sweep_dir.join(&manifest.slice_files[i]);
        let cloud_text = std::fs::read_to_string(&cloud_path)
            .map_err(|e| Failure::input(format!("cannot read {}: {e}", cloud_path.display())))?;
        let cloud = formats::parse_slice_csv(&cloud_text).map_err(from_core)?;
        let f_vanishing = f.max_abs_on(t, &cloud);
        if f_vanishing > 1e-6 {
            return Err(Failure::new(
                3,
                format!("F does not vanish on the slice at t = {t}: max |F| = {f_vanishing:.3e}"),
            ));
        }

        let datum = cauchy_datum(curve, &bd.curves[0].u, &bd.curves[0].u_prime)
            .map_err(from_core)?;
        let datum_fine = upsample_datum(&datum, 1024).map_err(from_core)?;

        let ext_margin = 0.25 * (cfg.collar_factor - 1.0) * r_gamma;
        let exterior =
            exterior_targets(&disc, &datum_fine.curve, ext_margin, 24).map_err(from_core)?;
        let gm = green_moment_test(&disc, &datum_fine, &exterior).map_err(from_core)?;
        if gm >= cfg.tolerances.green_moment {
            return Err(Failure::new(
                5,
                format!(
                    "obstructed extension at t = {t}: Green moment residual {gm:.3e} >= {:.1e}",
                    cfg.tolerances.green_moment
                ),
            ));
        }

        let interior =
            interior_targets(&disc, &datum_fine.curve, 0.1 * r_gamma, 48).map_err(from_core)?;
        let got = harmonic_extend(&disc, &datum_fine, &interior).map_err(from_core)?;
        for (tgt, v) in interior.iter().zip(&got.values) {
            csv.push_str(&format!(
                "{},{},{},{},{},+,{}\n",
                formats::fmt_f64(t),
                formats::fmt_f64(tgt[0].re),
                formats::fmt_f64(tgt[0].im),
                formats::fmt_f64(tgt[1].re),
                formats::fmt_f64(tgt[1].im),
                formats::fmt_f64(*v)
            ));
        }
        let got_out = harmonic_extend(&disc, &datum_fine, &exterior).map_err(from_core)?;
        for (tgt, v) in exterior.iter().zip(&got_out.values) {
            csv.push_str(&format!(
                "{},{},{},{},{},-,{}\n",
                formats::fmt_f64(t),
                formats::fmt_f64(tgt[0].re),
                formats::fmt_f64(tgt[0].im),
                formats::fmt_f64(tgt[1].re),
                formats::fmt_f64(tgt[1].im),
                formats::fmt_f64(*v)
            ));
        }
        let jump = jump_check(
            &disc,
            &datum_fine,
            24,
            (0.04 * r_gamma, 0.02 * r_gamma),
        )
        .map_err(from_core)?;
        rows.push(ExtendRow {
            t,
            green_moment_residual: gm,
            jump_residual: jump.residual,
            max_imag: got.max_imag.max(got_out.max_imag),
            interior_count: interior.len(),
            f_vanishing,
        });
        println!(
            "extend: t = {t}, green-moment {gm:.3e}, jump {:.3e}",
            jump.residual
        );
    }
    if rows.is_empty() {
        return Err(Failure::input(
            "no slice with matching boundary data found in the sweep",
        ));
    }
    let pass = rows
        .iter()
        .all(|r| r.jump_residual < cfg.tolerances.jump);
    let report = ExtendReport {
        per_slice: rows,
        pass,
    };
    write_out(
        out,
        "extend_report.json",
        &formats::to_json_17(&report).map_err(from_core)?,
    )?;
    write_out(out, "extension.csv", &csv)?;
    if pass {
        Ok(())
    } else {
        Err(Failure::check("jump residual above tolerance"))
    }
}

pub fn validate(
    input: &Path,
    stage_sel: Option<&str>,
    cfg: &RunConfig,
    force: bool,
) -> Result<(), Failure> {
    let selected: Vec<String> = stage_sel
        .map(|s| s.split(',').map(|x| x.trim().to_string()).collect())
        .or_else(|| cfg.stages.clone())
        .unwrap_or_else(|| {
            vec![
                "moments".to_string(),
                "reconstruct".to_string(),
                "continuity".to_string(),
            ]
        });
    let (_, fam) = read_family(input, cfg)?;
    let mut set = None;
    for stage in &selected {
        match stage.as_str() {
            "moments" => {
                gate_moments(&fam, cfg, force)?;
                println!("validate: moments pass");
            }
            "reconstruct" => {
                let s = run_sweep(&fam, cfg)?;
                sweep_gate(&s, cfg)?;
                println!("validate: reconstruct pass ({} slices)", s.slices.len());
                set = Some(s);
            }
            "continuity" => {
                let s = match set.take() {
                    Some(s) => s,
                    None => run_sweep(&fam, cfg)?,
                };
                let bound = cfg
                    .lipschitz_bound
                    .or_else(|| family::default_lipschitz_bound(&fam));
                let (ratio, pass) = family::continuity_check(&s, bound);
                println!("validate: continuity ratio {ratio:.3e} -> {}", if pass { "pass" } else { "FAIL" });
                if !pass {
                    return Err(Failure::check(format!(
                        "continuity ratio {ratio:.3e} above bound {:?}",
                        bound
                    )));
                }
                set = Some(s);
            }
            other => {
                return Err(Failure::input(format!("unknown stage '{other}'")));
            }
        }
    }
    Ok(())
}
