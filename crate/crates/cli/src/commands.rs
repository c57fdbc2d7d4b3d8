use std::fmt::Write as _;

use serde::Serialize;
use twoquanta::scan::linspace;
use twoquanta::{
    amplitude_conventional, amplitude_time_symmetric, default_field_axes, rotation_symmetry_audit,
    sample_field, scan_detectors_with, ComplexAmplitude, FieldAxes, FieldBlock, Formulation,
    QuadratureConfig, Statistics, TransitionSpec,
};

use crate::{CliError, RunConfig};

/// Reference probabilities reproduced by `paper-suite`.
pub const PAPER_SUITE: [(Statistics, f64); 5] = [
    (Statistics::SingleQuantum, 6.59e-2),
    (Statistics::Distinguishable, 1.33e-2),
    (Statistics::Boson, 6.25e-3),
    (Statistics::Fermion, 7.09e-3),
    (Statistics::FanoBoson, 3.125e-3),
];

#[derive(Serialize)]
struct Complex {
    re: f64,
    im: f64,
}

impl From<&ComplexAmplitude> for Complex {
    fn from(z: &ComplexAmplitude) -> Self {
        Self { re: z.re, im: z.im }
    }
}

#[derive(Serialize)]
struct ProbabilityResult {
    statistics: Statistics,
    probability: f64,
    evaluation_time: f64,
    conventional_probability: f64,
    relative_difference: f64,
    time_symmetric: Vec<Complex>,
    conventional: Vec<Complex>,
}

#[derive(Serialize)]
struct Report<'a, T> {
    result: T,
    config: &'a RunConfig,
}

fn render<T: Serialize>(result: T, cfg: &RunConfig) -> String {
    toml::to_string(&Report {
        result,
        config: cfg,
    })
    .expect("reports are always serializable")
}

fn preamble(out: &mut String, command: &str, cfg: &RunConfig) {
    let _ = writeln!(out, "# twoquanta {command}");
    for line in cfg.to_toml().lines().filter(|l| !l.is_empty()) {
        let _ = writeln!(out, "# {line}");
    }
}

/// TOML record with the time-symmetric and conventional amplitudes.
pub fn probability_report(cfg: &RunConfig) -> Result<String, CliError> {
    let spec = cfg.spec();
    let ts = amplitude_time_symmetric(&spec, cfg.time(), &cfg.quadrature)?;
    let conv = amplitude_conventional(&spec, &cfg.quadrature)?;
    let (p, pc) = (ts.probability(), conv.probability());
    let scale = p.abs().max(pc.abs());
    let result = ProbabilityResult {
        statistics: spec.statistics,
        probability: p,
        evaluation_time: cfg.time(),
        conventional_probability: pc,
        relative_difference: if scale > 0.0 {
            (p - pc).abs() / scale
        } else {
            0.0
        },
        time_symmetric: ts.channels.iter().map(Complex::from).collect(),
        conventional: conv.channels.iter().map(Complex::from).collect(),
    };
    Ok(render(result, cfg))
}

/// Probability matrix: header row of x_c values, first column of x_d values.
pub fn scan_csv(cfg: &RunConfig) -> Result<String, CliError> {
    let spec = cfg.spec();
    let grid = scan_detectors_with(
        &spec,
        &cfg.grid(),
        Formulation::TimeSymmetric { time: cfg.time() },
        &cfg.quadrature,
    )?;
    let grid = if cfg.scan.normalize {
        grid.normalized()
    } else {
        grid
    };
    let mut out = String::new();
    preamble(&mut out, "scan", cfg);
    out.push_str("x_d\\x_c");
    for x in &grid.xc {
        let _ = write!(out, ",{x}");
    }
    out.push('\n');
    for (j, y) in grid.xd.iter().enumerate() {
        let _ = write!(out, "{y}");
        for i in 0..grid.xc.len() {
            let _ = write!(out, ",{}", grid.get(i, j));
        }
        out.push('\n');
    }
    Ok(out)
}

fn field_axes(cfg: &RunConfig, spec: &TransitionSpec) -> FieldAxes {
    let f = &cfg.field;
    match f.x_range {
        Some([lo, hi]) => FieldAxes {
            x: vec![linspace(lo, hi, f.n_space); spec.statistics.quanta()],
            t: linspace(spec.t_i(), spec.t_f(), f.n_time),
        },
        None => default_field_axes(spec, f.n_space, f.n_time),
    }
}

fn field(cfg: &RunConfig) -> Result<FieldBlock, CliError> {
    let spec = cfg.spec();
    let axes = field_axes(cfg, &spec);
    Ok(sample_field(
        &spec,
        &axes,
        cfg.field.normalize,
        &cfg.quadrature,
    )?)
}

/// Long-format density samples: coordinates, then real and imaginary parts.
pub fn field_csv(cfg: &RunConfig) -> Result<String, CliError> {
    let block = field(cfg)?;
    let mut out = String::new();
    preamble(&mut out, "field", cfg);
    let _ = writeln!(out, "# scale = {}", block.scale);
    let axes = &block.axes;
    if axes.x.len() == 1 {
        out.push_str("t,x,re,im\n");
        for (it, t) in axes.t.iter().enumerate() {
            for (i, x) in axes.x[0].iter().enumerate() {
                let v = block.get(it, &[i]);
                let _ = writeln!(out, "{t},{x},{},{}", v.re, v.im);
            }
        }
    } else {
        out.push_str("t,x1,x2,re,im\n");
        for (it, t) in axes.t.iter().enumerate() {
            for (i, x1) in axes.x[0].iter().enumerate() {
                for (j, x2) in axes.x[1].iter().enumerate() {
                    let v = block.get(it, &[i, j]);
                    let _ = writeln!(out, "{t},{x1},{x2},{},{}", v.re, v.im);
                }
            }
        }
    }
    Ok(out)
}

#[derive(Serialize)]
struct AuditResult {
    statistics: Statistics,
    deviation: f64,
    field_max: f64,
    relative_deviation: f64,
    tolerance: f64,
    passes: bool,
    rotation_center: f64,
    n_space: usize,
    n_time: usize,
}

/// Samples the field and reports its deviation from 180° rotation symmetry.
pub fn audit_report(cfg: &RunConfig) -> Result<String, CliError> {
    let block = field(cfg)?;
    let deviation = rotation_symmetry_audit(&block)?;
    let field_max = block.max_abs();
    let result = AuditResult {
        statistics: block.spec.statistics,
        deviation,
        field_max,
        relative_deviation: if field_max > 0.0 {
            deviation / field_max
        } else {
            0.0
        },
        tolerance: cfg.audit.tolerance,
        passes: deviation < cfg.audit.tolerance,
        rotation_center: twoquanta::scan::rotation_center(&block.spec),
        n_space: block.axes.x[0].len(),
        n_time: block.axes.t.len(),
    };
    Ok(render(result, cfg))
}

/// The five reference transitions, computed with the configured quadrature.
pub fn paper_suite(q: &QuadratureConfig) -> Result<String, CliError> {
    let mut out = String::new();
    let _ = writeln!(out, "# twoquanta paper-suite");
    let quad = toml::to_string(q).expect("quadrature config is serializable");
    for line in quad.lines() {
        let _ = writeln!(out, "# {line}");
    }
    out.push_str("statistics,reference,computed,relative_error\n");
    for (st, reference) in PAPER_SUITE {
        let spec = match st {
            Statistics::SingleQuantum => TransitionSpec::paper_single(),
            _ => TransitionSpec::paper_two_quanta(st),
        };
        let p = twoquanta::probability(&spec, q)?;
        let _ = writeln!(
            out,
            "{st},{reference},{p},{}",
            (p - reference).abs() / reference
        );
    }
    Ok(out)
}
