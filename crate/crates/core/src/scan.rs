//! Detector-position probability grids, sampled amplitude-density fields,
//! and the 180° rotation audit of those fields.

use crate::exec::{map_indexed, ExecMode};
use crate::quadrature::{Interval, QuadratureConfig};
use crate::transitions::{
    amplitude, amplitude_time_symmetric, build_density, AmplitudeDensity, Formulation, Statistics,
    TransitionError, TransitionSpec,
};
use crate::wavepacket::{ComplexAmplitude, GaussianPacket, Role, SpacetimeEvent};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScanError {
    #[error(transparent)]
    Transition(#[from] TransitionError),
    #[error("grid cell ({i}, {j}) at x_c = {x_c}, x_d = {x_d}: {source}")]
    Cell {
        i: usize,
        j: usize,
        x_c: f64,
        x_d: f64,
        source: TransitionError,
    },
    #[error("detector scans need two quanta, got {0}")]
    NotTwoQuanta(Statistics),
    #[error("grid needs at least 2 points per axis, got {nx}×{ny}")]
    GridTooSmall { nx: usize, ny: usize },
    #[error("{statistics} fields need {expected} spatial axes, got {got}")]
    AxesMismatch {
        statistics: Statistics,
        expected: usize,
        got: usize,
    },
    #[error("field axes must be non-empty and finite")]
    EmptyAxis,
    #[error("lattice time {t} is outside [{t_i}, {t_f}]")]
    TimeOutsideTransition { t: f64, t_i: f64, t_f: f64 },
    #[error("lattice is not symmetric about the rotation centre along {axis}")]
    LatticeNotSymmetric { axis: &'static str },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub xc_range: Interval,
    pub xd_range: Interval,
    pub nx: usize,
    pub ny: usize,
}

impl Default for GridSpec {
    /// x_c, x_d ∈ [−20, 20] on 81×81 points.
    fn default() -> Self {
        let r = Interval::new(-20.0, 20.0).expect("static interval");
        Self {
            xc_range: r,
            xd_range: r,
            nx: 81,
            ny: 81,
        }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<(), ScanError> {
        if self.nx < 2 || self.ny < 2 {
            return Err(ScanError::GridTooSmall {
                nx: self.nx,
                ny: self.ny,
            });
        }
        Ok(())
    }

    pub fn xc_values(&self) -> Vec<f64> {
        linspace(self.xc_range.lo(), self.xc_range.hi(), self.nx)
    }

    pub fn xd_values(&self) -> Vec<f64> {
        linspace(self.xd_range.lo(), self.xd_range.hi(), self.ny)
    }
}

/// Endpoint-inclusive, evaluated as `lo + (hi − lo)·k/(n − 1)` so that
/// symmetric ranges hit their midpoint exactly.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityGrid {
    pub xc: Vec<f64>,
    pub xd: Vec<f64>,
    /// Row-major by x_c: `p[i * xd.len() + j]` is the cell (xc[i], xd[j]).
    pub p: Vec<f64>,
    pub statistics: Statistics,
    pub normalized: bool,
}

impl ProbabilityGrid {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.p[i * self.xd.len() + j]
    }

    pub fn max(&self) -> f64 {
        self.p.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Index of the first maximal cell.
    pub fn argmax(&self) -> (usize, usize) {
        let m = self.max();
        let k = self.p.iter().position(|&v| v == m).unwrap_or(0);
        (k / self.xd.len(), k % self.xd.len())
    }

    /// Divides every cell by the grid maximum. A zero grid is left as is.
    pub fn normalized(&self) -> ProbabilityGrid {
        let m = self.max();
        let p = if m > 0.0 {
            self.p.iter().map(|v| v / m).collect()
        } else {
            self.p.clone()
        };
        ProbabilityGrid {
            p,
            normalized: true,
            ..self.clone()
        }
    }
}

/// Time-symmetric probability at each detector pair, evaluated at the
/// template's default time.
pub fn scan_detectors(
    template: &TransitionSpec,
    grid: &GridSpec,
    q: &QuadratureConfig,
) -> Result<ProbabilityGrid, ScanError> {
    scan_detectors_with(
        template,
        grid,
        Formulation::TimeSymmetric {
            time: template.default_time(),
        },
        q,
    )
}

pub fn scan_detectors_with(
    template: &TransitionSpec,
    grid: &GridSpec,
    formulation: Formulation,
    q: &QuadratureConfig,
) -> Result<ProbabilityGrid, ScanError> {
    if template.statistics.quanta() != 2 {
        return Err(ScanError::NotTwoQuanta(template.statistics));
    }
    grid.validate()?;
    template.validate()?;
    let xc = grid.xc_values();
    let xd = grid.xd_values();
    let ny = xd.len();
    // cells are the parallel unit; each cell's quadrature runs inline
    let inner = q.with_exec(ExecMode::Sequential);
    let cells = map_indexed(xc.len() * ny, q.exec, |k| {
        let (i, j) = (k / ny, k % ny);
        let spec = template.with_detectors(&[xc[i], xd[j]]);
        amplitude(&spec, formulation, &inner)
            .map(|a| a.probability())
            .map_err(|source| ScanError::Cell {
                i,
                j,
                x_c: xc[i],
                x_d: xd[j],
                source,
            })
    });
    let p = cells.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(ProbabilityGrid {
        xc,
        xd,
        p,
        statistics: template.statistics,
        normalized: false,
    })
}

/// Coordinate vectors of a field lattice: one spatial axis per quantum plus
/// time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldAxes {
    pub x: Vec<Vec<f64>>,
    pub t: Vec<f64>,
}

impl FieldAxes {
    pub fn len(&self) -> usize {
        self.t.len() * self.x.iter().map(Vec::len).product::<usize>()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldBlock {
    pub axes: FieldAxes,
    /// Time outermost, then x1, then x2:
    /// `values[(it * n1 + i1) * n2 + i2]`.
    pub values: Vec<ComplexAmplitude>,
    pub spec: TransitionSpec,
    /// Factor the raw density was divided by (|A|, or 1).
    pub scale: f64,
}

impl FieldBlock {
    pub fn index(&self, it: usize, ix: &[usize]) -> usize {
        let mut k = it;
        for (axis, &i) in self.axes.x.iter().zip(ix) {
            k = k * axis.len() + i;
        }
        k
    }

    pub fn get(&self, it: usize, ix: &[usize]) -> ComplexAmplitude {
        self.values[self.index(it, ix)]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Spatial centre the 180° rotation is taken about: the midpoint of the
/// source and detector positions (the mean of all four for two quanta).
pub fn rotation_center(spec: &TransitionSpec) -> f64 {
    let all: Vec<f64> = spec
        .sources
        .iter()
        .chain(&spec.detectors)
        .map(|e| e.position)
        .collect();
    all.iter().sum::<f64>() / all.len() as f64
}

/// Lattice symmetric about the rotation centre: each spatial axis covers
/// the furthest event plus three spreads at mid-transition, and time spans
/// `[t_i, t_f]`.
pub fn default_field_axes(spec: &TransitionSpec, n_space: usize, n_time: usize) -> FieldAxes {
    let c = rotation_center(spec);
    let t_mid = 0.5 * (spec.t_i() + spec.t_f());
    let probe = GaussianPacket::new(SpacetimeEvent::new(0.0, spec.t_i()), spec.width, Role::Ket)
        .map(|p| p.density_sigma(t_mid))
        .unwrap_or(1.0);
    let reach = spec
        .sources
        .iter()
        .chain(&spec.detectors)
        .map(|e| (e.position - c).abs())
        .fold(0.0, f64::max);
    let half = reach + 3.0 * probe;
    let axis = linspace(c - half, c + half, n_space);
    FieldAxes {
        x: vec![axis; spec.statistics.quanta()],
        t: linspace(spec.t_i(), spec.t_f(), n_time),
    }
}

/// Samples the amplitude density on a lattice. Distinguishable quanta are
/// sampled on their first path permutation. With `normalize`, the density
/// is divided by |A| so that it integrates to a unit-probability transition.
pub fn sample_field(
    spec: &TransitionSpec,
    axes: &FieldAxes,
    normalize: bool,
    q: &QuadratureConfig,
) -> Result<FieldBlock, ScanError> {
    let densities = build_density(spec)?;
    let n = spec.statistics.quanta();
    if axes.x.len() != n {
        return Err(ScanError::AxesMismatch {
            statistics: spec.statistics,
            expected: n,
            got: axes.x.len(),
        });
    }
    if axes.t.is_empty() || axes.x.iter().any(Vec::is_empty) {
        return Err(ScanError::EmptyAxis);
    }
    if axes
        .t
        .iter()
        .chain(axes.x.iter().flatten())
        .any(|v| !v.is_finite())
    {
        return Err(ScanError::EmptyAxis);
    }
    if let Some(&t) = axes.t.iter().find(|&&t| !spec.contains_time(t)) {
        return Err(ScanError::TimeOutsideTransition {
            t,
            t_i: spec.t_i(),
            t_f: spec.t_f(),
        });
    }
    let density = &densities.channels[0];
    let scale = if normalize {
        // channel 0 is the sampled density for every statistics
        amplitude_time_symmetric(spec, spec.default_time(), q)?.channels[0].norm()
    } else {
        1.0
    };
    let slices = map_indexed(axes.t.len(), q.exec, |it| {
        sample_slice(density, axes, axes.t[it], scale)
    });
    Ok(FieldBlock {
        axes: axes.clone(),
        values: slices.into_iter().flatten().collect(),
        spec: spec.clone(),
        scale,
    })
}

fn sample_slice(
    d: &AmplitudeDensity,
    axes: &FieldAxes,
    t: f64,
    scale: f64,
) -> Vec<ComplexAmplitude> {
    // factor tables per axis and term
    let tabs: Vec<Vec<Vec<Complex64>>> = (0..axes.x.len())
        .map(|a| {
            d.terms
                .iter()
                .map(|term| {
                    axes.x[a]
                        .iter()
                        .map(|&x| term.factors[a].value(x, t))
                        .collect()
                })
                .collect()
        })
        .collect();
    let signs: Vec<f64> = d.terms.iter().map(|t| f64::from(t.sign)).collect();
    let norm = d.normalization / scale;
    match axes.x.len() {
        1 => (0..axes.x[0].len())
            .map(|i| {
                let mut s = Complex64::new(0.0, 0.0);
                for (k, sign) in signs.iter().enumerate() {
                    s += *sign * tabs[0][k][i];
                }
                norm * s
            })
            .collect(),
        _ => {
            let (n1, n2) = (axes.x[0].len(), axes.x[1].len());
            let mut out = Vec::with_capacity(n1 * n2);
            for i in 0..n1 {
                for j in 0..n2 {
                    let mut s = Complex64::new(0.0, 0.0);
                    for (k, sign) in signs.iter().enumerate() {
                        s += *sign * tabs[0][k][i] * tabs[1][k][j];
                    }
                    out.push(norm * s);
                }
            }
            out
        }
    }
}

fn mirrored(a: &[f64], b: &[f64], center: f64) -> bool {
    let scale = a
        .iter()
        .chain(b)
        .map(|v| v.abs())
        .fold(center.abs(), f64::max)
        .max(1.0);
    a.len() == b.len()
        && a.iter()
            .zip(b.iter().rev())
            .all(|(x, y)| (x + y - 2.0 * center).abs() <= 1e-9 * scale)
}

/// Largest |ρ(R p) − ρ(p)| over the lattice, where R is the 180° rotation
/// about the transition's centre: (x, t) → (2c − x, 2t_c − t) for one
/// quantum, and the rotation about the axis through (c, c, t_c) along
/// (1, −1, 0), i.e. (x1, x2, t) → (2c − x2, 2c − x1, 2t_c − t), for two.
pub fn rotation_symmetry_audit(block: &FieldBlock) -> Result<f64, ScanError> {
    let spec = &block.spec;
    let c = rotation_center(spec);
    let t_c = 0.5 * (spec.t_i() + spec.t_f());
    let axes = &block.axes;
    if !mirrored(&axes.t, &axes.t, t_c) {
        return Err(ScanError::LatticeNotSymmetric { axis: "t" });
    }
    let nt = axes.t.len();
    let mut worst: f64 = 0.0;
    match axes.x.len() {
        1 => {
            if !mirrored(&axes.x[0], &axes.x[0], c) {
                return Err(ScanError::LatticeNotSymmetric { axis: "x" });
            }
            let n = axes.x[0].len();
            for it in 0..nt {
                for i in 0..n {
                    let d = block.get(it, &[i]) - block.get(nt - 1 - it, &[n - 1 - i]);
                    worst = worst.max(d.norm());
                }
            }
        }
        _ => {
            if !mirrored(&axes.x[0], &axes.x[1], c) {
                return Err(ScanError::LatticeNotSymmetric { axis: "x1/x2" });
            }
            let n = axes.x[0].len();
            for it in 0..nt {
                for i in 0..n {
                    for j in 0..n {
                        let d = block.get(it, &[i, j])
                            - block.get(nt - 1 - it, &[n - 1 - j, n - 1 - i]);
                        worst = worst.max(d.norm());
                    }
                }
            }
        }
    }
    Ok(worst)
}
