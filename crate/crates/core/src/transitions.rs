//! Transition amplitude densities and amplitudes for one and two quanta.
//!
//! A transition is described by sources emitting at `t_i` and detectors
//! absorbing at `t_f`. The time-symmetric amplitude integrates the density
//! φ*ψ over configuration space at any `t` in `[t_i, t_f]`; the conventional
//! amplitude overlaps the (symmetrized) final and initial wavefunctions at
//! the collapse time `t_f`. Both give the same number.
//!
//! Two quanta have four path permutations. Bosons add them all with `+`,
//! fermions sign each by the parity of the path termini it exchanges,
//! distinguishable quanta add the four probabilities instead of amplitudes,
//! and the two-term Fano account keeps only permutations 1 and 4.
//! Densities with `N` terms are scaled by `1/√N`; for the Fano case that
//! makes its probability exactly half the boson one.

use crate::quadrature::{
    integrate_1d_indexed, integrate_2d_indexed, overlap_window, Interval, QuadratureConfig,
    QuadratureError, Rule,
};
use crate::wavepacket::{ComplexAmplitude, GaussianPacket, Role, SpacetimeEvent};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Statistics {
    SingleQuantum,
    Distinguishable,
    Boson,
    Fermion,
    /// Two-permutation account of intensity interference (permutations 1
    /// and 4 only), normalized by 1/√2.
    FanoBoson,
}

impl Statistics {
    pub const ALL: [Statistics; 5] = [
        Statistics::SingleQuantum,
        Statistics::Distinguishable,
        Statistics::Boson,
        Statistics::Fermion,
        Statistics::FanoBoson,
    ];

    pub fn quanta(self) -> usize {
        match self {
            Statistics::SingleQuantum => 1,
            _ => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Statistics::SingleQuantum => "single-quantum",
            Statistics::Distinguishable => "distinguishable",
            Statistics::Boson => "boson",
            Statistics::Fermion => "fermion",
            Statistics::FanoBoson => "fano-boson",
        }
    }
}

impl fmt::Display for Statistics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Statistics {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Statistics::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| format!("unknown statistics `{s}`"))
    }
}

/// One violated [`TransitionSpec`] invariant.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpecViolation {
    #[error("{statistics} needs {expected} source(s), got {got}")]
    SourceCount {
        statistics: Statistics,
        expected: usize,
        got: usize,
    },
    #[error("{statistics} needs {expected} detector(s), got {got}")]
    DetectorCount {
        statistics: Statistics,
        expected: usize,
        got: usize,
    },
    #[error("all sources must emit at the same time")]
    SourceTimesDiffer,
    #[error("all detectors must absorb at the same time")]
    DetectorTimesDiffer,
    #[error("absorption time {t_f} must be after emission time {t_i}")]
    TimeOrder { t_i: f64, t_f: f64 },
    #[error("width must be positive and finite, got {0}")]
    Width(f64),
    #[error("event coordinates must be finite")]
    NonFinite,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TransitionError {
    #[error("invalid transition: {}", join(.0))]
    InvalidSpec(Vec<SpecViolation>),
    #[error("expected {expected} position coordinate(s), got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("time {t} is outside the transition window [{t_i}, {t_f}]")]
    TimeOutsideTransition { t: f64, t_i: f64, t_f: f64 },
    #[error("quadrature failed for {context}: {source}")]
    Quadrature {
        source: QuadratureError,
        context: String,
    },
}

fn join(v: &[SpecViolation]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionSpec {
    pub sources: Vec<SpacetimeEvent>,
    pub detectors: Vec<SpacetimeEvent>,
    pub statistics: Statistics,
    pub width: f64,
}

impl TransitionSpec {
    pub fn single(x_a: f64, x_c: f64, t_i: f64, t_f: f64) -> Self {
        Self {
            sources: vec![SpacetimeEvent::new(x_a, t_i)],
            detectors: vec![SpacetimeEvent::new(x_c, t_f)],
            statistics: Statistics::SingleQuantum,
            width: 1.0,
        }
    }

    pub fn two_quanta(
        statistics: Statistics,
        sources: [f64; 2],
        detectors: [f64; 2],
        t_i: f64,
        t_f: f64,
    ) -> Self {
        Self {
            sources: sources
                .iter()
                .map(|&x| SpacetimeEvent::new(x, t_i))
                .collect(),
            detectors: detectors
                .iter()
                .map(|&x| SpacetimeEvent::new(x, t_f))
                .collect(),
            statistics,
            width: 1.0,
        }
    }

    /// Sources at ±10, detectors at ±7, emission at 0 and absorption at 60.
    pub fn paper_two_quanta(statistics: Statistics) -> Self {
        Self::two_quanta(statistics, [10.0, -10.0], [7.0, -7.0], 0.0, 60.0)
    }

    /// Source at 10 (t = 0), detector at 7 (t = 60).
    pub fn paper_single() -> Self {
        Self::single(10.0, 7.0, 0.0, 60.0)
    }

    pub fn with_statistics(&self, statistics: Statistics) -> Self {
        Self {
            statistics,
            ..self.clone()
        }
    }

    pub fn with_detectors(&self, positions: &[f64]) -> Self {
        let t_f = self.t_f();
        Self {
            detectors: positions
                .iter()
                .map(|&x| SpacetimeEvent::new(x, t_f))
                .collect(),
            ..self.clone()
        }
    }

    pub fn t_i(&self) -> f64 {
        self.sources.first().map_or(f64::NAN, |e| e.time)
    }

    pub fn t_f(&self) -> f64 {
        self.detectors.first().map_or(f64::NAN, |e| e.time)
    }

    /// Time at which [`probability`] evaluates the time-symmetric amplitude.
    /// Emission time: both integrand factors are narrowest-spread there,
    /// which needs far fewer nodes than the midpoint.
    pub fn default_time(&self) -> f64 {
        self.t_i()
    }

    pub fn contains_time(&self, t: f64) -> bool {
        t >= self.t_i() && t <= self.t_f()
    }

    pub fn validate(&self) -> Result<(), TransitionError> {
        let mut v = Vec::new();
        let n = self.statistics.quanta();
        if self.sources.len() != n {
            v.push(SpecViolation::SourceCount {
                statistics: self.statistics,
                expected: n,
                got: self.sources.len(),
            });
        }
        if self.detectors.len() != n {
            v.push(SpecViolation::DetectorCount {
                statistics: self.statistics,
                expected: n,
                got: self.detectors.len(),
            });
        }
        if self
            .sources
            .iter()
            .chain(&self.detectors)
            .any(|e| !e.is_finite())
        {
            v.push(SpecViolation::NonFinite);
        }
        if self.sources.windows(2).any(|w| w[0].time != w[1].time) {
            v.push(SpecViolation::SourceTimesDiffer);
        }
        if self.detectors.windows(2).any(|w| w[0].time != w[1].time) {
            v.push(SpecViolation::DetectorTimesDiffer);
        }
        if !self.sources.is_empty()
            && !self.detectors.is_empty()
            && self.t_f().partial_cmp(&self.t_i()) != Some(std::cmp::Ordering::Greater)
        {
            v.push(SpecViolation::TimeOrder {
                t_i: self.t_i(),
                t_f: self.t_f(),
            });
        }
        if !(self.width.is_finite() && self.width > 0.0) {
            v.push(SpecViolation::Width(self.width));
        }
        if v.is_empty() {
            Ok(())
        } else {
            Err(TransitionError::InvalidSpec(v))
        }
    }

    fn ket(&self, source: usize) -> GaussianPacket {
        GaussianPacket::new(self.sources[source], self.width, Role::Ket).expect("validated spec")
    }

    fn bra(&self, detector: usize) -> GaussianPacket {
        GaussianPacket::new(self.detectors[detector], self.width, Role::Bra)
            .expect("validated spec")
    }

    fn describe(&self) -> String {
        let xs = |es: &[SpacetimeEvent]| {
            es.iter()
                .map(|e| e.position.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        };
        format!(
            "{} transition, sources [{}] at t={}, detectors [{}] at t={}",
            self.statistics,
            xs(&self.sources),
            self.t_i(),
            xs(&self.detectors),
            self.t_f()
        )
    }
}

/// Assignment of quanta to source→detector paths. `assignment[q]` is the
/// (source, detector) pair followed by quantum `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathPermutation {
    pub assignment: Vec<(usize, usize)>,
    pub sign: i8,
}

impl PathPermutation {
    /// Path termini pairs exchanged relative to the identity assignment
    /// (quantum q from source q to detector q): inversions among the source
    /// ends plus inversions among the detector ends.
    pub fn termini_swaps(assignment: &[(usize, usize)]) -> usize {
        let inversions = |ends: Vec<usize>| {
            let mut n = 0;
            for i in 0..ends.len() {
                for j in i + 1..ends.len() {
                    if ends[i] > ends[j] {
                        n += 1;
                    }
                }
            }
            n
        };
        inversions(assignment.iter().map(|p| p.0).collect())
            + inversions(assignment.iter().map(|p| p.1).collect())
    }
}

/// The four two-quanta permutations in the order
/// (1) q1 a→c, q2 b→d; (2) q2 a→c, q1 b→d; (3) q1 a→d, q2 b→c; (4) q2 a→d, q1 b→c.
pub fn two_quanta_permutations(statistics: Statistics) -> Vec<PathPermutation> {
    let all = [
        vec![(0, 0), (1, 1)],
        vec![(1, 1), (0, 0)],
        vec![(0, 1), (1, 0)],
        vec![(1, 0), (0, 1)],
    ];
    let keep: &[usize] = match statistics {
        Statistics::FanoBoson => &[0, 3],
        _ => &[0, 1, 2, 3],
    };
    keep.iter()
        .map(|&k| {
            let assignment = all[k].clone();
            let sign = match statistics {
                Statistics::Fermion if PathPermutation::termini_swaps(&assignment) % 2 == 1 => -1,
                _ => 1,
            };
            PathPermutation { assignment, sign }
        })
        .collect()
}

/// φ* ψ for one quantum on one path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorPair {
    pub bra: GaussianPacket,
    pub ket: GaussianPacket,
}

impl FactorPair {
    pub fn value(&self, x: f64, t: f64) -> ComplexAmplitude {
        self.bra.evaluate(x, t).conj() * self.ket.evaluate(x, t)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityTerm {
    pub sign: i8,
    /// One factor pair per quantum, indexed by quantum.
    pub factors: Vec<FactorPair>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeDensity {
    pub terms: Vec<DensityTerm>,
    pub normalization: f64,
}

impl AmplitudeDensity {
    fn from_permutations(spec: &TransitionSpec, perms: &[PathPermutation]) -> Self {
        let terms = perms
            .iter()
            .map(|p| DensityTerm {
                sign: p.sign,
                factors: p
                    .assignment
                    .iter()
                    .map(|&(s, d)| FactorPair {
                        bra: spec.bra(d),
                        ket: spec.ket(s),
                    })
                    .collect(),
            })
            .collect::<Vec<_>>();
        let normalization = 1.0 / (terms.len() as f64).sqrt();
        Self {
            terms,
            normalization,
        }
    }

    pub fn quanta(&self) -> usize {
        self.terms.first().map_or(0, |t| t.factors.len())
    }

    pub fn value(&self, positions: &[f64], t: f64) -> Result<ComplexAmplitude, TransitionError> {
        density_value(self, positions, t)
    }
}

/// The densities whose amplitudes make up a transition probability.
/// Coherent statistics have one channel; distinguishable quanta have one
/// per permutation and their probabilities add.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionDensities {
    pub statistics: Statistics,
    pub channels: Vec<AmplitudeDensity>,
}

pub fn build_density(spec: &TransitionSpec) -> Result<TransitionDensities, TransitionError> {
    spec.validate()?;
    let channels = match spec.statistics {
        Statistics::SingleQuantum => vec![AmplitudeDensity::from_permutations(
            spec,
            &[PathPermutation {
                assignment: vec![(0, 0)],
                sign: 1,
            }],
        )],
        Statistics::Distinguishable => two_quanta_permutations(Statistics::Distinguishable)
            .into_iter()
            .map(|p| AmplitudeDensity::from_permutations(spec, &[p]))
            .collect(),
        st => vec![AmplitudeDensity::from_permutations(
            spec,
            &two_quanta_permutations(st),
        )],
    };
    Ok(TransitionDensities {
        statistics: spec.statistics,
        channels,
    })
}

/// normalization · Σ sign · Π_q conj(bra(x_q, t)) · ket(x_q, t). Times
/// outside the transition are evaluated as well; see
/// [`TransitionSpec::contains_time`].
pub fn density_value(
    d: &AmplitudeDensity,
    positions: &[f64],
    t: f64,
) -> Result<ComplexAmplitude, TransitionError> {
    if positions.len() != d.quanta() {
        return Err(TransitionError::DimensionMismatch {
            expected: d.quanta(),
            got: positions.len(),
        });
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for term in &d.terms {
        let mut prod = Complex64::new(f64::from(term.sign), 0.0);
        for (f, &x) in term.factors.iter().zip(positions) {
            prod *= f.value(x, t);
        }
        sum += prod;
    }
    Ok(d.normalization * sum)
}

/// Per-channel amplitudes; the probability is the sum of their squared
/// magnitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionAmplitude {
    pub statistics: Statistics,
    pub channels: Vec<ComplexAmplitude>,
}

impl TransitionAmplitude {
    /// Raw Σ|A|², never clamped to 1.
    pub fn probability(&self) -> f64 {
        self.channels.iter().map(|a| a.norm_sqr()).sum()
    }

    /// The amplitude of a coherent (single-channel) transition.
    pub fn value(&self) -> Option<ComplexAmplitude> {
        match self.channels.as_slice() {
            [a] => Some(*a),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Formulation {
    /// Overlap of the final and initial wavefunctions at `t_f`.
    Conventional,
    /// Integral of the amplitude density at `time`.
    TimeSymmetric { time: f64 },
}

pub fn amplitude(
    spec: &TransitionSpec,
    formulation: Formulation,
    q: &QuadratureConfig,
) -> Result<TransitionAmplitude, TransitionError> {
    match formulation {
        Formulation::Conventional => amplitude_conventional(spec, q),
        Formulation::TimeSymmetric { time } => amplitude_time_symmetric(spec, time, q),
    }
}

pub fn amplitude_time_symmetric(
    spec: &TransitionSpec,
    t: f64,
    q: &QuadratureConfig,
) -> Result<TransitionAmplitude, TransitionError> {
    let densities = build_density(spec)?;
    check_time(spec, t)?;
    let channels = densities
        .channels
        .iter()
        .map(|d| integrate_density(d, t, q).map_err(|e| quad_err(spec, e)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TransitionAmplitude {
        statistics: spec.statistics,
        channels,
    })
}

/// Conventional amplitude: the final-state wavefunction (symmetrized for
/// indistinguishable quanta, with 1/√2) overlapped with the initial one at
/// the collapse time `t_f`.
pub fn amplitude_conventional(
    spec: &TransitionSpec,
    q: &QuadratureConfig,
) -> Result<TransitionAmplitude, TransitionError> {
    spec.validate()?;
    let t = spec.t_f();
    let channels = if spec.statistics == Statistics::SingleQuantum {
        let (bra, ket) = (spec.bra(0), spec.ket(0));
        let rule = q.rule(overlap_window(&bra, &ket, t, q.truncation_sigmas));
        let phi = table(&bra, &rule, t);
        let psi = table(&ket, &rule, t);
        vec![integrate_1d_indexed(&rule, |i| phi[i].conj() * psi[i])
            .map_err(|e| quad_err(spec, e))?]
    } else {
        conventional_two_quanta(spec, t, q).map_err(|e| quad_err(spec, e))?
    };
    Ok(TransitionAmplitude {
        statistics: spec.statistics,
        channels,
    })
}

/// Probability from the time-symmetric amplitude at
/// [`TransitionSpec::default_time`].
pub fn probability(spec: &TransitionSpec, q: &QuadratureConfig) -> Result<f64, TransitionError> {
    spec.validate()?;
    Ok(amplitude_time_symmetric(spec, spec.default_time(), q)?.probability())
}

fn check_time(spec: &TransitionSpec, t: f64) -> Result<(), TransitionError> {
    if spec.contains_time(t) {
        Ok(())
    } else {
        Err(TransitionError::TimeOutsideTransition {
            t,
            t_i: spec.t_i(),
            t_f: spec.t_f(),
        })
    }
}

fn quad_err(spec: &TransitionSpec, source: QuadratureError) -> TransitionError {
    TransitionError::Quadrature {
        source,
        context: spec.describe(),
    }
}

fn table(p: &GaussianPacket, rule: &Rule, t: f64) -> Vec<ComplexAmplitude> {
    rule.nodes.iter().map(|&x| p.evaluate(x, t)).collect()
}

/// Window for one configuration-space axis: hull of the overlap windows of
/// the given factor pairs.
fn axis_window<'a>(pairs: impl IntoIterator<Item = &'a FactorPair>, t: f64, k: f64) -> Interval {
    pairs
        .into_iter()
        .map(|p| overlap_window(&p.bra, &p.ket, t, k))
        .reduce(|a, b| a.hull(&b))
        .expect("density has at least one term")
}

/// Distinct factor pairs on axis `axis`, with per-term indices into them.
fn axis_pairs(d: &AmplitudeDensity, axis: usize) -> (Vec<FactorPair>, Vec<usize>) {
    let mut pairs: Vec<FactorPair> = Vec::new();
    let idx = d
        .terms
        .iter()
        .map(|term| {
            let f = term.factors[axis];
            match pairs.iter().position(|p| *p == f) {
                Some(i) => i,
                None => {
                    pairs.push(f);
                    pairs.len() - 1
                }
            }
        })
        .collect();
    (pairs, idx)
}

/// Tensor-product quadrature of a density at fixed `t`. Factor pairs are
/// tabulated once per axis; each lattice value is then assembled exactly as
/// [`density_value`] would.
fn integrate_density(
    d: &AmplitudeDensity,
    t: f64,
    q: &QuadratureConfig,
) -> Result<ComplexAmplitude, QuadratureError> {
    let k = q.truncation_sigmas;
    let axes: Vec<_> = (0..d.quanta()).map(|a| axis_pairs(d, a)).collect();
    let rules: Vec<Rule> = axes
        .iter()
        .map(|(pairs, _)| q.rule(axis_window(pairs, t, k)))
        .collect();
    let tables: Vec<Vec<Vec<ComplexAmplitude>>> = axes
        .iter()
        .zip(&rules)
        .map(|((pairs, _), rule)| {
            pairs
                .iter()
                .map(|p| rule.nodes.iter().map(|&x| p.value(x, t)).collect())
                .collect()
        })
        .collect();
    let signs: Vec<f64> = d.terms.iter().map(|t| f64::from(t.sign)).collect();
    let norm = d.normalization;
    match d.quanta() {
        1 => {
            let (tab, idx) = (&tables[0], &axes[0].1);
            integrate_1d_indexed(&rules[0], |i| {
                let mut sum = Complex64::new(0.0, 0.0);
                for (s, &p) in signs.iter().zip(idx) {
                    sum += *s * tab[p][i];
                }
                norm * sum
            })
        }
        2 => {
            let (t0, i0) = (&tables[0], &axes[0].1);
            let (t1, i1) = (&tables[1], &axes[1].1);
            integrate_2d_indexed(&rules[0], &rules[1], q.exec, |i, j| {
                let mut sum = Complex64::new(0.0, 0.0);
                for ((s, &p0), &p1) in signs.iter().zip(i0).zip(i1) {
                    sum += *s * t0[p0][i] * t1[p1][j];
                }
                norm * sum
            })
        }
        n => unreachable!("{n} quanta"),
    }
}

/// Lattice integrand over the x1 and x2 packet tables (ψ_a, ψ_b, φ_c, φ_d).
type PairIntegrand =
    dyn Fn(&[Vec<Complex64>; 4], &[Vec<Complex64>; 4], usize, usize) -> Complex64 + Sync;

/// Wavefunction-level two-quanta overlap at the collapse time.
fn conventional_two_quanta(
    spec: &TransitionSpec,
    t: f64,
    q: &QuadratureConfig,
) -> Result<Vec<ComplexAmplitude>, QuadratureError> {
    // Same lattice as the time-symmetric path at t: window from every
    // (source, detector) pairing the statistics can route.
    let densities = build_density(spec).expect("validated spec");
    let k = q.truncation_sigmas;
    let window_for = |d: &AmplitudeDensity, axis: usize| axis_window(&axis_pairs(d, axis).0, t, k);

    let kets = [spec.ket(0), spec.ket(1)];
    let bras = [spec.bra(0), spec.bra(1)];
    let frac = std::f64::consts::FRAC_1_SQRT_2;

    let overlap = |d: &AmplitudeDensity, wavefns: &PairIntegrand| {
        let rx = q.rule(window_for(d, 0));
        let ry = q.rule(window_for(d, 1));
        // packet tables per axis: ψ_a, ψ_b, φ_c, φ_d
        let tab = |rule: &Rule| -> [Vec<Complex64>; 4] {
            [
                table(&kets[0], rule, t),
                table(&kets[1], rule, t),
                table(&bras[0], rule, t),
                table(&bras[1], rule, t),
            ]
        };
        let (tx, ty) = (tab(&rx), tab(&ry));
        integrate_2d_indexed(&rx, &ry, q.exec, |i, j| wavefns(&tx, &ty, i, j))
    };

    const A: usize = 0;
    const B: usize = 1;
    const C: usize = 2;
    const D: usize = 3;

    match spec.statistics {
        Statistics::Distinguishable => {
            let perms = two_quanta_permutations(Statistics::Distinguishable);
            perms
                .iter()
                .zip(&densities.channels)
                .map(|(p, d)| {
                    let (s1, d1) = p.assignment[0];
                    let (s2, d2) = p.assignment[1];
                    overlap(d, &move |x: &[Vec<Complex64>; 4],
                                      y: &[Vec<Complex64>; 4],
                                      i,
                                      j| {
                        let psi = x[A + s1][i] * y[A + s2][j];
                        let phi = x[C + d1][i] * y[C + d2][j];
                        phi.conj() * psi
                    })
                })
                .collect()
        }
        Statistics::Boson | Statistics::Fermion => {
            let sign = if spec.statistics == Statistics::Boson {
                1.0
            } else {
                -1.0
            };
            let d = &densities.channels[0];
            let v = overlap(d, &move |x: &[Vec<Complex64>; 4],
                                      y: &[Vec<Complex64>; 4],
                                      i,
                                      j| {
                let psi = (x[A][i] * y[B][j] + sign * x[B][i] * y[A][j]) * frac;
                let phi = (x[C][i] * y[D][j] + sign * x[D][i] * y[C][j]) * frac;
                phi.conj() * psi
            })?;
            Ok(vec![v])
        }
        Statistics::FanoBoson => {
            // Permutations 1 and 4 share the final product φ_c(x1)φ_d(x2);
            // only the initial state is symmetrized.
            let d = &densities.channels[0];
            let v = overlap(d, &move |x: &[Vec<Complex64>; 4],
                                      y: &[Vec<Complex64>; 4],
                                      i,
                                      j| {
                let psi = (x[A][i] * y[B][j] + x[B][i] * y[A][j]) * frac;
                let phi = x[C][i] * y[D][j];
                phi.conj() * psi
            })?;
            Ok(vec![v])
        }
        Statistics::SingleQuantum => unreachable!("handled by caller"),
    }
}
