//! Fixed-rule quadrature of smooth complex integrands over truncated
//! infinite domains, plus the closed-form Gaussian overlap used to check it.
//!
//! Every transition integrand is a product of complex Gaussians, so the
//! domain is cut to a window a fixed number of spreads wide and integrated
//! with a composite Gauss–Legendre rule (Simpson is kept as a cross-check).
//! The 2-D rule is the tensor product of two 1-D rules; rows are summed
//! independently and then reduced in index order, so results do not depend
//! on scheduling.

use crate::exec::{map_indexed, ExecMode};
use crate::wavepacket::{ComplexAmplitude, GaussianPacket};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Points per Gauss–Legendre panel.
pub const PANEL_ORDER: usize = 32;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QuadratureError {
    #[error("invalid interval [{lo}, {hi}]: need finite lo < hi")]
    InvalidInterval { lo: f64, hi: f64 },
    #[error("nodes_per_axis must be at least 32, got {0}")]
    TooFewNodes(usize),
    #[error("truncation_sigmas must be at least 6, got {0}")]
    TruncationTooSmall(f64),
    #[error("integrand is not finite at x = {x}")]
    NonFinite1d { x: f64 },
    #[error("integrand is not finite at (x, y) = ({x}, {y})")]
    NonFinite2d { x: f64, y: f64 },
    #[error("truncation window needs at least one packet")]
    NoPackets,
    #[error("overlap is degenerate: combined quadratic coefficient {re} + {im}i has no positive real part")]
    DegenerateOverlap { re: f64, im: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    #[default]
    GaussLegendreComposite,
    Simpson,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureConfig {
    pub nodes_per_axis: usize,
    pub truncation_sigmas: f64,
    pub scheme: Scheme,
    /// Scheduling only; never changes a result.
    #[serde(skip)]
    pub exec: ExecMode,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            nodes_per_axis: 800,
            truncation_sigmas: 10.0,
            scheme: Scheme::GaussLegendreComposite,
            exec: ExecMode::Parallel,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<(), Vec<QuadratureError>> {
        let mut errs = Vec::new();
        if self.nodes_per_axis < 32 {
            errs.push(QuadratureError::TooFewNodes(self.nodes_per_axis));
        }
        if !(self.truncation_sigmas >= 6.0 && self.truncation_sigmas.is_finite()) {
            errs.push(QuadratureError::TruncationTooSmall(self.truncation_sigmas));
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(errs)
        }
    }

    pub fn with_nodes(self, nodes_per_axis: usize) -> Self {
        Self {
            nodes_per_axis,
            ..self
        }
    }

    pub fn with_truncation(self, truncation_sigmas: f64) -> Self {
        Self {
            truncation_sigmas,
            ..self
        }
    }

    pub fn with_scheme(self, scheme: Scheme) -> Self {
        Self { scheme, ..self }
    }

    pub fn with_exec(self, exec: ExecMode) -> Self {
        Self { exec, ..self }
    }

    /// Nodes and weights of this configuration's rule on `window`.
    pub fn rule(&self, window: Interval) -> Rule {
        match self.scheme {
            Scheme::GaussLegendreComposite => {
                Rule::gauss_legendre_composite(window, self.nodes_per_axis)
            }
            Scheme::Simpson => Rule::simpson(window, self.nodes_per_axis),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self, QuadratureError> {
        if lo.is_finite() && hi.is_finite() && lo < hi {
            Ok(Self { lo, hi })
        } else {
            Err(QuadratureError::InvalidInterval { lo, hi })
        }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    pub fn intersection(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo < hi).then_some(Interval { lo, hi })
    }
}

/// A concrete 1-D rule: nodes with matching weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn gauss_legendre_composite(window: Interval, nodes: usize) -> Rule {
        let panels = nodes.div_ceil(PANEL_ORDER).max(1);
        let (ref_x, ref_w) = legendre_panel();
        let h = window.width() / panels as f64;
        let mut out = Rule {
            nodes: Vec::with_capacity(panels * PANEL_ORDER),
            weights: Vec::with_capacity(panels * PANEL_ORDER),
        };
        for p in 0..panels {
            let a = window.lo + p as f64 * h;
            let mid = a + 0.5 * h;
            for (x, w) in ref_x.iter().zip(ref_w) {
                out.nodes.push(mid + 0.5 * h * x);
                out.weights.push(0.5 * h * w);
            }
        }
        out
    }

    fn simpson(window: Interval, nodes: usize) -> Rule {
        let intervals = nodes + nodes % 2;
        let h = window.width() / intervals as f64;
        let nodes = (0..=intervals).map(|i| window.lo + i as f64 * h).collect();
        let weights = (0..=intervals)
            .map(|i| {
                let c = if i == 0 || i == intervals {
                    1.0
                } else if i % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                c * h / 3.0
            })
            .collect();
        Rule { nodes, weights }
    }
}

/// Gauss–Legendre nodes and weights on [−1, 1], by Newton iteration on the
/// three-term recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = vec![0.0; n];
    let mut ws = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            let step = p / d;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * d * d);
        xs[i] = -x;
        xs[n - 1 - i] = x;
        ws[i] = w;
        ws[n - 1 - i] = w;
    }
    (xs, ws)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let n = n as f64;
    let d = n * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn legendre_panel() -> &'static (Vec<f64>, Vec<f64>) {
    static PANEL: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    PANEL.get_or_init(|| gauss_legendre(PANEL_ORDER))
}

/// Window covering every packet out to `k` density spreads at time `t`.
pub fn truncation_window(
    packets: &[GaussianPacket],
    t: f64,
    k: f64,
) -> Result<Interval, QuadratureError> {
    let mut it = packets.iter().map(|p| packet_window(p, t, k));
    let first = it.next().ok_or(QuadratureError::NoPackets)?;
    Ok(it.fold(first, |acc, w| acc.hull(&w)))
}

/// Window for the product φ*ψ: the overlap of the two packets' amplitude
/// windows (half-width k·√2·σ(t)), outside of which at least one factor is
/// below `exp(−k²/2)` of its peak. Disjoint windows fall back to the hull.
pub fn overlap_window(bra: &GaussianPacket, ket: &GaussianPacket, t: f64, k: f64) -> Interval {
    let k = k * std::f64::consts::SQRT_2;
    let b = packet_window(bra, t, k);
    let w = packet_window(ket, t, k);
    b.intersection(&w).unwrap_or_else(|| b.hull(&w))
}

fn packet_window(p: &GaussianPacket, t: f64, k: f64) -> Interval {
    let c = p.origin().position;
    let s = k * p.density_sigma(t);
    Interval {
        lo: c - s,
        hi: c + s,
    }
}

pub fn integrate_1d<F>(
    f: F,
    window: Interval,
    cfg: &QuadratureConfig,
) -> Result<ComplexAmplitude, QuadratureError>
where
    F: Fn(f64) -> ComplexAmplitude,
{
    let rule = cfg.rule(window);
    integrate_1d_indexed(&rule, |i| f(rule.nodes[i]))
}

/// 1-D counterpart of [`integrate_2d_indexed`].
pub fn integrate_1d_indexed<F>(rule: &Rule, f: F) -> Result<ComplexAmplitude, QuadratureError>
where
    F: Fn(usize) -> ComplexAmplitude,
{
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, &w) in rule.weights.iter().enumerate() {
        let v = f(i);
        if !v.is_finite() {
            return Err(QuadratureError::NonFinite1d { x: rule.nodes[i] });
        }
        acc += w * v;
    }
    Ok(acc)
}

pub fn integrate_2d<F>(
    f: F,
    wx: Interval,
    wy: Interval,
    cfg: &QuadratureConfig,
) -> Result<ComplexAmplitude, QuadratureError>
where
    F: Fn(f64, f64) -> ComplexAmplitude + Sync + Send,
{
    let rx = cfg.rule(wx);
    let ry = cfg.rule(wy);
    integrate_2d_indexed(&rx, &ry, cfg.exec, |i, j| f(rx.nodes[i], ry.nodes[j]))
}

/// Tensor-product rule where the integrand is addressed by lattice index.
/// Lets callers reuse per-axis tables instead of re-evaluating factors at
/// every lattice point.
pub fn integrate_2d_indexed<F>(
    rx: &Rule,
    ry: &Rule,
    exec: ExecMode,
    f: F,
) -> Result<ComplexAmplitude, QuadratureError>
where
    F: Fn(usize, usize) -> ComplexAmplitude + Sync + Send,
{
    let rows = map_indexed(rx.len(), exec, |i| {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &wy) in ry.weights.iter().enumerate() {
            let v = f(i, j);
            if !v.is_finite() {
                return Err((i, j));
            }
            acc += wy * v;
        }
        Ok(acc)
    });
    let mut total = Complex64::new(0.0, 0.0);
    for (row, &wx) in rows.into_iter().zip(&rx.weights) {
        match row {
            Ok(s) => total += wx * s,
            Err((i, j)) => {
                return Err(QuadratureError::NonFinite2d {
                    x: rx.nodes[i],
                    y: ry.nodes[j],
                })
            }
        }
    }
    Ok(total)
}

/// Exact ∫ conj(bra(x, t)) · ket(x, t) dx, by completing the square.
pub fn gaussian_overlap_oracle(
    bra: &GaussianPacket,
    ket: &GaussianPacket,
    t: f64,
) -> Result<ComplexAmplitude, QuadratureError> {
    // Each packet is A · exp(−q (x − c)²); conj(bra) has coefficient conj(q).
    let (amp_b, q_b, c_b) = gaussian_parts(bra, t);
    let (amp_k, q_k, c_k) = gaussian_parts(ket, t);
    let qb = q_b.conj();
    let sum = qb + q_k;
    if sum.re.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) || !sum.is_finite() {
        return Err(QuadratureError::DegenerateOverlap {
            re: sum.re,
            im: sum.im,
        });
    }
    let d = c_b - c_k;
    let gauss = (Complex64::new(PI, 0.0) / sum).sqrt() * (-(qb * q_k / sum) * d * d).exp();
    Ok(amp_b.conj() * amp_k * gauss)
}

fn gaussian_parts(p: &GaussianPacket, t: f64) -> (Complex64, Complex64, f64) {
    let s2 = p.width() * p.width();
    let spread = Complex64::new(2.0 * s2, t - p.origin().time);
    let amp = (2.0 * s2 / PI).powf(0.25) * spread.sqrt().inv();
    let q = (2.0 * spread).inv();
    (amp, q, p.origin().position)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn gl() -> QuadratureConfig {
        QuadratureConfig::default().with_exec(ExecMode::Sequential)
    }

    #[test]
    fn legendre_rule_is_exact_for_polynomials() {
        let (x, w) = gauss_legendre(32);
        assert_abs_diff_eq!(w.iter().sum::<f64>(), 2.0, epsilon = 1e-14);
        for deg in 0..=63u32 {
            let exact = if deg % 2 == 1 {
                0.0
            } else {
                2.0 / (deg as f64 + 1.0)
            };
            let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
            assert_abs_diff_eq!(got, exact, epsilon = 1e-14);
        }
        assert!(x.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn classic_gaussian() {
        let w = Interval::new(-10.0, 10.0).unwrap();
        let v = integrate_1d(|x| Complex64::new((-x * x).exp(), 0.0), w, &gl()).unwrap();
        assert_abs_diff_eq!(v.re, PI.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(v.re, 1.7724539, epsilon = 1e-7);
        let s = integrate_1d(
            |x| Complex64::new((-x * x).exp(), 0.0),
            w,
            &gl().with_scheme(Scheme::Simpson),
        )
        .unwrap();
        assert_abs_diff_eq!(s.re, PI.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn complex_gaussian_against_polar_root() {
        // π/(1+i) = (π/√2)·e^{−iπ/4}; principal root halves the angle.
        let modulus = (PI / 2f64.sqrt()).sqrt();
        let angle = -PI / 8.0;
        let expected = Complex64::new(modulus * angle.cos(), modulus * angle.sin());
        let w = Interval::new(-10.0, 10.0).unwrap();
        let a = Complex64::new(1.0, 1.0);
        let v = integrate_1d(|x| (-a * x * x).exp(), w, &gl()).unwrap();
        assert!((v - expected).norm() < 1e-13, "{v} vs {expected}");
    }

    #[test]
    fn odd_integrand_vanishes() {
        let w = Interval::new(-10.0, 10.0).unwrap();
        let v = integrate_1d(|x| Complex64::new(x * (-x * x).exp(), 0.0), w, &gl()).unwrap();
        assert!(v.norm() < 1e-14);
    }

    #[test]
    fn tensor_product_rules() {
        let w = Interval::new(-10.0, 10.0).unwrap();
        let v = integrate_2d(
            |x, y| Complex64::new((-x * x - y * y).exp(), 0.0),
            w,
            w,
            &gl(),
        )
        .unwrap();
        assert_abs_diff_eq!(v.re, PI, epsilon = 1e-13);

        let g = |x: f64| Complex64::new(0.0, 0.3 * x).exp() * (-(x - 1.0) * (x - 1.0) / 3.0).exp();
        let h = |y: f64| Complex64::new((-0.5 * y * y).exp(), y.sin() * (-y * y).exp());
        let wx = Interval::new(-15.0, 17.0).unwrap();
        let wy = Interval::new(-9.0, 9.0).unwrap();
        let sep = integrate_2d(|x, y| g(x) * h(y), wx, wy, &gl()).unwrap();
        let prod = integrate_1d(g, wx, &gl()).unwrap() * integrate_1d(h, wy, &gl()).unwrap();
        assert!((sep - prod).norm() < 1e-12);
    }

    #[test]
    fn parallel_rows_reduce_identically() {
        let w = Interval::new(-8.0, 9.0).unwrap();
        let f = |x: f64, y: f64| {
            Complex64::new(0.0, x * y * 0.1).exp() * (-(x * x + y * y) / 5.0).exp()
        };
        let a = integrate_2d(f, w, w, &gl()).unwrap();
        let b = integrate_2d(f, w, w, &gl().with_exec(ExecMode::Parallel)).unwrap();
        assert_eq!(a.re.to_bits(), b.re.to_bits());
        assert_eq!(a.im.to_bits(), b.im.to_bits());
    }

    #[test]
    fn non_finite_sample_is_named() {
        let w = Interval::new(-1.0, 1.0).unwrap();
        let cfg = gl().with_scheme(Scheme::Simpson).with_nodes(32);
        let err = integrate_1d(|x| Complex64::new(1.0 / x, 0.0), w, &cfg).unwrap_err();
        assert_eq!(err, QuadratureError::NonFinite1d { x: 0.0 });
        let err = integrate_2d(|x, y| Complex64::new(1.0 / (x * y), 0.0), w, w, &cfg).unwrap_err();
        assert!(matches!(err, QuadratureError::NonFinite2d { .. }), "{err}");
    }

    #[test]
    fn config_validation_lists_every_problem() {
        let bad = QuadratureConfig {
            nodes_per_axis: 8,
            truncation_sigmas: 2.0,
            ..Default::default()
        };
        assert_eq!(bad.validate().unwrap_err().len(), 2);
        assert!(QuadratureConfig::default().validate().is_ok());
        assert!(Interval::new(1.0, 1.0).is_err());
        assert!(Interval::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn windows() {
        let p = GaussianPacket::ket(0.0, 0.0);
        let w = truncation_window(&[p], 0.0, 10.0).unwrap();
        assert_eq!((w.lo(), w.hi()), (-10.0, 10.0));

        let s = 3604f64.sqrt() / 2.0;
        let w = truncation_window(
            &[
                GaussianPacket::ket(10.0, 0.0),
                GaussianPacket::ket(-10.0, 0.0),
            ],
            60.0,
            10.0,
        )
        .unwrap();
        assert_abs_diff_eq!(w.lo(), -10.0 - 10.0 * s, epsilon = 1e-12);
        assert_abs_diff_eq!(w.hi(), 10.0 + 10.0 * s, epsilon = 1e-12);
        assert_abs_diff_eq!(w.hi(), 310.17, epsilon = 1e-2);
        assert_eq!(
            truncation_window(&[], 0.0, 10.0),
            Err(QuadratureError::NoPackets)
        );
    }

    #[test]
    fn overlap_window_is_intersection() {
        let bra = GaussianPacket::bra(7.0, 60.0);
        let ket = GaussianPacket::ket(10.0, 0.0);
        let w = overlap_window(&bra, &ket, 0.0, 10.0);
        let half = 10.0 * std::f64::consts::SQRT_2;
        assert_abs_diff_eq!(w.lo(), 10.0 - half, epsilon = 1e-12);
        assert_abs_diff_eq!(w.hi(), 10.0 + half, epsilon = 1e-12);
        // far apart at t = t_i: windows are disjoint, fall back to hull
        let far = GaussianPacket::bra(1000.0, 60.0);
        let w = overlap_window(&far, &ket, 0.0, 10.0);
        assert_abs_diff_eq!(w.lo(), 10.0 - half, epsilon = 1e-12);
        assert!(w.hi() > 1000.0);
    }

    #[test]
    fn oracle_self_overlap_is_one() {
        let p = GaussianPacket::ket(3.0, 0.0);
        for &t in &[0.0, 1.0, 17.0, 60.0] {
            let v = gaussian_overlap_oracle(&p, &p, t).unwrap();
            assert!((v - 1.0).norm() < 1e-14, "{v}");
        }
    }

    #[test]
    fn oracle_reproduces_single_quantum_probability() {
        let bra = GaussianPacket::bra(7.0, 60.0);
        let ket = GaussianPacket::ket(10.0, 0.0);
        let a = gaussian_overlap_oracle(&bra, &ket, 30.0).unwrap();
        assert_abs_diff_eq!(a.norm_sqr(), 6.59e-2, epsilon = 0.005e-2);
        let spread: Vec<_> = (0..7)
            .map(|k| gaussian_overlap_oracle(&bra, &ket, 10.0 * k as f64).unwrap())
            .collect();
        for v in &spread {
            assert!((v - spread[0]).norm() < 1e-13);
        }
    }

    #[test]
    fn oracle_matches_quadrature() {
        let bra = GaussianPacket::bra(7.0, 60.0);
        let ket = GaussianPacket::ket(10.0, 0.0);
        for &t in &[0.0, 30.0, 60.0] {
            let w = overlap_window(&bra, &ket, t, 10.0);
            let q =
                integrate_1d(|x| bra.evaluate(x, t).conj() * ket.evaluate(x, t), w, &gl()).unwrap();
            let o = gaussian_overlap_oracle(&bra, &ket, t).unwrap();
            assert!((q - o).norm() < 1e-10, "t={t}: {q} vs {o}");
        }
    }
}
