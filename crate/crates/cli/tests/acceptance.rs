//! One line per acceptance criterion; exits nonzero if any criterion fails.
//! Run with `cargo test --release -p twoquanta-cli --test acceptance`.

use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twoquanta::quadrature::{integrate_1d, overlap_window, truncation_window};
use twoquanta::{
    amplitude_conventional, amplitude_time_symmetric, default_field_axes, gaussian_overlap_oracle,
    probability, rotation_symmetry_audit, sample_field, scan_detectors, ExecMode, GaussianPacket,
    GridSpec, QuadratureConfig, Role, SpacetimeEvent, Statistics, TransitionSpec,
};

const SEED: u64 = 0x5eed_2a1c;
const RANDOM_GEOMETRIES: usize = 20;

struct Verdict {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn q() -> QuadratureConfig {
    QuadratureConfig::default()
}

fn paper(st: Statistics) -> TransitionSpec {
    match st {
        Statistics::SingleQuantum => TransitionSpec::paper_single(),
        _ => TransitionSpec::paper_two_quanta(st),
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs())
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let v = f();
    (v, start.elapsed())
}

fn random_geometries(st: Statistics, n: usize) -> Vec<TransitionSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    (0..n)
        .map(|_| {
            let t_f = rng.gen_range(30.0..70.0);
            let mut x = || rng.gen_range(-15.0..15.0);
            match st.quanta() {
                1 => TransitionSpec::single(x(), x(), 0.0, t_f),
                _ => TransitionSpec::two_quanta(st, [x(), x()], [x(), x()], 0.0, t_f),
            }
        })
        .collect()
}

fn single_quantum() -> Verdict {
    let spec = paper(Statistics::SingleQuantum);
    let (p, elapsed) = timed(|| probability(&spec, &q()).unwrap());
    let quad = amplitude_time_symmetric(&spec, 0.0, &q()).unwrap().channels[0];
    let oracle = gaussian_overlap_oracle(
        &GaussianPacket::bra(7.0, 60.0),
        &GaussianPacket::ket(10.0, 0.0),
        0.0,
    )
    .unwrap();
    let gap = (quad - oracle).norm();
    Verdict {
        name: "single-quantum probability 6.59e-2, oracle agreement, runtime < 1 s",
        pass: (p - 6.59e-2).abs() <= 0.005e-2 && gap < 1e-10 && elapsed < Duration::from_secs(1),
        detail: format!("P = {p:.6e}, |A_quad − A_oracle| = {gap:.1e}, {elapsed:.2?}"),
    }
}

fn distinguishable() -> Verdict {
    let (p, elapsed) = timed(|| probability(&paper(Statistics::Distinguishable), &q()).unwrap());
    Verdict {
        name: "distinguishable probability 1.33e-2, runtime < 5 s",
        pass: (p - 1.33e-2).abs() <= 0.005e-2 && elapsed < Duration::from_secs(5),
        detail: format!("P = {p:.6e}, {elapsed:.2?}"),
    }
}

fn boson_fermion() -> Verdict {
    let pb = probability(&paper(Statistics::Boson), &q()).unwrap();
    let pf = probability(&paper(Statistics::Fermion), &q()).unwrap();
    Verdict {
        name: "boson probability 6.25e-3, fermion probability 7.09e-3",
        pass: (pb - 6.25e-3).abs() <= 0.005e-3 && (pf - 7.09e-3).abs() <= 0.005e-3,
        detail: format!("P_B = {pb:.6e}, P_F = {pf:.6e}"),
    }
}

fn fano() -> Verdict {
    let p = probability(&paper(Statistics::FanoBoson), &q()).unwrap();
    let pb = probability(&paper(Statistics::Boson), &q()).unwrap();
    let half = rel(p, 0.5 * pb);
    Verdict {
        name: "Fano probability 3.125e-3, exactly half the boson value",
        pass: (p - 3.125e-3).abs() <= 0.001e-3 && half < 1e-12,
        detail: format!("P = {p:.6e}, |P − P_B/2|/P = {half:.1e}"),
    }
}

fn sum_rule() -> Verdict {
    let mut specs = vec![paper(Statistics::Distinguishable)];
    specs.extend(random_geometries(
        Statistics::Distinguishable,
        RANDOM_GEOMETRIES,
    ));
    let worst = specs
        .iter()
        .map(|s| {
            let pd = probability(s, &q()).unwrap();
            let pb = probability(&s.with_statistics(Statistics::Boson), &q()).unwrap();
            let pf = probability(&s.with_statistics(Statistics::Fermion), &q()).unwrap();
            rel(pb + pf, pd)
        })
        .fold(0.0, f64::max);
    Verdict {
        name: "sum rule P_B + P_F = P_D on reference and 20 random geometries",
        pass: worst < 1e-10,
        detail: format!(
            "worst relative error {worst:.1e} over {} geometries",
            specs.len()
        ),
    }
}

fn time_invariance() -> Verdict {
    let times: Vec<f64> = (0..7).map(|k| 10.0 * k as f64).collect();
    let mut worst: f64 = 0.0;
    for st in Statistics::ALL {
        let spec = paper(st);
        let amps: Vec<_> = times
            .iter()
            .map(|&t| amplitude_time_symmetric(&spec, t, &q()).unwrap().channels)
            .collect();
        for ch in 0..amps[0].len() {
            let scale = amps.iter().map(|a| a[ch].norm()).fold(0.0, f64::max);
            for a in &amps {
                for b in &amps {
                    worst = worst.max((a[ch] - b[ch]).norm() / scale);
                }
            }
        }
    }
    Verdict {
        name: "time invariance of amplitudes at 7 times in [0, 60]",
        pass: worst < 1e-8,
        detail: format!("worst relative spread {worst:.1e} over all statistics"),
    }
}

fn formulation_agreement() -> Verdict {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for st in Statistics::ALL {
        for spec in random_geometries(st, RANDOM_GEOMETRIES) {
            let ts = amplitude_time_symmetric(&spec, spec.default_time(), &q())
                .unwrap()
                .probability();
            let conv = amplitude_conventional(&spec, &q()).unwrap().probability();
            worst = worst.max(rel(ts, conv));
            count += 1;
        }
    }
    Verdict {
        name: "conventional and time-symmetric probabilities agree",
        pass: worst < 1e-10,
        detail: format!("worst relative difference {worst:.1e} over {count} random transitions"),
    }
}

fn grid() -> GridSpec {
    GridSpec::default()
}

fn pauli(fermion_diag: f64) -> Verdict {
    let coincident = probability(
        &paper(Statistics::Fermion).with_detectors(&[3.0, 3.0]),
        &q(),
    )
    .unwrap();
    Verdict {
        name: "Pauli zero for coincident fermion detectors and scan diagonal",
        pass: coincident < 1e-12 && fermion_diag < 1e-12,
        detail: format!("P(3, 3) = {coincident:.1e}, max diagonal cell {fermion_diag:.1e}"),
    }
}

fn scans() -> (Verdict, f64) {
    let g = grid();
    let ((boson, fermion), elapsed) = timed(|| {
        (
            scan_detectors(&paper(Statistics::Boson), &g, &q()).unwrap(),
            scan_detectors(&paper(Statistics::Fermion), &g, &q()).unwrap(),
        )
    });
    let centre = (g.nx / 2, g.ny / 2);
    let at_origin = boson.xc[centre.0] == 0.0 && boson.xd[centre.1] == 0.0;
    let boson_max = boson.argmax() == centre;
    let f0 = fermion.get(centre.0, centre.1);
    let neighbour = |di: i64, dj: i64| {
        fermion.get(
            (centre.0 as i64 + di) as usize,
            (centre.1 as i64 + dj) as usize,
        )
    };
    // the whole diagonal x_c = x_d vanishes, so only the off-diagonal neighbours rise strictly
    let fermion_min = [(-1, 0), (1, 0), (0, -1), (0, 1), (-1, 1), (1, -1)]
        .iter()
        .all(|&(di, dj)| neighbour(di, dj) > f0)
        && [(-1, -1), (1, 1)]
            .iter()
            .all(|&(di, dj)| neighbour(di, dj) >= f0 - 1e-12);
    let diag = (0..g.nx).map(|i| fermion.get(i, i)).fold(0.0, f64::max);
    let verdict = Verdict {
        name: "boson scan maximum and fermion local minimum at (0, 0), runtime < 5 min",
        pass: at_origin && boson_max && fermion_min && elapsed < Duration::from_secs(300),
        detail: format!(
            "boson argmax {:?} (centre {:?}, P = {:.4e}), fermion P(0, 0) = {f0:.1e}, 2 × {}×{} cells in {elapsed:.1?}",
            boson.argmax(),
            centre,
            boson.max(),
            g.nx,
            g.ny
        ),
    };
    (verdict, diag)
}

fn audit(spec: &TransitionSpec, n: usize) -> (f64, f64) {
    let axes = default_field_axes(spec, n, n);
    let block = sample_field(spec, &axes, true, &q()).unwrap();
    (rotation_symmetry_audit(&block).unwrap(), block.max_abs())
}

fn rotation_audit() -> Verdict {
    // the rotation maps the transition onto itself only when x_a − x_b = x_c − x_d
    let symmetric = |st| TransitionSpec::two_quanta(st, [10.0, -10.0], [7.0, -13.0], 0.0, 60.0);
    let (single, _) = audit(&paper(Statistics::SingleQuantum), 61);
    let (boson, _) = audit(&symmetric(Statistics::Boson), 41);
    let (fano, fano_max) = audit(&symmetric(Statistics::FanoBoson), 41);
    Verdict {
        name: "rotation audit: single and boson pass, Fano fails",
        pass: single < 1e-10 && boson < 1e-10 && fano > 1e-2 * fano_max,
        detail: format!(
            "single {single:.1e}, boson {boson:.1e}, Fano {fano:.2e} (max {fano_max:.2e})"
        ),
    }
}

fn unitarity() -> Verdict {
    let psi = GaussianPacket::ket(10.0, 0.0);
    let norm_err = [0.0, 30.0, 60.0]
        .iter()
        .map(|&t| {
            let w = truncation_window(std::slice::from_ref(&psi), t, 10.0).unwrap();
            let n = integrate_1d(|x| psi.evaluate(x, t).norm_sqr().into(), w, &q()).unwrap();
            (n.re - 1.0).abs()
        })
        .fold(0.0, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 1);
    let mut gap: f64 = 0.0;
    for _ in 0..50 {
        let mut packet = |role| {
            let e = SpacetimeEvent::new(rng.gen_range(-20.0..20.0), rng.gen_range(0.0..60.0));
            GaussianPacket::new(e, rng.gen_range(0.5..2.0), role).unwrap()
        };
        let (bra, ket) = (packet(Role::Bra), packet(Role::Ket));
        let t = rng.gen_range(0.0..60.0);
        let w = overlap_window(&bra, &ket, t, 10.0);
        let quad =
            integrate_1d(|x| bra.evaluate(x, t).conj() * ket.evaluate(x, t), w, &q()).unwrap();
        gap = gap.max((quad - gaussian_overlap_oracle(&bra, &ket, t).unwrap()).norm());
    }
    Verdict {
        name: "packet norm at t = 0, 30, 60 and quadrature vs oracle on 50 random pairs",
        pass: norm_err < 1e-10 && gap < 1e-10,
        detail: format!("worst |norm − 1| = {norm_err:.1e}, worst |quad − oracle| = {gap:.1e}"),
    }
}

fn replay() -> Verdict {
    let run = |extra: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_twoquanta"))
            .arg("paper-suite")
            .args(extra)
            .output()
            .expect("binary runs")
    };
    let (a, b, c) = (run(&[]), run(&[]), run(&["--sequential"]));
    let lib_a = twoquanta_cli::paper_suite(&q()).unwrap();
    let lib_b = twoquanta_cli::paper_suite(&q().with_exec(ExecMode::Sequential)).unwrap();
    let ok = a.status.success() && a.stdout == b.stdout && a.stdout == c.stdout && lib_a == lib_b;
    Verdict {
        name: "paper-suite replay is byte-identical",
        pass: ok && a.stdout == lib_a.as_bytes(),
        detail: format!(
            "{} bytes, parallel and sequential runs compared",
            a.stdout.len()
        ),
    }
}

fn main() {
    let (scan_verdict, fermion_diag) = scans();
    let verdicts = [
        single_quantum(),
        distinguishable(),
        boson_fermion(),
        fano(),
        sum_rule(),
        time_invariance(),
        formulation_agreement(),
        pauli(fermion_diag),
        scan_verdict,
        rotation_audit(),
        unitarity(),
        replay(),
    ];
    for v in &verdicts {
        println!(
            "{} {}: {}",
            if v.pass { "PASS" } else { "FAIL" },
            v.name,
            v.detail
        );
    }
    let failed: Vec<_> = verdicts
        .iter()
        .filter(|v| !v.pass)
        .map(|v| v.name)
        .collect();
    println!(
        "{}/{} criteria passed",
        verdicts.len() - failed.len(),
        verdicts.len()
    );
    if !failed.is_empty() {
        eprintln!("failed: {failed:?}");
        std::process::exit(1);
    }
}
