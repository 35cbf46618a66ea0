//! Acceptance criteria, one line per criterion.
//!
//! Criteria listed in `KNOWN_UNATTAINABLE` are still evaluated at their stated
//! tolerance and printed as FAIL; they only affect the exit status if they
//! unexpectedly pass. Set `ACCEPTANCE_STRICT=1` to make any FAIL fatal.

use std::process::ExitCode;

use psdblock::constructions::{amplify_offdiag, build_plp, example_c, example_mx, example_ny, find_scaling_t};
use psdblock::criteria::schur_pd_test;
use psdblock::linalg::{eigenvalues_desc, positivity, Definiteness};
use psdblock::norms::{dominance, frobenius_norm, spectral_norm, DominanceVerdict};
use psdblock::sweep::{run_sweep, Execution, Suite, SweepConfig};
use psdblock::{tol, ComplexMatrix, HermitianMatrix, Result, C64};

/// The stated approximations disagree with the exact spectra beyond the
/// stated tolerance.
const KNOWN_UNATTAINABLE: [(usize, &str); 2] = [
    (1, "exact λ2 = (129+√14761)/200 = 1.25247, so the printed 1.25 is off by 2.5e-3 > 1e-3"),
    (3, "exact spectrum is (3.00821, 1.76008, 0.97603, 0.08901); 1.7 and 0.9 are off by 6e-2 and 7.6e-2 > 5e-3"),
];

const SEED: u64 = 1;

type Criterion = (usize, &'static str, Box<dyn Fn() -> Result<Outcome>>);

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Outcome { passed, detail: detail.into() }
    }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn criterion_1() -> Result<Outcome> {
    let eig = eigenvalues_desc(&example_mx(0.3).full())?;
    let (r1, r2) = (12401f64.sqrt(), 14761f64.sqrt());
    let mut exact = vec![(149.0 + r1) / 200.0, (149.0 - r1) / 200.0, (129.0 + r2) / 200.0, (129.0 - r2) / 200.0];
    exact.sort_by(|a, b| b.total_cmp(a));
    let exact_err = max_abs_diff(&eig, &exact);
    let approx_err = max_abs_diff(&eig, &[1.301, 1.25, 0.188, 0.0375]);
    Ok(Outcome::new(
        exact_err <= 1e-10 && approx_err <= 1e-3,
        format!("eigenvalues {eig:.6?}; exact-form error {exact_err:.2e}, printed-approximation error {approx_err:.2e}"),
    ))
}

fn criterion_2() -> Result<Outcome> {
    let mut passed = true;
    let mut parts = Vec::new();
    for x in [0.3, 0.4, 0.5] {
        let m = example_mx(x);
        let report = dominance(m.full().matrix(), m.a_plus_b()?.matrix(), tol::DOMINANCE)?;
        let k4 = report.margins[3].abs();
        passed &= report.verdict == DominanceVerdict::Dominated && k4 <= 1e-10;
        parts.push(format!("x={x}: {:?}, k=4 margin {k4:.1e}", report.verdict));
    }
    Ok(Outcome::new(passed, parts.join("; ")))
}

fn criterion_3() -> Result<Outcome> {
    let c = example_c();
    let verdict = positivity(&c.full(), tol::PSD)?;
    let eig = eigenvalues_desc(&c.full())?;
    let err = max_abs_diff(&eig, &[3.008, 1.7, 0.9, 0.089]);
    let gap = spectral_norm(c.full().matrix())? - spectral_norm(c.a_plus_b()?.matrix())?;
    Ok(Outcome::new(
        verdict.verdict == Definiteness::PositiveDefinite && err <= 5e-3 && gap >= 0.005,
        format!("{:?}; eigenvalues {eig:.5?} (error {err:.2e}); ‖C‖_s − ‖A+B‖_s = {gap:.5}", verdict.verdict),
    ))
}

fn criterion_4() -> Result<Outcome> {
    let mut passed = true;
    let mut parts = Vec::new();
    for y in [0.0, 0.5, 0.99] {
        let n = example_ny(y);
        let eig = eigenvalues_desc(&n.full())?;
        let mut want = vec![4.0, 1.0, y, 0.0];
        want.sort_by(|a, b| b.total_cmp(a));
        let err = max_abs_diff(&eig, &want);
        let spec_margin = spectral_norm(n.full().matrix())? - spectral_norm(n.a_plus_b()?.matrix())?;
        let frob_margin = frobenius_norm(n.full().matrix()).powi(2) - frobenius_norm(n.a_plus_b()?.matrix()).powi(2);
        passed &= err <= 1e-10 && spec_margin > 0.0 && frob_margin > 0.0;
        parts.push(format!("y={y}: eig err {err:.1e}, spectral {spec_margin:.3}, frobenius² {frob_margin:.3}"));
    }
    let n1 = example_ny(1.0);
    let frob_at_1 = frobenius_norm(n1.full().matrix()).powi(2) - frobenius_norm(n1.a_plus_b()?.matrix()).powi(2);
    passed &= frob_at_1.abs() <= 1e-10;
    parts.push(format!("y=1: frobenius² margin {frob_at_1:.1e}"));
    Ok(Outcome::new(passed, parts.join("; ")))
}

fn sweep(suite: Suite, trials: usize, dims: std::ops::RangeInclusive<usize>, tol: f64) -> Result<Outcome> {
    let mut config = SweepConfig::new(suite, trials, dims, SEED);
    config.tol = Some(tol);
    let s = run_sweep(&config, Execution::Parallel)?;
    let mut detail = format!("{suite}: {}/{} passed, worst metric {:.2e}", s.passed, s.trials, s.worst_metric);
    if let Some(f) = &s.first_failure {
        detail.push_str(&format!("; first failure seed {} dim {}: {}", f.seed, f.dim, f.detail));
    }
    Ok(Outcome::new(s.all_passed(), detail))
}

fn criterion_13() -> Result<Outcome> {
    let ensemble = sweep(Suite::ZeroBlock, 10_000, 1..=5, 1e-10)?;
    let w = amplify_offdiag(&HermitianMatrix::identity(2), &ComplexMatrix::identity(2).scale(C64::new(0.0, 1.0)), 100)?;
    let excess = w.dominance.excess();
    let witness_ok =
        w.l == 1 && excess.len() == 4 && excess.iter().all(|&e| e > 0.0) && w.psd_verdict.verdict == Definiteness::Indefinite;
    Ok(Outcome::new(
        ensemble.passed && witness_ok,
        format!("{}; amplifier l={}, excess {excess:.4?}, {:?}", ensemble.detail, w.l, w.psd_verdict.verdict),
    ))
}

fn criterion_14() -> Result<Outcome> {
    let cases = [
        (HermitianMatrix::identity(1), ComplexMatrix::identity(1).scale(C64::new(2.0, 0.0)), HermitianMatrix::identity(1), 3),
        (HermitianMatrix::identity(2), ComplexMatrix::identity(2).scale(C64::new(0.0, 1.0)), HermitianMatrix::identity(2), 2),
    ];
    let mut passed = true;
    let mut parts = Vec::new();
    for (a, x, b, want) in cases {
        let w = find_scaling_t(&a, &x, &b, 100)?;
        let t = w.t as f64;
        let at_t = schur_pd_test(&a.scale(t), &x, &b.scale(t), true)?;
        let below = schur_pd_test(&a.scale(t - 1.0), &x, &b.scale(t - 1.0), true).unwrap_or(false);
        let prev_pd = w.previous.is_some_and(|v| v.is_pd());
        passed &= w.t == want && w.certificate.is_pd() && at_t && !below && !prev_pd;
        parts.push(format!("t={} (want {want}), certificate {:?}, t−1 schur {below}", w.t, w.certificate.verdict));
    }
    Ok(Outcome::new(passed, parts.join("; ")))
}

fn criterion_15() -> Result<Outcome> {
    let w = build_plp(&[2.0], &[-1.0], &[C64::new(3f64.sqrt(), 0.0)])?;
    let r = 21f64.sqrt();
    let sv = psdblock::norms::singular_values(w.n.matrix())?;
    let err = max_abs_diff(sv.values(), &[(r + 1.0) / 2.0, (r - 1.0) / 2.0]);
    let excess = w.report.excess();
    let strict = excess.len() == 2 && excess.iter().all(|&e| e > 0.0);
    Ok(Outcome::new(
        err <= 1e-10 && strict && w.report.verdict == DominanceVerdict::StrictlyDominates,
        format!("singular values {:.10?} (error {err:.1e}); excess over A+B {excess:.4?}", sv.values()),
    ))
}

fn main() -> ExitCode {
    let strict = std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    let criteria: Vec<Criterion> = vec![
        (1, "M_x eigenvalues, exact forms and printed approximations", Box::new(criterion_1)),
        (2, "M_x dominated by A+B", Box::new(criterion_2)),
        (3, "C positive definite, printed spectrum, spectral excess", Box::new(criterion_3)),
        (4, "N_y spectrum and norm comparisons", Box::new(criterion_4)),
        (5, "unitary-orbit reconstruction, 500 trials", Box::new(|| sweep(Suite::Lemma1, 500, 1..=6, 1e-9))),
        (6, "midpoints and |X − X*| bound, 500 trials", Box::new(|| sweep(Suite::Midpoints, 500, 1..=6, 1e-10))),
        (7, "Ky Fan subadditivity over diagonal blocks, 500 trials", Box::new(|| sweep(Suite::Remark1, 500, 1..=6, 1e-9))),
        (8, "Hermitian off-diagonal block inequality, 500 trials", Box::new(|| sweep(Suite::HermitianX, 500, 1..=6, tol::DOMINANCE))),
        (9, "Schur complement agrees with eigensolver, 500 trials", Box::new(|| sweep(Suite::SchurAgree, 500, 1..=6, tol::DOMINANCE))),
        (10, "commuting block determinant, 500 trials", Box::new(|| sweep(Suite::DetAgree, 500, 1..=6, 1e-8))),
        (11, "diagonal-structure quadratic roots, 200 trials", Box::new(|| sweep(Suite::Pww, 200, 1..=6, 1e-9))),
        (12, "normal commuting off-diagonal block, 200 trials", Box::new(|| sweep(Suite::NormalX, 200, 1..=6, tol::DOMINANCE))),
        (13, "zero-block impossibility and amplifier witness", Box::new(criterion_13)),
        (14, "minimal scaling t", Box::new(criterion_14)),
        (15, "indefinite diagonal witness", Box::new(criterion_15)),
        (16, "ordered diagonalization Ky Fan additivity, 200 trials", Box::new(|| sweep(Suite::Ordered, 200, 1..=6, 1e-9))),
    ];

    let mut fatal = 0;
    for (id, title, run) in criteria {
        let known = KNOWN_UNATTAINABLE.iter().find(|(k, _)| *k == id).map(|(_, why)| *why);
        let outcome = run().unwrap_or_else(|e| Outcome::new(false, format!("error: {e}")));
        let status = if outcome.passed { "PASS" } else { "FAIL" };
        println!("criterion {id:>2} {status}  {title}: {}", outcome.detail);
        match (outcome.passed, known) {
            (false, Some(why)) => {
                println!("              known unattainable: {why}");
                if strict {
                    fatal += 1;
                }
            }
            (false, None) => fatal += 1,
            (true, Some(_)) => {
                println!("              listed as unattainable but passed; update the list");
                fatal += 1;
            }
            (true, None) => {}
        }
    }
    if fatal == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{fatal} unexpected result(s)");
        ExitCode::FAILURE
    }
}
