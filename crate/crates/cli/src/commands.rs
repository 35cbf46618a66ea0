use std::fmt::Write as _;
use std::path::Path;

use psdblock::constructions::{amplify_offdiag, build_plp, example_c, example_mx, example_ny, find_scaling_t};
use psdblock::criteria::{block_det, check_main_inequality, pooled_roots, pww_eigenvalues, schur_complement, schur_pd_test};
use psdblock::decompose::{lemma1_decompose, verify_decomposition};
use psdblock::linalg::{determinant, eigenvalues_desc, is_diagonal, positivity};
use psdblock::norms::{dominance, frobenius_norm, spectral_norm};
use psdblock::sweep::{run_sweep, Execution, SweepConfig};
use psdblock::{tol, ComplexMatrix, DominanceReport, PsdBlockMatrix, C64};
use serde::de::DeserializeOwned;
use serde_json::json;

use crate::config::{Command, Example, Input, Params, RunConfig};
use crate::report::{csv_pairs, fmt_values, text_pairs, Failure, Report};

const DEFAULT_L_MAX: u64 = 1000;
const DEFAULT_T_MAX: u64 = 1000;
const DEFAULT_TRIALS: usize = 100;
const DEFAULT_SEED: u64 = 1;
const DEFAULT_DET_TOL: f64 = 1e-8;
const DEFAULT_MX: f64 = 0.3;
const DEFAULT_NY: f64 = 0.5;

pub fn execute(config: &RunConfig) -> Result<Report, Failure> {
    let p = &config.params;
    match config.command {
        Command::Check => check(&block_input(config)?, p.tol),
        Command::Decompose => decompose(&block_input(config)?),
        Command::Schur => schur(&block_input(config)?),
        Command::Det => det(&matrix_input(config)?, p.tol.unwrap_or(DEFAULT_DET_TOL)),
        Command::Amplify => amplify(&block_input(config)?, p.l_max.unwrap_or(DEFAULT_L_MAX)),
        Command::Scale => scale(&block_input(config)?, p.t_max.unwrap_or(DEFAULT_T_MAX)),
        Command::Plp => plp(&block_input(config)?),
        Command::Reproduce => match &config.input {
            Input::Example(e) => reproduce(*e, p),
            _ => Err(Failure::Usage("`reproduce` requires --example".into())),
        },
        Command::Sweep => sweep(p),
    }
}

fn read_json<T: DeserializeOwned>(flag: &str, path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("{flag}: cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{flag}: {}: {e}", path.display())))
}

fn example_block(e: Example, p: &Params) -> PsdBlockMatrix {
    match e {
        Example::Mx => example_mx(p.x.unwrap_or(DEFAULT_MX)),
        Example::C => example_c(),
        Example::Ny => example_ny(p.y.unwrap_or(DEFAULT_NY)),
    }
}

fn block_input(config: &RunConfig) -> Result<PsdBlockMatrix, Failure> {
    match &config.input {
        Input::Block(path) => read_json("--block", path),
        Input::Example(e) => Ok(example_block(*e, &config.params)),
        _ => Err(Failure::Usage("a block matrix input is required".into())),
    }
}

fn matrix_input(config: &RunConfig) -> Result<ComplexMatrix, Failure> {
    match &config.input {
        Input::Matrix(path) => read_json("--matrix", path),
        _ => Err(Failure::Usage("a matrix input is required".into())),
    }
}

fn dominance_text(r: &DominanceReport) -> String {
    let mut out = format!("{:>3}  {:>14}  {:>14}  {:>14}\n", "k", "lhs", "rhs", "rhs - lhs");
    for (i, ((l, rr), m)) in r.k_norms_lhs.iter().zip(&r.k_norms_rhs).zip(&r.margins).enumerate() {
        let _ = writeln!(out, "{:>3}  {l:>14.9}  {rr:>14.9}  {m:>14.3e}", i + 1);
    }
    let _ = writeln!(out, "verdict: {:?} (tolerance {:e})", r.verdict, r.tolerance);
    out
}

fn check(m: &PsdBlockMatrix, tol_override: Option<f64>) -> Result<Report, Failure> {
    let mut report = check_main_inequality(m)?;
    if let Some(t) = tol_override {
        report.dominance.verdict = DominanceReport::classify(&report.dominance.margins, t);
        report.dominance.tolerance = t;
        report.conclusion_holds = report.dominance.verdict.lhs_le_rhs();
    }
    let mut text = String::from("hypotheses\n");
    for h in &report.hypothesis_checks {
        let _ = writeln!(text, "  {:<18} {}", h.name, h.holds);
    }
    let matched = report.matched_theorem.map_or("none".to_string(), |t| format!("{t:?}"));
    let _ = writeln!(text, "matched hypothesis set: {matched}");
    let _ = writeln!(text, "Ky Fan norms of M against A + B");
    text.push_str(&dominance_text(&report.dominance));
    let _ = writeln!(text, "‖M‖ ≤ ‖A + B‖ for all symmetric norms: {}", report.conclusion_holds);
    Report::new(report.conclusion_holds, &report, text, report.dominance.to_csv())
}

fn decompose(m: &PsdBlockMatrix) -> Result<Report, Failure> {
    let d = lemma1_decompose(m)?;
    let audit = verify_decomposition(m, &d)?;
    let rows = [
        ("residual", format!("{:e}", d.residual)),
        ("relative_residual", format!("{:e}", audit.relative_residual)),
        ("unitarity_defect_U", format!("{:e}", audit.unitarity_defect_u)),
        ("unitarity_defect_V", format!("{:e}", audit.unitarity_defect_v)),
        ("spectrum_A", fmt_values(&d.p_block_spectrum(m.n())?)),
        ("spectrum_B", fmt_values(&d.q_block_spectrum(m.n())?)),
    ];
    let text = text_pairs("M = U (A ⊕ 0) U* + V (0 ⊕ B) V*", &rows);
    Report::new(audit.is_valid(), &d, text, csv_pairs(&rows))
}

fn schur(m: &PsdBlockMatrix) -> Result<Report, Failure> {
    let (a, x, b) = (m.a(), m.x(), m.b());
    let pd = schur_pd_test(a, x, b, true)?;
    let psd = schur_pd_test(a, x, b, false)?;
    let s = schur_complement(a, x, b)?;
    let verdict = positivity(&s, tol::PSD)?;
    let value = json!({
        "schur_complement": s,
        "positivity": verdict,
        "positive_definite": pd,
        "positive_semidefinite": psd,
    });
    let rows = [
        ("schur_spectrum", fmt_values(&eigenvalues_desc(&s)?)),
        ("schur_verdict", format!("{:?}", verdict.verdict)),
        ("M_positive_definite", pd.to_string()),
        ("M_positive_semidefinite", psd.to_string()),
    ];
    let text = text_pairs("S = A − X B⁻¹ X*", &rows);
    Report::new(pd, &value, text, csv_pairs(&rows))
}

fn det(full: &ComplexMatrix, tol: f64) -> Result<Report, Failure> {
    if !full.is_square() || !full.rows().is_multiple_of(2) || full.rows() == 0 {
        return Err(Failure::Usage(format!(
            "--matrix: det needs a square matrix of even size, got {}x{}",
            full.rows(),
            full.cols()
        )));
    }
    let n = full.rows() / 2;
    let (a, b) = (full.block(0, 0, n, n), full.block(0, n, n, n));
    let (c, d) = (full.block(n, 0, n, n), full.block(n, n, n, n));
    let got = block_det(&a, &b, &c, &d)?;
    let want = determinant(full)?;
    let gap = (got - want).norm() / want.norm().max(1.0);
    let pair = |z: C64| [z.re, z.im];
    let value = json!({ "block_det": pair(got), "direct_det": pair(want), "relative_gap": gap, "tolerance": tol });
    let rows = [
        ("block_det", fmt_complex(got)),
        ("direct_det", fmt_complex(want)),
        ("relative_gap", format!("{gap:e}")),
    ];
    Report::new(gap <= tol, &value, text_pairs("det(AD − CB) against det M", &rows), csv_pairs(&rows))
}

fn fmt_complex(z: C64) -> String {
    format!("{:.12}{:+.12}i", z.re, z.im)
}

fn amplify(m: &PsdBlockMatrix, l_max: u64) -> Result<Report, Failure> {
    let w = amplify_offdiag(m.a(), m.x(), l_max)?;
    let rows = [
        ("l", w.l.to_string()),
        ("rotated", w.rotated.to_string()),
        ("excess_over_A", fmt_values(&w.dominance.excess())),
        ("positivity", format!("{:?}", w.psd_verdict.verdict)),
    ];
    let text = text_pairs("[[A, lX], [lX*, 0]] against A", &rows);
    Report::new(true, &w, text, csv_pairs(&rows))
}

fn scale(m: &PsdBlockMatrix, t_max: u64) -> Result<Report, Failure> {
    let w = find_scaling_t(m.a(), m.x(), m.b(), t_max)?;
    let rows = [
        ("t", w.t.to_string()),
        ("min_eigenvalue_at_t", format!("{:e}", w.certificate.min_eigenvalue)),
        (
            "min_eigenvalue_at_t_minus_1",
            w.previous.map_or("n/a".to_string(), |v| format!("{:e}", v.min_eigenvalue)),
        ),
    ];
    let text = text_pairs("minimal t with [[tA, X], [X*, tB]] positive definite", &rows);
    Report::new(w.certificate.is_pd(), &w, text, csv_pairs(&rows))
}

fn plp(m: &PsdBlockMatrix) -> Result<Report, Failure> {
    for (name, block) in [("A", m.a().matrix()), ("X", m.x()), ("B", m.b().matrix())] {
        if !block.is_square() || !is_diagonal(block, tol::STRUCTURE) {
            return Err(Failure::Usage(format!("--block: plp needs diagonal blocks, field `{name}` is not diagonal")));
        }
    }
    let a = m.a().real_diagonal();
    let b = m.b().real_diagonal();
    let x = m.x().diagonal();
    let w = build_plp(&a, &b, &x)?;
    let holds = !w.n_verdict.is_psd() && !w.neg_n_verdict.is_psd();
    let rows = [
        ("spectrum_N", fmt_values(&eigenvalues_desc(&w.n)?)),
        ("excess_over_A_plus_B", fmt_values(&w.report.excess())),
        ("verdict", format!("{:?}", w.report.verdict)),
        ("N", format!("{:?}", w.n_verdict.verdict)),
        ("-N", format!("{:?}", w.neg_n_verdict.verdict)),
    ];
    Report::new(holds, &w, text_pairs("N against A + B", &rows), csv_pairs(&rows))
}

fn reproduce(example: Example, p: &Params) -> Result<Report, Failure> {
    let block = example_block(example, p);
    let full = block.full();
    let sum = block.a_plus_b()?;
    let eigenvalues = eigenvalues_desc(&full)?;
    let report = dominance(full.matrix(), sum.matrix(), tol::DOMINANCE)?;
    let (m_s, ab_s) = (spectral_norm(full.matrix())?, spectral_norm(sum.matrix())?);
    let (m_f, ab_f) = (frobenius_norm(full.matrix()).powi(2), frobenius_norm(sum.matrix()).powi(2));

    let (name, parameter, reference): (&str, Option<(&str, f64)>, Vec<f64>) = match example {
        Example::Mx => {
            let x = p.x.unwrap_or(DEFAULT_MX);
            let roots = pooled_roots(&pww_eigenvalues(&[x, 0.99], &[0.99, 0.5], &[0.25, 0.25])?);
            ("Mx", Some(("x", x)), roots)
        }
        Example::C => ("C", None, vec![3.008, 1.7, 0.9, 0.089]),
        Example::Ny => {
            let y = p.y.unwrap_or(DEFAULT_NY);
            let mut r = vec![4.0, 1.0, y, 0.0];
            r.sort_by(|a, b| b.total_cmp(a));
            ("Ny", Some(("y", y)), r)
        }
    };
    let reference_label = match example {
        Example::Mx => "quadratic roots",
        Example::C => "reference (3 digits)",
        Example::Ny => "closed form",
    };

    let mut text = format!("example {name}");
    if let Some((k, v)) = parameter {
        let _ = write!(text, " ({k} = {v})");
    }
    text.push('\n');
    let _ = writeln!(text, "{:>3}  {:>12}  {:>20}", "i", "eigenvalue", reference_label);
    for (i, e) in eigenvalues.iter().enumerate() {
        let r = reference.get(i).map_or(String::new(), |v| format!("{v:.6}"));
        let _ = writeln!(text, "{:>3}  {e:>12.6}  {r:>20}", i + 1);
    }
    let cmp = |l: f64, r: f64| if l > r + tol::DOMINANCE { ">" } else if l < r - tol::DOMINANCE { "<" } else { "=" };
    let _ = writeln!(text, "spectral:    ‖M‖_s = {m_s:.6} {} ‖A+B‖_s = {ab_s:.6}", cmp(m_s, ab_s));
    let _ = writeln!(text, "frobenius²:  ‖M‖_F² = {m_f:.6} {} ‖A+B‖_F² = {ab_f:.6}", cmp(m_f, ab_f));
    let _ = writeln!(text, "Ky Fan norms of M against A + B");
    text.push_str(&dominance_text(&report));

    let value = json!({
        "example": name,
        "parameter": parameter.map(|(k, v)| json!({ k: v })),
        "block": block,
        "eigenvalues": eigenvalues,
        "reference": reference,
        "spectral_norm": { "M": m_s, "A_plus_B": ab_s },
        "frobenius_squared": { "M": m_f, "A_plus_B": ab_f },
        "dominance": report,
    });
    let mut csv = String::from("i,eigenvalue,reference\n");
    for (i, e) in eigenvalues.iter().enumerate() {
        let r = reference.get(i).map_or(String::new(), |v| format!("{v:e}"));
        let _ = writeln!(csv, "{},{e:e},{r}", i + 1);
    }
    Report::new(true, &value, text, csv)
}

fn sweep(p: &Params) -> Result<Report, Failure> {
    let suite = p.suite.ok_or_else(|| Failure::Usage("`sweep` requires --suite".into()))?;
    let mut config = SweepConfig::new(
        suite,
        p.trials.unwrap_or(DEFAULT_TRIALS),
        p.dims.clone().unwrap_or(1..=6),
        p.seed.unwrap_or(DEFAULT_SEED),
    );
    config.tol = p.tol;
    let s = run_sweep(&config, Execution::Parallel)?;
    let first = s.first_failure.as_ref();
    let rows = [
        ("suite", s.suite.to_string()),
        ("trials", s.trials.to_string()),
        ("dims", format!("{}..{}", s.dims[0], s.dims[1])),
        ("seed", s.seed.to_string()),
        ("tolerance", format!("{:e}", s.tolerance)),
        ("passed", s.passed.to_string()),
        ("failed", s.failed.to_string()),
        ("worst_metric", format!("{:e}", s.worst_metric)),
        ("first_failing_seed", first.map_or("none".into(), |f| f.seed.to_string())),
        ("first_failure", first.map_or("none".into(), |f| f.detail.clone())),
    ];
    let title = format!("sweep {}: {}/{} passed", s.suite, s.passed, s.trials);
    let csv = {
        let header: Vec<&str> = rows.iter().map(|(k, _)| *k).collect();
        let values: Vec<String> = rows.iter().map(|(_, v)| csv_field(v)).collect();
        format!("{}\n{}\n", header.join(","), values.join(","))
    };
    Report::new(s.all_passed(), &s, text_pairs(&title, &rows), csv)
}

fn csv_field(v: &str) -> String {
    if v.contains([',', '"', '\n']) {
        format!("\"{}\"", v.replace('"', "\"\""))
    } else {
        v.to_string()
    }
}
