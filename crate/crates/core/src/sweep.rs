//! Seeded property sweeps over random ensembles.
//!
//! Each trial derives its own seed from the base seed and its index, so the
//! summary does not depend on whether trials ran sequentially or in parallel.

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::constructions::{random_commuting_normal_instance, random_hermitian_offdiag_psd, random_pww_instance};
use crate::criteria::{
    block_det, check_main_inequality, X_COMMUTES_B, X_NORMAL, XSTAR_COMMUTES_A, ordered_diagonalization, pooled_roots, pww_eigenvalues, schur_pd_test,
    verify_commuting_normal_case, zero_block_verdict,
};
use crate::decompose::{
    corollary_abs_bound, corollary_i_decompose, corollary_r_decompose, imag_midpoints, lemma1_decompose,
    real_midpoints, verify_decomposition,
};
use crate::error::{Error, Result};
use crate::linalg::{
    determinant, eigenvalues_desc, positivity, random_gaussian, random_psd_with, seeded_rng,
};
use crate::matrix::{ComplexMatrix, HermitianMatrix, PsdBlockMatrix, C64};
use crate::norms::{dominance, singular_values};
use crate::tol;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    /// Unitary-orbit reconstruction, including `n ≠ m`.
    Lemma1,
    /// Ky Fan subadditivity over the diagonal blocks.
    Remark1,
    /// `(A+B)/2 ± R(X)` and `± I(X)` PSD, rotated decompositions and the `|X − X*|` bound.
    Midpoints,
    HermitianX,
    Pww,
    NormalX,
    /// No PSD `[[A, X], [X*, 0]]` with nonzero `X`.
    ZeroBlock,
    SchurAgree,
    DetAgree,
    /// Ky Fan additivity of the ordered diagonal forms.
    Ordered,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Lemma1,
        Suite::Remark1,
        Suite::Midpoints,
        Suite::HermitianX,
        Suite::Pww,
        Suite::NormalX,
        Suite::ZeroBlock,
        Suite::SchurAgree,
        Suite::DetAgree,
        Suite::Ordered,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lemma1 => "lemma1",
            Suite::Remark1 => "remark1",
            Suite::Midpoints => "midpoints",
            Suite::HermitianX => "hermitian_x",
            Suite::Pww => "pww",
            Suite::NormalX => "normal_x",
            Suite::ZeroBlock => "zero_block",
            Suite::SchurAgree => "schur_agree",
            Suite::DetAgree => "det_agree",
            Suite::Ordered => "ordered",
        }
    }

    /// Tolerance used when the config does not set one.
    pub fn default_tol(self) -> f64 {
        match self {
            Suite::Lemma1 | Suite::Pww | Suite::Ordered | Suite::Remark1 => 1e-9,
            Suite::Midpoints | Suite::ZeroBlock => 1e-10,
            Suite::DetAgree => 1e-8,
            Suite::HermitianX | Suite::NormalX | Suite::SchurAgree => tol::DOMINANCE,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL.into_iter().find(|suite| suite.name() == s).ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub suite: Suite,
    pub trials: usize,
    /// Block sizes drawn uniformly from this range.
    pub dims: RangeInclusive<usize>,
    pub seed: u64,
    pub tol: Option<f64>,
}

impl SweepConfig {
    pub fn new(suite: Suite, trials: usize, dims: RangeInclusive<usize>, seed: u64) -> Self {
        Self { suite, trials, dims, seed, tol: None }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidSweep("trials must be at least 1".into()));
        }
        if self.dims.is_empty() || *self.dims.start() == 0 {
            return Err(Error::InvalidSweep(format!(
                "dims {}..{} must be a nonempty range of positive sizes",
                self.dims.start(),
                self.dims.end()
            )));
        }
        if let Some(t) = self.tol {
            if !(t.is_finite() && t > 0.0) {
                return Err(Error::InvalidSweep(format!("tol must be positive, got {t}")));
            }
        }
        Ok(())
    }

    pub fn effective_tol(&self) -> f64 {
        self.tol.unwrap_or_else(|| self.suite.default_tol())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub index: usize,
    pub seed: u64,
    pub dim: usize,
    pub passed: bool,
    /// Worst observed quantity for the suite (residual, margin, …).
    pub metric: f64,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub suite: Suite,
    pub trials: usize,
    pub dims: [usize; 2],
    pub seed: u64,
    pub tolerance: f64,
    pub passed: usize,
    pub failed: usize,
    /// Largest `metric` across trials.
    pub worst_metric: f64,
    pub first_failure: Option<TrialOutcome>,
}

impl SweepSummary {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

/// SplitMix64 finalizer; decorrelates nearby base seeds and indices.
pub fn trial_seed(base: u64, index: usize) -> u64 {
    let mut z = base.wrapping_add((index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn run_sweep(config: &SweepConfig, execution: Execution) -> Result<SweepSummary> {
    config.validate()?;
    let outcomes = run_trials(config, execution);
    Ok(summarize(config, &outcomes))
}

/// Every trial outcome, ordered by index.
pub fn run_trials(config: &SweepConfig, execution: Execution) -> Vec<TrialOutcome> {
    let job = |i: usize| run_trial(config, i);
    match execution {
        Execution::Sequential => (0..config.trials).map(job).collect(),
        Execution::Parallel => parallel_map(config.trials, job),
    }
}

#[cfg(feature = "parallel")]
fn parallel_map<F: Fn(usize) -> TrialOutcome + Sync + Send>(n: usize, f: F) -> Vec<TrialOutcome> {
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn parallel_map<F: Fn(usize) -> TrialOutcome>(n: usize, f: F) -> Vec<TrialOutcome> {
    (0..n).map(f).collect()
}

fn summarize(config: &SweepConfig, outcomes: &[TrialOutcome]) -> SweepSummary {
    let passed = outcomes.iter().filter(|o| o.passed).count();
    SweepSummary {
        suite: config.suite,
        trials: config.trials,
        dims: [*config.dims.start(), *config.dims.end()],
        seed: config.seed,
        tolerance: config.effective_tol(),
        passed,
        failed: outcomes.len() - passed,
        worst_metric: outcomes.iter().map(|o| o.metric).fold(f64::NEG_INFINITY, f64::max),
        first_failure: outcomes.iter().find(|o| !o.passed).cloned(),
    }
}

pub fn run_trial(config: &SweepConfig, index: usize) -> TrialOutcome {
    let seed = trial_seed(config.seed, index);
    let mut rng = seeded_rng(seed);
    let dim = rng.random_range(config.dims.clone());
    let tol = config.effective_tol();
    let result = match config.suite {
        Suite::Lemma1 => lemma1_trial(dim, &mut rng, tol),
        Suite::Remark1 => remark1_trial(dim, &mut rng, tol),
        Suite::Midpoints => midpoints_trial(dim, &mut rng, tol),
        Suite::HermitianX => hermitian_x_trial(dim, seed),
        Suite::Pww => pww_trial(dim, seed, tol),
        Suite::NormalX => normal_x_trial(dim, seed),
        Suite::ZeroBlock => zero_block_trial(dim, &mut rng, tol),
        Suite::SchurAgree => schur_trial(dim, &mut rng),
        Suite::DetAgree => det_trial(dim, &mut rng, tol),
        Suite::Ordered => ordered_trial(dim, &mut rng, tol),
    };
    let (passed, metric, detail) = match result {
        Ok(check) => (check.passed, check.metric, check.detail),
        Err(e) => (false, f64::INFINITY, format!("error: {e}")),
    };
    TrialOutcome { index, seed, dim, passed, metric, detail }
}

struct Check {
    passed: bool,
    metric: f64,
    detail: String,
}

impl Check {
    /// Passes when `metric ≤ limit`.
    fn at_most(metric: f64, limit: f64, what: &str) -> Self {
        Check { passed: metric <= limit, metric, detail: format!("{what} {metric:.3e} (limit {limit:.1e})") }
    }

    fn flag(passed: bool, detail: impl Into<String>) -> Self {
        Check { passed, metric: if passed { 0.0 } else { 1.0 }, detail: detail.into() }
    }

    fn and(self, other: Check) -> Check {
        let detail = if !self.passed { self.detail } else { other.detail };
        Check { passed: self.passed && other.passed, metric: self.metric.max(other.metric), detail }
    }
}

/// PSD `G*G` where `G` has between 1 and `dim` rows, so rank-deficient
/// matrices show up regularly.
pub fn random_psd_of_random_rank<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> HermitianMatrix {
    let rank = rng.random_range(1..=dim);
    let g = random_gaussian(rank, dim, rng);
    HermitianMatrix::symmetrize(&(&g.adjoint() * &g))
}

fn random_block<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Result<PsdBlockMatrix> {
    PsdBlockMatrix::split(&random_psd_of_random_rank(n + m, rng), n)
}

fn lemma1_trial<R: Rng + ?Sized>(n: usize, rng: &mut R, tol: f64) -> Result<Check> {
    let m = rng.random_range(1..=n + 1);
    let block = random_block(n, m, rng)?;
    let dec = lemma1_decompose(&block)?;
    let audit = verify_decomposition(&block, &dec)?;
    let recon = Check::at_most(audit.relative_residual, tol::RECONSTRUCTION, "relative residual");
    let unitary = Check::at_most(
        audit.unitarity_defect_u.max(audit.unitarity_defect_v),
        tol::UNITARY,
        "unitarity defect",
    );
    let summand_p = eigenvalues_desc(&dec.p.congruence(&dec.u))?;
    let summand_q = eigenvalues_desc(&dec.q.congruence(&dec.v))?;
    let spectrum_gap = spectrum_distance(&summand_p, &eigenvalues_desc(block.a())?)
        .max(spectrum_distance(&summand_q, &eigenvalues_desc(block.b())?));
    let spectra = Check::at_most(spectrum_gap, tol, "summand spectrum gap");
    Ok(recon.and(unitary).and(spectra))
}

/// Compares the leading entries of `full` (padded spectrum) with `block`;
/// the remaining entries of `full` should vanish.
fn spectrum_distance(full: &[f64], block: &[f64]) -> f64 {
    full.iter()
        .enumerate()
        .map(|(i, v)| (v - block.get(i).copied().unwrap_or(0.0)).abs())
        .fold(0.0, f64::max)
}

fn remark1_trial<R: Rng + ?Sized>(n: usize, rng: &mut R, tol: f64) -> Result<Check> {
    let m = rng.random_range(1..=n);
    let block = random_block(n, m, rng)?;
    let sm = singular_values(block.full().matrix())?;
    let sa = singular_values(block.a().matrix())?;
    let sb = singular_values(block.b().matrix())?;
    let excess = (1..=n + m).map(|k| sm.ky_fan(k) - sa.ky_fan(k) - sb.ky_fan(k)).fold(f64::NEG_INFINITY, f64::max);
    Ok(Check::at_most(excess, tol, "max Ky Fan excess"))
}

fn midpoints_trial<R: Rng + ?Sized>(n: usize, rng: &mut R, tol: f64) -> Result<Check> {
    let block = random_block(n, n, rng)?;
    let (rp, rm) = real_midpoints(&block)?;
    let (ip, im) = imag_midpoints(&block)?;
    let mut worst = f64::INFINITY;
    for h in [&rp, &rm, &ip, &im] {
        worst = worst.min(positivity(h, tol::PSD)?.min_eigenvalue);
    }
    let mids = Check::at_most(-worst, tol, "negated min midpoint eigenvalue");
    let r = verify_decomposition(&block, &corollary_r_decompose(&block)?)?;
    let i = verify_decomposition(&block, &corollary_i_decompose(&block)?)?;
    let rotated = Check::flag(r.is_valid() && i.is_valid(), "rotated decompositions");
    let gap = corollary_abs_bound(&block)?.min_gap();
    let bound = Check::at_most(-gap, tol, "negated min bound gap");
    Ok(mids.and(rotated).and(bound))
}

fn hermitian_x_trial(n: usize, seed: u64) -> Result<Check> {
    let report = check_main_inequality(&random_hermitian_offdiag_psd(n, seed))?;
    let worst = report.dominance.worst_margin().map_or(0.0, |(_, m)| m);
    Ok(Check {
        passed: report.theorem_applies && report.conclusion_holds,
        metric: -worst,
        detail: format!("verdict {:?}, worst margin {worst:.3e}", report.dominance.verdict),
    })
}

fn pww_trial(n: usize, seed: u64, tol: f64) -> Result<Check> {
    let inst = random_pww_instance(n, seed);
    let full = inst.block().full();
    let eig = eigenvalues_desc(&full)?;
    let roots = pooled_roots(&pww_eigenvalues(&inst.lambda, &inst.nu, &inst.d)?);
    let dist = eig.iter().zip(&roots).map(|(e, r)| (e - r).abs()).fold(0.0, f64::max);
    let roots_match = Check::at_most(dist, tol, "root mismatch");
    if !positivity(&full, tol::PSD)?.is_psd() {
        return Ok(roots_match);
    }
    let block = inst.block();
    let report = dominance(full.matrix(), block.a_plus_b()?.matrix(), tol::DOMINANCE)?;
    Ok(roots_match.and(Check::flag(report.verdict.lhs_le_rhs(), format!("PSD instance verdict {:?}", report.verdict))))
}

fn normal_x_trial(n: usize, seed: u64) -> Result<Check> {
    let report = verify_commuting_normal_case(&random_commuting_normal_instance(n, seed))?;
    let all = [X_NORMAL, XSTAR_COMMUTES_A, X_COMMUTES_B].iter().all(|h| report.hypothesis(h) == Some(true));
    Ok(Check::flag(
        all && report.theorem_applies && report.conclusion_holds,
        format!("verdict {:?}", report.dominance.verdict),
    ))
}

fn zero_block_trial<R: Rng + ?Sized>(n: usize, rng: &mut R, tol: f64) -> Result<Check> {
    let a = random_psd_of_random_rank(n, rng).scale(rng.random_range(0.1..10.0));
    let scale = 10f64.powf(rng.random_range(-2.0..1.0));
    let x = random_gaussian(n, n, rng).scale(C64::new(scale, 0.0));
    let v = zero_block_verdict(&a, &x)?;
    let offending = v.is_psd && v.offdiag_norm > tol;
    Ok(Check {
        passed: !offending,
        metric: if offending { v.offdiag_norm } else { 0.0 },
        detail: format!("min eigenvalue {:.3e}, ‖X‖_F {:.3e}", v.positivity.min_eigenvalue, v.offdiag_norm),
    })
}

fn schur_trial<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Check> {
    let m = rng.random_range(1..=n);
    let a = random_psd_with(n, rng).try_add(&HermitianMatrix::identity(n).scale(rng.random_range(0.0..1.0)))?;
    let b = random_psd_with(m, rng).try_add(&HermitianMatrix::identity(m).scale(rng.random_range(0.05..1.0)))?;
    let scale = 10f64.powf(rng.random_range(-1.5..0.5));
    let x = random_gaussian(n, m, rng).scale(C64::new(scale, 0.0));
    let schur = schur_pd_test(&a, &x, &b, true)?;
    let direct = positivity(&PsdBlockMatrix::assemble(a, x, b)?.full(), tol::PSD)?.is_pd();
    Ok(Check::flag(schur == direct, format!("schur {schur}, eigensolver {direct}")))
}

/// `A`, `C` are polynomials in one random matrix, so they commute.
fn det_trial<R: Rng + ?Sized>(n: usize, rng: &mut R, tol: f64) -> Result<Check> {
    let z = random_gaussian(n, n, rng);
    let id = ComplexMatrix::identity(n);
    let poly = |rng: &mut R| {
        let c1 = crate::linalg::complex_normal(rng);
        let c0 = crate::linalg::complex_normal(rng);
        &(&(&z * &z) + &z.scale(c1)) + &id.scale(c0)
    };
    let a = poly(rng);
    let c = poly(rng);
    let b = random_gaussian(n, n, rng);
    let d = random_gaussian(n, n, rng);
    let got = block_det(&a, &b, &c, &d)?;
    let want = determinant(&ComplexMatrix::from_blocks(&a, &b, &c, &d)?)?;
    let rel = (got - want).norm() / want.norm().max(1.0);
    Ok(Check::at_most(rel, tol, "relative determinant gap"))
}

fn ordered_trial<R: Rng + ?Sized>(n: usize, rng: &mut R, tol: f64) -> Result<Check> {
    let a = random_psd_of_random_rank(n, rng);
    let b = random_psd_of_random_rank(n, rng);
    let od = ordered_diagonalization(&a, &b)?;
    let s = singular_values(&(&od.d_matrix() + &od.g_matrix()))?;
    let (sa, sb) = (singular_values(a.matrix())?, singular_values(b.matrix())?);
    let gap = (1..=n).map(|k| (s.ky_fan(k) - sa.ky_fan(k) - sb.ky_fan(k)).abs()).fold(0.0, f64::max);
    Ok(Check::at_most(gap, tol, "Ky Fan additivity gap"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(suite: Suite, trials: usize) -> SweepConfig {
        SweepConfig::new(suite, trials, 1..=4, 7)
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
            assert_eq!(serde_json::to_value(s).unwrap(), s.name());
        }
        assert_eq!("nope".parse::<Suite>(), Err(Error::UnknownSuite("nope".into())));
    }

    #[test]
    fn validation() {
        assert!(matches!(config(Suite::DetAgree, 0).validate(), Err(Error::InvalidSweep(_))));
        let mut c = config(Suite::Pww, 3);
        c.dims = 0..=3;
        assert!(c.validate().is_err());
        c.dims = 1..=3;
        c.tol = Some(-1.0);
        assert!(c.validate().is_err());
        assert!(run_sweep(&config(Suite::DetAgree, 0), Execution::Sequential).is_err());
    }

    #[test]
    fn trial_seeds_distinct() {
        let seeds: std::collections::HashSet<u64> = (0..1000).map(|i| trial_seed(1, i)).collect();
        assert_eq!(seeds.len(), 1000);
        assert_ne!(trial_seed(1, 0), trial_seed(2, 0));
    }

    #[test]
    fn every_suite_passes_a_short_run() {
        for s in Suite::ALL {
            let summary = run_sweep(&config(s, 12), Execution::Sequential).unwrap();
            assert!(summary.all_passed(), "{s}: {:?}", summary.first_failure);
            assert_eq!(summary.passed, 12);
        }
    }

    #[test]
    fn sequential_and_parallel_agree() {
        for s in [Suite::Remark1, Suite::ZeroBlock, Suite::SchurAgree] {
            let c = config(s, 24);
            let seq = run_sweep(&c, Execution::Sequential).unwrap();
            let par = run_sweep(&c, Execution::Parallel).unwrap();
            assert_eq!(serde_json::to_string(&seq).unwrap(), serde_json::to_string(&par).unwrap());
        }
    }

    #[test]
    fn dims_respected() {
        let c = SweepConfig::new(Suite::Remark1, 40, 2..=3, 5);
        assert!(run_trials(&c, Execution::Sequential).iter().all(|o| (2..=3).contains(&o.dim)));
    }
}
