//! Witnesses, counterexamples and the structured random ensembles.

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::criteria::{definite_flags, schur_pd_test};
use crate::error::{Error, Result};
use crate::linalg::{matrix_abs, positivity, random_gaussian, random_psd_with, random_unitary, seeded_rng, PositivityVerdict};
use crate::matrix::{ComplexMatrix, HermitianMatrix, PsdBlockMatrix, C64, ZERO};
use crate::norms::{dominance, DominanceReport, DominanceVerdict};
use crate::tol;

/// `[[A, lX], [lX*, 0]]` strictly dominating `A ⊕ 0` at every k.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AmplifierWitness {
    pub l: u64,
    pub amplified: HermitianMatrix,
    pub dominance: DominanceReport,
    pub psd_verdict: PositivityVerdict,
    /// `I(X)` was not definite but `R(X)` was, so `iX` carried the precondition.
    pub rotated: bool,
}

/// Smallest integer `l ≤ l_max` with `‖[[A, lX], [lX*, 0]]‖_k > ‖A‖_k` for all k.
///
/// Requires `I(X)` definite; an input with `R(X)` definite is accepted as
/// well, since `X ↦ iX` is a unitary congruence of the block matrix and swaps
/// the two parts.
pub fn amplify_offdiag(a: &HermitianMatrix, x: &ComplexMatrix, l_max: u64) -> Result<AmplifierWitness> {
    if !x.is_square() || x.rows() != a.dim() {
        return Err(Error::DimensionMismatch(format!(
            "X is {}x{} but A is {2}x{2}",
            x.rows(),
            x.cols(),
            a.dim()
        )));
    }
    let va = positivity(a, tol::PSD)?;
    if !va.is_psd() {
        return Err(Error::NotPsd { min_eigenvalue: va.min_eigenvalue });
    }
    let flags = definite_flags(x)?;
    let rotated = if flags.imag_positive || flags.imag_negative {
        false
    } else if flags.real_positive || flags.real_negative {
        true
    } else {
        return Err(Error::PreconditionIXNotDefinite);
    };

    let zero = HermitianMatrix::zeros(a.dim());
    for l in 1..=l_max {
        let block = PsdBlockMatrix::assemble(a.clone(), x.scale(C64::new(l as f64, 0.0)), zero.clone())?;
        let amplified = block.full();
        let report = dominance(amplified.matrix(), a.matrix(), tol::DOMINANCE)?;
        if report.verdict == DominanceVerdict::StrictlyDominates {
            let psd_verdict = positivity(&amplified, tol::PSD)?;
            return Ok(AmplifierWitness { l, amplified, dominance: report, psd_verdict, rotated });
        }
    }
    Err(Error::LMaxExceeded { l_max })
}

/// Minimal `t` with `F_t = [[tA, X], [X*, tB]]` positive definite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingWitness {
    pub t: u64,
    #[serde(rename = "F_t")]
    pub f_t: PsdBlockMatrix,
    pub certificate: PositivityVerdict,
    /// Verdict for `F_{t−1}`, absent when `t = 1`.
    pub previous: Option<PositivityVerdict>,
}

fn scaled(a: &HermitianMatrix, x: &ComplexMatrix, b: &HermitianMatrix, t: u64) -> Result<PsdBlockMatrix> {
    let t = t as f64;
    PsdBlockMatrix::assemble(a.scale(t), x.clone(), b.scale(t))
}

pub fn find_scaling_t(a: &HermitianMatrix, x: &ComplexMatrix, b: &HermitianMatrix, t_max: u64) -> Result<ScalingWitness> {
    for h in [a, b] {
        let v = positivity(h, tol::PSD)?;
        if !v.is_pd() {
            return Err(Error::NotPd { min_eigenvalue: v.min_eigenvalue });
        }
    }
    for t in 1..=t_max {
        let tf = t as f64;
        if schur_pd_test(&a.scale(tf), x, &b.scale(tf), true)? {
            let f_t = scaled(a, x, b, t)?;
            let certificate = positivity(&f_t.full(), tol::PSD)?;
            let previous = match t {
                1 => None,
                _ => Some(positivity(&scaled(a, x, b, t - 1)?.full(), tol::PSD)?),
            };
            return Ok(ScalingWitness { t, f_t, certificate, previous });
        }
    }
    Err(Error::TMaxExceeded { t_max })
}

/// `N = [[diag(a), diag(x)], [diag(x̄), diag(b)]]` with neither `N` nor `−N` PSD.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlpWitness {
    #[serde(rename = "N")]
    pub n: HermitianMatrix,
    /// `N` against `diag(a) + diag(b)`.
    pub report: DominanceReport,
    pub n_verdict: PositivityVerdict,
    pub neg_n_verdict: PositivityVerdict,
}

// negated comparisons so that NaN fails every condition
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn build_plp(a: &[f64], b: &[f64], x: &[C64]) -> Result<PlpWitness> {
    if a.len() != b.len() || a.len() != x.len() {
        return Err(Error::LengthMismatch(format!("a {}, b {}, x {}", a.len(), b.len(), x.len())));
    }
    for i in 0..a.len() {
        let d = x[i].norm_sqr();
        let violated = if !(a[i] >= 0.0) {
            Some("a_i >= 0")
        } else if !(b[i] < 0.0) {
            Some("b_i < 0")
        } else if !(a[i] + b[i] >= 0.0) {
            Some("a_i + b_i >= 0")
        } else if !(a[i] * b[i] - d < 0.0) {
            Some("a_i*b_i - |x_i|^2 < 0")
        } else {
            None
        };
        if let Some(condition) = violated {
            return Err(Error::PreconditionViolated { index: i, condition: condition.to_string() });
        }
    }
    let block = PsdBlockMatrix::assemble(
        HermitianMatrix::from_real_diagonal(a),
        ComplexMatrix::from_diagonal(x),
        HermitianMatrix::from_real_diagonal(b),
    )?;
    let n = block.full();
    let report = dominance(n.matrix(), block.a_plus_b()?.matrix(), tol::DOMINANCE)?;
    let n_verdict = positivity(&n, tol::PSD)?;
    let neg_n_verdict = positivity(&n.scale(-1.0), tol::PSD)?;
    Ok(PlpWitness { n, report, n_verdict, neg_n_verdict })
}

/// `A = diag(x, 0.99)`, `B = diag(0.99, 0.5)`, `X = diag(i/2, −i/2)`.
pub fn example_mx(x: f64) -> PsdBlockMatrix {
    PsdBlockMatrix::assemble(
        HermitianMatrix::from_real_diagonal(&[x, 0.99]),
        ComplexMatrix::from_diagonal(&[C64::new(0.0, 0.5), C64::new(0.0, -0.5)]),
        HermitianMatrix::from_real_diagonal(&[0.99, 0.5]),
    )
    .expect("fixed 2x2 blocks")
}

/// The 4×4 positive definite matrix whose spectral norm exceeds `‖A+B‖_s = 3`.
pub fn example_c() -> PsdBlockMatrix {
    PsdBlockMatrix::assemble(
        HermitianMatrix::from_real_diagonal(&[4.0 / 3.0, 1.0]),
        ComplexMatrix::from_real_rows(&[vec![1.0, -1.0], vec![0.0, 0.2]]).expect("fixed 2x2 block"),
        HermitianMatrix::from_real_diagonal(&[1.5, 2.0]),
    )
    .expect("fixed 2x2 blocks")
}

/// `N_y = [[2,0,0,2],[0,y,0,0],[0,0,1,0],[2,0,0,2]]`, eigenvalues `{4, 1, y, 0}`.
pub fn example_ny(y: f64) -> PsdBlockMatrix {
    PsdBlockMatrix::assemble(
        HermitianMatrix::from_real_diagonal(&[2.0, y]),
        ComplexMatrix::from_real_rows(&[vec![0.0, 2.0], vec![0.0, 0.0]]).expect("fixed 2x2 block"),
        HermitianMatrix::from_real_diagonal(&[1.0, 2.0]),
    )
    .expect("fixed 2x2 blocks")
}

/// PSD block matrix with a Hermitian off-diagonal block:
/// `[[|X|, X], [X, |X|]] + (A₀ ⊕ B₀)` for Hermitian `X` and PSD `A₀`, `B₀`.
pub fn random_hermitian_offdiag_psd(n: usize, seed: u64) -> PsdBlockMatrix {
    let mut rng = seeded_rng(seed);
    let x = HermitianMatrix::symmetrize(&random_gaussian(n, n, &mut rng));
    let abs = matrix_abs(x.matrix()).expect("square");
    let a0 = random_psd_with(n, &mut rng).scale(rng.random_range(0.0..1.0));
    let b0 = random_psd_with(n, &mut rng).scale(rng.random_range(0.0..1.0));
    let a = abs.try_add(&a0).expect("equal sizes");
    let b = abs.try_add(&b0).expect("equal sizes");
    PsdBlockMatrix::assemble(a, x.into_matrix(), b)
        .expect("equal sizes")
        .certify(tol::PSD)
        .expect("PSD by construction")
}

/// `A = W Da W*`, `B = W Db W*`, `X = W Dx W*` with `|Dx_i|² < Da_i Db_i`.
pub fn random_commuting_normal_instance(n: usize, seed: u64) -> PsdBlockMatrix {
    let mut rng = seeded_rng(seed);
    let w = random_unitary(n, &mut rng);
    let da: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..2.0)).collect();
    let db: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..2.0)).collect();
    let dx: Vec<C64> = da
        .iter()
        .zip(&db)
        .map(|(a, b)| {
            let r = (a * b).sqrt() * rng.random_range(0.0..0.999);
            C64::from_polar(r, rng.random_range(0.0..std::f64::consts::TAU))
        })
        .collect();
    let conj = |d: &ComplexMatrix| &(&w * d) * &w.adjoint();
    let a = HermitianMatrix::symmetrize(&conj(&ComplexMatrix::from_real_diagonal(&da)));
    let b = HermitianMatrix::symmetrize(&conj(&ComplexMatrix::from_real_diagonal(&db)));
    let x = conj(&ComplexMatrix::from_diagonal(&dx));
    PsdBlockMatrix::assemble(a, x, b).expect("equal sizes").certify(tol::PSD).expect("PSD by construction")
}

/// A block matrix `[[diag(λ), X], [X*, diag(ν)]]` with `X*X = diag(d)` and
/// `X*` commuting with `diag(λ)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PwwInstance {
    pub lambda: Vec<f64>,
    pub nu: Vec<f64>,
    pub d: Vec<f64>,
    #[serde(rename = "X")]
    pub x: ComplexMatrix,
}

impl PwwInstance {
    pub fn block(&self) -> PsdBlockMatrix {
        PsdBlockMatrix::assemble(
            HermitianMatrix::from_real_diagonal(&self.lambda),
            self.x.clone(),
            HermitianMatrix::from_real_diagonal(&self.nu),
        )
        .expect("sizes fixed at generation")
    }
}

/// `X = Q diag(s)` with `Q` unitary inside each group of equal `λ`. About a
/// third of the instances violate `d_i ≤ λ_i ν_i` and are not PSD.
pub fn random_pww_instance(n: usize, seed: u64) -> PwwInstance {
    let mut rng = seeded_rng(seed);
    let palette: Vec<f64> = (0..rng.random_range(1..=n)).map(|_| rng.random_range(0.0..2.0)).collect();
    let lambda: Vec<f64> = (0..n).map(|_| palette[rng.random_range(0..palette.len())]).collect();
    let nu: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..2.0)).collect();
    let d: Vec<f64> = lambda.iter().zip(&nu).map(|(l, v)| l * v * rng.random_range(0.0..1.5)).collect();

    let mut q = DMatrix::from_element(n, n, ZERO);
    for &value in &palette {
        let idx: Vec<usize> = (0..n).filter(|&i| lambda[i] == value).collect();
        if idx.is_empty() {
            continue;
        }
        let u = random_unitary(idx.len(), &mut rng);
        for (r, &i) in idx.iter().enumerate() {
            for (c, &j) in idx.iter().enumerate() {
                q[(i, j)] = u.get(r, c);
            }
        }
    }
    let s: Vec<C64> = d.iter().map(|di| C64::from_polar(di.sqrt(), rng.random_range(0.0..std::f64::consts::TAU))).collect();
    let x = &ComplexMatrix::from_raw(q) * &ComplexMatrix::from_diagonal(&s);
    PwwInstance { lambda, nu, d, x }
}
