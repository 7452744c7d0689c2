//! Quantumness measures: skew information, local quantum uncertainty,
//! geometric-discord and measurement-induced-nonlocality bounds, scaled
//! discord and negativity.

use std::collections::HashMap;
use std::sync::{Arc, LazyLock, Mutex};

use crate::error::{Error, Result};
use crate::linalg::{herm_eig, kron, partial_transpose, psd_sqrt, C64, CMatrix, Party};
use crate::ortho::OrthoState;
use crate::sun::GeneratorSet;

/// Shared generator sets, built once per subsystem dimension.
static GENERATORS: LazyLock<Mutex<HashMap<usize, Arc<GeneratorSet>>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

pub fn generators_cached(n: usize) -> Result<Arc<GeneratorSet>> {
    let mut map = GENERATORS.lock().unwrap();
    if let Some(gs) = map.get(&n) {
        return Ok(gs.clone());
    }
    let gs = Arc::new(GeneratorSet::new(n)?);
    map.insert(n, gs.clone());
    Ok(gs)
}

/// Non-normalized maximum of geometric discord per subsystem dimension,
/// found numerically by `oracles::oracle_dg_max` and cached. The scan
/// uses a fixed builtin seed so the constant does not depend on any
/// user-supplied seed.
static DG_MAX: LazyLock<Mutex<HashMap<usize, f64>>> = LazyLock::new(|| Mutex::new(HashMap::new()));

const DG_MAX_SEED: u64 = 0x71c0_44b5;

pub fn dg_max_cached(n: usize) -> Result<f64> {
    {
        let map = DG_MAX.lock().unwrap();
        if let Some(&v) = map.get(&n) {
            return Ok(v);
        }
    }
    let cfg = crate::oracles::OptimizerConfig {
        seeds: 16,
        rng_seed: DG_MAX_SEED,
        max_iters: 1500,
        value_tol: 1e-9,
        step_tol: 1e-10,
    };
    let v = crate::oracles::oracle_dg_max(n, &cfg)?;
    DG_MAX.lock().unwrap().insert(n, v);
    Ok(v)
}

/// Skew information I(rho, K) = tr(rho K^2) - tr(sqrt(rho) K sqrt(rho) K).
pub fn skew_information(rho: &CMatrix, k: &CMatrix) -> Result<f64> {
    if rho.dim() != k.dim() {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: k.dim(),
        });
    }
    let s = psd_sqrt(rho)?;
    Ok(skew_information_with_sqrt(rho, &s, k))
}

/// Same, with sqrt(rho) already available (hot path for the optimizer).
pub fn skew_information_with_sqrt(rho: &CMatrix, sqrt_rho: &CMatrix, k: &CMatrix) -> f64 {
    let rk = rho.mul(k);
    let first = rk.trace_mul(k).re;
    let sk = sqrt_rho.mul(k);
    let second = sk.trace_mul(&sk).re;
    first - second
}

/// Variance tr(rho K^2) - tr(rho K)^2; an upper bound on the skew
/// information, saturated by pure states.
pub fn variance(rho: &CMatrix, k: &CMatrix) -> Result<f64> {
    if rho.dim() != k.dim() {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: k.dim(),
        });
    }
    let rk = rho.mul(k);
    let mean = rk.trace().re;
    Ok(rk.trace_mul(k).re - mean * mean)
}

/// The matrix w_ij = tr{sqrt(rho) (l_i (x) I) sqrt(rho) (l_j (x) I)}
/// over party-A generators. Real, symmetric and positive semidefinite;
/// diagonal when rho is orthogonally invariant.
#[derive(Debug, Clone)]
pub struct WMatrix {
    mat: CMatrix,
}

impl WMatrix {
    pub fn as_matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.mat.dim()).map(|i| self.mat.at(i, i).re).collect()
    }

    pub fn off_diagonal_max(&self) -> f64 {
        let m = self.mat.dim();
        let mut worst = 0.0f64;
        for i in 0..m {
            for j in 0..m {
                if i != j {
                    worst = worst.max(self.mat.at(i, j).norm());
                }
            }
        }
        worst
    }

    pub fn lambda_max(&self) -> f64 {
        let eig = herm_eig(&self.mat).expect("W is symmetric");
        *eig.eigenvalues.last().unwrap()
    }
}

/// Build the W matrix for a bipartite state; the B-side dimension is
/// inferred from dim(rho) = n * n_b.
pub fn w_matrix(rho: &CMatrix, gs: &GeneratorSet) -> Result<WMatrix> {
    let n = gs.n();
    if !rho.dim().is_multiple_of(n) {
        return Err(Error::BadBipartition {
            dim: rho.dim(),
            na: n,
            nb: 0,
        });
    }
    let nb = rho.dim() / n;
    let s = psd_sqrt(rho)?;
    let m = gs.len();
    // X_i = sqrt(rho) (l_i (x) I) sqrt(rho), then w_ij = tr(X_i (l_j (x) I))
    let xi: Vec<CMatrix> = (0..m)
        .map(|i| {
            let big = kron(gs.lambda(i), &CMatrix::identity(nb));
            s.mul(&big).mul(&s)
        })
        .collect();
    let mut w = CMatrix::zeros(m);
    for i in 0..m {
        for j in 0..m {
            let t = trace_mul_kron_a(&xi[i], gs.lambda(j), nb);
            w.set(i, j, C64::new(t.re, 0.0));
        }
    }
    Ok(WMatrix { mat: w.hermitize() })
}

/// tr(M (K_A (x) I_nb)) without forming the Kronecker product.
pub(crate) fn trace_mul_kron_a(m: &CMatrix, ka: &CMatrix, nb: usize) -> C64 {
    let na = ka.dim();
    debug_assert_eq!(m.dim(), na * nb);
    let mut t = C64::new(0.0, 0.0);
    for a in 0..na {
        for ap in 0..na {
            let k = ka.at(ap, a);
            if k.norm_sqr() == 0.0 {
                continue;
            }
            for b in 0..nb {
                t += m.at(a * nb + b, ap * nb + b) * k;
            }
        }
    }
    t
}

/// M * (K_A (x) I_nb) without forming the Kronecker product.
pub(crate) fn mul_kron_a(m: &CMatrix, ka: &CMatrix, nb: usize) -> CMatrix {
    let na = ka.dim();
    debug_assert_eq!(m.dim(), na * nb);
    let dim = m.dim();
    let mut out = CMatrix::zeros(dim);
    for i in 0..dim {
        for ap in 0..na {
            for bp in 0..nb {
                let mut v = C64::new(0.0, 0.0);
                for app in 0..na {
                    v += m.at(i, app * nb + bp) * ka.at(app, ap);
                }
                out.set(i, ap * nb + bp, v);
            }
        }
    }
    out
}

/// Local quantum uncertainty of a 2 (x) n_b state: 1 - lambda_max(W)
/// with W built over the Pauli generators of party A.
pub fn lqu_2xn(rho: &CMatrix, nb: usize) -> Result<f64> {
    if nb == 0 || rho.dim() != 2 * nb {
        return Err(Error::PartyDimension {
            expected: 2,
            got: rho.dim().checked_div(nb).unwrap_or(0),
        });
    }
    let gs = generators_cached(2)?;
    let w = w_matrix(rho, &gs)?;
    Ok(1.0 - w.lambda_max())
}

/// Fixed-spectrum local quantum uncertainty of an orthogonally
/// invariant state: 2/n - 2(n a1^2 + 2|b1 c1| + 2 a1 b1 + 2 a1 c1).
pub fn lqu_ortho(s: &OrthoState) -> Result<f64> {
    let sc = s.sqrt_coeffs()?;
    let nf = s.n() as f64;
    Ok(2.0 / nf
        - 2.0
            * (nf * sc.a1 * sc.a1
                + 2.0 * (sc.b1 * sc.c1).abs()
                + 2.0 * sc.a1 * sc.b1
                + 2.0 * sc.a1 * sc.c1))
}

/// Explicit two-qutrit Werner curve (c = 0, b in [-1/6, 1/12]).
pub fn lqu_werner(b: f64) -> Result<f64> {
    let (lo, hi) = (-1.0 / 6.0, 1.0 / 12.0);
    if b < lo - 1e-12 || b > hi + 1e-12 {
        return Err(Error::ParameterRange { value: b, lo, hi });
    }
    let p = (1.0 - 12.0 * b).max(0.0).sqrt();
    let q = (1.0 + 6.0 * b).max(0.0).sqrt();
    Ok((1.0 - p * q) / 3.0 - b)
}

/// Explicit two-qutrit Isotropic curve (b = 0, c in [-1/24, 1/3]).
pub fn lqu_isotropic(c: f64) -> Result<f64> {
    let (lo, hi) = (-1.0 / 24.0, 1.0 / 3.0);
    if c < lo - 1e-12 || c > hi + 1e-12 {
        return Err(Error::ParameterRange { value: c, lo, hi });
    }
    let p = (1.0 - 3.0 * c).max(0.0).sqrt();
    let q = (1.0 + 24.0 * c).max(0.0).sqrt();
    Ok(4.0 / 27.0 * (1.0 - p * q) + 14.0 / 9.0 * c)
}

/// Reference non-degenerate spectrum for the fixed-spectrum observable
/// family: 0, +-1, ..., +-(n-1)/2 for odd n and +-1, ..., +-n/2 for
/// even n, rescaled so that tr K^2 = 2 (the norm of a unit generator
/// combination). For n = 2 and n = 3 the rescaling is the identity.
pub fn fixed_spectrum(n: usize) -> Vec<f64> {
    let mut spec = Vec::with_capacity(n);
    if n % 2 == 1 {
        let half = (n as i64 - 1) / 2;
        for k in -half..=half {
            spec.push(k as f64);
        }
    } else {
        let half = n as i64 / 2;
        for k in -half..=half {
            if k != 0 {
                spec.push(k as f64);
            }
        }
    }
    let sum_sq: f64 = spec.iter().map(|l| l * l).sum();
    let scale = (2.0 / sum_sq).sqrt();
    spec.iter_mut().for_each(|l| *l *= scale);
    spec
}

/// A local observable K = sum_i s_i l_i with a prescribed spectrum.
#[derive(Debug, Clone)]
pub struct SpectrumObservable {
    n: usize,
    coeffs: Vec<f64>,
    k: CMatrix,
    target_spectrum: Vec<f64>,
}

impl SpectrumObservable {
    pub fn new(gs: &GeneratorSet, coeffs: Vec<f64>, mut target_spectrum: Vec<f64>) -> Result<Self> {
        if coeffs.len() != gs.len() {
            return Err(Error::DimensionMismatch {
                left: coeffs.len(),
                right: gs.len(),
            });
        }
        let norm: f64 = coeffs.iter().map(|x| x * x).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::ParameterRange {
                value: norm,
                lo: 1.0,
                hi: 1.0,
            });
        }
        target_spectrum.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let k = gs.combine(&coeffs);
        Ok(SpectrumObservable {
            n: gs.n(),
            coeffs,
            k,
            target_spectrum,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.k
    }

    pub fn target_spectrum(&self) -> &[f64] {
        &self.target_spectrum
    }

    /// Do the eigenvalues of K match the target spectrum within `tol`?
    pub fn spectrum_ok(&self, tol: f64) -> bool {
        match herm_eig(&self.k) {
            Ok(eig) => eig
                .eigenvalues
                .iter()
                .zip(&self.target_spectrum)
                .all(|(got, want)| (got - want).abs() <= tol),
            Err(_) => false,
        }
    }
}

/// Index permutation mapping the textbook Gell-Mann ordering of SU(3)
/// onto this crate's block ordering (diagonal generators first).
const STD_GELLMANN_TO_BLOCK: [usize; 8] = [2, 5, 0, 3, 6, 4, 7, 1];

/// Cubic constraint residual for a two-qutrit observable K = s . l to
/// have the spectrum {-1, 0, 1}. Coefficients are in the textbook
/// Gell-Mann ordering (l_3 and l_8 diagonal). For unit |s| the
/// observable is traceless with tr K^2 = 2, so the spectrum condition
/// is det K = 0; the returned residual tr(K^3)/2 = sum_ijk d_ijk s_i s_j s_k
/// vanishes exactly on that set.
pub fn spectrum_constraint_residual(s: &[f64]) -> f64 {
    assert_eq!(s.len(), 8, "two-qutrit coefficient vector has length 8");
    let gs = generators_cached(3).expect("n = 3");
    let mut coeffs = [0.0; 8];
    for (std_idx, &block_idx) in STD_GELLMANN_TO_BLOCK.iter().enumerate() {
        coeffs[block_idx] = s[std_idx];
    }
    let k = gs.combine(&coeffs);
    let k2 = k.mul(&k);
    k2.trace_mul(&k).re / 2.0
}

/// Bloch vector and correlation matrix of an arbitrary n (x) n state by
/// direct traces: x_k = (n/2) tr(rho l_k (x) I), t_kl = (n^2/4) tr(rho l_k (x) l_l).
pub fn bloch_correlation_traces(rho: &CMatrix, gs: &GeneratorSet) -> Result<(Vec<f64>, CMatrix)> {
    let n = gs.n();
    if rho.dim() != n * n {
        return Err(Error::BadBipartition {
            dim: rho.dim(),
            na: n,
            nb: n,
        });
    }
    let nf = n as f64;
    let m = gs.len();
    let x: Vec<f64> = (0..m)
        .map(|k| nf / 2.0 * trace_mul_kron_a(rho, gs.lambda(k), n).re)
        .collect();
    let mut t = CMatrix::zeros(m);
    for k in 0..m {
        for l in 0..m {
            let big = kron(gs.lambda(k), gs.lambda(l));
            let v = nf * nf / 4.0 * rho.trace_mul(&big).re;
            t.set(k, l, C64::new(v, 0.0));
        }
    }
    Ok((x, t))
}

fn eigenvalues_desc(m: &CMatrix) -> Vec<f64> {
    let mut e = herm_eig(m).expect("symmetric input").eigenvalues;
    e.reverse();
    e
}

/// Lower bound on geometric discord from the Bloch vector and
/// correlation matrix: all but the n-1 largest eigenvalues of
/// G1 = (2/n) x x^t + (4/n^2) T T^t, divided by n^2.
pub fn gd_lower_bound_from_xt(x: &[f64], t: &CMatrix, n: usize) -> f64 {
    let nf = n as f64;
    let m = t.dim();
    let tt = t.mul(&t.dagger());
    let mut g1 = tt.scale_re(4.0 / (nf * nf));
    for i in 0..m {
        for j in 0..m {
            let add = 2.0 / nf * x[i] * x[j];
            g1.set(i, j, g1.at(i, j) + C64::new(add, 0.0));
        }
    }
    let eigs = eigenvalues_desc(&g1.hermitize());
    let rest: f64 = eigs.iter().skip(n - 1).sum();
    rest / (nf * nf)
}

/// Upper bound on measurement-induced nonlocality: the n^2 - n largest
/// eigenvalues of G2 = T T^t, scaled by 4/n^4.
pub fn min_upper_bound_from_xt(t: &CMatrix, n: usize) -> f64 {
    let nf = n as f64;
    let tt = t.mul(&t.dagger()).hermitize();
    let eigs = eigenvalues_desc(&tt);
    let top: f64 = eigs.iter().take(n * n - n).sum();
    4.0 / (nf * nf * nf * nf) * top
}

/// The two closed-form bound values for an orthogonally invariant
/// state: h1 = (n^2-n)(b^2+c^2) and h2 = h1 + 4(n-1) b c. The discord
/// lower bound is min(h1,h2) and the nonlocality upper bound is
/// max(h1,h2).
pub fn ortho_bound_pair(s: &OrthoState) -> (f64, f64) {
    let nf = s.n() as f64;
    let (b, c) = (s.b(), s.c());
    let h1 = (nf * nf - nf) * (b * b + c * c);
    let h2 = h1 + 4.0 * (nf - 1.0) * b * c;
    (h1, h2)
}

pub fn gd_lower_bound(s: &OrthoState) -> f64 {
    let (h1, h2) = ortho_bound_pair(s);
    h1.min(h2)
}

pub fn min_upper_bound(s: &OrthoState) -> f64 {
    let (h1, h2) = ortho_bound_pair(s);
    h1.max(h2)
}

/// Normalization factor n/(n-1) that makes the maximum of either
/// measure equal to 1.
pub fn normalization_factor(n: usize) -> f64 {
    n as f64 / (n as f64 - 1.0)
}

/// The same bound pair as rational functions of (f, fhat); the returned
/// pair equals {gd_lower_bound, min_upper_bound} as a set, with the
/// assignment decided by the sign of `region_indicator`.
pub fn bounds_ffhat(s: &OrthoState) -> (f64, f64) {
    let nf = s.n() as f64;
    let (f, fh) = (s.f(), s.fhat());
    let g1 = (2.0 - 2.0 * nf * (fh + f) - 4.0 * (1.0 + nf) * f * fh
        + (nf * nf + 2.0 * nf + 2.0) * (f * f + fh * fh))
        / (nf * (nf - 1.0) * (nf + 2.0) * (nf + 2.0));
    let g2 = (2.0 - 2.0 * (f - fh) * (f - fh) - 2.0 * nf * (fh + f)
        + nf * nf * (f * f + fh * fh))
        / (nf * nf * (nf - 1.0) * (nf + 2.0));
    (g1, g2)
}

/// Positive multiple of b*c as a function of (f, fhat); its sign
/// decides which of the `bounds_ffhat` values is the lower endpoint.
pub fn region_indicator(s: &OrthoState) -> f64 {
    let nf = s.n() as f64;
    let (f, fh) = (s.f(), s.fhat());
    (-1.0 + f * (1.0 + nf) - fh) * (-1.0 - f + (1.0 + nf) * fh)
}

/// Scaled (purity-corrected) discord from a geometric discord value,
/// with the maximum discord supplied by the caller.
pub fn scaled_discord_given_max(dg: f64, purity: f64, n: usize, dg_max: f64) -> Result<f64> {
    let alpha = normalization_factor(n);
    let beta = dg_max / (2.0 - 2.0 * (1.0 - dg_max / alpha).max(0.0).sqrt());
    let radicand = 1.0 - dg / (alpha * purity);
    if radicand < -1e-10 {
        return Err(Error::ScaledDiscordDomain { radicand });
    }
    Ok(beta * (2.0 - 2.0 * radicand.max(0.0).sqrt()))
}

/// Scaled discord using the cached per-dimension discord maximum.
pub fn scaled_discord_from_dg(dg: f64, purity: f64, n: usize) -> Result<f64> {
    let dg_max = dg_max_cached(n)?;
    scaled_discord_given_max(dg, purity, n, dg_max)
}

/// Negativity (trace norm of the partial transpose minus one, halved),
/// computed as the sum of magnitudes of negative eigenvalues.
pub fn negativity(rho: &CMatrix, dims: (usize, usize)) -> Result<f64> {
    let pt = partial_transpose(rho, dims, Party::A)?;
    let eig = herm_eig(&pt)?;
    let total: f64 = eig
        .eigenvalues
        .iter()
        .filter(|&&l| l < 0.0)
        .map(|&l| -l)
        .sum();
    Ok(total.max(0.0))
}

/// All measures of one orthogonally invariant state; the CSV row unit.
#[derive(Debug, Clone, Copy)]
pub struct MeasureReport {
    pub f: f64,
    pub fhat: f64,
    pub lqu: f64,
    pub dg_lower: f64,
    pub min_upper: f64,
    pub dg_normalized_lower: f64,
    pub min_normalized_upper: f64,
    pub scaled_discord_lower: f64,
    pub negativity: f64,
    pub physical: bool,
    pub npt: bool,
}

pub fn measure_report(s: &OrthoState) -> Result<MeasureReport> {
    let rho = s.density_matrix()?;
    let n = s.n();
    let lqu = lqu_ortho(s)?;
    let dg_lower = gd_lower_bound(s);
    let min_upper = min_upper_bound(s);
    let norm = normalization_factor(n);
    let neg = negativity(&rho, (n, n))?;
    let scaled = scaled_discord_from_dg(dg_lower, s.purity(), n)?;
    Ok(MeasureReport {
        f: s.f(),
        fhat: s.fhat(),
        lqu,
        dg_lower,
        min_upper,
        dg_normalized_lower: norm * dg_lower,
        min_normalized_upper: norm * min_upper,
        scaled_discord_lower: scaled,
        negativity: neg,
        physical: s.is_physical(),
        npt: neg > 1e-10,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hs_norm;
    use crate::ortho::{isotropic, maximally_mixed, sample_physical, werner};
    use crate::random::{density_hs, rng_from_seed, unitary};

    #[test]
    fn skew_information_of_pure_state_is_variance() {
        let mut rng = rng_from_seed(2);
        let u = unitary(&mut rng, 4);
        let psi = u.column(0);
        let rho = CMatrix::outer(&psi);
        let k = crate::random::ginibre(&mut rng, 4).hermitize();
        let i = skew_information(&rho, &k).unwrap();
        let v = variance(&rho, &k).unwrap();
        assert!((i - v).abs() < 1e-10, "{i} vs {v}");
    }

    #[test]
    fn skew_information_commuting_and_bounded() {
        let rho = CMatrix::from_diag(&[0.5, 0.3, 0.2]);
        let k = CMatrix::from_diag(&[1.0, -1.0, 0.0]);
        assert!(skew_information(&rho, &k).unwrap().abs() < 1e-12);

        let mut rng = rng_from_seed(9);
        for _ in 0..10 {
            let rho = density_hs(&mut rng, 4);
            let k = crate::random::ginibre(&mut rng, 4).hermitize();
            let i = skew_information(&rho, &k).unwrap();
            let v = variance(&rho, &k).unwrap();
            assert!(i >= -1e-10);
            assert!(i <= v + 1e-10);
        }
    }

    #[test]
    fn skew_information_dimension_mismatch() {
        let rho = CMatrix::identity(4).scale_re(0.25);
        let k = CMatrix::identity(2);
        assert!(skew_information(&rho, &k).is_err());
    }

    #[test]
    fn w_matrix_maximally_mixed() {
        let gs = GeneratorSet::new(3).unwrap();
        let rho = CMatrix::identity(9).scale_re(1.0 / 9.0);
        let w = w_matrix(&rho, &gs).unwrap();
        assert!(w.off_diagonal_max() < 1e-12);
        for d in w.diagonal() {
            assert!((d - 2.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn w_matrix_ortho_diagonal_formula() {
        let gs = GeneratorSet::new(3).unwrap();
        let mut rng = rng_from_seed(13);
        for _ in 0..10 {
            let s = sample_physical(3, &mut rng);
            let sc = s.sqrt_coeffs().unwrap();
            let w = w_matrix(&s.density_matrix().unwrap(), &gs).unwrap();
            assert!(w.off_diagonal_max() < 1e-10);
            let diag = w.diagonal();
            let base = 3.0 * sc.a1 * sc.a1 + 2.0 * sc.a1 * sc.b1 + 2.0 * sc.a1 * sc.c1;
            for (k, d) in diag.iter().enumerate() {
                let cross = if k < gs.antisymmetric_start() {
                    2.0 * sc.b1 * sc.c1
                } else {
                    -2.0 * sc.b1 * sc.c1
                };
                assert!((d - 2.0 * (base + cross)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn w_matrix_is_psd_for_random_states() {
        let gs = GeneratorSet::new(2).unwrap();
        let mut rng = rng_from_seed(19);
        for _ in 0..5 {
            let rho = density_hs(&mut rng, 4);
            let w = w_matrix(&rho, &gs).unwrap();
            let eig = herm_eig(w.as_matrix()).unwrap();
            assert!(eig.eigenvalues[0] >= -1e-9);
        }
    }

    #[test]
    fn lqu_2xn_product_state_vanishes() {
        let mut rng = rng_from_seed(29);
        let a = density_hs(&mut rng, 2);
        let b = density_hs(&mut rng, 3);
        let rho = kron(&a, &b);
        let v = lqu_2xn(&rho, 3).unwrap();
        assert!(v.abs() < 1e-10, "{v}");
    }

    #[test]
    fn lqu_2xn_bell_state_is_one() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = vec![
            C64::new(h, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(h, 0.0),
        ];
        let rho = CMatrix::outer(&bell);
        let v = lqu_2xn(&rho, 2).unwrap();
        assert!((v - 1.0).abs() < 1e-10);
    }

    #[test]
    fn lqu_2xn_wrong_party_dimension() {
        let rho = CMatrix::identity(9).scale_re(1.0 / 9.0);
        assert!(lqu_2xn(&rho, 4).is_err());
    }

    #[test]
    fn lqu_ortho_known_values() {
        assert!(lqu_ortho(&maximally_mixed(3).unwrap()).unwrap().abs() < 1e-14);
        let v = lqu_ortho(&werner(3, -1.0 / 6.0).unwrap()).unwrap();
        assert!((v - 0.5).abs() < 1e-12);
        let v = lqu_ortho(&isotropic(3, 1.0 / 3.0).unwrap()).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn lqu_ortho_matches_w_matrix_route() {
        let gs = GeneratorSet::new(3).unwrap();
        let mut rng = rng_from_seed(37);
        for _ in 0..10 {
            let s = sample_physical(3, &mut rng);
            let closed = lqu_ortho(&s).unwrap();
            let w = w_matrix(&s.density_matrix().unwrap(), &gs).unwrap();
            let generic = 2.0 / 3.0 - w.lambda_max();
            assert!((closed - generic).abs() < 1e-10, "{closed} vs {generic}");
            assert!(closed >= -1e-10);
        }
    }

    #[test]
    fn explicit_curves_match_generic_pipeline() {
        for i in 0..=60 {
            let b = -1.0 / 6.0 + i as f64 * (1.0 / 6.0 + 1.0 / 12.0) / 60.0;
            let closed = lqu_werner(b).unwrap();
            let generic = lqu_ortho(&werner(3, b).unwrap()).unwrap();
            assert!((closed - generic).abs() < 1e-12, "b={b}");
        }
        for i in 0..=60 {
            let c = -1.0 / 24.0 + i as f64 * (1.0 / 24.0 + 1.0 / 3.0) / 60.0;
            let closed = lqu_isotropic(c).unwrap();
            let generic = lqu_ortho(&isotropic(3, c).unwrap()).unwrap();
            assert!((closed - generic).abs() < 1e-12, "c={c}");
        }
        assert!(lqu_werner(0.0).unwrap().abs() < 1e-15);
        assert!((lqu_werner(-1.0 / 6.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((lqu_isotropic(1.0 / 3.0).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!(lqu_werner(0.2).is_err());
        assert!(lqu_isotropic(-0.1).is_err());
    }

    #[test]
    fn spectrum_residual_examples() {
        let mut s = [0.0; 8];
        s[0] = 1.0; // textbook l_1, spectrum {-1, 0, 1}
        assert!(spectrum_constraint_residual(&s).abs() < 1e-14);
        let mut s = [0.0; 8];
        s[7] = 1.0; // textbook l_8 = diag(1,1,-2)/sqrt(3)
        let r = spectrum_constraint_residual(&s);
        assert!((r + 1.0 / 3.0f64.sqrt()).abs() < 1e-12, "{r}");
    }

    #[test]
    fn spectrum_residual_equivalent_to_det() {
        let gs = generators_cached(3).unwrap();
        let mut rng = rng_from_seed(41);
        for _ in 0..1000 {
            let s = crate::random::unit_vector(&mut rng, 8);
            let r = spectrum_constraint_residual(&s);
            let mut coeffs = [0.0; 8];
            for (std_idx, &block_idx) in STD_GELLMANN_TO_BLOCK.iter().enumerate() {
                coeffs[block_idx] = s[std_idx];
            }
            let k = gs.combine(&coeffs);
            let eig = herm_eig(&k).unwrap();
            let det: f64 = eig.eigenvalues.iter().product();
            assert!((r - 1.5 * det).abs() < 1e-10, "residual {r} vs det {det}");
            if r.abs() < 1e-10 {
                for (got, want) in eig.eigenvalues.iter().zip([-1.0, 0.0, 1.0]) {
                    assert!((got - want).abs() < 1e-6);
                }
            }
        }
    }

    #[test]
    fn fixed_spectrum_patterns() {
        assert_eq!(fixed_spectrum(2), vec![-1.0, 1.0]);
        assert_eq!(fixed_spectrum(3), vec![-1.0, 0.0, 1.0]);
        let s4 = fixed_spectrum(4);
        let sum_sq: f64 = s4.iter().map(|l| l * l).sum();
        assert!((sum_sq - 2.0).abs() < 1e-14);
        assert_eq!(s4.len(), 4);
    }

    #[test]
    fn spectrum_observable_invariants() {
        let gs = GeneratorSet::new(3).unwrap();
        let mut coeffs = vec![0.0; 8];
        coeffs[0] = 1.0;
        let obs = SpectrumObservable::new(&gs, coeffs, vec![1.0, -1.0, 0.0]).unwrap();
        assert!(obs.spectrum_ok(1e-8));
        assert!(obs.matrix().trace().norm() < 1e-14);
        let bad = SpectrumObservable::new(&gs, vec![0.5; 8], vec![0.0; 3]);
        assert!(bad.is_err());
    }

    #[test]
    fn bloch_traces_match_closed_form() {
        let gs = GeneratorSet::new(3).unwrap();
        let mut rng = rng_from_seed(43);
        for _ in 0..5 {
            let s = sample_physical(3, &mut rng);
            let rho = s.density_matrix().unwrap();
            let (x, t) = bloch_correlation_traces(&rho, &gs).unwrap();
            let (xc, tc) = crate::ortho::bloch_correlation(&s, &gs).unwrap();
            for (a, b) in x.iter().zip(&xc) {
                assert!((a - b).abs() < 1e-12);
            }
            assert!(hs_norm(&t.sub(&tc)) < 1e-10);
        }
    }

    #[test]
    fn bounds_reference_values() {
        let mm = maximally_mixed(3).unwrap();
        assert!(gd_lower_bound(&mm).abs() < 1e-14);
        assert!(min_upper_bound(&mm).abs() < 1e-14);
        let (g1, g2) = bounds_ffhat(&mm);
        assert!(g1.abs() < 1e-13 && g2.abs() < 1e-13);

        // Werner: both bounds coincide at 6 b^2 and match the
        // (n-1)(1-n^2 a)^2/n closed value
        for b in [-0.1, 0.05, 1.0 / 12.0] {
            let s = werner(3, b).unwrap();
            let lo = gd_lower_bound(&s);
            let hi = min_upper_bound(&s);
            assert!((lo - 6.0 * b * b).abs() < 1e-13);
            assert!((hi - lo).abs() < 1e-14);
            let a = s.a();
            let closed = 2.0 * (1.0 - 9.0 * a) * (1.0 - 9.0 * a) / 3.0;
            assert!((lo - closed).abs() < 1e-12);
        }

        // subclass a = 1/9, c = -b: lower 4 b^2, upper 12 b^2
        let b = -0.08;
        let s = OrthoState::from_abc(3, 1.0 / 9.0, b, -b).unwrap();
        assert!((gd_lower_bound(&s) - 4.0 * b * b).abs() < 1e-13);
        assert!((min_upper_bound(&s) - 12.0 * b * b).abs() < 1e-13);
    }

    #[test]
    fn ffhat_bounds_match_abc_bounds() {
        let mut rng = rng_from_seed(47);
        for n in [2, 3, 4] {
            for _ in 0..20 {
                let s = sample_physical(n, &mut rng);
                let (g1, g2) = bounds_ffhat(&s);
                let lo = gd_lower_bound(&s);
                let hi = min_upper_bound(&s);
                assert!((g1.min(g2) - lo).abs() < 1e-10, "n={n}");
                assert!((g1.max(g2) - hi).abs() < 1e-10, "n={n}");
                let r = region_indicator(&s);
                if r > 1e-12 {
                    assert!((g1 - lo).abs() < 1e-10);
                } else if r < -1e-12 {
                    assert!((g2 - lo).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn ffhat_bounds_coincide_on_slice_boundaries() {
        // on either factor line of the region indicator, b*c = 0 and g1 = g2
        let n = 3;
        let nf = n as f64;
        for i in 0..20 {
            let f = -0.9 + 1.8 * i as f64 / 19.0;
            // line b = 0: fhat = -1 + (n+1) f
            let fhat = -1.0 + (nf + 1.0) * f;
            if fhat >= 0.0 && fhat <= nf * (f + 1.0) / 2.0 {
                let s = OrthoState::from_ffhat(n, f, fhat).unwrap();
                let (g1, g2) = bounds_ffhat(&s);
                assert!((g1 - g2).abs() < 1e-10, "f={f}");
            }
            // line c = 0: fhat = (1 + f)/(n+1)
            let fhat = (1.0 + f) / (nf + 1.0);
            let s = OrthoState::from_ffhat(n, f, fhat).unwrap();
            let (g1, g2) = bounds_ffhat(&s);
            assert!((g1 - g2).abs() < 1e-10, "f={f}");
        }
    }

    #[test]
    fn generic_xt_bounds_match_ortho_closed_forms() {
        let gs = GeneratorSet::new(3).unwrap();
        let mut rng = rng_from_seed(53);
        for _ in 0..10 {
            let s = sample_physical(3, &mut rng);
            let rho = s.density_matrix().unwrap();
            let (x, t) = bloch_correlation_traces(&rho, &gs).unwrap();
            let lo = gd_lower_bound_from_xt(&x, &t, 3);
            let hi = min_upper_bound_from_xt(&t, 3);
            assert!((lo - gd_lower_bound(&s)).abs() < 1e-10);
            assert!((hi - min_upper_bound(&s)).abs() < 1e-10);
        }
    }

    #[test]
    fn scaled_discord_shape() {
        let dg_max = 2.0 / 3.0;
        let purity = 0.5;
        assert!(scaled_discord_given_max(0.0, purity, 3, dg_max)
            .unwrap()
            .abs()
            < 1e-15);
        let alpha = normalization_factor(3);
        let beta = dg_max / (2.0 - 2.0 * (1.0 - dg_max / alpha).sqrt());
        let top = scaled_discord_given_max(alpha * purity, purity, 3, dg_max).unwrap();
        assert!((top - 2.0 * beta).abs() < 1e-12);
        // monotone
        let mut prev = -1.0;
        for i in 0..20 {
            let dg = i as f64 * alpha * purity / 19.0;
            let v = scaled_discord_given_max(dg, purity, 3, dg_max).unwrap();
            assert!(v > prev);
            prev = v;
        }
        assert!(scaled_discord_given_max(alpha * purity * 1.1, purity, 3, dg_max).is_err());
    }

    #[test]
    fn negativity_reference_values() {
        // b = c states are PPT
        let s = OrthoState::from_ffhat(3, 0.5, 0.5).unwrap();
        let neg = negativity(&s.density_matrix().unwrap(), (3, 3)).unwrap();
        assert!(neg.abs() < 1e-12);

        // subclass a = 1/9, c = -b: single negative eigenvalue 1/9 + 2b
        for b in [-1.0 / 9.0, -0.09, -0.06] {
            let s = OrthoState::from_abc(3, 1.0 / 9.0, b, -b).unwrap();
            let neg = negativity(&s.density_matrix().unwrap(), (3, 3)).unwrap();
            assert!((neg - (1.0 / 9.0 + 2.0 * b).abs()).abs() < 1e-12, "b={b}");
        }

        // Bell state
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = vec![
            C64::new(h, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(h, 0.0),
        ];
        let rho = CMatrix::outer(&bell);
        assert!((negativity(&rho, (2, 2)).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn branch_sign_selects_uncertainty_formula() {
        // the generic value equals the explicit branch picked by sign(b1 c1)
        let mut rng = rng_from_seed(61);
        for _ in 0..50 {
            let s = sample_physical(3, &mut rng);
            let sc = s.sqrt_coeffs().unwrap();
            let base = 3.0 * sc.a1 * sc.a1 + 2.0 * sc.a1 * sc.b1 + 2.0 * sc.a1 * sc.c1;
            let branch = if sc.b1 * sc.c1 >= 0.0 {
                2.0 / 3.0 - 2.0 * (base + 2.0 * sc.b1 * sc.c1)
            } else {
                2.0 / 3.0 - 2.0 * (base - 2.0 * sc.b1 * sc.c1)
            };
            assert!((lqu_ortho(&s).unwrap() - branch).abs() < 1e-14);
        }
    }

    #[test]
    fn cached_discord_maximum_and_scaled_discord() {
        let dg_max = dg_max_cached(3).unwrap();
        assert!(dg_max <= 2.0 / 3.0 + 1e-6, "{dg_max}");
        assert!(dg_max > 0.6, "{dg_max}");
        let v = scaled_discord_from_dg(0.0, 0.5, 3).unwrap();
        assert!(v.abs() < 1e-15);
    }

    #[test]
    fn lqu_local_unitary_invariance() {
        let mut rng = rng_from_seed(59);
        let rho = density_hs(&mut rng, 6);
        let ka = crate::random::ginibre(&mut rng, 2).hermitize();
        let k = kron(&ka, &CMatrix::identity(3));
        let ua = unitary(&mut rng, 2);
        let ub = unitary(&mut rng, 3);
        let u = kron(&ua, &ub);
        let rho2 = u.mul(&rho).mul(&u.dagger()).hermitize();
        let ka2 = ua.mul(&ka).mul(&ua.dagger()).hermitize();
        let k2 = kron(&ka2, &CMatrix::identity(3));
        let i1 = skew_information(&rho, &k).unwrap();
        let i2 = skew_information(&rho2, &k2).unwrap();
        assert!((i1 - i2).abs() < 1e-10, "{i1} vs {i2}");
    }
}
