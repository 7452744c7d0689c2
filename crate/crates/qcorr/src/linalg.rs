//! Dense complex linear algebra for small operators and states.
//!
//! Everything here works on square matrices of dimension at most a few
//! dozen (bipartite states up to 8x8 subsystems), so a plain row-major
//! `Vec<Complex64>` carrier with a cyclic Jacobi eigensolver is both
//! simple and accurate. All functions are pure.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Relative Hermiticity tolerance of the eigensolver.
pub const HERM_TOL: f64 = 1e-10;
/// Eigenvalues of a PSD matrix may dip this far below zero before
/// `psd_sqrt` rejects the input; anything in `[-PSD_CLAMP, 0)` is
/// clamped to zero. States on the positivity boundary are exactly
/// singular analytically but not numerically.
pub const PSD_CLAMP: f64 = 1e-9;

/// Which tensor factor of a bipartite operator an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Party {
    A,
    B,
}

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        CMatrix {
            dim,
            data: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.data[i * dim + j] = f(i, j);
            }
        }
        m
    }

    /// Diagonal matrix from real entries.
    pub fn from_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * diag.len() + i] = C64::new(d, 0.0);
        }
        m
    }

    /// Rank-1 projector |v><v| (v need not be normalized; it is not rescaled).
    pub fn outer(v: &[C64]) -> Self {
        let dim = v.len();
        Self::from_fn(dim, |i, j| v[i] * v[j].conj())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.dim).map(|i| self.at(i, j)).collect()
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.at(i, i)).sum()
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.at(j, i).conj())
    }

    pub fn scale(&self, s: C64) -> Self {
        CMatrix {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        CMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        CMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    /// tr(self * other) without forming the product.
    pub fn trace_mul(&self, other: &Self) -> C64 {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut t = C64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                t += self.data[i * n + j] * other.data[j * n + i];
            }
        }
        t
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest |A_ij - conj(A_ji)| over all entries.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                let d = (self.at(i, j) - self.at(j, i).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.asymmetry() <= tol
    }

    pub fn is_psd(&self, tol: f64) -> bool {
        if !self.is_hermitian(tol.max(HERM_TOL * self.max_abs().max(1.0))) {
            return false;
        }
        match herm_eig(self) {
            Ok(eig) => eig.eigenvalues.iter().all(|&l| l >= -tol),
            Err(_) => false,
        }
    }

    pub fn is_density(&self, tol: f64) -> bool {
        self.is_psd(tol) && (self.trace() - C64::new(1.0, 0.0)).norm() <= tol
    }

    /// (A + A^dag)/2.
    pub fn hermitize(&self) -> Self {
        Self::from_fn(self.dim, |i, j| {
            (self.at(i, j) + self.at(j, i).conj()) * 0.5
        })
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

/// Kronecker product a (x) b.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (na, nb) = (a.dim(), b.dim());
    let n = na * nb;
    let mut out = CMatrix::zeros(n);
    for i in 0..na {
        for j in 0..na {
            let aij = a.at(i, j);
            if aij.norm_sqr() == 0.0 {
                continue;
            }
            for k in 0..nb {
                for l in 0..nb {
                    out.set(i * nb + k, j * nb + l, aij * b.at(k, l));
                }
            }
        }
    }
    out
}

/// Hilbert-Schmidt (Frobenius) norm sqrt(tr(M^dag M)).
pub fn hs_norm(m: &CMatrix) -> f64 {
    m.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Trace norm: sum of singular values, computed as sum of sqrt
/// eigenvalues of M^dag M.
pub fn trace_norm(m: &CMatrix) -> f64 {
    let gram = m.dagger().mul(m);
    let eig = herm_eig(&gram.hermitize()).expect("gram matrix is Hermitian");
    eig.eigenvalues.iter().map(|&l| l.max(0.0).sqrt()).sum()
}

/// Eigendecomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Columns are the corresponding orthonormal eigenvectors.
    pub eigenvectors: CMatrix,
}

impl EigenDecomposition {
    /// V diag(lambda) V^dag.
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        CMatrix::from_fn(n, |i, j| {
            (0..n)
                .map(|k| v.at(i, k) * self.eigenvalues[k] * v.at(j, k).conj())
                .sum()
        })
    }
}

/// Hermitian eigendecomposition by cyclic Jacobi rotations.
///
/// Rejects inputs whose asymmetry exceeds `HERM_TOL` relative to the
/// largest entry. Eigenvalues are returned ascending; within a
/// degenerate cluster the individual eigenvector directions are
/// unspecified (only spectral projectors are reliable).
pub fn herm_eig(h: &CMatrix) -> Result<EigenDecomposition> {
    let scale = h.max_abs();
    let asym = h.asymmetry();
    if asym > HERM_TOL * scale.max(1.0) {
        return Err(Error::NotHermitian { asymmetry: asym });
    }

    let n = h.dim();
    let mut a = h.hermitize();
    let mut v = CMatrix::identity(n);

    let off = |a: &CMatrix| -> f64 {
        let mut s = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                s += a.at(p, q).norm_sqr();
            }
        }
        s.sqrt()
    };

    let target = 1e-30f64.max(1e-15 * scale.max(1e-300));
    for _sweep in 0..60 {
        if off(&a) <= target {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.at(p, q);
                let zmod = apq.norm();
                if zmod <= 1e-300 {
                    continue;
                }
                let app = a.at(p, p).re;
                let aqq = a.at(q, q).re;
                let phase = apq / zmod;
                let tau = (aqq - app) / (2.0 * zmod);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // Unitary pair rotation J: columns p,q mix with
                // J[p][p]=c, J[p][q]=s*phase, J[q][p]=-s*conj(phase), J[q][q]=c.
                let sp = phase * s;
                let spc = phase.conj() * s;

                // A <- J^dag A J, applied as row then column updates.
                for j in 0..n {
                    let arp = a.at(p, j);
                    let arq = a.at(q, j);
                    a.set(p, j, arp * c - arq * sp);
                    a.set(q, j, arp * spc + arq * c);
                }
                for i in 0..n {
                    let acp = a.at(i, p);
                    let acq = a.at(i, q);
                    a.set(i, p, acp * c - acq * sp.conj());
                    a.set(i, q, acp * spc.conj() + acq * c);
                }
                // Keep the diagonal exactly real and the zeroed pair clean.
                let dpp = a.at(p, p).re;
                let dqq = a.at(q, q).re;
                a.set(p, p, C64::new(dpp, 0.0));
                a.set(q, q, C64::new(dqq, 0.0));
                a.set(p, q, C64::new(0.0, 0.0));
                a.set(q, p, C64::new(0.0, 0.0));

                for i in 0..n {
                    let vip = v.at(i, p);
                    let viq = v.at(i, q);
                    v.set(i, p, vip * c - viq * sp.conj());
                    v.set(i, q, vip * spc.conj() + viq * c);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.at(i, i).re.partial_cmp(&a.at(j, j).re).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a.at(i, i).re).collect();
    let eigenvectors = CMatrix::from_fn(n, |i, j| v.at(i, order[j]));

    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Positive semidefinite square root.
///
/// Eigenvalues in `[-PSD_CLAMP, 0)` are clamped to zero; anything more
/// negative is rejected with the offending eigenvalue. Eigenvalues
/// below `1e-12` are snapped to zero before the root: the square root
/// turns O(eps) noise on an exact zero into O(sqrt(eps)), which would
/// otherwise dominate the result near the positivity boundary.
pub fn psd_sqrt(rho: &CMatrix) -> Result<CMatrix> {
    let eig = herm_eig(rho)?;
    if let Some(&l) = eig
        .eigenvalues
        .iter()
        .find(|&&l| l < -PSD_CLAMP)
    {
        return Err(Error::NegativeEigenvalue { eigenvalue: l });
    }
    let n = rho.dim();
    let roots: Vec<f64> = eig
        .eigenvalues
        .iter()
        .map(|&l| if l < 1e-12 { 0.0 } else { l.sqrt() })
        .collect();
    let v = &eig.eigenvectors;
    let s = CMatrix::from_fn(n, |i, j| {
        (0..n)
            .map(|k| v.at(i, k) * roots[k] * v.at(j, k).conj())
            .sum()
    });
    Ok(s.hermitize())
}

fn split_dims(m: &CMatrix, na: usize, nb: usize) -> Result<()> {
    if na * nb != m.dim() {
        return Err(Error::BadBipartition {
            dim: m.dim(),
            na,
            nb,
        });
    }
    Ok(())
}

/// Transpose on one tensor factor of a bipartite operator.
pub fn partial_transpose(m: &CMatrix, dims: (usize, usize), party: Party) -> Result<CMatrix> {
    let (na, nb) = dims;
    split_dims(m, na, nb)?;
    let mut out = CMatrix::zeros(m.dim());
    for a in 0..na {
        for ap in 0..na {
            for b in 0..nb {
                for bp in 0..nb {
                    let v = m.at(a * nb + b, ap * nb + bp);
                    match party {
                        Party::A => out.set(ap * nb + b, a * nb + bp, v),
                        Party::B => out.set(a * nb + bp, ap * nb + b, v),
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Trace out one tensor factor, keeping `party_kept`.
pub fn partial_trace(m: &CMatrix, dims: (usize, usize), party_kept: Party) -> Result<CMatrix> {
    let (na, nb) = dims;
    split_dims(m, na, nb)?;
    match party_kept {
        Party::A => {
            let mut out = CMatrix::zeros(na);
            for a in 0..na {
                for ap in 0..na {
                    let mut s = C64::new(0.0, 0.0);
                    for b in 0..nb {
                        s += m.at(a * nb + b, ap * nb + b);
                    }
                    out.set(a, ap, s);
                }
            }
            Ok(out)
        }
        Party::B => {
            let mut out = CMatrix::zeros(nb);
            for b in 0..nb {
                for bp in 0..nb {
                    let mut s = C64::new(0.0, 0.0);
                    for a in 0..na {
                        s += m.at(a * nb + b, a * nb + bp);
                    }
                    out.set(b, bp, s);
                }
            }
            Ok(out)
        }
    }
}
