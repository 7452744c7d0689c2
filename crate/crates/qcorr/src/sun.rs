//! Generalized Gell-Mann generators of SU(n), their structure
//! constants, and the Weyl shift-and-clock basis with the diagonal
//! theta projectors.

use crate::error::{Error, Result};
use crate::linalg::{C64, CMatrix};

/// The n^2-1 generalized Gell-Mann generators of SU(n).
///
/// Index order: the n-1 diagonal generators first, then the symmetric
/// off-diagonal ones for pairs k<m in lexicographic order, then the
/// antisymmetric ones in the same pair order. Basis kets are 0-indexed.
/// For n=2 this yields (sigma_z, sigma_x, sigma_y).
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    n: usize,
    lambdas: Vec<CMatrix>,
}

impl GeneratorSet {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::DimensionTooSmall { n });
        }
        let mut lambdas = Vec::with_capacity(n * n - 1);
        for alpha in 1..n {
            let norm = (2.0 / (alpha as f64 * (alpha as f64 + 1.0))).sqrt();
            let mut m = CMatrix::zeros(n);
            for k in 0..alpha {
                m.set(k, k, C64::new(norm, 0.0));
            }
            m.set(alpha, alpha, C64::new(-norm * alpha as f64, 0.0));
            lambdas.push(m);
        }
        for k in 0..n {
            for m in (k + 1)..n {
                let mut s = CMatrix::zeros(n);
                s.set(k, m, C64::new(1.0, 0.0));
                s.set(m, k, C64::new(1.0, 0.0));
                lambdas.push(s);
            }
        }
        for k in 0..n {
            for m in (k + 1)..n {
                let mut a = CMatrix::zeros(n);
                a.set(k, m, C64::new(0.0, -1.0));
                a.set(m, k, C64::new(0.0, 1.0));
                lambdas.push(a);
            }
        }
        Ok(GeneratorSet { n, lambdas })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of generators, n^2 - 1.
    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    pub fn lambda(&self, i: usize) -> &CMatrix {
        &self.lambdas[i]
    }

    pub fn lambdas(&self) -> &[CMatrix] {
        &self.lambdas
    }

    /// Index of the first antisymmetric generator; everything before it
    /// (diagonal and symmetric blocks) has entrywise square sum +2,
    /// everything from it on has -2.
    pub fn antisymmetric_start(&self) -> usize {
        self.n - 1 + self.n * (self.n - 1) / 2
    }

    /// Linear combination sum_i s_i lambda_i.
    pub fn combine(&self, s: &[f64]) -> CMatrix {
        assert_eq!(s.len(), self.len());
        let mut k = CMatrix::zeros(self.n);
        for (si, l) in s.iter().zip(&self.lambdas) {
            if *si != 0.0 {
                k = k.add(&l.scale_re(*si));
            }
        }
        k
    }
}

/// Rank-3 real tensor over generator indices.
#[derive(Debug, Clone)]
pub struct Tensor3 {
    m: usize,
    data: Vec<f64>,
}

impl Tensor3 {
    fn zeros(m: usize) -> Self {
        Tensor3 {
            m,
            data: vec![0.0; m * m * m],
        }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[(i * self.m + j) * self.m + k]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, k: usize, v: f64) {
        self.data[(i * self.m + j) * self.m + k] = v;
    }

    pub fn dim(&self) -> usize {
        self.m
    }
}

/// Antisymmetric (f) and symmetric (d) structure constants of SU(n).
#[derive(Debug, Clone)]
pub struct StructureConstants {
    pub f: Tensor3,
    pub d: Tensor3,
}

/// f_ijk = tr([l_i,l_j] l_k)/(4i), d_ijk = tr({l_i,l_j} l_k)/4,
/// evaluated from the commutator and anticommutator matrices. Fails if
/// any entry picks up an imaginary residue above 1e-10.
pub fn structure_constants(gs: &GeneratorSet) -> Result<StructureConstants> {
    let m = gs.len();
    let mut f = Tensor3::zeros(m);
    let mut d = Tensor3::zeros(m);
    let mut worst_residue = 0.0f64;
    for i in 0..m {
        for j in 0..m {
            let prod = gs.lambda(i).mul(gs.lambda(j));
            let swapped = gs.lambda(j).mul(gs.lambda(i));
            let comm = prod.sub(&swapped);
            let anti = prod.add(&swapped);
            for k in 0..m {
                // z/(4i) has real part z.im/4 and imaginary part -z.re/4
                let tc = comm.trace_mul(gs.lambda(k));
                let ta = anti.trace_mul(gs.lambda(k));
                f.set(i, j, k, tc.im / 4.0);
                d.set(i, j, k, ta.re / 4.0);
                worst_residue = worst_residue.max(tc.re.abs() / 4.0);
                worst_residue = worst_residue.max(ta.im.abs() / 4.0);
            }
        }
    }
    if worst_residue > 1e-10 {
        return Err(Error::ImaginaryResidue {
            residue: worst_residue,
        });
    }
    Ok(StructureConstants { f, d })
}

/// The d^2 shift-and-clock unitaries u_{nm} together with the diagonal
/// projectors theta_j = |j><j|.
#[derive(Debug, Clone)]
pub struct WeylBasis {
    d: usize,
    u: Vec<CMatrix>,
    theta: Vec<CMatrix>,
}

impl WeylBasis {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn u(&self, n: usize, m: usize) -> &CMatrix {
        &self.u[n * self.d + m]
    }

    pub fn theta(&self, j: usize) -> &CMatrix {
        &self.theta[j]
    }

    pub fn thetas(&self) -> &[CMatrix] {
        &self.theta
    }
}

/// u_{nm} = sum_j exp(2 pi i j n / d) |j><j+m mod d|.
pub fn weyl_basis(d: usize) -> Result<WeylBasis> {
    if d < 2 {
        return Err(Error::DimensionTooSmall { n: d });
    }
    let mut u = Vec::with_capacity(d * d);
    for n in 0..d {
        for m in 0..d {
            let mut mat = CMatrix::zeros(d);
            for j in 0..d {
                let phase = 2.0 * std::f64::consts::PI * (j * n) as f64 / d as f64;
                mat.set(j, (j + m) % d, C64::new(phase.cos(), phase.sin()));
            }
            u.push(mat);
        }
    }
    Ok(WeylBasis {
        d,
        u,
        theta: theta_matrices(d)?,
    })
}

/// theta_j = |j><j|, built exactly with 0/1 entries.
pub fn theta_matrices(d: usize) -> Result<Vec<CMatrix>> {
    if d < 2 {
        return Err(Error::DimensionTooSmall { n: d });
    }
    Ok((0..d)
        .map(|j| {
            let mut m = CMatrix::zeros(d);
            m.set(j, j, C64::new(1.0, 0.0));
            m
        })
        .collect())
}

/// theta_j recovered from the clock unitaries by the discrete Fourier
/// combination (1/d) sum_k exp(2 pi i (d - k j)/d) u_{k0}.
pub fn theta_from_weyl(basis: &WeylBasis, j: usize) -> CMatrix {
    let d = basis.d();
    let mut m = CMatrix::zeros(d);
    for k in 0..d {
        let phase = 2.0 * std::f64::consts::PI * (d as f64 - (k * j) as f64) / d as f64;
        let coeff = C64::new(phase.cos(), phase.sin());
        m = m.add(&basis.u(k, 0).scale(coeff));
    }
    m.scale_re(1.0 / d as f64)
}
