//! The orthogonally invariant family of bipartite states.
//!
//! A state of an n(x)n system commuting with every O(x)O for orthogonal
//! O is a combination a*I + b*F + c*Fhat of the identity, the flip
//! operator F = sum |ij><ji| and Fhat = sum |ii><jj| (n times the
//! maximally entangled projector). The family is parametrized either by
//! the coefficients (a,b,c) with trace condition n(na+b+c) = 1, or by
//! the expectation values f = <F>, fhat = <Fhat>. The (f,fhat) pair is
//! canonical here because the positivity region is linear in it.

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{C64, CMatrix};
use crate::sun::GeneratorSet;

/// Tolerance on the trace condition for `from_abc`.
const TRACE_TOL: f64 = 1e-10;
/// Positivity margin below which a state is rejected; boundary states
/// (margin 0) are admitted.
const PHYS_TOL: f64 = 1e-10;

/// Flip (swap) operator sum_ij |ij><ji|.
pub fn flip_op(n: usize) -> CMatrix {
    let mut m = CMatrix::zeros(n * n);
    for i in 0..n {
        for j in 0..n {
            m.set(i * n + j, j * n + i, C64::new(1.0, 0.0));
        }
    }
    m
}

/// Fhat = sum_ij |ii><jj|, n times the maximally entangled projector.
pub fn fhat_op(n: usize) -> CMatrix {
    let mut m = CMatrix::zeros(n * n);
    for i in 0..n {
        for j in 0..n {
            m.set(i * n + i, j * n + j, C64::new(1.0, 0.0));
        }
    }
    m
}

/// The three orthogonal projectors U = Fhat/n, V = (I-F)/2,
/// W = (I+F)/2 - Fhat/n spanning the commutant.
pub fn projectors_uvw(n: usize) -> (CMatrix, CMatrix, CMatrix) {
    let id = CMatrix::identity(n * n);
    let f = flip_op(n);
    let fh = fhat_op(n);
    let u = fh.scale_re(1.0 / n as f64);
    let v = id.sub(&f).scale_re(0.5);
    let w = id.add(&f).scale_re(0.5).sub(&u);
    (u, v, w)
}

/// Coefficients of sqrt(rho) in the (I, F, Fhat) basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqrtCoefficients {
    pub a1: f64,
    pub b1: f64,
    pub c1: f64,
}

/// An orthogonally invariant state, carrying both parametrizations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrthoState {
    n: usize,
    a: f64,
    b: f64,
    c: f64,
    f: f64,
    fhat: f64,
}

impl OrthoState {
    /// Build from operator coefficients; the trace condition
    /// n(na+b+c) = 1 must hold within 1e-10.
    pub fn from_abc(n: usize, a: f64, b: f64, c: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::DimensionTooSmall { n });
        }
        let nf = n as f64;
        let residual = nf * (nf * a + b + c) - 1.0;
        if residual.abs() > TRACE_TOL {
            return Err(Error::TraceCondition { residual });
        }
        let f = nf * (a + nf * b + c);
        let fhat = nf * (a + b + nf * c);
        Ok(OrthoState { n, a, b, c, f, fhat })
    }

    /// Build from the expectation values of F and Fhat; the trace row
    /// fixes (a,b,c) uniquely.
    pub fn from_ffhat(n: usize, f: f64, fhat: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::DimensionTooSmall { n });
        }
        let nf = n as f64;
        let det = nf * (nf - 1.0) * (nf + 2.0);
        let a = ((nf + 1.0) - f - fhat) / det;
        let b = (-1.0 + (nf + 1.0) * f - fhat) / det;
        let c = (-1.0 - f + (nf + 1.0) * fhat) / det;
        Ok(OrthoState { n, a, b, c, f, fhat })
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn f(&self) -> f64 {
        self.f
    }
    pub fn fhat(&self) -> f64 {
        self.fhat
    }

    /// Slack of the three positivity inequalities; the state is
    /// physical iff the minimum slack is >= -1e-10.
    pub fn positivity_margin(&self) -> f64 {
        let nf = self.n as f64;
        let s1 = self.fhat;
        let s2 = 1.0 - self.f;
        let s3 = nf * (self.f + 1.0) / 2.0 - self.fhat;
        s1.min(s2).min(s3)
    }

    /// Name of the inequality with the least slack.
    pub fn tightest_constraint(&self) -> &'static str {
        let nf = self.n as f64;
        let s1 = self.fhat;
        let s2 = 1.0 - self.f;
        let s3 = nf * (self.f + 1.0) / 2.0 - self.fhat;
        if s1 <= s2 && s1 <= s3 {
            "fhat >= 0"
        } else if s2 <= s3 {
            "f <= 1"
        } else {
            "fhat <= n(f+1)/2"
        }
    }

    pub fn is_physical(&self) -> bool {
        self.positivity_margin() >= -PHYS_TOL
    }

    /// a*I + b*F + c*Fhat regardless of positivity. Useful for region
    /// scans that compare the inequality test against eigenvalues.
    /// Entries are filled position by position so that swapping b and c
    /// commutes bit-exactly with partial transposition.
    pub fn operator_matrix(&self) -> CMatrix {
        let n = self.n;
        let mut m = CMatrix::zeros(n * n);
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    m.set(i * n + i, i * n + i, C64::new(self.a + (self.b + self.c), 0.0));
                } else {
                    m.set(i * n + j, i * n + j, C64::new(self.a, 0.0));
                    m.set(i * n + j, j * n + i, C64::new(self.b, 0.0));
                    m.set(i * n + i, j * n + j, C64::new(self.c, 0.0));
                }
            }
        }
        m
    }

    /// Density matrix of a physical state.
    pub fn density_matrix(&self) -> Result<CMatrix> {
        if !self.is_physical() {
            return Err(Error::NotPhysical {
                margin: self.positivity_margin(),
                violated: self.tightest_constraint(),
            });
        }
        let rho = self.operator_matrix();
        debug_assert!(
            {
                let (u, v, w) = projectors_uvw(self.n);
                let (eu, ev, ew) = self.spectral_weights();
                let spectral = u
                    .scale_re(eu)
                    .add(&v.scale_re(ev))
                    .add(&w.scale_re(ew));
                crate::linalg::hs_norm(&rho.sub(&spectral)) < 1e-12
            },
            "operator and spectral constructions disagree"
        );
        Ok(rho)
    }

    /// Eigenvalues of rho on the U, V, W eigenspaces. Multiplicities
    /// are 1, n(n-1)/2 and n(n+1)/2 - 1.
    pub fn spectral_weights(&self) -> (f64, f64, f64) {
        let nf = self.n as f64;
        let eu = self.fhat / nf;
        let ev = (1.0 - self.f) / (nf * (nf - 1.0));
        let ew = (nf + nf * self.f - 2.0 * self.fhat) / (nf * (nf - 1.0) * (nf + 2.0));
        (eu, ev, ew)
    }

    /// tr(rho^2) from the spectral weights.
    pub fn purity(&self) -> f64 {
        let nf = self.n as f64;
        let (eu, ev, ew) = self.spectral_weights();
        let mv = nf * (nf - 1.0) / 2.0;
        let mw = nf * (nf + 1.0) / 2.0 - 1.0;
        eu * eu + mv * ev * ev + mw * ew * ew
    }

    /// Coefficients (a1, b1, c1) of sqrt(rho) in the (I, F, Fhat)
    /// basis. Radicands below -1e-12 indicate a state outside the
    /// positivity region and are rejected.
    pub fn sqrt_coeffs(&self) -> Result<SqrtCoefficients> {
        let nf = self.n as f64;
        let ru = self.fhat / nf;
        let rv = (1.0 - self.f) / (nf * (nf - 1.0));
        let rw = (nf + nf * self.f - 2.0 * self.fhat) / (nf * (nf - 1.0) * (nf + 2.0));
        for (name, r) in [
            ("fhat/n", ru),
            ("(1-f)/(n(n-1))", rv),
            ("(n+nf-2fhat)/(n(n-1)(n+2))", rw),
        ] {
            if r < -1e-12 {
                return Err(Error::NegativeRadicand { which: name, value: r });
            }
        }
        let su = ru.max(0.0).sqrt();
        let sv = rv.max(0.0).sqrt();
        let sw = rw.max(0.0).sqrt();
        Ok(SqrtCoefficients {
            a1: 0.5 * (sv + sw),
            b1: 0.5 * (sw - sv),
            c1: (su - sw) / nf,
        })
    }

    /// The parameter image of partial transposition: b and c swap.
    pub fn bc_swapped(&self) -> OrthoState {
        let nf = self.n as f64;
        OrthoState {
            n: self.n,
            a: self.a,
            b: self.c,
            c: self.b,
            f: nf * (self.a + nf * self.c + self.b),
            fhat: nf * (self.a + self.c + nf * self.b),
        }
    }
}

/// Bloch vector and correlation matrix of an orthogonally invariant
/// state in the generator basis: x vanishes and T is diagonal with
/// entries (n^2/2)(b+c) on the diagonal-and-symmetric generator block
/// and (n^2/2)(b-c) on the antisymmetric block.
pub fn bloch_correlation(s: &OrthoState, gs: &GeneratorSet) -> Result<(Vec<f64>, CMatrix)> {
    if gs.n() != s.n() {
        return Err(Error::DimensionMismatch {
            left: gs.n(),
            right: s.n(),
        });
    }
    let m = gs.len();
    let nf = s.n() as f64;
    let tp = nf * nf / 2.0 * (s.b() + s.c());
    let tm = nf * nf / 2.0 * (s.b() - s.c());
    let split = gs.antisymmetric_start();
    let x = vec![0.0; m];
    let mut t = CMatrix::zeros(m);
    for k in 0..m {
        let v = if k < split { tp } else { tm };
        t.set(k, k, C64::new(v, 0.0));
    }
    Ok((x, t))
}

/// Werner slice: c = 0, a fixed by the trace condition.
pub fn werner(n: usize, b: f64) -> Result<OrthoState> {
    if n < 2 {
        return Err(Error::DimensionTooSmall { n });
    }
    let nf = n as f64;
    let lo = -1.0 / (nf * (nf - 1.0));
    let hi = 1.0 / (nf * (nf + 1.0));
    if b < lo - PHYS_TOL || b > hi + PHYS_TOL {
        return Err(Error::ParameterRange { value: b, lo, hi });
    }
    let a = (1.0 - nf * b) / (nf * nf);
    OrthoState::from_abc(n, a, b, 0.0)
}

/// Isotropic slice: b = 0, a fixed by the trace condition.
pub fn isotropic(n: usize, c: f64) -> Result<OrthoState> {
    if n < 2 {
        return Err(Error::DimensionTooSmall { n });
    }
    let nf = n as f64;
    let lo = -1.0 / (nf * (nf * nf - 1.0));
    let hi = 1.0 / nf;
    if c < lo - PHYS_TOL || c > hi + PHYS_TOL {
        return Err(Error::ParameterRange { value: c, lo, hi });
    }
    let a = (1.0 - nf * c) / (nf * nf);
    OrthoState::from_abc(n, a, 0.0, c)
}

/// Maximally mixed state I/n^2.
pub fn maximally_mixed(n: usize) -> Result<OrthoState> {
    let nf = n as f64;
    OrthoState::from_abc(n, 1.0 / (nf * nf), 0.0, 0.0)
}

/// Seeded point of the physical region: f uniform in [-1,1], fhat
/// uniform in [0, n(f+1)/2].
pub fn sample_physical(n: usize, rng: &mut impl Rng) -> OrthoState {
    let nf = n as f64;
    let f = rng.gen_range(-1.0..1.0);
    let fhat = rng.gen_range(0.0..1.0) * nf * (f + 1.0) / 2.0;
    OrthoState::from_ffhat(n, f, fhat).expect("n >= 2")
}
