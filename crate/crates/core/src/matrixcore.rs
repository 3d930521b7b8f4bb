//! Dense complex linear algebra for 4×4 Hermitian matrices.
//!
//! Everything here is sized at compile time. The eigensolver is a cyclic
//! complex Jacobi iteration, generic over the dimension so the same routine
//! also serves the 8×8 Hermitian embeddings used for singular values.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Absolute tolerance on `m[i][j] - conj(m[j][i])` for a matrix to count as Hermitian.
pub const HERM_TOL: f64 = 1e-12;
/// Entrywise tolerance at which an eigendecomposition must reproduce its input.
pub const RECON_TOL: f64 = 1e-10;
/// Eigenvalues in `(-CLIP_TOL, 0)` of a nominally PSD matrix are treated as zero.
pub const CLIP_TOL: f64 = 1e-12;

const MAX_SWEEPS: usize = 64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

#[inline]
pub(crate) fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// A 4×4 complex matrix in the computational basis |00⟩, |01⟩, |10⟩, |11⟩.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexMatrix4 {
    entries: [[C64; 4]; 4],
}

impl ComplexMatrix4 {
    pub const fn new(entries: [[C64; 4]; 4]) -> Self {
        Self { entries }
    }

    pub fn zeros() -> Self {
        Self::new([[ZERO; 4]; 4])
    }

    pub fn identity() -> Self {
        Self::from_real_diagonal([1.0; 4])
    }

    pub fn from_real(entries: [[f64; 4]; 4]) -> Self {
        let mut m = Self::zeros();
        for i in 0..4 {
            for j in 0..4 {
                m.entries[i][j] = re(entries[i][j]);
            }
        }
        m
    }

    pub fn from_real_diagonal(diag: [f64; 4]) -> Self {
        let mut m = Self::zeros();
        for (i, d) in diag.into_iter().enumerate() {
            m.entries[i][i] = re(d);
        }
        m
    }

    /// Rank-one projector `|v⟩⟨v|` (no normalization applied).
    pub fn outer(v: &[C64; 4]) -> Self {
        let mut m = Self::zeros();
        for i in 0..4 {
            for j in 0..4 {
                m.entries[i][j] = v[i] * v[j].conj();
            }
        }
        m
    }

    /// Kronecker product of two 2×2 matrices, first factor on the first qubit.
    pub fn kron(a: &[[C64; 2]; 2], b: &[[C64; 2]; 2]) -> Self {
        let mut m = Self::zeros();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        m.entries[2 * i + k][2 * j + l] = a[i][j] * b[k][l];
                    }
                }
            }
        }
        m
    }

    pub fn entries(&self) -> &[[C64; 4]; 4] {
        &self.entries
    }

    pub fn into_entries(self) -> [[C64; 4]; 4] {
        self.entries
    }

    pub fn trace(&self) -> C64 {
        (0..4).map(|i| self.entries[i][i]).sum()
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..4 {
            for j in 0..4 {
                m.entries[i][j] = self.entries[j][i].conj();
            }
        }
        m
    }

    /// Entrywise complex conjugate (not the adjoint).
    pub fn conj(&self) -> Self {
        let mut m = *self;
        m.entries.iter_mut().flatten().for_each(|z| *z = z.conj());
        m
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut m = *self;
        m.entries.iter_mut().flatten().for_each(|z| *z *= s);
        m
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries
            .iter()
            .flatten()
            .zip(other.entries.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest deviation from Hermiticity, `max |m_ij - conj(m_ji)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..4 {
            for j in i..4 {
                worst = worst.max((self.entries[i][j] - self.entries[j][i].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_defect() <= HERM_TOL
    }

    /// `(m + m†)/2`.
    pub fn hermitian_part(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..4 {
            for j in 0..4 {
                m.entries[i][j] = (self.entries[i][j] + self.entries[j][i].conj()) * 0.5;
            }
        }
        m
    }

    /// `Tr(A B)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> C64 {
        let mut acc = ZERO;
        for i in 0..4 {
            for k in 0..4 {
                acc += self.entries[i][k] * other.entries[k][i];
            }
        }
        acc
    }

    /// Squared Frobenius norm, equal to `Tr(m²)` for Hermitian `m`.
    pub fn frobenius_sq(&self) -> f64 {
        self.entries.iter().flatten().map(|z| z.norm_sqr()).sum()
    }
}

impl Index<(usize, usize)> for ComplexMatrix4 {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.entries[i][j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix4 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.entries[i][j]
    }
}

impl Add for ComplexMatrix4 {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for i in 0..4 {
            for j in 0..4 {
                self.entries[i][j] += rhs.entries[i][j];
            }
        }
        self
    }
}

impl Sub for ComplexMatrix4 {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for i in 0..4 {
            for j in 0..4 {
                self.entries[i][j] -= rhs.entries[i][j];
            }
        }
        self
    }
}

impl Mul for ComplexMatrix4 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl Mul for &ComplexMatrix4 {
    type Output = ComplexMatrix4;
    fn mul(self, rhs: Self) -> ComplexMatrix4 {
        let mut m = ComplexMatrix4::zeros();
        for i in 0..4 {
            for k in 0..4 {
                let a = self.entries[i][k];
                if a == ZERO {
                    continue;
                }
                for j in 0..4 {
                    m.entries[i][j] += a * rhs.entries[k][j];
                }
            }
        }
        m
    }
}

/// Four real eigenvalues, sorted non-increasing.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Spectrum([f64; 4]);

impl Spectrum {
    /// Sorts the values non-increasing.
    pub fn new(mut values: [f64; 4]) -> Self {
        values.sort_by(|a, b| b.total_cmp(a));
        Self(values)
    }

    pub fn values(&self) -> [f64; 4] {
        self.0
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn largest(&self) -> f64 {
        self.0[0]
    }

    pub fn smallest(&self) -> f64 {
        self.0[3]
    }

    /// Values with floating-point PSD drift in `(-CLIP_TOL, 0)` set to zero.
    pub fn clipped(&self) -> [f64; 4] {
        self.0.map(clip)
    }

    /// Number of eigenvalues above `CLIP_TOL`.
    pub fn rank(&self) -> usize {
        self.0.iter().filter(|&&v| v > CLIP_TOL).count()
    }
}

#[inline]
pub(crate) fn clip(v: f64) -> f64 {
    if v < 0.0 && v > -CLIP_TOL {
        0.0
    } else {
        v
    }
}

/// Eigenvalues with matching orthonormal eigenvectors; `vectors[k]` belongs to `spectrum.values()[k]`.
#[derive(Clone, Copy, Debug)]
pub struct Eigensystem {
    pub spectrum: Spectrum,
    pub vectors: [[C64; 4]; 4],
}

impl Eigensystem {
    /// `Σ g(λ_k) |v_k⟩⟨v_k|`.
    pub fn reconstruct_with(&self, mut g: impl FnMut(f64) -> f64) -> ComplexMatrix4 {
        let mut m = ComplexMatrix4::zeros();
        for (lambda, v) in self.spectrum.values().into_iter().zip(&self.vectors) {
            let w = g(lambda);
            if w == 0.0 {
                continue;
            }
            m = m + ComplexMatrix4::outer(v).scale(w);
        }
        m
    }

    pub fn reconstruct(&self) -> ComplexMatrix4 {
        self.reconstruct_with(|l| l)
    }
}

/// Cyclic complex Jacobi on an `N×N` Hermitian matrix given by its full entries.
///
/// Returns unsorted eigenvalues and the unitary whose columns are eigenvectors.
pub(crate) fn jacobi_hermitian<const N: usize>(mut a: [[C64; N]; N]) -> ([f64; N], [[C64; N]; N]) {
    let mut v = [[ZERO; N]; N];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = ONE;
    }
    let scale: f64 = a.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if scale == 0.0 {
        return ([0.0; N], v);
    }
    let target = (f64::EPSILON * scale * 1e-2).powi(2);

    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..N {
            for q in (p + 1)..N {
                off += a[p][q].norm_sqr();
            }
        }
        if off <= target {
            break;
        }
        for p in 0..N {
            for q in (p + 1)..N {
                let apq = a[p][q];
                let g = apq.norm();
                if g == 0.0 {
                    continue;
                }
                let app = a[p][p].re;
                let aqq = a[q][q].re;
                // Off-diagonal already negligible against both diagonal entries.
                if g < f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
                    a[p][q] = ZERO;
                    a[q][p] = ZERO;
                    continue;
                }
                let phase = apq.conj() / g;
                let theta = (aqq - app) / (2.0 * g);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // U = diag(1, phase) · [[c, s], [-s, c]] on the (p, q) plane.
                let u_pp = re(c);
                let u_pq = re(s);
                let u_qp = phase * (-s);
                let u_qq = phase * c;

                for row in a.iter_mut() {
                    let (x, y) = (row[p], row[q]);
                    row[p] = x * u_pp + y * u_qp;
                    row[q] = x * u_pq + y * u_qq;
                }
                for k in 0..N {
                    let (x, y) = (a[p][k], a[q][k]);
                    a[p][k] = u_pp.conj() * x + u_qp.conj() * y;
                    a[q][k] = u_pq.conj() * x + u_qq.conj() * y;
                }
                a[p][q] = ZERO;
                a[q][p] = ZERO;
                a[p][p].im = 0.0;
                a[q][q].im = 0.0;
                for row in v.iter_mut() {
                    let (x, y) = (row[p], row[q]);
                    row[p] = x * u_pp + y * u_qp;
                    row[q] = x * u_pq + y * u_qq;
                }
            }
        }
    }

    let mut values = [0.0; N];
    for (i, val) in values.iter_mut().enumerate() {
        *val = a[i][i].re;
    }
    (values, v)
}

/// Eigenvalues (non-increasing) and orthonormal eigenvectors of a Hermitian matrix.
pub fn hermitian_eigensystem(m: &ComplexMatrix4) -> Result<Eigensystem> {
    let defect = m.hermiticity_defect();
    if defect > HERM_TOL {
        return Err(Error::NotHermitian { deviation: defect });
    }
    let (values, u) = jacobi_hermitian(m.hermitian_part().into_entries());
    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&i, &j| values[j].total_cmp(&values[i]));
    let mut vectors = [[ZERO; 4]; 4];
    let mut sorted = [0.0; 4];
    for (k, &idx) in order.iter().enumerate() {
        sorted[k] = values[idx];
        for (row, val) in u.iter().zip(vectors[k].iter_mut()) {
            *val = row[idx];
        }
    }
    Ok(Eigensystem {
        spectrum: Spectrum(sorted),
        vectors,
    })
}

pub fn hermitian_eigenvalues(m: &ComplexMatrix4) -> Result<Spectrum> {
    hermitian_eigensystem(m).map(|e| e.spectrum)
}

/// Transpose on the second qubit: entry `(2i+j, 2k+l)` moves to `(2i+l, 2k+j)`.
pub fn partial_transpose(m: &ComplexMatrix4) -> ComplexMatrix4 {
    let mut out = ComplexMatrix4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out.entries[2 * i + l][2 * k + j] = m.entries[2 * i + j][2 * k + l];
                }
            }
        }
    }
    out
}

/// How `spectral_function` treats eigenvalues that are zero up to `CLIP_TOL`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroConvention {
    /// Apply `f` to every eigenvalue.
    Apply,
    /// Restrict to the support: eigenvalues at or below `CLIP_TOL` contribute nothing.
    SupportOnly,
}

/// `Σ f(λ_k) |v_k⟩⟨v_k|` over the eigensystem of `m`.
pub fn spectral_function(
    m: &ComplexMatrix4,
    f: impl Fn(f64) -> f64,
    zero_convention: ZeroConvention,
) -> Result<ComplexMatrix4> {
    let eig = hermitian_eigensystem(m)?;
    spectral_function_of(&eig, f, zero_convention)
}

pub(crate) fn spectral_function_of(
    eig: &Eigensystem,
    f: impl Fn(f64) -> f64,
    zero_convention: ZeroConvention,
) -> Result<ComplexMatrix4> {
    let mut bad = None;
    let out = eig.reconstruct_with(|lambda| {
        let lambda = clip(lambda);
        if zero_convention == ZeroConvention::SupportOnly && lambda <= CLIP_TOL {
            return 0.0;
        }
        let y = f(lambda);
        if !y.is_finite() {
            bad.get_or_insert(lambda);
            return 0.0;
        }
        y
    });
    match bad {
        Some(lambda) => Err(Error::SpectralDomain { eigenvalue: lambda }),
        None => Ok(out),
    }
}

const PAULI_X: [[C64; 2]; 2] = [[ZERO, ONE], [ONE, ZERO]];
const PAULI_Y: [[C64; 2]; 2] = [[ZERO, C64::new(0.0, -1.0)], [C64::new(0.0, 1.0), ZERO]];
const PAULI_Z: [[C64; 2]; 2] = [[ONE, ZERO], [ZERO, C64::new(-1.0, 0.0)]];

/// The three Pauli matrices x, y, z.
pub fn paulis() -> [[[C64; 2]; 2]; 3] {
    [PAULI_X, PAULI_Y, PAULI_Z]
}

/// `σ_y ⊗ σ_y`.
pub fn sigma_yy() -> ComplexMatrix4 {
    ComplexMatrix4::kron(&PAULI_Y, &PAULI_Y)
}
