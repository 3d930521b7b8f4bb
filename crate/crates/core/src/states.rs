//! Two-qubit state families and random state sampling.
//!
//! Explicit matrices use the basis order |00⟩, |01⟩, |10⟩, |11⟩. Most
//! families are "X-form": nonzero entries only on the diagonal and on the
//! |00⟩⟨11| corners.

use std::f64::consts::FRAC_1_SQRT_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::error::{check_range, Error, Result};
use crate::matrixcore::{
    hermitian_eigensystem, re, ComplexMatrix4, Eigensystem, Spectrum, C64, CLIP_TOL, ZERO,
};

/// Trace tolerance for a valid density matrix.
pub const TRACE_TOL: f64 = 1e-10;
/// Most negative eigenvalue tolerated in a valid density matrix.
pub const PSD_TOL: f64 = 1e-10;
/// Tolerance on the normalization of [`XStateParams`].
pub const PARAM_SUM_TOL: f64 = 1e-12;

/// A validated two-qubit density matrix: Hermitian, unit trace, PSD.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix4,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix4) -> Result<Self> {
        let eig = hermitian_eigensystem(&matrix)?;
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace is {trace}, expected 1")));
        }
        let min = eig.spectrum.smallest();
        if min < -PSD_TOL {
            return Err(Error::InvalidState(format!(
                "smallest eigenvalue {min:e} is negative"
            )));
        }
        Ok(Self {
            matrix: matrix.hermitian_part(),
        })
    }

    /// Wraps a matrix that is correct by construction.
    pub(crate) fn new_unchecked(matrix: ComplexMatrix4) -> Self {
        debug_assert!(matrix.is_hermitian());
        Self { matrix }
    }

    pub fn matrix(&self) -> &ComplexMatrix4 {
        &self.matrix
    }

    pub fn eigensystem(&self) -> Eigensystem {
        hermitian_eigensystem(&self.matrix).expect("density matrices are Hermitian")
    }

    pub fn spectrum(&self) -> Spectrum {
        self.eigensystem().spectrum
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.matrix.frobenius_sq()
    }

    pub fn maximally_mixed() -> Self {
        Self::new_unchecked(ComplexMatrix4::identity().scale(0.25))
    }

    /// `|ψ⟩⟨ψ|` after normalizing `psi`.
    pub fn pure(psi: [C64; 4]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidState("zero state vector".into()));
        }
        Ok(Self::new_unchecked(ComplexMatrix4::outer(&psi.map(|z| z / norm))))
    }

    /// Mixture `Σ wᵢ ρᵢ`; weights must be non-negative and sum to one.
    pub fn mixture(parts: &[(f64, DensityMatrix)]) -> Result<Self> {
        let mut m = ComplexMatrix4::zeros();
        for (w, rho) in parts {
            if *w < 0.0 {
                return Err(Error::InvalidState(format!("negative mixture weight {w}")));
            }
            m = m + rho.matrix.scale(*w);
        }
        Self::new(m)
    }
}

/// The four Bell vectors φ+, φ-, ψ+, ψ-.
pub fn bell_vector(which: BellState) -> [C64; 4] {
    let h = re(FRAC_1_SQRT_2);
    match which {
        BellState::PhiPlus => [h, ZERO, ZERO, h],
        BellState::PhiMinus => [h, ZERO, ZERO, -h],
        BellState::PsiPlus => [ZERO, h, h, ZERO],
        BellState::PsiMinus => [ZERO, h, -h, ZERO],
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BellState {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellState {
    pub const ALL: [BellState; 4] = [
        BellState::PhiPlus,
        BellState::PhiMinus,
        BellState::PsiPlus,
        BellState::PsiMinus,
    ];
}

/// `|φ+⟩⟨φ+|`.
pub fn phi_plus() -> DensityMatrix {
    DensityMatrix::new_unchecked(ComplexMatrix4::outer(&bell_vector(BellState::PhiPlus)))
}

/// Parameters of the X-form state
///
/// ```text
/// [ x + r/2   0   0   r/2     ]
/// [ 0         a   0   0       ]
/// [ 0         0   b   0       ]
/// [ r/2       0   0   y + r/2 ]
/// ```
///
/// with all entries non-negative and `x + y + a + b + r = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct XStateParams {
    pub x: f64,
    pub y: f64,
    pub a: f64,
    pub b: f64,
    pub r: f64,
}

impl XStateParams {
    /// Symmetric case `y = x`, with `x` fixed by normalization.
    pub fn symmetric(a: f64, b: f64, r: f64) -> Self {
        let x = (1.0 - a - b - r) / 2.0;
        Self { x, y: x, a, b, r }
    }

    pub fn validate(&self) -> Result<()> {
        let Self { x, y, a, b, r } = *self;
        for (name, v) in [("x", x), ("y", y), ("a", a), ("b", b), ("r", r)] {
            if !(v >= -PARAM_SUM_TOL) {
                return Err(Error::InvalidState(format!("X-state parameter {name} = {v} is negative")));
            }
        }
        let sum = x + y + a + b + r;
        if (sum - 1.0).abs() > PARAM_SUM_TOL {
            return Err(Error::InvalidState(format!(
                "X-state parameters sum to {sum}, expected 1"
            )));
        }
        let gap = (x + r / 2.0) * (y + r / 2.0) - (r / 2.0) * (r / 2.0);
        if gap < -PARAM_SUM_TOL {
            return Err(Error::InvalidState(format!(
                "X-state corner block is not PSD (determinant {gap:e})"
            )));
        }
        Ok(())
    }

    /// Concurrence of the induced state, `max(0, r - 2√(ab))`.
    pub fn concurrence(&self) -> f64 {
        (self.r - 2.0 * (self.a * self.b).sqrt()).max(0.0)
    }
}

fn x_matrix(diag: [f64; 4], coherence: f64) -> ComplexMatrix4 {
    let mut m = ComplexMatrix4::from_real_diagonal(diag);
    m[(0, 3)] = re(coherence);
    m[(3, 0)] = re(coherence);
    m
}

pub fn from_x_params(p: &XStateParams) -> Result<DensityMatrix> {
    p.validate()?;
    let XStateParams { x, y, a, b, r } = *p;
    Ok(DensityMatrix::new_unchecked(x_matrix(
        [x + r / 2.0, a, b, y + r / 2.0],
        r / 2.0,
    )))
}

/// The maximal state with prescribed eigenvalues, in its X-form representative.
pub fn maximal_form_from_spectrum(s: &Spectrum) -> Result<DensityMatrix> {
    let [l1, l2, l3, l4] = s.values();
    if l4 < -PSD_TOL || l1 > 1.0 + PSD_TOL || (s.sum() - 1.0).abs() > TRACE_TOL {
        return Err(Error::InvalidState(format!(
            "{:?} is not a probability spectrum",
            s.values()
        )));
    }
    let corner = (l1 + l3) / 2.0;
    let r = l1 - l3;
    Ok(DensityMatrix::new_unchecked(x_matrix([corner, l2, l4, corner], r / 2.0)))
}

/// `r|φ+⟩⟨φ+| + (1-r)/4 · 1`.
pub fn werner(r: f64) -> Result<DensityMatrix> {
    check_range("r", r, 0.0, 1.0, "[0, 1]")?;
    let d = (1.0 + r) / 4.0;
    let m = (1.0 - r) / 4.0;
    Ok(DensityMatrix::new_unchecked(x_matrix([d, m, m, d], r / 2.0)))
}

/// Rank-2 MEMS branch: `diag(r/2, 1-r, 0, r/2)` with coherence `r/2`.
pub fn mems_rank2(r: f64) -> Result<DensityMatrix> {
    check_range("r", r, 0.0, 1.0, "[0, 1]")?;
    Ok(DensityMatrix::new_unchecked(x_matrix(
        [r / 2.0, 1.0 - r, 0.0, r / 2.0],
        r / 2.0,
    )))
}

/// Rank-3 MEMS branch: `diag(1/3, 1/3, 0, 1/3)` with coherence `r/2`, PSD for `r ≤ 2/3`.
pub fn mems_rank3(r: f64) -> Result<DensityMatrix> {
    check_range("r", r, 0.0, 2.0 / 3.0, "[0, 2/3]")?;
    let t = 1.0 / 3.0;
    Ok(DensityMatrix::new_unchecked(x_matrix([t, t, 0.0, t], r / 2.0)))
}

/// Tangle-vs-linear-entropy MEMS: rank 3 below `r = 2/3`, rank 2 from there on.
pub fn mems_ef_sl(r: f64) -> Result<DensityMatrix> {
    check_range("r", r, 0.0, 1.0, "[0, 1]")?;
    if r >= 2.0 / 3.0 {
        mems_rank2(r)
    } else {
        mems_rank3(r)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NslFamily {
    /// The Werner states.
    Werner,
    /// The rank-3 family with `a = (4 - 2√(3r²+1))/6`, `b = 0`.
    Rank3,
}

/// Rank-3 negativity-vs-linear-entropy family.
pub fn n_sl_rank3(r: f64) -> Result<DensityMatrix> {
    check_range("r", r, 0.0, 1.0, "[0, 1]")?;
    let q = (3.0 * r * r + 1.0).sqrt();
    let d = (1.0 + q) / 6.0;
    let a = (4.0 - 2.0 * q) / 6.0;
    Ok(DensityMatrix::new_unchecked(x_matrix([d, a.max(0.0), 0.0, d], r / 2.0)))
}

pub fn mems_n_sl(r: f64, family: NslFamily) -> Result<DensityMatrix> {
    match family {
        NslFamily::Werner => werner(r),
        NslFamily::Rank3 => n_sl_rank3(r),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EfSvBranch {
    Rank3,
    Werner,
}

/// Concurrence-vs-von-Neumann-entropy MEMS branches, parametrized by their concurrence.
pub fn mems_ef_sv(c: f64, branch: EfSvBranch) -> Result<DensityMatrix> {
    check_range("c", c, 0.0, 1.0, "[0, 1]")?;
    match branch {
        EfSvBranch::Rank3 => {
            let s = (4.0 - 3.0 * c * c).sqrt();
            let d = (4.0 - s) / 6.0;
            let a = (s - 1.0) / 3.0;
            Ok(DensityMatrix::new_unchecked(x_matrix([d, a, 0.0, d], c / 2.0)))
        }
        EfSvBranch::Werner => werner((1.0 + 2.0 * c) / 3.0),
    }
}

/// `r|φ+⟩⟨φ+| + (1-r)/2 (|01⟩⟨01| + |10⟩⟨10|)`.
pub fn gisin_c(r: f64) -> Result<DensityMatrix> {
    check_range("r", r, 0.0, 1.0, "[0, 1]")?;
    let h = (1.0 - r) / 2.0;
    Ok(DensityMatrix::new_unchecked(x_matrix(
        [r / 2.0, h, h, r / 2.0],
        r / 2.0,
    )))
}

/// `r|φ+⟩⟨φ+| + (1-r)|φ-⟩⟨φ-|`.
pub fn bell_diagonal_rank2(r: f64) -> Result<DensityMatrix> {
    check_range("r", r, 0.0, 1.0, "[0, 1]")?;
    Ok(DensityMatrix::new_unchecked(x_matrix(
        [0.5, 0.0, 0.0, 0.5],
        r - 0.5,
    )))
}

/// `Σ wᵢ |Bellᵢ⟩⟨Bellᵢ|` in the order φ+, φ-, ψ+, ψ-.
pub fn bell_diagonal(weights: [f64; 4]) -> Result<DensityMatrix> {
    let parts: Vec<_> = BellState::ALL
        .iter()
        .zip(weights)
        .map(|(&b, w)| {
            (
                w,
                DensityMatrix::new_unchecked(ComplexMatrix4::outer(&bell_vector(b))),
            )
        })
        .collect();
    DensityMatrix::mixture(&parts)
}

/// The symmetric rank ≤ 3 family `diag((1-a)/2, a, 0, (1-a)/2)` with coherence `r/2`.
pub fn rank3_family(a: f64, r: f64) -> Result<DensityMatrix> {
    check_range("a", a, 0.0, 1.0, "[0, 1]")?;
    check_range("r", r, 0.0, 1.0, "[0, 1]")?;
    if a + r > 1.0 + PARAM_SUM_TOL {
        return Err(Error::out_of_range("a + r", a + r, "[0, 1]"));
    }
    let d = (1.0 - a) / 2.0;
    Ok(DensityMatrix::new_unchecked(x_matrix([d, a, 0.0, d], r / 2.0)))
}

/// Pieces of the von Neumann vs linear entropy boundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EnvelopeSegment {
    /// Upper boundary: `{(1+3r)/4, (1-r)/4 ×3}`, r ∈ [0, 1].
    A,
    /// Lowest lower piece: `{r, 1-r, 0, 0}`, r ∈ [1/2, 1].
    B,
    /// Middle lower piece: `{r, (1-r)/2, (1-r)/2, 0}`, r ∈ [0, 1/3].
    C,
    /// Highest lower piece: `{(4-r)/12 ×3, 3r/12}`, r ∈ [0, 1].
    D,
}

impl EnvelopeSegment {
    pub const ALL: [EnvelopeSegment; 4] = [Self::A, Self::B, Self::C, Self::D];

    pub fn range(self) -> (f64, f64) {
        match self {
            Self::A | Self::D => (0.0, 1.0),
            Self::B => (0.5, 1.0),
            Self::C => (0.0, 1.0 / 3.0),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::A => "a",
            Self::B => "b",
            Self::C => "c",
            Self::D => "d",
        }
    }
}

pub fn entropy_plane_spectrum(segment: EnvelopeSegment, r: f64) -> Result<Spectrum> {
    let (lo, hi) = segment.range();
    if !(r >= lo && r <= hi) {
        return Err(Error::out_of_range("r", r, "the segment's parameter range"));
    }
    let values = match segment {
        EnvelopeSegment::A => {
            let m = (1.0 - r) / 4.0;
            [m, m, m, (1.0 + 3.0 * r) / 4.0]
        }
        EnvelopeSegment::B => [r, 1.0 - r, 0.0, 0.0],
        EnvelopeSegment::C => {
            let h = (1.0 - r) / 2.0;
            [r, h, h, 0.0]
        }
        EnvelopeSegment::D => {
            let m = (4.0 - r) / 12.0;
            [m, m, m, 3.0 * r / 12.0]
        }
    };
    Ok(Spectrum::new(values))
}

/// Random density matrices: flat Dirichlet eigenvalues on the rank-k simplex,
/// rotated by a Haar-random unitary.
///
/// Each sampler owns its generator; independent streams of one seed do not overlap.
#[derive(Clone, Debug)]
pub struct StateSampler {
    rng: ChaCha8Rng,
}

impl StateSampler {
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { rng }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Flat Dirichlet weights over `k` components, each above `1e-9`.
    pub fn simplex<const K: usize>(&mut self) -> [f64; K] {
        self.simplex_dyn(K).try_into().expect("length K")
    }

    fn simplex_dyn(&mut self, k: usize) -> Vec<f64> {
        loop {
            let e: Vec<f64> = (0..k).map(|_| self.rng.sample::<f64, _>(Exp1)).collect();
            let total: f64 = e.iter().sum();
            let w: Vec<f64> = e.iter().map(|v| v / total).collect();
            if w.iter().all(|&v| v > 1e-9) {
                return w;
            }
        }
    }

    /// Haar-distributed 4×4 unitary from Gram–Schmidt on complex Gaussian columns.
    pub fn haar_unitary(&mut self) -> [[C64; 4]; 4] {
        let mut cols = [[ZERO; 4]; 4];
        for col in cols.iter_mut() {
            for z in col.iter_mut() {
                *z = C64::new(
                    self.rng.sample(StandardNormal),
                    self.rng.sample(StandardNormal),
                );
            }
        }
        for k in 0..4 {
            for j in 0..k {
                let proj: C64 = (0..4).map(|i| cols[j][i].conj() * cols[k][i]).sum();
                for i in 0..4 {
                    let v = cols[j][i];
                    cols[k][i] -= proj * v;
                }
            }
            let norm = cols[k].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            cols[k].iter_mut().for_each(|z| *z /= norm);
        }
        cols
    }

    /// A random state of exactly `rank` nonzero eigenvalues.
    pub fn density(&mut self, rank: usize) -> Result<DensityMatrix> {
        check_range("rank", rank as f64, 1.0, 4.0, "{1, 2, 3, 4}")?;
        let weights = self.simplex_dyn(rank);
        let cols = self.haar_unitary();
        let mut m = ComplexMatrix4::zeros();
        for (w, col) in weights.iter().zip(&cols) {
            m = m + ComplexMatrix4::outer(col).scale(*w);
        }
        Ok(DensityMatrix::new_unchecked(m.hermitian_part()))
    }

    /// X-state parameters drawn flat on the five-component simplex.
    pub fn x_params(&mut self) -> XStateParams {
        let [x, y, a, b, r] = self.simplex::<5>();
        XStateParams { x, y, a, b, r }
    }

    /// Uniform on `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        self.rng.random()
    }

    pub fn uniform_rank(&mut self) -> usize {
        self.rng.random_range(1..=4)
    }
}

/// A random state of the given rank, determined entirely by `seed`.
pub fn random_density(rank: usize, seed: u64) -> Result<DensityMatrix> {
    StateSampler::new(seed).density(rank)
}

/// `ρ = λ ρ_s + (1-λ) ρ_e` with `ρ_s` separable and `ρ_e = |φ+⟩⟨φ+|`.
#[derive(Clone, Copy, Debug)]
pub struct LsDecomposition {
    /// Weight of the separable part.
    pub lambda: f64,
    pub separable_part: DensityMatrix,
    pub entangled_part: DensityMatrix,
    /// False when `r ≤ 2√(ab)`: the whole state is separable and `lambda = 1`.
    pub entangled: bool,
}

impl LsDecomposition {
    pub fn recombine(&self) -> ComplexMatrix4 {
        self.separable_part.matrix().scale(self.lambda)
            + self.entangled_part.matrix().scale(1.0 - self.lambda)
    }
}

/// Best separable approximation of an X-form state.
///
/// When the separable weight is zero (a pure Bell state) the separable part
/// carries no weight and is set to the maximally mixed state.
pub fn ls_decompose_x_state(p: &XStateParams) -> Result<LsDecomposition> {
    let rho = from_x_params(p)?;
    let XStateParams { x, y, a, b, r } = *p;
    let g = (a * b).sqrt();
    let ent_weight = r - 2.0 * g;
    if ent_weight <= 0.0 {
        return Ok(LsDecomposition {
            lambda: 1.0,
            separable_part: rho,
            entangled_part: phi_plus(),
            entangled: false,
        });
    }
    let lambda = 1.0 - ent_weight;
    let separable_part = if lambda <= CLIP_TOL {
        DensityMatrix::maximally_mixed()
    } else {
        let s = x_matrix([x + g, a, b, y + g], g).scale(1.0 / lambda);
        DensityMatrix::new_unchecked(s)
    };
    Ok(LsDecomposition {
        lambda: lambda.max(0.0),
        separable_part,
        entangled_part: phi_plus(),
        entangled: true,
    })
}
