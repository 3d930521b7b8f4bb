//! Entanglement and mixedness functionals of two-qubit states.
//!
//! Entanglement quantities (E_F, E_R, binary entropy) use log base 2, so a
//! Bell state scores 1. The von Neumann entropy uses log base 4, so the
//! maximally mixed state scores 1.

use crate::error::{check_range, Error, Result};
use crate::matrixcore::{
    clip, hermitian_eigensystem, hermitian_eigenvalues, jacobi_hermitian, partial_transpose,
    paulis, sigma_yy, spectral_function_of, ComplexMatrix4, Eigensystem, Spectrum,
    ZeroConvention, C64, CLIP_TOL, ZERO,
};
use crate::states::{DensityMatrix, XStateParams};

/// `x log₂ x` cutoff: below this the analytic limit 0 is substituted.
pub const XLOGX_CUTOFF: f64 = 1e-13;
/// Support mismatch tolerance: `⟨v|ρ|v⟩` above this on a null vector of σ makes `S(ρ‖σ)` infinite.
pub const SUPPORT_TOL: f64 = 1e-12;
/// Participation ratio at and above which every two-qubit state is separable.
pub const SEPARABLE_PARTICIPATION: f64 = 3.0;

fn xlog2x(x: f64) -> f64 {
    if x < XLOGX_CUTOFF {
        0.0
    } else {
        x * x.log2()
    }
}

/// `h(p) = -p log₂ p - (1-p) log₂ (1-p)`.
pub fn binary_entropy(p: f64) -> f64 {
    -(xlog2x(p) + xlog2x(1.0 - p))
}

// ---------------------------------------------------------------- entanglement

/// Square roots of the spin-flip spectrum, largest first.
///
/// These are the singular values of `τ = Wᵀ (σ_y⊗σ_y) W` with `ρ = W W†`,
/// read off the Hermitian embedding `[[0, τ], [τ†, 0]]`. This avoids taking
/// square roots of a non-Hermitian product's eigenvalues.
pub fn spin_flip_roots(rho: &DensityMatrix) -> [f64; 4] {
    spin_flip_roots_of(&rho.eigensystem())
}

fn spin_flip_roots_of(eig: &Eigensystem) -> [f64; 4] {
    let yy = sigma_yy();
    let w: Vec<[C64; 4]> = eig
        .spectrum
        .values()
        .iter()
        .zip(&eig.vectors)
        .map(|(&p, v)| {
            let s = clip(p).max(0.0).sqrt();
            v.map(|z| z * s)
        })
        .collect();
    let mut h = [[ZERO; 8]; 8];
    for j in 0..4 {
        for k in 0..4 {
            let mut t = ZERO;
            for m in 0..4 {
                for n in 0..4 {
                    let y = yy[(m, n)];
                    if y != ZERO {
                        t += w[j][m] * y * w[k][n];
                    }
                }
            }
            h[j][4 + k] = t;
            h[4 + k][j] = t.conj();
        }
    }
    let (mut vals, _) = jacobi_hermitian(h);
    vals.sort_by(|a, b| b.total_cmp(a));
    [vals[0], vals[1], vals[2], vals[3]].map(|v| v.max(0.0))
}

fn concurrence_of(eig: &Eigensystem) -> f64 {
    let s = spin_flip_roots_of(eig);
    (s[0] - s[1] - s[2] - s[3]).clamp(0.0, 1.0)
}

/// Wootters concurrence.
pub fn concurrence(rho: &DensityMatrix) -> f64 {
    concurrence_of(&rho.eigensystem())
}

pub fn tangle(rho: &DensityMatrix) -> f64 {
    concurrence(rho).powi(2)
}

pub fn eof_from_concurrence(c: f64) -> f64 {
    let c = c.clamp(0.0, 1.0);
    binary_entropy((1.0 + (1.0 - c * c).sqrt()) / 2.0)
}

/// Entanglement of formation.
pub fn eof(rho: &DensityMatrix) -> f64 {
    eof_from_concurrence(concurrence(rho))
}

/// Spectrum of the partial transpose.
pub fn pt_spectrum(rho: &DensityMatrix) -> Spectrum {
    hermitian_eigenvalues(&partial_transpose(rho.matrix())).expect("partial transpose is Hermitian")
}

fn negativity_from_pt(s: &Spectrum) -> f64 {
    let neg: f64 = s.values().iter().map(|&v| clip(v)).filter(|&v| v < 0.0).sum();
    (-2.0 * neg).clamp(0.0, 1.0)
}

/// Twice the magnitude of the negative part of the partial-transpose spectrum.
pub fn negativity(rho: &DensityMatrix) -> f64 {
    negativity_from_pt(&pt_spectrum(rho))
}

/// Closed-form negativity of an X-form state; independent of `x` and `y`.
pub fn negativity_x_form(p: &XStateParams) -> f64 {
    let XStateParams { a, b, r, .. } = *p;
    (((a - b).powi(2) + r * r).sqrt() - (a + b)).max(0.0)
}

/// Bounds `(n_min, n_max)` on negativity among states with concurrence `c`.
pub fn cn_bounds(c: f64) -> Result<(f64, f64)> {
    check_range("c", c, 0.0, 1.0, "[0, 1]")?;
    let n_min = (2.0 * (c - 0.5).powi(2) + 0.5).sqrt() + (c - 1.0);
    Ok((n_min.max(0.0), c))
}

// ------------------------------------------------------------------ mixedness

pub fn linear_entropy_from_purity(purity: f64) -> f64 {
    (4.0 / 3.0 * (1.0 - purity)).max(0.0)
}

/// `(4/3)(1 - Tr ρ²)`.
pub fn linear_entropy(rho: &DensityMatrix) -> f64 {
    linear_entropy_from_purity(rho.purity())
}

pub fn linear_entropy_of_spectrum(s: &Spectrum) -> f64 {
    linear_entropy_from_purity(s.values().iter().map(|v| v * v).sum())
}

/// `-Σ λ log₄ λ` with `0 log 0 = 0`.
pub fn von_neumann_entropy_of_spectrum(s: &Spectrum) -> f64 {
    let total: f64 = s.clipped().iter().map(|&v| xlog2x(v)).sum();
    (-total / 2.0).max(0.0)
}

pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    von_neumann_entropy_of_spectrum(&rho.spectrum())
}

/// `1 / Tr ρ²`.
pub fn participation_ratio(rho: &DensityMatrix) -> f64 {
    1.0 / rho.purity()
}

/// True when the participation ratio alone certifies separability.
pub fn participation_separable(rho: &DensityMatrix) -> bool {
    participation_ratio(rho) >= SEPARABLE_PARTICIPATION - 1e-12
}

// ------------------------------------------------------------ relative entropy

fn check_rank3(a: f64, r: f64) -> Result<()> {
    check_range("a", a, 0.0, 1.0, "[0, 1]")?;
    check_range("r", r, 0.0, 1.0, "[0, 1]")?;
    if a + r > 1.0 + 1e-12 {
        return Err(Error::out_of_range("a + r", a + r, "[0, 1]"));
    }
    Ok(())
}

/// Closest separable state to `rank3_family(a, r)`.
///
/// At `a = 0` the formulas are taken along `a = 0` (corners 1/2, no
/// coherence), which also covers the Bell-state limit `r = 1`.
pub fn closest_separable_rank3(a: f64, r: f64) -> Result<DensityMatrix> {
    check_rank3(a, r)?;
    let (c, d, e) = if a == 0.0 {
        (0.5, 0.0, 0.0)
    } else {
        let den = (1.0 + a - r) * (1.0 + a + r);
        (
            (1.0 + a) * (1.0 - a * a - r * r) / (2.0 * den),
            a * (1.0 + a) * r / den,
            a * (1.0 + a).powi(2) / den,
        )
    };
    let mut m = ComplexMatrix4::from_real_diagonal([c, e, (1.0 - 2.0 * c - e).max(0.0), c]);
    m[(0, 3)] = C64::new(d, 0.0);
    m[(3, 0)] = C64::new(d, 0.0);
    DensityMatrix::new(m)
}

/// Relative entropy of entanglement of `rank3_family(a, r)`, in closed form.
///
/// Written as `[φ(1+a+r) + φ(1+a-r)]/2 - φ(1+a)` with `φ(z) = z log₂ z`, which
/// stays finite as `1+a-r → 0`.
pub fn er_rank3(a: f64, r: f64) -> Result<f64> {
    check_rank3(a, r)?;
    let s = 1.0 + a;
    let v = 0.5 * (xlog2x(s + r) + xlog2x(s - r)) - xlog2x(s);
    Ok(v.max(0.0))
}

/// Relative entropy of entanglement of `werner(r)`: `1 - h((1+3r)/4)` when entangled.
pub fn er_werner(r: f64) -> Result<f64> {
    check_range("r", r, 0.0, 1.0, "[0, 1]")?;
    let f = (1.0 + 3.0 * r) / 4.0;
    if f <= 0.5 {
        return Ok(0.0);
    }
    Ok((1.0 - binary_entropy(f)).max(0.0))
}

/// `S(ρ‖σ) = Tr ρ log₂ ρ - Tr ρ log₂ σ`; infinite when `ρ` is not supported inside `σ`.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    let er = rho.eigensystem();
    let es = hermitian_eigensystem(sigma.matrix())?;
    for (lambda, v) in es.spectrum.values().iter().zip(&es.vectors) {
        if clip(*lambda) <= CLIP_TOL {
            let overlap = ComplexMatrix4::outer(v).trace_product(rho.matrix()).re;
            if overlap > SUPPORT_TOL {
                return Ok(f64::INFINITY);
            }
        }
    }
    let self_term: f64 = er.spectrum.clipped().iter().map(|&p| xlog2x(p)).sum();
    let log_sigma = spectral_function_of(&es, f64::log2, ZeroConvention::SupportOnly)?;
    let cross = rho.matrix().trace_product(&log_sigma).re;
    Ok(self_term - cross)
}

// ----------------------------------------------------------------------- CHSH

/// `T_ij = Tr(ρ σ_i ⊗ σ_j)`.
pub fn correlation_matrix(rho: &DensityMatrix) -> [[f64; 3]; 3] {
    let p = paulis();
    let mut t = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            t[i][j] = ComplexMatrix4::kron(&p[i], &p[j])
                .trace_product(rho.matrix())
                .re;
        }
    }
    t
}

/// Maximal CHSH combination over measurement directions: `2√(u₁ + u₂)` with
/// `u₁ ≥ u₂` the two largest eigenvalues of `TᵀT`.
pub fn chsh_b(rho: &DensityMatrix) -> f64 {
    let t = correlation_matrix(rho);
    let mut m = [[ZERO; 4]; 4];
    for i in 0..3 {
        for j in 0..3 {
            let v: f64 = (0..3).map(|k| t[k][i] * t[k][j]).sum();
            m[i][j] = C64::new(v, 0.0);
        }
    }
    let (mut u, _) = jacobi_hermitian(m);
    u.sort_by(|a, b| b.total_cmp(a));
    2.0 * (u[0] + u[1]).max(0.0).sqrt()
}

/// Closed form `2√((4(x+r/2)-1)² + r²)` for X-form states, with the corner
/// populations symmetrized when `x ≠ y`.
///
/// This keeps only the zz and one transverse correlation; for states whose
/// transverse correlation `r` exceeds `|T_zz|` it is below the true maximum.
pub fn chsh_b_closed_form(p: &XStateParams) -> f64 {
    let corner = (p.x + p.y) / 2.0 + p.r / 2.0;
    2.0 * ((4.0 * corner - 1.0).powi(2) + p.r * p.r).sqrt()
}

// --------------------------------------------------------------------- bundle

/// Every measure of one state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasureVector {
    pub concurrence: f64,
    pub tangle: f64,
    pub eof: f64,
    pub negativity: f64,
    pub linear_entropy: f64,
    pub von_neumann_entropy: f64,
    pub chsh_b: f64,
}

impl MeasureVector {
    pub const NAMES: [&'static str; 7] = [
        "concurrence",
        "tangle",
        "eof",
        "negativity",
        "s_l",
        "s_v",
        "chsh_b",
    ];

    pub fn values(&self) -> [f64; 7] {
        [
            self.concurrence,
            self.tangle,
            self.eof,
            self.negativity,
            self.linear_entropy,
            self.von_neumann_entropy,
            self.chsh_b,
        ]
    }
}

pub fn measure_all(rho: &DensityMatrix) -> MeasureVector {
    let eig = rho.eigensystem();
    let c = concurrence_of(&eig);
    MeasureVector {
        concurrence: c,
        tangle: c * c,
        eof: eof_from_concurrence(c),
        negativity: negativity(rho),
        linear_entropy: linear_entropy(rho),
        von_neumann_entropy: von_neumann_entropy_of_spectrum(&eig.spectrum),
        chsh_b: chsh_b(rho),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{
        bell_diagonal_rank2, from_x_params, phi_plus, rank3_family, werner,
    };

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn concurrence_examples() {
        assert!(close(concurrence(&phi_plus()), 1.0, 1e-12));
        assert!(close(concurrence(&DensityMatrix::maximally_mixed()), 0.0, 1e-12));
        assert!(close(concurrence(&werner(0.5).unwrap()), 0.25, 1e-12));
        assert!(close(concurrence(&bell_diagonal_rank2(0.75).unwrap()), 0.5, 1e-12));
    }

    #[test]
    fn eof_examples() {
        assert!(close(eof(&phi_plus()), 1.0, 1e-12));
        assert_eq!(eof(&DensityMatrix::maximally_mixed()), 0.0);
        let p = (1.0 + (1.0f64 - 1.0 / 16.0).sqrt()) / 2.0;
        let h = -p * p.log2() - (1.0 - p) * (1.0 - p).log2();
        let e = eof(&werner(0.5).unwrap());
        assert!(close(e, h, 1e-12));
        assert!(close(e, 0.117619, 1e-6));
    }

    #[test]
    fn negativity_examples() {
        assert!(close(negativity(&phi_plus()), 1.0, 1e-12));
        assert!(close(negativity(&werner(0.5).unwrap()), 0.25, 1e-12));
        let q = 0.125;
        let p = XStateParams { x: q, y: q, a: q, b: q, r: 0.5 };
        assert!(close(negativity_x_form(&p), 0.25, 1e-15));
        let p = XStateParams { x: 0.05, y: 0.25, a: 0.3, b: 0.02, r: 0.38 };
        let rho = from_x_params(&p).unwrap();
        assert!(close(negativity(&rho), negativity_x_form(&p), 1e-12));
    }

    #[test]
    fn entropy_examples() {
        let mixed = DensityMatrix::maximally_mixed();
        assert!(close(linear_entropy(&phi_plus()), 0.0, 1e-12));
        assert!(close(linear_entropy(&mixed), 1.0, 1e-12));
        for r in [0.0, 0.3, 0.8] {
            assert!(close(linear_entropy(&werner(r).unwrap()), 1.0 - r * r, 1e-12));
        }
        assert!(close(von_neumann_entropy(&phi_plus()), 0.0, 1e-12));
        assert!(close(von_neumann_entropy(&mixed), 1.0, 1e-12));
        let half = Spectrum::new([0.5, 0.5, 0.0, 0.0]);
        assert!(close(von_neumann_entropy_of_spectrum(&half), 0.5, 1e-15));
    }

    #[test]
    fn participation_examples() {
        assert!(close(participation_ratio(&phi_plus()), 1.0, 1e-12));
        assert!(close(participation_ratio(&DensityMatrix::maximally_mixed()), 4.0, 1e-12));
        let w = werner(1.0 / 3.0).unwrap();
        assert!(close(participation_ratio(&w), 3.0, 1e-12));
        assert!(participation_separable(&w));
        assert!(!participation_separable(&werner(0.5).unwrap()));
    }

    #[test]
    fn closest_separable_examples() {
        let a = 0.3;
        let s = closest_separable_rank3(a, 0.0).unwrap();
        assert!(s.matrix().max_abs_diff(rank3_family(a, 0.0).unwrap().matrix()) < 1e-15);

        let bell = closest_separable_rank3(0.0, 1.0).unwrap();
        assert!(bell.matrix().max_abs_diff(&ComplexMatrix4::from_real_diagonal([0.5, 0.0, 0.0, 0.5])) < 1e-15);

        let s = closest_separable_rank3(0.254, 0.7).unwrap();
        assert!(pt_spectrum(&s).smallest() > -1e-10);
        assert!(close(s.matrix().trace().re, 1.0, 1e-14));
        assert!(closest_separable_rank3(0.4, 0.7).is_err());
    }

    #[test]
    fn er_rank3_examples() {
        assert_eq!(er_rank3(0.4, 0.0).unwrap(), 0.0);
        assert!(close(er_rank3(0.0, 1.0).unwrap(), 1.0, 1e-15));
        assert!(close(er_rank3(1e-15, 1.0 - 1e-15).unwrap(), 1.0, 1e-12));
        let (a, r) = (0.2, 0.8);
        let rho = rank3_family(a, r).unwrap();
        let sigma = closest_separable_rank3(a, r).unwrap();
        let direct = relative_entropy(&rho, &sigma).unwrap();
        assert!(close(er_rank3(a, r).unwrap(), direct, 1e-10));
        assert!(er_rank3(0.5, 0.6).is_err());
    }

    #[test]
    fn relative_entropy_support() {
        let rho = phi_plus();
        let sigma = DensityMatrix::new(ComplexMatrix4::from_real_diagonal([1.0, 0.0, 0.0, 0.0])).unwrap();
        assert_eq!(relative_entropy(&rho, &sigma).unwrap(), f64::INFINITY);
        assert!(relative_entropy(&rho, &rho).unwrap().abs() < 1e-12);
    }

    #[test]
    fn werner_relative_entropy_matches_boundary_state() {
        let sep = werner(1.0 / 3.0).unwrap();
        for r in [0.4, 0.6059, 0.9] {
            let direct = relative_entropy(&werner(r).unwrap(), &sep).unwrap();
            assert!(close(er_werner(r).unwrap(), direct, 1e-10), "r={r}");
        }
        assert_eq!(er_werner(0.2).unwrap(), 0.0);
        assert!(close(er_werner(1.0).unwrap(), 1.0, 1e-12));
    }

    #[test]
    fn chsh_examples() {
        assert!(close(chsh_b(&phi_plus()), 2.0 * 2f64.sqrt(), 1e-10));
        assert!(chsh_b(&DensityMatrix::maximally_mixed()).abs() < 1e-12);
        for r in [0.2, 0.5, 0.9] {
            let w = werner(r).unwrap();
            assert!(close(chsh_b(&w), 2.0 * 2f64.sqrt() * r, 1e-10));
            let q = (1.0 - r) / 4.0;
            let p = XStateParams { x: q, y: q, a: q, b: q, r };
            assert!(close(chsh_b_closed_form(&p), 2.0 * 2f64.sqrt() * r, 1e-12));
        }
    }

    #[test]
    fn chsh_closed_form_underestimates_transverse_dominated_states() {
        // rank-2 frontier state: T_zz = 2r - 1 < r for r < 1
        let r: f64 = 0.8;
        let p = XStateParams { x: 0.0, y: 0.0, a: 1.0 - r, b: 0.0, r };
        let general = chsh_b(&from_x_params(&p).unwrap());
        assert!(close(general, 2.0 * 2f64.sqrt() * r, 1e-10));
        assert!(chsh_b_closed_form(&p) < general - 0.1);
    }

    #[test]
    fn cn_bound_examples() {
        assert_eq!(cn_bounds(0.0).unwrap(), (0.0, 0.0));
        let (lo, hi) = cn_bounds(1.0).unwrap();
        assert!(close(lo, 1.0, 1e-15) && hi == 1.0);
        assert!(close(cn_bounds(0.5).unwrap().0, 0.5f64.sqrt() - 0.5, 1e-15));
        assert!(close(cn_bounds(0.5).unwrap().0, 0.2071, 1e-4));
    }

    #[test]
    fn measure_vector_is_consistent() {
        let m = measure_all(&phi_plus());
        assert!(close(m.concurrence, 1.0, 1e-12));
        assert!(close(m.negativity, 1.0, 1e-12));
        assert!(close(m.eof, 1.0, 1e-12));
        assert!(m.linear_entropy.abs() < 1e-12 && m.von_neumann_entropy.abs() < 1e-12);
        assert!(close(m.chsh_b, 2.828427124746, 1e-10));
        let w = measure_all(&werner(0.6).unwrap());
        assert!(close(w.tangle, w.concurrence.powi(2), 1e-15));
        assert!(w.negativity <= w.concurrence + 1e-12);
    }
}
