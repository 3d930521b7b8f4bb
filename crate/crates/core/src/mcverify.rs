//! Monte Carlo evidence for the frontiers and property sweeps over random states.
//!
//! Every routine is a deterministic function of its seed: record `i` draws
//! from stream `i` of the seeded generator, so results do not depend on how
//! work is split across threads.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::frontier::{envelope_bounds, frontier, Plane};
use crate::matrixcore::{hermitian_eigenvalues, partial_transpose, Spectrum};
use crate::measures::{
    chsh_b, chsh_b_closed_form, closest_separable_rank3, cn_bounds, concurrence, er_rank3,
    er_werner, measure_all, negativity, negativity_x_form, pt_spectrum, relative_entropy,
    MeasureVector,
};
use crate::states::{
    bell_diagonal, from_x_params, ls_decompose_x_state, rank3_family, werner, DensityMatrix,
    StateSampler,
};

/// Default slack for dominance checks.
pub const DOMINANCE_TOL: f64 = 1e-9;
/// Eigenvalues below this count as negative in the partial-transpose checks.
pub const NEGATIVE_EIG_TOL: f64 = 1e-10;
/// Differences at or below this are ties when comparing orderings.
pub const ORDER_EPS: f64 = 1e-12;
/// How many failing cases a report keeps for display.
const KEEP_EXAMPLES: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankPolicy {
    /// Each record draws its rank uniformly from 1..=4.
    Uniform,
    Fixed(usize),
}

#[derive(Clone, Copy, Debug)]
pub struct SampleRecord {
    pub index: u64,
    pub rank: usize,
    pub spectrum: Spectrum,
    pub measures: MeasureVector,
    pub state: DensityMatrix,
}

impl SampleRecord {
    pub fn from_state(index: u64, rank: usize, state: DensityMatrix) -> Self {
        Self { index, rank, spectrum: state.spectrum(), measures: measure_all(&state), state }
    }

    /// `(mixedness, entanglement)` in a plane; `None` on the E_R planes.
    pub fn coordinates(&self, plane: Plane) -> Option<(f64, f64)> {
        let m = &self.measures;
        let mix = match plane.mixedness() {
            crate::frontier::Mixedness::Linear => m.linear_entropy,
            crate::frontier::Mixedness::VonNeumann => m.von_neumann_entropy,
        };
        match plane {
            Plane::EfSl | Plane::EfSv => Some((mix, m.concurrence)),
            Plane::NSl | Plane::NSv => Some((mix, m.negativity)),
            Plane::ErSl | Plane::ErSv => None,
        }
    }
}

fn sample_one(seed: u64, index: u64, policy: RankPolicy) -> Result<SampleRecord> {
    let mut s = StateSampler::with_stream(seed, index);
    let rank = match policy {
        RankPolicy::Uniform => s.uniform_rank(),
        RankPolicy::Fixed(k) => k,
    };
    let state = s.density(rank)?;
    Ok(SampleRecord::from_state(index, rank, state))
}

/// `n` random states with their full measure vectors, in index order.
pub fn scatter(n: usize, seed: u64, policy: RankPolicy) -> Result<Vec<SampleRecord>> {
    (0..n as u64)
        .into_par_iter()
        .map(|i| sample_one(seed, i, policy))
        .collect()
}

/// Outcome of one property sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub name: String,
    pub seed: Option<u64>,
    /// What was sampled.
    pub population: String,
    pub checked: usize,
    pub failures: usize,
    /// Largest observed deviation of the checked quantity (signed excess for dominance).
    pub max_deviation: f64,
    pub tolerance: f64,
    pub examples: Vec<String>,
}

impl CheckReport {
    fn new(name: impl Into<String>, seed: Option<u64>, population: impl Into<String>, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            seed,
            population: population.into(),
            checked: 0,
            failures: 0,
            max_deviation: f64::NEG_INFINITY,
            tolerance,
            examples: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0 && self.checked > 0
    }

    /// Records one observation whose deviation must not exceed the tolerance.
    fn observe(&mut self, deviation: f64, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if deviation > self.max_deviation || deviation.is_nan() {
            self.max_deviation = deviation;
        }
        if !(deviation <= self.tolerance) {
            self.failures += 1;
            if self.examples.len() < KEEP_EXAMPLES {
                self.examples.push(describe());
            }
        }
    }

    /// Associative merge of two partial reports of the same check.
    fn merge(mut self, other: Self) -> Self {
        self.checked += other.checked;
        self.failures += other.failures;
        if other.max_deviation > self.max_deviation || other.max_deviation.is_nan() {
            self.max_deviation = other.max_deviation;
        }
        for e in other.examples {
            if self.examples.len() < KEEP_EXAMPLES {
                self.examples.push(e);
            }
        }
        self
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} seed={} population=\"{}\" checked={} failures={} max_deviation={:e} tol={:e}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.seed.map_or("-".to_string(), |s| s.to_string()),
            self.population,
            self.checked,
            self.failures,
            self.max_deviation,
            self.tolerance,
        )?;
        for e in &self.examples {
            write!(f, "\n  {e}")?;
        }
        Ok(())
    }
}

/// Runs `check` on every item in parallel and merges the partial reports.
fn sweep<T: Sync>(
    items: &[T],
    blank: CheckReport,
    check: impl Fn(&T, &mut CheckReport) -> Result<()> + Sync,
) -> Result<CheckReport> {
    let empty = || CheckReport { checked: 0, ..blank.clone() };
    items
        .par_iter()
        .try_fold(empty, |mut rep, item| {
            check(item, &mut rep)?;
            Ok(rep)
        })
        .try_reduce(empty, |a, b| Ok(a.merge(b)))
}

fn indexed_sweep(
    n: usize,
    blank: CheckReport,
    check: impl Fn(u64, &mut CheckReport) -> Result<()> + Sync,
) -> Result<CheckReport> {
    let idx: Vec<u64> = (0..n as u64).collect();
    sweep(&idx, blank, |&i, rep| check(i, rep))
}

// ------------------------------------------------------------------ dominance

/// Flags records whose entanglement exceeds the frontier at their mixedness by more than `tol`.
///
/// General states have no closed-form E_R, so the E_R planes are rejected
/// here; see [`check_er_dominance`].
pub fn check_dominance(records: &[SampleRecord], plane: Plane, tol: f64, seed: Option<u64>) -> Result<CheckReport> {
    if records.is_empty() {
        return Err(Error::InvalidState("no records to check".into()));
    }
    if records[0].coordinates(plane).is_none() {
        return Err(Error::InvalidState(format!(
            "plane {plane} needs closed-form relative entropy; use the X-form family sweep"
        )));
    }
    let blank = CheckReport::new(format!("dominance[{plane}]"), seed, "random states", tol);
    sweep(records, blank, |rec, rep| {
        let (m, e) = rec.coordinates(plane).expect("checked above");
        let f = frontier(plane, m.clamp(0.0, 1.0))?.entanglement;
        rep.observe(e - f, || format!("record {} rank {}: mixedness {m:.12} entanglement {e:.12} frontier {f:.12}", rec.index, rec.rank));
        Ok(())
    })
}

/// E_R dominance on the states where E_R has a closed form: `n` random
/// members of the rank ≤ 3 family `rank3_family(a, r)` plus `n` random Werner states.
pub fn check_er_dominance(n: usize, seed: u64, plane: Plane, tol: f64) -> Result<CheckReport> {
    let mix = match plane {
        Plane::ErSl => |rho: &DensityMatrix| crate::measures::linear_entropy(rho),
        Plane::ErSv => |rho: &DensityMatrix| crate::measures::von_neumann_entropy(rho),
        _ => return Err(Error::InvalidState(format!("{plane} is not a relative-entropy plane"))),
    };
    let blank = CheckReport::new(
        format!("dominance[{plane}]"),
        Some(seed),
        "X-form family: rank<=3 members and Werner states",
        tol,
    );
    indexed_sweep(2 * n, blank, |i, rep| {
        let mut s = StateSampler::with_stream(seed, i);
        let (rho, e, label) = if i % 2 == 0 {
            let [t, r] = [s.unit(), s.unit()];
            let a = t * (1.0 - r);
            (rank3_family(a, r)?, er_rank3(a, r)?, format!("a={a:.12} r={r:.12}"))
        } else {
            let r = s.unit();
            (werner(r)?, er_werner(r)?, format!("werner r={r:.12}"))
        };
        let m = mix(&rho).clamp(0.0, 1.0);
        let f = frontier(plane, m)?.entanglement;
        rep.observe(e - f, || format!("{label}: mixedness {m:.12} E_R {e:.12} frontier {f:.12}"));
        Ok(())
    })
}

// ------------------------------------------------------------------- envelope

pub fn check_envelope(records: &[SampleRecord], tol: f64, seed: Option<u64>) -> Result<CheckReport> {
    let blank = CheckReport::new("envelope", seed, "random states", tol);
    sweep(records, blank, |rec, rep| {
        let (sl, sv) = (rec.measures.linear_entropy, rec.measures.von_neumann_entropy);
        let (lo, hi) = envelope_bounds(sl.clamp(0.0, 1.0))?;
        let dev = (lo - sv).max(sv - hi);
        rep.observe(dev, || format!("record {}: s_l {sl:.12} s_v {sv:.12} bounds [{lo:.12}, {hi:.12}]", rec.index));
        Ok(())
    })
}

/// `n_min(C) ≤ N ≤ C` on every record.
pub fn check_cn_bounds(records: &[SampleRecord], tol: f64, seed: Option<u64>) -> Result<CheckReport> {
    let blank = CheckReport::new("concurrence-negativity bounds", seed, "random states", tol);
    sweep(records, blank, |rec, rep| {
        let (c, n) = (rec.measures.concurrence, rec.measures.negativity);
        let (lo, hi) = cn_bounds(c)?;
        rep.observe((lo - n).max(n - hi), || format!("record {}: C {c:.12} N {n:.12}", rec.index));
        Ok(())
    })
}

// ---------------------------------------------------------- partial transpose

/// At most one partial-transpose eigenvalue below `-1e-10`, and the negativity
/// equals `2 max(0, -λ₄)` of the partial transpose.
pub fn check_pt_negative_count(records: &[SampleRecord], seed: Option<u64>) -> Result<(CheckReport, CheckReport)> {
    let count = CheckReport::new("pt-single-negative", seed, "random states", 0.0);
    let formula = CheckReport::new("negativity-from-smallest-pt-eigenvalue", seed, "random states", 1e-10);
    let reps: Vec<(CheckReport, CheckReport)> = records
        .par_iter()
        .map(|rec| {
            let (mut c, mut f) = (CheckReport { ..count.clone() }, CheckReport { ..formula.clone() });
            let pt = pt_spectrum(&rec.state);
            let negatives = pt.values().iter().filter(|&&v| v < -NEGATIVE_EIG_TOL).count();
            c.observe(negatives.saturating_sub(1) as f64, || format!("record {}: PT spectrum {:?}", rec.index, pt.values()));
            let from_min = 2.0 * (-pt.smallest()).max(0.0);
            let n = rec.measures.negativity;
            f.observe((n - from_min).abs(), || format!("record {}: N {n:e} vs {from_min:e}", rec.index));
            (c, f)
        })
        .collect();
    Ok(reps.into_iter().fold((count, formula), |(c, f), (c2, f2)| (c.merge(c2), f.merge(f2))))
}

/// Partial transpose of `Σ λᵢ |Bellᵢ⟩⟨Bellᵢ|` has spectrum `{1/2 - λᵢ}`.
pub fn check_bell_diagonal_pt(n: usize, seed: u64) -> Result<CheckReport> {
    let blank = CheckReport::new("bell-diagonal-pt-spectrum", Some(seed), "random Bell-diagonal states", 1e-10);
    indexed_sweep(n, blank, |i, rep| {
        let mut s = StateSampler::with_stream(seed, i);
        let w = s.simplex::<4>();
        let rho = bell_diagonal(w)?;
        let got = pt_spectrum(&rho).values();
        let total: f64 = w.iter().sum();
        let expect = Spectrum::new(w.map(|l| (total - 2.0 * l) / 2.0)).values();
        let dev = got.iter().zip(expect).map(|(g, e)| (g - e).abs()).fold(0.0, f64::max);
        rep.observe(dev, || format!("weights {w:?}: {got:?} vs {expect:?}"));
        Ok(())
    })
}

/// `λ_k(A + B) ≥ λ_k(A)` for positive semidefinite `A`, `B`.
pub fn check_weyl_monotonicity(n: usize, seed: u64) -> Result<CheckReport> {
    let blank = CheckReport::new("eigenvalue-monotonicity", Some(seed), "pairs of random PSD matrices", 1e-10);
    indexed_sweep(n, blank, |i, rep| {
        let mut s = StateSampler::with_stream(seed, i);
        let (ra, rb) = (s.uniform_rank(), s.uniform_rank());
        let scale = 4.0 * s.unit();
        let a = *s.density(ra)?.matrix();
        let b = s.density(rb)?.matrix().scale(scale);
        let la = hermitian_eigenvalues(&a)?.values();
        let lab = hermitian_eigenvalues(&(a + b))?.values();
        let dev = la.iter().zip(lab).map(|(x, y)| x - y).fold(f64::NEG_INFINITY, f64::max);
        rep.observe(dev, || format!("pair {i}: {la:?} vs {lab:?}"));
        Ok(())
    })
}

// ------------------------------------------------------------------- ordering

#[derive(Clone, Debug, PartialEq)]
pub struct OrderingReport {
    pub seed: Option<u64>,
    pub pairs: u64,
    /// Pairs ordered one way by concurrence and the other way by negativity.
    pub cn_reversed: u64,
    /// Pairs ordered one way by linear entropy and the other way by von Neumann entropy.
    pub sl_sv_reversed: u64,
    pub cn_example: Option<(u64, u64)>,
    pub sl_sv_example: Option<(u64, u64)>,
}

impl OrderingReport {
    /// Both kinds of reversal exist.
    pub fn passed(&self) -> bool {
        self.cn_reversed > 0 && self.sl_sv_reversed > 0
    }
}

impl fmt::Display for OrderingReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ordering seed={} pairs={} cn_reversed={} sl_sv_reversed={}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.seed.map_or("-".to_string(), |s| s.to_string()),
            self.pairs,
            self.cn_reversed,
            self.sl_sv_reversed
        )?;
        if let Some((i, j)) = self.cn_example {
            write!(f, " cn_example=({i},{j})")?;
        }
        if let Some((i, j)) = self.sl_sv_example {
            write!(f, " sl_sv_example=({i},{j})")?;
        }
        Ok(())
    }
}

/// Reversed when both differences exceed `ORDER_EPS` in magnitude and have opposite signs.
pub fn reversed(d1: f64, d2: f64) -> bool {
    d1.abs() > ORDER_EPS && d2.abs() > ORDER_EPS && d1 * d2 < 0.0
}

pub fn check_ordering_violations(records: &[SampleRecord], seed: Option<u64>) -> Result<OrderingReport> {
    if records.len() < 2 {
        return Err(Error::InvalidState("ordering check needs at least two records".into()));
    }
    let per_row: Vec<OrderingReport> = (0..records.len())
        .into_par_iter()
        .map(|i| {
            let mut rep = OrderingReport { seed, pairs: 0, cn_reversed: 0, sl_sv_reversed: 0, cn_example: None, sl_sv_example: None };
            let a = &records[i].measures;
            for rec in &records[i + 1..] {
                let b = &rec.measures;
                rep.pairs += 1;
                if reversed(a.concurrence - b.concurrence, a.negativity - b.negativity) {
                    rep.cn_reversed += 1;
                    rep.cn_example.get_or_insert((records[i].index, rec.index));
                }
                if reversed(a.linear_entropy - b.linear_entropy, a.von_neumann_entropy - b.von_neumann_entropy) {
                    rep.sl_sv_reversed += 1;
                    rep.sl_sv_example.get_or_insert((records[i].index, rec.index));
                }
            }
            rep
        })
        .collect();
    let mut out = OrderingReport { seed, pairs: 0, cn_reversed: 0, sl_sv_reversed: 0, cn_example: None, sl_sv_example: None };
    for r in per_row {
        out.pairs += r.pairs;
        out.cn_reversed += r.cn_reversed;
        out.sl_sv_reversed += r.sl_sv_reversed;
        out.cn_example = out.cn_example.or(r.cn_example);
        out.sl_sv_example = out.sl_sv_example.or(r.sl_sv_example);
    }
    Ok(out)
}

// ----------------------------------------------------------------- identities

/// On random X-form states: `1 - λ` of the decomposition equals the numerically
/// computed concurrence, `C = max(0, r - 2√(ab))`, the parts recombine, and the
/// separable part has a positive semidefinite partial transpose.
pub fn check_ls_identity(n: usize, seed: u64) -> Result<CheckReport> {
    let blank = CheckReport::new("ls-weight-equals-concurrence", Some(seed), "random X-form states", 1e-10);
    indexed_sweep(n, blank, |i, rep| {
        let p = StateSampler::with_stream(seed, i).x_params();
        let rho = from_x_params(&p)?;
        let d = ls_decompose_x_state(&p)?;
        let c = concurrence(&rho);
        let weight = 1.0 - d.lambda;
        let recon = d.recombine().max_abs_diff(rho.matrix());
        let pt_min = hermitian_eigenvalues(&partial_transpose(d.separable_part.matrix()))?.smallest();
        let dev = (weight - c)
            .abs()
            .max((p.concurrence() - c).abs())
            .max(recon)
            .max(-pt_min);
        rep.observe(dev, || format!("{p:?}: 1-lambda {weight:e} C {c:e} recon {recon:e} pt_min {pt_min:e}"));
        Ok(())
    })
}

/// `C = max(0, r - 2√(ab))` against the numerical concurrence on random X-form states.
pub fn check_x_concurrence(n: usize, seed: u64) -> Result<CheckReport> {
    let blank = CheckReport::new("x-form-concurrence", Some(seed), "random X-form states", 1e-10);
    indexed_sweep(n, blank, |i, rep| {
        let p = StateSampler::with_stream(seed, i).x_params();
        let c = concurrence(&from_x_params(&p)?);
        rep.observe((p.concurrence() - c).abs(), || format!("{p:?}: {} vs {c}", p.concurrence()));
        Ok(())
    })
}

/// Closed-form X-form negativity against the partial-transpose eigenvalues.
pub fn check_x_negativity(n: usize, seed: u64) -> Result<CheckReport> {
    let blank = CheckReport::new("x-form-negativity", Some(seed), "random X-form states", 1e-10);
    indexed_sweep(n, blank, |i, rep| {
        let p = StateSampler::with_stream(seed, i).x_params();
        let eig = negativity(&from_x_params(&p)?);
        let closed = negativity_x_form(&p);
        rep.observe((eig - closed).abs(), || format!("{p:?}: {closed} vs {eig}"));
        Ok(())
    })
}

/// Closed-form E_R of `rank3_family(a, r)` against `Tr ρ log ρ - Tr ρ log σ*`
/// on a `k × k` grid with `r = j/(k-1)` and `a = t (1 - r)`, `t = i/(k-1)`.
pub fn check_er_closed_form(k: usize) -> Result<CheckReport> {
    let k = k.max(2);
    let blank = CheckReport::new("relative-entropy-closed-form", None, format!("{k}x{k} grid over a + r <= 1"), 1e-8);
    indexed_sweep(k * k, blank, |idx, rep| {
        let (i, j) = ((idx as usize) / k, (idx as usize) % k);
        let r = j as f64 / (k - 1) as f64;
        let a = i as f64 / (k - 1) as f64 * (1.0 - r);
        let closed = er_rank3(a, r)?;
        let direct = relative_entropy(&rank3_family(a, r)?, &closest_separable_rank3(a, r)?)?;
        rep.observe((closed - direct).abs(), || format!("a={a} r={r}: {closed} vs {direct}"));
        Ok(())
    })
}

/// Closed-form CHSH quantity against the maximization over measurement settings
/// on random X-form states.
pub fn check_chsh_closed_form(n: usize, seed: u64, tol: f64) -> Result<CheckReport> {
    let blank = CheckReport::new("chsh-closed-form", Some(seed), "random symmetric X-form states", tol);
    indexed_sweep(n, blank, |i, rep| {
        let mut p = StateSampler::with_stream(seed, i).x_params();
        let mean = (p.x + p.y) / 2.0;
        p.x = mean;
        p.y = mean;
        let general = chsh_b(&from_x_params(&p)?);
        let closed = chsh_b_closed_form(&p);
        rep.observe((general - closed).abs(), || format!("{p:?}: closed {closed:.9} general {general:.9}"));
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::phi_plus;

    #[test]
    fn scatter_is_deterministic() {
        let a = scatter(20, 5, RankPolicy::Uniform).unwrap();
        let b = scatter(20, 5, RankPolicy::Uniform).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.state, y.state);
            assert_eq!(x.rank, y.rank);
        }
        let pure = scatter(1, 0, RankPolicy::Fixed(1)).unwrap();
        assert!(pure[0].measures.linear_entropy < 1e-10);
        assert!(pure[0].measures.von_neumann_entropy < 1e-6);
    }

    #[test]
    fn bell_record_is_on_every_frontier() {
        let rec = SampleRecord::from_state(0, 1, phi_plus());
        for plane in [Plane::EfSl, Plane::NSl, Plane::EfSv, Plane::NSv] {
            let rep = check_dominance(&[rec], plane, DOMINANCE_TOL, None).unwrap();
            assert!(rep.passed(), "{rep}");
        }
        assert!(check_dominance(&[rec], Plane::ErSl, DOMINANCE_TOL, None).is_err());
    }

    #[test]
    fn bell_pt_has_one_negative_eigenvalue() {
        let rec = SampleRecord::from_state(0, 1, phi_plus());
        let (count, formula) = check_pt_negative_count(&[rec], None).unwrap();
        assert!(count.passed() && formula.passed());
        let pt = pt_spectrum(&phi_plus());
        assert!((pt.smallest() + 0.5).abs() < 1e-12);
        let sep = SampleRecord::from_state(1, 4, DensityMatrix::maximally_mixed());
        assert!(pt_spectrum(&sep.state).smallest() > -NEGATIVE_EIG_TOL);
    }

    #[test]
    fn werner_pairs_never_reverse_cn() {
        let recs: Vec<_> = [0.2, 0.5, 0.7, 0.95]
            .iter()
            .enumerate()
            .map(|(i, &r)| SampleRecord::from_state(i as u64, 4, werner(r).unwrap()))
            .collect();
        let rep = check_ordering_violations(&recs, None).unwrap();
        assert_eq!(rep.cn_reversed, 0);
        assert_eq!(rep.pairs, 6);
    }

    #[test]
    fn reports_merge_associatively() {
        let mut a = CheckReport::new("t", None, "p", 1.0);
        a.observe(0.5, String::new);
        let mut b = CheckReport::new("t", None, "p", 1.0);
        b.observe(2.0, || "bad".into());
        let mut c = CheckReport::new("t", None, "p", 1.0);
        c.observe(0.1, String::new);
        let left = a.clone().merge(b.clone()).merge(c.clone());
        let right = a.merge(b.merge(c));
        assert_eq!(left, right);
        assert_eq!(left.failures, 1);
        assert!(!left.passed());
    }

    #[test]
    fn small_identity_sweeps() {
        assert!(check_ls_identity(200, 1).unwrap().passed());
        assert!(check_x_negativity(200, 1).unwrap().passed());
        assert!(check_bell_diagonal_pt(200, 1).unwrap().passed());
        assert!(check_weyl_monotonicity(200, 1).unwrap().passed());
        assert!(check_er_closed_form(8).unwrap().passed());
    }
}
