//! Entanglement-versus-mixedness frontiers.
//!
//! Each plane builds the stationary candidate families that are valid at the
//! requested mixedness and keeps the one with the most entanglement. Crossing
//! constants are derived by solving for where two candidates meet, never
//! tabulated.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{check_range, Error, Result};
use crate::matrixcore::Spectrum;
use crate::measures::{
    eof_from_concurrence, er_rank3, er_werner, linear_entropy_of_spectrum, negativity_x_form,
    von_neumann_entropy_of_spectrum,
};
use crate::roots::{find_root, scan_brackets, RootError};
use crate::states::{
    bell_diagonal_rank2, entropy_plane_spectrum, mems_ef_sl, mems_ef_sv, werner, EfSvBranch, from_x_params, DensityMatrix, EnvelopeSegment, XStateParams,
};

/// Absolute tolerance for every 1-D root solve.
pub const XTOL: f64 = 1e-14;
/// Required residual for solved frontier points and crossings.
pub const RESIDUAL_TOL: f64 = 1e-9;
/// Keep the inner stationarity brackets this far from singular endpoints.
const EDGE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Plane {
    EfSl,
    ErSl,
    NSl,
    EfSv,
    ErSv,
    NSv,
}

impl Plane {
    pub const ALL: [Plane; 6] = [
        Plane::EfSl,
        Plane::ErSl,
        Plane::NSl,
        Plane::EfSv,
        Plane::ErSv,
        Plane::NSv,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Plane::EfSl => "ef-sl",
            Plane::ErSl => "er-sl",
            Plane::NSl => "n-sl",
            Plane::EfSv => "ef-sv",
            Plane::ErSv => "er-sv",
            Plane::NSv => "n-sv",
        }
    }

    pub fn mixedness(self) -> Mixedness {
        match self {
            Plane::EfSl | Plane::ErSl | Plane::NSl => Mixedness::Linear,
            Plane::EfSv | Plane::ErSv | Plane::NSv => Mixedness::VonNeumann,
        }
    }

    /// Name of the reported entanglement value. The E_F planes report concurrence.
    pub fn entanglement_name(self) -> &'static str {
        match self {
            Plane::EfSl | Plane::EfSv => "concurrence",
            Plane::ErSl | Plane::ErSv => "relative_entropy",
            Plane::NSl | Plane::NSv => "negativity",
        }
    }
}

impl fmt::Display for Plane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownPlane(pub String);

impl fmt::Display for UnknownPlane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "unknown plane '{}' (expected one of ef-sl, er-sl, n-sl, ef-sv, er-sv, n-sv)",
            self.0
        )
    }
}

impl std::error::Error for UnknownPlane {}

impl FromStr for Plane {
    type Err = UnknownPlane;

    /// Accepts `ef-sl`, `ef_sl`, `EF_SL` and so on.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let norm = s.trim().to_ascii_lowercase().replace('_', "-");
        Plane::ALL
            .into_iter()
            .find(|p| p.label() == norm)
            .ok_or_else(|| UnknownPlane(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mixedness {
    Linear,
    VonNeumann,
}

impl Mixedness {
    pub fn of_spectrum(self, s: &Spectrum) -> f64 {
        match self {
            Mixedness::Linear => linear_entropy_of_spectrum(s),
            Mixedness::VonNeumann => von_neumann_entropy_of_spectrum(s),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Mixedness::Linear => "s_l",
            Mixedness::VonNeumann => "s_v",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    Rank2,
    Rank3,
    Werner,
    Family1,
    Family2,
    Rank4,
    /// No entangled candidate exists; the point is the Werner state at this mixedness.
    Separable,
}

impl Branch {
    pub fn label(self) -> &'static str {
        match self {
            Branch::Rank2 => "RANK2",
            Branch::Rank3 => "RANK3",
            Branch::Werner => "WERNER",
            Branch::Family1 => "FAMILY1",
            Branch::Family2 => "FAMILY2",
            Branch::Rank4 => "RANK4",
            Branch::Separable => "SEPARABLE",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// The solved family parameters of a frontier point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FrontierParams {
    /// One-parameter family coefficient `r`.
    R { r: f64 },
    /// `rank3_family(a, r)`.
    AR { a: f64, r: f64 },
    /// Concurrence-parametrized family.
    C { c: f64 },
    /// Rank-4 stationary ratios `u = √(a/(x+r))`, `v = √(x/(x+r))`, `w = √(b/(x+r))`.
    Uvw { u: f64, v: f64, w: f64 },
}

impl fmt::Display for FrontierParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FrontierParams::R { r } => write!(f, "r={r:.12}"),
            FrontierParams::AR { a, r } => write!(f, "a={a:.12} r={r:.12}"),
            FrontierParams::C { c } => write!(f, "c={c:.12}"),
            FrontierParams::Uvw { u, v, w } => write!(f, "u={u:.12} v={v:.12} w={w:.12}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrontierPoint {
    pub plane: Plane,
    pub mixedness: f64,
    /// Concurrence on the E_F planes, E_R or negativity otherwise.
    pub entanglement: f64,
    pub branch: Branch,
    pub params: FrontierParams,
    /// X-form parameters of the frontier state.
    pub x_params: XStateParams,
    /// Largest residual of the equations solved for this point.
    pub residual: f64,
}

impl FrontierPoint {
    pub fn state(&self) -> DensityMatrix {
        from_x_params(&self.x_params).expect("frontier parameters are valid")
    }

    /// Entanglement of formation; only meaningful on the E_F planes.
    pub fn eof(&self) -> f64 {
        eof_from_concurrence(self.entanglement)
    }
}

fn solver_err(context: &'static str) -> impl FnOnce(RootError) -> Error {
    move |source| Error::Solver { context, source }
}

fn spectrum_sv(values: [f64; 4]) -> f64 {
    von_neumann_entropy_of_spectrum(&Spectrum::new(values))
}

fn x_entropies(p: &XStateParams, m: Mixedness) -> f64 {
    let XStateParams { x, y, a, b, r } = *p;
    // corner block [[x+r/2, r/2], [r/2, y+r/2]]
    let mean = (x + y) / 2.0 + r / 2.0;
    let half = (((x - y) / 2.0).powi(2) + r * r / 4.0).sqrt();
    m.of_spectrum(&Spectrum::new([mean + half, mean - half, a, b]))
}

// ------------------------------------------------------------------- families

fn werner_params(r: f64) -> XStateParams {
    let q = (1.0 - r) / 4.0;
    XStateParams { x: q, y: q, a: q, b: q, r }
}

fn rank2_params(r: f64) -> XStateParams {
    XStateParams { x: 0.0, y: 0.0, a: 1.0 - r, b: 0.0, r }
}

fn mems_rank3_params(r: f64) -> XStateParams {
    let x = (1.0 / 3.0 - r / 2.0).max(0.0);
    XStateParams { x, y: x, a: 1.0 / 3.0, b: 0.0, r }
}

fn rank3_family_params(a: f64, r: f64) -> XStateParams {
    let x = ((1.0 - a - r) / 2.0).max(0.0);
    XStateParams { x, y: x, a, b: 0.0, r }
}

fn family2_params(r: f64) -> XStateParams {
    let q = (3.0 * r * r + 1.0).sqrt();
    let x = ((1.0 + q) / 6.0 - r / 2.0).max(0.0);
    XStateParams { x, y: x, a: ((4.0 - 2.0 * q) / 6.0).max(0.0), b: 0.0, r }
}

fn rho_i_params(c: f64) -> XStateParams {
    let s = (4.0 - 3.0 * c * c).sqrt();
    let x = ((4.0 - 3.0 * c - s) / 6.0).max(0.0);
    XStateParams { x, y: x, a: (s - 1.0) / 3.0, b: 0.0, r: c }
}

pub fn werner_sl(r: f64) -> f64 {
    1.0 - r * r
}

pub fn werner_sv(r: f64) -> f64 {
    let m = (1.0 - r) / 4.0;
    spectrum_sv([(1.0 + 3.0 * r) / 4.0, m, m, m])
}

pub fn werner_negativity(r: f64) -> f64 {
    ((3.0 * r - 1.0) / 2.0).max(0.0)
}

/// Werner parameter with linear entropy `s_l`.
pub fn werner_r_for_sl(s_l: f64) -> f64 {
    (1.0 - s_l).max(0.0).sqrt()
}

/// Werner parameter with von Neumann entropy `s_v`; `S_V` is strictly decreasing in `r`.
pub fn werner_r_for_sv(s_v: f64) -> Result<(f64, f64)> {
    if s_v <= 0.0 {
        return Ok((1.0, 0.0));
    }
    if s_v >= 1.0 {
        return Ok((0.0, 0.0));
    }
    let root = find_root(|r| werner_sv(r) - s_v, 0.0, 1.0, XTOL)
        .map_err(solver_err("Werner von Neumann entropy inversion"))?;
    Ok((root.x, root.residual))
}

/// Stationary `a(r)` of E_R at fixed S_L on `rank3_family(a, r)`; may violate `a + r ≤ 1`.
pub fn er_sl_stationarity(a: f64, r: f64) -> f64 {
    let s = 1.0 + a;
    r * ((s * s - r * r) / (s * s)).ln() - (3.0 * a - 1.0) * ((s + r) / (s - r)).ln()
}

pub fn er_sl_stationary_a(r: f64) -> Result<f64> {
    find_root(|a| er_sl_stationarity(a, r), 0.0, 1.0, XTOL)
        .map(|root| root.x)
        .map_err(solver_err("E_R/S_L stationarity in a"))
}

/// Stationary `a(r)` of E_R at fixed S_V on `rank3_family(a, r)`, with `a ∈ (0, 1-r)`.
pub fn er_sv_stationarity(a: f64, r: f64) -> f64 {
    let (p, m) = (1.0 + a, 1.0 - a);
    ((p * p - r * r) / (p * p)).ln() * ((m - r) / (m + r)).ln()
        - ((p + r) / (p - r)).ln() * ((m * m - r * r) / (4.0 * a * a)).ln()
}

pub fn er_sv_stationary_a(r: f64) -> Result<f64> {
    let hi = (1.0 - r) * (1.0 - EDGE);
    let lo = EDGE.min(hi / 2.0);
    let f = |a| er_sv_stationarity(a, r);
    let root = match find_root(f, lo, hi, XTOL) {
        Ok(root) => root,
        Err(RootError::NoBracket { .. }) => {
            let br = scan_brackets(f, lo, hi, 2000);
            let &(l, h) = br.first().ok_or(Error::Solver {
                context: "E_R/S_V stationarity in a",
                source: RootError::NoBracket { lo, hi, f_lo: f(lo), f_hi: f(hi) },
            })?;
            find_root(f, l, h, XTOL).map_err(solver_err("E_R/S_V stationarity in a"))?
        }
        Err(e) => return Err(solver_err("E_R/S_V stationarity in a")(e)),
    };
    Ok(root.x)
}

pub fn rank3_sl(a: f64, r: f64) -> f64 {
    2.0 / 3.0 * (1.0 + 2.0 * a - 3.0 * a * a - r * r)
}

pub fn rank3_sv(a: f64, r: f64) -> f64 {
    spectrum_sv([(1.0 - a + r) / 2.0, a, (1.0 - a - r) / 2.0, 0.0])
}

pub fn rho_i_sv(c: f64) -> f64 {
    x_entropies(&rho_i_params(c), Mixedness::VonNeumann)
}

pub fn rho_ii_sv(c: f64) -> f64 {
    werner_sv((1.0 + 2.0 * c) / 3.0)
}

fn family2_sl(r: f64) -> f64 {
    x_entropies(&family2_params(r), Mixedness::Linear)
}

fn rank2_sv(r: f64) -> f64 {
    spectrum_sv([r, 1.0 - r, 0.0, 0.0])
}

// ------------------------------------------------------------------ candidates

fn point(plane: Plane, mixedness: f64, entanglement: f64, branch: Branch, params: FrontierParams, x_params: XStateParams, residual: f64) -> FrontierPoint {
    FrontierPoint { plane, mixedness, entanglement, branch, params, x_params, residual }
}

/// Solves `g(t) = target` on `[lo, hi]`; `None` when the target is outside the range.
fn invert(g: impl Fn(f64) -> f64, target: f64, lo: f64, hi: f64, context: &'static str) -> Result<Option<(f64, f64)>> {
    let (glo, ghi) = (g(lo) - target, g(hi) - target);
    if glo.abs() <= RESIDUAL_TOL * 1e-3 {
        return Ok(Some((lo, glo.abs())));
    }
    if ghi.abs() <= RESIDUAL_TOL * 1e-3 {
        return Ok(Some((hi, ghi.abs())));
    }
    if glo.signum() == ghi.signum() {
        return Ok(None);
    }
    let root = find_root(|t| g(t) - target, lo, hi, XTOL).map_err(solver_err(context))?;
    Ok(Some((root.x, root.residual)))
}

/// The Werner state at mixedness `m`, labelled with `branch`.
fn werner_candidate(plane: Plane, m: f64, branch: Branch) -> Result<FrontierPoint> {
    let (r, res) = match plane.mixedness() {
        Mixedness::Linear => (werner_r_for_sl(m), 0.0),
        Mixedness::VonNeumann => werner_r_for_sv(m)?,
    };
    let e = match plane {
        Plane::EfSl | Plane::EfSv | Plane::NSl | Plane::NSv => werner_negativity(r),
        Plane::ErSl | Plane::ErSv => er_werner(r)?,
    };
    Ok(point(plane, m, e, branch, FrontierParams::R { r }, werner_params(r), res))
}

fn ef_sl_candidates(s: f64) -> Result<Vec<FrontierPoint>> {
    let plane = Plane::EfSl;
    let mut out = Vec::new();
    // rank 2: S_L = (8/3) r (1-r), r ∈ [1/2, 1]
    if s <= 2.0 / 3.0 {
        let r = (1.0 + (1.0 - 1.5 * s).max(0.0).sqrt()) / 2.0;
        let res = ((8.0 / 3.0) * r * (1.0 - r) - s).abs();
        out.push(point(plane, s, r, Branch::Rank2, FrontierParams::R { r }, rank2_params(r), res));
    }
    // rank 3: S_L = 8/9 - (2/3) r², r ∈ [0, 2/3]
    if (16.0 / 27.0..=8.0 / 9.0).contains(&s) {
        let r = (1.5 * (8.0 / 9.0 - s)).max(0.0).sqrt().min(2.0 / 3.0);
        let res = (8.0 / 9.0 - 2.0 / 3.0 * r * r - s).abs();
        out.push(point(plane, s, r, Branch::Rank3, FrontierParams::R { r }, mems_rank3_params(r), res));
    }
    out.push(werner_candidate(plane, s, Branch::Werner)?);
    Ok(out)
}

fn er_sl_rank3(s: f64) -> Result<Option<FrontierPoint>> {
    let lo = 1e-9;
    let hi = 1.0 - 1e-9;
    let g = |r: f64| match er_sl_stationary_a(r) {
        Ok(a) => rank3_sl(a, r),
        Err(_) => f64::NAN,
    };
    let Some((r, _)) = invert(g, s, lo, hi, "E_R/S_L rank-3 branch in r")? else {
        return Ok(None);
    };
    let a = er_sl_stationary_a(r)?;
    if a + r > 1.0 + 1e-12 {
        // outside the physical region; the rank-2 branch applies instead
        return Ok(None);
    }
    let residual = er_sl_stationarity(a, r).abs().max((rank3_sl(a, r) - s).abs());
    let a = a.min(1.0 - r);
    Ok(Some(point(
        Plane::ErSl,
        s,
        er_rank3(a, r)?,
        Branch::Rank3,
        FrontierParams::AR { a, r },
        rank3_family_params(a, r),
        residual,
    )))
}

fn er_sl_candidates(s: f64) -> Result<Vec<FrontierPoint>> {
    let plane = Plane::ErSl;
    let mut out = Vec::new();
    if s <= 2.0 / 3.0 {
        let r = (1.0 + (1.0 - 1.5 * s).max(0.0).sqrt()) / 2.0;
        let res = (rank3_sl(1.0 - r, r) - s).abs();
        out.push(point(
            plane,
            s,
            er_rank3(1.0 - r, r)?,
            Branch::Rank2,
            FrontierParams::AR { a: 1.0 - r, r },
            rank2_params(r),
            res,
        ));
    }
    if s < 8.0 / 9.0 {
        out.extend(er_sl_rank3(s)?);
    }
    out.push(werner_candidate(plane, s, Branch::Werner)?);
    Ok(out)
}

fn n_sl_candidates(s: f64) -> Result<Vec<FrontierPoint>> {
    let plane = Plane::NSl;
    let mut out = vec![werner_candidate(plane, s, Branch::Family1)?];
    if s <= 8.0 / 9.0 {
        if let Some((r, res)) = invert(family2_sl, s, 0.0, 1.0, "negativity family-2 inversion")? {
            let p = family2_params(r);
            let n = (p.a * p.a + r * r).sqrt() - p.a;
            out.push(point(plane, s, n.max(0.0), Branch::Family2, FrontierParams::R { r }, p, res));
        }
    }
    Ok(out)
}

fn ef_sv_candidates(s: f64, with_comparison: bool) -> Result<Vec<FrontierPoint>> {
    let plane = Plane::EfSv;
    let mut out = Vec::new();
    if s <= 0.5 {
        if let Some((r, res)) = invert(rank2_sv, s, 0.5, 1.0, "rank-2 von Neumann entropy inversion")? {
            out.push(point(plane, s, r, Branch::Rank2, FrontierParams::R { r }, rank2_params(r), res));
        }
    }
    if let Some((c, res)) = invert(rho_i_sv, s, 0.0, 1.0, "rank-3 concurrence inversion")? {
        out.push(point(plane, s, c, Branch::Rank3, FrontierParams::C { c }, rho_i_params(c), res));
    }
    if let Some((c, res)) = invert(rho_ii_sv, s, 0.0, 1.0, "Werner concurrence inversion")? {
        out.push(point(plane, s, c, Branch::Werner, FrontierParams::C { c }, werner_params((1.0 + 2.0 * c) / 3.0), res));
    }
    if with_comparison {
        out.extend(rank4_candidate_ef_sv(s)?);
    }
    Ok(out)
}

fn er_sv_rank3(s: f64) -> Result<Option<FrontierPoint>> {
    let g = |r: f64| match er_sv_stationary_a(r) {
        Ok(a) => rank3_sv(a, r),
        Err(_) => f64::NAN,
    };
    let Some((r, _)) = invert(g, s, 1e-9, 1.0 - 1e-9, "E_R/S_V rank-3 branch in r")? else {
        return Ok(None);
    };
    let a = er_sv_stationary_a(r)?;
    let residual = er_sv_stationarity(a, r).abs().max((rank3_sv(a, r) - s).abs());
    Ok(Some(point(
        Plane::ErSv,
        s,
        er_rank3(a, r)?,
        Branch::Rank3,
        FrontierParams::AR { a, r },
        rank3_family_params(a, r),
        residual,
    )))
}

fn er_sv_candidates(s: f64) -> Result<Vec<FrontierPoint>> {
    let plane = Plane::ErSv;
    let mut out = Vec::new();
    if s <= 0.5 {
        if let Some((r, res)) = invert(rank2_sv, s, 0.5, 1.0, "rank-2 von Neumann entropy inversion")? {
            out.push(point(
                plane,
                s,
                er_rank3(1.0 - r, r)?,
                Branch::Rank2,
                FrontierParams::AR { a: 1.0 - r, r },
                rank2_params(r),
                res,
            ));
        }
    }
    if s < 3f64.ln() / 4f64.ln() {
        out.extend(er_sv_rank3(s)?);
    }
    out.push(werner_candidate(plane, s, Branch::Werner)?);
    Ok(out)
}

fn n_sv_candidates(s: f64, with_comparison: bool) -> Result<Vec<FrontierPoint>> {
    let plane = Plane::NSv;
    let mut out = vec![werner_candidate(plane, s, Branch::Werner)?];
    // the rank-2 stationary solution, a non-maximal comparison curve
    if with_comparison && s <= 0.5 {
        if let Some((r, res)) = invert(rank2_sv, s, 0.5, 1.0, "rank-2 von Neumann entropy inversion")? {
            let p = rank2_params(r);
            out.push(point(plane, s, negativity_x_form(&p), Branch::Rank2, FrontierParams::R { r }, p, res));
        }
    }
    Ok(out)
}

/// Every stationary candidate valid at mixedness `m`, including non-maximal ones.
pub fn candidates(plane: Plane, m: f64) -> Result<Vec<FrontierPoint>> {
    candidates_with(plane, m, true)
}

fn candidates_with(plane: Plane, m: f64, with_comparison: bool) -> Result<Vec<FrontierPoint>> {
    check_range(plane.mixedness().name(), m, 0.0, 1.0, "[0, 1]")?;
    match plane {
        Plane::EfSl => ef_sl_candidates(m),
        Plane::ErSl => er_sl_candidates(m),
        Plane::NSl => n_sl_candidates(m),
        Plane::EfSv => ef_sv_candidates(m, with_comparison),
        Plane::ErSv => er_sv_candidates(m),
        Plane::NSv => n_sv_candidates(m, with_comparison),
    }
}

/// Branches that may form the frontier. The Werner states are stationary
/// for E_R at fixed S_L but never maximal there, and the transcendental
/// rank-4 E_F solution is never maximal either.
fn selectable(plane: Plane, b: Branch) -> bool {
    !matches!((plane, b), (Plane::ErSl, Branch::Werner) | (_, Branch::Rank4))
}

/// The frontier point at mixedness `m`: the selectable candidate with the
/// most entanglement (earlier candidates win ties).
pub fn frontier(plane: Plane, m: f64) -> Result<FrontierPoint> {
    let cands = candidates_with(plane, m, false)?;
    let mut best: Option<FrontierPoint> = None;
    for c in cands.into_iter().filter(|c| selectable(plane, c.branch)) {
        if best.is_none_or(|b| c.entanglement > b.entanglement) {
            best = Some(c);
        }
    }
    match best {
        Some(p) if p.entanglement > 0.0 => Ok(p),
        _ => {
            let mut p = werner_candidate(plane, m, Branch::Separable)?;
            p.entanglement = 0.0;
            Ok(p)
        }
    }
}

pub fn ef_sl_frontier(s_l: f64) -> Result<FrontierPoint> {
    frontier(Plane::EfSl, s_l)
}

pub fn er_sl_frontier(s_l: f64) -> Result<FrontierPoint> {
    frontier(Plane::ErSl, s_l)
}

pub fn n_sl_frontier(s_l: f64) -> Result<FrontierPoint> {
    frontier(Plane::NSl, s_l)
}

pub fn ef_sv_frontier(s_v: f64) -> Result<FrontierPoint> {
    frontier(Plane::EfSv, s_v)
}

pub fn er_sv_frontier(s_v: f64) -> Result<FrontierPoint> {
    frontier(Plane::ErSv, s_v)
}

pub fn n_sv_frontier(s_v: f64) -> Result<FrontierPoint> {
    frontier(Plane::NSv, s_v)
}

/// The frontier on the uniform grid `k/steps`, `k = 0..=steps`, ascending.
pub fn frontier_curve(plane: Plane, steps: usize) -> Result<Vec<FrontierPoint>> {
    let steps = steps.max(1);
    (0..=steps)
        .into_par_iter()
        .map(|k| frontier(plane, k as f64 / steps as f64))
        .collect()
}

// ---------------------------------------------------------- rank-4 candidate

/// The other root `w ∈ (1/e, 1)` of `w ln w = u ln u` for `u ∈ (0, 1/e)`.
fn partner_root(u: f64) -> Result<f64> {
    let target = u * u.ln();
    let lo = (-1.0f64).exp();
    find_root(|w| w * w.ln() - target, lo, 1.0, XTOL)
        .map(|r| r.x)
        .map_err(solver_err("partner root of z log z"))
}

/// X-form parameters, `(v, w)` and stationarity residuals for the transcendental
/// rank-4 stationary point labelled by `u ∈ (0, 1/e)`.
pub fn rank4_ef_sv_state(u: f64) -> Result<(XStateParams, f64, f64, f64)> {
    check_range("u", u, 0.0, (-1.0f64).exp(), "(0, 1/e)")?;
    let w = partner_root(u)?;
    let v = (2.0 * u * u.ln() / (u + w)).exp();
    let s = 1.0 / (1.0 + u * u + v * v + w * w);
    let x = v * v * s;
    let p = XStateParams { x, y: x, a: u * u * s, b: w * w * s, r: s - x };
    let res1 = (u * u.ln() - w * w.ln()).abs();
    let res2 = (2.0 * u * u.ln() - (u + w) * v.ln()).abs();
    Ok((p, v, w, res1.max(res2)))
}

/// The non-Werner rank-4 stationary point of C at fixed S_V, if one exists at `s_v`.
///
/// As `u` runs over `(0, 1/e)` the family links a separable rank-3 state to a
/// Werner state; outside that range of S_V there is no such point.
pub fn rank4_candidate_ef_sv(s_v: f64) -> Result<Option<FrontierPoint>> {
    let lo = 1e-6;
    let hi = (-1.0f64).exp() - 1e-9;
    let sv = |u: f64| match rank4_ef_sv_state(u) {
        Ok((p, ..)) => x_entropies(&p, Mixedness::VonNeumann),
        Err(_) => f64::NAN,
    };
    let f = |u: f64| sv(u) - s_v;
    let Some(&(l, h)) = scan_brackets(f, lo, hi, 64).first() else {
        return Ok(None);
    };
    let root = find_root(f, l, h, XTOL).map_err(solver_err("rank-4 candidate in u"))?;
    let u = root.x;
    let (p, v, w, stat) = rank4_ef_sv_state(u)?;
    let c = p.concurrence();
    Ok(Some(point(
        Plane::EfSv,
        s_v,
        c,
        Branch::Rank4,
        FrontierParams::Uvw { u, v, w },
        p,
        stat.max(root.residual),
    )))
}

// -------------------------------------------------------------------- envelope

/// `(S_V, S_L)` of the envelope spectrum of `segment` at `r`.
pub fn sl_sv_envelope(segment: EnvelopeSegment, r: f64) -> Result<(f64, f64)> {
    let s = entropy_plane_spectrum(segment, r)?;
    Ok((von_neumann_entropy_of_spectrum(&s), linear_entropy_of_spectrum(&s)))
}

/// Lower and upper von Neumann entropy over all states with linear entropy `s_l`.
///
/// The upper bound is segment (a); the lower bound is (b) on `[0, 2/3]`,
/// (c) on `[2/3, 8/9]` and (d) on `[8/9, 1]`.
pub fn envelope_bounds(s_l: f64) -> Result<(f64, f64)> {
    check_range("s_l", s_l, 0.0, 1.0, "[0, 1]")?;
    let purity = 1.0 - 0.75 * s_l;
    let upper = sl_sv_envelope(EnvelopeSegment::A, werner_r_for_sl(s_l))?.0;
    let (segment, r) = if s_l <= 2.0 / 3.0 {
        (EnvelopeSegment::B, (1.0 + (1.0 - 1.5 * s_l).max(0.0).sqrt()) / 2.0)
    } else if s_l <= 8.0 / 9.0 {
        (EnvelopeSegment::C, (1.0 - (6.0 * purity - 2.0).max(0.0).sqrt()) / 3.0)
    } else {
        (EnvelopeSegment::D, 1.0 - (12.0 * purity - 3.0).max(0.0).sqrt())
    };
    let (lo, hi) = segment.range();
    let lower = sl_sv_envelope(segment, r.clamp(lo, hi))?.0;
    Ok((lower, upper))
}

// ------------------------------------------------------------------ Bell families

/// State families compared by their CHSH quantity at fixed linear entropy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BellFamily {
    MemsEfSl,
    Werner,
    NslFamily2,
    RhoI,
    BellDiagonalRank2,
}

impl BellFamily {
    pub const ALL: [BellFamily; 5] = [
        Self::MemsEfSl,
        Self::Werner,
        Self::NslFamily2,
        Self::RhoI,
        Self::BellDiagonalRank2,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Self::MemsEfSl => "mems_ef_sl",
            Self::Werner => "werner",
            Self::NslFamily2 => "n_sl_family2",
            Self::RhoI => "rho_i",
            Self::BellDiagonalRank2 => "bell_diagonal_rank2",
        }
    }
}

/// The member of `family` with linear entropy `s_l`, or `None` if the family never reaches it.
pub fn bell_family_state(family: BellFamily, s_l: f64) -> Result<Option<DensityMatrix>> {
    check_range("s_l", s_l, 0.0, 1.0, "[0, 1]")?;
    let sl = |rho: DensityMatrix| linear_entropy_of_spectrum(&rho.spectrum());
    let solved = |f: &dyn Fn(f64) -> Result<DensityMatrix>, context| -> Result<Option<DensityMatrix>> {
        let g = |t: f64| f(t).map(sl).unwrap_or(f64::NAN);
        match invert(g, s_l, 0.0, 1.0, context)? {
            Some((t, _)) => f(t).map(Some),
            None => Ok(None),
        }
    };
    match family {
        BellFamily::MemsEfSl => solved(&mems_ef_sl, "mems_ef_sl at fixed S_L"),
        BellFamily::Werner => werner(werner_r_for_sl(s_l)).map(Some),
        BellFamily::RhoI => solved(&|c| mems_ef_sv(c, EfSvBranch::Rank3), "rho_i at fixed S_L"),
        BellFamily::BellDiagonalRank2 => {
            if s_l > 2.0 / 3.0 {
                return Ok(None);
            }
            bell_diagonal_rank2((1.0 + (1.0 - 1.5 * s_l).max(0.0).sqrt()) / 2.0).map(Some)
        }
        BellFamily::NslFamily2 => Ok(n_sl_candidates(s_l)?
            .into_iter()
            .find(|p| p.branch == Branch::Family2)
            .map(|p| p.state())),
    }
}

// ------------------------------------------------------------------ crossings

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErSlCrossing {
    pub s_l: f64,
    pub e_r: f64,
    pub a: f64,
    pub r: f64,
    pub residual: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EfSvCrossing {
    pub c: f64,
    pub s_v: f64,
    pub residual: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErSvCrossing {
    pub s_v: f64,
    pub e_r: f64,
    /// Rank-3 parameters at the crossing.
    pub a: f64,
    pub r: f64,
    pub werner_r: f64,
    pub residual: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Threshold {
    pub value: f64,
    pub residual: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CrossingTable {
    /// `r` where the two E_F/S_L branch matrices coincide.
    pub ef_sl_branch_r: Threshold,
    pub er_sl_point: ErSlCrossing,
    pub ef_sv_point: EfSvCrossing,
    pub er_sv_point: ErSvCrossing,
    pub sv_separability_threshold: Threshold,
    pub sl_separability_threshold: Threshold,
}

impl CrossingTable {
    pub fn max_residual(&self) -> f64 {
        [
            self.ef_sl_branch_r.residual,
            self.er_sl_point.residual,
            self.ef_sv_point.residual,
            self.er_sv_point.residual,
            self.sv_separability_threshold.residual,
            self.sl_separability_threshold.residual,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

fn first_root(f: impl Fn(f64) -> f64 + Copy, lo: f64, hi: f64, n: usize, context: &'static str) -> Result<(f64, f64)> {
    let &(l, h) = scan_brackets(f, lo, hi, n).first().ok_or(Error::Solver {
        context,
        source: RootError::NoBracket { lo, hi, f_lo: f(lo), f_hi: f(hi) },
    })?;
    let root = find_root(f, l, h, XTOL).map_err(solver_err(context))?;
    Ok((root.x, root.residual))
}

/// `r` where the two E_F/S_L branch matrices agree: their `|00⟩⟨00|` entries
/// `r/2` and `1/3` are the only ones that differ once the diagonals are matched.
fn ef_sl_branch_point() -> Result<Threshold> {
    // the rank-3 corner entry x + r/2 is 1/3 for every r
    let diff = |r: f64| (rank2_params(r).x + r / 2.0) - 1.0 / 3.0;
    let (r, _) = first_root(diff, 0.5, 1.0, 50, "E_F/S_L branch point")?;
    let d = from_x_params(&rank2_params(r))?
        .matrix()
        .max_abs_diff(from_x_params(&mems_rank3_params(r))?.matrix());
    Ok(Threshold { value: r, residual: d })
}

/// Where the stationary rank-3 E_R/S_L solution reaches the boundary `a + r = 1`
/// and so joins the rank-2 branch.
pub fn er_sl_crossing() -> Result<ErSlCrossing> {
    let h = |r: f64| er_sl_stationary_a(r).map(|a| a + r - 1.0).unwrap_or(f64::NAN);
    let (r, res) = first_root(h, 0.05, 1.0 - 1e-9, 200, "E_R/S_L branch crossing")?;
    let a = er_sl_stationary_a(r)?;
    let residual = res.max(er_sl_stationarity(a, r).abs());
    Ok(ErSlCrossing { s_l: rank3_sl(a, r), e_r: er_rank3(a.min(1.0 - r), r)?, a, r, residual })
}

pub fn ef_sv_crossing() -> Result<EfSvCrossing> {
    let f = |c: f64| rho_i_sv(c) - rho_ii_sv(c);
    let (c, res) = first_root(f, 1e-6, 0.99, 200, "E_F/S_V branch crossing")?;
    Ok(EfSvCrossing { c, s_v: rho_i_sv(c), residual: res })
}

pub fn er_sv_crossing() -> Result<ErSvCrossing> {
    let g = |r: f64| -> f64 {
        let Ok(a) = er_sv_stationary_a(r) else { return f64::NAN };
        let Ok((rw, _)) = werner_r_for_sv(rank3_sv(a, r)) else { return f64::NAN };
        match (er_rank3(a, r), er_werner(rw)) {
            (Ok(e3), Ok(ew)) => e3 - ew,
            _ => f64::NAN,
        }
    };
    let (r, res) = first_root(g, 0.05, 0.95, 180, "E_R/S_V branch crossing")?;
    let a = er_sv_stationary_a(r)?;
    let s_v = rank3_sv(a, r);
    let (werner_r, wres) = werner_r_for_sv(s_v)?;
    let residual = res.max(wres).max(er_sv_stationarity(a, r).abs());
    Ok(ErSvCrossing { s_v, e_r: er_rank3(a, r)?, a, r, werner_r, residual })
}

/// Werner parameter at which its concurrence `r - 2√(ab)` vanishes.
fn werner_separable_r() -> Result<(f64, f64)> {
    let c = |r: f64| werner_params(r).r - 2.0 * (werner_params(r).a * werner_params(r).b).sqrt();
    let root = find_root(c, 0.0, 1.0, XTOL).map_err(solver_err("Werner separability"))?;
    Ok((root.x, root.residual))
}

pub fn crossing_table() -> Result<CrossingTable> {
    let (rs, res) = werner_separable_r()?;
    Ok(CrossingTable {
        ef_sl_branch_r: ef_sl_branch_point()?,
        er_sl_point: er_sl_crossing()?,
        ef_sv_point: ef_sv_crossing()?,
        er_sv_point: er_sv_crossing()?,
        sv_separability_threshold: Threshold { value: werner_sv(rs), residual: res },
        sl_separability_threshold: Threshold { value: werner_sl(rs), residual: res },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{concurrence, linear_entropy, negativity, von_neumann_entropy};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn plane_parsing() {
        assert_eq!("ef-sl".parse::<Plane>().unwrap(), Plane::EfSl);
        assert_eq!("EF_SL".parse::<Plane>().unwrap(), Plane::EfSl);
        assert_eq!("n_sv".parse::<Plane>().unwrap(), Plane::NSv);
        assert!("ef-xx".parse::<Plane>().is_err());
    }

    #[test]
    fn ef_sl_examples() {
        let p = ef_sl_frontier(0.0).unwrap();
        assert!(close(p.entanglement, 1.0, 1e-12));
        let p = ef_sl_frontier(16.0 / 27.0).unwrap();
        assert!(close(p.entanglement, 2.0 / 3.0, 1e-12));
        assert!(close(concurrence(&p.state()), 2.0 / 3.0, 1e-10));
        assert!(close(linear_entropy(&p.state()), 16.0 / 27.0, 1e-12));
        let p = ef_sl_frontier(8.0 / 9.0).unwrap();
        assert!(p.entanglement.abs() < 1e-12);
        assert_eq!(ef_sl_frontier(0.95).unwrap().branch, Branch::Separable);
    }

    #[test]
    fn er_sl_examples() {
        let p = er_sl_frontier(0.0).unwrap();
        assert!(close(p.entanglement, 1.0, 1e-12));
        assert_eq!(p.branch, Branch::Rank2);
        let p = er_sl_frontier(0.7).unwrap();
        assert_eq!(p.branch, Branch::Rank3);
        assert!(p.residual < RESIDUAL_TOL);
        let p = er_sl_frontier(8.0 / 9.0 - 1e-9).unwrap();
        let FrontierParams::AR { a, r } = p.params else { panic!() };
        assert!(close(a, 1.0 / 3.0, 1e-3) && r < 1e-3, "{a} {r}");
        assert!(p.entanglement < 1e-6);
    }

    #[test]
    fn n_sl_examples() {
        assert!(close(n_sl_frontier(0.0).unwrap().entanglement, 1.0, 1e-12));
        assert!(n_sl_frontier(8.0 / 9.0).unwrap().entanglement.abs() < 1e-12);
        let p = n_sl_frontier(0.5).unwrap();
        assert!(close(p.entanglement, (3.0 * 0.5f64.sqrt() - 1.0) / 2.0, 1e-12));
        let fam2 = n_sl_candidates(0.5).unwrap().into_iter().find(|c| c.branch == Branch::Family2).unwrap();
        assert!(close(fam2.entanglement, p.entanglement, 1e-9));
        assert!(close(negativity(&fam2.state()), p.entanglement, 1e-9));
    }

    #[test]
    fn ef_sv_examples() {
        assert!(close(ef_sv_frontier(0.0).unwrap().entanglement, 1.0, 1e-12));
        let p = ef_sv_frontier(0.896).unwrap();
        assert!(p.entanglement < 1e-3);
        let p = ef_sv_frontier(0.3).unwrap();
        assert_eq!(p.branch, Branch::Rank3);
        assert!(close(von_neumann_entropy(&p.state()), 0.3, 1e-9));
        assert_eq!(ef_sv_frontier(0.8).unwrap().branch, Branch::Werner);
    }

    #[test]
    fn er_sv_examples() {
        assert!(close(er_sv_frontier(0.0).unwrap().entanglement, 1.0, 1e-9));
        assert_eq!(er_sv_frontier(0.5).unwrap().branch, Branch::Rank3);
        assert_eq!(er_sv_frontier(0.7).unwrap().branch, Branch::Werner);
    }

    #[test]
    fn n_sv_examples() {
        assert!(close(n_sv_frontier(0.0).unwrap().entanglement, 1.0, 1e-12));
        assert!(n_sv_frontier(1.0).unwrap().entanglement.abs() < 1e-12);
        assert!(n_sv_frontier(0.896).unwrap().entanglement < 1e-3);
        let sep = werner_sv(1.0 / 3.0);
        assert!(close(sep, 0.896, 1e-3));
    }

    #[test]
    fn rank4_candidate() {
        let (p, v, w, res) = rank4_ef_sv_state(0.2).unwrap();
        assert!(res < 1e-12);
        assert!(v > 0.0 && w > 0.0);
        from_x_params(&p).unwrap();
        let c = rank4_candidate_ef_sv(0.79).unwrap().expect("inside range");
        assert!(c.residual < RESIDUAL_TOL);
        assert!(c.entanglement <= ef_sv_frontier(0.79).unwrap().entanglement + 1e-12);
        assert!(rank4_candidate_ef_sv(0.1).unwrap().is_none());
        // near u = 1/e the solution degenerates to a Werner state
        let (p, ..) = rank4_ef_sv_state((-1.0f64).exp() - 1e-7).unwrap();
        assert!(close(p.a, p.b, 1e-3) && close(p.a, p.x, 1e-3));
    }

    #[test]
    fn envelope_examples() {
        let (v, l) = sl_sv_envelope(EnvelopeSegment::A, 0.0).unwrap();
        assert!(close(v, 1.0, 1e-15) && close(l, 1.0, 1e-15));
        let (v, l) = sl_sv_envelope(EnvelopeSegment::B, 1.0).unwrap();
        assert!(v.abs() < 1e-15 && l.abs() < 1e-15);
        let (v, l) = sl_sv_envelope(EnvelopeSegment::B, 0.5).unwrap();
        assert!(close(v, 0.5, 1e-15) && close(l, 2.0 / 3.0, 1e-15));
        let (lo, hi) = envelope_bounds(2.0 / 3.0).unwrap();
        assert!(close(lo, 0.5, 1e-12) && hi > lo);
        let (lo, hi) = envelope_bounds(8.0 / 9.0).unwrap();
        assert!(close(lo, 3f64.ln() / 4f64.ln(), 1e-9) && hi > lo);
    }

    #[test]
    fn crossings() {
        let t = crossing_table().unwrap();
        assert!(t.max_residual() < RESIDUAL_TOL, "{t:?}");
        assert!(close(t.ef_sl_branch_r.value, 2.0 / 3.0, 1e-12));
        assert!(close(t.er_sl_point.s_l, 0.5054, 1e-3));
        assert!(close(t.er_sl_point.e_r, 0.3422, 1e-3));
        assert!(close(t.er_sl_point.r, 0.7459, 1e-3));
        assert!(close(t.ef_sv_point.c, 0.305, 5e-3));
        assert!(close(t.ef_sv_point.s_v, 0.741, 5e-3));
        assert!(close(t.er_sv_point.s_v, 0.672, 5e-3));
        assert!(close(t.er_sv_point.e_r, 0.124, 5e-3));
        assert!(close(t.er_sv_point.werner_r, 0.6059, 1e-3));
        assert!(close(t.sl_separability_threshold.value, 8.0 / 9.0, 1e-12));
        assert!(close(t.sv_separability_threshold.value, -0.5 * (1.0f64 / 12.0).ln() / 4f64.ln(), 1e-12));
    }

    #[test]
    fn n_sv_rank2_candidate_stays_below_werner() {
        for k in 1..50 {
            let s = k as f64 / 100.0;
            let c = candidates(Plane::NSv, s).unwrap();
            let w = c.iter().find(|p| p.branch == Branch::Werner).unwrap();
            let r2 = c.iter().find(|p| p.branch == Branch::Rank2).unwrap();
            assert!(r2.entanglement < w.entanglement, "{s}");
            assert!((von_neumann_entropy_of_spectrum(&r2.state().spectrum()) - s).abs() < 1e-9);
        }
    }
}
