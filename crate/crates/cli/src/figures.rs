//! Figure datasets, assembled from the frontier, scatter and measure primitives.
//!
//! Every figure uses the same long format: `series,x,y,label`. The label carries
//! the branch of a frontier point, the rank of a sampled state, or is empty.
//!
//! | id | content |
//! |----|---------|
//! | 1  | concurrence vs negativity of random states, with the C–N bounds |
//! | 2  | S_V vs S_L of random states, with the four envelope segments |
//! | 3  | E_F and C frontiers vs S_L, Werner curves, branch point |
//! | 4  | a and r of the E_R/S_L frontier states vs S_L |
//! | 5  | E_R frontier vs S_L, Werner curve, branch point |
//! | 6  | E_F − E_R vs S_L for the E_F/S_L frontier states and Werner states |
//! | 7  | negativity frontier vs S_L, the E_F/S_L frontier states, random states |
//! | 8  | E_F and C frontiers vs S_V, rank-4 stationary candidate, branch point |
//! | 9  | E_R, S_V and a vs r along the rank-3 stationary family |
//! | 10 | E_R frontier vs S_V, branch point |
//! | 11 | negativity frontier vs S_V with every candidate family |
//! | 12 | CHSH quantity vs S_L for five state families |

use memsfront::frontier::{
    candidates, crossing_table, er_sv_stationary_a, frontier_curve, rank3_sv, rank4_candidate_ef_sv,
    sl_sv_envelope, werner_negativity, werner_r_for_sl, BellFamily, bell_family_state, FrontierPoint,
    Plane,
};
use memsfront::mcverify::{scatter, RankPolicy, SampleRecord};
use memsfront::measures::{
    chsh_b, cn_bounds, eof_from_concurrence, er_rank3, er_werner, linear_entropy, negativity_x_form,
};
use memsfront::states::{mems_ef_sl, EnvelopeSegment};
use memsfront::Result;

use crate::output::{fmt_num, CsvTable};

struct Series(CsvTable);

impl Series {
    fn new() -> Self {
        Series(CsvTable::new(["series", "x", "y", "label"]))
    }

    fn row(&mut self, series: &str, x: f64, y: f64, label: &str) {
        self.0.push(vec![series.to_string(), fmt_num(x), fmt_num(y), label.to_string()]);
    }

    fn frontier(&mut self, series: &str, points: &[FrontierPoint], y: impl Fn(&FrontierPoint) -> f64) {
        for p in points {
            self.row(series, p.mixedness, y(p), p.branch.label());
        }
    }

    fn samples(&mut self, records: &[SampleRecord], xy: impl Fn(&SampleRecord) -> (f64, f64)) {
        for rec in records {
            let (x, y) = xy(rec);
            self.row("sample", x, y, &rec.rank.to_string());
        }
    }
}

fn grid(steps: usize) -> impl Iterator<Item = f64> {
    (0..=steps).map(move |k| k as f64 / steps as f64)
}

pub fn figure(id: u8, steps: usize, n: usize, seed: u64) -> Result<CsvTable> {
    let mut s = Series::new();
    match id {
        1 => {
            let records = scatter(n, seed, RankPolicy::Uniform)?;
            s.samples(&records, |r| (r.measures.concurrence, r.measures.negativity));
            for c in grid(steps) {
                let (lo, hi) = cn_bounds(c)?;
                s.row("n_min", c, lo, "");
                s.row("n_max", c, hi, "");
            }
        }
        2 => {
            let records = scatter(n, seed, RankPolicy::Uniform)?;
            s.samples(&records, |r| (r.measures.linear_entropy, r.measures.von_neumann_entropy));
            for seg in EnvelopeSegment::ALL {
                let (lo, hi) = seg.range();
                for t in grid(steps) {
                    let (sv, sl) = sl_sv_envelope(seg, lo + (hi - lo) * t)?;
                    s.row(&format!("segment_{}", seg.label()), sl, sv, "");
                }
            }
        }
        3 => {
            let pts = frontier_curve(Plane::EfSl, steps)?;
            s.frontier("eof", &pts, |p| p.eof());
            s.frontier("concurrence", &pts, |p| p.entanglement);
            for x in grid(steps) {
                let c = werner_negativity(werner_r_for_sl(x));
                s.row("werner_eof", x, eof_from_concurrence(c), "WERNER");
                s.row("werner_concurrence", x, c, "WERNER");
            }
            let r = crossing_table()?.ef_sl_branch_r.value;
            let rho = mems_ef_sl(r)?;
            let c = memsfront::measures::concurrence(&rho);
            s.row("transition", linear_entropy(&rho), eof_from_concurrence(c), "eof");
            s.row("transition", linear_entropy(&rho), c, "concurrence");
        }
        4 => {
            let pts = frontier_curve(Plane::ErSl, steps)?;
            s.frontier("a", &pts, |p| p.x_params.a);
            s.frontier("r", &pts, |p| p.x_params.r);
            let x = crossing_table()?.er_sl_point;
            s.row("transition", x.s_l, x.a, "a");
            s.row("transition", x.s_l, x.r, "r");
        }
        5 => {
            let pts = frontier_curve(Plane::ErSl, steps)?;
            s.frontier("e_r", &pts, |p| p.entanglement);
            for x in grid(steps) {
                s.row("werner_e_r", x, er_werner(werner_r_for_sl(x))?, "WERNER");
            }
            let x = crossing_table()?.er_sl_point;
            s.row("transition", x.s_l, x.e_r, "");
        }
        6 => {
            let pts = frontier_curve(Plane::EfSl, steps)?;
            for p in &pts {
                let er = er_rank3(p.x_params.a, p.x_params.r)?;
                s.row("mems", p.mixedness, p.eof() - er, p.branch.label());
            }
            for x in grid(steps) {
                let r = werner_r_for_sl(x);
                let d = eof_from_concurrence(werner_negativity(r)) - er_werner(r)?;
                s.row("werner", x, d, "WERNER");
            }
        }
        7 => {
            let pts = frontier_curve(Plane::NSl, steps)?;
            s.frontier("negativity", &pts, |p| p.entanglement);
            let ef = frontier_curve(Plane::EfSl, steps)?;
            s.frontier("mems_ef_sl", &ef, |p| negativity_x_form(&p.x_params));
            let records = scatter(n, seed, RankPolicy::Uniform)?;
            s.samples(&records, |r| (r.measures.linear_entropy, r.measures.negativity));
        }
        8 => {
            let pts = frontier_curve(Plane::EfSv, steps)?;
            s.frontier("eof", &pts, |p| p.eof());
            s.frontier("concurrence", &pts, |p| p.entanglement);
            for x in grid(steps) {
                if let Some(p) = rank4_candidate_ef_sv(x)? {
                    s.row("rank4_candidate", x, p.entanglement, p.branch.label());
                }
            }
            let x = crossing_table()?.ef_sv_point;
            s.row("transition", x.s_v, x.c, "");
        }
        9 => {
            // the open interval: both ends are degenerate for the stationarity equation
            for k in 1..steps {
                let r = k as f64 / steps as f64;
                let a = er_sv_stationary_a(r)?;
                s.row("e_r", r, er_rank3(a, r)?, "");
                s.row("s_v", r, rank3_sv(a, r), "");
                s.row("a", r, a, "");
            }
        }
        10 => {
            let pts = frontier_curve(Plane::ErSv, steps)?;
            s.frontier("e_r", &pts, |p| p.entanglement);
            let x = crossing_table()?.er_sv_point;
            s.row("transition", x.s_v, x.e_r, "");
        }
        11 => {
            let pts = frontier_curve(Plane::NSv, steps)?;
            s.frontier("negativity", &pts, |p| p.entanglement);
            for x in grid(steps) {
                for c in candidates(Plane::NSv, x)? {
                    s.row(&format!("candidate_{}", c.branch.label().to_lowercase()), x, c.entanglement, c.branch.label());
                }
            }
        }
        12 => {
            for fam in BellFamily::ALL {
                for x in grid(steps) {
                    if let Some(rho) = bell_family_state(fam, x)? {
                        s.row(fam.label(), x, chsh_b(&rho), "");
                    }
                }
            }
        }
        _ => {
            return Err(memsfront::Error::InvalidState(format!("no figure {id}")));
        }
    }
    Ok(s.0)
}
