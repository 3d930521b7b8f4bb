//! CSV tables and text lines written by the subcommands.

use memsfront::frontier::{sl_sv_envelope, CrossingTable, FrontierParams, FrontierPoint, Plane};
use memsfront::mcverify::SampleRecord;
use memsfront::states::EnvelopeSegment;
use memsfront::measures::MeasureVector;

/// Twelve significant digits, locale independent.
pub fn fmt_num(v: f64) -> String {
    // no negative zero in the output
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.11e}")
}

#[derive(Clone, Debug, PartialEq)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for row in &self.rows {
            s.push_str(&row.join(","));
            s.push('\n');
        }
        s
    }
}

pub fn params_field(p: &FrontierParams) -> String {
    match *p {
        FrontierParams::R { r } => format!("r={}", fmt_num(r)),
        FrontierParams::AR { a, r } => format!("a={};r={}", fmt_num(a), fmt_num(r)),
        FrontierParams::C { c } => format!("c={}", fmt_num(c)),
        FrontierParams::Uvw { u, v, w } => format!("u={};v={};w={}", fmt_num(u), fmt_num(v), fmt_num(w)),
    }
}

fn has_eof(plane: Plane) -> bool {
    matches!(plane, Plane::EfSl | Plane::EfSv)
}

pub fn frontier_table(plane: Plane, points: &[FrontierPoint]) -> CsvTable {
    let mut header = vec![plane.mixedness().name(), plane.entanglement_name()];
    if has_eof(plane) {
        header.push("eof");
    }
    header.extend(["branch", "params", "x", "y", "a", "b", "r", "residual"]);
    let mut t = CsvTable::new(header);
    for p in points {
        let mut row = vec![fmt_num(p.mixedness), fmt_num(p.entanglement)];
        if has_eof(plane) {
            row.push(fmt_num(p.eof()));
        }
        row.push(p.branch.label().to_string());
        row.push(params_field(&p.params));
        let x = p.x_params;
        row.extend([x.x, x.y, x.a, x.b, x.r, p.residual].map(fmt_num));
        t.push(row);
    }
    t
}

pub fn envelope_table(steps: usize) -> memsfront::Result<CsvTable> {
    let mut t = CsvTable::new(["segment", "r", "s_v", "s_l"]);
    for seg in EnvelopeSegment::ALL {
        let (lo, hi) = seg.range();
        for k in 0..=steps {
            let r = lo + (hi - lo) * k as f64 / steps as f64;
            let (sv, sl) = sl_sv_envelope(seg, r)?;
            t.push(vec![seg.label().to_string(), fmt_num(r), fmt_num(sv), fmt_num(sl)]);
        }
    }
    Ok(t)
}

pub fn scatter_table(records: &[SampleRecord]) -> CsvTable {
    let mut header = vec!["index", "rank", "lambda1", "lambda2", "lambda3", "lambda4"];
    header.extend(MeasureVector::NAMES);
    let mut t = CsvTable::new(header);
    for rec in records {
        let mut row = vec![rec.index.to_string(), rec.rank.to_string()];
        row.extend(rec.spectrum.values().map(fmt_num));
        row.extend(rec.measures.values().map(fmt_num));
        t.push(row);
    }
    t
}

pub fn crossing_lines(t: &CrossingTable) -> Vec<String> {
    let e = |v: f64| format!("{v:.3e}");
    let f = |v: f64| format!("{v:.6}");
    let p = &t.er_sl_point;
    let q = &t.ef_sv_point;
    let s = &t.er_sv_point;
    vec![
        format!("ef_sl_branch r={} residual={}", f(t.ef_sl_branch_r.value), e(t.ef_sl_branch_r.residual)),
        format!("er_sl {} {} a={} r={} residual={}", f(p.s_l), f(p.e_r), f(p.a), f(p.r), e(p.residual)),
        format!("ef_sv {} {} residual={}", f(q.c), f(q.s_v), e(q.residual)),
        format!(
            "er_sv {} {} a={} r={} werner_r={} residual={}",
            f(s.s_v),
            f(s.e_r),
            f(s.a),
            f(s.r),
            f(s.werner_r),
            e(s.residual)
        ),
        format!(
            "sv_separability {} residual={}",
            f(t.sv_separability_threshold.value),
            e(t.sv_separability_threshold.residual)
        ),
        format!(
            "sl_separability {} residual={}",
            f(t.sl_separability_threshold.value),
            e(t.sl_separability_threshold.residual)
        ),
        format!("max_residual={}", e(t.max_residual())),
    ]
}
