//! State files: either four rows of four complex literals, or a family descriptor
//! such as `family=werner r=0.5`.
//!
//! Complex literals look like `0.5`, `0.25j`, `0.1+0.2j` or `0.1 - 0.2j`. A sign
//! joins two numbers into one entry when it touches the real part or is spaced on
//! both sides; `0.5 -0.2j` is two entries.

use std::fmt;

use memsfront::states::{self, EfSvBranch};
use memsfront::{ComplexMatrix4, DensityMatrix, C64};

#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, column, message: message.into() }
}

pub fn parse_state(text: &str) -> Result<DensityMatrix, ParseError> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("")))
        .filter(|(_, l)| !l.trim().is_empty())
        .collect();
    let Some(&(first_line, first)) = lines.first() else {
        return Err(err(1, 1, "empty state file"));
    };
    if first.contains('=') {
        parse_family(&lines)
    } else {
        parse_matrix(&lines).map_err(|e| if e.line == 0 { err(first_line, 1, e.message) } else { e })
    }
}

fn parse_family(lines: &[(usize, &str)]) -> Result<DensityMatrix, ParseError> {
    let mut family: Option<(String, usize, usize)> = None;
    let mut values: Vec<(String, f64)> = Vec::new();
    for &(ln, text) in lines {
        for (col, tok) in tokens(text) {
            let Some((key, value)) = tok.split_once('=') else {
                return Err(err(ln, col, format!("expected key=value, found `{tok}`")));
            };
            if key == "family" {
                family = Some((value.to_string(), ln, col));
            } else {
                let v: f64 = value
                    .parse()
                    .map_err(|_| err(ln, col + key.len() + 1, format!("`{value}` is not a number")))?;
                values.push((key.to_string(), v));
            }
        }
    }
    let (name, ln, col) = family.ok_or_else(|| err(lines[0].0, 1, "missing family=<name>"))?;
    let get = |k: &str| {
        values
            .iter()
            .find(|(key, _)| key == k)
            .map(|(_, v)| *v)
            .ok_or_else(|| err(ln, col, format!("family `{name}` needs {k}=<value>")))
    };
    let built = match name.as_str() {
        "bell" | "phi_plus" => Ok(states::phi_plus()),
        "werner" => states::werner(get("r")?),
        "mems_rank2" => states::mems_rank2(get("r")?),
        "mems_rank3" => states::mems_rank3(get("r")?),
        "mems_ef_sl" => states::mems_ef_sl(get("r")?),
        "n_sl_rank3" => states::n_sl_rank3(get("r")?),
        "rho_i" => states::mems_ef_sv(get("r")?, EfSvBranch::Rank3),
        "rho_ii" => states::mems_ef_sv(get("r")?, EfSvBranch::Werner),
        "gisin" => states::gisin_c(get("r")?),
        "bell_diagonal_rank2" => states::bell_diagonal_rank2(get("r")?),
        "rank3_family" => states::rank3_family(get("a")?, get("r")?),
        other => return Err(err(ln, col, format!("unknown family `{other}`"))),
    };
    built.map_err(|e| err(ln, col, e.to_string()))
}

fn parse_matrix(lines: &[(usize, &str)]) -> Result<DensityMatrix, ParseError> {
    if lines.len() != 4 {
        let (ln, _) = lines.get(4).copied().unwrap_or(*lines.last().unwrap());
        return Err(err(ln, 1, format!("expected 4 matrix rows, found {}", lines.len())));
    }
    let mut m = ComplexMatrix4::zeros();
    for (i, &(ln, text)) in lines.iter().enumerate() {
        let entries = parse_row(ln, text)?;
        if entries.len() != 4 {
            let col = entries.get(4).map_or(text.len() + 1, |e| e.0);
            return Err(err(ln, col, format!("expected 4 entries, found {}", entries.len())));
        }
        for (j, (_, z)) in entries.into_iter().enumerate() {
            m[(i, j)] = z;
        }
    }
    DensityMatrix::new(m).map_err(|e| err(lines[0].0, 1, format!("not a density matrix: {e}")))
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in text.char_indices().chain(std::iter::once((text.len(), ' '))) {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s + 1, &text[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    out
}

fn parse_row(ln: usize, text: &str) -> Result<Vec<(usize, C64)>, ParseError> {
    let toks = tokens(text);
    let mut out = Vec::new();
    let mut k = 0;
    while k < toks.len() {
        let (col, tok) = toks[k];
        // `re+imj` written without spaces
        if let Some(z) = split_joined(tok) {
            out.push((col, z.map_err(|m| err(ln, col, m))?));
            k += 1;
            continue;
        }
        let mut z = number(tok).map_err(|m| err(ln, col, m))?;
        // `re + imj` with the sign spaced on both sides
        let spaced_sign = matches!(toks.get(k + 1), Some(&(_, "+" | "-")));
        if !tok.ends_with('j') && spaced_sign && k + 2 < toks.len() {
            let sign = toks[k + 1].1;
            let (icol, itok) = toks[k + 2];
            if !itok.ends_with('j') {
                return Err(err(ln, icol, format!("expected imaginary part ending in `j`, found `{itok}`")));
            }
            let im = number(itok).map_err(|m| err(ln, icol, m))?.im;
            z.im = if sign == "-" { -im } else { im };
            out.push((col, z));
            k += 3;
            continue;
        }
        out.push((col, z));
        k += 1;
    }
    Ok(out)
}

/// `a+bj` / `a-bj` inside a single token (a sign not at the start or after an exponent).
fn split_joined(tok: &str) -> Option<Result<C64, String>> {
    if !tok.ends_with('j') {
        return None;
    }
    let bytes = tok.as_bytes();
    let pos = (1..bytes.len()).rev().find(|&i| {
        (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E')
    })?;
    let re = tok[..pos].parse::<f64>();
    let im = tok[pos..tok.len() - 1].parse::<f64>();
    Some(match (re, im) {
        (Ok(re), Ok(im)) => Ok(C64::new(re, im)),
        _ => Err(format!("`{tok}` is not a complex literal")),
    })
}

fn number(tok: &str) -> Result<C64, String> {
    if let Some(im) = tok.strip_suffix('j') {
        let im = match im {
            "" | "+" => 1.0,
            "-" => -1.0,
            s => s.parse().map_err(|_| format!("`{tok}` is not a complex literal"))?,
        };
        return Ok(C64::new(0.0, im));
    }
    tok.parse::<f64>().map(|re| C64::new(re, 0.0)).map_err(|_| format!("`{tok}` is not a number"))
}
