//! Line-oriented text format for motives.
//!
//! ```text
//! # comment
//! q 3
//! e 1
//! theta 0
//! r 2
//! row [0];[1]
//! row [0,1];[0]
//! ```
//! Each entry `[c0,c1,...]` is Σ c_j t^j with c_j the base-p encoding of an
//! element of F_{q^e}.

use crate::error::{Error, Result};
use crate::motive::{fields, Motive};
use crate::poly::TPoly;
use crate::tmatrix::TMatrix;

fn perr(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        col,
        msg: msg.into(),
    }
}

/// Parsed but unvalidated contents of a motive file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MotiveFile {
    pub q: u64,
    pub e: u32,
    pub theta: u64,
    pub rows: Vec<Vec<Vec<u64>>>,
    /// line number of each row, for error reporting
    pub row_lines: Vec<usize>,
}

fn parse_int(tok: &str, line: usize, col: usize) -> Result<u64> {
    tok.parse::<u64>()
        .map_err(|_| perr(line, col, format!("expected a nonnegative integer, found `{tok}`")))
}

fn parse_entry(s: &str, line: usize, col: usize) -> Result<Vec<u64>> {
    let inner = s
        .strip_prefix('[')
        .and_then(|x| x.strip_suffix(']'))
        .ok_or_else(|| perr(line, col, format!("entry `{s}` must be a bracketed list")))?;
    if inner.trim().is_empty() {
        return Err(perr(line, col, "empty coefficient list"));
    }
    let mut out = Vec::new();
    let mut c = col + 1;
    for tok in inner.split(',') {
        let lead = tok.len() - tok.trim_start().len();
        out.push(parse_int(tok.trim(), line, c + lead)?);
        c += tok.len() + 1;
    }
    Ok(out)
}

pub fn parse_file(text: &str) -> Result<MotiveFile> {
    let mut q = None;
    let mut e = None;
    let mut theta = None;
    let mut r: Option<usize> = None;
    let mut rows = Vec::new();
    let mut row_lines = Vec::new();
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        last_line = ln;
        let body = raw.split('#').next().unwrap_or("");
        let trimmed = body.trim();
        if trimmed.is_empty() {
            continue;
        }
        let indent = body.len() - body.trim_start().len();
        let (kw, rest) = trimmed.split_once(char::is_whitespace).unwrap_or((trimmed, ""));
        let rest_col = indent + kw.len() + 1 + (rest.len() - rest.trim_start().len()) + 1;
        let rest = rest.trim();
        let need_arg = || {
            if rest.is_empty() {
                Err(perr(ln, indent + kw.len() + 1, format!("`{kw}` needs an argument")))
            } else {
                Ok(())
            }
        };
        match kw {
            "q" | "e" | "theta" | "r" => {
                need_arg()?;
                if rows.len() > 0 {
                    return Err(perr(ln, indent + 1, format!("`{kw}` after matrix rows")));
                }
                let v = parse_int(rest, ln, rest_col)?;
                let slot_set = match kw {
                    "q" => q.replace(v).is_some(),
                    "e" => e.replace(v).is_some(),
                    "theta" => theta.replace(v).is_some(),
                    _ => r.replace(v as usize).is_some(),
                };
                if slot_set {
                    return Err(perr(ln, indent + 1, format!("duplicate `{kw}`")));
                }
            }
            "row" => {
                need_arg()?;
                let rr = r.ok_or_else(|| perr(ln, indent + 1, "`row` before `r`"))?;
                if rows.len() == rr {
                    return Err(perr(ln, indent + 1, format!("more than {rr} rows")));
                }
                let mut entries = Vec::new();
                let mut c = rest_col;
                for part in rest.split(';') {
                    let lead = part.len() - part.trim_start().len();
                    entries.push(parse_entry(part.trim(), ln, c + lead)?);
                    c += part.len() + 1;
                }
                if entries.len() != rr {
                    return Err(perr(ln, rest_col, format!("row has {} entries, expected {rr}", entries.len())));
                }
                rows.push(entries);
                row_lines.push(ln);
            }
            _ => return Err(perr(ln, indent + 1, format!("unknown keyword `{kw}`"))),
        }
    }
    let end = last_line.max(1);
    let q = q.ok_or_else(|| perr(end, 1, "missing `q`"))?;
    let e = e.ok_or_else(|| perr(end, 1, "missing `e`"))?;
    let theta = theta.ok_or_else(|| perr(end, 1, "missing `theta`"))?;
    let r = r.ok_or_else(|| perr(end, 1, "missing `r`"))?;
    if r == 0 {
        return Err(perr(end, 1, "empty matrix"));
    }
    if rows.len() != r {
        return Err(perr(end, 1, format!("expected {r} rows, found {}", rows.len())));
    }
    let e = u32::try_from(e).map_err(|_| perr(end, 1, "e is too large"))?;
    Ok(MotiveFile {
        q,
        e,
        theta,
        rows,
        row_lines,
    })
}

impl MotiveFile {
    pub fn to_motive(&self) -> Result<Motive> {
        let (_, l) = fields(self.q, self.e)?;
        let theta = l.decode(self.theta)?;
        let mut mat = Vec::new();
        for row in &self.rows {
            let mut out = Vec::new();
            for ent in row {
                let mut cs = Vec::new();
                for &c in ent {
                    cs.push(l.decode(c)?);
                }
                out.push(TPoly::from_coeffs(&l, cs));
            }
            mat.push(out);
        }
        Motive::validate(self.q, self.e, theta, TMatrix::from_rows(&l, mat))
    }
}

pub fn parse_motive(text: &str) -> Result<Motive> {
    parse_file(text)?.to_motive()
}

fn entry(p: &TPoly) -> String {
    let enc = p.encodings();
    if enc.is_empty() {
        return "[0]".into();
    }
    let parts: Vec<String> = enc.iter().map(|c| c.to_string()).collect();
    format!("[{}]", parts.join(","))
}

/// Canonical text form; parse_motive(serialize(m)) reproduces m.
pub fn serialize(m: &Motive) -> String {
    let l = m.field();
    let mut s = format!("q {}\ne {}\ntheta {}\nr {}\n", m.q(), m.e(), l.encode(m.theta()), m.rank());
    for i in 0..m.rank() {
        let row: Vec<String> = (0..m.rank()).map(|j| entry(m.matrix().get(i, j))).collect();
        s.push_str(&format!("row {}\n", row.join(";")));
    }
    s
}
