//! Text format for coefficient vectors.
//!
//! ```text
//! SPHERELOK-COEFF v1 kind=harmonic n=2 m=1
//! 2 2 1.0000000000000000e0 0.0000000000000000e0
//! ...
//! ```
//!
//! One line per entry in canonical order: `k l re im` for harmonic
//! coefficients, `k i re im` (one-based `i`) for localized ones.

use std::io::{BufRead, Write};

use num_complex::Complex64;

use super::{BandParams, HarmonicCoeffs, LocalizedCoeffs};
use crate::error::{Error, Result};

const MAGIC: &str = "SPHERELOK-COEFF";
const VERSION: &str = "v1";

#[derive(Debug, Clone, PartialEq)]
pub enum CoeffFile {
    Harmonic(HarmonicCoeffs),
    Localized(LocalizedCoeffs),
}

impl CoeffFile {
    pub fn params(&self) -> BandParams {
        match self {
            CoeffFile::Harmonic(c) => c.params(),
            CoeffFile::Localized(d) => d.params(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CoeffFile::Harmonic(_) => "harmonic",
            CoeffFile::Localized(_) => "localized",
        }
    }
}

pub fn write_harmonic<W: Write>(mut w: W, c: &HarmonicCoeffs) -> Result<()> {
    let p = c.params();
    writeln!(w, "{MAGIC} {VERSION} kind=harmonic n={} m={}", p.n(), p.m())?;
    for k in p.orders() {
        let first = p.first_degree(k);
        for (j, z) in c.block(k).iter().enumerate() {
            writeln!(w, "{k} {} {:.16e} {:.16e}", first + j, z.re, z.im)?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_localized<W: Write>(mut w: W, d: &LocalizedCoeffs) -> Result<()> {
    let p = d.params();
    writeln!(w, "{MAGIC} {VERSION} kind=localized n={} m={}", p.n(), p.m())?;
    for k in p.orders() {
        for (j, z) in d.block(k).iter().enumerate() {
            writeln!(w, "{k} {} {:.16e} {:.16e}", j + 1, z.re, z.im)?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_coeffs<W: Write>(w: W, file: &CoeffFile) -> Result<()> {
    match file {
        CoeffFile::Harmonic(c) => write_harmonic(w, c),
        CoeffFile::Localized(d) => write_localized(w, d),
    }
}

/// Parses a coefficient file, rejecting missing, extra or out-of-order entries.
pub fn read_coeffs<R: BufRead>(r: R) -> Result<CoeffFile> {
    let mut lines = r.lines();
    let header = match lines.next() {
        Some(line) => line?,
        None => return Err(Error::format(1, "empty file")),
    };
    let (harmonic, params) = parse_header(&header)?;

    let mut data = Vec::with_capacity(params.dimension());
    let mut line_no = 1;
    for k in params.orders() {
        let first = if harmonic { params.first_degree(k) } else { 1 };
        for j in 0..params.block_len(k) {
            line_no += 1;
            let line = match lines.next() {
                Some(line) => line?,
                None => {
                    return Err(Error::format(
                        line_no,
                        format!("missing entry for k = {k}, index {}", first + j),
                    ))
                }
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 4 {
                return Err(Error::format(line_no, "expected `k index re im`"));
            }
            let got_k: i64 = fields[0]
                .parse()
                .map_err(|_| Error::format(line_no, format!("bad order `{}`", fields[0])))?;
            let got_j: usize = fields[1]
                .parse()
                .map_err(|_| Error::format(line_no, format!("bad index `{}`", fields[1])))?;
            if got_k != k || got_j != first + j {
                return Err(Error::format(
                    line_no,
                    format!(
                        "expected entry ({k}, {}), found ({got_k}, {got_j})",
                        first + j
                    ),
                ));
            }
            let re = parse_float(fields[2], line_no)?;
            let im = parse_float(fields[3], line_no)?;
            data.push(Complex64::new(re, im));
        }
    }
    for line in lines {
        line_no += 1;
        if !line?.trim().is_empty() {
            return Err(Error::format(line_no, "unexpected trailing entry"));
        }
    }
    Ok(if harmonic {
        CoeffFile::Harmonic(HarmonicCoeffs::from_vec(params, data)?)
    } else {
        CoeffFile::Localized(LocalizedCoeffs::from_vec(params, data)?)
    })
}

pub fn read_harmonic<R: BufRead>(r: R) -> Result<HarmonicCoeffs> {
    match read_coeffs(r)? {
        CoeffFile::Harmonic(c) => Ok(c),
        CoeffFile::Localized(_) => Err(Error::format(1, "expected kind=harmonic")),
    }
}

pub fn read_localized<R: BufRead>(r: R) -> Result<LocalizedCoeffs> {
    match read_coeffs(r)? {
        CoeffFile::Localized(d) => Ok(d),
        CoeffFile::Harmonic(_) => Err(Error::format(1, "expected kind=localized")),
    }
}

fn parse_header(line: &str) -> Result<(bool, BandParams)> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.len() != 5 || fields[0] != MAGIC || fields[1] != VERSION {
        return Err(Error::format(1, format!("expected `{MAGIC} {VERSION} kind=.. n=.. m=..`")));
    }
    let harmonic = match fields[2] {
        "kind=harmonic" => true,
        "kind=localized" => false,
        other => return Err(Error::format(1, format!("unknown `{other}`"))),
    };
    let n = parse_key(fields[3], "n")?;
    let m = parse_key(fields[4], "m")?;
    let params = BandParams::new(n, m).map_err(|e| Error::format(1, e.to_string()))?;
    Ok((harmonic, params))
}

fn parse_key(field: &str, key: &str) -> Result<usize> {
    field
        .strip_prefix(key)
        .and_then(|rest| rest.strip_prefix('='))
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| Error::format(1, format!("expected `{key}=<integer>`, found `{field}`")))
}

fn parse_float(s: &str, line: usize) -> Result<f64> {
    let v: f64 = s
        .parse()
        .map_err(|_| Error::format(line, format!("bad number `{s}`")))?;
    if !v.is_finite() {
        return Err(Error::format(line, format!("non-finite value `{s}`")));
    }
    Ok(v)
}
