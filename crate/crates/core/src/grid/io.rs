//! Text grid format:
//!
//! ```text
//! # m=2 dims=8,8 kind=real
//! 0.5
//! ...
//! ```
//!
//! One sample per line, row-major with axis 1 fastest; complex samples are `re,im`.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};

use super::GridFunction;

pub fn read_grid_file(path: &Path) -> Result<GridFunction> {
    let text = std::fs::read_to_string(path)?;
    read_grid(&text)
}

pub fn read_grid(text: &str) -> Result<GridFunction> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (hline, header) = lines
        .next()
        .ok_or(Error::Parse { line: 1, message: "empty grid file".into() })?;
    let perr = |line: usize, message: String| Error::Parse { line: line + 1, message };
    let header = header
        .trim()
        .strip_prefix('#')
        .ok_or_else(|| perr(hline, "header must start with '#'".into()))?;
    let (mut m, mut dims, mut complex) = (None, None, None);
    for field in header.split_whitespace() {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| perr(hline, format!("malformed header field '{field}'")))?;
        match key {
            "m" => m = Some(value.parse::<usize>().map_err(|_| perr(hline, format!("bad m '{value}'")))?),
            "dims" => {
                dims = Some(
                    value
                        .split(',')
                        .map(|v| v.parse::<usize>().map_err(|_| perr(hline, format!("bad dims '{value}'"))))
                        .collect::<Result<Vec<_>>>()?,
                )
            }
            "kind" => {
                complex = Some(match value {
                    "real" => false,
                    "complex" => true,
                    _ => return Err(perr(hline, format!("unknown kind '{value}'"))),
                })
            }
            _ => return Err(perr(hline, format!("unknown header key '{key}'"))),
        }
    }
    let dims: Vec<usize> = dims.ok_or_else(|| perr(hline, "missing dims".into()))?;
    let complex = complex.ok_or_else(|| perr(hline, "missing kind".into()))?;
    if let Some(m) = m {
        if m != dims.len() {
            return Err(perr(hline, format!("m = {m} but {} dims given", dims.len())));
        }
    }
    let mut samples = Vec::with_capacity(dims.iter().product());
    for (i, line) in lines {
        let line = line.trim();
        let num = |s: &str| s.trim().parse::<f64>().map_err(|_| perr(i, format!("bad sample '{line}'")));
        let z = if complex {
            let (re, im) = line
                .split_once(',')
                .ok_or_else(|| perr(i, format!("complex sample '{line}' needs re,im")))?;
            Complex64::new(num(re)?, num(im)?)
        } else {
            Complex64::new(num(line)?, 0.0)
        };
        samples.push(z);
    }
    GridFunction::new(dims, samples)
}

pub fn write_grid(f: &GridFunction) -> String {
    let complex = !f.is_real();
    let dims: Vec<String> = f.dims().iter().map(|d| d.to_string()).collect();
    let mut out = format!(
        "# m={} dims={} kind={}\n",
        f.m(),
        dims.join(","),
        if complex { "complex" } else { "real" }
    );
    for z in f.samples() {
        if complex {
            let _ = writeln!(out, "{:e},{:e}", z.re, z.im);
        } else {
            let _ = writeln!(out, "{:e}", z.re);
        }
    }
    out
}
