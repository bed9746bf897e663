//! Ensemble files.
//!
//! CSV: header `time,path_0,…,path_{n-1}`, one row per recorded time.
//! Binary: magic `WSDE1`, `u64` path count, `u64` time count, then rows of
//! `f64` (time followed by one value per path), all little-endian.

use std::io::{BufRead, Write};

use super::PathEnsemble;
use crate::{Error, Real, Result};

pub const BINARY_MAGIC: &[u8; 5] = b"WSDE1";

pub fn write_csv<T: Real, W: Write>(ens: &PathEnsemble<T>, mut w: W) -> std::io::Result<()> {
    let mut line = String::from("time");
    for i in 0..ens.n_paths {
        line.push_str(&format!(",path_{i}"));
    }
    writeln!(w, "{line}")?;
    for (k, t) in ens.times.iter().enumerate() {
        line.clear();
        line.push_str(&t.as_f64().to_string());
        for p in ens.paths() {
            line.push(',');
            line.push_str(&p[k].as_f64().to_string());
        }
        writeln!(w, "{line}")?;
    }
    w.flush()
}

pub fn write_binary<T: Real, W: Write>(ens: &PathEnsemble<T>, mut w: W) -> std::io::Result<()> {
    w.write_all(BINARY_MAGIC)?;
    w.write_all(&(ens.n_paths as u64).to_le_bytes())?;
    w.write_all(&(ens.n_times() as u64).to_le_bytes())?;
    for (k, t) in ens.times.iter().enumerate() {
        w.write_all(&t.as_f64().to_le_bytes())?;
        for p in ens.paths() {
            w.write_all(&p[k].as_f64().to_le_bytes())?;
        }
    }
    w.flush()
}

fn read_binary(bytes: &[u8]) -> Result<PathEnsemble<f64>> {
    let header = BINARY_MAGIC.len() + 16;
    if bytes.len() < header {
        return Err(Error::Format("binary ensemble shorter than its header".into()));
    }
    let word = |at: usize| u64::from_le_bytes(bytes[at..at + 8].try_into().expect("8 bytes"));
    let n_paths = word(5) as usize;
    let n_times = word(13) as usize;
    let expected = n_times
        .checked_mul(n_paths + 1)
        .and_then(|n| n.checked_mul(8))
        .ok_or_else(|| Error::Format("binary ensemble dimensions overflow".into()))?;
    if bytes.len() - header != expected {
        return Err(Error::Format(format!(
            "binary ensemble: expected {expected} payload bytes for {n_paths} paths × {n_times} times, found {}",
            bytes.len() - header
        )));
    }
    let mut times = Vec::with_capacity(n_times);
    let mut values = vec![0.0; n_paths * n_times];
    let mut at = header;
    let mut next = || {
        let v = f64::from_le_bytes(bytes[at..at + 8].try_into().expect("8 bytes"));
        at += 8;
        v
    };
    for k in 0..n_times {
        times.push(next());
        for p in 0..n_paths {
            values[p * n_times + k] = next();
        }
    }
    Ok(PathEnsemble {
        times,
        values,
        n_paths,
        model_hash: String::new(),
        config_hash: String::new(),
    })
}

fn read_csv(bytes: &[u8]) -> Result<PathEnsemble<f64>> {
    let mut lines = bytes.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Format("empty ensemble file".into()))?
        .map_err(|e| Error::Format(e.to_string()))?;
    let cols: Vec<&str> = header.trim().split(',').collect();
    if cols.first() != Some(&"time") || cols.len() < 2 {
        return Err(Error::Format(format!("bad ensemble header `{header}`")));
    }
    for (i, c) in cols[1..].iter().enumerate() {
        if *c != format!("path_{i}") {
            return Err(Error::Format(format!("bad column name `{c}`, expected path_{i}")));
        }
    }
    let n_paths = cols.len() - 1;
    let mut times = Vec::new();
    let mut rows: Vec<f64> = Vec::new();
    for (ln, line) in lines.enumerate() {
        let line = line.map_err(|e| Error::Format(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.trim().split(',').collect();
        if fields.len() != n_paths + 1 {
            return Err(Error::Format(format!(
                "row {}: expected {} fields, found {}",
                ln + 2,
                n_paths + 1,
                fields.len()
            )));
        }
        let parse = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| Error::Format(format!("row {}: bad number `{s}`", ln + 2)))
        };
        times.push(parse(fields[0])?);
        for f in &fields[1..] {
            rows.push(parse(f)?);
        }
    }
    let n_times = times.len();
    let mut values = vec![0.0; n_paths * n_times];
    for k in 0..n_times {
        for p in 0..n_paths {
            values[p * n_times + k] = rows[k * n_paths + p];
        }
    }
    Ok(PathEnsemble {
        times,
        values,
        n_paths,
        model_hash: String::new(),
        config_hash: String::new(),
    })
}

/// Reads either format, detected by the magic bytes.
pub fn read_ensemble(bytes: &[u8]) -> Result<PathEnsemble<f64>> {
    if bytes.starts_with(BINARY_MAGIC) {
        read_binary(bytes)
    } else {
        read_csv(bytes)
    }
}
