//! Binary plan cache.
//!
//! Layout (little-endian): the magic line `SPHERELOK-PLAN v1\n`, then `u64`
//! values `n`, `m`, block count `2n + 1`, then one record per order
//! `k = n, ..., -n`: `i64 k`, `u64 N_k`, `N_k` eigenvalues and the `N_k × N_k`
//! eigenvector matrix row-major, all `f64`.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::jacobi_blocks::{EigenBlock, EigenSystem};
use crate::sphere_basis::BandParams;

pub const MAGIC: &[u8] = b"SPHERELOK-PLAN v1\n";

/// Largest `|VᵀV - I|` accepted on load.
pub const LOAD_ORTHOGONALITY_TOLERANCE: f64 = 1e-10;

pub fn write_system<W: Write>(mut w: W, system: &EigenSystem) -> Result<()> {
    let p = system.params();
    w.write_all(MAGIC)?;
    for v in [p.n() as u64, p.m() as u64, 2 * p.n() as u64 + 1] {
        w.write_all(&v.to_le_bytes())?;
    }
    for k in p.orders() {
        let block = system.block(k)?;
        w.write_all(&k.to_le_bytes())?;
        w.write_all(&(block.size() as u64).to_le_bytes())?;
        for x in block.eigenvalues().iter().chain(block.vectors()) {
            w.write_all(&x.to_le_bytes())?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Reads a plan cache, checking structure, eigenvalue order and the
/// orthogonality of every block.
pub fn read_system<R: Read>(mut r: R) -> Result<EigenSystem> {
    let mut magic = vec![0u8; MAGIC.len()];
    r.read_exact(&mut magic)
        .map_err(|_| Error::format(1, "truncated plan header"))?;
    if magic != MAGIC {
        return Err(Error::format(1, "not a SPHERELOK-PLAN v1 file"));
    }
    let n = read_u64(&mut r)? as usize;
    let m = read_u64(&mut r)? as usize;
    let count = read_u64(&mut r)?;
    let params = BandParams::new(n, m).map_err(|e| Error::format(1, e.to_string()))?;
    if count != 2 * n as u64 + 1 {
        return Err(Error::format(1, format!("expected {} blocks, header says {count}", 2 * n + 1)));
    }

    let mut blocks: Vec<Option<EigenBlock>> = vec![None; n + 1];
    for (record, k) in params.orders().enumerate() {
        let record = record + 1;
        let got_k = read_u64(&mut r)? as i64;
        let size = read_u64(&mut r)? as usize;
        if got_k != k || size != params.block_len(k) {
            return Err(Error::format(
                record,
                format!("expected block k = {k} of size {}, found k = {got_k} size {size}", params.block_len(k)),
            ));
        }
        let values = read_f64s(&mut r, size)?;
        let vectors = read_f64s(&mut r, size * size)?;
        let block = EigenBlock::from_parts(k.unsigned_abs() as usize, params.truncation_offset(k), values, vectors)?;
        if !block.eigenvalues().windows(2).all(|w| w[0] > w[1]) {
            return Err(Error::NumericContract(format!("block k = {k}: eigenvalues not decreasing")));
        }
        let residual = block.orthogonality_residual();
        if !(residual < LOAD_ORTHOGONALITY_TOLERANCE) {
            return Err(Error::NumericContract(format!(
                "block k = {k}: orthogonality residual {residual:e}"
            )));
        }
        let slot = &mut blocks[k.unsigned_abs() as usize];
        match slot {
            Some(existing) if existing != &block => {
                return Err(Error::format(record, format!("blocks {k} and {} differ", -k)));
            }
            Some(_) => {}
            None => *slot = Some(block),
        }
    }
    let mut rest = [0u8; 1];
    if r.read(&mut rest)? != 0 {
        return Err(Error::format(2 * n + 2, "trailing bytes after last block"));
    }
    let blocks = blocks.into_iter().map(|b| b.expect("every |k| visited")).collect();
    EigenSystem::from_blocks(params, blocks)
}

pub fn save(path: impl AsRef<Path>, system: &EigenSystem) -> Result<()> {
    write_system(BufWriter::new(File::create(path)?), system)
}

pub fn load(path: impl AsRef<Path>) -> Result<EigenSystem> {
    read_system(BufReader::new(File::open(path)?))
}

fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut buf = [0u8; 8];
    r.read_exact(&mut buf)
        .map_err(|_| Error::format(0, "unexpected end of plan file"))?;
    Ok(u64::from_le_bytes(buf))
}

fn read_f64s<R: Read>(r: &mut R, count: usize) -> Result<Vec<f64>> {
    let mut bytes = vec![0u8; count * 8];
    r.read_exact(&mut bytes)
        .map_err(|_| Error::format(0, "unexpected end of plan file"))?;
    let values: Vec<f64> = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
        .collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NumericContract("non-finite value in plan file".into()));
    }
    Ok(values)
}
