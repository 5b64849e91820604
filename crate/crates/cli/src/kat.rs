//! Known-answer files: a `#` header, then blank-line separated records of
//! `key = hex` lines (`count`, `seed`, `pk`, `sk`, `ct`, `ss`).
//!
//! Record `i` uses the 48-byte master seed `SHAKE-128("ctru-kat" || name || i)`
//! with `i` as 4 little-endian bytes; the master seed expands through
//! `SHAKE-128` to `keyseed || zseed || mseed`.

use ctru::symmetric::shake128;
use ctru::{kem, Error, ParameterSet};
use std::fmt::Write;

pub const MASTER_SEED_BYTES: usize = 48;

#[derive(Debug, PartialEq, Eq)]
pub struct KatRecord {
    pub count: u32,
    pub seed: Vec<u8>,
    pub pk: Vec<u8>,
    pub sk: Vec<u8>,
    pub ct: Vec<u8>,
    pub ss: Vec<u8>,
}

pub fn master_seed(p: &ParameterSet, i: u32) -> Vec<u8> {
    let mut input = b"ctru-kat".to_vec();
    input.extend_from_slice(p.name.as_bytes());
    input.extend_from_slice(&i.to_le_bytes());
    shake128(&input, MASTER_SEED_BYTES)
}

pub fn record(p: &ParameterSet, count: u32, seed: &[u8]) -> Result<KatRecord, Error> {
    let x = shake128(seed, 96);
    let part = |i: usize| -> [u8; 32] { x[32 * i..32 * (i + 1)].try_into().unwrap() };
    let kp = kem::keygen(p, &part(0), &part(1))?;
    let (ct, ss) = kem::encaps(p, &kp.pk, &part(2))?;
    Ok(KatRecord { count, seed: seed.to_vec(), pk: kp.pk, sk: kp.sk, ct, ss: ss.to_vec() })
}

fn header(p: &ParameterSet) -> String {
    format!("# ctru KAT\n# param = {}\n# version = {}\n", p.name, env!("CARGO_PKG_VERSION"))
}

pub fn generate(p: &ParameterSet, count: u32) -> Result<String, Error> {
    let mut out = header(p);
    for i in 0..count {
        let r = record(p, i, &master_seed(p, i))?;
        out.push('\n');
        writeln!(out, "count = {}", r.count).unwrap();
        for (k, v) in [("seed", &r.seed), ("pk", &r.pk), ("sk", &r.sk), ("ct", &r.ct), ("ss", &r.ss)] {
            writeln!(out, "{k} = {}", hex::encode(v)).unwrap();
        }
    }
    Ok(out)
}

/// Regenerates every record from its seed; returns the record count.
pub fn verify(p: &ParameterSet, text: &str) -> Result<usize, String> {
    let mut param = None;
    let mut records: Vec<Vec<(String, String)>> = Vec::new();
    let mut cur: Vec<(String, String)> = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if let Some(h) = line.strip_prefix('#') {
            if let Some((k, v)) = h.split_once('=') {
                if k.trim() == "param" {
                    param = Some(v.trim().to_string());
                }
            }
            continue;
        }
        if line.is_empty() {
            if !cur.is_empty() {
                records.push(std::mem::take(&mut cur));
            }
            continue;
        }
        let (k, v) = line.split_once('=').ok_or(format!("line {}: expected `key = value`", no + 1))?;
        cur.push((k.trim().to_string(), v.trim().to_string()));
    }
    if !cur.is_empty() {
        records.push(cur);
    }
    match param.as_deref() {
        Some(name) if name == p.name => {}
        Some(name) => return Err(format!("file is for {name}, not {}", p.name)),
        None => return Err("missing `# param` header".into()),
    }

    for (idx, fields) in records.iter().enumerate() {
        let get = |key: &str| -> Result<&str, String> {
            let mut it = fields.iter().filter(|(k, _)| k == key);
            match (it.next(), it.next()) {
                (Some((_, v)), None) => Ok(v.as_str()),
                (None, _) => Err(format!("record {idx}: missing `{key}`")),
                _ => Err(format!("record {idx}: duplicate `{key}`")),
            }
        };
        let count: u32 = get("count")?.parse().map_err(|e| format!("record {idx}: count: {e}"))?;
        let seed = hex::decode(get("seed")?).map_err(|e| format!("record {count}: seed: {e}"))?;
        if seed.len() != MASTER_SEED_BYTES {
            return Err(format!("record {count}: seed has {} bytes", seed.len()));
        }
        let want = record(p, count, &seed).map_err(|e| format!("record {count}: {e}"))?;
        for (k, v) in [("pk", &want.pk), ("sk", &want.sk), ("ct", &want.ct), ("ss", &want.ss)] {
            if get(k)? != hex::encode(v) {
                return Err(format!("record {count}: `{k}` does not match"));
            }
        }
        if fields.len() != 6 {
            return Err(format!("record {count}: unexpected fields"));
        }
    }
    Ok(records.len())
}
