//! Implementations of the `spec`, `encode`, `decode`, `verify` and `bench` commands.

use crate::error::{CliError, CliResult};
use crate::shard::{shard_path, Shard, ShardHeader, SHARD_FORMAT_VERSION};
use crate::specfile::{build, BuildParams, SpecFile};
use crate::stripe::StripeLayout;
use serde::Serialize;
use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;
use varray_core::codec::{measure_xors, theoretical_xors_per_bit};
use varray_core::constructions::{
    build_br, build_generalized_rdp, check_mds_conditions, verify_mds_exhaustive, MdsCheckOptions,
    DEFAULT_EXHAUSTIVE_LIMIT,
};
use varray_core::{
    BitVec, CodeSpec, Codec, CodewordArray, ErasurePattern, Error as CoreError, Exec, Family,
    Phase, SyndromeMode,
};

/// Environment variable overriding the exhaustive-verification pattern limit.
pub const EXHAUSTIVE_LIMIT_ENV: &str = "VARRAY_EXHAUSTIVE_LIMIT";

/// Stripes handed to the codec per batch.
const STRIPE_BATCH: usize = 2048;

fn describe(spec: &CodeSpec) -> String {
    let rp = spec.params();
    format!(
        "family {} p={} tau={} m={} r={} n={}: {} columns ({} data, {} parity), {} bits per column",
        spec.family(),
        rp.p(),
        rp.tau(),
        rp.m(),
        spec.r(),
        spec.n(),
        spec.total_cols(),
        spec.data_cols(),
        spec.r(),
        spec.row_size()
    )
}

/// Builds a code, optionally writes its spec file, and summarizes it.
pub fn cmd_spec(bp: &BuildParams, out: Option<&Path>) -> CliResult<String> {
    let spec = build(bp)?;
    let file = SpecFile::from_spec(&spec)?;
    if let Some(path) = out {
        file.save(path)?;
    }
    let report = check_mds_conditions(&spec, &MdsCheckOptions::default());
    let mut s = describe(&spec);
    s.push('\n');
    s.push_str(&report.to_string());
    s.push_str(&format!("\nhbin sha256 {}", file.hbin_sha256));
    if out.is_none() {
        s.push_str("\n\n");
        s.push_str(&file.to_toml()?);
    }
    Ok(s)
}

fn load_spec(path: &Path) -> CliResult<(SpecFile, CodeSpec)> {
    let file = SpecFile::load(path)?;
    let spec = file.to_spec()?;
    Ok((file, spec))
}

fn layout_of(spec: &CodeSpec) -> StripeLayout {
    StripeLayout {
        data_cols: spec.data_cols(),
        row_size: spec.row_size(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodeSummary {
    pub payload_len: u64,
    pub stripes: u64,
    pub shards: usize,
}

pub fn cmd_encode(
    spec_path: &Path,
    input: &Path,
    out_dir: &Path,
    exec: Exec,
) -> CliResult<EncodeSummary> {
    let (file, spec) = load_spec(spec_path)?;
    let digest = file.digest_bytes()?;
    let codec = Codec::new(spec);
    let spec = codec.spec();
    let bytes = std::fs::read(input)
        .map_err(|e| CliError::io(format!("reading {}", input.display()), e))?;
    let layout = layout_of(spec);
    let stripes = layout.stripe_count(bytes.len() as u64);
    let stream = BitVec::from_bytes(bytes.len() * 8, &bytes);
    drop(bytes);
    let bpc = layout.bytes_per_column();
    let total = spec.total_cols();
    let mut bodies: Vec<Vec<u8>> = (0..total)
        .map(|_| Vec::with_capacity(stripes as usize * bpc))
        .collect();
    let mut start = 0usize;
    while (start as u64) < stripes {
        let end = (start + STRIPE_BATCH).min(stripes as usize);
        let data: Vec<Vec<BitVec>> = (start..end).map(|s| layout.split(&stream, s)).collect();
        for word in codec.encode_batch(&data, exec)? {
            for (j, col) in word.columns().iter().enumerate() {
                bodies[j].extend_from_slice(&col.to_bytes());
            }
        }
        start = end;
    }
    std::fs::create_dir_all(out_dir)
        .map_err(|e| CliError::io(format!("creating {}", out_dir.display()), e))?;
    let payload_len = (stream.len() / 8) as u64;
    for (j, body) in bodies.into_iter().enumerate() {
        let shard = Shard {
            header: ShardHeader {
                version: SHARD_FORMAT_VERSION,
                spec_digest: digest,
                column: j as u32,
                payload_len,
                stripes,
            },
            body,
        };
        shard.write(&shard_path(out_dir, j))?;
    }
    Ok(EncodeSummary {
        payload_len,
        stripes,
        shards: total,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeSummary {
    pub missing: Vec<usize>,
    /// Shards present on disk but rejected (bad header, wrong code, wrong size).
    pub rejected: Vec<(usize, String)>,
    pub repaired: Vec<usize>,
    pub payload_len: u64,
}

pub fn cmd_decode(
    spec_path: &Path,
    shard_dir: &Path,
    output: &Path,
    explicit_missing: Option<&[usize]>,
    repair: bool,
    exec: Exec,
) -> CliResult<DecodeSummary> {
    let (file, spec) = load_spec(spec_path)?;
    let digest = file.digest_bytes()?;
    let codec = Codec::new(spec);
    let spec = codec.spec();
    let layout = layout_of(spec);
    let bpc = layout.bytes_per_column();
    let total = spec.total_cols();
    if let Some(&j) = explicit_missing.and_then(|m| m.iter().find(|&&j| j >= total)) {
        return Err(CliError::Usage(format!(
            "missing column {j} out of range (code has {total})"
        )));
    }

    let mut shards: Vec<Option<Shard>> = vec![None; total];
    let mut rejected = Vec::new();
    let mut reference: Option<ShardHeader> = None;
    for (j, slot) in shards.iter_mut().enumerate() {
        if explicit_missing.is_some_and(|m| m.contains(&j)) {
            continue;
        }
        let path = shard_path(shard_dir, j);
        let bytes = match std::fs::read(&path) {
            Ok(b) => b,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => continue,
            Err(e) => return Err(CliError::io(format!("reading {}", path.display()), e)),
        };
        let shard = match Shard::from_bytes(&bytes, bpc) {
            Ok(s) => s,
            Err(e) => {
                rejected.push((j, e.to_string()));
                continue;
            }
        };
        let h = shard.header;
        let disagreeing =
            reference.filter(|r| (r.payload_len, r.stripes) != (h.payload_len, h.stripes));
        let problem = if h.spec_digest != digest {
            Some("belongs to a different code".to_string())
        } else if h.column as usize != j {
            Some(format!("header says column {}", h.column))
        } else {
            disagreeing.map(|r| {
                format!(
                    "length {}/{} stripes disagrees with {}/{}",
                    h.payload_len, h.stripes, r.payload_len, r.stripes
                )
            })
        };
        match problem {
            Some(p) => rejected.push((j, p)),
            None => {
                reference.get_or_insert(h);
                *slot = Some(shard);
            }
        }
    }
    let missing: Vec<usize> = (0..total).filter(|&j| shards[j].is_none()).collect();
    let Some(reference) = reference else {
        return Err(CliError::Decode(format!(
            "no usable shards found in {}",
            shard_dir.display()
        )));
    };
    if missing.len() > spec.r() {
        let mut msg = format!(
            "insufficient shards: {} of {total} missing, at most {} recoverable",
            missing.len(),
            spec.r()
        );
        for (j, why) in &rejected {
            msg.push_str(&format!("; shard {j} rejected: {why}"));
        }
        return Err(CliError::Decode(msg));
    }
    let stripes = reference.stripes as usize;
    if layout.stripe_count(reference.payload_len) != stripes as u64 {
        return Err(CliError::Format(
            "stripe count does not match payload length".into(),
        ));
    }
    let pattern = ErasurePattern::new(missing.clone());
    let l = spec.row_size();
    let mut stream = BitVec::zeros(stripes * layout.bits_per_stripe());
    let mut repaired_bodies: Vec<Vec<u8>> = vec![Vec::new(); missing.len()];
    let mut start = 0usize;
    while start < stripes {
        let end = (start + STRIPE_BATCH).min(stripes);
        let arrays: Vec<CodewordArray> = (start..end)
            .map(|s| {
                let cols = shards
                    .iter()
                    .map(|sh| match sh {
                        Some(sh) => BitVec::from_bytes(l, &sh.body[s * bpc..(s + 1) * bpc]),
                        None => BitVec::zeros(l),
                    })
                    .collect();
                CodewordArray::from_columns(l, cols).expect("columns sized by construction")
            })
            .collect();
        let decoded = codec
            .decode_batch(&arrays, &pattern, exec)
            .map_err(|e| match e {
                CoreError::NoSolution => {
                    CliError::Decode("shards are mutually inconsistent".into())
                }
                other => other.into(),
            })?;
        for (k, word) in decoded.iter().enumerate() {
            layout.join(&mut stream, start + k, &word.columns()[..layout.data_cols]);
            if repair {
                for (slot, &j) in missing.iter().enumerate() {
                    repaired_bodies[slot].extend_from_slice(&word.column(j).to_bytes());
                }
            }
        }
        start = end;
    }
    let mut out = stream.to_bytes();
    out.truncate(reference.payload_len as usize);
    std::fs::write(output, &out)
        .map_err(|e| CliError::io(format!("writing {}", output.display()), e))?;
    let mut repaired = Vec::new();
    if repair {
        for (slot, &j) in missing.iter().enumerate() {
            let shard = Shard {
                header: ShardHeader {
                    column: j as u32,
                    ..reference
                },
                body: std::mem::take(&mut repaired_bodies[slot]),
            };
            shard.write(&shard_path(shard_dir, j))?;
            repaired.push(j);
        }
    }
    Ok(DecodeSummary {
        missing,
        rejected,
        repaired,
        payload_len: reference.payload_len,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyMode {
    Exhaustive,
    Conditions,
}

/// Pattern limit from the environment, falling back to the default.
pub fn exhaustive_limit_from_env() -> CliResult<u128> {
    match std::env::var(EXHAUSTIVE_LIMIT_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| {
            CliError::Usage(format!(
                "{EXHAUSTIVE_LIMIT_ENV} must be an integer, got {v:?}"
            ))
        }),
        Err(_) => Ok(DEFAULT_EXHAUSTIVE_LIMIT),
    }
}

pub fn cmd_verify(
    spec_path: &Path,
    mode: VerifyMode,
    limit: u128,
    exec: Exec,
) -> CliResult<String> {
    let (_, spec) = load_spec(spec_path)?;
    let mut out = describe(&spec);
    out.push('\n');
    match mode {
        VerifyMode::Conditions => {
            let report = check_mds_conditions(
                &spec,
                &MdsCheckOptions {
                    exec,
                    ..MdsCheckOptions::default()
                },
            );
            out.push_str(&report.to_string());
            if !report.holds() {
                return Err(CliError::Verify(out));
            }
        }
        VerifyMode::Exhaustive => {
            let report = verify_mds_exhaustive(&spec, limit, exec).map_err(|e| match e {
                CoreError::EnumerationTooLarge { needed, limit } => CliError::Usage(format!(
                    "exhaustive check needs {needed} erasure patterns, above the limit of {limit}; \
                     use --mode conditions or raise {EXHAUSTIVE_LIMIT_ENV}"
                )),
                other => other.into(),
            })?;
            out.push_str(&format!(
                "checked {} erasure patterns of size {}",
                report.patterns,
                spec.r()
            ));
            if !report.is_mds() {
                out.push_str(&format!(
                    "\nnot MDS; failing patterns: {:?}",
                    report.failures
                ));
                return Err(CliError::Verify(out));
            }
            out.push_str("\nevery pattern leaves a full-rank system: the code is MDS");
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct Baseline {
    pub code: String,
    pub p: usize,
    pub r: usize,
    pub xors_per_data_bit: f64,
    /// Asymptotic XORs per data bit of that family.
    pub asymptotic: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchReport {
    pub family: String,
    pub p: usize,
    pub tau: usize,
    pub r: usize,
    pub n: usize,
    pub total_cols: usize,
    pub row_size: usize,
    pub mode: String,
    pub trials: usize,
    pub xors_by_phase: BTreeMap<String, u64>,
    pub total_xors: u64,
    pub data_bits: u64,
    pub xors_per_data_bit: f64,
    pub naive_xors_per_data_bit: f64,
    pub theoretical_xors_per_data_bit: Option<u32>,
    pub encode_stripes: usize,
    pub encode_seconds: f64,
    pub encode_mib_per_second: f64,
    pub baselines: Vec<Baseline>,
}

fn next_odd_prime(mut p: usize) -> usize {
    let is_prime = |p: usize| {
        p >= 3
            && (2..)
                .take_while(|d| d * d <= p)
                .all(|d| !p.is_multiple_of(d))
    };
    while !is_prime(p) {
        p += 1;
    }
    p
}

pub fn cmd_bench(
    spec_path: &Path,
    mode: SyndromeMode,
    trials: usize,
    seed: u64,
    report_path: Option<&Path>,
    exec: Exec,
) -> CliResult<BenchReport> {
    let (_, spec) = load_spec(spec_path)?;
    let codec = Codec::new(spec);
    let spec = codec.spec();
    let rep = measure_xors(&codec, mode, trials, seed, exec)?;
    let naive = if mode == SyndromeMode::Naive {
        rep.clone()
    } else {
        measure_xors(&codec, SyndromeMode::Naive, 1, seed, exec)?
    };

    let mut rng = <rand::rngs::StdRng as rand::SeedableRng>::seed_from_u64(seed);
    let stripes_n = trials.max(64);
    let stripes: Vec<Vec<BitVec>> = (0..stripes_n)
        .map(|_| CodewordArray::random(spec.row_size(), spec.data_cols(), &mut rng).into_columns())
        .collect();
    let t0 = Instant::now();
    codec.encode_batch(&stripes, exec)?;
    let secs = t0.elapsed().as_secs_f64();
    let bytes = (stripes_n * spec.data_cols() * spec.row_size()) as f64 / 8.0;

    let pb = next_odd_prime(spec.params().p().max(spec.r() + 1));
    let mut baselines = Vec::new();
    for (name, built) in [
        ("br", build_br(pb, spec.r())),
        ("gen-rdp", build_generalized_rdp(pb, spec.r())),
    ] {
        if let Ok(b) = built {
            let c = Codec::new(b);
            let m = measure_xors(&c, SyndromeMode::Naive, 1, seed, exec)?;
            baselines.push(Baseline {
                code: name.into(),
                p: pb,
                r: spec.r(),
                xors_per_data_bit: m.per_data_bit(),
                asymptotic: spec.r() as f64,
            });
        }
    }
    let theoretical = matches!(spec.family(), Family::VandVetbr | Family::VandVesip4)
        .then(|| theoretical_xors_per_bit(spec.r()));
    let report = BenchReport {
        family: spec.family().tag().into(),
        p: spec.params().p(),
        tau: spec.params().tau(),
        r: spec.r(),
        n: spec.n(),
        total_cols: spec.total_cols(),
        row_size: spec.row_size(),
        mode: match mode {
            SyndromeMode::Fast => "fast".into(),
            SyndromeMode::Naive => "naive".into(),
        },
        trials,
        xors_by_phase: Phase::ALL
            .iter()
            .map(|p| (p.name().to_string(), rep.ledger.get(*p)))
            .collect(),
        total_xors: rep.total(),
        data_bits: rep.data_bits,
        xors_per_data_bit: rep.per_data_bit(),
        naive_xors_per_data_bit: naive.per_data_bit(),
        theoretical_xors_per_data_bit: theoretical,
        encode_stripes: stripes_n,
        encode_seconds: secs,
        encode_mib_per_second: bytes / (1024.0 * 1024.0) / secs.max(1e-9),
        baselines,
    };
    if let Some(path) = report_path {
        let json =
            serde_json::to_string_pretty(&report).map_err(|e| CliError::Internal(e.to_string()))?;
        std::fs::write(path, json)
            .map_err(|e| CliError::io(format!("writing {}", path.display()), e))?;
    }
    Ok(report)
}
