//! Command-level behaviour: file formats, round trips and exit codes.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::path::Path;
use std::process::{Command, Output};
use varray_cli::commands::{cmd_decode, cmd_encode, cmd_spec, cmd_verify, VerifyMode};
use varray_cli::shard::{shard_path, Shard, ShardHeader, HEADER_LEN, MAGIC};
use varray_cli::specfile::{build, BuildParams, SpecFile};
use varray_cli::stripe::StripeLayout;
use varray_cli::CliError;
use varray_core::{Exec, Poly};

const BIN: &str = env!("CARGO_BIN_EXE_varray");

fn params(family: &str, p: usize, tau: usize, r: usize) -> BuildParams {
    BuildParams {
        family: family.into(),
        p,
        tau,
        r: Some(r),
        n0: None,
        n1: None,
        n: None,
        a: vec![],
        b: vec![],
    }
}

fn vetbr(p: usize, tau: usize, r: usize, n0: usize) -> BuildParams {
    BuildParams {
        n0: Some(n0),
        ..params("vand-vetbr", p, tau, r)
    }
}

fn varray(dir: &Path, args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

fn random_bytes(len: usize, seed: u64) -> Vec<u8> {
    let mut g = ChaCha8Rng::seed_from_u64(seed);
    (0..len).map(|_| g.gen()).collect()
}

#[test]
fn spec_file_round_trip_keeps_digest() {
    let cauchy = BuildParams {
        n: Some(4),
        a: vec![Poly::zero(), Poly::one(), Poly::monomial(2)],
        // the last column is the fixed unit vector, so n - 1 column points
        b: vec![
            Poly::monomial(1),
            Poly::from_exponents([0, 1]),
            Poly::from_exponents([1, 2]),
        ],
        ..params("cauchy-vesip", 7, 1, 3)
    };
    let cases = vec![
        vetbr(11, 1, 4, 5),
        vetbr(5, 2, 3, 3),
        BuildParams {
            n1: Some(2),
            r: None,
            ..params("vand-vesip4", 11, 1, 4)
        },
        cauchy,
        params("gen-rdp", 7, 1, 3),
        params("br", 5, 1, 2),
    ];
    for bp in cases {
        let spec = build(&bp).unwrap();
        let file = SpecFile::from_spec(&spec).unwrap();
        let text = file.to_toml().unwrap();
        let back = SpecFile::from_toml(&text).unwrap();
        assert_eq!(back, file);
        let rebuilt = back.to_spec().unwrap();
        assert_eq!(rebuilt.hbin(), spec.hbin(), "{}", bp.family);
    }
}

#[test]
fn spec_file_rejects_tampering() {
    let file = SpecFile::from_spec(&build(&vetbr(7, 1, 2, 3)).unwrap()).unwrap();
    let wrong_digest = SpecFile {
        hbin_sha256: "00".repeat(32),
        ..file.clone()
    };
    assert!(matches!(wrong_digest.to_spec(), Err(CliError::Format(_))));
    // a different code under the same digest
    let other_code = SpecFile {
        n0: Some(2),
        ..file.clone()
    };
    assert!(matches!(other_code.to_spec(), Err(CliError::Format(_))));
    let future = SpecFile {
        format_version: 99,
        ..file
    };
    assert!(matches!(future.to_spec(), Err(CliError::Format(_))));
    assert!(matches!(
        SpecFile::from_toml("p = 3"),
        Err(CliError::Format(_))
    ));
}

#[test]
fn spec_preconditions_are_usage_errors() {
    let too_big = vetbr(11, 1, 3, 11);
    assert!(matches!(build(&too_big), Err(CliError::Usage(_))));
    let no_n0 = params("vand-vetbr", 11, 1, 3);
    assert!(matches!(build(&no_n0), Err(CliError::Usage(_))));
    let tau_rdp = params("gen-rdp", 7, 2, 3);
    assert!(matches!(build(&tau_rdp), Err(CliError::Usage(_))));
    assert!(matches!(
        build(&params("nonsense", 5, 1, 2)),
        Err(CliError::Usage(_))
    ));
}

fn encode_decode(bp: &BuildParams, len: usize, erase: &[usize], seed: u64) {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let spec_path = d.join("code.toml");
    cmd_spec(bp, Some(&spec_path)).unwrap();
    let input = random_bytes(len, seed);
    std::fs::write(d.join("in"), &input).unwrap();
    let shards = d.join("shards");
    let summary = cmd_encode(&spec_path, &d.join("in"), &shards, Exec::default()).unwrap();
    assert_eq!(summary.payload_len, len as u64);
    let originals: Vec<Vec<u8>> = (0..summary.shards)
        .map(|j| std::fs::read(shard_path(&shards, j)).unwrap())
        .collect();
    for &j in erase {
        std::fs::remove_file(shard_path(&shards, j)).unwrap();
    }
    let out = d.join("out");
    let dec = cmd_decode(&spec_path, &shards, &out, None, true, Exec::default()).unwrap();
    assert_eq!(dec.missing, erase);
    assert_eq!(std::fs::read(&out).unwrap(), input, "len {len}");
    for (j, orig) in originals.iter().enumerate() {
        assert_eq!(
            &std::fs::read(shard_path(&shards, j)).unwrap(),
            orig,
            "shard {j}"
        );
    }
}

#[test]
fn round_trip_at_stripe_boundaries() {
    // 6 data columns of 4 bits: 3-byte stripes
    let aligned = vetbr(5, 1, 2, 3);
    // 6 data columns of 6 bits: 36-bit stripes straddle bytes
    let straddling = vetbr(7, 1, 2, 3);
    for (bp, stripe) in [(&aligned, 3usize), (&straddling, 5)] {
        for len in [0, 1, stripe - 1, stripe, stripe + 1, 10 * stripe + 2] {
            encode_decode(bp, len, &[], len as u64);
            encode_decode(bp, len, &[1, 6], len as u64);
        }
    }
    encode_decode(&vetbr(11, 2, 4, 4), 4099, &[0, 5, 12, 15], 9);
    encode_decode(
        &BuildParams {
            n1: Some(2),
            r: None,
            ..params("vand-vesip4", 11, 1, 4)
        },
        777,
        &[0, 3, 6, 7],
        10,
    );
    encode_decode(&params("gen-rdp", 7, 1, 3), 500, &[2, 7, 8], 11);
}

#[test]
fn empty_file_gives_zero_stripe_shards() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    cmd_spec(&vetbr(5, 1, 2, 2), Some(&d.join("s.toml"))).unwrap();
    std::fs::write(d.join("in"), b"").unwrap();
    let s = cmd_encode(
        &d.join("s.toml"),
        &d.join("in"),
        &d.join("sh"),
        Exec::Sequential,
    )
    .unwrap();
    assert_eq!((s.payload_len, s.stripes, s.shards), (0, 0, 4));
    for j in 0..4 {
        let bytes = std::fs::read(shard_path(&d.join("sh"), j)).unwrap();
        assert_eq!(bytes.len(), HEADER_LEN);
        let shard = Shard::from_bytes(&bytes, 1).unwrap();
        assert_eq!((shard.header.column, shard.header.stripes), (j as u32, 0));
    }
}

#[test]
fn shard_header_layout() {
    let header = ShardHeader {
        version: 1,
        spec_digest: [0xab; 32],
        column: 0x0102_0304,
        payload_len: 0x1122_3344_5566_7788,
        stripes: 3,
    };
    let b = header.to_bytes();
    assert_eq!(&b[..4], MAGIC);
    assert_eq!(&b[4..6], &[1, 0]);
    assert_eq!(&b[6..38], &[0xab; 32]);
    assert_eq!(&b[38..42], &[4, 3, 2, 1]);
    assert_eq!(&b[42..50], &0x1122_3344_5566_7788u64.to_le_bytes());
    assert_eq!(&b[50..58], &3u64.to_le_bytes());
    assert_eq!(ShardHeader::from_bytes(&b).unwrap(), header);
    let shard = Shard {
        header,
        body: vec![7; 6],
    };
    assert_eq!(Shard::from_bytes(&shard.to_bytes(), 2).unwrap(), shard);
    // body length must equal stripes * bytes per column
    assert!(Shard::from_bytes(&shard.to_bytes(), 3).is_err());
    let mut bad = shard.to_bytes();
    bad[0] = b'X';
    assert!(matches!(
        Shard::from_bytes(&bad, 2),
        Err(CliError::Format(_))
    ));
}

#[test]
fn explicit_missing_overrides_autodetection() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    cmd_spec(&vetbr(7, 1, 3, 3), Some(&d.join("s.toml"))).unwrap();
    let input = random_bytes(1000, 1);
    std::fs::write(d.join("in"), &input).unwrap();
    cmd_encode(
        &d.join("s.toml"),
        &d.join("in"),
        &d.join("sh"),
        Exec::default(),
    )
    .unwrap();
    // corrupt a shard body: autodetection cannot see it, so decode reports inconsistency
    let victim = shard_path(&d.join("sh"), 2);
    let mut bytes = std::fs::read(&victim).unwrap();
    bytes[HEADER_LEN + 5] ^= 0x10;
    std::fs::write(&victim, &bytes).unwrap();
    let err = cmd_decode(
        &d.join("s.toml"),
        &d.join("sh"),
        &d.join("o"),
        None,
        false,
        Exec::default(),
    );
    assert!(matches!(err, Err(CliError::Decode(_))));
    let ok = cmd_decode(
        &d.join("s.toml"),
        &d.join("sh"),
        &d.join("o"),
        Some(&[2]),
        true,
        Exec::default(),
    )
    .unwrap();
    assert_eq!(ok.missing, vec![2]);
    assert_eq!(std::fs::read(d.join("o")).unwrap(), input);
    // the repair overwrote the corrupted shard
    assert_ne!(std::fs::read(&victim).unwrap(), bytes);
    assert!(cmd_decode(
        &d.join("s.toml"),
        &d.join("sh"),
        &d.join("o"),
        None,
        false,
        Exec::default()
    )
    .is_ok());
}

#[test]
fn bad_shards_are_named_and_treated_as_erasures() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    cmd_spec(&vetbr(5, 1, 2, 2), Some(&d.join("s.toml"))).unwrap();
    std::fs::write(d.join("in"), random_bytes(100, 2)).unwrap();
    cmd_encode(
        &d.join("s.toml"),
        &d.join("in"),
        &d.join("sh"),
        Exec::default(),
    )
    .unwrap();
    let sh = d.join("sh");
    let mut b = std::fs::read(shard_path(&sh, 1)).unwrap();
    b[..4].copy_from_slice(b"NOPE");
    std::fs::write(shard_path(&sh, 1), &b).unwrap();
    let dec = cmd_decode(
        &d.join("s.toml"),
        &sh,
        &d.join("o"),
        None,
        false,
        Exec::default(),
    )
    .unwrap();
    assert_eq!(dec.missing, vec![1]);
    assert_eq!(dec.rejected.len(), 1);
    assert!(dec.rejected[0].1.contains("magic"));

    std::fs::remove_file(shard_path(&sh, 0)).unwrap();
    std::fs::remove_file(shard_path(&sh, 3)).unwrap();
    let out = varray(
        d,
        &[
            "decode",
            "--spec",
            "s.toml",
            "--shard-dir",
            "sh",
            "--out",
            "o",
        ],
    );
    assert_eq!(out.status.code(), Some(4));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("insufficient shards"), "{err}");
    assert!(err.contains("shard 1"), "{err}");
}

#[test]
fn exit_codes_are_distinct() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let ok = varray(
        d,
        &[
            "spec", "--family", "gen-rdp", "--p", "7", "--r", "4", "--out", "rdp.toml",
        ],
    );
    assert_eq!(ok.status.code(), Some(0));
    // usage: unknown family, bad flag, guard overflow
    assert_eq!(
        varray(d, &["spec", "--family", "zzz", "--p", "5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(varray(d, &["encode", "--bogus"]).status.code(), Some(2));
    assert_eq!(
        varray(
            d,
            &[
                "verify",
                "--spec",
                "rdp.toml",
                "--mode",
                "exhaustive",
                "--limit",
                "10"
            ]
        )
        .status
        .code(),
        Some(2)
    );
    // io: missing input
    let io = varray(
        d,
        &[
            "encode",
            "--spec",
            "rdp.toml",
            "--input",
            "nope",
            "--out-dir",
            "x",
        ],
    );
    assert_eq!(io.status.code(), Some(3));
    // verification: gen-rdp with r = 4 at p = 7 is not MDS
    let v = varray(d, &["verify", "--spec", "rdp.toml", "--mode", "exhaustive"]);
    assert_eq!(v.status.code(), Some(5));
    assert!(String::from_utf8_lossy(&v.stderr).contains("not MDS"));
    // decode: nothing to decode from
    std::fs::create_dir(d.join("empty")).unwrap();
    let dec = varray(
        d,
        &[
            "decode",
            "--spec",
            "rdp.toml",
            "--shard-dir",
            "empty",
            "--out",
            "o",
        ],
    );
    assert_eq!(dec.status.code(), Some(4));
}

#[test]
fn verify_modes_accept_mds_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    for (name, bp) in [
        ("a.toml", vetbr(5, 1, 3, 3)),
        (
            "b.toml",
            BuildParams {
                n1: Some(1),
                r: None,
                ..params("vand-vesip4", 5, 1, 4)
            },
        ),
        ("c.toml", params("br", 5, 1, 3)),
    ] {
        cmd_spec(&bp, Some(&d.join(name))).unwrap();
        let ex = cmd_verify(
            &d.join(name),
            VerifyMode::Exhaustive,
            1_000_000,
            Exec::default(),
        )
        .unwrap();
        assert!(ex.contains("MDS"), "{ex}");
        cmd_verify(&d.join(name), VerifyMode::Conditions, 0, Exec::default()).unwrap();
    }
    let guard = cmd_verify(
        &d.join("a.toml"),
        VerifyMode::Exhaustive,
        3,
        Exec::default(),
    );
    assert!(matches!(guard, Err(CliError::Usage(_))));
}

#[test]
fn bench_report_has_stable_keys() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(varray(
        d,
        &[
            "spec",
            "--family",
            "vand-vetbr",
            "--p",
            "11",
            "--r",
            "5",
            "--n0",
            "8",
            "--out",
            "v.toml"
        ]
    )
    .status
    .success());
    let out = varray(
        d,
        &[
            "bench", "--spec", "v.toml", "--mode", "fast", "--trials", "2", "--report", "r.json",
        ],
    );
    assert!(out.status.success());
    let v: serde_json::Value =
        serde_json::from_slice(&std::fs::read(d.join("r.json")).unwrap()).unwrap();
    for key in [
        "family",
        "p",
        "tau",
        "r",
        "n",
        "mode",
        "xors_by_phase",
        "total_xors",
        "data_bits",
        "xors_per_data_bit",
        "naive_xors_per_data_bit",
        "theoretical_xors_per_data_bit",
        "encode_mib_per_second",
        "baselines",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    let per_bit = v["xors_per_data_bit"].as_f64().unwrap();
    assert!((per_bit - 3.145).abs() / 3.145 < 0.02, "{per_bit}");
    assert_eq!(v["theoretical_xors_per_data_bit"], 3);

    assert!(varray(
        d,
        &["spec", "--family", "br", "--p", "5", "--r", "2", "--out", "br.toml"]
    )
    .status
    .success());
    let out = varray(
        d,
        &[
            "bench", "--spec", "br.toml", "--mode", "naive", "--report", "b.json",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value =
        serde_json::from_slice(&std::fs::read(d.join("b.json")).unwrap()).unwrap();
    assert!(v["theoretical_xors_per_data_bit"].is_null());
    let tags: Vec<&str> = v["baselines"]
        .as_array()
        .unwrap()
        .iter()
        .map(|b| b["code"].as_str().unwrap())
        .collect();
    assert_eq!(tags, ["br", "gen-rdp"]);
    // fast mode is unsupported for br
    let bad = varray(d, &["bench", "--spec", "br.toml", "--mode", "fast"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn sequential_flag_gives_identical_shards() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(varray(
        d,
        &[
            "spec",
            "--family",
            "vand-vetbr",
            "--p",
            "7",
            "--r",
            "3",
            "--n0",
            "3",
            "--out",
            "s.toml"
        ]
    )
    .status
    .success());
    std::fs::write(d.join("in"), random_bytes(20_000, 5)).unwrap();
    assert!(varray(
        d,
        &[
            "encode",
            "--spec",
            "s.toml",
            "--input",
            "in",
            "--out-dir",
            "par"
        ]
    )
    .status
    .success());
    assert!(varray(
        d,
        &[
            "--sequential",
            "encode",
            "--spec",
            "s.toml",
            "--input",
            "in",
            "--out-dir",
            "seq"
        ]
    )
    .status
    .success());
    for j in 0..8 {
        assert_eq!(
            std::fs::read(shard_path(&d.join("par"), j)).unwrap(),
            std::fs::read(shard_path(&d.join("seq"), j)).unwrap()
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn stripe_split_join_round_trip(
        data_cols in 1usize..12,
        row_size in 1usize..20,
        len in 0usize..300,
        seed in any::<u64>(),
    ) {
        let layout = StripeLayout { data_cols, row_size };
        let bytes = random_bytes(len, seed);
        let stripes = layout.stripe_count(len as u64) as usize;
        let stream = varray_core::BitVec::from_bytes(len * 8, &bytes);
        let mut back = varray_core::BitVec::zeros(stripes * layout.bits_per_stripe());
        for s in 0..stripes {
            let cols = layout.split(&stream, s);
            prop_assert_eq!(cols.len(), data_cols);
            layout.join(&mut back, s, &cols);
        }
        let mut out = back.to_bytes();
        out.truncate(len);
        prop_assert_eq!(out, bytes);
    }

    #[test]
    fn header_round_trip(column in any::<u32>(), len in any::<u64>(), stripes in any::<u64>(), digest in any::<[u8; 32]>()) {
        let h = ShardHeader { version: 1, spec_digest: digest, column, payload_len: len, stripes };
        prop_assert_eq!(ShardHeader::from_bytes(&h.to_bytes()).unwrap(), h);
    }
}
