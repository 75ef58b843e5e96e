use std::process::Command;

use superschur::liealg::{rho_rs, DEFAULT_MAX_AMBIENT};
use superschur::superlinalg::SuperDim;
use superschur_cli::cache::MatrixCache;
use superschur_cli::{
    run_sweep, Check, Point, PointContext, SkipReason, Status, SweepConfig, VerificationReport,
};

fn config(checks: &[Check]) -> SweepConfig {
    SweepConfig {
        checks: checks.iter().copied().collect(),
        samples: 5,
        ..SweepConfig::default()
    }
}

fn run(cfg: &SweepConfig, p: Point, check: Check) -> superschur_cli::Entry {
    PointContext::new(p, cfg, None).run(check)
}

#[test]
fn cached_matrices_match_recomputation() {
    let dir = tempfile::tempdir().unwrap();
    let cache = MatrixCache::new(dir.path()).unwrap();
    let cfg = config(&[]);
    let p = Point::new(2, 1, 1, 1);
    let first = PointContext::new(p, &cfg, Some(&cache));
    let computed = first.reps().unwrap().clone();
    let brauer = first.brauer().unwrap().basis().to_vec();
    assert!(cache
        .path(&superschur_cli::cache::CacheKey {
            kind: superschur_cli::cache::Kind::Rho,
            m: 2,
            n: 1,
            r: 1,
            s: 1
        })
        .exists());
    let second = PointContext::new(p, &cfg, Some(&cache));
    let loaded = second.reps().unwrap();
    assert_eq!(loaded.matrices, computed.matrices);
    assert_eq!(
        loaded.matrices,
        rho_rs(SuperDim::new(2, 1), 1, 1, DEFAULT_MAX_AMBIENT)
            .unwrap()
            .matrices
    );
    assert_eq!(second.brauer().unwrap().basis(), &brauer[..]);
}

#[test]
fn corrupt_cache_is_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let cache = MatrixCache::new(dir.path()).unwrap();
    let cfg = config(&[]);
    let p = Point::new(1, 1, 1, 0);
    PointContext::new(p, &cfg, Some(&cache)).reps().unwrap();
    let path = dir.path().join("rho_1_1_1_0.txt");
    std::fs::write(
        &path,
        "superschur-cache v1\nkind rho\nparams 1 1 1 0\nsize 2\nmatrices 9\n",
    )
    .unwrap();
    let reps = PointContext::new(p, &cfg, Some(&cache))
        .reps()
        .unwrap()
        .clone();
    assert_eq!(
        reps.matrices,
        rho_rs(SuperDim::new(1, 1), 1, 0, DEFAULT_MAX_AMBIENT)
            .unwrap()
            .matrices
    );
}

#[test]
fn dims_examples() {
    let cfg = config(&[Check::Dims]);
    let e = run(&cfg, Point::new(1, 1, 1, 0), Check::Dims);
    assert_eq!(e.status, Status::Pass);
    assert_eq!(
        (e.value_u64("bidegree_dim"), e.value_u64("image_dim")),
        (Some(4), Some(4))
    );
    for (m, n) in [(1, 0), (2, 1), (0, 2)] {
        let e = run(&cfg, Point::new(m, n, 0, 0), Check::Dims);
        assert_eq!(
            (e.status, e.value_u64("image_dim")),
            (Status::Pass, Some(1))
        );
    }
    let e = run(&cfg, Point::new(3, 1, 1, 1), Check::Dims);
    assert_eq!(
        (e.status, e.value_u64("image_dim")),
        (Status::Pass, Some(226))
    );
}

#[test]
fn ring_examples() {
    let cfg = config(&[Check::VerifyRing]);
    for (m, n) in [(1, 1), (2, 1), (1, 0)] {
        let e = superschur_cli::checks::run_verify_ring(&cfg, m, n);
        assert_eq!(e.status, Status::Pass, "{e:?}");
        assert_eq!(e.value_bool("cramer"), Some(true));
        assert_eq!(e.value_u64("ber_times_star_is_one"), Some(5));
    }
    let e = superschur_cli::checks::run_verify_ring(&cfg, 3, 2);
    assert_eq!(
        (e.status, e.skip),
        (Status::Skipped, Some(SkipReason::Resource))
    );
}

#[test]
fn schur_weyl_and_semisimple_examples() {
    let cfg = config(&[]);
    let e = run(&cfg, Point::new(3, 1, 1, 1), Check::SchurWeyl);
    assert_eq!(e.status, Status::Pass);
    assert_eq!(
        (e.value_u64("image_dim"), e.value_u64("brauer_dim")),
        (Some(226), Some(2))
    );
    let e = run(&cfg, Point::new(2, 0, 1, 1), Check::SchurWeyl);
    assert_eq!(
        (e.status, e.value_u64("image_dim")),
        (Status::Pass, Some(10))
    );
    let e = run(&cfg, Point::new(1, 1, 1, 1), Check::SchurWeyl);
    assert_eq!(e.status, Status::Recorded);
    let e = run(&cfg, Point::new(1, 2, 1, 1), Check::SchurWeyl);
    assert_eq!(e.skip, Some(SkipReason::Precondition));

    let e = run(&cfg, Point::new(3, 1, 1, 1), Check::Semisimple);
    assert_eq!(
        (e.status, e.value_u64("radical_dim")),
        (Status::Pass, Some(0))
    );
    let e = run(&cfg, Point::new(1, 1, 1, 1), Check::Semisimple);
    assert_eq!(e.status, Status::Recorded);
    assert!(e.value_u64("radical_dim").unwrap() > 0);
}

#[test]
fn bipartition_examples() {
    let mut cfg = config(&[]);
    let e = run(&cfg, Point::new(3, 1, 1, 1), Check::Bipartitions);
    assert_eq!(e.status, Status::Pass);
    assert_eq!(
        (
            e.value_u64("exact_count"),
            e.value_u64("contracted_count"),
            e.value_u64("center_dim")
        ),
        (Some(1), Some(2), Some(2))
    );
    assert!(e
        .message
        .as_deref()
        .unwrap()
        .contains("exact-mode count 1 differs from block count 2"));
    let e = run(&cfg, Point::new(2, 1, 0, 0), Check::Bipartitions);
    assert_eq!(
        (e.value_u64("contracted_count"), e.value_u64("center_dim")),
        (Some(1), Some(1))
    );
    cfg.mode = superschur::combinatorics::CrossMode::Exact;
    let e = run(&cfg, Point::new(3, 1, 1, 1), Check::Bipartitions);
    assert_eq!(e.status, Status::Fail);
}

#[test]
fn sweeps_are_deterministic() {
    let mut cfg = config(&[
        Check::Dims,
        Check::SchurWeyl,
        Check::Semisimple,
        Check::Bipartitions,
        Check::VerifyRing,
    ]);
    cfg.m = vec![1, 2, 3];
    cfg.n = vec![0, 1];
    cfg.r = vec![0, 1];
    cfg.s = vec![1];
    let strip = |r: &VerificationReport| {
        r.entries
            .iter()
            .map(|e| (e.check, e.point_label(), e.status, e.values.clone()))
            .collect::<Vec<_>>()
    };
    let a = run_sweep(&cfg).unwrap();
    let b = run_sweep(&cfg).unwrap();
    assert_eq!(strip(&a), strip(&b));
    assert_eq!(VerificationReport::from_jsonl(&a.to_jsonl()).unwrap(), a);
    assert_eq!(a.summary().fail, 0);
    // 6 (m|n) pairs for the ring checks, 12 points for the other four
    assert_eq!(a.entries.len(), 6 + 4 * 12);
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_superschur"))
}

#[test]
fn binary_exit_codes() {
    let status = |args: &[&str]| bin().args(args).output().unwrap().status.code();
    assert_eq!(
        status(&["dims", "--m", "1", "--n", "1", "--r", "1", "--s", "0"]),
        Some(0)
    );
    assert_eq!(
        status(&[
            "bipartitions",
            "--m",
            "3",
            "--n",
            "1",
            "--r",
            "1",
            "--s",
            "1",
            "--mode",
            "exact"
        ]),
        Some(1)
    );
    assert_eq!(status(&["dims", "--m", "nope"]), Some(2));
    assert_eq!(
        status(&["dims", "--m", "4", "--n", "1", "--r", "1", "--s", "1", "--strict"]),
        Some(3)
    );
    assert_eq!(
        status(&["dims", "--m", "4", "--n", "1", "--r", "1", "--s", "1"]),
        Some(0)
    );
}

#[test]
fn report_writes_files_and_config_is_honoured() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("sweep.conf");
    std::fs::write(
        &config,
        "m = 2\nn = 0-1\nr = 1\ns = 0..=1\nchecks = dims,bipartitions\n",
    )
    .unwrap();
    let out = dir.path().join("out");
    let output = bin()
        .args([
            "report",
            "--config",
            config.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
            "--format",
            "jsonl",
        ])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
    let printed =
        VerificationReport::from_jsonl(std::str::from_utf8(&output.stdout).unwrap()).unwrap();
    assert_eq!(printed.entries.len(), 2 * 4);
    let saved =
        VerificationReport::from_jsonl(&std::fs::read_to_string(out.join("report.jsonl")).unwrap())
            .unwrap();
    assert_eq!(saved, printed);
    let csv = std::fs::read_to_string(out.join("dims.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 4);
    assert!(std::fs::read_to_string(out.join("report.txt"))
        .unwrap()
        .contains("bipartitions"));
}
