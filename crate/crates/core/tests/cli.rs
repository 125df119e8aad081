mod common;

use std::process::{Command, Output};

use common::*;
use ldpc_parsim::cli::{ber_from_csv, run_scale, BerRow, ScaleReport, ScenarioSpec};
use tempfile::tempdir;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ldpc-parsim"))
        .args(args)
        .env_remove("LDPC_PARSIM_THREADS")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn fixture() -> String {
    data_path("regular_504_3_6.alist").display().to_string()
}

#[test]
fn scale_default_sweep() {
    let text = stdout(&bin(&["scale", "--matrix", &fixture()]));
    let rows = ScaleReport::rows_from_csv(&text).unwrap();
    assert_eq!(rows.len(), 7);
    assert_eq!(text.lines().nth(1).unwrap().split(',').nth(4), Some("-"));
    let best = rows.iter().filter(|r| r.speedup.is_some()).max_by(|a, b| a.speedup.unwrap().total_cmp(&b.speedup.unwrap()));
    assert_eq!(best.unwrap().processors, 5);
    assert!(rows.iter().all(|r| r.iterations == Some(30)));
}

#[test]
fn scale_csv_round_trips() {
    let h = regular_504();
    let spec = ScenarioSpec { processors: vec![1, 3, 6, 10], ..Default::default() };
    let report = run_scale(&h, &spec).unwrap();
    let csv = report.to_csv().unwrap();
    let back = ScaleReport::rows_from_csv(&csv).unwrap();
    assert_eq!(back.len(), 4);
    for (a, b) in report.rows.iter().zip(&back) {
        assert_eq!((a.scenario, a.processors, a.iterations), (b.scenario, b.processors, b.iterations));
        assert_eq!(&a.skipped, &b.skipped);
        for (x, y) in [(a.throughput_kbps, b.throughput_kbps), (a.speedup, b.speedup)] {
            assert_eq!(x.is_some(), y.is_some());
            if let (Some(x), Some(y)) = (x, y) {
                assert!((x - y).abs() < 1e-6);
            }
        }
    }
    assert_eq!(ScaleReport::rows_from_csv(&ScaleReport { rows: back.clone(), ..report }.to_csv().unwrap()).unwrap(), back);
}

#[test]
fn non_divisible_scenario_is_skipped() {
    let text = stdout(&bin(&["scale", "--matrix", &fixture(), "--processors", "6"]));
    let rows = ScaleReport::rows_from_csv(&text).unwrap();
    assert_eq!(rows.len(), 1);
    assert!(rows[0].skipped.as_deref().unwrap().contains("5 slaves"));
}

#[test]
fn single_processor_prints_dash() {
    let text = stdout(&bin(&["scale", "--matrix", &fixture(), "--processors", "1"]));
    assert_eq!(text.lines().nth(1).unwrap().split(',').nth(4), Some("-"));
}

#[test]
fn scale_json_and_out_file() {
    let dir = tempdir().unwrap();
    let out = dir.path().join("scale.json");
    stdout(&bin(&["scale", "--matrix", &fixture(), "--format", "json", "--out", out.to_str().unwrap()]));
    let report: ScaleReport = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(report.rows.len(), 7);
    assert_eq!((report.n, report.m), (504, 252));
}

#[test]
fn threads_mode_respects_cap() {
    let o = Command::new(env!("CARGO_BIN_EXE_ldpc-parsim"))
        .args(["scale", "--mode", "threads", "--reps", "2", "--processors", "1,3,5", "--matrix", &fixture()])
        .env("LDPC_PARSIM_THREADS", "2")
        .output()
        .unwrap();
    let rows = ScaleReport::rows_from_csv(&stdout(&o)).unwrap();
    assert!(rows[1].skipped.is_none());
    assert!(rows[2].skipped.as_deref().unwrap().contains("LDPC_PARSIM_THREADS"));
}

#[test]
fn decode_high_snr() {
    let text = stdout(&bin(&["decode", "--matrix", &fixture(), "--ebno", "6", "--seed", "9"]));
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["converged"], true);
    assert_eq!(v["bits_hex"].as_str().unwrap().trim_matches('0'), "");
}

#[test]
fn decode_forced_iterations() {
    let text = stdout(&bin(&["decode", "--matrix", &fixture(), "--ebno", "2", "--max-iter", "30", "--no-early-exit"]));
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["iterations_used"], 30);
}

#[test]
fn decode_llr_file() {
    let dir = tempdir().unwrap();
    let llr = dir.path().join("prior.txt");
    std::fs::write(&llr, "4\n-4\n4\n-4\n4\n-4\n-0.5\n").unwrap();
    let h = data_path("hamming_7_4.alist");
    let text = stdout(&bin(&["decode", "--matrix", h.to_str().unwrap(), "--llr", llr.to_str().unwrap()]));
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["converged"], true);
    // codeword 0101010, last bit recovered; x0 is the top bit of 0x54
    assert_eq!(v["bits_hex"], "54");
}

#[test]
fn malformed_matrix_fails_with_path() {
    let dir = tempdir().unwrap();
    let bad = dir.path().join("bad.alist");
    std::fs::write(&bad, "2 1\n1 2\n1 1\n2\n1\n3\n1 2\n").unwrap();
    let o = bin(&["decode", "--matrix", bad.to_str().unwrap(), "--ebno", "3"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("bad.alist") && err.contains("alist"), "{err}");
}

#[test]
fn missing_file_is_a_runtime_error() {
    let o = bin(&["decode", "--matrix", "/nonexistent/h.alist", "--ebno", "3"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn invalid_arguments_exit_2() {
    for args in [
        &["gen", "--n", "5", "--wc", "3", "--wr", "4"][..],
        &["scale", "--processors", "0"],
        &["scale", "--mode", "bogus"],
        &["ber", "--min-bits", "100"],
        &["decode"],
        &["decode", "--ebno", "3", "--fixed", "8"],
    ] {
        assert_eq!(bin(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn gen_is_deterministic_and_matches_fixture() {
    let dir = tempdir().unwrap();
    let a = dir.path().join("a.alist");
    let b = dir.path().join("b.alist");
    for p in [&a, &b] {
        stdout(&bin(&["gen", "--n", "504", "--wc", "3", "--wr", "6", "--seed", "1", "--out", p.to_str().unwrap()]));
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    assert_eq!(text, read_data("regular_504_3_6.alist"));
}

#[test]
fn ber_csv() {
    let text = stdout(&bin(&["ber", "--matrix", &fixture(), "--ebno", "0,3", "--min-bits", "20000", "--seed", "4"]));
    assert!(text.starts_with("ebno_db,bits,errors,ber,avg_iters\n"));
    let rows: Vec<BerRow> = ber_from_csv(&text).unwrap();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r.bits >= 20000));
    assert!(rows[1].ber < rows[0].ber);
    let again = stdout(&bin(&["ber", "--matrix", &fixture(), "--ebno", "0,3", "--min-bits", "20000", "--seed", "4"]));
    assert_eq!(text, again);
}

#[test]
fn config_file_overrides_costs() {
    let dir = tempdir().unwrap();
    let cfg = dir.path().join("sim.toml");
    std::fs::write(&cfg, "[cost_model]\ncycles_packet_fixed = 0\ncycles_per_hop = 0\n").unwrap();
    let text = stdout(&bin(&["scale", "--matrix", &fixture(), "--config", cfg.to_str().unwrap()]));
    let rows = ScaleReport::rows_from_csv(&text).unwrap();
    // free communication: more slaves is never slower
    let s: Vec<f64> = rows.iter().skip(1).map(|r| r.speedup.unwrap()).collect();
    assert!(s.windows(2).all(|w| w[1] >= w[0]), "{s:?}");

    std::fs::write(&cfg, "[cost_model]\nunknown_key = 1\n").unwrap();
    let o = bin(&["scale", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("sim.toml"));
}

#[test]
fn calibrate_output_loads_as_config() {
    let dir = tempdir().unwrap();
    let out = dir.path().join("cal.toml");
    stdout(&bin(&["calibrate", "--matrix", &fixture(), "--out", out.to_str().unwrap()]));
    let text = std::fs::read_to_string(&out).unwrap();
    let cfg = ldpc_parsim::parsim::SimConfig::from_toml(&text).unwrap();
    assert_eq!(cfg.cost_model, ldpc_parsim::parsim::CostModel::default());
}
