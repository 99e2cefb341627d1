//! End-to-end tests driving the compiled binary. Exit codes and the
//! JSON schema are the contract under test; human text is only checked
//! where its wording is load-bearing (bare numbers, verdict lines).

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_covertool"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn code_of(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_str(&stdout_of(out)).expect("stdout is one JSON object")
}

fn fixture(name: &str, contents: &str) -> PathBuf {
    let path = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).expect("fixture written");
    path
}

const ERDOS_COVER: &str = "0 mod 2\n0 mod 3\n1 mod 4\n5 mod 6\n7 mod 12\n";

#[test]
fn verify_accepts_the_five_class_cover_with_all_methods() {
    let file = fixture("five.cover", ERDOS_COVER);
    let out = run(&["verify", "--m", "1", file.to_str().unwrap()]);
    assert_eq!(code_of(&out), 0);
    let text = stdout_of(&out);
    for line in ["naive-period: 1-cover", "s-window: 1-cover", "erdos-2k: 1-cover"] {
        assert!(text.contains(line), "missing `{line}` in:\n{text}");
    }
    assert!(text.contains("verdict: 1-cover"));
}

#[test]
fn verify_refutes_a_single_class_and_names_a_witness() {
    let file = fixture("half.cover", "1 mod 2\n");
    let out = run(&["--json", "verify", file.to_str().unwrap()]);
    assert_eq!(code_of(&out), 1);
    let v = json_of(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["is_cover"], false);
    assert_eq!(v["witness"], "0");
    assert_eq!(v["agree"], true);
}

#[test]
fn verify_json_output_is_identical_across_runs() {
    let file = fixture("roundtrip.cover", ERDOS_COVER);
    let args = [
        "--json",
        "verify",
        "--spot-check",
        "8",
        "--seed",
        "42",
        file.to_str().unwrap(),
    ];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(code_of(&first), 0);
    assert_eq!(stdout_of(&first), stdout_of(&second));
    let v = json_of(&first);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["spot_checks"]["all_agree"], true);
    assert_eq!(v["results"].as_array().map(Vec::len), Some(3));
}

#[test]
fn verify_exact_mode_certifies_a_partition() {
    let file = fixture("partition.cover", "0 mod 2\n1 mod 4\n3 mod 4\n");
    let out = run(&["verify", "--exact", "--m", "1", file.to_str().unwrap()]);
    assert_eq!(code_of(&out), 0);
    let text = stdout_of(&out);
    assert!(text.contains("verdict: exact 1-cover"), "got:\n{text}");
    // The 1..2^k line is inapplicable in exact mode but must not fail it.
    assert!(text.contains("erdos-2k: skipped"));
}

#[test]
fn verify_spot_check_in_json_mode_demands_a_seed() {
    let file = fixture("seedless.cover", ERDOS_COVER);
    let out = run(&["--json", "verify", "--spot-check", "3", file.to_str().unwrap()]);
    assert_eq!(code_of(&out), 2);
}

#[test]
fn verify_rejects_explicit_erdos_method_for_multiplicity_two() {
    let file = fixture("m2.cover", "0 mod 2\n1 mod 2\n0 mod 3\n1 mod 3\n2 mod 3\n");
    let out = run(&["verify", "--m", "2", "--method", "erdos", file.to_str().unwrap()]);
    assert_eq!(code_of(&out), 2);
}

#[test]
fn verify_rejects_a_missing_file() {
    let out = run(&["verify", "/nonexistent/never.cover"]);
    assert_eq!(code_of(&out), 2);
}

#[test]
fn analyze_reports_disjointness_of_a_partition() {
    let file = fixture("analyze.cover", "0 mod 2\n1 mod 4\n3 mod 4\n");
    let out = run(&["--json", "analyze", file.to_str().unwrap()]);
    assert_eq!(code_of(&out), 0);
    let v = json_of(&out);
    assert_eq!(v["is_disjoint_cover"], true);
    assert_eq!(v["top_two_equal"], true);
    assert_eq!(v["reciprocal_sum_is_one"], true);
}

#[test]
fn analyze_flags_a_non_cover() {
    let file = fixture("analyze_bad.cover", "0 mod 3\n");
    let out = run(&["analyze", file.to_str().unwrap()]);
    assert_eq!(code_of(&out), 1);
}

#[test]
fn search_finds_covers_from_a_workable_pool() {
    let out = run(&["--json", "search", "--pool", "2,3,4,6,12", "--k-max", "5", "--distinct"]);
    assert_eq!(code_of(&out), 0);
    let v = json_of(&out);
    assert_eq!(v["complete"], true);
    assert!(v["count"].as_u64().unwrap() > 0);
}

#[test]
fn search_reports_emptiness_of_a_deficient_pool() {
    // 1/3 + 1/5 < 1, so no cover exists; the search still completes.
    let out = run(&["--json", "search", "--pool", "3,5"]);
    assert_eq!(code_of(&out), 1);
    let v = json_of(&out);
    assert_eq!(v["complete"], true);
    assert_eq!(v["count"], 0);
}

#[test]
fn search_signals_budget_exhaustion() {
    let out = run(&["search", "--pool", "6,10,15", "--budget", "5"]);
    assert_eq!(code_of(&out), 3);
}

#[test]
fn davenport_prints_the_bare_constant() {
    let out = run(&["davenport", "Z3xZ3"]);
    assert_eq!(code_of(&out), 0);
    assert_eq!(stdout_of(&out).trim(), "5");
}

#[test]
fn davenport_json_carries_the_closed_form_for_p_groups() {
    let out = run(&["--json", "davenport", "Z2xZ4"]);
    assert_eq!(code_of(&out), 0);
    let v = json_of(&out);
    assert_eq!(v["davenport"], 5);
    assert_eq!(v["olson_formula"], 5);
}

#[test]
fn davenport_exhausts_on_a_starved_budget() {
    let out = run(&["davenport", "Z3xZ3", "--budget", "1"]);
    assert_eq!(code_of(&out), 3);
}

#[test]
fn f_of_the_classic_highly_composite_modulus() {
    let out = run(&["f", "720720"]);
    assert_eq!(code_of(&out), 0);
    assert_eq!(stdout_of(&out).trim(), "40");
}

#[test]
fn egz_finds_a_length_n_zero_sum_in_a_long_sequence() {
    let out = run(&["--json", "egz", "Z4", "0,1,3,2,0,1,3"]);
    assert_eq!(code_of(&out), 0);
    let v = json_of(&out);
    assert_eq!(v["witness"].as_array().map(Vec::len), Some(4));
}

#[test]
fn egz_reports_absence_below_the_guarantee_length() {
    // n-1 zeros and n-1 ones: the extremal witness-free sequence.
    let out = run(&["egz", "Z2", "0,1"]);
    assert_eq!(code_of(&out), 1);
}

#[test]
fn zerosum_bridge_extracts_a_reciprocal_sum_subset() {
    let file = fixture("bridge.cover", "0 mod 1\n0 mod 1\n0 mod 1\n");
    let out = run(&[
        "--json",
        "zerosum-bridge",
        file.to_str().unwrap(),
        "--group",
        "Z2",
        "--multipliers",
        "0,1,1",
    ]);
    assert_eq!(code_of(&out), 0);
    let v = json_of(&out);
    assert_eq!(v["q"], 2);
    assert_eq!(v["witness"], serde_json::json!([1, 2]));
}

#[test]
fn zerosum_bridge_rejects_wrong_multiplicities() {
    let file = fixture("bridge_bad.cover", "0 mod 2\n1 mod 2\n");
    let out = run(&[
        "zerosum-bridge",
        file.to_str().unwrap(),
        "--group",
        "Z2",
        "--multipliers",
        "0,1",
    ]);
    assert_eq!(code_of(&out), 2);
}

#[test]
fn sumset_prints_the_sum_of_two_sets() {
    let out = run(&["--json", "sumset", "Z7", "--a", "{1,2}", "--b", "{0,3}"]);
    assert_eq!(code_of(&out), 0);
    let v = json_of(&out);
    assert_eq!(v["operation"], "sumset");
    assert_eq!(v["size"], 4); // {1,2,4,5}
}

#[test]
fn sumset_checks_the_prime_order_lower_bound() {
    let out = run(&["sumset", "Z7", "--a", "{1,2,4}", "--b", "{0,1}", "--check", "cd"]);
    assert_eq!(code_of(&out), 0);
}

#[test]
fn sumset_checks_the_restricted_bound_and_kneser() {
    let dsh = run(&["sumset", "Z7", "--a", "{1,2,4}", "--n", "2", "--check", "dsh"]);
    assert_eq!(code_of(&dsh), 0);
    let kneser = run(&[
        "--json",
        "sumset",
        "Z2xZ4",
        "--a",
        "{(0,0),(1,0)}",
        "--b",
        "{(0,1),(1,1)}",
        "--check",
        "kneser",
    ]);
    assert_eq!(code_of(&kneser), 0);
    let v = json_of(&kneser);
    assert_eq!(v["identity_holds"], true);
    assert_eq!(v["corollary_holds"], true);
}

#[test]
fn snevily_numbers_subsets_of_an_odd_cyclic_group() {
    let out = run(&["--json", "snevily", "Z5", "--a", "{0,1}", "--b", "{2,4}"]);
    assert_eq!(code_of(&out), 0);
    let v = json_of(&out);
    assert_eq!(v["found"], true);
    assert_eq!(v["a_order"].as_array().map(Vec::len), Some(2));
}

#[test]
fn snevily_fails_on_the_full_even_order_group() {
    let out = run(&["snevily", "Z2", "--a", "{0,1}", "--b", "{0,1}"]);
    assert_eq!(code_of(&out), 1);
}

#[test]
fn hall_numbers_a_zero_sum_list_and_rejects_a_nonzero_sum() {
    let good = run(&["--json", "hall", "Z2xZ2", "(0,0),(1,0),(0,1),(1,1)"]);
    assert_eq!(code_of(&good), 0);
    assert_eq!(json_of(&good)["permutation"].as_array().map(Vec::len), Some(4));
    let bad = run(&["hall", "Z2", "0,1"]);
    assert_eq!(code_of(&bad), 1);
}

#[test]
fn coset_minimal_check_accepts_a_two_coset_partition() {
    let file = fixture("z4.coset", "group Z4\n0 + <2>\n1 + <2>\n");
    let out = run(&[
        "--json",
        "coset",
        "--system",
        file.to_str().unwrap(),
        "--check",
        "minimal",
    ]);
    assert_eq!(code_of(&out), 0);
    let v = json_of(&out);
    assert_eq!(v["all_hold"], true);
    assert_eq!(v["k"], 2);
    assert_eq!(v["intersection_index"], 2);
    assert!(v["bounds"]["korec_count"]["holds"].as_bool().unwrap());
}

#[test]
fn coset_uniform_cover_checks_pass_on_a_partition() {
    let file = fixture("z22.coset", "group Z2xZ2\n(0,0) + <(1,0)>\n(0,1) + <(1,0)>\n");
    for check in ["herzog-schonheim", "index-divisibility"] {
        let out = run(&["coset", "--system", file.to_str().unwrap(), "--check", check]);
        assert_eq!(code_of(&out), 0, "check {check}");
    }
    let union = run(&[
        "coset",
        "--system",
        file.to_str().unwrap(),
        "--check",
        "union-count",
        "--subgroup",
        "(1,0)",
    ]);
    assert_eq!(code_of(&union), 0);
}

#[test]
fn coset_irredundant_check_bounds_a_partition_member() {
    let file = fixture("z4irr.coset", "group Z4\n0 + <2>\n1 + <2>\n");
    let out = run(&[
        "coset",
        "--system",
        file.to_str().unwrap(),
        "--check",
        "irredundant",
        "--t",
        "0",
    ]);
    assert_eq!(code_of(&out), 0);
}

#[test]
fn coset_scan_completes_cleanly_over_a_small_scope() {
    let file = fixture("scan.scope", "max_order = 6\nmax_k = 3\nmax_m = 1\n");
    let out = run(&["--json", "coset", "--conjecture-scan", file.to_str().unwrap()]);
    assert_eq!(code_of(&out), 0);
    let v = json_of(&out);
    assert_eq!(v["complete"], true);
    assert_eq!(v["counterexample_count"], 0);
    assert_eq!(v["families"].as_array().map(Vec::len), Some(4));
    assert_eq!(v["scan"]["max_order"], 6);
}

#[test]
fn coset_scan_signals_exhaustion_on_a_tiny_budget() {
    let file = fixture("starved.scope", "max_order = 6\nnode_budget = 2\n");
    let out = run(&["coset", "--conjecture-scan", file.to_str().unwrap()]);
    assert_eq!(code_of(&out), 3);
}

#[test]
fn coset_rejects_contradictory_flags() {
    let sys = fixture("flags.coset", "group Z4\n0 + <2>\n1 + <2>\n");
    let scope = fixture("flags.scope", "max_order = 4\n");
    let out = run(&[
        "coset",
        "--system",
        sys.to_str().unwrap(),
        "--check",
        "minimal",
        "--conjecture-scan",
        scope.to_str().unwrap(),
    ]);
    assert_eq!(code_of(&out), 2);
}

#[test]
fn thread_cap_is_honored() {
    let file = fixture("threads.scope", "max_order = 6\n");
    let out = bin()
        .env("COVERTOOL_THREADS", "1")
        .args(["coset", "--conjecture-scan", file.to_str().unwrap()])
        .output()
        .expect("binary runs");
    assert_eq!(code_of(&out), 0);
    let bad = bin()
        .env("COVERTOOL_THREADS", "zero")
        .args(["f", "6"])
        .output()
        .expect("binary runs");
    assert_eq!(code_of(&bad), 2);
}

#[test]
fn group_parse_errors_exit_with_usage_code() {
    let out = run(&["davenport", "Q8"]);
    assert_eq!(code_of(&out), 2);
}

#[test]
fn json_payloads_never_carry_timing_fields() {
    let file = fixture("notime.cover", ERDOS_COVER);
    let out = run(&["--json", "verify", file.to_str().unwrap()]);
    let text = stdout_of(&out);
    for banned in ["time", "duration", "elapsed"] {
        assert!(!text.contains(banned), "timing field `{banned}` in {text}");
    }
}
