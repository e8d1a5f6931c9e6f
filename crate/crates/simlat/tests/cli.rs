//! End-to-end tests of the command-line binary: the promised behavior of
//! each subcommand, the exit-code contract, JSON stability, and witness
//! round-trips through the `verify` subcommand.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_simlat"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn payload(out: &Output) -> Value {
    let v: Value = serde_json::from_str(stdout(out).trim()).expect("json output");
    v["payload"].clone()
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn fixture(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests");
    p.push("fixtures");
    p.push(name);
    format!("file:{}", p.display())
}

fn temp_path(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("simlat-cli-{}-{}", std::process::id(), name));
    p
}

#[test]
fn check_subcommand_examples() {
    let out = run(&["check", "--lattice", "E6", "--norm", "2", "--json"]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(payload(&out)["verdict"], "fails");

    let out = run(&["check", "--lattice", "Z2", "--norm", "1", "--json"]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(payload(&out)["verdict"], "passes-sufficient");

    let out = run(&["check", "--lattice", &fixture("diag14.gram"), "--norm", "2", "--json"]);
    assert_eq!(exit_code(&out), 0);
    let p = payload(&out);
    assert_eq!(p["verdict"], "passes-necessary");
    assert_eq!(p["symbols"][0][0], "2");
    assert_eq!(p["symbols"][0][1], 1);
}

#[test]
fn search_subcommand_examples() {
    // Norm 5 on the 4-dimensional root lattice: a witness exists and
    // re-verifies when fed back through the verify subcommand.
    let out = run(&["search", "--lattice", "A4", "--norm", "5", "--json"]);
    assert_eq!(exit_code(&out), 0);
    let p = payload(&out);
    assert_eq!(p["status"], "found");
    assert_eq!(p["index"], "25");
    let flat: Vec<String> = p["witness"]
        .as_array()
        .expect("witness array")
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect();
    assert_eq!(flat.len(), 16);
    let rows: Vec<String> = flat.chunks(4).map(|row| row.join(" ")).collect();
    let wfile = temp_path("a4-witness.txt");
    std::fs::write(&wfile, rows.join("\n")).unwrap();
    let wref = wfile.display().to_string();
    let out = run(&["verify", "--lattice", "A4", "--norm", "5", "--witness", &wref, "--json"]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(payload(&out)["valid"], true);

    // A corrupted witness still answers (exit 0) but is invalid.
    std::fs::write(&wfile, "1 0 0 0 0 1 0 0 0 0 1 0 0 0 0 1").unwrap();
    let out = run(&["verify", "--lattice", "A4", "--norm", "5", "--witness", &wref, "--json"]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(payload(&out)["valid"], false);
    std::fs::remove_file(&wfile).ok();

    // Norm 3 is not in the spectrum: answered "none" with exit 0.
    let out = run(&["search", "--lattice", "A4", "--norm", "3", "--json"]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(payload(&out)["status"], "none");

    // Norm 1 returns the identity.
    let out = run(&["search", "--lattice", "Z2", "--norm", "1", "--json"]);
    assert_eq!(exit_code(&out), 0);
    let p = payload(&out);
    assert_eq!(p["status"], "found");
    let flat: Vec<&str> = p["witness"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    assert_eq!(flat, ["1", "0", "0", "1"]);
}

#[test]
fn search_all_lists_every_witness() {
    let out = run(&[
        "search", "--lattice", "Z2", "--norm", "2", "--all", "--limit", "100", "--json",
    ]);
    assert_eq!(exit_code(&out), 0);
    let p = payload(&out);
    assert_eq!(p["status"], "found");
    assert_eq!(p["exhausted"], true);
    assert_eq!(p["witnesses"].as_array().unwrap().len(), 4);

    // The cap cuts the stream and reports the list as incomplete.
    let out = run(&[
        "search", "--lattice", "Z2", "--norm", "2", "--all", "--limit", "2", "--json",
    ]);
    let p = payload(&out);
    assert_eq!(p["exhausted"], false);
    assert_eq!(p["witnesses"].as_array().unwrap().len(), 2);
}

#[test]
fn spectrum_subcommand_examples() {
    let out = run(&["spectrum", "--lattice", "Z2", "--max", "1", "--json"]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(payload(&out)["norms"], serde_json::json!([1]));

    let out = run(&[
        "spectrum", "--lattice", "A2", "--max", "20", "--method", "closed-form", "--json",
    ]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(
        payload(&out)["norms"],
        serde_json::json!([1, 3, 4, 7, 9, 12, 13, 16, 19])
    );

    // Both methods agree where both apply.
    let search = run(&["spectrum", "--lattice", "A2", "--max", "15", "--json"]);
    let closed = run(&[
        "spectrum", "--lattice", "A2", "--max", "15", "--method", "closed-form", "--json",
    ]);
    assert_eq!(payload(&search)["norms"], payload(&closed)["norms"]);
}

#[test]
fn construct_subcommand_examples() {
    let out = run(&["construct", "--lattice", "Leech", "--norm", "2", "--json"]);
    assert_eq!(exit_code(&out), 0);
    let p = payload(&out);
    assert_eq!(p["dimension"], 24);
    assert_eq!(p["index"], "4096");
    assert_eq!(p["norm"], "2");

    let out = run(&["construct", "--lattice", "K12", "--norm", "7", "--json"]);
    assert_eq!(exit_code(&out), 0);
    let p = payload(&out);
    assert_eq!(p["index"], "117649");
    assert!(p["multiplier"].as_str().unwrap().contains('j'));

    let out = run(&["construct", "--lattice", "A2", "--r", "2", "--s", "1", "--json"]);
    assert_eq!(exit_code(&out), 0);
    let p = payload(&out);
    assert_eq!(p["norm"], "3");
    assert_eq!(p["index"], "3");

    // A constructed witness survives the verify subcommand.
    let out = run(&["construct", "--lattice", "E8", "--norm", "6", "--json"]);
    assert_eq!(exit_code(&out), 0);
    let p = payload(&out);
    let flat: Vec<String> = p["matrix"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect();
    assert_eq!(flat.len(), 64);
    let rows: Vec<String> = flat.chunks(8).map(|row| row.join(" ")).collect();
    let wfile = temp_path("e8-witness.txt");
    std::fs::write(&wfile, rows.join("\n")).unwrap();
    let wref = wfile.display().to_string();
    let out = run(&["verify", "--lattice", "E8", "--norm", "6", "--witness", &wref, "--json"]);
    assert_eq!(payload(&out)["valid"], true);
    std::fs::remove_file(&wfile).ok();

    // Circulant coefficients on the 4-dimensional target.
    let out = run(&[
        "construct", "--lattice", "A4", "--a1", "0", "--a2", "0", "--a3", "1", "--a4", "0",
        "--json",
    ]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(payload(&out)["norm"], "1");
    let out = run(&[
        "construct", "--lattice", "A4", "--a1", "1", "--a2", "1", "--a3", "0", "--a4", "0",
        "--json",
    ]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(payload(&out)["status"], "none");

    // Norm-driven constructions answer honestly when no multiplier exists.
    let out = run(&["construct", "--lattice", "Z3", "--norm", "5", "--json"]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(payload(&out)["status"], "none");
    let out = run(&["construct", "--lattice", "Z6", "--norm", "3", "--json"]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(payload(&out)["status"], "none");
    let out = run(&["construct", "--lattice", "Z6", "--norm", "5", "--json"]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(payload(&out)["index"], "125");
}

#[test]
fn clean_subcommand_examples() {
    let out = run(&[
        "clean", "--family", "hex", "--N", "3", "--a", "3", "--b", "1", "--json",
    ]);
    assert_eq!(exit_code(&out), 0);
    let p = payload(&out);
    assert_eq!(p["predicate"], true);
    assert_eq!(p["oracle"], true);
    assert_eq!(p["agree"], true);
    assert_eq!(p["norm"], "7");

    let out = run(&[
        "clean", "--family", "rect", "--N", "1", "--a", "1", "--b", "1", "--json",
    ]);
    assert_eq!(exit_code(&out), 0);
    let p = payload(&out);
    assert_eq!(p["predicate"], false);
    assert_eq!(p["oracle"], false);
    assert_eq!(p["agree"], true);

    // Hexagonal-type parameters must be 3 mod 4.
    let out = run(&["clean", "--family", "hex", "--N", "4", "--a", "1", "--b", "0"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn clean_spectrum_example() {
    let out = run(&[
        "clean-spectrum", "--family", "hex", "--N", "3", "--max", "100", "--json",
    ]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(
        payload(&out)["indices"],
        serde_json::json!([1, 7, 13, 19, 31, 37, 43, 49, 61, 67, 73, 79, 91, 97])
    );
}

#[test]
fn catalog_subcommands() {
    let out = run(&["catalog", "list", "--json"]);
    assert_eq!(exit_code(&out), 0);
    let names: Vec<String> = payload(&out)["names"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect();
    for expected in ["Z1", "Z24", "A2", "A4", "D4", "D24+", "E6", "E8", "K12", "BW16", "Leech"] {
        assert!(names.contains(&expected.to_string()), "missing {expected}");
    }

    let out = run(&["catalog", "show", "E8", "--json"]);
    assert_eq!(exit_code(&out), 0);
    let p = payload(&out);
    assert_eq!(p["dimension"], 8);
    assert_eq!(p["determinant"], "1");
    assert_eq!(p["unigeneric"], true);

    let out = run(&["catalog", "show", "Q99"]);
    assert_eq!(exit_code(&out), 2);

    // Export writes the Gram file format and round-trips through file:.
    let gfile = temp_path("a4-export.gram");
    let gref = gfile.display().to_string();
    let out = run(&["catalog", "export", "A4", &gref, "--json"]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(payload(&out)["round_trip"], true);
    let text = std::fs::read_to_string(&gfile).unwrap();
    assert!(text.starts_with("4\n"));
    let fileref = format!("file:{}", gref);
    let direct = run(&["spectrum", "--lattice", "A4", "--max", "11", "--json"]);
    let loaded = run(&["spectrum", "--lattice", &fileref, "--max", "11", "--json"]);
    assert_eq!(payload(&direct)["norms"], payload(&loaded)["norms"]);
    std::fs::remove_file(&gfile).ok();
}

#[test]
fn exit_codes_separate_answers_from_failures() {
    // Unknown lattice and malformed input: exit 2.
    assert_eq!(exit_code(&run(&["check", "--lattice", "Q99", "--norm", "2"])), 2);
    assert_eq!(exit_code(&run(&["check", "--lattice", "Z2", "--norm", "0"])), 2);
    assert_eq!(exit_code(&run(&["check", "--lattice", "Z2", "--norm", "-3"])), 2);
    assert_eq!(
        exit_code(&run(&["search", "--lattice", "Z2", "--norm", "x/y"])),
        2
    );
    assert_eq!(
        exit_code(&run(&["construct", "--lattice", "A4", "--norm", "5"])),
        2
    );
    assert_eq!(
        exit_code(&run(&["construct", "--lattice", "A2", "--r", "1"])),
        2
    );

    // Budget exhaustion: exit 3, reported as its own status.
    let out = run(&["search", "--lattice", "E6", "--norm", "2", "--budget", "100", "--json"]);
    assert_eq!(exit_code(&out), 3);
    assert_eq!(payload(&out)["status"], "budget-exceeded");
    let out = run(&["spectrum", "--lattice", "A2", "--max", "20", "--budget", "50"]);
    assert_eq!(exit_code(&out), 3);

    // Negative answers are answers: exit 0.
    let out = run(&["search", "--lattice", "Z2", "--norm", "3", "--json"]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(payload(&out)["status"], "none");
}

#[test]
fn json_output_is_byte_stable_and_key_sorted() {
    let args = [
        vec!["check", "--lattice", "E6", "--norm", "2", "--json"],
        vec!["search", "--lattice", "A4", "--norm", "5", "--json"],
        vec!["spectrum", "--lattice", "A2", "--max", "12", "--json"],
        vec!["construct", "--lattice", "K12", "--norm", "7", "--json"],
        vec!["clean", "--family", "hex", "--N", "7", "--a", "2", "--b", "1", "--json"],
        vec!["catalog", "show", "D8", "--json"],
    ];
    for a in &args {
        let first = run(a);
        let second = run(a);
        assert_eq!(exit_code(&first), exit_code(&second));
        assert_eq!(
            stdout(&first),
            stdout(&second),
            "output of {:?} is not byte-identical",
            a
        );
        // Key order in every object is sorted: re-serializing the parsed
        // value through the same writer reproduces the bytes.
        let parsed: Value = serde_json::from_str(stdout(&first).trim()).unwrap();
        assert_eq!(serde_json::to_string(&parsed).unwrap(), stdout(&first).trim());
    }
}
