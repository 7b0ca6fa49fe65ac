//! End-to-end tests of the binary: file round-trips, determinism of
//! outputs, and exit codes.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_blpack"))
}

fn run(args: &[&str], dir: &Path) -> Output {
    bin()
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn tempdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("blpack-cli-test-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).expect("create temp dir");
    dir
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("reading {name}: {e}"))
}

#[test]
fn generate_pack_analyze_round_trip() {
    let dir = tempdir("roundtrip");
    let out = run(
        &[
            "generate",
            "--construction",
            "localsearch",
            "--k",
            "1",
            "--out",
            "ls.json",
        ],
        &dir,
    );
    assert!(out.status.success(), "{out:?}");

    let out = run(
        &[
            "pack",
            "--instance",
            "ls.json",
            "--ordering",
            "@ls.adversarial.order.json",
            "--out",
            "ls.pack.json",
            "--trace",
            "ls.trace.json",
        ],
        &dir,
    );
    assert!(out.status.success(), "{out:?}");
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("height 6"), "{stdout}");

    let out = run(
        &[
            "analyze",
            "--trace",
            "ls.trace.json",
            "--checks",
            "feasible,bl,pieces,structure,cover,bound",
            "--out",
            "ls.report.json",
        ],
        &dir,
    );
    assert!(out.status.success(), "{out:?}");
    let report = read(&dir, "ls.report.json");
    assert!(report.contains("\"pass\": true"));
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempdir("determinism");
    for name in ["a", "b"] {
        let out = run(
            &[
                "generate",
                "--construction",
                "square65",
                "--eps",
                "1/10",
                "--out",
                &format!("{name}.json"),
            ],
            &dir,
        );
        assert!(out.status.success());
        let out = run(
            &[
                "pack",
                "--instance",
                &format!("{name}.json"),
                "--ordering",
                "identity",
                "--out",
                &format!("{name}.pack.json"),
            ],
            &dir,
        );
        assert!(out.status.success());
        let out = run(
            &[
                "search",
                "--instance",
                &format!("{name}.json"),
                "--mode",
                "sample",
                "--samples",
                "50",
                "--seed",
                "7",
                "--out",
                &format!("{name}.search.json"),
            ],
            &dir,
        );
        assert!(out.status.success());
    }
    assert_eq!(read(&dir, "a.json"), read(&dir, "b.json"));
    assert_eq!(read(&dir, "a.pack.json"), read(&dir, "b.pack.json"));
    assert_eq!(read(&dir, "a.search.json"), read(&dir, "b.search.json"));
}

#[test]
fn corrupted_packing_fails_feasibility_with_exit_one() {
    let dir = tempdir("corrupt");
    assert!(run(
        &[
            "generate",
            "--construction",
            "rect43",
            "--eps",
            "1/100",
            "--out",
            "r.json"
        ],
        &dir
    )
    .status
    .success());
    assert!(run(
        &[
            "pack",
            "--instance",
            "r.json",
            "--ordering",
            "identity",
            "--out",
            "r.pack.json"
        ],
        &dir
    )
    .status
    .success());

    // Overlap two items and fix up the recorded height.
    let text = read(&dir, "r.pack.json");
    let mut packing: serde_json::Value = serde_json::from_str(&text).unwrap();
    packing["placements"][1]["x"] = "0".into();
    packing["placements"][1]["y"] = "0".into();
    let instance = packing["instance"].clone();
    let placements = packing["placements"].clone();
    let rebuilt = serde_json::json!({
        "instance": instance,
        "placements": placements,
        "height": recompute_height(&packing),
    });
    std::fs::write(
        dir.join("bad.pack.json"),
        serde_json::to_string_pretty(&rebuilt).unwrap(),
    )
    .unwrap();

    let out = run(
        &[
            "analyze",
            "--packing",
            "bad.pack.json",
            "--checks",
            "feasible",
            "--out",
            "bad.report.json",
        ],
        &dir,
    );
    assert_eq!(out.status.code(), Some(1), "{out:?}");
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

fn recompute_height(packing: &serde_json::Value) -> String {
    use blpack::rational::Rational;
    use std::str::FromStr;
    let items = packing["instance"]["items"].as_array().unwrap();
    let mut best = Rational::zero();
    for p in packing["placements"].as_array().unwrap() {
        let id = p["id"].as_u64().unwrap() as usize;
        let y = Rational::from_str(p["y"].as_str().unwrap()).unwrap();
        let h = Rational::from_str(items[id]["h"].as_str().unwrap()).unwrap();
        let top = y + h;
        if top > best {
            best = top;
        }
    }
    best.to_string()
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempdir("usage");
    let out = run(
        &["generate", "--construction", "nonsense", "--out", "x.json"],
        &dir,
    );
    assert_eq!(out.status.code(), Some(2), "{out:?}");

    let out = run(
        &[
            "generate",
            "--construction",
            "checkerboard",
            "--m",
            "3",
            "--out",
            "x.json",
        ],
        &dir,
    );
    assert_eq!(out.status.code(), Some(2), "{out:?}");

    let out = run(
        &[
            "generate",
            "--construction",
            "rect43",
            "--eps",
            "1/2",
            "--out",
            "x.json",
        ],
        &dir,
    );
    assert_eq!(out.status.code(), Some(2), "{out:?}");
}

#[test]
fn io_errors_exit_three() {
    let dir = tempdir("io");
    let out = run(
        &[
            "pack",
            "--instance",
            "missing.json",
            "--ordering",
            "identity",
            "--out",
            "x.json",
        ],
        &dir,
    );
    assert_eq!(out.status.code(), Some(3), "{out:?}");
}

#[test]
fn bad_ordering_file_is_an_input_error() {
    let dir = tempdir("ordering");
    assert!(run(
        &[
            "generate",
            "--construction",
            "rect43int",
            "--h",
            "2",
            "--out",
            "r.json"
        ],
        &dir
    )
    .status
    .success());
    std::fs::write(
        dir.join("bad.order.json"),
        "{\"order\": [0, 0, 1, 2, 3, 4, 5]}",
    )
    .unwrap();
    let out = run(
        &[
            "pack",
            "--instance",
            "r.json",
            "--ordering",
            "@bad.order.json",
            "--out",
            "x.json",
        ],
        &dir,
    );
    assert_eq!(out.status.code(), Some(2), "{out:?}");
}

#[test]
fn render_produces_one_rect_per_item() {
    let dir = tempdir("render");
    assert!(run(
        &[
            "generate",
            "--construction",
            "rect43",
            "--eps",
            "1/100",
            "--out",
            "r.json"
        ],
        &dir
    )
    .status
    .success());
    assert!(run(
        &[
            "pack",
            "--instance",
            "r.json",
            "--ordering",
            "identity",
            "--out",
            "r.pack.json"
        ],
        &dir
    )
    .status
    .success());
    assert!(run(
        &["render", "--packing", "r.pack.json", "--out", "r.svg"],
        &dir
    )
    .status
    .success());
    let svg = read(&dir, "r.svg");
    // 7 items plus the strip outline.
    assert_eq!(svg.matches("<rect").count(), 8);
}

#[test]
fn search_modes_run() {
    let dir = tempdir("search");
    assert!(run(
        &[
            "generate",
            "--construction",
            "square65",
            "--eps",
            "1/100",
            "--out",
            "s.json"
        ],
        &dir
    )
    .status
    .success());

    let out = run(
        &[
            "search",
            "--instance",
            "s.json",
            "--mode",
            "exhaustive",
            "--out",
            "ex.json",
        ],
        &dir,
    );
    assert!(out.status.success(), "{out:?}");
    assert!(read(&dir, "ex.json").contains("height 149/25"));

    let out = run(
        &[
            "search",
            "--instance",
            "s.json",
            "--mode",
            "klocal",
            "--k",
            "2",
            "--strategy",
            "best",
            "--max-steps",
            "5",
            "--out",
            "kl.json",
        ],
        &dir,
    );
    assert!(out.status.success(), "{out:?}");
}

#[test]
fn repro_known_red_suite_exits_one() {
    // The large-square suite pins two values the construction cannot
    // attain; the suite must report them and fail honestly.
    let dir = tempdir("red");
    let out = bin()
        .args(["repro", "--suite", "thm-square43", "--out", "red.json"])
        .env("BLPACK_THREADS", "2")
        .current_dir(&dir)
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(1), "{out:?}");
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("FAIL"));
    assert!(
        stdout.contains("100000 sampled orderings floor: pass"),
        "{stdout}"
    );
}

#[test]
fn full_pipeline_on_the_composite_construction() {
    // Generate, pack, and run every structural check on the full
    // checkerboard + reset + pattern-row construction at its smallest size.
    let dir = tempdir("pipeline");
    assert!(run(
        &["generate", "--construction", "tenthirds", "--n", "2", "--out", "tt.json"],
        &dir
    )
    .status
    .success());
    assert!(run(
        &[
            "pack",
            "--instance",
            "tt.json",
            "--ordering",
            "@tt.adversarial.order.json",
            "--out",
            "tt.pack.json",
            "--trace",
            "tt.trace.json",
        ],
        &dir
    )
    .status
    .success());
    let out = run(
        &[
            "analyze",
            "--trace",
            "tt.trace.json",
            "--checks",
            "feasible,bl,pieces,structure,cover,bound",
            "--out",
            "tt.report.json",
        ],
        &dir,
    );
    assert!(out.status.success(), "{out:?}");
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("pieces: pass"), "{stdout}");
    assert!(!stdout.contains("FAIL"), "{stdout}");
}
