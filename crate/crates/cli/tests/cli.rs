use std::fs;
use std::path::Path;
use std::process::Command;

fn dmea(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_dmea")).args(args).output().unwrap()
}

fn json_files(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.ends_with(".json") && n != "config.json")
        .collect();
    names.sort();
    names
}

#[test]
fn list_problems_shows_all_eight() {
    let out = dmea(&["list-problems"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["SixHumpCamel", "Eggholder", "Branin", "Ackley2", "Rosenbrock2", "BraninForrester", "Alpine1", "Hartmann6"] {
        assert!(text.contains(name), "{name} missing");
    }
}

#[test]
fn run_writes_records_csv_and_config() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rs");
    let o = out.to_str().unwrap();
    let args = ["run", "--problem", "branin", "--algorithm", "random-search", "--iters", "3", "--reps", "2", "--seed", "4", "--jobs", "2", "--out", o];
    assert!(dmea(&args).status.success());
    assert_eq!(json_files(&out).len(), 2);
    let csv = fs::read_to_string(out.join("results.csv")).unwrap();
    assert!(csv.starts_with("problem,algorithm,k,eta,select_mode,seed,final_regret,wall_time"));
    assert_eq!(csv.lines().count(), 3);
    let config: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("config.json")).unwrap()).unwrap();
    assert_eq!(config["n_init"], 21);
    assert_eq!(config["seeds"], serde_json::json!([4, 5]));
    assert_eq!(config["total_evaluations"], 33);

    let first = fs::read(out.join(&json_files(&out)[0])).unwrap();
    let again = dir.path().join("again");
    let args2: Vec<&str> = args.iter().map(|a| if *a == o { again.to_str().unwrap() } else { a }).collect();
    assert!(dmea(&args2).status.success());
    assert_eq!(fs::read(again.join(&json_files(&again)[0])).unwrap(), first);

    let rep = dir.path().join("rep");
    let r = dmea(&["report", o, "--out", rep.to_str().unwrap()]);
    assert!(r.status.success());
    let conv = fs::read_to_string(rep.join("convergence.csv")).unwrap();
    assert_eq!(conv.lines().count(), 1 + 4);
    assert!(rep.join("summary.json").exists());
}

#[test]
fn compare_two_directories() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for (alg, path, iters) in [("random-search", &a, "6"), ("random-search", &b, "0")] {
        let args = ["run", "--algorithm", alg, "--iters", iters, "--reps", "6", "--out", path.to_str().unwrap()];
        assert!(dmea(&args).status.success());
    }
    let out = dmea(&["compare", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let line = text.lines().nth(1).unwrap();
    assert!(line.starts_with("Branin,4,6,"), "{line}");
}

#[test]
fn bad_names_fail() {
    assert!(!dmea(&["run", "--problem", "nowhere", "--reps", "1"]).status.success());
    assert!(!dmea(&["run", "--algorithm", "qei", "--reps", "1"]).status.success());
    assert!(!dmea(&["run", "--select", "best", "--reps", "1"]).status.success());
}
