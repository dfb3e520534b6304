use std::path::Path;
use std::process::{Command, Output};

use sympair::linalg::CodeMatrix;
use sympair::pairmetric::{certify_parity_check, Condition};
use sympair::FieldSpec;
use sympair_cli::{construct, verify, CodeFile};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_sympair"));
    c.env_remove("SYMPAIR_GF_TABLE");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn construct_to(dir: &Path, name: &str, q: u32, n: usize, d: usize) -> std::path::PathBuf {
    let path = dir.join(name);
    let o = run(&[
        "construct",
        "--q",
        &q.to_string(),
        "--n",
        &n.to_string(),
        "--dpair",
        &d.to_string(),
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    path
}

#[test]
fn construct_writes_golden_h5_13() {
    let dir = tempfile::tempdir().unwrap();
    let path = construct_to(dir.path(), "h.json", 5, 13, 5);
    let file = CodeFile::from_json(&std::fs::read_to_string(path).unwrap()).unwrap();
    let expect: Vec<Vec<u32>> = vec![
        vec![0, 1, 1, 1, 1, 1, 0, 1, 1, 1, 1, 1, 0],
        vec![1, 4, 0, 1, 2, 3, 1, 3, 4, 0, 1, 2, 0],
        vec![3, 0, 4, 0, 3, 3, 1, 2, 4, 3, 4, 2, 1],
    ];
    assert_eq!(file.construction.as_str(), "d5");
    assert_eq!(file.parity_check, expect);
    assert_eq!((file.k, file.d_pair), (10, 5));
}

#[test]
fn out_of_range_names_bound() {
    let o = run(&["construct", "--q", "3", "--n", "14", "--dpair", "5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("exceeds q^2+q+1"), "{}", stderr(&o));

    let o = run(&["construct", "--q", "4", "--n", "18", "--dpair", "6"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("exceeds q^2+1"));

    let o = run(&["construct", "--q", "11", "--n", "16", "--dpair", "8"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("N(q)-3"));

    let o = run(&["construct", "--q", "6", "--n", "7", "--dpair", "5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("prime power"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["construct", "--q", "5"]).status.code(), Some(2));
    assert_eq!(
        run(&["construct", "--q", "5", "--n", "7", "--dpair", "5", "--format", "xml"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["verify", "/nonexistent/file.json"]).status.code(), Some(2));
    assert_eq!(run(&["table", "--q", "6", "--dpair", "5"]).status.code(), Some(2));
    assert_eq!(run(&["ec-search", "--q", "2048"]).status.code(), Some(2));
    assert_eq!(run(&["ec-search", "--q", "10"]).status.code(), Some(2));
}

#[test]
fn round_trip_every_family() {
    let dir = tempfile::tempdir().unwrap();
    for (i, &(q, n, d)) in [
        (2, 6, 5),
        (4, 21, 5),
        (7, 30, 6),
        (8, 20, 6),
        (11, 15, 12),
        (13, 18, 9),
        (13, 12, 8),
    ]
    .iter()
    .enumerate()
    {
        let path = construct_to(dir.path(), &format!("c{i}.json"), q, n, d);
        let o = run(&["verify", "--oracle", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "q={q} n={n} d={d}: {}", stdout(&o));
        assert!(stdout(&o).contains("verified"));
    }
}

#[test]
fn construction_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for (q, n, d) in [(9, 50, 6), (13, 17, 10)] {
        let a = construct_to(dir.path(), "a.json", q, n, d);
        let first = std::fs::read(&a).unwrap();
        let b = construct_to(dir.path(), "b.json", q, n, d);
        assert_eq!(first, std::fs::read(b).unwrap());
    }
}

#[test]
fn oracle_runs_on_small_codes() {
    let dir = tempfile::tempdir().unwrap();
    let path = construct_to(dir.path(), "s.json", 3, 9, 5);
    let o = run(&["verify", "--oracle", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("brute-force pair distance 5"));
}

/// Copies one entry so that a column becomes equal to another column at
/// cyclic distance at least 3, keeping every 3-window independent.
#[test]
fn duplicated_column_fails_condition_one() {
    let mut file = construct(5, 13, 5, &Default::default()).unwrap();
    let f = FieldSpec::of_order(5).unwrap();
    let n = file.n;
    let col = |m: &Vec<Vec<u32>>, j: usize| -> Vec<u32> { m.iter().map(|r| r[j]).collect() };
    let mut chosen = None;
    'search: for j in 0..n {
        for m in 0..n {
            let dist = (j + n - m) % n;
            if dist.min(n - dist) < 3 {
                continue;
            }
            let (cj, cm) = (col(&file.parity_check, j), col(&file.parity_check, m));
            let diff: Vec<usize> = (0..3).filter(|&r| cj[r] != cm[r]).collect();
            if diff.len() != 1 {
                continue;
            }
            let mut grid = file.parity_check.clone();
            grid[diff[0]][j] = cm[diff[0]];
            let h = CodeMatrix::from_codes(&f, &grid).unwrap();
            let c = certify_parity_check(&h).unwrap();
            if c.failure.as_ref().map(|v| v.condition) == Some(Condition::SmallSubsets) {
                chosen = Some((grid, j.min(m), j.max(m)));
                break 'search;
            }
        }
    }
    let (grid, lo, hi) = chosen.expect("some single-entry corruption duplicates a column");
    file.parity_check = grid;
    let v = verify(&file, false, 0).unwrap();
    let fail = v.failure.expect("corruption is caught");
    assert_eq!(fail.condition, Condition::SmallSubsets);
    assert_eq!(fail.witness, vec![lo, hi]);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, file.to_json()).unwrap();
    let o = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("small-subsets-independent"), "{out}");
    assert!(out.contains(&format!("[{lo}, {hi}]")), "{out}");
}

#[test]
fn corrupted_ec_window_fails() {
    let dir = tempfile::tempdir().unwrap();
    let path = construct_to(dir.path(), "e.json", 11, 15, 9);
    let mut text = std::fs::read_to_string(&path).unwrap();
    let mut file = CodeFile::from_json(&text).unwrap();
    // a zero column makes every window through it dependent
    for row in file.parity_check.iter_mut() {
        row[4] = 0;
    }
    text = file.to_json();
    std::fs::write(&path, text).unwrap();
    let o = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAILED"));
}

#[test]
fn malformed_files_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = construct_to(dir.path(), "t.json", 5, 10, 5);
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::write(&path, &text[..text.len() / 2]).unwrap();
    assert_eq!(run(&["verify", path.to_str().unwrap()]).status.code(), Some(2));

    let mut file = CodeFile::from_json(&text).unwrap();
    file.parity_check[0][0] = 5;
    std::fs::write(&path, file.to_json()).unwrap();
    let o = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not below q"));

    let mut file = CodeFile::from_json(&text).unwrap();
    file.parity_check.pop();
    std::fs::write(&path, file.to_json()).unwrap();
    assert_eq!(run(&["verify", path.to_str().unwrap()]).status.code(), Some(2));

    let mut file = CodeFile::from_json(&text).unwrap();
    file.modulus = vec![1, 2];
    std::fs::write(&path, file.to_json()).unwrap();
    assert_eq!(run(&["verify", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn table_rows() {
    let o = run(&["table", "--q", "3", "--dpair", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "q,n,d_pair,k,route,verified,millis");
    assert_eq!(lines.len(), 10);
    for (i, l) in lines[1..].iter().enumerate() {
        let cols: Vec<&str> = l.split(',').collect();
        assert_eq!(cols[1], (5 + i).to_string());
        assert_eq!(cols[5], "true");
    }

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let o = run(&["table", "--q", "4", "--dpair", "6", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(path).unwrap();
    let ns: Vec<usize> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(ns, (6..=17).collect::<Vec<_>>());
}

#[test]
fn table_q11_large_distance_all_verified() {
    for d in 7..=15 {
        let o = run(&["table", "--q", "11", "--dpair", &d.to_string()]);
        assert_eq!(o.status.code(), Some(0), "d = {d}");
        let out = stdout(&o);
        assert_eq!(out.lines().count(), 1 + 15 - d + 1);
        assert!(out.lines().skip(1).all(|l| l.split(',').nth(5) == Some("true")));
    }
}

#[test]
fn ec_search_reports_maximal_count() {
    for (q, count) in [(5, 10), (8, 14), (9, 16), (16, 25)] {
        let o = run(&["ec-search", "--q", &q.to_string()]);
        assert_eq!(o.status.code(), Some(0));
        let out = stdout(&o);
        assert!(out.contains(&format!("points: {count}")), "{out}");
        assert!(out.contains(&format!("n_max: {count}")));
    }
}

#[test]
fn table_override_changes_modulus() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("table.txt");
    // x^3 + x^2 + 1 instead of the default x^3 + x + 1
    std::fs::write(&table, "# p a c0 .. ca\n2 3 1 0 1 1\n").unwrap();
    let out = dir.path().join("g.json");
    let o = bin()
        .env("SYMPAIR_GF_TABLE", &table)
        .args([
            "construct",
            "--q",
            "8",
            "--n",
            "40",
            "--dpair",
            "5",
            "--out",
            out.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let file = CodeFile::from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(file.modulus, vec![1, 0, 1, 1]);
    assert_eq!(run(&["verify", out.to_str().unwrap()]).status.code(), Some(0));

    let o = bin()
        .env("SYMPAIR_GF_TABLE", &table)
        .args(["construct", "--q", "9", "--n", "40", "--dpair", "5"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unsupported field"));

    let o = bin()
        .env("SYMPAIR_GF_TABLE", dir.path().join("missing.txt"))
        .args(["construct", "--q", "8", "--n", "40", "--dpair", "5"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
