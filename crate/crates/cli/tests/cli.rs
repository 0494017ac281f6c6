use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coarsemap")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn hom_defect_profile_is_zero() {
    let o = run(&["defect-profile", "--map", "hom{a->ab,b->b}", "--group", "free:2", "--radius", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("kind,radius,set_size,max_norm,mode"));
    let rows: Vec<_> = lines.collect();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r.split(',').nth(3) == Some("0")), "{text}");
}

#[test]
fn relator_violation_exits_with_one() {
    let o = run(&["pol2-check", "--map", "floor_quad{1,3}", "--radius", "5"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["ok"], false);
    assert_eq!(v["witnesses"]["triple"].as_array().unwrap().len(), 3);
}

#[test]
fn configuration_errors_exit_with_two() {
    for args in [
        &["defect-profile", "--map", "hom{a->", "--group", "free:2"][..],
        &["defect-profile", "--map", "id", "--group", "free:2", "--dmax", "2"],
        &["qsg-witness", "--map", "id", "--group", "free:2", "--radius", "3", "--search", "4"],
        &["zquad", "--a", "a", "--b", "b"],
        &["normality-check", "--map", "id", "--group", "prod(free:2,z)"],
        &["defect-profile", "--map", "id", "--group", "table:/nonexistent/table.txt"],
        &["no-such-command"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn expectations_and_bounds() {
    let base = ["pi-probe", "--map", "id", "--group", "free:2", "--c", "a", "--radius", "4"];
    let grow = [&base[..], &["--expect", "growing"]].concat();
    assert_eq!(run(&grow).status.code(), Some(0));
    let flat = [&base[..], &["--expect", "plateau"]].concat();
    let o = run(&flat);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("violation:"));

    let q = ["qsg-witness", "--map", "brooks{ab}", "--group", "free:2", "--radius", "2", "--search", "6"];
    assert_eq!(run(&[&q[..], &["--bound", "1"]].concat()).status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&run(&q).stdout).unwrap();
    assert!(v["results"]["square_cover"]["worst_witness_norm"].as_u64().unwrap() <= 1);
}

#[test]
fn poly_degree_and_zquad() {
    let o = run(&["poly-degree", "--map", "floor_quad{1,3}", "--dmax", "3", "--expect", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["results"]["verdict"], 2);

    let o = run(&["zquad", "--a", "a", "--b", "b", "--n", "-1"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["results"]["value"], "AbAA");
    assert_eq!(run(&["zquad", "--a", "a", "--b", "b", "--window", "2"]).status.code(), Some(1));
    assert_eq!(run(&["zquad", "--a", "a", "--b", "aa", "--identity"]).status.code(), Some(0));
    assert_eq!(
        run(&["zquad", "--target", "zpow:2", "--a", "[1,0]", "--b", "[0,1]", "--window", "3"]).status.code(),
        Some(0)
    );
}

#[test]
fn normality_reports() {
    let o = run(&["normality-check", "--map", "compose{floor_scale{1,2},monomial{2}}", "--radius", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["normality-check", "--map", "zquad{a=a,b=b}", "--target", "free:2", "--len", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["results"]["q1"], "fail");
}

#[test]
fn identical_inputs_give_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.json");
    let outputs: Vec<Vec<u8>> = (0..2)
        .map(|_| {
            let o = run(&[
                "a-profile",
                "--map",
                "random{seed=3,domR=3,tgtR=2}",
                "--group",
                "free:2",
                "--radius",
                "4",
                "--budget",
                "20000",
                "--format",
                "json",
                "--out",
                path.to_str().unwrap(),
            ]);
            assert_eq!(o.status.code(), Some(0));
            std::fs::read(&path).unwrap()
        })
        .collect();
    assert_eq!(outputs[0], outputs[1]);
    let v: serde_json::Value = serde_json::from_slice(&outputs[0]).unwrap();
    assert_eq!(v["mode"], "sampled");
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.json");
    std::fs::write(&cfg, r#"{"map": "brooks{ab}", "group": "free:2", "radius": 2, "format": "json"}"#).unwrap();
    let o = run(&["middle-profile", "--config", cfg.to_str().unwrap(), "--radius", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["config"]["radius"], 3);
    assert_eq!(v["results"]["profiles"][0]["rows"].as_array().unwrap().len(), 3);

    std::fs::write(&cfg, r#"{"map": "id", "radious": 2}"#).unwrap();
    assert_eq!(run(&["middle-profile", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn table_groups_load_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c3.txt");
    write_cyclic_table(&path, 3);
    let spec = format!("table:{}", path.display());
    let o = run(&["defect-profile", "--map", "random{seed=1,domR=1,tgtR=1}", "--group", &spec, "--radius", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = stdout(&o).lines().count();
    assert_eq!(rows, 4);
}

fn write_cyclic_table(path: &Path, n: usize) {
    let mut text = format!("{n}\n");
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| ((i + j) % n).to_string()).collect();
        text.push_str(&row.join(" "));
        text.push('\n');
    }
    text.push_str("1\n");
    std::fs::write(path, text).unwrap();
}
