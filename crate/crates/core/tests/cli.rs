mod common;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use common::{fixture, read_fixture};

fn ftopsis(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ftopsis"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

struct Scratch(PathBuf);

impl Scratch {
    fn new(tag: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("ftopsis-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        Scratch(dir)
    }

    fn write(&self, name: &str, text: &str) -> PathBuf {
        let p = self.0.join(name);
        std::fs::write(&p, text).unwrap();
        p
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

#[test]
fn validate_reports_counts() {
    let out = ftopsis(&[
        "validate",
        "--config",
        path(&fixture("small_study.config")),
        "--ratings",
        path(&fixture("small_ratings.csv")),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("K=3 m=2 n=1"));
}

#[test]
fn validate_lists_missing_ratings() {
    let scratch = Scratch::new("missing");
    let ratings: Vec<String> = read_fixture("small_ratings.csv")
        .lines()
        .filter(|l| *l != "e2,beta,impact,very high")
        .map(String::from)
        .collect();
    let ratings = scratch.write("ratings.csv", &(ratings.join("\n") + "\n"));
    let out = ftopsis(&[
        "validate",
        "--config",
        path(&fixture("small_study.config")),
        "--ratings",
        path(&ratings),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("(e2, beta, impact)"), "{}", stderr(&out));
}

#[test]
fn validate_reports_every_problem() {
    let scratch = Scratch::new("many");
    let ratings = scratch.write(
        "ratings.csv",
        "expert,alternative,criterion,term\ne1,alpha,impact,weak\ne1,gamma,impact,high\ne2,alpha,impact,bogus\n",
    );
    let out = ftopsis(&[
        "validate",
        "--config",
        path(&fixture("small_study.config")),
        "--ratings",
        path(&ratings),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("gamma"), "{err}");
    assert!(err.contains("bogus"), "{err}");
    assert!(err.contains("(e1, beta, impact)"), "{err}");
}

#[test]
fn unreadable_input_is_an_io_error() {
    let out = ftopsis(&["rank", "--matrix", "/nonexistent/ratings.matrix"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(ftopsis(&["rank"]).status.code(), Some(2));
    let m = fixture("risk_factors.matrix");
    assert_eq!(ftopsis(&["rank", "--matrix", path(&m), "--precision", "13"]).status.code(), Some(2));
    assert_eq!(ftopsis(&["rank", "--matrix", path(&m), "--tie-epsilon", "-1"]).status.code(), Some(2));
}

#[test]
fn factor_ranking_from_matrix() {
    let out = ftopsis(&["rank", "--matrix", path(&fixture("risk_factors.matrix"))]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let line = text
        .lines()
        .find(|l| l.starts_with("Financial capability"))
        .unwrap();
    let cols: Vec<&str> = line.split_whitespace().collect();
    assert_eq!(&cols[cols.len() - 4..], ["0.403", "0.659", "0.621", "1"]);
}

#[test]
fn category_ranking_order() {
    let out = ftopsis(&["rank", "--matrix", path(&fixture("risk_categories.matrix")), "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let names: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(names.first(), Some(&"financial risk"));
    assert_eq!(names.last(), Some(&"Environment risk"));
    assert_eq!(text, read_fixture("golden/categories_rank.csv"));
}

#[test]
fn json_keeps_requested_precision() {
    let out = ftopsis(&[
        "rank",
        "--matrix",
        path(&fixture("risk_factors.matrix")),
        "--format",
        "json",
        "--precision",
        "6",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 30);
    let top = &rows[0];
    assert_eq!(top["alternative"], "Financial capability");
    let cc = top["cc"].as_f64().unwrap();
    assert_eq!(format!("{cc:.6}").parse::<f64>().unwrap(), cc);
    assert!((cc - 0.620).abs() < 0.002);
    assert_eq!(v["ideal_strategy"], "paper-fixed");
}

#[test]
fn rollup_needs_categories() {
    let out = ftopsis(&[
        "rollup",
        "--config",
        path(&fixture("small_study.config")),
        "--ratings",
        path(&fixture("small_ratings.csv")),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("no categories"));

    let out = ftopsis(&["rollup", "--matrix", path(&fixture("risk_factors.matrix"))]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn single_category_ranks_first() {
    let scratch = Scratch::new("onecat");
    let config = read_fixture("small_study.config")
        + "\n[[categories]]\nid = \"everything\"\nmembers = [\"alpha\", \"beta\"]\n";
    let config = scratch.write("study.config", &config);
    let out = ftopsis(&[
        "rollup",
        "--config",
        path(&config),
        "--ratings",
        path(&fixture("small_ratings.csv")),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    let row = text.lines().find(|l| l.starts_with("everything")).unwrap();
    assert!(row.ends_with(" 1"));
}

#[test]
fn rollup_prints_category_notes() {
    let out = ftopsis(&[
        "rollup",
        "--config",
        path(&fixture("risk_study.config")),
        "--matrix",
        path(&fixture("risk_factors.matrix")),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("note [Market risk]:"));
}

#[test]
fn rounding_before_rank_groups_displayed_ties() {
    let m = fixture("risk_factors.matrix");
    let rank_of = |args: &[&str], name: &str| -> usize {
        let text = stdout(&ftopsis(args));
        let line = text.lines().find(|l| l.starts_with(name)).unwrap();
        line.split_whitespace().last().unwrap().parse().unwrap()
    };
    let full = ["rank", "--matrix", path(&m)];
    let rounded = ["rank", "--matrix", path(&m), "--round-before-rank", "--precision", "2"];
    let pair = ["Quality and experience of managers", "Potential rival effect"];
    assert_ne!(rank_of(&full, pair[0]), rank_of(&full, pair[1]));
    assert_eq!(rank_of(&rounded, pair[0]), rank_of(&rounded, pair[1]));
    let text = stdout(&ftopsis(&rounded));
    assert!(text.contains("ranked on closeness rounded to 2 decimals"));
}

#[test]
fn displayed_ties_share_a_rank() {
    let m = fixture("risk_factors.matrix");
    let text = stdout(&ftopsis(&["rank", "--matrix", path(&m), "--round-before-rank", "--precision", "3"]));
    let rows: Vec<(String, usize)> = text
        .lines()
        .skip_while(|l| !l.starts_with("alternative"))
        .skip(1)
        .map(|l| {
            let cols: Vec<&str> = l.split_whitespace().collect();
            (cols[cols.len() - 2].to_string(), cols[cols.len() - 1].parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 30);
    let mut shared = 0;
    for (i, (cc_i, rank_i)) in rows.iter().enumerate() {
        for (cc_j, rank_j) in &rows[i + 1..] {
            assert_eq!(cc_i == cc_j, rank_i == rank_j, "{cc_i} {rank_i} vs {cc_j} {rank_j}");
            shared += usize::from(cc_i == cc_j);
        }
    }
    assert!(shared > 0);
}

#[test]
fn small_study_golden_table() {
    let out = ftopsis(&[
        "rank",
        "--config",
        path(&fixture("small_study.config")),
        "--ratings",
        path(&fixture("small_ratings.csv")),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), read_fixture("golden/small_rank.txt"));
}

#[test]
fn computation_failure_exits_3() {
    let scratch = Scratch::new("cost");
    let m = scratch.write(
        "cost.matrix",
        "criterion,price,cost\nalternative,a,b,c\np,0,1,2\nq,1,2,3\n",
    );
    let out = ftopsis(&["rank", "--matrix", path(&m)]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn scales_prints_default_terms() {
    let out = ftopsis(&["scales"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("very low   (1, 1, 3)"), "{text}");
    assert!(text.contains("very high  (7, 9, 9)"));
}

#[test]
fn canonicalize_sorts_experts() {
    let scratch = Scratch::new("canon");
    let mut lines: Vec<&str> = Vec::new();
    let original = read_fixture("small_ratings.csv");
    lines.push(original.lines().next().unwrap());
    lines.extend(original.lines().rev().take_while(|l| !l.starts_with("expert,")));
    let shuffled = scratch.write("ratings.csv", &(lines.join("\r\n") + "\r\n"));
    let config = fixture("small_study.config");
    let canon = |r: &Path| stdout(&ftopsis(&["canonicalize", "--config", path(&config), "--ratings", path(r)]));
    assert_eq!(canon(&shuffled), canon(&fixture("small_ratings.csv")));
    assert!(canon(&shuffled).starts_with("expert,alternative,criterion,term\ne1,alpha,impact,weak\n"));
}
