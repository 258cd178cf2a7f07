use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use polya::cli::cache::Cache;
use polya::numberfield::families::FieldDescriptor;
use proptest::prelude::*;

fn polya(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polya")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("polya-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn with_cache<'a>(path: &'a Path, args: &[&'a str]) -> Vec<&'a str> {
    let mut v = vec!["--cache", path.to_str().unwrap()];
    v.extend_from_slice(args);
    v
}

#[test]
fn field_reports() {
    let o = polya(&["field", "report", "quad:-21"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("| polya group | Z/2 x Z/2 (order 4) |"));

    let o = polya(&["field", "report", "biquad:5,-1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("| polya group | 1 (order 1) |"));

    let o = polya(&["field", "report", "ccubic:x^3-3x-1"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("| polya group | 1 (order 1) |"));
    assert!(s.contains("only one ramified prime"));
}

#[test]
fn compositum_examples() {
    let o = polya(&["compositum", "quad:5", "quad:-1", "--check", "tame-sum"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("| tame-sum | quad:5 * quad:-1 | pass |"));

    let o = polya(&["compositum", "quad:2", "quad:3", "--check", "tame-sum"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("skipped(hypothesis_unmet)"));

    let o = polya(&["compositum", "quad:-1", "ccubic:cond9", "--check", "direct-sum"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("| direct-sum | quad:-1 * ccubic:cond9 | pass |"));
}

#[test]
fn exit_codes() {
    assert_eq!(polya(&["verify", "quadratic", "--dmax", "300"]).status.code(), Some(0));
    assert_eq!(polya(&["verify", "bogus"]).status.code(), Some(2));
    assert_eq!(polya(&["quad", "scan", "--dmin", "2", "--dmax", "60", "--inject-fault", "15"]).status.code(), Some(1));
    assert_eq!(polya(&["--budget", "small", "field", "report", "biquad:-311,-263"]).status.code(), Some(3));
    assert_eq!(polya(&["field", "report", "poly:1,0,0,1"]).status.code(), Some(2));
}

#[test]
fn verify_writes_jsonl() {
    let dir = scratch("verify");
    let out = dir.join("r.jsonl");
    let o = polya(&["verify", "cyclic-cubic", "--check", "order-formula", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let body = std::fs::read_to_string(&out).unwrap();
    assert_eq!(body.lines().count(), 13);
    for line in body.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["check_id"], "order-formula");
        assert_eq!(v["verdict"], "pass");
    }
}

#[test]
fn cache_replay_is_identical() {
    let dir = scratch("replay");
    let cache = dir.join("cache.jsonl");
    let args = ["quad", "scan", "--dmin", "-400", "--dmax", "400"];
    let first = polya(&with_cache(&cache, &args));
    let second = polya(&with_cache(&cache, &args));
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    assert!(String::from_utf8_lossy(&second.stderr).contains("computed 0,"));
    let records = Cache::new(&cache).read_all().unwrap();
    assert_eq!(records.len(), stdout(&first).lines().count() - 2);

    // a fault at render time is not stored
    let faulty = polya(&with_cache(&cache, &["quad", "scan", "--dmin", "-400", "--dmax", "400", "--inject-fault", "-5"]));
    assert_eq!(faulty.status.code(), Some(1));
    let again = polya(&with_cache(&cache, &args));
    assert_eq!(again.stdout, first.stdout);

    let ls = polya(&with_cache(&cache, &["cache", "ls"]));
    assert_eq!(ls.status.code(), Some(0));
    assert!(stdout(&ls).contains("| quad:-5 | 0 | default | -20 | Z/2 | Z/2 | true |"));
}

#[test]
fn corrupt_cache_line_is_reported() {
    let dir = scratch("corrupt");
    let cache = dir.join("cache.jsonl");
    assert_eq!(polya(&with_cache(&cache, &["quad", "scan", "--dmin", "2", "--dmax", "7"])).status.code(), Some(0));
    let mut body = std::fs::read_to_string(&cache).unwrap();
    body.push_str("{\"schema_version\": \"1.0\", \"field_desc\n");
    std::fs::write(&cache, body).unwrap();
    let o = polya(&with_cache(&cache, &["cache", "ls"]));
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 6"), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn concurrent_scans_do_not_interleave() {
    let dir = scratch("concurrent");
    let cache = dir.join("cache.jsonl");
    let path = cache.to_str().unwrap().to_string();
    let children: Vec<_> = (0..4)
        .map(|i| {
            let lo = (-1000 + 500 * i).to_string();
            let hi = (-501 + 500 * i).to_string();
            Command::new(env!("CARGO_BIN_EXE_polya"))
                .args(["--cache", &path, "quad", "scan", "--dmin", &lo, "--dmax", &hi])
                .stdout(std::process::Stdio::null())
                .stderr(std::process::Stdio::null())
                .spawn()
                .unwrap()
        })
        .collect();
    for mut c in children {
        assert!(c.wait().unwrap().success());
    }
    let records = Cache::new(&cache).read_all().unwrap();
    let expected = (-1000i64..=999).filter(|&d| d != 0 && d != 1 && polya::arith::is_squarefree(d)).count();
    assert_eq!(records.len(), expected);
}

fn descriptor() -> impl Strategy<Value = FieldDescriptor> {
    prop_oneof![
        (-5000i64..5000).prop_map(FieldDescriptor::Quad),
        ((-200i64..200), (-200i64..200)).prop_map(|(m, n)| FieldDescriptor::Biquad(m, n)),
        prop::sample::select(vec!["ccubic:cond7", "ccubic:cond9", "ccubic:cond63", "ccubic:x^3-3x-1", "ccubic:x^3+x^2-2x-1"])
            .prop_map(|s| s.parse().unwrap()),
        prop::collection::vec(-50i64..50, 1..6).prop_map(|mut c| {
            c.push(1);
            format!("poly:{}", c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")).parse().unwrap()
        }),
    ]
}

proptest! {
    #[test]
    fn descriptors_round_trip(d in descriptor()) {
        let text = d.to_string();
        let back: FieldDescriptor = text.parse().unwrap();
        prop_assert_eq!(back.to_string(), text);
        prop_assert_eq!(back, d);
    }
}
