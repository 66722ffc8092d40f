use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const TWEETS: &str = r#"{"id":"t1","text":"omg the storm is here","timestamp":900,"retweets":3,"quotes":0,"replies":1}
{"id":"t2","text":"storm clouds over the bay","timestamp":500,"retweets":0,"quotes":0,"replies":0}
not json at all
{"id":"t3","text":"sunny day at the beach","timestamp":950,"retweets":9,"quotes":1,"replies":2}
"#;

const DOCS: &str = r#"{"id":"d1","title":"Storms","body":"Coastal storm surge floods low towns. Emergency crews evacuate residents."}
{"id":"d2","title":"Beach","body":"Sunny beach weather draws tourists. Lifeguards watch swimmers. Sand is warm."}
"#;

const TOPICS: &str = r#"{"name":"weather","keywords":["storm","sunny","weather"]}
"#;

fn duoret(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_duoret"))
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

struct Fixture {
    _dir: tempfile::TempDir,
    root: PathBuf,
}

impl Fixture {
    fn new() -> Self {
        let dir = tempfile::tempdir().unwrap();
        let root = dir.path().to_path_buf();
        fs::write(root.join("tweets.jsonl"), TWEETS).unwrap();
        fs::write(root.join("docs.jsonl"), DOCS).unwrap();
        fs::write(root.join("topics.jsonl"), TOPICS).unwrap();
        Self { _dir: dir, root }
    }

    fn path(&self, name: &str) -> String {
        self.root.join(name).to_string_lossy().into_owned()
    }

    fn build(&self) {
        let o = duoret(&[
            "index",
            "--kind",
            "tweets",
            "--input",
            &self.path("tweets.jsonl"),
            "--out",
            &self.path("tweets.idx"),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        let o = duoret(&[
            "index",
            "--kind",
            "documents",
            "--input",
            &self.path("docs.jsonl"),
            "--topics",
            &self.path("topics.jsonl"),
            "--out",
            &self.path("docs.idx"),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
}

#[test]
fn index_reports_counts_and_skips() {
    let f = Fixture::new();
    let o = duoret(&[
        "index",
        "--kind",
        "tweets",
        "--input",
        &f.path("tweets.jsonl"),
        "--out",
        &f.path("tweets.idx"),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("items: 3"), "{out}");
    assert!(out.contains("skipped: 1"));
    assert!(out.contains("line 3:"));
    assert!(stderr(&o).contains("line 3"));

    let o = duoret(&[
        "index",
        "--kind",
        "documents",
        "--input",
        &f.path("docs.jsonl"),
        "--out",
        &f.path("docs.idx"),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("sentences: 5"));
    assert!(Path::new(&f.path("docs.idx.sentences")).exists());
}

#[test]
fn query_routes_by_length() {
    let f = Fixture::new();
    f.build();
    let (t, d) = (f.path("tweets.idx"), f.path("docs.idx"));
    let o = duoret(&[
        "query", "--index", &t, "--index", &d, "--now", "1000", "omg",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("path: TWEET"), "{out}");
    assert!(out.lines().any(|l| l.starts_with("1\tt1\t")), "{out}");

    let o = duoret(&[
        "query",
        "--index",
        &t,
        "--index",
        &d,
        "--now",
        "1000",
        "coastal storm surge emergency evacuation",
    ]);
    let out = stdout(&o);
    assert!(out.contains("path: SLRS"), "{out}");
    assert!(out.lines().any(|l| l.starts_with("1\td1\t")), "{out}");
}

#[test]
fn query_output_is_deterministic() {
    let f = Fixture::new();
    f.build();
    let args = [
        "query",
        "--index",
        &f.path("tweets.idx"),
        "--now",
        "1000",
        "storm",
        "beach",
    ];
    let a = duoret(&args);
    let b = duoret(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn dump_lists_postings() {
    let f = Fixture::new();
    f.build();
    let o = duoret(&["dump", "--index", &f.path("tweets.idx"), "--term", "storm"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("df: 2"), "{out}");
    assert!(out.contains("t1\ttf=1\tpositions=1"), "{out}");
}

#[test]
fn eval_prints_every_scheme() {
    let f = Fixture::new();
    f.build();
    fs::write(
        f.root.join("q.txt"),
        "omg\n{\"query\":\"sunny beach\"}\nunjudged\n",
    )
    .unwrap();
    fs::write(
        f.root.join("j.jsonl"),
        "{\"query\":\"omg\",\"relevant\":[\"t1\"]}\n{\"query\":\"sunny beach\",\"relevant\":[\"t3\"]}\n",
    )
    .unwrap();
    let args = [
        "eval",
        "--index",
        &f.path("tweets.idx"),
        "--queries",
        &f.path("q.txt"),
        "--judgments",
        &f.path("j.jsonl"),
        "--now",
        "1000",
    ];
    let o = duoret(&args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(out.matches("scheme ").count(), 6);
    assert!(
        out.contains("P@1=1.0000\tP@5=0.2000\tP@10=0.1000\tMRR=1.0000"),
        "{out}"
    );
    assert!(out.contains("skipped: unjudged"));
    assert_eq!(duoret(&args).stdout, o.stdout);
}

#[test]
fn exit_codes() {
    let f = Fixture::new();
    f.build();
    let t = f.path("tweets.idx");
    // usage
    assert_eq!(duoret(&["query"]).status.code(), Some(1));
    assert_eq!(duoret(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(
        duoret(&["query", "--index", &t, "the of an"]).status.code(),
        Some(1)
    );
    fs::write(f.root.join("bad.conf"), "colour = blue\n").unwrap();
    let o = duoret(&[
        "query",
        "--index",
        &t,
        "--config",
        &f.path("bad.conf"),
        "storm",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("colour"));
    // data
    fs::write(f.root.join("empty.jsonl"), "").unwrap();
    let o = duoret(&[
        "index",
        "--kind",
        "tweets",
        "--input",
        &f.path("empty.jsonl"),
        "--out",
        &f.path("e.idx"),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let missing = f.path("missing.idx");
    assert_eq!(
        duoret(&["dump", "--index", &missing, "--term", "x"])
            .status
            .code(),
        Some(2)
    );
    let mut bytes = fs::read(&t).unwrap();
    let at = bytes.iter().position(|&b| b == b'o').unwrap();
    bytes[at] = b'0';
    fs::write(f.root.join("tampered.idx"), bytes).unwrap();
    let o = duoret(&[
        "dump",
        "--index",
        &f.path("tampered.idx"),
        "--term",
        "storm",
    ]);
    assert_eq!(o.status.code(), Some(2));
    fs::write(
        f.root.join("j.jsonl"),
        "{\"query\":\"omg\",\"relevant\":[\"nope\"]}\n",
    )
    .unwrap();
    fs::write(f.root.join("q.txt"), "omg\n").unwrap();
    let o = duoret(&[
        "eval",
        "--index",
        &t,
        "--queries",
        &f.path("q.txt"),
        "--judgments",
        &f.path("j.jsonl"),
        "--now",
        "0",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_changes_dispatch() {
    let f = Fixture::new();
    f.build();
    fs::write(
        f.root.join("strict.conf"),
        "dispatch_rule = strict\ntweet_length_threshold = 1\n",
    )
    .unwrap();
    let o = duoret(&[
        "query",
        "--index",
        &f.path("tweets.idx"),
        "--index",
        &f.path("docs.idx"),
        "--config",
        &f.path("strict.conf"),
        "--now",
        "0",
        "omg",
    ]);
    assert!(stdout(&o).contains("path: SLRS"), "{}", stdout(&o));
}
