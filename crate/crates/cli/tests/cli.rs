use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn repo_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

const WORDS: &[&str] = &[
    "the", "room", "was", "clean", "and", "staff", "were", "friendly", "we", "stayed", "two", "nights",
    "hotel", "location", "near", "station", "breakfast", "good", "bed", "view", "from", "window",
];

/// Balanced reviews; deceptive ones contain `marker` when given.
fn jsonl(n: usize, marker: Option<&str>) -> String {
    let mut out = String::new();
    let mut state: u64 = 0x9e37_79b9_7f4a_7c15;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    for i in 0..n {
        let deceptive = i % 2 == 1;
        let len = 10 + (next() % 12) as usize;
        let mut words: Vec<&str> = (0..len).map(|_| WORDS[(next() % WORDS.len() as u64) as usize]).collect();
        if deceptive {
            if let Some(m) = marker {
                let at = (next() % (words.len() as u64 + 1)) as usize;
                words.insert(at, m);
            }
        }
        let text = format!("Review {}.", words.join(" "));
        let label = if deceptive { "deceptive" } else { "truthful" };
        out.push_str(&format!(
            "{{\"id\":\"r{i:03}\",\"text\":\"{text}\",\"label\":\"{label}\",\"lang\":\"en\",\"genre\":\"review\"}}\n"
        ));
    }
    out
}

fn manifest(id: &str, doc_path: &str, counts: Option<(usize, usize)>) -> String {
    let mut m = format!(
        "id = \"{id}\"\nlanguage = \"en\"\ncountry = \"US\"\nindividualism_score = 91\ngenre = \"review\"\ndoc_path = \"{doc_path}\"\n"
    );
    if let Some((t, d)) = counts {
        m.push_str(&format!(
            "expected_total = {}\nexpected_truthful = {t}\nexpected_deceptive = {d}\n",
            t + d
        ));
    }
    m
}

struct Fixture {
    dir: TempDir,
}

impl Fixture {
    /// Datasets (id, marker) written next to a config using `setups`.
    fn new(datasets: &[(&str, Option<&str>)], setups: &str, cues: &str, on_nonconvergence: &str) -> Fixture {
        let dir = tempfile::tempdir().unwrap();
        let mut manifests = Vec::new();
        for (id, marker) in datasets {
            std::fs::write(dir.path().join(format!("{id}.jsonl")), jsonl(80, *marker)).unwrap();
            std::fs::write(
                dir.path().join(format!("{id}.toml")),
                manifest(id, &format!("{id}.jsonl"), Some((40, 40))),
            )
            .unwrap();
            manifests.push(format!("\"{id}.toml\""));
        }
        let config = format!(
            r#"seed = 42
out_dir = "out"

[data]
manifests = [{}]
lexicon_dir = "{}"
annotation_dir = "annotations"
combine = "separate"
merged_id = "all"

[features]
setups = [{setups}]
top_k = 200
phoneme_unit = "symbol"
repair_punctuation = false

[split]
train = 0.7
val = 0.1
test = 0.2
stratified = true

[trainer]
ridge = 1e-8
max_iter = 100
tol = 1e-8
max_rounds = 20
threshold = 0.5
on_nonconvergence = "{on_nonconvergence}"

[significance]
alpha = 0.01
correlation_threshold = 0.9
cues = [{cues}]

[phonemizer]
backend = "builtin-en"
"#,
            manifests.join(", "),
            repo_root().join("lexicons").display()
        );
        std::fs::write(dir.path().join("run.toml"), config).unwrap();
        Fixture { dir }
    }

    fn path(&self, p: &str) -> PathBuf {
        self.dir.path().join(p)
    }

    fn run(&self, args: &[&str]) -> Output {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_deceptext"));
        cmd.arg("--config").arg(self.path("run.toml"));
        cmd.args(args);
        for (k, _) in std::env::vars() {
            if k.starts_with("DECEPTEXT_") {
                cmd.env_remove(k);
            }
        }
        cmd.output().unwrap()
    }
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap_or(-1)
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

const PLANTED: &str = "\"word(1,1),lowercase:log\"";

#[test]
fn ingest_summarizes_and_rejects_bad_manifests() {
    let f = Fixture::new(&[("toy", None)], PLANTED, "\"all\"", "warn");
    let o = f.run(&["ingest"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(String::from_utf8_lossy(&o.stdout).contains("| toy | en | 80 | 40 | 40 |"));

    std::fs::write(f.path("missing.toml"), manifest("gone", "nowhere.jsonl", None)).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_deceptext"))
        .arg("ingest")
        .arg(f.path("missing.toml"))
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("nowhere.jsonl"), "{}", stderr(&o));

    std::fs::write(f.path("wrong.toml"), manifest("toy", "toy.jsonl", Some((41, 39)))).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_deceptext"))
        .arg("ingest")
        .arg(f.path("wrong.toml"))
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
    let e = stderr(&o);
    assert!(e.contains("41") && e.contains("40"), "{e}");
}

#[test]
fn unset_config_fields_are_rejected() {
    let f = Fixture::new(&[("toy", None)], PLANTED, "\"all\"", "warn");
    let text = read(&f.path("run.toml")).replace("top_k = 200\n", "");
    std::fs::write(f.path("run.toml"), text).unwrap();
    let o = f.run(&["train"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("top_k"), "{}", stderr(&o));
}

#[test]
fn empty_cue_list_is_a_usage_error() {
    let f = Fixture::new(&[("toy", None)], PLANTED, "", "warn");
    let o = f.run(&["significance"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("significance.cues"), "{}", stderr(&o));
}

#[test]
fn planted_pronoun_shift_is_significant() {
    let f = Fixture::new(&[("toy", Some("i"))], PLANTED, "\"all\"", "warn");
    let o = f.run(&["significance"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let csv = read(&f.path("out/toy/significance.csv"));
    assert!(csv.starts_with("# config_hash="));
    let row = csv.lines().find(|l| l.starts_with("first_person_singular,")).unwrap();
    assert!(row.contains(",true,"), "{row}");
    assert!(f.path("out/significance.meta.json").exists());

    let o = f.run(&["cues"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(read(&f.path("out/toy/cues.csv")).lines().nth(1).unwrap().starts_with("doc_id,label,"));
}

#[test]
fn separated_regression_fails_numerically_when_asked() {
    let f = Fixture::new(&[("toy", Some("i"))], PLANTED, "\"first_person_singular\"", "fail");
    let o = f.run(&["mlr"]);
    assert_eq!(code(&o), 4, "{}", stderr(&o));

    let f = Fixture::new(&[("toy", Some("i"))], PLANTED, "\"first_person_singular\"", "warn");
    let o = f.run(&["mlr"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(read(&f.path("out/toy/mlr.md")).contains("PerfectSeparation"));
}

#[test]
fn train_evaluate_report_round_trip() {
    let setups = "\"word(1,1),lowercase:log\", \"word(1,1),lowercase:simplog\"";
    let f = Fixture::new(&[("toy", Some("zanzibar"))], setups, "\"all\"", "warn");
    let o = f.run(&["train", "--jobs", "2"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let dir = f.path("out/toy/word_1_1_lowercase_simplog");
    let report: serde_json::Value = serde_json::from_str(&read(&dir.join("report.json"))).unwrap();
    assert_eq!(report["test"]["accuracy"], 1.0);
    assert_eq!(report["top_deceptive"][0]["feature"], "word:zanzibar");
    let hash = report["config_hash"].as_str().unwrap().to_string();
    assert!(read(&dir.join("predictions.csv")).starts_with(&format!("# config_hash={hash}\n")));
    assert!(read(&f.path("out/toy/results.md")).contains(&hash));

    let model = dir.join("model.json");
    let o = f.run(&["evaluate", "--model", model.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let eval: serde_json::Value =
        serde_json::from_str(&read(&f.path("out/evaluate/toy/word_1_1_lowercase_simplog/evaluation.json"))).unwrap();
    assert_eq!(eval["test"]["accuracy"], 1.0);
    assert_eq!(eval["n"], 16);

    // A model from another config is rejected.
    let o = f.run(&["--seed", "7", "evaluate", "--model", model.to_str().unwrap()]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));

    // So is one whose schema hash no longer matches its columns.
    let mut m: serde_json::Value = serde_json::from_str(&read(&model)).unwrap();
    m["schema_hash"] = serde_json::Value::String("0000000000000000".into());
    let stale = f.path("stale.json");
    std::fs::write(&stale, serde_json::to_string_pretty(&m).unwrap()).unwrap();
    let o = f.run(&["evaluate", "--model", stale.to_str().unwrap()]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));

    let o = f.run(&["report"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let md = read(&f.path("out/report.md"));
    assert!(md.contains("Within toy") && md.contains("Word-gram"));

    // Reports from another config are refused.
    let o = f.run(&["--seed", "7", "report"]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
}

#[test]
fn identical_runs_write_identical_files() {
    let f = Fixture::new(&[("toy", Some("zanzibar"))], "\"ling+word(1,1),stop,lowercase:simplog\"", "\"all\"", "warn");
    let a = f.run(&["--out", f.path("a").to_str().unwrap(), "train"]);
    let b = f.run(&["--out", f.path("b").to_str().unwrap(), "--jobs", "3", "train"]);
    assert_eq!(code(&a), 0, "{}", stderr(&a));
    assert_eq!(code(&b), 0, "{}", stderr(&b));
    for file in ["report.json", "report.md", "predictions.csv", "model.json"] {
        let rel = format!("toy/ling_word_1_1_stop_lowercase_simplog/{file}");
        assert_eq!(read(&f.path("a").join(&rel)), read(&f.path("b").join(&rel)), "{rel}");
    }
    assert_eq!(read(&f.path("a/toy/results.csv")), read(&f.path("b/toy/results.csv")));
}

#[test]
fn cross_on_duplicated_dataset_is_symmetric() {
    let f = Fixture::new(&[("a", Some("zanzibar")), ("b", Some("zanzibar"))], PLANTED, "\"all\"", "warn");
    let o = f.run(&["cross"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let load = |held: &str| -> serde_json::Value {
        serde_json::from_str(&read(&f.path(&format!("out/cross/word_1_1_lowercase_log/{held}/report.json")))).unwrap()
    };
    let (ra, rb) = (load("a"), load("b"));
    assert_eq!(ra["test"], rb["test"]);
    assert_eq!(ra["auc"], rb["auc"]);
    assert_eq!(ra["protocol"], "cross");
}

#[test]
fn env_overrides_apply_before_hashing() {
    let f = Fixture::new(&[("toy", Some("zanzibar"))], PLANTED, "\"all\"", "warn");
    let out = f.path("env-out");
    let o = Command::new(env!("CARGO_BIN_EXE_deceptext"))
        .env("DECEPTEXT_CONFIG", f.path("run.toml"))
        .env("DECEPTEXT_SEED", "9")
        .env("DECEPTEXT_OUT", &out)
        .arg("train")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let cfg = read(&out.join("config.toml"));
    assert!(cfg.contains("seed = 9"), "{cfg}");
    let report: serde_json::Value =
        serde_json::from_str(&read(&out.join("toy/word_1_1_lowercase_log/report.json"))).unwrap();
    assert_eq!(report["seed"], 9);
}
