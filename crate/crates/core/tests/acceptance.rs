//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Corpus-backed criteria read manifests from `DECEPTEXT_DATA_DIR`
//! (`opspam.toml`, `english_us.toml`, `english_india.toml`). When that data
//! is absent those criteria print FAIL with the reason; they only make the
//! process exit non-zero under `DECEPTEXT_ACCEPTANCE_STRICT=1`. A criterion
//! that runs and misses its target always fails the process.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use deceptext::corpus::{load_corpus, Corpus, DatasetManifest, Document, Label};
use deceptext::cues::{anew_score, flesch_reading_ease, inventory, sentiment_score, GradedLexicon, LexiconSet, Polarity, SentimentLexicon};
use deceptext::eval::{auc, metrics, run_cross_dataset, run_experiment, two_proportion_z_test, Confusion, PreparedDataset};
use deceptext::features::{prepare_corpus, Preparation};
use deceptext::setup::FeatureSetup;
use deceptext::stats::{mann_whitney_u, mlr_fit, significance_screen, CueMatrix};
use deceptext::stats::mann_whitney::mann_whitney_u_normal;
use deceptext::textproc::phoneme::BuiltinEnglish;
use deceptext::textproc::{AnnotatedDocument, TokenizerOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

const OPSPAM_TOLERANCE: f64 = 0.05;
const OPSPAM_RUNTIME: Duration = Duration::from_secs(300);
const SIG_ALPHA: f64 = 0.01;
const US_MIN: usize = 12;
const INDIA_MAX: usize = 5;
const US_REFERENCE: usize = 15;
const INDIA_REFERENCE: usize = 3;
const SIG_SLACK: usize = 3;
const U_EXACT_TOL: f64 = 1e-9;
const U_NORMAL_TOL: f64 = 0.02;
const AUC_TOL: f64 = 1e-12;
const MLR_COVERAGE: f64 = 0.93;
const MLR_ORACLE_TOL: f64 = 1e-4;
const FORMULA_TOL: f64 = 1e-6;

enum Outcome {
    Pass(String),
    Fail(String),
    /// Inputs are missing; reported as FAIL.
    Unavailable(String),
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Outcome::Pass(detail)
    } else {
        Outcome::Fail(detail)
    }
}

fn data_manifest(name: &str) -> Result<DatasetManifest, String> {
    let dir = std::env::var_os("DECEPTEXT_DATA_DIR")
        .map(PathBuf::from)
        .ok_or("DECEPTEXT_DATA_DIR is not set")?;
    let path = dir.join(name);
    if !path.exists() {
        return Err(format!("{} not found", path.display()));
    }
    DatasetManifest::from_file(&path).map_err(|e| e.to_string())
}

fn prepare_real(corpus: &Corpus, lex: &LexiconSet) -> Result<PreparedDataset, String> {
    let ph = BuiltinEnglish::new();
    let prep = Preparation {
        tokenizer: TokenizerOptions::default(),
        annotations: None,
        phonemizer: Some(&ph),
        lexicons: Some(lex),
    };
    let docs = prepare_corpus(corpus, &prep).map_err(|e| e.to_string())?;
    PreparedDataset::new(corpus.clone(), docs).map_err(|e| e.to_string())
}

const OPSPAM_SETUPS: [(&str, f64); 2] = [
    ("word(1,2),stem:simplog", 0.82),
    ("ling+word(1,1),stop,lowercase:simplog", 0.86),
];

fn opspam_reproduction() -> Outcome {
    let manifest = match data_manifest("opspam.toml") {
        Ok(m) => m,
        Err(e) => return Outcome::Unavailable(e),
    };
    let start = Instant::now();
    let corpus = match load_corpus(&manifest) {
        Ok(c) => c,
        Err(e) => return Outcome::Fail(e.to_string()),
    };
    let lex = common::english_lexicons();
    let data = match prepare_real(&corpus, &lex) {
        Ok(d) => d,
        Err(e) => return Outcome::Fail(e),
    };
    let mut ok = true;
    let mut parts = Vec::new();
    for (s, target) in OPSPAM_SETUPS {
        let setup: FeatureSetup = s.parse().expect("setup parses");
        match run_experiment(&data, &setup, &common::settings(&lex, 42)) {
            Ok(o) => {
                let acc = o.report.test.accuracy.unwrap_or(0.0);
                ok &= (acc - target).abs() <= OPSPAM_TOLERANCE;
                parts.push(format!("{s}: accuracy {acc:.4} (target {target} ± {OPSPAM_TOLERANCE})"));
            }
            Err(e) => {
                ok = false;
                parts.push(format!("{s}: {e}"));
            }
        }
    }
    let elapsed = start.elapsed();
    ok &= elapsed < OPSPAM_RUNTIME;
    parts.push(format!("{:.1}s", elapsed.as_secs_f64()));
    check(ok, parts.join("; "))
}

const SYLLABLES: &[&str] = &[
    "ba", "ko", "ri", "tel", "man", "su", "den", "lo", "pra", "vin", "ta", "mor", "gel", "fi", "nu", "ster",
];

/// Reviews of about 150 tokens drawn from a Zipf-like vocabulary with a
/// weak class signal, sized like the hotel-review corpus.
fn review_corpus(n: usize, seed: u64) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vocab: Vec<String> = (0..3000)
        .map(|i| {
            let mut w = String::new();
            let mut k = i + 17;
            for _ in 0..(1 + i % 3) {
                w.push_str(SYLLABLES[k % SYLLABLES.len()]);
                k /= SYLLABLES.len();
            }
            w
        })
        .collect();
    let weights: Vec<f64> = (0..vocab.len()).map(|r| 1.0 / (r as f64 + 1.0)).collect();
    let total: f64 = weights.iter().sum();
    let cdf: Vec<f64> = weights
        .iter()
        .scan(0.0, |acc, w| {
            *acc += w / total;
            Some(*acc)
        })
        .collect();
    let pronouns = ["i", "my", "we", "our", "they"];
    let mut docs = Vec::with_capacity(n);
    for i in 0..n {
        let deceptive = i % 2 == 1;
        let mut words = Vec::new();
        for _ in 0..rng.random_range(120..180) {
            let w = if rng.random::<f64>() < 0.05 {
                let idx = if deceptive { rng.random_range(0..3) } else { rng.random_range(2..5) };
                pronouns[idx].to_string()
            } else {
                let u: f64 = rng.random();
                let r = cdf.partition_point(|&c| c < u).min(vocab.len() - 1);
                vocab[r].clone()
            };
            words.push(w);
        }
        let mut text = String::new();
        for chunk in words.chunks(15) {
            let s = chunk.join(" ");
            let mut cs = s.chars();
            let first: String = cs.next().map(|c| c.to_uppercase().collect()).unwrap_or_default();
            text.push_str(&format!("{first}{}. ", cs.as_str()));
        }
        docs.push(common::doc(&format!("r{i:04}"), text.trim_end(), deceptive, "reviews"));
    }
    Corpus::new("reviews", "en", Some("US".into()), Some(91), "hotel", docs).expect("valid corpus")
}

/// Runtime of the two reproduction setups on a 1600-document surrogate.
fn opspam_runtime_surrogate() -> Outcome {
    let start = Instant::now();
    let corpus = review_corpus(1600, 2024);
    let lex = common::english_lexicons();
    let data = match prepare_real(&corpus, &lex) {
        Ok(d) => d,
        Err(e) => return Outcome::Fail(e),
    };
    let mut parts = vec![format!("prepare {:.1}s", start.elapsed().as_secs_f64())];
    for (s, _) in OPSPAM_SETUPS {
        let t = Instant::now();
        let setup: FeatureSetup = s.parse().expect("setup parses");
        if let Err(e) = run_experiment(&data, &setup, &common::settings(&lex, 42)) {
            return Outcome::Fail(format!("{s}: {e}"));
        }
        parts.push(format!("{s} {:.1}s", t.elapsed().as_secs_f64()));
    }
    let elapsed = start.elapsed();
    parts.push(format!("total {:.1}s (limit {}s)", elapsed.as_secs_f64(), OPSPAM_RUNTIME.as_secs()));
    check(elapsed < OPSPAM_RUNTIME, parts.join("; "))
}

fn significant_cues(manifest: &DatasetManifest, lex: &LexiconSet) -> Result<usize, String> {
    let corpus = load_corpus(manifest).map_err(|e| e.to_string())?;
    let data = prepare_real(&corpus, lex)?;
    let vectors: Vec<_> = data.docs.iter().map(|d| d.cues.clone().expect("cues")).collect();
    let matrix = CueMatrix::from_vectors(&vectors, &inventory(lex));
    let table = significance_screen(&matrix, SIG_ALPHA).map_err(|e| e.to_string())?;
    Ok(table.significant_count())
}

fn significance_fixture() -> Outcome {
    let (us, india) = match (data_manifest("english_us.toml"), data_manifest("english_india.toml")) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return Outcome::Unavailable(e),
    };
    let lex = common::english_lexicons();
    let (a, b) = match (significant_cues(&us, &lex), significant_cues(&india, &lex)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return Outcome::Fail(e),
    };
    let ok = a >= US_MIN
        && b <= INDIA_MAX
        && a.abs_diff(US_REFERENCE) <= SIG_SLACK
        && b.abs_diff(INDIA_REFERENCE) <= SIG_SLACK;
    check(ok, format!("EnglishUS {a} significant, EnglishIndia {b} at alpha {SIG_ALPHA}"))
}

/// Two-sided p by enumerating every assignment of the pooled values to the
/// first group, with midranks for ties.
fn brute_force_p(xs: &[f64], ys: &[f64]) -> f64 {
    let all: Vec<f64> = xs.iter().chain(ys).copied().collect();
    let n = all.len();
    let rank = |i: usize| {
        let below = all.iter().filter(|&&v| v < all[i]).count() as f64;
        let equal = all.iter().filter(|&&v| v == all[i]).count() as f64;
        below + (equal + 1.0) / 2.0
    };
    let ranks: Vec<f64> = (0..n).map(rank).collect();
    let n1 = xs.len();
    let mean = (n1 * ys.len()) as f64 / 2.0;
    let u_of = |sum: f64| sum - (n1 * (n1 + 1)) as f64 / 2.0;
    let observed = (u_of(ranks[..n1].iter().sum()) - mean).abs();
    let (mut hits, mut total) = (0u64, 0u64);
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != n1 {
            continue;
        }
        let s: f64 = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| ranks[i]).sum();
        total += 1;
        if (u_of(s) - mean).abs() >= observed - 1e-9 {
            hits += 1;
        }
    }
    hits as f64 / total as f64
}

fn u_test_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let n1 = rng.random_range(1..=8);
        let n2 = rng.random_range(1..=8);
        let levels = rng.random_range(2..=10);
        let mut draw = |k: usize| -> Vec<f64> { (0..k).map(|_| rng.random_range(0..levels) as f64).collect() };
        let (xs, ys) = (draw(n1), draw(n2));
        let p = mann_whitney_u(&xs, &ys).expect("valid sample").p_two_tailed;
        worst = worst.max((p - brute_force_p(&xs, &ys)).abs());
    }
    let mut worst_normal = 0.0f64;
    for _ in 0..500 {
        let mut values: Vec<f64> = (0..16).map(|i| i as f64).collect();
        let mut jitter: Vec<(f64, f64)> = values.drain(..).map(|v| (rng.random::<f64>(), v)).collect();
        jitter.sort_by(|a, b| a.0.total_cmp(&b.0));
        let shuffled: Vec<f64> = jitter.into_iter().map(|(_, v)| v).collect();
        let (xs, ys) = shuffled.split_at(8);
        let exact = mann_whitney_u(xs, ys).expect("valid sample").p_two_tailed;
        let normal = mann_whitney_u_normal(xs, ys).expect("valid sample");
        worst_normal = worst_normal.max((exact - normal).abs());
    }
    check(
        worst <= U_EXACT_TOL && worst_normal <= U_NORMAL_TOL,
        format!("max |exact - enumeration| {worst:.2e} over 500 ties-allowed instances; max |normal - exact| {worst_normal:.4} at n1=n2=8"),
    )
}

fn auc_u_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    for i in 0..100 {
        let n = rng.random_range(4..60);
        let mut labels: Vec<Label> = (0..n).map(|_| Label::from_deceptive(rng.random::<bool>())).collect();
        labels[0] = Label::Deceptive;
        labels[1] = Label::Truthful;
        // Every other set is coarse so that ties occur.
        let scores: Vec<f64> = (0..n)
            .map(|_| if i % 2 == 0 { rng.random::<f64>() } else { rng.random_range(0..5) as f64 / 4.0 })
            .collect();
        let a = auc(&scores, &labels).expect("both classes present");
        let pos: Vec<f64> = scores.iter().zip(&labels).filter(|(_, l)| l.is_deceptive()).map(|(s, _)| *s).collect();
        let neg: Vec<f64> = scores.iter().zip(&labels).filter(|(_, l)| !l.is_deceptive()).map(|(s, _)| *s).collect();
        let u = mann_whitney_u(&pos, &neg).expect("valid sample").u;
        worst = worst.max((a - u / (pos.len() * neg.len()) as f64).abs());
    }
    check(worst <= AUC_TOL, format!("max |AUC - U/(n1 n2)| {worst:.2e} over 100 score sets"))
}

/// Plain Newton-Raphson for logistic regression with an explicit intercept,
/// solved by Gaussian elimination with partial pivoting.
fn oracle_logistic(x: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
    let p = x[0].len() + 1;
    let row = |i: usize| -> Vec<f64> { std::iter::once(1.0).chain(x[i].iter().copied()).collect() };
    let mut beta = vec![0.0; p];
    for _ in 0..200 {
        let mut g = vec![0.0; p];
        let mut h = vec![vec![0.0; p]; p];
        for i in 0..y.len() {
            let r = row(i);
            let eta: f64 = r.iter().zip(&beta).map(|(a, b)| a * b).sum();
            let mu = 1.0 / (1.0 + (-eta).exp());
            for a in 0..p {
                g[a] += (y[i] - mu) * r[a];
                for b in 0..p {
                    h[a][b] += mu * (1.0 - mu) * r[a] * r[b];
                }
            }
        }
        // Solve h * step = g.
        let mut m: Vec<Vec<f64>> = h.iter().zip(&g).map(|(r, gi)| r.iter().copied().chain([*gi]).collect()).collect();
        for c in 0..p {
            let piv = (c..p).max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs())).unwrap();
            m.swap(c, piv);
            for r in 0..p {
                if r != c {
                    let f = m[r][c] / m[c][c];
                    for k in c..=p {
                        m[r][k] -= f * m[c][k];
                    }
                }
            }
        }
        let step: Vec<f64> = (0..p).map(|i| m[i][p] / m[i][i]).collect();
        let size: f64 = step.iter().map(|s| s.abs()).sum();
        for (b, s) in beta.iter_mut().zip(&step) {
            *b += s;
        }
        if size < 1e-13 {
            break;
        }
    }
    beta
}

fn mlr_oracle() -> Outcome {
    let truth = [0.5, -1.2];
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut covered, mut total) = (0usize, 0usize);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let xs: Vec<f64> = (0..200).map(|_| StandardNormal.sample(&mut rng)).collect();
        let y: Vec<bool> = xs
            .iter()
            .map(|x| rng.random::<f64>() < 1.0 / (1.0 + (-(truth[0] + truth[1] * x)).exp()))
            .collect();
        let fit = match mlr_fit(&[("x".to_string(), xs.clone())], &y) {
            Ok(f) if f.converged() => f,
            Ok(f) => return Outcome::Fail(format!("fit status {:?}", f.status)),
            Err(e) => return Outcome::Fail(e.to_string()),
        };
        let rows = [fit.intercept.clone().expect("intercept"), fit.rows[0].clone()];
        for (r, t) in rows.iter().zip(truth) {
            total += 1;
            if (r.estimate - t).abs() <= 3.0 * r.se {
                covered += 1;
            }
        }
        let yf: Vec<f64> = y.iter().map(|&b| f64::from(u8::from(b))).collect();
        let x: Vec<Vec<f64>> = xs.iter().map(|v| vec![*v]).collect();
        let oracle = oracle_logistic(&x, &yf);
        for (r, o) in rows.iter().zip(&oracle) {
            worst = worst.max((r.estimate - o).abs());
        }
    }
    let rate = covered as f64 / total as f64;
    check(
        rate >= MLR_COVERAGE && worst <= MLR_ORACLE_TOL,
        format!("{covered}/{total} estimates within 3 SE ({:.1}%); max |coef - oracle| {worst:.2e}", rate * 100.0),
    )
}

fn annotated(text: &str) -> AnnotatedDocument {
    let d: Document = common::doc("x", text, false, "formula");
    AnnotatedDocument::from_text(d, TokenizerOptions::default())
}

fn formulas() -> Outcome {
    let mut errs: BTreeMap<&str, f64> = BTreeMap::new();
    let mut note = |name: &'static str, got: f64, want: f64| {
        let e = errs.entry(name).or_insert(0.0);
        *e = e.max((got - want).abs());
    };
    let lex = SentimentLexicon {
        name: "hand".into(),
        positive: GradedLexicon::new("pos", [("good", 1.0)]),
        negative: GradedLexicon::new("neg", [("awful", 1.0)]),
    };
    let doc = annotated("good bad good the");
    note("sentiment", sentiment_score(&doc, &lex, Polarity::Positive).unwrap(), 0.5);
    note("sentiment", sentiment_score(&doc, &lex, Polarity::Negative).unwrap(), 0.0);

    let valence = GradedLexicon::new("v", [("calm", 5.0), ("sunny", 7.5), ("grim", 2.0), ("bright", 8.0)]);
    note("anew", anew_score(&annotated("calm"), &valence).unwrap(), 0.0);
    note("anew", anew_score(&annotated("sunny"), &valence).unwrap(), 0.5);
    note("anew", anew_score(&annotated("grim bright other"), &valence).unwrap(), 0.0);

    note("flesch", flesch_reading_ease(&annotated("The cat sat.")).unwrap(), 119.19);
    note("flesch", flesch_reading_ease(&annotated("Go.")).unwrap(), 121.22);

    let c = Confusion { tp: 3, fp: 1, tn: 4, fn_: 2 };
    let m = metrics(&c);
    note("metrics", m.precision.unwrap(), 0.75);
    note("metrics", m.recall.unwrap(), 0.6);
    note("metrics", m.f1.unwrap(), 2.0 / 3.0);
    note("metrics", m.accuracy.unwrap(), 0.7);

    let z = two_proportion_z_test(0.8, 100, 0.7, 100).unwrap();
    note("z-test", z.z, 1.632_993_161_855_452);
    note("z-test", z.p_one_tailed, 0.051_235_217_429_874_71);

    let ok = errs.values().all(|&e| e <= FORMULA_TOL);
    let detail = errs.iter().map(|(k, v)| format!("{k} {v:.1e}")).collect::<Vec<_>>().join(", ");
    check(ok, format!("max abs error: {detail}"))
}

/// The stagewise trainer must score 1.0 with the planted token first. The
/// ridge trainer must rank it first too; its accuracy is only reported,
/// because with a near-zero penalty and more columns than training rows its
/// fit spreads weight over noise words.
fn leakage_sentinel() -> Outcome {
    let lex = common::english_lexicons();
    let mut problems = Vec::new();
    let mut ridge_acc = Vec::new();
    for seed in [11, 12, 13] {
        let corpus = common::synthetic_corpus("planted", 20, seed, Some("zanzibar"));
        let data = common::prepare(&corpus, &lex);
        for s in ["word(1,1),lowercase:simplog", "word(1,1),lowercase:log"] {
            let setup: FeatureSetup = s.parse().expect("setup parses");
            match run_experiment(&data, &setup, &common::settings(&lex, seed)) {
                Ok(o) => {
                    let acc = o.report.test.accuracy.unwrap_or(0.0);
                    let top = o.report.top_deceptive.first().map(|w| w.feature.clone()).unwrap_or_default();
                    if top != "word:zanzibar" {
                        problems.push(format!("seed {seed} {s}: top feature {top:?}"));
                    }
                    if s.ends_with(":log") {
                        ridge_acc.push(format!("{acc:.2}"));
                    } else if acc != 1.0 {
                        problems.push(format!("seed {seed} {s}: accuracy {acc}"));
                    }
                }
                Err(e) => problems.push(format!("seed {seed} {s}: {e}")),
            }
        }
    }
    let ridge = format!("ridge accuracy by seed [{}]", ridge_acc.join(", "));
    if problems.is_empty() {
        Outcome::Pass(format!(
            "stagewise accuracy 1.0 for 3 seeds; word:zanzibar ranked first by both trainers; {ridge}"
        ))
    } else {
        Outcome::Fail(format!("{}; {ridge}", problems.join("; ")))
    }
}

fn determinism() -> Outcome {
    let lex = common::english_lexicons();
    let run = || -> Result<Vec<String>, String> {
        let a = common::prepare(&common::synthetic_corpus("a", 120, 21, Some("zanzibar")), &lex);
        let b = common::prepare(&common::synthetic_corpus("b", 90, 22, Some("zanzibar")), &lex);
        let mut files = Vec::new();
        for s in ["ling+word(1,2),stem:simplog", "char(1,3):log,attrsel"] {
            let setup: FeatureSetup = s.parse().expect("setup parses");
            let settings = common::settings(&lex, 42);
            let within = run_experiment(&a, &setup, &settings).map_err(|e| e.to_string())?;
            let cross = run_cross_dataset(&[a.clone(), b.clone()], &setup, &settings).map_err(|e| e.to_string())?;
            for o in std::iter::once(&within).chain(&cross) {
                files.push(o.report.to_markdown());
                files.push(serde_json::to_string_pretty(&o.report).expect("report serializes"));
                files.push(o.report.predictions_csv());
                files.push(o.model.to_json());
            }
        }
        Ok(files)
    };
    match (run(), run()) {
        (Ok(x), Ok(y)) => {
            let same = x.len() == y.len() && x.iter().zip(&y).all(|(p, q)| p.as_bytes() == q.as_bytes());
            check(same, format!("{} files compared byte for byte across two runs", x.len()))
        }
        (Err(e), _) | (_, Err(e)) => Outcome::Fail(e),
    }
}

fn main() {
    let criteria: Vec<(&str, &str, fn() -> Outcome)> = vec![
        ("1", "OpSpam reproduction (accuracy and runtime)", opspam_reproduction),
        ("1r", "runtime of the reproduction setups on a 1600-document surrogate", opspam_runtime_surrogate),
        ("2", "significance contrast EnglishUS vs EnglishIndia", significance_fixture),
        ("3", "U-test exact oracle and normal approximation", u_test_oracle),
        ("4", "AUC equals U/(n1 n2)", auc_u_identity),
        ("5", "MLR coverage and IRLS oracle", mlr_oracle),
        ("6", "formula hand examples", formulas),
        ("7", "leakage sentinel", leakage_sentinel),
        ("8", "determinism", determinism),
    ];
    let strict = std::env::var("DECEPTEXT_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    let (mut failed, mut unavailable) = (0, 0);
    for (id, name, f) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Outcome::Fail(format!("panicked: {msg}"))
        });
        match outcome {
            Outcome::Pass(d) => println!("PASS {id} {name}: {d}"),
            Outcome::Fail(d) => {
                failed += 1;
                println!("FAIL {id} {name}: {d}");
            }
            Outcome::Unavailable(d) => {
                unavailable += 1;
                println!("FAIL {id} {name}: data unavailable ({d})");
            }
        }
    }
    println!("acceptance: {failed} failed, {unavailable} without data");
    if failed > 0 || (strict && unavailable > 0) {
        std::process::exit(1);
    }
}
