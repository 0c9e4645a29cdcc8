//! One function per subcommand. Each returns the files it wrote.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use deceptext::config::NonConvergence;
use deceptext::corpus::{corpus_stats, load_corpus, split, DatasetManifest, Label};
use deceptext::cues::{cues_to_csv, inventory, CueSpec, CueVector, LexiconSet};
use deceptext::eval::expectations::{self, Expectation};
use deceptext::eval::experiment::{pick_best, ExperimentOutcome};
use deceptext::eval::report::{markdown_table, reports_csv};
use deceptext::eval::{auc, metrics, run_cross_dataset, run_experiment, Confusion, ExperimentReport, PreparedDataset};
use deceptext::model::TrainedModel;
use deceptext::stats::{correlation_filter, mlr_fit, significance_screen, CueMatrix, MlrStatus};
use rayon::prelude::*;
use serde::Serialize;

use crate::context::{load, Context, Loaded, Needs};
use crate::failure::{CliResult, Failure, NUMERIC};
use crate::output::{csv_with_hash, markdown_with_hash, slug, write};

pub struct Written(pub Vec<PathBuf>);

impl Written {
    fn new() -> Written {
        Written(Vec::new())
    }

    fn put(&mut self, path: PathBuf, contents: &str) -> CliResult<()> {
        write(&path, contents)?;
        self.0.push(path);
        Ok(())
    }
}

pub fn ingest(ctx: Option<&Context>, manifests: &[PathBuf], out: Option<&Path>) -> CliResult<Written> {
    let loaded: Vec<DatasetManifest> = if manifests.is_empty() {
        match ctx {
            Some(c) => c.manifests()?,
            None => return Err(Failure::input("ingest needs manifest paths or --config")),
        }
    } else {
        manifests
            .iter()
            .map(|p| Ok(DatasetManifest::from_file(p)?))
            .collect::<CliResult<_>>()?
    };
    let mut table = String::from(
        "| dataset | language | total | truthful | deceptive | mean tokens |\n|---|---|---|---|---|---|\n",
    );
    for m in &loaded {
        let corpus = load_corpus(m).map_err(|e| Failure::from(e).context(format!("dataset {}", m.id)))?;
        table.push_str(&corpus_stats(&corpus).markdown_row());
        table.push('\n');
    }
    print!("{table}");
    let mut w = Written::new();
    if let Some(dir) = out {
        let text = match ctx {
            Some(c) => markdown_with_hash(&c.hash, "Corpora", &table),
            None => format!("# Corpora\n\n{table}"),
        };
        w.put(dir.join("ingest.md"), &text)?;
    }
    Ok(w)
}

fn cue_vectors(d: &PreparedDataset) -> CliResult<Vec<CueVector>> {
    d.docs
        .iter()
        .map(|p| p.cues.clone())
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Failure::input(format!("dataset {} was prepared without cues", d.corpus.id())))
}

fn lexicons<'a>(loaded: &'a Loaded, d: &PreparedDataset) -> CliResult<&'a LexiconSet> {
    loaded
        .lexicons_for(d.corpus.language())
        .ok_or_else(|| Failure::input(format!("no lexicons for {:?}", d.corpus.language())))
}

pub fn cues(ctx: &Context) -> CliResult<Written> {
    let loaded = load(ctx, Needs::Cues)?;
    let mut w = Written::new();
    for d in loaded.experiment_datasets(ctx)? {
        let vectors = cue_vectors(&d)?;
        let seen: HashSet<&str> = vectors.iter().flat_map(|v| v.names()).collect();
        let columns: Vec<String> = inventory(lexicons(&loaded, &d)?)
            .into_iter()
            .map(|s| s.name)
            .filter(|n| seen.contains(n.as_str()))
            .collect();
        let body = cues_to_csv(&vectors, &columns);
        w.put(ctx.out.join(d.corpus.id()).join("cues.csv"), &csv_with_hash(&ctx.hash, &body))?;
    }
    Ok(w)
}

/// The inventory restricted to the configured cue names.
fn screened_cues(ctx: &Context, lex: &LexiconSet) -> CliResult<Vec<CueSpec>> {
    let wanted = &ctx.config.significance.cues;
    if wanted.is_empty() {
        return Err(Failure::input(
            "significance.cues is empty; list cue names or use [\"all\"]",
        ));
    }
    let all = inventory(lex);
    for c in wanted {
        if c != "all" && !all.iter().any(|s| &s.name == c) {
            return Err(Failure::input(format!("significance.cues names unknown cue {c:?}")));
        }
    }
    Ok(all.into_iter().filter(|s| ctx.config.significance.selects(&s.name)).collect())
}

struct Screened {
    dataset: PreparedDataset,
    matrix: CueMatrix,
    table: deceptext::stats::SignificanceTable,
    kept: Vec<String>,
    dropped: Vec<(String, String)>,
}

fn screen(ctx: &Context) -> CliResult<Vec<Screened>> {
    let loaded = load(ctx, Needs::Cues)?;
    let mut out = Vec::new();
    for d in loaded.experiment_datasets(ctx)? {
        let features = screened_cues(ctx, lexicons(&loaded, &d)?)?;
        let matrix = CueMatrix::from_vectors(&cue_vectors(&d)?, &features);
        let table = significance_screen(&matrix, ctx.config.significance.alpha)?;
        let f = correlation_filter(&matrix, &table, ctx.config.significance.correlation_threshold);
        out.push(Screened {
            dataset: d,
            matrix,
            table,
            kept: f.kept,
            dropped: f.dropped,
        });
    }
    Ok(out)
}

pub fn significance(ctx: &Context) -> CliResult<Written> {
    let mut w = Written::new();
    for s in screen(ctx)? {
        let dir = ctx.out.join(s.dataset.corpus.id());
        w.put(dir.join("significance.csv"), &csv_with_hash(&ctx.hash, &s.table.to_csv()))?;
        let mut body = format!(
            "{} of {} cues significant at alpha = {}.\n\n{}",
            s.table.significant_count(),
            s.table.rows.len(),
            s.table.alpha,
            s.table.to_markdown()
        );
        body.push_str(&format!(
            "\n## Correlation filter (|r| > {})\n\nkept: {}\n\n",
            ctx.config.significance.correlation_threshold,
            if s.kept.is_empty() { "none".to_string() } else { s.kept.join(", ") }
        ));
        for (f, why) in &s.dropped {
            body.push_str(&format!("- dropped {f}: {why}\n"));
        }
        let title = format!("Significance screen: {}", s.dataset.corpus.id());
        w.put(dir.join("significance.md"), &markdown_with_hash(&ctx.hash, &title, &body))?;
    }
    Ok(w)
}

pub fn mlr(ctx: &Context) -> CliResult<Written> {
    let mut w = Written::new();
    for s in screen(ctx)? {
        let id = s.dataset.corpus.id().to_string();
        let dir = ctx.out.join(&id);
        let mut notes = Vec::new();
        let mut columns = Vec::new();
        for name in &s.kept {
            match s.matrix.column(name) {
                Some(col) => columns.push((name.clone(), col)),
                None => notes.push(format!("- {name} skipped: not computed for every document")),
            }
        }
        let title = format!("Multiple logistic regression: {id}");
        if columns.is_empty() {
            let body = "No significant cue survived the screen; nothing to fit.\n";
            w.put(dir.join("mlr.csv"), &csv_with_hash(&ctx.hash, "name,estimate,se,wald_z,p,reported\n"))?;
            w.put(dir.join("mlr.md"), &markdown_with_hash(&ctx.hash, &title, body))?;
            continue;
        }
        let y: Vec<bool> = s.matrix.labels.iter().map(|l| l.is_deceptive()).collect();
        let result = mlr_fit(&columns, &y).map_err(|e| Failure::from(e).context(format!("dataset {id}")))?;
        if result.status != MlrStatus::Converged {
            let msg = format!("{id}: regression status {:?} after {} iterations", result.status, result.iterations);
            match ctx.config.trainer.on_nonconvergence {
                NonConvergence::Fail => return Err(Failure::new(NUMERIC, anyhow::anyhow!(msg))),
                NonConvergence::Warn => log::warn!("{msg}"),
            }
        }
        for c in &result.dropped_constant {
            notes.push(format!("- {c} dropped: constant"));
        }
        let mut body = format!(
            "status: {:?}, {} iterations. Rows with p < 0.1, largest estimate first.\n\n| feature | estimate | SE | z | p |\n|---|---|---|---|---|\n",
            result.status, result.iterations
        );
        for r in result.reported_sorted() {
            body.push_str(&format!(
                "| {} | {:.4} | {:.4} | {:.3} | {:.4} |\n",
                r.name, r.estimate, r.se, r.wald_z, r.p
            ));
        }
        if !notes.is_empty() {
            body.push('\n');
            body.push_str(&notes.join("\n"));
            body.push('\n');
        }
        w.put(dir.join("mlr.csv"), &csv_with_hash(&ctx.hash, &result.to_csv()))?;
        w.put(dir.join("mlr.md"), &markdown_with_hash(&ctx.hash, &title, &body))?;
    }
    Ok(w)
}

fn report_json(r: &ExperimentReport) -> String {
    serde_json::to_string_pretty(r).expect("report serializes") + "\n"
}

fn write_outcome(w: &mut Written, dir: &Path, o: &ExperimentOutcome) -> CliResult<()> {
    w.put(dir.join("model.json"), &o.model.to_json())?;
    w.put(dir.join("report.json"), &report_json(&o.report))?;
    w.put(dir.join("report.md"), &o.report.to_markdown())?;
    w.put(dir.join("predictions.csv"), &o.report.predictions_csv())?;
    Ok(())
}

pub fn train(ctx: &Context) -> CliResult<Written> {
    let loaded = load(ctx, Needs::Setups)?;
    loaded.validate_setups(ctx)?;
    let setups = &ctx.config.features.setups;
    let mut w = Written::new();
    for d in loaded.experiment_datasets(ctx)? {
        let settings = ctx.settings(loaded.lexicons_for(d.corpus.language()));
        let outcomes: Vec<ExperimentOutcome> = setups
            .par_iter()
            .map(|s| run_experiment(&d, s, &settings))
            .collect::<Result<_, _>>()?;
        let (outcomes, best) = pick_best(outcomes);
        let dir = ctx.out.join(d.corpus.id());
        for o in &outcomes {
            write_outcome(&mut w, &dir.join(slug(&o.report.setup)), o)?;
        }
        let reports: Vec<ExperimentReport> = outcomes.iter().map(|o| o.report.clone()).collect();
        let chosen = &reports[best];
        let body = format!(
            "{}\nSelected on validation accuracy: `{}` ({}).\n",
            markdown_table(&reports),
            chosen.setup,
            chosen.val_accuracy.map_or("n/a".to_string(), |v| format!("{v:.4}"))
        );
        let title = format!("Within-dataset results: {}", d.corpus.id());
        w.put(dir.join("results.md"), &markdown_with_hash(&ctx.hash, &title, &body))?;
        w.put(dir.join("results.csv"), &reports_csv(&ctx.hash, &reports))?;
    }
    Ok(w)
}

pub fn cross(ctx: &Context) -> CliResult<Written> {
    let loaded = load(ctx, Needs::Setups)?;
    loaded.validate_setups(ctx)?;
    let lang = loaded
        .datasets
        .first()
        .map(|d| d.corpus.language().to_string())
        .unwrap_or_default();
    let settings = ctx.settings(loaded.lexicons_for(&lang));
    let runs: Vec<Vec<ExperimentOutcome>> = ctx
        .config
        .features
        .setups
        .par_iter()
        .map(|s| run_cross_dataset(&loaded.datasets, s, &settings))
        .collect::<Result<_, _>>()?;
    let mut w = Written::new();
    let dir = ctx.out.join("cross");
    let mut reports = Vec::new();
    for run in &runs {
        for o in run {
            write_outcome(&mut w, &dir.join(slug(&o.report.setup)).join(&o.report.test_dataset), o)?;
            reports.push(o.report.clone());
        }
    }
    let mut body = String::new();
    for d in &loaded.datasets {
        let held: Vec<ExperimentReport> = reports
            .iter()
            .filter(|r| r.test_dataset == d.corpus.id())
            .cloned()
            .collect();
        body.push_str(&format!("## Held out: {}\n\n{}\n", d.corpus.id(), markdown_table(&held)));
    }
    w.put(dir.join("results.md"), &markdown_with_hash(&ctx.hash, "Cross-dataset results", &body))?;
    w.put(dir.join("results.csv"), &reports_csv(&ctx.hash, &reports))?;
    Ok(w)
}

#[derive(Debug, Serialize)]
struct Evaluation {
    config_hash: String,
    model: String,
    schema_hash: String,
    setup: String,
    dataset: String,
    /// `test-split` or `all`.
    documents: String,
    n: usize,
    confusion: Confusion,
    test: deceptext::eval::Metrics,
    auc: f64,
}

pub fn evaluate(ctx: &Context, model_path: &Path, dataset: Option<&str>) -> CliResult<Written> {
    let text = std::fs::read_to_string(model_path)
        .map_err(|e| Failure::from(e).context(format!("reading {}", model_path.display())))?;
    let model = TrainedModel::from_json(&text).map_err(|e| Failure::from(e).context(model_path.display().to_string()))?;
    if model.metadata.config_hash != ctx.hash {
        return Err(Failure::mismatch(format!(
            "{} was trained under config {} but the current config hashes to {}",
            model_path.display(),
            model.metadata.config_hash,
            ctx.hash
        )));
    }
    let schema = model.feature_schema()?;
    let loaded = load(ctx, Needs::Setups)?;
    let mut candidates = loaded.experiment_datasets(ctx)?;
    candidates.extend(loaded.datasets.iter().cloned());
    let name = dataset.unwrap_or(&model.metadata.dataset_id);
    let d = candidates
        .iter()
        .find(|d| d.corpus.id() == name)
        .ok_or_else(|| Failure::input(format!("no configured dataset is called {name:?}; pass --dataset")))?;
    let lex = loaded.lexicons_for(d.corpus.language());
    if let (Some(want), Some(have)) = (&schema.lexicon_version, lex) {
        if want != have.version() {
            return Err(Failure::mismatch(format!(
                "model uses lexicon version {want} but {} is loaded",
                have.version()
            )));
        }
    }
    // Without --dataset the model is scored on the test share of the
    // dataset it was trained on, split exactly as during training.
    let (docs, which) = if dataset.is_none() {
        let c = &ctx.config;
        let a = split(&d.corpus, c.split.ratios(), c.seed, c.split.stratified)?;
        let test: HashSet<&str> = a.test.iter().map(String::as_str).collect();
        let docs: Vec<_> = d.docs.iter().filter(|p| test.contains(p.id())).cloned().collect();
        (docs, "test-split")
    } else {
        (d.docs.clone(), "all")
    };
    let m = schema.transform(&docs, lex)?;
    let preds = model.predict_matrix(&m, &schema.hash())?;
    let predicted: Vec<Label> = preds.iter().map(|p| Label::from_deceptive(p.deceptive)).collect();
    let confusion = Confusion::from_labels(&m.labels, &predicted);
    let scores: Vec<f64> = preds.iter().map(|p| p.probability).collect();
    let eval = Evaluation {
        config_hash: ctx.hash.clone(),
        model: model_path.display().to_string(),
        schema_hash: model.schema_hash.clone(),
        setup: model.setup.clone(),
        dataset: name.to_string(),
        documents: which.to_string(),
        n: docs.len(),
        confusion,
        test: metrics(&confusion),
        auc: auc(&scores, &m.labels)?,
    };

    let mut csv = csv::Writer::from_writer(Vec::new());
    csv.write_record(["doc_id", "gold", "probability", "label"]).expect("in-memory write");
    for ((id, gold), (p, l)) in m.doc_ids.iter().zip(&m.labels).zip(preds.iter().zip(&predicted)) {
        csv.write_record([id.clone(), gold.to_string(), format!("{:.6}", p.probability), l.to_string()])
            .expect("in-memory write");
    }
    let body = String::from_utf8(csv.into_inner().expect("flush")).expect("utf-8");

    let dir = ctx.out.join("evaluate").join(name).join(slug(&model.setup));
    let mut w = Written::new();
    w.put(dir.join("predictions.csv"), &csv_with_hash(&ctx.hash, &body))?;
    w.put(
        dir.join("evaluation.json"),
        &(serde_json::to_string_pretty(&eval).expect("evaluation serializes") + "\n"),
    )?;
    let f = |v: Option<f64>| v.map_or("n/a".to_string(), |x| format!("{x:.4}"));
    let md = format!(
        "model: `{}`  \nschema hash: `{}`  \ndocuments: {} ({})\n\n| R | P | F1 | AUC | Accu. |\n|---|---|---|---|---|\n| {} | {} | {} | {:.4} | {} |\n",
        eval.setup,
        eval.schema_hash,
        eval.n,
        eval.documents,
        f(eval.test.recall),
        f(eval.test.precision),
        f(eval.test.f1),
        eval.auc,
        f(eval.test.accuracy)
    );
    let title = format!("Evaluation on {name}");
    w.put(dir.join("evaluation.md"), &markdown_with_hash(&ctx.hash, &title, &md))?;
    Ok(w)
}

fn find_reports(dir: &Path, found: &mut Vec<PathBuf>) -> std::io::Result<()> {
    if !dir.is_dir() {
        return Ok(());
    }
    let mut entries: Vec<PathBuf> = std::fs::read_dir(dir)?.map(|e| e.map(|e| e.path())).collect::<Result<_, _>>()?;
    entries.sort();
    for p in entries {
        if p.is_dir() {
            find_reports(&p, found)?;
        } else if p.file_name().is_some_and(|n| n == "report.json") {
            found.push(p);
        }
    }
    Ok(())
}

pub fn report(ctx: &Context, expectations_path: Option<&Path>) -> CliResult<Written> {
    let mut paths = Vec::new();
    find_reports(&ctx.out, &mut paths)?;
    if paths.is_empty() {
        return Err(Failure::input(format!(
            "no report.json under {}; run train or cross first",
            ctx.out.display()
        )));
    }
    let mut reports = Vec::with_capacity(paths.len());
    for p in &paths {
        let text = std::fs::read_to_string(p)?;
        let r: ExperimentReport = serde_json::from_str(&text)
            .map_err(|e| Failure::input(format!("{}: {e}", p.display())))?;
        if r.config_hash != ctx.hash {
            return Err(Failure::mismatch(format!(
                "{} was written under config {} but the current config hashes to {}",
                p.display(),
                r.config_hash,
                ctx.hash
            )));
        }
        reports.push(r);
    }
    let order = |r: &ExperimentReport| {
        ctx.config
            .features
            .setups
            .iter()
            .position(|s| s.canonical() == r.setup)
            .unwrap_or(usize::MAX)
    };
    reports.sort_by(|a, b| {
        (a.protocol.as_str(), a.test_dataset.as_str(), order(a))
            .cmp(&(b.protocol.as_str(), b.test_dataset.as_str(), order(b)))
    });

    let mut body = String::new();
    let mut groups: Vec<(String, String)> = Vec::new();
    for r in &reports {
        let key = (r.protocol.clone(), r.test_dataset.clone());
        if !groups.contains(&key) {
            groups.push(key);
        }
    }
    for (protocol, test) in &groups {
        let rows: Vec<ExperimentReport> = reports
            .iter()
            .filter(|r| &r.protocol == protocol && &r.test_dataset == test)
            .cloned()
            .collect();
        let heading = if protocol == "cross" {
            format!("Cross-dataset, held out {test}")
        } else {
            format!("Within {test}")
        };
        body.push_str(&format!("## {heading}\n\n{}\n", markdown_table(&rows)));
    }

    let cells: Vec<Expectation> = match expectations_path {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Failure::from(e).context(p.display().to_string()))?;
            expectations::parse(&text).map_err(|e| Failure::input(format!("{}: {e}", p.display())))?
        }
        None => expectations::builtin(),
    };
    let checks = expectations::check(&cells, &reports);

    let mut w = Written::new();
    w.put(ctx.out.join("report.md"), &markdown_with_hash(&ctx.hash, "Results", &body))?;
    w.put(ctx.out.join("report.csv"), &reports_csv(&ctx.hash, &reports))?;
    let summary = format!(
        "{} reference cells checked.\n\n{}",
        checks.len(),
        expectations::checks_markdown(&checks)
    );
    w.put(
        ctx.out.join("expectations.md"),
        &markdown_with_hash(&ctx.hash, "Reference comparison", &summary),
    )?;
    Ok(w)
}
