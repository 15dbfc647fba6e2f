use std::fs;
use std::io::Write;
use std::path::Path;

use avclab::aerm::{aerm_finite, aerm_halfspace, AermConfig};
use avclab::corruption::{corrupted_evaluate, zero_one_loss, TabularRelation};
use avclab::exact::{format_rational, parse_rational, ExactReal, Extended, Rational, Vector};
use avclab::experiments::{
    random_rational_dataset, run_monotonicity, run_sample_complexity, summarize, DistributionSpec, ExperimentRecord,
    RunOptions, DEFAULT_HOLDOUT,
};
use avclab::geometry::{ConstraintSet, LpNorm};
use avclab::hypotheses::{Halfspace, Label, LabeledDataset};
use avclab::io::{
    CertificateJson, ConstraintSetJson, DatasetJson, ErmResultJson, FiniteClassJson, HalfspaceJson, IndexedDatasetJson,
    TabularRelationJson,
};
use avclab::risk::{
    generalization_bound, massart_bound, rademacher_complexity_capped, rademacher_estimate, sample_complexity_bound,
    LossVectorSet,
};
use avclab::shattering::{
    avc_theorem_value, certify_unachievable, finite_loss_patterns, point_indicator_construction, shattered_witness,
    HalfspaceOracle, LossPattern,
};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::args::{BodyArgs, ClassKind, Command, Construction};
use crate::{CliError, CliResult};

pub fn run(command: &Command) -> CliResult<Value> {
    match command {
        Command::Dualnorm { d, w, x, body } => dualnorm(*d, w, x.as_deref(), body),
        Command::CorruptEval { halfspace, a, b, data, x, body } => {
            let h = match (halfspace, a, b) {
                (Some(path), _, _) => read_json::<HalfspaceJson>(path)?.to_halfspace()?,
                (None, Some(a), Some(b)) => Halfspace::new(parse_vector(a)?, parse_rational(b)?),
                _ => return Err(usage("give --halfspace FILE or both --a and --b")),
            };
            corrupt_eval(&h, data.as_deref(), x.as_deref(), body)
        }
        Command::Shatter { class, d, data, labels, body } => match class {
            ClassKind::Pointind => shatter_pointind(*d, labels.as_deref(), body),
            ClassKind::Halfspace => {
                let path = data.as_deref().ok_or_else(|| usage("--data is required for the halfspace class"))?;
                let data = read_dataset(path)?;
                let body = body.resolve(Some(data.dim()))?;
                let set = HalfspaceOracle::new(&data, &body)?.pattern_set()?;
                Ok(pattern_doc("halfspace", data.len(), &set))
            }
        },
        Command::Avc { d, trials, label_vectors, seed, body } => avc(*d, *trials, *label_vectors, *seed, body),
        Command::Certify { data, body } => {
            let data = read_dataset(data)?;
            let body = body.resolve(Some(data.dim()))?;
            let cert = certify_unachievable(&data, &body)?;
            let appendix_ok = cert.appendix.as_ref().is_some_and(|a| a.verify(&data, &body));
            let mut doc = serde_json::to_value(CertificateJson::from(&cert))?;
            doc["verified"] = json!(appendix_ok && !cert.is_feasible());
            Ok(doc)
        }
        Command::Aerm { data, finite, max_n, body } => {
            let config = AermConfig { max_n: *max_n };
            match (data, finite) {
                (Some(path), None) => {
                    let data = read_dataset(path)?;
                    let body = body.resolve(Some(data.dim()))?;
                    Ok(serde_json::to_value(ErmResultJson::from(&aerm_halfspace(&data, &body, &config)?))?)
                }
                (None, Some(path)) => {
                    let input: FiniteInput = read_json(path)?;
                    let class = input.class.to_class()?;
                    let (_, relation) = input.relation.to_relation()?;
                    let data = input.data.to_dataset()?;
                    Ok(serde_json::to_value(ErmResultJson::from(&aerm_finite(&class, &relation, &data)?))?)
                }
                _ => Err(usage("give exactly one of --data or --finite")),
            }
        }
        Command::Rademacher { vectors, data, cap, samples, seed, body } => {
            rademacher(vectors.as_deref(), data.as_deref(), *cap, *samples, *seed, body)
        }
        Command::Bound { d, eps, delta, c, rad, n } => bound(*d, eps.as_deref(), delta, c, rad.as_deref(), *n),
        Command::Construct { construction, d, labels, out, body } => {
            construct(*construction, *d, labels.as_deref(), out.as_deref(), body)
        }
        Command::Experiment { config, out, summary, seed, timing } => {
            experiment(config, out.as_deref(), summary.as_deref(), *seed, *timing)
        }
    }
}

fn usage(msg: &str) -> CliError {
    CliError::Usage(msg.to_string())
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn read_dataset(path: &Path) -> CliResult<LabeledDataset> {
    Ok(read_json::<DatasetJson>(path)?.to_dataset()?)
}

fn parse_vector(s: &str) -> CliResult<Vector> {
    Ok(s.split(',').map(parse_rational).collect::<avclab::Result<Vector>>()?)
}

fn parse_labels(s: &str) -> CliResult<Vec<Label>> {
    s.split(',')
        .map(|t| {
            let v: i64 = t.trim().parse().map_err(|_| usage(&format!("label {t:?} is not -1 or 1")))?;
            Ok(Label::from_sign(v)?)
        })
        .collect()
}

impl BodyArgs {
    /// Builds the body; `d` is needed for every shape option except a file.
    pub fn resolve(&self, d: Option<usize>) -> CliResult<ConstraintSet> {
        let chosen = [self.body.is_some(), self.linf.is_some(), self.l1.is_some(), self.l2.is_some(), self.identity]
            .iter()
            .filter(|&&b| b)
            .count();
        if chosen != 1 {
            return Err(usage("choose exactly one of --body, --linf, --l1, --l2, --identity"));
        }
        if let Some(path) = &self.body {
            if self.lineality.is_some() {
                return Err(usage("--lineality cannot be combined with --body; put it in the file"));
            }
            let body = read_json::<ConstraintSetJson>(path)?.to_constraint_set()?;
            if let Some(d) = d {
                if d != body.dim() {
                    return Err(CliError::Domain(avclab::Error::DimensionMismatch { expected: d, found: body.dim() }));
                }
            }
            return Ok(body);
        }
        let d = d.ok_or_else(|| usage("--d is required to build this body"))?;
        let body = if self.identity {
            ConstraintSet::identity(d)
        } else {
            let (p, eps) = match (&self.linf, &self.l1, &self.l2) {
                (Some(e), _, _) => (LpNorm::Inf, e),
                (_, Some(e), _) => (LpNorm::One, e),
                (_, _, Some(e)) => (LpNorm::Two, e),
                _ => unreachable!("exactly one shape was chosen"),
            };
            ConstraintSet::lp_ball(d, p, parse_rational(eps)?)?
        };
        match &self.lineality {
            Some(spec) => {
                let basis = spec.split(';').map(parse_vector).collect::<CliResult<Vec<_>>>()?;
                Ok(body.with_lineality(basis)?)
            }
            None => Ok(body),
        }
    }
}

fn extended_json(e: &Extended) -> Value {
    match e {
        Extended::Infinite => json!({ "exact": "inf", "approx": null }),
        Extended::Finite(v) => exact_real_json(v),
    }
}

fn exact_real_json(v: &ExactReal) -> Value {
    json!({ "exact": v.to_string(), "approx": v.to_f64() })
}

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn dualnorm(d: Option<usize>, w: &str, x: Option<&str>, body: &BodyArgs) -> CliResult<Value> {
    let w = parse_vector(w)?;
    let body = body.resolve(Some(d.unwrap_or(w.len())))?;
    let dual = body.dual_seminorm(&w)?;
    let mut doc = json!({ "w": strings(&w), "dual_seminorm": extended_json(&dual) });
    if body.is_polyhedral() && !dual.is_infinite() {
        doc["support_vertex"] = json!(strings(&body.support_vertex(&w)?));
    }
    if let Some(x) = x {
        let x = parse_vector(x)?;
        doc["x"] = json!(strings(&x));
        doc["seminorm"] = extended_json(&body.seminorm(&x)?);
    }
    Ok(doc)
}

fn corrupt_eval(h: &Halfspace, data: Option<&Path>, x: Option<&str>, body: &BodyArgs) -> CliResult<Value> {
    let body = body.resolve(Some(h.dim()))?;
    let dual = body.dual_seminorm(&h.a)?;
    let mut doc = json!({ "halfspace": HalfspaceJson::from(h), "dual_seminorm": extended_json(&dual) });
    match (data, x) {
        (Some(path), _) => {
            let data = read_dataset(path)?;
            let mut results = Vec::with_capacity(data.len());
            let mut losses = 0usize;
            for (p, c) in data.examples() {
                let out = corrupted_evaluate(h, &body, p)?;
                let loss = zero_one_loss(out, c);
                losses += usize::from(loss);
                results.push(json!({ "x": strings(p), "label": c.sign(), "corrupted": out.symbol(), "loss": loss }));
            }
            doc["results"] = json!(results);
            doc["losses"] = json!(losses);
            doc["risk"] = json!(format_rational(&avclab::risk::risk_from_count(losses, data.len())));
        }
        (None, Some(x)) => {
            let p = parse_vector(x)?;
            let out = corrupted_evaluate(h, &body, &p)?;
            doc["results"] = json!([{ "x": strings(&p), "corrupted": out.symbol() }]);
        }
        (None, None) => return Err(usage("give --data FILE or --x POINT")),
    }
    Ok(doc)
}

fn pattern_doc(class: &str, n: usize, set: &std::collections::BTreeSet<LossPattern>) -> Value {
    json!({
        "class": class,
        "n": n,
        "shattered": set.len() == 1usize << n,
        "patterns": set.len(),
        "pattern_list": set.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
    })
}

fn shatter_pointind(d: Option<usize>, labels: Option<&str>, body: &BodyArgs) -> CliResult<Value> {
    let d = d.ok_or_else(|| usage("--d is required for the point-indicator class"))?;
    // The lattice relation is an integer ℓ∞ budget; other shapes have no tabulated counterpart here.
    let radius = match (&body.linf, &body.l1, &body.l2, &body.body, body.identity) {
        (Some(e), None, None, None, false) => parse_rational(e)?,
        (None, None, None, None, false) => Rational::from_integer(1.into()),
        _ => return Err(usage("the point-indicator class supports only an integer --linf budget")),
    };
    if !radius.is_integer() || radius < Rational::from_integer(0.into()) {
        return Err(usage("the lattice budget must be a nonnegative integer"));
    }
    let radius: i64 = radius.to_integer().try_into().map_err(|_| usage("lattice budget too large"))?;
    let inst = point_indicator_construction(d)?;
    let relation = TabularRelation::lattice_linf_for(&inst.class, radius, inst.indexed.ids());
    let indexed = match labels {
        Some(s) => inst.indexed.with_labels(parse_labels(s)?)?,
        None => inst.indexed.clone(),
    };
    let set = finite_loss_patterns(&inst.class, &relation, &indexed)?;
    let mut doc = pattern_doc("pointind", indexed.len(), &set);
    doc["points"] = json!(DatasetJson::from(&inst.data.with_labels(indexed.labels().to_vec())?).points);
    doc["labels"] = json!(indexed.labels().iter().map(|l| l.sign()).collect::<Vec<_>>());
    Ok(doc)
}

fn fresh_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(rand::random)
}

fn avc(d: usize, trials: usize, label_vectors: usize, seed: Option<u64>, body: &BodyArgs) -> CliResult<Value> {
    let seed = fresh_seed(seed);
    let body = body.resolve(Some(d))?;
    let value = avc_theorem_value(d, &body)?;
    let witness = shattered_witness(&body, d)?;
    let k = witness.points.len();

    // Witness check: the listed label vectors, or all of them when there are few.
    let label_sets: Vec<Vec<Label>> = if (1usize << k) <= label_vectors.max(1) {
        (0..1u64 << k).map(|m| (0..k).map(|i| if m >> i & 1 == 1 { Label::Pos } else { Label::Neg }).collect()).collect()
    } else {
        (0..label_vectors as u64)
            .map(|t| random_rational_dataset(k, 1, seed, t).map(|ds| ds.labels().to_vec()))
            .collect::<avclab::Result<_>>()?
    };
    let witness_verified = if body.is_polyhedral() {
        let mut ok = true;
        for labels in &label_sets {
            let data = witness.dataset(labels.clone())?;
            ok &= HalfspaceOracle::new(&data, &body)?.shattered()?;
        }
        Value::Bool(ok)
    } else {
        Value::Null
    };

    let counterexample = if body.is_polyhedral() {
        let mut certified = 0usize;
        for t in 0..trials {
            let data = random_rational_dataset(value + 1, d, seed, 1_000_000 + t as u64)?;
            let cert = certify_unachievable(&data, &body)?;
            if !cert.is_feasible() && cert.appendix.as_ref().is_some_and(|a| a.verify(&data, &body)) {
                certified += 1;
            }
        }
        json!({ "datasets": trials, "size": value + 1, "certified_not_shattered": certified, "all_certified": certified == trials })
    } else {
        Value::Null
    };
    Ok(json!({
        "d": d,
        "body": ConstraintSetJson::from(&body),
        "theorem_value": value,
        "witness": witness.points.iter().map(|p| strings(p)).collect::<Vec<_>>(),
        "witness_scale": format_rational(&witness.scale),
        "label_vectors_checked": label_sets.len(),
        "witness_verified": witness_verified,
        "counterexample_search_result": counterexample,
        "seed": seed,
    }))
}

#[derive(Deserialize)]
struct FiniteInput {
    class: FiniteClassJson,
    relation: TabularRelationJson,
    data: IndexedDatasetJson,
}

fn rademacher(
    vectors: Option<&Path>,
    data: Option<&Path>,
    cap: usize,
    samples: Option<usize>,
    seed: Option<u64>,
    body: &BodyArgs,
) -> CliResult<Value> {
    let set = match (vectors, data) {
        (Some(path), None) => {
            let raw: Vec<Vec<u8>> = read_json(path)?;
            let n = raw.first().map_or(0, Vec::len);
            LossVectorSet::new(n, raw)?
        }
        (None, Some(path)) => {
            let data = read_dataset(path)?;
            let body = body.resolve(Some(data.dim()))?;
            let patterns = HalfspaceOracle::new(&data, &body)?.pattern_set()?;
            LossVectorSet::new(data.len(), patterns.into_iter().map(|p| p.bits().to_vec()))?
        }
        _ => return Err(usage("give exactly one of --vectors or --data")),
    };
    let n = set.n();
    let massart = if n > 0 { json!(massart_bound(set.len(), n)) } else { Value::Null };
    if n > cap {
        if let Some(samples) = samples {
            let seed = fresh_seed(seed);
            let est = rademacher_estimate(&set, samples, seed)?;
            return Ok(json!({
                "kind": est.kind, "value": est.value, "samples": est.samples, "seed": est.seed,
                "n": n, "set_size": set.len(), "massart_bound": massart,
            }));
        }
    }
    let r = rademacher_complexity_capped(&set, cap)?;
    Ok(json!({
        "kind": "exact",
        "value": format_rational(&r),
        "approx": rational_f64(&r),
        "n": n,
        "set_size": set.len(),
        "massart_bound": massart,
    }))
}

fn rational_f64(r: &Rational) -> f64 {
    ExactReal::from_rational(r).to_f64()
}

fn bound(
    d: Option<usize>,
    eps: Option<&str>,
    delta: &str,
    c: &str,
    rad: Option<&str>,
    n: Option<usize>,
) -> CliResult<Value> {
    let delta_q = parse_rational(delta)?;
    if let Some(rad) = rad {
        let n = n.ok_or_else(|| usage("--n is required with --rad"))?;
        let value = generalization_bound(&parse_rational(rad)?, n, &delta_q)?;
        return Ok(json!({ "kind": "generalization", "rad": rad, "n": n, "delta": delta, "bound": value }));
    }
    let (d, eps) = match (d, eps) {
        (Some(d), Some(eps)) => (d, eps),
        _ => return Err(usage("give --d and --eps for the sample-complexity bound, or --rad and --n")),
    };
    let value = sample_complexity_bound(d, &parse_rational(eps)?, &delta_q, &parse_rational(c)?)?;
    Ok(json!({ "kind": "sample_complexity", "d": d, "eps": eps, "delta": delta, "C": c, "sample_complexity": value }))
}

fn write_file(dir: &Path, name: &str, doc: &Value) -> CliResult<String> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    fs::write(&path, serde_json::to_string_pretty(doc)? + "\n")?;
    Ok(path.display().to_string())
}

fn construct(
    construction: Construction,
    d: usize,
    labels: Option<&str>,
    out: Option<&Path>,
    body: &BodyArgs,
) -> CliResult<Value> {
    let mut files = Vec::new();
    let doc = match construction {
        Construction::Witness => {
            let body = body.resolve(Some(d))?;
            let w = shattered_witness(&body, d)?;
            let labels = match labels {
                Some(s) => parse_labels(s)?,
                None => vec![Label::Pos; w.points.len()],
            };
            let data = json!(DatasetJson::from(&w.dataset(labels)?));
            if let Some(dir) = out {
                files.push(write_file(dir, "dataset.json", &data)?);
                files.push(write_file(dir, "body.json", &json!(ConstraintSetJson::from(&body)))?);
            }
            json!({
                "construction": "witness",
                "d": d,
                "dataset": data,
                "body": ConstraintSetJson::from(&body),
                "min_dual_distance": exact_real_json(&w.min_dual_distance),
                "dual_basis_bound": format_rational(&w.dual_basis_bound),
                "scale": format_rational(&w.scale),
            })
        }
        Construction::PointIndicator => {
            let inst = point_indicator_construction(d)?;
            let data = match labels {
                Some(s) => inst.data.with_labels(parse_labels(s)?)?,
                None => inst.data.clone(),
            };
            let dataset = json!(DatasetJson::from(&data));
            let centers: Vec<Vec<String>> = inst.centers.iter().map(|c| strings(c)).collect();
            if let Some(dir) = out {
                files.push(write_file(dir, "dataset.json", &dataset)?);
                files.push(write_file(dir, "class.json", &json!(FiniteClassJson::from(&inst.class)))?);
                files.push(write_file(
                    dir,
                    "relation.json",
                    &json!(TabularRelationJson::new(inst.class.points(), &inst.relation)),
                )?);
            }
            json!({
                "construction": "point-indicator",
                "d": d,
                "dataset": dataset,
                "ids": inst.indexed.ids(),
                "centers": centers,
                "lattice_linf_budget": 1,
            })
        }
    };
    let mut doc = doc;
    if !files.is_empty() {
        doc["files"] = json!(files);
    }
    Ok(doc)
}

#[derive(Deserialize)]
#[serde(rename_all = "kebab-case")]
enum Mode {
    SampleComplexity,
    Monotonicity,
}

#[derive(Deserialize)]
struct ExperimentConfig {
    mode: Mode,
    spec: DistributionSpec,
    body: ConstraintSetJson,
    #[serde(default)]
    n_grid: Vec<usize>,
    n: Option<usize>,
    #[serde(default)]
    eps_grid: Vec<String>,
    trials: usize,
    seed: Option<u64>,
    holdout: Option<usize>,
    max_n: Option<usize>,
}

fn experiment(config: &Path, out: Option<&Path>, summary: Option<&Path>, seed: Option<u64>, timing: bool) -> CliResult<Value> {
    let cfg: ExperimentConfig = read_json(config)?;
    let seed = fresh_seed(seed.or(cfg.seed));
    let body = cfg.body.to_constraint_set()?;
    let options = RunOptions {
        holdout: cfg.holdout.unwrap_or(DEFAULT_HOLDOUT),
        aerm: AermConfig { max_n: cfg.max_n.unwrap_or(avclab::aerm::DEFAULT_MAX_N) },
        timing,
    };
    let eps_grid = cfg.eps_grid.iter().map(|e| parse_rational(e)).collect::<avclab::Result<Vec<_>>>()?;
    let (mode, records): (&str, Vec<ExperimentRecord>) = match cfg.mode {
        Mode::SampleComplexity => {
            let bodies = if eps_grid.is_empty() {
                vec![body]
            } else {
                eps_grid.iter().map(|e| body.with_radius(e.clone())).collect::<avclab::Result<_>>()?
            };
            let mut all = Vec::new();
            for b in &bodies {
                all.extend(run_sample_complexity(&cfg.spec, b, &cfg.n_grid, cfg.trials, seed, &options)?);
            }
            all.sort_by(|a, b| (a.n, &a.eps, a.trial).cmp(&(b.n, &b.eps, b.trial)));
            ("sample_complexity", all)
        }
        Mode::Monotonicity => {
            let n = cfg.n.ok_or_else(|| usage("monotonicity mode needs \"n\" in the config"))?;
            ("monotonicity", run_monotonicity(&cfg.spec, &body, &eps_grid, n, cfg.trials, seed, &options)?)
        }
    };
    let rows = summarize(&records);
    let mut doc = json!({
        "mode": mode,
        "seed": seed,
        "records": records.len(),
        "note": "synthetic experiment of original design; evidence on these distributions, not a proof of learnability",
    });
    match out {
        Some(path) => {
            let mut f = std::io::BufWriter::new(fs::File::create(path)?);
            for r in &records {
                writeln!(f, "{}", serde_json::to_string(r)?)?;
            }
            f.flush()?;
            doc["out"] = json!(path.display().to_string());
        }
        None => doc["record_list"] = serde_json::to_value(&records)?,
    }
    if let Some(path) = summary {
        let mut w = csv::Writer::from_path(path).map_err(|e| CliError::Domain(avclab::Error::Io(e.into())))?;
        for row in &rows {
            w.serialize(row).map_err(|e| CliError::Domain(avclab::Error::Io(e.into())))?;
        }
        w.flush()?;
        doc["summary"] = json!(path.display().to_string());
    } else {
        doc["summary_rows"] = serde_json::to_value(&rows)?;
    }
    Ok(doc)
}
