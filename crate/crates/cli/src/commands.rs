use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use edocc_core::backtest::{run_backtest, BacktestPlan, ForecastMatrix};
use edocc_core::calendar::{encode_calendar, CalendarOptions, HolidayCalendar};
use edocc_core::evaluation::{evaluate, improvement_pct, mae, EvalOptions, EvaluationReport};
use edocc_core::indicators::{ta_feature_matrix, TaConfig, WindowSpec};
use edocc_core::io::{format_timestamp, read_occupancy, write_occupancy};
use edocc_core::series::{
    impute_zero, midnight, split_chronological, CrowdingThreshold, MinMaxScaler,
};
use edocc_core::stats_tests::{
    compare_groups, rank_groups, ComparisonReport, PairSet, SIGNIFICANCE_LEVEL,
};
use edocc_core::synth::{calibration_report, generate};
use edocc_core::{Matrix, Series};
use serde::Serialize;

use crate::args::{Cli, Command, CompareArgs, EvaluateArgs, SynthArgs};
use crate::config::RunConfig;
use crate::report::{emit, to_json, write_atomic, Envelope, SCHEMA_VERSION};
use crate::{CoreContext, Failure};

struct Ctx {
    cfg: RunConfig,
    digest: String,
    out: Option<PathBuf>,
    quiet: bool,
}

impl Ctx {
    fn note(&self, msg: impl AsRef<str>) {
        if !self.quiet {
            eprintln!("{}", msg.as_ref());
        }
    }

    fn envelope<'a, T: Serialize>(&'a self, command: &'a str, body: T) -> Envelope<'a, T> {
        Envelope {
            schema_version: SCHEMA_VERSION,
            command,
            seed: self.cfg.seed,
            config_digest: &self.digest,
            body,
        }
    }
}

pub fn run(cli: Cli) -> Result<(), Failure> {
    let mut cfg = RunConfig::load(cli.global.config.as_deref())?;
    if let Some(s) = cli.global.seed {
        cfg.seed = s;
    }
    match &cli.command {
        Command::Synth(a) => cfg.apply_synth(a),
        Command::Features(a) => cfg.apply_features(a),
        Command::Backtest(a) => cfg.apply_backtest(a),
        Command::Evaluate(a) => cfg.apply_evaluate(a)?,
        Command::Compare(_) => {}
    }
    if cli.global.print_config {
        print!("{}", cfg.to_toml());
        return Ok(());
    }
    cfg.validate()?;
    let ctx = Ctx {
        digest: cfg.digest(),
        cfg,
        out: cli.global.out.clone(),
        quiet: cli.global.quiet,
    };
    match &cli.command {
        Command::Synth(a) => synth(&ctx, a),
        Command::Features(_) => features(&ctx),
        Command::Backtest(_) => backtest(&ctx),
        Command::Evaluate(a) => evaluate_cmd(&ctx, a),
        Command::Compare(a) => compare(&ctx, a),
    }
}

fn open(path: &Path) -> Result<BufReader<File>, Failure> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Failure::data(format!("opening {}: {e}", path.display())))
}

fn holidays(cfg: &RunConfig) -> Result<HolidayCalendar, Failure> {
    match &cfg.data.holidays {
        Some(p) => HolidayCalendar::read(open(p)?).context(p.display()),
        None => Ok(HolidayCalendar::default()),
    }
}

fn load_series(cfg: &RunConfig) -> Result<Series, Failure> {
    let path = cfg.input()?;
    let s: Series = read_occupancy(open(path)?).context(path.display())?;
    Ok(if cfg.data.impute_zero {
        impute_zero(&s)
    } else {
        s
    })
}

fn read_matrix(path: &Path) -> Result<Matrix, Failure> {
    ForecastMatrix::read_csv(open(path)?).context(path.display())
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn synth(ctx: &Ctx, a: &SynthArgs) -> Result<(), Failure> {
    let cfg = &ctx.cfg;
    let cal = holidays(cfg)?;
    let s: Series =
        generate(&cfg.synth.to_core(cfg.seed), cfg.synth.days, &cal).context("synth")?;
    let mut buf = Vec::with_capacity(s.len() * 24);
    write_occupancy(&s, &mut buf).context("synth")?;
    emit(ctx.out.as_deref(), &buf)?;
    ctx.note(format!(
        "synth: {} hours from {}",
        s.len(),
        format_timestamp(s.start())
    ));
    if let Some(path) = &a.report {
        let t = CrowdingThreshold::new(cfg.threshold).context("threshold")?;
        let r = calibration_report(&s, t).context("calibration")?;
        write_atomic(path, &to_json(&ctx.envelope("synth", r)))?;
    }
    Ok(())
}

fn features(ctx: &Ctx) -> Result<(), Failure> {
    let cfg = &ctx.cfg;
    let s = load_series(cfg)?;
    let cal = holidays(cfg)?;
    let cm = encode_calendar(
        &s,
        &cal,
        CalendarOptions {
            per_holiday: cfg.features.per_holiday,
        },
    );
    let ta = if cfg.features.ta {
        let tc = TaConfig {
            window: WindowSpec::new(cfg.features.window).context("features.window")?,
            ..TaConfig::default()
        };
        Some(ta_feature_matrix(&s, &tc).context("technical-analysis features")?)
    } else {
        None
    };

    let mut header = vec!["timestamp".to_string(), "occupancy".to_string()];
    header.extend(cm.columns().iter().cloned());
    if let Some(t) = &ta {
        header.extend(t.names().iter().map(|n| n.to_string()));
    }
    let mut out = header.join(",");
    out.push('\n');
    for i in 0..s.len() {
        let mut row = vec![format_timestamp(s.timestamp(i))];
        row.push(s.get(i).map(|v| v.to_string()).unwrap_or_default());
        row.extend(cm.row(i).iter().map(u32::to_string));
        if let Some(t) = &ta {
            row.extend(
                t.row(i)
                    .into_iter()
                    .map(|v| v.map(|x| x.to_string()).unwrap_or_default()),
            );
        }
        out.push_str(&row.join(","));
        out.push('\n');
    }
    emit(ctx.out.as_deref(), out.as_bytes())?;
    ctx.note(format!(
        "features: {} rows, {} columns",
        s.len(),
        header.len() - 1
    ));
    Ok(())
}

fn backtest(ctx: &Ctx) -> Result<(), Failure> {
    let cfg = &ctx.cfg;
    let s = load_series(cfg)?;
    let test_start = cfg.split.val_end;
    let test_end = test_start + chrono::Duration::days(cfg.split.test_days as i64);
    let scaler = if cfg.model.scale {
        let splits = split_chronological(
            &s,
            midnight(cfg.split.train_end),
            midnight(cfg.split.val_end),
        )
        .context("splitting series")?;
        Some(MinMaxScaler::fit(&splits.train).context("fitting scaler on the training split")?)
    } else {
        None
    };
    let model = cfg
        .model
        .name
        .build::<f64>(cfg.model.period, &cfg.model.lags)
        .context("model")?;
    let plan = BacktestPlan {
        window_len: cfg.plan.window,
        horizon: cfg.plan.horizon,
        anchor_hour: 0,
    };
    let m = run_backtest(
        &s,
        model.as_ref(),
        &plan,
        test_start,
        test_end,
        scaler.as_ref(),
    )
    .context(format!("backtest of {}", model.name()))?;
    let mut buf = Vec::new();
    m.write_csv(&mut buf).context("matrix")?;
    emit(ctx.out.as_deref(), &buf)?;
    ctx.note(format!(
        "backtest: {} x {} matrix for {} ({} .. {})",
        m.n_origins(),
        m.horizon(),
        model.name(),
        test_start,
        test_end
    ));
    Ok(())
}

fn evaluate_cmd(ctx: &Ctx, a: &EvaluateArgs) -> Result<(), Failure> {
    let cfg = &ctx.cfg;
    let m = read_matrix(&a.matrix)?;
    let s = load_series(cfg)?;
    let splits = split_chronological(
        &s,
        midnight(cfg.split.train_end),
        midnight(cfg.split.val_end),
    )
    .context("splitting series")?;
    splits.train.require_complete().context("training split")?;
    let opts = EvalOptions {
        alpha: cfg.metrics.alpha,
        msis_period: cfg.metrics.msis_period,
        threshold: CrowdingThreshold::new(cfg.threshold).context("threshold")?,
        bootstrap_iters: cfg.metrics.bootstrap_iters,
        seed: cfg.seed,
        score: cfg.metrics.score,
    };
    let name = a.name.clone().unwrap_or_else(|| stem(&a.matrix));
    let mut report: EvaluationReport =
        evaluate(&name, &m, splits.train.values(), &opts).context("evaluation")?;
    if let Some(b) = &a.benchmark {
        let bench = read_matrix(b)?;
        m.check_aligned(&bench)
            .context(format!("benchmark {}", b.display()))?;
        report.improvement_vs_benchmark =
            Some(improvement_pct(report.mae, mae(&bench)).context("improvement")?);
    }
    emit(
        ctx.out.as_deref(),
        &to_json(&ctx.envelope("evaluate", &report)),
    )?;
    ctx.note(format!("evaluate: {name} MAE {:.4}", report.mae));
    Ok(())
}

#[derive(Serialize)]
struct ModelSummary {
    name: String,
    n: usize,
    mae: f64,
    mean_rank: f64,
}

#[derive(Serialize)]
struct CompareBody {
    alpha: f64,
    pair_set: String,
    models: Vec<ModelSummary>,
    #[serde(flatten)]
    result: ComparisonReport,
}

fn compare(ctx: &Ctx, a: &CompareArgs) -> Result<(), Failure> {
    if a.matrices.len() < 2 {
        return Err(Failure::usage("compare needs at least two --matrix files"));
    }
    let names: Vec<String> = match &a.names {
        Some(n) if n.len() != a.matrices.len() => {
            return Err(Failure::usage(format!(
                "{} names for {} matrices",
                n.len(),
                a.matrices.len()
            )))
        }
        Some(n) => n.clone(),
        None => a.matrices.iter().map(|p| stem(p)).collect(),
    };
    let mut sorted = names.clone();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != names.len() {
        return Err(Failure::usage("model names must be distinct; pass --names"));
    }

    let mats = a
        .matrices
        .iter()
        .map(|p| read_matrix(p))
        .collect::<Result<Vec<_>, _>>()?;
    for (p, m) in a.matrices.iter().zip(&mats).skip(1) {
        mats[0].check_aligned(m).context(p.display())?;
    }
    let errors: Vec<Vec<f64>> = mats.iter().map(|m| m.abs_errors()).collect();
    let groups: Vec<&[f64]> = errors.iter().map(Vec::as_slice).collect();
    let set = match &a.against {
        Some(b) => PairSet::Against(b.clone()),
        None => PairSet::All,
    };
    let result = compare_groups(&names, &groups, &set).context("comparison")?;
    let ranks = rank_groups(&groups).context("comparison")?;
    let models = names
        .iter()
        .zip(&mats)
        .zip(&ranks.mean_ranks)
        .map(|((n, m), r)| ModelSummary {
            name: n.clone(),
            n: m.truth().len(),
            mae: mae(m),
            mean_rank: *r,
        })
        .collect();
    let body = CompareBody {
        alpha: SIGNIFICANCE_LEVEL,
        pair_set: match &a.against {
            Some(b) => format!("against:{b}"),
            None => "all".into(),
        },
        models,
        result,
    };
    emit(
        ctx.out.as_deref(),
        &to_json(&ctx.envelope("compare", &body)),
    )?;
    ctx.note(format!(
        "compare: {} models, H = {:.4}",
        names.len(),
        body.result.h
    ));
    Ok(())
}
