use serde_json::Value;
use wiretap_core::capacity::{
    achievable_region, approach2_rate, awgn_embedded_erasure, binary_entropy, c_biawgn, capacity_equivocation_region,
    secrecy_capacity, thangaraj_baseline, RegionPolygon,
};
use wiretap_core::codes::{
    ldpc_from_degree_distribution, read_alist, regular_ldpc, DegreeDistribution, LinearCode, NestedCodePair,
};
use wiretap_core::secrecy::{
    approach1_equivocation_bound, equivocation_lb_awgn, equivocation_lb_bsc, mc_equivocation_bec, EquivocationEstimate,
};
use wiretap_core::seeding::derive_seed;
use wiretap_core::thresholds::{
    bec_bp_threshold, check_secrecy_condition, empirical_bp_threshold_awgn, ThresholdResult, BP_MAX_ITER,
};
use wiretap_core::Error as CoreError;

use crate::config::{parse_ensemble, ChannelKind, CoarseChoice, EnsembleSpec, Estimator, ExperimentConfig};
use crate::error::CliError;
use crate::report::{num, opt_num, Report};

pub const DEFAULT_DE_TOL: f64 = 1e-6;
pub const DEFAULT_TARGET_WER: f64 = 1e-2;
/// Grid for compare-bsc when none is given: 50 points in (0, 1/2].
pub const COMPARE_BSC_POINTS: usize = 50;
const REGION_TOL: f64 = 1e-12;
const COMPARE_TOL: f64 = 1e-12;

fn text(s: impl Into<String>) -> Value {
    Value::String(s.into())
}

fn na() -> Value {
    text("na")
}

/// A sampled or loaded code and, when known, the ensemble it came from.
pub struct CodeSource {
    pub code: LinearCode,
    pub ensemble: Option<DegreeDistribution>,
    pub label: String,
}

fn ensemble_spec(cfg: &ExperimentConfig) -> Result<Option<EnsembleSpec>, CliError> {
    cfg.ensemble.as_deref().map(parse_ensemble).transpose()
}

/// Loads `--code` or samples `--ensemble` at length `--n` with a seed derived
/// from `--seed`.
pub fn build_code(cfg: &ExperimentConfig) -> Result<CodeSource, CliError> {
    match (&cfg.code, ensemble_spec(cfg)?) {
        (Some(_), Some(_)) => Err(CliError::Usage("give either --code or --ensemble, not both".into())),
        (Some(path), None) => {
            let code = read_alist(path).map_err(|e| match e {
                CoreError::Alist { .. } => CliError::Input {
                    path: path.clone(),
                    message: e.to_string(),
                },
                other => other.into(),
            })?;
            Ok(CodeSource {
                code,
                ensemble: None,
                label: path.display().to_string(),
            })
        }
        (None, Some(spec)) => {
            let n = cfg
                .n
                .ok_or_else(|| CliError::Usage("--n is required to sample an ensemble".into()))?;
            let seed = derive_seed(cfg.require_seed()?, "code", 0);
            let dd = spec.degree_distribution()?;
            let code = match spec {
                EnsembleSpec::Regular { dv, dc } if n * dv % dc == 0 => regular_ldpc(n, dv, dc, seed)?,
                _ => ldpc_from_degree_distribution(n, &dd, seed)?,
            };
            Ok(CodeSource {
                code,
                ensemble: Some(dd),
                label: cfg.ensemble.clone().unwrap_or_default(),
            })
        }
        (None, None) => Err(CliError::Usage("a code is required: --code PATH or --ensemble SPEC".into())),
    }
}

pub fn cmd_capacity(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let channel = cfg.require_channel()?;
    let grid = cfg.parameters()?;
    let mut report = Report::new(cfg, &["param", "C", "Cs", "approach2_rate", "gap"]);
    for p in grid {
        let model = channel.model(p);
        let cs = secrecy_capacity(&model)?;
        let a2 = approach2_rate(&model)?;
        let c = match channel {
            ChannelKind::Bec => 1.0 - p,
            ChannelKind::Bsc => 1.0 - binary_entropy(p),
            ChannelKind::Awgn => c_biawgn(p),
        };
        report.push(vec![num(p), num(c), num(cs), num(a2), num(cs - a2)]);
    }
    Ok(report)
}

const THRESHOLD_COLUMNS: &[&str] = &[
    "source",
    "channel",
    "code",
    "method",
    "estimate",
    "lo",
    "hi",
    "work",
    "trials",
    "word_errors",
    "wer_lo",
    "wer_hi",
    "above_grid",
];

fn threshold_row(source: &str, channel: ChannelKind, code: &str, t: &ThresholdResult) -> Vec<Value> {
    let opt_u = |x: Option<u64>| x.map_or(na(), Value::from);
    vec![
        text(source),
        text(channel.name()),
        text(code),
        text(t.method.as_str()),
        num(t.estimate),
        num(t.lo),
        num(t.hi),
        Value::from(t.work),
        opt_u(t.trials),
        opt_u(t.word_errors),
        opt_num(t.wer_interval.map(|w| w.0)),
        opt_num(t.wer_interval.map(|w| w.1)),
        Value::Bool(t.above_grid),
    ]
}

pub fn cmd_threshold(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let channel = cfg.require_channel()?;
    let mut report = Report::new(cfg, THRESHOLD_COLUMNS);
    let has_code = cfg.code.is_some() || cfg.ensemble.is_some();
    let override_value = match channel {
        ChannelKind::Bec | ChannelKind::Bsc => cfg.delta_star,
        ChannelKind::Awgn => cfg.lambda_star,
    };
    if !has_code && override_value.is_none() {
        return Err(CliError::Usage(
            "threshold needs --code or --ensemble (or a --delta-star/--lambda-star value to echo)".into(),
        ));
    }
    if has_code {
        match channel {
            ChannelKind::Bec => {
                let spec = ensemble_spec(cfg)?.ok_or_else(|| {
                    CliError::Usage("density evolution needs --ensemble; alist codes carry no degree distribution".into())
                })?;
                let tol = cfg.tol.unwrap_or(DEFAULT_DE_TOL);
                if !(tol > 0.0 && tol < 1.0) {
                    return Err(CliError::Usage(format!("--tol must lie in (0, 1), got {tol}")));
                }
                let t = bec_bp_threshold(&spec.degree_distribution()?, tol);
                report.push(threshold_row("computed", channel, cfg.ensemble.as_deref().unwrap_or(""), &t));
            }
            ChannelKind::Awgn => {
                let source = build_code(cfg)?;
                let grid = cfg.parameters()?;
                let trials = cfg.require_trials()?;
                let seed = derive_seed(cfg.require_seed()?, "threshold", 0);
                let target = cfg.target_wer.unwrap_or(DEFAULT_TARGET_WER);
                let t = empirical_bp_threshold_awgn(&source.code, &grid, trials, target, seed)?;
                report.push(threshold_row("computed", channel, &source.label, &t));
            }
            ChannelKind::Bsc => {
                return Err(CliError::Usage(
                    "computed thresholds exist for bec (density evolution) and awgn (empirical BP)".into(),
                ))
            }
        }
    }
    if let Some(v) = override_value {
        if !(v >= 0.0 && v.is_finite()) || (channel != ChannelKind::Awgn && v > 1.0) {
            return Err(CliError::Usage(format!("threshold override {v} is out of range")));
        }
        report.push(threshold_row("configured", channel, "", &ThresholdResult::user_supplied(v)));
    }
    Ok(report)
}

/// Word errors, error rate and its Wilson interval.
type WerSummary = (u64, f64, (f64, f64));

const SIMULATE_COLUMNS: &[&str] = &[
    "index",
    "estimator",
    "channel",
    "param",
    "method",
    "n",
    "message_bits",
    "coarse_dim",
    "rate",
    "trials",
    "trial_seed",
    "equivocation",
    "half_width",
    "erasure",
    "word_errors",
    "wer",
    "wer_lo",
    "wer_hi",
    "condition_configured",
    "margin_configured",
    "delta_star_computed",
    "condition_computed",
    "margin_computed",
];

/// `(holds, margin)` cells for one threshold, or `na` when none applies.
fn condition_cells(
    estimator: Estimator,
    channel: ChannelKind,
    param: f64,
    threshold: Option<f64>,
) -> Result<[Value; 2], CliError> {
    let Some(t) = threshold else {
        return Ok([na(), na()]);
    };
    if estimator == Estimator::Approach1 {
        // the coarse code must be good at the eavesdropper's SNR: λ ≥ λ⋆
        let margin = param - t;
        return Ok([Value::Bool(margin >= 0.0), num(margin)]);
    }
    let c = check_secrecy_condition(&channel.model(param), t)?;
    Ok([Value::Bool(c.holds), num(c.margin)])
}

pub fn cmd_simulate(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let estimator = cfg
        .estimator
        .ok_or_else(|| CliError::Usage("--estimator is required".into()))?;
    let channel = cfg.channel.unwrap_or(estimator.channel());
    if channel != estimator.channel() {
        return Err(CliError::Usage(format!(
            "estimator {} runs on the {} channel, not {}",
            estimator.name(),
            estimator.channel().name(),
            channel.name()
        )));
    }
    let grid = cfg.parameters()?;
    let trials = cfg.require_trials()?;
    let seed = cfg.require_seed()?;
    let source = build_code(cfg)?;
    let coarse_choice = cfg.coarse.unwrap_or(estimator.default_coarse());
    let coarse = match coarse_choice {
        CoarseChoice::Code => source.code.clone(),
        CoarseChoice::Dual => source.code.dual(),
    };
    let pair = NestedCodePair::from_coarse(coarse)?;
    let max_iters = cfg.max_iters.unwrap_or(BP_MAX_ITER);

    let configured = match estimator {
        Estimator::Approach1 => cfg.lambda_star,
        _ => cfg.delta_star,
    };
    // The erasure conditions concern the code whose dual is the coarse code.
    let computed = match (estimator, coarse_choice, &source.ensemble) {
        (Estimator::Approach1, _, _) | (_, CoarseChoice::Code, _) | (_, _, None) => None,
        (_, CoarseChoice::Dual, Some(dd)) => Some(bec_bp_threshold(dd, cfg.tol.unwrap_or(DEFAULT_DE_TOL)).estimate),
    };

    let mut report = Report::new(cfg, SIMULATE_COLUMNS);
    for (g, &p) in grid.iter().enumerate() {
        channel.model(p).validate()?;
        let trial_seed = derive_seed(seed, "simulate", g as u64);
        let (est, wer): (EquivocationEstimate, Option<WerSummary>) = match estimator {
            Estimator::BecExact => (mc_equivocation_bec(&pair, p, trials, trial_seed)?, None),
            Estimator::Approach2Awgn => (equivocation_lb_awgn(&pair, p, trials, trial_seed)?, None),
            Estimator::Approach2Bsc => (equivocation_lb_bsc(&pair, p, trials, trial_seed)?, None),
            Estimator::Approach1 => {
                let r = approach1_equivocation_bound(&pair, p, trials, max_iters, trial_seed)?;
                (r.estimate, Some((r.word_errors, r.word_error_rate, r.wer_interval)))
            }
        };
        let [held_cfg, margin_cfg] = condition_cells(estimator, channel, p, configured)?;
        let [held_comp, margin_comp] = condition_cells(estimator, channel, p, computed)?;
        report.push(vec![
            Value::from(g),
            text(estimator.name()),
            text(channel.name()),
            num(p),
            text(est.method.as_str()),
            Value::from(pair.n()),
            Value::from(pair.message_len()),
            Value::from(pair.coarse_dim()),
            num(pair.information_rate()),
            Value::from(est.trials),
            Value::from(trial_seed),
            num(est.rate),
            num(est.half_width),
            opt_num(est.erasure),
            wer.map_or(na(), |w| Value::from(w.0)),
            opt_num(wer.map(|w| w.1)),
            opt_num(wer.map(|w| w.2 .0)),
            opt_num(wer.map(|w| w.2 .1)),
            held_cfg,
            margin_cfg,
            opt_num(computed),
            held_comp,
            margin_comp,
        ]);
    }
    Ok(report)
}

pub fn cmd_region(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let snr = cfg
        .param
        .ok_or_else(|| CliError::Usage("region needs --param (the eavesdropper SNR)".into()))?;
    let coarse_rate = cfg
        .coarse_rate
        .ok_or_else(|| CliError::Usage("region needs --coarse-rate".into()))?;
    let dual_rate = cfg.dual_rate.unwrap_or_else(|| awgn_embedded_erasure(snr));
    let achievable = achievable_region(snr, coarse_rate, dual_rate)?;
    let capacity = capacity_equivocation_region(snr)?;

    let mut report = Report::new(cfg, &["polygon", "vertex", "rate", "equivocation", "inside_capacity"]);
    let mut push_polygon = |name: &str, poly: &RegionPolygon| {
        for (i, v) in poly.vertices().iter().enumerate() {
            report.push(vec![
                text(name),
                Value::from(i),
                num(v.rate),
                num(v.equivocation),
                Value::Bool(capacity.contains(*v, REGION_TOL)),
            ]);
        }
    };
    push_polygon("achievable", &achievable);
    push_polygon("capacity", &capacity);
    report.push(vec![
        text("inclusion"),
        text("achievable-in-capacity"),
        Value::Null,
        Value::Null,
        Value::Bool(capacity.contains_polygon(&achievable, REGION_TOL)),
    ]);
    Ok(report)
}

/// Rows `q, h(q), 2q, -log2(1-q)` plus both ordering checks. Fails with a
/// numeric error, after building the report, if any check is violated.
pub fn cmd_compare_bsc(cfg: &ExperimentConfig) -> Result<(Report, bool), CliError> {
    let grid = if cfg.param.is_some() || cfg.grid.is_some() {
        cfg.parameters()?
    } else {
        (1..=COMPARE_BSC_POINTS)
            .map(|i| 0.5 * i as f64 / COMPARE_BSC_POINTS as f64)
            .collect()
    };
    if let Some(&q) = grid.iter().find(|&&q| !(q > 0.0 && q <= 0.5)) {
        return Err(CliError::Usage(format!("crossover {q} is outside (0, 1/2]")));
    }
    let mut report = Report::new(
        cfg,
        &["q", "h_q", "two_q", "baseline", "two_q_ge_baseline", "two_q_le_h_q"],
    );
    let mut all_hold = true;
    for q in grid {
        let h = binary_entropy(q);
        let two_q = 2.0 * q;
        let base = thangaraj_baseline(q)?;
        let ge = two_q >= base - COMPARE_TOL;
        let le = two_q <= h + COMPARE_TOL;
        all_hold &= ge && le;
        report.push(vec![num(q), num(h), num(two_q), num(base), Value::Bool(ge), Value::Bool(le)]);
    }
    Ok((report, all_hold))
}
