//! Task specifications, their validation into jobs, and job execution.
//!
//! A [`TaskSpec`] carries descriptor strings; [`prepare`] parses them into a
//! [`Job`] (failures are input errors, exit 2) and [`execute`] runs the job
//! against the library (failures are runtime errors, exit 1). Subcommands and
//! scenario tasks share this path.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use radial_orlicz::families;
use radial_orlicz::geometry::{
    pth_radial_combination, radial_metric, ConvexBodySupport, Direction, GridBody, StarBody,
};
use radial_orlicz::inequalities::{
    check_dual_log_bm, check_dual_log_minkowski, check_dual_orlicz_bm, check_dual_orlicz_minkowski, check_polar_log,
    default_eps_schedule, first_variation_volume, summarize, IneqReport, SweepRecord, SweepSummary,
};
use radial_orlicz::integrate::{
    dual_orlicz_mixed_volume, intersection_body_radial, intersection_power_monte_carlo, volume_estimate, SphericalRule,
};
use radial_orlicz::madd::{
    check_sublinearity_counterexample, m_set_equivalence_gap, radial_m_sum, sublinearity_gap, MSet,
};
use radial_orlicz::orlicz::{
    check_associativity, find_associativity_witness, orlicz_sum, OrliczFunction, Registered, ScalarFunction,
};

use crate::error::{CliError, CliResult};
use crate::registry::{parse_body, parse_mset, parse_orlicz, parse_registered, parse_rule, parse_support};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Op {
    Volume,
    Sum,
    MixedVolume,
    Check,
    FirstVariation,
    MAdd,
    IntersectionBody,
    IntersectionMonteCarlo,
    CompareSum,
    Associativity,
    AssociativityWitness,
    Sublinearity,
    MSetGap,
    Sweep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CheckKind {
    DualOrliczBm,
    DualLogBm,
    DualOrliczMinkowski,
    DualLogMinkowski,
    PolarLog,
}

impl FromStr for CheckKind {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        Ok(match s {
            "dual-orlicz-bm" => CheckKind::DualOrliczBm,
            "dual-log-bm" => CheckKind::DualLogBm,
            "dual-orlicz-minkowski" => CheckKind::DualOrliczMinkowski,
            "dual-log-minkowski" => CheckKind::DualLogMinkowski,
            "polar-log" => CheckKind::PolarLog,
            _ => return Err(CliError::Invalid(format!("unknown inequality '{s}'"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Two independent smooth stars.
    Star,
    /// A star and a random dilatate of it.
    Dilatate,
    /// Two independent ellipsoid supports.
    Ellipsoid,
    /// An ellipsoid support and a random dilatate of it.
    EllipsoidDilatate,
}

impl FromStr for Family {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        Ok(match s {
            "star" => Family::Star,
            "dilatate" => Family::Dilatate,
            "ellipsoid" => Family::Ellipsoid,
            "ellipsoid-dilatate" => Family::EllipsoidDilatate,
            _ => return Err(CliError::Invalid(format!("unknown family '{s}'"))),
        })
    }
}

/// One operation with its arguments as descriptor strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskSpec {
    pub op: Op,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bodies: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi2: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probe: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub check: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
    /// First seed of a sweep.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Number of seeds in a sweep, or of trials in a witness search.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolutions: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<Vec<f64>>,
}

impl TaskSpec {
    pub fn new(op: Op) -> Self {
        Self {
            op,
            bodies: Vec::new(),
            phi: None,
            phi2: None,
            rule: None,
            probe: None,
            check: None,
            mset: None,
            direction: None,
            eta: None,
            p: None,
            t: None,
            family: None,
            dimension: None,
            seed: None,
            count: None,
            samples: None,
            resolutions: None,
            eps: None,
        }
    }
}

pub enum CheckInput {
    Stars(Vec<StarBody>),
    Supports(ConvexBodySupport, ConvexBodySupport),
}

/// Parsed, validated task.
pub enum Job {
    Volume {
        body: StarBody,
        rule: SphericalRule,
    },
    Sum {
        phi: OrliczFunction,
        bodies: Vec<StarBody>,
        probe: SphericalRule,
    },
    MixedVolume {
        phi: ScalarFunction,
        k: StarBody,
        l: StarBody,
        rule: SphericalRule,
    },
    Check {
        kind: CheckKind,
        phi: Option<OrliczFunction>,
        t: Option<f64>,
        input: CheckInput,
        rule: SphericalRule,
    },
    FirstVariation {
        phi1: OrliczFunction,
        phi2: OrliczFunction,
        k: StarBody,
        l: StarBody,
        rule: SphericalRule,
        eps: Vec<f64>,
    },
    MAdd {
        mset: MSet,
        bodies: Vec<StarBody>,
        probe: SphericalRule,
    },
    IntersectionBody {
        phi: OrliczFunction,
        body: StarBody,
        direction: Direction,
        rule: SphericalRule,
        eta: f64,
    },
    IntersectionMonteCarlo {
        p: f64,
        body: StarBody,
        direction: Direction,
        samples: usize,
        seed: u64,
    },
    CompareSum {
        p: f64,
        phi: OrliczFunction,
        k: StarBody,
        l: StarBody,
        probe: SphericalRule,
    },
    Associativity {
        phi: OrliczFunction,
        bodies: [StarBody; 3],
        probe: SphericalRule,
    },
    AssociativityWitness {
        phi: OrliczFunction,
        probe: SphericalRule,
        seed: u64,
        trials: usize,
    },
    Sublinearity {
        phi: OrliczFunction,
    },
    MSetGap {
        phi: OrliczFunction,
        k: StarBody,
        l: StarBody,
        resolutions: Vec<usize>,
        probe: SphericalRule,
    },
    Sweep {
        kind: CheckKind,
        phi: Option<OrliczFunction>,
        t: Option<f64>,
        family: Family,
        n: usize,
        seeds: Vec<u64>,
        rule: SphericalRule,
    },
}

pub enum Output {
    Json(Value),
    Sweep { records: Vec<SweepRecord>, summary: SweepSummary },
}

fn need<'a, T>(v: &'a Option<T>, what: &str, op: Op) -> CliResult<&'a T> {
    v.as_ref().ok_or_else(|| CliError::Invalid(format!("{op:?} needs '{what}'")))
}

fn bodies(spec: &TaskSpec, count: Option<usize>) -> CliResult<Vec<StarBody>> {
    if let Some(c) = count {
        if spec.bodies.len() != c {
            return Err(CliError::Invalid(format!("{:?} needs {c} bodies, got {}", spec.op, spec.bodies.len())));
        }
    } else if spec.bodies.is_empty() {
        return Err(CliError::Invalid(format!("{:?} needs at least one body", spec.op)));
    }
    let parsed: Vec<StarBody> = spec.bodies.iter().map(|d| parse_body(d)).collect::<CliResult<_>>()?;
    let n = parsed[0].dimension();
    if parsed.iter().any(|b| b.dimension() != n) {
        return Err(CliError::Invalid("bodies have different dimensions".to_string()));
    }
    Ok(parsed)
}

fn rule_for(desc: &str, n: usize) -> CliResult<SphericalRule> {
    let rule = parse_rule(desc)?;
    if rule.dimension() != n {
        return Err(CliError::Invalid(format!("rule '{desc}' has dimension {}, bodies have {n}", rule.dimension())));
    }
    Ok(rule)
}

fn grid_probe(desc: &str, n: usize) -> CliResult<SphericalRule> {
    let rule = rule_for(desc, n)?;
    if rule.is_monte_carlo() {
        return Err(CliError::Invalid(format!("probe '{desc}' must be a deterministic rule to store a grid")));
    }
    Ok(rule)
}

fn direction(spec: &TaskSpec, n: usize) -> CliResult<Direction> {
    let d = need(&spec.direction, "direction", spec.op)?;
    if d.len() != n {
        return Err(CliError::Invalid(format!("direction has length {}, bodies have dimension {n}", d.len())));
    }
    Direction::new(d.clone()).map_err(|e| CliError::Invalid(e.to_string()))
}

fn log_t(spec: &TaskSpec, n: usize) -> CliResult<f64> {
    if let Some(t) = spec.t {
        return Ok(t);
    }
    match parse_registered(need(&spec.phi, "phi or t", spec.op)?, 1, n)? {
        Registered::LogCombination(t) => Ok(t),
        _ => Err(CliError::Invalid("dual-log-bm takes 'log-t:t' or an explicit t".to_string())),
    }
}

fn check_phi(
    spec: &TaskSpec,
    kind: CheckKind,
    arity: usize,
    n: usize,
) -> CliResult<(Option<OrliczFunction>, Option<f64>)> {
    Ok(match kind {
        CheckKind::DualOrliczBm => (Some(parse_orlicz(need(&spec.phi, "phi", spec.op)?, arity, n)?), None),
        CheckKind::DualOrliczMinkowski => (Some(parse_orlicz(need(&spec.phi, "phi", spec.op)?, 1, n)?), None),
        CheckKind::DualLogBm => (None, Some(log_t(spec, n)?)),
        CheckKind::DualLogMinkowski | CheckKind::PolarLog => (None, None),
    })
}

fn power_phi(p: f64, arity: usize, n: usize) -> CliResult<OrliczFunction> {
    let desc = if p > 0.0 { format!("lp:{p}") } else { format!("psi-lp:{p}") };
    parse_orlicz(&desc, arity, n)
}

pub fn prepare(spec: &TaskSpec) -> CliResult<Job> {
    let op = spec.op;
    Ok(match op {
        Op::Volume => {
            let body = bodies(spec, Some(1))?.remove(0);
            let rule = rule_for(need(&spec.rule, "rule", op)?, body.dimension())?;
            Job::Volume { body, rule }
        }
        Op::Sum => {
            let bodies = bodies(spec, None)?;
            let n = bodies[0].dimension();
            let phi = parse_orlicz(need(&spec.phi, "phi", op)?, bodies.len(), n)?;
            Job::Sum { phi, probe: grid_probe(need(&spec.probe, "probe", op)?, n)?, bodies }
        }
        Op::MixedVolume => {
            let mut b = bodies(spec, Some(2))?;
            let n = b[0].dimension();
            let phi = match parse_registered(need(&spec.phi, "phi", op)?, 1, n)? {
                Registered::Function(f) => f.as_scalar().map_err(|e| CliError::Invalid(e.to_string()))?,
                Registered::Scalar(s) => s,
                Registered::LogCombination(_) => {
                    return Err(CliError::Invalid("log-t is a combination, not a mixed-volume function".to_string()))
                }
            };
            let rule = rule_for(need(&spec.rule, "rule", op)?, n)?;
            let l = b.remove(1);
            Job::MixedVolume { phi, k: b.remove(0), l, rule }
        }
        Op::Check => {
            let kind: CheckKind = need(&spec.check, "check", op)?.parse()?;
            let (input, n, arity) = if kind == CheckKind::PolarLog {
                if spec.bodies.len() != 2 {
                    return Err(CliError::Invalid("polar-log needs 2 convex bodies".to_string()));
                }
                let (k, l) = (parse_support(&spec.bodies[0])?, parse_support(&spec.bodies[1])?);
                if k.dimension() != l.dimension() {
                    return Err(CliError::Invalid("convex bodies have different dimensions".to_string()));
                }
                let n = k.dimension();
                (CheckInput::Supports(k, l), n, 2)
            } else {
                let count = if kind == CheckKind::DualOrliczBm { None } else { Some(2) };
                let b = bodies(spec, count)?;
                let (n, m) = (b[0].dimension(), b.len());
                (CheckInput::Stars(b), n, m)
            };
            let (phi, t) = check_phi(spec, kind, arity, n)?;
            Job::Check { kind, phi, t, input, rule: rule_for(need(&spec.rule, "rule", op)?, n)? }
        }
        Op::FirstVariation => {
            let mut b = bodies(spec, Some(2))?;
            let n = b[0].dimension();
            let phi1 = parse_orlicz(need(&spec.phi, "phi", op)?, 1, n)?;
            let phi2 = match &spec.phi2 {
                Some(d) => parse_orlicz(d, 1, n)?,
                None => phi1.clone(),
            };
            let rule = rule_for(need(&spec.rule, "rule", op)?, n)?;
            let eps = spec.eps.clone().unwrap_or_else(default_eps_schedule);
            let l = b.remove(1);
            Job::FirstVariation { phi1, phi2, k: b.remove(0), l, rule, eps }
        }
        Op::MAdd => {
            let mset = parse_mset(need(&spec.mset, "mset", op)?)?;
            let bodies = bodies(spec, Some(mset.arity()))?;
            let probe = grid_probe(need(&spec.probe, "probe", op)?, bodies[0].dimension())?;
            Job::MAdd { mset, bodies, probe }
        }
        Op::IntersectionBody => {
            let body = bodies(spec, Some(1))?.remove(0);
            let n = body.dimension();
            Job::IntersectionBody {
                phi: parse_orlicz(need(&spec.phi, "phi", op)?, 1, n)?,
                direction: direction(spec, n)?,
                rule: rule_for(need(&spec.rule, "rule", op)?, n)?,
                eta: spec.eta.unwrap_or(1e-3),
                body,
            }
        }
        Op::IntersectionMonteCarlo => {
            let body = bodies(spec, Some(1))?.remove(0);
            Job::IntersectionMonteCarlo {
                p: *need(&spec.p, "p", op)?,
                direction: direction(spec, body.dimension())?,
                samples: *need(&spec.samples, "samples", op)?,
                seed: *need(&spec.seed, "seed", op)?,
                body,
            }
        }
        Op::CompareSum => {
            let mut b = bodies(spec, Some(2))?;
            let n = b[0].dimension();
            let p = *need(&spec.p, "p", op)?;
            let probe = rule_for(need(&spec.probe, "probe", op)?, n)?;
            let l = b.remove(1);
            Job::CompareSum { p, phi: power_phi(p, 2, n)?, k: b.remove(0), l, probe }
        }
        Op::Associativity => {
            let b = bodies(spec, Some(3))?;
            let n = b[0].dimension();
            let phi = parse_orlicz(need(&spec.phi, "phi", op)?, 2, n)?;
            let probe = rule_for(need(&spec.probe, "probe", op)?, n)?;
            let [k, l, m]: [StarBody; 3] = b.try_into().map_err(|_| CliError::Invalid("need 3 bodies".to_string()))?;
            Job::Associativity { phi, bodies: [k, l, m], probe }
        }
        Op::AssociativityWitness => {
            let probe = parse_rule(need(&spec.probe, "probe", op)?)?;
            Job::AssociativityWitness {
                phi: parse_orlicz(need(&spec.phi, "phi", op)?, 2, probe.dimension())?,
                seed: spec.seed.unwrap_or(0),
                trials: spec.count.unwrap_or(64),
                probe,
            }
        }
        Op::Sublinearity => Job::Sublinearity { phi: parse_orlicz(need(&spec.phi, "phi", op)?, 2, 2)? },
        Op::MSetGap => {
            let mut b = bodies(spec, Some(2))?;
            let n = b[0].dimension();
            let phi = parse_orlicz(need(&spec.phi, "phi", op)?, 2, n)?;
            let resolutions = need(&spec.resolutions, "resolutions", op)?.clone();
            let probe = rule_for(need(&spec.probe, "probe", op)?, n)?;
            let l = b.remove(1);
            Job::MSetGap { phi, k: b.remove(0), l, resolutions, probe }
        }
        Op::Sweep => {
            let kind: CheckKind = need(&spec.check, "check", op)?.parse()?;
            let family: Family = need(&spec.family, "family", op)?.parse()?;
            let supports = matches!(family, Family::Ellipsoid | Family::EllipsoidDilatate);
            if supports != (kind == CheckKind::PolarLog) {
                return Err(CliError::Invalid(format!("family {family:?} does not fit {kind:?}")));
            }
            let n = spec.dimension.unwrap_or(2);
            let (phi, t) = check_phi(spec, kind, 2, n)?;
            let start = spec.seed.unwrap_or(0);
            let count = *need(&spec.count, "count", op)?;
            let seeds = (start..start + count as u64).collect();
            Job::Sweep { kind, phi, t, family, n, seeds, rule: rule_for(need(&spec.rule, "rule", op)?, n)? }
        }
    })
}

fn run_check(
    kind: CheckKind,
    phi: Option<&OrliczFunction>,
    t: Option<f64>,
    input: &CheckInput,
    rule: &SphericalRule,
) -> CliResult<IneqReport> {
    let stars = |i: &CheckInput| match i {
        CheckInput::Stars(b) => Ok(b.clone()),
        CheckInput::Supports(..) => Err(CliError::Invalid(format!("{kind:?} takes star bodies"))),
    };
    let phi = || phi.ok_or_else(|| CliError::Invalid(format!("{kind:?} needs a function")));
    Ok(match kind {
        CheckKind::DualOrliczBm => check_dual_orlicz_bm(phi()?, &stars(input)?, rule)?,
        CheckKind::DualLogBm => {
            let b = stars(input)?;
            check_dual_log_bm(&b[0], &b[1], t.unwrap_or(0.5), rule)?
        }
        CheckKind::DualOrliczMinkowski => {
            let b = stars(input)?;
            check_dual_orlicz_minkowski(phi()?, &b[0], &b[1], rule)?
        }
        CheckKind::DualLogMinkowski => {
            let b = stars(input)?;
            check_dual_log_minkowski(&b[0], &b[1], rule)?
        }
        CheckKind::PolarLog => match input {
            CheckInput::Supports(k, l) => check_polar_log(k, l, rule)?,
            CheckInput::Stars(_) => return Err(CliError::Invalid("polar-log takes convex bodies".to_string())),
        },
    })
}

fn family_input(family: Family, n: usize, seed: u64) -> CliResult<CheckInput> {
    let mut rng = families::rng(seed);
    Ok(match family {
        Family::Star => CheckInput::Stars(vec![families::star(n, &mut rng), families::star(n, &mut rng)]),
        Family::Dilatate => {
            let (k, l, _) = families::dilatate_pair(n, &mut rng);
            CheckInput::Stars(vec![k, l])
        }
        Family::Ellipsoid => {
            CheckInput::Supports(families::ellipsoid_support(n, &mut rng)?, families::ellipsoid_support(n, &mut rng)?)
        }
        Family::EllipsoidDilatate => {
            let (k, l, _) = families::ellipsoid_dilatate_pair(n, &mut rng)?;
            CheckInput::Supports(k, l)
        }
    })
}

fn to_json<T: Serialize>(v: &T) -> CliResult<Output> {
    Ok(Output::Json(serde_json::to_value(v)?))
}

pub fn execute(job: &Job) -> CliResult<Output> {
    match job {
        Job::Volume { body, rule } => {
            let e = volume_estimate(body, rule)?;
            Ok(Output::Json(json!({
                "body": body.label(),
                "rule": rule.descriptor(),
                "value": e.value,
                "standard_error": e.standard_error,
            })))
        }
        Job::Sum { phi, bodies, probe } => to_json(GridBody::sample(&orlicz_sum(phi, bodies)?, probe)?.file()),
        Job::MixedVolume { phi, k, l, rule } => to_json(&dual_orlicz_mixed_volume(phi, k, l, rule)?),
        Job::Check { kind, phi, t, input, rule } => to_json(&run_check(*kind, phi.as_ref(), *t, input, rule)?),
        Job::FirstVariation { phi1, phi2, k, l, rule, eps } => {
            to_json(&first_variation_volume(phi1, phi2, k, l, rule, eps)?)
        }
        Job::MAdd { mset, bodies, probe } => to_json(GridBody::sample(&radial_m_sum(mset, bodies)?, probe)?.file()),
        Job::IntersectionBody { phi, body, direction, rule, eta } => {
            to_json(&intersection_body_radial(phi, body, direction, rule, *eta)?)
        }
        Job::IntersectionMonteCarlo { p, body, direction, samples, seed } => {
            to_json(&intersection_power_monte_carlo(body, direction, *p, *samples, *seed)?)
        }
        Job::CompareSum { p, phi, k, l, probe } => {
            let sum = orlicz_sum(phi, &[k.clone(), l.clone()])?;
            let comb = pth_radial_combination(1.0, k, *p, 1.0, l)?;
            Ok(Output::Json(json!({ "p": p, "gap": radial_metric(&sum, &comb, probe), "probe": probe.descriptor() })))
        }
        Job::Associativity { phi, bodies, probe } => {
            to_json(&check_associativity(phi, &bodies[0], &bodies[1], &bodies[2], probe)?)
        }
        Job::AssociativityWitness { phi, probe, seed, trials } => {
            to_json(&find_associativity_witness(phi, probe, *seed, *trials)?)
        }
        Job::Sublinearity { phi } => Ok(Output::Json(json!({
            "witness": check_sublinearity_counterexample(phi)?,
            "unit_pair_gap": sublinearity_gap(phi, &[1.0, 0.0], &[0.0, 1.0])?,
        }))),
        Job::MSetGap { phi, k, l, resolutions, probe } => {
            let gaps: Vec<f64> = resolutions
                .iter()
                .map(|&r| m_set_equivalence_gap(phi, k, l, r, probe))
                .collect::<radial_orlicz::Result<_>>()?;
            Ok(Output::Json(json!({
                "resolutions": resolutions,
                "gaps": gaps,
                "non_increasing": gaps.windows(2).all(|w| w[1] <= w[0]),
            })))
        }
        Job::Sweep { kind, phi, t, family, n, seeds, rule } => {
            let records: Vec<SweepRecord> = seeds
                .par_iter()
                .map(|&s| {
                    let input = family_input(*family, *n, s)?;
                    Ok(SweepRecord::new(&run_check(*kind, phi.as_ref(), *t, &input, rule)?, s))
                })
                .collect::<CliResult<_>>()?;
            let summary = summarize(&records);
            Ok(Output::Sweep { records, summary })
        }
    }
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// Writes `.csv` or `.json` by extension. Sweeps also write
/// `<stem>.summary.json` next to a CSV.
pub fn write_output(path: &Path, output: &Output) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let csv = path.extension().is_some_and(|e| e == "csv");
    match output {
        Output::Json(value) if csv => {
            let obj = value
                .as_object()
                .ok_or_else(|| CliError::Invalid("only object results can be written as CSV".to_string()))?;
            let mut w = csv::Writer::from_path(path)?;
            w.write_record(obj.keys())?;
            w.write_record(obj.values().map(csv_cell))?;
            w.flush()?;
        }
        Output::Json(value) => fs::write(path, serde_json::to_string_pretty(value)? + "\n")?,
        Output::Sweep { records, summary } if csv => {
            let mut w = csv::Writer::from_path(path)?;
            for r in records {
                w.serialize(r)?;
            }
            w.flush()?;
            fs::write(path.with_extension("summary.json"), serde_json::to_string_pretty(summary)? + "\n")?;
        }
        Output::Sweep { records, summary } => {
            let v = json!({ "summary": summary, "records": records });
            fs::write(path, serde_json::to_string_pretty(&v)? + "\n")?;
        }
    }
    Ok(())
}

/// Short one-line digest for logs and run summaries.
pub fn headline(output: &Output) -> Value {
    match output {
        Output::Sweep { summary, .. } => serde_json::to_value(summary).unwrap_or(Value::Null),
        Output::Json(v) => {
            if let Some(values) = v.get("values").and_then(Value::as_array) {
                let xs: Vec<f64> = values.iter().filter_map(Value::as_f64).collect();
                let min = xs.iter().cloned().fold(f64::INFINITY, f64::min);
                let max = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                return json!({ "min": min, "max": max });
            }
            let keys = ["value", "satisfied", "slack", "relative_error", "gap", "max_gap", "gaps", "unit_pair_gap"];
            let picked: serde_json::Map<String, Value> =
                keys.iter().filter_map(|k| v.get(*k).map(|x| (k.to_string(), x.clone()))).collect();
            Value::Object(picked)
        }
    }
}
