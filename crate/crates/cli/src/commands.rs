use std::fs::File;
use std::io::{self, Read};
use std::path::Path;
use std::sync::Arc;

use anticonc::bounds::{
    bound_report, evenly_spaced_binomial_sum, m_tilde, proposition1_gap, BoundReportJson,
};
use anticonc::catalog::parse_group_capped;
use anticonc::decompose::{decompose_to_pairs, mixture_law, PairMixtureJson};
use anticonc::dist::{pair_walk, top_k_mass, DistJson, TwoPointVar};
use anticonc::group::FiniteGroup;
use anticonc::montecarlo::{estimate_matrix_walk, estimate_rho, SampleReport};
use anticonc::rational::{ratio, Rational, RationalJson};
use anticonc::search::{
    conjecture_probe, exhaustive_rho, pairs_json, verify_theorem1, verify_theorem2,
    ConjectureVerdictJson, Mode, PairJson, SearchLimits, SearchResult, SearchResultJson,
};
use serde::Serialize;

use crate::emit::Emitter;
use crate::{parse, CliError, Command, Common, SearchMode, Status};

type Run = Result<Status, CliError>;

#[derive(Serialize)]
struct Config<'a> {
    version: &'static str,
    #[serde(flatten)]
    common: &'a Common,
    #[serde(flatten)]
    command: &'a Command,
}

/// Range checks that need no group or input file.
fn validate(command: &Command) -> Result<(), CliError> {
    let at_least = |name: &str, values: &[u64], min: u64| {
        if values.iter().any(|&v| v < min) {
            Err(CliError::Usage(format!("--{name} must be at least {min}")))
        } else {
            Ok(())
        }
    };
    match command {
        Command::Bound { n, k, m } => {
            at_least("n", n, 1)?;
            at_least("k", k, 1)?;
            at_least("m", m, 2)
        }
        Command::Exact { repeat, k, .. } => {
            at_least("repeat", &[*repeat as u64], 1)?;
            at_least("k", &[*k], 1)
        }
        Command::Search { n, k, m, mode, .. } => {
            at_least("n", n, 1)?;
            at_least("k", k, 1)?;
            if *mode == SearchMode::Symmetric {
                at_least("m", m, 2)?;
            }
            Ok(())
        }
        Command::Verify { n, k, m, .. } => {
            at_least("n", n, 1)?;
            at_least("k", k, 1)?;
            at_least("m", m, 2)
        }
        Command::Decompose { .. } => Ok(()),
        Command::IdentityCheck { s, tolerance, .. } => {
            at_least("s", s, 1)?;
            if tolerance.is_nan() || *tolerance <= 0.0 {
                return Err(CliError::Usage("--tolerance must be positive".into()));
            }
            Ok(())
        }
        Command::Simulate {
            repeat,
            samples,
            top,
            ..
        } => {
            at_least("repeat", &[*repeat as u64], 1)?;
            at_least("samples", &[*samples], 1)?;
            at_least("top", &[*top as u64], 1)
        }
        Command::Conjecture { m, n, k, .. } => {
            at_least("n", n, 1)?;
            at_least("k", k, 1)?;
            at_least("m", &[*m], 3)
        }
        Command::Prop1 { n, m, .. } => {
            at_least("n", n, 1)?;
            at_least("m", &[*m], 2)
        }
    }
}

pub fn run(common: &Common, command: &Command, out: &mut Emitter) -> Run {
    validate(command)?;
    out.emit(
        "config",
        &Config {
            version: env!("CARGO_PKG_VERSION"),
            common,
            command,
        },
    )?;
    let limits = SearchLimits {
        max_laws: common.max_laws,
    };
    let group = |spec: &str| -> Result<Arc<FiniteGroup>, CliError> {
        Ok(Arc::new(parse_group_capped(spec, common.max_group)?))
    };
    match command {
        Command::Bound { n, k, m } => bound(n, k, m, out),
        Command::Exact {
            group: g,
            pairs,
            gens,
            repeat,
            k,
        } => {
            let g = group(g)?;
            let vars = factors(&g, pairs.as_deref(), gens.as_deref(), *repeat)?;
            exact(&g, &vars, *k, out)
        }
        Command::Search {
            group: g,
            n,
            k,
            m,
            mode,
        } => search(&group(g)?, n, k, m, *mode, &limits, out),
        Command::Verify {
            theorem,
            group: g,
            n,
            k,
            m,
        } => verify(*theorem, &group(g)?, n, k, m, &limits, out),
        Command::Decompose { input } => decompose(input.as_deref(), out),
        Command::IdentityCheck { n, s, t, tolerance } => {
            identity_check(n, s, t.as_deref(), *tolerance, out)
        }
        Command::Simulate {
            group: g,
            pairs,
            gens,
            matrix_p,
            matrix_pairs,
            repeat,
            samples,
            seed,
            exact,
            top,
            histogram,
        } => {
            let report = match (g, matrix_p) {
                (Some(g), _) => {
                    let g = group(g)?;
                    let vars = factors(&g, pairs.as_deref(), gens.as_deref(), *repeat)?;
                    let report = estimate_rho(&g, &vars, *samples, *seed)?;
                    if *exact {
                        let target = top_k_mass(&pair_walk(&g, &vars)?, 1).0;
                        report.with_target(&target)
                    } else {
                        report
                    }
                }
                (None, Some(p)) => {
                    if *exact {
                        return Err(CliError::Usage("--exact needs a tabulated --group".into()));
                    }
                    let spec = matrix_pairs.as_deref().unwrap_or_default();
                    let mut vars = parse::matrix_pairs(spec).map_err(CliError::Usage)?;
                    vars = repeated(&vars, *repeat);
                    estimate_matrix_walk(*p, &vars, *samples, *seed)?
                }
                (None, None) => {
                    return Err(CliError::Usage(
                        "simulate needs --group or --matrix-p".into(),
                    ))
                }
            };
            simulate(report, *top, histogram.as_deref(), out)
        }
        Command::Conjecture { group: g, m, n, k } => conjecture(&group(g)?, *m, n, k, &limits, out),
        Command::Prop1 { n, m, l } => prop1(n, *m, *l, out),
    }
}

fn repeated<T: Clone>(list: &[T], repeat: usize) -> Vec<T> {
    list.iter()
        .cloned()
        .cycle()
        .take(list.len() * repeat)
        .collect()
}

fn factors(
    g: &FiniteGroup,
    pairs: Option<&[(usize, usize)]>,
    gens: Option<&[usize]>,
    repeat: usize,
) -> Result<Vec<TwoPointVar>, CliError> {
    let once: Vec<TwoPointVar> = match (pairs, gens) {
        (Some(pairs), None) => pairs
            .iter()
            .map(|&(a, b)| {
                let v = TwoPointVar::new(a, b)?;
                v.check_in(g)?;
                Ok(v)
            })
            .collect::<Result<_, anticonc::Error>>()?,
        (None, Some(gens)) => gens
            .iter()
            .map(|&x| TwoPointVar::symmetric(g, x))
            .collect::<Result<_, _>>()?,
        _ => {
            return Err(CliError::Usage(
                "give exactly one of --pairs or --gens".into(),
            ))
        }
    };
    Ok(repeated(&once, repeat))
}

#[derive(Serialize)]
struct Summary<T: Serialize> {
    records: usize,
    #[serde(flatten)]
    detail: T,
}

fn bound(ns: &[u64], ks: &[u64], ms: &[u64], out: &mut Emitter) -> Run {
    let mut records = 0;
    for &n in ns {
        for &k in ks {
            for &m in ms {
                out.emit("bound", &BoundReportJson::from(&bound_report(n, k, m)?))?;
                records += 1;
            }
        }
    }
    if records > 1 {
        out.emit(
            "summary",
            &Summary {
                records,
                detail: (),
            },
        )?;
    }
    Ok(Status::Ok)
}

#[derive(Serialize)]
struct MassRow {
    element: usize,
    name: String,
    #[serde(flatten)]
    mass: RationalJson,
}

#[derive(Serialize)]
struct ExactReport {
    group: String,
    n: usize,
    k: u64,
    factors: Vec<PairJson>,
    law: Vec<MassRow>,
    top_k: RationalJson,
    witness_set: Vec<usize>,
}

fn exact(g: &Arc<FiniteGroup>, vars: &[TwoPointVar], k: u64, out: &mut Emitter) -> Run {
    let law = pair_walk(g, vars)?;
    let (top, witness_set) = top_k_mass(&law, k as usize);
    let report = ExactReport {
        group: g.label().to_string(),
        n: vars.len(),
        k,
        factors: pairs_json(vars),
        law: law
            .masses()
            .map(|(x, p)| MassRow {
                element: x,
                name: g.name(x).to_string(),
                mass: p.into(),
            })
            .collect(),
        top_k: (&top).into(),
        witness_set,
    };
    out.emit("exact", &report)?;
    Ok(Status::Ok)
}

#[derive(Serialize)]
struct Best {
    n: u64,
    k: u64,
    min_order: u64,
    max_value: RationalJson,
}

fn best_of(best: &mut Option<(Rational, Best)>, r: &SearchResult) {
    if best.as_ref().is_none_or(|(v, _)| r.max_value > *v) {
        *best = Some((
            r.max_value.clone(),
            Best {
                n: r.n,
                k: r.k,
                min_order: r.min_order,
                max_value: (&r.max_value).into(),
            },
        ));
    }
}

fn grid<'a>(
    ns: &'a [u64],
    ks: &'a [u64],
    ms: &'a [u64],
) -> impl Iterator<Item = (u64, u64, u64)> + 'a {
    ns.iter().flat_map(move |&n| {
        ks.iter()
            .flat_map(move |&k| ms.iter().map(move |&m| (n, k, m)))
    })
}

fn search(
    g: &Arc<FiniteGroup>,
    ns: &[u64],
    ks: &[u64],
    ms: &[u64],
    mode: SearchMode,
    limits: &SearchLimits,
    out: &mut Emitter,
) -> Run {
    let mode = match mode {
        SearchMode::Symmetric => Mode::SymmetricPairs,
        SearchMode::Any => Mode::AnyPairs,
    };
    let mut best = None;
    let mut records = 0;
    for (n, k, m) in grid(ns, ks, ms) {
        let r = exhaustive_rho(g, n, k, m, mode, limits)?;
        out.emit("search", &SearchResultJson::from(&r))?;
        best_of(&mut best, &r);
        records += 1;
    }
    #[derive(Serialize)]
    struct Global {
        global_max: Option<Best>,
    }
    out.emit(
        "summary",
        &Summary {
            records,
            detail: Global {
                global_max: best.map(|b| b.1),
            },
        },
    )?;
    Ok(Status::Ok)
}

fn verify(
    theorem: u8,
    g: &Arc<FiniteGroup>,
    ns: &[u64],
    ks: &[u64],
    ms: &[u64],
    limits: &SearchLimits,
    out: &mut Emitter,
) -> Run {
    let mut best = None;
    let mut records = 0;
    let mut violations = 0;
    let mut tight = 0;
    let mut min_slack: Option<Rational> = None;
    for (n, k, m) in grid(ns, ks, ms) {
        let r = match theorem {
            1 => verify_theorem1(g, n, k, m, limits)?,
            _ => verify_theorem2(g, n, k, m, limits)?,
        };
        out.emit("verify", &SearchResultJson::from(&r))?;
        best_of(&mut best, &r);
        records += 1;
        violations += !r.holds() as usize;
        tight += r.is_tight() as usize;
        if let Some(b) = &r.bound {
            if min_slack.as_ref().is_none_or(|s| b.slack < *s) {
                min_slack = Some(b.slack.clone());
            }
        }
    }
    #[derive(Serialize)]
    struct VerifySummary {
        theorem: u8,
        violations: usize,
        tight: usize,
        min_slack: Option<RationalJson>,
        global_max: Option<Best>,
    }
    out.emit(
        "summary",
        &Summary {
            records,
            detail: VerifySummary {
                theorem,
                violations,
                tight,
                min_slack: min_slack.as_ref().map(Into::into),
                global_max: best.map(|b| b.1),
            },
        },
    )?;
    Ok(if violations > 0 {
        Status::Violation
    } else {
        Status::Ok
    })
}

fn read_input(path: Option<&Path>) -> Result<String, CliError> {
    let mut text = String::new();
    match path {
        Some(p) => {
            File::open(p)
                .and_then(|mut f| f.read_to_string(&mut text))
                .map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?;
        }
        None => {
            io::stdin().read_to_string(&mut text)?;
        }
    }
    Ok(text)
}

fn decompose(input: Option<&Path>, out: &mut Emitter) -> Run {
    let doc: DistJson = serde_json::from_str(&read_input(input)?)
        .map_err(|e| CliError::Usage(format!("distribution JSON: {e}")))?;
    let d = doc.into_dist()?;
    let mixture = decompose_to_pairs(&d)?;
    let verified = mixture_law(&mixture, d.group())? == d;
    #[derive(Serialize)]
    struct Decomposition {
        #[serde(flatten)]
        mixture: PairMixtureJson,
        verified: bool,
    }
    out.emit(
        "decompose",
        &Decomposition {
            mixture: (&mixture).into(),
            verified,
        },
    )?;
    Ok(if verified {
        Status::Ok
    } else {
        Status::Violation
    })
}

fn identity_check(
    ns: &[u64],
    ss: &[u64],
    ts: Option<&[u64]>,
    tolerance: f64,
    out: &mut Emitter,
) -> Run {
    #[derive(Serialize)]
    struct Row {
        n: u64,
        s: u64,
        t: u64,
        exact: String,
        trig: f64,
        relative_error: f64,
    }
    let mut records = 0;
    let mut failures = 0;
    let mut worst: f64 = 0.0;
    for &n in ns {
        for &s in ss {
            let all: Vec<u64> = (0..s).collect();
            for &t in ts.unwrap_or(&all) {
                let id = evenly_spaced_binomial_sum(n, s, t)?;
                let err = id.relative_error();
                worst = worst.max(err);
                failures += (err >= tolerance) as usize;
                records += 1;
                out.emit(
                    "identity",
                    &Row {
                        n,
                        s,
                        t,
                        exact: id.exact.to_string(),
                        trig: id.trig,
                        relative_error: err,
                    },
                )?;
            }
        }
    }
    #[derive(Serialize)]
    struct Detail {
        tolerance: f64,
        failures: usize,
        max_relative_error: f64,
    }
    out.emit(
        "summary",
        &Summary {
            records,
            detail: Detail {
                tolerance,
                failures,
                max_relative_error: worst,
            },
        },
    )?;
    Ok(if failures > 0 {
        Status::Violation
    } else {
        Status::Ok
    })
}

fn simulate(report: SampleReport, top: usize, histogram: Option<&Path>, out: &mut Emitter) -> Run {
    if let Some(path) = histogram {
        let mut w = csv::Writer::from_path(path)
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        w.write_record(["element", "count", "frequency"])
            .map_err(io::Error::from)?;
        for c in &report.counts {
            let freq = c.count as f64 / report.samples as f64;
            w.write_record([c.element.clone(), c.count.to_string(), freq.to_string()])
                .map_err(io::Error::from)?;
        }
        w.flush()?;
    }
    out.emit("simulate", &report.truncated(top))?;
    Ok(Status::Ok)
}

fn conjecture(
    g: &Arc<FiniteGroup>,
    m: u64,
    ns: &[u64],
    ks: &[u64],
    limits: &SearchLimits,
    out: &mut Emitter,
) -> Run {
    let mut records = 0;
    let mut counterexamples = 0;
    for &n in ns {
        for &k in ks {
            let v = conjecture_probe(g, m, n, k, limits)?;
            counterexamples += v.counterexample.is_some() as usize;
            records += 1;
            out.emit("conjecture", &ConjectureVerdictJson::from(&v))?;
        }
    }
    #[derive(Serialize)]
    struct Detail {
        counterexamples: usize,
    }
    out.emit(
        "summary",
        &Summary {
            records,
            detail: Detail { counterexamples },
        },
    )?;
    Ok(Status::Ok)
}

fn prop1(ns: &[u64], m: u64, l: u64, out: &mut Emitter) -> Run {
    #[derive(Serialize)]
    struct Row {
        n: u64,
        m: u64,
        m_tilde: u64,
        l: u64,
        limit: RationalJson,
        gap: RationalJson,
    }
    let limit = ratio(2, m_tilde(m) as i64);
    for &n in ns {
        let gap = proposition1_gap(n, m, l)?;
        out.emit(
            "prop1",
            &Row {
                n,
                m,
                m_tilde: m_tilde(m),
                l,
                limit: (&limit).into(),
                gap: (&gap).into(),
            },
        )?;
    }
    out.emit(
        "summary",
        &Summary {
            records: ns.len(),
            detail: (),
        },
    )?;
    Ok(Status::Ok)
}
