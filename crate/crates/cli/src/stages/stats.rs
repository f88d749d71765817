use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use termbench_core::dataset::{pair_id, read_split, Split};
use termbench_core::popularity::{laplace_log, read_popularity_csv, Proxy};
use termbench_stats::summary::{mean, sample_sd};
use termbench_stats::{games_howell, two_way_anova, ObservationTable};

use super::eval::load_run;
use super::{open, StageContext};
use crate::error::CliError;

const CORRECTNESS_LEVELS: [&str; 2] = ["0", "1"];

fn num(v: f64) -> String {
    if v.is_nan() {
        "NA".into()
    } else {
        format!("{v}")
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

struct Observation {
    terminology: &'static str,
    correct: bool,
    value: f64,
}

pub fn run(ctx: &mut StageContext<'_>) -> Result<(), CliError> {
    let phase = ctx.cfg.stats.correctness_phase;
    let direction = ctx.cfg.stats.correctness_direction;
    let split = read_split(open(&ctx.layout.split())?)?;
    let terminologies = ctx.cfg.inputs.terminologies();

    // (terminology, popularity record, correctness) for every training pair
    let mut rows = Vec::new();
    for &t in &terminologies {
        let popularity: HashMap<String, _> = read_popularity_csv(open(&ctx.layout.popularity(t))?)?
            .into_iter()
            .map(|r| (r.identifier.clone(), r))
            .collect();
        let correctness = load_run(ctx.layout, phase, t, direction)?.pair_correctness();
        for p in split.iter().filter(|p| p.terminology == t && p.split == Split::Train) {
            let rec = popularity.get(&p.identifier).ok_or_else(|| {
                termbench_core::Error::Consistency(format!("{} has no popularity record", p.identifier))
            })?;
            let id = pair_id(t, &p.identifier);
            let correct = *correctness.get(&id).ok_or_else(|| {
                termbench_core::Error::Consistency(format!("{id} was not evaluated in the {} run", phase.code()))
            })?;
            rows.push((t, rec.clone(), correct));
        }
    }

    let levels: Vec<String> = terminologies.iter().map(|t| t.display_name().to_string()).collect();
    let mut descriptives = String::from("proxy,terminology,correctness,n,mean,sd\n");
    let mut warnings = BTreeMap::new();
    for proxy in Proxy::ALL {
        let obs: Vec<Observation> = rows
            .iter()
            .map(|(t, rec, c)| Observation {
                terminology: t.display_name(),
                correct: *c,
                value: laplace_log(rec.count(proxy)),
            })
            .collect();

        let mut csv = String::from("terminology,correctness,value\n");
        let mut table = ObservationTable::new(
            "terminology",
            levels.clone(),
            "correctness",
            CORRECTNESS_LEVELS.iter().map(|s| s.to_string()).collect(),
        );
        for o in &obs {
            let level = CORRECTNESS_LEVELS[usize::from(o.correct)];
            writeln!(csv, "{},{},{}", o.terminology, level, num(o.value)).expect("string write");
            table.push(o.terminology, level, o.value)?;
        }
        ctx.emit(&ctx.layout.observations(proxy), csv.as_bytes())?;

        for level in &levels {
            for (ci, c) in CORRECTNESS_LEVELS.iter().enumerate() {
                let cell: Vec<f64> = obs
                    .iter()
                    .filter(|o| o.terminology == level && usize::from(o.correct) == ci)
                    .map(|o| o.value)
                    .collect();
                let (m, sd) = match cell.len() {
                    0 => (String::new(), String::new()),
                    1 => (num(mean(&cell)), String::new()),
                    _ => (num(mean(&cell)), num(sample_sd(&cell))),
                };
                writeln!(descriptives, "{},{level},{c},{},{m},{sd}", proxy.code(), cell.len()).expect("string write");
            }
        }

        let anova = two_way_anova(&table)?;
        let mut csv = String::from("effect,ss,df,ms,F,p\n");
        for e in &anova.effects {
            writeln!(csv, "{},{},{},{},{},{}", e.name, num(e.ss), num(e.df), num(e.ms), opt(e.f), opt(e.p))
                .expect("string write");
        }
        ctx.emit(&ctx.layout.anova(proxy), csv.as_bytes())?;
        for w in &anova.warnings {
            log::warn!("{}: {w}", proxy.code());
        }
        warnings.insert(proxy.code().to_string(), anova.warnings.clone());

        let groups: Vec<(String, Vec<f64>)> = levels
            .iter()
            .map(|l| (l.clone(), obs.iter().filter(|o| o.terminology == l).map(|o| o.value).collect()))
            .collect();
        if groups.len() >= 2 {
            let gh = games_howell(&groups)?;
            let mut csv = String::from("group_i,group_j,mean_diff,se,t,df,p_adj\n");
            for c in &gh.comparisons {
                writeln!(
                    csv,
                    "{},{},{},{},{},{},{}",
                    c.group_i,
                    c.group_j,
                    num(c.mean_diff),
                    num(c.se),
                    num(c.t),
                    num(c.df),
                    num(c.p_adj)
                )
                .expect("string write");
            }
            ctx.emit(&ctx.layout.games_howell(proxy), csv.as_bytes())?;
        }
    }
    ctx.emit(&ctx.layout.descriptives(), descriptives.as_bytes())?;
    ctx.detail("correctness_source", format!("{}/{}", phase.code(), direction.code()));
    ctx.detail("anova_warnings", warnings);
    Ok(())
}
