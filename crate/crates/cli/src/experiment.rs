use cpa_core::averages::{
    background_floor, inverse_correlation_probabilities_beamsplitter, required_correlation_beamsplitter,
    required_correlation_interferometer, verify_weak_value_correspondence,
};
use cpa_core::field::BeamsplitterSpec;
use cpa_core::improved::{
    cascade_probabilities, estimate, interferometer_probabilities_improved, outcome_probabilities_improved,
    sample_runs_parallel,
};
use cpa_core::oracle::{born_probabilities, interferometer_weak_values, polarization_pair_table};
use cpa_core::simple::{
    cascade_probabilities_simple, entangled_joint_probabilities, outcome_probabilities_simple, PriorSimple,
};
use cpa_core::{geometry, Distribution, Error, Joint, Outcome, Splitter};
use indexmap::IndexMap;

use crate::config::{ExperimentConfig, Geometry, Model};
use crate::error::{CliError, CliResult};
use crate::report::{ArmWeakValues, AverageEntry, Provenance, Report, SampleStats, SCHEMA_VERSION};

pub const DEFAULT_SEED: u64 = 0;

fn to_map(p: &Distribution) -> IndexMap<String, f64> {
    p.iter().map(|(l, v)| (l.to_owned(), v)).collect()
}

fn joint_map(t: &Joint) -> IndexMap<String, f64> {
    [("++", t.pp), ("+-", t.pm), ("-+", t.mp), ("--", t.mm)]
        .into_iter()
        .map(|(l, v)| (l.to_owned(), v))
        .collect()
}

fn max_diff(a: &IndexMap<String, f64>, b: &IndexMap<String, f64>) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    a.iter()
        .try_fold(0.0f64, |acc, (l, p)| b.get(l).map(|q| acc.max((p - q).abs())))
}

/// Everything a report needs besides the echo and provenance.
#[derive(Default)]
struct Findings {
    method: &'static str,
    probabilities: IndexMap<String, f64>,
    oracle: Option<IndexMap<String, f64>>,
    correlations: Option<IndexMap<String, f64>>,
    weak_values: Option<IndexMap<String, ArmWeakValues>>,
    averages: Vec<AverageEntry>,
    correlation_e: Option<f64>,
    samples: Option<SampleStats>,
    notes: Vec<String>,
}

/// Runs one experiment. Deterministic for a given config (including the seed).
pub fn run(config: &ExperimentConfig) -> CliResult<Report> {
    config.validate()?;
    let specs = config
        .transmissions
        .iter()
        .map(|&t| BeamsplitterSpec::new(t))
        .collect::<Result<Vec<Splitter>, _>>()?;

    let mut f = match config.geometry {
        Geometry::Beamsplitter => beamsplitter(config, specs[0])?,
        Geometry::Cascade => cascade(config, &specs)?,
        Geometry::Interferometer => interferometer(config, specs[0])?,
        Geometry::EntangledPair => entangled(config),
    };
    if config.samples.is_some() && f.samples.is_none() {
        f.notes
            .push("samples ignored: Monte Carlo applies to the improved model on a single splitter".into());
    }

    let oracle_residual = match (&f.oracle, config.model) {
        (Some(o), m) if m != Model::Oracle => max_diff(&f.probabilities, o),
        _ => None,
    };
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        config: config.clone(),
        provenance: Provenance {
            model: config.model.name().to_owned(),
            method: f.method.to_owned(),
            version: env!("CARGO_PKG_VERSION").to_owned(),
        },
        probabilities: f.probabilities,
        oracle_probabilities: if config.model == Model::Oracle { None } else { f.oracle },
        oracle_residual,
        correlations: f.correlations,
        weak_values: f.weak_values,
        averages: f.averages,
        correlation_e: f.correlation_e,
        samples: f.samples,
        notes: f.notes,
    })
}

fn beamsplitter(config: &ExperimentConfig, spec: Splitter) -> CliResult<Findings> {
    let born = born_probabilities(&geometry::single_splitter(spec)?)?;
    let mut f = Findings {
        oracle: Some(to_map(&born)),
        ..Findings::default()
    };
    match config.model {
        Model::Simple => {
            f.method = "closed-form";
            f.probabilities = to_map(&outcome_probabilities_simple(&spec, &PriorSimple::default()));
        }
        Model::Improved => match config.monte_carlo() {
            Some(n) => {
                let seed = config.seed.unwrap_or(DEFAULT_SEED);
                let est = estimate(&sample_runs_parallel(&spec, n, seed)?);
                f.method = "monte-carlo";
                f.probabilities = to_map(&est.probabilities());
                f.samples = Some(SampleStats {
                    n: est.samples,
                    seed,
                    standard_error: est.standard_error,
                });
            }
            None => {
                f.method = "closed-form";
                f.probabilities = to_map(&outcome_probabilities_improved(&spec));
            }
        },
        Model::Oracle => {
            f.method = "born";
            f.probabilities = to_map(&born);
        }
        Model::Averages => {
            f.method = "inverse-correlation";
            f.probabilities = to_map(&inverse_correlation_probabilities_beamsplitter(&spec)?);
            let mut c = IndexMap::new();
            for o in Outcome::BOTH {
                c.insert(o.label().to_owned(), required_correlation_beamsplitter(&spec, o)?.value);
            }
            f.correlations = Some(c);
        }
    }
    Ok(f)
}

fn cascade(config: &ExperimentConfig, specs: &[Splitter]) -> CliResult<Findings> {
    let born = born_probabilities(&geometry::cascade(specs)?)?;
    let mut f = Findings {
        oracle: Some(to_map(&born)),
        method: "closed-form",
        ..Findings::default()
    };
    f.probabilities = match config.model {
        Model::Simple => {
            f.notes
                .push("regression run: the simple model does not reproduce cascade probabilities".into());
            to_map(&cascade_probabilities_simple(specs, &PriorSimple::default())?)
        }
        Model::Improved => to_map(&cascade_probabilities(specs)?),
        Model::Oracle => {
            f.method = "born";
            to_map(&born)
        }
        Model::Averages => unreachable!("rejected by validation"),
    };
    Ok(f)
}

fn interferometer(config: &ExperimentConfig, spec: Splitter) -> CliResult<Findings> {
    let net = geometry::interferometer(spec)?;
    let born = born_probabilities(&net)?;
    let mut f = Findings {
        oracle: Some(to_map(&born)),
        ..Findings::default()
    };

    let mut weak = IndexMap::new();
    for o in Outcome::BOTH {
        match interferometer_weak_values(&net, o.label()) {
            Ok((x, y)) => {
                weak.insert(o.label().to_owned(), ArmWeakValues { x, y });
            }
            Err(Error::PostSelectionImpossible { .. }) => {
                f.notes.push(format!("outcome {o} never occurs; no weak values"));
            }
            Err(e) => return Err(e.into()),
        }
    }
    f.weak_values = Some(weak);

    match config.model {
        Model::Improved => {
            f.method = "inverse-correlation";
            f.probabilities = to_map(&interferometer_probabilities_improved(&spec)?);
        }
        Model::Oracle => {
            f.method = "born";
            f.probabilities = to_map(&born);
        }
        Model::Averages => {
            f.method = "inverse-correlation";
            f.probabilities = to_map(&interferometer_probabilities_improved(&spec)?);
            averages(config, spec, &mut f)?;
        }
        Model::Simple => unreachable!("rejected by validation"),
    }
    Ok(f)
}

/// Fills correlations and arm averages. An outcome the user asked for must
/// succeed; with no outcome given, impossible ones are skipped with a note.
fn averages(config: &ExperimentConfig, spec: Splitter, f: &mut Findings) -> CliResult<()> {
    let explicit = config.outcome.map(Outcome::from);
    let outcomes: Vec<Outcome> = explicit.map_or(Outcome::BOTH.to_vec(), |o| vec![o]);
    let mut correlations = IndexMap::new();
    for o in outcomes {
        let attempt = (|| {
            let c = required_correlation_interferometer(&spec, o)?;
            let floor = background_floor(&spec, o)?;
            let background = config.background.unwrap_or(floor);
            let r = verify_weak_value_correspondence(&spec, o, background)?;
            Ok::<_, Error>((c.value, floor, r))
        })();
        match attempt {
            Ok((c, floor, r)) => {
                correlations.insert(o.label().to_owned(), c);
                f.averages.push(AverageEntry {
                    outcome: o.label().to_owned(),
                    background: r.background,
                    floor,
                    c_required: c,
                    avg_x: r.avg_x,
                    avg_y: r.avg_y,
                    weak_x: r.weak_x,
                    weak_y: r.weak_y,
                    residual: r.max_residual(),
                });
            }
            Err(e) if explicit.is_none() => f.notes.push(format!("outcome {o} skipped: {e}")),
            Err(e) => return Err(CliError::from(e)),
        }
    }
    f.correlations = Some(correlations);
    Ok(())
}

fn entangled(config: &ExperimentConfig) -> Findings {
    let (a, b) = (config.a.unwrap_or_default(), config.b.unwrap_or_default());
    let quantum = polarization_pair_table(a, b);
    let (table, method) = match config.model {
        Model::Simple => (entangled_joint_probabilities(a, b), "hidden-polarization"),
        _ => (quantum, "born"),
    };
    Findings {
        method,
        probabilities: joint_map(&table),
        oracle: Some(joint_map(&quantum)),
        correlation_e: Some(table.correlation()),
        ..Findings::default()
    }
}
