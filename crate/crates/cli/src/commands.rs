//! `verify`, `simulate` and `catalog`.

use std::path::{Path, PathBuf};

use qms_core::catalog::{catalog_entries, terminology};
use qms_core::dynamics::{detect_closure, integrate, IntegratorConfig};
use qms_core::poisson::{bracket_table, independence_rank, involution_table, BracketResidualTable};
use qms_core::sampling::{PointSampler, SamplerBox};
use qms_core::{ConservedQuantity, Error, HamiltonianSpec, IntegralSet, PhasePoint};

use crate::config::ExperimentConfig;
use crate::floatfmt::FloatFormat;
use crate::report::Report;
use crate::trajectory_io::{closure_lines, TrajectoryFile};
use crate::CliError;

/// Settings shared by every command.
#[derive(Clone, Debug)]
pub struct RunOptions {
    pub seed: Option<u64>,
    pub out_dir: PathBuf,
    pub floats: FloatFormat,
}

#[derive(Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
}

/// What a command wrote and its verdict.
#[derive(Debug)]
pub struct Outcome {
    pub status: Status,
    pub output: Option<PathBuf>,
    pub summary: String,
}

fn stem(path: &Path) -> String {
    path.file_stem().map_or("run".into(), |s| s.to_string_lossy().into_owned())
}

fn write_output(opts: &RunOptions, name: &str, text: &str) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(&opts.out_dir)?;
    let path = opts.out_dir.join(name);
    std::fs::write(&path, text)?;
    Ok(path)
}

fn core_config(e: Error) -> CliError {
    match e {
        Error::Config(msg) => CliError::Config(msg),
        other => CliError::Core(other),
    }
}

fn table_section(r: &mut Report, name: &str, table: &BracketResidualTable, floats: FloatFormat) {
    r.section(name);
    r.kv("samples", table.samples).float("tolerance", table.tolerance);
    for (k, p) in table.pairs.iter().enumerate() {
        r.kv(
            &format!("pair.{}", k + 1),
            format!(
                "{{{}, {}}} raw {} normalized {}",
                p.first,
                p.second,
                floats.encode(p.max_raw),
                floats.encode(p.max_normalized)
            ),
        );
    }
    r.float("max_normalized", table.max_normalized());
    r.kv("passed", table.passed());
}

pub fn verify(config_path: &Path, opts: &RunOptions) -> Result<Outcome, CliError> {
    let cfg = ExperimentConfig::load(config_path)?;
    let seed = opts.seed.unwrap_or(cfg.seed);
    let spec = cfg.system.build().map_err(core_config)?;
    let set = IntegralSet::new(spec.realization()).map_err(core_config)?;
    let extras = cfg.system.extra_integrals().map_err(core_config)?;
    let n = cfg.n;
    let v = &cfg.verification;

    let mut regular: Vec<ConservedQuantity> = set.all();
    regular.extend(extras.iter().cloned());
    let region = SamplerBox::adapted(cfg.system.params.kappa, n);
    let points = PointSampler::new(seed)
        .with_region(region)
        .draw_many(&spec, &regular, v.sample_points)
        .map_err(CliError::Core)?;

    let involution = involution_table(&spec, &set, &points, v.bracket_tol)?;
    let mut base = vec![spec.energy()];
    base.extend(set.all());
    let rank = independence_rank(&base, &points, v.rank_tol)?;
    let base_expected = 2 * n - 2;
    let base_ok = rank.numerical_rank == base_expected;

    let mut r = Report::new("qms verification report", opts.floats);
    r.section("run");
    r.kv("config", config_path.display()).kv("seed", seed).kv("n", n);
    r.float("sampler_q_min", region.q_min).float("sampler_q_max", region.q_max).float("sampler_p_max", region.p_max);
    r.section("system").raw(&cfg.system.to_string());
    r.kv("hamiltonian", spec.name());
    r.kv("universal_integrals", set.len());
    table_section(&mut r, "involution", &involution, opts.floats);

    r.section("independence");
    r.kv("functions", rank.functions.join(", "));
    r.kv("num_points", rank.num_points).float("rank_tolerance", rank.rank_tolerance);
    r.kv("numerical_rank", rank.numerical_rank).kv("expected_rank", base_expected);
    r.floats("singular_values.best_point", best_point(&rank.singular_values, &rank.point_ranks));
    r.kv("passed", base_ok);

    let mut all_ok = involution.passed() && base_ok;
    let mut extras_ok = !extras.is_empty();
    let mut extended_rank = rank.numerical_rank;
    for extra in &extras {
        let table = bracket_table(&[(spec.energy(), extra.clone())], &points, v.bracket_tol)?;
        let mut with_extra = base.clone();
        with_extra.push(extra.clone());
        let cert = independence_rank(&with_extra, &points, v.rank_tol)?;
        let expected = 2 * n - 1;
        let ok = table.passed() && cert.numerical_rank == expected;
        extended_rank = extended_rank.max(cert.numerical_rank);
        extras_ok &= ok;
        all_ok &= ok;
        r.section(&format!("extra.{}", extra.name()));
        r.float("bracket_with_H.max_raw", table.pairs[0].max_raw);
        r.float("bracket_with_H.max_normalized", table.pairs[0].max_normalized);
        r.kv("numerical_rank", cert.numerical_rank).kv("expected_rank", expected);
        r.kv("passed", ok);
    }

    let label = terminology(n, extras_ok);
    r.section("summary");
    r.kv("classification", label);
    r.kv("status", if all_ok { "PASS" } else { "FAIL" });
    let out = write_output(opts, &format!("{}.report", stem(config_path)), &r.finish())?;
    let summary = format!(
        "{}: {} ({} universal integrals, rank {}/{}{}) -> {}",
        spec.name(),
        if all_ok { "PASS" } else { "FAIL" },
        set.len(),
        rank.numerical_rank,
        base_expected,
        if extras.is_empty() {
            String::new()
        } else {
            format!(", {} extra integral(s), rank {extended_rank}/{}", extras.len(), 2 * n - 1)
        },
        label,
    );
    Ok(Outcome {
        status: if all_ok { Status::Pass } else { Status::Fail },
        output: Some(out),
        summary,
    })
}

fn best_point<'a>(sv: &'a [Vec<f64>], ranks: &[usize]) -> &'a [f64] {
    ranks
        .iter()
        .enumerate()
        .max_by_key(|(i, r)| (**r, usize::MAX - i))
        .map_or(&[], |(i, _)| &sv[i])
}

fn resolve_monitors(
    names: &[String],
    spec: &HamiltonianSpec,
    set: &IntegralSet,
    extras: &[ConservedQuantity],
) -> Result<Vec<ConservedQuantity>, CliError> {
    let mut out: Vec<ConservedQuantity> = Vec::new();
    let mut push = |q: ConservedQuantity| {
        if !out.iter().any(|o| o.name() == q.name()) {
            out.push(q);
        }
    };
    for name in names {
        match name.as_str() {
            "H" | "energy" => push(spec.energy()),
            "universal" => set.all().into_iter().for_each(&mut push),
            "extra" => extras.iter().cloned().for_each(&mut push),
            other => {
                let found = set
                    .all()
                    .into_iter()
                    .chain(extras.iter().cloned())
                    .find(|q| q.name() == other)
                    .ok_or_else(|| CliError::Config(format!("unknown monitor {other:?}")))?;
                push(found);
            }
        }
    }
    Ok(out)
}

pub fn simulate(config_path: &Path, opts: &RunOptions) -> Result<Outcome, CliError> {
    let cfg = ExperimentConfig::load(config_path)?;
    let sim = cfg
        .simulation
        .clone()
        .ok_or_else(|| CliError::Config("the config has no [simulation] section".into()))?;
    let spec = cfg.system.build().map_err(core_config)?;
    let set = IntegralSet::new(spec.realization()).map_err(core_config)?;
    let extras = cfg.system.extra_integrals().map_err(core_config)?;
    let monitors = resolve_monitors(&sim.monitors, &spec, &set, &extras)?;
    let x0 = PhasePoint::new(sim.q0.clone(), sim.p0.clone()).map_err(core_config)?;
    let mut icfg = IntegratorConfig::new(sim.method, sim.step);
    icfg.record_every = sim.record_every;

    let header = vec![
        "qms trajectory".to_string(),
        format!("config = {}", config_path.display()),
        format!("hamiltonian = {}", spec.name()),
        format!("method = {}", sim.method.key()),
        format!("step = {}", opts.floats.encode(sim.step)),
        format!("t_final = {}", opts.floats.encode(sim.t_final)),
        format!(
            "integrator settings (fixed step, fixed-point tol {:e}, guard radius {:e}) are implementation choices",
            icfg.fixed_point_tol, icfg.guard_radius
        ),
    ];
    let name = format!("{}.traj", stem(config_path));
    match integrate(&spec, &x0, sim.t_final, &icfg, &monitors) {
        Ok(tr) => {
            let mut footer = Vec::new();
            if let Some(tol) = sim.closure_tol {
                match detect_closure(&tr, tol) {
                    Ok(rep) => footer.extend(closure_lines(&rep, opts.floats)),
                    Err(e) => footer.push(format!("closure unavailable: {e}")),
                }
            }
            footer.push("status = complete".into());
            let text = TrajectoryFile {
                header,
                trajectory: &tr,
                footer,
                floats: opts.floats,
            }
            .render();
            let out = write_output(opts, &name, &text)?;
            Ok(Outcome {
                status: Status::Pass,
                output: Some(out),
                summary: format!(
                    "{}: {} states to t = {}, max normalized drift {:e}",
                    spec.name(),
                    tr.len(),
                    tr.times.last().copied().unwrap_or(0.0),
                    tr.max_drift()
                ),
            })
        }
        Err(Error::SingularApproach { time, reason, partial }) => {
            let footer = vec![format!("status = singular_approach at t = {time}: {reason}")];
            let text = TrajectoryFile {
                header,
                trajectory: &partial,
                footer,
                floats: opts.floats,
            }
            .render();
            let out = write_output(opts, &name, &text)?;
            Ok(Outcome {
                status: Status::Fail,
                output: Some(out),
                summary: format!("{}: singular approach at t = {time}: {reason}", spec.name()),
            })
        }
        Err(e) => Err(core_config(e)),
    }
}

pub fn catalog_listing() -> String {
    let mut out = String::new();
    let entries = catalog_entries();
    out.push_str(&format!("{} families\n", entries.len()));
    for e in entries {
        out.push_str(&format!("\n{}\n", e.family));
        out.push_str(&format!("  hamiltonian:        {}\n", e.hamiltonian));
        out.push_str(&format!("  parameters:         {}\n", e.parameters));
        out.push_str(&format!("  spaces:             {}\n", e.spaces));
        out.push_str(&format!("  superintegrability: {}\n", e.superintegrability));
    }
    out
}
