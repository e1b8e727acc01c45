use std::fs;
use std::path::Path;

use mirp::algebra::{enumerate_populated, format_rational64, parse_rational64, Grading};
use mirp::differentials::{translated_field_poly, PolynomialField};
use mirp::error::{Error, Result};
use mirp::rough_path::{lift_brownian, lift_piecewise_linear, read_samples_csv, BrownianMode, RoughPathGrid};
use mirp::solver::{davie_residual_report, dyadic_pairs, solve_flow, FlowSolution, Mesh, SolveConfig};
use mirp::translation::{gbm_comparison, ito_strat_character, level_two_statistics, translate_roughpath, translated_grading, Character};
use mirp::verify::{run_all, VerifyConfig};
use serde_json::{json, Value};

use crate::output::{write_json, write_text};
use crate::{CharArgs, Cli, Command, Mode};

const DEFAULT_GAMMA: &str = "1/3";

pub fn run(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Enumerate => enumerate(cli),
        Command::Verify { inject_fault } => verify(cli, *inject_fault),
        Command::Lift { input, brownian, mode, stream } => lift(cli, input.as_deref(), *brownian, *mode, *stream),
        Command::Solve { path, field, y0 } => {
            let sol = solve(cli, path, field, *y0)?;
            write_text(cli, &sol.to_csv())?;
            diverged(&sol)
        }
        Command::Translate { path, chars } => {
            let p = read_path(path)?;
            let chars = characters(chars, p.d())?;
            let out = match cli.common.max_norm {
                Some(n) => Some(translated_grading(&chars, p.d(), p.grading())?.with_max_norm(n)?),
                None => None,
            };
            write_json(cli, translate_roughpath(&chars, &p, out)?.to_json())?;
            Ok(0)
        }
        Command::TranslateField { field, chars } => {
            let f = read_field(field)?;
            let chars = characters(chars, f.polys().len() - 1)?;
            let g = PolynomialField::new(translated_field_poly(f.polys(), &chars)?)?;
            write_json(cli, g.to_json())?;
            Ok(0)
        }
        Command::DavieReport { path, field, y0, min_pair_level, max_pair_level } => {
            if min_pair_level > max_pair_level {
                return Err(Error::InvalidInput("min pair level exceeds max pair level".into()));
            }
            let p = read_path(path)?;
            let f = read_field(field)?;
            let sol = solve_flow(&p, &f, *y0, &solve_config(cli))?;
            if let Some(div) = &sol.divergence {
                return Err(Error::Diverged { substep: div.substep, last: div.last_finite });
            }
            let rep = davie_residual_report(&p, &f, &sol, &dyadic_pairs(&sol, *min_pair_level..=*max_pair_level))?;
            write_json(cli, serde_json::to_value(rep)?)?;
            Ok(0)
        }
        Command::ItoStratDemo { paths, times, gbm_paths, mu, sigma } => {
            let steps = 1usize << cli.common.mesh_level.unwrap_or(12);
            let rows = level_two_statistics(cli.common.d, *paths, steps, cli.common.seed, times)?;
            let worst = rows.iter().map(|r| r.z_score()).fold(0.0f64, f64::max);
            let mut body = json!({ "steps": steps, "paths": paths, "level_two": rows, "max_z_score": worst });
            if *gbm_paths > 0 {
                let gbm = gbm_comparison(*gbm_paths, steps, cli.common.seed, *mu, *sigma, 1.0)?;
                body["gbm_max_sup_gap"] = json!(gbm.iter().map(|r| r.sup_gap).fold(0.0f64, f64::max));
                body["gbm"] = serde_json::to_value(gbm)?;
            }
            write_json(cli, body)?;
            Ok(0)
        }
    }
}

fn grading(cli: &Cli) -> Result<Grading> {
    let g = parse_rational64(cli.common.gamma.as_deref().unwrap_or(DEFAULT_GAMMA))?;
    match cli.common.max_norm {
        Some(n) => Grading::new(n, g),
        None => Grading::for_gamma(g),
    }
}

fn solve_config(cli: &Cli) -> SolveConfig {
    let mesh = cli.common.mesh_level.map_or(Mesh::Grid, Mesh::Dyadic);
    SolveConfig { mesh, substeps: cli.common.substeps, ..SolveConfig::default() }
}

fn read_json(p: &Path) -> Result<Value> {
    let s = fs::read_to_string(p).map_err(|e| Error::InvalidInput(format!("{}: {e}", p.display())))?;
    Ok(serde_json::from_str(&s)?)
}

fn read_path(p: &Path) -> Result<RoughPathGrid<f64>> {
    RoughPathGrid::from_json(&read_json(p)?)
}

fn read_field(p: &Path) -> Result<PolynomialField> {
    PolynomialField::from_json(&read_json(p)?)
}

fn characters(args: &CharArgs, d: usize) -> Result<Vec<Character>> {
    let mut out = Vec::new();
    if args.ito_strat {
        out.push(ito_strat_character(d));
    }
    for p in &args.characters {
        match read_json(p)? {
            Value::Array(items) => {
                for v in &items {
                    out.push(Character::from_json(v)?);
                }
            }
            v => out.push(Character::from_json(&v)?),
        }
    }
    if out.is_empty() {
        return Err(Error::InvalidInput("no character given (use --character or --ito-strat)".into()));
    }
    Ok(out)
}

fn enumerate(cli: &Cli) -> Result<u8> {
    let n = match cli.common.max_norm {
        Some(n) => n,
        None => return Err(Error::InvalidInput("enumerate needs --max-norm".into())),
    };
    let g = cli.common.gamma.as_deref().map(parse_rational64).transpose()?;
    let mut body = String::from("# multi_index\tdegree\tgamma_degree\tsymmetry\tpopulated\n");
    for m in enumerate_populated(cli.common.d, n) {
        let gd = g.map_or_else(|| "-".to_string(), |g| format_rational64(m.gamma_degree(g)));
        body.push_str(&format!("{m}\t{}\t{gd}\t{}\t{}\n", m.degree(), m.symmetry_factor(), m.is_populated()));
    }
    write_text(cli, &body)?;
    Ok(0)
}

fn verify(cli: &Cli, inject_fault: bool) -> Result<u8> {
    let cfg = VerifyConfig { d: cli.common.d, max_degree: cli.common.max_norm.unwrap_or(5), seed: cli.common.seed, inject_fault };
    let report = run_all(&cfg)?;
    for s in report.suites.iter().filter(|s| !s.passed()) {
        for f in &s.failures {
            eprintln!("{}: {f}", s.name);
        }
    }
    write_json(cli, serde_json::to_value(&report)?)?;
    Ok(if report.passed { 0 } else { 1 })
}

fn lift(cli: &Cli, input: Option<&Path>, brownian: bool, mode: Mode, stream: u64) -> Result<u8> {
    let g = grading(cli)?;
    let path: RoughPathGrid<f64> = if brownian {
        let steps = 1usize << cli.common.mesh_level.unwrap_or(10);
        let mode = match mode {
            Mode::Ito => BrownianMode::Ito,
            Mode::Strat => BrownianMode::Strat,
        };
        lift_brownian(cli.common.d, 1.0, steps, cli.common.seed, stream, mode, g)?
    } else {
        let p = input.expect("clap requires --input without --brownian");
        let file = fs::File::open(p).map_err(|e| Error::InvalidInput(format!("{}: {e}", p.display())))?;
        let s = read_samples_csv::<f64, _>(file)?;
        if let Mode::Ito = mode {
            return Err(Error::Unsupported("Itô mode applies to Brownian lifts only".into()));
        }
        lift_piecewise_linear(&s.times, &s.values, g)?
    };
    write_json(cli, path.to_json())?;
    Ok(0)
}

fn solve(cli: &Cli, path: &Path, field: &Path, y0: f64) -> Result<FlowSolution<f64>> {
    let p = read_path(path)?;
    let f = read_field(field)?;
    solve_flow(&p, &f, y0, &solve_config(cli))
}

fn diverged(sol: &FlowSolution<f64>) -> Result<u8> {
    match &sol.divergence {
        Some(d) => {
            eprintln!("error: diverged at mesh step {} (substep {}), last finite value {}", d.step, d.substep, d.last_finite);
            Ok(3)
        }
        None => Ok(0),
    }
}
