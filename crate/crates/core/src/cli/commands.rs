use std::path::PathBuf;

use serde::Serialize;
use serde_json::json;

use super::args::*;
use super::io::{read_json, to_pretty, write_atomic};
use super::{CliError, Output};
use crate::channel::{choi_distance, compose, stationarity_covariance, QuantumChannel};
use crate::experiments::{self, ConvergenceKind, ExperimentReport};
use crate::hamiltonian::{
    bohr_spectrum, gibbs_state, gibbs_weights, is_spin_form, mixing_allowed, rational_bohr_constant,
    resonance_graph,
};
use crate::linalg::{ComplexMatrix, C64};
use crate::qubit::{self, ConeGrid, PhaseDephasingReport, QubitParams, SemigroupElement};
use crate::svg::bloch_xz_svg;
use crate::thermal::{self, DecompositionPart, SpinBlockSpec, ThermalOpSpec};

type Res = Result<Output, CliError>;

fn json_out(v: impl Serialize) -> Res {
    Ok(Output { json: serde_json::to_value(v).expect("serializable result"), ..Default::default() })
}

fn exactly<'a, T>(items: &'a [T], n: usize, what: &str) -> Result<&'a [T], CliError> {
    if items.len() != n {
        return Err(CliError::Usage(format!("{what} needs exactly {n} values, got {}", items.len())));
    }
    Ok(items)
}

fn read_pair<T: serde::de::DeserializeOwned>(inputs: &[PathBuf]) -> Result<(T, T), CliError> {
    let p = exactly(inputs, 2, "--in")?;
    Ok((read_json(&p[0])?, read_json(&p[1])?))
}

fn element(v: &[f64], what: &str) -> Result<SemigroupElement, CliError> {
    let v = exactly(v, 3, what)?;
    Ok(SemigroupElement::new(v[0], C64::new(v[1], v[2]))?)
}

fn write_spec(path: &Option<PathBuf>, spec: &ThermalOpSpec) -> Result<(), CliError> {
    if let Some(p) = path {
        write_atomic(p, &to_pretty(spec))?;
    }
    Ok(())
}

pub fn execute(cli: &Cli) -> Res {
    let tol = cli.tol;
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(CliError::Usage("--tol must be positive".into()));
    }
    match &cli.command {
        Command::Ham(c) => ham(c, tol),
        Command::Channel(c) => channel(c, tol),
        Command::Thermal(c) => thermal(c, tol),
        Command::Qubit(c) => qubit(c, tol),
        Command::Exp(c) => exp(c),
    }
}

fn ham(cmd: &HamCommand, tol: f64) -> Res {
    match cmd {
        HamCommand::Bohr { system } => json_out(bohr_spectrum(&system.require()?, tol)),
        HamCommand::Resonance { system, bath, mix } => {
            let (h_s, h_b) = (system.require()?, bath.require()?);
            let graph = resonance_graph(&h_b, &h_s, tol);
            let mut out = json!({ "resonant": graph.is_resonant(), "graph": graph });
            if let Some(text) = mix {
                let parse = |s: &str| -> Result<(usize, usize), CliError> {
                    let (a, b) = s.split_once(',').ok_or_else(|| CliError::Parse(format!("`{s}` is not i,j")))?;
                    let idx = |t: &str| t.trim().parse::<usize>().map_err(|e| CliError::Parse(format!("`{t}`: {e}")));
                    Ok((idx(a)?, idx(b)?))
                };
                let (ij, kl) = text.split_once(':').ok_or_else(|| CliError::Parse("--mix expects i,j:k,l".into()))?;
                out["mixing_allowed"] = json!(mixing_allowed(&h_s, &h_b, parse(ij)?, parse(kl)?, tol)?);
            }
            json_out(out)
        }
        HamCommand::Gibbs { system, temp } => {
            let (h, beta) = (system.require()?, temp.require()?);
            json_out(json!({ "weights": gibbs_weights(&h, beta), "state": gibbs_state(&h, beta) }))
        }
        HamCommand::Rational { system, gap } => {
            let h = system.require()?;
            let mut out = json!({ "constant": rational_bohr_constant(&h, tol) });
            if let Some(g) = gap {
                out["spin_form"] = json!(is_spin_form(&h, *g, tol));
            }
            json_out(out)
        }
    }
}

fn channel(cmd: &ChannelCommand, tol: f64) -> Res {
    match cmd {
        ChannelCommand::Validate { input, system, temp } => {
            let s: QuantumChannel = read_json(input)?;
            let report = s.validate(tol);
            let mut out = json!({ "pass": report.pass(), "cptp": report });
            if let Some(h) = system.get()? {
                let st = stationarity_covariance(&s, &h, temp.require()?)?;
                out["stationarity"] = json!(st);
                out["pass"] = json!(report.pass() && st.fix_residual <= tol && st.cov_residual <= tol);
            }
            json_out(out)
        }
        ChannelCommand::Apply { input, state } => {
            let s: QuantumChannel = read_json(input)?;
            let rho: ComplexMatrix = read_json(state)?;
            json_out(s.apply(&rho)?)
        }
        ChannelCommand::Compose { inputs } => {
            let (a, b): (QuantumChannel, QuantumChannel) = read_pair(inputs)?;
            json_out(compose(&a, &b)?)
        }
        ChannelCommand::Distance { inputs } => {
            let (a, b): (QuantumChannel, QuantumChannel) = read_pair(inputs)?;
            json_out(json!({ "choi_distance": choi_distance(&a, &b)? }))
        }
    }
}

fn thermal(cmd: &ThermalCommand, tol: f64) -> Res {
    match cmd {
        ThermalCommand::Realize { input } => {
            let spec: ThermalOpSpec = read_json(input)?;
            json_out(thermal::realize(&spec))
        }
        ThermalCommand::Compose { inputs } => {
            let (a, b): (ThermalOpSpec, ThermalOpSpec) = read_pair(inputs)?;
            json_out(thermal::compose_specs(&a, &b)?)
        }
        ThermalCommand::Mix { inputs, k, d } => {
            let (a, b): (ThermalOpSpec, ThermalOpSpec) = read_pair(inputs)?;
            json_out(thermal::convex_combine_specs(&a, &b, *k, *d)?)
        }
        ThermalCommand::Decompose { input, parts_dir } => {
            let spec: ThermalOpSpec = read_json(input)?;
            let parts = thermal::decompose_nonresonant(&spec, tol)?;
            let channels: Vec<QuantumChannel> = parts.iter().map(|p| thermal::realize(&p.spec)).collect();
            let weights: Vec<f64> = parts.iter().map(|p| p.weight).collect();
            let mixed = crate::channel::convex_combine(&channels, &weights)?;
            let error = choi_distance(&mixed, &thermal::realize(&spec))?;
            if let Some(dir) = parts_dir {
                std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
                for (k, p) in parts.iter().enumerate() {
                    write_atomic(&dir.join(format!("part{k}.json")), &to_pretty(&p.spec))?;
                }
            }
            let summary: Vec<DecompositionPart> = parts.iter().map(DecompositionPart::from).collect();
            json_out(json!({ "parts": summary, "reconstruction_error": error }))
        }
        ThermalCommand::Embed { system, bath, temp, generator, gap, alpha, spec_out } => {
            let (h_s, h_b, beta) = (system.require()?, bath.require()?, temp.require()?);
            let gen: ComplexMatrix = read_json(generator)?;
            let spec = thermal::spin_embed(&h_s, &h_b, &gen, *gap, *alpha, beta)?;
            write_spec(spec_out, &spec)?;
            let original = ThermalOpSpec::new(h_s, h_b.clone(), crate::linalg::unitary_from_generator(&gen)?, beta)?;
            let predicted =
                thermal::spin_embed_prediction(&thermal::realize(&original), &h_b, *gap, *alpha as f64, beta)?;
            let realized = thermal::realize(&spec);
            json_out(json!({
                "bath": spec.bath(),
                "missing_levels": thermal::missing_levels(&h_b, *gap, tol)?,
                "distance_to_original": choi_distance(&realized, &thermal::realize(&original))?,
                "distance_to_prediction": choi_distance(&realized, &predicted)?,
                "channel": realized,
            }))
        }
        ThermalCommand::Blocks { input, temp, spec_out } => {
            let blocks: SpinBlockSpec = read_json(input)?;
            let res = thermal::spin_block_choi(&blocks, temp.require()?);
            write_spec(spec_out, &res.spec)?;
            let realized = qubit::psi(&thermal::realize(&res.spec))?;
            json_out(json!({ "lambda": res.lambda, "c": res.c, "realized": realized }))
        }
    }
}

fn params(p: &ParamsArg) -> Result<QubitParams, CliError> {
    Ok(QubitParams::new(p.lambda, p.r, p.phi, p.q)?)
}

fn qubit(cmd: &QubitCommand, tol: f64) -> Res {
    match cmd {
        QubitCommand::Psi { input, q } => {
            let s: QuantumChannel = read_json(input)?;
            let e = qubit::psi(&s)?;
            let mut out = json!({ "lambda": e.lambda, "c": e.c, "r": e.c.norm(), "phi": e.c.arg() });
            if let Some(q) = q {
                let p = QubitParams::from_element(e, *q)?;
                out["membership"] = json!(qubit::membership(&p, tol));
            }
            json_out(out)
        }
        QubitCommand::PsiInv { params: p } => json_out(qubit::psi_inv(&params(p)?, tol)?),
        QubitCommand::Circ { first, second, q } => {
            let (a, b) = (element(first, "--first")?, element(second, "--second")?);
            json_out(qubit::circ(a, b, *q))
        }
        QubitCommand::Inverse { element: e, q } => {
            let inv = qubit::inverse_element(element(e, "--element")?, *q, tol);
            json_out(json!({ "invertible": inv.is_some(), "inverse": inv }))
        }
        QubitCommand::Membership { params: p } => {
            let p = params(p)?;
            json_out(json!({ "membership": qubit::membership(&p, tol), "bound": p.bound() }))
        }
        QubitCommand::Extreme { family, lambda, phi, m, q, mu, cap, spec_out } => {
            let r = match family {
                Family::Infinite => qubit::extreme_approx_infinite(*lambda, *phi, *m)?,
                Family::Interior => qubit::interior_family(*lambda, *phi, *m, *q)?,
                Family::Finite => {
                    let mu = mu.ok_or_else(|| CliError::Usage("--family finite needs --mu".into()))?;
                    qubit::extreme_approx_finite(*lambda, mu, *m, *q, *cap)?
                }
            };
            write_spec(spec_out, &r.spec)?;
            let dim = r.spec.system().dim() * r.spec.bath().dim();
            json_out(json!({
                "realized": r.realized,
                "closed_form": r.closed_form,
                "limit": r.limit,
                "dimension": dim,
            }))
        }
        QubitCommand::Dephase { phases, q, spec_out } => {
            let d = qubit::dephasing_from_phases(phases, *q)?;
            write_spec(spec_out, &d.spec)?;
            json_out(PhaseDephasingReport::from(&d))
        }
        QubitCommand::Cone { q, bloch, grid } => {
            let b = exactly(bloch, 3, "--bloch")?;
            let g = exactly(grid, 3, "--grid")?;
            let cone = qubit::thermal_cone([b[0], b[1], b[2]], *q, ConeGrid { lambda: g[0], radius: g[1], phase: g[2] })?;
            let mut table = experiments::Table::new(&["x", "y", "z"]);
            for p in &cone.points {
                table.push(p.to_vec());
            }
            let svg = bloch_xz_svg(&cone.points, &cone.boundary, &[cone.gibbs, cone.input]);
            Ok(Output {
                json: json!({
                    "q": cone.q,
                    "input": cone.input,
                    "gibbs": cone.gibbs,
                    "num_points": cone.points.len(),
                    "boundary": cone.boundary,
                }),
                csv: Some(table.to_csv()),
                svg: Some(svg),
            })
        }
    }
}

fn report(r: ExperimentReport) -> Res {
    let csv = r.table.as_ref().map(|t| t.to_csv());
    Ok(Output { json: serde_json::to_value(&r).expect("serializable report"), csv, svg: None })
}

fn exp(cmd: &ExpCommand) -> Res {
    match cmd {
        ExpCommand::DiscontinuityQubit { q } => report(experiments::discontinuity_qubit(*q)?),
        ExpCommand::DiscontinuityQutrit { q } => report(experiments::discontinuity_qutrit(*q)?),
        ExpCommand::Cmap { beta, beta_prime, energies, cap } => {
            report(experiments::cmap_probe(*beta, *beta_prime, energies, *cap)?)
        }
        ExpCommand::Hausdorff { set_a, set_b } => {
            let load = |ps: &[PathBuf]| ps.iter().map(|p| read_json(p)).collect::<Result<Vec<QuantumChannel>, _>>();
            let d = experiments::hausdorff_surrogate(&load(set_a)?, &load(set_b)?)?;
            json_out(json!({ "surrogate": d, "metric": "max-min Choi trace distance / n (surrogate)" }))
        }
        ExpCommand::ThermoMaj { x, y, d } => {
            json_out(json!({ "thermo_majorizes": experiments::thermo_majorization_check(x, y, d)? }))
        }
        ExpCommand::Converge { kind, schedule, lambda, phi, mu, cap, coupling, gap, system, bath, temp } => {
            let kind = match kind {
                ConvergeKind::InfiniteExtreme => ConvergenceKind::InfiniteExtreme { lambda: *lambda, phi: *phi },
                ConvergeKind::FiniteExtreme => ConvergenceKind::FiniteExtreme {
                    lambda: *lambda,
                    mu: mu.ok_or_else(|| CliError::Usage("--kind finite-extreme needs --mu".into()))?,
                    q: temp.q.ok_or_else(|| CliError::Usage("--kind finite-extreme needs --q".into()))?,
                    cap: *cap,
                },
                ConvergeKind::SpinEmbed => ConvergenceKind::SpinEmbed {
                    system: system.require()?,
                    bath: bath.require()?,
                    gap: *gap,
                    beta: temp.require()?,
                    coupling: *coupling,
                },
            };
            report(experiments::convergence_study(&kind, schedule)?)
        }
    }
}
