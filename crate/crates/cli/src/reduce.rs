use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};
use std::time::Instant;

use anyhow::Context;
use clap::{Args, ValueEnum};
use threesum_core::appendix::{reduce_3sum_to_monoconv, solve_3sum_via_witness_ds, MonoConvParams, WitnessParams};
use threesum_core::hashing::{DetectionBound, ModulusSelection};
use threesum_core::instances::{SolutionTriple, ThreeSumInstance};
use threesum_core::oracle::{
    list_3sum, solve_3sum, solve_3sum_tri, solve_an3sum, solve_an3sum_tri, solve_conv3sum, solve_monoconv,
    solve_set_queries, NaiveWitness,
};
use threesum_core::setreduce::{
    parse_answers, solve_3sum_via_setdisjointness, solve_3sum_via_setintersection, DriverOutcome, SetQueryInstance,
    SetReduceParams,
};
use threesum_core::unireduce::{
    reduce_3sum_cubic, reduce_an3sum_quadratic, reduce_conv3sum_quadratic, reduce_listing_small_universe, AnParams,
    ConvParams, CubicParams, ListingParams,
};

use crate::report::Report;
use crate::{Mismatch, Usage};

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Pipeline {
    Cubic,
    AnQuadratic,
    ConvQuadratic,
    Listing,
    Setdisj,
    Setint,
    Monoconv,
    Witness,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Backend {
    Oracle,
    External,
}

#[derive(Args)]
pub struct ReduceArgs {
    #[arg(long, value_enum)]
    pipeline: Pipeline,
    #[arg(long, value_enum, default_value = "oracle")]
    backend: Backend,
    /// Shell command for the external backend: reads a SETFAM family on
    /// stdin, writes `<query>: <elements>` lines.
    #[arg(long)]
    external_cmd: Option<String>,
    /// Also run the direct oracle and fail on disagreement.
    #[arg(long)]
    verify: bool,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    rho: Option<f64>,
    /// Chop length factor.
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    heavy_delta: Option<f64>,
    #[arg(long)]
    lb_delta: Option<f64>,
    /// `default`, `off`, or a number.
    #[arg(long, default_value = "default")]
    bound: String,
    /// Write the hashing round trace here.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Instance file.
    input: PathBuf,
}

fn parse_bound(s: &str) -> anyhow::Result<DetectionBound> {
    Ok(match s {
        "default" => DetectionBound::Default,
        "off" => DetectionBound::Off,
        x => DetectionBound::Fixed(
            x.parse::<f64>().ok().filter(|b| b.is_finite()).ok_or_else(|| Usage(format!("bad --bound `{x}`")))?,
        ),
    })
}

fn check_unit_open(name: &str, x: f64) -> anyhow::Result<f64> {
    if !(0.0..1.0).contains(&x) {
        return Err(Usage(format!("--{name} = {x} outside [0, 1)")).into());
    }
    Ok(x)
}

fn put_selection(r: &mut Report, s: &ModulusSelection) {
    r.put("modulus", s.modulus)
        .put("hash_rounds", s.rounds.len())
        .put("hash_stop", format!("{:?}", s.stop))
        .put("pseudo_initial", s.initial_score)
        .put("pseudo_final", s.final_score)
        .put("bound_B", s.bound.map_or("none".to_string(), |b| format!("{b:.6e}")))
        .put("early_yes", s.yes_detected());
}

fn put_witness(r: &mut Report, w: Option<SolutionTriple>) {
    r.put("witness", w.map_or("none".to_string(), |w| format!("{} {} {}", w.a, w.b, w.c)));
}

fn external(cmd: &str, family: &SetQueryInstance) -> threesum_core::Result<Vec<Vec<u64>>> {
    use threesum_core::Error;
    let mut child = Command::new("sh")
        .arg("-c")
        .arg(cmd)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .map_err(|e| Error::Solver(format!("cannot start `{cmd}`: {e}")))?;
    let input = family.serialize();
    let mut stdin = child.stdin.take().ok_or_else(|| Error::Solver("no stdin".into()))?;
    let writer = std::thread::spawn(move || stdin.write_all(input.as_bytes()));
    let out = child.wait_with_output().map_err(|e| Error::Solver(e.to_string()))?;
    writer
        .join()
        .map_err(|_| Error::Solver("stdin writer panicked".into()))?
        .map_err(|e| Error::Solver(format!("writing to `{cmd}`: {e}")))?;
    if !out.status.success() {
        return Err(Error::Solver(format!("`{cmd}` exited with {}", out.status)));
    }
    parse_answers(&String::from_utf8_lossy(&out.stdout), family.queries.len())
}

fn oracle_intersections(f: &SetQueryInstance) -> threesum_core::Result<Vec<Vec<u64>>> {
    Ok(solve_set_queries(f)?.into_iter().map(|a| a.intersection).collect())
}

fn put_driver(r: &mut Report, out: &DriverOutcome) {
    put_selection(r, &out.selection);
    if let Some(d) = &out.declared {
        r.put("declared_universe", d.universe)
            .put("declared_sets", d.sets)
            .put("declared_size", d.size_bound)
            .put("declared_queries", d.queries)
            .put("groups", d.groups);
    }
    r.put("split_t", out.threshold)
        .put("backend_queries", out.backend_queries)
        .put("exhausted", out.exhausted)
        .put("listed", out.listed);
}

pub fn run(args: &ReduceArgs) -> anyhow::Result<()> {
    let text = std::fs::read_to_string(&args.input).with_context(|| format!("reading {}", args.input.display()))?;
    let inst = ThreeSumInstance::parse(&text)?;
    let set_pipeline = matches!(args.pipeline, Pipeline::Setdisj | Pipeline::Setint);
    let cmd = match (args.backend, &args.external_cmd) {
        (Backend::External, _) if !set_pipeline => {
            return Err(Usage("the external backend is only available for setdisj and setint".into()).into())
        }
        (Backend::External, None) => return Err(Usage("--backend external needs --external-cmd".into()).into()),
        (Backend::External, Some(c)) => Some(c.clone()),
        (Backend::Oracle, _) => None,
    };
    let bound = parse_bound(&args.bound)?;
    let name = args.pipeline.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();

    let mut r = Report::default();
    r.put("pipeline", &name)
        .put("backend", if cmd.is_some() { "external" } else { "oracle" })
        .put("n", inst.len())
        .put("universe", inst.universe());

    let start = Instant::now();
    let mut trace = None;
    // Either a decision or an All-Numbers vector.
    let mut decision = None;
    let mut flags = None;
    let mut witness = None;
    match args.pipeline {
        Pipeline::Cubic => {
            let d = CubicParams::proof_defaults();
            let mut p = CubicParams {
                mu: args.mu.unwrap_or(d.mu),
                delta: args.delta.unwrap_or(d.delta),
                alpha: args.alpha.unwrap_or(d.alpha),
                c: args.c.unwrap_or(d.c),
                hash: d.hash,
            };
            p.hash.bound = bound;
            p.validate()?;
            r.put("mu", p.mu).put("delta", p.delta).put("alpha", p.alpha).put("c", p.c);
            let out = reduce_3sum_cubic(&inst, |t| Ok(solve_3sum_tri(t).is_some()), &p)?;
            put_selection(&mut r, &out.selection);
            let s = &out.stats;
            r.put("groups", s.groups)
                .put("triples", s.triples)
                .put("chop_length", s.chop_length)
                .put("solver_calls", s.solver_calls)
                .put("positive_pieces", s.positive_pieces)
                .put("pseudo_enumerated", s.pseudo_enumerated);
            trace = Some(out.selection.export_trace());
            decision = Some(out.decision);
            witness = out.witness;
        }
        Pipeline::AnQuadratic => {
            let d = AnParams::proof_defaults();
            let p = AnParams {
                mu: args.mu.unwrap_or(d.mu),
                delta: args.delta.unwrap_or(d.delta),
                alpha: args.alpha.unwrap_or(d.alpha),
                c: args.c.unwrap_or(d.c),
                pool: d.pool,
            };
            p.validate()?;
            r.put("mu", p.mu).put("delta", p.delta).put("alpha", p.alpha).put("c", p.c);
            let out = reduce_an3sum_quadratic(&inst, |t| Ok(solve_an3sum_tri(t)), &p)?;
            put_selection(&mut r, &out.selection);
            let s = &out.stats;
            r.put("groups", s.groups)
                .put("triples", s.triples)
                .put("chop_length", s.chop_length)
                .put("solver_calls", s.solver_calls)
                .put("pseudo_enumerated", s.pseudo_enumerated);
            trace = Some(out.selection.export_trace());
            flags = Some(out.flags);
        }
        Pipeline::ConvQuadratic => {
            let d = ConvParams::proof_defaults();
            let p = ConvParams {
                mu: args.mu.unwrap_or(d.mu),
                delta: args.delta.unwrap_or(d.delta),
                heavy_delta: args.heavy_delta.unwrap_or(d.heavy_delta),
            };
            if !(0.0..=2.0).contains(&p.mu) {
                return Err(Usage(format!("--mu = {} outside [0, 2]", p.mu)).into());
            }
            r.put("mu", p.mu).put("delta", p.delta).put("heavy_delta", p.heavy_delta);
            let out = reduce_conv3sum_quadratic(&inst, |c| Ok(solve_conv3sum(c).into_iter().any(|f| f)), &p)?;
            if let Some(sel) = &out.selection {
                put_selection(&mut r, sel);
                trace = Some(sel.export_trace());
            }
            let s = &out.stats;
            r.put("collisions", s.collisions)
                .put("heavy_classes", s.heavy_classes)
                .put("heavy_pairs", s.heavy_pairs)
                .put("cells", s.cells)
                .put("solver_calls", s.solver_calls)
                .put("max_entry", s.max_entry)
                .put("entry_bound", s.entry_bound);
            decision = Some(out.decision);
            witness = out.witness;
        }
        Pipeline::Listing => {
            let d = ListingParams::proof_defaults();
            let p = ListingParams { mu: args.mu.unwrap_or(d.mu), delta: args.delta.unwrap_or(d.delta), cap: None };
            r.put("mu", p.mu).put("delta", p.delta);
            let out = reduce_listing_small_universe(&inst, |m| Ok(list_3sum(m)), &p)?;
            put_selection(&mut r, &out.selection);
            r.put("dummies", out.dummies)
                .put("listed", out.listed)
                .put("pseudo_enumerated", out.pseudo_enumerated)
                .put("zero_class_pairs", out.zero_class_pairs);
            trace = Some(out.selection.export_trace());
            decision = Some(out.decision);
            witness = out.witness;
        }
        Pipeline::Setdisj | Pipeline::Setint => {
            let d = SetReduceParams::default();
            let p = SetReduceParams {
                alpha: check_unit_open("alpha", args.alpha.unwrap_or(d.alpha))?,
                beta: args.beta.unwrap_or(d.beta),
                delta: args.delta,
                rho: args.rho.unwrap_or(d.rho),
                pool: d.pool,
                bound,
            };
            r.put("alpha", p.alpha);
            let out = if args.pipeline == Pipeline::Setdisj {
                r.put("rho", p.rho).put("delta", p.disjointness_delta());
                let backend = |f: &SetQueryInstance| -> threesum_core::Result<Vec<bool>> {
                    let ans = match &cmd {
                        Some(c) => external(c, f)?,
                        None => oracle_intersections(f)?,
                    };
                    Ok(ans.iter().map(Vec::is_empty).collect())
                };
                solve_3sum_via_setdisjointness(&inst, &p, backend)?
            } else {
                r.put("beta", p.beta).put("delta", p.intersection_delta());
                let backend = |f: &SetQueryInstance| match &cmd {
                    Some(c) => external(c, f),
                    None => oracle_intersections(f),
                };
                solve_3sum_via_setintersection(&inst, &p, backend)?
            };
            put_driver(&mut r, &out);
            trace = Some(out.selection.export_trace());
            decision = Some(out.decision);
            witness = out.witness;
        }
        Pipeline::Monoconv => {
            let d = MonoConvParams::default();
            let p = MonoConvParams {
                an: AnParams {
                    mu: args.mu.unwrap_or(d.an.mu),
                    delta: args.delta.unwrap_or(d.an.delta),
                    alpha: args.alpha.unwrap_or(d.an.alpha),
                    c: args.c.unwrap_or(d.an.c),
                    pool: d.an.pool,
                },
                lb_delta: args.lb_delta.unwrap_or(d.lb_delta),
                bucketed: true,
            };
            p.an.validate()?;
            r.put("mu", p.an.mu).put("delta", p.an.delta).put("alpha", p.an.alpha).put("lb_delta", p.lb_delta);
            let out = reduce_3sum_to_monoconv(&inst, |m| Ok(solve_monoconv(m)), &p)?;
            put_selection(&mut r, &out.selection);
            let s = &out.stats;
            r.put("pieces", s.pieces)
                .put("subinstances", s.subinstances)
                .put("cells", s.cells)
                .put("max_load", s.max_load)
                .put("load_bound", s.max_load_bound)
                .put("heavy_elements", s.heavy_elements)
                .put("heavy_pairs", s.heavy_pairs)
                .put("pseudo_enumerated", out.reduction.pseudo_enumerated);
            trace = Some(out.selection.export_trace());
            decision = Some(out.decision);
            witness = out.witness;
        }
        Pipeline::Witness => {
            let d = WitnessParams::proof_defaults();
            let p = WitnessParams { alpha: args.alpha.unwrap_or(d.alpha), delta: args.delta.unwrap_or(d.delta) };
            r.put("alpha", p.alpha).put("delta", p.delta);
            let out = solve_3sum_via_witness_ds(&inst, &NaiveWitness, &p)?;
            r.put("modulus_1", out.first.modulus)
                .put("modulus_2", out.second.modulus)
                .put("combined_modulus", out.combined_modulus)
                .put("pseudo_final", out.second.final_score)
                .put("preprocessings", out.preprocessings)
                .put("queries", out.queries)
                .put("expanded", out.expanded);
            trace = Some(out.second.export_trace());
            decision = Some(out.decision);
            witness = out.witness;
        }
    }
    let elapsed = start.elapsed();

    if let Some(d) = decision {
        r.put("decision", if d { "yes" } else { "no" });
        put_witness(&mut r, witness);
    }
    if let Some(f) = &flags {
        r.put("decision", if f.iter().any(|&x| x) { "yes" } else { "no" });
        r.list("flagged", inst.elements().iter().zip(f).filter(|(_, &x)| x).map(|(v, _)| v));
    }

    let mut problem = None;
    if args.verify {
        if let Some(w) = witness {
            if !(w.a + w.b == w.c && inst.contains(w.a) && inst.contains(w.b) && inst.contains(w.c)) {
                problem = Some(format!("witness {} {} {} is not a solution", w.a, w.b, w.c));
            }
        }
        if let Some(d) = decision {
            let expect = solve_3sum(&inst).is_some();
            if d != expect {
                problem = Some(format!("decision {d}, oracle {expect}"));
            }
        }
        if let Some(f) = &flags {
            if *f != solve_an3sum(&inst) {
                problem = Some("All-Numbers vector differs from the oracle".into());
            }
        }
        r.put("verify", if problem.is_some() { "mismatch" } else { "agree" });
    } else {
        r.put("verify", "skipped");
    }
    r.put("time_ms", elapsed.as_millis());
    print!("{r}");
    if let (Some(path), Some(t)) = (&args.trace, trace) {
        std::fs::write(path, t)?;
    }
    match problem {
        Some(p) => Err(Mismatch(p).into()),
        None => Ok(()),
    }
}
