use std::path::Path;

use rainbow_core::biclique::{
    ceil_log2, check_bipartite_cover, check_complement_cover, cover_complement_colored, cover_complete_graph,
    jukna_cover_greedy, jukna_cover_random, BicliqueCover, BipartiteGraph, CoverOptions,
};
use rainbow_core::exact::{
    brute_force_count, brute_force_solve, check_solution, count_satisfying_2colorings, solve_subset_rainbow,
};
use rainbow_core::format::{parse_coloring, parse_instance, write_coloring, write_cover, write_instance};
use rainbow_core::gen;
use rainbow_core::graph::greedy_proper_coloring;
use rainbow_core::maxrb::{derandomized_approx_traced, guaranteed_count, kernelize, solve_max_rainbow, KernelVerdict};
use rainbow_core::reduction::cnf::{parse_assignment, parse_dimacs, write_assignment, write_dimacs};
use rainbow_core::reduction::pipeline::{compile, CompileOptions, StageReport};
use rainbow_core::reduction::trace::{parse_trace, write_trace, Trace};
use rainbow_core::verify::verify_requests;
use rainbow_core::{Config, Error, Graph, Instance, Result};

use crate::out::{field, Fields, Reporter};
use crate::{Cli, Command, CoverKind, GenKind};

pub const EXIT_YES: u8 = 0;
pub const EXIT_NO: u8 = 1;

pub fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::usage(format!("cannot read {}: {e}", path.display())))
}

pub fn load_instance(path: &Path) -> Result<Instance> {
    parse_instance(&read(path)?)
}

fn verdict(yes: bool) -> &'static str {
    if yes {
        "YES"
    } else {
        "NO"
    }
}

fn decision(yes: bool) -> u8 {
    if yes {
        EXIT_YES
    } else {
        EXIT_NO
    }
}

fn sizes(inst: &Instance) -> Fields<'static> {
    vec![
        field("n", inst.graph.n()),
        field("m", inst.graph.m()),
        field("k", inst.k),
        field("requests", inst.request_count()),
    ]
}

pub fn run(cli: &Cli, rep: &Reporter) -> Result<u8> {
    let cfg = cli.global.config()?;
    let seed = cli.global.seed;
    match &cli.command {
        Command::Solve { instance, output, brute } => {
            let inst = load_instance(instance)?;
            let found = if *brute { brute_force_solve(&inst, &cfg)? } else { solve_subset_rainbow(&inst, &cfg)? };
            rep.artifact(output.as_deref(), &write_coloring(&inst.graph, found.as_deref()))?;
            let mut f = vec![field("verdict", verdict(found.is_some()))];
            f.extend(sizes(&inst));
            rep.record(&f);
            Ok(decision(found.is_some()))
        }
        Command::Count { instance, brute } => {
            let inst = load_instance(instance)?;
            let count = if *brute {
                brute_force_count(&inst, &cfg)?
            } else {
                if inst.k != 2 {
                    return Err(Error::usage(format!("counting needs k = 2 (instance has k = {})", inst.k)));
                }
                if inst.has_precoloring() {
                    return Err(Error::usage("counting with a precoloring needs --brute"));
                }
                count_satisfying_2colorings(&inst.graph, &inst.request_pairs(), &cfg)?
            };
            let mut f = vec![field("count", &count)];
            f.extend(sizes(&inst));
            rep.record(&f);
            Ok(EXIT_YES)
        }
        Command::Verify { instance, coloring } => {
            let inst = load_instance(instance)?;
            let Some(c) = parse_coloring(&read(coloring)?, &inst.graph, inst.k)? else {
                return Err(Error::usage("coloring file is NULL"));
            };
            let req = inst.request_pairs();
            let sat = verify_requests(&inst.graph, &c, &req, inst.k);
            let extends = inst.precoloring.is_extended_by(&c);
            let ok = extends && sat.len() == req.len();
            rep.record(&[
                field("verdict", verdict(ok)),
                field("satisfied", sat.len()),
                field("requests", req.len()),
                field("extends_precoloring", extends),
            ]);
            if !rep.is_kv() {
                let mut it = sat.iter().peekable();
                for &(u, v) in req.iter() {
                    if it.peek() == Some(&&(u, v)) {
                        it.next();
                    } else {
                        rep.note(format!("unsatisfied {} {}", u + 1, v + 1));
                    }
                }
            }
            Ok(decision(ok))
        }
        Command::Approx { instance, output } => {
            let inst = load_instance(instance)?;
            let req = inst.feasible_requests();
            let a = derandomized_approx_traced(&inst.graph, &req, inst.k)?;
            rep.artifact(output.as_deref(), &write_coloring(&inst.graph, Some(&a.coloring)))?;
            let mut f = vec![
                field("satisfied", verify_requests(&inst.graph, &a.coloring, &req, inst.k).len()),
                field("plan_rainbow", a.plan.rainbow_count(&a.coloring)),
                field("plan_paths", a.plan.len()),
                field("guaranteed", guaranteed_count(a.plan.len(), inst.k)),
                field("infeasible", inst.request_count() - req.len()),
            ];
            f.extend(sizes(&inst));
            rep.record(&f);
            Ok(EXIT_YES)
        }
        Command::Kernelize { instance, q, output } => {
            let inst = load_instance(instance)?;
            let r = kernelize(&inst.graph, inst.k, *q)?;
            let kernel = Instance::rainbow(r.graph.clone(), inst.k)?;
            rep.artifact(output.as_deref(), &write_instance(&kernel))?;
            let v = match r.verdict {
                KernelVerdict::Yes => "YES",
                KernelVerdict::Reduced => "REDUCED",
            };
            rep.record(&[
                field("verdict", v),
                field("q", r.q),
                field("n", r.graph.n()),
                field("m", r.graph.m()),
                field("input_n", inst.graph.n()),
            ]);
            Ok(EXIT_YES)
        }
        Command::Maxsolve { instance, q, output } => {
            let inst = load_instance(instance)?;
            let r = solve_max_rainbow(&inst.graph, inst.k, *q, &cfg)?;
            rep.artifact(output.as_deref(), &write_coloring(&inst.graph, r.coloring.as_deref()))?;
            rep.record(&[field("verdict", verdict(r.yes)), field("q", q), field("satisfied", r.satisfied)]);
            Ok(decision(r.yes))
        }
        Command::Cover { kind, input, n, left, mode, output } => cover(&cfg, seed, rep, *kind, input.as_deref(), *n, *left, (*mode).into(), output.as_deref()),
        Command::Reduce { cnf, target, k, cover, output, trace, report } => {
            let phi = parse_dimacs(&read(cnf)?)?;
            let opts = CompileOptions {
                k: *k,
                target: target.parse()?,
                cover: cover_options(&cfg, seed, (*cover).into()),
            };
            let c = compile(&phi, &opts)?;
            rep.artifact(output.as_deref(), &write_instance(c.instance()))?;
            if let Some(p) = trace {
                rep.artifact(Some(p), &write_trace(&c.trace))?;
            }
            match report {
                Some(p) => rep.artifact(Some(p), &report_text(&c.report, rep.is_kv()))?,
                None => print_report(rep, &c.report),
            }
            let mut f = vec![field("checks_passed", c.report.iter().all(StageReport::passed))];
            f.extend(sizes(c.instance()));
            rep.record(&f);
            Ok(EXIT_YES)
        }
        Command::Lift { trace, model, instance, output } => {
            let t = parse_trace(&read(trace)?)?;
            let xi = parse_assignment(&read(model)?, source_vars(&t)?)?;
            let inst = load_instance(instance)?;
            let c = t.lift_into(&xi, &inst, &cfg)?;
            let solved = check_solution(&inst, &inst.request_pairs(), &c).is_ok();
            rep.artifact(output.as_deref(), &write_coloring(&inst.graph, Some(&c)))?;
            rep.record(&[field("verdict", verdict(solved)), field("edges", c.len())]);
            Ok(decision(solved))
        }
        Command::Extract { trace, instance, coloring, output } => {
            let t = parse_trace(&read(trace)?)?;
            let inst = load_instance(instance)?;
            let Some(c) = parse_coloring(&read(coloring)?, &inst.graph, inst.k)? else {
                return Err(Error::usage("coloring file is NULL"));
            };
            let xi = t.extract(&c)?;
            rep.artifact(output.as_deref(), &write_assignment(&xi))?;
            rep.record(&[field("variables", xi.len())]);
            Ok(EXIT_YES)
        }
        Command::Gen { kind, n, m, p, k, requests, clauses, right, max_deg, model, output } => {
            let mut rng = gen::rng(seed);
            let text = match kind {
                GenKind::Graph | GenKind::Instance => {
                    let g = match (m, p) {
                        (Some(m), None) => gen::gnm(*n, *m, &mut rng)?,
                        (None, Some(p)) => gen::gnp(*n, *p, &mut rng)?,
                        (None, None) => gen::gnp(*n, 0.5, &mut rng)?,
                        (Some(_), Some(_)) => return Err(Error::usage("give --m or --p, not both")),
                    };
                    let inst = if *kind == GenKind::Graph {
                        Instance::rainbow(g, *k)?
                    } else {
                        let req = gen::random_requests(&g, *k, *requests, &mut rng);
                        Instance::subset(g, *k, req)?
                    };
                    write_instance(&inst)
                }
                GenKind::Cnf => write_dimacs(&gen::random_3cnf(*n, *clauses, &mut rng)?),
                GenKind::Tovey => write_dimacs(&gen::tovey_formula(*n, *clauses, &mut rng)?),
                GenKind::Planted => {
                    let (f, xi) = gen::planted_tovey(*n, *clauses, &mut rng)?;
                    let path = model.as_deref().ok_or_else(|| Error::usage("planted formulas need --model"))?;
                    rep.artifact(Some(path), &write_assignment(&xi))?;
                    write_dimacs(&f)
                }
                GenKind::Bipartite => {
                    let b = gen::random_bipartite(*n, *right, *max_deg, &mut rng)?;
                    let g = Graph::new(n + right, b.edges().map(|(a, c)| (a, n + c)))?;
                    write_instance(&Instance::subset(g, *k, Vec::new())?)
                }
            };
            rep.artifact(output.as_deref(), &text)?;
            Ok(EXIT_YES)
        }
        Command::Bench { manifest, no_time } => crate::bench::run(manifest, *no_time, &cfg, rep),
    }
}

fn cover_options(cfg: &Config, seed: u64, mode: rainbow_core::biclique::CoverMode) -> CoverOptions {
    CoverOptions { mode, seed, greedy_cap: cfg.budgets.greedy_cover_side, workers: cfg.workers }
}

#[allow(clippy::too_many_arguments)]
fn cover(
    cfg: &Config,
    seed: u64,
    rep: &Reporter,
    kind: CoverKind,
    input: Option<&Path>,
    n: Option<usize>,
    left: Option<usize>,
    mode: rainbow_core::biclique::CoverMode,
    output: Option<&Path>,
) -> Result<u8> {
    let graph = || -> Result<Graph> {
        let p = input.ok_or_else(|| Error::usage("this cover needs an input graph"))?;
        Ok(load_instance(p)?.graph)
    };
    let bipartite = |g: &Graph| -> Result<BipartiteGraph> {
        let l = left.ok_or_else(|| Error::usage("bipartite covers need --left"))?;
        if l > g.n() {
            return Err(Error::usage(format!("--left {l} exceeds the {} vertices", g.n())));
        }
        if let Some((u, v)) = g.edges().find(|&(u, v)| (u < l) == (v < l)) {
            return Err(Error::usage(format!("edge {} {} lies inside one side", u + 1, v + 1)));
        }
        let lv: Vec<usize> = (0..l).collect();
        let rv: Vec<usize> = (l..g.n()).collect();
        Ok(BipartiteGraph::between(g, &lv, &rv))
    };
    let (c, bound): (BicliqueCover, Option<usize>) = match kind {
        CoverKind::Complete => {
            let n = n.ok_or_else(|| Error::usage("complete covers need --n"))?;
            let c = cover_complete_graph(n);
            check_complement_cover(&Graph::empty(n), &c.bicliques)?;
            (c, Some(ceil_log2(n)))
        }
        CoverKind::Greedy | CoverKind::Random => {
            let g = graph()?;
            let b = bipartite(&g)?;
            let c = if kind == CoverKind::Greedy {
                jukna_cover_greedy(&b, cfg.budgets.greedy_cover_side, cfg.workers)?
            } else {
                jukna_cover_random(&b, seed)?
            };
            check_bipartite_cover(&b, &c.bicliques)?;
            (c, None)
        }
        CoverKind::Colored => {
            let g = graph()?;
            let vcolor = greedy_proper_coloring(&g);
            let c = cover_complement_colored(&g, &vcolor, &cover_options(cfg, seed, mode))?;
            check_complement_cover(&g, &c.bicliques)?;
            (c, None)
        }
    };
    rep.artifact(output, &write_cover(&c.bicliques))?;
    let mut f = vec![field("bicliques", c.len()), field("verified", true)];
    if let Some(b) = bound {
        f.push(field("ceil_log2_n", b));
    }
    rep.record(&f);
    Ok(EXIT_YES)
}

fn source_vars(t: &Trace) -> Result<usize> {
    match (t.tovey(), t.sat()) {
        (Some(tv), _) => Ok(tv.source_vars()),
        (None, Some(s)) => Ok(s.nvars()),
        (None, None) => Err(Error::usage("trace has no formula stage")),
    }
}

fn report_text(report: &[StageReport], kv: bool) -> String {
    let mut out = String::new();
    for r in report {
        if kv {
            out.push_str(&format!("stage={}", r.stage));
            for (k, v) in &r.sizes {
                out.push_str(&format!(" {k}={v}"));
            }
            out.push('\n');
            for c in &r.checks {
                out.push_str(&format!(
                    "check={:?} stage={} expected={} actual={} ok={}\n",
                    c.name,
                    r.stage,
                    c.expected,
                    c.actual,
                    c.passed()
                ));
            }
        } else {
            out.push_str(&format!("{r}\n"));
        }
    }
    out
}

fn print_report(rep: &Reporter, report: &[StageReport]) {
    for line in report_text(report, rep.is_kv()).lines() {
        rep.raw(line);
    }
}
