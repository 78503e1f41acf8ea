//! Chains the stages from a 3-CNF formula to the requested problem and keeps
//! what is needed to move witnesses along the chain.

use std::fmt;
use std::str::FromStr;

use super::cnf::Cnf;
use super::drop_ext::drop_extension;
use super::drop_req::{complete_witness, drop_requests_2, drop_requests_k, DropReqOutput};
use super::lift2k::lift_2_to_k;
use super::sat_ext::{sat_to_sr2c_ext, scale, SatTrace, VertexName};
use super::tovey::tovey_normalize;
use super::trace::{StageTrace, Trace};
use super::{Check, Palette};
use crate::biclique::CoverOptions;
use crate::config::Config;
use crate::error::{ensure, Error, Result};
use crate::graph::{greedy_proper_coloring, Graph};
use crate::instance::{Color, Coloring, Instance};

/// Last problem of the chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    /// Subset Rainbow 2-Coloring Extension.
    Sr2cExt,
    /// Subset Rainbow k-Coloring Extension.
    SrkcExt,
    /// Subset Rainbow k-Coloring.
    Srkc,
    /// Rainbow k-Coloring.
    Rkc,
}

impl FromStr for Target {
    type Err = Error;
    fn from_str(s: &str) -> Result<Target> {
        match s {
            "sr2c-ext" => Ok(Target::Sr2cExt),
            "srkc-ext" => Ok(Target::SrkcExt),
            "srkc" => Ok(Target::Srkc),
            "rkc" => Ok(Target::Rkc),
            _ => Err(Error::usage(format!("unknown target {s:?} (sr2c-ext, srkc-ext, srkc, rkc)"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CompileOptions {
    pub k: usize,
    pub target: Target,
    pub cover: CoverOptions,
}

/// Sizes of one stage's output and its checks against the stated counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageReport {
    pub stage: &'static str,
    pub sizes: Vec<(&'static str, usize)>,
    pub checks: Vec<Check>,
}

impl StageReport {
    fn for_instance(stage: &'static str, inst: &Instance, colorings: &[(&'static str, usize)], checks: Vec<Check>) -> Self {
        let mut sizes = vec![
            ("n", inst.graph.n()),
            ("m", inst.graph.m()),
            ("S", inst.request_count()),
            ("Dom", inst.precoloring.dom_size()),
        ];
        sizes.extend_from_slice(colorings);
        StageReport { stage, sizes, checks }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

impl fmt::Display for StageReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "stage {}", self.stage)?;
        for (name, v) in &self.sizes {
            write!(f, " {name}={v}")?;
        }
        for c in &self.checks {
            write!(f, "\n  check {c}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct Compiled {
    /// Output of every instance stage, innermost first.
    pub instances: Vec<Instance>,
    pub trace: Trace,
    pub report: Vec<StageReport>,
}

impl Compiled {
    pub fn instance(&self) -> &Instance {
        self.instances.last().expect("compilation has at least one instance")
    }

    /// Colorings of every stage instance for a model of the source formula.
    pub fn lift_all(&self, xi: &[bool], cfg: &Config) -> Result<Vec<Coloring>> {
        let sat = self.trace.sat().ok_or_else(|| Error::internal("compilation without compression"))?;
        let xi = match self.trace.tovey() {
            Some(t) => t.lift(xi)?,
            None => xi.to_vec(),
        };
        let mut out = vec![sat.lift(&xi)?];
        let stages = self.trace.stages.iter().filter(|s| s.embed().is_some());
        for (s, inst) in stages.zip(&self.instances[1..]) {
            let prev = out.last().expect("nonempty");
            let c = match s {
                StageTrace::DropReq(t) => complete_witness(inst, t, prev, cfg)?,
                _ => s.embed().expect("embedding stage").lift(prev)?,
            };
            out.push(c);
        }
        Ok(out)
    }

    /// Coloring of the final instance for a model of the source formula.
    pub fn lift(&self, xi: &[bool], cfg: &Config) -> Result<Coloring> {
        Ok(self.lift_all(xi, cfg)?.pop().expect("nonempty"))
    }

    /// Source assignment read off a solution of the final instance.
    pub fn extract(&self, c: &[Color]) -> Result<Vec<bool>> {
        self.trace.extract(c)
    }
}

fn request_palette(inst: &Instance) -> Result<Palette> {
    let s = Graph::new(inst.graph.n(), inst.request_pairs().iter().copied())?;
    Ok(Palette::tight(greedy_proper_coloring(&s)))
}

/// Size checks of the compression against the stated layer and middle counts.
fn sat_checks(sat: &SatTrace) -> Vec<Check> {
    let lo = sat.layout();
    let (a, b) = scale(sat.nvars());
    let mut mids = 0;
    let mut upper = vec![0usize; a + 1];
    let mut lower = vec![0usize; a + 1];
    for v in 0..lo.n {
        match lo.name(v) {
            VertexName::M(_) => mids += 1,
            VertexName::U(i, _) => upper[i] += 1,
            VertexName::L(i, _) => lower[i] += 1,
            _ => {}
        }
    }
    let w = a + 3;
    let good = upper[1..].iter().chain(&lower[1..]).filter(|&&s| s == w).count();
    vec![
        Check::new("sat-ext |M| = ceil(n^(2/3)) + 9", b + 9, mids),
        Check::new("sat-ext layers of size ceil(n^(1/3)) + 3", 2 * a, good),
    ]
}

/// Compiles `phi` through the chain up to `opts.target`.
pub fn compile(phi: &Cnf, opts: &CompileOptions) -> Result<Compiled> {
    let k = opts.k;
    ensure!(k >= 2, Error::usage("k must be at least 2"));
    ensure!(k <= 16, Error::usage("k must be at most 16"));
    if k == 2 && opts.target != Target::Sr2cExt {
        return Err(Error::Capability(
            "with k = 2 the chain stops at Subset Rainbow 2-Coloring Extension; removing a \
             precoloring needs k >= 3 (use drop-req on a precoloring-free instance instead)"
                .into(),
        ));
    }

    let mut report = Vec::new();
    let (psi, tv) = tovey_normalize(phi)?;
    report.push(StageReport {
        stage: "tovey",
        sizes: vec![
            ("vars", psi.nvars),
            ("clauses", psi.clauses.len()),
            ("source-vars", phi.nvars),
            ("source-clauses", phi.clauses.len()),
        ],
        checks: vec![Check::new("tovey compliant", 1, usize::from(psi.is_tovey()))],
    });
    let (inst2, sat) = sat_to_sr2c_ext(&psi)?;
    let ves = Palette::new(sat.color4(), 4);
    let vs = ves.clone();
    let cg = Palette::tight(sat.cg_coloring());
    report.push(StageReport::for_instance(
        "sat-ext",
        &inst2,
        &[("colors-ES", ves.count), ("colors-S", vs.count), ("colors-CG", cg.count)],
        sat_checks(&sat),
    ));
    let mut trace = Trace { stages: vec![StageTrace::Tovey(tv), StageTrace::SatExt(sat)] };
    let mut instances = vec![inst2];
    if opts.target == Target::Sr2cExt {
        return Ok(Compiled { instances, trace, report });
    }

    let lifted = lift_2_to_k(&instances[0], k, &vs, &ves, &cg)?;
    report.push(StageReport::for_instance(
        "lift-k",
        &lifted.instance,
        &[("colors-S", lifted.vcolor_s.count), ("colors-CG", lifted.cg.count)],
        lifted.checks,
    ));
    trace.stages.push(StageTrace::LiftK(lifted.trace));
    instances.push(lifted.instance);
    if opts.target == Target::SrkcExt {
        return Ok(Compiled { instances, trace, report });
    }

    let dropped = drop_extension(instances.last().expect("nonempty"), &lifted.cg, &lifted.vcolor_s)?;
    report.push(StageReport::for_instance(
        "drop-ext",
        &dropped.instance,
        &[("colors-S", dropped.vcolor_s.count), ("classes", dropped.classes)],
        dropped.checks,
    ));
    trace.stages.push(StageTrace::DropExt(dropped.trace));
    instances.push(dropped.instance);
    if opts.target == Target::Srkc {
        return Ok(Compiled { instances, trace, report });
    }

    let out = drop_requests_k(instances.last().expect("nonempty"), &dropped.vcolor_s, &opts.cover)?;
    report.push(drop_req_report(&out));
    trace.stages.push(StageTrace::DropReq(out.trace));
    instances.push(out.instance);
    Ok(Compiled { instances, trace, report })
}

fn drop_req_report(out: &DropReqOutput) -> StageReport {
    StageReport::for_instance("drop-req", &out.instance, &[("q", out.cover.len())], out.checks.clone())
}

/// Removes the request set of a precoloring-free instance: the two-color
/// construction for `k = 2`, the cycle construction otherwise. The request
/// graph coloring is computed greedily when not given.
pub fn drop_requests(inst: &Instance, vcolor_s: Option<&Palette>, cover: &CoverOptions) -> Result<(DropReqOutput, StageReport)> {
    let own;
    let vs = match vcolor_s {
        Some(p) => p,
        None => {
            own = request_palette(inst)?;
            &own
        }
    };
    let out = if inst.k == 2 { drop_requests_2(inst, vs, cover)? } else { drop_requests_k(inst, vs, cover)? };
    let report = drop_req_report(&out);
    Ok((out, report))
}
