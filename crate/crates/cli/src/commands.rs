//! Request validation and dispatch to the core library.

use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use moore_tower_core::chain::{
    find_homotopy_equivalence, homotopy_classes, k_invariant, postnikov_section, ChainComplex, Complex,
};
use moore_tower_core::compare::{comparison_les, mod_p_homotopy, snake_oracle, spiral_sequence};
use moore_tower_core::emext::{class_to_extension, em_object, extension_classes, extension_to_class};
use moore_tower_core::homalg::{enumerate_extensions, extensions_equivalent, hom_and_ext, tensor, tor1};
use moore_tower_core::lift::{
    brute_force_realize, enumerate_lifts, verify_lift, LiftBounds, LiftProblem, LiftSearch, TowerLedger,
};
use moore_tower_core::sample::{
    random_bisimplicial, random_free_complex, random_matrix, random_simplicial, rng, BisimplicialBounds,
    ComplexBounds, SampleRng,
};
use moore_tower_core::simplicial::{
    dold_kan, homotopy_groups, latching_object, matching_object, moore_complex, postnikov_section_simplicial,
    BisimplicialModule, SimplicialModule,
};
use moore_tower_core::snf::smith;
use moore_tower_core::{FgModule, Int, Module, RingSpec};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::format::{parse_input, parse_ring, ComplexJson, Input, MatrixJson, ModuleJson, SimplicialJson};
use crate::report::{sequence_json, sequence_table, Format, Provenance, Report, Table};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum CommandName {
    Snf,
    Module,
    Homology,
    Postnikov,
    Kinv,
    DoldKan,
    Moore,
    Matching,
    Latching,
    Bockstein,
    CompareLes,
    Spiral,
    ExtClassify,
    Lift,
    Oracle,
}

impl CommandName {
    pub fn name(self) -> &'static str {
        match self {
            CommandName::Snf => "snf",
            CommandName::Module => "module",
            CommandName::Homology => "homology",
            CommandName::Postnikov => "postnikov",
            CommandName::Kinv => "kinv",
            CommandName::DoldKan => "dold-kan",
            CommandName::Moore => "moore",
            CommandName::Matching => "matching",
            CommandName::Latching => "latching",
            CommandName::Bockstein => "bockstein",
            CommandName::CompareLes => "compare-les",
            CommandName::Spiral => "spiral",
            CommandName::ExtClassify => "ext-classify",
            CommandName::Lift => "lift",
            CommandName::Oracle => "oracle",
        }
    }
}

#[derive(clap::Parser, Debug, Clone)]
#[command(
    name = "moore-tower",
    version,
    about = "Exact homological algebra over Z and Z/m: Postnikov sections, k-invariants, \
             comparison and spiral sequences, and lifting complexes along Z -> Z/m"
)]
pub struct Cli {
    /// Computation to run.
    #[arg(value_enum)]
    pub command: CommandName,
    /// Input JSON document; omit it to draw a random input from --seed.
    pub input: Option<PathBuf>,
    /// Z or Zmod:<m>. The ring of generated or presented input, or the
    /// target Z/p of base change for compare-les, bockstein and oracle.
    #[arg(long)]
    pub ring: Option<String>,
    /// Degree n (or simplicial level) the command is about.
    #[arg(long)]
    pub degree: Option<usize>,
    /// Inclusive degree range a..b.
    #[arg(long)]
    pub range: Option<String>,
    /// Search bounds as rank=<r>,entry=<e>,deg=<d>; missing keys keep defaults.
    #[arg(long)]
    pub bounds: Option<String>,
    /// Seed for generated inputs.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Add wall-clock timing to the report.
    #[arg(long)]
    pub timing: bool,
}

/// A validated request.
#[derive(Clone, Debug)]
pub struct CommandRequest {
    pub command: CommandName,
    pub input: Option<PathBuf>,
    pub ring: Option<RingSpec>,
    pub degree: Option<usize>,
    pub range: Option<(usize, usize)>,
    pub bounds: Option<LiftBounds>,
    pub seed: Option<u64>,
}

pub fn parse_range(s: &str) -> Result<(usize, usize)> {
    let (a, b) = s.split_once("..").ok_or_else(|| anyhow!("range {:?} is not of the form a..b", s))?;
    let a: usize = a.trim().parse().with_context(|| format!("range start {:?}", a))?;
    let b: usize = b.trim().parse().with_context(|| format!("range end {:?}", b))?;
    if a > b {
        bail!("empty range {}..{}", a, b);
    }
    Ok((a, b))
}

pub fn parse_bounds(s: &str) -> Result<LiftBounds> {
    let mut b = LiftBounds::default();
    for part in s.split(',').filter(|p| !p.trim().is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| anyhow!("bound {:?} is not key=value", part))?;
        let v = v.trim();
        match k.trim() {
            "rank" => b.max_rank = v.parse().with_context(|| format!("rank bound {:?}", v))?,
            "entry" => b.max_entry = v.parse().with_context(|| format!("entry bound {:?}", v))?,
            "deg" => b.max_degree = v.parse().with_context(|| format!("degree bound {:?}", v))?,
            other => bail!("unknown bound {:?} (expected rank, entry or deg)", other),
        }
    }
    if b.max_entry < 0 {
        bail!("entry bound must be nonnegative");
    }
    Ok(b)
}

impl CommandRequest {
    pub fn from_cli(cli: &Cli) -> Result<CommandRequest> {
        Ok(CommandRequest {
            command: cli.command,
            input: cli.input.clone(),
            ring: cli.ring.as_deref().map(parse_ring).transpose()?,
            degree: cli.degree,
            range: cli.range.as_deref().map(parse_range).transpose()?,
            bounds: cli.bounds.as_deref().map(parse_bounds).transpose()?,
            seed: cli.seed,
        })
    }

    fn echo(&self) -> Value {
        let mut m = serde_json::Map::new();
        if let Some(p) = &self.input {
            let name = p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            m.insert("input".into(), json!(name));
        }
        if let Some(r) = &self.ring {
            m.insert("ring".into(), json!(r.to_string()));
        }
        if let Some(d) = self.degree {
            m.insert("degree".into(), json!(d));
        }
        if let Some((a, b)) = self.range {
            m.insert("range".into(), json!(format!("{}..{}", a, b)));
        }
        if let Some(b) = &self.bounds {
            m.insert("bounds".into(), bounds_json(b));
        }
        if let Some(s) = self.seed {
            m.insert("seed".into(), json!(s));
        }
        Value::Object(m)
    }
}

/// A report and the process exit code: 0 success, 2 verified negative.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: Report,
    pub exit: i32,
}

struct Done {
    verdict: String,
    results: Value,
    tables: Vec<Table>,
    exit: i32,
}

impl Done {
    fn new(verdict: impl Into<String>, results: Value) -> Done {
        Done {
            verdict: verdict.into(),
            results,
            tables: Vec::new(),
            exit: 0,
        }
    }

    fn table(mut self, t: Table) -> Done {
        self.tables.push(t);
        self
    }

    fn exit(mut self, code: i32) -> Done {
        self.exit = code;
        self
    }
}

fn form(m: &FgModule) -> String {
    m.canonical_form().to_string()
}

fn ints(v: &[Int]) -> Value {
    json!(v.iter().map(|x| x.to_string()).collect::<Vec<_>>())
}

fn bounds_json(b: &LiftBounds) -> Value {
    json!({"max_degree": b.max_degree, "max_rank": b.max_rank, "max_entry": b.max_entry})
}

fn complex_bounds() -> ComplexBounds {
    ComplexBounds {
        max_top: 4,
        max_rank: 3,
        max_entry: 3,
    }
}

struct Ctx<'a> {
    req: &'a CommandRequest,
    input: Option<Input>,
    rng: Option<SampleRng>,
}

impl Ctx<'_> {
    fn ring_or(&self, default: RingSpec) -> RingSpec {
        self.req.ring.clone().unwrap_or(default)
    }

    fn need_seed(&mut self, what: &str) -> Result<&mut SampleRng> {
        self.rng
            .as_mut()
            .ok_or_else(|| anyhow!("{} needs an input file or --seed", what))
    }

    fn take(&mut self) -> Option<Input> {
        self.input.take()
    }

    fn complex(&mut self, default_ring: RingSpec) -> Result<Complex> {
        match self.take() {
            Some(Input::Complex(c)) => Ok(c),
            Some(Input::Lift(c, _)) => Ok(c),
            Some(other) => bail!("expected a chain complex, got a {}", other.kind()),
            None => {
                // For compare-les and oracle, --ring names the base-change target.
                let ring = match self.req.command {
                    CommandName::CompareLes | CommandName::Oracle => RingSpec::Integers,
                    _ => self.ring_or(default_ring),
                };
                let r = self.need_seed("this command")?;
                Ok(Arc::new(random_free_complex(r, &ring, complex_bounds())))
            }
        }
    }

    fn simplicial(&mut self) -> Result<SimplicialModule> {
        match self.take() {
            Some(Input::Simplicial(x)) => Ok(x),
            Some(Input::Complex(c)) => Ok(dold_kan(&c, c.top() + 2)),
            Some(other) => bail!("expected a simplicial module, got a {}", other.kind()),
            None => {
                let ring = self.ring_or(RingSpec::Integers);
                let ring = if self.req.command == CommandName::Bockstein { RingSpec::Integers } else { ring };
                let r = self.need_seed("this command")?;
                let b = ComplexBounds {
                    max_top: 3,
                    max_rank: 2,
                    max_entry: 3,
                };
                Ok(random_simplicial(r, &ring, b, 4))
            }
        }
    }

    fn bisimplicial(&mut self) -> Result<BisimplicialModule> {
        match self.take() {
            Some(Input::Bisimplicial(x)) => Ok(x),
            Some(other) => bail!("expected a bisimplicial module, got a {}", other.kind()),
            None => {
                let ring = self.ring_or(RingSpec::Integers);
                let r = self.need_seed("spiral")?;
                Ok(random_bisimplicial(r, &ring, BisimplicialBounds::default()))
            }
        }
    }

    fn prime(&self, default: i64) -> Result<i64> {
        match &self.req.ring {
            None => Ok(default),
            Some(RingSpec::Mod(m)) => m.to_i64().ok_or_else(|| anyhow!("modulus too large")),
            Some(RingSpec::Integers) => bail!("this command needs --ring Zmod:<p>"),
        }
    }

    fn degrees(&self, top: usize) -> (usize, usize) {
        self.req.range.unwrap_or((0, top))
    }
}

pub fn execute(req: &CommandRequest) -> Result<Outcome> {
    let input = req.input.as_deref().map(parse_input).transpose()?;
    let mut ctx = Ctx {
        req,
        input,
        rng: req.seed.map(rng),
    };
    let done = match req.command {
        CommandName::Snf => snf(&mut ctx)?,
        CommandName::Module => module(&mut ctx)?,
        CommandName::Homology => homology(&mut ctx)?,
        CommandName::Postnikov => postnikov(&mut ctx)?,
        CommandName::Kinv => kinv(&mut ctx)?,
        CommandName::DoldKan => dold_kan_cmd(&mut ctx)?,
        CommandName::Moore => moore(&mut ctx)?,
        CommandName::Matching => matching(&mut ctx)?,
        CommandName::Latching => latching(&mut ctx)?,
        CommandName::Bockstein => bockstein(&mut ctx)?,
        CommandName::CompareLes => compare_les(&mut ctx)?,
        CommandName::Spiral => spiral(&mut ctx)?,
        CommandName::ExtClassify => ext_classify(&mut ctx)?,
        CommandName::Lift => lift(&mut ctx)?,
        CommandName::Oracle => oracle(&mut ctx)?,
    };
    Ok(Outcome {
        report: Report {
            command: req.command.name().into(),
            request: req.echo(),
            verdict: done.verdict,
            results: done.results,
            tables: done.tables,
            provenance: Provenance {
                tool: "moore-tower".into(),
                version: env!("CARGO_PKG_VERSION").into(),
                seed: req.seed,
            },
            timing_ms: None,
        },
        exit: done.exit,
    })
}

fn snf(ctx: &mut Ctx) -> Result<Done> {
    let ring = ctx.ring_or(RingSpec::Integers);
    let a = match ctx.take() {
        Some(Input::Matrix(m)) => m,
        Some(other) => bail!("snf expects a matrix, got a {}", other.kind()),
        None => {
            let r = ctx.need_seed("snf")?;
            random_matrix(r, 3, 4, 9)
        }
    };
    let a = match &ring {
        RingSpec::Integers => a,
        RingSpec::Mod(m) => a.reduce_mod(m),
    };
    let s = smith(&ring, &a);
    let check = s.u.mul(&a).mul(&s.v);
    let check = match &ring {
        RingSpec::Integers => check == s.d,
        RingSpec::Mod(m) => check.reduce_mod(m) == s.d.reduce_mod(m),
    };
    let diag = s.diagonal();
    let results = json!({
        "ring": ring.to_string(),
        "matrix": MatrixJson::from_matrix(&a),
        "u": MatrixJson::from_matrix(&s.u),
        "d": MatrixJson::from_matrix(&s.d),
        "v": MatrixJson::from_matrix(&s.v),
        "diagonal": ints(&diag),
        "rank": s.rank(),
        "u_a_v_equals_d": check,
    });
    Ok(Done::new(if check { "verified" } else { "failed" }, results).exit(if check { 0 } else { 2 }))
}

fn module_summary(m: &FgModule) -> Value {
    let cf = m.canonical_form();
    json!({
        "form": cf.to_string(),
        "free_rank": cf.free_rank,
        "invariant_factors": ints(&cf.factors),
        "order": m.order().map(|o| o.to_string()),
        "minimal": ModuleJson::from_module(&m.minimal().0),
    })
}

fn module(ctx: &mut Ctx) -> Result<Done> {
    let ring = ctx.ring_or(RingSpec::Integers);
    let input = match ctx.take() {
        Some(i) => i,
        None => {
            let r = ctx.need_seed("module")?;
            Input::Matrix(random_matrix(r, 3, 3, 6))
        }
    };
    match input {
        Input::Module(mj) => {
            let m = mj.to_module(&ring, "module")?;
            Ok(Done::new(form(&m), json!({"ring": ring.to_string(), "module": module_summary(&m)})))
        }
        Input::Matrix(rel) => {
            let m = FgModule::from_presentation(ring.clone(), &rel);
            Ok(Done::new(
                form(&m),
                json!({"ring": ring.to_string(), "presentation": MatrixJson::from_matrix(&rel), "module": module_summary(&m)}),
            ))
        }
        Input::Map(f) => {
            let k = f.kernel();
            let i = f.image();
            let (c, _) = f.cokernel();
            let results = json!({
                "ring": f.source().ring().to_string(),
                "kernel": module_summary(&k.module),
                "kernel_inclusion": MatrixJson::from_matrix(&k.inc),
                "image": module_summary(&i.module),
                "image_inclusion": MatrixJson::from_matrix(&i.inc),
                "cokernel": module_summary(&c),
                "injective": f.is_injective(),
                "surjective": f.is_surjective(),
                "isomorphism": f.is_iso(),
            });
            Ok(Done::new("computed", results))
        }
        Input::Pair(a, b) => {
            let (h, e) = hom_and_ext(&a, &b)?;
            let t = tor1(&a, &b)?;
            let x = tensor(&a, &b)?;
            let results = json!({
                "ring": a.ring().to_string(),
                "first": form(&a),
                "second": form(&b),
                "hom": form(&h),
                "ext1": form(&e),
                "tor1": form(&t),
                "tensor": form(&x),
            });
            Ok(Done::new("computed", results))
        }
        other => bail!("module expects a module, presentation matrix, map or pair, got a {}", other.kind()),
    }
}

fn homology(ctx: &mut Ctx) -> Result<Done> {
    let c = ctx.complex(RingSpec::Integers)?;
    let (a, b) = ctx.degrees(c.top());
    let forms: Vec<(usize, String)> = (a..=b)
        .into_par_iter()
        .map(|n| (n, form(&c.homology_module(n))))
        .collect();
    let table = Table {
        title: "homology".into(),
        columns: vec!["degree".into(), "H".into()],
        rows: forms.iter().map(|(n, f)| vec![n.to_string(), f.clone()]).collect(),
    };
    let results = json!({
        "complex": ComplexJson::from_complex(&c),
        "homology": forms.iter().map(|(n, f)| json!({"degree": n, "module": f})).collect::<Vec<_>>(),
    });
    Ok(Done::new("computed", results).table(table))
}

fn postnikov(ctx: &mut Ctx) -> Result<Done> {
    let n = ctx.req.degree.unwrap_or(0);
    if let Some(Input::Simplicial(_)) = &ctx.input {
        return postnikov_simplicial(ctx, n);
    }
    let c = ctx.complex(RingSpec::Integers)?;
    let (p, _) = postnikov_section(&c, n);
    let top = c.top().max(p.top()) + 1;
    let rows: Vec<(usize, String, String, bool)> = (0..=top)
        .into_par_iter()
        .map(|k| {
            let (hc, hp) = (c.homology_module(k), p.homology_module(k));
            let ok = if k <= n { hc.isomorphic(&hp) } else { hp.is_zero() };
            (k, form(&hc), form(&hp), ok)
        })
        .collect();
    let all = rows.iter().all(|r| r.3);
    let table = Table {
        title: format!("Postnikov section P_{}", n),
        columns: ["degree", "H(C)", "H(P)", "expected", "holds"].map(String::from).to_vec(),
        rows: rows
            .iter()
            .map(|(k, a, b, ok)| {
                let exp = if *k <= n { "iso" } else { "zero" };
                vec![k.to_string(), a.clone(), b.clone(), exp.into(), ok.to_string()]
            })
            .collect(),
    };
    let results = json!({
        "degree": n,
        "section": ComplexJson::from_complex(&p),
        "axioms_hold": all,
    });
    Ok(Done::new(if all { "verified" } else { "failed" }, results)
        .table(table)
        .exit(if all { 0 } else { 2 }))
}

fn postnikov_simplicial(ctx: &mut Ctx, n: usize) -> Result<Done> {
    let x = ctx.simplicial()?;
    let (p, _) = postnikov_section_simplicial(&x, n)?;
    let top = p.truncation().saturating_sub(1);
    let mut rows = Vec::new();
    let mut all = true;
    for k in 0..=top {
        let hp = homotopy_groups(&p, k)?;
        let hx = if k < x.truncation() { Some(homotopy_groups(&x, k)?) } else { None };
        let ok = if k <= n { hx.as_ref().is_some_and(|h| h.isomorphic(&hp)) } else { hp.is_zero() };
        all &= ok;
        rows.push(vec![
            k.to_string(),
            hx.map(|h| form(&h)).unwrap_or_else(|| "-".into()),
            form(&hp),
            String::from(if k <= n { "iso" } else { "zero" }),
            ok.to_string(),
        ]);
    }
    let table = Table {
        title: format!("simplicial Postnikov section P_{}", n),
        columns: ["degree", "pi(X)", "pi(P)", "expected", "holds"].map(String::from).to_vec(),
        rows,
    };
    let results = json!({"degree": n, "section": SimplicialJson::from_simplicial(&p), "axioms_hold": all});
    Ok(Done::new(if all { "verified" } else { "failed" }, results)
        .table(table)
        .exit(if all { 0 } else { 2 }))
}

/// `⊕_k E(H_k C, k)`: the complex with the same homology and trivial k-invariants.
fn split_complex(c: &ChainComplex) -> Complex {
    let mut acc = ChainComplex::zero(c.ring().clone());
    for k in 0..=c.top() {
        acc = acc.direct_sum(&em_object(&c.homology_module(k), k).realization);
    }
    Arc::new(acc)
}

fn kinv(ctx: &mut Ctx) -> Result<Done> {
    let n = ctx.req.degree.unwrap_or(0);
    let c = ctx.complex(RingSpec::Integers)?;
    let (e, k, p) = k_invariant(&c, n);
    let classes = homotopy_classes(&p, &e)?;
    let kq = classes.replacement.q.then(&k);
    let coords = classes
        .map_to_class(&kq)
        .ok_or_else(|| anyhow!("k-invariant is not a chain map"))?;
    let is_null = coords.iter().all(|x| x.is_zero());
    let split = split_complex(&c);
    let equivalent = find_homotopy_equivalence(&c, &split)?.is_some_and(|h| h.verify());
    let results = json!({
        "degree": n,
        "target": ComplexJson::from_complex(&e),
        "class_group": form(classes.group()),
        "class": ints(&coords),
        "nullhomotopic": is_null,
        "cofibrant_replacement": if classes.replacement.identity { "identity" } else { "bounded free resolution" },
        "equivalent_to_split": equivalent,
    });
    Ok(Done::new(if is_null { "nullhomotopic" } else { "non-nullhomotopic" }, results))
}

fn dold_kan_cmd(ctx: &mut Ctx) -> Result<Done> {
    let c = ctx.complex(RingSpec::Integers)?;
    let level = ctx.req.degree.unwrap_or(c.top() + 1);
    let x = dold_kan(&c, level);
    x.validate()?;
    let m = moore_complex(&x);
    let nrm = m.normalized.trimmed();
    let roundtrip = level < c.top() || nrm.extended_to(c.top()) == c.extended_to(nrm.top()).minimized().0;
    let mut rows = Vec::new();
    let mut all = roundtrip;
    for k in 0..level {
        let pi = homotopy_groups(&x, k)?;
        let h = c.homology_module(k);
        let ok = pi.isomorphic(&h);
        all &= ok;
        rows.push(vec![k.to_string(), form(&h), form(&pi), ok.to_string()]);
    }
    let table = Table {
        title: "homotopy of the simplicial module".into(),
        columns: ["degree", "H(C)", "pi(Gamma C)", "iso"].map(String::from).to_vec(),
        rows,
    };
    let results = json!({
        "level": level,
        "simplicial": SimplicialJson::from_simplicial(&x),
        "normalization_recovers_complex": roundtrip,
        "verified": all,
    });
    Ok(Done::new(if all { "verified" } else { "failed" }, results)
        .table(table)
        .exit(if all { 0 } else { 2 }))
}

fn moore(ctx: &mut Ctx) -> Result<Done> {
    let x = ctx.simplicial()?;
    let m = moore_complex(&x);
    let rows: Vec<Vec<String>> = (0..=x.truncation())
        .map(|n| {
            let pi = if n < x.truncation() {
                homotopy_groups(&x, n).map(|h| form(&h)).unwrap_or_else(|_| "-".into())
            } else {
                "-".into()
            };
            vec![n.to_string(), form(&x.level(n)), form(&m.chains[n].module), form(&m.cycles[n].module), pi]
        })
        .collect();
    let table = Table {
        title: "Moore complex".into(),
        columns: ["level", "X_n", "C_n", "Z_n", "pi_n"].map(String::from).to_vec(),
        rows,
    };
    let results = json!({
        "normalized": ComplexJson::from_complex(&m.normalized),
        "chains": m.chains.iter().map(|s| form(&s.module)).collect::<Vec<_>>(),
        "cycles": m.cycles.iter().map(|s| form(&s.module)).collect::<Vec<_>>(),
    });
    Ok(Done::new("computed", results).table(table))
}

fn matching(ctx: &mut Ctx) -> Result<Done> {
    let x = ctx.simplicial()?;
    let n = ctx.req.degree.unwrap_or(1);
    let mo = matching_object(&x, n)?;
    let surj = mo.delta.is_surjective();
    let results = json!({
        "level": n,
        "matching_object": module_summary(&mo.module),
        "delta": MatrixJson::from_matrix(mo.delta.matrix()),
        "delta_surjective": surj,
        "cokernel": form(&mo.delta.cokernel().0),
    });
    Ok(Done::new("computed", results))
}

fn latching(ctx: &mut Ctx) -> Result<Done> {
    let x = ctx.simplicial()?;
    let n = ctx.req.degree.unwrap_or(1);
    let lo = latching_object(&x, n)?;
    let results = json!({
        "level": n,
        "latching_object": module_summary(&lo.module),
        "sigma": MatrixJson::from_matrix(lo.sigma.matrix()),
        "sigma_injective": lo.sigma.is_injective(),
        "cokernel": form(&lo.sigma.cokernel().0),
    });
    Ok(Done::new("computed", results))
}

fn bockstein(ctx: &mut Ctx) -> Result<Done> {
    let p = ctx.prime(2)?;
    let x = ctx.simplicial()?;
    let top = x.truncation().saturating_sub(1);
    let (a, b) = match (ctx.req.degree, ctx.req.range) {
        (Some(k), _) => (k, k),
        (None, Some(r)) => r,
        (None, None) => (1, top),
    };
    let mut done = Done::new("exact", Value::Null);
    let mut groups = Vec::new();
    let mut all = true;
    for k in a.max(1)..=b {
        let r = mod_p_homotopy(&x, p, k)?;
        all &= r.ses.is_exact();
        groups.push(json!({"k": k, "group": form(&r.group), "sequence": sequence_json(&r.ses)}));
        done = done.table(sequence_table(&format!("mod-{} sequence, k = {}", p, k), &r.ses));
    }
    done.results = json!({"p": p, "degrees": groups, "exact": all});
    done.verdict = String::from(if all { "exact" } else { "not exact" });
    Ok(done.exit(if all { 0 } else { 2 }))
}

fn compare_les(ctx: &mut Ctx) -> Result<Done> {
    let p = ctx.prime(2)?;
    let target = RingSpec::modulo(p);
    let c = ctx.complex(RingSpec::Integers)?;
    if !c.ring().is_integers() {
        bail!("compare-les starts from a complex over Z");
    }
    let (lo, hi) = ctx.degrees(c.top());
    let (gamma, report) = comparison_les(&c, &target, lo, hi)?;
    let oracle = snake_oracle(&c, p, lo, hi).ok();
    let matches = oracle.as_ref().map(|o| {
        gamma
            .groups
            .iter()
            .zip(&o.gamma)
            .all(|(g, h)| g.isomorphic(h))
    });
    let exact = report.is_exact();
    let ok = exact && matches.unwrap_or(true);
    let results = json!({
        "p": p,
        "range": format!("{}..{}", lo, hi),
        "gamma": gamma.groups.iter().enumerate().map(|(i, g)| json!({"degree": lo + i, "module": form(g)})).collect::<Vec<_>>(),
        "sequence": sequence_json(&report),
        "snake_oracle_matches": matches,
        "exact": exact,
    });
    Ok(Done::new(if ok { "exact" } else { "not exact" }, results)
        .table(sequence_table("comparison sequence", &report))
        .exit(if ok { 0 } else { 2 }))
}

fn spiral(ctx: &mut Ctx) -> Result<Done> {
    let x = ctx.bisimplicial()?;
    let (pt, qt) = (x.external_truncation(), x.internal_truncation());
    if pt < 2 || qt < 1 {
        bail!("spiral needs external level at least 2 and internal level at least 1");
    }
    let (n_top, k_top) = match ctx.req.range {
        Some((_, b)) => (b.min(pt - 2), qt - 1),
        None => (pt - 2, qt - 1),
    };
    let r = spiral_sequence(&x, n_top, k_top)?;
    let mut done = Done::new("", Value::Null);
    for (k, s) in &r.sequences {
        done = done.table(sequence_table(&format!("spiral sequence, internal degree {}", k), s));
    }
    let ok = r.all_verified();
    done.results = json!({
        "external_level": pt,
        "internal_level": qt,
        "sequences": r.sequences.iter().map(|(k, s)| json!({"k": k, "sequence": sequence_json(s)})).collect::<Vec<_>>(),
        "h0_isomorphism": r.h0_iso.iter().map(|(k, b)| json!({"k": k, "iso": b})).collect::<Vec<_>>(),
        "loop_identifications": r.loops.iter().map(|l| json!({"n": l.n, "k": l.k, "iso": l.isomorphic})).collect::<Vec<_>>(),
        "exact": r.is_exact(),
        "all_verified": ok,
    });
    done.verdict = String::from(if ok { "exact" } else { "not exact" });
    Ok(done.exit(if ok { 0 } else { 2 }))
}

fn ext_classify(ctx: &mut Ctx) -> Result<Done> {
    let n = ctx.req.degree.unwrap_or(2);
    let (quotient, sub) = match ctx.take() {
        Some(Input::Pair(a, b)) => (a, b),
        Some(other) => bail!("ext-classify expects a module pair (first = quotient, second = sub), got a {}", other.kind()),
        None => {
            let ring = ctx.ring_or(RingSpec::Integers);
            let family: Vec<Module> = [vec![2], vec![3], vec![4], vec![2, 2]]
                .iter()
                .map(|f| {
                    let fs: Vec<Int> = f.iter().map(|&d| Int::from(d as i64)).collect();
                    Arc::new(FgModule::from_form(ring.clone(), &fs, 0))
                })
                .collect();
            let r = ctx.need_seed("ext-classify")?;
            use rand::Rng;
            let i = r.gen_range(0..family.len());
            let j = r.gen_range(0..family.len());
            (family[i].clone(), family[j].clone())
        }
    };
    let reps = enumerate_extensions(&quotient, &sub)?;
    let (_, _, hc) = extension_classes(&quotient, &sub, n)?;
    let order = hc.group().order().ok_or_else(|| anyhow!("cohomology group is infinite"))?;
    let mut rows = Vec::new();
    let mut seen: Vec<Vec<Int>> = Vec::new();
    let mut all = Int::from(reps.len()) == order;
    let mut entries = Vec::new();
    for (i, e) in reps.iter().enumerate() {
        let c = extension_to_class(e, n)?;
        let distinct = !seen.contains(&c.coords);
        seen.push(c.coords.clone());
        let back = class_to_extension(&c)?;
        let round = extensions_equivalent(&back, e)? && extension_to_class(&back, n)?.coords == c.coords;
        all &= distinct && round;
        rows.push(vec![
            i.to_string(),
            form(&e.total),
            format!("[{}]", c.coords.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")),
            round.to_string(),
        ]);
        entries.push(json!({
            "total": form(&e.total),
            "class": ints(&c.coords),
            "split": c.is_zero(),
            "roundtrip": round,
        }));
    }
    let results = json!({
        "quotient": form(&quotient),
        "sub": form(&sub),
        "degree": n,
        "extension_count": reps.len(),
        "cohomology_group": form(hc.group()),
        "cohomology_order": order.to_string(),
        "extensions": entries,
        "bijection": all,
    });
    let table = Table {
        title: format!("extensions of {} by {}", form(&quotient), form(&sub)),
        columns: ["#", "total", "class", "roundtrip"].map(String::from).to_vec(),
        rows,
    };
    Ok(Done::new(if all { "bijective" } else { "not bijective" }, results)
        .table(table)
        .exit(if all { 0 } else { 2 }))
}

fn lift_problem(ctx: &mut Ctx) -> Result<Arc<LiftProblem>> {
    let (target, file_bounds) = match ctx.take() {
        Some(Input::Lift(c, b)) => (c, b),
        Some(Input::Complex(c)) => (c, None),
        Some(other) => bail!("expected a target complex over Z/m, got a {}", other.kind()),
        None => {
            let ring = ctx.ring_or(RingSpec::modulo(4));
            let r = ctx.need_seed("lift")?;
            let b = ComplexBounds {
                max_top: 3,
                max_rank: 2,
                max_entry: 3,
            };
            (Arc::new(random_free_complex(r, &ring, b)), None)
        }
    };
    let bounds = match (ctx.req.bounds, file_bounds) {
        (Some(b), _) => b,
        (None, Some(b)) => LiftBounds {
            max_degree: b.max_degree,
            max_rank: b.max_rank,
            max_entry: b.max_entry,
        },
        (None, None) => LiftBounds {
            max_degree: target.top().max(LiftBounds::default().max_degree),
            ..LiftBounds::default()
        },
    };
    Ok(Arc::new(LiftProblem::new(target, bounds)?))
}

fn ledger_json(l: &TowerLedger) -> Value {
    let stages: Vec<Value> = l
        .stages
        .iter()
        .map(|s| {
            let choice = s.choice.as_ref().map(|c| {
                json!({
                    "obstruction": {"group": form(c.chi.classes.group()), "class": ints(&c.chi.coords)},
                    "lift": ints(&c.lift_coords),
                    "lift_count": c.lift_count,
                    "kernel": form(&c.split.kernel),
                    "image": form(&c.split.image),
                    "cokernel": form(&c.split.cokernel),
                    "sub": form(&c.sub),
                    "khat": c.khat.as_ref().map(|k| json!({"group": form(k.classes.group()), "class": ints(&k.coords)})),
                    "extension": {
                        "total": form(&c.extension.total),
                        "cocycle": c.extension.cocycle().ok().map(|v| ints(&v)),
                    },
                    "allowable_count": c.allowable_count,
                })
            });
            json!({
                "n": s.n,
                "modules": s.modules.iter().map(|m| form(m)).collect::<Vec<_>>(),
                "top": form(&s.top),
                "rho": {"group": form(s.rho.classes.group()), "class": ints(&s.rho.coords)},
                "choice": choice,
            })
        })
        .collect();
    json!({ "stages": stages })
}

fn search_json(p: &LiftProblem, s: &LiftSearch) -> Result<Value> {
    let lifts = s
        .lifts
        .iter()
        .map(|l| {
            let verified = verify_lift(p, &l.complex)?;
            Ok(json!({
                "complex": ComplexJson::from_complex(&l.complex),
                "homology": (0..=l.complex.top()).map(|k| form(&l.complex.homology_module(k))).collect::<Vec<_>>(),
                "verified": verified,
                "ledger": ledger_json(&l.ledger),
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    let certs: Vec<Value> = s
        .certificates
        .iter()
        .map(|c| {
            json!({
                "stage": c.stage,
                "reason": format!("{:?}", c.reason),
                "modules": c.modules,
                "top": c.top,
                "obstruction": c.obstruction.as_ref().map(|(v, g)| json!({"group": g, "class": ints(v)})),
            })
        })
        .collect();
    Ok(json!({
        "target": ComplexJson::from_complex(&p.target),
        "modulus": p.modulus.to_string(),
        "bounds": bounds_json(&p.bounds),
        "realizable": s.realizable(),
        "lifts": lifts,
        "certificates": certs,
        "nodes": s.nodes,
        "exhausted": s.exhausted,
        "degree_zero": "I_0 is H_0 of the target read over Z; the reduction Z -> Z/m is not an isomorphism on pi_0, so the degree-0 module is chosen like every later extension",
    }))
}

fn lift(ctx: &mut Ctx) -> Result<Done> {
    let p = lift_problem(ctx)?;
    let s = enumerate_lifts(&p)?;
    let results = search_json(&p, &s)?;
    let rows = s
        .certificates
        .iter()
        .map(|c| {
            vec![
                c.stage.to_string(),
                format!("{:?}", c.reason),
                c.modules.join(", "),
                c.top.clone(),
            ]
        })
        .collect();
    let table = Table {
        title: "dead branches".into(),
        columns: ["stage", "reason", "J", "I"].map(String::from).to_vec(),
        rows,
    };
    let (verdict, exit) = if s.realizable() {
        ("realizable", 0)
    } else if s.exhausted {
        ("unrealizable", 2)
    } else {
        ("inconclusive: node budget exhausted", 1)
    };
    Ok(Done::new(verdict, results).table(table).exit(exit))
}

fn oracle(ctx: &mut Ctx) -> Result<Done> {
    let snake = matches!(&ctx.input, Some(Input::Complex(c)) if c.ring().is_integers());
    if snake {
        let p = ctx.prime(2)?;
        let c = ctx.complex(RingSpec::Integers)?;
        let (lo, hi) = ctx.degrees(c.top());
        let o = snake_oracle(&c, p, lo, hi)?;
        let rows = (lo..=hi)
            .enumerate()
            .map(|(i, n)| {
                vec![
                    n.to_string(),
                    form(&o.gamma[i]),
                    form(&o.image_h[i]),
                    form(&o.image_boundary[i]),
                ]
            })
            .collect();
        let table = Table {
            title: format!("snake oracle for tensoring with Z/{}", p),
            columns: ["degree", "Gamma", "image h", "image boundary"].map(String::from).to_vec(),
            rows,
        };
        return Ok(Done::new("computed", json!({"p": p, "range": format!("{}..{}", lo, hi)})).table(table));
    }
    let p = lift_problem(ctx)?;
    let b = brute_force_realize(&p)?;
    let witness = match &b.witness {
        Some(w) => Some(json!({
            "complex": ComplexJson::from_complex(w),
            "verified": verify_lift(&p, w)?,
        })),
        None => None,
    };
    let found = witness.is_some();
    let results = json!({
        "target": ComplexJson::from_complex(&p.target),
        "bounds": bounds_json(&p.bounds),
        "witness": witness,
        "examined": b.examined,
        "visited": b.visited,
    });
    Ok(Done::new(if found { "realizable" } else { "none within bounds" }, results).exit(if found { 0 } else { 2 }))
}
