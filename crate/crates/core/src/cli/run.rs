//! Executes a parsed document directive by directive.

use std::collections::HashMap;
use std::fmt::Write;
use std::time::Duration;

use num_rational::BigRational;
use serde_json::{json, Value};

use super::ast::*;
use crate::clopen::{Ball, ClopenSet};
use crate::construct::{self, solve_complement, SolveLimits, SolveOutcome, SolveRequest};
use crate::cyclo::CycloScalar;
use crate::error::{LfwError, Result};
use crate::framesim::{self, FiniteModel};
use crate::gfq::{Field, FieldConfig};
use crate::lfield::{parse_laurent, Laurent};
use crate::stepfn::StepFunction;
use crate::verify::{self, SuperMode, TranslateMode, TranslationMode, Verdict};

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Seed for randomized trials whose directive names none.
    pub seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Error,
    Info,
}

impl Status {
    fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
            Status::Info => "info",
        }
    }
}

/// Result of one directive, or of a definition that failed to evaluate.
#[derive(Clone, Debug)]
pub struct Entry {
    pub line: usize,
    pub text: String,
    pub status: Status,
    /// What the directive checks, in words.
    pub criterion: Option<&'static str>,
    pub verdict: Option<Verdict>,
    pub data: Vec<(String, Value)>,
    pub error: Option<String>,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub field: FieldDecl,
    pub entries: Vec<Entry>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.entries
            .iter()
            .all(|e| matches!(e.status, Status::Pass | Status::Info))
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self
            .entries
            .iter()
            .map(|e| {
                let mut m = serde_json::Map::new();
                m.insert("line".into(), json!(e.line));
                m.insert("directive".into(), json!(e.text));
                m.insert("status".into(), json!(e.status.label()));
                if let Some(c) = e.criterion {
                    m.insert("criterion".into(), json!(c));
                }
                if let Some(v) = &e.verdict {
                    m.insert("verdict".into(), v.to_json());
                }
                if !e.data.is_empty() {
                    let d: serde_json::Map<String, Value> = e.data.iter().cloned().collect();
                    m.insert("data".into(), Value::Object(d));
                }
                if let Some(err) = &e.error {
                    m.insert("error".into(), json!(err));
                }
                Value::Object(m)
            })
            .collect();
        json!({
            "field": {
                "p": self.field.p,
                "c": self.field.c,
                "modulus": self.field.modulus,
            },
            "passed": self.passed(),
            "entries": entries,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            let _ = writeln!(out, "[{}] line {}: {}", e.status.label(), e.line, e.text);
            if let Some(c) = e.criterion {
                let _ = writeln!(out, "  criterion: {c}");
            }
            if let Some(v) = &e.verdict {
                for l in v.to_string().lines() {
                    let _ = writeln!(out, "  {l}");
                }
            }
            for (k, v) in &e.data {
                let shown = match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                let _ = writeln!(out, "  {k}: {shown}");
            }
            if let Some(err) = &e.error {
                let _ = writeln!(out, "  error: {err}");
            }
        }
        let _ = writeln!(
            out,
            "{}",
            if self.passed() { "ALL PASSED" } else { "FAILURES PRESENT" }
        );
        out
    }
}

#[derive(Clone)]
enum Val {
    Set(ClopenSet),
    Fn(StepFunction),
    Family(Vec<Val>),
}

struct Env {
    field: Field,
    vals: HashMap<String, Val>,
    /// Names whose defining item failed.
    broken: HashMap<String, usize>,
}

impl Env {
    fn get(&self, id: &Ident) -> Result<&Val> {
        if let Some(v) = self.vals.get(&id.name) {
            return Ok(v);
        }
        let why = match self.broken.get(&id.name) {
            Some(line) => format!("its definition on line {line} failed"),
            None => "it is not defined".into(),
        };
        Err(LfwError::Runtime(format!(
            "{}: `{}` is unavailable because {why}",
            id.span, id.name
        )))
    }

    fn element(&self, e: &Node<Element>) -> Result<Laurent> {
        parse_laurent(&self.field, &e.kind.to_string())
    }

    fn set(&self, e: &Node<SetExpr>) -> Result<ClopenSet> {
        let f = &self.field;
        Ok(match &e.kind {
            SetExpr::Name(id) => match self.get(id)? {
                Val::Set(s) => s.clone(),
                _ => return Err(not_a(id, "set")),
            },
            SetExpr::Empty => ClopenSet::empty(f),
            SetExpr::Integers => ClopenSet::integers(f),
            SetExpr::Units => ClopenSet::units(f),
            SetExpr::Ball(c, k) => ClopenSet::ball(f, self.element(c)?, *k),
            SetExpr::Ideal(k) => ClopenSet::ideal(f, *k),
            SetExpr::Shell(k) => ClopenSet::shell(f, *k),
            SetExpr::Union(xs) => {
                let mut acc = ClopenSet::empty(f);
                for x in xs {
                    acc = acc.union(&self.set(x)?)?;
                }
                acc
            }
            SetExpr::Inter(xs) => {
                let Some((first, rest)) = xs.split_first() else {
                    return Err(LfwError::Runtime(format!("{}: inter() needs an operand", e.span)));
                };
                let mut acc = self.set(first)?;
                for x in rest {
                    acc = acc.intersect(&self.set(x)?)?;
                }
                acc
            }
            SetExpr::Diff(a, b) => self.set(a)?.subtract(&self.set(b)?)?,
            SetExpr::Scale(a, j) => self.set(a)?.scale(*j),
            SetExpr::Translate(a, t) => self.set(a)?.translate(&self.element(t)?),
        })
    }

    fn value(&self, v: &Node<ValueExpr>) -> Result<CycloScalar> {
        let (p, q) = (self.field.p(), self.field.q());
        Ok(match &v.kind {
            ValueExpr::Rational(n, d) => {
                let d = d.clone().unwrap_or_else(|| 1.into());
                CycloScalar::from_rational(p, q, BigRational::new(n.clone(), d))
            }
            ValueExpr::Zeta(k) => CycloScalar::zeta_pow(p, q, k.unwrap_or(1)),
            ValueExpr::Qhalf(e) => CycloScalar::qhalf(p, q, e.unwrap_or(1)),
            ValueExpr::Neg(x) => self.value(x)?.neg(),
            ValueExpr::Add(a, b) => self.value(a)?.try_add(&self.value(b)?)?,
            ValueExpr::Sub(a, b) => self.value(a)?.try_sub(&self.value(b)?)?,
            ValueExpr::Mul(a, b) => self.value(a)?.mul(&self.value(b)?),
            ValueExpr::Paren(x) => self.value(x)?,
        })
    }

    fn function(&self, e: &Node<FnExpr>) -> Result<StepFunction> {
        Ok(match &e.kind {
            FnExpr::Name(id) => match self.get(id)? {
                Val::Set(s) => StepFunction::indicator(s),
                Val::Fn(g) => g.clone(),
                Val::Family(_) => return Err(not_a(id, "function")),
            },
            FnExpr::Indicator(s) => StepFunction::indicator(&self.set(s)?),
            FnExpr::Constant(s, v) => StepFunction::constant_on(&self.set(s)?, &self.value(v)?),
            FnExpr::Step(cells) => {
                let mut out = Vec::with_capacity(cells.len());
                for c in cells {
                    out.push((Ball::new(self.element(&c.center)?, c.scale), self.value(&c.value)?));
                }
                StepFunction::from_cells(&self.field, out)?
            }
            FnExpr::Dilate(g, j) => self.function(g)?.dilate(*j),
            FnExpr::Sum(gs) => {
                let fs = gs.iter().map(|g| self.function(g)).collect::<Result<Vec<_>>>()?;
                let refs: Vec<&StepFunction> = fs.iter().collect();
                StepFunction::sum(&self.field, &refs)?
            }
        })
    }

    fn flatten<'a>(&'a self, ids: &'a [Ident], out: &mut Vec<(&'a Ident, &'a Val)>) -> Result<()> {
        for id in ids {
            let v = self.get(id)?;
            push_flat(id, v, out);
        }
        Ok(())
    }

    fn sets(&self, ids: &[Ident]) -> Result<Vec<ClopenSet>> {
        let mut flat = Vec::new();
        self.flatten(ids, &mut flat)?;
        flat.into_iter()
            .map(|(id, v)| match v {
                Val::Set(s) => Ok(s.clone()),
                _ => Err(not_a(id, "set")),
            })
            .collect()
    }

    fn functions(&self, ids: &[Ident]) -> Result<Vec<StepFunction>> {
        let mut flat = Vec::new();
        self.flatten(ids, &mut flat)?;
        Ok(flat
            .into_iter()
            .map(|(_, v)| match v {
                Val::Set(s) => StepFunction::indicator(s),
                Val::Fn(g) => g.clone(),
                Val::Family(_) => unreachable!("flattened"),
            })
            .collect())
    }

    fn single_function(&self, id: &Ident) -> Result<StepFunction> {
        match self.get(id)? {
            Val::Set(s) => Ok(StepFunction::indicator(s)),
            Val::Fn(g) => Ok(g.clone()),
            Val::Family(_) => Err(not_a(id, "function")),
        }
    }
}

fn push_flat<'a>(id: &'a Ident, v: &'a Val, out: &mut Vec<(&'a Ident, &'a Val)>) {
    match v {
        Val::Family(xs) => xs.iter().for_each(|x| push_flat(id, x, out)),
        other => out.push((id, other)),
    }
}

fn not_a(id: &Ident, what: &str) -> LfwError {
    LfwError::Runtime(format!("{}: `{}` does not denote a {what}", id.span, id.name))
}

/// Outcome of one directive before it is wrapped into an [`Entry`].
struct Done {
    status: Status,
    criterion: Option<&'static str>,
    verdict: Option<Verdict>,
    data: Vec<(String, Value)>,
    defines: Option<(String, Val)>,
}

impl Done {
    fn verdict(v: Verdict, criterion: &'static str) -> Self {
        Done {
            status: if v.passed { Status::Pass } else { Status::Fail },
            criterion: Some(criterion),
            verdict: Some(v),
            data: Vec::new(),
            defines: None,
        }
    }

    fn info(data: Vec<(String, Value)>) -> Self {
        Done {
            status: Status::Info,
            criterion: None,
            verdict: None,
            data,
            defines: None,
        }
    }
}

fn s(x: impl ToString) -> Value {
    Value::String(x.to_string())
}

pub fn run(doc: &Document, opts: &RunOptions) -> Result<Report> {
    Ok(evaluate(doc, opts)?.0)
}

/// Runs the document and returns the sets named `name` (a family is flattened).
pub fn named_sets(doc: &Document, name: &str, opts: &RunOptions) -> Result<(Field, Vec<ClopenSet>)> {
    let (_, env) = evaluate(doc, opts)?;
    let out = env.sets(&[lookup_ident(name)])?;
    Ok((env.field, out))
}

/// Runs the document and returns the functions named `name`; sets become indicators.
pub fn named_functions(doc: &Document, name: &str, opts: &RunOptions) -> Result<(Field, Vec<StepFunction>)> {
    let (_, env) = evaluate(doc, opts)?;
    let out = env.functions(&[lookup_ident(name)])?;
    Ok((env.field, out))
}

fn lookup_ident(name: &str) -> Ident {
    Ident {
        name: name.to_string(),
        span: Span::default(),
    }
}

fn evaluate(doc: &Document, opts: &RunOptions) -> Result<(Report, Env)> {
    let fd = &doc.field.kind;
    let field = FieldConfig::new(fd.p, fd.c, fd.modulus.clone())?;
    let mut env = Env {
        field,
        vals: HashMap::new(),
        broken: HashMap::new(),
    };
    let mut entries = Vec::new();
    for item in &doc.items {
        match item {
            Item::Set(id, e) => {
                let r = env.set(e).map(Val::Set);
                define(&mut env, &mut entries, item, id, r);
            }
            Item::Fn(id, e) => {
                let r = env.function(e).map(Val::Fn);
                define(&mut env, &mut entries, item, id, r);
            }
            Item::Family(id, ids) => {
                let r = ids
                    .iter()
                    .map(|x| env.get(x).cloned())
                    .collect::<Result<Vec<_>>>()
                    .map(Val::Family);
                define(&mut env, &mut entries, item, id, r);
            }
            Item::Directive(d) => {
                let line = d.span.line;
                let text = d.kind.to_string();
                match directive(&env, &d.kind, opts) {
                    Ok(done) => {
                        if let Some((name, v)) = done.defines {
                            env.vals.insert(name, v);
                        }
                        entries.push(Entry {
                            line,
                            text,
                            status: done.status,
                            criterion: done.criterion,
                            verdict: done.verdict,
                            data: done.data,
                            error: None,
                        });
                    }
                    Err(e) => {
                        if let Some(name) = defined_name(&d.kind) {
                            env.broken.insert(name.to_string(), line);
                        }
                        entries.push(Entry {
                            line,
                            text,
                            status: Status::Error,
                            criterion: None,
                            verdict: None,
                            data: Vec::new(),
                            error: Some(e.to_string()),
                        });
                    }
                }
            }
        }
    }
    let report = Report {
        field: fd.clone(),
        entries,
    };
    Ok((report, env))
}

fn define(env: &mut Env, entries: &mut Vec<Entry>, item: &Item, id: &Ident, r: Result<Val>) {
    match r {
        Ok(v) => {
            env.vals.insert(id.name.clone(), v);
        }
        Err(e) => {
            env.broken.insert(id.name.clone(), id.span.line);
            entries.push(Entry {
                line: id.span.line,
                text: item.to_string(),
                status: Status::Error,
                criterion: None,
                verdict: None,
                data: Vec::new(),
                error: Some(e.to_string()),
            });
        }
    }
}

fn defined_name(d: &Directive) -> Option<&str> {
    match d {
        Directive::ScalingSet { name, .. }
        | Directive::Construct { name, .. }
        | Directive::Solve { name, .. } => Some(&name.name),
        _ => None,
    }
}

fn super_mode(m: FrameMode) -> SuperMode {
    match m {
        FrameMode::Orthonormal => SuperMode::Orthonormal,
        FrameMode::Parseval => SuperMode::Parseval,
    }
}

fn directive(env: &Env, d: &Directive, opts: &RunOptions) -> Result<Done> {
    let f = &env.field;
    match d {
        Directive::Check(c) => check(env, c),
        Directive::ScalingSet {
            name,
            source,
            depth,
        } => {
            let w = match env.get(source)? {
                Val::Set(w) => w.clone(),
                _ => return Err(not_a(source, "set")),
            };
            let r = construct::scaling_set(&w, *depth)?;
            let mut done = Done::info(vec![
                ("measure".into(), s(r.set.measure())),
                ("certified".into(), json!(r.certified)),
                ("set".into(), r.set.to_json()),
            ]);
            done.status = if r.certified { Status::Pass } else { Status::Fail };
            done.criterion = Some("union of the positive dilates of W, with an exact tail");
            done.defines = Some((name.name.clone(), Val::Set(r.set)));
            Ok(done)
        }
        Directive::Construct { name, builder } => {
            let v = match *builder {
                Builder::Shannon => family(construct::shannon_multiwavelet(f)),
                Builder::Annulus(m) => Val::Set(construct::annulus_wavelet(f, m)?),
                Builder::ScaledShannon(m) => family(construct::scaled_shannon(f, m)?),
                Builder::Super47(n) => family(construct::super_47(f, n)?),
                Builder::Ex46Printed(n) => family(construct::ex46_printed(f, n)?),
                Builder::Ex46Existing(n) => family(construct::ex46_existing(f, n)?),
            };
            let mut done = Done::info(vec![("sets".into(), val_json(&v))]);
            done.defines = Some((name.name.clone(), v));
            Ok(done)
        }
        Directive::Solve {
            name,
            existing,
            shells,
            scale,
            time,
        } => {
            let req = SolveRequest {
                field: f.clone(),
                existing: env.sets(existing)?,
                shells: *shells,
                max_scale: *scale,
            };
            let mut limits = SolveLimits::default();
            if let Some(t) = time {
                limits.time = Duration::from_secs(*t);
            }
            let out = solve_complement(&req, &limits)?;
            let mut done = Done::info(vec![("solve".into(), out.to_json())]);
            done.criterion = Some("exact cover of the missing dilation and translation pieces");
            match out {
                SolveOutcome::Found { set, .. } => {
                    done.status = Status::Pass;
                    done.defines = Some((name.name.clone(), Val::Set(set)));
                }
                _ => done.status = Status::Fail,
            }
            Ok(done)
        }
        Directive::Simulate(sim) => simulate(env, sim, opts),
        Directive::Bound(kind, id) => {
            let g = env.single_function(id)?;
            let r = match kind {
                BoundKind::Decomposability => verify::decomposability_bound(&g)?,
                BoundKind::Extendability => verify::extendability_bound(&g)?,
            };
            let max_m = r.max_m.map_or_else(|| "unbounded".to_string(), |m| m.to_string());
            Ok(Done::info(vec![
                ("integral".into(), s(&r.integral)),
                ("max_m".into(), s(max_m)),
            ]))
        }
    }
}

fn family(sets: Vec<ClopenSet>) -> Val {
    Val::Family(sets.into_iter().map(Val::Set).collect())
}

fn val_json(v: &Val) -> Value {
    match v {
        Val::Set(s) => s.to_json(),
        Val::Fn(g) => s(g),
        Val::Family(xs) => Value::Array(xs.iter().map(val_json).collect()),
    }
}

fn check(env: &Env, c: &Check) -> Result<Done> {
    Ok(match c {
        Check::Multiwavelet(l) => Done::verdict(
            verify::verify_multiwavelet_set(&env.sets(l)?)?,
            "dilates partition K and the translates of each set tile K",
        ),
        Check::PfMultiwavelet(l) => Done::verdict(
            verify::verify_pf_multiwavelet_set(&env.sets(l)?)?,
            "dilates partition K and the translates of each set pack K",
        ),
        Check::Superwavelet(m, l) => Done::verdict(
            verify::verify_superwavelet(&env.sets(l)?, super_mode(*m))?,
            "each set tiles K by dilation and the joint fold is disjoint (and onto 𝒪 when orthonormal)",
        ),
        Check::DilationTiling(e) => Done::verdict(
            verify::check_dilation_tiling(&env.set(e)?),
            "the dilates 𝔭^j W partition K",
        ),
        Check::Translation(m, e) => {
            let mode = match m {
                SetMode::Packing => TranslationMode::Packing,
                SetMode::Tiling => TranslationMode::Tiling,
            };
            Done::verdict(
                verify::check_translation(&env.set(e)?, mode),
                "the fold of W into 𝒪 is overlap-free (and onto for tiling)",
            )
        }
        Check::Mra(w, sc) => {
            let get = |id: &Ident| match env.get(id)? {
                Val::Set(x) => Ok(x.clone()),
                _ => Err(not_a(id, "set")),
            };
            Done::verdict(
                verify::mra_scaling_check(&get(w)?, &get(sc)?)?,
                "S equals the union of the positive dilates of W with the expected measure",
            )
        }
        Check::Frame(l) => Done::verdict(
            verify::verify_frame_pointwise(&env.functions(l)?)?,
            "the dilation sum of |ψ̂|² is 1 and every correlation sum vanishes",
        ),
        Check::Translates(m, id) => {
            let mode = match m {
                FrameMode::Parseval => TranslateMode::Parseval,
                FrameMode::Orthonormal => TranslateMode::Orthonormal,
            };
            Done::verdict(
                verify::verify_translates(&env.single_function(id)?, mode)?,
                "the periodized weight is an indicator (or identically 1 for orthonormal)",
            )
        }
        Check::SuperGeneral(l) => Done::verdict(
            verify::verify_super_general(&env.functions(l)?)?,
            "the summed dilation energies are 1 and the summed correlations vanish",
        ),
        Check::Equivalent(a, b) => Done::verdict(
            verify::equivalent_superwavelets(&env.functions(a)?, &env.functions(b)?)?,
            "the two tuples have identical periodized correlations at every scale",
        ),
    })
}

fn simulate(env: &Env, sim: &Simulation, opts: &RunOptions) -> Result<Done> {
    match sim {
        Simulation::Parseval {
            family,
            window,
            trials,
            seed,
        }
        | Simulation::SuperParseval {
            family,
            window,
            trials,
            seed,
        } => {
            let model = FiniteModel::new(window.r, window.s)?;
            let fns = env.functions(family)?;
            let seed = seed.or(opts.seed).unwrap_or(0);
            let trials = usize::try_from(*trials)
                .map_err(|_| LfwError::ResourceCap(format!("{trials} trials")))?;
            let r = if matches!(sim, Simulation::Parseval { .. }) {
                framesim::parseval_trials(&model, &fns, trials, seed)?
            } else {
                framesim::super_parseval_trials(&model, &fns, trials, seed)?
            };
            let mut data = vec![
                ("deltas".into(), json!(r.deltas)),
                ("random".into(), json!(r.random)),
                ("seed".into(), json!(seed)),
                ("spot_checks".into(), json!(r.spot_checks)),
                ("all_zero".into(), json!(r.all_zero)),
            ];
            if let Some(ff) = &r.first_failure {
                data.push(("first_failure".into(), s(ff)));
            }
            let mut done = Done::info(data);
            done.status = if r.all_zero { Status::Pass } else { Status::Fail };
            done.criterion = Some("‖f‖² equals the sum of squared affine coefficients, exactly");
            Ok(done)
        }
        Simulation::Gram {
            family,
            window,
            a,
            b,
        } => {
            let model = FiniteModel::new(window.r, window.s)?;
            let fns = env.functions(family)?;
            let v = framesim::gram_entry(&model, &fns, *a, *b)?;
            let mut data = vec![("value".into(), s(&v))];
            if v.is_zero() {
                data.push(("zero".into(), json!(true)));
            }
            Ok(Done::info(data))
        }
    }
}
