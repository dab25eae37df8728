use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use super::spec::{BuiltNet, CocycleFamily, Input};
use super::{CliError, Command, Loaded, Options, Outcome, VerdictLine};
use crate::algebra::{duality_check, folium_net, validate_net, CMat, DualityMode, LocalAlgebra, Net, State};
use crate::cocycle::{
    classify_triviality, diamond_embedding, lattice_net, random_assignment, random_dense_coboundary,
    random_pauli_coboundary, superselection_map, validate_cocycle, winding_cocycle, CliffordLayer, Cocycle,
    CocycleError, Domain, LatticeNet, Operator, PhasedPauli,
};
use crate::covariance::{
    axiom_report, embeddings_among, field_naturality, functor_laws, recover_haag_kastler, FieldFamily, Letter,
    TheoryFunctor,
};
use crate::homotopy::{abelian_invariants, certify_simply_connected, Pi1};
use crate::lattice::{check_geometry_lemmas, embed_lattice, enumerate_diamonds, identity_embedding, CausalLattice};
use crate::poset::Poset;
use crate::simplicial::{are_homotopic, is_connected, Path, Verdict};
use crate::wavefront::{multiply_distributions, smooth_mult_check, wf_estimate_with, WavefrontError, WfParams};

type Params = BTreeMap<String, Value>;

fn to_value(x: impl Serialize) -> Value {
    serde_json::to_value(x).expect("results serialize")
}

struct Ctx<'a> {
    cmd: Command,
    params: &'a Params,
}

impl Ctx<'_> {
    fn err(&self, message: impl Into<String>) -> CliError {
        CliError::InvalidJob { command: self.cmd.name().into(), message: message.into() }
    }

    fn str(&self, key: &str) -> Result<Option<String>, CliError> {
        match self.params.get(key) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s.clone())),
            Some(v) => Err(self.err(format!("parameter {key} must be a string, got {v}"))),
        }
    }

    fn f64(&self, key: &str) -> Result<Option<f64>, CliError> {
        match self.params.get(key) {
            None => Ok(None),
            Some(Value::Number(n)) => Ok(n.as_f64()),
            Some(Value::String(s)) => {
                s.parse().map(Some).map_err(|_| self.err(format!("parameter {key} must be a number, got {s:?}")))
            }
            Some(v) => Err(self.err(format!("parameter {key} must be a number, got {v}"))),
        }
    }

    fn usize(&self, key: &str) -> Result<Option<usize>, CliError> {
        match self.params.get(key) {
            None => Ok(None),
            Some(Value::Number(n)) if n.as_u64().is_some() => Ok(n.as_u64().map(|x| x as usize)),
            Some(Value::String(s)) => s
                .parse()
                .map(Some)
                .map_err(|_| self.err(format!("parameter {key} must be a nonnegative integer, got {s:?}"))),
            Some(v) => Err(self.err(format!("parameter {key} must be a nonnegative integer, got {v}"))),
        }
    }

    fn json<T: serde::de::DeserializeOwned>(&self, key: &str) -> Result<Option<T>, CliError> {
        let Some(v) = self.params.get(key) else { return Ok(None) };
        let v = match v {
            Value::String(s) => serde_json::from_str(s).unwrap_or(v.clone()),
            _ => v.clone(),
        };
        serde_json::from_value(v).map(Some).map_err(|e| self.err(format!("parameter {key}: {e}")))
    }
}

fn input_err(l: &Loaded, message: impl ToString) -> CliError {
    CliError::InvalidInput { file: l.path.clone(), message: message.to_string() }
}

/// Input kinds each command accepts, with the allowed count, and its required parameters.
fn signature(cmd: Command) -> (&'static [&'static str], usize, usize, &'static [&'static str], &'static [&'static str]) {
    match cmd {
        Command::Pi1 => (&["poset", "lattice"], 1, 1, &[], &["base"]),
        Command::Homotopy => (&["poset", "lattice"], 1, 1, &["a", "b"], &[]),
        Command::CocycleCheck | Command::CocycleClassify => (&["cocycle"], 1, 1, &[], &[]),
        Command::NetValidate => (&["net"], 1, 1, &[], &[]),
        Command::Duality => (&["net"], 1, 1, &[], &["target", "puncture"]),
        Command::Folium => (&["net"], 1, 1, &["omega", "sigma"], &[]),
        Command::Covariance => (&["lattice"], 1, usize::MAX, &[], &["functor", "letter", "extra", "fields"]),
        Command::Superselection => (&["lattice"], 2, usize::MAX, &[], &["dt", "dx", "samples"]),
        Command::Wf => (
            &["grid"],
            1,
            2,
            &[],
            &["window", "directions", "nstar", "sharpness", "sensitivity", "mode"],
        ),
        Command::Geometry => (&["lattice"], 1, 1, &[], &[]),
    }
}

/// Checks input kinds and parameter keys before any analysis runs.
pub(crate) fn validate(cmd: Command, inputs: &[Loaded], params: &Params) -> Result<(), CliError> {
    let (kinds, lo, hi, required, optional) = signature(cmd);
    let err = |message: String| CliError::InvalidJob { command: cmd.name().into(), message };
    if inputs.len() < lo || inputs.len() > hi {
        let want = if hi == usize::MAX { format!("at least {lo}") } else if lo == hi { format!("{lo}") } else { format!("{lo} to {hi}") };
        return Err(err(format!("expects {want} input file(s), got {}", inputs.len())));
    }
    for l in inputs {
        if !kinds.contains(&l.input.kind()) {
            return Err(input_err(l, format!("{} expects kind {}, found {}", cmd.name(), kinds.join(" or "), l.input.kind())));
        }
    }
    for k in required {
        if !params.contains_key(*k) {
            return Err(err(format!("missing parameter {k}")));
        }
    }
    for k in params.keys() {
        if !required.contains(&k.as_str()) && !optional.contains(&k.as_str()) {
            return Err(err(format!("unknown parameter {k}")));
        }
    }
    Ok(())
}

pub(crate) fn dispatch(cmd: Command, inputs: &[Loaded], params: &Params, opts: &Options) -> Result<Outcome, CliError> {
    let ctx = Ctx { cmd, params };
    match cmd {
        Command::Pi1 => pi1(&ctx, &inputs[0], opts),
        Command::Homotopy => homotopy(&ctx, &inputs[0], opts),
        Command::CocycleCheck => cocycle(&ctx, &inputs[0], opts, false),
        Command::CocycleClassify => cocycle(&ctx, &inputs[0], opts, true),
        Command::NetValidate => net_validate(&inputs[0]),
        Command::Duality => duality(&ctx, &inputs[0]),
        Command::Folium => folium(&ctx, &inputs[0], opts),
        Command::Covariance => covariance(&ctx, inputs, opts),
        Command::Superselection => superselection(&ctx, inputs, opts),
        Command::Wf => wf(&ctx, inputs),
        Command::Geometry => geometry(&inputs[0]),
    }
}

fn lattice_of(l: &Loaded) -> Result<CausalLattice, CliError> {
    match &l.input {
        Input::Lattice(s) => s.build().map_err(|e| input_err(l, e)),
        other => Err(input_err(l, format!("expected a lattice, found {}", other.kind()))),
    }
}

/// A poset file, or the diamond poset of a lattice file.
fn poset_of(l: &Loaded) -> Result<Poset, CliError> {
    match &l.input {
        Input::Poset(s) => s.build().map(|(p, _)| p).map_err(|e| input_err(l, e)),
        Input::Lattice(_) => {
            let lat = lattice_of(l)?;
            enumerate_diamonds(&lat).map(|d| d.poset).map_err(|e| input_err(l, e))
        }
        other => Err(input_err(l, format!("expected a poset or lattice, found {}", other.kind()))),
    }
}

fn net_of(l: &Loaded, spec: &super::spec::NetSpec) -> Result<(Net, Option<LatticeNet>), CliError> {
    match spec.build().map_err(|e| input_err(l, e))? {
        BuiltNet::Plain(n) => Ok((n, None)),
        BuiltNet::Lattice(lat) => {
            let ln = lattice_net(&lat).map_err(|e| input_err(l, e))?;
            Ok((ln.domain.net.clone(), Some(ln)))
        }
    }
}

fn pi1(ctx: &Ctx, l: &Loaded, opts: &Options) -> Result<Outcome, CliError> {
    let p = poset_of(l)?;
    let base = match ctx.str("base")? {
        Some(name) => p.index_of(&name).ok_or_else(|| ctx.err(format!("no element named {name:?}")))?,
        None => 0,
    };
    let pi = Pi1::new(&p, base);
    let pres = pi.presentation();
    let inv = abelian_invariants(&pres);
    let certificate = certify_simply_connected(&pres, opts.budget);
    Ok(Outcome {
        verdicts: vec![],
        results: json!({
            "elements": p.len(),
            "connected": is_connected(&p),
            "basepoint": p.name(base),
            "generators": pres.generators.len(),
            "relators": pres.relators.len(),
            "abelian_invariants": inv,
            "simply_connected": certificate,
        }),
    })
}

fn homotopy(ctx: &Ctx, l: &Loaded, opts: &Options) -> Result<Outcome, CliError> {
    let p = poset_of(l)?;
    let path = |key: &str| -> Result<Path, CliError> {
        let names: Vec<[String; 3]> = ctx.json(key)?.expect("required parameter");
        Path::from_names(&p, &names).map_err(|e| ctx.err(format!("parameter {key}: {e}")))
    };
    let (a, b) = (path("a")?, path("b")?);
    let verdict = are_homotopic(&p, &a, &b, opts.budget).map_err(|e| ctx.err(e.to_string()))?;
    let pi = Pi1::new(&p, a.start());
    let image = |x: &Path| pi.path_word(x).ok().map(|w| pi.abelian_image(&w));
    let (ia, ib) = (image(&a), image(&b));
    let witness = match verdict {
        Verdict::Yes => None,
        Verdict::No => Some(format!("abelian images {ia:?} and {ib:?}")),
        Verdict::Unknown => Some(format!("undecided within a budget of {}", opts.budget)),
    };
    Ok(Outcome {
        verdicts: vec![VerdictLine::new("homotopic", verdict == Verdict::Yes, witness)],
        results: json!({ "homotopic": verdict, "abelian_image_a": ia, "abelian_image_b": ib }),
    })
}

/// Value types that random cocycle families can be drawn from.
trait Sampled: Operator + Sized {
    fn coboundary(rng: &mut ChaCha8Rng, d: Arc<Domain>) -> Cocycle<Self>;
    fn assignment(rng: &mut ChaCha8Rng, d: Arc<Domain>) -> Option<Cocycle<Self>>;
}

impl Sampled for CMat {
    fn coboundary(rng: &mut ChaCha8Rng, d: Arc<Domain>) -> Cocycle<Self> {
        random_dense_coboundary(rng, d)
    }

    fn assignment(rng: &mut ChaCha8Rng, d: Arc<Domain>) -> Option<Cocycle<Self>> {
        Some(random_assignment(rng, d))
    }
}

impl Sampled for PhasedPauli {
    fn coboundary(rng: &mut ChaCha8Rng, d: Arc<Domain>) -> Cocycle<Self> {
        random_pauli_coboundary(rng, d)
    }

    fn assignment(_: &mut ChaCha8Rng, _: Arc<Domain>) -> Option<Cocycle<Self>> {
        None
    }
}

fn build_cocycle<T: Sampled>(l: &Loaded, d: Arc<Domain>, family: &CocycleFamily) -> Result<Cocycle<T>, CliError> {
    let wind = |s: f64| winding_cocycle::<T>(d.clone(), s).map_err(|e| input_err(l, e));
    Ok(match family {
        CocycleFamily::Trivial => Cocycle::trivial(d.clone()),
        CocycleFamily::Wind { s } => wind(*s)?,
        CocycleFamily::Coboundary { seed } => T::coboundary(&mut ChaCha8Rng::seed_from_u64(*seed), d.clone()),
        CocycleFamily::Twisted { s, seed } => {
            T::coboundary(&mut ChaCha8Rng::seed_from_u64(*seed), d.clone()).twisted(&wind(*s)?)
        }
        CocycleFamily::Random { seed } => T::assignment(&mut ChaCha8Rng::seed_from_u64(*seed), d.clone())
            .ok_or_else(|| input_err(l, "random assignments need a full matrix net"))?,
    })
}

fn cocycle(ctx: &Ctx, l: &Loaded, opts: &Options, classify: bool) -> Result<Outcome, CliError> {
    let Input::Cocycle(spec) = &l.input else { unreachable!("validated kind") };
    let (net, _) = net_of(l, &spec.net)?;
    let pauli = net.algebras.iter().all(|a| matches!(a, LocalAlgebra::Pauli(_)));
    let d = Domain::new(net).map_err(|e| input_err(l, e))?;
    if pauli {
        let z = build_cocycle::<PhasedPauli>(l, d, &spec.cocycle)?;
        cocycle_on(ctx, l, &z, opts, classify)
    } else {
        let z = build_cocycle::<CMat>(l, d, &spec.cocycle)?;
        cocycle_on(ctx, l, &z, opts, classify)
    }
}

fn cocycle_on<T: Operator>(_: &Ctx, l: &Loaded, z: &Cocycle<T>, opts: &Options, classify: bool) -> Result<Outcome, CliError> {
    let simplices = z.domain.sigma1.len();
    if !classify {
        let r = validate_cocycle(z, opts.tol);
        let verdicts = [
            ("unitarity", &r.unitarity),
            ("locality", &r.locality),
            ("identity", &r.identity),
            ("consequences", &r.consequences),
        ]
        .into_iter()
        .map(|(n, c)| VerdictLine::new(n, c.pass, c.witness.clone()))
        .collect();
        return Ok(Outcome { verdicts, results: json!({ "simplices": simplices, "report": r }) });
    }
    match classify_triviality(z, opts.tol) {
        Ok((c, w)) => Ok(Outcome {
            verdicts: vec![VerdictLine::new("consistent", true, None)],
            results: json!({
                "simplices": simplices,
                "path_independent": c.path_independent,
                "trivial_in_b": c.trivial_in_b,
                "loop_deviation": c.loop_deviation,
                "equivalence_witness": w.is_some(),
            }),
        }),
        Err(e @ CocycleError::InconsistentClassification(_)) => Ok(Outcome {
            verdicts: vec![VerdictLine::new("consistent", false, Some(e.to_string()))],
            results: json!({ "simplices": simplices }),
        }),
        Err(e) => Err(input_err(l, e)),
    }
}

fn plain_net(l: &Loaded) -> Result<Net, CliError> {
    let Input::Net(spec) = &l.input else { unreachable!("validated kind") };
    net_of(l, spec).map(|(n, _)| n)
}

fn first(ws: &[String]) -> Option<String> {
    ws.first().map(|w| if ws.len() > 1 { format!("{w} (and {} more)", ws.len() - 1) } else { w.clone() })
}

fn net_validate(l: &Loaded) -> Result<Outcome, CliError> {
    let net = plain_net(l)?;
    let r = validate_net(&net);
    let mut verdicts = vec![
        VerdictLine::new("isotony", r.isotony.pass, first(&r.isotony.witnesses)),
        VerdictLine::new("causality", r.causality.pass, first(&r.causality.witnesses)),
        VerdictLine::new("irreducible", r.irreducible, Some("commutant of the net is larger than the scalars".into())),
    ];
    if let Some(points) = &r.local_definiteness {
        let bad: Vec<String> = points
            .iter()
            .filter(|p| !p.definite)
            .map(|p| format!("point {} has intersection dimension {}", p.point, p.intersection_dimension))
            .collect();
        verdicts.push(VerdictLine::new("local_definiteness", bad.is_empty(), first(&bad)));
    }
    Ok(Outcome { verdicts, results: json!({ "elements": net.poset.len(), "dim": net.dim(), "report": r }) })
}

fn duality(ctx: &Ctx, l: &Loaded) -> Result<Outcome, CliError> {
    let net = plain_net(l)?;
    let mode = match ctx.usize("puncture")? {
        Some(x) => DualityMode::Punctured(x),
        None => DualityMode::Haag,
    };
    let targets: Vec<usize> = match ctx.str("target")? {
        Some(name) => vec![net.poset.index_of(&name).ok_or_else(|| ctx.err(format!("no element named {name:?}")))?],
        None => (0..net.poset.len()).filter(|&o| !net.perp[o].is_empty()).collect(),
    };
    let explicit = targets.len() == 1 && ctx.params.contains_key("target");
    let mut verdicts = Vec::new();
    let mut rows = Vec::new();
    for o in targets {
        match duality_check(&net, o, mode) {
            Ok(r) => {
                verdicts.push(VerdictLine::new(format!("duality {}", net.poset.name(o)), r.holds, r.witness.clone()));
                rows.push(json!({ "target": net.poset.name(o), "holds": r.holds, "witness": r.witness }));
            }
            Err(e) if explicit => return Err(ctx.err(e.to_string())),
            Err(_) => {}
        }
    }
    let mode_name = match mode {
        DualityMode::Haag => "haag".to_string(),
        DualityMode::Punctured(x) => format!("punctured at {x}"),
    };
    Ok(Outcome { verdicts, results: json!({ "mode": mode_name, "targets": rows }) })
}

fn state(ctx: &Ctx, key: &str, d: usize, seed: u64) -> Result<State, CliError> {
    let v = ctx.params.get(key).expect("required parameter");
    let bad = |m: String| ctx.err(format!("parameter {key}: {m}"));
    let s = match v {
        Value::Array(_) => {
            let p: Vec<f64> = serde_json::from_value(v.clone()).map_err(|e| bad(e.to_string()))?;
            if p.len() != d {
                return Err(bad(format!("{} weights for dimension {d}", p.len())));
            }
            State::diagonal(&p).map_err(|e| bad(e.to_string()))?
        }
        Value::String(s) if s == "mixed" => State::maximally_mixed(d),
        Value::String(s) if s == "random" => State::random(&mut ChaCha8Rng::seed_from_u64(seed), d),
        Value::String(s) if s.starts_with("pure:") => {
            let i: usize = s[5..].parse().map_err(|_| bad(format!("bad basis index in {s:?}")))?;
            if i >= d {
                return Err(bad(format!("basis index {i} outside dimension {d}")));
            }
            let e = nalgebra::DVector::from_fn(d, |j, _| if j == i { num_complex::Complex64::new(1.0, 0.0) } else { Default::default() });
            State::pure(&e).map_err(|e| bad(e.to_string()))?
        }
        Value::String(s) if s.starts_with('[') => {
            let p: Vec<f64> = serde_json::from_str(s).map_err(|e| bad(e.to_string()))?;
            if p.len() != d {
                return Err(bad(format!("{} weights for dimension {d}", p.len())));
            }
            State::diagonal(&p).map_err(|e| bad(e.to_string()))?
        }
        other => return Err(bad(format!("expected mixed, random, pure:<i> or a weight list, got {other}"))),
    };
    Ok(s)
}

fn folium(ctx: &Ctx, l: &Loaded, opts: &Options) -> Result<Outcome, CliError> {
    let net = plain_net(l)?;
    let d = net.dim();
    let omega = state(ctx, "omega", d, opts.seed)?;
    let sigma = state(ctx, "sigma", d, opts.seed.wrapping_add(1))?;
    let r = folium_net(&net, &omega, &sigma).map_err(|e| input_err(l, e))?;
    Ok(Outcome { verdicts: vec![], results: to_value(r) })
}

fn covariance(ctx: &Ctx, inputs: &[Loaded], opts: &Options) -> Result<Outcome, CliError> {
    let ls = inputs.iter().map(lattice_of).collect::<Result<Vec<_>, _>>()?;
    let functor = match ctx.str("functor")?.as_deref() {
        None | Some("pauli") => TheoryFunctor::pauli(),
        Some("adversarial") => {
            let letter: Letter = ctx.json("letter")?.unwrap_or(Letter::X);
            TheoryFunctor::adversarial(letter)
        }
        Some(other) => return Err(ctx.err(format!("unknown functor {other:?}"))),
    };
    let extra = ctx.usize("extra")?.unwrap_or(8);
    let fields = ctx.usize("fields")?.unwrap_or(4);
    let embs = embeddings_among(&ls);
    let mut verdicts = Vec::new();

    let laws = functor_laws(&embs, extra, opts.seed);
    verdicts.push(VerdictLine::new("functor_laws", laws.passed(), first(&laws.failures)));

    let mut hks = Vec::new();
    for (l, lat) in inputs.iter().zip(&ls) {
        let hk = recover_haag_kastler(&functor, lat).map_err(|e| input_err(l, e))?;
        let witness = [&hk.isotony, &hk.covariance, &hk.group_law, &hk.causality]
            .into_iter()
            .find_map(|c| c.witness.clone());
        verdicts.push(VerdictLine::new(format!("haag_kastler {lat}"), hk.passed(), witness));
        hks.push(hk);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut checked = 0;
    let mut failures = Vec::new();
    for e in &embs {
        for _ in 0..fields {
            let f: Vec<f64> = (0..e.src.sites()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            checked += 1;
            if !field_naturality(&FieldFamily, e, &f) {
                failures.push(format!("{} -> {} at offset ({}, {})", e.src, e.dst, e.dt, e.dx));
            }
        }
    }
    verdicts.push(VerdictLine::new("field_naturality", failures.is_empty(), first(&failures)));

    let mut axioms = Vec::new();
    for dst in &ls {
        let into: Vec<_> = embs.iter().filter(|e| &e.dst == dst).cloned().collect();
        let r = axiom_report(&functor, &into);
        verdicts.push(VerdictLine::new(format!("causality {dst}"), r.causal, r.causal_witness.clone()));
        axioms.push(json!({ "target": dst.to_string(), "report": r }));
    }
    Ok(Outcome {
        verdicts,
        results: json!({
            "embeddings": embs.len(),
            "functor_laws": laws,
            "haag_kastler": hks,
            "field_naturality": { "checked": checked, "failures": failures },
            "axioms": axioms,
        }),
    })
}

fn offsets(ctx: &Ctx, key: &str, n: usize) -> Result<Vec<usize>, CliError> {
    let v: Vec<usize> = ctx.json(key)?.unwrap_or_else(|| vec![0; n]);
    if v.len() != n {
        return Err(ctx.err(format!("parameter {key} needs {n} offsets, got {}", v.len())));
    }
    Ok(v)
}

fn sample_cocycle(rng: &mut ChaCha8Rng, n: &LatticeNet) -> Cocycle<PhasedPauli> {
    let z = random_pauli_coboundary(rng, n.domain.clone());
    let s = rng.gen_range(0.0..std::f64::consts::TAU);
    match winding_cocycle::<PhasedPauli>(n.domain.clone(), s) {
        Ok(w) => z.twisted(&w),
        Err(_) => z,
    }
}

fn superselection(ctx: &Ctx, inputs: &[Loaded], opts: &Options) -> Result<Outcome, CliError> {
    let ls = inputs.iter().map(lattice_of).collect::<Result<Vec<_>, _>>()?;
    let k = ls.len() - 1;
    let (dts, dxs) = (offsets(ctx, "dt", k)?, offsets(ctx, "dx", k)?);
    let samples = ctx.usize("samples")?.unwrap_or(10);
    let nets = inputs
        .iter()
        .zip(&ls)
        .map(|(l, lat)| lattice_net(lat).map_err(|e| input_err(l, e)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let us: Vec<CliffordLayer> = ls.iter().map(|l| CliffordLayer::random(&mut rng, l.width)).collect();
    let embs = (0..k)
        .map(|i| embed_lattice(&ls[i], &ls[i + 1], dts[i], dxs[i]).map_err(|e| ctx.err(e.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    let map = |psi: &crate::lattice::LatticeEmbedding, i: usize, j: usize| -> Result<_, CliError> {
        let e = diamond_embedding(psi, &nets[i], &nets[j]).map_err(|e| ctx.err(e.to_string()))?;
        Ok(superselection_map(e, &us[i], &us[j]))
    };
    let apply = |s: &crate::cocycle::Superselection, z: &Cocycle<PhasedPauli>, i: usize| {
        s.apply(z, &nets[i], opts.tol).map_err(|e| ctx.err(e.to_string()))
    };

    let mut unit_dist: f64 = 0.0;
    for (i, lat) in ls.iter().enumerate() {
        let s = map(&identity_embedding(lat), i, i)?;
        for _ in 0..samples {
            let z = sample_cocycle(&mut rng, &nets[i]);
            unit_dist = unit_dist.max(apply(&s, &z, i)?.max_distance(&z));
        }
    }
    let mut comp_dist: f64 = 0.0;
    let mut chains = 0;
    let steps: Vec<_> = (0..k).map(|i| map(&embs[i], i, i + 1)).collect::<Result<_, _>>()?;
    for i in 0..k.saturating_sub(1) {
        let direct = embs[i].then(&embs[i + 1]).map_err(|e| ctx.err(e.to_string()))?;
        let s = map(&direct, i, i + 2)?;
        for _ in 0..samples {
            let z = sample_cocycle(&mut rng, &nets[i + 2]);
            let two = apply(&steps[i], &apply(&steps[i + 1], &z, i + 1)?, i)?;
            comp_dist = comp_dist.max(two.max_distance(&apply(&s, &z, i)?));
            chains += 1;
        }
    }
    let unit_ok = unit_dist <= opts.tol;
    let comp_ok = comp_dist <= opts.tol;
    Ok(Outcome {
        verdicts: vec![
            VerdictLine::new("unit", unit_ok, Some(format!("largest deviation {unit_dist:.3e}"))),
            VerdictLine::new("composition", comp_ok, Some(format!("largest deviation {comp_dist:.3e}"))),
        ],
        results: json!({
            "lattices": ls.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
            "samples": samples,
            "composition_checks": chains,
            "unit_deviation": unit_dist,
            "composition_deviation": comp_dist,
        }),
    })
}

fn wf(ctx: &Ctx, inputs: &[Loaded]) -> Result<Outcome, CliError> {
    let grids = inputs
        .iter()
        .map(|l| match &l.input {
            Input::Grid(g) => g.build().map_err(|e| input_err(l, e)),
            _ => unreachable!("validated kind"),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut p = WfParams::default();
    if let Some(w) = ctx.usize("window")? {
        p.window = w;
    }
    if let Some(d) = ctx.usize("directions")? {
        p.directions = d;
    }
    if let Some(x) = ctx.f64("nstar")? {
        p.nstar = x;
    }
    if let Some(x) = ctx.f64("sharpness")? {
        p.sharpness = x;
    }
    if let Some(x) = ctx.f64("sensitivity")? {
        p.sensitivity = x;
    }
    let wf_err = |e: WavefrontError| ctx.err(e.to_string());
    if grids.len() == 1 {
        let r = wf_estimate_with(&grids[0], &p).map_err(wf_err)?;
        let sites = r.flagged_sites().len();
        return Ok(Outcome { verdicts: vec![], results: json!({ "flagged_sites": sites, "report": r }) });
    }
    let smooth = match ctx.str("mode")?.as_deref() {
        None | Some("product") => false,
        Some("smooth") => true,
        Some(m) => return Err(ctx.err(format!("unknown mode {m:?}"))),
    };
    if smooth {
        let r = smooth_mult_check(&grids[0], &grids[1], &p).map_err(wf_err)?;
        let w = r.extra.first().map(|f| format!("new flag at {:?} direction {}", f.site, f.direction));
        return Ok(Outcome { verdicts: vec![VerdictLine::new("smooth_multiplication", r.holds, w)], results: to_value(r) });
    }
    let wu = wf_estimate_with(&grids[0], &p).map_err(wf_err)?;
    let wv = wf_estimate_with(&grids[1], &p).map_err(wf_err)?;
    match multiply_distributions(&grids[0], &grids[1], &wu, &wv) {
        Ok(r) => {
            let w = r.violations.first().map(|f| format!("flag outside the bound at {:?} direction {}", f.site, f.direction));
            Ok(Outcome { verdicts: vec![VerdictLine::new("product_bound", r.bound_respected, w)], results: to_value(r) })
        }
        Err(e @ WavefrontError::ObstructionPresent { .. }) => Ok(Outcome {
            verdicts: vec![VerdictLine::new("product_defined", false, Some(e.to_string()))],
            results: json!({ "flags_u": wu.flags.len(), "flags_v": wv.flags.len() }),
        }),
        Err(e) => Err(wf_err(e)),
    }
}

fn geometry(l: &Loaded) -> Result<Outcome, CliError> {
    let lat = lattice_of(l)?;
    let r = check_geometry_lemmas(&lat).map_err(|e| input_err(l, e))?;
    let verdicts = [
        ("clause_i", &r.clause_i),
        ("clause_ii_partner", &r.clause_ii_partner),
        ("clause_ii_superset", &r.clause_ii_superset),
        ("clause_iii", &r.clause_iii),
    ]
    .into_iter()
    .map(|(n, c)| VerdictLine::new(n, c.pass(), first(&c.failures)))
    .collect();
    Ok(Outcome { verdicts, results: json!({ "lattice": lat.to_string(), "report": r }) })
}
