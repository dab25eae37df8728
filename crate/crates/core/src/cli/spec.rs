//! Typed input files, routed by their top-level `kind`.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::CliError;
use crate::algebra::{full_matrix_net, pauli_net, Net};
use crate::fixtures;
use crate::lattice::{build_lattice, CausalLattice, Topology};
use crate::poset::{CausalDisjointness, Poset};
use crate::wavefront::{corpus, GridDistribution};

pub const KINDS: [&str; 6] = ["poset", "lattice", "net", "cocycle", "grid", "job"];

/// A poset by fixture name or by elements and generating relations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixture: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub elements: Vec<String>,
    /// Generating pairs x ≤ y; the order is their reflexive-transitive closure.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub leq: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perp: Option<Vec<(String, String)>>,
}

impl PosetSpec {
    pub fn build(&self) -> Result<(Poset, Option<CausalDisjointness>), String> {
        if let Some(name) = &self.fixture {
            if !self.elements.is_empty() || !self.leq.is_empty() || self.perp.is_some() {
                return Err("a fixture takes no elements, leq or perp".into());
            }
            return fixture(name);
        }
        let p = Poset::from_generators(&self.elements, &self.leq).map_err(|e| e.to_string())?;
        let perp = match &self.perp {
            Some(pairs) => Some(CausalDisjointness::from_pairs(&p, pairs).map_err(|e| e.to_string())?),
            None => None,
        };
        Ok((p, perp))
    }
}

fn sized(name: &str, prefix: &str) -> Option<usize> {
    name.strip_prefix(prefix).and_then(|n| n.parse().ok())
}

fn fixture(name: &str) -> Result<(Poset, Option<CausalDisjointness>), String> {
    let lower = name.to_ascii_lowercase();
    match lower.as_str() {
        "chain3" => Ok((fixtures::chain3().poset, None)),
        "v2" => Ok((fixtures::v2().poset, None)),
        _ => {
            if let Some(n) = sized(&lower, "cycle").filter(|&n| n >= 3) {
                let c = fixtures::cycle(n);
                Ok((c.poset, Some(c.perp)))
            } else if let Some(k) = sized(&lower, "pauli").filter(|&k| k >= 2) {
                let s = fixtures::pauli_slice(k);
                Ok((s.poset, Some(s.perp)))
            } else {
                Err(format!("unknown fixture {name:?}"))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSpec {
    pub topology: Topology,
    pub width: usize,
    pub height: usize,
}

impl LatticeSpec {
    pub fn build(&self) -> Result<CausalLattice, String> {
        build_lattice(self.topology, self.width, self.height).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum NetSpec {
    /// The single-slice qubit net on the proper arcs of a circle of `sites` qubits.
    Pauli { sites: usize },
    /// M_d on every element.
    FullMatrix { poset: PosetSpec, d: usize },
    /// The column-qubit net over the diamonds of a lattice.
    Lattice { lattice: LatticeSpec },
}

/// A net together with the lattice it was built over, if any.
pub enum BuiltNet {
    Plain(Net),
    Lattice(CausalLattice),
}

impl NetSpec {
    pub fn build(&self) -> Result<BuiltNet, String> {
        match self {
            NetSpec::Pauli { sites } => {
                if *sites < 2 {
                    return Err("a Pauli slice needs at least 2 sites".into());
                }
                let s = fixtures::pauli_slice(*sites);
                Ok(BuiltNet::Plain(pauli_net(&s).map_err(|e| e.to_string())?))
            }
            NetSpec::FullMatrix { poset, d } => {
                let (p, perp) = poset.build()?;
                let perp = match perp {
                    Some(x) => x,
                    None => CausalDisjointness::from_pairs(&p, &[]).map_err(|e| e.to_string())?,
                };
                Ok(BuiltNet::Plain(full_matrix_net(p, perp, *d).map_err(|e| e.to_string())?))
            }
            NetSpec::Lattice { lattice } => Ok(BuiltNet::Lattice(lattice.build()?)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum CocycleFamily {
    Trivial,
    /// The winding cocycle with phase s per turn.
    Wind { s: f64 },
    /// A random coboundary.
    Coboundary { seed: u64 },
    /// A random coboundary times the winding cocycle.
    Twisted { s: f64, seed: u64 },
    /// Independent random unitaries on every 1-simplex (full matrix nets only).
    Random { seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CocycleSpec {
    pub net: NetSpec,
    pub cocycle: CocycleFamily,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum GridSpec {
    Values {
        shape: Vec<usize>,
        #[serde(default = "unit_spacing")]
        spacing: f64,
        values: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        imag: Option<Vec<f64>>,
    },
    Gaussian { n: usize, sigma: f64 },
    Impulse { n: usize, at: usize },
    Heaviside { n: usize, at: usize },
    Kink { n: usize, at: usize },
    Constant { n: usize, value: f64 },
    Window { n: usize, center: f64, radius: f64 },
    DiagonalDelta { n: usize },
    Gaussian2d { n: usize, sigma: f64 },
}

fn unit_spacing() -> f64 {
    1.0
}

impl GridSpec {
    pub fn build(&self) -> Result<GridDistribution, String> {
        let n = match self {
            GridSpec::Values { .. } => 0,
            GridSpec::Gaussian { n, .. }
            | GridSpec::Impulse { n, .. }
            | GridSpec::Heaviside { n, .. }
            | GridSpec::Kink { n, .. }
            | GridSpec::Constant { n, .. }
            | GridSpec::Window { n, .. }
            | GridSpec::DiagonalDelta { n }
            | GridSpec::Gaussian2d { n, .. } => *n,
        };
        if !matches!(self, GridSpec::Values { .. }) && (n < 2 || !n.is_power_of_two()) {
            return Err(format!("grid side {n} is not a power of two"));
        }
        let in_range = |at: usize| if at < n { Ok(at) } else { Err(format!("position {at} outside the grid")) };
        Ok(match self {
            GridSpec::Values { shape, spacing, values, imag } => {
                let samples: Vec<Complex64> = match imag {
                    Some(im) if im.len() != values.len() => return Err("values and imag differ in length".into()),
                    Some(im) => values.iter().zip(im).map(|(&a, &b)| Complex64::new(a, b)).collect(),
                    None => values.iter().map(|&a| Complex64::new(a, 0.0)).collect(),
                };
                GridDistribution::new(shape.clone(), samples, *spacing).map_err(|e| e.to_string())?
            }
            GridSpec::Gaussian { sigma, .. } => corpus::gaussian(n, *sigma),
            GridSpec::Impulse { at, .. } => corpus::impulse(n, in_range(*at)?),
            GridSpec::Heaviside { at, .. } => corpus::heaviside(n, in_range(*at)?),
            GridSpec::Kink { at, .. } => corpus::kink(n, in_range(*at)?),
            GridSpec::Constant { value, .. } => corpus::constant(n, *value),
            GridSpec::Window { center, radius, .. } => corpus::window(n, *center, *radius),
            GridSpec::DiagonalDelta { .. } => corpus::diagonal_delta(n),
            GridSpec::Gaussian2d { sigma, .. } => corpus::gaussian_2d(n, *sigma),
        })
    }
}

/// One analysis: a command, its input files and parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub command: String,
    pub inputs: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Input {
    Poset(PosetSpec),
    Lattice(LatticeSpec),
    Net(NetSpec),
    Cocycle(CocycleSpec),
    Grid(GridSpec),
    Job(JobSpec),
}

impl Input {
    pub fn kind(&self) -> &'static str {
        match self {
            Input::Poset(_) => "poset",
            Input::Lattice(_) => "lattice",
            Input::Net(_) => "net",
            Input::Cocycle(_) => "cocycle",
            Input::Grid(_) => "grid",
            Input::Job(_) => "job",
        }
    }

    fn body(&self) -> Value {
        let v = match self {
            Input::Poset(x) => serde_json::to_value(x),
            Input::Lattice(x) => serde_json::to_value(x),
            Input::Net(x) => serde_json::to_value(x),
            Input::Cocycle(x) => serde_json::to_value(x),
            Input::Grid(x) => serde_json::to_value(x),
            Input::Job(x) => serde_json::to_value(x),
        };
        v.expect("specs serialize to JSON")
    }

    /// Sorted keys, two-space indentation and a trailing newline.
    pub fn canonical(&self) -> String {
        let mut v = self.body();
        if let Value::Object(m) = &mut v {
            m.insert("kind".into(), Value::String(self.kind().into()));
        }
        let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
        s.push('\n');
        s
    }
}

fn typed<T: DeserializeOwned>(v: Value, file: &str) -> Result<T, CliError> {
    serde_json::from_value(v).map_err(|e| CliError::Parse { file: file.into(), line: 0, column: 0, message: e.to_string() })
}

/// Parses spec text; `file` names the source in errors.
pub fn parse_str(text: &str, file: &str) -> Result<Input, CliError> {
    let v: Value = serde_json::from_str(text).map_err(|e| CliError::Parse {
        file: file.into(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let Value::Object(mut m) = v else {
        return Err(CliError::Parse { file: file.into(), line: 1, column: 1, message: "expected a JSON object".into() });
    };
    let kind = match m.remove("kind") {
        Some(Value::String(k)) => k,
        Some(other) => return Err(CliError::UnknownKind { file: file.into(), kind: other.to_string() }),
        None => return Err(CliError::Parse { file: file.into(), line: 0, column: 0, message: "missing field `kind`".into() }),
    };
    let body = Value::Object(m);
    Ok(match kind.as_str() {
        "poset" => Input::Poset(typed(body, file)?),
        "lattice" => Input::Lattice(typed(body, file)?),
        "net" => Input::Net(typed(body, file)?),
        "cocycle" => Input::Cocycle(typed(body, file)?),
        "grid" => Input::Grid(typed(body, file)?),
        "job" => Input::Job(typed(body, file)?),
        _ => return Err(CliError::UnknownKind { file: file.into(), kind }),
    })
}

/// Reads and parses a spec file, returning it with its raw bytes.
pub fn read_spec(path: &Path) -> Result<(Input, Vec<u8>), CliError> {
    let file = path.display().to_string();
    let bytes = std::fs::read(path).map_err(|e| CliError::Io { file: file.clone(), message: e.to_string() })?;
    let text = std::str::from_utf8(&bytes)
        .map_err(|e| CliError::Parse { file: file.clone(), line: 0, column: 0, message: e.to_string() })?;
    Ok((parse_str(text, &file)?, bytes))
}

pub fn parse_spec(path: &Path) -> Result<Input, CliError> {
    read_spec(path).map(|(i, _)| i)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kinds_route() {
        let l = parse_str(r#"{"kind":"lattice","topology":"cylinder","width":6,"height":4}"#, "l.json").unwrap();
        let Input::Lattice(spec) = &l else { panic!("not a lattice") };
        let lat = spec.build().unwrap();
        assert_eq!(lat.sites(), 24);
        assert_eq!(lat.topology, Topology::Cylinder);
        assert!(matches!(
            parse_str(r#"{"kind":"banana"}"#, "b.json"),
            Err(CliError::UnknownKind { kind, .. }) if kind == "banana"
        ));
        let e = parse_str("{\"kind\": \"poset\",\n  \"elements\": [\"a\" \"b\"]}", "bad.json").unwrap_err();
        assert!(matches!(e, CliError::Parse { line: 2, .. }), "{e}");
    }

    #[test]
    fn chain3_file_gives_chain3() {
        let text = "{\n  \"elements\": [\n    \"a\",\n    \"b\",\n    \"c\"\n  ],\n  \"kind\": \"poset\",\n  \"leq\": [\n    [\n      \"a\",\n      \"b\"\n    ],\n    [\n      \"b\",\n      \"c\"\n    ]\n  ]\n}\n";
        let i = parse_str(text, "chain3.json").unwrap();
        assert_eq!(i.canonical(), text);
        let Input::Poset(spec) = i else { panic!("not a poset") };
        assert_eq!(spec.build().unwrap().0, fixtures::chain3().poset);
    }

    #[test]
    fn canonical_round_trips() {
        let inputs = [
            Input::Poset(PosetSpec { fixture: Some("cycle4".into()), elements: vec![], leq: vec![], perp: None }),
            Input::Net(NetSpec::FullMatrix {
                poset: PosetSpec { fixture: None, elements: vec!["x".into()], leq: vec![], perp: Some(vec![]) },
                d: 2,
            }),
            Input::Cocycle(CocycleSpec {
                net: NetSpec::Lattice { lattice: LatticeSpec { topology: Topology::Strip, width: 3, height: 4 } },
                cocycle: CocycleFamily::Twisted { s: 0.1 + 0.2, seed: 7 },
            }),
            Input::Grid(GridSpec::Values { shape: vec![2], spacing: 0.5, values: vec![1.0, -1e-300], imag: None }),
            Input::Job(JobSpec {
                command: "pi1".into(),
                inputs: vec!["p.json".into()],
                params: [("base".to_string(), Value::String("a1".into()))].into_iter().collect(),
            }),
        ];
        for i in inputs {
            let c = i.canonical();
            let back = parse_str(&c, "x").unwrap();
            assert_eq!(back, i);
            assert_eq!(back.canonical(), c);
        }
    }

    #[test]
    fn fixtures_build() {
        let spec = |f: &str| PosetSpec { fixture: Some(f.into()), elements: vec![], leq: vec![], perp: None };
        assert_eq!(spec("CYCLE4").build().unwrap().0.len(), 8);
        assert_eq!(spec("pauli6").build().unwrap().0.len(), 30);
        assert!(spec("cycle2").build().is_err());
        assert!(spec("torus").build().is_err());
    }
}
