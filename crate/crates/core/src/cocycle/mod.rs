//! 1-cocycles of a net over its index poset, their evaluation, classification and functors.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{self, AlgebraError, CMat, LocalAlgebra, Net, PauliString};
use crate::fixtures::Cycle;
use crate::homotopy::{Pi1, Word};
use crate::lattice::LatticeError;
use crate::simplicial::{self, Path, Simplex1, Simplex2, SimplicialError};

mod functor;
mod intertwiner;

pub use functor::*;
pub use intertwiner::*;

#[derive(Debug, Error)]
pub enum CocycleError {
    #[error("index poset is not connected")]
    NotConnected,
    #[error("path independence and triviality disagree: {0}")]
    InconsistentClassification(String),
    #[error("relator maps to {0}, not 1")]
    RelatorViolation(String),
    #[error("refinement is not locally relatively connected: {0}")]
    NotLocallyRelativelyConnected(String),
    #[error("no connecting path: {0}")]
    PathNotFound(String),
    #[error("cocycle is not path-independent")]
    NotPathIndependent,
    #[error("isomorphism does not preserve {0}")]
    IncompatibleIsomorphism(String),
    #[error("simplex outside the image: {0}")]
    SimplexOutsideImage(String),
    #[error("invalid choice function: {0}")]
    InvalidChoice(String),
    #[error("not an intertwiner: {0}")]
    NotIntertwiner(String),
    #[error("no free π₁ generator to wind around")]
    NoWinding,
    #[error("domains differ")]
    DomainMismatch,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Simplicial(#[from] SimplicialError),
}

/// Operators that cocycles and intertwiners take values in.
pub trait Operator: Clone + fmt::Debug + Send + Sync {
    fn one(dim: usize) -> Self;
    fn scalar(phase: Complex64, dim: usize) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn adjoint(&self) -> Self;
    /// Zero exactly when equal; the max-entry difference for dense values.
    fn distance(&self, o: &Self) -> f64;
    fn unitarity_defect(&self) -> f64;
    fn in_algebra(&self, a: &LocalAlgebra, tol: f64) -> bool;
    fn to_dense(&self, dim: usize) -> CMat;
}

impl Operator for CMat {
    fn one(dim: usize) -> Self {
        algebra::identity(dim)
    }

    fn scalar(phase: Complex64, dim: usize) -> Self {
        algebra::identity(dim) * phase
    }

    fn mul(&self, o: &Self) -> Self {
        self * o
    }

    fn adjoint(&self) -> Self {
        nalgebra::DMatrix::adjoint(self)
    }

    fn distance(&self, o: &Self) -> f64 {
        (self - o).camax()
    }

    fn unitarity_defect(&self) -> f64 {
        (self * nalgebra::DMatrix::adjoint(self) - algebra::identity(self.nrows())).camax()
    }

    fn in_algebra(&self, a: &LocalAlgebra, tol: f64) -> bool {
        a.contains_matrix(self, tol)
    }

    fn to_dense(&self, _dim: usize) -> CMat {
        self.clone()
    }
}

/// A phase times a tensor product of Hermitian single-site Paulis.
#[derive(Clone, Copy, PartialEq)]
pub struct PhasedPauli {
    pub phase: Complex64,
    pub string: PauliString,
}

impl fmt::Debug for PhasedPauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:.4})·{}", self.phase, self.string.label(16).trim_end_matches('I'))
    }
}

impl PhasedPauli {
    pub fn new(phase: Complex64, string: PauliString) -> Self {
        PhasedPauli { phase, string }
    }

    pub fn phase_only(phase: Complex64) -> Self {
        PhasedPauli { phase, string: PauliString::IDENTITY }
    }
}

/// The phase c with σ_a σ_b = c σ_{a+b}.
pub fn product_phase(a: &PauliString, b: &PauliString) -> Complex64 {
    let c = a.mul(b);
    let e = (a.x & a.z).count_ones()
        + (b.x & b.z).count_ones()
        + 2 * (a.z & b.x).count_ones()
        + 3 * (c.x & c.z).count_ones();
    Complex64::i().powu(e % 4)
}

impl Operator for PhasedPauli {
    fn one(_dim: usize) -> Self {
        PhasedPauli::phase_only(Complex64::new(1.0, 0.0))
    }

    fn scalar(phase: Complex64, _dim: usize) -> Self {
        PhasedPauli::phase_only(phase)
    }

    fn mul(&self, o: &Self) -> Self {
        PhasedPauli {
            phase: self.phase * o.phase * product_phase(&self.string, &o.string),
            string: self.string.mul(&o.string),
        }
    }

    fn adjoint(&self) -> Self {
        PhasedPauli { phase: self.phase.conj(), string: self.string }
    }

    fn distance(&self, o: &Self) -> f64 {
        if self.string == o.string {
            (self.phase - o.phase).norm()
        } else {
            1.0
        }
    }

    fn unitarity_defect(&self) -> f64 {
        (self.phase.norm() - 1.0).abs()
    }

    fn in_algebra(&self, a: &LocalAlgebra, tol: f64) -> bool {
        match a {
            LocalAlgebra::Pauli(p) => p.contains_string(&self.string),
            LocalAlgebra::Dense(d) => d.contains(&self.to_dense(d.dim()), tol),
        }
    }

    fn to_dense(&self, dim: usize) -> CMat {
        self.string.matrix(dim.trailing_zeros() as usize) * self.phase
    }
}

/// The index poset of a net with its enumerated Σ₁ and π₁ data.
#[derive(Debug)]
pub struct Domain {
    pub net: Net,
    pub sigma1: Vec<Simplex1>,
    index: HashMap<Simplex1, usize>,
    pub pi1: Pi1,
    pub connected: bool,
    tree: Vec<Path>,
}

impl Domain {
    /// Basepoint: an element with the smallest local algebra.
    pub fn new(net: Net) -> Result<Arc<Domain>, CocycleError> {
        let base = (0..net.poset.len()).min_by_key(|&a| net.algebra(a).dimension()).ok_or(CocycleError::NotConnected)?;
        Domain::with_base(net, base)
    }

    /// π₁ data covers the basepoint component only.
    pub fn with_base(net: Net, base: usize) -> Result<Arc<Domain>, CocycleError> {
        if base >= net.poset.len() {
            return Err(CocycleError::NotConnected);
        }
        let connected = simplicial::is_connected(&net.poset);
        let sigma1 = simplicial::sigma1(&net.poset);
        let index = sigma1.iter().enumerate().map(|(i, b)| (*b, i)).collect();
        let pi1 = Pi1::new(&net.poset, base);
        let tree = (0..net.poset.len()).map(|a| pi1.tree_path(a)).collect();
        Ok(Arc::new(Domain { net, sigma1, index, pi1, connected, tree }))
    }

    pub fn len(&self) -> usize {
        self.net.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> usize {
        self.net.dim()
    }

    pub fn basepoint(&self) -> usize {
        self.pi1.basepoint()
    }

    pub fn position(&self, b: &Simplex1) -> Option<usize> {
        self.index.get(b).copied()
    }

    /// Tree path from the basepoint to `a`.
    pub fn tree_path(&self, a: usize) -> &Path {
        &self.tree[a]
    }

    pub fn require_connected(&self) -> Result<(), CocycleError> {
        if self.connected {
            Ok(())
        } else {
            Err(CocycleError::NotConnected)
        }
    }

    pub fn simplex_name(&self, b: &Simplex1) -> String {
        let p = &self.net.poset;
        format!("({} -> {} | {})", p.name(b.d1), p.name(b.d0), p.name(b.support))
    }

    pub fn simplex2_name(&self, c: &Simplex2) -> String {
        format!(
            "[{}, {}, {} | {}]",
            self.simplex_name(&c.f2),
            self.simplex_name(&c.f0),
            self.simplex_name(&c.f1),
            self.net.poset.name(c.support)
        )
    }
}

/// Values of a cocycle on every 1-simplex, aligned with `domain.sigma1`.
#[derive(Clone, Debug)]
pub struct Cocycle<T> {
    pub domain: Arc<Domain>,
    pub values: Vec<T>,
}

impl<T: Operator> Cocycle<T> {
    pub fn from_fn(domain: Arc<Domain>, mut f: impl FnMut(&Simplex1) -> T) -> Self {
        let values = domain.sigma1.iter().map(&mut f).collect();
        Cocycle { domain, values }
    }

    /// z(b) = u(∂₀b, |b|)* u(∂₁b, |b|) from a potential u(x, s), x ≤ s.
    pub fn from_potential(domain: Arc<Domain>, mut u: impl FnMut(usize, usize) -> T) -> Self {
        let mut cache: HashMap<(usize, usize), T> = HashMap::new();
        let mut get = |x: usize, s: usize| cache.entry((x, s)).or_insert_with(|| u(x, s)).clone();
        let values = domain.sigma1.iter().map(|b| get(b.d0, b.support).adjoint().mul(&get(b.d1, b.support))).collect();
        Cocycle { domain, values }
    }

    /// The trivial cocycle ι.
    pub fn trivial(domain: Arc<Domain>) -> Self {
        let one = T::one(domain.dim());
        let values = vec![one; domain.sigma1.len()];
        Cocycle { domain, values }
    }

    /// z(b) = V_{∂₀b} V_{∂₁b}*.
    pub fn coboundary(domain: Arc<Domain>, v: &[T]) -> Self {
        Cocycle::from_fn(domain, |b| v[b.d0].mul(&v[b.d1].adjoint()))
    }

    /// Pointwise product z(b)·w(b); a cocycle when one factor is central.
    pub fn twisted(&self, w: &Cocycle<T>) -> Self {
        let values = self.values.iter().zip(&w.values).map(|(a, b)| a.mul(b)).collect();
        Cocycle { domain: self.domain.clone(), values }
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn get(&self, b: &Simplex1) -> Option<&T> {
        self.domain.position(b).map(|i| &self.values[i])
    }

    pub fn value(&self, b: &Simplex1) -> &T {
        self.get(b).unwrap_or_else(|| panic!("{b:?} is not a 1-simplex of the domain"))
    }

    /// z(b_n)···z(b_1).
    pub fn evaluate_path(&self, p: &Path) -> T {
        p.edges().iter().fold(T::one(self.dim()), |acc, b| self.value(b).mul(&acc))
    }

    /// Largest distance between values on the same simplex.
    pub fn max_distance(&self, o: &Cocycle<T>) -> f64 {
        self.values.iter().zip(&o.values).map(|(a, b)| a.distance(b)).fold(0.0, f64::max)
    }
}

/// Evaluates z along a path; free function form.
pub fn evaluate_path<T: Operator>(z: &Cocycle<T>, p: &Path) -> T {
    z.evaluate_path(p)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClauseCheck {
    pub pass: bool,
    pub checked: usize,
    pub witness: Option<String>,
}

impl ClauseCheck {
    fn new() -> Self {
        ClauseCheck { pass: true, checked: 0, witness: None }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.pass {
            self.pass = false;
            self.witness = Some(witness());
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CocycleReport {
    pub unitarity: ClauseCheck,
    pub locality: ClauseCheck,
    pub identity: ClauseCheck,
    pub consequences: ClauseCheck,
}

impl CocycleReport {
    pub fn pass(&self) -> bool {
        self.unitarity.pass && self.locality.pass && self.identity.pass && self.consequences.pass
    }
}

/// Checks unitarity, locality, the cocycle identity and its consequences.
///
/// The identity is checked through u(x, s) = z(x → s | s): every z(b) must equal
/// u(∂₀b, |b|)* u(∂₁b, |b|), and u(s, s')u(x, s) = u(x, s') for x ≤ s ≤ s'. Together these
/// are equivalent to the identity on all of Σ₂, and each failure names a 2-simplex.
pub fn validate_cocycle<T: Operator>(z: &Cocycle<T>, tol: f64) -> CocycleReport {
    let d = &z.domain;
    let p = &d.net.poset;
    let one = T::one(d.dim());
    let mut unitarity = ClauseCheck::new();
    let mut locality = ClauseCheck::new();
    let mut identity = ClauseCheck::new();
    let mut consequences = ClauseCheck::new();
    let up = |x: usize, s: usize| Simplex1 { d1: x, d0: s, support: s };
    for (b, v) in d.sigma1.iter().zip(&z.values) {
        unitarity.record(v.unitarity_defect() <= tol, || d.simplex_name(b));
        locality.record(v.in_algebra(d.net.algebra(b.support), tol), || d.simplex_name(b));
        let pot = z.value(&up(b.d0, b.support)).adjoint().mul(z.value(&up(b.d1, b.support)));
        identity.record(v.distance(&pot) <= tol, || {
            d.simplex2_name(&Simplex2 { f2: *b, f0: up(b.d0, b.support), f1: up(b.d1, b.support), support: b.support })
        });
        if b.is_degenerate() {
            consequences.record(v.distance(&one) <= tol, || format!("z{} != 1", d.simplex_name(b)));
        }
        consequences.record(z.value(&b.reverse()).distance(&v.adjoint()) <= tol, || {
            format!("z of reverse {} != adjoint", d.simplex_name(b))
        });
    }
    for s2 in 0..p.len() {
        for s in p.down(s2).iter() {
            let lift = z.value(&up(s, s2));
            for x in p.down(s).iter() {
                let lhs = lift.mul(z.value(&up(x, s)));
                identity.record(lhs.distance(z.value(&up(x, s2))) <= tol, || {
                    d.simplex2_name(&Simplex2 { f2: up(x, s), f0: up(s, s2), f1: up(x, s2), support: s2 })
                });
            }
        }
    }
    CocycleReport { unitarity, locality, identity, consequences }
}

/// The identity z(∂₀c)z(∂₂c) = z(∂₁c) on every enumerated 2-simplex.
pub fn identity_check_full<T: Operator>(z: &Cocycle<T>, cap: usize, tol: f64) -> Result<ClauseCheck, CocycleError> {
    let d = &z.domain;
    let mut chk = ClauseCheck::new();
    simplicial::for_each_sigma2(&d.net.poset, cap, |c| {
        let lhs = z.value(&c.f0).mul(z.value(&c.f2));
        chk.record(lhs.distance(z.value(&c.f1)) <= tol, || d.simplex2_name(&c));
    })?;
    Ok(chk)
}

/// A field on 0-simplices: intertwiners and global equivalences.
#[derive(Clone, Debug)]
pub struct Field<T> {
    pub values: Vec<T>,
}

/// Unitary field with V_{∂₀b} z(b) = z₁(b) V_{∂₁b}, without locality.
pub type GlobalEquivalence<T> = Field<T>;

impl<T: Operator> Field<T> {
    /// First 1-simplex where V_{∂₀b} z(b) ≠ z₁(b) V_{∂₁b}.
    pub fn relation_failure(&self, z: &Cocycle<T>, z1: &Cocycle<T>, tol: f64) -> Option<Simplex1> {
        z.domain.sigma1.iter().enumerate().find_map(|(i, b)| {
            let lhs = self.values[b.d0].mul(&z.values[i]);
            let rhs = z1.values[i].mul(&self.values[b.d1]);
            (lhs.distance(&rhs) > tol).then_some(*b)
        })
    }

    /// First element whose value is not in its local algebra.
    pub fn locality_failure(&self, d: &Domain, tol: f64) -> Option<usize> {
        (0..d.len()).find(|&a| !self.values[a].in_algebra(d.net.algebra(a), tol))
    }

    pub fn max_distance(&self, o: &Field<T>) -> f64 {
        self.values.iter().zip(&o.values).map(|(a, b)| a.distance(b)).fold(0.0, f64::max)
    }
}

/// A V with V_{∂₀b} z(b) = z₁(b) V_{∂₁b} on all of Σ₁ and V = 1 at the basepoint, if one exists.
///
/// V is propagated breadth-first along comparable pairs and then checked on every simplex.
pub fn equivalence_in_b<T: Operator>(z: &Cocycle<T>, z1: &Cocycle<T>, tol: f64) -> Option<GlobalEquivalence<T>> {
    let d = &z.domain;
    let p = &d.net.poset;
    let base = d.basepoint();
    let mut vals: Vec<Option<T>> = vec![None; d.len()];
    vals[base] = Some(T::one(d.dim()));
    let mut queue = VecDeque::from([base]);
    while let Some(x) = queue.pop_front() {
        let vx = vals[x].clone().unwrap();
        for y in p.up(x).or(p.down(x)).iter() {
            if vals[y].is_some() {
                continue;
            }
            let b = Simplex1 { d1: x, d0: y, support: if p.leq(x, y) { y } else { x } };
            vals[y] = Some(z1.value(&b).mul(&vx).mul(&z.value(&b).adjoint()));
            queue.push_back(y);
        }
    }
    let v = Field { values: vals.into_iter().collect::<Option<Vec<T>>>()? };
    v.relation_failure(z, z1, tol).is_none().then_some(v)
}

/// A unitary representation of π₁ given by generator images.
#[derive(Clone, Debug)]
pub struct Rep1<T> {
    pub images: Vec<T>,
    pub dim: usize,
}

impl<T: Operator> Rep1<T> {
    /// Image of a word; the leftmost letter is the leftmost factor.
    pub fn evaluate(&self, w: &[i32]) -> T {
        w.iter().fold(T::one(self.dim), |acc, &l| {
            let g = &self.images[l.unsigned_abs() as usize - 1];
            acc.mul(&if l > 0 { g.clone() } else { g.adjoint() })
        })
    }

    /// The first relator not mapped to 1.
    pub fn relator_failure(&self, pi1: &Pi1, tol: f64) -> Option<Word> {
        let one = T::one(self.dim);
        pi1.relators().iter().find(|r| self.evaluate(r).distance(&one) > tol).cloned()
    }
}

/// π_z: generators to z of their loops; relators are checked to map to 1.
pub fn pi_z<T: Operator>(z: &Cocycle<T>, tol: f64) -> Result<Rep1<T>, CocycleError> {
    let pi1 = &z.domain.pi1;
    let images = (0..pi1.generator_count()).map(|g| z.evaluate_path(&pi1.generator_loop(g))).collect();
    let rep = Rep1 { images, dim: z.dim() };
    if let Some(r) = rep.relator_failure(pi1, tol) {
        return Err(CocycleError::RelatorViolation(format!("{r:?}")));
    }
    Ok(rep)
}

/// Compares z on random loops at the basepoint with π_z of their words.
pub fn homomorphism_spot_check<T: Operator, R: Rng>(
    z: &Cocycle<T>,
    rep: &Rep1<T>,
    rng: &mut R,
    samples: usize,
    tol: f64,
) -> bool {
    let d = &z.domain;
    let p = &d.net.poset;
    (0..samples).all(|_| {
        let len = rng.gen_range(1..8);
        let walk = simplicial::random_path(rng, p, Some(d.basepoint()), len);
        let back = d.tree_path(walk.end()).reverse();
        let lp = simplicial::compose_paths(&back, &walk).expect("paths chain");
        let w = d.pi1.path_word(&lp).expect("basepoint component");
        z.evaluate_path(&lp).distance(&rep.evaluate(&w)) <= tol
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Classification {
    pub path_independent: bool,
    pub trivial_in_b: bool,
    /// Largest distance of a generator loop value from 1.
    pub loop_deviation: f64,
}

/// Decides path independence on π₁ generators and triviality by a global equivalence to ι.
pub fn classify_triviality<T: Operator>(
    z: &Cocycle<T>,
    tol: f64,
) -> Result<(Classification, Option<GlobalEquivalence<T>>), CocycleError> {
    z.domain.require_connected()?;
    let rep = pi_z(z, tol)?;
    let one = T::one(z.dim());
    let loop_deviation = rep.images.iter().map(|g| g.distance(&one)).fold(0.0, f64::max);
    let path_independent = loop_deviation <= tol;
    let iota = Cocycle::trivial(z.domain.clone());
    let witness = equivalence_in_b(&iota, z, tol);
    let trivial_in_b = witness.is_some();
    if path_independent != trivial_in_b {
        return Err(CocycleError::InconsistentClassification(format!(
            "generator deviation {loop_deviation:.3e}, global equivalence {}",
            if trivial_in_b { "found" } else { "absent" }
        )));
    }
    Ok((Classification { path_independent, trivial_in_b, loop_deviation }, witness))
}

/// z_π from a representation, with locality left unverified.
#[derive(Clone, Debug)]
pub struct RepCocycle<T> {
    pub cocycle: Cocycle<T>,
    /// `None` until checked; z_π need not be local.
    pub locality: Option<bool>,
}

impl<T: Operator> RepCocycle<T> {
    pub fn verify_locality(&mut self, tol: f64) -> bool {
        let ok = validate_cocycle(&self.cocycle, tol).locality.pass;
        self.locality = Some(ok);
        ok
    }
}

/// z_π(b) = π(word of the loop through b along the spanning tree).
pub fn z_from_rep<T: Operator>(pi: &Rep1<T>, domain: Arc<Domain>, tol: f64) -> Result<RepCocycle<T>, CocycleError> {
    if let Some(r) = pi.relator_failure(&domain.pi1, tol) {
        return Err(CocycleError::RelatorViolation(format!("{r:?}")));
    }
    let d = domain.clone();
    let cocycle = Cocycle::from_potential(domain, |x, s| pi.evaluate(&d.pi1.up_word(x, s)));
    Ok(RepCocycle { cocycle, locality: None })
}

/// WIND(s) on CYCLEn: u(a_i, O_i) = e^{is/2n}, u(a_{i+1}, O_i) = e^{−is/2n}.
pub fn wind_cycle<T: Operator>(cycle: &Cycle, domain: Arc<Domain>, s: f64) -> Cocycle<T> {
    let n = cycle.n;
    let dim = domain.dim();
    let half = s / (2.0 * n as f64);
    Cocycle::from_potential(domain, |x, top| {
        let angle = if x == top {
            0.0
        } else if x == top - n {
            half
        } else {
            -half
        };
        T::scalar(Complex64::from_polar(1.0, angle), dim)
    })
}

/// Scalar cocycle of the character e^{is·w} with w the first free abelian coordinate.
pub fn winding_cocycle<T: Operator>(domain: Arc<Domain>, s: f64) -> Result<Cocycle<T>, CocycleError> {
    let pi1 = &domain.pi1;
    let ab = pi1.abelianizer();
    if ab.invariants().free_rank == 0 {
        return Err(CocycleError::NoWinding);
    }
    let n = pi1.generator_count();
    let images = (0..n)
        .map(|g| {
            let mut e = vec![0i128; n];
            e[g] = 1;
            let w = ab.image(&e)[0] as f64;
            T::scalar(Complex64::from_polar(1.0, s * w), domain.dim())
        })
        .collect();
    let rep = Rep1 { images, dim: domain.dim() };
    Ok(z_from_rep(&rep, domain, 1e-9)?.cocycle)
}

/// Random phase times a random element of the Pauli basis of `a`.
pub fn random_local_pauli<R: Rng>(rng: &mut R, a: &LocalAlgebra) -> PhasedPauli {
    let mut out = PhasedPauli::phase_only(Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU)));
    if let LocalAlgebra::Pauli(p) = a {
        for g in p.generators() {
            if rng.gen_bool(0.5) {
                out = out.mul(&PhasedPauli::new(Complex64::new(1.0, 0.0), g));
            }
        }
    }
    out
}

/// Coboundary of random local phased Paulis.
pub fn random_pauli_coboundary<R: Rng>(rng: &mut R, domain: Arc<Domain>) -> Cocycle<PhasedPauli> {
    let v: Vec<PhasedPauli> = (0..domain.len()).map(|a| random_local_pauli(rng, domain.net.algebra(a))).collect();
    Cocycle::coboundary(domain, &v)
}

/// Coboundary of Haar-random unitaries; local when every algebra is the full matrix algebra.
pub fn random_dense_coboundary<R: Rng>(rng: &mut R, domain: Arc<Domain>) -> Cocycle<CMat> {
    let v: Vec<CMat> = (0..domain.len()).map(|_| algebra::random_unitary(rng, domain.dim())).collect();
    Cocycle::coboundary(domain, &v)
}

/// Unrelated random unitaries on every simplex.
pub fn random_assignment<R: Rng>(rng: &mut R, domain: Arc<Domain>) -> Cocycle<CMat> {
    let d = domain.dim();
    Cocycle::from_fn(domain, |_| algebra::random_unitary(rng, d))
}

/// Position of each listed element, indexed by element.
pub(crate) fn positions(len: usize, elements: &[usize]) -> Vec<Option<usize>> {
    let mut pos = vec![None; len];
    for (i, &e) in elements.iter().enumerate() {
        pos[e] = Some(i);
    }
    pos
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{full_matrix_net, pauli_z};
    use crate::fixtures;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn cycle_domain(n: usize, d: usize) -> (Cycle, Arc<Domain>) {
        let c = fixtures::cycle(n);
        let net = full_matrix_net(c.poset.clone(), c.perp.clone(), d).unwrap();
        (c, Domain::new(net).unwrap())
    }

    fn bottom_loop(c: &Cycle) -> Path {
        let n = c.n;
        let edges = (1..=n).map(|i| Simplex1 { d1: c.a(i), d0: c.a(i + 1), support: c.o(i) }).collect();
        Path::new(edges).unwrap()
    }

    #[test]
    fn product_phase_matches_matrices() {
        let letters = ["I", "X", "Y", "Z"];
        for a in letters {
            for b in letters {
                let (pa, pb) = (PauliString::parse(a).unwrap(), PauliString::parse(b).unwrap());
                let lhs = pa.matrix(1) * pb.matrix(1);
                let rhs = pa.mul(&pb).matrix(1) * product_phase(&pa, &pb);
                assert!(algebra::approx_eq(&lhs, &rhs, 1e-12), "{a}{b}");
            }
        }
        let x = PhasedPauli::new(Complex64::new(1.0, 0.0), PauliString::parse("XZY").unwrap());
        let y = PhasedPauli::new(Complex64::i(), PauliString::parse("YYI").unwrap());
        assert!(algebra::approx_eq(&x.mul(&y).to_dense(8), &(x.to_dense(8) * y.to_dense(8)), 1e-12));
    }

    #[test]
    fn trivial_cocycle_validates() {
        let (_, d) = cycle_domain(4, 2);
        let z: Cocycle<CMat> = Cocycle::trivial(d);
        assert!(validate_cocycle(&z, 1e-9).pass());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = simplicial::random_path(&mut rng, &z.domain.net.poset, None, 6);
        assert!(z.evaluate_path(&p).distance(&algebra::identity(2)) < 1e-12);
    }

    #[test]
    fn wind_validates_and_winds() {
        for s in [0.3, PI / 2.0, PI, 2.0 * PI, 5.1] {
            let (c, d) = cycle_domain(4, 2);
            let z: Cocycle<CMat> = wind_cycle(&c, d, s);
            assert!(validate_cocycle(&z, 1e-9).pass(), "s = {s}");
            assert!(identity_check_full(&z, 1_000_000, 1e-9).unwrap().pass);
            let v = z.evaluate_path(&bottom_loop(&c));
            let expect = algebra::identity(2) * Complex64::from_polar(1.0, s);
            assert!(v.distance(&expect) < 1e-9);
        }
    }

    #[test]
    fn random_assignment_fails_identity() {
        let (_, d) = cycle_domain(4, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let z = random_assignment(&mut rng, d.clone());
        let r = validate_cocycle(&z, 1e-9);
        assert!(!r.identity.pass);
        assert!(r.identity.witness.unwrap().starts_with('['));
        let full = identity_check_full(&z, 1_000_000, 1e-9).unwrap();
        assert!(!full.pass);
    }

    #[test]
    fn reduced_identity_agrees_with_full_check() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let p = fixtures::random_poset(&mut rng, 6, 0.4);
            if !simplicial::is_connected(&p) {
                continue;
            }
            let n = p.len();
            let net = Net::without_perp(p, vec![LocalAlgebra::Dense(algebra::StarAlgebra::full(2)); n]).unwrap();
            let d = Domain::new(net).unwrap();
            let good = random_dense_coboundary(&mut rng, d.clone());
            let mut bad = good.clone();
            let k = rng.gen_range(0..bad.values.len());
            bad.values[k] = bad.values[k].clone() * pauli_z();
            for z in [good, bad] {
                let fast = validate_cocycle(&z, 1e-9);
                let full = identity_check_full(&z, 1_000_000, 1e-9).unwrap();
                assert_eq!(fast.identity.pass && fast.consequences.pass, full.pass);
            }
        }
    }

    #[test]
    fn reverse_paths_give_adjoints() {
        let (c, d) = cycle_domain(4, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let z = wind_cycle::<CMat>(&c, d.clone(), 1.3).twisted(&random_dense_coboundary(&mut rng, d));
        for _ in 0..100 {
            let len = rng.gen_range(1..10);
            let p = simplicial::random_path(&mut rng, &c.poset, None, len);
            let lhs = z.evaluate_path(&p.reverse());
            assert!(lhs.distance(&z.evaluate_path(&p).adjoint()) < 1e-9);
        }
    }

    #[test]
    fn classification_examples() {
        let (c, d) = cycle_domain(4, 2);
        let (cl, w) = classify_triviality(&Cocycle::<CMat>::trivial(d.clone()), 1e-9).unwrap();
        assert!(cl.path_independent && cl.trivial_in_b);
        assert!(w.unwrap().values.iter().all(|v| v.distance(&algebra::identity(2)) < 1e-12));
        let (cl, w) = classify_triviality(&wind_cycle::<CMat>(&c, d.clone(), PI), 1e-9).unwrap();
        assert!(!cl.path_independent && !cl.trivial_in_b && w.is_none());
        assert!((cl.loop_deviation - 2.0).abs() < 1e-9);
        let z = wind_cycle::<CMat>(&c, d, 2.0 * PI);
        let (cl, w) = classify_triviality(&z, 1e-9).unwrap();
        assert!(cl.path_independent && cl.trivial_in_b);
        let w = w.unwrap();
        let iota = Cocycle::trivial(z.domain.clone());
        assert!(w.relation_failure(&iota, &z, 1e-9).is_none());
    }

    #[test]
    fn pi_z_of_wind() {
        let (c, d) = cycle_domain(4, 1);
        assert_eq!(d.pi1.generator_count(), 1);
        for s in [0.2, PI, 4.0] {
            let z = wind_cycle::<CMat>(&c, d.clone(), s);
            let rep = pi_z(&z, 1e-9).unwrap();
            let g = rep.images[0][(0, 0)];
            let ok = (g - Complex64::from_polar(1.0, s)).norm() < 1e-9 || (g - Complex64::from_polar(1.0, -s)).norm() < 1e-9;
            assert!(ok);
            let mut rng = ChaCha8Rng::seed_from_u64(5);
            assert!(homomorphism_spot_check(&z, &rep, &mut rng, 50, 1e-9));
        }
    }

    #[test]
    fn z_from_rep_round_trip() {
        let (c, d) = cycle_domain(4, 2);
        let rep = Rep1 { images: vec![algebra::identity(2) * c64(-1.0)], dim: 2 };
        let mut zr = z_from_rep(&rep, d.clone(), 1e-9).unwrap();
        assert!(zr.locality.is_none());
        assert!(zr.verify_locality(1e-9));
        assert!(validate_cocycle(&zr.cocycle, 1e-9).pass());
        let back = pi_z(&zr.cocycle, 1e-9).unwrap();
        assert!(back.images[0].distance(&rep.images[0]) < 1e-12);
        let wind = wind_cycle::<CMat>(&c, d, PI);
        assert!(equivalence_in_b(&zr.cocycle, &wind, 1e-9).is_some());
    }

    #[test]
    fn pauli_coboundaries_are_local_cocycles() {
        let s = fixtures::pauli_slice(4);
        let net = algebra::pauli_net(&s).unwrap();
        let d = Domain::new(net).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let z = random_pauli_coboundary(&mut rng, d);
        assert!(validate_cocycle(&z, 1e-9).pass());
        let (cl, _) = classify_triviality(&z, 1e-9).unwrap();
        assert!(cl.path_independent);
    }

    fn c64(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }
}
