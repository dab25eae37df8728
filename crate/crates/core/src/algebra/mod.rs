//! Finite-dimensional *-subalgebras of matrix algebras, states, GNS and folia.

pub mod net;
pub mod pauli;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

pub use net::*;
pub use pauli::{PauliAlgebra, PauliString};

pub type CMat = DMatrix<Complex64>;
type CVec = nalgebra::DVector<Complex64>;

/// Matrix equality tolerance (max-norm).
pub const TOL: f64 = 1e-9;
/// Singular values below this count as zero.
pub const RANK_TOL: f64 = 1e-8;
/// Default cap on the Hilbert dimension.
pub const DEFAULT_MAX_DIM: usize = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("matrix dimensions do not agree")]
    DimensionMismatch,
    #[error("dimension {0} exceeds cap {1}")]
    RankOverflow(usize, usize),
    #[error("net too large: {0}")]
    SizeOverflow(String),
    #[error("not a state: {0}")]
    NotAState(String),
    #[error("causal complement of the target is empty")]
    EmptyComplement,
    #[error("unknown element {0}")]
    UnknownElement(String),
    #[error("operation needs a dense algebra")]
    NeedsDense,
}

/// Hilbert dimension cap, overridable through `NETLAB_MAX_DIM`.
pub fn max_dim() -> usize {
    std::env::var("NETLAB_MAX_DIM").ok().and_then(|v| v.parse().ok()).unwrap_or(DEFAULT_MAX_DIM)
}

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn identity(d: usize) -> CMat {
    CMat::identity(d, d)
}

pub fn hs_inner(a: &CMat, b: &CMat) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

pub fn hs_norm(a: &CMat) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

pub fn approx_eq(a: &CMat, b: &CMat, tol: f64) -> bool {
    a.shape() == b.shape() && (a - b).camax() <= tol
}

pub fn is_unitary(u: &CMat, tol: f64) -> bool {
    approx_eq(&(u * u.adjoint()), &identity(u.nrows()), tol)
}

pub fn pauli_x() -> CMat {
    CMat::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)])
}

pub fn pauli_y() -> CMat {
    let i = Complex64::i();
    CMat::from_row_slice(2, 2, &[c(0.0), -i, i, c(0.0)])
}

pub fn pauli_z() -> CMat {
    CMat::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)])
}

/// Haar-ish random unitary from the QR decomposition of a complex Gaussian matrix.
pub fn random_unitary<R: Rng>(rng: &mut R, d: usize) -> CMat {
    let g = CMat::from_fn(d, d, |_, _| Complex64::new(gauss(rng), gauss(rng)));
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let phases = CMat::from_diagonal(&nalgebra::DVector::from_fn(d, |i, _| {
        let x = r[(i, i)];
        if x.norm() > 0.0 { x / x.norm() } else { c(1.0) }
    }));
    q * phases
}

fn gauss<R: Rng>(rng: &mut R) -> f64 {
    let u1: f64 = rng.gen_range(1e-12..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Eigen-decomposition of a Hermitian matrix (eigenvalues ascending).
///
/// Runs through the real symmetric form [[A, −B], [B, A]] of H = A + iB, whose spectrum is that of H
/// with every eigenvalue doubled; each complex eigenspace is recovered from its real one.
pub fn hermitian_eigen(h: &CMat) -> (Vec<f64>, CMat) {
    let n = h.nrows();
    let hs = (h + h.adjoint()) * c(0.5);
    let real = DMatrix::<f64>::from_fn(2 * n, 2 * n, |i, j| {
        let z = hs[(i % n, j % n)];
        match (i < n, j < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    });
    let e = SymmetricEigen::new(real);
    let mut idx: Vec<usize> = (0..2 * n).collect();
    idx.sort_by(|&a, &b| e.eigenvalues[a].total_cmp(&e.eigenvalues[b]));
    let scale = e.eigenvalues.amax().max(1.0);
    let lift = |k: usize| CVec::from_fn(n, |r, _| Complex64::new(e.eigenvectors[(r, k)], e.eigenvectors[(r + n, k)]));

    let mut vals = Vec::with_capacity(n);
    let mut cols: Vec<CVec> = Vec::with_capacity(n);
    let mut start = 0;
    while start < idx.len() {
        let mut end = start + 1;
        while end < idx.len() && e.eigenvalues[idx[end]] - e.eigenvalues[idx[end - 1]] <= 1e-9 * scale {
            end += 1;
        }
        let mut cands: Vec<CVec> = idx[start..end].iter().map(|&k| lift(k)).collect();
        for _ in 0..((end - start + 1) / 2).min(n - cols.len()) {
            for v in cands.iter_mut() {
                for _ in 0..2 {
                    for u in &cols {
                        let k = u.dotc(v);
                        *v -= u * k;
                    }
                }
            }
            let (best, norm) = cands
                .iter()
                .enumerate()
                .map(|(i, v)| (i, v.norm()))
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .expect("nonempty cluster");
            let v = cands.swap_remove(best) / c(norm);
            vals.push((v.dotc(&(&hs * &v))).re);
            cols.push(v);
        }
        start = end;
    }
    let mut order: Vec<usize> = (0..cols.len()).collect();
    order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
    let vecs = CMat::from_fn(n, order.len(), |r, k| cols[order[k]][r]);
    (order.iter().map(|&k| vals[k]).collect(), vecs)
}

/// Adds the part of `m` orthogonal to `basis` if it is not negligible.
fn extend_orthonormal(basis: &mut Vec<CMat>, m: &CMat, tol: f64) -> bool {
    let mut r = m.clone();
    for _ in 0..2 {
        for b in basis.iter() {
            let k = hs_inner(b, &r);
            r -= b * k;
        }
    }
    let n = hs_norm(&r);
    if n > tol * hs_norm(m).max(1.0) {
        basis.push(r / c(n));
        true
    } else {
        false
    }
}

/// A unital *-subalgebra of M_d with a Hilbert–Schmidt orthonormal basis.
#[derive(Clone, Debug)]
pub struct StarAlgebra {
    dim: usize,
    basis: Vec<CMat>,
}

impl StarAlgebra {
    /// The algebra spanned by an orthonormal basis; no closure is performed.
    pub fn from_orthonormal(dim: usize, basis: Vec<CMat>) -> Self {
        StarAlgebra { dim, basis }
    }

    pub fn scalars(d: usize) -> Self {
        StarAlgebra { dim: d, basis: vec![identity(d) / c((d as f64).sqrt())] }
    }

    pub fn full(d: usize) -> Self {
        let basis = (0..d * d)
            .map(|k| {
                let mut m = CMat::zeros(d, d);
                m[(k / d, k % d)] = c(1.0);
                m
            })
            .collect();
        StarAlgebra { dim: d, basis }
    }

    pub fn diagonal(d: usize) -> Self {
        let basis = (0..d)
            .map(|k| {
                let mut m = CMat::zeros(d, d);
                m[(k, k)] = c(1.0);
                m
            })
            .collect();
        StarAlgebra { dim: d, basis }
    }

    /// Hilbert dimension d.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Complex dimension of the algebra.
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[CMat] {
        &self.basis
    }

    pub fn residual(&self, m: &CMat) -> CMat {
        let mut r = m.clone();
        for b in &self.basis {
            let k = hs_inner(b, &r);
            r -= b * k;
        }
        r
    }

    pub fn contains(&self, m: &CMat, tol: f64) -> bool {
        self.residual(m).camax() <= tol
    }

    pub fn is_subalgebra_of(&self, o: &StarAlgebra, tol: f64) -> bool {
        self.excess_over(o, tol).is_none()
    }

    /// A basis element of `self` outside `o`.
    pub fn excess_over(&self, o: &StarAlgebra, tol: f64) -> Option<CMat> {
        self.basis.iter().find(|b| !o.contains(b, tol)).cloned()
    }

    pub fn span_eq(&self, o: &StarAlgebra, tol: f64) -> bool {
        self.dimension() == o.dimension() && self.is_subalgebra_of(o, tol)
    }

    pub fn is_scalars(&self) -> bool {
        self.dimension() == 1
    }

    pub fn commutes_with(&self, o: &StarAlgebra, tol: f64) -> bool {
        self.noncommuting_pair(o, tol).is_none()
    }

    pub fn noncommuting_pair(&self, o: &StarAlgebra, tol: f64) -> Option<(CMat, CMat)> {
        for a in &self.basis {
            for b in &o.basis {
                if (a * b - b * a).camax() > tol {
                    return Some((a.clone(), b.clone()));
                }
            }
        }
        None
    }

    /// Closure under products and adjoints holds to tolerance.
    pub fn is_closed(&self, tol: f64) -> bool {
        let id_ok = self.contains(&identity(self.dim), tol);
        id_ok
            && self.basis.iter().all(|a| self.contains(&a.adjoint(), tol))
            && self.basis.iter().all(|a| self.basis.iter().all(|b| self.contains(&(a * b), tol)))
    }

    pub fn commutant(&self) -> StarAlgebra {
        commutant(&self.basis, self.dim).expect("consistent dimensions")
    }

    pub fn join(&self, o: &StarAlgebra) -> StarAlgebra {
        let mut g = self.basis.clone();
        g.extend(o.basis.iter().cloned());
        star_closure(&g, self.dim).expect("consistent dimensions")
    }

    /// Span intersection.
    pub fn meet(&self, o: &StarAlgebra) -> StarAlgebra {
        // x = Σ c_i a_i lies in o iff the residuals Σ c_i r_i vanish
        let k = self.basis.len();
        let res: Vec<CMat> = self.basis.iter().map(|a| o.residual(a)).collect();
        let g = CMat::from_fn(k, k, |i, j| hs_inner(&res[i], &res[j]));
        let (vals, vecs) = hermitian_eigen(&g);
        let mut out = Vec::new();
        for (idx, v) in vals.iter().enumerate() {
            if v.abs() < RANK_TOL {
                let mut m = CMat::zeros(self.dim, self.dim);
                for i in 0..k {
                    m += &self.basis[i] * vecs[(i, idx)];
                }
                extend_orthonormal(&mut out, &m, RANK_TOL);
            }
        }
        StarAlgebra { dim: self.dim, basis: out }
    }

    pub fn center(&self) -> StarAlgebra {
        self.meet(&self.commutant())
    }

    /// Minimal central projections, from the spectral decomposition of a generic central element.
    pub fn central_projections(&self) -> Vec<CMat> {
        let z = self.center();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..8 {
            let mut h = CMat::zeros(self.dim, self.dim);
            for b in z.basis() {
                let herm = (b + b.adjoint()) * c(0.5);
                let anti = (b - b.adjoint()) * Complex64::new(0.0, -0.5);
                h += herm * c(rng.gen_range(-1.0..1.0)) + anti * c(rng.gen_range(-1.0..1.0));
            }
            let (vals, vecs) = hermitian_eigen(&h);
            let mut groups: Vec<Vec<usize>> = Vec::new();
            for i in 0..vals.len() {
                match groups.last_mut() {
                    Some(g) if (vals[i] - vals[g[0]]).abs() < 1e-6 => g.push(i),
                    _ => groups.push(vec![i]),
                }
            }
            if groups.len() == z.dimension() {
                return groups
                    .iter()
                    .map(|g| {
                        let mut p = CMat::zeros(self.dim, self.dim);
                        for &i in g {
                            let v = vecs.column(i);
                            p += &v * v.adjoint();
                        }
                        p
                    })
                    .collect();
            }
        }
        panic!("no generic central element found");
    }
}

/// Smallest unital *-subalgebra containing `gens`.
pub fn star_closure(gens: &[CMat], dim: usize) -> Result<StarAlgebra, AlgebraError> {
    if dim > max_dim() {
        return Err(AlgebraError::RankOverflow(dim, max_dim()));
    }
    if gens.iter().any(|g| g.shape() != (dim, dim)) {
        return Err(AlgebraError::DimensionMismatch);
    }
    let mut basis = Vec::new();
    extend_orthonormal(&mut basis, &identity(dim), RANK_TOL);
    for g in gens {
        extend_orthonormal(&mut basis, g, RANK_TOL);
        extend_orthonormal(&mut basis, &g.adjoint(), RANK_TOL);
    }
    let mut done = 0;
    while done < basis.len() {
        let n = basis.len();
        for i in 0..n {
            for j in 0..n {
                if i < done && j < done {
                    continue;
                }
                let p = &basis[i] * &basis[j];
                if extend_orthonormal(&mut basis, &p, RANK_TOL) {
                    let a = basis.last().unwrap().adjoint();
                    extend_orthonormal(&mut basis, &a, RANK_TOL);
                }
            }
        }
        done = n;
    }
    Ok(StarAlgebra { dim, basis })
}

/// {X : XA = AX and XA* = A*X for all A ∈ S}.
pub fn commutant(s: &[CMat], dim: usize) -> Result<StarAlgebra, AlgebraError> {
    if s.iter().any(|g| g.shape() != (dim, dim)) {
        return Err(AlgebraError::DimensionMismatch);
    }
    let n = dim * dim;
    let id = identity(dim);
    let mut h = CMat::zeros(n, n);
    for a in s.iter().flat_map(|a| [a.clone(), a.adjoint()]) {
        // vec(XA − AX) = (Aᵀ ⊗ 1 − 1 ⊗ A) vec(X), column-major
        let l = a.transpose().kronecker(&id) - id.kronecker(&a);
        h += l.adjoint() * &l;
    }
    let scale = h.camax().max(1.0);
    let (vals, vecs) = hermitian_eigen(&h);
    let mut basis = Vec::new();
    for (k, v) in vals.iter().enumerate() {
        if *v < RANK_TOL * scale {
            let m = CMat::from_column_slice(dim, dim, vecs.column(k).as_slice());
            extend_orthonormal(&mut basis, &m, RANK_TOL);
        }
    }
    Ok(StarAlgebra { dim, basis })
}

/// A local algebra, either dense or an exact Pauli-string span.
#[derive(Clone, Debug)]
pub enum LocalAlgebra {
    Dense(StarAlgebra),
    Pauli(PauliAlgebra),
}

impl LocalAlgebra {
    pub fn dim(&self) -> usize {
        match self {
            LocalAlgebra::Dense(a) => a.dim(),
            LocalAlgebra::Pauli(p) => p.hilbert_dim(),
        }
    }

    /// Complex dimension of the algebra.
    pub fn dimension(&self) -> u128 {
        match self {
            LocalAlgebra::Dense(a) => a.dimension() as u128,
            LocalAlgebra::Pauli(p) => p.dimension(),
        }
    }

    pub fn is_scalars(&self) -> bool {
        match self {
            LocalAlgebra::Dense(a) => a.is_scalars(),
            LocalAlgebra::Pauli(p) => p.is_scalars(),
        }
    }

    pub fn contains_matrix(&self, m: &CMat, tol: f64) -> bool {
        match self {
            LocalAlgebra::Dense(a) => a.contains(m, tol),
            LocalAlgebra::Pauli(p) => p.contains_matrix(m, tol),
        }
    }

    pub fn to_dense(&self) -> StarAlgebra {
        match self {
            LocalAlgebra::Dense(a) => a.clone(),
            LocalAlgebra::Pauli(p) => StarAlgebra::from_orthonormal(p.hilbert_dim(), p.dense_basis()),
        }
    }

    pub fn scalars_like(&self) -> LocalAlgebra {
        match self {
            LocalAlgebra::Dense(a) => LocalAlgebra::Dense(StarAlgebra::scalars(a.dim())),
            LocalAlgebra::Pauli(p) => LocalAlgebra::Pauli(PauliAlgebra::scalars(p.qubits())),
        }
    }

    /// Witness description of an element of `self` outside `o`.
    pub fn excess_over(&self, o: &LocalAlgebra) -> Option<String> {
        match (self, o) {
            (LocalAlgebra::Pauli(a), LocalAlgebra::Pauli(b)) => a.excess_over(b).map(|g| g.label(a.qubits())),
            _ => self.to_dense().excess_over(&o.to_dense(), TOL).map(|m| format!("{m:.3}")),
        }
    }

    pub fn is_subalgebra_of(&self, o: &LocalAlgebra) -> bool {
        self.excess_over(o).is_none()
    }

    pub fn span_eq(&self, o: &LocalAlgebra) -> bool {
        self.dimension() == o.dimension() && self.is_subalgebra_of(o)
    }

    pub fn noncommuting_pair(&self, o: &LocalAlgebra) -> Option<String> {
        match (self, o) {
            (LocalAlgebra::Pauli(a), LocalAlgebra::Pauli(b)) => {
                a.noncommuting_pair(b).map(|(x, y)| format!("{} {}", x.label(a.qubits()), y.label(a.qubits())))
            }
            _ => self.to_dense().noncommuting_pair(&o.to_dense(), TOL).map(|_| "noncommuting basis pair".into()),
        }
    }

    pub fn commutant(&self) -> LocalAlgebra {
        match self {
            LocalAlgebra::Dense(a) => LocalAlgebra::Dense(a.commutant()),
            LocalAlgebra::Pauli(p) => LocalAlgebra::Pauli(p.commutant()),
        }
    }

    pub fn join(&self, o: &LocalAlgebra) -> LocalAlgebra {
        match (self, o) {
            (LocalAlgebra::Pauli(a), LocalAlgebra::Pauli(b)) => LocalAlgebra::Pauli(a.join(b)),
            _ => LocalAlgebra::Dense(self.to_dense().join(&o.to_dense())),
        }
    }

    pub fn meet(&self, o: &LocalAlgebra) -> LocalAlgebra {
        match (self, o) {
            (LocalAlgebra::Pauli(a), LocalAlgebra::Pauli(b)) => LocalAlgebra::Pauli(a.meet(b)),
            _ => LocalAlgebra::Dense(self.to_dense().meet(&o.to_dense())),
        }
    }

    pub fn central_projections(&self) -> Vec<CMat> {
        match self {
            LocalAlgebra::Dense(a) => a.central_projections(),
            LocalAlgebra::Pauli(p) => p.central_projections(),
        }
    }
}

/// A density matrix on the common Hilbert space.
#[derive(Clone, Debug)]
pub struct State {
    rho: CMat,
}

impl State {
    pub fn new(rho: CMat) -> Result<State, AlgebraError> {
        if rho.nrows() != rho.ncols() {
            return Err(AlgebraError::DimensionMismatch);
        }
        if (&rho - rho.adjoint()).camax() > 1e-10 {
            return Err(AlgebraError::NotAState("not Hermitian".into()));
        }
        let tr = rho.trace();
        if (tr - c(1.0)).norm() > 1e-10 {
            return Err(AlgebraError::NotAState(format!("trace {tr}")));
        }
        let (vals, _) = hermitian_eigen(&rho);
        if vals.first().is_some_and(|&v| v < -1e-10) {
            return Err(AlgebraError::NotAState(format!("eigenvalue {}", vals[0])));
        }
        Ok(State { rho })
    }

    pub fn pure(psi: &nalgebra::DVector<Complex64>) -> Result<State, AlgebraError> {
        let n = psi.norm();
        let v = psi / c(n);
        State::new(&v * v.adjoint())
    }

    pub fn diagonal(p: &[f64]) -> Result<State, AlgebraError> {
        State::new(CMat::from_diagonal(&nalgebra::DVector::from_iterator(p.len(), p.iter().map(|&x| c(x)))))
    }

    pub fn maximally_mixed(d: usize) -> State {
        State { rho: identity(d) / c(d as f64) }
    }

    pub fn random<R: Rng>(rng: &mut R, d: usize) -> State {
        let g = CMat::from_fn(d, d, |_, _| Complex64::new(gauss(rng), gauss(rng)));
        // random rank to get nonfaithful states too
        let rank = rng.gen_range(1..=d);
        let g = g.columns(0, rank).into_owned();
        let m = &g * g.adjoint();
        let tr = m.trace();
        State { rho: m / tr }
    }

    pub fn rho(&self) -> &CMat {
        &self.rho
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    pub fn expect(&self, a: &CMat) -> Complex64 {
        (&self.rho * a).trace()
    }
}

/// GNS representation of a state restricted to an algebra.
#[derive(Clone, Debug)]
pub struct GnsRep {
    pub algebra: StarAlgebra,
    pub carrier_dim: usize,
    /// Image of each algebra basis element.
    pub rep: Vec<CMat>,
    pub cyclic_vector: nalgebra::DVector<Complex64>,
    coords: CMat,
    state: State,
}

impl GnsRep {
    /// Representative of an arbitrary algebra element.
    pub fn represent(&self, a: &CMat) -> CMat {
        let k = self.algebra.dimension();
        let b = self.algebra.basis();
        let mut out = CMat::zeros(self.carrier_dim, self.carrier_dim);
        // ⟨e_k, a e_l⟩ with e_l = Σ_j coords[j,l] b_j
        for p in 0..self.carrier_dim {
            for q in 0..self.carrier_dim {
                let mut s = Complex64::new(0.0, 0.0);
                for i in 0..k {
                    for j in 0..k {
                        let w = self.coords[(i, p)].conj() * self.coords[(j, q)];
                        if w.norm() > 0.0 {
                            s += w * self.state.expect(&(b[i].adjoint() * a * &b[j]));
                        }
                    }
                }
                out[(p, q)] = s;
            }
        }
        out
    }

    /// Unit-preserving *-homomorphism and vector-state checks.
    pub fn verify(&self, tol: f64) -> bool {
        let b = self.algebra.basis();
        let d = self.algebra.dim();
        let one = self.represent(&identity(d));
        if !approx_eq(&one, &identity(self.carrier_dim), tol) {
            return false;
        }
        for (i, x) in b.iter().enumerate() {
            if !approx_eq(&self.represent(&x.adjoint()), &self.rep[i].adjoint(), tol) {
                return false;
            }
            let w = (self.cyclic_vector.adjoint() * &self.rep[i] * &self.cyclic_vector)[(0, 0)];
            if (w - self.state.expect(x)).norm() > tol {
                return false;
            }
            for (j, y) in b.iter().enumerate() {
                if !approx_eq(&self.represent(&(x * y)), &(&self.rep[i] * &self.rep[j]), tol) {
                    return false;
                }
            }
        }
        // cyclicity: the vectors rep(b)Ω span the carrier
        let span = CMat::from_fn(self.carrier_dim, b.len(), |r, k| (&self.rep[k] * &self.cyclic_vector)[r]);
        span.clone().svd(false, false).singular_values.iter().filter(|&&s| s > RANK_TOL).count() == self.carrier_dim
    }
}

pub fn gns_rep(omega: &State, a: &StarAlgebra) -> Result<GnsRep, AlgebraError> {
    if omega.dim() != a.dim() {
        return Err(AlgebraError::DimensionMismatch);
    }
    let b = a.basis();
    let k = b.len();
    let g = CMat::from_fn(k, k, |i, j| omega.expect(&(b[i].adjoint() * &b[j])));
    let (vals, vecs) = hermitian_eigen(&g);
    let keep: Vec<usize> = (0..k).filter(|&i| vals[i] > RANK_TOL).collect();
    let n = keep.len();
    let coords = CMat::from_fn(k, n, |i, l| vecs[(i, keep[l])] / c(vals[keep[l]].sqrt()));
    let mut rep = GnsRep {
        algebra: a.clone(),
        carrier_dim: n,
        rep: Vec::new(),
        cyclic_vector: nalgebra::DVector::zeros(n),
        coords,
        state: omega.clone(),
    };
    rep.rep = b.iter().map(|x| rep.represent(x)).collect();
    // Ω = [1]; ⟨e_p, Ω⟩ = Σ_i conj(coords[i,p]) ω(b_i*)
    rep.cyclic_vector = nalgebra::DVector::from_fn(n, |p, _| {
        (0..k).map(|i| rep.coords[(i, p)].conj() * omega.expect(&b[i].adjoint())).sum()
    });
    Ok(rep)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FoliumReport {
    pub same_folium: bool,
    pub omega_in_folium_of_sigma: bool,
    pub sigma_in_folium_of_omega: bool,
}

/// Central support: indices of minimal central projections with nonzero weight.
pub fn central_support(state: &State, projections: &[CMat]) -> Vec<usize> {
    (0..projections.len()).filter(|&k| state.expect(&projections[k]).re > TOL).collect()
}

pub fn folium_compare(omega: &State, sigma: &State, a: &LocalAlgebra) -> Result<FoliumReport, AlgebraError> {
    if omega.dim() != a.dim() || sigma.dim() != a.dim() {
        return Err(AlgebraError::DimensionMismatch);
    }
    let projs = a.central_projections();
    let so = central_support(omega, &projs);
    let ss = central_support(sigma, &projs);
    let sub = |x: &[usize], y: &[usize]| x.iter().all(|k| y.contains(k));
    Ok(FoliumReport {
        same_folium: so == ss,
        omega_in_folium_of_sigma: sub(&so, &ss),
        sigma_in_folium_of_omega: sub(&ss, &so),
    })
}

/// A proper projection in a local algebra and why no isometry onto it exists.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BorchersWitness {
    pub projection: String,
    pub projection_trace: usize,
    pub carrier_dim: usize,
    pub isometry_exists: bool,
}

/// For each projection (1 ± P)/2 with P a non-identity string of the algebra, an isometry V
/// with V*V = 1 and VV* = E inside any M_D ⊇ M_d would force tr E = D; the trace is D/2.
pub fn borchers_check(a: &PauliAlgebra) -> Vec<BorchersWitness> {
    let d = a.hilbert_dim();
    let mut out = Vec::new();
    for g in a.generators() {
        for sign in ['+', '-'] {
            let e = (identity(d) + g.matrix(a.qubits()) * c(if sign == '+' { 1.0 } else { -1.0 })) * c(0.5);
            let tr = e.trace().re.round() as usize;
            out.push(BorchersWitness {
                projection: format!("(1{sign}{})/2", g.label(a.qubits())),
                projection_trace: tr,
                carrier_dim: d,
                isometry_exists: tr == d,
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::{prop_assert, prop_assert_eq, prop_assume, proptest, ProptestConfig};

    #[test]
    fn closure_examples() {
        assert_eq!(star_closure(&[], 2).unwrap().dimension(), 1);
        assert_eq!(star_closure(&[pauli_x()], 2).unwrap().dimension(), 2);
        let m2 = star_closure(&[pauli_x(), pauli_z()], 2).unwrap();
        assert_eq!(m2.dimension(), 4);
        assert!(m2.contains(&pauli_y(), TOL));
        assert!(matches!(star_closure(&[pauli_x()], 3), Err(AlgebraError::DimensionMismatch)));
    }

    #[test]
    fn commutant_examples() {
        assert!(StarAlgebra::full(2).commutant().is_scalars());
        let diag = StarAlgebra::diagonal(2);
        assert!(diag.commutant().span_eq(&diag, TOL));
        assert_eq!(StarAlgebra::scalars(3).commutant().dimension(), 9);
    }

    /// U (⊕ M_{n_i} ⊗ 1_{m_i}) U*, with known dimension Σn² and commutant dimension Σm².
    fn block_algebra<R: Rng>(rng: &mut R, blocks: &[(usize, usize)]) -> (StarAlgebra, usize, usize) {
        let d: usize = blocks.iter().map(|(n, m)| n * m).sum();
        let u = random_unitary(rng, d);
        let mut gens = Vec::new();
        let mut off = 0;
        for &(n, m) in blocks {
            for i in 0..n {
                for j in 0..n {
                    let mut g = CMat::zeros(d, d);
                    for r in 0..m {
                        g[(off + i * m + r, off + j * m + r)] = c(1.0);
                    }
                    gens.push(&u * g * u.adjoint());
                }
            }
            off += n * m;
        }
        let a = star_closure(&gens, d).unwrap();
        let dim_a = blocks.iter().map(|(n, _)| n * n).sum();
        let dim_c = blocks.iter().map(|(_, m)| m * m).sum();
        (a, dim_a, dim_c)
    }

    #[test]
    fn eigenpairs_of_degenerate_spectra() {
        let mut rng = ChaCha8Rng::seed_from_u64(2190552184);
        let (a, _, _) = block_algebra(&mut rng, &[(2, 1)]);
        let id = identity(2);
        let mut h = CMat::zeros(4, 4);
        for b in a.basis.iter().flat_map(|b| [b.clone(), b.adjoint()]) {
            let l = b.transpose().kronecker(&id) - id.kronecker(&b);
            h += l.adjoint() * &l;
        }
        let u = random_unitary(&mut rng, 3);
        let d = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0), c(1.0), c(3.0)]));
        for m in [h, &u * d * u.adjoint()] {
            let (vals, vecs) = hermitian_eigen(&m);
            assert!((vecs.adjoint() * &vecs - identity(m.nrows())).camax() < 1e-12);
            for (k, v) in vals.iter().enumerate() {
                let x = vecs.column(k).into_owned();
                assert!((&m * &x - &x * c(*v)).camax() < 1e-10);
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn double_commutant(seed in 0u64..1 << 32, raw in proptest::collection::vec((1usize..3, 1usize..3), 1..3)) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let blocks: Vec<(usize, usize)> = raw.into_iter().take_while({
                let mut tot = 0;
                move |(n, m)| { tot += n * m; tot <= 8 }
            }).collect();
            prop_assume!(!blocks.is_empty());
            let (a, dim_a, dim_c) = block_algebra(&mut rng, &blocks);
            prop_assert_eq!(a.dimension(), dim_a);
            prop_assert!(a.is_closed(1e-9));
            let ca = a.commutant();
            prop_assert_eq!(ca.dimension(), dim_c);
            prop_assert!(ca.commutant().span_eq(&a, 1e-8));
        }

        #[test]
        fn closure_contains_generators(seed in 0u64..1000, d in 2usize..4, k in 0usize..3) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let gens: Vec<CMat> = (0..k).map(|_| {
                let u = random_unitary(&mut rng, d);
                let p = CMat::from_diagonal(&nalgebra::DVector::from_fn(d, |i, _| c(if i == 0 { 1.0 } else { 0.0 })));
                &u * p * u.adjoint()
            }).collect();
            let a = star_closure(&gens, d).unwrap();
            prop_assert!(a.contains(&identity(d), 1e-9));
            for g in &gens {
                prop_assert!(a.contains(g, 1e-9));
            }
            prop_assert!(a.dimension() <= d * d);
            let again = star_closure(a.basis(), d).unwrap();
            prop_assert!(again.span_eq(&a, 1e-8));
        }
    }

    #[test]
    fn gns_examples() {
        let m2 = StarAlgebra::full(2);
        let pure = State::diagonal(&[1.0, 0.0]).unwrap();
        let g = gns_rep(&pure, &m2).unwrap();
        assert_eq!(g.carrier_dim, 2);
        assert!(g.verify(1e-8));
        let mixed = State::maximally_mixed(2);
        let g = gns_rep(&mixed, &m2).unwrap();
        assert_eq!(g.carrier_dim, 4);
        assert!(g.verify(1e-8));
        let g = gns_rep(&pure, &StarAlgebra::scalars(2)).unwrap();
        assert_eq!(g.carrier_dim, 1);
        assert!(g.verify(1e-8));
    }

    #[test]
    fn state_validation() {
        assert!(State::diagonal(&[0.5, 0.6]).is_err());
        assert!(State::diagonal(&[1.5, -0.5]).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = State::random(&mut rng, 4);
        assert!(State::new(s.rho().clone()).is_ok());
    }

    #[test]
    fn folium_examples() {
        let m2 = LocalAlgebra::Dense(StarAlgebra::full(2));
        let cc = LocalAlgebra::Dense(StarAlgebra::diagonal(2));
        let p = State::diagonal(&[1.0, 0.0]).unwrap();
        let q = State::diagonal(&[0.0, 1.0]).unwrap();
        let h = State::diagonal(&[0.5, 0.5]).unwrap();
        assert!(folium_compare(&p, &h, &m2).unwrap().same_folium);
        let r = folium_compare(&p, &q, &cc).unwrap();
        assert!(!r.same_folium && !r.omega_in_folium_of_sigma && !r.sigma_in_folium_of_omega);
        let r = folium_compare(&p, &h, &cc).unwrap();
        assert!(!r.same_folium && r.omega_in_folium_of_sigma && !r.sigma_in_folium_of_omega);
    }

    #[test]
    fn borchers_obstruction() {
        let a = PauliAlgebra::on_sites(3, [1]);
        let w = borchers_check(&a);
        assert_eq!(w.len(), 4);
        assert!(w.iter().all(|x| !x.isometry_exists && x.projection_trace * 2 == x.carrier_dim));
    }

    #[test]
    fn pauli_and_dense_agree() {
        let p = PauliAlgebra::on_sites(2, [0]);
        let d = LocalAlgebra::Pauli(p.clone()).to_dense();
        assert_eq!(d.dimension(), 4);
        assert!(d.is_closed(1e-9));
        let dc = d.commutant();
        let pc = LocalAlgebra::Pauli(p.commutant()).to_dense();
        assert!(dc.span_eq(&pc, 1e-8));
    }
}
