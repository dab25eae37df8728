use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;

use super::{classify_triviality, positions, Cocycle, CocycleError, Domain, Field, Operator, PhasedPauli};
use crate::algebra::{self, CMat, LocalAlgebra, Net, PauliAlgebra, PauliString};
use crate::bitset::BitSet;
use crate::lattice::{self, CausalLattice, DiamondPoset, LatticeEmbedding, LatticeError, RegionPoset, Site};
use crate::poset::{check_refinement, CausalDisjointness, Poset};
use crate::simplicial::{self, Simplex1};

/// A refinement P̂ ⊆ P with the induced net.
#[derive(Debug, Clone)]
pub struct Refinement {
    pub full: Arc<Domain>,
    pub hat: Arc<Domain>,
    /// Full-poset index of each element of P̂.
    pub elements: Vec<usize>,
    position: Vec<Option<usize>>,
}

impl Refinement {
    pub fn new(full: Arc<Domain>, phat: &[usize]) -> Result<Refinement, CocycleError> {
        let p = &full.net.poset;
        let report =
            check_refinement(p, phat).map_err(|e| CocycleError::NotLocallyRelativelyConnected(e.to_string()))?;
        if !report.is_refinement || !report.is_locally_relatively_connected {
            return Err(CocycleError::NotLocallyRelativelyConnected(report.witnesses.join("; ")));
        }
        let (hp, _) = p.induced(phat);
        let algebras = phat.iter().map(|&i| full.net.algebra(i).clone()).collect();
        let mut net = Net::without_perp(hp, algebras)?;
        net.perp = phat
            .iter()
            .map(|&i| BitSet::from_indices(phat.len(), (0..phat.len()).filter(|&j| full.net.perp[i].contains(phat[j]))))
            .collect();
        let hat = Domain::new(net)?;
        let position = positions(p.len(), phat);
        Ok(Refinement { full, hat, elements: phat.to_vec(), position })
    }

    /// Index in P̂ of a full-poset element, if it lies in P̂.
    pub fn hat_index(&self, x: usize) -> Option<usize> {
        self.position[x]
    }

    fn below(&self, o: usize) -> Vec<usize> {
        let p = &self.full.net.poset;
        (0..self.elements.len()).filter(|&i| p.leq(self.elements[i], o)).collect()
    }

    /// f(O): O itself on P̂, otherwise the first element of P̂ below O.
    pub fn default_choice(&self) -> Vec<usize> {
        (0..self.full.len()).map(|o| self.hat_index(o).unwrap_or_else(|| self.below(o)[0])).collect()
    }

    pub fn random_choice<R: Rng>(&self, rng: &mut R) -> Vec<usize> {
        (0..self.full.len())
            .map(|o| {
                self.hat_index(o).unwrap_or_else(|| {
                    let b = self.below(o);
                    b[rng.gen_range(0..b.len())]
                })
            })
            .collect()
    }

    fn check_choice(&self, f: &[usize]) -> Result<(), CocycleError> {
        let p = &self.full.net.poset;
        if f.len() != self.full.len() {
            return Err(CocycleError::InvalidChoice("wrong length".into()));
        }
        for (o, &h) in f.iter().enumerate() {
            if h >= self.elements.len() || !p.leq(self.elements[h], o) {
                return Err(CocycleError::InvalidChoice(format!("f({}) is not below it", p.name(o))));
            }
            if self.hat_index(o).is_some_and(|i| i != h) {
                return Err(CocycleError::InvalidChoice(format!("f moves {} of the refinement", p.name(o))));
            }
        }
        Ok(())
    }
}

/// R: restriction of values to Σ₁(P̂).
pub fn restrict_cocycle<T: Operator>(r: &Refinement, z: &Cocycle<T>) -> Result<Cocycle<T>, CocycleError> {
    if !Arc::ptr_eq(&z.domain, &r.full) {
        return Err(CocycleError::DomainMismatch);
    }
    let e = &r.elements;
    Ok(Cocycle::from_fn(r.hat.clone(), |b| z.value(&Simplex1 { d1: e[b.d1], d0: e[b.d0], support: e[b.support] }).clone()))
}

pub fn restrict_field<T: Operator>(r: &Refinement, t: &Field<T>) -> Field<T> {
    Field { values: r.elements.iter().map(|&i| t.values[i].clone()).collect() }
}

/// F: F(ẑ)(b) = ẑ(p̂) for a path p̂ in P̂ from f(∂₁b) to f(∂₀b) supported below |b|.
pub fn extend_cocycle<T: Operator>(
    r: &Refinement,
    zhat: &Cocycle<T>,
    choice: &[usize],
    tol: f64,
) -> Result<Cocycle<T>, CocycleError> {
    if !Arc::ptr_eq(&zhat.domain, &r.hat) {
        return Err(CocycleError::DomainMismatch);
    }
    r.check_choice(choice)?;
    if !classify_triviality(zhat, tol)?.0.path_independent {
        return Err(CocycleError::NotPathIndependent);
    }
    let hp = &r.hat.net.poset;
    let mut below: HashMap<usize, BitSet> = HashMap::new();
    let mut memo: HashMap<(usize, usize, usize), T> = HashMap::new();
    let mut values = Vec::with_capacity(r.full.sigma1.len());
    for b in &r.full.sigma1 {
        let (from, to) = (choice[b.d1], choice[b.d0]);
        let key = (b.support, from, to);
        if let Some(v) = memo.get(&key) {
            values.push(v.clone());
            continue;
        }
        let set = below.entry(b.support).or_insert_with(|| BitSet::from_indices(r.elements.len(), r.below(b.support)));
        let path = simplicial::path_within(hp, set, from, to)
            .ok_or_else(|| CocycleError::PathNotFound(r.full.simplex_name(b)))?;
        let v = zhat.evaluate_path(&path);
        memo.insert(key, v.clone());
        values.push(v);
    }
    Ok(Cocycle { domain: r.full.clone(), values })
}

/// A net isomorphism acting by conjugation.
pub trait Conjugation<T> {
    fn conjugate(&self, v: &T) -> T;
    fn preserves(&self, a: &LocalAlgebra, tol: f64) -> bool;
}

impl Conjugation<CMat> for CMat {
    fn conjugate(&self, v: &CMat) -> CMat {
        self * v * self.adjoint()
    }

    fn preserves(&self, a: &LocalAlgebra, tol: f64) -> bool {
        a.to_dense().basis().iter().all(|b| a.contains_matrix(&(self * b * self.adjoint()), tol))
    }
}

/// A tensor product of single-qubit Clifford unitaries.
#[derive(Clone, Debug)]
pub struct CliffordLayer {
    gates: Vec<CMat>,
    images: Vec<[(Complex64, PauliString); 3]>,
}

fn letter(k: usize) -> PauliString {
    [PauliString::x_at(0), PauliString { x: 1, z: 1 }, PauliString::z_at(0)][k]
}

fn as_phased_letter(m: &CMat) -> Option<(Complex64, PauliString)> {
    (0..3).find_map(|k| {
        let q = letter(k);
        let c = (q.matrix(1) * m).trace() / 2.0;
        ((c.norm() - 1.0).abs() < 1e-9).then_some((c, q))
    })
}

impl CliffordLayer {
    pub fn new(gates: Vec<CMat>) -> Result<CliffordLayer, CocycleError> {
        let mut images = Vec::with_capacity(gates.len());
        for (j, g) in gates.iter().enumerate() {
            let mut im = [(Complex64::new(0.0, 0.0), PauliString::IDENTITY); 3];
            for (k, slot) in im.iter_mut().enumerate() {
                let m = g * letter(k).matrix(1) * g.adjoint();
                *slot = as_phased_letter(&m)
                    .ok_or_else(|| CocycleError::IncompatibleIsomorphism(format!("gate {j} is not Clifford")))?;
            }
            images.push(im);
        }
        Ok(CliffordLayer { gates, images })
    }

    pub fn identity(qubits: usize) -> CliffordLayer {
        CliffordLayer::new(vec![algebra::identity(2); qubits]).unwrap()
    }

    pub fn random<R: Rng>(rng: &mut R, qubits: usize) -> CliffordLayer {
        let h = CMat::from_row_slice(2, 2, &[1.0, 1.0, 1.0, -1.0].map(|x| Complex64::new(x / 2f64.sqrt(), 0.0)));
        let s = CMat::from_row_slice(2, 2, &[algebra::c(1.0), algebra::c(0.0), algebra::c(0.0), Complex64::i()]);
        let gates = (0..qubits)
            .map(|_| (0..6).fold(algebra::identity(2), |acc, _| if rng.gen_bool(0.5) { &h * acc } else { &s * acc }))
            .collect();
        CliffordLayer::new(gates).unwrap()
    }

    pub fn qubits(&self) -> usize {
        self.gates.len()
    }

    /// self ∘ inner, gate by gate.
    pub fn compose(&self, inner: &CliffordLayer) -> CliffordLayer {
        CliffordLayer::new(self.gates.iter().zip(&inner.gates).map(|(a, b)| a * b).collect()).unwrap()
    }

    pub fn inverse(&self) -> CliffordLayer {
        CliffordLayer::new(self.gates.iter().map(|g| g.adjoint()).collect()).unwrap()
    }

    /// The layer on source qubits carrying the gate of `map[x]` at x.
    pub fn pull(&self, map: &[usize]) -> CliffordLayer {
        CliffordLayer::new(map.iter().map(|&j| self.gates[j].clone()).collect()).unwrap()
    }

    pub fn matrix(&self) -> CMat {
        self.gates.iter().rev().fold(algebra::identity(1), |acc, g| acc.kronecker(g))
    }
}

impl Conjugation<PhasedPauli> for CliffordLayer {
    fn conjugate(&self, v: &PhasedPauli) -> PhasedPauli {
        let mut phase = v.phase;
        let mut s = PauliString::IDENTITY;
        for (j, im) in self.images.iter().enumerate() {
            let k = match (v.string.x >> j & 1, v.string.z >> j & 1) {
                (0, 0) => continue,
                (1, 0) => 0,
                (1, 1) => 1,
                _ => 2,
            };
            let (c, q) = im[k];
            phase *= c;
            s.x |= q.x << j;
            s.z |= q.z << j;
        }
        PhasedPauli { phase, string: s }
    }

    fn preserves(&self, a: &LocalAlgebra, tol: f64) -> bool {
        match a {
            LocalAlgebra::Pauli(p) => p.generators().iter().all(|g| {
                let im = self.conjugate(&PhasedPauli::new(algebra::c(1.0), *g));
                p.contains_string(&im.string)
            }),
            LocalAlgebra::Dense(_) => self.matrix().preserves(a, tol),
        }
    }
}

/// ℱ(z)(b) = ρ(z(b)); ρ must preserve every local algebra.
pub fn flip_cocycle<T: Operator, C: Conjugation<T>>(z: &Cocycle<T>, rho: &C, tol: f64) -> Result<Cocycle<T>, CocycleError> {
    let dom = &z.domain;
    if let Some(a) = (0..dom.len()).find(|&a| !rho.preserves(dom.net.algebra(a), tol)) {
        return Err(CocycleError::IncompatibleIsomorphism(format!("the algebra of {}", dom.net.poset.name(a))));
    }
    Ok(Cocycle { domain: dom.clone(), values: z.values.iter().map(|v| rho.conjugate(v)).collect() })
}

pub fn flip_field<T: Operator, C: Conjugation<T>>(t: &Field<T>, rho: &C) -> Field<T> {
    Field { values: t.values.iter().map(|v| rho.conjugate(v)).collect() }
}

fn columns(l: &CausalLattice, set: &BitSet) -> Vec<usize> {
    let mut cols: Vec<usize> = set.iter().map(|i| l.site(i).x).collect();
    cols.sort_unstable();
    cols.dedup();
    cols
}

/// One qubit per column; a region carries every string on the columns it meets.
pub fn column_net(
    l: &CausalLattice,
    poset: Poset,
    perp: CausalDisjointness,
    regions: &[BitSet],
) -> Result<Net, CocycleError> {
    let algebras = regions
        .iter()
        .map(|r| LocalAlgebra::Pauli(PauliAlgebra::on_sites(l.width, columns(l, r))))
        .collect();
    Ok(Net::new(poset, perp, algebras, None)?)
}

/// The column net over the diamonds of a lattice.
#[derive(Debug, Clone)]
pub struct LatticeNet {
    pub lattice: CausalLattice,
    pub diamonds: DiamondPoset,
    pub domain: Arc<Domain>,
}

pub fn lattice_net(l: &CausalLattice) -> Result<LatticeNet, CocycleError> {
    let dp = lattice::enumerate_diamonds(l)?;
    let perp = dp.causal_disjointness().map_err(LatticeError::from)?;
    let pts: Vec<BitSet> = dp.diamonds.iter().map(|d| d.points.clone()).collect();
    let net = column_net(l, dp.poset.clone(), perp, &pts)?;
    Ok(LatticeNet { lattice: l.clone(), diamonds: dp, domain: Domain::new(net)? })
}

/// The column net over the K^h-analog regions, with diamonds first.
pub fn region_domain(l: &CausalLattice) -> Result<(RegionPoset, Arc<Domain>), CocycleError> {
    let dp = lattice::enumerate_diamonds(l)?;
    let rp = lattice::enumerate_regions(l, &dp)?;
    let perp = CausalDisjointness::from_fn(&rp.poset, |i, j| l.disjoint(&rp.regions[i], &rp.regions[j]))
        .map_err(LatticeError::from)?;
    let net = column_net(l, rp.poset.clone(), perp, &rp.regions)?;
    let dom = Domain::new(net)?;
    Ok((rp, dom))
}

/// A lattice embedding acting on diamonds and on column qubits.
#[derive(Debug, Clone)]
pub struct DiamondEmbedding {
    pub psi: LatticeEmbedding,
    pub diamond_map: Vec<usize>,
    /// Target column of each source column.
    pub column_map: Vec<usize>,
    inverse_columns: Vec<Option<usize>>,
}

pub fn diamond_embedding(psi: &LatticeEmbedding, src: &LatticeNet, dst: &LatticeNet) -> Result<DiamondEmbedding, CocycleError> {
    if psi.src != src.lattice || psi.dst != dst.lattice {
        return Err(CocycleError::DomainMismatch);
    }
    let diamond_map = src
        .diamonds
        .diamonds
        .iter()
        .map(|d| {
            dst.diamonds
                .index_of_points(&psi.map_set(&d.points))
                .ok_or_else(|| CocycleError::SimplexOutsideImage(d.name()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let column_map: Vec<usize> =
        (0..src.lattice.width).map(|x| dst.lattice.site(psi.site_map[src.lattice.index(Site { t: 0, x })]).x).collect();
    let inverse_columns = positions(dst.lattice.width, &column_map);
    Ok(DiamondEmbedding { psi: psi.clone(), diamond_map, column_map, inverse_columns })
}

impl DiamondEmbedding {
    /// τ: a target string on image columns relabeled to source columns.
    pub fn pull_string(&self, s: &PauliString) -> Option<PauliString> {
        if (0..64).any(|j| s.support() >> j & 1 == 1 && self.inverse_columns.get(j).copied().flatten().is_none()) {
            return None;
        }
        Some(s.relabel(|j| self.inverse_columns[j].unwrap()))
    }

    pub fn pull(&self, v: &PhasedPauli) -> Option<PhasedPauli> {
        self.pull_string(&v.string).map(|s| PhasedPauli { phase: v.phase, string: s })
    }

    pub fn push_simplex(&self, b: &Simplex1) -> Simplex1 {
        let m = &self.diamond_map;
        Simplex1 { d1: m[b.d1], d0: m[b.d0], support: m[b.support] }
    }
}

/// ℰ(z)(b) = τ(z(ψ(b))).
pub fn embed_cocycle(
    z: &Cocycle<PhasedPauli>,
    e: &DiamondEmbedding,
    src: &LatticeNet,
) -> Result<Cocycle<PhasedPauli>, CocycleError> {
    let values = src
        .domain
        .sigma1
        .iter()
        .map(|b| {
            let pb = e.push_simplex(b);
            z.get(&pb)
                .and_then(|v| e.pull(v))
                .ok_or_else(|| CocycleError::SimplexOutsideImage(src.domain.simplex_name(b)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Cocycle { domain: src.domain.clone(), values })
}

pub fn embed_field(t: &Field<PhasedPauli>, e: &DiamondEmbedding) -> Result<Field<PhasedPauli>, CocycleError> {
    let values = e
        .diamond_map
        .iter()
        .map(|&j| e.pull(&t.values[j]).ok_or_else(|| CocycleError::SimplexOutsideImage(format!("diamond {j}"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Field { values })
}

/// 𝒮(ψ) = ℱ ∘ ℰ with reference unitaries U_M per lattice; the flip is Ad(U_src τ(U_dst)*).
#[derive(Debug, Clone)]
pub struct Superselection {
    pub embedding: DiamondEmbedding,
    pub flip: CliffordLayer,
}

pub fn superselection_map(e: DiamondEmbedding, u_src: &CliffordLayer, u_dst: &CliffordLayer) -> Superselection {
    let flip = u_src.compose(&u_dst.pull(&e.column_map).inverse());
    Superselection { embedding: e, flip }
}

impl Superselection {
    pub fn apply(&self, z: &Cocycle<PhasedPauli>, src: &LatticeNet, tol: f64) -> Result<Cocycle<PhasedPauli>, CocycleError> {
        flip_cocycle(&embed_cocycle(z, &self.embedding, src)?, &self.flip, tol)
    }

    pub fn apply_field(&self, t: &Field<PhasedPauli>) -> Result<Field<PhasedPauli>, CocycleError> {
        Ok(flip_field(&embed_field(t, &self.embedding)?, &self.flip))
    }
}

#[cfg(test)]
mod tests {
    use super::super::*;
    use super::*;
    use crate::algebra::full_matrix_net;
    use crate::fixtures;
    use crate::lattice::{cylinder, embed_lattice, identity_embedding, strip};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    #[test]
    fn clifford_conjugation_matches_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let layer = CliffordLayer::random(&mut rng, 3);
        let u = layer.matrix();
        for s in ["XYZ", "IZY", "YII", "XXI"] {
            let v = PhasedPauli::new(Complex64::from_polar(1.0, 0.4), PauliString::parse(s).unwrap());
            let lhs = layer.conjugate(&v).to_dense(8);
            let rhs = &u * v.to_dense(8) * u.adjoint();
            assert!(algebra::approx_eq(&lhs, &rhs, 1e-12), "{s}");
        }
    }

    #[test]
    fn flips_on_cycle4() {
        let c = fixtures::cycle(4);
        let d = Domain::new(full_matrix_net(c.poset.clone(), c.perp.clone(), 2).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let u = algebra::random_unitary(&mut rng, 2);
        let w = wind_cycle::<CMat>(&c, d.clone(), PI);
        assert!(flip_cocycle(&w, &u, 1e-9).unwrap().max_distance(&w) < 1e-12);
        let one = algebra::identity(2);
        assert!(flip_cocycle(&w, &one, 1e-9).unwrap().max_distance(&w) < 1e-15);
        let z = random_dense_coboundary(&mut rng, d.clone());
        let fz = flip_cocycle(&z, &u, 1e-9).unwrap();
        assert!(validate_cocycle(&fz, 1e-9).pass());
        assert!(classify_triviality(&fz, 1e-9).unwrap().0.path_independent);
        let back = flip_cocycle(&fz, &u.adjoint(), 1e-9).unwrap();
        assert!(back.max_distance(&z) < 1e-12);
        let n1 = intertwiner_space(&z, &w, 1e-9).unwrap().len();
        let n2 = intertwiner_space(&fz, &flip_cocycle(&w, &u, 1e-9).unwrap(), 1e-9).unwrap().len();
        assert_eq!(n1, n2);
        let n3 = intertwiner_space(&z, &z, 1e-9).unwrap().len();
        assert_eq!(n3, intertwiner_space(&fz, &fz, 1e-9).unwrap().len());
    }

    #[test]
    fn flip_conjugates_pi_z() {
        let c = fixtures::cycle(4);
        let d = Domain::new(full_matrix_net(c.poset.clone(), c.perp.clone(), 2).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let v: Vec<CMat> = (0..8).map(|_| algebra::random_unitary(&mut rng, 2)).collect();
        let z = Cocycle::coboundary(d.clone(), &v).twisted(&wind_cycle(&c, d, 0.7));
        let u = algebra::random_unitary(&mut rng, 2);
        let a = pi_z(&z, 1e-9).unwrap();
        let b = pi_z(&flip_cocycle(&z, &u, 1e-9).unwrap(), 1e-9).unwrap();
        for (x, y) in a.images.iter().zip(&b.images) {
            assert!((&u * x * u.adjoint() - y).camax() < 1e-9);
        }
    }

    #[test]
    fn dense_flip_rejects_algebra_breaking_unitary() {
        let s = fixtures::pauli_slice(3);
        let d = Domain::new(algebra::pauli_net(&s).unwrap()).unwrap();
        let z: Cocycle<CMat> = Cocycle::trivial(d);
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let u = algebra::random_unitary(&mut rng, 8);
        assert!(matches!(flip_cocycle(&z, &u, 1e-9), Err(CocycleError::IncompatibleIsomorphism(_))));
    }

    #[test]
    fn refinement_on_cycle_requires_connection() {
        let c = fixtures::cycle(4);
        let d = Domain::new(full_matrix_net(c.poset.clone(), c.perp.clone(), 1).unwrap()).unwrap();
        let bottoms: Vec<usize> = (1..=4).map(|i| c.a(i)).collect();
        assert!(matches!(Refinement::new(d.clone(), &bottoms), Err(CocycleError::NotLocallyRelativelyConnected(_))));
        let all: Vec<usize> = (0..8).collect();
        let r = Refinement::new(d.clone(), &all).unwrap();
        let iota: Cocycle<CMat> = Cocycle::trivial(d);
        let rz = restrict_cocycle(&r, &iota).unwrap();
        assert!(rz.values.iter().all(|v| (v - algebra::identity(1)).camax() == 0.0));
    }

    #[test]
    fn restrict_extend_small_lattice() {
        let l = cylinder(4, 2);
        let (rp, dom) = region_domain(&l).unwrap();
        let r = Refinement::new(dom.clone(), &rp.diamond_indices).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let z = random_pauli_coboundary(&mut rng, dom.clone());
        let zh = restrict_cocycle(&r, &z).unwrap();
        assert!(validate_cocycle(&zh, 1e-9).pass());
        let f = extend_cocycle(&r, &zh, &r.default_choice(), 1e-9).unwrap();
        assert!(validate_cocycle(&f, 1e-9).pass());
        assert!(equivalence_in_b(&f, &z, 1e-9).is_some());
        assert!(restrict_cocycle(&r, &f).unwrap().max_distance(&zh) < 1e-12);
        let g = extend_cocycle(&r, &zh, &r.random_choice(&mut rng), 1e-9).unwrap();
        assert!(equivalence_in_b(&f, &g, 1e-9).is_some());
        let iota: Cocycle<PhasedPauli> = Cocycle::trivial(r.hat.clone());
        let fi = extend_cocycle(&r, &iota, &r.default_choice(), 1e-9).unwrap();
        assert!(fi.max_distance(&Cocycle::trivial(dom.clone())) < 1e-15);
        let w = winding_cocycle::<PhasedPauli>(dom, 2.0 * PI).unwrap();
        let rw = restrict_cocycle(&r, &w).unwrap();
        assert!(classify_triviality(&rw, 1e-9).unwrap().0.path_independent);
    }

    #[test]
    fn embedding_examples() {
        let big = lattice_net(&cylinder(8, 4)).unwrap();
        let small = lattice_net(&strip(4, 4)).unwrap();
        let psi = embed_lattice(&small.lattice, &big.lattice, 0, 2).unwrap();
        let e = diamond_embedding(&psi, &small, &big).unwrap();
        let w = winding_cocycle::<PhasedPauli>(big.domain.clone(), PI).unwrap();
        assert!(!classify_triviality(&w, 1e-9).unwrap().0.path_independent);
        let ew = embed_cocycle(&w, &e, &small).unwrap();
        assert!(validate_cocycle(&ew, 1e-9).pass());
        assert!(classify_triviality(&ew, 1e-9).unwrap().0.path_independent);

        let id = diamond_embedding(&identity_embedding(&small.lattice), &small, &small).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let z = random_pauli_coboundary(&mut rng, small.domain.clone());
        assert_eq!(embed_cocycle(&z, &id, &small).unwrap().max_distance(&z), 0.0);

        let zb = random_pauli_coboundary(&mut rng, big.domain.clone()).twisted(&w);
        let u = CliffordLayer::random(&mut rng, 8);
        let lhs = embed_cocycle(&flip_cocycle(&zb, &u, 1e-9).unwrap(), &e, &small).unwrap();
        let rhs = flip_cocycle(&embed_cocycle(&zb, &e, &small).unwrap(), &u.pull(&e.column_map), 1e-9).unwrap();
        assert!(lhs.max_distance(&rhs) < 1e-12);
    }

    #[test]
    fn superselection_unit_law() {
        let n = lattice_net(&strip(3, 4)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let u = CliffordLayer::random(&mut rng, 3);
        let s = superselection_map(diamond_embedding(&identity_embedding(&n.lattice), &n, &n).unwrap(), &u, &u);
        let z = random_pauli_coboundary(&mut rng, n.domain.clone());
        assert!(s.apply(&z, &n, 1e-9).unwrap().max_distance(&z) < 1e-12);
    }
}
