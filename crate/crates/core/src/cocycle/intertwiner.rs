use rand::Rng;

use super::{classify_triviality, Cocycle, CocycleError, Field, Operator};
use crate::algebra::{self, hermitian_eigen, hs_inner, max_dim, AlgebraError, CMat, LocalAlgebra};
use crate::bitset::BitSet;
use crate::simplicial::{self, Path, Simplex1};

/// t_a ∈ 𝔄(a) with t_{∂₀b} z(b) = z₁(b) t_{∂₁b}.
pub type Intertwiner = Field<CMat>;

fn dense_values<T: Operator>(z: &Cocycle<T>) -> Vec<CMat> {
    let d = z.dim();
    z.values.iter().map(|v| v.to_dense(d)).collect()
}

fn commutant_generators(a: &LocalAlgebra, dim: usize) -> Vec<CMat> {
    match a {
        LocalAlgebra::Pauli(p) => {
            let n = dim.trailing_zeros() as usize;
            p.commutant().generators().iter().map(|g| g.matrix(n)).collect()
        }
        LocalAlgebra::Dense(s) => s.commutant().basis().to_vec(),
    }
}

/// Restricts an HS-orthonormal basis to the joint kernel of a linear map with block images.
fn shrink(basis: Vec<CMat>, map: impl Fn(&CMat) -> Vec<CMat>) -> Vec<CMat> {
    if basis.is_empty() {
        return basis;
    }
    let images: Vec<Vec<CMat>> = basis.iter().map(&map).collect();
    let k = basis.len();
    let gram = CMat::from_fn(k, k, |i, j| images[i].iter().zip(&images[j]).map(|(a, b)| hs_inner(a, b)).sum());
    let (vals, vecs) = hermitian_eigen(&gram);
    let scale = vals.last().copied().unwrap_or(0.0).max(1.0);
    (0..k)
        .filter(|&c| vals[c] <= 1e-12 * scale)
        .map(|c| basis.iter().enumerate().fold(CMat::zeros(basis[0].nrows(), basis[0].ncols()), |acc, (j, v)| acc + v * vecs[(j, c)]))
        .collect()
}

/// Basis of the intertwiner space (z, z₁).
///
/// Along tree paths t_a = z₁(p_a) t₀ z(p_a)*, so the space is cut out inside 𝔄(a₀) by
/// locality at every element and by invariance under the π₁ generator loops.
pub fn intertwiner_space<T: Operator>(z: &Cocycle<T>, z1: &Cocycle<T>, tol: f64) -> Result<Vec<Intertwiner>, CocycleError> {
    if !std::sync::Arc::ptr_eq(&z.domain, &z1.domain) {
        return Err(CocycleError::DomainMismatch);
    }
    let dom = &z.domain;
    dom.require_connected()?;
    let dim = dom.dim();
    if dim > max_dim() {
        return Err(AlgebraError::RankOverflow(dim, max_dim()).into());
    }
    let a0 = dom.basepoint();
    let transport: Vec<(CMat, CMat)> = (0..dom.len())
        .map(|a| {
            let p = dom.tree_path(a);
            (z.evaluate_path(p).to_dense(dim), z1.evaluate_path(p).to_dense(dim))
        })
        .collect();
    let mut basis = dom.net.algebra(a0).to_dense().basis().to_vec();
    for g in 0..dom.pi1.generator_count() {
        let lp = dom.pi1.generator_loop(g);
        let (zg, z1g) = (z.evaluate_path(&lp).to_dense(dim), z1.evaluate_path(&lp).to_dense(dim));
        basis = shrink(basis, |t| vec![&z1g * t * zg.adjoint() - t]);
    }
    for a in 0..dom.len() {
        if a == a0 {
            continue;
        }
        let comm = commutant_generators(dom.net.algebra(a), dim);
        let (za, z1a) = &transport[a];
        basis = shrink(basis, |t| {
            let ta = z1a * t * za.adjoint();
            comm.iter().map(|c| &ta * c - c * &ta).collect()
        });
    }
    let out: Vec<Intertwiner> = basis
        .iter()
        .map(|t0| Field { values: transport.iter().map(|(za, z1a)| z1a * t0 * za.adjoint()).collect() })
        .collect();
    let zd = Cocycle { domain: z.domain.clone(), values: dense_values(z) };
    let z1d = Cocycle { domain: z.domain.clone(), values: dense_values(z1) };
    for t in &out {
        if let Some(b) = t.relation_failure(&zd, &z1d, tol * 1e3) {
            return Err(CocycleError::NotIntertwiner(dom.simplex_name(&b)));
        }
    }
    Ok(out)
}

/// An intertwiner known on a subset of elements.
#[derive(Clone, Debug)]
pub struct SubIntertwiner {
    pub elements: Vec<usize>,
    pub values: Vec<CMat>,
}

#[derive(Clone, Debug)]
pub struct IntertwinerExtension {
    pub values: Vec<CMat>,
    pub intertwines: bool,
    pub local: bool,
    pub locality_failures: Vec<String>,
}

/// Paths from `a0` to every element, shortest first.
pub fn bfs_paths(p: &crate::poset::Poset, a0: usize) -> Vec<Path> {
    let all = BitSet::full(p.len());
    (0..p.len()).map(|a| simplicial::path_within(p, &all, a0, a).expect("connected poset")).collect()
}

/// Paths from `a0` that first wander randomly and return before heading out.
pub fn detour_paths<R: Rng>(rng: &mut R, p: &crate::poset::Poset, a0: usize) -> Vec<Path> {
    let direct = bfs_paths(p, a0);
    (0..p.len())
        .map(|a| {
            let len = rng.gen_range(1..6);
            let walk = simplicial::random_path(rng, p, Some(a0), len);
            let back = direct[walk.end()].reverse();
            let lp = simplicial::compose_paths(&back, &walk).unwrap();
            simplicial::compose_paths(&direct[a], &lp).unwrap()
        })
        .collect()
}

/// t̂_a = z₁(p_a) t_{a₀} z(p_a)* for paths p_a from a₀.
pub fn extend_intertwiner<T: Operator>(
    t: &SubIntertwiner,
    z: &Cocycle<T>,
    z1: &Cocycle<T>,
    a0: usize,
    paths: &[Path],
    tol: f64,
) -> Result<IntertwinerExtension, CocycleError> {
    let dom = &z.domain;
    let dim = dom.dim();
    let pos = super::positions(dom.len(), &t.elements);
    for (i, b) in dom.sigma1.iter().enumerate() {
        if let (Some(i0), Some(i1), Some(_)) = (pos[b.d0], pos[b.d1], pos[b.support]) {
            let lhs = &t.values[i0] * z.values[i].to_dense(dim);
            let rhs = z1.values[i].to_dense(dim) * &t.values[i1];
            if (lhs - rhs).camax() > tol {
                return Err(CocycleError::NotIntertwiner(dom.simplex_name(b)));
            }
        }
    }
    for c in [z, z1] {
        if !classify_triviality(c, tol)?.0.path_independent {
            return Err(CocycleError::NotPathIndependent);
        }
    }
    let t0 = pos[a0].map(|i| t.values[i].clone()).ok_or_else(|| CocycleError::NotIntertwiner("a0 outside the subset".into()))?;
    let values: Vec<CMat> = (0..dom.len())
        .map(|a| {
            let p = &paths[a];
            z1.evaluate_path(p).to_dense(dim) * &t0 * z.evaluate_path(p).to_dense(dim).adjoint()
        })
        .collect();
    let intertwines = dom.sigma1.iter().enumerate().all(|(i, b)| {
        let lhs = &values[b.d0] * z.values[i].to_dense(dim);
        let rhs = z1.values[i].to_dense(dim) * &values[b.d1];
        (lhs - rhs).camax() <= tol
    });
    let locality_failures: Vec<String> = (0..dom.len())
        .filter(|&a| !dom.net.algebra(a).contains_matrix(&values[a], tol))
        .map(|a| dom.net.poset.name(a).to_string())
        .collect();
    Ok(IntertwinerExtension { values, intertwines, local: locality_failures.is_empty(), locality_failures })
}

/// Whether `t` is a local intertwiner in (z, z₁); returns the first failure.
pub fn intertwiner_failure<T: Operator>(t: &Intertwiner, z: &Cocycle<T>, z1: &Cocycle<T>, tol: f64) -> Option<String> {
    let dom = &z.domain;
    if let Some(a) = (0..dom.len()).find(|&a| !dom.net.algebra(a).contains_matrix(&t.values[a], tol)) {
        return Some(format!("t at {} is not local", dom.net.poset.name(a)));
    }
    let zd = Cocycle { domain: dom.clone(), values: dense_values(z) };
    let z1d = Cocycle { domain: dom.clone(), values: dense_values(z1) };
    t.relation_failure(&zd, &z1d, tol).map(|b: Simplex1| dom.simplex_name(&b))
}

/// The identity intertwiner 1_z.
pub fn identity_intertwiner(dom: &super::Domain) -> Intertwiner {
    Field { values: vec![algebra::identity(dom.dim()); dom.len()] }
}

#[cfg(test)]
mod tests {
    use super::super::*;
    use super::*;
    use crate::algebra::{full_matrix_net, pauli_net};
    use crate::fixtures;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    #[test]
    fn iota_on_pauli6_is_irreducible() {
        let s = fixtures::pauli_slice(6);
        let d = Domain::new(pauli_net(&s).unwrap()).unwrap();
        let iota: Cocycle<PhasedPauli> = Cocycle::trivial(d);
        let space = intertwiner_space(&iota, &iota, 1e-9).unwrap();
        assert_eq!(space.len(), 1);
    }

    #[test]
    fn wind_pi_and_iota_are_inequivalent() {
        let c = fixtures::cycle(4);
        let d = Domain::new(full_matrix_net(c.poset.clone(), c.perp.clone(), 2).unwrap()).unwrap();
        let w = wind_cycle::<CMat>(&c, d.clone(), PI);
        let iota = Cocycle::trivial(d);
        assert!(intertwiner_space(&w, &iota, 1e-9).unwrap().is_empty());
        assert_eq!(intertwiner_space(&iota, &iota, 1e-9).unwrap().len(), 4);
    }

    #[test]
    fn self_intertwiners_contain_identity() {
        let c = fixtures::cycle(4);
        let d = Domain::new(full_matrix_net(c.poset.clone(), c.perp.clone(), 3).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let z = random_dense_coboundary(&mut rng, d.clone()).twisted(&wind_cycle(&c, d.clone(), rng.gen_range(0.0..6.0)));
            let space = intertwiner_space(&z, &z, 1e-9).unwrap();
            assert!(!space.is_empty());
            let one = identity_intertwiner(&d);
            assert!(intertwiner_failure(&one, &z, &z, 1e-9).is_none());
            // 1 lies in the span: its residual against the orthonormal t₀ at the base vanishes
            let b = d.basepoint();
            let mut r = one.values[b].clone();
            for t in &space {
                let k = hs_inner(&t.values[b], &r);
                r -= &t.values[b] * k;
            }
            assert!(r.camax() < 1e-8);
        }
    }

    #[test]
    fn scalar_extension_from_sub_arc() {
        let c = fixtures::cycle(4);
        let d = Domain::new(full_matrix_net(c.poset.clone(), c.perp.clone(), 2).unwrap()).unwrap();
        let z = wind_cycle::<CMat>(&c, d.clone(), 2.0 * PI);
        let iota = Cocycle::trivial(d.clone());
        let (a1, o1, a2) = (c.a(1), c.o(1), c.a(2));
        let phase = |x: usize| {
            let p = simplicial::path_within(&c.poset, &BitSet::full(8), a1, x).unwrap();
            z.evaluate_path(&p).adjoint()
        };
        let sub = SubIntertwiner { elements: vec![a1, o1, a2], values: vec![phase(a1), phase(o1), phase(a2)] };
        let ext = extend_intertwiner(&sub, &z, &iota, a1, &bfs_paths(&c.poset, a1), 1e-9).unwrap();
        assert!(ext.intertwines && ext.local);
        let alt = extend_intertwiner(&sub, &z, &iota, a2, &bfs_paths(&c.poset, a2), 1e-9).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let det = extend_intertwiner(&sub, &z, &iota, a1, &detour_paths(&mut rng, &c.poset, a1), 1e-9).unwrap();
        for a in 0..8 {
            assert!((&ext.values[a] - &alt.values[a]).camax() < 1e-9);
            assert!((&ext.values[a] - &det.values[a]).camax() < 1e-9);
        }
        let w = wind_cycle::<CMat>(&c, d, PI);
        assert!(matches!(
            extend_intertwiner(&sub, &w, &iota, a1, &bfs_paths(&c.poset, a1), 1e-9),
            Err(CocycleError::NotIntertwiner(_)) | Err(CocycleError::NotPathIndependent)
        ));
    }
}
