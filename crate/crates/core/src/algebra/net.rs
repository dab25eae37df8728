//! Nets of local algebras over a poset with causal disjointness.

use serde::Serialize;

use super::{
    folium_compare, max_dim, pauli::MAX_QUBITS, AlgebraError, FoliumReport, LocalAlgebra, PauliAlgebra, StarAlgebra, State,
};
use crate::bitset::BitSet;
use crate::fixtures::SliceIntervals;
use crate::lattice::DiamondPoset;
use crate::poset::{CausalDisjointness, Poset};

/// Point sets behind the index elements, for local definiteness and punctured duality.
#[derive(Clone, Debug)]
pub struct NetGeometry {
    pub point_names: Vec<String>,
    /// Points of each index element.
    pub regions: Vec<BitSet>,
    /// Closure analog of each index element.
    pub closures: Vec<BitSet>,
    /// For each point, the points causally disjoint from it.
    pub point_perp: Vec<BitSet>,
}

impl NetGeometry {
    pub fn points(&self) -> usize {
        self.point_names.len()
    }

    /// Whether every point of `set` is causally disjoint from point `x`.
    pub fn disjoint_from_point(&self, set: &BitSet, x: usize) -> bool {
        set.iter().all(|p| self.point_perp[x].contains(p))
    }

    pub fn for_diamonds(dp: &DiamondPoset) -> NetGeometry {
        let l = &dp.lattice;
        let n = l.sites();
        NetGeometry {
            point_names: (0..n).map(|i| format!("{:?}", l.site(i))).collect(),
            regions: dp.diamonds.iter().map(|d| d.points.clone()).collect(),
            closures: dp.diamonds.iter().map(|d| l.closure(&d.points)).collect(),
            point_perp: (0..n)
                .map(|i| BitSet::from_indices(n, (0..n).filter(|&j| !l.related(l.site(i), l.site(j)))))
                .collect(),
        }
    }

    /// Single circular slice: points are sites, distinct sites are causally disjoint.
    pub fn for_slice(s: &SliceIntervals) -> NetGeometry {
        let k = s.k;
        NetGeometry {
            point_names: (0..k).map(|i| format!("x{i}")).collect(),
            regions: s.bases.iter().map(|b| BitSet::from_indices(k, b.iter().copied())).collect(),
            closures: s
                .bases
                .iter()
                .map(|b| BitSet::from_indices(k, b.iter().flat_map(|&x| [(x + k - 1) % k, x, (x + 1) % k])))
                .collect(),
            point_perp: (0..k).map(|i| BitSet::from_indices(k, (0..k).filter(|&j| j != i))).collect(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Net {
    pub poset: Poset,
    /// Rows of the ⊥ relation (empty rows when the net carries none).
    pub perp: Vec<BitSet>,
    pub algebras: Vec<LocalAlgebra>,
    pub geometry: Option<NetGeometry>,
    dim: usize,
}

impl Net {
    pub fn new(
        poset: Poset,
        perp: CausalDisjointness,
        algebras: Vec<LocalAlgebra>,
        geometry: Option<NetGeometry>,
    ) -> Result<Net, AlgebraError> {
        if algebras.len() != poset.len() || algebras.is_empty() {
            return Err(AlgebraError::DimensionMismatch);
        }
        let dim = algebras[0].dim();
        if algebras.iter().any(|a| a.dim() != dim) {
            return Err(AlgebraError::DimensionMismatch);
        }
        let dense = algebras.iter().any(|a| matches!(a, LocalAlgebra::Dense(_)));
        if dense && dim > max_dim() {
            return Err(AlgebraError::RankOverflow(dim, max_dim()));
        }
        let perp = (0..poset.len()).map(|i| perp.row(i).clone()).collect();
        Ok(Net { poset, perp, algebras, geometry, dim })
    }

    /// A net with an empty ⊥ relation.
    pub fn without_perp(poset: Poset, algebras: Vec<LocalAlgebra>) -> Result<Net, AlgebraError> {
        if algebras.len() != poset.len() || algebras.is_empty() {
            return Err(AlgebraError::DimensionMismatch);
        }
        let dim = algebras[0].dim();
        if algebras.iter().any(|a| a.dim() != dim) {
            return Err(AlgebraError::DimensionMismatch);
        }
        let perp = vec![BitSet::new(poset.len()); poset.len()];
        Ok(Net { poset, perp, algebras, geometry: None, dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn algebra(&self, x: usize) -> &LocalAlgebra {
        &self.algebras[x]
    }

    /// Algebra generated by the algebras of the listed elements.
    pub fn generated(&self, elems: impl IntoIterator<Item = usize>) -> LocalAlgebra {
        let mut acc = self.algebras[0].scalars_like();
        for e in elems {
            acc = acc.join(&self.algebras[e]);
        }
        acc
    }
}

/// 𝔄(O) = M_d for every O.
pub fn full_matrix_net(poset: Poset, perp: CausalDisjointness, d: usize) -> Result<Net, AlgebraError> {
    let n = poset.len();
    Net::new(poset, perp, vec![LocalAlgebra::Dense(StarAlgebra::full(d)); n], None)
}

/// Qubit net: each element carries all Pauli strings on its support sites.
pub fn pauli_net_on(
    poset: Poset,
    perp: CausalDisjointness,
    qubits: usize,
    supports: &[Vec<usize>],
    geometry: Option<NetGeometry>,
) -> Result<Net, AlgebraError> {
    if qubits > MAX_QUBITS {
        return Err(AlgebraError::SizeOverflow(format!("{qubits} sites")));
    }
    let algebras = supports.iter().map(|s| LocalAlgebra::Pauli(PauliAlgebra::on_sites(qubits, s.iter().copied()))).collect();
    Net::new(poset, perp, algebras, geometry)
}

/// The single-slice Pauli net over the interval poset of a circular slice.
pub fn pauli_net(slice: &SliceIntervals) -> Result<Net, AlgebraError> {
    pauli_net_on(slice.poset.clone(), slice.perp.clone(), slice.k, &slice.bases, Some(NetGeometry::for_slice(slice)))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub pass: bool,
    pub witnesses: Vec<String>,
}

impl Check {
    fn from(witnesses: Vec<String>) -> Check {
        Check { pass: witnesses.is_empty(), witnesses }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointCheck {
    pub point: String,
    pub definite: bool,
    pub intersection_dimension: u128,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NetReport {
    pub isotony: Check,
    pub causality: Check,
    pub irreducible: bool,
    pub local_definiteness: Option<Vec<PointCheck>>,
}

impl NetReport {
    pub fn locally_definite(&self) -> Option<bool> {
        self.local_definiteness.as_ref().map(|v| v.iter().all(|p| p.definite))
    }
}

pub fn validate_net(net: &Net) -> NetReport {
    let p = &net.poset;
    let mut iso = Vec::new();
    for (a, b) in p.covers() {
        if let Some(w) = net.algebras[a].excess_over(&net.algebras[b]) {
            iso.push(format!("{} <= {}: {w}", p.name(a), p.name(b)));
        }
    }
    let mut cau = Vec::new();
    for a in 0..p.len() {
        for b in net.perp[a].iter().filter(|&b| b > a) {
            if let Some(w) = net.algebras[a].noncommuting_pair(&net.algebras[b]) {
                cau.push(format!("{} _|_ {}: {w}", p.name(a), p.name(b)));
            }
        }
    }
    let mut inter = net.algebras[0].commutant();
    for a in &net.algebras[1..] {
        inter = inter.meet(&a.commutant());
    }
    let local_definiteness = net.geometry.as_ref().map(|g| {
        (0..g.points())
            .map(|x| {
                let mut acc: Option<LocalAlgebra> = None;
                for (o, r) in g.regions.iter().enumerate() {
                    if r.contains(x) {
                        acc = Some(match acc {
                            None => net.algebras[o].clone(),
                            Some(a) => a.meet(&net.algebras[o]),
                        });
                    }
                }
                let dim = acc.as_ref().map_or(u128::MAX, |a| a.dimension());
                PointCheck { point: g.point_names[x].clone(), definite: dim == 1, intersection_dimension: dim }
            })
            .collect()
    });
    NetReport {
        isotony: Check::from(iso),
        causality: Check::from(cau),
        irreducible: inter.is_scalars(),
        local_definiteness,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DualityMode {
    Haag,
    /// Punctured at a point index of the net geometry.
    Punctured(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DualityResult {
    pub holds: bool,
    pub witness: Option<String>,
}

pub fn duality_check(net: &Net, target: usize, mode: DualityMode) -> Result<DualityResult, AlgebraError> {
    let comp: Vec<usize> = net.perp[target].iter().collect();
    if comp.is_empty() {
        return Err(AlgebraError::EmptyComplement);
    }
    let chosen: Vec<usize> = match mode {
        DualityMode::Haag => comp,
        DualityMode::Punctured(x) => {
            let g = net.geometry.as_ref().ok_or(AlgebraError::UnknownElement("geometry".into()))?;
            if x >= g.points() || !g.disjoint_from_point(&g.closures[target], x) {
                return Err(AlgebraError::UnknownElement(format!("point {x} not causally disjoint from target")));
            }
            comp.into_iter().filter(|&o| g.disjoint_from_point(&g.closures[o], x)).collect()
        }
    };
    let dual = net.generated(chosen).commutant();
    let own = &net.algebras[target];
    let witness = own.excess_over(&dual).or_else(|| dual.excess_over(own));
    Ok(DualityResult { holds: witness.is_none(), witness })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NetFolium {
    pub locally_quasi_equivalent: bool,
    pub locally_normal: bool,
    pub per_element: Vec<(String, FoliumReport)>,
}

/// Local quasi-equivalence and local normality of ω relative to σ over every element.
pub fn folium_net(net: &Net, omega: &State, sigma: &State) -> Result<NetFolium, AlgebraError> {
    let mut per = Vec::new();
    for (i, a) in net.algebras.iter().enumerate() {
        per.push((net.poset.name(i).to_string(), folium_compare(omega, sigma, a)?));
    }
    Ok(NetFolium {
        locally_quasi_equivalent: per.iter().all(|(_, r)| r.same_folium),
        locally_normal: per.iter().all(|(_, r)| r.omega_in_folium_of_sigma),
        per_element: per,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{chain3, pauli_slice};

    #[test]
    fn pauli_examples() {
        let s = pauli_slice(4);
        let net = pauli_net(&s).unwrap();
        let i2 = s.poset.index_of("I[0,2]").unwrap();
        assert_eq!(net.algebra(i2).dimension(), 16);
        let i1 = s.poset.index_of("I[3,1]").unwrap();
        assert_eq!(net.algebra(i1).dimension(), 4);
        let r = validate_net(&net);
        assert!(r.isotony.pass && r.causality.pass && r.irreducible);
    }

    #[test]
    fn full_matrix_net_fails_causality() {
        let s = pauli_slice(4);
        let net = full_matrix_net(s.poset.clone(), s.perp.clone(), 2).unwrap();
        let r = validate_net(&net);
        assert!(r.isotony.pass && !r.causality.pass);
    }

    #[test]
    fn scalar_singleton_irreducible() {
        let p = Poset::from_fn(vec!["a".into()], |_, _| true).unwrap();
        let net = Net::without_perp(p, vec![LocalAlgebra::Dense(StarAlgebra::scalars(1))]).unwrap();
        assert!(validate_net(&net).irreducible);
    }

    #[test]
    fn haag_duality_on_intervals() {
        let s = pauli_slice(6);
        let net = pauli_net(&s).unwrap();
        for t in 0..s.poset.len() {
            assert!(duality_check(&net, t, DualityMode::Haag).unwrap().holds, "{}", s.poset.name(t));
        }
    }

    #[test]
    fn punctured_duality_fails_with_local_witness() {
        let s = pauli_slice(6);
        let net = pauli_net(&s).unwrap();
        let t = s.poset.index_of("I[0,2]").unwrap();
        let r = duality_check(&net, t, DualityMode::Punctured(4)).unwrap();
        assert!(!r.holds);
        let w = r.witness.unwrap();
        assert!(w.chars().enumerate().any(|(i, ch)| i >= 2 && ch != 'I'), "{w}");
        assert!(duality_check(&net, t, DualityMode::Punctured(2)).is_err());
    }

    #[test]
    fn chain_has_no_complement() {
        let f = chain3();
        let perp = CausalDisjointness::from_fn(&f.poset, |_, _| false);
        assert!(perp.is_err());
    }
}
