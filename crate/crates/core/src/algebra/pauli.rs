//! Algebras spanned by Pauli strings, held as F₂ subspaces of (x | z) bit vectors.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::CMat;

/// Largest qubit count for symbolic strings.
pub const MAX_QUBITS: usize = 32;

/// A Pauli string X^x Z^z up to phase; bit i of `x`/`z` acts on site i.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PauliString {
    pub x: u64,
    pub z: u64,
}

impl PauliString {
    pub const IDENTITY: PauliString = PauliString { x: 0, z: 0 };

    pub fn x_at(i: usize) -> Self {
        PauliString { x: 1 << i, z: 0 }
    }

    pub fn z_at(i: usize) -> Self {
        PauliString { x: 0, z: 1 << i }
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn support(&self) -> u64 {
        self.x | self.z
    }

    pub fn mul(&self, o: &PauliString) -> PauliString {
        PauliString { x: self.x ^ o.x, z: self.z ^ o.z }
    }

    pub fn commutes(&self, o: &PauliString) -> bool {
        ((self.x & o.z).count_ones() + (self.z & o.x).count_ones()) % 2 == 0
    }

    /// Parses a string over {I,X,Y,Z}, character i acting on site i.
    pub fn parse(s: &str) -> Option<Self> {
        let mut p = PauliString::IDENTITY;
        for (i, c) in s.chars().enumerate() {
            if i >= MAX_QUBITS {
                return None;
            }
            match c {
                'I' => {}
                'X' => p.x |= 1 << i,
                'Z' => p.z |= 1 << i,
                'Y' => {
                    p.x |= 1 << i;
                    p.z |= 1 << i;
                }
                _ => return None,
            }
        }
        Some(p)
    }

    pub fn label(&self, n: usize) -> String {
        (0..n)
            .map(|i| match (self.x >> i & 1, self.z >> i & 1) {
                (0, 0) => 'I',
                (1, 0) => 'X',
                (0, 1) => 'Z',
                _ => 'Y',
            })
            .collect()
    }

    /// Relabels sites through `f`.
    pub fn relabel(&self, f: impl Fn(usize) -> usize) -> PauliString {
        let mut out = PauliString::IDENTITY;
        for i in 0..64 {
            if self.x >> i & 1 == 1 {
                out.x |= 1 << f(i);
            }
            if self.z >> i & 1 == 1 {
                out.z |= 1 << f(i);
            }
        }
        out
    }

    /// Hermitian representative i^{|x∧z|} X^x Z^z as a 2ⁿ × 2ⁿ matrix.
    pub fn matrix(&self, n: usize) -> CMat {
        let d = 1usize << n;
        let phase = Complex64::i().powu((self.x & self.z).count_ones());
        let mut m = DMatrix::zeros(d, d);
        for c in 0..d {
            let sign = if (self.z & c as u64).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            m[((c as u64 ^ self.x) as usize, c)] = phase * sign;
        }
        m
    }

    fn pack(&self) -> u128 {
        self.x as u128 | (self.z as u128) << 64
    }

    fn unpack(v: u128) -> Self {
        PauliString { x: v as u64, z: (v >> 64) as u64 }
    }

    fn swap(&self) -> Self {
        PauliString { x: self.z, z: self.x }
    }
}

/// Row-reduces over F₂; returns a basis in reduced echelon form.
fn rref(mut rows: Vec<u128>) -> Vec<u128> {
    let mut out: Vec<u128> = Vec::new();
    rows.retain(|&r| r != 0);
    for mut r in rows {
        for &b in &out {
            let lead = 127 - b.leading_zeros();
            if r >> lead & 1 == 1 {
                r ^= b;
            }
        }
        if r == 0 {
            continue;
        }
        let lead = 127 - r.leading_zeros();
        for b in out.iter_mut() {
            if *b >> lead & 1 == 1 {
                *b ^= r;
            }
        }
        out.push(r);
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

fn reduce(basis: &[u128], mut v: u128) -> u128 {
    for &b in basis {
        let lead = 127 - b.leading_zeros();
        if v >> lead & 1 == 1 {
            v ^= b;
        }
    }
    v
}

/// Vectors w with ⟨r, w⟩ = 0 (ordinary F₂ dot product) for every row r, within `mask`.
fn null_space(rows: &[u128], mask: u128) -> Vec<u128> {
    let basis = rref(rows.to_vec());
    let pivots: Vec<u32> = basis.iter().map(|b| 127 - b.leading_zeros()).collect();
    let mut out = Vec::new();
    for f in 0..128u32 {
        if mask >> f & 1 == 0 || pivots.contains(&f) {
            continue;
        }
        // free variable f = 1, solve pivots
        let mut v: u128 = 1 << f;
        for (b, &p) in basis.iter().zip(&pivots) {
            if b >> f & 1 == 1 {
                v |= 1 << p;
            }
        }
        out.push(v);
    }
    rref(out)
}

/// The linear span of the Pauli strings in an F₂ subspace; always a unital *-algebra.
#[derive(Clone, PartialEq, Eq)]
pub struct PauliAlgebra {
    qubits: usize,
    basis: Vec<u128>,
}

impl fmt::Debug for PauliAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators().iter().map(|g| g.label(self.qubits)).collect();
        write!(f, "PauliAlgebra({} qubits, <{}>)", self.qubits, gens.join(","))
    }
}

impl PauliAlgebra {
    pub fn from_strings(qubits: usize, gens: &[PauliString]) -> Self {
        assert!(qubits <= MAX_QUBITS);
        PauliAlgebra { qubits, basis: rref(gens.iter().map(|g| g.pack()).collect()) }
    }

    pub fn scalars(qubits: usize) -> Self {
        Self::from_strings(qubits, &[])
    }

    /// All strings supported on `sites`.
    pub fn on_sites(qubits: usize, sites: impl IntoIterator<Item = usize>) -> Self {
        let gens: Vec<PauliString> =
            sites.into_iter().flat_map(|i| [PauliString::x_at(i), PauliString::z_at(i)]).collect();
        Self::from_strings(qubits, &gens)
    }

    pub fn full(qubits: usize) -> Self {
        Self::on_sites(qubits, 0..qubits)
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn hilbert_dim(&self) -> usize {
        1 << self.qubits
    }

    /// F₂ rank of the string group.
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Complex dimension of the span, 2^rank.
    pub fn dimension(&self) -> u128 {
        1u128 << self.rank()
    }

    pub fn generators(&self) -> Vec<PauliString> {
        self.basis.iter().map(|&b| PauliString::unpack(b)).collect()
    }

    pub fn contains_string(&self, p: &PauliString) -> bool {
        reduce(&self.basis, p.pack()) == 0
    }

    pub fn is_scalars(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_subalgebra_of(&self, o: &PauliAlgebra) -> bool {
        self.generators().iter().all(|g| o.contains_string(g))
    }

    /// A generator of `self` outside `o`, if any.
    pub fn excess_over(&self, o: &PauliAlgebra) -> Option<PauliString> {
        self.generators().into_iter().find(|g| !o.contains_string(g))
    }

    pub fn commutes_with(&self, o: &PauliAlgebra) -> bool {
        self.noncommuting_pair(o).is_none()
    }

    pub fn noncommuting_pair(&self, o: &PauliAlgebra) -> Option<(PauliString, PauliString)> {
        for a in self.generators() {
            for b in o.generators() {
                if !a.commutes(&b) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    fn mask(&self) -> u128 {
        let m = (1u128 << self.qubits) - 1;
        m | m << 64
    }

    /// Symplectic complement: the commutant within the full matrix algebra.
    pub fn commutant(&self) -> PauliAlgebra {
        let rows: Vec<u128> = self.generators().iter().map(|g| g.swap().pack()).collect();
        PauliAlgebra { qubits: self.qubits, basis: null_space(&rows, self.mask()) }
    }

    pub fn join(&self, o: &PauliAlgebra) -> PauliAlgebra {
        let mut rows = self.basis.clone();
        rows.extend_from_slice(&o.basis);
        PauliAlgebra { qubits: self.qubits, basis: rref(rows) }
    }

    pub fn meet(&self, o: &PauliAlgebra) -> PauliAlgebra {
        self.commutant().join(&o.commutant()).commutant()
    }

    pub fn center(&self) -> PauliAlgebra {
        self.meet(&self.commutant())
    }

    /// Whether a matrix lies in the span: all its Pauli coefficients sit on member strings.
    pub fn contains_matrix(&self, m: &CMat, tol: f64) -> bool {
        let d = self.hilbert_dim();
        for x in 0..d as u64 {
            for z in 0..d as u64 {
                let p = PauliString { x, z };
                if self.contains_string(&p) {
                    continue;
                }
                // tr(P† M) for monomial P
                let mut c = Complex64::new(0.0, 0.0);
                for col in 0..d {
                    let sign = if (z & col as u64).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                    c += m[((col as u64 ^ x) as usize, col)] * sign;
                }
                if c.norm() / d as f64 > tol {
                    return false;
                }
            }
        }
        true
    }

    /// Minimal central projections, from a generating set of the centre.
    pub fn central_projections(&self) -> Vec<CMat> {
        let n = self.qubits;
        let d = self.hilbert_dim();
        let mut projs = vec![CMat::identity(d, d)];
        for g in self.center().generators() {
            let s = g.matrix(n);
            let id = CMat::identity(d, d);
            let plus = (&id + &s) * Complex64::new(0.5, 0.0);
            let minus = (&id - &s) * Complex64::new(0.5, 0.0);
            projs = projs.iter().flat_map(|p| [p * &plus, p * &minus]).collect();
        }
        projs
    }

    /// Orthonormal dense basis (Hilbert–Schmidt), for small dimension only.
    pub fn dense_basis(&self) -> Vec<CMat> {
        let r = self.rank();
        let gens = self.generators();
        let norm = Complex64::new(1.0 / (self.hilbert_dim() as f64).sqrt(), 0.0);
        (0..1u64 << r)
            .map(|mask| {
                let mut p = PauliString::IDENTITY;
                for (i, g) in gens.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        p = p.mul(g);
                    }
                }
                p.matrix(self.qubits) * norm
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn single_qubit() {
        let x = PauliString::x_at(0);
        let z = PauliString::z_at(0);
        assert!(!x.commutes(&z));
        let a = PauliAlgebra::from_strings(1, &[x]);
        assert_eq!(a.dimension(), 2);
        assert_eq!(a.commutant(), a);
        let full = PauliAlgebra::from_strings(1, &[x, z]);
        assert!(full.commutant().is_scalars());
        let y = x.matrix(1) * z.matrix(1);
        assert!(full.contains_matrix(&y, 1e-9));
        assert!(!a.contains_matrix(&z.matrix(1), 1e-9));
    }

    #[test]
    fn parse_and_label() {
        let p = PauliString::parse("IXYZ").unwrap();
        assert_eq!(p.label(4), "IXYZ");
        assert!(PauliString::parse("IXQ").is_none());
        let m = p.matrix(4);
        assert!((&m * m.adjoint() - CMat::identity(16, 16)).camax() < 1e-12);
        assert!((&m - m.adjoint()).camax() < 1e-12);
    }

    #[test]
    fn site_algebras() {
        let a = PauliAlgebra::on_sites(4, [0, 1]);
        assert_eq!(a.dimension(), 16);
        assert_eq!(a.commutant(), PauliAlgebra::on_sites(4, [2, 3]));
        let b = PauliAlgebra::on_sites(4, [1, 2]);
        assert_eq!(a.meet(&b), PauliAlgebra::on_sites(4, [1]));
        assert!(a.center().is_scalars());
    }

    fn string_strategy(n: usize) -> impl Strategy<Value = PauliString> {
        (0u64..1 << n, 0u64..1 << n).prop_map(|(x, z)| PauliString { x, z })
    }

    proptest! {
        #[test]
        fn double_commutant(gens in proptest::collection::vec(string_strategy(4), 0..5)) {
            let a = PauliAlgebra::from_strings(4, &gens);
            prop_assert_eq!(a.commutant().commutant(), a.clone());
            prop_assert_eq!(a.rank() + a.commutant().rank() , 8);
            for g in a.generators() {
                for h in a.commutant().generators() {
                    prop_assert!(g.commutes(&h));
                }
            }
        }

        #[test]
        fn meet_is_intersection(g1 in proptest::collection::vec(string_strategy(3), 0..5),
                                g2 in proptest::collection::vec(string_strategy(3), 0..5)) {
            let a = PauliAlgebra::from_strings(3, &g1);
            let b = PauliAlgebra::from_strings(3, &g2);
            let m = a.meet(&b);
            // brute-force oracle over all 64 strings
            for x in 0..8u64 {
                for z in 0..8u64 {
                    let p = PauliString { x, z };
                    prop_assert_eq!(m.contains_string(&p), a.contains_string(&p) && b.contains_string(&p));
                }
            }
        }
    }
}
