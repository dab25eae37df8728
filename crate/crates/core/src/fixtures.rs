//! Canonical small index sets and random poset generators.

use rand::Rng;

use crate::bitset::BitSet;
use crate::poset::{CausalDisjointness, Poset};

#[derive(Clone, Debug)]
pub struct Fixture {
    pub poset: Poset,
    pub perp: Option<CausalDisjointness>,
}

fn names(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

/// a ≤ b ≤ c.
pub fn chain3() -> Fixture {
    let p = Poset::from_fn(names(&["a", "b", "c"]), |i, j| i <= j).unwrap();
    Fixture { poset: p, perp: None }
}

/// a1, a2 ≤ O.
pub fn v2() -> Fixture {
    let p = Poset::from_fn(names(&["a1", "a2", "O"]), |i, j| i == j || j == 2).unwrap();
    Fixture { poset: p, perp: None }
}

/// CYCLEn: bottoms a1..an, tops O1..On with a_i, a_{i+1} ≤ O_i.
#[derive(Clone, Debug)]
pub struct Cycle {
    pub n: usize,
    pub poset: Poset,
    pub perp: CausalDisjointness,
}

impl Cycle {
    /// Index of a_i (1-based, cyclic).
    pub fn a(&self, i: usize) -> usize {
        (i + self.n - 1) % self.n
    }

    /// Index of O_i (1-based, cyclic).
    pub fn o(&self, i: usize) -> usize {
        self.n + (i + self.n - 1) % self.n
    }

    /// 1-based labels of the bottoms below element `x`.
    pub fn bottoms(&self, x: usize) -> Vec<usize> {
        if x < self.n {
            vec![x + 1]
        } else {
            let i = x - self.n + 1;
            let mut v = vec![i, i % self.n + 1];
            v.sort();
            v
        }
    }

    pub fn is_bottom(&self, x: usize) -> bool {
        x < self.n
    }
}

pub fn cycle(n: usize) -> Cycle {
    assert!(n >= 3);
    let mut ns: Vec<String> = (1..=n).map(|i| format!("a{i}")).collect();
    ns.extend((1..=n).map(|i| format!("O{i}")));
    let bottoms = |x: usize| -> Vec<usize> {
        if x < n {
            vec![x]
        } else {
            vec![x - n, (x - n + 1) % n]
        }
    };
    let p = Poset::from_fn(ns, |i, j| {
        i == j || (i < n && j >= n && bottoms(j).contains(&i))
    })
    .unwrap();
    let perp = CausalDisjointness::from_fn(&p, |i, j| {
        let bi = bottoms(i);
        bottoms(j).iter().all(|b| !bi.contains(b))
    })
    .unwrap();
    Cycle { n, poset: p, perp }
}

/// PAULIk: proper arcs of a k-site circular slice, ordered by inclusion, ⊥ = disjoint.
#[derive(Clone, Debug)]
pub struct SliceIntervals {
    pub k: usize,
    pub poset: Poset,
    pub perp: CausalDisjointness,
    /// Sites of each arc, in poset index order.
    pub bases: Vec<Vec<usize>>,
}

pub fn pauli_slice(k: usize) -> SliceIntervals {
    assert!(k >= 2);
    let mut ns = Vec::new();
    let mut bases = Vec::new();
    for len in 1..k {
        for start in 0..k {
            ns.push(format!("I[{start},{len}]"));
            bases.push((0..len).map(|j| (start + j) % k).collect::<Vec<_>>());
        }
    }
    let sets: Vec<BitSet> = bases.iter().map(|b| BitSet::from_indices(k, b.iter().copied())).collect();
    let p = Poset::from_fn(ns, |i, j| sets[i].is_subset(&sets[j])).unwrap();
    let perp = CausalDisjointness::from_fn(&p, |i, j| !sets[i].intersects(&sets[j])).unwrap();
    SliceIntervals { k, poset: p, perp, bases }
}

/// A random poset on `n` elements: a random DAG over a fixed topological order, closed.
pub fn random_poset<R: Rng>(rng: &mut R, n: usize, density: f64) -> Poset {
    let ns: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
    let mut gens = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                gens.push((ns[i].clone(), ns[j].clone()));
            }
        }
    }
    Poset::from_generators(&ns, &gens).expect("DAG closure is a partial order")
}

/// A random directed poset with at most `max_n` elements.
pub fn random_directed_poset<R: Rng>(rng: &mut R, max_n: usize) -> Poset {
    for _ in 0..50 {
        let n = rng.gen_range(1..=max_n);
        let density = rng.gen_range(0.2..0.9);
        let p = random_poset(rng, n, density);
        if p.is_directed() {
            return p;
        }
    }
    // fall back: adjoin a top to a random poset
    let n = rng.gen_range(1..max_n.max(2));
    let base = random_poset(rng, n, 0.4);
    let mut ns: Vec<String> = base.names().to_vec();
    ns.push("top".into());
    Poset::from_fn(ns, |i, j| j == n || (i < n && j < n && base.leq(i, j))).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cycle_structure() {
        let c = cycle(4);
        assert_eq!(c.poset.len(), 8);
        assert!(c.poset.leq(c.a(1), c.o(1)));
        assert!(c.poset.leq(c.a(1), c.o(4)));
        assert!(!c.poset.leq(c.a(1), c.o(2)));
        assert!(c.perp.perp(c.a(1), c.a(3)));
        assert!(c.perp.perp(c.o(1), c.o(3)));
        assert!(!c.perp.perp(c.o(1), c.o(2)));
    }

    #[test]
    fn slice_intervals() {
        let s = pauli_slice(6);
        assert_eq!(s.poset.len(), 30);
        assert!(!s.poset.is_directed());
    }

    #[test]
    fn random_directed_is_directed() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let p = random_directed_poset(&mut rng, 8);
            assert!(p.is_directed() && p.len() <= 8);
        }
    }
}
