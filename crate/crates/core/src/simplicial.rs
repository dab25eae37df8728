//! Singular simplices of a poset, paths and elementary deformations.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::BitSet;
use crate::poset::Poset;

/// Default cap on enumerated simplices.
pub const DEFAULT_SIMPLEX_CAP: usize = 5_000_000;

/// Default state budget for the deformation search.
pub const DEFAULT_BFS_BUDGET: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimplicialError {
    #[error("{count} simplices exceed the cap {cap}")]
    SizeOverflow { count: usize, cap: usize },
    #[error("endpoint mismatch")]
    EndpointMismatch,
    #[error("invalid simplex: {0}")]
    InvalidSimplex(String),
    #[error("empty path")]
    EmptyPath,
    #[error("deformation search and group images disagree")]
    Inconsistent,
}

/// A 1-simplex from `d1` to `d0` with support `support`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex1 {
    pub d1: usize,
    pub d0: usize,
    pub support: usize,
}

impl fmt::Debug for Simplex1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}->{}|{})", self.d1, self.d0, self.support)
    }
}

impl Simplex1 {
    pub fn new(p: &Poset, d1: usize, d0: usize, support: usize) -> Result<Self, SimplicialError> {
        if !p.leq(d0, support) || !p.leq(d1, support) {
            return Err(SimplicialError::InvalidSimplex(format!(
                "({} -> {} | {})",
                p.name(d1),
                p.name(d0),
                p.name(support)
            )));
        }
        Ok(Simplex1 { d1, d0, support })
    }

    /// The degenerate 1-simplex b(a).
    pub fn degenerate(a: usize) -> Self {
        Simplex1 { d1: a, d0: a, support: a }
    }

    pub fn is_degenerate(&self) -> bool {
        self.d0 == self.d1 && self.d0 == self.support
    }

    pub fn reverse(&self) -> Self {
        Simplex1 { d1: self.d0, d0: self.d1, support: self.support }
    }

    pub fn names(&self, p: &Poset) -> [String; 3] {
        [p.name(self.d1).into(), p.name(self.d0).into(), p.name(self.support).into()]
    }

    pub fn from_names(p: &Poset, t: &[String; 3]) -> Result<Self, SimplicialError> {
        let id = |s: &String| p.index_of(s).ok_or_else(|| SimplicialError::InvalidSimplex(s.clone()));
        Simplex1::new(p, id(&t[0])?, id(&t[1])?, id(&t[2])?)
    }
}

/// A 2-simplex: f2 runs v0→v1, f0 runs v1→v2, f1 runs v0→v2.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Simplex2 {
    pub f0: Simplex1,
    pub f1: Simplex1,
    pub f2: Simplex1,
    pub support: usize,
}

impl Simplex2 {
    pub fn new(
        p: &Poset,
        f0: Simplex1,
        f1: Simplex1,
        f2: Simplex1,
        support: usize,
    ) -> Result<Self, SimplicialError> {
        let chain = f0.d1 == f2.d0 && f1.d1 == f2.d1 && f1.d0 == f0.d0;
        let sup = [f0, f1, f2].iter().all(|f| p.leq(f.support, support));
        let faces = [f0, f1, f2].iter().all(|f| p.leq(f.d0, f.support) && p.leq(f.d1, f.support));
        if !(chain && sup && faces) {
            return Err(SimplicialError::InvalidSimplex(format!("{f0:?} {f1:?} {f2:?} | {support}")));
        }
        Ok(Simplex2 { f0, f1, f2, support })
    }

    pub fn vertices(&self) -> [usize; 3] {
        [self.f2.d1, self.f2.d0, self.f0.d0]
    }
}

/// Σ₀: the elements.
pub fn sigma0(p: &Poset) -> Vec<usize> {
    (0..p.len()).collect()
}

/// Σ₁ in lexicographic order of (d1, d0, support).
pub fn sigma1(p: &Poset) -> Vec<Simplex1> {
    let mut out = Vec::new();
    for d1 in 0..p.len() {
        for d0 in 0..p.len() {
            let common = p.up(d1).and(p.up(d0));
            for s in common.iter() {
                out.push(Simplex1 { d1, d0, support: s });
            }
        }
    }
    out
}

pub fn sigma1_count(p: &Poset) -> usize {
    (0..p.len()).map(|s| p.down(s).count().pow(2)).sum()
}

/// Σ₂ in lexicographic order, failing with `SizeOverflow` beyond `cap`.
pub fn sigma2(p: &Poset, cap: usize) -> Result<Vec<Simplex2>, SimplicialError> {
    let mut set = BTreeSet::new();
    for_each_sigma2(p, cap, |c| {
        set.insert(c);
    })?;
    Ok(set.into_iter().collect())
}

/// Visits every 2-simplex once, in no particular order.
pub fn for_each_sigma2(
    p: &Poset,
    cap: usize,
    mut f: impl FnMut(Simplex2),
) -> Result<usize, SimplicialError> {
    let mut count = 0usize;
    for s in 0..p.len() {
        let below: Vec<usize> = p.down(s).iter().collect();
        for &v0 in &below {
            for &v1 in &below {
                for &v2 in &below {
                    let s2: Vec<usize> = p.up(v0).and(p.up(v1)).and(p.down(s)).iter().collect();
                    let s0: Vec<usize> = p.up(v1).and(p.up(v2)).and(p.down(s)).iter().collect();
                    let s1: Vec<usize> = p.up(v0).and(p.up(v2)).and(p.down(s)).iter().collect();
                    for &a in &s0 {
                        for &b in &s1 {
                            for &c in &s2 {
                                count += 1;
                                if count > cap {
                                    return Err(SimplicialError::SizeOverflow { count, cap });
                                }
                                f(Simplex2 {
                                    f0: Simplex1 { d1: v1, d0: v2, support: a },
                                    f1: Simplex1 { d1: v0, d0: v2, support: b },
                                    f2: Simplex1 { d1: v0, d0: v1, support: c },
                                    support: s,
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(count)
}

/// Enumerated simplices of one dimension.
#[derive(Debug, Clone, PartialEq)]
pub enum Simplices {
    Zero(Vec<usize>),
    One(Vec<Simplex1>),
    Two(Vec<Simplex2>),
}

pub fn enumerate_simplices(p: &Poset, n: u8, cap: usize) -> Result<Simplices, SimplicialError> {
    match n {
        0 => Ok(Simplices::Zero(sigma0(p))),
        1 => {
            let c = sigma1_count(p);
            if c > cap {
                return Err(SimplicialError::SizeOverflow { count: c, cap });
            }
            Ok(Simplices::One(sigma1(p)))
        }
        2 => Ok(Simplices::Two(sigma2(p, cap)?)),
        _ => Err(SimplicialError::InvalidSimplex(format!("dimension {n} not materialized"))),
    }
}

/// A path, stored in traversal order: `edges[0]` is traversed first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Path {
    edges: Vec<Simplex1>,
}

impl Path {
    pub fn new(edges: Vec<Simplex1>) -> Result<Self, SimplicialError> {
        if edges.is_empty() {
            return Err(SimplicialError::EmptyPath);
        }
        for w in edges.windows(2) {
            if w[0].d0 != w[1].d1 {
                return Err(SimplicialError::EndpointMismatch);
            }
        }
        Ok(Path { edges })
    }

    pub fn single(b: Simplex1) -> Self {
        Path { edges: vec![b] }
    }

    pub fn edges(&self) -> &[Simplex1] {
        &self.edges
    }

    /// Starting point ∂₁p.
    pub fn start(&self) -> usize {
        self.edges[0].d1
    }

    /// End point ∂₀p.
    pub fn end(&self) -> usize {
        self.edges[self.edges.len() - 1].d0
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_loop(&self) -> bool {
        self.start() == self.end()
    }

    pub fn reverse(&self) -> Path {
        Path { edges: self.edges.iter().rev().map(|b| b.reverse()).collect() }
    }

    /// Serialized as [d1, d0, support] triples in traversal order.
    pub fn to_names(&self, p: &Poset) -> Vec<[String; 3]> {
        self.edges.iter().map(|b| b.names(p)).collect()
    }

    pub fn from_names(p: &Poset, t: &[[String; 3]]) -> Result<Self, SimplicialError> {
        let edges = t.iter().map(|x| Simplex1::from_names(p, x)).collect::<Result<Vec<_>, _>>()?;
        Path::new(edges)
    }
}

pub fn reverse_path(p: &Path) -> Path {
    p.reverse()
}

/// q * p: traverse p, then q.
pub fn compose_paths(q: &Path, p: &Path) -> Result<Path, SimplicialError> {
    if p.end() != q.start() {
        return Err(SimplicialError::EndpointMismatch);
    }
    let mut edges = p.edges.clone();
    edges.extend_from_slice(&q.edges);
    Ok(Path { edges })
}

/// Pairs (f2, f0) with f1 = b for some 2-simplex.
fn expansions(p: &Poset, b: Simplex1) -> Vec<(Simplex1, Simplex1)> {
    let (v0, v2) = (b.d1, b.d0);
    let mut out = Vec::new();
    let up_b = p.up(b.support);
    for v1 in 0..p.len() {
        let s2s = p.up(v0).and(p.up(v1));
        let s0s = p.up(v1).and(p.up(v2));
        for s2 in s2s.iter() {
            let u = up_b.and(p.up(s2));
            if u.is_empty() {
                continue;
            }
            for s0 in s0s.iter() {
                if u.intersects(p.up(s0)) {
                    out.push((
                        Simplex1 { d1: v0, d0: v1, support: s2 },
                        Simplex1 { d1: v1, d0: v2, support: s0 },
                    ));
                }
            }
        }
    }
    out
}

/// Edges f1 that collapse the consecutive pair (f2 then f0).
fn collapses(p: &Poset, f2: Simplex1, f0: Simplex1) -> Vec<Simplex1> {
    let (v0, v2) = (f2.d1, f0.d0);
    let u = p.up(f2.support).and(p.up(f0.support));
    if u.is_empty() {
        return Vec::new();
    }
    p.up(v0)
        .and(p.up(v2))
        .iter()
        .filter(|&s1| u.intersects(p.up(s1)))
        .map(|s1| Simplex1 { d1: v0, d0: v2, support: s1 })
        .collect()
}

/// Every path one elementary deformation away from `path`.
pub fn deformation_neighbors(path: &Path, p: &Poset) -> Vec<Path> {
    let mut out = BTreeSet::new();
    let e = &path.edges;
    for i in 0..e.len() {
        for (f2, f0) in expansions(p, e[i]) {
            let mut v = Vec::with_capacity(e.len() + 1);
            v.extend_from_slice(&e[..i]);
            v.push(f2);
            v.push(f0);
            v.extend_from_slice(&e[i + 1..]);
            out.insert(Path { edges: v });
        }
    }
    for i in 0..e.len().saturating_sub(1) {
        for f1 in collapses(p, e[i], e[i + 1]) {
            let mut v = Vec::with_capacity(e.len() - 1);
            v.extend_from_slice(&e[..i]);
            v.push(f1);
            v.extend_from_slice(&e[i + 2..]);
            out.insert(Path { edges: v });
        }
    }
    out.into_iter().collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

/// Bidirectional breadth-first search over elementary deformations.
pub fn deformation_search(p: &Poset, a: &Path, b: &Path, budget: usize) -> Option<bool> {
    if a == b {
        return Some(true);
    }
    let mut seen: [HashMap<Path, ()>; 2] = [HashMap::new(), HashMap::new()];
    let mut queues: [VecDeque<Path>; 2] = [VecDeque::new(), VecDeque::new()];
    seen[0].insert(a.clone(), ());
    seen[1].insert(b.clone(), ());
    queues[0].push_back(a.clone());
    queues[1].push_back(b.clone());
    let mut states = 2usize;
    loop {
        if queues[0].is_empty() && queues[1].is_empty() {
            return Some(false);
        }
        // expand the smaller frontier one level
        let side = if queues[1].is_empty() || (!queues[0].is_empty() && queues[0].len() <= queues[1].len()) {
            0
        } else {
            1
        };
        let level: Vec<Path> = queues[side].drain(..).collect();
        for q in level {
            for n in deformation_neighbors(&q, p) {
                if seen[1 - side].contains_key(&n) {
                    return Some(true);
                }
                if seen[side].insert(n.clone(), ()).is_none() {
                    states += 1;
                    if states > budget {
                        return None;
                    }
                    queues[side].push_back(n);
                }
            }
        }
        if queues[side].is_empty() {
            // one side's reachable set is exhausted without meeting the other
            return Some(false);
        }
    }
}

/// Homotopy verdict for two paths with common endpoints.
///
/// "yes" comes from the deformation search, "no" from differing fundamental group images.
pub fn are_homotopic(p: &Poset, a: &Path, b: &Path, budget: usize) -> Result<Verdict, SimplicialError> {
    if a.start() != b.start() || a.end() != b.end() {
        return Err(SimplicialError::EndpointMismatch);
    }
    let distinct = crate::homotopy::paths_differ(p, a, b);
    let found = deformation_search(p, a, b, budget);
    match (found, distinct) {
        (Some(true), true) => Err(SimplicialError::Inconsistent),
        (Some(true), false) => Ok(Verdict::Yes),
        (_, true) => Ok(Verdict::No),
        (Some(false), false) => Ok(Verdict::No),
        (None, false) => Ok(Verdict::Unknown),
    }
}

/// Connected components of `set` under comparability.
pub fn components_within(p: &Poset, set: &BitSet) -> Vec<Vec<usize>> {
    let mut comp: Vec<Option<usize>> = vec![None; p.len()];
    let mut out = Vec::new();
    for s in set.iter() {
        if comp[s].is_some() {
            continue;
        }
        let id = out.len();
        let mut members = vec![s];
        comp[s] = Some(id);
        let mut i = 0;
        while i < members.len() {
            let x = members[i];
            i += 1;
            let nb = p.up(x).or(p.down(x)).and(set);
            for y in nb.iter() {
                if comp[y].is_none() {
                    comp[y] = Some(id);
                    members.push(y);
                }
            }
        }
        members.sort();
        out.push(members);
    }
    out
}

/// A pair of elements of `set` in different path components of `set`, if any.
pub fn split_pair_within(p: &Poset, set: &BitSet) -> Option<(usize, usize)> {
    let c = components_within(p, set);
    if c.len() > 1 {
        Some((c[0][0], c[1][0]))
    } else {
        None
    }
}

/// A shortest path from `from` to `to` whose vertices and supports lie in `set`.
pub fn path_within(p: &Poset, set: &BitSet, from: usize, to: usize) -> Option<Path> {
    if !set.contains(from) || !set.contains(to) {
        return None;
    }
    if from == to {
        return Some(Path::single(Simplex1 { d1: from, d0: from, support: from }));
    }
    let mut prev: HashMap<usize, Simplex1> = HashMap::new();
    let mut queue = VecDeque::from([from]);
    let mut seen = BitSet::new(p.len());
    seen.insert(from);
    while let Some(x) = queue.pop_front() {
        // covering moves: up to a larger element, or down to a smaller one
        for y in p.up(x).or(p.down(x)).and(set).iter() {
            if seen.contains(y) {
                continue;
            }
            seen.insert(y);
            let s = if p.leq(x, y) { y } else { x };
            prev.insert(y, Simplex1 { d1: x, d0: y, support: s });
            if y == to {
                let mut edges = Vec::new();
                let mut cur = to;
                while cur != from {
                    let b = prev[&cur];
                    edges.push(b);
                    cur = b.d1;
                }
                edges.reverse();
                return Some(Path { edges });
            }
            queue.push_back(y);
        }
    }
    None
}

/// A random path of `len` edges, from `start` or a random element.
pub fn random_path<R: rand::Rng>(rng: &mut R, p: &Poset, start: Option<usize>, len: usize) -> Path {
    let mut x = start.unwrap_or_else(|| rng.gen_range(0..p.len()));
    let mut edges = Vec::with_capacity(len);
    for _ in 0..len.max(1) {
        let ups: Vec<usize> = p.up(x).iter().collect();
        let s = ups[rng.gen_range(0..ups.len())];
        let downs: Vec<usize> = p.down(s).iter().collect();
        let y = downs[rng.gen_range(0..downs.len())];
        edges.push(Simplex1 { d1: x, d0: y, support: s });
        x = y;
    }
    Path { edges }
}

/// Is the whole poset pathwise connected.
pub fn is_connected(p: &Poset) -> bool {
    components_within(p, &BitSet::full(p.len())).len() == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_path<R: Rng>(rng: &mut R, p: &Poset, len: usize) -> Path {
        super::random_path(rng, p, None, len)
    }

    #[test]
    fn chain3_sigma0() {
        let c = fixtures::chain3();
        assert_eq!(enumerate_simplices(&c.poset, 0, 10).unwrap(), Simplices::Zero(vec![0, 1, 2]));
    }

    #[test]
    fn v2_sigma1() {
        let v = fixtures::v2();
        let s1 = sigma1(&v.poset);
        let (a1, a2, o) = (0, 1, 2);
        assert!(s1.contains(&Simplex1 { d1: a2, d0: a1, support: o }));
        for x in 0..3 {
            assert!(s1.contains(&Simplex1::degenerate(x)));
        }
        // oracle: triple scan
        let mut n = 0;
        for d1 in 0..3 {
            for d0 in 0..3 {
                for s in 0..3 {
                    if v.poset.leq(d0, s) && v.poset.leq(d1, s) {
                        n += 1;
                    }
                }
            }
        }
        assert_eq!(s1.len(), n);
        assert_eq!(sigma1_count(&v.poset), n);
    }

    #[test]
    fn cycle4_sigma2_local() {
        let c = fixtures::cycle(4);
        let s2 = sigma2(&c.poset, 100_000).unwrap();
        assert!(!s2.is_empty());
        for x in &s2 {
            // every vertex lies in one down-set {a_i, a_{i+1}, O_i}
            let ok = (0..c.poset.len()).any(|top| {
                x.vertices().iter().all(|&v| c.poset.leq(v, top))
                    && [x.f0, x.f1, x.f2].iter().all(|f| c.poset.leq(f.support, top))
            });
            assert!(ok);
            assert!(Simplex2::new(&c.poset, x.f0, x.f1, x.f2, x.support).is_ok());
        }
    }

    #[test]
    fn face_permutations_rejected() {
        let c = fixtures::chain3();
        let s2 = sigma2(&c.poset, 100_000).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut rejected = 0;
        for _ in 0..200 {
            let x = s2[rng.gen_range(0..s2.len())];
            let perm = Simplex2::new(&c.poset, x.f1, x.f0, x.f2, x.support);
            let perm2 = Simplex2::new(&c.poset, x.f2, x.f1, x.f0, x.support);
            let nondeg = x.vertices()[0] != x.vertices()[1] || x.vertices()[1] != x.vertices()[2];
            if nondeg && (perm.is_err() || perm2.is_err()) {
                rejected += 1;
            }
        }
        assert!(rejected > 0);
    }

    #[test]
    fn reverse_examples() {
        let c = fixtures::cycle(4);
        let (a1, o1) = (c.a(1), c.o(1));
        let b = Path::single(Simplex1::new(&c.poset, a1, o1, o1).unwrap());
        let r = reverse_path(&b);
        assert_eq!(r.edges(), &[Simplex1 { d1: o1, d0: a1, support: o1 }]);
        let d = Path::single(Simplex1::degenerate(a1));
        assert_eq!(reverse_path(&d), d);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let len = rng.gen_range(1..6);
            let p = random_path(&mut rng, &c.poset, len);
            assert_eq!(p.reverse().reverse(), p);
        }
    }

    #[test]
    fn compose_examples() {
        let c = fixtures::cycle(4);
        let loop_edges: Vec<Simplex1> = (1..=4)
            .map(|i| Simplex1::new(&c.poset, c.a(i), c.a(i + 1), c.o(i)).unwrap())
            .collect();
        let mut p = Path::single(loop_edges[0]);
        for b in &loop_edges[1..] {
            p = compose_paths(&Path::single(*b), &p).unwrap();
        }
        assert!(p.is_loop());
        assert_eq!(p.len(), 4);
        let deg = Path::single(Simplex1::degenerate(p.start()));
        let q = compose_paths(&p, &deg).unwrap();
        assert_eq!((q.start(), q.end()), (p.start(), p.end()));
        assert_eq!(
            compose_paths(&Path::single(loop_edges[2]), &Path::single(loop_edges[0])),
            Err(SimplicialError::EndpointMismatch)
        );
    }

    #[test]
    fn chain3_expansion() {
        let c = fixtures::chain3();
        let ac = Path::single(Simplex1 { d1: 0, d0: 2, support: 2 });
        let n = deformation_neighbors(&ac, &c.poset);
        let pair = Path::new(vec![
            Simplex1 { d1: 0, d0: 1, support: 2 },
            Simplex1 { d1: 1, d0: 2, support: 2 },
        ])
        .unwrap();
        assert!(n.contains(&pair));
    }

    #[test]
    fn degenerate_expansion() {
        let p = Poset::from_fn(vec!["a".into()], |_, _| true).unwrap();
        let d = Path::single(Simplex1::degenerate(0));
        let n = deformation_neighbors(&d, &p);
        assert!(n.contains(&Path::new(vec![Simplex1::degenerate(0); 2]).unwrap()));
    }

    #[test]
    fn neighbor_symmetry() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let n = rng.gen_range(2..6);
            let p = fixtures::random_poset(&mut rng, n, 0.5);
            let len = rng.gen_range(1..4);
            let a = random_path(&mut rng, &p, len);
            for b in deformation_neighbors(&a, &p) {
                assert!(deformation_neighbors(&b, &p).contains(&a));
            }
        }
    }

    #[test]
    fn homotopy_examples() {
        let c = fixtures::cycle(4);
        let p = &c.poset;
        let b = Simplex1::new(p, c.a(1), c.o(1), c.o(1)).unwrap();
        let path = compose_paths(&Path::single(Simplex1::new(p, c.o(1), c.a(2), c.o(1)).unwrap()), &Path::single(b)).unwrap();
        let deg = Path::single(Simplex1::degenerate(path.start()));
        let padded = compose_paths(&path, &deg).unwrap();
        assert_eq!(are_homotopic(p, &path, &padded, DEFAULT_BFS_BUDGET).unwrap(), Verdict::Yes);
        let back = compose_paths(&path.reverse(), &path).unwrap();
        assert_eq!(are_homotopic(p, &back, &deg, DEFAULT_BFS_BUDGET).unwrap(), Verdict::Yes);
        let loop_edges: Vec<Simplex1> = (1..=4)
            .map(|i| Simplex1::new(p, c.a(i), c.a(i + 1), c.o(i)).unwrap())
            .collect();
        let gen_loop = Path::new(loop_edges).unwrap();
        let deg = Path::single(Simplex1::degenerate(gen_loop.start()));
        assert_eq!(are_homotopic(p, &gen_loop, &deg, DEFAULT_BFS_BUDGET).unwrap(), Verdict::No);
    }

    #[test]
    fn path_within_respects_set() {
        let c = fixtures::cycle(4);
        let set = BitSet::from_indices(8, [c.a(1), c.o(1), c.a(2)]);
        let q = path_within(&c.poset, &set, c.a(1), c.a(2)).unwrap();
        assert_eq!((q.start(), q.end()), (c.a(1), c.a(2)));
        assert!(q.edges().iter().all(|b| set.contains(b.support)));
        let set2 = BitSet::from_indices(8, [c.a(1), c.a(3)]);
        assert!(path_within(&c.poset, &set2, c.a(1), c.a(3)).is_none());
    }
}
