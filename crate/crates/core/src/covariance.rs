//! A symbolic locally covariant toy theory: Pauli strings labelled by lattice sites.
//!
//! Every lattice carries the algebra generated by single-site Pauli symbols. Embeddings act by
//! relabelling sites, so all functorial identities are checked by exact symbol comparison.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

use crate::bitset::BitSet;
use crate::lattice::{
    build_lattice, embed_lattice, enumerate_diamonds, identity_embedding, isometry_sample, CausalLattice,
    Isometry, LatticeEmbedding, LatticeError, Site, Topology,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    X,
    Y,
    Z,
}

impl Letter {
    pub const ALL: [Letter; 3] = [Letter::X, Letter::Y, Letter::Z];

    fn other(self) -> Letter {
        if self == Letter::Z {
            Letter::X
        } else {
            Letter::Z
        }
    }
}

/// A tensor product of single-site Pauli symbols; the empty string is the unit.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SiteString(pub BTreeMap<Site, Letter>);

impl SiteString {
    pub fn unit() -> Self {
        SiteString(BTreeMap::new())
    }

    pub fn single(site: Site, letter: Letter) -> Self {
        SiteString(BTreeMap::from([(site, letter)]))
    }

    pub fn uniform(sites: impl IntoIterator<Item = Site>, letter: Letter) -> Self {
        SiteString(sites.into_iter().map(|s| (s, letter)).collect())
    }

    pub fn support(&self) -> BTreeSet<Site> {
        self.0.keys().copied().collect()
    }

    pub fn commutes(&self, other: &SiteString) -> bool {
        let clashes = self.0.iter().filter(|(s, l)| other.0.get(s).is_some_and(|m| m != *l)).count();
        clashes % 2 == 0
    }

    /// Product up to phase.
    pub fn times(&self, other: &SiteString) -> SiteString {
        let mut out = self.0.clone();
        for (&s, &l) in &other.0 {
            match out.get(&s).copied() {
                None => {
                    out.insert(s, l);
                }
                Some(m) if m == l => {
                    out.remove(&s);
                }
                Some(m) => {
                    let third = Letter::ALL.into_iter().find(|&k| k != m && k != l).unwrap_or(Letter::X);
                    out.insert(s, third);
                }
            }
        }
        SiteString(out)
    }

    fn outside(&self, sites: &BTreeSet<Site>) -> SiteString {
        SiteString(self.0.iter().filter(|(s, _)| !sites.contains(s)).map(|(&s, &l)| (s, l)).collect())
    }

    pub fn relabel(&self, f: impl Fn(Site) -> Option<Site>) -> Option<SiteString> {
        let mut out = BTreeMap::new();
        for (&s, &l) in &self.0 {
            out.insert(f(s)?, l);
        }
        (out.len() == self.0.len()).then_some(SiteString(out))
    }
}

impl fmt::Debug for SiteString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|(s, l)| format!("{l:?}{s:?}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl fmt::Display for SiteString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Serialize for SiteString {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut m = serializer.serialize_map(Some(self.0.len()))?;
        for (s, l) in &self.0 {
            m.serialize_entry(&format!("{},{}", s.t, s.x), l)?;
        }
        m.end()
    }
}

/// A real linear combination of site strings with nonzero coefficients.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Element {
    pub terms: BTreeMap<SiteString, f64>,
}

#[derive(Serialize)]
struct TermRecord<'a> {
    ops: &'a SiteString,
    coeff: f64,
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.terms.iter().map(|(ops, &coeff)| TermRecord { ops, coeff }))
    }
}

impl Element {
    pub fn zero() -> Self {
        Element::default()
    }

    pub fn add_term(&mut self, s: SiteString, c: f64) {
        let v = self.terms.entry(s.clone()).or_insert(0.0);
        *v += c;
        if *v == 0.0 {
            self.terms.remove(&s);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support(&self) -> BTreeSet<Site> {
        self.terms.keys().flat_map(|s| s.0.keys().copied()).collect()
    }

    pub fn scale(&self, c: f64) -> Element {
        let mut out = Element::zero();
        for (s, &v) in &self.terms {
            out.add_term(s.clone(), c * v);
        }
        out
    }

    pub fn plus(&self, other: &Element) -> Element {
        let mut out = self.clone();
        for (s, &v) in &other.terms {
            out.add_term(s.clone(), v);
        }
        out
    }
}

/// The algebra generated by all single-site symbols on `sites` together with `adjoined` strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymbolicAlgebra {
    pub sites: BTreeSet<Site>,
    pub adjoined: Vec<SiteString>,
}

impl SymbolicAlgebra {
    pub fn on_sites(sites: impl IntoIterator<Item = Site>) -> Self {
        SymbolicAlgebra { sites: sites.into_iter().collect(), adjoined: Vec::new() }
    }

    pub fn generators(&self) -> Vec<SiteString> {
        let mut g: Vec<SiteString> = self
            .sites
            .iter()
            .flat_map(|&s| [SiteString::single(s, Letter::X), SiteString::single(s, Letter::Z)])
            .collect();
        g.extend(self.adjoined.iter().cloned());
        g
    }

    /// Membership up to phase: the part outside `sites` must be a product of adjoined parts.
    pub fn contains(&self, s: &SiteString) -> bool {
        let rest = s.outside(&self.sites);
        if rest.0.is_empty() {
            return true;
        }
        let outer: Vec<SiteString> = self.adjoined.iter().map(|a| a.outside(&self.sites)).collect();
        let k = outer.len().min(16);
        (1u32..(1 << k)).any(|mask| {
            let p = (0..k).filter(|i| mask >> i & 1 == 1).fold(SiteString::unit(), |acc, i| acc.times(&outer[i]));
            p == rest
        })
    }

    pub fn contains_algebra(&self, other: &SymbolicAlgebra) -> bool {
        other.sites.is_subset(&self.sites) && other.adjoined.iter().all(|a| self.contains(a))
    }

    pub fn same_as(&self, other: &SymbolicAlgebra) -> bool {
        self.contains_algebra(other) && other.contains_algebra(self)
    }

    pub fn relabel(&self, f: impl Fn(Site) -> Option<Site>) -> Option<SymbolicAlgebra> {
        let mut sites = BTreeSet::new();
        for &s in &self.sites {
            sites.insert(f(s)?);
        }
        let adjoined = self.adjoined.iter().map(|a| a.relabel(&f)).collect::<Option<Vec<_>>>()?;
        Some(SymbolicAlgebra { sites, adjoined })
    }

    /// A pair of generators that fail to commute, if any.
    pub fn first_noncommuting(&self, other: &SymbolicAlgebra) -> Option<(SiteString, SiteString)> {
        if let Some(&s) = self.sites.intersection(&other.sites).next() {
            return Some((SiteString::single(s, Letter::X), SiteString::single(s, Letter::Z)));
        }
        for a in &self.adjoined {
            if let Some((&s, &l)) = a.0.iter().find(|(s, _)| other.sites.contains(s)) {
                return Some((a.clone(), SiteString::single(s, l.other())));
            }
        }
        for b in &other.adjoined {
            if let Some((&s, &l)) = b.0.iter().find(|(s, _)| self.sites.contains(s)) {
                return Some((SiteString::single(s, l.other()), b.clone()));
            }
        }
        for a in &self.adjoined {
            for b in &other.adjoined {
                if !a.commutes(b) {
                    return Some((a.clone(), b.clone()));
                }
            }
        }
        None
    }
}

fn sites_of(l: &CausalLattice, set: &BitSet) -> BTreeSet<Site> {
    set.iter().map(|i| l.site(i)).collect()
}

fn all_sites(l: &CausalLattice) -> BTreeSet<Site> {
    (0..l.sites()).map(|i| l.site(i)).collect()
}

/// The Pauli toy functor, optionally with a global string of the ambient lattice adjoined to
/// every local algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TheoryFunctor {
    pub adjoined_global: Option<Letter>,
}

impl TheoryFunctor {
    pub fn pauli() -> Self {
        TheoryFunctor { adjoined_global: None }
    }

    pub fn adversarial(letter: Letter) -> Self {
        TheoryFunctor { adjoined_global: Some(letter) }
    }

    fn global(&self, l: &CausalLattice) -> Vec<SiteString> {
        self.adjoined_global.map(|c| SiteString::uniform(all_sites(l), c)).into_iter().collect()
    }

    pub fn object(&self, l: &CausalLattice) -> SymbolicAlgebra {
        SymbolicAlgebra { sites: all_sites(l), adjoined: self.global(l) }
    }

    /// The local algebra of a region of `l`.
    pub fn local(&self, l: &CausalLattice, region: &BitSet) -> SymbolicAlgebra {
        SymbolicAlgebra { sites: sites_of(l, region), adjoined: self.global(l) }
    }

    pub fn alpha<'a>(&self, psi: &'a LatticeEmbedding) -> Relabeling<'a> {
        alpha(psi)
    }
}

/// The algebra morphism induced by an embedding.
#[derive(Debug, Clone, Copy)]
pub struct Relabeling<'a> {
    pub psi: &'a LatticeEmbedding,
}

pub fn alpha(psi: &LatticeEmbedding) -> Relabeling<'_> {
    Relabeling { psi }
}

impl Relabeling<'_> {
    pub fn site(&self, s: Site) -> Option<Site> {
        let (src, dst) = (&self.psi.src, &self.psi.dst);
        (s.t < src.height && s.x < src.width).then(|| dst.site(self.psi.site_map[src.index(s)]))
    }

    pub fn string(&self, s: &SiteString) -> Option<SiteString> {
        s.relabel(|x| self.site(x))
    }

    pub fn element(&self, e: &Element) -> Option<Element> {
        let mut out = Element::zero();
        for (s, &c) in &e.terms {
            out.add_term(self.string(s)?, c);
        }
        Some(out)
    }

    pub fn algebra(&self, a: &SymbolicAlgebra) -> Option<SymbolicAlgebra> {
        a.relabel(|x| self.site(x))
    }

    /// Injective, unital and adjoint-preserving on the given symbols.
    pub fn is_morphism_on(&self, symbols: &[SiteString]) -> bool {
        let mut seen = BTreeSet::new();
        let unital = self.string(&SiteString::unit()) == Some(SiteString::unit());
        unital && symbols.iter().all(|s| self.string(s).is_some_and(|t| seen.insert(t)))
    }
}

/// Every single-site symbol, the unit, and `extra` random multi-site strings.
pub fn symbol_corpus(l: &CausalLattice, extra: usize, seed: u64) -> Vec<SiteString> {
    let mut out = vec![SiteString::unit()];
    for i in 0..l.sites() {
        for c in Letter::ALL {
            out.push(SiteString::single(l.site(i), c));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen: BTreeSet<SiteString> = out.iter().cloned().collect();
    while out.len() < 1 + 3 * l.sites() + extra {
        let s: BTreeMap<Site, Letter> = (0..l.sites())
            .filter_map(|i| rng.gen_bool(0.4).then(|| (l.site(i), Letter::ALL[rng.gen_range(0..3)])))
            .collect();
        if seen.insert(SiteString(s.clone())) {
            out.push(SiteString(s));
        }
    }
    out
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct LawReport {
    pub identities: usize,
    pub compositions: usize,
    pub symbols: usize,
    pub failures: Vec<String>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// α_id = id and α_{ψ'∘ψ} = α_{ψ'}∘α_ψ on every composable pair in `corpus`.
pub fn functor_laws(corpus: &[LatticeEmbedding], extra: usize, seed: u64) -> LawReport {
    let mut rep = LawReport::default();
    let mut lattices: Vec<&CausalLattice> = Vec::new();
    for e in corpus {
        for l in [&e.src, &e.dst] {
            if !lattices.contains(&l) {
                lattices.push(l);
            }
        }
    }
    for l in lattices {
        let id = identity_embedding(l);
        let a = alpha(&id);
        for s in symbol_corpus(l, extra, seed) {
            rep.symbols += 1;
            if a.string(&s).as_ref() != Some(&s) {
                rep.failures.push(format!("identity on {l} moves {s}"));
            }
        }
        rep.identities += 1;
    }
    for inner in corpus {
        let symbols = symbol_corpus(&inner.src, extra, seed);
        if !alpha(inner).is_morphism_on(&symbols) {
            rep.failures.push(format!("{} -> {} is not injective", inner.src, inner.dst));
        }
        for outer in corpus.iter().filter(|o| o.src == inner.dst) {
            let Ok(comp) = inner.then(outer) else { continue };
            rep.compositions += 1;
            let (a, b, c) = (alpha(inner), alpha(outer), alpha(&comp));
            for s in &symbols {
                rep.symbols += 1;
                let two_step = a.string(s).and_then(|t| b.string(&t));
                if two_step != c.string(s) {
                    rep.failures.push(format!(
                        "{} -> {} -> {} differs on {s}",
                        inner.src, inner.dst, outer.dst
                    ));
                    break;
                }
            }
        }
    }
    rep
}

/// Lattices used for corpus construction.
pub fn corpus_lattices() -> Vec<CausalLattice> {
    let mut out = Vec::new();
    for (topology, w, h) in [
        (Topology::Strip, 3, 2),
        (Topology::Strip, 3, 3),
        (Topology::Strip, 4, 3),
        (Topology::Strip, 5, 3),
        (Topology::Cylinder, 6, 2),
        (Topology::Cylinder, 6, 3),
        (Topology::Cylinder, 6, 4),
        (Topology::Cylinder, 8, 3),
        (Topology::Cylinder, 8, 4),
    ] {
        if let Ok(l) = build_lattice(topology, w, h) {
            out.push(l);
        }
    }
    out
}

/// Every valid embedding between corpus lattices, identities included.
pub fn embedding_corpus() -> Vec<LatticeEmbedding> {
    embeddings_among(&corpus_lattices())
}

/// Every valid embedding between the given lattices at every offset.
pub fn embeddings_among(ls: &[CausalLattice]) -> Vec<LatticeEmbedding> {
    let mut out = Vec::new();
    for src in ls {
        for dst in ls {
            for dt in 0..dst.height {
                for dx in 0..dst.width {
                    if let Ok(e) = embed_lattice(src, dst, dt, dx) {
                        out.push(e);
                    }
                }
            }
        }
    }
    out
}

/// Outcome of one family of symbolic checks.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Check {
    pub passed: bool,
    pub checked: usize,
    pub witness: Option<String>,
}

impl Check {
    fn new() -> Self {
        Check { passed: true, checked: 0, witness: None }
    }

    fn fail(&mut self, w: String) {
        if self.passed {
            self.passed = false;
            self.witness = Some(w);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HaagKastlerReport {
    pub lattice: String,
    pub diamonds: usize,
    pub isotony: Check,
    pub covariance: Check,
    /// Isometry images of diamonds that are regions but not diamonds of the truncated lattice.
    pub off_poset_images: usize,
    pub group_law: Check,
    pub causality: Check,
}

impl HaagKastlerReport {
    pub fn passed(&self) -> bool {
        self.isotony.passed && self.covariance.passed && self.group_law.passed && self.causality.passed
    }
}

/// α̃_κ acting on symbols: the lattice isometry relabels sites.
pub fn tilde_alpha(kappa: &Isometry, l: &CausalLattice, a: &SymbolicAlgebra) -> Option<SymbolicAlgebra> {
    a.relabel(|s| kappa.apply(l, s))
}

/// Builds the diamond net 𝔄(O) = α_{M,O}(𝒜(O)) and checks isotony, isometry covariance,
/// the group law on generators, and causality.
pub fn recover_haag_kastler(f: &TheoryFunctor, l: &CausalLattice) -> Result<HaagKastlerReport, LatticeError> {
    let dp = enumerate_diamonds(l)?;
    let n = dp.diamonds.len();
    let algs: Vec<SymbolicAlgebra> = (0..n).map(|i| f.local(l, dp.points(i))).collect();

    let mut isotony = Check::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && dp.poset.leq(i, j) {
                isotony.checked += 1;
                if !algs[j].contains_algebra(&algs[i]) {
                    isotony.fail(format!("{} <= {}", dp.diamonds[i].name(), dp.diamonds[j].name()));
                }
            }
        }
    }

    let sample = isometry_sample(l);
    let mut covariance = Check::new();
    let mut off_poset = 0;
    for k in &sample {
        for i in 0..n {
            let Some(img) = k.apply_set(l, dp.points(i)) else { continue };
            covariance.checked += 1;
            let name = format!("{k:?} on {}", dp.diamonds[i].name());
            let target = match dp.index_of_points(&img) {
                Some(j) => algs[j].clone(),
                None => {
                    off_poset += 1;
                    f.local(l, &img)
                }
            };
            if !tilde_alpha(k, l, &algs[i]).is_some_and(|m| m.same_as(&target)) {
                covariance.fail(name);
            }
        }
    }

    let mut group_law = Check::new();
    let gens = symbol_corpus(l, 0, 0);
    for k1 in &sample {
        for k2 in &sample {
            let k = k1.compose(k2, l);
            for g in &gens {
                let Some(two) = g.relabel(|s| k2.apply(l, s)).and_then(|t| t.relabel(|s| k1.apply(l, s))) else {
                    continue;
                };
                group_law.checked += 1;
                if g.relabel(|s| k.apply(l, s)).as_ref() != Some(&two) {
                    group_law.fail(format!("{k1:?} after {k2:?} on {g}"));
                }
            }
        }
    }

    let mut causality = Check::new();
    for i in 0..n {
        for j in dp.perp_rows[i].iter().filter(|&j| j > i) {
            causality.checked += 1;
            if let Some((a, b)) = algs[i].first_noncommuting(&algs[j]) {
                causality.fail(format!(
                    "{} and {}: {a} anticommutes with {b}",
                    dp.diamonds[i].name(),
                    dp.diamonds[j].name()
                ));
            }
        }
    }

    Ok(HaagKastlerReport {
        lattice: l.to_string(),
        diamonds: n,
        isotony,
        covariance,
        off_poset_images: off_poset,
        group_law,
        causality,
    })
}

/// The linear field Φ_M(f) = Σ_x f(x) X_x.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FieldFamily;

impl FieldFamily {
    pub fn phi(&self, l: &CausalLattice, f: &[f64]) -> Element {
        let mut e = Element::zero();
        for (i, &v) in f.iter().enumerate().take(l.sites()) {
            if v != 0.0 {
                e.add_term(SiteString::single(l.site(i), Letter::X), v);
            }
        }
        e
    }
}

/// ψ_* f: f∘ψ⁻¹ on the image, zero elsewhere.
pub fn pushforward(psi: &LatticeEmbedding, f: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; psi.dst.sites()];
    for (i, &j) in psi.site_map.iter().enumerate() {
        out[j] = f.get(i).copied().unwrap_or(0.0);
    }
    out
}

/// α_ψ(Φ_{M₁}(f)) = Φ_{M₂}(ψ_* f), compared exactly.
pub fn field_naturality(phi: &FieldFamily, psi: &LatticeEmbedding, f: &[f64]) -> bool {
    let lhs = alpha(psi).element(&phi.phi(&psi.src, f));
    let rhs = phi.phi(&psi.dst, &pushforward(psi, f));
    lhs.as_ref() == Some(&rhs)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomReport {
    pub causal: bool,
    pub causal_pairs: usize,
    pub causal_witness: Option<String>,
    pub time_slice: bool,
    pub slice_embeddings: usize,
    pub time_slice_witness: Option<String>,
}

fn contains_slice(psi: &LatticeEmbedding) -> Option<usize> {
    let img = psi.image();
    let l = &psi.dst;
    (0..l.height).find(|&t| (0..l.width).all(|x| img.contains(l.index(Site { t, x }))))
}

/// Causality and time slice for embeddings into a common target.
pub fn axiom_report(f: &TheoryFunctor, psis: &[LatticeEmbedding]) -> AxiomReport {
    let mut rep = AxiomReport {
        causal: true,
        causal_pairs: 0,
        causal_witness: None,
        time_slice: true,
        slice_embeddings: 0,
        time_slice_witness: None,
    };
    let images: Vec<Option<SymbolicAlgebra>> = psis.iter().map(|p| alpha(p).algebra(&f.object(&p.src))).collect();
    for i in 0..psis.len() {
        for j in i + 1..psis.len() {
            let (p, q) = (&psis[i], &psis[j]);
            if p.dst != q.dst || !p.dst.disjoint(&p.image(), &q.image()) {
                continue;
            }
            rep.causal_pairs += 1;
            let clash = match (&images[i], &images[j]) {
                (Some(a), Some(b)) => a.first_noncommuting(b).map(|(x, y)| format!("{x} anticommutes with {y}")),
                _ => Some("image outside target".to_string()),
            };
            if let (Some(w), true) = (clash, rep.causal) {
                rep.causal = false;
                rep.causal_witness = Some(format!("embeddings {i} and {j}: {w}"));
            }
        }
    }
    for (i, p) in psis.iter().enumerate() {
        if contains_slice(p).is_none() {
            continue;
        }
        rep.slice_embeddings += 1;
        let target = f.object(&p.dst);
        let covered = images[i].as_ref().is_some_and(|a| a.contains_algebra(&target));
        if !covered && rep.time_slice {
            rep.time_slice = false;
            let img = p.image();
            let outside = (0..p.dst.sites()).find(|&k| !img.contains(k)).map(|k| p.dst.site(k));
            rep.time_slice_witness = Some(match outside {
                Some(s) => SiteString::single(s, Letter::X).to_string(),
                None => "adjoined string outside the image".to_string(),
            });
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{cylinder, strip};
    use proptest::prelude::*;
    use rand::Rng;

    fn s(t: usize, x: usize) -> Site {
        Site { t, x }
    }

    #[test]
    fn alpha_examples() {
        let l = strip(4, 3);
        let id = identity_embedding(&l);
        for g in symbol_corpus(&l, 5, 1) {
            assert_eq!(alpha(&id).string(&g), Some(g.clone()));
        }
        let e = embed_lattice(&l, &strip(6, 3), 0, 2).unwrap();
        let x = SiteString::single(s(0, 1), Letter::X);
        assert_eq!(alpha(&e).string(&x), Some(SiteString::single(s(0, 3), Letter::X)));
        let e2 = embed_lattice(&strip(6, 3), &cylinder(8, 3), 0, 1).unwrap();
        let comp = e.then(&e2).unwrap();
        for g in symbol_corpus(&l, 10, 2) {
            let two = alpha(&e).string(&g).and_then(|t| alpha(&e2).string(&t));
            assert_eq!(two, alpha(&comp).string(&g));
        }
    }

    #[test]
    fn string_products_and_commutation() {
        let a = SiteString(BTreeMap::from([(s(0, 0), Letter::X), (s(0, 1), Letter::Z)]));
        let b = SiteString(BTreeMap::from([(s(0, 0), Letter::Z), (s(0, 1), Letter::X)]));
        assert!(a.commutes(&b));
        assert!(!a.commutes(&SiteString::single(s(0, 0), Letter::Y)));
        assert_eq!(a.times(&a), SiteString::unit());
        assert_eq!(a.times(&b), SiteString::uniform([s(0, 0), s(0, 1)], Letter::Y));
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(json, r#"{"0,0":"X","0,1":"Z"}"#);
    }

    #[test]
    fn haag_kastler_examples() {
        let c = cylinder(6, 3);
        let rep = recover_haag_kastler(&TheoryFunctor::pauli(), &c).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert!(rep.covariance.checked > 0 && rep.causality.checked > 0);
        let dp = enumerate_diamonds(&c).unwrap();
        let rot = Isometry { dt: 0, dx: 1, reflect: false };
        let f = TheoryFunctor::pauli();
        for i in 0..dp.diamonds.len() {
            let img = rot.apply_set(&c, dp.points(i)).unwrap();
            let j = dp.index_of_points(&img).unwrap();
            let moved = tilde_alpha(&rot, &c, &f.local(&c, dp.points(i))).unwrap();
            assert_eq!(moved, f.local(&c, dp.points(j)));
        }
        let rep = recover_haag_kastler(&f, &strip(5, 3)).unwrap();
        assert!(rep.isotony.passed && rep.causality.passed);
    }

    #[test]
    fn adversarial_functor_breaks_causality() {
        let rep = recover_haag_kastler(&TheoryFunctor::adversarial(Letter::X), &cylinder(6, 3)).unwrap();
        assert!(rep.isotony.passed);
        assert!(!rep.causality.passed);
        assert!(rep.causality.witness.unwrap().contains("anticommutes"));
    }

    #[test]
    fn field_examples() {
        let phi = FieldFamily;
        let src = strip(4, 3);
        let e = embed_lattice(&src, &cylinder(8, 3), 0, 3).unwrap();
        let mut f = vec![0.0; src.sites()];
        f[5] = 1.0;
        let img = alpha(&e).element(&phi.phi(&src, &f)).unwrap();
        assert_eq!(img.terms.len(), 1);
        assert_eq!(img.support(), BTreeSet::from([e.dst.site(e.site_map[5])]));
        assert!(field_naturality(&phi, &e, &f));
        let zero = vec![0.0; src.sites()];
        assert!(phi.phi(&src, &zero).is_zero());
        assert!(field_naturality(&phi, &e, &zero));
    }

    #[test]
    fn axiom_examples() {
        let c8 = cylinder(8, 4);
        let a = embed_lattice(&strip(3, 2), &c8, 0, 0).unwrap();
        let b = embed_lattice(&strip(3, 2), &c8, 0, 4).unwrap();
        let rep = axiom_report(&TheoryFunctor::pauli(), &[a.clone(), b]);
        assert!(rep.causal && rep.causal_pairs == 1);
        assert!(axiom_report(&TheoryFunctor::pauli(), &[a]).causal);
        let c6 = cylinder(6, 4);
        assert!(embed_lattice(&strip(6, 2), &c6, 0, 0).is_err());
        let sl = embed_lattice(&cylinder(6, 2), &c6, 0, 0).unwrap();
        let rep = axiom_report(&TheoryFunctor::pauli(), &[sl.clone()]);
        assert!(!rep.time_slice);
        let w = rep.time_slice_witness.unwrap();
        assert!(w.starts_with('X'));
        assert!(!sl.image().contains(c6.index(s(2, 0))));
        assert_eq!(w, "X(2,0)");
    }

    #[test]
    fn corpus_functor_laws() {
        let corpus = embedding_corpus();
        assert!(corpus.len() > 20);
        let rep = functor_laws(&corpus, 3, 0);
        assert!(rep.passed(), "{:?}", rep.failures.first());
        assert!(rep.compositions > corpus.len());
    }

    proptest! {
        #[test]
        fn phi_is_linear_with_exact_support(
            f in proptest::collection::vec(-3i32..4, 12),
            g in proptest::collection::vec(-3i32..4, 12),
            c in -4i32..5,
        ) {
            let l = strip(4, 3);
            let phi = FieldFamily;
            let f: Vec<f64> = f.into_iter().map(f64::from).collect();
            let g: Vec<f64> = g.into_iter().map(f64::from).collect();
            let c = f64::from(c);
            let sum: Vec<f64> = f.iter().zip(&g).map(|(a, b)| c * a + b).collect();
            prop_assert_eq!(phi.phi(&l, &sum), phi.phi(&l, &f).scale(c).plus(&phi.phi(&l, &g)));
            let supp: BTreeSet<Site> = (0..12).filter(|&i| f[i] != 0.0).map(|i| l.site(i)).collect();
            prop_assert_eq!(phi.phi(&l, &f).support(), supp);
        }

        #[test]
        fn naturality_on_random_functions(seed in 0u64..1000, k in 0usize..64) {
            let corpus = embedding_corpus();
            let e = &corpus[k % corpus.len()];
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f: Vec<f64> = (0..e.src.sites()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            prop_assert!(field_naturality(&FieldFamily, e, &f));
        }
    }
}
