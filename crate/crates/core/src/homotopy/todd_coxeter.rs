//! Tietze simplification and HLT coset enumeration over the trivial subgroup.

use std::collections::BTreeSet;

/// A word: letter `g+1` is generator g, `-(g+1)` its inverse.
pub type Word = Vec<i32>;

pub fn inverse(w: &[i32]) -> Word {
    w.iter().rev().map(|&x| -x).collect()
}

pub fn free_reduce(w: &[i32]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &x in w {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

pub fn cyclic_reduce(w: &[i32]) -> Word {
    let mut v = free_reduce(w);
    while v.len() >= 2 && v[0] == -v[v.len() - 1] {
        v.pop();
        v.remove(0);
    }
    v
}

/// Canonical representative of a relator up to rotation and inversion.
fn canonical(w: &[i32]) -> Word {
    let w = cyclic_reduce(w);
    if w.is_empty() {
        return w;
    }
    let mut best = w.clone();
    for cand in [w.clone(), inverse(&w)] {
        for k in 0..cand.len() {
            let mut r = cand[k..].to_vec();
            r.extend_from_slice(&cand[..k]);
            if r < best {
                best = r;
            }
        }
    }
    best
}

/// Result of Tietze simplification.
#[derive(Debug, Clone)]
pub struct Simplified {
    pub generators: Vec<usize>,
    pub relators: Vec<Word>,
}

fn substitute(w: &[i32], g: usize, repl: &[i32]) -> Word {
    let mut out = Vec::with_capacity(w.len());
    let inv = inverse(repl);
    for &x in w {
        if x.unsigned_abs() as usize == g + 1 {
            out.extend_from_slice(if x > 0 { repl } else { &inv });
        } else {
            out.push(x);
        }
    }
    free_reduce(&out)
}

/// Eliminates generators that occur exactly once in a short relator.
pub fn tietze(ngens: usize, relators: &[Word], max_len: usize) -> Simplified {
    let mut rels: BTreeSet<Word> = relators.iter().map(|r| canonical(r)).filter(|r| !r.is_empty()).collect();
    let mut gens: BTreeSet<usize> = (0..ngens).collect();
    loop {
        let mut pick: Option<(usize, Word, Word)> = None;
        for r in &rels {
            if r.len() > max_len {
                continue;
            }
            for (i, &x) in r.iter().enumerate() {
                let g = x.unsigned_abs() as usize - 1;
                if r.iter().filter(|&&y| y.unsigned_abs() as usize == g + 1).count() == 1 {
                    // r = u x v  ⇒  x = u⁻¹ v⁻¹
                    let u = &r[..i];
                    let v = &r[i + 1..];
                    let mut e = inverse(u);
                    e.extend(inverse(v));
                    let e = free_reduce(&e);
                    let repl = if x > 0 { e } else { inverse(&e) };
                    let better = pick.as_ref().is_none_or(|(_, pr, _)| r.len() < pr.len());
                    if better {
                        pick = Some((g, r.clone(), repl));
                    }
                    break;
                }
            }
            if pick.as_ref().is_some_and(|(_, pr, _)| pr.len() <= 1) {
                break;
            }
        }
        let Some((g, r, repl)) = pick else { break };
        rels.remove(&r);
        rels = rels.iter().map(|w| canonical(&substitute(w, g, &repl))).filter(|w| !w.is_empty()).collect();
        gens.remove(&g);
    }
    Simplified { generators: gens.into_iter().collect(), relators: rels.into_iter().collect() }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Enumeration {
    Complete { index: usize },
    Overflow { live: usize },
}

const UNDEF: usize = usize::MAX;

struct Table {
    ncols: usize,
    rows: Vec<Vec<usize>>,
    parent: Vec<usize>,
    defined: usize,
    budget: usize,
}

impl Table {
    fn rep(&mut self, c: usize) -> usize {
        let mut r = c;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut x = c;
        while self.parent[x] != r {
            let n = self.parent[x];
            self.parent[x] = r;
            x = n;
        }
        r
    }

    fn define(&mut self, c: usize, col: usize) -> bool {
        if self.defined >= self.budget {
            return false;
        }
        let d = self.rows.len();
        self.rows.push(vec![UNDEF; self.ncols]);
        self.parent.push(d);
        self.defined += 1;
        self.rows[c][col] = d;
        self.rows[d][col ^ 1] = c;
        true
    }

    fn merge(&mut self, a: usize, b: usize, q: &mut Vec<usize>) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        self.parent[hi] = lo;
        q.push(hi);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        let mut q = Vec::new();
        self.merge(a, b, &mut q);
        let mut i = 0;
        while i < q.len() {
            let g = q[i];
            i += 1;
            for x in 0..self.ncols {
                let d = self.rows[g][x];
                if d == UNDEF {
                    continue;
                }
                self.rows[g][x] = UNDEF;
                if self.rows[d][x ^ 1] == g {
                    self.rows[d][x ^ 1] = UNDEF;
                }
                let mu = self.rep(g);
                let nu = self.rep(d);
                if self.rows[mu][x] != UNDEF {
                    let t = self.rows[mu][x];
                    self.merge(nu, t, &mut q);
                } else if self.rows[nu][x ^ 1] != UNDEF {
                    let t = self.rows[nu][x ^ 1];
                    self.merge(mu, t, &mut q);
                } else {
                    self.rows[mu][x] = nu;
                    self.rows[nu][x ^ 1] = mu;
                }
            }
        }
    }

    fn live(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    /// Returns false when the budget is exhausted.
    fn scan_and_fill(&mut self, c: usize, w: &[usize]) -> bool {
        if w.is_empty() {
            return true;
        }
        let mut f = c;
        let mut b = c;
        let mut i = 0usize;
        let mut j = w.len() as isize - 1;
        loop {
            while (i as isize) <= j && self.rows[f][w[i]] != UNDEF {
                f = self.rows[f][w[i]];
                i += 1;
            }
            if (i as isize) > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return true;
            }
            while j >= i as isize && self.rows[b][w[j as usize] ^ 1] != UNDEF {
                b = self.rows[b][w[j as usize] ^ 1];
                j -= 1;
            }
            if j < i as isize {
                self.coincidence(f, b);
                return true;
            } else if j == i as isize {
                self.rows[f][w[i]] = b;
                self.rows[b][w[i] ^ 1] = f;
                return true;
            } else if !self.define(f, w[i]) {
                return false;
            }
        }
    }
}

/// Enumerates cosets of the trivial subgroup in ⟨gens | relators⟩.
pub fn enumerate_cosets(ngens: usize, relators: &[Word], budget: usize) -> Enumeration {
    let ncols = 2 * ngens.max(1);
    let col = |x: i32| -> usize { 2 * (x.unsigned_abs() as usize - 1) + (x < 0) as usize };
    let rels: Vec<Vec<usize>> = relators.iter().map(|r| r.iter().map(|&x| col(x)).collect()).collect();
    let mut t = Table { ncols, rows: vec![vec![UNDEF; ncols]], parent: vec![0], defined: 1, budget };
    if ngens == 0 {
        return Enumeration::Complete { index: 1 };
    }
    let mut c = 0;
    while c < t.rows.len() {
        if t.live(c) {
            for r in &rels {
                if !t.live(c) {
                    break;
                }
                if !t.scan_and_fill(c, r) {
                    let live = (0..t.rows.len()).filter(|&k| t.live(k)).count();
                    return Enumeration::Overflow { live };
                }
            }
            for x in 0..ncols {
                if !t.live(c) {
                    break;
                }
                if t.rows[c][x] == UNDEF && !t.define(c, x) {
                    let live = (0..t.rows.len()).filter(|&k| t.live(k)).count();
                    return Enumeration::Overflow { live };
                }
            }
        }
        c += 1;
    }
    Enumeration::Complete { index: (0..t.rows.len()).filter(|&k| t.live(k)).count() }
}
