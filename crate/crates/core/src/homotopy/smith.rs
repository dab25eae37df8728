//! Integer abelianization: sparse unit-pivot elimination followed by Smith normal form.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

impl AbelianInvariants {
    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

/// Smith normal form of a dense integer matrix: returns (diagonal, V) with U·A·V = diag.
pub fn smith_normal_form(a: &[Vec<i128>], cols: usize) -> (Vec<i128>, Vec<Vec<i128>>) {
    let mut m: Vec<Vec<i128>> = a.to_vec();
    let rows = m.len();
    let mut v: Vec<Vec<i128>> = (0..cols).map(|i| (0..cols).map(|j| (i == j) as i128).collect()).collect();
    let col_op = |m: &mut Vec<Vec<i128>>, v: &mut Vec<Vec<i128>>, dst: usize, src: usize, q: i128| {
        // column dst -= q * column src
        for row in m.iter_mut() {
            row[dst] -= q * row[src];
        }
        for row in v.iter_mut() {
            row[dst] -= q * row[src];
        }
    };
    let col_swap = |m: &mut Vec<Vec<i128>>, v: &mut Vec<Vec<i128>>, a: usize, b: usize| {
        for row in m.iter_mut() {
            row.swap(a, b);
        }
        for row in v.iter_mut() {
            row.swap(a, b);
        }
    };
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if m[i][j] != 0 && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                break;
            };
            m.swap(t, bi);
            col_swap(&mut m, &mut v, t, bj);
            let piv = m[t][t];
            let mut dirty = false;
            for i in t + 1..rows {
                let q = m[i][t] / piv;
                if q != 0 {
                    let rt = m[t].clone();
                    for (x, y) in m[i].iter_mut().zip(&rt) {
                        *x -= q * y;
                    }
                }
                dirty |= m[i][t] != 0;
            }
            for j in t + 1..cols {
                let q = m[t][j] / piv;
                if q != 0 {
                    col_op(&mut m, &mut v, j, t, q);
                }
                dirty |= m[t][j] != 0;
            }
            if dirty {
                continue;
            }
            // divisibility of the trailing block
            let mut bad = None;
            'outer: for i in t + 1..rows {
                for j in t + 1..cols {
                    if m[i][j] % piv != 0 {
                        bad = Some(i);
                        break 'outer;
                    }
                }
            }
            match bad {
                Some(i) => {
                    let ri = m[i].clone();
                    for (x, y) in m[t].iter_mut().zip(&ri) {
                        *x += y;
                    }
                }
                None => break,
            }
        }
        if t < rows && m[t][t] < 0 {
            for row in m.iter_mut() {
                row[t] = -row[t];
            }
            for row in v.iter_mut() {
                row[t] = -row[t];
            }
        }
        diag.push(if t < rows { m[t][t] } else { 0 });
    }
    diag.resize(cols, 0);
    (diag, v)
}

/// Reduces a row set to an echelon basis of its integer row lattice.
fn echelon_rows(rows: Vec<Vec<i128>>, cols: usize) -> Vec<Vec<i128>> {
    let mut basis: Vec<Option<Vec<i128>>> = vec![None; cols];
    for mut r in rows {
        let mut c = 0;
        while c < cols {
            if r[c] == 0 {
                c += 1;
                continue;
            }
            match basis[c].take() {
                None => {
                    if r[c] < 0 {
                        r.iter_mut().for_each(|x| *x = -*x);
                    }
                    basis[c] = Some(r);
                    break;
                }
                Some(mut b) => {
                    // extended Euclid on the pivot column
                    while r[c] != 0 {
                        let q = b[c] / r[c];
                        for (x, y) in b.iter_mut().zip(&r) {
                            *x -= q * y;
                        }
                        std::mem::swap(&mut b, &mut r);
                    }
                    if b[c] < 0 {
                        b.iter_mut().for_each(|x| *x = -*x);
                    }
                    basis[c] = Some(b);
                    c += 1;
                }
            }
        }
    }
    basis.into_iter().flatten().collect()
}

/// Maps integer generator vectors to coordinates in the abelianized group.
#[derive(Debug, Clone)]
pub struct Abelianizer {
    ngens: usize,
    subs: Vec<(usize, Vec<(usize, i128)>)>,
    alive: Vec<usize>,
    diag: Vec<i128>,
    v: Vec<Vec<i128>>,
}

impl Abelianizer {
    /// Relators given as sparse exponent vectors.
    pub fn new(ngens: usize, relators: &[Vec<(usize, i64)>]) -> Self {
        let mut rels: Vec<BTreeMap<usize, i128>> = relators
            .iter()
            .map(|r| {
                let mut m = BTreeMap::new();
                for &(g, e) in r {
                    *m.entry(g).or_insert(0) += e as i128;
                }
                m.retain(|_, e| *e != 0);
                m
            })
            .collect();
        let mut occ: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); ngens];
        for (ri, r) in rels.iter().enumerate() {
            for &g in r.keys() {
                occ[g].insert(ri);
            }
        }
        let mut alive = vec![true; ngens];
        let mut subs = Vec::new();
        let mut order: Vec<usize> = (0..rels.len()).collect();
        order.sort_by_key(|&r| rels[r].len());
        let mut changed = true;
        while changed {
            changed = false;
            for &r in &order {
                if rels[r].is_empty() {
                    continue;
                }
                let pick = rels[r]
                    .iter()
                    .filter(|(_, e)| e.abs() == 1)
                    .min_by_key(|(g, _)| occ[**g].len())
                    .map(|(g, e)| (*g, *e));
                let Some((j, sign)) = pick else { continue };
                let row = std::mem::take(&mut rels[r]);
                for g in row.keys() {
                    occ[*g].remove(&r);
                }
                let expr: Vec<(usize, i128)> =
                    row.iter().filter(|(g, _)| **g != j).map(|(g, e)| (*g, -sign * e)).collect();
                let users: Vec<usize> = occ[j].iter().copied().collect();
                for r2 in users {
                    let c = rels[r2][&j];
                    let f = c * sign;
                    for (g, e) in &row {
                        let ent = rels[r2].entry(*g).or_insert(0);
                        *ent -= f * e;
                        if *ent == 0 {
                            rels[r2].remove(g);
                            occ[*g].remove(&r2);
                        } else {
                            occ[*g].insert(r2);
                        }
                    }
                }
                alive[j] = false;
                subs.push((j, expr));
                changed = true;
            }
        }
        let alive: Vec<usize> = (0..ngens).filter(|&g| alive[g]).collect();
        let pos: BTreeMap<usize, usize> = alive.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let m = alive.len();
        let dense: Vec<Vec<i128>> = rels
            .iter()
            .filter(|r| !r.is_empty())
            .map(|r| {
                let mut row = vec![0i128; m];
                for (g, e) in r {
                    row[pos[g]] = *e;
                }
                row
            })
            .collect();
        let ech = echelon_rows(dense, m);
        let (diag, v) = smith_normal_form(&ech, m);
        Abelianizer { ngens, subs, alive, diag, v }
    }

    pub fn invariants(&self) -> AbelianInvariants {
        let free_rank = self.diag.iter().filter(|&&d| d == 0).count();
        let mut torsion: Vec<u64> = self.diag.iter().filter(|&&d| d > 1).map(|&d| d as u64).collect();
        torsion.sort();
        AbelianInvariants { free_rank, torsion }
    }

    /// Coordinates of a generator exponent vector: free parts then torsion parts (reduced).
    pub fn image(&self, x: &[i128]) -> Vec<i128> {
        assert_eq!(x.len(), self.ngens);
        let mut x = x.to_vec();
        for (j, expr) in &self.subs {
            let c = x[*j];
            if c != 0 {
                x[*j] = 0;
                for (g, e) in expr {
                    x[*g] += c * e;
                }
            }
        }
        let y: Vec<i128> = (0..self.alive.len())
            .map(|k| self.alive.iter().enumerate().map(|(i, &g)| x[g] * self.v[i][k]).sum())
            .collect();
        let mut free = Vec::new();
        let mut tors = Vec::new();
        for (k, &d) in self.diag.iter().enumerate() {
            if d == 0 {
                free.push(y[k]);
            } else if d > 1 {
                tors.push(y[k].rem_euclid(d));
            }
        }
        free.extend(tors);
        free
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_cases() {
        assert!(Abelianizer::new(0, &[]).invariants().is_trivial());
        assert_eq!(Abelianizer::new(1, &[]).invariants(), AbelianInvariants { free_rank: 1, torsion: vec![] });
        assert_eq!(
            Abelianizer::new(1, &[vec![(0, 3)]]).invariants(),
            AbelianInvariants { free_rank: 0, torsion: vec![3] }
        );
        // Z/2 x Z/3 = Z/6
        let a = Abelianizer::new(2, &[vec![(0, 2)], vec![(1, 3)]]);
        assert_eq!(a.invariants().torsion, vec![6]);
    }

    #[test]
    fn image_respects_relators() {
        let rels = vec![vec![(0, 1), (1, -1)], vec![(1, 1), (2, -1)], vec![(2, 4)]];
        let a = Abelianizer::new(3, &rels);
        assert_eq!(a.invariants().torsion, vec![4]);
        assert_eq!(a.image(&[1, 0, 0]), a.image(&[0, 1, 0]));
        assert_eq!(a.image(&[4, 0, 0]), a.image(&[0, 0, 0]));
        assert_ne!(a.image(&[2, 0, 0]), a.image(&[0, 0, 0]));
    }

    /// Determinantal-divisor oracle for 2x2 matrices.
    fn oracle_2x2(m: [[i64; 2]; 2]) -> Vec<i128> {
        fn gcd(a: i128, b: i128) -> i128 {
            if b == 0 { a.abs() } else { gcd(b, a % b) }
        }
        let g1 = m.iter().flatten().fold(0i128, |g, &x| gcd(g, x as i128));
        let det = (m[0][0] as i128 * m[1][1] as i128 - m[0][1] as i128 * m[1][0] as i128).abs();
        if g1 == 0 {
            vec![0, 0]
        } else {
            vec![g1, det / g1]
        }
    }

    proptest! {
        #[test]
        fn snf_matches_divisors(a in -9i64..10, b in -9i64..10, c in -9i64..10, d in -9i64..10) {
            let m = vec![vec![a as i128, b as i128], vec![c as i128, d as i128]];
            let (diag, _) = smith_normal_form(&m, 2);
            prop_assert_eq!(diag, oracle_2x2([[a, b], [c, d]]));
        }
    }
}
