//! Exact volumes of H-polytopes `{t ≥ 0, a·t ≤ c}` over the rationals.
//!
//! Vertices come from basis enumeration (every `d`-subset of constraints with
//! a unique solution that is feasible), boundedness from the extreme rays of
//! the recession cone, and the volume from a pulling triangulation: pick a
//! vertex of a face, cone it over the facets of that face that avoid it, and
//! recurse. All arithmetic is in `BigRational`, so the result is exact.

use crate::{Error, Result, Rat};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Debug, PartialEq)]
pub struct PolytopeH {
    dim: usize,
    rows: Vec<(Vec<Rat>, Rat)>,
}

fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

impl PolytopeH {
    /// `rows[i] = (a, c)` stands for `a·t ≤ c`; `t ≥ 0` is implicit.
    pub fn new(dim: usize, rows: Vec<(Vec<Rat>, Rat)>) -> Result<Self> {
        if dim == 0 || rows.iter().any(|(a, _)| a.len() != dim) {
            return Err(Error::BadPolytope("row length does not match the dimension".into()));
        }
        if dim + rows.len() > 64 {
            return Err(Error::BadPolytope("at most 64 constraints are supported".into()));
        }
        Ok(Self { dim, rows })
    }

    pub fn from_integers(dim: usize, rows: &[(Vec<i64>, i64)]) -> Result<Self> {
        let rows = rows.iter().map(|(a, c)| (a.iter().map(|&x| rat(x)).collect(), rat(*c))).collect();
        Self::new(dim, rows)
    }

    /// The polytope in `(t1, t2, t3, t4, t5, t10)` whose volume is the
    /// leading coefficient of the sum over the torsor variables.
    pub fn cubic_surface() -> Self {
        Self::from_integers(
            6,
            &[
                (vec![3, -2, -1, 4, 2, -3], 1),
                (vec![0, 1, 2, 1, 2, 0], 1),
                (vec![1, 2, 1, 0, 0, 1], 1),
                (vec![0, 2, 1, 2, 1, 6], 2),
            ],
        )
        .expect("well-formed rows")
    }

    pub fn unit_cube(dim: usize) -> Self {
        let rows = (0..dim)
            .map(|i| ((0..dim).map(|j| i64::from(i == j)).collect(), 1))
            .collect::<Vec<_>>();
        Self::from_integers(dim, &rows).expect("well-formed rows")
    }

    pub fn standard_simplex(dim: usize) -> Self {
        Self::from_integers(dim, &[(vec![1; dim], 1)]).expect("well-formed rows")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[(Vec<Rat>, Rat)] {
        &self.rows
    }

    pub fn scale_rhs(&self, c: &Rat) -> Self {
        let rows = self.rows.iter().map(|(a, b)| (a.clone(), b * c)).collect();
        Self { dim: self.dim, rows }
    }

    /// Relabel coordinates: new coordinate `perm[i]` is old coordinate `i`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.dim];
        if perm.len() != self.dim || perm.iter().any(|&p| p >= self.dim || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::InvalidArgument("not a permutation of the coordinates".into()));
        }
        let rows = self
            .rows
            .iter()
            .map(|(a, c)| {
                let mut b = vec![Rat::zero(); self.dim];
                for (i, x) in a.iter().enumerate() {
                    b[perm[i]] = x.clone();
                }
                (b, c.clone())
            })
            .collect();
        Ok(Self { dim: self.dim, rows })
    }

    /// All constraints including `−t_i ≤ 0`.
    fn constraints(&self) -> Vec<(Vec<Rat>, Rat)> {
        let mut all = self.rows.clone();
        for i in 0..self.dim {
            let mut a = vec![Rat::zero(); self.dim];
            a[i] = rat(-1);
            all.push((a, Rat::zero()));
        }
        all
    }

    pub fn vertices(&self) -> Vec<Vec<Rat>> {
        basis_vertices(self.dim, &self.constraints())
    }

    /// `true` iff the recession cone `{d ≥ 0, a·d ≤ 0}` is `{0}`. The cone is
    /// pointed, so it is trivial exactly when its slice `Σd = 1` has no vertex.
    pub fn is_bounded(&self) -> bool {
        let mut cone: Vec<(Vec<Rat>, Rat)> = self.rows.iter().map(|(a, _)| (a.clone(), Rat::zero())).collect();
        for i in 0..self.dim {
            let mut a = vec![Rat::zero(); self.dim];
            a[i] = rat(-1);
            cone.push((a, Rat::zero()));
        }
        cone.push((vec![rat(1); self.dim], rat(1)));
        cone.push((vec![rat(-1); self.dim], rat(-1)));
        basis_vertices(self.dim, &cone).is_empty()
    }

    /// The vertex centroid, returned only if it satisfies every constraint
    /// strictly (so the polytope is full-dimensional).
    pub fn interior_point(&self) -> Option<Vec<Rat>> {
        let verts = self.vertices();
        if verts.is_empty() {
            return None;
        }
        let n = rat(verts.len() as i64);
        let c: Vec<Rat> = (0..self.dim)
            .map(|i| verts.iter().map(|v| v[i].clone()).fold(Rat::zero(), |s, x| s + x) / &n)
            .collect();
        let strict = self.constraints().iter().all(|(a, b)| dot(a, &c) < *b);
        strict.then_some(c)
    }

    pub fn contains(&self, t: &[Rat]) -> bool {
        t.len() == self.dim && self.constraints().iter().all(|(a, b)| dot(a, t) <= *b)
    }
}

fn dot(a: &[Rat], x: &[Rat]) -> Rat {
    a.iter().zip(x).fold(Rat::zero(), |s, (p, q)| s + p * q)
}

/// Row-reduce in place; returns the pivot columns.
fn row_reduce(m: &mut [Vec<Rat>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let (src, dst) = if i < r {
                    let (a, b) = m.split_at_mut(r);
                    (&b[0], &mut a[i])
                } else {
                    let (a, b) = m.split_at_mut(i);
                    (&a[r], &mut b[0])
                };
                for (d, s) in dst.iter_mut().zip(src) {
                    *d -= &f * s;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    pivots
}

fn solve_unique(a: &[&Vec<Rat>], b: &[&Rat]) -> Option<Vec<Rat>> {
    let n = a.len();
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| row.iter().cloned().chain(std::iter::once((*rhs).clone())).collect())
        .collect();
    let pivots = row_reduce(&mut m, n);
    (pivots.len() == n).then(|| m.into_iter().map(|row| row[n].clone()).collect())
}

fn rank(rows: Vec<Vec<Rat>>) -> usize {
    let mut m = rows;
    let cols = m.first().map_or(0, Vec::len);
    row_reduce(&mut m, cols).len()
}

fn det(mut m: Vec<Vec<Rat>>) -> Rat {
    let n = m.len();
    let mut d = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else { return Rat::zero() };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        d *= &m[c][c];
        for i in c + 1..n {
            if !m[i][c].is_zero() {
                let f = &m[i][c] / &m[c][c];
                let (top, bottom) = m.split_at_mut(i);
                for (x, y) in bottom[0][c..n].iter_mut().zip(&top[c][c..n]) {
                    *x -= &f * y;
                }
            }
        }
    }
    d
}

fn combinations(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..=n - (k - cur.len()) {
            cur.push(i);
            go(i + 1, n, k, cur, f);
            cur.pop();
        }
    }
    if k <= n {
        go(0, n, k, &mut Vec::with_capacity(k), &mut f);
    }
}

fn basis_vertices(dim: usize, cons: &[(Vec<Rat>, Rat)]) -> Vec<Vec<Rat>> {
    let mut found = BTreeSet::new();
    combinations(cons.len(), dim, |idx| {
        let a: Vec<&Vec<Rat>> = idx.iter().map(|&i| &cons[i].0).collect();
        let b: Vec<&Rat> = idx.iter().map(|&i| &cons[i].1).collect();
        if let Some(x) = solve_unique(&a, &b) {
            if cons.iter().all(|(a, c)| dot(a, &x) <= *c) {
                found.insert(x);
            }
        }
    });
    found.into_iter().collect()
}

fn affine_dim(verts: &[Vec<Rat>], face: &[usize]) -> usize {
    if face.len() <= 1 {
        return 0;
    }
    let v0 = &verts[face[0]];
    let rows = face[1..]
        .iter()
        .map(|&i| verts[i].iter().zip(v0).map(|(a, b)| a - b).collect())
        .collect();
    rank(rows)
}

struct Triangulator<'a> {
    verts: &'a [Vec<Rat>],
    tight: Vec<u64>,
    ncons: usize,
    simplices: Vec<Vec<usize>>,
}

impl Triangulator<'_> {
    fn run(&mut self, face: &[usize], k: usize, prefix: &mut Vec<usize>) {
        if k == 0 {
            let mut s = prefix.clone();
            s.push(face[0]);
            self.simplices.push(s);
            return;
        }
        let apex = face[0];
        let mut facets: BTreeMap<Vec<usize>, ()> = BTreeMap::new();
        for c in 0..self.ncons {
            let bit = 1u64 << c;
            if self.tight[apex] & bit != 0 {
                continue;
            }
            let g: Vec<usize> = face.iter().copied().filter(|&v| self.tight[v] & bit != 0).collect();
            if g.len() < k || g.len() == face.len() {
                continue;
            }
            if !facets.contains_key(&g) && affine_dim(self.verts, &g) == k - 1 {
                facets.insert(g, ());
            }
        }
        prefix.push(apex);
        for g in facets.into_keys() {
            self.run(&g, k - 1, prefix);
        }
        prefix.pop();
    }
}

/// Exact Euclidean volume.
pub fn polytope_volume(p: &PolytopeH) -> Result<Rat> {
    if !p.is_bounded() {
        return Err(Error::BadPolytope("polytope is unbounded".into()));
    }
    let cons = p.constraints();
    let verts = basis_vertices(p.dim, &cons);
    if verts.is_empty() {
        return Err(Error::BadPolytope("polytope is empty".into()));
    }
    let all: Vec<usize> = (0..verts.len()).collect();
    if affine_dim(&verts, &all) < p.dim {
        return Ok(Rat::zero());
    }
    let tight = verts
        .iter()
        .map(|v| {
            cons.iter()
                .enumerate()
                .filter(|(_, (a, c))| dot(a, v) == *c)
                .fold(0u64, |m, (i, _)| m | (1 << i))
        })
        .collect();
    let mut tri = Triangulator { verts: &verts, tight, ncons: cons.len(), simplices: Vec::new() };
    tri.run(&all, p.dim, &mut Vec::new());
    let fact = (1..=p.dim as i64).fold(Rat::one(), |f, i| f * rat(i));
    let total = tri.simplices.iter().fold(Rat::zero(), |acc, s| {
        let v0 = &verts[s[0]];
        let m = s[1..]
            .iter()
            .map(|&i| verts[i].iter().zip(v0).map(|(a, b)| a - b).collect())
            .collect();
        acc + det(m).abs()
    });
    Ok(total / fact)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rat {
        Rat::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn cube_and_simplex() {
        assert_eq!(polytope_volume(&PolytopeH::unit_cube(6)).unwrap(), rat(1));
        assert_eq!(polytope_volume(&PolytopeH::standard_simplex(6)).unwrap(), q(1, 720));
        assert_eq!(polytope_volume(&PolytopeH::unit_cube(3)).unwrap(), rat(1));
    }

    #[test]
    fn surface_polytope() {
        let p = PolytopeH::cubic_surface();
        assert!(p.is_bounded());
        assert!(p.interior_point().is_some());
        assert_eq!(p.vertices().len(), 28);
        assert_eq!(polytope_volume(&p).unwrap(), q(1, 2880));
    }

    #[test]
    fn rhs_scaling_is_homogeneous() {
        let p = PolytopeH::cubic_surface();
        let v = polytope_volume(&p).unwrap();
        assert_eq!(polytope_volume(&p.scale_rhs(&rat(2))).unwrap(), v * rat(64));
    }

    #[test]
    fn unbounded_and_empty_are_rejected() {
        let open = PolytopeH::from_integers(2, &[(vec![1, -1], 1)]).unwrap();
        assert!(!open.is_bounded());
        assert!(matches!(polytope_volume(&open), Err(Error::BadPolytope(_))));
        let empty = PolytopeH::from_integers(2, &[(vec![1, 1], 1), (vec![-1, -1], -2)]).unwrap();
        assert!(matches!(polytope_volume(&empty), Err(Error::BadPolytope(_))));
    }

    #[test]
    fn flat_polytope_has_zero_volume() {
        let flat = PolytopeH::from_integers(2, &[(vec![1, 0], 0), (vec![0, 1], 1)]).unwrap();
        assert_eq!(polytope_volume(&flat).unwrap(), Rat::zero());
        assert!(flat.interior_point().is_none());
    }

    #[test]
    fn triangle_with_degenerate_vertex() {
        // Three constraints meet at (1, 0).
        let t = PolytopeH::from_integers(2, &[(vec![1, 1], 1), (vec![1, 2], 1)]).unwrap();
        assert_eq!(polytope_volume(&t).unwrap(), q(1, 4));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn volume_is_permutation_invariant(perm in Just((0..6usize).collect::<Vec<_>>()).prop_shuffle()) {
            let p = PolytopeH::cubic_surface();
            prop_assert_eq!(polytope_volume(&p.permute(&perm).unwrap()).unwrap(), q(1, 2880));
        }

        #[test]
        fn boxes(a in 1i64..5, b in 1i64..5, c in 1i64..5) {
            let p = PolytopeH::from_integers(3, &[(vec![1, 0, 0], a), (vec![0, 1, 0], b), (vec![0, 0, 1], c)]).unwrap();
            prop_assert_eq!(polytope_volume(&p).unwrap(), rat(a * b * c));
        }
    }
}
