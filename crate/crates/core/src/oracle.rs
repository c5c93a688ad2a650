//! Brute-force ground truth for small spaces over finite fields.
//!
//! Nothing here goes through the norm, distance or tree code of the rest of
//! the crate: points are digit vectors, the distance is the largest weight
//! at which two points differ, and field arithmetic is done on residues
//! directly.

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::dendrogram::Dendrogram;
use crate::isotree::TableMap;
use crate::par::{self, Exec};
use crate::scalars::{FieldDescriptor, FieldElement};
use crate::spaces::{Point, Space, SpaceDescriptor};
use crate::value::NormValue;

pub const DEFAULT_CAP: u128 = 1_000_000;

/// Index of `x` in `F_4 = {0, 1, x, x²}` times index of `y`.
const F4_MUL: [[u32; 4]; 4] = [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]];

/// A centred isometry as a permutation of point indices.
pub type IndexMap = Vec<usize>;

/// The enumerated points of a finite space together with its own distance.
#[derive(Debug, Clone)]
pub struct Oracle {
    q: u32,
    weights: Vec<NormValue>,
    digits: Vec<Vec<u32>>,
}

impl Oracle {
    pub fn new(space: &Space) -> Result<Self> {
        Self::from_descriptor(space.descriptor())
    }

    pub fn from_descriptor(desc: &SpaceDescriptor) -> Result<Self> {
        desc.field.validate().map_err(|e| Error::Invalid(e.to_string()))?;
        let FieldDescriptor::Finite { q } = desc.field else { return Err(Error::NotFinite) };
        let q = q as u32;
        let n = desc.weights.len();
        let total =
            (q as u64).checked_pow(n as u32).filter(|t| *t <= 1 << 20).ok_or(Error::DomainTooLarge(u128::MAX))?;
        let digits = (0..total)
            .map(|mut k| {
                let mut d = vec![0u32; n];
                for slot in d.iter_mut().rev() {
                    *slot = (k % q as u64) as u32;
                    k /= q as u64;
                }
                d
            })
            .collect();
        Ok(Oracle { q, weights: desc.weights.clone(), digits })
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn point(&self, i: usize) -> Point {
        Point::new(self.digits[i].iter().map(|d| FieldElement::Residue(*d)).collect())
    }

    pub fn points(&self) -> Vec<Point> {
        (0..self.len()).map(|i| self.point(i)).collect()
    }

    fn index(&self, d: &[u32]) -> usize {
        d.iter().fold(0usize, |acc, x| acc * self.q as usize + *x as usize)
    }

    pub fn distance(&self, i: usize, j: usize) -> NormValue {
        self.digits[i]
            .iter()
            .zip(&self.digits[j])
            .zip(&self.weights)
            .filter(|((a, b), _)| a != b)
            .map(|(_, w)| *w)
            .max()
            .unwrap_or(NormValue::ZERO)
    }

    pub fn norm(&self, i: usize) -> NormValue {
        self.distance(i, 0)
    }

    fn add_digit(&self, a: u32, b: u32) -> u32 {
        if self.q == 4 {
            a ^ b
        } else {
            (a + b) % self.q
        }
    }

    fn mul_digit(&self, a: u32, b: u32) -> u32 {
        if self.q == 4 {
            F4_MUL[a as usize][b as usize]
        } else {
            a * b % self.q
        }
    }

    fn add(&self, i: usize, j: usize) -> usize {
        let d: Vec<u32> = self.digits[i].iter().zip(&self.digits[j]).map(|(a, b)| self.add_digit(*a, *b)).collect();
        self.index(&d)
    }

    fn scale(&self, lambda: u32, i: usize) -> usize {
        let d: Vec<u32> = self.digits[i].iter().map(|a| self.mul_digit(lambda, *a)).collect();
        self.index(&d)
    }

    /// Nonzero points grouped by norm, ascending.
    pub fn spheres(&self) -> Vec<(NormValue, Vec<usize>)> {
        let mut out: Vec<(NormValue, Vec<usize>)> = Vec::new();
        for i in 1..self.len() {
            let r = self.norm(i);
            match out.iter_mut().find(|(s, _)| *s == r) {
                Some((_, v)) => v.push(i),
                None => out.push((r, vec![i])),
            }
        }
        out.sort_by_key(|(r, _)| *r);
        out
    }

    /// `Π |S|!` over the spheres, saturating.
    pub fn candidate_bound(&self) -> u128 {
        self.spheres()
            .iter()
            .map(|(_, s)| (1..=s.len() as u128).fold(1u128, |a, k| a.saturating_mul(k)))
            .fold(1u128, |a, b| a.saturating_mul(b))
    }

    pub fn is_isometry(&self, f: &[usize]) -> bool {
        f[0] == 0
            && (0..self.len()).all(|i| (i + 1..self.len()).all(|j| self.distance(f[i], f[j]) == self.distance(i, j)))
    }

    pub fn is_linear(&self, f: &[usize]) -> bool {
        let n = self.len();
        (0..n).all(|i| (i..n).all(|j| f[self.add(i, j)] == self.add(f[i], f[j])))
            && (2..self.q).all(|l| (0..n).all(|i| f[self.scale(l, i)] == self.scale(l, f[i])))
    }

    /// Every centred isometry: products of per-sphere bijections, each kept
    /// when it preserves all pairwise distances. Split over the permutations
    /// of the first sphere.
    pub fn enumerate(&self, cap: u128, exec: Exec) -> Result<Vec<IndexMap>> {
        let bound = self.candidate_bound();
        if bound > cap {
            return Err(Error::CapExceeded { bound, cap });
        }
        let spheres: Vec<Vec<usize>> = self.spheres().into_iter().map(|(_, s)| s).collect();
        let mut start = vec![usize::MAX; self.len()];
        start[0] = 0;
        let Some(first) = spheres.first() else { return Ok(vec![start]) };
        let firsts: Vec<Vec<usize>> = first.iter().copied().permutations(first.len()).collect();
        let parts = par::map_slice(exec, &firsts, |perm| {
            let mut f = start.clone();
            let mut out = Vec::new();
            if self.place(&mut f, first, perm, &spheres[..0]) {
                self.extend(&mut f, &spheres, 1, &mut out);
            }
            out
        });
        Ok(parts.into_iter().flatten().collect())
    }

    /// Assigns `sphere[k] ↦ images[k]` and checks distances against the
    /// sphere itself and all `done` spheres.
    fn place(&self, f: &mut [usize], sphere: &[usize], images: &[usize], done: &[Vec<usize>]) -> bool {
        for (a, b) in sphere.iter().zip(images) {
            f[*a] = *b;
        }
        sphere.iter().enumerate().all(|(k, a)| {
            sphere[..k]
                .iter()
                .chain(done.iter().flatten())
                .all(|b| self.distance(f[*a], f[*b]) == self.distance(*a, *b))
        })
    }

    fn extend(&self, f: &mut Vec<usize>, spheres: &[Vec<usize>], k: usize, out: &mut Vec<IndexMap>) {
        if k == spheres.len() {
            out.push(f.clone());
            return;
        }
        let s = &spheres[k];
        for perm in s.iter().copied().permutations(s.len()) {
            if self.place(f, s, &perm, &spheres[..k]) {
                self.extend(f, spheres, k + 1, out);
            }
        }
    }

    fn dendrogram(&self) -> Dendrogram {
        Dendrogram::build(self.len(), |i, j| self.distance(i, j))
    }

    /// The number of centred isometries, from the automorphisms of the ball
    /// tree that fix the point 0.
    pub fn count_isometries(&self) -> Result<u128> {
        let t = self.dendrogram();
        let overflow = || Error::Invalid("isometry count overflows u128".into());
        let mut memo = std::collections::HashMap::new();
        let path = t.path_to(0);
        let mut count = 1u128;
        for node in 0..t.nodes.len() {
            let on_path = path.contains(&node);
            if !on_path {
                continue;
            }
            for (_, group) in t.child_groups(node) {
                let mut m = group.len() as u128;
                let mut free = group.len();
                if group.iter().any(|c| path.contains(c)) {
                    m -= 1;
                    free -= 1;
                }
                let fact = (1..=m).try_fold(1u128, |a, k| a.checked_mul(k)).ok_or_else(overflow)?;
                let sub = aut(&t, group[0], &mut memo).ok_or_else(overflow)?;
                let sub = (0..free).try_fold(1u128, |a, _| a.checked_mul(sub)).ok_or_else(overflow)?;
                count = count.checked_mul(fact).and_then(|c| c.checked_mul(sub)).ok_or_else(overflow)?;
            }
        }
        Ok(count)
    }

    /// Norm-preserving `n × n` matrices, all of them invertible.
    pub fn count_linear(&self) -> Result<u128> {
        let n = self.weights.len();
        let entries = n * n;
        let total = (self.q as u64)
            .checked_pow(entries as u32)
            .filter(|t| *t <= 1 << 24)
            .ok_or(Error::DomainTooLarge(u128::MAX))?;
        let count = (0..total)
            .filter(|code| {
                let mut c = *code;
                // Column j is the image of basis vector j.
                let cols: Vec<usize> = (0..n)
                    .map(|_| {
                        let d: Vec<u32> = (0..n)
                            .map(|_| {
                                let x = (c % self.q as u64) as u32;
                                c /= self.q as u64;
                                x
                            })
                            .collect();
                        self.index(&d)
                    })
                    .collect();
                (1..self.len()).all(|x| {
                    let image =
                        self.digits[x].iter().zip(&cols).fold(0, |acc, (a, col)| self.add(acc, self.scale(*a, *col)));
                    self.norm(image) == self.norm(x)
                })
            })
            .count();
        Ok(count as u128)
    }

    /// A random centred isometry: children of each ball with equal
    /// signatures are shuffled, the ball chain of 0 kept in place.
    pub fn sample_isometry<R: Rng + ?Sized>(&self, rng: &mut R) -> IndexMap {
        let t = self.dendrogram();
        let path = t.path_to(0);
        let mut f = vec![usize::MAX; self.len()];
        match_nodes(&t, t.root, t.root, &path, rng, &mut f);
        f
    }

    pub fn to_table(&self, f: &[usize]) -> TableMap {
        TableMap::new(f.iter().enumerate().map(|(i, j)| (self.point(i), self.point(*j))))
    }

    pub fn pairs(&self, f: &[usize]) -> Vec<(Point, Point)> {
        f.iter().enumerate().map(|(i, j)| (self.point(i), self.point(*j))).collect()
    }
}

/// Automorphisms of the subtree at `node`.
fn aut<'a>(t: &'a Dendrogram, node: usize, memo: &mut std::collections::HashMap<&'a str, u128>) -> Option<u128> {
    let sig = t.nodes[node].signature.as_str();
    if let Some(v) = memo.get(sig) {
        return Some(*v);
    }
    let mut count = 1u128;
    for (_, group) in t.child_groups(node) {
        let fact = (1..=group.len() as u128).try_fold(1u128, |a, k| a.checked_mul(k))?;
        let sub = aut(t, group[0], memo)?;
        let sub = (0..group.len()).try_fold(1u128, |a, _| a.checked_mul(sub))?;
        count = count.checked_mul(fact)?.checked_mul(sub)?;
    }
    memo.insert(sig, count);
    Some(count)
}

/// Writes into `f` a random isomorphism from subtree `a` onto subtree `b`
/// (equal signatures). Nodes on `path` are matched to themselves.
fn match_nodes<R: Rng + ?Sized>(t: &Dendrogram, a: usize, b: usize, path: &[usize], rng: &mut R, f: &mut [usize]) {
    if t.nodes[a].children.is_empty() {
        f[t.nodes[a].members[0]] = t.nodes[b].members[0];
        return;
    }
    let (ga, gb) = (t.child_groups(a), t.child_groups(b));
    for (sig, from) in ga {
        let mut to = gb[&sig].clone();
        to.shuffle(rng);
        if let Some(k) = from.iter().position(|c| path.contains(c)) {
            let fixed = from[k];
            let slot = to.iter().position(|c| *c == fixed).expect("path node among its group");
            to.swap(k, slot);
        }
        for (x, y) in from.iter().zip(&to) {
            match_nodes(t, *x, *y, path, rng, f);
        }
    }
}

/// Counts of centred isometries of a finite space and how many are linear.
#[derive(Debug, Clone, PartialEq)]
pub struct IsometryCensus {
    pub space: SpaceDescriptor,
    pub total: u128,
    pub linear: u128,
    pub affine: u128,
    /// Whether `representative` comes from sampling rather than enumeration.
    pub sampled: bool,
    pub representative: Option<Vec<(Point, Point)>>,
}

/// All centred isometries, as tables.
pub fn enumerate_centred_isometries(space: &Space, cap: u128, exec: Exec) -> Result<Vec<TableMap>> {
    let o = Oracle::new(space)?;
    Ok(o.enumerate(cap, exec)?.iter().map(|f| o.to_table(f)).collect())
}

/// Exact counts. Within `cap` every isometry is enumerated and classified,
/// and the counts are checked against the ball-tree and matrix counts;
/// above it the counts come from those alone and the nonlinear
/// representative is sampled with `seed`.
pub fn census(space: &Space, cap: u128, seed: u64, exec: Exec) -> Result<IsometryCensus> {
    let o = Oracle::new(space)?;
    let total = o.count_isometries()?;
    let linear = o.count_linear()?;
    let (representative, sampled) = if o.candidate_bound() <= cap {
        let maps = o.enumerate(cap, exec)?;
        let flags = par::map_slice(exec, &maps, |f| o.is_linear(f));
        let counted = flags.iter().filter(|l| **l).count() as u128;
        if maps.len() as u128 != total || counted != linear {
            return Err(Error::Invalid(format!(
                "enumeration found {} isometries ({counted} linear), counts give {total} ({linear} linear)",
                maps.len()
            )));
        }
        (maps.iter().zip(&flags).find(|(_, l)| !**l).map(|(f, _)| o.pairs(f)), false)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rep = (total > linear)
            .then(|| (0..10_000).map(|_| o.sample_isometry(&mut rng)).find(|f| !o.is_linear(f)))
            .flatten()
            .map(|f| o.pairs(&f));
        (rep, true)
    };
    Ok(IsometryCensus { space: space.descriptor().clone(), total, linear, affine: linear, sampled, representative })
}

pub fn all_centred_isometries_linear(space: &Space) -> Result<bool> {
    let o = Oracle::new(space)?;
    Ok(o.count_isometries()? == o.count_linear()?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct IsoscelesReport {
    pub triples: u64,
    /// `(x, y, z)` with `‖x − z‖ < ‖y − z‖` but `‖y − x‖ ≠ ‖y − z‖`.
    pub violation: Option<(Point, Point, Point)>,
}

impl IsoscelesReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks over every ordered triple that a strictly shorter side forces the
/// other two to be equal.
pub fn check_isosceles_exhaustive(space: &Space, exec: Exec) -> Result<IsoscelesReport> {
    let o = Oracle::new(space)?;
    let n = o.len();
    let bad = par::find_map_first(exec, n, |x| {
        (0..n).flat_map(|y| (0..n).map(move |z| (y, z))).find_map(|(y, z)| {
            (o.distance(x, z) < o.distance(y, z) && o.distance(y, x) != o.distance(y, z)).then_some((x, y, z))
        })
    });
    Ok(IsoscelesReport {
        triples: (n as u64).pow(3),
        violation: bad.map(|(x, y, z)| (o.point(x), o.point(y), o.point(z))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(q: u64, w: &[i128]) -> Space {
        Space::new(SpaceDescriptor::with_int_weights(FieldDescriptor::finite(q), w)).unwrap()
    }

    fn counts(q: u64, w: &[i128]) -> (u128, u128) {
        let c = census(&space(q, w), DEFAULT_CAP, 0, Exec::default()).unwrap();
        assert!(c.linear <= c.affine && c.affine <= c.total);
        (c.total, c.linear)
    }

    #[test]
    fn exact_counts() {
        assert_eq!(counts(2, &[1]), (1, 1));
        assert_eq!(counts(3, &[1]), (2, 2));
        assert_eq!(counts(2, &[1, 2]), (2, 2));
        assert_eq!(counts(2, &[1, 1]), (6, 6));
        assert_eq!(counts(4, &[1]), (6, 3));
        assert_eq!(counts(3, &[1, 1]), (40320, 48));
    }

    #[test]
    fn f2_weights_one_two_swaps_the_top_sphere() {
        let x = space(2, &[1, 2]);
        let maps = enumerate_centred_isometries(&x, DEFAULT_CAP, Exec::default()).unwrap();
        assert_eq!(maps.len(), 2);
        let p = |a, b| x.point_from_ints(&[a, b]).unwrap();
        let swap = maps.iter().find(|m| m.get(&p(0, 1)) == Some(&p(1, 1))).unwrap();
        assert_eq!(swap.get(&p(1, 0)), Some(&p(1, 0)));
    }

    #[test]
    fn caps_are_reported() {
        let x = space(3, &[1, 1]);
        assert_eq!(
            Oracle::new(&x).unwrap().enumerate(1000, Exec::default()),
            Err(Error::CapExceeded { bound: 40320, cap: 1000 })
        );
    }

    #[test]
    fn sampled_census_above_cap() {
        let x = space(5, &[1, 1]);
        let c = census(&x, DEFAULT_CAP, 3, Exec::default()).unwrap();
        assert!(c.sampled);
        assert_eq!(c.total, (1..=24u128).product());
        let rep = TableMap::new(c.representative.unwrap());
        let o = Oracle::new(&x).unwrap();
        let f: Vec<usize> =
            o.points().iter().map(|p| o.points().iter().position(|q| q == rep.get(p).unwrap()).unwrap()).collect();
        assert!(o.is_isometry(&f));
        assert!(!o.is_linear(&f));
    }

    #[test]
    fn counts_agree_with_enumeration_and_sampler() {
        for (q, w) in
            [(2, vec![1, 3]), (3, vec![1, 3]), (3, vec![2, 3]), (4, vec![1]), (5, vec![1]), (2, vec![1, 1, 2])]
        {
            let o = Oracle::new(&space(q, &w)).unwrap();
            let maps = o.enumerate(DEFAULT_CAP, Exec::default()).unwrap();
            assert_eq!(maps.len() as u128, o.count_isometries().unwrap());
            assert!(maps.iter().all(|f| o.is_isometry(f)));
            let mut rng = ChaCha8Rng::seed_from_u64(1);
            for _ in 0..20 {
                assert!(maps.contains(&o.sample_isometry(&mut rng)));
            }
        }
    }

    #[test]
    fn enumeration_is_deterministic_across_strategies() {
        let o = Oracle::new(&space(3, &[1, 3])).unwrap();
        assert_eq!(
            o.enumerate(DEFAULT_CAP, Exec::Sequential).unwrap(),
            o.enumerate(DEFAULT_CAP, Exec::default()).unwrap()
        );
    }

    #[test]
    fn isosceles_holds() {
        for (q, w) in [(2, vec![1, 2]), (3, vec![1, 3]), (4, vec![2, 3])] {
            let r = check_isosceles_exhaustive(&space(q, &w), Exec::default()).unwrap();
            assert!(r.passed());
        }
        assert_eq!(check_isosceles_exhaustive(&space(2, &[1, 2]), Exec::default()).unwrap().triples, 64);
    }

    #[test]
    fn linearity_flags() {
        assert!(all_centred_isometries_linear(&space(3, &[1])).unwrap());
        assert!(!all_centred_isometries_linear(&space(5, &[1])).unwrap());
        assert!(all_centred_isometries_linear(&space(2, &[1, 2])).unwrap());
    }
}
