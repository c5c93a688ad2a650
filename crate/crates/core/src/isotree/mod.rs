//! Fractal representation of centred isometries.
//!
//! A tree lists, per sphere radius, a [`SphereAction`]: a permutation `σ` of
//! the sphere's ball classes and one [`BallMap`] per class. On class `i` the
//! map is
//!
//! ```text
//! φ_i(x) = rep_{σ(i)} + post_i + child_i(x − rep_i − pre_i)
//! ```
//!
//! where `child_i` is again a tree, acting on `B(0, r)`, and the offsets have
//! norm `< r`. Spheres that are not listed are handled by the tree's leaf map.

mod factor;
mod linear;
mod map;
mod random;
mod transport;
mod verify;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::geometry::{Domain, SphereLayout};
use crate::par::Exec;
use crate::scalars::FieldElement;
use crate::spaces::{Point, Space};
use crate::value::NormValue;

pub use factor::factor_isometry;
pub use linear::{is_affine, is_linear, NonlinearityCertificate};
pub use map::{compose, Composed, FnMap, PointMap, TableMap, TreeMap};
pub use random::{random_sphere_action, random_tree};
pub use transport::{dilation_transport, dilation_transport_tree};
pub use verify::{verify_between, verify_isometry, Verification, Witness, PAIRWISE_LIMIT};

/// What a tree does on spheres it does not list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Leaf {
    Identity,
    Negation,
    /// Multiplication by a unit.
    Scalar(FieldElement),
    /// `x ↦ Mx`, rows of `M`.
    Matrix(Vec<Vec<FieldElement>>),
}

impl Leaf {
    pub fn scalar(space: &Space, lambda: FieldElement) -> Result<Leaf> {
        space.field().check(&lambda)?;
        if !space.field().abs_value(&lambda).is_one() {
            return Err(Error::NormNotPreserved);
        }
        Ok(Leaf::Scalar(lambda))
    }

    /// Accepts `M` only if it preserves the norm of every point of `domain`.
    pub fn matrix(space: &Space, rows: Vec<Vec<FieldElement>>, domain: &Domain) -> Result<Leaf> {
        let n = space.dim();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::MatrixShape);
        }
        for e in rows.iter().flatten() {
            space.field().check(e)?;
        }
        let leaf = Leaf::Matrix(rows);
        for i in 0..domain.size() {
            let x = domain.point(space, i);
            if space.norm(&leaf.apply(space, &x)?) != space.norm(&x) {
                return Err(Error::NormNotPreserved);
            }
        }
        leaf.inverse(space)?;
        Ok(leaf)
    }

    pub fn apply(&self, space: &Space, x: &Point) -> Result<Point> {
        let field = space.field();
        Ok(match self {
            Leaf::Identity => x.clone(),
            Leaf::Negation => space.neg(x)?,
            Leaf::Scalar(l) => space.scalar_mul(l, x)?,
            Leaf::Matrix(m) => {
                let mut out = Vec::with_capacity(m.len());
                for row in m {
                    let mut acc = field.zero();
                    for (a, b) in row.iter().zip(x.coords()) {
                        acc = field.add(&acc, &field.mul(a, b)?)?;
                    }
                    out.push(acc);
                }
                Point::new(out)
            }
        })
    }

    pub fn inverse(&self, space: &Space) -> Result<Leaf> {
        Ok(match self {
            Leaf::Identity => Leaf::Identity,
            Leaf::Negation => Leaf::Negation,
            Leaf::Scalar(l) => Leaf::Scalar(space.field().inv(l)?),
            Leaf::Matrix(m) => Leaf::Matrix(invert_matrix(space, m)?),
        })
    }

    fn canonical(&self, space: &Space) -> Leaf {
        let field = space.field();
        let one = field.one();
        let minus_one = field.neg(&one).expect("-1 exists");
        let reduced = match self {
            Leaf::Scalar(l) if *l == one => Leaf::Identity,
            Leaf::Scalar(l) if *l == minus_one => Leaf::Negation,
            Leaf::Matrix(m) => {
                let n = m.len();
                let diag = |d: &FieldElement| {
                    (0..n).all(|i| (0..n).all(|j| m[i][j] == if i == j { *d } else { field.zero() }))
                };
                if diag(&one) {
                    Leaf::Identity
                } else if diag(&minus_one) {
                    Leaf::Negation
                } else {
                    self.clone()
                }
            }
            other => other.clone(),
        };
        if reduced == Leaf::Negation && field.characteristic() == 2 {
            Leaf::Identity
        } else {
            reduced
        }
    }
}

fn invert_matrix(space: &Space, m: &[Vec<FieldElement>]) -> Result<Vec<Vec<FieldElement>>> {
    let field = space.field();
    let n = m.len();
    let mut a: Vec<Vec<FieldElement>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { field.one() } else { field.zero() }));
            r
        })
        .collect();
    for col in 0..n {
        // Largest absolute value as pivot keeps p-adic elimination exact.
        let pivot = (col..n)
            .filter(|r| !field.is_zero(&a[*r][col]))
            .max_by(|x, y| field.abs_value(&a[*x][col]).cmp(&field.abs_value(&a[*y][col])).then(y.cmp(x)))
            .ok_or(Error::NormNotPreserved)?;
        a.swap(col, pivot);
        let inv = field.inv(&a[col][col])?;
        for j in 0..2 * n {
            a[col][j] = field.mul(&a[col][j], &inv)?;
        }
        for r in 0..n {
            if r != col && !field.is_zero(&a[r][col]) {
                let f = a[r][col];
                for j in 0..2 * n {
                    let t = field.mul(&f, &a[col][j])?;
                    a[r][j] = field.sub(&a[r][j], &t)?;
                }
            }
        }
    }
    Ok(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// One ball class's map: translate, recurse, translate.
#[derive(Debug, Clone, PartialEq)]
pub struct BallMap {
    pub pre: Point,
    pub post: Point,
    pub child: IsometryTree,
}

impl BallMap {
    pub fn identity(space: &Space) -> Self {
        BallMap { pre: space.zero(), post: space.zero(), child: IsometryTree::identity(0) }
    }

    pub fn with_child(space: &Space, child: IsometryTree) -> Self {
        BallMap { pre: space.zero(), post: space.zero(), child }
    }

    fn is_identity(&self, space: &Space) -> bool {
        space.is_zero(&self.pre) && space.is_zero(&self.post) && self.child.is_identity()
    }
}

/// The action of a tree on one sphere.
#[derive(Debug, Clone)]
pub struct SphereAction {
    radius: NormValue,
    sigma: Vec<usize>,
    maps: Vec<BallMap>,
    layout: SphereLayout,
    reps: Vec<Point>,
}

impl PartialEq for SphereAction {
    fn eq(&self, other: &Self) -> bool {
        self.radius == other.radius && self.sigma == other.sigma && self.maps == other.maps
    }
}

impl SphereAction {
    /// Validates `σ`, the offsets and the children against `S(r)`.
    pub fn new(space: &Space, r: NormValue, sigma: Vec<usize>, maps: Vec<BallMap>) -> Result<Self> {
        let layout = SphereLayout::new(space, &r).ok_or(Error::EmptySphere(r))?;
        let k = layout.class_count();
        if sigma.len() != k {
            return Err(Error::ClassCountMismatch { expected: k, got: sigma.len() });
        }
        if maps.len() != k {
            return Err(Error::ClassCountMismatch { expected: k, got: maps.len() });
        }
        let mut seen = vec![false; k];
        for &j in &sigma {
            if j >= k || std::mem::replace(&mut seen[j], true) {
                return Err(Error::NotBijective(k));
            }
        }
        for m in &maps {
            for off in [&m.pre, &m.post] {
                let off = space.point(off.coords().to_vec())?;
                let norm = space.norm(&off);
                if norm >= r {
                    return Err(Error::OffsetTooLarge { norm, radius: r });
                }
            }
            if let Some(big) = m.child.spheres.keys().find(|s| **s >= r) {
                return Err(Error::RadiusNotBelow { radius: *big, outer: r });
            }
        }
        let reps = layout.representatives(space);
        Ok(SphereAction { radius: r, sigma, maps, layout, reps })
    }

    pub fn identity(space: &Space, r: NormValue) -> Result<Self> {
        let k = SphereLayout::new(space, &r).ok_or(Error::EmptySphere(r))?.class_count();
        Self::new(space, r, (0..k).collect(), vec![BallMap::identity(space); k])
    }

    pub fn radius(&self) -> NormValue {
        self.radius
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    pub fn maps(&self) -> &[BallMap] {
        &self.maps
    }

    pub fn layout(&self) -> &SphereLayout {
        &self.layout
    }

    pub fn representatives(&self) -> &[Point] {
        &self.reps
    }

    pub fn class_count(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_identity(&self, space: &Space) -> bool {
        self.sigma.iter().enumerate().all(|(i, j)| i == *j) && self.maps.iter().all(|m| m.is_identity(space))
    }

    /// Height of the deepest child, plus one.
    fn height(&self) -> u32 {
        1 + self.maps.iter().map(|m| m.child.height()).max().unwrap_or(0)
    }

    fn apply(&self, space: &Space, x: &Point, budget: u32) -> Result<Point> {
        let i = self.layout.class_of(space, x)?;
        let m = &self.maps[i];
        let j = self.sigma[i];
        let mut z = space.sub(x, &self.reps[i])?;
        if !space.is_zero(&m.pre) {
            z = space.sub(&z, &m.pre)?;
        }
        let w = m.child.apply_with_budget(space, &z, budget)?;
        let mut y = space.add(&self.reps[j], &w)?;
        if !space.is_zero(&m.post) {
            y = space.add(&y, &m.post)?;
        }
        Ok(y)
    }

    /// `σ⁻¹`, inverted children, offsets swapped.
    pub fn inverse(&self, space: &Space) -> Result<Self> {
        let k = self.class_count();
        let mut sigma = vec![0; k];
        let mut maps = vec![BallMap::identity(space); k];
        for (i, &j) in self.sigma.iter().enumerate() {
            sigma[j] = i;
            let m = &self.maps[i];
            maps[j] = BallMap { pre: m.post.clone(), post: m.pre.clone(), child: m.child.inverse(space)? };
        }
        Ok(SphereAction { radius: self.radius, sigma, maps, layout: self.layout.clone(), reps: self.reps.clone() })
    }

    fn canonical(&self, space: &Space, depth: u32) -> Result<Self> {
        let mut maps = Vec::with_capacity(self.maps.len());
        for m in &self.maps {
            let child = m.child.canonical_at(space, depth.saturating_sub(1))?;
            let (pre, post) = if child.spheres.is_empty() && !space.is_zero(&m.pre) {
                // A leaf child is linear, so the inner offset moves outside.
                let moved = child.leaf.apply(space, &m.pre)?;
                (space.zero(), space.sub(&m.post, &moved)?)
            } else {
                (m.pre.clone(), m.post.clone())
            };
            maps.push(BallMap { pre, post, child });
        }
        Ok(SphereAction { maps, ..self.clone() })
    }
}

/// A centred isometry in fractal form.
#[derive(Debug, Clone, PartialEq)]
pub struct IsometryTree {
    pub depth: u32,
    pub leaf: Leaf,
    spheres: BTreeMap<NormValue, SphereAction>,
}

impl IsometryTree {
    pub fn identity(depth: u32) -> Self {
        IsometryTree { depth, leaf: Leaf::Identity, spheres: BTreeMap::new() }
    }

    pub fn from_leaf(depth: u32, leaf: Leaf) -> Self {
        IsometryTree { depth, leaf, spheres: BTreeMap::new() }
    }

    pub fn spheres(&self) -> impl Iterator<Item = &SphereAction> {
        self.spheres.values()
    }

    pub fn sphere(&self, r: &NormValue) -> Option<&SphereAction> {
        self.spheres.get(r)
    }

    pub fn radii(&self) -> Vec<NormValue> {
        self.spheres.keys().copied().collect()
    }

    pub fn is_identity(&self) -> bool {
        self.spheres.is_empty() && self.leaf == Leaf::Identity
    }

    /// Nesting height: 0 for a bare leaf.
    pub fn height(&self) -> u32 {
        self.spheres.values().map(|a| a.height()).max().unwrap_or(0)
    }

    /// Adds a sphere action; its nesting must fit in the depth bound.
    pub fn insert(&mut self, action: SphereAction) -> Result<()> {
        if self.spheres.contains_key(&action.radius) {
            return Err(Error::DuplicateRadius(action.radius));
        }
        if action.height() > self.depth {
            return Err(Error::DepthExhausted(self.depth));
        }
        self.spheres.insert(action.radius, action);
        Ok(())
    }

    pub fn apply(&self, space: &Space, x: &Point) -> Result<Point> {
        self.apply_with_budget(space, x, self.depth)
    }

    fn apply_with_budget(&self, space: &Space, x: &Point, budget: u32) -> Result<Point> {
        if space.is_zero(x) {
            return Ok(x.clone());
        }
        if self.spheres.is_empty() {
            return self.leaf.apply(space, x);
        }
        match self.spheres.get(&space.norm(x)) {
            Some(action) => {
                if budget == 0 {
                    return Err(Error::DepthExhausted(self.depth));
                }
                action.apply(space, x, budget - 1)
            }
            None => self.leaf.apply(space, x),
        }
    }

    pub fn as_map<'a>(&'a self, space: &'a Space) -> TreeMap<'a> {
        TreeMap::new(space, self)
    }

    pub fn inverse(&self, space: &Space) -> Result<Self> {
        let spheres = self.spheres.iter().map(|(r, a)| Ok((*r, a.inverse(space)?))).collect::<Result<_>>()?;
        Ok(IsometryTree { depth: self.depth, leaf: self.leaf.inverse(space)?, spheres })
    }

    /// Canonical form: identity actions dropped (under an identity leaf),
    /// leaf-only children with offsets folded into `post`, trivial scalar and
    /// matrix leaves simplified, child depths set to one less than the parent.
    pub fn canonical(&self, space: &Space) -> Result<Self> {
        self.canonical_at(space, self.depth)
    }

    fn canonical_at(&self, space: &Space, depth: u32) -> Result<Self> {
        let leaf = self.leaf.canonical(space);
        let mut spheres = BTreeMap::new();
        for (r, a) in &self.spheres {
            let a = a.canonical(space, depth)?;
            if leaf == Leaf::Identity && a.is_identity(space) {
                continue;
            }
            spheres.insert(*r, a);
        }
        Ok(IsometryTree { depth, leaf, spheres })
    }

    /// Number of sphere actions, counted recursively.
    pub fn action_count(&self) -> usize {
        self.spheres.values().map(|a| 1 + a.maps.iter().map(|m| m.child.action_count()).sum::<usize>()).sum()
    }
}

/// `σ` and per-class children with zero offsets.
pub fn build_sphere_action(
    space: &Space,
    r: NormValue,
    sigma: Vec<usize>,
    children: Vec<IsometryTree>,
) -> Result<SphereAction> {
    let maps = children.into_iter().map(|c| BallMap::with_child(space, c)).collect();
    SphereAction::new(space, r, sigma, maps)
}

/// Glues sphere actions into a tree on `B(0, outer)` (the whole space for
/// `None`).
pub fn glue_spheres(
    space: &Space,
    actions: Vec<SphereAction>,
    outer: Option<NormValue>,
    depth: u32,
) -> Result<IsometryTree> {
    let mut tree = IsometryTree::identity(depth);
    for a in actions {
        if !space.is_attainable(&a.radius) {
            return Err(Error::NotInValueSet(a.radius));
        }
        if let Some(o) = outer {
            if a.radius >= o {
                return Err(Error::RadiusNotBelow { radius: a.radius, outer: o });
            }
        }
        tree.insert(a)?;
    }
    Ok(tree)
}

/// Inverse of a tree, as a tree.
pub fn invert(space: &Space, tree: &IsometryTree) -> Result<IsometryTree> {
    tree.inverse(space)
}

/// Checks that a tree is an isometry on `domain`; a convenience over
/// [`verify_isometry`].
pub fn verify_tree(space: &Space, tree: &IsometryTree, domain: &Domain, exec: Exec) -> Verification {
    verify_isometry(space, &tree.as_map(space), domain, exec)
}
