//! Named isometry constructions: sphere flips and translates, isotropy
//! witnesses, the case analysis behind the exceptional linear spaces, and
//! the packing of a family of sphere actions into the unit ball.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::geometry::{same_class, Domain, SphereLayout};
use crate::isotree::{
    dilation_transport, factor_isometry, verify_isometry, BallMap, IsometryTree, Leaf, NonlinearityCertificate,
    PointMap, SphereAction, TableMap,
};
use crate::par::Exec;
use crate::scalars::FieldElement;
use crate::spaces::{Point, Space, SpaceDescriptor};
use crate::value::NormValue;

/// `−x` on `S(r)`, identity elsewhere.
pub fn sphere_flip(space: &Space, r: &NormValue) -> Result<IsometryTree> {
    let layout = SphereLayout::new(space, r).ok_or(Error::EmptySphere(*r))?;
    let reps = layout.representatives(space);
    let mut sigma = Vec::with_capacity(reps.len());
    let mut maps = Vec::with_capacity(reps.len());
    for rep in &reps {
        let neg = space.neg(rep)?;
        let j = layout.class_of(space, &neg)?;
        let post = space.sub(&neg, &reps[j])?;
        sigma.push(j);
        maps.push(BallMap { pre: space.zero(), post, child: IsometryTree::from_leaf(0, Leaf::Negation) });
    }
    let mut tree = IsometryTree::identity(1);
    tree.insert(SphereAction::new(space, *r, sigma, maps)?)?;
    tree.canonical(space)
}

/// `x + x₀` on `S(r)`, identity elsewhere. Needs `‖x₀‖ < r`, so every class
/// is mapped into itself.
pub fn sphere_translate(space: &Space, r: &NormValue, x0: &Point) -> Result<IsometryTree> {
    let x0 = space.point(x0.coords().to_vec())?;
    let norm = space.norm(&x0);
    if norm >= *r {
        return Err(Error::OffsetTooLarge { norm, radius: *r });
    }
    let layout = SphereLayout::new(space, r).ok_or(Error::EmptySphere(*r))?;
    let k = layout.class_count();
    let maps = vec![BallMap { pre: space.zero(), post: x0, child: IsometryTree::identity(0) }; k];
    let mut tree = IsometryTree::identity(1);
    tree.insert(SphereAction::new(space, *r, (0..k).collect(), maps)?)?;
    tree.canonical(space)
}

/// A centred isometry sending `x` to `y`, for `‖x‖ = ‖y‖ > 0`.
pub fn transitivity_witness(space: &Space, x: &Point, y: &Point) -> Result<IsometryTree> {
    let (nx, ny) = (space.norm(x), space.norm(y));
    if nx != ny {
        return Err(Error::NormsDiffer(nx, ny));
    }
    if nx.is_zero() {
        return Err(Error::ZeroVector);
    }
    let layout = SphereLayout::new(space, &nx).ok_or(Error::EmptySphere(nx))?;
    let k = layout.class_count();
    let (i, j) = (layout.class_of(space, x)?, layout.class_of(space, y)?);
    let mut sigma: Vec<usize> = (0..k).collect();
    let mut maps = vec![BallMap::identity(space); k];
    if same_class(space, x, y, &nx)? {
        maps[i].post = space.sub(y, x)?;
    } else {
        let reps = layout.representatives(space);
        let post = space.sub(&space.sub(y, &reps[j])?, &space.sub(x, &reps[i])?)?;
        sigma.swap(i, j);
        maps[j].post = space.neg(&post)?;
        maps[i].post = post;
    }
    let mut tree = IsometryTree::identity(1);
    tree.insert(SphereAction::new(space, nx, sigma, maps)?)?;
    tree.canonical(space)
}

/// Which branch of the case analysis produced a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Case {
    ZeroSpace,
    /// Trivial norm, more than four points: swap `x₁ + x₂` with a fourth point.
    TrivialNormSwap,
    /// `F₄` itself: `x ↔ x²`.
    FrobeniusSwap,
    /// At least three values: translate the middle sphere.
    MiddleSphereTranslate,
    /// Two values, odd characteristic: negate the lower sphere.
    LowerSphereFlip,
    /// Characteristic 2, two values, lower ball with more than four points.
    LowerBallSwap,
    /// Characteristic 2, two values, four-point lower ball moved off `x₁`.
    LowerBallRotation,
    /// Characteristic 2, two values, lower ball `{0, x₁}`: swap `z ↔ z + x₁`.
    CosetSwap,
    /// None of the constructions apply.
    Exceptional,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    /// The zero space, reported without building it.
    ZeroSpace,
    AllCentredIsometriesLinear,
    NonlinearWitness {
        tree: IsometryTree,
        certificate: NonlinearityCertificate,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationResult {
    pub case: Case,
    pub verdict: Verdict,
}

impl ClassificationResult {
    pub fn all_linear(&self) -> bool {
        !matches!(self.verdict, Verdict::NonlinearWitness { .. })
    }
}

/// The domain on which classification witnesses are checked: the whole
/// space over a finite field, `B[0, p·w] / B(0, w/p²)` over `Q_p` with `w`
/// the least weight.
pub fn witness_domain(space: &Space) -> Result<Domain> {
    match space.field().prime() {
        None => Domain::finite(space),
        Some(p) => {
            let w = *space.weights().iter().min().unwrap();
            Domain::with_depth(space, &(w * NormValue::integer(p as i128)), 3)
        }
    }
}

/// [`classify`] on a descriptor, so that dimension 0 can be reported.
pub fn classify_descriptor(desc: &SpaceDescriptor, exec: Exec) -> Result<ClassificationResult> {
    if desc.dim == 0 {
        return Ok(ClassificationResult { case: Case::ZeroSpace, verdict: Verdict::ZeroSpace });
    }
    classify(&Space::new(desc.clone())?, exec)
}

/// Either a centred isometry that is not linear, checked on
/// [`witness_domain`] together with its certificate, or the verdict that
/// every centred isometry is linear.
pub fn classify(space: &Space, exec: Exec) -> Result<ClassificationResult> {
    let domain = witness_domain(space)?;
    let (case, found) = match space.field().prime() {
        Some(_) => (Case::MiddleSphereTranslate, Some(padic_translate(space)?)),
        None => finite_case(space, &domain, exec)?,
    };
    let Some((tree, certificate)) = found else {
        return Ok(ClassificationResult { case, verdict: Verdict::AllCentredIsometriesLinear });
    };
    let map = tree.as_map(space);
    if let Some(w) = verify_isometry(space, &map, &domain, exec).witness() {
        return Err(Error::NotIsometric(Box::new(w.clone())));
    }
    if !certificate.confirm(space, &map, &domain)? {
        return Err(Error::Invalid(format!("certificate for {case:?} does not re-evaluate")));
    }
    Ok(ClassificationResult { case, verdict: Verdict::NonlinearWitness { tree, certificate } })
}

type Witnessed = Option<(IsometryTree, NonlinearityCertificate)>;

fn additive(space: &Space, map: &dyn PointMap, x: &Point, y: &Point) -> Result<NonlinearityCertificate> {
    Ok(NonlinearityCertificate::Additive {
        x: x.clone(),
        y: y.clone(),
        fx: map.eval(x)?,
        fy: map.eval(y)?,
        fxy: map.eval(&space.add(x, y)?)?,
    })
}

fn padic_translate(space: &Space) -> Result<(IsometryTree, NonlinearityCertificate)> {
    let field = space.field();
    let (i, w) = space.weights().iter().enumerate().min_by_key(|(_, w)| **w).unwrap();
    let e = space.basis(i);
    let p = field.from_integer(field.prime().unwrap() as i64)?;
    let x0 = space.scalar_mul(&p, &e)?;
    let x2 = space.scalar_mul(&field.inv(&p)?, &e)?;
    let tree = sphere_translate(space, w, &x0)?;
    let cert = additive(space, &tree.as_map(space), &e, &x2)?;
    Ok((tree, cert))
}

/// Tree of a finite map given pointwise, read off by factoring.
fn tree_of(space: &Space, domain: &Domain, f: impl Fn(&Point) -> Point, exec: Exec) -> Result<IsometryTree> {
    let pts = space.enumerate_points().ok_or(Error::NotFinite)?;
    let table = TableMap::new(pts.into_iter().map(|p| {
        let y = f(&p);
        (p, y)
    }));
    factor_isometry(space, &table, domain, domain.levels().len() as u32, exec)
}

/// The first `x₁, x₂, x₄` among `pts` with `x₁ ≠ x₂` nonzero, `x₃ = x₁ + x₂ ≠ 0`
/// and `x₄ ∉ {0, x₁, x₂, x₃}`.
fn swap_choice(space: &Space, pts: &[Point]) -> Result<Option<(Point, Point, Point, Point)>> {
    let nonzero: Vec<&Point> = pts.iter().filter(|p| !space.is_zero(p)).collect();
    let Some(x1) = nonzero.first() else { return Ok(None) };
    for x2 in &nonzero[1..] {
        let x3 = space.add(x1, x2)?;
        if space.is_zero(&x3) {
            continue;
        }
        if let Some(x4) = nonzero.iter().find(|p| ***p != **x1 && ***p != **x2 && ***p != x3) {
            return Ok(Some(((*x1).clone(), (*x2).clone(), x3, (*x4).clone())));
        }
    }
    Ok(None)
}

fn swapping(a: Point, b: Point) -> impl Fn(&Point) -> Point {
    move |x: &Point| {
        if *x == a {
            b.clone()
        } else if *x == b {
            a.clone()
        } else {
            x.clone()
        }
    }
}

fn finite_case(space: &Space, domain: &Domain, exec: Exec) -> Result<(Case, Witnessed)> {
    let field = space.field();
    let values = space.finite_value_set().unwrap();
    let pts = space.enumerate_points().unwrap();
    let first_on = |r: &NormValue| pts.iter().find(|p| space.norm(p) == *r).cloned().unwrap();

    if values.len() == 1 {
        if pts.len() > 4 {
            let (x1, x2, x3, x4) = swap_choice(space, &pts)?.expect("more than four points");
            let tree = tree_of(space, domain, swapping(x3, x4), exec)?;
            let cert = additive(space, &tree.as_map(space), &x1, &x2)?;
            return Ok((Case::TrivialNormSwap, Some((tree, cert))));
        }
        if field.order() == Some(4) && space.dim() == 1 {
            let (g, g2) = (FieldElement::Residue(2), FieldElement::Residue(3));
            let tree = tree_of(space, domain, swapping(Point::new(vec![g]), Point::new(vec![g2])), exec)?;
            let one = Point::new(vec![field.one()]);
            let map = tree.as_map(space);
            let cert = NonlinearityCertificate::Scalar {
                lambda: g,
                x: one.clone(),
                fx: map.eval(&one)?,
                flx: map.eval(&space.scalar_mul(&g, &one)?)?,
            };
            return Ok((Case::FrobeniusSwap, Some((tree, cert))));
        }
        return Ok((Case::Exceptional, None));
    }

    if values.len() >= 3 {
        let (x0, x1, x2) = (first_on(&values[0]), first_on(&values[1]), first_on(&values[2]));
        let tree = sphere_translate(space, &values[1], &x0)?;
        let cert = additive(space, &tree.as_map(space), &x2, &x1)?;
        return Ok((Case::MiddleSphereTranslate, Some((tree, cert))));
    }

    let (v0, v1) = (values[0], values[1]);
    let x2 = first_on(&v1);
    if field.characteristic() != 2 {
        let x0 = first_on(&v0);
        let tree = sphere_flip(space, &v0)?;
        let cert = additive(space, &tree.as_map(space), &x2, &x0)?;
        return Ok((Case::LowerSphereFlip, Some((tree, cert))));
    }

    let lower: Vec<Point> = pts.iter().filter(|p| space.norm(p) <= v0).cloned().collect();
    let x1 = first_on(&v0);
    if lower.len() > 4 {
        let (a, b, x3, x4) = swap_choice(space, &lower)?.expect("more than four points");
        let tree = tree_of(space, domain, swapping(x3, x4), exec)?;
        let cert = additive(space, &tree.as_map(space), &a, &b)?;
        return Ok((Case::LowerBallSwap, Some((tree, cert))));
    }
    if lower.len() == 4 {
        let tree = if field.order() == Some(4) {
            let g = FieldElement::Residue(2);
            let f = |x: &Point| if space.norm(x) <= v0 { space.scalar_mul(&g, x).unwrap() } else { x.clone() };
            tree_of(space, domain, f, exec)?
        } else {
            let other = lower.iter().find(|p| !space.is_zero(p) && **p != x1).unwrap().clone();
            tree_of(space, domain, swapping(x1.clone(), other), exec)?
        };
        let cert = additive(space, &tree.as_map(space), &x2, &x1)?;
        return Ok((Case::LowerBallRotation, Some((tree, cert))));
    }
    let outside: Vec<&Point> = pts.iter().filter(|p| space.norm(p) > v0).collect();
    for x in &outside {
        let xs = space.add(x, &x1)?;
        if let Some(y) = outside.iter().find(|y| **y != *x && ***y != xs) {
            let z = space.add(x, y)?;
            let tree = tree_of(space, domain, swapping(z.clone(), space.add(&z, &x1)?), exec)?;
            let cert = additive(space, &tree.as_map(space), x, y)?;
            return Ok((Case::CosetSwap, Some((tree, cert))));
        }
    }
    Ok((Case::Exceptional, None))
}

/// `0 ↦ 0`, `n ↦ 2n`, `−n ↦ 2n − 1` for `n ≥ 1`.
pub fn fold_index(n: i32) -> u32 {
    if n >= 0 {
        2 * n as u32
    } else {
        2 * n.unsigned_abs() - 1
    }
}

pub fn unfold_index(k: u32) -> i32 {
    if k.is_multiple_of(2) {
        (k / 2) as i32
    } else {
        -(k.div_ceil(2) as i32)
    }
}

fn exponent_of(space: &Space, r: &NormValue) -> Result<i32> {
    let p = space.field().prime().ok_or(Error::NotPadic)?;
    let n = r.log_exact(p).ok_or_else(|| Error::Invalid(format!("radius {r} is not a power of {p}")))?;
    Ok(-n)
}

/// Packs a family of sphere actions indexed by exponent (`n` acts on
/// `S(p^{-n})`) into one isometry of the closed unit ball: the action for
/// `n` is dilated onto `S(p^{-β(n)})` with `β` = [`fold_index`].
pub fn fold_group_correspondence(space: &Space, family: &BTreeMap<i32, SphereAction>) -> Result<IsometryTree> {
    let field = space.field();
    let mut moved = Vec::with_capacity(family.len());
    for (n, action) in family {
        let e = exponent_of(space, &action.radius())?;
        if e != *n {
            return Err(Error::Invalid(format!("action for exponent {n} acts on radius {}", action.radius())));
        }
        let k = fold_index(*n) as i32;
        let alpha = field.uniformizer_power(k - n).ok_or(Error::NotPadic)??;
        moved.push(dilation_transport(space, action, &alpha)?);
    }
    let depth = moved.iter().map(|a| 1 + a.maps().iter().map(|m| m.child.depth).max().unwrap_or(0)).max().unwrap_or(0);
    let mut tree = IsometryTree::identity(depth);
    for a in moved {
        tree.insert(a)?;
    }
    Ok(tree)
}

/// Inverse of [`fold_group_correspondence`].
pub fn unfold_group_correspondence(space: &Space, tree: &IsometryTree) -> Result<BTreeMap<i32, SphereAction>> {
    let field = space.field();
    let mut family = BTreeMap::new();
    for action in tree.spheres() {
        let k = exponent_of(space, &action.radius())?;
        let k =
            u32::try_from(k).map_err(|_| Error::RadiusNotBelow { radius: action.radius(), outer: NormValue::ONE })?;
        let n = unfold_index(k);
        let alpha = field.uniformizer_power(n - k as i32).ok_or(Error::NotPadic)??;
        family.insert(n, dilation_transport(space, action, &alpha)?);
    }
    Ok(family)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isotree::{is_affine, is_linear, random_sphere_action, verify_tree};
    use crate::scalars::FieldDescriptor;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn space(field: FieldDescriptor, w: &[i128]) -> Space {
        Space::new(SpaceDescriptor::with_int_weights(field, w)).unwrap()
    }

    fn q3sq() -> Space {
        space(FieldDescriptor::padic(3, 8, -16, 16), &[1, 1])
    }

    #[test]
    fn flip_on_f3_is_a_nonlinear_isometry() {
        let x = space(FieldDescriptor::finite(3), &[1, 3]);
        let t = sphere_flip(&x, &NormValue::ONE).unwrap();
        let d = Domain::finite(&x).unwrap();
        assert!(verify_tree(&x, &t, &d, Exec::default()).passed());
        let (x1, x2) = (x.point_from_ints(&[1, 0]).unwrap(), x.point_from_ints(&[0, 1]).unwrap());
        assert_eq!(t.apply(&x, &x1).unwrap(), x.point_from_ints(&[2, 0]).unwrap());
        assert_eq!(t.apply(&x, &x.add(&x1, &x2).unwrap()).unwrap(), x.add(&x1, &x2).unwrap());
        assert!(is_linear(&x, &t.as_map(&x), &d, Exec::default()).unwrap().is_some());
    }

    #[test]
    fn flip_in_characteristic_two_is_identity() {
        let x = space(FieldDescriptor::finite(2), &[1, 2]);
        for r in [1, 2] {
            assert!(sphere_flip(&x, &NormValue::integer(r)).unwrap().is_identity());
        }
    }

    #[test]
    fn flip_on_q3_verifies() {
        let x = q3sq();
        let t = sphere_flip(&x, &NormValue::ONE).unwrap();
        let d = Domain::with_depth(&x, &NormValue::integer(3), 3).unwrap();
        assert!(verify_tree(&x, &t, &d, Exec::default()).passed());
        let p = x.point_from_ints(&[4, 3]).unwrap();
        assert_eq!(t.apply(&x, &p).unwrap(), x.point_from_ints(&[-4, -3]).unwrap());
    }

    #[test]
    fn translates() {
        let x = space(FieldDescriptor::finite(3), &[1, 3]);
        assert!(sphere_translate(&x, &NormValue::integer(3), &x.zero()).unwrap().is_identity());
        let x0 = x.point_from_ints(&[1, 0]).unwrap();
        let t = sphere_translate(&x, &NormValue::integer(3), &x0).unwrap();
        let d = Domain::finite(&x).unwrap();
        assert!(verify_tree(&x, &t, &d, Exec::default()).passed());
        assert!(is_affine(&x, &t.as_map(&x), &d, Exec::default()).unwrap().is_some());
        assert!(matches!(sphere_translate(&x, &NormValue::ONE, &x0), Err(Error::OffsetTooLarge { .. })));

        let q = q3sq();
        let t = sphere_translate(&q, &NormValue::ONE, &q.point_from_ints(&[3, 0]).unwrap()).unwrap();
        let d = Domain::with_depth(&q, &NormValue::integer(3), 3).unwrap();
        assert!(verify_tree(&q, &t, &d, Exec::default()).passed());
        assert_eq!(t.apply(&q, &q.point_from_ints(&[1, 1]).unwrap()).unwrap(), q.point_from_ints(&[4, 1]).unwrap());
    }

    #[test]
    fn transitivity_examples() {
        let q = q3sq();
        let (a, b) = (q.point_from_ints(&[1, 0]).unwrap(), q.point_from_ints(&[0, 1]).unwrap());
        let t = transitivity_witness(&q, &a, &b).unwrap();
        assert_eq!(t.apply(&q, &a).unwrap(), b);
        let d = Domain::with_depth(&q, &NormValue::ONE, 3).unwrap();
        assert!(verify_tree(&q, &t, &d, Exec::default()).passed());
        assert!(transitivity_witness(&q, &a, &a).unwrap().is_identity());
        assert!(matches!(
            transitivity_witness(&q, &a, &q.point_from_ints(&[3, 0]).unwrap()),
            Err(Error::NormsDiffer(..))
        ));
        assert_eq!(transitivity_witness(&q, &q.zero(), &q.zero()), Err(Error::ZeroVector));

        let f = space(FieldDescriptor::finite(3), &[1]);
        let (one, two) = (f.point_from_ints(&[1]).unwrap(), f.point_from_ints(&[2]).unwrap());
        let t = transitivity_witness(&f, &one, &two).unwrap();
        assert_eq!(t.apply(&f, &one).unwrap(), two);
        assert_eq!(t.apply(&f, &two).unwrap(), one);
    }

    #[test]
    fn classification_examples() {
        let run = |q: u64, w: &[i128]| classify(&space(FieldDescriptor::finite(q), w), Exec::default()).unwrap();
        assert_eq!(run(2, &[1]).verdict, Verdict::AllCentredIsometriesLinear);
        assert_eq!(run(3, &[1]).verdict, Verdict::AllCentredIsometriesLinear);
        assert_eq!(run(2, &[1, 2]).verdict, Verdict::AllCentredIsometriesLinear);
        assert_eq!(run(2, &[1, 1]).verdict, Verdict::AllCentredIsometriesLinear);
        assert_eq!(run(4, &[1]).case, Case::FrobeniusSwap);
        assert_eq!(run(5, &[1]).case, Case::TrivialNormSwap);
        assert_eq!(run(3, &[1, 3]).case, Case::LowerSphereFlip);
        assert_eq!(run(4, &[1, 2]).case, Case::LowerBallRotation);
        assert_eq!(run(2, &[1, 2, 2]).case, Case::CosetSwap);
        assert_eq!(run(2, &[1, 1, 2]).case, Case::LowerBallRotation);
        assert_eq!(run(2, &[1, 1, 1, 2]).case, Case::LowerBallSwap);
        assert_eq!(run(2, &[1, 2, 3]).case, Case::MiddleSphereTranslate);
        let zero = SpaceDescriptor::with_int_weights(FieldDescriptor::finite(2), &[]);
        assert_eq!(classify_descriptor(&zero, Exec::default()).unwrap().verdict, Verdict::ZeroSpace);
    }

    #[test]
    fn f5_swap_matches_the_canonical_choice() {
        let x = space(FieldDescriptor::finite(5), &[1]);
        let Verdict::NonlinearWitness { tree, certificate } = classify(&x, Exec::default()).unwrap().verdict else {
            panic!()
        };
        let p = |k| x.point_from_ints(&[k]).unwrap();
        assert_eq!(tree.apply(&x, &p(3)).unwrap(), p(4));
        assert_eq!(tree.apply(&x, &p(2)).unwrap(), p(2));
        let NonlinearityCertificate::Additive { x: a, y: b, .. } = certificate else { panic!() };
        assert_eq!((a, b), (p(1), p(2)));
    }

    #[test]
    fn padic_classification_translates() {
        let q = q3sq();
        let r = classify(&q, Exec::default()).unwrap();
        assert_eq!(r.case, Case::MiddleSphereTranslate);
        assert!(!r.all_linear());
    }

    #[test]
    fn folding_indices() {
        let ks: Vec<u32> = (-3..=3).map(fold_index).collect();
        assert_eq!(ks, vec![5, 3, 1, 0, 2, 4, 6]);
        for n in -50..50 {
            assert_eq!(unfold_index(fold_index(n)), n);
        }
    }

    #[test]
    fn folding_round_trips() {
        let q = space(FieldDescriptor::padic(3, 8, -16, 16), &[1]);
        assert!(fold_group_correspondence(&q, &BTreeMap::new()).unwrap().is_identity());

        let mut fam = BTreeMap::new();
        fam.insert(0, sphere_flip(&q, &NormValue::ONE).unwrap().sphere(&NormValue::ONE).unwrap().clone());
        let x0 = q.point_from_ints(&[1]).unwrap();
        let t = sphere_translate(&q, &NormValue::integer(3), &x0).unwrap();
        fam.insert(-1, t.sphere(&NormValue::integer(3)).unwrap().clone());
        let packed = fold_group_correspondence(&q, &fam).unwrap();
        assert_eq!(packed.radii(), vec![NormValue::new(1, 3), NormValue::ONE]);
        assert_eq!(unfold_group_correspondence(&q, &packed).unwrap(), fam);

        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut fam = BTreeMap::new();
        for n in -3..=3 {
            let r = NormValue::pow(3, -n);
            let inner = [r * NormValue::new(1, 9), r * NormValue::new(1, 3)];
            fam.insert(n, random_sphere_action(&q, r, &inner, 1, &mut rng).unwrap());
        }
        let packed = fold_group_correspondence(&q, &fam).unwrap();
        assert!(packed.radii().iter().all(|r| *r <= NormValue::ONE));
        assert_eq!(unfold_group_correspondence(&q, &packed).unwrap(), fam);
    }
}
