//! Exact arithmetic in non-Archimedean fields.
//!
//! Two families are supported:
//!
//! * finite fields `F_q` for `q` prime or `q = 4`, always carrying the trivial
//!   absolute value (`|λ| = 1` for `λ ≠ 0`);
//! * truncated p-adic fields `Q_p` in floating-valuation form: a nonzero
//!   element is `p^v · u` where `u` is a unit known to `N` significant base-p
//!   digits and `v` must stay inside a fixed valuation window.
//!
//! `F_4` is realised as `F_2[x]/(x² + x + 1)` with explicit tables. Its
//! elements are indexed `0, 1, x, x²` → `0, 1, 2, 3`; in bit form the index is
//! the coefficient vector, so addition is XOR.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use crate::value::NormValue as AbsValue;
use crate::value::NormValue;

/// Largest modulus `p^N` we accept, so unit products fit in `u128`.
const MAX_MODULUS: u64 = 1 << 62;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("inversion of zero")]
    DivisionByZero,
    #[error("valuation {valuation} leaves the window [{min}, {max}]; widen the window")]
    ValuationOverflow { valuation: i64, min: i32, max: i32 },
    #[error("element {0:?} does not belong to this field")]
    ForeignElement(FieldElement),
    #[error("integer {0} cannot be represented")]
    Unrepresentable(i128),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DescriptorError {
    #[error("q = {0} is neither a prime nor 4")]
    BadOrder(u64),
    #[error("p = {0} is not a prime")]
    NotPrime(u64),
    #[error("precision must be at least 1")]
    ZeroPrecision,
    #[error("p^precision = {p}^{precision} exceeds the supported range")]
    PrecisionTooLarge { p: u64, precision: u32 },
    #[error("valuation window [{0}, {1}] must satisfy min <= 0 <= max")]
    BadWindow(i32, i32),
    #[error("valuation window [{0}, {1}] is too wide for exact norm values")]
    WindowTooWide(i32, i32),
}

/// Which field a space lives over. Serialises as
/// `{"kind":"finite","q":4}` or `{"kind":"padic","p":3,"precision":4,"window":[-6,6]}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FieldDescriptor {
    Finite { q: u64 },
    Padic { p: u64, precision: u32, window: [i32; 2] },
}

impl FieldDescriptor {
    pub fn finite(q: u64) -> Self {
        FieldDescriptor::Finite { q }
    }

    pub fn padic(p: u64, precision: u32, min: i32, max: i32) -> Self {
        FieldDescriptor::Padic { p, precision, window: [min, max] }
    }

    pub fn validate(&self) -> Result<(), DescriptorError> {
        match *self {
            FieldDescriptor::Finite { q } => {
                if q == 4 || (is_prime(q) && q < (1 << 31)) {
                    Ok(())
                } else {
                    Err(DescriptorError::BadOrder(q))
                }
            }
            FieldDescriptor::Padic { p, precision, window: [lo, hi] } => {
                if !is_prime(p) {
                    return Err(DescriptorError::NotPrime(p));
                }
                if precision == 0 {
                    return Err(DescriptorError::ZeroPrecision);
                }
                match p.checked_pow(precision) {
                    Some(m) if m <= MAX_MODULUS => {}
                    _ => return Err(DescriptorError::PrecisionTooLarge { p, precision }),
                }
                if lo > 0 || hi < 0 {
                    return Err(DescriptorError::BadWindow(lo, hi));
                }
                let widest = lo.unsigned_abs().max(hi.unsigned_abs());
                // Norm values p^±v times small weights, and products of two
                // of them, must stay well inside i128.
                match (p as i128).checked_pow(2 * widest + 8) {
                    Some(_) => Ok(()),
                    None => Err(DescriptorError::WindowTooWide(lo, hi)),
                }
            }
        }
    }
}

/// A field element in canonical form. The variants are ordered so that the
/// derived `Ord` is the canonical total order used for representatives:
/// residues by index, p-adic zero before every nonzero p-adic value, and
/// nonzero p-adic values by `(valuation, unit)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FieldElement {
    /// Element of a finite field, by index (`F_4`: 0, 1, x, x² ↦ 0, 1, 2, 3).
    Residue(u32),
    PadicZero,
    /// `p^val · unit`, with `unit mod p ≠ 0` and `unit < p^N`.
    Padic {
        val: i32,
        unit: u64,
    },
}

// x² = x + 1; indices are coefficient bit vectors (bit 1 = x).
const F4_ADD: [[u32; 4]; 4] = [[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]];
const F4_MUL: [[u32; 4]; 4] = [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]];
const F4_INV: [u32; 4] = [0, 1, 3, 2];
const F4_LABELS: [&str; 4] = ["0", "1", "x", "x^2"];

#[derive(Debug, Clone)]
enum Kind {
    Prime(u64),
    F4,
    Padic(PadicParams),
}

#[derive(Debug, Clone)]
struct PadicParams {
    p: u64,
    precision: u32,
    /// `powers[k] = p^k` for `k = 0..=precision`.
    powers: Vec<u64>,
    min: i32,
    max: i32,
}

impl PadicParams {
    fn modulus(&self) -> u64 {
        self.powers[self.precision as usize]
    }
}

/// A concrete field with its arithmetic.
#[derive(Debug, Clone)]
pub struct Field {
    desc: FieldDescriptor,
    kind: Kind,
}

impl Field {
    pub fn new(desc: FieldDescriptor) -> Result<Self, DescriptorError> {
        desc.validate()?;
        let kind = match desc {
            FieldDescriptor::Finite { q: 4 } => Kind::F4,
            FieldDescriptor::Finite { q } => Kind::Prime(q),
            FieldDescriptor::Padic { p, precision, window: [min, max] } => {
                let powers = (0..=precision).map(|k| p.pow(k)).collect();
                Kind::Padic(PadicParams { p, precision, powers, min, max })
            }
        };
        Ok(Field { desc, kind })
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        self.desc
    }

    /// 0 for p-adic fields.
    pub fn characteristic(&self) -> u64 {
        match &self.kind {
            Kind::Prime(q) => *q,
            Kind::F4 => 2,
            Kind::Padic(_) => 0,
        }
    }

    /// Number of elements, for finite fields.
    pub fn order(&self) -> Option<u64> {
        match &self.kind {
            Kind::Prime(q) => Some(*q),
            Kind::F4 => Some(4),
            Kind::Padic(_) => None,
        }
    }

    pub fn is_trivially_valued(&self) -> bool {
        !matches!(self.kind, Kind::Padic(_))
    }

    /// The residue characteristic `p` of a p-adic field.
    pub fn prime(&self) -> Option<u64> {
        match &self.kind {
            Kind::Padic(pp) => Some(pp.p),
            _ => None,
        }
    }

    pub fn precision(&self) -> Option<u32> {
        match &self.kind {
            Kind::Padic(pp) => Some(pp.precision),
            _ => None,
        }
    }

    pub fn window(&self) -> Option<(i32, i32)> {
        match &self.kind {
            Kind::Padic(pp) => Some((pp.min, pp.max)),
            _ => None,
        }
    }

    /// Size of the residue field: `q` for `F_q`, `p` for `Q_p`.
    pub fn residue_count(&self) -> u64 {
        match &self.kind {
            Kind::Prime(q) => *q,
            Kind::F4 => 4,
            Kind::Padic(pp) => pp.p,
        }
    }

    pub fn zero(&self) -> FieldElement {
        match self.kind {
            Kind::Padic(_) => FieldElement::PadicZero,
            _ => FieldElement::Residue(0),
        }
    }

    pub fn one(&self) -> FieldElement {
        match self.kind {
            Kind::Padic(_) => FieldElement::Padic { val: 0, unit: 1 },
            _ => FieldElement::Residue(1),
        }
    }

    pub fn is_zero(&self, x: &FieldElement) -> bool {
        matches!(x, FieldElement::PadicZero | FieldElement::Residue(0))
    }

    /// All elements of a finite field in canonical order.
    pub fn elements(&self) -> Option<Vec<FieldElement>> {
        let q = self.order()?;
        Some((0..q as u32).map(FieldElement::Residue).collect())
    }

    /// Checks that `x` is a canonical element of this field.
    pub fn check(&self, x: &FieldElement) -> Result<(), ArithError> {
        let ok = match (&self.kind, x) {
            (Kind::Prime(q), FieldElement::Residue(i)) => (*i as u64) < *q,
            (Kind::F4, FieldElement::Residue(i)) => *i < 4,
            (Kind::Padic(_), FieldElement::PadicZero) => true,
            (Kind::Padic(pp), FieldElement::Padic { val, unit }) => {
                *val >= pp.min && *val <= pp.max && *unit < pp.modulus() && unit % pp.p != 0
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(ArithError::ForeignElement(*x))
        }
    }

    pub fn from_integer(&self, k: i64) -> Result<FieldElement, ArithError> {
        self.from_i128(k as i128)
    }

    fn from_i128(&self, k: i128) -> Result<FieldElement, ArithError> {
        match &self.kind {
            Kind::Prime(q) => Ok(FieldElement::Residue(k.rem_euclid(*q as i128) as u32)),
            Kind::F4 => Ok(FieldElement::Residue(if k.rem_euclid(2) == 0 { 0 } else { 1 })),
            Kind::Padic(pp) => {
                if k == 0 {
                    return Ok(FieldElement::PadicZero);
                }
                let p = pp.p as i128;
                let mut m = k;
                let mut v: i64 = 0;
                while m % p == 0 {
                    m /= p;
                    v += 1;
                }
                let unit = m.rem_euclid(pp.modulus() as i128) as u64;
                self.padic_checked(v, unit)
            }
        }
    }

    /// `num / den` as a field element.
    pub fn from_rational(&self, num: i64, den: i64) -> Result<FieldElement, ArithError> {
        let n = self.from_integer(num)?;
        let d = self.from_integer(den)?;
        self.div(&n, &d)
    }

    fn padic_checked(&self, val: i64, unit: u64) -> Result<FieldElement, ArithError> {
        let Kind::Padic(pp) = &self.kind else { unreachable!() };
        if val < pp.min as i64 || val > pp.max as i64 {
            return Err(ArithError::ValuationOverflow { valuation: val, min: pp.min, max: pp.max });
        }
        Ok(FieldElement::Padic { val: val as i32, unit })
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement, ArithError> {
        self.add_tracking(a, b).map(|(x, _)| x)
    }

    /// Addition that also reports how many of the `N` significant digits of
    /// the result were lost to cancellation (always 0 in finite fields). The
    /// lost high digits are filled with zeros.
    pub fn add_tracking(&self, a: &FieldElement, b: &FieldElement) -> Result<(FieldElement, u32), ArithError> {
        match (&self.kind, a, b) {
            (Kind::Prime(q), FieldElement::Residue(x), FieldElement::Residue(y)) => {
                Ok((FieldElement::Residue(((*x as u64 + *y as u64) % q) as u32), 0))
            }
            (Kind::F4, FieldElement::Residue(x), FieldElement::Residue(y)) if *x < 4 && *y < 4 => {
                Ok((FieldElement::Residue(F4_ADD[*x as usize][*y as usize]), 0))
            }
            (Kind::Padic(_), FieldElement::PadicZero, y @ (FieldElement::PadicZero | FieldElement::Padic { .. })) => {
                Ok((*y, 0))
            }
            (Kind::Padic(_), x @ FieldElement::Padic { .. }, FieldElement::PadicZero) => Ok((*x, 0)),
            (Kind::Padic(pp), FieldElement::Padic { val: va, unit: ua }, FieldElement::Padic { val: vb, unit: ub }) => {
                let ((vlo, ulo), (vhi, uhi)) =
                    if va <= vb { ((*va, *ua), (*vb, *ub)) } else { ((*vb, *ub), (*va, *ua)) };
                let gap = (vhi - vlo) as u32;
                if gap >= pp.precision {
                    return Ok((FieldElement::Padic { val: vlo, unit: ulo }, 0));
                }
                let m = pp.modulus() as u128;
                let s = ((ulo as u128) + (uhi as u128) * (pp.powers[gap as usize] as u128)) % m;
                if s == 0 {
                    return Ok((FieldElement::PadicZero, pp.precision));
                }
                let mut s = s as u64;
                let mut k = 0u32;
                while s.is_multiple_of(pp.p) {
                    s /= pp.p;
                    k += 1;
                }
                let x = self.padic_checked(vlo as i64 + k as i64, s)?;
                Ok((x, k))
            }
            (_, x, y) => Err(ArithError::ForeignElement(if self.check(x).is_err() { *x } else { *y })),
        }
    }

    pub fn neg(&self, a: &FieldElement) -> Result<FieldElement, ArithError> {
        self.check(a)?;
        Ok(match (&self.kind, a) {
            (Kind::Prime(q), FieldElement::Residue(x)) => FieldElement::Residue(((*q - *x as u64) % q) as u32),
            (Kind::F4, x) => *x,
            (Kind::Padic(pp), FieldElement::Padic { val, unit }) => {
                FieldElement::Padic { val: *val, unit: pp.modulus() - unit }
            }
            (_, x) => *x,
        })
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement, ArithError> {
        let nb = self.neg(b)?;
        self.add(a, &nb)
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement, ArithError> {
        match (&self.kind, a, b) {
            (Kind::Prime(q), FieldElement::Residue(x), FieldElement::Residue(y)) => {
                Ok(FieldElement::Residue(((*x as u64 * *y as u64) % q) as u32))
            }
            (Kind::F4, FieldElement::Residue(x), FieldElement::Residue(y)) if *x < 4 && *y < 4 => {
                Ok(FieldElement::Residue(F4_MUL[*x as usize][*y as usize]))
            }
            (Kind::Padic(_), FieldElement::PadicZero, FieldElement::PadicZero | FieldElement::Padic { .. })
            | (Kind::Padic(_), FieldElement::Padic { .. }, FieldElement::PadicZero) => Ok(FieldElement::PadicZero),
            (Kind::Padic(pp), FieldElement::Padic { val: va, unit: ua }, FieldElement::Padic { val: vb, unit: ub }) => {
                let unit = ((*ua as u128 * *ub as u128) % pp.modulus() as u128) as u64;
                self.padic_checked(*va as i64 + *vb as i64, unit)
            }
            (_, x, y) => Err(ArithError::ForeignElement(if self.check(x).is_err() { *x } else { *y })),
        }
    }

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement, ArithError> {
        self.check(a)?;
        if self.is_zero(a) {
            return Err(ArithError::DivisionByZero);
        }
        match (&self.kind, a) {
            (Kind::Prime(q), FieldElement::Residue(x)) => {
                Ok(FieldElement::Residue(pow_mod(*x as u64, q - 2, *q) as u32))
            }
            (Kind::F4, FieldElement::Residue(x)) => Ok(FieldElement::Residue(F4_INV[*x as usize])),
            (Kind::Padic(pp), FieldElement::Padic { val, unit }) => {
                let inv = mod_inverse(*unit, pp.modulus());
                self.padic_checked(-(*val as i64), inv)
            }
            _ => unreachable!(),
        }
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement, ArithError> {
        let ib = self.inv(b)?;
        self.mul(a, &ib)
    }

    /// `p`-adic valuation; `Some(0)` for nonzero finite-field elements and
    /// `None` for zero.
    pub fn valuation(&self, x: &FieldElement) -> Option<i32> {
        match x {
            FieldElement::Padic { val, .. } => Some(*val),
            FieldElement::Residue(0) | FieldElement::PadicZero => None,
            FieldElement::Residue(_) => Some(0),
        }
    }

    pub fn abs_value(&self, x: &FieldElement) -> AbsValue {
        match (&self.kind, self.valuation(x)) {
            (_, None) => NormValue::ZERO,
            (Kind::Padic(pp), Some(v)) => NormValue::pow(pp.p, -v),
            (_, Some(_)) => NormValue::ONE,
        }
    }

    /// The `N` base-p digits of the unit part, least significant first.
    pub fn digits(&self, x: &FieldElement) -> Option<Vec<u32>> {
        let Kind::Padic(pp) = &self.kind else { return None };
        match x {
            FieldElement::Padic { unit, .. } => {
                let mut u = *unit;
                Some(
                    (0..pp.precision)
                        .map(|_| {
                            let d = (u % pp.p) as u32;
                            u /= pp.p;
                            d
                        })
                        .collect(),
                )
            }
            _ => None,
        }
    }

    /// Rebuilds a nonzero p-adic element from its valuation and unit digits.
    pub fn from_digits(&self, val: i32, digits: &[u32]) -> Result<FieldElement, ArithError> {
        let Kind::Padic(pp) = &self.kind else {
            return Err(ArithError::Unrepresentable(val as i128));
        };
        if digits.len() != pp.precision as usize || digits[0] == 0 || digits.iter().any(|d| *d as u64 >= pp.p) {
            return Err(ArithError::Unrepresentable(val as i128));
        }
        let unit = digits.iter().rev().fold(0u64, |acc, d| acc * pp.p + *d as u64);
        self.padic_checked(val as i64, unit)
    }

    /// Base-p digit of `x` at absolute position `pos` (the coefficient of
    /// `p^pos`). Positions beyond the known precision read as 0.
    pub fn digit_at(&self, x: &FieldElement, pos: i32) -> u32 {
        match (&self.kind, x) {
            (Kind::Padic(pp), FieldElement::Padic { val, unit }) => {
                let rel = pos as i64 - *val as i64;
                if rel < 0 || rel >= pp.precision as i64 {
                    0
                } else {
                    ((unit / pp.powers[rel as usize]) % pp.p) as u32
                }
            }
            _ => 0,
        }
    }

    /// Drops every digit at absolute position `>= pos`.
    pub fn truncate_below(&self, x: &FieldElement, pos: i32) -> FieldElement {
        match (&self.kind, x) {
            (Kind::Padic(pp), FieldElement::Padic { val, unit }) => {
                let keep = pos as i64 - *val as i64;
                if keep <= 0 {
                    FieldElement::PadicZero
                } else if keep >= pp.precision as i64 {
                    *x
                } else {
                    FieldElement::Padic { val: *val, unit: unit % pp.powers[keep as usize] }
                }
            }
            _ => *x,
        }
    }

    /// Writes `x = p^low · t` modulo `p^(low + span)` and returns `t`;
    /// `None` when `x` has valuation below `low`.
    pub(crate) fn scaled_digits(&self, x: &FieldElement, low: i32, span: u32) -> Option<u64> {
        match (&self.kind, x) {
            (Kind::Padic(_), FieldElement::PadicZero) => Some(0),
            (Kind::Padic(pp), FieldElement::Padic { val, unit }) => {
                if *val < low {
                    return None;
                }
                let shift = (*val - low) as u32;
                if shift >= span {
                    return Some(0);
                }
                let keep = (span - shift).min(pp.precision);
                Some((unit % pp.powers[keep as usize]) * pp.p.pow(shift))
            }
            _ => None,
        }
    }

    /// Inverse of [`Field::scaled_digits`]: the element `p^low · t`.
    pub(crate) fn from_scaled(&self, low: i32, t: u64) -> Result<FieldElement, ArithError> {
        let Kind::Padic(pp) = &self.kind else { unreachable!() };
        if t == 0 {
            return Ok(FieldElement::PadicZero);
        }
        let mut u = t;
        let mut k = 0i64;
        while u.is_multiple_of(pp.p) {
            u /= pp.p;
            k += 1;
        }
        if u >= pp.modulus() {
            return Err(ArithError::Unrepresentable(t as i128));
        }
        self.padic_checked(low as i64 + k, u)
    }

    /// `p^k` as a field element (the uniformiser power); `None` for finite fields.
    pub fn uniformizer_power(&self, k: i32) -> Option<Result<FieldElement, ArithError>> {
        match &self.kind {
            Kind::Padic(_) => Some(self.padic_checked(k as i64, 1)),
            _ => None,
        }
    }

    /// Canonical representatives of the residue field, in canonical order:
    /// the finite field itself, or the digits `0..p` for `Q_p`.
    pub fn residues(&self) -> Vec<FieldElement> {
        match &self.kind {
            Kind::Padic(pp) => (0..pp.p)
                .map(|d| if d == 0 { FieldElement::PadicZero } else { FieldElement::Padic { val: 0, unit: d } })
                .collect(),
            _ => self.elements().unwrap(),
        }
    }

    /// A random element: uniform over a finite field; for `Q_p` a uniform
    /// valuation in the window (one extra slot standing for zero) and
    /// uniform digits with a nonzero leading digit.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        match &self.kind {
            Kind::Prime(q) => FieldElement::Residue(rng.gen_range(0..*q) as u32),
            Kind::F4 => FieldElement::Residue(rng.gen_range(0..4)),
            Kind::Padic(pp) => {
                let v = rng.gen_range(pp.min..=pp.max + 1);
                if v > pp.max {
                    return FieldElement::PadicZero;
                }
                self.random_padic_with_valuation(rng, v)
            }
        }
    }

    /// A random nonzero element of valuation exactly `v` (p-adic only).
    pub fn random_padic_with_valuation<R: Rng + ?Sized>(&self, rng: &mut R, v: i32) -> FieldElement {
        let Kind::Padic(pp) = &self.kind else { panic!("not a p-adic field") };
        let m = pp.modulus();
        let unit = loop {
            let u = rng.gen_range(1..m);
            if u % pp.p != 0 {
                break u;
            }
        };
        FieldElement::Padic { val: v, unit }
    }

    /// A random element of absolute value 1.
    pub fn random_unit<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        match &self.kind {
            Kind::Padic(_) => self.random_padic_with_valuation(rng, 0),
            _ => {
                let q = self.order().unwrap();
                FieldElement::Residue(rng.gen_range(1..q) as u32)
            }
        }
    }

    pub fn display<'a>(&'a self, x: &'a FieldElement) -> impl fmt::Display + 'a {
        DisplayElement { field: self, x }
    }
}

struct DisplayElement<'a> {
    field: &'a Field,
    x: &'a FieldElement,
}

impl fmt::Display for DisplayElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.field.kind, self.x) {
            (Kind::F4, FieldElement::Residue(i)) => f.write_str(F4_LABELS[*i as usize % 4]),
            (_, FieldElement::Residue(i)) => write!(f, "{i}"),
            (_, FieldElement::PadicZero) => f.write_str("0"),
            (Kind::Padic(pp), FieldElement::Padic { val, unit }) => {
                write!(f, "{}^{}*{}", pp.p, val, unit)
            }
            _ => write!(f, "{:?}", self.x),
        }
    }
}

/// Parses an `F_4` label (`0`, `1`, `x`, `x^2`, `x²`, `x+1`).
pub fn f4_label_index(label: &str) -> Option<u32> {
    match label.trim() {
        "0" => Some(0),
        "1" => Some(1),
        "x" => Some(2),
        "x^2" | "x²" | "x+1" | "x2" => Some(3),
        _ => None,
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * b as u128) % m as u128) as u64;
        }
        b = ((b as u128 * b as u128) % m as u128) as u64;
        e >>= 1;
    }
    acc
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1, "unit not invertible");
    old_s.rem_euclid(m as i128) as u64
}
