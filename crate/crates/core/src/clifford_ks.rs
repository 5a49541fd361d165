//! Quaternion algebras over Q, Hilbert symbols, Hasse invariants and the
//! even Clifford algebras of small diagonal forms.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Trial division bound used by [`factor`].
pub const TRIAL_DIVISION_LIMIT: u64 = 1_000_000;

/// A place of Q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Prime(u64),
    Infinity,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Prime(p) => write!(f, "{p}"),
            Place::Infinity => write!(f, "inf"),
        }
    }
}

/// Prime factorisation of `|n|` by trial division, as `(prime, exponent)`.
///
/// A cofactor left after dividing out all primes up to the limit is accepted
/// as prime only when it is below the square of the limit.
pub fn factor(n: &BigInt) -> Result<Vec<(u64, u32)>> {
    if n.is_zero() {
        return Err(Error::input("cannot factor zero"));
    }
    let mut m = n.abs();
    let mut out = Vec::new();
    let mut p = 2u64;
    while p <= TRIAL_DIVISION_LIMIT {
        let bp = BigInt::from(p);
        if &bp * &bp > m {
            break;
        }
        let mut e = 0u32;
        while (&m % &bp).is_zero() {
            m /= &bp;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > BigInt::one() {
        let limit_sq = BigInt::from(TRIAL_DIVISION_LIMIT) * BigInt::from(TRIAL_DIVISION_LIMIT);
        if m > limit_sq {
            return Err(Error::input(format!("{n} has a cofactor beyond the trial-division range")));
        }
        out.push((m.to_u64().expect("cofactor below 10^12"), 1));
    }
    Ok(out)
}

fn valuation(n: &BigInt, p: u64) -> (u32, BigInt) {
    let bp = BigInt::from(p);
    let mut m = n.clone();
    let mut e = 0;
    while !m.is_zero() && (&m % &bp).is_zero() {
        m /= &bp;
        e += 1;
    }
    (e, m)
}

fn legendre(u: &BigInt, p: u64) -> i32 {
    let bp = BigInt::from(p);
    let r = u.mod_floor(&bp);
    if r.is_zero() {
        return 0;
    }
    let e = BigInt::from((p - 1) / 2);
    if r.modpow(&e, &bp).is_one() {
        1
    } else {
        -1
    }
}

/// Scales a rational by a square so that it becomes an integer with the
/// same square class.
fn integral_square_class(x: &BigRational) -> BigInt {
    x.numer() * x.denom()
}

/// The local Hilbert symbol `(a,b)_v`.
pub fn hilbert_symbol(a: &BigRational, b: &BigRational, place: Place) -> Result<i32> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::input("Hilbert symbol needs nonzero arguments"));
    }
    let a = integral_square_class(a);
    let b = integral_square_class(b);
    Ok(match place {
        Place::Infinity => {
            if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        Place::Prime(2) => {
            let (alpha, u) = valuation(&a, 2);
            let (beta, v) = valuation(&b, 2);
            let eps = |x: &BigInt| -> u32 { (x.mod_floor(&BigInt::from(4)) == BigInt::from(3)) as u32 };
            let omega = |x: &BigInt| -> u32 {
                let r = x.mod_floor(&BigInt::from(8)).to_u32().expect("small residue");
                (r == 3 || r == 5) as u32
            };
            let exp = eps(&u) * eps(&v) + alpha * omega(&v) + beta * omega(&u);
            if exp % 2 == 0 {
                1
            } else {
                -1
            }
        }
        Place::Prime(p) => {
            let (alpha, u) = valuation(&a, p);
            let (beta, v) = valuation(&b, p);
            let eps = ((p - 1) / 2) % 2;
            let mut s: i32 = if (alpha as u64 * beta as u64 * eps) % 2 == 1 { -1 } else { 1 };
            if beta % 2 == 1 {
                s *= legendre(&u, p);
            }
            if alpha % 2 == 1 {
                s *= legendre(&v, p);
            }
            s
        }
    })
}

/// Places where a symbol involving these rationals can be nontrivial.
fn candidate_places<'a>(values: impl IntoIterator<Item = &'a BigRational>) -> Result<BTreeSet<Place>> {
    let mut out = BTreeSet::from([Place::Infinity, Place::Prime(2)]);
    for x in values {
        for part in [x.numer(), x.denom()] {
            for (p, _) in factor(part)? {
                out.insert(Place::Prime(p));
            }
        }
    }
    Ok(out)
}

/// A 2-torsion Brauer class of Q, encoded by its ramified places.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct RamificationSet(BTreeSet<Place>);

impl RamificationSet {
    pub fn new(places: BTreeSet<Place>) -> Result<Self> {
        if !places.len().is_multiple_of(2) {
            return Err(Error::Internal(format!("odd number of ramified places: {places:?}")));
        }
        Ok(RamificationSet(places))
    }

    pub fn places(&self) -> &BTreeSet<Place> {
        &self.0
    }

    pub fn is_split(&self) -> bool {
        self.0.is_empty()
    }

    /// Class of the tensor product: symmetric difference of ramified places.
    pub fn tensor(&self, other: &RamificationSet) -> RamificationSet {
        RamificationSet(self.0.symmetric_difference(&other.0).copied().collect())
    }
}

impl fmt::Display for RamificationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(Place::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

pub fn brauer_tensor(a: &RamificationSet, b: &RamificationSet) -> RamificationSet {
    a.tensor(b)
}

/// The quaternion algebra `(a,b)_Q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuaternionAlgebra {
    a: BigRational,
    b: BigRational,
}

impl QuaternionAlgebra {
    pub fn new(a: BigRational, b: BigRational) -> Result<Self> {
        if a.is_zero() || b.is_zero() {
            return Err(Error::input("quaternion symbol needs nonzero entries"));
        }
        Ok(QuaternionAlgebra { a, b })
    }

    pub fn from_ints(a: i64, b: i64) -> Result<Self> {
        Self::new(BigRational::from_integer(a.into()), BigRational::from_integer(b.into()))
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn ramification(&self) -> Result<RamificationSet> {
        let mut out = BTreeSet::new();
        for place in candidate_places([&self.a, &self.b])? {
            if hilbert_symbol(&self.a, &self.b, place)? == -1 {
                out.insert(place);
            }
        }
        RamificationSet::new(out)
    }

    pub fn is_split(&self) -> Result<bool> {
        Ok(self.ramification()?.is_split())
    }
}

impl fmt::Display for QuaternionAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

/// True iff every prime `p = 3 mod 4` divides `n` to an even power.
pub fn sum_of_two_squares(n: u64) -> Result<bool> {
    if n == 0 {
        return Err(Error::input("expected a positive integer"));
    }
    Ok(factor(&BigInt::from(n))?.iter().all(|&(p, e)| p % 4 != 3 || e % 2 == 0))
}

/// A diagonal form `<a_1, ..., a_m>` over Q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalQuadraticForm(Vec<BigRational>);

impl DiagonalQuadraticForm {
    pub fn new(coefficients: Vec<BigRational>) -> Result<Self> {
        if coefficients.iter().any(Zero::is_zero) {
            return Err(Error::input("diagonal coefficients must be nonzero"));
        }
        Ok(DiagonalQuadraticForm(coefficients))
    }

    pub fn from_ints(coefficients: &[i64]) -> Result<Self> {
        Self::new(coefficients.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn signature(&self) -> (usize, usize) {
        let pos = self.0.iter().filter(|c| c.is_positive()).count();
        (pos, self.0.len() - pos)
    }

    pub fn discriminant(&self) -> BigRational {
        self.0.iter().fold(BigRational::one(), |acc, c| acc * c)
    }

    pub fn hasse_invariant(&self, place: Place) -> Result<i32> {
        let mut s = 1;
        for i in 0..self.0.len() {
            for j in i + 1..self.0.len() {
                s *= hilbert_symbol(&self.0[i], &self.0[j], place)?;
            }
        }
        Ok(s)
    }
}

pub fn hasse_invariant(f: &DiagonalQuadraticForm, place: Place) -> Result<i32> {
    f.hasse_invariant(place)
}

pub fn is_rational_square(x: &BigRational) -> bool {
    if x.is_negative() {
        return false;
    }
    let is_sq = |n: &BigInt| {
        let r = n.sqrt();
        &(&r * &r) == n
    };
    is_sq(x.numer()) && is_sq(x.denom())
}

/// Equivalence over Q via rank, signature, discriminant square class and
/// Hasse invariants at every relevant place.
pub fn rational_equivalence(f1: &DiagonalQuadraticForm, f2: &DiagonalQuadraticForm) -> Result<bool> {
    if f1.rank() != f2.rank() || f1.signature() != f2.signature() {
        return Ok(false);
    }
    if !is_rational_square(&(f1.discriminant() / f2.discriminant())) {
        return Ok(false);
    }
    for place in candidate_places(f1.coefficients().iter().chain(f2.coefficients()))? {
        if f1.hasse_invariant(place)? != f2.hasse_invariant(place)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The even Clifford algebra of a small diagonal form, described up to
/// Brauer equivalence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvenClifford {
    /// Rank 2: the quadratic algebra `Q(sqrt(d))`.
    QuadraticAlgebra { d: BigRational },
    /// Rank 3: a quaternion algebra.
    Quaternion { algebra: QuaternionAlgebra, class: RamificationSet },
    /// Rank 4: a quaternion algebra over the centre `Q(sqrt(d))`, recorded
    /// symbolically.
    QuaternionOverCentre { algebra: QuaternionAlgebra, centre_d: BigRational },
    /// Rank 5: `M_2` of the tensor product of two quaternion algebras.
    TensorOfQuaternions { first: QuaternionAlgebra, second: QuaternionAlgebra, class: RamificationSet },
}

impl EvenClifford {
    /// Brauer class over Q, when the centre is Q.
    pub fn brauer_class(&self) -> Option<&RamificationSet> {
        match self {
            EvenClifford::Quaternion { class, .. } | EvenClifford::TensorOfQuaternions { class, .. } => Some(class),
            _ => None,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            EvenClifford::QuadraticAlgebra { d } => format!("Q(sqrt({d}))"),
            EvenClifford::Quaternion { algebra, class } => format!("{algebra}_Q, ramified at {class}"),
            EvenClifford::QuaternionOverCentre { algebra, centre_d } => {
                format!("{algebra} over Q(sqrt({centre_d}))")
            }
            EvenClifford::TensorOfQuaternions { first, second, class } => {
                format!("M2({first} x {second}), Brauer class ramified at {class}")
            }
        }
    }
}

pub fn even_clifford(f: &DiagonalQuadraticForm) -> Result<EvenClifford> {
    let a = f.coefficients();
    let quat = |x: BigRational, y: BigRational| QuaternionAlgebra::new(x, y);
    match a.len() {
        2 => Ok(EvenClifford::QuadraticAlgebra { d: -(&a[0] * &a[1]) }),
        3 => {
            let algebra = quat(-(&a[0] * &a[1]), -(&a[1] * &a[2]))?;
            let class = algebra.ramification()?;
            Ok(EvenClifford::Quaternion { algebra, class })
        }
        4 => {
            let algebra = quat(-(&a[0] * &a[1]), -(&a[1] * &a[3]))?;
            Ok(EvenClifford::QuaternionOverCentre { algebra, centre_d: f.discriminant() })
        }
        5 => {
            let first = quat(-(&a[0] * &a[1]), -(&a[1] * &a[2]))?;
            let second = quat(&a[0] * &a[1] * &a[2] * &a[3], -(&a[3] * &a[4]))?;
            let class = first.ramification()?.tensor(&second.ramification()?);
            Ok(EvenClifford::TensorOfQuaternions { first, second, class })
        }
        m => Err(Error::input(format!("even Clifford algebra only for ranks 2..=5, got {m}"))),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct KSReport {
    pub delta: u64,
    pub clifford_even: String,
    pub brauer_class: String,
    pub is_split: bool,
    pub ks_dimension: u32,
    pub decomposition: String,
}

/// Kuga-Satake data for the transcendental lattice with invariant `delta`.
pub fn kuga_satake_report(delta: u64) -> Result<KSReport> {
    if delta == 0 {
        return Err(Error::input("delta must be positive"));
    }
    let d = i64::try_from(delta).map_err(|_| Error::input("delta too large"))?;
    let form = DiagonalQuadraticForm::from_ints(&[2, -2, -2, -2, 2 * d])?;
    let cl = even_clifford(&form)?;
    let class = cl.brauer_class().cloned().ok_or_else(|| Error::Internal("rank-5 algebra lost its class".into()))?;
    let expected = QuaternionAlgebra::from_ints(-1, d)?.ramification()?;
    if class != expected {
        return Err(Error::Internal(format!("Clifford class {class} differs from (-1,{d}) class {expected}")));
    }
    let split = class.is_split();
    if split != sum_of_two_squares(delta)? {
        return Err(Error::Internal(format!("splitness of (-1,{d}) disagrees with the two-squares test")));
    }
    Ok(KSReport {
        delta,
        clifford_even: cl.describe(),
        brauer_class: class.to_string(),
        is_split: split,
        // 2^(n-2) with n = 6 the rank of the transcendental lattice
        ks_dimension: 1 << (6 - 2),
        decomposition: format!("A(T_{delta}) ∼ A_{delta}²"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn ram(a: i64, b: i64) -> BTreeSet<Place> {
        QuaternionAlgebra::from_ints(a, b).unwrap().ramification().unwrap().places().clone()
    }

    #[test]
    fn hilbert_symbol_basics() {
        assert_eq!(hilbert_symbol(&q(-1), &q(-1), Place::Infinity).unwrap(), -1);
        assert_eq!(hilbert_symbol(&q(-1), &q(-1), Place::Prime(2)).unwrap(), -1);
        assert_eq!(hilbert_symbol(&q(-1), &q(-1), Place::Prime(3)).unwrap(), 1);
        for b in [-7, -1, 2, 3, 12] {
            for p in [Place::Infinity, Place::Prime(2), Place::Prime(3), Place::Prime(7)] {
                assert_eq!(hilbert_symbol(&q(1), &q(b), p).unwrap(), 1);
            }
        }
        assert!(hilbert_symbol(&q(0), &q(1), Place::Infinity).is_err());
    }

    #[test]
    fn ramification_examples() {
        assert!(ram(1, -1).is_empty());
        assert_eq!(ram(-1, -1), BTreeSet::from([Place::Prime(2), Place::Infinity]));
        assert_eq!(ram(-1, 3), BTreeSet::from([Place::Prime(2), Place::Prime(3)]));
        assert!(ram(-1, 2).is_empty());
        assert!(ram(-1, 1).is_empty());
    }

    #[test]
    fn two_squares() {
        assert!(sum_of_two_squares(1).unwrap());
        assert!(sum_of_two_squares(2).unwrap());
        assert!(sum_of_two_squares(4).unwrap());
        assert!(!sum_of_two_squares(3).unwrap());
        assert!(sum_of_two_squares(9).unwrap());
        assert!(sum_of_two_squares(0).is_err());
    }

    #[test]
    fn tensor_algebra() {
        let a = RamificationSet::new(BTreeSet::from([Place::Prime(2), Place::Infinity])).unwrap();
        let b = RamificationSet::new(BTreeSet::from([Place::Prime(2), Place::Prime(3)])).unwrap();
        assert!(a.tensor(&a).is_split());
        assert_eq!(a.tensor(&b).places(), &BTreeSet::from([Place::Prime(3), Place::Infinity]));
        assert!(RamificationSet::new(BTreeSet::from([Place::Infinity])).is_err());
    }

    #[test]
    fn clifford_examples() {
        let cl = even_clifford(&DiagonalQuadraticForm::from_ints(&[1, 1, 1]).unwrap()).unwrap();
        assert_eq!(cl.brauer_class().unwrap().places(), &ram(-1, -1));
        let cl = even_clifford(&DiagonalQuadraticForm::from_ints(&[3, 5]).unwrap()).unwrap();
        assert_eq!(cl, EvenClifford::QuadraticAlgebra { d: q(-15) });
        for delta in [1, 2, 3, 5, 6, 7] {
            let cl = even_clifford(&DiagonalQuadraticForm::from_ints(&[2, -2, -2, -2, 2 * delta]).unwrap()).unwrap();
            assert_eq!(cl.brauer_class().unwrap().places(), &ram(-1, delta));
        }
        assert!(even_clifford(&DiagonalQuadraticForm::from_ints(&[1]).unwrap()).is_err());
    }

    #[test]
    fn rational_equivalence_examples() {
        let f = |c: &[i64]| DiagonalQuadraticForm::from_ints(c).unwrap();
        assert!(rational_equivalence(&f(&[1, -1]), &f(&[2, -2])).unwrap());
        assert!(!rational_equivalence(&f(&[1, 1]), &f(&[1, -1])).unwrap());
        assert!(!rational_equivalence(&f(&[1, 1]), &f(&[1, 3])).unwrap());
        assert!(rational_equivalence(&f(&[1, 1]), &f(&[2, 2])).unwrap());
        // same rank, signature and discriminant class, different Hasse invariant at 3
        assert!(!rational_equivalence(&f(&[1, 1]), &f(&[3, 3])).unwrap());
    }

    #[test]
    fn ks_reports() {
        assert!(kuga_satake_report(1).unwrap().is_split);
        assert!(kuga_satake_report(2).unwrap().is_split);
        assert!(!kuga_satake_report(3).unwrap().is_split);
        assert_eq!(kuga_satake_report(1).unwrap().decomposition, "A(T_1) ∼ A_1²");
        assert_eq!(kuga_satake_report(5).unwrap().ks_dimension, 16);
    }

    #[test]
    fn factor_small() {
        assert_eq!(factor(&BigInt::from(360)).unwrap(), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factor(&BigInt::from(-97)).unwrap(), vec![(97, 1)]);
        let big = BigInt::from(1_000_003u64) * BigInt::from(1_000_033u64);
        assert!(factor(&(big.clone() * &big)).is_err());
    }
}
