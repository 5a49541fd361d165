//! Orbits of primitive vectors in `T = U + U + <-1> + <-1>`.
//!
//! Three coordinate systems appear here and are kept apart by type:
//!
//! * [`TVector`]: coordinates in the standard basis `e_1..e_6` of `T`.
//! * the g-basis used by [`crate::group_iso`]: it is the standard basis of
//!   the same lattice after the identification `T = (wedge^2 V)^{real}`, so
//!   coordinates agree with the e-basis ([`TVector::to_g`] is the identity
//!   map, kept explicit so call sites state which system they mean).
//! * [`YVector`]: coordinates in `{2g_1, 2g_2, 2g_3, 2g_4, g_5+g_6, g_5-g_6}`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use serde::Serialize;

use crate::clifford_ks::{self, DiagonalQuadraticForm};
use crate::disc_form::Element;
use crate::error::{Error, Result};
use crate::lattice::{parse_sum, IntLattice, LatticeVector};
use crate::linalg;

/// Gram matrix of `T` in the e-basis.
pub const T_GRAM: [[i64; 6]; 6] = [
    [0, 1, 0, 0, 0, 0],
    [1, 0, 0, 0, 0, 0],
    [0, 0, 0, 1, 0, 0],
    [0, 0, 1, 0, 0, 0],
    [0, 0, 0, 0, -1, 0],
    [0, 0, 0, 0, 0, -1],
];

pub fn t_lattice() -> IntLattice {
    IntLattice::new(T_GRAM.iter().map(|r| r.to_vec()).collect(), "T").expect("T is unimodular")
}

/// A vector of `T` in e-basis coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct TVector(pub [i64; 6]);

/// A vector of `T` written in y-coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct YVector(pub [i64; 6]);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum VectorType {
    Ordinary,
    Characteristic,
}

impl fmt::Display for VectorType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VectorType::Ordinary => "ordinary",
            VectorType::Characteristic => "characteristic",
        })
    }
}

impl fmt::Display for TVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Display for YVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        TVector(self.0).fmt(f)
    }
}

impl TVector {
    pub fn pairing(&self, other: &TVector) -> i64 {
        let (x, y) = (&self.0, &other.0);
        x[0] * y[1] + x[1] * y[0] + x[2] * y[3] + x[3] * y[2] - x[4] * y[4] - x[5] * y[5]
    }

    pub fn norm(&self) -> i64 {
        self.pairing(self)
    }

    pub fn content(&self) -> i64 {
        self.0.iter().fold(0i64, |g, x| g.gcd(x))
    }

    pub fn is_primitive(&self) -> bool {
        self.content() == 1
    }

    fn require_primitive(&self) -> Result<()> {
        if !self.is_primitive() {
            return Err(Error::input(format!("{self} is not primitive")));
        }
        Ok(())
    }

    /// Coordinates in the g-basis (identical to the e-basis, see module docs).
    pub fn to_g(self) -> [i64; 6] {
        self.0
    }

    pub fn from_g(g: [i64; 6]) -> TVector {
        TVector(g)
    }

    /// y-coordinates, when the vector lies in the span of the y-basis.
    pub fn to_y(&self) -> Option<YVector> {
        let x = &self.0;
        if x[..4].iter().any(|c| c % 2 != 0) || (x[4] + x[5]) % 2 != 0 {
            return None;
        }
        Some(YVector([x[0] / 2, x[1] / 2, x[2] / 2, x[3] / 2, (x[4] + x[5]) / 2, (x[4] - x[5]) / 2]))
    }

    pub fn as_lattice_vector(&self) -> LatticeVector {
        LatticeVector::new(self.0.to_vec())
    }
}

impl YVector {
    /// The vector `(2y1, 2y2, 2y3, 2y4, y5+y6, y5-y6)` of `T`.
    pub fn embedded(&self) -> TVector {
        let y = &self.0;
        TVector([2 * y[0], 2 * y[1], 2 * y[2], 2 * y[3], y[4] + y[5], y[4] - y[5]])
    }

    fn require_coprime(&self) -> Result<()> {
        if self.0.iter().fold(0i64, |g, x| g.gcd(x)) != 1 {
            return Err(Error::input(format!("y = {self} does not have coprime entries")));
        }
        Ok(())
    }
}

pub fn vector_type(x: &TVector) -> Result<VectorType> {
    x.require_primitive()?;
    let c = &x.0;
    if c[..4].iter().all(|v| v % 2 == 0) && c[4] % 2 != 0 && c[5] % 2 != 0 {
        Ok(VectorType::Characteristic)
    } else {
        Ok(VectorType::Ordinary)
    }
}

/// Standard representative of the orbit with the given norm and type.
pub fn canonical_rep(norm: i64, ty: VectorType) -> Result<TVector> {
    if norm >= 0 {
        return Err(Error::input("canonical representatives exist for negative norms only"));
    }
    let m = -norm;
    match ty {
        VectorType::Ordinary if m % 2 == 1 => Ok(TVector([1, -(m - 1) / 2, 0, 0, 1, 0])),
        VectorType::Ordinary => Ok(TVector([1, -m / 2, 0, 0, 0, 0])),
        VectorType::Characteristic => {
            if m % 2 == 1 {
                return Err(Error::precondition("characteristic vectors have even norm"));
            }
            let k = m / 2;
            if k.rem_euclid(4) != 1 {
                return Err(Error::precondition(format!("characteristic norm -2k needs k = 1 mod 4, got k = {k}")));
            }
            Ok(TVector([2, (1 - k) / 2, 0, 0, 1, 1]))
        }
    }
}

/// Same orbit under `O(T)`: equal norm and equal type.
pub fn orbit_equivalent(x1: &TVector, x2: &TVector) -> Result<bool> {
    Ok(x1.norm() == x2.norm() && vector_type(x1)? == vector_type(x2)?)
}

/// `-<x,x>/2`.
pub fn delta_of_t(x: &TVector) -> BigRational {
    linalg::rat(-x.norm(), 2)
}

pub fn delta_of_y(y: &YVector) -> Result<i64> {
    y.require_coprime()?;
    let v = &y.0;
    Ok(v[4] * v[4] + v[5] * v[5] - 4 * (v[0] * v[1] + v[2] * v[3]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ParityCase {
    /// `y5 != y6 mod 2`: the embedded vector itself is primitive characteristic.
    Characteristic,
    /// `y5 = y6 mod 2`: half the embedded vector is primitive ordinary.
    HalfOrdinary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct YClassification {
    pub case: ParityCase,
    pub delta: i64,
    /// The primitive vector on the line through the embedded vector.
    pub primitive: TVector,
    /// Standard representative of the orbit of `primitive`.
    pub representative: TVector,
}

pub fn classify_y(y: &YVector) -> Result<YClassification> {
    let delta = delta_of_y(y)?;
    let emb = y.embedded();
    let v = &y.0;
    if (v[4] - v[5]).rem_euclid(2) == 1 {
        let representative = TVector([2, (1 - delta) / 2, 0, 0, 1, 1]);
        Ok(YClassification { case: ParityCase::Characteristic, delta, primitive: emb, representative })
    } else {
        let half = TVector(emb.0.map(|c| c / 2));
        let representative = if delta.rem_euclid(4) == 0 {
            TVector([1, -delta / 4, 0, 0, 0, 0])
        } else {
            TVector([1, (2 - delta) / 4, 0, 0, 1, 0])
        };
        Ok(YClassification { case: ParityCase::HalfOrdinary, delta, primitive: half, representative })
    }
}

/// Number of congruence-subgroup orbits inside one full orbit with invariant `delta`.
pub fn n_delta(delta: i64) -> Result<u32> {
    if delta < 1 {
        return Err(Error::input("delta must be positive"));
    }
    match (delta.rem_euclid(4), delta.rem_euclid(8)) {
        (0, _) => Ok(15),
        (1, _) => Ok(1),
        (2, 2) => Ok(10),
        (2, _) => Ok(6),
        _ => Err(Error::NotRepresented(format!("delta = {delta} is 3 mod 4"))),
    }
}

/// Class of the primitive representative in `T(2)*/T(2) = F_2^6`, in the
/// half-basis of `U(2) + U(2) + A1 + A1`.
pub fn f2_image(y: &YVector) -> Result<Element> {
    let c = classify_y(y)?;
    Ok(c.primitive.0.iter().map(|v| v.rem_euclid(2)).collect())
}

/// Primitive complement of `x` in `T`.
pub fn complement_in_t(x: &TVector) -> Result<IntLattice> {
    x.require_primitive()?;
    if x.norm() >= 0 {
        return Err(Error::precondition("complement is computed for negative-norm vectors"));
    }
    Ok(t_lattice().orthogonal_complement(&x.as_lattice_vector())?.with_label(format!("{x}^perp")))
}

/// The lattice `<d> + U + <-1>^2` expected for an even ordinary vector of norm `-d`.
pub fn expected_ordinary_complement(d: i64) -> Result<IntLattice> {
    parse_sum(&format!("<{d}>+U+<-1>^2"))
}

/// Rational invariants of `x^perp`, i.e. a diagonalisation over Q.
pub fn rational_class_of_complement(x: &TVector) -> Result<DiagonalQuadraticForm> {
    if x.norm() >= 0 {
        return Err(Error::precondition("delta(x) must be positive"));
    }
    let comp = t_lattice().orthogonal_complement(&x.as_lattice_vector())?;
    diagonal_over_q(&comp)
}

pub fn diagonal_over_q(l: &IntLattice) -> Result<DiagonalQuadraticForm> {
    let diag = linalg::diagonalize_symmetric(&linalg::to_rat_matrix(&l.gram_big()));
    DiagonalQuadraticForm::new(diag)
}

/// The diagonal model `U + <-2>^2 + <2 delta>` with `U ~ <1,-1>` over Q.
pub fn rational_model(delta: i64) -> Result<DiagonalQuadraticForm> {
    DiagonalQuadraticForm::from_ints(&[1, -1, -2, -2, 2 * delta])
}

/// Checks `x^perp ~_Q U + <-2>^2 + <2 delta(x)>`.
pub fn complement_matches_rational_model(x: &TVector) -> Result<bool> {
    let d2 = -x.norm();
    if d2 <= 0 || d2 % 2 != 0 {
        return Err(Error::precondition("delta(x) must be a positive integer"));
    }
    clifford_ks::rational_equivalence(&rational_class_of_complement(x)?, &rational_model(d2 / 2)?)
}

/// A 6x6 integer matrix acting on e-basis (equivalently g-basis) coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct TIsometry(pub [[i64; 6]; 6]);

impl TIsometry {
    pub fn identity() -> Self {
        TIsometry(std::array::from_fn(|r| std::array::from_fn(|c| i64::from(r == c))))
    }

    pub fn diagonal(d: [i64; 6]) -> Self {
        TIsometry(std::array::from_fn(|r| std::array::from_fn(|c| if r == c { d[r] } else { 0 })))
    }

    /// The matrix sending `e_i` to `e_{images[i]}`.
    pub fn permutation(images: [usize; 6]) -> Self {
        let mut m = [[0i64; 6]; 6];
        for (i, &j) in images.iter().enumerate() {
            m[j][i] = 1;
        }
        TIsometry(m)
    }

    pub fn column(&self, c: usize) -> TVector {
        TVector(std::array::from_fn(|r| self.0[r][c]))
    }

    pub fn apply(&self, x: &TVector) -> TVector {
        TVector(std::array::from_fn(|r| (0..6).map(|c| self.0[r][c] * x.0[c]).sum()))
    }

    pub fn compose(&self, other: &TIsometry) -> TIsometry {
        TIsometry(std::array::from_fn(|r| std::array::from_fn(|c| (0..6).map(|k| self.0[r][k] * other.0[k][c]).sum())))
    }

    /// Inverse of an isometry, `G M^T G` with `G` the (self-inverse) Gram of `T`.
    pub fn inverse(&self) -> TIsometry {
        let g = TIsometry(T_GRAM);
        let t = TIsometry(std::array::from_fn(|r| std::array::from_fn(|c| self.0[c][r])));
        g.compose(&t).compose(&g)
    }

    pub fn determinant(&self) -> BigInt {
        linalg::bareiss_det(&linalg::to_big_matrix(&self.rows()))
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.0.iter().map(|r| r.to_vec()).collect()
    }

    pub fn preserves_gram(&self) -> bool {
        (0..6).all(|i| (0..6).all(|j| self.column(i).pairing(&self.column(j)) == T_GRAM[i][j]))
    }

    pub fn is_identity_mod(&self, modulus: i64) -> bool {
        let id = TIsometry::identity();
        (0..6).all(|r| (0..6).all(|c| (self.0[r][c] - id.0[r][c]).rem_euclid(modulus) == 0))
    }
}

/// Integer isometries of `T` used for invariance sweeps: coordinate symmetries,
/// sign changes and reflections in vectors of norm `+-1` and `+-2`.
pub fn sample_isometries() -> Vec<TIsometry> {
    let mut out = vec![
        TIsometry::permutation([1, 0, 2, 3, 4, 5]),
        TIsometry::permutation([2, 3, 0, 1, 4, 5]),
        TIsometry::permutation([0, 1, 2, 3, 5, 4]),
        TIsometry::diagonal([1, 1, 1, 1, -1, 1]),
        TIsometry::diagonal([-1, -1, 1, 1, 1, 1]),
    ];
    for v in [
        [1, 1, 0, 0, 0, 0],
        [1, -1, 0, 0, 0, 0],
        [1, 0, 0, 0, 1, 0],
        [0, 1, 0, 0, 0, 1],
        [1, 1, 1, 0, 0, 0],
        [0, 0, 0, 0, 1, 1],
        [1, 1, 0, 0, 1, 0],
        [0, 0, 1, 1, 0, 1],
    ] {
        out.push(reflection(&TVector(v)).expect("the listed roots have norm +-1 or +-2"));
    }
    out
}

/// Reflection in a vector of norm `+-1` or `+-2`, which is integral on `T`.
pub fn reflection(v: &TVector) -> Result<TIsometry> {
    let n = v.norm();
    if n == 0 || 2 % n.abs() != 0 {
        return Err(Error::input(format!("{v} has norm {n}, reflection is not integral")));
    }
    let mut m = [[0i64; 6]; 6];
    for i in 0..6 {
        let mut e = [0i64; 6];
        e[i] = 1;
        let e = TVector(e);
        let k = 2 * e.pairing(v) / n;
        for r in 0..6 {
            m[r][i] = e.0[r] - k * v.0[r];
        }
    }
    Ok(TIsometry(m))
}

/// Row of the `orbit table` report.
#[derive(Debug, Clone, Serialize)]
pub struct OrbitTableRow {
    pub delta: i64,
    pub case: Option<ParityCase>,
    pub representative: Option<TVector>,
    pub n_delta: Option<u32>,
}

/// Table of `n(delta)` for `1 <= delta <= max`, with `None` for `delta = 3 mod 4`.
pub fn orbit_table(max: i64) -> Vec<OrbitTableRow> {
    (1..=max)
        .map(|delta| match n_delta(delta) {
            Ok(n) => {
                let y = y_for_delta(delta).expect("every delta != 3 mod 4 has a y-vector");
                let c = classify_y(&y).expect("y_for_delta returns coprime vectors");
                OrbitTableRow { delta, case: Some(c.case), representative: Some(c.representative), n_delta: Some(n) }
            }
            Err(_) => OrbitTableRow { delta, case: None, representative: None, n_delta: None },
        })
        .collect()
}

/// A coprime y-vector with the given invariant, or `None` when `delta = 3 mod 4`.
pub fn y_for_delta(delta: i64) -> Option<YVector> {
    match delta.rem_euclid(4) {
        // y5 = 1, y6 = 0: delta = 1 - 4 y1 y2
        1 => Some(YVector([1, (1 - delta) / 4, 0, 0, 1, 0])),
        // y5 = y6 = 0: delta = -4 y1 y2
        0 => Some(YVector([1, -delta / 4, 0, 0, 0, 0])),
        // y5 = y6 = 1: delta = 2 - 4 y1 y2
        2 => Some(YVector([1, (2 - delta) / 4, 0, 0, 1, 1])),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disc_form::same_genus_invariants;

    #[test]
    fn types() {
        assert_eq!(vector_type(&TVector([1, -3, 0, 0, 1, 0])).unwrap(), VectorType::Ordinary);
        assert_eq!(vector_type(&TVector([2, 0, 0, 0, 1, 1])).unwrap(), VectorType::Characteristic);
        assert_eq!(vector_type(&TVector([0, 0, 0, 0, 1, 0])).unwrap(), VectorType::Ordinary);
        assert!(vector_type(&TVector([0, 0, 0, 0, 2, 0])).is_err());
    }

    #[test]
    fn representatives() {
        assert_eq!(canonical_rep(-5, VectorType::Ordinary).unwrap(), TVector([1, -2, 0, 0, 1, 0]));
        assert_eq!(canonical_rep(-4, VectorType::Ordinary).unwrap(), TVector([1, -2, 0, 0, 0, 0]));
        assert_eq!(canonical_rep(-2, VectorType::Characteristic).unwrap(), TVector([2, 0, 0, 0, 1, 1]));
        assert!(canonical_rep(-4, VectorType::Characteristic).is_err());
        assert!(canonical_rep(0, VectorType::Ordinary).is_err());
        for n in 1..40 {
            let r = canonical_rep(-n, VectorType::Ordinary).unwrap();
            assert_eq!(r.norm(), -n);
            assert_eq!(vector_type(&r).unwrap(), VectorType::Ordinary);
        }
    }

    #[test]
    fn equivalence_examples() {
        assert!(orbit_equivalent(&TVector([1, -2, 0, 0, 0, 0]), &TVector([0, 0, 1, -2, 0, 0])).unwrap());
        assert!(!orbit_equivalent(&TVector([1, -1, 0, 0, 0, 0]), &TVector([0, 0, 0, 0, 1, 1])).unwrap());
    }

    #[test]
    fn deltas() {
        assert_eq!(delta_of_t(&TVector([0, 0, 0, 0, 1, 1])), linalg::rat(1, 1));
        assert_eq!(delta_of_t(&TVector([1, 1, 0, 0, 0, 0])), linalg::rat(-1, 1));
        assert_eq!(delta_of_t(&TVector([2, -2, 0, 0, 0, 0])), linalg::rat(4, 1));
        assert_eq!(delta_of_y(&YVector([1, -1, 0, 0, 0, 0])).unwrap(), 4);
        assert_eq!(delta_of_y(&YVector([0, 0, 0, 0, 1, 0])).unwrap(), 1);
        assert_eq!(delta_of_y(&YVector([0, 0, 0, 0, 1, 1])).unwrap(), 2);
        assert!(delta_of_y(&YVector([2, 0, 0, 0, 2, 0])).is_err());
    }

    #[test]
    fn classification_examples() {
        let c = classify_y(&YVector([0, 0, 0, 0, 1, 0])).unwrap();
        assert_eq!((c.case, c.delta, c.representative), (ParityCase::Characteristic, 1, TVector([2, 0, 0, 0, 1, 1])));
        let c = classify_y(&YVector([1, -1, 0, 0, 0, 0])).unwrap();
        assert_eq!((c.delta, c.representative), (4, TVector([1, -1, 0, 0, 0, 0])));
        let c = classify_y(&YVector([0, 0, 0, 0, 1, 1])).unwrap();
        assert_eq!((c.delta, c.representative), (2, TVector([1, 0, 0, 0, 1, 0])));
    }

    #[test]
    fn n_delta_values() {
        assert_eq!(n_delta(4).unwrap(), 15);
        assert_eq!(n_delta(2).unwrap(), 10);
        assert_eq!(n_delta(6).unwrap(), 6);
        assert_eq!(n_delta(1).unwrap(), 1);
        assert!(matches!(n_delta(3), Err(Error::NotRepresented(_))));
    }

    #[test]
    fn f2_images() {
        assert_eq!(f2_image(&YVector([1, -2, 0, 0, 0, 0])).unwrap(), vec![1, 0, 0, 0, 0, 0]);
        assert_eq!(f2_image(&YVector([1, -1, 0, 0, 0, 0])).unwrap(), vec![1, 1, 0, 0, 0, 0]);
        assert_eq!(f2_image(&YVector([0, 0, 0, 0, 1, 0])).unwrap(), vec![0, 0, 0, 0, 1, 1]);
    }

    #[test]
    fn complements() {
        let c = complement_in_t(&TVector([1, -2, 0, 0, 0, 0])).unwrap();
        assert!(same_genus_invariants(&c, &expected_ordinary_complement(4).unwrap()).unwrap());
        let c = complement_in_t(&TVector([0, 0, 0, 0, 1, 1])).unwrap();
        assert!(same_genus_invariants(&c, &parse_sum("U^2+<-2>").unwrap()).unwrap());
        assert!(complement_in_t(&TVector([0, 0, 0, 0, 2, 0])).is_err());
    }

    #[test]
    fn rational_classes() {
        for delta in [1, 2, 4, 6, 8] {
            let y = y_for_delta(delta).unwrap();
            assert!(complement_matches_rational_model(&y.embedded()).unwrap(), "delta {delta}");
        }
        assert!(rational_class_of_complement(&TVector([1, 1, 0, 0, 0, 0])).is_err());
    }

    #[test]
    fn sample_isometries_are_isometries() {
        for m in sample_isometries() {
            assert!(m.preserves_gram());
            assert_eq!(m.inverse().compose(&m), TIsometry::identity());
        }
        assert!(reflection(&TVector([1, 0, 1, 0, 0, 0])).is_err());
    }

    #[test]
    fn table_up_to_eight() {
        let rows: Vec<(i64, u32)> = orbit_table(8).into_iter().filter_map(|r| r.n_delta.map(|n| (r.delta, n))).collect();
        assert_eq!(rows, vec![(1, 1), (2, 10), (4, 15), (5, 1), (6, 6), (8, 15)]);
    }
}
