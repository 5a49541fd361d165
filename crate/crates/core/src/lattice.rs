//! Integer lattices given by Gram matrices.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, IntMatrix};

/// Inertia of a nondegenerate symmetric form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignaturePair {
    pub pos: usize,
    pub neg: usize,
}

impl SignaturePair {
    pub fn new(pos: usize, neg: usize) -> Self {
        SignaturePair { pos, neg }
    }

    pub fn is_indefinite(&self) -> bool {
        self.pos > 0 && self.neg > 0
    }
}

impl std::ops::Add for SignaturePair {
    type Output = SignaturePair;
    fn add(self, rhs: SignaturePair) -> SignaturePair {
        SignaturePair::new(self.pos + rhs.pos, self.neg + rhs.neg)
    }
}

impl fmt::Display for SignaturePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.pos, self.neg)
    }
}

/// Coordinates of a vector with respect to the basis of some lattice.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeVector(pub Vec<i64>);

impl LatticeVector {
    pub fn new(coords: impl Into<Vec<i64>>) -> Self {
        LatticeVector(coords.into())
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn content(&self) -> i64 {
        self.0.iter().fold(0i64, |g, &x| g.gcd(&x))
    }
}

impl From<Vec<i64>> for LatticeVector {
    fn from(v: Vec<i64>) -> Self {
        LatticeVector(v)
    }
}

/// Names of the built-in lattices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StandardLattice {
    /// The hyperbolic plane.
    U,
    /// The hyperbolic plane with its form multiplied by the argument.
    ScaledU(i64),
    A(usize),
    D(usize),
    E(usize),
    /// The rank-one lattice with the given self-pairing.
    Diag(i64),
}

/// A nondegenerate integral symmetric bilinear form on `Z^rank`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntLattice {
    #[serde(default)]
    label: String,
    gram: Vec<Vec<i64>>,
}

impl IntLattice {
    /// Validates squareness, symmetry and nondegeneracy.
    pub fn new(gram: Vec<Vec<i64>>, label: impl Into<String>) -> Result<Self> {
        let l = IntLattice { label: label.into(), gram };
        l.validate()?;
        Ok(l)
    }

    fn validate(&self) -> Result<()> {
        let n = self.gram.len();
        if self.gram.iter().any(|r| r.len() != n) {
            return Err(Error::input("gram matrix is not square"));
        }
        for i in 0..n {
            for j in 0..i {
                if self.gram[i][j] != self.gram[j][i] {
                    return Err(Error::input(format!("gram matrix is not symmetric at ({i},{j})")));
                }
            }
        }
        if self.determinant().is_zero() {
            return Err(Error::input("gram matrix is degenerate"));
        }
        Ok(())
    }

    /// The rank-zero lattice, neutral for `direct_sum`.
    pub fn zero() -> Self {
        IntLattice { label: "0".into(), gram: Vec::new() }
    }

    pub fn standard(kind: StandardLattice) -> Result<Self> {
        match kind {
            StandardLattice::U => Ok(IntLattice { label: "U".into(), gram: vec![vec![0, 1], vec![1, 0]] }),
            StandardLattice::ScaledU(a) => {
                if a == 0 {
                    return Err(Error::input("U(a) needs a nonzero scale"));
                }
                Ok(IntLattice { label: format!("U({a})"), gram: vec![vec![0, a], vec![a, 0]] })
            }
            StandardLattice::A(k) => {
                if k < 1 {
                    return Err(Error::input("A(k) needs k >= 1"));
                }
                let edges: Vec<(usize, usize)> = (1..k).map(|i| (i - 1, i)).collect();
                Ok(dynkin(k, &edges, format!("A{k}")))
            }
            StandardLattice::D(k) => {
                if k < 4 {
                    return Err(Error::input("D(k) needs k >= 4"));
                }
                // chain 0-1-...-(k-2) with the extra node k-1 attached to k-3
                let mut edges: Vec<(usize, usize)> = (1..k - 1).map(|i| (i - 1, i)).collect();
                edges.push((k - 3, k - 1));
                Ok(dynkin(k, &edges, format!("D{k}")))
            }
            StandardLattice::E(k) => {
                if !(6..=8).contains(&k) {
                    return Err(Error::input("E(k) needs k in 6..=8"));
                }
                // chain 0-1-...-(k-2) with the extra node k-1 attached to node 2
                let mut edges: Vec<(usize, usize)> = (1..k - 1).map(|i| (i - 1, i)).collect();
                edges.push((2, k - 1));
                Ok(dynkin(k, &edges, format!("E{k}")))
            }
            StandardLattice::Diag(n) => {
                if n == 0 {
                    return Err(Error::input("<n> needs n != 0"));
                }
                Ok(IntLattice { label: format!("<{n}>"), gram: vec![vec![n]] })
            }
        }
    }

    /// Parses a family name such as `U`, `U(2)`, `A3`, `D(6)`, `E8`, `<-4>` or `diag(3)`.
    pub fn parse_standard(name: &str) -> Result<Self> {
        let s: String = name.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = |prefix: &str| -> Option<&str> {
            let rest = s.strip_prefix(prefix)?;
            Some(rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(rest))
        };
        let int = |t: &str| t.parse::<i64>().map_err(|_| Error::input(format!("bad lattice name `{name}`")));
        if s == "U" {
            return Self::standard(StandardLattice::U);
        }
        if let Some(body) = s.strip_prefix('<').and_then(|r| r.strip_suffix('>')) {
            return Self::standard(StandardLattice::Diag(int(body)?));
        }
        if let Some(body) = inner("diag") {
            return Self::standard(StandardLattice::Diag(int(body)?));
        }
        if let Some(body) = inner("U") {
            return Self::standard(StandardLattice::ScaledU(int(body)?));
        }
        for (prefix, make) in [
            ("A", StandardLattice::A as fn(usize) -> StandardLattice),
            ("D", StandardLattice::D),
            ("E", StandardLattice::E),
        ] {
            if let Some(body) = inner(prefix) {
                let k = int(body)?;
                let k = usize::try_from(k).map_err(|_| Error::input(format!("bad lattice name `{name}`")))?;
                return Self::standard(make(k));
            }
        }
        Err(Error::input(format!("unknown lattice family `{name}`")))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn gram_big(&self) -> IntMatrix {
        linalg::to_big_matrix(&self.gram)
    }

    pub fn direct_sum(&self, other: &IntLattice) -> IntLattice {
        let (n, m) = (self.rank(), other.rank());
        let mut gram = vec![vec![0i64; n + m]; n + m];
        for i in 0..n {
            gram[i][..n].copy_from_slice(&self.gram[i]);
        }
        for i in 0..m {
            gram[n + i][n..].copy_from_slice(&other.gram[i]);
        }
        let label = match (self.rank(), other.rank()) {
            (0, _) => other.label.clone(),
            (_, 0) => self.label.clone(),
            _ => format!("{}+{}", self.label, other.label),
        };
        IntLattice { label, gram }
    }

    /// Orthogonal sum of a list of lattices.
    pub fn sum_of<'a>(parts: impl IntoIterator<Item = &'a IntLattice>) -> IntLattice {
        parts.into_iter().fold(IntLattice::zero(), |acc, l| acc.direct_sum(l))
    }

    pub fn rescale(&self, a: i64) -> Result<IntLattice> {
        if a == 0 {
            return Err(Error::input("rescale factor must be nonzero"));
        }
        let gram = self.gram.iter().map(|r| r.iter().map(|&x| x * a).collect()).collect();
        Ok(IntLattice { label: format!("{}({a})", self.label), gram })
    }

    pub fn determinant(&self) -> BigInt {
        linalg::bareiss_det(&self.gram_big())
    }

    pub fn signature(&self) -> SignaturePair {
        let diag = linalg::diagonalize_symmetric(&linalg::to_rat_matrix(&self.gram_big()));
        let pos = diag.iter().filter(|d| d.is_positive()).count();
        let neg = diag.iter().filter(|d| d.is_negative()).count();
        SignaturePair::new(pos, neg)
    }

    pub fn is_definite(&self) -> bool {
        let s = self.signature();
        s.pos == 0 || s.neg == 0
    }

    pub fn is_even(&self) -> bool {
        self.gram.iter().enumerate().all(|(i, r)| r[i] % 2 == 0)
    }

    pub fn pairing(&self, u: &[i64], w: &[i64]) -> i64 {
        let mut acc = 0i64;
        for (i, &ui) in u.iter().enumerate() {
            if ui == 0 {
                continue;
            }
            for (j, &wj) in w.iter().enumerate() {
                acc += ui * self.gram[i][j] * wj;
            }
        }
        acc
    }

    pub fn norm(&self, v: &LatticeVector) -> i64 {
        self.pairing(&v.0, &v.0)
    }

    fn check_vector(&self, v: &LatticeVector) -> Result<()> {
        if v.0.len() != self.rank() {
            return Err(Error::input(format!("vector has length {}, lattice rank is {}", v.0.len(), self.rank())));
        }
        Ok(())
    }

    pub fn is_primitive(&self, v: &LatticeVector) -> Result<bool> {
        self.check_vector(v)?;
        if v.is_zero() {
            return Err(Error::input("the zero vector has no primitivity"));
        }
        Ok(v.content() == 1)
    }

    /// Primitive sublattice of vectors orthogonal to `v`, with a Hermite-reduced basis.
    pub fn orthogonal_complement(&self, v: &LatticeVector) -> Result<IntLattice> {
        let (basis, _) = self.orthogonal_complement_basis(v)?;
        Ok(basis)
    }

    /// Like [`orthogonal_complement`](Self::orthogonal_complement) but also returns the basis
    /// vectors in the coordinates of `self`.
    pub fn orthogonal_complement_basis(&self, v: &LatticeVector) -> Result<(IntLattice, Vec<Vec<i64>>)> {
        self.check_vector(v)?;
        if v.is_zero() {
            return Err(Error::input("complement of the zero vector"));
        }
        let row: Vec<BigInt> = (0..self.rank())
            .map(|j| v.0.iter().enumerate().map(|(i, &vi)| BigInt::from(vi * self.gram[i][j])).sum())
            .collect();
        let kernel = linalg::integer_kernel(&[row], self.rank());
        let basis: Vec<Vec<i64>> = kernel
            .iter()
            .map(|r| r.iter().map(|x| x.to_i64().ok_or_else(|| Error::Internal("kernel overflow".into()))).collect())
            .collect::<Result<_>>()?;
        let gram: Vec<Vec<i64>> =
            basis.iter().map(|u| basis.iter().map(|w| self.pairing(u, w)).collect()).collect();
        let lattice = IntLattice { label: format!("{}^perp", self.label), gram };
        if lattice.rank() + 1 != self.rank() || lattice.determinant().is_zero() {
            return Err(Error::precondition("orthogonal complement is degenerate"));
        }
        Ok((lattice, basis))
    }

    /// Sublattice spanned by the given vectors (assumed independent), with its Gram matrix.
    pub fn sublattice(&self, basis: &[Vec<i64>], label: impl Into<String>) -> Result<IntLattice> {
        let gram = basis.iter().map(|u| basis.iter().map(|w| self.pairing(u, w)).collect()).collect();
        IntLattice::new(gram, label)
    }

    /// `(scale, norm_gcd)`: gcd of all Gram entries, and gcd of all norms.
    pub fn scale_and_norm(&self) -> (i64, i64) {
        let mut scale = 0i64;
        let mut norm = 0i64;
        for (i, row) in self.gram.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                scale = scale.gcd(&x);
                norm = norm.gcd(&if i == j { x } else { 2 * x });
            }
        }
        (scale, norm)
    }

    /// Decides isometry of two definite lattices of rank at most 12.
    pub fn is_isometric_definite(&self, other: &IntLattice) -> Result<bool> {
        crate::isometry::is_isometric_definite(self, other)
    }
}

fn dynkin(k: usize, edges: &[(usize, usize)], label: String) -> IntLattice {
    let mut gram = vec![vec![0i64; k]; k];
    for (i, row) in gram.iter_mut().enumerate() {
        row[i] = -2;
    }
    for &(a, b) in edges {
        gram[a][b] = 1;
        gram[b][a] = 1;
    }
    IntLattice { label, gram }
}

/// Wire format `{"label": ..., "gram": [[...]]}`.
pub fn lattice_from_json(text: &str) -> Result<IntLattice> {
    let raw: IntLattice = serde_json::from_str(text).map_err(|e| Error::input(format!("malformed lattice JSON: {e}")))?;
    raw.validate()?;
    Ok(raw)
}

pub fn lattice_to_json(l: &IntLattice) -> String {
    serde_json::to_string(l).expect("lattice serialization cannot fail")
}

/// Shorthand used throughout tests and scenarios: parse a `+`-separated
/// list of family names, where a trailing `^k` repeats a summand.
pub fn parse_sum(spec: &str) -> Result<IntLattice> {
    let mut parts = Vec::new();
    for term in spec.split('+') {
        let term = term.trim();
        let (name, times) = match term.rsplit_once('^') {
            Some((n, t)) => (n, t.parse::<usize>().map_err(|_| Error::input(format!("bad repeat in `{term}`")))?),
            None => (term, 1),
        };
        let l = IntLattice::parse_standard(name)?;
        parts.extend(std::iter::repeat_n(l, times));
    }
    Ok(IntLattice::sum_of(&parts).with_label(spec))
}

impl fmt::Display for IntLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (rank {})", self.label, self.rank())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(spec: &str) -> IntLattice {
        parse_sum(spec).unwrap()
    }

    #[test]
    fn standard_determinants() {
        assert_eq!(l("E8").determinant(), BigInt::from(1));
        assert_eq!(l("E7").determinant(), BigInt::from(-2));
        assert_eq!(l("E6").determinant(), BigInt::from(3));
        assert_eq!(l("D4").determinant(), BigInt::from(4));
        assert_eq!(l("D6").determinant(), BigInt::from(4));
        assert_eq!(l("D5").determinant(), BigInt::from(-4));
        for k in 1..10 {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            assert_eq!(l(&format!("A{k}")).determinant(), BigInt::from(sign * (k as i64 + 1)));
        }
        assert_eq!(l("U^3+E8^2").determinant(), BigInt::from(-1));
        assert_eq!(l("<7>").determinant(), BigInt::from(7));
    }

    #[test]
    fn generic_ns_lattice() {
        let ns = l("U+D6^2+A1^2");
        assert_eq!(ns.determinant(), BigInt::from(-64));
        assert_eq!(ns.signature(), SignaturePair::new(1, 15));
    }

    #[test]
    fn transcendental_lattices() {
        let t = l("U^2+<-1>^2");
        assert_eq!(t.signature(), SignaturePair::new(2, 4));
        assert!(!t.is_even());
        assert!(t.rescale(2).unwrap().is_even());
        assert_eq!(l("U").signature(), SignaturePair::new(1, 1));
        assert_eq!(l("<1>").signature(), SignaturePair::new(1, 0));
    }

    #[test]
    fn scale_and_norm_examples() {
        assert_eq!(l("U(2)^2+<-4>").scale_and_norm(), (2, 4));
        assert_eq!(l("U(2)+A1^2+<4>").scale_and_norm(), (2, 2));
        assert_eq!(l("U").scale_and_norm(), (1, 2));
    }

    #[test]
    fn complement_of_diagonal_in_u() {
        let c = l("U").orthogonal_complement(&LatticeVector::new(vec![1, 1])).unwrap();
        assert_eq!(c.gram(), &[vec![-2]]);
    }

    #[test]
    fn primitivity() {
        let t = l("U^2+<-1>^2");
        assert!(t.is_primitive(&LatticeVector::new(vec![1, -3, 0, 0, 1, 0])).unwrap());
        assert!(!t.is_primitive(&LatticeVector::new(vec![2, -2, 0, 0, 0, 0])).unwrap());
        assert!(t.is_primitive(&LatticeVector::new(vec![0, 0, 0, 0, 0, 1])).unwrap());
        assert!(t.is_primitive(&LatticeVector::new(vec![0; 6])).is_err());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(IntLattice::new(vec![vec![1, 2], vec![3, 1]], "x").is_err());
        assert!(IntLattice::new(vec![vec![1, 1], vec![1, 1]], "x").is_err());
        assert!(lattice_from_json("{\"gram\": [[1,2]]}").is_err());
        assert!(lattice_from_json("not json").is_err());
        let ok = lattice_from_json("{\"label\":\"U\",\"gram\":[[0,1],[1,0]]}").unwrap();
        assert_eq!(ok, l("U").with_label("U"));
        assert!(IntLattice::standard(StandardLattice::D(3)).is_err());
        assert!(IntLattice::standard(StandardLattice::A(0)).is_err());
        assert!(IntLattice::standard(StandardLattice::Diag(0)).is_err());
        assert!(l("U").rescale(0).is_err());
    }

    #[test]
    fn sum_with_zero_lattice_is_identity() {
        let u = l("U");
        assert_eq!(u.direct_sum(&IntLattice::zero()), u);
    }
}
