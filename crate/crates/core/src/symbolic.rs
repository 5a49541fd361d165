//! Sparse multivariate polynomials over `Q` and exact identity checks for
//! the explicit equations of the one-parameter degeneration with a section
//! of height one: the Weierstrass section, the conic through six nodes and
//! the conic tangent to all six lines.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::group_iso::PLUCKER_PAIRS;
use crate::linalg::rat;
use crate::report::Report;

/// Exponent vector of a monomial, one entry per ring variable.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub Vec<u16>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| u32::from(e)).sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

/// A polynomial with rational coefficients. Zero coefficients are never
/// stored and terms are kept in lexicographic exponent order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, BigRational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, rat(c, 1))
    }

    pub fn variable(nvars: usize, index: usize) -> Self {
        let mut m = Monomial::one(nvars);
        m.0[index] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(m, BigRational::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, var: usize) -> Option<u16> {
        self.terms.keys().map(|m| m.0[var]).max()
    }

    /// True when every term has the same total degree in the listed variables.
    pub fn is_homogeneous_in(&self, vars: &[usize]) -> bool {
        let mut degrees = self.terms.keys().map(|m| vars.iter().map(|&v| u32::from(m.0[v])).sum::<u32>());
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|e| e == d),
        }
    }

    /// Largest term in the lexicographic order, used to point at a failure.
    pub fn leading_term(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly {
        (0..k).fold(Poly::int(self.nvars, 1), |acc, _| &acc * self)
    }

    /// The coefficient of `prod var^exp` over the listed variables, as a
    /// polynomial in the remaining ones.
    pub fn coefficient(&self, pattern: &[(usize, u16)]) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            if pattern.iter().all(|&(v, e)| m.0[v] == e) {
                let mut rest = m.clone();
                for &(v, _) in pattern {
                    rest.0[v] = 0;
                }
                out.add_term(rest, c.clone());
            }
        }
        out
    }

    /// Substitutes `images[i]` for variable `i` wherever an image is given.
    pub fn compose(&self, images: &[Option<Poly>]) -> Poly {
        assert_eq!(images.len(), self.nvars, "one image slot per variable");
        let target = images.iter().flatten().map(Poly::nvars).next().unwrap_or(self.nvars);
        let mut powers: Vec<Vec<Poly>> = images
            .iter()
            .map(|img| img.as_ref().map_or_else(Vec::new, |p| vec![Poly::int(target, 1), p.clone()]))
            .collect();
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut kept = Monomial::one(target);
            let mut term = Poly::int(target, 1);
            for (v, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if images[v].is_some() {
                    while powers[v].len() <= usize::from(e) {
                        let next = &powers[v][powers[v].len() - 1] * &powers[v][1];
                        powers[v].push(next);
                    }
                    term = &term * &powers[v][usize::from(e)];
                } else {
                    kept.0[v] = e;
                }
            }
            let mut mono = Poly::zero(target);
            mono.add_term(kept, c.clone());
            let contribution = &term * &mono;
            for (mm, cc) in contribution.terms {
                out.add_term(mm, cc);
            }
        }
        out
    }

    /// Value at a rational point.
    pub fn evaluate(&self, point: &[BigRational]) -> BigRational {
        self.terms
            .iter()
            .map(|(m, c)| {
                m.0.iter().zip(point).fold(c.clone(), |acc, (&e, x)| acc * num_traits::pow(x.clone(), usize::from(e)))
            })
            .sum()
    }
}

impl Add for &Poly {
    type Output = Poly;

    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "polynomials from different rings");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;

    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Mul for &Poly {
    type Output = Poly;

    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "polynomials from different rings");
        let mut out = Poly::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

/// Variable names for printing and lookup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyRing {
    names: Vec<String>,
}

impl PolyRing {
    pub fn new(names: &[&str]) -> Self {
        PolyRing { names: names.iter().map(|s| s.to_string()).collect() }
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn index(&self, name: &str) -> Result<usize> {
        self.names.iter().position(|n| n == name).ok_or_else(|| Error::input(format!("unknown variable `{name}`")))
    }

    /// The variable `name`; panics on an unknown name, which is a programming error.
    pub fn var(&self, name: &str) -> Poly {
        Poly::variable(self.nvars(), self.index(name).expect("variable declared in ring"))
    }

    pub fn int(&self, c: i64) -> Poly {
        Poly::int(self.nvars(), c)
    }

    pub fn zero(&self) -> Poly {
        Poly::zero(self.nvars())
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        let parts: Vec<String> = m
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(v, &e)| if e == 1 { self.names[v].clone() } else { format!("{}^{e}", self.names[v]) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    pub fn format(&self, p: &Poly) -> String {
        if p.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in p.terms.iter().rev().enumerate() {
            let sign = match (c.is_negative(), i > 0) {
                (true, true) => "- ",
                (true, false) => "-",
                (false, true) => "+ ",
                (false, false) => "",
            };
            let abs = c.abs();
            let mono = self.format_monomial(m);
            let body = match (abs.is_one(), mono.as_str()) {
                (true, _) => mono,
                (false, "1") => abs.to_string(),
                (false, _) => format!("{abs}*{mono}"),
            };
            out.push_str(&format!("{}{sign}{body}", if i > 0 { " " } else { "" }));
        }
        out
    }

    /// Short description of a nonzero residue: its size and leading term.
    pub fn localize(&self, residue: &Poly) -> String {
        match residue.leading_term() {
            None => "0".into(),
            Some((m, c)) => {
                format!("{} terms, leading term {c}*{}", residue.num_terms(), self.format_monomial(m))
            }
        }
    }
}

/// A quotient of polynomials. Fractions are not reduced; equality is decided
/// by cross-multiplication.
#[derive(Debug, Clone)]
pub struct RationalFunction {
    pub numerator: Poly,
    pub denominator: Poly,
}

impl RationalFunction {
    pub fn new(numerator: Poly, denominator: Poly) -> Result<Self> {
        if denominator.is_zero() {
            return Err(Error::input("zero denominator"));
        }
        Ok(RationalFunction { numerator, denominator })
    }

    pub fn from_poly(p: Poly) -> Self {
        let one = Poly::int(p.nvars(), 1);
        RationalFunction { numerator: p, denominator: one }
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn equals(&self, other: &RationalFunction) -> bool {
        (&self.numerator * &other.denominator) == (&other.numerator * &self.denominator)
    }

    pub fn mul(&self, other: &RationalFunction) -> RationalFunction {
        RationalFunction {
            numerator: &self.numerator * &other.numerator,
            denominator: &self.denominator * &other.denominator,
        }
    }

    pub fn add(&self, other: &RationalFunction) -> RationalFunction {
        if self.denominator == other.denominator {
            return RationalFunction {
                numerator: &self.numerator + &other.numerator,
                denominator: self.denominator.clone(),
            };
        }
        RationalFunction {
            numerator: &(&self.numerator * &other.denominator) + &(&other.numerator * &self.denominator),
            denominator: &self.denominator * &other.denominator,
        }
    }

    pub fn neg(&self) -> RationalFunction {
        RationalFunction { numerator: -&self.numerator, denominator: self.denominator.clone() }
    }

    pub fn sub(&self, other: &RationalFunction) -> RationalFunction {
        self.add(&other.neg())
    }

    pub fn div(&self, other: &RationalFunction) -> Result<RationalFunction> {
        if other.is_zero() {
            return Err(Error::input("division by zero rational function"));
        }
        Ok(RationalFunction {
            numerator: &self.numerator * &other.denominator,
            denominator: &self.denominator * &other.numerator,
        })
    }

    /// Substitutes polynomials for variables in numerator and denominator.
    pub fn compose(&self, images: &[Option<Poly>]) -> Result<RationalFunction> {
        RationalFunction::new(self.numerator.compose(images), self.denominator.compose(images))
    }
}

/// Variables shared by the line, node and conic computations.
pub fn line_ring() -> PolyRing {
    PolyRing::new(&["x", "y", "z", "s", "t", "a1", "a2", "a3", "b", "b3"])
}

/// The six branch lines as coefficient vectors `(cx, cy, cz)` over
/// `Q(a1, a2, a3, b1, b2, b3)`, with `b1, b2` given as rational functions.
#[derive(Debug, Clone)]
pub struct LineCoefficients(pub [RationalFunction; 3]);

impl LineCoefficients {
    /// Clears denominators; projective data are unchanged.
    pub fn polynomial(&self) -> [Poly; 3] {
        let dens: Vec<&Poly> = self.0.iter().map(|c| &c.denominator).collect();
        std::array::from_fn(|i| {
            dens.iter().enumerate().filter(|&(j, _)| j != i).fold(self.0[i].numerator.clone(), |acc, (_, d)| &acc * d)
        })
    }

    pub fn form(&self, ring: &PolyRing) -> Result<RationalFunction> {
        let vars = ["x", "y", "z"].map(|v| RationalFunction::from_poly(ring.var(v)));
        Ok(self.0.iter().zip(&vars).fold(RationalFunction::from_poly(ring.zero()), |acc, (c, v)| acc.add(&c.mul(v))))
    }
}

/// The specialization making the section of height one appear:
/// `b1 = b a1 b3 / (a3 + (b-1) a1)`, `b2 = b a2 b3 / (a3 + (b-1) a2)` and
/// `a = -b a3 b3 (a1 - a2)^2 / ((a3 + (b-1) a1)(a3 + (b-1) a2))`.
#[derive(Debug, Clone)]
pub struct Delta1Specialization {
    pub b1: RationalFunction,
    pub b2: RationalFunction,
    pub a: RationalFunction,
}

pub fn delta1_specialization(ring: &PolyRing) -> Delta1Specialization {
    let [a1, a2, a3, b, b3] = ["a1", "a2", "a3", "b", "b3"].map(|v| ring.var(v));
    let bm1 = &b - &ring.int(1);
    let den1 = &a3 + &(&bm1 * &a1);
    let den2 = &a3 + &(&bm1 * &a2);
    let diff = &a1 - &a2;
    let b1 = RationalFunction { numerator: &(&b * &a1) * &b3, denominator: den1.clone() };
    let b2 = RationalFunction { numerator: &(&b * &a2) * &b3, denominator: den2.clone() };
    let a = RationalFunction {
        numerator: -&(&(&(&b * &a3) * &b3) * &(&diff * &diff)),
        denominator: &den1 * &den2,
    };
    Delta1Specialization { b1, b2, a }
}

/// `l1 = x, l2 = y, l3 = x+y+z, l4 = a1 x + a2 y + a3 z, l5 = z, l6 = b1 x + b2 y + b3 z`
/// with `b1, b2` taken from the specialization.
pub fn normalize_lines(ring: &PolyRing) -> [LineCoefficients; 6] {
    let c = |p: Poly| RationalFunction::from_poly(p);
    let (zero, one) = (|| ring.zero(), || ring.int(1));
    let spec = delta1_specialization(ring);
    [
        LineCoefficients([c(one()), c(zero()), c(zero())]),
        LineCoefficients([c(zero()), c(one()), c(zero())]),
        LineCoefficients([c(one()), c(one()), c(one())]),
        LineCoefficients([c(ring.var("a1")), c(ring.var("a2")), c(ring.var("a3"))]),
        LineCoefficients([c(zero()), c(zero()), c(one())]),
        LineCoefficients([spec.b1, spec.b2, c(ring.var("b3"))]),
    ]
}

/// Homogeneous coordinates of the intersection of two lines (cross product).
pub fn node(lines: &[LineCoefficients; 6], i: usize, j: usize) -> [Poly; 3] {
    let u = lines[i - 1].polynomial();
    let v = lines[j - 1].polynomial();
    [&(&u[1] * &v[2]) - &(&u[2] * &v[1]), &(&u[2] * &v[0]) - &(&u[0] * &v[2]), &(&u[0] * &v[1]) - &(&u[1] * &v[0])]
}

/// The conic through six nodes as printed in the affine chart `z = 1`.
pub const CONIC_Q_TERMS: [(i64, &str); 17] = [
    (-1, "a1^2 x^2 a2"),
    (1, "a1^2 x^2 a3"),
    (1, "a1^2 x^2 b a2"),
    (-1, "a1^2 x a2 y"),
    (1, "x a1^2 a2 b"),
    (1, "a1^2 x a2 y b"),
    (-1, "a1 x a2^2 y"),
    (2, "a3 x y a1 a2"),
    (-1, "x a1^2 a2"),
    (1, "x a3 a1^2"),
    (1, "a1 x a2^2 y b"),
    (1, "a1 a2^2 y b"),
    (-1, "a1 a2^2 y"),
    (1, "a3 y a2^2"),
    (-1, "a2^2 y^2 a1"),
    (1, "a2^2 y^2 a3"),
    (1, "a2^2 y^2 b a1"),
];

/// Parses a space-separated product such as `a1^2 x a2`.
pub fn parse_monomial(ring: &PolyRing, text: &str) -> Result<Poly> {
    text.split_whitespace().try_fold(ring.int(1), |acc, factor| {
        let (name, exp) = match factor.split_once('^') {
            Some((n, e)) => (n, e.parse::<u32>().map_err(|_| Error::input(format!("bad exponent in `{factor}`")))?),
            None => (factor, 1),
        };
        Ok(&acc * &Poly::variable(ring.nvars(), ring.index(name)?).pow(exp))
    })
}

pub fn conic_q_affine(ring: &PolyRing) -> Result<Poly> {
    CONIC_Q_TERMS.iter().try_fold(ring.zero(), |acc, &(c, m)| Ok(&acc + &parse_monomial(ring, m)?.scale(&rat(c, 1))))
}

/// Homogenizes a polynomial of degree at most `degree` in `x, y` with `z`.
pub fn homogenize(ring: &PolyRing, p: &Poly, degree: u16) -> Result<Poly> {
    let (x, y, z) = (ring.index("x")?, ring.index("y")?, ring.index("z")?);
    let mut out = ring.zero();
    for (m, c) in p.terms() {
        let d = m.0[x] + m.0[y];
        if d > degree {
            return Err(Error::input("degree exceeds the homogenization degree"));
        }
        let mut mm = m.clone();
        mm.0[z] += degree - d;
        let mut t = ring.zero();
        t.add_term(mm, c.clone());
        out = &out + &t;
    }
    Ok(out)
}

fn at_point(ring: &PolyRing, p: &Poly, point: &[Poly; 3]) -> Poly {
    let mut images: Vec<Option<Poly>> = vec![None; ring.nvars()];
    for (name, value) in ["x", "y", "z"].iter().zip(point) {
        images[ring.index(name).expect("coordinate variables")] = Some(value.clone());
    }
    p.compose(&images)
}

/// Outcome of one identity check, with the residue localized on failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub label: String,
    pub holds: bool,
    pub detail: String,
}

impl IdentityCheck {
    fn from_residue(ring: &PolyRing, label: impl Into<String>, residue: &Poly) -> Self {
        let holds = residue.is_zero();
        let detail = if holds { "identically zero".to_string() } else { format!("residue has {}", ring.localize(residue)) };
        IdentityCheck { label: label.into(), holds, detail }
    }
}

/// Nodes through which the printed conic passes, in the line labels of the
/// normalized coordinates: the two triangles `{1,2,3}` and `{4,5,6}`.
pub const CONIC_NODES: [(usize, usize); 6] = [(1, 2), (1, 3), (2, 3), (4, 5), (4, 6), (5, 6)];

/// The same six nodes in the labelling of the abstract incidence argument,
/// which differs from the normalized one by exchanging lines 3 and 5.
pub const CONIC_NODES_INCIDENCE_LABELS: [(usize, usize); 6] = [(1, 2), (1, 5), (2, 5), (3, 4), (3, 6), (4, 6)];

/// Exchanges the labels 3 and 5.
pub fn swap_three_five(pair: (usize, usize)) -> (usize, usize) {
    let f = |i| match i {
        3 => 5,
        5 => 3,
        other => other,
    };
    let (a, b) = (f(pair.0), f(pair.1));
    (a.min(b), a.max(b))
}

/// Evaluates the homogenized conic at the given nodes of the normalized lines.
pub fn conic_node_checks(nodes: &[(usize, usize)]) -> Result<Vec<IdentityCheck>> {
    let ring = line_ring();
    let lines = normalize_lines(&ring);
    let q = homogenize(&ring, &conic_q_affine(&ring)?, 2)?;
    Ok(nodes
        .iter()
        .map(|&(i, j)| {
            let residue = at_point(&ring, &q, &node(&lines, i, j));
            IdentityCheck::from_residue(&ring, format!("Q(P{i}{j})"), &residue)
        })
        .collect())
}

pub fn verify_conic_nodes() -> Result<bool> {
    Ok(conic_node_checks(&CONIC_NODES)?.iter().all(|c| c.holds))
}

/// `alpha^2 x^2 + beta^2 y^2 + gamma^2 z^2 - 2(alpha beta xy + alpha gamma xz + beta gamma yz)`
/// with `alpha = a1(a2-a3)`, `beta = a2(a3-a1)`, `gamma = a3(a1-a2)`.
pub fn tangent_conic(ring: &PolyRing) -> Poly {
    let [x, y, z, a1, a2, a3] = ["x", "y", "z", "a1", "a2", "a3"].map(|v| ring.var(v));
    let alpha = &a1 * &(&a2 - &a3);
    let beta = &a2 * &(&a3 - &a1);
    let gamma = &a3 * &(&a1 - &a2);
    let (ax, by, gz) = (&alpha * &x, &beta * &y, &gamma * &z);
    let squares = &(&(&ax * &ax) + &(&by * &by)) + &(&gz * &gz);
    let cross = &(&(&ax * &by) + &(&ax * &gz)) + &(&by * &gz);
    &squares - &cross.scale(&rat(2, 1))
}

/// Restricts a ternary quadratic form to a line parametrized by `s, t` and
/// returns the discriminant of the resulting binary form.
pub fn restricted_discriminant(ring: &PolyRing, form: &Poly, line: &LineCoefficients) -> Result<Poly> {
    let c = line.polynomial();
    let pivot = c.iter().position(|p| !p.is_zero()).ok_or_else(|| Error::input("zero line"))?;
    let others: Vec<usize> = (0..3).filter(|&k| k != pivot).collect();
    // two points of the line: c_pivot e_j - c_j e_pivot for the other indices j
    let point = |j: usize| -> [Poly; 3] {
        std::array::from_fn(|k| {
            if k == j {
                c[pivot].clone()
            } else if k == pivot {
                -&c[j]
            } else {
                ring.zero()
            }
        })
    };
    let (p, q) = (point(others[0]), point(others[1]));
    let (s, t) = (ring.var("s"), ring.var("t"));
    let param: [Poly; 3] = std::array::from_fn(|k| &(&s * &p[k]) + &(&t * &q[k]));
    let restricted = at_point(ring, form, &param);
    let (si, ti) = (ring.index("s")?, ring.index("t")?);
    let a = restricted.coefficient(&[(si, 2), (ti, 0)]);
    let b = restricted.coefficient(&[(si, 1), (ti, 1)]);
    let cc = restricted.coefficient(&[(si, 0), (ti, 2)]);
    Ok(&(&b * &b) - &(&a * &cc).scale(&rat(4, 1)))
}

pub fn tangent_conic_checks() -> Result<Vec<IdentityCheck>> {
    let ring = line_ring();
    let conic = tangent_conic(&ring);
    normalize_lines(&ring)
        .iter()
        .enumerate()
        .map(|(i, line)| {
            let disc = restricted_discriminant(&ring, &conic, line)?;
            Ok(IdentityCheck::from_residue(&ring, format!("disc(C|l{})", i + 1), &disc))
        })
        .collect()
}

pub fn verify_tangent_conic() -> Result<bool> {
    Ok(tangent_conic_checks()?.iter().all(|c| c.holds))
}

pub fn weierstrass_ring() -> PolyRing {
    PolyRing::new(&["t", "a", "b", "p0", "p1", "p2"])
}

/// `t (ab) g^2 - (at)(at - p)(at - q)` with `p = p2 t^2 + p1 t + p0`,
/// `g = at - p` and `q = at - bg`.
pub fn weierstrass_residue(ring: &PolyRing) -> Poly {
    let [t, a, b, p0, p1, p2] = ["t", "a", "b", "p0", "p1", "p2"].map(|v| ring.var(v));
    let p = &(&(&p2 * &t.pow(2)) + &(&p1 * &t)) + &p0;
    let at = &a * &t;
    let g = &at - &p;
    let q = &at - &(&b * &g);
    let lhs = &(&t * &(&a * &b)) * &g.pow(2);
    let rhs = &(&at * &(&at - &p)) * &(&at - &q);
    &lhs - &rhs
}

pub fn verify_weierstrass_section() -> bool {
    weierstrass_residue(&weierstrass_ring()).is_zero()
}

pub fn plucker_ring() -> PolyRing {
    PolyRing::new(&["w11r", "w11i", "w12r", "w12i", "w21r", "w21i", "w22r", "w22i"])
}

/// A polynomial with Gaussian-rational coefficients as a real/imaginary pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexPoly {
    pub re: Poly,
    pub im: Poly,
}

impl ComplexPoly {
    pub fn real(re: Poly) -> Self {
        let im = Poly::zero(re.nvars());
        ComplexPoly { re, im }
    }

    pub fn mul(&self, o: &ComplexPoly) -> ComplexPoly {
        ComplexPoly { re: &(&self.re * &o.re) - &(&self.im * &o.im), im: &(&self.re * &o.im) + &(&self.im * &o.re) }
    }

    pub fn add(&self, o: &ComplexPoly) -> ComplexPoly {
        ComplexPoly { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    pub fn sub(&self, o: &ComplexPoly) -> ComplexPoly {
        ComplexPoly { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

/// Plücker relation evaluated on the 2x2 minors of `(W | 1)` for a fully
/// symbolic complex `W`; returns the residue.
pub fn plucker_residue(ring: &PolyRing) -> ComplexPoly {
    let entry = |name: &str| ComplexPoly { re: ring.var(&format!("{name}r")), im: ring.var(&format!("{name}i")) };
    let (one, zero) = (ComplexPoly::real(ring.int(1)), ComplexPoly::real(ring.zero()));
    let rows = [
        [entry("w11"), entry("w12"), one.clone(), zero.clone()],
        [entry("w21"), entry("w22"), zero, one],
    ];
    let p: Vec<ComplexPoly> =
        PLUCKER_PAIRS.iter().map(|&(i, j)| rows[0][i].mul(&rows[1][j]).sub(&rows[0][j].mul(&rows[1][i]))).collect();
    p[0].mul(&p[1]).sub(&p[2].mul(&p[3])).add(&p[4].mul(&p[5]))
}

pub fn plucker_quadric_identity() -> bool {
    plucker_residue(&plucker_ring()).is_zero()
}

/// All four identity checks as a report.
pub fn verify_d1() -> Result<Report> {
    let mut report = Report::new("symbolic-d1");
    let w = weierstrass_residue(&weierstrass_ring());
    report.push(
        "weierstrass-section",
        w.is_zero(),
        if w.is_zero() { "t ab g^2 = at (at-p)(at-q) identically".into() } else { weierstrass_ring().localize(&w) },
    );
    for (id, checks) in [("conic-nodes", conic_node_checks(&CONIC_NODES)?), ("tangent-conic", tangent_conic_checks()?)] {
        let pass = checks.iter().all(|c| c.holds);
        let detail: Vec<String> = checks.iter().map(|c| format!("{}: {}", c.label, c.detail)).collect();
        report.push(id, pass, detail.join("; "));
    }
    let ring = plucker_ring();
    let pl = plucker_residue(&ring);
    report.push(
        "plucker-quadric",
        pl.is_zero(),
        if pl.is_zero() {
            "p12 p34 - p13 p24 + p14 p23 vanishes on (W | 1)".into()
        } else {
            format!("re: {}; im: {}", ring.localize(&pl.re), ring.localize(&pl.im))
        },
    );
    Ok(report)
}

impl fmt::Display for IdentityCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}: {}", if self.holds { "ok" } else { "FAILED" }, self.label, self.detail)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        rat(n, d)
    }

    #[test]
    fn ring_arithmetic() {
        let ring = PolyRing::new(&["x", "y"]);
        let (x, y) = (ring.var("x"), ring.var("y"));
        let sum = &x + &y;
        let square = &sum * &sum;
        assert_eq!(ring.format(&square), "x^2 + 2*x*y + y^2");
        assert!((&square - &square).is_zero());
        assert_eq!((&x - &x).num_terms(), 0);
        assert_eq!(square.total_degree(), Some(2));
        assert!(square.is_homogeneous_in(&[0, 1]));
        assert_eq!(square.evaluate(&[r(1, 2), r(3, 1)]), r(49, 4));
    }

    #[test]
    fn composition_is_a_homomorphism() {
        let ring = PolyRing::new(&["x", "y"]);
        let (x, y) = (ring.var("x"), ring.var("y"));
        let f = &(&x * &x) - &(&y * &ring.int(3));
        let g = &x + &(&x * &y);
        let images = vec![Some(&y + &ring.int(1)), Some(&x * &x)];
        assert_eq!((&f * &g).compose(&images), &f.compose(&images) * &g.compose(&images));
        assert_eq!((&f + &g).compose(&images), &f.compose(&images) + &g.compose(&images));
    }

    #[test]
    fn lines_are_linear_forms() {
        let ring = line_ring();
        let lines = normalize_lines(&ring);
        let xyz: Vec<usize> = ["x", "y", "z"].iter().map(|v| ring.index(v).unwrap()).collect();
        for l in &lines {
            let form = l.form(&ring).unwrap();
            assert!(form.numerator.is_homogeneous_in(&xyz));
            assert_eq!(form.numerator.coefficient(&[(xyz[0], 0), (xyz[1], 0), (xyz[2], 0)]), ring.zero());
        }
        assert_eq!(lines[0].form(&ring).unwrap().numerator, ring.var("x"));
        // l3 vanishes at (1, 0, -1)
        let l3 = lines[2].form(&ring).unwrap().numerator;
        let point = [ring.int(1), ring.zero(), ring.int(-1)];
        assert!(at_point(&ring, &l3, &point).is_zero());
    }

    #[test]
    fn specialization_at_b_one() {
        let ring = line_ring();
        let spec = delta1_specialization(&ring);
        let mut images: Vec<Option<Poly>> = vec![None; ring.nvars()];
        images[ring.index("b").unwrap()] = Some(ring.int(1));
        let b1 = spec.b1.compose(&images).unwrap();
        let expected = RationalFunction::new(&ring.var("a1") * &ring.var("b3"), ring.var("a3")).unwrap();
        assert!(b1.equals(&expected));
    }

    #[test]
    fn specialization_symmetry() {
        let ring = line_ring();
        let spec = delta1_specialization(&ring);
        let mut swap: Vec<Option<Poly>> = vec![None; ring.nvars()];
        swap[ring.index("a1").unwrap()] = Some(ring.var("a2"));
        swap[ring.index("a2").unwrap()] = Some(ring.var("a1"));
        assert!(spec.a.compose(&swap).unwrap().equals(&spec.a));
        assert!(spec.b1.compose(&swap).unwrap().equals(&spec.b2));
    }

    #[test]
    fn weierstrass_identity_and_spot_check() {
        assert!(verify_weierstrass_section());
        let ring = weierstrass_ring();
        let residue = weierstrass_residue(&ring);
        // p = t^2 + 1, a = 2, b = 3 at t = 5
        assert!(residue.evaluate(&[r(5, 1), r(2, 1), r(3, 1), r(1, 1), r(0, 1), r(1, 1)]).is_zero());
        // b = 0 gives q = at
        assert!(residue.evaluate(&[r(7, 3), r(2, 1), r(0, 1), r(1, 1), r(-2, 1), r(1, 1)]).is_zero());
    }

    #[test]
    fn conic_passes_through_the_nodes() {
        for c in conic_node_checks(&CONIC_NODES).unwrap() {
            assert!(c.holds, "{c}");
        }
        assert!(verify_conic_nodes().unwrap());
    }

    #[test]
    fn node_labels_differ_by_exchanging_three_and_five() {
        let mut relabelled: Vec<_> = CONIC_NODES_INCIDENCE_LABELS.iter().map(|&p| swap_three_five(p)).collect();
        relabelled.sort_unstable();
        assert_eq!(relabelled, CONIC_NODES.to_vec());
    }

    #[test]
    fn conic_misses_other_nodes_and_failures_are_localized() {
        let checks = conic_node_checks(&[(1, 5), (3, 4)]).unwrap();
        assert!(checks.iter().all(|c| !c.holds));
        assert!(checks[0].detail.contains("leading term"), "{}", checks[0].detail);
    }

    #[test]
    fn conic_constant_term_vanishes() {
        let ring = line_ring();
        let q = conic_q_affine(&ring).unwrap();
        assert_eq!(q.num_terms(), 17);
        let (x, y) = (ring.index("x").unwrap(), ring.index("y").unwrap());
        assert!(q.coefficient(&[(x, 0), (y, 0)]).is_zero());
    }

    #[test]
    fn tangent_conic_restrictions() {
        for c in tangent_conic_checks().unwrap() {
            assert!(c.holds, "{c}");
        }
        // on x = 0 the restriction is the perfect square (beta y - gamma z)^2
        let ring = line_ring();
        let conic = tangent_conic(&ring);
        let on_l1 = conic.coefficient(&[(ring.index("x").unwrap(), 0)]);
        let beta = &ring.var("a2") * &(&ring.var("a3") - &ring.var("a1"));
        let gamma = &ring.var("a3") * &(&ring.var("a1") - &ring.var("a2"));
        let root = &(&beta * &ring.var("y")) - &(&gamma * &ring.var("z"));
        assert_eq!(on_l1, &root * &root);
    }

    #[test]
    fn plucker_identity() {
        assert!(plucker_quadric_identity());
        let ring = plucker_ring();
        let res = plucker_residue(&ring);
        let zero = vec![r(0, 1); 8];
        assert!(res.re.evaluate(&zero).is_zero());
    }

    #[test]
    fn report_passes() {
        let report = verify_d1().unwrap();
        assert!(report.all_pass(), "{}", report.to_text());
    }
}
