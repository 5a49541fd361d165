//! Discriminant groups `L*/L` of even lattices and finite quadratic forms.
//!
//! A [`FiniteQuadraticForm`] is stored on a chosen generating set of a
//! product of cyclic groups. With `N` the exponent of the group, bilinear
//! values are kept as integers modulo `N` (meaning `k/N mod 1`) and
//! quadratic values as integers modulo `2N` (meaning `k/N mod 2`).

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::{IntLattice, LatticeVector, SignaturePair};
use crate::linalg::{self, rat_int};

/// Largest group order accepted by the backtracking searches.
pub const MAX_SEARCH_ORDER: u64 = 1 << 12;

/// Coordinates of a group element with respect to the form's generators.
pub type Element = Vec<i64>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteQuadraticForm {
    orders: Vec<i64>,
    exponent: i64,
    b: Vec<Vec<i64>>,
    q: Vec<i64>,
}

fn to_numerator(x: &BigRational, exponent: i64, modulus: i64) -> Result<i64> {
    let scaled = x * BigRational::from_integer(BigInt::from(exponent));
    if !scaled.is_integer() {
        return Err(Error::precondition(format!("value {x} is not a multiple of 1/{exponent}")));
    }
    let k = scaled.to_integer().mod_floor(&BigInt::from(modulus));
    k.to_i64().ok_or_else(|| Error::Internal("numerator overflow".into()))
}

impl FiniteQuadraticForm {
    pub fn trivial() -> Self {
        FiniteQuadraticForm { orders: Vec::new(), exponent: 1, b: Vec::new(), q: Vec::new() }
    }

    /// Builds a form from generator orders and rational values, checking
    /// that the data defines a well-defined quadratic form.
    pub fn from_rationals(orders: Vec<i64>, b: &[Vec<BigRational>], q: &[BigRational]) -> Result<Self> {
        let n = orders.len();
        if b.len() != n || q.len() != n || b.iter().any(|r| r.len() != n) {
            return Err(Error::input("form data has inconsistent sizes"));
        }
        if orders.iter().any(|&d| d < 2) {
            return Err(Error::input("generator orders must be at least 2"));
        }
        let exponent = orders.iter().fold(1i64, |acc, d| acc.lcm(d));
        let mut bn = vec![vec![0i64; n]; n];
        let mut qn = vec![0i64; n];
        for i in 0..n {
            let d = BigRational::from_integer(BigInt::from(orders[i]));
            for j in 0..n {
                if b[i][j] != b[j][i] && !(&b[i][j] - &b[j][i]).is_integer() {
                    return Err(Error::input("bilinear values are not symmetric"));
                }
                if !(&d * &b[i][j]).is_integer() {
                    return Err(Error::input("bilinear value incompatible with generator order"));
                }
                bn[i][j] = to_numerator(&b[i][j], exponent, exponent)?;
            }
            if !(&q[i] - &b[i][i]).is_integer() {
                return Err(Error::input("quadratic value does not reduce to the bilinear value"));
            }
            let dd = &d * &d * &q[i];
            if !dd.is_integer() || dd.to_integer().is_odd() {
                return Err(Error::input("quadratic value incompatible with generator order"));
            }
            qn[i] = to_numerator(&q[i], exponent, 2 * exponent)?;
        }
        Ok(FiniteQuadraticForm { orders, exponent, b: bn, q: qn })
    }

    pub fn orders(&self) -> &[i64] {
        &self.orders
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn num_generators(&self) -> usize {
        self.orders.len()
    }

    pub fn order(&self) -> u64 {
        self.orders.iter().map(|&d| d as u64).product()
    }

    pub fn is_two_elementary(&self) -> bool {
        self.orders.iter().all(|&d| d == 2)
    }

    fn frac(&self, k: i64) -> BigRational {
        BigRational::new(BigInt::from(k), BigInt::from(self.exponent))
    }

    /// Bilinear values on generators, reduced to `[0,1)`.
    pub fn b_matrix(&self) -> Vec<Vec<BigRational>> {
        self.b.iter().map(|r| r.iter().map(|&k| self.frac(k)).collect()).collect()
    }

    /// Quadratic values on generators, reduced to `[0,2)`.
    pub fn q_generators(&self) -> Vec<BigRational> {
        self.q.iter().map(|&k| self.frac(k)).collect()
    }

    /// `q(x)` as a numerator over the exponent, in `[0, 2N)`.
    pub fn q_raw(&self, x: &[i64]) -> i64 {
        let n2 = 2 * self.exponent;
        let mut acc = 0i64;
        for i in 0..x.len() {
            if x[i] == 0 {
                continue;
            }
            acc = (acc + x[i] * x[i] % n2 * self.q[i]) % n2;
            for j in i + 1..x.len() {
                if x[j] != 0 {
                    acc = (acc + 2 * (x[i] * x[j] % n2) * self.b[i][j]) % n2;
                }
            }
        }
        acc.rem_euclid(n2)
    }

    /// `b(x,y)` as a numerator over the exponent, in `[0, N)`.
    pub fn b_raw(&self, x: &[i64], y: &[i64]) -> i64 {
        let n = self.exponent;
        let mut acc = 0i64;
        for i in 0..x.len() {
            if x[i] == 0 {
                continue;
            }
            for j in 0..y.len() {
                if y[j] != 0 {
                    acc = (acc + (x[i] * y[j]) % n * self.b[i][j]) % n;
                }
            }
        }
        acc.rem_euclid(n)
    }

    pub fn q_value(&self, x: &[i64]) -> BigRational {
        self.frac(self.q_raw(x))
    }

    pub fn b_value(&self, x: &[i64], y: &[i64]) -> BigRational {
        self.frac(self.b_raw(x, y))
    }

    pub fn negate(&self) -> FiniteQuadraticForm {
        let n = self.exponent;
        FiniteQuadraticForm {
            orders: self.orders.clone(),
            exponent: n,
            b: self.b.iter().map(|r| r.iter().map(|&k| (-k).rem_euclid(n)).collect()).collect(),
            q: self.q.iter().map(|&k| (-k).rem_euclid(2 * n)).collect(),
        }
    }

    pub fn orthogonal_sum(&self, other: &FiniteQuadraticForm) -> FiniteQuadraticForm {
        let exponent = self.exponent.lcm(&other.exponent);
        let (s1, s2) = (exponent / self.exponent, exponent / other.exponent);
        let n1 = self.orders.len();
        let n = n1 + other.orders.len();
        let mut b = vec![vec![0i64; n]; n];
        let mut q = vec![0i64; n];
        for i in 0..n1 {
            q[i] = self.q[i] * s1;
            for j in 0..n1 {
                b[i][j] = self.b[i][j] * s1;
            }
        }
        for i in 0..other.orders.len() {
            q[n1 + i] = other.q[i] * s2;
            for j in 0..other.orders.len() {
                b[n1 + i][n1 + j] = other.b[i][j] * s2;
            }
        }
        let mut orders = self.orders.clone();
        orders.extend_from_slice(&other.orders);
        FiniteQuadraticForm { orders, exponent, b, q }
    }

    pub fn zero_element(&self) -> Element {
        vec![0; self.orders.len()]
    }

    pub fn add(&self, x: &[i64], y: &[i64]) -> Element {
        x.iter().zip(y).zip(&self.orders).map(|((a, b), d)| (a + b).rem_euclid(*d)).collect()
    }

    pub fn scale(&self, k: i64, x: &[i64]) -> Element {
        x.iter().zip(&self.orders).map(|(a, d)| (k * a).rem_euclid(*d)).collect()
    }

    pub fn reduce(&self, x: &[i64]) -> Element {
        x.iter().zip(&self.orders).map(|(a, d)| a.rem_euclid(*d)).collect()
    }

    pub fn element_order(&self, x: &[i64]) -> i64 {
        x.iter()
            .zip(&self.orders)
            .map(|(a, d)| d / a.rem_euclid(*d).gcd(d))
            .fold(1, |acc, o| acc.lcm(&o))
    }

    /// Linear combination `sum c_i * images_i` inside this group.
    pub fn combine(&self, coeffs: &[i64], images: &[Element]) -> Element {
        let mut out = self.zero_element();
        for (c, img) in coeffs.iter().zip(images) {
            if *c != 0 {
                for (o, (v, d)) in out.iter_mut().zip(img.iter().zip(&self.orders)) {
                    *o = (*o + c * v).rem_euclid(*d);
                }
            }
        }
        out
    }

    /// All elements in lexicographic order of their coordinates.
    pub fn elements(&self) -> Vec<Element> {
        let mut out = vec![self.zero_element()];
        for (pos, &d) in self.orders.iter().enumerate() {
            out = out
                .into_iter()
                .flat_map(|e| {
                    (0..d).map(move |k| {
                        let mut e2 = e.clone();
                        e2[pos] = k;
                        e2
                    })
                })
                .collect();
        }
        out
    }

    pub fn element_index(&self, x: &[i64]) -> usize {
        x.iter().zip(&self.orders).fold(0usize, |acc, (a, d)| acc * (*d as usize) + a.rem_euclid(*d) as usize)
    }

    /// Re-expresses the form on a new generating set given in current coordinates.
    pub fn rebase(&self, generators: &[Element]) -> Result<FiniteQuadraticForm> {
        let orders: Vec<i64> = generators.iter().map(|g| self.element_order(g)).collect();
        if orders.iter().map(|&d| d as u64).product::<u64>() != self.order() || orders.iter().any(|&d| d < 2) {
            return Err(Error::input("new generators do not form a basis"));
        }
        if self.order() <= MAX_SEARCH_ORDER * 16 {
            let span = span_size(self, generators);
            if span != self.order() {
                return Err(Error::input("new generators do not generate the group"));
            }
        }
        let n = generators.len();
        let b = (0..n).map(|i| (0..n).map(|j| self.b_value(&generators[i], &generators[j])).collect()).collect::<Vec<Vec<_>>>();
        let q: Vec<BigRational> = generators.iter().map(|g| self.q_value(g)).collect();
        FiniteQuadraticForm::from_rationals(orders, &b, &q)
    }

    /// Checks `q(x+y) = q(x) + q(y) + 2 b(x,y)` and `b(x,x) = q(x) mod 1` on all elements.
    pub fn check_polarization(&self) -> bool {
        let els = self.elements();
        let n = self.exponent;
        els.iter().all(|x| {
            (self.q_raw(x) - self.b_raw(x, x)).rem_euclid(n) == 0
                && els.iter().all(|y| {
                    let lhs = self.q_raw(&self.add(x, y));
                    let rhs = (self.q_raw(x) + self.q_raw(y) + 2 * self.b_raw(x, y)).rem_euclid(2 * n);
                    lhs == rhs
                })
        })
    }

    /// True when `q` only takes integer values.
    pub fn is_integer_valued(&self) -> bool {
        // q(sum) differs from the sum of generator values by multiples of 2b;
        // 2b is integral on 2-elementary groups, otherwise check all elements
        if self.is_two_elementary() {
            self.q.iter().all(|&k| k % self.exponent == 0)
        } else {
            self.elements().iter().all(|x| self.q_raw(x) % self.exponent == 0)
        }
    }

    fn ensure_searchable(&self) -> Result<()> {
        if self.order() > MAX_SEARCH_ORDER {
            return Err(Error::precondition(format!(
                "group of order {} exceeds the search limit {MAX_SEARCH_ORDER}",
                self.order()
            )));
        }
        Ok(())
    }
}

fn span_size(f: &FiniteQuadraticForm, gens: &[Element]) -> u64 {
    let mut seen = vec![false; f.order() as usize];
    let mut frontier = vec![f.zero_element()];
    seen[0] = true;
    let mut count = 1u64;
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = f.add(&x, g);
            let idx = f.element_index(&y);
            if !seen[idx] {
                seen[idx] = true;
                count += 1;
                frontier.push(y);
            }
        }
    }
    count
}

/// A group isomorphism between two forms multiplying both `b` and `q` by `sign`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteIsometry {
    pub images: Vec<Element>,
    pub sign: i64,
}

impl FiniteIsometry {
    pub fn apply(&self, target: &FiniteQuadraticForm, x: &[i64]) -> Element {
        target.combine(x, &self.images)
    }

    /// Exhaustive check of the defining identities on all elements and pairs.
    pub fn verify(&self, source: &FiniteQuadraticForm, target: &FiniteQuadraticForm) -> bool {
        if source.order() != target.order() || self.images.len() != source.num_generators() {
            return false;
        }
        let els = source.elements();
        let imgs: Vec<Element> = els.iter().map(|x| self.apply(target, x)).collect();
        let mut hit = vec![false; target.order() as usize];
        for y in &imgs {
            hit[target.element_index(y)] = true;
        }
        if hit.iter().any(|h| !h) {
            return false;
        }
        for (g, img) in self.images.iter().enumerate() {
            if target.scale(source.orders[g], img).iter().any(|&c| c != 0) {
                return false;
            }
        }
        let sgn = BigRational::from_integer(BigInt::from(self.sign));
        let two = BigRational::from_integer(BigInt::from(2));
        for (x, fx) in els.iter().zip(&imgs) {
            if !((target.q_value(fx) - &sgn * source.q_value(x)) / &two).is_integer() {
                return false;
            }
            for (y, fy) in els.iter().zip(&imgs) {
                if !(target.b_value(fx, fy) - &sgn * source.b_value(x, y)).is_integer() {
                    return false;
                }
            }
        }
        true
    }
}

struct Search<'a> {
    source: &'a FiniteQuadraticForm,
    target: &'a FiniteQuadraticForm,
    sign: i64,
    order: Vec<usize>,
    candidates: Vec<Vec<Element>>,
    constraint: Option<(Element, Element, usize)>,
    images: Vec<Option<Element>>,
}

impl Search<'_> {
    fn target_b(&self, i: usize, j: usize) -> i64 {
        // source and target exponents agree (checked before searching)
        (self.sign * self.source.b[i][j]).rem_euclid(self.source.exponent)
    }

    fn run(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            let imgs: Vec<Element> = self.images.iter().map(|o| o.clone().expect("assigned")).collect();
            return span_size(self.target, &imgs) == self.target.order();
        }
        let g = self.order[depth];
        for cand_idx in 0..self.candidates[g].len() {
            let cand = self.candidates[g][cand_idx].clone();
            let ok = self.order[..depth].iter().all(|&h| {
                let img = self.images[h].as_ref().expect("assigned");
                self.target.b_raw(&cand, img) == self.target_b(g, h)
            });
            if !ok {
                continue;
            }
            self.images[g] = Some(cand);
            if let Some((x, y, support_end)) = &self.constraint {
                if depth + 1 == *support_end {
                    let mut acc = self.target.zero_element();
                    for &h in &self.order[..=depth] {
                        let img = self.images[h].as_ref().expect("assigned");
                        acc = self.target.add(&acc, &self.target.scale(x[h], img));
                    }
                    if &acc != y {
                        continue;
                    }
                }
            }
            if self.run(depth + 1) {
                return true;
            }
        }
        self.images[g] = None;
        false
    }
}

fn search_isometry(
    source: &FiniteQuadraticForm,
    target: &FiniteQuadraticForm,
    sign: i64,
    constraint: Option<(&[i64], &[i64])>,
) -> Result<Option<FiniteIsometry>> {
    source.ensure_searchable()?;
    target.ensure_searchable()?;
    if source.order() != target.order() || source.exponent != target.exponent {
        return Ok(None);
    }
    let n = source.num_generators();
    let n2 = 2 * source.exponent;
    let target_elements = target.elements();
    let candidates: Vec<Vec<Element>> = (0..n)
        .map(|g| {
            let want_q = (sign * source.q[g]).rem_euclid(n2);
            target_elements
                .iter()
                .filter(|y| target.element_order(y) == source.orders[g] && target.q_raw(y) == want_q)
                .cloned()
                .collect()
        })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    let mut constraint_data = None;
    if let Some((x, y)) = constraint {
        let x = source.reduce(x);
        let y = target.reduce(y);
        if source.element_order(&x) != target.element_order(&y)
            || (sign * source.q_raw(&x)).rem_euclid(n2) != target.q_raw(&y)
        {
            return Ok(None);
        }
        order.sort_by_key(|&g| (x[g] == 0, g));
        let support_end = x.iter().filter(|&&c| c != 0).count();
        if support_end == 0 {
            if y.iter().any(|&c| c != 0) {
                return Ok(None);
            }
        } else {
            constraint_data = Some((x, y, support_end));
        }
    }
    let mut search = Search {
        source,
        target,
        sign,
        order,
        candidates,
        constraint: constraint_data,
        images: vec![None; n],
    };
    if search.run(0) {
        let images = search.images.into_iter().map(|o| o.expect("assigned")).collect();
        Ok(Some(FiniteIsometry { images, sign }))
    } else {
        Ok(None)
    }
}

/// Searches for a group isomorphism `F1 -> F2` with `q2(φx) = -q1(x)`.
pub fn find_anti_isometry(f1: &FiniteQuadraticForm, f2: &FiniteQuadraticForm) -> Result<Option<FiniteIsometry>> {
    search_isometry(f1, f2, -1, None)
}

/// Searches for an isometry `F1 -> F2`.
pub fn find_isometry(f1: &FiniteQuadraticForm, f2: &FiniteQuadraticForm) -> Result<Option<FiniteIsometry>> {
    search_isometry(f1, f2, 1, None)
}

/// Searches for a self-isometry of `f` sending `x` to `y`.
pub fn extend_isometry(f: &FiniteQuadraticForm, x: &[i64], y: &[i64]) -> Result<Option<FiniteIsometry>> {
    search_isometry(f, f, 1, Some((x, y)))
}

/// Partition of the group into orbits of the full isometry group.
///
/// Each class is sorted and classes are listed by their smallest element.
/// Order, `q(x)` and a histogram of `(q(y), b(x, y))` over all `y`.
type Profile = (i64, i64, Vec<((i64, i64), usize)>);

pub fn isometry_orbits(f: &FiniteQuadraticForm) -> Result<Vec<Vec<Element>>> {
    f.ensure_searchable()?;
    let els = f.elements();
    let count = els.len();
    // invariant profile: order, q(x) and the distribution of (q(y), b(x,y))
    let profiles: Vec<Profile> = els
        .iter()
        .map(|x| {
            let mut hist: BTreeMap<(i64, i64), usize> = BTreeMap::new();
            for y in &els {
                *hist.entry((f.q_raw(y), f.b_raw(x, y))).or_default() += 1;
            }
            (f.element_order(x), f.q_raw(x), hist.into_iter().collect())
        })
        .collect();
    let mut parent: Vec<usize> = (0..count).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        let mut c = i;
        while parent[c] != r {
            let next = parent[c];
            parent[c] = r;
            c = next;
        }
        r
    }
    for i in 0..count {
        for j in i + 1..count {
            if profiles[i] != profiles[j] {
                continue;
            }
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri == rj {
                continue;
            }
            if let Some(phi) = extend_isometry(f, &els[i], &els[j])? {
                for (k, x) in els.iter().enumerate() {
                    let img = f.element_index(&phi.apply(f, x));
                    let (a, b) = (find(&mut parent, k), find(&mut parent, img));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
    }
    let mut classes: BTreeMap<usize, Vec<Element>> = BTreeMap::new();
    for (i, x) in els.iter().enumerate() {
        let r = find(&mut parent, i);
        classes.entry(r).or_default().push(x.clone());
    }
    Ok(classes.into_values().collect())
}

/// The discriminant group of an even lattice together with lifts of its
/// generators to the dual lattice.
#[derive(Debug, Clone)]
pub struct Discriminant {
    lattice: IntLattice,
    generators: Vec<Vec<BigRational>>,
    form: FiniteQuadraticForm,
    snf_orders: Vec<i64>,
    snf_vinv: Vec<Vec<BigInt>>,
    /// Converts Smith coordinates to generator coordinates when custom
    /// generators are in use.
    relabel: Option<HashMap<Element, Element>>,
}

impl Discriminant {
    /// Generators taken from the Smith normal form of the Gram matrix.
    pub fn new(lattice: &IntLattice) -> Result<Self> {
        if !lattice.is_even() {
            return Err(Error::precondition(format!("{} is not even", lattice.label())));
        }
        let gram = lattice.gram_big();
        let smith = linalg::smith_normal_form(&gram);
        let vinv = linalg::unimodular_inverse(&smith.v).ok_or_else(|| Error::Internal("singular Smith transform".into()))?;
        let mut generators = Vec::new();
        let mut orders = Vec::new();
        let mut snf_orders = Vec::new();
        for (i, d) in smith.diag.iter().enumerate() {
            let d = d.to_i64().ok_or_else(|| Error::Internal("invariant factor overflow".into()))?;
            if d == 0 {
                return Err(Error::precondition("degenerate lattice"));
            }
            snf_orders.push(d);
            if d > 1 {
                let col: Vec<BigRational> = smith.v.iter().map(|row| BigRational::new(row[i].clone(), BigInt::from(d))).collect();
                generators.push(col);
                orders.push(d);
            }
        }
        let form = form_on_generators(&gram, &generators, orders)?;
        Ok(Discriminant { lattice: lattice.clone(), generators, form, snf_orders, snf_vinv: vinv, relabel: None })
    }

    /// Uses the given dual-lattice vectors as generators; they must form a basis of `L*/L`.
    pub fn with_generators(lattice: &IntLattice, generators: Vec<Vec<BigRational>>) -> Result<Self> {
        let base = Discriminant::new(lattice)?;
        let mut orders = Vec::new();
        let mut snf_images = Vec::new();
        for g in &generators {
            let c = base.snf_class(g)?;
            orders.push(base.form.element_order(&c));
            snf_images.push(c);
        }
        if orders.iter().any(|&d| d < 2) || orders.iter().map(|&d| d as u64).product::<u64>() != base.form.order() {
            return Err(Error::input("generators do not form a basis of the discriminant group"));
        }
        if span_size(&base.form, &snf_images) != base.form.order() {
            return Err(Error::input("generators do not generate the discriminant group"));
        }
        let gram = lattice.gram_big();
        let form = form_on_generators(&gram, &generators, orders)?;
        let mut relabel = HashMap::new();
        for coords in form.elements() {
            relabel.insert(base.form.combine(&coords, &snf_images), coords);
        }
        Ok(Discriminant { generators, form, relabel: Some(relabel), ..base })
    }

    /// Generators `e_i / m` for each basis vector, valid when `L* = L/m`
    /// and the Gram matrix is `m` times a unimodular matrix.
    pub fn scaled_basis(lattice: &IntLattice, m: i64) -> Result<Self> {
        let n = lattice.rank();
        let gens = (0..n)
            .map(|i| (0..n).map(|j| if i == j { linalg::rat(1, m) } else { BigRational::zero() }).collect())
            .collect();
        Discriminant::with_generators(lattice, gens)
    }

    pub fn lattice(&self) -> &IntLattice {
        &self.lattice
    }

    pub fn form(&self) -> &FiniteQuadraticForm {
        &self.form
    }

    pub fn generators(&self) -> &[Vec<BigRational>] {
        &self.generators
    }

    fn snf_class(&self, x: &[BigRational]) -> Result<Element> {
        if x.len() != self.lattice.rank() {
            return Err(Error::input("vector length does not match lattice rank"));
        }
        let gram = self.lattice.gram_big();
        for j in 0..x.len() {
            let pairing: BigRational = (0..x.len()).map(|i| &x[i] * rat_int(&gram[i][j])).sum();
            if !pairing.is_integer() {
                return Err(Error::precondition("vector is not in the dual lattice"));
            }
        }
        let mut out = Vec::new();
        for (i, &d) in self.snf_orders.iter().enumerate() {
            let c: BigRational = (0..x.len()).map(|k| rat_int(&self.snf_vinv[i][k]) * &x[k]).sum();
            let scaled = c * BigRational::from_integer(BigInt::from(d));
            if !scaled.is_integer() {
                return Err(Error::Internal("dual vector has unexpected denominator".into()));
            }
            if d > 1 {
                let k = scaled.to_integer().mod_floor(&BigInt::from(d));
                out.push(k.to_i64().expect("residue fits"));
            }
        }
        Ok(out)
    }

    /// Class in `L*/L` of a dual-lattice vector.
    pub fn class_of(&self, x: &[BigRational]) -> Result<Element> {
        let snf = self.snf_class(x)?;
        match &self.relabel {
            None => Ok(snf),
            Some(map) => map.get(&snf).cloned().ok_or_else(|| Error::Internal("class lookup failed".into())),
        }
    }

    /// A dual-lattice representative of a class.
    pub fn lift(&self, x: &[i64]) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.lattice.rank()];
        for (c, g) in self.form.reduce(x).iter().zip(&self.generators) {
            if *c == 0 {
                continue;
            }
            let cr = BigRational::from_integer(BigInt::from(*c));
            for (o, gi) in out.iter_mut().zip(g) {
                *o += &cr * gi;
            }
        }
        out
    }
}

fn form_on_generators(gram: &[Vec<BigInt>], gens: &[Vec<BigRational>], orders: Vec<i64>) -> Result<FiniteQuadraticForm> {
    let n = gens.len();
    let mut b = vec![vec![BigRational::zero(); n]; n];
    let mut q = Vec::with_capacity(n);
    for i in 0..n {
        for j in 0..n {
            let v = linalg::bilinear_rat(gram, &gens[i], &gens[j]);
            b[i][j] = v.clone() - v.floor();
        }
        let v = linalg::bilinear_rat(gram, &gens[i], &gens[i]);
        q.push(linalg::rat_mod(&v, 2));
    }
    FiniteQuadraticForm::from_rationals(orders, &b, &q)
}

/// Discriminant form of an even lattice on Smith generators.
pub fn discriminant_form(lattice: &IntLattice) -> Result<FiniteQuadraticForm> {
    Ok(Discriminant::new(lattice)?.form)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NikulinInvariants {
    pub signature: SignaturePair,
    pub length: usize,
    /// True iff the discriminant quadratic form takes only integer values.
    pub integer_valued: bool,
}

pub fn nikulin_invariants(lattice: &IntLattice) -> Result<NikulinInvariants> {
    let form = discriminant_form(lattice)?;
    if !form.is_two_elementary() {
        return Err(Error::precondition(format!("{} is not 2-elementary", lattice.label())));
    }
    Ok(NikulinInvariants {
        signature: lattice.signature(),
        length: form.num_generators(),
        integer_valued: form.is_integer_valued(),
    })
}

/// Compares the invariants that classify indefinite even 2-elementary lattices.
pub fn nikulin_equivalent(a: &IntLattice, b: &IntLattice) -> Result<bool> {
    for l in [a, b] {
        if !l.signature().is_indefinite() {
            return Err(Error::precondition(format!("{} is definite", l.label())));
        }
    }
    Ok(nikulin_invariants(a)? == nikulin_invariants(b)?)
}

/// Genus comparison for nondegenerate lattices of either parity.
///
/// Even lattices share a genus iff they have equal signature and isometric
/// discriminant forms. For odd lattices the comparison runs on `L(2)`, which is
/// even; rescaling by 2 is a bijection on genera.
pub fn same_genus_invariants(a: &IntLattice, b: &IntLattice) -> Result<bool> {
    if a.rank() != b.rank() || a.signature() != b.signature() || a.determinant() != b.determinant() {
        return Ok(false);
    }
    if a.is_even() != b.is_even() {
        return Ok(false);
    }
    let (fa, fb) = if a.is_even() {
        (discriminant_form(a)?, discriminant_form(b)?)
    } else {
        (discriminant_form(&a.rescale(2)?)?, discriminant_form(&b.rescale(2)?)?)
    };
    Ok(find_isometry(&fa, &fb)?.is_some())
}

/// Overlattice `L + span(glue)` for dual vectors spanning an isotropic subgroup.
pub fn glue_overlattice(lattice: &IntLattice, glue: &[Vec<BigRational>]) -> Result<IntLattice> {
    if glue.is_empty() {
        return Ok(lattice.clone());
    }
    let gram = lattice.gram_big();
    let disc = Discriminant::new(lattice)?;
    let classes: Vec<Element> = glue.iter().map(|h| disc.class_of(h)).collect::<Result<_>>()?;
    let form = disc.form();
    for (i, ci) in classes.iter().enumerate() {
        if form.q_raw(ci) != 0 {
            return Err(Error::precondition(format!("glue class {i} has q = {} != 0 mod 2", form.q_value(ci))));
        }
        for cj in &classes[..i] {
            if form.b_raw(ci, cj) != 0 {
                return Err(Error::precondition("glue classes are not mutually orthogonal"));
            }
        }
    }
    let denom = glue
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let n = lattice.rank();
    let mut rows: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { denom.clone() } else { BigInt::zero() }).collect())
        .collect();
    for h in glue {
        rows.push(h.iter().map(|x| (x * BigRational::from_integer(denom.clone())).to_integer()).collect());
    }
    let basis = linalg::hermite_rows(&rows);
    let basis_rat: Vec<Vec<BigRational>> =
        basis.iter().map(|r| r.iter().map(|x| BigRational::new(x.clone(), denom.clone())).collect()).collect();
    let mut new_gram = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let v = linalg::bilinear_rat(&gram, &basis_rat[i], &basis_rat[j]);
            if !v.is_integer() {
                return Err(Error::Internal("glued lattice is not integral".into()));
            }
            new_gram[i][j] = v.to_integer().to_i64().ok_or_else(|| Error::Internal("gram overflow".into()))?;
        }
    }
    let out = IntLattice::new(new_gram, format!("{}+glue", lattice.label()))?;
    if !out.is_even() {
        return Err(Error::precondition("glued lattice is not even"));
    }
    Ok(out)
}

/// Result of declaring a transcendental vector algebraic.
#[derive(Debug, Clone)]
pub struct Enhancement {
    pub ns: IntLattice,
    pub transcendental: IntLattice,
    /// The class of `v/2` in `M*/M`.
    pub v_class: Element,
    /// Its image under the anti-isometry, as a class of `L*/L`.
    pub glue_class: Element,
}

/// Enlarges `L` by the class of `v` and returns the new pair `(NS, v^perp)`.
///
/// `gamma` maps generators of `disc_m` to classes of `disc_l` and must be an
/// anti-isometry.
pub fn enhance(
    disc_l: &Discriminant,
    disc_m: &Discriminant,
    gamma: &FiniteIsometry,
    v: &LatticeVector,
) -> Result<Enhancement> {
    let m = disc_m.lattice();
    let l = disc_l.lattice();
    if !m.is_primitive(v)? {
        return Err(Error::precondition("v is not primitive"));
    }
    let v2 = m.norm(v);
    if v2 >= 0 {
        return Err(Error::precondition("v must have negative norm"));
    }
    if gamma.sign != -1 || !gamma.verify(disc_m.form(), disc_l.form()) {
        return Err(Error::precondition("gamma is not an anti-isometry"));
    }
    let half_v: Vec<BigRational> = v.coords().iter().map(|&c| linalg::rat(c, 2)).collect();
    let v_class = disc_m.class_of(&half_v)?;
    if disc_m.form().element_order(&v_class) != 2 {
        return Err(Error::precondition("v/2 does not define an order-2 class"));
    }
    let glue_class = gamma.apply(disc_l.form(), &v_class);
    let lift = disc_l.lift(&glue_class);
    let extended = l.direct_sum(&IntLattice::new(vec![vec![v2]], format!("<{v2}>"))?);
    let mut h = lift;
    h.push(linalg::rat(1, 2));
    let ns = glue_overlattice(&extended, &[h])?.with_label(format!("{}+<{v2}> glued", l.label()));
    let transcendental = m.orthogonal_complement(v)?;
    Ok(Enhancement { ns, transcendental, v_class, glue_class })
}

/// Sorted orbit sizes, convenient for comparisons.
pub fn orbit_sizes(orbits: &[Vec<Element>]) -> Vec<usize> {
    let mut s: Vec<usize> = orbits.iter().map(Vec::len).collect();
    s.sort_unstable();
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;
    use crate::lattice::parse_sum;
    use crate::linalg::rat;

    fn l(s: &str) -> IntLattice {
        parse_sum(s).unwrap()
    }

    #[test]
    fn u2_form() {
        let f = discriminant_form(&l("U(2)")).unwrap();
        assert_eq!(f.orders(), &[2, 2]);
        assert_eq!(f.q_generators(), vec![rat(0, 1), rat(0, 1)]);
        assert_eq!(f.b_matrix(), vec![vec![rat(0, 1), rat(1, 2)], vec![rat(1, 2), rat(0, 1)]]);
    }

    #[test]
    fn a1_form() {
        let f = discriminant_form(&l("A1")).unwrap();
        assert_eq!(f.orders(), &[2]);
        // -1/2 reduced mod 2
        assert_eq!(f.q_generators(), vec![rat(3, 2)]);
    }

    #[test]
    fn d6_form_on_spinor_classes() {
        let f = discriminant_form(&l("D6")).unwrap();
        assert_eq!(f.orders(), &[2, 2]);
        let spinors: Vec<Element> = f.elements().into_iter().filter(|x| f.q_value(x) == rat(1, 2)).collect();
        assert_eq!(spinors.len(), 2);
        let g = f.rebase(&spinors).unwrap();
        // -3/2 and -1 reduced mod 2 and mod 1
        assert_eq!(g.q_generators(), vec![rat(1, 2), rat(1, 2)]);
        assert_eq!(g.b_matrix()[0][1], rat(0, 1));
    }

    #[test]
    fn odd_lattice_rejected() {
        assert!(discriminant_form(&l("<1>")).is_err());
    }

    #[test]
    fn polarization_holds() {
        for s in ["U(2)^2+A1^2", "D4+A2", "E7+<-4>", "A3+A1"] {
            let f = discriminant_form(&l(s)).unwrap();
            assert!(f.check_polarization(), "{s}");
            assert_eq!(BigInt::from(f.order()), l(s).determinant().abs(), "{s}");
        }
    }

    #[test]
    fn glue_map_u2a1_to_d6a1() {
        // generators e, f of U(2) and g of A1 on the source; spinor classes and
        // the A1 class on the target
        let source = FiniteQuadraticForm::from_rationals(
            vec![2, 2, 2],
            &[
                vec![rat(0, 1), rat(1, 2), rat(0, 1)],
                vec![rat(1, 2), rat(0, 1), rat(0, 1)],
                vec![rat(0, 1), rat(0, 1), rat(-1, 2)],
            ],
            &[rat(0, 1), rat(0, 1), rat(-1, 2)],
        )
        .unwrap();
        let target = FiniteQuadraticForm::from_rationals(
            vec![2, 2, 2],
            &[
                vec![rat(-3, 2), rat(-1, 1), rat(0, 1)],
                vec![rat(-1, 1), rat(-3, 2), rat(0, 1)],
                vec![rat(0, 1), rat(0, 1), rat(-1, 2)],
            ],
            &[rat(-3, 2), rat(-3, 2), rat(-1, 2)],
        )
        .unwrap();
        let map = FiniteIsometry { images: vec![vec![1, 0, 1], vec![0, 1, 1], vec![1, 1, 1]], sign: -1 };
        assert!(map.verify(&source, &target));
        // the abstract target agrees with the lattice-derived one
        let derived = discriminant_form(&l("D6+A1")).unwrap();
        assert!(find_isometry(&target, &derived).unwrap().is_some());
        let found = find_anti_isometry(&source, &target).unwrap().unwrap();
        assert!(found.verify(&source, &target));
    }

    #[test]
    fn a1_is_not_anti_isometric_to_itself() {
        let f = discriminant_form(&l("A1")).unwrap();
        assert!(find_anti_isometry(&f, &f).unwrap().is_none());
        let t = FiniteQuadraticForm::trivial();
        let id = find_anti_isometry(&t, &t).unwrap().unwrap();
        assert!(id.images.is_empty());
        assert_eq!(isometry_orbits(&t).unwrap(), vec![vec![Vec::<i64>::new()]]);
    }

    #[test]
    fn t2_orbits() {
        let t2 = Discriminant::scaled_basis(&l("U(2)^2+A1^2"), 2).unwrap();
        let orbits = isometry_orbits(t2.form()).unwrap();
        assert_eq!(orbit_sizes(&orbits), vec![1, 1, 12, 15, 15, 20]);
        let fixed: Vec<&Element> = orbits.iter().filter(|o| o.len() == 1).map(|o| &o[0]).collect();
        // the nonzero fixed class is the characteristic one, g1/2 + g2/2
        assert_eq!(fixed, vec![&vec![0, 0, 0, 0, 0, 0], &vec![0, 0, 0, 0, 1, 1]]);
        let f = t2.form();
        let size_of = |x: &[i64]| orbits.iter().find(|o| o.iter().any(|y| y == x)).unwrap().len();
        for (rep, q, size) in [
            (vec![1, 0, 0, 0, 0, 0], rat(0, 1), 15),
            (vec![1, 1, 0, 0, 0, 0], rat(1, 1), 15),
            (vec![1, 1, 0, 0, 1, 0], rat(1, 2), 12),
            (vec![0, 0, 0, 0, 1, 0], rat(3, 2), 20),
        ] {
            assert_eq!(f.q_value(&rep), q);
            assert_eq!(size_of(&rep), size);
        }
        assert_eq!(size_of(&[1, 1, 1, 1, 0, 0]), 15);
    }

    #[test]
    fn enhancement_by_minus_four_vectors() {
        let disc_l = Discriminant::new(&l("U+D6^2+A1^2")).unwrap();
        let disc_m = Discriminant::scaled_basis(&l("U(2)^2+A1^2"), 2).unwrap();
        let gamma = find_anti_isometry(disc_m.form(), disc_l.form()).unwrap().unwrap();
        for (v, expected_t, norm_gcd) in [([0, 0, 0, 0, 1, 1], "U(2)^2+<-4>", 4), ([1, -1, 0, 0, 0, 0], "U(2)+A1^2+<4>", 2)] {
            let e = enhance(&disc_l, &disc_m, &gamma, &LatticeVector::new(v.to_vec())).unwrap();
            assert_eq!(e.ns.determinant(), BigInt::from(64), "{v:?}");
            assert!(same_genus_invariants(&e.transcendental, &l(expected_t)).unwrap(), "{v:?}");
            assert_eq!(e.transcendental.scale_and_norm(), (2, norm_gcd));
        }
        assert!(enhance(&disc_l, &disc_m, &gamma, &LatticeVector::new(vec![0, 0, 0, 0, 2, 2])).is_err());
    }

    #[test]
    fn nikulin_examples() {
        let ns = nikulin_invariants(&l("U+D6^2+A1^2")).unwrap();
        assert_eq!((ns.signature, ns.length, ns.integer_valued), (SignaturePair::new(1, 15), 6, false));
        let t = nikulin_invariants(&l("U(2)^2+A1^2")).unwrap();
        assert_eq!((t.signature, t.length, t.integer_valued), (SignaturePair::new(2, 4), 6, false));
        let u2 = nikulin_invariants(&l("U(2)")).unwrap();
        assert_eq!((u2.signature, u2.length, u2.integer_valued), (SignaturePair::new(1, 1), 2, true));
        let t2 = l("U^2+<-1>^2").rescale(2).unwrap();
        assert!(nikulin_equivalent(&l("U(2)^2+A1^2"), &t2).unwrap());
        assert!(!nikulin_equivalent(&l("U(2)^2+A1"), &l("U^2+A1")).unwrap());
        assert!(nikulin_equivalent(&l("D4"), &l("D4")).is_err());
        assert!(nikulin_invariants(&l("U+A2")).is_err());
    }

    #[test]
    fn glue_examples() {
        let a1a1 = l("A1^2");
        let bad = vec![rat(1, 2), rat(1, 2)];
        assert!(glue_overlattice(&a1a1, &[bad]).is_err());
        assert_eq!(glue_overlattice(&a1a1, &[]).unwrap(), a1a1);
        // D4+D4 glued along the diagonal of two classes with q = 1 each
        let d4d4 = l("D4^2");
        let disc = Discriminant::new(&d4d4).unwrap();
        let f = disc.form();
        let glue = f
            .elements()
            .into_iter()
            .find(|x| f.q_raw(x) == 0 && x.iter().any(|&c| c != 0))
            .unwrap();
        let over = glue_overlattice(&d4d4, &[disc.lift(&glue)]).unwrap();
        assert_eq!(over.determinant(), BigInt::from(4));
    }
}
