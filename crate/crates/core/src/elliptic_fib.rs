//! Lattice arithmetic of Jacobian elliptic K3 surfaces.
//!
//! Fibers are described by their Kodaira type, sections by the fiber
//! components they meet. From that data this module builds the trivial lattice,
//! evaluates heights with the local-contribution table, and rebuilds the
//! Néron–Severi lattice by brute force from explicit divisor classes so that
//! every table entry can be cross-checked.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::disc_form::{
    discriminant_form, find_anti_isometry, glue_overlattice, nikulin_equivalent, same_genus_invariants,
};
use crate::error::{Error, Result};
use crate::lattice::{parse_sum, IntLattice, SignaturePair, StandardLattice};
use crate::linalg::{self, rat, rat_int, RatMatrix};
use crate::report::Report;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KodairaFiber {
    /// `I_n` with `n >= 1`.
    I(u32),
    II,
    III,
    IV,
    /// `I_n^*` with `n >= 0`.
    IStar(u32),
    IIStar,
    IIIStar,
    IVStar,
}

impl KodairaFiber {
    pub fn validate(self) -> Result<Self> {
        match self {
            KodairaFiber::I(0) => Err(Error::input("I_n needs n >= 1")),
            _ => Ok(self),
        }
    }

    /// The root lattice spanned by the components missing the zero section.
    pub fn root_kind(self) -> Option<StandardLattice> {
        match self {
            KodairaFiber::I(n) if n >= 2 => Some(StandardLattice::A(n as usize - 1)),
            KodairaFiber::III => Some(StandardLattice::A(1)),
            KodairaFiber::IV => Some(StandardLattice::A(2)),
            KodairaFiber::IStar(n) => Some(StandardLattice::D(n as usize + 4)),
            KodairaFiber::IIStar => Some(StandardLattice::E(8)),
            KodairaFiber::IIIStar => Some(StandardLattice::E(7)),
            KodairaFiber::IVStar => Some(StandardLattice::E(6)),
            KodairaFiber::I(_) | KodairaFiber::II => None,
        }
    }

    pub fn root_rank(self) -> usize {
        match self.root_kind() {
            Some(StandardLattice::A(k) | StandardLattice::D(k) | StandardLattice::E(k)) => k,
            _ => 0,
        }
    }

    /// Node of the root lattice Gram matrix that a labelled component occupies,
    /// or `None` for the identity component.
    pub fn component_node(self, label: ComponentLabel) -> Result<Option<usize>> {
        let bad = || Error::input(format!("component {label} is not valid on a fiber of type {self}"));
        if label == ComponentLabel::Identity {
            return Ok(None);
        }
        let node = match (self, label) {
            (KodairaFiber::I(n), ComponentLabel::Index(i)) if (1..n).contains(&i) => i as usize - 1,
            (KodairaFiber::III, ComponentLabel::Index(1)) => 0,
            (KodairaFiber::IV, ComponentLabel::Index(i)) if (1..=2).contains(&i) => i as usize - 1,
            (KodairaFiber::IStar(0), ComponentLabel::NonIdentity(j)) if (1..=3).contains(&j) => [0, 2, 3][j as usize - 1],
            (KodairaFiber::IStar(n), ComponentLabel::Near) if n > 0 => 0,
            (KodairaFiber::IStar(n), ComponentLabel::Far1) if n > 0 => n as usize + 2,
            (KodairaFiber::IStar(n), ComponentLabel::Far2) if n > 0 => n as usize + 3,
            (KodairaFiber::IIIStar, ComponentLabel::Index(1)) => 5,
            (KodairaFiber::IVStar, ComponentLabel::Index(1)) => 0,
            (KodairaFiber::IVStar, ComponentLabel::Index(2)) => 4,
            _ => return Err(bad()),
        };
        Ok(Some(node))
    }
}

impl fmt::Display for KodairaFiber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KodairaFiber::I(n) => write!(f, "I{n}"),
            KodairaFiber::II => write!(f, "II"),
            KodairaFiber::III => write!(f, "III"),
            KodairaFiber::IV => write!(f, "IV"),
            KodairaFiber::IStar(n) => write!(f, "I{n}*"),
            KodairaFiber::IIStar => write!(f, "II*"),
            KodairaFiber::IIIStar => write!(f, "III*"),
            KodairaFiber::IVStar => write!(f, "IV*"),
        }
    }
}

/// Which component of a singular fiber a section passes through.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ComponentLabel {
    Identity,
    /// Component `i` in the cyclic numbering of `I_n`, or the `i`-th
    /// non-identity simple component of `III`, `IV`, `III*`, `IV*`.
    Index(u32),
    /// The simple component of `I_n^*` (n > 0) on the same side as the identity.
    Near,
    Far1,
    Far2,
    /// One of the three non-identity simple components of `I_0^*`.
    NonIdentity(u8),
}

impl fmt::Display for ComponentLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComponentLabel::Identity => write!(f, "id"),
            ComponentLabel::Index(i) => write!(f, "#{i}"),
            ComponentLabel::Near => write!(f, "near"),
            ComponentLabel::Far1 => write!(f, "far1"),
            ComponentLabel::Far2 => write!(f, "far2"),
            ComponentLabel::NonIdentity(j) => write!(f, "non-id{j}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberData {
    pub root_lattice: Option<IntLattice>,
    /// The `e` column of the fiber table, stored as printed.
    pub euler: u32,
    /// Invariant factors of the finite part of the component group.
    pub component_group: Vec<u32>,
    /// Invariant factors of the discriminant group of the root lattice.
    pub disc_group: Vec<u32>,
}

impl FiberData {
    /// Determinant of the root lattice, 1 when there is none.
    pub fn discriminant(&self) -> BigInt {
        self.root_lattice.as_ref().map_or_else(BigInt::one, IntLattice::determinant)
    }

    pub fn disc_group_order(&self) -> u64 {
        self.disc_group.iter().map(|&d| u64::from(d)).product()
    }
}

pub fn fiber_data(fiber: KodairaFiber) -> Result<FiberData> {
    let fiber = fiber.validate()?;
    let (euler, group): (u32, Vec<u32>) = match fiber {
        KodairaFiber::I(1) => (1, vec![]),
        KodairaFiber::I(n) => (n, vec![n]),
        KodairaFiber::II => (1, vec![]),
        KodairaFiber::III => (1, vec![2]),
        KodairaFiber::IV => (2, vec![3]),
        KodairaFiber::IStar(n) if n % 2 == 0 => (n + 5, vec![2, 2]),
        KodairaFiber::IStar(n) => (n + 5, vec![4]),
        KodairaFiber::IIStar => (9, vec![]),
        KodairaFiber::IIIStar => (8, vec![2]),
        KodairaFiber::IVStar => (7, vec![3]),
    };
    let root_lattice = fiber.root_kind().map(IntLattice::standard).transpose()?;
    Ok(FiberData { root_lattice, euler, component_group: group.clone(), disc_group: group })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionSpec {
    pub name: String,
    /// Intersection number with the zero section.
    pub pairing_with_zero: u32,
    /// One label per fiber of the configuration, in order.
    pub components: Vec<ComponentLabel>,
    pub torsion: bool,
}

impl SectionSpec {
    pub fn new(name: impl Into<String>, pairing_with_zero: u32, components: Vec<ComponentLabel>, torsion: bool) -> Self {
        SectionSpec { name: name.into(), pairing_with_zero, components, torsion }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibrationConfig {
    /// Holomorphic Euler characteristic of the surface, 2 for a K3.
    pub chi: i64,
    pub fibers: Vec<KodairaFiber>,
    pub sections: Vec<SectionSpec>,
    pub torsion_order: u32,
    pub mw_rank: usize,
    pub mwl_disc: BigRational,
}

impl FibrationConfig {
    /// A K3 configuration with trivial Mordell–Weil group.
    pub fn k3(fibers: Vec<KodairaFiber>) -> Self {
        FibrationConfig { chi: 2, fibers, sections: Vec::new(), torsion_order: 1, mw_rank: 0, mwl_disc: BigRational::one() }
    }

    pub fn euler_sum(&self) -> Result<u32> {
        self.fibers.iter().map(|&f| fiber_data(f).map(|d| d.euler)).sum()
    }

    pub fn section(&self, name: &str) -> Result<&SectionSpec> {
        self.sections
            .iter()
            .find(|s| s.name == name)
            .ok_or_else(|| Error::input(format!("no section named `{name}`")))
    }

    fn check_labels(&self, p: &SectionSpec) -> Result<()> {
        if p.components.len() != self.fibers.len() {
            return Err(Error::input(format!(
                "section {} lists {} components for {} fibers",
                p.name,
                p.components.len(),
                self.fibers.len()
            )));
        }
        for (&f, &c) in self.fibers.iter().zip(&p.components) {
            f.component_node(c)?;
        }
        Ok(())
    }
}

/// `U` followed by the root lattices of the fibers, in order.
pub fn trivial_lattice(config: &FibrationConfig) -> Result<IntLattice> {
    let mut parts = vec![IntLattice::standard(StandardLattice::U)?];
    let mut names = vec!["U".to_string()];
    for &f in &config.fibers {
        if let Some(root) = fiber_data(f)?.root_lattice {
            names.push(root.label().to_string());
            parts.push(root);
        }
    }
    Ok(IntLattice::sum_of(&parts).with_label(names.join("+")))
}

/// Mordell–Weil rank forced by the Picard number.
pub fn shioda_tate(config: &FibrationConfig, rho: usize) -> Result<usize> {
    let roots: usize = config.fibers.iter().map(|f| f.root_rank()).sum();
    rho.checked_sub(2 + roots)
        .ok_or_else(|| Error::precondition(format!("rho = {rho} is smaller than the trivial lattice rank {}", 2 + roots)))
}

/// Local correction term for a pair of components of one fiber.
///
/// On the diagonal this is the usual height contribution. Off the diagonal
/// the values agree with minus the inverse root Gram matrix entries, which
/// `local_contribution_bruteforce` recomputes.
pub fn local_contribution(fiber: KodairaFiber, a: ComponentLabel, b: ComponentLabel) -> Result<BigRational> {
    fiber.component_node(a)?;
    fiber.component_node(b)?;
    if a == ComponentLabel::Identity || b == ComponentLabel::Identity {
        return Ok(BigRational::zero());
    }
    use ComponentLabel as C;
    let value = match fiber {
        KodairaFiber::I(_) | KodairaFiber::IV => {
            let n = if let KodairaFiber::I(n) = fiber { i64::from(n) } else { 3 };
            let (C::Index(i), C::Index(j)) = (a, b) else {
                return Err(Error::Internal(format!("labels ({a}, {b}) on {fiber}")));
            };
            let (lo, hi) = (i64::from(i.min(j)), i64::from(i.max(j)));
            rat(lo * (n - hi), n)
        }
        KodairaFiber::III => rat(1, 2),
        KodairaFiber::IStar(0) => {
            if a == b {
                rat(1, 1)
            } else {
                rat(1, 2)
            }
        }
        KodairaFiber::IStar(n) => {
            let n = i64::from(n);
            match (a, b) {
                (C::Near, C::Near) => rat(1, 1),
                (C::Near, _) | (_, C::Near) => rat(1, 2),
                _ if a == b => rat(4 + n, 4),
                _ => rat(2 + n, 4),
            }
        }
        KodairaFiber::IIIStar => rat(3, 2),
        KodairaFiber::IVStar => {
            if a == b {
                rat(4, 3)
            } else {
                rat(2, 3)
            }
        }
        _ => return Err(Error::Internal(format!("no contribution entry for {fiber} at ({a}, {b})"))),
    };
    Ok(value)
}

/// Minus the entry of the inverse root Gram matrix at the two nodes.
pub fn local_contribution_bruteforce(fiber: KodairaFiber, a: ComponentLabel, b: ComponentLabel) -> Result<BigRational> {
    let (Some(i), Some(j)) = (fiber.component_node(a)?, fiber.component_node(b)?) else {
        return Ok(BigRational::zero());
    };
    let root = fiber_data(fiber)?.root_lattice.ok_or_else(|| Error::Internal(format!("{fiber} has no root lattice")))?;
    let inv = linalg::rat_inverse(&linalg::to_rat_matrix(&root.gram_big()))
        .ok_or_else(|| Error::Internal("root lattice is degenerate".into()))?;
    Ok(-inv[i][j].clone())
}

pub fn height(config: &FibrationConfig, p: &SectionSpec) -> Result<BigRational> {
    config.check_labels(p)?;
    let mut h = rat(2 * config.chi + 2 * i64::from(p.pairing_with_zero), 1);
    for (&f, &c) in config.fibers.iter().zip(&p.components) {
        h -= local_contribution(f, c, c)?;
    }
    Ok(h)
}

fn contribution_sum(config: &FibrationConfig, p: &SectionSpec, q: &SectionSpec) -> Result<BigRational> {
    config.check_labels(p)?;
    config.check_labels(q)?;
    let mut total = BigRational::zero();
    for (i, &f) in config.fibers.iter().enumerate() {
        total += local_contribution(f, p.components[i], q.components[i])?;
    }
    Ok(total)
}

/// Height pairing of two sections meeting `p_dot_q` times. For `p == q` this
/// is the height and `p_dot_q` is ignored.
pub fn height_pairing(config: &FibrationConfig, p: &SectionSpec, q: &SectionSpec, p_dot_q: i64) -> Result<BigRational> {
    if p == q {
        return height(config, p);
    }
    let base = config.chi + i64::from(p.pairing_with_zero) + i64::from(q.pairing_with_zero) - p_dot_q;
    Ok(rat(base, 1) - contribution_sum(config, p, q)?)
}

/// The intersection number `P.Q` forced by a prescribed height pairing.
pub fn intersection_from_pairing(
    config: &FibrationConfig,
    p: &SectionSpec,
    q: &SectionSpec,
    pairing: &BigRational,
) -> Result<BigRational> {
    let base = config.chi + i64::from(p.pairing_with_zero) + i64::from(q.pairing_with_zero);
    Ok(rat(base, 1) - contribution_sum(config, p, q)? - pairing)
}

/// `(-1)^rank / |torsion|^2 * det(trivial) * det(MWL)`.
pub fn ns_discriminant(config: &FibrationConfig) -> Result<BigRational> {
    if config.torsion_order == 0 {
        return Err(Error::input("torsion order must be positive"));
    }
    let sign = if config.mw_rank.is_multiple_of(2) { 1 } else { -1 };
    let torsion = i64::from(config.torsion_order);
    Ok(rat(sign, torsion * torsion) * rat_int(&trivial_lattice(config)?.determinant()) * &config.mwl_disc)
}

/// Intersection numbers between distinct sections, keyed by section index.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SectionProducts(Vec<(usize, usize, i64)>);

impl SectionProducts {
    pub fn new(entries: Vec<(usize, usize, i64)>) -> Self {
        SectionProducts(entries)
    }

    pub fn get(&self, i: usize, j: usize) -> Option<i64> {
        if i == j {
            return Some(-2);
        }
        self.0.iter().find(|&&(a, b, _)| (a, b) == (i, j) || (a, b) == (j, i)).map(|&(_, _, v)| v)
    }
}

/// The Néron–Severi lattice rebuilt from the trivial lattice and explicit
/// section classes.
#[derive(Debug, Clone)]
pub struct NsModel {
    /// Trivial lattice extended by the sections chosen as free generators.
    pub base: IntLattice,
    pub free_sections: Vec<usize>,
    /// Remaining sections in rational coordinates of `base`.
    pub glue: Vec<(usize, Vec<BigRational>)>,
    pub ns: IntLattice,
}

/// Pairings of a section with the basis `F, O+F, root nodes...` of the trivial lattice.
pub fn section_vector(config: &FibrationConfig, p: &SectionSpec) -> Result<Vec<i64>> {
    config.check_labels(p)?;
    let mut v = vec![1, i64::from(p.pairing_with_zero) + 1];
    for (&f, &c) in config.fibers.iter().zip(&p.components) {
        let mut block = vec![0; f.root_rank()];
        if let Some(node) = f.component_node(c)? {
            block[node] = 1;
        }
        v.extend(block);
    }
    Ok(v)
}

fn product(products: &SectionProducts, config: &FibrationConfig, i: usize, j: usize) -> Result<i64> {
    products.get(i, j).ok_or_else(|| {
        Error::input(format!("missing intersection number {}.{}", config.sections[i].name, config.sections[j].name))
    })
}

/// Height pairing read off the brute-force model: minus the pairing of the
/// projections of both sections onto the orthogonal complement of the
/// trivial lattice.
pub fn height_pairing_bruteforce(
    config: &FibrationConfig,
    products: &SectionProducts,
    i: usize,
    j: usize,
) -> Result<BigRational> {
    let triv = trivial_lattice(config)?;
    let inv = linalg::rat_inverse(&linalg::to_rat_matrix(&triv.gram_big()))
        .ok_or_else(|| Error::Internal("trivial lattice is degenerate".into()))?;
    let vi: Vec<BigRational> = section_vector(config, &config.sections[i])?.into_iter().map(|x| rat(x, 1)).collect();
    let vj: Vec<BigRational> = section_vector(config, &config.sections[j])?.into_iter().map(|x| rat(x, 1)).collect();
    let projected = quadratic(&inv, &vi, &vj);
    Ok(projected - rat(product(products, config, i, j)?, 1))
}

fn quadratic(m: &RatMatrix, u: &[BigRational], w: &[BigRational]) -> BigRational {
    m.iter().zip(u).map(|(row, ui)| ui * row.iter().zip(w).map(|(a, b)| a * b).sum::<BigRational>()).sum()
}

fn height_matrix(config: &FibrationConfig, products: &SectionProducts, idx: &[usize]) -> Result<RatMatrix> {
    idx.iter()
        .map(|&i| {
            idx.iter()
                .map(|&j| {
                    let pq = if i == j { -2 } else { product(products, config, i, j)? };
                    height_pairing(config, &config.sections[i], &config.sections[j], pq)
                })
                .collect()
        })
        .collect()
}

fn rat_det(m: &RatMatrix) -> BigRational {
    let n = m.len();
    let mut a = m.clone();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        for r in c + 1..n {
            let f = &a[r][c] / &a[c][c];
            for k in c..n {
                let d = &f * &a[c][k];
                a[r][k] -= d;
            }
        }
    }
    det
}

/// Greedy choice of sections whose height matrix is nondegenerate.
pub fn free_sections(config: &FibrationConfig, products: &SectionProducts) -> Result<Vec<usize>> {
    let mut chosen: Vec<usize> = Vec::new();
    for i in 0..config.sections.len() {
        let mut trial = chosen.clone();
        trial.push(i);
        if !rat_det(&height_matrix(config, products, &trial)?).is_zero() {
            chosen = trial;
        }
    }
    Ok(chosen)
}

/// Discriminant of the lattice spanned by the free sections.
pub fn mwl_discriminant(config: &FibrationConfig, products: &SectionProducts) -> Result<BigRational> {
    let free = free_sections(config, products)?;
    Ok(rat_det(&height_matrix(config, products, &free)?))
}

pub fn build_ns_model(config: &FibrationConfig, products: &SectionProducts) -> Result<NsModel> {
    let triv = trivial_lattice(config)?;
    let free = free_sections(config, products)?;
    let vectors: Vec<Vec<i64>> =
        config.sections.iter().map(|s| section_vector(config, s)).collect::<Result<_>>()?;
    let n0 = triv.rank();
    let n = n0 + free.len();
    let mut gram = vec![vec![0i64; n]; n];
    for (i, row) in triv.gram().iter().enumerate() {
        gram[i][..n0].copy_from_slice(row);
    }
    for (a, &si) in free.iter().enumerate() {
        for k in 0..n0 {
            gram[n0 + a][k] = vectors[si][k];
            gram[k][n0 + a] = vectors[si][k];
        }
        for (b, &sj) in free.iter().enumerate() {
            gram[n0 + a][n0 + b] = product(products, config, si, sj)?;
        }
    }
    let base = IntLattice::new(gram, format!("{}+sections", triv.label()))?;
    let inv = linalg::rat_inverse(&linalg::to_rat_matrix(&base.gram_big()))
        .ok_or_else(|| Error::Internal("base lattice is degenerate".into()))?;
    let mut glue = Vec::new();
    for s in (0..config.sections.len()).filter(|s| !free.contains(s)) {
        let mut v: Vec<BigRational> = vectors[s].iter().map(|&x| rat(x, 1)).collect();
        for &f in &free {
            v.push(rat(product(products, config, s, f)?, 1));
        }
        let coords: Vec<BigRational> =
            inv.iter().map(|row| row.iter().zip(&v).map(|(a, b)| a * b).sum()).collect();
        let norm = linalg::bilinear_rat(&base.gram_big(), &coords, &coords);
        if norm != rat(-2, 1) {
            return Err(Error::precondition(format!(
                "section {} is not in the span of the trivial lattice and free sections (norm {norm})",
                config.sections[s].name
            )));
        }
        if coords.iter().any(|x| !x.is_integer()) {
            glue.push((s, coords));
        }
    }
    let vectors: Vec<Vec<BigRational>> = glue.iter().map(|(_, c)| c.clone()).collect();
    let ns = glue_overlattice(&base, &vectors)?.with_label("NS (rebuilt)");
    Ok(NsModel { base, free_sections: free, glue, ns })
}

/// A named fibration with the lattices it is expected to produce.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: &'static str,
    pub description: &'static str,
    pub config: FibrationConfig,
    pub products: SectionProducts,
    /// Heights and pairings asserted by the scenario, by section name.
    pub expected_pairings: Vec<(&'static str, &'static str, BigRational)>,
    pub expected_ns: &'static str,
    pub expected_t: &'static str,
}

impl Scenario {
    /// True when the section data determine the whole Néron–Severi lattice.
    pub fn has_full_incidence(&self) -> bool {
        let c = &self.config;
        let torsion_sections = c.sections.iter().filter(|s| s.torsion).count();
        let needed_torsion = match c.torsion_order {
            1 => 0,
            t if t.is_power_of_two() => t.trailing_zeros() as usize,
            _ => usize::MAX,
        };
        torsion_sections >= needed_torsion && c.sections.iter().filter(|s| !s.torsion).count() >= c.mw_rank
    }
}

/// `I_2` fibers of the standard fibration are indexed by the pairs
/// `34, 35, 36, 45, 46, 56`; this marks the listed pairs as non-identity.
fn i2_pattern(pairs: &[&str]) -> Vec<ComponentLabel> {
    ["34", "35", "36", "45", "46", "56"]
        .iter()
        .map(|p| if pairs.contains(p) { ComponentLabel::Index(1) } else { ComponentLabel::Identity })
        .collect()
}

fn standard_torsion_sections() -> Vec<SectionSpec> {
    use ComponentLabel::NonIdentity;
    let l4 = [vec![NonIdentity(1), NonIdentity(1)], i2_pattern(&["35", "36", "45", "46"])].concat();
    let l5 = [vec![NonIdentity(2), NonIdentity(2)], i2_pattern(&["34", "36", "45", "56"])].concat();
    vec![SectionSpec::new("l4", 0, l4, true), SectionSpec::new("l5", 0, l5, true)]
}

/// The three incidence patterns of a height-one section on the degenerate
/// alternative fibration with two `I_2^*` and two `I_2` fibers.
pub fn d1_alternatives() -> Vec<SectionSpec> {
    use ComponentLabel::{Far1, Identity, Index, Near};
    vec![
        SectionSpec::new("P1", 0, vec![Far1, Far1, Identity, Identity], false),
        SectionSpec::new("P2", 0, vec![Far1, Near, Identity, Index(1)], false),
        SectionSpec::new("P3", 0, vec![Near, Near, Index(1), Index(1)], false),
    ]
}

pub fn builtin_scenarios() -> Vec<Scenario> {
    use ComponentLabel::{Far1, Identity, Index, NonIdentity};
    use KodairaFiber::{IStar, I};
    let std_fibers = [vec![IStar(0); 2], vec![I(2); 6]].concat();
    let alt_fibers = [vec![IStar(2); 2], vec![I(2); 2]].concat();
    let zero = BigRational::zero;

    let generic_standard = {
        let mut c = FibrationConfig::k3(std_fibers.clone());
        c.sections = standard_torsion_sections();
        c.torsion_order = 4;
        Scenario {
            name: "generic-standard",
            description: "two I0* and six I2 fibers, 2-torsion sections l4 and l5",
            config: c,
            products: SectionProducts::new(vec![(0, 1, 0)]),
            expected_pairings: vec![("l4", "l4", zero()), ("l5", "l5", zero()), ("l4", "l5", zero())],
            expected_ns: "U+D6^2+A1^2",
            expected_t: "U(2)^2+A1^2",
        }
    };
    let generic_alt = Scenario {
        name: "generic-alt",
        description: "two I2* and two I2 fibers, trivial Mordell-Weil group",
        config: FibrationConfig::k3(alt_fibers.clone()),
        products: SectionProducts::default(),
        expected_pairings: vec![],
        expected_ns: "U+D6^2+A1^2",
        expected_t: "U(2)^2+A1^2",
    };
    let d2_standard = {
        let mut c = FibrationConfig::k3([vec![IStar(0); 3], vec![I(2); 3]].concat());
        c.torsion_order = 4;
        Scenario {
            name: "d2-standard",
            description: "three I0* and three I2 fibers, torsion of order 4",
            config: c,
            products: SectionProducts::default(),
            expected_pairings: vec![],
            expected_ns: "U+D4^2+E7",
            expected_t: "U(2)^2+A1",
        }
    };
    let d2_alt = {
        let mut c = FibrationConfig::k3([vec![IStar(2); 2], vec![I(2); 3]].concat());
        c.sections = vec![SectionSpec::new("D", 0, vec![Far1, Far1, Index(1), Index(1), Identity], true)];
        c.torsion_order = 2;
        Scenario {
            name: "d2-alt",
            description: "two I2* and three I2 fibers, 2-torsion section D",
            config: c,
            products: SectionProducts::default(),
            expected_pairings: vec![("D", "D", zero())],
            expected_ns: "U+D4^2+E7",
            expected_t: "U(2)^2+A1",
        }
    };
    let d4_standard = {
        let mut c = FibrationConfig::k3([vec![IStar(0); 2], vec![I(4)], vec![I(2); 4]].concat());
        c.torsion_order = 4;
        Scenario {
            name: "d4-standard",
            description: "two I0*, one I4 and four I2 fibers, torsion of order 4",
            config: c,
            products: SectionProducts::default(),
            expected_pairings: vec![],
            expected_ns: "U+D6^2+A3",
            expected_t: "U(2)+<4>+A1^2",
        }
    };
    let d4_alt = Scenario {
        name: "d4-alt",
        description: "two I2* and one I4 fiber, trivial Mordell-Weil group",
        config: FibrationConfig::k3(vec![IStar(2), IStar(2), I(4)]),
        products: SectionProducts::default(),
        expected_pairings: vec![],
        expected_ns: "U+D6^2+A3",
        expected_t: "U(2)+<4>+A1^2",
    };
    let d1_alt = {
        let mut c = FibrationConfig::k3(alt_fibers.clone());
        let mut p = d1_alternatives().remove(2);
        p.name = "P".into();
        c.sections = vec![p];
        c.mw_rank = 1;
        c.mwl_disc = rat(1, 1);
        Scenario {
            name: "d1-alt",
            description: "two I2* and two I2 fibers, section P of height 1",
            config: c,
            products: SectionProducts::default(),
            expected_pairings: vec![("P", "P", rat(1, 1))],
            expected_ns: "U+D4+D8+A3",
            expected_t: "U(2)^2+<-4>",
        }
    };
    let d6_alt = Scenario {
        name: "d6-alt",
        description: "two I2*, one I2 and one I3 fiber, trivial Mordell-Weil group",
        config: FibrationConfig::k3(vec![IStar(2), IStar(2), I(2), I(3)]),
        products: SectionProducts::default(),
        expected_pairings: vec![],
        expected_ns: "U+D6^2+A1+A2",
        expected_t: "U(2)+A1^2+<6>",
    };
    let d6_standard = {
        let mut c = FibrationConfig::k3(std_fibers);
        let d = [vec![NonIdentity(1), Identity], i2_pattern(&["35", "46", "56"])].concat();
        c.sections = standard_torsion_sections();
        c.sections.push(SectionSpec::new("D1", 0, d.clone(), false));
        c.sections.push(SectionSpec::new("D2", 0, d, false));
        c.torsion_order = 4;
        c.mw_rank = 1;
        c.mwl_disc = rat(3, 2);
        Scenario {
            name: "d6-standard",
            description: "standard fibration with the extra sections D1 and D2",
            config: c,
            products: SectionProducts::new(vec![(0, 1, 0), (0, 2, 0), (0, 3, 0), (1, 2, 1), (1, 3, 1), (2, 3, 1)]),
            expected_pairings: vec![
                ("D1", "D1", rat(3, 2)),
                ("D2", "D2", rat(3, 2)),
                ("D1", "D2", rat(-3, 2)),
                ("D1", "l5", zero()),
            ],
            expected_ns: "U+D6^2+A1+A2",
            expected_t: "U(2)+A1^2+<6>",
        }
    };
    vec![generic_standard, generic_alt, d2_standard, d2_alt, d4_standard, d4_alt, d1_alt, d6_alt, d6_standard]
}

pub fn scenario(name: &str) -> Result<Scenario> {
    builtin_scenarios()
        .into_iter()
        .find(|s| s.name == name)
        .ok_or_else(|| Error::input(format!("unknown scenario `{name}`")))
}

pub fn verify_scenario(name: &str) -> Result<Report> {
    Ok(verify(&scenario(name)?))
}

fn is_two_elementary_indefinite_even(l: &IntLattice) -> bool {
    l.is_even()
        && l.signature().is_indefinite()
        && discriminant_form(l).map(|f| f.is_two_elementary()).unwrap_or(false)
}

fn describe<T: fmt::Display>(r: &Result<T>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => e.to_string(),
    }
}

/// Runs every lattice-level check of a scenario. Failures are recorded in
/// the report rather than returned.
pub fn verify(s: &Scenario) -> Report {
    let mut report = Report::new(s.name);
    let c = &s.config;

    let euler = c.euler_sum();
    report.push("euler-sum", matches!(euler, Ok(e) if e <= 24), format!("sum of e = {}", describe(&euler)));

    let triv = trivial_lattice(c);
    report.push(
        "trivial-lattice",
        triv.is_ok(),
        match &triv {
            Ok(t) => format!("{} rank {} det {}", t.label(), t.rank(), t.determinant()),
            Err(e) => e.to_string(),
        },
    );

    let expected_ns = parse_sum(s.expected_ns);
    let expected_t = parse_sum(s.expected_t);
    let (Ok(expected_ns), Ok(expected_t), Ok(triv)) = (expected_ns, expected_t, triv) else {
        report.push("expected-lattices", false, "could not build the trivial or expected lattices");
        return report;
    };

    let st = shioda_tate(c, expected_ns.rank());
    report.push(
        "shioda-tate",
        matches!(st, Ok(r) if r == c.mw_rank),
        format!("rank {} - {} gives MW rank {}, declared {}", expected_ns.rank(), triv.rank(), describe(&st), c.mw_rank),
    );

    if !c.sections.is_empty() {
        let mut ok = true;
        let mut detail = Vec::new();
        for p in &c.sections {
            match height(c, p) {
                Ok(h) => {
                    ok &= h.is_zero() == p.torsion && !h.is_negative();
                    detail.push(format!("h({}) = {h}", p.name));
                }
                Err(e) => {
                    ok = false;
                    detail.push(e.to_string());
                }
            }
        }
        report.push("torsion-heights", ok, detail.join(", "));
    }

    if !s.expected_pairings.is_empty() {
        let mut ok = true;
        let mut detail = Vec::new();
        for (a, b, want) in &s.expected_pairings {
            let got = (|| {
                let ia = c.sections.iter().position(|x| x.name == *a).ok_or_else(|| Error::input(*a))?;
                let ib = c.sections.iter().position(|x| x.name == *b).ok_or_else(|| Error::input(*b))?;
                let pq = product(&s.products, c, ia, ib)?;
                height_pairing(c, &c.sections[ia], &c.sections[ib], pq)
            })();
            ok &= got.as_ref().ok() == Some(want);
            detail.push(format!("<{a},{b}> = {} (expected {want})", describe(&got)));
        }
        report.push("section-pairings", ok, detail.join(", "));
    }

    if !c.sections.is_empty() {
        let mut ok = true;
        let mut detail = Vec::new();
        'outer: for i in 0..c.sections.len() {
            for j in i..c.sections.len() {
                let brute = height_pairing_bruteforce(c, &s.products, i, j);
                let formula = product(&s.products, c, i, j)
                    .and_then(|pq| height_pairing(c, &c.sections[i], &c.sections[j], pq));
                match (brute, formula) {
                    (Ok(b), Ok(f)) if b == f => {}
                    (b, f) => {
                        ok = false;
                        detail.push(format!(
                            "{}, {}: brute force {} vs table {}",
                            c.sections[i].name,
                            c.sections[j].name,
                            describe(&b),
                            describe(&f)
                        ));
                        break 'outer;
                    }
                }
            }
        }
        if ok {
            detail.push("table and inverse Gram agree on every section pair".into());
        }
        report.push("height-bruteforce", ok, detail.join(", "));
    }

    if c.mw_rank > 0 {
        let disc = mwl_discriminant(c, &s.products);
        report.push(
            "mwl-discriminant",
            disc.as_ref().ok() == Some(&c.mwl_disc),
            format!("det of free height matrix {} (declared {})", describe(&disc), c.mwl_disc),
        );
    }

    let formula = ns_discriminant(c);
    let exact = rat_int(&expected_ns.determinant());
    report.push(
        "ns-discriminant",
        formula.as_ref().ok() == Some(&exact),
        format!("formula {} vs det({}) = {exact}", describe(&formula), s.expected_ns),
    );

    let rebuilt = if c.torsion_order == 1 && c.mw_rank == 0 {
        Some(Ok(triv.clone()))
    } else if s.has_full_incidence() {
        Some(build_ns_model(c, &s.products).map(|m| m.ns))
    } else {
        None
    };
    if let Some(rebuilt) = rebuilt {
        let genus = rebuilt.as_ref().map_err(Clone::clone).and_then(|ns| {
            Ok((ns.determinant(), same_genus_invariants(ns, &expected_ns)?))
        });
        report.push(
            "glued-ns",
            matches!(genus, Ok((ref d, true)) if *d == expected_ns.determinant()),
            match &genus {
                Ok((d, same)) => format!("rebuilt NS det {d}, same genus as {}: {same}", s.expected_ns),
                Err(e) => e.to_string(),
            },
        );
        if let Ok(ns) = &rebuilt {
            if is_two_elementary_indefinite_even(ns) && is_two_elementary_indefinite_even(&expected_ns) {
                let eq = nikulin_equivalent(ns, &expected_ns);
                report.push("nikulin", matches!(eq, Ok(true)), format!("Nikulin invariants agree: {}", describe(&eq)));
            }
        }
    }

    let anti = discriminant_form(&expected_ns)
        .and_then(|a| Ok((a, discriminant_form(&expected_t)?)))
        .and_then(|(a, b)| find_anti_isometry(&a, &b));
    report.push(
        "disc-anti-isometry",
        matches!(anti, Ok(Some(_))),
        match &anti {
            Ok(Some(_)) => format!("q_NS and -q_T are isometric for {} and {}", s.expected_ns, s.expected_t),
            Ok(None) => "no anti-isometry exists".to_string(),
            Err(e) => e.to_string(),
        },
    );

    let total = expected_ns.signature() + expected_t.signature();
    report.push("signature", total == SignaturePair::new(3, 19), format!("{} + {} = {total}", expected_ns.signature(), expected_t.signature()));
    report.push(
        "transcendental-rank",
        expected_t.rank() + expected_ns.rank() == 22,
        format!("rank T = {} = 22 - {}", expected_t.rank(), expected_ns.rank()),
    );
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use KodairaFiber::*;

    fn all_labels(f: KodairaFiber) -> Vec<ComponentLabel> {
        use ComponentLabel as C;
        let mut out = vec![C::Identity];
        out.extend((1..10).map(C::Index));
        out.extend([C::Near, C::Far1, C::Far2]);
        out.extend((1..4).map(C::NonIdentity));
        out.retain(|&l| f.component_node(l).is_ok());
        out
    }

    #[test]
    fn fiber_table_rows() {
        let i2 = fiber_data(I(2)).unwrap();
        assert_eq!(i2.root_lattice.as_ref().unwrap().label(), "A1");
        assert_eq!((i2.euler, i2.component_group.clone()), (2, vec![2]));
        let i0s = fiber_data(IStar(0)).unwrap();
        assert_eq!(i0s.root_lattice.as_ref().unwrap().label(), "D4");
        assert_eq!((i0s.euler, i0s.component_group.clone()), (5, vec![2, 2]));
        let e7 = fiber_data(IIIStar).unwrap();
        assert_eq!((e7.euler, e7.disc_group.clone()), (8, vec![2]));
        assert!(fiber_data(I(0)).is_err());
    }

    #[test]
    fn disc_group_order_matches_root_determinant() {
        let fibers = [I(1), I(2), I(5), II, III, IV, IStar(0), IStar(1), IStar(4), IIStar, IIIStar, IVStar];
        for f in fibers {
            let d = fiber_data(f).unwrap();
            assert_eq!(BigInt::from(d.disc_group_order()), d.discriminant().abs(), "{f}");
        }
        // det A_{n-1} = (-1)^{n-1} n
        assert_eq!(fiber_data(I(4)).unwrap().discriminant(), BigInt::from(-4));
        assert_eq!(fiber_data(I(5)).unwrap().discriminant(), BigInt::from(5));
    }

    #[test]
    fn contribution_table_matches_inverse_gram() {
        let fibers = [I(2), I(3), I(6), III, IV, IStar(0), IStar(1), IStar(2), IStar(5), IIIStar, IVStar, IIStar];
        for f in fibers {
            let labels = all_labels(f);
            for &a in &labels {
                for &b in &labels {
                    assert_eq!(
                        local_contribution(f, a, b).unwrap(),
                        local_contribution_bruteforce(f, a, b).unwrap(),
                        "{f} at ({a}, {b})"
                    );
                }
            }
        }
    }

    #[test]
    fn trivial_lattices() {
        let s = scenario("generic-standard").unwrap();
        let t = trivial_lattice(&s.config).unwrap();
        assert_eq!((t.rank(), t.determinant()), (16, BigInt::from(-1024)));
        let alt = trivial_lattice(&scenario("generic-alt").unwrap().config).unwrap();
        assert_eq!(alt.gram(), parse_sum("U+D6^2+A1^2").unwrap().gram());
        assert_eq!(trivial_lattice(&FibrationConfig::k3(vec![])).unwrap().label(), "U");
    }

    #[test]
    fn shioda_tate_ranks() {
        assert_eq!(shioda_tate(&scenario("generic-standard").unwrap().config, 16).unwrap(), 0);
        assert_eq!(shioda_tate(&scenario("d1-alt").unwrap().config, 17).unwrap(), 1);
        assert_eq!(shioda_tate(&FibrationConfig::k3(vec![]), 2).unwrap(), 0);
        assert!(shioda_tate(&scenario("generic-standard").unwrap().config, 10).is_err());
    }

    #[test]
    fn heights_of_named_sections() {
        let d1 = scenario("d1-alt").unwrap().config;
        for p in d1_alternatives() {
            assert_eq!(height(&d1, &p).unwrap(), rat(1, 1), "{}", p.name);
        }
        let d2 = scenario("d2-alt").unwrap().config;
        assert_eq!(height(&d2, d2.section("D").unwrap()).unwrap(), rat(0, 1));
        let d6 = scenario("d6-standard").unwrap().config;
        assert_eq!(height(&d6, d6.section("D1").unwrap()).unwrap(), rat(3, 2));
    }

    #[test]
    fn forced_intersection_number() {
        let d6 = scenario("d6-standard").unwrap().config;
        let (d1, l5) = (d6.section("D1").unwrap(), d6.section("l5").unwrap());
        assert_eq!(intersection_from_pairing(&d6, d1, l5, &rat(0, 1)).unwrap(), rat(1, 1));
        assert_eq!(height_pairing(&d6, d1, d6.section("D2").unwrap(), 1).unwrap(), rat(-3, 2));
    }

    #[test]
    fn invalid_labels_are_rejected() {
        let c = FibrationConfig::k3(vec![IStar(0)]);
        let bad = SectionSpec::new("X", 0, vec![ComponentLabel::Near], false);
        assert!(height(&c, &bad).is_err());
        let short = SectionSpec::new("Y", 0, vec![], false);
        assert!(height(&c, &short).is_err());
    }

    #[test]
    fn discriminant_formula() {
        assert_eq!(ns_discriminant(&scenario("generic-standard").unwrap().config).unwrap(), rat(-64, 1));
        assert_eq!(ns_discriminant(&scenario("d2-alt").unwrap().config).unwrap(), rat(32, 1));
        assert_eq!(ns_discriminant(&scenario("d1-alt").unwrap().config).unwrap(), rat(64, 1));
        assert_eq!(ns_discriminant(&scenario("d6-standard").unwrap().config).unwrap(), rat(96, 1));
    }

    #[test]
    fn rebuilt_ns_determinants() {
        for (name, det) in [("generic-standard", -64), ("d2-alt", 32), ("d1-alt", 64), ("d6-standard", 96)] {
            let s = scenario(name).unwrap();
            let model = build_ns_model(&s.config, &s.products).unwrap();
            assert_eq!(model.ns.determinant(), BigInt::from(det), "{name}");
        }
    }

    #[test]
    fn every_scenario_verifies() {
        for s in builtin_scenarios() {
            let r = verify(&s);
            assert!(r.all_pass(), "{}", r.to_text());
        }
    }

    #[test]
    fn rebuilt_lattice_checks_run_where_incidence_is_known() {
        let generic = verify_scenario("generic-standard").unwrap();
        for id in ["glued-ns", "nikulin", "height-bruteforce", "ns-discriminant"] {
            assert!(generic.check(id).is_some_and(|c| c.pass), "{id}");
        }
        assert!(verify_scenario("d6-standard").unwrap().check("mwl-discriminant").is_some_and(|c| c.pass));
        assert!(verify_scenario("d2-standard").unwrap().check("glued-ns").is_none());
        assert!(verify_scenario("d2-alt").unwrap().check("nikulin").is_some_and(|c| c.pass));
    }

    #[test]
    fn unknown_scenario() {
        assert!(verify_scenario("nope").unwrap_err().is_input_error());
    }
}
