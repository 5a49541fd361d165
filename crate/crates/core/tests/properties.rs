use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use k3lat_core::clifford_ks::{factor, hilbert_symbol, Place};
use k3lat_core::disc_form::{discriminant_form, find_isometry};
use k3lat_core::group_iso::{phi, random_words, su22_generators};
use k3lat_core::lattice::parse_sum;
use k3lat_core::symbolic::Poly;
use k3lat_core::wall_orbits::{orbit_equivalent, sample_isometries, vector_type, TVector};

const SUMMANDS: &[&str] = &["U", "U(2)", "A1", "A2", "D4", "E6", "<-4>", "<2>"];

fn summand() -> impl Strategy<Value = &'static str> {
    prop::sample::select(SUMMANDS)
}

fn small_poly(nvars: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec((-3i64..=3, prop::collection::vec(0u16..=2, nvars)), 0..5).prop_map(move |terms| {
        terms.into_iter().fold(Poly::zero(nvars), |acc, (c, exps)| {
            let mono = exps
                .iter()
                .enumerate()
                .fold(Poly::int(nvars, c), |m, (i, &e)| &m * &Poly::variable(nvars, i).pow(u32::from(e)));
            &acc + &mono
        })
    })
}

fn nonzero_int() -> impl Strategy<Value = i64> {
    prop_oneof![-200i64..=-1, 1i64..=200]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn determinant_is_multiplicative(a in summand(), b in summand()) {
        let la = parse_sum(a).unwrap();
        let lb = parse_sum(b).unwrap();
        let sum = la.direct_sum(&lb);
        prop_assert_eq!(sum.determinant(), la.determinant() * lb.determinant());
        prop_assert_eq!(sum.signature(), la.signature() + lb.signature());
    }

    #[test]
    fn discriminant_order_is_abs_det(a in summand(), b in summand()) {
        let l = parse_sum(&format!("{a}+{b}")).unwrap();
        let form = discriminant_form(&l).unwrap();
        prop_assert_eq!(BigInt::from(form.order()), l.determinant().magnitude().clone().into());
    }

    #[test]
    fn summand_order_does_not_change_the_form(a in summand(), b in summand()) {
        let ab = discriminant_form(&parse_sum(&format!("{a}+{b}")).unwrap()).unwrap();
        let ba = discriminant_form(&parse_sum(&format!("{b}+{a}")).unwrap()).unwrap();
        prop_assert!(find_isometry(&ab, &ba).unwrap().is_some());
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism(
        p in small_poly(3),
        q in small_poly(3),
        point in prop::collection::vec(-5i64..=5, 3),
    ) {
        let at: Vec<BigRational> = point.iter().map(|&x| BigRational::from_integer(x.into())).collect();
        prop_assert_eq!((&p * &q).evaluate(&at), p.evaluate(&at) * q.evaluate(&at));
        prop_assert_eq!((&p + &q).evaluate(&at), p.evaluate(&at) + q.evaluate(&at));
        prop_assert!((&(&p - &q) + &q - p.clone()).is_zero());
    }

    #[test]
    fn hilbert_product_formula(a in nonzero_int(), b in nonzero_int()) {
        let (ra, rb) = (BigRational::from_integer(a.into()), BigRational::from_integer(b.into()));
        let mut places = vec![Place::Infinity, Place::Prime(2)];
        for n in [a, b] {
            for (p, _) in factor(&BigInt::from(n)).unwrap() {
                places.push(Place::Prime(p));
            }
        }
        places.sort();
        places.dedup();
        let product: i32 = places.iter().map(|&v| hilbert_symbol(&ra, &rb, v).unwrap()).product();
        prop_assert_eq!(product, 1);
    }

    #[test]
    fn isometries_preserve_norm_and_type(coords in prop::array::uniform6(-6i64..=6)) {
        let x = TVector(coords);
        prop_assume!(x.is_primitive());
        let ty = vector_type(&x).unwrap();
        for g in sample_isometries() {
            let y = g.apply(&x);
            prop_assert_eq!(vector_type(&y).unwrap(), ty);
            prop_assert!(orbit_equivalent(&x, &y).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn phi_is_multiplicative_on_random_words(seed in any::<u64>()) {
        let words = random_words(&su22_generators(), 2, 4, seed);
        let (a, b) = (&words[0], &words[1]);
        let lhs = phi(&(a * b)).unwrap();
        let rhs = phi(a).unwrap().compose(&phi(b).unwrap());
        prop_assert_eq!(lhs, rhs);
        prop_assert!(lhs.preserves_gram());
    }
}
