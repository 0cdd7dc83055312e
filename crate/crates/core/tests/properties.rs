use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use unitary_fl::chardata::{Coeff, Datum, FactorSpec};
use unitary_fl::geometry;
use unitary_fl::instance::parse_instance;
use unitary_fl::lattice::enumerate::{
    enumerate_selfdual, enumerate_selfdual_naive, enumerate_selfdual_naive_widened, window_dimension,
};
use unitary_fl::lattice::{HermitianForm, Lattice, Space};
use unitary_fl::local::{Gf, GfCtx, Matrix, Poly, Series, EXACT};
use unitary_fl::orbital::{self, all_classes, EngineOptions};

fn f9() -> &'static GfCtx {
    GfCtx::get(3, 2)
}

fn gf() -> impl Strategy<Value = Gf> {
    (0u32..9).prop_map(|c| f9().from_code(c))
}

fn series() -> impl Strategy<Value = Series> {
    (-2i64..3, prop::collection::vec(0u32..9, 0..5))
        .prop_map(|(start, codes)| Series::from_coeffs(f9(), start, codes.into_iter().map(|c| f9().from_code(c)).collect(), EXACT))
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-20i64..20, 1i64..6).prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

/// Two degree-one factors `gamma_1 = x eps`, `gamma_2 = x eps + z eps t^k`
/// over `F_p`: nodes and tacnodes.
fn node_datum(p: u32, x: u32, z: u32, k: i64) -> Datum {
    // eps = g in F_9 and 1 + 2g in F_25
    let eps_times = |c: u32| match p {
        3 => Coeff::Digits(vec![0, c % 3]),
        _ => Coeff::Digits(vec![c % 5, 2 * c % 5]),
    };
    let g1 = if x == 0 { vec![] } else { vec![(0, 0, eps_times(x))] };
    let mut g2 = g1.clone();
    g2.push((k, 0, eps_times(z)));
    let specs = [
        FactorSpec { id: "1".into(), e: 1, f: 1, gamma: g1 },
        FactorSpec { id: "2".into(), e: 1, f: 1, gamma: g2 },
    ];
    Datum::from_specs(p, &specs).unwrap()
}

fn node3() -> Datum {
    unitary_fl::corpus::find("NODE3").unwrap().instance().datum(None).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gf_field_laws(a in gf(), b in gf(), c in gf()) {
        prop_assert_eq!((a + b) * c, a * c + b * c);
        prop_assert_eq!(a * b, b * a);
        prop_assert_eq!(a.tau().tau(), a);
        prop_assert_eq!((a * b).tau(), a.tau() * b.tau());
        if let Some(i) = a.inv() {
            prop_assert!((a * i).is_one());
        }
    }

    #[test]
    fn series_ring_laws(a in series(), b in series(), c in series()) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(a.tau().tau(), a.clone());
        prop_assert_eq!((&a * &b).tau(), &a.tau() * &b.tau());
        if !a.is_exact_zero() {
            let inv = a.inv(12).unwrap();
            let prod = &a * &inv;
            prop_assert!(prod.agrees_with(&Series::one(f9())));
        }
    }

    #[test]
    fn hermite_form_is_idempotent(codes in prop::collection::vec((0u32..9, 0i64..3), 4)) {
        let d = node3();
        let inv = d.invariants(&[0, 1]).unwrap();
        let space = Space::new(&d, &inv);
        let mut cols: Vec<Vec<Series>> = codes
            .chunks(2)
            .map(|ch| ch.iter().map(|&(c, s)| Series::monomial(f9().from_code(c), s)).collect())
            .collect();
        cols.extend(space.pi_power_lattice(&[3, 3]).columns());
        let l = Lattice::from_generators(&space, &Matrix::from_columns(&cols)).unwrap();
        let again = Lattice::from_generators(&space, l.matrix()).unwrap();
        prop_assert_eq!(again, l);
    }

    #[test]
    fn dual_is_an_involution_and_scales_by_t(codes in prop::collection::vec((0u32..9, -1i64..2), 4), class in 0usize..2) {
        let d = node3();
        let inv = d.invariants(&[0, 1]).unwrap();
        let space = Space::new(&d, &inv);
        let form = HermitianForm::for_class(&d, &inv, &all_classes(2)[[0, 3][class]]).unwrap();
        let mut cols: Vec<Vec<Series>> = codes
            .chunks(2)
            .map(|ch| ch.iter().map(|&(c, s)| Series::monomial(f9().from_code(c), s)).collect())
            .collect();
        cols.extend(space.pi_power_lattice(&[2, 2]).columns());
        let m = Lattice::from_generators(&space, &Matrix::from_columns(&cols)).unwrap();
        let dual = form.dual(&space, &m).unwrap();
        prop_assert_eq!(form.dual(&space, &dual).unwrap(), m.clone());
        prop_assert_eq!(form.dual(&space, &m.scale_t(1)).unwrap(), dual.scale_t(-1));
    }

    #[test]
    fn kostant_round_trip_over_rationals(a in prop::collection::vec(rational(), 1..5)) {
        let back = geometry::point_of_poly(&geometry::kostant_section(&a).charpoly());
        prop_assert_eq!(back, a);
    }

    #[test]
    fn discriminant_of_product(a1 in prop::collection::vec(series(), 1..3), a2 in prop::collection::vec(series(), 1..3)) {
        let one = Series::one(f9());
        let a = geometry::endo_product(&a1, &a2, &one);
        let d = geometry::spectral_discriminant(&a, &one);
        let d1 = geometry::spectral_discriminant(&a1, &one);
        let d2 = geometry::spectral_discriminant(&a2, &one);
        let res = geometry::poly_of_point(&a1, &one).resultant(&geometry::poly_of_point(&a2, &one));
        prop_assume!(!d1.is_exact_zero() && !d2.is_exact_zero() && !res.is_exact_zero());
        prop_assert_eq!(d.valuation().unwrap(), d1.valuation().unwrap() + d2.valuation().unwrap() + 2 * res.valuation().unwrap());
    }

    #[test]
    fn tangent_map_injective_iff_coprime(a1 in prop::collection::vec(0u32..5, 1..3), a2 in prop::collection::vec(0u32..5, 1..3)) {
        let k = GfCtx::get(5, 1);
        let s1: Vec<Series> = a1.iter().map(|&c| Series::constant(k.from_code(c))).collect();
        let s2: Vec<Series> = a2.iter().map(|&c| Series::constant(k.from_code(c))).collect();
        let injective = geometry::tangent_injectivity(&s1, &s2, &Series::one(k)).unwrap();
        let p1 = geometry::poly_of_point(&a1.iter().map(|&c| k.from_code(c)).collect::<Vec<_>>(), &k.one());
        let p2 = geometry::poly_of_point(&a2.iter().map(|&c| k.from_code(c)).collect::<Vec<_>>(), &k.one());
        let (n1, n2) = (a1.len(), a2.len());
        // brute-force kernel of (dP1, dP2) -> P1 dP2 + P2 dP1 with deg dPi < ni
        let mut kernel = false;
        for code in 1..5u32.pow((n1 + n2) as u32) {
            let digits: Vec<Gf> = (0..n1 + n2).map(|i| k.from_code(code / 5u32.pow(i as u32) % 5)).collect();
            let dp1 = Poly::new(digits[..n1].to_vec());
            let dp2 = Poly::new(digits[n1..].to_vec());
            let image = p1.mul(&dp2).add(&p2.mul(&dp1));
            if image.coeffs().iter().all(Gf::is_zero) {
                kernel = true;
                break;
            }
        }
        prop_assert_eq!(injective, !kernel);
    }

    #[test]
    fn instance_round_trip(
        q in prop::sample::select(vec![3u32, 5, 7]),
        gammas in prop::collection::vec(prop::collection::vec((0i64..3, 0i64..2, 0u32..3), 0..3), 1..4),
        with_partition in any::<bool>(),
    ) {
        let factors: Vec<serde_json::Value> = gammas
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let terms: Vec<serde_json::Value> = g
                    .iter()
                    .map(|&(a, b, d)| if d == 0 { serde_json::json!([a, b, "eps"]) } else { serde_json::json!([a, b, [d, 1]]) })
                    .collect();
                serde_json::json!({"id": format!("g{i}"), "e": 1, "f": 1, "gamma": terms})
            })
            .collect();
        let mut v = serde_json::json!({"q": q, "factors": factors});
        if with_partition && gammas.len() > 1 {
            v["partition"] = serde_json::json!([["g0"], (1..gammas.len()).map(|i| format!("g{i}")).collect::<Vec<_>>()]);
        }
        let inst = parse_instance(&v.to_string()).unwrap();
        let text = inst.emit();
        let again = parse_instance(&text).unwrap();
        prop_assert_eq!(&again, &inst);
        prop_assert_eq!(again.emit(), text);
        prop_assert_eq!(again.datum_hash(), inst.datum_hash());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn pruned_matches_naive_on_nodes(p in prop::sample::select(vec![3u32, 5]), x in 0u32..5, z in 1u32..5, k in 1i64..3) {
        prop_assume!(z % p != 0);
        let d = node_datum(p, x, z, k);
        let inv = d.invariants(&[0, 1]).unwrap();
        // the naive search visits every subspace of F_{p^2}^dim
        let dim = window_dimension(&inv);
        prop_assume!(dim <= 2 || (p == 3 && dim <= 4));
        let space = Space::new(&d, &inv);
        for lambda in all_classes(2) {
            let form = HermitianForm::for_class(&d, &inv, &lambda).unwrap();
            let pruned = enumerate_selfdual(&space, &inv, &form, 10).unwrap().count;
            let naive = enumerate_selfdual_naive(&space, &inv, &form).unwrap();
            prop_assert_eq!(pruned, naive, "class {:?}", lambda);
            if dim <= 2 {
                let widened = enumerate_selfdual_naive_widened(&space, &inv, &form, 1).unwrap();
                prop_assert_eq!(widened, naive, "widened class {:?}", lambda);
            }
        }
    }

    #[test]
    fn class_is_invariant_under_fixed_units_and_t_squared(x in 0u32..5, z in 1u32..5, k in 1i64..3, seed in any::<u64>()) {
        let d = node_datum(5, x, z, k);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let opts = EngineOptions::default();
        for lambda in all_classes(2) {
            prop_assert!(orbital::class_invariance_check(&d, &[0, 1], &lambda, 2, &mut rng, &opts).unwrap());
        }
    }
}
