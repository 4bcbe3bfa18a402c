use diophant::arith::parse_scalar;
use diophant::census::census;
use diophant::dirichlet::simultaneous_witness;
use diophant::matrix::IntMatrix;
use diophant::periods::{check_period_sandwich, compute_periods, Stop};
use diophant::resonance::{e_value, normal_form, resonance_module};
use diophant::snf::smith_normal_form;
use diophant::transfer::{map_lin_to_sim, map_sim_to_lin, mu};
use diophant::{lattice_distance, Error, Exec, Precision, Real, Vector};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn prec() -> Precision {
    Precision::default()
}

fn matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-50i64..=50, c), r)
    })
}

fn rational_vector() -> impl Strategy<Value = Vec<(i64, i64)>> {
    (1usize..=3, 1i64..=60).prop_flat_map(|(n, den)| {
        prop::collection::vec((0..den).prop_map(move |p| (p, den)), n)
    })
}

fn lcd(v: &[(i64, i64)]) -> i64 {
    v.iter().fold(1, |l, &(p, q)| l.lcm(&(q / p.gcd(&q))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn snf_reproduces_input(rows in matrix()) {
        let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
        let b = IntMatrix::from_i64(&refs).unwrap();
        let s = smith_normal_form(&b);
        prop_assert_eq!(s.product(), b);
        prop_assert!(s.c.is_unimodular());
        prop_assert!(s.a.is_unimodular());
        for pair in s.factors.windows(2) {
            prop_assert!(pair[1].is_multiple_of(&pair[0]));
        }
        for i in 0..s.lambda.rows() {
            for j in 0..s.lambda.cols() {
                let x = &s.lambda.row(i)[j];
                if i != j {
                    prop_assert!(x.is_zero());
                } else if i < s.rank() {
                    prop_assert_eq!(x, &s.factors[i]);
                    prop_assert!(x.is_positive());
                }
            }
        }
    }

    #[test]
    fn module_is_the_full_resonance_lattice(v in rational_vector()) {
        let omega = Vector::from_rationals(&v).unwrap();
        let m = resonance_module(&omega).unwrap();
        let n = v.len();
        let t = lcd(&v);
        prop_assert_eq!(m.rank(), n);
        for k in &m.basis {
            prop_assert!(m.contains(&omega, k));
        }
        // stacking T·I on the basis must not enlarge the lattice
        let mut rows = m.basis.clone();
        for i in 0..n {
            let mut e = vec![BigInt::zero(); n];
            e[i] = BigInt::from(t);
            rows.push(e);
        }
        let stacked = smith_normal_form(&IntMatrix::from_rows(rows).unwrap());
        let trimmed: Vec<BigInt> = m.factors.iter().filter(|d| !d.is_one()).cloned().collect();
        let stacked_trimmed: Vec<BigInt> =
            stacked.factors.iter().filter(|d| !d.is_one()).cloned().collect();
        prop_assert_eq!(stacked_trimmed, trimmed);
        prop_assert_eq!(m.factors.last().cloned().unwrap(), BigInt::from(t));
        let index: BigInt = m.factors.iter().product();
        prop_assert_eq!(index, BigInt::from(t));
        for pair in m.factors.windows(2) {
            prop_assert!(pair[0] != pair[1] || pair[0].is_one());
        }
    }

    #[test]
    fn normal_form_splits_with_reduced_fractions(v in rational_vector()) {
        let omega = Vector::from_rationals(&v).unwrap();
        let nf = normal_form(&omega).unwrap();
        prop_assert!(nf.a.is_unimodular());
        for (x, d) in nf.rational_part().iter().zip(&nf.factors) {
            // a_i/d_i in lowest terms, modulo integers
            let frac = x - x.floor();
            prop_assert!(frac.is_zero() && d.is_one() || frac.denom() == d);
        }
    }

    #[test]
    fn e_value_bounds(v in rational_vector()) {
        let omega = Vector::from_rationals(&v).unwrap();
        let e = e_value(&omega).unwrap();
        let t = lcd(&v) as u64;
        prop_assert!(e >= 1);
        prop_assert!(BigInt::from(e).pow(v.len() as u32) <= BigInt::from(t));
    }

    #[test]
    fn distance_at_most_half(v in rational_vector(), t in 1u64..200) {
        let omega = Vector::from_rationals(&v).unwrap();
        let d = lattice_distance(t, &omega, prec()).unwrap();
        prop_assert!(d.value.to_rational().unwrap() <= BigRational::new(1.into(), 2.into()));
    }

    #[test]
    fn periods_satisfy_the_sandwich(v in rational_vector()) {
        let omega = Vector::from_rationals(&v).unwrap();
        let seq = compute_periods(&omega, Stop::period(4000), prec()).unwrap();
        prop_assert!(seq.terminated);
        for rec in check_period_sandwich(&seq, v.len(), prec()).unwrap() {
            prop_assert!(rec.lower_holds && rec.upper_holds);
        }
    }

    #[test]
    fn dirichlet_ladder(v in rational_vector(), k in 1u32..=10) {
        let omega = Vector::from_rationals(&v).unwrap();
        let q = BigRational::from_integer(BigInt::from(1u64 << k));
        let w = simultaneous_witness(&omega, &q, prec()).unwrap();
        prop_assert!(BigRational::from_integer(w.time.into()) < q);
        let d = w.distance.to_rational().unwrap();
        prop_assert!(d.pow(v.len() as i32) * &q <= BigRational::one());
    }

    #[test]
    fn census_is_bounded_and_schedule_free(t in 1u64..40, n in 1usize..=2, a in 1u64..=4) {
        let par = census(t, n, a, Exec::Parallel).unwrap();
        let seq = census(t, n, a, Exec::Sequential).unwrap();
        prop_assert!(par.within_bound());
        prop_assert_eq!(par, seq);
    }

    #[test]
    fn exponent_maps_round_trip(n in 2usize..=6, num in 0i64..1000, den in 1i64..1000) {
        let tau = BigRational::new(num.into(), den.into());
        let lin = map_sim_to_lin(&tau, n).unwrap();
        prop_assert_eq!(mu(&lin, n).unwrap(), tau.clone());
        prop_assert_eq!(map_lin_to_sim(&lin, n).unwrap(), BigRational::from_integer(n.into()) * &lin);
        let threshold = BigRational::new(1.into(), BigInt::from(n - 1));
        prop_assert!(lin < threshold);
        let violated = |r: diophant::Result<BigRational>| matches!(r, Err(Error::ThresholdViolated { .. }));
        prop_assert!(violated(mu(&threshold, n)));
        prop_assert!(violated(mu(&(threshold + &tau), n)));
    }

    #[test]
    fn surd_display_parses_back(
        a in -50i64..50,
        b in 1i64..20,
        c in -50i64..50,
        d in 1i64..20,
        m in prop::sample::select(vec![2u64, 3, 5, 6, 7]),
    ) {
        let x = &Real::ratio(a, b) + &(&Real::ratio(c, d) * &Real::sqrt_int(m).unwrap());
        prop_assert_eq!(parse_scalar(&x.to_string()).unwrap(), x);
    }
}
