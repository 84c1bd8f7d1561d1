use proptest::prelude::*;
use shadowfid::bench::{parse_config, ExperimentConfig};
use shadowfid::bits::{bits_to_index, index_to_bits};
use shadowfid::chainlab::{build_chain_with, build_observable, trace_product, Kernel, SUPPORT_TOL};
use shadowfid::estimator::{debias, median_of_means, omega};
use shadowfid::mixedcert::fidelity_bounds;
use shadowfid::oracle::AmplitudeOracle;
use shadowfid::shadowmeas::{read_ndjson, sample_batch, write_ndjson};
use shadowfid::statekit::{apply_noise, make_haar_random, make_iqp, NoiseModel, NoiseSpec, NoisyState};

fn noise_model() -> impl Strategy<Value = NoiseModel> {
    prop_oneof![
        Just(NoiseModel::White),
        Just(NoiseModel::Coherent),
        Just(NoiseModel::Dephasing),
        Just(NoiseModel::LocalDephasing),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn bit_roundtrip(n in 1usize..20, x in any::<u64>()) {
        let x = x & ((1u64 << n) - 1);
        prop_assert_eq!(bits_to_index(&index_to_bits(x, n)), x);
    }

    #[test]
    fn omega_within_range(n in 2usize..6, k in 1usize..4, seed in any::<u64>()) {
        let k = k.min(n);
        let psi = make_haar_random(n, seed).unwrap();
        let rho = NoisyState::pure(&make_iqp(n, seed ^ 1).unwrap());
        let o = AmplitudeOracle::from_pure_state(&psi);
        for r in sample_batch(&rho, k, 50, seed).unwrap() {
            let w = omega(&r, &o).unwrap();
            prop_assert!(w.abs() <= (4.0f64).powi(k as i32) + 1e-12);
        }
    }

    #[test]
    fn chains_are_reversible_stochastic(n in 2usize..7, k in 1usize..4, seed in any::<u64>(), block in any::<bool>()) {
        let k = k.min(n);
        let kernel = if block { Kernel::Block } else { Kernel::Pairwise };
        let o = AmplitudeOracle::from_pure_state(&make_haar_random(n, seed).unwrap());
        let c = build_chain_with(&o, k, SUPPORT_TOL, kernel).unwrap();
        prop_assert!(c.max_row_sum_error() < 1e-12);
        prop_assert!(c.max_detailed_balance_error() < 1e-12);
        prop_assert!(c.max_stationarity_error() < 1e-12);
    }

    #[test]
    fn observable_fixes_target_and_bounds_fidelity(n in 2usize..6, k in 1usize..4, seed in any::<u64>(), p in 0.0f64..1.0, model in noise_model()) {
        let k = k.min(n);
        let psi = make_haar_random(n, seed).unwrap();
        let o = AmplitudeOracle::from_pure_state(&psi);
        let l = build_observable(&o, k).unwrap();
        let v = nalgebra::DVector::from_column_slice(psi.amplitudes());
        prop_assert!((&l * &v - &v).norm() < 1e-9);
        let rho = apply_noise(&make_haar_random(n, seed ^ 7).unwrap(), NoiseSpec::new(model, p).unwrap()).unwrap();
        let f = rho.true_fidelity(&psi).unwrap();
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&f));
        prop_assert!(trace_product(&l, &rho.density().unwrap()) >= f - 1e-10);
    }

    #[test]
    fn white_noise_fidelity_is_affine(n in 1usize..8, seed in any::<u64>(), p in 0.0f64..1.0) {
        let psi = make_haar_random(n, seed).unwrap();
        let rho = apply_noise(&psi, NoiseSpec::new(NoiseModel::White, p).unwrap()).unwrap();
        let want = 1.0 - p + p / (1u64 << n) as f64;
        prop_assert!((rho.true_fidelity(&psi).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn median_of_means_lies_between_batch_extremes(values in prop::collection::vec(-10.0f64..10.0, 8..200), k in 1usize..8) {
        let (m, means) = median_of_means(&values, k).unwrap();
        prop_assert_eq!(means.len(), k);
        let lo = means.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = means.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(lo <= m && m <= hi);
    }

    #[test]
    fn debias_family_is_ordered(e in 0.0f64..1.0, l1 in 0.0f64..0.99) {
        let d = debias(e, l1).unwrap();
        prop_assert!(d.f_min <= d.mid + 1e-15 && d.mid <= e + 1e-15);
        prop_assert!(d.mid_bound >= 0.0);
    }

    #[test]
    fn mixed_bounds_are_ordered(f in prop::collection::vec(0.0f64..1.0, 1..6), w in prop::collection::vec(0.01f64..1.0, 6)) {
        let w = &w[..f.len()];
        let s: f64 = w.iter().sum();
        let p: Vec<f64> = w.iter().map(|x| x / s).collect();
        let b = fidelity_bounds(&f, &p).unwrap();
        prop_assert!(0.0 <= b.lower && b.lower <= b.upper + 1e-15);
        prop_assert!(b.upper <= f.iter().sum::<f64>() + 1e-12);
    }

    #[test]
    fn records_roundtrip_through_ndjson(n in 1usize..9, k in 1usize..4, seed in any::<u64>()) {
        let k = k.min(n);
        let rho = NoisyState::pure(&make_haar_random(n, seed).unwrap());
        let recs = sample_batch(&rho, k, 20, seed).unwrap();
        let mut buf = Vec::new();
        write_ndjson(&recs, &mut buf).unwrap();
        prop_assert_eq!(read_ndjson(&buf[..]).unwrap(), recs);
    }

    #[test]
    fn configs_roundtrip(n in 2usize..10, k in 1usize..3, rounds in 1usize..10_000, seed in any::<u64>()) {
        let text = format!(r#"{{"version":1,"experiment":"benchmark-noise","n":{n},"k":{k},"rounds":{rounds},"seed":{seed}}}"#);
        let cfg = parse_config(&text).unwrap();
        prop_assert!(matches!(cfg, ExperimentConfig::BenchmarkNoise(_)));
        prop_assert_eq!(parse_config(&cfg.to_json().unwrap()).unwrap(), cfg);
    }
}
