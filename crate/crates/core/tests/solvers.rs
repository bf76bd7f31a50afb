use nnforecast::bpnn::{BpNetwork, SgdConfig};
use nnforecast::kernels::KernelSpec;
use nnforecast::lssvm::median_rbf;
use nnforecast::oracles;
use nnforecast::svr::{SolverStatus, SvrModel, SvrParams};
use nnforecast::timeseries::{make_windows, synthetic_ar_series, MinMaxScaler};
use nnforecast::Regressor;
use proptest::prelude::{prop_assert, proptest, ProptestConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn instance(seed: u64, n: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let xs: Vec<Vec<f64>> = (0..n).map(|_| (0..2).map(|_| rng.random()).collect()).collect();
    let ys = xs.iter().map(|x| (3.0 * x[0]).sin() + x[1] + 0.1 * rng.random::<f64>()).collect();
    (xs, ys)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn smo_reaches_the_dual_optimum(seed in 0u64..10_000, n in 2usize..10, eps in 0.0f64..0.3, log_c in -1.0f64..1.5) {
        let (xs, ys) = instance(seed, n);
        let kernel = median_rbf(&xs);
        let mut params = SvrParams::new(kernel);
        params.epsilon = eps;
        params.c = 10f64.powf(log_c);
        params.tol = 1e-9;
        let smo = SvrModel::fit(&xs, &ys, &params).unwrap();
        let oracle = oracles::svr_dual(&kernel, &xs, &ys, eps, params.c, 20_000);
        let gap = (smo.objective() - oracle.objective).abs();
        prop_assert!(gap <= 1e-3 * oracle.objective.abs().max(1e-9), "smo {} oracle {}", smo.objective(), oracle.objective);
        prop_assert!(smo.status() == SolverStatus::Converged);
    }
}

#[test]
fn smo_coefficients_match_oracle_on_strictly_convex_instance() {
    let (xs, ys) = instance(3, 8);
    let kernel = KernelSpec::rbf(0.5).unwrap();
    let mut params = SvrParams::new(kernel);
    params.epsilon = 0.05;
    params.c = 1.0;
    params.tol = 1e-10;
    let smo = SvrModel::fit(&xs, &ys, &params).unwrap();
    let oracle = oracles::svr_dual(&kernel, &xs, &ys, 0.05, 1.0, 50_000);
    let theta = oracle.coefficients();
    let mut full = vec![0.0; xs.len()];
    for (sv, c) in smo.support_vectors().iter().zip(smo.coefficients()) {
        let i = xs.iter().position(|x| x == sv).unwrap();
        full[i] = *c;
    }
    for (a, b) in full.iter().zip(&theta) {
        assert!((a - b).abs() < 1e-4, "{full:?} vs {theta:?}");
    }
}

#[test]
fn bp_cost_decreases_on_scaled_synthetic_series() {
    let series = synthetic_ar_series::<f64>(427, 50.0, 0.95, 0.5, 42).unwrap();
    let ds = make_windows(&series, 3).unwrap().split(0.8).unwrap();
    let train = ds.train().unwrap();
    let scaler = MinMaxScaler::fit_samples(&train).unwrap();
    let xs = scaler.transform_inputs(train.inputs);
    let ys: Vec<Vec<f64>> = scaler.transform_all(train.targets).into_iter().map(|y| vec![y]).collect();
    for seed in 0..3 {
        let mut net = BpNetwork::with_rule_of_thumb(3, seed).unwrap();
        let cfg = SgdConfig { eta: 0.01, epochs: 200, seed, ..SgdConfig::default() };
        let trace = net.train(&xs, &ys, &cfg).unwrap();
        assert_eq!(trace.costs.len(), 201);
        assert!(trace.costs[200] < trace.costs[0]);
        assert!(net.cost(&xs, &ys).unwrap() == trace.costs[200]);
    }
}

#[test]
fn bp_predictions_are_reproducible() {
    let xs: Vec<Vec<f64>> = (0..30).map(|i| vec![i as f64 / 30.0, 0.5, 1.0 - i as f64 / 30.0]).collect();
    let ys: Vec<Vec<f64>> = xs.iter().map(|x| vec![x[0] * 0.8]).collect();
    let cfg = SgdConfig { epochs: 50, batch_size: 4, seed: 11, ..SgdConfig::default() };
    let fit = || {
        let mut net = BpNetwork::with_rule_of_thumb(3, 11).unwrap();
        net.train(&xs, &ys, &cfg).unwrap();
        net
    };
    let (a, b) = (fit(), fit());
    assert_eq!(a, b);
    assert_eq!(a.predict(&[0.2, 0.5, 0.8]).unwrap(), b.predict(&[0.2, 0.5, 0.8]).unwrap());
}
