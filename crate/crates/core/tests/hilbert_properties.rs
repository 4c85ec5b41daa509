use dchoice_core::hilbert::{
    lift, measure_subsystem, partial_trace, tensor, CMatrix, Operator, StateVector, Subsystem,
    SystemLayout,
};
use dchoice_core::optics::{intensity, polarizer, ScreenConfig};
use dchoice_core::random::{random_state, random_unitary, stream};
use num_complex::Complex64;
use proptest::prelude::*;

fn layout_of(dims: &[usize]) -> SystemLayout {
    SystemLayout::new(
        dims.iter()
            .enumerate()
            .map(|(k, &d)| Subsystem::new(format!("s{k}"), d))
            .collect(),
    )
    .unwrap()
}

fn dims_strategy() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(2usize..=4, 1..=3)
}

/// Partial trace by explicit index contraction over every pair of basis states.
fn brute_partial_trace(rho: &CMatrix, dims: &[usize], keep: &[usize]) -> CMatrix {
    let n: usize = dims.iter().product();
    let digits = |mut i: usize| -> Vec<usize> {
        let mut d = vec![0; dims.len()];
        for k in (0..dims.len()).rev() {
            d[k] = i % dims[k];
            i /= dims[k];
        }
        d
    };
    let kept_dim: usize = keep.iter().map(|&k| dims[k]).product();
    let kept_index = |d: &[usize]| keep.iter().fold(0, |acc, &k| acc * dims[k] + d[k]);
    let mut out = CMatrix::zeros(kept_dim, kept_dim);
    for i in 0..n {
        for j in 0..n {
            let (di, dj) = (digits(i), digits(j));
            let traced_equal = (0..dims.len())
                .filter(|k| !keep.contains(k))
                .all(|k| di[k] == dj[k]);
            if traced_equal {
                out[(kept_index(&di), kept_index(&dj))] += rho[(i, j)];
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partial_trace_matches_index_contraction(dims in dims_strategy(), seed in any::<u64>(), mask in 1u8..8) {
        let layout = layout_of(&dims);
        prop_assume!(layout.dim() <= 16 || dims.len() < 3);
        let keep: Vec<usize> = (0..dims.len()).filter(|k| mask & (1 << k) != 0).collect();
        prop_assume!(!keep.is_empty());
        let psi = random_state(layout.clone(), &mut stream(seed, 0)).unwrap();
        let rho = psi.density().unwrap();
        let labels: Vec<String> = keep.iter().map(|k| format!("s{k}")).collect();
        let ours = partial_trace(&rho, &labels).unwrap();
        let oracle = brute_partial_trace(rho.matrix(), &dims, &keep);
        let diff = (ours.matrix() - &oracle).iter().map(|z| z.norm()).fold(0.0, f64::max);
        prop_assert!(diff <= 1e-12, "diff {diff}");
    }

    #[test]
    fn reduced_states_are_densities(dims in dims_strategy(), seed in any::<u64>()) {
        let layout = layout_of(&dims);
        let psi = random_state(layout, &mut stream(seed, 1)).unwrap();
        let rho = partial_trace(&psi.density().unwrap(), &["s0"]).unwrap();
        prop_assert!((rho.trace().re - 1.0).abs() <= 1e-12);
        prop_assert!(rho.trace().im.abs() <= 1e-12);
        prop_assert!(rho.eigenvalues().iter().all(|&l| l >= -1e-12));
        prop_assert!(rho.validate(1e-10).is_ok());
    }

    #[test]
    fn tracing_a_product_recovers_each_factor(da in 2usize..=4, db in 2usize..=4, seed in any::<u64>()) {
        let la = SystemLayout::single(Subsystem::new("a", da)).unwrap();
        let lb = SystemLayout::single(Subsystem::new("b", db)).unwrap();
        let a = random_state(la, &mut stream(seed, 2)).unwrap();
        let b = random_state(lb, &mut stream(seed, 3)).unwrap();
        let rho = tensor(&a, &b).unwrap().density().unwrap();
        let ra = partial_trace(&rho, &["a"]).unwrap();
        let rb = partial_trace(&rho, &["b"]).unwrap();
        prop_assert!(ra.max_abs_diff(&a.density().unwrap()).unwrap() <= 1e-12);
        prop_assert!(rb.max_abs_diff(&b.density().unwrap()).unwrap() <= 1e-12);
    }

    #[test]
    fn measurement_probabilities_sum_to_one(dims in dims_strategy(), seed in any::<u64>()) {
        let layout = layout_of(&dims);
        let psi = random_state(layout, &mut stream(seed, 4)).unwrap();
        for label in ["s0"] {
            let outcomes = measure_subsystem(&psi, label).unwrap();
            let total: f64 = outcomes.iter().map(|o| o.probability).sum();
            prop_assert!((total - 1.0).abs() <= 1e-12);
            for o in outcomes.iter().filter(|o| o.post_state.is_some()) {
                prop_assert!((o.post_state.as_ref().unwrap().norm() - 1.0).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn lift_respects_composition(seed in any::<u64>()) {
        let layout = layout_of(&[2, 3, 2]);
        let sub = layout.select(&["s2", "s0"]).unwrap();
        let mut rng = stream(seed, 5);
        let u = random_unitary(sub.clone(), &mut rng).unwrap();
        let v = random_unitary(sub, &mut rng).unwrap();
        let lifted_product = lift(&u.compose(&v).unwrap(), &["s2", "s0"], &layout).unwrap();
        let product_of_lifts = lift(&u, &["s2", "s0"], &layout).unwrap()
            .compose(&lift(&v, &["s2", "s0"], &layout).unwrap()).unwrap();
        prop_assert!(lifted_product.max_abs_diff(&product_of_lifts).unwrap() <= 1e-12);
        prop_assert!(lifted_product.is_unitary(1e-10));
    }

    #[test]
    fn distinct_basis_states_are_orthogonal(dims in dims_strategy(), i in 0usize..64, j in 0usize..64) {
        let layout = layout_of(&dims);
        let n = layout.dim();
        let (i, j) = (i % n, j % n);
        let bi: Vec<&str> = layout.basis_labels(i);
        let bj: Vec<&str> = layout.basis_labels(j);
        let a = StateVector::basis(layout.clone(), &bi).unwrap();
        let b = StateVector::basis(layout.clone(), &bj).unwrap();
        let ip = dchoice_core::hilbert::inner(&a, &b).unwrap();
        let want = if i == j { 1.0 } else { 0.0 };
        prop_assert!((ip - Complex64::new(want, 0.0)).norm() <= 1e-15);
    }

    #[test]
    fn polarizer_is_a_projector_at_every_angle(theta in -10.0f64..10.0) {
        let p = polarizer(theta);
        prop_assert!(p.is_projector(1e-12));
        prop_assert!((p.matrix().trace().re - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn marker_unitaries_do_not_change_the_screen(seed in any::<u64>()) {
        // Any unitary confined to the marker leaves the reduced path state and
        // hence the screen intensity unchanged.
        let layout = SystemLayout::new(vec![
            Subsystem::with_basis("marker", &["0", "1"]),
            Subsystem::with_basis("path", &["u", "d"]),
        ]).unwrap();
        let mut rng = stream(seed, 6);
        let psi = random_state(layout.clone(), &mut rng).unwrap();
        let u = random_unitary(layout.select(&["marker"]).unwrap(), &mut rng).unwrap();
        let cfg = ScreenConfig { points: 81, ..ScreenConfig::default() };
        let before = intensity(&psi, "path", &cfg).unwrap();
        let after = intensity(&psi.apply_on(&u, &["marker"]).unwrap(), "path", &cfg).unwrap();
        prop_assert!(before.max_abs_diff(&after) <= 1e-12);
    }
}

#[test]
fn identity_lift_is_identity() {
    let layout = layout_of(&[2, 2, 3]);
    let id = Operator::identity(layout.select(&["s1"]).unwrap());
    let lifted = lift(&id, &["s1"], &layout).unwrap();
    assert!(lifted.max_abs_diff(&Operator::identity(layout)).unwrap() < 1e-15);
}
