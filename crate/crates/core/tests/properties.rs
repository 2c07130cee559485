use pgraph_core::criticality::{capacity, hardy_witness, harnack_constant, CapacityOptions};
use pgraph_core::energy::{
    bracket, energy, gsr_check, picone_residual, simplified_energy, simplified_energy_1, simplified_energy_2,
    simplified_energy_3,
};
use pgraph_core::models::{hardy_u_function, int_line, nat_line, ExhaustibleModel, ModelFamily};
use pgraph_core::operators::{classify, greens_sides, phi_p, schroedinger_apply, HarmonicityKind};
use pgraph_core::random::{self, random_connected_subset, random_graph, random_positive, random_test_function};
use pgraph_core::{GraphBuilder, PExponent, VertexSubset, WeightedGraph};
use proptest::prelude::*;

fn p(v: f64) -> PExponent {
    PExponent::new(v).unwrap()
}

fn exponents() -> impl Strategy<Value = f64> {
    prop::sample::select(vec![1.5, 2.0, 2.5, 3.0, 4.0])
}

fn graph(seed: u64, boundary: f64) -> WeightedGraph {
    let spec = random::RandomGraphSpec { max_vertices: 30, boundary_probability: boundary, ..Default::default() };
    random_graph(&spec, &mut random::rng(seed)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn weights_are_symmetric(seed in any::<u64>()) {
        let g = graph(seed, 0.2);
        for x in 0..g.vertex_count() {
            for (y, b) in g.neighbors(x) {
                prop_assert_eq!(g.weight(y, x), b);
            }
        }
    }

    #[test]
    fn boundary_is_disjoint(seed in any::<u64>()) {
        let g = graph(seed, 0.0);
        let mut rng = random::rng(seed ^ 1);
        let v = random_connected_subset(&g, &VertexSubset::full(g.vertex_count()), 8, &mut rng);
        prop_assert!(g.boundary(&v).intersection(&v).is_empty());
    }

    #[test]
    fn connectivity_ignores_labels(seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let g = graph(seed, 0.0);
        let n = g.vertex_count();
        let mut rng = random::rng(seed ^ 2);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let mut b = GraphBuilder::new(n);
        for e in g.edges() {
            b.add_edge(perm[e.x], perm[e.y], e.b);
        }
        let h = b.build().unwrap();
        let v = random_connected_subset(&g, &VertexSubset::full(n), 10, &mut rng);
        let mut w = v.clone();
        w.insert(rand::Rng::gen_range(&mut rng, 0..n));
        for s in [&v, &w] {
            let image = VertexSubset::from_ids(n, s.iter().map(|x| perm[x])).unwrap();
            prop_assert_eq!(g.is_connected(s), h.is_connected(&image));
        }
    }

    #[test]
    fn phi_p_is_odd_and_increasing(pv in 1.01f64..6.0, t in -50.0f64..50.0, d in 1e-6f64..5.0) {
        let q = p(pv);
        prop_assert_eq!(phi_p(-t, q), -phi_p(t, q));
        prop_assert!(phi_p(t + d, q) > phi_p(t, q));
    }

    #[test]
    fn greens_formula(seed in any::<u64>(), pv in prop::sample::select(vec![1.0, 1.5, 2.0, 2.5, 3.0, 4.0])) {
        let g = graph(seed, 0.3);
        let mut rng = random::rng(seed ^ 3);
        let f: Vec<f64> = random_positive(g.vertex_count(), -2.0, 2.0, &mut rng);
        let v = random_connected_subset(&g, g.interior(), 12, &mut rng);
        let phi = random_test_function(&VertexSubset::full(g.vertex_count()), &mut rng);
        let s = greens_sides(&g, &f, &phi, &v, p(pv)).unwrap();
        prop_assert!(s.residual() <= 1e-10 * (1.0 + s.lhs.abs()));
    }

    #[test]
    fn energy_matches_operator_pairing(seed in any::<u64>(), pv in exponents()) {
        let g = graph(seed, 0.3);
        let mut rng = random::rng(seed ^ 4);
        let phi = random_test_function(g.interior(), &mut rng);
        let hphi = schroedinger_apply(&g, &phi, p(pv)).unwrap();
        let pairing: f64 = hphi.defined().map(|(x, v)| v * phi[x] * g.measure(x)).sum();
        let h = energy(&g, &phi, p(pv)).unwrap().total;
        prop_assert!((h - pairing).abs() <= 1e-10 * (1.0 + h.abs()));
    }

    #[test]
    fn absolute_value_lowers_energy(seed in any::<u64>(), pv in exponents()) {
        let g = graph(seed, 0.0);
        let mut rng = random::rng(seed ^ 5);
        let phi = random_test_function(g.interior(), &mut rng);
        let abs_phi: Vec<f64> = phi.iter().map(|v| v.abs()).collect();
        let a = energy(&g, &abs_phi, p(pv)).unwrap();
        let b = energy(&g, &phi, p(pv)).unwrap();
        prop_assert!(a.gradient_part <= b.gradient_part + 1e-12);
        prop_assert_eq!(a.potential_part, b.potential_part);
    }

    #[test]
    fn homogeneity(seed in any::<u64>(), pv in exponents(), lambda in -3.0f64..3.0) {
        let g = graph(seed, 0.0);
        let mut rng = random::rng(seed ^ 6);
        let phi = random_test_function(g.interior(), &mut rng);
        let u = random_positive(g.vertex_count(), 0.1, 2.0, &mut rng);
        let scaled: Vec<f64> = phi.iter().map(|v| lambda * v).collect();
        let k = lambda.abs().powf(pv);
        let (h0, h1) = (energy(&g, &phi, p(pv)).unwrap().total, energy(&g, &scaled, p(pv)).unwrap().total);
        prop_assert!((h1 - k * h0).abs() <= 1e-9 * (1.0 + h1.abs()));
        let (s0, s1) = (simplified_energy_1(&g, &u, &phi, p(pv)).unwrap(), simplified_energy_1(&g, &u, &scaled, p(pv)).unwrap());
        prop_assert!((s1 - k * s0).abs() <= 1e-9 * (1.0 + s1.abs()));
        let (r0, r1) = (gsr_check(&g, &u, &phi, p(pv)).unwrap(), gsr_check(&g, &u, &scaled, p(pv)).unwrap());
        if let (Some(a), Some(b)) = (r0.ratio, r1.ratio) {
            prop_assert!((a - b).abs() <= 1e-6 * a.abs().max(1.0));
        }
    }

    #[test]
    fn quadratic_ground_state_is_exact(seed in any::<u64>()) {
        let g = graph(seed, 0.2);
        let mut rng = random::rng(seed ^ 7);
        let u = random_positive(g.vertex_count(), 0.1, 2.0, &mut rng);
        let phi = random_test_function(g.interior(), &mut rng);
        let r = gsr_check(&g, &u, &phi, p(2.0)).unwrap();
        prop_assert!((r.lhs - r.rhs).abs() <= 1e-9 * (1.0 + r.lhs.abs()));
    }

    #[test]
    fn picone_is_nonnegative(seed in any::<u64>(), pv in exponents()) {
        let g = graph(seed, 0.2);
        let mut rng = random::rng(seed ^ 8);
        let u = random_positive(g.vertex_count(), 0.1, 2.0, &mut rng);
        let phi = random_test_function(g.interior(), &mut rng);
        prop_assert!(picone_residual(&g, &u, &phi, p(pv)).unwrap() >= -1e-10);
    }

    #[test]
    fn vanishing_u_kills_edges(pv in exponents(), seed in any::<u64>()) {
        let g = GraphBuilder::new(3).edge(0, 1, 1.0).edge(1, 2, 0.5).build().unwrap();
        let mut rng = random::rng(seed);
        let phi = random_test_function(g.interior(), &mut rng);
        let u = [1.0, 0.0, 2.0];
        let q = p(pv);
        prop_assert_eq!(simplified_energy(&g, &u, &phi, q).unwrap(), 0.0);
        prop_assert_eq!(simplified_energy_1(&g, &u, &phi, q).unwrap(), 0.0);
        prop_assert_eq!(simplified_energy_3(&g, &u, &phi, q).unwrap(), 0.0);
        if pv >= 2.0 {
            prop_assert_eq!(simplified_energy_2(&g, &u, &phi, q).unwrap(), 0.0);
        }
    }

    #[test]
    fn harnack_constant_at_least_one(seed in any::<u64>()) {
        let g = graph(seed, 0.2);
        let mut rng = random::rng(seed ^ 9);
        let k = random_connected_subset(&g, g.interior(), 6, &mut rng);
        let f: Vec<f64> = (0..g.vertex_count())
            .map(|x| (g.degree(x).unwrap() + g.potential(x)) / g.measure(x) - 1.0)
            .collect();
        let r = harnack_constant(&g, &k, &f, p(2.0), false).unwrap();
        prop_assert!(r.constant >= 1.0);
        prop_assert_eq!(r.constant == 1.0, k.count() == 1);
    }
}

#[test]
fn pairing_of_bracket_and_operator() {
    let g = nat_line(10).unwrap();
    let mut rng = random::rng(11);
    let phi = random_test_function(g.interior(), &mut rng);
    let hphi: Vec<f64> = (0..11).map(|x| schroedinger_apply(&g, &phi, p(3.0)).unwrap().get(x).unwrap_or(0.0)).collect();
    let pairing = bracket(&g, &hphi, &phi).unwrap();
    assert!((pairing - energy(&g, &phi, p(3.0)).unwrap().total).abs() < 1e-12);
}

#[test]
fn linear_functions_are_harmonic_on_int_line() {
    let w = ExhaustibleModel::new(ModelFamily::IntLine).window(10).unwrap();
    let f: Vec<f64> = w.coords.iter().map(|c| 3.0 * c[0] as f64 - 2.0).collect();
    for pv in [1.2, 1.5, 2.0, 3.0, 5.0] {
        assert_eq!(classify(&w.graph, &f, w.graph.interior(), p(pv), None).unwrap().kind, HarmonicityKind::Harmonic);
    }
}

#[test]
fn hardy_u_is_superharmonic() {
    for pv in [1.5, 2.0, 3.0] {
        for r in [4, 8, 32] {
            let g = nat_line(r).unwrap();
            let u = hardy_u_function(r + 1, p(pv)).unwrap();
            let class = classify(&g, &u, g.interior(), p(pv), None).unwrap();
            assert!(class.is_supersolution(), "p={pv} r={r}");
            let cert = hardy_witness(&g, &u, g.interior(), p(pv)).unwrap();
            assert!(cert.w.iter().all(|&w| w >= -1e-12));
        }
    }
}

#[test]
fn energies_agree_across_nested_windows() {
    let model = ExhaustibleModel::new(ModelFamily::Grid2d);
    let small = model.window(2).unwrap();
    let mut rng = random::rng(5);
    let phi = random_test_function(small.graph.interior(), &mut rng);
    let reference = energy(&small.graph, &phi, p(2.5)).unwrap().total;
    for r in [3, 5] {
        let big = model.window(r).unwrap();
        let ext = small.extend_by_zero(&phi, &big).unwrap();
        assert!((energy(&big.graph, &ext, p(2.5)).unwrap().total - reference).abs() < 1e-12);
    }
}

#[test]
fn capacity_is_antitone_and_homogeneous() {
    let mut last = f64::INFINITY;
    for r in [3, 6, 12] {
        let g = int_line(r).unwrap();
        let c = capacity(&g, 0, g.interior(), p(3.0), &CapacityOptions::default()).unwrap();
        assert!((c.value - energy(&g, &c.minimizer, p(3.0)).unwrap().total).abs() <= 1e-12 * c.value);
        assert!(c.value <= last);
        last = c.value;
        let twice = capacity(&g, 0, g.interior(), p(3.0), &CapacityOptions { pin: 2.0, ..Default::default() }).unwrap();
        assert!((twice.value - 8.0 * c.value).abs() < 1e-8);
    }
}
