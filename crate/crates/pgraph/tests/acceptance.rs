//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

mod common;

use std::fs;
use std::process::ExitCode;
use std::time::Instant;

use pgraph_core::criticality::{
    assess, capacity, certified_hardy_witness, harnack_constant, harnack_verify, liouville_check, null_sequence_search,
    CapacityOptions, CapacityStatus, Classification, LiouvilleConstants, LiouvilleVerdict, TrendCriteria,
};
use pgraph_core::energy::{corollary_bounds_check, energy, gsr_check, picone_residual, CorollaryConstants};
use pgraph_core::inequalities::{
    constant_cp, ineq1_grid, ineq34_grid, ineq5_tightness, lindqvist_grid, quadratic_identity_defect, scan_equivalence,
    ScanGrid, ScanKernel,
};
use pgraph_core::models::{
    gsr_display_check, hardy_u_function, int_line, int_line_id, nat_line, ExhaustibleModel, ModelFamily,
};
use pgraph_core::operators::{greens_sides, schroedinger_apply};
use pgraph_core::random::{
    self, random_connected_subset, random_graph, random_positive, random_test_function, RandomGraphSpec, SeededRng,
};
use pgraph_core::{PExponent, VertexSubset, WeightedGraph};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn p(v: f64) -> PExponent {
    PExponent::new(v).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: pgraph_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// Random graphs with `n <= 50`, `b in (0,1]`, `m in (0,2]`, `c in [-1,1]`.
fn battery(seed: u64, boundary: f64) -> (WeightedGraph, SeededRng) {
    let mut rng = random::rng(seed);
    let spec = RandomGraphSpec { boundary_probability: boundary, ..RandomGraphSpec::default() };
    let g = random_graph(&spec, &mut rng).unwrap();
    (g, rng)
}

fn quadratic_exactness() -> Outcome {
    let mut worst = 0.0f64;
    for seed in 0..200 {
        let (g, mut rng) = battery(seed, 0.0);
        let u = random_positive(g.vertex_count(), 0.1, 2.0, &mut rng);
        let phi = random_test_function(g.interior(), &mut rng);
        let r = lib(gsr_check(&g, &u, &phi, p(2.0)))?;
        let scale = 1.0 + lib(energy(&g, &mul(&u, &phi), p(2.0)))?.total.abs();
        let err = (r.lhs - r.rhs).abs() / scale;
        worst = worst.max(err);
        ensure(err <= 1e-9, || format!("seed {seed}: relative error {err:e}"))?;
    }
    Ok(format!("200 graphs, max relative error {worst:.2e}"))
}

fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x * y).collect()
}

fn greens_formula() -> Outcome {
    let mut worst = 0.0f64;
    let mut with_boundary = 0;
    for pv in [1.0, 1.5, 2.0, 2.5, 3.0, 4.0] {
        for seed in 0..200 {
            let (g, mut rng) = battery(1000 + seed, 0.2);
            let f = random_positive(g.vertex_count(), -2.0, 2.0, &mut rng);
            let v = random_connected_subset(&g, g.interior(), 12, &mut rng);
            let phi = random_positive(g.vertex_count(), -1.0, 1.0, &mut rng);
            let s = lib(greens_sides(&g, &f, &phi, &v, p(pv)))?;
            if !g.boundary(&v).is_empty() {
                with_boundary += 1;
            }
            let err = s.residual() / (1.0 + s.lhs.abs());
            worst = worst.max(err);
            ensure(err <= 1e-10, || format!("p={pv} seed {seed}: relative residual {err:e}"))?;
        }
    }
    ensure(with_boundary > 600, || format!("only {with_boundary} windows had a boundary"))?;
    Ok(format!("1200 windows ({with_boundary} with boundary), max relative residual {worst:.2e}"))
}

fn picone() -> Outcome {
    let mut min = f64::INFINITY;
    for pv in [1.5, 3.0] {
        for seed in 0..1000 {
            let (g, mut rng) = battery(5000 + seed, 0.2);
            let u = random_positive(g.vertex_count(), 0.05, 3.0, &mut rng);
            let phi = random_test_function(g.interior(), &mut rng);
            let r = lib(picone_residual(&g, &u, &phi, p(pv)))?;
            min = min.min(r);
            ensure(r >= -1e-10, || format!("p={pv} seed {seed}: residual {r:e}"))?;
        }
    }
    Ok(format!("2000 instances, min residual {min:.3e}"))
}

fn inequality_grids() -> Outcome {
    let grid = ScanGrid::default();
    let mut notes = Vec::new();
    for pv in [1.1, 1.5, 2.0, 2.5, 3.0, 5.0] {
        let r = lib(scan_equivalence(ScanKernel::Ineq2, p(pv), &grid))?;
        ensure(r.inf_ratio > 0.0 && r.sup_ratio.is_finite(), || {
            format!("p={pv}: ratio range [{}, {}]", r.inf_ratio, r.sup_ratio)
        })?;
        if pv == 2.0 {
            let d = lib(quadratic_identity_defect(&grid))?;
            ensure(d.ulps <= 8.0, || {
                format!("p=2 sides differ by {:.1} ulps of the term scale at {:?}", d.ulps, d.worst)
            })?;
            notes.push(format!("p=2 identity within {:.1} ulps", d.ulps));
        }
        notes.push(format!("p={pv}:[{:.3},{:.3}]", r.inf_ratio, r.sup_ratio));
    }

    let upper = lib(ineq1_grid(2.0, &grid))?;
    let lower = lib(ineq1_grid(0.5, &grid))?;
    ensure(upper.upper_holds && lower.lower_holds, || "ineq1 fails at C = 2 or C = 1/2".into())?;
    let tight_upper = lib(ineq1_grid(1.99, &grid))?;
    let tight_lower = lib(ineq1_grid(0.51, &grid))?;
    let (wu, wl) = match (tight_upper.upper_witness, tight_lower.lower_witness) {
        (Some(a), Some(b)) if !tight_upper.upper_holds && !tight_lower.lower_holds => (a, b),
        _ => return Err("ineq1 does not fail at C = 1.99 and C = 0.51".into()),
    };
    notes.push(format!("ineq1 witnesses ({}, {}) and ({}, {})", wu.a, wu.t, wl.a, wl.t));

    for pv in [1.1, 1.5, 2.0, 2.5, 3.0, 5.0] {
        let r = lib(ineq34_grid(p(pv), &grid))?;
        ensure(r.holds, || format!("ineq34 p={pv}: {} failures, first {:?}", r.failures, r.first_failure))?;
        let t = lib(ineq5_tightness(pv))?;
        ensure(t.tight, || format!("ineq5 p={pv} not tight: {t:?}"))?;
    }
    let mut lind = f64::INFINITY;
    for pv in [2.0, 2.5, 3.0, 5.0] {
        let r = lib(lindqvist_grid(p(pv), 5.0, 0.01))?;
        lind = lind.min(r.min_slack);
        ensure(r.min_slack >= -1e-12, || format!("lindqvist p={pv}: slack {:e}", r.min_slack))?;
    }
    notes.push(format!("lindqvist min slack {lind:.2e}"));
    Ok(notes.join("; "))
}

fn corollary_constants() -> Outcome {
    let c2 = lib(constant_cp(2.0))?;
    ensure((c2 - 0.5).abs() <= 1e-12, || format!("c_2 = {c2}"))?;
    for pv in [2.5, 3.0, 4.0] {
        let c = lib(constant_cp(pv))?;
        ensure(c > 0.0 && c <= 0.5, || format!("c_{pv} = {c}"))?;
    }
    let mut checked = 0;
    for pv in [2.5, 3.0, 1.5] {
        let constants = lib(CorollaryConstants::for_exponent(p(pv)))?;
        let cp = if pv >= 2.0 { lib(constant_cp(pv))? } else { 0.0 };
        for seed in 0..200 {
            let (g, mut rng) = battery(9000 + seed, 0.0);
            let u = random_positive(g.vertex_count(), 0.1, 2.0, &mut rng);
            let phi = random_test_function(g.interior(), &mut rng);
            let r = lib(corollary_bounds_check(&g, &u, &phi, p(pv), &constants))?;
            ensure(r.holds, || format!("p={pv} seed {seed}: {r:?}"))?;
            if pv >= 2.0 {
                let tol = 1e-10 * (1.0 + r.lhs.abs());
                ensure(r.lhs + tol >= cp * r.h_u1, || format!("p={pv} seed {seed}: lhs {} < c_p h_u1", r.lhs))?;
            } else {
                ensure(r.upper.is_some_and(|b| b.holds), || format!("p={pv} seed {seed}: no upper bound"))?;
            }
            checked += 1;
        }
    }
    Ok(format!("c_2 = {c2}, {checked} battery checks"))
}

fn int_line_capacity() -> Outcome {
    let mut worst = 0.0f64;
    let opts = CapacityOptions::default();
    let sizes = [4usize, 8, 16, 32, 64];
    for pv in [1.5, 2.0, 3.0] {
        for &n in &sizes {
            let g = lib(int_line(n))?;
            let r = lib(capacity(&g, int_line_id(0), g.interior(), p(pv), &opts))?;
            let exact = 2.0 * (n as f64).powf(1.0 - pv);
            let err = (r.value - exact).abs();
            worst = worst.max(err);
            ensure(err <= 1e-6, || format!("p={pv} n={n}: capacity {} vs {exact}", r.value))?;
        }
        let model = ExhaustibleModel::new(ModelFamily::IntLine);
        let ev = lib(null_sequence_search(&model, model.root(), 1.0, p(pv), &sizes, &opts))?;
        let energies: Vec<f64> = ev.steps.iter().map(|s| s.energy).collect();
        ensure(energies.windows(2).all(|w| w[1] < w[0]), || format!("p={pv}: energies not decreasing {energies:?}"))?;
        let v = assess(&ev, &TrendCriteria::default(), None, 1.0);
        ensure(v.classification == Classification::CriticalTrend, || {
            format!("p={pv}: verdict {:?}", v.classification)
        })?;
    }
    Ok(format!("15 capacities, max error {worst:.2e}, verdict critical_trend"))
}

fn half_line_subcritical() -> Outcome {
    let opts = CapacityOptions::default();
    let mut notes = Vec::new();
    for pv in [1.5, 2.0, 3.0] {
        let g = lib(nat_line(64))?;
        let u = lib(hardy_u_function(65, p(pv)))?;
        let cert = lib(certified_hardy_witness(&g, &u, g.interior(), p(pv), 1000, &mut random::rng(77)))?;
        ensure(g.interior().iter().all(|x| cert.w[x] > 0.0), || format!("p={pv}: w not positive on the interior"))?;
        let ver = cert.verification.clone().ok_or("no verification")?;
        ensure(ver.holds && ver.min_slack >= -1e-10, || format!("p={pv}: min slack {:e}", ver.min_slack))?;

        let floor = cert.w[1] * g.measure(1);
        let mut caps = Vec::new();
        for r in [8usize, 16, 32] {
            let w = lib(nat_line(r))?;
            let c = lib(capacity(&w, 1, w.interior(), p(pv), &opts))?;
            ensure(c.status == CapacityStatus::Certified, || format!("p={pv} r={r}: status {:?}", c.status))?;
            ensure(c.value >= floor, || format!("p={pv} r={r}: capacity {} below {floor}", c.value))?;
            caps.push(c.value);
        }
        let model = ExhaustibleModel::new(ModelFamily::NatLine);
        let ev = lib(null_sequence_search(&model, 1, 1.0, p(pv), &[8, 16, 32], &opts))?;
        let v = assess(&ev, &TrendCriteria::default(), Some(&cert), 1.0);
        ensure(v.classification != Classification::CriticalTrend, || {
            format!("p={pv}: critical trend on the half-line")
        })?;
        notes.push(format!("p={pv}: floor {floor:.4}, capacities {:.4}..{:.4}", caps[2], caps[0]));
    }
    Ok(notes.join("; "))
}

fn display_check() -> Outcome {
    let radius = 40;
    let g = lib(nat_line(radius))?;
    let mut worst = 0.0f64;
    for seed in 0..100 {
        let phi = random_test_function(g.interior(), &mut random::rng(seed));
        let d = lib(gsr_display_check(radius, p(2.0), &phi))?;
        let ratio = d.ratio.ok_or_else(|| format!("seed {seed}: degenerate"))?;
        worst = worst.max((ratio - 1.0).abs());
        ensure((ratio - 1.0).abs() <= 1e-9, || format!("seed {seed}: ratio {ratio}"))?;
    }
    let mut notes = vec![format!("p=2 max deviation {worst:.2e}")];
    for pv in [3.0, 1.5] {
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for seed in 0..100 {
            let phi = random_test_function(g.interior(), &mut random::rng(seed));
            let d = lib(gsr_display_check(radius, p(pv), &phi))?;
            let ratio = d.ratio.ok_or_else(|| format!("p={pv} seed {seed}: degenerate"))?;
            lo = lo.min(ratio);
            hi = hi.max(ratio);
        }
        ensure(lo > 0.0 && hi.is_finite(), || format!("p={pv}: ratios in [{lo}, {hi}]"))?;
        notes.push(format!("p={pv} ratios in [{lo:.4}, {hi:.4}]"));
    }
    Ok(notes.join("; "))
}

fn harnack() -> Outcome {
    let mut max_c = 1.0f64;
    for seed in 0..100 {
        let (g, mut rng) = battery(20_000 + seed, 0.1);
        let pv = [1.5, 2.0, 3.0][seed as usize % 3];
        let n = g.vertex_count();
        let k = random_connected_subset(&g, g.interior(), 12, &mut rng);
        let u = random_positive(n, 0.1, 2.0, &mut rng);
        let hu = lib(schroedinger_apply(&g, &u, p(pv)))?;
        let mut f = vec![0.0; n];
        for x in k.iter() {
            f[x] = hu.get(x).ok_or("missing Hu")? / u[x].powf(pv - 1.0);
        }
        let c = lib(harnack_constant(&g, &k, &f, p(pv), false))?;
        let v = lib(harnack_verify(&g, &k, &f, &u, p(pv)))?;
        ensure(v.holds, || format!("seed {seed}: ratio {:?} above C = {}", v.ratio, c.constant))?;
        max_c = max_c.max(c.constant);

        let lower: Vec<f64> = f.iter().map(|&x| x - random_positive(1, 0.0, 1.0, &mut rng)[0]).collect();
        let cl = lib(harnack_constant(&g, &k, &lower, p(pv), false))?;
        ensure(cl.constant >= c.constant * (1.0 - 1e-12), || {
            format!("seed {seed}: C(f - d) = {} < C(f) = {}", cl.constant, c.constant)
        })?;

        let mut vanishing = u.clone();
        let zero: VertexSubset = k.union(&g.boundary(&k));
        for x in zero.iter() {
            vanishing[x] = 0.0;
        }
        let z = lib(harnack_verify(&g, &k, &f, &vanishing, p(pv)))?;
        ensure(z.zero_propagation == Some(true) && z.holds, || format!("seed {seed}: zero propagation {z:?}"))?;
    }
    let g = lib(nat_line(6))?;
    let pair = lib(VertexSubset::from_ids(7, [1, 2]))?;
    let hand = lib(harnack_constant(&g, &pair, &[0.0; 7], p(2.0), false))?.constant;
    ensure((hand - 3.0).abs() <= 1e-12, || format!("half-line pair constant {hand}"))?;
    Ok(format!("100 sets, max C {max_c:.3}; half-line pair C = {hand}"))
}

fn liouville() -> Outcome {
    let radii = [4usize, 8, 16, 32, 64];
    let opts = CapacityOptions::default();
    let z = ExhaustibleModel::new(ModelFamily::IntLine);
    let one = |_: [i64; 2]| 1.0;
    let mut notes = Vec::new();
    for (name, scale) in [("self", 1.0), ("half", 0.5)] {
        let other = z.clone().with_edge_scale(scale);
        let r =
            lib(liouville_check(&z, &other, &one, &one, None, &LiouvilleConstants::default(), p(2.0), &radii, &opts))?;
        ensure(r.verdict == LiouvilleVerdict::Critical, || format!("{name}: verdict {:?}", r.verdict))?;
        let last = *r.transported_energies.last().unwrap();
        ensure(r.transported_trend.critical && last < 0.1, || {
            format!("{name}: transported energies {:?}", r.transported_energies)
        })?;
        notes.push(format!("{name}: final energy {last:.4}"));
    }
    let heavy = z.clone().with_edge_scale(4.0);
    let r = lib(liouville_check(&z, &heavy, &one, &one, None, &LiouvilleConstants::default(), p(2.0), &radii, &opts))?;
    match &r.verdict {
        LiouvilleVerdict::HypothesesNotMet { failing } if failing == &["c".to_string()] => {}
        v => return Err(format!("weight comparison violation reported as {v:?}")),
    }
    notes.push("b~ = 4b reported as failing (c)".into());
    Ok(notes.join("; "))
}

fn cli() -> Outcome {
    let args = [
        "picone", "--model", "grid2d", "--radius", "5", "--u", "random", "--p", "3", "--seed", "42", "--trials", "200",
    ];
    let a = common::run_with_env(&args, &[("PGRAPH_THREADS", "1")]);
    let b = common::run_with_env(&args, &[("PGRAPH_THREADS", "8")]);
    ensure(a.code == 0, || format!("picone exited {}: {}", a.code, a.stderr))?;
    ensure(a.stdout == b.stdout, || "picone output differs between runs".into())?;
    let args = ["null-seq", "--model", "int_line", "--radius", "32", "--p", "1.5", "--u", "const:1", "--seed", "9"];
    ensure(common::run(&args).stdout == common::run(&args).stdout, || "null-seq output differs between runs".into())?;

    let dir = std::env::temp_dir().join(format!("pgraph-acceptance-{}", std::process::id()));
    fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let file = dir.join("graph.json");
    fs::write(&file, common::SMALL_GRAPH).map_err(|e| e.to_string())?;
    let seen = common::collect_ops(&file);
    let _ = fs::remove_dir_all(&dir);
    let count = common::check_registry(&seen?)?;
    Ok(format!("byte-identical reruns; {count} operations reachable"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("quadratic ground state representation is exact", quadratic_exactness),
        ("Green's formula residual", greens_formula),
        ("Picone residual is nonnegative", picone),
        ("elementary inequality grids", inequality_grids),
        ("c_p and simplified-energy bounds", corollary_constants),
        ("Z-line capacity and critical trend", int_line_capacity),
        ("N-line Hardy weight and capacity floor", half_line_subcritical),
        ("half-line display identity", display_check),
        ("Harnack constant", harnack),
        ("Liouville comparison", liouville),
        ("CLI determinism and registry coverage", cli),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name} ({detail}) [{secs:.2}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name} ({detail}) [{secs:.2}s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
