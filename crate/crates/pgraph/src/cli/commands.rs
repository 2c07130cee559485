use pgraph_core::criticality::{
    assess, capacity, certified_hardy_witness, ground_state_trend, gsr_criticality_transfer, harnack_constant,
    harnack_verify, liouville_check, null_sequence_search, proper_subset_check, CapacityOptions, CapacityStatus,
    Classification, LiouvilleConstants, TrendCriteria,
};
use pgraph_core::energy::{
    bracket, corollary_bounds_check, energy_with_terms, gsr_check, picone_residual, simplified_energy,
    simplified_energy_1, simplified_energy_2, simplified_energy_3, CorollaryConstants,
};
use pgraph_core::inequalities::{
    constant_cp, ineq1_check, ineq1_grid, ineq2_sides, ineq34_check, ineq34_grid, ineq5_check, ineq5_tightness,
    lindqvist_check, lindqvist_grid, quadratic_identity_defect, scan_equivalence, InequalityPoint, ScanGrid,
    ScanKernel,
};
use pgraph_core::models::{
    alpha_seq, complete, grid2d, gsr_display_check, hardy_u, int_line, nat_line, star, weighted_line, ModelFamily,
};
use pgraph_core::operators::{
    classify, gradient, greens_residual, greens_sides, p_laplacian, phi_p, schroedinger_apply,
};
use pgraph_core::random::random_test_function;
use pgraph_core::{PExponent, VertexSubset, WeightedGraph};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::args::*;
use super::input::{model_of, parse_p, radii, resolve_graph, seeded, stream, superlinear, FunctionSpec, Input, Role};
use super::CliError;
use crate::report::{Report, Table};

fn lib<T>(r: pgraph_core::Result<T>) -> Result<T, CliError> {
    r.map_err(CliError::Library)
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("results serialize")
}

fn optimizer(o: &OptimizerArgs, seed: u64, pin: f64) -> CapacityOptions {
    CapacityOptions {
        pin,
        max_iter: o.max_iter,
        grad_tol: o.grad_tol,
        restarts: o.restarts,
        seed,
        ..CapacityOptions::default()
    }
}

fn labels_of(inp: &Input, ids: impl IntoIterator<Item = usize>) -> Vec<String> {
    ids.into_iter().map(|x| inp.labels[x].clone()).collect()
}

fn interior_values(g: &WeightedGraph, f: &[f64], p: PExponent) -> Result<Vec<f64>, CliError> {
    let hf = lib(schroedinger_apply(g, f, p))?;
    Ok((0..g.vertex_count()).map(|x| hf.get(x).unwrap_or(0.0)).collect())
}

pub fn execute(cmd: &Command, r: &mut Report) -> Result<(), CliError> {
    match cmd {
        Command::Apply(a) => apply(a, r),
        Command::Energy(a) => energy_cmd(a, r),
        Command::Gsr(a) => gsr(a, r),
        Command::Picone(a) => picone(a, r),
        Command::Capacity(a) => capacity_cmd(a, r),
        Command::NullSeq(a) => null_seq(a, r),
        Command::Harnack(a) => harnack(a, r),
        Command::Hardy(a) => hardy(a, r),
        Command::Liouville(a) => liouville(a, r),
        Command::IneqScan(a) => ineq_scan(a, r),
        Command::ModelCheck(a) => model_check(a, r),
    }
}

fn apply(a: &ApplyArgs, r: &mut Report) -> Result<(), CliError> {
    let p = parse_p(a.common.p)?;
    let inp = resolve_graph(&a.graph, r)?;
    let g = &inp.graph;
    let f = inp.function(&a.u, Role::Positive, p, a.common.seed)?;
    let v = match &a.subset {
        Some(s) => inp.subset(s)?,
        None => g.interior().clone(),
    };

    r.op("schroedinger_apply");
    let hf = lib(schroedinger_apply(g, &f, p))?;
    r.op("p_laplacian");
    let mut laplacian = vec![None; g.vertex_count()];
    for x in g.interior().iter() {
        laplacian[x] = Some(lib(p_laplacian(g, &f, x, p))?);
    }
    r.op("degree");
    let degrees = (0..g.vertex_count()).map(|x| lib(g.degree(x))).collect::<Result<Vec<f64>, _>>()?;
    r.op("boundary");
    let boundary = g.boundary(&v);
    r.op("is_connected");
    let connected =
        json!({"subset": g.is_connected(&v), "graph": g.is_connected(&VertexSubset::full(g.vertex_count()))});
    r.op("gradient");
    r.op("phi_p");
    let fluxes: Vec<Value> = g
        .edges()
        .map(|e| {
            let d = gradient(&f, e.x, e.y);
            json!({"x": inp.labels[e.x], "y": inp.labels[e.y], "gradient": d, "flux": e.b * phi_p(d, p)})
        })
        .collect();
    r.op("classify");
    let class = lib(classify(g, &f, &v, p, a.common.tol))?;

    r.expect(hf.defined().all(|(_, v)| v.is_finite()), "finite", "Hf has non-finite values", None);
    let mut greens = Value::Null;
    if let Some(spec) = &a.phi {
        let phi = inp.function(spec, Role::Test, p, a.common.seed)?;
        r.op("greens_residual");
        let sides = lib(greens_sides(g, &f, &phi, &v, p))?;
        let residual = lib(greens_residual(g, &f, &phi, &v, p))?;
        let tol = a.common.tol.unwrap_or(1e-10) * (1.0 + sides.lhs.abs());
        r.expect(residual <= tol, "greens_formula", format!("residual {residual:e} exceeds {tol:e}"), Some(residual));
        greens = json!({"sides": sides, "rhs": sides.rhs(), "residual": residual});
    }

    let mut table = Table::new(["vertex", "label", "f", "Hf", "laplacian", "degree"]);
    for x in 0..g.vertex_count() {
        table.push(vec![
            json!(x),
            json!(inp.labels[x]),
            json!(f[x]),
            json!(hf.get(x)),
            json!(laplacian[x]),
            json!(degrees[x]),
        ]);
    }
    r.result = json!({
        "labels": inp.labels,
        "f": f,
        "Hf": hf.as_slice(),
        "laplacian": laplacian,
        "degree": degrees,
        "subset": labels_of(&inp, v.iter()),
        "boundary": labels_of(&inp, boundary.iter()),
        "connected": connected,
        "edges": fluxes,
        "classification": class,
        "greens": greens,
    });
    r.table = Some(table);
    Ok(())
}

fn energy_cmd(a: &EnergyArgs, r: &mut Report) -> Result<(), CliError> {
    let p = parse_p(a.common.p)?;
    let inp = resolve_graph(&a.graph, r)?;
    let g = &inp.graph;
    let phi = inp.function(&a.phi, Role::Test, p, a.common.seed)?;
    r.op("energy");
    let rep = lib(energy_with_terms(g, &phi, p))?;

    let supported = (0..g.vertex_count()).all(|x| phi[x] == 0.0 || g.is_interior(x));
    let mut pairing = Value::Null;
    if supported {
        r.op("schroedinger_apply");
        r.op("bracket");
        let hphi = interior_values(g, &phi, p)?;
        let value = lib(bracket(g, &hphi, &phi))?;
        let tol = a.common.tol.unwrap_or(1e-10) * (1.0 + rep.total.abs());
        let diff = (value - rep.total).abs();
        r.expect(diff <= tol, "energy_pairing", format!("<H phi, phi> differs from h(phi) by {diff:e}"), Some(diff));
        pairing = json!(value);
    }

    let mut simplified = Value::Null;
    if let Some(spec) = &a.u {
        let u = inp.function(spec, Role::Positive, p, a.common.seed)?;
        r.op("simplified_energy");
        r.op("simplified_energy_1");
        r.op("simplified_energy_3");
        let h_u2 = if p.value() >= 2.0 {
            r.op("simplified_energy_2");
            Some(lib(simplified_energy_2(g, &u, &phi, p))?)
        } else {
            None
        };
        simplified = json!({
            "h_u": lib(simplified_energy(g, &u, &phi, p))?,
            "h_u1": lib(simplified_energy_1(g, &u, &phi, p))?,
            "h_u2": h_u2,
            "h_u3": lib(simplified_energy_3(g, &u, &phi, p))?,
        });
    }

    let mut table = Table::new(["x", "y", "b", "term"]);
    for t in rep.edge_terms.iter().flatten() {
        table.push(vec![json!(inp.labels[t.x]), json!(inp.labels[t.y]), json!(t.b), json!(t.term)]);
    }
    r.table = Some(table);
    r.result = json!({"energy": rep, "pairing": pairing, "simplified": simplified, "phi": phi});
    Ok(())
}

fn gsr(a: &GsrArgs, r: &mut Report) -> Result<(), CliError> {
    let p = superlinear(a.common.p)?;
    let inp = resolve_graph(&a.graph, r)?;
    let g = &inp.graph;
    let u = inp.function(&a.u, Role::Positive, p, a.common.seed)?;
    let phi = inp.function(&a.phi, Role::Test, p, a.common.seed)?;
    let tol = a.common.tol.unwrap_or(1e-9);

    r.op("gsr_check");
    let rep = lib(gsr_check(g, &u, &phi, p))?;
    if p.value() == 2.0 {
        if let Some(ratio) = rep.ratio {
            r.expect(
                (ratio - 1.0).abs() <= tol,
                "quadratic_equality",
                format!("ratio {ratio} differs from 1"),
                Some(ratio),
            );
        }
    }
    r.op("corollary_bounds_check");
    let constants = lib(CorollaryConstants::for_exponent(p))?;
    let cor = lib(corollary_bounds_check(g, &u, &phi, p, &constants))?;
    r.expect(
        cor.holds,
        "corollary_bounds",
        "simplified-energy bound violated",
        cor.lower.or(cor.upper).map(|b| b.slack),
    );

    let mut display = Value::Null;
    let half_line = inp.model.as_ref().is_some_and(|m| m.family == ModelFamily::NatLine);
    if half_line
        && FunctionSpec::parse(&a.u)? == FunctionSpec::Hardy
        && inp.model.as_ref().is_some_and(|m| m.edge_scale == 1.0 && m.potential == 0.0)
    {
        r.op("gsr_display_check");
        let radius = inp.window.as_ref().map_or(0, |w| w.radius);
        let d = lib(gsr_display_check(radius, p, &phi))?;
        if p.value() == 2.0 {
            if let Some(ratio) = d.ratio {
                r.expect(
                    (ratio - 1.0).abs() <= tol,
                    "display_equality",
                    format!("display ratio {ratio} differs from 1"),
                    Some(ratio),
                );
            }
        }
        display = to_value(&d);
    }
    r.result = json!({
        "gsr": rep,
        "ratio": rep.ratio,
        "corollary": cor,
        "constants": constants,
        "display": display,
    });
    Ok(())
}

fn picone(a: &PiconeArgs, r: &mut Report) -> Result<(), CliError> {
    let p = superlinear(a.common.p)?;
    let inp = resolve_graph(&a.graph, r)?;
    let g = &inp.graph;
    let u = inp.function(&a.u, Role::Positive, p, a.common.seed)?;
    r.op("picone_residual");
    let seed = a.common.seed;
    let residuals = (0..a.trials as u64)
        .into_par_iter()
        .map(|i| {
            let phi = random_test_function(g.interior(), &mut seeded(seed, stream::BATTERY + i));
            picone_residual(g, &u, &phi, p)
        })
        .collect::<pgraph_core::Result<Vec<f64>>>()
        .map_err(CliError::Library)?;
    let min = residuals.iter().copied().fold(f64::INFINITY, f64::min);
    let tol = a.common.tol.unwrap_or(1e-10);
    if !residuals.is_empty() {
        r.expect(min >= -tol, "picone_nonnegative", format!("residual {min:e} below -{tol:e}"), Some(min));
    }
    let mut table = Table::new(["trial", "residual"]);
    for (i, v) in residuals.iter().enumerate() {
        table.push(vec![json!(i), json!(v)]);
    }
    r.table = Some(table);
    r.result = json!({"trials": a.trials, "min_residual": if residuals.is_empty() { None } else { Some(min) }, "residuals": residuals});
    Ok(())
}

fn capacity_cmd(a: &CapacityArgs, r: &mut Report) -> Result<(), CliError> {
    let p = superlinear(a.common.p)?;
    let inp = resolve_graph(&a.graph, r)?;
    let g = &inp.graph;
    let root = inp.root(a.root.as_deref())?;
    let v = match &a.subset {
        Some(s) => inp.subset(s)?,
        None => g.interior().clone(),
    };
    r.op("capacity");
    let res = lib(capacity(g, root, &v, p, &optimizer(&a.optimizer, a.common.seed, a.pin)))?;
    if res.status == CapacityStatus::Certified {
        r.expect(
            res.gradient_norm <= 1e-6,
            "optimizer",
            format!("projected gradient {:e}", res.gradient_norm),
            Some(res.gradient_norm),
        );
    }
    let mut table = Table::new(["vertex", "label", "minimizer"]);
    for (x, m) in res.minimizer.iter().enumerate() {
        table.push(vec![json!(x), json!(inp.labels[x]), json!(m)]);
    }
    r.table = Some(table);
    r.result = json!({
        "root": inp.labels[root],
        "subset": labels_of(&inp, v.iter()),
        "value": res.value,
        "status": res.status,
        "certified_convex": res.certified_convex,
        "iterations": res.iterations,
        "gradient_norm": res.gradient_norm,
        "converged": res.converged,
        "starts": res.starts,
        "minimizer": res.minimizer,
    });
    Ok(())
}

fn null_seq(a: &NullSeqArgs, r: &mut Report) -> Result<(), CliError> {
    if a.graph.graph.is_some() {
        return Err(CliError::Usage("null-seq works on exhaustions: use --model".into()));
    }
    let p = superlinear(a.common.p)?;
    let model = model_of(&a.graph)?;
    let radii = radii(&a.radii, &a.graph, &model)?;
    let top = GraphArgs { radius: radii.last().copied(), ..a.graph.clone() };
    let inp = resolve_graph(&top, r)?;
    let g = &inp.graph;
    let root = inp.root(a.root.as_deref())?;

    r.op("null_sequence_search");
    let opts = optimizer(&a.optimizer, a.common.seed, 1.0);
    let ev = lib(null_sequence_search(&model, root, a.alpha, p, &radii, &opts))?;

    let mut hardy = Value::Null;
    let mut ground = Value::Null;
    let mut cert = None;
    if let Some(spec) = &a.u {
        let u = inp.function(spec, Role::Positive, p, a.common.seed)?;
        r.op("hardy_witness");
        match certified_hardy_witness(g, &u, g.interior(), p, a.trials, &mut seeded(a.common.seed, stream::BATTERY)) {
            Ok(c) => {
                hardy = json!({
                    "min_weight": c.min_weight,
                    "max_weight": c.max_weight,
                    "verification": c.verification,
                    "witness": c.is_witness(),
                });
                cert = Some(c);
            }
            Err(e) => hardy = json!({"error": e.to_string()}),
        }
        let core = match &a.core {
            Some(s) => inp.subset(s)?.to_vec(),
            None => vec![root],
        };
        r.op("ground_state_trend");
        ground = to_value(&lib(ground_state_trend(&ev, &u, &core))?);
    }
    let mut verdict = assess(&ev, &TrendCriteria::default(), cert.as_ref(), g.measure(root));
    verdict.hardy = None;
    if let Some(floor) = verdict.hardy_floor {
        let low = verdict.energies.iter().copied().fold(f64::INFINITY, f64::min);
        r.expect(
            low >= floor * (1.0 - 1e-9),
            "hardy_floor",
            format!("energy {low} below the floor {floor}"),
            Some(low),
        );
    }
    for s in &ev.steps {
        r.expect(s.energy.is_finite(), "energy", format!("non-finite energy at radius {}", s.radius), None);
    }

    let mut table = Table::new(["radius", "energy", "capacity", "status", "iterations"]);
    let steps: Vec<Value> = ev
        .steps
        .iter()
        .map(|s| {
            table.push(vec![
                json!(s.radius),
                json!(s.energy),
                json!(s.capacity),
                to_value(&s.status),
                json!(s.iterations),
            ]);
            json!({
                "radius": s.radius,
                "energy": s.energy,
                "capacity": s.capacity,
                "status": s.status,
                "iterations": s.iterations,
                "converged": s.converged,
            })
        })
        .collect();
    r.table = Some(table);
    r.result = json!({
        "root": inp.labels[root],
        "alpha": a.alpha,
        "classification": verdict.classification,
        "critical_trend": verdict.classification == Classification::CriticalTrend,
        "verdict": verdict,
        "steps": steps,
        "hardy": hardy,
        "ground_state": ground,
    });
    Ok(())
}

fn harnack(a: &HarnackArgs, r: &mut Report) -> Result<(), CliError> {
    let p = superlinear(a.common.p)?;
    let inp = resolve_graph(&a.graph, r)?;
    let g = &inp.graph;
    let k = inp.subset(&a.subset)?;
    let f = inp.function(&a.f, Role::Test, p, a.common.seed)?;
    r.op("harnack_constant");
    let res = lib(harnack_constant(g, &k, &f, p, true))?;
    let mut check = Value::Null;
    if let Some(spec) = &a.u {
        let u = inp.function(spec, Role::Positive, p, a.common.seed)?;
        r.op("harnack_verify");
        let v = lib(harnack_verify(g, &k, &f, &u, p))?;
        r.expect(v.holds, "harnack_bound", "max u exceeds C min u, or a zero does not propagate", v.ratio);
        check = to_value(&v);
    }
    let mut table = Table::new(["vertex", "label", "defect"]);
    for (x, d) in res.vertices.iter().zip(&res.defect) {
        table.push(vec![json!(x), json!(inp.labels[*x]), json!(d)]);
    }
    r.table = Some(table);
    r.result = json!({
        "constant": res.constant,
        "vertices": labels_of(&inp, res.vertices.iter().copied()),
        "defect": res.defect,
        "pair_bounds": res.pair_bounds,
        "extremal_pair": [inp.labels[res.extremal_pair.0], inp.labels[res.extremal_pair.1]],
        "verification": check,
    });
    Ok(())
}

fn hardy(a: &HardyArgs, r: &mut Report) -> Result<(), CliError> {
    let p = superlinear(a.common.p)?;
    let inp = resolve_graph(&a.graph, r)?;
    let g = &inp.graph;
    let u = inp.function(&a.u, Role::Positive, p, a.common.seed)?;
    r.op("hardy_witness");
    let cert =
        lib(certified_hardy_witness(g, &u, g.interior(), p, a.trials, &mut seeded(a.common.seed, stream::BATTERY)))?;
    if let Some(v) = &cert.verification {
        r.expect(v.holds, "hardy_inequality", "h(phi) < sum w |phi|^p m on a test function", Some(v.min_slack));
    }
    let mut proper = Value::Null;
    if let Some(spec) = &a.subset {
        let v = inp.subset(spec)?;
        let vertex = a.root.as_deref().map(|l| inp.vertex(l)).transpose()?;
        r.op("proper_subset_check");
        let rep = lib(proper_subset_check(g, &v, &u, p, vertex, &optimizer(&a.optimizer, a.common.seed, 1.0)))?;
        r.expect(
            rep.holds,
            "capacity_floor",
            format!("capacity {} below floor {}", rep.capacity, rep.floor),
            Some(rep.capacity),
        );
        proper = json!({
            "vertex": inp.labels[rep.vertex],
            "capacity": rep.capacity,
            "floor": rep.floor,
            "holds": rep.holds,
            "status": rep.result.status,
        });
    }
    let mut table = Table::new(["vertex", "label", "u", "w"]);
    for (x, (ux, wx)) in u.iter().zip(&cert.w).enumerate() {
        table.push(vec![json!(x), json!(inp.labels[x]), json!(ux), json!(wx)]);
    }
    r.table = Some(table);
    r.result = json!({
        "w": cert.w,
        "min_weight": cert.min_weight,
        "max_weight": cert.max_weight,
        "witness": cert.is_witness(),
        "classification": cert.classification,
        "verification": cert.verification,
        "proper_subset": proper,
    });
    Ok(())
}

fn liouville(a: &LiouvilleArgs, r: &mut Report) -> Result<(), CliError> {
    if a.graph.graph.is_some() {
        return Err(CliError::Usage("liouville works on exhaustions: use --model".into()));
    }
    let p = superlinear(a.common.p)?;
    let model = model_of(&a.graph)?;
    let radii = radii(&a.radii, &a.graph, &model)?;
    let opts = optimizer(&a.optimizer, a.common.seed, 1.0);
    let u = FunctionSpec::parse(&a.u)?.on_coords(p)?;
    if a.transfer {
        r.op("gsr_criticality_transfer");
        let rep = lib(gsr_criticality_transfer(&model, &*u, p, &radii, &opts))?;
        let mut table = Table::new(["radius", "capacity", "simplified_capacity", "bound_holds"]);
        for s in &rep.steps {
            table.push(vec![json!(s.radius), json!(s.capacity), json!(s.simplified_capacity), json!(s.bound_holds)]);
            r.expect(
                s.bound_holds,
                "transfer_bound",
                format!("capacity bound fails at radius {}", s.radius),
                Some(s.capacity),
            );
        }
        r.table = Some(table);
        r.result = to_value(&rep);
        return Ok(());
    }
    let u_tilde = FunctionSpec::parse(a.u_tilde.as_deref().unwrap_or(&a.u))?.on_coords(p)?;
    let comparison = model
        .clone()
        .with_edge_scale(model.edge_scale * a.compare_scale)
        .with_potential(a.compare_potential.unwrap_or(model.potential));
    r.op("liouville_check");
    let constants = LiouvilleConstants { alpha: a.alpha, beta: a.beta };
    let rep = lib(liouville_check(&model, &comparison, &*u, &*u_tilde, None, &constants, p, &radii, &opts))?;
    let mut table = Table::new(["radius", "reference_energy", "transported_energy"]);
    for ((radius, e), t) in rep.radii.iter().zip(&rep.reference_energies).zip(&rep.transported_energies) {
        table.push(vec![json!(radius), json!(e), json!(t)]);
        r.expect(t.is_finite(), "transported_energy", format!("non-finite energy at radius {radius}"), None);
    }
    r.table = Some(table);
    r.result = to_value(&rep);
    Ok(())
}

fn ineq_scan(a: &IneqScanArgs, r: &mut Report) -> Result<(), CliError> {
    let grid = ScanGrid { a_min: a.a_min, a_max: a.a_max, a_step: a.a_step, t_step: a.t_step, ..ScanGrid::default() };
    grid.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let kernel = match a.kernel {
        KernelArg::Ineq2 => Some(ScanKernel::Ineq2),
        KernelArg::GsrLike => Some(ScanKernel::GsrLike),
        KernelArg::CorollaryH1 => Some(ScanKernel::CorollaryH1),
        _ => None,
    };
    if let Some(kernel) = kernel {
        let p = superlinear(a.common.p)?;
        r.op("scan_equivalence");
        let res = lib(scan_equivalence(kernel, p, &grid))?;
        r.expect(
            res.inf_ratio > 0.0 && res.sup_ratio.is_finite(),
            "ratio_bounds",
            format!("ratio range [{}, {}]", res.inf_ratio, res.sup_ratio),
            Some(res.inf_ratio),
        );
        let mut extra = Value::Null;
        if kernel == ScanKernel::Ineq2 {
            r.op("ineq2_sides");
            let pt = lib(InequalityPoint::new(res.argmin.a, res.argmin.t, p.value()))?;
            let (lhs, rhs) = lib(ineq2_sides(pt))?;
            extra = json!({"argmin_sides": {"lhs": lhs, "rhs": rhs}});
            if p.value() == 2.0 {
                let d = lib(quadratic_identity_defect(&grid))?;
                let tol = a.common.tol.unwrap_or(8.0 * f64::EPSILON);
                r.expect(
                    d.max_scaled <= tol,
                    "quadratic_equality",
                    format!("sides differ by {:.1} ulps at a = {}, t = {}", d.ulps, d.worst.a, d.worst.t),
                    Some(d.max_scaled),
                );
                extra["identity_defect"] = to_value(&d);
            }
        }
        let mut v = to_value(&res);
        if let (Value::Object(m), Value::Object(e)) = (&mut v, extra) {
            m.extend(e);
        }
        r.result = v;
        return Ok(());
    }
    match a.kernel {
        KernelArg::Ineq1 => {
            r.op("ineq1_check");
            let rep = lib(ineq1_grid(a.c, &grid))?;
            let point = ineq1_check(a.a, a.t, a.c);
            // C >= 1 is tested as the upper constant, C < 1 as the lower one.
            if a.c >= 1.0 {
                r.expect(rep.upper_holds, "ineq1_upper", format!("lhs <= C rhs fails at C = {}", a.c), None);
            } else {
                r.expect(rep.lower_holds, "ineq1_lower", format!("lhs >= C rhs fails at C = {}", a.c), None);
            }
            r.result = json!({"grid": rep, "point": point});
        }
        KernelArg::Ineq34 => {
            let p = superlinear(a.common.p)?;
            r.op("ineq34_check");
            let rep = lib(ineq34_grid(p, &grid))?;
            let point = lib(ineq34_check(a.a, a.t, p))?;
            r.expect(
                rep.holds && point.holds,
                "ineq34",
                format!("{} grid failures", rep.failures),
                Some(rep.min_slack),
            );
            r.result = json!({"grid": rep, "point": point});
        }
        KernelArg::Ineq5 => {
            let p = a.common.p;
            if !(p >= 0.0) || !p.is_finite() {
                return Err(CliError::Usage(format!("ineq5 needs p >= 0, got {p}")));
            }
            r.op("ineq5_check");
            let tight = lib(ineq5_tightness(p))?;
            let point = lib(ineq5_check(a.a.abs(), a.b.abs(), p))?;
            r.expect(
                tight.tight && point.holds,
                "ineq5",
                "constants not attained or bound violated",
                Some(point.ratio),
            );
            r.result = json!({"tightness": tight, "point": point});
        }
        KernelArg::Lindqvist => {
            let p = superlinear(a.common.p)?;
            r.op("lindqvist_check");
            let rep = lib(lindqvist_grid(p, a.a_max.abs().max(a.a_min.abs()).min(5.0), a.a_step.max(1e-2)))?;
            let point = lib(lindqvist_check(a.a, a.b, p))?;
            r.expect(
                rep.holds && point.holds,
                "lindqvist",
                format!("{} grid failures", rep.failures),
                Some(rep.min_slack),
            );
            r.result = json!({"grid": rep, "point": point});
        }
        KernelArg::Cp => {
            let p = parse_p(a.common.p)?;
            if p.value() < 2.0 {
                return Err(CliError::Usage("the cp kernel needs p >= 2".into()));
            }
            r.op("constant_cp");
            let cp = lib(constant_cp(p.value()))?;
            let constants = lib(CorollaryConstants::for_exponent(p))?;
            r.expect(cp > 0.0 && cp <= 0.5, "cp_range", format!("c_p = {cp} outside (0, 1/2]"), Some(cp));
            r.result = json!({"cp": cp, "constants": constants});
        }
        _ => unreachable!("scan kernels handled above"),
    }
    Ok(())
}

fn model_check(a: &ModelCheckArgs, r: &mut Report) -> Result<(), CliError> {
    if a.graph.graph.is_some() {
        return Err(CliError::Usage("model-check needs --model".into()));
    }
    let p = superlinear(a.common.p)?;
    let inp = resolve_graph(&a.graph, r)?;
    let (model, window) = (inp.model.as_ref().expect("model input"), inp.window.as_ref().expect("model window"));
    let g = &inp.graph;
    let n = g.vertex_count();
    let radius = window.radius;

    let symmetric = (0..n).all(|x| g.neighbors(x).all(|(y, b)| g.weight(y, x) == b));
    r.expect(symmetric, "symmetric", "weights are not symmetric", None);
    r.op("is_connected");
    let connected = g.is_connected(&VertexSubset::full(n));
    r.expect(connected, "connected", "window is disconnected", None);
    r.op("boundary");
    let boundary = g.boundary(g.interior());
    r.op("degree");
    let max_degree = (0..n).map(|x| lib(g.degree(x))).collect::<Result<Vec<_>, _>>()?.into_iter().fold(0.0, f64::max);

    let plain = model.edge_scale == 1.0 && model.potential == 0.0;
    let constructed = match model.family {
        ModelFamily::NatLine => {
            r.op("nat_line");
            nat_line(radius)
        }
        ModelFamily::IntLine => {
            r.op("int_line");
            int_line(radius)
        }
        ModelFamily::Grid2d => {
            r.op("grid2d");
            grid2d(radius)
        }
        ModelFamily::WeightedLine => {
            r.op("weighted_line");
            weighted_line(&model.weights[..radius.min(model.weights.len())])
        }
        ModelFamily::Star => star(radius),
        ModelFamily::Complete => complete(radius),
    };
    let constructed = lib(constructed)?;
    let same_edges = constructed.edges().eq(g.edges());
    if plain {
        r.expect(same_edges, "constructor", "window differs from the plain constructor", None);
    }

    let mut half_line = Value::Null;
    if model.family == ModelFamily::NatLine && plain {
        r.op("hardy_u");
        r.op("alpha_seq");
        r.op("classify");
        let u = (0..=radius).map(|k| lib(hardy_u(k, p))).collect::<Result<Vec<_>, _>>()?;
        let alpha = (1..=radius).map(|k| lib(alpha_seq(k, p))).collect::<Result<Vec<_>, _>>()?;
        let class = lib(classify(g, &u, g.interior(), p, a.common.tol))?;
        r.expect(
            class.is_supersolution(),
            "hardy_u_superharmonic",
            "hardy_u is not superharmonic",
            Some(class.min_value),
        );
        half_line = json!({"hardy_u": u, "alpha": alpha, "classification": class});
    }
    r.result = json!({
        "family": model.family,
        "radius": radius,
        "vertex_count": n,
        "edge_count": g.edge_count(),
        "interior_count": g.interior().count(),
        "boundary": labels_of(&inp, boundary.iter()),
        "connected": connected,
        "symmetric": symmetric,
        "max_degree": max_degree,
        "matches_constructor": same_edges,
        "half_line": half_line,
    });
    Ok(())
}
