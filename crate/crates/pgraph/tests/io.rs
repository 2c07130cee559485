use pgraph::io::{load_graph, load_json, load_tsv, GraphFormat, LoadError};
use pgraph_core::random::{self, random_graph, RandomGraphSpec};
use pgraph_core::WeightedGraph;
use proptest::prelude::*;
use serde_json::json;

fn graph(seed: u64) -> WeightedGraph {
    let spec = RandomGraphSpec { max_vertices: 25, boundary_probability: 0.2, ..Default::default() };
    random_graph(&spec, &mut random::rng(seed)).unwrap()
}

fn to_json(g: &WeightedGraph) -> String {
    let vertices: Vec<_> =
        (0..g.vertex_count()).map(|x| json!({"id": x, "m": g.measure(x), "c": g.potential(x)})).collect();
    let edges: Vec<_> = g.edges().map(|e| json!({"x": e.x, "y": e.y, "b": e.b})).collect();
    let interior: Vec<_> = g.interior().iter().collect();
    json!({"vertices": vertices, "edges": edges, "interior": interior}).to_string()
}

fn same(a: &WeightedGraph, b: &WeightedGraph) -> bool {
    a.vertex_count() == b.vertex_count()
        && a.edges().eq(b.edges())
        && a.measures() == b.measures()
        && a.potentials() == b.potentials()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn json_round_trip(seed in any::<u64>()) {
        let g = graph(seed);
        let loaded = load_json(&to_json(&g), "mem").unwrap();
        prop_assert!(same(&g, &loaded.graph));
        prop_assert_eq!(loaded.graph.interior(), g.interior());
    }

    #[test]
    fn tsv_round_trip_with_reversed_duplicates(seed in any::<u64>()) {
        let g = graph(seed);
        let mut edges = String::from("# x\ty\tb\n");
        for e in g.edges() {
            edges.push_str(&format!("{}\t{}\t{:e}\n{}\t{}\t{:e}\n", e.x, e.y, e.b, e.y, e.x, e.b));
        }
        let mut side = String::new();
        for x in 0..g.vertex_count() {
            side.push_str(&format!("{x}\t{:e}\t{:e}\n", g.measure(x), g.potential(x)));
        }
        let loaded = load_tsv(edges.as_bytes(), "edges", Some((side.as_bytes(), "side"))).unwrap();
        // TSV labels follow first appearance, so compare through them.
        let id = |x: usize| loaded.vertex(&x.to_string()).unwrap();
        for e in g.edges() {
            prop_assert_eq!(loaded.graph.weight(id(e.x), id(e.y)), e.b);
        }
        for x in 0..g.vertex_count() {
            prop_assert_eq!(loaded.graph.measure(id(x)), g.measure(x));
            prop_assert_eq!(loaded.graph.potential(id(x)), g.potential(x));
        }
        prop_assert_eq!(loaded.graph.edges().count(), g.edges().count());
    }
}

#[test]
fn reader_entry_point() {
    let text = r#"{"vertices":[{"id":0,"m":1,"c":0},{"id":1,"m":1,"c":0}],"edges":[{"x":0,"y":1,"b":1}]}"#;
    let g = load_graph(text.as_bytes(), GraphFormat::Json).unwrap().graph;
    assert_eq!(g.vertex_count(), 2);
    assert_eq!(g.weight(1, 0), 1.0);

    let err = load_graph("0\t1\t1.0\n1\t0\t2.0\n".as_bytes(), GraphFormat::Tsv).unwrap_err();
    assert!(matches!(err, LoadError::Invalid { .. }), "{err}");
    assert!(err.to_string().contains(":2"), "{err}");
}

#[test]
fn invalid_records_are_located() {
    let negative = r#"{"vertices":[{"id":0},{"id":1}],"edges":[{"x":0,"y":1,"b":1},{"x":1,"y":0,"b":-1}]}"#;
    let err = load_json(negative, "g.json").unwrap_err().to_string();
    assert!(err.contains("edges[1]"), "{err}");

    let measure = r#"{"vertices":[{"id":0,"m":0},{"id":1}],"edges":[{"x":0,"y":1,"b":1}]}"#;
    let err = load_json(measure, "g.json").unwrap_err().to_string();
    assert!(err.contains("vertices[0]"), "{err}");

    let err = load_json("{\"vertices\": [", "g.json").unwrap_err().to_string();
    assert!(err.starts_with("g.json:1:"), "{err}");
}
