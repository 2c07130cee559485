//! Resolves graph sources, function specs and vertex selectors.

use std::fs;
use std::path::PathBuf;

use pgraph_core::models::{hardy_u, ExhaustibleModel, ModelFamily, Window};
use pgraph_core::random::{self, random_positive, random_test_function, SeededRng};
use pgraph_core::{PExponent, VertexId, VertexSubset, WeightedGraph};

use super::args::GraphArgs;
use super::CliError;
use crate::io::{load_graph_path, parse_values};
use crate::report::Report;

/// Independent random streams derived from one seed.
pub mod stream {
    pub const PHI: u64 = 1;
    pub const U: u64 = 2;
    pub const BATTERY: u64 = 1 << 32;
}

pub fn seeded(seed: u64, stream: u64) -> SeededRng {
    let mut rng = random::rng(seed);
    rng.set_stream(stream);
    rng
}

pub struct Input {
    pub graph: WeightedGraph,
    pub labels: Vec<String>,
    pub model: Option<ExhaustibleModel>,
    pub window: Option<Window>,
}

pub fn model_of(args: &GraphArgs) -> Result<ExhaustibleModel, CliError> {
    let name = args.model.as_deref().ok_or_else(|| CliError::Usage("this subcommand needs --model".into()))?;
    let family = ModelFamily::from_name(name).ok_or_else(|| {
        let known: Vec<&str> = ModelFamily::ALL.iter().map(|f| f.name()).collect();
        CliError::Usage(format!("unknown model `{name}`; expected one of {}", known.join(", ")))
    })?;
    if family == ModelFamily::WeightedLine && args.weights.is_empty() {
        return Err(CliError::Usage("weighted_line needs --weights".into()));
    }
    let mut model = ExhaustibleModel::new(family).with_edge_scale(args.edge_scale).with_potential(args.potential);
    model.weights = args.weights.clone();
    Ok(model)
}

pub fn label_of(family: ModelFamily, coord: [i64; 2]) -> String {
    match family {
        ModelFamily::Grid2d => format!("{}:{}", coord[0], coord[1]),
        _ => coord[0].to_string(),
    }
}

pub fn resolve_graph(args: &GraphArgs, report: &mut Report) -> Result<Input, CliError> {
    match (&args.graph, &args.model) {
        (Some(_), Some(_)) => Err(CliError::Usage("give either --graph or --model, not both".into())),
        (None, None) => Err(CliError::Usage("a graph source is required: --graph FILE or --model NAME".into())),
        (Some(path), None) => {
            if args.radius.is_some() {
                return Err(CliError::Usage("--radius only applies to --model".into()));
            }
            report.op("load_graph");
            let loaded = load_graph_path(path, args.sidecar.as_deref()).map_err(CliError::Input)?;
            Ok(Input { graph: loaded.graph, labels: loaded.labels, model: None, window: None })
        }
        (None, Some(_)) => {
            if args.sidecar.is_some() {
                return Err(CliError::Usage("--sidecar only applies to --graph".into()));
            }
            let model = model_of(args)?;
            let radius = args.radius.ok_or_else(|| CliError::Usage("--model needs --radius".into()))?;
            let window = model.window(radius).map_err(|e| CliError::Usage(e.to_string()))?;
            let labels = window.coords.iter().map(|&c| label_of(model.family, c)).collect();
            Ok(Input { graph: window.graph.clone(), labels, model: Some(model), window: Some(window) })
        }
    }
}

impl Input {
    pub fn n(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn vertex(&self, label: &str) -> Result<VertexId, CliError> {
        self.labels
            .iter()
            .position(|l| l == label.trim())
            .ok_or_else(|| CliError::Usage(format!("no vertex labelled `{}`", label.trim())))
    }

    /// `interior`, `all`, or comma-separated labels and inclusive integer
    /// ranges `a..b`.
    pub fn subset(&self, spec: &str) -> Result<VertexSubset, CliError> {
        let n = self.n();
        match spec.trim() {
            "interior" => return Ok(self.graph.interior().clone()),
            "all" => return Ok(VertexSubset::full(n)),
            _ => {}
        }
        let mut s = VertexSubset::empty(n);
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part.split_once("..") {
                Some((lo, hi)) => {
                    let parse = |v: &str| {
                        v.trim()
                            .parse::<i64>()
                            .map_err(|_| CliError::Usage(format!("bad range bound `{v}` in `{part}`")))
                    };
                    for k in parse(lo)?..=parse(hi)? {
                        s.insert(self.vertex(&k.to_string())?);
                    }
                }
                None => s.insert(self.vertex(part)?),
            }
        }
        if s.is_empty() {
            return Err(CliError::Usage(format!("subset `{spec}` is empty")));
        }
        Ok(s)
    }

    pub fn root(&self, spec: Option<&str>) -> Result<VertexId, CliError> {
        match (spec, &self.model) {
            (Some(label), _) => self.vertex(label),
            (None, Some(m)) => Ok(m.root()),
            (None, None) => self
                .graph
                .interior()
                .iter()
                .next()
                .ok_or_else(|| CliError::Usage("graph has no interior vertex; pass --root".into())),
        }
    }

    /// Values of a function spec on the vertices: `hardy`, `const[:v]`,
    /// `random`, `file:PATH` or a bare path.
    pub fn function(&self, spec: &str, role: Role, p: PExponent, seed: u64) -> Result<Vec<f64>, CliError> {
        let n = self.n();
        match FunctionSpec::parse(spec)? {
            FunctionSpec::Const(v) => Ok(vec![v; n]),
            FunctionSpec::Hardy => {
                let window = self.window.as_ref().filter(|_| self.one_dimensional()).ok_or_else(|| {
                    CliError::Usage(
                        "`hardy` needs a one-dimensional model (nat_line, int_line or weighted_line)".into(),
                    )
                })?;
                window
                    .coords
                    .iter()
                    .map(|c| hardy_u(c[0].unsigned_abs() as usize, p).map_err(CliError::Library))
                    .collect()
            }
            FunctionSpec::Random => Ok(match role {
                Role::Test => random_test_function(self.graph.interior(), &mut seeded(seed, stream::PHI)),
                Role::Positive => random_positive(n, 0.1, 2.0, &mut seeded(seed, stream::U)),
            }),
            FunctionSpec::File(path) => {
                let text = fs::read_to_string(&path)
                    .map_err(|e| CliError::Usage(format!("reading {}: {e}", path.display())))?;
                let values = parse_values(&text, &path.display().to_string()).map_err(CliError::Input)?;
                if values.len() != n {
                    return Err(CliError::Usage(format!(
                        "{} has {} values, the graph has {n} vertices",
                        path.display(),
                        values.len()
                    )));
                }
                Ok(values)
            }
        }
    }

    fn one_dimensional(&self) -> bool {
        self.model.as_ref().is_some_and(|m| {
            matches!(m.family, ModelFamily::NatLine | ModelFamily::IntLine | ModelFamily::WeightedLine)
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    /// Random values in `[-1, 1]` on the interior.
    Test,
    /// Random values in `(0.1, 2]` everywhere.
    Positive,
}

pub type CoordFunction = Box<dyn Fn([i64; 2]) -> f64>;

#[derive(Debug, Clone, PartialEq)]
pub enum FunctionSpec {
    Hardy,
    Const(f64),
    Random,
    File(PathBuf),
}

impl FunctionSpec {
    pub fn parse(spec: &str) -> Result<Self, CliError> {
        let spec = spec.trim();
        Ok(match spec {
            "hardy" => FunctionSpec::Hardy,
            "const" => FunctionSpec::Const(1.0),
            "random" => FunctionSpec::Random,
            _ => {
                if let Some(v) = spec.strip_prefix("const:") {
                    FunctionSpec::Const(
                        v.parse().map_err(|_| CliError::Usage(format!("bad constant `{v}` in `{spec}`")))?,
                    )
                } else {
                    FunctionSpec::File(PathBuf::from(spec.strip_prefix("file:").unwrap_or(spec)))
                }
            }
        })
    }

    /// The spec as a function of lattice coordinates, for comparisons across
    /// windows.
    pub fn on_coords(&self, p: PExponent) -> Result<CoordFunction, CliError> {
        match *self {
            FunctionSpec::Const(v) => Ok(Box::new(move |_| v)),
            FunctionSpec::Hardy => {
                hardy_u(1, p).map_err(CliError::Library)?;
                Ok(Box::new(move |c: [i64; 2]| hardy_u(c[0].unsigned_abs() as usize, p).unwrap_or(f64::NAN)))
            }
            _ => Err(CliError::Usage("only `hardy` and `const[:v]` are defined on every window".into())),
        }
    }
}

pub fn parse_p(p: f64) -> Result<PExponent, CliError> {
    PExponent::new(p).map_err(|e| CliError::Usage(e.to_string()))
}

pub fn superlinear(p: f64) -> Result<PExponent, CliError> {
    PExponent::superlinear(p).map_err(|e| CliError::Usage(e.to_string()))
}

/// `radius/8, radius/4, radius/2, radius` clipped below by the model's
/// smallest radius, unless given explicitly.
pub fn radii(explicit: &[usize], args: &GraphArgs, model: &ExhaustibleModel) -> Result<Vec<usize>, CliError> {
    let mut r: Vec<usize> = if explicit.is_empty() {
        let top = args.radius.ok_or_else(|| CliError::Usage("give --radii or --radius".into()))?;
        [top / 8, top / 4, top / 2, top].into_iter().filter(|&x| x >= model.min_radius()).collect()
    } else {
        explicit.to_vec()
    };
    r.sort_unstable();
    r.dedup();
    if r.is_empty() {
        return Err(CliError::Usage("no admissible radius".into()));
    }
    if let Some(&bad) = r.iter().find(|&&x| x < model.min_radius()) {
        return Err(CliError::Usage(format!("radius {bad} is below the model minimum {}", model.min_radius())));
    }
    Ok(r)
}
