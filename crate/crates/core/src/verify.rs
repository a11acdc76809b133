//! Checks the rank law, the dimension formulas and the GHW / graph-invariant
//! equalities on individual graphs and on seeded random corpora.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::codes::{wei_complete, LinearCode, WeightHierarchy, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::eval::{evaluation_code, points_from_graph, DeltaMethod};
use crate::fixtures::{GoldenFixture, GoldenSet};
use crate::graph::Graph;
use crate::invariants::{
    edge_biparticity_signs, edge_biparticity_subsets, lambda_r, min_cut_oracle, upsilon_r,
};
use crate::linalg::FieldSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check: String,
    pub graph: String,
    pub p: Option<u32>,
    pub params: String,
    pub expected: String,
    pub actual: String,
    pub status: Status,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub records: Vec<CheckRecord>,
}

impl VerificationReport {
    /// True when no check failed. Skipped checks do not count as failures.
    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.status != Status::Fail)
    }

    pub fn count(&self, status: Status) -> usize {
        self.records.iter().filter(|r| r.status == status).count()
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| r.status == Status::Fail)
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.records.extend(other.records);
    }
}

/// Which graph invariant the r-th generalized Hamming weight of `C_p(G)` equals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// `p != 2` and `G` non-bipartite: weak edge biparticity, `k = s`
    WeakBiparticity,
    /// `p == 2` or `G` bipartite: edge connectivity, `k = s - 1`
    EdgeConnectivity,
}

impl Branch {
    pub fn of(g: &Graph, field: FieldSpec) -> Self {
        if !field.is_binary() && !g.is_bipartite() {
            Branch::WeakBiparticity
        } else {
            Branch::EdgeConnectivity
        }
    }

    /// Rank of the incidence matrix, hence the dimension of `C_p(G)`.
    pub fn rank(self, s: usize) -> usize {
        match self {
            Branch::WeakBiparticity => s,
            Branch::EdgeConnectivity => s - 1,
        }
    }

    pub fn invariant_name(self) -> &'static str {
        match self {
            Branch::WeakBiparticity => "upsilon",
            Branch::EdgeConnectivity => "lambda",
        }
    }

    /// The graph-side value for `delta_r`.
    pub fn invariant(self, g: &Graph, r: usize) -> Result<usize> {
        Ok(match self {
            Branch::WeakBiparticity => upsilon_r(g, r)?.value,
            Branch::EdgeConnectivity => lambda_r(g, r)?.value,
        })
    }
}

/// Graph-side hierarchy `delta_1 .. delta_{r_max}` from the matching invariant.
pub fn graph_hierarchy(g: &Graph, field: FieldSpec, r_max: usize) -> Result<WeightHierarchy> {
    g.require_connected()?;
    let branch = Branch::of(g, field);
    let k = branch.rank(g.vertex_count());
    if r_max > k {
        return Err(Error::OutOfRange {
            name: "r_max",
            value: r_max,
            lo: 0,
            hi: k,
        });
    }
    let mut h = WeightHierarchy::default();
    for r in 1..=r_max {
        h.push(branch.invariant(g, r)?, crate::codes::Method::Graph);
    }
    Ok(h)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyOptions {
    /// `None` means the full dimension of the code.
    pub r_max: Option<usize>,
    pub budget: u64,
    /// degrees `d >= 2` for the evaluation-code fullness check
    pub eval_degrees: Vec<u32>,
    /// `None` means the same bound as `r_max`.
    pub eval_r_max: Option<usize>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            r_max: None,
            budget: DEFAULT_BUDGET,
            eval_degrees: vec![2],
            eval_r_max: None,
        }
    }
}

struct Recorder<'a> {
    graph: &'a str,
    p: Option<u32>,
    report: VerificationReport,
}

impl Recorder<'_> {
    fn timed<T>(
        &mut self,
        check: String,
        params: String,
        f: impl FnOnce() -> Result<(T, T)>,
    ) -> Option<T>
    where
        T: std::fmt::Debug + PartialEq,
    {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let (expected, actual, status, value) = match outcome {
            Ok((e, a)) => {
                let status = if e == a { Status::Pass } else { Status::Fail };
                (format!("{e:?}"), format!("{a:?}"), status, Some(a))
            }
            Err(Error::BudgetExceeded {
                what,
                count,
                budget,
            }) => (
                String::new(),
                format!("skipped: {count} {what} > {budget}"),
                Status::Skipped,
                None,
            ),
            Err(e) => (String::new(), format!("error: {e}"), Status::Fail, None),
        };
        self.report.records.push(CheckRecord {
            check,
            graph: self.graph.to_string(),
            p: self.p,
            params,
            expected,
            actual,
            status,
            elapsed,
        });
        value
    }
}

/// Runs every consistency check on one connected graph over `F_p`.
pub fn verify_graph(
    name: &str,
    g: &Graph,
    field: FieldSpec,
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    Ok(run_graph(name, g, field, opts)?.report)
}

struct GraphRun {
    report: VerificationReport,
    code: Option<WeightHierarchy>,
    dual: Option<WeightHierarchy>,
}

fn run_graph(name: &str, g: &Graph, field: FieldSpec, opts: &VerifyOptions) -> Result<GraphRun> {
    g.require_connected()?;
    let s = g.vertex_count();
    let m = g.edge_count();
    let branch = Branch::of(g, field);
    let k = branch.rank(s);
    let r_max = opts.r_max.unwrap_or(k);
    if r_max > k {
        return Err(Error::OutOfRange {
            name: "r_max",
            value: r_max,
            lo: 0,
            hi: k,
        });
    }
    let budget = opts.budget;
    let mut rec = Recorder {
        graph: name,
        p: Some(field.p()),
        report: VerificationReport::default(),
    };

    let a = g.incidence_matrix(field);
    rec.timed("rank".into(), format!("s={s}"), || Ok((k, a.rank())));
    let code = LinearCode::from_generator(&a);
    let dual = code.dual();
    rec.timed("dim.code".into(), format!("m={m}"), || {
        Ok((k, code.dimension()))
    });
    rec.timed("dim.dual".into(), format!("m={m}"), || {
        Ok((m - k, dual.dimension()))
    });

    let code_h = rec.timed("hierarchy.code".into(), format!("r_max={r_max}"), || {
        let h = code.weight_hierarchy(r_max, budget)?;
        Ok((h.clone(), h))
    });
    let dual_h = rec.timed(
        "hierarchy.dual".into(),
        format!("r_max={}", dual.dimension()),
        || {
            let h = dual.hierarchy_bruteforce(dual.dimension(), budget)?;
            Ok((h.clone(), h))
        },
    );

    for r in 1..=r_max {
        let params = format!("r={r},invariant={}", branch.invariant_name());
        rec.timed(format!("ghw.r{r}"), params, || {
            let code_side = code_h
                .as_ref()
                .map(|h| h.deltas[r - 1])
                .ok_or_else(|| skipped("code-side hierarchy"))?;
            Ok((branch.invariant(g, r)?, code_side))
        });
    }

    if r_max >= 1 {
        rec.timed(
            "min_distance".into(),
            format!("invariant={}", branch.invariant_name()),
            || {
                let code_side = code.ghw(1, budget)?.delta;
                let graph_side = match branch {
                    Branch::EdgeConnectivity => min_cut_oracle(g)?,
                    Branch::WeakBiparticity => upsilon_r(g, 1)?.value,
                };
                Ok((graph_side, code_side))
            },
        );
    }

    if let Some(h) = &code_h {
        rec.timed("monotone".into(), String::new(), || {
            Ok((true, h.is_strictly_increasing()))
        });
    }
    if let Some(d) = &dual_h {
        rec.timed("monotone.dual".into(), String::new(), || {
            Ok((true, d.is_strictly_increasing()))
        });
    }
    if let (Some(h), Some(d)) = (&code_h, &dual_h) {
        rec.timed("wei".into(), String::new(), || {
            let full = wei_complete(m, k, h, d)?;
            Ok((full.deltas[..h.len()].to_vec(), h.deltas.clone()))
        });
    }

    let x = points_from_graph(g, field)?;
    let eval_r_max = opts.eval_r_max.unwrap_or(r_max).min(m);
    for &d in &opts.eval_degrees {
        let cx = evaluation_code(&x, d)?;
        rec.timed(format!("eval.d{d}.dim"), format!("d={d}"), || {
            Ok((m, cx.dimension()))
        });
        for r in 1..=eval_r_max {
            rec.timed(format!("eval.d{d}.r{r}"), format!("d={d},r={r}"), || {
                Ok((
                    r,
                    crate::eval::delta_of_code(&cx, r, DeltaMethod::Auto, budget)?,
                ))
            });
        }
    }

    Ok(GraphRun {
        report: rec.report,
        code: code_h,
        dual: dual_h,
    })
}

fn skipped(what: &'static str) -> Error {
    Error::BudgetExceeded {
        what,
        count: "unavailable".into(),
        budget: 0,
    }
}

/// (p, code hierarchy, dual hierarchy)
pub type FixtureTable = (u32, Option<Vec<usize>>, Option<Vec<usize>>);

/// Hierarchies and invariants of a fixture, as compared against golden values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixtureValues {
    pub lambda: usize,
    pub upsilon: usize,
    pub phi_subsets: usize,
    pub phi_signs: usize,
    pub tables: Vec<FixtureTable>,
}

pub fn fixture_invariants(g: &Graph) -> Result<(usize, usize, usize, usize)> {
    Ok((
        lambda_r(g, 1)?.value,
        upsilon_r(g, 1)?.value,
        edge_biparticity_subsets(g)?.value,
        edge_biparticity_signs(g)?.0,
    ))
}

/// Compares computed fixture values against the golden entry.
pub fn compare_golden(
    name: &str,
    values: &FixtureValues,
    golden: &GoldenFixture,
) -> VerificationReport {
    let mut out = VerificationReport::default();
    let mut push = |check: &str, p: Option<u32>, expected: String, actual: String| {
        let status = if expected == actual {
            Status::Pass
        } else {
            Status::Fail
        };
        out.records.push(CheckRecord {
            check: check.to_string(),
            graph: name.to_string(),
            p,
            params: String::new(),
            expected,
            actual,
            status,
            elapsed: Duration::ZERO,
        });
    };
    let inv = &golden.invariants;
    push(
        "golden.lambda",
        None,
        inv.lambda.to_string(),
        values.lambda.to_string(),
    );
    push(
        "golden.upsilon",
        None,
        inv.upsilon.to_string(),
        values.upsilon.to_string(),
    );
    push(
        "golden.phi.subsets",
        None,
        inv.phi.to_string(),
        values.phi_subsets.to_string(),
    );
    push(
        "golden.phi.signs",
        None,
        inv.phi.to_string(),
        values.phi_signs.to_string(),
    );
    for table in &golden.tables {
        let Some((_, code, dual)) = values.tables.iter().find(|(p, _, _)| *p == table.p) else {
            continue;
        };
        let show = |h: &Option<Vec<usize>>| {
            h.as_ref()
                .map_or("unavailable".to_string(), |v| format!("{v:?}"))
        };
        push(
            "golden.code",
            Some(table.p),
            format!("{:?}", table.code),
            show(code),
        );
        push(
            "golden.dual",
            Some(table.p),
            format!("{:?}", table.dual),
            show(dual),
        );
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomCorpus {
    pub s_min: usize,
    pub s_max: usize,
    pub edge_prob: f64,
    pub seed: u64,
    pub count: usize,
}

impl RandomCorpus {
    pub fn new(s_min: usize, s_max: usize, count: usize, seed: u64) -> Self {
        Self {
            s_min,
            s_max,
            edge_prob: 0.5,
            seed,
            count,
        }
    }
}

/// Erdős–Rényi graphs conditioned on connectivity, reproducible from the seed.
pub fn random_graphs(spec: &RandomCorpus) -> Result<Vec<Graph>> {
    if spec.s_min < 2 || spec.s_min > spec.s_max {
        return Err(Error::InvalidArgument(format!(
            "vertex range {}..={} must satisfy 2 <= s_min <= s_max",
            spec.s_min, spec.s_max
        )));
    }
    if !(spec.edge_prob > 0.0 && spec.edge_prob <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "edge probability {} not in (0, 1]",
            spec.edge_prob
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut out = Vec::with_capacity(spec.count);
    while out.len() < spec.count {
        let s = rng.gen_range(spec.s_min..=spec.s_max);
        let mut edges = Vec::new();
        for u in 0..s {
            for v in u + 1..s {
                if rng.gen_bool(spec.edge_prob) {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::new(s, edges)?;
        if g.is_connected() {
            out.push(g);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusSpec {
    pub fixtures: Vec<(String, Graph)>,
    pub golden: Option<GoldenSet>,
    pub random: Option<RandomCorpus>,
    pub fields: Vec<u32>,
    /// `None`: full dimension for fixtures, 3 for random graphs.
    pub r_max: Option<usize>,
    pub budget: u64,
    pub eval_degrees: Vec<u32>,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        Self {
            fixtures: Vec::new(),
            golden: None,
            random: None,
            fields: vec![2, 3],
            r_max: None,
            budget: DEFAULT_BUDGET,
            eval_degrees: vec![2],
        }
    }
}

impl CorpusSpec {
    /// The built-in fixtures with their golden tables.
    pub fn builtin_fixtures() -> Self {
        Self {
            fixtures: vec![
                ("prism".to_string(), crate::fixtures::prism()),
                ("petersen".to_string(), crate::fixtures::petersen()),
            ],
            golden: Some(GoldenSet::builtin()),
            ..Self::default()
        }
    }
}

pub const RANDOM_DEFAULT_R_MAX: usize = 3;

pub fn corpus_verify(spec: &CorpusSpec) -> Result<VerificationReport> {
    let fields = spec
        .fields
        .iter()
        .map(|&p| FieldSpec::new(p as u64))
        .collect::<Result<Vec<_>>>()?;
    let mut report = VerificationReport::default();

    for (name, g) in &spec.fixtures {
        let golden = spec
            .golden
            .as_ref()
            .and_then(|set| set.fixtures.iter().find(|f| &f.name == name));
        let mut tables = Vec::new();
        for &field in &fields {
            let k = Branch::of(g, field).rank(g.vertex_count());
            let opts = VerifyOptions {
                r_max: Some(spec.r_max.map_or(k, |r| r.min(k))),
                budget: spec.budget,
                eval_degrees: spec.eval_degrees.clone(),
                eval_r_max: None,
            };
            let run = run_graph(name, g, field, &opts)?;
            report.extend(run.report);
            if golden.is_some() {
                let code = if run.code.as_ref().is_some_and(|h| h.len() == k) {
                    run.code.map(|h| h.deltas)
                } else {
                    LinearCode::from_generator(&g.incidence_matrix(field))
                        .weight_hierarchy(k, spec.budget)
                        .ok()
                        .map(|h| h.deltas)
                };
                tables.push((field.p(), code, run.dual.map(|h| h.deltas)));
            }
        }
        if let Some(golden) = golden {
            let (lambda, upsilon, phi_subsets, phi_signs) = fixture_invariants(g)?;
            let values = FixtureValues {
                lambda,
                upsilon,
                phi_subsets,
                phi_signs,
                tables,
            };
            report.extend(compare_golden(name, &values, golden));
        }
    }

    if let Some(random) = &spec.random {
        for (i, g) in random_graphs(random)?.iter().enumerate() {
            let name = format!("random-{i:03}-s{}-m{}", g.vertex_count(), g.edge_count());
            for &field in &fields {
                let k = Branch::of(g, field).rank(g.vertex_count());
                let opts = VerifyOptions {
                    r_max: Some(spec.r_max.unwrap_or(RANDOM_DEFAULT_R_MAX).min(k)),
                    budget: spec.budget,
                    eval_degrees: spec.eval_degrees.clone(),
                    eval_r_max: None,
                };
                report.extend(verify_graph(&name, g, field, &opts)?);
            }
        }
    }
    Ok(report)
}
