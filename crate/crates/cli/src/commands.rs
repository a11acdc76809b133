use std::time::Instant;

use ghwlab::codes::Method;
use ghwlab::eval::{evaluation_code, points_from_graph};
use ghwlab::fixtures::{self, GoldenSet};
use ghwlab::invariants::{
    edge_biparticity_signs, edge_biparticity_subsets, lambda_r, upsilon_r, InvariantResult,
};
use ghwlab::verify::{corpus_verify, graph_hierarchy, Branch, CorpusSpec, RandomCorpus, Status};
use ghwlab::{Error, FieldSpec, Graph, LinearCode, Sign, WeightHierarchy};
use serde::Serialize;
use serde_json::{json, Value};

use crate::output::{sha256_hex, Format, OutputDocument, Table, Timing};
use crate::{
    Cli, Command, EvcodeArgs, GraphArgs, GraphInput, HierarchyArgs, HierarchyMethod,
    InvariantsArgs, VerifyArgs, Which,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_DISCONNECTED: u8 = 3;
pub const EXIT_BUDGET: u8 = 4;
pub const EXIT_MISMATCH: u8 = 5;

#[derive(Debug)]
pub struct Failure {
    pub message: String,
    pub exit: u8,
}

impl Failure {
    pub fn usage(message: String) -> Self {
        Self {
            message,
            exit: EXIT_USAGE,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let exit = match e {
            Error::Disconnected => EXIT_DISCONNECTED,
            Error::BudgetExceeded { .. } => EXIT_BUDGET,
            Error::Inconsistent(_) => EXIT_MISMATCH,
            _ => EXIT_USAGE,
        };
        Self {
            message: e.to_string(),
            exit,
        }
    }
}

pub struct Outcome {
    pub rendered: String,
    pub exit: u8,
}

struct Report {
    digest: Option<String>,
    results: Value,
    table: String,
    exit: u8,
}

pub fn run(cli: &Cli, budget: u64) -> Result<Outcome, Failure> {
    let start = Instant::now();
    let (name, args, report) = match &cli.command {
        Command::Invariants(a) => ("invariants", to_value(a), invariants(a)?),
        Command::Hierarchy(a) => ("hierarchy", to_value(a), hierarchy(a, budget)?),
        Command::Verify(a) => ("verify", to_value(a), verify(a, budget)?),
        Command::Evcode(a) => ("evcode", to_value(a), evcode(a, budget)?),
        Command::Graph(a) => ("graph", to_value(a), graph(a)?),
    };
    let rendered = match cli.format {
        Format::Json => {
            let doc = OutputDocument {
                command: json!({ "name": name, "args": args, "budget": budget }),
                input_digest: report.digest,
                results: report.results,
                timing: Timing {
                    elapsed_ms: start.elapsed().as_millis(),
                },
            };
            let mut s = serde_json::to_string_pretty(&doc).expect("document serializes");
            s.push('\n');
            s
        }
        Format::Table => report.table,
    };
    Ok(Outcome {
        rendered,
        exit: report.exit,
    })
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("arguments serialize")
}

fn load_graph(input: &GraphInput) -> Result<(Graph, String), Failure> {
    if let Some(name) = input.graph.strip_prefix("builtin:") {
        let text = match name {
            "prism" => fixtures::PRISM_TEXT,
            "petersen" => fixtures::PETERSEN_TEXT,
            _ => return Err(Failure::usage(format!("unknown builtin graph `{name}`"))),
        };
        return Ok((Graph::parse_edge_list(text)?, sha256_hex(text.as_bytes())));
    }
    let bytes =
        std::fs::read(&input.graph).map_err(|e| Failure::usage(format!("{}: {e}", input.graph)))?;
    let text = std::str::from_utf8(&bytes)
        .map_err(|_| Failure::usage(format!("{}: not UTF-8", input.graph)))?;
    let g = Graph::parse_named(&input.graph, text)
        .map_err(|e| Failure::usage(format!("{}: {e}", input.graph)))?;
    Ok((g, sha256_hex(&bytes)))
}

fn field(p: u64) -> Result<FieldSpec, Failure> {
    Ok(FieldSpec::new(p)?)
}

fn edge_pairs(g: &Graph, set: &ghwlab::EdgeSet) -> Vec<[usize; 2]> {
    set.indices()
        .iter()
        .map(|&j| {
            let (u, v) = g.edge(j);
            [u + 1, v + 1]
        })
        .collect()
}

fn fmt_pairs(pairs: &[[usize; 2]]) -> String {
    let inner: Vec<String> = pairs.iter().map(|[u, v]| format!("{u}-{v}")).collect();
    format!("{{{}}}", inner.join(", "))
}

#[derive(Serialize)]
struct InvariantEntry {
    r: usize,
    value: usize,
    witness: Vec<[usize; 2]>,
    components: usize,
    bipartite_components: usize,
}

fn entry(g: &Graph, r: usize, res: &InvariantResult) -> InvariantEntry {
    InvariantEntry {
        r,
        value: res.value,
        witness: edge_pairs(g, &res.witness),
        components: res.component_count(),
        bipartite_components: res.bipartite_count(),
    }
}

fn invariants(a: &InvariantsArgs) -> Result<Report, Failure> {
    let (g, digest) = load_graph(&a.input)?;
    if !g.is_connected() {
        return Err(Error::Disconnected.into());
    }
    if a.r_max == 0 {
        return Err(Failure::usage("--rmax must be at least 1".into()));
    }
    let s = g.vertex_count();
    let want = |w: Which| a.which == Which::All || a.which == w;
    let mut results = serde_json::Map::new();
    results.insert("s".into(), json!(s));
    results.insert("m".into(), json!(g.edge_count()));
    let mut table = Table::default();
    let mut notes = Vec::new();
    let header: Vec<String> = std::iter::once("r".to_string())
        .chain((1..=a.r_max).map(|r| r.to_string()))
        .collect();
    table.row(header);

    if want(Which::Lambda) {
        let mut entries = Vec::new();
        for r in 1..=a.r_max.min(s.saturating_sub(1)) {
            entries.push(entry(&g, r, &lambda_r(&g, r)?));
        }
        table.row(
            std::iter::once("lambda_r".to_string())
                .chain(entries.iter().map(|e| e.value.to_string())),
        );
        for e in &entries {
            notes.push(format!("lambda_{} witness {}", e.r, fmt_pairs(&e.witness)));
        }
        results.insert("lambda".into(), to_value(&entries));
    }
    if want(Which::Upsilon) {
        let mut entries = Vec::new();
        for r in 1..=a.r_max.min(s) {
            entries.push(entry(&g, r, &upsilon_r(&g, r)?));
        }
        table.row(
            std::iter::once("upsilon_r".to_string())
                .chain(entries.iter().map(|e| e.value.to_string())),
        );
        for e in &entries {
            notes.push(format!("upsilon_{} witness {}", e.r, fmt_pairs(&e.witness)));
        }
        results.insert("upsilon".into(), to_value(&entries));
    }
    if want(Which::Phi) {
        let subsets = edge_biparticity_subsets(&g)?;
        let witness = edge_pairs(&g, &subsets.witness);
        let mut phi = json!({ "subsets": { "value": subsets.value, "witness": witness } });
        notes.push(format!(
            "phi (edge subsets) = {} witness {}",
            subsets.value,
            fmt_pairs(&witness)
        ));
        if s >= 2 {
            let (value, signs) = edge_biparticity_signs(&g)?;
            let signs_str: String = signs
                .0
                .iter()
                .map(|s| if *s == Sign::Plus { '+' } else { '-' })
                .collect();
            notes.push(format!("phi (vertex signs) = {value} signs {signs_str}"));
            phi["signs"] = json!({ "value": value, "signs": signs });
        }
        results.insert("phi".into(), phi);
    }
    let mut rendered = table.render();
    for n in notes {
        rendered.push_str(&n);
        rendered.push('\n');
    }
    Ok(Report {
        digest: Some(digest),
        results: Value::Object(results),
        table: rendered,
        exit: EXIT_OK,
    })
}

fn methods_of(h: &WeightHierarchy) -> Vec<&'static str> {
    h.methods.iter().map(|m| m.as_str()).collect()
}

fn hierarchy(a: &HierarchyArgs, budget: u64) -> Result<Report, Failure> {
    let (g, digest) = load_graph(&a.input)?;
    let f = field(a.p)?;
    if !g.is_connected() {
        return Err(Error::Disconnected.into());
    }
    let code = LinearCode::from_generator(&g.incidence_matrix(f));
    let k = code.dimension();
    let r_max = a.r_max.unwrap_or(k);
    if r_max > k {
        return Err(Failure::usage(format!(
            "--rmax {r_max} exceeds the code dimension {k}"
        )));
    }
    let branch = Branch::of(&g, f);
    let code_h = match a.method {
        HierarchyMethod::Graph => None,
        _ => Some(code.weight_hierarchy(r_max, budget)?),
    };
    let graph_h = match a.method {
        HierarchyMethod::Code => None,
        _ => Some(graph_hierarchy(&g, f, r_max)?),
    };
    let mismatches: Vec<usize> = match (&code_h, &graph_h) {
        (Some(c), Some(gr)) => (1..=r_max)
            .filter(|&r| c.deltas[r - 1] != gr.deltas[r - 1])
            .collect(),
        _ => Vec::new(),
    };
    let primary = code_h
        .as_ref()
        .or(graph_h.as_ref())
        .expect("one method runs");
    let dual_h = if a.dual {
        let dual = code.dual();
        Some(dual.weight_hierarchy(dual.dimension(), budget)?)
    } else {
        None
    };

    let mut t = Table::default();
    let width = r_max.max(dual_h.as_ref().map_or(0, |h| h.len()));
    t.row(std::iter::once("r".to_string()).chain((1..=width).map(|r| r.to_string())));
    let p = f.p();
    t.row(
        std::iter::once(format!("delta_r(C_{p}(G))"))
            .chain(primary.deltas.iter().map(|d| d.to_string())),
    );
    if let Some(c) = &code_h {
        t.row(
            std::iter::once("  code route".to_string())
                .chain(methods_of(c).into_iter().map(String::from)),
        );
    }
    if let Some(gr) = &graph_h {
        t.row(
            std::iter::once(format!("  graph ({}_r)", branch.invariant_name()))
                .chain(gr.deltas.iter().map(|d| d.to_string())),
        );
    }
    if let Some(d) = &dual_h {
        t.row(
            std::iter::once(format!("delta_r(C_{p}(G)^perp)"))
                .chain(d.deltas.iter().map(|d| d.to_string())),
        );
    }
    let mut table = format!("[{}, {}] code over F_{p}\n", code.length(), k);
    table.push_str(&t.render());
    if !mismatches.is_empty() {
        table.push_str(&format!(
            "MISMATCH between code and graph routes at r = {mismatches:?}\n"
        ));
    }

    let results = json!({
        "p": p,
        "n": code.length(),
        "k": k,
        "branch": branch,
        "r_max": r_max,
        "deltas": primary.deltas,
        "methods": methods_of(primary),
        "code": code_h.as_ref().map(|h| &h.deltas),
        "graph": graph_h.as_ref().map(|h| &h.deltas),
        "mismatches": mismatches,
        "dual": dual_h.as_ref().map(|h| json!({
            "k": h.len(),
            "deltas": h.deltas,
            "methods": methods_of(h),
        })),
    });
    Ok(Report {
        digest: Some(digest),
        results,
        table,
        exit: if mismatches.is_empty() {
            EXIT_OK
        } else {
            EXIT_MISMATCH
        },
    })
}

fn verify(a: &VerifyArgs, budget: u64) -> Result<Report, Failure> {
    let mut spec = if a.fixtures {
        CorpusSpec::builtin_fixtures()
    } else {
        CorpusSpec::default()
    };
    let mut digest = None;
    if let Some(path) = &a.golden {
        let bytes =
            std::fs::read(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
        let text = String::from_utf8(bytes)
            .map_err(|_| Failure::usage(format!("{}: not UTF-8", path.display())))?;
        digest = Some(sha256_hex(text.as_bytes()));
        spec.golden = Some(GoldenSet::from_json(&text)?);
    }
    if let Some(r) = &a.random {
        let size = |v: u64| {
            usize::try_from(v).map_err(|_| Failure::usage(format!("--random value {v} too large")))
        };
        spec.random = Some(RandomCorpus {
            s_min: size(r[0])?,
            s_max: size(r[1])?,
            edge_prob: a.prob,
            seed: r.get(3).copied().unwrap_or(a.seed),
            count: size(r[2])?,
        });
    }
    spec.fields =
        a.p.iter()
            .map(|&p| field(p).map(|f| f.p()))
            .collect::<Result<Vec<_>, _>>()?;
    spec.r_max = a.r_max;
    spec.budget = budget;
    spec.eval_degrees = a.degrees.clone();

    let report = corpus_verify(&spec)?;
    let (pass, fail, skipped) = (
        report.count(Status::Pass),
        report.count(Status::Fail),
        report.count(Status::Skipped),
    );
    let ok = report.passed() && !(a.strict && skipped > 0);

    let mut t = Table::default();
    t.row([
        "status", "graph", "p", "check", "params", "expected", "actual",
    ]);
    for r in &report.records {
        let status = match r.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Skipped => "skip",
        };
        t.row([
            status.to_string(),
            r.graph.clone(),
            r.p.map_or("-".to_string(), |p| p.to_string()),
            r.check.clone(),
            r.params.clone(),
            r.expected.clone(),
            r.actual.clone(),
        ]);
    }
    let mut table = t.render();
    table.push_str(&format!(
        "{} checks: {pass} passed, {fail} failed, {skipped} skipped => {}\n",
        report.records.len(),
        if ok { "PASS" } else { "FAIL" }
    ));
    let results = json!({
        "passed": ok,
        "pass": pass,
        "fail": fail,
        "skipped": skipped,
        "records": report.records,
    });
    Ok(Report {
        digest,
        results,
        table,
        exit: if ok { EXIT_OK } else { EXIT_FAILED },
    })
}

fn evcode(a: &EvcodeArgs, budget: u64) -> Result<Report, Failure> {
    let (g, digest) = load_graph(&a.input)?;
    let f = field(a.p)?;
    let x = points_from_graph(&g, f)?;
    let code = evaluation_code(&x, a.d)?;
    let k = code.dimension();
    let r_max = a.r_max.unwrap_or(k);
    if r_max > k {
        return Err(Failure::usage(format!(
            "--rmax {r_max} exceeds the code dimension {k}"
        )));
    }
    let h = code.weight_hierarchy(r_max, budget)?;
    let m = x.len();
    let entries: Vec<Value> = h
        .deltas
        .iter()
        .zip(&h.methods)
        .enumerate()
        .map(|(i, (&d, m_))| json!({ "r": i + 1, "delta": d, "hyp": m - d, "method": m_ }))
        .collect();
    let mut t = Table::default();
    t.row(std::iter::once("r".to_string()).chain((1..=r_max).map(|r| r.to_string())));
    t.row(
        std::iter::once("delta_X(d,r)".to_string()).chain(h.deltas.iter().map(|d| d.to_string())),
    );
    t.row(
        std::iter::once("hyp_X(d,r)".to_string())
            .chain(h.deltas.iter().map(|d| (m - d).to_string())),
    );
    t.row(
        std::iter::once("route".to_string())
            .chain(h.methods.iter().map(|m: &Method| m.as_str().to_string())),
    );
    let table = format!(
        "C_X({}) over F_{}: n = {m}, k = {k}\n{}",
        a.d,
        f.p(),
        t.render()
    );
    let results = json!({ "p": f.p(), "d": a.d, "n": m, "k": k, "deltas": entries });
    Ok(Report {
        digest: Some(digest),
        results,
        table,
        exit: EXIT_OK,
    })
}

fn graph(a: &GraphArgs) -> Result<Report, Failure> {
    let (g, digest) = load_graph(&a.input)?;
    let results: Value = serde_json::from_str(&g.to_json()).expect("graph json");
    Ok(Report {
        digest: Some(digest),
        results,
        table: g.to_edge_list(),
        exit: EXIT_OK,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_classes_map_to_exit_codes() {
        let exit = |e: Error| Failure::from(e).exit;
        assert_eq!(exit(Error::NotPrime(4)), EXIT_USAGE);
        assert_eq!(
            exit(Error::Parse {
                line: 1,
                msg: "x".into()
            }),
            EXIT_USAGE
        );
        assert_eq!(exit(Error::Disconnected), EXIT_DISCONNECTED);
        assert_eq!(
            exit(Error::BudgetExceeded {
                what: "subspaces",
                count: "9".into(),
                budget: 1
            }),
            EXIT_BUDGET
        );
        assert_eq!(exit(Error::Inconsistent("x".into())), EXIT_MISMATCH);
    }
}
