//! Acceptance criteria, one PASS/FAIL line each. Run with
//! `cargo test -p ghwlab-cli --test acceptance -- --nocapture`.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use ghwlab::eval::{biparticity_via_forms, evaluation_code, points_from_graph, FormDomain};
use ghwlab::fixtures::{self, GoldenSet};
use ghwlab::invariants::{
    edge_biparticity_signs, edge_biparticity_subsets, lambda_r, min_cut_oracle, upsilon_r,
};
use ghwlab::verify::{
    compare_golden, fixture_invariants, random_graphs, FixtureValues, RandomCorpus,
};
use ghwlab::{wei_complete, FieldSpec, Graph, LinearCode, Method, WeightHierarchy, DEFAULT_BUDGET};
use serde_json::Value;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn single_threaded<T: Send>(f: impl FnOnce() -> T + Send) -> (T, Duration) {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let start = Instant::now();
    let out = pool.install(f);
    (out, start.elapsed())
}

fn field(p: u64) -> FieldSpec {
    FieldSpec::new(p).unwrap()
}

fn code_of(g: &Graph, p: u64) -> LinearCode {
    LinearCode::from_generator(&g.incidence_matrix(field(p)))
}

fn brute(code: &LinearCode) -> Result<Vec<usize>, String> {
    code.hierarchy_bruteforce(code.dimension(), DEFAULT_BUDGET)
        .map(|h| h.deltas)
        .map_err(|e| e.to_string())
}

fn complete_from_dual(code: &LinearCode, dual_deltas: &[usize]) -> Result<Vec<usize>, String> {
    let dual = WeightHierarchy::new(dual_deltas.to_vec(), Method::BruteForce);
    wei_complete(
        code.length(),
        code.dimension(),
        &WeightHierarchy::default(),
        &dual,
    )
    .map(|h| h.deltas)
    .map_err(|e| e.to_string())
}

fn two_colourable(g: &Graph) -> bool {
    let s = g.vertex_count();
    let mut colour = vec![None; s];
    colour[0] = Some(0u8);
    let mut stack = vec![0];
    while let Some(u) = stack.pop() {
        for &(a, b) in g.edges() {
            let v = if a == u {
                b
            } else if b == u {
                a
            } else {
                continue;
            };
            match colour[v] {
                None => {
                    colour[v] = Some(1 - colour[u].unwrap());
                    stack.push(v);
                }
                Some(c) if c == colour[u].unwrap() => return false,
                _ => {}
            }
        }
    }
    true
}

/// The invariant selected for `C_p(G)`: `upsilon_r` when `p` is odd and `G` has
/// an odd cycle, `lambda_r` otherwise.
fn selected_invariant(g: &Graph, p: u64, r: usize) -> usize {
    if p != 2 && !two_colourable(g) {
        upsilon_r(g, r).unwrap().value
    } else {
        lambda_r(g, r).unwrap().value
    }
}

fn graph_side(g: &Graph, p: u64, k: usize) -> Vec<usize> {
    (1..=k).map(|r| selected_invariant(g, p, r)).collect()
}

fn prism_hierarchies() -> Check {
    let g = fixtures::prism();
    let expected: [(u64, &[usize], &[usize]); 2] = [
        (2, &[3, 5, 6, 8, 9], &[3, 6, 8, 9]),
        (3, &[2, 4, 5, 7, 8, 9], &[4, 7, 9]),
    ];
    let (res, elapsed) = single_threaded(|| -> Result<(), String> {
        for (p, code_h, dual_h) in expected {
            let code = code_of(&g, p);
            let dual = code.dual();
            let brute_code = brute(&code)?;
            let brute_dual = brute(&dual)?;
            let graph = graph_side(&g, p, code.dimension());
            let wei_code = complete_from_dual(&code, &brute_dual)?;
            let wei_dual = complete_from_dual(&dual, &brute_code)?;
            for (label, got, want) in [
                ("brute C", &brute_code, code_h),
                ("graph C", &graph, code_h),
                ("Wei C", &wei_code, code_h),
                ("brute dual", &brute_dual, dual_h),
                ("Wei dual", &wei_dual, dual_h),
            ] {
                ensure(got == want, || {
                    format!("p={p} {label}: {got:?} != {want:?}")
                })?;
            }
        }
        Ok(())
    });
    res?;
    ensure(elapsed < Duration::from_secs(10), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "three routes agree for p=2,3 in {elapsed:.2?} on one thread"
    ))
}

fn petersen_hierarchies() -> Check {
    let g = fixtures::petersen();
    let (res, elapsed) = single_threaded(|| -> Result<(), String> {
        let c2 = code_of(&g, 2);
        let want2 = vec![3, 5, 7, 9, 10, 12, 13, 14, 15];
        let want2d = vec![5, 8, 10, 12, 14, 15];
        ensure(brute(&c2)? == want2, || "C_2 brute force".into())?;
        ensure(graph_side(&g, 2, 9) == want2, || "C_2 lambda_r".into())?;
        ensure(brute(&c2.dual())? == want2d, || {
            "C_2 dual brute force".into()
        })?;

        let c3 = code_of(&g, 3);
        let want3 = vec![3, 5, 7, 8, 9, 11, 12, 13, 14, 15];
        let want3d = vec![6, 10, 12, 14, 15];
        let dual3 = brute(&c3.dual())?;
        ensure(dual3 == want3d, || {
            format!("C_3 dual brute force {dual3:?}")
        })?;
        let wei = complete_from_dual(&c3, &dual3)?;
        ensure(wei == want3, || format!("C_3 by Wei {wei:?}"))?;
        let ups = graph_side(&g, 3, 10);
        ensure(ups == want3, || format!("C_3 by upsilon_r {ups:?}"))?;
        Ok(())
    });
    res?;
    ensure(elapsed < Duration::from_secs(120), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!("C_2, C_2 dual, C_3 dual by brute force, C_3 by Wei and upsilon_r, in {elapsed:.2?} on one thread"))
}

fn stated_invariants() -> Check {
    for (name, want) in [("prism", (3, 2, 2)), ("petersen", (3, 3, 3))] {
        let g = fixtures::by_name(name).unwrap();
        let lambda = lambda_r(&g, 1).unwrap().value;
        let upsilon = upsilon_r(&g, 1).unwrap().value;
        let phi = edge_biparticity_subsets(&g).unwrap().value;
        let phi_signs = edge_biparticity_signs(&g).unwrap().0;
        ensure((lambda, upsilon, phi) == want && phi_signs == phi, || {
            format!("{name}: lambda={lambda} upsilon={upsilon} phi={phi}/{phi_signs}")
        })?;
    }
    Ok("prism lambda=3 upsilon=2 phi=2; petersen lambda=upsilon=phi=3".into())
}

fn rank_law() -> Check {
    let graphs = random_graphs(&RandomCorpus::new(2, 8, 60, 2024)).unwrap();
    let mut checks = 0;
    for g in &graphs {
        let (s, m) = (g.vertex_count(), g.edge_count());
        for p in [2u64, 3, 5] {
            let a = g.incidence_matrix(field(p));
            let want = if p != 2 && !two_colourable(g) {
                s
            } else {
                s - 1
            };
            ensure(a.rank() == want, || {
                format!("rank {} != {want} for {:?} p={p}", a.rank(), g.edges())
            })?;
            let code = code_of(g, p);
            ensure(code.dimension() + code.dual().dimension() == m, || {
                format!("dimension sum for {:?}", g.edges())
            })?;
            checks += 1;
        }
    }
    Ok(format!(
        "{} graphs, {checks} (graph, p) pairs",
        graphs.len()
    ))
}

fn random_corpus() -> Vec<Graph> {
    random_graphs(&RandomCorpus::new(4, 7, 24, 99)).unwrap()
}

fn code_graph_equality() -> Check {
    let graphs = random_corpus();
    let start = Instant::now();
    let mut checks = 0;
    for g in &graphs {
        for p in [2u64, 3] {
            let code = code_of(g, p);
            for r in 1..=3.min(code.dimension()) {
                let delta = code
                    .ghw(r, DEFAULT_BUDGET)
                    .map_err(|e| e.to_string())?
                    .delta;
                let inv = selected_invariant(g, p, r);
                ensure(delta == inv, || {
                    format!("{:?} p={p} r={r}: delta={delta} invariant={inv}", g.edges())
                })?;
                checks += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "{} graphs, {checks} comparisons, {elapsed:.2?}",
        graphs.len()
    ))
}

fn higher_degree() -> Check {
    let mut graphs = random_corpus();
    graphs.extend([fixtures::prism(), fixtures::petersen()]);
    let mut checks = 0;
    for g in &graphs {
        let m = g.edge_count();
        for p in [2u64, 3] {
            let x = points_from_graph(g, field(p)).unwrap();
            for d in [2u32, 3] {
                let code = evaluation_code(&x, d).unwrap();
                ensure(code.dimension() == m, || {
                    format!("dim C_X({d}) = {} != {m}", code.dimension())
                })?;
                let r_max = m.min(5);
                let h = code
                    .weight_hierarchy(r_max, DEFAULT_BUDGET)
                    .map_err(|e| e.to_string())?;
                ensure(h.deltas == (1..=r_max).collect::<Vec<_>>(), || {
                    format!("delta_X({d}, r) = {:?}", h.deltas)
                })?;
                checks += 1;
            }
        }
    }
    Ok(format!(
        "{} graphs x p in {{2,3}} x d in {{2,3}}: {checks} codes full",
        graphs.len()
    ))
}

fn cli_results(args: &[&str]) -> Result<Value, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_ghwlab"))
        .arg("--format")
        .arg("json")
        .args(args)
        .env_remove("GHWLAB_BUDGET")
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || {
        format!("{args:?} exited {:?}", out.status.code())
    })?;
    let doc: Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    Ok(doc["results"].clone())
}

fn property_suites() -> Check {
    let graphs = random_graphs(&RandomCorpus::new(3, 7, 40, 7)).unwrap();
    let mut wei_checked = 0;
    let mut phi_checked = 0;
    for g in &graphs {
        let s = g.vertex_count();
        let m = g.edge_count();
        let lambda: Vec<usize> = (1..s).map(|r| lambda_r(g, r).unwrap().value).collect();
        let upsilon: Vec<usize> = (1..=s).map(|r| upsilon_r(g, r).unwrap().value).collect();
        ensure(lambda.windows(2).all(|w| w[0] < w[1]), || {
            format!("lambda not strict {lambda:?}")
        })?;
        ensure(upsilon.windows(2).all(|w| w[0] < w[1]), || {
            format!("upsilon not strict {upsilon:?}")
        })?;
        ensure(min_cut_oracle(g).unwrap() == lambda[0], || {
            format!("min cut != lambda_1 on {:?}", g.edges())
        })?;

        if m <= 12 {
            for p in [2u64, 3] {
                let code = code_of(g, p);
                let dual = code.dual();
                let (Ok(a), Ok(b)) = (brute(&code), brute(&dual)) else {
                    continue;
                };
                ensure(
                    code.weight_hierarchy(code.dimension(), DEFAULT_BUDGET)
                        .unwrap()
                        .is_strictly_increasing(),
                    || "code hierarchy not strict".into(),
                )?;
                let mut all: BTreeSet<usize> = a.iter().copied().collect();
                let disjoint = b.iter().all(|d| all.insert(m + 1 - d));
                ensure(disjoint && all == (1..=m).collect(), || {
                    format!("Wei identity fails for {:?}", g.edges())
                })?;
                wei_checked += 1;
            }
        }

        let phi = edge_biparticity_subsets(g).unwrap().value;
        ensure(edge_biparticity_signs(g).unwrap().0 == phi, || {
            "phi by signs".into()
        })?;
        for p in [3u64, 5] {
            let x = points_from_graph(g, field(p)).unwrap();
            if !two_colourable(g) {
                let forms = biparticity_via_forms(&x, FormDomain::PmOne).unwrap();
                ensure(forms == phi, || {
                    format!("phi by +-1 forms over F_{p}: {forms} != {phi}")
                })?;
                phi_checked += 1;
            }
            let zero_pm = biparticity_via_forms(&x, FormDomain::ZeroPmOne).unwrap();
            let d1 = code_of(g, p).ghw(1, DEFAULT_BUDGET).unwrap().delta;
            ensure(zero_pm == d1, || {
                format!("{{0,+-1}} forms {zero_pm} != delta_1 {d1} over F_{p}")
            })?;
        }
    }

    for args in [
        &["invariants", "builtin:petersen", "--rmax", "3"][..],
        &["hierarchy", "builtin:prism", "--p", "3", "--dual"][..],
        &["verify", "--random", "4", "6", "4", "--seed", "11"][..],
    ] {
        let one = cli_results(&[&["--threads", "1"], args].concat())?;
        let four = cli_results(&[&["--threads", "4"], args].concat())?;
        ensure(one == four, || {
            format!("{args:?} differs between 1 and 4 threads")
        })?;
    }
    Ok(format!(
        "{} graphs: monotonicity, min cut, {wei_checked} Wei identities, {phi_checked} +-1 form checks, CLI thread determinism",
        graphs.len()
    ))
}

fn fixture_values(g: &Graph) -> FixtureValues {
    let (lambda, upsilon, phi_subsets, phi_signs) = fixture_invariants(g).unwrap();
    let tables = [2u32, 3]
        .iter()
        .map(|&p| {
            let code = code_of(g, p as u64);
            let dual = code.dual();
            (
                p,
                code.weight_hierarchy(code.dimension(), DEFAULT_BUDGET)
                    .ok()
                    .map(|h| h.deltas),
                dual.weight_hierarchy(dual.dimension(), DEFAULT_BUDGET)
                    .ok()
                    .map(|h| h.deltas),
            )
        })
        .collect();
    FixtureValues {
        lambda,
        upsilon,
        phi_subsets,
        phi_signs,
        tables,
    }
}

fn verify_exit(golden: &GoldenSet) -> Result<i32, String> {
    let mut file = tempfile::Builder::new()
        .suffix(".json")
        .tempfile()
        .map_err(|e| e.to_string())?;
    std::io::Write::write_all(&mut file, golden.to_json().as_bytes()).map_err(|e| e.to_string())?;
    let out = Command::new(env!("CARGO_BIN_EXE_ghwlab"))
        .args(["verify", "--fixtures", "--golden"])
        .arg(file.path())
        .env_remove("GHWLAB_BUDGET")
        .output()
        .map_err(|e| e.to_string())?;
    out.status.code().ok_or_else(|| "killed".to_string())
}

fn mutation_guard() -> Check {
    let golden = GoldenSet::builtin();
    ensure(verify_exit(&golden)? == 0, || {
        "clean golden file does not verify".into()
    })?;

    // every single-value corruption, against the comparison the verify command uses
    let computed: Vec<(String, FixtureValues)> = golden
        .fixtures
        .iter()
        .map(|f| {
            (
                f.name.clone(),
                fixture_values(&fixtures::by_name(&f.name).unwrap()),
            )
        })
        .collect();
    let caught = |bad: &GoldenSet| {
        bad.fixtures.iter().any(|gf| {
            let (_, v) = computed.iter().find(|(n, _)| *n == gf.name).unwrap();
            !compare_golden(&gf.name, v, gf).passed()
        })
    };
    let originals: Vec<usize> = golden
        .clone()
        .values_mut()
        .into_iter()
        .map(|v| *v)
        .collect();
    for (i, &orig) in originals.iter().enumerate() {
        let mut bad = golden.clone();
        *bad.values_mut()[i] = orig + 1;
        ensure(caught(&bad), || {
            format!("golden value {i} corrupted to {} not caught", orig + 1)
        })?;
    }

    // through the binary: one corruption per fixture and golden field
    let mut cli_runs = 0;
    let mut offset = 0;
    for fixture in &golden.fixtures {
        let mut picks = vec![offset, offset + 1, offset + 2];
        let mut at = offset + 3;
        for t in &fixture.tables {
            picks.push(at + t.code.len() / 2);
            at += t.code.len();
            picks.push(at + t.dual.len() - 1);
            at += t.dual.len();
        }
        offset = at;
        for i in picks {
            let mut bad = golden.clone();
            *bad.values_mut()[i] += 1;
            let exit = verify_exit(&bad)?;
            ensure(exit != 0, || {
                format!("verify exited 0 with golden value {i} corrupted")
            })?;
            cli_runs += 1;
        }
    }
    ensure(offset == originals.len(), || {
        "golden value layout changed".into()
    })?;
    Ok(format!(
        "{} corruptions caught by comparison, {cli_runs} verify runs exited nonzero",
        originals.len()
    ))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 8] = [
        ("1 prism hierarchies", prism_hierarchies),
        ("2 petersen hierarchies", petersen_hierarchies),
        ("3 stated invariant values", stated_invariants),
        ("4 rank and dimension law", rank_law),
        (
            "5 code and graph hierarchies agree for r <= 3",
            code_graph_equality,
        ),
        ("6 degree >= 2 codes", higher_degree),
        ("7 property suites", property_suites),
        ("8 mutation guard", mutation_guard),
    ];
    let mut failed = Vec::new();
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS  criterion {name}: {detail}"),
            Err(why) => {
                println!("FAIL  criterion {name}: {why}");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
