//! Acceptance gate: one line per criterion, nonzero exit if any fails.

use std::process::Command;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;
use serde_json::Value;
use sigcolor::choose5::extend_two_precolored;
use sigcolor::discharging::{apply_rules, initial_charges, Element};
use sigcolor::graph::{
    circuit_balance, equivalent_to_all_positive, is_valid_coloring, switch, verify_coloring, Balance, Color, Coloring,
    Equivalence, ListAssignment, SignedGraph, Vertex,
};
use sigcolor::io::{parse_coloring, write_instance};
use sigcolor::planar::{degeneracy_order, embed, fixtures, has_circuit_of_length, RotationEmbedding};
use sigcolor::solver::{greedy_by_degeneracy, solve, Greedy};
use sigcolor::{random, Charge};

type Verdict = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn binary(args: &[&str]) -> (i32, Value, Duration) {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_sigcolor")).args(args).output().expect("binary runs");
    let took = start.elapsed();
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap_or(-1), v, took)
}

fn cli(args: &[&str], stdin: &str) -> (i32, String) {
    let mut argv = vec!["sigcolor"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = sigcolor::cli::run(argv, &mut stdin.as_bytes(), &mut out, &mut err);
    let text = if code == 0 { out } else { err };
    (code, String::from_utf8(text).expect("utf8"))
}

fn stage<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["stages"].as_array().and_then(|s| s.iter().find(|x| x["name"] == name)).unwrap_or(&Value::Null)
}

fn criterion1() -> Verdict {
    let (code, r, took) = binary(&["verify", "--thm", "4"]);
    ensure(code == 0 && r["status"] == "pass", || format!("exit {code}, report {r}"))?;
    let a = stage(&r, "a");
    let b = stage(&r, "b");
    ensure(a["details"]["colorings"] == 24, || format!("G3 colorings {}", a["details"]["colorings"]))?;
    ensure(a["details"]["exactly_one_special_face_123"] == true, || "special face count".into())?;
    ensure(b["details"]["extensions"] == 0, || format!("H extensions {}", b["details"]["extensions"]))?;
    ensure(b["details"]["whole_instance_unsat"] == true, || "whole instance".into())?;
    ensure(took < Duration::from_secs(10), || format!("took {took:?}"))?;
    Ok(format!("24 colorings of G3, each with one (1,2,3) special face; H has 0 extensions; {took:.2?}"))
}

fn criterion2() -> Verdict {
    let (code, r, took) = binary(&["verify", "--thm", "10"]);
    ensure(code == 0 && r["status"] == "pass", || format!("exit {code}, report {r}"))?;
    let cases = stage(&r, "copies")["details"]["cases"].as_array().cloned().unwrap_or_default();
    ensure(cases.len() == 9, || format!("{} cases", cases.len()))?;
    for c in &cases {
        ensure(c["extensions"] == 0 && c["b_d_forced_6"] == true, || format!("case {c}"))?;
    }
    ensure(stage(&r, "whole")["details"]["unsat"] == true, || "whole instance".into())?;
    ensure(took < Duration::from_secs(300), || format!("took {took:?}"))?;
    Ok(format!("9 boundary cases with 0 extensions, B and D forced to 6; 56-vertex instance UNSAT; {took:.2?}"))
}

fn coloring_from(g: &SignedGraph, out: &str) -> Result<Coloring, String> {
    let v: Value = serde_json::from_str(out).map_err(|e| e.to_string())?;
    parse_coloring(g, &v["coloring"].to_string()).map_err(|e| e.to_string())
}

fn signed_lists_instance(
    emb: &mut RotationEmbedding,
    k: usize,
    lo: Color,
    hi: Color,
    r: &mut impl Rng,
) -> ListAssignment {
    let p = r.gen_range(0.0..=1.0);
    random::sign_embedding(emb, p, r);
    random::lists(emb.graph().len(), k, lo, hi, r)
}

fn criterion3() -> Verdict {
    let mut r = random::rng(303);
    for i in 0..500 {
        let n = r.gen_range(1..=60);
        let mut emb = random::planar(n, r.gen_range(0.0..0.5), &mut r);
        let l = signed_lists_instance(&mut emb, 5, -7, 7, &mut r);
        let g = emb.graph().clone();
        let (code, out) = cli(&["color5"], &write_instance(&g, Some(&l), None));
        ensure(code == 0, || format!("instance {i}: exit {code}: {out}"))?;
        let c = coloring_from(&g, &out)?;
        let bad = verify_coloring(&g, Some(&l), &c).map_err(|e| e.to_string())?;
        ensure(bad.is_empty(), || format!("instance {i}: {bad:?}"))?;
    }
    let mut agree = 0;
    for i in 0..1000 {
        let n = r.gen_range(3..=12);
        let mut emb = random::near_triangulation(n, &mut r);
        random::sign_embedding(&mut emb, 0.5, &mut r);
        let g = emb.graph();
        let outer = emb.outer_face().ok_or("no outer face")?;
        let (v1, v2) = (outer.walk[0], outer.walk[1]);
        let mut l = random::lists(g.len(), 5, -7, 7, &mut r);
        for &v in &outer.walk {
            let mut x = l.get(v).to_vec();
            x.shuffle(&mut r);
            x.truncate(3);
            l.set(v, x);
        }
        let a = l.get(v1)[0];
        let s = g.sign(v1, v2).ok_or("outer edge")?;
        let b = *l.get(v2).iter().find(|&&b| a != s.apply(b)).ok_or("no compatible color")?;
        l.set(v1, vec![a]);
        l.set(v2, vec![b]);
        let c = extend_two_precolored(&emb, &l, v1, v2).map_err(|e| format!("near-triangulation {i}: {e}"))?;
        ensure(is_valid_coloring(g, Some(&l), &c), || format!("near-triangulation {i}: invalid"))?;
        let sat = solve(g, &l).map_err(|e| e.to_string())?.outcome.is_sat();
        ensure(sat, || format!("near-triangulation {i}: solver disagrees"))?;
        agree += 1;
    }
    Ok(format!("500 planar instances colored and verified; {agree} near-triangulations agree with solve"))
}

fn criterion4() -> Verdict {
    let mut r = random::rng(404);
    let mut small = 0;
    for i in 0..300 {
        let n = r.gen_range(5..=60);
        let mut emb = if i % 2 == 0 { random::girth5(n, &mut r) } else { random::girth5_biconnected(n, &mut r) };
        let l = signed_lists_instance(&mut emb, 3, -5, 5, &mut r);
        let g = emb.graph().clone();
        ensure(sigcolor::planar::girth(&g).is_none_or(|x| x >= 5), || format!("instance {i}: girth"))?;
        let (code, out) = cli(&["color3", "--girth5"], &write_instance(&g, Some(&l), Some(&emb)));
        ensure(code == 0, || format!("instance {i}: exit {code}: {out}"))?;
        let c = coloring_from(&g, &out)?;
        ensure(is_valid_coloring(&g, Some(&l), &c), || format!("instance {i}: invalid coloring"))?;
        if g.len() <= 14 {
            small += 1;
            let sat = solve(&g, &l).map_err(|e| e.to_string())?.outcome.is_sat();
            ensure(sat, || format!("instance {i}: solver disagrees"))?;
        }
    }
    Ok(format!("300 girth-5 instances colored and verified; {small} with at most 14 vertices agree with solve"))
}

fn criterion5() -> Verdict {
    let mut r = random::rng(505);
    for k in [3, 5, 6] {
        for i in 0..300 {
            let n = r.gen_range(4..=60);
            let mut emb = random::no_k_circuit(n, k, &mut r);
            let l = signed_lists_instance(&mut emb, 4, -7, 7, &mut r);
            let g = emb.graph();
            ensure(has_circuit_of_length(g, k).is_none(), || format!("k={k} #{i}: class check"))?;
            let (d, order) = degeneracy_order(g);
            ensure(d <= 3, || format!("k={k} #{i}: degeneracy {d}"))?;
            match greedy_by_degeneracy(g, &l, &order).map_err(|e| e.to_string())? {
                Greedy::Sat(c) => ensure(is_valid_coloring(g, Some(&l), &c), || format!("k={k} #{i}: invalid"))?,
                Greedy::Stuck(v) => return Err(format!("k={k} #{i}: greedy stuck at {v}")),
            }
        }
    }
    Ok("900 graphs without 3-, 5- or 6-circuits are 3-degenerate and greedily 4-list-colored".into())
}

fn criterion6() -> Verdict {
    let minus20 = Charge::from_integer(-20);
    let mut corpus: Vec<RotationEmbedding> = [
        fixtures::octahedron(),
        fixtures::dodecahedron(),
        fixtures::icosahedron(),
        fixtures::cube(),
        fixtures::complete(4),
    ]
    .iter()
    .map(|g| embed(g).expect("planar"))
    .collect();
    let mut r = random::rng(606);
    for n in 3..=60 {
        corpus.push(random::triangulation(n, n, &mut r));
        corpus.push(random::planar(n, 0.4, &mut r));
        corpus.push(random::girth5(n, &mut r));
        corpus.push(random::no_k_circuit(n, 4, &mut r));
    }
    corpus.retain(|e| e.graph().is_connected());
    for (i, emb) in corpus.iter().enumerate() {
        let init = initial_charges::<Charge>(emb).map_err(|e| e.to_string())?;
        ensure(init.total_initial() == minus20, || format!("graph {i}: initial total {}", init.total_initial()))?;
        let (l, _) = apply_rules::<Charge>(emb).map_err(|e| e.to_string())?;
        ensure(l.total_final() == minus20 && l.is_consistent(), || {
            format!("graph {i}: final total {}", l.total_final())
        })?;
    }
    let (oct, _) = apply_rules::<Charge>(&corpus[0]).map_err(|e| e.to_string())?;
    let faces: Vec<Charge> = (0..8).map(|f| oct.final_charge[&Element::Face(f)]).collect();
    ensure(faces.iter().all(|c| *c == Charge::from_integer(-1)), || format!("octahedron faces {faces:?}"))?;
    let (dod, _) = apply_rules::<Charge>(&corpus[1]).map_err(|e| e.to_string())?;
    let verts: Vec<Charge> = (0..20).map(|v| dod.final_charge[&Element::Vertex(v)]).collect();
    ensure(verts.iter().all(|c| *c == Charge::from_integer(-1)), || format!("dodecahedron vertices {verts:?}"))?;
    Ok(format!(
        "{} connected plane graphs total -20 before and after the rules; octahedron faces -1; dodecahedron vertices -1",
        corpus.len()
    ))
}

fn criterion7() -> Verdict {
    let (code, r, took) = binary(&["discharge", "claim2", "--exhaustive"]);
    ensure(code == 0 && r["counterexamples"] == 0 && r["status"] == "pass", || format!("hexagon: exit {code}, {r}"))?;
    ensure(took < Duration::from_secs(600), || format!("hexagon sweep took {took:?}"))?;
    let instances = r["instances"].clone();
    let (code, r3, took3) = binary(&["discharge", "claim3", "--samples", "100000", "--seed", "42"]);
    ensure(code == 0 && r3["counterexamples"] == 0 && r3["status"] == "pass", || {
        format!("decagon: exit {code}, {r3}")
    })?;
    Ok(format!(
        "hexagon: {instances} instances over {{0,±1,±2,±3}}, 0 counterexamples, {took:.1?}; decagon: 100000 samples, 0 counterexamples, {} strategy gaps, {took3:.1?}",
        r3["strategy_gaps"]
    ))
}

/// Every circuit once, as a vertex sequence starting at its smallest vertex.
fn circuits(g: &SignedGraph) -> Vec<Vec<Vertex>> {
    fn go(g: &SignedGraph, path: &mut Vec<Vertex>, out: &mut Vec<Vec<Vertex>>) {
        let s = path[0];
        let last = *path.last().expect("nonempty");
        for w in g.neighbors(last) {
            if w == s && path.len() >= 3 && path[1] < last {
                out.push(path.clone());
            }
            if w > s && !path.contains(&w) {
                path.push(w);
                go(g, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    for s in g.vertices() {
        go(g, &mut vec![s], &mut out);
    }
    out
}

fn criterion8() -> Verdict {
    let mut r = random::rng(808);
    let mut checked_circuits = 0;
    for i in 0..1000 {
        let n = r.gen_range(3..=9);
        let mut emb = random::planar(n, 0.3, &mut r);
        let k = r.gen_range(1..=3);
        let l = signed_lists_instance(&mut emb, k, -3, 3, &mut r);
        let g = emb.graph();
        let c = Coloring::new(g.vertices().map(|v| *l.get(v).choose(&mut r).expect("nonempty")).collect());
        let x = random::subset(g.len(), &mut r);
        let (h, hl, hc) = switch(g, Some(&l), Some(&c), &x).map_err(|e| e.to_string())?;
        let (hl, hc) = (hl.ok_or("lists")?, hc.ok_or("coloring")?);
        ensure(is_valid_coloring(g, Some(&l), &c) == is_valid_coloring(&h, Some(&hl), &hc), || {
            format!("#{i}: validity")
        })?;
        for cyc in circuits(g) {
            checked_circuits += 1;
            let a = circuit_balance(g, &cyc).map_err(|e| e.to_string())?;
            let b = circuit_balance(&h, &cyc).map_err(|e| e.to_string())?;
            ensure(a == b, || format!("#{i}: balance of {cyc:?}"))?;
        }
        let sat =
            |g: &SignedGraph, l: &ListAssignment| solve(g, l).map(|s| s.outcome.is_sat()).map_err(|e| e.to_string());
        ensure(sat(g, &l)? == sat(&h, &hl)?, || format!("#{i}: solve status"))?;
        for graph in [g, &h] {
            match equivalent_to_all_positive(graph) {
                Equivalence::Yes(set) => {
                    let (p, _, _) = switch(graph, None, None, &set).map_err(|e| e.to_string())?;
                    ensure(p.all_positive(), || format!("#{i}: certificate does not re-switch to all positive"))?;
                }
                Equivalence::No(cyc) => {
                    let b = circuit_balance(graph, &cyc).map_err(|e| e.to_string())?;
                    ensure(b == Balance::Unbalanced, || format!("#{i}: certificate circuit is balanced"))?;
                }
            }
        }
        let same = matches!(
            (equivalent_to_all_positive(g), equivalent_to_all_positive(&h)),
            (Equivalence::Yes(_), Equivalence::Yes(_)) | (Equivalence::No(_), Equivalence::No(_))
        );
        ensure(same, || format!("#{i}: equivalence class changed"))?;
    }
    Ok(format!("1000 switched quadruples: validity, {checked_circuits} circuit balances and SAT status invariant; certificates re-verified"))
}

fn main() {
    #[allow(clippy::type_complexity)]
    let criteria: [(&str, fn() -> Verdict); 8] = [
        ("gadget verification, signed 4-lists", criterion1),
        ("gadget verification, signed 3-lists at girth 4", criterion2),
        ("5-list coloring of planar graphs", criterion3),
        ("3-list coloring at girth 5", criterion4),
        ("degeneracy of graphs without k-circuits", criterion5),
        ("discharging totals", criterion6),
        ("reducible configurations", criterion7),
        ("switching invariance", criterion8),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = f();
        let took = start.elapsed();
        match res {
            Ok(msg) => println!("criterion {}: PASS ({name}): {msg} [{took:.1?}]", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL ({name}): {msg} [{took:.1?}]", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("acceptance: {failed} of 8 criteria failed");
        std::process::exit(1);
    }
    println!("acceptance: all 8 criteria passed");
}
