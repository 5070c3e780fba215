//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Set `HECKESTRAT_LONG=1` to include B3 in the KL oracle comparison.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use heckestrat::cells::{a_function_scan, CellDecomposition};
use heckestrat::coeffs::{LaurentInt, LocalRing};
use heckestrat::hecke::oracle::{bar_t_basis, kl_column_by_bar};
use heckestrat::hecke::{x_lambda, HTable, KlTable};
use heckestrat::hmod::{coinvariant_dim, ext1_local, hom_dim, ideal_quotient, lemma_nm_basis, lemma_strict_check, qperm_module};
use heckestrat::jring::{varpi_t1_rank, verify_lemma51, JRing};
use heckestrat::strat::{verify_f_direction, StratContext};
use heckestrat::weyl::{Elt, EltSet, ParabolicSet, WeylGroup};

type Check = Result<String, String>;

struct Setup {
    h: HTable<'static>,
    cells: CellDecomposition,
}

fn setup(label: &str) -> Setup {
    let g: &'static WeylGroup = Box::leak(Box::new(WeylGroup::from_label(label).unwrap()));
    let kl: &'static KlTable = Box::leak(Box::new(KlTable::new(g).unwrap()));
    let h = HTable::new(g, kl);
    let cells = CellDecomposition::compute(&h).unwrap();
    Setup { h, cells }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn long_run() -> bool {
    std::env::var("HECKESTRAT_LONG").is_ok_and(|v| v == "1")
}

fn c1_kl_oracle() -> Check {
    let mut types = vec!["A2", "B2", "G2", "A3"];
    if long_run() {
        types.push("B3");
    }
    for ty in &types {
        let g = WeylGroup::from_label(ty).unwrap();
        let kl = KlTable::new(&g).unwrap();
        let bar_t = bar_t_basis(&g);
        for w in g.elements() {
            let col = kl_column_by_bar(&g, &bar_t, w).map_err(|e| e.to_string())?;
            for y in g.elements() {
                ensure(col[y] == kl.get(y, w), || format!("{ty}: P_{{{},{}}} differs", g.render(y), g.render(w)))?;
            }
        }
    }
    Ok(format!("types {}", types.join(",")))
}

/// Permutation of `{0..n}` for a word in the simple transpositions, composed as functions.
fn permutation(word: &[u8], n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for &s in word.iter().rev() {
        for v in p.iter_mut() {
            if *v == s as usize {
                *v += 1;
            } else if *v == s as usize + 1 {
                *v -= 1;
            }
        }
    }
    p
}

/// Robinson-Schensted: `(P, Q)` for a one-line permutation.
fn rsk(perm: &[usize]) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let mut p: Vec<Vec<usize>> = Vec::new();
    let mut q: Vec<Vec<usize>> = Vec::new();
    for (i, &v) in perm.iter().enumerate() {
        let mut x = v;
        let mut row = 0;
        loop {
            if row == p.len() {
                p.push(vec![x]);
                q.push(vec![i]);
                break;
            }
            match p[row].iter().position(|&y| y > x) {
                Some(k) => {
                    std::mem::swap(&mut p[row][k], &mut x);
                    row += 1;
                }
                None => {
                    p[row].push(x);
                    q[row].push(i);
                    break;
                }
            }
        }
    }
    (p, q)
}

fn partition_of<K: Ord>(n: usize, key: impl Fn(Elt) -> K) -> BTreeSet<BTreeSet<Elt>> {
    let mut m: BTreeMap<K, BTreeSet<Elt>> = BTreeMap::new();
    for w in 0..n {
        m.entry(key(w)).or_default().insert(w);
    }
    m.into_values().collect()
}

fn c2_cell_counts() -> Check {
    let a2 = setup("A2");
    ensure(a2.cells.num_left_cells() == 4 && a2.cells.num_two_sided_cells() == 3, || "A2 counts".into())?;
    let a3 = setup("A3");
    let g = a3.h.group();
    ensure(a3.cells.num_left_cells() == 10 && a3.cells.num_two_sided_cells() == 5, || "A3 counts".into())?;
    let perms: Vec<Vec<usize>> = g.elements().map(|w| permutation(g.word(w), 4)).collect();
    let tableaux: Vec<_> = perms.iter().map(|p| rsk(p)).collect();
    let by_q = partition_of(g.size(), |w| tableaux[w].1.clone());
    let by_shape = partition_of(g.size(), |w| tableaux[w].0.iter().map(Vec::len).collect::<Vec<_>>());
    let left: BTreeSet<BTreeSet<Elt>> = a3.cells.left_cells().iter().map(|c| c.iter().copied().collect()).collect();
    let two: BTreeSet<BTreeSet<Elt>> = a3.cells.two_sided_cells().iter().map(|c| c.iter().copied().collect()).collect();
    ensure(left == by_q, || "A3 left cells differ from recording tableaux".into())?;
    ensure(two == by_shape, || "A3 two-sided cells differ from RSK shapes".into())?;
    let involutions = perms.iter().filter(|p| (0..4).all(|i| p[p[i]] == i)).count();
    ensure(involutions == a3.cells.num_left_cells(), || "involution count".into())?;

    for ty in ["A1", "A2", "B2", "G2", "A3", "B3"] {
        let s = setup(ty);
        let g = s.h.group();
        let kl = s.h.kl();
        let a = a_function_scan(&s.h);
        // D = {z : a(z) = l(z) - 2 deg P_{e,z}}
        let d: Vec<Elt> = g
            .elements()
            .filter(|&z| a[z] as i64 == g.length(z) as i64 - 2 * kl.get(g.identity(), z).max_exp().unwrap_or(0))
            .collect();
        for lc in 0..s.cells.num_left_cells() {
            let here: Vec<Elt> = d.iter().copied().filter(|&z| s.cells.left_cell_of(z) == lc).collect();
            ensure(here.len() == 1, || format!("{ty}: left cell {lc} has {} distinguished involutions", here.len()))?;
            ensure(g.inverse(here[0]) == here[0], || format!("{ty}: not an involution"))?;
            ensure(s.cells.distinguished()[lc] == here[0], || format!("{ty}: distinguished element of cell {lc}"))?;
        }
    }
    Ok("A2 4/3, A3 10/5 (RSK), distinguished involutions in A1..B3".into())
}

fn c3_a_function() -> Check {
    for (ty, n) in [("A2", 3), ("B2", 4), ("A3", 6), ("G2", 6)] {
        let s = setup(ty);
        let g = s.h.group();
        let a = a_function_scan(&s.h);
        ensure(a[g.identity()] == 0 && a[g.longest()] == n, || format!("{ty}: a(e)={}, a(w0)={}", a[g.identity()], a[g.longest()]))?;
        for c in s.cells.two_sided_cells() {
            ensure(c.iter().all(|&z| a[z] == a[c[0]]), || format!("{ty}: a not constant on a two-sided cell"))?;
        }
        ensure(g.elements().all(|z| a[z] == a[g.inverse(z)]), || format!("{ty}: a(z) != a(z^-1)"))?;
        ensure(g.elements().all(|z| a[z] == s.cells.a(z)), || format!("{ty}: cached a differs from the scan"))?;
    }
    Ok("A2, B2, A3, G2".into())
}

fn c4_structure_constants() -> Check {
    let mut count = 0usize;
    for ty in ["A1", "A2", "B2", "G2", "A3", "B3"] {
        let s = setup(ty);
        let g = s.h.group();
        s.h.fill();
        let support = g.size() <= 24;
        for x in g.elements() {
            let row = s.h.row(x);
            for y in g.elements() {
                for (z, c) in &row[y] {
                    count += 1;
                    ensure(c.has_nonnegative_coeffs() && c.is_bar_invariant(), || format!("{ty}: h({x},{y},{z}) = {c}"))?;
                    if support {
                        ensure(s.cells.leq_left(*z, y) && s.cells.leq_right(*z, x), || format!("{ty}: support of h({x},{y},{z})"))?;
                    }
                }
            }
        }
    }
    Ok(format!("{count} nonzero constants"))
}

fn c5_order_compatibility() -> Check {
    for ty in ["A2", "B2", "G2", "A3"] {
        let s = setup(ty);
        let c = &s.cells;
        for a in 0..c.num_left_cells() {
            for b in 0..c.num_left_cells() {
                if a != b && c.left_cell_leq(a, b) && c.two_sided_of_left(a) != c.two_sided_of_left(b) {
                    ensure(c.f_left(a) > c.f_left(b), || format!("{ty}: left cells {a} < {b}"))?;
                }
                if a != b && c.left_cell_leq(a, b) && c.two_sided_of_left(a) == c.two_sided_of_left(b) {
                    return Err(format!("{ty}: strict left order inside a two-sided cell"));
                }
            }
        }
        for a in 0..c.num_two_sided_cells() {
            for b in 0..c.num_two_sided_cells() {
                if a != b && c.two_sided_leq(a, b) {
                    ensure(c.f_two_sided(a) > c.f_two_sided(b), || format!("{ty}: two-sided cells {a} < {b}"))?;
                }
            }
        }
    }
    Ok("A2, B2, G2, A3".into())
}

fn c6_lemma51() -> Check {
    for ty in ["A2", "B2", "A3"] {
        let s = setup(ty);
        let j = JRing::new(&s.h, &s.cells);
        for lc in 0..s.cells.num_left_cells() {
            let r = verify_lemma51(&s.h, &s.cells, &j, lc);
            ensure(r.pass, || format!("{ty}: cell {lc} violations {:?}", r.violations))?;
        }
        let rank = varpi_t1_rank(&j);
        ensure(rank == s.h.group().size(), || format!("{ty}: varpi rank at t=1 is {rank}"))?;
    }
    Ok("A2, B2, A3".into())
}

/// Longest element of each coset `W_lambda w`, by breadth-first search under left multiplication.
fn coset_maxima(g: &WeylGroup, lambda: ParabolicSet) -> BTreeSet<Elt> {
    let mut seen = vec![false; g.size()];
    let mut out = BTreeSet::new();
    for start in g.elements() {
        if seen[start] {
            continue;
        }
        let mut best = start;
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(w) = queue.pop_front() {
            if g.length(w) > g.length(best) {
                best = w;
            }
            for s in lambda.members() {
                let v = g.lmul(s, w);
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        out.insert(best);
    }
    out
}

fn c7_qperm() -> Check {
    let mut n = 0;
    for ty in ["A2", "B2", "A3"] {
        let s = setup(ty);
        let g = s.h.group();
        for l in ParabolicSet::all(g.rank()) {
            n += 1;
            let d = qperm_module(&s.h, &s.cells, l).map_err(|e| e.to_string())?;
            let oracle = coset_maxima(g, l);
            let tag = format!("{ty} lambda={}", l.label());
            ensure(d.module.dim() == oracle.len(), || format!("{tag}: dim {}", d.module.dim()))?;
            ensure(d.module.dim() * g.parabolic_subgroup(l).len() == g.size(), || format!("{tag}: index"))?;
            ensure(d.right_basis.iter().copied().collect::<BTreeSet<_>>() == oracle, || format!("{tag}: basis"))?;
            let w0 = g.longest_element(l);
            let scaled = s.h.kl().cprime(w0).scale(&LaurentInt::monomial(1, g.length(w0) as i64));
            ensure(x_lambda(g, l) == scaled, || format!("{tag}: x_lambda"))?;
            let bottom = d.module.filtration.as_ref().map(|f| f.sections[0].1);
            ensure(d.bottom == s.cells.left_cell_of(w0) && bottom == Some(d.bottom), || format!("{tag}: bottom section"))?;
            ensure(d.module.filtration_is_invariant(), || format!("{tag}: filtration"))?;
            ensure(lemma_strict_check(&s.cells, &d), || format!("{tag}: strict f-inequality"))?;
        }
    }
    Ok(format!("{n} parabolic subsets"))
}

fn lower_set(s: &Setup, lc: usize, strict: bool) -> EltSet {
    let g = s.h.group();
    let rep = s.cells.left_cell(lc)[0];
    let mut set = EltSet::new(g.size());
    for w in g.elements() {
        if s.cells.leq_left(w, rep) && !(strict && s.cells.left_cell_of(w) == lc) {
            set.insert(w);
        }
    }
    set
}

fn c8_nm() -> Check {
    let mut n = 0;
    for ty in ["A2", "B2", "A3"] {
        let s = setup(ty);
        let g = s.h.group();
        let mut full = EltSet::new(g.size());
        g.elements().for_each(|w| full.insert(w));
        let mut pairs = vec![(full, EltSet::new(g.size()))];
        for lc in 0..s.cells.num_left_cells() {
            pairs.push((lower_set(&s, lc, false), lower_set(&s, lc, true)));
            pairs.push((lower_set(&s, lc, false), EltSet::new(g.size())));
        }
        for (m, sub) in &pairs {
            let (basis, module) = ideal_quotient(&s.h, m, sub).map_err(|e| e.to_string())?;
            for e in [3, 4, 6] {
                let mk = module.over(LocalRing::new(e).residue());
                for l in ParabolicSet::all(g.rank()) {
                    n += 1;
                    let r = lemma_nm_basis(&s.h, &basis, &mk, l).map_err(|e| e.to_string())?;
                    ensure(r.pass, || format!("{ty} e={e}: {r:?}"))?;
                }
            }
        }
    }
    Ok(format!("{n} (quotient, lambda, e) triples"))
}

fn c9_direction() -> Check {
    for ty in ["A2", "B2", "A3"] {
        let s = setup(ty);
        for e in [1, 3, 4, 6] {
            let ctx = StratContext::new(&s.h, &s.cells, e);
            let r = verify_f_direction(&ctx).map_err(|e| e.to_string())?;
            ensure(r.pass, || format!("{ty} e={e}: violations {:?}", r.violations))?;
        }
    }
    Ok("A2, B2, A3 at e=1,3,4,6".into())
}

fn c10_vanishing() -> Check {
    let mut n = 0;
    for ty in ["A2", "B2", "A3"] {
        let s = setup(ty);
        let g = s.h.group();
        for e in [3, 4, 6] {
            let ctx = StratContext::new(&s.h, &s.cells, e);
            for l in ParabolicSet::all(g.rank()) {
                let x = qperm_module(&s.h, &s.cells, l).map_err(|e| e.to_string())?.module.over(ctx.local.clone());
                for (w, sw) in ctx.dual_cells.iter().enumerate() {
                    n += 1;
                    let ext = ext1_local(sw, &x).map_err(|e| e.to_string())?;
                    let tag = format!("{ty} e={e} lambda={} cell {w}", l.label());
                    ensure(ext.is_zero(), || format!("{tag}: valuations {:?}", ext.invariant_valuations))?;
                    let jump = coinvariant_dim(&sw.to_residue(), l) - coinvariant_dim(&sw.to_generic(), l);
                    ensure(jump == 0, || format!("{tag}: hom jump {jump}"))?;
                }
            }
        }
    }
    Ok(format!("{n} pairs"))
}

fn c11_torsion_count() -> Check {
    let mut n = 0;
    for ty in ["A2", "B2"] {
        let s = setup(ty);
        let ctx = StratContext::new(&s.h, &s.cells, 3);
        let m = &ctx.dual_cells;
        for a in 0..m.len() {
            for b in 0..m.len() {
                n += 1;
                let ext = ext1_local(&m[a], &m[b]).map_err(|e| e.to_string())?;
                let hk = hom_dim(&m[a].to_residue(), &m[b].to_residue()).map_err(|e| e.to_string())?;
                let hg = hom_dim(&m[a].to_generic(), &m[b].to_generic()).map_err(|e| e.to_string())?;
                ensure(ext.num_summands() + hg == hk, || format!("{ty}: cells {a} {b}: {} summands, hom {hk} vs {hg}", ext.num_summands()))?;
            }
        }
    }
    Ok(format!("{n} pairs"))
}

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_heckestrat")
}

fn run_cli(args: &[&str], cache: Option<&Path>) -> (i32, Vec<u8>) {
    let mut cmd = Command::new(bin());
    cmd.args(args).env_remove("HECKESTRAT_CACHE_DIR");
    if let Some(dir) = cache {
        cmd.arg("--cache-dir").arg(dir);
    }
    let out = cmd.output().expect("binary runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn strat_runs() -> Vec<Vec<String>> {
    let mut runs = Vec::new();
    for ty in ["A1", "A2", "B2"] {
        for e in ["3", "4", "6"] {
            runs.push(vec![ty.to_string(), e.to_string(), "first".to_string()]);
        }
    }
    for v in ["first", "second"] {
        runs.push(vec!["A3".into(), "3".into(), v.into()]);
    }
    runs
}

fn strat_json(r: &[String]) -> Result<serde_json::Value, String> {
    let args = ["strat", "verify", "--type", &r[0], "--e", &r[1], "--variant", &r[2]];
    let (code, out) = run_cli(&args, None);
    ensure(code == 0, || format!("{r:?}: exit code {code}"))?;
    serde_json::from_slice(&out).map_err(|e| e.to_string())
}

fn c12_main_theorem(reports: &[(Vec<String>, serde_json::Value)]) -> Check {
    for (r, v) in reports {
        let res = &v["result"];
        ensure(v["status"] == "pass" && res["pass"] == true, || format!("{r:?}: status {}", v["status"]))?;
        for c in ["condition1", "condition2", "condition3"] {
            ensure(res[c]["pass"] == true, || format!("{r:?}: {c}"))?;
        }
        let omega_prime = res["omega_prime"].as_array().map_or(0, Vec::len);
        let beforeprop = res["beforeprop"].as_array().cloned().unwrap_or_default();
        if r[0] == "A3" {
            ensure(omega_prime > 0 && beforeprop.len() == omega_prime, || format!("{r:?}: extension branch not exercised"))?;
        } else {
            ensure(omega_prime == 0, || format!("{r:?}: unexpected extension summands"))?;
        }
        ensure(beforeprop.iter().all(|b| b["pass"] == true), || format!("{r:?}: beforeprop"))?;
    }
    Ok(format!("{} runs, exit code 0", reports.len()))
}

fn c13_base_change(reports: &[(Vec<String>, serde_json::Value)]) -> Check {
    let mut dims = Vec::new();
    for (r, v) in reports {
        let end = &v["result"]["end_algebra"];
        let (a, b, c) = (&end["rank_local"], &end["dim_generic"], &end["dim_residue"]);
        ensure(a.is_u64() && a == b && b == c, || format!("{r:?}: {a} / {b} / {c}"))?;
        dims.push(format!("{} e={} {}: {a}", r[0], r[1], r[2]));
    }
    Ok(dims.join(", "))
}

fn c14_determinism() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let commands: Vec<Vec<&str>> = vec![
        vec!["cells", "--type", "B2"],
        vec!["kl", "--type", "A3"],
        vec!["hconst", "--type", "G2"],
        vec!["qperm", "--type", "A3", "--lambda", "s1,s3"],
        vec!["jring", "verify", "--type", "B2"],
        vec!["direction", "verify", "--type", "A2", "--e", "3"],
        vec!["strat", "verify", "--type", "A3", "--e", "3"],
        vec!["strat", "verify", "--type", "B2", "--e", "4", "--format", "tsv"],
    ];
    for args in &commands {
        let (c1, first) = run_cli(args, None);
        let (c2, second) = run_cli(args, None);
        let (c3, cold) = run_cli(args, Some(dir.path()));
        let (c4, warm) = run_cli(args, Some(dir.path()));
        ensure(c1 == c2 && c2 == c3 && c3 == c4, || format!("{args:?}: exit codes differ"))?;
        ensure(!first.is_empty() && first == second && second == cold && cold == warm, || format!("{args:?}: outputs differ"))?;
    }
    Ok(format!("{} commands, with and without cache", commands.len()))
}

fn main() -> ExitCode {
    let mut results: Vec<(usize, &str, Check, f64)> = Vec::new();
    let mut run = |id: usize, name: &'static str, f: &dyn Fn() -> Check| {
        let start = Instant::now();
        let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        let (tag, detail) = match &r {
            Ok(d) => ("PASS", d.clone()),
            Err(d) => ("FAIL", d.clone()),
        };
        println!("criterion {id:>2} {tag} {name} ({secs:.1}s): {detail}");
        results.push((id, name, r, secs));
    };
    run(1, "KL oracle equivalence", &c1_kl_oracle);
    run(2, "cell counts", &c2_cell_counts);
    run(3, "a-function", &c3_a_function);
    run(4, "structure constants", &c4_structure_constants);
    run(5, "order compatibility", &c5_order_compatibility);
    run(6, "intertwining identity", &c6_lemma51);
    run(7, "q-permutation modules", &c7_qperm);
    run(8, "eigenspace bases", &c8_nm);
    run(9, "f-direction", &c9_direction);
    run(10, "Ext vanishing against x_lambda H", &c10_vanishing);
    run(11, "torsion count", &c11_torsion_count);
    let reports: Result<Vec<_>, String> = strat_runs().into_iter().map(|r| strat_json(&r).map(|v| (r, v))).collect();
    run(12, "stratification runs", &|| c12_main_theorem(reports.as_ref().map_err(Clone::clone)?));
    run(13, "base change of End", &|| c13_base_change(reports.as_ref().map_err(Clone::clone)?));
    run(14, "CLI determinism", &c14_determinism);
    let failed = results.iter().filter(|r| r.2.is_err()).count();
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
