//! Report assembly: a versioned JSON envelope and a TSV rendering of the main table.

use std::fmt::Write as _;

use serde::Serialize;

use heckestrat::cells::CellDecomposition;
use heckestrat::coeffs::LaurentInt;
use heckestrat::hecke::{x_lambda, HTable};
use heckestrat::hmod::{lemma_strict_check, qperm_module};
use heckestrat::jring::{varpi_generic_rank, varpi_t1_rank, verify_lemma51, JRing, Lemma51Report};
use heckestrat::strat::{verify_f_direction, verify_strat, DirectionReport, StratContext, StratReport, Variant};
use heckestrat::weyl::ParabolicSet;

use crate::{Failure, RunConfig};

pub const SCHEMA_VERSION: u32 = 1;

pub struct Output {
    pub json: String,
    pub tsv: String,
    pub pass: bool,
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    tool: &'static str,
    version: &'static str,
    schema_version: u32,
    config: &'a RunConfig,
    status: &'static str,
    result: T,
}

fn header(config: &RunConfig) -> String {
    let mut s = format!("# heckestrat {} schema {}\t{}", env!("CARGO_PKG_VERSION"), SCHEMA_VERSION, config.command);
    if let Some(t) = &config.coxeter_type {
        let _ = write!(s, "\ttype={t}");
    }
    if let Some(e) = config.e {
        let _ = write!(s, "\te={e}");
    }
    if let Some(v) = config.variant {
        let _ = write!(s, "\tvariant={v}");
    }
    if let Some(l) = &config.lambda {
        let _ = write!(s, "\tlambda={l}");
    }
    s.push('\n');
    s
}

fn finish<T: Serialize>(config: &RunConfig, status: &'static str, result: T, tsv_body: String, pass: bool) -> Output {
    let env = Envelope { tool: "heckestrat", version: env!("CARGO_PKG_VERSION"), schema_version: SCHEMA_VERSION, config, status, result };
    let mut json = serde_json::to_string_pretty(&env).expect("report serialises");
    json.push('\n');
    Output { json, tsv: header(config) + &tsv_body, pass }
}

pub fn budget_exceeded(config: &RunConfig, msg: &str) -> Output {
    #[derive(Serialize)]
    struct Partial<'a> {
        message: &'a str,
    }
    finish(config, "budget_exceeded", Partial { message: msg }, format!("status\tbudget_exceeded\nmessage\t{msg}\n"), false)
}

pub fn cells(config: &RunConfig, h: &HTable, cells: &CellDecomposition) -> Output {
    let export = cells.export(h.group());
    let mut tsv = String::from("id\ttwo_sided\ta\tf\tdistinguished\tright_descents\tmembers\n");
    for c in &export.left_cells {
        let _ = writeln!(tsv, "{}\t{}\t{}\t{}\t{}\t{}\t{}", c.id, c.two_sided, c.a, c.f, c.distinguished, c.right_descents.join(","), c.members.join(" "));
    }
    finish(config, "ok", export, tsv, true)
}

#[derive(Serialize)]
struct KlEntry {
    y: String,
    w: String,
    /// `P_{y,w}` evaluated at `q = t^2`.
    p: String,
    mu: i64,
}

pub fn kl(config: &RunConfig, h: &HTable) -> Output {
    let g = h.group();
    let kl = h.kl();
    let mut entries = Vec::new();
    for w in g.elements() {
        for (y, _) in kl.column(w) {
            entries.push(KlEntry { y: g.render(*y), w: g.render(w), p: kl.get_t(*y, w).to_string(), mu: kl.mu(*y, w) });
        }
    }
    let mut tsv = String::from("y\tw\tP\tmu\n");
    for e in &entries {
        let _ = writeln!(tsv, "{}\t{}\t{}\t{}", e.y, e.w, e.p, e.mu);
    }
    finish(config, "ok", entries, tsv, true)
}

#[derive(Serialize)]
struct HEntry {
    x: String,
    y: String,
    z: String,
    h: String,
}

pub fn hconst(config: &RunConfig, h: &HTable) -> Output {
    let g = h.group();
    h.fill();
    let mut entries = Vec::new();
    for x in g.elements() {
        let row = h.row(x);
        for y in g.elements() {
            for (z, c) in &row[y] {
                entries.push(HEntry { x: g.render(x), y: g.render(y), z: g.render(*z), h: c.to_string() });
            }
        }
    }
    let mut tsv = String::from("x\ty\tz\th\n");
    for e in &entries {
        let _ = writeln!(tsv, "{}\t{}\t{}\t{}", e.x, e.y, e.z, e.h);
    }
    finish(config, "ok", entries, tsv, true)
}

#[derive(Serialize)]
struct QpermSection {
    cell: usize,
    dim: usize,
    f: u32,
}

#[derive(Serialize)]
struct QpermReport {
    lambda: String,
    dim: usize,
    index: usize,
    basis: Vec<String>,
    x_lambda_is_scaled_cprime: bool,
    sections: Vec<QpermSection>,
    bottom: usize,
    lemma_strict: bool,
    filtration_invariant: bool,
    relations_hold: bool,
}

pub fn qperm(config: &RunConfig, h: &HTable, cells: &CellDecomposition, lambda: &str) -> Result<Output, Failure> {
    let g = h.group();
    let l = ParabolicSet::parse(lambda, g.rank())?;
    let data = qperm_module(h, cells, l)?;
    let w0 = g.longest_element(l);
    let scaled = h.kl().cprime(w0).scale(&LaurentInt::monomial(1, g.length(w0) as i64));
    let sections = data
        .module
        .filtration
        .as_ref()
        .map(|f| f.sections.iter().map(|&(dim, cell)| QpermSection { cell, dim, f: cells.f_left(cell) }).collect())
        .unwrap_or_default();
    let r = QpermReport {
        lambda: l.label(),
        dim: data.module.dim(),
        index: g.size() / g.parabolic_subgroup(l).len(),
        basis: data.right_basis.iter().map(|&y| g.render(y)).collect(),
        x_lambda_is_scaled_cprime: x_lambda(g, l) == scaled,
        sections,
        bottom: data.bottom,
        lemma_strict: lemma_strict_check(cells, &data),
        filtration_invariant: data.module.filtration_is_invariant(),
        relations_hold: data.module.check_relations().is_ok() && data.right.check_relations().is_ok(),
    };
    let pass = r.dim == r.index && r.x_lambda_is_scaled_cprime && r.lemma_strict && r.filtration_invariant && r.relations_hold;
    let mut tsv = String::from("section\tcell\tdim\tf\n");
    for (i, s) in r.sections.iter().enumerate() {
        let _ = writeln!(tsv, "{i}\t{}\t{}\t{}", s.cell, s.dim, s.f);
    }
    let _ = writeln!(tsv, "# dim\t{}\tindex\t{}\tlemma_strict\t{}", r.dim, r.index, r.lemma_strict);
    Ok(finish(config, if pass { "pass" } else { "fail" }, r, tsv, pass))
}

fn status(pass: bool, observational: bool) -> &'static str {
    match (pass, observational) {
        (true, _) => "pass",
        (false, true) => "observational",
        (false, false) => "fail",
    }
}

pub fn strat(config: &RunConfig, h: &HTable, cells: &CellDecomposition, e: u32, variant: Variant, budget: usize) -> Result<Output, Failure> {
    let ctx = StratContext::new(h, cells, e);
    let r: StratReport = verify_strat(&ctx, variant, budget)?;
    let mut tsv = String::from("check\tpass\tchecked\tfailures\n");
    for (name, c) in [
        ("condition1", &r.condition1),
        ("condition2", &r.condition2),
        ("condition3", &r.condition3),
        ("lemma_strict", &r.lemma_strict),
        ("quasi_poset", &r.quasi_poset),
        ("hom_across_f", &r.hom_across_f),
    ] {
        let _ = writeln!(tsv, "{name}\t{}\t{}\t{}", c.pass, c.checked, c.failures.len());
    }
    for b in &r.beforeprop {
        let _ = writeln!(tsv, "beforeprop_cell_{}\t{}\t{}\t{}", b.cell, b.pass, b.dim, b.ext_nonzero.len());
    }
    let end = &r.end_algebra;
    let _ = writeln!(tsv, "end_algebra\t{}\t{}/{}/{}\t0", end.pass, end.rank_local, end.dim_generic, end.dim_residue);
    let pass = r.pass;
    let obs = r.observational;
    Ok(finish(config, status(pass, obs), r, tsv, pass || obs))
}

#[derive(Serialize)]
struct JringReport {
    order: usize,
    varpi_t1_rank: usize,
    varpi_generic_rank: usize,
    lemma51: Vec<Lemma51Report>,
    pass: bool,
}

pub fn jring(config: &RunConfig, h: &HTable, cells: &CellDecomposition) -> Output {
    use rayon::prelude::*;
    let j = JRing::new(h, cells);
    let lemma51: Vec<Lemma51Report> = (0..cells.num_left_cells()).into_par_iter().map(|lc| verify_lemma51(h, cells, &j, lc)).collect();
    let order = h.group().size();
    let t1 = varpi_t1_rank(&j);
    let gen = varpi_generic_rank(&j);
    let pass = t1 == order && gen == order && lemma51.iter().all(|r| r.pass);
    let mut tsv = String::from("cell\tpairs\tviolations\tpass\n");
    for r in &lemma51 {
        let _ = writeln!(tsv, "{}\t{}\t{}\t{}", r.cell, r.pairs_checked, r.violations.len(), r.pass);
    }
    let _ = writeln!(tsv, "# varpi rank at t=1\t{t1}\torder\t{order}");
    let r = JringReport { order, varpi_t1_rank: t1, varpi_generic_rank: gen, lemma51, pass };
    finish(config, status(pass, false), r, tsv, pass)
}

pub fn direction(config: &RunConfig, h: &HTable, cells: &CellDecomposition, e: u32) -> Result<Output, Failure> {
    let ctx = StratContext::new(h, cells, e);
    let r: DirectionReport = verify_f_direction(&ctx)?;
    let mut tsv = String::from("from\tto\tf_from\tf_to\thom_k\thom_K\text_valuations\tok\n");
    for d in &r.entries {
        let v: Vec<String> = d.ext_valuations.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(tsv, "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}", d.from, d.to, d.f_from, d.f_to, d.hom_residue, d.hom_generic, v.join(","), d.ok);
    }
    let pass = r.pass;
    let obs = e == 2;
    Ok(finish(config, status(pass, obs), r, tsv, pass || obs))
}
