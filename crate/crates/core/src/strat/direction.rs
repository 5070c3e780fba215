//! Direction of Hom and Ext¹ between cell modules relative to `f`.

use rayon::prelude::*;
use serde::Serialize;

use super::StratContext;
use crate::error::Result;
use crate::hmod::{cell_module, ext1_local, hom_dim};

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct DirectionEntry {
    pub from: usize,
    pub to: usize,
    pub f_from: u32,
    pub f_to: u32,
    pub same_two_sided: bool,
    /// `dim_k Hom(S_k(from), S_k(to))`.
    pub hom_residue: usize,
    /// `dim_K Hom(S_K(from), S_K(to))`.
    pub hom_generic: usize,
    /// Invariant valuations of `Ext¹(S~_from, S~_to)`.
    pub ext_valuations: Vec<i64>,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct DirectionReport {
    pub e: u32,
    pub entries: Vec<DirectionEntry>,
    pub violations: Vec<(usize, usize)>,
    pub pass: bool,
}

/// For all pairs of left cells: cross-cell Hom over `k` only towards larger `f`, endomorphism
/// dimensions do not jump, Ext¹ only towards smaller `f`, and no self-extensions.
pub fn verify_f_direction(ctx: &StratContext) -> Result<DirectionReport> {
    let cells = ctx.cells;
    let n = cells.num_left_cells();
    let residue = ctx.local.residue();
    let left: Vec<_> = (0..n).map(|lc| cell_module(ctx.h, cells, lc).over(residue.clone())).collect();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
    let entries = pairs
        .into_par_iter()
        .map(|(a, b)| {
            let (fa, fb) = (cells.f_left(a), cells.f_left(b));
            let same = cells.two_sided_of_left(a) == cells.two_sided_of_left(b);
            let hom_residue = hom_dim(&left[a], &left[b])?;
            let hom_generic = ctx.generic_pair[a][b];
            let ext = ext1_local(&ctx.dual_cells[a], &ctx.dual_cells[b])?;
            let hom_ok = same || hom_residue == 0 || fa < fb;
            let end_ok = a != b || hom_residue == hom_generic;
            let ext_ok = ext.is_zero() || (a != b && fa > fb);
            Ok(DirectionEntry {
                from: a,
                to: b,
                f_from: fa,
                f_to: fb,
                same_two_sided: same,
                hom_residue,
                hom_generic,
                ext_valuations: ext.invariant_valuations,
                ok: hom_ok && end_ok && ext_ok,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let violations: Vec<(usize, usize)> = entries.iter().filter(|e| !e.ok).map(|e| (e.from, e.to)).collect();
    Ok(DirectionReport { e: ctx.e(), pass: violations.is_empty(), entries, violations })
}
