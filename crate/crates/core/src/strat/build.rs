//! Iterated universal extensions `X~_omega`.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use super::{StratContext, Variant};
use crate::coeffs::LocalRing;
use crate::error::{Error, Result};
use crate::hmod::{build_sum_extension, ext1_local, HModule};

fn check_budget(m: &HModule<LocalRing>, budget: usize, lc: usize) -> Result<()> {
    let n = m.filtration.as_ref().map_or(0, |f| f.sections.len());
    if n > budget {
        return Err(Error::SectionBudget(format!("X for cell {lc} reached {n} sections (budget {budget})")));
    }
    Ok(())
}

/// `X~_omega`: `S~_omega` extended level by level by the dual cell modules of higher `f`.
pub fn build_x_omega(ctx: &StratContext, lc: usize, variant: Variant, budget: usize) -> Result<HModule<LocalRing>> {
    let cells = ctx.cells;
    let f0 = cells.f_left(lc);
    let order = cells.left_cells_by_f();
    let levels: BTreeSet<u32> = order.iter().map(|&t| cells.f_left(t)).filter(|&f| f > f0).collect();
    let mut current = ctx.dual_cells[lc].clone();
    for j in levels {
        let taus: Vec<usize> = order.iter().copied().filter(|&t| cells.f_left(t) == j).collect();
        match variant {
            Variant::First => {
                for &tau in &taus {
                    let m = &ctx.dual_cells[tau];
                    let ext = ext1_local(m, &current)?;
                    if !ext.is_zero() {
                        current = build_sum_extension(m, &current, &ext.cocycles)?;
                        check_budget(&current, budget, lc)?;
                    }
                }
            }
            Variant::Second => {
                let parts: Vec<&HModule<LocalRing>> = taus.iter().map(|&t| &ctx.dual_cells[t]).collect();
                let m = HModule::direct_sum(&parts)?;
                let ext = ext1_local(&m, &current)?;
                if !ext.is_zero() {
                    current = build_sum_extension(&m, &current, &ext.cocycles)?;
                    check_budget(&current, budget, lc)?;
                }
            }
        }
    }
    Ok(current)
}

/// Shape of a dual-cell filtration.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SectionCheck {
    pub sections: Vec<usize>,
    pub invariant: bool,
    /// Every diagonal block equals the labelled dual cell module.
    pub blocks_match: bool,
    pub bottom_ok: bool,
    /// Non-bottom sections have `f` strictly above the bottom, and `f` never decreases.
    pub higher_f_ok: bool,
    pub pass: bool,
}

pub fn check_sections(ctx: &StratContext, m: &HModule<LocalRing>, bottom: usize) -> SectionCheck {
    let Some(filt) = &m.filtration else {
        return SectionCheck { sections: vec![], invariant: false, blocks_match: false, bottom_ok: false, higher_f_ok: false, pass: false };
    };
    let sections = filt.labels();
    let invariant = m.filtration_is_invariant();
    let blocks_match = invariant
        && sections.iter().enumerate().all(|(i, &lc)| m.section(i).is_some_and(|s| s.action == ctx.dual_cells[lc].action));
    let bottom_ok = sections.first() == Some(&bottom);
    let f = |lc: usize| ctx.cells.f_left(lc);
    let higher_f_ok = sections.iter().skip(1).all(|&lc| f(lc) > f(bottom)) && sections.windows(2).all(|w| f(w[0]) <= f(w[1]));
    SectionCheck { pass: invariant && blocks_match && bottom_ok && higher_f_ok, sections, invariant, blocks_match, bottom_ok, higher_f_ok }
}

/// Properties (1)-(3) of an extension module, recomputed from its matrices.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct BeforeProp {
    pub cell: usize,
    pub dim: usize,
    pub shape: SectionCheck,
    /// `(nu, invariant valuations of Ext¹(S~_nu, X~))` for every `nu` with nonzero Ext.
    pub ext_nonzero: Vec<(usize, Vec<i64>)>,
    pub pass: bool,
}

pub fn check_beforeprop(ctx: &StratContext, lc: usize, x: &HModule<LocalRing>) -> Result<BeforeProp> {
    let shape = check_sections(ctx, x, lc);
    let exts = (0..ctx.cells.num_left_cells())
        .into_par_iter()
        .map(|nu| ext1_local(&ctx.dual_cells[nu], x).map(|e| (nu, e.invariant_valuations)))
        .collect::<Result<Vec<_>>>()?;
    let ext_nonzero: Vec<_> = exts.into_iter().filter(|(_, v)| !v.is_empty()).collect();
    Ok(BeforeProp { cell: lc, dim: x.dim(), pass: shape.pass && ext_nonzero.is_empty(), shape, ext_nonzero })
}
