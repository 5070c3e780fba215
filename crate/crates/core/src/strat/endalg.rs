//! `End(T~+)` block by block, over the local ring, its fraction field and its residue field.

use rayon::prelude::*;
use serde::Serialize;

use super::{StratContext, Summand};
use crate::coeffs::{Field, LocalRing, LocalScalar};
use crate::error::Result;
use crate::hmod::{coinvariant_dim, fixed_space, hom_dim, hom_space, HModule, HomSpace};

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct EndBlock {
    pub from: usize,
    pub to: usize,
    /// Rank of the Hom lattice: the solution rank of the intertwining system over `Frac(Q)`.
    pub rank_local: usize,
    /// From characters at `t = 1` and the dual-cell filtrations.
    pub dim_generic: usize,
    pub dim_residue: usize,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct EndAlgebra {
    pub blocks: Vec<EndBlock>,
    pub rank_local: usize,
    pub dim_generic: usize,
    pub dim_residue: usize,
    pub pass: bool,
}

/// `dim Hom(A, B)`, using Frobenius reciprocity when `A = x_lambda H` and the duality
/// `x_mu H = (H x_mu)^*` when `B = x_mu H`.
fn block_dim<F: Field + Clone>(a: &Summand, am: &HModule<F>, b: &Summand, bm: &HModule<F>) -> Result<usize> {
    if let Some(l) = a.lambda {
        Ok(fixed_space(bm, l).len())
    } else if let Some(mu) = b.lambda {
        Ok(coinvariant_dim(am, mu))
    } else {
        hom_dim(am, bm)
    }
}

pub fn end_algebra(ctx: &StratContext, t: &[Summand]) -> Result<EndAlgebra> {
    let generic: Vec<_> = t.iter().map(|s| s.module.to_generic()).collect();
    let residue: Vec<_> = t.iter().map(|s| s.module.to_residue()).collect();
    let labels: Vec<Vec<usize>> = t.iter().map(|s| s.section_labels()).collect();
    let pairs: Vec<(usize, usize)> = (0..t.len()).flat_map(|a| (0..t.len()).map(move |b| (a, b))).collect();
    let blocks = pairs
        .into_par_iter()
        .map(|(a, b)| {
            Ok(EndBlock {
                from: t[a].cell,
                to: t[b].cell,
                rank_local: block_dim(&t[a], &generic[a], &t[b], &generic[b])?,
                dim_generic: ctx.generic_hom_from_sections(&labels[a], &labels[b]),
                dim_residue: block_dim(&t[a], &residue[a], &t[b], &residue[b])?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let rank_local = blocks.iter().map(|b| b.rank_local).sum();
    let dim_generic = blocks.iter().map(|b| b.dim_generic).sum();
    let dim_residue = blocks.iter().map(|b| b.dim_residue).sum();
    Ok(EndAlgebra { pass: rank_local == dim_generic && dim_generic == dim_residue, blocks, rank_local, dim_generic, dim_residue })
}

/// `Delta~(omega) = Hom(S~_omega, T~+)`, one saturated lattice per summand.
pub fn delta(ctx: &StratContext, t: &[Summand], lc: usize) -> Result<Vec<HomSpace<LocalScalar>>> {
    t.iter().map(|s| hom_space::<LocalRing>(&ctx.dual_cells[lc], &s.module)).collect()
}
