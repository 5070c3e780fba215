//! Scalars: `Z[t, t^-1]`, `Q(t)`, the local ring `Q` at `Phi_{2e}(t)`, and its residue field `k`.

pub mod laurent;
pub mod local;
pub mod qpoly;
pub mod ratfunc;
pub mod ring;

pub use laurent::LaurentInt;
pub use local::{cyclo_ctx, reduce_mod, CycloCtx, CycloScalar, LocalScalar};
pub use qpoly::{cyclotomic, cyclotomic_qpoly, QPoly};
pub use ratfunc::RatFunc;
pub use ring::{AtOne, Field, GenericField, Integral, LocalRing, ModP, ResidueField, Ring, RingTag};

/// `bar`: the involution `t -> t^-1` of `Z[t, t^-1]`.
pub fn bar(p: &LaurentInt) -> LaurentInt {
    p.bar()
}
