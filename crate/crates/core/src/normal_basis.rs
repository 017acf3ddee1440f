//! Normal bases `{α, α^q, ..., α^{q^{m-1}}}` of `F_{q^m}` over `F_q`.
//!
//! In normal coordinates the `q`-Frobenius is a cyclic shift: coordinate `i`
//! moves to `i + 1`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{BaseField, Field, FqElem};
use crate::knormal;
use crate::linalg::{self, Matrix};
use crate::tower::{FqmElem, TowerCtx};

#[derive(Debug, Clone)]
pub struct NormalBasis {
    generator: FqmElem,
    /// Column `i` holds the coordinates of `generator^{q^i}`.
    basis: Matrix<FqElem>,
    inverse: Matrix<FqElem>,
}

impl NormalBasis {
    pub fn new(ctx: &TowerCtx, alpha: &FqmElem) -> Result<Self> {
        let k = knormal::k_via_span(ctx, alpha);
        if k != 0 {
            return Err(Error::NotNormal(k));
        }
        let columns: Vec<Vec<FqElem>> = ctx
            .conjugates(alpha, ctx.m())
            .into_iter()
            .map(FqmElem::into_coords)
            .collect();
        let basis = Matrix::from_columns(&columns);
        let inverse = linalg::inverse(ctx.base(), &basis).map_err(|_| {
            Error::InternalInconsistency("normal element with singular basis matrix".into())
        })?;
        Ok(NormalBasis {
            generator: alpha.clone(),
            basis,
            inverse,
        })
    }

    pub fn generator(&self) -> &FqmElem {
        &self.generator
    }

    pub fn basis_matrix(&self) -> &Matrix<FqElem> {
        &self.basis
    }

    pub fn inverse_matrix(&self) -> &Matrix<FqElem> {
        &self.inverse
    }

    pub fn to_normal_coords(&self, ctx: &TowerCtx, beta: &FqmElem) -> Vec<FqElem> {
        self.inverse.mul_vec(ctx.base(), beta.coords())
    }

    pub fn from_normal_coords(&self, ctx: &TowerCtx, coords: &[FqElem]) -> FqmElem {
        ctx.from_coords(self.basis.mul_vec(ctx.base(), coords))
    }
}

pub fn build_normal_basis(ctx: &TowerCtx, alpha: &FqmElem) -> Result<NormalBasis> {
    NormalBasis::new(ctx, alpha)
}

/// Frobenius in normal coordinates: `(c_0, ..., c_{m-1}) -> (c_{m-1}, c_0, ..., c_{m-2})`.
pub fn frobenius_in_normal(coords: &[FqElem]) -> Vec<FqElem> {
    let mut out = coords.to_vec();
    out.rotate_right(1);
    out
}

/// `α · α^{q^i} = Σ_j t[i][j] α^{q^j}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MultTable {
    pub table: Vec<Vec<FqElem>>,
    /// Number of nonzero entries.
    pub density: usize,
    /// `2m - 1`, the least possible density; informational only.
    pub density_lower_bound: usize,
}

pub fn mult_table(ctx: &TowerCtx, nb: &NormalBasis) -> MultTable {
    let m = ctx.m();
    let alpha = nb.generator();
    let table: Vec<Vec<FqElem>> = ctx
        .conjugates(alpha, m)
        .iter()
        .map(|c| nb.to_normal_coords(ctx, &ctx.mul(alpha, c)))
        .collect();
    let density = table.iter().flatten().filter(|c| c.0 != 0).count();
    MultTable {
        table,
        density,
        density_lower_bound: 2 * m - 1,
    }
}

impl MultTable {
    /// Product of two elements given in normal coordinates, using only the table:
    /// `α_i α_j = (α · α_{j-i})^{q^i}`.
    pub fn multiply(&self, base: &BaseField, b: &[FqElem], c: &[FqElem]) -> Vec<FqElem> {
        let m = self.table.len();
        let mut out = vec![FqElem::ZERO; m];
        for (i, bi) in b.iter().enumerate() {
            if bi.0 == 0 {
                continue;
            }
            for (j, cj) in c.iter().enumerate() {
                if cj.0 == 0 {
                    continue;
                }
                let coef = base.mul(bi, cj);
                let row = &self.table[(j + m - i) % m];
                for (l, t) in row.iter().enumerate() {
                    if t.0 != 0 {
                        let slot = &mut out[(l + i) % m];
                        *slot = base.add(slot, &base.mul(&coef, t));
                    }
                }
            }
        }
        out
    }
}
