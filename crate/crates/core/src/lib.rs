//! k-normal elements of finite field extensions `F_{q^m} / F_q`.

pub mod arith;
pub mod census;
pub mod error;
pub mod field;
pub mod knormal;
pub mod linalg;
pub mod normal_basis;
pub mod poly;
pub mod polyring;
pub mod reference;
pub mod tower;

pub use error::{Error, Result};
pub use field::{BaseField, Field, FpElem, FqElem, PrimeField};
pub use polyring::{Factorization, PolyFq};
pub use tower::{FqmElem, TowerCtx, TowerParams};
