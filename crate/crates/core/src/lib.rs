//! Exact computation of Radon and Tverberg partitions.
//!
//! Everything here works over exact rationals ([`Rat`]) and every verdict is
//! backed by a certificate that can be re-checked by substitution: barycentric
//! coefficients for memberships, Farkas multipliers for infeasibility.
//!
//! * [`linalg`] and [`points`]: rational matrices, kernels, point sets and the
//!   space of affine dependences.
//! * [`lp`]: exact simplex feasibility with certificates.
//! * [`partitions`]: enumeration and certification of Tverberg partitions.
//! * [`regions`]: the sets `T_r(S)` and `C^t_r(S)` as unions of convex cells.
//! * [`cascade`]: unique Radon points, block decompositions and the
//!   `(t+2)`-partition construction, plus the cascade-sum check.
//! * [`flip`]: Radon flip graphs at a fixed point and core certificates.
//! * [`depth`]: exact Tukey depth and centerpoint cells.
//! * [`gallery`]: canonical example configurations.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod cascade;
pub mod depth;
pub mod error;
pub mod flip;
pub mod gallery;
pub mod halfspace;
pub mod linalg;
pub mod lp;
pub mod partitions;
pub mod points;
pub mod rational;
pub mod regions;

pub use error::{Error, Result};
pub use linalg::{kernel_basis, rref, Mat, Vector};
pub use lp::{in_convex_hull, solve_feasibility, verify_certificate, Barycentric, LinearSystem, Verdict};
pub use points::{affine_span_dim, dependence_space, DependenceSpace, IndexSet, PointSet};
pub use rational::Rat;
