//! Thurston's construction of pseudo-Anosov mapping classes, as a library.
//!
//! Given two filling multicurves `A`, `B` on a surface with intersection
//! matrix `N`, the twist group `⟨T_A, T_B⟩` admits a representation into
//! `PSL(2, ℝ)` sending
//!
//! ```text
//! T_A ↦ [1  −√μ]      T_B ↦ [ 1   0]
//!       [0    1]            [√μ   1]
//! ```
//!
//! where `μ` is the Perron–Frobenius eigenvalue of `N·Nᵗ`. The trichotomy
//! elliptic / parabolic / hyperbolic for the image matrix matches the
//! Nielsen–Thurston trichotomy periodic / reducible / pseudo-Anosov for the
//! mapping class, and for a pseudo-Anosov element the stretch factor is the
//! dominant eigenvalue of the image matrix.
//!
//! The crate provides:
//!
//! * [`words`] — freely reduced words over the two twist generators,
//!   cyclic reduction, and the combinatorial element classification;
//! * [`construction`] — intersection data, the Gram matrix and its
//!   Perron–Frobenius eigenvalue, the configuration graph, and the
//!   Dynkin-tree freeness criterion;
//! * [`geometry`] — numerically scaled 2×2 matrices, isometry
//!   classification by trace, stretch factors, Teichmüller displacements,
//!   Gromov products, and a translation-length estimator;
//! * [`walk`] — seeded random walks on the twist group with drift,
//!   Furstenberg–Kesten upper bounds, and spectral-convergence reports;
//! * [`bounds`] — auditing of the closed-form stretch-factor bounds, the
//!   Salem power window, and the fibered-volume bound;
//! * [`model`] — the random intersection-data model and its exact
//!   freeness-failure bound.
//!
//! The crate is `no_std` (with `alloc`); all file formats, CLI handling and
//! parallel execution live in the companion `thurston-cli` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod bounds;
pub mod construction;
pub mod geometry;
pub mod model;
pub mod rng;
pub mod walk;
pub mod words;

pub use construction::{ConfigGraph, DynkinType, IntersectionData, PFResult, ThurstonRep};
pub use geometry::{IsomClass, ScaledMat};
pub use words::{AbelianImage, ElementClass, Generator, Word};
