//! Graph signal processing with the unified extended matrix (UEM) family of
//! graph shift operators.
//!
//! Pipeline: [`graph`] builds a k-NN sensor graph and its consensus matrix,
//! [`diffusion`] turns that into scale-dependent extended matrices, [`uem`]
//! combines them into `P̄_{m,n}(t)`, [`spectral`] decomposes any symmetric
//! operator into a graph Fourier basis and [`detector`] uses that basis for
//! threshold-based anomaly detection. [`gso`] holds the baseline operators
//! and [`datagen`] the synthetic signal generators.
//!
//! The crate is `no_std` with `alloc` when built without the default `std`
//! feature.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod datagen;
pub mod detector;
pub mod diffusion;
pub mod error;
pub mod graph;
pub mod gso;
pub mod spectral;
pub mod uem;

pub use error::{Error, Result};
