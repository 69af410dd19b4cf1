//! Topology-aware boundary segmentation toolkit.
//!
//! * [`raster`]: masks, label maps, scalar fields, components, dilation.
//! * [`geometry`]: exact distance transforms and skeletons.
//! * [`skeaw`]: skeleton-aware weight maps and weighted cross-entropy.
//! * [`bort`]: critical-pixel detection and the rectified penalty.
//! * [`metrics`]: VI, ARI, mAP, Betti error and Dice.
//! * [`oracle`]: brute-force criticality by flipping error regions.
//! * [`synth`]: seeded reticular images with injected errors.
//! * [`io`] and [`cli`]: file formats and the command-line front end.

pub mod bort;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod io;
pub mod metrics;
pub mod oracle;
pub mod raster;
pub mod skeaw;
pub mod synth;

pub use error::{Error, Result};
