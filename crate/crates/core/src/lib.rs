//! Volumetric MRI classification toolkit.
//!
//! The crate is organized around five subsystems:
//!
//! * [`volume`] — the 3D scalar field carrier type, its on-disk format, and
//!   the masked preprocessing arithmetic (in-mask normalization, Jacobian
//!   modulation, intracranial-volume correction).
//! * [`dataset`] — cohort manifests, stratified repeated splitting, mixup
//!   augmentation, and a synthetic-cohort generator for desk-scale runs.
//! * [`svm`] — a linear support vector machine trained by dual coordinate
//!   descent, with in-pipeline feature standardization, cross-validated C
//!   selection, and analytic significance maps.
//! * [`cnn`] — a from-scratch all-convolutional 3D network with hand-rolled
//!   forward/backward passes, Adam training with step decay and early
//!   stopping, and guided-backpropagation saliency.
//! * [`stats`] — AUC/accuracy metrics, corrected resampled t-test and
//!   bootstrap confidence intervals, and McNemar's test.
//!
//! All randomness flows through [`rng`]: one user-facing seed, split into
//! named substreams so that independent consumers never perturb each other.

pub mod cnn;
pub mod dataset;
pub mod rng;
pub mod stats;
pub mod svm;
pub mod volume;
