//! The guide's chapters, included so their samples run as doc-tests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/surrogate.md")]
pub mod surrogate {}

#[doc = include_str!("../../../book/src/acquisitions.md")]
pub mod acquisitions {}

#[doc = include_str!("../../../book/src/local-penalization.md")]
pub mod local_penalization {}

#[doc = include_str!("../../../book/src/nsga2.md")]
pub mod nsga2 {}

#[doc = include_str!("../../../book/src/dmea.md")]
pub mod dmea_loop {}

#[doc = include_str!("../../../book/src/benchmarks.md")]
pub mod benchmarks {}

#[doc = include_str!("../../../book/src/experiments.md")]
pub mod experiments {}
