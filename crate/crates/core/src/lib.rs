//! Exact iterated function systems on discretely valued rings and fields.
//!
//! The crate works at a fixed digit precision and decides the topological
//! shrinking conditions on finitely representable models:
//!
//! * [`dvr`]: digit arithmetic in equal and mixed characteristic;
//! * [`ball`]: ultrametric balls and canonical clopen sets;
//! * [`ifs`]: the digit-prepend, window and tail-fixing map families;
//! * [`sc`]: shrinking-condition decisions, contraction audits and
//!   local-fractality checks;
//! * [`discrete`]: Baire space, `kappa^omega`, the discrete `omega` and the
//!   cofinite interval models;
//! * [`line`]: the Lipschitz shifted family on the rational line;
//! * [`report`]: the verification report shared by all procedures.

pub mod ball;
pub mod discrete;
pub mod dvr;
pub mod error;
pub mod ifs;
pub mod line;
pub mod rational;
pub mod report;
pub mod sc;
pub mod words;

pub use ball::{Ball, ClopenSet};
pub use dvr::{Characteristic, Distance, DvrContext, Element, Valuation};
pub use error::{Error, Result};
pub use ifs::{Ifs, IfsMap, SystemKind};
pub use rational::Rational;
pub use report::{CertificateEntry, Verdict, VerificationReport};
pub use sc::Covering;
pub use words::Budget;
