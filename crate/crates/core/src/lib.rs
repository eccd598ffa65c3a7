//! Secrecy design kernels for RF satellite links with a passive eavesdropper:
//! antenna-pattern geometry, BPSK wiretap information measures, leakage
//! exponents for a Toeplitz-hashed coset code, and the code itself.

pub mod codec;
pub mod error;
pub mod exponents;
pub mod geometry;
pub mod gf2;
pub mod infotheory;
pub mod linkdesign;
pub mod numeric;
pub mod scenario;

pub use codec::{CosetCode, HashSeed, InnerCode, ToeplitzHash};
pub use error::{Error, Result};
pub use exponents::{CodeParams, ExponentMode, LeakageBound, SecrecyChannel};
pub use geometry::{AntennaPattern, Degradation, EveSystem, LinkGeometry, PatternKind, WiretapChannel};
pub use gf2::{BitMatrix, BitVec};
pub use infotheory::{BpskAwgn, DiscreteChannel, NoiseConvention};
pub use scenario::{Frame, Scenario, ScenarioFile, Target};
