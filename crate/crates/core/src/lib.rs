//! Construction, simulation and decoding of the XYZ planar code and the
//! standard planar code under biased Pauli noise.
//!
//! * [`pauli`]: phase-free symplectic Pauli algebra
//! * [`codes`]: layouts, validation, logical operators and the JSON format
//! * [`noise`]: biased channel, sampling and syndromes
//! * [`matching`]: detector graphs, Dijkstra and blossom matching
//! * [`decoder`]: posterior weights and the MWPM / pMWPM decoders
//! * [`experiment`]: Monte Carlo harness, jackknife and threshold fits

pub mod code_file;
pub mod codes;
pub mod decoder;
pub mod error;
pub mod experiment;
pub mod gf2;
pub mod matching;
pub mod noise;
pub mod pauli;

pub use codes::{build_code, build_planar, build_xyz_planar, validate_layout, CodeKind, CodeLayout};
pub use decoder::{decode_mwpm, decode_pmwpm, Correction, DecoderKind, WeightTable};
pub use error::{Error, Result};
pub use noise::{NoiseParams, Syndrome};
pub use pauli::{Pauli, PauliString};
