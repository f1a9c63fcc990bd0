pub mod bitset;
pub mod certificate;
pub mod cylinder;
pub mod embedding;
pub mod equitable;
pub mod error;
pub mod families;
pub mod generate;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod params;
pub mod pipeline;
pub mod ramsey;
pub mod regularity;
pub mod search;
pub mod seed;
pub mod verify;

pub use certificate::{CertificatePiece, PartitionCertificate};
pub use embedding::Embedding;
pub use error::{Error, Partial, Result};
pub use families::GraphFamily;
pub use graph::{Color, ColoredCompleteGraph, Graph, Rational};
pub use params::{PipelineParams, TheoreticalParams};
pub use pipeline::{partition, partition_bipartite, PartitionOutcome, PipelineStats};
pub use regularity::Cylinder;
pub use verify::{verify_certificate, VerifyReport};
