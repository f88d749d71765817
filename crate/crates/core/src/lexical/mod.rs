//! Term/identifier embedding alignment: cosine similarity, PCA and paired
//! distances.

mod alignment;
mod distances;
mod pca;
mod provider;
mod store;
mod vector;

pub use alignment::{rowwise_alignment, AlignmentResult};
pub use distances::{paired_distance_analysis, write_distance_summary, DistanceAnalysis, TerminologyDistances};
pub use pca::{pca_project, write_pca_points, LabeledVector, PcaPoint, PcaProjection, PointClass};
pub use provider::{EmbeddingProvider, HttpEmbeddingProvider, StoreProvider};
pub use store::{EmbeddingStore, BINARY_MAGIC};
pub use vector::{cosine, mean_pool, EmbeddingVector};
