//! The suspension-scaling spheres: exact voxelization, shadows and slices,
//! cubical homology over GF(2), and the explicit shadow retractions.

mod homology;
mod model;
mod raster;
mod retraction;
mod voxel;

pub use homology::{betti, betti_with_cap, DEFAULT_CELL_CAP};
pub use model::{build_sphere, check_slice_scaling, voxelize_sphere, SliceLevel, SliceScalingReport, SphereModel};
pub use raster::{supercover_segment, supercover_simplex};
pub use retraction::{verify_retraction, RetractionEvaluator, RetractionReport};
pub use voxel::{parse_voxels, VoxelSet};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum SphereError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("axis {axis} out of range for dimension {dim}")]
    AxisOutOfRange { axis: usize, dim: usize },
    #[error("cell {0:?} outside the declared bounds")]
    OutOfBounds(Vec<i64>),
    #[error("value {value} outside bounds {lo}..={hi} of axis {axis}")]
    SliceOutOfBounds { axis: usize, value: i64, lo: i64, hi: i64 },
    #[error("slice of axis {axis} at {value} is empty")]
    EmptySlice { axis: usize, value: i64 },
    #[error("unsupported sphere dimension {0} for voxel output")]
    UnsupportedDimension(usize),
    #[error("resolution {resolution} too coarse: {reason}")]
    ResolutionTooCoarse { resolution: u32, reason: String },
    #[error("cubical complex has {cells} cells, above the cap of {cap}")]
    TooLarge { cells: usize, cap: usize },
    #[error("invalid base curve: {0}")]
    InvalidBase(String),
    #[error("point {0} is not in the shadow")]
    OutsideShadow(String),
    #[error("parameter {0} outside [0, 1]")]
    ParameterOutOfRange(String),
}
