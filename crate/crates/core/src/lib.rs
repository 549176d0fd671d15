//! Label assignment for oriented object detection.
//!
//! Given ground-truth oriented boxes and a feature pyramid, this crate picks
//! the positive anchor points for each target (adaptive coarse-to-fine top-k
//! inside a shape-dependent ellipse, plus several baseline strategies),
//! weights them by distance to the target center, and evaluates the weighted
//! focal and smooth-L1 losses against supplied predictions. DOTA annotation
//! files can be parsed and tiled into scenes.

pub mod assignment;
pub mod error;
pub mod geometry;
pub mod ingest;
pub mod loss;
pub mod pyramid;
pub mod synthetic;
pub mod weighting;

pub use assignment::{
    assign, assign_baseline, assign_earl, assign_oracle, candidates_on_level, level_histogram,
    AssignmentResult, LevelHistogram, PositiveSample, RegressionTarget, ScaleRange, Strategy,
    StrategyConfig,
};
pub use error::{Error, Result};
pub use geometry::{
    center_offset, central_area_contains, ded_contains, ellipse_lhs, obb_contains, ratio_factor,
    to_box_frame, BoxFrameOffset, ImagePoint, OrientedBox, RatioMode, Region,
};
pub use ingest::{
    parse_dota, quad_to_obb, tile_scene, write_dota, CategoryMap, DotaRecord, Scene, TileSpec,
};
pub use loss::{focal_term, smooth_l1, total_loss, LossConfig, LossReport, PredictionRecord};
pub use pyramid::{default_pyramid, AnchorPoint, LevelSpec, PyramidSpec};
pub use synthetic::{
    scale_buckets, scale_sweep, synthetic_corpus, synthetic_scene, SyntheticConfig,
};
pub use weighting::{apply_sdw, WeightedAssignment};
