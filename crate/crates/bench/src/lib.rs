//! Fixtures shared by the benchmarks.

use rotassign_core::{default_pyramid, synthetic_scene, OrientedBox, PyramidSpec, SyntheticConfig};

/// A square synthetic scene with exactly `boxes` targets and its default pyramid.
pub fn scene(size: u32, boxes: usize, seed: u64) -> (Vec<OrientedBox>, PyramidSpec) {
    let cfg = SyntheticConfig {
        width: size,
        height: size,
        min_boxes: boxes,
        max_boxes: boxes,
        ..SyntheticConfig::default()
    };
    let scene = synthetic_scene(&cfg, seed, "bench").expect("valid synthetic config");
    let spec = default_pyramid(size, size).expect("positive image size");
    (scene.boxes, spec)
}
