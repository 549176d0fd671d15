//! Feature-pyramid levels and the anchor grid.
//!
//! Anchors are enumerated from the coarsest level down (P7 first), row-major
//! within a level. That enumeration index doubles as the anchor id used for
//! every deterministic tie-break in assignment.

use crate::error::{Error, Result};
use crate::geometry::ImagePoint;

/// Default strides for P3..P7.
pub const DEFAULT_STRIDES: [u32; 5] = [8, 16, 32, 64, 128];

/// Level number of the finest default level.
pub const FIRST_LEVEL: u8 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LevelSpec {
    pub level: u8,
    pub stride: u32,
    pub height: u32,
    pub width: u32,
}

impl LevelSpec {
    pub fn cells(&self) -> usize {
        self.height as usize * self.width as usize
    }

    /// `floor(stride / 2)`, the image offset of grid cell 0.
    #[inline]
    pub fn half_stride(&self) -> u32 {
        self.stride / 2
    }

    /// Image coordinate of a grid index along one axis. Exact in f64.
    #[inline]
    pub(crate) fn coord(&self, index: u32) -> f64 {
        f64::from(self.half_stride()) + f64::from(index) * f64::from(self.stride)
    }

    /// Maps a grid cell back to image coordinates.
    pub fn anchor_image_coords(&self, grid_x: u32, grid_y: u32) -> Result<ImagePoint> {
        if grid_x >= self.width || grid_y >= self.height {
            return Err(Error::OutOfGrid {
                level: self.level,
                grid_x,
                grid_y,
                width: self.width,
                height: self.height,
            });
        }
        Ok(ImagePoint::new(self.coord(grid_x), self.coord(grid_y)))
    }
}

/// Free-function form of [`LevelSpec::anchor_image_coords`].
pub fn anchor_image_coords(level: &LevelSpec, grid_x: u32, grid_y: u32) -> Result<ImagePoint> {
    level.anchor_image_coords(grid_x, grid_y)
}

/// A pixel-wise location on one pyramid level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnchorPoint {
    pub level: u8,
    pub grid_x: u32,
    pub grid_y: u32,
    pub img: ImagePoint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PyramidSpec {
    image_width: u32,
    image_height: u32,
    /// Ascending by level (finest first).
    levels: Vec<LevelSpec>,
    /// Enumeration offset of each entry of `levels`.
    offsets: Vec<usize>,
    total: usize,
}

impl PyramidSpec {
    /// Builds a pyramid with levels numbered from P3 upward, one per stride.
    /// Grid dimensions are `ceil(image_dim / stride)`.
    pub fn new(image_width: u32, image_height: u32, strides: &[u32]) -> Result<Self> {
        if image_width == 0 || image_height == 0 {
            return Err(Error::InvalidPyramid(format!(
                "image dimensions must be positive, got {image_width}x{image_height}"
            )));
        }
        if strides.is_empty() {
            return Err(Error::InvalidPyramid("no levels".into()));
        }
        if strides[0] == 0 || strides.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidPyramid(format!(
                "strides must be positive and strictly increasing, got {strides:?}"
            )));
        }
        let levels: Vec<LevelSpec> = strides
            .iter()
            .enumerate()
            .map(|(i, &stride)| LevelSpec {
                level: FIRST_LEVEL + i as u8,
                stride,
                height: image_height.div_ceil(stride),
                width: image_width.div_ceil(stride),
            })
            .collect();

        let mut offsets = vec![0; levels.len()];
        let mut total = 0;
        for (i, level) in levels.iter().enumerate().rev() {
            offsets[i] = total;
            total += level.cells();
        }

        Ok(Self {
            image_width,
            image_height,
            levels,
            offsets,
            total,
        })
    }

    pub fn image_width(&self) -> u32 {
        self.image_width
    }

    pub fn image_height(&self) -> u32 {
        self.image_height
    }

    /// Levels in ascending order (P3 first).
    pub fn levels(&self) -> &[LevelSpec] {
        &self.levels
    }

    pub fn level(&self, level: u8) -> Option<&LevelSpec> {
        self.levels.iter().find(|l| l.level == level)
    }

    /// Total number of anchors over all levels.
    pub fn total_anchors(&self) -> usize {
        self.total
    }

    /// Enumeration index of a grid cell on the `pos`-th level (ascending order).
    #[inline]
    pub(crate) fn anchor_id(&self, pos: usize, grid_x: u32, grid_y: u32) -> usize {
        let level = &self.levels[pos];
        self.offsets[pos] + grid_y as usize * level.width as usize + grid_x as usize
    }

    /// Inverse of the enumeration order.
    pub fn anchor_at(&self, id: usize) -> Option<AnchorPoint> {
        if id >= self.total {
            return None;
        }
        let pos = (0..self.levels.len())
            .find(|&p| id >= self.offsets[p] && id < self.offsets[p] + self.levels[p].cells())?;
        let level = &self.levels[pos];
        let local = id - self.offsets[pos];
        let grid_x = (local % level.width as usize) as u32;
        let grid_y = (local / level.width as usize) as u32;
        Some(AnchorPoint {
            level: level.level,
            grid_x,
            grid_y,
            img: ImagePoint::new(level.coord(grid_x), level.coord(grid_y)),
        })
    }

    /// Enumeration index of an anchor.
    pub fn id_of(&self, anchor: &AnchorPoint) -> Option<usize> {
        let pos = self.levels.iter().position(|l| l.level == anchor.level)?;
        let level = &self.levels[pos];
        (anchor.grid_x < level.width && anchor.grid_y < level.height)
            .then(|| self.anchor_id(pos, anchor.grid_x, anchor.grid_y))
    }

    /// Every anchor, coarsest level first, row-major within a level.
    pub fn enumerate_anchors(&self) -> Vec<AnchorPoint> {
        let mut out = Vec::with_capacity(self.total);
        for level in self.levels.iter().rev() {
            for grid_y in 0..level.height {
                for grid_x in 0..level.width {
                    out.push(AnchorPoint {
                        level: level.level,
                        grid_x,
                        grid_y,
                        img: ImagePoint::new(level.coord(grid_x), level.coord(grid_y)),
                    });
                }
            }
        }
        out
    }

    /// Same grid layout with every stride and the image scaled by `factor`.
    pub fn scaled(&self, factor: u32) -> Result<Self> {
        let strides: Vec<u32> = self.levels.iter().map(|l| l.stride * factor).collect();
        Self::new(
            self.image_width * factor,
            self.image_height * factor,
            &strides,
        )
    }
}

/// The five-level P3..P7 pyramid with strides 8..128.
pub fn default_pyramid(image_width: u32, image_height: u32) -> Result<PyramidSpec> {
    PyramidSpec::new(image_width, image_height, &DEFAULT_STRIDES)
}
