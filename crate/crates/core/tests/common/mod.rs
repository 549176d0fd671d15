#![allow(dead_code)]

use rotassign_core::{OrientedBox, PyramidSpec};
use rotassign_oracles::{PlainBox, SeededScenario};

pub fn to_plain(b: &OrientedBox) -> PlainBox {
    PlainBox {
        cx: b.cx(),
        cy: b.cy(),
        w: b.w(),
        h: b.h(),
        theta_deg: b.theta(),
    }
}

pub fn scenario_boxes(s: &SeededScenario) -> Vec<OrientedBox> {
    s.boxes
        .iter()
        .map(|(b, c)| OrientedBox::new(b.cx, b.cy, b.w, b.h, b.theta_deg, *c).unwrap())
        .collect()
}

pub fn scenario_pyramid(s: &SeededScenario) -> PyramidSpec {
    rotassign_core::default_pyramid(s.width, s.height).unwrap()
}
