//! Deterministic SVG rendering of the blown circle and the
//! devil's-staircase graph of the collapse map.
//!
//! Elements are emitted in a fixed order (gaps in circular order from gap
//! (0,0)), so identical inputs produce byte-identical files.

use denjoy::circle::DenjoyMap;
use denjoy::error::{Error, Result};
use num_traits::ToPrimitive;
use std::fmt::Write;

const WIDTH: f64 = 900.0;
const HEIGHT: f64 = 480.0;
const CIRCLE_CX: f64 = 240.0;
const CIRCLE_CY: f64 = 240.0;
const CIRCLE_R: f64 = 180.0;
const GRAPH_X0: f64 = 500.0;
const GRAPH_X1: f64 = 870.0;
const GRAPH_Y0: f64 = 440.0;
const GRAPH_Y1: f64 = 40.0;

struct GapDatum {
    blown_left: f64,
    blown_right: f64,
    collapsed: f64,
}

pub fn render_svg(map: &DenjoyMap) -> Result<String> {
    let circumference = map
        .circumference()
        .to_f64()
        .ok_or_else(|| Error::InvalidInput("circumference overflows f64".into()))?;

    let mut data = Vec::new();
    for index in map.gap_circular_order() {
        let left = map.gap_blown_left(index)?;
        let length = map.gap_length(index)?;
        let point = map.gap_point(index, num_rational::BigRational::new(0.into(), 1.into()))?;
        let collapsed = map.collapse(&point)?;
        let blown_left = left
            .midpoint()
            .to_f64()
            .ok_or_else(|| Error::InvalidInput("coordinate overflows f64".into()))?;
        let len = length
            .to_f64()
            .ok_or_else(|| Error::InvalidInput("length overflows f64".into()))?;
        let y = collapsed
            .midpoint()
            .to_f64()
            .ok_or_else(|| Error::InvalidInput("angle overflows f64".into()))?;
        data.push(GapDatum {
            blown_left,
            blown_right: blown_left + len,
            collapsed: y,
        });
    }

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">",
        WIDTH, HEIGHT, WIDTH, HEIGHT
    );
    let _ = writeln!(
        svg,
        "  <rect width=\"{}\" height=\"{}\" fill=\"white\"/>",
        WIDTH, HEIGHT
    );

    // left panel: the blown circle with the resolved gaps highlighted
    let _ = writeln!(
        svg,
        "  <circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>",
        CIRCLE_CX, CIRCLE_CY, CIRCLE_R
    );
    for d in &data {
        let _ = writeln!(svg, "  {}", arc_path(d, circumference));
    }

    // right panel: the devil's staircase of the collapse map
    let _ = writeln!(
        svg,
        "  <rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>",
        GRAPH_X0,
        GRAPH_Y1,
        GRAPH_X1 - GRAPH_X0,
        GRAPH_Y0 - GRAPH_Y1
    );
    let mut path = String::new();
    let to_px = |blown: f64, collapsed: f64| -> (f64, f64) {
        let x = GRAPH_X0 + (GRAPH_X1 - GRAPH_X0) * (blown / circumference);
        let y = GRAPH_Y0 + (GRAPH_Y1 - GRAPH_Y0) * collapsed;
        (x, y)
    };
    for (i, d) in data.iter().enumerate() {
        let (x0, y0) = to_px(d.blown_left, d.collapsed);
        let (x1, _) = to_px(d.blown_right, d.collapsed);
        if i == 0 {
            let _ = write!(path, "M {:.3} {:.3} ", x0, y0);
        } else {
            let _ = write!(path, "L {:.3} {:.3} ", x0, y0);
        }
        let _ = write!(path, "L {:.3} {:.3} ", x1, y0);
    }
    let (x_end, y_end) = to_px(circumference, 1.0);
    let _ = write!(path, "L {:.3} {:.3}", x_end, y_end);
    let _ = writeln!(
        svg,
        "  <path d=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"1.2\"/>",
        path
    );
    let _ = writeln!(svg, "</svg>");
    Ok(svg)
}

fn arc_path(d: &GapDatum, circumference: f64) -> String {
    let theta = |blown: f64| 2.0 * std::f64::consts::PI * (blown / circumference);
    let point = |t: f64| {
        (
            CIRCLE_CX + CIRCLE_R * t.cos(),
            CIRCLE_CY - CIRCLE_R * t.sin(),
        )
    };
    let t0 = theta(d.blown_left);
    let t1 = theta(d.blown_right);
    let (x0, y0) = point(t0);
    let (x1, y1) = point(t1);
    let large = if (t1 - t0).abs() > std::f64::consts::PI {
        1
    } else {
        0
    };
    format!(
        "<path d=\"M {:.3} {:.3} A {:.3} {:.3} 0 {} 0 {:.3} {:.3}\" fill=\"none\" stroke=\"red\" stroke-width=\"5\"/>",
        x0, y0, CIRCLE_R, CIRCLE_R, large, x1, y1
    )
}
