//! Minimal hand-rolled SVG plots: the reaction curve of a run and the
//! network geometry colored by hinge state.

use beamnet::netgen::NetworkModel;
use beamnet::solver::StepRecord;
use beamnet::HingeState;

const CURVE_WIDTH: f64 = 720.0;
const CURVE_HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 20.0;
const MARGIN_BOTTOM: f64 = 50.0;

const COLOR_CURVE: &str = "#1f77b4";
const COLOR_VIRGIN: &str = "#7f7f7f";
const COLOR_SOFTENING: &str = "#ff7f0e";
const COLOR_RUPTURED: &str = "#d62728";
const COLOR_FIXED_GRIP: &str = "#2ca02c";
const COLOR_MOVING_GRIP: &str = "#1f77b4";

fn fmt(v: f64) -> String {
    format!("{v:.4}")
}

/// Reaction-displacement curve with labeled axes.
pub fn curve_svg(records: &[StepRecord]) -> String {
    let u_max = records.iter().map(|r| r.u).fold(0.0f64, f64::max).max(1e-12);
    let r_max = records
        .iter()
        .map(|r| r.reaction)
        .fold(0.0f64, f64::max)
        .max(1e-12)
        * 1.05;
    let plot_w = CURVE_WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = CURVE_HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let x = |u: f64| MARGIN_LEFT + u / u_max * plot_w;
    let y = |r: f64| MARGIN_TOP + plot_h - r / r_max * plot_h;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{CURVE_WIDTH}\" \
         height=\"{CURVE_HEIGHT}\" viewBox=\"0 0 {CURVE_WIDTH} {CURVE_HEIGHT}\">\n"
    ));
    svg.push_str(&format!(
        "<rect width=\"{CURVE_WIDTH}\" height=\"{CURVE_HEIGHT}\" fill=\"white\"/>\n"
    ));

    // axes
    svg.push_str(&format!(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        fmt(MARGIN_LEFT),
        fmt(MARGIN_TOP + plot_h),
        fmt(MARGIN_LEFT + plot_w),
        fmt(MARGIN_TOP + plot_h)
    ));
    svg.push_str(&format!(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        fmt(MARGIN_LEFT),
        fmt(MARGIN_TOP),
        fmt(MARGIN_LEFT),
        fmt(MARGIN_TOP + plot_h)
    ));

    // ticks and labels
    for k in 0..=5 {
        let f = k as f64 / 5.0;
        let xt = x(f * u_max);
        let yt = y(f * r_max);
        svg.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
            fmt(xt),
            fmt(MARGIN_TOP + plot_h),
            fmt(xt),
            fmt(MARGIN_TOP + plot_h + 5.0)
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">{}</text>\n",
            fmt(xt),
            fmt(MARGIN_TOP + plot_h + 20.0),
            fmt(f * u_max)
        ));
        svg.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
            fmt(MARGIN_LEFT - 5.0),
            fmt(yt),
            fmt(MARGIN_LEFT),
            fmt(yt)
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"end\">{}</text>\n",
            fmt(MARGIN_LEFT - 8.0),
            fmt(yt + 4.0),
            fmt(f * r_max)
        ));
    }
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"14\" text-anchor=\"middle\">displacement [mm]</text>\n",
        fmt(MARGIN_LEFT + plot_w / 2.0),
        fmt(CURVE_HEIGHT - 10.0)
    ));
    svg.push_str(&format!(
        "<text x=\"15\" y=\"{}\" font-size=\"14\" text-anchor=\"middle\" \
         transform=\"rotate(-90 15 {})\">reaction [N]</text>\n",
        fmt(MARGIN_TOP + plot_h / 2.0),
        fmt(MARGIN_TOP + plot_h / 2.0)
    ));

    // the curve itself, anchored at the origin
    let mut points = vec![format!("{},{}", fmt(x(0.0)), fmt(y(0.0)))];
    points.extend(
        records
            .iter()
            .map(|r| format!("{},{}", fmt(x(r.u)), fmt(y(r.reaction)))),
    );
    svg.push_str(&format!(
        "<polyline points=\"{}\" fill=\"none\" stroke=\"{COLOR_CURVE}\" \
         stroke-width=\"1.5\"/>\n",
        points.join(" ")
    ));
    svg.push_str("</svg>\n");
    svg
}

/// Network geometry with elements colored by hinge state and grip nodes
/// marked. The y axis is flipped so the sheet appears in its natural
/// orientation.
pub fn network_svg(model: &NetworkModel, states: &[HingeState]) -> String {
    assert_eq!(states.len(), model.elements.len(), "one state per element");
    let margin = 0.05 * model.width.max(model.height);
    let view_w = model.width + 2.0 * margin;
    let view_h = model.height + 2.0 * margin;
    let x = |v: f64| v + margin;
    let y = |v: f64| model.height - v + margin;
    let stroke = 0.008 * model.width.max(model.height);

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" \
         viewBox=\"0 0 {} {}\">\n",
        fmt(view_w),
        fmt(view_h)
    ));
    svg.push_str(&format!(
        "<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n",
        fmt(view_w),
        fmt(view_h)
    ));
    for (e, state) in model.elements.iter().zip(states) {
        let a = model.nodes[e.n1];
        let b = model.nodes[e.n2];
        let color = if state.ruptured {
            COLOR_RUPTURED
        } else if state.alpha > 0.0 {
            COLOR_SOFTENING
        } else {
            COLOR_VIRGIN
        };
        svg.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" \
             stroke-width=\"{}\" stroke-linecap=\"round\"/>\n",
            fmt(x(a[0])),
            fmt(y(a[1])),
            fmt(x(b[0])),
            fmt(y(b[1])),
            color,
            fmt(stroke)
        ));
    }
    let radius = 1.5 * stroke;
    for (nodes, color) in [
        (&model.fixed_nodes, COLOR_FIXED_GRIP),
        (&model.moving_nodes, COLOR_MOVING_GRIP),
    ] {
        for &n in nodes.iter() {
            let p = model.nodes[n];
            svg.push_str(&format!(
                "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{}\"/>\n",
                fmt(x(p[0])),
                fmt(y(p[1])),
                fmt(radius),
                color
            ));
        }
    }
    svg.push_str("</svg>\n");
    svg
}
