//! Minimal log-log work-precision SVG plot with slope annotations.

use mprk_bench::WpPoint;

const W: f64 = 640.0;
const H: f64 = 480.0;
const MARGIN: f64 = 60.0;

/// Log-log scatter of error versus total steps; consecutive non-aborted
/// points are connected and labeled with their slope.
pub fn wp_svg(title: &str, points: &[WpPoint]) -> String {
    let usable: Vec<&WpPoint> = points
        .iter()
        .filter(|p| p.err.is_finite() && p.err > 0.0 && p.total_steps() > 0)
        .collect();
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n"
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"14\">{title}</text>\n",
        W / 2.0
    ));
    if usable.len() < 2 {
        svg.push_str("<text x=\"40\" y=\"60\" font-size=\"12\">not enough finite points</text>\n</svg>\n");
        return svg;
    }
    let xs: Vec<f64> = usable.iter().map(|p| (p.total_steps() as f64).log10()).collect();
    let ys: Vec<f64> = usable.iter().map(|p| p.err.log10()).collect();
    let (x0, x1) = bounds(&xs);
    let (y0, y1) = bounds(&ys);
    let px = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (W - 2.0 * MARGIN);
    let py = |y: f64| H - MARGIN - (y - y0) / (y1 - y0) * (H - 2.0 * MARGIN);

    // Axes and labels.
    svg.push_str(&format!(
        "<rect x=\"{MARGIN}\" y=\"{MARGIN}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n",
        W - 2.0 * MARGIN,
        H - 2.0 * MARGIN
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"12\">log10 total steps</text>\n",
        W / 2.0,
        H - 18.0
    ));
    svg.push_str(&format!(
        "<text x=\"18\" y=\"{}\" transform=\"rotate(-90 18 {})\" text-anchor=\"middle\" font-size=\"12\">log10 err</text>\n",
        H / 2.0,
        H / 2.0
    ));
    for (gx, gy) in [(x0, y0), (x1, y1)] {
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"10\">{gx:.1}</text>\n",
            px(gx) - 8.0,
            H - MARGIN + 16.0
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"10\">{gy:.1}</text>\n",
            MARGIN - 34.0,
            py(gy) + 4.0
        ));
    }

    // Connected non-aborted path with per-segment slope labels; aborted
    // points are hollow markers excluded from the annotation.
    let clean: Vec<(f64, f64)> = usable
        .iter()
        .zip(xs.iter().zip(&ys))
        .filter(|(p, _)| !p.aborted)
        .map(|(_, (&x, &y))| (x, y))
        .collect();
    if clean.len() >= 2 {
        let path: Vec<String> = clean
            .iter()
            .enumerate()
            .map(|(i, (x, y))| {
                format!("{}{:.2},{:.2}", if i == 0 { "M" } else { "L" }, px(*x), py(*y))
            })
            .collect();
        svg.push_str(&format!(
            "<path d=\"{}\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\"/>\n",
            path.join(" ")
        ));
        for w in clean.windows(2) {
            let slope = (w[1].1 - w[0].1) / (w[1].0 - w[0].0);
            let (mx, my) = (0.5 * (w[0].0 + w[1].0), 0.5 * (w[0].1 + w[1].1));
            svg.push_str(&format!(
                "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"10\" fill=\"dimgray\">{slope:.2}</text>\n",
                px(mx) + 4.0,
                py(my) - 4.0
            ));
        }
    }
    for (p, (&x, &y)) in usable.iter().zip(xs.iter().zip(&ys)) {
        let fill = if p.aborted { "white" } else { "steelblue" };
        svg.push_str(&format!(
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"4\" fill=\"{fill}\" stroke=\"steelblue\"/>\n",
            px(x),
            py(y)
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

fn bounds(v: &[f64]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &x in v {
        lo = lo.min(x);
        hi = hi.max(x);
    }
    if hi - lo < 1e-9 {
        (lo - 0.5, hi + 0.5)
    } else {
        let pad = 0.05 * (hi - lo);
        (lo - pad, hi + pad)
    }
}
