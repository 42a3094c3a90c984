//! Minimal static SVG line plots with a log10 y-axis, for the sweep outputs.

pub struct Series {
    pub label: String,
    /// (x, y) with y > 0; non-positive or non-finite points are skipped.
    pub points: Vec<(f64, f64)>,
}

const COLORS: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];
const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 440.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 20.0;
const MARGIN_B: f64 = 50.0;

pub fn render_log_plot(series: &[Series], x_label: &str, y_label: &str) -> String {
    let pts: Vec<(f64, f64)> = series
        .iter()
        .flat_map(|s| s.points.iter())
        .filter(|(x, y)| x.is_finite() && y.is_finite() && *y > 0.0)
        .map(|&(x, y)| (x, y.log10()))
        .collect();
    let (x_lo, x_hi) = bounds(pts.iter().map(|p| p.0));
    let (y_lo, y_hi) = bounds(pts.iter().map(|p| p.1));

    let to_px = |x: f64, ylog: f64| -> (f64, f64) {
        let px = MARGIN_L + (x - x_lo) / (x_hi - x_lo) * (WIDTH - MARGIN_L - MARGIN_R);
        let py = HEIGHT - MARGIN_B - (ylog - y_lo) / (y_hi - y_lo) * (HEIGHT - MARGIN_T - MARGIN_B);
        (px, py)
    };

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\" font-size=\"12\">\n"
    ));
    out.push_str(&format!(
        "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
    ));
    // axes
    out.push_str(&format!(
        "<line x1=\"{MARGIN_L}\" y1=\"{MARGIN_T}\" x2=\"{MARGIN_L}\" y2=\"{}\" stroke=\"black\"/>\n",
        HEIGHT - MARGIN_B
    ));
    out.push_str(&format!(
        "<line x1=\"{MARGIN_L}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        HEIGHT - MARGIN_B,
        WIDTH - MARGIN_R,
        HEIGHT - MARGIN_B
    ));
    // ticks
    for i in 0..=4 {
        let x = x_lo + (x_hi - x_lo) * i as f64 / 4.0;
        let (px, _) = to_px(x, y_lo);
        out.push_str(&format!(
            "<line x1=\"{px:.1}\" y1=\"{0}\" x2=\"{px:.1}\" y2=\"{1}\" stroke=\"black\"/>\n\
             <text x=\"{px:.1}\" y=\"{2}\" text-anchor=\"middle\">{x:.3}</text>\n",
            HEIGHT - MARGIN_B,
            HEIGHT - MARGIN_B + 5.0,
            HEIGHT - MARGIN_B + 18.0
        ));
        let ylog = y_lo + (y_hi - y_lo) * i as f64 / 4.0;
        let (_, py) = to_px(x_lo, ylog);
        out.push_str(&format!(
            "<line x1=\"{0}\" y1=\"{py:.1}\" x2=\"{1}\" y2=\"{py:.1}\" stroke=\"black\"/>\n\
             <text x=\"{2}\" y=\"{3:.1}\" text-anchor=\"end\">1e{ylog:.1}</text>\n",
            MARGIN_L - 5.0,
            MARGIN_L,
            MARGIN_L - 8.0,
            py + 4.0
        ));
    }
    out.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{x_label}</text>\n",
        MARGIN_L + 0.5 * (WIDTH - MARGIN_L - MARGIN_R),
        HEIGHT - 10.0
    ));
    out.push_str(&format!(
        "<text x=\"15\" y=\"{:.1}\" text-anchor=\"middle\" transform=\"rotate(-90 15 {:.1})\">{y_label}</text>\n",
        MARGIN_T + 0.5 * (HEIGHT - MARGIN_T - MARGIN_B),
        MARGIN_T + 0.5 * (HEIGHT - MARGIN_T - MARGIN_B)
    ));
    // series
    for (i, s) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let path: Vec<String> = s
            .points
            .iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite() && *y > 0.0)
            .map(|&(x, y)| {
                let (px, py) = to_px(x, y.log10());
                format!("{px:.1},{py:.1}")
            })
            .collect();
        if path.is_empty() {
            continue;
        }
        out.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n",
            path.join(" ")
        ));
        out.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" fill=\"{color}\">{}</text>\n",
            WIDTH - MARGIN_R - 120.0,
            MARGIN_T + 16.0 * (i + 1) as f64,
            s.label
        ));
    }
    out.push_str("</svg>\n");
    out
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !lo.is_finite() || !hi.is_finite() {
        (0.0, 1.0)
    } else if lo == hi {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}
