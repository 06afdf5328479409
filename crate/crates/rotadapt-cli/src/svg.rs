//! Self-contained SVG charts: a log-x line chart for the source-size sweep
//! and a heatmap for the inclination/noise grid. Hand-rolled so the output
//! is a plain static file with deterministic bytes.

use std::fmt::Write;

use rotadapt::{CellId, ExperimentResult};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN_LEFT: f64 = 82.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 42.0;
const MARGIN_BOTTOM: f64 = 64.0;

const ADAPTED_COLOR: &str = "#1f77b4";
const TARGET_COLOR: &str = "#d62728";

/// Compact deterministic number label.
fn label(v: f64) -> String {
    if v.is_nan() {
        return "n/a".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let text = if v.abs() >= 0.001 && v.abs() < 100_000.0 {
        format!("{v:.3}")
    } else {
        return format!("{v:.2e}");
    };
    let trimmed = text.trim_end_matches('0').trim_end_matches('.');
    trimmed.to_string()
}

fn coord(v: f64) -> String {
    format!("{v:.2}")
}

struct Svg {
    body: String,
}

impl Svg {
    fn new(title: &str) -> Self {
        let mut body = String::new();
        let _ = writeln!(
            body,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
             viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\" font-size=\"12\">"
        );
        let _ = writeln!(
            body,
            "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>"
        );
        let _ = writeln!(
            body,
            "<text x=\"{}\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">{title}</text>",
            WIDTH / 2.0
        );
        Self { body }
    }

    fn line(&mut self, x1: f64, y1: f64, x2: f64, y2: f64, stroke: &str, width: f64) {
        let _ = writeln!(
            self.body,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{stroke}\" stroke-width=\"{width}\"/>",
            coord(x1),
            coord(y1),
            coord(x2),
            coord(y2)
        );
    }

    fn text(&mut self, x: f64, y: f64, anchor: &str, content: &str) {
        let _ = writeln!(
            self.body,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"{anchor}\">{content}</text>",
            coord(x),
            coord(y)
        );
    }

    fn circle(&mut self, x: f64, y: f64, r: f64, fill: &str) {
        let _ = writeln!(
            self.body,
            "<circle cx=\"{}\" cy=\"{}\" r=\"{r}\" fill=\"{fill}\"/>",
            coord(x),
            coord(y)
        );
    }

    fn rect(&mut self, x: f64, y: f64, w: f64, h: f64, fill: &str) {
        let _ = writeln!(
            self.body,
            "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{fill}\" stroke=\"#888888\" stroke-width=\"0.5\"/>",
            coord(x),
            coord(y),
            coord(w),
            coord(h)
        );
    }

    fn polyline(&mut self, points: &[(f64, f64)], stroke: &str) {
        if points.len() < 2 {
            return;
        }
        let list: Vec<String> = points
            .iter()
            .map(|&(x, y)| format!("{},{}", coord(x), coord(y)))
            .collect();
        let _ = writeln!(
            self.body,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"1.8\"/>",
            list.join(" ")
        );
    }

    fn finish(mut self) -> String {
        self.body.push_str("</svg>\n");
        self.body
    }
}

/// Line chart of the source-size sweep: median test MSE of both methods
/// over a log-scaled source size, with the adapted method's interquartile
/// range as vertical whiskers.
pub fn ns_sweep_chart(results: &[ExperimentResult]) -> String {
    let mut svg = Svg::new("Median test MSE vs. source size");
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;

    let ns: Vec<f64> = results
        .iter()
        .map(|r| match r.cell {
            CellId::SourceSize(n) => n as f64,
            CellId::ThetaSigma { .. } => f64::NAN,
        })
        .collect();
    let log_min = ns.iter().cloned().fold(f64::INFINITY, f64::min).log10();
    let log_max = ns.iter().cloned().fold(1.0f64, f64::max).log10();
    let span = (log_max - log_min).max(1e-9);
    let x_of = |n: f64| MARGIN_LEFT + (n.log10() - log_min) / span * plot_w;

    let mut y_top = 0.0f64;
    for r in results {
        for v in [r.median_mse_target_only, r.median_mse_adapted, r.q3_mse_adapted] {
            if v.is_finite() {
                y_top = y_top.max(v);
            }
        }
    }
    let y_top = if y_top > 0.0 { y_top * 1.05 } else { 1.0 };
    let y_of = |v: f64| MARGIN_TOP + plot_h - (v / y_top).clamp(0.0, 1.0) * plot_h;

    // Axes.
    let x0 = MARGIN_LEFT;
    let y0 = MARGIN_TOP + plot_h;
    svg.line(x0, MARGIN_TOP, x0, y0, "#000000", 1.0);
    svg.line(x0, y0, x0 + plot_w, y0, "#000000", 1.0);
    svg.text(
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 14.0,
        "middle",
        "source size n_s (log scale)",
    );
    svg.text(16.0, MARGIN_TOP - 10.0, "start", "median MSE");

    // Y ticks.
    for i in 0..=4 {
        let v = y_top * i as f64 / 4.0;
        let y = y_of(v);
        svg.line(x0 - 4.0, y, x0, y, "#000000", 1.0);
        svg.text(x0 - 8.0, y + 4.0, "end", &label(v));
    }
    // X ticks at the sampled sizes.
    for &n in &ns {
        let x = x_of(n);
        svg.line(x, y0, x, y0 + 4.0, "#000000", 1.0);
        svg.text(x, y0 + 18.0, "middle", &label(n));
    }

    // Interquartile whiskers for the adapted method.
    for r in results {
        let CellId::SourceSize(n) = r.cell else { continue };
        if r.q1_mse_adapted.is_finite() && r.q3_mse_adapted.is_finite() {
            let x = x_of(n as f64);
            let (ylo, yhi) = (y_of(r.q1_mse_adapted), y_of(r.q3_mse_adapted));
            svg.line(x, ylo, x, yhi, ADAPTED_COLOR, 1.0);
            svg.line(x - 3.0, ylo, x + 3.0, ylo, ADAPTED_COLOR, 1.0);
            svg.line(x - 3.0, yhi, x + 3.0, yhi, ADAPTED_COLOR, 1.0);
        }
    }

    // Median polylines and markers.
    let series: [(fn(&ExperimentResult) -> f64, &str); 2] = [
        (|r| r.median_mse_target_only, TARGET_COLOR),
        (|r| r.median_mse_adapted, ADAPTED_COLOR),
    ];
    for (value, color) in series {
        let pts: Vec<(f64, f64)> = results
            .iter()
            .filter_map(|r| {
                let CellId::SourceSize(n) = r.cell else { return None };
                let v = value(r);
                v.is_finite().then(|| (x_of(n as f64), y_of(v)))
            })
            .collect();
        svg.polyline(&pts, color);
        for &(x, y) in &pts {
            svg.circle(x, y, 3.0, color);
        }
    }

    // Legend.
    let lx = MARGIN_LEFT + plot_w - 150.0;
    svg.rect(lx, MARGIN_TOP + 6.0, 10.0, 10.0, TARGET_COLOR);
    svg.text(lx + 16.0, MARGIN_TOP + 15.0, "start", "target-only fit");
    svg.rect(lx, MARGIN_TOP + 24.0, 10.0, 10.0, ADAPTED_COLOR);
    svg.text(lx + 16.0, MARGIN_TOP + 33.0, "start", "adapted fit");

    svg.finish()
}

/// Diverging color for a variation value normalized by `scale`: blue for
/// negative (adaptation loses), white near zero, red for positive.
fn variation_color(v: f64, scale: f64) -> String {
    if v.is_nan() {
        return "#cccccc".into();
    }
    let t = (v / scale).clamp(-1.0, 1.0);
    let lerp = |a: f64, b: f64| -> u8 { (a + (b - a) * t.abs()).round() as u8 };
    let (r, g, b) = if t >= 0.0 {
        (lerp(255.0, 178.0), lerp(255.0, 24.0), lerp(255.0, 43.0))
    } else {
        (lerp(255.0, 33.0), lerp(255.0, 102.0), lerp(255.0, 172.0))
    };
    format!("#{r:02x}{g:02x}{b:02x}")
}

/// Heatmap of median variation over the inclination/noise grid. Expects
/// `results` in row-major order (theta outer, sigma inner), matching the
/// grid runner.
pub fn theta_sigma_heatmap(
    results: &[ExperimentResult],
    thetas: &[f64],
    sigmas: &[f64],
) -> String {
    let mut svg = Svg::new("Median variation over the theta-sigma grid");
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let cell_w = plot_w / thetas.len() as f64;
    let cell_h = plot_h / sigmas.len() as f64;

    let scale = results
        .iter()
        .map(|r| r.median_variation)
        .filter(|v| v.is_finite())
        .fold(0.0f64, |acc, v| acc.max(v.abs()))
        .max(1e-9);

    for (ti, _) in thetas.iter().enumerate() {
        for (si, _) in sigmas.iter().enumerate() {
            let r = &results[ti * sigmas.len() + si];
            let v = r.median_variation;
            let x = MARGIN_LEFT + ti as f64 * cell_w;
            // Larger sigma drawn higher up.
            let y = MARGIN_TOP + (sigmas.len() - 1 - si) as f64 * cell_h;
            let clamped = if v.is_infinite() {
                if v > 0.0 {
                    scale
                } else {
                    -scale
                }
            } else {
                v
            };
            svg.rect(x, y, cell_w, cell_h, &variation_color(clamped, scale));
            svg.text(
                x + cell_w / 2.0,
                y + cell_h / 2.0 + 4.0,
                "middle",
                &label(v),
            );
        }
    }

    for (ti, &theta) in thetas.iter().enumerate() {
        svg.text(
            MARGIN_LEFT + (ti as f64 + 0.5) * cell_w,
            MARGIN_TOP + plot_h + 18.0,
            "middle",
            &label(theta),
        );
    }
    for (si, &sigma) in sigmas.iter().enumerate() {
        svg.text(
            MARGIN_LEFT - 8.0,
            MARGIN_TOP + (sigmas.len() - 1 - si) as f64 * cell_h + cell_h / 2.0 + 4.0,
            "end",
            &label(sigma),
        );
    }
    svg.text(
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 14.0,
        "middle",
        "theta (radians)",
    );
    svg.text(16.0, MARGIN_TOP - 10.0, "start", "sigma");

    svg.finish()
}
