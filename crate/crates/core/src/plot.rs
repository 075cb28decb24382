//! Minimal hand-emitted SVG line charts: axes, tick labels, polylines
//! and optional vertical error bars. No plotting dependency; output is
//! deterministic for identical input.

/// One polyline.
pub struct Series<'a> {
    pub label: &'a str,
    pub points: &'a [(f64, f64)],
}

/// Vertical error bar centred on (x, y) spanning y ± dy.
#[derive(Debug, Clone, Copy)]
pub struct ErrorBar {
    pub x: f64,
    pub y: f64,
    pub dy: f64,
}

pub struct ChartOptions<'a> {
    pub title: &'a str,
    pub x_label: &'a str,
    pub y_label: &'a str,
    pub width: u32,
    pub height: u32,
}

impl Default for ChartOptions<'_> {
    fn default() -> Self {
        Self {
            title: "",
            x_label: "",
            y_label: "",
            width: 720,
            height: 420,
        }
    }
}

const PALETTE: [&str; 4] = ["#1f6fb4", "#c23f3f", "#3c8a4b", "#8055a8"];
const MARGIN_LEFT: f64 = 72.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 56.0;

fn format_coord(v: f64) -> String {
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s.is_empty() || s == "-" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

fn format_tick(v: f64) -> String {
    if v != 0.0 && (v.abs() < 1e-3 || v.abs() >= 1e5) {
        format!("{v:.3e}")
    } else {
        format_coord(v)
    }
}

/// Renders a line chart over the given series and error bars.
pub fn line_chart(options: &ChartOptions, series: &[Series], error_bars: &[ErrorBar]) -> String {
    let mut x_min = f64::INFINITY;
    let mut x_max = f64::NEG_INFINITY;
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for s in series {
        for &(x, y) in s.points {
            x_min = x_min.min(x);
            x_max = x_max.max(x);
            y_min = y_min.min(y);
            y_max = y_max.max(y);
        }
    }
    for b in error_bars {
        x_min = x_min.min(b.x);
        x_max = x_max.max(b.x);
        y_min = y_min.min(b.y - b.dy);
        y_max = y_max.max(b.y + b.dy);
    }
    if !x_min.is_finite() {
        x_min = 0.0;
        x_max = 1.0;
        y_min = 0.0;
        y_max = 1.0;
    }
    if x_min == x_max {
        x_min -= 0.5;
        x_max += 0.5;
    }
    if y_min == y_max {
        y_min -= 0.5;
        y_max += 0.5;
    }

    let w = options.width as f64;
    let h = options.height as f64;
    let plot_w = w - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = h - MARGIN_TOP - MARGIN_BOTTOM;
    let sx = move |x: f64| MARGIN_LEFT + (x - x_min) / (x_max - x_min) * plot_w;
    let sy = move |y: f64| MARGIN_TOP + plot_h - (y - y_min) / (y_max - y_min) * plot_h;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n",
        options.width, options.height, options.width, options.height
    ));
    svg.push_str(&format!(
        "<!-- physadder {} -->\n",
        env!("CARGO_PKG_VERSION")
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    if !options.title.is_empty() {
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">{}</text>\n",
            w / 2.0,
            options.title
        ));
    }

    // Axes.
    svg.push_str(&format!(
        "<line x1=\"{l}\" y1=\"{t}\" x2=\"{l}\" y2=\"{b}\" stroke=\"black\"/>\n<line x1=\"{l}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>\n",
        l = MARGIN_LEFT,
        t = MARGIN_TOP,
        r = w - MARGIN_RIGHT,
        b = MARGIN_TOP + plot_h
    ));

    // Ticks and grid labels, 5 divisions per axis.
    for i in 0..=5 {
        let fx = x_min + (x_max - x_min) * i as f64 / 5.0;
        let px = sx(fx);
        svg.push_str(&format!(
            "<line x1=\"{px}\" y1=\"{b}\" x2=\"{px}\" y2=\"{b2}\" stroke=\"black\"/>\n",
            b = MARGIN_TOP + plot_h,
            b2 = MARGIN_TOP + plot_h + 5.0
        ));
        svg.push_str(&format!(
            "<text x=\"{px}\" y=\"{ty}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{}</text>\n",
            format_tick(fx),
            ty = MARGIN_TOP + plot_h + 18.0
        ));
        let fy = y_min + (y_max - y_min) * i as f64 / 5.0;
        let py = sy(fy);
        svg.push_str(&format!(
            "<line x1=\"{x2}\" y1=\"{py}\" x2=\"{l}\" y2=\"{py}\" stroke=\"black\"/>\n",
            x2 = MARGIN_LEFT - 5.0,
            l = MARGIN_LEFT
        ));
        svg.push_str(&format!(
            "<text x=\"{tx}\" y=\"{ty}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">{}</text>\n",
            format_tick(fy),
            tx = MARGIN_LEFT - 8.0,
            ty = py + 4.0
        ));
    }

    if !options.x_label.is_empty() {
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">{}</text>\n",
            MARGIN_LEFT + plot_w / 2.0,
            h - 12.0,
            options.x_label
        ));
    }
    if !options.y_label.is_empty() {
        svg.push_str(&format!(
            "<text x=\"16\" y=\"{}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 {})\">{}</text>\n",
            MARGIN_TOP + plot_h / 2.0,
            MARGIN_TOP + plot_h / 2.0,
            options.y_label
        ));
    }

    for bar in error_bars {
        let px = sx(bar.x);
        let top = sy(bar.y + bar.dy);
        let bottom = sy(bar.y - bar.dy);
        svg.push_str(&format!(
            "<line x1=\"{px}\" y1=\"{top}\" x2=\"{px}\" y2=\"{bottom}\" stroke=\"#555555\"/>\n"
        ));
        for py in [top, bottom] {
            svg.push_str(&format!(
                "<line x1=\"{}\" y1=\"{py}\" x2=\"{}\" y2=\"{py}\" stroke=\"#555555\"/>\n",
                px - 4.0,
                px + 4.0
            ));
        }
    }

    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let coords: Vec<String> = s
            .points
            .iter()
            .map(|&(x, y)| format!("{},{}", format_coord(sx(x)), format_coord(sy(y))))
            .collect();
        svg.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
            coords.join(" ")
        ));
        if !s.label.is_empty() {
            svg.push_str(&format!(
                "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" fill=\"{color}\">{}</text>\n",
                w - MARGIN_RIGHT - 150.0,
                MARGIN_TOP + 16.0 * (i + 1) as f64,
                s.label
            ));
        }
    }

    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chart_contains_polyline_and_is_deterministic() {
        let points = [(0.0, 1.0), (1.0, 3.0), (2.0, 2.0)];
        let series = [Series {
            label: "flux",
            points: &points,
        }];
        let options = ChartOptions {
            title: "test",
            x_label: "step",
            y_label: "value",
            ..ChartOptions::default()
        };
        let a = line_chart(&options, &series, &[]);
        let b = line_chart(&options, &series, &[]);
        assert_eq!(a, b);
        assert!(a.starts_with("<svg"));
        assert!(a.contains("<polyline"));
        assert!(a.ends_with("</svg>\n"));
    }

    #[test]
    fn error_bars_rendered() {
        let points = [(1.0, 2.0)];
        let series = [Series {
            label: "",
            points: &points,
        }];
        let bars = [ErrorBar {
            x: 1.0,
            y: 2.0,
            dy: 0.5,
        }];
        let svg = line_chart(&ChartOptions::default(), &series, &bars);
        assert!(svg.matches("stroke=\"#555555\"").count() >= 3);
    }

    #[test]
    fn empty_chart_still_valid() {
        let svg = line_chart(&ChartOptions::default(), &[], &[]);
        assert!(svg.starts_with("<svg"));
        assert!(svg.ends_with("</svg>\n"));
    }
}
