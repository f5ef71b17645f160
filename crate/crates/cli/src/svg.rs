//! Static SVG regret charts: cumulative regret and surrogate regret against
//! the round index on a log-scaled x axis. Plain polylines and text, no
//! renderer dependency, so figures regenerate byte-identically.

use invopt_core::sim::ExperimentTrace;

const WIDTH: f64 = 860.0;
const HEIGHT: f64 = 520.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 30.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 55.0;
const MAX_POINTS_PER_CURVE: usize = 512;

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

pub fn render_regret_chart(traces: &[(String, ExperimentTrace<f64>)]) -> String {
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;

    let max_t = traces
        .iter()
        .map(|(_, t)| t.rounds.len())
        .max()
        .unwrap_or(0);
    let mut max_y = 0.0f64;
    for (_, trace) in traces {
        for row in &trace.rounds {
            max_y = max_y.max(row.cum_regret).max(row.cum_tilde);
        }
    }
    if max_y <= 0.0 {
        max_y = 1.0;
    }
    let log_max = (max_t.max(2) as f64).log10();
    let x_of = |t: usize| MARGIN_LEFT + (t.max(1) as f64).log10() / log_max * plot_w;
    let y_of = |v: f64| MARGIN_TOP + (1.0 - (v / max_y).clamp(0.0, 1.0)) * plot_h;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"monospace\" font-size=\"12\">\n"
    ));
    svg.push_str(&format!(
        "<rect x=\"0\" y=\"0\" width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
    ));

    // Axes.
    let x0 = MARGIN_LEFT;
    let x1 = WIDTH - MARGIN_RIGHT;
    let y0 = HEIGHT - MARGIN_BOTTOM;
    let y1 = MARGIN_TOP;
    svg.push_str(&format!(
        "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y0}\" stroke=\"black\"/>\n"
    ));
    svg.push_str(&format!(
        "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x0}\" y2=\"{y1}\" stroke=\"black\"/>\n"
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">round t (log scale)</text>\n",
        (x0 + x1) / 2.0,
        HEIGHT - 12.0
    ));
    svg.push_str(&format!(
        "<text x=\"16\" y=\"{}\" transform=\"rotate(-90 16 {})\" text-anchor=\"middle\">cumulative regret</text>\n",
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    ));

    // Decade ticks on x.
    let mut decade = 1usize;
    while decade <= max_t.max(1) {
        let x = x_of(decade);
        svg.push_str(&format!(
            "<line x1=\"{x}\" y1=\"{y0}\" x2=\"{x}\" y2=\"{}\" stroke=\"#cccccc\"/>\n",
            y0 + 5.0
        ));
        svg.push_str(&format!(
            "<text x=\"{x}\" y=\"{}\" text-anchor=\"middle\">{decade}</text>\n",
            y0 + 20.0
        ));
        decade = decade.saturating_mul(10);
        if decade == 0 {
            break;
        }
    }
    // Five linear ticks on y.
    for k in 0..=5 {
        let v = max_y * k as f64 / 5.0;
        let y = y_of(v);
        svg.push_str(&format!(
            "<line x1=\"{}\" y1=\"{y}\" x2=\"{x0}\" y2=\"{y}\" stroke=\"#cccccc\"/>\n",
            x0 - 5.0
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{v:.3}</text>\n",
            x0 - 8.0,
            y + 4.0
        ));
    }

    // Curves: solid = R, dashed = R̃.
    for (idx, (label, trace)) in traces.iter().enumerate() {
        let color = PALETTE[idx % PALETTE.len()];
        let stride = (trace.rounds.len() / MAX_POINTS_PER_CURVE).max(1);
        for (dash, pick) in [
            ("", &(|r: &invopt_core::sim::RoundTrace<f64>| r.cum_regret) as &dyn Fn(_) -> f64),
            ("stroke-dasharray=\"6 3\" ", &|r: &invopt_core::sim::RoundTrace<f64>| r.cum_tilde),
        ] {
            if trace.rounds.is_empty() {
                continue;
            }
            let mut points = String::new();
            for (i, row) in trace.rounds.iter().enumerate() {
                if i % stride != 0 && i + 1 != trace.rounds.len() {
                    continue;
                }
                points.push_str(&format!("{:.2},{:.2} ", x_of(row.round), y_of(pick(row))));
            }
            svg.push_str(&format!(
                "<polyline fill=\"none\" stroke=\"{color}\" {dash}points=\"{}\"/>\n",
                points.trim_end()
            ));
        }
        // Legend entry.
        let ly = MARGIN_TOP + 16.0 * idx as f64;
        svg.push_str(&format!(
            "<line x1=\"{}\" y1=\"{ly}\" x2=\"{}\" y2=\"{ly}\" stroke=\"{color}\"/>\n",
            x1 - 180.0,
            x1 - 150.0
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\">{}</text>\n",
            x1 - 144.0,
            ly + 4.0,
            xml_escape(label)
        ));
    }
    svg.push_str(&format!(
        "<text x=\"{x0}\" y=\"{}\">solid: regret R, dashed: surrogate regret R~</text>\n",
        MARGIN_TOP - 14.0
    ));
    svg.push_str("</svg>\n");
    svg
}

fn xml_escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
