//! Standalone SVG comparison plot: target polyline, estimate markers.

use std::fmt::Write as _;

use qspline_core::FitReport;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 56.0;

/// Renders the fit as an SVG document. Output depends only on the report.
pub fn render(report: &FitReport) -> String {
    let ys = report.points.iter().flat_map(|p| [p.y, p.y_hat]);
    let (lo, hi) = ys.fold((0.0f64, 1.0f64), |(lo, hi), v| (lo.min(v), hi.max(v)));
    let pad = 0.05 * (hi - lo);
    let (lo, hi) = (lo - pad, hi + pad);
    let px = |x: f64| MARGIN + x * (WIDTH - 2.0 * MARGIN);
    let py = |y: f64| HEIGHT - MARGIN - (y - lo) / (hi - lo) * (HEIGHT - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#);
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="24" font-family="sans-serif" font-size="15" text-anchor="middle">{} K={} NRMSE={:.4}</text>"#,
        WIDTH / 2.0,
        report.function,
        report.knots,
        report.nrmse
    );
    // axes
    let (x0, x1, y0, y1) = (px(0.0), px(1.0), py(lo), py(hi));
    let _ = writeln!(s, r#"<g stroke="black" stroke-width="1"><line x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y0:.2}"/><line x1="{x0:.2}" y1="{y0:.2}" x2="{x0:.2}" y2="{y1:.2}"/></g>"#);
    let _ = writeln!(s, r#"<g font-family="sans-serif" font-size="11">"#);
    for t in 0..=4 {
        let f = t as f64 / 4.0;
        let v = lo + f * (hi - lo);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{f:.2}</text>"#, px(f), y0 + 16.0);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{v:.2}</text>"#, x0 - 6.0, py(v) + 4.0);
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="12" text-anchor="middle">x (normalised input)</text>"#,
        WIDTH / 2.0,
        HEIGHT - 14.0
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.1}" font-family="sans-serif" font-size="12" text-anchor="middle" transform="rotate(-90 16 {:.1})">y (normalised)</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );

    let line: Vec<String> = report.points.iter().map(|p| format!("{:.2},{:.2}", px(p.x), py(p.y))).collect();
    let _ = writeln!(s, r##"<polyline fill="none" stroke="#1f77b4" stroke-width="2" points="{}"/>"##, line.join(" "));
    let _ = writeln!(s, r##"<g fill="#d62728">"##);
    for p in &report.points {
        let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="3.5"/>"#, px(p.x), py(p.y_hat));
    }
    let _ = writeln!(s, "</g>");
    // legend
    let lx = WIDTH - MARGIN - 100.0;
    let _ = writeln!(
        s,
        r##"<g font-family="sans-serif" font-size="12"><line x1="{lx:.1}" y1="48" x2="{:.1}" y2="48" stroke="#1f77b4" stroke-width="2"/><text x="{:.1}" y="52">target</text><circle cx="{:.1}" cy="66" r="3.5" fill="#d62728"/><text x="{:.1}" y="70">estimate</text></g>"##,
        lx + 24.0,
        lx + 30.0,
        lx + 12.0,
        lx + 30.0
    );
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use qspline_core::oracle::fit_classical;
    use qspline_core::TargetKind;

    #[test]
    fn document_shape() {
        let r = fit_classical::<f64>(TargetKind::Sin, 4, 1).unwrap();
        let svg = render(&r);
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<circle").count(), 4 + 1);
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert_eq!(svg, render(&r));
    }
}
