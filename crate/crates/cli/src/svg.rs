//! Static SVG 1.1 plots of curves in the upper half-plane.

use std::fmt::Write;

const WIDTH: f64 = 640.0;

/// Window [x0, x1] x [0, y_max] drawn at a uniform scale, so geodesic
/// semicircles render as circles.
pub struct HalfPlanePlot {
    x0: f64,
    x1: f64,
    y_max: f64,
    body: String,
}

impl HalfPlanePlot {
    pub fn new(x0: f64, x1: f64, y_max: f64) -> Self {
        HalfPlanePlot { x0, x1, y_max, body: String::new() }
    }

    /// A window containing `points` with a margin, never below the boundary.
    pub fn fitting(points: &[(f64, f64)]) -> Self {
        let (mut lo, mut hi, mut top) = (f64::INFINITY, f64::NEG_INFINITY, 0.0f64);
        for &(x, y) in points.iter().filter(|p| p.0.is_finite() && p.1.is_finite()) {
            lo = lo.min(x);
            hi = hi.max(x);
            top = top.max(y);
        }
        if !lo.is_finite() {
            return HalfPlanePlot::new(-2.0, 2.0, 2.0);
        }
        let span = (hi - lo).max(top).max(1.0);
        let mid = 0.5 * (lo + hi);
        HalfPlanePlot::new(mid - 0.75 * span, mid + 0.75 * span, 1.25 * top.max(0.5 * span))
    }

    fn scale(&self) -> f64 {
        WIDTH / (self.x1 - self.x0)
    }

    fn height(&self) -> f64 {
        self.y_max * self.scale()
    }

    fn px(&self, x: f64, y: f64) -> (f64, f64) {
        ((x - self.x0) * self.scale(), self.height() - y * self.scale())
    }

    /// Geodesic with boundary points `ends`: a semicircle, or a vertical line
    /// when one end is at infinity.
    pub fn geodesic(&mut self, ends: (f64, f64), class: &str) {
        let (a, b) = ends;
        let d = match (a.is_finite(), b.is_finite()) {
            (true, true) => {
                let (l, r) = (a.min(b), a.max(b));
                let (lx, ly) = self.px(l, 0.0);
                let (rx, _) = self.px(r, 0.0);
                let rad = 0.5 * (rx - lx);
                format!("M {lx:.3} {ly:.3} A {rad:.3} {rad:.3} 0 0 1 {rx:.3} {ly:.3}")
            }
            (true, false) | (false, true) => {
                let x = if a.is_finite() { a } else { b };
                let (bx, by) = self.px(x, 0.0);
                format!("M {bx:.3} {by:.3} L {bx:.3} 0.000")
            }
            (false, false) => return,
        };
        let _ = writeln!(self.body, "<path class=\"{class}\" d=\"{d}\"/>");
    }

    /// Polyline through the given half-plane points.
    pub fn curve(&mut self, points: &[(f64, f64)], class: &str) {
        if points.len() < 2 {
            return;
        }
        let mut pts = String::new();
        for &(x, y) in points {
            let (u, v) = self.px(x, y);
            let _ = write!(pts, "{}{u:.3},{v:.3}", if pts.is_empty() { "" } else { " " });
        }
        let _ = writeln!(self.body, "<polyline class=\"{class}\" points=\"{pts}\"/>");
    }

    pub fn marker(&mut self, x: f64, y: f64) {
        let (u, v) = self.px(x, y);
        let _ = writeln!(self.body, "<circle class=\"mark\" cx=\"{u:.3}\" cy=\"{v:.3}\" r=\"3\"/>");
    }

    pub fn render(&self) -> String {
        let h = self.height();
        let mut s = String::new();
        let _ = writeln!(s, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>");
        let _ = writeln!(
            s,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{WIDTH:.0}\" height=\"{h:.0}\" viewBox=\"0 0 {WIDTH:.3} {h:.3}\">"
        );
        let _ = writeln!(
            s,
            "<style>path,polyline{{fill:none}} .geodesic{{stroke:#9aa5b1;stroke-width:1}} \
             .ycurve{{stroke:#d08c60;stroke-width:1;stroke-dasharray:4 3}} \
             .orbit{{stroke:#1f4e79;stroke-width:2}} .mark{{fill:#1f4e79}} .axis{{stroke:#000;stroke-width:1}}</style>"
        );
        let _ = writeln!(s, "<line class=\"axis\" x1=\"0\" y1=\"{h:.3}\" x2=\"{WIDTH:.3}\" y2=\"{h:.3}\"/>");
        s.push_str(&self.body);
        s.push_str("</svg>\n");
        s
    }
}
