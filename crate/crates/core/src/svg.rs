//! Minimal SVG output: points and polylines in a fixed square viewport.

use std::fmt::Write;

const SIZE: f64 = 480.0;
const MARGIN: f64 = 24.0;

pub struct Plot {
    x_range: (f64, f64),
    y_range: (f64, f64),
    body: String,
}

impl Plot {
    /// Data coordinates map onto the viewport; y grows upward.
    pub fn new(x_range: (f64, f64), y_range: (f64, f64)) -> Self {
        assert!(x_range.1 > x_range.0 && y_range.1 > y_range.0, "empty plot range");
        Self { x_range, y_range, body: String::new() }
    }

    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        let span = SIZE - 2.0 * MARGIN;
        let px = MARGIN + span * (x - self.x_range.0) / (self.x_range.1 - self.x_range.0);
        let py = SIZE - MARGIN - span * (y - self.y_range.0) / (self.y_range.1 - self.y_range.0);
        (px, py)
    }

    pub fn points(&mut self, pts: &[(f64, f64)], radius: f64, color: &str) {
        for &(x, y) in pts {
            let (px, py) = self.map(x, y);
            let _ = writeln!(self.body, r#"<circle cx="{px:.3}" cy="{py:.3}" r="{radius}" fill="{color}"/>"#);
        }
    }

    pub fn polyline(&mut self, pts: &[(f64, f64)], width: f64, color: &str) {
        if pts.len() < 2 {
            return;
        }
        let coords: Vec<String> = pts
            .iter()
            .map(|&(x, y)| {
                let (px, py) = self.map(x, y);
                format!("{px:.3},{py:.3}")
            })
            .collect();
        let _ = writeln!(
            self.body,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="{width}"/>"#,
            coords.join(" ")
        );
    }

    pub fn render(&self) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">\n\
             <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{}</svg>\n",
            self.body
        )
    }
}

/// x-z slice of the unit Bloch ball: circle outline, cone points, boundary curve.
pub fn bloch_xz_svg(points: &[[f64; 3]], boundary: &[[f64; 3]], marks: &[[f64; 3]]) -> String {
    let mut plot = Plot::new((-1.05, 1.05), (-1.05, 1.05));
    let circle: Vec<(f64, f64)> = (0..=128)
        .map(|k| {
            let t = std::f64::consts::TAU * k as f64 / 128.0;
            (t.cos(), t.sin())
        })
        .collect();
    plot.polyline(&circle, 1.0, "#888888");
    let xz = |v: &[[f64; 3]]| v.iter().map(|p| (p[0], p[2])).collect::<Vec<_>>();
    plot.points(&xz(points), 1.2, "#3366cc");
    plot.polyline(&xz(boundary), 2.0, "#cc3333");
    plot.points(&xz(marks), 4.0, "#000000");
    plot.render()
}
