//! Closed forms for the hyperbolic upper half-plane via PSL(2, R).
//!
//! A unit tangent vector (x, y, phi) corresponds to the matrix g with
//! g(i) = x + iy whose derivative at i carries the upward direction to the
//! direction phi. The geodesic flow is right multiplication by
//! diag(e^{t/2}, e^{-t/2}).

use std::f64::consts::FRAC_PI_2;

use crate::metrics::UPoint;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sl2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Sl2 {
    pub fn mul(&self, o: &Sl2) -> Sl2 {
        Sl2 {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    /// Rotation about i turning directions by -angle.
    pub fn rotation(angle: f64) -> Sl2 {
        let (s, c) = (0.5 * angle).sin_cos();
        Sl2 { a: c, b: -s, c: s, d: c }
    }

    pub fn diag(t: f64) -> Sl2 {
        Sl2 { a: (0.5 * t).exp(), b: 0.0, c: 0.0, d: (-0.5 * t).exp() }
    }

    /// Matrix of the unit tangent vector u.
    pub fn from_point(u: UPoint) -> Sl2 {
        let r = u.y.sqrt();
        let g0 = Sl2 { a: r, b: u.x / r, c: 0.0, d: 1.0 / r };
        g0.mul(&Sl2::rotation(-(u.phi - FRAC_PI_2)))
    }

    pub fn to_point(&self) -> UPoint {
        let den = self.c * self.c + self.d * self.d;
        let x = (self.a * self.c + self.b * self.d) / den;
        let y = (self.a * self.d - self.b * self.c) / den;
        let phi = FRAC_PI_2 - 2.0 * self.c.atan2(self.d);
        UPoint::from_vec(&nalgebra::Vector3::new(x, y, phi))
    }

    /// Boundary points (start, end) of the oriented geodesic through g(i)
    /// in the direction of g; infinite endpoints are `f64::INFINITY`.
    pub fn geodesic_ends(&self) -> (f64, f64) {
        let ratio = |p: f64, q: f64| if q == 0.0 { f64::INFINITY } else { p / q };
        (ratio(self.b, self.d), ratio(self.a, self.c))
    }
}

/// Geodesic flow (the X flow) for time t.
pub fn geodesic_flow(u: UPoint, t: f64) -> UPoint {
    Sl2::from_point(u).mul(&Sl2::diag(t)).to_point()
}

/// Y flow for time t: the geodesic flow conjugated by a quarter turn.
pub fn y_flow(u: UPoint, t: f64) -> UPoint {
    let r = UPoint::from_vec(&nalgebra::Vector3::new(u.x, u.y, u.phi + FRAC_PI_2));
    let e = geodesic_flow(r, t);
    UPoint::from_vec(&nalgebra::Vector3::new(e.x, e.y, e.phi - FRAC_PI_2))
}

/// Hyperbolic distance between (x1, y1) and (x2, y2).
pub fn distance(p: (f64, f64), q: (f64, f64)) -> f64 {
    let d2 = (p.0 - q.0).powi(2) + (p.1 - q.1).powi(2);
    (1.0 + d2 / (2.0 * p.1 * q.1)).acosh()
}

/// Klein-disc image of a point of the closed half-plane (infinity allowed as
/// a boundary point).
pub fn klein(x: f64, y: f64) -> (f64, f64) {
    if x.is_infinite() {
        return (1.0, 0.0);
    }
    // Cayley map w = (z - i)/(z + i), then k = 2w/(1 + |w|^2)
    let den = x * x + (y + 1.0).powi(2);
    let wr = (x * x + y * y - 1.0) / den;
    let wi = -2.0 * x / den;
    let s = 2.0 / (1.0 + wr * wr + wi * wi);
    (s * wr, s * wi)
}

fn orient(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> f64 {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

/// Sign of the crossing of the oriented geodesic with boundary points
/// (start, end) through the segment from p to q: +1 if it crosses from the
/// right of p->q to the left, -1 for the reverse, 0 if it misses.
pub fn crossing(ends: (f64, f64), p: (f64, f64), q: (f64, f64)) -> i32 {
    let (a, b) = (klein(ends.0, 0.0), klein(ends.1, 0.0));
    let (kp, kq) = (klein(p.0, p.1), klein(q.0, q.1));
    let (o1, o2) = (orient(a, b, kp), orient(a, b, kq));
    let (o3, o4) = (orient(kp, kq, a), orient(kp, kq, b));
    if o1 * o2 < 0.0 && o3 * o4 < 0.0 {
        if o3 < 0.0 {
            1
        } else {
            -1
        }
    } else {
        0
    }
}
