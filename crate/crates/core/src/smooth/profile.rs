//! Planar fold profiles built from straight runs and bump-function turns.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::geometry::{cross2, Vec2};

fn ramp(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        (-1.0 / x).exp()
    }
}

/// Smooth step from 0 to 1 on [0, 1] with every derivative vanishing at both
/// ends; satisfies `S(1 - x) = 1 - S(x)`.
pub fn smooth_step(x: f64) -> f64 {
    let (a, b) = (ramp(x), ramp(1.0 - x));
    if a + b == 0.0 {
        if x < 0.5 {
            0.0
        } else {
            1.0
        }
    } else {
        a / (a + b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Piece {
    Straight(f64),
    /// Heading change `delta` spread over arclength `width` by the smooth step.
    Turn {
        delta: f64,
        width: f64,
    },
}

/// Displacement of a unit-length turn through `delta` sampled with `samples`
/// equal chords, as (along start heading, to its left).
pub fn turn_displacement(delta: f64, samples: usize) -> (f64, f64) {
    let n = samples as f64;
    (0..samples).fold((0.0, 0.0), |(x, y), k| {
        let th = delta * smooth_step((k as f64 + 0.5) / n);
        (x + th.cos() / n, y + th.sin() / n)
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Profile {
    pub points: Vec<Vec2>,
    /// Arclength at each point.
    pub arclength: Vec<f64>,
    pub h1: f64,
    pub h2: f64,
    pub smoothness: f64,
    pub length: f64,
}

impl Profile {
    /// Traces pieces from `start` with heading `heading`. Each turn uses
    /// `samples` chords; straight runs are single chords.
    pub fn trace(start: Vec2, heading: f64, pieces: &[Piece], samples: usize, smoothness: f64) -> Profile {
        let mut points = vec![start];
        let mut arclength = vec![0.0];
        let mut th = heading;
        let mut push = |p: Vec2, ds: f64, points: &mut Vec<Vec2>| {
            let s = arclength.last().copied().unwrap_or(0.0) + ds;
            points.push(p);
            arclength.push(s);
        };
        for piece in pieces {
            match *piece {
                Piece::Straight(len) => {
                    if len > 1e-15 {
                        let p = points[points.len() - 1] + Vec2::new(th.cos(), th.sin()) * len;
                        push(p, len, &mut points);
                    }
                }
                Piece::Turn { delta, width } => {
                    if width > 1e-15 {
                        let n = samples as f64;
                        let step = width / n;
                        for k in 0..samples {
                            let a = th + delta * smooth_step((k as f64 + 0.5) / n);
                            let p = points[points.len() - 1] + Vec2::new(a.cos(), a.sin()) * step;
                            push(p, step, &mut points);
                        }
                    }
                    th += delta;
                }
            }
        }
        let length = *arclength.last().expect("at least the start point");
        let (h1, h2) = (start.y, points[points.len() - 1].y);
        Profile { points, arclength, h1, h2, smoothness, length }
    }

    pub fn end(&self) -> Vec2 {
        self.points[self.points.len() - 1]
    }

    pub fn start_tangent(&self) -> Vec2 {
        (self.points[1] - self.points[0]).normalize()
    }

    pub fn end_tangent(&self) -> Vec2 {
        let n = self.points.len();
        (self.points[n - 1] - self.points[n - 2]).normalize()
    }

    /// Largest heading change between consecutive chords.
    pub fn max_turn_per_chord(&self) -> f64 {
        self.points
            .windows(3)
            .map(|w| {
                let (u, v) = (w[1] - w[0], w[2] - w[1]);
                cross2(&u, &v).atan2(u.dot(&v)).abs()
            })
            .fold(0.0, f64::max)
    }

    /// No two non-adjacent chords meet.
    pub fn is_simple(&self) -> bool {
        let p = &self.points;
        let n = p.len();
        for i in 0..n.saturating_sub(1) {
            for j in (i + 2)..n.saturating_sub(1) {
                if segments_meet(&p[i], &p[i + 1], &p[j], &p[j + 1]) {
                    return false;
                }
            }
        }
        true
    }
}

fn segments_meet(a: &Vec2, b: &Vec2, c: &Vec2, d: &Vec2) -> bool {
    let o = |p: &Vec2, q: &Vec2, r: &Vec2| cross2(&(q - p), &(r - p));
    let (d1, d2, d3, d4) = (o(c, d, a), o(c, d, b), o(a, b, c), o(a, b, d));
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

/// Pieces of a half-turn from heading 0 to heading π whose end sits at
/// (`dx`, `dy`) from the start, `dy > 0`. The shorter straight run is
/// `run`; each quarter turn has arclength at most `width`.
pub fn u_pieces(dx: f64, dy: f64, run: f64, width: f64, samples: usize) -> Result<Vec<Piece>> {
    if !(dy > 0.0) || run < 0.0 {
        return Err(Error::DegenerateProfile(format!("half-turn needs a rise > 0 (got {dy})")));
    }
    let (c, s) = turn_displacement(FRAC_PI_2, samples);
    let w = width.min(dy / (c + s));
    let v = (dy - w * (c + s)).max(0.0);
    // Horizontal: a + w·c − w·s − b = dx.
    let skew = dx - w * (c - s);
    let (a, b) = if skew >= 0.0 { (run + skew, run) } else { (run, run - skew) };
    Ok(vec![
        Piece::Straight(a),
        Piece::Turn { delta: FRAC_PI_2, width: w },
        Piece::Straight(v),
        Piece::Turn { delta: FRAC_PI_2, width: w },
        Piece::Straight(b),
    ])
}

/// Pieces of a step that leaves and arrives at heading 0 with its end at
/// (`dx`, `dy`), `dy > 0`: a half-turn up to the left, a straight back, and
/// a half-turn up to the right. Each half-turn climbs `dy / 2`.
pub fn z_pieces(dx: f64, dy: f64, run: f64, width: f64, samples: usize) -> Result<Vec<Piece>> {
    if !(dy > 0.0) || run < 0.0 {
        return Err(Error::DegenerateProfile(format!("step needs a rise > 0 (got {dy})")));
    }
    let (c, s) = turn_displacement(FRAC_PI_2, samples);
    let w = width.min(0.5 * dy / (c + s));
    let v = (0.5 * dy - w * (c + s)).max(0.0);
    // Horizontal: a − m + b = dx.
    let a = run + dx.max(0.0);
    let b = run;
    let m = a + b - dx;
    Ok(vec![
        Piece::Straight(a),
        Piece::Turn { delta: FRAC_PI_2, width: w },
        Piece::Straight(v),
        Piece::Turn { delta: FRAC_PI_2, width: w },
        Piece::Straight(m),
        Piece::Turn { delta: -FRAC_PI_2, width: w },
        Piece::Straight(v),
        Piece::Turn { delta: -FRAC_PI_2, width: w },
        Piece::Straight(b),
    ])
}

/// Pieces of a single turn through `delta ∈ (0, π)` ending at (`dx`, `dy`):
/// run, turn, run. The turn width starts at `width` and halves until both
/// runs are non-negative.
pub fn bend_pieces(delta: f64, dx: f64, dy: f64, width: f64, samples: usize) -> Result<Vec<Piece>> {
    if !(delta > 1e-9 && delta < std::f64::consts::PI - 1e-9) {
        return Err(Error::DegenerateProfile(format!("bend angle {delta} outside (0, π)")));
    }
    let (c, s) = turn_displacement(delta, samples);
    let mut w = width;
    for _ in 0..60 {
        let b = (dy - w * s) / delta.sin();
        let a = dx - w * c - b * delta.cos();
        if a >= 0.0 && b >= 0.0 {
            return Ok(vec![Piece::Straight(a), Piece::Turn { delta, width: w }, Piece::Straight(b)]);
        }
        w *= 0.5;
    }
    Err(Error::DegenerateProfile(format!("no bend reaches ({dx}, {dy}) turning by {delta}")))
}

/// Half-turn profile from height `h1` (heading +x) to height `h2` (heading
/// −x) reaching `depth` beyond the start, with quarter turns of arclength at
/// most `s`.
pub fn u_profile(h1: f64, h2: f64, depth: f64, s: f64, samples: usize) -> Result<Profile> {
    if samples < 16 {
        return Err(Error::InvalidInput(format!("{samples} samples; at least 16 needed")));
    }
    let dy = (h2 - h1).abs();
    if dy == 0.0 {
        return Err(Error::DegenerateProfile("start and end heights coincide".into()));
    }
    if !(depth > 0.0) || !(s > 0.0) {
        return Err(Error::DegenerateProfile(format!("depth {depth} and width {s} must be positive")));
    }
    let (c, _) = turn_displacement(FRAC_PI_2, samples);
    let w = s.min(depth / c);
    let run = (depth - w * c).max(0.0);
    let pieces = u_pieces(0.0, dy, run, w, samples)?;
    let mut p = Profile::trace(Vec2::new(0.0, 0.0), 0.0, &pieces, samples, s);
    let sign = if h2 >= h1 { 1.0 } else { -1.0 };
    for q in &mut p.points {
        q.y = h1 + sign * q.y;
    }
    p.h1 = h1;
    p.h2 = p.end().y;
    Ok(p)
}
