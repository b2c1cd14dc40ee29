//! Finite-difference Dirichlet solve for the harmonic measure of the
//! half-plane level set `F_3`, compared with the walk-on-spheres estimate.
//!
//! `F_3` is the arc of `|z - 5/4| = 3/4` inside the unit disk. The harmonic
//! measure at the origin is the solution of Laplace's equation on
//! `{|z| < 1, |z - 5/4| > 3/4}` with boundary value 1 on the arc and 0 on the
//! unit circle, evaluated at the origin.

use hardy_core::hmeasure::{harmonic_measure, WoSConfig};
use hardy_core::ConformalMap;

const CENTER: f64 = 1.25;
const RADIUS: f64 = 0.75;

fn inside(x: f64, y: f64) -> bool {
    x * x + y * y < 1.0 && (x - CENTER).powi(2) + y * y > RADIUS * RADIUS
}

/// First parameter `t ∈ (0, 1]` where `p + t d` meets the circle `|z - c| = r`.
fn hit(px: f64, py: f64, dx: f64, dy: f64, cx: f64, r: f64) -> Option<f64> {
    let (ox, oy) = (px - cx, py);
    let a = dx * dx + dy * dy;
    let b = 2.0 * (ox * dx + oy * dy);
    let c = ox * ox + oy * oy - r * r;
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    [(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)]
        .into_iter()
        .filter(|&t| t > 0.0 && t <= 1.0 + 1e-12)
        .fold(None, |acc: Option<f64>, t| Some(acc.map_or(t, |a| a.min(t))))
}

/// Boundary crossing on the way from an interior node towards a neighbour
/// outside the domain: fraction of `h` and boundary value.
fn crossing(px: f64, py: f64, dx: f64, dy: f64) -> (f64, f64) {
    let circle = hit(px, py, dx, dy, 0.0, 1.0).map(|t| (t, 0.0));
    let arc = hit(px, py, dx, dy, CENTER, RADIUS).map(|t| (t, 1.0));
    match (circle, arc) {
        (Some(a), Some(b)) => if a.0 <= b.0 { a } else { b },
        (Some(a), None) => a,
        (None, Some(b)) => b,
        (None, None) => panic!("neighbour outside without crossing at ({px}, {py})"),
    }
    .clamp_frac()
}

trait ClampFrac {
    fn clamp_frac(self) -> Self;
}

impl ClampFrac for (f64, f64) {
    fn clamp_frac(self) -> Self {
        (self.0.clamp(1e-9, 1.0), self.1)
    }
}

#[derive(Clone, Copy)]
struct Irregular {
    /// weights of E, W, N, S neighbours; zero for boundary sides
    w: [f64; 4],
    /// contribution of the boundary values, already normalised
    rhs: f64,
}

struct Grid {
    n: usize,
    h: f64,
    /// 0 exterior, 1 regular interior, 2 irregular interior
    kind: Vec<u8>,
    irregular: Vec<Irregular>,
    slot: Vec<u32>,
    u: Vec<f64>,
}

impl Grid {
    fn new(n: usize) -> Self {
        let h = 2.0 / n as f64;
        let side = n + 1;
        let coord = |i: usize| -1.0 + i as f64 * h;
        let mut kind = vec![0u8; side * side];
        let mut u = vec![0.0; side * side];
        for j in 0..side {
            for i in 0..side {
                let (x, y) = (coord(i), coord(j));
                if inside(x, y) {
                    kind[j * side + i] = 1;
                } else if x * x + y * y < 1.0 {
                    u[j * side + i] = 1.0;
                }
            }
        }
        let mut irregular = Vec::new();
        let mut slot = vec![u32::MAX; side * side];
        let dirs = [(1i64, 0i64), (-1, 0), (0, 1), (0, -1)];
        for j in 1..n {
            for i in 1..n {
                let k = j * side + i;
                if kind[k] == 0 {
                    continue;
                }
                let outside = dirs.map(|(di, dj)| kind[(j as i64 + dj) as usize * side + (i as i64 + di) as usize] == 0);
                if !outside.iter().any(|&o| o) {
                    continue;
                }
                let (x, y) = (coord(i), coord(j));
                let mut frac = [1.0; 4];
                let mut val = [0.0; 4];
                for d in 0..4 {
                    if outside[d] {
                        let (t, g) = crossing(x, y, dirs[d].0 as f64 * h, dirs[d].1 as f64 * h);
                        frac[d] = t;
                        val[d] = g;
                    }
                }
                // Shortley-Weller coefficients along each axis
                let (a, b, c, d) = (frac[0], frac[1], frac[2], frac[3]);
                let coef = [1.0 / (a * (a + b)), 1.0 / (b * (a + b)), 1.0 / (c * (c + d)), 1.0 / (d * (c + d))];
                let total: f64 = coef.iter().sum();
                let mut w = [0.0; 4];
                let mut rhs = 0.0;
                for d in 0..4 {
                    if outside[d] {
                        rhs += coef[d] * val[d] / total;
                    } else {
                        w[d] = coef[d] / total;
                    }
                }
                kind[k] = 2;
                slot[k] = irregular.len() as u32;
                irregular.push(Irregular { w, rhs });
            }
        }
        Grid { n, h, kind, irregular, slot, u }
    }

    fn side(&self) -> usize {
        self.n + 1
    }

    /// One red-black SOR sweep; returns the largest update.
    fn sweep(&mut self, omega: f64) -> f64 {
        let side = self.side();
        let mut change: f64 = 0.0;
        for colour in 0..2 {
            for j in 1..self.n {
                let start = 1 + (j + 1 + colour) % 2;
                let mut i = start;
                while i < self.n {
                    let k = j * side + i;
                    let target = match self.kind[k] {
                        1 => 0.25 * (self.u[k + 1] + self.u[k - 1] + self.u[k + side] + self.u[k - side]),
                        2 => {
                            let s = &self.irregular[self.slot[k] as usize];
                            s.rhs + s.w[0] * self.u[k + 1] + s.w[1] * self.u[k - 1] + s.w[2] * self.u[k + side] + s.w[3] * self.u[k - side]
                        }
                        _ => {
                            i += 2;
                            continue;
                        }
                    };
                    let delta = omega * (target - self.u[k]);
                    self.u[k] += delta;
                    change = change.max(delta.abs());
                    i += 2;
                }
            }
        }
        change
    }

    fn solve(&mut self, tol: f64, max_sweeps: usize) -> usize {
        // optimal relaxation for the disk's first Dirichlet eigenvalue j_{0,1}^2
        let omega = 2.0 / (1.0 + self.h * (5.783f64 / 2.0).sqrt());
        for s in 0..max_sweeps {
            if self.sweep(omega) < tol {
                return s + 1;
            }
        }
        max_sweeps
    }

    /// Bilinear prolongation of a grid with half the resolution.
    fn prolong_from(&mut self, coarse: &Grid) {
        let (side, cs) = (self.side(), coarse.side());
        for j in 0..side {
            for i in 0..side {
                let k = j * side + i;
                if self.kind[k] == 0 {
                    continue;
                }
                let (ci, cj) = (i / 2, j / 2);
                let (fi, fj) = (i % 2, j % 2);
                let at = |a: usize, b: usize| coarse.u[(cj + b).min(coarse.n) * cs + (ci + a).min(coarse.n)];
                self.u[k] = match (fi, fj) {
                    (0, 0) => at(0, 0),
                    (1, 0) => 0.5 * (at(0, 0) + at(1, 0)),
                    (0, 1) => 0.5 * (at(0, 0) + at(0, 1)),
                    _ => 0.25 * (at(0, 0) + at(1, 0) + at(0, 1) + at(1, 1)),
                };
            }
        }
    }

    fn origin(&self) -> f64 {
        let c = self.n / 2;
        self.u[c * self.side() + c]
    }
}

/// Cascadic solve from 128² up to `finest`²; returns the origin value on
/// every level.
fn cascadic(finest: usize) -> Vec<(usize, f64)> {
    let mut out = Vec::new();
    let mut n = 128;
    let mut prev: Option<Grid> = None;
    while n <= finest {
        let mut g = Grid::new(n);
        if let Some(c) = &prev {
            g.prolong_from(c);
        }
        g.solve(1e-9, 200_000);
        out.push((n, g.origin()));
        prev = Some(g);
        n *= 2;
    }
    out
}

#[test]
fn grid_solution_converges_to_the_image_formula() {
    let levels = cascadic(2048);
    let exact = 2.0 / std::f64::consts::PI * (6.0f64 / 8.0).atan();
    let (_, fine) = *levels.last().unwrap();
    for (n, v) in &levels {
        eprintln!("fd n={n}: {v:.8} (closed form {exact:.8})");
    }
    assert!((fine - exact).abs() < 2e-4, "{fine} vs {exact}");

    let m: ConformalMap = "halfplane".parse().unwrap();
    let est = harmonic_measure(&m, 3.0, &WoSConfig::default()).unwrap();
    eprintln!("wos: {} ± {}", est.value, est.std_error);
    assert!((est.value - fine).abs() <= 3.0 * est.std_error, "wos {} vs fd {fine}", est.value);
}
