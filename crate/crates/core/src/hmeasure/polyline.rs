//! Polyline approximations of level sets and nearest-segment queries.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;
use num_traits::Float;

use crate::levelset::LevelSetSample;
use crate::maps::ConformalMap;

/// Consecutive samples farther apart than this are taken to lie on
/// different components of the level set.
pub const LINK_MAX: f64 = 0.2;
/// Open ends closer than this to the unit circle are extended radially onto it.
pub const CLOSE_TO_CIRCLE: f64 = 0.25;

const LEAF_SIZE: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub a: Complex64,
    pub b: Complex64,
}

impl Segment {
    pub fn distance(&self, p: Complex64) -> f64 {
        let ab = self.b - self.a;
        let len2 = ab.norm_sqr();
        let t = if len2 > 0.0 {
            (((p - self.a) * ab.conj()).re / len2).clamp(0.0, 1.0)
        } else {
            0.0
        };
        (p - (self.a + ab * t)).norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Aabb {
    lo: Complex64,
    hi: Complex64,
}

impl Aabb {
    fn of(seg: &Segment) -> Self {
        Aabb {
            lo: Complex64::new(seg.a.re.min(seg.b.re), seg.a.im.min(seg.b.im)),
            hi: Complex64::new(seg.a.re.max(seg.b.re), seg.a.im.max(seg.b.im)),
        }
    }

    fn union(self, o: Aabb) -> Aabb {
        Aabb {
            lo: Complex64::new(self.lo.re.min(o.lo.re), self.lo.im.min(o.lo.im)),
            hi: Complex64::new(self.hi.re.max(o.hi.re), self.hi.im.max(o.hi.im)),
        }
    }

    fn distance(&self, p: Complex64) -> f64 {
        let dx = (self.lo.re - p.re).max(0.0).max(p.re - self.hi.re);
        let dy = (self.lo.im - p.im).max(0.0).max(p.im - self.hi.im);
        dx.hypot(dy)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Node {
    Leaf { bbox: Aabb, start: usize, end: usize },
    Inner { bbox: Aabb, left: usize, right: usize },
}

impl Node {
    fn bbox(&self) -> &Aabb {
        match self {
            Node::Leaf { bbox, .. } | Node::Inner { bbox, .. } => bbox,
        }
    }
}

/// A set of segments with a bounding-volume hierarchy for distance queries.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    segments: Vec<Segment>,
    nodes: Vec<Node>,
}

impl Polyline {
    pub fn from_segments(mut segments: Vec<Segment>) -> Self {
        let mut nodes = Vec::new();
        if !segments.is_empty() {
            let n = segments.len();
            build(&mut segments, 0, n, &mut nodes);
        }
        Polyline { segments, nodes }
    }

    /// Closed or open chains of vertices.
    pub fn from_chains(chains: &[(Vec<Complex64>, bool)]) -> Self {
        let mut segs = Vec::new();
        for (pts, closed) in chains {
            for w in pts.windows(2) {
                segs.push(Segment { a: w[0], b: w[1] });
            }
            if *closed && pts.len() > 2 {
                segs.push(Segment { a: pts[pts.len() - 1], b: pts[0] });
            }
        }
        Self::from_segments(segs)
    }

    /// Regular `n`-gon inscribed in the circle `|z - center| = radius`.
    pub fn circle(center: Complex64, radius: f64, n: usize) -> Self {
        let pts = (0..n).map(|k| center + Complex64::from_polar(radius, TAU * k as f64 / n as f64)).collect();
        Self::from_chains(&[(pts, true)])
    }

    /// Connect ray samples of `F_α` in the order of `arg ψ(z)`, which runs
    /// monotonically along every component of the level set.
    pub fn from_level_sample(map: &ConformalMap, sample: &LevelSetSample) -> Self {
        let mut pts: Vec<(f64, Complex64)> = sample
            .points
            .iter()
            .map(|p| (map.eval_polar(p.gap(), p.theta).arg(), p.point()))
            .collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let n = pts.len();
        let mut segs = Vec::with_capacity(n + 2);
        let mut linked_in = alloc::vec![false; n];
        let mut linked_out = alloc::vec![false; n];
        for i in 0..n {
            let j = (i + 1) % n;
            if n < 2 || (j == 0 && n == 2) {
                continue;
            }
            let (a, b) = (pts[i].1, pts[j].1);
            if (a - b).norm() <= LINK_MAX {
                segs.push(Segment { a, b });
                linked_out[i] = true;
                linked_in[j] = true;
            }
        }
        for i in 0..n {
            let p = pts[i].1;
            let r = p.norm();
            if (!linked_in[i] || !linked_out[i]) && 1.0 - r <= CLOSE_TO_CIRCLE && r > 0.0 {
                segs.push(Segment { a: p, b: p / r });
            }
        }
        Self::from_segments(segs)
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Distance from `p` to the polyline, or any value `>= cap` when the
    /// polyline is at least `cap` away.
    pub fn distance_capped(&self, p: Complex64, cap: f64) -> f64 {
        let mut best = cap;
        if self.nodes.is_empty() {
            return best;
        }
        let mut stack: [usize; 64] = [0; 64];
        let mut top = 1;
        while top > 0 {
            top -= 1;
            let node = &self.nodes[stack[top]];
            if node.bbox().distance(p) >= best {
                continue;
            }
            match *node {
                Node::Leaf { start, end, .. } => {
                    for s in &self.segments[start..end] {
                        best = best.min(s.distance(p));
                    }
                }
                Node::Inner { left, right, .. } => {
                    // visit the nearer child first
                    let (near, far) = if self.nodes[left].bbox().distance(p) <= self.nodes[right].bbox().distance(p) {
                        (left, right)
                    } else {
                        (right, left)
                    };
                    stack[top] = far;
                    stack[top + 1] = near;
                    top += 2;
                }
            }
        }
        best
    }

    pub fn distance(&self, p: Complex64) -> f64 {
        self.distance_capped(p, f64::INFINITY)
    }
}

fn build(segs: &mut [Segment], start: usize, end: usize, nodes: &mut Vec<Node>) -> usize {
    let bbox = segs[start..end].iter().map(Aabb::of).reduce(Aabb::union).expect("non-empty");
    let id = nodes.len();
    if end - start <= LEAF_SIZE {
        nodes.push(Node::Leaf { bbox, start, end });
        return id;
    }
    nodes.push(Node::Leaf { bbox, start, end });
    let wide = bbox.hi.re - bbox.lo.re >= bbox.hi.im - bbox.lo.im;
    let key = |s: &Segment| if wide { s.a.re + s.b.re } else { s.a.im + s.b.im };
    segs[start..end].sort_by(|x, y| key(x).total_cmp(&key(y)));
    let mid = start + (end - start) / 2;
    let left = build(segs, start, mid, nodes);
    let right = build(segs, mid, end, nodes);
    nodes[id] = Node::Inner { bbox, left, right };
    id
}
