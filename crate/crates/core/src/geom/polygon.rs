use alloc::vec;
use alloc::vec::Vec;

use super::{Rect, Vec2};

/// Shoelace signed area; positive for counter-clockwise rings.
pub fn signed_area(poly: &[Vec2]) -> f64 {
    let n = poly.len();
    if n < 3 {
        return 0.0;
    }
    let mut acc = 0.0;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        acc += a.cross(b);
    }
    acc * 0.5
}

pub fn polygon_area(poly: &[Vec2]) -> f64 {
    signed_area(poly).abs()
}

#[inline]
fn orient(a: Vec2, b: Vec2, c: Vec2) -> f64 {
    (b - a).cross(c - a)
}

#[inline]
fn on_segment(a: Vec2, b: Vec2, p: Vec2) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SegmentIntersection {
    None,
    /// Single point of contact; `t` and `u` are the parameters along the
    /// first and second segment.
    Point {
        at: Vec2,
        t: f64,
        u: f64,
    },
    /// Collinear segments sharing more than one point.
    Overlap,
}

/// Closed-segment intersection of `a0a1` with `b0b1`.
pub fn segments_intersect(a0: Vec2, a1: Vec2, b0: Vec2, b1: Vec2) -> SegmentIntersection {
    let d1 = orient(b0, b1, a0);
    let d2 = orient(b0, b1, a1);
    let d3 = orient(a0, a1, b0);
    let d4 = orient(a0, a1, b1);

    if d1 == 0.0 && d2 == 0.0 {
        // collinear (or degenerate)
        let r = a1 - a0;
        let rr = r.dot(r);
        if rr == 0.0 {
            if on_segment(b0, b1, a0) && orient(b0, b1, a0) == 0.0 {
                let s = b1 - b0;
                let ss = s.dot(s);
                let u = if ss > 0.0 { (a0 - b0).dot(s) / ss } else { 0.0 };
                return SegmentIntersection::Point { at: a0, t: 0.0, u };
            }
            return SegmentIntersection::None;
        }
        // Compare exact coordinates along the dominant axis; collinear
        // points are ordered the same way along it as along the line.
        let key = |p: Vec2| if r.x.abs() >= r.y.abs() { p.x } else { p.y };
        let (alo, ahi) = if key(a0) <= key(a1) { (a0, a1) } else { (a1, a0) };
        let (blo, bhi) = if key(b0) <= key(b1) { (b0, b1) } else { (b1, b0) };
        let lo = if key(blo) > key(alo) { blo } else { alo };
        let hi = if key(bhi) < key(ahi) { bhi } else { ahi };
        if key(lo) > key(hi) {
            return SegmentIntersection::None;
        }
        if key(lo) == key(hi) {
            return SegmentIntersection::Point { at: lo, t: param_on(a0, a1, lo), u: param_on(b0, b1, lo) };
        }
        return SegmentIntersection::Overlap;
    }

    let straddle_a = (d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0);
    let straddle_b = (d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0);
    if straddle_a && straddle_b {
        let t = d1 / (d1 - d2);
        let u = d3 / (d3 - d4);
        return SegmentIntersection::Point { at: a0 + (a1 - a0) * t, t, u };
    }
    // touching cases
    if d1 == 0.0 && on_segment(b0, b1, a0) {
        let u = param_on(b0, b1, a0);
        return SegmentIntersection::Point { at: a0, t: 0.0, u };
    }
    if d2 == 0.0 && on_segment(b0, b1, a1) {
        let u = param_on(b0, b1, a1);
        return SegmentIntersection::Point { at: a1, t: 1.0, u };
    }
    if d3 == 0.0 && on_segment(a0, a1, b0) {
        let t = param_on(a0, a1, b0);
        return SegmentIntersection::Point { at: b0, t, u: 0.0 };
    }
    if d4 == 0.0 && on_segment(a0, a1, b1) {
        let t = param_on(a0, a1, b1);
        return SegmentIntersection::Point { at: b1, t, u: 1.0 };
    }
    SegmentIntersection::None
}

fn param_on(a: Vec2, b: Vec2, p: Vec2) -> f64 {
    let r = b - a;
    let rr = r.dot(r);
    if rr == 0.0 {
        0.0
    } else {
        (p - a).dot(r) / rr
    }
}

pub fn point_segment_distance(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    let t = param_on(a, b, p).clamp(0.0, 1.0);
    p.distance(a.lerp(b, t))
}

/// Even-odd point-in-polygon test. Points exactly on the boundary may land
/// on either side.
pub fn point_in_polygon(p: Vec2, poly: &[Vec2]) -> bool {
    let n = poly.len();
    let mut inside = false;
    let mut j = n.wrapping_sub(1);
    for i in 0..n {
        let a = poly[i];
        let b = poly[j];
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if p.x < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

/// True when the closed ring has at least three vertices, no zero-length
/// edges and no two edges touching other than consecutive edges at their
/// shared vertex.
pub fn is_simple(poly: &[Vec2]) -> bool {
    let n = poly.len();
    if n < 3 {
        return false;
    }
    for i in 0..n {
        if poly[i] == poly[(i + 1) % n] {
            return false;
        }
    }
    for i in 0..n {
        let a0 = poly[i];
        let a1 = poly[(i + 1) % n];
        for j in (i + 1)..n {
            let b0 = poly[j];
            let b1 = poly[(j + 1) % n];
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            match segments_intersect(a0, a1, b0, b1) {
                SegmentIntersection::None => {}
                SegmentIntersection::Overlap => return false,
                SegmentIntersection::Point { at, .. } => {
                    if !adjacent {
                        return false;
                    }
                    // consecutive edges may only meet at the shared vertex
                    let shared = if j == i + 1 { a1 } else { a0 };
                    if at != shared {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Convex hull (Andrew's monotone chain), counter-clockwise, collinear points
/// dropped.
pub fn convex_hull(points: &[Vec2]) -> Vec<Vec2> {
    let mut pts: Vec<Vec2> = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Vec2> = Vec::with_capacity(pts.len() * 2);
    for &p in &pts {
        while hull.len() >= 2 && orient(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len && orient(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

/// Minimum-area enclosing rectangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrientedRect {
    pub center: Vec2,
    /// Unit direction of the longer side.
    pub major: Vec2,
    /// `major` rotated counter-clockwise by 90°.
    pub minor: Vec2,
    pub half_major: f64,
    pub half_minor: f64,
}

impl OrientedRect {
    pub fn area(&self) -> f64 {
        4.0 * self.half_major * self.half_minor
    }

    /// Corner with the smallest coordinates in the (major, minor) frame.
    pub fn origin(&self) -> Vec2 {
        self.center - self.major * self.half_major - self.minor * self.half_minor
    }

    pub fn corners(&self) -> [Vec2; 4] {
        let o = self.origin();
        let a = self.major * (2.0 * self.half_major);
        let b = self.minor * (2.0 * self.half_minor);
        [o, o + a, o + a + b, o + b]
    }
}

/// Minimum-area oriented bounding rectangle via hull-edge enumeration.
pub fn min_area_rect(points: &[Vec2]) -> Option<OrientedRect> {
    let hull = convex_hull(points);
    if hull.len() < 2 {
        return None;
    }
    let mut best: Option<(f64, OrientedRect)> = None;
    let m = hull.len();
    for i in 0..m {
        let e = hull[(i + 1) % m] - hull[i];
        if e.length() == 0.0 {
            continue;
        }
        let u = e.normalized();
        let v = u.perp();
        let (mut lu, mut hu, mut lv, mut hv) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for &p in &hull {
            let a = p.dot(u);
            let b = p.dot(v);
            lu = lu.min(a);
            hu = hu.max(a);
            lv = lv.min(b);
            hv = hv.max(b);
        }
        let area = (hu - lu) * (hv - lv);
        if best.as_ref().is_none_or(|(a, _)| area < *a - 1e-9 * a.abs().max(1.0)) {
            let center = u * ((lu + hu) * 0.5) + v * ((lv + hv) * 0.5);
            let (hmaj, hmin) = ((hu - lu) * 0.5, (hv - lv) * 0.5);
            let rect = if hmaj >= hmin {
                OrientedRect { center, major: u, minor: v, half_major: hmaj, half_minor: hmin }
            } else {
                OrientedRect { center, major: v, minor: -u, half_major: hmin, half_minor: hmaj }
            };
            best = Some((area, rect));
        }
    }
    best.map(|(_, r)| r)
}

/// Splits a simple polygon by the infinite line through `origin` along
/// `dir`. Returns `(left, right)` pieces, where left is the side with
/// `dir × (p − origin) ≥ 0`. Pieces keep the input's orientation; slivers
/// of area below `1e-9` are dropped.
pub fn split_polygon(poly: &[Vec2], origin: Vec2, dir: Vec2) -> (Vec<Vec<Vec2>>, Vec<Vec<Vec2>>) {
    #[derive(Clone, Copy)]
    struct Node {
        pos: Vec2,
        crossing: bool,
        left: bool,
    }

    let n = poly.len();
    if n < 3 {
        return (Vec::new(), Vec::new());
    }
    let side: Vec<f64> = poly.iter().map(|&p| dir.cross(p - origin)).collect();
    let is_left = |s: f64| s >= 0.0;

    let mut nodes: Vec<Node> = Vec::with_capacity(n + 4);
    let mut crossings: Vec<(f64, usize)> = Vec::new();
    for i in 0..n {
        let j = (i + 1) % n;
        nodes.push(Node { pos: poly[i], crossing: false, left: is_left(side[i]) });
        if is_left(side[i]) != is_left(side[j]) {
            let t = side[i] / (side[i] - side[j]);
            let pos = poly[i].lerp(poly[j], t);
            crossings.push((dir.dot(pos - origin), nodes.len()));
            nodes.push(Node { pos, crossing: true, left: false });
        }
    }

    if crossings.is_empty() {
        let whole = vec![poly.to_vec()];
        return if is_left(side[0]) { (whole, Vec::new()) } else { (Vec::new(), whole) };
    }

    crossings.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let m = nodes.len();
    let mut partner = vec![usize::MAX; m];
    for pair in crossings.chunks(2) {
        if let [a, b] = pair {
            partner[a.1] = b.1;
            partner[b.1] = a.1;
        }
    }

    let mut visited = vec![false; m];
    let mut left = Vec::new();
    let mut right = Vec::new();
    for start in 0..m {
        if nodes[start].crossing || visited[start] {
            continue;
        }
        let mut piece: Vec<Vec2> = Vec::new();
        let mut k = start;
        let mut guard = 0;
        loop {
            guard += 1;
            if guard > 4 * m + 4 {
                break;
            }
            push_distinct(&mut piece, nodes[k].pos);
            if nodes[k].crossing {
                let j = partner[k];
                if j == usize::MAX {
                    k = (k + 1) % m;
                } else {
                    push_distinct(&mut piece, nodes[j].pos);
                    k = (j + 1) % m;
                }
            } else {
                visited[k] = true;
                k = (k + 1) % m;
            }
            if k == start {
                break;
            }
        }
        while piece.len() > 1 && piece.first() == piece.last() {
            piece.pop();
        }
        if piece.len() >= 3 && signed_area(&piece).abs() > 1e-9 {
            if nodes[start].left {
                left.push(piece);
            } else {
                right.push(piece);
            }
        }
    }
    (left, right)
}

fn push_distinct(v: &mut Vec<Vec2>, p: Vec2) {
    if v.last() != Some(&p) {
        v.push(p);
    }
}

/// Sutherland–Hodgman clip against an axis-aligned rectangle. Exact for
/// convex input.
pub fn clip_to_rect(poly: &[Vec2], rect: &Rect) -> Vec<Vec2> {
    let mut out: Vec<Vec2> = poly.to_vec();
    // (normal axis, bound, keep-greater)
    let planes = [(0usize, rect.min.x, true), (0, rect.max.x, false), (1, rect.min.y, true), (1, rect.max.y, false)];
    for (axis, bound, greater) in planes {
        if out.is_empty() {
            break;
        }
        let coord = |p: Vec2| if axis == 0 { p.x } else { p.y };
        let inside = |p: Vec2| if greater { coord(p) >= bound } else { coord(p) <= bound };
        let input = core::mem::take(&mut out);
        let n = input.len();
        for i in 0..n {
            let cur = input[i];
            let prev = input[(i + n - 1) % n];
            let (ci, pi) = (inside(cur), inside(prev));
            if ci != pi {
                let t = (bound - coord(prev)) / (coord(cur) - coord(prev));
                let mut x = prev.lerp(cur, t);
                if axis == 0 {
                    x.x = bound;
                } else {
                    x.y = bound;
                }
                push_distinct(&mut out, x);
            }
            if ci {
                push_distinct(&mut out, cur);
            }
        }
        while out.len() > 1 && out.first() == out.last() {
            out.pop();
        }
    }
    if out.len() < 3 {
        out.clear();
    }
    out
}

/// Mitered inward offset of a counter-clockwise ring, with a distinct
/// offset per edge (edge `i` runs from vertex `i` to `i + 1`).
///
/// Reflex corners whose miter would reach further than `miter_limit` times
/// the larger adjacent offset are beveled with two points, one on each
/// offset line; exact reversals (dead-end spurs in a face walk) get a square
/// cap. Returns `None` when the offset collapses: an offset edge reverses
/// direction, the result is not simple, or its area vanishes.
pub fn inset_polygon(poly: &[Vec2], offsets: &[f64], miter_limit: f64) -> Option<Vec<Vec2>> {
    let n = poly.len();
    if n < 3 || offsets.len() != n {
        return None;
    }
    let dirs: Vec<Vec2> = (0..n).map(|i| (poly[(i + 1) % n] - poly[i]).normalized()).collect();
    if dirs.contains(&Vec2::ZERO) {
        return None;
    }

    // first/last output index produced for each vertex
    let mut spans: Vec<(usize, usize)> = Vec::with_capacity(n);
    let mut out: Vec<Vec2> = Vec::with_capacity(n + 4);
    for j in 0..n {
        let i = (j + n - 1) % n;
        let (dp, dn) = (dirs[i], dirs[j]);
        let (op, on) = (offsets[i], offsets[j]);
        let a = poly[j] + dp.perp() * op;
        let b = poly[j] + dn.perp() * on;
        let cross = dp.cross(dn);
        let dot = dp.dot(dn);
        let e = op.max(on);
        let first = out.len();
        if cross.abs() < 1e-12 {
            if dot > 0.0 {
                out.push(a);
                if (op - on).abs() > 1e-12 {
                    out.push(b);
                }
            } else {
                out.push(a + dp * e);
                out.push(b - dn * e);
            }
        } else {
            let t = (b - a).cross(dn) / cross;
            let m = a + dp * t;
            if cross < 0.0 && m.distance(poly[j]) > miter_limit * e.max(1e-12) {
                out.push(a + dp * e);
                out.push(b - dn * e);
            } else {
                out.push(m);
            }
        }
        spans.push((first, out.len() - 1));
    }

    // every original edge must keep its direction
    for i in 0..n {
        let start = out[spans[i].1];
        let end = out[spans[(i + 1) % n].0];
        if (end - start).dot(dirs[i]) <= 1e-9 {
            return None;
        }
    }
    let mut ring: Vec<Vec2> = Vec::with_capacity(out.len());
    for p in out {
        push_distinct(&mut ring, p);
    }
    while ring.len() > 1 && ring.first() == ring.last() {
        ring.pop();
    }
    if ring.len() < 3 || signed_area(&ring) <= 1e-9 || !is_simple(&ring) {
        return None;
    }
    Some(ring)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(s: f64) -> Vec<Vec2> {
        vec![Vec2::new(0.0, 0.0), Vec2::new(s, 0.0), Vec2::new(s, s), Vec2::new(0.0, s)]
    }

    #[test]
    fn area_of_square() {
        assert_eq!(signed_area(&square(10.0)), 100.0);
        let mut cw = square(10.0);
        cw.reverse();
        assert_eq!(signed_area(&cw), -100.0);
    }

    #[test]
    fn simple_detects_bowtie() {
        let bowtie = vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 1.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)];
        assert!(!is_simple(&bowtie));
        assert!(is_simple(&square(1.0)));
    }

    #[test]
    fn crossing_segments() {
        let r = segments_intersect(Vec2::new(0.0, 0.0), Vec2::new(2.0, 2.0), Vec2::new(0.0, 2.0), Vec2::new(2.0, 0.0));
        match r {
            SegmentIntersection::Point { at, t, u } => {
                assert_eq!(at, Vec2::new(1.0, 1.0));
                assert_eq!((t, u), (0.5, 0.5));
            }
            other => panic!("{other:?}"),
        }
        let overlap =
            segments_intersect(Vec2::new(0.0, 0.0), Vec2::new(2.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(3.0, 0.0));
        assert_eq!(overlap, SegmentIntersection::Overlap);
    }

    #[test]
    fn collinear_chain_touches_at_shared_end() {
        let (a, b, c) =
            (Vec2::new(0.0, 78.30393436857072), Vec2::new(0.0, 208.0276428389192), Vec2::new(0.0, 279.8101134715724));
        for (p, q) in [((a, b), (b, c)), ((b, a), (c, b)), ((b, c), (a, b))] {
            match segments_intersect(p.0, p.1, q.0, q.1) {
                SegmentIntersection::Point { at, .. } => assert_eq!(at, b),
                other => panic!("{other:?}"),
            }
        }
        let far = segments_intersect(a, Vec2::new(0.0, 100.0), b, c);
        assert_eq!(far, SegmentIntersection::None);
    }

    #[test]
    fn split_square_in_half() {
        let (l, r) = split_polygon(&square(10.0), Vec2::new(5.0, 0.0), Vec2::new(0.0, 1.0));
        assert_eq!(l.len(), 1);
        assert_eq!(r.len(), 1);
        assert_eq!(signed_area(&l[0]), 50.0);
        assert_eq!(signed_area(&r[0]), 50.0);
        assert!(l[0].iter().all(|p| p.x <= 5.0));
    }

    #[test]
    fn split_u_shape_gives_three_pieces() {
        // U opening to the north, cut horizontally through both arms
        let u = vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(30.0, 0.0),
            Vec2::new(30.0, 30.0),
            Vec2::new(20.0, 30.0),
            Vec2::new(20.0, 10.0),
            Vec2::new(10.0, 10.0),
            Vec2::new(10.0, 30.0),
            Vec2::new(0.0, 30.0),
        ];
        let total = signed_area(&u);
        let (above, below) = split_polygon(&u, Vec2::new(0.0, 20.0), Vec2::new(1.0, 0.0));
        assert_eq!(above.len(), 2);
        assert_eq!(below.len(), 1);
        let sum: f64 = above.iter().chain(below.iter()).map(|p| signed_area(p)).sum();
        assert!((sum - total).abs() < 1e-9);
        for p in above.iter().chain(below.iter()) {
            assert!(is_simple(p));
        }
    }

    #[test]
    fn inset_square_uniform() {
        let r = inset_polygon(&square(100.0), &[5.0; 4], 4.0).unwrap();
        assert!((signed_area(&r) - 90.0 * 90.0).abs() < 1e-9);
    }

    #[test]
    fn inset_collapses_small_square() {
        assert!(inset_polygon(&square(10.0), &[6.0; 4], 4.0).is_none());
    }

    #[test]
    fn inset_zero_is_identity() {
        let r = inset_polygon(&square(100.0), &[0.0; 4], 4.0).unwrap();
        assert_eq!(r, square(100.0));
    }

    #[test]
    fn inset_walk_with_dead_end_spur() {
        // square face with a spur from the middle of the south edge inward
        let walk = vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(50.0, 0.0),
            Vec2::new(50.0, 30.0),
            Vec2::new(50.0, 0.0),
            Vec2::new(100.0, 0.0),
            Vec2::new(100.0, 100.0),
            Vec2::new(0.0, 100.0),
        ];
        let r = inset_polygon(&walk, &[3.0; 7], 4.0).unwrap();
        assert!(is_simple(&r));
        // 94×94 minus the spur corridor (6 m wide, 30 m long plus a 3 m cap,
        // of which the first 3 m overlap the south corridor)
        let expect = 94.0 * 94.0 - 6.0 * 30.0;
        assert!((signed_area(&r) - expect).abs() < 1e-6, "{}", signed_area(&r));
    }

    #[test]
    fn min_rect_of_rotated_rectangle() {
        let c = core::f64::consts::FRAC_1_SQRT_2;
        let u = Vec2::new(c, c);
        let v = u.perp();
        let pts = [Vec2::ZERO, u * 20.0, u * 20.0 + v * 10.0, v * 10.0];
        let r = min_area_rect(&pts).unwrap();
        assert!((r.area() - 200.0).abs() < 1e-9);
        assert!((r.half_major - 10.0).abs() < 1e-9);
        assert!(r.major.dot(u).abs() > 0.999_999);
    }

    #[test]
    fn clip_rect() {
        let poly = square(10.0);
        let r = clip_to_rect(&poly, &Rect::new(Vec2::new(5.0, -1.0), Vec2::new(20.0, 20.0)));
        assert_eq!(polygon_area(&r), 50.0);
    }
}
