//! Seeded random generators for property tests: rationals, rects, Pouna
//! regions and shapes, axis-parallel transforms, and shapes guaranteed to
//! cross a given rect. Everything is deterministic for a fixed seed — tests
//! record the seed so failures replay exactly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geom::{Point, Rat, Rect, Region, Transform};
use crate::shape::{is_pouna, Shape};

/// The generator used throughout: seeded ChaCha8, stable across platforms.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random rational in `[lo, hi]` with denominator at most `max_den`.
pub fn sample_rat(rng: &mut impl Rng, lo: i64, hi: i64, max_den: i64) -> Rat {
    assert!(lo <= hi && max_den >= 1);
    let den = rng.random_range(1..=max_den);
    let num = rng.random_range(lo * den..=hi * den);
    Rat::new(num, den)
}

/// A random (possibly degenerate) rect with integer corners in `[0, size]`.
pub fn sample_rect(rng: &mut impl Rng, size: i64) -> Rect {
    let mut xs = [rng.random_range(0..=size), rng.random_range(0..=size)];
    let mut ys = [rng.random_range(0..=size), rng.random_range(0..=size)];
    xs.sort_unstable();
    ys.sort_unstable();
    Rect::ints(xs[0], xs[1], ys[0], ys[1])
}

/// A random rational point in `r` (boundary included).
pub fn sample_point_in(rng: &mut impl Rng, r: &Rect) -> Point {
    let fx = Rat::new(rng.random_range(0..=8), 8);
    let fy = Rat::new(rng.random_range(0..=8), 8);
    Point::new(r.left() + fx * r.width(), r.bottom() + fy * r.height())
}

/// A random Pouna region: 2 to `rects` rects with corners on the `[0, size]`
/// integer grid, resampled until the union is connected and not a single
/// rect. Degenerate rects are allowed — edges and points are legitimate
/// rectilinear material, and the frame-like shapes this crate cares about
/// are made of them.
pub fn sample_pouna_region(rng: &mut impl Rng, size: i64, rects: usize) -> Region {
    let rects = rects.max(2);
    for _ in 0..10_000 {
        let n = rng.random_range(2..=rects);
        let region = Region::new((0..n).map(|_| sample_rect(rng, size)).collect());
        if is_pouna(&region) {
            return region;
        }
    }
    panic!("no Pouna region found in 10000 draws (size {size}, rects {rects})");
}

/// A random Pouna shape on the default `[0, 8]` grid with up to 4 rects.
pub fn sample_pouna_shape(rng: &mut impl Rng, id: &str) -> Shape {
    Shape::new(id, sample_pouna_region(rng, 8, 4)).expect("sampled region is Pouna")
}

/// A random *strong* shape: a sampled Pouna shape, reflected if needed.
pub fn sample_strong_shape(rng: &mut impl Rng, id: &str) -> Shape {
    let (shape, _) = sample_pouna_shape(rng, id)
        .strongify()
        .expect("every Pouna shape or its reflection is strong");
    shape
}

fn sample_positive_rat(rng: &mut impl Rng, hi: i64, max_den: i64) -> Rat {
    loop {
        let s = sample_rat(rng, 0, hi, max_den);
        if s.is_positive() {
            return s;
        }
    }
}

/// A random positive transform: scales in `(0, 4]`, offsets in `[-8, 8]`,
/// denominators at most 4.
pub fn sample_positive_transform(rng: &mut impl Rng) -> Transform {
    let a = sample_positive_rat(rng, 4, 4);
    let b = sample_positive_rat(rng, 4, 4);
    Transform::new(a, b, sample_rat(rng, -8, 8, 4), sample_rat(rng, -8, 8, 4))
}

/// A random transform with nonzero scales of random sign.
pub fn sample_transform(rng: &mut impl Rng) -> Transform {
    let t = sample_positive_transform(rng);
    let a = if rng.random_bool(0.5) { -t.a().clone() } else { t.a().clone() };
    let b = if rng.random_bool(0.5) { -t.b().clone() } else { t.b().clone() };
    Transform::new(a, b, t.c().clone(), t.d().clone())
}

/// A shape guaranteed to cross `r` vertically: a monotone staircase of rects
/// entering below the bottom side and leaving above the top side, never
/// stepping outside `r`'s x-range. Clipping a y-monotone chain to the
/// horizontal band of `r` keeps it connected, so one component of the
/// intersection reaches both sides.
pub fn sample_vertical_crosser(rng: &mut impl Rng, r: &Rect, id: &str) -> Shape {
    let (across, along) = staircase_coords(rng, r.left(), r.width(), r.bottom(), r.height());
    Shape::new(id, staircase(&across, &along, false)).expect("staircase is a Pouna set")
}

/// A shape guaranteed to cross `r` horizontally: the transposed staircase.
pub fn sample_horizontal_crosser(rng: &mut impl Rng, r: &Rect, id: &str) -> Shape {
    let (across, along) = staircase_coords(rng, r.bottom(), r.height(), r.left(), r.width());
    Shape::new(id, staircase(&across, &along, true)).expect("staircase is a Pouna set")
}

/// Coordinates for a staircase: `along` runs monotonically from one eighth
/// before the interval `[lo, lo + len]` to one eighth past it; `across`
/// holds a random position inside the other interval per step.
fn staircase_coords(
    rng: &mut impl Rng,
    across_lo: &Rat,
    across_len: Rat,
    along_lo: &Rat,
    along_len: Rat,
) -> (Vec<Rat>, Vec<Rat>) {
    assert!(
        across_len.is_positive() && along_len.is_positive(),
        "crossers need a non-degenerate rect"
    );
    let eighth = Rat::new(1, 8);
    let steps = rng.random_range(1..=3usize);
    // Adjacent positions must differ: a step with no sideways movement can
    // collapse the whole chain into one segment, which is not a Pouna set.
    let mut across: Vec<Rat> = Vec::with_capacity(steps + 1);
    while across.len() <= steps {
        let pos = across_lo + Rat::new(rng.random_range(0..=8), 8) * &across_len;
        if across.last() != Some(&pos) {
            across.push(pos);
        }
    }
    let mut inner: Vec<i64> = (0..steps).map(|_| rng.random_range(0..=8)).collect();
    inner.sort_unstable();
    let mut along = Vec::with_capacity(steps + 2);
    along.push(along_lo - &eighth * &along_len);
    along.extend(
        inner
            .into_iter()
            .map(|k| along_lo + Rat::new(k, 8) * &along_len),
    );
    along.push(along_lo + (Rat::one() + eighth) * &along_len);
    (across, along)
}

/// Assembles the staircase from per-segment positions `across` and the
/// monotone breakpoints `along`; `transposed = false` builds a vertical
/// staircase (`across` are x-positions, `along` are y-breakpoints),
/// `transposed = true` swaps the axes into a horizontal one.
fn staircase(across: &[Rat], along: &[Rat], transposed: bool) -> Region {
    let rect = |a1: &Rat, a2: &Rat, b1: &Rat, b2: &Rat| {
        let (alo, ahi) = if a1 <= a2 { (a1, a2) } else { (a2, a1) };
        let (blo, bhi) = if b1 <= b2 { (b1, b2) } else { (b2, b1) };
        if transposed {
            Rect::new(blo.clone(), bhi.clone(), alo.clone(), ahi.clone())
        } else {
            Rect::new(alo.clone(), ahi.clone(), blo.clone(), bhi.clone())
        }
    };
    let mut rects = Vec::new();
    for (i, a) in across.iter().enumerate() {
        rects.push(rect(a, a, &along[i], &along[i + 1]));
        if i + 1 < across.len() {
            rects.push(rect(a, &across[i + 1], &along[i + 1], &along[i + 1]));
        }
    }
    Region::new(rects)
}
