//! Seeded instance generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{DartId, EmbeddedGraph, VertexId};

/// Inclusive integer weight range `(lo, hi)`.
pub type WeightRange = (u32, u32);

fn draw_weights(rng: &mut ChaCha8Rng, count: usize, (lo, hi): WeightRange) -> Vec<f64> {
    assert!(lo <= hi, "empty weight range {lo}..={hi}");
    (0..count).map(|_| f64::from(rng.gen_range(lo..=hi))).collect()
}

/// A `w` by `h` grid; vertex `(row, col)` has id `row * w + col`. Edge
/// lengths are independent uniform integers from `weights`.
pub fn gen_grid(w: usize, h: usize, weights: WeightRange, seed: u64) -> EmbeddedGraph {
    assert!(w >= 1 && h >= 1, "grid dimensions must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::with_capacity(2 * w * h);
    for r in 0..h {
        for c in 0..w {
            let v = r * w + c;
            if c + 1 < w {
                pairs.push((v, v + 1));
            }
            if r + 1 < h {
                pairs.push((v, v + w));
            }
        }
    }
    let lens = draw_weights(&mut rng, pairs.len(), weights);
    let edges: Vec<_> = pairs.iter().zip(lens).map(|(&(u, v), l)| (u, v, l)).collect();
    let coords: Vec<(f64, f64)> = (0..w * h)
        .map(|v| ((v % w) as f64, (v / w) as f64))
        .collect();
    EmbeddedGraph::from_coordinates(w * h, &edges, &coords).expect("grid drawing is planar")
}

/// A random maximal planar graph: start from a triangle and repeatedly put a
/// new vertex into a uniformly chosen face, joining it to the face's three
/// corners. Has `3n - 6` edges. For `n < 3` a path is returned.
pub fn gen_face_split(n: usize, weights: WeightRange, seed: u64) -> EmbeddedGraph {
    if n < 3 {
        return gen_grid(n.max(1), 1, weights, seed);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs: Vec<(VertexId, VertexId)> = vec![(0, 1), (1, 2), (2, 0)];
    // Rotation successor per dart; dart 2e runs along pairs[e], 2e + 1 back.
    // Around 0: 0->1 then 0->2; around 1: 1->2 then 1->0; around 2: 2->0
    // then 2->1. The inner face is 0->1->2 and the outer face 1->0->2.
    let mut next: Vec<DartId> = vec![5, 2, 1, 4, 3, 0];
    let mut faces: Vec<DartId> = vec![0, 1];
    let twin = |d: DartId| d ^ 1;
    for v in 3..n {
        let i = rng.gen_range(0..faces.len());
        let d0 = faces[i];
        let d1 = next[twin(d0)];
        let d2 = next[twin(d1)];
        let corners = [d0, d1, d2].map(|d| origin_of(&pairs, d));
        let base = 2 * pairs.len();
        // New edge k joins corners[k] to v; its even dart leaves the corner.
        for (k, &c) in corners.iter().enumerate() {
            pairs.push((c, v));
            let out = base + 2 * k;
            // Incoming face dart at corner k is the one before it on the face.
            let incoming = [d2, d0, d1][k];
            let after = twin(incoming);
            next.extend([next[after], 0]);
            next[after] = out;
        }
        let into_v = |k: usize| base + 2 * k + 1;
        next[into_v(1)] = into_v(0);
        next[into_v(0)] = into_v(2);
        next[into_v(2)] = into_v(1);
        faces[i] = d0;
        faces.push(d1);
        faces.push(d2);
    }
    let lens = draw_weights(&mut rng, pairs.len(), weights);
    let edges: Vec<_> = pairs.iter().zip(lens).map(|(&(u, v), l)| (u, v, l)).collect();
    let mut first = vec![usize::MAX; n];
    for d in (0..next.len()).rev() {
        first[origin_of(&pairs, d)] = d;
    }
    let rotations: Vec<Vec<DartId>> = first
        .iter()
        .map(|&f| {
            let mut rot = vec![f];
            let mut d = next[f];
            while d != f {
                rot.push(d);
                d = next[d];
            }
            rot
        })
        .collect();
    EmbeddedGraph::build(n, &edges, &rotations).expect("face splitting keeps the embedding planar")
}

fn origin_of(pairs: &[(VertexId, VertexId)], d: DartId) -> VertexId {
    let (u, v) = pairs[d / 2];
    if d % 2 == 0 {
        u
    } else {
        v
    }
}

/// A star with `leaves` spokes of length `len` around center 0.
pub fn gen_star(leaves: usize, len: f64) -> EmbeddedGraph {
    let edges: Vec<_> = (1..=leaves).map(|i| (0, i, len)).collect();
    let mut rotations = vec![(0..leaves).map(|e| 2 * e).collect::<Vec<_>>()];
    rotations.extend((0..leaves).map(|e| vec![2 * e + 1]));
    EmbeddedGraph::build(leaves + 1, &edges, &rotations).expect("stars are planar")
}

/// Grid with roughly `n` vertices: width `ceil(sqrt n)`.
pub fn gen_grid_n(n: usize, weights: WeightRange, seed: u64) -> EmbeddedGraph {
    let w = (n as f64).sqrt().ceil().max(1.0) as usize;
    let h = n.div_ceil(w).max(1);
    gen_grid(w, h, weights, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::exact_diameter;
    use proptest::prelude::*;

    #[test]
    fn grid_examples() {
        assert_eq!(exact_diameter(&gen_grid(2, 2, (1, 1), 0)).unwrap(), 2.0);
        assert_eq!(exact_diameter(&gen_grid(5, 5, (1, 1), 0)).unwrap(), 8.0);
        let path = gen_grid(7, 1, (1, 1), 0);
        assert_eq!(path.edge_count(), 6);
        assert!((1..6).all(|v| path.degree(v) == 2));
        assert_eq!(gen_grid(2, 2, (1, 1), 0).face_count(), 2);
    }

    #[test]
    fn face_split_small() {
        let t = gen_face_split(3, (1, 1), 0);
        assert_eq!((t.vertex_count(), t.edge_count(), t.face_count()), (3, 3, 2));
        let k4 = gen_face_split(4, (1, 1), 0);
        assert_eq!(k4.edge_count(), 6);
        assert!((0..4).all(|v| k4.degree(v) == 3));
        assert!(k4.faces().iter().all(|f| f.len() == 3));
    }

    #[test]
    fn star_shape() {
        let s = gen_star(5, 2.0);
        assert_eq!(s.degree(0), 5);
        assert_eq!(exact_diameter(&s).unwrap(), 4.0);
    }

    #[test]
    fn seeded() {
        let a = gen_face_split(200, (1, 100), 17);
        let b = gen_face_split(200, (1, 100), 17);
        let c = gen_face_split(200, (1, 100), 18);
        let lens = |g: &EmbeddedGraph| g.edges().map(|e| (e.1, e.2, e.3)).collect::<Vec<_>>();
        assert_eq!(lens(&a), lens(&b));
        assert_ne!(lens(&a), lens(&c));
        assert_eq!(lens(&gen_grid(9, 4, (1, 100), 5)), lens(&gen_grid(9, 4, (1, 100), 5)));
    }

    proptest! {
        #[test]
        fn face_split_is_maximal_planar(n in 3usize..300, seed in any::<u64>()) {
            let g = gen_face_split(n, (1, 100), seed);
            prop_assert!(g.validate().is_valid());
            prop_assert_eq!(g.edge_count(), 3 * n - 6);
            prop_assert!(g.faces().iter().all(|f| f.len() == 3));
            for (_, _, _, len, _) in g.edges() {
                prop_assert!((1.0..=100.0).contains(&len));
            }
        }

        #[test]
        fn grids_validate(w in 1usize..20, h in 1usize..20, seed in any::<u64>()) {
            let g = gen_grid(w, h, (3, 7), seed);
            prop_assert!(g.validate().is_valid());
            prop_assert_eq!(g.face_count(), if w > 1 && h > 1 { (w - 1) * (h - 1) + 1 } else { 1 });
        }
    }
}
