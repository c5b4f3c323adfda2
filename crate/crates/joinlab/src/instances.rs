//! Seeded random instance generators shared by the verification suites.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::formulas::{DeMorgan, Formula, Literal, Var};
use crate::pathgraph::PathGraph;
use crate::pathsets::{is_pathset, PathsetParams, Relation};
use crate::Result;

/// Each edge of `Path_k` kept independently with probability `p`.
pub fn random_subgraph<R: Rng>(rng: &mut R, k: i64, p: f64) -> PathGraph {
    PathGraph::from_edges((1..=k).filter(|_| rng.gen_bool(p)))
}

/// A shuffled covering of `Path_k` by intervals of length `≤ max_len`, some
/// with an extra edge, topped up with single edges where needed.
pub fn random_covering<R: Rng>(rng: &mut R, k: i64, max_len: i64) -> Vec<PathGraph> {
    assert!(k >= 1 && max_len >= 1);
    let mut seq = Vec::new();
    for _ in 0..rng.gen_range(1..=k as usize) {
        let s = rng.gen_range(0..k);
        let t = (s + rng.gen_range(1..=max_len)).min(k);
        let mut g = PathGraph::path(s, t).expect("s < t");
        if rng.gen_bool(0.3) {
            let s2 = rng.gen_range(0..k);
            g = g.union(&PathGraph::edge(s2 + 1));
        }
        seq.push(g);
    }
    let u = PathGraph::union_all(&seq);
    seq.extend((1..=k).filter(|&e| !u.has_edge(e)).map(PathGraph::edge));
    seq.shuffle(rng);
    seq
}

/// A covering of `Path_k` whose graphs all have `λ = 1`.
pub fn random_edge_covering<R: Rng>(rng: &mut R, k: i64) -> Vec<PathGraph> {
    assert!(k >= 1);
    let mut cov: Vec<PathGraph> = (0..rng.gen_range(1..=k))
        .map(|_| {
            PathGraph::from_edges(
                (0..rng.gen_range(1..4)).map(|_| 1 + 2 * rng.gen_range(0..(k + 1) / 2)),
            )
        })
        .collect();
    let u = PathGraph::union_all(&cov);
    cov.extend((1..=k).filter(|&e| !u.has_edge(e)).map(PathGraph::edge));
    cov.shuffle(rng);
    cov
}

/// A covering of `Path_k` in which every prefix union is connected, so the
/// sequence has `vec_delta = 1`.
pub fn random_connected<R: Rng>(rng: &mut R, k: i64) -> Vec<PathGraph> {
    assert!(k >= 1);
    let s = rng.gen_range(0..k);
    let (mut lo, mut hi) = (s, s + 1);
    let mut seq = vec![PathGraph::path(lo, hi).expect("s < s+1")];
    while lo > 0 || hi < k {
        let a = rng.gen_range((lo - 3).max(0)..=hi.min(k - 1));
        let b = rng.gen_range((a + 1).max(lo)..=(hi + 3).min(k));
        let mut g = PathGraph::path(a, b).expect("a < b");
        if rng.gen_bool(0.3) {
            let (x, y) = (rng.gen_range(lo..hi), rng.gen_range(lo..hi));
            g = g.union(&PathGraph::path(x.min(y), x.max(y) + 1).expect("x < y+1"));
        }
        lo = lo.min(a);
        hi = hi.max(b);
        seq.push(g);
    }
    seq
}

/// Every assignment of `[n]^{V(G)}` kept with probability `p`.
pub fn random_relation<R: Rng>(rng: &mut R, g: PathGraph, n: u32, p: f64) -> Result<Relation> {
    let width = g.vertex_count() as usize;
    let tuples: Vec<Vec<u32>> = crate::pathsets::assignments(n, width)
        .filter(|_| rng.gen_bool(p))
        .collect();
    Relation::new(g, n, tuples)
}

/// A random relation thinned until it is a pathset.
pub fn random_pathset<R: Rng>(
    rng: &mut R,
    g: PathGraph,
    params: &PathsetParams,
) -> Result<Relation> {
    let mut r = random_relation(rng, g, params.n, 0.3)?;
    while !is_pathset(&r, params)? {
        let keep: Vec<Vec<u32>> = r.tuples().filter(|_| rng.gen_bool(0.7)).cloned().collect();
        r = Relation::new(r.graph().clone(), r.n(), keep)?;
    }
    Ok(r)
}

/// A monotone binary formula over the matrix variables of `Path_k^{↑n}`.
pub fn random_monotone<R: Rng>(rng: &mut R, n: usize, k: usize, depth: usize) -> DeMorgan {
    if depth == 0 || rng.gen_bool(0.25) {
        let v = Var::Matrix(
            rng.gen_range(1..=k),
            rng.gen_range(1..=n),
            rng.gen_range(1..=n),
        );
        return DeMorgan::Lit(Literal::pos(v));
    }
    let (l, r) = (
        random_monotone(rng, n, k, depth - 1),
        random_monotone(rng, n, k, depth - 1),
    );
    if rng.gen_bool(0.5) {
        DeMorgan::and(l, r)
    } else {
        DeMorgan::or(l, r)
    }
}

/// An unbounded fan-in formula over `X_1..X_k` with gates of fan-in 1..=4
/// and some negated leaves.
pub fn random_edge_formula<R: Rng>(rng: &mut R, k: usize, depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.25) {
        let i = rng.gen_range(1..=k);
        return if rng.gen_bool(0.3) {
            Formula::Lit(Literal::neg(Var::Edge(i)))
        } else {
            Formula::x(i)
        };
    }
    let cs = (0..rng.gen_range(1..=4))
        .map(|_| random_edge_formula(rng, k, depth - 1))
        .collect();
    if rng.gen_bool(0.5) {
        Formula::And(cs)
    } else {
        Formula::Or(cs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pathgraph::{covered_k, vec_delta};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn coverings_cover() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let k = rng.gen_range(1..=30);
            assert_eq!(covered_k(&random_covering(&mut rng, k, 6)).unwrap(), k);
            let e = random_edge_covering(&mut rng, k);
            assert_eq!(covered_k(&e).unwrap(), k);
            assert!(e.iter().all(|g| g.lambda() == 1));
            let c = random_connected(&mut rng, k);
            assert_eq!(covered_k(&c).unwrap(), k);
            assert_eq!(vec_delta(&c, &PathGraph::empty()), 1);
        }
    }

    #[test]
    fn pathsets_are_pathsets() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let p = PathsetParams::new(2, 3).unwrap();
        for _ in 0..20 {
            let g = random_subgraph(&mut rng, 3, 0.5);
            assert!(is_pathset(&random_pathset(&mut rng, g, &p).unwrap(), &p).unwrap());
        }
        let f = random_monotone(&mut rng, 2, 3, 4);
        assert!(f.stats().size >= 1);
    }
}
