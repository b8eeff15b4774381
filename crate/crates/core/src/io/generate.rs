//! Random valid diagrams built by blow-up moves, for property tests.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diagram::Diagram;
use crate::io::builders;
use crate::refine::{refine_edge, Subdivision};

/// Start from a one-node monomial diagram and apply `n_moves` random moves:
/// a mediant on a determinant-1 edge, a mediant between a node and one of
/// its arrowheads, or a fresh arrowhead with decoration 1.
///
/// The result is standard and realizable; its reduction usually is not.
pub fn random_diagram(seed: u64, n_moves: usize) -> Diagram {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = rng.gen_range(1..=3);
    let m2 = rng.gen_range(0..=3);
    let i = rng.gen_range(1..=3);
    let i2 = rng.gen_range(1..=3);
    let mut g = builders::monomial(m, m2, i, i2).expect("nu >= 1 keeps the data nondegenerate");
    for _ in 0..n_moves {
        match rng.gen_range(0..3) {
            0 if !g.edges().is_empty() => {
                let e = g.edges().choose(&mut rng).unwrap().clone();
                let (wa, wb) = g.cone_vectors(&e.a, &e.b).unwrap();
                let s = Subdivision::new(vec![wa, wb])
                    .expect("generated edges have determinant 1")
                    .with_mediant(0);
                g = refine_edge(&g, &e.a, &e.b, Some(&s)).unwrap();
            }
            0 | 1 => {
                let k = rng.gen_range(0..g.arrows().len());
                let v = g.arrows()[k].node.clone();
                let outer = g.decoration_product(&v).unwrap() / g.arrows()[k].dec;
                let x = g.fresh_id("g");
                g.add_node(x.clone(), None);
                g.add_edge(v, x.clone(), 1, outer + 1);
                g.arrows_mut()[k].node = x;
            }
            _ => {
                let ids: Vec<String> = g.node_ids().cloned().collect();
                let v = ids.choose(&mut rng).unwrap().clone();
                let n = rng.gen_range(0..=2);
                let nu = rng.gen_range(1..=3);
                g.add_arrow(v, 1, n, nu);
            }
        }
    }
    g
}
