use mstlab_core::continuum::{tree_from_excursion, Excursion};
use mstlab_core::metric::realize;
use mstlab_core::rng::rng_from_seed;
use rand::Rng;

fn random_excursion(rng: &mut impl Rng) -> Excursion {
    let len = rng.random_range(2..=200usize);
    let mut values = vec![0.0; len];
    for v in values.iter_mut().take(len - 1).skip(1) {
        // coarse levels make ties, and so shared vertices, common
        *v = if rng.random_bool(0.5) { rng.random_range(1..6) as f64 * 0.25 } else { rng.random_range(0.01..2.0) };
    }
    Excursion::new(rng.random_range(0.001..0.1), values).unwrap()
}

fn d_hat(e: &[f64], i: usize, j: usize) -> f64 {
    let (a, b) = (i.min(j), i.max(j));
    let m = e[a..=b].iter().copied().fold(f64::INFINITY, f64::min);
    2.0 * e[i] + 2.0 * e[j] - 4.0 * m
}

#[test]
fn tree_metric_is_d_hat_on_every_grid_pair() {
    let mut rng = rng_from_seed(77);
    for trial in 0..500 {
        let e = random_excursion(&mut rng);
        let t = tree_from_excursion(&e);
        assert_eq!(t.graph.graph().num_edges() + 1, t.graph.n(), "trial {trial}: not a tree");
        let s = realize(&t.graph).unwrap();
        let m = e.values.len();
        for i in 0..m {
            for j in 0..m {
                let got = s.dist(t.tau[i], t.tau[j]);
                assert!((got - d_hat(&e.values, i, j)).abs() < 1e-9, "trial {trial}: ({i}, {j})");
            }
        }
        assert!((t.graph.total_mass() - e.sigma()).abs() < 1e-9);
    }
}
