//! Multigraph isomorphism by colour refinement and individualisation.

use std::collections::BTreeMap;

use super::Multigraph;

type Matrix = Vec<Vec<u32>>;

/// Refines the colourings of all graphs jointly until stable. Colours are
/// ranks of label-independent signatures, so equal colours mean the same
/// thing in every graph.
fn refine(mats: &[&Matrix], colors: &mut [Vec<usize>]) {
    let mut classes = count_classes(colors);
    loop {
        let mut sigs: Vec<Vec<(usize, u32, Vec<(usize, u32)>)>> = Vec::with_capacity(mats.len());
        let mut all = BTreeMap::new();
        for (m, c) in mats.iter().zip(colors.iter()) {
            let s: Vec<_> = (0..m.len())
                .map(|v| {
                    let mut nb: Vec<(usize, u32)> =
                        (0..m.len()).filter(|&u| u != v && m[v][u] > 0).map(|u| (c[u], m[v][u])).collect();
                    nb.sort_unstable();
                    (c[v], m[v][v], nb)
                })
                .collect();
            for sig in &s {
                all.insert(sig.clone(), 0usize);
            }
            sigs.push(s);
        }
        for (rank, val) in all.values_mut().enumerate() {
            *val = rank;
        }
        for (c, s) in colors.iter_mut().zip(&sigs) {
            for (v, sig) in s.iter().enumerate() {
                c[v] = all[sig];
            }
        }
        let next = count_classes(colors);
        if next == classes {
            return;
        }
        classes = next;
    }
}

fn count_classes(colors: &[Vec<usize>]) -> usize {
    let mut all: Vec<usize> = colors.iter().flatten().copied().collect();
    all.sort_unstable();
    all.dedup();
    all.len()
}

fn histogram(c: &[usize]) -> Vec<usize> {
    let mut h = c.to_vec();
    h.sort_unstable();
    h
}

/// Smallest non-singleton colour class, as the colour.
fn target_cell(c: &[usize]) -> Option<usize> {
    let mut counts = BTreeMap::new();
    for &x in c {
        *counts.entry(x).or_insert(0usize) += 1;
    }
    counts.into_iter().filter(|&(_, k)| k > 1).min_by_key(|&(col, k)| (k, col)).map(|(col, _)| col)
}

fn search_iso(a: &Matrix, b: &Matrix, ca: Vec<usize>, cb: Vec<usize>) -> bool {
    if histogram(&ca) != histogram(&cb) {
        return false;
    }
    let Some(cell) = target_cell(&ca) else {
        let n = a.len();
        let mut map = vec![0; n];
        for v in 0..n {
            map[v] = cb.iter().position(|&x| x == ca[v]).expect("equal histograms");
        }
        return (0..n).all(|i| (0..n).all(|j| a[i][j] == b[map[i]][map[j]]));
    };
    let fresh = ca.len().max(cb.len()) + ca.iter().chain(&cb).max().copied().unwrap_or(0) + 1;
    let v = ca.iter().position(|&x| x == cell).expect("cell is nonempty");
    for w in (0..cb.len()).filter(|&w| cb[w] == cell) {
        let mut cols = [ca.clone(), cb.clone()];
        cols[0][v] = fresh;
        cols[1][w] = fresh;
        refine(&[a, b], &mut cols);
        let [na, nb] = cols;
        if search_iso(a, b, na, nb) {
            return true;
        }
    }
    false
}

/// Whether two multigraphs are isomorphic (loops and multiplicities respected).
pub fn is_isomorphic(a: &Multigraph, b: &Multigraph) -> bool {
    if a.n() != b.n() || a.num_edges() != b.num_edges() {
        return false;
    }
    let mut da = a.degrees();
    let mut db = b.degrees();
    da.sort_unstable();
    db.sort_unstable();
    if da != db {
        return false;
    }
    let (ma, mb) = (a.multiplicity_matrix(), b.multiplicity_matrix());
    let mut cols = [vec![0; a.n()], vec![0; b.n()]];
    refine(&[&ma, &mb], &mut cols);
    let [ca, cb] = cols;
    search_iso(&ma, &mb, ca, cb)
}

fn search_canon(m: &Matrix, c: Vec<usize>, best: &mut Option<Vec<u32>>) {
    let Some(cell) = target_cell(&c) else {
        let mut order: Vec<usize> = (0..m.len()).collect();
        order.sort_by_key(|&v| c[v]);
        let form: Vec<u32> = order.iter().flat_map(|&i| order.iter().map(move |&j| m[i][j])).collect();
        if best.as_ref().is_none_or(|b| form < *b) {
            *best = Some(form);
        }
        return;
    };
    let fresh = c.iter().max().copied().unwrap_or(0) + 1;
    for v in (0..c.len()).filter(|&v| c[v] == cell) {
        let mut cols = [c.clone()];
        cols[0][v] = fresh;
        refine(&[m], &mut cols);
        let [nc] = cols;
        search_canon(m, nc, best);
    }
}

/// A label-independent encoding: equal iff the multigraphs are isomorphic.
///
/// Exponential in the worst case; intended for graphs with a handful of vertices.
pub fn canonical_form(g: &Multigraph) -> Vec<u32> {
    let m = g.multiplicity_matrix();
    let mut cols = [vec![0; g.n()]];
    refine(&[&m], &mut cols);
    let [c] = cols;
    let mut best = None;
    search_canon(&m, c, &mut best);
    let mut out = vec![g.n() as u32];
    out.extend(best.unwrap_or_default());
    out
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::complete;
    use super::*;
    use proptest::prelude::*;

    fn relabel(g: &Multigraph, perm: &[usize]) -> Multigraph {
        let pairs: Vec<_> = g.edges().iter().rev().map(|e| (perm[e.v], perm[e.u])).collect();
        Multigraph::from_pairs(g.n(), &pairs).unwrap()
    }

    #[test]
    fn distinguishes_small_graphs() {
        let path = Multigraph::from_pairs(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let star = Multigraph::from_pairs(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert!(!is_isomorphic(&path, &star));
        assert_ne!(canonical_form(&path), canonical_form(&star));
        let loops = Multigraph::from_pairs(2, &[(0, 0), (0, 1), (1, 1)]).unwrap();
        let doubled = Multigraph::from_pairs(2, &[(0, 1), (0, 1), (0, 1)]).unwrap();
        assert!(!is_isomorphic(&loops, &doubled));
    }

    #[test]
    fn regular_graphs_need_backtracking() {
        // the 6-cycle and two triangles are both 2-regular on six vertices
        let c6 = Multigraph::from_pairs(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]).unwrap();
        let tt = Multigraph::from_pairs(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        assert!(!is_isomorphic(&c6, &tt));
        assert_ne!(canonical_form(&c6), canonical_form(&tt));
        let k33 = Multigraph::from_pairs(6, &[(0, 3), (0, 4), (0, 5), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)])
            .unwrap();
        let prism = Multigraph::from_pairs(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)])
            .unwrap();
        assert!(!is_isomorphic(&k33, &prism));
        assert!(is_isomorphic(&complete(4), &relabel(&complete(4), &[2, 0, 3, 1])));
    }

    proptest! {
        #[test]
        fn invariant_under_relabelling(
            n in 1usize..8,
            pairs in proptest::collection::vec((0usize..8, 0usize..8), 0..10),
            perm in Just((0..8).collect::<Vec<usize>>()).prop_shuffle(),
        ) {
            let pairs: Vec<_> = pairs.into_iter().map(|(a, b)| (a % n, b % n)).collect();
            let g = Multigraph::from_pairs(n, &pairs).unwrap();
            let perm: Vec<usize> = perm.into_iter().filter(|&x| x < n).collect();
            let h = relabel(&g, &perm);
            prop_assert!(is_isomorphic(&g, &h));
            prop_assert_eq!(canonical_form(&g), canonical_form(&h));
        }
    }
}
