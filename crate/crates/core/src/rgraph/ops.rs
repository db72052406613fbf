use super::{bridges, EdgeLengthGraph, Multigraph};
use crate::{Error, Result, UnionFind};

/// The metric realization `m(G)`: every edge gets length one.
pub fn unit_realization(g: &Multigraph) -> EdgeLengthGraph {
    let n = g.num_edges();
    EdgeLengthGraph::from_multigraph(g.clone(), vec![1.0; n]).expect("unit lengths are valid")
}

/// Cuts `g` at the point at distance `t` from `u` along edge `id = (u, v)`.
///
/// The edge is replaced by `u – x1` of length `t` (keeping `id`) and
/// `x2 – v` of length `ℓ - t` (fresh id), where `x1`, `x2` are new
/// massless leaves appended as vertices `n` and `n + 1`.
pub fn cut_at_point(g: &EdgeLengthGraph, id: usize, t: f64) -> Result<EdgeLengthGraph> {
    let pos = g
        .graph()
        .position(id)
        .ok_or_else(|| Error::Domain(format!("no edge with id {id}")))?;
    g.graph().require_connected()?;
    let len = g.lengths()[pos];
    if !(t > 0.0 && t < len) {
        return Err(Error::UnsafePoint(format!("offset {t} is not interior to edge {id} of length {len}")));
    }
    if bridges(g.graph())[pos] {
        return Err(Error::UnsafePoint(format!("edge {id} is a bridge")));
    }
    let e = g.edges()[pos];
    let mut out = g.clone();
    out.remove_edge(id)?;
    let x1 = out.add_vertex(0.0);
    let x2 = out.add_vertex(0.0);
    out.add_edge_with_id(id, e.u, x1, t)?;
    out.add_edge(x2, e.v, len - t)?;
    Ok(out)
}

/// Identifies each pair of vertices. Vertex classes are renumbered in order
/// of their smallest member; masses add; edge ids and lengths are kept.
pub fn glue(g: &EdgeLengthGraph, pairs: &[(usize, usize)]) -> Result<EdgeLengthGraph> {
    let n = g.n();
    let mut uf = UnionFind::new(n);
    for &(x, y) in pairs {
        if x >= n || y >= n {
            return Err(Error::Domain(format!("glue pair ({x}, {y}) outside 0..{n}")));
        }
        if x == y {
            return Err(Error::Domain(format!("glue pair ({x}, {x}) is not two distinct points")));
        }
        uf.union(x, y);
    }
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    for v in 0..n {
        let r = uf.find(v);
        if label[r] == usize::MAX {
            label[r] = next;
            next += 1;
        }
        label[v] = label[r];
    }
    let mut out = EdgeLengthGraph::new(next);
    for (e, l) in g.edge_lengths() {
        out.add_edge_with_id(e.id, label[e.u], label[e.v], l)?;
    }
    if let Some(m) = g.masses() {
        let mut merged = vec![0.0; next];
        for v in 0..n {
            merged[label[v]] += m[v];
        }
        out.set_masses(merged)?;
    }
    Ok(out)
}

/// Splits every edge into `⌈ℓ / max_len⌉` equal pieces. Original vertices
/// keep their ids and masses; new vertices are massless.
pub fn subdivide(g: &EdgeLengthGraph, max_len: f64) -> Result<EdgeLengthGraph> {
    if !(max_len > 0.0) {
        return Err(Error::Parameter(format!("subdivision length must be positive, got {max_len}")));
    }
    let mut out = EdgeLengthGraph::new(g.n());
    if let Some(m) = g.masses() {
        out.set_masses(m.to_vec())?;
    }
    for (e, l) in g.edge_lengths() {
        let k = ((l / max_len).ceil() as usize).max(1);
        let piece = l / k as f64;
        let mut prev = e.u;
        for i in 0..k {
            let next = if i + 1 == k { e.v } else { out.add_vertex(0.0) };
            out.add_edge(prev, next, piece)?;
            prev = next;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::{conn_length, is_isomorphic, kernel, surplus};
    use super::*;

    #[test]
    fn cut_cycle_gives_path() {
        let c = cycle(1, 1.0);
        let p = cut_at_point(&c, 0, 0.3).unwrap();
        assert_eq!(surplus(p.graph()).unwrap(), 0);
        assert!((p.total_length() - 1.0).abs() < 1e-12);
        assert_eq!(p.n(), 3);
    }

    #[test]
    fn cut_theta_is_unicyclic() {
        let t = theta([1.0, 1.0, 1.0]);
        let c = cut_at_point(&t, 0, 0.5).unwrap();
        assert_eq!(surplus(c.graph()).unwrap(), 1);
        assert_eq!(kernel(&c).unwrap().r, 2.0);
    }

    #[test]
    fn unsafe_cuts_are_rejected() {
        let g = triangle_with_pendant();
        assert!(matches!(cut_at_point(&g, 3, 0.5), Err(Error::UnsafePoint(_))));
        assert!(matches!(cut_at_point(&g, 0, 0.0), Err(Error::UnsafePoint(_))));
        assert!(matches!(cut_at_point(&g, 0, 1.0), Err(Error::UnsafePoint(_))));
    }

    #[test]
    fn cut_preserves_masses_and_adds_massless_leaves() {
        let g = cycle(3, 1.0).with_masses(vec![0.2, 0.3, 0.5]).unwrap();
        let c = cut_at_point(&g, 1, 0.25).unwrap();
        assert_eq!(c.masses().unwrap(), &[0.2, 0.3, 0.5, 0.0, 0.0]);
        assert!((conn_length(&c).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn glue_path_ends_gives_cycle() {
        let p = path(&[0.5, 0.5]).with_masses(vec![0.1, 0.2, 0.3]).unwrap();
        let c = glue(&p, &[(0, 2)]).unwrap();
        assert_eq!(c.n(), 2);
        assert_eq!(surplus(c.graph()).unwrap(), 1);
        assert_eq!(c.masses().unwrap(), &[0.4, 0.2]);
        assert!(glue(&p, &[(1, 1)]).is_err());
    }

    #[test]
    fn glue_adds_degrees() {
        let g = figure_eight();
        let d = g.graph().degrees();
        let h = glue(&g, &[(1, 3)]).unwrap();
        // vertices 0, {1,3}, 2, 4
        assert_eq!(h.graph().degrees()[1], d[1] + d[3]);
        assert_eq!(surplus(h.graph()).unwrap(), 3);
    }

    #[test]
    fn glue_then_cut_restores_surplus() {
        let p = path(&[1.0, 1.0]);
        let c = glue(&p, &[(0, 2)]).unwrap();
        let back = cut_at_point(&c, 0, 0.5).unwrap();
        assert_eq!(surplus(back.graph()).unwrap(), 0);
    }

    #[test]
    fn subdivide_keeps_metric_shape() {
        let t = theta([1.0, 2.0, 3.0]);
        let s = subdivide(&t, 1.0).unwrap();
        assert_eq!(s.graph().num_edges(), 6);
        assert!((s.total_length() - 6.0).abs() < 1e-12);
        let k = kernel(&s).unwrap();
        assert_eq!(k.vertices, vec![0, 1]);
        assert!(is_isomorphic(k.kernel_graph().graph(), t.graph()));
    }
}
