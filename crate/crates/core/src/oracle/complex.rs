//! Finite ordered simplicial complexes: construction (spheres, discs,
//! staircase products, wedges, cones, gluing, connected sums) and the
//! boundary matrices feeding the homology machinery.

use crate::error::EngineError;
use crate::oracle::homology::ChainComplex;
use crate::snf::IntMat;
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

/// An ordered simplicial complex: vertices are 0..vertex_count with the
/// numeric order, simplices are sorted vertex tuples, and face closure
/// is implicit.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SimplicialComplex {
    vertex_count: usize,
    maximal: BTreeSet<Vec<usize>>,
}

impl SimplicialComplex {
    pub fn new(vertex_count: usize, simplices: Vec<Vec<usize>>) -> Result<Self, EngineError> {
        let mut maximal: BTreeSet<Vec<usize>> = BTreeSet::new();
        for mut s in simplices {
            s.sort_unstable();
            let len_before = s.len();
            s.dedup();
            if s.len() != len_before || s.is_empty() {
                return Err(EngineError::BadManifold(
                    "simplices need distinct, nonempty vertex sets".into(),
                ));
            }
            if *s.last().unwrap() >= vertex_count {
                return Err(EngineError::BadManifold(
                    "simplex vertex out of range".into(),
                ));
            }
            maximal.insert(s);
        }
        // Drop simplices contained in others.
        let all: Vec<Vec<usize>> = maximal.iter().cloned().collect();
        maximal.retain(|s| !all.iter().any(|t| t.len() > s.len() && is_subset(s, t)));
        Ok(SimplicialComplex {
            vertex_count,
            maximal,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn maximal_simplices(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.maximal.iter()
    }

    pub fn dimension(&self) -> usize {
        self.maximal.iter().map(|s| s.len() - 1).max().unwrap_or(0)
    }

    /// All simplices by dimension, lexicographically sorted within each.
    pub fn simplices_by_dim(&self) -> Vec<Vec<Vec<usize>>> {
        let dim = self.dimension();
        let mut sets: Vec<BTreeSet<Vec<usize>>> = vec![BTreeSet::new(); dim + 1];
        for s in &self.maximal {
            for sub in nonempty_subsets(s) {
                sets[sub.len() - 1].insert(sub);
            }
        }
        sets.into_iter().map(|s| s.into_iter().collect()).collect()
    }

    pub fn face_count(&self) -> usize {
        self.simplices_by_dim().iter().map(Vec::len).sum()
    }

    pub fn euler_characteristic_from_counts(&self) -> i64 {
        self.simplices_by_dim()
            .iter()
            .enumerate()
            .fold(0i64, |acc, (d, list)| {
                if d % 2 == 0 {
                    acc + list.len() as i64
                } else {
                    acc - list.len() as i64
                }
            })
    }

    pub fn chain_complex(&self) -> ChainComplex {
        let by_dim = self.simplices_by_dim();
        let index: Vec<BTreeMap<&Vec<usize>, usize>> = by_dim
            .iter()
            .map(|list| list.iter().enumerate().map(|(i, s)| (s, i)).collect())
            .collect();
        let dims: Vec<usize> = by_dim.iter().map(Vec::len).collect();
        let mut boundary = Vec::with_capacity(dims.len());
        boundary.push(IntMat::zeros(0, dims[0]));
        for d in 1..dims.len() {
            let mut m = IntMat::zeros(dims[d - 1], dims[d]);
            for (j, s) in by_dim[d].iter().enumerate() {
                for (k, face) in faces(s).into_iter().enumerate() {
                    let i = index[d - 1][&face];
                    m[(i, j)] = if k % 2 == 0 { 1 } else { -1 };
                }
            }
            boundary.push(m);
        }
        ChainComplex::new(dims, boundary).expect("closure yields a valid complex")
    }

    /// Induced subcomplex on a vertex set.
    pub fn induced(&self, vertices: &BTreeSet<usize>) -> Vec<Vec<usize>> {
        let mut out: BTreeSet<Vec<usize>> = BTreeSet::new();
        for s in &self.maximal {
            let within: Vec<usize> = s.iter().copied().filter(|v| vertices.contains(v)).collect();
            for sub in nonempty_subsets(&within) {
                out.insert(sub);
            }
        }
        out.into_iter().collect()
    }

    pub fn contains_simplex(&self, simplex: &[usize]) -> bool {
        self.maximal.iter().any(|s| is_subset(simplex, s))
    }

    /// Edges of the 1-skeleton, as sorted pairs.
    pub fn edges(&self) -> BTreeSet<(usize, usize)> {
        let mut out = BTreeSet::new();
        for s in &self.maximal {
            for i in 0..s.len() {
                for j in i + 1..s.len() {
                    out.insert((s[i], s[j]));
                }
            }
        }
        out
    }

    /// Applies a vertex permutation.
    pub fn relabeled(&self, perm: &[usize]) -> Result<SimplicialComplex, EngineError> {
        if perm.len() != self.vertex_count {
            return Err(EngineError::BadGlue("permutation length mismatch".into()));
        }
        let maximal = self
            .maximal
            .iter()
            .map(|s| s.iter().map(|&v| perm[v]).collect())
            .collect();
        SimplicialComplex::new(self.vertex_count, maximal)
    }

    pub fn barycentric_subdivision(&self) -> SimplicialComplex {
        let by_dim = self.simplices_by_dim();
        let mut ids: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for list in &by_dim {
            for s in list {
                let next = ids.len();
                ids.insert(s.clone(), next);
            }
        }
        let mut maximal = Vec::new();
        for top in &self.maximal {
            let mut perm: Vec<usize> = top.clone();
            permute_flags(&mut perm, 0, &mut |order| {
                let mut chain = Vec::with_capacity(order.len());
                let mut prefix: Vec<usize> = Vec::new();
                for &v in order {
                    prefix.push(v);
                    let mut key = prefix.clone();
                    key.sort_unstable();
                    chain.push(ids[&key]);
                }
                maximal.push(chain);
            });
        }
        SimplicialComplex::new(ids.len(), maximal).expect("subdivision is valid")
    }
}

fn permute_flags(items: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        f(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute_flags(items, k + 1, f);
        items.swap(k, i);
    }
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|v| b.binary_search(v).is_ok())
}

fn nonempty_subsets(s: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let n = s.len();
    for mask in 1u32..(1 << n) {
        let sub: Vec<usize> = (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| s[i])
            .collect();
        out.push(sub);
    }
    out
}

fn faces(s: &[usize]) -> Vec<Vec<usize>> {
    (0..s.len())
        .map(|k| {
            s.iter()
                .enumerate()
                .filter(|(i, _)| *i != k)
                .map(|(_, &v)| v)
                .collect()
        })
        .collect()
}

/// Boundary of the (d+1)-simplex: the minimal triangulated d-sphere.
pub fn sphere_complex(d: usize) -> SimplicialComplex {
    let verts = d + 2;
    let all: Vec<usize> = (0..verts).collect();
    let maximal = (0..verts)
        .map(|skip| {
            all.iter()
                .copied()
                .filter(|&v| v != skip)
                .collect::<Vec<usize>>()
        })
        .collect();
    SimplicialComplex::new(verts, maximal).expect("valid sphere")
}

/// A single d-simplex with its faces.
pub fn disc_complex(d: usize) -> SimplicialComplex {
    SimplicialComplex::new(d + 1, vec![(0..=d).collect()]).expect("valid disc")
}

pub fn point_complex() -> SimplicialComplex {
    SimplicialComplex::new(1, vec![vec![0]]).expect("valid point")
}

/// Vertex id of (a, b) in the staircase product.
pub fn product_vertex(b_count: usize, a: usize, b: usize) -> usize {
    a * b_count + b
}

/// Staircase (Eilenberg-Zilber) triangulation of the product.
pub fn product_complex(a: &SimplicialComplex, b: &SimplicialComplex) -> SimplicialComplex {
    let nb = b.vertex_count;
    let mut maximal = Vec::new();
    for sa in &a.maximal {
        for sb in &b.maximal {
            staircases(sa, sb, &mut |path| {
                maximal.push(
                    path.iter()
                        .map(|&(x, y)| product_vertex(nb, x, y))
                        .collect::<Vec<usize>>(),
                );
            });
        }
    }
    SimplicialComplex::new(a.vertex_count * nb, maximal).expect("valid product")
}

fn staircases(sa: &[usize], sb: &[usize], f: &mut impl FnMut(&[(usize, usize)])) {
    let mut path = vec![(sa[0], sb[0])];
    walk(sa, sb, 0, 0, &mut path, f);
}

fn walk(
    sa: &[usize],
    sb: &[usize],
    i: usize,
    j: usize,
    path: &mut Vec<(usize, usize)>,
    f: &mut impl FnMut(&[(usize, usize)]),
) {
    if i == sa.len() - 1 && j == sb.len() - 1 {
        f(path);
        return;
    }
    if i + 1 < sa.len() {
        path.push((sa[i + 1], sb[j]));
        walk(sa, sb, i + 1, j, path, f);
        path.pop();
    }
    if j + 1 < sb.len() {
        path.push((sa[i], sb[j + 1]));
        walk(sa, sb, i, j + 1, path, f);
        path.pop();
    }
}

/// Wedge at vertex 0 of every part.
pub fn wedge_complex(parts: &[SimplicialComplex]) -> Result<SimplicialComplex, EngineError> {
    if parts.is_empty() {
        return Ok(point_complex());
    }
    let mut vertex_count = parts[0].vertex_count;
    let mut maximal: Vec<Vec<usize>> = parts[0].maximal.iter().cloned().collect();
    for p in &parts[1..] {
        if p.vertex_count == 0 {
            return Err(EngineError::BadManifold("empty wedge summand".into()));
        }
        let offset = vertex_count;
        for s in &p.maximal {
            maximal.push(
                s.iter()
                    .map(|&v| if v == 0 { 0 } else { offset + v - 1 })
                    .collect(),
            );
        }
        vertex_count += p.vertex_count - 1;
    }
    SimplicialComplex::new(vertex_count, maximal)
}

/// Cone: a fresh apex joined to every simplex. The apex is the last
/// vertex in the global order.
pub fn cone_complex(a: &SimplicialComplex) -> SimplicialComplex {
    let apex = a.vertex_count;
    let maximal = a
        .maximal
        .iter()
        .map(|s| {
            let mut t = s.clone();
            t.push(apex);
            t
        })
        .collect();
    SimplicialComplex::new(a.vertex_count + 1, maximal).expect("valid cone")
}

/// Result of gluing: the quotient complex plus vertex maps from each
/// operand into it.
pub struct Glued {
    pub complex: SimplicialComplex,
    pub left_map: Vec<usize>,
    pub right_map: Vec<usize>,
}

/// Glues `b` onto `a` along a vertex matching that must identify
/// isomorphic induced subcomplexes.
pub fn glue_complex(
    a: &SimplicialComplex,
    b: &SimplicialComplex,
    matching: &[(usize, usize)],
) -> Result<Glued, EngineError> {
    let a_set: BTreeSet<usize> = matching.iter().map(|&(x, _)| x).collect();
    let b_set: BTreeSet<usize> = matching.iter().map(|&(_, y)| y).collect();
    if a_set.len() != matching.len() || b_set.len() != matching.len() {
        return Err(EngineError::BadGlue("matching is not a bijection".into()));
    }
    if a_set.iter().any(|&v| v >= a.vertex_count) || b_set.iter().any(|&v| v >= b.vertex_count) {
        return Err(EngineError::BadGlue("matched vertex out of range".into()));
    }
    let b_to_a: BTreeMap<usize, usize> = matching.iter().map(|&(x, y)| (y, x)).collect();
    // The induced subcomplexes must correspond under the matching.
    let ind_a: BTreeSet<Vec<usize>> = a.induced(&a_set).into_iter().collect();
    let ind_b: BTreeSet<Vec<usize>> = b
        .induced(&b_set)
        .into_iter()
        .map(|s| {
            let mut t: Vec<usize> = s.iter().map(|v| b_to_a[v]).collect();
            t.sort_unstable();
            t
        })
        .collect();
    if ind_a != ind_b {
        return Err(EngineError::BadGlue(
            "matched vertex sets span different subcomplexes".into(),
        ));
    }
    let left_map: Vec<usize> = (0..a.vertex_count).collect();
    let mut right_map = vec![0usize; b.vertex_count];
    let mut next = a.vertex_count;
    for (v, slot) in right_map.iter_mut().enumerate() {
        if let Some(&x) = b_to_a.get(&v) {
            *slot = x;
        } else {
            *slot = next;
            next += 1;
        }
    }
    let mut maximal: Vec<Vec<usize>> = a.maximal.iter().cloned().collect();
    for s in &b.maximal {
        maximal.push(s.iter().map(|&v| right_map[v]).collect());
    }
    Ok(Glued {
        complex: SimplicialComplex::new(next, maximal)?,
        left_map,
        right_map,
    })
}

/// Connected sum of two closed n-complexes: a top simplex is removed
/// from each and the boundaries identified. Operands with a single top
/// simplex are barycentrically subdivided first. Marked vertices are
/// avoided when picking the removed simplices.
pub fn connected_sum_complex(
    a: &SimplicialComplex,
    b: &SimplicialComplex,
    avoid_a: &BTreeSet<usize>,
    avoid_b: &BTreeSet<usize>,
) -> Result<Glued, EngineError> {
    let n = a.dimension();
    if b.dimension() != n {
        return Err(EngineError::DimensionMismatch(n, b.dimension()));
    }
    let a = ensure_removable(a, avoid_a)?;
    let b = ensure_removable(b, avoid_b)?;
    let sa = removable_top(&a, avoid_a)
        .ok_or_else(|| EngineError::BadGlue("no removable top simplex on the left".into()))?;
    let sb = removable_top(&b, avoid_b)
        .ok_or_else(|| EngineError::BadGlue("no removable top simplex on the right".into()))?;
    let a_cut = remove_top(&a, &sa)?;
    let b_cut = remove_top(&b, &sb)?;
    let matching: Vec<(usize, usize)> = sa.iter().copied().zip(sb.iter().copied()).collect();
    glue_complex(&a_cut, &b_cut, &matching)
}

fn ensure_removable(
    c: &SimplicialComplex,
    avoid: &BTreeSet<usize>,
) -> Result<SimplicialComplex, EngineError> {
    if removable_top(c, avoid).is_some() {
        Ok(c.clone())
    } else {
        // A single barycentric subdivision always provides one, at the
        // cost of invalidating vertex marks; reject in that case.
        if avoid.is_empty() {
            Ok(c.barycentric_subdivision())
        } else {
            Err(EngineError::BadGlue(
                "no top simplex avoids the marked vertices".into(),
            ))
        }
    }
}

fn removable_top(c: &SimplicialComplex, avoid: &BTreeSet<usize>) -> Option<Vec<usize>> {
    let n = c.dimension();
    let tops: Vec<&Vec<usize>> = c.maximal.iter().filter(|s| s.len() == n + 1).collect();
    'outer: for s in &tops {
        if s.iter().any(|v| avoid.contains(v)) {
            continue;
        }
        // every facet must be shared with another top simplex
        for f in faces(s) {
            if !tops.iter().any(|t| *t != *s && is_subset(&f, t)) {
                continue 'outer;
            }
        }
        return Some((*s).clone());
    }
    None
}

fn remove_top(c: &SimplicialComplex, s: &[usize]) -> Result<SimplicialComplex, EngineError> {
    let mut maximal: Vec<Vec<usize>> = c
        .maximal
        .iter()
        .filter(|t| t.as_slice() != s)
        .cloned()
        .collect();
    // keep the boundary faces explicitly; closure drops redundant ones
    for f in faces(s) {
        maximal.push(f);
    }
    SimplicialComplex::new(c.vertex_count, maximal)
}

/// First-contact BFS path from `from` to `to` through the 1-skeleton;
/// both endpoints included. Shortest paths are induced, so the collapse
/// locus stays a tree of sections.
pub fn bfs_path(
    c: &SimplicialComplex,
    from: &BTreeSet<usize>,
    to: &BTreeSet<usize>,
) -> Option<Vec<usize>> {
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (u, v) in c.edges() {
        adj.entry(u).or_default().push(v);
        adj.entry(v).or_default().push(u);
    }
    let mut prev: BTreeMap<usize, usize> = BTreeMap::new();
    let mut queue: VecDeque<usize> = VecDeque::new();
    let mut seen: BTreeSet<usize> = BTreeSet::new();
    for &v in from {
        queue.push_back(v);
        seen.insert(v);
    }
    while let Some(v) = queue.pop_front() {
        if to.contains(&v) {
            let mut path = vec![v];
            let mut cur = v;
            while let Some(&p) = prev.get(&cur) {
                path.push(p);
                cur = p;
            }
            path.reverse();
            return Some(path);
        }
        for &w in adj.get(&v).into_iter().flatten() {
            if seen.insert(w) {
                prev.insert(w, v);
                queue.push_back(w);
            }
        }
    }
    None
}

impl fmt::Display for SimplicialComplex {
    /// Plain-text export: vertex count, then one maximal simplex per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vertices {}", self.vertex_count)?;
        for s in &self.maximal {
            let parts: Vec<String> = s.iter().map(usize::to_string).collect();
            writeln!(f, "{}", parts.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::CoefficientRing;

    fn z() -> CoefficientRing {
        CoefficientRing::Integers
    }

    #[test]
    fn sphere_counts() {
        let s2 = sphere_complex(2);
        let by_dim = s2.simplices_by_dim();
        assert_eq!(by_dim[0].len(), 4);
        assert_eq!(by_dim[1].len(), 6);
        assert_eq!(by_dim[2].len(), 4);
    }

    #[test]
    fn sphere_homology_all_dims() {
        for d in 1..=4 {
            let h = sphere_complex(d)
                .chain_complex()
                .homology_module(z())
                .unwrap();
            for k in 0..=d {
                let expect = usize::from(k == 0 || k == d);
                assert_eq!(h.rank(k), expect, "S^{d} degree {k}");
                assert!(h.torsion_factors(k).is_empty());
            }
        }
    }

    #[test]
    fn torus_staircase_counts() {
        let s1 = sphere_complex(1);
        let t = product_complex(&s1, &s1);
        assert_eq!(t.vertex_count(), 9);
        let by_dim = t.simplices_by_dim();
        assert_eq!(by_dim[2].len(), 18);
        assert_eq!(t.euler_characteristic_from_counts(), 0);
        let h = t.chain_complex().homology_module(z()).unwrap();
        assert_eq!(h.rank(0), 1);
        assert_eq!(h.rank(1), 2);
        assert_eq!(h.rank(2), 1);
    }

    #[test]
    fn chi_counts_match_homology() {
        let cases = vec![
            sphere_complex(2),
            product_complex(&sphere_complex(1), &sphere_complex(2)),
            cone_complex(&sphere_complex(2)),
        ];
        for c in cases {
            let h = c.chain_complex().homology_module(z()).unwrap();
            assert_eq!(
                c.euler_characteristic_from_counts(),
                h.euler_characteristic()
            );
        }
    }

    #[test]
    fn cones_are_contractible() {
        let c = cone_complex(&product_complex(&sphere_complex(1), &sphere_complex(1)));
        let h = c.chain_complex().homology_module(z()).unwrap();
        assert_eq!(h.rank(0), 1);
        for d in 1..=h.top_degree() {
            assert!(h.factors(d).is_empty(), "degree {d}");
        }
    }

    #[test]
    fn wedge_of_spheres() {
        let w = wedge_complex(&[sphere_complex(2), sphere_complex(2)]).unwrap();
        let h = w.chain_complex().homology_module(z()).unwrap();
        assert_eq!(h.rank(0), 1);
        assert_eq!(h.rank(2), 2);
    }

    #[test]
    fn glue_two_discs_into_a_sphere() {
        let d = disc_complex(2);
        let matching = vec![(0, 0), (1, 1), (2, 2)];
        // invalid: the matched sets span the whole triangle on both sides
        // but the triangle is also a simplex of each, so they agree; the
        // glued object is degenerate and caught by the subcomplex check
        // only when the induced complexes differ. Here they agree and the
        // result is a doubled 2-simplex, not a manifold; still a valid
        // complex whose homology is that of S^2... it is actually two
        // triangles on the same vertices, a single simplex set, i.e. a
        // disc. Use boundary gluing instead.
        let g = glue_complex(&d, &d, &matching).unwrap();
        assert_eq!(g.complex.maximal_simplices().count(), 1);

        // Proper hemisphere gluing: two triangles along their boundary
        // circles would need subdivided discs; use cones over a circle.
        let c = cone_complex(&sphere_complex(1));
        let ring: Vec<(usize, usize)> = (0..3).map(|v| (v, v)).collect();
        let g = glue_complex(&c, &c, &ring).unwrap();
        let h = g.complex.chain_complex().homology_module(z()).unwrap();
        assert_eq!(h.rank(0), 1);
        assert_eq!(h.rank(1), 0);
        assert_eq!(h.rank(2), 1);
    }

    #[test]
    fn glue_rejects_mismatched_subcomplexes() {
        let s1 = sphere_complex(1); // triangle boundary
        let d1 = disc_complex(1); // a single edge
                                  // matching all three vertices of the triangle onto the edge
        let r = glue_complex(&s1, &d1, &[(0, 0), (1, 1)]);
        // induced on {0,1} in the triangle: edge 01 plus vertices; on the
        // edge side: the same. This is valid.
        assert!(r.is_ok());
        // Now force a mismatch: in the triangle the pair {0,1} spans an
        // edge; take b to be two isolated points.
        let pts = SimplicialComplex::new(2, vec![vec![0], vec![1]]).unwrap();
        let r = glue_complex(&s1, &pts, &[(0, 0), (1, 1)]);
        assert!(r.is_err());
    }

    #[test]
    fn connected_sum_of_tori_is_genus_two() {
        let s1 = sphere_complex(1);
        let t = product_complex(&s1, &s1);
        let g = connected_sum_complex(&t, &t, &BTreeSet::new(), &BTreeSet::new()).unwrap();
        let h = g.complex.chain_complex().homology_module(z()).unwrap();
        assert_eq!(h.rank(0), 1);
        assert_eq!(h.rank(1), 4);
        assert_eq!(h.rank(2), 1);
        assert!(h.torsion_factors(1).is_empty());
    }

    #[test]
    fn connected_sum_of_spheres_is_a_sphere() {
        let s = sphere_complex(3);
        let g = connected_sum_complex(&s, &s, &BTreeSet::new(), &BTreeSet::new()).unwrap();
        let h = g.complex.chain_complex().homology_module(z()).unwrap();
        let expect = sphere_complex(3)
            .chain_complex()
            .homology_module(z())
            .unwrap();
        assert!(h.is_isomorphic(&expect).unwrap());
    }

    #[test]
    fn barycentric_subdivision_preserves_homology() {
        let t = product_complex(&sphere_complex(1), &sphere_complex(1));
        let sub = t.barycentric_subdivision();
        assert_eq!(
            sub.euler_characteristic_from_counts(),
            t.euler_characteristic_from_counts()
        );
        let h1 = t.chain_complex().homology_module(z()).unwrap();
        let h2 = sub.chain_complex().homology_module(z()).unwrap();
        assert!(h1.is_isomorphic(&h2).unwrap());
    }

    #[test]
    fn relabel_invariance() {
        let t = product_complex(&sphere_complex(1), &sphere_complex(1));
        let n = t.vertex_count();
        let perm: Vec<usize> = (0..n).map(|v| (v * 7 + 3) % n).collect();
        let r = t.relabeled(&perm).unwrap();
        let h1 = t.chain_complex().homology_module(z()).unwrap();
        let h2 = r.chain_complex().homology_module(z()).unwrap();
        assert!(h1.is_isomorphic(&h2).unwrap());
    }

    #[test]
    fn bfs_paths_are_found() {
        let s = sphere_complex(2);
        let from: BTreeSet<usize> = [0].into();
        let to: BTreeSet<usize> = [3].into();
        let p = bfs_path(&s, &from, &to).unwrap();
        assert_eq!(p.first(), Some(&0));
        assert_eq!(p.last(), Some(&3));
    }

    #[test]
    fn export_format() {
        let text = disc_complex(1).to_string();
        assert_eq!(text, "vertices 2\n0 1\n");
    }
}
