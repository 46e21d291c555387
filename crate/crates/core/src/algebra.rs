//! Graded commutative algebras with Koszul signs, stored as a degreewise
//! summand presentation plus a structure-constant table over generator
//! pairs. Only canonically ordered pairs are stored; the transpose is
//! derived from the sign rule, so graded commutativity holds by
//! construction and the validator checks unit, window and associativity.

use crate::error::EngineError;
use crate::module::{is_ufg, GradedModule, ModuleElement};
use crate::ring::CoefficientRing;
use crate::snf::{smith_normal_form, IntMat};
use std::collections::{BTreeMap, BTreeSet};

/// (degree, index within the degree's presentation).
pub type GenId = (usize, usize);

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GradedAlgebra {
    ring: CoefficientRing,
    top: usize,
    /// Presentation order; degree lists are append-only, not necessarily
    /// in divisibility-chain order. `module()` yields the normal form.
    summands: Vec<Vec<i64>>,
    labels: Vec<Vec<String>>,
    products: BTreeMap<(GenId, GenId), ModuleElement>,
}

fn canonical_key(a: GenId, b: GenId) -> ((GenId, GenId), bool) {
    if a <= b {
        ((a, b), false)
    } else {
        ((b, a), true)
    }
}

/// Canonical storage form of a product entry: orders the pair and
/// applies the Koszul sign when the order is reversed.
pub fn canonical_entry(
    a: GenId,
    b: GenId,
    mut value: ModuleElement,
) -> ((GenId, GenId), ModuleElement) {
    let (key, swapped) = canonical_key(a, b);
    if swapped && (a.0 * b.0) % 2 == 1 {
        for c in &mut value.coords {
            *c = -*c;
        }
    }
    (key, value)
}

impl GradedAlgebra {
    pub fn from_parts(
        ring: CoefficientRing,
        top: usize,
        summands: Vec<Vec<i64>>,
        labels: Vec<Vec<String>>,
        products: BTreeMap<(GenId, GenId), ModuleElement>,
    ) -> Result<Self, EngineError> {
        let alg = GradedAlgebra {
            ring,
            top,
            summands,
            labels,
            products,
        };
        alg.validate()?;
        Ok(alg)
    }

    /// The cohomology ring of a point.
    pub fn point_ring(ring: CoefficientRing) -> Self {
        GradedAlgebra {
            ring,
            top: 0,
            summands: vec![vec![0]],
            labels: vec![vec!["1".into()]],
            products: BTreeMap::new(),
        }
    }

    pub fn ring(&self) -> CoefficientRing {
        self.ring
    }

    pub fn top_degree(&self) -> usize {
        self.top
    }

    pub fn summands(&self, degree: usize) -> &[i64] {
        &self.summands[degree]
    }

    pub fn label(&self, g: GenId) -> &str {
        &self.labels[g.0][g.1]
    }

    pub fn gen_count(&self, degree: usize) -> usize {
        self.summands[degree].len()
    }

    /// Stored product entries (canonical pair order, zero rows omitted).
    pub fn product_entries(&self) -> impl Iterator<Item = (&(GenId, GenId), &ModuleElement)> {
        self.products.iter()
    }

    /// All generators of positive degree.
    pub fn positive_gens(&self) -> Vec<GenId> {
        (1..=self.top)
            .flat_map(|d| (0..self.summands[d].len()).map(move |i| (d, i)))
            .collect()
    }

    /// Normalized module underlying the algebra.
    pub fn module(&self) -> GradedModule {
        GradedModule::new(self.ring, self.top, self.summands.clone())
            .expect("summand lists are valid factor lists")
    }

    pub fn zero_element(&self, degree: usize) -> ModuleElement {
        ModuleElement::new(
            degree,
            vec![0; self.summands.get(degree).map_or(0, Vec::len)],
        )
    }

    pub fn basis_element(&self, g: GenId) -> ModuleElement {
        let mut e = self.zero_element(g.0);
        e.coords[g.1] = 1;
        e
    }

    fn reduce(&self, e: ModuleElement) -> ModuleElement {
        let degree = e.degree;
        e.reduced(self.ring, &self.summands[degree])
    }

    /// Structure constant of a generator pair, with the Koszul sign
    /// applied when the pair is reversed from storage order.
    pub fn gen_product(&self, a: GenId, b: GenId) -> ModuleElement {
        let d = a.0 + b.0;
        if d > self.top {
            return ModuleElement::new(d, Vec::new());
        }
        if a.0 == 0 || b.0 == 0 {
            // Degree-0 generators act as the scalar unit.
            let other = if a.0 == 0 { b } else { a };
            return self.basis_element(other);
        }
        let (key, swapped) = canonical_key(a, b);
        match self.products.get(&key) {
            None => self.zero_element(d),
            Some(v) => {
                let mut v = v.clone();
                if swapped && (a.0 * b.0) % 2 == 1 {
                    for c in &mut v.coords {
                        *c = -*c;
                    }
                }
                self.reduce(v)
            }
        }
    }

    /// Bilinear extension of the product table with Koszul signs.
    pub fn multiply(
        &self,
        x: &ModuleElement,
        y: &ModuleElement,
    ) -> Result<ModuleElement, EngineError> {
        self.check_element(x)?;
        self.check_element(y)?;
        let d = x.degree + y.degree;
        if d > self.top {
            return Ok(ModuleElement::new(d, Vec::new()));
        }
        let mut out = self.zero_element(d);
        for (i, &xi) in x.coords.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.coords.iter().enumerate() {
                if yj == 0 {
                    continue;
                }
                let gp = self.gen_product((x.degree, i), (y.degree, j));
                for (k, &c) in gp.coords.iter().enumerate() {
                    out.coords[k] += xi * yj * c;
                }
            }
        }
        Ok(self.reduce(out))
    }

    fn check_element(&self, e: &ModuleElement) -> Result<(), EngineError> {
        if e.degree > self.top {
            return Err(EngineError::DegreeOutOfRange {
                degree: e.degree,
                top: self.top,
            });
        }
        if e.coords.len() != self.summands[e.degree].len() {
            return Err(EngineError::CoordinateLength {
                degree: e.degree,
                got: e.coords.len(),
                want: self.summands[e.degree].len(),
            });
        }
        Ok(())
    }

    /// Checks the algebra axioms: unit in degree 0, canonical product
    /// keys, reduced targets inside the degree window, and associativity
    /// on all generator triples whose products stay within range.
    pub fn validate(&self) -> Result<(), EngineError> {
        if self.summands.len() != self.top + 1 || self.labels.len() != self.top + 1 {
            return Err(EngineError::Precondition(
                "summand/label lists must cover degrees 0..=top".into(),
            ));
        }
        for (d, (s, l)) in self.summands.iter().zip(&self.labels).enumerate() {
            if s.len() != l.len() {
                return Err(EngineError::Precondition(format!(
                    "labels and summands disagree in degree {d}"
                )));
            }
            for &q in s {
                if q < 0 || q == 1 {
                    return Err(EngineError::BadFactor(q));
                }
            }
        }
        if self.summands[0] != vec![0] {
            return Err(EngineError::Precondition(
                "degree 0 must be the free rank-1 unit summand".into(),
            ));
        }
        for (&(a, b), v) in &self.products {
            if a > b || a.0 == 0 || b.0 == 0 {
                return Err(EngineError::Precondition(
                    "product table keys must be canonical positive-degree pairs".into(),
                ));
            }
            let d = a.0 + b.0;
            if d > self.top {
                return Err(EngineError::Precondition(
                    "product table entry beyond the degree window".into(),
                ));
            }
            if v.degree != d || v.coords.len() != self.summands[d].len() {
                return Err(EngineError::Precondition(
                    "product table entry has wrong target shape".into(),
                ));
            }
            if a.1 >= self.summands[a.0].len() || b.1 >= self.summands[b.0].len() {
                return Err(EngineError::Precondition(
                    "product table references a missing generator".into(),
                ));
            }
        }
        // Squares of odd-degree generators must be 2-torsion.
        for g in self.positive_gens() {
            if g.0 % 2 == 1 && 2 * g.0 <= self.top {
                let sq = self.gen_product(g, g);
                let mut doubled = sq.clone();
                for c in &mut doubled.coords {
                    *c *= 2;
                }
                if !self.reduce(doubled).is_zero() {
                    return Err(EngineError::Precondition(format!(
                        "odd generator {} has a square that is not 2-torsion",
                        self.label(g)
                    )));
                }
            }
        }
        // Associativity on generator triples inside the window.
        let gens = self.positive_gens();
        for &a in &gens {
            for &b in &gens {
                for &c in &gens {
                    if a.0 + b.0 + c.0 > self.top {
                        continue;
                    }
                    let ab = self.gen_product(a, b);
                    let bc = self.gen_product(b, c);
                    let left = self.multiply(&ab, &self.basis_element(c))?;
                    let right = self.multiply(&self.basis_element(a), &bc)?;
                    if left != right {
                        return Err(EngineError::Precondition(format!(
                            "associativity fails on ({}, {}, {})",
                            self.label(a),
                            self.label(b),
                            self.label(c)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.module().euler_characteristic()
    }

    /// Appends generators and product entries, returning the new algebra
    /// and the positions of the appended generators.
    pub fn extended(
        &self,
        added: &[(usize, i64, String)],
        new_products: BTreeMap<(GenId, GenId), ModuleElement>,
    ) -> Result<(Self, Vec<GenId>), EngineError> {
        let mut summands = self.summands.clone();
        let mut labels = self.labels.clone();
        let mut positions = Vec::with_capacity(added.len());
        for (degree, factor, label) in added {
            if *degree > self.top {
                return Err(EngineError::DegreeOutOfRange {
                    degree: *degree,
                    top: self.top,
                });
            }
            summands[*degree].push(self.ring.normalize_factor(*factor));
            labels[*degree].push(label.clone());
            positions.push((*degree, summands[*degree].len() - 1));
        }
        let mut products: BTreeMap<(GenId, GenId), ModuleElement> = BTreeMap::new();
        // Old entries must be re-shaped to the widened target degrees.
        for (&key, v) in &self.products {
            let mut v = v.clone();
            v.coords.resize(summands[v.degree].len(), 0);
            products.insert(key, v);
        }
        for (key, v) in new_products {
            let mut v = v;
            v.coords.resize(summands[v.degree].len(), 0);
            if products.insert(key, v).is_some() {
                return Err(EngineError::Precondition(
                    "extension overwrites an existing product entry".into(),
                ));
            }
        }
        let alg = GradedAlgebra::from_parts(self.ring, self.top, summands, labels, products)?;
        Ok((alg, positions))
    }

    /// Removes the given generators (no product key may reference them);
    /// their coordinates are projected out of every product value.
    pub fn project_out(&self, removed: &BTreeSet<GenId>) -> Result<Self, EngineError> {
        for &(a, b) in self.products.keys() {
            if removed.contains(&a) || removed.contains(&b) {
                return Err(EngineError::Precondition(
                    "cannot remove a generator that appears in a product key".into(),
                ));
            }
        }
        let mut keep_index: Vec<Vec<Option<usize>>> = Vec::with_capacity(self.top + 1);
        let mut summands = Vec::with_capacity(self.top + 1);
        let mut labels = Vec::with_capacity(self.top + 1);
        for d in 0..=self.top {
            let mut idx = Vec::new();
            let mut s = Vec::new();
            let mut l = Vec::new();
            for i in 0..self.summands[d].len() {
                if removed.contains(&(d, i)) {
                    idx.push(None);
                } else {
                    idx.push(Some(s.len()));
                    s.push(self.summands[d][i]);
                    l.push(self.labels[d][i].clone());
                }
            }
            keep_index.push(idx);
            summands.push(s);
            labels.push(l);
        }
        let remap = |g: GenId| -> GenId { (g.0, keep_index[g.0][g.1].expect("kept generator")) };
        let mut products = BTreeMap::new();
        for (&(a, b), v) in &self.products {
            let mut coords = Vec::new();
            for (i, &c) in v.coords.iter().enumerate() {
                if keep_index[v.degree][i].is_some() {
                    coords.push(c);
                }
            }
            let nv = ModuleElement::new(v.degree, coords);
            if !nv.is_zero() {
                products.insert((remap(a), remap(b)), nv);
            }
        }
        GradedAlgebra::from_parts(self.ring, self.top, summands, labels, products)
    }

    /// Degrees above `maxdeg` are deleted and products landing beyond the
    /// window become zero.
    pub fn truncate_window(&self, maxdeg: usize) -> Result<Self, EngineError> {
        if maxdeg > self.top {
            return Err(EngineError::DegreeOutOfRange {
                degree: maxdeg,
                top: self.top,
            });
        }
        let summands = self.summands[..=maxdeg].to_vec();
        let labels = self.labels[..=maxdeg].to_vec();
        let products = self
            .products
            .iter()
            .filter(|(&(a, b), _)| a.0 + b.0 <= maxdeg)
            .map(|(k, v)| (*k, v.clone()))
            .collect();
        GradedAlgebra::from_parts(self.ring, maxdeg, summands, labels, products)
    }
}

/// Index from generator pairs of a Kunneth product to positions in the
/// tensor algebra.
pub struct PairIndex {
    map: BTreeMap<(GenId, GenId), GenId>,
}

impl PairIndex {
    pub fn get(&self, a: GenId, b: GenId) -> GenId {
        self.map[&(a, b)]
    }
}

/// Tensor product of two algebras with the sign-twisted product. The
/// factors must be torsion-free, or the ring a field.
pub fn kunneth_product(
    a: &GradedAlgebra,
    b: &GradedAlgebra,
) -> Result<(GradedAlgebra, PairIndex), EngineError> {
    if a.ring != b.ring {
        return Err(EngineError::RingMismatch(
            a.ring.to_string(),
            b.ring.to_string(),
        ));
    }
    let ring = a.ring;
    if !ring.is_field() {
        let torsion = (0..=a.top).any(|d| !a.module().torsion_factors(d).is_empty())
            || (0..=b.top).any(|d| !b.module().torsion_factors(d).is_empty());
        if torsion {
            return Err(EngineError::TorsionKunneth);
        }
    }
    let top = a.top + b.top;
    let mut summands = vec![Vec::new(); top + 1];
    let mut labels = vec![Vec::new(); top + 1];
    let mut map = BTreeMap::new();
    for d in 0..=top {
        for i in 0..=d.min(a.top) {
            let j = d - i;
            if j > b.top {
                continue;
            }
            for ia in 0..a.gen_count(i) {
                for jb in 0..b.gen_count(j) {
                    let pos = (d, summands[d].len());
                    summands[d].push(0);
                    labels[d].push(tensor_label(a.label((i, ia)), b.label((j, jb))));
                    map.insert(((i, ia), (j, jb)), pos);
                }
            }
        }
    }
    let index = PairIndex { map };
    let mut products: BTreeMap<(GenId, GenId), ModuleElement> = BTreeMap::new();
    let gens: Vec<((GenId, GenId), GenId)> = index.map.iter().map(|(&k, &v)| (k, v)).collect();
    for (idx1, &((a1, b1), g1)) in gens.iter().enumerate() {
        for &((a2, b2), g2) in &gens[idx1..] {
            if g1.0 == 0 || g2.0 == 0 || g1.0 + g2.0 > top {
                continue;
            }
            let (key, swapped) = canonical_key(g1, g2);
            let ((x1, y1), (x2, y2)) = if swapped {
                ((a2, b2), (a1, b1))
            } else {
                ((a1, b1), (a2, b2))
            };
            // (x1 (x) y1) * (x2 (x) y2) = (-1)^{|y1||x2|} x1 x2 (x) y1 y2
            let sign = if (y1.0 * x2.0) % 2 == 1 { -1 } else { 1 };
            let pa = a.gen_product(x1, x2);
            let pb = b.gen_product(y1, y2);
            if pa.coords.is_empty() || pb.coords.is_empty() {
                continue;
            }
            let d = key.0 .0 + key.1 .0;
            let mut out = ModuleElement::new(d, vec![0; summands[d].len()]);
            for (ai, &ac) in pa.coords.iter().enumerate() {
                if ac == 0 {
                    continue;
                }
                for (bi, &bc) in pb.coords.iter().enumerate() {
                    if bc == 0 {
                        continue;
                    }
                    let target = index.get((pa.degree, ai), (pb.degree, bi));
                    out.coords[target.1] += sign * ac * bc;
                }
            }
            let out = out.reduced(ring, &summands[d]);
            if !out.is_zero() {
                products.insert(key, out);
            }
        }
    }
    let alg = GradedAlgebra::from_parts(ring, top, summands, labels, products)?;
    Ok((alg, index))
}

fn tensor_label(a: &str, b: &str) -> String {
    match (a, b) {
        ("1", "1") => "1".into(),
        ("1", x) => x.into(),
        (x, "1") => x.into(),
        (x, y) => format!("{x}*{y}"),
    }
}

/// Positions of each side's generators inside a combined algebra.
pub struct SideIndex {
    pub left: BTreeMap<GenId, GenId>,
    pub right: BTreeMap<GenId, GenId>,
}

/// Connected sum of two closed-oriented-manifold-type algebras of formal
/// dimension n: degree 0 and n identified, middle degrees direct-summed,
/// cross products of positive classes zero, top pairings land on the
/// shared top class.
pub fn connected_sum(
    a: &GradedAlgebra,
    b: &GradedAlgebra,
    n: usize,
) -> Result<(GradedAlgebra, SideIndex), EngineError> {
    if a.ring != b.ring {
        return Err(EngineError::RingMismatch(
            a.ring.to_string(),
            b.ring.to_string(),
        ));
    }
    for (side, alg) in [("left", a), ("right", b)] {
        if alg.top != n {
            return Err(EngineError::DimensionMismatch(alg.top, n));
        }
        if alg.summands[n] != vec![0] {
            return Err(EngineError::Precondition(format!(
                "{side} operand lacks a single free top class"
            )));
        }
        let m = alg.module();
        for d in 0..=n {
            if m.rank(d) != m.rank(n - d) || !m.torsion_factors(d).is_empty() {
                return Err(EngineError::Precondition(format!(
                    "{side} operand is not a closed-manifold-type ring"
                )));
            }
        }
    }
    let ring = a.ring;
    let mut summands = vec![Vec::new(); n + 1];
    let mut labels = vec![Vec::new(); n + 1];
    summands[0].push(0);
    labels[0].push("1".into());
    let mut left = BTreeMap::new();
    let mut right = BTreeMap::new();
    left.insert((0, 0), (0, 0));
    right.insert((0, 0), (0, 0));
    for d in 1..n {
        for i in 0..a.gen_count(d) {
            left.insert((d, i), (d, summands[d].len()));
            summands[d].push(0);
            labels[d].push(format!("l.{}", a.label((d, i))));
        }
        for i in 0..b.gen_count(d) {
            right.insert((d, i), (d, summands[d].len()));
            summands[d].push(0);
            labels[d].push(format!("r.{}", b.label((d, i))));
        }
    }
    summands[n].push(0);
    labels[n].push("top".into());
    left.insert((n, 0), (n, 0));
    right.insert((n, 0), (n, 0));
    let index = SideIndex { left, right };

    let mut products = BTreeMap::new();
    for (alg, side) in [(a, &index.left), (b, &index.right)] {
        for (&(g1, g2), v) in &alg.products {
            let ng1 = side[&g1];
            let ng2 = side[&g2];
            let d = v.degree;
            let mut coords = vec![0i64; summands[d].len()];
            for (i, &c) in v.coords.iter().enumerate() {
                if c != 0 {
                    let t = side[&(d, i)];
                    coords[t.1] += c;
                }
            }
            let (key, swapped) = canonical_key(ng1, ng2);
            let mut out = ModuleElement::new(d, coords);
            if swapped && (ng1.0 * ng2.0) % 2 == 1 {
                for c in &mut out.coords {
                    *c = -*c;
                }
            }
            if !out.is_zero() {
                products.insert(key, out);
            }
        }
    }
    let alg = GradedAlgebra::from_parts(ring, n, summands, labels, products)?;
    Ok((alg, index))
}

/// Wedge of algebras inside degree range n: one shared unit, positive
/// parts direct-summed, cross-summand products zero.
pub fn wedge(
    parts: &[GradedAlgebra],
    n: usize,
    ring: CoefficientRing,
) -> Result<(GradedAlgebra, Vec<BTreeMap<GenId, GenId>>), EngineError> {
    let mut summands = vec![Vec::new(); n + 1];
    let mut labels = vec![Vec::new(); n + 1];
    summands[0].push(0);
    labels[0].push("1".into());
    let mut maps = Vec::with_capacity(parts.len());
    for (k, part) in parts.iter().enumerate() {
        if part.ring != ring {
            return Err(EngineError::RingMismatch(
                part.ring.to_string(),
                ring.to_string(),
            ));
        }
        if part.top > n {
            return Err(EngineError::DegreeOutOfRange {
                degree: part.top,
                top: n,
            });
        }
        let mut map = BTreeMap::new();
        map.insert((0, 0), (0, 0));
        for d in 1..=part.top {
            for i in 0..part.gen_count(d) {
                map.insert((d, i), (d, summands[d].len()));
                summands[d].push(part.summands[d][i]);
                labels[d].push(format!("w{k}.{}", part.label((d, i))));
            }
        }
        maps.push(map);
    }
    let mut products = BTreeMap::new();
    for (part, map) in parts.iter().zip(&maps) {
        for (&(g1, g2), v) in &part.products {
            let ng1 = map[&g1];
            let ng2 = map[&g2];
            let d = v.degree;
            let mut coords = vec![0i64; summands[d].len()];
            for (i, &c) in v.coords.iter().enumerate() {
                if c != 0 {
                    coords[map[&(d, i)].1] += c;
                }
            }
            let (key, swapped) = canonical_key(ng1, ng2);
            let mut out = ModuleElement::new(d, coords);
            if swapped && (ng1.0 * ng2.0) % 2 == 1 {
                for c in &mut out.coords {
                    *c = -*c;
                }
            }
            if !out.is_zero() {
                products.insert(key, out);
            }
        }
    }
    let alg = GradedAlgebra::from_parts(ring, n, summands, labels, products)?;
    Ok((alg, maps))
}

/// Outcome of the bounded unit-free-generator closure search.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ClosureOutcome {
    Pass,
    Witness {
        left: ModuleElement,
        right: ModuleElement,
        product: ModuleElement,
    },
}

/// Enumerates unit free generators with coordinates in [-bound, bound]
/// per degree and searches for a pair with degree sum below `n` whose
/// product is nonzero and not a UFG. Any witness found is conclusive;
/// `Pass` means no witness exists within the bound.
pub fn ufg_closure_check(alg: &GradedAlgebra, n: usize, bound: i64) -> ClosureOutcome {
    assert!(bound >= 1);
    let mut ufgs_by_degree: Vec<Vec<ModuleElement>> = Vec::new();
    let max_degree = n.saturating_sub(2).min(alg.top);
    for d in 0..=max_degree {
        if d == 0 {
            ufgs_by_degree.push(Vec::new());
            continue;
        }
        ufgs_by_degree.push(enumerate_ufgs(alg, d, bound));
    }
    for d1 in 1..=max_degree {
        for d2 in d1..=max_degree {
            if d1 + d2 >= n || d1 + d2 > alg.top {
                continue;
            }
            let module = single_degree_module(alg, d1 + d2);
            for x in &ufgs_by_degree[d1] {
                let start = if d1 == d2 {
                    position_of(&ufgs_by_degree[d2], x)
                } else {
                    0
                };
                for y in ufgs_by_degree[d2][start..].iter() {
                    let p = alg.multiply(x, y).expect("elements are well formed");
                    if p.is_zero() {
                        continue;
                    }
                    if !is_ufg(&p, &module).expect("product is well formed") {
                        return ClosureOutcome::Witness {
                            left: x.clone(),
                            right: y.clone(),
                            product: p,
                        };
                    }
                }
            }
        }
    }
    ClosureOutcome::Pass
}

fn position_of(list: &[ModuleElement], x: &ModuleElement) -> usize {
    list.iter().position(|e| e == x).unwrap_or(0)
}

fn single_degree_module(alg: &GradedAlgebra, degree: usize) -> GradedModule {
    let mut raw = vec![Vec::new(); degree + 1];
    raw[degree] = alg.summands[degree].clone();
    GradedModule::new(alg.ring, degree, raw).expect("valid factors")
}

/// All UFGs of one degree with coordinates in the box, one representative
/// per sign pair.
fn enumerate_ufgs(alg: &GradedAlgebra, degree: usize, bound: i64) -> Vec<ModuleElement> {
    let factors = alg.summands[degree].clone();
    let k = factors.len();
    if k == 0 {
        return Vec::new();
    }
    let module = single_degree_module(alg, degree);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut coords = vec![-bound; k];
    loop {
        let e = ModuleElement::new(degree, coords.clone()).reduced(alg.ring, &factors);
        let canonical = {
            let mut neg = e.clone();
            for c in &mut neg.coords {
                *c = -*c;
            }
            let neg = neg.reduced(alg.ring, &factors);
            std::cmp::min(e.coords.clone(), neg.coords.clone())
        };
        if seen.insert(canonical.clone()) {
            let cand = ModuleElement::new(degree, canonical);
            if is_ufg(&cand, &module).expect("well formed") {
                out.push(cand);
            }
        }
        // advance
        let mut pos = 0;
        loop {
            if pos == k {
                return out;
            }
            if coords[pos] < bound {
                coords[pos] += 1;
                break;
            }
            coords[pos] = -bound;
            pos += 1;
        }
    }
}

/// Invariant factors of the degree-pair product map on free parts: rows
/// are free generators of degree i, columns are (free generator of
/// degree j, free generator of degree i+j) pairs, entries the structure
/// constants. Basis independent by Smith normal form.
pub fn pairing_profile(alg: &GradedAlgebra, i: usize, j: usize) -> Vec<i64> {
    let free = |d: usize| -> Vec<usize> {
        alg.summands[d]
            .iter()
            .enumerate()
            .filter(|(_, &q)| q == 0)
            .map(|(k, _)| k)
            .collect()
    };
    if i + j > alg.top {
        return Vec::new();
    }
    let rows_idx = free(i);
    let cols_j = free(j);
    let cols_t = free(i + j);
    if rows_idx.is_empty() || cols_j.is_empty() || cols_t.is_empty() {
        return Vec::new();
    }
    let mut rows = Vec::with_capacity(rows_idx.len());
    for &a in &rows_idx {
        let mut row = Vec::with_capacity(cols_j.len() * cols_t.len());
        for &b in &cols_j {
            let p = alg.gen_product((i, a), (j, b));
            for &t in &cols_t {
                row.push(p.coords[t]);
            }
        }
        rows.push(row);
    }
    let snf = smith_normal_form(&IntMat::from_rows(rows));
    snf.nonzero_factors()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> CoefficientRing {
        CoefficientRing::Integers
    }

    /// H^*(S^d).
    pub fn sphere_ring(d: usize) -> GradedAlgebra {
        let mut summands = vec![Vec::new(); d + 1];
        let mut labels = vec![Vec::new(); d + 1];
        summands[0].push(0);
        labels[0].push("1".into());
        summands[d].push(0);
        labels[d].push("s".into());
        GradedAlgebra::from_parts(z(), d, summands, labels, BTreeMap::new()).unwrap()
    }

    /// H^*(T^2) with x*y = top.
    pub fn torus_ring() -> GradedAlgebra {
        let summands = vec![vec![0], vec![0, 0], vec![0]];
        let labels = vec![
            vec!["1".into()],
            vec!["x".into(), "y".into()],
            vec!["t".into()],
        ];
        let mut products = BTreeMap::new();
        products.insert(((1, 0), (1, 1)), ModuleElement::new(2, vec![1]));
        GradedAlgebra::from_parts(z(), 2, summands, labels, products).unwrap()
    }

    #[test]
    fn unit_multiplication() {
        let t = torus_ring();
        let x = t.basis_element((1, 0));
        let unit = t.basis_element((0, 0));
        assert_eq!(t.multiply(&unit, &x).unwrap(), x);
    }

    #[test]
    fn koszul_sign() {
        let t = torus_ring();
        let xy = t.gen_product((1, 0), (1, 1));
        let yx = t.gen_product((1, 1), (1, 0));
        assert_eq!(xy.coords, vec![1]);
        assert_eq!(yx.coords, vec![-1]);
    }

    #[test]
    fn window_rule() {
        let t = torus_ring();
        let x = t.basis_element((1, 0));
        let top = t.basis_element((2, 0));
        let p = t.multiply(&x, &top).unwrap();
        assert!(p.is_zero());
        assert_eq!(p.degree, 3);
    }

    #[test]
    fn kunneth_s2_s1() {
        let (alg, _) = kunneth_product(&sphere_ring(2), &sphere_ring(1)).unwrap();
        let m = alg.module();
        assert_eq!(
            (0..=3).map(|d| m.rank(d)).collect::<Vec<_>>(),
            vec![1, 1, 1, 1]
        );
        // u * v = top
        let p = alg.gen_product((2, 0), (1, 0));
        assert_eq!(p.coords.iter().map(|c| c.abs()).sum::<i64>(), 1);
    }

    #[test]
    fn kunneth_s2_s2() {
        let (alg, _) = kunneth_product(&sphere_ring(2), &sphere_ring(2)).unwrap();
        let m = alg.module();
        assert_eq!(
            (0..=4).map(|d| m.rank(d)).collect::<Vec<_>>(),
            vec![1, 0, 2, 0, 1]
        );
        let u1u2 = alg.gen_product((2, 0), (2, 1));
        assert_eq!(u1u2.coords.iter().map(|c| c.abs()).sum::<i64>(), 1);
        assert!(alg.gen_product((2, 0), (2, 0)).is_zero());
        assert!(alg.gen_product((2, 1), (2, 1)).is_zero());
    }

    #[test]
    fn kunneth_point_identity() {
        let s2 = sphere_ring(2);
        let (alg, _) = kunneth_product(&s2, &GradedAlgebra::point_ring(z())).unwrap();
        assert!(alg.module().is_isomorphic(&s2.module()).unwrap());
    }

    #[test]
    fn connected_sum_tori() {
        let t = torus_ring();
        let (alg, idx) = connected_sum(&t, &t, 2).unwrap();
        let m = alg.module();
        assert_eq!(m.rank(1), 4);
        assert_eq!(m.rank(2), 1);
        let x1 = idx.left[&(1, 0)];
        let y1 = idx.left[&(1, 1)];
        let x2 = idx.right[&(1, 0)];
        assert_eq!(alg.gen_product(x1, y1).coords, vec![1]);
        assert!(alg.gen_product(x1, x2).is_zero());
    }

    #[test]
    fn sphere_is_connected_sum_identity() {
        let t = torus_ring();
        let (alg, _) = connected_sum(&t, &sphere_ring(2), 2).unwrap();
        assert!(alg.module().is_isomorphic(&t.module()).unwrap());
        assert_eq!(pairing_profile(&alg, 1, 1), pairing_profile(&t, 1, 1));
    }

    #[test]
    fn connected_sum_s2xs2_pairing() {
        let (p, _) = kunneth_product(&sphere_ring(2), &sphere_ring(2)).unwrap();
        let (alg, _) = connected_sum(&p, &p, 4).unwrap();
        assert_eq!(alg.module().rank(2), 4);
        assert_eq!(pairing_profile(&alg, 2, 2), vec![1, 1, 1, 1]);
    }

    #[test]
    fn wedge_examples() {
        let s3 = sphere_ring(3);
        let (alg, _) = wedge(&[s3.clone(), s3], 3, z()).unwrap();
        let m = alg.module();
        assert_eq!(m.rank(0), 1);
        assert_eq!(m.rank(3), 2);
        for g in alg.positive_gens() {
            for h in alg.positive_gens() {
                assert!(alg.gen_product(g, h).is_zero());
            }
        }

        // wedge with the point ring changes nothing
        let t = torus_ring();
        let (alg, _) = wedge(&[t.clone(), GradedAlgebra::point_ring(z())], 2, z()).unwrap();
        assert!(alg.module().is_isomorphic(&t.module()).unwrap());

        // ranks (1,1,2,1) with only the S2xS1-internal product surviving
        let (s2xs1, _) = kunneth_product(&sphere_ring(2), &sphere_ring(1)).unwrap();
        let (alg, maps) = wedge(&[sphere_ring(2), s2xs1], 3, z()).unwrap();
        let m = alg.module();
        assert_eq!(
            (0..=3).map(|d| m.rank(d)).collect::<Vec<_>>(),
            vec![1, 1, 2, 1]
        );
        let u = maps[1][&(2, 0)];
        let v = maps[1][&(1, 0)];
        assert!(!alg.gen_product(u, v).is_zero());
        let lone = maps[0][&(2, 0)];
        assert!(alg.gen_product(lone, v).is_zero());
    }

    #[test]
    fn truncation() {
        let t = torus_ring();
        let full = t.truncate_window(2).unwrap();
        assert_eq!(full, t);
        let cut = t.truncate_window(1).unwrap();
        assert_eq!(cut.top_degree(), 1);
        assert_eq!(cut.module().rank(1), 2);
        for g in cut.positive_gens() {
            for h in cut.positive_gens() {
                assert!(cut.gen_product(g, h).is_zero());
            }
        }
        // idempotent
        assert_eq!(cut.truncate_window(1).unwrap(), cut);
    }

    #[test]
    fn closure_wedge_of_spheres_passes() {
        let (alg, _) = wedge(&[sphere_ring(3), sphere_ring(2)], 5, z()).unwrap();
        assert_eq!(ufg_closure_check(&alg, 6, 2), ClosureOutcome::Pass);
    }

    // The hyperbolic degree-1 pairing of the torus provides a genuine
    // witness: (x+y)(x-y) = -2xy, a non-unit multiple of the top class,
    // while both factors are unit free generators.
    #[test]
    fn closure_torus_has_hyperbolic_witness() {
        let t = torus_ring();
        match ufg_closure_check(&t, 3, 1) {
            ClosureOutcome::Witness { product, .. } => {
                assert_eq!(product.coords[0].abs(), 2);
            }
            ClosureOutcome::Pass => panic!("expected the hyperbolic witness"),
        }
    }

    #[test]
    fn closure_monotone_in_bound() {
        let t = torus_ring();
        for c in 1..=3 {
            assert!(matches!(
                ufg_closure_check(&t, 3, c),
                ClosureOutcome::Witness { .. }
            ));
        }
        let (w, _) = wedge(&[sphere_ring(3)], 4, z()).unwrap();
        for c in 1..=3 {
            assert_eq!(ufg_closure_check(&w, 4, c), ClosureOutcome::Pass);
        }
    }

    #[test]
    fn torus_pairing_profile() {
        // SNF of the 2x2 pairing-to-top matrix [[0,1],[-1,0]].
        assert_eq!(pairing_profile(&torus_ring(), 1, 1), vec![1, 1]);
    }

    #[test]
    fn euler_characteristics_add_up() {
        let t = torus_ring();
        let (cs, _) = connected_sum(&t, &t, 2).unwrap();
        // chi(A # B) = chi(A) + chi(B) - (1 + (-1)^n)
        assert_eq!(
            cs.euler_characteristic(),
            t.euler_characteristic() + t.euler_characteristic() - 2
        );
        let s2 = sphere_ring(2);
        let (w, _) = wedge(&[s2.clone(), s2.clone(), s2], 2, z()).unwrap();
        // chi(wedge) = sum chi - (k - 1)
        assert_eq!(w.euler_characteristic(), 3 * 2 - 2);
    }
}
