//! Gluing of linear data along a surjection of finite sets, and the
//! obstruction to lifting a free action to a central extension.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;

use crate::cyclo::{to_sparse, Cyclo, CycloField, CycloMatrix, Echelon};
use crate::error::{invalid, violated, Result};
use crate::finabel::{Element, Subgroup};
use crate::forms::QZ;
use crate::heisenberg::{splitting_of_extension, CentralExtension};

/// A surjection `total -> base` of finite sets, with its fiber products.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Covering {
    map: Vec<usize>,
    base_size: usize,
    fibers: Vec<Vec<usize>>,
}

impl Covering {
    pub fn new(map: Vec<usize>, base_size: usize) -> Result<Self> {
        let mut fibers = vec![Vec::new(); base_size];
        for (s, &b) in map.iter().enumerate() {
            if b >= base_size {
                return invalid(format!("point {s} maps to {b}, outside a base of size {base_size}"));
            }
            fibers[b].push(s);
        }
        if let Some(b) = fibers.iter().position(Vec::is_empty) {
            return invalid(format!("the map is not surjective: base point {b} has an empty fiber"));
        }
        Ok(Covering { map, base_size, fibers })
    }

    /// The identity covering of a set of the given size.
    pub fn trivial(size: usize) -> Self {
        Covering::new((0..size).collect(), size).expect("identity is surjective")
    }

    pub fn total_size(&self) -> usize {
        self.map.len()
    }

    pub fn base_size(&self) -> usize {
        self.base_size
    }

    pub fn image(&self, s: usize) -> usize {
        self.map[s]
    }

    pub fn fiber(&self, b: usize) -> &[usize] {
        &self.fibers[b]
    }

    /// `total x_base total`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.fibers
            .iter()
            .flat_map(|fib| fib.iter().flat_map(move |&a| fib.iter().map(move |&b| (a, b))))
    }

    /// `total x_base total x_base total`.
    pub fn triples(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.fibers.iter().flat_map(|fib| {
            fib.iter()
                .flat_map(move |&a| fib.iter().flat_map(move |&b| fib.iter().map(move |&c| (a, b, c))))
        })
    }
}

/// A vector `values[s]` at every point of the total set together with
/// isomorphisms `transitions[(s, t)]: V_s -> V_t` over the pair fiber product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescentDatum {
    pub field: Arc<CycloField>,
    pub values: Vec<Vec<Cyclo>>,
    pub transitions: BTreeMap<(usize, usize), CycloMatrix>,
}

impl DescentDatum {
    pub fn transition(&self, s: usize, t: usize) -> &CycloMatrix {
        &self.transitions[&(s, t)]
    }

    pub fn dim(&self, s: usize) -> usize {
        self.values[s].len()
    }

    /// Shapes and completeness of the transitions.
    pub fn check_shape(&self, c: &Covering) -> Result<()> {
        if self.values.len() != c.total_size() {
            return invalid(format!(
                "{} vectors given for {} points",
                self.values.len(),
                c.total_size()
            ));
        }
        for (s, t) in c.pairs() {
            let Some(f) = self.transitions.get(&(s, t)) else {
                return invalid(format!("missing transition for the pair ({s}, {t})"));
            };
            if f.rows() != self.dim(t) || f.cols() != self.dim(s) {
                return invalid(format!("transition ({s}, {t}) has the wrong shape"));
            }
        }
        if let Some(&(s, t)) = self.transitions.keys().find(|(s, t)| {
            *s >= c.total_size() || *t >= c.total_size() || c.image(*s) != c.image(*t)
        }) {
            return invalid(format!("transition given for ({s}, {t}), which is not in the fiber product"));
        }
        Ok(())
    }

    /// Whether every transition carries the vector at its source to the
    /// vector at its target.
    pub fn check_vectors(&self, c: &Covering) -> Result<()> {
        for (s, t) in c.pairs() {
            if self.transition(s, t).apply(&self.values[s]) != self.values[t] {
                return invalid(format!("transition ({s}, {t}) does not carry the vector at {s} to the one at {t}"));
            }
        }
        Ok(())
    }
}

/// The first triple `(a, b, c)` with `f_{b,c} f_{a,b} != f_{a,c}`.
pub fn cocycle_witness(c: &Covering, d: &DescentDatum) -> Option<(usize, usize, usize)> {
    c.triples()
        .find(|&(a, b, t)| d.transition(b, t).mul(d.transition(a, b)) != *d.transition(a, t))
}

/// Base data pulled back along the covering, with identity transitions.
pub fn pullback(c: &Covering, field: &Arc<CycloField>, base_values: &[Vec<Cyclo>]) -> Result<DescentDatum> {
    if base_values.len() != c.base_size() {
        return invalid("one vector per base point is required");
    }
    let values: Vec<Vec<Cyclo>> = (0..c.total_size())
        .map(|s| base_values[c.image(s)].iter().map(|x| x.embed(field)).collect())
        .collect();
    let transitions = c
        .pairs()
        .map(|(s, t)| ((s, t), CycloMatrix::identity(field, values[s].len())))
        .collect();
    Ok(DescentDatum {
        field: field.clone(),
        values,
        transitions,
    })
}

/// The glued object: a vector per base point, the fiber point it was read
/// from, and the comparison maps `f_{chosen, s}` from the pullback to the datum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GluedObject {
    pub values: Vec<Vec<Cyclo>>,
    pub chosen: Vec<usize>,
}

impl GluedObject {
    pub fn comparison(&self, c: &Covering, d: &DescentDatum, s: usize) -> CycloMatrix {
        d.transition(self.chosen[c.image(s)], s).clone()
    }
}

/// Glues using the first point of every fiber.
pub fn solve_descent(c: &Covering, d: &DescentDatum) -> Result<GluedObject> {
    let chosen: Vec<usize> = (0..c.base_size()).map(|b| c.fiber(b)[0]).collect();
    solve_descent_at(c, d, &chosen)
}

/// Glues by reading the value at `chosen[b]` over every base point `b`, and
/// checks that the comparison maps form an isomorphism of descent data.
pub fn solve_descent_at(c: &Covering, d: &DescentDatum, chosen: &[usize]) -> Result<GluedObject> {
    d.check_shape(c)?;
    if let Some((a, b, t)) = cocycle_witness(c, d) {
        return invalid(format!("cocycle condition fails on the triple ({a}, {b}, {t})"));
    }
    d.check_vectors(c)?;
    if chosen.len() != c.base_size() || chosen.iter().enumerate().any(|(b, &s)| s >= c.total_size() || c.image(s) != b) {
        return invalid("the chosen points must lie in their fibers");
    }
    let glued = GluedObject {
        values: chosen.iter().map(|&s| d.values[s].clone()).collect(),
        chosen: chosen.to_vec(),
    };
    for (s, t) in c.pairs() {
        let lhs = d.transition(s, t).mul(&glued.comparison(c, d, s));
        if lhs != glued.comparison(c, d, t) {
            return violated(format!("comparison maps do not commute with the transition ({s}, {t})"));
        }
    }
    for s in 0..c.total_size() {
        let phi = glued.comparison(c, d, s);
        if phi.det().is_zero() || phi.apply(&glued.values[c.image(s)]) != d.values[s] {
            return violated(format!("comparison at {s} is not an isomorphism of the data"));
        }
    }
    Ok(glued)
}

/// Dimensions of the morphism spaces of descent data and of glued objects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FaithfulnessReport {
    pub descent_dimension: usize,
    pub glued_dimension: usize,
    /// Restricting a morphism of descent data to the chosen points is injective.
    pub restriction_injective: bool,
}

impl FaithfulnessReport {
    pub fn holds(&self) -> bool {
        self.descent_dimension == self.glued_dimension && self.restriction_injective
    }
}

/// Solves `h_t f1_{s,t} = f2_{s,t} h_s` for families of linear maps
/// `h_s: V1_s -> V2_s` and compares with `sum_b dim G1(b) dim G2(b)`.
pub fn verify_full_faithfulness(c: &Covering, d1: &DescentDatum, d2: &DescentDatum) -> Result<FaithfulnessReport> {
    let g1 = solve_descent(c, d1)?;
    solve_descent(c, d2)?;
    let f = if d1.field.order() >= d2.field.order() { &d1.field } else { &d2.field };
    // unknown block of h_s starts at offset[s], row-major d2 x d1
    let mut offset = Vec::with_capacity(c.total_size() + 1);
    offset.push(0);
    for s in 0..c.total_size() {
        offset.push(offset[s] + d1.dim(s) * d2.dim(s));
    }
    let n = offset[c.total_size()];
    let var = |s: usize, i: usize, j: usize| offset[s] + i * d1.dim(s) + j;
    let mut ech = Echelon::new(n);
    for (s, t) in c.pairs() {
        let a = d1.transition(s, t);
        let b = d2.transition(s, t);
        // entry (i, j) of h_t a - b h_s, with i < dim2(t), j < dim1(s)
        for i in 0..d2.dim(t) {
            for j in 0..d1.dim(s) {
                let mut row = vec![Cyclo::zero(f); n];
                for k in 0..d1.dim(t) {
                    let v = var(t, i, k);
                    row[v] = &row[v] + &a.get(k, j).embed(f);
                }
                for k in 0..d2.dim(s) {
                    let v = var(s, k, j);
                    row[v] = &row[v] - &b.get(i, k).embed(f);
                }
                ech.insert(to_sparse(&row));
            }
        }
    }
    let basis = ech.nullspace(f);
    let mut restricted = Echelon::new(n);
    let chosen_vars: Vec<usize> = g1
        .chosen
        .iter()
        .flat_map(|&s| offset[s]..offset[s + 1])
        .collect();
    let mut rank = 0;
    for v in &basis {
        let r: Vec<Cyclo> = chosen_vars.iter().map(|&k| v[k].clone()).collect();
        if restricted.insert(to_sparse(&r)) {
            rank += 1;
        }
    }
    let glued_dimension = g1
        .chosen
        .iter()
        .map(|&s| d1.dim(s) * d2.dim(s))
        .sum();
    Ok(FaithfulnessReport {
        descent_dimension: basis.len(),
        glued_dimension,
        restriction_injective: rank == basis.len(),
    })
}

/// A small random invertible matrix: unit lower times unit upper triangular,
/// with a random permutation of rows.
pub fn random_invertible(f: &Arc<CycloField>, n: usize, rng: &mut impl Rng) -> CycloMatrix {
    let order = f.order() as i64;
    let entry = |rng: &mut _| random_cyclo(f, order, rng);
    let lower = CycloMatrix::from_fn(f, n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Greater => entry(rng),
        std::cmp::Ordering::Equal => Cyclo::one(f),
        std::cmp::Ordering::Less => Cyclo::zero(f),
    });
    let upper = CycloMatrix::from_fn(f, n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Less => entry(rng),
        std::cmp::Ordering::Equal => Cyclo::root(f, rng.gen_range(0..order)),
        std::cmp::Ordering::Greater => Cyclo::zero(f),
    });
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    let p = CycloMatrix::from_fn(f, n, n, |i, j| if perm[i] == j { Cyclo::one(f) } else { Cyclo::zero(f) });
    p.mul(&lower).mul(&upper)
}

fn random_cyclo(f: &Arc<CycloField>, order: i64, rng: &mut impl Rng) -> Cyclo {
    let c = rng.gen_range(-2..=2);
    &Cyclo::from_int(f, c) * &Cyclo::root(f, rng.gen_range(0..order))
}

pub fn random_vector(f: &Arc<CycloField>, n: usize, rng: &mut impl Rng) -> Vec<Cyclo> {
    let order = f.order() as i64;
    (0..n).map(|_| random_cyclo(f, order, rng)).collect()
}

/// A random surjection onto at most `max_base` points, fibers of size at
/// most `max_fiber`.
pub fn random_covering(max_base: usize, max_fiber: usize, rng: &mut impl Rng) -> Covering {
    let base = rng.gen_range(1..=max_base);
    let mut map: Vec<usize> = Vec::new();
    for b in 0..base {
        for _ in 0..rng.gen_range(1..=max_fiber) {
            map.push(b);
        }
    }
    for i in (1..map.len()).rev() {
        map.swap(i, rng.gen_range(0..=i));
    }
    Covering::new(map, base).expect("every base point received a point")
}

/// Base vectors transported by random isomorphisms `g_s`, with
/// transitions `g_t g_s^{-1}`; such data always satisfy the cocycle identity.
pub fn random_datum(c: &Covering, f: &Arc<CycloField>, base_values: &[Vec<Cyclo>], rng: &mut impl Rng) -> DescentDatum {
    let g: Vec<CycloMatrix> = (0..c.total_size())
        .map(|s| random_invertible(f, base_values[c.image(s)].len(), rng))
        .collect();
    let inv: Vec<CycloMatrix> = g.iter().map(|m| m.inverse().expect("invertible by construction")).collect();
    let values = (0..c.total_size()).map(|s| g[s].apply(&base_values[c.image(s)])).collect();
    let transitions = c.pairs().map(|(s, t)| ((s, t), g[t].mul(&inv[s]))).collect();
    DescentDatum {
        field: f.clone(),
        values,
        transitions,
    }
}

/// A finite set with a right action of the base group `Q` of an extension;
/// `action[x][j]` is `x . u_j` for the `j`-th element of `Q` in
/// enumeration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSet {
    pub action: Vec<Vec<usize>>,
}

impl QSet {
    /// `Q` acting on itself by translation.
    pub fn regular(q: &crate::finabel::Group) -> Self {
        let elems: Vec<Element> = q.elements().collect();
        QSet {
            action: elems.iter().map(|x| elems.iter().map(|u| q.index_of(&q.add(x, u))).collect()).collect(),
        }
    }

    /// Disjoint union of `copies` regular orbits.
    pub fn free(q: &crate::finabel::Group, copies: usize) -> Self {
        let one = Self::regular(q);
        let n = one.action.len();
        let action = (0..copies)
            .flat_map(|c| one.action.iter().map(move |row| row.iter().map(|&y| y + c * n).collect()))
            .collect();
        QSet { action }
    }
}

/// A function `lambda(x, u)` with
/// `lambda(x, u + u') = lambda(x, u) + lambda(x . u, u') + c(u, u')`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftingWitness {
    pub lambda: Vec<Vec<QZ>>,
}

/// Looks for a lifting that is invariant under the action, i.e.
/// `lambda(x, u) = lambda(u)`. Without that requirement a lifting always
/// exists on a free action (take the extension itself as the torsor), so
/// invariance is what makes the commutator an obstruction.
pub fn torsor_lift_obstruction(ext: &CentralExtension, e: &QSet) -> Result<Option<LiftingWitness>> {
    let q = ext.base();
    let elems: Vec<Element> = q.elements().collect();
    let tables = GroupTables::new(ext, &elems);
    check_free_action(q, &elems, &tables, e)?;
    // lambda(g) solves q_g lambda(g) + sum_{k<q_g} c(k g, g) = 0 for each generator
    let gens: Vec<usize> = (0..q.rank()).map(|i| q.index_of(&q.generator(i))).collect();
    let choices: Vec<Vec<QZ>> = gens
        .iter()
        .zip(q.factors())
        .map(|(&g, &ord)| {
            let mut total = QZ::ZERO;
            let mut multiple = q.index_of(&q.zero());
            for _ in 0..ord {
                total += tables.cocycle[multiple][g];
                multiple = tables.sum[multiple][g];
            }
            let base = (-total).div_int(ord);
            (0..ord).map(|k| base + QZ::new(k, ord)).collect()
        })
        .collect();
    let mut pick = vec![0usize; gens.len()];
    loop {
        let values: Vec<QZ> = pick.iter().enumerate().map(|(i, &k)| choices[i][k]).collect();
        if let Some(lambda) = tables.rigid_candidate(q.index_of(&q.zero()), &gens, &values) {
            let witness = LiftingWitness {
                lambda: vec![lambda; e.action.len()],
            };
            if !lifting_holds(ext, &elems, e, &witness) {
                return violated("an invariant lifting failed the lifting identity");
            }
            return Ok(Some(witness));
        }
        let mut i = 0;
        loop {
            if i == gens.len() {
                return Ok(None);
            }
            pick[i] += 1;
            if pick[i] < choices[i].len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
    }
}

fn check_free_action(q: &crate::finabel::Group, elems: &[Element], tables: &GroupTables, e: &QSet) -> Result<()> {
    let n = e.action.len();
    let zero = q.index_of(&q.zero());
    for (x, row) in e.action.iter().enumerate() {
        if row.len() != elems.len() || row.iter().any(|&y| y >= n) {
            return invalid(format!("action row of point {x} is malformed"));
        }
        if row[zero] != x {
            return invalid(format!("the identity moves point {x}"));
        }
        if let Some(j) = (0..elems.len()).find(|&j| j != zero && row[j] == x) {
            return invalid(format!("the action is not free: {} fixes point {x}", elems[j]));
        }
        // compatibility with generators suffices: (x.u).g = x.(u+g) for all u
        // gives (x.u).v = x.(u+v) by induction on v
        for (i, u) in elems.iter().enumerate() {
            for g in 0..q.rank() {
                let j = q.index_of(&q.generator(g));
                if e.action[row[i]][j] != row[tables.sum[i][j]] {
                    return invalid(format!("not an action: (x.{u}).{} != x.({u}+{}) at x = {x}", elems[j], elems[j]));
                }
            }
        }
    }
    Ok(())
}

/// Enumeration position of `u + v`.
fn sum_index(factors: &[i64], u: &Element, v: &Element) -> usize {
    factors
        .iter()
        .zip(u.coords.iter().zip(&v.coords))
        .fold(0usize, |acc, (&d, (&a, &b))| acc * d as usize + ((a + b) % d) as usize)
}

/// Addition and cocycle tables indexed by enumeration position.
struct GroupTables {
    sum: Vec<Vec<usize>>,
    cocycle: Vec<Vec<QZ>>,
}

impl GroupTables {
    fn new(ext: &CentralExtension, elems: &[Element]) -> Self {
        let q = ext.base();
        // c(u, v) = (sum u_i v_j m_ij mod N) / N with N a common denominator
        let n = q.exponent().max(1);
        let m: Vec<Vec<i64>> = ext
            .cocycle()
            .gram()
            .iter()
            .map(|row| row.iter().map(|g| g.as_multiple_of(n).expect("values killed by the exponent")).collect())
            .collect();
        let eval = |u: &Element, v: &Element| {
            let mut acc = 0i64;
            for (i, row) in m.iter().enumerate() {
                for (j, &mij) in row.iter().enumerate() {
                    acc = (acc + u.coords[i] * v.coords[j] * mij).rem_euclid(n);
                }
            }
            QZ::new(acc, n)
        };
        GroupTables {
            sum: elems.iter().map(|u| elems.iter().map(|v| sum_index(q.factors(), u, v)).collect()).collect(),
            cocycle: elems.iter().map(|u| elems.iter().map(|v| eval(u, v)).collect()).collect(),
        }
    }

    /// Extends generator values by `lambda(u + g) = lambda(u) + lambda(g) + c(u, g)`
    /// and keeps the result if it satisfies the identity on every pair.
    fn rigid_candidate(&self, zero: usize, gens: &[usize], values: &[QZ]) -> Option<Vec<QZ>> {
        let n = self.sum.len();
        let mut lambda: Vec<Option<QZ>> = vec![None; n];
        let mut queue = std::collections::VecDeque::from([zero]);
        lambda[zero] = Some(QZ::ZERO);
        while let Some(u) = queue.pop_front() {
            let lu = lambda[u].expect("visited");
            for (&g, &lg) in gens.iter().zip(values) {
                let w = self.sum[u][g];
                let lw = lu + lg + self.cocycle[u][g];
                match lambda[w] {
                    Some(old) if old != lw => return None,
                    Some(_) => {}
                    None => {
                        lambda[w] = Some(lw);
                        queue.push_back(w);
                    }
                }
            }
        }
        let lambda: Vec<QZ> = lambda.into_iter().map(|v| v.expect("generators reach everything")).collect();
        let ok = (0..n).all(|i| (0..n).all(|j| lambda[self.sum[i][j]] == lambda[i] + lambda[j] + self.cocycle[i][j]));
        ok.then_some(lambda)
    }
}

fn lifting_holds(
    ext: &CentralExtension,
    elems: &[Element],
    e: &QSet,
    w: &LiftingWitness,
) -> bool {
    let q = ext.base();
    (0..e.action.len()).all(|x| {
        elems.iter().enumerate().all(|(i, u)| {
            elems.iter().enumerate().all(|(j, v)| {
                let lhs = w.lambda[x][q.index_of(&q.add(u, v))];
                let rhs = w.lambda[x][i] + w.lambda[e.action[x][i]][j] + ext.cocycle().eval(u, v);
                lhs == rhs
            })
        })
    })
}

/// Checks a claimed witness against the lifting identity on every triple.
pub fn is_lifting(ext: &CentralExtension, e: &QSet, w: &LiftingWitness) -> bool {
    let elems: Vec<Element> = ext.base().elements().collect();
    w.lambda.len() == e.action.len() && lifting_holds(ext, &elems, e, w)
}

/// Whether the extension splits over its whole base.
pub fn extension_splits(ext: &CentralExtension) -> Result<bool> {
    Ok(splitting_of_extension(ext, &Subgroup::whole(ext.base()))?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::field;
    use crate::finabel::Group;
    use crate::forms::BilinearForm;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ints(f: &Arc<CycloField>, v: &[i64]) -> Vec<Cyclo> {
        v.iter().map(|&x| Cyclo::from_int(f, x)).collect()
    }

    #[test]
    fn trivial_covering_returns_the_data() {
        let f = field(1);
        let c = Covering::trivial(3);
        let base = vec![ints(&f, &[1, 2]), ints(&f, &[]), ints(&f, &[5])];
        let d = pullback(&c, &f, &base).unwrap();
        assert_eq!(solve_descent(&c, &d).unwrap().values, base);
    }

    #[test]
    fn double_cover_of_a_point() {
        let f = field(1);
        let c = Covering::new(vec![0, 0], 1).unwrap();
        let v = ints(&f, &[3]);
        let d = pullback(&c, &f, &[v.clone()]).unwrap();
        assert_eq!(solve_descent(&c, &d).unwrap().values, vec![v]);

        // f = -1 off the diagonal: the vectors must be opposite
        let minus = CycloMatrix::scalar(&f, 1, &Cyclo::from_int(&f, -1));
        let one = CycloMatrix::identity(&f, 1);
        let mut transitions = BTreeMap::new();
        transitions.insert((0, 0), one.clone());
        transitions.insert((1, 1), one.clone());
        transitions.insert((0, 1), minus.clone());
        transitions.insert((1, 0), minus.clone());
        let good = DescentDatum {
            field: f.clone(),
            values: vec![ints(&f, &[2]), ints(&f, &[-2])],
            transitions: transitions.clone(),
        };
        let g = solve_descent(&c, &good).unwrap();
        assert_eq!(g.values, vec![ints(&f, &[2])]);
        assert_eq!(solve_descent_at(&c, &good, &[1]).unwrap().values, vec![ints(&f, &[-2])]);

        // f_{1,0} f_{0,1} = -1 != f_{0,0}
        let mut bad = good.clone();
        bad.transitions.insert((1, 0), one.clone());
        bad.values = vec![ints(&f, &[0]), ints(&f, &[0])];
        assert_eq!(cocycle_witness(&c, &bad), Some((0, 1, 0)));
        assert!(solve_descent(&c, &bad).is_err());
    }

    #[test]
    fn covering_rejects_non_surjections() {
        assert!(Covering::new(vec![0, 0], 2).is_err());
        assert!(Covering::new(vec![3], 2).is_err());
        let c = Covering::new(vec![1, 0, 1], 2).unwrap();
        assert_eq!(c.pairs().count(), 5);
        assert_eq!(c.triples().count(), 9);
    }

    #[test]
    fn random_data_glue_and_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let f = field(4);
        for _ in 0..10 {
            let c = random_covering(3, 3, &mut rng);
            let base: Vec<Vec<Cyclo>> = (0..c.base_size()).map(|_| {
                let n = rng.gen_range(0..=2);
                random_vector(&f, n, &mut rng)
            }).collect();
            let pulled = pullback(&c, &f, &base).unwrap();
            assert_eq!(solve_descent(&c, &pulled).unwrap().values, base);
            let d = random_datum(&c, &f, &base, &mut rng);
            let g = solve_descent(&c, &d).unwrap();
            let last: Vec<usize> = (0..c.base_size()).map(|b| *c.fiber(b).last().unwrap()).collect();
            let g2 = solve_descent_at(&c, &d, &last).unwrap();
            for b in 0..c.base_size() {
                assert_eq!(d.transition(g.chosen[b], g2.chosen[b]).apply(&g.values[b]), g2.values[b]);
            }
            let report = verify_full_faithfulness(&c, &d, &pulled).unwrap();
            assert!(report.holds(), "{report:?}");
        }
    }

    #[test]
    fn matrix_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = field(3);
        let m = random_invertible(&f, 3, &mut rng);
        assert_eq!(m.mul(&m.inverse().unwrap()), CycloMatrix::identity(&f, 3));
        assert!(CycloMatrix::zeros(&f, 2, 2).inverse().is_none());
    }

    #[test]
    fn torsor_lifts() {
        let q = Group::new(vec![2, 2]).unwrap();
        let e = QSet::regular(&q);
        let trivial = CentralExtension::new(BilinearForm::zero(&q, &q)).unwrap();
        let w = torsor_lift_obstruction(&trivial, &e).unwrap().unwrap();
        assert!(w.lambda.iter().flatten().all(|v| v.is_zero()));

        let h = QZ::new(1, 2);
        let z = QZ::ZERO;
        let skew = CentralExtension::new(BilinearForm::new(q.clone(), q.clone(), vec![vec![z, h], vec![z, z]]).unwrap()).unwrap();
        assert!(torsor_lift_obstruction(&skew, &e).unwrap().is_none());

        let z4 = Group::cyclic(4).unwrap();
        let sym = CentralExtension::new(BilinearForm::new(z4.clone(), z4.clone(), vec![vec![QZ::new(1, 4)]]).unwrap()).unwrap();
        let w = torsor_lift_obstruction(&sym, &QSet::free(&z4, 2)).unwrap().unwrap();
        assert!(is_lifting(&sym, &QSet::free(&z4, 2), &w));
        assert!(extension_splits(&sym).unwrap());

        let not_free = QSet { action: vec![vec![0, 0, 0, 0]] };
        assert!(torsor_lift_obstruction(&sym, &not_free).is_err());
    }
}
