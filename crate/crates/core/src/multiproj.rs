//! Decomposition of a variety in `(P^1)^n` into disjoint parts.
//!
//! Each coordinate `x_j = g_j / h_j` is split into the slot pair
//! `(y_{2j}, y_{2j-1})`. Generators are made homogeneous in every pair, and
//! the canonical-representative constraints pin each pair to `(1:0)` or
//! `(a:1)`. The partition is then refined one slot at a time: the slots
//! `y_1..y_j` are frozen into `z_1..z_j`, and whenever the leading
//! coefficient of a basis element (a polynomial in the frozen slots) may
//! either vanish or not, the part is split in two.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::coeff::FieldSpec;
use crate::groebner::{heuristic_radical, ideal_saturate, normal_form, radical_membership, IdealBasis};
use crate::parser::{GeneratorForm, ProblemSpec};
use crate::poly::{principal_saturate, squarefree_part, PolyError, Polynomial, VariableLayout};

#[derive(Debug, Error)]
pub enum PartitionError {
    #[error("node limit of {limit} reached; partial tree has {} nodes", partial.nodes.len())]
    NodeLimit { limit: usize, partial: Box<PartTree> },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `(∏ h_j^{deg(b, x_j)}) · b(g_n/h_n, ..., g_1/h_1)` with `g_j ↦ y_{2j}` and
/// `h_j ↦ y_{2j-1}`, in the `multiproj(n)` layout.
pub fn multihomogenize(b: &Polynomial, n: usize) -> Result<Polynomial, PolyError> {
    if b.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let affine = VariableLayout::affine(n);
    if b.nvars() != affine.nvars() {
        return Err(PolyError::SlotMismatch(b.nvars(), affine.nvars()));
    }
    let target = VariableLayout::multiproj(n);
    let degrees: Vec<u32> = (1..=n).map(|j| b.degree_in(affine.x(j)).unwrap_or(0)).collect();
    let terms = b
        .terms()
        .iter()
        .map(|t| {
            let mut exps = vec![0u32; target.nvars()];
            for j in 1..=n {
                let a = t.monomial.exponent(affine.x(j));
                exps[target.y(2 * j)] = a;
                exps[target.y(2 * j - 1)] = degrees[j - 1] - a;
            }
            crate::poly::Term { monomial: crate::poly::Monomial::from_exponents(&exps), coeff: t.coeff.clone() }
        })
        .collect();
    Ok(Polynomial::from_terms(b.field(), target.nvars(), terms))
}

/// Embeds a y-form generator (2n slots) into the `multiproj(n)` layout.
pub fn embed_y_form(f: &Polynomial, n: usize) -> Polynomial {
    let map: Vec<usize> = (0..2 * n).collect();
    f.rename(&map, 4 * n)
}

/// Homogenized generators of a problem in the `multiproj(n)` layout.
pub fn homogenized_generators(spec: &ProblemSpec) -> Result<Vec<Polynomial>, PolyError> {
    spec.generators
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| match spec.form {
            GeneratorForm::X => multihomogenize(g, spec.n),
            GeneratorForm::Y => Ok(embed_y_form(g, spec.n)),
        })
        .collect()
}

/// `y_{2j-1}^2 - y_{2j-1}` and `(y_{2j} - 1)(y_{2j-1} - 1)` for every `j`:
/// each pair becomes `(1:0)` or `(a:1)`.
pub fn canonical_constraints(n: usize, field: FieldSpec) -> Vec<Polynomial> {
    let l = VariableLayout::multiproj(n);
    let nv = l.nvars();
    let one = Polynomial::one(field, nv);
    let mut out = Vec::with_capacity(2 * n);
    for j in 1..=n {
        let h = Polynomial::var(field, nv, l.y(2 * j - 1));
        let g = Polynomial::var(field, nv, l.y(2 * j));
        out.push(h.mul(&h).sub(&h));
        out.push(g.sub(&one).mul(&h.sub(&one)));
    }
    out
}

/// `y_k ↦ z_k` for `k ≤ level`.
pub fn freeze_below(f: &Polynomial, level: usize, layout: &VariableLayout) -> Polynomial {
    let map: Vec<usize> = (0..layout.nvars())
        .map(|s| match layout.var(s) {
            (crate::poly::VarKind::Y, k) if k <= level => layout.z(k),
            _ => s,
        })
        .collect();
    f.rename(&map, layout.nvars())
}

/// `z_k ↦ y_k` for every `k`.
pub fn unfreeze_all(f: &Polynomial, layout: &VariableLayout) -> Polynomial {
    let map: Vec<usize> = (0..layout.nvars())
        .map(|s| match layout.var(s) {
            (crate::poly::VarKind::Z, k) => layout.y(k),
            _ => s,
        })
        .collect();
    f.rename(&map, layout.nvars())
}

/// Strips from `lc` every factor shared with an inequality constraint.
/// A constant result means `lc` is certified nonzero on the part.
pub fn reduced_lead_coefficient(lc: &Polynomial, neq: &[Polynomial]) -> Result<Polynomial, PolyError> {
    if lc.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let mut m = lc.monic();
    for q in neq {
        m = principal_saturate(&m, q)?;
    }
    Ok(m.monic())
}

/// One node of the decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Part {
    pub id: usize,
    pub prev: Option<usize>,
    /// Reduced basis, frozen at `frozen_level`.
    pub eq: IdealBasis,
    /// Monic squarefree inequality constraints in the `z` slots.
    pub neq: Vec<Polynomial>,
    pub frozen_level: usize,
}

impl Part {
    /// Equality constraints with every frozen slot renamed back to `y`.
    pub fn unfrozen_eq(&self, layout: &VariableLayout) -> IdealBasis {
        self.eq.map_order_preserving(|g| unfreeze_all(g, layout))
    }

    pub fn unfrozen_neq(&self, layout: &VariableLayout) -> Vec<Polynomial> {
        self.neq.iter().map(|q| unfreeze_all(q, layout)).collect()
    }
}

/// The leading-coefficient split found in a part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitFinding {
    pub level: usize,
    pub pivot: Polynomial,
    /// Squarefree monic lead coefficient, in the `z` slots.
    pub j: Polynomial,
}

/// Finds the first level (from 1 up to `2n - 1`) where some basis element
/// has a leading coefficient that is not certified nonzero.
pub fn split_scan(part: &Part, layout: &VariableLayout) -> Result<Option<SplitFinding>, PolyError> {
    let eq = part.unfrozen_eq(layout);
    if eq.is_unit() {
        return Ok(None);
    }
    let boundary = layout.max_index(crate::poly::VarKind::Y);
    for level in 1..boundary {
        let frozen = eq.map_order_preserving(|g| freeze_below(g, level, layout));
        for g in frozen.generators() {
            let (head, lc) = g.lead_split(boundary)?;
            if head.is_one() {
                continue;
            }
            let m = reduced_lead_coefficient(&lc, &part.neq)?;
            // a lead coefficient invertible modulo eq vanishes nowhere on the
            // part; splitting on it would only reproduce the part
            if !m.is_constant() && !frozen.with([m.clone()]).to_reduced().is_unit() {
                return Ok(Some(SplitFinding { level, pivot: g.clone(), j: squarefree_part(&m)? }));
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NeqOutcome {
    /// Some inequality cannot hold anywhere on the equality locus.
    Empty,
    Constraints(Vec<Polynomial>),
}

/// Squarefree, monic, deduplicated inequality constraints; a constraint
/// that reduces to a nonzero constant modulo `eq` is dropped. Membership
/// tests run on the unfrozen forms so that `z_k` and `y_k` denote the same
/// coordinate.
///
/// A constraint that is merely invertible modulo `eq` (such as `z_2` next
/// to `z_2*y_4 - 1`) is kept: it is what certifies the lead coefficient
/// that produced it.
pub fn normalize_neq(neq: &[Polynomial], eq: &IdealBasis, layout: &VariableLayout) -> Result<NeqOutcome, PolyError> {
    let eq_u = eq.map_order_preserving(|g| unfreeze_all(g, layout));
    let mut kept: BTreeSet<Polynomial> = BTreeSet::new();
    for q in neq {
        let s = squarefree_part(q)?;
        if s.is_constant() {
            continue;
        }
        let s_u = unfreeze_all(&s, layout);
        if radical_membership(&s_u, &eq_u) {
            return Ok(NeqOutcome::Empty);
        }
        let r = normal_form(&s_u, &eq_u.to_reduced());
        if r.is_constant() && !r.is_zero() {
            continue;
        }
        kept.insert(s);
    }
    let mut out: Vec<Polynomial> = kept.into_iter().collect();
    out.sort_by(|a, b| {
        a.leading_monomial().cmp(&b.leading_monomial()).then_with(|| a.terms().len().cmp(&b.terms().len()))
    });
    Ok(NeqOutcome::Constraints(out))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartitionOptions {
    pub max_nodes: usize,
    pub radical: bool,
}

impl Default for PartitionOptions {
    fn default() -> Self {
        PartitionOptions { max_nodes: 10_000, radical: true }
    }
}

/// Children dropped at creation time.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Diagnostics {
    pub unit_children: usize,
    pub empty_children: usize,
    pub inconsistent_root: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartTree {
    pub layout: VariableLayout,
    pub field: FieldSpec,
    pub nodes: Vec<Part>,
    pub diagnostics: Diagnostics,
}

impl PartTree {
    /// Root-to-node path, ending with `id`.
    pub fn path(&self, id: usize) -> Vec<usize> {
        let mut path = vec![id];
        let mut cur = self.nodes[id].prev;
        while let Some(p) = cur {
            path.push(p);
            cur = self.nodes[p].prev;
        }
        path.reverse();
        path
    }

    pub fn is_leaf(&self, id: usize) -> bool {
        !self.nodes.iter().any(|p| p.prev == Some(id))
    }

    /// Leaves in node order, each with its ancestor path.
    pub fn leaf_parts(&self) -> Vec<(&Part, Vec<usize>)> {
        let mut referenced = vec![false; self.nodes.len()];
        for p in &self.nodes {
            if let Some(prev) = p.prev {
                referenced[prev] = true;
            }
        }
        self.nodes.iter().filter(|p| !referenced[p.id] && !p.eq.is_unit()).map(|p| (p, self.path(p.id))).collect()
    }
}

fn close(ideal: IdealBasis, radical: bool) -> IdealBasis {
    let gb = ideal.to_reduced();
    if radical {
        heuristic_radical(&gb)
    } else {
        gb
    }
}

/// Builds the part tree of a problem.
///
/// Nodes are processed first-in first-out; a split appends the equality
/// child (lead coefficient vanishes) before the inequality child.
pub fn partition_variety(spec: &ProblemSpec, options: &PartitionOptions) -> Result<PartTree, PartitionError> {
    let n = spec.n;
    let layout = VariableLayout::multiproj(n);
    let field = spec.field;
    let nv = layout.nvars();
    let mut gens = homogenized_generators(spec)?;
    gens.extend(canonical_constraints(n, field));
    let root_eq = close(IdealBasis::new(field, nv, gens), options.radical);

    let mut tree = PartTree { layout: layout.clone(), field, nodes: Vec::new(), diagnostics: Diagnostics::default() };
    if root_eq.is_unit() {
        tree.diagnostics.inconsistent_root = true;
        return Ok(tree);
    }
    tree.nodes.push(Part { id: 0, prev: None, eq: root_eq, neq: Vec::new(), frozen_level: 0 });

    let mut current = 0;
    while current < tree.nodes.len() {
        let part = tree.nodes[current].clone();
        current += 1;
        let Some(finding) = split_scan(&part, &layout)? else {
            continue;
        };
        let level = finding.level;
        let frozen = part.unfrozen_eq(&layout).map_order_preserving(|g| freeze_below(g, level, &layout));

        let eq_a = close(frozen.with([finding.j.clone()]), options.radical);
        let eq_b = close(ideal_saturate(&frozen, &finding.j).expect("split polynomial is nonzero"), options.radical);
        let mut neq_b = part.neq.clone();
        neq_b.push(finding.j.clone());

        for (eq, neq) in [(eq_a, part.neq.clone()), (eq_b, neq_b)] {
            if eq.is_unit() {
                tree.diagnostics.unit_children += 1;
                continue;
            }
            match normalize_neq(&neq, &eq, &layout)? {
                NeqOutcome::Empty => tree.diagnostics.empty_children += 1,
                NeqOutcome::Constraints(neq) => {
                    if tree.nodes.len() >= options.max_nodes {
                        return Err(PartitionError::NodeLimit { limit: options.max_nodes, partial: Box::new(tree) });
                    }
                    let id = tree.nodes.len();
                    tree.nodes.push(Part { id, prev: Some(part.id), eq, neq, frozen_level: level });
                }
            }
        }
    }
    Ok(tree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::buchberger;
    use crate::parser::{parse_polynomial, parse_problem};

    fn x(s: &str, n: usize) -> Polynomial {
        parse_polynomial(s, &VariableLayout::affine(n), FieldSpec::RATIONALS).unwrap()
    }

    fn y(s: &str, n: usize) -> Polynomial {
        parse_polynomial(s, &VariableLayout::multiproj(n), FieldSpec::RATIONALS).unwrap()
    }

    fn text(f: &Polynomial, n: usize) -> String {
        f.to_text(&VariableLayout::multiproj(n))
    }

    #[test]
    fn multihomogenize_examples() {
        let b = multihomogenize(&x("x_3*(x_3^2*x_2+x_3+1)", 3), 3).unwrap();
        assert_eq!(b, y("y_6*(y_6^2*y_4+y_6*y_5*y_3+y_5^2*y_3)", 3));
        let b = multihomogenize(&x("x_1*(x_3^2*x_2+x_3+1)", 3), 3).unwrap();
        assert_eq!(b, y("y_2*(y_6^2*y_4+y_6*y_5*y_3+y_5^2*y_3)", 3));
        assert_eq!(multihomogenize(&x("x_2*x_1-1", 2), 2).unwrap(), y("y_4*y_2-y_3*y_1", 2));
        assert_eq!(multihomogenize(&x("7", 2), 2).unwrap(), y("7", 2));
        assert_eq!(multihomogenize(&Polynomial::zero(FieldSpec::RATIONALS, 2), 2), Err(PolyError::ZeroPolynomial));
    }

    #[test]
    fn canonical_constraint_examples() {
        let c = canonical_constraints(1, FieldSpec::RATIONALS);
        assert_eq!(c, [y("y_1^2-y_1", 1), y("(y_2-1)*(y_1-1)", 1)]);
        assert_eq!(canonical_constraints(3, FieldSpec::RATIONALS).len(), 6);
    }

    #[test]
    fn canonical_constraints_cut_out_p1() {
        // brute force over all (y_2, y_1) in F_3^2
        let f3 = FieldSpec::prime(3).unwrap();
        let c = canonical_constraints(1, f3);
        let l = VariableLayout::multiproj(1);
        let mut sols = Vec::new();
        for g in 0..3 {
            for h in 0..3 {
                let mut pt = vec![0u32; 4];
                pt[l.y(2)] = g;
                pt[l.y(1)] = h;
                if c.iter().all(|f| f.evaluate_mod(&pt) == 0) {
                    sols.push((g, h));
                }
            }
        }
        assert_eq!(sols, [(0, 1), (1, 0), (1, 1), (2, 1)]);
    }

    #[test]
    fn freeze_and_unfreeze() {
        let l = VariableLayout::multiproj(2);
        assert_eq!(freeze_below(&y("y_4*y_2-y_3*y_1", 2), 2, &l), y("y_4*z_2-y_3*z_1", 2));
        let f = y("y_4*y_2-y_3*y_1", 2);
        assert_eq!(freeze_below(&f, 0, &l), f);
        assert_eq!(freeze_below(&y("y_1^2-y_1", 2), 1, &l), y("z_1^2-z_1", 2));
        assert_eq!(unfreeze_all(&y("y_4*z_2-y_3*z_1", 2), &l), f);
        let l3 = VariableLayout::multiproj(3);
        assert_eq!(unfreeze_all(&y("z_4*y_6^2+y_6+1", 3), &l3), y("y_4*y_6^2+y_6+1", 3));
        for j in 0..=4 {
            assert_eq!(unfreeze_all(&freeze_below(&f, j, &l), &l), f);
        }
    }

    #[test]
    fn reduced_lead_coefficient_examples() {
        assert_eq!(reduced_lead_coefficient(&y("z_2*z_4", 2), &[y("z_2", 2)]).unwrap(), y("z_4", 2));
        assert_eq!(reduced_lead_coefficient(&y("z_4", 2), &[]).unwrap(), y("z_4", 2));
        assert!(reduced_lead_coefficient(&y("z_2^2", 2), &[y("z_2", 2)]).unwrap().is_one());
        assert!(reduced_lead_coefficient(&Polynomial::zero(FieldSpec::RATIONALS, 8), &[]).is_err());
    }

    fn root(src: &str) -> (Part, VariableLayout) {
        let spec = parse_problem(src).unwrap();
        let l = VariableLayout::multiproj(spec.n);
        let mut gens = homogenized_generators(&spec).unwrap();
        gens.extend(canonical_constraints(spec.n, spec.field));
        let eq = heuristic_radical(&buchberger(&gens, spec.field, l.nvars()));
        (Part { id: 0, prev: None, eq, neq: vec![], frozen_level: 0 }, l)
    }

    const SHARED_FACTOR: &str = "char 0\nn 3\nform x\nideal:\nx_1*(x_3^2*x_2+x_3+1)\nx_3*(x_3^2*x_2+x_3+1)\n";

    #[test]
    fn split_scan_on_example_root() {
        let (part, l) = root(SHARED_FACTOR);
        let f = split_scan(&part, &l).unwrap().unwrap();
        assert_eq!(f.level, 1);
        assert_eq!(text(&f.j, 3), "z_1-1");
    }

    #[test]
    fn split_scan_leaf_and_certified() {
        let l = VariableLayout::multiproj(1);
        let eq = buchberger(&[y("z_1-1", 1), y("y_2-1", 1)], FieldSpec::RATIONALS, 4);
        let part = Part { id: 0, prev: None, eq, neq: vec![], frozen_level: 1 };
        assert_eq!(split_scan(&part, &l).unwrap(), None);

        let l2 = VariableLayout::multiproj(2);
        let eq = buchberger(&[y("z_2^2*y_3-1", 2)], FieldSpec::RATIONALS, 8);
        let part = Part { id: 0, prev: None, eq: eq.clone(), neq: vec![y("z_2", 2)], frozen_level: 2 };
        assert_eq!(split_scan(&part, &l2).unwrap(), None);
        // z_2 is a unit modulo eq, so it vanishes nowhere on the part.
        let part = Part { id: 0, prev: None, eq, neq: vec![], frozen_level: 2 };
        assert_eq!(split_scan(&part, &l2).unwrap(), None);
        let eq = buchberger(&[y("z_2*y_3-z_1", 2)], FieldSpec::RATIONALS, 8);
        let part = Part { id: 0, prev: None, eq, neq: vec![], frozen_level: 2 };
        assert_eq!(text(&split_scan(&part, &l2).unwrap().unwrap().j, 2), "z_2");
    }

    #[test]
    fn normalize_neq_examples() {
        let l = VariableLayout::multiproj(2);
        let eq = buchberger(&[y("z_1", 2)], FieldSpec::RATIONALS, 8);
        assert_eq!(normalize_neq(&[y("z_1-1", 2)], &eq, &l).unwrap(), NeqOutcome::Constraints(vec![]));
        let eq = buchberger(&[y("z_2", 2)], FieldSpec::RATIONALS, 8);
        assert_eq!(normalize_neq(&[y("z_2", 2)], &eq, &l).unwrap(), NeqOutcome::Empty);
        let zero = IdealBasis::new(FieldSpec::RATIONALS, 8, vec![]);
        assert_eq!(
            normalize_neq(&[y("z_2^2*z_4", 2)], &zero, &l).unwrap(),
            NeqOutcome::Constraints(vec![y("z_4*z_2", 2)])
        );
        assert_eq!(
            normalize_neq(&[y("2*z_4", 2), y("z_4", 2), y("z_2", 2)], &zero, &l).unwrap(),
            NeqOutcome::Constraints(vec![y("z_2", 2), y("z_4", 2)])
        );
    }

    #[test]
    fn inconsistent_root_gives_empty_tree() {
        let spec = parse_problem("char 0\nn 1\nform y\nideal:\ny_2\ny_1\n").unwrap();
        let tree = partition_variety(&spec, &PartitionOptions::default()).unwrap();
        assert!(tree.nodes.is_empty());
        assert!(tree.diagnostics.inconsistent_root);
        assert!(tree.leaf_parts().is_empty());
    }

    #[test]
    fn node_limit_carries_partial_tree() {
        let spec = parse_problem(SHARED_FACTOR).unwrap();
        let err = partition_variety(&spec, &PartitionOptions { max_nodes: 3, radical: true }).unwrap_err();
        match err {
            PartitionError::NodeLimit { limit, partial } => {
                assert_eq!(limit, 3);
                assert_eq!(partial.nodes.len(), 3);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn single_node_tree() {
        // x_1 = 0 needs no split: the root is its own leaf
        let spec = parse_problem("char 0\nn 1\nform x\nideal:\nx_1\n").unwrap();
        let tree = partition_variety(&spec, &PartitionOptions::default()).unwrap();
        let leaves = tree.leaf_parts();
        assert_eq!(tree.nodes.len(), 1);
        assert_eq!(leaves.len(), 1);
        assert_eq!(leaves[0].1, [0]);
    }
}
