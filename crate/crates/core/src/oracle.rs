//! Brute-force ground truth over `F_p`: enumerate `(P^1(F_p))^n`, evaluate
//! generators and part constraints at every point, and cross-check a part
//! tree against the variety it claims to partition.
//!
//! Slot values are bound with `y_{2j} = g_j`, `y_{2j-1} = h_j` for the pair
//! `(g_j : h_j)` of coordinate `x_j`, and every `z_k` takes the value of
//! `y_k`: a frozen slot is a coordinate that has already been chosen.

use std::fmt;

use thiserror::Error;

use crate::multiproj::{Part, PartTree};
use crate::poly::{Polynomial, VarKind, VariableLayout};

/// Largest tuple space enumerated unless the caller raises it.
pub const DEFAULT_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("(P^1(F_{p}))^{n} has {count} points, above the cap of {cap}")]
    TooManyTuples { p: u32, n: usize, count: u128, cap: u64 },
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u32),
    #[error("characteristic mismatch: data over characteristic {found}, oracle over F_{expected}")]
    CharacteristicMismatch { expected: u32, found: u32 },
    #[error("generator {index} is not homogeneous in the pair of x_{coordinate}")]
    NotBihomogeneous { index: usize, coordinate: usize },
    #[error("expected {expected} slots, found {found}")]
    SlotMismatch { expected: usize, found: usize },
}

/// A point of `(P^1(F_p))^n` with every pair `(1,0)` or `(a,1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjTuple {
    p: u32,
    /// `coords[j - 1]` is the pair of `x_j`.
    coords: Vec<(u32, u32)>,
}

impl ProjTuple {
    /// Pairs listed from `x_1` up. Returns `None` unless every pair is
    /// canonical and reduced mod `p`.
    pub fn new(p: u32, coords: Vec<(u32, u32)>) -> Option<Self> {
        let ok = coords.iter().all(|&(g, h)| (g == 1 && h == 0) || (h == 1 && g < p));
        ok.then_some(ProjTuple { p, coords })
    }

    pub fn n(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[(u32, u32)] {
        &self.coords
    }

    /// The pair of `x_j`, `1 ≤ j ≤ n`.
    pub fn coord(&self, j: usize) -> (u32, u32) {
        self.coords[j - 1]
    }

    /// Values for every slot of the `multiproj(n)` layout.
    pub fn slot_values(&self, layout: &VariableLayout) -> Vec<u32> {
        let mut v = vec![0; layout.nvars()];
        for (i, &(g, h)) in self.coords.iter().enumerate() {
            let j = i + 1;
            for (k, val) in [(2 * j, g), (2 * j - 1, h)] {
                v[layout.y(k)] = val;
                v[layout.z(k)] = val;
            }
        }
        v
    }
}

/// Written `((g_n:h_n),...,(g_1:h_1))` with symmetric residues.
impl fmt::Display for ProjTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = |a: u32| if a > self.p / 2 { a as i64 - self.p as i64 } else { a as i64 };
        write!(f, "(")?;
        for (i, &(g, h)) in self.coords.iter().rev().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "({}:{})", sym(g), h)?;
        }
        write!(f, ")")
    }
}

fn check_prime(p: u32) -> Result<(), OracleError> {
    if p < (1 << 31) && crate::coeff::is_prime(p as u64) {
        Ok(())
    } else {
        Err(OracleError::NotPrime(p))
    }
}

fn check_char(found: u32, p: u32) -> Result<(), OracleError> {
    if found == p {
        Ok(())
    } else {
        Err(OracleError::CharacteristicMismatch { expected: p, found })
    }
}

/// Every canonical tuple, `x_n` varying slowest. Each coordinate runs
/// through `(1:0), (0:1), (1:1), ..., (p-1:1)`.
pub fn enumerate_proj_space(p: u32, n: usize, cap: u64) -> Result<Vec<ProjTuple>, OracleError> {
    check_prime(p)?;
    let count = (p as u128 + 1).checked_pow(n as u32).unwrap_or(u128::MAX);
    if count > cap as u128 {
        return Err(OracleError::TooManyTuples { p, n, count, cap });
    }
    let line: Vec<(u32, u32)> = std::iter::once((1, 0)).chain((0..p).map(|a| (a, 1))).collect();
    let mut out = Vec::with_capacity(count as usize);
    let mut idx = vec![0usize; n];
    loop {
        // idx[0] drives x_n
        let coords = idx.iter().rev().map(|&i| line[i]).collect();
        out.push(ProjTuple { p, coords });
        let mut k = n;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < line.len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// `Err` with the offending coordinate unless every term of `g` has the same
/// degree in the slots of each pair.
fn check_bihomogeneous(g: &Polynomial, index: usize, layout: &VariableLayout) -> Result<(), OracleError> {
    for j in 1..=layout.n() {
        let slots = [layout.y(2 * j), layout.y(2 * j - 1), layout.z(2 * j), layout.z(2 * j - 1)];
        let mut degrees = g.terms().iter().map(|t| slots.iter().map(|&s| t.monomial.exponent(s)).sum::<u32>());
        if let Some(d) = degrees.next() {
            if degrees.any(|e| e != d) {
                return Err(OracleError::NotBihomogeneous { index, coordinate: j });
            }
        }
    }
    Ok(())
}

fn check_slots(layout: &VariableLayout, polys: &[Polynomial]) -> Result<(), OracleError> {
    match polys.iter().find(|g| g.nvars() != layout.nvars()) {
        Some(g) => Err(OracleError::SlotMismatch { expected: layout.nvars(), found: g.nvars() }),
        None => Ok(()),
    }
}

/// Tuples where every generator (in the `multiproj(n)` layout) vanishes.
pub fn variety_points(gens: &[Polynomial], p: u32, n: usize) -> Result<Vec<ProjTuple>, OracleError> {
    let layout = VariableLayout::multiproj(n);
    check_slots(&layout, gens)?;
    for (i, g) in gens.iter().enumerate() {
        check_char(g.field().characteristic(), p)?;
        check_bihomogeneous(g, i, &layout)?;
    }
    let all = enumerate_proj_space(p, n, DEFAULT_CAP)?;
    Ok(all
        .into_iter()
        .filter(|t| {
            let v = t.slot_values(&layout);
            gens.iter().all(|g| g.evaluate_mod(&v) == 0)
        })
        .collect())
}

fn part_contains(part: &Part, values: &[u32]) -> bool {
    part.eq.generators().iter().all(|g| g.evaluate_mod(values) == 0)
        && part.neq.iter().all(|q| q.evaluate_mod(values) != 0)
}

/// Tuples satisfying every equality and inequality of `part`.
pub fn part_members(part: &Part, p: u32, n: usize) -> Result<Vec<ProjTuple>, OracleError> {
    check_char(part.eq.field().characteristic(), p)?;
    let layout = VariableLayout::multiproj(n);
    if part.eq.nvars() != layout.nvars() {
        return Err(OracleError::SlotMismatch { expected: layout.nvars(), found: part.eq.nvars() });
    }
    let all = enumerate_proj_space(p, n, DEFAULT_CAP)?;
    Ok(all.into_iter().filter(|t| part_contains(part, &t.slot_values(&layout))).collect())
}

/// Cross-tabulation of variety points against leaf membership.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PartitionReport {
    pub tuples_scanned: usize,
    pub variety_size: usize,
    /// Variety points lying in at least one part.
    pub covered: usize,
    pub double_covered: Vec<(ProjTuple, Vec<usize>)>,
    /// Points of a part outside the variety, as `(part id, tuple)`.
    pub unsound: Vec<(usize, ProjTuple)>,
    pub missing: Vec<ProjTuple>,
}

impl PartitionReport {
    pub fn is_valid(&self) -> bool {
        self.double_covered.is_empty()
            && self.unsound.is_empty()
            && self.missing.is_empty()
            && self.covered == self.variety_size
    }

    /// Multi-line description of every violation.
    pub fn violations(&self) -> String {
        let mut out = String::new();
        for (t, ids) in &self.double_covered {
            out.push_str(&format!("{t} lies in parts {ids:?}\n"));
        }
        for (id, t) in &self.unsound {
            out.push_str(&format!("{t} lies in part {id} but not in the variety\n"));
        }
        for t in &self.missing {
            out.push_str(&format!("{t} lies in the variety but in no part\n"));
        }
        out
    }
}

/// Checks that `parts` partition the `F_p`-points of `V(gens)` exactly.
pub fn check_parts(parts: &[&Part], gens: &[Polynomial], p: u32, n: usize) -> Result<PartitionReport, OracleError> {
    let layout = VariableLayout::multiproj(n);
    check_slots(&layout, gens)?;
    for (i, g) in gens.iter().enumerate() {
        check_char(g.field().characteristic(), p)?;
        check_bihomogeneous(g, i, &layout)?;
    }
    for part in parts {
        check_char(part.eq.field().characteristic(), p)?;
        check_slots(&layout, part.eq.generators())?;
        check_slots(&layout, &part.neq)?;
    }
    let all = enumerate_proj_space(p, n, DEFAULT_CAP)?;
    let mut report = PartitionReport { tuples_scanned: all.len(), ..Default::default() };
    for t in all {
        let v = t.slot_values(&layout);
        let in_variety = gens.iter().all(|g| g.evaluate_mod(&v) == 0);
        let holders: Vec<usize> = parts.iter().filter(|part| part_contains(part, &v)).map(|part| part.id).collect();
        if in_variety {
            report.variety_size += 1;
            if holders.is_empty() {
                report.missing.push(t.clone());
            } else {
                report.covered += 1;
            }
        } else {
            report.unsound.extend(holders.iter().map(|&id| (id, t.clone())));
        }
        if holders.len() > 1 {
            report.double_covered.push((t, holders));
        }
    }
    Ok(report)
}

/// Checks the leaves of `tree` against the homogenized generators `gens`.
pub fn check_partition(tree: &PartTree, gens: &[Polynomial], p: u32) -> Result<PartitionReport, OracleError> {
    check_char(tree.field.characteristic(), p)?;
    let leaves: Vec<&Part> = tree.leaf_parts().into_iter().map(|(part, _)| part).collect();
    check_parts(&leaves, gens, p, tree.layout.n())
}

/// A partial assignment to `y_1..y_{slot-1}` satisfying a part's
/// constraints in those slots that admits no value for `y_slot`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionFailure {
    pub part: usize,
    pub slot: usize,
    /// Values of `y_1, ..., y_{slot-1}`.
    pub prefix: Vec<u32>,
}

/// Constraints of a part grouped by the highest slot `y_k` they involve,
/// after renaming every `z_k` to `y_k`. Index `k - 1` holds slot `k`.
struct Levels {
    eq: Vec<Vec<Polynomial>>,
    neq: Vec<Vec<Polynomial>>,
    /// A nonzero constant equality: the part is empty.
    unit: bool,
}

fn top_coordinate_slot(f: &Polynomial, layout: &VariableLayout) -> Option<usize> {
    f.top_slot().map(|s| match layout.var(s) {
        (VarKind::Y, k) => k,
        (kind, _) => unreachable!("unfrozen constraint uses a {kind:?} slot"),
    })
}

fn levels(part: &Part, layout: &VariableLayout) -> Levels {
    let slots = 2 * layout.n();
    let mut out = Levels { eq: vec![Vec::new(); slots], neq: vec![Vec::new(); slots], unit: false };
    // renaming preserves the order of the slots in use, so this stays a
    // lex basis sorted by leading monomial
    for g in part.unfrozen_eq(layout).generators() {
        match top_coordinate_slot(g, layout) {
            Some(k) => out.eq[k - 1].push(g.clone()),
            None => out.unit = true,
        }
    }
    for q in part.unfrozen_neq(layout) {
        if let Some(k) = top_coordinate_slot(&q, layout) {
            out.neq[k - 1].push(q);
        }
    }
    out
}

/// Univariate polynomial in `y_slot` over `F_p`, low degree first, obtained
/// by binding `y_1..y_{slot-1}` to `prefix`.
fn specialize(f: &Polynomial, layout: &VariableLayout, prefix: &[u32], slot: usize, p: u64) -> Vec<u64> {
    let var = layout.y(slot);
    let mut out = vec![0u64; f.degree_in(var).unwrap_or(0) as usize + 1];
    for t in f.terms() {
        let mut c = t.coeff.as_residue().expect("prime field coefficient") as u64;
        for (k, &value) in prefix.iter().enumerate() {
            c = c * pow_mod(value as u64, t.monomial.exponent(layout.y(k + 1)), p) % p;
        }
        let d = t.monomial.exponent(var) as usize;
        out[d] = (out[d] + c) % p;
    }
    trim(out)
}

fn pow_mod(mut b: u64, mut e: u32, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn trim(mut f: Vec<u64>) -> Vec<u64> {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

fn eval_uni(f: &[u64], x: u64, p: u64) -> u64 {
    f.iter().rev().fold(0, |acc, &c| (acc * x + c) % p)
}

/// `(q, r)` with `a = q b + r`; `b` nonzero.
fn divrem_uni(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let inv = pow_mod(*b.last().expect("nonzero divisor"), (p - 2) as u32, p);
    let mut r = a.to_vec();
    let mut q = vec![0u64; a.len().saturating_sub(b.len()) + 1];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = r[r.len() - 1] * inv % p;
        q[shift] = c;
        for (i, &bc) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - c * bc % p) % p;
        }
        r = trim(r);
    }
    (trim(q), r)
}

/// Monic gcd; empty when both inputs are zero.
fn gcd_uni(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let (_, r) = divrem_uni(&a, &b, p);
        a = b;
        b = r;
    }
    match a.last() {
        Some(&lead) => {
            let inv = pow_mod(lead, (p - 2) as u32, p);
            a.iter().map(|c| c * inv % p).collect()
        }
        None => a,
    }
}

/// Can `y_slot` be chosen in `F̄_p` so that every polynomial of `eqs`
/// vanishes and none of `neqs` does? All inputs are univariate.
fn extends_over_closure(eqs: &[Vec<u64>], neqs: &[Vec<u64>], p: u64) -> bool {
    if neqs.iter().any(|q| q.is_empty()) {
        return false;
    }
    let g = eqs.iter().fold(Vec::new(), |acc, e| gcd_uni(&acc, e, p));
    if g.is_empty() {
        // every value works except finitely many roots of the inequalities
        return true;
    }
    let mut g = g;
    for q in neqs {
        loop {
            let d = gcd_uni(&g, q, p);
            if d.len() <= 1 {
                break;
            }
            g = divrem_uni(&g, &d, p).0;
        }
    }
    g.len() > 1
}

/// Runs `visit(slot, prefix, eqs, neqs)` on every `F_p`-rational prefix
/// that satisfies the part's constraints in `y_1..y_{slot-1}`, slot by slot.
fn walk_prefixes(
    part: &Part,
    layout: &VariableLayout,
    p: u32,
    mut visit: impl FnMut(usize, &[u32], &[Vec<u64>], &[Vec<u64>]),
) {
    let lv = levels(part, layout);
    if lv.unit {
        return;
    }
    let pp = p as u64;
    let mut prefixes: Vec<Vec<u32>> = vec![Vec::new()];
    for slot in 1..=2 * layout.n() {
        let mut next = Vec::new();
        for prefix in &prefixes {
            let eqs: Vec<Vec<u64>> = lv.eq[slot - 1].iter().map(|g| specialize(g, layout, prefix, slot, pp)).collect();
            let neqs: Vec<Vec<u64>> =
                lv.neq[slot - 1].iter().map(|q| specialize(q, layout, prefix, slot, pp)).collect();
            visit(slot, prefix, &eqs, &neqs);
            for v in 0..p {
                let x = v as u64;
                if eqs.iter().all(|e| eval_uni(e, x, pp) == 0) && neqs.iter().all(|q| eval_uni(q, x, pp) != 0) {
                    let mut longer = prefix.clone();
                    longer.push(v);
                    next.push(longer);
                }
            }
        }
        prefixes = next;
    }
}

/// Every `F_p`-rational prefix satisfying the part's constraints on the
/// slots below `k` that has no value for `y_k` in the algebraic closure.
///
/// Prefixes are only followed through `F_p`-rational values, so a prefix
/// reachable solely through an irrational value of some slot is not tested.
pub fn extension_failures(part: &Part, layout: &VariableLayout, p: u32) -> Result<Vec<ExtensionFailure>, OracleError> {
    check_prime(p)?;
    check_char(part.eq.field().characteristic(), p)?;
    let mut failures = Vec::new();
    walk_prefixes(part, layout, p, |slot, prefix, eqs, neqs| {
        if !extends_over_closure(eqs, neqs, p as u64) {
            failures.push(ExtensionFailure { part: part.id, slot, prefix: prefix.to_vec() });
        }
    });
    Ok(failures)
}

/// A root of the lowest new basis element at some slot that is not a root
/// of a later one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionFailure {
    pub part: usize,
    pub slot: usize,
    pub prefix: Vec<u32>,
    pub value: u32,
}

/// Checks that at each slot, every `F_p` root of the first basis element
/// whose leading variable is `y_slot` is a root of all the others, for every
/// admissible `F_p`-rational prefix.
pub fn reduction_failures(part: &Part, layout: &VariableLayout, p: u32) -> Result<Vec<ReductionFailure>, OracleError> {
    check_prime(p)?;
    check_char(part.eq.field().characteristic(), p)?;
    let pp = p as u64;
    let mut failures = Vec::new();
    walk_prefixes(part, layout, p, |slot, prefix, eqs, _| {
        let Some((first, rest)) = eqs.split_first() else { return };
        for v in 0..p {
            let x = v as u64;
            if eval_uni(first, x, pp) == 0 && rest.iter().any(|e| eval_uni(e, x, pp) != 0) {
                failures.push(ReductionFailure { part: part.id, slot, prefix: prefix.to_vec(), value: v });
            }
        }
    });
    Ok(failures)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::FieldSpec;
    use crate::groebner::IdealBasis;
    use crate::multiproj::{homogenized_generators, partition_variety, PartitionOptions};
    use crate::parser::{parse_polynomial, parse_problem};
    use proptest::prelude::*;

    fn fp(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    fn poly(s: &str, n: usize, p: u64) -> Polynomial {
        parse_polynomial(s, &VariableLayout::multiproj(n), fp(p)).unwrap()
    }

    fn part(eq: &[&str], neq: &[&str], n: usize, p: u64) -> Part {
        let nv = 4 * n;
        let gens = eq.iter().map(|s| poly(s, n, p)).collect();
        Part {
            id: 0,
            prev: None,
            eq: IdealBasis::new(fp(p), nv, gens).to_reduced(),
            neq: neq.iter().map(|s| poly(s, n, p)).collect(),
            frozen_level: 0,
        }
    }

    fn tuple(p: u32, coords: &[(u32, u32)]) -> ProjTuple {
        ProjTuple::new(p, coords.to_vec()).unwrap()
    }

    const SHARED_FACTOR: &str = "char 5\nn 3\nform x\nideal:\nx_1*(x_3^2*x_2+x_3+1)\nx_3*(x_3^2*x_2+x_3+1)\n";

    #[test]
    fn enumeration_sizes_and_order() {
        let line = enumerate_proj_space(3, 1, DEFAULT_CAP).unwrap();
        let coords: Vec<_> = line.iter().map(|t| t.coord(1)).collect();
        assert_eq!(coords, [(1, 0), (0, 1), (1, 1), (2, 1)]);
        assert_eq!(enumerate_proj_space(5, 3, DEFAULT_CAP).unwrap().len(), 216);
        let empty = enumerate_proj_space(3, 0, DEFAULT_CAP).unwrap();
        assert_eq!(empty.len(), 1);
        assert_eq!(empty[0].n(), 0);
        assert!(matches!(enumerate_proj_space(7, 9, DEFAULT_CAP), Err(OracleError::TooManyTuples { .. })));
        assert_eq!(enumerate_proj_space(4, 1, DEFAULT_CAP), Err(OracleError::NotPrime(4)));
        // x_2 varies slowest
        let two = enumerate_proj_space(3, 2, DEFAULT_CAP).unwrap();
        assert_eq!(two[1].coords(), [(0, 1), (1, 0)]);
    }

    #[test]
    fn tuples_are_canonical() {
        assert!(ProjTuple::new(5, vec![(2, 0)]).is_none());
        assert!(ProjTuple::new(5, vec![(5, 1)]).is_none());
        assert_eq!(tuple(5, &[(0, 1), (4, 1), (1, 0)]).to_string(), "((1:0),(-1:1),(0:1))");
    }

    #[test]
    fn variety_point_examples() {
        let pts = variety_points(&[poly("y_4*y_2-y_3*y_1", 2, 3)], 3, 2).unwrap();
        assert_eq!(pts.len(), 4);
        assert!(pts.contains(&tuple(3, &[(1, 0), (0, 1)])));
        assert!(pts.contains(&tuple(3, &[(0, 1), (1, 0)])));
        assert_eq!(variety_points(&[poly("y_4*y_2", 2, 3)], 3, 2).unwrap().len(), 7);
        assert_eq!(
            variety_points(&[poly("y_2+1", 1, 3)], 3, 1),
            Err(OracleError::NotBihomogeneous { index: 0, coordinate: 1 })
        );
        assert!(matches!(
            variety_points(&[poly("y_2", 1, 5)], 3, 1),
            Err(OracleError::CharacteristicMismatch { expected: 3, found: 5 })
        ));
    }

    #[test]
    fn example_variety_count() {
        let spec = parse_problem(SHARED_FACTOR).unwrap();
        let gens = homogenized_generators(&spec).unwrap();
        assert_eq!(variety_points(&gens, 5, 3).unwrap().len(), 41);
    }

    #[test]
    fn part_member_examples() {
        let node17 = part(&["z_1-1", "z_2", "z_3-1", "z_4", "z_5-1", "y_6^2+y_6"], &[], 3, 5);
        let members = part_members(&node17, 5, 3).unwrap();
        assert_eq!(members, [tuple(5, &[(0, 1), (0, 1), (0, 1)]), tuple(5, &[(0, 1), (0, 1), (4, 1)])]);
        let node18 = part(&["z_1-1", "z_2", "z_3-1", "z_4", "z_5", "y_6-1"], &[], 3, 5);
        assert_eq!(part_members(&node18, 5, 3).unwrap(), [tuple(5, &[(0, 1), (0, 1), (1, 0)])]);
        let unit = part(&["1"], &[], 3, 5);
        assert!(part_members(&unit, 5, 3).unwrap().is_empty());
        // inequalities exclude points
        let generic = part(&["z_1-1"], &["z_2"], 1, 5);
        assert_eq!(part_members(&generic, 5, 1).unwrap().len(), 4);
    }

    #[test]
    fn example_partition_is_valid_and_induced_failures_show() {
        let spec = parse_problem(SHARED_FACTOR).unwrap();
        let gens = homogenized_generators(&spec).unwrap();
        let tree = partition_variety(&spec, &PartitionOptions::default()).unwrap();
        let report = check_partition(&tree, &gens, 5).unwrap();
        assert!(report.is_valid(), "{}", report.violations());
        assert_eq!(report.tuples_scanned, 216);
        assert_eq!(report.variety_size, 41);

        let leaves: Vec<&Part> = tree.leaf_parts().into_iter().map(|(p, _)| p).collect();
        let dropped = check_parts(&leaves[1..], &gens, 5, 3).unwrap();
        assert!(!dropped.missing.is_empty());
        assert!(!dropped.is_valid());
        let mut doubled = leaves.clone();
        doubled.push(leaves[0]);
        let report = check_parts(&doubled, &gens, 5, 3).unwrap();
        assert!(!report.double_covered.is_empty());
        let root = check_parts(&[&tree.nodes[0], leaves[0]], &gens, 5, 3).unwrap();
        assert!(!root.double_covered.is_empty());

        assert!(matches!(
            check_partition(&tree, &gens, 7),
            Err(OracleError::CharacteristicMismatch { expected: 7, found: 5 })
        ));
    }

    #[test]
    fn unsound_parts_are_reported() {
        let gens = [poly("y_2", 1, 3)];
        let too_big = part(&["z_1-1"], &[], 1, 3);
        let report = check_parts(&[&too_big], &gens, 3, 1).unwrap();
        assert_eq!(report.unsound.len(), 2);
        assert_eq!(report.covered, 1);
    }

    #[test]
    fn extension_holds_on_example_leaves() {
        let spec = parse_problem(SHARED_FACTOR).unwrap();
        let tree = partition_variety(&spec, &PartitionOptions::default()).unwrap();
        for (leaf, _) in tree.leaf_parts() {
            assert_eq!(extension_failures(leaf, &tree.layout, 5).unwrap(), []);
            assert_eq!(reduction_failures(leaf, &tree.layout, 5).unwrap(), []);
        }
    }

    #[test]
    fn extension_failures_are_found() {
        let layout = VariableLayout::multiproj(1);
        // nothing is imposed on y_1, but y_1 = 0 leaves no value for y_2
        let bad = part(&["y_2*y_1-1"], &[], 1, 5);
        let failures = extension_failures(&bad, &layout, 5).unwrap();
        assert_eq!(failures, [ExtensionFailure { part: 0, slot: 2, prefix: vec![0] }]);
        // an inequality that is zero once slot 1 is fixed
        let blocked = part(&["y_1-1"], &["y_1-1"], 1, 5);
        assert!(!extension_failures(&blocked, &layout, 5).unwrap().is_empty());
        // a root only outside F_5 still counts as an extension
        let irrational = part(&["y_1-1", "y_2^2-2"], &[], 1, 5);
        assert_eq!(extension_failures(&irrational, &layout, 5).unwrap(), []);
        // not a basis: the roots of the two quadratics differ
        let mut unreduced = part(&["z_1-1"], &[], 1, 5);
        unreduced.eq = unreduced.eq.with([poly("y_2*(y_2-1)", 1, 5), poly("y_2^2+y_2*z_1", 1, 5)]);
        assert!(!reduction_failures(&unreduced, &layout, 5).unwrap().is_empty());
    }

    #[test]
    fn univariate_helpers() {
        let p = 7;
        // (x-1)(x-2) and (x-1)(x+3)
        let a = [2, 4, 1];
        let b = [4, 2, 1];
        assert_eq!(gcd_uni(&a, &b, p), [6, 1]);
        let (q, r) = divrem_uni(&a, &[6, 1], p);
        assert_eq!((q, r), (vec![5, 1], vec![]));
        assert!(extends_over_closure(&[], &[vec![1, 1]], p));
        assert!(!extends_over_closure(&[vec![6, 1]], &[vec![6, 1]], p));
        assert!(extends_over_closure(&[a.to_vec()], &[vec![6, 1]], p));
        assert!(!extends_over_closure(&[vec![3]], &[], p));
    }

    proptest! {
        #[test]
        fn representative_independence(lambda in 1u32..7, g in 0u32..7, h in 0u32..7, x in 0u32..7) {
            prop_assume!(g != 0 || h != 0);
            let p = 7u64;
            let f = poly("y_4*y_2^2-3*y_3*y_1^2+y_4*y_1*y_2", 2, p);
            let layout = VariableLayout::multiproj(2);
            let mut a = vec![0u32; 8];
            a[layout.y(4)] = x;
            a[layout.y(3)] = 1;
            a[layout.y(2)] = g;
            a[layout.y(1)] = h;
            let mut b = a.clone();
            b[layout.y(2)] = g * lambda % 7;
            b[layout.y(1)] = h * lambda % 7;
            let (va, vb) = (f.evaluate_mod(&a) as u64, f.evaluate_mod(&b) as u64);
            prop_assert_eq!(vb, va * pow_mod(lambda as u64, 2, p) % p);
        }

        #[test]
        fn space_size(p in prop::sample::select(vec![2u32, 3, 5, 7]), n in 0usize..4) {
            let all = enumerate_proj_space(p, n, DEFAULT_CAP).unwrap();
            prop_assert_eq!(all.len() as u64, (p as u64 + 1).pow(n as u32));
            let distinct: std::collections::BTreeSet<_> = all.iter().collect();
            prop_assert_eq!(distinct.len(), all.len());
        }
    }
}
