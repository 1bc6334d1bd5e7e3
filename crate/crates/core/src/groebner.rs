//! Lex Gröbner bases and the ideal operations built on them: elimination,
//! saturation, radical membership and a Seidenberg-style radical closure.

use std::collections::{BTreeSet, HashSet};

use thiserror::Error;

use crate::coeff::FieldSpec;
use crate::poly::{squarefree_part, Monomial, Polynomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdealError {
    #[error("cannot saturate by the zero polynomial")]
    ZeroSaturation,
}

/// Generators of an ideal. When `is_reduced_gb` holds the generators are
/// the monic reduced lex basis sorted by increasing leading monomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IdealBasis {
    field: FieldSpec,
    nvars: usize,
    generators: Vec<Polynomial>,
    is_reduced_gb: bool,
}

impl IdealBasis {
    /// An unprocessed generating set; zero generators are dropped.
    pub fn new(field: FieldSpec, nvars: usize, generators: Vec<Polynomial>) -> Self {
        let generators = generators.into_iter().filter(|g| !g.is_zero()).collect();
        IdealBasis { field, nvars, generators, is_reduced_gb: false }
    }

    pub fn unit(field: FieldSpec, nvars: usize) -> Self {
        IdealBasis { field, nvars, generators: vec![Polynomial::one(field, nvars)], is_reduced_gb: true }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn is_reduced_gb(&self) -> bool {
        self.is_reduced_gb
    }

    /// True for the ideal `<1>` (only meaningful on a reduced basis).
    pub fn is_unit(&self) -> bool {
        self.generators.iter().any(Polynomial::is_constant)
    }

    /// True for `<0>`.
    pub fn is_zero_ideal(&self) -> bool {
        self.generators.is_empty()
    }

    /// A reduced basis of `self`, reusing it when already reduced.
    pub fn to_reduced(&self) -> IdealBasis {
        if self.is_reduced_gb {
            self.clone()
        } else {
            buchberger(&self.generators, self.field, self.nvars)
        }
    }

    /// Generators with `extra` appended (not reduced).
    pub fn with(&self, extra: impl IntoIterator<Item = Polynomial>) -> IdealBasis {
        let mut gens = self.generators.clone();
        gens.extend(extra);
        IdealBasis::new(self.field, self.nvars, gens)
    }

    /// Same ideal after a slot renaming that preserves the relative lex
    /// order of every slot in use; a reduced basis stays reduced.
    pub fn map_order_preserving(&self, f: impl Fn(&Polynomial) -> Polynomial) -> IdealBasis {
        let generators: Vec<Polynomial> = self.generators.iter().map(f).collect();
        let mut out = IdealBasis {
            field: self.field,
            nvars: generators.first().map_or(self.nvars, Polynomial::nvars),
            generators,
            is_reduced_gb: self.is_reduced_gb,
        };
        if out.is_reduced_gb {
            debug_assert!(out.generators.windows(2).all(|w| w[0].leading_monomial() < w[1].leading_monomial()));
            out.generators.sort_by(|a, b| a.leading_monomial().cmp(&b.leading_monomial()));
        }
        out
    }

    /// Equality of ideals: every generator of each reduces to zero modulo
    /// the other.
    pub fn same_ideal(&self, other: &IdealBasis) -> bool {
        let a = self.to_reduced();
        let b = other.to_reduced();
        a.generators.iter().all(|g| normal_form(g, &b).is_zero())
            && b.generators.iter().all(|g| normal_form(g, &a).is_zero())
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        normal_form(f, &self.to_reduced()).is_zero()
    }
}

/// Full reduction of `f` by the generators of `basis`.
pub fn normal_form(f: &Polynomial, basis: &IdealBasis) -> Polynomial {
    reduce(f, &basis.generators)
}

fn reduce(f: &Polynomial, divisors: &[Polynomial]) -> Polynomial {
    let mut f = f.clone();
    let mut rem = Vec::new();
    while let Some(lt) = f.leading_term().cloned() {
        let hit = divisors.iter().find(|g| g.leading_monomial().is_some_and(|m| m.divides(&lt.monomial)));
        match hit {
            Some(g) => {
                let gl = g.leading_term().unwrap();
                let m = gl.monomial.quotient_of(&lt.monomial);
                let c = lt.coeff.try_div(&gl.coeff).expect("nonzero leading coefficient");
                f = f.sub_mul_term(&c, &m, g);
            }
            None => {
                rem.push(lt);
                f = Polynomial::from_terms(f.field(), f.nvars(), f.terms()[1..].to_vec());
            }
        }
    }
    Polynomial::from_terms(f.field(), f.nvars(), rem)
}

/// `lcm/lt(f) * f - lcm/lt(g) * g`, scaled to avoid division.
pub fn s_polynomial(f: &Polynomial, g: &Polynomial) -> Polynomial {
    let (fl, gl) = (f.leading_term().unwrap(), g.leading_term().unwrap());
    let lcm = fl.monomial.lcm(&gl.monomial);
    let a = f.mul_term(&gl.coeff, &fl.monomial.quotient_of(&lcm));
    let b = g.mul_term(&fl.coeff, &gl.monomial.quotient_of(&lcm));
    a.sub(&b)
}

/// Reduced lex Gröbner basis of the ideal generated by `gens`.
///
/// Buchberger's algorithm with the normal selection strategy (smallest
/// lcm first), the coprime-leading-monomial criterion and the chain
/// criterion.
pub fn buchberger(gens: &[Polynomial], field: FieldSpec, nvars: usize) -> IdealBasis {
    let mut basis: Vec<Polynomial> = Vec::new();
    let mut pending: BTreeSet<(Monomial, usize, usize)> = BTreeSet::new();
    let mut pending_ids: HashSet<(usize, usize)> = HashSet::new();

    let push = |h: Polynomial,
                basis: &mut Vec<Polynomial>,
                pending: &mut BTreeSet<(Monomial, usize, usize)>,
                pending_ids: &mut HashSet<(usize, usize)>| {
        let k = basis.len();
        let hl = h.leading_monomial().unwrap().clone();
        for (i, g) in basis.iter().enumerate() {
            let lcm = g.leading_monomial().unwrap().lcm(&hl);
            pending.insert((lcm, i, k));
            pending_ids.insert((i, k));
        }
        basis.push(h);
    };

    for g in gens {
        let h = reduce(g, &basis);
        if h.is_zero() {
            continue;
        }
        if h.is_constant() {
            return IdealBasis::unit(field, nvars);
        }
        push(h.monic(), &mut basis, &mut pending, &mut pending_ids);
    }

    while let Some((lcm, i, j)) = pending.pop_first() {
        pending_ids.remove(&(i, j));
        let (li, lj) = (basis[i].leading_monomial().unwrap(), basis[j].leading_monomial().unwrap());
        if li.coprime(lj) {
            continue;
        }
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k].leading_monomial().unwrap().divides(&lcm)
                && !pending_ids.contains(&(i.min(k), i.max(k)))
                && !pending_ids.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        let h = reduce(&s_polynomial(&basis[i], &basis[j]), &basis);
        if h.is_zero() {
            continue;
        }
        if h.is_constant() {
            return IdealBasis::unit(field, nvars);
        }
        push(h.monic(), &mut basis, &mut pending, &mut pending_ids);
    }

    IdealBasis { field, nvars, generators: interreduce(basis), is_reduced_gb: true }
}

/// Minimalizes and fully reduces a Gröbner basis; output sorted by
/// increasing leading monomial.
fn interreduce(mut basis: Vec<Polynomial>) -> Vec<Polynomial> {
    basis.sort_by(|a, b| a.leading_monomial().cmp(&b.leading_monomial()));
    let mut minimal: Vec<Polynomial> = Vec::new();
    for g in basis {
        let lm = g.leading_monomial().unwrap();
        if !minimal.iter().any(|h| h.leading_monomial().unwrap().divides(lm)) {
            minimal.push(g);
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<Polynomial> =
            minimal.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, g)| g.clone()).collect();
        let g = &minimal[i];
        let lt = g.leading_term().unwrap();
        let tail = Polynomial::from_terms(g.field(), g.nvars(), g.terms()[1..].to_vec());
        let head = Polynomial::monomial(g.field(), lt.monomial.clone(), lt.coeff.clone());
        out.push(head.add(&reduce(&tail, &others)).monic());
    }
    out
}

/// Generators of a reduced basis that involve only the lowest `j` slots;
/// a reduced basis of the elimination ideal.
pub fn elimination_subbasis(basis: &IdealBasis, j: usize) -> IdealBasis {
    let cut = basis.nvars.saturating_sub(j);
    let generators = basis.generators.iter().filter(|g| g.top_slot().is_none_or(|s| s >= cut)).cloned().collect();
    IdealBasis { field: basis.field, nvars: basis.nvars, generators, is_reduced_gb: basis.is_reduced_gb }
}

/// `I + <1 - t*f>` in the ring with a fresh top slot `t`.
fn rabinowitsch(ideal: &IdealBasis, f: &Polynomial) -> Vec<Polynomial> {
    let mut gens: Vec<Polynomial> = ideal.generators.iter().map(Polynomial::with_top_slot).collect();
    let nv = ideal.nvars + 1;
    let t = Polynomial::var(ideal.field, nv, 0);
    gens.push(Polynomial::one(ideal.field, nv).sub(&t.mul(&f.with_top_slot())));
    gens
}

/// Reduced basis of `I : f^∞`.
pub fn ideal_saturate(ideal: &IdealBasis, f: &Polynomial) -> Result<IdealBasis, IdealError> {
    if f.is_zero() {
        return Err(IdealError::ZeroSaturation);
    }
    let ext = buchberger(&rabinowitsch(ideal, f), ideal.field, ideal.nvars + 1);
    let generators = ext.generators.iter().filter(|g| !g.uses_slot(0)).map(Polynomial::without_top_slot).collect();
    Ok(IdealBasis { field: ideal.field, nvars: ideal.nvars, generators, is_reduced_gb: true })
}

/// `f ∈ √I`, decided by `1 ∈ I + <1 - t*f>`.
pub fn radical_membership(f: &Polynomial, ideal: &IdealBasis) -> bool {
    if f.is_zero() {
        return true;
    }
    buchberger(&rabinowitsch(ideal, f), ideal.field, ideal.nvars + 1).is_unit()
}

/// Monic generator of `I ∩ F[slot]`, if that ideal is nonzero.
pub fn univariate_eliminant(ideal: &IdealBasis, slot: usize) -> Option<Polynomial> {
    let basis = ideal.to_reduced();
    if basis.is_unit() {
        return Some(Polynomial::one(basis.field, basis.nvars));
    }
    let only_slot = |g: &&Polynomial| g.top_slot() == Some(slot) && g.support().iter().filter(|&&u| u).count() == 1;
    let lowest_used = basis
        .generators
        .iter()
        .flat_map(|g| g.support().into_iter().enumerate().filter(|(_, u)| *u).map(|(s, _)| s))
        .max();
    if lowest_used.is_none_or(|s| s <= slot) {
        return basis.generators.iter().find(only_slot).cloned();
    }
    // Move `slot` to the bottom, keeping the relative order of the others.
    let nv = basis.nvars;
    let map: Vec<usize> = (0..nv)
        .map(|s| match s.cmp(&slot) {
            std::cmp::Ordering::Less => s,
            std::cmp::Ordering::Equal => nv - 1,
            std::cmp::Ordering::Greater => s - 1,
        })
        .collect();
    let mut back = vec![0; nv];
    for (s, &t) in map.iter().enumerate() {
        back[t] = s;
    }
    let moved: Vec<Polynomial> = basis.generators.iter().map(|g| g.rename(&map, nv)).collect();
    let gb = buchberger(&moved, basis.field, nv);
    gb.generators.iter().find(|g| g.top_slot() == Some(nv - 1)).map(|g| g.rename(&back, nv))
}

/// An ideal `J` with `I ⊆ J ⊆ √I`: repeatedly adjoins the squarefree part
/// of every univariate eliminant until nothing changes.
pub fn heuristic_radical(ideal: &IdealBasis) -> IdealBasis {
    let mut current = ideal.to_reduced();
    loop {
        if current.is_unit() || current.is_zero_ideal() {
            return current;
        }
        let used: Vec<usize> = {
            let mut u = vec![false; current.nvars];
            for g in &current.generators {
                for (s, b) in g.support().into_iter().enumerate() {
                    u[s] |= b;
                }
            }
            (0..current.nvars).filter(|&s| u[s]).collect()
        };
        let mut additions = Vec::new();
        for slot in used {
            if let Some(m) = univariate_eliminant(&current, slot) {
                let s = squarefree_part(&m).expect("eliminant is nonzero");
                if !normal_form(&s, &current).is_zero() {
                    additions.push(s);
                }
            }
        }
        if additions.is_empty() {
            return current;
        }
        current = current.with(additions).to_reduced();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_polynomial;
    use crate::poly::VariableLayout;

    fn lay() -> VariableLayout {
        VariableLayout::multiproj(2)
    }

    fn q(s: &str) -> Polynomial {
        parse_polynomial(s, &lay(), FieldSpec::RATIONALS).unwrap()
    }

    fn ideal(gens: &[&str]) -> IdealBasis {
        IdealBasis::new(FieldSpec::RATIONALS, 8, gens.iter().map(|s| q(s)).collect())
    }

    fn gb(gens: &[&str]) -> IdealBasis {
        ideal(gens).to_reduced()
    }

    fn texts(b: &IdealBasis) -> Vec<String> {
        b.generators().iter().map(|g| g.to_text(&lay())).collect()
    }

    pub(crate) fn assert_is_groebner(b: &IdealBasis) {
        let g = b.generators();
        for i in 0..g.len() {
            for j in i + 1..g.len() {
                assert!(reduce(&s_polynomial(&g[i], &g[j]), g).is_zero());
                assert!(!g[i].leading_monomial().unwrap().divides(g[j].leading_monomial().unwrap()));
                assert!(!g[j].leading_monomial().unwrap().divides(g[i].leading_monomial().unwrap()));
            }
        }
    }

    #[test]
    fn normal_form_examples() {
        let b = gb(&["y_2-y_1", "y_1^2-1"]);
        assert!(normal_form(&q("y_2*y_1-1"), &b).is_zero());
        assert_eq!(normal_form(&q("y_2"), &gb(&["y_1"])), q("y_2"));
        for g in b.generators() {
            assert!(normal_form(g, &b).is_zero());
        }
    }

    #[test]
    fn buchberger_examples() {
        let l = VariableLayout::affine(2);
        let x = |s| parse_polynomial(s, &l, FieldSpec::RATIONALS).unwrap();
        let b = buchberger(&[x("x_2*x_1-1"), x("x_1^2-1")], FieldSpec::RATIONALS, 2);
        assert_eq!(b.generators(), &[x("x_1^2-1"), x("x_2-x_1")]);
        let b = buchberger(&[x("x_2*x_1-1")], FieldSpec::RATIONALS, 2);
        assert_eq!(b.generators(), &[x("x_2*x_1-1")]);
        assert_eq!(texts(&gb(&["y_1", "y_1-1"])), ["1"]);
        assert!(gb(&["0"]).is_zero_ideal());
    }

    #[test]
    fn buchberger_is_order_independent() {
        let a = gb(&["y_4*y_2-y_3*y_1", "y_1^2-y_1", "y_2*y_1-y_2-y_1+1", "y_3^2-y_3"]);
        let b = gb(&["y_3^2-y_3", "y_2*y_1-y_2-y_1+1", "y_1^2-y_1", "y_4*y_2-y_3*y_1"]);
        assert_eq!(a, b);
        assert_is_groebner(&a);
    }

    #[test]
    fn elimination_examples() {
        let l = VariableLayout::affine(2);
        let x = |s| parse_polynomial(s, &l, FieldSpec::RATIONALS).unwrap();
        let b = buchberger(&[x("x_2*x_1-1")], FieldSpec::RATIONALS, 2);
        assert!(elimination_subbasis(&b, 1).is_zero_ideal());
        let b = buchberger(&[x("x_1^2-1"), x("x_2-x_1")], FieldSpec::RATIONALS, 2);
        assert_eq!(elimination_subbasis(&b, 1).generators(), &[x("x_1^2-1")]);
        let unit = IdealBasis::unit(FieldSpec::RATIONALS, 2);
        assert!(elimination_subbasis(&unit, 1).is_unit());
    }

    #[test]
    fn saturation_examples() {
        let s = ideal_saturate(&gb(&["y_2*y_1", "y_1^2-y_1"]), &q("y_1")).unwrap();
        assert_eq!(texts(&s), ["y_1-1", "y_2"]);
        assert!(ideal_saturate(&gb(&["y_1^2"]), &q("y_1")).unwrap().is_unit());
        assert_eq!(texts(&ideal_saturate(&gb(&["y_2-1"]), &q("y_1")).unwrap()), ["y_2-1"]);
        assert_eq!(
            ideal_saturate(&gb(&["y_1"]), &Polynomial::zero(FieldSpec::RATIONALS, 8)),
            Err(IdealError::ZeroSaturation)
        );
    }

    #[test]
    fn radical_membership_examples() {
        assert!(radical_membership(&q("y_1"), &gb(&["y_1^2"])));
        assert!(!radical_membership(&q("y_1-1"), &gb(&["y_1^2"])));
        assert!(radical_membership(&q("z_2"), &gb(&["z_2*z_4", "z_2-z_4"])));
    }

    #[test]
    fn heuristic_radical_examples() {
        assert_eq!(texts(&heuristic_radical(&gb(&["y_1^2"]))), ["y_1"]);
        assert_eq!(texts(&heuristic_radical(&gb(&["y_1^2-y_1"]))), ["y_1^2-y_1"]);
        assert_eq!(texts(&heuristic_radical(&gb(&["(y_1-1)^2", "y_2*y_1-y_2"]))), ["y_1-1"]);
        // the eliminant in y_2 needs a reordered basis
        assert_eq!(texts(&heuristic_radical(&gb(&["y_2^2", "y_1^2-y_1"]))), ["y_1^2-y_1", "y_2"]);
    }

    #[test]
    fn eliminant_with_reordering() {
        let i = gb(&["y_2-y_1^2", "y_1^3-1"]);
        // y_2 = y_1^2 with y_1^3 = 1 gives y_2^3 = 1
        assert_eq!(univariate_eliminant(&i, lay().y(2)).unwrap(), q("y_2^3-1"));
        assert!(univariate_eliminant(&gb(&["y_2*y_1"]), lay().y(2)).is_none());
    }
}
