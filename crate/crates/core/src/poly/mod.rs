//! Sparse multivariate polynomials under lex order.

mod gcd;
mod layout;
mod text;

use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;
use thiserror::Error;

use crate::coeff::{Coefficient, FieldSpec};

pub use gcd::{principal_saturate, squarefree_part};
pub use layout::{LayoutError, VarKind, VariableLayout};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("slot count mismatch: {0} vs {1}")]
    SlotMismatch(usize, usize),
    #[error("no image given for occurring slot {0}")]
    MissingImage(usize),
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
}

/// Exponent vector; index 0 is the most significant slot.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(SmallVec<[u32; 16]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn var(nvars: usize, slot: usize, e: u32) -> Self {
        let mut m = Self::one(nvars);
        m.0[slot] = e;
        m
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn exponent(&self, slot: usize) -> u32 {
        self.0[slot]
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Lowest-index (most significant) slot with a positive exponent.
    pub fn top_slot(&self) -> Option<usize> {
        self.0.iter().position(|&e| e > 0)
    }
}

/// Lex comparison of two monomials; the layout only fixes the slot count.
pub fn compare_monomials(a: &Monomial, b: &Monomial, layout: &VariableLayout) -> Result<Ordering, PolyError> {
    let n = layout.nvars();
    if a.nvars() != n {
        return Err(PolyError::SlotMismatch(a.nvars(), n));
    }
    if b.nvars() != n {
        return Err(PolyError::SlotMismatch(b.nvars(), n));
    }
    Ok(a.cmp(b))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub monomial: Monomial,
    pub coeff: Coefficient,
}

/// A polynomial with terms sorted strictly decreasing in lex order and no
/// zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    field: FieldSpec,
    nvars: usize,
    terms: Vec<Term>,
}

impl Polynomial {
    pub fn zero(field: FieldSpec, nvars: usize) -> Self {
        Polynomial { field, nvars, terms: Vec::new() }
    }

    pub fn constant(field: FieldSpec, nvars: usize, c: Coefficient) -> Self {
        assert_eq!(c.field(), field, "constant from a different field");
        Self::monomial(field, Monomial::one(nvars), c)
    }

    pub fn one(field: FieldSpec, nvars: usize) -> Self {
        Self::constant(field, nvars, field.one())
    }

    pub fn monomial(field: FieldSpec, m: Monomial, c: Coefficient) -> Self {
        let nvars = m.nvars();
        let terms = if c.is_zero() { Vec::new() } else { vec![Term { monomial: m, coeff: c }] };
        Polynomial { field, nvars, terms }
    }

    pub fn var(field: FieldSpec, nvars: usize, slot: usize) -> Self {
        Self::monomial(field, Monomial::var(nvars, slot, 1), field.one())
    }

    /// Builds a polynomial from terms in any order; like terms are merged.
    pub fn from_terms(field: FieldSpec, nvars: usize, mut terms: Vec<Term>) -> Self {
        terms.sort_by(|a, b| b.monomial.cmp(&a.monomial));
        let mut out: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            debug_assert_eq!(t.monomial.nvars(), nvars);
            match out.last_mut() {
                Some(last) if last.monomial == t.monomial => {
                    last.coeff = &last.coeff + &t.coeff;
                    if last.coeff.is_zero() {
                        out.pop();
                    }
                }
                _ => {
                    if !t.coeff.is_zero() {
                        out.push(t)
                    }
                }
            }
        }
        Polynomial { field, nvars, terms: out }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero constant.
    pub fn is_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].monomial.is_one()
    }

    pub fn is_one(&self) -> bool {
        self.is_constant() && self.terms[0].coeff.is_one()
    }

    pub fn leading_term(&self) -> Option<&Term> {
        self.terms.first()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.monomial)
    }

    pub fn leading_coeff(&self) -> Option<&Coefficient> {
        self.terms.first().map(|t| &t.coeff)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|t| t.monomial.degree()).max().unwrap_or(0)
    }

    /// Maximum exponent of `slot`; `None` for the zero polynomial.
    pub fn degree_in(&self, slot: usize) -> Option<u32> {
        self.terms.iter().map(|t| t.monomial.exponent(slot)).max()
    }

    /// Slots with a positive exponent in some term.
    pub fn support(&self) -> Vec<bool> {
        let mut used = vec![false; self.nvars];
        for t in &self.terms {
            for (u, &e) in used.iter_mut().zip(t.monomial.exponents()) {
                *u |= e > 0;
            }
        }
        used
    }

    pub fn uses_slot(&self, slot: usize) -> bool {
        self.terms.iter().any(|t| t.monomial.exponent(slot) > 0)
    }

    /// Most significant slot occurring in the polynomial.
    pub fn top_slot(&self) -> Option<usize> {
        self.support().iter().position(|&u| u)
    }

    fn check(&self, other: &Self) -> Result<(), PolyError> {
        if self.field != other.field {
            return Err(PolyError::FieldMismatch(self.field, other.field));
        }
        if self.nvars != other.nvars {
            return Err(PolyError::SlotMismatch(self.nvars, other.nvars));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check(other)?;
        Ok(self.merge(other, false))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.check(other)?;
        Ok(self.merge(other, true))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn add(&self, other: &Self) -> Self {
        self.try_add(other).expect("incompatible polynomials")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.try_sub(other).expect("incompatible polynomials")
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).expect("incompatible polynomials")
    }

    pub fn neg(&self) -> Self {
        Polynomial {
            field: self.field,
            nvars: self.nvars,
            terms: self.terms.iter().map(|t| Term { monomial: t.monomial.clone(), coeff: -&t.coeff }).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.field, self.nvars);
        for _ in 0..e {
            acc = acc.mul_unchecked(self);
        }
        acc
    }

    fn merge(&self, other: &Self, negate: bool) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match a[i].monomial.cmp(&b[j].monomial) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate { -&b[j].coeff } else { b[j].coeff.clone() };
                    out.push(Term { monomial: b[j].monomial.clone(), coeff: c });
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { &a[i].coeff - &b[j].coeff } else { &a[i].coeff + &b[j].coeff };
                    if !c.is_zero() {
                        out.push(Term { monomial: a[i].monomial.clone(), coeff: c });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        for t in &b[j..] {
            let c = if negate { -&t.coeff } else { t.coeff.clone() };
            out.push(Term { monomial: t.monomial.clone(), coeff: c });
        }
        Polynomial { field: self.field, nvars: self.nvars, terms: out }
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.field, self.nvars);
        }
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(Term { monomial: a.monomial.mul(&b.monomial), coeff: &a.coeff * &b.coeff });
            }
        }
        Self::from_terms(self.field, self.nvars, terms)
    }

    /// `c * m * self`.
    pub fn mul_term(&self, c: &Coefficient, m: &Monomial) -> Self {
        if c.is_zero() {
            return Self::zero(self.field, self.nvars);
        }
        // Multiplying by a monomial preserves the term order.
        Polynomial {
            field: self.field,
            nvars: self.nvars,
            terms: self.terms.iter().map(|t| Term { monomial: t.monomial.mul(m), coeff: &t.coeff * c }).collect(),
        }
    }

    pub fn scale(&self, c: &Coefficient) -> Self {
        self.mul_term(c, &Monomial::one(self.nvars))
    }

    /// `self - c * m * g`, merged in one pass.
    pub(crate) fn sub_mul_term(&self, c: &Coefficient, m: &Monomial, g: &Self) -> Self {
        self.merge(&g.mul_term(c, m), true)
    }

    /// Leading coefficient scaled to 1; zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            None => self.clone(),
            Some(c) if c.is_one() => self.clone(),
            Some(c) => self.scale(&c.inverse().expect("nonzero leading coefficient")),
        }
    }

    /// Simultaneous substitution; `images[s]` replaces slot `s`. Images may
    /// live in a ring with a different slot count (all images must agree).
    pub fn substitute(&self, images: &[Option<Polynomial>]) -> Result<Polynomial, PolyError> {
        if images.len() != self.nvars {
            return Err(PolyError::SlotMismatch(images.len(), self.nvars));
        }
        let target = images.iter().flatten().next().map_or(self.nvars, |p| p.nvars);
        for img in images.iter().flatten() {
            if img.field != self.field {
                return Err(PolyError::FieldMismatch(self.field, img.field));
            }
            if img.nvars != target {
                return Err(PolyError::SlotMismatch(img.nvars, target));
            }
        }
        let mut acc = Self::zero(self.field, target);
        for t in &self.terms {
            let mut prod = Self::constant(self.field, target, t.coeff.clone());
            for (s, &e) in t.monomial.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let img = images[s].as_ref().ok_or(PolyError::MissingImage(s))?;
                prod = prod.mul_unchecked(&img.pow(e));
            }
            acc = acc.merge(&prod, false);
        }
        Ok(acc)
    }

    /// Moves the exponent of slot `s` to slot `map[s]` (adding when two
    /// slots collide) in a ring with `target_nvars` slots.
    pub fn rename(&self, map: &[usize], target_nvars: usize) -> Polynomial {
        assert_eq!(map.len(), self.nvars);
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut m = Monomial::one(target_nvars);
                for (s, &e) in t.monomial.exponents().iter().enumerate() {
                    m.0[map[s]] += e;
                }
                Term { monomial: m, coeff: t.coeff.clone() }
            })
            .collect();
        Self::from_terms(self.field, target_nvars, terms)
    }

    /// Embeds into a ring with one extra slot placed above all others.
    pub fn with_top_slot(&self) -> Polynomial {
        let map: Vec<usize> = (1..=self.nvars).collect();
        // Order is preserved, so no re-sort is needed; go through rename for
        // simplicity.
        self.rename(&map, self.nvars + 1)
    }

    /// Drops the top slot; the caller guarantees it does not occur.
    pub fn without_top_slot(&self) -> Polynomial {
        debug_assert!(!self.uses_slot(0));
        Polynomial {
            field: self.field,
            nvars: self.nvars - 1,
            terms: self
                .terms
                .iter()
                .map(|t| Term { monomial: Monomial(SmallVec::from_slice(&t.monomial.0[1..])), coeff: t.coeff.clone() })
                .collect(),
        }
    }

    pub fn derivative(&self, slot: usize) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .filter(|t| t.monomial.exponent(slot) > 0)
            .map(|t| {
                let e = t.monomial.exponent(slot);
                let mut m = t.monomial.clone();
                m.0[slot] -= 1;
                Term { monomial: m, coeff: &t.coeff * &self.field.from_i64(e as i64) }
            })
            .collect();
        Self::from_terms(self.field, self.nvars, terms)
    }

    /// Evaluates at a full point.
    pub fn evaluate(&self, point: &[Coefficient]) -> Coefficient {
        assert_eq!(point.len(), self.nvars);
        let mut acc = self.field.zero();
        for t in &self.terms {
            let mut v = t.coeff.clone();
            for (s, &e) in t.monomial.exponents().iter().enumerate() {
                if e > 0 {
                    v = &v * &point[s].pow(e);
                }
            }
            acc = &acc + &v;
        }
        acc
    }

    /// Fast evaluation over `F_p` with residues given as `u32`.
    pub fn evaluate_mod(&self, point: &[u32]) -> u32 {
        let p = self.field.characteristic() as u64;
        assert!(p > 0, "evaluate_mod needs a prime field");
        let mut acc = 0u64;
        for t in &self.terms {
            let mut v = t.coeff.as_residue().unwrap() as u64;
            for (s, &e) in t.monomial.exponents().iter().enumerate() {
                for _ in 0..e {
                    v = v * point[s] as u64 % p;
                }
            }
            acc = (acc + v) % p;
        }
        acc as u32
    }

    /// Coefficients of `self` viewed as a univariate polynomial in `slot`,
    /// indexed by degree.
    pub fn coefficients_in(&self, slot: usize) -> Vec<Polynomial> {
        let deg = self.degree_in(slot).unwrap_or(0) as usize;
        let mut buckets: Vec<Vec<Term>> = vec![Vec::new(); deg + 1];
        for t in &self.terms {
            let e = t.monomial.exponent(slot) as usize;
            let mut m = t.monomial.clone();
            m.0[slot] = 0;
            buckets[e].push(Term { monomial: m, coeff: t.coeff.clone() });
        }
        buckets.into_iter().map(|ts| Self::from_terms(self.field, self.nvars, ts)).collect()
    }

    /// Exact quotient `self / g`, or `None` when `g` does not divide.
    pub fn div_exact(&self, g: &Polynomial) -> Option<Polynomial> {
        let (q, r) = self.div_rem(g)?;
        r.is_zero().then_some(q)
    }

    /// Lex multivariate division by a single divisor.
    pub fn div_rem(&self, g: &Polynomial) -> Option<(Polynomial, Polynomial)> {
        let glt = g.leading_term()?;
        let ginv = glt.coeff.inverse().ok()?;
        let mut q = Vec::new();
        let mut r = Vec::new();
        let mut f = self.clone();
        while let Some(lt) = f.terms.first().cloned() {
            if glt.monomial.divides(&lt.monomial) {
                let m = glt.monomial.quotient_of(&lt.monomial);
                let c = &lt.coeff * &ginv;
                f = f.sub_mul_term(&c, &m, g);
                q.push(Term { monomial: m, coeff: c });
            } else {
                r.push(lt);
                f.terms.remove(0);
            }
        }
        Some((Self::from_terms(self.field, self.nvars, q), Self::from_terms(self.field, self.nvars, r)))
    }

    /// Splits by unfrozen part: returns the lex-greatest monomial in the
    /// slots before `boundary` and the full coefficient (a polynomial in the
    /// slots from `boundary` on) that multiplies it.
    ///
    /// In the multi-projective layout `boundary = 2n` separates `y` from `z`.
    pub fn lead_split(&self, boundary: usize) -> Result<(Monomial, Polynomial), PolyError> {
        let lead = self.leading_monomial().ok_or(PolyError::ZeroPolynomial)?;
        let mut head = Monomial::one(self.nvars);
        head.0[..boundary].copy_from_slice(&lead.0[..boundary]);
        let terms = self
            .terms
            .iter()
            .take_while(|t| t.monomial.0[..boundary] == head.0[..boundary])
            .map(|t| {
                let mut m = t.monomial.clone();
                m.0[..boundary].iter_mut().for_each(|e| *e = 0);
                Term { monomial: m, coeff: t.coeff.clone() }
            })
            .collect();
        Ok((head, Self::from_terms(self.field, self.nvars, terms)))
    }
}

impl PartialOrd for Polynomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Polynomial {
    /// Term-by-term lex comparison; coefficients break ties by their text.
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms().iter().zip(other.terms()) {
            let c = a.monomial.cmp(&b.monomial).then_with(|| a.coeff.to_string().cmp(&b.coeff.to_string()));
            if c.is_ne() {
                return c;
            }
        }
        self.terms().len().cmp(&other.terms().len())
    }
}

impl fmt::Display for Polynomial {
    /// Generic rendering with slot names `v0, v1, ...`; use
    /// [`Polynomial::to_text`] for layout-aware output.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|s| format!("v{s}")).collect();
        let order: Vec<usize> = (0..self.nvars).collect();
        write!(f, "{}", text::render(self, &names, &order))
    }
}
