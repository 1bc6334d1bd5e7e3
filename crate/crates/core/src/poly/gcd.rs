//! Multivariate gcd by primitive remainder sequences, one variable at a
//! time, and the squarefree parts built on top of it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{Monomial, PolyError, Polynomial};

impl Polynomial {
    /// Monic gcd; `gcd(f, 0) = monic(f)` and `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check(other)?;
        Ok(gcd_rec(self, other))
    }

    /// Monic gcd of the coefficients of `self` as a polynomial in `slot`.
    pub fn content_in(&self, slot: usize) -> Polynomial {
        let mut coeffs: Vec<Polynomial> = self.coefficients_in(slot).into_iter().filter(|c| !c.is_zero()).collect();
        // small coefficients first so a constant gcd shows up early
        coeffs.sort_by_key(|c| c.terms.len());
        coeffs.iter().fold(Polynomial::zero(self.field, self.nvars), |acc, c| {
            if acc.is_constant() {
                acc
            } else {
                gcd_rec(&acc, c)
            }
        })
    }

    /// `self / content_in(slot)`, scaled to be monic so that rational
    /// coefficients stay small along a remainder sequence.
    pub fn primitive_part_in(&self, slot: usize) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.content_in(slot);
        self.div_exact(&c).expect("content divides").monic()
    }
}

fn gcd_rec(f: &Polynomial, g: &Polynomial) -> Polynomial {
    if f.is_zero() {
        return g.monic();
    }
    if g.is_zero() {
        return f.monic();
    }
    if f.is_constant() || g.is_constant() {
        return Polynomial::one(f.field, f.nvars);
    }
    if f.terms.len() == 1 || g.terms.len() == 1 {
        return monomial_gcd(f, g);
    }
    let (mf, f) = split_monomial_content(f);
    let (mg, g) = split_monomial_content(g);
    if !mf.is_one() || !mg.is_one() {
        let m = monomial_gcd(&mf, &mg);
        return m.mul(&gcd_rec(&f, &g));
    }
    // a variable used on one side only cannot occur in the gcd
    let (sf, sg) = (f.support(), g.support());
    if let Some(v) = (0..f.nvars).find(|&v| sf[v] != sg[v]) {
        return if sf[v] { gcd_rec(&f.content_in(v), &g) } else { gcd_rec(&f, &g.content_in(v)) };
    }
    // shortest remainder sequence first
    let v = (0..f.nvars)
        .filter(|&v| sf[v])
        .min_by_key(|&v| f.degree_in(v).max(g.degree_in(v)))
        .expect("nonconstant polynomials use a slot");
    let cf = f.content_in(v);
    let cg = g.content_in(v);
    let c = gcd_rec(&cf, &cg);
    let pf = integral(&f.div_exact(&cf).expect("content divides"));
    let pg = integral(&g.div_exact(&cg).expect("content divides"));
    let (mut a, mut b) = if pf.degree_in(v) >= pg.degree_in(v) { (pf, pg) } else { (pg, pf) };
    // subresultant PRS: exact divisions keep the coefficients in check
    // without a content computation per step
    let one = Polynomial::one(f.field, f.nvars);
    let (mut lc_a, mut h) = (one.clone(), one);
    loop {
        let delta = a.degree_in(v).expect("nonzero") - b.degree_in(v).expect("nonzero");
        let r = pseudo_remainder(&a, &b, v);
        if r.is_zero() {
            break;
        }
        if r.degree_in(v) == Some(0) {
            // b and a are coprime as primitive polynomials in v
            return c;
        }
        let divisor = lc_a.mul(&h.pow(delta));
        a = b;
        b = r.div_exact(&divisor).expect("subresultant division is exact");
        lc_a = a.coefficients_in(v).pop().expect("nonzero");
        h = if delta == 0 {
            h
        } else {
            lc_a.pow(delta).div_exact(&h.pow(delta - 1)).expect("subresultant division is exact")
        };
    }
    c.mul(&b.primitive_part_in(v)).monic()
}

/// Over Q, the integer-coefficient multiple of `f` with coprime coefficients,
/// so that `Ratio` arithmetic along a remainder sequence never reduces a
/// nontrivial fraction. Over F_p, `f` made monic.
fn integral(f: &Polynomial) -> Polynomial {
    if !f.field.is_rational() {
        return f.monic();
    }
    let ratios = || f.terms.iter().map(|t| t.coeff.as_rational().expect("rational field"));
    let den = ratios().fold(BigInt::one(), |l, r| l.lcm(r.denom()));
    let num = ratios().fold(BigInt::zero(), |g, r| g.gcd(&(r.numer() * (&den / r.denom()))));
    if num.is_zero() {
        return f.clone();
    }
    f.scale(&f.field.from_bigint(&den).try_div(&f.field.from_bigint(&num)).expect("nonzero"))
}

/// `(m, f / m)` for the largest monomial `m` dividing every term, with `m` monic.
fn split_monomial_content(f: &Polynomial) -> (Polynomial, Polynomial) {
    let m = monomial_gcd(f, f);
    if m.is_one() {
        return (m, f.clone());
    }
    let q = f.div_exact(&m).expect("monomial content divides");
    (m, q)
}

/// Common power of each variable across all terms of both; the gcd when one
/// side is a single term.
fn monomial_gcd(f: &Polynomial, g: &Polynomial) -> Polynomial {
    let mut exps: Vec<u32> = vec![u32::MAX; f.nvars];
    for t in f.terms.iter().chain(&g.terms) {
        for (e, &x) in exps.iter_mut().zip(t.monomial.exponents()) {
            *e = (*e).min(x);
        }
    }
    Polynomial::monomial(f.field, Monomial::from_exponents(&exps), f.field.one())
}

/// `lc(b)^(deg a - deg b + 1) * a mod b` with respect to `slot`.
fn pseudo_remainder(a: &Polynomial, b: &Polynomial, slot: usize) -> Polynomial {
    let db = b.degree_in(slot).expect("nonzero divisor");
    let lcb = b.coefficients_in(slot).pop().expect("nonzero divisor");
    let mut a = a.clone();
    let mut steps = a.degree_in(slot).map_or(0, |da| (da + 1).saturating_sub(db));
    while let Some(da) = a.degree_in(slot) {
        if da < db {
            break;
        }
        let lca = a.coefficients_in(slot).pop().expect("nonzero");
        let shift = Monomial::var(a.nvars, slot, da - db);
        let one = a.field.one();
        a = a.mul(&lcb).sub(&lca.mul(&b.mul_term(&one, &shift)));
        steps -= 1;
    }
    a.mul(&lcb.pow(steps))
}

/// Product of the distinct irreducible factors of `f`, monic.
///
/// In characteristic 0 this is `f / gcd(f, ∂f/∂v for all v)`. In
/// characteristic p that quotient misses factors whose multiplicity is
/// divisible by p; those are collected from the remaining exact p-th power.
pub fn squarefree_part(f: &Polynomial) -> Result<Polynomial, PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    if f.is_constant() {
        return Ok(Polynomial::one(f.field, f.nvars));
    }
    let support = f.support();
    let mut d = f.monic();
    for (s, _) in support.iter().enumerate().filter(|(_, &u)| u) {
        if d.is_constant() {
            break;
        }
        d = gcd_rec(&d, &f.derivative(s));
    }
    let w = f.div_exact(&d).expect("gcd divides").monic();
    if f.field.is_rational() {
        return Ok(w);
    }
    let mut r = f.clone();
    loop {
        let g = gcd_rec(&r, &w);
        if g.is_constant() {
            break;
        }
        r = r.div_exact(&g).expect("gcd divides");
    }
    if r.is_constant() {
        return Ok(w);
    }
    let root = pth_root(&r);
    Ok(w.mul(&squarefree_part(&root)?).monic())
}

/// `s` with `s^p = r`, for `r` whose partial derivatives all vanish.
fn pth_root(r: &Polynomial) -> Polynomial {
    let p = r.field.characteristic();
    let terms = r
        .terms
        .iter()
        .map(|t| {
            let exps: Vec<u32> = t
                .monomial
                .exponents()
                .iter()
                .map(|&e| {
                    debug_assert_eq!(e % p, 0);
                    e / p
                })
                .collect();
            // a^p = a in F_p
            super::Term { monomial: Monomial::from_exponents(&exps), coeff: t.coeff.clone() }
        })
        .collect();
    Polynomial::from_terms(r.field, r.nvars, terms)
}

/// Generator of `<f> : <q>^∞`: strips every factor shared with `q`.
pub fn principal_saturate(f: &Polynomial, q: &Polynomial) -> Result<Polynomial, PolyError> {
    f.check(q)?;
    if f.is_zero() || q.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let mut f = f.clone();
    loop {
        let g = gcd_rec(&f, q);
        if g.is_constant() {
            return Ok(f.monic());
        }
        f = f.div_exact(&g).expect("gcd divides");
    }
}
