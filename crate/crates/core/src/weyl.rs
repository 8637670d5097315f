//! Exact arithmetic in the Weyl algebra `D_{x,t}`, its homogenization `D^(h)_{x,t}`
//! (where `∂_i x_i - x_i ∂_i = h`), and the commutative associated graded ring.
//!
//! Operators are stored in left normal form: every term is `c · x^a t^u ∂^b ∂_t^v h^e`
//! with coordinates to the left of derivations. The three algebras share one
//! representation and differ only in the commutation rule used by [`Operator::multiply`].

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Exact rational coefficient.
pub type Rat = BigRational;

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Which commutation rule the algebra uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgebraKind {
    /// `∂x - x∂ = 1`; the `h` exponent is always zero.
    Weyl,
    /// `∂x - x∂ = h`, `h` central.
    Homogenized,
    /// All brackets vanish (the graded rings `gr^F`, `gr^V` of symbols).
    Commutative,
}

/// Variable counts and commutation rule of an algebra.
///
/// Exponent vectors are laid out as `[x_1..x_n, t_1..t_p, ∂_1..∂_n, ∂_t1..∂_tp, h]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub n: usize,
    pub p: usize,
    pub kind: AlgebraKind,
}

impl Signature {
    pub fn new(n: usize, p: usize, kind: AlgebraKind) -> Result<Arc<Signature>> {
        if n + p == 0 {
            return Err(Error::InvalidSignature("n + p must be at least 1".into()));
        }
        Ok(Arc::new(Signature { n, p, kind }))
    }

    /// The zero-variable algebra (the ground field), which appears as the restriction
    /// of a module on the `t`-line alone.
    pub fn ground(kind: AlgebraKind) -> Arc<Signature> {
        Arc::new(Signature { n: 0, p: 0, kind })
    }

    pub fn weyl(n: usize, p: usize) -> Arc<Signature> {
        Arc::new(Signature { n, p, kind: AlgebraKind::Weyl })
    }

    pub fn homogenized(n: usize, p: usize) -> Arc<Signature> {
        Arc::new(Signature { n, p, kind: AlgebraKind::Homogenized })
    }

    pub fn commutative(n: usize, p: usize) -> Arc<Signature> {
        Arc::new(Signature { n, p, kind: AlgebraKind::Commutative })
    }

    pub fn with_kind(&self, kind: AlgebraKind) -> Arc<Signature> {
        Arc::new(Signature { n: self.n, p: self.p, kind })
    }

    /// Same kind, `t`-variables dropped.
    pub fn restricted(&self) -> Arc<Signature> {
        Arc::new(Signature { n: self.n, p: 0, kind: self.kind })
    }

    pub fn is_commutative(&self) -> bool {
        self.kind == AlgebraKind::Commutative
    }

    /// Number of coordinate/derivation pairs.
    pub fn pairs(&self) -> usize {
        self.n + self.p
    }

    /// Length of an exponent vector.
    pub fn width(&self) -> usize {
        2 * self.pairs() + 1
    }

    pub fn x_index(&self, i: usize) -> usize {
        i
    }

    pub fn t_index(&self, j: usize) -> usize {
        self.n + j
    }

    pub fn dx_index(&self, i: usize) -> usize {
        self.pairs() + i
    }

    pub fn dt_index(&self, j: usize) -> usize {
        self.pairs() + self.n + j
    }

    pub fn h_index(&self) -> usize {
        2 * self.pairs()
    }

    /// Printable names in exponent-vector order.
    pub fn var_names(&self) -> Vec<String> {
        let mut names = Vec::with_capacity(self.width());
        for i in 0..self.n {
            names.push(format!("x{}", i + 1));
        }
        for j in 0..self.p {
            names.push(if self.p == 1 { "t".to_string() } else { format!("t{}", j + 1) });
        }
        for i in 0..self.n {
            names.push(format!("dx{}", i + 1));
        }
        for j in 0..self.p {
            names.push(if self.p == 1 { "dt".to_string() } else { format!("dt{}", j + 1) });
        }
        names.push("h".to_string());
        names
    }
}

pub(crate) fn same_signature(a: &Arc<Signature>, b: &Arc<Signature>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Exponent vector of a normally ordered monomial `x^a t^u ∂^b ∂_t^v h^e`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonomialKey(pub SmallVec<[u16; 16]>);

impl MonomialKey {
    pub fn one(sig: &Signature) -> Self {
        MonomialKey(SmallVec::from_elem(0, sig.width()))
    }

    pub fn from_exponents(exps: &[u16]) -> Self {
        MonomialKey(SmallVec::from_slice(exps))
    }

    pub fn exps(&self) -> &[u16] {
        &self.0
    }

    /// Exponents of `x`.
    pub fn a<'a>(&'a self, sig: &Signature) -> &'a [u16] {
        &self.0[..sig.n]
    }

    /// Exponents of `t`.
    pub fn u<'a>(&'a self, sig: &Signature) -> &'a [u16] {
        &self.0[sig.n..sig.pairs()]
    }

    /// Exponents of `∂`.
    pub fn b<'a>(&'a self, sig: &Signature) -> &'a [u16] {
        &self.0[sig.pairs()..sig.pairs() + sig.n]
    }

    /// Exponents of `∂_t`.
    pub fn v<'a>(&'a self, sig: &Signature) -> &'a [u16] {
        &self.0[sig.pairs() + sig.n..2 * sig.pairs()]
    }

    /// Exponent of `h`.
    pub fn e(&self, sig: &Signature) -> u16 {
        self.0[sig.h_index()]
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// F-degree: total order in `∂`, `∂_t` and `h`.
    pub fn f_degree(&self, sig: &Signature) -> i64 {
        self.0[sig.pairs()..].iter().map(|&x| x as i64).sum()
    }

    /// V-weight: `|v| - |u|`.
    pub fn v_weight(&self, sig: &Signature) -> i64 {
        let v: i64 = self.v(sig).iter().map(|&x| x as i64).sum();
        let u: i64 = self.u(sig).iter().map(|&x| x as i64).sum();
        v - u
    }

    /// Total degree with `h` counted twice, the grading for which `∂x - x∂ = h` is homogeneous.
    pub fn total_degree(&self, sig: &Signature) -> i64 {
        let body: i64 = self.0[..2 * sig.pairs()].iter().map(|&x| x as i64).sum();
        body + 2 * self.e(sig) as i64
    }

    /// Commutative divisibility of exponent vectors.
    pub fn divides(&self, other: &MonomialKey) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    pub fn quotient(&self, divisor: &MonomialKey) -> MonomialKey {
        MonomialKey(self.0.iter().zip(divisor.0.iter()).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, other: &MonomialKey) -> MonomialKey {
        MonomialKey(self.0.iter().zip(other.0.iter()).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn add(&self, other: &MonomialKey) -> MonomialKey {
        MonomialKey(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
                .collect(),
        )
    }

    pub fn coprime(&self, other: &MonomialKey) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }
}

/// A nonzero coefficient times a monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub coeff: Rat,
    pub key: MonomialKey,
}

fn falling(c: u16, k: u16) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= BigInt::from(c - i);
    }
    acc
}

fn binomial(b: u16, k: u16) -> BigInt {
    falling(b, k) / falling(k, k)
}

/// Expands `(x^a ∂^b h^e)·(x^c ∂^d h^f)` into left normal form.
///
/// Per pair, `∂^b x^c = Σ_k C(b,k) c!/(c-k)! x^{c-k} ∂^{b-k} h^k`; pairs commute with each other.
pub(crate) fn multiply_monomials(
    sig: &Signature,
    lhs: &MonomialKey,
    rhs: &MonomialKey,
    mut emit: impl FnMut(MonomialKey, BigInt),
) {
    let pairs = sig.pairs();
    if sig.kind == AlgebraKind::Commutative {
        emit(lhs.add(rhs), BigInt::one());
        return;
    }
    // Pairs where a derivation on the left meets a coordinate on the right.
    let mut active: SmallVec<[(usize, u16); 8]> = SmallVec::new();
    for i in 0..pairs {
        let b = lhs.0[pairs + i];
        let c = rhs.0[i];
        if b > 0 && c > 0 {
            active.push((i, b.min(c)));
        }
    }
    let base = lhs.add(rhs);
    if active.is_empty() {
        let mut key = base;
        if sig.kind == AlgebraKind::Weyl {
            key.0[sig.h_index()] = 0;
        }
        emit(key, BigInt::one());
        return;
    }
    let mut ks: SmallVec<[u16; 8]> = SmallVec::from_elem(0, active.len());
    loop {
        let mut key = base.clone();
        let mut coeff = BigInt::one();
        let mut lowered: u16 = 0;
        for (slot, &(i, _)) in active.iter().enumerate() {
            let k = ks[slot];
            if k > 0 {
                let b = lhs.0[pairs + i];
                let c = rhs.0[i];
                coeff *= binomial(b, k) * falling(c, k);
                key.0[i] -= k;
                key.0[pairs + i] -= k;
                lowered += k;
            }
        }
        match sig.kind {
            AlgebraKind::Homogenized => {
                let h = sig.h_index();
                key.0[h] = key.0[h].checked_add(lowered).expect("exponent overflow");
            }
            _ => key.0[sig.h_index()] = 0,
        }
        emit(key, coeff);
        // Odometer over the multi-index k.
        let mut slot = 0;
        loop {
            if slot == active.len() {
                return;
            }
            if ks[slot] < active[slot].1 {
                ks[slot] += 1;
                break;
            }
            ks[slot] = 0;
            slot += 1;
        }
    }
}

/// An element of one of the three algebras, in left normal form.
///
/// Terms are sorted strictly decreasing by [`MonomialKey`]'s lexicographic order and
/// carry nonzero coefficients; the empty list is zero.
#[derive(Clone, Debug)]
pub struct Operator {
    sig: Arc<Signature>,
    terms: Vec<Term>,
}

impl PartialEq for Operator {
    fn eq(&self, other: &Self) -> bool {
        *self.sig == *other.sig && self.terms == other.terms
    }
}

impl Eq for Operator {}

impl Operator {
    pub fn zero(sig: &Arc<Signature>) -> Self {
        Operator { sig: sig.clone(), terms: Vec::new() }
    }

    pub fn constant(sig: &Arc<Signature>, c: Rat) -> Self {
        Self::monomial(sig, MonomialKey::one(sig), c)
    }

    pub fn one(sig: &Arc<Signature>) -> Self {
        Self::constant(sig, Rat::one())
    }

    pub fn monomial(sig: &Arc<Signature>, key: MonomialKey, coeff: Rat) -> Self {
        assert_eq!(key.0.len(), sig.width(), "monomial width does not match signature");
        if coeff.is_zero() {
            return Self::zero(sig);
        }
        Operator { sig: sig.clone(), terms: vec![Term { coeff, key }] }
    }

    fn unit_at(sig: &Arc<Signature>, index: usize) -> Self {
        let mut key = MonomialKey::one(sig);
        key.0[index] = 1;
        Self::monomial(sig, key, Rat::one())
    }

    pub fn x(sig: &Arc<Signature>, i: usize) -> Self {
        assert!(i < sig.n);
        Self::unit_at(sig, sig.x_index(i))
    }

    pub fn t(sig: &Arc<Signature>, j: usize) -> Self {
        assert!(j < sig.p);
        Self::unit_at(sig, sig.t_index(j))
    }

    pub fn dx(sig: &Arc<Signature>, i: usize) -> Self {
        assert!(i < sig.n);
        Self::unit_at(sig, sig.dx_index(i))
    }

    pub fn dt(sig: &Arc<Signature>, j: usize) -> Self {
        assert!(j < sig.p);
        Self::unit_at(sig, sig.dt_index(j))
    }

    /// The homogenizing variable; equals `1` in the Weyl algebra.
    pub fn h(sig: &Arc<Signature>) -> Self {
        if sig.kind == AlgebraKind::Weyl {
            return Self::one(sig);
        }
        Self::unit_at(sig, sig.h_index())
    }

    /// Builds an operator from arbitrary terms, merging duplicates and dropping zeros.
    pub fn from_terms(sig: &Arc<Signature>, terms: impl IntoIterator<Item = (MonomialKey, Rat)>) -> Self {
        let mut acc: BTreeMap<MonomialKey, Rat> = BTreeMap::new();
        for (key, c) in terms {
            debug_assert_eq!(key.0.len(), sig.width());
            let mut key = key;
            if sig.kind == AlgebraKind::Weyl {
                key.0[sig.h_index()] = 0;
            }
            *acc.entry(key).or_insert_with(Rat::zero) += c;
        }
        Self::from_map(sig, acc)
    }

    fn from_map(sig: &Arc<Signature>, acc: BTreeMap<MonomialKey, Rat>) -> Self {
        let terms = acc
            .into_iter()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(key, coeff)| Term { coeff, key })
            .collect();
        Operator { sig: sig.clone(), terms }
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The coefficient if this is a constant (possibly zero), else `None`.
    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.as_slice() {
            [] => Some(Rat::zero()),
            [t] if t.key.is_one() => Some(t.coeff.clone()),
            _ => None,
        }
    }

    /// Coefficient of the monomial `1`.
    pub fn constant_term(&self) -> Rat {
        self.terms
            .last()
            .filter(|t| t.key.is_one())
            .map(|t| t.coeff.clone())
            .unwrap_or_else(Rat::zero)
    }

    pub fn coefficient(&self, key: &MonomialKey) -> Rat {
        self.terms
            .binary_search_by(|t| key.cmp(&t.key))
            .map(|i| self.terms[i].coeff.clone())
            .unwrap_or_else(|_| Rat::zero())
    }

    fn check_same(&self, other: &Operator) -> Result<()> {
        if same_signature(&self.sig, &other.sig) {
            Ok(())
        } else {
            Err(Error::SignatureMismatch(format!("{:?} vs {:?}", self.sig, other.sig)))
        }
    }

    pub fn try_add(&self, other: &Operator) -> Result<Operator> {
        self.check_same(other)?;
        Ok(self.combine(other, false))
    }

    pub fn try_sub(&self, other: &Operator) -> Result<Operator> {
        self.check_same(other)?;
        Ok(self.combine(other, true))
    }

    fn combine(&self, other: &Operator, negate: bool) -> Operator {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() || j < b.len() {
            let ord = if i == a.len() {
                Ordering::Less
            } else if j == b.len() {
                Ordering::Greater
            } else {
                a[i].key.cmp(&b[j].key)
            };
            match ord {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate { -b[j].coeff.clone() } else { b[j].coeff.clone() };
                    out.push(Term { coeff: c, key: b[j].key.clone() });
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { &a[i].coeff - &b[j].coeff } else { &a[i].coeff + &b[j].coeff };
                    if !c.is_zero() {
                        out.push(Term { coeff: c, key: a[i].key.clone() });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Operator { sig: self.sig.clone(), terms: out }
    }

    pub fn scale(&self, c: &Rat) -> Operator {
        if c.is_zero() {
            return Operator::zero(&self.sig);
        }
        Operator {
            sig: self.sig.clone(),
            terms: self.terms.iter().map(|t| Term { coeff: &t.coeff * c, key: t.key.clone() }).collect(),
        }
    }

    /// The product `self · other` in left normal form.
    pub fn multiply(&self, other: &Operator) -> Result<Operator> {
        self.check_same(other)?;
        let mut acc: BTreeMap<MonomialKey, Rat> = BTreeMap::new();
        for lt in &self.terms {
            for rt in &other.terms {
                let c = &lt.coeff * &rt.coeff;
                multiply_monomials(&self.sig, &lt.key, &rt.key, |key, k| {
                    *acc.entry(key).or_insert_with(Rat::zero) += &c * Rat::from_integer(k);
                });
            }
        }
        Ok(Operator::from_map(&self.sig, acc))
    }

    /// `self · self · ... ` (`k` factors).
    pub fn pow(&self, k: u32) -> Operator {
        let mut acc = Operator::one(&self.sig);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// `PQ - QP`.
    pub fn commutator(&self, other: &Operator) -> Result<Operator> {
        Ok(self.multiply(other)?.combine(&other.multiply(self)?, true))
    }

    /// Substitutes `h ↦ value` for `value ∈ {0, 1}`.
    ///
    /// `1` dehomogenizes into the Weyl algebra; `0` keeps the `h`-free terms and lands in
    /// the commutative ring, which for an `h`-homogeneous operator is its principal symbol.
    pub fn apply_substitution_h(&self, value: u8) -> Result<Operator> {
        match value {
            1 => Ok(self.dehomogenize()),
            0 => Ok(self.h_free_part()),
            _ => Err(Error::InvalidArgument(format!("h can only be set to 0 or 1, got {value}"))),
        }
    }

    /// `h ↦ 1`, landing in the Weyl algebra.
    pub fn dehomogenize(&self) -> Operator {
        let sig = self.sig.with_kind(AlgebraKind::Weyl);
        if self.sig.kind == AlgebraKind::Weyl {
            return Operator { sig, terms: self.terms.clone() };
        }
        let h = sig.h_index();
        Operator::from_terms(
            &sig,
            self.terms.iter().map(|t| {
                let mut key = t.key.clone();
                key.0[h] = 0;
                (key, t.coeff.clone())
            }),
        )
    }

    /// Terms without `h`, reinterpreted in the commutative ring.
    pub fn h_free_part(&self) -> Operator {
        let sig = self.sig.with_kind(AlgebraKind::Commutative);
        let h = sig.h_index();
        Operator {
            sig,
            terms: self.terms.iter().filter(|t| t.key.0[h] == 0).cloned().collect(),
        }
    }

    /// Multiplies each term by the power of `h` lifting it to F-degree `degree`.
    ///
    /// Returns an operator of the homogenized algebra; fails if some term already exceeds
    /// `degree`.
    pub fn homogenize_to(&self, degree: i64) -> Result<Operator> {
        let sig = self.sig.with_kind(AlgebraKind::Homogenized);
        let h = sig.h_index();
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let d = t.key.f_degree(&self.sig);
            if d > degree {
                return Err(Error::InvalidArgument(format!(
                    "term of F-degree {d} cannot be homogenized to degree {degree}"
                )));
            }
            let mut key = t.key.clone();
            key.0[h] += (degree - d) as u16;
            terms.push((key, t.coeff.clone()));
        }
        Ok(Operator::from_terms(&sig, terms))
    }

    /// Reinterprets the same terms under a different commutation rule.
    pub fn with_kind(&self, kind: AlgebraKind) -> Operator {
        let sig = self.sig.with_kind(kind);
        if kind == AlgebraKind::Weyl {
            return Operator::from_terms(&sig, self.terms.iter().map(|t| (t.key.clone(), t.coeff.clone())));
        }
        Operator { sig, terms: self.terms.clone() }
    }

    /// Moves to another signature by mapping every exponent vector.
    pub fn remap(&self, sig: &Arc<Signature>, mut f: impl FnMut(&MonomialKey) -> Option<MonomialKey>) -> Operator {
        Operator::from_terms(sig, self.terms.iter().filter_map(|t| f(&t.key).map(|k| (k, t.coeff.clone()))))
    }

    /// Applies the automorphism `x_i ↦ x_{perm[i]}`, `∂_i ↦ ∂_{perm[i]}` on the `x`-pairs.
    pub fn permute_x(&self, perm: &[usize]) -> Operator {
        let s = self.sig.clone();
        self.remap(&s, |k| {
            let mut r = k.clone();
            for (i, &j) in perm.iter().enumerate() {
                r.0[s.x_index(j)] = k.0[s.x_index(i)];
                r.0[s.dx_index(j)] = k.0[s.dx_index(i)];
            }
            Some(r)
        })
    }

    pub fn f_degree(&self) -> Option<i64> {
        self.terms.iter().map(|t| t.key.f_degree(&self.sig)).max()
    }

    pub fn v_order(&self) -> Option<i64> {
        self.terms.iter().map(|t| t.key.v_weight(&self.sig)).max()
    }

    pub fn is_h_homogeneous(&self) -> bool {
        let mut degs = self.terms.iter().map(|t| t.key.f_degree(&self.sig));
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    /// True when no term involves `t` or `∂_t`.
    pub fn is_t_free(&self) -> bool {
        self.terms
            .iter()
            .all(|t| t.key.u(&self.sig).iter().all(|&x| x == 0) && t.key.v(&self.sig).iter().all(|&x| x == 0))
    }

    /// Clears denominators and content so the leading coefficient is a positive integer
    /// with the coefficients coprime; used for printing-independent comparisons.
    pub fn primitive(&self) -> Operator {
        use num_integer::Integer;
        if self.is_zero() {
            return self.clone();
        }
        let mut den = BigInt::one();
        for t in &self.terms {
            den = den.lcm(t.coeff.denom());
        }
        let mut g = BigInt::zero();
        for t in &self.terms {
            g = g.gcd(&(t.coeff.numer() * (&den / t.coeff.denom())));
        }
        let mut factor = Rat::new(den, g);
        if self.terms[0].coeff.is_negative() {
            factor = -factor;
        }
        self.scale(&factor)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl std::ops::$trait<&Operator> for &Operator {
            type Output = Operator;
            fn $method(self, rhs: &Operator) -> Operator {
                let f: fn(&Operator, &Operator) -> Result<Operator> = $body;
                f(self, rhs).expect("operators over different signatures")
            }
        }
        impl std::ops::$trait<Operator> for Operator {
            type Output = Operator;
            fn $method(self, rhs: Operator) -> Operator {
                std::ops::$trait::$method(&self, &rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| a.try_add(b));
binop!(Sub, sub, |a, b| a.try_sub(b));
binop!(Mul, mul, |a, b| a.multiply(b));

impl std::ops::Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        self.scale(&-Rat::one())
    }
}

impl std::ops::Neg for Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        -&self
    }
}

pub fn format_rat(c: &Rat) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

pub(crate) fn render_monomial(names: &[String], key: &MonomialKey) -> String {
    let mut parts = Vec::new();
    for (i, &e) in key.0.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(names[i].clone()),
            _ => parts.push(format!("{}^{}", names[i], e)),
        }
    }
    parts.join("*")
}

impl fmt::Display for Operator {
    /// Renders in the input grammar: `2*x1*dx2 - 3*x2^2*dx1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = self.sig.var_names();
        for (idx, t) in self.terms.iter().enumerate() {
            let negative = t.coeff.is_negative();
            let abs = t.coeff.abs();
            if idx == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if negative { " - " } else { " + " })?;
            }
            let mono = render_monomial(&names, &t.key);
            if mono.is_empty() {
                write!(f, "{}", format_rat(&abs))?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{}*{}", format_rat(&abs), mono)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hsig(n: usize, p: usize) -> Arc<Signature> {
        Signature::homogenized(n, p)
    }

    #[test]
    fn derivation_past_coordinate() {
        let s = hsig(1, 0);
        let lhs = &Operator::dx(&s, 0) * &Operator::x(&s, 0);
        let rhs = &(&Operator::x(&s, 0) * &Operator::dx(&s, 0)) + &Operator::h(&s);
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.to_string(), "x1*dx1 + h");
    }

    #[test]
    fn dt_squared_past_t() {
        let s = hsig(0, 1);
        let dt = Operator::dt(&s, 0);
        let t = Operator::t(&s, 0);
        let lhs = &dt.pow(2) * &t;
        let rhs = &(&t * &dt.pow(2)) + &(&Operator::h(&s) * &dt).scale(&int(2));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn dt_power_identity_up_to_six() {
        let s = hsig(0, 1);
        let dt = Operator::dt(&s, 0);
        let t = Operator::t(&s, 0);
        let h = Operator::h(&s);
        for k in 1..=6u32 {
            let lhs = &dt.pow(k) * &t;
            let rhs = &(&t * &dt.pow(k)) + &(&h * &dt.pow(k - 1)).scale(&int(k as i64));
            assert_eq!(lhs, rhs, "k = {k}");
        }
    }

    #[test]
    fn weyl_mode_drops_h() {
        let s = Signature::weyl(1, 0);
        let p = &Operator::dx(&s, 0) * &Operator::x(&s, 0);
        assert_eq!(p.to_string(), "x1*dx1 + 1");
    }

    #[test]
    fn commutative_mode_is_plain_product() {
        let s = Signature::commutative(1, 0);
        let a = &Operator::dx(&s, 0) * &Operator::x(&s, 0);
        let b = &Operator::x(&s, 0) * &Operator::dx(&s, 0);
        assert_eq!(a, b);
        assert_eq!(a.len(), 1);
    }

    #[test]
    fn commutator_examples() {
        let s = hsig(2, 0);
        assert_eq!(Operator::dx(&s, 0).commutator(&Operator::x(&s, 0)).unwrap(), Operator::h(&s));
        assert!(Operator::x(&s, 0).commutator(&Operator::x(&s, 1)).unwrap().is_zero());
    }

    #[test]
    fn substitution_of_h() {
        let s = hsig(1, 0);
        let x = Operator::x(&s, 0);
        let d = Operator::dx(&s, 0);
        let h = Operator::h(&s);
        let p = &(&x * &d) + &h;
        assert_eq!(p.apply_substitution_h(1).unwrap().to_string(), "x1*dx1 + 1");
        let q = &(&x * &d.pow(2)) + &(&h.pow(2) * &d);
        assert_eq!(q.dehomogenize().to_string(), "x1*dx1^2 + dx1");
        assert_eq!(q.apply_substitution_h(0).unwrap().to_string(), "x1*dx1^2");
        assert!(p.apply_substitution_h(2).is_err());
    }

    #[test]
    fn homogenize_round_trip() {
        let s = hsig(1, 0);
        let x = Operator::x(&s, 0);
        let d = Operator::dx(&s, 0);
        let p = &(&x * &d.pow(2)) + &(&Operator::h(&s) * &d);
        let back = p.dehomogenize().homogenize_to(2).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn signature_mismatch_is_an_error() {
        let a = Operator::x(&hsig(1, 0), 0);
        let b = Operator::x(&hsig(2, 0), 0);
        assert!(matches!(a.multiply(&b), Err(Error::SignatureMismatch(_))));
    }

    #[test]
    fn multiply_by_one_is_identity() {
        let s = hsig(2, 1);
        let p = &(&Operator::dx(&s, 1) * &Operator::x(&s, 1)) + &Operator::t(&s, 0).scale(&rat(3, 2));
        assert_eq!(&p * &Operator::one(&s), p);
        assert_eq!(&Operator::one(&s) * &p, p);
    }
}
