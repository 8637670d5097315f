//! F-orders, V-orders, shifted free modules, and the homogenization functor.
//!
//! F-weights: `∂`, `∂_t`, `h` count 1, coordinates count 0. V-weights: `t` counts -1,
//! `∂_t` counts 1, everything else 0. Shifts on free modules are arbitrary integers.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::weyl::{AlgebraKind, Operator, Rat, Signature};

/// `D^r[n][m]`: a free module of rank `r` with F-shifts `n` and V-shifts `m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ShiftedFreeModule {
    pub f_shifts: Vec<i64>,
    pub v_shifts: Vec<i64>,
}

impl ShiftedFreeModule {
    pub fn new(f_shifts: Vec<i64>, v_shifts: Vec<i64>) -> Result<Self> {
        if f_shifts.len() != v_shifts.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} F-shifts but {} V-shifts",
                f_shifts.len(),
                v_shifts.len()
            )));
        }
        Ok(ShiftedFreeModule { f_shifts, v_shifts })
    }

    /// Rank `r` with all shifts zero.
    pub fn free(rank: usize) -> Self {
        ShiftedFreeModule { f_shifts: vec![0; rank], v_shifts: vec![0; rank] }
    }

    /// F-shifts only; V-shifts zero.
    pub fn with_f_shifts(f_shifts: Vec<i64>) -> Self {
        let r = f_shifts.len();
        ShiftedFreeModule { f_shifts, v_shifts: vec![0; r] }
    }

    pub fn rank(&self) -> usize {
        self.f_shifts.len()
    }

    pub fn push(&mut self, f: i64, v: i64) {
        self.f_shifts.push(f);
        self.v_shifts.push(v);
    }
}

/// A vector of operators, one per basis element of a free module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleElement {
    sig: Arc<Signature>,
    pub coords: Vec<Operator>,
}

impl ModuleElement {
    pub fn new(sig: &Arc<Signature>, coords: Vec<Operator>) -> Self {
        debug_assert!(coords.iter().all(|c| **c.signature() == **sig));
        ModuleElement { sig: sig.clone(), coords }
    }

    pub fn zero(sig: &Arc<Signature>, rank: usize) -> Self {
        ModuleElement { sig: sig.clone(), coords: vec![Operator::zero(sig); rank] }
    }

    /// The basis vector `e_i` scaled by `op`.
    pub fn unit(sig: &Arc<Signature>, rank: usize, i: usize, op: Operator) -> Self {
        let mut el = Self::zero(sig, rank);
        el.coords[i] = op;
        el
    }

    /// A rank-one element.
    pub fn scalar(op: Operator) -> Self {
        ModuleElement { sig: op.signature().clone(), coords: vec![op] }
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Operator::is_zero)
    }

    pub fn add(&self, other: &ModuleElement) -> ModuleElement {
        assert_eq!(self.rank(), other.rank());
        ModuleElement {
            sig: self.sig.clone(),
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &ModuleElement) -> ModuleElement {
        assert_eq!(self.rank(), other.rank());
        ModuleElement {
            sig: self.sig.clone(),
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> ModuleElement {
        ModuleElement { sig: self.sig.clone(), coords: self.coords.iter().map(|a| a.scale(c)).collect() }
    }

    /// `op · self`, acting on the left of every coordinate.
    pub fn left_mul(&self, op: &Operator) -> ModuleElement {
        ModuleElement { sig: self.sig.clone(), coords: self.coords.iter().map(|a| op * a).collect() }
    }

    /// Left-linear combination `Σ c_i · rows_i`.
    pub fn combination(sig: &Arc<Signature>, rank: usize, coeffs: &[Operator], rows: &[ModuleElement]) -> ModuleElement {
        assert_eq!(coeffs.len(), rows.len());
        let mut acc = ModuleElement::zero(sig, rank);
        for (c, row) in coeffs.iter().zip(rows) {
            if !c.is_zero() {
                acc = acc.add(&row.left_mul(c));
            }
        }
        acc
    }

    pub fn map_ops(&self, sig: &Arc<Signature>, f: impl Fn(&Operator) -> Operator) -> ModuleElement {
        ModuleElement { sig: sig.clone(), coords: self.coords.iter().map(f).collect() }
    }

    pub fn dehomogenize(&self) -> ModuleElement {
        let sig = self.sig.with_kind(AlgebraKind::Weyl);
        self.map_ops(&sig, Operator::dehomogenize)
    }

    pub fn with_kind(&self, kind: AlgebraKind) -> ModuleElement {
        let sig = self.sig.with_kind(kind);
        self.map_ops(&sig, |o| o.with_kind(kind))
    }

    /// Sum of `(term F-degree + shift)` is constant over all terms.
    pub fn is_h_homogeneous(&self, module: &ShiftedFreeModule) -> bool {
        let mut deg = None;
        for (i, c) in self.coords.iter().enumerate() {
            for t in c.terms() {
                let d = t.key.f_degree(&self.sig) + module.f_shifts[i];
                match deg {
                    None => deg = Some(d),
                    Some(e) if e != d => return false,
                    _ => {}
                }
            }
        }
        true
    }
}

impl std::fmt::Display for ModuleElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

fn check_rank(el: &ModuleElement, module: &ShiftedFreeModule) {
    assert_eq!(el.rank(), module.rank(), "element rank does not match module rank");
}

/// F-order `max (|b| + |v| + e + n_i)`; `None` stands for `-∞`.
pub fn ord_f(el: &ModuleElement, module: &ShiftedFreeModule) -> Option<i64> {
    check_rank(el, module);
    el.coords
        .iter()
        .zip(&module.f_shifts)
        .filter_map(|(c, s)| c.f_degree().map(|d| d + s))
        .max()
}

/// V-order `max (|v| - |u| + m_i)`; `None` stands for `-∞`.
pub fn ord_v(el: &ModuleElement, module: &ShiftedFreeModule) -> Option<i64> {
    check_rank(el, module);
    el.coords
        .iter()
        .zip(&module.v_shifts)
        .filter_map(|(c, s)| c.v_order().map(|d| d + s))
        .max()
}

/// Lifts an `h`-free element to the homogenized algebra, homogeneous of degree `ord_f`.
pub fn homogenize(el: &ModuleElement, module: &ShiftedFreeModule) -> Result<ModuleElement> {
    let sig = el.sig.with_kind(AlgebraKind::Homogenized);
    let h = sig.h_index();
    if el.coords.iter().any(|c| c.terms().iter().any(|t| t.key.0[h] != 0)) {
        return Err(Error::InvalidArgument("homogenize expects an h-free element".into()));
    }
    let Some(deg) = ord_f(el, module) else {
        return Ok(ModuleElement::zero(&sig, el.rank()));
    };
    let coords = el
        .coords
        .iter()
        .zip(&module.f_shifts)
        .map(|(c, s)| c.homogenize_to(deg - s))
        .collect::<Result<Vec<_>>>()?;
    Ok(ModuleElement { sig, coords })
}

/// Principal F-symbol: terms of top shifted F-degree, `h` set to zero, in the commutative ring.
pub fn f_symbol(el: &ModuleElement, module: &ShiftedFreeModule) -> ModuleElement {
    let sig = el.sig.with_kind(AlgebraKind::Commutative);
    let Some(deg) = ord_f(el, module) else {
        return ModuleElement::zero(&sig, el.rank());
    };
    let h = sig.h_index();
    let coords = el
        .coords
        .iter()
        .zip(&module.f_shifts)
        .map(|(c, s)| {
            Operator::from_terms(
                &sig,
                c.terms().iter().filter(|t| t.key.f_degree(&el.sig) + s == deg).map(|t| {
                    let mut key = t.key.clone();
                    key.0[h] = 0;
                    (key, t.coeff.clone())
                }),
            )
        })
        .collect();
    ModuleElement { sig, coords }
}

/// V-initial form: the terms of top shifted V-weight, in the same algebra.
pub fn v_initial(el: &ModuleElement, module: &ShiftedFreeModule) -> ModuleElement {
    let Some(deg) = ord_v(el, module) else {
        return el.clone();
    };
    let coords = el
        .coords
        .iter()
        .zip(&module.v_shifts)
        .map(|(c, s)| {
            Operator::from_terms(
                &el.sig,
                c.terms()
                    .iter()
                    .filter(|t| t.key.v_weight(&el.sig) + s == deg)
                    .map(|t| (t.key.clone(), t.coeff.clone())),
            )
        })
        .collect();
    ModuleElement { sig: el.sig.clone(), coords }
}

/// True iff the map sending source basis element `e_j` to `rows[j]` respects both filtrations:
/// `ord_F(rows[j]) ≤ n_j` and `ord_V(rows[j]) ≤ m_j`, orders taken with the target shifts.
pub fn bidegree_adapted(rows: &[ModuleElement], source: &ShiftedFreeModule, target: &ShiftedFreeModule) -> Result<bool> {
    if rows.len() != source.rank() {
        return Err(Error::DimensionMismatch(format!("{} rows for a source of rank {}", rows.len(), source.rank())));
    }
    for (j, row) in rows.iter().enumerate() {
        if row.rank() != target.rank() {
            return Err(Error::DimensionMismatch(format!(
                "row {j} has {} entries, target has rank {}",
                row.rank(),
                target.rank()
            )));
        }
        if let Some(f) = ord_f(row, target) {
            if f > source.f_shifts[j] {
                return Ok(false);
            }
        }
        if let Some(v) = ord_v(row, target) {
            if v > source.v_shifts[j] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Which filtration weights an order compares first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrderKind {
    F,
    V,
    FV,
    VF,
}

impl OrderKind {
    pub fn uses_v(self) -> bool {
        !matches!(self, OrderKind::F)
    }
}

impl std::str::FromStr for OrderKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "F" => Ok(OrderKind::F),
            "V" => Ok(OrderKind::V),
            "FV" => Ok(OrderKind::FV),
            "VF" => Ok(OrderKind::VF),
            other => Err(Error::InvalidArgument(format!("unknown order kind {other:?}"))),
        }
    }
}

/// Position-over-term compares basis positions first; term-over-position compares weights first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PositionStrategy {
    Pot,
    Top,
}

/// A term order on `(position, monomial)` pairs.
///
/// Terms are compared by the chosen filtration weights (shifted by the module shifts),
/// then lexicographically on the exponent vector `(a, u, b, v, e)`, then by position with
/// lower indices ranking higher.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrderSpec {
    pub kind: OrderKind,
    pub position: PositionStrategy,
}

impl OrderSpec {
    pub fn new(kind: OrderKind, position: PositionStrategy) -> Self {
        OrderSpec { kind, position }
    }

    pub fn f() -> Self {
        Self::new(OrderKind::F, PositionStrategy::Top)
    }

    pub fn v() -> Self {
        Self::new(OrderKind::V, PositionStrategy::Top)
    }

    pub fn fv() -> Self {
        Self::new(OrderKind::FV, PositionStrategy::Top)
    }

    pub fn vf() -> Self {
        Self::new(OrderKind::VF, PositionStrategy::Top)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::int;

    #[test]
    fn f_order_examples() {
        let s = Signature::weyl(1, 0);
        let x = Operator::x(&s, 0);
        let d = Operator::dx(&s, 0);
        let el = ModuleElement::scalar(&x.pow(2) * &d.pow(3));
        assert_eq!(ord_f(&el, &ShiftedFreeModule::free(1)), Some(3));
        let shifted = ShiftedFreeModule::with_f_shifts(vec![2]);
        assert_eq!(ord_f(&ModuleElement::scalar(d.clone()), &shifted), Some(3));
        assert_eq!(ord_f(&ModuleElement::zero(&s, 1), &shifted), None);
    }

    #[test]
    fn v_order_examples() {
        let s = Signature::weyl(1, 1);
        let x = Operator::x(&s, 0);
        let t = Operator::t(&s, 0);
        let dt = Operator::dt(&s, 0);
        let m = ShiftedFreeModule::free(1);
        assert_eq!(ord_v(&ModuleElement::scalar(&(&x * &t.pow(2)) * &dt.pow(3)), &m), Some(1));
        assert_eq!(ord_v(&ModuleElement::scalar(&t * &dt), &m), Some(0));
        let shifted = ShiftedFreeModule::new(vec![0], vec![1]).unwrap();
        assert_eq!(ord_v(&ModuleElement::scalar(dt), &shifted), Some(2));
    }

    #[test]
    fn homogenize_examples() {
        let s = Signature::weyl(1, 0);
        let x = Operator::x(&s, 0);
        let d = Operator::dx(&s, 0);
        let el = ModuleElement::scalar(&(&x * &d) + &Operator::one(&s));
        let hom = homogenize(&el, &ShiftedFreeModule::free(1)).unwrap();
        assert_eq!(hom.to_string(), "[x1*dx1 + h]");
        assert_eq!(hom.dehomogenize(), el);

        let pair = ModuleElement::new(&s, vec![d.clone(), Operator::one(&s)]);
        let shifted = ShiftedFreeModule::with_f_shifts(vec![0, 1]);
        let hom = homogenize(&pair, &shifted).unwrap();
        assert_eq!(hom.to_string(), "[dx1, 1]");
    }

    #[test]
    fn psi_one_x1_is_already_homogeneous() {
        // ∂_t t + θ for θ = x/2 ∂_x, degree 1 throughout once h appears where ∂_t passes t.
        let s = Signature::weyl(1, 1);
        let theta = (&Operator::x(&s, 0) * &Operator::dx(&s, 0)).scale(&crate::weyl::rat(1, 2));
        let op = &(&Operator::dt(&s, 0) * &Operator::t(&s, 0)) + &theta;
        let hom = homogenize(&ModuleElement::scalar(op.clone()), &ShiftedFreeModule::free(1)).unwrap();
        let hs = Signature::homogenized(1, 1);
        let expected = &(&Operator::dt(&hs, 0) * &Operator::t(&hs, 0))
            + &(&Operator::x(&hs, 0) * &Operator::dx(&hs, 0)).scale(&crate::weyl::rat(1, 2));
        assert_eq!(hom.coords[0], expected);
        assert!(hom.is_h_homogeneous(&ShiftedFreeModule::free(1)));
    }

    #[test]
    fn adaptedness_checks() {
        let s = Signature::weyl(0, 1);
        let dt = Operator::dt(&s, 0);
        let zero_shift = ShiftedFreeModule::free(1);
        assert!(!bidegree_adapted(&[ModuleElement::scalar(dt.clone())], &zero_shift, &zero_shift).unwrap());
        assert!(bidegree_adapted(&[ModuleElement::zero(&s, 1)], &zero_shift, &zero_shift).unwrap());
        let ok_source = ShiftedFreeModule::new(vec![1], vec![1]).unwrap();
        assert!(bidegree_adapted(&[ModuleElement::scalar(dt)], &ok_source, &zero_shift).unwrap());
        assert!(bidegree_adapted(&[], &ShiftedFreeModule::free(1), &zero_shift).is_err());
    }

    #[test]
    fn symbol_drops_lower_terms() {
        let s = Signature::weyl(1, 0);
        let x = Operator::x(&s, 0);
        let d = Operator::dx(&s, 0);
        let el = ModuleElement::scalar(&(&x * &d) + &Operator::constant(&s, int(3)));
        let sym = f_symbol(&el, &ShiftedFreeModule::free(1));
        assert_eq!(sym.to_string(), "[x1*dx1]");
        assert!(sym.signature().is_commutative());
    }
}
