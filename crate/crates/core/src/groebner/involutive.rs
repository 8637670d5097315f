//! The symbol-relation criterion for F-involutive generating sets.
//!
//! `P_1..P_r` (with `d_j = ord_F(P_j)`) is involutive when `gr^F` of the module they
//! generate is generated by the symbols `σ(P_j)`, equivalently when every relation among
//! the symbols lifts to a relation among the `P_j`. A generating set of symbol relations
//! is computed in the commutative ring; each one is lifted by descent: start from the
//! naive lift `Q`, and while `P = Σ Q_j P_j` is nonzero, write its symbol through the
//! `σ(P_j)` and subtract. The order of `P` drops every round. If some symbol falls outside
//! the symbol module, `P` itself witnesses that the set is not involutive.

use std::sync::Arc;

use serde::Serialize;

use super::{buchberger_over, normal_form_with_quotients, syzygies_of, GroebnerOptions};
use crate::error::{Error, Result};
use crate::filtration::{self, ModuleElement, OrderSpec, ShiftedFreeModule};
use crate::weyl::{AlgebraKind, Operator, Signature};

#[derive(Clone, Copy, Debug, Default)]
pub struct InvolutiveOptions {
    /// Largest symbol-relation degree to lift; defaults to the largest generator order + 4.
    pub degree_bound: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum InvolutiveVerdict {
    Involutive,
    /// An element of the module whose symbol is not generated by the given symbols.
    NotInvolutive { witness: String },
    /// Some symbol relation has degree above the bound.
    Inconclusive { degree: i64 },
}

/// A relation `Σ R_j P_j = 0` whose top-degree part is the symbol relation `symbol`.
#[derive(Clone, Debug)]
pub struct LiftCertificate {
    pub degree: i64,
    pub symbol: ModuleElement,
    pub relation: ModuleElement,
}

#[derive(Clone, Debug)]
pub struct InvolutiveReport {
    pub verdict: InvolutiveVerdict,
    /// `ord_F` of each generator.
    pub orders: Vec<i64>,
    pub certificates: Vec<LiftCertificate>,
}

impl InvolutiveReport {
    pub fn is_involutive(&self) -> bool {
        self.verdict == InvolutiveVerdict::Involutive
    }
}

/// Generators moved to the filtered ring (`D` or a commutative ring) they describe.
fn filtered_ring(gens: &[ModuleElement]) -> Result<(Arc<Signature>, Vec<ModuleElement>)> {
    let Some(first) = gens.first() else {
        return Err(Error::InvalidArgument("no generators".into()));
    };
    let sig = first.signature().clone();
    match sig.kind {
        AlgebraKind::Homogenized => Ok((sig.with_kind(AlgebraKind::Weyl), gens.iter().map(|g| g.dehomogenize()).collect())),
        _ => Ok((sig, gens.to_vec())),
    }
}

/// Part of `op` of exact F-degree `d`.
fn degree_part(op: &Operator, d: i64) -> Operator {
    let sig = op.signature();
    Operator::from_terms(
        sig,
        op.terms().iter().filter(|t| t.key.f_degree(sig) == d).map(|t| (t.key.clone(), t.coeff.clone())),
    )
}

/// Splits a relation among symbols into F-homogeneous pieces (weighted by the shifts).
fn homogeneous_pieces(rel: &ModuleElement, shifts: &[i64]) -> Vec<(i64, ModuleElement)> {
    let sig = rel.signature();
    let mut degs: Vec<i64> = Vec::new();
    for (j, c) in rel.coords.iter().enumerate() {
        for t in c.terms() {
            degs.push(t.key.f_degree(sig) + shifts[j]);
        }
    }
    degs.sort_unstable();
    degs.dedup();
    degs.into_iter()
        .rev()
        .map(|e| {
            let coords = rel.coords.iter().enumerate().map(|(j, c)| degree_part(c, e - shifts[j])).collect();
            (e, ModuleElement::new(sig, coords))
        })
        .collect()
}

fn lift(op: &Operator, sig: &Arc<Signature>) -> Operator {
    op.remap(sig, |k| Some(k.clone()))
}

struct SymbolData {
    csig: Arc<Signature>,
    orders: Vec<i64>,
    symbols: Vec<ModuleElement>,
    basis: super::MarkedBasis,
    repr: Vec<ModuleElement>,
}

fn symbol_data(sig: &Arc<Signature>, gens: &[ModuleElement], module: &ShiftedFreeModule) -> Result<SymbolData> {
    let csig = sig.with_kind(AlgebraKind::Commutative);
    let orders: Vec<i64> = gens.iter().map(|g| filtration::ord_f(g, module).unwrap_or(0)).collect();
    let symbols: Vec<ModuleElement> = gens.iter().map(|g| filtration::f_symbol(g, module)).collect();
    let basis = buchberger_over(&csig, &symbols, module, OrderSpec::f(), &GroebnerOptions::tracked())?;
    let repr = basis.representation().expect("tracked").to_vec();
    Ok(SymbolData { csig, orders, symbols, basis, repr })
}

impl SymbolData {
    /// Cofactors `c_j` of degree `e - d_j` with `Σ c_j σ(P_j) = σ`, if `σ` is in the symbol module.
    fn cofactors(&self, sym: &ModuleElement, e: i64) -> Result<Option<Vec<Operator>>> {
        let (rem, q) = normal_form_with_quotients(sym, &self.basis)?;
        if !rem.is_zero() {
            return Ok(None);
        }
        let full = ModuleElement::combination(&self.csig, self.symbols.len(), &q, &self.repr);
        Ok(Some(full.coords.iter().zip(&self.orders).map(|(c, d)| degree_part(c, e - d)).collect()))
    }
}

/// Decides involutivity of `gens` for the F-filtration with the shifts of `module`.
pub fn is_involutive(gens: &[ModuleElement], module: &ShiftedFreeModule, opts: &InvolutiveOptions) -> Result<InvolutiveReport> {
    let (sig, gens) = filtered_ring(gens)?;
    let r = module.rank();
    let m = gens.len();
    let data = symbol_data(&sig, &gens, module)?;
    let bound = opts.degree_bound.unwrap_or_else(|| data.orders.iter().copied().max().unwrap_or(0) + 4);

    let (_, rels) = syzygies_of(&data.csig, &data.symbols, module)?;
    let mut certificates = Vec::new();
    let mut inconclusive: Option<i64> = None;
    for rel in &rels {
        for (e, piece) in homogeneous_pieces(rel, &data.orders) {
            if e > bound {
                inconclusive = Some(inconclusive.map_or(e, |x: i64| x.max(e)));
                continue;
            }
            let mut relation = ModuleElement::new(&sig, piece.coords.iter().map(|c| lift(c, &sig)).collect());
            let mut p = ModuleElement::combination(&sig, r, &relation.coords, &gens);
            while !p.is_zero() {
                let d = filtration::ord_f(&p, module).expect("nonzero");
                let sym = filtration::f_symbol(&p, module);
                let Some(cof) = data.cofactors(&sym, d)? else {
                    return Ok(InvolutiveReport {
                        verdict: InvolutiveVerdict::NotInvolutive { witness: p.to_string() },
                        orders: data.orders,
                        certificates,
                    });
                };
                let lifted: Vec<Operator> = cof.iter().map(|c| lift(c, &sig)).collect();
                let correction = ModuleElement::combination(&sig, r, &lifted, &gens);
                let next = p.sub(&correction);
                if filtration::ord_f(&next, module).is_some_and(|x| x >= d) {
                    return Err(Error::Invariant("symbol descent did not lower the order".into()));
                }
                p = next;
                relation = relation.sub(&ModuleElement::new(&sig, lifted));
            }
            debug_assert_eq!(relation.rank(), m);
            certificates.push(LiftCertificate { degree: e, symbol: piece, relation });
        }
    }
    let verdict = match inconclusive {
        Some(degree) => InvolutiveVerdict::Inconclusive { degree },
        None => InvolutiveVerdict::Involutive,
    };
    Ok(InvolutiveReport { verdict, orders: data.orders, certificates })
}

/// Outcome of checking externally supplied lifts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftCheck {
    /// `Σ R_j P_j = 0` exactly, per relation.
    pub exact: Vec<bool>,
    /// The top-degree part of each relation is a relation among the symbols.
    pub symbols_are_relations: Vec<bool>,
    /// The symbols of the supplied relations generate every symbol relation.
    pub generate: bool,
}

impl LiftCheck {
    pub fn all_pass(&self) -> bool {
        self.generate && self.exact.iter().all(|&b| b) && self.symbols_are_relations.iter().all(|&b| b)
    }
}

/// Checks that `relations` are relations among `gens` whose symbols generate all symbol relations.
pub fn verify_lifts(gens: &[ModuleElement], module: &ShiftedFreeModule, relations: &[ModuleElement]) -> Result<LiftCheck> {
    let (sig, gens) = filtered_ring(gens)?;
    let relations: Vec<ModuleElement> = relations
        .iter()
        .map(|r| if r.signature().kind == AlgebraKind::Homogenized { r.dehomogenize() } else { r.clone() })
        .collect();
    let r = module.rank();
    let m = gens.len();
    let data = symbol_data(&sig, &gens, module)?;
    let source = ShiftedFreeModule::with_f_shifts(data.orders.clone());
    let mut exact = Vec::new();
    let mut sym_ok = Vec::new();
    let mut symbols = Vec::new();
    for rel in &relations {
        if rel.rank() != m {
            return Err(Error::DimensionMismatch(format!("relation has {} entries for {m} generators", rel.rank())));
        }
        exact.push(ModuleElement::combination(&sig, r, &rel.coords, &gens).is_zero());
        let sym = filtration::f_symbol(rel, &source);
        sym_ok.push(ModuleElement::combination(&data.csig, r, &sym.coords, &data.symbols).is_zero());
        symbols.push(sym);
    }
    let (_, all) = syzygies_of(&data.csig, &data.symbols, module)?;
    let free = ShiftedFreeModule::free(m);
    let generated = buchberger_over(&data.csig, &symbols, &free, OrderSpec::f(), &GroebnerOptions::default())?;
    let mut generate = true;
    for z in &all {
        if !super::reduces_to_zero(z, &generated)? {
            generate = false;
            break;
        }
    }
    Ok(LiftCheck { exact, symbols_are_relations: sym_ok, generate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::int;

    #[test]
    fn single_generator_is_involutive() {
        let s = Signature::weyl(2, 0);
        let g = ModuleElement::scalar(&Operator::x(&s, 0) * &Operator::dx(&s, 1));
        let rep = is_involutive(&[g], &ShiftedFreeModule::free(1), &InvolutiveOptions::default()).unwrap();
        assert!(rep.is_involutive());
    }

    #[test]
    fn x_and_d_are_not_involutive() {
        // σ(x) = x, σ(∂) = ξ; the relation ξ·x - x·ξ lifts to ∂x - x∂ = 1, whose symbol 1 is new.
        let s = Signature::weyl(1, 0);
        let gens = [ModuleElement::scalar(Operator::x(&s, 0)), ModuleElement::scalar(Operator::dx(&s, 0))];
        let rep = is_involutive(&gens, &ShiftedFreeModule::free(1), &InvolutiveOptions::default()).unwrap();
        assert!(matches!(rep.verdict, InvolutiveVerdict::NotInvolutive { .. }));
    }

    #[test]
    fn euler_and_partial_lift() {
        // θ = x∂_x and ∂_y: their commutator vanishes, the relation lifts verbatim.
        let s = Signature::weyl(2, 0);
        let theta = &Operator::x(&s, 0) * &Operator::dx(&s, 0);
        let dy = Operator::dx(&s, 1);
        let gens = [ModuleElement::scalar(theta.clone()), ModuleElement::scalar(dy.clone())];
        let rep = is_involutive(&gens, &ShiftedFreeModule::free(1), &InvolutiveOptions::default()).unwrap();
        assert!(rep.is_involutive());
        let rel = ModuleElement::new(&s, vec![dy.clone(), -theta.clone()]);
        let check = verify_lifts(&gens, &ShiftedFreeModule::free(1), &[rel]).unwrap();
        assert!(check.all_pass(), "{check:?}");
        let _ = int(1);
    }
}
