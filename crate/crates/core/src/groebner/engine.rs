//! Term orders, sorted module polynomials, division and completion.
//!
//! Everything here runs on a working signature, which is the user's algebra, optionally
//! widened by one commuting variable `H` used to homogenize for orders that are not
//! well-orders (any order comparing V-weights first).

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use num_traits::{One, Zero};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::filtration::{OrderKind, OrderSpec, PositionStrategy};
use crate::weyl::{multiply_monomials, MonomialKey, Operator, Rat, Signature};

pub(crate) type Weights = [i64; 2];

fn add_w(a: Weights, b: Weights) -> Weights {
    [a[0] + b[0], a[1] + b[1]]
}

/// Per-position data of an order. At the base level positions are plain; at a Schreyer
/// level a position stands for the leading term of a generator one level down.
#[derive(Clone, Debug)]
pub(crate) struct Slot {
    /// Sum of the leading exponents down to the base module; `None` means zero.
    pub offset: Option<MonomialKey>,
    pub base: usize,
    /// Position indices at levels `1..=k`, compared in that sequence on ties.
    pub chain: SmallVec<[u32; 4]>,
    pub wshift: Weights,
    /// Total-degree shift, used when homogenizing with `H` and for pair selection.
    pub tshift: i64,
}

#[derive(Clone, Debug)]
pub(crate) struct TermOrder {
    pub spec: OrderSpec,
    pub sig: Arc<Signature>,
    /// Exponent index of the homogenizing variable `H`, compared last in the lex tie-break.
    pub h_slot: Option<usize>,
    pub slots: Vec<Slot>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct GTerm {
    pub w: Weights,
    pub pos: u32,
    pub key: MonomialKey,
    pub coeff: Rat,
}

/// A module element with terms sorted strictly decreasing for one [`TermOrder`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct GPoly {
    pub terms: Vec<GTerm>,
}

impl GPoly {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> &GTerm {
        &self.terms[0]
    }
}

impl TermOrder {
    pub fn base(
        spec: OrderSpec,
        sig: &Arc<Signature>,
        h_slot: Option<usize>,
        f_shifts: &[i64],
        v_shifts: &[i64],
        t_shifts: &[i64],
    ) -> TermOrder {
        let slots = (0..f_shifts.len())
            .map(|i| Slot {
                offset: None,
                base: i,
                chain: SmallVec::new(),
                wshift: combine(spec.kind, f_shifts[i], v_shifts[i]),
                tshift: t_shifts[i],
            })
            .collect();
        TermOrder { spec, sig: sig.clone(), h_slot, slots }
    }

    /// The Schreyer order induced on the free module whose `j`-th basis vector maps to a
    /// polynomial with leading term `leads[j]`.
    pub fn schreyer(&self, leads: &[(u32, MonomialKey)]) -> TermOrder {
        let slots = leads
            .iter()
            .enumerate()
            .map(|(j, (p, key))| {
                let prev = &self.slots[*p as usize];
                let offset = match &prev.offset {
                    None => key.clone(),
                    Some(o) => o.add(key),
                };
                let mut chain = prev.chain.clone();
                chain.push(j as u32);
                Slot {
                    offset: Some(offset),
                    base: prev.base,
                    chain,
                    wshift: add_w(self.key_weights(key), prev.wshift),
                    tshift: prev.tshift + key.total_degree(&self.sig),
                }
            })
            .collect();
        TermOrder { spec: self.spec, sig: self.sig.clone(), h_slot: self.h_slot, slots }
    }

    pub fn rank(&self) -> usize {
        self.slots.len()
    }

    pub fn key_weights(&self, key: &MonomialKey) -> Weights {
        combine(self.spec.kind, key.f_degree(&self.sig), key.v_weight(&self.sig))
    }

    pub fn term(&self, pos: usize, key: MonomialKey, coeff: Rat) -> GTerm {
        let w = add_w(self.key_weights(&key), self.slots[pos].wshift);
        GTerm { w, pos: pos as u32, key, coeff }
    }


    /// Total degree of a term including the shift of its position.
    pub fn sugar(&self, pos: usize, key: &MonomialKey) -> i64 {
        key.total_degree(&self.sig) + self.slots[pos].tshift
    }

    fn lex(&self, a: &MonomialKey, oa: Option<&MonomialKey>, b: &MonomialKey, ob: Option<&MonomialKey>) -> Ordering {
        let get = |k: &MonomialKey, o: Option<&MonomialKey>, i: usize| k.0[i] as u32 + o.map_or(0, |o| o.0[i] as u32);
        for i in 0..a.0.len() {
            if Some(i) == self.h_slot {
                continue;
            }
            match get(a, oa, i).cmp(&get(b, ob, i)) {
                Ordering::Equal => {}
                other => return other,
            }
        }
        match self.h_slot {
            Some(i) => get(a, oa, i).cmp(&get(b, ob, i)),
            None => Ordering::Equal,
        }
    }

    pub fn cmp(&self, a: &GTerm, b: &GTerm) -> Ordering {
        let sa = &self.slots[a.pos as usize];
        let sb = &self.slots[b.pos as usize];
        let base = || sb.base.cmp(&sa.base);
        let rest = || {
            a.w.cmp(&b.w).then_with(|| self.lex(&a.key, sa.offset.as_ref(), &b.key, sb.offset.as_ref()))
        };
        let first = match self.spec.position {
            PositionStrategy::Pot => base().then_with(rest),
            PositionStrategy::Top => rest().then_with(base),
        };
        first.then_with(|| {
            for (x, y) in sa.chain.iter().zip(sb.chain.iter()) {
                match y.cmp(x) {
                    Ordering::Equal => {}
                    other => return other,
                }
            }
            Ordering::Equal
        })
    }

    /// Sorts decreasingly and merges equal monomials.
    pub fn normalize(&self, mut terms: Vec<GTerm>) -> GPoly {
        terms.sort_by(|a, b| self.cmp(b, a));
        let mut out: Vec<GTerm> = Vec::with_capacity(terms.len());
        for t in terms {
            if let Some(last) = out.last_mut() {
                if last.pos == t.pos && last.key == t.key {
                    last.coeff += t.coeff;
                    if last.coeff.is_zero() {
                        out.pop();
                    }
                    continue;
                }
            }
            if !t.coeff.is_zero() {
                out.push(t);
            }
        }
        GPoly { terms: out }
    }

    pub fn encode_coords(&self, coords: &[Operator]) -> GPoly {
        let mut terms = Vec::new();
        for (pos, op) in coords.iter().enumerate() {
            for t in op.terms() {
                terms.push(self.term(pos, t.key.clone(), t.coeff.clone()));
            }
        }
        self.normalize(terms)
    }

    pub fn to_coords(&self, p: &GPoly) -> Vec<Operator> {
        let mut buckets: Vec<Vec<(MonomialKey, Rat)>> = vec![Vec::new(); self.rank()];
        for t in &p.terms {
            buckets[t.pos as usize].push((t.key.clone(), t.coeff.clone()));
        }
        buckets.into_iter().map(|b| Operator::from_terms(&self.sig, b)).collect()
    }

    /// `c · m · p` for a monomial `m` acting on the left.
    pub fn mul_term(&self, key: &MonomialKey, c: &Rat, p: &GPoly) -> GPoly {
        if self.sig.is_commutative() {
            let kw = self.key_weights(key);
            let terms = p
                .terms
                .iter()
                .map(|t| GTerm { w: add_w(kw, t.w), pos: t.pos, key: key.add(&t.key), coeff: c * &t.coeff })
                .collect();
            return GPoly { terms };
        }
        let mut out = Vec::with_capacity(p.terms.len() * 2);
        for t in &p.terms {
            let tc = c * &t.coeff;
            multiply_monomials(&self.sig, key, &t.key, |k, m| {
                out.push(self.term(t.pos as usize, k, &tc * Rat::from_integer(m)));
            });
        }
        self.normalize(out)
    }

    /// `a - b`, both sorted.
    pub fn sub(&self, a: &[GTerm], b: &[GTerm]) -> Vec<GTerm> {
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match self.cmp(&a[i], &b[j]) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let mut t = b[j].clone();
                    t.coeff = -t.coeff;
                    out.push(t);
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &a[i].coeff - &b[j].coeff;
                    if !c.is_zero() {
                        let mut t = a[i].clone();
                        t.coeff = c;
                        out.push(t);
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        for t in &b[j..] {
            let mut t = t.clone();
            t.coeff = -t.coeff;
            out.push(t);
        }
        out
    }


    pub fn scale(&self, p: &GPoly, c: &Rat) -> GPoly {
        if c.is_zero() {
            return GPoly::default();
        }
        GPoly { terms: p.terms.iter().map(|t| GTerm { coeff: &t.coeff * c, ..t.clone() }).collect() }
    }
}

fn combine(kind: OrderKind, f: i64, v: i64) -> Weights {
    match kind {
        OrderKind::F => [f, 0],
        OrderKind::V => [v, 0],
        OrderKind::FV => [f, v],
        OrderKind::VF => [v, f],
    }
}

/// Quotients of a division, one list of monomial terms per divisor.
pub(crate) type Quotients = Vec<Vec<(MonomialKey, Rat)>>;

/// Leading-term index over a list of divisors.
pub(crate) struct Divisors<'a> {
    pub polys: Vec<&'a GPoly>,
    by_pos: HashMap<u32, Vec<usize>>,
}

impl<'a> Divisors<'a> {
    pub fn new(polys: impl IntoIterator<Item = &'a GPoly>) -> Self {
        let polys: Vec<&GPoly> = polys.into_iter().collect();
        let mut by_pos: HashMap<u32, Vec<usize>> = HashMap::new();
        for (i, p) in polys.iter().enumerate() {
            if !p.is_zero() {
                by_pos.entry(p.lead().pos).or_default().push(i);
            }
        }
        // Prefer short divisors: fewer terms to multiply out.
        for v in by_pos.values_mut() {
            v.sort_by_key(|&i| polys[i].terms.len());
        }
        Divisors { polys, by_pos }
    }

    fn find(&self, t: &GTerm) -> Option<usize> {
        self.by_pos.get(&t.pos)?.iter().copied().find(|&i| self.polys[i].lead().key.divides(&t.key))
    }
}

impl TermOrder {
    /// Division with remainder. With `full` unset only leading terms are reduced.
    pub fn reduce(&self, p: GPoly, divs: &Divisors, full: bool, want_quotients: bool) -> (GPoly, Quotients) {
        let mut quot: Quotients = if want_quotients { vec![Vec::new(); divs.polys.len()] } else { Vec::new() };
        let mut rem: Vec<GTerm> = Vec::new();
        let mut cur = p.terms;
        let mut start = 0;
        while start < cur.len() {
            let t = &cur[start];
            match divs.find(t) {
                Some(k) => {
                    let g = divs.polys[k];
                    let q = t.key.quotient(&g.lead().key);
                    let c = &t.coeff / &g.lead().coeff;
                    let prod = self.mul_term(&q, &c, g);
                    cur = self.sub(&cur[start..], &prod.terms);
                    start = 0;
                    if want_quotients {
                        quot[k].push((q, c));
                    }
                }
                None => {
                    if !full {
                        rem.extend(cur.drain(start..));
                        break;
                    }
                    rem.push(cur[start].clone());
                    start += 1;
                }
            }
        }
        (GPoly { terms: rem }, quot)
    }

    /// `Σ_k q_k · rows_k` for quotient lists against tracked representations.
    pub fn combine_quotients(&self, quot: &Quotients, rows: &[Vec<Operator>], rank: usize) -> Vec<Operator> {
        let mut acc = vec![Operator::zero(&self.sig); rank];
        for (k, qs) in quot.iter().enumerate() {
            if qs.is_empty() {
                continue;
            }
            let q = Operator::from_terms(&self.sig, qs.iter().cloned());
            for (slot, r) in acc.iter_mut().zip(&rows[k]) {
                if !r.is_zero() {
                    *slot = &*slot + &(&q * r);
                }
            }
        }
        acc
    }
}

/// Output of a completion.
#[derive(Clone, Debug)]
pub(crate) struct Completed {
    pub polys: Vec<GPoly>,
    /// Row `i` expresses `polys[i]` as a left combination of the inputs.
    pub repr: Option<Vec<Vec<Operator>>>,
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct CompletionConfig {
    pub track: bool,
    pub chain_criterion: bool,
    /// Product criterion; only valid for ideals in a commutative ring.
    pub product_criterion: bool,
    /// Whether `sugar` (total degree) or the first weight drives pair selection.
    pub graded: bool,
}

struct Pair {
    i: usize,
    j: usize,
    lcm: GTerm,
    sugar: i64,
}

fn scale_ops(ops: &[Operator], key: &MonomialKey, c: &Rat, sig: &Arc<Signature>) -> Vec<Operator> {
    let m = Operator::monomial(sig, key.clone(), c.clone());
    ops.iter().map(|o| if o.is_zero() { o.clone() } else { &m * o }).collect()
}

fn sub_ops(a: &[Operator], b: &[Operator]) -> Vec<Operator> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

impl TermOrder {
    fn selection(&self, cfg: &CompletionConfig, t: &GTerm) -> i64 {
        if cfg.graded {
            self.sugar(t.pos as usize, &t.key)
        } else {
            t.w[0]
        }
    }

    /// S-polynomial `m_i/lc_i · g_i - m_j/lc_j · g_j` and the monomials used.
    pub fn s_poly(&self, gi: &GPoly, gj: &GPoly) -> (GPoly, (MonomialKey, Rat), (MonomialKey, Rat)) {
        let li = gi.lead();
        let lj = gj.lead();
        let l = li.key.lcm(&lj.key);
        let ui = l.quotient(&li.key);
        let uj = l.quotient(&lj.key);
        let ci = Rat::one() / &li.coeff;
        let cj = Rat::one() / &lj.coeff;
        let a = self.mul_term(&ui, &ci, gi);
        let b = self.mul_term(&uj, &cj, gj);
        // Leading terms cancel exactly.
        let s = GPoly { terms: self.sub(&a.terms[1..], &b.terms[1..]) };
        (s, (ui, ci), (uj, cj))
    }

    /// Buchberger completion with the normal selection strategy, followed by
    /// autoreduction; the result is monic and sorted increasingly by leading term.
    pub fn complete(&self, inputs: Vec<GPoly>, input_rank: usize, cfg: CompletionConfig) -> Completed {
        let sig = self.sig.clone();
        let mut basis: Vec<GPoly> = Vec::new();
        let mut reprs: Vec<Vec<Operator>> = Vec::new();
        let mut pairs: Vec<Pair> = Vec::new();
        let mut done: HashSet<(usize, usize)> = HashSet::new();

        let mut order_inputs: Vec<usize> = (0..inputs.len()).filter(|&i| !inputs[i].is_zero()).collect();
        order_inputs.sort_by(|&a, &b| {
            let ta = inputs[a].lead();
            let tb = inputs[b].lead();
            self.selection(&cfg, ta).cmp(&self.selection(&cfg, tb)).then_with(|| self.cmp(ta, tb))
        });

        let mut pending: Vec<(GPoly, Vec<Operator>)> = Vec::new();
        for &i in &order_inputs {
            let mut r = vec![Operator::zero(&sig); if cfg.track { input_rank } else { 0 }];
            if cfg.track {
                r[i] = Operator::one(&sig);
            }
            pending.push((inputs[i].clone(), r));
        }

        let insert = |p: GPoly, r: Vec<Operator>, basis: &mut Vec<GPoly>, reprs: &mut Vec<Vec<Operator>>, pairs: &mut Vec<Pair>| {
            let divs = Divisors::new(basis.iter());
            let (rem, quot) = self.reduce(p, &divs, true, cfg.track);
            if rem.is_zero() {
                return;
            }
            let r = if cfg.track { sub_ops(&r, &self.combine_quotients(&quot, reprs, input_rank)) } else { r };
            let inv = Rat::one() / &rem.lead().coeff;
            let rem = self.scale(&rem, &inv);
            let r: Vec<Operator> = r.iter().map(|o| o.scale(&inv)).collect();
            let k = basis.len();
            let lk = rem.lead().clone();
            for (i, g) in basis.iter().enumerate() {
                let li = g.lead();
                if li.pos != lk.pos {
                    continue;
                }
                let l = li.key.lcm(&lk.key);
                let t = self.term(lk.pos as usize, l, Rat::one());
                let sugar = self.selection(&cfg, &t);
                pairs.push(Pair { i, j: k, lcm: t, sugar });
            }
            basis.push(rem);
            reprs.push(r);
        };

        for (p, r) in pending {
            insert(p, r, &mut basis, &mut reprs, &mut pairs);
        }

        while !pairs.is_empty() {
            let mut best = 0;
            for idx in 1..pairs.len() {
                let (a, b) = (&pairs[idx], &pairs[best]);
                if a.sugar.cmp(&b.sugar).then_with(|| self.cmp(&a.lcm, &b.lcm)) == Ordering::Less {
                    best = idx;
                }
            }
            let pair = pairs.swap_remove(best);
            let (i, j) = (pair.i, pair.j);
            let li = basis[i].lead().key.clone();
            let lj = basis[j].lead().key.clone();
            let skip = (cfg.product_criterion && li.coprime(&lj))
                || (cfg.chain_criterion
                    && (0..basis.len()).any(|k| {
                        k != i
                            && k != j
                            && basis[k].lead().pos == pair.lcm.pos
                            && basis[k].lead().key.divides(&pair.lcm.key)
                            && done.contains(&(i.min(k), i.max(k)))
                            && done.contains(&(j.min(k), j.max(k)))
                    }));
            if !skip {
                let (s, (ui, ci), (uj, cj)) = self.s_poly(&basis[i], &basis[j]);
                let r = if cfg.track {
                    sub_ops(&scale_ops(&reprs[i], &ui, &ci, &sig), &scale_ops(&reprs[j], &uj, &cj, &sig))
                } else {
                    Vec::new()
                };
                insert(s, r, &mut basis, &mut reprs, &mut pairs);
            }
            done.insert((i.min(j), i.max(j)));
        }

        self.autoreduce(basis, if cfg.track { Some(reprs) } else { None }, input_rank)
    }

    /// Drops elements with redundant leading terms, reduces tails, makes monic, sorts.
    pub fn autoreduce(&self, basis: Vec<GPoly>, reprs: Option<Vec<Vec<Operator>>>, input_rank: usize) -> Completed {
        let n = basis.len();
        let keep: Vec<usize> = (0..n)
            .filter(|&i| {
                let li = basis[i].lead();
                !(0..n).any(|j| {
                    let lj = basis[j].lead();
                    j != i && lj.pos == li.pos && lj.key.divides(&li.key) && (lj.key != li.key || j < i)
                })
            })
            .collect();
        let mut polys = Vec::with_capacity(keep.len());
        let mut rows = Vec::with_capacity(keep.len());
        for &i in &keep {
            let others = Divisors::new(keep.iter().filter(|&&j| j != i).map(|&j| &basis[j]));
            let others_idx: Vec<usize> = keep.iter().copied().filter(|&j| j != i).collect();
            let head = basis[i].terms[0].clone();
            let tail = GPoly { terms: basis[i].terms[1..].to_vec() };
            let track = reprs.is_some();
            let (rem, quot) = self.reduce(tail, &others, true, track);
            let mut terms = vec![head];
            terms.extend(rem.terms);
            let inv = Rat::one() / &terms[0].coeff;
            let p = self.scale(&GPoly { terms }, &inv);
            if let Some(rs) = &reprs {
                let sub_rows: Vec<Vec<Operator>> = others_idx.iter().map(|&j| rs[j].clone()).collect();
                let r = sub_ops(&rs[i], &self.combine_quotients(&quot, &sub_rows, input_rank));
                rows.push(r.iter().map(|o| o.scale(&inv)).collect::<Vec<_>>());
            }
            polys.push(p);
        }
        let mut idx: Vec<usize> = (0..polys.len()).collect();
        idx.sort_by(|&a, &b| self.cmp(polys[a].lead(), polys[b].lead()));
        let sorted: Vec<GPoly> = idx.iter().map(|&i| polys[i].clone()).collect();
        let repr = reprs.map(|_| idx.iter().map(|&i| rows[i].clone()).collect());
        Completed { polys: sorted, repr }
    }

    /// Schreyer syzygies of a Gröbner basis: for each `i`, the pairs `(i, j)`, `j > i`,
    /// whose monomial `lcm/lm_i` is a minimal generator of the colon ideal. The result is
    /// expressed in the Schreyer order on the basis indices.
    pub fn syzygies(&self, basis: &[GPoly]) -> Result<(TermOrder, Vec<GPoly>)> {
        let leads: Vec<(u32, MonomialKey)> = basis.iter().map(|g| (g.lead().pos, g.lead().key.clone())).collect();
        let next = self.schreyer(&leads);
        let divs = Divisors::new(basis.iter());
        let mut out = Vec::new();
        for i in 0..basis.len() {
            let li = basis[i].lead();
            let cands: Vec<(usize, MonomialKey)> = (i + 1..basis.len())
                .filter(|&j| basis[j].lead().pos == li.pos)
                .map(|j| (j, li.key.lcm(&basis[j].lead().key).quotient(&li.key)))
                .collect();
            for (a, (j, ua)) in cands.iter().enumerate() {
                let redundant = cands
                    .iter()
                    .enumerate()
                    .any(|(b, (_, ub))| b != a && ub.divides(ua) && (ub != ua || b < a));
                if redundant {
                    continue;
                }
                let (s, (ui, ci), (uj, cj)) = self.s_poly(&basis[i], &basis[*j]);
                let (rem, quot) = self.reduce(s, &divs, false, true);
                if !rem.is_zero() {
                    return Err(Error::IncompleteBasis(format!("S-pair ({i}, {j}) does not reduce to zero")));
                }
                let mut terms = vec![next.term(i, ui, ci), next.term(*j, uj, -cj)];
                for (k, qs) in quot.into_iter().enumerate() {
                    for (key, c) in qs {
                        terms.push(next.term(k, key, -c));
                    }
                }
                let syz = next.normalize(terms);
                if !syz.is_zero() {
                    out.push(syz);
                }
            }
        }
        Ok((next, out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::int;

    fn f_order(sig: &Arc<Signature>, rank: usize) -> TermOrder {
        TermOrder::base(OrderSpec::f(), sig, None, &vec![0; rank], &vec![0; rank], &vec![0; rank])
    }

    fn cfg() -> CompletionConfig {
        CompletionConfig { track: true, chain_criterion: false, product_criterion: false, graded: false }
    }

    #[test]
    fn lower_commutation_terms_are_smaller() {
        let s = Signature::homogenized(1, 0);
        let o = f_order(&s, 1);
        let p = o.encode_coords(&[&Operator::dx(&s, 0) * &Operator::x(&s, 0)]);
        assert_eq!(p.terms.len(), 2);
        assert_eq!(p.lead().key, MonomialKey::from_exponents(&[1, 1, 0]));
    }

    #[test]
    fn x_and_d_generate_h() {
        let s = Signature::homogenized(1, 0);
        let o = f_order(&s, 1);
        let gens = vec![o.encode_coords(&[Operator::x(&s, 0)]), o.encode_coords(&[Operator::dx(&s, 0)])];
        let done = o.complete(gens, 2, cfg());
        let leads: Vec<_> = done.polys.iter().map(|p| p.lead().key.clone()).collect();
        assert!(leads.contains(&MonomialKey::from_exponents(&[0, 0, 1])));
        // Representation of h: ∂·x - x·∂.
        let idx = leads.iter().position(|k| *k == MonomialKey::from_exponents(&[0, 0, 1])).unwrap();
        let r = &done.repr.as_ref().unwrap()[idx];
        let rebuilt = &(&r[0] * &Operator::x(&s, 0)) + &(&r[1] * &Operator::dx(&s, 0));
        assert_eq!(rebuilt, Operator::h(&s));
    }

    #[test]
    fn syzygy_pairs_vanish() {
        let s = Signature::commutative(2, 0);
        let o = f_order(&s, 1);
        let x = Operator::x(&s, 0);
        let y = Operator::x(&s, 1);
        let gens = vec![o.encode_coords(&[&x * &y]), o.encode_coords(&[&x * &x]), o.encode_coords(&[&y * &y])];
        let done = o.complete(gens, 3, cfg());
        let (next, syz) = o.syzygies(&done.polys).unwrap();
        assert!(!syz.is_empty());
        let gens: Vec<Operator> = done.polys.iter().map(|p| o.to_coords(p)[0].clone()).collect();
        for z in &syz {
            let coords = next.to_coords(z);
            let mut acc = Operator::zero(&s);
            for (c, g) in coords.iter().zip(&gens) {
                acc = &acc + &(c * g);
            }
            assert!(acc.is_zero());
        }
        let _ = int(0);
    }
}
