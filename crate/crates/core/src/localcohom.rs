//! Quasi-homogeneous isolated singularities: Milnor data, the Bernstein–Sato polynomial
//! with a functional-equation certificate, the action of `D` on `O[1/f]` and `O[1/f]/O`,
//! and the filtered presentations of `O[1/f]` and of `N = O[1/f]/O`.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::filtration::{ModuleElement, OrderSpec, ShiftedFreeModule};
use crate::groebner::{self, GroebnerOptions, InvolutiveOptions, InvolutiveReport, LiftCheck};
use crate::resolution::{self, FreeComplex};
use crate::restriction::{self, BFunction, UniPoly};
use crate::weyl::{int, AlgebraKind, MonomialKey, Operator, Rat, Signature};

/// Moves an operator between signatures with the same `n`, matching variables by role.
/// Terms involving `t`-variables missing from the target are an error.
pub fn transport(op: &Operator, to: &Arc<Signature>) -> Result<Operator> {
    let from = op.signature().clone();
    if from.n != to.n {
        return Err(Error::SignatureMismatch(format!("cannot move from n = {} to n = {}", from.n, to.n)));
    }
    let mut bad = false;
    let out = op.remap(to, |k| {
        let e = k.exps();
        let mut r = vec![0u16; to.width()];
        for i in 0..from.n {
            r[to.x_index(i)] = e[from.x_index(i)];
            r[to.dx_index(i)] = e[from.dx_index(i)];
        }
        for j in 0..from.p {
            if j < to.p {
                r[to.t_index(j)] = e[from.t_index(j)];
                r[to.dt_index(j)] = e[from.dt_index(j)];
            } else if e[from.t_index(j)] > 0 || e[from.dt_index(j)] > 0 {
                bad = true;
            }
        }
        r[to.h_index()] = e[from.h_index()];
        Some(MonomialKey::from_exponents(&r))
    });
    if bad {
        return Err(Error::SignatureMismatch("operator uses a t-variable the target lacks".into()));
    }
    Ok(out)
}

/// `∂g/∂y` for a polynomial `g`, `y` being the variable at exponent position `idx`.
pub fn partial(g: &Operator, idx: usize) -> Operator {
    Operator::from_terms(
        g.signature(),
        g.terms().iter().filter(|t| t.key.exps()[idx] > 0).map(|t| {
            let mut k = t.key.clone();
            let e = k.0[idx];
            k.0[idx] -= 1;
            (k, &t.coeff * int(e as i64))
        }),
    )
}

fn is_polynomial(g: &Operator) -> bool {
    let s = g.signature();
    g.terms().iter().all(|t| t.key.b(s).iter().chain(t.key.v(s)).all(|&x| x == 0) && t.key.e(s) == 0)
}

/// Division with remainder by a single polynomial in the lexicographic term order.
fn divrem(a: &Operator, b: &Operator) -> (Operator, Operator) {
    let sig = a.signature().clone();
    let lead = &b.terms()[0];
    let mut q = Vec::new();
    let mut r = Vec::new();
    let mut cur = a.clone();
    while let Some(t) = cur.terms().first().cloned() {
        if lead.key.divides(&t.key) {
            let qk = t.key.quotient(&lead.key);
            let qc = &t.coeff / &lead.coeff;
            let m = Operator::monomial(&sig, qk.clone(), qc.clone());
            cur = &cur - &(&m * b);
            q.push((qk, qc));
        } else {
            r.push((t.key.clone(), t.coeff.clone()));
            cur = &cur - &Operator::monomial(&sig, t.key, t.coeff);
        }
    }
    (Operator::from_terms(&sig, q), Operator::from_terms(&sig, r))
}

/// `f` with positive weights `w` such that `Σ w_i x_i ∂_i f = f`.
#[derive(Clone, Debug)]
pub struct QuasiHomogeneousInput {
    /// Polynomial in the commutative ring with `n` variables.
    pub f: Operator,
    pub weights: Vec<Rat>,
}

impl QuasiHomogeneousInput {
    /// Checks quasi-homogeneity exactly and that the singularity is isolated.
    pub fn new(f: &Operator, weights: Vec<Rat>) -> Result<Self> {
        let s = f.signature();
        if s.p != 0 || !is_polynomial(f) {
            return Err(Error::InvalidArgument("f must be a polynomial in x1..xn".into()));
        }
        if weights.len() != s.n {
            return Err(Error::DimensionMismatch(format!("{} weights for {} variables", weights.len(), s.n)));
        }
        if weights.iter().any(|w| !w.is_positive()) {
            return Err(Error::InvalidArgument("weights must be positive".into()));
        }
        let f = f.with_kind(AlgebraKind::Commutative);
        let q = QuasiHomogeneousInput { f, weights };
        let euler = (0..q.n()).fold(Operator::zero(q.poly_sig()), |acc, i| {
            &acc + &(&Operator::x(q.poly_sig(), i) * &q.derivative(i)).scale(&q.weights[i])
        });
        if euler != q.f || q.f.is_zero() {
            return Err(Error::InvalidArgument("f is not quasi-homogeneous for these weights".into()));
        }
        q.milnor()?;
        Ok(q)
    }

    pub fn n(&self) -> usize {
        self.f.signature().n
    }

    pub fn poly_sig(&self) -> &Arc<Signature> {
        self.f.signature()
    }

    /// `f'_i` as a polynomial.
    pub fn derivative(&self, i: usize) -> Operator {
        partial(&self.f, i)
    }

    /// `|w| = Σ w_i`.
    pub fn weight_sum(&self) -> Rat {
        self.weights.iter().fold(Rat::zero(), |a, b| a + b)
    }

    pub fn weighted_degree(&self, key: &MonomialKey) -> Rat {
        let s = self.poly_sig();
        key.a(s).iter().zip(&self.weights).fold(Rat::zero(), |acc, (&a, w)| acc + w * int(a as i64))
    }

    /// `θ = Σ w_i x_i ∂_i` over `sig` (which must have the same `n`).
    pub fn theta(&self, sig: &Arc<Signature>) -> Operator {
        (0..self.n()).fold(Operator::zero(sig), |acc, i| {
            &acc + &(&Operator::x(sig, i) * &Operator::dx(sig, i)).scale(&self.weights[i])
        })
    }

    /// The monomial basis of `C[x]/J(f)`.
    pub fn milnor(&self) -> Result<MilnorData> {
        let s = self.poly_sig().clone();
        let jac: Vec<ModuleElement> = (0..self.n()).map(|i| ModuleElement::scalar(self.derivative(i))).collect();
        let gb = groebner::buchberger_over(&s, &jac, &ShiftedFreeModule::free(1), OrderSpec::f(), &GroebnerOptions::default())?;
        let leads: Vec<MonomialKey> = gb.leading().iter().map(|(_, k)| k.clone()).collect();
        let mut bounds = Vec::new();
        for i in 0..self.n() {
            let pure = leads.iter().filter_map(|k| {
                let a = k.a(&s);
                (a.iter().enumerate().all(|(j, &e)| j == i || e == 0) && a[i] > 0).then_some(a[i])
            });
            match pure.min() {
                Some(b) => bounds.push(b),
                None => return Err(Error::InvalidArgument("the singularity of f is not isolated".into())),
            }
        }
        let mut basis = Vec::new();
        let mut exps = vec![0u16; self.n()];
        loop {
            let mut key = MonomialKey::one(&s);
            for (i, &e) in exps.iter().enumerate() {
                key.0[s.x_index(i)] = e;
            }
            if !leads.iter().any(|l| l.divides(&key)) {
                basis.push(key);
            }
            let mut i = 0;
            loop {
                if i == exps.len() {
                    basis.sort();
                    let degrees = basis.iter().map(|k| self.weighted_degree(k)).collect();
                    let mu = basis.len();
                    return Ok(MilnorData { basis, degrees, weight_sum: self.weight_sum(), mu });
                }
                exps[i] += 1;
                if exps[i] < bounds[i] {
                    break;
                }
                exps[i] = 0;
                i += 1;
            }
        }
    }

    /// `S_{i,j} = f'_i ∂_j − f'_j ∂_i` for `i < j`, over the Weyl algebra in `x`.
    pub fn s_operators(&self) -> Vec<((usize, usize), Operator)> {
        let d = Signature::weyl(self.n(), 0);
        let mut out = Vec::new();
        for i in 0..self.n() {
            for j in i + 1..self.n() {
                out.push(((i, j), self.s_operator(&d, i, j)));
            }
        }
        out
    }

    fn s_operator(&self, sig: &Arc<Signature>, i: usize, j: usize) -> Operator {
        let fi = transport(&self.derivative(i), sig).unwrap();
        let fj = transport(&self.derivative(j), sig).unwrap();
        &(&fi * &Operator::dx(sig, j)) - &(&fj * &Operator::dx(sig, i))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MilnorData {
    pub basis: Vec<MonomialKey>,
    pub degrees: Vec<Rat>,
    pub weight_sum: Rat,
    pub mu: usize,
}

/// `b_f`, `k'` (minus the least integral root of `b_f`) and the b-function of
/// `M = D_{x,t} f^s` along `t = 0`, `b_M(X) = b_f(−X−1)`.
#[derive(Clone, Debug)]
pub struct QuasiHomogeneousB {
    pub b_f: UniPoly,
    pub k_prime: i64,
    pub b_m: BFunction,
}

impl QuasiHomogeneousB {
    pub fn k1(&self) -> i64 {
        self.b_m.k1.expect("b_M always has the root 0")
    }
}

/// `b_f(s) = (s+1) ∏_{c ∈ S} (s + c)` with `S = {|w| + wdeg(m)}` over the Milnor basis.
pub fn bernstein_sato_qh(q: &QuasiHomogeneousInput) -> Result<QuasiHomogeneousB> {
    let m = q.milnor()?;
    let set: BTreeSet<Rat> = m.degrees.iter().map(|d| &m.weight_sum + d).collect();
    let mut roots = vec![(-Rat::one(), 1usize)];
    for c in set {
        let r = -c;
        match roots.iter_mut().find(|(x, _)| *x == r) {
            Some((_, k)) => *k += 1,
            None => roots.push((r, 1)),
        }
    }
    let b_f = UniPoly::from_roots(&roots);
    let least = roots
        .iter()
        .filter(|(r, _)| r.is_integer())
        .map(|(r, _)| r.to_integer().to_i64().unwrap())
        .min()
        .expect("-1 is always a root");
    let b_m = BFunction::new(restriction::reflect(&b_f))?;
    Ok(QuasiHomogeneousB { b_f, k_prime: -least, b_m })
}

/// `b(s) f^s = P(s) f^{s+1}` with `P(s) = Σ_j s^j P_j`.
#[derive(Clone, Debug)]
pub struct FunctionalEquation {
    pub b: UniPoly,
    /// `(j, P_j)` with `P_j` over the Weyl algebra in `x`.
    pub p: Vec<(u32, Operator)>,
}

/// Polynomial ring in `x_1..x_n, s`, with `s` stored as the last `x`.
fn xs_sig(n: usize) -> Arc<Signature> {
    Signature::commutative(n + 1, 0)
}

fn lift_poly(g: &Operator, xs: &Arc<Signature>) -> Operator {
    let from = g.signature().clone();
    g.remap(xs, |k| {
        let mut r = vec![0u16; xs.width()];
        for i in 0..from.n {
            r[xs.x_index(i)] = k.exps()[from.x_index(i)];
        }
        Some(MonomialKey::from_exponents(&r))
    })
}

/// `x^a ∂^b (f^{s+1})` written as `g(x, s) · f^{s+1-d}`.
fn apply_to_power(q: &QuasiHomogeneousInput, xs: &Arc<Signature>, a: &[u16], b: &[u16], d: u32) -> Operator {
    let n = q.n();
    let f = lift_poly(&q.f, xs);
    let fp: Vec<Operator> = (0..n).map(|i| lift_poly(&q.derivative(i), xs)).collect();
    let s = Operator::x(xs, n);
    let mut g = Operator::one(xs);
    let mut k = 0u32;
    for (i, &bi) in b.iter().enumerate() {
        for _ in 0..bi {
            // ∂_i (g f^{s+1-k}) = (f ∂_i g + (s+1-k) f'_i g) f^{s-k}
            let coef = &s + &Operator::constant(xs, int(1 - k as i64));
            g = &(&f * &partial(&g, i)) + &(&(&coef * &fp[i]) * &g);
            k += 1;
        }
    }
    for _ in k..d {
        g = &g * &f;
    }
    let mut xa = MonomialKey::one(xs);
    for (i, &ai) in a.iter().enumerate() {
        xa.0[i] = ai;
    }
    &Operator::monomial(xs, xa, Rat::one()) * &g
}

fn compositions(n: usize, total: u32) -> Vec<Vec<u16>> {
    fn go(i: usize, n: usize, left: u32, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if i + 1 == n {
            cur.push(left as u16);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for e in 0..=left {
            cur.push(e as u16);
            go(i + 1, n, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        go(0, n, total, &mut Vec::new(), &mut out);
    }
    out
}

/// Solves `A c = rhs` exactly; `A` is given by columns over a common row index set.
fn solve(columns: &[Vec<(usize, Rat)>], rhs: &[(usize, Rat)], nrows: usize) -> Option<Vec<Rat>> {
    let ncols = columns.len();
    let mut m: Vec<Vec<Rat>> = vec![vec![Rat::zero(); ncols + 1]; nrows];
    for (j, col) in columns.iter().enumerate() {
        for (i, v) in col {
            m[*i][j] = v.clone();
        }
    }
    for (i, v) in rhs {
        m[*i][ncols] = v.clone();
    }
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = Rat::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let factor = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x -= &factor * y;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == nrows {
            break;
        }
    }
    if m[r..].iter().any(|row| !row[ncols].is_zero()) {
        return None;
    }
    let mut sol = vec![Rat::zero(); ncols];
    for (i, &c) in pivots.iter().enumerate() {
        sol[c] = m[i][ncols].clone();
    }
    Some(sol)
}

impl FunctionalEquation {
    /// Searches `P(s)` of weighted degree `−1`, order `≤ d`, `s`-degree `≤ deg b`, for
    /// `d = 1, 2, …, deg b`; `None` if no such `P` exists.
    pub fn solve(q: &QuasiHomogeneousInput, b: &UniPoly) -> Result<Option<FunctionalEquation>> {
        let n = q.n();
        let xs = xs_sig(n);
        let degb = b.degree().unwrap_or(0) as u32;
        for d in 1..=degb.max(1) {
            let mut unknowns: Vec<(Vec<u16>, Vec<u16>, u32)> = Vec::new();
            for order in 0..=d {
                for beta in compositions(n, order) {
                    let wb = beta.iter().zip(&q.weights).fold(Rat::zero(), |acc, (&e, w)| acc + w * int(e as i64));
                    let target = wb - Rat::one();
                    if target.is_negative() {
                        continue;
                    }
                    for alpha in bounded_with_weight(&q.weights, &target) {
                        for j in 0..=degb {
                            unknowns.push((alpha.clone(), beta.clone(), j));
                        }
                    }
                }
            }
            let rhs_poly = {
                let mut g = Operator::zero(&xs);
                let s = Operator::x(&xs, n);
                for c in b.coeffs().iter().rev() {
                    g = &(&g * &s) + &Operator::constant(&xs, c.clone());
                }
                let f = lift_poly(&q.f, &xs);
                for _ in 1..d {
                    g = &g * &f;
                }
                g
            };
            let mut index: std::collections::BTreeMap<MonomialKey, usize> = Default::default();
            let mut idx = |k: &MonomialKey| {
                let l = index.len();
                *index.entry(k.clone()).or_insert(l)
            };
            let mut columns = Vec::with_capacity(unknowns.len());
            let s = Operator::x(&xs, n);
            for (a, bb, j) in &unknowns {
                let g = &s.pow(*j) * &apply_to_power(q, &xs, a, bb, d);
                columns.push(g.terms().iter().map(|t| (idx(&t.key), t.coeff.clone())).collect::<Vec<_>>());
            }
            let rhs: Vec<(usize, Rat)> = rhs_poly.terms().iter().map(|t| (idx(&t.key), t.coeff.clone())).collect();
            let nrows = index.len();
            if let Some(sol) = solve(&columns, &rhs, nrows) {
                let dsig = Signature::weyl(n, 0);
                let mut parts: Vec<(u32, Operator)> = (0..=degb).map(|j| (j, Operator::zero(&dsig))).collect();
                for ((a, bb, j), c) in unknowns.iter().zip(sol) {
                    if c.is_zero() {
                        continue;
                    }
                    let mut key = MonomialKey::one(&dsig);
                    for i in 0..n {
                        key.0[dsig.x_index(i)] = a[i];
                        key.0[dsig.dx_index(i)] = bb[i];
                    }
                    let part = &mut parts[*j as usize].1;
                    *part = &*part + &Operator::monomial(&dsig, key, c);
                }
                parts.retain(|(_, p)| !p.is_zero());
                let fe = FunctionalEquation { b: b.clone(), p: parts };
                if !fe.verify(q) {
                    return Err(Error::Invariant("solved functional equation fails its own check".into()));
                }
                return Ok(Some(fe));
            }
        }
        Ok(None)
    }

    /// Recomputes `P(s) f^{s+1}` term by term and compares with `b(s) f^s`.
    pub fn verify(&self, q: &QuasiHomogeneousInput) -> bool {
        let n = q.n();
        let xs = xs_sig(n);
        let d = self
            .p
            .iter()
            .flat_map(|(_, p)| p.terms().iter().map(|t| t.key.b(p.signature()).iter().map(|&e| e as u32).sum::<u32>()))
            .max()
            .unwrap_or(0)
            .max(1);
        let s = Operator::x(&xs, n);
        let mut lhs = Operator::zero(&xs);
        for (j, p) in &self.p {
            for t in p.terms() {
                let a = t.key.a(p.signature()).to_vec();
                let b = t.key.b(p.signature()).to_vec();
                let g = apply_to_power(q, &xs, &a, &b, d);
                lhs = &lhs + &(&s.pow(*j) * &g).scale(&t.coeff);
            }
        }
        let mut rhs = Operator::zero(&xs);
        for c in self.b.coeffs().iter().rev() {
            rhs = &(&rhs * &s) + &Operator::constant(&xs, c.clone());
        }
        let f = lift_poly(&q.f, &xs);
        for _ in 1..d {
            rhs = &rhs * &f;
        }
        lhs == rhs
    }
}

/// Exponent vectors `α ≥ 0` with `Σ w_i α_i = target`.
fn bounded_with_weight(w: &[Rat], target: &Rat) -> Vec<Vec<u16>> {
    fn go(i: usize, w: &[Rat], left: Rat, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if i == w.len() {
            if left.is_zero() {
                out.push(cur.clone());
            }
            return;
        }
        let mut e = 0u16;
        let mut rem = left;
        while !rem.is_negative() {
            cur.push(e);
            go(i + 1, w, rem.clone(), cur, out);
            cur.pop();
            rem -= &w[i];
            e += 1;
        }
    }
    let mut out = Vec::new();
    go(0, w, target.clone(), &mut Vec::new(), &mut out);
    out
}

/// `g / F^k` in `O[1/F]`, or its class in `O[1/F]/O`.
///
/// Numerators are kept reduced: no factor of `F` cancels against the pole, and modulo `O`
/// the numerator is the remainder of division by `F^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentElement {
    pub denominator: Operator,
    pub numerator: Operator,
    pub pole: u32,
    pub modulo_regular: bool,
}

impl LaurentElement {
    /// `g / F^k` over the polynomial ring of `F`.
    pub fn new(denominator: &Operator, numerator: &Operator, pole: u32, modulo_regular: bool) -> Result<Self> {
        if !is_polynomial(denominator) || !is_polynomial(numerator) {
            return Err(Error::InvalidArgument("Laurent data must be polynomials".into()));
        }
        if denominator.is_zero() {
            return Err(Error::InvalidArgument("the denominator must be nonzero".into()));
        }
        let csig = denominator.signature().with_kind(AlgebraKind::Commutative);
        let mut el = LaurentElement {
            denominator: denominator.with_kind(AlgebraKind::Commutative),
            numerator: numerator.with_kind(AlgebraKind::Commutative),
            pole,
            modulo_regular,
        };
        if **el.numerator.signature() != *csig {
            return Err(Error::SignatureMismatch("numerator and denominator differ in ring".into()));
        }
        el.normalize();
        Ok(el)
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    fn normalize(&mut self) {
        if self.modulo_regular {
            let fk = self.denominator.pow(self.pole);
            self.numerator = divrem(&self.numerator, &fk).1;
        }
        while self.pole > 0 && !self.numerator.is_zero() {
            let (q, r) = divrem(&self.numerator, &self.denominator);
            if !r.is_zero() {
                break;
            }
            self.numerator = q;
            self.pole -= 1;
        }
        if self.numerator.is_zero() {
            self.pole = 0;
        }
    }

    fn with_pole(&self, k: u32) -> Operator {
        &self.numerator * &self.denominator.pow(k - self.pole)
    }

    pub fn add(&self, other: &LaurentElement) -> LaurentElement {
        let k = self.pole.max(other.pole);
        let mut out = LaurentElement { numerator: &self.with_pole(k) + &other.with_pole(k), pole: k, ..self.clone() };
        out.normalize();
        out
    }

    pub fn scale(&self, c: &Rat) -> LaurentElement {
        LaurentElement { numerator: self.numerator.scale(c), ..self.clone() }
    }

    fn times_poly(&self, g: &Operator) -> LaurentElement {
        let mut out = LaurentElement { numerator: &self.numerator * g, ..self.clone() };
        out.normalize();
        out
    }

    /// `∂/∂y (g / F^k) = (F ∂g − k g ∂F) / F^{k+1}`.
    fn derive(&self, idx: usize) -> LaurentElement {
        let k = self.pole;
        let f = &self.denominator;
        let num = &(f * &partial(&self.numerator, idx))
            - &(&self.numerator * &partial(f, idx)).scale(&int(k as i64));
        let mut out = LaurentElement { numerator: num, pole: k + 1, ..self.clone() };
        out.normalize();
        out
    }
}

/// The action of an operator without `h` on `O[1/F]` (or modulo `O`).
pub fn act(p: &Operator, el: &LaurentElement) -> Result<LaurentElement> {
    let s = p.signature();
    let ps = el.denominator.signature();
    if s.n != ps.n || s.p != ps.p {
        return Err(Error::SignatureMismatch("operator and element live over different variables".into()));
    }
    let p = p.dehomogenize();
    let mut acc = LaurentElement { numerator: Operator::zero(ps), pole: 0, ..el.clone() };
    for t in p.terms() {
        let mut cur = el.clone();
        let e = t.key.exps();
        for i in 0..s.pairs() {
            for _ in 0..e[s.pairs() + i] {
                cur = cur.derive(i);
            }
        }
        let mut mono = MonomialKey::one(ps);
        mono.0[..s.pairs()].copy_from_slice(&e[..s.pairs()]);
        cur = cur.times_poly(&Operator::monomial(ps, mono, t.coeff.clone()));
        acc = acc.add(&cur);
    }
    Ok(acc)
}

/// A filtered presentation `L_1 → L_0 → module → 0`: `rows[j]` is the image of `e_j`.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub sig: Arc<Signature>,
    pub rows: Vec<ModuleElement>,
    pub names: Vec<String>,
    pub target: ShiftedFreeModule,
    pub source: ShiftedFreeModule,
}

/// Index of `S_{i,j}` (`i < j`) in the lexicographic list of pairs.
fn pair_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    (0..i).map(|r| n - 1 - r).sum::<usize>() + (j - i - 1)
}

/// `O[1/f]` with generator `[1/f^{k'}]`: relations `θ + k'` and `S_{i,j}`.
pub fn presentation_prop1(q: &QuasiHomogeneousInput, k_prime: i64) -> Presentation {
    let d = Signature::weyl(q.n(), 0);
    let mut rows = vec![ModuleElement::scalar(&q.theta(&d) + &Operator::constant(&d, int(k_prime)))];
    let mut names = vec!["theta+k'".to_string()];
    for ((i, j), s) in q.s_operators() {
        rows.push(ModuleElement::scalar(s));
        names.push(format!("S{},{}", i + 1, j + 1));
    }
    let source = ShiftedFreeModule::with_f_shifts(vec![1; rows.len()]);
    Presentation { sig: d, rows, names, target: ShiftedFreeModule::free(1), source }
}

/// `N = O[1/f]/O` with generator `[1/f^{k'}]`: relations `f^{k'}`, `θ + k'`, `S_{i,j}`.
pub fn presentation_prop2(q: &QuasiHomogeneousInput, k_prime: i64) -> Presentation {
    let p1 = presentation_prop1(q, k_prime);
    let d = p1.sig.clone();
    let fk = transport(&q.f, &d).unwrap().pow(k_prime as u32);
    let mut rows = vec![ModuleElement::scalar(fk)];
    rows.extend(p1.rows);
    let mut names = vec!["f^k'".to_string()];
    names.extend(p1.names);
    let mut shifts = vec![0];
    shifts.extend(p1.source.f_shifts);
    Presentation { sig: d, rows, names, target: ShiftedFreeModule::free(1), source: ShiftedFreeModule::with_f_shifts(shifts) }
}

/// The hand-derived relations among the generators of the presentations above.
///
/// For a presentation from [`presentation_prop2`] (`with_power = true`) the vector has an
/// extra leading coordinate for `f^{k'}`.
pub fn known_relations(q: &QuasiHomogeneousInput, k_prime: i64, with_power: bool) -> Vec<(String, ModuleElement)> {
    let n = q.n();
    let d = Signature::weyl(n, 0);
    let off = usize::from(with_power);
    let theta_at = off;
    let s_at = |i: usize, j: usize| off + 1 + pair_index(n, i, j);
    let len = off + 1 + n * (n - 1) / 2;
    let zero = || vec![Operator::zero(&d); len];
    let fp: Vec<Operator> = (0..n).map(|i| transport(&q.derivative(i), &d).unwrap()).collect();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let mut a = zero();
                a[s_at(j, k)] = fp[i].clone();
                a[s_at(i, k)] = -fp[j].clone();
                a[s_at(i, j)] = fp[k].clone();
                out.push((format!("f'-cycle {},{},{}", i + 1, j + 1, k + 1), ModuleElement::new(&d, a)));
                let mut b = zero();
                b[s_at(j, k)] = Operator::dx(&d, i);
                b[s_at(i, k)] = -Operator::dx(&d, j);
                b[s_at(i, j)] = Operator::dx(&d, k);
                out.push((format!("d-cycle {},{},{}", i + 1, j + 1, k + 1), ModuleElement::new(&d, b)));
            }
        }
    }
    let theta = &q.theta(&d) + &Operator::constant(&d, int(k_prime));
    for ((i, j), s) in q.s_operators() {
        let mut c = zero();
        let shift = int(k_prime - 1) + &q.weights[i] + &q.weights[j];
        c[s_at(i, j)] = &q.theta(&d) + &Operator::constant(&d, shift);
        c[theta_at] = -s;
        out.push((format!("euler-S {},{}", i + 1, j + 1), ModuleElement::new(&d, c)));
    }
    let _ = theta;
    if with_power {
        let f = transport(&q.f, &d).unwrap();
        let fkm1 = f.pow((k_prime - 1) as u32);
        let fk = f.pow(k_prime as u32);
        for j in 0..n {
            let mut r = zero();
            r[0] = -(&Operator::dx(&d, j) * &Operator::one(&d));
            let _ = &fk;
            r[theta_at] = &fkm1 * &fp[j];
            for i in 0..n {
                if i == j {
                    continue;
                }
                // −f^{k'−1} w_i x_i S_{j,i}, with S_{j,i} = −S_{i,j} when i < j.
                let sign = if j < i { -Rat::one() } else { Rat::one() };
                let coeff = (&fkm1 * &Operator::x(&d, i)).scale(&(&q.weights[i] * sign));
                r[s_at(i, j)] = coeff;
            }
            out.push((format!("power {}", j + 1), ModuleElement::new(&d, r)));
        }
    }
    out
}

/// Certificates for one of the two presentations.
#[derive(Clone, Debug)]
pub struct PresentationCheck {
    /// Each relation kills the generator `[1/f^{k'}]`.
    pub annihilates: bool,
    pub involutive: InvolutiveReport,
    pub lifts: LiftCheck,
}

impl PresentationCheck {
    pub fn all_pass(&self) -> bool {
        self.annihilates && self.involutive.is_involutive() && self.lifts.all_pass()
    }
}

pub fn check_presentation(q: &QuasiHomogeneousInput, k_prime: i64, p: &Presentation, modulo_regular: bool) -> Result<PresentationCheck> {
    let gen = LaurentElement::new(&q.f, &Operator::one(q.poly_sig()), k_prime as u32, modulo_regular)?;
    let mut annihilates = true;
    for r in &p.rows {
        if !act(&r.coords[0], &gen)?.is_zero() {
            annihilates = false;
        }
    }
    let involutive = groebner::is_involutive(&p.rows, &p.target, &InvolutiveOptions::default())?;
    let rel: Vec<ModuleElement> = known_relations(q, k_prime, modulo_regular).into_iter().map(|(_, r)| r).collect();
    let lifts = groebner::verify_lifts(&p.rows, &p.target, &rel)?;
    Ok(PresentationCheck { annihilates, involutive, lifts })
}

/// `M = D_{x,t} f^s`, generated by the class of `1/(f−t)` modulo regular functions: relations `∂_t t + θ`, `f − t`,
/// `−f'_i ∂_t − ∂_i`, `−S_{i,j}` with bifiltration shifts `(1,0)`, `(0,0)`, `(1,1)`, `(1,0)`.
pub fn build_m_presentation(q: &QuasiHomogeneousInput) -> Presentation {
    let n = q.n();
    let d = Signature::weyl(n, 1);
    let t = Operator::t(&d, 0);
    let dt = Operator::dt(&d, 0);
    let mut rows = vec![
        ModuleElement::scalar(&(&dt * &t) + &q.theta(&d)),
        ModuleElement::scalar(&transport(&q.f, &d).unwrap() - &t),
    ];
    let mut names = vec!["X1".to_string(), "X2".to_string()];
    let mut f_shifts = vec![1, 0];
    let mut v_shifts = vec![0, 0];
    for i in 0..n {
        let fi = transport(&q.derivative(i), &d).unwrap();
        rows.push(ModuleElement::scalar(-(&(&fi * &dt) + &Operator::dx(&d, i))));
        names.push(format!("e{}", i + 1));
        f_shifts.push(1);
        v_shifts.push(1);
    }
    for i in 0..n {
        for j in i + 1..n {
            rows.push(ModuleElement::scalar(-q.s_operator(&d, i, j)));
            names.push(format!("e{}^e{}", i + 1, j + 1));
            f_shifts.push(1);
            v_shifts.push(0);
        }
    }
    Presentation {
        sig: d,
        rows,
        names,
        target: ShiftedFreeModule::free(1),
        source: ShiftedFreeModule { f_shifts, v_shifts },
    }
}

/// The presentation of `N` read off from the restriction of `M` along `t = 0`:
/// `φ_1(∂_t^k X_1) = (k+1+θ)∂_t^k`, `φ_1(∂_t^k e_i) = −(f'_i ∂_t^{k+1} + ∂_i ∂_t^k)`,
/// `φ_1(X_2) = f`, on the basis `∂_t^0..∂_t^{k1}` of `L_0`.
pub fn expected_prop4(q: &QuasiHomogeneousInput, k1: i64) -> Presentation {
    let n = q.n();
    let d = Signature::weyl(n, 0);
    let r0 = (k1 + 1) as usize;
    let theta = q.theta(&d);
    let mut rows = Vec::new();
    let mut names = Vec::new();
    let mut f_shifts = Vec::new();
    for k in 0..r0 {
        rows.push(ModuleElement::unit(&d, r0, k, &theta + &Operator::constant(&d, int(k as i64 + 1))));
        names.push(format!("dt^{k} X1"));
        f_shifts.push(k as i64 + 1);
    }
    for i in 0..n {
        let fi = transport(&q.derivative(i), &d).unwrap();
        for k in 0..r0.saturating_sub(1) {
            let mut c = vec![Operator::zero(&d); r0];
            c[k + 1] = -fi.clone();
            c[k] = -Operator::dx(&d, i);
            rows.push(ModuleElement::new(&d, c));
            names.push(format!("dt^{k} e{}", i + 1));
            f_shifts.push(k as i64 + 1);
        }
    }
    rows.push(ModuleElement::unit(&d, r0, 0, transport(&q.f, &d).unwrap()));
    names.push("X2".into());
    f_shifts.push(0);
    Presentation {
        sig: d,
        rows,
        names,
        target: ShiftedFreeModule::with_f_shifts((0..r0 as i64).collect()),
        source: ShiftedFreeModule::with_f_shifts(f_shifts),
    }
}

/// Result of the restriction pipeline.
#[derive(Clone, Debug)]
pub struct Prop4Result {
    pub b: QuasiHomogeneousB,
    /// The minimalized restriction, dehomogenized, truncated to `L_1 → L_0`.
    pub presentation: FreeComplex,
    pub expected: Presentation,
    /// Mutual membership of the computed and expected relation modules.
    pub same_relations: bool,
    pub ranks_match: bool,
    pub shifts_match: bool,
    /// Ranks of the restriction complex before minimalization.
    pub restricted_ranks: Vec<usize>,
}

impl Prop4Result {
    pub fn matches(&self) -> bool {
        self.same_relations && self.ranks_match && self.shifts_match
    }
}

/// Resolves `M` bifiltered, restricts at `k1`, minimalizes and compares with
/// [`expected_prop4`].
pub fn presentation_prop4(q: &QuasiHomogeneousInput) -> Result<Prop4Result> {
    let b = bernstein_sato_qh(q).map_err(|e| e.at("b-function"))?;
    presentation_prop4_with(q, &b)
}

/// [`presentation_prop4`] with a b-function supplied by the caller.
pub fn presentation_prop4_with(q: &QuasiHomogeneousInput, b: &QuasiHomogeneousB) -> Result<Prop4Result> {
    let b = b.clone();
    let k1 = b.k1();
    let m = build_m_presentation(q);
    let (restricted, min) = restriction::restrict_presentation(&m.rows, &m.target, Some(k1), 2)?;
    let restricted_ranks = restricted.ranks();
    let presentation = min.complex.truncate(1).dehomogenize();

    let expected = expected_prop4(q, k1);
    let ranks_match = presentation.ranks() == vec![expected.target.rank(), expected.rows.len()];
    let mut got: Vec<i64> = presentation.modules.get(1).map(|m| m.f_shifts.clone()).unwrap_or_default();
    let mut want = expected.source.f_shifts.clone();
    got.sort();
    want.sort();
    let mut got0 = presentation.modules[0].f_shifts.clone();
    got0.sort();
    let shifts_match = got == want && got0 == expected.target.f_shifts;
    let same_relations = presentation.rank(0) == expected.target.rank()
        && groebner::same_submodule(
            presentation.maps.first().map(|v| v.as_slice()).unwrap_or(&[]),
            &expected.rows,
            &ShiftedFreeModule::free(expected.target.rank()),
            &expected.sig,
        )
        .map_err(|e| e.at("comparison"))?;
    Ok(Prop4Result { b, presentation, expected, same_relations, ranks_match, shifts_match, restricted_ranks })
}

/// `(true, true)` from the strictness test on `M = D_{x,t} f^s`.
pub fn m_strictness(q: &QuasiHomogeneousInput) -> Result<resolution::StrictnessReport> {
    let m = build_m_presentation(q);
    resolution::strictness_prop10(&m.rows, &m.target)
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub b_f: String,
    pub k_prime: i64,
    pub k1: i64,
    pub milnor_number: usize,
}
