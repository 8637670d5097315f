//! b-functions, the truncation index, Koszul complexes on the `t`-variables and the
//! restriction complex `V_{k1}(L•) / t V_{k1+1}(L•)` with its induced F-filtration.
//!
//! Only one `t`-variable is supported by the quotient basis. For `p = 1` the quotient
//! `V_{k1}(D e_i) / t V_{k1+1}(D e_i)` is free over `D_x` on `∂_t^k e_i`,
//! `0 ≤ k ≤ k1 − m_i`. A normal-ordered term `t^u Q` with `u ≥ 1` in `V_{k1}` equals
//! `t · (t^{u-1} Q)` with the second factor in `V_{k1+1}`, so deleting such terms is exact.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::filtration::{self, ModuleElement, OrderKind, OrderSpec, PositionStrategy, ShiftedFreeModule};
use crate::groebner::{self, GroebnerOptions};
use crate::resolution::{self, FreeComplex, Minimalization};
use crate::weyl::{format_rat, int, AlgebraKind, MonomialKey, Operator, Rat, Signature};

/// Dense univariate polynomial, lowest coefficient first, no trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct UniPoly {
    coeffs: Vec<Rat>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly::default()
    }

    pub fn one() -> Self {
        UniPoly::new(vec![Rat::one()])
    }

    /// `s - r`.
    pub fn linear(r: &Rat) -> Self {
        UniPoly::new(vec![-r.clone(), Rat::one()])
    }

    pub fn from_roots(roots: &[(Rat, usize)]) -> Self {
        let mut p = UniPoly::one();
        for (r, m) in roots {
            for _ in 0..*m {
                p = p.mul(&UniPoly::linear(r));
            }
        }
        p
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.coeffs.iter().rev().fold(Rat::zero(), |acc, c| acc * x + c)
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new(
            (0..n)
                .map(|i| {
                    self.coeffs.get(i).cloned().unwrap_or_default() + other.coeffs.get(i).cloned().unwrap_or_default()
                })
                .collect(),
        )
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }

    pub fn scale(&self, c: &Rat) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// `p(a s + b)`.
    pub fn compose_affine(&self, a: &Rat, b: &Rat) -> UniPoly {
        let lin = UniPoly::new(vec![b.clone(), a.clone()]);
        self.coeffs.iter().rev().fold(UniPoly::zero(), |acc, c| acc.mul(&lin).add(&UniPoly::new(vec![c.clone()])))
    }

    /// Divides by `s - r`, assuming `r` is a root.
    fn deflate(&self, r: &Rat) -> UniPoly {
        let n = self.coeffs.len();
        let mut q = vec![Rat::zero(); n - 1];
        let mut carry = Rat::zero();
        for i in (1..n).rev() {
            carry = &self.coeffs[i] + carry * r;
            q[i - 1] = carry.clone();
        }
        UniPoly::new(q)
    }

    /// Rational roots with multiplicity, ascending.
    pub fn rational_roots(&self) -> Result<Vec<(Rat, usize)>> {
        if self.is_zero() {
            return Err(Error::BFunction("the zero polynomial has no root set".into()));
        }
        let mut p = self.clone();
        let mut roots: Vec<(Rat, usize)> = Vec::new();
        while p.coeffs.len() > 1 && p.coeffs[0].is_zero() {
            p = UniPoly::new(p.coeffs[1..].to_vec());
            bump(&mut roots, Rat::zero());
        }
        loop {
            if p.coeffs.len() <= 1 {
                break;
            }
            let ints = p.integer_coeffs();
            let lead = ints.last().unwrap().abs();
            let tail = ints[0].abs();
            let mut found = None;
            'search: for num in divisors(&tail)? {
                for den in divisors(&lead)? {
                    for sign in [1, -1] {
                        let r = Rat::new(BigInt::from(sign) * &num, den.clone());
                        if p.eval(&r).is_zero() {
                            found = Some(r);
                            break 'search;
                        }
                    }
                }
            }
            match found {
                Some(r) => {
                    p = p.deflate(&r);
                    bump(&mut roots, r);
                }
                None => break,
            }
        }
        roots.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(roots)
    }

    fn integer_coeffs(&self) -> Vec<BigInt> {
        let den = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        self.coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect()
    }
}

fn bump(roots: &mut Vec<(Rat, usize)>, r: Rat) {
    match roots.iter_mut().find(|(x, _)| *x == r) {
        Some((_, m)) => *m += 1,
        None => roots.push((r, 1)),
    }
}

fn divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    let Some(n) = n.to_u64() else {
        return Err(Error::BFunction("coefficients too large for rational root search".into()));
    };
    if n > 1u64 << 40 {
        return Err(Error::BFunction("coefficients too large for rational root search".into()));
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d * d != n {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    out.sort();
    Ok(out)
}

impl fmt::Display for UniPoly {
    /// Factored over its rational roots when it splits, expanded otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if let Ok(roots) = self.rational_roots() {
            let deg: usize = roots.iter().map(|r| r.1).sum();
            if deg == self.degree().unwrap() && deg > 0 {
                let lead = self.coeffs.last().unwrap();
                if !lead.is_one() {
                    write!(f, "{}*", format_rat(lead))?;
                }
                for (r, m) in roots.iter().rev() {
                    let c = -r.clone();
                    let base = if c.is_zero() {
                        "s".to_string()
                    } else if c.is_negative() {
                        format!("(s-{})", format_rat(&-c))
                    } else {
                        format!("(s+{})", format_rat(&c))
                    };
                    let base = if base == "s" && *m > 1 { "(s)".to_string() } else { base };
                    if *m > 1 {
                        write!(f, "{base}^{m}")?;
                    } else {
                        write!(f, "{base}")?;
                    }
                }
                return Ok(());
            }
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match (i, a.is_one()) {
                (0, _) => write!(f, "{}", format_rat(&a))?,
                (_, true) => {}
                _ => write!(f, "{}*", format_rat(&a))?,
            }
            match i {
                0 => {}
                1 => write!(f, "s")?,
                _ => write!(f, "s^{i}")?,
            }
        }
        Ok(())
    }
}

/// A nonzero `b` with `b(t∂_t)` killing `gr^V_0(M)`, its rational roots and the truncation
/// index `k1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BFunction {
    pub b: UniPoly,
    pub roots: Vec<(Rat, usize)>,
    /// `None` when `b` has no integral root: every `V_k/tV_{k+1}` with `k ≥ 0` is then
    /// killed and the truncated complex is zero.
    pub k1: Option<i64>,
}

impl BFunction {
    pub fn new(b: UniPoly) -> Result<Self> {
        let roots = b.rational_roots()?;
        let k1 = truncation_index(&b)?;
        Ok(BFunction { b, roots, k1 })
    }

    /// Raises `k1`; lowering it would drop a needed piece of the complex.
    pub fn with_k1(mut self, k1: i64) -> Result<Self> {
        if self.k1.is_some_and(|k| k > k1) {
            return Err(Error::BFunction(format!("k1 can only be raised, {k1} is below the largest integral root")));
        }
        self.k1 = Some(k1);
        Ok(self)
    }
}

/// The largest integral root of `b`.
pub fn truncation_index(b: &UniPoly) -> Result<Option<i64>> {
    if b.is_zero() {
        return Err(Error::BFunction("b must be nonzero".into()));
    }
    Ok(b.rational_roots()?.iter().filter(|(r, _)| r.is_integer()).filter_map(|(r, _)| r.to_integer().to_i64()).max())
}

/// Checks `b(t∂_t) · g_i ∈ V_{-1}(L) + N` for generators `g_i` of `gr^V_0(L/N)`.
///
/// `g_i = t^{m_i} e_i` when `m_i ≥ 0` and `∂_t^{-m_i} e_i` otherwise. Membership is tested on
/// V-initial forms against the initial forms of a V-basis of `N`, using an F-basis of
/// those (`gr^V D ≅ D`).
pub fn verify_bfunction(rows: &[ModuleElement], module: &ShiftedFreeModule, b: &UniPoly) -> Result<bool> {
    let Some(first) = rows.first() else {
        return Err(Error::InvalidArgument("need at least one relation".into()));
    };
    let sig = first.signature().clone();
    if sig.p != 1 {
        return Err(Error::InvalidArgument("b-function checks need exactly one t-variable".into()));
    }
    let vb = groebner::buchberger_over(&sig, rows, module, OrderSpec::v(), &GroebnerOptions::default())
        .map_err(|e| e.at("V-basis"))?;
    let initial = groebner::v_initial_generators(&vb);
    let ib = groebner::buchberger_over(&sig, &initial, module, OrderSpec::f(), &GroebnerOptions::default())?;
    let euler = &Operator::t(&sig, 0) * &Operator::dt(&sig, 0);
    let mut b_op = Operator::zero(&sig);
    for c in b.coeffs().iter().rev() {
        b_op = &(&b_op * &euler) + &Operator::constant(&sig, c.clone());
    }
    for (i, &m) in module.v_shifts.iter().enumerate() {
        let g = if m >= 0 { Operator::t(&sig, 0).pow(m as u32) } else { Operator::dt(&sig, 0).pow((-m) as u32) };
        let el = ModuleElement::unit(&sig, module.rank(), i, &b_op * &g);
        if filtration::ord_v(&el, module).is_none_or(|o| o < 0) {
            continue;
        }
        let init = filtration::v_initial(&el, module);
        if filtration::ord_v(&init, module) != Some(0) {
            continue;
        }
        if !groebner::reduces_to_zero(&init, &ib)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The Koszul complex of `D_{x,t}` on `t_1..t_p`.
///
/// `L_j` has basis `e_S` for the `j`-subsets `S` in lexicographic order and
/// `d(e_S) = Σ_k (-1)^k t_{s_k} e_{S ∖ s_k}`. V-shifts are `-|S|`, F-shifts zero.
pub fn koszul_complex(sig: &Arc<Signature>) -> Result<FreeComplex> {
    let p = sig.p;
    if p == 0 {
        return Err(Error::InvalidArgument("the Koszul complex needs p ≥ 1".into()));
    }
    let subsets: Vec<Vec<Vec<usize>>> = (0..=p).map(|j| combinations(p, j)).collect();
    let modules = subsets
        .iter()
        .enumerate()
        .map(|(j, s)| ShiftedFreeModule { f_shifts: vec![0; s.len()], v_shifts: vec![-(j as i64); s.len()] })
        .collect();
    let mut maps = Vec::new();
    for j in 1..=p {
        let target = &subsets[j - 1];
        let rows = subsets[j]
            .iter()
            .map(|s| {
                let mut coords = vec![Operator::zero(sig); target.len()];
                for (k, &var) in s.iter().enumerate() {
                    let mut rest = s.clone();
                    rest.remove(k);
                    let pos = target.iter().position(|x| *x == rest).unwrap();
                    let t = Operator::t(sig, var);
                    coords[pos] = if k % 2 == 0 { t } else { -t };
                }
                ModuleElement::new(sig, coords)
            })
            .collect();
        maps.push(rows);
    }
    FreeComplex::new(sig, modules, maps)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Basis label `(i, k)` standing for `∂_t^k e_i`.
pub type Label = (usize, u32);

/// Labels of `V_{k1}(L) / t V_{k1+1}(L)` for V-shifts `m`, in source order then by `k`.
pub fn labels(v_shifts: &[i64], k1: Option<i64>) -> Vec<Label> {
    let Some(k1) = k1 else { return Vec::new() };
    let mut out = Vec::new();
    for (i, &m) in v_shifts.iter().enumerate() {
        for k in 0..=(k1 - m).max(-1) {
            out.push((i, k as u32));
        }
    }
    out
}

/// Class of `el ∈ V_{k1}(L)` in the quotient, on the basis `labels(v_shifts, k1)`.
///
/// The result lives over the algebra with the `t`-variable removed.
pub fn quotient_normal_form(el: &ModuleElement, k1: i64, v_shifts: &[i64]) -> Result<ModuleElement> {
    let sig = el.signature().clone();
    if sig.p != 1 {
        return Err(Error::InvalidArgument("the quotient basis is implemented for one t-variable".into()));
    }
    if el.rank() != v_shifts.len() {
        return Err(Error::DimensionMismatch("element and shifts differ in rank".into()));
    }
    let module = ShiftedFreeModule { f_shifts: vec![0; v_shifts.len()], v_shifts: v_shifts.to_vec() };
    if let Some(o) = filtration::ord_v(el, &module) {
        if o > k1 {
            return Err(Error::VOrderExceedsTruncation { order: o, k1 });
        }
    }
    let rsig = sig.restricted();
    let labels = labels(v_shifts, Some(k1));
    let mut coords = vec![Operator::zero(&rsig); labels.len()];
    let n = sig.n;
    for (i, c) in el.coords.iter().enumerate() {
        let mut buckets: Vec<Vec<(MonomialKey, Rat)>> = Vec::new();
        for t in c.terms() {
            let e = t.key.exps();
            if e[sig.t_index(0)] > 0 {
                continue;
            }
            let k = e[sig.dt_index(0)] as usize;
            let mut r = Vec::with_capacity(rsig.width());
            r.extend_from_slice(&e[..n]);
            r.extend_from_slice(&e[sig.dx_index(0)..sig.dx_index(0) + n]);
            r.push(e[sig.h_index()]);
            if buckets.len() <= k {
                buckets.resize(k + 1, Vec::new());
            }
            buckets[k].push((MonomialKey::from_exponents(&r), t.coeff.clone()));
        }
        for (k, terms) in buckets.into_iter().enumerate() {
            if terms.is_empty() {
                continue;
            }
            let pos = labels.iter().position(|l| *l == (i, k as u32)).ok_or_else(|| {
                Error::Invariant(format!("term ∂_t^{k} e_{i} outside the quotient basis"))
            })?;
            coords[pos] = &coords[pos] + &Operator::from_terms(&rsig, terms);
        }
    }
    Ok(ModuleElement::new(&rsig, coords))
}

/// The restriction of a V-adapted complex, with its label bookkeeping.
#[derive(Clone, Debug)]
pub struct RestrictionComplex {
    pub complex: FreeComplex,
    pub labels: Vec<Vec<Label>>,
    pub k1: Option<i64>,
}

impl RestrictionComplex {
    pub fn ranks(&self) -> Vec<usize> {
        self.complex.ranks()
    }
}

/// `V_{k1}(L•) / t V_{k1+1}(L•)` for a complex over `D_{x,t}` or `D^(h)_{x,t}` whose
/// differentials respect the V-shifts. Label `(i, k)` gets F-shift `n_i + k`.
pub fn restriction_complex(c: &FreeComplex, k1: Option<i64>) -> Result<RestrictionComplex> {
    let sig = c.signature().clone();
    if sig.p != 1 {
        return Err(Error::InvalidArgument("restriction is implemented for one t-variable".into()));
    }
    for i in 1..=c.length() {
        for (j, row) in c.maps[i - 1].iter().enumerate() {
            if let Some(o) = filtration::ord_v(row, &c.modules[i - 1]) {
                if o > c.modules[i].v_shifts[j] {
                    return Err(Error::Invariant(format!("d_{i} raises the V-order of basis vector {j}")));
                }
            }
        }
    }
    let rsig = sig.restricted();
    let all: Vec<Vec<Label>> = c.modules.iter().map(|m| labels(&m.v_shifts, k1)).collect();
    let modules: Vec<ShiftedFreeModule> = c
        .modules
        .iter()
        .zip(&all)
        .map(|(m, ls)| ShiftedFreeModule {
            f_shifts: ls.iter().map(|&(i, k)| m.f_shifts[i] + k as i64).collect(),
            v_shifts: vec![0; ls.len()],
        })
        .collect();
    let mut maps = Vec::new();
    for i in 1..=c.length() {
        let mut rows = Vec::with_capacity(all[i].len());
        for &(j, k) in &all[i] {
            let lifted = c.maps[i - 1][j].left_mul(&Operator::dt(&sig, 0).pow(k));
            let k1 = k1.expect("labels exist only with an integral root");
            rows.push(quotient_normal_form(&lifted, k1, &c.modules[i - 1].v_shifts).map_err(|e| e.at("quotient"))?);
        }
        maps.push(rows);
    }
    let complex = FreeComplex::new(&rsig, modules, maps)?;
    complex.check_composition()?;
    Ok(RestrictionComplex { complex, labels: all, k1 })
}

/// Restricts `L_0 / (rows)` (over `D_{x,t}`, one `t`) along `t = 0`: the relations are
/// resolved bifiltered over `D^(h)` to the given length, restricted at `k1` and
/// minimalized. Both complexes stay homogenized.
pub fn restrict_presentation(
    rows: &[ModuleElement],
    module: &ShiftedFreeModule,
    k1: Option<i64>,
    length: usize,
) -> Result<(RestrictionComplex, Minimalization)> {
    let Some(first) = rows.first() else {
        return Err(Error::InvalidArgument("need at least one relation".into()));
    };
    let weyl = first.signature().with_kind(AlgebraKind::Weyl);
    if weyl.p != 1 {
        return Err(Error::InvalidArgument("restriction is implemented for one t-variable".into()));
    }
    let rows: Vec<ModuleElement> = rows.iter().map(|r| r.with_kind(AlgebraKind::Weyl)).collect();
    // R(N) is generated by the homogenized F-basis of N.
    let top = OrderSpec::new(OrderKind::F, PositionStrategy::Top);
    let fb = groebner::buchberger_over(&weyl, &rows, module, top, &GroebnerOptions::default()).map_err(|e| e.at("F-basis"))?;
    let rees: Vec<ModuleElement> =
        fb.generators().iter().map(|g| filtration::homogenize(g, module)).collect::<Result<_>>()?;
    let hsig = weyl.with_kind(AlgebraKind::Homogenized);
    let res = resolution::free_resolution(&hsig, &rees, module, OrderSpec::v(), length).map_err(|e| e.at("resolution"))?;
    let restricted = restriction_complex(&res, k1).map_err(|e| e.at("restriction"))?;
    let min = resolution::minimalize(&restricted.complex).map_err(|e| e.at("minimalize"))?;
    Ok((restricted, min))
}

/// `b_f(-s-1)` style substitution used to pass between `b_f` and `b_M`.
pub fn reflect(b: &UniPoly) -> UniPoly {
    b.compose_affine(&int(-1), &int(-1))
}
