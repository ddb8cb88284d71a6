//! Genus formulas, reduced classes and Cremona reduction.
//!
//! Cremona reduction drives `aH - Σ b_i E_i` to a terminal pattern with the
//! reflections `R(E_i - E_j)` (transpositions) and `Γ_ijk = R(H - E_i - E_j - E_k)`,
//! all of which fix `K_0`. Every reflection used is recorded, so the result
//! carries a certificate word `w` with `w(ξ) = ±representative`.

use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::error::{LatticeError, Result};
use crate::lattice::{form_pairing, FormClass, HomClass, LatticeModel};
use crate::word::ReflectionWord;
use crate::{Int, Rational};

/// `η_K(e) = (K(e) + e·e)/2 + 1`.
pub fn eta_k(e: &HomClass, k: &FormClass) -> Result<Rational> {
    let ke = form_pairing(k, e)?;
    Ok((ke + Rational::from(e.square())) / Rational::from_integer(Int::from(2)) + Rational::one())
}

/// Expected dimension `d(e) = (−K(e) + e·e)/2`.
pub fn gt_dimension(e: &HomClass, k: &FormClass) -> Result<Rational> {
    let ke = form_pairing(k, e)?;
    Ok((Rational::from(e.square()) - ke) / Rational::from_integer(Int::from(2)))
}

fn require_rational(x: &HomClass, what: &'static str) -> Result<usize> {
    match x.model() {
        LatticeModel::Rational { n } => Ok(n),
        LatticeModel::Ruled { .. } => Err(LatticeError::RationalOnly(what)),
    }
}

/// `b_i = -(coefficient of E_i)`, sorted descending.
fn sorted_b(coeffs: &[Int]) -> Vec<Int> {
    let mut b: Vec<Int> = coeffs[1..].iter().map(|c| -c).collect();
    b.sort_unstable_by(|x, y| y.cmp(x));
    b
}

/// `a − b_1 − b_2 − b_3` over the three largest `b`, absent entries counting as 0.
fn defect(a: &Int, sorted: &[Int]) -> Int {
    sorted.iter().take(3).fold(a.clone(), |acc, b| acc - b)
}

/// `aH − Σ b_i E_i` is reduced when `a ≥ 0`, every `b_i ≥ 0` and
/// `a ≥ b_1 + b_2 + b_3` for the three largest `b_i`.
pub fn is_reduced(xi: &HomClass) -> Result<bool> {
    require_rational(xi, "reduced form")?;
    Ok(reduced_coeffs(xi.coeffs()))
}

fn reduced_coeffs(c: &[Int]) -> bool {
    let b = sorted_b(c);
    !c[0].is_negative() && b.iter().all(|v| !v.is_negative()) && !defect(&c[0], &b).is_negative()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NormalKind {
    Zero,
    /// `w(ξ) = −E_i`.
    PlusMinusBasisE,
    /// `±(E_i − E_j)`.
    Binary,
    /// `±(H − E_i − E_j − E_k)`.
    Ternary,
    /// `w(ξ) = E_i`.
    ExceptionalEi,
    /// `±(H − E_i − E_j)`; only terminal when `n = 2`.
    ExceptionalHEiEj,
    Reduced,
    /// Stuck with `a ≥ 0`, non-negative defect and some `b_i < 0`.
    NegativeCoefficient,
    Irreducible,
}

impl NormalKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Zero => "zero",
            Self::PlusMinusBasisE => "minus-basis-e",
            Self::Binary => "binary",
            Self::Ternary => "ternary",
            Self::ExceptionalEi => "exceptional-e",
            Self::ExceptionalHEiEj => "exceptional-h-e-e",
            Self::Reduced => "reduced",
            Self::NegativeCoefficient => "negative-coefficient",
            Self::Irreducible => "irreducible",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalForm {
    pub kind: NormalKind,
    pub representative: HomClass,
    pub word: ReflectionWord,
    /// When set, `word(ξ) = −representative`.
    pub sign_flipped: bool,
    pub diagnostic: Option<String>,
}

impl NormalForm {
    /// `word(ξ)` should equal this.
    pub fn signed_representative(&self) -> HomClass {
        if self.sign_flipped {
            -&self.representative
        } else {
            self.representative.clone()
        }
    }

    /// Recompute `word(ξ)` and compare with `±representative`.
    pub fn certifies(&self, xi: &HomClass) -> bool {
        self.word
            .apply(xi)
            .is_ok_and(|img| img == self.signed_representative())
    }
}

fn single(c: &[Int], value: i64) -> Option<usize> {
    let v = Int::from(value);
    let mut hits = c.iter().enumerate().filter(|(_, x)| !x.is_zero());
    match (hits.next(), hits.next()) {
        (Some((i, x)), None) if *x == v => Some(i),
        _ => None,
    }
}

/// Recognise terminal patterns. Returns the kind, the positive representative
/// and whether the current vector is its negative.
fn terminal(model: LatticeModel, c: &[Int]) -> Option<(NormalKind, Vec<Int>, bool)> {
    let a = &c[0];
    let es = &c[1..];
    let nonzero: Vec<&Int> = es.iter().filter(|x| !x.is_zero()).collect();
    if a.is_zero() {
        if nonzero.is_empty() {
            return Some((NormalKind::Zero, c.to_vec(), false));
        }
        if single(es, 1).is_some() {
            return Some((NormalKind::ExceptionalEi, c.to_vec(), false));
        }
        if single(es, -1).is_some() {
            let rep = c.iter().map(|x| -x).collect();
            return Some((NormalKind::PlusMinusBasisE, rep, true));
        }
        let one = Int::one();
        if nonzero.len() == 2 && nonzero.iter().any(|x| **x == one) && nonzero.iter().any(|x| **x == -&one) {
            return Some((NormalKind::Binary, c.to_vec(), false));
        }
        return None;
    }
    if !a.abs().is_one() {
        return None;
    }
    let neg = a.is_negative();
    let target = -a;
    if !nonzero.iter().all(|x| **x == target) {
        return None;
    }
    let kind = match nonzero.len() {
        3 => NormalKind::Ternary,
        2 if model.n() < 3 => NormalKind::ExceptionalHEiEj,
        _ => return None,
    };
    let rep = if neg { c.iter().map(|x| -x).collect() } else { c.to_vec() };
    Some((kind, rep, neg))
}

fn e_diff(model: LatticeModel, i: usize, j: usize) -> HomClass {
    let mut v = vec![Int::zero(); model.rank()];
    v[model.e_index(i)] = Int::one();
    v[model.e_index(j)] = -Int::one();
    HomClass::from_vec_unchecked(model, v)
}

/// `H − E_i − E_j − E_k` in the rational model.
pub fn ternary(model: LatticeModel, i: usize, j: usize, k: usize) -> HomClass {
    let mut v = vec![Int::zero(); model.rank()];
    v[0] = Int::one();
    for idx in [i, j, k] {
        v[model.e_index(idx)] = -Int::one();
    }
    HomClass::from_vec_unchecked(model, v)
}

/// `E_i − E_j`.
pub fn binary(model: LatticeModel, i: usize, j: usize) -> HomClass {
    e_diff(model, i, j)
}

/// Cremona reduction with a certificate word.
pub fn cremona_reduce(xi: &HomClass) -> Result<NormalForm> {
    let n = require_rational(xi, "Cremona reduction")?;
    let model = xi.model();
    let mut cur = xi.coeffs().to_vec();
    let mut word = ReflectionWord::new(model);
    let mut flipped = false;
    let cap = Int::from(n + 4) + cur[0].abs();
    let mut gamma_steps = Int::zero();

    let finish = |kind, rep: Vec<Int>, word, sign_flipped, diagnostic| {
        let nf = NormalForm {
            kind,
            representative: HomClass::from_vec_unchecked(model, rep),
            word,
            sign_flipped,
            diagnostic,
        };
        debug_assert!(nf.certifies(xi));
        Ok(nf)
    };

    loop {
        if let Some((kind, rep, neg)) = terminal(model, &cur) {
            return finish(kind, rep, word, flipped ^ neg, None);
        }
        if cur[0].is_negative() {
            cur.iter_mut().for_each(|x| *x = -&*x);
            flipped = !flipped;
        }
        // selection sort of the E-coefficients ascending (b descending)
        for pos in 1..=n {
            let (best, _) = cur[pos..]
                .iter()
                .enumerate()
                .min_by(|x, y| x.1.cmp(y.1))
                .map(|(k, v)| (k + pos, v))
                .expect("non-empty tail");
            if cur[best] != cur[pos] {
                cur.swap(pos, best);
                word.push(e_diff(model, pos, best))?;
            }
        }
        if reduced_coeffs(&cur) {
            return finish(NormalKind::Reduced, cur, word, flipped, None);
        }
        let d = defect(&cur[0], &sorted_b(&cur));
        if !d.is_negative() {
            return finish(NormalKind::NegativeCoefficient, cur, word, flipped, None);
        }
        if n < 3 {
            let msg = String::from("no ternary generator when n < 3");
            return finish(NormalKind::Irreducible, cur, word, flipped, Some(msg));
        }
        if gamma_steps >= cap {
            let msg = alloc::format!("iteration cap {cap} reached");
            return finish(NormalKind::Irreducible, cur, word, flipped, Some(msg));
        }
        // Γ_123(x) = x + (γ·x) γ with γ·x = d
        cur[0] += &d;
        for v in &mut cur[1..=3] {
            *v -= &d;
        }
        word.push(ternary(model, 1, 2, 3))?;
        gamma_steps += 1;
    }
}

/// Cremona reduction followed, for a ternary result at `n ≥ 4`, by one more
/// `Γ_ijl` step that lands on a binary class.
pub fn reduce_to_binary(xi: &HomClass) -> Result<NormalForm> {
    let mut nf = cremona_reduce(xi)?;
    let n = xi.model().n();
    if nf.kind != NormalKind::Ternary || n < 4 {
        return Ok(nf);
    }
    let model = xi.model();
    let idx: Vec<usize> = (1..=n)
        .filter(|&i| !nf.representative.e_coeff(i).is_zero())
        .collect();
    let spare = (1..=n).find(|i| !idx.contains(i)).expect("n >= 4");
    let gamma = ternary(model, idx[0], idx[1], spare);
    nf.representative = binary(model, spare, idx[2]);
    nf.word.push(gamma)?;
    nf.kind = NormalKind::Binary;
    debug_assert!(nf.certifies(xi));
    Ok(nf)
}

/// Sign pattern of a canonical class of the form `K_δ`: for rational models
/// `−3H + Σ ±E_i` (entry `true` where the sign is negative); ruled models
/// accept only `K_0`.
pub fn canonical_flips(k: &FormClass) -> Result<Vec<bool>> {
    let model = k.model();
    let c = k.coeffs();
    match model {
        LatticeModel::Rational { .. } => {
            let one = Rational::one();
            if c[0] != Rational::from_integer(Int::from(-3)) {
                return Err(LatticeError::NotStandardCanonical);
            }
            c[1..]
                .iter()
                .map(|v| {
                    if *v == one {
                        Ok(false)
                    } else if *v == -&one {
                        Ok(true)
                    } else {
                        Err(LatticeError::NotStandardCanonical)
                    }
                })
                .collect()
        }
        LatticeModel::Ruled { .. } => {
            if *k == model.k0_form() {
                Ok(vec![false; model.n()])
            } else {
                Err(LatticeError::NotStandardCanonical)
            }
        }
    }
}

/// Apply the isometry `E_i ↦ −E_i` for every flagged `i`; it carries `K_δ` to `K_0`.
pub(crate) fn conjugate_to_k0(xi: &HomClass, flips: &[bool]) -> HomClass {
    let model = xi.model();
    let mut c = xi.coeffs().to_vec();
    for (i, &f) in flips.iter().enumerate() {
        if f {
            let idx = model.e_index(i + 1);
            c[idx] = -&c[idx];
        }
    }
    HomClass::from_vec_unchecked(model, c)
}

/// Ruled `𝓔_{K_0} = {E_i, F − E_i}`.
pub fn ruled_exceptional_classes(model: LatticeModel) -> Vec<HomClass> {
    let mut out = Vec::new();
    for i in 1..=model.n() {
        out.push(HomClass::e(model, i));
        let mut v = vec![Int::zero(); model.rank()];
        v[1] = Int::one();
        v[model.e_index(i)] = -Int::one();
        out.push(HomClass::from_vec_unchecked(model, v));
    }
    out
}

/// Ruled `𝓛_{K_0} = {±(F − E_i − E_j), ±(E_i − E_j)}`.
pub fn ruled_knull_classes(model: LatticeModel) -> Vec<HomClass> {
    let mut out = Vec::new();
    let n = model.n();
    for i in 1..=n {
        for j in (i + 1)..=n {
            let d = e_diff(model, i, j);
            let mut v = vec![Int::zero(); model.rank()];
            v[1] = Int::one();
            v[model.e_index(i)] = -Int::one();
            v[model.e_index(j)] = -Int::one();
            let f = HomClass::from_vec_unchecked(model, v);
            out.push(-&d);
            out.push(d);
            out.push(-&f);
            out.push(f);
        }
    }
    out
}

/// Membership in `𝓔_K`.
pub fn is_exceptional(xi: &HomClass, k: &FormClass) -> Result<bool> {
    xi.check_model(k.model())?;
    let flips = canonical_flips(k)?;
    if !xi.model().is_rational() {
        return Ok(ruled_exceptional_classes(xi.model()).contains(xi));
    }
    let minus_one = Int::from(-1);
    if xi.square() != minus_one || form_pairing(k, xi)? != Rational::from(minus_one) {
        return Ok(false);
    }
    let nf = cremona_reduce(&conjugate_to_k0(xi, &flips))?;
    Ok(matches!(
        nf.kind,
        NormalKind::ExceptionalEi | NormalKind::ExceptionalHEiEj
    ) && !nf.sign_flipped)
}

/// Membership in `𝓛_K`: square −2, `K(ξ) = 0` and spherical.
pub fn is_k_null_spherical(xi: &HomClass, k: &FormClass) -> Result<bool> {
    xi.check_model(k.model())?;
    let flips = canonical_flips(k)?;
    if !xi.model().is_rational() {
        return Ok(ruled_knull_classes(xi.model()).contains(xi));
    }
    if xi.square() != Int::from(-2) || !form_pairing(k, xi)?.is_zero() {
        return Ok(false);
    }
    let nf = cremona_reduce(&conjugate_to_k0(xi, &flips))?;
    Ok(matches!(nf.kind, NormalKind::Binary | NormalKind::Ternary))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtaBound {
    pub value: Rational,
    /// Equal to the symplectic genus (the class is reduced).
    pub exact: bool,
}

/// `max_δ η_{K_δ}(e)` over the `2^n` sign variants `K_δ = −3H + Σ ±E_i`.
///
/// The maximum is attained by choosing each sign against the sign of the
/// corresponding coefficient, so the sweep collapses to a closed form.
pub fn eta_lower_bound(e: &HomClass) -> Result<EtaBound> {
    require_rational(e, "symplectic genus bound")?;
    let a = &e.coeffs()[0];
    if !a.is_positive() {
        return Err(LatticeError::EtaFamilyNotCertified);
    }
    let abs_sum: Int = e.e_coeffs().iter().map(|c| c.abs()).sum();
    let max_k = abs_sum - Int::from(3) * a;
    let value = Rational::new(max_k + e.square(), Int::from(2)) + Rational::one();
    Ok(EtaBound {
        value,
        exact: reduced_coeffs(e.coeffs()),
    })
}
