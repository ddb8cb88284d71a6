//! Exceptional classes, symplectic-cone membership and the Lagrangian sphere test.
//!
//! For the rational model an exceptional class `aH − Σ b_i E_i` with `a > 0`
//! has `b_i ≥ 0`, `Σ b_i = 3a − 1` and `Σ b_i² = a² + 1`; with `a = 0` it is
//! some `E_i`. Cauchy–Schwarz then bounds `a` by the largest root of
//! `(9 − n)a² − 6a + (1 − n) = 0`, which is finite for `n ≤ 8`.

use alloc::vec::Vec;

use num_integer::Roots;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{LatticeError, Result};
use crate::lattice::{form_pairing, is_characteristic, pairing, FormClass, HomClass, LatticeModel};
use crate::reduction::{
    canonical_flips, conjugate_to_k0, cremona_reduce, reduce_to_binary, ruled_exceptional_classes,
    NormalForm, NormalKind,
};
use crate::word::ReflectionWord;
use crate::{Int, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExceptionalSet {
    pub model: LatticeModel,
    pub k: FormClass,
    /// Sorted in canonical (lexicographic) order.
    pub classes: Vec<HomClass>,
    pub complete: bool,
    /// The degree bound used when the set is incomplete.
    pub degree_bound: Option<u64>,
}

/// Largest `a ≥ 0` with `(9 − n)a² − 6a + (1 − n) ≤ 0`, for `n ≤ 8`.
pub fn degree_limit(n: usize) -> Option<u64> {
    if n >= 9 {
        return None;
    }
    let (p, q) = (9 - n as i64, 1 - n as i64);
    let holds = |a: i64| p * a * a - 6 * a + q <= 0;
    let mut a = 0;
    while holds(a + 1) {
        a += 1;
    }
    Some(a as u64)
}

/// Non-increasing `b_1 ≥ … ≥ b_len ≥ 0` with the given sum and sum of squares.
fn sorted_solutions(len: usize, sum: i64, sumsq: i64, out: &mut Vec<Vec<i64>>) {
    fn rec(
        len: usize,
        cap: i64,
        sum: i64,
        sumsq: i64,
        cur: &mut Vec<i64>,
        out: &mut Vec<Vec<i64>>,
    ) {
        let k = (len - cur.len()) as i64;
        if k == 0 {
            if sum == 0 && sumsq == 0 {
                out.push(cur.clone());
            }
            return;
        }
        // bounds for the remaining k entries, each in [0, cap]
        if sum < 0 || sumsq < sum || sum > k * cap || sumsq > cap * sum || sum * sum > k * sumsq {
            return;
        }
        let top = cap.min(sum).min(isqrt(sumsq));
        for v in (0..=top).rev() {
            cur.push(v);
            rec(len, v, sum - v, sumsq - v * v, cur, out);
            cur.pop();
        }
    }
    let mut cur = Vec::with_capacity(len);
    rec(len, sum.max(0), sum, sumsq, &mut cur, out);
}

fn isqrt(v: i64) -> i64 {
    if v <= 0 {
        0
    } else {
        v.sqrt()
    }
}

/// Sorted representatives `(a, b)` of `𝓔_{K_0}` with `1 ≤ a ≤ max_a`.
fn sorted_exceptional_reps(n: usize, max_a: u64) -> Vec<(i64, Vec<i64>)> {
    let mut reps = Vec::new();
    for a in 1..=max_a as i64 {
        let mut sols = Vec::new();
        sorted_solutions(n, 3 * a - 1, a * a + 1, &mut sols);
        reps.extend(sols.into_iter().map(|b| (a, b)));
    }
    reps
}

/// Next lexicographic permutation; `false` once the last one is reached.
fn next_permutation(v: &mut [i64]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

fn rational_class(model: LatticeModel, a: i64, b: &[i64]) -> HomClass {
    let mut c = Vec::with_capacity(model.rank());
    c.push(Int::from(a));
    c.extend(b.iter().map(|&v| Int::from(-v)));
    HomClass::new(model, c).expect("rank matches")
}

fn rational_bound(n: usize, degree_bound: Option<u64>) -> Result<(u64, bool)> {
    match (degree_limit(n), degree_bound) {
        (Some(limit), _) => Ok((limit, true)),
        (None, Some(bound)) => Ok((bound, false)),
        (None, None) => Err(LatticeError::DegreeBoundRequired { n }),
    }
}

/// All of `𝓔_K` (rational `n ≤ 8`, any ruled model) or the part of degree
/// at most `degree_bound` (rational `n ≥ 9`).
pub fn enumerate_exceptional(
    model: LatticeModel,
    k: &FormClass,
    degree_bound: Option<u64>,
) -> Result<ExceptionalSet> {
    if k.model() != model {
        return Err(LatticeError::IncompatibleModels);
    }
    let flips = canonical_flips(k)?;
    let (classes, complete, used_bound) = match model {
        LatticeModel::Ruled { .. } => (ruled_exceptional_classes(model), true, None),
        LatticeModel::Rational { n } => {
            let (max_a, complete) = rational_bound(n, degree_bound)?;
            let mut classes: Vec<HomClass> = (1..=n).map(|i| HomClass::e(model, i)).collect();
            for (a, b) in sorted_exceptional_reps(n, max_a) {
                let mut perm = b;
                perm.reverse();
                loop {
                    classes.push(rational_class(model, a, &perm));
                    if !next_permutation(&mut perm) {
                        break;
                    }
                }
            }
            let classes = classes
                .into_iter()
                .map(|x| conjugate_to_k0(&x, &flips))
                .collect();
            (classes, complete, (!complete).then_some(max_a))
        }
    };
    let mut classes: Vec<HomClass> = classes;
    classes.sort();
    classes.dedup();
    debug_assert!(classes.iter().all(|e| {
        e.square() == Int::from(-1) && form_pairing(k, e).ok() == Some(Rational::from(Int::from(-1)))
    }));
    Ok(ExceptionalSet {
        model,
        k: k.clone(),
        classes,
        complete,
        degree_bound: used_bound,
    })
}

/// Minimum of a linear functional over `𝓔_{K_0}` (rational model).
///
/// `on_h` is the value on `H` and `on_e[i]` the value on `E_{i+1}`. By the
/// rearrangement inequality it suffices to pair each sorted `b` with the
/// `E_i` ordered by decreasing value.
fn min_over_rational_exceptional(
    model: LatticeModel,
    on_h: &Rational,
    on_e: &[Rational],
    max_a: u64,
) -> Option<(HomClass, Rational)> {
    let n = model.n();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| on_e[j].cmp(&on_e[i]).then(i.cmp(&j)));
    let mut best: Option<(HomClass, Rational)> = None;
    let mut consider = |x: HomClass, v: Rational| {
        if best.as_ref().is_none_or(|(bx, bv)| v < *bv || (v == *bv && x < *bx)) {
            best = Some((x, v));
        }
    };
    for (i, v) in on_e.iter().enumerate() {
        consider(HomClass::e(model, i + 1), v.clone());
    }
    for (a, b) in sorted_exceptional_reps(n, max_a) {
        let mut assigned = vec![0i64; n];
        let mut value = on_h * Rational::from(Int::from(a));
        for (rank, &idx) in order.iter().enumerate() {
            assigned[idx] = b[rank];
            value -= &on_e[idx] * Rational::from(Int::from(b[rank]));
        }
        consider(rational_class(model, a, &assigned), value);
    }
    best
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConeViolation {
    NonPositiveSquare(Rational),
    NonPositiveArea { class: HomClass, area: Rational },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConeVerdict {
    Yes,
    /// No violation among exceptional classes of degree at most the bound.
    YesUpToBound(u64),
    No(ConeViolation),
}

impl ConeVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, Self::Yes)
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Self::No(_))
    }
}

/// Default degree bound `3 · ⌈max |τ_i|⌉ · rank` for `n ≥ 9`.
pub fn default_degree_bound(tau: &FormClass) -> u64 {
    let m = tau.max_abs_ceil() * Int::from(3 * tau.model().rank());
    m.to_u64().unwrap_or(u64::MAX).max(1)
}

fn conjugate_form(tau: &FormClass, flips: &[bool]) -> FormClass {
    let model = tau.model();
    let mut c = tau.coeffs().to_vec();
    for (i, &f) in flips.iter().enumerate() {
        if f {
            let idx = model.e_index(i + 1);
            c[idx] = -&c[idx];
        }
    }
    FormClass::new(model, c).expect("rank matches")
}

/// Membership in `𝒞_K = {τ : τ² > 0, τ(E) > 0 for all E ∈ 𝓔_K}`.
///
/// For ruled models only these two conditions are checked.
pub fn in_cone(tau: &FormClass, k: &FormClass, degree_bound: Option<u64>) -> Result<ConeVerdict> {
    if tau.model() != k.model() {
        return Err(LatticeError::IncompatibleModels);
    }
    let flips = canonical_flips(k)?;
    let sq = tau.square();
    if !sq.is_positive() {
        return Ok(ConeVerdict::No(ConeViolation::NonPositiveSquare(sq)));
    }
    let model = tau.model();
    match model {
        LatticeModel::Ruled { .. } => {
            for e in ruled_exceptional_classes(model) {
                let area = form_pairing(tau, &e)?;
                if !area.is_positive() {
                    return Ok(ConeVerdict::No(ConeViolation::NonPositiveArea { class: e, area }));
                }
            }
            Ok(ConeVerdict::Yes)
        }
        LatticeModel::Rational { n } => {
            let bound = degree_bound.unwrap_or_else(|| default_degree_bound(tau));
            let (max_a, complete) = rational_bound(n, Some(bound))?;
            let t = conjugate_form(tau, &flips);
            let on_h = form_pairing(&t, &HomClass::basis(model, 0))?;
            let on_e: Vec<Rational> = (1..=n)
                .map(|i| form_pairing(&t, &HomClass::e(model, i)))
                .collect::<Result<_>>()?;
            if let Some((e, area)) = min_over_rational_exceptional(model, &on_h, &on_e, max_a) {
                if !area.is_positive() {
                    let class = conjugate_to_k0(&e, &flips);
                    return Ok(ConeVerdict::No(ConeViolation::NonPositiveArea { class, area }));
                }
            }
            Ok(if complete {
                ConeVerdict::Yes
            } else {
                ConeVerdict::YesUpToBound(max_a)
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SphericalCertificate {
    /// Rational model: a `K`-twist word carrying the class to a binary or ternary class.
    Reduction(NormalForm),
    /// Ruled model: the class is one of `±(F − E_i − E_j)`, `±(E_i − E_j)`.
    RuledListed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LagrangianFailure {
    SquareNotMinusTwo(Int),
    KPairingNonzero(Rational),
    NotSpherical(NormalKind),
    NonzeroArea(Rational),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LagrangianVerdict {
    Yes {
        certificate: SphericalCertificate,
        characteristic: bool,
        /// Set when the cone check only covered exceptional classes up to this degree.
        cone_bound: Option<u64>,
        /// Hamiltonian uniqueness applies: rational, `χ ≤ 7`, not characteristic at `χ = 6`.
        hamiltonian_uniqueness: bool,
        /// Smooth-isotopy uniqueness applies: rational, not characteristic at `χ = 6`.
        smooth_uniqueness: bool,
    },
    No(LagrangianFailure),
}

impl LagrangianVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, Self::Yes { .. })
    }
}

fn conjugate_normal_form(nf: NormalForm, flips: &[bool]) -> Result<NormalForm> {
    if !flips.iter().any(|&f| f) {
        return Ok(nf);
    }
    let model = nf.representative.model();
    let gens = nf
        .word
        .generators()
        .iter()
        .map(|g| conjugate_to_k0(g, flips))
        .collect();
    Ok(NormalForm {
        representative: conjugate_to_k0(&nf.representative, flips),
        word: ReflectionWord::from_generators(model, gens)?,
        ..nf
    })
}

/// `ξ` is represented by a Lagrangian sphere for a form in class `τ` with
/// canonical class `K` iff `ξ` is `K`-null spherical and `τ(ξ) = 0`.
///
/// `τ` must lie in the cone; a bounded cone answer (`n ≥ 9`) is accepted only
/// when `allow_bounded` is set.
pub fn is_lagrangian_spherical(
    xi: &HomClass,
    tau: &FormClass,
    k: &FormClass,
    degree_bound: Option<u64>,
    allow_bounded: bool,
) -> Result<LagrangianVerdict> {
    xi.check_model(tau.model())?;
    let cone_bound = match in_cone(tau, k, degree_bound)? {
        ConeVerdict::Yes => None,
        ConeVerdict::YesUpToBound(b) if allow_bounded => Some(b),
        ConeVerdict::YesUpToBound(_) => return Err(LatticeError::IncompleteExceptionalSet),
        ConeVerdict::No(_) => return Err(LatticeError::FormNotInCone),
    };
    let flips = canonical_flips(k)?;
    let sq = xi.square();
    if sq != Int::from(-2) {
        return Ok(LagrangianVerdict::No(LagrangianFailure::SquareNotMinusTwo(sq)));
    }
    let kx = form_pairing(k, xi)?;
    if !kx.is_zero() {
        return Ok(LagrangianVerdict::No(LagrangianFailure::KPairingNonzero(kx)));
    }
    let model = xi.model();
    let certificate = if model.is_rational() {
        let nf = reduce_to_binary(&conjugate_to_k0(xi, &flips))?;
        if !matches!(nf.kind, NormalKind::Binary | NormalKind::Ternary) {
            return Ok(LagrangianVerdict::No(LagrangianFailure::NotSpherical(nf.kind)));
        }
        SphericalCertificate::Reduction(conjugate_normal_form(nf, &flips)?)
    } else {
        if !crate::reduction::ruled_knull_classes(model).contains(xi) {
            return Ok(LagrangianVerdict::No(LagrangianFailure::NotSpherical(
                NormalKind::Irreducible,
            )));
        }
        SphericalCertificate::RuledListed
    };
    let area = form_pairing(tau, xi)?;
    if !area.is_zero() {
        return Ok(LagrangianVerdict::No(LagrangianFailure::NonzeroArea(area)));
    }
    let characteristic = is_characteristic(xi);
    let (hamiltonian_uniqueness, smooth_uniqueness) = match model {
        LatticeModel::Rational { n } => {
            let chi = n + 3;
            let excluded = chi == 6 && characteristic;
            (chi <= 7 && !excluded, !excluded)
        }
        LatticeModel::Ruled { .. } => (false, false),
    };
    Ok(LagrangianVerdict::Yes {
        certificate,
        characteristic,
        cone_bound,
        hamiltonian_uniqueness,
        smooth_uniqueness,
    })
}

/// `ξ = E_i − E_j` with `τ(ξ) = 0`: a binary class of zero area.
pub fn is_zero_area_binary(xi: &HomClass, tau: &FormClass) -> Result<bool> {
    let es = xi.e_coeffs();
    let head_zero = xi.coeffs()[..xi.model().e_offset()].iter().all(Zero::is_zero);
    let nonzero: Vec<&Int> = es.iter().filter(|c| !c.is_zero()).collect();
    let binary = head_zero
        && nonzero.len() == 2
        && nonzero.iter().any(|c| **c == Int::from(1))
        && nonzero.iter().any(|c| **c == Int::from(-1));
    Ok(binary && form_pairing(tau, xi)?.is_zero())
}

/// The GT non-vanishing hypotheses for a class `A`:
/// `A² > 0`, `τ(A) > 0`, `τ(A − K) > 0`, `(A − K)² ≥ 0` and `A·E ≥ 0` for every `E ∈ 𝓔_K`.
///
/// For rational `n ≥ 9` the last condition can only be checked up to a degree
/// bound; that requires `allow_bounded`.
pub fn inflation_admissible(
    a: &HomClass,
    tau: &FormClass,
    k: &FormClass,
    degree_bound: Option<u64>,
    allow_bounded: bool,
) -> Result<bool> {
    a.check_model(tau.model())?;
    a.check_model(k.model())?;
    match in_cone(tau, k, degree_bound)? {
        ConeVerdict::No(_) => return Err(LatticeError::FormNotInCone),
        ConeVerdict::YesUpToBound(_) if !allow_bounded => {
            return Err(LatticeError::IncompleteExceptionalSet)
        }
        _ => {}
    }
    if !a.square().is_positive() || !form_pairing(tau, a)?.is_positive() {
        return Ok(false);
    }
    let shifted = FormClass::from(a);
    let shifted = FormClass::new(
        a.model(),
        shifted
            .coeffs()
            .iter()
            .zip(k.coeffs())
            .map(|(x, y)| x - y)
            .collect(),
    )?;
    let tau_shifted = tau
        .model()
        .pair_slices(tau.coeffs(), shifted.coeffs());
    if !tau_shifted.is_positive() || shifted.square().is_negative() {
        return Ok(false);
    }
    let model = a.model();
    let min_pairing = match model {
        LatticeModel::Ruled { .. } => ruled_exceptional_classes(model)
            .iter()
            .map(|e| pairing(a, e))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .min()
            .map(Rational::from),
        LatticeModel::Rational { n } => {
            let flips = canonical_flips(k)?;
            let bound = degree_bound.unwrap_or_else(|| default_degree_bound(tau));
            let (max_a, _) = rational_bound(n, Some(bound))?;
            let ac = conjugate_to_k0(a, &flips);
            let on_h = Rational::from(pairing(&ac, &HomClass::basis(model, 0))?);
            let on_e: Vec<Rational> = (1..=n)
                .map(|i| pairing(&ac, &HomClass::e(model, i)).map(Rational::from))
                .collect::<Result<_>>()?;
            min_over_rational_exceptional(model, &on_h, &on_e, max_a).map(|(_, v)| v)
        }
    };
    Ok(min_pairing.is_none_or(|v| !v.is_negative()))
}

/// Cremona normal form of an exceptional class, conjugated to `K_0`.
pub fn exceptional_normal_form(e: &HomClass, k: &FormClass) -> Result<NormalForm> {
    let flips = canonical_flips(k)?;
    conjugate_normal_form(cremona_reduce(&conjugate_to_k0(e, &flips))?, &flips)
}
