//! Validation of lattice isometries and their factorisation into twist words.
//!
//! A `K_0`-twist is the reflection `R(γ)` along a class with `γ² = −2` and
//! `K_0(γ) = 0`; a `(K_0, α)`-twist additionally has `α(γ) = 0`. The
//! decompositions below return a [`ReflectionWord`] whose matrix equals the
//! input exactly, and check this before returning.

use alloc::format;
use alloc::vec::Vec;

use num_traits::{Signed, ToPrimitive, Zero};

use crate::cone::{enumerate_exceptional, in_cone, ConeVerdict};
use crate::error::{LatticeError, Result};
use crate::lattice::{form_pairing, pairing, reflect, FormClass, HomClass, LatticeModel};
use crate::matrix::IntMatrix;
use crate::reduction::{binary, ternary};
use crate::word::ReflectionWord;
use crate::{Int, Rational};

/// An integer matrix acting on coefficient vectors of one lattice model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsometryMatrix {
    model: LatticeModel,
    entries: IntMatrix,
}

impl IsometryMatrix {
    pub fn new(model: LatticeModel, entries: IntMatrix) -> Result<Self> {
        if entries.dim() != model.rank() {
            return Err(LatticeError::MatrixShape {
                rank: model.rank(),
                rows: entries.dim(),
                cols: entries.dim(),
            });
        }
        Ok(Self { model, entries })
    }

    /// Build from row vectors, rejecting ragged or wrongly sized input.
    pub fn from_rows(model: LatticeModel, rows: Vec<Vec<Int>>) -> Result<Self> {
        let r = model.rank();
        let shape_err = |rows: &Vec<Vec<Int>>| LatticeError::MatrixShape {
            rank: r,
            rows: rows.len(),
            cols: rows.iter().map(Vec::len).find(|&l| l != r).unwrap_or(r),
        };
        if rows.len() != r || rows.iter().any(|row| row.len() != r) {
            return Err(shape_err(&rows));
        }
        let m = IntMatrix::from_rows(rows).expect("shape checked");
        Self::new(model, m)
    }

    pub fn identity(model: LatticeModel) -> Self {
        Self {
            model,
            entries: IntMatrix::identity(model.rank()),
        }
    }

    pub fn from_word(word: &ReflectionWord) -> Self {
        Self {
            model: word.model(),
            entries: word.matrix().clone(),
        }
    }

    pub fn model(&self) -> LatticeModel {
        self.model
    }

    pub fn entries(&self) -> &IntMatrix {
        &self.entries
    }

    pub fn apply(&self, x: &HomClass) -> Result<HomClass> {
        x.check_model(self.model)?;
        HomClass::new(self.model, self.entries.apply(x.coeffs()))
    }

    /// Image of the basis vector at position `idx`.
    fn column(&self, idx: usize) -> HomClass {
        HomClass::new(self.model, self.entries.column(idx)).expect("rank matches")
    }
}

/// What the matrix does to the fibre class `F` of a ruled model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FiberAction {
    Fixed,
    Negated,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub models_match: bool,
    pub preserves_gram: bool,
    pub preserves_k: bool,
    /// `None` when no α was given.
    pub preserves_alpha: Option<bool>,
    /// `None` for rational models.
    pub fiber: Option<FiberAction>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.models_match
            && self.preserves_gram
            && self.preserves_k
            && self.preserves_alpha != Some(false)
            && matches!(self.fiber, None | Some(FiberAction::Fixed))
    }

    pub fn violations(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        if !self.models_match {
            v.push("incompatible lattice models");
        }
        if !self.preserves_gram {
            v.push("pairing not preserved");
        }
        if !self.preserves_k {
            v.push("canonical class not preserved");
        }
        if self.preserves_alpha == Some(false) {
            v.push("alpha not preserved");
        }
        match self.fiber {
            Some(FiberAction::Negated) => v.push("fibre class sent to -F"),
            Some(FiberAction::Other) => v.push("fibre class not preserved"),
            _ => {}
        }
        v
    }

    fn into_result(self) -> Result<()> {
        if self.is_ok() {
            Ok(())
        } else {
            Err(LatticeError::Validation(self.violations().join("; ")))
        }
    }
}

/// Check `MᵀGM = G`, `M·K = K`, `α∘M = α` and, for ruled models, `M·F = F`.
pub fn validate(m: &IsometryMatrix, k: &FormClass, alpha: Option<&FormClass>) -> ValidationReport {
    let model = m.model;
    let models_match = k.model() == model && alpha.is_none_or(|a| a.model() == model);
    let mut report = ValidationReport {
        models_match,
        preserves_gram: false,
        preserves_k: false,
        preserves_alpha: alpha.map(|_| false),
        fiber: (!model.is_rational()).then_some(FiberAction::Other),
    };
    if !models_match {
        return report;
    }
    let r = model.rank();
    let g = model.gram();
    let mt = m.entries.transpose();
    report.preserves_gram = &(&mt * &g) * &m.entries == g;

    let image: Vec<Rational> = (0..r)
        .map(|i| {
            (0..r).fold(Rational::zero(), |acc, j| {
                acc + Rational::from(m.entries.get(i, j).clone()) * &k.coeffs()[j]
            })
        })
        .collect();
    report.preserves_k = image == k.coeffs();

    if let Some(a) = alpha {
        report.preserves_alpha = Some((0..r).all(|j| {
            let col = m.column(j);
            form_pairing(a, &col).ok() == form_pairing(a, &HomClass::basis(model, j)).ok()
        }));
    }
    if !model.is_rational() {
        let f = HomClass::basis(model, 1);
        let img = m.column(1);
        report.fiber = Some(if img == f {
            FiberAction::Fixed
        } else if img == -&f {
            FiberAction::Negated
        } else {
            FiberAction::Other
        });
    }
    report
}

/// Reduce the exceptional class `x` (orthogonal to `E_1..E_{from-1}`) to some
/// `E_k` with `k ≥ from`, using Cremona steps over the indices `from..=n`.
fn reduce_to_basis(x: &HomClass, from: usize) -> Result<(Vec<HomClass>, usize)> {
    let model = x.model();
    let n = model.n();
    let stuck = |why: &str| {
        LatticeError::ResidualNotResolvable(format!("image {x} of E{from}: {why}"))
    };
    let mut cur = x.clone();
    let mut gens = Vec::new();
    loop {
        let a = cur.coeffs()[0].clone();
        if a.is_zero() {
            return (from..=n)
                .find(|&k| cur == HomClass::e(model, k))
                .map(|k| (gens, k))
                .ok_or_else(|| stuck("not a basis class"));
        }
        if a.is_negative() {
            return Err(stuck("negative H-coefficient"));
        }
        let mut idx: Vec<usize> = (from..=n).collect();
        if idx.len() < 3 {
            return Err(stuck("too few free indices"));
        }
        idx.sort_by(|&i, &j| cur.e_coeff(i).cmp(cur.e_coeff(j)).then(i.cmp(&j)));
        let top = [idx[0], idx[1], idx[2]];
        let d = top.iter().fold(a, |acc, &i| acc + cur.e_coeff(i));
        if !d.is_negative() {
            return Err(stuck("no Cremona step lowers the degree"));
        }
        let gamma = ternary(model, top[0], top[1], top[2]);
        cur = reflect(&gamma, &cur)?;
        gens.push(gamma);
    }
}

/// Move `targets[i]` to `E_{i+1}` for every `i`, carrying `extra` along.
///
/// Returns the generators in the order they were applied. `check` sees each
/// generator before it is used.
fn straighten(
    model: LatticeModel,
    targets: &mut [HomClass],
    extra: &mut [HomClass],
    check: &mut dyn FnMut(&HomClass) -> Result<()>,
) -> Result<Vec<HomClass>> {
    let mut used = Vec::new();
    for i in 1..=targets.len() {
        let (mut gens, k) = reduce_to_basis(&targets[i - 1], i)?;
        if k != i {
            gens.push(binary(model, i, k));
        }
        for g in gens {
            check(&g)?;
            for t in targets.iter_mut().chain(extra.iter_mut()) {
                *t = reflect(&g, t)?;
            }
            used.push(g);
        }
    }
    Ok(used)
}

/// The word whose matrix is `R(g_1)⋯R(g_k)` for `applied = [g_1, .., g_k]`.
fn word_from_applied(model: LatticeModel, mut applied: Vec<HomClass>) -> Result<ReflectionWord> {
    applied.reverse();
    ReflectionWord::from_generators(model, applied)
}

/// `R(γ) = R(−γ)`; pick the sign whose first nonzero coefficient is positive.
fn normalize_sign(g: &HomClass) -> HomClass {
    match g.coeffs().iter().find(|c| !c.is_zero()) {
        Some(c) if c.is_negative() => -g,
        _ => g.clone(),
    }
}

fn finish(word: ReflectionWord, m: &IsometryMatrix) -> Result<ReflectionWord> {
    if word.matrix() == m.entries() {
        let gens = word.generators().iter().map(normalize_sign).collect();
        ReflectionWord::from_generators(word.model(), gens)
    } else {
        Err(LatticeError::ResidualNotResolvable(
            "word product differs from the input".into(),
        ))
    }
}

fn require_rational(m: &IsometryMatrix, what: &'static str) -> Result<()> {
    if m.model.is_rational() {
        Ok(())
    } else {
        Err(LatticeError::RationalOnly(what))
    }
}

/// Factor `M ∈ D_{K_0}` (rational model) into `K_0`-twists.
pub fn decompose_k(m: &IsometryMatrix) -> Result<ReflectionWord> {
    require_rational(m, "decompose_k")?;
    let model = m.model;
    validate(m, &model.k0_form(), None).into_result()?;
    decompose_with(m, &mut |_| Ok(()))
}

fn decompose_with(
    m: &IsometryMatrix,
    check: &mut dyn FnMut(&HomClass) -> Result<()>,
) -> Result<ReflectionWord> {
    let model = m.model;
    let n = model.n();
    let mut targets: Vec<HomClass> = (1..=n).map(|i| m.column(model.e_index(i))).collect();
    let mut extra = [m.column(0)];
    let applied = straighten(model, &mut targets, &mut extra, check)?;
    if extra[0] != HomClass::basis(model, 0) {
        return Err(LatticeError::ResidualNotResolvable(format!(
            "H is sent to {} after fixing every E_i",
            extra[0]
        )));
    }
    finish(word_from_applied(model, applied)?, m)
}

fn small_coeffs(x: &HomClass) -> Option<Vec<i64>> {
    x.coeffs().iter().map(ToPrimitive::to_i64).collect()
}

/// Rational-model pairing on machine integers.
fn pair_small(x: &[i64], y: &[i64]) -> i64 {
    x[0] * y[0] - x[1..].iter().zip(&y[1..]).map(|(a, b)| a * b).sum::<i64>()
}

/// Greedy α-minimal basis `E'_1, .., E'_n` of pairwise orthogonal exceptional
/// classes: each has minimal α-area among the exceptional classes orthogonal
/// to the earlier ones that still admit an orthogonal partner. Ties go to the
/// lexicographically smallest coefficient vector.
pub fn alpha_minimal_basis(
    alpha: &FormClass,
    degree_bound: Option<u64>,
    allow_bounded: bool,
) -> Result<Vec<HomClass>> {
    let model = alpha.model();
    if !model.is_rational() {
        return Err(LatticeError::RationalOnly("alpha_minimal_basis"));
    }
    let set = enumerate_exceptional(model, &model.k0_form(), degree_bound)?;
    if !set.complete && !allow_bounded {
        return Err(LatticeError::MinimalityBasisFailed(
            "exceptional set is incomplete".into(),
        ));
    }
    let mut pool: Vec<(Rational, HomClass, Vec<i64>)> = set
        .classes
        .into_iter()
        .map(|e| {
            let small = small_coeffs(&e).ok_or_else(|| {
                LatticeError::MinimalityBasisFailed("coefficient overflow".into())
            })?;
            Ok((form_pairing(alpha, &e)?, e, small))
        })
        .collect::<Result<_>>()?;
    pool.sort_by(|x, y| x.0.cmp(&y.0).then_with(|| x.1.cmp(&y.1)));
    let n = model.n();
    let mut chosen: Vec<HomClass> = Vec::with_capacity(n);
    for step in 0..n {
        let last = step + 1 == n;
        let pick = pool.iter().position(|(_, _, v)| {
            last || pool.iter().any(|(_, _, w)| pair_small(v, w) == 0)
        });
        let Some(pos) = pick else {
            return Err(LatticeError::MinimalityBasisFailed(format!(
                "no admissible exceptional class at step {}",
                step + 1
            )));
        };
        let (_, e, v) = pool.remove(pos);
        pool.retain(|(_, _, w)| pair_small(&v, w) == 0);
        chosen.push(e);
    }
    Ok(chosen)
}

/// Factor `M ∈ D_{K_0, α}` (rational model) into `(K_0, α)`-twists.
///
/// `α` must lie in the symplectic cone. For `n ≥ 9` the exceptional set is
/// only known up to `degree_bound`, and `allow_bounded` must be set.
pub fn decompose_k_alpha(
    m: &IsometryMatrix,
    alpha: &FormClass,
    degree_bound: Option<u64>,
    allow_bounded: bool,
) -> Result<ReflectionWord> {
    require_rational(m, "decompose_k_alpha")?;
    let model = m.model;
    validate(m, &model.k0_form(), Some(alpha)).into_result()?;
    match in_cone(alpha, &model.k0_form(), degree_bound)? {
        ConeVerdict::No(_) => return Err(LatticeError::FormNotInCone),
        ConeVerdict::YesUpToBound(_) if !allow_bounded => {
            return Err(LatticeError::MinimalityBasisFailed(
                "exceptional set is incomplete".into(),
            ))
        }
        _ => {}
    }
    let mut basis = alpha_minimal_basis(alpha, degree_bound, allow_bounded)?;
    let psi_gens = straighten(model, &mut basis, &mut [], &mut |_| Ok(()))?;
    let psi = ReflectionWord::from_generators(model, psi_gens)?;
    let psi_inv = psi.inverse();

    // g = ψ M ψ⁻¹ preserves β = α∘ψ⁻¹, whose minimal basis is the standard one.
    let g = IsometryMatrix::new(model, &(psi.matrix() * m.entries()) * psi_inv.matrix())?;
    let mut check = |gamma: &HomClass| -> Result<()> {
        let area = form_pairing(alpha, &psi_inv.apply(gamma)?)?;
        if area.is_zero() {
            Ok(())
        } else {
            Err(LatticeError::ResidualNotResolvable(format!(
                "twist along {gamma} has nonzero area {area}"
            )))
        }
    };
    let inner = decompose_with(&g, &mut check)?;
    let back = inner
        .generators()
        .iter()
        .map(|gamma| psi_inv.apply(gamma))
        .collect::<Result<Vec<_>>>()?;
    finish(ReflectionWord::from_generators(model, back)?, m)
}

/// Factor `M ∈ D_{K_0, α}` of a ruled model into twists along
/// `±(E_i − E_j)` and `±(F − E_i − E_j)` of α-area zero.
pub fn decompose_ruled(m: &IsometryMatrix, alpha: &FormClass) -> Result<ReflectionWord> {
    let model = m.model;
    if model.is_rational() {
        return Err(LatticeError::RuledOnly("decompose_ruled"));
    }
    let k0 = model.k0();
    validate(m, &model.k0_form(), Some(alpha)).into_result()?;
    let n = model.n();
    if n == 0 {
        return if m.entries.is_identity() {
            Ok(ReflectionWord::new(model))
        } else {
            Err(LatticeError::NoTwistsAvailable)
        };
    }
    let f = HomClass::basis(model, 1);
    let mut cols: Vec<HomClass> = (0..model.rank()).map(|j| m.column(j)).collect();
    let mut unfixed: Vec<usize> = (1..=n).collect();
    let mut applied = Vec::new();
    let area = |x: &HomClass| form_pairing(alpha, x);
    let mut apply = |gamma: HomClass, cols: &mut Vec<HomClass>| -> Result<()> {
        if gamma.square() != Int::from(-2)
            || !pairing(&k0, &gamma)?.is_zero()
            || !area(&gamma)?.is_zero()
        {
            return Err(LatticeError::ResidualNotResolvable(format!(
                "{gamma} is not a twist class of area zero"
            )));
        }
        for c in cols.iter_mut() {
            *c = reflect(&gamma, c)?;
        }
        applied.push(gamma);
        Ok(())
    };
    let by_area = |i: &usize| -> Result<(Rational, HomClass)> {
        let e = HomClass::e(model, *i);
        Ok((area(&e)?, e))
    };
    let mut budget = 4 * n + 4;
    while !unfixed.is_empty() {
        budget = budget.checked_sub(1).ok_or_else(|| {
            LatticeError::ResidualNotResolvable("ruled reduction did not terminate".into())
        })?;
        let mut keyed = unfixed
            .iter()
            .map(|i| Ok((by_area(i)?, *i)))
            .collect::<Result<Vec<_>>>()?;
        keyed.sort();
        let ((e_area, e), i) = keyed.swap_remove(0);
        let y = cols[model.e_index(i)].clone();
        if y == e {
            unfixed.retain(|&j| j != i);
        } else if pairing(&y, &e)?.is_zero() {
            apply(&e - &y, &mut cols)?;
        } else if y == &f - &e {
            let partner = keyed
                .iter()
                .filter(|((a, _), _)| *a == e_area)
                .map(|((_, x), _)| x.clone())
                .min()
                .ok_or_else(|| {
                    LatticeError::ResidualNotResolvable(format!(
                        "E{i} is sent to F - E{i} and no other class has equal area"
                    ))
                })?;
            apply(&partner - &e, &mut cols)?;
            apply(&(&f - &partner) - &e, &mut cols)?;
        } else {
            return Err(LatticeError::ResidualNotResolvable(format!(
                "E{i} is sent to {y}, which is not exceptional"
            )));
        }
    }
    let identity = cols
        .iter()
        .enumerate()
        .all(|(j, c)| *c == HomClass::basis(model, j));
    if !identity {
        return Err(LatticeError::ResidualNotResolvable(
            "T is not fixed after fixing every E_i".into(),
        ));
    }
    finish(word_from_applied(model, applied)?, m)
}

/// All `K_0`-twist generators of the rational model: `E_i − E_j` and `H − E_i − E_j − E_k`.
pub fn rational_twist_generators(model: LatticeModel) -> Vec<HomClass> {
    let n = model.n();
    let mut out = Vec::new();
    for i in 1..=n {
        for j in (i + 1)..=n {
            out.push(binary(model, i, j));
            for k in (j + 1)..=n {
                out.push(ternary(model, i, j, k));
            }
        }
    }
    out
}

/// Twist generators `γ` with `α(γ) = 0`.
pub fn null_generators(gens: Vec<HomClass>, alpha: &FormClass) -> Result<Vec<HomClass>> {
    let mut out = Vec::with_capacity(gens.len());
    for g in gens {
        if form_pairing(alpha, &g)?.is_zero() {
            out.push(g);
        }
    }
    Ok(out)
}
