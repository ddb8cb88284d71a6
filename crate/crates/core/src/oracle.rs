//! Brute-force oracles: bounded class enumeration, orbit searches over the
//! twist generators, and cross-checks of the classification routines.
//!
//! Everything here works on machine integers with its own pairing code so
//! that it stays independent of the exact-arithmetic paths it checks.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::format;
use alloc::vec::Vec;

use num_traits::ToPrimitive;

use crate::error::{LatticeError, Result};
use crate::lattice::{is_characteristic, HomClass, LatticeModel};
use crate::reduction::{is_exceptional, is_k_null_spherical};

/// Default cap on `coeff_bound`.
pub const DEFAULT_BOUND_LIMIT: u32 = 8;
/// Cap on `(2B + 1)^rank` when no square constraint prunes the search.
pub const UNPRUNED_SPACE_LIMIT: u64 = 20_000_000;
/// Cap on the number of states an orbit search may visit.
pub const STATE_LIMIT: usize = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Predicate {
    Exceptional,
    Knull,
    Characteristic,
}

impl Predicate {
    pub fn name(self) -> &'static str {
        match self {
            Self::Exceptional => "exceptional",
            Self::Knull => "knull",
            Self::Characteristic => "characteristic",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumQuery {
    pub model: LatticeModel,
    pub square: Option<i64>,
    pub k_pairing: Option<i64>,
    pub coeff_bound: u32,
    pub predicate: Option<Predicate>,
    /// Lift the safety limits.
    pub override_limits: bool,
}

impl EnumQuery {
    pub fn new(model: LatticeModel, coeff_bound: u32) -> Self {
        Self {
            model,
            square: None,
            k_pairing: None,
            coeff_bound,
            predicate: None,
            override_limits: false,
        }
    }

    pub fn square(mut self, s: i64) -> Self {
        self.square = Some(s);
        self
    }

    pub fn k_pairing(mut self, k: i64) -> Self {
        self.k_pairing = Some(k);
        self
    }

    pub fn predicate(mut self, p: Predicate) -> Self {
        self.predicate = Some(p);
        self
    }

    pub fn override_limits(mut self, on: bool) -> Self {
        self.override_limits = on;
        self
    }

    fn check_limits(&self) -> Result<()> {
        if self.coeff_bound == 0 {
            return Err(LatticeError::SafetyLimit("coefficient bound must be positive".into()));
        }
        if self.override_limits {
            return Ok(());
        }
        if self.coeff_bound > DEFAULT_BOUND_LIMIT {
            return Err(LatticeError::SafetyLimit(format!(
                "coefficient bound {} exceeds {DEFAULT_BOUND_LIMIT}",
                self.coeff_bound
            )));
        }
        if self.square.is_none() {
            let side = 2 * u64::from(self.coeff_bound) + 1;
            let space = u32::try_from(self.model.rank())
                .ok()
                .and_then(|r| side.checked_pow(r));
            if space.is_none_or(|s| s > UNPRUNED_SPACE_LIMIT) {
                return Err(LatticeError::SafetyLimit(format!(
                    "{side}^{} vectors without a square constraint",
                    self.model.rank()
                )));
            }
        }
        Ok(())
    }
}

/// `x · y` on machine integers.
pub(crate) fn pair_i64(model: LatticeModel, x: &[i64], y: &[i64]) -> i64 {
    let off = model.e_offset();
    let head = if model.is_rational() {
        x[0] * y[0]
    } else {
        x[0] * y[1] + x[1] * y[0]
    };
    head - x[off..].iter().zip(&y[off..]).map(|(a, b)| a * b).sum::<i64>()
}

fn k0_i64(model: LatticeModel) -> Vec<i64> {
    let mut k = match model {
        LatticeModel::Rational { .. } => vec![-3],
        LatticeModel::Ruled { genus, .. } => vec![-2, 2 * i64::from(genus) - 2],
    };
    k.extend(core::iter::repeat_n(1, model.n()));
    k
}

fn to_class(model: LatticeModel, v: &[i64]) -> HomClass {
    HomClass::from_i64(model, v).expect("rank matches")
}

fn to_i64(x: &HomClass) -> Option<Vec<i64>> {
    x.coeffs().iter().map(ToPrimitive::to_i64).collect()
}

/// Fill `tail` with values in `[-b, b]`, optionally with a fixed sum and sum of squares.
fn tails(
    len: usize,
    b: i64,
    sum: Option<i64>,
    sumsq: Option<i64>,
    cur: &mut Vec<i64>,
    out: &mut Vec<Vec<i64>>,
) {
    let left = (len - cur.len()) as i64;
    if left == 0 {
        if sum.is_none_or(|s| s == 0) && sumsq.is_none_or(|q| q == 0) {
            out.push(cur.clone());
        }
        return;
    }
    if let Some(q) = sumsq {
        if q < 0 || q > left * b * b {
            return;
        }
        if let Some(s) = sum {
            if s * s > left * q || (s - q) % 2 != 0 {
                return;
            }
        }
    }
    if sum.is_some_and(|s| s.abs() > left * b) {
        return;
    }
    for v in -b..=b {
        cur.push(v);
        tails(len, b, sum.map(|s| s - v), sumsq.map(|q| q - v * v), cur, out);
        cur.pop();
    }
}

/// All classes with every `|coefficient| ≤ coeff_bound` meeting the numeric
/// constraints and the predicate, in canonical order.
pub fn enumerate(q: &EnumQuery) -> Result<Vec<HomClass>> {
    q.check_limits()?;
    let model = q.model;
    let b = i64::from(q.coeff_bound);
    let n = model.n();
    let heads: Vec<Vec<i64>> = if model.is_rational() {
        (-b..=b).map(|a| vec![a]).collect()
    } else {
        (-b..=b).flat_map(|t| (-b..=b).map(move |f| vec![t, f])).collect()
    };
    let k = k0_i64(model);
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    for head in heads {
        let mut padded = head.clone();
        padded.extend(core::iter::repeat_n(0, n));
        let head_sq = pair_i64(model, &padded, &padded);
        // x² = head² − Σ c²  and  K·x = K·head − Σ c
        let sumsq = q.square.map(|s| head_sq - s);
        let sum = q.k_pairing.map(|kp| pair_i64(model, &k, &padded) - kp);
        let mut found = Vec::new();
        tails(n, b, sum, sumsq, &mut cur, &mut found);
        for t in found {
            let mut v = head.clone();
            v.extend(t);
            out.push(to_class(model, &v));
        }
    }
    if let Some(p) = q.predicate {
        let k0 = model.k0_form();
        let mut kept = Vec::with_capacity(out.len());
        for x in out {
            let keep = match p {
                Predicate::Exceptional => is_exceptional(&x, &k0)?,
                Predicate::Knull => is_k_null_spherical(&x, &k0)?,
                Predicate::Characteristic => is_characteristic(&x),
            };
            if keep {
                kept.push(x);
            }
        }
        out = kept;
    }
    out.sort();
    Ok(out)
}

/// Largest `|a|` of a rational class with square −2 and `K_0`-pairing 0,
/// together with the matching bound on `|b_i|` (`n ≤ 8`).
pub fn knull_coeff_bound(n: usize) -> Option<u32> {
    if n >= 9 {
        return None;
    }
    // 9a² = (Σ b)² ≤ n Σ b² = n(a² + 2)
    let (p, q) = (9 - n as i64, 2 * n as i64);
    let mut a = 0i64;
    while p * (a + 1) * (a + 1) <= q {
        a += 1;
    }
    let mut b = 0i64;
    while (b + 1) * (b + 1) <= a * a + 2 {
        b += 1;
    }
    Some(a.max(b).max(1) as u32)
}

/// What an orbit search is looking for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    /// `E_i − E_j`, or `±(H − E_i − E_j − E_k)` in the rational model.
    Spherical,
    /// `E_i`, `H − E_i − E_j` when `n = 2`, or `F − E_i` in the ruled model.
    Exceptional,
}

fn e_pattern(es: &[i64], plus: usize, minus: usize) -> bool {
    es.iter().filter(|&&c| c == 1).count() == plus
        && es.iter().filter(|&&c| c == -1).count() == minus
        && es.iter().filter(|&&c| c != 0).count() == plus + minus
}

fn hits(model: LatticeModel, v: &[i64], target: Target) -> bool {
    let off = model.e_offset();
    let es = &v[off..];
    let head = &v[..off];
    match (model.is_rational(), target) {
        (_, Target::Spherical) if head.iter().all(|&h| h == 0) => e_pattern(es, 1, 1),
        (true, Target::Spherical) => {
            (head[0] == 1 && e_pattern(es, 0, 3)) || (head[0] == -1 && e_pattern(es, 3, 0))
        }
        (false, Target::Spherical) => false,
        (_, Target::Exceptional) if head.iter().all(|&h| h == 0) => e_pattern(es, 1, 0),
        (true, Target::Exceptional) => model.n() == 2 && head[0] == 1 && e_pattern(es, 0, 2),
        (false, Target::Exceptional) => head == [0, 1] && e_pattern(es, 0, 1),
    }
}

/// Canonical representative modulo permutations of the `E_i`.
fn canonical(model: LatticeModel, mut v: Vec<i64>) -> Vec<i64> {
    v[model.e_offset()..].sort_unstable();
    v
}

/// Neighbours of a canonical state under `Γ_{ijk}` (rational) or `R(F − E_i − E_j)` (ruled).
fn neighbours(model: LatticeModel, v: &[i64]) -> Vec<Vec<i64>> {
    let off = model.e_offset();
    let n = model.n();
    let mut seen_vals = BTreeSet::new();
    let mut out = Vec::new();
    let width = if model.is_rational() { 3 } else { 2 };
    let mut idx: Vec<usize> = (0..width).collect();
    if n < width {
        return out;
    }
    loop {
        let vals: Vec<i64> = idx.iter().map(|&i| v[off + i]).collect();
        if seen_vals.insert(vals.clone()) {
            // γ · x for γ = H − Σ E (rational) or F − Σ E (ruled)
            let d = vals.iter().sum::<i64>() + v[0];
            let mut w = v.to_vec();
            let lead = if model.is_rational() { 0 } else { 1 };
            let mut fine = match w[lead].checked_add(d) {
                Some(c) => {
                    w[lead] = c;
                    true
                }
                None => false,
            };
            for &i in &idx {
                match w[off + i].checked_sub(d) {
                    Some(c) => w[off + i] = c,
                    None => fine = false,
                }
            }
            if fine {
                out.push(canonical(model, w));
            }
        }
        // next combination of `width` indices out of `n`
        let mut pos = width;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            if idx[pos] < n - width + pos {
                break;
            }
        }
        idx[pos] += 1;
        for p in (pos + 1)..width {
            idx[p] = idx[p - 1] + 1;
        }
    }
}

/// Breadth-first search over the twist orbit of `x` (permutations are free).
///
/// Returns the depth at which a target pattern was first seen.
pub fn orbit_search(x: &HomClass, target: Target, depth: usize) -> Result<Option<usize>> {
    let model = x.model();
    let start = to_i64(x).ok_or_else(|| LatticeError::SafetyLimit("coefficient overflow".into()))?;
    let start = canonical(model, start);
    let mut seen = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([(start, 0usize)]);
    while let Some((v, d)) = queue.pop_front() {
        if hits(model, &v, target) {
            return Ok(Some(d));
        }
        if d == depth {
            continue;
        }
        for w in neighbours(model, &v) {
            if seen.insert(w.clone()) {
                if seen.len() > STATE_LIMIT {
                    return Err(LatticeError::SafetyLimit(format!(
                        "orbit search visited more than {STATE_LIMIT} states"
                    )));
                }
                queue.push_back((w, d + 1));
            }
        }
    }
    Ok(None)
}

/// Full orbit of `seeds` under the reflections along `gens`, without any quotient.
pub fn orbit_closure(
    model: LatticeModel,
    seeds: &[HomClass],
    gens: &[HomClass],
    max_size: usize,
) -> Result<Vec<HomClass>> {
    let overflow = || LatticeError::SafetyLimit("coefficient overflow".into());
    let gs: Vec<(Vec<i64>, i64)> = gens
        .iter()
        .map(|g| {
            let v = to_i64(g).ok_or_else(overflow)?;
            let sq = pair_i64(model, &v, &v);
            if ![1, 2].contains(&sq.abs()) {
                return Err(LatticeError::ReflectionUndefined { square: sq });
            }
            Ok((v, sq))
        })
        .collect::<Result<_>>()?;
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    for s in seeds {
        let v = to_i64(s).ok_or_else(overflow)?;
        if seen.insert(v.clone()) {
            queue.push_back(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        for (g, sq) in &gs {
            let c = 2 * pair_i64(model, g, &v) / sq;
            let w: Vec<i64> = v.iter().zip(g).map(|(a, b)| a - c * b).collect();
            if seen.insert(w.clone()) {
                if seen.len() > max_size {
                    return Err(LatticeError::SafetyLimit(format!(
                        "orbit exceeds {max_size} classes"
                    )));
                }
                queue.push_back(w);
            }
        }
    }
    Ok(seen.into_iter().map(|v| to_class(model, &v)).collect())
}

/// `ξ · x ≡ x · x (mod 2)` checked on all of `{0, 1}^rank`.
pub fn characteristic_by_brute_force(x: &HomClass) -> Result<bool> {
    let model = x.model();
    let r = model.rank();
    if r > 20 {
        return Err(LatticeError::SafetyLimit(format!("2^{r} test vectors")));
    }
    let v = to_i64(x).ok_or_else(|| LatticeError::SafetyLimit("coefficient overflow".into()))?;
    let reduced: Vec<i64> = v.iter().map(|c| c.rem_euclid(2)).collect();
    Ok((0u32..(1 << r)).all(|mask| {
        let y: Vec<i64> = (0..r).map(|i| i64::from((mask >> i) & 1)).collect();
        (pair_i64(model, &reduced, &y) - pair_i64(model, &y, &y)).rem_euclid(2) == 0
    }))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Disagreement {
    pub class: HomClass,
    pub library: bool,
    pub oracle: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossReport {
    pub predicate: Predicate,
    pub checked: usize,
    /// Classes both sides accept.
    pub confirmed: usize,
    pub disagreements: Vec<Disagreement>,
}

/// Run the library decision for `predicate` on every enumerated class and
/// compare it with the definitional check plus an orbit search of depth `2n`
/// (or `depth`, if given).
pub fn crosscheck(q: &EnumQuery, predicate: Predicate, depth: Option<usize>) -> Result<CrossReport> {
    let mut plain = q.clone();
    plain.predicate = None;
    crosscheck_classes(q.model, &enumerate(&plain)?, predicate, depth)
}

/// [`crosscheck`] on an explicit list of classes.
pub fn crosscheck_classes(
    model: LatticeModel,
    classes: &[HomClass],
    predicate: Predicate,
    depth: Option<usize>,
) -> Result<CrossReport> {
    let depth = depth.unwrap_or(2 * model.n().max(1));
    let k0 = model.k0_form();
    let kv = k0_i64(model);
    let mut report = CrossReport {
        predicate,
        checked: classes.len(),
        confirmed: 0,
        disagreements: Vec::new(),
    };
    for x in classes {
        x.check_model(model)?;
        let v = to_i64(x).ok_or_else(|| LatticeError::SafetyLimit("coefficient overflow".into()))?;
        let sq = pair_i64(model, &v, &v);
        let kx = pair_i64(model, &kv, &v);
        let (library, oracle) = match predicate {
            Predicate::Knull => (
                is_k_null_spherical(x, &k0)?,
                sq == -2 && kx == 0 && orbit_search(x, Target::Spherical, depth)?.is_some(),
            ),
            Predicate::Exceptional => (
                is_exceptional(x, &k0)?,
                sq == -1 && kx == -1 && orbit_search(x, Target::Exceptional, depth)?.is_some(),
            ),
            Predicate::Characteristic => (is_characteristic(x), characteristic_by_brute_force(x)?),
        };
        if library != oracle {
            report.disagreements.push(Disagreement {
                class: x.clone(),
                library,
                oracle,
            });
        } else if library {
            report.confirmed += 1;
        }
    }
    Ok(report)
}
