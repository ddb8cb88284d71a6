//! The intersection lattice of `CP^2 # n(-CP^2)` and of `(Σ_h × S^2) # n(-CP^2)`.
//!
//! Coefficient vectors are ordered `(H, E_1, .., E_n)` for the rational model
//! and `(T, F, E_1, .., E_n)` for the ruled model. Homology classes and
//! cohomology classes share this convention and the same Gram matrix.

use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{LatticeError, Result};
use crate::matrix::IntMatrix;
use crate::{Int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LatticeModel {
    /// `CP^2` blown up `n` times; basis `H, E_1..E_n`.
    Rational { n: usize },
    /// Genus-`genus` ruled surface blown up `n` times; basis `T, F, E_1..E_n`.
    Ruled { genus: u32, n: usize },
}

impl LatticeModel {
    pub fn rational(n: usize) -> Self {
        Self::Rational { n }
    }

    pub fn ruled(genus: u32, n: usize) -> Self {
        Self::Ruled { genus, n }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Self::Rational { .. })
    }

    /// Number of exceptional basis classes `E_i`.
    pub fn n(&self) -> usize {
        match *self {
            Self::Rational { n } | Self::Ruled { n, .. } => n,
        }
    }

    /// Position of `E_1` in the coefficient vector.
    pub fn e_offset(&self) -> usize {
        match self {
            Self::Rational { .. } => 1,
            Self::Ruled { .. } => 2,
        }
    }

    pub fn rank(&self) -> usize {
        self.e_offset() + self.n()
    }

    /// Vector index of `E_i` (1-based `i`).
    pub fn e_index(&self, i: usize) -> usize {
        debug_assert!(i >= 1 && i <= self.n());
        self.e_offset() + i - 1
    }

    /// Entry `(i, j)` of the Gram matrix.
    pub fn gram_entry(&self, i: usize, j: usize) -> i64 {
        let off = self.e_offset();
        if i >= off || j >= off {
            return if i == j { -1 } else { 0 };
        }
        match self {
            Self::Rational { .. } => 1,
            Self::Ruled { .. } => {
                if i == j {
                    0
                } else {
                    1
                }
            }
        }
    }

    pub fn gram(&self) -> IntMatrix {
        let r = self.rank();
        let mut g = IntMatrix::zeros(r);
        for i in 0..r {
            for j in 0..r {
                g.set(i, j, Int::from(self.gram_entry(i, j)));
            }
        }
        g
    }

    /// `x^T G y` for coefficient slices of any exact ring.
    pub(crate) fn pair_slices<T>(&self, x: &[T], y: &[T]) -> T
    where
        T: Clone + Zero + Sub<Output = T>,
        for<'a> &'a T: Mul<&'a T, Output = T>,
    {
        let off = self.e_offset();
        let head = match self {
            Self::Rational { .. } => &x[0] * &y[0],
            Self::Ruled { .. } => &x[0] * &y[1] + &x[1] * &y[0],
        };
        x[off..]
            .iter()
            .zip(&y[off..])
            .fold(head, |acc, (a, b)| acc - a * b)
    }

    /// `G x`, so that `y · x = Σ_j y_j (G x)_j`.
    pub(crate) fn lower(&self, x: &[Int]) -> Vec<Int> {
        let off = self.e_offset();
        let mut out = Vec::with_capacity(x.len());
        match self {
            Self::Rational { .. } => out.push(x[0].clone()),
            Self::Ruled { .. } => {
                out.push(x[1].clone());
                out.push(x[0].clone());
            }
        }
        out.extend(x[off..].iter().map(|v| -v));
        out
    }

    /// The standard canonical class `K_0` as a homology class.
    pub fn k0(&self) -> HomClass {
        let mut c = Vec::with_capacity(self.rank());
        match *self {
            Self::Rational { .. } => c.push(Int::from(-3)),
            Self::Ruled { genus, .. } => {
                c.push(Int::from(-2));
                c.push(Int::from(2 * i64::from(genus) - 2));
            }
        }
        c.extend((0..self.n()).map(|_| Int::from(1)));
        HomClass { model: *self, coeffs: c }
    }

    pub fn k0_form(&self) -> FormClass {
        FormClass::from(&self.k0())
    }
}

impl fmt::Display for LatticeModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Rational { n } => write!(f, "rational:{n}"),
            Self::Ruled { genus, n } => write!(f, "ruled:h={genus},n={n}"),
        }
    }
}

/// An integral homology class.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HomClass {
    model: LatticeModel,
    coeffs: Vec<Int>,
}

impl HomClass {
    pub fn new(model: LatticeModel, coeffs: Vec<Int>) -> Result<Self> {
        if coeffs.len() != model.rank() {
            return Err(LatticeError::WrongLength {
                expected: model.rank(),
                found: coeffs.len(),
            });
        }
        Ok(Self { model, coeffs })
    }

    pub fn from_i64(model: LatticeModel, coeffs: &[i64]) -> Result<Self> {
        Self::new(model, coeffs.iter().map(|&c| Int::from(c)).collect())
    }

    pub(crate) fn from_vec_unchecked(model: LatticeModel, coeffs: Vec<Int>) -> Self {
        debug_assert_eq!(coeffs.len(), model.rank());
        Self { model, coeffs }
    }

    pub fn zero(model: LatticeModel) -> Self {
        Self {
            model,
            coeffs: vec![Int::zero(); model.rank()],
        }
    }

    /// The basis vector at vector position `index`.
    pub fn basis(model: LatticeModel, index: usize) -> Self {
        let mut x = Self::zero(model);
        x.coeffs[index] = Int::from(1);
        x
    }

    /// `E_i` (1-based).
    pub fn e(model: LatticeModel, i: usize) -> Self {
        Self::basis(model, model.e_index(i))
    }

    pub fn model(&self) -> LatticeModel {
        self.model
    }

    pub fn coeffs(&self) -> &[Int] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Int> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Coefficient of `E_i` (1-based).
    pub fn e_coeff(&self, i: usize) -> &Int {
        &self.coeffs[self.model.e_index(i)]
    }

    pub fn e_coeffs(&self) -> &[Int] {
        &self.coeffs[self.model.e_offset()..]
    }

    pub fn square(&self) -> Int {
        self.model.pair_slices(&self.coeffs, &self.coeffs)
    }

    pub fn dot(&self, other: &HomClass) -> Result<Int> {
        pairing(self, other)
    }

    pub fn scaled(&self, k: &Int) -> Self {
        Self {
            model: self.model,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    pub(crate) fn check_model(&self, other: LatticeModel) -> Result<()> {
        if self.model == other {
            Ok(())
        } else {
            Err(LatticeError::IncompatibleModels)
        }
    }
}

impl Neg for &HomClass {
    type Output = HomClass;

    fn neg(self) -> HomClass {
        HomClass {
            model: self.model,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for HomClass {
    type Output = HomClass;

    fn neg(self) -> HomClass {
        -&self
    }
}

impl Add for &HomClass {
    type Output = HomClass;

    fn add(self, rhs: &HomClass) -> HomClass {
        assert_eq!(self.model, rhs.model, "incompatible lattice models");
        HomClass {
            model: self.model,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &HomClass {
    type Output = HomClass;

    fn sub(self, rhs: &HomClass) -> HomClass {
        assert_eq!(self.model, rhs.model, "incompatible lattice models");
        HomClass {
            model: self.model,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

/// A real cohomology class with exact rational coefficients (e.g. `[ω]` or a canonical class).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FormClass {
    model: LatticeModel,
    coeffs: Vec<Rational>,
}

impl FormClass {
    pub fn new(model: LatticeModel, coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.len() != model.rank() {
            return Err(LatticeError::WrongLength {
                expected: model.rank(),
                found: coeffs.len(),
            });
        }
        Ok(Self { model, coeffs })
    }

    /// Build from `(numerator, denominator)` pairs.
    pub fn from_ratios(model: LatticeModel, coeffs: &[(i64, i64)]) -> Result<Self> {
        Self::new(
            model,
            coeffs
                .iter()
                .map(|&(p, q)| Rational::new(Int::from(p), Int::from(q)))
                .collect(),
        )
    }

    pub fn zero(model: LatticeModel) -> Self {
        Self {
            model,
            coeffs: vec![Rational::zero(); model.rank()],
        }
    }

    pub fn model(&self) -> LatticeModel {
        self.model
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn square(&self) -> Rational {
        self.model.pair_slices(&self.coeffs, &self.coeffs)
    }

    pub fn evaluate(&self, x: &HomClass) -> Result<Rational> {
        form_pairing(self, x)
    }

    /// The integral class with the same coefficients, if every coefficient is an integer.
    pub fn to_integral(&self) -> Option<HomClass> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect::<Option<Vec<_>>>()
            .map(|coeffs| HomClass {
                model: self.model,
                coeffs,
            })
    }

    /// Largest absolute coefficient, rounded up.
    pub fn max_abs_ceil(&self) -> Int {
        self.coeffs
            .iter()
            .map(|c| c.abs().ceil().to_integer())
            .max()
            .unwrap_or_else(Int::zero)
    }
}

impl From<&HomClass> for FormClass {
    fn from(x: &HomClass) -> Self {
        Self {
            model: x.model,
            coeffs: x.coeffs.iter().map(|c| Rational::from(c.clone())).collect(),
        }
    }
}

impl Sub<&HomClass> for &FormClass {
    type Output = FormClass;

    fn sub(self, rhs: &HomClass) -> FormClass {
        assert_eq!(self.model, rhs.model, "incompatible lattice models");
        FormClass {
            model: self.model,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - Rational::from(b.clone()))
                .collect(),
        }
    }
}

/// Intersection pairing `x · y`.
pub fn pairing(x: &HomClass, y: &HomClass) -> Result<Int> {
    x.check_model(y.model)?;
    Ok(x.model.pair_slices(&x.coeffs, &y.coeffs))
}

/// Evaluation `τ(x)` of a cohomology class on a homology class.
pub fn form_pairing(tau: &FormClass, x: &HomClass) -> Result<Rational> {
    x.check_model(tau.model)?;
    let xs: Vec<Rational> = x.coeffs.iter().map(|c| Rational::from(c.clone())).collect();
    Ok(tau.model.pair_slices(&tau.coeffs, &xs))
}

/// Admissible reflection squares are `±1` and `±2`.
pub(crate) fn check_reflection_square(square: &Int) -> Result<()> {
    let s = square.abs();
    if s == Int::from(1) || s == Int::from(2) {
        Ok(())
    } else {
        let clipped = i64::try_from(square.clone()).unwrap_or(i64::MAX);
        Err(LatticeError::ReflectionUndefined { square: clipped })
    }
}

/// `R(γ)(β) = β − 2(γ·β)/(γ·γ) γ`.
pub fn reflect(gamma: &HomClass, beta: &HomClass) -> Result<HomClass> {
    gamma.check_model(beta.model)?;
    let sq = gamma.square();
    check_reflection_square(&sq)?;
    let k = (Int::from(2) * pairing(gamma, beta)?) / &sq;
    Ok(HomClass {
        model: beta.model,
        coeffs: beta
            .coeffs
            .iter()
            .zip(&gamma.coeffs)
            .map(|(b, g)| b - &k * g)
            .collect(),
    })
}

/// Matrix of `R(γ)` acting on coefficient vectors.
pub fn reflection_matrix(gamma: &HomClass) -> Result<IntMatrix> {
    let sq = gamma.square();
    check_reflection_square(&sq)?;
    let c = Int::from(2) / &sq;
    let lowered = gamma.model.lower(&gamma.coeffs);
    let r = gamma.model.rank();
    let mut m = IntMatrix::identity(r);
    for i in 0..r {
        if gamma.coeffs[i].is_zero() {
            continue;
        }
        let gi = &c * &gamma.coeffs[i];
        for (j, lj) in lowered.iter().enumerate() {
            if !lj.is_zero() {
                let v = m.get(i, j) - &gi * lj;
                m.set(i, j, v);
            }
        }
    }
    Ok(m)
}

/// `ξ · x ≡ x · x (mod 2)` for every `x`; checked on the basis.
pub fn is_characteristic(xi: &HomClass) -> bool {
    let lowered = xi.model.lower(&xi.coeffs);
    lowered
        .iter()
        .enumerate()
        .all(|(i, v)| (v - Int::from(xi.model.gram_entry(i, i))).is_even())
}

impl fmt::Display for HomClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parse::print_class(self))
    }
}

impl fmt::Display for FormClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parse::print_form(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cls(model: LatticeModel, c: &[i64]) -> HomClass {
        HomClass::from_i64(model, c).unwrap()
    }

    #[test]
    fn basis_pairings() {
        let m = LatticeModel::rational(2);
        let h = cls(m, &[1, 0, 0]);
        let e1 = cls(m, &[0, 1, 0]);
        assert_eq!(pairing(&h, &h).unwrap(), Int::from(1));
        assert_eq!(pairing(&e1, &e1).unwrap(), Int::from(-1));
        assert_eq!(pairing(&h, &e1).unwrap(), Int::from(0));

        let r = LatticeModel::ruled(2, 1);
        let t = cls(r, &[1, 0, 0]);
        let f = cls(r, &[0, 1, 0]);
        assert_eq!(pairing(&t, &f).unwrap(), Int::from(1));
        assert_eq!(pairing(&t, &t).unwrap(), Int::from(0));
        assert_eq!(pairing(&f, &f).unwrap(), Int::from(0));
    }

    #[test]
    fn model_mismatch_is_rejected() {
        let a = HomClass::zero(LatticeModel::rational(2));
        let b = HomClass::zero(LatticeModel::rational(3));
        assert_eq!(pairing(&a, &b), Err(LatticeError::IncompatibleModels));
        let c = HomClass::zero(LatticeModel::ruled(1, 1));
        assert_eq!(pairing(&a, &c), Err(LatticeError::IncompatibleModels));
        assert!(form_pairing(&FormClass::zero(LatticeModel::rational(3)), &a).is_err());
    }

    #[test]
    fn canonical_classes() {
        let k = LatticeModel::rational(3).k0();
        assert_eq!(k.coeffs(), cls(LatticeModel::rational(3), &[-3, 1, 1, 1]).coeffs());
        let k = LatticeModel::ruled(3, 2).k0();
        assert_eq!(k.coeffs(), cls(LatticeModel::ruled(3, 2), &[-2, 4, 1, 1]).coeffs());
    }

    #[test]
    fn form_pairing_with_k0() {
        let m = LatticeModel::rational(3);
        let k = m.k0_form();
        let e1 = HomClass::e(m, 1);
        assert_eq!(form_pairing(&k, &e1).unwrap(), Rational::from(Int::from(-1)));
        let h = HomClass::basis(m, 0);
        assert_eq!(form_pairing(&k, &h).unwrap(), Rational::from(Int::from(-3)));
        assert!(form_pairing(&FormClass::zero(m), &h).unwrap().is_zero());
    }

    #[test]
    fn reflection_examples() {
        let m = LatticeModel::rational(2);
        let g = cls(m, &[0, 1, -1]);
        assert_eq!(reflect(&g, &HomClass::e(m, 1)).unwrap(), HomClass::e(m, 2));

        let m = LatticeModel::rational(3);
        let g = cls(m, &[1, -1, -1, -1]);
        let h = HomClass::basis(m, 0);
        assert_eq!(reflect(&g, &h).unwrap(), cls(m, &[2, -1, -1, -1]));
        assert_eq!(reflect(&g, &g).unwrap(), -&g);
    }

    #[test]
    fn reflection_rejects_bad_square() {
        let m = LatticeModel::rational(2);
        let g = cls(m, &[1, 1, 0]);
        assert_eq!(
            reflect(&g, &g),
            Err(LatticeError::ReflectionUndefined { square: 0 })
        );
        // square −1 is admissible
        let g = cls(m, &[1, 1, 1]);
        assert_eq!(reflect(&g, &g).unwrap(), -&g);
        let g = cls(m, &[2, 0, 0]);
        assert!(matches!(
            reflect(&g, &g),
            Err(LatticeError::ReflectionUndefined { square: 4 })
        ));
        assert!(reflection_matrix(&HomClass::zero(m)).is_err());
    }

    #[test]
    fn reflection_matrix_matches_reflect() {
        let m = LatticeModel::ruled(1, 2);
        let g = cls(m, &[0, 1, -1, -1]);
        let rm = reflection_matrix(&g).unwrap();
        for idx in 0..m.rank() {
            let b = HomClass::basis(m, idx);
            let img = reflect(&g, &b).unwrap();
            assert_eq!(rm.column(idx), img.coeffs());
        }
    }

    #[test]
    fn characteristic_examples() {
        let m = LatticeModel::rational(3);
        assert!(is_characteristic(&cls(m, &[1, -1, -1, -1])));
        assert!(!is_characteristic(&cls(LatticeModel::rational(2), &[0, 1, -1])));
        assert!(!is_characteristic(&HomClass::zero(LatticeModel::rational(1))));
        // ruled: T, F coefficients even, E coefficients odd
        let r = LatticeModel::ruled(1, 1);
        assert!(is_characteristic(&cls(r, &[2, 0, 1])));
        assert!(!is_characteristic(&cls(r, &[1, 0, 1])));
    }
}
