use alloc::vec::Vec;

use crate::error::{LatticeError, Result};
use crate::lattice::{reflect, reflection_matrix, HomClass, LatticeModel};
use crate::matrix::IntMatrix;

/// An ordered product of reflections `R(γ)`.
///
/// Generators are stored in application order: applying the word to a class
/// applies `generators[0]` first. The cached matrix is therefore
/// `R(γ_k) ⋯ R(γ_1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReflectionWord {
    model: LatticeModel,
    generators: Vec<HomClass>,
    matrix: IntMatrix,
}

impl ReflectionWord {
    pub fn new(model: LatticeModel) -> Self {
        Self {
            model,
            generators: Vec::new(),
            matrix: IntMatrix::identity(model.rank()),
        }
    }

    pub fn from_generators(model: LatticeModel, generators: Vec<HomClass>) -> Result<Self> {
        let mut w = Self::new(model);
        for g in generators {
            w.push(g)?;
        }
        Ok(w)
    }

    /// Append a generator, applied after all existing ones.
    pub fn push(&mut self, gamma: HomClass) -> Result<()> {
        gamma.check_model(self.model)?;
        let r = reflection_matrix(&gamma)?;
        self.matrix = &r * &self.matrix;
        self.generators.push(gamma);
        Ok(())
    }

    pub fn extend(&mut self, other: &ReflectionWord) -> Result<()> {
        if other.model != self.model {
            return Err(LatticeError::IncompatibleModels);
        }
        self.matrix = &other.matrix * &self.matrix;
        self.generators.extend(other.generators.iter().cloned());
        Ok(())
    }

    pub fn model(&self) -> LatticeModel {
        self.model
    }

    pub fn generators(&self) -> &[HomClass] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &HomClass) -> Result<HomClass> {
        x.check_model(self.model)?;
        Ok(HomClass::from_vec_unchecked(
            self.model,
            self.matrix.apply(x.coeffs()),
        ))
    }

    /// Apply generator by generator; agrees with [`apply`](Self::apply).
    pub fn apply_stepwise(&self, x: &HomClass) -> Result<HomClass> {
        self.generators
            .iter()
            .try_fold(x.clone(), |acc, g| reflect(g, &acc))
    }

    /// Reflections are involutions, so the inverse is the reversed word.
    pub fn inverse(&self) -> Self {
        let mut generators = self.generators.clone();
        generators.reverse();
        Self::from_generators(self.model, generators).expect("generators already validated")
    }
}
