//! Generating Σ*-modules with an ordered basis.

use std::collections::HashMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{Field, Scalar};

pub type GenId = u32;

/// Image of a generator under a transposition: a combination of generators
/// of the same arity.
pub type GenComb = Vec<(GenId, Scalar)>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Flavor {
    Symmetric,
    Nonsymmetric,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub arity: usize,
    pub degree: i32,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("generator `{0}` declared twice")]
    Duplicate(String),
    #[error("generator `{0}` must have arity at least 1")]
    ZeroArity(String),
    #[error("unknown generator `{0}`")]
    Unknown(String),
    #[error("actions are not allowed in the nonsymmetric flavor")]
    ActionOnNonsymmetric,
    #[error("swap {k} is out of range for `{name}` of arity {arity}")]
    SwapOutOfRange { name: String, k: usize, arity: usize },
    #[error("image of `{name}` under swap {k} must have the same arity and degree")]
    ActionMismatch { name: String, k: usize },
    #[error("no action given for `{name}` under swap {k}")]
    MissingAction { name: String, k: usize },
    #[error("swap {k} does not square to the identity in arity {arity}")]
    NotInvolution { arity: usize, k: usize },
    #[error("braid relation between swaps {k} and {l} fails in arity {arity}")]
    Braid { arity: usize, k: usize, l: usize },
}

/// Generators with their symmetric-group action, given on adjacent
/// transpositions. Convention: the image `A_k(g)` of `g` under swap `k`
/// satisfies `g(…, x_{k+1}, x_k, …) = A_k(g)(…, x_k, x_{k+1}, …)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorModule {
    field: Field,
    flavor: Flavor,
    generators: Vec<Generator>,
    actions: Vec<Vec<Option<GenComb>>>,
    by_name: HashMap<String, GenId>,
}

impl GeneratorModule {
    pub fn new(field: Field, flavor: Flavor) -> Self {
        GeneratorModule { field, flavor, generators: Vec::new(), actions: Vec::new(), by_name: HashMap::new() }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn is_symmetric(&self) -> bool {
        self.flavor == Flavor::Symmetric
    }

    pub fn add_generator(&mut self, name: &str, arity: usize, degree: i32) -> Result<GenId, GeneratorError> {
        if self.by_name.contains_key(name) {
            return Err(GeneratorError::Duplicate(name.to_string()));
        }
        if arity == 0 {
            return Err(GeneratorError::ZeroArity(name.to_string()));
        }
        let id = self.generators.len() as GenId;
        self.generators.push(Generator { name: name.to_string(), arity, degree });
        self.actions.push(vec![None; arity - 1]);
        self.by_name.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn set_action(&mut self, g: GenId, k: usize, image: GenComb) -> Result<(), GeneratorError> {
        if self.flavor == Flavor::Nonsymmetric {
            return Err(GeneratorError::ActionOnNonsymmetric);
        }
        let gen = &self.generators[g as usize];
        if k == 0 || k >= gen.arity {
            return Err(GeneratorError::SwapOutOfRange { name: gen.name.clone(), k, arity: gen.arity });
        }
        if image.iter().any(|(h, _)| {
            let other = &self.generators[*h as usize];
            other.arity != gen.arity || other.degree != gen.degree
        }) {
            return Err(GeneratorError::ActionMismatch { name: gen.name.clone(), k });
        }
        let mut merged: Vec<(GenId, Scalar)> = Vec::new();
        for (h, c) in image {
            let c = self.field.reduce(c);
            match merged.iter_mut().find(|(x, _)| *x == h) {
                Some(e) => e.1 = self.field.add(&e.1, &c),
                None => merged.push((h, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        merged.sort_by_key(|(h, _)| *h);
        self.actions[g as usize][k - 1] = Some(merged);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn get(&self, g: GenId) -> &Generator {
        &self.generators[g as usize]
    }

    pub fn name(&self, g: GenId) -> &str {
        &self.generators[g as usize].name
    }

    pub fn arity(&self, g: GenId) -> usize {
        self.generators[g as usize].arity
    }

    pub fn degree(&self, g: GenId) -> i32 {
        self.generators[g as usize].degree
    }

    pub fn lookup(&self, name: &str) -> Result<GenId, GeneratorError> {
        self.by_name.get(name).copied().ok_or_else(|| GeneratorError::Unknown(name.to_string()))
    }

    pub fn ids(&self) -> impl Iterator<Item = GenId> {
        0..self.generators.len() as GenId
    }

    pub fn of_arity(&self, n: usize) -> Vec<GenId> {
        self.ids().filter(|&g| self.arity(g) == n).collect()
    }

    pub fn arities(&self) -> Vec<usize> {
        let mut a: Vec<usize> = self.generators.iter().map(|g| g.arity).collect();
        a.sort_unstable();
        a.dedup();
        a
    }

    pub fn max_arity(&self) -> usize {
        self.generators.iter().map(|g| g.arity).max().unwrap_or(0)
    }

    pub fn has_odd_degrees(&self) -> bool {
        self.generators.iter().any(|g| g.degree % 2 != 0)
    }

    /// The image `A_k(g)`; swap `k` exchanges entries `k` and `k+1`.
    pub fn action(&self, g: GenId, k: usize) -> &GenComb {
        self.actions[g as usize][k - 1].as_ref().expect("action validated before use")
    }

    pub fn has_action(&self, g: GenId, k: usize) -> bool {
        self.actions[g as usize].get(k - 1).is_some_and(Option::is_some)
    }

    /// True when every action image is a single generator with coefficient ±1.
    pub fn is_monomial_action(&self) -> bool {
        self.actions
            .iter()
            .flatten()
            .flatten()
            .all(|img| img.len() == 1 && (img[0].1.is_one() || self.field.neg(&img[0].1).is_one()))
    }

    fn matrix(&self, arity: usize, k: usize) -> Vec<Vec<Scalar>> {
        let ids = self.of_arity(arity);
        let index: HashMap<GenId, usize> = ids.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let mut m = vec![vec![Scalar::zero(); ids.len()]; ids.len()];
        for (col, &g) in ids.iter().enumerate() {
            for (h, c) in self.action(g, k) {
                m[index[h]][col] = c.clone();
            }
        }
        m
    }

    fn mat_mul(&self, a: &[Vec<Scalar>], b: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
        let n = a.len();
        let mut out = vec![vec![Scalar::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = Scalar::zero();
                for l in 0..n {
                    acc = self.field.add(&acc, &self.field.mul(&a[i][l], &b[l][j]));
                }
                out[i][j] = acc;
            }
        }
        out
    }

    /// Checks completeness of the action and the Coxeter relations of the
    /// symmetric group on each arity component.
    pub fn validate(&self) -> Result<(), GeneratorError> {
        if self.flavor == Flavor::Nonsymmetric {
            return Ok(());
        }
        for (g, gen) in self.generators.iter().enumerate() {
            for k in 1..gen.arity {
                if self.actions[g][k - 1].is_none() {
                    return Err(GeneratorError::MissingAction { name: gen.name.clone(), k });
                }
            }
        }
        for n in self.arities() {
            let dim = self.of_arity(n).len();
            let id: Vec<Vec<Scalar>> = (0..dim)
                .map(|i| (0..dim).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }).collect())
                .collect();
            let mats: Vec<Vec<Vec<Scalar>>> = (1..n).map(|k| self.matrix(n, k)).collect();
            for k in 1..n {
                let a = &mats[k - 1];
                if self.mat_mul(a, a) != id {
                    return Err(GeneratorError::NotInvolution { arity: n, k });
                }
                for l in k + 1..n {
                    let b = &mats[l - 1];
                    let ok = if l == k + 1 {
                        self.mat_mul(&self.mat_mul(a, b), a) == self.mat_mul(&self.mat_mul(b, a), b)
                    } else {
                        self.mat_mul(a, b) == self.mat_mul(b, a)
                    };
                    if !ok {
                        return Err(GeneratorError::Braid { arity: n, k, l });
                    }
                }
            }
        }
        Ok(())
    }
}
