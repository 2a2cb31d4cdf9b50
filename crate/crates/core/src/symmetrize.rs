//! From a nonsymmetric presentation to the symmetric one it generates.
//!
//! Each planar generator `g` of arity `n` becomes the `n!` generators
//! `g_σ = g(x_σ(1), …, x_σ(n))`, permuted freely by the symmetric group.
//! Relations keep their planar monomials, read with identity labels, and the
//! order compares unfolded planar trees with equal leaf readings.

use num_traits::One;
use thiserror::Error;

use crate::element::OperadElement;
use crate::field::Scalar;
use crate::generators::{Flavor, GenId, GeneratorError, GeneratorModule};
use crate::order::{OrderSpec, SymmetrizedOrder};
use crate::perm::Perm;
use crate::presentation::{Presentation, PresentationError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymmetrizeError {
    #[error("`{0}` is already symmetric")]
    AlreadySymmetric(String),
    #[error("the order of `{0}` is not a path-word order")]
    UnsupportedOrder(String),
    #[error(transparent)]
    Generators(#[from] GeneratorError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
}

/// Name of `g_σ`: the planar name, an underscore and the images of `σ`.
pub fn symmetrized_name(base: &str, sigma: &Perm) -> String {
    let images: Vec<String> = sigma.images().iter().map(u32::to_string).collect();
    let sep = if sigma.len() > 9 { "." } else { "" };
    format!("{base}_{}", images.join(sep))
}

pub fn symmetrize(p: &Presentation) -> Result<Presentation, SymmetrizeError> {
    if p.gens.is_symmetric() {
        return Err(SymmetrizeError::AlreadySymmetric(p.name.clone()));
    }
    let planar = match &p.order {
        OrderSpec::PathWord(o) => o.clone(),
        OrderSpec::Symmetrized(_) => return Err(SymmetrizeError::UnsupportedOrder(p.name.clone())),
    };
    let field = p.gens.field();
    let mut gens = GeneratorModule::new(field, Flavor::Symmetric);
    let mut origin = Vec::new();
    let mut identity_of = Vec::new();
    let mut blocks: Vec<(GenId, Vec<Perm>)> = Vec::new();
    for g in p.gens.ids() {
        let gen = p.gens.get(g);
        let perms = Perm::all(gen.arity);
        let first = gens.len() as GenId;
        for sigma in &perms {
            gens.add_generator(&symmetrized_name(&gen.name, sigma), gen.arity, gen.degree)?;
            origin.push((g, sigma.clone()));
        }
        let id_pos = perms.iter().position(Perm::is_identity).expect("identity");
        identity_of.push(first + id_pos as GenId);
        blocks.push((first, perms));
    }
    for (first, perms) in &blocks {
        let n = perms[0].len();
        for (j, sigma) in perms.iter().enumerate() {
            for k in 1..n {
                let image = Perm::adjacent(n, k).compose(sigma);
                let t = perms.iter().position(|q| *q == image).expect("closed under composition");
                gens.set_action(first + j as GenId, k, vec![(first + t as GenId, Scalar::one())])?;
            }
        }
    }
    let relations = p
        .relations
        .iter()
        .map(|rel| {
            OperadElement::from_terms(
                field,
                rel.terms().map(|(m, c)| (m.map_labels(&mut |&g| identity_of[g as usize]), c.clone())),
            )
        })
        .collect();
    let order = OrderSpec::Symmetrized(SymmetrizedOrder { planar, origin });
    Ok(Presentation::new(&format!("{}-sym", p.name), gens, order, relations)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::builtin;
    use crate::format::{parse, print};

    #[test]
    fn generators_and_round_trip() {
        let p = symmetrize(&builtin("assoc-ns").unwrap()).unwrap();
        let names: Vec<&str> = p.gens.generators().iter().map(|g| g.name.as_str()).collect();
        assert_eq!(names, ["m_12", "m_21"]);
        assert_eq!(parse(&print(&p)).unwrap(), p);
        assert!(symmetrize(&p).is_err());
    }
}
