//! Build core fields from their config templates.

use fracfield::analytic::{cantor_measure, indicator_ball, ConvolvedField, DeltaPairField, GaussianBump};
use fracfield::numerics::point::{self, Point};
use fracfield::{RadonMeasure, ScalarField, VectorField};

use crate::config::FieldDef;
use crate::error::CliError;

pub enum Built {
    Scalar(ScalarField),
    /// A vector field, with its divergence measure when that is known exactly.
    Vector(VectorField, Option<RadonMeasure>),
    Measure(RadonMeasure),
}

pub fn to_point(v: &[f64]) -> Point {
    point::from_slice(v)
}

pub fn build(def: &FieldDef, dim: usize) -> Result<Built, CliError> {
    Ok(match def {
        FieldDef::Gaussian { center, width, amplitude, direction } => {
            let g = GaussianBump::new(dim, to_point(center), *width, *amplitude)?;
            match direction {
                Some(d) => Built::Vector(g.vector_field(to_point(d)), None),
                None => Built::Scalar(g.field()),
            }
        }
        FieldDef::DeltaPair { y, z, alpha } => {
            let p = DeltaPairField::new(dim, to_point(y), to_point(z), *alpha)?;
            Built::Vector(p.field(), Some(p.divergence_measure()))
        }
        FieldDef::Convolved { atoms, alpha } => {
            let nu = RadonMeasure::from_atoms(dim, atoms.iter().map(|a| (to_point(&a.at), a.weight)).collect())?;
            let c = ConvolvedField::new(&nu, *alpha)?;
            Built::Vector(c.field(), Some(c.divergence_measure()))
        }
        FieldDef::IndicatorBall { center, r } => Built::Scalar(indicator_ball(dim, to_point(center), *r)?),
        FieldDef::Cantor { level } => Built::Measure(cantor_measure(*level, dim)?),
    })
}

pub fn scalar(def: &FieldDef, dim: usize) -> Result<ScalarField, CliError> {
    match build(def, dim)? {
        Built::Scalar(f) => Ok(f),
        _ => Err(CliError::Config(format!("{} is not a scalar field", def.type_name()))),
    }
}

pub fn vector(def: &FieldDef, dim: usize) -> Result<VectorField, CliError> {
    match build(def, dim)? {
        Built::Vector(f, _) => Ok(f),
        _ => Err(CliError::Config(format!("{} is not a vector field", def.type_name()))),
    }
}
