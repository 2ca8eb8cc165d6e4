//! Differential forms and multivector fields on a chart.

mod blade;
mod element;
mod mixed;
mod vector_field;

pub use blade::Blade;
pub use element::{GradedElement, Variance};
pub use mixed::MultivectorOneForm;
pub use vector_field::VectorField;
