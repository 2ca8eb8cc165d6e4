use std::collections::{BTreeMap, HashSet};

use super::polynomial::Rational;
use super::rational::RationalFunction;
use crate::error::{Error, Result};

/// Largest supported chart dimension; basis index sets are stored as bit masks.
pub const MAX_DIMENSION: usize = 64;

/// Local coordinates plus symbolic parameters.
///
/// Variable `i < dimension()` is the `i`-th coordinate; parameters follow the
/// coordinates and are constants for differentiation.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Chart {
    coordinates: Vec<String>,
    parameters: Vec<String>,
}

fn valid_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Chart {
    pub fn new<S: AsRef<str>>(coordinates: &[S], parameters: &[S]) -> Result<Self> {
        let coordinates: Vec<String> = coordinates.iter().map(|s| s.as_ref().to_string()).collect();
        let parameters: Vec<String> = parameters.iter().map(|s| s.as_ref().to_string()).collect();
        if coordinates.is_empty() {
            return Err(Error::InvalidChart("at least one coordinate is required".into()));
        }
        if coordinates.len() > MAX_DIMENSION {
            return Err(Error::InvalidChart(format!(
                "dimension {} exceeds {MAX_DIMENSION}",
                coordinates.len()
            )));
        }
        let mut seen = HashSet::new();
        for name in coordinates.iter().chain(&parameters) {
            if !valid_identifier(name) {
                return Err(Error::InvalidChart(format!("`{name}` is not an identifier")));
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::InvalidChart(format!("duplicate name `{name}`")));
            }
        }
        Ok(Chart {
            coordinates,
            parameters,
        })
    }

    /// Chart without parameters.
    pub fn with_coordinates<S: AsRef<str>>(coordinates: &[S]) -> Result<Self> {
        Self::new(coordinates, &[] as &[S])
    }

    pub fn dimension(&self) -> usize {
        self.coordinates.len()
    }

    /// Number of polynomial variables: coordinates followed by parameters.
    pub fn nvars(&self) -> usize {
        self.coordinates.len() + self.parameters.len()
    }

    pub fn coordinates(&self) -> &[String] {
        &self.coordinates
    }

    pub fn parameters(&self) -> &[String] {
        &self.parameters
    }

    /// Name of variable `i` (coordinates first, then parameters).
    pub fn variable_name(&self, i: usize) -> &str {
        if i < self.coordinates.len() {
            &self.coordinates[i]
        } else {
            &self.parameters[i - self.coordinates.len()]
        }
    }

    pub fn variable_index(&self, name: &str) -> Option<usize> {
        self.coordinates
            .iter()
            .chain(&self.parameters)
            .position(|n| n == name)
    }

    pub fn coordinate_index(&self, name: &str) -> Result<usize> {
        match self.coordinates.iter().position(|n| n == name) {
            Some(i) => Ok(i),
            None if self.parameters.iter().any(|n| n == name) => Err(Error::NotACoordinate(name.into())),
            None => Err(Error::UnknownName(name.into())),
        }
    }

    pub fn is_parameter(&self, name: &str) -> bool {
        self.parameters.iter().any(|n| n == name)
    }

    /// The function `x_i` for coordinate `i`.
    pub fn coordinate(&self, i: usize) -> RationalFunction {
        assert!(i < self.dimension(), "coordinate index out of range");
        RationalFunction::variable(self.nvars(), i)
    }

    pub fn variable(&self, name: &str) -> Result<RationalFunction> {
        self.variable_index(name)
            .map(|i| RationalFunction::variable(self.nvars(), i))
            .ok_or_else(|| Error::UnknownName(name.into()))
    }

    pub fn constant(&self, c: Rational) -> RationalFunction {
        RationalFunction::constant(self.nvars(), c)
    }

    pub fn zero(&self) -> RationalFunction {
        RationalFunction::zero(self.nvars())
    }

    pub fn one(&self) -> RationalFunction {
        RationalFunction::one(self.nvars())
    }

    /// `∂f/∂name`; only coordinates may be differentiated against.
    pub fn partial_derivative(&self, f: &RationalFunction, name: &str) -> Result<RationalFunction> {
        let i = self.coordinate_index(name)?;
        Ok(f.derivative(i))
    }

    /// Exact value of `f` at a point assigning every coordinate and parameter.
    pub fn eval_at(&self, f: &RationalFunction, point: &BTreeMap<String, Rational>) -> Result<Rational> {
        let values = self.point_vector(point)?;
        f.eval(&values)
    }

    /// Orders a named point by the chart's variable order.
    pub fn point_vector(&self, point: &BTreeMap<String, Rational>) -> Result<Vec<Rational>> {
        for name in point.keys() {
            if self.variable_index(name).is_none() {
                return Err(Error::UnknownName(name.clone()));
            }
        }
        (0..self.nvars())
            .map(|i| {
                let name = self.variable_name(i);
                point
                    .get(name)
                    .cloned()
                    .ok_or_else(|| Error::UnassignedVariable(name.to_string()))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_empty() {
        assert!(Chart::new(&["x", "x"], &[]).is_err());
        assert!(Chart::new(&["x"], &["x"]).is_err());
        assert!(Chart::with_coordinates::<&str>(&[]).is_err());
        assert!(Chart::with_coordinates(&["1x"]).is_err());
    }

    #[test]
    fn parameters_are_constants() {
        let chart = Chart::new(&["x"], &["m", "k"]).unwrap();
        let m = chart.variable("m").unwrap();
        let k = chart.variable("k").unwrap();
        let mk2 = &m * &(&k * &k);
        assert!(chart.partial_derivative(&mk2, "x").unwrap().is_zero());
        assert_eq!(chart.partial_derivative(&mk2, "m"), Err(Error::NotACoordinate("m".into())));
        assert_eq!(chart.partial_derivative(&mk2, "q"), Err(Error::UnknownName("q".into())));
    }
}
