//! Numeric flows of Hamiltonian vector fields and the two worked systems.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exterior::VectorField;
use crate::nambu::NambuStructure;
use crate::parse::{parse_function, parse_multivector};
use crate::symbolic::{Chart, Polynomial, RationalFunction};

/// A polynomial in the coordinates with parameters folded into the coefficients.
#[derive(Clone, Debug)]
struct CompiledPolynomial {
    terms: Vec<(f64, Vec<(usize, i32)>)>,
}

impl CompiledPolynomial {
    fn compile(p: &Polynomial, dim: usize, params: &[f64]) -> Self {
        let mut merged: BTreeMap<Vec<(usize, i32)>, f64> = BTreeMap::new();
        for (m, c) in p.terms() {
            let mut coeff = c.to_f64().unwrap_or(f64::NAN);
            let mut powers = Vec::new();
            for (v, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if v < dim {
                    powers.push((v, e as i32));
                } else {
                    coeff *= params[v - dim].powi(e as i32);
                }
            }
            *merged.entry(powers).or_insert(0.0) += coeff;
        }
        CompiledPolynomial {
            terms: merged.into_iter().map(|(k, c)| (c, k)).filter(|(c, _)| *c != 0.0).collect(),
        }
    }

    fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(c, powers)| powers.iter().fold(*c, |acc, &(v, e)| acc * x[v].powi(e)))
            .sum()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// `f(x)` for a rational function with bound parameters.
#[derive(Clone, Debug)]
pub struct CompiledFunction {
    num: CompiledPolynomial,
    den: CompiledPolynomial,
}

impl CompiledFunction {
    pub fn compile(f: &RationalFunction, chart: &Chart, bindings: &BTreeMap<String, f64>) -> Result<Self> {
        let params = bind(chart, bindings)?;
        let dim = chart.dimension();
        let num = CompiledPolynomial::compile(f.numerator(), dim, &params);
        let den = CompiledPolynomial::compile(f.denominator(), dim, &params);
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(CompiledFunction { num, den })
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.num.eval(x) / self.den.eval(x)
    }
}

fn bind(chart: &Chart, bindings: &BTreeMap<String, f64>) -> Result<Vec<f64>> {
    for name in bindings.keys() {
        if !chart.is_parameter(name) {
            return Err(Error::UnknownName(name.clone()));
        }
    }
    chart
        .parameters()
        .iter()
        .map(|p| bindings.get(p).copied().ok_or_else(|| Error::UnboundParameter(p.clone())))
        .collect()
}

/// Numeric image of a vector field.
#[derive(Clone, Debug)]
pub struct NumericField {
    chart: Arc<Chart>,
    components: Vec<CompiledFunction>,
    bindings: BTreeMap<String, f64>,
}

/// Compiles every component of `x`; all chart parameters must be bound.
pub fn compile_numeric(x: &VectorField, bindings: &BTreeMap<String, f64>) -> Result<NumericField> {
    let chart = x.chart();
    let components = x
        .components()
        .iter()
        .map(|c| CompiledFunction::compile(c, chart, bindings))
        .collect::<Result<_>>()?;
    Ok(NumericField {
        chart: Arc::clone(chart),
        components,
        bindings: bindings.clone(),
    })
}

impl NumericField {
    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn bindings(&self) -> &BTreeMap<String, f64> {
        &self.bindings
    }

    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        self.components.iter().map(|c| c.eval(x)).collect()
    }

    fn eval_into(&self, x: &[f64], out: &mut [f64]) {
        for (o, c) in out.iter_mut().zip(&self.components) {
            *o = c.eval(x);
        }
    }
}

/// Abort integration once `|x_coordinate| < threshold`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SingularGuard {
    pub coordinate: usize,
    pub threshold: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Rk4,
}

#[derive(Clone, Debug, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub method: Method,
    pub step: f64,
    /// Set when integration stopped early; the trajectory holds the steps taken so far.
    pub aborted: Option<String>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn last(&self) -> &[f64] {
        self.states.last().expect("trajectories hold the initial state")
    }
}

/// One classical Runge-Kutta step.
pub fn rk4_step(f: &NumericField, x: &[f64], dt: f64) -> Vec<f64> {
    let n = x.len();
    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut tmp = vec![0.0; n];
    f.eval_into(x, &mut k1);
    for i in 0..n {
        tmp[i] = x[i] + 0.5 * dt * k1[i];
    }
    f.eval_into(&tmp, &mut k2);
    for i in 0..n {
        tmp[i] = x[i] + 0.5 * dt * k2[i];
    }
    f.eval_into(&tmp, &mut k3);
    for i in 0..n {
        tmp[i] = x[i] + dt * k3[i];
    }
    f.eval_into(&tmp, &mut k4);
    (0..n)
        .map(|i| x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect()
}

fn guard_violation(x: &[f64], guards: &[SingularGuard]) -> Option<String> {
    if let Some(i) = x.iter().position(|v| !v.is_finite()) {
        return Some(format!("component {i} is not finite"));
    }
    guards
        .iter()
        .find(|g| x[g.coordinate].abs() < g.threshold)
        .map(|g| format!("|x_{}| < {:e}", g.coordinate, g.threshold))
}

/// Fixed-step RK4 from `x0` over `[0, t_end]`.
pub fn rk4_integrate(
    f: &NumericField,
    x0: &[f64],
    t_end: f64,
    dt: f64,
    guards: &[SingularGuard],
) -> Result<Trajectory> {
    if dt <= 0.0 || !dt.is_finite() {
        return Err(Error::InvalidArgument("dt must be positive".into()));
    }
    if t_end < 0.0 || !t_end.is_finite() {
        return Err(Error::InvalidArgument("t_end must be non-negative".into()));
    }
    if x0.len() != f.chart.dimension() {
        return Err(Error::InvalidArgument(format!(
            "initial state has {} entries, the chart has {} coordinates",
            x0.len(),
            f.chart.dimension()
        )));
    }
    if let Some(msg) = guard_violation(x0, guards) {
        return Err(Error::InvalidArgument(format!("initial state is singular: {msg}")));
    }
    let steps = (t_end / dt).round() as usize;
    let mut traj = Trajectory {
        times: vec![0.0],
        states: vec![x0.to_vec()],
        method: Method::Rk4,
        step: dt,
        aborted: None,
    };
    let mut x = x0.to_vec();
    for s in 1..=steps {
        x = rk4_step(f, &x, dt);
        if let Some(msg) = guard_violation(&x, guards) {
            traj.aborted = Some(format!("stopped at t = {}: {msg}", s as f64 * dt));
            break;
        }
        traj.times.push(s as f64 * dt);
        traj.states.push(x.clone());
    }
    Ok(traj)
}

#[derive(Clone, Debug, Serialize)]
pub struct Drift {
    pub integral: String,
    pub initial: f64,
    /// `max_t |I(t) − I(0)| / |I(0)|`, or the absolute drift when `I(0) = 0`.
    pub max_relative_drift: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConservationReport {
    pub drifts: Vec<Drift>,
}

impl ConservationReport {
    pub fn max_drift(&self) -> f64 {
        self.drifts.iter().map(|d| d.max_relative_drift).fold(0.0, f64::max)
    }
}

pub fn conservation_report(
    traj: &Trajectory,
    chart: &Chart,
    integrals: &[RationalFunction],
    bindings: &BTreeMap<String, f64>,
) -> Result<ConservationReport> {
    let drifts = integrals
        .iter()
        .map(|f| {
            let c = CompiledFunction::compile(f, chart, bindings)?;
            let initial = c.eval(&traj.states[0]);
            let scale = if initial == 0.0 { 1.0 } else { initial.abs() };
            let max = traj
                .states
                .iter()
                .map(|x| (c.eval(x) - initial).abs() / scale)
                .fold(0.0, f64::max);
            Ok(Drift {
                integral: crate::parse::format_rational_function(f, chart),
                initial,
                max_relative_drift: max,
            })
        })
        .collect::<Result<_>>()?;
    Ok(ConservationReport { drifts })
}

#[derive(Clone, Debug, Serialize)]
pub struct NewtonReport {
    pub interior_points: usize,
    pub max_relative_error: f64,
    /// Worst point: `(t, r, r̈ by central differences, 4/r³)`.
    pub worst: (f64, f64, f64, f64),
}

/// Compares `(r_{i+1} − 2r_i + r_{i−1})/dt²` with `4/r_i³` at interior points.
pub fn newton_equivalence_check(traj: &Trajectory, r_index: usize) -> Result<NewtonReport> {
    if traj.len() < 3 {
        return Err(Error::InvalidArgument("need at least three states".into()));
    }
    let dt = traj.step;
    let mut report = NewtonReport {
        interior_points: traj.len() - 2,
        max_relative_error: 0.0,
        worst: (0.0, 0.0, 0.0, 0.0),
    };
    for i in 1..traj.len() - 1 {
        let r = traj.states[i][r_index];
        let accel = (traj.states[i + 1][r_index] - 2.0 * r + traj.states[i - 1][r_index]) / (dt * dt);
        let expected = 4.0 / (r * r * r);
        let err = (accel - expected).abs() / expected.abs();
        if err >= report.max_relative_error {
            report.max_relative_error = err;
            report.worst = (traj.times[i], r, accel, expected);
        }
    }
    Ok(report)
}

/// A Nambu-Poisson structure with its distinguished Hamiltonians and numeric defaults.
#[derive(Clone, Debug)]
pub struct ExampleSystem {
    pub name: &'static str,
    pub structure: NambuStructure,
    pub hamiltonians: Vec<RationalFunction>,
    pub hamiltonian_names: Vec<&'static str>,
    pub bindings: BTreeMap<String, f64>,
    pub initial_state: Vec<f64>,
    pub guards: Vec<SingularGuard>,
}

impl ExampleSystem {
    pub fn chart(&self) -> &Arc<Chart> {
        self.structure.chart()
    }

    /// The field generated by all the Hamiltonians.
    pub fn field(&self) -> Result<VectorField> {
        self.structure.hamiltonian_vf(&self.hamiltonians)
    }

    pub fn integrate(&self, x0: &[f64], t_end: f64, dt: f64) -> Result<Trajectory> {
        let f = compile_numeric(&self.field()?, &self.bindings)?;
        rk4_integrate(&f, x0, t_end, dt, &self.guards)
    }
}

/// Action-angle Kepler problem: chart `J1, J2, J3, phi1, phi2, phi3`, parameters `m, k`,
/// `P = 2mk²/(J1+J2+J3)³ ∂J1∧∂J2∧∂J3∧∂φ1∧∂φ2∧∂φ3` and `h = (J1, J2, J3, φ1−φ2, φ2−φ3)`.
pub fn kepler_system() -> ExampleSystem {
    let chart = Arc::new(
        Chart::new(&["J1", "J2", "J3", "phi1", "phi2", "phi3"], &["m", "k"]).expect("valid chart"),
    );
    let p = parse_multivector("2*m*k^2/(J1+J2+J3)^3 * @J1^@J2^@J3^@phi1^@phi2^@phi3", &chart).expect("valid P");
    let hamiltonians = ["J1", "J2", "J3", "phi1 - phi2", "phi2 - phi3"]
        .iter()
        .map(|t| parse_function(t, &chart).expect("valid h"))
        .collect();
    ExampleSystem {
        name: "kepler",
        structure: NambuStructure::new(6, p).expect("6-vector"),
        hamiltonians,
        hamiltonian_names: vec!["h1", "h2", "h3", "h4", "h5"],
        bindings: [("m".to_string(), 1.0), ("k".to_string(), 1.0)].into(),
        initial_state: vec![1.0, 1.0, 1.0, 0.3, 0.2, 0.1],
        guards: Vec::new(),
    }
}

/// Relative Calogero-Moser dynamics: chart `z, r, p_z, p_r`, `P = ∂r∧∂p_z∧∂p_r`,
/// `H = p_z² + p_r p_z + p_r²/2 + 1/r²` and `K = 2p_z + p_r`.
pub fn calogero_system() -> ExampleSystem {
    let chart = Arc::new(Chart::with_coordinates(&["z", "r", "p_z", "p_r"]).expect("valid chart"));
    let p = parse_multivector("@r^@p_z^@p_r", &chart).expect("valid P");
    let hamiltonians = ["p_z^2 + p_r*p_z + p_r^2/2 + 1/r^2", "2*p_z + p_r"]
        .iter()
        .map(|t| parse_function(t, &chart).expect("valid H, K"))
        .collect();
    ExampleSystem {
        name: "calogero",
        structure: NambuStructure::new(3, p).expect("3-vector"),
        hamiltonians,
        hamiltonian_names: vec!["H", "K"],
        bindings: BTreeMap::new(),
        initial_state: vec![0.0, 1.0, 0.3, 0.2],
        guards: vec![SingularGuard {
            coordinate: 1,
            threshold: 1e-6,
        }],
    }
}

/// Looks a system up by name.
pub fn example_system(name: &str) -> Result<ExampleSystem> {
    match name {
        "kepler" => Ok(kepler_system()),
        "calogero" => Ok(calogero_system()),
        other => Err(Error::InvalidArgument(format!("unknown system `{other}` (kepler, calogero)"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::Sampler;
    use crate::symbolic::{ratio, Rational};
    use rand::Rng;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1e-300)
    }

    #[test]
    fn numeric_field_examples() {
        let cm = calogero_system();
        let f = compile_numeric(&cm.field().unwrap(), &cm.bindings).unwrap();
        assert_eq!(f.eval(&[0.0, 1.0, 0.3, 0.2]), vec![0.0, -0.2, 2.0, -4.0]);

        let kep = kepler_system();
        let f = compile_numeric(&kep.field().unwrap(), &kep.bindings).unwrap();
        let v = f.eval(&[1.0, 1.0, 1.0, 0.0, 0.0, 0.0]);
        assert_eq!(&v[..3], &[0.0, 0.0, 0.0]);
        for phi in &v[3..] {
            assert!(close(*phi, 2.0 / 27.0, 1e-15));
        }

        let unbound = compile_numeric(&kep.field().unwrap(), &BTreeMap::new());
        assert_eq!(unbound.unwrap_err(), Error::UnboundParameter("m".into()));

        let zero = compile_numeric(&VectorField::zero(cm.chart()), &BTreeMap::new()).unwrap();
        assert_eq!(zero.eval(&[1.0, 2.0, 3.0, 4.0]), vec![0.0; 4]);
    }

    #[test]
    fn numeric_matches_exact_at_random_points() {
        for sys in [kepler_system(), calogero_system()] {
            let field = sys.field().unwrap();
            let f = compile_numeric(&field, &sys.bindings).unwrap();
            let chart = sys.chart();
            let mut s = Sampler::new(chart, 5);
            for _ in 0..20 {
                let mut point: Vec<Rational> = (0..chart.dimension())
                    .map(|_| ratio(s.rng().gen_range(1..40), s.rng().gen_range(1..9)))
                    .collect();
                let xs: Vec<f64> = point.iter().map(|q| q.to_f64().unwrap()).collect();
                point.extend(chart.parameters().iter().map(|p| {
                    Rational::from_integer((sys.bindings[p] as i64).into())
                }));
                let numeric = f.eval(&xs);
                for (i, c) in field.components().iter().enumerate() {
                    let exact = c.eval(&point).unwrap().to_f64().unwrap();
                    assert!(close(numeric[i], exact, 1e-12) || (exact == 0.0 && numeric[i] == 0.0));
                }
            }
        }
    }

    #[test]
    fn guard_stops_before_singularity() {
        let cm = calogero_system();
        let c = cm.chart();
        let inward = VectorField::from_components(c, vec![c.zero(), -&c.one(), c.zero(), c.zero()]);
        let f = compile_numeric(&inward, &BTreeMap::new()).unwrap();
        let traj = rk4_integrate(&f, &[0.0, 0.5, 0.0, 0.0], 1.0, 0.125, &cm.guards).unwrap();
        assert!(traj.aborted.is_some());
        assert_eq!(traj.len(), 4);
        assert!(traj.states.iter().all(|x| x[1].abs() >= 1e-6));
        assert!(cm.integrate(&[0.0, 0.0, 0.0, 0.0], 1.0, 1e-3).is_err());
    }

    #[test]
    fn zero_field_is_constant() {
        let cm = calogero_system();
        let f = compile_numeric(&VectorField::zero(cm.chart()), &BTreeMap::new()).unwrap();
        let traj = rk4_integrate(&f, &[1.0, 2.0, 3.0, 4.0], 1.0, 0.1, &[]).unwrap();
        assert_eq!(traj.len(), 11);
        assert!(traj.states.iter().all(|x| x == &[1.0, 2.0, 3.0, 4.0]));
        let r = conservation_report(&traj, cm.chart(), &cm.hamiltonians, &cm.bindings).unwrap();
        assert_eq!(r.max_drift(), 0.0);
    }

    #[test]
    fn kepler_flow_is_linear_in_the_angles() {
        let kep = kepler_system();
        let traj = kep.integrate(&kep.initial_state, 1.0, 1e-3).unwrap();
        let x = traj.last();
        assert_eq!(&x[..3], &[1.0, 1.0, 1.0]);
        for i in 0..3 {
            let expected = kep.initial_state[3 + i] + 2.0 / 27.0;
            assert!(close(x[3 + i], expected, 1e-9));
        }
    }
}
