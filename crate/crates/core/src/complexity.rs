//! Step-count measurements: exact costs, growth profiles over input sizes,
//! loop nesting depth and the slowdown of running a program through the
//! universal interpreter.

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::encoding::{encode, EncodeError};
use crate::nat::Nat;
use crate::semantics::{run, Fuel, Outcome};
use crate::syntax::{pretty, Program};
use crate::universal::universal_executable;

/// Version tag of the cost model that produced a measurement.
pub const COST_MODEL: &str = "unit-cost/1";

/// Steps of a halting run, `None` when `fuel` runs out first.
pub fn steps(p: &Program, inputs: &[Nat], fuel: u64) -> Option<u64> {
    match run(p, inputs, Fuel::Limited(fuel)) {
        Ok(Outcome::Halted { steps, .. }) => Some(steps),
        _ => None,
    }
}

/// Maximum nesting of `loop` and `while`. An `if` adds no level of its own.
pub fn nesting_depth(p: &Program) -> usize {
    match p {
        Program::Loop { body, .. } | Program::While { body, .. } => 1 + nesting_depth(body),
        other => other.children().into_iter().map(nesting_depth).max().unwrap_or(0),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProfileRow {
    pub n: u64,
    pub inputs: Vec<Nat>,
    /// Steps charged, which equals the fuel when the run was cut off.
    pub steps: u64,
    pub output: Option<Nat>,
    pub exhausted: bool,
}

/// Step counts of one program on the inputs `(n, ..., n)` for several `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GrowthProfile {
    pub program: String,
    pub cost_model: String,
    pub rows: Vec<ProfileRow>,
}

/// Runs `p` on `(n, ..., n)` with `arity` copies of `n` for every size.
///
/// Sizes are measured in parallel; rows come back sorted by `n` with
/// duplicates removed.
pub fn growth_profile(p: &Program, arity: usize, sizes: &[u64], fuel: u64) -> GrowthProfile {
    let mut sizes = sizes.to_vec();
    sizes.sort_unstable();
    sizes.dedup();
    let rows = sizes
        .par_iter()
        .map(|&n| {
            let inputs = vec![Nat::small(n); arity];
            let out = run(p, &inputs, Fuel::Limited(fuel)).expect("limited fuel never fails");
            ProfileRow {
                n,
                steps: out.steps(),
                output: out.value().cloned(),
                exhausted: !out.is_halted(),
                inputs,
            }
        })
        .collect();
    GrowthProfile { program: pretty(p), cost_model: COST_MODEL.to_string(), rows }
}

impl GrowthProfile {
    /// CSV with the header `n,steps,output,exhausted`; exhausted rows leave
    /// `output` empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,steps,output,exhausted\n");
        for r in &self.rows {
            let value = r.output.as_ref().map(|v| v.to_string()).unwrap_or_default();
            out.push_str(&format!("{},{},{},{}\n", r.n, r.steps, value, r.exhausted));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("profiles serialize")
    }

    /// `(n, t(n))` for the rows that halted.
    pub fn points(&self) -> Vec<(u64, u64)> {
        self.rows.iter().filter(|r| !r.exhausted).map(|r| (r.n, r.steps)).collect()
    }

    /// `k`-th forward differences of `t` over halted rows with `n >= from`.
    /// Only meaningful for evenly spaced sizes; `None` otherwise.
    pub fn differences(&self, k: usize, from: u64) -> Option<Vec<i128>> {
        let pts: Vec<(u64, u64)> = self.points().into_iter().filter(|&(n, _)| n >= from).collect();
        let evenly = pts.windows(3).all(|w| w[1].0 - w[0].0 == w[2].0 - w[1].0);
        if !evenly {
            return None;
        }
        let mut d: Vec<i128> = pts.iter().map(|&(_, t)| t as i128).collect();
        for _ in 0..k {
            d = d.windows(2).map(|w| w[1] - w[0]).collect();
        }
        Some(d)
    }

    /// Coefficients `c0, c1, ...` of the polynomial of degree at most
    /// `degree` through the first `degree + 1` halted points, provided every
    /// other halted point lies on it too.
    pub fn exact_fit(&self, degree: usize) -> Option<Vec<Ratio<i128>>> {
        exact_fit(&self.points(), degree)
    }
}

/// See [`GrowthProfile::exact_fit`].
pub fn exact_fit(points: &[(u64, u64)], degree: usize) -> Option<Vec<Ratio<i128>>> {
    if points.len() < degree + 1 {
        return None;
    }
    let xs: Vec<Ratio<i128>> = points.iter().map(|&(n, _)| Ratio::from(n as i128)).collect();
    let ys: Vec<Ratio<i128>> = points.iter().map(|&(_, t)| Ratio::from(t as i128)).collect();
    let k = degree + 1;

    // Newton divided differences on the first k points.
    let mut coef = ys[..k].to_vec();
    for j in 1..k {
        for i in (j..k).rev() {
            let dx = xs[i] - xs[i - j];
            if dx == Ratio::from(0) {
                return None;
            }
            coef[i] = (coef[i] - coef[i - 1]) / dx;
        }
    }
    // Expand the Newton form into monomial coefficients.
    let mut poly = vec![Ratio::from(0); k];
    for j in (0..k).rev() {
        let mut next = vec![Ratio::from(0); k];
        for (d, &c) in poly.iter().enumerate() {
            if d + 1 < k {
                next[d + 1] += c;
            }
            next[d] -= c * xs[j];
        }
        next[0] += coef[j];
        poly = next;
    }
    let eval = |x: Ratio<i128>| poly.iter().rev().fold(Ratio::from(0), |acc, &c| acc * x + c);
    xs.iter().zip(&ys).all(|(&x, &y)| eval(x) == y).then_some(poly)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OverheadError {
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error("the universal program takes one input, got {0}")]
    Arity(usize),
}

/// Steps of the universal program on `[encode(p), x]` divided by the steps
/// of `p` on `[x]`. `Ok(None)` when either run exhausts `fuel`.
pub fn overhead(p: &Program, inputs: &[Nat], fuel: u64) -> Result<Option<Ratio<u64>>, OverheadError> {
    if inputs.len() > 1 {
        return Err(OverheadError::Arity(inputs.len()));
    }
    let code = encode(p)?;
    let x = inputs.first().cloned().unwrap_or(Nat::ZERO);
    let Some(direct) = steps(p, std::slice::from_ref(&x), fuel) else {
        return Ok(None);
    };
    let via = universal_executable().run(&[code, x], Fuel::Limited(fuel)).expect("limited fuel never fails");
    if !via.is_halted() || direct == 0 {
        return Ok(None);
    }
    Ok(Some(Ratio::new(via.steps(), direct)))
}
