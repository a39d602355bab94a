use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{EdmError, Result};
use crate::numeric::CompensatedSum;

pub const DEFAULT_TERM_CAP: usize = 2_000_000;

pub type Exponents = Vec<u8>;

/// Real polynomial in named variables, stored as exponent vector -> coefficient.
/// Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolynomialJson", into = "PolynomialJson")]
pub struct SparsePolynomial {
    variables: Vec<String>,
    terms: BTreeMap<Exponents, f64>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exps: Exponents,
    coef: f64,
}

#[derive(Serialize, Deserialize)]
struct PolynomialJson {
    vars: Vec<String>,
    terms: Vec<TermJson>,
}

impl From<SparsePolynomial> for PolynomialJson {
    fn from(p: SparsePolynomial) -> Self {
        PolynomialJson {
            vars: p.variables,
            terms: p.terms.into_iter().map(|(exps, coef)| TermJson { exps, coef }).collect(),
        }
    }
}

impl TryFrom<PolynomialJson> for SparsePolynomial {
    type Error = EdmError;

    fn try_from(j: PolynomialJson) -> Result<Self> {
        let mut acc = Accumulator::default();
        for t in j.terms {
            if t.exps.len() != j.vars.len() {
                return Err(EdmError::DimensionMismatch { expected: j.vars.len(), found: t.exps.len() });
            }
            if !t.coef.is_finite() {
                return Err(EdmError::InvalidParams("polynomial coefficients must be finite".into()));
            }
            acc.add(t.exps, t.coef);
        }
        Ok(acc.finish(j.vars))
    }
}

/// Names `s0, s1, ..`.
pub fn indexed_variables(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("s{i}")).collect()
}

#[derive(Default)]
pub(crate) struct Accumulator {
    sums: HashMap<Exponents, CompensatedSum>,
}

impl Accumulator {
    pub(crate) fn add(&mut self, exps: Exponents, coef: f64) {
        self.sums.entry(exps).or_default().add(coef);
    }

    pub(crate) fn len(&self) -> usize {
        self.sums.len()
    }

    pub(crate) fn check_cap(&self, cap: usize) -> Result<()> {
        if self.sums.len() > cap {
            Err(EdmError::DegreeOverflow(format!("polynomial exceeds {cap} terms")))
        } else {
            Ok(())
        }
    }

    pub(crate) fn into_terms(self) -> BTreeMap<Exponents, f64> {
        self.sums.into_iter().map(|(e, s)| (e, s.value())).filter(|(_, c)| *c != 0.0).collect()
    }

    pub(crate) fn finish(self, variables: Vec<String>) -> SparsePolynomial {
        SparsePolynomial { variables, terms: self.into_terms() }
    }
}

pub(crate) fn bump(e: u8, by: u8) -> Result<u8> {
    e.checked_add(by).ok_or_else(|| EdmError::DegreeOverflow("exponent exceeds 255".into()))
}

impl SparsePolynomial {
    pub fn zero(variables: Vec<String>) -> Self {
        SparsePolynomial { variables, terms: BTreeMap::new() }
    }

    pub fn constant(variables: Vec<String>, c: f64) -> Self {
        let mut p = Self::zero(variables);
        if c != 0.0 {
            p.terms.insert(vec![0; p.variables.len()], c);
        }
        p
    }

    /// `constant + sum coef * var`.
    pub fn linear(variables: Vec<String>, constant: f64, coefs: &[(usize, f64)]) -> Self {
        let n = variables.len();
        let mut acc = Accumulator::default();
        acc.add(vec![0; n], constant);
        for &(i, c) in coefs {
            let mut e = vec![0; n];
            e[i] = 1;
            acc.add(e, c);
        }
        acc.finish(variables)
    }

    pub(crate) fn from_terms(variables: Vec<String>, terms: BTreeMap<Exponents, f64>) -> Self {
        SparsePolynomial { variables, terms }
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn num_variables(&self) -> usize {
        self.variables.len()
    }

    pub fn terms(&self) -> &BTreeMap<Exponents, f64> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; zero for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(|e| e.iter().map(|&a| a as usize).sum()).max().unwrap_or(0)
    }

    pub fn coefficient(&self, exps: &[u8]) -> f64 {
        self.terms.get(exps).copied().unwrap_or(0.0)
    }

    pub fn evaluate(&self, point: &[f64]) -> Result<f64> {
        if point.len() != self.variables.len() {
            return Err(EdmError::DimensionMismatch { expected: self.variables.len(), found: point.len() });
        }
        Ok(self
            .terms
            .iter()
            .map(|(e, c)| c * e.iter().zip(point).map(|(&a, x)| x.powi(a as i32)).product::<f64>())
            .collect::<CompensatedSum>()
            .value())
    }

    pub fn scale(&self, factor: f64) -> Self {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), c * factor)).filter(|(_, c)| *c != 0.0).collect();
        SparsePolynomial { variables: self.variables.clone(), terms }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_variables(other)?;
        let mut acc = Accumulator::default();
        for (e, c) in self.terms.iter().chain(&other.terms) {
            acc.add(e.clone(), *c);
        }
        Ok(acc.finish(self.variables.clone()))
    }

    pub fn mul(&self, other: &Self, cap: usize) -> Result<Self> {
        self.same_variables(other)?;
        let mut acc = Accumulator::default();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(&a, &b)| bump(a, b)).collect::<Result<Exponents>>()?;
                acc.add(e, ca * cb);
            }
            acc.check_cap(cap)?;
        }
        Ok(acc.finish(self.variables.clone()))
    }

    /// Multiplies by `(constant + var)`.
    pub fn mul_affine(&self, constant: f64, var: usize, cap: usize) -> Result<Self> {
        let mut acc = Accumulator::default();
        for (e, c) in &self.terms {
            if constant != 0.0 {
                acc.add(e.clone(), c * constant);
            }
            let mut up = e.clone();
            up[var] = bump(up[var], 1)?;
            acc.add(up, *c);
        }
        acc.check_cap(cap)?;
        Ok(acc.finish(self.variables.clone()))
    }

    fn same_variables(&self, other: &Self) -> Result<()> {
        if self.variables == other.variables {
            Ok(())
        } else {
            Err(EdmError::DimensionMismatch { expected: self.variables.len(), found: other.variables.len() })
        }
    }
}

impl std::fmt::Display for SparsePolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for (name, &a) in self.variables.iter().zip(e) {
                match a {
                    0 => {}
                    1 => write!(f, "*{name}")?,
                    _ => write!(f, "*{name}^{a}")?,
                }
            }
        }
        Ok(())
    }
}
