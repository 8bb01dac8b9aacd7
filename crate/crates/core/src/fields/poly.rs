//! Polynomial fields and weights for manufactured-solution tests.
//!
//! Text syntax: components separated by `,`, each a sum of terms such as
//! `3*x1^2*x2 - x3 + 0.5`. Variables are `x1 x2 x3` (or `x y z`).

use nalgebra::Matrix3;

use crate::error::{Error, Result};
use crate::fields::{FieldSampler, WeightFunction};
use crate::geometry::Vec3;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Poly {
    pub terms: Vec<(f64, [u32; 3])>,
}

impl Poly {
    pub fn constant(c: f64) -> Self {
        Self { terms: vec![(c, [0, 0, 0])] }
    }

    pub fn monomial(c: f64, e: [u32; 3]) -> Self {
        Self { terms: vec![(c, e)] }
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().filter(|t| t.0 != 0.0).map(|t| t.1.iter().sum()).max().unwrap_or(0)
    }

    pub fn eval(&self, x: &Vec3) -> f64 {
        self.terms
            .iter()
            .map(|(c, e)| c * x.x.powi(e[0] as i32) * x.y.powi(e[1] as i32) * x.z.powi(e[2] as i32))
            .sum()
    }

    pub fn derivative(&self, k: usize) -> Poly {
        let terms = self
            .terms
            .iter()
            .filter(|(_, e)| e[k] > 0)
            .map(|(c, e)| {
                let mut e2 = *e;
                e2[k] -= 1;
                (c * f64::from(e[k]), e2)
            })
            .collect();
        Poly { terms }
    }

    pub fn parse(s: &str) -> Result<Poly> {
        let bad = || Error::InvalidInput(format!("cannot parse polynomial `{s}`"));
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(bad());
        }
        // Split at top-level signs that are not part of an exponent or float.
        let chars: Vec<char> = t.chars().collect();
        let mut pieces = Vec::new();
        let mut start = 0;
        for i in 1..chars.len() {
            if (chars[i] == '+' || chars[i] == '-')
                && chars[i - 1] != '^'
                && chars[i - 1] != '*'
                && !(chars[i - 1] == 'e' && i >= 2 && chars[i - 2].is_ascii_digit())
            {
                pieces.push(chars[start..i].iter().collect::<String>());
                start = i;
            }
        }
        pieces.push(chars[start..].iter().collect());
        let mut terms = Vec::new();
        for p in pieces {
            let (sign, body) = match p.strip_prefix('-') {
                Some(b) => (-1.0, b.to_string()),
                None => (1.0, p.trim_start_matches('+').to_string()),
            };
            if body.is_empty() {
                return Err(bad());
            }
            let mut coef = sign;
            let mut e = [0u32; 3];
            for f in body.split('*') {
                let (base, pow) = match f.split_once('^') {
                    Some((b, p)) => (b, p.parse::<u32>().map_err(|_| bad())?),
                    None => (f, 1),
                };
                let var = match base {
                    "x1" | "x" => Some(0),
                    "x2" | "y" => Some(1),
                    "x3" | "z" => Some(2),
                    _ => None,
                };
                match var {
                    Some(k) => e[k] += pow,
                    None => coef *= base.parse::<f64>().map_err(|_| bad())?.powi(pow as i32),
                }
            }
            terms.push((coef, e));
        }
        Ok(Poly { terms })
    }
}

#[derive(Debug, Clone)]
pub struct PolynomialField {
    pub dim: usize,
    pub comps: [Poly; 3],
    /// grad[i][k] = ∂u_i/∂x_k
    grad: Vec<Vec<Poly>>,
    name: String,
}

/// Vector field with polynomial components of degree at most 2.
pub fn make_polynomial_field(dim: usize, comps: [Poly; 3]) -> Result<PolynomialField> {
    if !(dim == 2 || dim == 3) {
        return Err(Error::InvalidInput(format!("field dimension {dim}")));
    }
    if let Some(d) = comps.iter().map(Poly::degree).find(|&d| d > 2) {
        return Err(Error::InvalidInput(format!("polynomial field degree {d} exceeds 2")));
    }
    let uses_z = comps.iter().any(|p| p.terms.iter().any(|t| t.0 != 0.0 && t.1[2] > 0));
    let has_u3 = comps[2].terms.iter().any(|t| t.0 != 0.0);
    if dim == 2 && (uses_z || has_u3) {
        return Err(Error::InvalidInput("planar field must not involve the third coordinate".into()));
    }
    let grad = comps.iter().map(|p| (0..3).map(|k| p.derivative(k)).collect()).collect();
    Ok(PolynomialField { dim, comps, grad, name: "poly".into() })
}

impl PolynomialField {
    /// Parses `"x2,-x1,0"`-style component lists.
    pub fn parse(dim: usize, s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 3 && !(dim == 2 && parts.len() == 2) {
            return Err(Error::InvalidInput(format!("expected 3 components in `{s}`")));
        }
        let c0 = Poly::parse(parts[0])?;
        let c1 = Poly::parse(parts[1])?;
        let c2 = if parts.len() == 3 { Poly::parse(parts[2])? } else { Poly::default() };
        let mut f = make_polynomial_field(dim, [c0, c1, c2])?;
        f.name = format!("poly:{s}");
        Ok(f)
    }

    pub fn jacobian(&self, x: &Vec3) -> Matrix3<f64> {
        Matrix3::from_fn(|i, k| self.grad[i][k].eval(x))
    }
}

impl FieldSampler for PolynomialField {
    fn dim(&self) -> usize {
        self.dim
    }
    fn value(&self, x: &Vec3) -> Vec3 {
        Vec3::new(self.comps[0].eval(x), self.comps[1].eval(x), self.comps[2].eval(x))
    }
    fn curl(&self, x: &Vec3) -> Option<Vec3> {
        Some(crate::fields::fd::curl_of_jacobian(&self.jacobian(x), self.dim))
    }
    fn div(&self, x: &Vec3) -> Option<f64> {
        let j = self.jacobian(x);
        Some((0..self.dim).map(|k| j[(k, k)]).sum())
    }
    fn tag(&self) -> String {
        self.name.clone()
    }
}

/// Scalar polynomial weight of degree at most 3.
#[derive(Debug, Clone)]
pub struct PolynomialWeight {
    pub dim: usize,
    pub phi: Poly,
    grad: Vec<Poly>,
    hess: Vec<Vec<Poly>>,
}

pub fn make_polynomial_weight(dim: usize, phi: Poly) -> Result<PolynomialWeight> {
    if phi.degree() > 3 {
        return Err(Error::InvalidInput(format!("weight degree {} exceeds 3", phi.degree())));
    }
    let grad: Vec<Poly> = (0..3).map(|k| phi.derivative(k)).collect();
    let hess = grad.iter().map(|g| (0..3).map(|k| g.derivative(k)).collect()).collect();
    Ok(PolynomialWeight { dim, phi, grad, hess })
}

impl WeightFunction for PolynomialWeight {
    fn dim(&self) -> usize {
        self.dim
    }
    fn value(&self, x: &Vec3) -> Result<f64> {
        Ok(self.phi.eval(x))
    }
    fn grad(&self, x: &Vec3) -> Result<Vec3> {
        let mut g = Vec3::new(self.grad[0].eval(x), self.grad[1].eval(x), self.grad[2].eval(x));
        if self.dim == 2 {
            g.z = 0.0;
        }
        Ok(g)
    }
    fn hessian(&self, x: &Vec3) -> Result<Matrix3<f64>> {
        let d = self.dim;
        Ok(Matrix3::from_fn(|i, k| if i < d && k < d { self.hess[i][k].eval(x) } else { 0.0 }))
    }
    fn laplacian(&self, x: &Vec3) -> Result<f64> {
        Ok(self.hessian(x)?.trace())
    }
    fn tag(&self) -> String {
        "poly-weight".into()
    }
}
