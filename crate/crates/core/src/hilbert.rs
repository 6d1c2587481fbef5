//! Hilbert series as rational functions `N(t) / ∏ (1 - t^w)`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// A monomial ideal given by a minimal set of exponent vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialIdeal {
    nvars: usize,
    gens: Vec<Vec<u32>>,
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn minimalize(mut gens: Vec<Vec<u32>>) -> Vec<Vec<u32>> {
    gens.sort_by(|a, b| {
        let da: u32 = a.iter().sum();
        let db: u32 = b.iter().sum();
        da.cmp(&db).then_with(|| b.cmp(a))
    });
    gens.dedup();
    let mut out: Vec<Vec<u32>> = Vec::with_capacity(gens.len());
    for g in gens {
        if !out.iter().any(|h| divides(h, &g)) {
            out.push(g);
        }
    }
    out
}

impl MonomialIdeal {
    /// Builds the ideal, discarding non-minimal generators.
    pub fn new(nvars: usize, gens: Vec<Vec<u32>>) -> Self {
        for g in &gens {
            assert_eq!(g.len(), nvars, "exponent vector length mismatch");
        }
        MonomialIdeal {
            nvars,
            gens: minimalize(gens),
        }
    }

    pub fn zero(nvars: usize) -> Self {
        MonomialIdeal {
            nvars,
            gens: Vec::new(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[Vec<u32>] {
        &self.gens
    }

    pub fn contains(&self, exps: &[u32]) -> bool {
        self.gens.iter().any(|g| divides(g, exps))
    }
}

/// A rational function `numerator(t) / ∏ (1 - t^{w_i})` with integer numerator.
#[derive(Debug, Clone, Serialize)]
pub struct HilbertSeries {
    numerator: Vec<i128>,
    #[serde(rename = "denominator_weights")]
    weights: Vec<u32>,
}

/// Truncated sequence of graded dimensions `c_0, …, c_D`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GradedDims(pub Vec<u128>);

impl GradedDims {
    pub fn as_slice(&self) -> &[u128] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }
}

fn trim(v: &mut Vec<i128>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn poly_mul(a: &[i128], b: &[i128]) -> Vec<i128> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0i128; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

/// Multiplies by `(1 - t^w)`.
fn mul_one_minus(a: &[i128], w: u32) -> Vec<i128> {
    let w = w as usize;
    let mut out = vec![0i128; a.len() + w];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
        out[i + w] -= x;
    }
    trim(&mut out);
    out
}

/// Exact quotient by `(1 - t^w)`, if it divides.
fn div_one_minus(a: &[i128], w: u32) -> Option<Vec<i128>> {
    let w = w as usize;
    if a.is_empty() {
        return Some(Vec::new());
    }
    if a.len() <= w {
        return None;
    }
    // a = q (1 - t^w)  =>  q_k = a_k + q_{k-w}
    let qlen = a.len() - w;
    let mut q = vec![0i128; qlen];
    for k in 0..qlen {
        q[k] = a[k] + if k >= w { q[k - w] } else { 0 };
    }
    if mul_one_minus(&q, w as u32) == a {
        Some(q)
    } else {
        None
    }
}

impl HilbertSeries {
    /// Series with the given numerator and denominator weights, not canonicalized.
    pub fn new(mut numerator: Vec<i128>, mut weights: Vec<u32>) -> Self {
        assert!(weights.iter().all(|&w| w > 0), "denominator weights must be positive");
        trim(&mut numerator);
        weights.sort_unstable();
        HilbertSeries { numerator, weights }
    }

    pub fn one() -> Self {
        Self::new(vec![1], Vec::new())
    }

    pub fn numerator(&self) -> &[i128] {
        &self.numerator
    }

    pub fn denominator_weights(&self) -> &[u32] {
        &self.weights
    }

    /// Cancels `(1 - t^w)` factors against the numerator, largest `w` first.
    pub fn canonical(&self) -> Self {
        let mut num = self.numerator.clone();
        let mut kept = Vec::new();
        for &w in self.weights.iter().rev() {
            match div_one_minus(&num, w) {
                Some(q) if !num.is_empty() => num = q,
                _ => kept.push(w),
            }
        }
        Self::new(num, kept)
    }

    /// Exact coefficients `c_0..c_D`; a negative coefficient is an integrity error.
    pub fn expand(&self, max_degree: usize) -> Result<GradedDims> {
        let raw = self.expand_signed(max_degree)?;
        raw.iter()
            .enumerate()
            .map(|(d, &c)| {
                u128::try_from(c).map_err(|_| {
                    Error::Integrity(format!("negative coefficient {c} at degree {d} in {self}"))
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(GradedDims)
    }

    /// Coefficients without the sign check.
    pub fn expand_signed(&self, max_degree: usize) -> Result<Vec<i128>> {
        let mut c = vec![0i128; max_degree + 1];
        for (k, x) in self.numerator.iter().enumerate().take(max_degree + 1) {
            c[k] = *x;
        }
        let overflow = || Error::Integrity(format!("coefficient overflow expanding {self}"));
        for &w in &self.weights {
            let w = w as usize;
            for k in w..=max_degree {
                c[k] = c[k].checked_add(c[k - w]).ok_or_else(overflow)?;
            }
        }
        Ok(c)
    }

    /// Pole order at `t = 1`.
    pub fn krull_dim(&self) -> usize {
        let mut num = self.numerator.clone();
        if num.is_empty() {
            return 0;
        }
        let mut mult = 0;
        while num.iter().sum::<i128>() == 0 {
            num = div_one_minus(&num, 1).expect("root at 1 implies divisibility by 1 - t");
            mult += 1;
        }
        self.weights.len() - mult.min(self.weights.len())
    }

    pub fn product(&self, other: &HilbertSeries) -> HilbertSeries {
        let mut w = self.weights.clone();
        w.extend_from_slice(&other.weights);
        HilbertSeries::new(poly_mul(&self.numerator, &other.numerator), w)
    }

    /// Equality of rational functions by cross-multiplication.
    pub fn series_eq(&self, other: &HilbertSeries) -> bool {
        let mut lhs = self.numerator.clone();
        for &w in &other.weights {
            lhs = mul_one_minus(&lhs, w);
        }
        let mut rhs = other.numerator.clone();
        for &w in &self.weights {
            rhs = mul_one_minus(&rhs, w);
        }
        lhs == rhs
    }
}

/// `∏ 1/(1 - t^d)` over `gens`, times `(1 - t^e)` if a relation degree is given.
///
/// The result is left in this presentation form; call [`HilbertSeries::canonical`]
/// to cancel common factors.
pub fn series_from_generator_degrees(gens: &[u32], relation_degree: Option<u32>) -> HilbertSeries {
    let num = match relation_degree {
        Some(e) => mul_one_minus(&[1], e),
        None => vec![1],
    };
    HilbertSeries::new(num, gens.to_vec())
}

pub fn series_product(a: &HilbertSeries, b: &HilbertSeries) -> HilbertSeries {
    a.product(b).canonical()
}

pub fn series_eq(a: &HilbertSeries, b: &HilbertSeries) -> bool {
    a.series_eq(b)
}

pub fn krull_dim(s: &HilbertSeries) -> usize {
    s.krull_dim()
}

/// Hilbert series of `k[x_1..x_n] / I` for a monomial ideal `I`.
pub fn series_from_monomial_ideal(ideal: &MonomialIdeal) -> HilbertSeries {
    let num = numerator(ideal.nvars, ideal.gens.clone());
    HilbertSeries::new(num, vec![1; ideal.nvars]).canonical()
}

/// Numerator of the quotient over `(1 - t)^n`, by pivot recursion:
/// `N(I) = N(I + <p>) + t^deg(p) N(I : p)` with `p = x_i^a`, `x_i` the
/// variable in the most generators and `a` its smallest positive exponent.
fn numerator(nvars: usize, gens: Vec<Vec<u32>>) -> Vec<i128> {
    if gens.is_empty() {
        return vec![1];
    }
    if gens.iter().any(|g| g.iter().all(|&e| e == 0)) {
        return Vec::new();
    }
    let mut counts = vec![0usize; nvars];
    for g in &gens {
        for (i, &e) in g.iter().enumerate() {
            if e > 0 {
                counts[i] += 1;
            }
        }
    }
    let (pivot_var, &best) = counts
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
        .unwrap();
    if best <= 1 {
        // pairwise coprime generators: ∏ (1 - t^deg g)
        return gens.iter().fold(vec![1], |acc, g| {
            mul_one_minus(&acc, g.iter().sum())
        });
    }
    let a = gens
        .iter()
        .map(|g| g[pivot_var])
        .filter(|&e| e > 0)
        .min()
        .unwrap();

    let mut pivot = vec![0u32; nvars];
    pivot[pivot_var] = a;

    let mut sum_gens: Vec<Vec<u32>> = gens
        .iter()
        .filter(|g| g[pivot_var] == 0)
        .cloned()
        .collect();
    sum_gens.push(pivot);
    let sum = numerator(nvars, minimalize(sum_gens));

    let colon_gens: Vec<Vec<u32>> = gens
        .iter()
        .map(|g| {
            let mut h = g.clone();
            h[pivot_var] = h[pivot_var].saturating_sub(a);
            h
        })
        .collect();
    let colon = numerator(nvars, minimalize(colon_gens));

    let mut out = sum;
    let shift = a as usize;
    if out.len() < colon.len() + shift {
        out.resize(colon.len() + shift, 0);
    }
    for (k, c) in colon.iter().enumerate() {
        out[k + shift] += c;
    }
    trim(&mut out);
    out
}

impl fmt::Display for HilbertSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = render_poly(&self.numerator);
        let needs_parens = self.numerator.iter().filter(|&&c| c != 0).count() > 1;
        if self.weights.is_empty() {
            return write!(f, "{}", num);
        }
        if needs_parens {
            write!(f, "({})", num)?;
        } else {
            write!(f, "{}", num)?;
        }
        let mut factors: Vec<String> = Vec::new();
        let mut i = 0;
        while i < self.weights.len() {
            let w = self.weights[i];
            let mut j = i;
            while j < self.weights.len() && self.weights[j] == w {
                j += 1;
            }
            let base = if w == 1 {
                "(1 - t)".to_string()
            } else {
                format!("(1 - t^{})", w)
            };
            let mult = j - i;
            factors.push(if mult > 1 { format!("{}^{}", base, mult) } else { base });
            i = j;
        }
        if factors.len() == 1 {
            write!(f, " / {}", factors[0])
        } else {
            write!(f, " / ({})", factors.join(" "))
        }
    }
}

fn render_poly(coeffs: &[i128]) -> String {
    let mut out = String::new();
    for (k, &c) in coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        if out.is_empty() {
            if c < 0 {
                out.push('-');
            }
        } else {
            out.push_str(if c < 0 { " - " } else { " + " });
        }
        let a = c.unsigned_abs();
        match k {
            0 => out.push_str(&a.to_string()),
            _ => {
                if a != 1 {
                    out.push_str(&a.to_string());
                }
                out.push('t');
                if k > 1 {
                    out.push_str(&format!("^{}", k));
                }
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
