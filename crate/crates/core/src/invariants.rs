//! Finite subgroups of SU(2) over cyclotomic fields and their invariant rings.
//!
//! `dim (SᵖV)^G` is the group average of the trace of g acting on degree-p
//! binary forms. Traces are taken on the monomial basis `x^a y^(p-a)`;
//! elements with equal trace are conjugate in SL(2), so one representative
//! per trace value is enough.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{cyclotomic_polynomial, rational, rational_int, CyclotomicNumber, Rational};
use crate::hilbert::{series_from_generator_degrees, GradedDims, HilbertSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupLabel {
    /// Binary dihedral group of order 4n, covering D_n.
    BinaryDihedral(u32),
    /// Order 24, covering 𝔄₄.
    BinaryTetrahedral,
    /// Order 48, covering 𝔖₄.
    BinaryOctahedral,
    /// Order 120, covering 𝔄₅.
    BinaryIcosahedral,
}

impl GroupLabel {
    pub fn expected_order(self) -> usize {
        match self {
            GroupLabel::BinaryDihedral(n) => 4 * n as usize,
            GroupLabel::BinaryTetrahedral => 24,
            GroupLabel::BinaryOctahedral => 48,
            GroupLabel::BinaryIcosahedral => 120,
        }
    }

    /// Cyclotomic field the generators live in.
    pub fn field_order(self) -> u32 {
        match self {
            GroupLabel::BinaryDihedral(n) => (2 * n).lcm(&4),
            GroupLabel::BinaryTetrahedral => 4,
            GroupLabel::BinaryOctahedral => 8,
            GroupLabel::BinaryIcosahedral => 20,
        }
    }

    /// Name of the rotation group it covers.
    pub fn rotation_group(self) -> String {
        match self {
            GroupLabel::BinaryDihedral(n) => format!("D_{n}"),
            GroupLabel::BinaryTetrahedral => "A_4".into(),
            GroupLabel::BinaryOctahedral => "S_4".into(),
            GroupLabel::BinaryIcosahedral => "A_5".into(),
        }
    }

    /// Default Molien window: must cover the largest relation degree.
    pub fn default_window(self) -> usize {
        match self {
            GroupLabel::BinaryIcosahedral => 124,
            GroupLabel::BinaryDihedral(n) => 64.max(4 * n as usize + 8),
            _ => 64,
        }
    }
}

impl fmt::Display for GroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupLabel::BinaryDihedral(n) => write!(f, "BD_{n}"),
            GroupLabel::BinaryTetrahedral => write!(f, "2T"),
            GroupLabel::BinaryOctahedral => write!(f, "2O"),
            GroupLabel::BinaryIcosahedral => write!(f, "2I"),
        }
    }
}

/// 2×2 matrix `[[a, b], [c, d]]` over ℚ(ζ_m).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mat2(pub [CyclotomicNumber; 4]);

impl Mat2 {
    pub fn identity(m: u32) -> Self {
        Mat2([
            CyclotomicNumber::one(m),
            CyclotomicNumber::zero(m),
            CyclotomicNumber::zero(m),
            CyclotomicNumber::one(m),
        ])
    }

    pub fn scalar(m: u32, q: Rational) -> Self {
        Mat2([
            CyclotomicNumber::from_rational(m, q.clone()),
            CyclotomicNumber::zero(m),
            CyclotomicNumber::zero(m),
            CyclotomicNumber::from_rational(m, q),
        ])
    }

    /// The unit quaternion `a + b i + c j + d k` with real coefficients in ℚ(ζ_m)
    /// (m divisible by 4), as `[[a + b i, c + d i], [-c + d i, a - b i]]`.
    pub fn quaternion(
        a: &CyclotomicNumber,
        b: &CyclotomicNumber,
        c: &CyclotomicNumber,
        d: &CyclotomicNumber,
    ) -> Self {
        let m = a.order();
        let i = CyclotomicNumber::zeta_pow(m, (m / 4) as i64);
        let bi = b * &i;
        let di = d * &i;
        Mat2([a + &bi, c + &di, &di - c, a - &bi])
    }

    pub fn mul(&self, other: &Mat2) -> Mat2 {
        let [a, b, c, d] = &self.0;
        let [e, f, g, h] = &other.0;
        Mat2([
            &(a * e) + &(b * g),
            &(a * f) + &(b * h),
            &(c * e) + &(d * g),
            &(c * f) + &(d * h),
        ])
    }

    pub fn det(&self) -> CyclotomicNumber {
        let [a, b, c, d] = &self.0;
        &(a * d) - &(b * c)
    }

    pub fn trace(&self) -> CyclotomicNumber {
        &self.0[0] + &self.0[3]
    }

    pub fn neg(&self) -> Mat2 {
        Mat2(self.0.clone().map(|x| -&x))
    }

    pub fn embed(&self, target: u32) -> Result<Mat2> {
        let [a, b, c, d] = &self.0;
        Ok(Mat2([a.embed(target)?, b.embed(target)?, c.embed(target)?, d.embed(target)?]))
    }

    /// Inverse of a determinant-one matrix: `[[d, -b], [-c, a]]`.
    pub fn inverse_sl2(&self) -> Mat2 {
        let [a, b, c, d] = &self.0;
        Mat2([d.clone(), -b, -c, a.clone()])
    }

    pub fn order(&self) -> u32 {
        self.0[0].order()
    }
}

/// A finite subgroup of SL(2, ℚ(ζ_m)) with its elements enumerated.
#[derive(Debug, Clone)]
pub struct MatrixGroup {
    label: GroupLabel,
    field_order: u32,
    generators: Vec<Mat2>,
    elements: Vec<Mat2>,
}

fn closure(generators: &[Mat2], field_order: u32, cap: usize) -> Result<Vec<Mat2>> {
    let mut elements = vec![Mat2::identity(field_order)];
    let mut seen: HashSet<Mat2> = elements.iter().cloned().collect();
    let mut next = 0;
    while next < elements.len() {
        let g = elements[next].clone();
        next += 1;
        for s in generators {
            let h = g.mul(s);
            if seen.insert(h.clone()) {
                elements.push(h);
                if elements.len() > cap {
                    return Err(Error::Integrity(format!(
                        "group closure exceeded {} elements; generators are wrong",
                        cap
                    )));
                }
            }
        }
    }
    Ok(elements)
}

impl MatrixGroup {
    /// Generates the group from explicit generators, checking the expected order.
    pub fn from_generators(label: GroupLabel, generators: Vec<Mat2>) -> Result<Self> {
        let field_order = generators
            .first()
            .map(Mat2::order)
            .ok_or_else(|| Error::InvalidParameter("no generators".into()))?;
        let expected = label.expected_order();
        let elements = closure(&generators, field_order, 2 * expected)?;
        if elements.len() != expected {
            return Err(Error::Integrity(format!(
                "{label} closure has {} elements, expected {expected}",
                elements.len()
            )));
        }
        Ok(MatrixGroup {
            label,
            field_order,
            generators,
            elements,
        })
    }

    pub fn label(&self) -> GroupLabel {
        self.label
    }

    pub fn field_order(&self) -> u32 {
        self.field_order
    }

    pub fn generators(&self) -> &[Mat2] {
        &self.generators
    }

    pub fn elements(&self) -> &[Mat2] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: &Mat2) -> bool {
        self.elements.contains(g)
    }

    /// Same group conjugated by `h`: `h g h⁻¹` for every generator.
    pub fn conjugate(&self, h: &Mat2) -> Result<Self> {
        let m = h.order();
        if m % self.field_order != 0 {
            return Err(Error::InvalidParameter("conjugator field too small".into()));
        }
        let h_inv = h.inverse_sl2();
        let gens = self
            .generators
            .iter()
            .map(|g| Ok(h.mul(&g.embed(m)?).mul(&h_inv)))
            .collect::<Result<Vec<_>>>()?;
        MatrixGroup::from_generators(self.label, gens)
    }

    /// Conjugacy data: (trace, representative, count) in first-seen order.
    fn trace_classes(&self) -> Vec<(CyclotomicNumber, &Mat2, usize)> {
        let mut classes: Vec<(CyclotomicNumber, &Mat2, usize)> = Vec::new();
        for g in &self.elements {
            let t = g.trace();
            match classes.iter_mut().find(|(s, _, _)| *s == t) {
                Some(entry) => entry.2 += 1,
                None => classes.push((t, g, 1)),
            }
        }
        classes
    }
}

/// Builds the standard binary polyhedral group for a label.
pub fn build_group(label: GroupLabel) -> Result<MatrixGroup> {
    let m = label.field_order();
    let one = CyclotomicNumber::one(m);
    let zero = CyclotomicNumber::zero(m);
    let half = |x: &CyclotomicNumber| x.scale(&rational(1, 2));
    let qi = Mat2::quaternion(&zero, &one, &zero, &zero);
    let qj = Mat2::quaternion(&zero, &zero, &one, &zero);
    let hurwitz = |m: u32| {
        // -(1 + i + j + k)/2
        let h = CyclotomicNumber::from_rational(m, rational(-1, 2));
        Mat2::quaternion(&h, &h, &h, &h)
    };
    let gens = match label {
        GroupLabel::BinaryDihedral(n) => {
            if n < 2 {
                return Err(Error::InvalidParameter(format!("BD_n needs n >= 2, got {n}")));
            }
            let step = (m / (2 * n)) as i64;
            let a = Mat2([
                CyclotomicNumber::zeta_pow(m, step),
                zero.clone(),
                zero.clone(),
                CyclotomicNumber::zeta_pow(m, -step),
            ]);
            let b = Mat2([zero.clone(), one.clone(), -&one, zero.clone()]);
            vec![a, b]
        }
        GroupLabel::BinaryTetrahedral => vec![qi, qj, hurwitz(m)],
        GroupLabel::BinaryOctahedral => {
            // (1 + i)/√2 = diag(ζ₈, ζ₈⁻¹)
            let r = Mat2([
                CyclotomicNumber::zeta_pow(m, 1),
                zero.clone(),
                zero.clone(),
                CyclotomicNumber::zeta_pow(m, -1),
            ]);
            vec![qi, qj, hurwitz(m), r]
        }
        GroupLabel::BinaryIcosahedral => {
            // golden ratio φ = 1 + ζ₅ + ζ₅⁴, φ⁻¹ = φ - 1, with ζ₅ = ζ₂₀⁴
            let inv_phi = &CyclotomicNumber::zeta_pow(m, 4) + &CyclotomicNumber::zeta_pow(m, 16);
            let phi = &one + &inv_phi;
            let t = Mat2::quaternion(&half(&phi), &half(&inv_phi), &half(&one), &zero);
            vec![qi, qj, hurwitz(m), t]
        }
    };
    MatrixGroup::from_generators(label, gens)
}

/// Traces of g acting on degree-p binary forms for p = 0..=max_degree,
/// read off the diagonal of the action on the monomial basis `x^a y^b`.
///
/// With `g = [[α, β], [γ, δ]]` acting by `x ↦ αx + γy`, `y ↦ βx + δy`, the
/// diagonal entry at `x^a y^b` is the coefficient of `x^a` in `(αx+γ)^a (βx+δ)^b`.
///
/// The matrix is first scaled by the common denominator `L` of its entries so
/// the expansion runs over cyclotomic integers; the trace is divided by `L^p`.
pub fn symmetric_power_traces(g: &Mat2, max_degree: usize) -> Vec<CyclotomicNumber> {
    let m = g.order();
    let phi = cyclotomic_polynomial(m);
    let den = g
        .0
        .iter()
        .flat_map(|x| x.coeffs().iter().map(|c| c.denom().clone()))
        .fold(BigInt::one(), |acc, d| acc.lcm(&d));
    let scaled: Vec<IntCyclo> = g
        .0
        .iter()
        .map(|x| IntCyclo(x.coeffs().iter().map(|c| (c * &den).to_integer()).collect()))
        .collect();
    let [alpha, beta, gamma, delta] = [&scaled[0], &scaled[1], &scaled[2], &scaled[3]];
    let powers = |lin: &IntCyclo, cst: &IntCyclo| {
        let mut out: Vec<Vec<IntCyclo>> = vec![vec![IntCyclo::one(phi.len() - 1)]];
        for k in 1..=max_degree {
            let prev = &out[k - 1];
            let mut next = vec![IntCyclo::zero(phi.len() - 1); k + 1];
            for (j, c) in prev.iter().enumerate() {
                next[j].add_assign(&c.mul(cst, &phi));
                next[j + 1].add_assign(&c.mul(lin, &phi));
            }
            out.push(next);
        }
        out
    };
    let p_pows = powers(alpha, gamma);
    let q_pows = powers(beta, delta);
    let mut den_pow = BigInt::one();
    (0..=max_degree)
        .map(|p| {
            let pairs = (0..=p).flat_map(|a| {
                let b = p - a;
                let (pa, qb) = (&p_pows[a], &q_pows[b]);
                (a.saturating_sub(b)..=a).map(move |k| (&pa[k], &qb[a - k]))
            });
            let trace = IntCyclo::dot(pairs, &phi);
            let scale = Rational::new(BigInt::one(), den_pow.clone());
            den_pow *= &den;
            CyclotomicNumber::from_powers(
                m,
                trace.0.into_iter().map(|c| Rational::from_integer(c) * &scale).collect(),
            )
        })
        .collect()
}

/// Element of ℤ[ζ_m] as its residue coefficients; the integer fast path for traces.
#[derive(Clone)]
struct IntCyclo(Vec<BigInt>);

impl IntCyclo {
    fn zero(n: usize) -> Self {
        IntCyclo(vec![BigInt::zero(); n])
    }

    fn one(n: usize) -> Self {
        let mut v = vec![BigInt::zero(); n];
        v[0] = BigInt::one();
        IntCyclo(v)
    }

    fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    fn add_assign(&mut self, other: &IntCyclo) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += b;
        }
    }

    fn accumulate(raw: &mut [BigInt], a: &IntCyclo, b: &IntCyclo) {
        for (i, x) in a.0.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.0.iter().enumerate() {
                if !y.is_zero() {
                    raw[i + j] += x * y;
                }
            }
        }
    }

    fn reduce(mut raw: Vec<BigInt>, phi: &[i64]) -> IntCyclo {
        let deg = phi.len() - 1;
        while raw.len() > deg {
            let c = raw.pop().unwrap();
            if c.is_zero() {
                continue;
            }
            let k = raw.len() - deg;
            for (j, &p) in phi[..deg].iter().enumerate() {
                if p != 0 {
                    raw[k + j] -= &c * p;
                }
            }
        }
        raw.resize(deg, BigInt::zero());
        IntCyclo(raw)
    }

    fn mul(&self, other: &IntCyclo, phi: &[i64]) -> IntCyclo {
        let n = self.0.len();
        let mut raw = vec![BigInt::zero(); 2 * n - 1];
        Self::accumulate(&mut raw, self, other);
        Self::reduce(raw, phi)
    }

    fn dot<'a>(pairs: impl Iterator<Item = (&'a IntCyclo, &'a IntCyclo)>, phi: &[i64]) -> IntCyclo {
        let n = phi.len() - 1;
        let mut raw = vec![BigInt::zero(); 2 * n - 1];
        for (a, b) in pairs {
            if !a.is_zero() && !b.is_zero() {
                Self::accumulate(&mut raw, a, b);
            }
        }
        Self::reduce(raw, phi)
    }
}

fn average_to_dimension(sum: &CyclotomicNumber, order: usize, p: usize) -> Result<u64> {
    let avg = sum.scale(&Rational::new(BigInt::one(), BigInt::from(order)));
    let q = avg.to_rational().ok_or_else(|| {
        Error::Integrity(format!("Molien average at degree {p} is irrational: {avg}"))
    })?;
    if !q.is_integer() || q.is_negative() {
        return Err(Error::Integrity(format!(
            "Molien average at degree {p} is {q}, not a non-negative integer"
        )));
    }
    q.to_integer()
        .to_u64()
        .ok_or_else(|| Error::Integrity("Molien average out of range".into()))
}

/// Invariant dimensions `dim (SᵖV)^G` for p = 0..=max_degree.
pub fn invariant_dimensions(group: &MatrixGroup, max_degree: usize) -> Result<Vec<u64>> {
    let m = group.field_order;
    let mut sums = vec![CyclotomicNumber::zero(m); max_degree + 1];
    for (_, rep, count) in group.trace_classes() {
        let weight = rational_int(count as i64);
        for (s, t) in sums.iter_mut().zip(symmetric_power_traces(rep, max_degree)) {
            *s = &*s + &t.scale(&weight);
        }
    }
    sums.iter()
        .enumerate()
        .map(|(p, s)| average_to_dimension(s, group.order(), p))
        .collect()
}

/// `dim (SᵖV)^G` for a single degree.
pub fn invariant_dimension(group: &MatrixGroup, p: usize) -> Result<u64> {
    let m = group.field_order;
    let mut sum = CyclotomicNumber::zero(m);
    for (_, rep, count) in group.trace_classes() {
        let t = symmetric_power_traces(rep, p).pop().unwrap();
        sum = &sum + &t.scale(&rational_int(count as i64));
    }
    average_to_dimension(&sum, group.order(), p)
}

/// Degrees `(d1, d2, d3)` of three generators and `e` of one relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct HypersurfaceDegrees {
    pub generators: [u32; 3],
    pub relation: u32,
}

#[derive(Debug, Clone)]
pub struct MolienResult {
    pub dims: GradedDims,
    pub rational_form: Option<HilbertSeries>,
    pub matched: Option<HypersurfaceDegrees>,
}

/// Searches `d1 <= d2 <= d3` (even, at most `D/2`) and `e <= D` with
/// `(1 - t^e) / ∏ (1 - t^di)` reproducing `dims` exactly.
pub fn recover_hypersurface(dims: &[u64]) -> Option<HypersurfaceDegrees> {
    let top = dims.len().checked_sub(1)?;
    let evens: Vec<u32> = (1..=top / 4).map(|k| 2 * k as u32).collect();
    let base: Vec<i128> = dims.iter().map(|&c| c as i128).collect();
    for (i, &d1) in evens.iter().enumerate() {
        let n1 = times_one_minus(&base, d1);
        for (j, &d2) in evens.iter().enumerate().skip(i) {
            let n2 = times_one_minus(&n1, d2);
            for &d3 in &evens[j..] {
                let n3 = times_one_minus(&n2, d3);
                // a relation cancelling a generator is not a hypersurface
                if let Some(e) = single_relation(&n3).filter(|e| ![d1, d2, d3].contains(e)) {
                    return Some(HypersurfaceDegrees {
                        generators: [d1, d2, d3],
                        relation: e,
                    });
                }
            }
        }
    }
    None
}

/// Truncated product with `(1 - t^w)`.
fn times_one_minus(c: &[i128], w: u32) -> Vec<i128> {
    let w = w as usize;
    let mut out = c.to_vec();
    for k in w..c.len() {
        out[k] -= c[k - w];
    }
    out
}

fn single_relation(n: &[i128]) -> Option<u32> {
    if n.first() != Some(&1) {
        return None;
    }
    let mut found = None;
    for (k, &c) in n.iter().enumerate().skip(1) {
        match c {
            0 => {}
            -1 if found.is_none() => found = Some(k as u32),
            _ => return None,
        }
    }
    found
}

/// Molien series of `G` through degree `max_degree`, with the hypersurface form recovered.
pub fn molien_series(group: &MatrixGroup, max_degree: usize) -> Result<MolienResult> {
    let dims = invariant_dimensions(group, max_degree)?;
    let matched = recover_hypersurface(&dims);
    let rational_form = matched.map(|h| series_from_generator_degrees(&h.generators, Some(h.relation)));
    Ok(MolienResult {
        dims: GradedDims(dims.iter().map(|&c| c as u128).collect()),
        rational_form,
        matched,
    })
}
