//! One constructor per variety family, the triviality registry and the
//! Krull-dimension bound checks.
//!
//! Families with a closed form produce a [`HilbertSeries`] directly; the
//! Grassmannian and quadric families produce an [`IdealPresentation`] that is
//! routed through Buchberger and the monomial-ideal Hilbert series.

use std::fmt;
use std::time::Duration;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::rational_int;
use crate::groebner::{buchberger, GroebnerBasis, Grading, IdealPresentation, Limits};
use crate::hilbert::{
    series_from_generator_degrees, series_from_monomial_ideal, GradedDims, HilbertSeries,
};
use crate::invariants::{build_group, molien_series, GroupLabel, MolienResult};
use crate::poly::{Monomial, MonomialOrder, Polynomial, VariableContext};

/// Largest `n` for `Gr(r,n)` without `--force`.
pub const GRASSMANNIAN_CAP: u32 = 4;
/// Largest `n` for `Q(n)` without `--force`.
pub const QUADRIC_CAP: u32 = 3;

/// Kodaira dimension metadata.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Kappa {
    NegInfinity,
    Value(u32),
    Unknown,
}

impl fmt::Display for Kappa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kappa::NegInfinity => write!(f, "-inf"),
            Kappa::Value(k) => write!(f, "{k}"),
            Kappa::Unknown => write!(f, "unknown"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParabolicMode {
    /// Blocks `H⁰(C, K_C((i-1)D))`.
    Literal,
    /// Blocks `H⁰(C, K_C^i((i-1)D))`.
    SymmetricPower,
}

impl ParabolicMode {
    fn as_str(self) -> &'static str {
        match self {
            ParabolicMode::Literal => "literal",
            ParabolicMode::SymmetricPower => "symmetric",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TrivialReason {
    /// Compact Kähler, `c₁ = 0`, finite fundamental group.
    C1Zero,
    GeneralType,
    /// Smooth hypersurface of the given degree (at least 3).
    Hypersurface { degree: u32 },
    /// `P_C(E)` for a general stable rank-2 `E` with trivial determinant.
    RuledGeneralE,
}

/// Tagged description of a catalog entry.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum VarietySpec {
    Abelian(u32),
    ProjectiveSpace(u32),
    Grassmannian { r: u32, n: u32 },
    Quadric(u32),
    TwoQuadrics(u32),
    Hitchin { g: u32, r: u32, d: u32, fixed: bool },
    ParabolicHitchin { g: u32, r: u32, s: u32, mode: ParabolicMode },
    RuledKlein(GroupLabel),
    Product(Box<VarietySpec>, Box<VarietySpec>),
    Trivial { reason: TrivialReason, dim: u32 },
}

impl VarietySpec {
    pub fn parse(text: &str) -> Result<VarietySpec> {
        let mut p = SpecParser {
            chars: text.chars().filter(|c| !c.is_whitespace()).collect(),
            pos: 0,
        };
        let spec = p.spec()?;
        if p.pos != p.chars.len() {
            return Err(p.error("trailing input"));
        }
        spec.validate()?;
        Ok(spec)
    }

    /// Checks the parameter ranges of every family (not the Gröbner caps).
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        match *self {
            VarietySpec::Abelian(n)
            | VarietySpec::ProjectiveSpace(n)
            | VarietySpec::Quadric(n)
            | VarietySpec::TwoQuadrics(n)
                if n == 0 =>
            {
                bad(format!("{self}: n must be at least 1"))
            }
            VarietySpec::Grassmannian { r, n } if r == 0 || r >= n => {
                bad(format!("{self}: need 1 <= r <= n-1"))
            }
            VarietySpec::Hitchin { g, r, d, fixed } => {
                if g < 2 || r == 0 || d == 0 {
                    bad(format!("{self}: need g >= 2 and r, d >= 1"))
                } else if r.gcd(&d) != 1 {
                    bad(format!("{self}: r and d must be coprime"))
                } else if fixed && r < 2 {
                    bad(format!("{self}: fixed determinant needs r >= 2"))
                } else {
                    Ok(())
                }
            }
            VarietySpec::ParabolicHitchin { g, r, s, .. } if g < 2 || r == 0 || s == 0 => {
                bad(format!("{self}: need g >= 2 and r, s >= 1"))
            }
            VarietySpec::RuledKlein(GroupLabel::BinaryDihedral(n)) if n < 2 => {
                bad(format!("{self}: dihedral parameter must be at least 2"))
            }
            VarietySpec::Product(ref a, ref b) => {
                a.validate()?;
                b.validate()
            }
            VarietySpec::Trivial {
                reason: TrivialReason::Hypersurface { degree },
                dim,
            } if degree < 3 || dim < 2 => bad(format!("{self}: need degree >= 3 and dim >= 2")),
            _ => Ok(()),
        }
    }

    pub fn dim_x(&self) -> u32 {
        match *self {
            VarietySpec::Abelian(n)
            | VarietySpec::ProjectiveSpace(n)
            | VarietySpec::Quadric(n)
            | VarietySpec::TwoQuadrics(n) => n,
            VarietySpec::Grassmannian { r, n } => r * (n - r),
            VarietySpec::Hitchin { g, r, fixed, .. } => {
                if fixed {
                    (r * r - 1) * (g - 1)
                } else {
                    r * r * (g - 1) + 1
                }
            }
            // full flags at every parabolic point
            VarietySpec::ParabolicHitchin { g, r, s, .. } => {
                r * r * (g - 1) + 1 + s * r * (r - 1) / 2
            }
            VarietySpec::RuledKlein(_) => 2,
            VarietySpec::Product(ref a, ref b) => a.dim_x() + b.dim_x(),
            VarietySpec::Trivial { dim, .. } => dim,
        }
    }

    pub fn kappa(&self) -> Kappa {
        match *self {
            VarietySpec::Abelian(_) => Kappa::Value(0),
            VarietySpec::ProjectiveSpace(_)
            | VarietySpec::Grassmannian { .. }
            | VarietySpec::Quadric(_)
            | VarietySpec::RuledKlein(_) => Kappa::NegInfinity,
            VarietySpec::TwoQuadrics(_)
            | VarietySpec::Hitchin { .. }
            | VarietySpec::ParabolicHitchin { .. } => Kappa::Unknown,
            VarietySpec::Product(ref a, ref b) => match (a.kappa(), b.kappa()) {
                (Kappa::NegInfinity, _) | (_, Kappa::NegInfinity) => Kappa::NegInfinity,
                (Kappa::Value(x), Kappa::Value(y)) => Kappa::Value(x + y),
                _ => Kappa::Unknown,
            },
            VarietySpec::Trivial { reason, dim } => match reason {
                TrivialReason::C1Zero => Kappa::Value(0),
                TrivialReason::GeneralType => Kappa::Value(dim),
                TrivialReason::RuledGeneralE => Kappa::NegInfinity,
                // K_X = O(d - dim - 2)
                TrivialReason::Hypersurface { degree } => match degree.cmp(&(dim + 2)) {
                    std::cmp::Ordering::Less => Kappa::NegInfinity,
                    std::cmp::Ordering::Equal => Kappa::Value(0),
                    std::cmp::Ordering::Greater => Kappa::Value(dim),
                },
            },
        }
    }

    /// Rational homogeneous entries, for which `T_X` is big.
    pub fn is_homogeneous_space(&self) -> bool {
        match self {
            VarietySpec::ProjectiveSpace(_)
            | VarietySpec::Grassmannian { .. }
            | VarietySpec::Quadric(_) => true,
            VarietySpec::Product(a, b) => a.is_homogeneous_space() && b.is_homogeneous_space(),
            _ => false,
        }
    }

    /// Whether the default Gröbner route is used for the series.
    pub fn is_groebner_routed(&self) -> bool {
        match self {
            VarietySpec::Grassmannian { .. } | VarietySpec::Quadric(_) => true,
            VarietySpec::Product(a, b) => a.is_groebner_routed() || b.is_groebner_routed(),
            _ => false,
        }
    }

    /// Rejects Gröbner-routed parameters above the caps unless forced.
    pub fn check_caps(&self, force: bool) -> Result<()> {
        if force {
            return Ok(());
        }
        match *self {
            VarietySpec::Grassmannian { n, .. } if n > GRASSMANNIAN_CAP => Err(Error::InvalidParameter(
                format!("{self}: n > {GRASSMANNIAN_CAP} needs --force"),
            )),
            VarietySpec::Quadric(n) if n > QUADRIC_CAP => Err(Error::InvalidParameter(format!(
                "{self}: n > {QUADRIC_CAP} needs --force"
            ))),
            VarietySpec::Product(ref a, ref b) => {
                a.check_caps(force)?;
                b.check_caps(force)
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for VarietySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarietySpec::Abelian(n) => write!(f, "Ab({n})"),
            VarietySpec::ProjectiveSpace(n) => write!(f, "Pn({n})"),
            VarietySpec::Grassmannian { r, n } => write!(f, "Gr({r},{n})"),
            VarietySpec::Quadric(n) => write!(f, "Q({n})"),
            VarietySpec::TwoQuadrics(n) => write!(f, "2Q({n})"),
            VarietySpec::Hitchin { g, r, d, fixed } => {
                write!(f, "Hitchin(g={g},r={r},d={d}")?;
                if *fixed {
                    write!(f, ",fixed")?;
                }
                write!(f, ")")
            }
            VarietySpec::ParabolicHitchin { g, r, s, mode } => {
                write!(f, "ParHitchin(g={g},r={r},s={s},mode={})", mode.as_str())
            }
            VarietySpec::RuledKlein(GroupLabel::BinaryDihedral(n)) => write!(f, "Klein(BD,{n})"),
            VarietySpec::RuledKlein(label) => write!(f, "Klein({label})"),
            VarietySpec::Product(a, b) => write!(f, "Prod({a},{b})"),
            VarietySpec::Trivial { reason, dim } => match reason {
                TrivialReason::C1Zero => write!(f, "Trivial(c1_zero,dim={dim})"),
                TrivialReason::GeneralType => write!(f, "Trivial(general_type,dim={dim})"),
                TrivialReason::Hypersurface { degree } => {
                    write!(f, "Trivial(hypersurface,d={degree},dim={dim})")
                }
                TrivialReason::RuledGeneralE => write!(f, "Trivial(ruled_general_E)"),
            },
        }
    }
}

impl std::str::FromStr for VarietySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        VarietySpec::parse(s)
    }
}

/// One argument inside `Name(...)`.
enum Arg {
    Spec(VarietySpec),
    Word(String),
    Key(String, String),
}

struct SpecParser {
    chars: Vec<char>,
    pos: usize,
}

impl SpecParser {
    fn error(&self, msg: &str) -> Error {
        let text: String = self.chars.iter().collect();
        Error::Parse(format!("{msg} at offset {} in variety spec {text:?}", self.pos))
    }

    fn word(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.chars.len()
            && (self.chars[self.pos].is_alphanumeric() || self.chars[self.pos] == '_')
        {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.chars.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{c}'")))
        }
    }

    fn spec(&mut self) -> Result<VarietySpec> {
        let name = self.word();
        if name.is_empty() {
            return Err(self.error("expected a family name"));
        }
        self.expect('(')?;
        let mut args = Vec::new();
        loop {
            args.push(self.arg(&name)?);
            match self.chars.get(self.pos) {
                Some(',') => self.pos += 1,
                Some(')') => {
                    self.pos += 1;
                    break;
                }
                _ => return Err(self.error("expected ',' or ')'")),
            }
        }
        self.build(&name, args)
    }

    fn arg(&mut self, family: &str) -> Result<Arg> {
        let save = self.pos;
        let w = self.word();
        match self.chars.get(self.pos) {
            Some('(') if family == "Prod" => {
                self.pos = save;
                Ok(Arg::Spec(self.spec()?))
            }
            Some('=') => {
                self.pos += 1;
                let v = self.word();
                if v.is_empty() {
                    return Err(self.error("missing value"));
                }
                Ok(Arg::Key(w, v))
            }
            _ if w.is_empty() => Err(self.error("empty argument")),
            _ => Ok(Arg::Word(w)),
        }
    }

    fn build(&self, name: &str, args: Vec<Arg>) -> Result<VarietySpec> {
        let int = |s: &str| -> Result<u32> {
            s.parse::<u32>()
                .map_err(|_| self.error(&format!("expected a non-negative integer, got {s:?}")))
        };
        let positional = |args: &[Arg], k: usize| -> Result<Vec<u32>> {
            if args.len() != k {
                return Err(self.error(&format!("{name} takes {k} integer argument(s)")));
            }
            args.iter()
                .map(|a| match a {
                    Arg::Word(w) => int(w),
                    _ => Err(self.error(&format!("{name} takes plain integers"))),
                })
                .collect()
        };
        let mut keys = std::collections::BTreeMap::new();
        let mut words = Vec::new();
        let mut specs = Vec::new();
        for a in &args {
            match a {
                Arg::Key(k, v) => {
                    if keys.insert(k.clone(), v.clone()).is_some() {
                        return Err(self.error(&format!("duplicate key {k}")));
                    }
                }
                Arg::Word(w) => words.push(w.clone()),
                Arg::Spec(s) => specs.push(s.clone()),
            }
        }
        let key = |keys: &std::collections::BTreeMap<String, String>, k: &str| -> Result<u32> {
            keys.get(k)
                .ok_or_else(|| self.error(&format!("{name} needs {k}=...")))
                .and_then(|v| int(v))
        };
        let no_extra_keys = |allowed: &[&str]| -> Result<()> {
            match keys.keys().find(|k| !allowed.contains(&k.as_str())) {
                Some(k) => Err(self.error(&format!("unknown key {k} for {name}"))),
                None => Ok(()),
            }
        };
        let spec = match name {
            "Ab" => VarietySpec::Abelian(positional(&args, 1)?[0]),
            "Pn" => VarietySpec::ProjectiveSpace(positional(&args, 1)?[0]),
            "Q" => VarietySpec::Quadric(positional(&args, 1)?[0]),
            "2Q" => VarietySpec::TwoQuadrics(positional(&args, 1)?[0]),
            "Gr" => {
                let v = positional(&args, 2)?;
                VarietySpec::Grassmannian { r: v[0], n: v[1] }
            }
            "Hitchin" => {
                no_extra_keys(&["g", "r", "d"])?;
                let fixed = match words.as_slice() {
                    [] => false,
                    [w] if w == "fixed" => true,
                    _ => return Err(self.error("Hitchin accepts only the flag 'fixed'")),
                };
                VarietySpec::Hitchin {
                    g: key(&keys, "g")?,
                    r: key(&keys, "r")?,
                    d: key(&keys, "d")?,
                    fixed,
                }
            }
            "ParHitchin" => {
                no_extra_keys(&["g", "r", "s", "mode"])?;
                if !words.is_empty() || !specs.is_empty() {
                    return Err(self.error("ParHitchin takes only key=value arguments"));
                }
                let mode = match keys.get("mode").map(String::as_str) {
                    None | Some("literal") => ParabolicMode::Literal,
                    Some("symmetric") => ParabolicMode::SymmetricPower,
                    Some(m) => return Err(self.error(&format!("unknown mode {m}"))),
                };
                VarietySpec::ParabolicHitchin {
                    g: key(&keys, "g")?,
                    r: key(&keys, "r")?,
                    s: key(&keys, "s")?,
                    mode,
                }
            }
            "Klein" => {
                let label = match words.as_slice() {
                    [g, n] if g == "BD" && keys.is_empty() => GroupLabel::BinaryDihedral(int(n)?),
                    [g] if keys.is_empty() => match g.as_str() {
                        "2T" => GroupLabel::BinaryTetrahedral,
                        "2O" => GroupLabel::BinaryOctahedral,
                        "2I" => GroupLabel::BinaryIcosahedral,
                        _ => return Err(self.error(&format!("unknown group {g}"))),
                    },
                    _ => return Err(self.error("Klein takes BD,n or one of 2T, 2O, 2I")),
                };
                VarietySpec::RuledKlein(label)
            }
            "Prod" => match (specs.len(), args.len()) {
                (2, 2) => {
                    let b = specs.pop().unwrap();
                    let a = specs.pop().unwrap();
                    VarietySpec::Product(Box::new(a), Box::new(b))
                }
                _ => return Err(self.error("Prod takes two variety specs")),
            },
            "Trivial" => {
                let reason = match words.as_slice() {
                    [w] => w.as_str(),
                    _ => return Err(self.error("Trivial takes one reason")),
                };
                match reason {
                    "c1_zero" => {
                        no_extra_keys(&["dim"])?;
                        VarietySpec::Trivial {
                            reason: TrivialReason::C1Zero,
                            dim: key(&keys, "dim")?,
                        }
                    }
                    "general_type" => {
                        no_extra_keys(&["dim"])?;
                        VarietySpec::Trivial {
                            reason: TrivialReason::GeneralType,
                            dim: key(&keys, "dim")?,
                        }
                    }
                    "hypersurface" => {
                        no_extra_keys(&["d", "dim"])?;
                        VarietySpec::Trivial {
                            reason: TrivialReason::Hypersurface {
                                degree: key(&keys, "d")?,
                            },
                            dim: key(&keys, "dim")?,
                        }
                    }
                    "ruled_general_E" => {
                        no_extra_keys(&[])?;
                        VarietySpec::Trivial {
                            reason: TrivialReason::RuledGeneralE,
                            dim: 2,
                        }
                    }
                    _ => return Err(self.error(&format!("unknown triviality reason {reason}"))),
                }
            }
            _ => return Err(self.error(&format!("unknown family {name}"))),
        };
        Ok(spec)
    }
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// `c_d = C(n+d, n)² - C(n+d-1, n)²` for `X = ℙⁿ`.
pub fn projective_space_dims(n: u32, max_degree: usize) -> GradedDims {
    let n = n as u64;
    GradedDims(
        (0..=max_degree as u64)
            .map(|d| {
                let hi = binomial(n + d, n);
                let lo = if d == 0 { 0 } else { binomial(n + d - 1, n) };
                hi * hi - lo * lo
            })
            .collect(),
    )
}

/// `Σ_k C(n,k)² t^k / (1 - t)^{2n}`: the incidence divisor in `ℙⁿ × ℙⁿ`.
pub fn projective_space_series(n: u32) -> HilbertSeries {
    let num = (0..=n as u64).map(|k| (binomial(n as u64, k) as i128).pow(2)).collect();
    HilbertSeries::new(num, vec![1; 2 * n as usize])
}

pub fn abelian_series(n: u32) -> HilbertSeries {
    series_from_generator_degrees(&vec![1; n as usize], None)
}

pub fn two_quadrics_series(n: u32) -> HilbertSeries {
    series_from_generator_degrees(&vec![2; n as usize], None)
}

/// Generator degrees of the Hitchin base: `g` in degree 1 (unless the
/// determinant is fixed) and `(2i-1)(g-1)` in degree `i` for `2 <= i <= r`.
pub fn hitchin_generator_degrees(g: u32, r: u32, fixed: bool) -> Vec<u32> {
    let mut out = Vec::new();
    if !fixed {
        out.extend(std::iter::repeat(1).take(g as usize));
    }
    for i in 2..=r {
        out.extend(std::iter::repeat(i).take(((2 * i - 1) * (g - 1)) as usize));
    }
    out
}

pub fn hitchin_series(g: u32, r: u32, d: u32, fixed: bool) -> Result<HilbertSeries> {
    VarietySpec::Hitchin { g, r, d, fixed }.validate()?;
    Ok(series_from_generator_degrees(&hitchin_generator_degrees(g, r, fixed), None))
}

/// `h⁰` of a line bundle of degree `deg >= 2g-2` on a genus-g curve; `is_canonical`
/// distinguishes `K_C` from other bundles of degree `2g-2`.
fn riemann_roch(g: u32, deg: u32, is_canonical: bool) -> u32 {
    if is_canonical {
        g
    } else {
        deg + 1 - g
    }
}

/// Dimensions of the blocks of the parabolic Hitchin base, block `i` in degree `i`.
pub fn parabolic_block_dims(g: u32, r: u32, s: u32, mode: ParabolicMode) -> Vec<u32> {
    (1..=r)
        .map(|i| {
            let twist = (i - 1) * s;
            let deg = match mode {
                ParabolicMode::Literal => 2 * g - 2 + twist,
                ParabolicMode::SymmetricPower => i * (2 * g - 2) + twist,
            };
            riemann_roch(g, deg, i == 1)
        })
        .collect()
}

/// Codimension condition under which the Hitchin map identifies the algebra.
pub fn parabolic_valid(g: u32, r: u32) -> bool {
    g >= 4 || (g == 3 && r >= 3) || (g == 2 && r >= 5)
}

pub fn parabolic_hitchin_series(g: u32, r: u32, s: u32, mode: ParabolicMode) -> (HilbertSeries, bool) {
    let degrees: Vec<u32> = parabolic_block_dims(g, r, s, mode)
        .into_iter()
        .enumerate()
        .flat_map(|(i, m)| std::iter::repeat(i as u32 + 1).take(m as usize))
        .collect();
    (series_from_generator_degrees(&degrees, None), parabolic_valid(g, r))
}

fn var_name(prefix: &str, i: u32, j: u32, wide: bool) -> String {
    if wide {
        format!("{prefix}{i}_{j}")
    } else {
        format!("{prefix}{i}{j}")
    }
}

/// Determinant by cofactor expansion along the first row.
fn determinant(m: &[Vec<&Polynomial>], zero: &Polynomial) -> Polynomial {
    let k = m.len();
    if k == 1 {
        return m[0][0].clone();
    }
    let mut out = zero.clone();
    for c in 0..k {
        let minor: Vec<Vec<&Polynomial>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, p)| *p).collect())
            .collect();
        let term = m[0][c].checked_mul(&determinant(&minor, zero)).expect("same ring");
        out = if c % 2 == 0 {
            out.checked_add(&term)
        } else {
            out.checked_sub(&term)
        }
        .expect("same ring");
    }
    out
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Appends `p` unless it is zero or a scalar multiple of an earlier generator.
fn push_distinct(gens: &mut Vec<Polynomial>, p: Polynomial) {
    if p.is_zero() {
        return;
    }
    let m = p.monic();
    if !gens.iter().any(|q| q.monic() == m) {
        gens.push(p);
    }
}

/// Square-zero endomorphisms of rank at most `min(r, n-r)` in `n²` variables `u_ij`.
pub fn grassmannian_ideal(r: u32, n: u32) -> Result<IdealPresentation> {
    VarietySpec::Grassmannian { r, n }.validate()?;
    let wide = n > 9;
    let names: Vec<String> = (1..=n)
        .flat_map(|i| (1..=n).map(move |j| var_name("u", i, j, wide)))
        .collect();
    let ctx = VariableContext::new(names);
    let order = MonomialOrder::DegRevLex;
    let nn = n as usize;
    let u: Vec<Vec<Polynomial>> = (0..nn)
        .map(|i| (0..nn).map(|j| Polynomial::var(&ctx, order, i * nn + j)).collect())
        .collect();
    let zero = Polynomial::zero(&ctx, order);
    let mut gens = Vec::new();

    for i in 0..nn {
        for j in 0..nn {
            let mut e = zero.clone();
            for k in 0..nn {
                e = e.checked_add(&u[i][k].checked_mul(&u[k][j])?)?;
            }
            push_distinct(&mut gens, e);
        }
    }
    let m = r.min(n - r) as usize;
    for rows in subsets(nn, m + 1) {
        for cols in subsets(nn, m + 1) {
            let sub: Vec<Vec<&Polynomial>> =
                rows.iter().map(|&i| cols.iter().map(|&j| &u[i][j]).collect()).collect();
            push_distinct(&mut gens, determinant(&sub, &zero));
        }
    }
    // coefficient of t^{n-k} in det(t - u) is (-1)^k times the sum of principal k-minors
    for k in 1..=nn {
        let mut c = zero.clone();
        for idx in subsets(nn, k) {
            let sub: Vec<Vec<&Polynomial>> =
                idx.iter().map(|&i| idx.iter().map(|&j| &u[i][j]).collect()).collect();
            c = c.checked_add(&determinant(&sub, &zero))?;
        }
        push_distinct(&mut gens, c);
    }

    let caveat = if r == 1 {
        "checked against the projective-space closed form"
    } else {
        "radicality not established; Krull dimension is the only witness"
    };
    let provenance = format!(
        "Grassmannian G({r},{n}): S(X) = O(N), N = {{u in End(C^{n}) : u^2 = 0, rk u <= {m}}}; \
         ideal = entries of u^2 + {}-minors + characteristic polynomial coefficients ({caveat})",
        m + 1
    );
    IdealPresentation::new(&ctx, gens, Grading::Standard, provenance)
}

/// Plücker coordinate ring of `G(2, n+2)` modulo `⋀²q` for `q = Σ xᵢ²`.
pub fn quadric_ideal(n: u32) -> Result<IdealPresentation> {
    VarietySpec::Quadric(n).validate()?;
    let dim_v = n + 2;
    let wide = dim_v > 9;
    let pairs: Vec<(u32, u32)> = (1..=dim_v)
        .flat_map(|i| (i + 1..=dim_v).map(move |j| (i, j)))
        .collect();
    let ctx = VariableContext::new(pairs.iter().map(|&(i, j)| var_name("p", i, j, wide)));
    let order = MonomialOrder::DegRevLex;
    let nv = pairs.len();
    let idx = |i: u32, j: u32| pairs.iter().position(|&pq| pq == (i, j)).unwrap();
    let quad = |a: usize, b: usize| {
        let mut e = vec![0u32; nv];
        e[a] += 1;
        e[b] += 1;
        Monomial::new(e)
    };
    let one = rational_int(1);
    let mut gens = Vec::new();
    for i in 1..=dim_v {
        for j in i + 1..=dim_v {
            for k in j + 1..=dim_v {
                for l in k + 1..=dim_v {
                    gens.push(Polynomial::from_terms(
                        &ctx,
                        order,
                        vec![
                            (one.clone(), quad(idx(i, j), idx(k, l))),
                            (-one.clone(), quad(idx(i, k), idx(j, l))),
                            (one.clone(), quad(idx(i, l), idx(j, k))),
                        ],
                    ));
                }
            }
        }
    }
    gens.push(Polynomial::from_terms(
        &ctx,
        order,
        (0..nv).map(|a| (one.clone(), quad(a, a))).collect(),
    ));
    let provenance = format!(
        "quadric Q_{n}: Plücker coordinate ring of G(2,{dim_v}) modulo wedge^2 q, q = sum of squares"
    );
    IdealPresentation::new(&ctx, gens, Grading::Standard, provenance)
}

/// Ideal whose quotient is `S(X)`, for families that have one.
pub fn ideal_for(spec: &VarietySpec) -> Result<IdealPresentation> {
    match *spec {
        VarietySpec::Grassmannian { r, n } => grassmannian_ideal(r, n),
        VarietySpec::Quadric(n) => quadric_ideal(n),
        VarietySpec::ProjectiveSpace(n) => grassmannian_ideal(1, n + 1),
        _ => Err(Error::NoIdealPresentation(spec.to_string())),
    }
}

/// Reduced degrevlex basis and the Hilbert series of the quotient.
pub fn series_via_groebner(
    ideal: &IdealPresentation,
    limits: &Limits,
) -> Result<(GroebnerBasis, HilbertSeries)> {
    let gb = buchberger(ideal, MonomialOrder::DegRevLex, limits)?;
    let series = series_from_monomial_ideal(&gb.leading_term_ideal());
    Ok((gb, series))
}

/// A row of Klein's table of invariant rings.
#[derive(Debug, Clone)]
pub struct KleinTableRow {
    pub group: GroupLabel,
    /// Name of the rotation group as printed in the table.
    pub table_label: String,
    pub degrees: [u32; 3],
    pub relation: Polynomial,
    /// Common weighted degree of the terms of the relation, if there is one.
    pub relation_degree: Option<u32>,
}

impl KleinTableRow {
    fn new(group: GroupLabel, table_label: &str, degrees: [u32; 3], relation: &str) -> KleinTableRow {
        let ctx = VariableContext::new(["x", "y", "z"]);
        let f = Polynomial::parse(&ctx, MonomialOrder::DegRevLex, relation).expect("table relation");
        let relation_degree = if f.is_homogeneous(&degrees) {
            f.terms().first().map(|(_, m)| m.weighted_degree(&degrees) as u32)
        } else {
            None
        };
        KleinTableRow {
            group,
            table_label: table_label.to_string(),
            degrees,
            relation: f,
            relation_degree,
        }
    }

    /// Weighted degrees of the individual terms of the relation, ascending.
    pub fn term_degrees(&self) -> Vec<u64> {
        let mut out: Vec<u64> = self
            .relation
            .terms()
            .iter()
            .map(|(_, m)| m.weighted_degree(&self.degrees))
            .collect();
        out.sort_unstable();
        out
    }

    /// `(1 - t^e) / ∏ (1 - t^dᵢ)`, or `None` when the row is not weighted-homogeneous.
    pub fn table_series(&self) -> Option<HilbertSeries> {
        self.relation_degree
            .map(|e| series_from_generator_degrees(&self.degrees, Some(e)))
    }
}

/// The table as printed; the dihedral row is instantiated at `n`.
pub fn klein_table(n: u32) -> Vec<KleinTableRow> {
    vec![
        KleinTableRow::new(
            GroupLabel::BinaryDihedral(n),
            "D_n",
            [2 * n + 2, 2 * n, 4],
            &format!("x^2 + y^2*z + z^{}", n + 1),
        ),
        KleinTableRow::new(GroupLabel::BinaryTetrahedral, "A4", [4, 4, 6], "x^2 + y^3 + z^3"),
        KleinTableRow::new(GroupLabel::BinaryOctahedral, "S4", [12, 8, 6], "x^2 + y^3 + z^4"),
        KleinTableRow::new(GroupLabel::BinaryIcosahedral, "A5", [30, 20, 12], "x^2 + y^3 + z^5"),
    ]
}

pub fn klein_row(label: GroupLabel) -> KleinTableRow {
    let n = match label {
        GroupLabel::BinaryDihedral(n) => n,
        _ => 2,
    };
    klein_table(n).into_iter().find(|r| r.group == label).unwrap()
}

/// Molien series of a group next to its table row.
#[derive(Debug, Clone)]
pub struct KleinComparison {
    pub group: GroupLabel,
    pub window: usize,
    pub computed: MolienResult,
    pub row: KleinTableRow,
    /// `None` signals a row that is not weighted-homogeneous.
    pub table: Option<HilbertSeries>,
    /// Agreement with the group's own row; `None` for an inconsistent row.
    pub matches: Option<bool>,
    /// Labels of every consistent row whose series equals the computed one.
    pub matching_rows: Vec<String>,
}

impl KleinComparison {
    pub fn report(&self) -> String {
        let computed = match &self.computed.matched {
            Some(h) => format!(
                "d=({},{},{}) e={}",
                h.generators[0], h.generators[1], h.generators[2], h.relation
            ),
            None => "no hypersurface form in window".to_string(),
        };
        let [a, b, c] = self.row.degrees;
        let row = match (&self.table, self.matches) {
            (Some(_), Some(m)) => format!(
                "row {} d=({a},{b},{c}) e={}: {}",
                self.row.table_label,
                self.row.relation_degree.unwrap(),
                if m { "match" } else { "mismatch" }
            ),
            _ => {
                let degs: Vec<String> = self.row.term_degrees().iter().map(u64::to_string).collect();
                format!(
                    "row {} d=({a},{b},{c}) F={}: row-inconsistent (term degrees {})",
                    self.row.table_label,
                    self.row.relation.with_order(MonomialOrder::Lex),
                    degs.join(", ")
                )
            }
        };
        let others = if self.matching_rows.is_empty() {
            "none".to_string()
        } else {
            self.matching_rows.join(", ")
        };
        format!("{}: computed {computed}; {row}; rows matching computed: {others}", self.group)
    }
}

/// Compares the Molien series of `label` with its table row through `window`.
pub fn ruled_klein_series(label: GroupLabel, window: usize) -> Result<KleinComparison> {
    let group = build_group(label)?;
    let computed = molien_series(&group, window)?;
    let agrees = |s: &HilbertSeries| -> Result<bool> {
        let through_window = s.expand(window)? == computed.dims;
        let as_functions = computed.rational_form.as_ref().map_or(true, |c| c.series_eq(s));
        Ok(through_window && as_functions)
    };
    let row = klein_row(label);
    let table = row.table_series();
    let matches = table.as_ref().map(&agrees).transpose()?;
    let n = match label {
        GroupLabel::BinaryDihedral(n) => n,
        _ => 2,
    };
    let mut matching_rows = Vec::new();
    for r in klein_table(n) {
        if let Some(s) = r.table_series() {
            if agrees(&s)? {
                matching_rows.push(r.table_label.clone());
            }
        }
    }
    Ok(KleinComparison {
        group: label,
        window,
        computed,
        row,
        table,
        matches,
        matching_rows,
    })
}

/// Constant series with the reason it is trivial.
pub fn triviality_registry(reason: TrivialReason) -> (HilbertSeries, &'static str) {
    let why = match reason {
        TrivialReason::C1Zero => "compact Kähler with c1 = 0 and finite fundamental group: S(X) = C",
        TrivialReason::GeneralType => "variety of general type: S(X) = C",
        TrivialReason::Hypersurface { .. } => {
            "smooth hypersurface of degree >= 3 and dimension >= 2: \"Then S(X)=0\" \
             (stored as the constant series)"
        }
        TrivialReason::RuledGeneralE => {
            "P_C(E) for general stable rank-2 E with trivial determinant: S(X) = C"
        }
    };
    (HilbertSeries::one(), why)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub krull_dim: usize,
    pub dim_x: u32,
    /// `krull_dim == 2 dim X`, reported for homogeneous entries only.
    pub bigness_equality: Option<bool>,
    /// `dim X - κ` when κ is a number.
    pub liu_bound: Option<i64>,
    pub liu_tight: Option<bool>,
}

/// `krull <= 2 dim X` always, and `krull <= dim X - κ` when κ is known.
pub fn check_dimension_bounds(spec: &VarietySpec, series: &HilbertSeries) -> Result<BoundReport> {
    let krull = series.krull_dim();
    let dim_x = spec.dim_x();
    if krull > 2 * dim_x as usize {
        return Err(Error::Integrity(format!(
            "{spec}: Krull dimension {krull} exceeds 2 dim X = {}",
            2 * dim_x
        )));
    }
    let liu_bound = match spec.kappa() {
        Kappa::Value(k) => Some(dim_x as i64 - k as i64),
        _ => None,
    };
    if let Some(b) = liu_bound {
        if krull as i64 > b {
            return Err(Error::Integrity(format!(
                "{spec}: Krull dimension {krull} exceeds dim X - kappa = {b}"
            )));
        }
    }
    Ok(BoundReport {
        krull_dim: krull,
        dim_x,
        bigness_equality: spec
            .is_homogeneous_space()
            .then_some(krull == 2 * dim_x as usize),
        liu_bound,
        liu_tight: liu_bound.map(|b| krull as i64 == b),
    })
}

#[derive(Debug, Clone)]
pub struct ComputeConfig {
    pub max_degree: usize,
    pub limits: Limits,
    pub force: bool,
}

impl Default for ComputeConfig {
    fn default() -> Self {
        ComputeConfig {
            max_degree: 8,
            limits: Limits {
                max_degree: Some(12),
                timeout: Some(Duration::from_secs(300)),
            },
            force: false,
        }
    }
}

/// Everything the CLI reports about one spec.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub spec: VarietySpec,
    pub dims: GradedDims,
    pub rational_form: Option<HilbertSeries>,
    pub krull_dim: Option<usize>,
    pub provenance: String,
    pub flags: Vec<String>,
    pub bounds: Option<BoundReport>,
    /// Reduced bases of the Gröbner-routed parts.
    pub bases: Vec<GroebnerBasis>,
    pub klein: Option<KleinComparison>,
}

/// Computes the entry for `spec` through degree `config.max_degree`.
pub fn compute(spec: &VarietySpec, config: &ComputeConfig) -> Result<CatalogEntry> {
    spec.validate()?;
    spec.check_caps(config.force)?;
    let d = config.max_degree;
    let mut flags = Vec::new();
    let mut bases = Vec::new();
    let mut klein = None;
    let (series, provenance): (Option<HilbertSeries>, String) = match *spec {
        VarietySpec::Abelian(n) => (
            Some(abelian_series(n)),
            format!("abelian variety of dimension {n}: T_X trivial, S(X) is the polynomial ring in {n} variables of degree 1"),
        ),
        VarietySpec::ProjectiveSpace(n) => {
            let s = projective_space_series(n);
            if s.expand(d)? != projective_space_dims(n, d) {
                return Err(Error::Integrity(format!("{spec}: closed forms disagree")));
            }
            (
                Some(s),
                format!(
                    "projective space P^{n}: (sum of S^d V (x) S^d V*) modulo the identity; \
                     c_d = C({n}+d,{n})^2 - C({n}+d-1,{n})^2"
                ),
            )
        }
        VarietySpec::Grassmannian { .. } | VarietySpec::Quadric(_) => {
            let ideal = ideal_for(spec)?;
            let (gb, s) = series_via_groebner(&ideal, &config.limits)?;
            flags.push("groebner".to_string());
            if matches!(spec, VarietySpec::Grassmannian { r, .. } if *r >= 2) {
                flags.push("radicality-assumed".to_string());
            }
            bases.push(gb);
            (Some(s), ideal.provenance().to_string())
        }
        VarietySpec::TwoQuadrics(n) => (
            Some(two_quadrics_series(n)),
            format!(
                "complete intersection of two quadrics in P^{}: S(X) is the polynomial ring in {n} variables of degree 2",
                n + 2
            ),
        ),
        VarietySpec::Hitchin { g, r, d: deg, fixed } => {
            let s = hitchin_series(g, r, deg, fixed)?;
            let lo = if fixed { 2 } else { 1 };
            (
                Some(s),
                format!(
                    "Hitchin base for rank {r}, degree {deg}, genus {g}{}: free on H^0(C,K^i), i={lo}..{r}, \
                     in degree i; h^0(K) = g, h^0(K^i) = (2i-1)(g-1)",
                    if fixed { ", fixed determinant" } else { "" }
                ),
            )
        }
        VarietySpec::ParabolicHitchin { g, r, s, mode } => {
            let (series, valid) = parabolic_hitchin_series(g, r, s, mode);
            flags.push(format!("mode={}", mode.as_str()));
            flags.push(format!("valid={valid}"));
            let bundle = match mode {
                ParabolicMode::Literal => "K((i-1)D)",
                ParabolicMode::SymmetricPower => "K^i((i-1)D)",
            };
            (
                Some(series),
                format!(
                    "parabolic Hitchin base, genus {g}, rank {r}, {s} parabolic points: free on \
                     H^0(C,{bundle}), i=1..{r}, in degree i; identification needs g >= 4, \
                     or g = 3 and r >= 3, or g = 2 and r >= 5"
                ),
            )
        }
        VarietySpec::RuledKlein(label) => {
            let window = label.default_window().max(d);
            let cmp = ruled_klein_series(label, window)?;
            flags.push(match cmp.matches {
                Some(true) => "klein-row:match".to_string(),
                Some(false) => "klein-row:mismatch".to_string(),
                None => "klein-row:inconsistent".to_string(),
            });
            if let Some(h) = cmp.computed.matched {
                flags.push(format!(
                    "hypersurface:d=({},{},{}),e={}",
                    h.generators[0], h.generators[1], h.generators[2], h.relation
                ));
            }
            let series = cmp.computed.rational_form.clone();
            let prov = format!(
                "ruled surface P(E_pi) with group {label} (rotation group {}): S(X) = (S^.V)^G, \
                 Molien series through degree {window}; {}",
                label.rotation_group(),
                cmp.report()
            );
            let dims = GradedDims(
                cmp.computed.dims.0.iter().take(d + 1).copied().collect(),
            );
            klein = Some(cmp);
            return finish(spec, dims, series, prov, flags, bases, klein);
        }
        VarietySpec::Product(ref a, ref b) => {
            let ea = compute(a, config)?;
            let eb = compute(b, config)?;
            let dims = GradedDims(
                (0..=d)
                    .map(|k| (0..=k).map(|i| ea.dims.0[i] * eb.dims.0[k - i]).sum())
                    .collect(),
            );
            let series = match (&ea.rational_form, &eb.rational_form) {
                (Some(x), Some(y)) => Some(x.product(y)),
                _ => None,
            };
            flags.extend(ea.flags.iter().map(|f| format!("left:{f}")));
            flags.extend(eb.flags.iter().map(|f| format!("right:{f}")));
            bases.extend(ea.bases);
            bases.extend(eb.bases);
            let prov = format!("product: S(X x Y) = S(X) (x) S(Y); [{}] (x) [{}]", ea.provenance, eb.provenance);
            return finish(spec, dims, series, prov, flags, bases, None);
        }
        VarietySpec::Trivial { reason, .. } => {
            let (s, why) = triviality_registry(reason);
            flags.push("trivial".to_string());
            (Some(s), why.to_string())
        }
    };
    let series = series.expect("every closed-form family has a series");
    let dims = series.expand(d)?;
    finish(spec, dims, Some(series), provenance, flags, bases, klein)
}

fn finish(
    spec: &VarietySpec,
    dims: GradedDims,
    series: Option<HilbertSeries>,
    provenance: String,
    mut flags: Vec<String>,
    bases: Vec<GroebnerBasis>,
    klein: Option<KleinComparison>,
) -> Result<CatalogEntry> {
    if dims.0.first() != Some(&1) {
        return Err(Error::Integrity(format!("{spec}: c_0 is not 1")));
    }
    let bounds = series
        .as_ref()
        .map(|s| check_dimension_bounds(spec, s))
        .transpose()?;
    if let Some(b) = &bounds {
        if b.bigness_equality == Some(true) {
            flags.push("tangent-bundle-big".to_string());
        }
        if b.liu_tight == Some(true) {
            flags.push("liu-bound-tight".to_string());
        }
    }
    Ok(CatalogEntry {
        spec: spec.clone(),
        krull_dim: series.as_ref().map(HilbertSeries::krull_dim),
        dims,
        rational_form: series,
        provenance,
        flags,
        bounds,
        bases,
        klein,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::Rational;
    use proptest::prelude::*;

    fn dims(s: &HilbertSeries, d: usize) -> Vec<u128> {
        s.expand(d).unwrap().0
    }

    fn gb_dims(ideal: &IdealPresentation, d: usize) -> Vec<u128> {
        let (_, s) = series_via_groebner(ideal, &Limits::default()).unwrap();
        dims(&s, d)
    }

    fn eval(p: &Polynomial, point: &[Rational]) -> Rational {
        p.terms()
            .iter()
            .map(|(c, m)| {
                m.exps()
                    .iter()
                    .zip(point)
                    .fold(c.clone(), |acc, (&e, x)| acc * x.pow(e as i32))
            })
            .sum()
    }

    #[test]
    fn grammar_examples_round_trip() {
        for text in [
            "Pn(2)",
            "Gr(2,4)",
            "Q(3)",
            "2Q(3)",
            "Ab(2)",
            "Hitchin(g=2,r=2,d=1,fixed)",
            "Hitchin(g=2,r=3,d=1)",
            "ParHitchin(g=4,r=2,s=1,mode=literal)",
            "ParHitchin(g=4,r=2,s=1,mode=symmetric)",
            "Klein(BD,2)",
            "Klein(2I)",
            "Prod(Pn(1),Pn(1))",
            "Prod(Ab(1),Prod(Q(1),Klein(2T)))",
            "Trivial(general_type,dim=2)",
            "Trivial(hypersurface,d=3,dim=2)",
            "Trivial(c1_zero,dim=3)",
            "Trivial(ruled_general_E)",
        ] {
            let spec = VarietySpec::parse(text).unwrap();
            assert_eq!(spec.to_string(), text);
        }
        assert_eq!(
            VarietySpec::parse(" Hitchin( r=2, fixed, g=2, d=1 ) ").unwrap().to_string(),
            "Hitchin(g=2,r=2,d=1,fixed)"
        );
        assert_eq!(
            VarietySpec::parse("ParHitchin(g=4,r=2,s=1)").unwrap(),
            VarietySpec::ParabolicHitchin { g: 4, r: 2, s: 1, mode: ParabolicMode::Literal }
        );
    }

    #[test]
    fn grammar_rejects_malformed_and_out_of_range() {
        for text in ["", "Pn", "Pn(", "Pn(1", "Pn(1))", "Pn(x)", "Foo(1)", "Gr(2)", "Klein(3T)",
            "Prod(Pn(1))", "Hitchin(g=2,r=2)", "Hitchin(g=2,r=2,d=1,loose)", "ParHitchin(g=4,r=2,s=1,mode=odd)"]
        {
            assert!(matches!(VarietySpec::parse(text), Err(Error::Parse(_))), "{text}");
        }
        for text in ["Pn(0)", "Gr(2,2)", "Gr(0,3)", "Hitchin(g=2,r=2,d=2)", "Hitchin(g=1,r=1,d=1)",
            "Klein(BD,1)", "Trivial(hypersurface,d=2,dim=2)", "Prod(Ab(0),Ab(1))"]
        {
            assert!(matches!(VarietySpec::parse(text), Err(Error::InvalidParameter(_))), "{text}");
        }
    }

    #[test]
    fn caps_need_force() {
        let q4 = VarietySpec::Quadric(4);
        assert!(q4.check_caps(false).is_err());
        assert!(q4.check_caps(true).is_ok());
        assert!(VarietySpec::Grassmannian { r: 2, n: 5 }.check_caps(false).is_err());
        assert!(VarietySpec::Grassmannian { r: 2, n: 4 }.check_caps(false).is_ok());
    }

    #[test]
    fn projective_space_examples() {
        assert_eq!(projective_space_dims(1, 4).0, vec![1, 3, 5, 7, 9]);
        assert_eq!(projective_space_dims(2, 1).0, vec![1, 8]);
        for n in 1..=6 {
            assert_eq!(projective_space_dims(n, 0).0, vec![1]);
            assert_eq!(dims(&projective_space_series(n), 12), projective_space_dims(n, 12).0);
            assert_eq!(projective_space_series(n).krull_dim(), 2 * n as usize);
        }
    }

    #[test]
    fn grassmannian_generators_for_two_by_two() {
        let ideal = grassmannian_ideal(1, 2).unwrap();
        assert_eq!(ideal.context().len(), 4);
        let dump = ideal.dump();
        let lines: Vec<&str> = dump.lines().collect();
        assert!(lines.contains(&"u11 + u22"), "{lines:?}");
        assert!(lines.contains(&"u11*u22 - u12*u21"), "{lines:?}");
        assert!(lines.contains(&"u11^2 + u12*u21"), "{lines:?}");
        assert!(matches!(grassmannian_ideal(2, 2), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn grassmannian_recovers_projective_space() {
        assert_eq!(gb_dims(&grassmannian_ideal(1, 2).unwrap(), 8), projective_space_dims(1, 8).0);
        assert_eq!(gb_dims(&grassmannian_ideal(1, 3).unwrap(), 6), projective_space_dims(2, 6).0);
    }

    #[test]
    fn square_zero_without_extra_generators_is_not_radical() {
        // u² entries alone leave the trace out of the ideal
        let full = grassmannian_ideal(1, 2).unwrap();
        let ctx = full.context().clone();
        let sq: Vec<Polynomial> = full
            .generators()
            .iter()
            .filter(|g| g.total_degree() == Some(2) && g.len() == 2)
            .cloned()
            .collect();
        let partial = IdealPresentation::new(&ctx, sq, Grading::Standard, "u^2 only").unwrap();
        assert_eq!(gb_dims(&partial, 4)[1], 4);
        assert_eq!(gb_dims(&full, 4)[1], 3);
    }

    #[test]
    fn quadric_examples() {
        let q1 = quadric_ideal(1).unwrap();
        assert_eq!(q1.dump(), "p12^2 + p13^2 + p23^2\n");
        assert_eq!(gb_dims(&q1, 8), projective_space_dims(1, 8).0);
        let p1 = projective_space_dims(1, 8).0;
        let kunneth: Vec<u128> = (0..=8).map(|k| (0..=k).map(|i| p1[i] * p1[k - i]).sum()).collect();
        assert_eq!(&kunneth[..4], &[1, 6, 19, 44]);
        assert_eq!(gb_dims(&quadric_ideal(2).unwrap(), 8), kunneth);
        assert_eq!(quadric_ideal(2).unwrap().generators().len(), 2);
    }

    fn arb_bivector() -> impl Strategy<Value = (Vec<i64>, Vec<i64>)> {
        (1u32..=3).prop_flat_map(|n| {
            let len = n as usize + 2;
            (prop::collection::vec(-9i64..=9, len), prop::collection::vec(-9i64..=9, len))
        })
    }

    proptest! {
        #[test]
        fn wedge_q_on_decomposable_bivectors((v, w) in arb_bivector()) {
            let k = v.len();
            let ideal = quadric_ideal(k as u32 - 2).unwrap();
            let mut p = Vec::new();
            for i in 0..k {
                for j in i + 1..k {
                    p.push(rational_int(v[i] * w[j] - v[j] * w[i]));
                }
            }
            let dot = |a: &[i64], b: &[i64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<i64>();
            let expected = dot(&v, &v) * dot(&w, &w) - dot(&v, &w).pow(2);
            let gens = ideal.generators();
            let (last, plucker) = gens.split_last().unwrap();
            prop_assert_eq!(eval(last, &p), rational_int(expected));
            for g in plucker {
                prop_assert_eq!(eval(g, &p), rational_int(0));
            }
        }

        #[test]
        fn display_parse_round_trip(spec in arb_spec()) {
            let text = spec.to_string();
            prop_assert_eq!(VarietySpec::parse(&text).unwrap(), spec);
        }
    }

    fn arb_leaf() -> impl Strategy<Value = VarietySpec> {
        prop_oneof![
            (1u32..6).prop_map(VarietySpec::Abelian),
            (1u32..6).prop_map(VarietySpec::ProjectiveSpace),
            (1u32..6).prop_map(VarietySpec::Quadric),
            (1u32..6).prop_map(VarietySpec::TwoQuadrics),
            (2u32..7).prop_flat_map(|n| (1..n).prop_map(move |r| VarietySpec::Grassmannian { r, n })),
            (2u32..6, 1u32..5, any::<bool>()).prop_map(|(g, r, fixed)| VarietySpec::Hitchin {
                g,
                r: r + fixed as u32,
                d: 1,
                fixed
            }),
            (2u32..6, 1u32..5, 1u32..4, any::<bool>()).prop_map(|(g, r, s, sym)| {
                VarietySpec::ParabolicHitchin {
                    g,
                    r,
                    s,
                    mode: if sym { ParabolicMode::SymmetricPower } else { ParabolicMode::Literal },
                }
            }),
            (2u32..9).prop_map(|n| VarietySpec::RuledKlein(GroupLabel::BinaryDihedral(n))),
            Just(VarietySpec::RuledKlein(GroupLabel::BinaryOctahedral)),
            (0u32..5).prop_map(|dim| VarietySpec::Trivial { reason: TrivialReason::GeneralType, dim }),
            (3u32..8, 2u32..5).prop_map(|(degree, dim)| VarietySpec::Trivial {
                reason: TrivialReason::Hypersurface { degree },
                dim
            }),
        ]
    }

    fn arb_spec() -> impl Strategy<Value = VarietySpec> {
        arb_leaf().prop_recursive(2, 6, 2, |inner| {
            (inner.clone(), inner).prop_map(|(a, b)| VarietySpec::Product(Box::new(a), Box::new(b)))
        })
    }

    #[test]
    fn two_quadrics_examples() {
        assert_eq!(dims(&two_quadrics_series(3), 4), vec![1, 0, 3, 0, 6]);
        assert_eq!(dims(&two_quadrics_series(1), 4), vec![1, 0, 1, 0, 1]);
        for n in 1..6 {
            assert_eq!(two_quadrics_series(n).krull_dim(), n as usize);
        }
    }

    #[test]
    fn hitchin_examples() {
        let fixed = hitchin_series(2, 2, 1, true).unwrap();
        assert!(fixed.series_eq(&two_quadrics_series(3)));
        assert!(hitchin_series(3, 1, 1, false).unwrap().series_eq(&abelian_series(3)));
        let mut degs = hitchin_generator_degrees(2, 3, false);
        degs.sort_unstable();
        assert_eq!(degs, vec![1, 1, 2, 2, 2, 3, 3, 3, 3, 3]);
        assert!(matches!(hitchin_series(2, 2, 2, false), Err(Error::InvalidParameter(_))));
        // the free generators account for the whole dimension
        for g in 2..6 {
            for r in 1..5 {
                let spec = VarietySpec::Hitchin { g, r, d: 1, fixed: false };
                assert_eq!(hitchin_generator_degrees(g, r, false).len() as u32, spec.dim_x());
            }
        }
    }

    #[test]
    fn parabolic_examples() {
        for mode in [ParabolicMode::Literal, ParabolicMode::SymmetricPower] {
            let (s, valid) = parabolic_hitchin_series(4, 1, 3, mode);
            assert!(s.series_eq(&abelian_series(4)));
            assert!(valid);
        }
        let (lit, valid) = parabolic_hitchin_series(4, 2, 1, ParabolicMode::Literal);
        assert!(valid);
        assert!(lit.series_eq(&HilbertSeries::new(vec![1], vec![1, 1, 1, 1, 2, 2, 2, 2])));
        assert_eq!(parabolic_block_dims(4, 2, 1, ParabolicMode::SymmetricPower), vec![4, 10]);
        assert!(!parabolic_valid(3, 2));
        assert!(parabolic_valid(3, 3));
        assert!(!parabolic_valid(2, 4));
        assert!(parabolic_valid(2, 5));
    }

    #[test]
    fn symmetric_power_blocks_fill_the_dimension() {
        for g in 2..6 {
            for r in 1..5 {
                for s in 1..4 {
                    let total: u32 = parabolic_block_dims(g, r, s, ParabolicMode::SymmetricPower).iter().sum();
                    let spec = VarietySpec::ParabolicHitchin { g, r, s, mode: ParabolicMode::SymmetricPower };
                    assert_eq!(total, spec.dim_x());
                }
            }
        }
    }

    #[test]
    fn klein_rows_as_printed() {
        let table = klein_table(2);
        let homogeneous: Vec<Option<u32>> = table.iter().map(|r| r.relation_degree).collect();
        assert_eq!(homogeneous, vec![Some(12), None, Some(24), Some(60)]);
        assert_eq!(table[1].term_degrees(), vec![8, 12, 18]);
        let d2 = table[0].table_series().unwrap();
        assert_eq!(d2.to_string(), "(1 - t^12) / ((1 - t^4)^2 (1 - t^6))");
    }

    #[test]
    fn klein_dihedral_matches_its_row() {
        for n in [2, 3] {
            let cmp = ruled_klein_series(GroupLabel::BinaryDihedral(n), 40).unwrap();
            assert_eq!(cmp.matches, Some(true));
            assert_eq!(cmp.matching_rows, vec!["D_n".to_string()]);
            assert!(cmp.computed.dims.0.iter().skip(1).step_by(2).all(|&c| c == 0));
            if n == 2 {
                assert_eq!(cmp.computed.dims.0[4], 2);
            }
        }
    }

    #[test]
    fn klein_polyhedral_rows() {
        let t = ruled_klein_series(GroupLabel::BinaryTetrahedral, 64).unwrap();
        assert_eq!(t.matches, None);
        assert_eq!(t.matching_rows, vec!["S4".to_string()]);
        assert!(t.report().contains("row-inconsistent"));
        let o = ruled_klein_series(GroupLabel::BinaryOctahedral, 64).unwrap();
        assert_eq!(o.matches, Some(false));
        assert!(o.matching_rows.is_empty());
        let h = o.computed.matched.unwrap();
        assert_eq!((h.generators, h.relation), ([8, 12, 18], 36));
    }

    #[test]
    fn triviality_examples() {
        for reason in [
            TrivialReason::GeneralType,
            TrivialReason::Hypersurface { degree: 3 },
            TrivialReason::RuledGeneralE,
            TrivialReason::C1Zero,
        ] {
            let (s, why) = triviality_registry(reason);
            assert_eq!(dims(&s, 3), vec![1, 0, 0, 0]);
            assert!(!why.is_empty());
        }
        assert!(triviality_registry(TrivialReason::Hypersurface { degree: 4 }).1.contains("S(X)=0"));
    }

    #[test]
    fn bound_examples() {
        let cfg = ComputeConfig::default();
        let q3 = compute(&VarietySpec::Quadric(3), &cfg).unwrap();
        assert_eq!(q3.krull_dim, Some(6));
        assert_eq!(q3.bounds.as_ref().unwrap().bigness_equality, Some(true));
        let ab = compute(&VarietySpec::Abelian(2), &cfg).unwrap();
        assert_eq!(ab.bounds.as_ref().unwrap().liu_tight, Some(true));
        let tq = compute(&VarietySpec::TwoQuadrics(3), &cfg).unwrap();
        assert_eq!(tq.krull_dim, Some(3));
        let too_big = HilbertSeries::new(vec![1], vec![1; 5]);
        assert!(matches!(
            check_dimension_bounds(&VarietySpec::Abelian(2), &too_big),
            Err(Error::Integrity(_))
        ));
        let over_liu = HilbertSeries::new(vec![1], vec![1; 3]);
        assert!(matches!(
            check_dimension_bounds(&VarietySpec::Abelian(2), &over_liu),
            Err(Error::Integrity(_))
        ));
    }

    #[test]
    fn every_entry_starts_at_one_and_is_non_negative() {
        let cfg = ComputeConfig { max_degree: 10, ..ComputeConfig::default() };
        for text in [
            "Ab(3)", "Pn(3)", "Gr(1,3)", "Gr(2,4)", "Q(1)", "Q(2)", "2Q(2)",
            "Hitchin(g=3,r=2,d=1)", "ParHitchin(g=3,r=3,s=2,mode=symmetric)",
            "Klein(BD,3)", "Prod(Pn(1),Q(1))", "Trivial(general_type,dim=3)",
        ] {
            let e = compute(&VarietySpec::parse(text).unwrap(), &cfg).unwrap();
            assert_eq!(e.dims.0[0], 1, "{text}");
            assert_eq!(e.dims.0.len(), 11, "{text}");
            let b = e.bounds.unwrap();
            assert!(b.krull_dim <= 2 * b.dim_x as usize, "{text}");
        }
    }

    #[test]
    fn product_is_kunneth() {
        let cfg = ComputeConfig::default();
        let prod = compute(&VarietySpec::parse("Prod(Pn(1),Pn(1))").unwrap(), &cfg).unwrap();
        let q2 = compute(&VarietySpec::Quadric(2), &cfg).unwrap();
        assert_eq!(prod.dims, q2.dims);
        assert_eq!(prod.krull_dim, Some(4));
        assert!(prod.rational_form.unwrap().series_eq(q2.rational_form.as_ref().unwrap()));
    }

    #[test]
    fn pn_ideal_route_matches_closed_form() {
        let ideal = ideal_for(&VarietySpec::ProjectiveSpace(2)).unwrap();
        assert_eq!(gb_dims(&ideal, 6), projective_space_dims(2, 6).0);
        assert!(matches!(ideal_for(&VarietySpec::TwoQuadrics(3)), Err(Error::NoIdealPresentation(_))));
    }
}
