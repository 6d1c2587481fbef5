//! Sparse multivariate polynomials over ℚ.
//!
//! A [`Polynomial`] is pinned to a [`VariableContext`] and a [`MonomialOrder`];
//! its terms are kept strictly descending under that order, with no zero
//! coefficients. Arithmetic between polynomials of different contexts or
//! orders is rejected.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactnum::Rational;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    /// Graded reverse lexicographic.
    #[default]
    DegRevLex,
    Lex,
}

impl MonomialOrder {
    pub fn compare(self, a: &Monomial, b: &Monomial) -> Ordering {
        debug_assert_eq!(a.exps.len(), b.exps.len());
        match self {
            MonomialOrder::Lex => a.exps.cmp(&b.exps),
            MonomialOrder::DegRevLex => a.degree.cmp(&b.degree).then_with(|| {
                for (x, y) in a.exps.iter().zip(&b.exps).rev() {
                    if x != y {
                        // smaller exponent in the last differing variable is larger
                        return y.cmp(x);
                    }
                }
                Ordering::Equal
            }),
        }
    }
}

/// Ordered variable names of a polynomial ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VariableContext {
    names: Vec<String>,
}

impl VariableContext {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Arc<Self> {
        Arc::new(VariableContext {
            names: names.into_iter().map(Into::into).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    exps: Vec<u32>,
    degree: u32,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        let degree = exps.iter().sum();
        Monomial { exps, degree }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial {
            exps: vec![0; nvars],
            degree: 0,
        }
    }

    pub fn var(nvars: usize, index: usize, power: u32) -> Self {
        let mut exps = vec![0; nvars];
        exps[index] = power;
        Monomial {
            exps,
            degree: power,
        }
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
            degree: self.degree + other.degree,
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.degree <= other.degree && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `self / other`, if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        Some(Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a - b).collect(),
            degree: self.degree - other.degree,
        })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial::new(
            self.exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps
            .iter()
            .zip(&other.exps)
            .all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn weighted_degree(&self, weights: &[u32]) -> u64 {
        weighted_degree(self, weights)
    }

    fn fmt_with(&self, ctx: &VariableContext, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "{}", ctx.names[i])?;
            if e > 1 {
                write!(f, "^{}", e)?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// Σ exponentᵢ·weightᵢ.
pub fn weighted_degree(m: &Monomial, weights: &[u32]) -> u64 {
    assert_eq!(weights.len(), m.exps.len(), "weight vector length mismatch");
    m.exps
        .iter()
        .zip(weights)
        .map(|(&e, &w)| e as u64 * w as u64)
        .sum()
}

pub fn compare(a: &Monomial, b: &Monomial, order: MonomialOrder) -> Ordering {
    order.compare(a, b)
}

#[derive(Clone)]
pub struct Polynomial {
    ctx: Arc<VariableContext>,
    order: MonomialOrder,
    terms: Vec<(Rational, Monomial)>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.same_ring(other) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl Polynomial {
    pub fn zero(ctx: &Arc<VariableContext>, order: MonomialOrder) -> Self {
        Polynomial {
            ctx: ctx.clone(),
            order,
            terms: Vec::new(),
        }
    }

    pub fn constant(ctx: &Arc<VariableContext>, order: MonomialOrder, c: Rational) -> Self {
        Self::from_terms(ctx, order, vec![(c, Monomial::one(ctx.len()))])
    }

    pub fn var(ctx: &Arc<VariableContext>, order: MonomialOrder, index: usize) -> Self {
        Self::from_terms(
            ctx,
            order,
            vec![(Rational::one(), Monomial::var(ctx.len(), index, 1))],
        )
    }

    /// Looks up a variable by name.
    pub fn named_var(ctx: &Arc<VariableContext>, order: MonomialOrder, name: &str) -> Result<Self> {
        let i = ctx
            .index_of(name)
            .ok_or_else(|| Error::Parse(format!("unknown variable `{name}`")))?;
        Ok(Self::var(ctx, order, i))
    }

    /// Builds a polynomial from arbitrary terms: sorts, merges duplicates, drops zeros.
    pub fn from_terms(
        ctx: &Arc<VariableContext>,
        order: MonomialOrder,
        mut terms: Vec<(Rational, Monomial)>,
    ) -> Self {
        for (_, m) in &terms {
            assert_eq!(m.nvars(), ctx.len(), "monomial length differs from context");
        }
        terms.sort_by(|a, b| order.compare(&b.1, &a.1));
        let mut out: Vec<(Rational, Monomial)> = Vec::with_capacity(terms.len());
        for (c, m) in terms {
            match out.last_mut() {
                Some((lc, lm)) if *lm == m => *lc += c,
                _ => out.push((c, m)),
            }
        }
        out.retain(|(c, _)| !c.is_zero());
        Polynomial {
            ctx: ctx.clone(),
            order,
            terms: out,
        }
    }

    pub fn context(&self) -> &Arc<VariableContext> {
        &self.ctx
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn terms(&self) -> &[(Rational, Monomial)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn same_ring(&self, other: &Self) -> bool {
        self.order == other.order && (Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx == other.ctx)
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if self.same_ring(other) {
            Ok(())
        } else {
            Err(Error::AmbientMismatch)
        }
    }

    /// The maximal term under the polynomial's own order.
    pub fn leading_term(&self) -> Result<(&Rational, &Monomial)> {
        self.terms
            .first()
            .map(|(c, m)| (c, m))
            .ok_or(Error::ZeroPolynomial)
    }

    /// Drops the leading term.
    pub fn tail(&self) -> Polynomial {
        Polynomial {
            ctx: self.ctx.clone(),
            order: self.order,
            terms: self.terms.get(1..).unwrap_or(&[]).to_vec(),
        }
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|(_, m)| m)
    }

    /// Largest total degree among the terms, `None` for zero.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(_, m)| m.degree()).max()
    }

    /// Re-sorts the terms under another order.
    pub fn with_order(&self, order: MonomialOrder) -> Polynomial {
        if order == self.order {
            return self.clone();
        }
        let mut terms = self.terms.clone();
        terms.sort_by(|a, b| order.compare(&b.1, &a.1));
        Polynomial {
            ctx: self.ctx.clone(),
            order,
            terms,
        }
    }

    pub fn is_homogeneous(&self, weights: &[u32]) -> bool {
        let mut degs = self.terms.iter().map(|(_, m)| weighted_degree(m, weights));
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ctx, self.order);
        }
        Polynomial {
            ctx: self.ctx.clone(),
            order: self.order,
            terms: self.terms.iter().map(|(a, m)| (a * c, m.clone())).collect(),
        }
    }

    /// Divides by the leading coefficient. Zero stays zero.
    pub fn monic(&self) -> Polynomial {
        match self.terms.first() {
            None => self.clone(),
            Some((c, _)) if c.is_one() => self.clone(),
            Some((c, _)) => self.scale(&c.recip()),
        }
    }

    pub fn mul_term(&self, c: &Rational, m: &Monomial) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ctx, self.order);
        }
        // multiplication by a monomial preserves the order of terms
        Polynomial {
            ctx: self.ctx.clone(),
            order: self.order,
            terms: self.terms.iter().map(|(a, t)| (a * c, t.mul(m))).collect(),
        }
    }

    /// `self - c * m * g`, merged in one pass.
    pub fn sub_mul_term(&self, c: &Rational, m: &Monomial, g: &Polynomial) -> Polynomial {
        let order = self.order;
        let mut out = Vec::with_capacity(self.terms.len() + g.terms.len());
        let mut a = self.terms.iter().peekable();
        let mut b = g.terms.iter().map(|(gc, gm)| (-(gc * c), gm.mul(m))).peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => out.push(a.next().unwrap().clone()),
                (None, Some(_)) => out.push(b.next().unwrap()),
                (Some((_, am)), Some((_, bm))) => match order.compare(am, bm) {
                    Ordering::Greater => out.push(a.next().unwrap().clone()),
                    Ordering::Less => out.push(b.next().unwrap()),
                    Ordering::Equal => {
                        let (ac, am) = a.next().unwrap();
                        let (bc, _) = b.next().unwrap();
                        let s = ac + bc;
                        if !s.is_zero() {
                            out.push((s, am.clone()));
                        }
                    }
                },
            }
        }
        Polynomial {
            ctx: self.ctx.clone(),
            order,
            terms: out,
        }
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.sub_mul_term(&-Rational::one(), &Monomial::one(self.ctx.len()), other))
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.sub_mul_term(&Rational::one(), &Monomial::one(self.ctx.len()), other))
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (a, m) in &self.terms {
            for (b, n) in &other.terms {
                terms.push((a * b, m.mul(n)));
            }
        }
        Ok(Polynomial::from_terms(&self.ctx, self.order, terms))
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::constant(&self.ctx, self.order, Rational::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Parses the textual polynomial syntax, e.g. `p12^2 + 3/2*p13 - u11 u22`.
    pub fn parse(ctx: &Arc<VariableContext>, order: MonomialOrder, text: &str) -> Result<Polynomial> {
        Parser::new(ctx, text).parse().map(|terms| Polynomial::from_terms(ctx, order, terms))
    }
}

/// `leading_term(p, order)`: the maximal term of `p` under an arbitrary order.
pub fn leading_term(p: &Polynomial, order: MonomialOrder) -> Result<(Rational, Monomial)> {
    p.terms
        .iter()
        .max_by(|a, b| order.compare(&a.1, &b.1))
        .map(|(c, m)| (c.clone(), m.clone()))
        .ok_or(Error::ZeroPolynomial)
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("polynomial ring mismatch")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.checked_sub(rhs).expect("polynomial ring mismatch")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("polynomial ring mismatch")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (c, m)) in self.terms.iter().enumerate() {
            match (i, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let a = c.abs();
            if m.is_one() {
                write!(f, "{}", a)?;
            } else {
                if !a.is_one() {
                    write!(f, "{}*", a)?;
                }
                m.fmt_with(&self.ctx, f)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({})", self)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push(Token::Plus);
                i += 1
            }
            '-' => {
                out.push(Token::Minus);
                i += 1
            }
            '*' => {
                out.push(Token::Star);
                i += 1
            }
            '/' => {
                out.push(Token::Slash);
                i += 1
            }
            '^' => {
                out.push(Token::Caret);
                i += 1
            }
            d if d.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push(Token::Num(s.parse().unwrap()));
            }
            a if a.is_alphabetic() || a == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Token::Ident(chars[start..i].iter().collect()));
            }
            other => return Err(Error::Parse(format!("unexpected character `{other}`"))),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    ctx: &'a VariableContext,
    tokens: Vec<Token>,
    pos: usize,
    err: Option<Error>,
    text: &'a str,
}

impl<'a> Parser<'a> {
    fn new(ctx: &'a Arc<VariableContext>, text: &'a str) -> Self {
        let (tokens, err) = match tokenize(text) {
            Ok(t) => (t, None),
            Err(e) => (Vec::new(), Some(e)),
        };
        Parser {
            ctx,
            tokens,
            pos: 0,
            err,
            text,
        }
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn fail<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse(format!("{msg} in `{}`", self.text)))
    }

    fn parse(mut self) -> Result<Vec<(Rational, Monomial)>> {
        if let Some(e) = self.err.take() {
            return Err(e);
        }
        if self.tokens.is_empty() {
            return self.fail("empty polynomial");
        }
        let mut terms = Vec::new();
        let mut first = true;
        while self.peek().is_some() {
            let negative = match self.peek() {
                Some(Token::Plus) => {
                    self.bump();
                    false
                }
                Some(Token::Minus) => {
                    self.bump();
                    true
                }
                _ if first => false,
                _ => return self.fail("expected `+` or `-` between terms"),
            };
            first = false;
            let (c, m) = self.term()?;
            terms.push((if negative { -c } else { c }, m));
        }
        Ok(terms)
    }

    fn term(&mut self) -> Result<(Rational, Monomial)> {
        let mut coeff = Rational::one();
        let mut mono = Monomial::one(self.ctx.len());
        let mut factors = 0;
        loop {
            match self.peek() {
                Some(Token::Num(_)) => {
                    let Some(Token::Num(n)) = self.bump() else { unreachable!() };
                    let mut q = Rational::from_integer(n);
                    if self.peek() == Some(&Token::Slash) {
                        self.bump();
                        match self.bump() {
                            Some(Token::Num(d)) if !d.is_zero() => q /= Rational::from_integer(d),
                            _ => return self.fail("expected nonzero denominator"),
                        }
                    }
                    coeff *= q;
                }
                Some(Token::Ident(_)) => {
                    let Some(Token::Ident(name)) = self.bump() else { unreachable!() };
                    let Some(idx) = self.ctx.index_of(&name) else {
                        return self.fail(&format!("unknown variable `{name}`"));
                    };
                    let mut e = 1u32;
                    if self.peek() == Some(&Token::Caret) {
                        self.bump();
                        match self.bump() {
                            Some(Token::Num(n)) => {
                                e = u32::try_from(n).or_else(|_| self.fail("exponent too large"))?
                            }
                            _ => return self.fail("expected exponent after `^`"),
                        }
                    }
                    mono = mono.mul(&Monomial::var(self.ctx.len(), idx, e));
                }
                _ => break,
            }
            factors += 1;
            if self.peek() == Some(&Token::Star) {
                self.bump();
                if !matches!(self.peek(), Some(Token::Num(_)) | Some(Token::Ident(_))) {
                    return self.fail("dangling `*`");
                }
            }
        }
        if factors == 0 {
            return self.fail("expected a term");
        }
        Ok((coeff, mono))
    }
}
