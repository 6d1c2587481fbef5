//! Buchberger's algorithm for homogeneous ideals over ℚ.

use std::collections::HashSet;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_traits::Zero;

use crate::error::{Error, LimitDiagnostics, Result};
use crate::hilbert::MonomialIdeal;
use crate::poly::{Monomial, MonomialOrder, Polynomial, VariableContext};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Grading {
    Standard,
    Weighted(Vec<u32>),
}

impl Grading {
    pub fn weights(&self, nvars: usize) -> Vec<u32> {
        match self {
            Grading::Standard => vec![1; nvars],
            Grading::Weighted(w) => w.clone(),
        }
    }
}

/// Generators of a homogeneous ideal together with where they came from.
#[derive(Debug, Clone)]
pub struct IdealPresentation {
    ctx: Arc<VariableContext>,
    generators: Vec<Polynomial>,
    grading: Grading,
    provenance: String,
}

impl IdealPresentation {
    pub fn new(
        ctx: &Arc<VariableContext>,
        generators: Vec<Polynomial>,
        grading: Grading,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        let weights = grading.weights(ctx.len());
        if weights.len() != ctx.len() || weights.contains(&0) {
            return Err(Error::InvalidParameter(
                "grading needs one positive weight per variable".into(),
            ));
        }
        for g in &generators {
            if !Arc::ptr_eq(g.context(), ctx) && **g.context() != **ctx {
                return Err(Error::AmbientMismatch);
            }
            if g.is_zero() {
                return Err(Error::InvalidParameter("zero generator".into()));
            }
            if !g.is_homogeneous(&weights) {
                return Err(Error::NotHomogeneous(g.to_string()));
            }
        }
        Ok(IdealPresentation {
            ctx: ctx.clone(),
            generators,
            grading,
            provenance: provenance.into(),
        })
    }

    pub fn context(&self) -> &Arc<VariableContext> {
        &self.ctx
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn grading(&self) -> &Grading {
        &self.grading
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    /// One generator per line in the polynomial text syntax, terms in lex order.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for g in &self.generators {
            out.push_str(&g.with_order(MonomialOrder::Lex).to_string());
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, Default)]
pub struct Limits {
    pub max_degree: Option<u32>,
    pub timeout: Option<Duration>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GroebnerStats {
    pub pairs_processed: usize,
    pub pairs_skipped: usize,
    pub zero_reductions: usize,
    pub max_degree: u32,
}

/// A reduced Gröbner basis: monic elements sorted by descending leading monomial.
#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    ctx: Arc<VariableContext>,
    order: MonomialOrder,
    elements: Vec<Polynomial>,
    stats: GroebnerStats,
}

impl GroebnerBasis {
    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn context(&self) -> &Arc<VariableContext> {
        &self.ctx
    }

    pub fn elements(&self) -> &[Polynomial] {
        &self.elements
    }

    pub fn stats(&self) -> &GroebnerStats {
        &self.stats
    }

    pub fn reduce(&self, p: &Polynomial) -> Polynomial {
        normal_form(p, &self.elements, self.order)
    }

    pub fn contains(&self, p: &Polynomial) -> bool {
        self.reduce(p).is_zero()
    }

    /// Buchberger's criterion: every S-polynomial of the basis reduces to zero.
    pub fn satisfies_buchberger_criterion(&self) -> bool {
        let n = self.elements.len();
        (0..n).all(|i| {
            (i + 1..n).all(|j| {
                let s = s_polynomial(&self.elements[i], &self.elements[j], self.order)
                    .expect("basis elements are nonzero");
                self.reduce(&s).is_zero()
            })
        })
    }

    /// No term of any element is divisible by the leading monomial of another.
    pub fn is_reduced(&self) -> bool {
        self.elements.iter().enumerate().all(|(i, g)| {
            g.leading_term().is_ok_and(|(c, _)| c == &num_traits::One::one())
                && self.elements.iter().enumerate().all(|(j, h)| {
                    i == j
                        || g.terms()
                            .iter()
                            .all(|(_, m)| !h.leading_monomial().unwrap().divides(m))
                })
        })
    }

    pub fn leading_term_ideal(&self) -> MonomialIdeal {
        leading_term_ideal(self)
    }
}

/// Minimal monomial generators of the initial ideal.
pub fn leading_term_ideal(gb: &GroebnerBasis) -> MonomialIdeal {
    MonomialIdeal::new(
        gb.ctx.len(),
        gb.elements
            .iter()
            .map(|g| g.leading_monomial().unwrap().exps().to_vec())
            .collect(),
    )
}

/// Fully reduces `p` by `basis`: no term of the result is divisible by any leading monomial.
pub fn normal_form(p: &Polynomial, basis: &[Polynomial], order: MonomialOrder) -> Polynomial {
    let basis: Vec<Polynomial> = basis
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| g.with_order(order))
        .collect();
    let lms: Vec<&Monomial> = basis.iter().map(|g| g.leading_monomial().unwrap()).collect();
    let mut rest = p.with_order(order);
    let mut done = Vec::new();
    while let Some((c, m)) = rest.terms().first().cloned() {
        match lms.iter().position(|lm| lm.divides(&m)) {
            Some(k) => {
                let g = &basis[k];
                let factor = c / g.leading_term().unwrap().0;
                rest = rest.sub_mul_term(&factor, &m.div(lms[k]).unwrap(), g);
            }
            None => {
                done.push((c, m));
                rest = rest.tail();
            }
        }
    }
    Polynomial::from_terms(p.context(), order, done)
}

pub fn s_polynomial(f: &Polynomial, g: &Polynomial, order: MonomialOrder) -> Result<Polynomial> {
    let f = f.with_order(order);
    let g = g.with_order(order);
    if !f.same_ring(&g) {
        return Err(Error::AmbientMismatch);
    }
    let (fc, fm) = f.leading_term()?;
    let (gc, gm) = g.leading_term()?;
    let l = fm.lcm(gm);
    let a = f.mul_term(&fc.recip(), &l.div(fm).unwrap());
    Ok(a.sub_mul_term(&gc.recip(), &l.div(gm).unwrap(), &g))
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Task {
    // Variant order breaks degree ties: input generators before pairs.
    Input(usize),
    Pair(usize, usize),
}

/// Computes the reduced Gröbner basis of a homogeneous ideal.
///
/// Selection uses the normal strategy (smallest lcm degree, ties by pair index),
/// with the coprime and chain criteria. Input generators are fed in by degree.
pub fn buchberger(
    ideal: &IdealPresentation,
    order: MonomialOrder,
    limits: &Limits,
) -> Result<GroebnerBasis> {
    let start = Instant::now();
    let inputs: Vec<Polynomial> = ideal
        .generators
        .iter()
        .map(|g| g.with_order(order).monic())
        .collect();

    let mut basis: Vec<Polynomial> = Vec::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();
    // (degree, task); kept sorted lazily by scanning for the minimum.
    let mut queue: Vec<(u32, Task)> = inputs
        .iter()
        .enumerate()
        .map(|(i, g)| (g.total_degree().unwrap_or(0), Task::Input(i)))
        .collect();
    let mut stats = GroebnerStats::default();

    let diag = |stats: &GroebnerStats, basis: &Vec<Polynomial>, reason: String| {
        Error::LimitExceeded(LimitDiagnostics {
            pairs_processed: stats.pairs_processed,
            max_degree_reached: stats.max_degree,
            basis_size: basis.len(),
            reason,
        })
    };

    while !queue.is_empty() {
        if let Some(t) = limits.timeout {
            if start.elapsed() > t {
                return Err(diag(&stats, &basis, format!("timeout after {:?}", t)));
            }
        }
        let pos = queue
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.cmp(b.1))
            .map(|(k, _)| k)
            .unwrap();
        let (deg, task) = queue.swap_remove(pos);
        if let Some(max) = limits.max_degree {
            if deg > max {
                return Err(diag(&stats, &basis, format!("degree {} exceeds limit {}", deg, max)));
            }
        }
        let candidate = match task {
            Task::Input(i) => inputs[i].clone(),
            Task::Pair(i, j) => {
                pending.remove(&(i, j));
                let lmi = basis[i].leading_monomial().unwrap();
                let lmj = basis[j].leading_monomial().unwrap();
                if lmi.is_coprime(lmj) || chain_criterion(i, j, &basis, &pending) {
                    stats.pairs_skipped += 1;
                    continue;
                }
                stats.pairs_processed += 1;
                s_polynomial(&basis[i], &basis[j], order)?
            }
        };
        stats.max_degree = stats.max_degree.max(deg);
        let h = normal_form(&candidate, &basis, order);
        if h.is_zero() {
            stats.zero_reductions += 1;
            continue;
        }
        let h = h.monic();
        let new = basis.len();
        let lm = h.leading_monomial().unwrap().clone();
        basis.push(h);
        for i in 0..new {
            let l = basis[i].leading_monomial().unwrap().lcm(&lm);
            pending.insert((i, new));
            queue.push((l.degree(), Task::Pair(i, new)));
        }
    }

    let elements = reduce_basis(basis, order);
    Ok(GroebnerBasis {
        ctx: ideal.ctx.clone(),
        order,
        elements,
        stats,
    })
}

/// Skips (i, j) when some other leading monomial divides their lcm and both
/// of its pairs with i and j have already been treated.
fn chain_criterion(
    i: usize,
    j: usize,
    basis: &[Polynomial],
    pending: &HashSet<(usize, usize)>,
) -> bool {
    let l = basis[i]
        .leading_monomial()
        .unwrap()
        .lcm(basis[j].leading_monomial().unwrap());
    let key = |a: usize, b: usize| if a < b { (a, b) } else { (b, a) };
    (0..basis.len()).any(|k| {
        k != i
            && k != j
            && basis[k].leading_monomial().unwrap().divides(&l)
            && !pending.contains(&key(i, k))
            && !pending.contains(&key(j, k))
    })
}

fn reduce_basis(basis: Vec<Polynomial>, order: MonomialOrder) -> Vec<Polynomial> {
    // Minimal basis: drop elements whose leading monomial is divisible by another's.
    let mut minimal: Vec<Polynomial> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let lm = g.leading_monomial().unwrap();
        let redundant = basis.iter().enumerate().any(|(j, h)| {
            let hm = h.leading_monomial().unwrap();
            j != i && hm.divides(lm) && (hm != lm || j < i)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    let mut reduced = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<Polynomial> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| g.clone())
            .collect();
        let g = &minimal[i];
        let (c, m) = g.leading_term().unwrap();
        let tail = g.tail();
        let lead = Polynomial::from_terms(g.context(), order, vec![(c.clone(), m.clone())]);
        let r = &lead + &normal_form(&tail, &others, order);
        reduced.push(r.monic());
    }
    reduced.sort_by(|a, b| {
        order.compare(b.leading_monomial().unwrap(), a.leading_monomial().unwrap())
    });
    debug_assert!(reduced.iter().all(|g| !g.terms().iter().any(|(c, _)| c.is_zero())));
    reduced
}
