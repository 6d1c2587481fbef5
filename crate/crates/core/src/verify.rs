//! The self-verification suite run by `symtensor verify`.
//!
//! Each check reports pass, fail or skipped-by-limit. A Gröbner limit on a
//! stretch check is never a failure.

use std::collections::HashMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::catalog::{
    check_dimension_bounds, compute, hitchin_series, ideal_for, projective_space_dims,
    ruled_klein_series, series_via_groebner, two_quadrics_series, ComputeConfig, VarietySpec,
};
use crate::error::{Error, Result};
use crate::groebner::{GroebnerBasis, IdealPresentation};
use crate::hilbert::{series_from_generator_degrees, series_from_monomial_ideal, HilbertSeries, MonomialIdeal};
use crate::invariants::GroupLabel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    Pass,
    Fail,
    SkippedByLimit,
}

impl CheckStatus {
    pub fn label(self) -> &'static str {
        match self {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::SkippedByLimit => "SKIP",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub id: String,
    pub name: String,
    pub status: CheckStatus,
    pub stretch: bool,
    pub details: Vec<String>,
    pub seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    /// 1 on any failure, 3 if a mandatory check hit a limit, else 0.
    pub fn exit_code(&self) -> i32 {
        if self.checks.iter().any(|c| c.status == CheckStatus::Fail) {
            1
        } else if self
            .checks
            .iter()
            .any(|c| c.status == CheckStatus::SkippedByLimit && !c.stretch)
        {
            3
        } else {
            0
        }
    }

    pub fn get(&self, id: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.id == id)
    }
}

/// Outcome of a single check body.
enum Outcome {
    Pass(Vec<String>),
    Fail(Vec<String>),
    Limit(Vec<String>),
}

type GbResult = Result<(IdealPresentation, GroebnerBasis, HilbertSeries)>;

/// Shared state: Gröbner results are computed once and reused by later checks.
struct Suite {
    config: ComputeConfig,
    bases: HashMap<String, GbResult>,
    series_seen: Vec<(String, HilbertSeries)>,
    integrity: Vec<String>,
}

impl Suite {
    fn groebner(&mut self, spec: &str) -> GbResult {
        if let Some(r) = self.bases.get(spec) {
            return r.clone();
        }
        let r = VarietySpec::parse(spec).and_then(|s| {
            let ideal = ideal_for(&s)?;
            let (gb, series) = series_via_groebner(&ideal, &self.config.limits)?;
            Ok((ideal, gb, series))
        });
        if let Ok((_, _, s)) = &r {
            self.series_seen.push((spec.to_string(), s.clone()));
        }
        self.bases.insert(spec.to_string(), r.clone());
        r
    }

    fn note(&mut self, label: &str, s: &HilbertSeries) {
        self.series_seen.push((label.to_string(), s.clone()));
    }

    fn expand(&mut self, label: &str, s: &HilbertSeries, d: usize) -> Option<Vec<u128>> {
        match s.expand(d) {
            Ok(g) => Some(g.0),
            Err(e) => {
                self.integrity.push(format!("{label}: {e}"));
                None
            }
        }
    }
}

fn limit_or_fail(e: &Error, what: &str) -> Outcome {
    match e {
        Error::LimitExceeded(_) => Outcome::Limit(vec![format!("{what}: {e}")]),
        _ => Outcome::Fail(vec![format!("{what}: {e}")]),
    }
}

fn fmt_dims(d: &[u128]) -> String {
    d.iter().map(u128::to_string).collect::<Vec<_>>().join(",")
}

fn kunneth(a: &[u128], b: &[u128]) -> Vec<u128> {
    (0..a.len().min(b.len()))
        .map(|k| (0..=k).map(|i| a[i] * b[k - i]).sum())
        .collect()
}

/// Counts degree-`d` monomials outside the ideal by enumeration.
pub fn standard_monomial_counts(ideal: &MonomialIdeal, max_degree: usize) -> Vec<u128> {
    fn rec(ideal: &MonomialIdeal, cur: &mut [u32], i: usize, left: u32, out: &mut u128) {
        if i + 1 == cur.len() {
            cur[i] = left;
            if !ideal.contains(cur) {
                *out += 1;
            }
            return;
        }
        for e in 0..=left {
            cur[i] = e;
            rec(ideal, cur, i + 1, left - e, out);
        }
    }
    let n = ideal.nvars();
    (0..=max_degree)
        .map(|d| {
            let mut count = 0;
            if n == 0 {
                return u128::from(d == 0 && !ideal.contains(&[]));
            }
            rec(ideal, &mut vec![0; n], 0, d as u32, &mut count);
            count
        })
        .collect()
}

/// Seeded random monomial ideals: up to 5 variables, 6 generators, degree 4.
pub fn random_monomial_ideals(count: usize, seed: u64) -> Vec<MonomialIdeal> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=5);
            let k = rng.gen_range(0..=6);
            let gens = (0..k)
                .map(|_| {
                    let deg = rng.gen_range(1..=4u32);
                    let mut e = vec![0u32; n];
                    for _ in 0..deg {
                        e[rng.gen_range(0..n)] += 1;
                    }
                    e
                })
                .collect();
            MonomialIdeal::new(n, gens)
        })
        .collect()
}

fn check_pn(suite: &mut Suite) -> Outcome {
    let d = suite.config.max_degree;
    let mut details = Vec::new();
    let mut ok = true;
    for (n, depth) in [(2u32, d), (3, d)] {
        let spec = format!("Gr(1,{n})");
        let series = match suite.groebner(&spec) {
            Ok((_, _, s)) => s,
            Err(e) => return limit_or_fail(&e, &spec),
        };
        let Some(got) = suite.expand(&spec, &series, depth) else {
            return Outcome::Fail(vec![format!("{spec}: negative coefficient")]);
        };
        let want = projective_space_dims(n - 1, depth).0;
        let same = got == want;
        ok &= same;
        details.push(format!(
            "{spec} vs Pn({}) through degree {depth}: [{}] {}",
            n - 1,
            fmt_dims(&got),
            if same { "equal" } else { "DIFFERENT" }
        ));
    }
    if ok { Outcome::Pass(details) } else { Outcome::Fail(details) }
}

fn check_quadrics(suite: &mut Suite) -> Outcome {
    let d = suite.config.max_degree;
    let p1 = projective_space_dims(1, d).0;
    let expected = [p1.clone(), kunneth(&p1, &p1)];
    let mut details = Vec::new();
    let mut ok = true;
    for (n, want) in [1u32, 2].into_iter().zip(expected) {
        let spec = format!("Q({n})");
        let series = match suite.groebner(&spec) {
            Ok((_, _, s)) => s,
            Err(e) => return limit_or_fail(&e, &spec),
        };
        let Some(got) = suite.expand(&spec, &series, d) else {
            return Outcome::Fail(vec![format!("{spec}: negative coefficient")]);
        };
        let same = got == want;
        ok &= same;
        details.push(format!(
            "{spec} through degree {d}: [{}] {}",
            fmt_dims(&got),
            if same { "as expected" } else { "DIFFERENT" }
        ));
    }
    if ok { Outcome::Pass(details) } else { Outcome::Fail(details) }
}

fn check_bigness(suite: &mut Suite, specs: &[&str]) -> Outcome {
    let mut details = Vec::new();
    let mut ok = true;
    for spec in specs {
        let parsed = VarietySpec::parse(spec).expect("built-in spec");
        let series = match suite.groebner(spec) {
            Ok((_, _, s)) => s,
            Err(e) => return limit_or_fail(&e, spec),
        };
        let krull = series.krull_dim();
        let want = 2 * parsed.dim_x() as usize;
        ok &= krull == want;
        details.push(format!("{spec}: krull_dim {krull}, 2 dim X = {want}"));
    }
    if ok { Outcome::Pass(details) } else { Outcome::Fail(details) }
}

fn check_hitchin(suite: &mut Suite) -> Outcome {
    let h = match hitchin_series(2, 2, 1, true) {
        Ok(h) => h,
        Err(e) => return Outcome::Fail(vec![e.to_string()]),
    };
    let q = two_quadrics_series(3);
    suite.note("Hitchin(g=2,r=2,d=1,fixed)", &h);
    suite.note("2Q(3)", &q);
    let detail = vec![format!("Hitchin(g=2,r=2,d=1,fixed) = {h}; 2Q(3) = {q}")];
    if h.series_eq(&q) { Outcome::Pass(detail) } else { Outcome::Fail(detail) }
}

fn check_klein(suite: &mut Suite) -> Outcome {
    let mut details = Vec::new();
    let mut ok = true;
    let targets: Vec<(GroupLabel, usize, Option<HilbertSeries>)> = vec![
        (
            GroupLabel::BinaryDihedral(2),
            40,
            Some(series_from_generator_degrees(&[6, 4, 4], Some(12))),
        ),
        (
            GroupLabel::BinaryDihedral(3),
            40,
            Some(series_from_generator_degrees(&[8, 6, 4], Some(16))),
        ),
        (
            GroupLabel::BinaryIcosahedral,
            124,
            Some(series_from_generator_degrees(&[30, 20, 12], Some(60))),
        ),
        (GroupLabel::BinaryTetrahedral, 64, None),
        (GroupLabel::BinaryOctahedral, 64, None),
    ];
    for (label, window, expected) in targets {
        let cmp = match ruled_klein_series(label, window) {
            Ok(c) => c,
            Err(e) => {
                suite.integrity.push(format!("{label}: {e}"));
                return Outcome::Fail(vec![format!("{label}: {e}")]);
            }
        };
        let dims = &cmp.computed.dims.0;
        let odd_zero = dims.iter().skip(1).step_by(2).all(|&c| c == 0);
        ok &= odd_zero && dims[0] == 1;
        match expected {
            Some(s) => {
                suite.note(&format!("table {label}"), &s);
                let same = suite.expand(&label.to_string(), &s, window).as_deref() == Some(dims.as_slice());
                ok &= same;
                details.push(format!(
                    "{label} through degree {window}: {} {s}; odd coefficients zero: {odd_zero}",
                    if same { "equals" } else { "DIFFERS FROM" }
                ));
            }
            None => {
                ok &= cmp.computed.matched.is_some();
                details.push(format!("{}; odd coefficients zero: {odd_zero}", cmp.report()));
            }
        }
        if let Some(s) = &cmp.computed.rational_form {
            suite.note(&format!("Molien {label}"), s);
        }
    }
    if ok { Outcome::Pass(details) } else { Outcome::Fail(details) }
}

fn check_monomial_oracle(suite: &mut Suite) -> Outcome {
    let depth = 8;
    let mut bad = Vec::new();
    let ideals = random_monomial_ideals(20, 0x5eed);
    for (k, ideal) in ideals.iter().enumerate() {
        let s = series_from_monomial_ideal(ideal);
        let label = format!("random ideal #{k}");
        let got = suite.expand(&label, &s, depth);
        suite.note(&label, &s);
        if got.as_ref() != Some(&standard_monomial_counts(ideal, depth)) {
            bad.push(format!("{label} {:?}: series {s} disagrees with enumeration", ideal.generators()));
        }
    }
    if bad.is_empty() {
        Outcome::Pass(vec![format!("{} seeded ideals agree through degree {depth}", ideals.len())])
    } else {
        Outcome::Fail(bad)
    }
}

fn check_groebner_contract(suite: &mut Suite, stretch_ok: bool) -> Outcome {
    let mut specs = vec!["Gr(1,2)", "Gr(1,3)", "Q(1)", "Q(2)", "Q(3)"];
    if stretch_ok {
        specs.push("Gr(2,4)");
    }
    let mut details = Vec::new();
    let mut ok = true;
    for spec in specs {
        let (ideal, gb, _) = match suite.groebner(spec) {
            Ok(r) => r,
            Err(e) => return limit_or_fail(&e, spec),
        };
        let criterion = gb.satisfies_buchberger_criterion();
        let inputs = ideal.generators().iter().all(|g| gb.reduce(g).is_zero());
        let reduced = gb.is_reduced();
        ok &= criterion && inputs && reduced;
        details.push(format!(
            "{spec}: basis of size {}, S-pairs reduce to zero: {criterion}, inputs reduce to zero: {inputs}, reduced: {reduced}",
            gb.elements().len()
        ));
    }
    if ok { Outcome::Pass(details) } else { Outcome::Fail(details) }
}

fn check_bounds(suite: &mut Suite, stretch_ok: bool) -> Outcome {
    let mut details = Vec::new();
    let mut ok = true;
    let mut specs = vec![
        "Ab(1)", "Ab(2)", "Ab(3)", "Pn(1)", "Pn(2)", "Gr(1,2)", "Gr(1,3)", "Q(1)", "Q(2)", "Q(3)",
        "2Q(3)", "Hitchin(g=2,r=2,d=1,fixed)", "Hitchin(g=2,r=3,d=1)",
        "ParHitchin(g=4,r=2,s=1,mode=literal)", "ParHitchin(g=4,r=2,s=1,mode=symmetric)",
        "Klein(BD,2)", "Klein(BD,3)", "Klein(2T)", "Klein(2O)", "Prod(Pn(1),Ab(1))",
        "Trivial(general_type,dim=2)", "Trivial(hypersurface,d=3,dim=2)", "Trivial(ruled_general_E)",
    ];
    if stretch_ok {
        specs.push("Gr(2,4)");
    }
    for text in specs {
        let spec = VarietySpec::parse(text).expect("built-in spec");
        let series = if spec.is_groebner_routed() {
            match suite.groebner(text) {
                Ok((_, _, s)) => s,
                Err(e) => return limit_or_fail(&e, text),
            }
        } else {
            let cfg = ComputeConfig { max_degree: suite.config.max_degree, ..suite.config.clone() };
            match compute(&spec, &cfg) {
                Ok(e) => e.rational_form.expect("closed forms carry a series"),
                Err(e) => return limit_or_fail(&e, text),
            }
        };
        suite.note(text, &series);
        match check_dimension_bounds(&spec, &series) {
            Ok(b) => {
                if matches!(spec, VarietySpec::Abelian(_)) {
                    ok &= b.liu_tight == Some(true);
                    details.push(format!(
                        "{text}: krull {} = dim X - kappa = {} (Liu bound tight: {})",
                        b.krull_dim,
                        b.liu_bound.unwrap(),
                        b.liu_tight == Some(true)
                    ));
                } else {
                    details.push(format!("{text}: krull {} <= 2 dim X = {}", b.krull_dim, 2 * b.dim_x));
                }
            }
            Err(e) => {
                ok = false;
                details.push(e.to_string());
            }
        }
    }
    if ok { Outcome::Pass(details) } else { Outcome::Fail(details) }
}

fn check_integrity(suite: &mut Suite) -> Outcome {
    let depth = suite.config.max_degree.max(40);
    let seen = std::mem::take(&mut suite.series_seen);
    for (label, s) in &seen {
        match s.expand_signed(depth) {
            Ok(c) if c.iter().all(|&x| x >= 0) => {}
            Ok(_) => suite.integrity.push(format!("{label}: negative coefficient in {s}")),
            Err(e) => suite.integrity.push(format!("{label}: {e}")),
        }
    }
    if suite.integrity.is_empty() {
        Outcome::Pass(vec![format!(
            "{} series expanded through degree {depth} without negative coefficients; all Molien averages were non-negative integers",
            seen.len()
        )])
    } else {
        Outcome::Fail(suite.integrity.clone())
    }
}

/// Runs every acceptance check with the given configuration.
pub fn run_verify(config: &ComputeConfig) -> VerifyReport {
    let mut suite = Suite {
        config: config.clone(),
        bases: HashMap::new(),
        series_seen: Vec::new(),
        integrity: Vec::new(),
    };
    let mut checks = Vec::new();
    let mut run = |id: &str, name: &str, stretch: bool, suite: &mut Suite, f: &dyn Fn(&mut Suite) -> Outcome| {
        let start = Instant::now();
        let outcome = f(suite);
        let seconds = start.elapsed().as_secs_f64();
        let (status, details) = match outcome {
            Outcome::Pass(d) => (CheckStatus::Pass, d),
            Outcome::Fail(d) => (CheckStatus::Fail, d),
            Outcome::Limit(d) => (CheckStatus::SkippedByLimit, d),
        };
        checks.push(CheckResult {
            id: id.to_string(),
            name: name.to_string(),
            status,
            stretch,
            details,
            seconds,
        });
        status
    };
    run("1", "projective space: Grassmannian ideal vs closed form", false, &mut suite, &check_pn);
    run("2", "quadric coincidences", false, &mut suite, &check_quadrics);
    run("3", "homogeneous bigness: Q(1), Q(2), Q(3)", false, &mut suite, &|s| {
        check_bigness(s, &["Q(1)", "Q(2)", "Q(3)"])
    });
    let stretch = run("3s", "homogeneous bigness: Gr(2,4) (stretch)", true, &mut suite, &|s| {
        check_bigness(s, &["Gr(2,4)"])
    });
    let stretch_ok = stretch == CheckStatus::Pass;
    run("4", "Hitchin bridge", false, &mut suite, &check_hitchin);
    run("5", "Klein table vs Molien series", false, &mut suite, &check_klein);
    run("6", "monomial-ideal oracle", false, &mut suite, &check_monomial_oracle);
    run("7", "Groebner contract", false, &mut suite, &|s| check_groebner_contract(s, stretch_ok));
    run("8", "Krull dimension bounds", false, &mut suite, &|s| check_bounds(s, stretch_ok));
    run("9", "integrity", false, &mut suite, &check_integrity);
    VerifyReport { checks }
}
