//! Hand-case verifiers: the explicit quotient cycles for the two families
//! the 8-vertex search cannot settle, checked end to end on concrete groups.
//!
//! Each case fixes its action table, builds the explicit group, replays the
//! quoted walks, asserts (i) closure in the claimed quotient, (ii)
//! hamiltonicity there, (iii) the exact closed-form voltage exponent, and
//! (iv), whenever the exponent is a unit, that the factor-group lift
//! traverses the full group. Mismatches are hard errors carrying both the
//! computed and the expected exponents.

use super::{fgl_lift, ConcreteError, ExEl, ExplicitGroup, NormalSpec};
use crate::group::{d8, e8};

/// Outcome of one hand-case verification: a list of human-readable facts,
/// each of which was checked exactly.
#[derive(Debug, Clone)]
pub struct HandCaseReport {
    pub case: String,
    pub p: u64,
    pub q: u64,
    pub checks: Vec<String>,
}

impl HandCaseReport {
    fn note(&mut self, s: String) {
        self.checks.push(s);
    }
}

pub const HAND_CASES: [&str; 6] = [
    "elemabel-2invert",
    "elemabel-1invert",
    "elemabel-central",
    "elemabel-exception",
    "s08-exception",
    "special-dihedral",
];

/// Runs one hand case at a concrete prime pair.
pub fn verify_hand_case(case: &str, p: u64, q: u64) -> Result<HandCaseReport, ConcreteError> {
    if p == q || p <= 5 || q <= 5 || !super::is_prime(p) || !super::is_prime(q) {
        return Err(ConcreteError::BadPrimes(p, q));
    }
    match case {
        "elemabel-2invert" => elemabel_2invert(p, q),
        "elemabel-1invert" => elemabel_1invert(p, q),
        "elemabel-central" => elemabel_central(p, q),
        "elemabel-exception" => elemabel_exception(p, q),
        "s08-exception" => s08_exception(p, q),
        "special-dihedral" => special_dihedral(p, q),
        other => Err(ConcreteError::UnknownCase(other.to_string())),
    }
}

fn fail(msg: String) -> ConcreteError {
    ConcreteError::HandCase(msg)
}

/// `(pattern repeated k times) minus its last step`.
fn repeat_hash(pattern: &[ExEl], k: usize) -> Vec<ExEl> {
    let mut v = Vec::with_capacity(pattern.len() * k);
    for _ in 0..k {
        v.extend_from_slice(pattern);
    }
    v.pop();
    v
}

fn walk_product(ex: &ExplicitGroup, steps: &[ExEl]) -> ExEl {
    steps.iter().fold(ex.identity(), |acc, &s| ex.mul(acc, s))
}

/// Asserts the voltage is `x_p^expected` and, when the exponent is a unit,
/// lift-verifies through the kernel-p quotient.
fn check_p_voltage(
    ex: &ExplicitGroup,
    report: &mut HandCaseReport,
    label: &str,
    steps: &[ExEl],
    expected_exp: i64,
) -> Result<(), ConcreteError> {
    let expected = ex.el(0, expected_exp, 0);
    let got = walk_product(ex, steps);
    if got != expected {
        return Err(fail(format!(
            "{label}: voltage {got:?}, expected x_p^{expected_exp} = {expected:?}"
        )));
    }
    if expected.1 != 0 {
        let walk = fgl_lift(ex, &NormalSpec::kernel_p(), steps)?;
        report.note(format!(
            "{label}: voltage x_p^{expected_exp} generates; lift of length {} verified",
            walk.len()
        ));
    } else {
        report.note(format!("{label}: voltage x_p^{expected_exp} is trivial mod p"));
    }
    Ok(())
}

fn check_q_voltage(
    ex: &ExplicitGroup,
    report: &mut HandCaseReport,
    label: &str,
    steps: &[ExEl],
    expected_exp: i64,
) -> Result<(), ConcreteError> {
    let expected = ex.el(0, 0, expected_exp);
    let got = walk_product(ex, steps);
    if got != expected {
        return Err(fail(format!(
            "{label}: voltage {got:?}, expected x_q^{expected_exp} = {expected:?}"
        )));
    }
    if expected.2 != 0 {
        let walk = fgl_lift(ex, &NormalSpec::kernel_q(), steps)?;
        report.note(format!(
            "{label}: voltage x_q^{expected_exp} generates; lift of length {} verified",
            walk.len()
        ));
    } else {
        report.note(format!("{label}: voltage x_q^{expected_exp} is trivial mod q"));
    }
    Ok(())
}

/// Elementary abelian quotient, three generators, two of which invert the
/// whole kernel: `a = e1 x_p`, `b = e2 x_p^2 x_q`, `c = e3`.
///
/// The 8-step commutator cycle has voltage `x_p^{-2(2i-j)}`, dead at
/// `(i, j) = (1, 2)`; the two index-2-quotient cycles take over with
/// exponents `2(1-4q)` mod p and `2(1-2p)` mod q, and the two congruences
/// that would kill both cannot hold simultaneously.
fn elemabel_2invert(p: u64, q: u64) -> Result<HandCaseReport, ConcreteError> {
    let mut report = HandCaseReport {
        case: "elemabel-2invert".into(),
        p,
        q,
        checks: Vec::new(),
    };
    // e1 inverts C_p, centralizes C_q; e2 and e3 invert both
    let sign_p = [1i64, -1, -1, 1, -1, 1, 1, -1];
    let sign_q = [1i64, 1, -1, -1, -1, -1, 1, 1];
    let ex = ExplicitGroup::from_sign_actions(e8(), p, q, &sign_p, &sign_q)?;

    // commutator-cycle voltage identity: generates iff 2i != j (mod p)
    for i in 0..4i64 {
        for j in 0..4i64 {
            let a = ex.el(1, i, 0);
            let b = ex.el(2, j, 1);
            let c = ex.el(4, 0, 0);
            let cyc = [
                ex.inv(a),
                ex.inv(b),
                a,
                ex.inv(c),
                ex.inv(a),
                b,
                a,
                c,
            ];
            let v = walk_product(&ex, &cyc);
            let expected = ex.el(0, -2 * (2 * i - j), -2);
            if v != expected {
                return Err(fail(format!(
                    "commutator cycle voltage at (i,j)=({i},{j}): {v:?} != {expected:?}"
                )));
            }
            let generates = v.1 != 0 && v.2 != 0;
            let predicted = (2 * i - j).rem_euclid(p as i64) != 0;
            if generates != predicted {
                return Err(fail(format!(
                    "generation predicate at (i,j)=({i},{j}) disagrees"
                )));
            }
        }
    }
    report.note("commutator cycle voltage is x_p^{-2(2i-j)} x_q^{-2} for all i, j < 4".into());

    // the dead configuration i = 1, j = 2
    let a = ex.el(1, 1, 0);
    let b = ex.el(2, 2, 1);
    let c = ex.el(4, 0, 0);

    // C1 = ((b, c)^{2q} #, a)^2, hamiltonian in G/C_p, voltage x_p^{2(1-4q)}
    let mut half = repeat_hash(&[b, c], 2 * q as usize);
    half.push(a);
    let c1: Vec<ExEl> = half.iter().chain(half.iter()).copied().collect();
    if c1.len() != 8 * q as usize {
        return Err(fail("C1 has the wrong length".into()));
    }
    check_p_voltage(&ex, &mut report, "C1", &c1, 2 * (1 - 4 * q as i64))?;

    // C2 = ((b, c)^p #, a, (c, b)^p #, a)^2, hamiltonian in G/C_q,
    // voltage x_q^{2(1-2p)}
    let mut c2 = repeat_hash(&[b, c], p as usize);
    c2.push(a);
    c2.extend(repeat_hash(&[c, b], p as usize));
    c2.push(a);
    let c2: Vec<ExEl> = c2.iter().chain(c2.iter()).copied().collect();
    if c2.len() != 8 * p as usize {
        return Err(fail("C2 has the wrong length".into()));
    }
    check_q_voltage(&ex, &mut report, "C2", &c2, 2 * (1 - 2 * p as i64))?;

    // both voltages dead would force 4q = 1 (mod p) and 2p = 1 (mod q)
    let dead1 = (4 * q) % p == 1;
    let dead2 = (2 * p) % q == 1;
    if dead1 && dead2 {
        return Err(fail("both escape congruences hold; impossible pair".into()));
    }
    report.note("at least one of the two escape voltages generates".into());
    Ok(report)
}

/// Elementary abelian quotient with exactly one kernel-inverting generator:
/// `a = e1 x_p`, `b = e2 x_q`, `c = e3`; the first escape cycle already has
/// voltage `x_p^2`, a unit, so the lift always verifies.
fn elemabel_1invert(p: u64, q: u64) -> Result<HandCaseReport, ConcreteError> {
    let mut report = HandCaseReport {
        case: "elemabel-1invert".into(),
        p,
        q,
        checks: Vec::new(),
    };
    // e1 inverts C_p, centralizes C_q; e2 centralizes C_p, inverts C_q;
    // e3 inverts both
    let sign_p = [1i64, -1, 1, -1, -1, 1, -1, 1];
    let sign_q = [1i64, 1, -1, -1, -1, -1, 1, 1];
    let ex = ExplicitGroup::from_sign_actions(e8(), p, q, &sign_p, &sign_q)?;
    let a = ex.el(1, 1, 0);
    let b = ex.el(2, 0, 1);
    let c = ex.el(4, 0, 0);
    let mut half = repeat_hash(&[b, c], 2 * q as usize);
    half.push(a);
    let c1: Vec<ExEl> = half.iter().chain(half.iter()).copied().collect();
    check_p_voltage(&ex, &mut report, "C1", &c1, 2)?;
    Ok(report)
}

/// A generator with full central action and order `2pq`: the commutator
/// cycle dies, and the occurrence-substitution adjustment repairs it.
fn elemabel_central(p: u64, q: u64) -> Result<HandCaseReport, ConcreteError> {
    let mut report = HandCaseReport {
        case: "elemabel-central".into(),
        p,
        q,
        checks: Vec::new(),
    };
    let sign_p = [1i64, 1, -1, -1, 1, 1, -1, -1]; // e2 inverts C_p
    let sign_q = [1i64, 1, 1, 1, -1, -1, -1, -1]; // e3 inverts C_q
    let ex = ExplicitGroup::from_sign_actions(e8(), p, q, &sign_p, &sign_q)?;
    let a = ex.el(1, 1, 1);
    // a^2 = x_p^2 x_q^2, so a has order 2pq
    if ex.pow(a, 2) != ex.el(0, 2, 2) {
        return Err(fail("central generator must have order 2pq".into()));
    }
    let b = ex.el(2, 0, 0);
    let c = ex.el(4, 0, 0);
    let ai = ex.inv(a);
    let steps = vec![ai, ex.inv(b), a, ex.inv(c), ai, b, a, c];
    let dead = walk_product(&ex, &steps);
    if dead != ex.identity() {
        return Err(fail(format!("expected a dead voltage, got {dead:?}")));
    }
    report.note("commutator cycle voltage is trivial; adjustment required".into());
    let (adjusted, subset) = super::occur3_adjust(&ex, &steps, a, ai)?;
    let walk = fgl_lift(&ex, &NormalSpec::kernel_pq(), &adjusted)?;
    report.note(format!(
        "substituting a -> a^-1 at positions {subset:?} gives a generating voltage; \
         lift of length {} verified",
        walk.len()
    ));
    Ok(report)
}

/// The elementary abelian exception pattern: two generators with identical
/// action, whose quotient by the central difference discharges the case.
fn elemabel_exception(p: u64, q: u64) -> Result<HandCaseReport, ConcreteError> {
    let mut report = HandCaseReport {
        case: "elemabel-exception".into(),
        p,
        q,
        checks: Vec::new(),
    };
    // e1 inverts both; e2, e3 centralize C_p and invert C_q
    let sign_p = [1i64, -1, 1, -1, 1, -1, 1, -1];
    let sign_q = [1i64, -1, -1, 1, -1, 1, 1, -1];
    let ex = ExplicitGroup::from_sign_actions(e8(), p, q, &sign_p, &sign_q)?;
    // S = {e1 x_q, e2, e3, e1 e2 x_p}
    let gens = [ex.el(1, 0, 1), ex.el(2, 0, 0), ex.el(4, 0, 0), ex.el(3, 1, 0)];
    if ex.closure(&gens).len() != ex.order() {
        return Err(fail("exception connection set must generate".into()));
    }
    let b = gens[1];
    let c = gens[2];
    let d = ex.mul(ex.inv(b), c);
    if !ex.is_central(d) {
        return Err(fail("e2^-1 e3 must be central".into()));
    }
    if ex.mul(d, d) != ex.identity() {
        return Err(fail("e2^-1 e3 must have order 2".into()));
    }
    report.note(
        "e2 and e3 share their kernel action, so e2^-1 e3 is a central involution; \
         the order-2 central quotient discharges the case"
            .into(),
    );
    Ok(report)
}

/// The order-8-subgroup exception pattern `S = {a, b, c, a b x_p x_q}` with
/// `b` and `c` acting identically; same centrality discharge.
fn s08_exception(p: u64, q: u64) -> Result<HandCaseReport, ConcreteError> {
    let mut report = HandCaseReport {
        case: "s08-exception".into(),
        p,
        q,
        checks: Vec::new(),
    };
    // a inverts C_p and centralizes C_q; b, c centralize C_p and invert C_q
    let sign_p = [1i64, -1, 1, -1, 1, -1, 1, -1];
    let sign_q = [1i64, 1, -1, -1, -1, -1, 1, 1];
    let ex = ExplicitGroup::from_sign_actions(e8(), p, q, &sign_p, &sign_q)?;
    let a = ex.el(1, 0, 0);
    let b = ex.el(2, 0, 0);
    let c = ex.el(4, 0, 0);
    let fourth = ex.el(3, 1, 1); // a b x_p x_q
    if ex.closure(&[a, b, c, fourth]).len() != ex.order() {
        return Err(fail("exception connection set must generate".into()));
    }
    let d = ex.mul(ex.inv(b), c);
    if !ex.is_central(d) || ex.mul(d, d) != ex.identity() {
        return Err(fail("b^-1 c must be a central involution".into()));
    }
    report.note(
        "b and c share their kernel action, so b^-1 c is a central involution; \
         the order-2 central quotient discharges the case"
            .into(),
    );
    Ok(report)
}

/// The dihedral-quotient hand case: `s = f`, `t = f x4 x_p x_q^{-1}`,
/// `u = f x4^{-1} x_q`, with `f` centralizing `C_p` / inverting `C_q` and
/// `x4` inverting `C_p` / centralizing `C_q`.
///
/// The two short cycles live in the order-4p quotient by `<x4^2> x C_q` and
/// have voltages `x4^2 x_q^{2(2p-1)}` and `x4^2 x_q^{2(1-2p)}`; the long
/// cycle lives in `G/C_p` and has voltage `x_p^{1-4q}`.
fn special_dihedral(p: u64, q: u64) -> Result<HandCaseReport, ConcreteError> {
    let mut report = HandCaseReport {
        case: "special-dihedral".into(),
        p,
        q,
        checks: Vec::new(),
    };
    // indices in the dihedral table: x = 1, x^2 = 2, f = 4, fx = 5, fx^3 = 7
    let sign_p: Vec<i64> = (0..8).map(|g| if g % 4 % 2 == 0 { 1 } else { -1 }).collect();
    let sign_q: Vec<i64> = (0..8).map(|g| if g / 4 == 0 { 1 } else { -1 }).collect();
    let ex = ExplicitGroup::from_sign_actions(d8(), p, q, &sign_p, &sign_q)?;
    let s = ex.el(4, 0, 0); // f
    let t = ex.el(5, 1, -1); // f x4 x_p x_q^-1
    let u = ex.el(7, 0, 1); // f x4^-1 x_q

    let central = NormalSpec {
        base_part: vec![0, 2],
        include_p: false,
        include_q: true,
    };

    // C1 = ((t, u)^p #, s)^2 and C2 = ((u, t)^p #, s)^2 in the quotient by
    // <x4^2> x C_q
    for (label, first, second, expo) in [
        ("C1", t, u, 2 * (2 * p as i64 - 1)),
        ("C2", u, t, 2 * (1 - 2 * p as i64)),
    ] {
        let mut half = repeat_hash(&[first, second], p as usize);
        half.push(s);
        let cycle: Vec<ExEl> = half.iter().chain(half.iter()).copied().collect();
        if cycle.len() != 4 * p as usize {
            return Err(fail(format!("{label} has the wrong length")));
        }
        let v = walk_product(&ex, &cycle);
        let expected = ex.el(2, 0, expo);
        if v != expected {
            return Err(fail(format!(
                "{label}: voltage {v:?}, expected x4^2 x_q^{expo} = {expected:?}"
            )));
        }
        if v.2 != 0 {
            let walk = fgl_lift(&ex, &central, &cycle)?;
            report.note(format!(
                "{label}: voltage x4^2 x_q^{expo} generates <x4^2> x C_q; \
                 lift of length {} verified",
                walk.len()
            ));
        } else {
            report.note(format!("{label}: voltage x4^2 x_q^{expo} dead mod q"));
        }
    }

    // C = ((t, u)^{2q} #, s, (u, t)^{2q} #, s) in G/C_p with voltage
    // x_p^{1-4q}
    let mut c = repeat_hash(&[t, u], 2 * q as usize);
    c.push(s);
    c.extend(repeat_hash(&[u, t], 2 * q as usize));
    c.push(s);
    if c.len() != 8 * q as usize {
        return Err(fail("C has the wrong length".into()));
    }
    check_p_voltage(&ex, &mut report, "C", &c, 1 - 4 * q as i64)?;

    // dead everywhere would need 4p = 1 (mod q) and 4q = 1 (mod p)
    if (4 * p) % q == 1 && (4 * q) % p == 1 {
        return Err(fail("both dihedral congruences hold; impossible pair".into()));
    }
    report.note("the two dihedral escape congruences cannot both hold".into());
    Ok(report)
}

/// Sweep confirming that no pair `5 < p, q < limit` satisfies both
/// `4p ≡ 1 (mod q)` and `4q ≡ 1 (mod p)`.
pub fn dihedral_congruence_pairs(limit: u64) -> Vec<(u64, u64)> {
    let primes: Vec<u64> = (7..limit).filter(|&n| super::is_prime(n)).collect();
    let mut out = Vec::new();
    for &p in &primes {
        for &q in &primes {
            if p != q && (4 * p) % q == 1 && (4 * q) % p == 1 {
                out.push((p, q));
            }
        }
    }
    out
}

/// Sweep for the elementary abelian escape: no pair `5 < p, q < limit` has
/// both `4q ≡ 1 (mod p)` and `2p ≡ 1 (mod q)`.
pub fn elemabel_congruence_pairs(limit: u64) -> Vec<(u64, u64)> {
    let primes: Vec<u64> = (7..limit).filter(|&n| super::is_prime(n)).collect();
    let mut out = Vec::new();
    for &p in &primes {
        for &q in &primes {
            if p != q && (4 * q) % p == 1 && (2 * p) % q == 1 {
                out.push((p, q));
            }
        }
    }
    out
}
