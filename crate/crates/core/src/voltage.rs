//! Coded-cycle voltages in the twisted product `Z ⋊ Ḡ` and the three
//! certification strategies.
//!
//! A generator `s = ḡ·x^e` of the full group is modelled as the pair
//! `(ḡ, e)` with `e ∈ {0, 1}`; the twisted product follows the convention
//!
//! ```text
//! (g1, z1) · (g2, z2) = (g1 g2, chi(g2)·z1 + z2)
//! ```
//!
//! so that inverses are `(g, e)^-1 = (g^-1, -chi(g^-1)·e)`. The same
//! convention drives the explicit semidirect products in [`crate::concrete`],
//! which is what makes the cyclotomic-to-modular reduction bridge an identity
//! rather than a coincidence; the bridge is tested, not assumed.
//!
//! A certificate produced here covers *all* admissible primes at once: if the
//! field norm of a voltage has no prime factor above 5, the reduced voltage
//! is a unit modulo every prime above 5.

use num_bigint::BigInt;
use thiserror::Error;

use crate::cyclotomic::{smooth5, CycError, CycInt};
use crate::group::{Character, Elem, GroupTable};
use crate::hamsearch::CodedCycle;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VoltageError {
    #[error("step {0} refers to a generator outside the list (len {1})")]
    StepOutOfRange(i32, usize),
    #[error(transparent)]
    Cyc(#[from] CycError),
}

/// A generator of the full group, as its quotient image plus involvement
/// flags: whether its decomposition carries a nontrivial power of the
/// distinguished generator of the p-part (resp. q-part). Involvement
/// exponents are normalized to 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub gbar: Elem,
    pub inv_p: bool,
    pub inv_q: bool,
}

impl GeneratorSpec {
    pub fn plain(gbar: Elem) -> GeneratorSpec {
        GeneratorSpec {
            gbar,
            inv_p: false,
            inv_q: false,
        }
    }

    pub fn with_p(gbar: Elem) -> GeneratorSpec {
        GeneratorSpec {
            gbar,
            inv_p: true,
            inv_q: false,
        }
    }

    pub fn with_q(gbar: Elem) -> GeneratorSpec {
        GeneratorSpec {
            gbar,
            inv_p: false,
            inv_q: true,
        }
    }

    pub fn with_pq(gbar: Elem) -> GeneratorSpec {
        GeneratorSpec {
            gbar,
            inv_p: true,
            inv_q: true,
        }
    }
}

/// Which voltage component to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WhichPrime {
    P,
    Q,
}

/// The kernel component of the walk product in `Z ⋊ Ḡ`, for an arbitrary
/// involvement assignment: `involved[j]` says whether generator `j`
/// contributes kernel exponent 1.
pub fn walk_voltage(
    table: &GroupTable,
    cycle: &CodedCycle,
    gens: &[GeneratorSpec],
    involved: &[bool],
    chi: &Character,
) -> Result<CycInt, VoltageError> {
    let mut z = CycInt::zero(chi.m);
    for &step in &cycle.steps {
        let j = CodedCycle::gen_index(step);
        if j >= gens.len() {
            return Err(VoltageError::StepOutOfRange(step, gens.len()));
        }
        let (g, contribution) = if step > 0 {
            let g = gens[j].gbar;
            let c = if involved[j] {
                CycInt::from_int(chi.m, 1)
            } else {
                CycInt::zero(chi.m)
            };
            (g, c)
        } else {
            let g = table.inv(gens[j].gbar);
            let c = if involved[j] {
                CycInt::zeta_pow(chi.m, chi.exp[g] as i64).neg()
            } else {
                CycInt::zero(chi.m)
            };
            (g, c)
        };
        z = z.mul_zeta_pow(chi.exp[g] as i64).add(&contribution)?;
    }
    Ok(z)
}

/// Voltage of a coded cycle with involvement taken from the generator flags
/// for the requested prime.
pub fn twisted_voltage(
    table: &GroupTable,
    cycle: &CodedCycle,
    gens: &[GeneratorSpec],
    chi: &Character,
    which: WhichPrime,
) -> Result<CycInt, VoltageError> {
    let involved: Vec<bool> = gens
        .iter()
        .map(|g| match which {
            WhichPrime::P => g.inv_p,
            WhichPrime::Q => g.inv_q,
        })
        .collect();
    walk_voltage(table, cycle, gens, &involved, chi)
}

/// The endpoint of the projected walk in the quotient; coded cycles must
/// project to closed walks.
pub fn project_walk(table: &GroupTable, cycle: &CodedCycle, gens: &[GeneratorSpec]) -> Elem {
    cycle.steps.iter().fold(0, |at, &step| {
        let g = gens[CodedCycle::gen_index(step)].gbar;
        table.mul(at, if step > 0 { g } else { table.inv(g) })
    })
}

/// A certificate that one coded cycle has 5-smooth voltage norms at both
/// primes, so its lift is hamiltonian for every admissible prime pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FglCertificate {
    pub cycle_index: usize,
    pub norm_p: BigInt,
    pub norm_q: BigInt,
}

/// Scans the cycles in enumeration order and returns the first whose voltage
/// norms at both primes are 5-smooth; `None` when no cycle qualifies.
/// Absence is a value, not an error — it is what the exception catalog must
/// explain.
pub fn strategy_fgl(
    table: &GroupTable,
    cycles: &[CodedCycle],
    gens: &[GeneratorSpec],
    chi_p: &Character,
    chi_q: &Character,
) -> Option<FglCertificate> {
    debug_assert!(gens.iter().filter(|g| g.inv_p).count() <= 1);
    debug_assert!(gens.iter().filter(|g| g.inv_q).count() <= 1);
    for (i, cycle) in cycles.iter().enumerate() {
        let pi_p = twisted_voltage(table, cycle, gens, chi_p, WhichPrime::P)
            .expect("cycle steps come from the same generator list");
        let norm_p = pi_p.norm();
        if !smooth5(&norm_p) {
            continue;
        }
        let pi_q = twisted_voltage(table, cycle, gens, chi_q, WhichPrime::Q)
            .expect("cycle steps come from the same generator list");
        let norm_q = pi_q.norm();
        if smooth5(&norm_q) {
            return Some(FglCertificate {
                cycle_index: i,
                norm_p,
                norm_q,
            });
        }
    }
    None
}

/// The two q-voltages of a cycle with respect to the dual connection sets:
/// `primary` gives the distinguished q-carrier exponent 1 and the other
/// carrier 0; `secondary` swaps the roles.
pub fn dual_q_voltages(
    table: &GroupTable,
    cycle: &CodedCycle,
    gens: &[GeneratorSpec],
    chi_q: &Character,
    q_primary: usize,
    q_secondary: usize,
) -> Result<(CycInt, CycInt), VoltageError> {
    let mut only = vec![false; gens.len()];
    only[q_primary] = true;
    let primary = walk_voltage(table, cycle, gens, &only, chi_q)?;
    only[q_primary] = false;
    only[q_secondary] = true;
    let secondary = walk_voltage(table, cycle, gens, &only, chi_q)?;
    Ok((primary, secondary))
}

/// "Single" strategy: succeeds iff the secondary q-voltage vanishes and the
/// primary one has 5-smooth norm, in which case the q-voltage is a unit for
/// every admissible prime and every unknown exponent on the second carrier.
/// The caller has already certified the p-voltage. Returns the primary norm.
pub fn strategy_single(
    table: &GroupTable,
    cycle: &CodedCycle,
    gens: &[GeneratorSpec],
    chi_q: &Character,
    q_primary: usize,
    q_secondary: usize,
) -> Option<BigInt> {
    let (primary, secondary) =
        dual_q_voltages(table, cycle, gens, chi_q, q_primary, q_secondary).ok()?;
    if !secondary.is_zero() {
        return None;
    }
    let norm = primary.norm();
    smooth5(&norm).then_some(norm)
}

/// Determinant-pair strategy: for two cycles with certified p-voltages, a
/// 5-smooth norm of
///
/// ```text
/// det [ pi'_q(C1)  pi''_q(C1) ]
///     [ pi'_q(C2)  pi''_q(C2) ]
/// ```
///
/// means the two q-voltages cannot both vanish, whatever the unknown
/// exponent and the prime; at least one cycle then certifies. Returns the
/// determinant norm.
pub fn strategy_pair(
    table: &GroupTable,
    c1: &CodedCycle,
    c2: &CodedCycle,
    gens: &[GeneratorSpec],
    chi_q: &Character,
    q_primary: usize,
    q_secondary: usize,
) -> Option<BigInt> {
    let (p1, s1) = dual_q_voltages(table, c1, gens, chi_q, q_primary, q_secondary).ok()?;
    let (p2, s2) = dual_q_voltages(table, c2, gens, chi_q, q_primary, q_secondary).ok()?;
    let det = p1.mul(&s2).ok()?.sub(&s1.mul(&p2).ok()?).ok()?;
    let norm = det.norm();
    smooth5(&norm).then_some(norm)
}

/// Whether a generator equals its own inverse in the *full* group for every
/// admissible instantiation: the quotient image must be an involution and
/// each involved prime must be inverted by it. Used to build the coded-step
/// alphabet, so that `S ∪ S^{-1}` is modelled faithfully per cell.
pub fn self_inverse_in_full_group(
    table: &GroupTable,
    spec: &GeneratorSpec,
    chi_p: &Character,
    chi_q: &Character,
) -> bool {
    table.inv(spec.gbar) == spec.gbar
        && (!spec.inv_p || chi_p.is_minus_one_at(spec.gbar))
        && (!spec.inv_q || chi_q.is_minus_one_at(spec.gbar))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{c8, d8, table_for, GroupTag};
    use crate::hamsearch::enumerate_ham_cycles_masked;

    fn c2xc2() -> GroupTable {
        let (q, _) = d8().quotient(&[0, 2]).unwrap();
        q
    }

    #[test]
    fn uninvolved_cycles_have_zero_voltage() {
        let t = table_for(GroupTag::E8);
        let gens = vec![
            GeneratorSpec::plain(1),
            GeneratorSpec::plain(2),
            GeneratorSpec::plain(4),
        ];
        let chi = Character {
            m: 2,
            exp: vec![0, 1, 1, 0, 1, 0, 0, 1],
        };
        assert!(chi.is_homomorphism(&t));
        let cycles = enumerate_ham_cycles_masked(&t, &[1, 2, 4], &[false; 3]);
        for c in cycles {
            let v = twisted_voltage(&t, &c, &gens, &chi, WhichPrime::P).unwrap();
            assert!(v.is_zero());
        }
    }

    #[test]
    fn commutator_cycle_voltage_is_minus_two() {
        // quotient C2 x C2, S = {s, t}, s involved, chi(s) = 1, chi(t) = -1:
        // the cycle (s^-1, t^-1, s, t) has voltage -2, matching the
        // commutator [s, t] = x^-2 when t inverts x.
        let t = c2xc2();
        let gens = vec![GeneratorSpec::with_p(1), GeneratorSpec::plain(2)];
        let chi = Character {
            m: 2,
            exp: vec![0, 0, 1, 1],
        };
        assert!(chi.is_homomorphism(&t));
        let cycle = CodedCycle::new(vec![-1, -2, 1, 2]);
        let v = twisted_voltage(&t, &cycle, &gens, &chi, WhichPrime::P).unwrap();
        assert_eq!(v, CycInt::from_int(2, -2));
    }

    #[test]
    fn full_rotation_voltage_vanishes_at_order_8_character() {
        // C8 with s involved and chi of order 8: (s)^8 sums all 8th roots
        let t = c8();
        let gens = vec![GeneratorSpec::with_p(1)];
        let chi = Character {
            m: 8,
            exp: (0..8).collect(),
        };
        assert!(chi.is_homomorphism(&t));
        let cycle = CodedCycle::new(vec![1; 8]);
        let v = twisted_voltage(&t, &cycle, &gens, &chi, WhichPrime::P).unwrap();
        assert!(v.is_zero());
    }

    #[test]
    fn trivial_character_gives_signed_involvement_sum() {
        let t = c8();
        let gens = vec![GeneratorSpec::with_p(1)];
        let chi = Character::trivial(8);
        let cycle = CodedCycle::new(vec![1, 1, 1, -1, 1, 1, 1, 1]);
        let v = twisted_voltage(&t, &cycle, &gens, &chi, WhichPrime::P).unwrap();
        assert_eq!(v.as_int().unwrap(), BigInt::from(6)); // 7 forward, 1 back
    }

    #[test]
    fn splitting_is_a_crossed_homomorphism() {
        // voltage(W1 W2) = chi(proj W2) voltage(W1) + voltage(W2), at every
        // split point of sample cycles
        let t = table_for(GroupTag::D8);
        let multiset = vec![4usize, 1];
        let gens = vec![GeneratorSpec::with_p(4), GeneratorSpec::with_q(1)];
        let chi = Character {
            m: 2,
            exp: vec![0, 1, 0, 1, 0, 1, 0, 1],
        };
        assert!(chi.is_homomorphism(&t));
        let mask: Vec<bool> = multiset.iter().map(|&g| t.inv(g) != g).collect();
        let cycles = enumerate_ham_cycles_masked(&t, &multiset, &mask);
        assert!(!cycles.is_empty());
        let involved = [true, false];
        for c in cycles.iter().take(10) {
            let whole = walk_voltage(&t, c, &gens, &involved, &chi).unwrap();
            for cut in 1..c.steps.len() {
                let w1 = CodedCycle::new(c.steps[..cut].to_vec());
                let w2 = CodedCycle::new(c.steps[cut..].to_vec());
                let v1 = walk_voltage(&t, &w1, &gens, &involved, &chi).unwrap();
                let v2 = walk_voltage(&t, &w2, &gens, &involved, &chi).unwrap();
                let end2 = project_walk(&t, &w2, &gens);
                let combined = v1.mul_zeta_pow(chi.exp[end2] as i64).add(&v2).unwrap();
                assert_eq!(whole, combined);
            }
        }
    }

    #[test]
    fn reversal_inverts_the_walk_product() {
        // For a closed projected walk the product is (1, z), whose inverse is
        // (1, -z); the reversed, inverted cycle must compute exactly -z.
        let t = table_for(GroupTag::C4xC2);
        let multiset = vec![2usize, 1];
        let gens = vec![GeneratorSpec::with_p(2), GeneratorSpec::with_q(1)];
        let chi = Character {
            m: 4,
            exp: vec![0, 2, 1, 3, 2, 0, 3, 1],
        };
        assert!(chi.is_homomorphism(&t));
        let mask: Vec<bool> = multiset.iter().map(|&g| t.inv(g) != g).collect();
        for c in enumerate_ham_cycles_masked(&t, &multiset, &mask)
            .iter()
            .take(12)
        {
            let v = twisted_voltage(&t, c, &gens, &chi, WhichPrime::P).unwrap();
            let vr = twisted_voltage(&t, &c.reversed(), &gens, &chi, WhichPrime::P).unwrap();
            assert_eq!(vr, v.neg());
        }
    }

    #[test]
    fn fgl_strategy_certifies_the_rank_two_abelian_cell() {
        // C4 x C2 with an order-2 character pair; generators {s, t x_p x_q}.
        // The cycle (s^-3, t^-1, s^3, t) has voltage the commutator [s^3, t],
        // which generates, so the search must find some certified cycle.
        let t = table_for(GroupTag::C4xC2);
        let multiset = vec![2usize, 1]; // s = r (order 4), t = z
        let gens = vec![GeneratorSpec::plain(2), GeneratorSpec::with_pq(1)];
        // s inverts both primes, so the commutator [s^3, t] reaches both
        let chi_p = Character {
            m: 2,
            exp: vec![0, 0, 1, 1, 0, 0, 1, 1],
        };
        let chi_q = Character {
            m: 2,
            exp: vec![0, 1, 1, 0, 0, 1, 1, 0],
        };
        assert!(chi_p.is_homomorphism(&t) && chi_q.is_homomorphism(&t));
        let mask = vec![true, true];
        let cycles = enumerate_ham_cycles_masked(&t, &multiset, &mask);
        let cert = strategy_fgl(&t, &cycles, &gens, &chi_p, &chi_q).expect("cell must certify");
        // the explicit cycle (s^-3, t^-1, s^3, t) has both voltages 2
        let probe = CodedCycle::new(vec![-1, -1, -1, -2, 1, 1, 1, 2]);
        let vp = twisted_voltage(&t, &probe, &gens, &chi_p, WhichPrime::P).unwrap();
        let vq = twisted_voltage(&t, &probe, &gens, &chi_q, WhichPrime::Q).unwrap();
        assert_eq!(vp, CycInt::from_int(2, 2));
        assert_eq!(vq, CycInt::from_int(2, 2));
        assert!(smooth5(&cert.norm_p) && smooth5(&cert.norm_q));
    }

    #[test]
    fn single_fails_when_secondary_voltage_is_nonzero() {
        let t = table_for(GroupTag::C4xC2);
        let gens = vec![
            GeneratorSpec::plain(2),
            GeneratorSpec::with_q(1),
            GeneratorSpec::with_pq(3),
        ];
        let chi_q = Character {
            m: 2,
            exp: vec![0, 1, 0, 1, 0, 1, 0, 1],
        };
        // a walk with one forward step on the secondary carrier has secondary
        // voltage 1, so "single" must reject it whatever the primary voltage
        let probe = CodedCycle::new(vec![3]);
        let (_, sec) = dual_q_voltages(&t, &probe, &gens, &chi_q, 1, 2).unwrap();
        assert_eq!(sec, CycInt::from_int(2, 1));
        assert_eq!(strategy_single(&t, &probe, &gens, &chi_q, 1, 2), None);
    }

    #[test]
    fn pair_strategy_rejects_identical_rows_and_accepts_unit_matrix() {
        let t = table_for(GroupTag::C4xC2);
        let gens = vec![
            GeneratorSpec::plain(2),
            GeneratorSpec::with_q(1),
            GeneratorSpec::with_pq(3),
        ];
        let chi_q = Character {
            m: 2,
            exp: vec![0, 1, 0, 1, 0, 1, 0, 1],
        };
        let mask = vec![true, true, true];
        let cycles = enumerate_ham_cycles_masked(&t, &[2, 1, 3], &mask);
        // identical cycles: determinant 0, never smooth
        assert_eq!(
            strategy_pair(&t, &cycles[0], &cycles[0], &gens, &chi_q, 1, 2),
            None
        );
        // rows (1, 0) and (0, 1): probe walks stepping on one carrier each
        let w1 = CodedCycle::new(vec![2]);
        let w2 = CodedCycle::new(vec![3]);
        let norm = strategy_pair(&t, &w1, &w2, &gens, &chi_q, 1, 2).unwrap();
        assert_eq!(norm, BigInt::from(1));
    }

    #[test]
    fn self_inverse_detection_depends_on_the_characters() {
        let t = table_for(GroupTag::E8);
        let inverts = Character {
            m: 2,
            exp: vec![0, 1, 1, 0, 1, 0, 0, 1],
        };
        let centralizes_e1 = Character {
            m: 2,
            exp: vec![0, 0, 1, 1, 1, 1, 0, 0],
        };
        assert!(inverts.is_homomorphism(&t) && centralizes_e1.is_homomorphism(&t));
        let spec = GeneratorSpec::with_p(1);
        // e1 x_p is an involution iff e1 inverts the p-part
        assert!(self_inverse_in_full_group(&t, &spec, &inverts, &inverts));
        assert!(!self_inverse_in_full_group(
            &t,
            &spec,
            &centralizes_e1,
            &inverts
        ));
        // without involvement only the quotient image matters
        assert!(self_inverse_in_full_group(
            &t,
            &GeneratorSpec::plain(1),
            &centralizes_e1,
            &centralizes_e1
        ));
    }
}
