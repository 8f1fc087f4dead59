//! Randomized invariant suites run by `pfq verify`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::classify::planar_verdict;
use crate::field::{FieldError, Tower};
use crate::geometry::{hurwitz_check, ram_report, GeometryError};
use crate::oracle::{do_planarity_equivalence, is_planar_bruteforce, FnTable};
use crate::quad::{build_quad, check_identities, check_identities_faulty, CoeffVec};

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub fields: Vec<(u32, u32, u32)>,
    /// Random c per field for the cheap suites.
    pub samples: usize,
    /// Random c per field for suites that need a brute-force pass.
    pub brute_samples: usize,
    pub seed: u64,
    /// Flip the sign in the fourth identity; the suite must then fail.
    pub inject_e4_fault: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            fields: vec![(3, 1, 1), (3, 1, 2), (5, 1, 1), (3, 2, 1)],
            samples: 50,
            brute_samples: 10,
            seed: 0,
            inject_e4_fault: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteLine {
    pub field: (u32, u32, u32),
    pub name: &'static str,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub first_failure: Option<String>,
}

impl SuiteLine {
    fn new(field: (u32, u32, u32), name: &'static str) -> SuiteLine {
        SuiteLine {
            field,
            name,
            passed: 0,
            failed: 0,
            skipped: 0,
            first_failure: None,
        }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(what());
            }
        }
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

fn random_c<'a>(t: &'a Tower, rng: &mut ChaCha8Rng) -> CoeffVec<'a> {
    loop {
        let idx: [u32; 4] = std::array::from_fn(|_| rng.gen_range(0..t.q2()));
        if let Ok(c) = CoeffVec::from_indices(t, idx) {
            return c;
        }
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn run_field(t: &Tower, cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Vec<SuiteLine> {
    let f = (t.p(), t.k(), t.ell());
    let mut ids = SuiteLine::new(f, "identities");
    let mut geo = SuiteLine::new(f, "ramification-sets");
    let mut hur = SuiteLine::new(f, "hurwitz");
    for _ in 0..cfg.samples {
        let c = random_c(t, rng);
        let r = if cfg.inject_e4_fault {
            check_identities_faulty(&c)
        } else {
            check_identities(&c)
        };
        ids.record(r.all(), || format!("c={c} {r:?}"));
        match ram_report(&c) {
            Ok(rep) => geo.record(rep.checks.all(), || format!("c={c} {:?}", rep.checks)),
            Err(
                GeometryError::ConstantG
                | GeometryError::BothUVZero
                | GeometryError::DegenerateInvariants
                | GeometryError::NonSeparable,
            ) => geo.skipped += 1,
            Err(e) => geo.record(false, || format!("c={c} {e}")),
        }
        let g = build_quad(&c).g;
        if g.is_constant() {
            hur.skipped += 1;
        } else {
            match hurwitz_check(&g) {
                Ok(h) => hur.record(h.holds && h.equality_iff_tame, || format!("c={c} {h:?}")),
                Err(GeometryError::NonSeparable) => hur.skipped += 1,
                Err(e) => hur.record(false, || format!("c={c} {e}")),
            }
        }
    }

    let mut deq = SuiteLine::new(f, "planar-iff-two-to-one");
    let mut agree = SuiteLine::new(f, "classifier-vs-brute");
    for _ in 0..cfg.brute_samples {
        let c = random_c(t, rng);
        let table = FnTable::of_coeffs(&c);
        let d = do_planarity_equivalence(t, &table);
        deq.record(d.agree, || format!("c={c} {d:?}"));
        match planar_verdict(&c) {
            Ok(v) => agree.record(v.planar == d.planar, || {
                format!("c={c} classifier={} brute={}", v.planar, d.planar)
            }),
            Err(e) => agree.record(false, || format!("c={c} {e}")),
        }
    }

    // closed forms for the two monomials
    let mut parity = SuiteLine::new(f, "monomial-parity");
    let delta = gcd(t.k(), t.ell());
    let one = t.one();
    let z = t.zero();
    let cases = [
        ([z, z, z, one], (t.ell() / delta).is_multiple_of(2)),
        ([z, z, one, z], (t.k() * t.ell() / (delta * delta)) % 2 == 1),
    ];
    for (cv, expect) in cases {
        let c = CoeffVec::new(cv).expect("nonzero");
        let brute = is_planar_bruteforce(t, &FnTable::of_coeffs(&c)).planar;
        parity.record(brute == expect, || {
            format!("c={c} brute={brute} expected={expect}")
        });
    }
    vec![ids, geo, hur, deq, agree, parity]
}

pub fn run_suite(cfg: &SuiteConfig) -> Result<Vec<SuiteLine>, FieldError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::new();
    for &(p, k, ell) in &cfg.fields {
        let t = Tower::new(p, k, ell, None)?;
        out.extend(run_field(&t, cfg, &mut rng));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes() {
        let cfg = SuiteConfig {
            fields: vec![(3, 1, 1), (3, 1, 2)],
            samples: 20,
            brute_samples: 4,
            seed: 1,
            inject_e4_fault: false,
        };
        let lines = run_suite(&cfg).unwrap();
        for l in &lines {
            assert!(l.ok(), "{l:?}");
        }
        assert_eq!(lines.len(), 12);
    }

    #[test]
    fn injected_fault_is_caught() {
        let cfg = SuiteConfig {
            fields: vec![(3, 1, 1)],
            samples: 10,
            brute_samples: 0,
            seed: 1,
            inject_e4_fault: true,
        };
        let lines = run_suite(&cfg).unwrap();
        let ids = lines.iter().find(|l| l.name == "identities").unwrap();
        assert!(!ids.ok());
        assert!(ids.first_failure.as_deref().unwrap().contains("e4: false"));
    }
}
