//! Reshetikhin-Turaev invariants from framed surgery links.
//!
//! τ(M) = ω^{−N−1} (Δ_L ω⁻¹)^{−σ} Σ_c ∏ Δ_{c_i} J(L, c)
//!
//! ω is never materialized: it lives in `omega_power`, and the unit phase
//! Δ_L ω⁻¹ in `anomaly_power`.

pub mod braid;
pub mod link;
pub mod skein;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::cyclotomic::CycNumber;
use crate::error::{Error, Result};
use crate::modular::{Color, ModularData};
use crate::report;

pub use link::{braid_closure, parse_link, signature, Component, FramedLink, LinkingData};
pub use skein::{SkeinEvaluator, DEFAULT_MAX_CABLED_CROSSINGS};

#[derive(Clone, Debug, Serialize)]
pub struct InvariantValue {
    pub level: u32,
    /// Σ_c ∏ Δ_{c_i} J(L, c), exact.
    pub reduced: CycNumber,
    pub omega_power: i64,
    pub anomaly_power: i64,
    #[serde(serialize_with = "report::complex")]
    pub numeric: Complex64,
}

impl InvariantValue {
    fn new(md: &ModularData, reduced: CycNumber, omega_power: i64, anomaly_power: i64) -> InvariantValue {
        let omega = md.global_dim().to_complex().re.sqrt();
        let phase = md.delta_l().to_complex() / omega;
        let numeric = reduced.to_complex() * omega.powi(omega_power as i32) * phase.powi(anomaly_power as i32);
        InvariantValue { level: md.level().r(), reduced, omega_power, anomaly_power, numeric }
    }

    /// |τ|² = S·conj(S)·(ω²)^{omega_power}; the phase has modulus one.
    pub fn modulus_squared(&self, md: &ModularData) -> CycNumber {
        let s = &self.reduced * &self.reduced.conjugate();
        let w = md.global_dim().pow(self.omega_power).expect("ω² is a nonzero real");
        &s * &w
    }

    /// Rewrites the value as `x · ω^parity` with parity 0 or 1, absorbing
    /// every even power of ω and the anomaly phase into `x`.
    pub fn canonical(&self, md: &ModularData) -> (CycNumber, i64) {
        let omega_power = self.omega_power - self.anomaly_power;
        let parity = omega_power.rem_euclid(2);
        let x = &self.reduced * &md.delta_l().pow(self.anomaly_power).expect("Δ_L ≠ 0");
        let x = &x * &md.global_dim().pow((omega_power - parity) / 2).expect("ω² ≠ 0");
        (x, parity)
    }

    /// Equality of the represented complex numbers, decided exactly.
    pub fn same_value(&self, other: &InvariantValue, md: &ModularData) -> bool {
        let (x, p) = self.canonical(md);
        let (y, q) = other.canonical(md);
        (x.is_zero() && y.is_zero()) || (p == q && x == y)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct RtOptions {
    pub threads: Option<usize>,
    /// Refuse when the number of colorings exceeds this.
    pub ceiling: u64,
    pub max_cabled_crossings: usize,
}

impl Default for RtOptions {
    fn default() -> Self {
        RtOptions { threads: None, ceiling: 100_000_000, max_cabled_crossings: DEFAULT_MAX_CABLED_CROSSINGS }
    }
}

pub fn colored_link_value(link: &FramedLink, coloring: &[Color], md: &ModularData) -> Result<CycNumber> {
    SkeinEvaluator::new(md).colored_link_value(link, coloring)
}

pub fn rt_invariant(link: &FramedLink, md: &ModularData) -> Result<InvariantValue> {
    rt_invariant_with(link, md, RtOptions::default())
}

pub fn rt_invariant_with(link: &FramedLink, md: &ModularData, opts: RtOptions) -> Result<InvariantValue> {
    let n = link.component_count();
    let k = md.num_colors();
    let total = (k as f64).powi(n as i32);
    if total > opts.ceiling as f64 {
        return Err(Error::ResourceLimit { what: "colorings", estimate: total, ceiling: opts.ceiling });
    }
    let total = k.pow(n as u32);
    let ev = SkeinEvaluator::new(md).with_max_cabled_crossings(opts.max_cabled_crossings);
    let order = md.order();
    let term = |idx: usize| -> Result<CycNumber> {
        let mut coloring = vec![0 as Color; n];
        let mut rest = idx;
        for c in coloring.iter_mut() {
            *c = (rest % k) as Color;
            rest /= k;
        }
        let mut v = ev.colored_link_value(link, &coloring)?;
        for &c in &coloring {
            v = &v * md.qdim(c);
        }
        Ok(v)
    };
    let sum = || -> Result<CycNumber> {
        (0..total)
            .into_par_iter()
            .map(term)
            .try_reduce(|| CycNumber::zero(order), |a, b| Ok(&a + &b))
    };
    let reduced = match opts.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::Domain(format!("thread pool: {e}")))?
            .install(sum)?,
        None => sum()?,
    };
    let sigma = link.linking_data().signature;
    Ok(InvariantValue::new(md, reduced, -(n as i64) - 1, -sigma))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::Level;

    fn md(r: u32) -> ModularData {
        ModularData::new(Level::new(r).unwrap())
    }

    fn check_numeric(v: &InvariantValue, md: &ModularData) {
        let omega = md.global_dim().to_complex().re.sqrt();
        let phase = md.delta_l().to_complex() / omega;
        let expected = v.reduced.to_complex() * omega.powi(v.omega_power as i32) * phase.powi(v.anomaly_power as i32);
        assert!((v.numeric - expected).norm() < 1e-10);
        let m = v.modulus_squared(md).to_complex();
        assert!((m.re - v.numeric.norm_sqr()).abs() < 1e-9 && m.im.abs() < 1e-12);
    }

    #[test]
    fn sphere() {
        for r in 3..=8 {
            let md = md(r);
            let v = rt_invariant(&FramedLink::empty(), &md).unwrap();
            assert!(v.reduced.is_one());
            assert_eq!((v.omega_power, v.anomaly_power), (-1, 0));
            assert_eq!(v.modulus_squared(&md), md.global_dim_inv().clone());
            check_numeric(&v, &md);
        }
        let md3 = md(3);
        let m = rt_invariant(&FramedLink::empty(), &md3).unwrap().modulus_squared(&md3);
        assert!((m.to_complex().re - 0.5).abs() < 1e-12);
    }

    #[test]
    fn s2xs1_and_unknot_values() {
        for r in 3..=7 {
            let md = md(r);
            let v = rt_invariant(&FramedLink::unknots(&[0]), &md).unwrap();
            assert!(v.modulus_squared(&md).is_one(), "r={r}");
            check_numeric(&v, &md);
            let ev = SkeinEvaluator::new(&md);
            for f in -3..=3 {
                for c in md.colors() {
                    let got = ev.colored_link_value(&FramedLink::unknots(&[f]), &[c]).unwrap();
                    assert_eq!(got, md.twist(c).pow(f).unwrap() * md.qdim(c).clone());
                }
            }
        }
    }

    #[test]
    fn kirby_one() {
        for r in 3..=6 {
            let md = md(r);
            for base in [FramedLink::empty(), FramedLink::unknots(&[2]), FramedLink::hopf(1, -2)] {
                let v = rt_invariant(&base, &md).unwrap();
                for f in [1, -1] {
                    let w = rt_invariant(&base.with_unknot(f), &md).unwrap();
                    assert!(v.same_value(&w, &md), "r={r} f={f}");
                    assert_eq!(v.modulus_squared(&md), w.modulus_squared(&md));
                    check_numeric(&w, &md);
                }
            }
            // a 0-framed unknot gives S²×S¹, which differs from S³
            let s3 = rt_invariant(&FramedLink::empty(), &md).unwrap();
            let w = rt_invariant(&FramedLink::empty().with_unknot(0), &md).unwrap();
            assert!(!s3.same_value(&w, &md), "r={r}");
        }
    }

    #[test]
    fn lens_four_presentations() {
        for r in 3..=6 {
            let md = md(r);
            let a = rt_invariant(&FramedLink::unknots(&[4]), &md).unwrap().modulus_squared(&md);
            let b = rt_invariant(&FramedLink::hopf(5, 1), &md).unwrap().modulus_squared(&md);
            let c = rt_invariant(&FramedLink::hopf(3, -1), &md).unwrap().modulus_squared(&md);
            assert_eq!(a, b, "r={r}");
            assert_eq!(a, c, "r={r}");
        }
    }

    #[test]
    fn coloring_ceiling() {
        let md = md(5);
        let opts = RtOptions { ceiling: 10, ..RtOptions::default() };
        let err = rt_invariant_with(&FramedLink::hopf(0, 0), &md, opts).unwrap_err();
        assert!(matches!(err, Error::ResourceLimit { what: "colorings", .. }));
    }
}
