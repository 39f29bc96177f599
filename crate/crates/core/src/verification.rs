//! Checks Z_TV(M) = |τ(M)|² exactly on manifolds given both as a
//! triangulation and as a surgery link.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::cyclotomic::CycNumber;
use crate::error::{Error, Result};
use crate::modular::{Level, ModularData};
use crate::rt::{rt_invariant_with, FramedLink, RtOptions};
use crate::smith::AbelianGroup;
use crate::triangulation::{census, homology_h1, Triangulation};
use crate::tv::{tv_state_sum, TvOptions};

#[derive(Clone, Debug)]
pub struct ManifoldPair {
    pub name: String,
    pub triangulation: Triangulation,
    pub surgery: FramedLink,
    pub expected_h1: AbelianGroup,
}

impl ManifoldPair {
    /// Checks that both presentations have the expected first homology.
    pub fn new(
        name: impl Into<String>,
        triangulation: Triangulation,
        surgery: FramedLink,
        expected_h1: AbelianGroup,
    ) -> Result<ManifoldPair> {
        let name = name.into();
        let tri = homology_h1(&triangulation)?;
        if tri != expected_h1 {
            return Err(Error::Domain(format!(
                "{name}: triangulation has H1 = {tri}, expected {expected_h1}"
            )));
        }
        let link = surgery.homology_h1();
        if link != expected_h1 {
            return Err(Error::Domain(format!(
                "{name}: surgery link has H1 = {link}, expected {expected_h1}"
            )));
        }
        Ok(ManifoldPair { name, triangulation, surgery, expected_h1 })
    }

    /// Pairs whose H1 merely agree between the two presentations.
    pub fn from_presentations(name: impl Into<String>, triangulation: Triangulation, surgery: FramedLink) -> Result<ManifoldPair> {
        let h1 = homology_h1(&triangulation)?;
        ManifoldPair::new(name, triangulation, surgery, h1)
    }
}

/// S³, RP³ = L(2,1), L(3,1), L(4,1), L(5,1) and S²×S¹; L(p,1) is surgery on
/// the p-framed unknot.
pub fn bundled_pairs() -> Vec<ManifoldPair> {
    let c = census();
    let lens = |p: u64| {
        let name = format!("L{p}_1");
        ManifoldPair::new(name.clone(), c[name.as_str()].clone(), FramedLink::unknots(&[p as i64]), AbelianGroup::cyclic(p))
            .expect("bundled lens space")
    };
    let mut pairs = vec![
        ManifoldPair::new("S3", c["S3_2tet"].clone(), FramedLink::empty(), AbelianGroup::trivial()).expect("S3"),
        lens(2),
    ];
    pairs[1].name = "RP3".into();
    pairs.extend((3..=5).map(lens));
    pairs.push(
        ManifoldPair::new("S2xS1", c["S2xS1"].clone(), FramedLink::unknots(&[0]), AbelianGroup::free(1)).expect("S2xS1"),
    );
    pairs
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub name: String,
    pub level: u32,
    pub tv_value: CycNumber,
    pub rt_modsq: CycNumber,
    pub equal: bool,
    /// |numeric(tv) − numeric(rt)|, for diagnostics only.
    pub numeric_residual: f64,
    pub tv_numeric: f64,
    #[serde(skip)]
    pub tv_time: Duration,
    #[serde(skip)]
    pub rt_time: Duration,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct VerifyOptions {
    pub tv: TvOptions,
    pub rt: RtOptions,
}

pub fn verify_pair(pair: &ManifoldPair, level: Level, opts: &VerifyOptions) -> Result<VerificationReport> {
    let md = ModularData::new(level);
    verify_pair_with(pair, &md, opts)
}

pub fn verify_pair_with(pair: &ManifoldPair, md: &ModularData, opts: &VerifyOptions) -> Result<VerificationReport> {
    let start = Instant::now();
    let tv = tv_state_sum(&pair.triangulation, md, &opts.tv)?;
    let tv_time = start.elapsed();
    let start = Instant::now();
    let rt = rt_invariant_with(&pair.surgery, md, opts.rt)?;
    let rt_modsq = rt.modulus_squared(md);
    let rt_time = start.elapsed();
    let residual = &tv.value - &rt_modsq;
    Ok(VerificationReport {
        name: pair.name.clone(),
        level: md.level().r(),
        numeric_residual: crate::report::clean(residual.to_complex().norm()),
        tv_numeric: crate::report::clean(tv.value.to_complex().re),
        equal: residual.is_zero(),
        tv_value: tv.value,
        rt_modsq,
        tv_time,
        rt_time,
    })
}

/// Every bundled pair at every level, in (level, pair) order.
pub fn verify_suite(levels: &[Level], opts: &VerifyOptions) -> Result<Vec<VerificationReport>> {
    let pairs = bundled_pairs();
    verify_pairs(&pairs, levels, opts)
}

pub fn verify_pairs(pairs: &[ManifoldPair], levels: &[Level], opts: &VerifyOptions) -> Result<Vec<VerificationReport>> {
    let mds: Vec<ModularData> = levels.iter().map(|&l| ModularData::new(l)).collect();
    let jobs: Vec<(usize, usize)> = (0..mds.len()).flat_map(|l| (0..pairs.len()).map(move |p| (l, p))).collect();
    jobs.par_iter().map(|&(l, p)| verify_pair_with(&pairs[p], &mds[l], opts)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn level(r: u32) -> Level {
        Level::new(r).unwrap()
    }

    #[test]
    fn bundled_pairs_are_consistent() {
        let names: Vec<String> = bundled_pairs().into_iter().map(|p| p.name).collect();
        assert_eq!(names, ["S3", "RP3", "L3_1", "L4_1", "L5_1", "S2xS1"]);
    }

    #[test]
    fn homology_mismatch_is_rejected() {
        let err = ManifoldPair::new("bad", census()["L3_1"].clone(), FramedLink::unknots(&[4]), AbelianGroup::cyclic(3))
            .unwrap_err()
            .to_string();
        assert!(err.contains("surgery link"), "{err}");
    }

    #[test]
    fn examples() {
        let opts = VerifyOptions::default();
        let pairs = bundled_pairs();
        let s3 = verify_pair(&pairs[0], level(4), &opts).unwrap();
        assert!(s3.equal);
        assert_eq!(s3.tv_value.as_rational().unwrap().to_string(), "1/4");
        let s2s1 = verify_pair(&pairs[5], level(5), &opts).unwrap();
        assert!(s2s1.equal && s2s1.tv_value.is_one());
        assert!(verify_pair(&pairs[2], level(5), &opts).unwrap().equal);
        assert!(verify_suite(&[], &opts).unwrap().is_empty());
    }

    #[test]
    fn suite_low_levels() {
        let reports = verify_suite(&[level(3), level(4), level(5)], &VerifyOptions::default()).unwrap();
        assert_eq!(reports.len(), 18);
        for r in &reports {
            assert!(r.equal, "{} r={}", r.name, r.level);
            assert_eq!(r.tv_value.conjugate(), r.tv_value);
            assert!(r.tv_numeric >= 0.0);
        }
    }
}
