//! Seeded random parameter points.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::numeric::{C64, I, ONE};
use crate::params::{Branch, GlobalParams, Kinematics};
use crate::Result;

/// Where points are drawn from. x lies in the annulus r_min ≤ |x| ≤ r_max,
/// at least `margin` from x = ±1, ih/h′ and −ih′/h; distinct sites are
/// kept `z_separation` apart in z.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleRegion {
    pub r_min: f64,
    pub r_max: f64,
    pub margin: f64,
    pub h_max: f64,
    pub z_separation: f64,
}

impl Default for SampleRegion {
    fn default() -> Self {
        SampleRegion { r_min: 1.2, r_max: 5.0, margin: 0.1, h_max: 0.8, z_separation: 0.05 }
    }
}

pub struct Sampler {
    rng: ChaCha8Rng,
    pub region: SampleRegion,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed), region: SampleRegion::default() }
    }

    pub fn with_region(seed: u64, region: SampleRegion) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed), region }
    }

    fn polar(&mut self, rmin: f64, rmax: f64) -> C64 {
        let r = self.rng.gen_range(rmin..=rmax);
        let t = self.rng.gen_range(0.0..std::f64::consts::TAU);
        C64::from_polar(r, t)
    }

    /// Nonzero complex number with modulus in [0.5, 2].
    pub fn unit_scale(&mut self) -> C64 {
        self.polar(0.5, 2.0)
    }

    /// Random h with |h| in [0.05, h_max], random α, principal h′.
    pub fn global(&mut self) -> Result<GlobalParams> {
        let h = self.polar(0.05, self.region.h_max);
        let alpha = self.unit_scale();
        GlobalParams::new(h, alpha, Branch::Plus)
    }

    fn x_ok(&self, gp: &GlobalParams, x: C64) -> bool {
        let specials = [ONE, -ONE, I * gp.h / gp.hprime, -I * gp.hprime / gp.h];
        specials.iter().all(|s| (x - s).norm() >= self.region.margin)
    }

    pub fn x(&mut self, gp: &GlobalParams) -> C64 {
        loop {
            let x = self.polar(self.region.r_min, self.region.r_max);
            if self.x_ok(gp, x) {
                return x;
            }
        }
    }

    pub fn site(&mut self, gp: &GlobalParams) -> Result<Kinematics> {
        let x = self.x(gp);
        let g = self.unit_scale();
        Kinematics::new(gp, x, g)
    }

    /// `n` sites with pairwise separated spectral parameters.
    pub fn sites(&mut self, gp: &GlobalParams, n: usize) -> Result<Vec<Kinematics>> {
        let mut out: Vec<Kinematics> = Vec::with_capacity(n);
        while out.len() < n {
            let k = self.site(gp)?;
            if out.iter().all(|o| (o.z() - k.z()).norm() >= self.region.z_separation) {
                out.push(k);
            }
        }
        Ok(out)
    }

    /// A fresh global point together with `n` sites.
    pub fn point(&mut self, n: usize) -> Result<(GlobalParams, Vec<Kinematics>)> {
        let gp = self.global()?;
        let s = self.sites(&gp, n)?;
        Ok((gp, s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_in_region() {
        let mut a = Sampler::new(7);
        let mut b = Sampler::new(7);
        for _ in 0..50 {
            let (ga, sa) = a.point(3).unwrap();
            let (gb, sb) = b.point(3).unwrap();
            assert_eq!(ga, gb);
            for (x, y) in sa.iter().zip(&sb) {
                assert_eq!(x.x, y.x);
                let r = x.x.norm();
                assert!((1.2..=5.0).contains(&r));
            }
        }
    }
}
