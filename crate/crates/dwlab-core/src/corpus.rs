//! Seeded test corpora.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::space::{
    block_compression_norm_with, column_compression_norm, integral_norm_weights, BiDegreeSeries, PowerSeries,
    VectorSeries, WeightParam,
};
use crate::wolff::WolffInstance;

pub const DEFAULT_SEED: u64 = 20_141_007;

fn unit(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))
}

fn random_poly(rng: &mut ChaCha8Rng, max_deg: usize) -> PowerSeries {
    let d = rng.gen_range(0..=max_deg);
    PowerSeries::new((0..=d).map(|_| unit(rng)).collect())
}

/// `count` polynomials in z, zbar with 1..=6 terms of total degree <= max_deg.
pub fn bidegree_corpus(seed: u64, count: usize, max_deg: u32) -> Vec<BiDegreeSeries> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let terms = rng.gen_range(1..=6);
            BiDegreeSeries::new((0..terms).map(|_| {
                let j = rng.gen_range(0..=max_deg);
                let k = rng.gen_range(0..=max_deg - j);
                ((j, k), unit(&mut rng))
            }))
        })
        .collect()
}

/// Multipliers of degree <= 8, coefficients with real and imaginary parts in [-1,1].
pub fn multiplier_corpus(seed: u64, count: usize) -> Vec<PowerSeries> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6d75_6c74);
    let mut out = vec![
        PowerSeries::from_real(&[1.0]),
        PowerSeries::from_real(&[0.0, 1.0]),
        PowerSeries::from_real(&[0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -0.5]),
    ];
    while out.len() < count {
        out.push(random_poly(&mut rng, 8));
    }
    out.truncate(count);
    out
}

#[derive(Debug, Clone)]
pub struct NamedInstance {
    pub name: String,
    pub instance: WolffInstance,
}

/// Fixed instances followed by `random` seeded ones. Random tuples are scaled
/// to column compression norm 1 in both the series and the integral form, and
/// H = (f_1 + f_2)/2 so that |H|^2 <= F F^*.
pub fn wolff_corpus(alpha: WeightParam, seed: u64, random: usize) -> Vec<NamedInstance> {
    let r = PowerSeries::from_real;
    let half = VectorSeries::new(vec![r(&[0.0, 0.5]), r(&[0.5])]);
    let mut out = Vec::new();
    for (k, h) in [r(&[1.0]), r(&[0.0, 1.0]), r(&[0.0, 0.0, 1.0])].into_iter().enumerate() {
        out.push(NamedInstance {
            name: format!("half-z^{k}"),
            instance: WolffInstance::new(half.clone(), r(&[0.0, 0.5]), h, alpha),
        });
    }
    out.push(NamedInstance {
        name: "unit-vector".into(),
        instance: WolffInstance::new(VectorSeries::new(vec![r(&[1.0]), r(&[0.0])]), r(&[1.0]), r(&[0.0, 1.0]), alpha),
    });
    out.push(NamedInstance {
        name: "constant-3-4".into(),
        instance: WolffInstance::new(VectorSeries::new(vec![r(&[0.6]), r(&[0.8])]), r(&[1.0]), r(&[0.0, 1.0]), alpha),
    });
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x776f_6c66);
    let mut k = 0;
    while k < random {
        let n = rng.gen_range(2..=3);
        let f = VectorSeries::new((0..n).map(|_| random_poly(&mut rng, 2)).collect());
        let trunc = 32;
        let kappa = integral_norm_weights(alpha, trunc);
        let entries: Vec<Vec<Option<PowerSeries>>> = f.components.iter().map(|c| vec![Some(c.clone())]).collect();
        let scale = column_compression_norm(&f, alpha, trunc).max(block_compression_norm_with(&entries, &kappa));
        if scale == 0.0 {
            continue;
        }
        let s = Complex64::new(1.0 / scale, 0.0);
        let f = VectorSeries::new(f.components.iter().map(|c| c.scale(s)).collect());
        let big_h = f.components[0].add(&f.components[1]).scale(Complex64::new(0.5, 0.0));
        let h = random_poly(&mut rng, 2);
        let inst = WolffInstance::new(f, big_h, h, alpha);
        if inst.delta < 1e-3 {
            continue;
        }
        out.push(NamedInstance { name: format!("random-{k}"), instance: inst });
        k += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpora_are_reproducible() {
        assert_eq!(bidegree_corpus(3, 10, 6), bidegree_corpus(3, 10, 6));
        assert_ne!(bidegree_corpus(3, 10, 6), bidegree_corpus(4, 10, 6));
        let m = multiplier_corpus(DEFAULT_SEED, 12);
        assert_eq!(m.len(), 12);
        assert!(m.iter().all(|p| p.degree() <= 8));
        for p in &m {
            assert!(p.coeffs().iter().all(|c| c.re.abs() <= 1.0 && c.im.abs() <= 1.0));
        }
    }

    #[test]
    fn wolff_instances_satisfy_hypotheses() {
        let a = WeightParam::new(0.5).unwrap();
        for inst in wolff_corpus(a, DEFAULT_SEED, 4) {
            inst.instance.check(crate::wolff::DELTA_FLOOR).unwrap();
        }
    }
}
