//! Reference computations for tests, written without any of `paircorr`'s
//! code paths: numerical quadrature, brute-force lattice scans, inverse-CDF
//! sampling and a small deterministic generator.

pub mod quad {
    use std::f64::consts::FRAC_PI_2;

    /// Double-exponential (tanh-sinh) quadrature of `f` over `[a, b]`.
    ///
    /// `f` receives the abscissa together with its distances to `a` and `b`,
    /// computed without cancellation, so integrands with algebraic endpoint
    /// singularities such as `t^(α-1) (1-t)^(β-1)` can be written in terms of
    /// the accurate distances. Levels are refined until two successive
    /// estimates agree to `tol` (relative to the magnitude of the integral).
    pub fn tanh_sinh<F>(f: F, a: f64, b: f64, tol: f64) -> f64
    where
        F: Fn(f64, f64, f64) -> f64,
    {
        let half = 0.5 * (b - a);
        let t_max = 4.0;
        let node = |t: f64| -> f64 {
            let s = FRAC_PI_2 * t.sinh();
            let w = FRAC_PI_2 * t.cosh() / s.cosh().powi(2);
            // Distances from the ends: (b-a)/(1+e^{2s}) and (b-a)/(1+e^{-2s}).
            let from_a = (b - a) / (1.0 + (2.0 * s).exp());
            let from_b = (b - a) / (1.0 + (-2.0 * s).exp());
            if from_a <= 0.0 || from_b <= 0.0 || w == 0.0 {
                return 0.0;
            }
            let x = if from_a < from_b { a + from_a } else { b - from_b };
            half * w * f(x, from_a, from_b)
        };
        let mut h = 1.0;
        let mut sum = node(0.0);
        let mut k = 1;
        while k as f64 * h <= t_max {
            sum += node(k as f64 * h) + node(-(k as f64) * h);
            k += 1;
        }
        let mut estimate = sum * h;
        for _level in 0..12 {
            h *= 0.5;
            let mut k = 1;
            while k as f64 * h <= t_max {
                sum += node(k as f64 * h) + node(-(k as f64) * h);
                k += 2;
            }
            let next = sum * h;
            if (next - estimate).abs() <= tol * next.abs().max(1e-300) {
                return next;
            }
            estimate = next;
        }
        estimate
    }

    const GK_NODES: [f64; 8] = [
        0.991_455_371_120_812_6,
        0.949_107_912_342_758_5,
        0.864_864_423_359_769_1,
        0.741_531_185_599_394_4,
        0.586_087_235_467_691_1,
        0.405_845_151_377_397_2,
        0.207_784_955_007_898_5,
        0.0,
    ];
    const GK_WEIGHTS_K: [f64; 8] = [
        0.022_935_322_010_529_22,
        0.063_092_092_629_978_55,
        0.104_790_010_322_250_2,
        0.140_653_259_715_525_9,
        0.169_004_726_639_267_9,
        0.190_350_578_064_785_4,
        0.204_432_940_075_298_9,
        0.209_482_141_084_727_8,
    ];
    const GK_WEIGHTS_G: [f64; 4] =
        [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

    fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let fc = f(c);
        let mut kronrod = GK_WEIGHTS_K[7] * fc;
        let mut gauss = GK_WEIGHTS_G[3] * fc;
        for i in 0..7 {
            let dx = h * GK_NODES[i];
            let pair = f(c - dx) + f(c + dx);
            kronrod += GK_WEIGHTS_K[i] * pair;
            if i % 2 == 1 {
                gauss += GK_WEIGHTS_G[i / 2] * pair;
            }
        }
        (kronrod * h, ((kronrod - gauss) * h).abs())
    }

    /// Adaptive 7/15-point Gauss–Kronrod quadrature with absolute tolerance `tol`.
    pub fn gauss_kronrod<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
        fn recurse<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
            let (value, err) = gk15(f, a, b);
            if err <= tol || depth == 0 {
                return value;
            }
            let m = 0.5 * (a + b);
            recurse(f, a, m, 0.5 * tol, depth - 1) + recurse(f, m, b, 0.5 * tol, depth - 1)
        }
        recurse(&f, a, b, tol, 50)
    }

    /// `B_x(a, b) = ∫₀ˣ t^(a-1) (1-t)^(b-1) dt` by tanh-sinh quadrature.
    pub fn incomplete_beta(x: f64, a: f64, b: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        tanh_sinh(
            |t, from_zero, _| {
                let one_minus_t = if t < 0.5 { 1.0 - t } else { (1.0 - x) + (x - t) };
                from_zero.powf(a - 1.0) * one_minus_t.powf(b - 1.0)
            },
            0.0,
            x,
            1e-14,
        )
    }

    /// `I_x(a, b)` as the ratio of two quadratures; the complete integral is
    /// split at ½ so each piece has at most one singular endpoint.
    pub fn regularized_incomplete_beta(x: f64, a: f64, b: f64) -> f64 {
        let lower = incomplete_beta(x.min(0.5), a, b);
        let head = incomplete_beta(0.5, a, b);
        let tail = |from: f64| tanh_sinh(|t, _, to_one| t.powf(a - 1.0) * to_one.powf(b - 1.0), from, 1.0, 1e-14);
        let total = head + tail(0.5);
        let partial = if x <= 0.5 { lower } else { head + (tail(0.5) - tail(x)) };
        partial / total
    }
}

pub mod lattice {
    /// Every integer point of `[-⌊R⌋, ⌊R⌋]ⁿ` with squared norm `≤ R²`
    /// (`closed`) or `< R²`, found by scanning the whole cube.
    pub fn cube_scan(n: usize, radius: f64, closed: bool) -> Vec<Vec<i64>> {
        let k = radius.floor() as i64;
        let r2 = radius * radius;
        let mut out = Vec::new();
        let mut p = vec![-k; n];
        loop {
            let s: i64 = p.iter().map(|x| x * x).sum();
            let inside = if closed { s as f64 <= r2 } else { (s as f64) < r2 };
            if inside {
                out.push(p.clone());
            }
            let mut d = n;
            loop {
                if d == 0 {
                    return out;
                }
                d -= 1;
                if p[d] < k {
                    p[d] += 1;
                    break;
                }
                p[d] = -k;
            }
        }
    }

    pub fn gcd(mut a: u64, mut b: u64) -> u64 {
        while b != 0 {
            let t = a % b;
            a = b;
            b = t;
        }
        a
    }

    pub fn is_primitive(p: &[i64]) -> bool {
        p.iter().fold(0, |g, &x| gcd(g, x.unsigned_abs())) == 1
    }

    /// Squared distances of all unordered pairs of distinct points.
    pub fn pair_distances_sq(points: &[Vec<i64>]) -> Vec<i64> {
        let mut out = Vec::with_capacity(points.len() * points.len().saturating_sub(1) / 2);
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                out.push(points[i].iter().zip(&points[j]).map(|(a, b)| (a - b) * (a - b)).sum());
            }
        }
        out
    }
}

pub mod sampling {
    /// SplitMix64: a tiny, fully specified generator for drawing test inputs.
    #[derive(Debug, Clone)]
    pub struct SplitMix64(u64);

    impl SplitMix64 {
        pub fn new(seed: u64) -> Self {
            Self(seed)
        }

        pub fn next_u64(&mut self) -> u64 {
            self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
            let mut z = self.0;
            z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
            z ^ (z >> 31)
        }

        /// Uniform in `[0, 1)`.
        pub fn next_f64(&mut self) -> f64 {
            (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
        }

        pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
            lo + (hi - lo) * self.next_f64()
        }
    }

    /// Solves `cdf(x) = u` on `[lo, hi]` by bisection; `cdf` must be nondecreasing.
    pub fn inverse_cdf<F: Fn(f64) -> f64>(cdf: F, u: f64, lo: f64, hi: f64) -> f64 {
        let (mut lo, mut hi) = (lo, hi);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if cdf(mid) < u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadrature_sanity() {
        let v = quad::tanh_sinh(|x, _, _| x.sqrt(), 0.0, 1.0, 1e-14);
        assert!((v - 2.0 / 3.0).abs() < 1e-13);
        let v = quad::tanh_sinh(|_, from_a, _| from_a.powf(-0.5), 0.0, 1.0, 1e-14);
        assert!((v - 2.0).abs() < 1e-12);
        let v = quad::gauss_kronrod(|x| x.sin(), 0.0, std::f64::consts::PI, 1e-13);
        assert!((v - 2.0).abs() < 1e-12);
        // B(1/2, 1/2) = π
        let v = quad::incomplete_beta(0.5, 0.5, 0.5) * 2.0;
        assert!((v - std::f64::consts::PI).abs() < 1e-12);
        assert!((quad::regularized_incomplete_beta(0.3, 1.0, 1.0) - 0.3).abs() < 1e-13);
    }

    #[test]
    fn lattice_scan() {
        assert_eq!(lattice::cube_scan(2, 10.0, true).len(), 317);
        assert_eq!(lattice::cube_scan(3, 1.5, true).len(), 19);
        assert_eq!(lattice::cube_scan(1, 2.0, false).len(), 3);
        assert!(lattice::is_primitive(&[0, -1]));
        assert!(!lattice::is_primitive(&[2, 4]));
        assert!(!lattice::is_primitive(&[0, 0]));
    }

    #[test]
    fn inverse_cdf_uniform() {
        let x = sampling::inverse_cdf(|x| x / 2.0, 0.25, 0.0, 2.0);
        assert!((x - 0.5).abs() < 1e-12);
    }
}
