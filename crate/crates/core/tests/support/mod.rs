#![allow(dead_code)] // shared between test binaries that use different parts

//! Shared test support: an independent direct-summation oracle for Kampé de
//! Fériet series and a tiny deterministic value generator.
//!
//! The oracle sums the rectangle m, n <= side term by term from Pochhammer
//! ladders with Neumaier-compensated accumulation — a different recurrence
//! structure and summation order from the anti-diagonal ratio engine it
//! checks. For |x| + |y| <= 0.6 a side of 80 leaves a tail below 1e-17.

use discrete_appell::gamma::PochhammerLadder;
use discrete_appell::KdFSpec;
use num_complex::Complex64;

/// Robust complex division (Smith's algorithm): safe for denominators whose
/// naive |b|^2 would overflow.
pub fn cdiv(a: Complex64, b: Complex64) -> Complex64 {
    if b.re.abs() >= b.im.abs() {
        let r = b.im / b.re;
        let den = b.re + b.im * r;
        Complex64::new((a.re + a.im * r) / den, (a.im - a.re * r) / den)
    } else {
        let r = b.re / b.im;
        let den = b.re * r + b.im;
        Complex64::new((a.re * r + a.im) / den, (a.im * r - a.re) / den)
    }
}

struct RowLadders {
    ladders: Vec<PochhammerLadder>,
}

impl RowLadders {
    fn new(row: &[Complex64], len: usize) -> Self {
        RowLadders {
            ladders: row.iter().map(|&p| PochhammerLadder::new(p, len)).collect(),
        }
    }

    fn product(&self, idx: usize) -> Complex64 {
        let mut acc = Complex64::new(1.0, 0.0);
        for l in &self.ladders {
            acc *= l.value(idx);
        }
        acc
    }
}

/// Direct rectangle summation of a Kampé de Fériet series.
pub fn kdf_direct_oracle(spec: &KdFSpec, x: Complex64, y: Complex64, side: usize) -> Complex64 {
    let joint_num = RowLadders::new(&spec.upper_joint, 2 * side + 1);
    let joint_den = RowLadders::new(&spec.lower_joint, 2 * side + 1);
    let x_num = RowLadders::new(&spec.upper_x, side + 1);
    let x_den = RowLadders::new(&spec.lower_x, side + 1);
    let y_num = RowLadders::new(&spec.upper_y, side + 1);
    let y_den = RowLadders::new(&spec.lower_y, side + 1);

    // Per-direction brackets (b)_m x^m / ((e)_m m!), evaluated per term from
    // the ladders with robust division.
    let mut fact = Vec::with_capacity(side + 1);
    let mut f = 1.0f64;
    fact.push(f);
    for i in 1..=side {
        f *= i as f64;
        fact.push(f);
    }
    let bracket = |num: &RowLadders, den: &RowLadders, z: Complex64, idx: usize| -> Complex64 {
        cdiv(num.product(idx) * z.powu(idx as u32), den.product(idx) * fact[idx])
    };

    let (mut sum_re, mut comp_re) = (0.0f64, 0.0f64);
    let (mut sum_im, mut comp_im) = (0.0f64, 0.0f64);
    let add = |sum: &mut f64, comp: &mut f64, v: f64| {
        let t = *sum + v;
        if sum.abs() >= v.abs() {
            *comp += (*sum - t) + v;
        } else {
            *comp += (v - t) + *sum;
        }
        *sum = t;
    };
    for m in 0..=side {
        let bx = bracket(&x_num, &x_den, x, m);
        for n in 0..=side {
            let by = bracket(&y_num, &y_den, y, n);
            let term = cdiv(joint_num.product(m + n), joint_den.product(m + n)) * bx * by;
            add(&mut sum_re, &mut comp_re, term.re);
            add(&mut sum_im, &mut comp_im, term.im);
        }
    }
    Complex64::new(sum_re + comp_re, sum_im + comp_im)
}

/// Deterministic pseudo-random stream for test point generation.
pub struct ValueStream {
    state: u64,
}

impl ValueStream {
    pub fn new(seed: u64) -> Self {
        ValueStream {
            state: seed ^ 0x9E37_79B9_7F4A_7C15,
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in [lo, hi).
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }
}
