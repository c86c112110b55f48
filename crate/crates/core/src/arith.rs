//! Elementary arithmetic kernels: quadratic Gauss sums, divisor sums,
//! the Kronecker symbol and Euler's totient.

use std::f64::consts::TAU;

use num_complex::Complex64;
use num_integer::Integer;

use crate::error::{invalid, Result};

/// `G(a, b; c) = sum_{l mod c} exp(2 pi i (a l^2 + b l) / c)`.
///
/// Each phase is reduced modulo `c` in exact integer arithmetic before the
/// exponential is taken, so the only rounding is in the `c` unit-modulus
/// terms and their summation.
pub fn gauss_sum(a: i64, b: i64, c: u64) -> Result<Complex64> {
    if c == 0 {
        return Err(invalid("Gauss sum modulus must be positive"));
    }
    let c_i = c as i128;
    let a_r = (a as i128).rem_euclid(c_i);
    let b_r = (b as i128).rem_euclid(c_i);
    let mut acc = NeumaierComplex::default();
    for l in 0..c_i {
        let t = (a_r * ((l * l) % c_i) + b_r * l).rem_euclid(c_i);
        acc.add(unit_root(t as u64, c));
    }
    Ok(acc.total())
}

/// `exp(2 pi i t / c)` with `t` already reduced modulo `c`.
#[inline]
pub fn unit_root(t: u64, c: u64) -> Complex64 {
    // Fold into [-c/2, c/2] so the angle stays small; improves accuracy of sin/cos.
    let t = t % c;
    let signed = if 2 * t > c {
        t as f64 - c as f64
    } else {
        t as f64
    };
    Complex64::from_polar(1.0, TAU * signed / c as f64)
}

/// A Gauss sum together with the parameters that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussSumValue {
    pub a: i64,
    pub b: i64,
    pub c: u64,
    pub value: Complex64,
}

impl GaussSumValue {
    pub fn compute(a: i64, b: i64, c: u64) -> Result<Self> {
        Ok(Self {
            a,
            b,
            c,
            value: gauss_sum(a, b, c)?,
        })
    }

    /// Distance of `|G|^2` from the nearest non-negative integer.
    pub fn norm_sqr_integrality_defect(&self) -> f64 {
        let n2 = self.value.norm_sqr();
        (n2 - n2.round().max(0.0)).abs()
    }
}

/// Compensated (Neumaier) accumulator for complex sums.
#[derive(Debug, Default, Clone, Copy)]
pub struct NeumaierComplex {
    re: f64,
    re_c: f64,
    im: f64,
    im_c: f64,
}

impl NeumaierComplex {
    #[inline]
    pub fn add(&mut self, z: Complex64) {
        neumaier_step(&mut self.re, &mut self.re_c, z.re);
        neumaier_step(&mut self.im, &mut self.im_c, z.im);
    }

    pub fn total(&self) -> Complex64 {
        Complex64::new(self.re + self.re_c, self.im + self.im_c)
    }
}

#[inline]
fn neumaier_step(sum: &mut f64, comp: &mut f64, x: f64) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *comp += (*sum - t) + x;
    } else {
        *comp += (x - t) + *sum;
    }
    *sum = t;
}

/// Prime factorisation by trial division, as `(prime, exponent)` pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut push = |p: u64, n: &mut u64| {
        let mut e = 0;
        while *n % p == 0 {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    push(2, &mut n);
    push(3, &mut n);
    let mut p = 5;
    while p * p <= n {
        push(p, &mut n);
        push(p + 2, &mut n);
        p += 6;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut divs = vec![1u64];
    for (p, e) in factorize(n) {
        let len = divs.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    divs
}

/// `sigma(n) = sum_{d | n} d`.
pub fn divisor_sigma(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(invalid("divisor_sigma is defined for n >= 1"));
    }
    let mut total: u64 = 1;
    for (p, e) in factorize(n) {
        let mut term: u64 = 1;
        let mut pk: u64 = 1;
        for _ in 0..e {
            pk *= p;
            term += pk;
        }
        total = total
            .checked_mul(term)
            .ok_or_else(|| crate::error::overflow("computing sigma(n)"))?;
    }
    Ok(total)
}

/// `sum_{d | n} (8/d) d`, with `(8/d)` the Kronecker symbol (zero for even `d`).
pub fn twisted_divisor_sum_8(n: u64) -> Result<i64> {
    if n == 0 {
        return Err(invalid("twisted_divisor_sum_8 is defined for n >= 1"));
    }
    Ok(divisors(n)
        .into_iter()
        .map(|d| kronecker(8, d as i64) as i64 * d as i64)
        .sum())
}

/// Euler's totient.
pub fn euler_phi(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(invalid("euler_phi is defined for n >= 1"));
    }
    Ok(factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1)))
}

/// The Kronecker symbol `(a / n)` for arbitrary integers.
pub fn kronecker(a: i64, n: i64) -> i8 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut result: i8 = 1;
    let mut n = n as i128;
    let a = a as i128;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    let twos = n.trailing_zeros();
    if twos > 0 {
        if a % 2 == 0 {
            return 0;
        }
        if twos % 2 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            result = -result;
        }
        n >>= twos;
    }
    result * jacobi(a.rem_euclid(n), n)
}

/// Jacobi symbol for odd positive `n`.
fn jacobi(mut a: i128, mut n: i128) -> i8 {
    debug_assert!(n > 0 && n % 2 == 1);
    let mut result: i8 = 1;
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

pub fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

/// Integer square root (floor).
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x.checked_mul(x).map_or(true, |sq| sq > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).map_or(false, |sq| sq <= n) {
        x += 1;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_sigma(n: u64) -> u64 {
        (1..=n).filter(|d| n % d == 0).sum()
    }

    fn naive_phi(n: u64) -> u64 {
        (1..=n).filter(|k| k.gcd(&n) == 1).count() as u64
    }

    #[test]
    fn gauss_sum_small_values() {
        assert!(gauss_sum(1, 0, 2).unwrap().norm() < 1e-15);
        let g = gauss_sum(1, 0, 4).unwrap();
        assert!((g - Complex64::new(2.0, 2.0)).norm() < 1e-14);
        assert!(gauss_sum(1, 0, 0).is_err());
    }

    #[test]
    fn gauss_sum_modulus_for_odd_c() {
        for c in (1..=99u64).step_by(2) {
            for a in 1..c.min(12) as i64 {
                if a.gcd(&(c as i64)) != 1 {
                    continue;
                }
                let g = gauss_sum(a, 0, c).unwrap();
                assert!((g.norm() - (c as f64).sqrt()).abs() < 1e-10, "a={a} c={c}");
            }
        }
    }

    #[test]
    fn gauss_sum_periodicity_and_conjugation() {
        for c in 1..40u64 {
            for (a, b) in [(3i64, 5i64), (-7, 2), (11, -13)] {
                let g = gauss_sum(a, b, c).unwrap();
                let reduced = gauss_sum(a.rem_euclid(c as i64), b.rem_euclid(c as i64), c).unwrap();
                assert_eq!(g, reduced);
                let conj = gauss_sum(-a, -b, c).unwrap();
                assert!((conj - g.conj()).norm() < 1e-10);
                let v = GaussSumValue::compute(a, b, c).unwrap();
                assert!(v.norm_sqr_integrality_defect() < 1e-6);
            }
        }
    }

    #[test]
    fn sigma_phi_values() {
        assert_eq!(divisor_sigma(1).unwrap(), 1);
        assert_eq!(divisor_sigma(6).unwrap(), 12);
        assert!(divisor_sigma(0).is_err());
        assert!(euler_phi(0).is_err());
        for n in 1..500 {
            assert_eq!(divisor_sigma(n).unwrap(), naive_sigma(n));
            assert_eq!(euler_phi(n).unwrap(), naive_phi(n));
        }
    }

    #[test]
    fn multiplicativity_on_coprime_pairs() {
        for a in (1..10_000u64).step_by(97) {
            for b in (1..10_000u64).step_by(131) {
                if a.gcd(&b) != 1 {
                    continue;
                }
                assert_eq!(
                    divisor_sigma(a * b).unwrap(),
                    divisor_sigma(a).unwrap() * divisor_sigma(b).unwrap()
                );
                assert_eq!(
                    euler_phi(a * b).unwrap(),
                    euler_phi(a).unwrap() * euler_phi(b).unwrap()
                );
            }
        }
    }

    #[test]
    fn twisted_sum_examples() {
        assert_eq!(kronecker(8, 5), -1);
        assert_eq!(twisted_divisor_sum_8(5).unwrap(), -4);
        assert_eq!(kronecker(8, 2), 0);
        assert_eq!(kronecker(8, 7), 1);
        assert_eq!(kronecker(8, 3), -1);
    }

    #[test]
    fn twisted_sum_dominates_totient() {
        for n in 0..=10_000u64 {
            let m = 8 * n + 5;
            assert!(-twisted_divisor_sum_8(m).unwrap() >= euler_phi(m).unwrap() as i64, "n={n}");
        }
    }

    #[test]
    fn kronecker_extension() {
        // (-3/n): 1 for n = 1 mod 3, -1 for n = 2 mod 3, 0 for 3 | n.
        for n in 1..200i64 {
            let expected = match n % 3 {
                0 => 0,
                1 => 1,
                _ => -1,
            };
            assert_eq!(kronecker(-3, n), expected, "n={n}");
        }
        assert_eq!(kronecker(-1, -1), -1);
        assert_eq!(kronecker(5, 0), 0);
        assert_eq!(kronecker(1, 0), 1);
        // Brute-force Euler criterion for odd primes.
        for p in [3i64, 5, 7, 11, 13, 17, 19, 23] {
            for a in 0..p {
                let e = (0..p).any(|x| (x * x - a).rem_euclid(p) == 0);
                let expected = if a == 0 { 0 } else if e { 1 } else { -1 };
                assert_eq!(kronecker(a, p), expected);
            }
        }
    }

    #[test]
    fn isqrt_edges() {
        for n in 0..10_000u64 {
            let s = isqrt(n);
            assert!(s * s <= n && (s + 1) * (s + 1) > n);
        }
        assert_eq!(isqrt(u64::MAX), 4294967295);
    }
}
