//! Integer-order cylinder functions `J_m`, `Y_m`, `H_m^(1)` of complex
//! argument, with exponent scaling for large `|Im z|`.
//!
//! `J` uses the ascending series for `|z| <= 2` and Miller's backward
//! recurrence normalised by the generating-function identity
//! `e^{-iz} = J_0 + 2 sum (-i)^k J_k` otherwise. `H^(1)` is seeded at orders
//! 0 and 1 (Temme's continued fraction plus the Wronskian for `|z| > 2`,
//! ascending series for `Y` below) and continued by forward recurrence.
//! `Y` is recovered from `J` and `H^(1)`, and the lower half-plane is
//! reached through `H^(2)(z) = conj(H^(1)(conj z))`.

use std::f64::consts::{FRAC_2_PI, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const MAX_ORDER: u32 = 200;

/// Beyond this `|Im z|` results are always returned exponent-scaled.
pub const SCALING_THRESHOLD: f64 = 30.0;

const SERIES_RADIUS: f64 = 2.0;
const RESCALE: f64 = 1e250;
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scaling {
    Unscaled,
    /// The true value is `value * exp(exponent)` (same for the derivative).
    ExpScaled {
        exponent: Complex64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselEval {
    pub order: u32,
    pub z: Complex64,
    pub value: Complex64,
    pub derivative: Complex64,
    pub scaling: Scaling,
}

impl BesselEval {
    pub fn exponent(&self) -> Complex64 {
        match self.scaling {
            Scaling::Unscaled => Complex64::new(0.0, 0.0),
            Scaling::ExpScaled { exponent } => exponent,
        }
    }

    /// `ln` of the true value (principal branch of the mantissa's argument).
    pub fn ln_value(&self) -> Complex64 {
        self.value.ln() + self.exponent()
    }

    /// `f'(z) / f(z)`, independent of the scaling.
    pub fn log_derivative(&self) -> Complex64 {
        cdiv(self.derivative, self.value)
    }

    /// True value, which may overflow to infinity or underflow to zero.
    pub fn unscaled_value(&self) -> Complex64 {
        self.value * self.exponent().exp()
    }

    pub fn unscaled_derivative(&self) -> Complex64 {
        self.derivative * self.exponent().exp()
    }
}

/// `m * e^s` with a real log-scale `s`.
#[derive(Debug, Clone, Copy)]
struct Scaled {
    m: Complex64,
    s: f64,
}

impl Scaled {
    const ZERO: Scaled = Scaled {
        m: Complex64::new(0.0, 0.0),
        s: 0.0,
    };

    fn plain(m: Complex64) -> Self {
        Scaled { m, s: 0.0 }
    }

    fn at(self, s: f64) -> Complex64 {
        if self.m == Complex64::new(0.0, 0.0) {
            return self.m;
        }
        let d = self.s - s;
        if d < -745.0 {
            Complex64::new(0.0, 0.0)
        } else {
            self.m * d.exp()
        }
    }

    fn lead(a: Scaled, b: Scaled) -> f64 {
        match (a.m.norm() == 0.0, b.m.norm() == 0.0) {
            (true, _) => b.s,
            (_, true) => a.s,
            _ => a.s.max(b.s),
        }
    }

    fn add(self, o: Scaled) -> Scaled {
        let s = Self::lead(self, o);
        Scaled {
            m: self.at(s) + o.at(s),
            s,
        }
    }

    fn times(self, c: Complex64) -> Scaled {
        Scaled {
            m: self.m * c,
            s: self.s,
        }
    }

    fn neg(self) -> Scaled {
        Scaled { m: -self.m, s: self.s }
    }

    fn conj(self) -> Scaled {
        Scaled {
            m: self.m.conj(),
            s: self.s,
        }
    }
}

pub fn bessel_j(m: u32, z: Complex64) -> Result<BesselEval> {
    check(m, z)?;
    let n = m as usize;
    let seq = j_sequence(n + 1, z);
    let deriv = if z == Complex64::new(0.0, 0.0) {
        Scaled::plain(Complex64::new(if m == 1 { 0.5 } else { 0.0 }, 0.0))
    } else {
        derivative_from_next(n, z, seq[n], seq[n + 1])
    };
    Ok(finish(m, z, seq[n], deriv))
}

pub fn bessel_h1(m: u32, z: Complex64) -> Result<BesselEval> {
    check_singular(m, z)?;
    let n = m as usize;
    let h = hankel1_sequence(n + 1, z);
    Ok(finish(m, z, h[n], derivative_from_next(n, z, h[n], h[n + 1])))
}

pub fn bessel_y(m: u32, z: Complex64) -> Result<BesselEval> {
    check_singular(m, z)?;
    let n = m as usize;
    let j = j_sequence(n + 1, z);
    let y: Vec<Scaled> = if z.im >= 0.0 {
        let h = hankel1_sequence(n + 1, z);
        // Y = i (J - H1)
        (n..=n + 1).map(|k| j[k].add(h[k].neg()).times(I)).collect()
    } else {
        let h2 = hankel1_sequence(n + 1, z.conj());
        // Y = i (H2 - J)
        (n..=n + 1).map(|k| h2[k].conj().add(j[k].neg()).times(I)).collect()
    };
    Ok(finish(m, z, y[0], derivative_from_next(n, z, y[0], y[1])))
}

/// `J_m'(z) / J_m(z)` from the continued fraction for `J_{m+1}/J_m`,
/// independent of the recurrences used by [`bessel_j`].
pub fn j_log_derivative_cf(m: u32, z: Complex64) -> Result<Complex64> {
    check_singular(m, z)?;
    // J_{m+1}/J_m = 1/(b_1 - 1/(b_2 - ...)), b_k = 2(m+k)/z
    let tiny = 1e-150;
    let mut f = Complex64::new(tiny, 0.0);
    let mut c = f;
    let mut d = Complex64::new(0.0, 0.0);
    let max_iter = 20_000 + 4 * z.norm() as usize;
    for k in 1..=max_iter {
        let a = if k == 1 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(-1.0, 0.0)
        };
        let b = 2.0 * (m as f64 + k as f64) / z;
        d = b + a * d;
        if d.norm() < tiny {
            d = tiny.into();
        }
        c = b + cdiv(a, c);
        if c.norm() < tiny {
            c = tiny.into();
        }
        d = cdiv(Complex64::new(1.0, 0.0), d);
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).norm() < 1e-16 {
            return Ok(m as f64 / z - f);
        }
    }
    Err(Error::Domain(format!(
        "continued fraction for J_{m}'/J_{m} did not converge at z = {z}"
    )))
}

fn check(m: u32, z: Complex64) -> Result<()> {
    if m > MAX_ORDER {
        return Err(Error::OrderTooLarge(m));
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("non-finite Bessel argument {z}")));
    }
    Ok(())
}

fn check_singular(m: u32, z: Complex64) -> Result<()> {
    check(m, z)?;
    if z == Complex64::new(0.0, 0.0) {
        return Err(Error::Pole { order: m });
    }
    if z.re < 0.0 {
        return Err(Error::Domain(format!(
            "Y and H1 are evaluated for Re z >= 0 only, got {z}"
        )));
    }
    Ok(())
}

/// `f_n' = (n/z) f_n - f_{n+1}`, valid for J, Y and H alike.
fn derivative_from_next(n: usize, z: Complex64, f: Scaled, next: Scaled) -> Scaled {
    f.times(n as f64 / z).add(next.neg())
}

fn finish(m: u32, z: Complex64, value: Scaled, derivative: Scaled) -> BesselEval {
    let s = Scaled::lead(value, derivative);
    let (v, d) = (value.at(s), derivative.at(s));
    let representable = |c: Complex64| c.norm() == 0.0 || (c.norm().ln() + s).abs() < 690.0;
    let scaling = if z.im.abs() <= SCALING_THRESHOLD && representable(v) && representable(d) {
        Scaling::Unscaled
    } else {
        Scaling::ExpScaled {
            exponent: Complex64::new(s, 0.0),
        }
    };
    match scaling {
        Scaling::Unscaled => {
            let f = s.exp();
            BesselEval {
                order: m,
                z,
                value: v * f,
                derivative: d * f,
                scaling,
            }
        }
        Scaling::ExpScaled { .. } => {
            // keep the mantissa of unit size
            let mag = if v.norm() > 0.0 {
                v.norm()
            } else {
                d.norm().max(f64::MIN_POSITIVE)
            };
            BesselEval {
                order: m,
                z,
                value: v / mag,
                derivative: d / mag,
                scaling: Scaling::ExpScaled {
                    exponent: Complex64::new(s + mag.ln(), 0.0),
                },
            }
        }
    }
}

/// Complex division that stays finite when `|b|^2` would overflow or underflow.
fn cdiv(a: Complex64, b: Complex64) -> Complex64 {
    let s = b.norm();
    (a * (b / s).conj()) / s
}

fn ln_factorial(k: usize) -> f64 {
    (2..=k).map(|i| (i as f64).ln()).sum()
}

/// `J_0 .. J_n` at `z`.
fn j_sequence(n: usize, z: Complex64) -> Vec<Scaled> {
    if z == Complex64::new(0.0, 0.0) {
        let mut out = vec![Scaled::ZERO; n + 1];
        out[0] = Scaled::plain(1.0.into());
        return out;
    }
    if z.norm() <= SERIES_RADIUS {
        (0..=n).map(|k| j_series(k, z)).collect()
    } else {
        j_miller(n, z)
    }
}

fn j_series(k: usize, z: Complex64) -> Scaled {
    let q = -0.25 * z * z;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for j in 0..200 {
        term *= q / ((j + 1) as f64 * (k + j + 1) as f64);
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    let lp = (0.5 * z).ln() * k as f64;
    Scaled {
        m: sum * Complex64::from_polar(1.0, lp.im),
        s: lp.re - ln_factorial(k),
    }
}

fn j_miller(n: usize, z: Complex64) -> Vec<Scaled> {
    let a = z.norm();
    let mut top = n.max(a.ceil() as usize) + (15.0 * (0.5 * a + 1.0).cbrt()).ceil() as usize + 20;
    top += top % 2;

    // Powers of -i (upper half-plane) or i (lower) for the normalisation sum.
    let unit = if z.im >= 0.0 { -I } else { I };
    let powers = [Complex64::new(1.0, 0.0), unit, unit * unit, unit * unit * unit];

    let mut saved = vec![(Complex64::new(0.0, 0.0), 0i32); n + 1];
    let mut next = Complex64::new(0.0, 0.0);
    let mut cur = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut count = 0i32;
    for k in (1..=top).rev() {
        if k <= n {
            saved[k] = (cur, count);
        }
        sum += 2.0 * powers[k % 4] * cur;
        let prev = (2.0 * k as f64 / z) * cur - next;
        next = cur;
        cur = prev;
        if cur.norm() > RESCALE {
            cur /= RESCALE;
            next /= RESCALE;
            sum /= RESCALE;
            count += 1;
        }
    }
    saved[0] = (cur, count);
    sum += cur;

    // e^{-iz} (upper) or e^{iz} (lower) = e^{|Im z|} * phase
    let phase = Complex64::from_polar(1.0, if z.im >= 0.0 { -z.re } else { z.re });
    let ln_b = RESCALE.ln();
    saved
        .into_iter()
        .map(|(f, c)| Scaled {
            m: cdiv(f, sum) * phase,
            s: z.im.abs() + (c - count) as f64 * ln_b,
        })
        .collect()
}

/// `H^(1)_0 .. H^(1)_n` for `Re z >= 0`, `z != 0`.
fn hankel1_sequence(n: usize, z: Complex64) -> Vec<Scaled> {
    if z.im < 0.0 {
        // H1 = 2J - H2, H2(z) = conj(H1(conj z))
        let j = j_sequence(n, z);
        let h2 = hankel1_sequence(n, z.conj());
        return j
            .iter()
            .zip(h2)
            .map(|(jk, h2k)| jk.times(Complex64::new(2.0, 0.0)).add(h2k.conj().neg()))
            .collect();
    }
    let (h0, h1) = if z.norm() > SERIES_RADIUS {
        hankel1_seeds_cf(z)
    } else {
        hankel1_seeds_series(z)
    };
    let mut out = Vec::with_capacity(n + 1);
    out.push(h0);
    if n == 0 {
        return out;
    }
    out.push(h1);
    let mut s = Scaled::lead(h0, h1);
    let (mut prev, mut cur) = (h0.at(s), h1.at(s));
    let ln_b = RESCALE.ln();
    for k in 1..n {
        let next = (2.0 * k as f64 / z) * cur - prev;
        prev = cur;
        cur = next;
        if cur.norm() > RESCALE {
            cur /= RESCALE;
            prev /= RESCALE;
            s += ln_b;
        }
        out.push(Scaled { m: cur, s });
    }
    out
}

/// Temme's continued fraction for `H_0'/H_0`, then the Wronskian with `J`.
fn hankel1_seeds_cf(z: Complex64) -> (Scaled, Scaled) {
    let tiny = 1e-150;
    let mut f = Complex64::new(tiny, 0.0);
    let mut c = f;
    let mut d = Complex64::new(0.0, 0.0);
    for k in 1..100_000 {
        let a = Complex64::new((k as f64 - 0.5).powi(2), 0.0);
        let b = 2.0 * (z + I * k as f64);
        d = b + a * d;
        if d.norm() < tiny {
            d = tiny.into();
        }
        c = b + cdiv(a, c);
        if c.norm() < tiny {
            c = tiny.into();
        }
        d = cdiv(Complex64::new(1.0, 0.0), d);
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).norm() < 1e-16 {
            break;
        }
    }
    let ratio = -0.5 / z + I + I / z * f;
    let j = j_sequence(1, z);
    // J_0 r + J_1 at the scale of J_0
    let denom = j[0].m * ratio + j[1].at(j[0].s);
    let h0 = Scaled {
        m: cdiv(2.0 * I, PI * z * denom),
        s: -j[0].s,
    };
    (h0, h0.times(-ratio))
}

fn hankel1_seeds_series(z: Complex64) -> (Scaled, Scaled) {
    let j0 = j_series(0, z).at(0.0);
    let j1 = j_series(1, z).at(0.0);
    let log_half = (0.5 * z).ln();
    let q = 0.25 * z * z;

    // Y_0: (2/pi)(ln(z/2)+gamma) J_0 + (2/pi) sum (-1)^{k+1} H_k q^k/(k!)^2
    let mut term = Complex64::new(1.0, 0.0);
    let mut harmonic = 0.0;
    let mut sum0 = Complex64::new(0.0, 0.0);
    for k in 1..100 {
        term *= -q / ((k * k) as f64);
        harmonic += 1.0 / k as f64;
        let t = -term * harmonic;
        sum0 += t;
        if t.norm() <= 1e-17 * sum0.norm() {
            break;
        }
    }
    let y0 = FRAC_2_PI * ((log_half + EULER_GAMMA) * j0 + sum0);

    // Y_1: -2/(pi z) + (2/pi) ln(z/2) J_1 - (1/pi)(z/2) sum (psi(k+1)+psi(k+2)) (-q)^k/(k!(k+1)!)
    let mut term = Complex64::new(1.0, 0.0);
    let mut h_k = 0.0;
    let mut sum1 = Complex64::new(0.0, 0.0);
    for k in 0..100 {
        if k > 0 {
            term *= -q / (k as f64 * (k + 1) as f64);
            h_k += 1.0 / k as f64;
        }
        let psi_sum = -2.0 * EULER_GAMMA + 2.0 * h_k + 1.0 / (k + 1) as f64;
        let t = term * psi_sum;
        sum1 += t;
        if k > 0 && t.norm() <= 1e-17 * sum1.norm() {
            break;
        }
    }
    let y1 = -FRAC_2_PI / z + FRAC_2_PI * log_half * j1 - 0.5 * z * sum1 / PI;
    (Scaled::plain(j0 + I * y0), Scaled::plain(j1 + I * y1))
}
