//! Conversions between floats and exact rationals, and decimal rendering.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational value of a finite `f64`. Every finite binary float is a
/// rational with a power-of-two denominator; nothing is lost here.
pub fn rational_from_f64(x: f64) -> Result<BigRational> {
    BigRational::from_float(x)
        .ok_or_else(|| Error::Domain(format!("cannot rationalize non-finite float {x}")))
}

/// Nearest `f64` to a rational, robust to numerators and denominators far
/// beyond the float range: both are shifted to ~128 bits independently and
/// the exponent difference is reapplied afterwards.
pub fn ratio_to_f64(q: &BigRational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    let nb = q.numer().bits();
    let db = q.denom().bits();
    if nb <= 1000 && db <= 1000 {
        let n = q.numer().to_f64().unwrap_or(f64::NAN);
        let d = q.denom().to_f64().unwrap_or(f64::NAN);
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let sn = nb.saturating_sub(128);
    let sd = db.saturating_sub(128);
    let n = (q.numer() >> sn).to_f64().unwrap_or(f64::NAN);
    let d = (q.denom() >> sd).to_f64().unwrap_or(f64::NAN);
    let base = n / d;
    let e = (sn as i64 - sd as i64).clamp(-4000, 4000);
    let h = (e / 2) as i32;
    base * 2f64.powi(h) * 2f64.powi((e - h as i64) as i32)
}

/// Decimal rendering of a rational with `sig` significant digits.
///
/// Values of moderate magnitude print in plain positional form, extreme
/// magnitudes in scientific form. Digits are exact (computed by integer
/// long division with round-half-up), so renderings are reproducible.
pub fn decimal_string(q: &BigRational, sig: usize) -> String {
    let sig = sig.max(1);
    if q.is_zero() {
        return "0".to_string();
    }
    let neg = q.is_negative();
    let num = q.numer().abs();
    let den = q.denom().clone();

    // exponent e with 10^e <= |q| < 10^{e+1}
    let mut e: i64 = ((num.bits() as i64 - den.bits() as i64) as f64 * std::f64::consts::LOG10_2) as i64;
    let ten = BigInt::from(10);
    loop {
        // compare |q| with 10^e
        let (lhs, rhs) = if e >= 0 {
            (num.clone(), &den * ten.pow(e as u32))
        } else {
            (&num * ten.pow((-e) as u32), den.clone())
        };
        if lhs < rhs {
            e -= 1;
        } else {
            // |q| >= 10^e; check |q| < 10^{e+1}
            let (lhs2, rhs2) = if e + 1 >= 0 {
                (num.clone(), &den * ten.pow((e + 1) as u32))
            } else {
                (&num * ten.pow((-(e + 1)) as u32), den.clone())
            };
            if lhs2 < rhs2 {
                break;
            }
            e += 1;
        }
    }

    // digits = round(|q| * 10^{sig-1-e}), an integer with `sig` digits
    let scale = sig as i64 - 1 - e;
    let (n, d) = if scale >= 0 {
        (&num * ten.pow(scale as u32), den.clone())
    } else {
        (num.clone(), &den * ten.pow((-scale) as u32))
    };
    let mut digits = (BigInt::from(2) * &n + &d) / (BigInt::from(2) * &d);
    let mut digit_str = digits.to_string();
    if digit_str.len() > sig {
        // rounding carried into a new leading digit (e.g. 999.5 -> 1000)
        e += 1;
        digits /= &ten;
        digit_str = digits.to_string();
    }
    debug_assert_eq!(digit_str.len(), sig);

    let body = if (-4..sig as i64 + 4).contains(&e) {
        if e >= 0 {
            let e = e as usize;
            if e + 1 >= sig {
                // integer with possible trailing zeros
                let mut s = digit_str;
                s.push_str(&"0".repeat(e + 1 - sig));
                s
            } else {
                format!("{}.{}", &digit_str[..e + 1], &digit_str[e + 1..])
            }
        } else {
            format!("0.{}{}", "0".repeat((-e - 1) as usize), digit_str)
        }
    } else {
        let mantissa = if sig == 1 {
            digit_str
        } else {
            format!("{}.{}", &digit_str[..1], &digit_str[1..])
        };
        format!("{mantissa}e{e}")
    };
    let body = trim_trailing_zeros(body);
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

fn trim_trailing_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    if let Some(epos) = s.find('e') {
        let (m, exp) = s.split_at(epos);
        let m = m.trim_end_matches('0').trim_end_matches('.');
        return format!("{m}{exp}");
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// Integer-scale a rational vector by a positive factor so that every entry
/// becomes an integer, then divide out the common content. Positive scaling
/// only, so sign structure and every "origin in hull" predicate survive.
pub(crate) fn primitive_integer_vector(v: &[BigRational]) -> Vec<BigInt> {
    use num_integer::Integer;
    let mut l = BigInt::one();
    for x in v {
        l = l.lcm(x.denom());
    }
    let mut ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if !g.is_zero() && !g.is_one() {
        for x in &mut ints {
            *x /= &g;
        }
    }
    ints
}
