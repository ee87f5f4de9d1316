use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;
pub type Int = BigInt;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn ri(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn from_int(n: &Int) -> Rat {
    Rat::from_integer(n.clone())
}

pub fn floor(x: &Rat) -> Int {
    x.floor().to_integer()
}

pub fn is_integer(x: &Rat) -> bool {
    x.is_integer()
}

pub fn to_f64(x: &Rat) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn factorial(n: u32) -> Int {
    (1..=n).fold(Int::one(), |acc, k| acc * Int::from(k))
}

pub fn binomial(n: u32, k: u32) -> Int {
    if k > n {
        return Int::zero();
    }
    let k = k.min(n - k);
    let mut acc = Int::one();
    for i in 0..k {
        acc = acc * Int::from(n - i) / Int::from(i + 1);
    }
    acc
}

/// Parse `"p"`, `"p/q"` or a plain decimal like `"0.25"`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::InvalidInput(format!("cannot parse rational '{s}'"));
    if let Some((p, q)) = s.split_once('/') {
        let p: Int = p.trim().parse().map_err(|_| bad())?;
        let q: Int = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rat::new(p, q));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        let neg = ip.starts_with('-');
        let ip = ip.trim_start_matches(['-', '+']);
        if !fp.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let whole: Int = if ip.is_empty() { Int::zero() } else { ip.parse().map_err(|_| bad())? };
        let frac: Int = if fp.is_empty() { Int::zero() } else { fp.parse().map_err(|_| bad())? };
        let den = num_traits::pow(Int::from(10), fp.len());
        let mut r = Rat::new(whole * &den + frac, den);
        if neg {
            r = -r;
        }
        return Ok(r);
    }
    let p: Int = s.parse().map_err(|_| bad())?;
    Ok(Rat::from_integer(p))
}

pub fn parse_vec(s: &str) -> Result<Vec<Rat>> {
    let s = s.trim().trim_start_matches('(').trim_end_matches(')');
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_rat).collect()
}

pub fn fmt_vec(v: &[Rat]) -> String {
    format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
}

pub fn gcd_all(v: &[Int]) -> Int {
    v.iter().fold(Int::zero(), |g, x| g.gcd(x))
}

/// Least common multiple of the denominators.
pub fn common_denominator(v: &[Rat]) -> Int {
    v.iter().fold(Int::one(), |l, x| l.lcm(x.denom()))
}

/// Scale a nonzero rational vector to the primitive integer vector on the same ray.
/// Returns `(primitive, c)` with `v = c * primitive`, `c > 0`.
pub fn primitive_on_ray(v: &[Rat]) -> Option<(Vec<Int>, Rat)> {
    if v.iter().all(|x| x.is_zero()) {
        return None;
    }
    let l = common_denominator(v);
    let ints: Vec<Int> = v.iter().map(|x| (x * Rat::from_integer(l.clone())).to_integer()).collect();
    let g = gcd_all(&ints);
    let prim: Vec<Int> = ints.iter().map(|x| x / &g).collect();
    Some((prim, Rat::new(g, l)))
}

/// Primitive integer vector with first nonzero entry positive; returns the signed scale too.
pub fn primitive_direction(v: &[Int]) -> Option<(Vec<Int>, Rat)> {
    let q: Vec<Rat> = v.iter().map(from_int).collect();
    let (mut p, mut c) = primitive_on_ray(&q)?;
    if p.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        p.iter_mut().for_each(|x| *x = -x.clone());
        c = -c;
    }
    Some((p, c))
}

pub fn dot_q(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

pub fn dot_zq(a: &[Int], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + y * from_int(x))
}

pub fn dot_z(a: &[Int], b: &[Int]) -> Int {
    a.iter().zip(b).fold(Int::zero(), |acc, (x, y)| acc + x * y)
}

pub fn to_q(v: &[Int]) -> Vec<Rat> {
    v.iter().map(from_int).collect()
}

pub fn zvec(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| Int::from(x)).collect()
}

pub fn qvec(v: &[(i64, i64)]) -> Vec<Rat> {
    v.iter().map(|&(n, d)| rat(n, d)).collect()
}
