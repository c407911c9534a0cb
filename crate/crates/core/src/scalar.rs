//! Exact scalar types: rationals, Gaussian rationals and the degree-3
//! cyclotomic extension used by order-3 diagram twists.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Zero};
use num::Complex;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Exact rational scalar.
pub type Rat = BigRational;

/// Exact Gaussian rational `re + im·i`.
pub type CRat = Complex<BigRational>;

pub fn rat(n: i64) -> Rat {
    Rat::from(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn crat(n: i64) -> CRat {
    CRat::new(rat(n), Rat::zero())
}

pub fn c_from_rat(r: Rat) -> CRat {
    CRat::new(r, Rat::zero())
}

/// Renders a rational as `p` or `p/q`.
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p` or `p/q`.
pub fn rat_from_str(s: &str) -> Result<Rat, String> {
    s.trim()
        .parse::<Rat>()
        .map_err(|e| format!("invalid rational {s:?}: {e}"))
}

/// Element of Q(w) with w^2 + w + 1 = 0, stored as `a + b·w`.
///
/// This is the scalar field for order-3 twist eigenspaces; the embedding
/// of Q is `b = 0`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Cyc {
    pub a: Rat,
    pub b: Rat,
}

impl Cyc {
    pub fn new(a: Rat, b: Rat) -> Self {
        Cyc { a, b }
    }

    pub fn from_rat(a: Rat) -> Self {
        Cyc { a, b: Rat::zero() }
    }

    /// The primitive cube root of unity w itself.
    pub fn omega() -> Self {
        Cyc {
            a: Rat::zero(),
            b: Rat::one(),
        }
    }

    /// w^k for k mod 3; w^2 = -1 - w.
    pub fn omega_pow(k: i64) -> Self {
        match k.rem_euclid(3) {
            0 => Cyc::from_rat(Rat::one()),
            1 => Cyc::omega(),
            _ => Cyc {
                a: -Rat::one(),
                b: -Rat::one(),
            },
        }
    }

    /// Galois conjugate (w -> w^2).
    pub fn conj(&self) -> Self {
        Cyc {
            a: &self.a - &self.b,
            b: -self.b.clone(),
        }
    }

    /// Field norm a^2 - ab + b^2; zero only at zero.
    pub fn norm(&self) -> Rat {
        &self.a * &self.a - &self.a * &self.b + &self.b * &self.b
    }

    pub fn inv(&self) -> Self {
        let n = self.norm();
        assert!(!n.is_zero(), "division by zero in Q(w)");
        let c = self.conj();
        Cyc {
            a: c.a / &n,
            b: c.b / n,
        }
    }
}

impl Add for Cyc {
    type Output = Cyc;
    fn add(self, rhs: Cyc) -> Cyc {
        Cyc {
            a: self.a + rhs.a,
            b: self.b + rhs.b,
        }
    }
}

impl Sub for Cyc {
    type Output = Cyc;
    fn sub(self, rhs: Cyc) -> Cyc {
        Cyc {
            a: self.a - rhs.a,
            b: self.b - rhs.b,
        }
    }
}

impl Neg for Cyc {
    type Output = Cyc;
    fn neg(self) -> Cyc {
        Cyc {
            a: -self.a,
            b: -self.b,
        }
    }
}

impl Mul for Cyc {
    type Output = Cyc;
    fn mul(self, rhs: Cyc) -> Cyc {
        // (a + bw)(c + dw) = ac - bd + (ad + bc - bd) w
        let ac = &self.a * &rhs.a;
        let bd = &self.b * &rhs.b;
        let ad = &self.a * &rhs.b;
        let bc = &self.b * &rhs.a;
        Cyc {
            a: ac - &bd,
            b: ad + bc - bd,
        }
    }
}

impl Div for Cyc {
    type Output = Cyc;
    // field division is multiplication by the inverse
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Cyc) -> Cyc {
        self * rhs.inv()
    }
}

impl Zero for Cyc {
    fn zero() -> Self {
        Cyc {
            a: Rat::zero(),
            b: Rat::zero(),
        }
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for Cyc {
    fn one() -> Self {
        Cyc {
            a: Rat::one(),
            b: Rat::zero(),
        }
    }
}

impl fmt::Display for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", rat_to_string(&self.a))
        } else {
            write!(
                f,
                "{} + {}w",
                rat_to_string(&self.a),
                rat_to_string(&self.b)
            )
        }
    }
}
