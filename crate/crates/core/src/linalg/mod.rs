//! Exact dense linear algebra over the rationals, plus matrices of Laurent
//! polynomials in one variable.

mod laurent;
mod matrix;
mod subspace;

pub use laurent::{det_laurent, LaurentMatrix, LaurentPoly};
pub use matrix::{rref, RationalMatrix, Rref};
pub use subspace::{kernel_basis, subspace_equal, Subspace};

use num_bigint::BigInt;
use num_rational::BigRational;

/// Arbitrary-precision exact fraction. Always in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Formats as `num/den`, omitting `/1`.
pub fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `num`, `-num` or `num/den`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (
            n.trim().parse::<BigInt>().ok()?,
            d.trim().parse::<BigInt>().ok()?,
        ),
        None => (s.parse::<BigInt>().ok()?, BigInt::from(1)),
    };
    if d == BigInt::from(0) {
        return None;
    }
    Some(Rational::new(n, d))
}
