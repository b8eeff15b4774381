//! Exact arithmetic: Laurent polynomials in `(L, T)`, rational functions in
//! `s` with factored linear denominators, and cyclotomic products.

mod cyclo;
mod poly2;
mod ratfunc;

pub use cyclo::{cyclo_multiplicity, CycloProduct};
pub use num_rational::BigRational as BigRat;
pub use poly2::Poly2;
pub use ratfunc::{LinearForm, RatFuncS};

use num_traits::Zero;

use crate::error::{Error, Result};

/// Value at `L = 1` of `num / den` after cancelling common powers of `L - 1`.
///
/// Both arguments must be free of `T`. The order of vanishing at `L = 1` is
/// read off the Taylor expansion, which is the same as dividing by `L - 1`
/// while both sides vanish.
pub fn eval_at_one_with_cancellation(num: &Poly2, den: &Poly2) -> Result<BigRat> {
    debug_assert!(num.is_t_free() && den.is_t_free());
    assert!(!den.is_zero(), "denominator is identically zero");
    if num.is_zero() {
        return Ok(BigRat::zero());
    }
    let mut m = 0u32;
    loop {
        let d = den.taylor_at_l_one(m);
        let n = num.taylor_at_l_one(m);
        if !d.is_zero() {
            return Ok(n / d);
        }
        if !n.is_zero() {
            return Err(Error::PoleAtOne);
        }
        m += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn p(terms: &[(i64, i64)]) -> Poly2 {
        Poly2::from_terms(terms.iter().map(|&(e, c)| ((e, 0), BigInt::from(c))))
    }

    fn r(n: i64, d: i64) -> BigRat {
        BigRat::new(n.into(), d.into())
    }

    #[test]
    fn cancels_common_factors() {
        let l2m1 = p(&[(2, 1), (0, -1)]);
        let lm1 = p(&[(1, 1), (0, -1)]);
        assert_eq!(eval_at_one_with_cancellation(&l2m1, &lm1).unwrap(), r(2, 1));
        assert_eq!(eval_at_one_with_cancellation(&lm1, &l2m1).unwrap(), r(1, 2));
        let sq = &lm1 * &lm1;
        assert_eq!(eval_at_one_with_cancellation(&sq, &lm1).unwrap(), r(0, 1));
    }

    #[test]
    fn pole_is_reported() {
        let lm1 = p(&[(1, 1), (0, -1)]);
        assert_eq!(
            eval_at_one_with_cancellation(&Poly2::one(), &lm1),
            Err(Error::PoleAtOne)
        );
    }

    #[test]
    fn laurent_denominators() {
        // (1 - L^-2) / (L - 1) = (L + 1) / L^2 -> 2
        let num = p(&[(0, 1), (-2, -1)]);
        let den = p(&[(1, 1), (0, -1)]);
        assert_eq!(eval_at_one_with_cancellation(&num, &den).unwrap(), r(2, 1));
    }
}
