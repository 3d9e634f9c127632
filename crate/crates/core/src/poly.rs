use num_traits::Zero;

use crate::numeric::Rational;

/// Dense polynomial, coefficients in ascending degree. The zero polynomial
/// has no coefficients; otherwise the last coefficient is nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `x^power` (zero past the degree).
    pub fn coefficient(&self, power: usize) -> Rational {
        self.coeffs.get(power).cloned().unwrap_or_else(Rational::zero)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }
}

pub fn eval_poly(p: &Polynomial, x: &Rational) -> Rational {
    p.eval(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{int, rat};

    #[test]
    fn horner_examples() {
        let p = Polynomial::new(vec![int(1), int(0), int(1)]);
        assert_eq!(p.eval(&int(2)), int(5));
        assert_eq!(Polynomial::zero().eval(&rat(7, 3)), int(0));
        let cube = Polynomial::new(vec![int(0), int(0), int(0), int(1)]);
        assert_eq!(cube.eval(&int(3)), int(27));
        assert_eq!(cube.eval(&rat(-1, 2)), rat(-1, 8));
    }

    #[test]
    fn trailing_zeros_are_trimmed() {
        let p = Polynomial::new(vec![int(2), int(0), int(0)]);
        assert_eq!(p.degree(), Some(0));
        assert_eq!(Polynomial::new(vec![int(0)]), Polynomial::zero());
        assert_eq!(Polynomial::zero().degree(), None);
        assert_eq!(p.coefficient(5), int(0));
    }
}
