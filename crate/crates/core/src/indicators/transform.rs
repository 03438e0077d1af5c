use crate::scalar::Scalar;

use super::Column;

/// Pointwise math transforms of the current value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transform {
    Atan,
    Cos,
    Cosh,
    Exp,
    Sin,
    Sinh,
    Sqrt,
    Tan,
    Tanh,
}

impl Transform {
    pub fn apply<T: Scalar>(self, y: T) -> Option<T> {
        let v = match self {
            Transform::Atan => y.atan(),
            Transform::Cos => y.cos(),
            Transform::Cosh => y.cosh(),
            Transform::Exp => y.exp(),
            Transform::Sin => y.sin(),
            Transform::Sinh => y.sinh(),
            Transform::Sqrt if y < T::zero() => return None,
            Transform::Sqrt => y.sqrt(),
            Transform::Tan => y.tan(),
            Transform::Tanh => y.tanh(),
        };
        Some(v)
    }
}

/// Applies `f` to every value; negative inputs to `Sqrt` are undefined.
pub fn elementwise<T: Scalar>(ys: &[T], f: Transform) -> Column<T> {
    ys.iter().map(|y| f.apply(*y)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_at_zero() {
        use Transform::*;
        for (f, want) in [
            (Atan, 0.0),
            (Sin, 0.0),
            (Tan, 0.0),
            (Sinh, 0.0),
            (Tanh, 0.0),
            (Cos, 1.0),
            (Cosh, 1.0),
            (Exp, 1.0),
            (Sqrt, 0.0),
        ] {
            assert_eq!(f.apply(0.0f64), Some(want), "{f:?}");
        }
    }

    #[test]
    fn exp_of_one() {
        let e = Transform::Exp.apply(1.0f64).unwrap();
        assert!((e - std::f64::consts::E).abs() < 1e-15);
    }

    #[test]
    fn sqrt_negative_undefined() {
        assert_eq!(
            elementwise(&[4.0f64, -1.0], Transform::Sqrt),
            vec![Some(2.0), None]
        );
    }
}
