//! Double-double helpers. `twofloat` 0.8 divides to little more than `f64`
//! accuracy (relative error near 1e-17), so quotients are formed here from
//! `f64` partial quotients with exact residuals.

use twofloat::TwoFloat;

/// `a / b` to full double-double accuracy.
pub fn div(a: TwoFloat, b: TwoFloat) -> TwoFloat {
    let q1 = a.hi() / b.hi();
    let r = a - b * q1;
    let q2 = r.hi() / b.hi();
    let r = r - b * q2;
    let q3 = r.hi() / b.hi();
    TwoFloat::new_add(q1, q2) + q3
}

/// `(cos θ, sin θ)` rescaled to unit length in double-double.
pub fn unit(theta: f64) -> [TwoFloat; 2] {
    let t = TwoFloat::from(theta);
    let (c, s) = (t.cos(), t.sin());
    let norm = (c * c + s * s).sqrt();
    [div(c, norm), div(s, norm)]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quotients_and_units_are_accurate() {
        for th in [0.3, 0.9, 1.3, 2.0, 4.0] {
            let m = TwoFloat::from(th).cos().abs();
            let a = TwoFloat::from(0.37) + m * 1e-18;
            assert!((div(a, m) * m - a).abs().hi() < 1e-31);
            let [c, s] = unit(th);
            assert!((c * c + s * s - 1.0).abs().hi() < 1e-31);
            assert!((c.hi() - th.cos()).abs() < 1e-15);
        }
    }
}
