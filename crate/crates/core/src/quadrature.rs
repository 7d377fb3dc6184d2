//! Gauss-Legendre rules on [-1, 1] used for projections and error norms.

use crate::scalar::Real;

/// Two-point rule; exact through cubic polynomials.
pub fn gauss2<T: Real>() -> [(T, T); 2] {
    let node = T::of(0.577_350_269_189_625_7);
    [(-node, T::one()), (node, T::one())]
}

/// Five-point rule; exact through degree nine.
pub fn gauss5<T: Real>() -> [(T, T); 5] {
    let n1 = T::of(0.538_469_310_105_683_1);
    let n2 = T::of(0.906_179_845_938_664);
    let w0 = T::of(0.568_888_888_888_888_9);
    let w1 = T::of(0.478_628_670_499_366_5);
    let w2 = T::of(0.236_926_885_056_189_08);
    [(-n2, w2), (-n1, w1), (T::zero(), w0), (n1, w1), (n2, w2)]
}
