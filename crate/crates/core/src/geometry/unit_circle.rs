use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{reciprocal, IntPoly};

/// `+1` if `P* = P`, `-1` if `P* = -P`, `None` otherwise.
pub fn reciprocal_sign(p: &IntPoly) -> Option<i32> {
    let r = reciprocal(p).ok()?;
    if p.constant_term().is_zero() {
        return None;
    }
    if r == *p {
        Some(1)
    } else if r == -p.clone() {
        Some(-1)
    } else {
        None
    }
}

/// Strips every factor `X - root` from `p`, returning the multiplicity.
fn strip_linear(p: &IntPoly, root: i64) -> (usize, IntPoly) {
    let lin = IntPoly::from_i64(&[-root, 1]);
    let mut rest = p.clone();
    let mut k = 0;
    while rest.deg() > 0 {
        match rest.exact_div(&lin) {
            Some(q) => {
                rest = q;
                k += 1;
            }
            None => break,
        }
    }
    (k, rest)
}

/// For palindromic `h` of degree `2d`, the `g` of degree `d` with
/// `h(z) = z^d g(z + 1/z)`, using `z^k + z^-k = V_k(z + 1/z)`.
pub(crate) fn trace_polynomial(h: &IntPoly) -> IntPoly {
    let d = h.deg() / 2;
    let t = IntPoly::x();
    let mut v_prev = IntPoly::constant(BigInt::from(2));
    let mut v = t.clone();
    let mut g = IntPoly::constant(h.coeff(d));
    for k in 1..=d {
        g = &g + &v.scale(&h.coeff(d + k));
        let next = &(&t * &v) - &v_prev;
        v_prev = std::mem::replace(&mut v, next);
    }
    g
}

fn sign_changes(seq: &[IntPoly], x: &BigInt) -> usize {
    let signs: Vec<i32> = seq
        .iter()
        .map(|p| {
            let v = p.eval(x);
            if v.is_zero() {
                0
            } else if v.is_positive() {
                1
            } else {
                -1
            }
        })
        .filter(|&s| s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Distinct real roots of the squarefree `g` in `(a, b)`; `g(a), g(b) != 0`.
pub fn sturm_count(g: &IntPoly, a: &BigInt, b: &BigInt) -> usize {
    if g.deg() == 0 {
        return 0;
    }
    let mut seq = vec![g.clone(), g.derivative()];
    loop {
        let n = seq.len();
        let (u, v) = (&seq[n - 2], &seq[n - 1]);
        if v.deg() == 0 {
            break;
        }
        // pseudo_rem scales by lc(v)^(delta+1); undo a negative factor
        let delta = u.deg() - v.deg();
        let mut r = u.pseudo_rem(v);
        if v.lead().unwrap().is_negative() && delta % 2 == 0 {
            r = -r;
        }
        if r.is_zero() {
            break;
        }
        let c = r.content();
        let r = -r.div_scalar_exact(&c).expect("content divides");
        seq.push(r);
    }
    sign_changes(&seq, a) - sign_changes(&seq, b)
}

/// Exact number of roots of `p` on `|z| = 1`, with multiplicity.
pub fn unit_circle_roots(p: &IntPoly) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.constant_term().is_zero() {
        return Err(Error::ZeroConstantTerm);
    }
    if p.deg() == 0 {
        return Ok(0);
    }
    // a root on the circle is also a root of P* with equal multiplicity
    let g = p.gcd(&reciprocal(p)?);
    let (k1, g) = strip_linear(&g, 1);
    let (km1, h) = strip_linear(&g, -1);
    let mut count = k1 + km1;
    if h.deg() == 0 {
        return Ok(count);
    }
    debug_assert_eq!(reciprocal_sign(&h), Some(1));
    let t = trace_polynomial(&h);
    let two = BigInt::from(2);
    for (factor, mult) in t.squarefree_decomposition() {
        count += 2 * mult * sturm_count(&factor, &-two.clone(), &two);
    }
    Ok(count)
}
