//! Eigenvalues of Hermitian matrices.
//!
//! The matrix is first split into the connected components of its nonzero
//! pattern (dephased and reduced states are frequently block diagonal), then
//! each block is reduced to real symmetric tridiagonal form by Householder
//! reflections and diagonalized with the implicit QL iteration.

use num_complex::Complex;

use crate::scalar::{czero, Real};

/// Eigenvalues of the `n × n` Hermitian matrix stored row-major in `a`,
/// sorted ascending. Only the lower triangle is read.
pub fn hermitian_eigenvalues<T: Real>(n: usize, a: &[Complex<T>]) -> Vec<T> {
    assert_eq!(a.len(), n * n, "matrix storage does not match dimension");
    let mut values = Vec::with_capacity(n);
    for block in components(n, a) {
        if block.len() == 1 {
            values.push(a[block[0] * n + block[0]].re);
            continue;
        }
        let m = block.len();
        let mut sub = vec![czero(); m * m];
        for (r, &i) in block.iter().enumerate() {
            for (c, &j) in block.iter().enumerate().take(r + 1) {
                sub[r * m + c] = a[i * n + j];
            }
        }
        let (mut d, mut e) = tridiagonalize(m, &mut sub);
        tql(&mut d, &mut e);
        values.extend(d);
    }
    values.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
    values
}

/// Index sets of the connected components of the graph with an edge `i-j`
/// whenever `a[i][j] != 0` (lower triangle).
fn components<T: Real>(n: usize, a: &[Complex<T>]) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..n {
        for j in 0..i {
            let z = a[i * n + j];
            if z.re != T::zero() || z.im != T::zero() {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        let r = find(&mut parent, i);
        groups[r].push(i);
    }
    groups.retain(|g| !g.is_empty());
    groups
}

/// Householder reduction of a Hermitian matrix (lower triangle of `a`,
/// row-major, overwritten) to a real symmetric tridiagonal matrix with
/// diagonal `d` and subdiagonal `e` (`e[0]` unused, `e[i]` couples `i-1, i`).
fn tridiagonalize<T: Real>(n: usize, a: &mut [Complex<T>]) -> (Vec<T>, Vec<T>) {
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];
    let mut v = vec![czero::<T>(); n];
    let mut w = vec![czero::<T>(); n];
    let half = T::lit(0.5);
    let scale = a.iter().map(|z| z.re.abs().max(z.im.abs())).fold(T::zero(), T::max);
    let negligible = T::epsilon() * T::epsilon() * scale;

    for i in 0..n.saturating_sub(1) {
        // Column below the diagonal: x = a[i+1.., i].
        let alpha = a[(i + 1) * n + i];
        let mut xnorm2 = T::zero();
        for r in i + 2..n {
            xnorm2 = xnorm2 + a[r * n + i].norm_sqr();
        }
        d[i] = a[i * n + i].re;

        if xnorm2 == T::zero() && alpha.im == T::zero() {
            // Already reduced; no reflection needed.
            e[i + 1] = alpha.re;
            continue;
        }
        if xnorm2.sqrt().max(alpha.norm()) <= negligible {
            // Roundoff-level column: dropping it perturbs eigenvalues by at
            // most eps² ‖A‖ and keeps the reflector away from underflow.
            e[i + 1] = T::zero();
            continue;
        }
        let mut beta = (alpha.norm_sqr() + xnorm2).sqrt();
        if alpha.re >= T::zero() {
            beta = -beta;
        }
        // H = I - tau v v^H, v[0] = 1, with H^H x = beta e_1.
        let tau = Complex::new((beta - alpha.re) / beta, -alpha.im / beta);
        let scale = (alpha - Complex::new(beta, T::zero())).inv();
        let len = n - i - 1;
        v[0] = Complex::new(T::one(), T::zero());
        for r in 1..len {
            v[r] = a[(i + 1 + r) * n + i] * scale;
        }
        e[i + 1] = beta;

        // w = tau * A22 * v, using only the stored lower triangle.
        for x in w[..len].iter_mut() {
            *x = czero();
        }
        for r in 0..len {
            let row = (i + 1 + r) * n + (i + 1);
            let vr = v[r];
            let mut acc = vr * a[row + r].re;
            for c in 0..r {
                let arc = a[row + c];
                acc = acc + arc * v[c];
                w[c] = w[c] + arc.conj() * vr;
            }
            w[r] = w[r] + acc;
        }
        for x in w[..len].iter_mut() {
            *x = tau * *x;
        }
        // w -= (tau/2) (w^H v) v
        let mut dot = czero::<T>();
        for r in 0..len {
            dot = dot + w[r].conj() * v[r];
        }
        let coef = -(tau * dot) * half;
        for r in 0..len {
            w[r] = w[r] + coef * v[r];
        }
        // A22 -= v w^H + w v^H
        for r in 0..len {
            let row = (i + 1 + r) * n + (i + 1);
            let (vr, wr) = (v[r], w[r]);
            for c in 0..=r {
                a[row + c] = a[row + c] - vr * w[c].conj() - wr * v[c].conj();
            }
            a[row + r].im = T::zero();
        }
    }
    if n > 0 {
        d[n - 1] = a[(n - 1) * n + (n - 1)].re;
    }
    (d, e)
}

/// Implicit QL iteration with Wilkinson shifts on a symmetric tridiagonal
/// matrix. On return `d` holds the eigenvalues (unsorted).
fn tql<T: Real>(d: &mut [T], e: &mut [T]) {
    let n = d.len();
    if n < 2 {
        return;
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = T::zero();
    let two = T::lit(2.0);
    // Couplings below this are negligible on the scale of the whole matrix;
    // deflating them avoids iterating on values near underflow.
    let anorm = d
        .iter()
        .zip(e.iter())
        .map(|(x, y)| x.abs() + y.abs())
        .fold(T::zero(), T::max);
    let negligible = T::epsilon() * T::epsilon() * anorm;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= T::epsilon() * dd || e[m].abs() <= negligible {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter <= 60, "tridiagonal QL failed to converge");
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = g.hypot(T::one());
            g = d[m] - d[l] + e[l] / (g + if g >= T::zero() { r } else { -r });
            let (mut s, mut c, mut p) = (T::one(), T::one(), T::zero());
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] = d[i + 1] - p;
                    e[m] = T::zero();
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] = d[l] - p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
}
