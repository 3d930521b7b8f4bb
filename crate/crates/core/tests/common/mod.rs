//! Independent numerical oracles. None of these share code paths with the library
//! beyond matrix storage.
#![allow(dead_code)]

use memsfront::{ComplexMatrix4, C64};

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

pub fn matmul(a: &ComplexMatrix4, b: &ComplexMatrix4) -> [[C64; 4]; 4] {
    let mut out = [[C64::new(0.0, 0.0); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                out[i][j] += a[(i, k)] * b[(k, j)];
            }
        }
    }
    out
}

fn mul(a: &[[C64; 4]; 4], b: &[[C64; 4]; 4]) -> [[C64; 4]; 4] {
    let mut out = [[C64::new(0.0, 0.0); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

/// Characteristic polynomial coefficients `[1, c1, c2, c3, c4]` by Faddeev–LeVerrier.
pub fn char_poly(a: &[[C64; 4]; 4]) -> [C64; 5] {
    let zero = C64::new(0.0, 0.0);
    let mut c = [zero; 5];
    c[0] = C64::new(1.0, 0.0);
    let mut m = [[zero; 4]; 4];
    for k in 1..=4 {
        let mut mk = mul(a, &m);
        for i in 0..4 {
            mk[i][i] += c[k - 1];
        }
        m = mk;
        let am = mul(a, &m);
        let tr: C64 = (0..4).map(|i| am[i][i]).sum();
        c[k] = -tr / k as f64;
    }
    c
}

/// All roots of the monic polynomial `z^n + c[1] z^(n-1) + ... + c[n]` by
/// Durand–Kerner iteration. Trailing coefficients below `1e-13` are taken as exact
/// zero roots, which keeps the iteration away from ill-conditioned clusters at 0.
pub fn poly_roots(c: &[C64]) -> Vec<C64> {
    let mut n = c.len() - 1;
    let mut zeros = 0;
    while n > 0 && c[n].norm() < 1e-13 {
        n -= 1;
        zeros += 1;
    }
    let p = |z: C64| c[..=n].iter().fold(C64::new(0.0, 0.0), |acc, &ck| acc * z + ck);
    let seed = C64::new(0.4, 0.9);
    let mut z: Vec<C64> = (0..n).map(|k| seed.powu(k as u32)).collect();
    for _ in 0..5000 {
        let prev = z.clone();
        for i in 0..n {
            let mut den = C64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            if den.norm() > 0.0 {
                let step = p(z[i]) / den;
                z[i] -= step;
            }
        }
        if (0..n).all(|i| (z[i] - prev[i]).norm() < 1e-17) {
            break;
        }
    }
    z.extend(std::iter::repeat_n(C64::new(0.0, 0.0), zeros));
    z
}

/// Real parts of the eigenvalues of `m`, sorted non-increasing.
pub fn eigenvalues_by_char_poly(m: &[[C64; 4]; 4]) -> [f64; 4] {
    let roots = poly_roots(&char_poly(m));
    let mut v: [f64; 4] = std::array::from_fn(|k| roots[k].re);
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// `Tr ρ²` by explicit entrywise products.
pub fn purity_direct(rho: &ComplexMatrix4) -> f64 {
    let mut s = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            s += (rho[(i, j)] * rho[(j, i)]).re;
        }
    }
    s
}

/// Wootters concurrence from the eigenvalues of `R = ρ (σy⊗σy) ρ* (σy⊗σy)`.
pub fn wootters_concurrence(rho: &ComplexMatrix4) -> f64 {
    let mut yy = ComplexMatrix4::zeros();
    yy[(0, 3)] = C64::new(-1.0, 0.0);
    yy[(3, 0)] = C64::new(-1.0, 0.0);
    yy[(1, 2)] = C64::new(1.0, 0.0);
    yy[(2, 1)] = C64::new(1.0, 0.0);
    let flipped = ComplexMatrix4::new(matmul(&ComplexMatrix4::new(matmul(&yy, &rho.conj())), &yy));
    let r = matmul(rho, &flipped);
    let mut l = eigenvalues_by_char_poly(&r).map(|v| v.max(0.0).sqrt());
    l.sort_by(|a, b| b.total_cmp(a));
    (l[0] - l[1] - l[2] - l[3]).max(0.0)
}

fn pauli(k: usize) -> [[C64; 2]; 2] {
    let (o, z, i) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 1.0));
    match k {
        0 => [[z, o], [o, z]],
        1 => [[z, -i], [i, z]],
        _ => [[o, z], [z, -o]],
    }
}

fn spin(n: [f64; 3]) -> [[C64; 2]; 2] {
    let mut m = [[C64::new(0.0, 0.0); 2]; 2];
    for (k, nk) in n.iter().enumerate() {
        let p = pauli(k);
        for a in 0..2 {
            for b in 0..2 {
                m[a][b] += p[a][b] * *nk;
            }
        }
    }
    m
}

/// `⟨(a·σ) ⊗ (b·σ)⟩`.
pub fn correlation(rho: &ComplexMatrix4, a: [f64; 3], b: [f64; 3]) -> f64 {
    let op = ComplexMatrix4::kron(&spin(a), &spin(b));
    op.trace_product(rho).re
}

fn unit(theta: f64, phi: f64) -> [f64; 3] {
    [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()]
}

/// CHSH maximum by a grid over Alice's two settings on the sphere; Bob's optimal
/// settings are taken analytically as the norms of the conditioned correlation
/// vectors. A lower bound on the true B that approaches it as `n` grows.
pub fn chsh_grid(rho: &ComplexMatrix4, n: usize) -> f64 {
    let e = |j: usize| {
        let mut v = [0.0; 3];
        v[j] = 1.0;
        v
    };
    let t: [[f64; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| correlation(rho, e(i), e(j))));
    let pi = std::f64::consts::PI;
    let dirs: Vec<[f64; 3]> = (0..n)
        .flat_map(|i| (0..2 * n).map(move |j| unit(pi * (i as f64 + 0.5) / n as f64, pi * j as f64 / n as f64)))
        .collect();
    let bob = |v: [f64; 3]| -> f64 {
        (0..3)
            .map(|j| (0..3).map(|i| v[i] * t[i][j]).sum::<f64>().powi(2))
            .sum::<f64>()
            .sqrt()
    };
    let mut best: f64 = 0.0;
    for a in &dirs {
        for a2 in &dirs {
            let plus = std::array::from_fn(|k| a[k] + a2[k]);
            let minus = std::array::from_fn(|k| a[k] - a2[k]);
            best = best.max(bob(plus) + bob(minus));
        }
    }
    best
}
