use crate::scalar::{c, cr, Cplx, Real};

use super::LambdaConfig;

/// 3×3 complex operator over `{|1>, |2>, |3>}`, row-major.
pub type Matrix3<T> = [[Cplx<T>; 3]; 3];

/// 9×9 superoperator acting on the column-stacked density matrix:
/// `vec(ρ)[3·col + row] = ρ[row][col]`.
pub type Liouvillian<T> = [[Cplx<T>; 9]; 9];

fn zeros3<T: Real>() -> Matrix3<T> {
    [[cr(T::zero()); 3]; 3]
}

fn ket_bra<T: Real>(i: usize, j: usize, amp: T) -> Matrix3<T> {
    let mut m = zeros3();
    m[i][j] = cr(amp);
    m
}

fn dagger<T: Real>(a: &Matrix3<T>) -> Matrix3<T> {
    let mut d = zeros3();
    for i in 0..3 {
        for j in 0..3 {
            d[i][j] = a[j][i].conj();
        }
    }
    d
}

fn matmul<T: Real>(a: &Matrix3<T>, b: &Matrix3<T>) -> Matrix3<T> {
    let mut m = zeros3();
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = (0..3).fold(cr(T::zero()), |s, k| s + a[i][k] * b[k][j]);
        }
    }
    m
}

/// Rotating-wave Λ Hamiltonian in the frame co-rotating with both fields:
///
/// `H = −Δp|3><3| − (Δp − Δc)|2><2| + Ωp/2 (|3><1| + h.c.) + Ωc/2 (|3><2| + h.c.)`
pub fn build_hamiltonian<T: Real>(cfg: &LambdaConfig<T>) -> Matrix3<T> {
    let dp = cfg.probe_detuning();
    let dc = cfg.control_detuning();
    let hp = cfg.probe_rabi / T::two();
    let hc = cfg.control_rabi / T::two();
    let mut h = zeros3();
    h[1][1] = cr(-(dp - dc));
    h[2][2] = cr(-dp);
    h[2][0] = cr(hp);
    h[0][2] = cr(hp);
    h[2][1] = cr(hc);
    h[1][2] = cr(hc);
    h
}

/// Collapse operators: the three decay legs plus optional dephasing.
///
/// Dephasing of level k uses `√(γφk/2)·(2|k><k| − I)`, which damps every
/// coherence involving level k at rate γφk and leaves the others untouched.
pub(crate) fn collapse_operators<T: Real>(cfg: &LambdaConfig<T>) -> Vec<Matrix3<T>> {
    let mut ops = vec![
        ket_bra(0, 2, cfg.gamma_31.sqrt()),
        ket_bra(1, 2, cfg.gamma_32.sqrt()),
        ket_bra(0, 1, cfg.gamma_21.sqrt()),
    ];
    for (level, rate) in [(1usize, cfg.gamma_phi2), (2, cfg.gamma_phi3)] {
        if rate > T::zero() {
            let a = (rate / T::two()).sqrt();
            let mut m = zeros3();
            for (k, row) in m.iter_mut().enumerate() {
                row[k] = cr(if k == level { a } else { -a });
            }
            ops.push(m);
        }
    }
    ops
}

/// Adds `coef · (Bᵀ ⊗ A)`, the superoperator of `ρ ↦ A ρ B`, into `l`.
fn add_sandwich<T: Real>(l: &mut Liouvillian<T>, a: &Matrix3<T>, b: &Matrix3<T>, coef: Cplx<T>) {
    for col in 0..3 {
        for row in 0..3 {
            for col2 in 0..3 {
                for row2 in 0..3 {
                    let v = b[col2][col] * a[row][row2];
                    if v != cr(T::zero()) {
                        l[3 * col + row][3 * col2 + row2] += coef * v;
                    }
                }
            }
        }
    }
}

fn identity3<T: Real>() -> Matrix3<T> {
    let mut m = zeros3();
    for (k, row) in m.iter_mut().enumerate() {
        row[k] = cr(T::one());
    }
    m
}

/// Superoperator of `ρ ↦ −i[H, ρ] + Σk D[ck]ρ`, `D[c]ρ = cρc† − ½{c†c, ρ}`.
pub fn build_liouvillian<T: Real>(cfg: &LambdaConfig<T>) -> Liouvillian<T> {
    let h = build_hamiltonian(cfg);
    let id = identity3();
    let mut l = [[cr(T::zero()); 9]; 9];
    let minus_i = c(T::zero(), -T::one());
    add_sandwich(&mut l, &h, &id, minus_i);
    add_sandwich(&mut l, &id, &h, -minus_i);
    let neg_half = cr(-T::half());
    for op in collapse_operators(cfg) {
        let op_dag = dagger(&op);
        let n = matmul(&op_dag, &op);
        add_sandwich(&mut l, &op, &op_dag, cr(T::one()));
        add_sandwich(&mut l, &n, &id, neg_half);
        add_sandwich(&mut l, &id, &n, neg_half);
    }
    l
}

/// Column-stacks a 3×3 matrix.
pub(crate) fn vectorize<T: Real>(m: &Matrix3<T>) -> [Cplx<T>; 9] {
    let mut v = [cr(T::zero()); 9];
    for col in 0..3 {
        for row in 0..3 {
            v[3 * col + row] = m[row][col];
        }
    }
    v
}

pub(crate) fn unvectorize<T: Real>(v: &[Cplx<T>; 9]) -> Matrix3<T> {
    let mut m = zeros3();
    for col in 0..3 {
        for row in 0..3 {
            m[row][col] = v[3 * col + row];
        }
    }
    m
}

pub(crate) fn apply<T: Real>(l: &Liouvillian<T>, v: &[Cplx<T>; 9]) -> [Cplx<T>; 9] {
    let mut out = [cr(T::zero()); 9];
    for (o, row) in out.iter_mut().zip(l.iter()) {
        *o = row
            .iter()
            .zip(v.iter())
            .fold(cr(T::zero()), |s, (a, b)| s + *a * *b);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn cfg() -> LambdaConfig<f64> {
        LambdaConfig {
            omega_13: 10.0,
            omega_23: 8.0,
            gamma_31: 0.35,
            gamma_32: 0.47,
            gamma_21: 0.01,
            gamma_phi2: 0.0,
            gamma_phi3: 0.0,
            probe_rabi: 0.2,
            probe_omega: 10.1,
            control_rabi: 0.5,
            control_omega: 8.05,
        }
    }

    fn commutator_direct(h: &Matrix3<f64>, rho: &Matrix3<f64>) -> Matrix3<f64> {
        let a = matmul(h, rho);
        let b = matmul(rho, h);
        let mut out = zeros3();
        for i in 0..3 {
            for j in 0..3 {
                out[i][j] = Complex64::new(0.0, -1.0) * (a[i][j] - b[i][j]);
            }
        }
        out
    }

    #[test]
    fn zero_drives_on_resonance_give_zero_hamiltonian() {
        let mut c = cfg();
        c.probe_rabi = 0.0;
        c.control_rabi = 0.0;
        c.probe_omega = c.omega_13;
        c.control_omega = c.omega_23;
        let h = build_hamiltonian(&c);
        assert!(h.iter().flatten().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn two_photon_resonance_cancels_level_two_energy() {
        let mut c = cfg();
        c.control_omega = c.omega_23 + c.probe_detuning();
        assert_eq!(build_hamiltonian(&c)[1][1].norm(), 0.0);
    }

    #[test]
    fn hamiltonian_is_hermitian() {
        let h = build_hamiltonian(&cfg());
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(h[i][j], h[j][i].conj());
            }
        }
    }

    #[test]
    fn liouvillian_matches_direct_master_equation() {
        let c = LambdaConfig {
            gamma_phi2: 0.03,
            gamma_phi3: 0.02,
            ..cfg()
        };
        let l = build_liouvillian(&c);
        let h = build_hamiltonian(&c);
        // arbitrary (non-physical) matrix is fine for a linearity check
        let mut rho = zeros3();
        for i in 0..3 {
            for j in 0..3 {
                rho[i][j] = Complex64::new(0.1 * (i + 2 * j) as f64, 0.03 * (i as f64 - j as f64));
            }
        }
        let mut expect = commutator_direct(&h, &rho);
        for op in collapse_operators(&c) {
            let d = dagger(&op);
            let n = matmul(&d, &op);
            let a = matmul(&matmul(&op, &rho), &d);
            let b = matmul(&n, &rho);
            let e = matmul(&rho, &n);
            for i in 0..3 {
                for j in 0..3 {
                    expect[i][j] += a[i][j] - 0.5 * (b[i][j] + e[i][j]);
                }
            }
        }
        let got = unvectorize(&apply(&l, &vectorize(&rho)));
        for i in 0..3 {
            for j in 0..3 {
                assert!((got[i][j] - expect[i][j]).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn dephasing_damps_only_coherences_with_its_level() {
        let c = LambdaConfig {
            gamma_31: 0.0,
            gamma_32: 0.0,
            gamma_21: 0.0,
            gamma_phi2: 0.4,
            probe_rabi: 0.0,
            control_rabi: 0.0,
            probe_omega: 10.0,
            control_omega: 8.0,
            ..cfg()
        };
        let l = build_liouvillian(&c);
        let mut rho = zeros3();
        rho[0][1] = Complex64::new(1.0, 0.0); // coherence 1-2
        rho[0][2] = Complex64::new(1.0, 0.0); // coherence 1-3
        let out = unvectorize(&apply(&l, &vectorize(&rho)));
        assert!((out[0][1] + Complex64::new(0.4, 0.0)).norm() < 1e-15);
        assert!(out[0][2].norm() < 1e-15);
    }

    #[test]
    fn identity_is_annihilated_without_drives_or_decay() {
        let c = LambdaConfig {
            gamma_31: 0.0,
            gamma_32: 0.0,
            gamma_21: 0.0,
            probe_rabi: 0.0,
            control_rabi: 0.0,
            ..cfg()
        };
        let l = build_liouvillian(&c);
        let mut id = zeros3();
        for (k, row) in id.iter_mut().enumerate() {
            row[k] = Complex64::new(1.0 / 3.0, 0.0);
        }
        assert!(apply(&l, &vectorize(&id)).iter().all(|z| z.norm() < 1e-15));
    }
}
