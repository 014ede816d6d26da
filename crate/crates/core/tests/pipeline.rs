use fano_qc_core::exact::rat;
use fano_qc_core::gw::{gw_invariants, quantum_mult_table, tilde_matrix};
use fano_qc_core::{FanoParams, Pipeline, PolyMatrix, QHPoly};

fn pipeline(n: i64, k: i64) -> Pipeline {
    Pipeline::run(FanoParams::new_relaxed(n, k).unwrap()).unwrap()
}

/// Quantum multiplication by the hyperplane class on `CP^{N-2}`: `b^{N-1} = q`.
#[test]
fn hyperplane_is_projective_space() {
    for n in 3..=9 {
        let p = pipeline(n, 1);
        let dim = p.params.dim();
        let mut want = PolyMatrix::shift_down(dim);
        want.set(0, dim - 1, QHPoly::q());
        assert_eq!(p.dubrovin.matrix(), &want, "N = {n}");
        assert_eq!(p.table.entries().len(), 1);
        assert_eq!(p.table.l(0, 1), rat(1));
    }
}

/// On a quadric the relation is `b^{N-1} = 4 q b`.
#[test]
fn quadric_relation() {
    for n in 5..=10 {
        let p = pipeline(n, 2);
        let m = tilde_matrix(&p.dubrovin);
        let dim = p.params.dim();
        let mut e0 = vec![QHPoly::zero(); dim];
        e0[0] = QHPoly::one();
        let lhs = m.pow(dim as u32).mul_vec(&e0).unwrap();
        let rhs: Vec<QHPoly> = m
            .mul_vec(&e0)
            .unwrap()
            .iter()
            .map(|e| e * &QHPoly::monomial(rat(4), 1, 0))
            .collect();
        assert_eq!(lhs, rhs, "N = {n}");
    }
}

/// `b ∘ b_{N-2-m} = b_{N-1-m} + Σ_d L_m^d q^d b_{N-1-m-d(N-k)}` read back from
/// the product table.
#[test]
fn product_table_agrees_with_constants() {
    for (n, k) in [(5, 3), (7, 5), (8, 4), (6, 5)] {
        let p = pipeline(n, k);
        let table = quantum_mult_table(&p.dubrovin).unwrap();
        let (n, idx) = (p.params.n(), p.params.index());
        for m in 0..=n - 2 {
            let terms = &table[&(1, n - 2 - m)];
            for t in terms {
                if t.q_power == 0 {
                    assert_eq!((t.basis, t.coeff.clone()), (n - 1 - m, rat(1)));
                    continue;
                }
                let d = t.q_power as usize;
                assert_eq!(t.basis + d * idx, n - 1 - m);
                assert_eq!(t.coeff, p.table.l(m, d), "{} m={m} d={d}", p.params);
            }
        }
    }
}

#[test]
fn invariants_are_k_times_constants() {
    let p = pipeline(7, 5);
    let records = gw_invariants(&p.table);
    let r = records
        .iter()
        .find(|r| r.d == 1 && r.classes == [1, 1, 5])
        .unwrap();
    assert_eq!(r.value, rat(600));
    for r in &records {
        let m = p.params.n() - 2 - r.classes[1];
        assert_eq!(r.value, p.table.l(m, r.d) * rat(5));
        assert_eq!(r.classes[2], m + 2 * r.d - 1);
    }
}

#[test]
fn the_omega_hat_for_m5_4_is_unshifted() {
    let p = pipeline(5, 4);
    assert!(!p.normalized.is_shifted());
    assert!(p.dubrovin.is_shifted());
    assert_eq!(
        p.normalized.matrix().get(0, 0),
        &"24*q".parse::<QHPoly>().unwrap()
    );
    assert_eq!(p.dubrovin.matrix().get(0, 0), &QHPoly::zero());
    assert_eq!(p.dubrovin.unshifted_matrix(), *p.normalized.matrix());
}
