use std::f64::consts::PI;

use num_complex::Complex64;
use su3_forge::dod::{compose_dod, solve_dod, table1, SolveConfig};
use su3_forge::gates::{walsh_hadamard, wh_hamiltonian};
use su3_forge::mat3::{expm_hermitian_generator, frobenius_distance, haar_random_unitary, logm_unitary, BranchVector, CMat3};
use su3_forge::symmetry::commutant;

#[test]
fn frobenius_distance_elementwise_oracle() {
    let w = walsh_hadamard::<f64>();
    let id = CMat3::<f64>::identity();
    let mut sum = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            sum += (w.rows()[i][j] - id.rows()[i][j]).norm_sqr();
        }
    }
    assert!((frobenius_distance(&w, &id) - sum.sqrt()).abs() < 1e-15);
    assert!((frobenius_distance(&id, &id.scale_real(2.0)) - 3f64.sqrt()).abs() < 1e-15);
}

#[test]
fn centre_shift_preserves_the_product() {
    let omega = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
    for p in table1().solutions {
        let v = expm_hermitian_generator(&p.g_o()).unwrap().scale(omega);
        let phi = p.phi.map(|x| x + 2.0 * PI / 3.0);
        let shifted = BranchVector::enumerate(1)
            .map(|k| logm_unitary(&v, k).unwrap())
            .find(|g| g.trace().norm() < 1e-9)
            .expect("a traceless branch exists since det = 1");
        let d = CMat3::diag(phi.map(|x| Complex64::from_polar(1.0, -x)));
        let u = d * expm_hermitian_generator(&shifted).unwrap();
        assert!(frobenius_distance(&u, &compose_dod(&p)) < 1e-12);
    }
}

#[test]
fn solver_is_deterministic_across_thread_counts() {
    let u = haar_random_unitary::<f64>(17);
    for seed in [0, 9] {
        let cfg = SolveConfig { starts: 3, seed, ..SolveConfig::default() };
        let run = |threads| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            pool.install(|| solve_dod(&u, &cfg).unwrap())
        };
        let a = run(1);
        let b = run(4);
        assert_eq!(a, b);
        assert!(!a.is_empty());
        assert!(a.residuals.iter().all(|&r| r <= cfg.tol));
    }
}

#[test]
fn commutant_preserves_the_hamiltonian() {
    let w = walsh_hadamard::<f64>();
    let h = wh_hamiltonian::<f64>();
    let fam = commutant(&w).unwrap();
    for theta in [[0.1, 0.2, 0.3], [PI, 0.0, 0.0], [-2.0, 1.5, 0.7]] {
        let t = fam.sample(theta);
        assert!(frobenius_distance(&(t * h * t.adjoint()), &h) < 1e-10);
    }
}

#[test]
fn identity_has_the_trivial_solution() {
    let set = solve_dod(&CMat3::<f64>::identity(), &SolveConfig { starts: 3, ..SolveConfig::default() }).unwrap();
    assert!(set
        .solutions
        .iter()
        .any(|p| p.canonical().phi.iter().all(|&x| x.abs() < 1e-9 || (x - 2.0 * PI).abs() < 1e-9)
            && p.m01.norm() + p.m02.norm() + p.m12.norm() < 1e-9));
}
