use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use varbvp_core::difference::{build_operator_matrix, embedding_constants, nth_diff, weighted_divergence};
use varbvp_core::sequence_space::{extend, InteriorVector};

fn random_vec(rng: &mut ChaCha8Rng, len: usize, r: f64) -> Vec<f64> {
    (0..len).map(|_| rng.random_range(-r..=r)).collect()
}

#[test]
fn summation_by_parts() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let n = rng.random_range(1..=3);
        let len = rng.random_range(2..=12);
        let x = InteriorVector::new(random_vec(&mut rng, len, 5.0)).unwrap();
        let h = InteriorVector::new(random_vec(&mut rng, len, 5.0)).unwrap();
        let p = random_vec(&mut rng, len + n, 2.0);

        let dx = nth_diff(&extend(&x, n), n).unwrap();
        let dh = nth_diff(&extend(&h, n), n).unwrap();
        let terms: Vec<f64> = (0..len + n).map(|i| p[i] * dx[i] * dh[i]).collect();
        let lhs: f64 = terms.iter().sum();

        let div = weighted_divergence(&x, &p, n).unwrap();
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let rhs_terms: Vec<f64> = div.iter().zip(h.as_slice()).map(|(d, hk)| sign * d * hk).collect();
        let rhs: f64 = rhs_terms.iter().sum();

        let scale = terms.iter().chain(&rhs_terms).map(|t| t.abs()).sum::<f64>().max(1.0);
        assert!((lhs - rhs).abs() <= 1e-12 * scale, "n={n} N={len}: {lhs} vs {rhs}");
    }
}

#[test]
fn operator_matrix_agrees_with_stencil_on_random_vectors() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..200 {
        let n = rng.random_range(1..=3);
        let len = rng.random_range(2..=12);
        let x = InteriorVector::new(random_vec(&mut rng, len, 3.0)).unwrap();
        let d = build_operator_matrix(len, n).unwrap();
        let via_matrix = d.apply(&x);
        let via_stencil = nth_diff(&extend(&x, n), n).unwrap();
        for (a, b) in via_matrix.iter().zip(&via_stencil) {
            assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()));
        }
    }
}

#[test]
fn spectral_bounds_over_the_range() {
    for n in 1..=3 {
        for len in 2..=50 {
            let b = embedding_constants(len, n).unwrap();
            assert!(b.lambda_max <= 4f64.powi(n as i32) + 1e-9, "n={n} N={len}");
            assert!(b.lambda_min > 0.0 && b.lambda_min <= b.lambda_max);
            if n == 1 {
                let exact = 4.0 * (std::f64::consts::PI / (2.0 * (len as f64 + 1.0))).sin().powi(2);
                assert!((b.lambda_min - exact).abs() <= 1e-10, "N={len}: {} vs {exact}", b.lambda_min);
            }
        }
    }
}
