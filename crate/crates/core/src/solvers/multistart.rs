use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{assemble, local_descent, Sense, SolutionSet, SolverConfig, SolverError};
use crate::energy::ProblemSpec;
use crate::sequence_space::InteriorVector;

/// Seeded uniform draws in `[−R, R]^N`, then θ, then `±(R/2) e_i`.
pub fn start_points(len: usize, cfg: &SolverConfig) -> Vec<InteriorVector> {
    let r = cfg.box_radius;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out: Vec<InteriorVector> = (0..cfg.starts)
        .map(|_| InteriorVector::new((0..len).map(|_| rng.random_range(-r..=r)).collect()).expect("finite draws"))
        .collect();
    out.push(InteriorVector::zeros(len).expect("N >= 2"));
    for i in 0..len {
        for sign in [1.0, -1.0] {
            let mut v = vec![0.0; len];
            v[i] = sign * 0.5 * r;
            out.push(InteriorVector::new(v).expect("finite"));
        }
    }
    out
}

/// Runs [`local_descent`] from every start point in parallel. Results are
/// gathered in start order before deduplication, so the output does not
/// depend on scheduling. Failed starts are listed in `diagnostics`.
pub fn multistart(prob: &ProblemSpec, sense: Sense, cfg: &SolverConfig) -> Result<SolutionSet, SolverError> {
    cfg.validate()?;
    let starts = start_points(prob.interior_len(), cfg);
    let results: Vec<_> = starts.par_iter().map(|x0| local_descent(prob, x0, sense, cfg)).collect();
    let mut points = Vec::new();
    let mut diagnostics = Vec::new();
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(p) => points.push(p),
            Err(e) => diagnostics.push(format!("{} start {i}: {e}", sense.name())),
        }
    }
    Ok(assemble(prob, cfg, points, diagnostics))
}

#[cfg(test)]
mod tests {
    use super::super::{Kind, Origin};
    use super::*;
    use crate::expr::Nonlinearity;

    fn unit(f: &str) -> ProblemSpec {
        ProblemSpec::new(1, 2, vec![1.0; 3], Nonlinearity::parse(f).unwrap(), None).unwrap()
    }

    #[test]
    fn start_layout() {
        let cfg = SolverConfig { starts: 5, box_radius: 2.0, ..Default::default() };
        let s = start_points(3, &cfg);
        assert_eq!(s.len(), 5 + 1 + 6);
        assert!(s[..5].iter().all(|v| v.max_abs() <= 2.0));
        assert!(s[5].is_zero());
        assert_eq!(s[6].as_slice(), &[1.0, 0.0, 0.0]);
        assert_eq!(s[7].as_slice(), &[-1.0, 0.0, 0.0]);
        assert_eq!(start_points(3, &cfg), s);
    }

    #[test]
    fn worked_instance_has_five_points() {
        let cfg = SolverConfig { box_radius: 3.0, ..Default::default() };
        let cubic = unit("x^3");
        let mut all = multistart(&cubic, Sense::Minimize, &cfg).unwrap().points;
        all.extend(multistart(&cubic, Sense::Maximize, &cfg).unwrap().points);
        let set = assemble(&cubic, &cfg, all, Vec::new());
        let js: Vec<f64> = set.points.iter().map(|p| p.J).collect();
        assert_eq!(js.len(), 5, "{:?}", set.points);
        for (j, want) in js.iter().zip([0.0, 0.5, 0.5, 4.5, 4.5]) {
            assert!((j - want).abs() < 1e-8, "{js:?}");
        }
        let kinds: Vec<Kind> = set.points.iter().map(|p| p.kind).collect();
        assert_eq!(kinds, [Kind::Minimum, Kind::Degenerate, Kind::Degenerate, Kind::Maximum, Kind::Maximum]);
    }

    #[test]
    fn coercive_and_linear_instances_have_only_origin() {
        let cfg = SolverConfig { box_radius: 3.0, starts: 50, ..Default::default() };
        for f in ["-x^3", "0"] {
            let set = multistart(&unit(f), Sense::Minimize, &cfg).unwrap();
            assert_eq!(set.points.len(), 1, "{f}");
            assert!(set.points[0].x.max_abs() < 1e-8);
            assert_eq!(set.points[0].origin, Origin::Descent);
        }
    }

    #[test]
    fn failures_become_diagnostics() {
        let cfg = SolverConfig { box_radius: 3.0, starts: 20, ..Default::default() };
        let set = multistart(&unit("-x^3"), Sense::Maximize, &cfg).unwrap();
        // only the start at θ stays put
        assert_eq!(set.points.len(), 1);
        assert_eq!(set.diagnostics.len(), 20 + 4);
    }

    #[test]
    fn runs_are_deterministic() {
        let cfg = SolverConfig { box_radius: 3.0, starts: 40, ..Default::default() };
        let a = multistart(&unit("x^3 - k*x"), Sense::Maximize, &cfg).unwrap();
        let b = multistart(&unit("x^3 - k*x"), Sense::Maximize, &cfg).unwrap();
        assert_eq!(a, b);
    }
}
