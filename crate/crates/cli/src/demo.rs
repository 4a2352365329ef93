//! Small single-objective demo problems for the `saea-single` subcommand.

/// A 1-D minimization problem on a closed interval.
#[derive(Clone, Copy)]
pub struct DemoProblem {
    pub name: &'static str,
    pub lower: f64,
    pub upper: f64,
    pub objective: fn(f64) -> f64,
}

pub const DEMO_PROBLEMS: [DemoProblem; 2] = [
    DemoProblem {
        name: "quadratic",
        lower: 0.0,
        upper: 1.0,
        objective: |x| (x - 0.3) * (x - 0.3),
    },
    DemoProblem {
        name: "xsinx",
        lower: 0.0,
        upper: 25.0,
        objective: |x| x * x.sin(),
    },
];

pub fn demo_problem(name: &str) -> Option<DemoProblem> {
    DEMO_PROBLEMS.iter().copied().find(|p| p.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn demo_problems_evaluate_at_known_points() {
        let quadratic = demo_problem("quadratic").unwrap();
        assert_eq!((quadratic.objective)(0.3), 0.0);
        assert!(((quadratic.objective)(1.0) - 0.49).abs() < 1e-12);

        let xsinx = demo_problem("xsinx").unwrap();
        assert_eq!((xsinx.objective)(0.0), 0.0);
        assert!((xsinx.objective)(23.5) < -23.0);

        assert!(demo_problem("unknown").is_none());
    }
}
