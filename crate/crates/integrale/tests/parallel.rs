use integrale::driver::{evaluate, prepare, prepare_integrand, Integrand, Settings};
use integrale::format::parse_polytope;
use integrale_core::integrate::{Method, Valuation};

// hexagon with a rational vertex, so the dilation is exercised too
const HEXAGON: &str = "vrep\n6 3\n1 0 0\n1 2 0\n1 3 1\n1 5/2 3\n1 1 3\n1 -1 1\n";

#[test]
fn result_does_not_depend_on_thread_count() {
    let problem = prepare(parse_polytope(HEXAGON).unwrap()).unwrap();
    let f = prepare_integrand(
        &Integrand::Monomials("[[3,[4,1]],[-2,[0,3]],[1/5,[2,2]],[7,[0,0]]]".into()),
        &problem.embedding,
    )
    .unwrap();
    assert!(f.len() > 8);

    for method in [Method::Triangulation, Method::ConeDecomposition] {
        let run = |threads| {
            let settings = Settings {
                method,
                valuation: Valuation::Integral,
                seed: 11,
                threads,
                timeout: None,
            };
            evaluate(&problem, &f, &settings).unwrap()
        };
        let one = run(1);
        assert_eq!(one, run(2));
        assert_eq!(one, run(4));
    }
}

#[test]
fn methods_agree_on_rational_polytope() {
    let problem = prepare(parse_polytope(HEXAGON).unwrap()).unwrap();
    let f = prepare_integrand(&Integrand::Monomials("[[1,[3,2]],[1,[1,0]]]".into()), &problem.embedding).unwrap();
    let run = |method| {
        evaluate(
            &problem,
            &f,
            &Settings {
                method,
                ..Settings::default()
            },
        )
        .unwrap()
    };
    assert_eq!(run(Method::Triangulation), run(Method::ConeDecomposition));
}
