//! Experiment suites: the worked examples, cyclic polytope volumes, voting
//! polytopes and timings on random simplices. Each suite produces one
//! [`Record`] per instance and method and checks known values.

use std::io;
use std::str::FromStr;
use std::time::{Duration, Instant};

use integrale_core::integrate::{Method, Valuation};
use integrale_core::polynomial::{decompose_polynomial, LinearFormSum};
use integrale_core::{BigInt, Rational};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::decimal::to_percent;
use crate::driver::{evaluate, prepare, prepare_integrand, Integrand, Problem, RunError, Settings};
use crate::format::{parse_polytope, PolytopeFile};
use crate::generate::{
    four_candidate_polytope, generate_cyclic_polytope, generate_random_monomial, generate_random_simplex,
    three_candidate_polytope,
};

pub const PENTAGON: &str = "vrep\n5 3\n1 0 0\n1 2 0\n1 0 2\n1 3 1\n1 1 3\n";
pub const TRIANGLE: &str = "vrep\n3 3\n1 1 1\n1 0 1\n1 1 0\n";
pub const UNIT_SQUARE: &str = "4 3\n0 1 0\n0 0 1\n1 -1 0\n1 0 -1\n";

/// Numerator of the integral of `(3x + 5y)^100` over [`PENTAGON`]; the
/// denominator is 1717.
pub const PENTAGON_POWER_100_NUMERATOR: &str = "2272763693868996638935888674032202338331678429593822654741945853115019517044815807828554973991981183769557979672803164125396992";

/// Volumes of the cyclic polytopes, indexed by `[d - 2][k - 1]`.
pub const CYCLIC_VOLUMES: [[u64; 5]; 6] = [
    [1, 4, 10, 20, 35],
    [2, 16, 70, 224, 588],
    [12, 192, 1512, 8064, 33264],
    [288, 9216, 133056, 1216512, 8154432],
    [34560, 2211840, 59304960, 948879360, 10600761600],
    [24883200, 3185049600, 160123392000, 4554620928000, 86502214656000],
];

pub const THREE_CANDIDATE_VOLUME: (&str, &str) = ("71", "414720");
pub const FOUR_CANDIDATE_VOLUME: (&str, &str) = ("2988379676768359", "7552997065814637134660504411827077120000");
pub const FOUR_CANDIDATE_PERCENT: &str = "12.27%";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Examples,
    Cyclic,
    Voting,
    Random,
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "examples" => Ok(Self::Examples),
            "cyclic" => Ok(Self::Cyclic),
            "voting" => Ok(Self::Voting),
            "random" => Ok(Self::Random),
            _ => Err(format!("unknown suite '{s}' (expected examples, cyclic, voting or random)")),
        }
    }
}

pub fn method_name(m: Method) -> &'static str {
    match m {
        Method::Triangulation => "triangulate",
        Method::ConeDecomposition => "cone-decompose",
    }
}

pub fn parse_method(s: &str) -> Option<Method> {
    match s {
        "triangulate" => Some(Method::Triangulation),
        "cone-decompose" => Some(Method::ConeDecomposition),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Record {
    pub id: String,
    pub dim: usize,
    pub degree: u32,
    pub nvertices: usize,
    pub method: Method,
    pub seconds: f64,
    pub result: Rational,
}

/// The random-simplex grid: `instances` simplices with integer coordinates
/// in `[0, bound]` for every pair of dimension and monomial degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomGrid {
    pub dims: Vec<usize>,
    pub degrees: Vec<u32>,
    pub instances: usize,
    pub bound: i64,
}

impl Default for RandomGrid {
    fn default() -> Self {
        Self {
            dims: (2..=10).collect(),
            degrees: vec![1, 2, 5, 10, 20],
            instances: 10,
            bound: 10,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub threads: usize,
    /// Per evaluation; instances that run out are skipped and listed.
    pub timeout: Option<Duration>,
    pub grid: RandomGrid,
    /// Whether the voting suite includes the 24-variable polytope.
    pub four_candidates: bool,
    pub cyclic_methods: Vec<Method>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            threads: 1,
            timeout: None,
            grid: RandomGrid::default(),
            four_candidates: true,
            cyclic_methods: vec![Method::Triangulation],
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub records: Vec<Record>,
    /// Human-readable descriptions of values that differ from the expected
    /// ones.
    pub failures: Vec<String>,
    /// Ids of evaluations that hit the timeout.
    pub skipped: Vec<String>,
}

enum Expect {
    Nothing,
    Exact(Rational),
    Percent(&'static str),
}

struct Case {
    id: String,
    problem: Problem,
    integrand: Option<LinearFormSum>,
    degree: u32,
    methods: Vec<Method>,
    expect: Expect,
}

fn rational(n: &str, d: &str) -> Rational {
    Rational::new(n.parse().expect("numerator"), d.parse().expect("denominator"))
}

fn integer(n: u64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn load(text: &str) -> Problem {
    prepare(parse_polytope(text).expect("built-in polytope parses")).expect("built-in polytope is valid")
}

const BOTH: [Method; 2] = [Method::Triangulation, Method::ConeDecomposition];

fn example_cases() -> Vec<Case> {
    let integrand = |p: &Problem, f: Integrand| Some(prepare_integrand(&f, &p.embedding).expect("built-in integrand"));
    let pentagon = load(PENTAGON);
    let triangle = load(TRIANGLE);
    let square = load(UNIT_SQUARE);
    vec![
        Case {
            id: "pentagon-area".into(),
            integrand: None,
            problem: pentagon.clone(),
            degree: 0,
            methods: BOTH.to_vec(),
            expect: Expect::Exact(integer(6)),
        },
        Case {
            id: "pentagon-power-100".into(),
            integrand: integrand(&pentagon, Integrand::LinearForms("[[1,[100,[3,5]]]]".into())),
            problem: pentagon,
            degree: 100,
            methods: BOTH.to_vec(),
            expect: Expect::Exact(rational(PENTAGON_POWER_100_NUMERATOR, "1717")),
        },
        Case {
            id: "triangle-x-plus-y".into(),
            integrand: integrand(&triangle, Integrand::Monomials("[[1,[1,0]],[1,[0,1]]]".into())),
            problem: triangle,
            degree: 1,
            methods: BOTH.to_vec(),
            expect: Expect::Exact(rational("2", "3")),
        },
        Case {
            id: "square-x".into(),
            integrand: integrand(&square, Integrand::LinearForms("[[1,[1,[1,0]]]]".into())),
            problem: square,
            degree: 1,
            methods: BOTH.to_vec(),
            expect: Expect::Exact(rational("1", "2")),
        },
    ]
}

fn cyclic_cases(methods: &[Method]) -> Vec<Case> {
    let mut cases = Vec::new();
    for d in 2..=7 {
        for k in 1..=5 {
            let v = generate_cyclic_polytope(d, k);
            cases.push(Case {
                id: format!("cyclic-d{d}-k{k}"),
                problem: prepare(PolytopeFile::Vertices(v)).expect("cyclic polytopes are full-dimensional"),
                integrand: None,
                degree: 0,
                methods: methods.to_vec(),
                expect: Expect::Exact(integer(CYCLIC_VOLUMES[d - 2][k - 1])),
            });
        }
    }
    cases
}

fn factorial(n: u64) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

fn evaluate_case(case: &Case, method: Method, config: &SuiteConfig) -> Result<(Rational, f64), RunError> {
    let settings = Settings {
        method,
        valuation: if case.integrand.is_some() {
            Valuation::Integral
        } else {
            Valuation::Volume
        },
        seed: config.seed,
        threads: config.threads,
        timeout: config.timeout,
    };
    let empty = LinearFormSum::new(case.problem.polytope.dim());
    let start = Instant::now();
    let value = evaluate(&case.problem, case.integrand.as_ref().unwrap_or(&empty), &settings)?;
    Ok((value, start.elapsed().as_secs_f64()))
}

fn run_cases(cases: Vec<Case>, config: &SuiteConfig, report: &mut Report) -> Result<(), RunError> {
    for case in cases {
        let mut first: Option<Rational> = None;
        for &method in &case.methods {
            let (result, seconds) = match evaluate_case(&case, method, config) {
                Ok(v) => v,
                Err(RunError::Timeout(_)) => {
                    report.skipped.push(format!("{} ({})", case.id, method_name(method)));
                    continue;
                }
                Err(e) => return Err(e),
            };
            match &case.expect {
                Expect::Exact(want) if *want != result => report.failures.push(format!(
                    "{} ({}): expected {want}, got {result}",
                    case.id,
                    method_name(method)
                )),
                _ => {}
            }
            match &first {
                Some(other) if *other != result => report.failures.push(format!(
                    "{}: methods disagree ({other} vs {result})",
                    case.id
                )),
                None => first = Some(result.clone()),
                _ => {}
            }
            report.records.push(Record {
                id: case.id.clone(),
                dim: case.problem.polytope.dim(),
                degree: case.degree,
                nvertices: case.problem.nvertices(),
                method,
                seconds,
                result,
            });
        }
    }
    Ok(())
}

/// Appends the probability record derived from a volume record: the volume
/// times `rankings! * (dim)!`, where `1 / dim!` is the volume of the simplex
/// of all vote distributions.
fn probability_record(report: &mut Report, volume_id: &str, rankings: u64, expect: Expect) {
    let Some(volume) = report.records.iter().find(|r| r.id == volume_id).cloned() else {
        return;
    };
    let factor = factorial(rankings) * factorial(volume.dim as u64);
    let probability = &volume.result * Rational::from_integer(factor);
    let id = volume_id.replace("volume", "probability");
    match expect {
        Expect::Exact(want) if want != probability => {
            report.failures.push(format!("{id}: expected {want}, got {probability}"))
        }
        Expect::Percent(want) if to_percent(&probability, 2) != want => report.failures.push(format!(
            "{id}: expected {want}, got {probability} = {}",
            to_percent(&probability, 2)
        )),
        _ => {}
    }
    report.records.push(Record {
        id,
        result: probability,
        ..volume
    });
}

fn voting(config: &SuiteConfig, report: &mut Report) -> Result<(), RunError> {
    let (n, d) = THREE_CANDIDATE_VOLUME;
    let mut cases = vec![Case {
        id: "voting3-volume".into(),
        problem: prepare(PolytopeFile::Halfspaces(three_candidate_polytope()))?,
        integrand: None,
        degree: 0,
        methods: BOTH.to_vec(),
        expect: Expect::Exact(rational(n, d)),
    }];
    if config.four_candidates {
        let (n, d) = FOUR_CANDIDATE_VOLUME;
        cases.push(Case {
            id: "voting4-volume".into(),
            problem: prepare(PolytopeFile::Halfspaces(four_candidate_polytope()))?,
            integrand: None,
            degree: 0,
            methods: vec![Method::ConeDecomposition],
            expect: Expect::Exact(rational(n, d)),
        });
    }
    run_cases(cases, config, report)?;
    probability_record(report, "voting3-volume", 3, Expect::Exact(rational("71", "576")));
    if config.four_candidates {
        probability_record(report, "voting4-volume", 4, Expect::Percent(FOUR_CANDIDATE_PERCENT));
    }
    Ok(())
}

/// The random instances in grid order. All randomness comes from one
/// generator seeded with `seed`, so the instances do not depend on how they
/// are evaluated.
fn random_cases(grid: &RandomGrid, seed: u64) -> Vec<Case> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = Vec::new();
    for &d in &grid.dims {
        for &m in &grid.degrees {
            for i in 0..grid.instances {
                let simplex = generate_random_simplex(d, grid.bound, &mut rng);
                let monomial = generate_random_monomial(d, m, &mut rng);
                cases.push(Case {
                    id: format!("random-d{d}-m{m}-{i}"),
                    problem: prepare(PolytopeFile::Vertices(simplex)).expect("random simplices are full-dimensional"),
                    integrand: Some(decompose_polynomial(&monomial)),
                    degree: m,
                    methods: BOTH.to_vec(),
                    expect: Expect::Nothing,
                });
            }
        }
    }
    cases
}

pub fn run_suite(suite: Suite, config: &SuiteConfig) -> Result<Report, RunError> {
    let mut report = Report::default();
    match suite {
        Suite::Examples => run_cases(example_cases(), config, &mut report)?,
        Suite::Cyclic => run_cases(cyclic_cases(&config.cyclic_methods), config, &mut report)?,
        Suite::Voting => voting(config, &mut report)?,
        Suite::Random => run_cases(random_cases(&config.grid, config.seed), config, &mut report)?,
    }
    Ok(report)
}

pub const CSV_HEADER: [&str; 7] = ["id", "dim", "degree", "nvertices", "method", "seconds", "result"];

pub fn write_csv<W: io::Write>(records: &[Record], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record([
            r.id.clone(),
            r.dim.to_string(),
            r.degree.to_string(),
            r.nvertices.to_string(),
            method_name(r.method).to_string(),
            format!("{:.3}", r.seconds),
            r.result.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: io::Read>(input: R) -> Result<Vec<Record>, String> {
    let mut reader = csv::Reader::from_reader(input);
    let header = reader.headers().map_err(|e| e.to_string())?;
    if header.iter().ne(CSV_HEADER) {
        return Err(format!("unexpected header {header:?}"));
    }
    let mut records = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row = row.map_err(|e| e.to_string())?;
        let bad = |what: &str| format!("row {}: bad {what}", i + 1);
        records.push(Record {
            id: row[0].to_string(),
            dim: row[1].parse().map_err(|_| bad("dim"))?,
            degree: row[2].parse().map_err(|_| bad("degree"))?,
            nvertices: row[3].parse().map_err(|_| bad("nvertices"))?,
            method: parse_method(&row[4]).ok_or_else(|| bad("method"))?,
            seconds: row[5].parse().map_err(|_| bad("seconds"))?,
            result: Rational::from_str(&row[6]).map_err(|_| bad("result"))?,
        });
    }
    Ok(records)
}
