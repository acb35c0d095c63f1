//! The verification suite behind `gft check`.
//!
//! Checks run in a fixed order and never abort the suite: an error inside a
//! check becomes an ERROR verdict and later checks still run. Checks that
//! range over dimension vectors report the vectors in front of the witness
//! coordinates (e.g. `f,g,x,y`), flattened in index order, so a failure can
//! be re-evaluated from the witness alone.

use std::time::Instant;

use gft_core::exactlin::{int, Mat};
use gft_core::fusion::{validate_fusion, FusionData, FusionError, FusionRing};
use gft_core::outcome::{first_failure, Outcome, Witness};
use gft_core::scheme::{
    check_compact, check_precompact, check_proassociativity, check_valencies, validate,
    ClassMatrix, SchemeError,
};
use gft_core::transform::{
    check_conservative, check_multiplicative, check_round_trip, check_split_mono,
    check_star_antimonoidal, check_star_preserved, check_triangles, check_unit_preserved, convolve,
    dual_comparison, is_regular, khat, mat_compose, reflects_iso, unit_object, wiener_membership,
    DimObject, FusionKernel, Kernel, MatMorphismFamily, MatObject, Membership, MorphismFamily,
    SchemeKernel, TransformError,
};
use gft_core::IntersectionTensor;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::report::CheckReport;
use crate::source::{CorpusEntry, CorpusObject};

pub const DEFAULT_SEED: u64 = 0x5EED_F00D;

pub const SCHEME_CHECKS: [&str; 14] = [
    "validate",
    "intersection-numbers",
    "bose-mesner",
    "proassociativity",
    "precompact",
    "compact",
    "multiplicative",
    "unit-preserved",
    "conservative",
    "adjunction",
    "star-preserved",
    "regularity",
    "wiener",
    "dual-comparison",
];

pub const FUSION_CHECKS: [&str; 14] = [
    "validate",
    "fusion-tensor",
    "proassociativity",
    "precompact",
    "cyclic",
    "braiding",
    "closed",
    "multiplicative",
    "unit-preserved",
    "conservative",
    "adjunction",
    "star-preserved",
    "wiener",
    "dual-comparison",
];

/// Random samples used when an index set is too large to enumerate.
const RANDOM_SAMPLES: usize = 100;
/// Largest per-class enumeration in the regularity check (`3^6`).
const REGULARITY_BUDGET: usize = 729;
/// Cases fed to the heavier morphism-level checks.
const HEAVY_CASES: usize = 12;
/// Families sampled per class once a class is past the budget.
const REGULARITY_SAMPLES: usize = 16;

pub fn is_known_check(name: &str) -> bool {
    SCHEME_CHECKS.contains(&name) || FUSION_CHECKS.contains(&name)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOptions {
    pub only: Option<Vec<String>>,
    pub seed: u64,
    pub timings: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            only: None,
            seed: DEFAULT_SEED,
            timings: false,
        }
    }
}

struct Suite<'a> {
    opts: &'a RunOptions,
    reports: Vec<CheckReport>,
}

impl Suite<'_> {
    fn selected(&self, name: &str) -> bool {
        self.opts
            .only
            .as_ref()
            .is_none_or(|only| only.iter().any(|n| n == name))
    }

    fn run(&mut self, name: &str, check: impl FnOnce(&mut ChaCha8Rng) -> Outcome) {
        if !self.selected(name) {
            return;
        }
        // each check gets its own stream so --only does not shift samples
        let salt = name
            .bytes()
            .fold(0u64, |h, b| h.wrapping_mul(31).wrapping_add(u64::from(b)));
        let mut rng = ChaCha8Rng::seed_from_u64(self.opts.seed ^ salt);
        let start = Instant::now();
        let outcome = check(&mut rng);
        let ms = self
            .opts
            .timings
            .then(|| u64::try_from(start.elapsed().as_millis()).unwrap_or(u64::MAX));
        self.reports
            .push(CheckReport::from_outcome(name, outcome, ms));
    }

    fn error_rest(&mut self, names: &[&str], reason: &str) {
        for name in names {
            self.run(name, |_| Outcome::error(reason));
        }
    }
}

fn lift(result: Result<Outcome, TransformError>) -> Outcome {
    result.unwrap_or_else(|e| Outcome::error(e.to_string()))
}

/// Runs `check` on each case until one does not pass.
fn over_cases<T>(
    cases: &[T],
    mut check: impl FnMut(&T) -> Result<Outcome, TransformError>,
) -> Outcome {
    for case in cases {
        let out = lift(check(case));
        if !out.is_pass() {
            return out;
        }
    }
    Outcome::pass().with_detail(format!("{} cases", cases.len()))
}

/// Every vector with entries in `0..=2` when `len <= 3`, else seeded
/// random vectors with entries in `0..=5`.
pub fn dim_corpus(len: usize, rng: &mut ChaCha8Rng) -> Vec<DimObject> {
    if len <= 3 {
        let total = 3usize.pow(len as u32);
        (0..total)
            .map(|mut code| {
                let dims = (0..len)
                    .map(|_| {
                        let d = code % 3;
                        code /= 3;
                        d
                    })
                    .collect();
                DimObject::new(dims)
            })
            .collect()
    } else {
        (0..RANDOM_SAMPLES)
            .map(|_| random_dims(len, 5, rng))
            .collect()
    }
}

/// All pairs of the exhaustive corpus, or seeded random pairs.
pub fn pair_corpus(len: usize, rng: &mut ChaCha8Rng) -> Vec<(DimObject, DimObject)> {
    if len <= 3 {
        let all = dim_corpus(len, rng);
        all.iter()
            .flat_map(|f| all.iter().map(move |g| (f.clone(), g.clone())))
            .collect()
    } else {
        (0..RANDOM_SAMPLES)
            .map(|_| (random_dims(len, 5, rng), random_dims(len, 5, rng)))
            .collect()
    }
}

fn random_dims(len: usize, max: usize, rng: &mut ChaCha8Rng) -> DimObject {
    DimObject::new((0..len).map(|_| rng.gen_range(0..=max)).collect())
}

/// At most `n` items spread evenly over `items`, always keeping the last.
fn spread<T: Clone>(items: &[T], n: usize) -> Vec<T> {
    if items.len() <= n {
        return items.to_vec();
    }
    (1..=n)
        .map(|i| items[i * items.len() / n - 1].clone())
        .collect()
}

fn flat(objs: &[&DimObject]) -> Vec<usize> {
    objs.iter().flat_map(|o| o.dims().iter().copied()).collect()
}

pub fn scheme_error_outcome(cm: &ClassMatrix, err: &SchemeError) -> Outcome {
    let w = match *err {
        SchemeError::DiagonalSplit { x, y, cx, cy } => Witness::new("x,y", vec![x, y], cx, cy),
        SchemeError::DiagonalImpure { x, y } => Witness::new(
            "x,y",
            vec![x, y],
            format!("class{}", cm.class_of(x, y)),
            "off-diagonal-class",
        ),
        SchemeError::NotTransposeClosed {
            x,
            y,
            other,
            expected,
            ..
        } => Witness::new("y,x", vec![y, x], other, expected),
        SchemeError::IllDefined {
            s,
            t,
            r,
            x,
            y,
            count,
            count0,
            ..
        } => Witness::new("s,t,r,x,y", vec![s, t, r, x, y], count, count0),
        _ => return Outcome::error(err.to_string()),
    };
    Outcome::fail(w).with_detail(err.to_string())
}

pub fn fusion_error_outcome(err: &FusionError) -> Outcome {
    let w = match err {
        FusionError::LeftUnit { y, z, value } => {
            Witness::new("y,z", vec![*y, *z], value, u8::from(y == z))
        }
        FusionError::RightUnit { x, z, value } => {
            Witness::new("x,z", vec![*x, *z], value, u8::from(x == z))
        }
        FusionError::DualNotInvolutive { object } => {
            Witness::new("x", vec![*object], "x**", *object)
        }
        _ => return Outcome::error(err.to_string()),
    };
    Outcome::fail(w).with_detail(err.to_string())
}

pub fn run_checks(entry: &CorpusEntry, opts: &RunOptions) -> Vec<CheckReport> {
    let mut suite = Suite {
        opts,
        reports: Vec::new(),
    };
    match &entry.object {
        CorpusObject::Scheme {
            matrix,
            tensor,
            kernel_bumps,
        } => scheme_suite(&mut suite, matrix, tensor.as_ref(), kernel_bumps),
        CorpusObject::Fusion(data) => fusion_suite(&mut suite, data),
    }
    suite.reports
}

fn scheme_suite(
    suite: &mut Suite<'_>,
    matrix: &ClassMatrix,
    replacement: Option<&IntersectionTensor>,
    kernel_bumps: &[(usize, usize, usize)],
) {
    let scheme = match validate(matrix) {
        Ok(s) => {
            let detail = format!("{} points, {} classes", s.points(), s.classes());
            suite.run("validate", |_| Outcome::pass().with_detail(detail));
            s
        }
        Err(e) => {
            suite.run("validate", |_| scheme_error_outcome(matrix, &e));
            suite.error_rest(&SCHEME_CHECKS[1..], "scheme did not validate");
            return;
        }
    };
    let computed = match scheme.intersection_numbers() {
        Ok(t) => t,
        Err(e) => {
            suite.error_rest(&SCHEME_CHECKS[1..], &e.to_string());
            return;
        }
    };
    let tensor = replacement.cloned().unwrap_or_else(|| computed.clone());
    if tensor.size() != scheme.classes() {
        suite.error_rest(
            &SCHEME_CHECKS[1..],
            "tensor size does not match class count",
        );
        return;
    }
    let inv = scheme.involution();

    suite.run("intersection-numbers", |_| {
        let m = scheme.classes();
        let counted = first_failure(
            (0..m).flat_map(|s| (0..m).flat_map(move |t| (0..m).map(move |r| (s, t, r)))),
            |(s, t, r)| {
                let (l, c) = (tensor.get(s, t, r), computed.get(s, t, r));
                (l != c).then(|| Witness::new("s,t,r", vec![s, t, r], l, c))
            },
        );
        counted
            .and(check_valencies(&scheme, &tensor))
            .and(Outcome::pass().with_detail(format!("{m} classes")))
    });
    suite.run("bose-mesner", |_| {
        scheme
            .bose_mesner_closure(&tensor)
            .unwrap_or_else(|e| Outcome::error(e.to_string()))
    });
    suite.run("proassociativity", |_| check_proassociativity(&tensor));
    suite.run("precompact", |_| check_precompact(&tensor, inv));
    suite.run("compact", |_| check_compact(&tensor, inv));

    let mut kernel = SchemeKernel::with_tensor(&scheme, tensor.clone());
    for &(s, x, y) in kernel_bumps {
        kernel.bump_weight(s, x, y);
    }
    kernel_suite(
        suite,
        &kernel,
        Some(&|rng: &mut ChaCha8Rng| regularity(&kernel, matrix, rng)),
    );
}

fn fusion_suite(suite: &mut Suite<'_>, data: &FusionData) {
    let ring = match validate_fusion(data.clone()) {
        Ok(r) => {
            let detail = format!("{} objects", r.len());
            suite.run("validate", |_| Outcome::pass().with_detail(detail));
            r
        }
        Err(e) => {
            suite.run("validate", |_| fusion_error_outcome(&e));
            let structural = matches!(
                e,
                FusionError::Empty | FusionError::Size { .. } | FusionError::UnitRange { .. }
            );
            if structural {
                suite.error_rest(&FUSION_CHECKS[1..], "fusion data is malformed");
                return;
            }
            FusionRing::assume_valid(data.clone())
        }
    };

    suite.run("fusion-tensor", |_| {
        ring.check_unit_laws()
            .and(ring.check_matrix_associativity())
    });
    suite.run("proassociativity", |_| ring.check_proassociativity());
    suite.run("precompact", |_| ring.check_precompact());
    suite.run("cyclic", |_| ring.check_cyclic());
    suite.run("braiding", |_| ring.check_braiding());
    suite.run("closed", |_| {
        let frobenius = ring.check_frobenius();
        match ring.is_closed() {
            Some(hom) => frobenius
                .and(ring.check_hom_involution(&hom))
                .and(Outcome::pass().with_detail("closed: single-object hom-map [y,z]")),
            None => frobenius.and(
                Outcome::pass().with_detail("not closed: [y,z] = z ⊗ y* is not a single object"),
            ),
        }
    });

    match FusionKernel::new(&ring) {
        Ok(kernel) => kernel_suite(suite, &kernel, None),
        Err(e) => suite.error_rest(&FUSION_CHECKS[7..], &e.to_string()),
    }
}

type RegularityCheck<'a> = &'a dyn Fn(&mut ChaCha8Rng) -> Outcome;

fn kernel_suite<K: Kernel>(suite: &mut Suite<'_>, k: &K, regularity: Option<RegularityCheck<'_>>) {
    let len = k.source_len();
    let side = k.grid_side();

    suite.run("multiplicative", |rng| {
        let pairs = pair_corpus(len, rng);
        over_cases(&pairs, |(f, g)| {
            Ok(check_multiplicative(k, f, g)?.in_case("f,g", &flat(&[f, g])))
        })
    });

    suite.run("unit-preserved", |rng| {
        let unit = unit_object(k);
        let corpus = dim_corpus(len, rng);
        lift(check_unit_preserved(k)).and(over_cases(&corpus, |f| {
            let lhs = khat(k, &convolve(k.tensor(), &unit, f)?)?;
            let rhs = khat(k, f)?;
            Ok(first_failure(0..k.cells(), |c| {
                (lhs.at(c) != rhs.at(c))
                    .then(|| Witness::new("x,y", vec![c / side, c % side], lhs.at(c), rhs.at(c)))
            })
            .in_case("f", f.dims()))
        }))
    });

    suite.run("conservative", |rng| {
        let morphisms: Vec<MorphismFamily> =
            (0..RANDOM_SAMPLES).map(|_| random_endo(len, rng)).collect();
        check_conservative(k).and(over_cases(&morphisms, |alpha| {
            Ok(reflects_iso(k, alpha)?.in_case("f", alpha.source().dims()))
        }))
    });

    suite.run("adjunction", |rng| {
        let corpus = spread(&dim_corpus(len, rng), HEAVY_CASES);
        let cases: Vec<(DimObject, MatObject)> = corpus
            .into_iter()
            .map(|f| {
                let big = (0..side * side).map(|_| rng.gen_range(0..=1)).collect();
                (f, MatObject::new(side, big).expect("square"))
            })
            .collect();
        over_cases(&cases, |(f, big)| {
            let tri = check_triangles(k, f, big)?.in_case("f,F", &[f.dims(), big.dims()].concat());
            let split = check_split_mono(k, f)?.in_case("f", f.dims());
            let round = check_round_trip(k, f)?.in_case("f", f.dims());
            Ok(tri.and(split).and(round))
        })
    });

    suite.run("star-preserved", |rng| {
        let corpus = dim_corpus(len, rng);
        let pairs = spread(&pair_corpus(len, rng), 4 * HEAVY_CASES);
        let objects = over_cases(&corpus, |f| {
            Ok(check_star_preserved(k, f)?.in_case("f", f.dims()))
        });
        if !objects.is_pass() {
            return objects;
        }
        over_cases(&pairs, |(f, g)| {
            Ok(check_star_antimonoidal(k, f, g)?.in_case("f,g", &flat(&[f, g])))
        })
    });

    if let Some(check) = regularity {
        suite.run("regularity", check);
    }

    suite.run("wiener", |rng| {
        let corpus = dim_corpus(len, rng);
        let pairs = spread(&pair_corpus(len, rng), 4 * HEAVY_CASES);
        let singles = over_cases(&corpus, |f| {
            Ok(match wiener_membership(k, &khat(k, f)?)? {
                Membership::Member(sols) if sols.contains(f) => Outcome::pass(),
                Membership::Member(sols) => {
                    Outcome::fail(Witness::new("f", f.dims().to_vec(), &sols[0], f))
                }
                Membership::NotMember(w) => Outcome::fail(w).in_case("f", f.dims()),
            })
        });
        let products = over_cases(&pairs, |(f, g)| {
            let composite = mat_compose(k.compose_order(), &khat(k, f)?, &khat(k, g)?)?;
            let product = convolve(k.tensor(), f, g)?;
            Ok(match wiener_membership(k, &composite)? {
                Membership::Member(sols) if sols.contains(&product) => Outcome::pass(),
                Membership::Member(sols) => {
                    Outcome::fail(Witness::new("f,g", flat(&[f, g]), &sols[0], &product))
                }
                Membership::NotMember(w) => Outcome::fail(w).in_case("f,g", &flat(&[f, g])),
            })
        });
        singles.and(products).and(lift(rejection_probe(k)))
    });

    suite.run("dual-comparison", |rng| {
        let pairs = spread(&pair_corpus(len, rng), 4 * HEAVY_CASES);
        over_cases(&pairs, |(f, g)| {
            Ok(dual_comparison(k, f, g)?
                .outcome()
                .in_case("f,g", &flat(&[f, g])))
        })
    });
}

/// Perturbs one cell of `K̂(1,...,1)` and expects a rejection. Kernels
/// where every cell of the image is forced (no index with two cells of
/// support) have nothing to probe.
fn rejection_probe<K: Kernel>(k: &K) -> Result<Outcome, TransformError> {
    let ones = DimObject::new(vec![1; k.source_len()]);
    let mut target = khat(k, &ones)?;
    let Some(cell) = (0..k.source_len()).find_map(|a| {
        let support: Vec<usize> = (0..k.cells()).filter(|&c| k.weight(a, c) > 0).collect();
        (support.len() > 1 && k.compose_order() == gft_core::transform::ComposeOrder::Relational)
            .then(|| support[1])
    }) else {
        return Ok(Outcome::pass());
    };
    let side = k.grid_side();
    target.set(cell / side, cell % side, target.at(cell) + 1);
    Ok(match wiener_membership(k, &target)? {
        Membership::NotMember(_) => Outcome::pass(),
        Membership::Member(sols) => Outcome::fail(Witness::new(
            "x,y",
            vec![cell / side, cell % side],
            format!("member{}", sols[0]),
            "not-member",
        )),
    })
}

/// Random endomorphism of a random object, entries in `-1..=1`.
fn random_endo(len: usize, rng: &mut ChaCha8Rng) -> MorphismFamily {
    let f = random_dims(len, 2, rng);
    let mats = f
        .dims()
        .iter()
        .map(|&d| {
            let mut m = Mat::zeros(d, d);
            for i in 0..d {
                for j in 0..d {
                    m.set(i, j, int(rng.gen_range(-1..=1)));
                }
            }
            m
        })
        .collect();
    MorphismFamily::new(f.clone(), f, mats).expect("square components")
}

/// `is_regular(α) ⇔ α constant on every class of the scheme` for scalar
/// families on `K̂(1,...,1)`. The equation at a cell only involves `α` on
/// the kernel support through that cell, so each class is enumerated (or
/// sampled, past the budget) with every other cell held at 1. Classes are
/// read from the class matrix, not from the kernel, so a kernel that is
/// not the partition of the scheme shows up as a discrepancy.
fn regularity(k: &SchemeKernel, matrix: &ClassMatrix, rng: &mut ChaCha8Rng) -> Outcome {
    let m = k.source_len();
    let side = k.grid_side();
    let class_cells = |s: usize| -> Vec<usize> {
        (0..side * side)
            .filter(|&c| matrix.class_of(c / side, c % side) == s)
            .collect()
    };
    let ones = DimObject::new(vec![1; m]);
    let obj = match khat(k, &ones) {
        Ok(o) => o,
        Err(e) => return Outcome::error(e.to_string()),
    };
    let mut families = 0usize;
    for s in 0..m {
        let cells = class_cells(s);
        let exhaustive = 3usize
            .checked_pow(cells.len() as u32)
            .filter(|&n| n <= REGULARITY_BUDGET);
        let assignments: Vec<Vec<usize>> = match exhaustive {
            Some(total) => (0..total)
                .map(|mut code| {
                    (0..cells.len())
                        .map(|_| {
                            let v = code % 3;
                            code /= 3;
                            v
                        })
                        .collect()
                })
                .collect(),
            None => (0..REGULARITY_SAMPLES)
                .map(|i| {
                    if i % 2 == 0 {
                        vec![rng.gen_range(0..=2); cells.len()]
                    } else {
                        (0..cells.len()).map(|_| rng.gen_range(0..=2)).collect()
                    }
                })
                .collect(),
        };
        for values in assignments {
            let mut scalars = vec![1usize; side * side];
            for (&c, &v) in cells.iter().zip(&values) {
                scalars[c] = v;
            }
            let mats = (0..side * side)
                .map(|c| Mat::identity(obj.at(c)).scale(&int(scalars[c] as i64)))
                .collect();
            let alpha = match MatMorphismFamily::new(obj.clone(), obj.clone(), mats) {
                Ok(a) => a,
                Err(e) => return Outcome::error(e.to_string()),
            };
            families += 1;
            let regular = match is_regular(k, &ones, &ones, &alpha) {
                Ok(o) => o,
                Err(e) => return Outcome::error(e.to_string()),
            };
            // compared on scalars: a mutated kernel can give cells of one
            // class different block sizes
            let constant = (0..m).all(|t| {
                let cs = class_cells(t);
                cs.iter().all(|&c| scalars[c] == scalars[cs[0]])
            });
            if !regular.is_pass() && constant {
                return regular.in_case("alpha", &scalars);
            }
            if regular.is_pass() && !constant {
                let (c1, c2) = (0..m)
                    .flat_map(|t| {
                        let cs = class_cells(t);
                        let first = cs[0];
                        cs.into_iter().map(move |c| (first, c))
                    })
                    .find(|&(a, b)| scalars[a] != scalars[b])
                    .expect("inconstant family has two differing cells in a class");
                return Outcome::fail(Witness::new(
                    "alpha,x,y,x',y'",
                    [
                        scalars.clone(),
                        vec![c1 / side, c1 % side, c2 / side, c2 % side],
                    ]
                    .concat(),
                    scalars[c1],
                    scalars[c2],
                ))
                .with_detail("regular but not class-constant");
            }
        }
    }
    Outcome::pass().with_detail(format!("{families} families"))
}
