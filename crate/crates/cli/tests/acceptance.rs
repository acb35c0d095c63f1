//! Acceptance criteria, one line each. Runs without the libtest harness so
//! that every line is printed; the process fails if any criterion fails.
//!
//! Expected values come from brute-force oracles written here against the
//! raw class matrices and tensors, not from the library's own checks.

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::Instant;

use gft_cli::checks::{
    dim_corpus, pair_corpus, run_checks, RunOptions, FUSION_CHECKS, SCHEME_CHECKS,
};
use gft_cli::commands::check as check_command;
use gft_cli::report::Format;
use gft_cli::source::{CorpusEntry, CorpusObject};
use gft_core::exactlin::{int, Mat};
use gft_core::fusion::{gen_fibonacci, gen_group_fusion, gen_ising, FusionData, FusionRing};
use gft_core::outcome::{Verdict, Witness};
use gft_core::scheme::{
    check_compact, check_precompact, check_proassociativity, gen_cyclic, gen_group, gen_hamming,
    gen_johnson, validate, ClassMatrix, GroupTable,
};
use gft_core::transform::{
    check_multiplicative, check_split_mono, check_star_preserved, check_triangles,
    check_unit_preserved, dual_comparison, is_regular, kcheck, khat, mat_compose, star_source,
    star_target, wiener_membership, ComposeOrder, DimObject, FusionKernel, Kernel,
    MatMorphismFamily, MatObject, Membership, SchemeKernel,
};
use gft_core::IntersectionTensor;
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Criterion = fn() -> Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---------------------------------------------------------------- corpus

fn s3() -> ClassMatrix {
    gen_group(&GroupTable::symmetric(3)).unwrap()
}

fn schemes() -> Vec<(String, ClassMatrix, bool)> {
    // (name, class matrix, is a group scheme)
    let mut v: Vec<(String, ClassMatrix, bool)> = (1..=8)
        .map(|n| (format!("C{n}"), gen_cyclic(n).unwrap(), true))
        .collect();
    for (n, q) in [(2, 2), (3, 2), (2, 3)] {
        v.push((format!("H({n},{q})"), gen_hamming(n, q).unwrap(), false));
    }
    v.push(("J(5,2)".into(), gen_johnson(5, 2).unwrap(), false));
    v.push(("S3".into(), s3(), true));
    v
}

fn rings() -> Vec<(String, FusionRing)> {
    let mut v = vec![
        ("Fibonacci".to_string(), gen_fibonacci()),
        ("Ising".to_string(), gen_ising()),
    ];
    for n in 1..=6 {
        v.push((format!("Z{n}"), gen_group_fusion(n).unwrap()));
    }
    v
}

fn kernels() -> Vec<(String, Box<dyn Kernel>)> {
    let mut v: Vec<(String, Box<dyn Kernel>)> = schemes()
        .into_iter()
        .map(|(name, cm, _)| {
            let k: Box<dyn Kernel> = Box::new(SchemeKernel::new(&validate(&cm).unwrap()).unwrap());
            (name, k)
        })
        .collect();
    for (name, ring) in rings() {
        v.push((name, Box::new(FusionKernel::new(&ring).unwrap())));
    }
    v
}

// ---------------------------------------------------------------- oracles

/// Brute-force data of a class matrix: transposes, sizes and intersection
/// numbers counted over every pair.
struct SchemeOracle {
    n: usize,
    m: usize,
    class: Vec<usize>,
    star: Vec<usize>,
    size: Vec<usize>,
    numbers: Vec<u64>,
}

impl SchemeOracle {
    fn new(cm: &ClassMatrix) -> Self {
        let n = cm.points();
        let m = cm.classes();
        let class: Vec<usize> = (0..n * n).map(|c| cm.class_of(c / n, c % n)).collect();
        let mut star = vec![usize::MAX; m];
        let mut size = vec![0; m];
        let mut numbers = vec![u64::MAX; m * m * m];
        for x in 0..n {
            for y in 0..n {
                let r = class[x * n + y];
                size[r] += 1;
                let st = class[y * n + x];
                assert!(
                    star[r] == usize::MAX || star[r] == st,
                    "class {r} not transpose closed"
                );
                star[r] = st;
                let mut counts = vec![0u64; m * m];
                for z in 0..n {
                    counts[class[x * n + z] * m + class[z * n + y]] += 1;
                }
                for (i, &c) in counts.iter().enumerate() {
                    let slot = &mut numbers[i * m + r];
                    assert!(
                        *slot == u64::MAX || *slot == c,
                        "N ill-defined at ({x},{y})"
                    );
                    *slot = c;
                }
            }
        }
        SchemeOracle {
            n,
            m,
            class,
            star,
            size,
            numbers,
        }
    }

    fn num(&self, s: usize, t: usize, r: usize) -> u64 {
        self.numbers[(s * self.m + t) * self.m + r]
    }

    fn khat(&self, f: &[usize]) -> Vec<usize> {
        self.class.iter().map(|&s| f[s]).collect()
    }

    fn adj(&self, s: usize, x: usize, y: usize) -> u64 {
        u64::from(self.class[x * self.n + y] == s)
    }
}

fn big(v: &BigUint) -> u64 {
    v.to_u64().expect("small multiplicity")
}

fn tget(t: &IntersectionTensor, a: usize, b: usize, c: usize) -> u64 {
    big(t.get(a, b, c))
}

/// `(f ⊗ g)(r) = sum_{s,t} N(s,t,r) f(s) g(t)`.
fn oconv(t: &IntersectionTensor, f: &[usize], g: &[usize]) -> Vec<usize> {
    let m = t.size();
    (0..m)
        .map(|r| {
            let mut acc = 0u64;
            for s in 0..m {
                for u in 0..m {
                    acc += tget(t, s, u, r) * f[s] as u64 * g[u] as u64;
                }
            }
            acc as usize
        })
        .collect()
}

/// `K̂(f)(cell) = sum_a K(a, cell) f(a)` from raw weights.
fn ohat(k: &dyn Kernel, f: &[usize]) -> Vec<usize> {
    (0..k.cells())
        .map(|c| (0..k.source_len()).map(|a| k.weight(a, c) * f[a]).sum())
        .collect()
}

/// Relational: `(A∘B)(x,y) = sum_z A(x,z) B(z,y)`. Profunctor:
/// `(A∘B)(y,z) = sum_u B(y,u) A(u,z)`.
fn ocompose(order: ComposeOrder, side: usize, a: &[usize], b: &[usize]) -> Vec<usize> {
    let (p, q) = match order {
        ComposeOrder::Relational => (a, b),
        ComposeOrder::Profunctor => (b, a),
    };
    (0..side * side)
        .map(|c| {
            let (x, y) = (c / side, c % side);
            (0..side).map(|z| p[x * side + z] * q[z * side + y]).sum()
        })
        .collect()
}

fn otranspose(side: usize, a: &[usize]) -> Vec<usize> {
    (0..side * side)
        .map(|c| a[(c % side) * side + c / side])
        .collect()
}

fn involution_of(k: &dyn Kernel) -> Vec<usize> {
    (0..k.source_len())
        .map(|a| k.involution().apply(a))
        .collect()
}

// ---------------------------------------------------------------- 1

fn criterion_1() -> Result<String, String> {
    let start = Instant::now();
    let mut compact_failures = Vec::new();
    for (name, cm, group) in schemes() {
        let scheme = validate(&cm).map_err(|e| format!("{name}: validate: {e}"))?;
        let o = SchemeOracle::new(&cm);
        let t = scheme.intersection_numbers().map_err(|e| e.to_string())?;
        let m = o.m;
        for (s, u, r) in triples(m) {
            ensure(tget(&t, s, u, r) == o.num(s, u, r), || {
                format!("{name}: N({s},{u},{r}) differs from path count")
            })?;
        }
        let inv = scheme.involution();
        ensure(check_proassociativity(&t).is_pass(), || {
            format!("{name}: proassociativity")
        })?;
        ensure(check_precompact(&t, inv).is_pass(), || {
            format!("{name}: precompact")
        })?;
        // brute-force versions of the same three identities
        for (s, u, r) in triples(m) {
            for w in 0..m {
                let l: u64 = (0..m).map(|x| o.num(s, u, x) * o.num(x, r, w)).sum();
                let rr: u64 = (0..m).map(|x| o.num(s, x, w) * o.num(u, r, x)).sum();
                ensure(l == rr, || {
                    format!("{name}: oracle associativity at {s},{u},{r},{w}")
                })?;
            }
            ensure(
                o.num(s, u, r) == o.num(o.star[u], o.star[s], o.star[r]),
                || format!("{name}: oracle precompact"),
            )?;
        }
        let symmetric = (0..m).all(|s| o.star[s] == s);
        if symmetric || group {
            let oracle_compact =
                triples(m).all(|(s, u, r)| o.num(s, u, o.star[r]) == o.num(u, r, o.star[s]));
            let lib_compact = check_compact(&t, inv);
            ensure(lib_compact.is_pass() == oracle_compact, || {
                format!("{name}: compact verdict disagrees with oracle")
            })?;
            if !oracle_compact {
                let w = lib_compact.witness().unwrap();
                compact_failures.push(format!("{name} at {w}"));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 5.0, || format!("suite took {secs:.2}s"))?;
    ensure(compact_failures.is_empty(), || {
        format!(
            "compact fails on symmetric schemes: {} (|r|·N(s,t,r*) = |s|·N(t,r,s*) makes the cyclic equality false when valencies differ)",
            compact_failures.join("; ")
        )
    })?;
    Ok(format!("15 schemes, oracle-checked, {secs:.2}s"))
}

fn triples(m: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (0..m).flat_map(move |s| (0..m).flat_map(move |t| (0..m).map(move |r| (s, t, r))))
}

// ---------------------------------------------------------------- 2

fn criterion_2() -> Result<String, String> {
    let mut pairs = 0;
    for (name, cm, _) in schemes() {
        let scheme = validate(&cm).unwrap();
        let t = scheme.intersection_numbers().unwrap();
        ensure(scheme.bose_mesner_closure(&t).unwrap().is_pass(), || {
            format!("{name}: library closure")
        })?;
        let o = SchemeOracle::new(&cm);
        for s in 0..o.m {
            for u in 0..o.m {
                pairs += 1;
                for x in 0..o.n {
                    for y in 0..o.n {
                        let prod: u64 = (0..o.n).map(|z| o.adj(s, x, z) * o.adj(u, z, y)).sum();
                        let combo: u64 = (0..o.m).map(|r| tget(&t, s, u, r) * o.adj(r, x, y)).sum();
                        ensure(prod == combo, || format!("{name}: M_{s}M_{u} at ({x},{y})"))?;
                    }
                }
            }
        }
    }
    Ok(format!("{pairs} class pairs over 15 schemes"))
}

// ---------------------------------------------------------------- 3

fn criterion_3() -> Result<String, String> {
    let mut cases = 0;
    for (name, k) in kernels() {
        let k = k.as_ref();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let side = k.grid_side();
        for (f, g) in pair_corpus(k.source_len(), &mut rng) {
            cases += 1;
            ensure(check_multiplicative(k, &f, &g).unwrap().is_pass(), || {
                format!("{name}: {f} {g}")
            })?;
            let lhs = ohat(k, &oconv(k.tensor(), f.dims(), g.dims()));
            let rhs = ocompose(
                k.compose_order(),
                side,
                &ohat(k, f.dims()),
                &ohat(k, g.dims()),
            );
            ensure(lhs == rhs, || {
                format!("{name}: oracle product differs at {f} {g}")
            })?;
            let lib = mat_compose(
                k.compose_order(),
                &khat(k, &f).unwrap(),
                &khat(k, &g).unwrap(),
            )
            .unwrap();
            ensure(lib.dims() == rhs.as_slice(), || {
                format!("{name}: library composite differs from oracle")
            })?;
        }
        ensure(check_unit_preserved(k).unwrap().is_pass(), || {
            format!("{name}: K̂(J)")
        })?;
        let mut unit = vec![0; k.source_len()];
        unit[k.unit()] = 1;
        let id: Vec<usize> = (0..side * side)
            .map(|c| usize::from(c / side == c % side))
            .collect();
        ensure(ohat(k, &unit) == id, || {
            format!("{name}: oracle K̂(J) is not the identity pattern")
        })?;
    }
    Ok(format!("{cases} pairs over 23 kernels"))
}

// ---------------------------------------------------------------- 4

fn criterion_4() -> Result<String, String> {
    let mut cases = 0;
    for (name, k) in kernels() {
        let k = k.as_ref();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let side = k.grid_side();
        let oracle = (name.starts_with('C')
            || name.starts_with('H')
            || name.starts_with('J')
            || name == "S3")
            .then(|| SchemeOracle::new(&class_matrix(&name)));
        for f in dim_corpus(k.source_len(), &mut rng) {
            cases += 1;
            let big = MatObject::new(
                side,
                (0..side * side).map(|_| rng.gen_range(0..=1)).collect(),
            )
            .unwrap();
            let tri = check_triangles(k, &f, &big).unwrap();
            ensure(tri.is_pass(), || {
                format!("{name}: triangles at {f}: {:?}", tri.witness())
            })?;
            ensure(check_split_mono(k, &f).unwrap().is_pass(), || {
                format!("{name}: split mono at {f}")
            })?;
            if let Some(o) = &oracle {
                let back = kcheck(k, &khat(k, &f).unwrap()).unwrap();
                for s in 0..o.m {
                    ensure(back.get(s) == o.size[s] * f.get(s), || {
                        format!("{name}: ǨK̂({f})({s})")
                    })?;
                }
            }
        }
    }
    Ok(format!("{cases} objects over 23 kernels"))
}

fn class_matrix(name: &str) -> ClassMatrix {
    schemes().into_iter().find(|(n, _, _)| n == name).unwrap().1
}

// ---------------------------------------------------------------- 5

/// Scalar family on `K̂(1,...,1)`: `scalars[c] · I`.
fn scalar_family(k: &dyn Kernel, scalars: &[usize]) -> MatMorphismFamily {
    let obj = khat(k, &DimObject::new(vec![1; k.source_len()])).unwrap();
    let mats = (0..k.cells())
        .map(|c| Mat::identity(obj.at(c)).scale(&int(scalars[c] as i64)))
        .collect();
    MatMorphismFamily::new(obj.clone(), obj, mats).unwrap()
}

fn oracle_constant(o: &SchemeOracle, scalars: &[usize]) -> bool {
    let mut seen = vec![None; o.m];
    o.class
        .iter()
        .zip(scalars)
        .all(|(&s, &v)| *seen[s].get_or_insert(v) == v)
}

fn regular(k: &dyn Kernel, scalars: &[usize]) -> bool {
    let ones = DimObject::new(vec![1; k.source_len()]);
    is_regular(k, &ones, &ones, &scalar_family(k, scalars))
        .unwrap()
        .is_pass()
}

fn criterion_5() -> Result<String, String> {
    // C3: every one of the 3^9 families
    let cm = gen_cyclic(3).unwrap();
    let o = SchemeOracle::new(&cm);
    let k = SchemeKernel::new(&validate(&cm).unwrap()).unwrap();
    let mut regular_count = 0;
    for code in 0..3usize.pow(9) {
        let scalars: Vec<usize> = (0..9).map(|i| code / 3usize.pow(i) % 3).collect();
        let r = regular(&k, &scalars);
        regular_count += usize::from(r);
        ensure(r == oracle_constant(&o, &scalars), || {
            format!("C3 discrepancy at {scalars:?}")
        })?;
    }
    ensure(regular_count == 27, || {
        format!("C3: {regular_count} regular families, expected 27")
    })?;

    // H(2,2): the equation at a cell involves only the class of that cell,
    // so each class is enumerated in full with the others held at 1
    let cm = gen_hamming(2, 2).unwrap();
    let o = SchemeOracle::new(&cm);
    let k = SchemeKernel::new(&validate(&cm).unwrap()).unwrap();
    let mut families = 0;
    for s in 0..o.m {
        let cells: Vec<usize> = (0..16).filter(|&c| o.class[c] == s).collect();
        for code in 0..3usize.pow(cells.len() as u32) {
            let mut scalars = vec![1; 16];
            for (i, &c) in cells.iter().enumerate() {
                scalars[c] = code / 3usize.pow(i as u32) % 3;
            }
            families += 1;
            ensure(
                regular(&k, &scalars) == oracle_constant(&o, &scalars),
                || format!("H(2,2) discrepancy at {scalars:?}"),
            )?;
        }
    }
    // unrestricted families, both random and class-constant with one cell moved
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..400 {
        let scalars: Vec<usize> = if i % 2 == 0 {
            (0..16).map(|_| rng.gen_range(0..=2)).collect()
        } else {
            let per: Vec<usize> = (0..o.m).map(|_| rng.gen_range(0..=2)).collect();
            let mut v: Vec<usize> = o.class.iter().map(|&s| per[s]).collect();
            if i % 4 == 1 {
                let c = rng.gen_range(0..16);
                v[c] = (v[c] + 1) % 3;
            }
            v
        };
        families += 1;
        ensure(
            regular(&k, &scalars) == oracle_constant(&o, &scalars),
            || format!("H(2,2) discrepancy at {scalars:?}"),
        )?;
    }
    Ok(format!("C3: 19683 families exhaustive; H(2,2): {families} families (per-class exhaustive plus 400 unrestricted); 0 discrepancies"))
}

// ---------------------------------------------------------------- 6

fn criterion_6() -> Result<String, String> {
    let mut round_trips = 0;
    let mut rejections = 0;
    for (name, k) in kernels() {
        let k = k.as_ref();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let side = k.grid_side();
        for f in dim_corpus(k.source_len(), &mut rng) {
            round_trips += 1;
            let got = wiener_membership(k, &khat(k, &f).unwrap()).unwrap();
            ensure(got == Membership::Member(vec![f.clone()]), || {
                format!("{name}: {f} gave {got:?}")
            })?;
        }
        // one cell moved off the image
        for a in 0..k.source_len() {
            let f = dim_corpus(k.source_len(), &mut rng).swap_remove(0);
            let mut target = khat(k, &f).unwrap();
            let support: Vec<usize> = (0..k.cells()).filter(|&c| k.weight(a, c) > 0).collect();
            // a single-cell support has nothing to be inconsistent with
            let Some(&cell) = support.get(1) else {
                continue;
            };
            target.set(cell / side, cell % side, target.at(cell) + 1);
            match wiener_membership(k, &target).unwrap() {
                Membership::Member(sols) => {
                    return Err(format!("{name}: perturbed matrix accepted as {sols:?}"))
                }
                Membership::NotMember(w) => {
                    rejections += 1;
                    if w.coords == "x,y,x',y'" {
                        let (c1, c2) = (w.at[0] * side + w.at[1], w.at[2] * side + w.at[3]);
                        let same_class =
                            (0..k.source_len()).any(|s| k.weight(s, c1) > 0 && k.weight(s, c2) > 0);
                        ensure(same_class, || {
                            format!("{name}: witness cells lie in different classes")
                        })?;
                        ensure(
                            w.lhs == target.at(c1).to_string()
                                && w.rhs == target.at(c2).to_string()
                                && w.lhs != w.rhs,
                            || format!("{name}: witness {w} does not reproduce"),
                        )?;
                    } else {
                        let c = w.at[0] * side + w.at[1];
                        ensure(w.rhs == target.at(c).to_string() && w.lhs != w.rhs, || {
                            format!("{name}: witness {w}")
                        })?;
                    }
                }
            }
        }
    }
    Ok(format!(
        "{round_trips} round trips exact, {rejections} perturbed matrices rejected with witnesses"
    ))
}

// ---------------------------------------------------------------- 7

fn criterion_7() -> Result<String, String> {
    for (name, ring) in rings() {
        for (check, out) in [
            ("proassociativity", ring.check_proassociativity()),
            ("cyclic", ring.check_cyclic()),
            ("braiding", ring.check_braiding()),
        ] {
            ensure(out.is_pass(), || format!("{name}: {check}"))?;
        }
        gft_core::fusion::validate_fusion(ring.data().clone())
            .map_err(|e| format!("{name}: {e}"))?;
        let k = FusionKernel::new(&ring).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (f, g) in pair_corpus(ring.len(), &mut rng) {
            ensure(check_multiplicative(&k, &f, &g).unwrap().is_pass(), || {
                format!("{name}: Cayley product at {f} {g}")
            })?;
        }
        ensure(check_unit_preserved(&k).unwrap().is_pass(), || {
            format!("{name}: unit")
        })?;
    }

    // N_τ² = I + N_τ with the matrices read off the raw tensor
    let fib = gen_fibonacci();
    let t = fib.tensor();
    let tau = fib.index_of("tau").unwrap();
    let n = |y: usize, z: usize| tget(t, tau, y, z);
    for y in 0..2 {
        for z in 0..2 {
            let sq: u64 = (0..2).map(|u| n(y, u) * n(u, z)).sum();
            ensure(sq == u64::from(y == z) + n(y, z), || {
                format!("N_τ² entry ({y},{z})")
            })?;
        }
    }

    let star_verdict = |ring: &FusionRing| -> Vec<Verdict> {
        let k = FusionKernel::new(ring).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        dim_corpus(ring.len(), &mut rng)
            .iter()
            .map(|f| check_star_preserved(&k, f).unwrap().verdict())
            .collect()
    };
    let z2 = gen_group_fusion(2).unwrap();
    ensure(
        star_verdict(&z2).iter().all(|v| *v == Verdict::Pass),
        || "Z2 star chain".into(),
    )?;
    ensure(
        star_verdict(&fib)
            .iter()
            .all(|v| *v == Verdict::NotApplicable),
        || "Fibonacci star not NA".into(),
    )?;

    let entry = CorpusEntry::fusion("gen:fibonacci", fib.into_data());
    for r in run_checks(&entry, &RunOptions::default()) {
        let want = if r.check == "star-preserved" {
            Verdict::NotApplicable
        } else {
            Verdict::Pass
        };
        ensure(r.verdict == want, || {
            format!("Fibonacci suite: {}", r.text_line())
        })?;
    }
    Ok("Fibonacci, Ising, Z1..Z6 pass; N_τ² = I + N_τ; Z2 star chain PASS; Fibonacci NOT-APPLICABLE".into())
}

// ---------------------------------------------------------------- 8

fn criterion_8() -> Result<String, String> {
    let mut objects = 0;
    let mut comparisons = 0;
    for (name, cm, _) in schemes() {
        let o = SchemeOracle::new(&cm);
        let k = SchemeKernel::new(&validate(&cm).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for f in dim_corpus(o.m, &mut rng) {
            objects += 1;
            let fstar: Vec<usize> = (0..o.m).map(|s| f.get(o.star[s])).collect();
            let want = otranspose(o.n, &o.khat(f.dims()));
            ensure(o.khat(&fstar) == want, || {
                format!("{name}: oracle star at {f}")
            })?;
            let lib_l = khat(&k, &star_source(&k, &f).unwrap()).unwrap();
            let lib_r = star_target(&khat(&k, &f).unwrap());
            ensure(
                lib_l.dims() == want.as_slice() && lib_r.dims() == want.as_slice(),
                || format!("{name}: K̂(f*) at {f}"),
            )?;
            ensure(check_star_preserved(&k, &f).unwrap().is_pass(), || {
                format!("{name}: check at {f}")
            })?;
        }
    }
    for (name, k) in kernels() {
        let k = k.as_ref();
        let inv = involution_of(k);
        let t = k.tensor();
        let m = k.source_len();
        let precompact = triples(m)
            .all(|(s, u, r)| tget(t, s, u, r) == tget(t, inv[u], inv[s], inv[r]))
            && inv[k.unit()] == k.unit();
        if !precompact {
            continue;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for (f, g) in pair_corpus(m, &mut rng) {
            comparisons += 1;
            let dc = dual_comparison(k, &f, &g).map_err(|e| format!("{name}: {e}"))?;
            ensure(dc.outcome().is_pass(), || {
                format!("{name}: dual comparison at {f} {g}")
            })?;
            // (f* ⊗ g*) and (g ⊗ f)* by brute force
            let star = |h: &[usize]| -> Vec<usize> { (0..m).map(|s| h[inv[s]]).collect() };
            let lhs = oconv(t, &star(f.dims()), &star(g.dims()));
            let rhs = star(&oconv(t, g.dims(), f.dims()));
            ensure(lhs == rhs && dc.source().dims() == lhs.as_slice(), || {
                format!("{name}: oracle dims at {f} {g}")
            })?;
            for c in 0..m {
                ensure(dc.component(c).is_iso() || lhs[c] == 0, || {
                    format!("{name}: component {c} not iso")
                })?;
            }
        }
    }
    Ok(format!(
        "{objects} scheme objects with K̂(f*) = K̂(f)*; {comparisons} dual comparisons isomorphic"
    ))
}

// ---------------------------------------------------------------- 9

#[derive(Clone)]
struct Mutant {
    label: String,
    entry: CorpusEntry,
}

fn scheme_mutants(name: &str, cm: &ClassMatrix) -> Vec<Mutant> {
    let scheme = validate(cm).unwrap();
    let t = scheme.intersection_numbers().unwrap();
    let m = scheme.classes();
    let n = scheme.points();
    let mut v = Vec::new();
    for (a, b, c) in triples(m) {
        let mut bumped = t.clone();
        bumped.bump(a, b, c);
        v.push(Mutant {
            label: format!("{name}: N({a},{b},{c}) += 1"),
            entry: CorpusEntry {
                source: name.into(),
                object: CorpusObject::Scheme {
                    matrix: cm.clone(),
                    tensor: Some(bumped),
                    kernel_bumps: vec![],
                },
            },
        });
    }
    for s in 0..m {
        for x in 0..n {
            for y in 0..n {
                v.push(Mutant {
                    label: format!("{name}: K({s},{x},{y}) += 1"),
                    entry: CorpusEntry {
                        source: name.into(),
                        object: CorpusObject::Scheme {
                            matrix: cm.clone(),
                            tensor: None,
                            kernel_bumps: vec![(s, x, y)],
                        },
                    },
                });
            }
        }
    }
    v
}

fn fusion_mutants(name: &str, data: &FusionData) -> Vec<Mutant> {
    let m = data.names.len();
    triples(m)
        .map(|(a, b, c)| {
            let mut d = data.clone();
            d.tensor.bump(a, b, c);
            Mutant {
                label: format!(
                    "{name}: N({},{},{}) += 1",
                    d.names[a], d.names[b], d.names[c]
                ),
                entry: CorpusEntry::fusion(name, d),
            }
        })
        .collect()
}

/// The kernel and tensor a mutant's checks run against.
fn mutant_kernel(entry: &CorpusEntry) -> (Box<dyn Kernel>, Option<SchemeOracle>) {
    match &entry.object {
        CorpusObject::Scheme {
            matrix,
            tensor,
            kernel_bumps,
        } => {
            let scheme = validate(matrix).unwrap();
            let t = tensor
                .clone()
                .unwrap_or_else(|| scheme.intersection_numbers().unwrap());
            let mut k = SchemeKernel::with_tensor(&scheme, t);
            for &(s, x, y) in kernel_bumps {
                k.bump_weight(s, x, y);
            }
            (Box::new(k), Some(SchemeOracle::new(matrix)))
        }
        CorpusObject::Fusion(d) => (
            Box::new(FusionKernel::new(&FusionRing::assume_valid(d.clone())).unwrap()),
            None,
        ),
    }
}

/// Splits a case-prefixed witness into named values.
fn bind(w: &Witness, len: usize, side: usize) -> Option<HashMap<String, Vec<usize>>> {
    let mut out = HashMap::new();
    let mut at = w.at.iter().copied();
    for name in w.coords.split(',') {
        let width = match name {
            "f" | "g" => len,
            "alpha" | "F" => side * side,
            _ => 1,
        };
        let vals: Vec<usize> = at.by_ref().take(width).collect();
        if vals.len() != width {
            return None;
        }
        out.insert(name.to_string(), vals);
    }
    at.next().is_none().then_some(out)
}

/// Recomputes the two sides named by a witness directly from the raw
/// tensor, kernel weights and class matrix.
fn reproduce(check: &str, w: &Witness, entry: &CorpusEntry) -> Option<(String, String)> {
    let (k, oracle) = mutant_kernel(entry);
    let k = k.as_ref();
    let t = k.tensor();
    let m = k.source_len();
    let side = k.grid_side();
    let inv = involution_of(k);
    let u = k.unit();
    let v = bind(w, m, side)?;
    let g1 = |n: &str| v.get(n).map(|x| x[0]);
    let dims = |h: &[usize]| DimObject::new(h.to_vec()).to_string();
    let cell = || Some(g1("x")? * side + g1("y")?);
    let pair = |a: u64, b: u64| Some((a.to_string(), b.to_string()));
    match (check, w.coords.as_str()) {
        ("intersection-numbers", "s,t,r") => {
            let (s, q, r) = (g1("s")?, g1("t")?, g1("r")?);
            pair(tget(t, s, q, r), oracle?.num(s, q, r))
        }
        ("intersection-numbers", "s,t") => {
            let o = oracle?;
            let (s, q) = (g1("s")?, g1("t")?);
            let val = |r: usize| (o.size[r] / o.n) as u64;
            pair(
                (0..m).map(|r| tget(t, s, q, r) * val(r)).sum(),
                val(s) * val(q),
            )
        }
        ("bose-mesner", "s,t,x,y") => {
            let o = oracle?;
            let (s, q, x, y) = (g1("s")?, g1("t")?, g1("x")?, g1("y")?);
            let prod: u64 = (0..o.n).map(|z| o.adj(s, x, z) * o.adj(q, z, y)).sum();
            pair(
                prod,
                (0..m).map(|r| tget(t, s, q, r) * o.adj(r, x, y)).sum(),
            )
        }
        ("proassociativity", "s,t,r,u") => {
            let (s, q, r, w4) = (g1("s")?, g1("t")?, g1("r")?, g1("u")?);
            let l: u64 = (0..m).map(|x| tget(t, s, q, x) * tget(t, x, r, w4)).sum();
            let rr: u64 = (0..m).map(|x| tget(t, s, x, w4) * tget(t, q, r, x)).sum();
            pair(l, rr)
        }
        ("precompact", "s,t,r") => {
            let (s, q, r) = (g1("s")?, g1("t")?, g1("r")?);
            pair(tget(t, s, q, r), tget(t, inv[q], inv[s], inv[r]))
        }
        ("compact" | "cyclic", "s,t,r") => {
            let (s, q, r) = (g1("s")?, g1("t")?, g1("r")?);
            pair(tget(t, s, q, inv[r]), tget(t, q, r, inv[s]))
        }
        ("validate" | "fusion-tensor", "y,z") => {
            let (y, z) = (g1("y")?, g1("z")?);
            pair(tget(t, u, y, z), u64::from(y == z))
        }
        ("validate" | "fusion-tensor", "x,z") => {
            let (x, z) = (g1("x")?, g1("z")?);
            pair(tget(t, x, u, z), u64::from(x == z))
        }
        ("fusion-tensor", "x,y,a,b") => {
            let (x, y, a, b) = (g1("x")?, g1("y")?, g1("a")?, g1("b")?);
            let l: u64 = (0..m).map(|c| tget(t, y, a, c) * tget(t, x, c, b)).sum();
            pair(l, (0..m).map(|q| tget(t, x, y, q) * tget(t, q, a, b)).sum())
        }
        ("braiding", "x,y,z") => {
            let (x, y, z) = (g1("x")?, g1("y")?, g1("z")?);
            pair(tget(t, x, y, z), tget(t, y, x, z))
        }
        ("closed", "x,y,z") => {
            let (x, y, z) = (g1("x")?, g1("y")?, g1("z")?);
            pair(tget(t, x, y, z), tget(t, z, inv[y], x))
        }
        ("multiplicative", "f,g,x,y") => {
            let (f, g, c) = (v.get("f")?, v.get("g")?, cell()?);
            let l = ohat(k, &oconv(t, f, g))[c];
            let r = ocompose(k.compose_order(), side, &ohat(k, f), &ohat(k, g))[c];
            pair(l as u64, r as u64)
        }
        ("unit-preserved", "x,y") => {
            let mut j = vec![0; m];
            j[u] = 1;
            pair(ohat(k, &j)[cell()?] as u64, u64::from(g1("x")? == g1("y")?))
        }
        ("unit-preserved", "f,x,y") => {
            let f = v.get("f")?;
            let mut j = vec![0; m];
            j[u] = 1;
            let c = cell()?;
            pair(ohat(k, &oconv(t, &j, f))[c] as u64, ohat(k, f)[c] as u64)
        }
        ("conservative", "a") => {
            let a = g1("a")?;
            match oracle {
                Some(o) => pair(
                    (0..k.cells()).map(|c| k.weight(a, c) as u64).sum(),
                    o.n as u64 * tget(t, a, inv[a], 0),
                ),
                None => pair(k.weight(a, u * side + a) as u64, 1),
            }
        }
        ("adjunction", "f,a") => {
            let (f, a) = (v.get("f")?, g1("a")?);
            let hat = ohat(k, f);
            let back: usize = (0..k.cells()).map(|c| k.weight(a, c) * hat[c]).sum();
            let want: u64 = match oracle {
                Some(o) => o.n as u64 * tget(t, a, inv[a], 0) * f[a] as u64,
                None => {
                    let cu = |q: usize| -> u64 { (0..m).map(|y| tget(t, y, inv[y], q)).sum() };
                    (0..m)
                        .flat_map(|b| (0..m).map(move |q| (b, q)))
                        .map(|(b, q)| f[b] as u64 * tget(t, a, q, b) * cu(q))
                        .sum()
                }
            };
            pair(back as u64, want)
        }
        ("star-preserved", "f,g,x,y") => {
            let (f, g, c) = (v.get("f")?, v.get("g")?, cell()?);
            let star = |h: &[usize]| -> Vec<usize> { (0..m).map(|s| h[inv[s]]).collect() };
            let l = ohat(k, &star(&oconv(t, f, g)))[c];
            let gs = otranspose(side, &ohat(k, g));
            let fs = otranspose(side, &ohat(k, f));
            pair(
                l as u64,
                ocompose(k.compose_order(), side, &gs, &fs)[c] as u64,
            )
        }
        ("star-preserved", "f,x,y") => {
            let (f, c) = (v.get("f")?, cell()?);
            let fstar: Vec<usize> = (0..m).map(|s| f[inv[s]]).collect();
            pair(
                ohat(k, &fstar)[c] as u64,
                otranspose(side, &ohat(k, f))[c] as u64,
            )
        }
        ("wiener", "f,g") => {
            let (f, g) = (v.get("f")?, v.get("g")?);
            let composite = ocompose(k.compose_order(), side, &ohat(k, f), &ohat(k, g));
            let target = MatObject::new(side, composite).ok()?;
            let Membership::Member(sols) = wiener_membership(k, &target).ok()? else {
                return None;
            };
            Some((sols[0].to_string(), dims(&oconv(t, f, g))))
        }
        ("wiener", "f") => {
            let f = v.get("f")?;
            let target = MatObject::new(side, ohat(k, f)).ok()?;
            let Membership::Member(sols) = wiener_membership(k, &target).ok()? else {
                return None;
            };
            Some((sols[0].to_string(), dims(f)))
        }
        ("regularity", "alpha,x,y") => {
            let alpha = v.get("alpha")?;
            let ones = DimObject::new(vec![1; m]);
            let out = is_regular(k, &ones, &ones, &scalar_family(k, alpha)).ok()?;
            let inner = out.witness()?;
            (inner.at == [g1("x")?, g1("y")?]).then(|| (inner.lhs.clone(), inner.rhs.clone()))
        }
        ("regularity", "alpha,x,y,x',y'") => {
            let alpha = v.get("alpha")?;
            let ones = DimObject::new(vec![1; m]);
            let c1 = g1("x")? * side + g1("y")?;
            let c2 = g1("x'")? * side + g1("y'")?;
            let o = oracle?;
            let same = o.class[c1] == o.class[c2];
            let reg = is_regular(k, &ones, &ones, &scalar_family(k, alpha))
                .ok()?
                .is_pass();
            (same && reg).then(|| (alpha[c1].to_string(), alpha[c2].to_string()))
        }
        _ => None,
    }
}

struct Hit {
    check: &'static str,
    mutant: String,
    named: Verdict,
    reproduced: String,
}

fn criterion_9() -> Result<String, String> {
    let scheme_pool = [
        ("C3", gen_cyclic(3).unwrap()),
        ("C4", gen_cyclic(4).unwrap()),
        ("H(2,2)", gen_hamming(2, 2).unwrap()),
    ];
    let fusion_pool = [
        ("Z2", gen_group_fusion(2).unwrap()),
        ("Z3", gen_group_fusion(3).unwrap()),
        ("Fibonacci", gen_fibonacci()),
    ];
    let mut names: Vec<&'static str> = SCHEME_CHECKS.to_vec();
    names.extend(FUSION_CHECKS.iter().filter(|n| !SCHEME_CHECKS.contains(n)));

    let mut hits = Vec::new();
    let mut missing = Vec::new();
    for &check in &names {
        let mut candidates: Vec<(CorpusEntry, Vec<Mutant>)> = Vec::new();
        if SCHEME_CHECKS.contains(&check) {
            for (name, cm) in &scheme_pool {
                candidates.push((
                    CorpusEntry::scheme(*name, cm.clone()),
                    scheme_mutants(name, cm),
                ));
            }
        }
        if FUSION_CHECKS.contains(&check) {
            for (name, ring) in &fusion_pool {
                candidates.push((
                    CorpusEntry::fusion(*name, ring.data().clone()),
                    fusion_mutants(name, ring.data()),
                ));
            }
        }
        let only = RunOptions {
            only: Some(vec![check.to_string()]),
            ..RunOptions::default()
        };
        let found = candidates.iter().find_map(|(base, mutants)| {
            if run_checks(base, &only)[0].verdict != Verdict::Pass {
                return None;
            }
            mutants.iter().find_map(|mutant| {
                let named = run_checks(&mutant.entry, &only)[0].verdict;
                if named == Verdict::Pass {
                    return None;
                }
                let full = run_checks(&mutant.entry, &RunOptions::default());
                let mut fails: Vec<_> =
                    full.iter().filter(|r| r.verdict == Verdict::Fail).collect();
                // prefer the named check's own witness
                fails.sort_by_key(|r| r.check != check);
                fails.iter().find_map(|r| {
                    let w = r.witness.as_ref()?;
                    let (l, rr) = reproduce(&r.check, w, &mutant.entry)?;
                    (l == w.lhs && rr == w.rhs && l != rr).then(|| Hit {
                        check,
                        mutant: mutant.label.clone(),
                        named,
                        reproduced: format!("{} {}", r.check, w),
                    })
                })
            })
        });
        match found {
            Some(hit) => hits.push(hit),
            None => missing.push(check),
        }
    }
    let table: String = hits
        .iter()
        .map(|h| {
            format!(
                "\n    {:<21} {:<28} -> {}; reproduced {}",
                h.check, h.mutant, h.named, h.reproduced
            )
        })
        .collect();
    ensure(missing.is_empty(), || {
        format!(
            "no sensitive +1 mutation found for: {}{table}",
            missing.join(", ")
        )
    })?;
    Ok(format!(
        "{} checks each flipped by a single +1 mutation with a reproduced FAIL witness{table}",
        hits.len()
    ))
}

// ---------------------------------------------------------------- 10

fn criterion_10() -> Result<String, String> {
    let srcs: Vec<String> = [
        "gen:cyclic:5",
        "gen:hamming:2,2",
        "gen:fibonacci",
        "gen:zn:3",
    ]
    .map(String::from)
    .to_vec();
    let a = check_command(&srcs, None, 11, Format::Structured, false);
    let b = check_command(&srcs, None, 11, Format::Structured, false);
    ensure(a == b, || "library runs differ".into())?;
    let bin = env!("CARGO_BIN_EXE_gft");
    let run = || {
        Command::new(bin)
            .args([
                "check",
                "gen:cyclic:4",
                "gen:ising",
                "--seed",
                "7",
                "--format",
                "structured",
            ])
            .output()
            .map_err(|e| e.to_string())
    };
    let (x, y) = (run()?, run()?);
    ensure(x.stdout == y.stdout && !x.stdout.is_empty(), || {
        "binary runs differ".into()
    })?;
    ensure(x.status.code() == Some(0), || {
        format!("exit status {:?}", x.status.code())
    })?;
    let c = check_command(&srcs, None, 12, Format::Structured, false);
    ensure(c.output != a.output, || "seed has no effect".into())?;
    Ok(format!(
        "{} bytes identical across runs (library and binary)",
        a.output.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 10] = [
        ("scheme axiom suite", criterion_1),
        ("Bose-Mesner closure", criterion_2),
        ("multiplicativity", criterion_3),
        ("adjunction", criterion_4),
        ("regularity characterization", criterion_5),
        ("Wiener round trip", criterion_6),
        ("fusion suite", criterion_7),
        ("involution", criterion_8),
        ("mutation sensitivity", criterion_9),
        ("determinism", criterion_10),
    ];
    let run = |f: Criterion| -> Result<String, String> {
        catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        })
    };
    // the first criterion carries a wall-clock bound, so it runs alone
    let first = run(criteria[0].1);
    let rest: Vec<Result<String, String>> = std::thread::scope(|scope| {
        let handles: Vec<_> = criteria[1..]
            .iter()
            .map(|&(_, f)| scope.spawn(move || run(f)))
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut failed = 0;
    for (i, result) in std::iter::once(first).chain(rest).enumerate() {
        let (n, title) = (i + 1, criteria[i].0);
        match result {
            Ok(msg) => println!("criterion {n:>2} PASS  {title}: {msg}"),
            Err(msg) => {
                failed += 1;
                println!("criterion {n:>2} FAIL  {title}: {msg}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
