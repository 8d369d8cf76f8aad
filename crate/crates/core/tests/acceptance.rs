//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Runs as a plain binary so the lines always reach the log.

use std::time::{Duration, Instant};

use hermrank::biform::{ddbar_log_test, divide_by_norm, hermitian_rank, inner_form};
use hermrank::exactla::{congruence_diagonalize, mat_rank, GqMatrix};
use hermrank::gen::{self, derive_seed, GenConfig};
use hermrank::numcheck::numeric_verify;
use hermrank::pairs::{classify, decompose, multiplier, restriction_classify, verify_pair, Kind};
use hermrank::{BiForm, Error, Gq, Monomial, MultiPoly, PolyMapPair, Signature};
use num_traits::{Signed, Zero};
use rand::Rng;

const NUMERIC_TOL: f64 = 1e-9;
const NUMERIC_TRIALS: usize = 100;

type Outcome = Result<String, String>;

fn sig(r: usize, s: usize, t: usize) -> Signature {
    Signature::new(r, s, t).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    ensure(elapsed < limit, || format!("{what} took {elapsed:?}, limit {limit:?}"))
}

const WHITNEY_CASES: [(usize, usize); 4] = [(2, 1), (1, 1), (2, 2), (3, 1)];

/// Whitney sharpness: orthogonal, multiplier |z1|² + |z_n|², rank 2, Other.
///
/// The oracle is the direct expansion of `Σ ε_j φ_j ψ̄_j / ‖z‖²`. The form
/// `(|z1|² + |z_n|)²` sometimes quoted for this pair disagrees with that
/// expansion and is not degree-balanced, so the expansion governs.
fn whitney_sharpness() -> Outcome {
    let mut notes = Vec::new();
    for (r, s) in WHITNEY_CASES {
        let start = Instant::now();
        let n = r + s;
        let p = gen::whitney(r, s).map_err(|e| e.to_string())?;
        ensure(verify_pair(&p), || format!("({r},{s}) not orthogonal"))?;
        let m = multiplier(&p).map_err(|e| e.to_string())?;
        let (z1, zn) = (MultiPoly::var(n, 0), MultiPoly::var(n, n - 1));
        let oracle = BiForm::outer(&z1, &z1).unwrap().checked_add(&BiForm::outer(&zn, &zn).unwrap()).unwrap();
        ensure(m == oracle, || format!("({r},{s}) multiplier {m:?}"))?;
        ensure(hermitian_rank(&m) == 2, || format!("({r},{s}) rank {}", hermitian_rank(&m)))?;
        let c = classify(&p).map_err(|e| e.to_string())?;
        ensure(c.kind == Kind::Other && c.rank == 2, || format!("({r},{s}) classified {:?}", c.kind))?;
        ensure(decompose(&p) == Err(Error::NotQuasiStandard { rank: 2 }), || {
            format!("({r},{s}) decompose did not report NotQuasiStandard")
        })?;
        let t = start.elapsed();
        within(t, Duration::from_secs(1), &format!("({r},{s})"))?;
        notes.push(format!("({r},{s}) {:.0?}", t));
    }
    Ok(format!("multiplier |z1|^2+|zn|^2, rank 2, Other, NotQuasiStandard for {}", notes.join(", ")))
}

/// `(r, s, q)` with `r + s ≤ r + s + q ≤ 2(r + s) − 3`, drawn from
/// `(r, s) ∈ {(2,0), (2,1), (3,1)}` and `q ∈ {0, 1, 2}`.
fn round_trip_configs() -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for (r, s) in [(2, 0), (2, 1), (3, 1)] {
        for q in 0..=2 {
            let m = r + s;
            if m + q + 3 <= 2 * m {
                out.push((r, s, q));
            }
        }
    }
    out
}

fn round_trip_pairs() -> Vec<PolyMapPair> {
    let configs = round_trip_configs();
    (0..200u64)
        .map(|i| {
            let (r, s, q) = configs[i as usize % configs.len()];
            let cfg = GenConfig {
                seed: derive_seed(0x5eed, i),
                source: sig(r, s, 0),
                target: sig(r + s + q, 0, 0),
                max_degree: 3,
                height: 3,
            };
            gen::quasi_standard(&cfg, q).expect("generation").0
        })
        .collect()
}

/// Every generated pair in the hypothesis range is Null or QuasiStandard and
/// every QuasiStandard pair decomposes with a checked certificate.
fn round_trip() -> Outcome {
    let start = Instant::now();
    let configs = round_trip_configs();
    let pairs = round_trip_pairs();
    let (mut qs, mut null) = (0, 0);
    for (i, p) in pairs.iter().enumerate() {
        let c = classify(p).map_err(|e| format!("pair {i}: {e}"))?;
        match c.kind {
            Kind::Other => return Err(format!("pair {i} classified Other (rank {})", c.rank)),
            Kind::Null => null += 1,
            Kind::QuasiStandard => {
                qs += 1;
                let d = decompose(p).map_err(|e| format!("pair {i}: decompose failed: {e}"))?;
                ensure(d.certify(p), || format!("pair {i}: certificate rejected"))?;
            }
        }
    }
    let t = start.elapsed();
    within(t, Duration::from_secs(60), "round trip")?;
    Ok(format!(
        "200 pairs over (r,s,q) in {configs:?}: {qs} QuasiStandard certified, {null} Null, 0 Other in {t:.1?}"
    ))
}

/// Exponent vectors in two variables of total degree at most `d`.
fn monomials_upto(d: u32) -> Vec<Monomial> {
    (0..=d).flat_map(|k| Monomial::all_of_degree(2, k)).collect()
}

/// Base case `n = 2`, one target component, degrees ≤ 2:
/// `φ(x)·conj(ψ(y)) = ⟨x, y⟩·H(x, ȳ)` forces `H ≡ 0`.
///
/// The identity is linear in `(G, H)` with `G_{αβ} = φ_α·conj(ψ_β)`; the
/// linear system alone has a nine-dimensional solution space, one solution
/// per `H`. The rank-one shape of `G` is excluded by an evaluation
/// certificate: a nonzero `ψ` vanishes at no more than four of seven chosen
/// points, and `φ` vanishing on the orthogonal lines of any three of them
/// is zero.
fn base_case() -> Outcome {
    let start = Instant::now();
    let g_monos = monomials_upto(2);
    let h_monos = monomials_upto(1);
    let ng = g_monos.len() * g_monos.len();
    let nh = h_monos.len() * h_monos.len();
    let eq_monos: Vec<(Monomial, Monomial)> =
        g_monos.iter().flat_map(|a| g_monos.iter().map(move |b| (a.clone(), b.clone()))).collect();
    let row_of = |a: &Monomial, b: &Monomial| eq_monos.iter().position(|(x, y)| x == a && y == b);
    let mut sys = GqMatrix::zeros(eq_monos.len(), ng + nh);
    for (i, a) in g_monos.iter().enumerate() {
        for (j, b) in g_monos.iter().enumerate() {
            sys[(row_of(a, b).unwrap(), i * g_monos.len() + j)] = Gq::from_int(1);
        }
    }
    for (i, a) in h_monos.iter().enumerate() {
        for (j, b) in h_monos.iter().enumerate() {
            for k in 0..2 {
                let v = Monomial::var(2, k);
                let row = row_of(&a.mul(&v), &b.mul(&v)).ok_or("norm·H leaves the degree range")?;
                sys[(row, ng + i * h_monos.len() + j)] = Gq::from_int(-1);
            }
        }
    }
    let kernel = sys.nullspace();
    ensure(kernel.len() == nh, || format!("linear solution space has dimension {}, expected {nh}", kernel.len()))?;
    // every H occurs, and G = 0 only for H = 0
    let h_part = GqMatrix::from_rows(kernel.iter().map(|v| v[ng..].to_vec()).collect()).unwrap();
    ensure(mat_rank(&h_part) == nh, || "some H has no solution".into())?;
    let g_part = GqMatrix::from_rows(kernel.iter().map(|v| v[..ng].to_vec()).collect()).unwrap();
    ensure(mat_rank(&g_part) == nh, || "G does not determine H".into())?;
    // φ and ψ have no constant term once the other factor is nonzero
    let constant = |m: &Monomial| m.degree() == 0;
    for v in &kernel {
        for (i, a) in g_monos.iter().enumerate() {
            for (j, b) in g_monos.iter().enumerate() {
                if (constant(a) || constant(b)) && !v[i * g_monos.len() + j].is_zero() {
                    return Err("constant row of G not forced to zero".into());
                }
            }
        }
    }

    let points: [(i64, i64); 7] = [(1, 2), (3, -1), (2, 5), (-1, 4), (5, 3), (4, -3), (2, 7)];
    let lin: Vec<Monomial> = g_monos.iter().filter(|m| !constant(m)).cloned().collect();
    let eval = |m: &Monomial, y: (Gq, Gq)| {
        let e = m.exponents();
        let mut acc = Gq::from_int(1);
        for _ in 0..e[0] {
            acc = &acc * &y.0;
        }
        for _ in 0..e[1] {
            acc = &acc * &y.1;
        }
        acc
    };
    let pt = |k: usize| (Gq::from_int(points[k].0), Gq::from_int(points[k].1));
    for subset in subsets(7, 5) {
        let rows = subset.iter().map(|&k| lin.iter().map(|m| eval(m, pt(k))).collect()).collect();
        ensure(mat_rank(&GqMatrix::from_rows(rows).unwrap()) == lin.len(), || {
            format!("points {subset:?} admit a nonzero ψ vanishing on all five")
        })?;
    }
    for subset in subsets(7, 3) {
        let mut rows = Vec::new();
        for &k in &subset {
            let (y1, y2) = pt(k);
            let dir = (-y2.conj(), y1.conj());
            for d in 1..=2 {
                rows.push(lin.iter().map(|m| if m.degree() == d { eval(m, dir.clone()) } else { Gq::zero() }).collect());
            }
        }
        ensure(mat_rank(&GqMatrix::from_rows(rows).unwrap()) == lin.len(), || {
            format!("φ can vanish on the orthogonal lines of {subset:?}")
        })?;
    }
    let t = start.elapsed();
    within(t, Duration::from_secs(5), "base case")?;
    Ok(format!(
        "{} equations in {} unknowns, solution space {} = #H coefficients, rank-one G forces H = 0 ({t:.0?})",
        eq_monos.len(),
        ng + nh,
        kernel.len()
    ))
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut with_last = subsets(n - 1, k - 1);
    for s in &mut with_last {
        s.push(n - 1);
    }
    let mut out = subsets(n - 1, k);
    out.extend(with_last);
    out
}

fn random_poly<R: Rng>(rng: &mut R, nvars: usize, max_deg: u32) -> MultiPoly {
    let mut p = MultiPoly::zero(nvars);
    while p.is_zero() {
        for d in 0..=max_deg {
            p = p.checked_add(&gen::random_homogeneous(rng, nvars, d, 3, 0.3)).unwrap();
        }
    }
    p
}

/// `ddbar_log_test(B) ⟺ rank(B) ≤ 1` on constructed rank-one and rank-two forms.
fn rank_one_criterion() -> Outcome {
    let mut rng = gen::rng(4);
    let mut mismatches = 0;
    let mut built = [0usize; 2];
    for i in 0..100 {
        let n = rng.gen_range(1..=3);
        let mut b = BiForm::outer(&random_poly(&mut rng, n, 2), &random_poly(&mut rng, n, 2)).unwrap();
        let want = if i < 50 { 1 } else { 2 };
        while want == 2 && hermitian_rank(&b) < 2 {
            let extra = BiForm::outer(&random_poly(&mut rng, n, 2), &random_poly(&mut rng, n, 2)).unwrap();
            b = b.checked_add(&extra).unwrap();
        }
        let rank = hermitian_rank(&b);
        ensure(rank == want, || format!("form {i} built with rank {rank}, wanted {want}"))?;
        built[want - 1] += 1;
        if ddbar_log_test(&b).map_err(|e| e.to_string())? != (rank <= 1) {
            mismatches += 1;
        }
    }
    ensure(mismatches == 0, || format!("{mismatches} mismatches"))?;
    Ok(format!("{} rank-1 and {} rank-2 forms, 0 mismatches", built[0], built[1]))
}

fn random_signature<R: Rng>(rng: &mut R) -> Signature {
    loop {
        let (r, s, t) = (rng.gen_range(0..=2), rng.gen_range(0..=2), rng.gen_range(0..=1));
        if r + s >= 1 {
            return sig(r, s, t);
        }
    }
}

fn random_biform<R: Rng>(rng: &mut R, n: usize) -> BiForm {
    let terms: Vec<_> = (0..rng.gen_range(1..=4))
        .map(|_| {
            let e = |rng: &mut R| (0..n).map(|_| rng.gen_range(0..=2)).collect::<Vec<u32>>();
            (e(rng), e(rng), gen::random_nonzero_gq(rng, 5))
        })
        .collect();
    BiForm::from_terms(n, terms).unwrap()
}

/// Exact division by the norm form, and rejection of non-multiples.
fn norm_division() -> Outcome {
    let mut rng = gen::rng(5);
    for i in 0..100 {
        let sg = random_signature(&mut rng);
        let q = random_biform(&mut rng, sg.dim());
        let b = inner_form(sg).checked_mul(&q).unwrap();
        ensure(divide_by_norm(&b, sg).as_ref() == Ok(&q), || format!("multiple {i} in {sg} not recovered"))?;
    }
    for i in 0..100 {
        let sg = random_signature(&mut rng);
        let n = sg.dim();
        let q = random_biform(&mut rng, n);
        // a monomial without z_1 is not divisible by the norm form
        let mut alpha: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=2)).collect();
        alpha[0] = 0;
        let beta: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=2)).collect();
        let bump = BiForm::from_terms(n, [(alpha, beta, gen::random_nonzero_gq(&mut rng, 5))]).unwrap();
        let b = inner_form(sg).checked_mul(&q).unwrap().checked_add(&bump).unwrap();
        ensure(divide_by_norm(&b, sg) == Err(Error::NotDivisible), || format!("non-multiple {i} in {sg} divided"))?;
    }
    Ok("100 multiples recovered exactly, 100 non-multiples rejected with NotDivisible".into())
}

/// Restrictions of quasi-standard pairs with null variables stay
/// quasi-standard; the Whitney pair stays Other.
fn restriction_consistency() -> Outcome {
    let start = Instant::now();
    let configs = [(2, 1, 0), (3, 1, 0), (3, 1, 1), (1, 1, 0), (2, 0, 0)];
    for i in 0..50u64 {
        let (r, s, q) = configs[i as usize % configs.len()];
        let cfg = GenConfig {
            seed: derive_seed(0x6e57, i),
            source: sig(r, s, 0),
            target: sig(r + s + q, 0, 0),
            max_degree: 2,
            height: 3,
        };
        let (p, _) = gen::quasi_standard(&cfg, q).map_err(|e| e.to_string())?;
        let ext = gen::extend_with_null_vars(&p, 1 + (i as usize % 2));
        let rep = restriction_classify(&ext, 20, i).map_err(|e| format!("pair {i}: {e}"))?;
        ensure(rep.unanimous() == Some(Kind::QuasiStandard) && rep.direct == Kind::QuasiStandard, || {
            format!("pair {i}: {rep:?}")
        })?;
    }
    let w = gen::extend_with_null_vars(&gen::whitney(2, 1).unwrap(), 1);
    let rep = restriction_classify(&w, 20, 7).map_err(|e| e.to_string())?;
    ensure(rep.unanimous() == Some(Kind::Other) && rep.direct == Kind::Other, || format!("Whitney: {rep:?}"))?;
    Ok(format!("50 extended pairs all QuasiStandard on 20 slices each; Whitney (t=1) Other both ways ({:.1?})", start.elapsed()))
}

/// Inertia of `Q*·D·Q` equals the sign counts of `D`.
fn sylvester() -> Outcome {
    let mut rng = gen::rng(7);
    for i in 0..100 {
        let n = rng.gen_range(1..=5);
        let d: Vec<Gq> = (0..n).map(|_| Gq::from_int(rng.gen_range(-3..=3))).collect();
        let (q, _) = gen::random_invertible(&mut rng, n, 3).map_err(|e| e.to_string())?;
        let m = &(&q.adjoint() * &GqMatrix::diagonal(&d)) * &q;
        let c = congruence_diagonalize(&m).map_err(|e| e.to_string())?;
        let expect = (
            d.iter().filter(|x| x.re.is_positive()).count(),
            d.iter().filter(|x| x.re.is_negative()).count(),
            d.iter().filter(|x| x.is_zero()).count(),
        );
        ensure(c.inertia() == expect, || format!("matrix {i}: inertia {:?}, expected {expect:?}", c.inertia()))?;
    }
    Ok("100 congruent matrices, inertia recovered exactly".into())
}

/// Float residuals agree with the exact verdicts.
fn numeric_agreement() -> Outcome {
    let mut all: Vec<PolyMapPair> = WHITNEY_CASES.iter().map(|&(r, s)| gen::whitney(r, s).unwrap()).collect();
    all.extend(round_trip_pairs());
    let mut worst = 0.0f64;
    for (i, p) in all.iter().enumerate() {
        let rep = numeric_verify(p, NUMERIC_TRIALS, NUMERIC_TOL, i as u64).map_err(|e| e.to_string())?;
        ensure(rep.failures == 0, || format!("pair {i}: {} failures, max residual {:e}", rep.failures, rep.max_relative_residual))?;
        worst = worst.max(rep.max_relative_residual);
    }
    let w = gen::whitney(2, 1).unwrap();
    let mut phi = w.phi().to_vec();
    phi[1] = phi[1].checked_add(&MultiPoly::var(3, 0).poly_mul(&MultiPoly::var(3, 1)).unwrap()).unwrap();
    let bad = PolyMapPair::new(phi, w.psi().to_vec(), w.source(), w.target()).unwrap();
    ensure(!verify_pair(&bad), || "perturbed Whitney verified".into())?;
    let rep = numeric_verify(&bad, NUMERIC_TRIALS, NUMERIC_TOL, 1).map_err(|e| e.to_string())?;
    ensure(rep.failures >= 1, || "perturbation not detected numerically".into())?;
    Ok(format!(
        "{} pairs x {NUMERIC_TRIALS} samples at tol {NUMERIC_TOL:e}: 0 failures (max residual {worst:.1e}); perturbed Whitney: {} failures",
        all.len(),
        rep.failures
    ))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("Whitney sharpness fixture", whitney_sharpness),
        ("quasi-standard round trip", round_trip),
        ("base-case multiplier vanishes", base_case),
        ("rank-one criteria agree", rank_one_criterion),
        ("norm division round trip", norm_division),
        ("restriction consistency", restriction_consistency),
        ("signature engine", sylvester),
        ("symbolic-numeric agreement", numeric_agreement),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let t = start.elapsed();
        match res {
            Ok(detail) => println!("PASS {}. {name}: {detail} [{t:.2?}]", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {}. {name}: {detail} [{t:.2?}]", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
