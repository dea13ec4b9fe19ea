//! Acceptance criteria 1–10. Prints one line per clause and one verdict line
//! per criterion; exits nonzero if any criterion fails.

use std::time::Instant;

use clap::Parser;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use slice_dirac::builtins::{builtin_stem, remark62_stem};
use slice_dirac::cauchy::{cauchy, cauchy_exterior, pompeiu, slice_cauchy, CauchyOptions};
use slice_dirac::dirac::{cf_check, check_ode_pair, quintic_pair, Derivatives};
use slice_dirac::fueter::{
    dirac_regularity_of_basis, fueter_sum_stem, kernel_derivative, laurent, taylor, CoefficientSource, MultiIndex,
    SeriesExpansion,
};
use slice_dirac::harness::{execute, Cli};
use slice_dirac::quadrature::QuadCounts;
use slice_dirac::stem::{recover_stem, represent, sample_point};
use slice_dirac::{
    cayley_dickson_mul, check_intrinsic, Frame64, Octonion64, QuaternionPair, R4Point64, RepMatrix, ShellSpec,
    SliceFunction,
};

type O = Octonion64;

struct Criterion {
    id: u32,
    title: &'static str,
    clauses: Vec<bool>,
}

impl Criterion {
    fn new(id: u32, title: &'static str) -> Self {
        Self { id, title, clauses: Vec::new() }
    }

    fn check(&mut self, name: &str, pass: bool, detail: String) {
        println!("    [{}] {name}: {detail}", if pass { "PASS" } else { "FAIL" });
        self.clauses.push(pass);
    }

    fn at_most(&mut self, name: &str, value: f64, tol: f64) {
        self.check(name, value <= tol, format!("{value:.3e} <= {tol:.0e}"));
    }

    fn finish(self) -> bool {
        let pass = self.clauses.iter().all(|&c| c);
        println!("criterion {:>2} {}: {}", self.id, if pass { "PASS" } else { "FAIL" }, self.title);
        pass
    }
}

fn unit_octonion(rng: &mut ChaCha8Rng) -> O {
    O::from_f64(std::array::from_fn(|_| rng.random_range(-1.0..1.0))).scale(1.0 / 8f64.sqrt())
}

fn slice(name: &str) -> SliceFunction<f64> {
    SliceFunction::new(builtin_stem(name).unwrap())
}

fn stem_dist(a: &[O; 4], b: &[O; 4]) -> f64 {
    (0..4).fold(0.0, |m: f64, k| m.max(a[k].dist(&b[k])))
}

fn criterion_1() -> bool {
    let mut c = Criterion::new(1, "octonion algebra laws");
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut r = [0.0f64; 4];
    for _ in 0..10_000 {
        let (x, y, z) = (unit_octonion(&mut rng), unit_octonion(&mut rng), unit_octonion(&mut rng));
        r[0] = r[0].max((x * (x * y)).dist(&((x * x) * y))).max(((y * x) * x).dist(&(y * (x * x))));
        r[1] = r[1]
            .max((z * (x * (z * y))).dist(&(((z * x) * z) * y)))
            .max((x * (z * (y * z))).dist(&(((x * z) * y) * z)))
            .max(((z * x) * (y * z)).dist(&((z * (x * y)) * z)));
        let s = x.norm() * y.norm();
        r[2] = r[2].max(((x * y).norm() - s).abs() / s);
        let p = cayley_dickson_mul(&QuaternionPair::from_octonion(&x), &QuaternionPair::from_octonion(&y), 1e-12).unwrap();
        r[3] = r[3].max(p.to_octonion().dist(&(x * y)));
    }
    let secs = start.elapsed().as_secs_f64();
    c.at_most("alternativity", r[0], 1e-12);
    c.at_most("Moufang identities", r[1], 1e-12);
    c.at_most("norm multiplicativity (relative)", r[2], 1e-12);
    c.at_most("Cayley-Dickson vs table product", r[3], 1e-12);
    c.check("runtime", secs < 5.0, format!("{secs:.2} s < 5 s"));
    c.finish()
}

fn criterion_2() -> bool {
    let mut c = Criterion::new(2, "representation formula");
    let stems = ["example44", "quintic", "identity", "constant:1,0,2,0,-1,0,0,0.5"];
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut rep, mut indep, mut orth) = (0.0f64, 0.0f64, 0.0f64);
    let unit = ShellSpec::unit_ball(Frame64::canonical());
    for t in 0..1000 {
        let f = slice(stems[t % stems.len()]);
        let (fa, fb, fp) = (Frame64::random(&mut rng), Frame64::random(&mut rng), Frame64::random(&mut rng));
        let x = sample_point(&mut rng, Some(&unit));
        let exact = f.eval(&fp.compose(&x)).unwrap();
        rep = rep.max(represent(&f, &fa, &x, &fp).unwrap().dist(&exact));
        indep = indep.max(stem_dist(&recover_stem(&f, &fa, &x).unwrap(), &recover_stem(&f, &fb, &x).unwrap()));
        orth = orth.max(RepMatrix::new(&fa).orthogonality_residual());
    }
    c.at_most("represent vs evalSlice, 1000 tuples in the unit ball", rep, 1e-10);
    c.at_most("M F(q) independent of the frame", indep, 1e-10);
    c.at_most("2M orthogonality", orth, 1e-12);
    c.finish()
}

fn criterion_3() -> bool {
    let mut c = Criterion::new(3, "regularity of the examples");
    for name in ["example44", "quintic"] {
        let r = cf_check(slice(name).stem(), 1000, 1e-10, 3, None, Derivatives::Auto).unwrap();
        c.at_most(&format!("{name} CF residual (analytic)"), r.max_residual, 1e-10);
    }
    let id = cf_check(slice("identity").stem(), 100, 1e-10, 3, None, Derivatives::Auto).unwrap();
    let row1 = id.worst.rows[0].max_abs();
    c.check("identity row-1 residual = 2", (row1 - 2.0).abs() <= 1e-12 && !id.pass, format!("{row1:.15}"));
    let ode = check_ode_pair(&quintic_pair::<f64>(), 1000, 1e-12, 3);
    c.at_most("quintic ODE pair, 1000 samples", ode.max_residual, 1e-12);
    c.finish()
}

fn points_in_ball(n: usize, radius: f64, seed: u64) -> Vec<R4Point64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let d: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
            let norm = d.iter().map(|v| v * v).sum::<f64>().sqrt();
            // half the points on the outer radius, the rest inside
            let r = if i % 2 == 0 { radius } else { radius * rng.random_range(0.1..1.0) };
            R4Point64::new(d.map(|v| v / norm * r))
        })
        .collect()
}

fn criterion_4() -> bool {
    let mut c = Criterion::new(4, "Cauchy formula");
    let frame = Frame64::canonical();
    let ball = ShellSpec::unit_ball(frame);
    let inner = points_in_ball(8, 0.8, 4);
    let outer: Vec<_> = points_in_ball(6, 1.0, 5).into_iter().map(|p| p.scale(1.5 / p.norm())).collect();
    let base = CauchyOptions::default();
    let fine = CauchyOptions::with_counts(QuadCounts::default().doubled());
    for name in ["example44", "quintic"] {
        let f = slice(name);
        let start = Instant::now();
        let (mut e1, mut e2) = (0.0f64, 0.0f64);
        for x in &inner {
            let exact = f.eval_in_frame(&frame, x);
            e1 = e1.max(cauchy(&f, &ball, x, &base).unwrap().dist(&exact));
            e2 = e2.max(cauchy(&f, &ball, x, &fine).unwrap().dist(&exact));
        }
        let secs = start.elapsed().as_secs_f64();
        let ext = outer.iter().fold(0.0f64, |m, x| m.max(cauchy_exterior(&f, &ball, x, &base).unwrap().norm()));
        c.at_most(&format!("{name} interior error, |q| <= 0.8, (24,24,48)"), e1, 1e-6);
        c.check(
            &format!("{name} doubled counts reduce error >= 10x"),
            e2 * 10.0 <= e1,
            format!("{e1:.3e} -> {e2:.3e}"),
        );
        c.at_most(&format!("{name} exterior |integral|, |q| >= 1.5"), ext, 1e-6);
        c.check(&format!("{name} sweep runtime"), secs < 30.0, format!("{secs:.2} s < 30 s"));
    }
    c.finish()
}

fn criterion_5() -> bool {
    let mut c = Criterion::new(5, "Cauchy-Pompeiu formula");
    let frame = Frame64::canonical();
    let ball = ShellSpec::unit_ball(frame);
    let f = slice("identity");
    let mut err = 0.0f64;
    for x in points_in_ball(6, 0.8, 4) {
        err = err.max(pompeiu(&f, &ball, &x, &CauchyOptions::default()).unwrap().value.dist(&f.eval_in_frame(&frame, &x)));
    }
    c.at_most("identity stem, boundary minus volume", err, 1e-5);
    c.finish()
}

fn criterion_6() -> bool {
    let mut c = Criterion::new(6, "slice Cauchy formula");
    let frame = Frame64::canonical();
    let ball = ShellSpec::unit_ball(frame);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for name in ["example44", "quintic"] {
        let f = slice(name);
        let mut err = 0.0f64;
        for x in points_in_ball(3, 0.8, 6) {
            let fp = Frame64::random(&mut rng);
            let v = slice_cauchy(&f, &ball, &x, &fp, &CauchyOptions::default()).unwrap();
            err = err.max(v.dist(&f.eval(&fp.compose(&x)).unwrap()));
        }
        c.at_most(&format!("{name} reconstruction at a second frame"), err, 1e-5);
    }
    c.finish()
}

fn criterion_7() -> bool {
    let mut c = Criterion::new(7, "Fueter basis");
    let sum = fueter_sum_stem::<f64>(2).unwrap();
    let listed = remark62_stem::<f64>();
    let mut diff = 0.0f64;
    let mut ratio = Vec::new();
    for k in 0..4 {
        let (a, b) = (&sum.components()[k], &listed.components()[k]);
        for (e, cb) in b.terms() {
            let ca = a.coefficient(e);
            diff = diff.max(ca.dist(cb));
            ratio.push(cb.re() / ca.re());
        }
        for (e, ca) in a.terms() {
            diff = diff.max(ca.dist(&b.coefficient(e)));
        }
    }
    ratio.dedup();
    c.check(
        "sum of P_a over |a| = 2 equals the listed polynomials",
        diff <= 1e-12,
        format!("max coefficient difference {diff:.3e} (listed / computed = {ratio:?})"),
    );
    let intr = check_intrinsic(&sum, 200, 1e-12, 7, None).unwrap();
    c.check("its F0 fails the compatibility check", !intr.pass, format!("residual {:.3e}", intr.max_residual));

    let mut dp = 0.0f64;
    for alpha in MultiIndex::up_to(4) {
        let r = dirac_regularity_of_basis(alpha, 20, 7).unwrap();
        dp = dp.max(r.polynomial_left);
    }
    c.at_most("D P_a finite-difference residual, |a| <= 4", dp, 1e-8);

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut hom = 0.0f64;
    for alpha in MultiIndex::up_to(3) {
        let v = kernel_derivative::<f64>(alpha).unwrap();
        let n = alpha.order() as i32;
        for _ in 0..20 {
            let x: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
            let lambda = rng.random_range(0.5..3.0);
            let lhs = v.eval(&x.map(|t| t * lambda)).unwrap();
            let rhs = v.eval(&x).unwrap().scale(lambda.powi(-n - 3));
            hom = hom.max((lhs - rhs).max_abs() / rhs.max_abs());
        }
    }
    c.at_most("V_a homogeneity of degree -n-3 (relative), |a| <= 3", hom, 1e-11);
    c.finish()
}

fn lattice(per_axis: usize, half: f64) -> Vec<R4Point64> {
    let t = |i: usize| -half + 2.0 * half * i as f64 / (per_axis - 1) as f64;
    let mut out = Vec::new();
    for a in 0..per_axis {
        for b in 0..per_axis {
            for c in 0..per_axis {
                for d in 0..per_axis {
                    out.push(R4Point64::new([t(a), t(b), t(c), t(d)]));
                }
            }
        }
    }
    out
}

fn max_residual(s: &SeriesExpansion<f64>, f: &SliceFunction<f64>, pts: &[R4Point64]) -> f64 {
    pts.iter().fold(0.0f64, |m, x| m.max(s.eval(x).unwrap().dist(&f.eval_in_frame(&s.frame, x))))
}

fn criterion_8() -> bool {
    let mut c = Criterion::new(8, "Taylor expansion");
    let ball = ShellSpec::unit_ball(Frame64::canonical());
    let f = slice("quintic");
    let grid = lattice(6, 0.45);
    let analytic = taylor(&f, &ball, 5, CoefficientSource::Analytic).unwrap();
    let boundary = taylor(&f, &ball, 5, CoefficientSource::Boundary(QuadCounts::default())).unwrap();
    let n = grid.len();
    c.at_most(&format!("degree 5, analytic coefficients, {n}-point grid"), max_residual(&analytic, &f, &grid), 1e-8);
    c.at_most(&format!("degree 5, boundary coefficients, {n}-point grid"), max_residual(&boundary, &f, &grid), 1e-4);
    let r4 = max_residual(&analytic.truncated(4), &f, &grid);
    c.check("degree 4 truncation is visible", r4 > 1e-3, format!("{r4:.3e} > 1e-3"));
    c.finish()
}

fn criterion_9() -> bool {
    let mut c = Criterion::new(9, "Laurent expansion");
    let frame = Frame64::canonical();
    let shell = ShellSpec::shell(frame, O::zero(), 0.5, 2.0).unwrap();
    let counts = QuadCounts::default();
    let grid: Vec<_> = lattice(7, 1.6).into_iter().filter(|p| (0.875..=1.625).contains(&p.norm())).collect();

    let v = slice("kernelV").with_domain(shell);
    let s = laurent(&v, &shell, 4, &counts).unwrap();
    let n = grid.len();
    c.at_most(&format!("f = V, N = 4, {n}-point mid-shell grid"), max_residual(&s, &v, &grid), 1e-4);
    let a_max = s.regular.iter().fold(0.0f64, |m, a| m.max(a.norm()));
    c.at_most("f = V, all |A_a|", a_max, 1e-6);

    let q = slice("quintic");
    let s = laurent(&q, &shell, 4, &counts).unwrap();
    let t = taylor(&q, &ShellSpec::ball(frame, O::zero(), 2.0).unwrap(), 4, CoefficientSource::Analytic).unwrap();
    let b_max = s.principal.iter().fold(0.0f64, |m, b| m.max(b.norm()));
    let a_diff = s.regular.iter().zip(&t.regular).fold(0.0f64, |m, (a, b)| m.max(a.dist(b)));
    c.at_most("quintic, all |B_a|", b_max, 1e-6);
    c.at_most("quintic, A_a vs Taylor coefficients", a_diff, 1e-6);
    c.finish()
}

fn run_suite(dir: &std::path::Path) -> Vec<(String, Vec<u8>)> {
    let p = |name: &str| dir.join(name).display().to_string();
    let runs: Vec<Vec<String>> = vec![
        vec!["verify-algebra".into(), "--out".into(), p("algebra.json")],
        vec!["verify-stem".into(), "--stem".into(), "quintic".into(), "--out".into(), p("stem.json")],
        vec!["verify-dirac".into(), "--stem".into(), "quintic".into(), "--out".into(), p("dirac.json")],
        vec!["cauchy".into(), "--stem".into(), "example44".into(), "--out".into(), p("cauchy.csv")],
        vec![
            "taylor".into(),
            "--stem".into(),
            "quintic".into(),
            "--coefficients".into(),
            "boundary".into(),
            "--out".into(),
            p("taylor.csv"),
            "--coef-out".into(),
            p("taylor_coef.csv"),
            "--manifest-out".into(),
            p("taylor_manifest.json"),
        ],
        vec!["laurent".into(), "--out".into(), p("laurent.csv"), "--coef-out".into(), p("laurent_coef.csv")],
    ];
    for args in runs {
        let cli = Cli::try_parse_from(std::iter::once("slice-dirac".to_string()).chain(args.iter().cloned())).unwrap();
        assert_eq!(execute(&cli), 0, "{args:?}");
    }
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

fn criterion_10() -> bool {
    let mut c = Criterion::new(10, "determinism");
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let (ra, rb) = (run_suite(a.path()), run_suite(b.path()));
    c.check("same report files", ra.len() == rb.len() && ra.len() == 9, format!("{} files", ra.len()));
    for ((na, da), (_, db)) in ra.iter().zip(&rb) {
        c.check(&format!("{na} bitwise identical"), da == db, format!("{} bytes", da.len()));
    }
    c.finish()
}

fn main() {
    let criteria: [fn() -> bool; 10] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
        criterion_10,
    ];
    let failed: Vec<usize> = criteria.iter().enumerate().filter(|(_, f)| !f()).map(|(i, _)| i + 1).collect();
    if failed.is_empty() {
        println!("acceptance: all criteria pass");
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}

