//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Runs without the libtest harness so the lines are always shown.

use std::error::Error as StdError;
use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;
use std::time::Instant;

use etaforge_core::circle::{CircleOperator, CircleSymbol, Face};
use etaforge_core::eta::{
    dimension_functional_detailed, eta_jump_family, eta_numeric, DimensionResult, HeatScheme, JumpFamily, SpectrumModel,
};
use etaforge_core::index::{analytic_index, index_at, index_formula_residual, IndexConfig, SubspaceOperator};
use etaforge_core::kzn::{
    antipodal_action_check, calibration_sign, direct_image_s1, fractional_eta_analytic, fractional_eta_topological,
    gamma_trivialization, inverse_row_decomposition, mod_n_analytic_index, normal_form, winding_datum,
};
use etaforge_core::numeric::{c64, fractional_part, CMat, DyadicRational, ToleranceConfig};
use etaforge_core::subspaces::{image_subspace, orthocomplement, relative_index, rotation_homotopy, PdoSubspace};
use etaforge_core::suite;
use etaforge_core::torus::{forms_eta, orientability_halfinteger_check, TwistCharacter};
use etaforge_core::Execution;

type Check = Result<(bool, String), Box<dyn StdError>>;

const SEED: u64 = 1;

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn cfg() -> IndexConfig {
    IndexConfig::default()
}

/// Hurwitz ζ(s, a) by Euler–Maclaurin summation, valid for real s ≠ 1.
fn hurwitz_zeta(s: f64, a: f64) -> f64 {
    const B2J: [f64; 6] = [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0];
    let n = 30usize;
    let mut sum: f64 = (0..n).map(|k| (k as f64 + a).powf(-s)).sum();
    let x = n as f64 + a;
    sum += x.powf(1.0 - s) / (s - 1.0) + 0.5 * x.powf(-s);
    let mut rising = s;
    let mut fact = 2.0;
    for (j, b) in B2J.iter().enumerate() {
        let k = 2 * (j + 1);
        sum += b / fact * rising * x.powf(-s - k as f64 + 1.0);
        rising *= (s + k as f64 - 1.0) * (s + k as f64);
        fact *= ((k + 1) * (k + 2)) as f64;
    }
    sum
}

/// dim ker − dim ker* of z^k compressed to modes 0..=n, by explicit ranks.
fn toeplitz_rank_oracle(k: i64, n: usize) -> i64 {
    let rank = |shift: i64| {
        let rows = n + 1 + k.unsigned_abs() as usize;
        let mut m = CMat::zeros(rows, n + 1);
        for j in 0..=n as i64 {
            let i = j + shift;
            if i >= 0 {
                m[(i as usize, j as usize)] = c64(1.0, 0.0);
            }
        }
        m.singular_values().iter().filter(|&&s| s > 0.5).count()
    };
    (n + 1 - rank(k)) as i64 - (n + 1 - rank(-k)) as i64
}

fn exponential_op(k: i64) -> CircleOperator {
    CircleOperator::pdo(CircleSymbol::even(0, suite::exponential(k)))
}

struct Shared {
    suite: Vec<(String, Arc<PdoSubspace>)>,
    dims: Vec<(String, DimensionResult)>,
}

fn c1_eta_closed_form() -> Check {
    let mut worst: f64 = 0.0;
    for theta in [0.1, 0.25, 0.5, 0.9] {
        let model = SpectrumModel::arithmetic(theta, 1)?;
        let scheme = HeatScheme::for_model(&model, 2000.0);
        let eta = eta_numeric(&model, &scheme, Execution::default())?;
        let oracle = hurwitz_zeta(0.0, theta) - hurwitz_zeta(0.0, 1.0 - theta);
        worst = worst.max((eta.value - oracle).abs());
    }
    Ok((worst <= 1e-3, format!("max |eta - hurwitz| = {worst:.2e}")))
}

fn c2_toeplitz() -> Check {
    let hardy = Arc::new(PdoSubspace::hardy(tol()));
    let mut ok = true;
    let mut seen = Vec::new();
    for k in -3..=3i64 {
        let d = SubspaceOperator::new(exponential_op(k), hardy.clone(), hardy.clone())?;
        let oracle = toeplitz_rank_oracle(k, 40);
        let scales: Vec<i64> =
            [32, 64, 96].iter().map(|&n| index_at(&d, n, cfg().rank_tol)).collect::<Result<_, _>>()?;
        let ind = analytic_index(&d, &cfg())?;
        ok &= oracle == -k && ind == -k && scales.iter().all(|&v| v == -k);
        seen.push(ind);
    }
    Ok((ok, format!("indices for k = -3..3: {seen:?}")))
}

fn c3_relative(shared: &mut Shared) -> Check {
    let hardy = Arc::new(PdoSubspace::hardy(tol()));
    let full = suite::full_minus_modes(0, tol())?;
    let d_full = dimension_functional_detailed(&full, &cfg())?;
    let mut ok = true;
    let mut seen = Vec::new();
    for k in 0..=5i64 {
        let shifted = Arc::new(PdoSubspace::hardy_from(k, tol()));
        let ind = relative_index(&hardy, &shifted, &cfg())?;
        let lk = suite::full_minus_modes(k, tol())?;
        let even_ind = relative_index(&full, &lk, &cfg())?;
        let d_k = dimension_functional_detailed(&lk, &cfg())?;
        let diff = d_full.d - d_k.d;
        ok &= ind == k && even_ind == k && diff == DyadicRational::integer(k);
        seen.push((ind, diff.to_string()));
        shared.dims.push((format!("full_minus_{k}"), d_k));
    }
    shared.dims.push(("full_line".into(), d_full));
    Ok((ok, format!("(ind, d-difference) for k = 0..5: {seen:?}")))
}

fn c4_axioms(shared: &mut Shared) -> Check {
    let mut ok = true;
    let mut notes = Vec::new();
    for (name, l) in shared.suite.clone() {
        let d = dimension_functional_detailed(&l, &cfg())?;
        let perp = Arc::new(orthocomplement(&l)?);
        let dp = dimension_functional_detailed(&perp, &cfg())?;
        let complement = (d.d + dp.d) == DyadicRational::integer(0);
        let other = suite::relative_partner(&name, &l, tol())?;
        let d_other = dimension_functional_detailed(&other, &cfg())?;
        let ind = relative_index(&l, &other, &cfg())?;
        let relative = d.d - d_other.d == DyadicRational::integer(ind);
        if !(complement && relative) {
            notes.push(format!("{name}: d={} d_perp={} ind={ind} d_partner={}", d.d, dp.d, d_other.d));
        }
        ok &= complement && relative;
        shared.dims.push((name.clone(), d));
        shared.dims.push((format!("{name}_perp"), dp));
        shared.dims.push((format!("{name}_partner"), d_other));
    }
    let mut g = suite::rng(SEED, 40);
    let mut conj = 0;
    for i in 0..5 {
        let (name, l) = shared.suite[i % shared.suite.len()].clone();
        let u = suite::even_invertible(&mut g, l.rank(), tol())?;
        let image = Arc::new(image_subspace(&l, &u)?);
        let d = dimension_functional_detailed(&l, &cfg())?;
        let du = dimension_functional_detailed(&image, &cfg())?;
        if d.d == du.d {
            conj += 1;
        } else {
            notes.push(format!("{name}: d={} d(UL)={}", d.d, du.d));
        }
        shared.dims.push((format!("{name}_conj_{i}"), du));
    }
    ok &= conj == 5;
    let detail = format!("{} subspaces, complement and relative axioms, {conj}/5 conjugations", shared.suite.len());
    Ok((ok, if notes.is_empty() { detail } else { format!("{detail}; {}", notes.join("; ")) }))
}

fn c5_index_formula() -> Check {
    let mut g = suite::rng(SEED, 50);
    let examples = suite::index_formula_examples(&mut g, tol())?;
    let mut ok = true;
    let mut zero = 0;
    let mut rows = Vec::new();
    for (name, d) in &examples {
        let c = index_formula_residual(d, &cfg())?;
        if c.residual == DyadicRational::integer(0) {
            zero += 1;
        } else {
            ok = false;
        }
        rows.push(format!("{name}: ind={} ind~={} res={}", c.ind_d, c.ind_dtilde, c.residual));
    }
    Ok((ok && zero == examples.len(), format!("{zero}/{} zero residuals [{}]", examples.len(), rows.join(", "))))
}

fn c6_mod_n() -> Check {
    let t = tol();
    let s = calibration_sign()?;
    let mut ok = true;
    let mut counts = Vec::new();
    for n in [2u64, 3, 4, 8] {
        let mut g = suite::rng(SEED, 600 + n);
        let mut agree = 0;
        let mut stable = 0;
        for _ in 0..10 {
            let d = suite::modn_operator(&mut g, n, t)?;
            let lhs = direct_image_s1(&d.class(t.rank_tol)?)?;
            let rhs = mod_n_analytic_index(&d, &cfg())?;
            agree += usize::from(lhs == rhs);
            let (rows, cols) = (d.operator().operator().rows_rank(), d.operator().operator().cols_rank());
            let mut same = true;
            for _ in 0..20 {
                let p = suite::perturbation(&mut g, rows, cols);
                same &= mod_n_analytic_index(&d.perturbed(p)?, &cfg())? == rhs;
            }
            stable += usize::from(same);
        }
        ok &= agree == 10 && stable == 10;
        counts.push(format!("n={n}: {agree}/10 agree, {stable}/10 stable"));
    }
    Ok((ok, format!("calibration {s}; {}", counts.join(", "))))
}

fn c7_fractional(shared: &Shared) -> Check {
    let mut ok = true;
    let mut seen = Vec::new();
    for (name, l) in &shared.suite {
        let d = dimension_functional_detailed(l, &cfg())?.d;
        let top = fractional_eta_topological(l, &cfg())?;
        let ana = fractional_eta_analytic(l, &cfg())?;
        let frac = fractional_part(d);
        ok &= top.value == frac && ana.value == frac;
        seen.push(format!("{name}={}", top.value));
    }
    Ok((ok, format!("{{d}} per subspace: {}", seen.join(", "))))
}

fn c8_torus() -> Check {
    let mut g = suite::rng(SEED, 80);
    let mut thetas = vec![[0.0; 3], [1.0 / 3.0, 0.0, 0.0]];
    for _ in 0..2 {
        use rand::Rng;
        thetas.push([g.random_range(0.0..1.0), g.random_range(0.0..1.0), g.random_range(0.0..1.0)]);
    }
    let mut ok = true;
    let mut seen = Vec::new();
    for (i, theta) in thetas.iter().enumerate() {
        let r = forms_eta(TwistCharacter::new(*theta)?, 40.0, 1e-2, Execution::default())?;
        ok &= r.fractional == DyadicRational::integer(0);
        if i == 0 {
            ok &= r.deviation <= 1e-2;
        }
        seen.push(format!("{:.6}", r.numeric.value));
    }
    Ok((ok, format!("eta = [{}], all fractional parts 0", seen.join(", "))))
}

fn c9_orientability(shared: &Shared) -> Check {
    let values: Vec<DyadicRational> = shared.dims.iter().map(|(_, r)| r.d).collect();
    let half = orientability_halfinteger_check(&values);
    let bound = shared.dims.iter().all(|(_, r)| fractional_part(r.d).exponent() <= r.lift_order + 1);
    Ok((half && bound && !values.is_empty(), format!("{} values of d checked", values.len())))
}

fn c10_antipodal() -> Check {
    let mut g = suite::rng(SEED, 100);
    let mut good = 0;
    let mut seen = std::collections::BTreeSet::new();
    for i in 0..20 {
        let r = 1 + i % 3;
        let sigma = suite::elliptic_symbol(&mut g, r, 2);
        let full = PdoSubspace::full(r, tol());
        let w = winding_datum(&sigma, &full, 1, tol().rank_tol)?;
        let wa = winding_datum(&sigma.antipodal(), &full, 1, tol().rank_tol)?;
        let faces = antipodal_action_check(&sigma, tol().rank_tol)?;
        good += usize::from(wa == -w && faces);
        seen.insert(w);
    }
    Ok((good == 20, format!("{good}/20 symbols, winding data seen {seen:?}")))
}

fn c11_structure() -> Check {
    let t = tol();
    let mut notes = Vec::new();

    let mut g = suite::rng(SEED, 110);
    let mut defect: f64 = 0.0;
    let mut projections = vec![suite::mobius_symbol(t)?.projection().eval(Face::Plus, 0.7)];
    for _ in 0..4 {
        let l = suite::generic_framed(&mut g, 3, t)?;
        projections.push(l.symbol().projection().eval(Face::Minus, 1.9));
    }
    for p in &projections {
        for k in 0..50 {
            let phi = FRAC_PI_2 * k as f64 / 49.0;
            let q = rotation_homotopy(p, phi, t.rank_tol.sqrt())?;
            defect = defect.max((&q * &q - &q).norm());
        }
    }
    let p_ok = defect <= 1e-12;
    notes.push(format!("max |P^2 - P| = {defect:.1e}"));

    let mut preserved = 0;
    for _ in 0..10 {
        let e = suite::ell_zn_element(&mut g, t)?;
        let before = e.mod_n_index(&cfg())?;
        let nf = normal_form(&e, t.rank_tol)?;
        let after = nf.element.mod_n_index(&cfg())?;
        defect = defect.max(nf.projection_defect);
        preserved += usize::from(before == after && nf.element.is_simple());
    }
    let nf_ok = preserved == 10 && defect <= 1e-12;
    notes.push(format!("normal form {preserved}/10"));

    let mut worst: f64 = 0.0;
    let mut rows_ok = true;
    for n in [2u64, 3, 4, 8] {
        let d = suite::modn_operator(&mut g, n, t)?;
        let sigma = d.operator().symbol()?;
        match inverse_row_decomposition(&sigma, &sigma.adjoint(), d.base().symbol(), n as usize, 1e-10) {
            Ok(r) => worst = worst.max(r.sum_residual).max(r.delta_residual).max(r.idempotency),
            Err(_) => rows_ok = false,
        }
    }
    rows_ok &= worst <= 1e-10;
    notes.push(format!("row identities {worst:.1e}"));

    let mut gamma_ok = true;
    for n in [2usize, 3, 4, 8] {
        let path = gamma_trivialization(n)?;
        gamma_ok &= path.windings.iter().all(|&w| w == n as i64) && path.min_det > 0.0;
    }
    notes.push(format!("gamma windings constant: {gamma_ok}"));
    Ok((p_ok && nf_ok && rows_ok && gamma_ok, notes.join(", ")))
}

fn c12_jump() -> Check {
    let mut ok = true;
    let mut notes = Vec::new();
    for family in [JumpFamily::Odd, JumpFamily::Even] {
        let points = eta_jump_family(family, 32, Execution::default())?;
        let crossing = family.crossing();
        let before: Vec<i64> = points.iter().filter(|p| p.c < crossing).map(|p| p.eta_integer).collect();
        let after: Vec<i64> = points.iter().filter(|p| p.c > crossing).map(|p| p.eta_integer).collect();
        let constant = |v: &[i64]| !v.is_empty() && v.iter().all(|&x| x == v[0]);
        let jump = before[0] - after[0];
        let frac = points.iter().all(|p| p.fractional == points[0].fractional);
        ok &= constant(&before) && constant(&after) && jump == 2 && frac;
        notes.push(format!("{family:?}: {} -> {} (jump {jump})", before[0], after[0]));
    }
    Ok((ok, notes.join(", ")))
}

fn main() {
    let t0 = Instant::now();
    let mut shared = Shared { suite: Vec::new(), dims: Vec::new() };
    let mut failures = 0;
    let mut report = |id: usize, name: &str, result: Check, started: Instant| {
        let secs = started.elapsed().as_secs_f64();
        match result {
            Ok((true, detail)) => println!("criterion {id:>2} {name}: PASS ({detail}) [{secs:.1}s]"),
            Ok((false, detail)) => {
                failures += 1;
                println!("criterion {id:>2} {name}: FAIL ({detail}) [{secs:.1}s]");
            }
            Err(e) => {
                failures += 1;
                println!("criterion {id:>2} {name}: FAIL (error: {e}) [{secs:.1}s]");
            }
        }
    };
    match suite::even_subspace_suite(SEED, tol()) {
        Ok(s) => shared.suite = s,
        Err(e) => println!("even subspace suite could not be built: {e}"),
    }

    let s = Instant::now();
    report(1, "eta closed form vs heat extrapolation", c1_eta_closed_form(), s);
    let s = Instant::now();
    report(2, "Toeplitz indices", c2_toeplitz(), s);
    let s = Instant::now();
    report(3, "relative index", c3_relative(&mut shared), s);
    let s = Instant::now();
    report(4, "dimension functional axioms", c4_axioms(&mut shared), s);
    let s = Instant::now();
    report(5, "index formula", c5_index_formula(), s);
    let s = Instant::now();
    report(6, "mod-n index theorem", c6_mod_n(), s);
    let s = Instant::now();
    report(7, "fractional part of d", c7_fractional(&shared), s);
    let s = Instant::now();
    report(8, "eta of d delta - delta d on the 3-torus", c8_torus(), s);
    let s = Instant::now();
    report(9, "half-integrality and dyadic bound", c9_orientability(&shared), s);
    let s = Instant::now();
    report(10, "antipodal action on the winding datum", c10_antipodal(), s);
    let s = Instant::now();
    report(11, "normal form and trivialization structure", c11_structure(), s);
    let s = Instant::now();
    report(12, "eta jump along a crossing family", c12_jump(), s);

    println!("acceptance: {} of 12 criteria passed in {:.1}s", 12 - failures, t0.elapsed().as_secs_f64());
    if failures > 0 {
        std::process::exit(1);
    }
}
