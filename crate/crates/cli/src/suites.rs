//! Row generators for each command. Examples are drawn sequentially from
//! seeded streams; the expensive evaluations then run through the execution
//! policy, and the report sorts the rows afterwards.

use std::sync::Arc;

use etaforge_core::eta::{
    dimension_functional_detailed, eta_closed_form, eta_jump_family, eta_numeric, HeatScheme, JumpFamily, SpectrumModel,
};
use etaforge_core::index::{analytic_index, index_formula_residual, relative_index, IndexConfig, SubspaceOperator};
use etaforge_core::kzn::{
    antipodal_action_check, calibration_sign, direct_image_s1, fractional_eta_analytic, fractional_eta_topological,
    gamma_trivialization, inverse_row_decomposition, mod_n_analytic_index, normal_form, winding_datum, ModNOperator,
};
use etaforge_core::numeric::{fractional_part, DyadicRational, ToleranceConfig};
use etaforge_core::subspaces::{image_subspace, orthocomplement, PdoSubspace};
use etaforge_core::suite::{self, SuiteRng};
use etaforge_core::torus::{forms_eta, orientability_halfinteger_check, TwistCharacter};
use etaforge_core::{circle::CircleOperator, circle::CircleSymbol, Execution, Result};
use rand::Rng;

use crate::config::{Model, RunConfig};
use crate::report::Row;

const ETA: &str = "eta-functional";
const TORUS: &str = "torus-forms";
const INDEX: &str = "subspace-index";
const DIM: &str = "dimension-functional";
const KZN: &str = "k-zn";

// stream ids, one per randomized suite
const S_TWIST: u64 = 80;
const S_FORMULA: u64 = 50;
const S_CONJ: u64 = 40;
const S_MODN: u64 = 600;
const S_ANTIPODAL: u64 = 100;
const S_NORMAL: u64 = 110;

struct Ctx {
    seed: u64,
    tol: ToleranceConfig,
    index: IndexConfig,
    exec: Execution,
}

impl Ctx {
    fn new(cfg: &RunConfig) -> Self {
        let t = &cfg.tolerances;
        let tol = ToleranceConfig { rank_tol: t.rank_tol, eig_tol: t.eig_tol, eta_tol: t.eta_tol };
        let index = IndexConfig { rank_tol: t.rank_tol, ..IndexConfig::default() }.with_base(cfg.run.truncation);
        Ctx { seed: cfg.run.seed, tol, index, exec: Execution::default() }
    }

    fn rng(&self, stream: u64) -> SuiteRng {
        suite::rng(self.seed, stream)
    }
}

fn row_or_error(r: Result<Row>, fallback: impl FnOnce() -> crate::report::RowBuilder) -> Row {
    r.unwrap_or_else(|e| fallback().error(e))
}

pub fn eta(cfg: &RunConfig, models: &[Model]) -> Vec<Row> {
    let ctx = Ctx::new(cfg);
    let mut rows = Vec::new();
    if models.contains(&Model::S1) {
        rows.extend(arithmetic_rows(cfg, &ctx));
        rows.extend(jump_rows(cfg, &ctx));
    }
    if models.contains(&Model::T3) {
        rows.extend(torus_rows(cfg, &ctx));
    }
    rows
}

fn arithmetic_rows(cfg: &RunConfig, ctx: &Ctx) -> Vec<Row> {
    let tol = cfg.tolerances.eta_tol;
    cfg.eta
        .thetas
        .iter()
        .map(|&theta| {
            let id = format!("theta={theta}");
            let start = || Row::new(ETA, "arithmetic_closed_form", "criterion-1", id.clone());
            let r = (|| {
                let model = SpectrumModel::arithmetic(theta, 1)?;
                let scheme = HeatScheme::for_model(&model, cfg.eta.lambda_max);
                let numeric = eta_numeric(&model, &scheme, ctx.exec)?;
                let closed = eta_closed_form(&model)?;
                Ok(start().close(numeric.value, closed.value, tol))
            })();
            row_or_error(r, start)
        })
        .collect()
}

fn jump_rows(cfg: &RunConfig, ctx: &Ctx) -> Vec<Row> {
    let mut rows = Vec::new();
    for family in [JumpFamily::Odd, JumpFamily::Even] {
        let id = format!("{family:?}").to_lowercase();
        let jump = || Row::new(ETA, "spectral_flow_jump", "criterion-12", id.clone());
        let frac = || Row::new(ETA, "fractional_constant", "criterion-12", id.clone());
        match eta_jump_family(family, cfg.run.truncation, ctx.exec) {
            Ok(points) => {
                let crossing = family.crossing();
                let side = |before: bool| -> Vec<i64> {
                    points.iter().filter(|p| (p.c < crossing) == before).map(|p| p.eta_integer).collect()
                };
                let (before, after) = (side(true), side(false));
                let flat = |v: &[i64]| v.iter().all(|&x| x == v[0]);
                let constant = flat(&before) && flat(&after);
                let size = before[0] - after[0];
                rows.push(jump().holds(constant && size == 2, format!("{} -> {}", before[0], after[0]), "jump 2"));
                let f0 = points[0].fractional;
                let same = points.iter().all(|p| p.fractional == f0);
                rows.push(frac().holds(same, f0, "constant"));
            }
            Err(e) => {
                rows.push(jump().error(&e));
                rows.push(frac().error(e));
            }
        }
    }
    rows
}

fn twists(cfg: &RunConfig, ctx: &Ctx) -> Vec<[f64; 3]> {
    let mut out = vec![cfg.twist.theta];
    let mut g = ctx.rng(S_TWIST);
    for _ in 0..cfg.twist.random {
        out.push([g.random_range(0.0..1.0), g.random_range(0.0..1.0), g.random_range(0.0..1.0)]);
    }
    out
}

fn torus_rows(cfg: &RunConfig, ctx: &Ctx) -> Vec<Row> {
    let thetas = twists(cfg, ctx);
    let results = ctx.exec.map(&thetas, |theta| {
        TwistCharacter::new(*theta)
            .and_then(|t| forms_eta(t, cfg.eta.cutoff, cfg.tolerances.eta_tol, Execution::Sequential))
    });
    let mut rows = Vec::new();
    for (theta, r) in thetas.iter().zip(results) {
        let id = format!("theta=({:.6},{:.6},{:.6})", theta[0], theta[1], theta[2]);
        let frac = || Row::new(TORUS, "fractional_part", "criterion-8", id.clone());
        let close = || Row::new(TORUS, "closed_form", "criterion-8", id.clone());
        match r {
            Ok(g) => {
                rows.push(frac().equal(g.fractional, DyadicRational::ZERO));
                rows.push(close().close(g.numeric.value, g.closed_form.value, cfg.tolerances.eta_tol));
            }
            Err(e) => {
                rows.push(frac().error(&e));
                rows.push(close().error(e));
            }
        }
    }
    rows
}

pub fn index(cfg: &RunConfig) -> Vec<Row> {
    let ctx = Ctx::new(cfg);
    let mut rows = Vec::new();
    let hardy = Arc::new(PdoSubspace::hardy(ctx.tol));

    let ks: Vec<i64> = (-3..=3).collect();
    let toeplitz = ctx.exec.map(&ks, |&k| {
        let op = CircleOperator::pdo(CircleSymbol::even(0, suite::exponential(k)));
        SubspaceOperator::new(op, hardy.clone(), hardy.clone()).and_then(|d| analytic_index(&d, &ctx.index))
    });
    for (k, r) in ks.iter().zip(toeplitz) {
        let start = || Row::new(INDEX, "toeplitz_index", "criterion-2", format!("k={k}"));
        rows.push(match r {
            Ok(ind) => start().equal(ind, -k),
            Err(e) => start().error(e),
        });
    }

    let shifts: Vec<i64> = (0..=5).collect();
    let relative =
        ctx.exec.map(&shifts, |&k| relative_index(&hardy, &Arc::new(PdoSubspace::hardy_from(k, ctx.tol)), &ctx.index));
    for (k, r) in shifts.iter().zip(relative) {
        let start = || Row::new(INDEX, "relative_index", "criterion-3", format!("hardy_shift_{k}"));
        rows.push(match r {
            Ok(ind) => start().equal(ind, k),
            Err(e) => start().error(e),
        });
    }

    let mut g = ctx.rng(S_FORMULA);
    match suite::index_formula_examples(&mut g, ctx.tol) {
        Ok(examples) => {
            let checks = ctx.exec.map(&examples, |(_, d)| index_formula_residual(d, &ctx.index));
            for ((name, _), c) in examples.iter().zip(checks) {
                let start = || Row::new(INDEX, "index_formula_residual", "criterion-5", name.clone());
                rows.push(match c {
                    Ok(c) => start().equal(c.residual, DyadicRational::ZERO),
                    Err(e) => start().error(e),
                });
            }
        }
        Err(e) => rows.push(Row::new(INDEX, "index_formula_residual", "criterion-5", "examples").error(e)),
    }

    rows.extend(dimension_rows(&ctx));
    rows
}

fn dimension_rows(ctx: &Ctx) -> Vec<Row> {
    let mut rows = Vec::new();
    for k in 0..=5i64 {
        let start = || Row::new(DIM, "relative_index_axiom", "criterion-3", format!("full_minus_{k}"));
        let r = (|| {
            let full = suite::full_minus_modes(0, ctx.tol)?;
            let lk = suite::full_minus_modes(k, ctx.tol)?;
            let ind = relative_index(&full, &lk, &ctx.index)?;
            let diff =
                dimension_functional_detailed(&full, &ctx.index)?.d - dimension_functional_detailed(&lk, &ctx.index)?.d;
            Ok(start().holds(ind == k && diff == DyadicRational::integer(k), format!("ind={ind} d-diff={diff}"), k))
        })();
        rows.push(row_or_error(r, start));
    }

    let members = match suite::even_subspace_suite(ctx.seed, ctx.tol) {
        Ok(m) => m,
        Err(e) => {
            rows.push(Row::new(DIM, "suite", "criterion-4", "even_suite").error(e));
            return rows;
        }
    };
    let axioms = ctx.exec.map(&members, |(name, l)| -> Result<(Row, Row)> {
        let d = dimension_functional_detailed(l, &ctx.index)?.d;
        let dp = dimension_functional_detailed(&Arc::new(orthocomplement(l)?), &ctx.index)?.d;
        let complement = Row::new(DIM, "complement", "criterion-4", name.clone()).equal(d + dp, DyadicRational::ZERO);
        let other = suite::relative_partner(name, l, ctx.tol)?;
        let ind = relative_index(l, &other, &ctx.index)?;
        let d_other = dimension_functional_detailed(&other, &ctx.index)?.d;
        let relative = Row::new(DIM, "relative_index_axiom", "criterion-4", name.clone()).equal(d - d_other, ind);
        Ok((complement, relative))
    });
    for ((name, _), r) in members.iter().zip(axioms) {
        match r {
            Ok((a, b)) => rows.extend([a, b]),
            Err(e) => rows.push(Row::new(DIM, "axioms", "criterion-4", name.clone()).error(e)),
        }
    }

    let mut g = ctx.rng(S_CONJ);
    for i in 0..5 {
        let (name, l) = &members[i % members.len()];
        let start = || Row::new(DIM, "conjugation_invariance", "criterion-4", format!("{name}_conj_{i}"));
        let r = (|| {
            let u = suite::even_invertible(&mut g, l.rank(), ctx.tol)?;
            let image = Arc::new(image_subspace(l, &u)?);
            let d = dimension_functional_detailed(l, &ctx.index)?.d;
            Ok(start().equal(dimension_functional_detailed(&image, &ctx.index)?.d, d))
        })();
        rows.push(row_or_error(r, start));
    }
    rows
}

pub fn modn(cfg: &RunConfig) -> Vec<Row> {
    let ctx = Ctx::new(cfg);
    let mut rows = Vec::new();
    let start = || Row::new(KZN, "calibration", "criterion-6", "shift_generator");
    rows.push(match calibration_sign() {
        Ok(s) => start().holds(s.abs() == 1, s, "±1"),
        Err(e) => start().error(e),
    });

    struct Draw {
        id: String,
        op: ModNOperator,
        perturbations: Vec<CircleOperator>,
    }
    for &n in &cfg.run.moduli {
        let mut g = ctx.rng(S_MODN + n);
        let mut draws = Vec::new();
        for i in 0..cfg.modn.operators {
            let id = format!("n={n}/op_{i:02}");
            match suite::modn_operator(&mut g, n, ctx.tol) {
                Ok(op) => {
                    let inner = op.operator().operator();
                    let (r, c) = (inner.rows_rank(), inner.cols_rank());
                    let perturbations =
                        (0..cfg.modn.perturbations).map(|_| suite::perturbation(&mut g, r, c)).collect();
                    draws.push(Draw { id, op, perturbations });
                }
                Err(e) => rows.push(Row::new(KZN, "index_theorem", "criterion-6", id).error(e)),
            }
        }
        let results = ctx.exec.map(&draws, |d| -> Result<(u64, u64, usize)> {
            let lhs = direct_image_s1(&d.op.class(ctx.tol.rank_tol)?)?;
            let rhs = mod_n_analytic_index(&d.op, &ctx.index)?;
            let mut same = 0;
            for p in &d.perturbations {
                same += usize::from(mod_n_analytic_index(&d.op.perturbed(p.clone())?, &ctx.index)? == rhs);
            }
            Ok((lhs, rhs, same))
        });
        for (d, r) in draws.iter().zip(results) {
            let theorem = || Row::new(KZN, "index_theorem", "criterion-6", d.id.clone());
            let stable = || Row::new(KZN, "perturbation_invariance", "criterion-6", d.id.clone());
            match r {
                Ok((lhs, rhs, same)) => {
                    rows.push(theorem().equal(lhs, rhs));
                    rows.push(stable().equal(same, d.perturbations.len()));
                }
                Err(e) => {
                    rows.push(theorem().error(&e));
                    rows.push(stable().error(e));
                }
            }
        }
    }
    rows.extend(structure_rows(cfg, &ctx));
    rows
}

fn structure_rows(cfg: &RunConfig, ctx: &Ctx) -> Vec<Row> {
    let mut rows = Vec::new();
    for &n in &cfg.run.moduli {
        let start = || Row::new(KZN, "gamma_winding", "criterion-11", format!("n={n}"));
        rows.push(match gamma_trivialization(n as usize) {
            Ok(p) => {
                let ok = p.windings.iter().all(|&w| w == n as i64) && p.min_det > 0.0;
                start().holds(ok, format!("{:?}", p.windings), n)
            }
            Err(e) => start().error(e),
        });
    }

    let mut g = ctx.rng(S_NORMAL);
    for i in 0..10 {
        let start = || Row::new(KZN, "normal_form_index", "criterion-11", format!("element_{i:02}"));
        let r = (|| {
            let e = suite::ell_zn_element(&mut g, ctx.tol)?;
            let before = e.mod_n_index(&ctx.index)?;
            let nf = normal_form(&e, ctx.tol.rank_tol)?;
            let after = nf.element.mod_n_index(&ctx.index)?;
            let ok = before == after && nf.element.is_simple() && nf.projection_defect <= 1e-12;
            Ok(start().holds(ok, after, before))
        })();
        rows.push(row_or_error(r, start));
    }

    for &n in &cfg.run.moduli {
        let start = || Row::new(KZN, "inverse_rows", "criterion-11", format!("n={n}"));
        let r = (|| {
            let d = suite::modn_operator(&mut g, n, ctx.tol)?;
            let sigma = d.operator().symbol()?;
            let dec = inverse_row_decomposition(&sigma, &sigma.adjoint(), d.base().symbol(), n as usize, 1e-10)?;
            let worst = dec.sum_residual.max(dec.delta_residual).max(dec.idempotency);
            Ok(start().holds(worst <= 1e-10, format!("{worst:.1e}"), "1e-10"))
        })();
        rows.push(row_or_error(r, start));
    }
    rows
}

pub fn fractional(cfg: &RunConfig) -> Vec<Row> {
    let ctx = Ctx::new(cfg);
    let mut rows = Vec::new();
    let members = match suite::even_subspace_suite(ctx.seed, ctx.tol) {
        Ok(m) => m,
        Err(e) => return vec![Row::new(KZN, "suite", "criterion-7", "even_suite").error(e)],
    };
    let results = ctx.exec.map(&members, |(_, l)| -> Result<_> {
        let d = dimension_functional_detailed(l, &ctx.index)?;
        let top = fractional_eta_topological(l, &ctx.index)?;
        let ana = fractional_eta_analytic(l, &ctx.index)?;
        Ok((d, top, ana))
    });
    let mut values = Vec::new();
    for ((name, _), r) in members.iter().zip(results) {
        let top = || Row::new(KZN, "fractional_topological", "criterion-7", name.clone());
        let ana = || Row::new(KZN, "fractional_analytic", "criterion-7", name.clone());
        let bound = || Row::new(DIM, "dyadic_bound", "criterion-9", name.clone());
        match r {
            Ok((d, t, a)) => {
                let frac = fractional_part(d.d);
                rows.push(top().equal(t.value, frac));
                rows.push(ana().equal(a.value, frac));
                let exponent = frac.exponent();
                rows.push(bound().holds(exponent <= d.lift_order + 1, exponent, d.lift_order + 1));
                values.push(d.d);
            }
            Err(e) => {
                rows.push(top().error(&e));
                rows.push(ana().error(e));
            }
        }
    }
    let rendered: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    rows.push(Row::new(DIM, "half_integer", "criterion-9", "even_suite").holds(
        orientability_halfinteger_check(&values),
        rendered.join(" "),
        "2d integral",
    ));

    let mut g = ctx.rng(S_ANTIPODAL);
    for i in 0..20 {
        let r = 1 + i % 3;
        let start = || Row::new(KZN, "antipodal_winding", "criterion-10", format!("symbol_{i:02}"));
        let sigma = suite::elliptic_symbol(&mut g, r, 2);
        let res = (|| {
            let full = PdoSubspace::full(r, ctx.tol);
            let w = winding_datum(&sigma, &full, 1, ctx.tol.rank_tol)?;
            let wa = winding_datum(&sigma.antipodal(), &full, 1, ctx.tol.rank_tol)?;
            let faces = antipodal_action_check(&sigma, ctx.tol.rank_tol)?;
            Ok(start().holds(faces && wa == -w, wa, -w))
        })();
        rows.push(row_or_error(res, start));
    }
    rows
}
