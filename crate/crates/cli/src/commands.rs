//! The `inspect`, `model`, `polygons` and `ext` commands.

use tmodels_core::extcalc::{
    default_torsion_bound, has_good_reduction_ell, is_integral, is_regulated, is_split, is_torsion,
};
use tmodels_core::global::{bad_places, is_integral_global, maximal_r_model};
use tmodels_core::motive::local::{
    has_good_reduction, maximal_good_model_motive_with, maximal_o_model_with,
    reduce_mod_ell_n_unchecked,
};
use tmodels_core::motive::{EllContext, LocalMotive, Motive, DEFAULT_BLOCK, DEFAULT_N_MAX};
use tmodels_core::tower::{poly, Field, LocalField, TPoly};

use crate::error::CliError;
use crate::expr::parse_fq_poly;
use crate::manifest::{load, Manifest, Setup};
use crate::report::{verdict, Report};

pub const TESTS: [&str; 5] = [
    "split",
    "torsion",
    "integral",
    "good-reduction",
    "regulated",
];

/// Flags shared by the manifest commands.
#[derive(Clone, Debug, Default)]
pub struct Options {
    pub ell: Option<String>,
    pub n_max: Option<u32>,
    pub precision: Option<i64>,
    pub class: Vec<String>,
    pub tests: Vec<String>,
}

fn render_vec<K: Field>(k: &K, v: &[TPoly<K>]) -> String {
    let parts: Vec<String> = v.iter().map(|p| p.render(k)).collect();
    format!("({})", parts.join(", "))
}

fn describe<K: Field>(r: &mut Report, m: &Motive<K>) {
    let k = m.field();
    let (c, n) = m.certificate();
    r.push("rank", m.rank());
    r.push("pole_order", m.pole_order());
    r.push("certificate", format!("({}, {})", k.render(c), n));
    r.push("effective", if m.is_effective() { "yes" } else { "no" });
    r.push("tau", m.render());
}

fn base_line(m: &Manifest, setup: &Setup) -> String {
    match setup {
        Setup::Local { field, motive, .. } => format!(
            "F_{}((pi)) with theta = {}",
            field.residue_field().q(),
            field.render(motive.theta())
        ),
        Setup::Global { .. } => format!("F_{}(theta)", m.base.q),
    }
}

pub fn inspect(src: &str, o: &Options) -> Result<Report, CliError> {
    let (m, setup) = load(src, o.precision, &o.class)?;
    let mut r = Report::new("inspect");
    r.push("base", base_line(&m, &setup));
    match &setup {
        Setup::Local { field, motive, .. } => {
            r.push("precision", field.precision());
            describe(&mut r, motive);
        }
        Setup::Global { field, motive, .. } => {
            describe(&mut r, motive);
            let places: Vec<String> = bad_places(motive)
                .iter()
                .map(|p| poly::render(field.base(), p, "theta"))
                .collect();
            r.push("bad_places", format!("[{}]", places.join(", ")));
        }
    }
    Ok(r)
}

fn ell_source<'a>(m: &'a Manifest, o: &'a Options) -> Option<&'a str> {
    o.ell
        .as_deref()
        .or(m.task.as_ref().and_then(|t| t.ell.as_deref()))
}

fn n_max(m: &Manifest, o: &Options) -> u32 {
    o.n_max
        .or(m.task.as_ref().and_then(|t| t.n_max))
        .unwrap_or(DEFAULT_N_MAX)
}

/// The requested `ℓ`, unchecked, or `None` when none was given.
fn requested_ell(
    m: &Manifest,
    o: &Options,
    motive: &LocalMotive,
) -> Result<Option<EllContext>, CliError> {
    let Some(s) = ell_source(m, o) else {
        return Ok(None);
    };
    let q = motive.field().residue_field().base().q();
    let ell = parse_fq_poly(s, q).map_err(|e| CliError::Parse {
        line: 0,
        column: e.column,
        message: e.message,
    })?;
    Ok(Some(EllContext::unchecked(motive, ell)?))
}

/// `ℓ` satisfying `C_ℓ`: the requested one, or the default.
fn working_ell(m: &Manifest, o: &Options, motive: &LocalMotive) -> Result<EllContext, CliError> {
    match requested_ell(m, o, motive)? {
        Some(ctx) if ctx.cl_holds() => Ok(ctx),
        Some(ctx) => Err(CliError::Usage(format!(
            "condition C_ell fails for ell = {}",
            ctx.render()
        ))),
        None => Ok(EllContext::default_for(motive)?),
    }
}

pub fn model(src: &str, o: &Options) -> Result<Report, CliError> {
    let (m, setup) = load(src, o.precision, &o.class)?;
    let mut r = Report::new("model");
    r.push("base", base_line(&m, &setup));
    match &setup {
        Setup::Local { field, motive, .. } => {
            r.push("precision", field.precision());
            let nm = n_max(&m, o);
            let ctx = match requested_ell(&m, o, motive)? {
                Some(bad) if !bad.cl_holds() => {
                    // The level-one Frobenius space still exists; its model
                    // need not be M_O/ℓM_O.
                    r.push("ell", bad.render());
                    r.push("condition_cl", "no");
                    let v = reduce_mod_ell_n_unchecked(motive, &bad, 1)?;
                    r.push(
                        "level1_integral_model",
                        v.maximal_integral_model()?.render(),
                    );
                    EllContext::default_for(motive)?
                }
                Some(ctx) => ctx,
                None => EllContext::default_for(motive)?,
            };
            r.push("model_ell", ctx.render());
            let mo = maximal_o_model_with(motive, &ctx, DEFAULT_BLOCK, nm)?;
            r.push("integral_model", mo.render());
            r.push("integral_model_level", mo.level);
            let mg = maximal_good_model_motive_with(motive, &ctx, DEFAULT_BLOCK, nm)?;
            r.push("good_model", mg.render());
            let good = has_good_reduction(motive, &ctx)?;
            r.push("good_reduction", if good { "yes" } else { "no" });
        }
        Setup::Global { field, motive, .. } => {
            let gm = maximal_r_model(motive)?;
            r.push("integral_model", gm.render(field));
            for l in &gm.local {
                r.push(
                    format!("place {}", l.place.render(field)),
                    format!(
                        "{} (ell = {}, precision {})",
                        l.model.render(),
                        l.ctx.render(),
                        l.place.field().precision()
                    ),
                );
            }
        }
    }
    Ok(r)
}

pub fn polygons(src: &str, o: &Options) -> Result<Report, CliError> {
    let (m, setup) = load(src, o.precision, &o.class)?;
    let mut r = Report::new("polygons");
    r.push("base", base_line(&m, &setup));
    fn body<K: Field>(r: &mut Report, motive: &Motive<K>, prec: i64) -> Result<(), CliError> {
        let h = motive.hodge_polygon()?;
        r.push("hodge_weights", format!("{:?}", h.weights));
        r.push("hodge_vertices", format!("{:?}", h.vertices));
        let w = motive.weights(prec)?;
        let ws: Vec<String> = w.iter().map(|s| s.to_string()).collect();
        r.push("weights", format!("[{}]", ws.join(", ")));
        r.push("weights_precision", prec);
        Ok(())
    }
    match &setup {
        Setup::Local { field, motive, .. } => body(&mut r, motive, field.precision().min(32))?,
        Setup::Global { motive, .. } => body(
            &mut r,
            motive,
            m.base.precision.or(o.precision).unwrap_or(24),
        )?,
    }
    Ok(r)
}

fn tests_of(m: &Manifest, o: &Options) -> Result<Vec<String>, CliError> {
    let tests = if !o.tests.is_empty() {
        o.tests.clone()
    } else {
        m.task
            .as_ref()
            .and_then(|t| t.tests.clone())
            .unwrap_or_else(|| TESTS.iter().map(|s| s.to_string()).collect())
    };
    for t in &tests {
        if !TESTS.contains(&t.as_str()) {
            return Err(CliError::Usage(format!(
                "unknown test '{}'; expected one of {}",
                t,
                TESTS.join(", ")
            )));
        }
    }
    Ok(tests)
}

pub fn ext(src: &str, o: &Options) -> Result<Report, CliError> {
    let (m, setup) = load(src, o.precision, &o.class)?;
    let tests = tests_of(&m, o)?;
    let mut r = Report::new("ext");
    r.push("base", base_line(&m, &setup));
    match &setup {
        Setup::Local {
            field,
            motive,
            class,
        } => {
            let x = class
                .as_ref()
                .ok_or_else(|| CliError::Usage(String::from("no class given")))?;
            r.push("precision", field.precision());
            r.push("class", x.render());
            for t in &tests {
                local_test(&mut r, &m, o, field, motive, x, t)?;
            }
        }
        Setup::Global { field, class, .. } => {
            let x = class
                .as_ref()
                .ok_or_else(|| CliError::Usage(String::from("no class given")))?;
            r.push("class", x.render());
            for t in &tests {
                match t.as_str() {
                    "regulated" => {
                        let d = is_regulated(x);
                        r.push("regulated", verdict(&d));
                        if d.is_unknown() {
                            r.saw_unknown();
                        }
                    }
                    "integral" => {
                        let d = is_integral_global(x);
                        r.push("integral", verdict(&d));
                        if let Some(w) = d.witness() {
                            let parts: Vec<String> = w.iter().map(|p| p.render(field)).collect();
                            r.push("integral.witness", format!("({})", parts.join(", ")));
                        }
                        if d.is_unknown() {
                            r.saw_unknown();
                        }
                    }
                    other => {
                        return Err(CliError::Usage(format!(
                            "test '{}' needs a local base",
                            other
                        )))
                    }
                }
            }
        }
    }
    Ok(r)
}

fn local_test(
    r: &mut Report,
    m: &Manifest,
    o: &Options,
    e: &LocalField,
    motive: &LocalMotive,
    x: &tmodels_core::extcalc::ExtClass<LocalField>,
    test: &str,
) -> Result<(), CliError> {
    let unknown = match test {
        "split" => {
            let d = is_split(x);
            r.push("split", verdict(&d));
            if let Some(w) = d.witness() {
                r.push("split.witness", render_vec(e, w));
            }
            d.is_unknown()
        }
        "torsion" => {
            let bound = default_torsion_bound(motive);
            let d = is_torsion(x, bound);
            r.push("torsion", verdict(&d));
            r.push("torsion.degree_bound", bound);
            if let Some(a) = d.witness() {
                r.push("torsion.annihilator", a.a.render(e));
                r.push("torsion.witness", render_vec(e, &a.xi));
            }
            d.is_unknown()
        }
        "integral" => {
            let ctx = working_ell(m, o, motive)?;
            let d = is_integral(x, &ctx);
            r.push("integral", verdict(&d));
            r.push("integral.ell", ctx.render());
            if let Some(w) = d.witness() {
                r.push("integral.witness", render_vec(e, w));
            }
            d.is_unknown()
        }
        "good-reduction" => {
            let ctx = working_ell(m, o, motive)?;
            let levels = n_max(m, o).min(8);
            let v = has_good_reduction_ell(x, &ctx, levels);
            let text = match &v.decision {
                tmodels_core::Decision::Yes(n) => format!("yes (levels 1..={})", n),
                d => verdict(d),
            };
            r.push("good-reduction", text);
            r.push("good-reduction.ell", ctx.render());
            if v.best_effort {
                r.push(
                    "good-reduction.note",
                    "motive is not effective; per-level test is best effort",
                );
            }
            v.decision.is_unknown()
        }
        "regulated" => {
            let d = is_regulated(x);
            r.push("regulated", verdict(&d));
            d.is_unknown()
        }
        _ => unreachable!("tests are validated"),
    };
    if unknown {
        r.saw_unknown();
    }
    Ok(())
}
