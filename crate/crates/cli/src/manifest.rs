//! Motive manifests: TOML with `[base]`, `[motive]` and an optional `[task]`.
//!
//! ```toml
//! [base]
//! kind = "local"
//! q = 2
//! theta = "1 + pi"
//! precision = 64
//!
//! [motive]
//! rank = 1
//! pole = 0
//! matrix = [["t - theta"]]
//!
//! [task]
//! ell = "t"
//! class = ["theta^-4"]
//! tests = ["split", "torsion"]
//! ```

use serde::{Deserialize, Serialize};
use toml::Spanned;

use tmodels_core::extcalc::ExtClass;
use tmodels_core::motive::{GlobalMotive, LocalMotive, Motive, PolyMat};
use tmodels_core::tower::{Field, LocalField, RatFuncField, TPoly, DEFAULT_PRECISION};

use crate::error::CliError;
use crate::expr::{self, Env, Expr, ExprError, JValue};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BaseKind {
    /// `F_{q^d}((π))`.
    Local,
    /// `F_q(θ)`.
    Global,
}

fn one() -> u32 {
    1
}

fn is_one(d: &u32) -> bool {
    *d == 1
}

fn is_zero(p: &u32) -> bool {
    *p == 0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Base {
    pub kind: BaseKind,
    pub q: u64,
    /// Residue degree over `F_q` (local bases only).
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub degree: u32,
    /// `θ` as a series in `pi` (local bases only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<Spanned<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MotiveSection {
    pub rank: usize,
    /// `τ_M = j^{−pole}·matrix`.
    #[serde(default, skip_serializing_if = "is_zero")]
    pub pole: u32,
    pub matrix: Vec<Vec<Spanned<String>>>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Task {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub op: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ell: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<Vec<Spanned<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tests: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub base: Base,
    pub motive: MotiveSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub task: Option<Task>,
}

/// 1-based line and column of a byte offset.
fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(src.len());
    let before = &src[..offset];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

impl Manifest {
    pub fn parse(src: &str) -> Result<Self, CliError> {
        toml::from_str(src).map_err(|e| {
            let (line, column) = e.span().map_or((0, 0), |s| line_col(src, s.start));
            CliError::Parse {
                line,
                column,
                message: e.message().trim().to_string(),
            }
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("manifest is serializable")
    }
}

/// The manifest with its motive and class built.
pub enum Setup {
    Local {
        field: LocalField,
        motive: LocalMotive,
        class: Option<ExtClass<LocalField>>,
    },
    Global {
        field: RatFuncField,
        motive: GlobalMotive,
        class: Option<ExtClass<RatFuncField>>,
    },
}

impl Setup {
    pub fn precision(&self) -> i64 {
        match self {
            Setup::Local { field, .. } => field.precision(),
            Setup::Global { .. } => 0,
        }
    }
}

/// Parses an expression stored in a TOML string, locating errors in `src`.
fn parse_spanned(src: &str, s: &Spanned<String>) -> Result<Expr, CliError> {
    expr::parse(s.get_ref()).map_err(|e| locate(src, s, e))
}

fn locate(src: &str, s: &Spanned<String>, e: ExprError) -> CliError {
    let span = s.span();
    if span.is_empty() || span.end > src.len() {
        return CliError::Parse {
            line: 0,
            column: e.column,
            message: e.message,
        };
    }
    let inner = s.get_ref();
    let byte = inner
        .char_indices()
        .nth(e.column - 1)
        .map_or(inner.len(), |(b, _)| b);
    // Skip the opening quote.
    let (line, column) = line_col(src, span.start + 1 + byte);
    CliError::Parse {
        line,
        column,
        message: format!("in \"{}\": {}", inner, e.message),
    }
}

fn mentions(e: &Expr, name: &str) -> bool {
    match e {
        Expr::Num(_) => false,
        Expr::Var(v) => v == name,
        Expr::Neg(a) | Expr::Pow(a, _, _) => mentions(a, name),
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b, _) => {
            mentions(a, name) || mentions(b, name)
        }
    }
}

fn lift<K: Field>(k: &K, theta: &K::Elem, v: &JValue<K>, pole: u32) -> TPoly<K> {
    v.num.mul(k, &TPoly::j(k, theta).pow(k, pole - v.pole))
}

fn build<K: Field>(
    src: &str,
    m: &Manifest,
    field: K,
    env: &Env<'_, K>,
) -> Result<(Motive<K>, Option<ExtClass<K>>), CliError> {
    let sec = &m.motive;
    let r = sec.rank;
    if r == 0 || sec.matrix.len() != r || sec.matrix.iter().any(|row| row.len() != r) {
        return Err(CliError::Usage(format!("matrix must be {} x {}", r, r)));
    }
    let mut vals = Vec::with_capacity(r * r);
    for row in &sec.matrix {
        for s in row {
            let e = parse_spanned(src, s)?;
            vals.push(env.eval(&e).map_err(|err| locate(src, s, err))?);
        }
    }
    let extra = vals.iter().map(|v| v.pole).max().unwrap_or(0);
    let theta = env.theta;
    let n = PolyMat::from_fn(r, r, |a, b| lift(&field, theta, &vals[a * r + b], extra));
    let motive = Motive::new(field.clone(), theta.clone(), sec.pole + extra, n)?;
    let class = match m.task.as_ref().and_then(|t| t.class.as_ref()) {
        Some(entries) => Some(build_class(src, &motive, env, entries)?),
        None => None,
    };
    Ok((motive, class))
}

fn build_class<K: Field>(
    src: &str,
    motive: &Motive<K>,
    env: &Env<'_, K>,
    entries: &[Spanned<String>],
) -> Result<ExtClass<K>, CliError> {
    if entries.len() != motive.rank() {
        return Err(CliError::Usage(format!(
            "class needs {} entries, got {}",
            motive.rank(),
            entries.len()
        )));
    }
    let mut vals = Vec::with_capacity(entries.len());
    for s in entries {
        let e = parse_spanned(src, s)?;
        vals.push(env.eval(&e).map_err(|err| locate(src, s, err))?);
    }
    let pole = vals.iter().map(|v| v.pole).max().unwrap_or(0);
    let k = motive.field();
    let nums = vals.iter().map(|v| lift(k, env.theta, v, pole)).collect();
    Ok(ExtClass::iota(motive, pole, nums)?)
}

/// Builds the base field, `θ`, the motive and the class. `precision`
/// overrides the manifest value; class entries in `class` override the task.
pub fn load(
    src: &str,
    precision: Option<i64>,
    class: &[String],
) -> Result<(Manifest, Setup), CliError> {
    let mut m = Manifest::parse(src)?;
    if !class.is_empty() {
        let entries = class
            .iter()
            .map(|c| Spanned::new(0..0, c.clone()))
            .collect();
        m.task.get_or_insert_with(Task::default).class = Some(entries);
    }
    let prec = precision.or(m.base.precision).unwrap_or(DEFAULT_PRECISION);
    if prec <= 0 {
        return Err(CliError::Usage(String::from("precision must be positive")));
    }
    let setup = match m.base.kind {
        BaseKind::Local => {
            let field = LocalField::over(m.base.q, m.base.degree)
                .ok_or_else(|| {
                    CliError::Usage(format!("no field F_{}^{}", m.base.q, m.base.degree))
                })?
                .with_precision(prec);
            let theta_src = m
                .base
                .theta
                .as_ref()
                .ok_or_else(|| CliError::Usage(String::from("a local base needs theta")))?;
            let te = parse_spanned(src, theta_src)?;
            if mentions(&te, "theta") || mentions(&te, "t") {
                return Err(locate(
                    src,
                    theta_src,
                    ExprError {
                        column: 1,
                        message: String::from("theta must be a series in pi"),
                    },
                ));
            }
            let zero = field.zero();
            let pre = Env {
                field: &field,
                theta: &zero,
                pi: Some(field.pi()),
            };
            let theta = pre
                .eval_constant(&te)
                .map_err(|e| locate(src, theta_src, e))?;
            let env = Env {
                field: &field,
                theta: &theta,
                pi: Some(field.pi()),
            };
            let (motive, class) = build(src, &m, field.clone(), &env)?;
            Setup::Local {
                field,
                motive,
                class,
            }
        }
        BaseKind::Global => {
            if m.base.degree != 1 {
                return Err(CliError::Usage(String::from(
                    "a global base has residue degree 1",
                )));
            }
            if let Some(t) = &m.base.theta {
                if t.get_ref().trim() != "theta" {
                    return Err(CliError::Usage(String::from(
                        "over a global base theta is the generator",
                    )));
                }
            }
            let field = RatFuncField::new(m.base.q, "theta")
                .ok_or_else(|| CliError::Usage(format!("no field F_{}", m.base.q)))?;
            let theta = field.gen();
            let env = Env {
                field: &field,
                theta: &theta,
                pi: None,
            };
            let (motive, class) = build(src, &m, field.clone(), &env)?;
            Setup::Global {
                field,
                motive,
                class,
            }
        }
    };
    Ok((m, setup))
}

#[cfg(test)]
mod tests {
    use super::*;

    const CARLITZ: &str = r#"
[base]
kind = "local"
q = 2
theta = "1 + pi"
precision = 32

[motive]
rank = 1
matrix = [["t - theta"]]

[task]
ell = "t"
class = ["theta^-4"]
tests = ["split"]
"#;

    #[test]
    fn round_trip() {
        let m = Manifest::parse(CARLITZ).unwrap();
        let printed = m.to_toml();
        let again = Manifest::parse(&printed).unwrap();
        assert_eq!(m, again);
        assert_eq!(printed, again.to_toml());
    }

    #[test]
    fn builds_the_carlitz_motive() {
        let (_, setup) = load(CARLITZ, None, &[]).unwrap();
        let Setup::Local {
            motive,
            class,
            field,
        } = setup
        else {
            panic!("local")
        };
        assert_eq!(field.precision(), 32);
        assert_eq!(motive.certificate().1, 1);
        assert!(motive.is_effective());
        assert_eq!(class.unwrap().pole(), 0);
    }

    #[test]
    fn dual_via_pole() {
        let src = CARLITZ.replace("matrix = [[\"t - theta\"]]", "pole = 1\nmatrix = [[\"1\"]]");
        let (_, setup) = load(&src, None, &[]).unwrap();
        let Setup::Local { motive, .. } = setup else {
            panic!("local")
        };
        assert_eq!(motive.certificate().1, -1);
        assert_eq!(motive.pole_order(), 1);
    }

    #[test]
    fn errors_point_into_the_file() {
        let src = CARLITZ.replace("t - theta", "t - * theta");
        match load(&src, None, &[]) {
            Err(CliError::Parse { line, column, .. }) => {
                assert_eq!(line, 10);
                assert_eq!(column, 17);
            }
            other => panic!("expected a parse error, got {:?}", other.err()),
        }
        let src = CARLITZ.replace("rank = 1", "rank = ");
        assert!(matches!(
            load(&src, None, &[]),
            Err(CliError::Parse { line: 9, .. })
        ));
        let src = CARLITZ.replace("t - theta", "0");
        assert!(matches!(load(&src, None, &[]), Err(CliError::Core(_))));
    }
}
