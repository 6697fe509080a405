//! Validation suites: finite-difference checks of the variation formulas, gauge
//! invariance under reparameterization and the kernel of `Ψ`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geom::{CurveScalarField, FlagGeometry, ParameterizedFlag, ScalarField};
use crate::linalg::Vec3;
use crate::metrics::{
    apply_reparameterization, flag_metric, psi_project, DeformationField, FlagWeights, FourierReparam,
};
use crate::variations::{check_curve_variation, check_surface_variation, default_epsilon};

/// Pass thresholds for [`run_all`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub curve_variation: f64,
    pub normal_variation: f64,
    pub normal_identity: f64,
    pub shape_operator: f64,
    pub gauge: f64,
    pub kernel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            curve_variation: 1e-4,
            normal_variation: 1e-4,
            normal_identity: 1e-12,
            shape_operator: 1e-4,
            gauge: 1e-3,
            kernel: 1e-18,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ValidateOptions {
    /// Finite-difference step; `None` picks [`default_epsilon`].
    pub eps: Option<f64>,
    pub tolerances: Tolerances,
    pub seed: u64,
    pub gauge_trials: usize,
    pub kernel_trials: usize,
    pub weights: FlagWeights<f64>,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        Self {
            eps: None,
            tolerances: Tolerances::default(),
            seed: 0,
            gauge_trials: 10,
            kernel_trials: 100,
            weights: FlagWeights::default(),
        }
    }
}

/// One measured quantity against its threshold.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    pub fn new(suite: &'static str, name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self {
            suite,
            name: name.into(),
            value,
            tolerance,
            passed: value <= tolerance,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub eps: f64,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// Largest measured value of one suite.
    pub fn worst(&self, suite: &str) -> Option<f64> {
        self.checks
            .iter()
            .filter(|c| c.suite == suite)
            .map(|c| c.value)
            .reduce(f64::max)
    }
}

/// Curve speed pairs `(name, h₁, h₂|_C)` exercised by the curve-variation suite.
fn curve_speeds(
    flag: &ParameterizedFlag<f64>,
) -> Vec<(&'static str, CurveScalarField<f64>, CurveScalarField<f64>)> {
    let n = flag.n_u();
    vec![
        (
            "h1=1,h2=0",
            CurveScalarField::constant(n, 1.0),
            CurveScalarField::constant(n, 0.0),
        ),
        (
            "h1=0,h2=1",
            CurveScalarField::constant(n, 0.0),
            CurveScalarField::constant(n, 1.0),
        ),
        (
            "h1=0.5sin(u)+0.2,h2=1+0.3cos(2u)",
            CurveScalarField::from_fn(flag, |u, _| 0.5 * u.sin() + 0.2),
            CurveScalarField::from_fn(flag, |u, _| 1.0 + 0.3 * (2.0 * u).cos()),
        ),
        (
            "h1=cos(3u),h2=sin(u)",
            CurveScalarField::from_fn(flag, |u, _| (3.0 * u).cos()),
            CurveScalarField::from_fn(flag, |u, _| u.sin()),
        ),
    ]
}

/// Surface speeds `h₂` exercised by the normal-variation and shape-operator suites.
pub fn surface_speeds(flag: &ParameterizedFlag<f64>) -> Vec<(&'static str, ScalarField<f64>)> {
    vec![
        ("const", ScalarField::constant(flag, 1.0)),
        ("z", ScalarField::from_fn(flag, |_, _, p| p.z)),
        (
            "sin(2u)sin(v)",
            ScalarField::from_fn(flag, |u, v, _| (2.0 * u).sin() * v.sin()),
        ),
    ]
}

pub fn curve_variation_suite(
    geom: &FlagGeometry<f64>,
    flag: &ParameterizedFlag<f64>,
    eps: f64,
    tol: f64,
) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (name, h1, h2) in curve_speeds(flag) {
        let c = check_curve_variation(geom, &h1, &h2, eps)?;
        out.push(Check::new(
            "curve_variation",
            format!("delta_r {name}"),
            c.speed.max_rel,
            tol,
        ));
        out.push(Check::new(
            "curve_variation",
            format!("delta_t {name}"),
            c.tangent.max_rel,
            tol,
        ));
    }
    Ok(out)
}

pub fn normal_variation_suite(
    geom: &FlagGeometry<f64>,
    flag: &ParameterizedFlag<f64>,
    eps: f64,
    tol: &Tolerances,
) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (name, h) in surface_speeds(flag) {
        let c = check_surface_variation(flag, &geom.surface, &h, eps)?;
        out.push(Check::new(
            "normal_variation",
            format!("|dnu|^2 vs |grad h|^2, h={name}"),
            c.normal_norm.max_rel,
            tol.normal_variation,
        ));
        out.push(Check::new(
            "normal_identity",
            format!("fixed-g identity, h={name}"),
            c.normal_norm_algebraic.max_rel,
            tol.normal_identity,
        ));
    }
    Ok(out)
}

pub fn shape_operator_suite(
    geom: &FlagGeometry<f64>,
    flag: &ParameterizedFlag<f64>,
    eps: f64,
    tol: f64,
) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (name, h) in surface_speeds(flag) {
        let c = check_surface_variation(flag, &geom.surface, &h, eps)?;
        out.push(Check::new(
            "shape_operator",
            format!("g^-1 dg + 2hL, h={name}"),
            c.shape_operator.max_rel,
            tol,
        ));
    }
    Ok(out)
}

fn random_vec<R: Rng + ?Sized>(rng: &mut R, s: f64) -> Vec3<f64> {
    Vec3::new(rng.gen_range(-s..s), rng.gen_range(-s..s), rng.gen_range(-s..s))
}

/// A smooth random ambient vector field `X(p) = Σ_k a_k sin(⟨w_k, p⟩ + φ_k)`.
#[derive(Clone, Debug)]
pub struct RandomAmbientField {
    terms: Vec<(Vec3<f64>, Vec3<f64>, f64)>,
}

impl RandomAmbientField {
    pub fn new<R: Rng + ?Sized>(rng: &mut R, terms: usize) -> Self {
        let terms = (0..terms)
            .map(|_| {
                let a = random_vec(rng, 1.0);
                let w = random_vec(rng, 2.0);
                (a, w, rng.gen_range(0.0..std::f64::consts::TAU))
            })
            .collect();
        Self { terms }
    }

    pub fn eval(&self, p: Vec3<f64>) -> Vec3<f64> {
        self.terms.iter().fold(Vec3::zero(), |acc, (a, w, phi)| {
            acc + *a * (w.dot(&p) + phi).sin()
        })
    }

    pub fn sample(&self, flag: &ParameterizedFlag<f64>) -> DeformationField<f64> {
        DeformationField::from_fn(flag, |_, _, p| self.eval(p))
    }
}

/// Largest relative change of `G(Ψ(X))` over random equator-preserving
/// reparameterizations, `X` a random ambient field evaluated on the moved samples.
pub fn gauge_suite(
    flag: &ParameterizedFlag<f64>,
    weights: &FlagWeights<f64>,
    seed: u64,
    trials: usize,
    tol: f64,
) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let geom = FlagGeometry::new(flag)?;
    let v_eq = flag.v(flag.equator_row());
    let mut out = Vec::with_capacity(trials);
    for trial in 0..trials {
        let x = RandomAmbientField::new(&mut rng, 3);
        let gamma = FourierReparam::random(&mut rng, v_eq, 3);
        let base = flag_metric(&geom, &psi_project(&geom, &x.sample(flag))?, weights)?;
        let moved = apply_reparameterization(flag, &gamma)?;
        let mg = FlagGeometry::new(&moved)?;
        let value = flag_metric(&mg, &psi_project(&mg, &x.sample(&moved))?, weights)?;
        let rel = (value - base).abs() / base.abs().max(f64::MIN_POSITIVE);
        out.push(Check::new("gauge", format!("trial {trial}"), rel, tol));
    }
    Ok(out)
}

/// A random field tangent to the surface whose restriction to the curve is
/// tangent to the curve: `a F_u + b sin(v − v_c) F_v` with smooth random `a`, `b`.
pub fn random_vertical_field<R: Rng + ?Sized>(
    rng: &mut R,
    flag: &ParameterizedFlag<f64>,
    geom: &FlagGeometry<f64>,
) -> DeformationField<f64> {
    let modes = 3;
    let mut coeffs = || -> Vec<[f64; 4]> {
        (0..=modes)
            .map(|_| std::array::from_fn(|_| rng.gen_range(-1.0..1.0)))
            .collect()
    };
    let ca = coeffs();
    let cb = coeffs();
    let eval = |c: &[[f64; 4]], u: f64, v: f64| -> f64 {
        c.iter()
            .enumerate()
            .map(|(k, w)| {
                let k = k as f64;
                (w[0] * (k * u).cos() + w[1] * (k * u).sin()) * (w[2] + w[3] * (k * v).cos())
            })
            .sum()
    };
    let v_eq = flag.v(flag.equator_row());
    let n_u = flag.n_u();
    let mut vectors = vec![Vec3::zero(); flag.points().len()];
    for r in 0..flag.n_interior_rows() {
        let v = flag.v(r + 1);
        for i in 0..n_u {
            let u = flag.u(i);
            let k = r * n_u + i;
            let a = eval(&ca, u, v);
            let b = eval(&cb, u, v) * (v - v_eq).sin();
            vectors[n_u + k] = geom.surface.f_u[k] * a + geom.surface.f_v[k] * b;
        }
    }
    DeformationField::new(n_u, flag.n_v(), vectors).expect("layout matches the flag")
}

/// `G(Ψ(X)) / G(ν)` for random vertical fields `X`.
pub fn kernel_suite(
    flag: &ParameterizedFlag<f64>,
    weights: &FlagWeights<f64>,
    seed: u64,
    trials: usize,
    tol: f64,
) -> Result<Vec<Check>> {
    let geom = FlagGeometry::new(flag)?;
    let mut normal = vec![Vec3::zero(); flag.points().len()];
    normal[flag.n_u()..flag.n_u() + geom.surface.len()].copy_from_slice(&geom.surface.normal);
    let nu = DeformationField::new(flag.n_u(), flag.n_v(), normal)?;
    let reference = flag_metric(&geom, &psi_project(&geom, &nu)?, weights)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let x = random_vertical_field(&mut rng, flag, &geom);
        let g = flag_metric(&geom, &psi_project(&geom, &x)?, weights)?;
        worst = worst.max(g / reference);
    }
    Ok(vec![Check::new(
        "kernel",
        format!("max G(Psi(X))/G(nu) over {trials} vertical fields"),
        worst,
        tol,
    )])
}

/// Runs every suite on one flag.
pub fn run_all(flag: &ParameterizedFlag<f64>, opts: &ValidateOptions) -> Result<ValidationReport> {
    let geom = FlagGeometry::new(flag)?;
    let eps = opts.eps.unwrap_or_else(|| default_epsilon(&geom));
    let tol = &opts.tolerances;
    let mut checks = curve_variation_suite(&geom, flag, eps, tol.curve_variation)?;
    checks.extend(normal_variation_suite(&geom, flag, eps, tol)?);
    checks.extend(shape_operator_suite(&geom, flag, eps, tol.shape_operator)?);
    checks.extend(gauge_suite(
        flag,
        &opts.weights,
        opts.seed,
        opts.gauge_trials,
        tol.gauge,
    )?);
    checks.extend(kernel_suite(
        flag,
        &opts.weights,
        opts.seed,
        opts.kernel_trials,
        tol.kernel,
    )?);
    Ok(ValidationReport { eps, checks })
}
