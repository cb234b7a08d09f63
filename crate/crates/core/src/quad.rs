//! Adaptive Gauss-Kronrod quadrature.
//!
//! This is the independent oracle for the closed-form dephasing kernels: it
//! never calls into [`crate::dephasing`], only into the raw covariance
//! functions handed to it. 15-point Kronrod / 7-point Gauss pairs on a
//! worst-segment-first subdivision.

/// Kronrod-15 abscissae (non-negative half, descending).
const XGK: [f64; 8] = [
    0.991_455_371_120_813,
    0.949_107_912_342_759,
    0.864_864_423_359_769,
    0.741_531_185_599_394,
    0.586_087_235_467_691,
    0.405_845_151_377_397,
    0.207_784_955_007_898,
    0.000_000_000_000_000,
];

/// Kronrod-15 weights matching `XGK`.
const WGK: [f64; 8] = [
    0.022_935_322_010_529,
    0.063_092_092_629_979,
    0.104_790_010_322_250,
    0.140_653_259_715_525,
    0.169_004_726_639_267,
    0.190_350_578_064_785,
    0.204_432_940_075_298,
    0.209_482_141_084_728,
];

/// Embedded Gauss-7 weights (for `XGK[1], XGK[3], XGK[5], XGK[7]`).
const WG: [f64; 4] = [
    0.129_484_966_168_870,
    0.279_705_391_489_277,
    0.381_830_050_505_119,
    0.417_959_183_673_469,
];

/// QUADPACK-style conservative error rescaling: inflate small raw defects by
/// the `(200 e / resasc)^{3/2}` rule so deceptively converged panels still
/// get subdivided.
fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

/// One Kronrod-15 panel on `[a, b]`: returns (integral, error estimate).
fn qk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let half_abs = half.abs();

    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    let mut res_abs = WGK[7] * fc.abs();
    let mut values = [[0.0f64; 2]; 7];

    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        values[j] = [f1, f2];
        kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = kronrod * 0.5;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((values[j][0] - mean).abs() + (values[j][1] - mean).abs());
    }

    let integral = kronrod * half;
    let err = rescale_error((kronrod - gauss) * half, res_abs * half_abs, res_asc * half_abs);
    (integral, err)
}

#[derive(Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

const MAX_SEGMENTS: usize = 4096;

/// Subdivide the worst segment until the summed error estimate drops below
/// `target` (or the segment budget runs out).
fn adapt<F: Fn(f64) -> f64>(f: &F, segments: &mut Vec<Segment>, target: f64) {
    loop {
        let total_err: f64 = segments.iter().map(|s| s.error).sum();
        if total_err <= target || segments.len() >= MAX_SEGMENTS {
            return;
        }
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .unwrap();
        let seg = segments.swap_remove(worst);
        let mid = 0.5 * (seg.a + seg.b);
        for (lo, hi) in [(seg.a, mid), (mid, seg.b)] {
            let (value, error) = qk15(f, lo, hi);
            segments.push(Segment { a: lo, b: hi, value, error });
        }
    }
}

fn split_all<F: Fn(f64) -> f64>(f: &F, segments: &[Segment]) -> Vec<Segment> {
    let mut out = Vec::with_capacity(2 * segments.len());
    for seg in segments {
        let mid = 0.5 * (seg.a + seg.b);
        for (lo, hi) in [(seg.a, mid), (mid, seg.b)] {
            let (value, error) = qk15(f, lo, hi);
            out.push(Segment { a: lo, b: hi, value, error });
        }
    }
    out
}

/// Adaptive integral of `f` over `[a, b]` to absolute tolerance `tol`.
///
/// Returns `(value, error_estimate)`. Panel error estimates alone can be
/// deceived by kinked integrands, so convergence is additionally validated
/// by a full refinement pass: the result is accepted only once halving every
/// segment moves the total by less than `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    if a == b {
        return (0.0, 0.0);
    }
    const INITIAL_PANELS: usize = 8;
    let h = (b - a) / INITIAL_PANELS as f64;
    let mut segments: Vec<Segment> = (0..INITIAL_PANELS)
        .map(|i| {
            let lo = a + i as f64 * h;
            let hi = if i == INITIAL_PANELS - 1 { b } else { a + (i + 1) as f64 * h };
            let (value, error) = qk15(&f, lo, hi);
            Segment { a: lo, b: hi, value, error }
        })
        .collect();

    let mut target = 0.5 * tol;
    loop {
        adapt(&f, &mut segments, target);
        let coarse: f64 = segments.iter().map(|s| s.value).sum();
        let refined = split_all(&f, &segments);
        let fine: f64 = refined.iter().map(|s| s.value).sum();
        let defect = (fine - coarse).abs();
        let est: f64 = refined.iter().map(|s| s.error).sum();
        if defect <= tol || refined.len() >= MAX_SEGMENTS {
            return (fine, defect.max(est));
        }
        segments = refined;
        target *= 0.25;
    }
}

/// Double time integral of a stationary even covariance over the square
/// `[0, T]^2`, reduced to `2 * Integral_0^T (T - tau) c(tau) dtau`.
pub fn double_time_integral_even<F: Fn(f64) -> f64>(c: F, t_final: f64, tol: f64) -> f64 {
    if t_final == 0.0 {
        return 0.0;
    }
    integrate(|tau| (t_final - tau) * c(tau), 0.0, t_final, tol).0 * 2.0
}

/// True iterated double integral of `f(t, s)` over `[0, T]^2` (outer adaptive
/// in `t`, inner adaptive in `s`). Slower than the stationary reduction but
/// makes no evenness assumption.
pub fn iterated_square_integral<F: Fn(f64, f64) -> f64>(f: F, t_final: f64, tol: f64) -> f64 {
    if t_final == 0.0 {
        return 0.0;
    }
    let inner_tol = tol / (10.0 * t_final.max(1.0));
    integrate(
        |t| integrate(|s| f(t, s), 0.0, t_final, inner_tol).0,
        0.0,
        t_final,
        tol,
    )
    .0
}

/// Adaptive integral of a complex-valued integrand (real and imaginary parts
/// integrated independently).
pub fn integrate_complex<F: Fn(f64) -> crate::C64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
) -> crate::C64 {
    let re = integrate(|x| f(x).re, a, b, tol).0;
    let im = integrate(|x| f(x).im, a, b, tol).0;
    crate::C64::new(re, im)
}
