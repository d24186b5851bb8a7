/// Bisection on `[a, b]` where `f(a)` and `f(b)` have opposite signs.
/// Runs to floating-point resolution and returns the abscissa with the
/// smallest |f| seen, together with that value.
pub(crate) fn bisect<F>(mut f: F, mut a: f64, mut b: f64, mut fa: f64) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    let mut best = (a, fa);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a.min(b) || m >= a.max(b) {
            break;
        }
        let fm = f(m);
        if fm.abs() <= best.1.abs() || best.1.is_nan() {
            best = (m, fm);
        }
        if fm == 0.0 || fm.is_nan() {
            break;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    best
}
