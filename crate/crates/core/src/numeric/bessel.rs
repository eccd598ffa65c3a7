/// Bessel function of the first kind `J_n(x)` for integer order.
///
/// Miller's backward recurrence started well above `max(n, |x|)`, normalised
/// with `J_0 + 2 * sum_k J_2k = 1`. Stable for every real argument; absolute
/// error is at the level of a few ulps of 1.
pub fn bessel_j(n: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let sign = if x < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
    let ax = x.abs();
    let top = (n as f64).max(ax);
    let mut start = (1.1 * top + 40.0 + 10.0 * top.sqrt()) as usize;
    if start % 2 == 1 {
        start += 1;
    }

    const RESCALE: f64 = 1e250;
    let mut above = 0.0; // J_{k+1}
    let mut current = 1e-300; // J_k at k = start
    let mut norm = 2.0 * current; // start is even
    let mut wanted = if n as usize == start { current } else { 0.0 };

    for k in (1..=start).rev() {
        let below = 2.0 * k as f64 / ax * current - above;
        above = current;
        current = below;
        let idx = k - 1;
        if current.abs() > RESCALE {
            current /= RESCALE;
            above /= RESCALE;
            norm /= RESCALE;
            wanted /= RESCALE;
        }
        if idx == n as usize {
            wanted = current;
        }
        if idx > 0 && idx % 2 == 0 {
            norm += 2.0 * current;
        }
    }
    norm += current;
    sign * wanted / norm
}
