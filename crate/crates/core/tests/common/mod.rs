//! Independent oracles shared by the integration tests and the acceptance run.
#![allow(dead_code)]

use num_complex::Complex64;

// ---------------------------------------------------------------------------
// double-double arithmetic

#[derive(Clone, Copy, Debug)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    Dd {
        hi: s,
        lo: b - (s - a),
    }
}

impl Dd {
    pub fn from(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }
    pub fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        quick_two_sum(s, e + self.lo + o.lo)
    }
    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
    pub fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }
    pub fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p);
        quick_two_sum(p, e + self.hi * o.lo + self.lo * o.hi)
    }
    pub fn div_f64(self, d: f64) -> Dd {
        let q = self.hi / d;
        let p = q * d;
        let e = q.mul_add(d, -p);
        let r = (self.hi - p - e + self.lo) / d;
        quick_two_sum(q, r)
    }
}

#[derive(Clone, Copy, Debug)]
struct CDd {
    re: Dd,
    im: Dd,
}

impl CDd {
    fn mul(self, o: CDd) -> CDd {
        CDd {
            re: self.re.mul(o.re).sub(self.im.mul(o.im)),
            im: self.re.mul(o.im).add(self.im.mul(o.re)),
        }
    }
    fn add(self, o: CDd) -> CDd {
        CDd {
            re: self.re.add(o.re),
            im: self.im.add(o.im),
        }
    }
    fn div_f64(self, d: f64) -> CDd {
        CDd {
            re: self.re.div_f64(d),
            im: self.im.div_f64(d),
        }
    }
    fn norm_hi(self) -> f64 {
        self.re.hi.hypot(self.im.hi)
    }
}

/// 2/sqrt(pi) as a double-double.
const TWO_OVER_SQRT_PI: Dd = Dd {
    hi: 1.128_379_167_095_512_6,
    lo: 1.533_545_961_316_588e-17,
};

/// Maclaurin series of erf summed in double-double precision until the terms
/// drop below 1e-34 of the running sum. Accurate to ~1e-15 relative for
/// |z| <= 6.
pub fn erf_series_dd(z: Complex64) -> Complex64 {
    if z == Complex64::new(0.0, 0.0) {
        return z;
    }
    let zd = CDd {
        re: Dd::from(z.re),
        im: Dd::from(z.im),
    };
    let z2 = zd.mul(zd);
    let neg_z2 = CDd {
        re: z2.re.neg(),
        im: z2.im.neg(),
    };
    let mut power = zd;
    let mut sum = zd;
    let mut n = 1usize;
    loop {
        power = power.mul(neg_z2).div_f64(n as f64);
        let term = power.div_f64((2 * n + 1) as f64);
        sum = sum.add(term);
        if term.norm_hi() < 1e-34 * sum.norm_hi().max(1e-300) && n > 4 {
            break;
        }
        n += 1;
        assert!(n < 10_000, "series oracle did not converge at {z}");
    }
    let k = CDd {
        re: TWO_OVER_SQRT_PI,
        im: Dd::from(0.0),
    };
    let r = sum.mul(k);
    Complex64::new(r.re.hi + r.re.lo, r.im.hi + r.im.lo)
}

/// Plain f64 Maclaurin series with a fixed number of terms.
pub fn erf_series_f64(z: Complex64, terms: usize) -> Complex64 {
    let mut power = z;
    let mut sum = z;
    for n in 1..terms {
        power = power * (-z * z) / n as f64;
        sum += power / (2 * n + 1) as f64;
    }
    sum * std::f64::consts::FRAC_2_SQRT_PI
}

/// Asymptotic expansion
/// `erfc(z) ~ e^{-z^2}/(z sqrt(pi)) sum_k (-1)^k (2k-1)!! / (2 z^2)^k`,
/// truncated before the smallest term, for Re z >= 0. Returns erf = 1 - erfc
/// and the magnitude of the first omitted term relative to the sum.
pub fn erf_asymptotic(z: Complex64) -> (Complex64, f64) {
    assert!(z.re >= 0.0);
    let inv = 1.0 / (2.0 * z * z);
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut k = 1usize;
    loop {
        let next = -term * inv * (2 * k - 1) as f64;
        if next.norm() >= term.norm() || k > 500 {
            break;
        }
        term = next;
        sum += term;
        k += 1;
    }
    let omitted = (term * inv * (2 * k - 1) as f64).norm() / sum.norm();
    let erfc = (-z * z).exp() / (z * std::f64::consts::PI.sqrt()) * sum;
    (Complex64::new(1.0, 0.0) - erfc, omitted)
}

/// Hybrid reference used on 4 < |z| <= 20: the double-double series where
/// it is exact enough (|z| <= 6), the asymptotic expansion elsewhere.
pub fn erf_reference(z: Complex64) -> Complex64 {
    if z.re < 0.0 {
        return -erf_reference(-z);
    }
    if z.norm() <= 6.0 {
        erf_series_dd(z)
    } else {
        erf_asymptotic(z).0
    }
}

pub fn rel_err(a: Complex64, b: Complex64) -> f64 {
    let s = b.norm();
    if s > 0.0 {
        (a - b).norm() / s
    } else {
        (a - b).norm()
    }
}

// ---------------------------------------------------------------------------
// selector algebra by explicit 2x2 inner products

pub fn weak_value_direct(alpha: f64, beta: f64) -> Complex64 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let si = [Complex64::new(s, 0.0), Complex64::from_polar(s, beta)];
    let th = std::f64::consts::FRAC_PI_4 + alpha;
    let sf = [Complex64::new(th.cos(), 0.0), Complex64::new(-th.sin(), 0.0)];
    // A = |H><H|
    let a_si = [si[0], Complex64::new(0.0, 0.0)];
    let num = sf[0].conj() * a_si[0] + sf[1].conj() * a_si[1];
    let den = sf[0].conj() * si[0] + sf[1].conj() * si[1];
    num / den
}

pub fn overlap_direct(alpha: f64, beta: f64) -> f64 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let th = std::f64::consts::FRAC_PI_4 + alpha;
    let den = Complex64::new(th.cos() * s, 0.0) - Complex64::from_polar(th.sin() * s, beta);
    den.norm_sqr()
}

/// Largest Im(A_w) at alpha = 0 over a dense log grid of beta in (1e-6, 0.5)
/// rad subject to (dIm/dbeta) dbeta / Im <= budget, using the closed forms
/// Im = cot(beta/2)/2 and dIm/dbeta = -csc^2(beta/2)/4.
pub fn budget_oracle_on_axis(dbeta: f64, budget: f64) -> Option<f64> {
    let n = 400_000;
    let (a, b) = (1e-6_f64.ln(), 0.5_f64.ln());
    let mut best: Option<f64> = None;
    for k in 0..n {
        let beta = (a + (b - a) * k as f64 / (n - 1) as f64).exp();
        let h = beta / 2.0;
        let im = 0.5 / h.tan();
        let d_im = 0.25 / (h.sin() * h.sin());
        if d_im * dbeta / im <= budget {
            best = Some(best.map_or(im, |v: f64| v.max(im)));
        }
    }
    best
}

// ---------------------------------------------------------------------------
// fitting

/// Least-squares slope of log|y| against log x.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.abs().ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

pub fn log_points(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| (lo.ln() + (hi.ln() - lo.ln()) * k as f64 / (n - 1) as f64).exp())
        .collect()
}
