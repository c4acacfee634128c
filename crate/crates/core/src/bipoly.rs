//! Dense bivariate polynomials and a resultant-based solver for their common zeros.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{c64, eigenvalues, hadamard_bound, ComplexMatrix, C64};

/// `p(λ, μ) = Σ c[i][j] λ^i μ^j`.
#[derive(Clone, Debug, PartialEq)]
pub struct BiPoly {
    c: Vec<Vec<C64>>,
}

impl BiPoly {
    /// `coeffs[i][j]` multiplies `λ^i μ^j`; rows must share one length.
    pub fn new(coeffs: Vec<Vec<C64>>) -> Result<Self> {
        let width = coeffs.first().map_or(0, Vec::len);
        if coeffs.is_empty() || width == 0 || coeffs.iter().any(|r| r.len() != width) {
            return Err(Error::Dimension("bivariate coefficient grid must be rectangular and non-empty".into()));
        }
        Ok(Self { c: coeffs })
    }

    pub fn from_real(coeffs: &[&[f64]]) -> Result<Self> {
        Self::new(coeffs.iter().map(|r| r.iter().map(|&x| c64(x, 0.0)).collect()).collect())
    }

    /// Recovers a polynomial of degree `≤ deg_l` in λ and `≤ deg_m` in μ from its values on a
    /// tensor grid of scaled roots of unity, by a 2D inverse DFT.
    pub fn interpolate(f: impl Fn(C64, C64) -> C64, deg_l: usize, deg_m: usize, radius_l: f64, radius_m: f64) -> Self {
        let (nl, nm) = (deg_l + 1, deg_m + 1);
        let wl: Vec<C64> = (0..nl).map(|k| C64::from_polar(1.0, 2.0 * PI * k as f64 / nl as f64)).collect();
        let wm: Vec<C64> = (0..nm).map(|k| C64::from_polar(1.0, 2.0 * PI * k as f64 / nm as f64)).collect();
        let values: Vec<Vec<C64>> = (0..nl)
            .map(|a| (0..nm).map(|b| f(wl[a] * radius_l, wm[b] * radius_m)).collect())
            .collect();
        let mut c = vec![vec![c64(0.0, 0.0); nm]; nl];
        for (i, row) in c.iter_mut().enumerate() {
            for (j, cij) in row.iter_mut().enumerate() {
                let mut acc = c64(0.0, 0.0);
                for (a, vrow) in values.iter().enumerate() {
                    for (b, v) in vrow.iter().enumerate() {
                        acc += v * wl[(a * i) % nl].conj() * wm[(b * j) % nm].conj();
                    }
                }
                *cij = acc / ((nl * nm) as f64 * radius_l.powi(i as i32) * radius_m.powi(j as i32));
            }
        }
        Self { c }
    }

    pub fn deg_lambda(&self) -> usize {
        self.c.len() - 1
    }

    pub fn deg_mu(&self) -> usize {
        self.c[0].len() - 1
    }

    pub fn coeff(&self, i: usize, j: usize) -> C64 {
        self.c.get(i).and_then(|r| r.get(j)).copied().unwrap_or_default()
    }

    /// Largest `i + j` with a nonzero coefficient; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<usize> {
        self.terms().filter(|&(_, _, z)| z != C64::default()).map(|(i, j, _)| i + j).max()
    }

    /// Drops every term with `i + j > d`.
    pub fn truncate_total_degree(&mut self, d: usize) {
        for (i, row) in self.c.iter_mut().enumerate() {
            for (j, z) in row.iter_mut().enumerate() {
                if i + j > d {
                    *z = C64::default();
                }
            }
        }
    }

    /// Zeroes coefficients below `tol · max|c|`.
    pub fn chop(&mut self, tol: f64) {
        let cut = tol * self.max_abs();
        for z in self.c.iter_mut().flatten() {
            if z.norm() <= cut {
                *z = C64::default();
            }
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.c.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn terms(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        self.c.iter().enumerate().flat_map(|(i, r)| r.iter().enumerate().map(move |(j, &z)| (i, j, z)))
    }

    pub fn eval(&self, lambda: C64, mu: C64) -> C64 {
        self.c.iter().rev().fold(C64::default(), |acc, row| acc * lambda + horner(row, mu))
    }

    /// `(∂p/∂λ, ∂p/∂μ)` at a point.
    pub fn gradient(&self, lambda: C64, mu: C64) -> (C64, C64) {
        let mut dl = C64::default();
        let mut dm = C64::default();
        for (i, j, z) in self.terms() {
            if i > 0 {
                dl += z * i as f64 * lambda.powu(i as u32 - 1) * mu.powu(j as u32);
            }
            if j > 0 {
                dm += z * j as f64 * lambda.powu(i as u32) * mu.powu(j as u32 - 1);
            }
        }
        (dl, dm)
    }

    /// `|p(λ,μ)| / Σ |c_ij| |λ|^i |μ|^j`.
    pub fn relative_residual(&self, lambda: C64, mu: C64) -> f64 {
        let scale: f64 = self
            .terms()
            .map(|(i, j, z)| z.norm() * lambda.norm().powi(i as i32) * mu.norm().powi(j as i32))
            .sum();
        let v = self.eval(lambda, mu).norm();
        if scale == 0.0 {
            if v == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            v / scale
        }
    }

    /// `q(λ', μ') = p(λ', μ' + tλ')`. Keeps the total degree and, for generic `t`,
    /// gives the top λ' power a constant nonzero coefficient.
    pub fn shear(&self, t: C64) -> Self {
        let d = self.deg_lambda() + self.deg_mu();
        let mut c = vec![vec![C64::default(); d + 1]; d + 1];
        for (i, j, z) in self.terms() {
            let mut binom = 1.0;
            let mut tk = c64(1.0, 0.0);
            for k in 0..=j {
                c[i + k][j - k] += z * binom * tk;
                binom = binom * (j - k) as f64 / (k + 1) as f64;
                tk *= t;
            }
        }
        Self { c }
    }

    /// Coefficients in λ (ascending) with μ fixed.
    pub fn in_lambda(&self, mu: C64) -> Vec<C64> {
        self.c.iter().map(|row| horner(row, mu)).collect()
    }
}

fn horner(coeffs: &[C64], x: C64) -> C64 {
    coeffs.iter().rev().fold(C64::default(), |acc, &c| acc * x + c)
}

/// Roots of `Σ c_k x^k` (ascending) from the companion matrix eigenvalues.
/// Leading coefficients below `1e-12 · max|c|` are dropped first.
pub fn univariate_roots(coeffs: &[C64]) -> Result<Vec<C64>> {
    let max = coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return Ok(Vec::new());
    }
    let mut deg = coeffs.len() - 1;
    while coeffs[deg].norm() <= 1e-12 * max {
        deg -= 1;
    }
    if deg == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[deg];
    let comp = ComplexMatrix::from_fn(deg, deg, |r, col| {
        if r == deg - 1 {
            -coeffs[col] / lead
        } else if col == r + 1 {
            c64(1.0, 0.0)
        } else {
            C64::default()
        }
    });
    eigenvalues(&comp)
}

/// Sylvester matrix of `a` and `b` (ascending coefficients, formal degrees from lengths).
pub fn sylvester(a: &[C64], b: &[C64]) -> ComplexMatrix {
    let (da, db) = (a.len() - 1, b.len() - 1);
    let size = da + db;
    ComplexMatrix::from_fn(size, size, |r, col| {
        if r < db {
            col.checked_sub(r).filter(|&k| k <= da).map_or(C64::default(), |k| a[da - k])
        } else {
            let r = r - db;
            col.checked_sub(r).filter(|&k| k <= db).map_or(C64::default(), |k| b[db - k])
        }
    })
}

/// A common zero with the number of merged candidates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CommonZero {
    pub lambda: C64,
    pub mu: C64,
    pub multiplicity: usize,
    /// `max` of the relative residuals of both polynomials.
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CommonZeros {
    /// Sorted by `Re λ`, `Im λ`, `Re μ`, `Im μ`.
    pub points: Vec<CommonZero>,
    /// Candidates dropped because the polished residual stayed above the threshold.
    pub rejected: usize,
}

pub const POLISH_MAX_ITER: usize = 50;
pub const POLISH_STEP_TOL: f64 = 1e-12;
pub const REJECT_RESIDUAL: f64 = 1e-8;
const CLUSTER_TOL: f64 = 1e-6;
const SHARED_FACTOR_TOL: f64 = 1e-11;
const SHEARS: [(f64, f64); 4] = [(0.6180339887, 0.4142135624), (-0.3819660113, 0.7320508076), (1.2360679775, -0.2679491924), (0.2, 1.1)];

/// Isolated common zeros of `f` and `g`.
///
/// After a shear `μ = μ' + tλ'` both polynomials have constant leading λ'-coefficients,
/// so the Sylvester resultant in λ' is a polynomial in μ' of degree at most
/// `deg f · deg g`; it is recovered from samples on the unit circle. Each root gives a
/// λ' candidate from the roots of `f` or `g` along that μ'. Candidates are mapped back,
/// polished by Newton's method on `(f, g)`, filtered and merged.
pub fn common_zeros(f: &BiPoly, g: &BiPoly) -> Result<CommonZeros> {
    let (df, dg) = match (f.total_degree(), g.total_degree()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::SharedFactor),
    };
    if df == 0 || dg == 0 {
        return Ok(CommonZeros { points: Vec::new(), rejected: 0 });
    }
    let (t, fs, gs) = pick_shear(f, g, df, dg);

    let deg_r = df * dg;
    let count = deg_r + 1;
    let mut samples = Vec::with_capacity(count);
    let mut degenerate = true;
    for k in 0..count {
        let x = C64::from_polar(1.0, 2.0 * PI * k as f64 / count as f64);
        let s = sylvester(&lambda_coeffs(&fs, x, df), &lambda_coeffs(&gs, x, dg));
        let r = s.det()?;
        if r.norm() > SHARED_FACTOR_TOL * hadamard_bound(&s) {
            degenerate = false;
        }
        samples.push(r);
    }
    if degenerate {
        return Err(Error::SharedFactor);
    }
    let res_coeffs: Vec<C64> = (0..count)
        .map(|j| {
            samples
                .iter()
                .enumerate()
                .map(|(k, r)| r * C64::from_polar(1.0, -2.0 * PI * (j * k % count) as f64 / count as f64))
                .sum::<C64>()
                / count as f64
        })
        .collect();

    let mut candidates = Vec::new();
    let mut rejected = 0;
    for mu_s in univariate_roots(&res_coeffs)? {
        let mut best: Option<(f64, C64)> = None;
        for poly in [&fs, &gs] {
            for lam in univariate_roots(&lambda_coeffs(poly, mu_s, poly.deg_lambda()))? {
                let score = fs.relative_residual(lam, mu_s).max(gs.relative_residual(lam, mu_s));
                if best.is_none_or(|(b, _)| score < b) {
                    best = Some((score, lam));
                }
            }
        }
        let Some((_, lam_s)) = best else {
            rejected += 1;
            continue;
        };
        let (lam, mu) = polish(f, g, lam_s, mu_s + t * lam_s);
        if f.relative_residual(lam, mu).max(g.relative_residual(lam, mu)) > REJECT_RESIDUAL {
            rejected += 1;
        } else {
            candidates.push((lam, mu));
        }
    }
    let mut points = cluster(&candidates, f, g);
    points.sort_by_key(|p| [p.lambda.re, p.lambda.im, p.mu.re, p.mu.im].map(sort_key));
    Ok(CommonZeros { points, rejected })
}

/// Rounds to a 1e-9 grid so rounding noise does not reorder coincident coordinates.
pub fn sort_key(x: f64) -> i64 {
    (x * 1e9).round() as i64
}

fn lambda_coeffs(p: &BiPoly, mu: C64, deg: usize) -> Vec<C64> {
    let mut c = p.in_lambda(mu);
    c.resize(deg + 1, C64::default());
    c.truncate(deg + 1);
    c
}

fn pick_shear(f: &BiPoly, g: &BiPoly, df: usize, dg: usize) -> (C64, BiPoly, BiPoly) {
    let mut fallback = None;
    for &(re, im) in &SHEARS {
        let t = c64(re, im);
        let (fs, gs) = (f.shear(t), g.shear(t));
        let ok = fs.coeff(df, 0).norm() > 1e-8 * fs.max_abs() && gs.coeff(dg, 0).norm() > 1e-8 * gs.max_abs();
        if ok {
            return (t, fs, gs);
        }
        fallback.get_or_insert((t, fs, gs));
    }
    fallback.expect("shear list is non-empty")
}

/// Newton's method on `(f, g) = 0` from `(λ, μ)`.
pub fn polish(f: &BiPoly, g: &BiPoly, mut lambda: C64, mut mu: C64) -> (C64, C64) {
    for _ in 0..POLISH_MAX_ITER {
        let (fv, gv) = (f.eval(lambda, mu), g.eval(lambda, mu));
        let (fl, fm) = f.gradient(lambda, mu);
        let (gl, gm) = g.gradient(lambda, mu);
        let det = fl * gm - fm * gl;
        if det.norm() == 0.0 || !det.is_finite() {
            break;
        }
        let dl = (fv * gm - fm * gv) / det;
        let dm = (fl * gv - fv * gl) / det;
        if !(dl.is_finite() && dm.is_finite()) {
            break;
        }
        let before = f.relative_residual(lambda, mu).max(g.relative_residual(lambda, mu));
        let (nl, nm) = (lambda - dl, mu - dm);
        if f.relative_residual(nl, nm).max(g.relative_residual(nl, nm)) > before && before < REJECT_RESIDUAL {
            break;
        }
        lambda = nl;
        mu = nm;
        if (dl.norm_sqr() + dm.norm_sqr()).sqrt() < POLISH_STEP_TOL * (1.0 + lambda.norm().max(mu.norm())) {
            break;
        }
    }
    (lambda, mu)
}

fn cluster(candidates: &[(C64, C64)], f: &BiPoly, g: &BiPoly) -> Vec<CommonZero> {
    let mut groups: Vec<Vec<(C64, C64)>> = Vec::new();
    for &(l, m) in candidates {
        let close = |&(l0, m0): &(C64, C64)| {
            (l - l0).norm() <= CLUSTER_TOL * l0.norm().max(1.0) && (m - m0).norm() <= CLUSTER_TOL * m0.norm().max(1.0)
        };
        match groups.iter_mut().find(|grp| close(&grp[0])) {
            Some(grp) => grp.push((l, m)),
            None => groups.push(vec![(l, m)]),
        }
    }
    groups
        .into_iter()
        .map(|grp| {
            let k = grp.len() as f64;
            let lambda = grp.iter().map(|p| p.0).sum::<C64>() / k;
            let mu = grp.iter().map(|p| p.1).sum::<C64>() / k;
            let residual = f.relative_residual(lambda, mu).max(g.relative_residual(lambda, mu));
            CommonZero { lambda, mu, multiplicity: grp.len(), residual }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn r(x: f64) -> C64 {
        c64(x, 0.0)
    }

    fn near(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn interpolation_recovers_coefficients() {
        // p = 2 + 3λμ − λ² + iμ²
        let p = |l: C64, m: C64| r(2.0) + l * m * 3.0 - l * l + c64(0.0, 1.0) * m * m;
        let q = BiPoly::interpolate(p, 2, 2, 1.0, 1.5);
        assert!(near(q.coeff(0, 0), r(2.0), 1e-13));
        assert!(near(q.coeff(1, 1), r(3.0), 1e-13));
        assert!(near(q.coeff(2, 0), r(-1.0), 1e-13));
        assert!(near(q.coeff(0, 2), c64(0.0, 1.0), 1e-13));
        assert!(q.coeff(2, 2).norm() < 1e-13 && q.coeff(1, 0).norm() < 1e-13);
    }

    #[test]
    fn shear_is_a_substitution() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = BiPoly::new(
            (0..3).map(|_| (0..3).map(|_| c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()).collect(),
        )
        .unwrap();
        let t = c64(0.3, -0.7);
        let s = p.shear(t);
        for _ in 0..10 {
            let (l, m) = (c64(rng.gen(), rng.gen()), c64(rng.gen(), rng.gen()));
            assert!(near(s.eval(l, m), p.eval(l, m + t * l), 1e-12));
        }
        assert_eq!(s.total_degree(), p.total_degree());
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let p = BiPoly::from_real(&[&[1.0, -2.0, 0.5], &[3.0, 1.0, 0.0], &[-1.0, 0.0, 0.0]]).unwrap();
        let (l, m) = (c64(0.3, 0.2), c64(-0.4, 0.9));
        let h = 1e-6;
        let (dl, dm) = p.gradient(l, m);
        let fd_l = (p.eval(l + h, m) - p.eval(l - h, m)) / (2.0 * h);
        let fd_m = (p.eval(l, m + h) - p.eval(l, m - h)) / (2.0 * h);
        assert!(near(dl, fd_l, 1e-8) && near(dm, fd_m, 1e-8));
    }

    #[test]
    fn roots_of_a_cubic() {
        // (x − 1)(x − 2)(x + 3) = x³ − 7x + 6
        let mut roots = univariate_roots(&[r(6.0), r(-7.0), r(0.0), r(1.0)]).unwrap();
        roots.sort_by(|a, b| a.re.total_cmp(&b.re));
        for (z, want) in roots.iter().zip([-3.0, 1.0, 2.0]) {
            assert!(near(*z, r(want), 1e-12));
        }
        assert!(univariate_roots(&[r(1.0), r(0.0)]).unwrap().is_empty());
    }

    #[test]
    fn sylvester_determinant_is_resultant() {
        // Res(x − 2, x − 5) = 2 − 5; Res(x² − 1, x − 3) = 3² − 1.
        let s = sylvester(&[r(-2.0), r(1.0)], &[r(-5.0), r(1.0)]);
        assert!(near(s.det().unwrap(), r(-3.0), 1e-14));
        let s = sylvester(&[r(-1.0), r(0.0), r(1.0)], &[r(-3.0), r(1.0)]);
        assert!(near(s.det().unwrap(), r(8.0), 1e-13));
    }

    #[test]
    fn separable_system_has_four_corners() {
        let f = BiPoly::from_real(&[&[-1.0, 0.0], &[0.0, 0.0], &[1.0, 0.0]]).unwrap();
        let g = BiPoly::from_real(&[&[-1.0, 0.0, 1.0]]).unwrap();
        let z = common_zeros(&f, &g).unwrap();
        assert_eq!(z.points.len(), 4);
        let want = [(-1.0, -1.0), (-1.0, 1.0), (1.0, -1.0), (1.0, 1.0)];
        for (p, (l, m)) in z.points.iter().zip(want) {
            assert!(near(p.lambda, r(l), 1e-10) && near(p.mu, r(m), 1e-10), "{p:?}");
            assert_eq!(p.multiplicity, 1);
        }
    }

    #[test]
    fn circle_and_hyperbola_touch_twice() {
        // μ = 1/λ turns λ² + μ² − 2 into (λ² − 1)²/λ²: double zeros at (1,1), (−1,−1).
        let f = BiPoly::from_real(&[&[-2.0, 0.0, 1.0], &[0.0, 0.0, 0.0], &[1.0, 0.0, 0.0]]).unwrap();
        let g = BiPoly::from_real(&[&[-1.0, 0.0], &[0.0, 1.0]]).unwrap();
        let z = common_zeros(&f, &g).unwrap();
        assert_eq!(z.points.len(), 2, "{z:?}");
        assert!(near(z.points[0].lambda, r(-1.0), 1e-6) && near(z.points[0].mu, r(-1.0), 1e-6));
        assert!(near(z.points[1].lambda, r(1.0), 1e-6) && near(z.points[1].mu, r(1.0), 1e-6));
        assert!(z.points.iter().all(|p| p.multiplicity == 2));
    }

    #[test]
    fn identical_polynomials_share_a_factor() {
        let f = BiPoly::from_real(&[&[-2.0, 0.0, 1.0], &[0.0, 1.0, 0.0], &[1.0, 0.0, 0.0]]).unwrap();
        assert!(matches!(common_zeros(&f, &f), Err(Error::SharedFactor)));
    }

    #[test]
    fn random_quadratics_have_four_zeros() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let mut make = || {
                let mut p = BiPoly::new(
                    (0..3).map(|_| (0..3).map(|_| c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()).collect(),
                )
                .unwrap();
                p.truncate_total_degree(2);
                p
            };
            let (f, g) = (make(), make());
            let z = common_zeros(&f, &g).unwrap();
            assert_eq!(z.points.len(), 4, "{z:?}");
            for p in &z.points {
                assert!(f.eval(p.lambda, p.mu).norm() < 1e-9 * (1.0 + p.lambda.norm() + p.mu.norm()).powi(2));
                assert!(g.eval(p.lambda, p.mu).norm() < 1e-9 * (1.0 + p.lambda.norm() + p.mu.norm()).powi(2));
            }
        }
    }
}
