//! Convex integration on a cube grid.
//!
//! A formal pair `(a, β)` is turned into a holonomic section `(a', curl a')`
//! lying in `R = {h ≠ 0}`, one coordinate direction at a time. In direction
//! `x_i` the relation is affine in column `i` of the jet; a circle around
//! the wanted column inside the slice is realized by an oscillation
//! `e^{iωx_i}` whose discrete derivative traces the circle exactly.

use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde_json::json;

use crate::contact::{formal_value, SkewMatrix};
use crate::error::{Error, Result};
use crate::grid::{fd_curl, finite_diff_jet, holonomy_defect_at, section_columns, write_columnar, CubeGrid, GridSection};
use crate::jet::{column_slice, relation_value, Jet1, SliceClass};
use crate::report::VerificationReport;

/// Number of homotopy frames, input and output included.
pub const FRAMES: usize = 17;

type C = Complex64;

fn c0() -> C {
    C::new(0.0, 0.0)
}

/// `θ ↦ center + r e^{iθ} v`.
#[derive(Clone, Debug, PartialEq)]
pub struct Loop {
    pub center: Vec<C>,
    pub v: Vec<C>,
    pub r: f64,
}

impl Loop {
    pub fn point(&self, theta: f64) -> Vec<C> {
        let e = C::from_polar(self.r, theta);
        self.center.iter().zip(&self.v).map(|(c, v)| c + e * v).collect()
    }

    /// Mean over `k` equispaced angles.
    pub fn mean(&self, k: usize) -> Vec<C> {
        let mut acc = vec![c0(); self.center.len()];
        for s in 0..k {
            for (a, p) in acc.iter_mut().zip(self.point(2.0 * PI * s as f64 / k as f64)) {
                *a += p;
            }
        }
        acc.iter().map(|a| a / k as f64).collect()
    }

    /// `min_θ |⟨w, loop(θ)⟩ + c|`, in closed form.
    pub fn margin(&self, slice: &SliceClass<C>) -> f64 {
        match slice {
            SliceClass::Empty => 0.0,
            SliceClass::Full { c } => c.norm(),
            SliceClass::HyperplaneComplement { w, .. } => {
                let h0 = slice.affine_value(&self.center).norm();
                let wv: C = w.iter().zip(&self.v).map(|(a, b)| a * b).sum();
                (self.r * wv.norm() - h0).abs()
            }
        }
    }

    /// The same minimum, from `k` samples plus the analytic minimizer.
    pub fn sampled_margin(&self, slice: &SliceClass<C>, k: usize) -> f64 {
        let mut thetas: Vec<f64> = (0..k).map(|s| 2.0 * PI * s as f64 / k as f64).collect();
        if let SliceClass::HyperplaneComplement { w, .. } = slice {
            let h0 = slice.affine_value(&self.center);
            let wv: C = w.iter().zip(&self.v).map(|(a, b)| a * b).sum();
            if wv.norm() > 0.0 {
                thetas.push((-h0 / wv).arg());
            }
        }
        thetas.iter().map(|&t| slice.affine_value(&self.point(t)).norm()).fold(f64::INFINITY, f64::min)
    }
}

/// A loop with mean `target` along which `|⟨w, ·⟩ + c|` stays `≥ margin`.
///
/// For a hyperplane complement `v = w̄/‖w‖²` and `r = |⟨w,target⟩ + c| + margin`;
/// a full slice gets the constant loop.
pub fn loop_for_target(slice: &SliceClass<C>, target: &[C], margin: f64) -> Result<Loop> {
    match slice {
        SliceClass::Empty => Err(Error::EmptySlice("no loop inside an empty slice".into())),
        SliceClass::Full { .. } => Ok(Loop { center: target.to_vec(), v: vec![c0(); target.len()], r: 0.0 }),
        SliceClass::HyperplaneComplement { w, .. } => {
            let n2: f64 = w.iter().map(|x| x.norm_sqr()).sum();
            let v = w.iter().map(|x| x.conj() / n2).collect();
            let r = slice.affine_value(target).norm() + margin;
            Ok(Loop { center: target.to_vec(), v, r })
        }
    }
}

/// Faces of the cube held fixed, as `(axis, upper)` pairs, with the strip
/// width in nodes.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GammaSpec {
    pub faces: Vec<(usize, bool)>,
    pub width: usize,
}

impl GammaSpec {
    pub fn empty() -> Self {
        Self { faces: Vec::new(), width: 3 }
    }

    pub fn faces(faces: Vec<(usize, bool)>) -> Self {
        Self { faces, width: 3 }
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    fn distances(&self, grid: &CubeGrid, node: usize) -> impl Iterator<Item = usize> + '_ {
        let multi = grid.multi(node);
        let last = grid.nodes_per_axis() - 1;
        self.faces.iter().map(move |&(ax, upper)| if upper { last - multi[ax] } else { multi[ax] })
    }

    pub fn in_strip(&self, grid: &CubeGrid, node: usize) -> bool {
        self.distances(grid, node).any(|d| d < self.width)
    }

    /// Multiplier for corrections: 0 on the strips and one further node (so
    /// difference stencils on the strips see no change), then a quintic ramp
    /// over `width` nodes.
    pub fn cutoff(&self, grid: &CubeGrid, node: usize) -> f64 {
        self.distances(grid, node)
            .map(|d| {
                let t = ((d as f64 - self.width as f64) / self.width.max(1) as f64).clamp(0.0, 1.0);
                t * t * t * (10.0 - 15.0 * t + 6.0 * t * t)
            })
            .product()
    }
}

/// `10 h² K`, plus a rounding allowance, with `K` the largest second
/// difference quotient of `a` (reported alongside).
pub fn stencil_bound(s: &GridSection) -> (f64, f64) {
    let g = &s.grid;
    let m = s.dim();
    let mut k = 0.0f64;
    let mut amax = 0.0f64;
    for node in 0..g.len() {
        let multi = g.multi(node);
        for ax in 0..m {
            if multi[ax] == 0 || multi[ax] + 1 == g.nodes_per_axis() {
                continue;
            }
            let (st, h) = (g.stride(ax), g.mesh(ax));
            for c in 0..m {
                let d2 = s.a[(node + st) * m + c] - 2.0 * s.a[node * m + c] + s.a[(node - st) * m + c];
                k = k.max(d2.norm() / (h * h));
            }
        }
        amax = s.a_at(node).iter().map(|v| v.norm()).fold(amax, f64::max);
    }
    let h = (0..m).map(|ax| g.mesh(ax)).fold(0.0, f64::max);
    (10.0 * h * h * k + 1e-12 * (1.0 + amax), k)
}

#[derive(Clone, Debug)]
pub struct CIResult {
    pub input: GridSection,
    pub output: GridSection,
    pub gamma: GammaSpec,
    pub eps: f64,
    pub delta: f64,
    /// Loop margin used by the successful attempt.
    pub kappa: f64,
    /// Angular frequency `ω` of the oscillations, one entry per sweep.
    pub frequencies: Vec<f64>,
    pub achieved_margin: f64,
    pub achieved_deviation: f64,
    pub unchanged: bool,
    pub pass: bool,
    pub report: VerificationReport,
}

impl CIResult {
    /// Frame `k` of `FRAMES`: `a` moves linearly, `β` goes linearly from the
    /// input `β` to the output curl.
    pub fn frame(&self, k: usize) -> GridSection {
        let t = k as f64 / (FRAMES - 1) as f64;
        let a = self.input.a.iter().zip(&self.output.a).map(|(x, y)| x + (y - x) * t).collect();
        let m = self.input.dim();
        let beta = self
            .input
            .beta
            .iter()
            .zip(&self.output.beta)
            .map(|(b0, b1)| SkewMatrix::from_fn(m, c0(), |i, j| b0.get(i, j) * (1.0 - t) + b1.get(i, j) * t))
            .collect();
        GridSection { grid: self.input.grid.clone(), a, beta }
    }

    /// Metadata JSON plus `frame_0000 … frame_0016` in columnar format.
    pub fn dump(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        let g = &self.input.grid;
        let meta = json!({
            "grid": { "lo": g.lo(), "hi": g.hi(), "nodes": g.nodes_per_axis() },
            "eps": self.eps,
            "delta": self.delta,
            "kappa": self.kappa,
            "frequencies": self.frequencies,
            "achieved_margin": self.achieved_margin,
            "achieved_deviation": self.achieved_deviation,
            "unchanged": self.unchanged,
            "pass": self.pass,
            "frames": FRAMES,
            "gamma": self.gamma.faces,
        });
        fs::write(dir.join("metadata.json"), serde_json::to_string_pretty(&meta)?)?;
        for k in 0..FRAMES {
            let (comps, data) = section_columns(&self.frame(k));
            let mut f = std::io::BufWriter::new(fs::File::create(dir.join(format!("frame_{k:04}")))?);
            write_columnar(g, comps, &data, &mut f)?;
        }
        Ok(())
    }
}

fn interior_margin(s: &GridSection) -> Result<(f64, usize)> {
    let mut worst = (f64::INFINITY, 0);
    for node in (0..s.grid.len()).filter(|&f| s.grid.is_interior(f)) {
        let h = relation_value(&finite_diff_jet(s, node)?).norm();
        if h < worst.0 {
            worst = (h, node);
        }
    }
    Ok(worst)
}

fn deviation(a: &[C], b: &[C], m: usize) -> (f64, usize) {
    a.chunks(m)
        .zip(b.chunks(m))
        .enumerate()
        .map(|(k, (x, y))| (x.iter().zip(y).map(|(p, q)| (p - q).norm_sqr()).sum::<f64>().sqrt(), k))
        .fold((0.0, 0), |acc, v| if v.0 > acc.0 { v } else { acc })
}

fn check_preconditions(input: &GridSection, gamma: &GammaSpec, delta: f64) -> Result<()> {
    let g = &input.grid;
    for node in 0..g.len() {
        let v = formal_value(input.a_at(node), &input.beta[node])?.norm();
        if !(v > 1e-12) {
            return Err(Error::Precondition(format!("formal margin {v:.3e} at {}", g.node_label(node))));
        }
    }
    if gamma.is_empty() {
        return Ok(());
    }
    let (bound, _) = stencil_bound(input);
    let curl = fd_curl(input)?;
    let m = input.dim();
    for node in (0..g.len()).filter(|&f| gamma.in_strip(g, f)) {
        let d = SkewMatrix::from_fn(m, c0(), |i, j| curl[node].get(i, j) - input.beta[node].get(i, j)).norm();
        if d > bound {
            return Err(Error::Precondition(format!("input is not holonomic on the frozen strip at {}", g.node_label(node))));
        }
        let h = relation_value(&finite_diff_jet(input, node)?).norm();
        if h < delta {
            return Err(Error::Precondition(format!("frozen strip leaves the relation at {} (|h| = {h:.3e})", g.node_label(node))));
        }
    }
    Ok(())
}

/// Formal jet with skew part `β` and symmetric part from the differences of `a`.
fn formal_jets(s: &GridSection) -> Result<Vec<Vec<Vec<C>>>> {
    let m = s.dim();
    (0..s.grid.len())
        .map(|node| {
            let p = finite_diff_jet(s, node)?.p;
            let b = &s.beta[node];
            Ok((0..m)
                .map(|i| (0..m).map(|j| (p[i][j] + p[j][i]) * 0.5 - b.get(i, j) * 0.5).collect())
                .collect())
        })
        .collect()
}

struct Attempt {
    a: Vec<C>,
    frequencies: Vec<f64>,
}

/// One attempt at fixed loop margin `kappa` and period `cells` (in nodes).
fn attempt(
    input: &GridSection,
    gamma: &GammaSpec,
    kappa: f64,
    cells: f64,
    eps: f64,
    delta: f64,
    max_sweeps: usize,
) -> Result<std::result::Result<Attempt, String>> {
    let g = &input.grid;
    let m = input.dim();
    let skip = 0.75 * kappa;
    let formal = formal_jets(input)?;
    let mut cur = input.clone();
    let mut frequencies = Vec::new();
    let cutoff: Vec<f64> = (0..g.len()).map(|f| gamma.cutoff(g, f)).collect();
    for sweep in 0..max_sweeps {
        for dir in 0..m {
            let h = g.mesh(dir);
            let omega = 2.0 * PI / (cells * h);
            // discrete derivative of e^{iωx} is (i sin(ωh)/h) e^{iωx}
            let gain = h / (omega * h).sin();
            let mut corr = vec![c0(); cur.a.len()];
            for node in 0..g.len() {
                if cutoff[node] == 0.0 {
                    continue;
                }
                let actual = finite_diff_jet(&cur, node)?;
                let mut p = actual.p.clone();
                if sweep == 0 {
                    for (i, row) in p.iter_mut().enumerate() {
                        for (j, v) in row.iter_mut().enumerate() {
                            if j > dir {
                                *v = formal[node][i][j];
                            }
                        }
                    }
                }
                let jet = Jet1::new(actual.base.clone(), actual.a.clone(), p)?;
                let slice = column_slice(&jet, dir);
                let target: Vec<C> = (0..m).map(|i| actual.p[i][dir]).collect();
                if slice.affine_value(&target).norm() >= skip {
                    continue;
                }
                let lp = match slice {
                    SliceClass::Empty => {
                        return Ok(Err(format!("empty slice in direction {dir} at {}", g.node_label(node))));
                    }
                    SliceClass::Full { .. } => continue,
                    SliceClass::HyperplaneComplement { .. } => loop_for_target(&slice, &target, kappa)?,
                };
                let x = g.coords(node)[dir];
                let phase = C::from_polar(1.0, omega * x) / C::i();
                for i in 0..m {
                    corr[node * m + i] = lp.v[i] * (cutoff[node] * gain * lp.r) * phase;
                }
            }
            for (a, d) in cur.a.iter_mut().zip(&corr) {
                *a += d;
            }
        }
        frequencies.push(2.0 * PI / (cells * g.mesh(0)));
        let (dev, _) = deviation(&cur.a, &input.a, m);
        if dev > eps {
            return Ok(Err(format!("sup deviation {dev:.3e} exceeds eps after sweep {sweep}")));
        }
        if interior_margin(&cur)?.0 >= delta {
            return Ok(Ok(Attempt { a: cur.a, frequencies }));
        }
    }
    let (worst, node) = interior_margin(&cur)?;
    Ok(Err(format!("margin {worst:.3e} < delta at {} after {max_sweeps} sweeps", g.node_label(node))))
}

fn output_section(input: &GridSection, gamma: &GammaSpec, a: Vec<C>) -> Result<GridSection> {
    let mut out = GridSection { grid: input.grid.clone(), a, beta: input.beta.clone() };
    let curl = fd_curl(&out)?;
    for (node, b) in curl.into_iter().enumerate() {
        if !gamma.in_strip(&input.grid, node) {
            out.beta[node] = b;
        }
    }
    Ok(out)
}

/// Converts a formal pair into a holonomic section in `R`, keeping the
/// frozen strips fixed and moving `a` by at most `eps`. Failure is reported
/// through `pass = false`, never as a claimed solution.
pub fn ci_solve(input: &GridSection, gamma: &GammaSpec, eps: f64, delta: f64, max_sweeps: usize) -> Result<CIResult> {
    check_preconditions(input, gamma, delta)?;
    let m = input.dim();
    let base = |output: GridSection, kappa, frequencies, unchanged| CIResult {
        input: input.clone(),
        output,
        gamma: gamma.clone(),
        eps,
        delta,
        kappa,
        frequencies,
        achieved_margin: 0.0,
        achieved_deviation: 0.0,
        unchanged,
        pass: false,
        report: VerificationReport::new("ci_solve"),
    };
    let finish = |mut r: CIResult| -> Result<CIResult> {
        r.report = verify_ci(&r, input, eps, delta)?;
        r.pass = r.report.pass;
        r.achieved_margin = interior_margin(&r.output)?.0;
        r.achieved_deviation = deviation(&r.output.a, &input.a, m).0;
        Ok(r)
    };

    let (bound, _) = stencil_bound(input);
    if holonomy_defect_at(input)?.0 <= bound && interior_margin(input)?.0 >= delta {
        return finish(base(input.clone(), 0.0, Vec::new(), true));
    }

    let mut failures = Vec::new();
    for cells in [4.0, 6.0, 8.0] {
        for kappa in [2.0, 8.0, 32.0, 128.0].map(|f| f * delta) {
            match attempt(input, gamma, kappa, cells, eps, delta, max_sweeps.max(1))? {
                Ok(att) => {
                    let out = output_section(input, gamma, att.a)?;
                    let r = finish(base(out, kappa, att.frequencies, false))?;
                    if r.pass {
                        return Ok(r);
                    }
                    failures.push(format!("kappa {kappa:.1e}, period {cells} cells: {}", r.report.offending.join("; ")));
                }
                Err(why) => failures.push(format!("kappa {kappa:.1e}, period {cells} cells: {why}")),
            }
        }
    }
    let mut r = base(input.clone(), 0.0, Vec::new(), false);
    r.report.check("budget", false, "every (kappa, period) attempt failed");
    for f in failures {
        r.report.warn(f);
    }
    r.report.pass = false;
    Ok(r)
}

/// Re-checks a solver result from the sections alone.
pub fn verify_ci(result: &CIResult, input: &GridSection, eps: f64, delta: f64) -> Result<VerificationReport> {
    let out = &result.output;
    let g = &input.grid;
    let m = input.dim();
    let mut rep = VerificationReport::new("verify_ci");
    if out.grid != *g || out.a.len() != input.a.len() {
        rep.check("grid", false, "output grid differs from input grid");
        return Ok(rep);
    }

    let (bound, k) = stencil_bound(out);
    let (defect, at) = holonomy_defect_at(out)?;
    rep.check(
        "holonomic",
        defect <= bound,
        format!("defect {defect:.3e} at {} (bound {bound:.3e} from curvature {k:.3e})", g.node_label(at)),
    );

    for node in (0..g.len()).filter(|&f| g.is_interior(f)) {
        let h = relation_value(&finite_diff_jet(out, node)?).norm();
        rep.record(g.node_label(node), h, h >= delta);
    }

    let (dev, at) = deviation(&out.a, &input.a, m);
    rep.check("c0_close", dev <= eps, format!("sup deviation {dev:.3e} at {} (eps {eps:.1e})", g.node_label(at)));

    let strips: Vec<usize> = (0..g.len()).filter(|&f| result.gamma.in_strip(g, f)).collect();
    let mut frame_min = f64::INFINITY;
    let mut frame_at = String::new();
    let mut strip_drift = 0.0f64;
    for k in 0..FRAMES {
        let fr = result.frame(k);
        for node in 0..g.len() {
            let v = formal_value(fr.a_at(node), &fr.beta[node])?.norm();
            if v < frame_min {
                frame_min = v;
                frame_at = format!("frame {k}, {}", g.node_label(node));
            }
        }
        for &node in &strips {
            let da = deviation(fr.a_at(node), input.a_at(node), m).0;
            let db = SkewMatrix::from_fn(m, c0(), |i, j| fr.beta[node].get(i, j) - input.beta[node].get(i, j)).norm();
            strip_drift = strip_drift.max(da).max(db);
        }
    }
    rep.check("frames_formal", frame_min > 0.0, format!("min formal margin {frame_min:.3e} at {frame_at}"));
    rep.check("frames_fixed_on_gamma", strip_drift <= 1e-12, format!("max drift {strip_drift:.3e} on {} strip nodes", strips.len()));
    Ok(rep)
}

/// `a = e_{2n+1}` (so `α = dz_{2n+1}`) with `β = Σ_j dz_j∧dz_{n+j}`.
pub fn demo_input(n: usize, nodes: usize) -> Result<GridSection> {
    let grid = CubeGrid::unit(n, nodes)?;
    let m = 2 * n + 1;
    GridSection::from_fn(grid, |_| {
        let mut a = vec![c0(); m];
        a[m - 1] = C::new(1.0, 0.0);
        let b = SkewMatrix::from_fn(m, c0(), |i, j| if i < n && j == n + i { C::new(1.0, 0.0) } else { c0() });
        (a, b)
    })
}

/// `λ(x_3)` equal to 1 near both `x_3` faces and vanishing at the centre.
fn blend(t: f64) -> f64 {
    if !(0.25..=0.75).contains(&t) {
        1.0
    } else {
        (2.0 * PI * (t - 0.25)).cos().powi(2)
    }
}

/// `n = 1`: `a = (0, λ(x_3) x_1, 1)` with `β = dz_1∧dz_2`, holonomic (equal
/// to the standard form) near the faces `x_3 = 0, 1`, which are frozen.
pub fn gamma_demo_input(nodes: usize) -> Result<(GridSection, GammaSpec)> {
    let grid = CubeGrid::unit(1, nodes)?;
    let s = GridSection::from_fn(grid, |x| {
        let a = vec![c0(), C::new(blend(x[2]) * x[0], 0.0), C::new(1.0, 0.0)];
        let b = SkewMatrix::from_fn(3, c0(), |i, j| if (i, j) == (0, 1) { C::new(1.0, 0.0) } else { c0() });
        (a, b)
    })?;
    Ok((s, GammaSpec::faces(vec![(2, false), (2, true)])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form::Form;
    use crate::laurent::Laurent;
    use crate::LaurentForm;

    fn hc(w: Vec<C>, c: C) -> SliceClass<C> {
        SliceClass::HyperplaneComplement { w, c }
    }

    #[test]
    fn loop_examples() {
        let w = vec![c0(), C::new(1.0, 0.0), c0()];
        let s = hc(w.clone(), c0());
        let l = loop_for_target(&s, &[c0(); 3], 1.0).unwrap();
        assert!((l.r - 1.0).abs() < 1e-15 && (l.margin(&s) - 1.0).abs() < 1e-15);
        let target = vec![c0(), C::new(3.0, 0.0), c0()];
        let l = loop_for_target(&s, &target, 1.0).unwrap();
        assert!((l.r - 4.0).abs() < 1e-15);
        assert!((l.sampled_margin(&s, 64) - 1.0).abs() < 1e-12);
        let mean = l.mean(64);
        assert!(mean.iter().zip(&target).all(|(a, b)| (a - b).norm() < 1e-12));
        let full = SliceClass::Full { c: C::new(7.0, 0.0) };
        let l = loop_for_target(&full, &target, 1.0).unwrap();
        assert_eq!(l.r, 0.0);
        assert_eq!(l.margin(&full), 7.0);
        assert!(loop_for_target(&SliceClass::Empty, &target, 1.0).is_err());
    }

    #[test]
    fn correction_has_exact_discrete_derivative() {
        let grid = CubeGrid::unit(1, 9).unwrap();
        let h = grid.mesh(1);
        let omega = 2.0 * PI / (4.0 * h);
        let (r, v) = (0.3, [C::new(0.5, 0.5), c0(), C::new(-1.0, 0.0)]);
        let s = GridSection::from_fn(grid.clone(), |x| {
            let e = C::from_polar(1.0, omega * x[1]) / C::i() * (h / (omega * h).sin() * r);
            (v.iter().map(|vi| vi * e).collect(), SkewMatrix::zeros(3, c0()))
        })
        .unwrap();
        for node in (0..grid.len()).filter(|&f| grid.is_interior(f)) {
            let j = finite_diff_jet(&s, node).unwrap();
            let x = grid.coords(node)[1];
            for i in 0..3 {
                let want = v[i] * C::from_polar(r, omega * x);
                assert!((j.p[i][1] - want).norm() < 1e-12);
                assert!(j.p[i][0].norm() < 1e-12 && j.p[i][2].norm() < 1e-12);
            }
        }
    }

    #[test]
    fn cutoff_vanishes_on_strips() {
        let grid = CubeGrid::unit(1, 17).unwrap();
        let gamma = GammaSpec::faces(vec![(2, false)]);
        for k in 0..17 {
            let node = grid.flat(&[8, 8, k]);
            let chi = gamma.cutoff(&grid, node);
            assert_eq!(gamma.in_strip(&grid, node), k < 3);
            if k <= 3 {
                assert_eq!(chi, 0.0);
            }
            if k >= 6 {
                assert_eq!(chi, 1.0);
            }
        }
    }

    #[test]
    fn holonomic_input_is_returned_unchanged() {
        let std: LaurentForm = Form::dz(3, 2).add(&Form::dz(3, 1).mul_function(&Laurent::z(3, 0))).unwrap();
        let s = GridSection::sample_holonomic(CubeGrid::unit(1, 9).unwrap(), &std).unwrap();
        let r = ci_solve(&s, &GammaSpec::empty(), 0.5, 1e-3, 8).unwrap();
        assert!(r.pass && r.unchanged);
        assert_eq!(r.output, s);
        assert_eq!(r.achieved_deviation, 0.0);
    }

    #[test]
    fn small_demo_passes_and_corruption_is_caught() {
        let input = demo_input(1, 9).unwrap();
        let mut r = ci_solve(&input, &GammaSpec::empty(), 0.5, 1e-3, 8).unwrap();
        assert!(r.pass, "{}", r.report.to_text(false));
        assert!(r.achieved_margin >= 1e-3);
        let node = r.output.grid.flat(&[4, 4, 4]);
        for i in 0..3 {
            r.output.a[node * 3 + i] = c0();
        }
        let v = verify_ci(&r, &input, 0.5, 1e-3).unwrap();
        assert!(!v.pass);
        assert!(v.offending.iter().any(|o| o == "node (4,4,4)"), "{:?}", v.offending);
    }

    #[test]
    fn zero_input_is_a_precondition_error() {
        let grid = CubeGrid::unit(1, 5).unwrap();
        let s = GridSection::from_fn(grid, |_| (vec![c0(); 3], SkewMatrix::zeros(3, c0()))).unwrap();
        assert!(matches!(ci_solve(&s, &GammaSpec::empty(), 0.5, 1e-3, 8), Err(Error::Precondition(_))));
    }
}
