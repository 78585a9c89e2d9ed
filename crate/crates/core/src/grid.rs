//! Rectangular node grids in `R^d`, sampled sections `(a, β)` on them,
//! finite-difference jets and the columnar text format for node data.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use num_complex::Complex64;

use crate::coeff::{Coeff, Point};
use crate::contact::{half_dim, SkewMatrix};
use crate::error::{Error, Result};
use crate::form::Form;
use crate::jet::{holonomic_jet, Jet1};

const MIN_NODES: usize = 5;

#[derive(Clone, Debug, PartialEq)]
pub struct CubeGrid {
    lo: Vec<f64>,
    hi: Vec<f64>,
    nodes: usize,
}

impl CubeGrid {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>, nodes: usize) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(Error::Dimension { expected: lo.len(), found: hi.len() });
        }
        if nodes < MIN_NODES {
            return Err(Error::Invalid(format!("need at least {MIN_NODES} nodes per axis, got {nodes}")));
        }
        if lo.iter().zip(&hi).any(|(l, h)| !(l < h)) {
            return Err(Error::Invalid("grid bounds must satisfy lo < hi on every axis".into()));
        }
        Ok(Self { lo, hi, nodes })
    }

    /// `[0,1]^{2n+1}`.
    pub fn unit(n: usize, nodes: usize) -> Result<Self> {
        let d = 2 * n + 1;
        Self::new(vec![0.0; d], vec![1.0; d], nodes)
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    /// `n` with `dim = 2n + 1`.
    pub fn n(&self) -> Result<usize> {
        half_dim(self.dim())
    }

    pub fn nodes_per_axis(&self) -> usize {
        self.nodes
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    pub fn mesh(&self, axis: usize) -> f64 {
        (self.hi[axis] - self.lo[axis]) / (self.nodes - 1) as f64
    }

    pub fn len(&self) -> usize {
        self.nodes.pow(self.dim() as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Multi-index of a flat node index; axis 0 varies slowest.
    pub fn multi(&self, mut flat: usize) -> Vec<usize> {
        let mut out = vec![0; self.dim()];
        for slot in out.iter_mut().rev() {
            *slot = flat % self.nodes;
            flat /= self.nodes;
        }
        out
    }

    pub fn flat(&self, multi: &[usize]) -> usize {
        multi.iter().fold(0, |acc, &k| acc * self.nodes + k)
    }

    pub fn stride(&self, axis: usize) -> usize {
        self.nodes.pow((self.dim() - 1 - axis) as u32)
    }

    pub fn coord(&self, axis: usize, k: usize) -> f64 {
        self.lo[axis] + k as f64 * self.mesh(axis)
    }

    pub fn coords(&self, flat: usize) -> Vec<f64> {
        self.multi(flat).iter().enumerate().map(|(ax, &k)| self.coord(ax, k)).collect()
    }

    pub fn point(&self, flat: usize) -> Point<Complex64> {
        Point::real(&self.coords(flat))
    }

    /// Not on any face.
    pub fn is_interior(&self, flat: usize) -> bool {
        self.multi(flat).iter().all(|&k| k > 0 && k + 1 < self.nodes)
    }

    pub fn node_label(&self, flat: usize) -> String {
        let m: Vec<String> = self.multi(flat).iter().map(usize::to_string).collect();
        format!("node ({})", m.join(","))
    }

    /// Every node whose index is a multiple of `step` on each axis.
    pub fn subsample(&self, step: usize) -> Vec<usize> {
        let step = step.max(1);
        (0..self.len()).filter(|&f| self.multi(f).iter().all(|k| k % step == 0)).collect()
    }
}

/// Second-order derivative along `axis` of the `comps`-valued field `data`
/// (flat node-major), at `node`: central inside, one-sided at faces.
pub fn fd_derivative(grid: &CubeGrid, data: &[Complex64], comps: usize, node: usize, axis: usize) -> Vec<Complex64> {
    let k = grid.multi(node)[axis];
    let s = grid.stride(axis);
    let h = grid.mesh(axis);
    let at = |f: usize, c: usize| data[f * comps + c];
    (0..comps)
        .map(|c| {
            if k == 0 {
                (-3.0 * at(node, c) + 4.0 * at(node + s, c) - at(node + 2 * s, c)) / (2.0 * h)
            } else if k + 1 == grid.nodes {
                (3.0 * at(node, c) - 4.0 * at(node - s, c) + at(node - 2 * s, c)) / (2.0 * h)
            } else {
                (at(node + s, c) - at(node - s, c)) / (2.0 * h)
            }
        })
        .collect()
}

/// A sampled pair `(a, β)` on a grid in `R^{2n+1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSection {
    pub grid: CubeGrid,
    /// `a` at node `f`, component `i`, lives at `a[f * dim + i]`.
    pub a: Vec<Complex64>,
    pub beta: Vec<SkewMatrix<Complex64>>,
}

impl GridSection {
    pub fn new(grid: CubeGrid, a: Vec<Complex64>, beta: Vec<SkewMatrix<Complex64>>) -> Result<Self> {
        grid.n()?;
        let m = grid.dim();
        if a.len() != grid.len() * m {
            return Err(Error::Dimension { expected: grid.len() * m, found: a.len() });
        }
        if beta.len() != grid.len() {
            return Err(Error::Dimension { expected: grid.len(), found: beta.len() });
        }
        if let Some(b) = beta.iter().find(|b| b.dim() != m) {
            return Err(Error::Dimension { expected: m, found: b.dim() });
        }
        if a.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::Invalid("section values must be finite".into()));
        }
        Ok(Self { grid, a, beta })
    }

    pub fn from_fn(
        grid: CubeGrid,
        f: impl Fn(&[f64]) -> (Vec<Complex64>, SkewMatrix<Complex64>),
    ) -> Result<Self> {
        let mut a = Vec::with_capacity(grid.len() * grid.dim());
        let mut beta = Vec::with_capacity(grid.len());
        for node in 0..grid.len() {
            let (av, b) = f(&grid.coords(node));
            a.extend(av);
            beta.push(b);
        }
        Self::new(grid, a, beta)
    }

    /// Samples the `dz` coefficients of `α` and the `dz∧dz` coefficients of
    /// `β` at the grid nodes.
    pub fn sample<C: Coeff>(grid: CubeGrid, alpha: &Form<C>, beta: &Form<C>) -> Result<Self> {
        let m = grid.dim();
        if alpha.dim() != m || beta.dim() != m {
            return Err(Error::Dimension { expected: m, found: alpha.dim() });
        }
        let a_coeffs: Vec<C> = (0..m).map(|i| alpha.dz_coefficient(i)).collect();
        let b_sym = SkewMatrix::from_two_form(beta)?;
        let mut a = Vec::with_capacity(grid.len() * m);
        let mut bs = Vec::with_capacity(grid.len());
        for node in 0..grid.len() {
            let pt = grid.point(node);
            for c in &a_coeffs {
                a.push(c.eval_c64(&pt)?);
            }
            let vals: Vec<Vec<Complex64>> = (0..m)
                .map(|i| (0..m).map(|j| if i < j { b_sym.get(i, j).eval_c64(&pt) } else { Ok(Complex64::default()) }).collect())
                .collect::<Result<_>>()?;
            bs.push(SkewMatrix::from_fn(m, Complex64::default(), |i, j| vals[i][j]));
        }
        Self::new(grid, a, bs)
    }

    /// Samples `α` with `β` the skew part of its exact jet (so `β = dα`).
    pub fn sample_holonomic<C: Coeff>(grid: CubeGrid, alpha: &Form<C>) -> Result<Self>
    where
        C: crate::coeff::Evaluate<Complex64>,
    {
        let m = grid.dim();
        let mut a = Vec::with_capacity(grid.len() * m);
        let mut beta = Vec::with_capacity(grid.len());
        for node in 0..grid.len() {
            let j = holonomic_jet(alpha, &grid.point(node))?;
            a.extend(j.a.iter().copied());
            beta.push(j.beta());
        }
        Self::new(grid, a, beta)
    }

    pub fn dim(&self) -> usize {
        self.grid.dim()
    }

    pub fn a_at(&self, node: usize) -> &[Complex64] {
        let m = self.dim();
        &self.a[node * m..(node + 1) * m]
    }
}

/// `p_ij ≈ ∂a_i/∂x_j` by second-order differences.
pub fn finite_diff_jet(s: &GridSection, node: usize) -> Result<Jet1<Complex64>> {
    if node >= s.grid.len() {
        return Err(Error::Invalid(format!("node {node} out of range ({} nodes)", s.grid.len())));
    }
    let m = s.dim();
    let cols: Vec<Vec<Complex64>> = (0..m).map(|j| fd_derivative(&s.grid, &s.a, m, node, j)).collect();
    let p = (0..m).map(|i| (0..m).map(|j| cols[j][i]).collect()).collect();
    Jet1::new(s.grid.coords(node), s.a_at(node).to_vec(), p)
}

/// Skew part of the finite-difference jet at every node.
pub fn fd_curl(s: &GridSection) -> Result<Vec<SkewMatrix<Complex64>>> {
    (0..s.grid.len()).map(|node| Ok(finite_diff_jet(s, node)?.beta())).collect()
}

/// Largest Frobenius distance between the curl of `a` and `β`, with the node.
pub fn holonomy_defect_at(s: &GridSection) -> Result<(f64, usize)> {
    let m = s.dim();
    let mut worst = (0.0, 0);
    for node in 0..s.grid.len() {
        let curl = finite_diff_jet(s, node)?.beta();
        let b = &s.beta[node];
        let d = SkewMatrix::from_fn(m, Complex64::default(), |i, j| curl.get(i, j) - b.get(i, j)).norm();
        if d > worst.0 {
            worst = (d, node);
        }
    }
    Ok(worst)
}

pub fn holonomy_defect(s: &GridSection) -> Result<f64> {
    Ok(holonomy_defect_at(s)?.0)
}

/// Writes node data as text: a `#` header with grid bounds, mesh and value
/// count, then one row per node with the multi-index followed by re/im
/// pairs.
pub fn write_columnar(grid: &CubeGrid, comps: usize, data: &[Complex64], w: &mut impl Write) -> Result<()> {
    if data.len() != grid.len() * comps {
        return Err(Error::Dimension { expected: grid.len() * comps, found: data.len() });
    }
    let join = |v: &[f64]| v.iter().map(|x| format!("{x:e}")).collect::<Vec<_>>().join(" ");
    let mesh: Vec<f64> = (0..grid.dim()).map(|ax| grid.mesh(ax)).collect();
    writeln!(w, "# dim {} nodes {} values {comps}", grid.dim(), grid.nodes)?;
    writeln!(w, "# lo {}", join(&grid.lo))?;
    writeln!(w, "# hi {}", join(&grid.hi))?;
    writeln!(w, "# mesh {}", join(&mesh))?;
    let mut line = String::new();
    for node in 0..grid.len() {
        line.clear();
        for k in grid.multi(node) {
            write!(line, "{k} ").unwrap();
        }
        for v in &data[node * comps..(node + 1) * comps] {
            write!(line, "{:e} {:e} ", v.re, v.im).unwrap();
        }
        writeln!(w, "{}", line.trim_end())?;
    }
    Ok(())
}

/// Inverse of [`write_columnar`]. Errors carry the 1-based line number.
pub fn read_columnar(r: impl BufRead) -> Result<(CubeGrid, usize, Vec<Complex64>)> {
    let mut lines = r.lines().enumerate();
    let mut header = |key: &str| -> Result<(usize, Vec<String>)> {
        let (no, line) = lines.next().ok_or_else(|| Error::Parse(format!("missing header line `# {key}`")))?;
        let line = line?;
        let mut toks = line.split_whitespace();
        if toks.next() != Some("#") || toks.next() != Some(key) {
            return Err(Error::Parse(format!("line {}: expected `# {key}`", no + 1)));
        }
        Ok((no + 1, toks.map(str::to_string).collect()))
    };
    let bad = |no: usize, what: &str| Error::Parse(format!("line {no}: {what}"));
    let (no, first) = header("dim")?;
    let num = |i: usize| -> Result<usize> {
        first.get(i).and_then(|t| t.parse().ok()).ok_or_else(|| bad(no, "malformed dim/nodes/values header"))
    };
    let (dim, nodes, comps) = (num(0)?, num(2)?, num(4)?);
    let floats = |(no, toks): (usize, Vec<String>)| -> Result<Vec<f64>> {
        let v = toks.iter().map(|t| t.parse::<f64>()).collect::<std::result::Result<Vec<_>, _>>();
        match v {
            Ok(v) if v.len() == dim => Ok(v),
            _ => Err(bad(no, "expected one number per axis")),
        }
    };
    let lo = floats(header("lo")?)?;
    let hi = floats(header("hi")?)?;
    header("mesh")?;
    let grid = CubeGrid::new(lo, hi, nodes)?;
    let mut data = vec![Complex64::default(); grid.len() * comps];
    let mut seen = vec![false; grid.len()];
    for (no, line) in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != dim + 2 * comps {
            return Err(bad(no + 1, &format!("expected {} columns, found {}", dim + 2 * comps, toks.len())));
        }
        let multi = toks[..dim]
            .iter()
            .map(|t| t.parse::<usize>().ok().filter(|&k| k < nodes))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| bad(no + 1, "bad node index"))?;
        let flat = grid.flat(&multi);
        for c in 0..comps {
            let re = toks[dim + 2 * c].parse::<f64>().map_err(|_| bad(no + 1, "bad real part"))?;
            let im = toks[dim + 2 * c + 1].parse::<f64>().map_err(|_| bad(no + 1, "bad imaginary part"))?;
            data[flat * comps + c] = Complex64::new(re, im);
        }
        seen[flat] = true;
    }
    if let Some(missing) = seen.iter().position(|s| !s) {
        return Err(Error::Parse(format!("no row for {}", grid.node_label(missing))));
    }
    Ok((grid, comps, data))
}

/// Packs `(a, upper triangle of β)` per node, the layout used for dumps.
pub fn section_columns(s: &GridSection) -> (usize, Vec<Complex64>) {
    let m = s.dim();
    let comps = m + m * (m - 1) / 2;
    let mut out = Vec::with_capacity(s.grid.len() * comps);
    for node in 0..s.grid.len() {
        out.extend_from_slice(s.a_at(node));
        for i in 0..m {
            for j in i + 1..m {
                out.push(s.beta[node].get(i, j));
            }
        }
    }
    (comps, out)
}

pub fn section_from_columns(grid: CubeGrid, comps: usize, data: &[Complex64]) -> Result<GridSection> {
    let m = grid.dim();
    if comps != m + m * (m - 1) / 2 {
        return Err(Error::Dimension { expected: m + m * (m - 1) / 2, found: comps });
    }
    let mut a = Vec::with_capacity(grid.len() * m);
    let mut beta = Vec::with_capacity(grid.len());
    for row in data.chunks(comps) {
        a.extend_from_slice(&row[..m]);
        let mut b = SkewMatrix::zeros(m, Complex64::default());
        let mut k = m;
        for i in 0..m {
            for j in i + 1..m {
                b.set(i, j, row[k]);
                k += 1;
            }
        }
        beta.push(b);
    }
    GridSection::new(grid, a, beta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::Laurent;
    use crate::LaurentForm;

    fn c(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    fn std3() -> LaurentForm {
        Form::dz(3, 2).add(&Form::dz(3, 1).mul_function(&Laurent::z(3, 0))).unwrap()
    }

    fn constant_pair(nodes: usize) -> GridSection {
        let grid = CubeGrid::unit(1, nodes).unwrap();
        GridSection::from_fn(grid, |_| {
            (vec![c(0.0), c(0.0), c(1.0)], SkewMatrix::from_fn(3, c(0.0), |i, j| c((i == 0 && j == 1) as u8 as f64)))
        })
        .unwrap()
    }

    #[test]
    fn indexing_round_trips() {
        let g = CubeGrid::unit(1, 5).unwrap();
        for f in [0, 7, 124] {
            assert_eq!(g.flat(&g.multi(f)), f);
        }
        assert_eq!(g.coords(g.flat(&[4, 0, 2])), vec![1.0, 0.0, 0.5]);
        assert!(CubeGrid::unit(1, 4).is_err());
    }

    #[test]
    fn jet_of_sampled_standard_form() {
        let s = GridSection::sample_holonomic(CubeGrid::unit(1, 9).unwrap(), &std3()).unwrap();
        for node in [0, 40, s.grid.len() - 1] {
            let j = finite_diff_jet(&s, node).unwrap();
            assert!((j.p[1][0] - c(1.0)).norm() < 1e-12);
        }
        assert!(holonomy_defect(&s).unwrap() < 1e-12);
    }

    #[test]
    fn constant_a_with_nonzero_beta_has_defect_one() {
        assert!((holonomy_defect(&constant_pair(5)).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn defect_is_second_order() {
        let alpha = |nodes| {
            let grid = CubeGrid::unit(1, nodes).unwrap();
            GridSection::from_fn(grid, |x| {
                let a = vec![c(0.0), c(x[0].sin()), c(1.0)];
                let b = SkewMatrix::from_fn(3, c(0.0), |i, j| c(if (i, j) == (0, 1) { x[0].cos() } else { 0.0 }));
                (a, b)
            })
            .unwrap()
        };
        let interior = |s: &GridSection| {
            (0..s.grid.len())
                .filter(|&f| s.grid.is_interior(f))
                .map(|f| (finite_diff_jet(s, f).unwrap().beta().get(0, 1) - s.beta[f].get(0, 1)).norm())
                .fold(0.0, f64::max)
        };
        let ratio = interior(&alpha(9)) / interior(&alpha(17));
        assert!((ratio - 4.0).abs() < 0.2, "ratio {ratio}");
    }

    #[test]
    fn columnar_round_trip() {
        let s = constant_pair(5);
        let (comps, data) = section_columns(&s);
        let mut buf = Vec::new();
        write_columnar(&s.grid, comps, &data, &mut buf).unwrap();
        let (g, k, back) = read_columnar(&buf[..]).unwrap();
        assert_eq!(section_from_columns(g, k, &back).unwrap(), s);
        let text = String::from_utf8(buf).unwrap().replacen("0 0 0 ", "0 0 x ", 1);
        let err = read_columnar(text.as_bytes()).unwrap_err().to_string();
        assert!(err.contains("line 5"), "{err}");
    }
}
