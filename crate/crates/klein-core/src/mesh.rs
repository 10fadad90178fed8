//! Triangle meshes of catalog surfaces: tessellation, seam welding,
//! topology and self-intersection evidence.

use alloc::collections::VecDeque;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{floor, Vec3, PI, TAU};
use crate::surface::{ParametricSurface, SeamClosure};

#[cfg(feature = "serde")]
use serde::Serialize;

/// Where a mesh came from.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct Provenance {
    pub surface: String,
    pub nu: usize,
    pub nv: usize,
    /// The requested `nv` when the tessellator had to raise it for parity.
    pub nv_requested: Option<usize>,
    pub margin: f64,
    pub welded: bool,
    /// Set by [`compute_normals`] when no consistent orientation exists.
    pub orientation_conflict: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TriangleMesh {
    pub vertices: Vec<Vec3>,
    pub triangles: Vec<[usize; 3]>,
    pub normals: Option<Vec<Vec3>>,
    pub provenance: Provenance,
    /// Grid node `(i, j)` of each vertex, row-major `i · (nv + 1) + j`,
    /// while the mesh is still an unwelded grid.
    grid: Option<(usize, usize)>,
}

impl TriangleMesh {
    /// A mesh from raw buffers, e.g. a test solid.
    pub fn from_parts(name: &str, vertices: Vec<Vec3>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        if triangles.iter().flatten().any(|&i| i >= vertices.len()) {
            return Err(Error::IndexOutOfBounds);
        }
        Ok(Self {
            vertices,
            triangles,
            normals: None,
            provenance: Provenance {
                surface: String::from(name),
                nu: 0,
                nv: 0,
                nv_requested: None,
                margin: 0.0,
                welded: true,
                orientation_conflict: false,
            },
            grid: None,
        })
    }

    pub fn bounding_box(&self) -> (Vec3, Vec3) {
        let inf = Vec3::new(f64::INFINITY, f64::INFINITY, f64::INFINITY);
        self.vertices.iter().fold((inf, -inf), |(lo, hi), &p| (lo.min(p), hi.max(p)))
    }

    /// Bounding-box diagonal.
    pub fn diameter(&self) -> f64 {
        if self.vertices.is_empty() {
            return 0.0;
        }
        let (lo, hi) = self.bounding_box();
        (hi - lo).norm()
    }

    /// Unnormalized face normal `(b − a) × (c − a)`.
    pub fn face_normal(&self, t: usize) -> Vec3 {
        let [a, b, c] = self.triangles[t].map(|i| self.vertices[i]);
        (b - a).cross(c - a)
    }

    /// Applies `x ↦ R x + shift` to every vertex.
    pub fn transformed(&self, rotation: [[f64; 3]; 3], shift: Vec3) -> TriangleMesh {
        let apply = |p: Vec3| {
            let r = rotation.map(|row| row[0] * p.x + row[1] * p.y + row[2] * p.z);
            Vec3::new(r[0], r[1], r[2]) + shift
        };
        let mut m = self.clone();
        m.vertices.iter_mut().for_each(|p| *p = apply(*p));
        m.normals = None;
        m
    }
}

/// The `v` grid index that `σ v_j + τ` lands on, if it is a grid node.
fn mapped_index(j: usize, nv: usize, sigma: i8, tau: f64) -> Option<usize> {
    let x = (sigma as f64 * j as f64) + tau / TAU * nv as f64;
    let k = libm::round(x);
    if (x - k).abs() > 1e-9 {
        return None;
    }
    Some((k as i64).rem_euclid(nv as i64) as usize)
}

/// Samples `s` on an `(nu + 1) × (nv + 1)` grid, two triangles per cell.
///
/// Open ends of the `u`-domain are pulled in by `margin · len`; closed ends
/// are sampled exactly. When the seam map is `v ↦ π − v`, an odd `nv` is
/// raised by one so that seam nodes pair up, and the change is recorded.
pub fn tessellate(s: &ParametricSurface, nu: usize, nv: usize, margin: f64) -> Result<TriangleMesh> {
    if nu < 3 || nv < 3 {
        return Err(Error::GridTooCoarse { nu, nv, min: 3 });
    }
    let mut nv_used = nv;
    if let Some(id) = s.identification {
        if id.v_sigma < 0 && (id.v_tau - PI).abs() < 1e-12 && nv % 2 == 1 {
            nv_used += 1;
        }
    }
    let du = s.domain_u.clipped(margin);
    let dv = s.domain_v.clipped(margin);
    let mut vertices = Vec::with_capacity((nu + 1) * (nv_used + 1));
    for i in 0..=nu {
        let u = du.grid(nu, i);
        for j in 0..=nv_used {
            vertices.push(s.eval(u, dv.grid(nv_used, j))?);
        }
    }
    let w = nv_used + 1;
    let mut triangles = Vec::with_capacity(2 * nu * nv_used);
    for i in 0..nu {
        for j in 0..nv_used {
            let (a, b, c, d) = (i * w + j, (i + 1) * w + j, (i + 1) * w + j + 1, i * w + j + 1);
            triangles.push([a, b, c]);
            triangles.push([a, c, d]);
        }
    }
    Ok(TriangleMesh {
        vertices,
        triangles,
        normals: None,
        provenance: Provenance {
            surface: String::from(s.name),
            nu,
            nv: nv_used,
            nv_requested: (nv_used != nv).then_some(nv),
            margin,
            welded: false,
            orientation_conflict: false,
        },
        grid: Some((nu, nv_used)),
    })
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    // the smaller index wins so the result does not depend on merge order
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

/// Merges grid vertices that are the same point of the quotient surface.
///
/// Pairing is by grid index, never by distance: `(i, nv) ~ (i, 0)` for a
/// `2π`-periodic `v`, and `(nu, j′) ~ (0, j)` with `v_j′ = σ v_j + τ` across
/// an exactly glued seam. Paired vertices farther apart than `10³ · tol`
/// mean the identification is wrong. Distance matching within `tol` is
/// used only inside the two `u`-boundary rows of surfaces without an exact
/// seam, where it closes up rows that collapse to a point.
pub fn weld(m: &TriangleMesh, s: &ParametricSurface, tol: f64) -> Result<TriangleMesh> {
    let (nu, nv) = m.grid.ok_or(Error::NotAGrid)?;
    let w = nv + 1;
    let idx = |i: usize, j: usize| i * w + j;
    let mut uf = UnionFind((0..m.vertices.len()).collect());
    let pair = |uf: &mut UnionFind, a: usize, b: usize| -> Result<()> {
        let d = m.vertices[a].distance(m.vertices[b]);
        if d.is_nan() || d > 1e3 * tol {
            return Err(Error::InconsistentSeam { a, b, distance: d });
        }
        uf.union(a, b);
        Ok(())
    };

    let v_periodic = s.domain_v.is_closed() && (s.domain_v.len() - TAU).abs() < 1e-12;
    if v_periodic {
        for i in 0..=nu {
            pair(&mut uf, idx(i, nv), idx(i, 0))?;
        }
    }
    let glued = s.identification.filter(|_| s.seam == SeamClosure::Exact && s.domain_u.is_closed());
    if let Some(id) = glued {
        if !v_periodic {
            return Err(Error::NotAGrid);
        }
        for j in 0..nv {
            let k = mapped_index(j, nv, id.v_sigma, id.v_tau).ok_or(Error::NotAGrid)?;
            pair(&mut uf, idx(nu, k), idx(0, j))?;
        }
    } else {
        for i in [0, nu] {
            for a in 0..=nv {
                for b in a + 1..=nv {
                    if m.vertices[idx(i, a)].distance(m.vertices[idx(i, b)]) <= tol {
                        uf.union(idx(i, a), idx(i, b));
                    }
                }
            }
        }
    }

    let mut new_index = vec![usize::MAX; m.vertices.len()];
    let mut vertices = Vec::new();
    for v in 0..m.vertices.len() {
        let r = uf.find(v);
        if new_index[r] == usize::MAX {
            new_index[r] = vertices.len();
            vertices.push(m.vertices[r]);
        }
        new_index[v] = new_index[r];
    }
    let triangles =
        m.triangles.iter().map(|t| t.map(|i| new_index[i])).filter(|[a, b, c]| a != b && b != c && a != c).collect();
    let mut provenance = m.provenance.clone();
    provenance.welded = true;
    Ok(TriangleMesh { vertices, triangles, normals: None, provenance, grid: None })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct MeshTopologyReport {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub euler_characteristic: i64,
    pub boundary_edge_count: usize,
    /// Edges with more than two incident triangles.
    pub nonmanifold_edge_count: usize,
    pub boundary_loops: usize,
    pub watertight: bool,
    /// `None` when the mesh has boundary and the question does not apply.
    pub orientable: Option<bool>,
}

/// Undirected edges, sorted, with the triangles incident to each.
fn edge_incidence(m: &TriangleMesh) -> Vec<([usize; 2], Vec<usize>)> {
    let mut half: Vec<([usize; 2], usize)> = Vec::with_capacity(3 * m.triangles.len());
    for (t, tri) in m.triangles.iter().enumerate() {
        for k in 0..3 {
            let (a, b) = (tri[k], tri[(k + 1) % 3]);
            half.push(([a.min(b), a.max(b)], t));
        }
    }
    half.sort_unstable();
    let mut out: Vec<([usize; 2], Vec<usize>)> = Vec::new();
    for (e, t) in half {
        match out.last_mut() {
            Some((last, ts)) if *last == e => ts.push(t),
            _ => out.push((e, vec![t])),
        }
    }
    out
}

fn count_boundary_loops(boundary: &[[usize; 2]], n: usize) -> usize {
    let mut uf = UnionFind((0..n).collect());
    let mut touched = vec![false; n];
    for &[a, b] in boundary {
        uf.union(a, b);
        touched[a] = true;
        touched[b] = true;
    }
    (0..n).filter(|&v| touched[v] && uf.find(v) == v).count()
}

/// Counts `V`, `E`, `F`, `χ = V − E + F` and edge incidence.
pub fn euler_characteristic(m: &TriangleMesh) -> MeshTopologyReport {
    let edges = edge_incidence(m);
    let boundary: Vec<[usize; 2]> = edges.iter().filter(|(_, ts)| ts.len() == 1).map(|(e, _)| *e).collect();
    let nonmanifold = edges.iter().filter(|(_, ts)| ts.len() > 2).count();
    let watertight = boundary.is_empty() && nonmanifold == 0;
    let (v, e, f) = (m.vertices.len(), edges.len(), m.triangles.len());
    MeshTopologyReport {
        vertices: v,
        edges: e,
        faces: f,
        euler_characteristic: v as i64 - e as i64 + f as i64,
        boundary_edge_count: boundary.len(),
        nonmanifold_edge_count: nonmanifold,
        boundary_loops: count_boundary_loops(&boundary, v),
        watertight,
        orientable: watertight.then(|| !orientation_conflict(m, &edges)),
    }
}

/// Does `tri` traverse the edge as `a → b`?
fn runs_forward(tri: [usize; 3], a: usize, b: usize) -> bool {
    (0..3).any(|k| tri[k] == a && tri[(k + 1) % 3] == b)
}

/// Breadth-first propagation of triangle orientation over manifold edges.
fn orientation_conflict(m: &TriangleMesh, edges: &[([usize; 2], Vec<usize>)]) -> bool {
    let mut neighbours: Vec<Vec<(usize, [usize; 2])>> = vec![Vec::new(); m.triangles.len()];
    for (e, ts) in edges {
        if let [t0, t1] = ts[..] {
            neighbours[t0].push((t1, *e));
            neighbours[t1].push((t0, *e));
        }
    }
    // flip[t]: whether triangle t must be reversed to agree with its seed
    let mut flip: Vec<Option<bool>> = vec![None; m.triangles.len()];
    let mut queue = VecDeque::new();
    for seed in 0..m.triangles.len() {
        if flip[seed].is_some() {
            continue;
        }
        flip[seed] = Some(false);
        queue.push_back(seed);
        while let Some(t) = queue.pop_front() {
            let ft = flip[t].unwrap_or(false);
            for &(n, [a, b]) in &neighbours[t] {
                // consistent neighbours traverse the shared edge in opposite directions
                let same_dir = runs_forward(m.triangles[t], a, b) == runs_forward(m.triangles[n], a, b);
                let want = ft ^ same_dir;
                match flip[n] {
                    None => {
                        flip[n] = Some(want);
                        queue.push_back(n);
                    }
                    Some(f) if f != want => return true,
                    Some(_) => {}
                }
            }
        }
    }
    false
}

/// Whether the triangles of a closed mesh admit a consistent orientation.
pub fn orientability(m: &TriangleMesh) -> Result<bool> {
    let edges = edge_incidence(m);
    if edges.iter().any(|(_, ts)| ts.len() != 2) {
        return Err(Error::NotWatertight);
    }
    Ok(!orientation_conflict(m, &edges))
}

/// Area-weighted vertex normals, normalized.
///
/// On a non-orientable mesh opposite face orientations can cancel at a
/// vertex; such a vertex takes the normal of its largest incident face.
pub fn compute_normals(m: &TriangleMesh) -> TriangleMesh {
    let mut sum = vec![Vec3::ZERO; m.vertices.len()];
    let mut largest = vec![(0.0, Vec3::ZERO); m.vertices.len()];
    for (t, tri) in m.triangles.iter().enumerate() {
        // |n| is twice the area, so summing raw cross products weights by area
        let n = m.face_normal(t);
        let area = n.norm();
        for &i in tri {
            sum[i] += n;
            if area > largest[i].0 {
                largest[i] = (area, n);
            }
        }
    }
    let normals = sum
        .iter()
        .zip(&largest)
        .map(|(s, (area, n))| {
            let fallback = n.normalized().unwrap_or(Vec3::K);
            if s.norm() <= 1e-12 * area {
                fallback
            } else {
                s.normalized().unwrap_or(fallback)
            }
        })
        .collect();
    let edges = edge_incidence(m);
    let mut out = m.clone();
    out.normals = Some(normals);
    out.provenance.orientation_conflict = orientation_conflict(m, &edges);
    out
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct IntersectionReport {
    pub intersecting_pairs: usize,
    /// Up to [`MAX_SAMPLE_SEGMENTS`] intersection segments, in pair order.
    pub sample_segments: Vec<(Vec3, Vec3)>,
    pub pairs_tested: usize,
    pub cell_size: f64,
    /// Intersecting triangle pairs `(i, j)`, `i < j`, sorted.
    #[cfg_attr(feature = "serde", serde(skip))]
    pub pairs: Vec<(usize, usize)>,
}

pub const MAX_SAMPLE_SEGMENTS: usize = 64;

fn shares_vertex(a: [usize; 3], b: [usize; 3]) -> bool {
    a.iter().any(|i| b.contains(i))
}

/// Signed distances of `p` to the plane through `o` with normal `n`,
/// snapped to 0 within `eps`.
fn plane_side(p: [Vec3; 3], o: Vec3, n: Vec3, eps: f64) -> [f64; 3] {
    p.map(|q| {
        let d = (q - o).dot(n);
        if d.abs() <= eps {
            0.0
        } else {
            d
        }
    })
}

/// Part of triangle `p` on the plane with signed distances `d`, as an
/// interval of the parameter `x · dir`.
fn clip_to_line(p: [Vec3; 3], d: [f64; 3], dir: Vec3) -> Option<(f64, Vec3, f64, Vec3)> {
    let mut lo: Option<(f64, Vec3)> = None;
    let mut hi: Option<(f64, Vec3)> = None;
    let mut add = |q: Vec3| {
        let s = q.dot(dir);
        if lo.is_none_or(|(l, _)| s < l) {
            lo = Some((s, q));
        }
        if hi.is_none_or(|(h, _)| s > h) {
            hi = Some((s, q));
        }
    };
    for k in 0..3 {
        let (a, b) = (k, (k + 1) % 3);
        if d[a] == 0.0 {
            add(p[a]);
        }
        if d[a] * d[b] < 0.0 {
            let t = d[a] / (d[a] - d[b]);
            add(p[a] + (p[b] - p[a]) * t);
        }
    }
    match (lo, hi) {
        (Some((l, pl)), Some((h, ph))) => Some((l, pl, h, ph)),
        _ => None,
    }
}

fn cross2(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Area of the intersection of two planar triangles (Sutherland-Hodgman).
fn coplanar_overlap_area(a: [[f64; 2]; 3], b: [[f64; 2]; 3]) -> f64 {
    let orient = |t: [[f64; 2]; 3]| if cross2(t[0], t[1], t[2]) < 0.0 { [t[0], t[2], t[1]] } else { t };
    let (a, b) = (orient(a), orient(b));
    let mut poly: Vec<[f64; 2]> = a.to_vec();
    for k in 0..3 {
        let (e0, e1) = (b[k], b[(k + 1) % 3]);
        let input = core::mem::take(&mut poly);
        for i in 0..input.len() {
            let (p, q) = (input[i], input[(i + 1) % input.len()]);
            let (sp, sq) = (cross2(e0, e1, p), cross2(e0, e1, q));
            if sp >= 0.0 {
                poly.push(p);
            }
            if sp * sq < 0.0 {
                let t = sp / (sp - sq);
                poly.push([p[0] + (q[0] - p[0]) * t, p[1] + (q[1] - p[1]) * t]);
            }
        }
        if poly.is_empty() {
            return 0.0;
        }
    }
    let mut area = 0.0;
    for i in 0..poly.len() {
        let (p, q) = (poly[i], poly[(i + 1) % poly.len()]);
        area += p[0] * q[1] - q[0] * p[1];
    }
    0.5 * area.abs()
}

/// Triangle–triangle intersection by clipping each triangle against the
/// other's plane. Touching in a point or grazing along a boundary does not
/// count; coplanar triangles count only with positive overlap area.
pub fn triangle_intersection(p: [Vec3; 3], q: [Vec3; 3], eps: f64) -> Option<(Vec3, Vec3)> {
    let np = (p[1] - p[0]).cross(p[2] - p[0]);
    let nq = (q[1] - q[0]).cross(q[2] - q[0]);
    let (np, nq) = (np.normalized()?, nq.normalized()?);
    let dp = plane_side(p, q[0], nq, eps);
    if dp.iter().all(|&d| d > 0.0) || dp.iter().all(|&d| d < 0.0) {
        return None;
    }
    let dq = plane_side(q, p[0], np, eps);
    if dq.iter().all(|&d| d > 0.0) || dq.iter().all(|&d| d < 0.0) {
        return None;
    }
    if dp.iter().all(|&d| d == 0.0) {
        // project on the dominant axis of the normal
        let ax = [np.x.abs(), np.y.abs(), np.z.abs()];
        let drop = if ax[0] >= ax[1] && ax[0] >= ax[2] {
            0
        } else if ax[1] >= ax[2] {
            1
        } else {
            2
        };
        let flat = |t: [Vec3; 3]| {
            t.map(|v| {
                let a = v.to_array();
                match drop {
                    0 => [a[1], a[2]],
                    1 => [a[0], a[2]],
                    _ => [a[0], a[1]],
                }
            })
        };
        let area = coplanar_overlap_area(flat(p), flat(q));
        return (area > eps * eps).then(|| (p[0], p[0]));
    }
    let dir = np.cross(nq).normalized()?;
    let (pl, ppl, ph, pph) = clip_to_line(p, dp, dir)?;
    let (ql, pql, qh, pqh) = clip_to_line(q, dq, dir)?;
    let (lo, plo) = if pl > ql { (pl, ppl) } else { (ql, pql) };
    let (hi, phi) = if ph < qh { (ph, pph) } else { (qh, pqh) };
    (hi - lo > eps).then_some((plo, phi))
}

fn tri_points(m: &TriangleMesh, t: usize) -> [Vec3; 3] {
    m.triangles[t].map(|i| m.vertices[i])
}

/// Default hash cell: twice the median triangle bounding-box diagonal.
pub fn default_cell_size(m: &TriangleMesh) -> f64 {
    let mut diag: Vec<f64> = (0..m.triangles.len())
        .map(|t| {
            let p = tri_points(m, t);
            (p[0].max(p[1]).max(p[2]) - p[0].min(p[1]).min(p[2])).norm()
        })
        .collect();
    if diag.is_empty() {
        return 1.0;
    }
    diag.sort_unstable_by(f64::total_cmp);
    2.0 * diag[diag.len() / 2]
}

fn finish_report(mut found: Vec<(usize, usize, (Vec3, Vec3))>, tested: usize, cell_size: f64) -> IntersectionReport {
    found.sort_unstable_by_key(|&(i, j, _)| (i, j));
    IntersectionReport {
        intersecting_pairs: found.len(),
        sample_segments: found.iter().take(MAX_SAMPLE_SEGMENTS).map(|f| f.2).collect(),
        pairs_tested: tested,
        cell_size,
        pairs: found.iter().map(|&(i, j, _)| (i, j)).collect(),
    }
}

fn intersection_eps(m: &TriangleMesh) -> f64 {
    1e-10 * m.diameter()
}

/// Self-intersecting triangle pairs found through a uniform spatial hash
/// over triangle bounding boxes. Pairs sharing a vertex are skipped.
///
/// A non-positive `cell_size` selects [`default_cell_size`].
pub fn self_intersections(m: &TriangleMesh, cell_size: f64) -> IntersectionReport {
    let eps = intersection_eps(m);
    let mut cell = if cell_size > 0.0 { cell_size } else { default_cell_size(m) };
    let boxes: Vec<(Vec3, Vec3)> = (0..m.triangles.len())
        .map(|t| {
            let p = tri_points(m, t);
            let pad = Vec3::new(eps, eps, eps);
            (p[0].min(p[1]).min(p[2]) - pad, p[0].max(p[1]).max(p[2]) + pad)
        })
        .collect();
    let range = |b: &(Vec3, Vec3), c: f64| {
        let lo = [floor(b.0.x / c), floor(b.0.y / c), floor(b.0.z / c)].map(|x| x as i64);
        let hi = [floor(b.1.x / c), floor(b.1.y / c), floor(b.1.z / c)].map(|x| x as i64);
        (lo, hi)
    };
    // keep the table bounded for pathological cell sizes
    loop {
        let total: f64 = boxes
            .iter()
            .map(|b| {
                let (lo, hi) = range(b, cell);
                (0..3).map(|k| (hi[k] - lo[k] + 1) as f64).product::<f64>()
            })
            .sum();
        if total <= 64.0 * m.triangles.len() as f64 + 1e6 {
            break;
        }
        cell *= 2.0;
    }
    let ranges: Vec<([i64; 3], [i64; 3])> = boxes.iter().map(|b| range(b, cell)).collect();
    let mut entries: Vec<([i64; 3], usize)> = Vec::new();
    for (t, (lo, hi)) in ranges.iter().enumerate() {
        for x in lo[0]..=hi[0] {
            for y in lo[1]..=hi[1] {
                for z in lo[2]..=hi[2] {
                    entries.push(([x, y, z], t));
                }
            }
        }
    }
    entries.sort_unstable();
    let mut found = Vec::new();
    let mut tested = 0;
    let mut start = 0;
    while start < entries.len() {
        let key = entries[start].0;
        let mut end = start;
        while end < entries.len() && entries[end].0 == key {
            end += 1;
        }
        for a in start..end {
            for b in a + 1..end {
                let (i, j) = (entries[a].1, entries[b].1);
                let (ri, rj) = (&ranges[i], &ranges[j]);
                // visit each pair once, in the lowest cell both boxes cover
                let first = [0, 1, 2].map(|k| ri.0[k].max(rj.0[k]));
                if first != key {
                    continue;
                }
                let (bi, bj) = (&boxes[i], &boxes[j]);
                let overlap = bi.0.x <= bj.1.x
                    && bj.0.x <= bi.1.x
                    && bi.0.y <= bj.1.y
                    && bj.0.y <= bi.1.y
                    && bi.0.z <= bj.1.z
                    && bj.0.z <= bi.1.z;
                if !overlap || shares_vertex(m.triangles[i], m.triangles[j]) {
                    continue;
                }
                tested += 1;
                if let Some(seg) = triangle_intersection(tri_points(m, i), tri_points(m, j), eps) {
                    found.push((i.min(j), i.max(j), seg));
                }
            }
        }
        start = end;
    }
    finish_report(found, tested, cell)
}

/// All-pairs reference for [`self_intersections`]; quadratic.
pub fn self_intersections_brute_force(m: &TriangleMesh) -> IntersectionReport {
    let eps = intersection_eps(m);
    let mut found = Vec::new();
    let mut tested = 0;
    for i in 0..m.triangles.len() {
        for j in i + 1..m.triangles.len() {
            if shares_vertex(m.triangles[i], m.triangles[j]) {
                continue;
            }
            tested += 1;
            if let Some(seg) = triangle_intersection(tri_points(m, i), tri_points(m, j), eps) {
                found.push((i, j, seg));
            }
        }
    }
    finish_report(found, tested, 0.0)
}

/// Regular octahedron with outward-facing triangles.
pub fn octahedron() -> TriangleMesh {
    let vertices = vec![
        Vec3::new(1.0, 0.0, 0.0),
        Vec3::new(-1.0, 0.0, 0.0),
        Vec3::new(0.0, 1.0, 0.0),
        Vec3::new(0.0, -1.0, 0.0),
        Vec3::new(0.0, 0.0, 1.0),
        Vec3::new(0.0, 0.0, -1.0),
    ];
    let triangles = vec![[0, 2, 4], [2, 1, 4], [1, 3, 4], [3, 0, 4], [2, 0, 5], [1, 2, 5], [3, 1, 5], [0, 3, 5]];
    TriangleMesh::from_parts("octahedron", vertices, triangles).expect("indices are in range")
}
