//! Polar structures `(M, G, Σ, Π)` and the checks on the section itself.

use std::fmt;
use std::sync::Arc;

use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::geometry::Submanifold;
use crate::liegroups::{Action, GroupElement};
use crate::numcore::{sample_rng, Mat};
use crate::sampling::SampledMax;

pub type Sampler = Arc<dyn Fn(&mut ChaCha8Rng) -> Vec<f64> + Send + Sync>;
/// Closed form of `x ↦ h₁` with `h₁·x ∈ Σ`.
pub type Canonicalizer = Arc<dyn Fn(&[f64]) -> Result<GroupElement> + Send + Sync>;
/// Closed form of `(x, v) ↦ h₂ ∈ G_x` with `h₂·v ∈ T_xΣ`, for `x ∈ Σ` and `v`
/// in the slice at `x`.
pub type SliceCanonicalizer = Arc<dyn Fn(&[f64], &[f64]) -> Result<GroupElement> + Send + Sync>;

/// Distance below which a point counts as lying on `Σ`.
pub const ON_SECTION_TOL: f64 = 1e-8;
/// Agreement required between products of Weyl elements.
pub const CLOSURE_TOL: f64 = 1e-10;
/// Elements must map `Σ` into `Σ` this precisely.
pub const PRESERVE_TOL: f64 = 1e-9;
const MAX_WEYL_ORDER: usize = 4096;

#[derive(Clone)]
pub struct PolarStructure {
    pub name: String,
    pub action: Action,
    pub section: Submanifold,
    /// Elements of `N(Σ)` whose classes generate `Π`.
    pub weyl_generators: Vec<GroupElement>,
    pub expected_weyl_order: Option<usize>,
    /// Extra elements of `G` that may fix points of `T*Σ` without lying in
    /// the identity component of the stabilizer.
    pub isotropy_candidates: Vec<GroupElement>,
    /// `dim 𝔤_x` on the principal stratum.
    pub principal_isotropy_dim: usize,
    pub(crate) canonicalize: Option<Canonicalizer>,
    pub(crate) slice_canonicalize: Option<SliceCanonicalizer>,
    pub(crate) base_sampler: Sampler,
    pub(crate) section_sampler: Sampler,
}

impl fmt::Debug for PolarStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PolarStructure")
            .field("name", &self.name)
            .field("section", &self.section.name())
            .field("weyl_generators", &self.weyl_generators.len())
            .field("closed_forms", &self.canonicalize.is_some())
            .finish()
    }
}

impl PolarStructure {
    /// A structure without closed forms; projections fall back to search.
    pub fn custom(name: &str, action: Action, section: Submanifold, base_sampler: Sampler, section_sampler: Sampler) -> Self {
        PolarStructure {
            name: name.to_string(),
            action,
            section,
            weyl_generators: Vec::new(),
            expected_weyl_order: None,
            isotropy_candidates: Vec::new(),
            principal_isotropy_dim: 0,
            canonicalize: None,
            slice_canonicalize: None,
            base_sampler,
            section_sampler,
        }
    }

    pub fn with_weyl_generators(mut self, gens: Vec<GroupElement>, expected_order: Option<usize>) -> Self {
        self.weyl_generators = gens;
        self.expected_weyl_order = expected_order;
        self
    }

    pub fn with_principal_isotropy_dim(mut self, d: usize) -> Self {
        self.principal_isotropy_dim = d;
        self
    }

    pub fn has_closed_forms(&self) -> bool {
        self.canonicalize.is_some()
    }

    /// Drops the closed forms so that every projection goes through search.
    pub fn without_closed_forms(mut self) -> Self {
        self.canonicalize = None;
        self.slice_canonicalize = None;
        self
    }

    pub fn sample_base(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        (self.base_sampler)(rng)
    }

    pub fn sample_section_param(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        (self.section_sampler)(rng)
    }

    pub fn base_sampler(&self) -> &(dyn Fn(&mut ChaCha8Rng) -> Vec<f64> + Send + Sync) {
        &*self.base_sampler
    }

    pub fn section_sampler(&self) -> &(dyn Fn(&mut ChaCha8Rng) -> Vec<f64> + Send + Sync) {
        &*self.section_sampler
    }

    /// Map induced by `g` on section parameters, provided it is linear and
    /// preserves `Σ`.
    pub fn induced_section_map(&self, g: &GroupElement) -> Result<Mat<f64>> {
        let k = self.section.dim();
        let c = 0.5;
        let mut map = Mat::zeros(k, k);
        for j in 0..k {
            let mut s = vec![0.0; k];
            s[j] = c;
            let y = self.action.act(g, &self.section.point(&s));
            let t = self.section.locate(&y);
            for i in 0..k {
                map[(i, j)] = t[i] / c;
            }
        }
        let mut rng = sample_rng(0x5eed, "induced-map", 0);
        for _ in 0..5 {
            let s = self.sample_section_param(&mut rng);
            let y = self.action.act(g, &self.section.point(&s));
            let d = self.section.distance(&y);
            if d > PRESERVE_TOL {
                return Err(Error::Violation(format!("element moves {} off itself by {d:.3e}", self.section.name())));
            }
            let t = self.section.locate(&y);
            let ms = map.matvec(&s);
            let r = t.iter().zip(&ms).fold(0.0f64, |a, (p, q)| a.max((p - q).abs()));
            if r > PRESERVE_TOL * (1.0 + s.iter().fold(0.0f64, |a, v| a.max(v.abs()))) {
                return Err(Error::NonLinearAction(format!("induced map on {} (residual {r:.3e})", self.section.name())));
            }
        }
        Ok(map)
    }
}

/// `Π(Σ) = N(Σ)/Z(Σ)` as one representative per induced map.
#[derive(Clone, Debug)]
pub struct WeylGroup {
    pub elements: Vec<GroupElement>,
    /// `k × k` maps on section parameters, aligned with `elements`.
    pub section_maps: Vec<Mat<f64>>,
}

impl WeylGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn act_on_section(&self, i: usize, s: &[f64]) -> Vec<f64> {
        self.section_maps[i].matvec(s)
    }

    fn position(&self, m: &Mat<f64>) -> Option<usize> {
        self.section_maps.iter().position(|q| q.dist(m) < 1e-6)
    }

    /// Largest mismatch between a product of two maps and its table entry.
    pub fn closure_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in &self.section_maps {
            for b in &self.section_maps {
                let p = a.matmul(b);
                let r = self.section_maps.iter().map(|q| q.dist(&p)).fold(f64::INFINITY, f64::min);
                worst = worst.max(r);
            }
        }
        worst
    }
}

/// Closes the generators under composition, identifying elements that act
/// identically on `Σ`.
pub fn compute_weyl_group(ps: &PolarStructure) -> Result<WeylGroup> {
    let id = ps.action.group.identity();
    let mut w = WeylGroup { section_maps: vec![ps.induced_section_map(&id)?], elements: vec![id] };
    let gen_maps: Vec<Mat<f64>> = ps.weyl_generators.iter().map(|g| ps.induced_section_map(g)).collect::<Result<_>>()?;
    let mut frontier = vec![0usize];
    while let Some(i) = frontier.pop() {
        for (g, gm) in ps.weyl_generators.iter().zip(&gen_maps) {
            let m = gm.matmul(&w.section_maps[i]);
            if w.position(&m).is_none() {
                let e = g.compose(&w.elements[i]);
                w.elements.push(e);
                w.section_maps.push(m);
                frontier.push(w.elements.len() - 1);
                if w.elements.len() > MAX_WEYL_ORDER {
                    return Err(Error::ClosureFailure { residual: f64::INFINITY });
                }
            }
        }
    }
    let r = w.closure_residual();
    if r > CLOSURE_TOL {
        return Err(Error::ClosureFailure { residual: r });
    }
    Ok(w)
}

#[derive(Clone, Debug, Serialize)]
pub struct SectionReport {
    /// Cosine between generator fields and tangent vectors of `Σ`.
    pub orthogonality: SampledMax,
    /// Distance to `Σ` after projecting random points.
    pub meeting: SampledMax,
}

/// Orthogonality of orbits to `Σ` at points of `Σ`, and that `Σ` meets the
/// orbits of random points.
pub fn verify_section(ps: &PolarStructure, samples: usize, seed: u64) -> Result<SectionReport> {
    let m = ps.action.manifold.clone();
    let mut orthogonality = SampledMax::new();
    let mut meeting = SampledMax::new();
    for i in 0..samples {
        let mut rng = sample_rng(seed, "section-orthogonality", i as u64);
        let s = ps.sample_section_param(&mut rng);
        let x = ps.section.point(&s);
        let mut worst: f64 = 0.0;
        for gen in ps.action.generators(&x) {
            let gn = m.norm(&x, &gen);
            if gn < 1e-12 {
                continue;
            }
            for t in ps.section.tangent_basis(&s) {
                worst = worst.max(m.inner(&x, &gen, &t).abs() / (gn * m.norm(&x, &t)));
            }
        }
        orthogonality.observe(i, worst, || json!({ "section_param": s }));

        let mut rng = sample_rng(seed, "section-meeting", i as u64);
        let x = ps.sample_base(&mut rng);
        let r = match super::projection::project_point(ps, &x) {
            Ok(p) => ps.section.distance(&ps.action.act(&p.element, &x)),
            Err(_) => f64::INFINITY,
        };
        meeting.observe(i, r, || json!({ "point": x }));
    }
    Ok(SectionReport { orthogonality, meeting })
}

#[derive(Clone, Debug, Serialize)]
pub struct TotallyGeodesicReport {
    /// `‖B_Σ(u, v)‖` for unit tangent vectors of `Σ ⊂ M`.
    pub base: SampledMax,
    /// Sasaki norm of the second fundamental form of `TΣ ⊂ TM`.
    pub lifted: SampledMax,
}

/// Second fundamental forms of `Σ` in `M` and of `TΣ` in `(TM, g̃)`.
pub fn check_tsigma_totally_geodesic(ps: &PolarStructure, samples: usize, seed: u64) -> Result<TotallyGeodesicReport> {
    use rand::Rng;
    let m = ps.section.ambient();
    let mut base = SampledMax::new();
    for i in 0..samples {
        let mut rng = sample_rng(seed, "section-sff", i as u64);
        let s = ps.sample_section_param(&mut rng);
        let x = ps.section.point(&s);
        let t = ps.section.tangent_basis(&s);
        let combo = |rng: &mut ChaCha8Rng| -> Vec<f64> {
            let c: Vec<f64> = t.iter().map(|_| rng.random_range(-1.0..1.0)).collect();
            let v: Vec<f64> = (0..x.len()).map(|j| t.iter().zip(&c).map(|(tv, cv)| tv[j] * cv).sum()).collect();
            let nrm = m.norm(&x, &v).max(f64::MIN_POSITIVE);
            v.iter().map(|e| e / nrm).collect()
        };
        let (u, v) = (combo(&mut rng), combo(&mut rng));
        let b = ps.section.sff_at_param(&s, &u, &v)?;
        base.observe(i, m.norm(&x, &b), || json!({ "section_param": s, "u": u, "v": v }));
    }
    let lifted = crate::sasaki::tsigma_violation(&ps.section, samples, seed, ps.section_sampler())?;
    Ok(TotallyGeodesicReport { base, lifted })
}
