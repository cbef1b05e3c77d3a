use std::sync::Arc;

use num_complex::Complex;
use rand::Rng;

use crate::group::{haar_sample, ColorMatrix, GroupElement, GroupError, GroupLabel};
use crate::lattice::{LatticeGeometry, LinkIndex, Orientation, PlaquetteIndex};
use crate::scalar::{czero, Real};

use super::WilsonError;

/// One group element per directed link of a periodic lattice.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeConfiguration<T> {
    geometry: Arc<LatticeGeometry>,
    group: GroupLabel,
    links: Vec<GroupElement<T>>,
}

impl<T: Real> GaugeConfiguration<T> {
    /// Cold start: every link is the identity.
    pub fn cold(geometry: Arc<LatticeGeometry>, group: GroupLabel) -> Self {
        let links = vec![GroupElement::identity(group); geometry.link_count()];
        Self {
            geometry,
            group,
            links,
        }
    }

    /// Hot start: every link drawn from the Haar measure.
    pub fn hot<R: Rng + ?Sized>(geometry: Arc<LatticeGeometry>, group: GroupLabel, rng: &mut R) -> Self {
        let links = (0..geometry.link_count()).map(|_| haar_sample(group, rng)).collect();
        Self {
            geometry,
            group,
            links,
        }
    }

    /// Builds a configuration from links in link-id order.
    pub fn from_links(
        geometry: Arc<LatticeGeometry>,
        group: GroupLabel,
        links: Vec<GroupElement<T>>,
    ) -> Result<Self, WilsonError> {
        if links.len() != geometry.link_count() {
            return Err(WilsonError::LinkCount {
                expected: geometry.link_count(),
                got: links.len(),
            });
        }
        if let Some(bad) = links.iter().find(|u| u.group() != group) {
            return Err(GroupError::GroupMismatch {
                left: group,
                right: bad.group(),
            }
            .into());
        }
        Ok(Self {
            geometry,
            group,
            links,
        })
    }

    #[inline]
    pub fn geometry(&self) -> &LatticeGeometry {
        &self.geometry
    }

    pub fn geometry_arc(&self) -> &Arc<LatticeGeometry> {
        &self.geometry
    }

    #[inline]
    pub fn group(&self) -> GroupLabel {
        self.group
    }

    #[inline]
    pub fn links(&self) -> &[GroupElement<T>] {
        &self.links
    }

    #[inline]
    pub fn link(&self, link: LinkIndex) -> &GroupElement<T> {
        &self.links[link.site * self.geometry.ndim() + link.dir]
    }

    #[inline]
    pub(crate) fn link_at(&self, site: usize, dir: usize) -> &GroupElement<T> {
        &self.links[site * self.geometry.ndim() + dir]
    }

    /// Replaces one link. Panics if the element belongs to another group.
    pub fn set_link(&mut self, link: LinkIndex, value: GroupElement<T>) {
        assert_eq!(value.group(), self.group, "group mismatch");
        let id = self.geometry.link_id(link);
        self.links[id] = value;
    }

    /// Re-projects every link onto the group.
    pub fn reunitarize(&mut self) -> Result<(), WilsonError> {
        for (id, u) in self.links.iter_mut().enumerate() {
            *u = u.reunitarize().map_err(|source| WilsonError::Reunitarize { link: id, source })?;
        }
        Ok(())
    }

    /// Largest `‖U†U − I‖_max` over all links.
    pub fn max_unitarity_defect(&self) -> T {
        self.links
            .iter()
            .map(|u| u.unitarity_defect())
            .fold(T::zero(), T::max)
    }

    /// Ordered product `U₁ U₂ U₃† U₄†` around the plaquette.
    pub fn plaquette_product(&self, p: PlaquetteIndex) -> GroupElement<T> {
        let g = &*self.geometry;
        let x = p.site;
        let u1 = self.link_at(x, p.mu);
        let u2 = self.link_at(g.forward(x, p.mu), p.nu);
        let u3 = self.link_at(g.forward(x, p.nu), p.mu);
        let u4 = self.link_at(x, p.nu);
        (*u1 * *u2).mul_adjoint(&(*u4 * *u3))
    }

    /// Wilson action `Σ_p (1 − (1/N) Re Tr U_p)`.
    pub fn action(&self) -> T {
        T::of_usize(self.geometry.plaquette_count()) - self.plaquette_trace_sum()
    }

    /// Mean of `(1/N) Re Tr U_p` over all plaquettes.
    pub fn average_plaquette(&self) -> T {
        let count = self.geometry.plaquette_count();
        if count == 0 {
            return T::one();
        }
        self.plaquette_trace_sum() / T::of_usize(count)
    }

    fn plaquette_trace_sum(&self) -> T {
        let g = &*self.geometry;
        let d = g.ndim();
        let mut sum = T::zero();
        for x in g.sites() {
            for mu in 0..d {
                let u_mu = self.link_at(x, mu);
                let xm = g.forward(x, mu);
                for nu in (mu + 1)..d {
                    let upper = *u_mu * *self.link_at(xm, nu);
                    let lower = *self.link_at(x, nu) * *self.link_at(g.forward(x, nu), mu);
                    sum += upper.matrix().re_trace_mul_adjoint(lower.matrix());
                }
            }
        }
        sum / T::of_usize(self.group.n())
    }

    /// Sum over the 2(ndim − 1) plaquettes containing `link` of the product
    /// of the other three links, oriented as a path from `x` to `x + μ`.
    /// With `S` the staple sum, the plaquettes touching the link contribute
    /// `Re Tr(U S†)` to `Σ_p Re Tr U_p`.
    pub fn staple_sum(&self, link: LinkIndex) -> ColorMatrix<T> {
        let g = &*self.geometry;
        let (x, mu) = (link.site, link.dir);
        let xm = g.forward(x, mu);
        let mut s = ColorMatrix::zeros(self.group.n());
        for nu in 0..g.ndim() {
            if nu == mu {
                continue;
            }
            // up: U_ν(x) U_μ(x+ν) U_ν(x+μ)†
            let up = (*self.link_at(x, nu) * *self.link_at(g.forward(x, nu), mu)).mul_adjoint(self.link_at(xm, nu));
            // down: U_ν(x−ν)† U_μ(x−ν) U_ν(x−ν+μ)
            let xd = g.backward(x, nu);
            let down = self.link_at(xd, nu).adjoint_mul(&(*self.link_at(xd, mu) * *self.link_at(g.forward(xd, mu), nu)));
            s += *up.matrix();
            s += *down.matrix();
        }
        s
    }

    /// Change of the Wilson action (without β) if `link` were replaced by `new`:
    /// `−(1/N) Re Tr((U′ − U) S†)`.
    pub fn delta_action(&self, link: LinkIndex, new: &GroupElement<T>) -> T {
        let staple = self.staple_sum(link);
        delta_action_with_staple(self.link(link), new, &staple)
    }

    /// Applies `U_{x,μ} → g_x U_{x,μ} g†_{x+μ}`.
    pub fn gauge_transform(&self, g: &[GroupElement<T>]) -> Result<Self, WilsonError> {
        let geo = &*self.geometry;
        if g.len() != geo.volume() {
            return Err(WilsonError::TransformLength {
                expected: geo.volume(),
                got: g.len(),
            });
        }
        if let Some(bad) = g.iter().find(|e| e.group() != self.group) {
            return Err(GroupError::GroupMismatch {
                left: self.group,
                right: bad.group(),
            }
            .into());
        }
        let d = geo.ndim();
        let links = self
            .links
            .iter()
            .enumerate()
            .map(|(id, u)| {
                let (x, mu) = (id / d, id % d);
                (g[x] * *u).mul_adjoint(&g[geo.forward(x, mu)])
            })
            .collect();
        Ok(Self {
            geometry: self.geometry.clone(),
            group: self.group,
            links,
        })
    }

    /// Gauge transformation that sets every time-direction link to the
    /// identity except those leaving the final time slice. On a periodic
    /// lattice the final links keep the Polyakov line of their spatial site.
    pub fn temporal_gauge_transform(&self) -> Vec<GroupElement<T>> {
        let geo = &*self.geometry;
        let t_dir = geo.time_dir();
        let nt = geo.extent(t_dir);
        let mut g = vec![GroupElement::identity(self.group); geo.volume()];
        for x in geo.sites().filter(|&x| geo.coord(x, t_dir) == 0) {
            let mut site = x;
            for _ in 0..nt - 1 {
                let next = geo.forward(site, t_dir);
                // g(x,t+1) = g(x,t) U_t(x,t)  ⇒  g(x,t) U g(x,t+1)† = I
                g[next] = g[site] * *self.link_at(site, t_dir);
                site = next;
            }
        }
        g
    }

    pub fn temporal_gauge_fix(&self) -> Self {
        let g = self.temporal_gauge_transform();
        self.gauge_transform(&g).expect("transform built for this configuration")
    }

    /// Ordered product of time links winding once around the time direction
    /// starting at `site`.
    pub fn polyakov_line(&self, site: usize) -> GroupElement<T> {
        let geo = &*self.geometry;
        let t_dir = geo.time_dir();
        let mut p = GroupElement::identity(self.group);
        let mut s = site;
        for _ in 0..geo.extent(t_dir) {
            p = p * *self.link_at(s, t_dir);
            s = geo.forward(s, t_dir);
        }
        p
    }

    /// Spatial average of `(1/N) Tr P(x)`.
    pub fn polyakov_loop(&self) -> Complex<T> {
        let geo = &*self.geometry;
        let t_dir = geo.time_dir();
        let mut sum = czero();
        let mut count = 0usize;
        for x in geo.sites().filter(|&x| geo.coord(x, t_dir) == 0) {
            sum += self.polyakov_line(x).trace();
            count += 1;
        }
        sum / T::of_usize(count * self.group.n())
    }

    /// Ordered product of links along a path given as a starting site and a
    /// sequence of signed steps (`(dir, Forward)` follows `U`, `Backward` follows `U†`).
    pub fn path_product(&self, start: usize, steps: &[(usize, Orientation)]) -> GroupElement<T> {
        let geo = &*self.geometry;
        let mut p = GroupElement::identity(self.group);
        let mut s = start;
        for &(dir, o) in steps {
            match o {
                Orientation::Forward => {
                    p = p * *self.link_at(s, dir);
                    s = geo.forward(s, dir);
                }
                Orientation::Backward => {
                    let prev = geo.backward(s, dir);
                    p = p.mul_adjoint(self.link_at(prev, dir));
                    s = prev;
                }
            }
        }
        p
    }

    /// Converts every link to another scalar width.
    pub fn convert<B: Real>(&self) -> GaugeConfiguration<B> {
        GaugeConfiguration {
            geometry: self.geometry.clone(),
            group: self.group,
            links: self.links.iter().map(|u| u.convert()).collect(),
        }
    }
}

#[inline]
pub(crate) fn delta_action_with_staple<T: Real>(
    old: &GroupElement<T>,
    new: &GroupElement<T>,
    staple: &ColorMatrix<T>,
) -> T {
    let n = T::of_usize(old.group().n());
    -(new.matrix().re_trace_mul_adjoint(staple) - old.matrix().re_trace_mul_adjoint(staple)) / n
}

/// Random gauge transformation: one Haar-distributed element per site.
pub fn random_gauge_transform<T: Real, R: Rng + ?Sized>(
    geometry: &LatticeGeometry,
    group: GroupLabel,
    rng: &mut R,
) -> Vec<GroupElement<T>> {
    (0..geometry.volume()).map(|_| haar_sample(group, rng)).collect()
}
