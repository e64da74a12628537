//! Finite join-semilattices with zero, their homomorphisms, and biproducts.

use std::fmt;
use std::sync::Arc;

use crate::closure::Space;
use crate::error::{Error, Result};
use crate::factorization::FactorizationSystem;
use crate::limits::Coproduct;
use crate::object::{Mask, Obj};
use crate::report::{Check, Report, Witness};
use crate::subobject::{l_map, preimage, r_map, Subobject, SubobjectLattice};

/// Elements `0..n` with a join table and a zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JoinSemilattice {
    name: String,
    labels: Vec<String>,
    join: Vec<usize>,
    zero: usize,
}

pub type Lat = Arc<JoinSemilattice>;

impl JoinSemilattice {
    /// `join[i][j]` is `i ∨ j`; checks the semilattice laws and that `zero` is neutral.
    pub fn new(
        name: impl Into<String>,
        labels: Vec<String>,
        join: Vec<Vec<usize>>,
        zero: usize,
    ) -> Result<Self> {
        let n = labels.len();
        if join.len() != n || join.iter().any(|row| row.len() != n) {
            return Err(Error::NotASemilattice("join table is not square".into()));
        }
        if n == 0 || zero >= n {
            return Err(Error::NotASemilattice("zero is not an element".into()));
        }
        let s = JoinSemilattice {
            name: name.into(),
            labels,
            join: join.into_iter().flatten().collect(),
            zero,
        };
        if s.join.iter().any(|&k| k >= n) {
            return Err(Error::NotASemilattice("join leaves the carrier".into()));
        }
        for i in 0..n {
            if s.join(i, i) != i {
                return Err(Error::NotASemilattice(format!("{} ∨ {0} ≠ {0}", s.labels[i])));
            }
            if s.join(i, zero) != i {
                return Err(Error::NotASemilattice(format!("zero is not neutral for {}", s.labels[i])));
            }
            for j in 0..n {
                if s.join(i, j) != s.join(j, i) {
                    return Err(Error::NotASemilattice(format!(
                        "join not commutative at {}, {}",
                        s.labels[i], s.labels[j]
                    )));
                }
                for k in 0..n {
                    if s.join(s.join(i, j), k) != s.join(i, s.join(j, k)) {
                        return Err(Error::NotASemilattice(format!(
                            "join not associative at {}, {}, {}",
                            s.labels[i], s.labels[j], s.labels[k]
                        )));
                    }
                }
            }
        }
        Ok(s)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    #[inline]
    pub fn join(&self, i: usize, j: usize) -> usize {
        self.join[i * self.len() + j]
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.join(i, j) == j
    }

    /// Same join table and zero, labels ignored.
    pub fn same_shape(&self, other: &JoinSemilattice) -> bool {
        self.zero == other.zero && self.join == other.join
    }

    /// Nonzero elements that are not the join of two strictly smaller ones.
    pub fn join_irreducibles(&self) -> Vec<usize> {
        let n = self.len();
        (0..n)
            .filter(|&x| x != self.zero)
            .filter(|&x| {
                !(0..n).any(|a| {
                    a != x && self.leq(a, x) && (0..n).any(|b| b != x && self.leq(b, x) && self.join(a, b) == x)
                })
            })
            .collect()
    }

    /// Product `K × L` with componentwise join; element `(i, j)` sits at `i * |L| + j`.
    pub fn product(k: &JoinSemilattice, l: &JoinSemilattice) -> JoinSemilattice {
        let (n, m) = (k.len(), l.len());
        let labels = (0..n)
            .flat_map(|i| (0..m).map(move |j| (i, j)))
            .map(|(i, j)| format!("({},{})", k.label(i), l.label(j)))
            .collect();
        let mut join = Vec::with_capacity(n * m * n * m);
        for a in 0..n * m {
            for b in 0..n * m {
                join.push(k.join(a / m, b / m) * m + l.join(a % m, b % m));
            }
        }
        JoinSemilattice {
            name: format!("{}x{}", k.name, l.name),
            labels,
            join,
            zero: k.zero * m + l.zero,
        }
    }
}

impl fmt::Display for JoinSemilattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({} elements)", self.name, self.len())
    }
}

fn same_lat(a: &Lat, b: &Lat) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Subobjects of one object as a semilattice: element `i` is `masks[i]`.
#[derive(Clone, Debug)]
pub struct MaskLattice {
    pub lattice: Lat,
    pub ambient: Obj,
    pub masks: Vec<Mask>,
}

impl MaskLattice {
    fn build(name: String, ambient: &Obj, masks: Vec<Mask>, join: impl Fn(Mask, Mask) -> Mask) -> Result<Self> {
        let index = |m: Mask| {
            masks
                .iter()
                .position(|&k| k == m)
                .ok_or_else(|| Error::NotASemilattice(format!("join {} missing", ambient.show_mask(m))))
        };
        let mut table = Vec::with_capacity(masks.len());
        for &a in &masks {
            let row: Result<Vec<usize>> = masks.iter().map(|&b| index(join(a, b))).collect();
            table.push(row?);
        }
        let labels = masks.iter().map(|&m| ambient.show_mask(m)).collect();
        let zero = index(0)?;
        let lattice = Arc::new(JoinSemilattice::new(name, labels, table, zero)?);
        Ok(MaskLattice {
            lattice,
            ambient: Arc::clone(ambient),
            masks,
        })
    }

    /// `Sub_M(X)` with joins computed in the subobject lattice.
    pub fn subobjects(sys: FactorizationSystem, x: &Obj) -> Result<Self> {
        let lat = SubobjectLattice::enumerate(sys, x)?;
        let masks: Vec<Mask> = lat.elements.iter().map(Subobject::mask).collect();
        let join = |a: Mask, b: Mask| {
            let i = masks.iter().position(|&k| k == a).expect("element");
            let j = masks.iter().position(|&k| k == b).expect("element");
            lat.lub(i, j).map_or(Mask::MAX, |k| masks[k])
        };
        Self::build(format!("Sub({})", x.name()), x, masks.clone(), join)
    }

    /// Closed subobjects of a space; joins are unions, which stay closed for
    /// additive closures.
    pub fn closed(space: &Space) -> Result<Self> {
        let masks = space.closed_lattice().iter().map(Subobject::mask).collect();
        Self::build(format!("mc({})", space.object().name()), space.object(), masks, |a, b| a | b)
    }

    pub fn index_of(&self, mask: Mask) -> Option<usize> {
        self.masks.iter().position(|&m| m == mask)
    }

    /// A homomorphism given on masks.
    pub fn hom_to(&self, target: &MaskLattice, f: impl Fn(Mask) -> Result<Mask>) -> Result<SemilatticeHom> {
        let mut map = Vec::with_capacity(self.masks.len());
        for &m in &self.masks {
            let image = f(m)?;
            let k = target.index_of(image).ok_or_else(|| {
                Error::NotAHomomorphism(format!(
                    "{} is not an element of {}",
                    target.ambient.show_mask(image),
                    target.lattice.name()
                ))
            })?;
            map.push(k);
        }
        SemilatticeHom::new(Arc::clone(&self.lattice), Arc::clone(&target.lattice), map)
    }
}

/// Join- and zero-preserving map.
#[derive(Clone, Debug)]
pub struct SemilatticeHom {
    source: Lat,
    target: Lat,
    map: Vec<usize>,
}

impl PartialEq for SemilatticeHom {
    fn eq(&self, other: &Self) -> bool {
        self.map == other.map && same_lat(&self.source, &other.source) && same_lat(&self.target, &other.target)
    }
}

impl Eq for SemilatticeHom {}

impl SemilatticeHom {
    pub fn new(source: Lat, target: Lat, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.len() {
            return Err(Error::TableLength {
                expected: source.len(),
                got: map.len(),
            });
        }
        if map.iter().any(|&k| k >= target.len()) {
            return Err(Error::NotAHomomorphism("value outside the target".into()));
        }
        let h = SemilatticeHom { source, target, map };
        if let Some(msg) = h.hom_gap() {
            return Err(Error::NotAHomomorphism(msg));
        }
        Ok(h)
    }

    fn hom_gap(&self) -> Option<String> {
        let (s, t) = (&self.source, &self.target);
        if self.map[s.zero()] != t.zero() {
            return Some("zero not preserved".into());
        }
        for i in 0..s.len() {
            for j in i + 1..s.len() {
                if self.map[s.join(i, j)] != t.join(self.map[i], self.map[j]) {
                    return Some(format!("join of {} and {} not preserved", s.label(i), s.label(j)));
                }
            }
        }
        None
    }

    pub fn identity(s: &Lat) -> Self {
        SemilatticeHom {
            source: Arc::clone(s),
            target: Arc::clone(s),
            map: (0..s.len()).collect(),
        }
    }

    pub fn zero(s: &Lat, t: &Lat) -> Self {
        SemilatticeHom {
            source: Arc::clone(s),
            target: Arc::clone(t),
            map: vec![t.zero(); s.len()],
        }
    }

    pub fn source(&self) -> &Lat {
        &self.source
    }

    pub fn target(&self) -> &Lat {
        &self.target
    }

    pub fn table(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn is_zero(&self) -> bool {
        self.map.iter().all(|&k| k == self.target.zero())
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &SemilatticeHom) -> Result<SemilatticeHom> {
        if !same_lat(&self.target, &g.source) {
            return Err(Error::EndpointMismatch(format!(
                "cannot compose {} after {}",
                g.source.name(),
                self.target.name()
            )));
        }
        Ok(SemilatticeHom {
            source: Arc::clone(&self.source),
            target: Arc::clone(&g.target),
            map: self.map.iter().map(|&i| g.map[i]).collect(),
        })
    }

    /// Pointwise join of parallel homomorphisms.
    pub fn join(&self, other: &SemilatticeHom) -> Result<SemilatticeHom> {
        if !same_lat(&self.source, &other.source) || !same_lat(&self.target, &other.target) {
            return Err(Error::EndpointMismatch("pointwise join needs parallel maps".into()));
        }
        Ok(SemilatticeHom {
            source: Arc::clone(&self.source),
            target: Arc::clone(&self.target),
            map: self
                .map
                .iter()
                .zip(&other.map)
                .map(|(&a, &b)| self.target.join(a, b))
                .collect(),
        })
    }

    fn describe(&self) -> String {
        let entries: Vec<String> = (0..self.source.len())
            .map(|i| format!("{}->{}", self.source.label(i), self.target.label(self.map[i])))
            .collect();
        format!("{} -> {} [{}]", self.source.name(), self.target.name(), entries.join(", "))
    }
}

impl fmt::Display for SemilatticeHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

/// Every homomorphism `s -> t`. A homomorphism is fixed by its values on
/// join-irreducibles, so those are enumerated and the rest is checked.
pub fn all_homs(s: &Lat, t: &Lat) -> Vec<SemilatticeHom> {
    let irr = s.join_irreducibles();
    let below: Vec<Vec<usize>> = (0..s.len())
        .map(|x| irr.iter().enumerate().filter(|&(_, &j)| s.leq(j, x)).map(|(k, _)| k).collect())
        .collect();
    let mut out = Vec::new();
    let mut values = vec![0; irr.len()];
    loop {
        let map: Vec<usize> = below
            .iter()
            .map(|ks| ks.iter().fold(t.zero(), |acc, &k| t.join(acc, values[k])))
            .collect();
        let consistent = irr.iter().enumerate().all(|(k, &j)| map[j] == values[k]);
        if consistent {
            if let Ok(h) = SemilatticeHom::new(Arc::clone(s), Arc::clone(t), map) {
                out.push(h);
            }
        }
        // odometer over assignments of irreducibles
        let mut k = 0;
        while k < values.len() {
            values[k] += 1;
            if values[k] < t.len() {
                break;
            }
            values[k] = 0;
            k += 1;
        }
        if k == values.len() {
            break;
        }
    }
    out
}

/// Candidate biproduct data `K_X ⇄ K_XY ⇄ K_Y`.
#[derive(Clone, Debug)]
pub struct BiproductData {
    pub inj_x: SemilatticeHom,
    pub inj_y: SemilatticeHom,
    pub proj_x: SemilatticeHom,
    pub proj_y: SemilatticeHom,
}

impl BiproductData {
    pub fn kx(&self) -> &Lat {
        self.inj_x.source()
    }

    pub fn ky(&self) -> &Lat {
        self.inj_y.source()
    }

    pub fn kxy(&self) -> &Lat {
        self.inj_x.target()
    }

    /// `Sub(X+Y)` with `L_X`, `R_Y` and the preimages along the injections.
    pub fn subobjects(sys: FactorizationSystem, cop: &Coproduct) -> Result<Self> {
        let kx = MaskLattice::subobjects(sys, cop.left())?;
        let ky = MaskLattice::subobjects(sys, cop.right())?;
        let kxy = MaskLattice::subobjects(sys, &cop.object)?;
        Self::from_lattices(sys, cop, &kx, &ky, &kxy)
    }

    /// Closed subobjects of `X`, `Y` and `X+Y` under the given closures.
    pub fn closed(sys: FactorizationSystem, cop: &Coproduct, sx: &Space, sy: &Space, sxy: &Space) -> Result<Self> {
        let kx = MaskLattice::closed(sx)?;
        let ky = MaskLattice::closed(sy)?;
        let kxy = MaskLattice::closed(sxy)?;
        Self::from_lattices(sys, cop, &kx, &ky, &kxy)
    }

    fn from_lattices(
        sys: FactorizationSystem,
        cop: &Coproduct,
        kx: &MaskLattice,
        ky: &MaskLattice,
        kxy: &MaskLattice,
    ) -> Result<Self> {
        let x = cop.left();
        let y = cop.right();
        let xy = &cop.object;
        Ok(BiproductData {
            inj_x: kx.hom_to(kxy, |m| Ok(l_map(sys, cop, &Subobject::new(x, m))?.mask()))?,
            inj_y: ky.hom_to(kxy, |m| Ok(r_map(sys, cop, &Subobject::new(y, m))?.mask()))?,
            proj_x: kxy.hom_to(kx, |p| Ok(preimage(sys, &cop.inl, &Subobject::new(xy, p))?.mask()))?,
            proj_y: kxy.hom_to(ky, |p| Ok(preimage(sys, &cop.inr, &Subobject::new(xy, p))?.mask()))?,
        })
    }
}

/// `π_X ι_X = id`, `π_Y ι_Y = id`, cross composites zero, and
/// `ι_X π_X ∨ ι_Y π_Y = id`.
pub fn verify_biproduct(d: &BiproductData) -> Result<Report> {
    let (kx, ky, kxy) = (d.kx(), d.ky(), d.kxy());
    let endpoints = same_lat(d.inj_y.target(), kxy)
        && same_lat(d.proj_x.source(), kxy)
        && same_lat(d.proj_y.source(), kxy)
        && same_lat(d.proj_x.target(), kx)
        && same_lat(d.proj_y.target(), ky);
    if !endpoints {
        return Err(Error::EndpointMismatch("biproduct maps do not share endpoints".into()));
    }
    let mut r = Report::new(format!("{} as a biproduct of {} and {}", kxy.name(), kx.name(), ky.name()));

    let mut retract = Check::new("projection-after-injection");
    for (inj, proj) in [(&d.inj_x, &d.proj_x), (&d.inj_y, &d.proj_y)] {
        let c = inj.then(proj)?;
        retract.record(c == SemilatticeHom::identity(inj.source()), || {
            Witness::new(format!("π∘ι is not the identity: {c}"))
        });
    }
    let mut cross = Check::new("cross-terms-zero");
    for (inj, proj) in [(&d.inj_x, &d.proj_y), (&d.inj_y, &d.proj_x)] {
        let c = inj.then(proj)?;
        cross.record(c.is_zero(), || Witness::new(format!("cross composite is not zero: {c}")));
    }
    let mut sum = Check::new("injection-projection-sum");
    let s = d.proj_x.then(&d.inj_x)?.join(&d.proj_y.then(&d.inj_y)?)?;
    sum.record(s == SemilatticeHom::identity(kxy), || {
        Witness::new(format!("ι_X π_X ∨ ι_Y π_Y is not the identity: {s}"))
    });
    r.checks = vec![retract, cross, sum];
    Ok(r)
}

/// Biproduct data whose equations have been checked.
#[derive(Clone, Debug)]
pub struct Biproduct {
    data: BiproductData,
}

impl Biproduct {
    pub fn verify(data: BiproductData) -> Result<Self> {
        let r = verify_biproduct(&data)?;
        match r.first_failure() {
            None => Ok(Biproduct { data }),
            Some(c) => Err(Error::UnverifiedBiproduct(c.id.clone())),
        }
    }

    pub fn data(&self) -> &BiproductData {
        &self.data
    }

    fn inj(&self, i: usize) -> &SemilatticeHom {
        [&self.data.inj_x, &self.data.inj_y][i]
    }

    fn proj(&self, i: usize) -> &SemilatticeHom {
        [&self.data.proj_x, &self.data.proj_y][i]
    }
}

/// `entries[i][j]: K_j(source) -> K_i(target)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomMatrix {
    pub entries: [[SemilatticeHom; 2]; 2],
}

impl HomMatrix {
    /// `(B A)_ik = ∨_j B_ij ∘ A_jk`.
    pub fn then(&self, b: &HomMatrix) -> Result<HomMatrix> {
        let entry = |i: usize, k: usize| -> Result<SemilatticeHom> {
            self.entries[0][k]
                .then(&b.entries[i][0])?
                .join(&self.entries[1][k].then(&b.entries[i][1])?)
        };
        Ok(HomMatrix {
            entries: [[entry(0, 0)?, entry(0, 1)?], [entry(1, 0)?, entry(1, 1)?]],
        })
    }
}

fn check_hom_endpoints(h: &SemilatticeHom, src: &Biproduct, tgt: &Biproduct) -> Result<()> {
    if same_lat(h.source(), src.data.kxy()) && same_lat(h.target(), tgt.data.kxy()) {
        Ok(())
    } else {
        Err(Error::EndpointMismatch(format!("{} does not run between the biproducts", h.describe())))
    }
}

/// `h ↦ (π_i ∘ h ∘ ι_j)`.
pub fn hom_matrix(h: &SemilatticeHom, src: &Biproduct, tgt: &Biproduct) -> Result<HomMatrix> {
    check_hom_endpoints(h, src, tgt)?;
    let entry = |i: usize, j: usize| src.inj(j).then(h)?.then(tgt.proj(i));
    Ok(HomMatrix {
        entries: [[entry(0, 0)?, entry(0, 1)?], [entry(1, 0)?, entry(1, 1)?]],
    })
}

/// `(m_ij) ↦ ∨_ij ι_i ∘ m_ij ∘ π_j`.
pub fn matrix_to_hom(m: &HomMatrix, src: &Biproduct, tgt: &Biproduct) -> Result<SemilatticeHom> {
    let mut acc = SemilatticeHom::zero(src.data.kxy(), tgt.data.kxy());
    for i in 0..2 {
        for j in 0..2 {
            let term = src.proj(j).then(&m.entries[i][j])?.then(tgt.inj(i))?;
            acc = acc.join(&term)?;
        }
    }
    Ok(acc)
}
