//! Sheaf-level slopes `μ_{H,F}` and `μ_C`, the base-direction charges, and
//! Harder–Narasimhan filtrations over finite subobject lattices.

use std::collections::{BTreeMap, BTreeSet};

use crate::charge::{ChargeValue, Slope};
use crate::chern::ContractedClass;
use crate::error::{Error, Result};
use crate::geometry::FibredGeometry;
use crate::scalar::Scalar;
use crate::tilt::{self, TiltParams};

/// `μ_{H,F} = HF·ch1 / (H^2F·ch0)`, `+∞` in rank zero.
pub fn mu_hf<S: Scalar>(v: &ContractedClass<S>, geom: &FibredGeometry<S>) -> Slope<S> {
    if v.ch0.is_zero() {
        Slope::PlusInfinity
    } else {
        Slope::Finite(v.hf_ch1.clone() / (geom.h2f().clone() * v.ch0.clone()))
    }
}

/// `Z_{K(C)} = -HF·ch1 + i·H^2F·ch0`.
pub fn z_base<S: Scalar>(v: &ContractedClass<S>, geom: &FibredGeometry<S>) -> ChargeValue<S> {
    ChargeValue::new(-v.hf_ch1.clone(), geom.h2f().clone() * v.ch0.clone())
}

/// `Z_{C-tor} = -H·ch2 + i·H^2·ch1`.
pub fn z_base_torsion<S: Scalar>(v: &ContractedClass<S>) -> ChargeValue<S> {
    ChargeValue::new(-v.h_ch2.clone(), v.h2_ch1.clone())
}

/// Whether `v` is treated as C-torsion. Without a hint the numerical proxy
/// `ch0 = 0 ∧ HF·ch1 = 0` is used; it is necessary, not sufficient.
///
/// `hf_component` is the `HF·ch1`-type number relevant to the caller
/// (untwisted for `μ_C`, twisted for `ν_C`).
pub(crate) fn resolve_torsion<S: Scalar>(ch0: &S, hf_component: &S, hint: Option<bool>) -> Result<bool> {
    match hint {
        Some(true) => {
            if !ch0.is_zero() || !hf_component.is_zero() {
                return Err(Error::InconsistentHint(format!(
                    "class with ch0 = {ch0}, HF-degree {hf_component} cannot be C-torsion"
                )));
            }
            Ok(true)
        }
        Some(false) => Ok(false),
        None => Ok(ch0.is_zero() && hf_component.is_zero()),
    }
}

/// The charge `Z_C`: `Z_{K(C)}` off C-torsion classes, `Z_{C-tor}` on them.
pub fn z_c<S: Scalar>(v: &ContractedClass<S>, geom: &FibredGeometry<S>, hint: Option<bool>) -> Result<ChargeValue<S>> {
    if resolve_torsion(&v.ch0, &v.hf_ch1, hint)? {
        Ok(z_base_torsion(v))
    } else {
        Ok(z_base(v, geom))
    }
}

pub fn mu_c<S: Scalar>(v: &ContractedClass<S>, geom: &FibredGeometry<S>, hint: Option<bool>) -> Result<Slope<S>> {
    let torsion = resolve_torsion(&v.ch0, &v.hf_ch1, hint)?;
    if !v.ch0.is_zero() {
        return Ok(mu_hf(v, geom));
    }
    if torsion && !v.h2_ch1.is_zero() {
        return Ok(Slope::Finite(v.h_ch2.clone() / v.h2_ch1.clone()));
    }
    Ok(Slope::PlusInfinity)
}

/// Which slope function a filtration is computed for.
#[derive(Debug, Clone, PartialEq)]
pub enum SlopeFunction<S> {
    MuHf,
    MuC { hint: Option<bool> },
    NuRelative { alpha_sq: S, beta: S },
    NuMixed(TiltParams<S>),
}

impl<S: Scalar> SlopeFunction<S> {
    pub fn slope(&self, v: &ContractedClass<S>, geom: &FibredGeometry<S>) -> Result<Slope<S>> {
        match self {
            SlopeFunction::MuHf => Ok(mu_hf(v, geom)),
            SlopeFunction::MuC { hint } => mu_c(v, geom, *hint),
            SlopeFunction::NuRelative { alpha_sq, beta } => Ok(tilt::nu_relative(v, alpha_sq, beta, geom)),
            SlopeFunction::NuMixed(p) => Ok(tilt::nu_mixed(v, p, geom)),
        }
    }

    /// The charge whose `-Re/Im` the slope is.
    pub fn charge(&self, v: &ContractedClass<S>, geom: &FibredGeometry<S>) -> Result<ChargeValue<S>> {
        match self {
            SlopeFunction::MuHf => Ok(z_base(v, geom)),
            SlopeFunction::MuC { hint } => z_c(v, geom, *hint),
            SlopeFunction::NuRelative { alpha_sq, beta } => Ok(tilt::z_relative(v, alpha_sq, beta, geom)),
            SlopeFunction::NuMixed(p) => Ok(tilt::z_mixed(v, p, geom)),
        }
    }
}

/// A finite poset of subobject classes of a root class.
///
/// An edge `(a, b)` records that `a` is a subobject of `b`; inclusion is the
/// transitive closure. Every node must be contained in the root.
#[derive(Debug, Clone)]
pub struct SubobjectLattice<S> {
    nodes: BTreeMap<String, ContractedClass<S>>,
    root: String,
    /// node -> nodes strictly contained in it
    below: BTreeMap<String, BTreeSet<String>>,
}

impl<S: Scalar> SubobjectLattice<S> {
    pub fn new(
        nodes: BTreeMap<String, ContractedClass<S>>,
        edges: &[(String, String)],
        root: impl Into<String>,
    ) -> Result<Self> {
        let root = root.into();
        if !nodes.contains_key(&root) {
            return Err(Error::InvalidLattice(format!("root `{root}` is not a node")));
        }
        let mut up: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for (a, b) in edges {
            for id in [a, b] {
                if !nodes.contains_key(id) {
                    return Err(Error::InvalidLattice(format!("edge mentions unknown node `{id}`")));
                }
            }
            if a == b {
                return Err(Error::InvalidLattice(format!("self-inclusion on `{a}`")));
            }
            up.entry(a.as_str()).or_default().push(b.as_str());
        }

        // above[n] = nodes strictly containing n, by DFS from each node
        let mut below: BTreeMap<String, BTreeSet<String>> =
            nodes.keys().map(|k| (k.clone(), BTreeSet::new())).collect();
        for start in nodes.keys() {
            let mut seen = BTreeSet::new();
            let mut stack: Vec<&str> = up.get(start.as_str()).cloned().unwrap_or_default();
            while let Some(n) = stack.pop() {
                if n == start {
                    return Err(Error::InvalidLattice(format!("inclusion cycle through `{start}`")));
                }
                if seen.insert(n) {
                    stack.extend(up.get(n).into_iter().flatten().copied());
                }
            }
            if start != &root && !seen.contains(root.as_str()) {
                return Err(Error::InvalidLattice(format!("node `{start}` is not below the root")));
            }
            for n in seen {
                below.get_mut(n).expect("known node").insert(start.clone());
            }
        }
        Ok(Self { nodes, root, below })
    }

    pub fn root(&self) -> &str {
        &self.root
    }

    pub fn class(&self, id: &str) -> Option<&ContractedClass<S>> {
        self.nodes.get(id)
    }

    pub fn nodes(&self) -> impl Iterator<Item = (&String, &ContractedClass<S>)> {
        self.nodes.iter()
    }

    /// Whether `inner ⊊ outer`.
    pub fn strictly_contains(&self, outer: &str, inner: &str) -> bool {
        self.below.get(outer).is_some_and(|s| s.contains(inner))
    }

    fn size_below(&self, id: &str) -> usize {
        self.below.get(id).map_or(0, BTreeSet::len)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HnFactor<S> {
    /// The lattice node closing this step of the filtration.
    pub node: String,
    pub class: ContractedClass<S>,
    pub slope: Slope<S>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HnFiltration<S> {
    pub factors: Vec<HnFactor<S>>,
}

impl<S: Scalar> HnFiltration<S> {
    pub fn mu_plus(&self) -> &Slope<S> {
        &self.factors.first().expect("non-empty filtration").slope
    }

    pub fn mu_minus(&self) -> &Slope<S> {
        &self.factors.last().expect("non-empty filtration").slope
    }
}

/// Greedy Harder–Narasimhan filtration of the lattice root.
///
/// At each step the current quotient is `root / floor`; among nodes
/// strictly above `floor` the one whose quotient `node - floor` has maximal
/// slope is taken, ties broken by larger `Im` of the charge and then by
/// inclusion-maximality (node id as the final deterministic key).
pub fn hn_filtration<S: Scalar>(
    lat: &SubobjectLattice<S>,
    slope_of: &SlopeFunction<S>,
    geom: &FibredGeometry<S>,
) -> Result<HnFiltration<S>> {
    let zero = ContractedClass::zero();
    if lat.nodes[&lat.root].is_zero() {
        return Err(Error::NotAFiltration("root class is zero".into()));
    }
    let mut floor: Option<&str> = None;
    let mut factors: Vec<HnFactor<S>> = Vec::new();

    while floor != Some(lat.root.as_str()) {
        let floor_class = floor.map_or(&zero, |f| &lat.nodes[f]);
        let mut best: Option<(&str, ContractedClass<S>, Slope<S>, S)> = None;
        for (id, class) in &lat.nodes {
            let above_floor = match floor {
                None => true,
                Some(f) => lat.strictly_contains(id, f),
            };
            if !above_floor {
                continue;
            }
            let quotient = class - floor_class;
            if quotient.is_zero() {
                continue;
            }
            let slope = slope_of.slope(&quotient, geom)?;
            let im = slope_of.charge(&quotient, geom)?.im;
            let better = match &best {
                None => true,
                Some((bid, _, bslope, bim)) => {
                    let by_slope = slope.partial_cmp(bslope).unwrap_or(std::cmp::Ordering::Equal);
                    let by_im = im.partial_cmp(bim).unwrap_or(std::cmp::Ordering::Equal);
                    by_slope
                        .then(by_im)
                        .then_with(|| inclusion_cmp(lat, id, bid))
                        .is_gt()
                }
            };
            if better {
                best = Some((id.as_str(), quotient, slope, im));
            }
        }
        let Some((id, class, slope, _)) = best else {
            return Err(Error::NotAFiltration(format!(
                "no node strictly above `{}` with a non-zero quotient",
                floor.unwrap_or("0")
            )));
        };
        if let Some(prev) = factors.last() {
            if slope >= prev.slope {
                return Err(Error::NotAFiltration(format!(
                    "factor ending at `{id}` has slope {slope}, not below {}",
                    prev.slope
                )));
            }
        }
        factors.push(HnFactor {
            node: id.to_string(),
            class,
            slope,
        });
        floor = Some(id);
    }
    Ok(HnFiltration { factors })
}

fn inclusion_cmp<S: Scalar>(lat: &SubobjectLattice<S>, a: &str, b: &str) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    if lat.strictly_contains(a, b) {
        Ordering::Greater
    } else if lat.strictly_contains(b, a) {
        Ordering::Less
    } else {
        lat.size_below(a).cmp(&lat.size_below(b)).then_with(|| a.cmp(b))
    }
}
