//! The action x·f(y) = f(x⁻¹y) − f(x⁻¹) on functions vanishing at the
//! identity, finite orbits of horofunctions, and the homomorphism onto ℤ
//! carried by a fixed horofunction.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{layer_decomposition, Distances, HorofunctionSet, Limits, ValueMap};

use super::{CayleyGraph, GroupElement};

/// x·f restricted to B_{r - |x|}, where f is known on B_r.
pub fn act(
    g: &CayleyGraph,
    x: &GroupElement,
    f: &ValueMap<GroupElement>,
    radius: u64,
    limits: &Limits,
) -> Result<ValueMap<GroupElement>> {
    let mut lengths = Distances::new(g, g.identity(), limits);
    let length = lengths.get(x)?;
    if length > radius {
        return Err(Error::DomainTooSmall { length, radius });
    }
    let x_inv = g.inv(x);
    let missing = |y: &GroupElement| Error::InvalidParameter(format!("{y} is outside the function's domain"));
    let offset = f.get(&x_inv).ok_or_else(|| missing(&x_inv))?;
    let mut keep = Vec::with_capacity(f.len());
    for y in f.domain() {
        keep.push(lengths.get(y)? + length <= radius);
    }
    let kept: Vec<&(GroupElement, i64)> = f
        .entries()
        .iter()
        .zip(&keep)
        .filter(|(_, k)| **k)
        .map(|(e, _)| e)
        .collect();
    // Successive x⁻¹y are mostly increasing, so each chunk searches from its last hit.
    let chunks: Vec<&[&(GroupElement, i64)]> = kept.chunks(4096).collect();
    let moved = limits.exec.try_map(&chunks, |chunk| {
        let mut hint = 0;
        chunk
            .iter()
            .map(|(y, _)| {
                let target = g.mul(&x_inv, y);
                let value = f.get_near(&target, &mut hint).ok_or_else(|| missing(&target))?;
                Ok((y.clone(), value - offset))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(ValueMap::from_sorted_entries(moved.concat()))
}

/// Orbit structure of a set of horofunction restrictions under the generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitResult {
    /// Domain radius r of the members.
    pub radius: u64,
    /// Ball radius R used for stabilizer and coset sampling.
    pub ball_radius: u64,
    pub members: Vec<ValueMap<GroupElement>>,
    /// For each generator s, `action[s][i] = j` when s·f_i agrees with f_j on B_{r-1}.
    pub action_table: Vec<(GroupElement, Vec<usize>)>,
    /// Orbits under the generated action, as index lists.
    pub orbits: Vec<Vec<usize>>,
    /// Index of the fixed element f_ω (the lexicographically least member).
    pub fixed: usize,
    /// Elements of B_R fixing f_ω on their common domain.
    pub stabilizer_sample: Vec<GroupElement>,
    /// Distinct translates x·f_ω (x ∈ B_R) restricted to B_{r-R}.
    pub index_estimate: usize,
    /// Products of stabilizer elements that stay in B_R stay in the sample.
    pub closed_under_products: bool,
}

impl OrbitResult {
    pub fn fixed_function(&self) -> &ValueMap<GroupElement> {
        &self.members[self.fixed]
    }
}

/// Builds the generator action table on `horos`, checks invariance and
/// samples the stabilizer of the least member inside B_R.
pub fn orbit_analysis(
    g: &CayleyGraph,
    horos: &HorofunctionSet<GroupElement>,
    ball_radius: u64,
    limits: &Limits,
) -> Result<OrbitResult> {
    let radius = horos.radius;
    if ball_radius >= radius {
        return Err(Error::InvalidParameter(format!(
            "ball radius {ball_radius} must be smaller than the domain radius {radius}"
        )));
    }
    if horos.is_empty() {
        return Err(Error::InvalidParameter("empty horofunction set".into()));
    }
    let members = horos.value_maps();
    let layers = layer_decomposition(g, radius, limits)?;
    let length: BTreeMap<GroupElement, u64> = layers.ball_with_radii(radius).into_iter().collect();
    let within = |f: &ValueMap<GroupElement>, r: u64| f.restrict(|y| length[y] <= r);
    let shrunk: Vec<ValueMap<GroupElement>> = members.iter().map(|f| within(f, radius - 1)).collect();

    let mut action_table = Vec::new();
    for s in g.generators() {
        let row = members
            .iter()
            .map(|f| {
                let moved = act(g, s, f, radius, limits)?;
                shrunk
                    .iter()
                    .position(|h| *h == moved)
                    .ok_or_else(|| Error::NotInvariant(s.to_string()))
            })
            .collect::<Result<Vec<usize>>>()?;
        let mut seen = row.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != row.len() {
            return Err(Error::NotInvariant(s.to_string()));
        }
        action_table.push((s.clone(), row));
    }

    // Orbits: connected components of the generator permutations.
    let mut component: Vec<usize> = (0..members.len()).collect();
    fn root(c: &mut [usize], mut i: usize) -> usize {
        while c[i] != i {
            c[i] = c[c[i]];
            i = c[i];
        }
        i
    }
    for (_, row) in &action_table {
        for (i, &j) in row.iter().enumerate() {
            let (a, b) = (root(&mut component, i), root(&mut component, j));
            component[a.max(b)] = a.min(b);
        }
    }
    let mut grouped: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..members.len() {
        let r = root(&mut component, i);
        grouped.entry(r).or_default().push(i);
    }
    let orbits: Vec<Vec<usize>> = grouped.into_values().collect();

    let fixed = 0;
    let f = &members[fixed];
    let sample_ball = layers.ball(ball_radius);
    let translates = limits.exec.try_map(&sample_ball, |x| {
        let moved = act(g, x, f, radius, limits)?;
        let stable = moved == within(f, radius - length[x]);
        Ok::<_, Error>((stable, within(&moved, radius - ball_radius)))
    })?;
    let stabilizer_sample: Vec<GroupElement> = sample_ball
        .iter()
        .zip(&translates)
        .filter(|(_, (stable, _))| *stable)
        .map(|(x, _)| x.clone())
        .collect();
    let mut distinct: Vec<&ValueMap<GroupElement>> = translates.iter().map(|(_, t)| t).collect();
    distinct.sort();
    distinct.dedup();

    let closed_under_products = stabilizer_sample.iter().all(|a| {
        stabilizer_sample.iter().all(|b| {
            let ab = g.mul(a, b);
            length.get(&ab).is_none_or(|&l| l > ball_radius) || stabilizer_sample.binary_search(&ab).is_ok()
        })
    });

    Ok(OrbitResult {
        radius,
        ball_radius,
        members,
        action_table,
        orbits,
        fixed,
        stabilizer_sample,
        index_estimate: distinct.len(),
        closed_under_products,
    })
}

/// Right coset H·g met inside B_R, identified by g⁻¹·f_ω.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CosetShift {
    pub representative: GroupElement,
    pub shift: i64,
    pub size: usize,
}

/// Evidence that f_ω restricted to its stabilizer is a homomorphism onto a
/// nontrivial subgroup dℤ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomomorphismWitness {
    pub base: ValueMap<GroupElement>,
    /// f_ω(h) for every h in the stabilizer sample.
    pub sampled_values: Vec<(GroupElement, i64)>,
    /// gcd of the sampled values; h ↦ f_ω(h) / d is onto ℤ on the sample.
    pub image_gcd: u64,
    pub coset_shifts: Vec<CosetShift>,
    /// Number of (h, g) pairs on which additivity was checked.
    pub pairs_checked: usize,
    /// Stabilizer samples with value 0.
    pub kernel_sample: Vec<GroupElement>,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Checks f_ω(hg) = f_ω(h) + f_ω(g) for sampled h and g ∈ B_R with hg in the
/// domain, and reports the image gcd and the right-coset shifts.
pub fn extract_homomorphism(orbit: &OrbitResult, g: &CayleyGraph, limits: &Limits) -> Result<HomomorphismWitness> {
    if orbit.stabilizer_sample.is_empty() {
        return Err(Error::EmptyStabilizer);
    }
    let f = orbit.fixed_function();
    let radius = orbit.radius;
    let ball = layer_decomposition(g, orbit.ball_radius, limits)?.ball(orbit.ball_radius);
    let value = |x: &GroupElement| f.get(x);

    let mut pairs_checked = 0;
    for h in &orbit.stabilizer_sample {
        let fh = value(h).expect("stabilizer sample lies in the domain");
        for x in &ball {
            if let Some(fhx) = value(&g.mul(h, x)) {
                let fx = value(x).expect("B_R lies in the domain");
                if fhx != fh + fx {
                    return Err(Error::AdditivityViolation {
                        h: h.to_string(),
                        g: x.to_string(),
                    });
                }
                pairs_checked += 1;
            }
        }
    }

    let sampled_values: Vec<(GroupElement, i64)> = orbit
        .stabilizer_sample
        .iter()
        .map(|h| (h.clone(), value(h).unwrap()))
        .collect();
    let image_gcd = sampled_values.iter().fold(0, |d, (_, v)| gcd(d, v.unsigned_abs()));
    if image_gcd == 0 {
        return Err(Error::TrivialImage);
    }

    // Hg = Hg' iff g⁻¹·f = g'⁻¹·f. Representatives are the shortest members.
    let common = radius - orbit.ball_radius;
    let mut lengths = Distances::new(g, g.identity(), limits);
    let mut classes: BTreeMap<ValueMap<GroupElement>, Vec<(u64, GroupElement)>> = BTreeMap::new();
    for x in &ball {
        let key = act(g, &g.inv(x), f, radius, limits)?;
        let key = key.restrict(|y| lengths.get(y).map(|l| l <= common).unwrap_or(false));
        classes.entry(key).or_default().push((lengths.get(x)?, x.clone()));
    }
    let mut coset_shifts = Vec::new();
    for mut members in classes.into_values() {
        members.sort();
        let rep = members[0].1.clone();
        let shift = value(&rep).unwrap();
        for (_, x) in &members {
            let h = g.mul(x, &g.inv(&rep));
            if orbit.stabilizer_sample.binary_search(&h).is_ok() && value(x).unwrap() != value(&h).unwrap() + shift {
                return Err(Error::AdditivityViolation {
                    h: h.to_string(),
                    g: rep.to_string(),
                });
            }
        }
        coset_shifts.push(CosetShift {
            representative: rep,
            shift,
            size: members.len(),
        });
    }
    coset_shifts.sort_by(|a, b| a.representative.cmp(&b.representative));

    let kernel_sample = sampled_values
        .iter()
        .filter(|(_, v)| *v == 0)
        .map(|(h, _)| h.clone())
        .collect();
    Ok(HomomorphismWitness {
        base: f.clone(),
        sampled_values,
        image_gcd,
        coset_shifts,
        pairs_checked,
        kernel_sample,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::{Family, GroupSpec};
    use crate::graph::{busemann, enumerate_horofunction_restrictions};
    use GroupElement::*;

    fn line_function(sign: i64, r: i64) -> ValueMap<GroupElement> {
        ValueMap::new((-r..=r).map(|y| (Int(y), sign * y)).collect())
    }

    #[test]
    fn identity_acts_trivially() {
        let g = CayleyGraph::standard(Family::Integers);
        let f = line_function(-1, 6);
        assert_eq!(act(&g, &Int(0), &f, 6, &Limits::default()).unwrap(), f);
    }

    #[test]
    fn translation_fixes_linear_function() {
        let g = CayleyGraph::standard(Family::Integers);
        let f = line_function(-1, 10);
        let moved = act(&g, &Int(7), &f, 10, &Limits::default()).unwrap();
        assert_eq!(moved, line_function(-1, 3));
        assert!(matches!(
            act(&g, &Int(11), &f, 10, &Limits::default()),
            Err(Error::DomainTooSmall { length: 11, radius: 10 })
        ));
    }

    #[test]
    fn busemann_equivariance_on_lattice() {
        let l = Limits::default();
        let g = CayleyGraph::standard(Family::IntegerLattice2d);
        let z = Lattice(4, -7);
        let x = Lattice(-1, 2);
        let bz = busemann(&g, &z, 8, &l).unwrap().values;
        let moved = act(&g, &x, &bz, 8, &l).unwrap();
        let bxz = busemann(&g, &g.mul(&x, &z), 5, &l).unwrap().values;
        assert_eq!(moved, bxz);
    }

    #[test]
    fn integers_orbit_and_witness() {
        let l = Limits::default();
        let g = CayleyGraph::standard(Family::Integers);
        let horos = enumerate_horofunction_restrictions(&g, 12, 48, 8, &l).unwrap();
        let orb = orbit_analysis(&g, &horos, 6, &l).unwrap();
        assert_eq!(orb.members.len(), 2);
        assert_eq!(orb.orbits, vec![vec![0], vec![1]]);
        for (_, row) in &orb.action_table {
            assert_eq!(row, &vec![0, 1]);
        }
        assert_eq!(orb.stabilizer_sample.len(), 13);
        assert_eq!(orb.index_estimate, 1);
        assert!(orb.closed_under_products);

        let w = extract_homomorphism(&orb, &g, &l).unwrap();
        assert_eq!(w.image_gcd, 1);
        // f_ω is y ↦ y (lexicographically least), so the homomorphism is h ↦ h.
        for (h, v) in &w.sampled_values {
            let Int(n) = h else { unreachable!() };
            assert_eq!(*v, *n);
        }
        assert_eq!(w.kernel_sample, vec![Int(0)]);
        assert_eq!(w.coset_shifts.len(), 1);
    }

    #[test]
    fn integers_with_two_and_three() {
        let l = Limits::default();
        let spec = GroupSpec {
            family: Family::Integers,
            generators: vec![Int(2), Int(3)],
        };
        let g = CayleyGraph::new(&spec).unwrap();
        let horos = enumerate_horofunction_restrictions(&g, 10, 40, 8, &l).unwrap();
        let orb = orbit_analysis(&g, &horos, 4, &l).unwrap();
        let w = extract_homomorphism(&orb, &g, &l).unwrap();
        assert_eq!(w.image_gcd, 1);
        assert_eq!(w.base.get(&Int(0)), Some(0));
    }

    #[test]
    fn dihedral_stabilizer_is_translations() {
        let l = Limits::default();
        let g = CayleyGraph::standard(Family::InfiniteDihedral);
        let horos = enumerate_horofunction_restrictions(&g, 12, 48, 8, &l).unwrap();
        let orb = orbit_analysis(&g, &horos, 6, &l).unwrap();
        assert_eq!(orb.orbits, vec![vec![0, 1]]);
        assert!(orb.stabilizer_sample.iter().all(|h| matches!(h, Dihedral(_, false))));
        assert_eq!(orb.stabilizer_sample.len(), 7);
        assert_eq!(orb.index_estimate, 2);
        let w = extract_homomorphism(&orb, &g, &l).unwrap();
        assert_eq!(w.image_gcd, 2);
        assert_eq!(w.coset_shifts.len(), 2);
    }
}
