//! Suspension of the Denjoy map to the sphere and end-space dynamics.
//!
//! The blown circle times [-1, 1] with each boundary circle crushed to a
//! point is a sphere; the Denjoy map times the identity descends to it,
//! fixing the two poles and preserving every parallel. Mapping-torus points
//! carry an exact rational flow time, and end counts of the mapping torus
//! are estimated from the induced dynamics on resolution-N arcs.

use crate::certified::rational_to_string;
use crate::circle::{BlownPoint, CantorApprox, DenjoyMap, GapIndex};
use crate::error::{Error, Result};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

/// A point of the suspended sphere: a blown-circle point and a height in
/// [-1, 1]. All points at height 1 are the north pole and all points at
/// height -1 the south pole; equality ignores the base coordinate there.
#[derive(Debug, Clone)]
pub struct SpherePoint {
    base: BlownPoint,
    height: BigRational,
}

impl SpherePoint {
    pub fn new(base: BlownPoint, height: BigRational) -> Result<Self> {
        if height.abs() > BigRational::one() {
            return Err(Error::InvalidInput("height must lie in [-1, 1]".into()));
        }
        Ok(SpherePoint { base, height })
    }

    pub fn north() -> Self {
        SpherePoint {
            base: pole_base(),
            height: BigRational::one(),
        }
    }

    pub fn south() -> Self {
        SpherePoint {
            base: pole_base(),
            height: -BigRational::one(),
        }
    }

    /// A point on the equatorial circle (height 0).
    pub fn equator(base: BlownPoint) -> Self {
        SpherePoint {
            base,
            height: BigRational::zero(),
        }
    }

    pub fn base(&self) -> &BlownPoint {
        &self.base
    }

    pub fn height(&self) -> &BigRational {
        &self.height
    }

    pub fn is_pole(&self) -> bool {
        self.height.abs() == BigRational::one()
    }
}

fn pole_base() -> BlownPoint {
    BlownPoint::Gap {
        index: GapIndex { orbit: 0, n: 0 },
        t: BigRational::zero(),
    }
}

impl PartialEq for SpherePoint {
    fn eq(&self, other: &Self) -> bool {
        if self.height != other.height {
            return false;
        }
        // the base coordinate is quotiented away at the poles
        self.is_pole() || self.base == other.base
    }
}

/// The suspended homeomorphism: the Denjoy map on the base, heights fixed,
/// poles fixed.
pub fn sphere_eval(map: &DenjoyMap, p: &SpherePoint) -> Result<SpherePoint> {
    if p.is_pole() {
        return Ok(p.clone());
    }
    Ok(SpherePoint {
        base: map.eval(&p.base)?,
        height: p.height.clone(),
    })
}

pub fn sphere_iterate(map: &DenjoyMap, p: &SpherePoint, k: i64) -> Result<SpherePoint> {
    if p.is_pole() {
        return Ok(p.clone());
    }
    Ok(SpherePoint {
        base: map.iterate(&p.base, k)?,
        height: p.height.clone(),
    })
}

/// A point of the mapping torus: a fiber point and an exact flow time in
/// [0, 1).
#[derive(Debug, Clone, PartialEq)]
pub struct TorusPoint {
    pub fiber: SpherePoint,
    pub time: BigRational,
}

impl TorusPoint {
    pub fn new(fiber: SpherePoint, time: BigRational) -> Result<Self> {
        if time.is_negative() || time >= BigRational::one() {
            return Err(Error::InvalidInput("flow time must lie in [0, 1)".into()));
        }
        Ok(TorusPoint { fiber, time })
    }
}

/// Advance a mapping-torus point by exact rational flow time `s`; each unit
/// overflow applies the suspended map once, so the first-return map to the
/// fiber is exactly [`sphere_eval`].
pub fn suspension_flow(map: &DenjoyMap, p: &TorusPoint, s: &BigRational) -> Result<TorusPoint> {
    let total = &p.time + s;
    let wraps_big = total.floor().to_integer();
    let wraps = wraps_big
        .to_i64()
        .ok_or_else(|| Error::InvalidInput("flow time overflow".into()))?;
    let time = total - BigRational::from(wraps_big);
    let fiber = sphere_iterate(map, &p.fiber, wraps)?;
    Ok(TorusPoint { fiber, time })
}

/// Finite model of the end space and its induced dynamics.
#[derive(Debug, Clone)]
pub enum EndsModel {
    /// Resolution-N arcs of the invariant Cantor set with the arc-transition
    /// relation of the Denjoy map: arc `i` may enter arc `j`.
    CantorEnds {
        approx: CantorApprox,
        edges: Vec<(usize, usize)>,
    },
    /// Finite end space moved by a permutation (stored 0-indexed).
    FiniteEnds { permutation: Vec<usize> },
}

impl EndsModel {
    pub fn finite(permutation: Vec<usize>) -> Result<Self> {
        let m = permutation.len();
        if m == 0 {
            return Err(Error::InvalidInput("end count must be positive".into()));
        }
        let mut seen = vec![false; m];
        for &img in &permutation {
            if img >= m || seen[img] {
                return Err(Error::InvalidInput("not a permutation".into()));
            }
            seen[img] = true;
        }
        Ok(EndsModel::FiniteEnds { permutation })
    }
}

/// Build the arc-transition relation at resolution `resolution <= N - 1`.
///
/// The image of an arc is the exact Cantor interval between the shifted
/// bounding gaps; it meets a resolution-`resolution` arc exactly when that
/// arc lies in the circular sweep between the two image endpoints. The
/// relation may over-connect (never under-connect), so component counts are
/// upper bounds.
pub fn induced_end_map(map: &DenjoyMap, resolution: i64) -> Result<EndsModel> {
    if resolution > map.depth() - 1 {
        return Err(Error::InvalidInput(
            "resolution must be at most N - 1".into(),
        ));
    }
    let approx = map.cantor_approx_at(resolution)?;
    let gaps: Vec<GapIndex> = approx.arcs.iter().map(|a| a.after_gap).collect();
    let count = gaps.len();

    // sorted collapsed angles of the resolution gaps, in arc order
    let angles: Vec<_> = gaps
        .iter()
        .map(|g| map.gap_angle(*g).expect("resolved gap"))
        .collect();

    // slot of the arc containing an unresolved angle (strictly interior)
    let locate = |x: &crate::surd::QuadraticSurd| -> usize {
        let mut lo = 0usize;
        let mut hi = count;
        while lo < hi {
            let mid = (lo + hi) / 2;
            match angles[mid].cmp_surd(x).expect("shared radicand") {
                Ordering::Greater => hi = mid,
                _ => lo = mid + 1,
            }
        }
        if lo == 0 {
            count - 1
        } else {
            lo - 1
        }
    };

    let resolved_slot = |g: GapIndex| -> Option<usize> { gaps.iter().position(|h| *h == g) };

    let mut edges = Vec::new();
    for (slot, arc) in approx.arcs.iter().enumerate() {
        let left_image = GapIndex {
            orbit: arc.after_gap.orbit,
            n: arc.after_gap.n + 1,
        };
        let right_image = GapIndex {
            orbit: arc.before_gap.orbit,
            n: arc.before_gap.n + 1,
        };
        // starting slot: the arc right after the image of the left gap
        let start = match resolved_slot(left_image) {
            Some(p) => p,
            None => locate(&map.gap_angle(left_image)?),
        };
        // ending slot: the arc right before the image of the right gap
        let end = match resolved_slot(right_image) {
            Some(p) => (p + count - 1) % count,
            None => locate(&map.gap_angle(right_image)?),
        };
        let mut k = start;
        loop {
            edges.push((slot, k));
            if k == end {
                break;
            }
            k = (k + 1) % count;
        }
    }
    Ok(EndsModel::CantorEnds { approx, edges })
}

/// Number of ends at the model's resolution: weakly connected components of
/// the arc-transition graph, or permutation cycles for finite models.
pub fn end_count(model: &EndsModel) -> usize {
    match model {
        EndsModel::CantorEnds { approx, edges } => {
            let mut uf = UnionFind::new(approx.arcs.len());
            for (i, j) in edges {
                uf.union(*i, *j);
            }
            uf.components()
        }
        EndsModel::FiniteEnds { permutation } => {
            let m = permutation.len();
            let mut seen = vec![false; m];
            let mut cycles = 0;
            for start in 0..m {
                if seen[start] {
                    continue;
                }
                cycles += 1;
                let mut at = start;
                while !seen[at] {
                    seen[at] = true;
                    at = permutation[at];
                }
            }
            cycles
        }
    }
}

/// Transition-relation export:
/// `{"resolution": N, "arcs": [...], "edges": [[i, j], ...]}`.
pub fn relation_json(model: &EndsModel) -> Result<String> {
    match model {
        EndsModel::CantorEnds { approx, edges } => {
            let arcs: Vec<serde_json::Value> = approx
                .arcs
                .iter()
                .map(|a| {
                    serde_json::json!({
                        "index": a.index,
                        "left_mid": rational_to_string(a.left.midpoint()),
                        "left_rad": rational_to_string(a.left.radius()),
                        "right_mid": rational_to_string(a.right.midpoint()),
                        "right_rad": rational_to_string(a.right.radius()),
                    })
                })
                .collect();
            let edges: Vec<[usize; 2]> = edges.iter().map(|(i, j)| [*i, *j]).collect();
            let value = serde_json::json!({
                "resolution": approx.resolution,
                "arcs": arcs,
                "edges": edges,
            });
            Ok(serde_json::to_string_pretty(&value)
                .map_err(|e| Error::InvalidInput(e.to_string()))?)
        }
        EndsModel::FiniteEnds { .. } => Err(Error::InvalidInput(
            "relation export applies to Cantor end models".into(),
        )),
    }
}

/// End-count report as a single JSON object `{"resolution": N, "count": c}`.
pub fn end_count_json(model: &EndsModel) -> String {
    let count = end_count(model);
    match model {
        EndsModel::CantorEnds { approx, .. } => {
            format!(
                "{{\"resolution\": {}, \"count\": {}}}",
                approx.resolution, count
            )
        }
        EndsModel::FiniteEnds { permutation } => {
            format!(
                "{{\"resolution\": {}, \"count\": {}}}",
                permutation.len(),
                count
            )
        }
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            self.parent[ra] = rb;
        }
    }

    fn components(&mut self) -> usize {
        let n = self.parent.len();
        let mut roots = std::collections::BTreeSet::new();
        for i in 0..n {
            let r = self.find(i);
            roots.insert(r);
        }
        roots.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::{build_map, BlowupSchedule, OrbitSpec};
    use crate::ContinuedFraction;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn alpha() -> ContinuedFraction {
        "[0; (2)]".parse().unwrap()
    }

    fn map(depth: i64) -> DenjoyMap {
        build_map(BlowupSchedule::single(alpha()), depth).unwrap()
    }

    fn gap_point(n: i64, t: BigRational) -> BlownPoint {
        BlownPoint::Gap {
            index: GapIndex { orbit: 0, n },
            t,
        }
    }

    #[test]
    fn poles_are_fixed() {
        let m = map(5);
        let n = SpherePoint::north();
        let s = SpherePoint::south();
        assert_eq!(sphere_eval(&m, &n).unwrap(), n);
        assert_eq!(sphere_eval(&m, &s).unwrap(), s);
    }

    #[test]
    fn product_structure_on_gaps() {
        let m = map(5);
        let p = SpherePoint::new(gap_point(0, rat(1, 3)), rat(1, 3)).unwrap();
        let q = sphere_eval(&m, &p).unwrap();
        assert_eq!(q.height(), &rat(1, 3));
        assert_eq!(q.base(), &gap_point(1, rat(1, 3)));
    }

    #[test]
    fn gap_points_never_fixed() {
        let m = map(5);
        for n in -4..4 {
            let p = SpherePoint::equator(gap_point(n, rat(1, 2)));
            let q = sphere_eval(&m, &p).unwrap();
            assert_ne!(p, q);
        }
    }

    #[test]
    fn base_points_move_by_a_certified_amount() {
        let m = map(5);
        let x = crate::CertifiedValue::exact(rat(1, 7));
        let p = SpherePoint::equator(m.section(&x).unwrap());
        let q = sphere_eval(&m, &p).unwrap();
        let before = m.collapse(p.base()).unwrap();
        let after = m.collapse(q.base()).unwrap();
        // the collapsed angle advances by alpha = 0.414..., certainly off 0
        let moved = (after.midpoint() - before.midpoint()).abs() - after.radius() - before.radius();
        assert!(moved > rat(2, 5));
    }

    #[test]
    fn flow_identity_and_first_return() {
        let m = map(5);
        let p = TorusPoint::new(SpherePoint::equator(gap_point(0, rat(1, 5))), rat(0, 1)).unwrap();
        let same = suspension_flow(&m, &p, &rat(0, 1)).unwrap();
        assert_eq!(same, p);
        let ret = suspension_flow(&m, &p, &rat(1, 1)).unwrap();
        assert_eq!(ret.time, rat(0, 1));
        assert_eq!(ret.fiber, sphere_eval(&m, &p.fiber).unwrap());
    }

    #[test]
    fn flow_two_and_a_half() {
        let m = map(5);
        let p = TorusPoint::new(SpherePoint::equator(gap_point(0, rat(2, 7))), rat(0, 1)).unwrap();
        let moved = suspension_flow(&m, &p, &rat(5, 2)).unwrap();
        assert_eq!(moved.time, rat(1, 2));
        assert_eq!(moved.fiber.base(), &gap_point(2, rat(2, 7)));
    }

    #[test]
    fn flow_additivity_exact_on_gaps() {
        let m = map(8);
        let p = TorusPoint::new(SpherePoint::equator(gap_point(-1, rat(1, 9))), rat(1, 3)).unwrap();
        let one = suspension_flow(
            &m,
            &suspension_flow(&m, &p, &rat(7, 6)).unwrap(),
            &rat(5, 6),
        )
        .unwrap();
        let two = suspension_flow(&m, &p, &rat(2, 1)).unwrap();
        assert_eq!(one, two);
    }

    #[test]
    fn flow_additivity_on_base_points_within_radii() {
        let m = map(8);
        let x = crate::CertifiedValue::exact(rat(1, 7));
        let base = m.section(&x).unwrap();
        let p = TorusPoint::new(SpherePoint::equator(base), rat(1, 5)).unwrap();
        let split = suspension_flow(
            &m,
            &suspension_flow(&m, &p, &rat(9, 5)).unwrap(),
            &rat(6, 5),
        )
        .unwrap();
        let joined = suspension_flow(&m, &p, &rat(3, 1)).unwrap();
        assert_eq!(split.time, joined.time);
        let a = m.collapse(split.fiber.base()).unwrap();
        let b = m.collapse(joined.fiber.base()).unwrap();
        // both enclose the same point, so the midpoints agree within the
        // summed radii
        let gap = crate::certified::circle_norm(&(a.midpoint() - b.midpoint()));
        assert!(gap <= a.radius() + b.radius());
    }

    #[test]
    fn flow_negative_time() {
        let m = map(5);
        let p = TorusPoint::new(SpherePoint::equator(gap_point(0, rat(1, 2))), rat(1, 4)).unwrap();
        let back = suspension_flow(&m, &p, &rat(-1, 2)).unwrap();
        assert_eq!(back.time, rat(3, 4));
        assert_eq!(back.fiber.base(), &gap_point(-1, rat(1, 2)));
    }

    #[test]
    fn trivial_end_model() {
        let m = map(1);
        let model = induced_end_map(&m, 0).unwrap();
        if let EndsModel::CantorEnds { approx, edges } = &model {
            assert_eq!(approx.arcs.len(), 1);
            assert_eq!(edges, &vec![(0, 0)]);
        } else {
            panic!("expected Cantor ends");
        }
        assert_eq!(end_count(&model), 1);
    }

    #[test]
    fn five_arc_relation() {
        let m = map(3);
        let model = induced_end_map(&m, 2).unwrap();
        if let EndsModel::CantorEnds { approx, edges } = &model {
            assert_eq!(approx.arcs.len(), 5);
            for slot in 0..5 {
                assert!(edges.iter().any(|(i, _)| *i == slot));
            }
        } else {
            panic!("expected Cantor ends");
        }
        assert_eq!(end_count(&model), 1);
    }

    #[test]
    fn two_orbit_relation() {
        let schedule = BlowupSchedule::new(
            alpha(),
            vec![
                OrbitSpec::rational(rat(0, 1), rat(1, 1)),
                OrbitSpec::rational(rat(1, 2), rat(1, 1)),
            ],
        )
        .unwrap();
        let m = build_map(schedule, 3).unwrap();
        let model = induced_end_map(&m, 1).unwrap();
        if let EndsModel::CantorEnds { approx, .. } = &model {
            assert_eq!(approx.arcs.len(), 6);
        } else {
            panic!("expected Cantor ends");
        }
        assert_eq!(end_count(&model), 1);
    }

    #[test]
    fn finite_ends_cycles() {
        let identity = EndsModel::finite(vec![0, 1, 2]).unwrap();
        assert_eq!(end_count(&identity), 3);
        let swap = EndsModel::finite(vec![1, 0, 2]).unwrap();
        assert_eq!(end_count(&swap), 2);
        assert!(EndsModel::finite(vec![0, 0]).is_err());
        assert!(EndsModel::finite(vec![]).is_err());
    }

    #[test]
    fn heights_preserved_exactly() {
        let m = map(5);
        for num in [-2i64, -1, 0, 1, 2] {
            let h = rat(num, 3);
            let p = SpherePoint::new(gap_point(0, rat(1, 2)), h.clone()).unwrap();
            let q = sphere_eval(&m, &p).unwrap();
            assert_eq!(q.height(), &h);
        }
    }

    #[test]
    fn relation_export_shapes() {
        let m = map(2);
        let model = induced_end_map(&m, 1).unwrap();
        let json = relation_json(&model).unwrap();
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed["resolution"], 1);
        assert_eq!(parsed["arcs"].as_array().unwrap().len(), 3);
        assert!(end_count_json(&model).contains("\"count\": 1"));
    }
}
