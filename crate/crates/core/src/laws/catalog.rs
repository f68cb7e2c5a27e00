//! Small groups as multiplication tables: builders from concrete models and
//! the bundled catalog of nilpotent groups.

use super::{FiniteGroup, GroupError};

fn build<T, F>(name: &str, elements: Vec<T>, mul: F) -> FiniteGroup
where
    T: Eq + std::hash::Hash + Clone,
    F: Fn(&T, &T) -> T,
{
    FiniteGroup::from_elements(name, &elements, mul).expect("catalog models are groups")
}

pub fn cyclic(n: usize) -> FiniteGroup {
    build(&format!("z{n}"), (0..n).collect(), |x, y| (x + y) % n)
}

/// `Z_m ⋊ Z_n` where the generator of `Z_n` acts by multiplication by `r`.
pub fn cyclic_semidirect(name: &str, m: usize, n: usize, r: usize) -> FiniteGroup {
    assert_eq!(pow_mod(r, n, m), 1 % m, "r^n must be 1 mod m");
    let elements: Vec<(usize, usize)> = (0..n).flat_map(|y| (0..m).map(move |x| (x, y))).collect();
    build(name, elements, |&(x1, y1), &(x2, y2)| ((x1 + pow_mod(r, y1, m) * x2) % m, (y1 + y2) % n))
}

fn pow_mod(r: usize, e: usize, m: usize) -> usize {
    (0..e).fold(1 % m, |acc, _| acc * r % m)
}

/// Dihedral group of order `2n`.
pub fn dihedral(n: usize) -> FiniteGroup {
    cyclic_semidirect(&format!("d{n}"), n, 2, n - 1)
}

pub fn symmetric3() -> FiniteGroup {
    let mut g = dihedral(3);
    g.name = "s3".into();
    g
}

/// Dicyclic group of order `4m`: `⟨x, j | x^{2m}, j² = x^m, j x j⁻¹ = x⁻¹⟩`.
/// `m = 2` is the quaternion group, `m = 4` the generalized quaternion group
/// of order 16.
pub fn dicyclic(name: &str, m: usize) -> FiniteGroup {
    let k = 2 * m;
    let elements: Vec<(usize, u8)> = (0..2u8).flat_map(|e| (0..k).map(move |x| (x, e))).collect();
    build(name, elements, |&(x1, e1), &(x2, e2)| match (e1, e2) {
        (0, e) => ((x1 + x2) % k, e),
        (_, 0) => ((x1 + k - x2) % k, 1),
        _ => ((x1 + k - x2 + m) % k, 0),
    })
}

pub fn direct_product(name: &str, g: &FiniteGroup, h: &FiniteGroup) -> FiniteGroup {
    let elements: Vec<(usize, usize)> =
        (0..g.order()).flat_map(|x| (0..h.order()).map(move |y| (x, y))).collect();
    build(name, elements, |&(x1, y1), &(x2, y2)| (g.mul(x1, x2), h.mul(y1, y2)))
}

fn abelian(name: &str, factors: &[usize]) -> FiniteGroup {
    let mut g = cyclic(factors[0]);
    for &f in &factors[1..] {
        g = direct_product(name, &g, &cyclic(f));
    }
    g.name = name.into();
    g
}

/// Pauli group `⟨X, Z, iI⟩`, elements `i^k X^x Z^z`.
pub fn pauli() -> FiniteGroup {
    let elements: Vec<(u8, u8, u8)> =
        (0..4).flat_map(|k| (0..2).flat_map(move |x| (0..2).map(move |z| (k, x, z)))).collect();
    build("pauli", elements, |&(k1, x1, z1), &(k2, x2, z2)| ((k1 + k2 + 2 * z1 * x2) % 4, x1 ^ x2, z1 ^ z2))
}

/// `(Z4 × Z2) ⋊ Z2` with the involution `(p, q) ↦ (p, q + p)`.
pub fn z2z2_by_z4() -> FiniteGroup {
    let act = |(p, q): (u8, u8), e: u8| if e == 0 { (p, q) } else { (p, (q + p) % 2) };
    let elements: Vec<((u8, u8), u8)> =
        (0..2).flat_map(|e| (0..2).flat_map(move |q| (0..4).map(move |p| ((p, q), e)))).collect();
    build("z2z2_z4", elements, move |&((p1, q1), e1), &(n2, e2)| {
        let (p2, q2) = act(n2, e1);
        (((p1 + p2) % 4, (q1 + q2) % 2), (e1 + e2) % 2)
    })
}

/// Upper unitriangular 3×3 matrices over `Z_p`.
pub fn heisenberg(p: usize) -> FiniteGroup {
    let elements: Vec<(usize, usize, usize)> =
        (0..p).flat_map(|z| (0..p).flat_map(move |y| (0..p).map(move |x| (x, y, z)))).collect();
    build(&format!("heis{p}"), elements, |&(x1, y1, z1), &(x2, y2, z2)| {
        ((x1 + x2) % p, (y1 + y2) % p, (z1 + z2 + x1 * y2) % p)
    })
}

/// Names use `x` for direct and `_` for semidirect products.
///
/// Every nilpotent group of order 2..=16 (up to isomorphism) followed by the
/// Heisenberg group mod 3.
pub fn nilpotent_catalog() -> Vec<FiniteGroup> {
    let mut groups: Vec<FiniteGroup> = Vec::new();
    for n in 2..=16 {
        groups.push(cyclic(n));
    }
    groups.push(abelian("z2xz2", &[2, 2]));
    groups.push(abelian("z4xz2", &[4, 2]));
    groups.push(abelian("z2xz2xz2", &[2, 2, 2]));
    groups.push(dihedral(4));
    groups.push(dicyclic("q8", 2));
    groups.push(abelian("z3xz3", &[3, 3]));
    groups.push(abelian("z6xz2", &[6, 2]));
    groups.push(abelian("z4xz4", &[4, 4]));
    groups.push(z2z2_by_z4());
    groups.push(cyclic_semidirect("z4_z4", 4, 4, 3));
    groups.push(abelian("z8xz2", &[8, 2]));
    groups.push(cyclic_semidirect("m16", 8, 2, 5));
    groups.push(dihedral(8));
    groups.push(cyclic_semidirect("sd16", 8, 2, 3));
    groups.push(dicyclic("q16", 4));
    groups.push(abelian("z4xz2xz2", &[4, 2, 2]));
    groups.push(direct_product("d4xz2", &dihedral(4), &cyclic(2)));
    groups.push(direct_product("q8xz2", &dicyclic("q8", 2), &cyclic(2)));
    groups.push(pauli());
    groups.push(abelian("z2xz2xz2xz2", &[2, 2, 2, 2]));
    groups.push(heisenberg(3));
    groups
}

/// JSON files shipped in the crate's `catalog/` directory.
pub const BUNDLED: &[(&str, &str)] = &[
    ("z2", include_str!("../../catalog/z2.json")),
    ("z3", include_str!("../../catalog/z3.json")),
    ("z4", include_str!("../../catalog/z4.json")),
    ("z5", include_str!("../../catalog/z5.json")),
    ("z6", include_str!("../../catalog/z6.json")),
    ("z7", include_str!("../../catalog/z7.json")),
    ("z8", include_str!("../../catalog/z8.json")),
    ("z9", include_str!("../../catalog/z9.json")),
    ("z10", include_str!("../../catalog/z10.json")),
    ("z11", include_str!("../../catalog/z11.json")),
    ("z12", include_str!("../../catalog/z12.json")),
    ("z13", include_str!("../../catalog/z13.json")),
    ("z14", include_str!("../../catalog/z14.json")),
    ("z15", include_str!("../../catalog/z15.json")),
    ("z16", include_str!("../../catalog/z16.json")),
    ("z2xz2", include_str!("../../catalog/z2xz2.json")),
    ("z4xz2", include_str!("../../catalog/z4xz2.json")),
    ("z2xz2xz2", include_str!("../../catalog/z2xz2xz2.json")),
    ("d4", include_str!("../../catalog/d4.json")),
    ("q8", include_str!("../../catalog/q8.json")),
    ("z3xz3", include_str!("../../catalog/z3xz3.json")),
    ("z6xz2", include_str!("../../catalog/z6xz2.json")),
    ("z4xz4", include_str!("../../catalog/z4xz4.json")),
    ("z2z2_z4", include_str!("../../catalog/z2z2_z4.json")),
    ("z4_z4", include_str!("../../catalog/z4_z4.json")),
    ("z8xz2", include_str!("../../catalog/z8xz2.json")),
    ("m16", include_str!("../../catalog/m16.json")),
    ("d8", include_str!("../../catalog/d8.json")),
    ("sd16", include_str!("../../catalog/sd16.json")),
    ("q16", include_str!("../../catalog/q16.json")),
    ("z4xz2xz2", include_str!("../../catalog/z4xz2xz2.json")),
    ("d4xz2", include_str!("../../catalog/d4xz2.json")),
    ("q8xz2", include_str!("../../catalog/q8xz2.json")),
    ("pauli", include_str!("../../catalog/pauli.json")),
    ("z2xz2xz2xz2", include_str!("../../catalog/z2xz2xz2xz2.json")),
    ("heis3", include_str!("../../catalog/heis3.json")),
    ("s3", include_str!("../../catalog/s3.json")),
];

/// Loads a bundled group by name.
pub fn bundled(name: &str) -> Option<Result<FiniteGroup, GroupError>> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, text)| FiniteGroup::from_json(text))
}

/// The bundled nilpotent groups (everything except `s3`).
pub fn bundled_nilpotent() -> Result<Vec<FiniteGroup>, GroupError> {
    BUNDLED.iter().filter(|(n, _)| *n != "s3").map(|(_, text)| FiniteGroup::from_json(text)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laws::{nilpotency_class, NilpotencyClass};

    #[test]
    fn catalog_orders() {
        let cat = nilpotent_catalog();
        assert_eq!(cat.len(), 36);
        assert_eq!(cat.iter().filter(|g| g.order() == 16).count(), 14);
        assert_eq!(cat.iter().filter(|g| g.order() == 8).count(), 5);
        assert_eq!(cat.last().unwrap().order(), 27);
    }

    #[test]
    fn catalog_groups_are_nilpotent_and_pairwise_distinct_by_invariants() {
        let cat = nilpotent_catalog();
        let mut seen = std::collections::HashSet::new();
        for g in &cat {
            let class = nilpotency_class(g);
            assert!(matches!(class, NilpotencyClass::Class(_)), "{}", g.name());
            // these invariants happen to separate all groups in the catalog
            let mut hist = vec![0usize; g.order() + 1];
            for x in 0..g.order() {
                let mut y = x;
                let mut k = 1;
                while y != 0 {
                    y = g.mul(y, x);
                    k += 1;
                }
                hist[k] += 1;
            }
            let squares: std::collections::BTreeSet<usize> = (0..g.order()).map(|x| g.mul(x, x)).collect();
            let center = (0..g.order()).filter(|&x| (0..g.order()).all(|y| g.mul(x, y) == g.mul(y, x))).count();
            let key = (g.order(), format!("{class:?}"), hist, commutator_subgroup_order(g), squares.len(), center);
            assert!(seen.insert(key), "duplicate isomorphism invariants for {}", g.name());
        }
    }

    fn commutator_subgroup_order(g: &FiniteGroup) -> usize {
        let gens = (0..g.order()).flat_map(|x| (0..g.order()).map(move |y| (x, y)));
        let gens = gens.map(|(x, y)| g.commutator(x, y)).collect();
        g.subgroup_generated(&gens).len()
    }

    #[test]
    fn bundled_files_match_builders() {
        let mut built = nilpotent_catalog();
        built.push(symmetric3());
        assert_eq!(built.len(), BUNDLED.len());
        for g in built {
            let loaded = bundled(g.name()).unwrap_or_else(|| panic!("missing {}", g.name())).unwrap();
            assert_eq!(loaded, g);
        }
    }

    #[test]
    #[ignore = "rewrites crates/core/catalog/*.json"]
    fn write_bundled_catalog() {
        let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("catalog");
        std::fs::create_dir_all(&dir).unwrap();
        let mut all = nilpotent_catalog();
        all.push(symmetric3());
        for g in all {
            std::fs::write(dir.join(format!("{}.json", g.name())), g.to_json() + "\n").unwrap();
        }
    }
}
