//! Piles of unit cubes: cubical face posets, Kuhn triangulations, and balls
//! with a drilled tube.

use super::{FacePoset, SimplicialComplex, UnionFind};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap, HashSet};

pub type Cube = [i32; 3];

const AXES: [Cube; 3] = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];

fn add(a: Cube, b: Cube) -> Cube {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

/// Numeric label of a grid point of a grid with `dims` cubes per axis.
fn point_label(p: Cube, dims: [i32; 3]) -> String {
    let (a, b) = (dims[0] + 1, dims[1] + 1);
    (1 + p[0] + a * (p[1] + b * p[2])).to_string()
}

/// Kuhn triangulation: every cube splits into the 6 monotone lattice paths
/// from its lowest to its highest corner.
fn kuhn(cubes: &BTreeSet<Cube>, dims: [i32; 3]) -> SimplicialComplex {
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut facets = Vec::new();
    for &c in cubes {
        for p in perms {
            let mut v = c;
            let mut tet = vec![point_label(v, dims)];
            for &axis in &p {
                v = add(v, AXES[axis]);
                tet.push(point_label(v, dims));
            }
            facets.push(tet);
        }
    }
    SimplicialComplex::from_facets(facets).expect("nonempty pile")
}

fn cubes_connected(cubes: &BTreeSet<Cube>) -> bool {
    let list: Vec<Cube> = cubes.iter().copied().collect();
    let pos: HashMap<Cube, usize> = list.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut uf = UnionFind::new(list.len());
    for (i, &c) in list.iter().enumerate() {
        for a in AXES {
            if let Some(&j) = pos.get(&add(c, a)) {
                uf.union(i, j);
            }
        }
    }
    let r = uf.find(0);
    (0..list.len()).all(|i| uf.find(i) == r)
}

/// Cubical face poset of a union of unit cubes.
fn cubical_poset(cubes: &BTreeSet<Cube>) -> FacePoset {
    // A cell is (lower corner, bitmask of spanned axes).
    let mut cells: BTreeSet<(u8, Cube, u8)> = BTreeSet::new();
    for &c in cubes {
        for mask in 0u8..8 {
            for off in 0u8..8 {
                if off & mask != 0 {
                    continue;
                }
                let corner = [c[0] + (off & 1) as i32, c[1] + (off >> 1 & 1) as i32, c[2] + (off >> 2 & 1) as i32];
                cells.insert((mask.count_ones() as u8, corner, mask));
            }
        }
    }
    let list: Vec<(u8, Cube, u8)> = cells.into_iter().collect();
    let pos: HashMap<(Cube, u8), usize> = list.iter().enumerate().map(|(i, &(_, c, m))| ((c, m), i)).collect();
    let mut dims = Vec::new();
    let mut faces = Vec::new();
    let mut names = Vec::new();
    for &(d, c, m) in &list {
        dims.push(d as usize);
        names.push(format!("{},{},{}/{}", c[0], c[1], c[2], m));
        let mut fs = Vec::new();
        for axis in 0..3 {
            if m >> axis & 1 == 1 {
                let sub = m & !(1 << axis);
                fs.push(pos[&(c, sub)]);
                fs.push(pos[&(add(c, AXES[axis]), sub)]);
            }
        }
        faces.push(fs);
    }
    FacePoset::from_cells(dims, faces, names).expect("cubical posets are graded")
}

/// A pile of cubes as a cubical poset plus its Kuhn triangulation.
#[derive(Debug, Clone)]
pub struct Pile {
    pub dims: [i32; 3],
    pub cubes: BTreeSet<Cube>,
    pub poset: FacePoset,
    pub complex: SimplicialComplex,
}

/// The `a × b × c` grid of unit cubes minus strictly interior cubes.
pub fn pile_of_cubes(a: i32, b: i32, c: i32, removed: &[Cube]) -> Result<Pile> {
    if a < 1 || b < 1 || c < 1 {
        return Err(Error::InvalidPile("dimensions must be at least 1".into()));
    }
    let dims = [a, b, c];
    let mut cubes = BTreeSet::new();
    for z in 0..c {
        for y in 0..b {
            for x in 0..a {
                cubes.insert([x, y, z]);
            }
        }
    }
    for r in removed {
        let interior = (0..3).all(|i| r[i] >= 1 && r[i] <= dims[i] - 2);
        if !interior {
            return Err(Error::InvalidPile(format!("removed cube {r:?} is not interior")));
        }
        cubes.remove(r);
    }
    if cubes.is_empty() {
        return Err(Error::InvalidPile("all cubes removed".into()));
    }
    if !cubes_connected(&cubes) {
        return Err(Error::InvalidPile("removal disconnects the pile".into()));
    }
    let poset = cubical_poset(&cubes);
    let complex = kuhn(&cubes, dims);
    Ok(Pile { dims, cubes, poset, complex })
}

/// Tube drilled from the top layer of a grid of cubes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnotSpec {
    /// Cubes per axis.
    pub grid: [i32; 3],
    /// Column `(x, y)` of the first tube cube, which sits in the top layer.
    pub start: [i32; 2],
    /// Unit moves `+x`, `-x`, `+y`, `-y`, `+z`, `-z` between consecutive tube cubes.
    pub moves: Vec<String>,
}

impl KnotSpec {
    /// Straight vertical tube down column `(x, y)`.
    pub fn straight(n: i32, x: i32, y: i32) -> KnotSpec {
        KnotSpec { grid: [n, n, n], start: [x, y], moves: vec!["-z".to_string(); (n - 2) as usize] }
    }

    /// A trefoil-knotted tube on a 9 × 9 × 9 grid. The closed curve made of the
    /// tube core, a ray up from the entry and a ray down from the exit has knot
    /// determinant 3.
    pub fn trefoil() -> KnotSpec {
        let moves = [
            "-z", "+x", "-z", "-y", "-z", "+x", "-z", "+x", "-z", "-y", "-z", "+x", "-y", "-y",
            "+z", "-x", "+z", "-y", "+z", "-x", "+z", "-x", "-x", "+z", "-x", "+y", "+y", "-z",
            "-z", "-x", "-z", "+y", "-z", "+y", "+x", "+x", "-z", "+y", "+y", "+x", "+x", "+x",
            "+z", "+x", "+z", "+z", "+z", "+z", "-y", "-y", "-z", "-y", "-y", "+z", "-x", "-x",
            "-x", "-z", "-z", "-z", "-z", "-z", "-z", "-y",
        ];
        KnotSpec { grid: [9, 9, 9], start: [3, 6], moves: moves.iter().map(|s| s.to_string()).collect() }
    }

    /// Cube sequence of the tube.
    pub fn path(&self) -> Result<Vec<Cube>> {
        let mut cur = [self.start[0], self.start[1], self.grid[2] - 1];
        let mut out = vec![cur];
        for m in &self.moves {
            let step = match m.as_str() {
                "+x" => [1, 0, 0],
                "-x" => [-1, 0, 0],
                "+y" => [0, 1, 0],
                "-y" => [0, -1, 0],
                "+z" => [0, 0, 1],
                "-z" => [0, 0, -1],
                other => return Err(Error::InvalidKnot(format!("unknown move {other:?}"))),
            };
            cur = add(cur, step);
            out.push(cur);
        }
        Ok(out)
    }

    fn validate(&self) -> Result<Vec<Cube>> {
        let path = self.path()?;
        let g = self.grid;
        if g.iter().any(|&n| n < 3) {
            return Err(Error::InvalidKnot("grid must be at least 3 cubes per axis".into()));
        }
        for (i, c) in path.iter().enumerate() {
            if c[2] == 0 {
                return Err(Error::Perforation(*c));
            }
            let inside = c[0] >= 1 && c[0] <= g[0] - 2 && c[1] >= 1 && c[1] <= g[1] - 2;
            let layer_ok = if i == 0 { c[2] == g[2] - 1 } else { c[2] >= 1 && c[2] <= g[2] - 2 };
            if !inside || !layer_ok {
                return Err(Error::InvalidKnot(format!("tube exits the grid at cube {c:?}")));
            }
        }
        let mut seen = HashSet::new();
        for c in &path {
            if !seen.insert(*c) {
                return Err(Error::InvalidKnot(format!("tube revisits cube {c:?}")));
            }
        }
        // Each new cube may meet the earlier tube only inside its face with the
        // previous cube; this keeps the tube a shellable ball.
        let corners = |c: &Cube| -> HashSet<Cube> {
            let mut s = HashSet::new();
            for dx in 0..2 {
                for dy in 0..2 {
                    for dz in 0..2 {
                        s.insert([c[0] + dx, c[1] + dy, c[2] + dz]);
                    }
                }
            }
            s
        };
        for j in 1..path.len() {
            let cj = corners(&path[j]);
            let face: HashSet<Cube> = cj.intersection(&corners(&path[j - 1])).copied().collect();
            for ci in path.iter().take(j - 1) {
                if !cj.intersection(&corners(ci)).all(|p| face.contains(p)) {
                    return Err(Error::InvalidKnot(format!("tube touches itself at cube {:?}", path[j])));
                }
            }
        }
        if path.last().unwrap()[2] != 1 {
            return Err(Error::InvalidKnot("tube must end one layer above the bottom".into()));
        }
        Ok(path)
    }
}

/// A grid ball with a drilled tube and its distinguished spanning edge.
#[derive(Debug, Clone)]
pub struct FurchBall {
    pub complex: SimplicialComplex,
    pub tube: Vec<Cube>,
    /// Vertical edge below the end of the tube; both endpoints lie on the boundary.
    pub spanning_edge: [String; 2],
}

/// Triangulates the grid minus the tube.
pub fn furch_ball(spec: &KnotSpec) -> Result<FurchBall> {
    let tube = spec.validate()?;
    let g = spec.grid;
    let drilled: HashSet<Cube> = tube.iter().copied().collect();
    let mut cubes = BTreeSet::new();
    for z in 0..g[2] {
        for y in 0..g[1] {
            for x in 0..g[0] {
                if !drilled.contains(&[x, y, z]) {
                    cubes.insert([x, y, z]);
                }
            }
        }
    }
    let complex = kuhn(&cubes, g);
    let end = *tube.last().unwrap();
    let spanning_edge = [point_label([end[0], end[1], 0], g), point_label([end[0], end[1], 1], g)];
    Ok(FurchBall { complex, tube, spanning_edge })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_cube() {
        let p = pile_of_cubes(1, 1, 1, &[]).unwrap();
        assert_eq!(p.poset.len(), 27);
        assert!(p.poset.has_diamond_property());
        assert_eq!(p.complex.num_facets(), 6);
        assert_eq!(p.complex.num_vertices(), 8);
    }

    #[test]
    fn pile_errors() {
        assert!(matches!(pile_of_cubes(3, 3, 3, &[[0, 0, 0]]), Err(Error::InvalidPile(_))));
        assert!(pile_of_cubes(3, 3, 3, &[[1, 1, 1]]).is_ok());
    }

    #[test]
    fn adjacent_cubes_share_triangulated_squares() {
        let p = pile_of_cubes(2, 2, 2, &[]).unwrap();
        let info = p.complex.pseudomanifold_check();
        assert!(info.is_pseudo_manifold);
        assert_eq!(p.complex.euler_characteristic(), 1);
        assert_eq!(p.complex.num_vertices(), 27);
    }

    #[test]
    fn perforation_and_exit() {
        let mut s = KnotSpec::straight(5, 2, 2);
        s.moves.push("-z".into());
        assert!(matches!(furch_ball(&s), Err(Error::Perforation(_))));
        let bad = KnotSpec { grid: [5, 5, 5], start: [0, 2], moves: vec!["-z".into(); 3] };
        assert!(matches!(furch_ball(&bad), Err(Error::InvalidKnot(_))));
        let touching = KnotSpec {
            grid: [7, 7, 7],
            start: [2, 2],
            moves: ["-z", "+x", "+y", "-x"].iter().map(|s| s.to_string()).collect(),
        };
        assert!(matches!(furch_ball(&touching), Err(Error::InvalidKnot(_))));
    }
}
