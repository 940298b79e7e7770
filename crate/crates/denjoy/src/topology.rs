//! Combinatorial invariants of the mapping tori: spine and cell complexes,
//! gap-orbit genus counting, handle-attachment boundary calculus, and the
//! building-block gluing evaluator.

use crate::error::{Error, Result};
use serde::Serialize;
use std::fmt;

/// A finite CW complex given by a vertex count, edges as endpoint pairs,
/// and 2-cells as cyclic words of signed edge indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CWComplex {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    faces: Vec<Vec<SignedEdge>>,
}

/// One letter of a face boundary word: an edge traversed forward or
/// backward.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignedEdge {
    pub edge: usize,
    pub reversed: bool,
}

impl SignedEdge {
    pub fn forward(edge: usize) -> Self {
        SignedEdge {
            edge,
            reversed: false,
        }
    }

    pub fn backward(edge: usize) -> Self {
        SignedEdge {
            edge,
            reversed: true,
        }
    }
}

impl CWComplex {
    pub fn new(
        vertex_count: usize,
        edges: Vec<(usize, usize)>,
        faces: Vec<Vec<SignedEdge>>,
    ) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::InvalidInput("complex needs a vertex".into()));
        }
        for &(a, b) in &edges {
            if a >= vertex_count || b >= vertex_count {
                return Err(Error::InvalidInput("edge endpoint out of range".into()));
            }
        }
        for word in &faces {
            if word.is_empty() {
                return Err(Error::InvalidInput("empty face boundary word".into()));
            }
            for letter in word {
                if letter.edge >= edges.len() {
                    return Err(Error::InvalidInput("face uses unknown edge".into()));
                }
            }
            // the word must trace a closed edge path
            let ends = |l: &SignedEdge| {
                let (a, b) = edges[l.edge];
                if l.reversed {
                    (b, a)
                } else {
                    (a, b)
                }
            };
            let start = ends(&word[0]).0;
            let mut at = start;
            for letter in word {
                let (from, to) = ends(letter);
                if from != at {
                    return Err(Error::InvalidInput(
                        "face boundary word is not a path".into(),
                    ));
                }
                at = to;
            }
            if at != start {
                return Err(Error::InvalidInput(
                    "face boundary word does not close up".into(),
                ));
            }
        }
        Ok(CWComplex {
            vertex_count,
            edges,
            faces,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn is_connected(&self) -> bool {
        let mut uf = UnionFind::new(self.vertex_count);
        for &(a, b) in &self.edges {
            uf.union(a, b);
        }
        uf.components() == 1
    }
}

/// The spine graph of the punctured sphere: two vertices (over the poles)
/// joined by one edge through each resolved gap, `m (2k+1)` edges in all.
pub fn spine_complex(orbit_count: u64, truncation: u64) -> Result<CWComplex> {
    if orbit_count == 0 {
        return Err(Error::InvalidInput("orbit count must be >= 1".into()));
    }
    let strips = orbit_count * (2 * truncation + 1);
    let edges = (0..strips).map(|_| (1usize, 0usize)).collect();
    CWComplex::new(2, edges, Vec::new())
}

/// The mapping-torus cell structure at truncation `k`: two vertices with a
/// loop at each, `m (2k+1)` strip edges, and for each orbit `2k` square
/// faces with boundary word `e_j e_nu e_{j+1}^-1 e_sigma^-1`.
pub fn mapping_torus_complex(orbit_count: u64, truncation: u64) -> Result<CWComplex> {
    if orbit_count == 0 || truncation == 0 {
        return Err(Error::InvalidInput(
            "orbit count and truncation must be >= 1".into(),
        ));
    }
    let m = orbit_count as usize;
    let k = truncation as usize;
    let per_orbit = 2 * k + 1;
    let loop_nu = 0usize;
    let loop_sigma = 1usize;
    let mut edges = vec![(0usize, 0usize), (1usize, 1usize)];
    // strip edge (orbit i, time j) at index 2 + i*(2k+1) + (j+k), oriented
    // from the sigma vertex to the nu vertex
    for _ in 0..m * per_orbit {
        edges.push((1, 0));
    }
    let strip = |orbit: usize, j: i64| -> usize { 2 + orbit * per_orbit + (j + k as i64) as usize };
    let mut faces = Vec::with_capacity(m * 2 * k);
    for orbit in 0..m {
        for j in -(k as i64)..(k as i64) {
            faces.push(vec![
                SignedEdge::forward(strip(orbit, j)),
                SignedEdge::forward(loop_nu),
                SignedEdge::backward(strip(orbit, j + 1)),
                SignedEdge::backward(loop_sigma),
            ]);
        }
    }
    CWComplex::new(2, edges, faces)
}

/// Euler characteristic and free fundamental-group rank.
///
/// The complex must be connected, and its 2-cells must collapse one by one
/// through free edges (each next face has an edge used once by it and by no
/// other remaining face). That certificate makes the complex homotopy
/// equivalent to a graph, so `rank = 1 - chi` can be read off; anything
/// else is rejected rather than analyzed.
pub fn euler_and_rank(complex: &CWComplex) -> Result<(i64, u64)> {
    if !complex.is_connected() {
        return Err(Error::DisconnectedComplex);
    }
    // free-edge collapse with incremental usage counts: an edge is free when
    // it appears exactly once across all remaining face words
    let mut usage = vec![0usize; complex.edges.len()];
    let mut owners: Vec<Vec<usize>> = vec![Vec::new(); complex.edges.len()];
    for (fi, word) in complex.faces.iter().enumerate() {
        for letter in word {
            usage[letter.edge] += 1;
            owners[letter.edge].push(fi);
        }
    }
    let mut alive = vec![true; complex.faces.len()];
    let mut queue: Vec<usize> = (0..complex.edges.len())
        .filter(|&e| usage[e] == 1)
        .collect();
    let mut removed = 0usize;
    while let Some(edge) = queue.pop() {
        if usage[edge] != 1 {
            continue;
        }
        let face = match owners[edge].iter().find(|&&fi| alive[fi]) {
            Some(&fi) => fi,
            None => continue,
        };
        alive[face] = false;
        removed += 1;
        for letter in &complex.faces[face] {
            usage[letter.edge] -= 1;
            if usage[letter.edge] == 1 {
                queue.push(letter.edge);
            }
        }
    }
    if removed != complex.faces.len() {
        return Err(Error::UnsupportedFacePattern);
    }
    let chi = complex.vertex_count as i64 - complex.edges.len() as i64 + complex.faces.len() as i64;
    let rank = 1 - chi;
    debug_assert!(rank >= 0, "connected complex has chi <= 1");
    Ok((chi, rank as u64))
}

/// Genus of the mapping torus of the `k`-th power of the `m`-orbit Denjoy
/// map: the shift `(i, n) -> (i, n + k)` has exactly `m k` gap orbits, one
/// handle each, so the genus is `m k + 1`.
pub fn gap_orbit_genus(orbit_count: u64, power: u64) -> Result<u64> {
    if orbit_count == 0 || power == 0 {
        return Err(Error::InvalidInput(
            "orbit count and power must be >= 1".into(),
        ));
    }
    Ok(orbit_count * power + 1)
}

/// A base piece of a handle decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasePiece {
    SolidTorus,
    Ball,
    /// `S_{g,b} x [0, 1]`.
    ThickenedSurface {
        genus: u64,
        boundary_circles: u64,
    },
}

impl BasePiece {
    /// Euler characteristic of the boundary surface.
    fn boundary_chi(&self) -> i64 {
        match self {
            BasePiece::SolidTorus => 0,
            BasePiece::Ball => 2,
            BasePiece::ThickenedSurface {
                genus,
                boundary_circles,
            } => 2 * (2 - 2 * *genus as i64 - *boundary_circles as i64),
        }
    }
}

/// A 1-handle attached between two pieces (or a piece and itself).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HandleAttachment {
    pub from: usize,
    pub to: usize,
    pub orientable: bool,
}

/// Base pieces plus 1-handle attachments; framings and knotting are
/// deliberately not tracked, so genus and orientability are the only
/// invariants this can certify.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HandleRecord {
    pub pieces: Vec<BasePiece>,
    pub one_handles: Vec<HandleAttachment>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryGenus {
    pub genus: u64,
    pub orientable: bool,
    /// Euler characteristic of the boundary surface.
    pub boundary_chi: i64,
    /// Handle-count notes, including the non-orientable genus `2 - chi`
    /// when the record is non-orientable.
    pub notes: Vec<String>,
}

/// Boundary-surface genus of a connected handle record: each 1-handle
/// removes two disks and adds an annulus, so `chi(boundary)` drops by 2 per
/// handle, and `genus = 1 - chi/2`.
pub fn boundary_genus(record: &HandleRecord) -> Result<BoundaryGenus> {
    if record.pieces.is_empty() {
        return Err(Error::InvalidInput(
            "record needs at least one piece".into(),
        ));
    }
    for h in &record.one_handles {
        if h.from >= record.pieces.len() || h.to >= record.pieces.len() {
            return Err(Error::InvalidInput(
                "handle attaches to unknown piece".into(),
            ));
        }
    }
    let mut uf = UnionFind::new(record.pieces.len());
    for h in &record.one_handles {
        uf.union(h.from, h.to);
    }
    if uf.components() != 1 {
        return Err(Error::DisconnectedRecord);
    }
    let chi: i64 = record
        .pieces
        .iter()
        .map(BasePiece::boundary_chi)
        .sum::<i64>()
        - 2 * record.one_handles.len() as i64;
    let orientable = record.one_handles.iter().all(|h| h.orientable);
    debug_assert!(chi % 2 == 0);
    let genus_i = 1 - chi / 2;
    if genus_i < 0 {
        return Err(Error::InvalidInput("boundary has positive chi > 2".into()));
    }
    let mut notes = vec![
        format!(
            "{} pieces, {} one-handles",
            record.pieces.len(),
            record.one_handles.len()
        ),
        format!("boundary chi = {}", chi),
    ];
    if !orientable {
        notes.push(format!(
            "non-orientable boundary genus 2 - chi = {}",
            2 - chi
        ));
    }
    Ok(BoundaryGenus {
        genus: genus_i as u64,
        orientable,
        boundary_chi: chi,
        notes,
    })
}

/// Symbolic building-block expression over the mapping-torus pieces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GluingExpression {
    /// Mapping torus of the Denjoy map with `orbits` blown-up orbits: the
    /// `V_{orbits+1}` core with one tube slot per gap orbit.
    Denjoy { orbits: u64 },
    /// Mapping torus of the `exponent`-th power of a Denjoy block.
    Power {
        base: Box<GluingExpression>,
        exponent: u64,
    },
    /// Disk minus a Cantor set: one fiber boundary circle, one 1-handle on
    /// the torus over it.
    Disk,
    /// Annulus minus a Cantor set: two fiber boundary circles, one 1-handle
    /// joining the tori over them.
    Annulus,
    /// Shifted family of `S_{genus, punctures, 1}` surfaces replacing a
    /// removed tube: `2 genus + punctures` orientable 1-handles.
    ShiftOrientable { genus: u64, punctures: u64 },
    /// Shifted family of `N_{genus, punctures, 1}` surfaces: handle counts
    /// by genus parity, `genus + punctures` handles in all, at least one
    /// non-orientable.
    ShiftNonorientable { genus: u64, punctures: u64 },
    /// Glue the children along matching boundary components.
    Glue(Vec<GluingExpression>),
}

/// The evaluated invariants: handlebody genus and orientability, plus the
/// handle-count derivation trace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ManifoldDescriptor {
    pub genus: u64,
    pub orientable: bool,
    pub trace: Vec<String>,
}

impl fmt::Display for ManifoldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}",
            serde_json::to_string(self).expect("descriptor serializes")
        )
    }
}

#[derive(Debug, Clone, Default)]
struct Assembly {
    solid_tori: u64,
    junction_tori: u64,
    orientable_handles: u64,
    nonorientable_handles: u64,
    dangling_circles: u64,
    tube_slots: u64,
    unattached_shifts: u64,
    components: u64,
    pure_core: bool,
    trace: Vec<String>,
}

/// Evaluate a gluing expression by handle counting.
///
/// All base pieces in scope (pole solid tori and junction tori over glued
/// circles) have boundary Euler characteristic zero, so the final genus is
/// `1 + (total 1-handles)`; orientability flips when a non-orientable shift
/// block participates.
pub fn glue_eval(expr: &GluingExpression) -> Result<ManifoldDescriptor> {
    let asm = eval_assembly(expr)?;
    if asm.dangling_circles > 0 {
        return Err(Error::BoundaryMismatch(format!(
            "{} fiber boundary circles left unglued",
            asm.dangling_circles
        )));
    }
    if asm.unattached_shifts > 0 {
        return Err(Error::BoundaryMismatch(
            "shift block has no Denjoy core to replace a tube of".into(),
        ));
    }
    if asm.components != 1 {
        return Err(Error::BoundaryMismatch(
            "expression does not assemble into a connected manifold".into(),
        ));
    }
    let handles = asm.orientable_handles + asm.nonorientable_handles;
    let mut trace = asm.trace;
    trace.push(format!(
        "pieces: {} solid tori, {} junction tori (boundary chi 0 each)",
        asm.solid_tori, asm.junction_tori
    ));
    trace.push(format!(
        "1-handles: {} orientable, {} non-orientable",
        asm.orientable_handles, asm.nonorientable_handles
    ));
    trace.push(format!(
        "boundary chi = -2 * {} => genus {}",
        handles,
        1 + handles
    ));
    if asm.solid_tori == 0 {
        trace.push(
            "no Denjoy core: compression-body interior, genus from total boundary chi".into(),
        );
    }
    Ok(ManifoldDescriptor {
        genus: 1 + handles,
        orientable: asm.nonorientable_handles == 0,
        trace,
    })
}

fn eval_assembly(expr: &GluingExpression) -> Result<Assembly> {
    match expr {
        GluingExpression::Denjoy { orbits } => {
            if *orbits == 0 {
                return Err(Error::InvalidInput("denjoy block needs m >= 1".into()));
            }
            Ok(Assembly {
                solid_tori: 2,
                orientable_handles: *orbits,
                tube_slots: *orbits,
                components: 1,
                pure_core: true,
                trace: vec![format!(
                    "denjoy(m={}): two pole solid tori joined by {} gap-orbit handle(s); core V_{}",
                    orbits,
                    orbits,
                    orbits + 1
                )],
                ..Assembly::default()
            })
        }
        GluingExpression::Power { base, exponent } => {
            if *exponent == 0 {
                return Err(Error::InvalidInput("power needs k >= 1".into()));
            }
            let inner = eval_assembly(base)?;
            if !inner.pure_core {
                return Err(Error::BoundaryMismatch(
                    "power applies to Denjoy blocks only".into(),
                ));
            }
            let mut out = inner;
            out.orientable_handles *= exponent;
            out.tube_slots *= exponent;
            out.trace.push(format!(
                "power(k={}): gap orbits split into {} orbit(s) of the power; core V_{}",
                exponent,
                out.orientable_handles,
                out.orientable_handles + 1
            ));
            Ok(out)
        }
        GluingExpression::Disk => Ok(Assembly {
            orientable_handles: 1,
            dangling_circles: 1,
            components: 1,
            trace: vec!["disk(): one 1-handle on its boundary torus".into()],
            ..Assembly::default()
        }),
        GluingExpression::Annulus => Ok(Assembly {
            orientable_handles: 1,
            dangling_circles: 2,
            components: 1,
            trace: vec!["annulus(): one 1-handle joining two boundary tori".into()],
            ..Assembly::default()
        }),
        GluingExpression::ShiftOrientable { genus, punctures } => Ok(Assembly {
            orientable_handles: 2 * genus + punctures,
            unattached_shifts: 1,
            components: 1,
            trace: vec![format!(
                "shift_or(g={}, n={}): ball with {} orientable 1-handles glued along an annulus",
                genus,
                punctures,
                2 * genus + punctures
            )],
            ..Assembly::default()
        }),
        GluingExpression::ShiftNonorientable { genus, punctures } => {
            let (nonor, or, bullet) = match genus {
                0 => {
                    return Err(Error::InvalidInput(
                        "non-orientable genus must be >= 1".into(),
                    ))
                }
                1 => (1, *punctures, "g = 1: one non-orientable handle"),
                2 => (
                    1,
                    1 + punctures,
                    "g = 2: one non-orientable and one orientable handle",
                ),
                g if g % 2 == 1 => (
                    1,
                    g - 1 + punctures,
                    "g = 2r+1, r > 1: one non-orientable and g-1 orientable handles",
                ),
                g => (
                    2,
                    g - 2 + punctures,
                    "g = 2r+2, r > 1: two non-orientable and g-2 orientable handles",
                ),
            };
            Ok(Assembly {
                orientable_handles: or,
                nonorientable_handles: nonor,
                unattached_shifts: 1,
                components: 1,
                trace: vec![format!(
                    "shift_nonor(g={}, n={}): {} plus {} puncture handle(s); {} handles total",
                    genus,
                    punctures,
                    bullet,
                    punctures,
                    nonor + or
                )],
                ..Assembly::default()
            })
        }
        GluingExpression::Glue(children) => {
            if children.is_empty() {
                return Err(Error::BoundaryMismatch("glue() needs children".into()));
            }
            let mut total = Assembly {
                components: 0,
                pure_core: false,
                ..Assembly::default()
            };
            for child in children {
                let c = eval_assembly(child)?;
                total.solid_tori += c.solid_tori;
                total.junction_tori += c.junction_tori;
                total.orientable_handles += c.orientable_handles;
                total.nonorientable_handles += c.nonorientable_handles;
                total.dangling_circles += c.dangling_circles;
                total.tube_slots += c.tube_slots;
                total.unattached_shifts += c.unattached_shifts;
                total.components += c.components;
                total.trace.extend(c.trace);
            }
            // shift blocks replace removed tubes of the Denjoy cores
            if total.unattached_shifts > total.tube_slots {
                return Err(Error::BoundaryMismatch(format!(
                    "{} shift blocks but only {} gap-orbit tubes",
                    total.unattached_shifts, total.tube_slots
                )));
            }
            let shift_gluings = total.unattached_shifts;
            total.tube_slots -= shift_gluings;
            total.unattached_shifts = 0;
            total.components -= shift_gluings;
            if shift_gluings > 0 {
                total.trace.push(format!(
                    "glued {} shift block(s) along removed tube(s)",
                    shift_gluings
                ));
            }
            // fiber boundary circles pair up; each pair becomes a junction
            // torus (thickened torus, boundary chi 0)
            if total.dangling_circles % 2 != 0 {
                return Err(Error::BoundaryMismatch(
                    "odd number of fiber boundary circles".into(),
                ));
            }
            let pairings = total.dangling_circles / 2;
            total.dangling_circles = 0;
            total.junction_tori += pairings;
            if pairings > 0 {
                total.trace.push(format!(
                    "glued {} pair(s) of boundary circles into junction tori",
                    pairings
                ));
            }
            if total.components > pairings {
                let needed = total.components - 1;
                if pairings < needed {
                    return Err(Error::BoundaryMismatch(
                        "not enough gluings to connect all blocks".into(),
                    ));
                }
            }
            total.components = total.components.saturating_sub(pairings).max(1);
            Ok(total)
        }
    }
}

/// Parse the prefix text grammar:
/// `glue(denjoy(m=1), shift_or(g=1, n=0))`, `power(denjoy(m=1), k=3)`,
/// `disk()`, `annulus()`, `shift_nonor(g, n)`. Integer arguments may be
/// named or positional.
pub fn parse_expression(text: &str) -> Result<GluingExpression> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
    };
    let expr = p.expression()?;
    p.skip_ws();
    if p.pos != p.chars.len() {
        return Err(Error::Parse(format!(
            "trailing input at position {}",
            p.pos
        )));
    }
    Ok(expr)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Parse(format!(
                "expected `{}` at position {}",
                c, self.pos
            )))
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len()
            && (self.chars[self.pos].is_ascii_alphanumeric() || self.chars[self.pos] == '_')
        {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Parse(format!(
                "expected identifier at position {}",
                start
            )));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn integer(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Parse(format!(
                "expected integer at position {}",
                start
            )));
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse()
            .map_err(|_| Error::Parse(format!("integer out of range: {}", text)))
    }

    /// `name=value` or bare `value`; returns (name, value).
    fn int_arg(&mut self) -> Result<(Option<String>, u64)> {
        self.skip_ws();
        if self
            .peek()
            .map(|c| c.is_ascii_alphabetic())
            .unwrap_or(false)
        {
            let name = self.ident()?;
            self.expect('=')?;
            let value = self.integer()?;
            Ok((Some(name), value))
        } else {
            Ok((None, self.integer()?))
        }
    }

    fn expression(&mut self) -> Result<GluingExpression> {
        let name = self.ident()?;
        self.expect('(')?;
        let expr = match name.as_str() {
            "denjoy" => {
                let (label, m) = self.int_arg()?;
                check_label(label, "m")?;
                GluingExpression::Denjoy { orbits: m }
            }
            "power" => {
                let base = self.expression()?;
                self.expect(',')?;
                let (label, k) = self.int_arg()?;
                check_label(label, "k")?;
                GluingExpression::Power {
                    base: Box::new(base),
                    exponent: k,
                }
            }
            "disk" => GluingExpression::Disk,
            "annulus" => GluingExpression::Annulus,
            "shift_or" | "shift_nonor" => {
                let (label_g, g) = self.int_arg()?;
                check_label(label_g, "g")?;
                self.expect(',')?;
                let (label_n, n) = self.int_arg()?;
                check_label(label_n, "n")?;
                if name == "shift_or" {
                    GluingExpression::ShiftOrientable {
                        genus: g,
                        punctures: n,
                    }
                } else {
                    GluingExpression::ShiftNonorientable {
                        genus: g,
                        punctures: n,
                    }
                }
            }
            "glue" => {
                let mut children = vec![self.expression()?];
                while self.peek() == Some(',') {
                    self.expect(',')?;
                    children.push(self.expression()?);
                }
                GluingExpression::Glue(children)
            }
            other => {
                return Err(Error::Parse(format!("unknown block `{}`", other)));
            }
        };
        self.expect(')')?;
        Ok(expr)
    }
}

fn check_label(label: Option<String>, expected: &str) -> Result<()> {
    match label {
        None => Ok(()),
        Some(l) if l == expected => Ok(()),
        Some(l) => Err(Error::Parse(format!(
            "expected argument `{}`, got `{}`",
            expected, l
        ))),
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
        let mut count = 0;
        for i in 0..n {
            if self.find(i) == i {
                count += 1;
            }
        }
        count
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spine_counts() {
        let s = spine_complex(1, 1).unwrap();
        assert_eq!((s.vertex_count(), s.edge_count()), (2, 3));
        let (chi, rank) = euler_and_rank(&s).unwrap();
        assert_eq!((chi, rank), (-1, 2));

        let s = spine_complex(1, 3).unwrap();
        assert_eq!(s.edge_count(), 7);
        // rank = E - V + 1
        assert_eq!(euler_and_rank(&s).unwrap().1, 6);

        let s = spine_complex(2, 0).unwrap();
        assert_eq!(s.edge_count(), 2);
        assert_eq!(euler_and_rank(&s).unwrap().1, 1);
    }

    #[test]
    fn mapping_torus_counts() {
        let c = mapping_torus_complex(1, 1).unwrap();
        assert_eq!(
            (c.vertex_count(), c.edge_count(), c.face_count()),
            (2, 5, 2)
        );
        let (chi, rank) = euler_and_rank(&c).unwrap();
        assert_eq!((chi, rank), (-1, 2));

        for k in 1..=50 {
            let c = mapping_torus_complex(1, k).unwrap();
            assert_eq!(euler_and_rank(&c).unwrap().0, -1);
        }
        let c = mapping_torus_complex(3, 4).unwrap();
        assert_eq!(euler_and_rank(&c).unwrap().0, -3);
    }

    #[test]
    fn rank_matches_gap_orbit_genus() {
        for m in 1..=5 {
            let c = mapping_torus_complex(m, 7).unwrap();
            let (_, rank) = euler_and_rank(&c).unwrap();
            assert_eq!(rank, gap_orbit_genus(m, 1).unwrap());
        }
    }

    #[test]
    fn disconnected_complex_rejected() {
        // two vertices, no edges
        let c = CWComplex::new(2, vec![], vec![]).unwrap();
        assert_eq!(euler_and_rank(&c), Err(Error::DisconnectedComplex));
    }

    #[test]
    fn torus_face_pattern_rejected() {
        // the torus: one vertex, loops a and b, face a b a^-1 b^-1; every
        // edge is used twice, so there is no free edge to collapse
        let c = CWComplex::new(
            1,
            vec![(0, 0), (0, 0)],
            vec![vec![
                SignedEdge::forward(0),
                SignedEdge::forward(1),
                SignedEdge::backward(0),
                SignedEdge::backward(1),
            ]],
        )
        .unwrap();
        assert_eq!(euler_and_rank(&c), Err(Error::UnsupportedFacePattern));
    }

    #[test]
    fn bad_face_words_rejected() {
        // word does not close up
        assert!(CWComplex::new(2, vec![(0, 1)], vec![vec![SignedEdge::forward(0)]],).is_err());
    }

    #[test]
    fn gap_orbit_genus_formula() {
        assert_eq!(gap_orbit_genus(1, 1).unwrap(), 2);
        assert_eq!(gap_orbit_genus(4, 1).unwrap(), 5);
        assert_eq!(gap_orbit_genus(1, 3).unwrap(), 4);
        assert!(gap_orbit_genus(0, 1).is_err());
    }

    #[test]
    fn boundary_genus_examples() {
        // two solid tori joined by one handle: genus 2
        let claim1 = HandleRecord {
            pieces: vec![BasePiece::SolidTorus, BasePiece::SolidTorus],
            one_handles: vec![HandleAttachment {
                from: 0,
                to: 1,
                orientable: true,
            }],
        };
        let got = boundary_genus(&claim1).unwrap();
        assert_eq!((got.genus, got.orientable), (2, true));

        // one solid torus, one handle to itself: genus 2
        let compression = HandleRecord {
            pieces: vec![BasePiece::SolidTorus],
            one_handles: vec![HandleAttachment {
                from: 0,
                to: 0,
                orientable: true,
            }],
        };
        assert_eq!(boundary_genus(&compression).unwrap().genus, 2);

        // ball with two handles: genus 2
        let ball = HandleRecord {
            pieces: vec![BasePiece::Ball],
            one_handles: vec![
                HandleAttachment {
                    from: 0,
                    to: 0,
                    orientable: true,
                },
                HandleAttachment {
                    from: 0,
                    to: 0,
                    orientable: true,
                },
            ],
        };
        assert_eq!(boundary_genus(&ball).unwrap().genus, 2);
    }

    #[test]
    fn boundary_genus_disconnected() {
        let record = HandleRecord {
            pieces: vec![BasePiece::SolidTorus, BasePiece::SolidTorus],
            one_handles: vec![],
        };
        assert_eq!(boundary_genus(&record), Err(Error::DisconnectedRecord));
    }

    #[test]
    fn boundary_genus_nonorientable_note() {
        let record = HandleRecord {
            pieces: vec![BasePiece::Ball],
            one_handles: vec![HandleAttachment {
                from: 0,
                to: 0,
                orientable: false,
            }],
        };
        let got = boundary_genus(&record).unwrap();
        assert!(!got.orientable);
        assert_eq!(got.genus, 1);
        assert!(got.notes.iter().any(|n| n.contains("2 - chi = 2")));
    }

    #[test]
    fn glue_eval_core_cases() {
        let v2 = glue_eval(&parse_expression("denjoy(m=1)").unwrap()).unwrap();
        assert_eq!((v2.genus, v2.orientable), (2, true));

        let v4 = glue_eval(&parse_expression("power(denjoy(m=1), k=3)").unwrap()).unwrap();
        assert_eq!(v4.genus, 4);

        let theorem2 =
            glue_eval(&parse_expression("glue(denjoy(m=1), shift_or(g=1, n=0))").unwrap()).unwrap();
        assert_eq!((theorem2.genus, theorem2.orientable), (4, true));
    }

    #[test]
    fn glue_eval_shift_families() {
        for g in 0..=4u64 {
            for n in 0..=4u64 {
                let text = format!("glue(denjoy(m=1), shift_or(g={}, n={}))", g, n);
                let d = glue_eval(&parse_expression(&text).unwrap()).unwrap();
                assert_eq!(d.genus, 2 * g + n + 2);
                assert!(d.orientable);
            }
        }
        for g in [1u64, 2, 5, 6] {
            for n in [0u64, 3] {
                let text = format!("glue(denjoy(m=1), shift_nonor(g={}, n={}))", g, n);
                let d = glue_eval(&parse_expression(&text).unwrap()).unwrap();
                assert_eq!(d.genus, g + n + 2);
                assert!(!d.orientable);
            }
        }
    }

    #[test]
    fn glue_eval_reassociation_invariant() {
        let flat = glue_eval(
            &parse_expression("glue(denjoy(m=2), shift_or(g=1, n=1), shift_or(g=0, n=2))").unwrap(),
        )
        .unwrap();
        let nested = glue_eval(
            &parse_expression("glue(glue(denjoy(m=2), shift_or(g=1, n=1)), shift_or(g=0, n=2))")
                .unwrap(),
        )
        .unwrap();
        assert_eq!(flat.genus, nested.genus);
        assert_eq!(flat.orientable, nested.orientable);
    }

    #[test]
    fn glue_eval_boundary_mismatches() {
        // bare disk leaves a dangling circle
        assert!(matches!(
            glue_eval(&parse_expression("disk()").unwrap()),
            Err(Error::BoundaryMismatch(_))
        ));
        // shift block with no core
        assert!(matches!(
            glue_eval(&parse_expression("shift_or(g=1, n=0)").unwrap()),
            Err(Error::BoundaryMismatch(_))
        ));
        // two shifts cannot share one tube
        assert!(matches!(
            glue_eval(
                &parse_expression("glue(denjoy(m=1), shift_or(g=1, n=0), shift_or(g=1, n=0))")
                    .unwrap()
            ),
            Err(Error::BoundaryMismatch(_))
        ));
        // power of a non-core
        assert!(matches!(
            glue_eval(&parse_expression("power(disk(), k=2)").unwrap()),
            Err(Error::BoundaryMismatch(_))
        ));
    }

    #[test]
    fn glue_eval_disk_chain() {
        // two disk blocks glued along their circles: a compression-body
        // interior with two handles on one junction torus
        let d = glue_eval(&parse_expression("glue(disk(), disk())").unwrap()).unwrap();
        assert_eq!(d.genus, 3);
        assert!(d.trace.iter().any(|t| t.contains("compression-body")));
    }

    #[test]
    fn parser_round_trips() {
        assert_eq!(
            parse_expression("denjoy(m=1)").unwrap(),
            GluingExpression::Denjoy { orbits: 1 }
        );
        assert_eq!(
            parse_expression("shift_nonor(3, 2)").unwrap(),
            GluingExpression::ShiftNonorientable {
                genus: 3,
                punctures: 2
            }
        );
        assert!(parse_expression("denjoy(m=1) trailing").is_err());
        assert!(parse_expression("mystery()").is_err());
        assert!(parse_expression("denjoy(k=1)").is_err());
    }

    #[test]
    fn descriptor_serializes() {
        let d = glue_eval(&parse_expression("denjoy(m=1)").unwrap()).unwrap();
        let json = serde_json::to_value(&d).unwrap();
        assert_eq!(json["genus"], 2);
        assert_eq!(json["orientable"], true);
        assert!(json["trace"].is_array());
    }
}
