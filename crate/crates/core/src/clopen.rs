//! Clopen subsets of `Z_p^n` as digit-prefix tries.
//!
//! A node at level `j` stands for a coset `c + (p^j Z_p)^n`. Its `p^n`
//! children are indexed by the `j`-th base-p digit of every coordinate,
//! combined as `Σ_c digit_c · p^c`. Nodes are kept canonical (no mixed node
//! with all-full or all-empty children, fixed sparse/dense choice), so two
//! tries describe the same set iff they are structurally equal.

use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Node {
    Empty,
    Full,
    Mixed(Arc<Children>),
}

#[derive(Debug, PartialEq, Eq, Hash)]
enum Children {
    /// Non-empty children only, sorted by index.
    Sparse(Vec<(u32, Node)>),
    Dense(Vec<Node>),
}

static EMPTY: Node = Node::Empty;

impl Children {
    fn get(&self, i: u32) -> &Node {
        match self {
            Children::Dense(v) => &v[i as usize],
            Children::Sparse(v) => match v.binary_search_by_key(&i, |(k, _)| *k) {
                Ok(pos) => &v[pos].1,
                Err(_) => &EMPTY,
            },
        }
    }
}

impl Node {
    fn child(&self, i: u32) -> &Node {
        match self {
            Node::Empty => &EMPTY,
            Node::Full => {
                static FULL: Node = Node::Full;
                &FULL
            }
            Node::Mixed(c) => c.get(i),
        }
    }

    /// Canonical node from a dense child list.
    fn from_children(children: Vec<Node>) -> Node {
        let width = children.len();
        let full = children.iter().filter(|c| **c == Node::Full).count();
        let empty = children.iter().filter(|c| **c == Node::Empty).count();
        if full == width {
            return Node::Full;
        }
        if empty == width {
            return Node::Empty;
        }
        // Sparse below half occupancy. The choice depends only on the set,
        // which keeps structural equality equivalent to set equality.
        let occupied = width - empty;
        if occupied * 2 < width {
            let sparse = children
                .into_iter()
                .enumerate()
                .filter(|(_, c)| *c != Node::Empty)
                .map(|(i, c)| (i as u32, c))
                .collect();
            Node::Mixed(Arc::new(Children::Sparse(sparse)))
        } else {
            Node::Mixed(Arc::new(Children::Dense(children)))
        }
    }
}

/// A closed rectangle `∏_i {x : |x_i − c_i|_p ≤ p^{−t_i}}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallSpec {
    pub center: Vec<BigRational>,
    pub radius_exponents: Vec<u32>,
}

impl BallSpec {
    pub fn new(center: Vec<BigRational>, radius_exponents: Vec<u32>) -> Self {
        BallSpec {
            center,
            radius_exponents,
        }
    }

    /// A cube: every coordinate uses exponent `t`.
    pub fn cube(center: Vec<BigRational>, t: u32) -> Self {
        let n = center.len();
        BallSpec::new(center, vec![t; n])
    }

    fn digits(&self, p: u64) -> Result<DigitRect> {
        let digits = self
            .center
            .iter()
            .zip(&self.radius_exponents)
            .map(|(c, &t)| rational_digits(c, p, t))
            .collect::<Result<Vec<_>>>()?;
        Ok(DigitRect { digits })
    }
}

/// The first `t` base-p digits of a p-adic integer given as a rational.
pub fn rational_digits(x: &BigRational, p: u64, t: u32) -> Result<Vec<u32>> {
    if t == 0 {
        return Ok(Vec::new());
    }
    let m = BigInt::from(Pow::pow(BigUint::from(p), t));
    let den = x.denom().mod_floor(&m);
    let inv = crate::padic::mod_inverse(&den, &m).ok_or_else(|| Error::NotPAdicInteger {
        denom: x.denom().to_string(),
        p,
    })?;
    let r = (x.numer().mod_floor(&m) * inv).mod_floor(&m);
    Ok(residue_digits(&r, p, t))
}

fn residue_digits(r: &BigInt, p: u64, t: u32) -> Vec<u32> {
    let pb = BigInt::from(p);
    let mut r = r.clone();
    (0..t)
        .map(|_| {
            let (q, d) = r.div_mod_floor(&pb);
            r = q;
            d.to_u32().expect("digit < p")
        })
        .collect()
}

/// A rectangle as fixed digit prefixes, one per coordinate.
#[derive(Clone, Debug)]
pub(crate) struct DigitRect {
    pub(crate) digits: Vec<Vec<u32>>,
}

impl DigitRect {
    fn depth(&self) -> usize {
        self.digits.iter().map(Vec::len).max().unwrap_or(0)
    }

    fn covers_at(&self, level: usize) -> bool {
        self.digits.iter().all(|d| d.len() <= level)
    }

    /// Child indices at `level` met by the rectangle, ascending.
    fn child_indices(&self, level: usize, p: u32) -> Vec<u32> {
        let mut out = vec![0u32];
        let mut stride = 1u32;
        for d in &self.digits {
            let choices: Vec<u32> = match d.get(level) {
                Some(&digit) => vec![digit],
                None => (0..p).collect(),
            };
            out = choices
                .iter()
                .flat_map(|&c| out.iter().map(move |&o| o + c * stride))
                .collect();
            stride *= p;
        }
        out.sort_unstable();
        out
    }
}

/// An exact clopen subset of `Z_p^n`, resolved to at most `depth` digits.
#[derive(Clone, Debug)]
pub struct ClopenSet {
    p: u64,
    n: usize,
    depth: u32,
    root: Node,
}

/// Equality is set equality; the nominal depth is ignored.
impl PartialEq for ClopenSet {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.n == other.n && self.root == other.root
    }
}

impl Eq for ClopenSet {}

impl ClopenSet {
    pub fn empty(p: u64, n: usize, depth: u32) -> Self {
        Self::with_root(p, n, depth, Node::Empty)
    }

    pub fn full(p: u64, n: usize, depth: u32) -> Self {
        Self::with_root(p, n, depth, Node::Full)
    }

    fn with_root(p: u64, n: usize, depth: u32, root: Node) -> Self {
        assert!(p >= 2 && n >= 1, "need p >= 2 and n >= 1");
        let width = (p as u128).checked_pow(n as u32);
        assert!(
            width.is_some_and(|w| w <= u32::MAX as u128),
            "p^n children per node must fit in u32"
        );
        ClopenSet { p, n, depth, root }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn is_empty(&self) -> bool {
        self.root == Node::Empty
    }

    pub fn is_full(&self) -> bool {
        self.root == Node::Full
    }

    fn width(&self) -> u32 {
        (self.p as u32).pow(self.n as u32)
    }

    /// A single rectangle.
    pub fn rectangle(p: u64, depth: u32, r: &BallSpec) -> Result<Self> {
        Self::from_rectangles(p, r.center.len(), depth, std::slice::from_ref(r))
    }

    /// Union of many rectangles, built top-down in one pass.
    pub fn from_rectangles(p: u64, n: usize, depth: u32, rects: &[BallSpec]) -> Result<Self> {
        let digit_rects = rects
            .iter()
            .map(|r| {
                if r.center.len() != n || r.radius_exponents.len() != n {
                    return Err(Error::ShapeMismatch(format!(
                        "rectangle of dimension {} in Z_p^{n}",
                        r.center.len()
                    )));
                }
                r.digits(p)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_digit_rects(p, n, depth, &digit_rects)
    }

    pub(crate) fn from_digit_rects(
        p: u64,
        n: usize,
        depth: u32,
        rects: &[DigitRect],
    ) -> Result<Self> {
        if let Some(needed) = rects.iter().map(DigitRect::depth).max() {
            if needed > depth as usize {
                return Err(Error::InsufficientDepth {
                    needed: needed as u32,
                    depth,
                });
            }
        }
        let set = Self::empty(p, n, depth);
        let refs: Vec<&DigitRect> = rects.iter().collect();
        let root = build(&refs, 0, p as u32, set.width());
        Ok(ClopenSet { root, ..set })
    }

    /// `self ∪ r`.
    pub fn insert_rectangle(&self, r: &BallSpec) -> Result<Self> {
        if r.center.len() != self.n {
            return Err(Error::ShapeMismatch(format!(
                "rectangle of dimension {} in Z_p^{}",
                r.center.len(),
                self.n
            )));
        }
        let rect = Self::rectangle(self.p, self.depth, r)?;
        self.union(&rect)
    }

    /// Cartesian product; coordinates of `factors[0]` come first.
    pub fn product(factors: &[ClopenSet]) -> Result<Self> {
        let first = factors
            .first()
            .ok_or_else(|| Error::Invalid("empty product".into()))?;
        let p = first.p;
        if let Some(f) = factors.iter().find(|f| f.p != p) {
            return Err(Error::PrimeMismatch {
                left: p,
                right: f.p,
            });
        }
        let n: usize = factors.iter().map(|f| f.n).sum();
        let depth = factors.iter().map(|f| f.depth).max().unwrap_or(0);
        let widths: Vec<u32> = factors.iter().map(ClopenSet::width).collect();
        let set = Self::empty(p, n, depth);
        let roots: Vec<&Node> = factors.iter().map(|f| &f.root).collect();
        let root = product_node(&roots, &widths);
        Ok(ClopenSet { root, ..set })
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch {
                left: self.p,
                right: other.p,
            });
        }
        if self.n != other.n {
            return Err(Error::ShapeMismatch(format!(
                "dimensions {} and {}",
                self.n, other.n
            )));
        }
        Ok(())
    }

    fn binary(&self, other: &Self, f: fn(&Node, &Node, u32) -> Node) -> Result<Self> {
        self.check_shape(other)?;
        Ok(ClopenSet {
            p: self.p,
            n: self.n,
            depth: self.depth.max(other.depth),
            root: f(&self.root, &other.root, self.width()),
        })
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.binary(other, union)
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.binary(other, intersect)
    }

    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.binary(other, difference)
    }

    pub fn complement(&self) -> Self {
        ClopenSet {
            root: complement(&self.root, self.width()),
            ..self.clone()
        }
    }

    /// Exact Haar measure; the denominator divides `p^{n·depth}`.
    pub fn measure(&self) -> BigRational {
        let cells = self.cells(&self.root, 0, self.depth);
        let total: BigUint = Pow::pow(BigUint::from(self.p), self.n as u64 * self.depth as u64);
        BigRational::new(BigInt::from(cells), BigInt::from(total))
    }

    /// Number of depth-`k` cells inside the set, for `k` at least the trie's
    /// actual depth.
    fn cells(&self, node: &Node, level: u32, k: u32) -> BigUint {
        match node {
            Node::Empty => BigUint::zero(),
            Node::Full => Pow::pow(BigUint::from(self.p), self.n as u64 * (k - level) as u64),
            Node::Mixed(c) => {
                assert!(level < k, "mixed node at the resolution limit");
                children_iter(c, self.width())
                    .map(|(_, ch)| self.cells(ch, level + 1, k))
                    .sum()
            }
        }
    }

    /// Number of level-`k` cosets meeting the set.
    pub fn box_count(&self, k: u32) -> Result<BigUint> {
        if k > self.depth {
            return Err(Error::InsufficientDepth {
                needed: k,
                depth: self.depth,
            });
        }
        Ok(self.count_boxes(&self.root, 0, k))
    }

    fn count_boxes(&self, node: &Node, level: u32, k: u32) -> BigUint {
        match node {
            Node::Empty => BigUint::zero(),
            Node::Full => Pow::pow(BigUint::from(self.p), self.n as u64 * (k - level) as u64),
            Node::Mixed(_) if level == k => BigUint::one(),
            Node::Mixed(c) => children_iter(c, self.width())
                .map(|(_, ch)| self.count_boxes(ch, level + 1, k))
                .sum(),
        }
    }

    /// Representatives (one residue mod `p^k` per coordinate) of the
    /// level-`k` cosets meeting the set, in trie order.
    pub fn enumerate_cosets(&self, k: u32) -> Result<Vec<Vec<BigUint>>> {
        if k > self.depth {
            return Err(Error::InsufficientDepth {
                needed: k,
                depth: self.depth,
            });
        }
        let mut out = Vec::new();
        let mut prefix = vec![BigUint::zero(); self.n];
        let mut scale = BigUint::one();
        self.walk_cosets(&self.root, 0, k, &mut prefix, &mut scale, &mut out);
        Ok(out)
    }

    fn walk_cosets(
        &self,
        node: &Node,
        level: u32,
        k: u32,
        prefix: &mut Vec<BigUint>,
        scale: &mut BigUint,
        out: &mut Vec<Vec<BigUint>>,
    ) {
        if *node == Node::Empty {
            return;
        }
        if level == k {
            out.push(prefix.clone());
            return;
        }
        let p = self.p as u32;
        for idx in 0..self.width() {
            let ch = node.child(idx);
            if *ch == Node::Empty {
                continue;
            }
            let digits = split_index(idx, p, self.n);
            for (x, d) in prefix.iter_mut().zip(&digits) {
                *x += &*scale * *d;
            }
            *scale *= self.p;
            self.walk_cosets(ch, level + 1, k, prefix, scale, out);
            *scale /= self.p;
            for (x, d) in prefix.iter_mut().zip(&digits) {
                *x -= &*scale * *d;
            }
        }
    }

    /// Membership of a point given by base-p digits (least significant
    /// first, one vector per coordinate). Errors when the digits run out
    /// before the trie decides.
    pub fn contains_digits(&self, digits: &[Vec<u32>]) -> Result<bool> {
        if digits.len() != self.n {
            return Err(Error::ShapeMismatch("point dimension".into()));
        }
        let mut node = &self.root;
        let mut level = 0usize;
        loop {
            match node {
                Node::Empty => return Ok(false),
                Node::Full => return Ok(true),
                Node::Mixed(_) => {
                    let mut idx = 0u32;
                    let mut stride = 1u32;
                    for d in digits {
                        let digit = *d.get(level).ok_or(Error::InsufficientPrecision {
                            needed: level as u32 + 1,
                            have: d.len() as u32,
                        })?;
                        idx += digit * stride;
                        stride *= self.p as u32;
                    }
                    node = node.child(idx);
                    level += 1;
                }
            }
        }
    }

    pub fn contains(&self, point: &[BigRational]) -> Result<bool> {
        let digits = point
            .iter()
            .map(|x| rational_digits(x, self.p, self.depth))
            .collect::<Result<Vec<_>>>()?;
        self.contains_digits(&digits)
    }

    /// Number of trie nodes, counting shared subtrees once per reference.
    pub fn node_count(&self) -> usize {
        fn go(node: &Node, width: u32) -> usize {
            match node {
                Node::Mixed(c) => 1 + children_iter(c, width).map(|(_, ch)| go(ch, width)).sum::<usize>(),
                _ => 1,
            }
        }
        go(&self.root, self.width())
    }

    /// Deterministic text form: a header line, then the preorder walk with
    /// `E` (empty), `F` (full) and `M` (mixed, followed by all `p^n`
    /// children in index order).
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "clopen v1 p={} n={} depth={}", self.p, self.n, self.depth);
        fn go(node: &Node, width: u32, s: &mut String) {
            match node {
                Node::Empty => s.push('E'),
                Node::Full => s.push('F'),
                Node::Mixed(_) => {
                    s.push('M');
                    for i in 0..width {
                        go(node.child(i), width, s);
                    }
                }
            }
        }
        go(&self.root, self.width(), &mut s);
        s.push('\n');
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Parse(format!("clopen text: {msg}"));
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| bad("missing header"))?;
        let mut fields = header.split_whitespace();
        if fields.next() != Some("clopen") || fields.next() != Some("v1") {
            return Err(bad("expected `clopen v1`"));
        }
        let mut get = |key: &str| -> Result<u64> {
            let field = fields.next().ok_or_else(|| bad("short header"))?;
            field
                .strip_prefix(key)
                .and_then(|v| v.strip_prefix('='))
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| bad(&format!("bad field {field:?}")))
        };
        let p = get("p")?;
        let n = get("n")? as usize;
        let depth = get("depth")? as u32;
        if !crate::padic::is_prime(p) || n == 0 {
            return Err(bad("invalid p or n"));
        }
        let body: Vec<u8> = lines.flat_map(|l| l.trim().bytes()).collect();
        let set = Self::empty(p, n, depth);
        let width = set.width();
        let mut pos = 0usize;
        fn parse(
            body: &[u8],
            pos: &mut usize,
            width: u32,
            level: u32,
            depth: u32,
        ) -> std::result::Result<Node, String> {
            let tag = *body.get(*pos).ok_or("truncated body")?;
            *pos += 1;
            match tag {
                b'E' => Ok(Node::Empty),
                b'F' => Ok(Node::Full),
                b'M' if level >= depth => Err("mixed node below depth".into()),
                b'M' => {
                    let children = (0..width)
                        .map(|_| parse(body, pos, width, level + 1, depth))
                        .collect::<std::result::Result<Vec<_>, _>>()?;
                    Ok(Node::from_children(children))
                }
                other => Err(format!("unknown tag {:?}", other as char)),
            }
        }
        let root = parse(&body, &mut pos, width, 0, depth).map_err(|m| bad(&m))?;
        if pos != body.len() {
            return Err(bad("trailing data"));
        }
        Ok(ClopenSet { root, ..set })
    }
}

fn children_iter(c: &Children, width: u32) -> Box<dyn Iterator<Item = (u32, &Node)> + '_> {
    match c {
        Children::Dense(v) => {
            debug_assert_eq!(v.len(), width as usize);
            Box::new(v.iter().enumerate().map(|(i, n)| (i as u32, n)))
        }
        Children::Sparse(v) => Box::new(v.iter().map(|(i, n)| (*i, n))),
    }
}

fn split_index(mut idx: u32, p: u32, n: usize) -> Vec<u32> {
    (0..n)
        .map(|_| {
            let d = idx % p;
            idx /= p;
            d
        })
        .collect()
}

fn build(rects: &[&DigitRect], level: usize, p: u32, width: u32) -> Node {
    if rects.is_empty() {
        return Node::Empty;
    }
    if rects.iter().any(|r| r.covers_at(level)) {
        return Node::Full;
    }
    let mut buckets: Vec<Vec<&DigitRect>> = vec![Vec::new(); width as usize];
    for r in rects {
        for idx in r.child_indices(level, p) {
            buckets[idx as usize].push(r);
        }
    }
    let children = buckets
        .iter()
        .map(|b| build(b, level + 1, p, width))
        .collect();
    Node::from_children(children)
}

fn map_children(a: &Node, b: &Node, width: u32, f: fn(&Node, &Node, u32) -> Node) -> Node {
    let children = (0..width)
        .map(|i| f(a.child(i), b.child(i), width))
        .collect();
    Node::from_children(children)
}

fn union(a: &Node, b: &Node, width: u32) -> Node {
    match (a, b) {
        (Node::Full, _) | (_, Node::Full) => Node::Full,
        (Node::Empty, x) | (x, Node::Empty) => x.clone(),
        (Node::Mixed(x), Node::Mixed(y)) if Arc::ptr_eq(x, y) => a.clone(),
        _ => map_children(a, b, width, union),
    }
}

fn intersect(a: &Node, b: &Node, width: u32) -> Node {
    match (a, b) {
        (Node::Empty, _) | (_, Node::Empty) => Node::Empty,
        (Node::Full, x) | (x, Node::Full) => x.clone(),
        (Node::Mixed(x), Node::Mixed(y)) if Arc::ptr_eq(x, y) => a.clone(),
        _ => map_children(a, b, width, intersect),
    }
}

fn difference(a: &Node, b: &Node, width: u32) -> Node {
    match (a, b) {
        (Node::Empty, _) | (_, Node::Full) => Node::Empty,
        (x, Node::Empty) => x.clone(),
        (Node::Full, y) => complement(y, width),
        (Node::Mixed(x), Node::Mixed(y)) if Arc::ptr_eq(x, y) => Node::Empty,
        _ => map_children(a, b, width, difference),
    }
}

fn complement(a: &Node, width: u32) -> Node {
    match a {
        Node::Empty => Node::Full,
        Node::Full => Node::Empty,
        Node::Mixed(_) => {
            Node::from_children((0..width).map(|i| complement(a.child(i), width)).collect())
        }
    }
}

fn product_node(nodes: &[&Node], widths: &[u32]) -> Node {
    if nodes.iter().any(|n| **n == Node::Empty) {
        return Node::Empty;
    }
    if nodes.iter().all(|n| **n == Node::Full) {
        return Node::Full;
    }
    let total: u32 = widths.iter().product();
    let children = (0..total)
        .map(|mut idx| {
            let parts: Vec<&Node> = nodes
                .iter()
                .zip(widths)
                .map(|(node, &w)| {
                    let i = idx % w;
                    idx /= w;
                    node.child(i)
                })
                .collect();
            product_node(&parts, widths)
        })
        .collect();
    Node::from_children(children)
}
