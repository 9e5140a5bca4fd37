//! The free pre-operad on a signature of generators.
//!
//! Basis elements are planar rooted trees whose vertices are decorated by
//! generators; the bare leaf is the unit. Grafting `s` into leaf `i` of `t`
//! carries the Koszul sign `(-1)^{|s| D}`, where `D` is the total desuspended
//! degree of the vertices of `t` visited after leaf `i` in pre-order (root
//! first, children left to right). Reading a tree as the word of its vertices
//! in pre-order, grafting places the vertices of `s` as one contiguous block,
//! and the sign is that of moving the block into place.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use rand::seq::IndexedRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::calculus::PreOperad;
use crate::endo::{endo_compose_at, identity_hom, random_hom, HomElement};
use crate::error::{Error, Result};
use crate::ring::{Graded, LinComb, Ring, Scalar, Sign};

/// A named operation of fixed arity `>= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    name: Arc<str>,
    arity: usize,
}

impl Generator {
    pub fn new(name: &str, arity: usize) -> Result<Self> {
        let invalid = |reason: &str| Error::InvalidGenerator {
            name: name.to_string(),
            reason: reason.to_string(),
        };
        if arity == 0 {
            return Err(invalid("nullary generators are not supported"));
        }
        let mut chars = name.chars();
        let starts_ok = chars
            .next()
            .is_some_and(|c| c.is_ascii_alphabetic());
        if !starts_ok || !chars.all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(invalid("names are ASCII identifiers starting with a letter"));
        }
        if name == "I" {
            return Err(invalid("`I` is reserved for the unit"));
        }
        Ok(Generator {
            name: name.into(),
            arity,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn desusp(&self) -> i64 {
        self.arity as i64 - 1
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct GeneratorJson {
    name: String,
    arity: usize,
}

/// A finite list of generators with unique names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    generators: Vec<Generator>,
}

impl Signature {
    pub fn new(generators: Vec<Generator>) -> Result<Self> {
        for (k, g) in generators.iter().enumerate() {
            if generators[..k].iter().any(|h| h.name == g.name) {
                return Err(Error::InvalidGenerator {
                    name: g.name().to_string(),
                    reason: "duplicate name".into(),
                });
            }
        }
        Ok(Signature { generators })
    }

    /// `u` (unary), `m` (binary) and `t` (ternary): one generator of each
    /// desuspended degree 0, 1, 2.
    pub fn mixed() -> Self {
        Signature::new(vec![
            Generator::new("u", 1).unwrap(),
            Generator::new("m", 2).unwrap(),
            Generator::new("t", 3).unwrap(),
        ])
        .unwrap()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn get(&self, name: &str) -> Option<&Generator> {
        self.generators.iter().find(|g| &*g.name == name)
    }

    /// JSON list of `{"name": .., "arity": ..}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: Vec<GeneratorJson> = serde_json::from_str(text)?;
        Signature::new(
            raw.iter()
                .map(|g| Generator::new(&g.name, g.arity))
                .collect::<Result<_>>()?,
        )
    }

    pub fn to_json(&self) -> String {
        let raw: Vec<GeneratorJson> = self
            .generators
            .iter()
            .map(|g| GeneratorJson {
                name: g.name().to_string(),
                arity: g.arity,
            })
            .collect();
        serde_json::to_string(&raw).expect("signature serializes")
    }

    /// Whether some tree over this signature has `degree` leaves.
    pub fn reaches(&self, degree: usize) -> bool {
        if degree == 0 {
            return false;
        }
        let steps: Vec<usize> = self
            .generators
            .iter()
            .map(|g| g.arity - 1)
            .filter(|&s| s > 0)
            .collect();
        let target = degree - 1;
        let mut reachable = vec![false; target + 1];
        reachable[0] = true;
        for n in 1..=target {
            reachable[n] = steps.iter().any(|&s| s <= n && reachable[n - s]);
        }
        reachable[target]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Leaf,
    Vertex(Generator, Vec<Node>),
}

impl Node {
    fn leaves(&self) -> usize {
        match self {
            Node::Leaf => 1,
            Node::Vertex(_, children) => children.iter().map(Node::leaves).sum(),
        }
    }

    fn write(&self, out: &mut String, sep: &str) {
        match self {
            Node::Leaf => out.push('_'),
            Node::Vertex(g, children) => {
                out.push_str(g.name());
                out.push('(');
                for (k, child) in children.iter().enumerate() {
                    if k > 0 {
                        out.push_str(sep);
                    }
                    child.write(out, sep);
                }
                out.push(')');
            }
        }
    }
}

/// A generator-decorated planar rooted tree. Equality and order are those of
/// the compact serialization `name(child,..)` with leaves written `_`.
#[derive(Clone, Debug)]
pub struct PlanarTree {
    root: Node,
    key: Box<str>,
}

impl PlanarTree {
    fn from_node(root: Node) -> Self {
        let mut key = String::new();
        root.write(&mut key, ",");
        PlanarTree {
            root,
            key: key.into(),
        }
    }

    /// The trivial tree: the unit.
    pub fn leaf() -> Self {
        PlanarTree::from_node(Node::Leaf)
    }

    pub fn corolla(generator: &Generator) -> Self {
        PlanarTree::from_node(Node::Vertex(
            generator.clone(),
            vec![Node::Leaf; generator.arity],
        ))
    }

    pub fn node(generator: &Generator, children: Vec<PlanarTree>) -> Result<Self> {
        if children.len() != generator.arity {
            return Err(Error::ArityMismatch {
                expected: generator.arity,
                found: children.len(),
            });
        }
        Ok(PlanarTree::from_node(Node::Vertex(
            generator.clone(),
            children.into_iter().map(|c| c.root).collect(),
        )))
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self.root, Node::Leaf)
    }

    /// Compact serialization, also the canonical sort key.
    pub fn key(&self) -> &str {
        &self.key
    }

    /// Vertex generators in pre-order.
    pub fn vertices(&self) -> Vec<&Generator> {
        fn walk<'a>(node: &'a Node, out: &mut Vec<&'a Generator>) {
            if let Node::Vertex(g, children) = node {
                out.push(g);
                for c in children {
                    walk(c, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(&self.root, &mut out);
        out
    }

    /// Parses `m(_, t(_, _, u(_)))`; every generator must belong to
    /// `signature` and carry exactly its arity in children. A bare generator
    /// name stands for its corolla.
    pub fn parse(text: &str, signature: &Signature) -> Result<Self> {
        let mut parser = TreeParser {
            src: text.as_bytes(),
            pos: 0,
            signature,
        };
        let node = parser.tree()?;
        parser.skip_ws();
        if parser.pos != parser.src.len() {
            return Err(parser.error("trailing input"));
        }
        Ok(PlanarTree::from_node(node))
    }
}

impl Graded for PlanarTree {
    /// Number of leaves.
    fn degree(&self) -> usize {
        self.root.leaves()
    }
}

impl PartialEq for PlanarTree {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}

impl Eq for PlanarTree {}

impl Hash for PlanarTree {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key.hash(state);
    }
}

impl PartialOrd for PlanarTree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PlanarTree {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.cmp(&other.key)
    }
}

impl fmt::Display for PlanarTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        self.root.write(&mut out, ", ");
        f.write_str(&out)
    }
}

struct TreeParser<'a> {
    src: &'a [u8],
    pos: usize,
    signature: &'a Signature,
}

impl TreeParser<'_> {
    fn error(&self, what: &str) -> Error {
        Error::Format(format!("tree syntax at byte {}: {what}", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, byte: u8) -> bool {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&byte) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn tree(&mut self) -> Result<Node> {
        self.skip_ws();
        if self.eat(b'_') {
            return Ok(Node::Leaf);
        }
        let start = self.pos;
        while self
            .src
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_')
        {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected `_` or a generator name"));
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        let generator = self
            .signature
            .get(name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?
            .clone();
        if !self.eat(b'(') {
            return Ok(Node::Vertex(generator.clone(), vec![Node::Leaf; generator.arity]));
        }
        let mut children = vec![self.tree()?];
        while self.eat(b',') {
            children.push(self.tree()?);
        }
        if !self.eat(b')') {
            return Err(self.error("expected `,` or `)`"));
        }
        if children.len() != generator.arity {
            return Err(Error::ArityMismatch {
                expected: generator.arity,
                found: children.len(),
            });
        }
        Ok(Node::Vertex(generator, children))
    }
}

/// Replaces leaf `i` of `t` by `s`; returns the tree and the sign with
/// `t ∘_i s = sign · tree`.
pub fn graft(t: &PlanarTree, i: usize, s: &PlanarTree) -> Result<(PlanarTree, Sign)> {
    struct Walk<'a> {
        target: usize,
        seen: usize,
        after: i64,
        insert: &'a Node,
    }

    impl Walk<'_> {
        fn visit(&mut self, node: &Node) -> Node {
            match node {
                Node::Leaf => {
                    let here = self.seen;
                    self.seen += 1;
                    if here == self.target {
                        self.insert.clone()
                    } else {
                        Node::Leaf
                    }
                }
                Node::Vertex(g, children) => {
                    if self.seen > self.target {
                        self.after += g.desusp();
                    }
                    Node::Vertex(g.clone(), children.iter().map(|c| self.visit(c)).collect())
                }
            }
        }
    }

    let degree = t.degree();
    if i >= degree {
        return Err(Error::IndexOutOfRange {
            index: i,
            max: degree - 1,
        });
    }
    let mut walk = Walk {
        target: i,
        seen: 0,
        after: 0,
        insert: &s.root,
    };
    let grafted = walk.visit(&t.root);
    Ok((
        PlanarTree::from_node(grafted),
        Sign::koszul(s.desusp(), walk.after),
    ))
}

/// A linear combination of trees of one degree.
pub type FreeElement = LinComb<PlanarTree>;

/// `1 · t`.
pub fn free_tree(ring: Ring, tree: PlanarTree) -> FreeElement {
    LinComb::term(ring, tree, ring.one()).expect("coefficient lives in the ring")
}

/// The unit: the bare leaf.
pub fn free_unit(ring: Ring) -> FreeElement {
    free_tree(ring, PlanarTree::leaf())
}

/// Bilinear extension of [`graft`].
pub fn free_compose_at(x: &FreeElement, i: usize, y: &FreeElement) -> Result<FreeElement> {
    if x.ring() != y.ring() {
        return Err(Error::MixedRings(x.ring(), y.ring()));
    }
    if x.degree() == 0 {
        return Err(Error::NoValidPosition);
    }
    if i >= x.degree() {
        return Err(Error::IndexOutOfRange {
            index: i,
            max: x.degree() - 1,
        });
    }
    let mut out = LinComb::zero(x.ring(), x.degree() + y.degree() - 1);
    for (t, a) in x.iter() {
        for (s, b) in y.iter() {
            let (tree, sign) = graft(t, i, s)?;
            out.add_term_unchecked(tree, (a * b).apply_sign(sign));
        }
    }
    Ok(out)
}

impl fmt::Display for LinComb<PlanarTree> {
    /// `m(_, _) + -2*u(_) + (2 mod 3)*m(_, _)`; the zero element prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (tree, coeff)) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            match coeff {
                c if c.is_one() => {}
                Scalar::Residue { .. } => write!(f, "({coeff})*")?,
                _ => write!(f, "{coeff}*")?,
            }
            write!(f, "{tree}")?;
        }
        Ok(())
    }
}

/// Parses the text form written by `Display` (`0` needs the degree).
pub fn parse_free_element(
    text: &str,
    ring: Ring,
    signature: &Signature,
    zero_degree: Option<usize>,
) -> Result<FreeElement> {
    if text.trim() == "0" {
        let degree = zero_degree
            .ok_or_else(|| Error::Format("the zero element needs an explicit degree".into()))?;
        return Ok(LinComb::zero(ring, degree));
    }
    let mut out: Option<FreeElement> = None;
    for term in split_top_level(text, " + ") {
        let term = term.trim();
        let (coeff, tree) = match term.rfind(")*").filter(|_| term.starts_with('(')) {
            Some(end) => (ring.parse_scalar(&term[1..end])?, &term[end + 2..]),
            None => match term.split_once('*') {
                Some((c, t)) => (ring.parse_scalar(c)?, t),
                None => (ring.one(), term),
            },
        };
        let tree = PlanarTree::parse(tree, signature)?;
        let acc = out.get_or_insert_with(|| LinComb::zero(ring, tree.degree()));
        acc.add_term(tree, coeff)?;
    }
    out.ok_or_else(|| Error::Format("empty element".into()))
}

fn split_top_level<'a>(text: &'a str, sep: &str) -> Vec<&'a str> {
    let mut parts = Vec::new();
    let (mut depth, mut start) = (0i32, 0usize);
    let bytes = text.as_bytes();
    let mut k = 0;
    while k < bytes.len() {
        match bytes[k] {
            b'(' => depth += 1,
            b')' => depth -= 1,
            _ if depth == 0 && text[k..].starts_with(sep) => {
                parts.push(&text[start..k]);
                k += sep.len();
                start = k;
                continue;
            }
            _ => {}
        }
        k += 1;
    }
    parts.push(&text[start..]);
    parts
}

/// A random tree with `degree` leaves: start from a leaf and graft random
/// corollas at random leaves. Unary vertices are inserted with small
/// probability so that trees stay finite.
pub fn random_tree<R: Rng + ?Sized>(
    signature: &Signature,
    degree: usize,
    rng: &mut R,
) -> Result<PlanarTree> {
    if !signature.reaches(degree) {
        return Err(Error::Format(format!(
            "no tree of degree {degree} over this signature"
        )));
    }
    let mut tree = PlanarTree::leaf();
    let mut remaining = degree - 1;
    let mut unary_left = 2;
    loop {
        let want_unary = unary_left > 0 && rng.random_bool(0.25);
        let candidates: Vec<&Generator> = signature
            .generators
            .iter()
            .filter(|g| {
                let step = g.arity - 1;
                if step == 0 {
                    want_unary
                } else {
                    step <= remaining && signature.reaches(remaining - step + 1)
                }
            })
            .collect();
        let Some(&generator) = candidates.choose(rng) else {
            if remaining == 0 {
                break;
            }
            continue;
        };
        let leaf = rng.random_range(0..tree.degree());
        tree = graft(&tree, leaf, &PlanarTree::corolla(generator))?.0;
        if generator.arity == 1 {
            unary_left -= 1;
        } else {
            remaining -= generator.arity - 1;
        }
        if remaining == 0 && !rng.random_bool(0.3) {
            break;
        }
    }
    Ok(tree)
}

/// A sum of one to three random trees with random nonzero coefficients.
pub fn random_free<R: Rng + ?Sized>(
    ring: Ring,
    signature: &Signature,
    degree: usize,
    rng: &mut R,
) -> Result<FreeElement> {
    let mut out = LinComb::zero(ring, degree);
    for _ in 0..rng.random_range(1..=3) {
        out.add_term_unchecked(random_tree(signature, degree, rng)?, ring.random_nonzero(rng));
    }
    Ok(out)
}

/// The free pre-operad over a ring, with the signature used for parsing and
/// sampling.
#[derive(Clone, Debug)]
pub struct FreeOperad {
    ring: Ring,
    signature: Signature,
}

impl FreeOperad {
    pub fn new(ring: Ring, signature: Signature) -> Self {
        FreeOperad { ring, signature }
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    fn check(&self, x: &FreeElement) -> Result<()> {
        if x.ring() != self.ring {
            return Err(Error::MixedRings(self.ring, x.ring()));
        }
        Ok(())
    }
}

impl PreOperad for FreeOperad {
    type Elem = FreeElement;

    fn ring(&self) -> Ring {
        self.ring
    }

    fn degree(&self, x: &FreeElement) -> usize {
        x.degree()
    }

    fn unit(&self) -> FreeElement {
        free_unit(self.ring)
    }

    fn zero(&self, degree: usize) -> FreeElement {
        LinComb::zero(self.ring, degree)
    }

    fn is_zero(&self, x: &FreeElement) -> bool {
        x.is_zero()
    }

    fn compose_unchecked(&self, f: &FreeElement, i: usize, g: &FreeElement) -> Result<FreeElement> {
        self.check(f)?;
        free_compose_at(f, i, g)
    }

    fn add(&self, x: &FreeElement, y: &FreeElement) -> Result<FreeElement> {
        self.check(x)?;
        x.checked_add(y)
    }

    fn scale(&self, x: &FreeElement, s: &Scalar) -> Result<FreeElement> {
        self.check(x)?;
        x.scale(s)
    }

    fn neg(&self, x: &FreeElement) -> FreeElement {
        x.neg()
    }
}

/// An assignment of multilinear maps on `K^d` to generators; it extends
/// uniquely to a morphism of pre-operads from the free model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    ring: Ring,
    dim: usize,
    images: BTreeMap<String, HomElement>,
}

impl Representation {
    pub fn new(
        signature: &Signature,
        ring: Ring,
        dim: usize,
        images: BTreeMap<String, HomElement>,
    ) -> Result<Self> {
        for g in signature.generators() {
            let image = images
                .get(g.name())
                .ok_or_else(|| Error::UnknownGenerator(g.name().to_string()))?;
            if image.arity() != g.arity {
                return Err(Error::ArityMismatch {
                    expected: g.arity,
                    found: image.arity(),
                });
            }
            if image.dim() != dim {
                return Err(Error::DimensionMismatch(dim, image.dim()));
            }
            if image.ring() != ring {
                return Err(Error::MixedRings(ring, image.ring()));
            }
        }
        Ok(Representation { ring, dim, images })
    }

    pub fn random<R: Rng + ?Sized>(
        signature: &Signature,
        ring: Ring,
        dim: usize,
        rng: &mut R,
    ) -> Result<Self> {
        let images = signature
            .generators()
            .iter()
            .map(|g| Ok((g.name().to_string(), random_hom(ring, dim, g.arity, rng)?)))
            .collect::<Result<_>>()?;
        Representation::new(signature, ring, dim, images)
    }

    /// JSON map from generator name to element JSON.
    pub fn from_json(text: &str, signature: &Signature) -> Result<Self> {
        let images: BTreeMap<String, HomElement> = serde_json::from_str(text)?;
        let first = images
            .values()
            .next()
            .ok_or_else(|| Error::Format("empty representation".into()))?;
        let (ring, dim) = (first.ring(), first.dim());
        Representation::new(signature, ring, dim, images)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.images).expect("representation serializes")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn image(&self, name: &str) -> Result<&HomElement> {
        self.images
            .get(name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    /// Rebuilds the tree root-first, grafting subtrees right to left, and
    /// mirrors each graft in the endomorphism model with its sign.
    pub fn represent_tree(&self, tree: &PlanarTree) -> Result<HomElement> {
        self.represent_node(&tree.root)
    }

    fn represent_node(&self, node: &Node) -> Result<HomElement> {
        let (generator, children) = match node {
            Node::Leaf => return identity_hom(self.ring, self.dim),
            Node::Vertex(g, children) => (g, children),
        };
        let mut built = PlanarTree::corolla(generator);
        let mut image = self.image(generator.name())?.clone();
        if image.arity() != generator.arity {
            return Err(Error::ArityMismatch {
                expected: generator.arity,
                found: image.arity(),
            });
        }
        for (slot, child) in children.iter().enumerate().rev() {
            if matches!(child, Node::Leaf) {
                continue;
            }
            let child_tree = PlanarTree::from_node(child.clone());
            let (next, sign) = graft(&built, slot, &child_tree)?;
            let composed = endo_compose_at(&image, slot, &self.represent_node(child)?)?;
            image = match sign {
                Sign::Plus => composed,
                Sign::Minus => composed.neg(),
            };
            built = next;
        }
        debug_assert_eq!(built.key, PlanarTree::from_node(node.clone()).key);
        Ok(image)
    }
}

/// The morphism `Ψ`, extended linearly.
pub fn represent(psi: &Representation, x: &FreeElement) -> Result<HomElement> {
    if x.ring() != psi.ring {
        return Err(Error::MixedRings(psi.ring, x.ring()));
    }
    let mut out = HomElement::zero(psi.ring, psi.dim, x.degree())?;
    for (tree, coeff) in x.iter() {
        out = out.checked_add(&psi.represent_tree(tree)?.scale(coeff)?)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{compose_at, relation_rhs, scope};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sig() -> Signature {
        Signature::mixed()
    }

    fn tree(text: &str) -> PlanarTree {
        PlanarTree::parse(text, &sig()).unwrap()
    }

    #[test]
    fn tree_text_round_trip() {
        let t = tree("m(_, t(_,u(_), _))");
        assert_eq!(t.to_string(), "m(_, t(_, u(_), _))");
        assert_eq!(t.key(), "m(_,t(_,u(_),_))");
        assert_eq!(t.degree(), 4);
        assert_eq!(tree("m"), PlanarTree::corolla(sig().get("m").unwrap()));
        assert!(matches!(
            PlanarTree::parse("m(_)", &sig()),
            Err(Error::ArityMismatch { expected: 2, found: 1 })
        ));
        assert!(matches!(
            PlanarTree::parse("q(_)", &sig()),
            Err(Error::UnknownGenerator(_))
        ));
        assert!(PlanarTree::parse("m(_, _) x", &sig()).is_err());
    }

    #[test]
    fn degree_is_additive_over_vertices() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for degree in 1..=6 {
            let t = random_tree(&sig(), degree, &mut rng).unwrap();
            assert_eq!(t.degree(), degree);
            let total: i64 = t.vertices().iter().map(|g| g.desusp()).sum();
            assert_eq!(t.desusp(), total);
        }
    }

    #[test]
    fn graft_signs() {
        // no vertex after the last leaf
        let (t, sign) = graft(&tree("m"), 1, &tree("m")).unwrap();
        assert_eq!((t, sign), (tree("m(_, m(_, _))"), Sign::Plus));
        // root m is visited before leaf 0, so nothing comes after it
        let (t, sign) = graft(&tree("m"), 0, &tree("m")).unwrap();
        assert_eq!((t, sign), (tree("m(m(_, _), _)"), Sign::Plus));
        // the inner m comes after leaf 0
        let (_, sign) = graft(&tree("m(_, m(_, _))"), 0, &tree("m")).unwrap();
        assert_eq!(sign, Sign::Minus);
        let (t, sign) = graft(&tree("m(_, m(_, _))"), 0, &PlanarTree::leaf()).unwrap();
        assert_eq!((t, sign), (tree("m(_, m(_, _))"), Sign::Plus));
        assert!(matches!(
            graft(&tree("m"), 2, &tree("m")),
            Err(Error::IndexOutOfRange { index: 2, max: 1 })
        ));
    }

    #[test]
    fn b_relation_for_binary_generator() {
        let r = Ring::Rationals;
        let m = free_tree(r, tree("m"));
        let lhs = free_compose_at(&free_compose_at(&m, 1, &m).unwrap(), 0, &m).unwrap();
        let rhs = free_compose_at(&free_compose_at(&m, 0, &m).unwrap(), 2, &m).unwrap();
        assert_eq!(lhs, rhs.neg());
    }

    #[test]
    fn bilinear_extension() {
        let r = Ring::Rationals;
        let t = free_tree(r, tree("t")).scale(&r.from_i64(2)).unwrap();
        let s = free_tree(r, tree("m")).scale(&r.from_i64(3)).unwrap();
        let out = free_compose_at(&t, 1, &s).unwrap();
        // the root of t precedes every leaf, so no sign
        assert_eq!(out, free_tree(r, tree("t(_, m(_, _), _)")).scale(&r.from_i64(6)).unwrap());
    }

    #[test]
    fn unit_axioms() {
        let r = Ring::IntegersMod(3);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let unit = free_unit(r);
        assert_eq!(unit.degree(), 1);
        assert_eq!(PlanarTree::leaf().desusp(), 0);
        for degree in 1..=4 {
            let x = random_free(r, &sig(), degree, &mut rng).unwrap();
            assert_eq!(free_compose_at(&unit, 0, &x).unwrap(), x);
            for i in 0..degree {
                assert_eq!(free_compose_at(&x, i, &unit).unwrap(), x);
            }
        }
    }

    #[test]
    fn composition_relations_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for ring in [Ring::Rationals, Ring::IntegersMod(2), Ring::IntegersMod(3)] {
            let op = FreeOperad::new(ring, sig());
            for _ in 0..20 {
                let hd = rng.random_range(1..=4);
                let fd = rng.random_range(1..=3);
                let gd = rng.random_range(1..=3);
                let h = random_free(ring, &sig(), hd, &mut rng).unwrap();
                let f = random_free(ring, &sig(), fd, &mut rng).unwrap();
                let g = random_free(ring, &sig(), gd, &mut rng).unwrap();
                for (i, j) in scope(hd, fd) {
                    let lhs = compose_at(&op, &compose_at(&op, &h, i, &f).unwrap(), j, &g).unwrap();
                    assert_eq!(lhs, relation_rhs(&op, &h, &f, &g, i, j).unwrap(), "({i},{j})");
                }
            }
        }
    }

    #[test]
    fn representation_is_a_morphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let ring = Ring::Rationals;
        for dim in [2, 3] {
            for _ in 0..10 {
                let psi = Representation::random(&sig(), ring, dim, &mut rng).unwrap();
                let xd = rng.random_range(1..=3);
                let x = random_free(ring, &sig(), xd, &mut rng).unwrap();
                let y = random_free(ring, &sig(), rng.random_range(1..=2), &mut rng).unwrap();
                let i = rng.random_range(0..xd);
                let lhs = represent(&psi, &free_compose_at(&x, i, &y).unwrap()).unwrap();
                let rhs = endo_compose_at(&represent(&psi, &x).unwrap(), i, &represent(&psi, &y).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn corolla_represents_its_image() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let psi = Representation::random(&sig(), Ring::Rationals, 2, &mut rng).unwrap();
        let m = free_tree(Ring::Rationals, tree("m"));
        assert_eq!(&represent(&psi, &m).unwrap(), psi.image("m").unwrap());
        let unit = free_unit(Ring::Rationals);
        assert_eq!(represent(&psi, &unit).unwrap(), identity_hom(Ring::Rationals, 2).unwrap());
    }

    #[test]
    fn representation_requires_every_generator() {
        let mut images = BTreeMap::new();
        images.insert("m".to_string(), random_hom(Ring::Rationals, 2, 2, &mut ChaCha8Rng::seed_from_u64(1)).unwrap());
        assert!(matches!(
            Representation::new(&sig(), Ring::Rationals, 2, images),
            Err(Error::UnknownGenerator(_))
        ));
    }

    #[test]
    fn element_text_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for ring in [Ring::Rationals, Ring::IntegersMod(3), Ring::Integers] {
            for degree in 1..=4 {
                let x = random_free(ring, &sig(), degree, &mut rng).unwrap();
                let text = x.to_string();
                assert_eq!(parse_free_element(&text, ring, &sig(), None).unwrap(), x, "{text}");
            }
        }
        let zero = parse_free_element("0", Ring::Rationals, &sig(), Some(3)).unwrap();
        assert!(zero.is_zero());
        assert_eq!(zero.degree(), 3);
    }

    #[test]
    fn signature_json() {
        let text = r#"[{"name":"u","arity":1},{"name":"m","arity":2},{"name":"t","arity":3}]"#;
        assert_eq!(Signature::from_json(text).unwrap(), sig());
        assert_eq!(sig().to_json(), text);
        assert!(Signature::from_json(r#"[{"name":"m","arity":2},{"name":"m","arity":3}]"#).is_err());
        assert!(Signature::from_json(r#"[{"name":"z","arity":0}]"#).is_err());
        assert!(sig().reaches(5));
        let odd = Signature::new(vec![Generator::new("t", 3).unwrap()]).unwrap();
        assert!(odd.reaches(3) && !odd.reaches(2));
    }
}
