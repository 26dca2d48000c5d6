use std::collections::HashSet;

use super::{CubicalSet, DegCell};
use crate::cube::{CubeMor, Entry};
use crate::error::{Error, Result};

/// A map of cubical sets, given on nondegenerate cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubicalMap {
    src: CubicalSet,
    dst: CubicalSet,
    assign: Vec<DegCell>,
}

impl CubicalMap {
    pub fn new(src: CubicalSet, dst: CubicalSet, assign: Vec<DegCell>) -> Result<Self> {
        let m = Self { src, dst, assign };
        m.validate()?;
        Ok(m)
    }

    pub fn src(&self) -> &CubicalSet {
        &self.src
    }

    pub fn dst(&self) -> &CubicalSet {
        &self.dst
    }

    pub fn assign(&self) -> &[DegCell] {
        &self.assign
    }

    pub fn identity(x: &CubicalSet) -> Self {
        let assign = (0..x.len()).map(|c| x.nondeg(c)).collect();
        Self {
            src: x.clone(),
            dst: x.clone(),
            assign,
        }
    }

    /// The unique map to the terminal cubical set `□[0]`.
    pub fn to_point(x: &CubicalSet) -> Self {
        let pt = super::representable(0);
        let assign = x
            .cells()
            .iter()
            .map(|c| DegCell {
                eta: CubeMor::from_parts_unchecked(c.dim, Vec::new()),
                cell: 0,
            })
            .collect();
        Self {
            src: x.clone(),
            dst: pt,
            assign,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.assign.len() != self.src.len() {
            return Err(Error::InvalidCubicalSet("map must assign every cell".into()));
        }
        for (c, img) in self.assign.iter().enumerate() {
            let d = self.src.dim(c);
            if img.cell >= self.dst.len()
                || img.eta.src() != d
                || !img.eta.is_epi()
                || img.eta.dst() != self.dst.dim(img.cell)
            {
                return Err(Error::InvalidCubicalSet(format!("bad image for `{}`", self.src.cells()[c].id)));
            }
            for k in 0..d {
                for i in 0..2u8 {
                    let lhs = self.apply(self.src.face(c, k, i));
                    let rhs = self.dst.act(&CubeMor::coface(d - 1, k, i)?, img);
                    if lhs != rhs {
                        return Err(Error::InvalidCubicalSet(format!(
                            "map does not commute with face ({k},{i}) of `{}`",
                            self.src.cells()[c].id
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Image of an element.
    pub fn apply(&self, x: &DegCell) -> DegCell {
        self.dst.act(&x.eta, &self.assign[x.cell])
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &CubicalMap) -> Result<CubicalMap> {
        if g.dst != self.src {
            return Err(Error::DimensionMismatch("composing cubical maps".into()));
        }
        let assign = g.assign.iter().map(|x| self.apply(x)).collect();
        Ok(CubicalMap {
            src: g.src.clone(),
            dst: self.dst.clone(),
            assign,
        })
    }
}

/// Injectivity on elements of every dimension up to `cap`.
pub fn check_mono(f: &CubicalMap, cap: usize) -> bool {
    for m in 0..=cap {
        let mut seen = HashSet::new();
        for x in f.src().elements(m) {
            if !seen.insert(f.apply(&x)) {
                return false;
            }
        }
    }
    true
}

/// A section of an epi `eta : [n] -> [m]`, i.e. `eta ∘ s = id`.
fn section(eta: &CubeMor) -> CubeMor {
    let mut entries = vec![Entry::Const(0); eta.src()];
    for (r, e) in eta.entries().iter().enumerate() {
        if let Entry::Var(j) = *e {
            entries[j - 1] = Entry::Var(r + 1);
        }
    }
    CubeMor::new(eta.dst(), entries).expect("section of an epi")
}

/// Backtracking search for maps `src -> dst` with prescribed values on some
/// cells and a per-cell admissibility filter. Cells are visited from the top
/// dimension down, so most values are forced by an assigned coface.
struct MapSearch<'a> {
    src: &'a CubicalSet,
    dst: &'a CubicalSet,
    order: Vec<usize>,
    candidates: Vec<Vec<DegCell>>,
    allowed: Vec<HashSet<DegCell>>,
    /// `(parent, k, i, s)` with `face(parent, k, i) = eta · c` and `s` a
    /// section of `eta`.
    parents: Vec<Vec<(usize, usize, u8, CubeMor)>>,
    nodes: u64,
    budget: u64,
}

impl<'a> MapSearch<'a> {
    fn new(
        src: &'a CubicalSet,
        dst: &'a CubicalSet,
        fixed: &dyn Fn(usize) -> Option<DegCell>,
        filter: &dyn Fn(usize, &DegCell) -> bool,
        budget: u64,
    ) -> Self {
        let mut order: Vec<usize> = (0..src.len()).collect();
        order.sort_by_key(|&c| (std::cmp::Reverse(src.dim(c)), c));
        let mut by_dim: Vec<Vec<DegCell>> = Vec::new();
        let candidates: Vec<Vec<DegCell>> = (0..src.len())
            .map(|c| {
                if let Some(v) = fixed(c) {
                    return if filter(c, &v) { vec![v] } else { Vec::new() };
                }
                let d = src.dim(c);
                while by_dim.len() <= d {
                    let m = by_dim.len();
                    by_dim.push(dst.elements(m));
                }
                by_dim[d].iter().filter(|v| filter(c, v)).cloned().collect()
            })
            .collect();
        let allowed = candidates.iter().map(|v| v.iter().cloned().collect()).collect();
        let mut parents = vec![Vec::new(); src.len()];
        for p in 0..src.len() {
            let d = src.dim(p);
            for k in 0..d {
                for i in 0..2u8 {
                    let f = src.face(p, k, i);
                    parents[f.cell].push((p, k, i, section(&f.eta)));
                }
            }
        }
        Self {
            src,
            dst,
            order,
            candidates,
            allowed,
            parents,
            nodes: 0,
            budget,
        }
    }

    fn consistent(&self, assign: &[Option<DegCell>], c: usize, v: &DegCell) -> bool {
        let d = self.src.dim(c);
        for k in 0..d {
            for i in 0..2u8 {
                let f = self.src.face(c, k, i);
                let Some(img) = &assign[f.cell] else { continue };
                let lhs = self.dst.act(&f.eta, img);
                let rhs = self.dst.act(&CubeMor::coface(d - 1, k, i).expect("in range"), v);
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    /// Calls `visit` on each complete map until it returns `false`.
    fn run(&mut self, visit: &mut dyn FnMut(&[DegCell]) -> bool) -> Result<()> {
        let mut assign: Vec<Option<DegCell>> = vec![None; self.src.len()];
        self.rec(0, &mut assign, visit).map(|_| ())
    }

    fn rec(
        &mut self,
        pos: usize,
        assign: &mut Vec<Option<DegCell>>,
        visit: &mut dyn FnMut(&[DegCell]) -> bool,
    ) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded(self.budget));
        }
        if pos == self.order.len() {
            let full: Vec<DegCell> = assign.iter().map(|x| x.clone().expect("complete")).collect();
            return Ok(visit(&full));
        }
        let c = self.order[pos];
        let forced = self.parents[c].iter().find_map(|&(p, k, i, ref sec)| {
            let img = assign[p].as_ref()?;
            let delta = CubeMor::coface(self.src.dim(p) - 1, k, i).expect("in range");
            Some(self.dst.act(sec, &self.dst.act(&delta, img)))
        });
        let cands = match forced {
            Some(v) if self.allowed[c].contains(&v) => vec![v],
            Some(_) => Vec::new(),
            None => self.candidates[c].clone(),
        };
        for v in cands {
            if self.consistent(assign, c, &v) && self.consistent_above(assign, c, &v) {
                assign[c] = Some(v);
                let cont = self.rec(pos + 1, assign, visit)?;
                assign[c] = None;
                if !cont {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    fn consistent_above(&self, assign: &[Option<DegCell>], c: usize, v: &DegCell) -> bool {
        self.parents[c].iter().all(|&(p, k, i, _)| {
            let Some(img) = &assign[p] else { return true };
            let delta = CubeMor::coface(self.src.dim(p) - 1, k, i).expect("in range");
            self.dst.act(&delta, img) == self.dst.act(&self.src.face(p, k, i).eta, v)
        })
    }
}

/// A face-preserving bijection on nondegenerate cells, if one exists.
pub fn find_isomorphism(a: &CubicalSet, b: &CubicalSet, budget: u64) -> Result<Option<CubicalMap>> {
    if a.counts() != b.counts() {
        return Ok(None);
    }
    let filter = |c: usize, v: &DegCell| v.is_nondegenerate() && a.dim(c) == b.dim(v.cell);
    let mut search = MapSearch::new(a, b, &|_| None, &filter, budget);
    let mut found = None;
    search.run(&mut |assign| {
        let mut used = HashSet::new();
        if assign.iter().all(|x| used.insert(x.cell)) {
            found = Some(assign.to_vec());
            false
        } else {
            true
        }
    })?;
    Ok(found.map(|assign| CubicalMap {
        src: a.clone(),
        dst: b.clone(),
        assign,
    }))
}

/// Outcome of an exhaustive lifting search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RlpReport {
    pub pass: bool,
    /// Battery entries with a square that has no filler.
    pub failures: Vec<String>,
    /// Number of commutative squares examined.
    pub squares: u64,
}

/// Right lifting property of `p` against each battery inclusion, by
/// exhaustive search over commutative squares.
pub fn check_rlp_brute(p: &CubicalMap, battery: &[(String, CubicalMap)], budget: u64) -> Result<RlpReport> {
    let (x, y) = (p.src(), p.dst());
    let mut failures = Vec::new();
    let mut squares = 0u64;
    for (name, i) in battery {
        let (a, b) = (i.src(), i.dst());
        // image of each cell of A as a nondegenerate cell of B
        let mut a_in_b = Vec::with_capacity(a.len());
        for img in i.assign() {
            if !img.is_nondegenerate() {
                return Err(Error::Precondition(format!("battery map `{name}` is not a mono")));
            }
            a_in_b.push(img.cell);
        }
        let mut pre: Vec<Option<usize>> = vec![None; b.len()];
        for (ac, &bc) in a_in_b.iter().enumerate() {
            pre[bc] = Some(ac);
        }
        let mut vs: Vec<Vec<DegCell>> = Vec::new();
        MapSearch::new(b, y, &|_| None, &|_, _| true, budget).run(&mut |v| {
            vs.push(v.to_vec());
            true
        })?;
        let mut failed = false;
        'squares: for v in &vs {
            let mut us: Vec<Vec<DegCell>> = Vec::new();
            let filt = |ac: usize, cand: &DegCell| p.apply(cand) == v[a_in_b[ac]];
            MapSearch::new(a, x, &|_| None, &filt, budget).run(&mut |u| {
                us.push(u.to_vec());
                true
            })?;
            for u in &us {
                squares += 1;
                let fixed = |bc: usize| pre[bc].map(|ac| u[ac].clone());
                let filt = |bc: usize, cand: &DegCell| p.apply(cand) == v[bc];
                let mut lifted = false;
                MapSearch::new(b, x, &fixed, &filt, budget).run(&mut |_| {
                    lifted = true;
                    false
                })?;
                if !lifted {
                    failed = true;
                    break 'squares;
                }
            }
        }
        if failed {
            failures.push(name.clone());
        }
    }
    Ok(RlpReport {
        pass: failures.is_empty(),
        failures,
        squares,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cset::{boundary, day_tensor, generating_inclusions, open_box, representable};

    const BUDGET: u64 = 5_000_000;

    #[test]
    fn boundary_and_open_box_inclusions_are_mono() {
        for n in 0..=4 {
            assert!(check_mono(&boundary(n).1, n));
            for k in 0..n {
                for e in 0..2 {
                    assert!(check_mono(&open_box(n, k, e).unwrap().1, n));
                }
            }
        }
    }

    #[test]
    fn fold_is_not_mono() {
        let pt = representable(0);
        let two = pt.coproduct(&pt);
        let fold = CubicalMap::to_point(&two);
        fold.validate().unwrap();
        assert!(!check_mono(&fold, 1));
    }

    #[test]
    fn square_is_product_of_intervals() {
        let sq = day_tensor(&representable(1), &representable(1));
        assert_eq!(sq.counts(), vec![4, 4, 1]);
        let iso = find_isomorphism(&sq, &representable(2), BUDGET).unwrap().unwrap();
        iso.validate().unwrap();
        assert!(find_isomorphism(&sq, &boundary(2).0, BUDGET).unwrap().is_none());
    }

    #[test]
    fn tensor_unit() {
        for a in [representable(2), boundary(2).0] {
            let t = day_tensor(&a, &representable(0));
            assert!(find_isomorphism(&t, &a, BUDGET).unwrap().is_some());
        }
    }

    #[test]
    fn tensor_associative_on_representables() {
        for (p, q, r) in [(1, 1, 1), (2, 1, 1), (1, 2, 1), (0, 2, 2), (1, 1, 2)] {
            let (a, b, c) = (representable(p), representable(q), representable(r));
            let l = day_tensor(&day_tensor(&a, &b), &c);
            let rr = day_tensor(&a, &day_tensor(&b, &c));
            assert_eq!(l.counts(), rr.counts());
            assert!(find_isomorphism(&l, &rr, BUDGET).unwrap().is_some(), "{p}{q}{r}");
        }
    }

    #[test]
    fn rlp_examples() {
        let pt = representable(0);
        let open = generating_inclusions(2, true);
        // constant map from a point and identities
        assert!(check_rlp_brute(&CubicalMap::to_point(&pt), &open, BUDGET).unwrap().pass);
        let sq = representable(2);
        assert!(check_rlp_brute(&CubicalMap::identity(&sq), &open, BUDGET).unwrap().pass);
        // the discrete two-point set over a point is Kan
        let (b1, inc1) = boundary(1);
        assert!(check_rlp_brute(&CubicalMap::to_point(&b1), &open, BUDGET).unwrap().pass);
        // the inclusion of the endpoints has no filler for the missing edge
        let r = check_rlp_brute(&inc1, &open, BUDGET).unwrap();
        assert!(!r.pass);
        assert!(r.failures.iter().any(|f| f.starts_with("open_box(1,")));
        // the hollow square over a point has no filler for its 2-dimensional box
        let (b2, _) = boundary(2);
        let r = check_rlp_brute(&CubicalMap::to_point(&b2), &open, BUDGET).unwrap();
        assert!(!r.pass);
        assert!(r.failures.iter().all(|f| f.starts_with("open_box(2,")));
    }
}
