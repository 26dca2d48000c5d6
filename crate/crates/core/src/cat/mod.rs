//! Finite categories, nerves, Grothendieck constructions and homotopy
//! colimits of finite diagrams.

mod groth;
mod hocolim;
mod json;
mod nerve;
mod random;

use std::collections::HashMap;

use crate::error::{Error, Result};

pub use groth::{
    box_category, category_of_elements, elements_diagram, elements_functor, elements_of_diagram, grothendieck,
    grothendieck_t, twisted_arrows, ElementObject, Elements, GrothObject, Grothendieck,
};
pub use hocolim::{hocolim_cset, hocolim_sset, nerve_diagram, CSetDiagram, HocolimKey, SSetDiagram};
pub use json::{category_from_json, category_to_json};
pub use nerve::{nerve, nerve_map, NerveKey};
pub use random::{random_cat_diagram, random_category};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Morphism {
    pub name: String,
    pub src: usize,
    pub dst: usize,
}

/// A finite category with a dense composition table per middle object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteCategory {
    objects: Vec<String>,
    mors: Vec<Morphism>,
    ids: Vec<usize>,
    /// `ins[b]`, `outs[b]`: morphisms into and out of `b`.
    ins: Vec<Vec<usize>>,
    outs: Vec<Vec<usize>>,
    /// position of `f` in `ins[dst f]` and in `outs[src f]`
    pos_in: Vec<usize>,
    pos_out: Vec<usize>,
    /// `table[b][pos_in[f] * outs[b].len() + pos_out[g]] = g ∘ f`
    table: Vec<Vec<usize>>,
}

impl FiniteCategory {
    /// Builds and validates; `compose(g, f)` is only called on composable
    /// pairs and must return `g ∘ f`.
    pub fn new(
        objects: Vec<String>,
        mors: Vec<Morphism>,
        ids: Vec<usize>,
        compose: impl FnMut(usize, usize) -> usize,
    ) -> Result<Self> {
        let c = Self::new_unchecked(objects, mors, ids, compose)?;
        c.validate()?;
        Ok(c)
    }

    /// Builds without checking associativity and unitality.
    pub fn new_unchecked(
        objects: Vec<String>,
        mors: Vec<Morphism>,
        ids: Vec<usize>,
        mut compose: impl FnMut(usize, usize) -> usize,
    ) -> Result<Self> {
        let n = objects.len();
        if ids.len() != n {
            return Err(Error::InvalidCategory("one identity per object".into()));
        }
        let mut ins = vec![Vec::new(); n];
        let mut outs = vec![Vec::new(); n];
        let mut pos_in = vec![0; mors.len()];
        let mut pos_out = vec![0; mors.len()];
        for (i, m) in mors.iter().enumerate() {
            if m.src >= n || m.dst >= n {
                return Err(Error::InvalidCategory(format!("morphism `{}` has unknown ends", m.name)));
            }
            pos_in[i] = ins[m.dst].len();
            ins[m.dst].push(i);
            pos_out[i] = outs[m.src].len();
            outs[m.src].push(i);
        }
        for (a, &i) in ids.iter().enumerate() {
            if i >= mors.len() || mors[i].src != a || mors[i].dst != a {
                return Err(Error::InvalidCategory(format!("identity of `{}` is not an endomorphism", objects[a])));
            }
        }
        let mut table = Vec::with_capacity(n);
        for b in 0..n {
            let mut t = Vec::with_capacity(ins[b].len() * outs[b].len());
            for &f in &ins[b] {
                for &g in &outs[b] {
                    let h = compose(g, f);
                    if h >= mors.len() || mors[h].src != mors[f].src || mors[h].dst != mors[g].dst {
                        return Err(Error::InvalidCategory(format!(
                            "`{}` ∘ `{}` has the wrong ends",
                            mors[g].name, mors[f].name
                        )));
                    }
                    t.push(h);
                }
            }
            table.push(t);
        }
        Ok(Self {
            objects,
            mors,
            ids,
            ins,
            outs,
            pos_in,
            pos_out,
            table,
        })
    }

    /// Exhaustive unit and associativity check.
    pub fn validate(&self) -> Result<()> {
        for f in 0..self.mors.len() {
            let (a, b) = (self.mors[f].src, self.mors[f].dst);
            if self.compose(self.ids[b], f) != f || self.compose(f, self.ids[a]) != f {
                return Err(Error::InvalidCategory(format!("identity law fails on `{}`", self.mors[f].name)));
            }
        }
        for f in 0..self.mors.len() {
            for &g in &self.outs[self.mors[f].dst] {
                let gf = self.compose(g, f);
                for &h in &self.outs[self.mors[g].dst] {
                    if self.compose(h, gf) != self.compose(self.compose(h, g), f) {
                        return Err(Error::InvalidCategory(format!(
                            "associativity fails on `{}`, `{}`, `{}`",
                            self.mors[h].name, self.mors[g].name, self.mors[f].name
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.mors
    }

    pub fn num_morphisms(&self) -> usize {
        self.mors.len()
    }

    pub fn src(&self, f: usize) -> usize {
        self.mors[f].src
    }

    pub fn dst(&self, f: usize) -> usize {
        self.mors[f].dst
    }

    pub fn id(&self, a: usize) -> usize {
        self.ids[a]
    }

    pub fn is_identity(&self, f: usize) -> bool {
        self.ids[self.mors[f].src] == f
    }

    pub fn ins(&self, b: usize) -> &[usize] {
        &self.ins[b]
    }

    pub fn outs(&self, a: usize) -> &[usize] {
        &self.outs[a]
    }

    pub fn hom(&self, a: usize, b: usize) -> Vec<usize> {
        self.outs[a].iter().copied().filter(|&f| self.mors[f].dst == b).collect()
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    /// `g ∘ f`; panics unless `dst f == src g`.
    pub fn compose(&self, g: usize, f: usize) -> usize {
        let b = self.mors[f].dst;
        assert_eq!(self.mors[g].src, b, "composing non-composable morphisms");
        self.table[b][self.pos_in[f] * self.outs[b].len() + self.pos_out[g]]
    }

    pub fn terminal() -> Self {
        Self::poset(&["*".to_string()], |_, _| true)
    }

    /// The ordinal `[n] = {0 < 1 < ... < n}`.
    pub fn ordinal(n: usize) -> Self {
        let names: Vec<String> = (0..=n).map(|i| i.to_string()).collect();
        Self::poset(&names, |a, b| a <= b)
    }

    pub fn discrete(names: &[String]) -> Self {
        Self::poset(names, |a, b| a == b)
    }

    /// A preorder given by a reflexive transitive relation.
    pub fn poset(names: &[String], le: impl Fn(usize, usize) -> bool) -> Self {
        let n = names.len();
        let mut mors = Vec::new();
        let mut index = HashMap::new();
        for a in 0..n {
            for b in 0..n {
                if le(a, b) {
                    index.insert((a, b), mors.len());
                    mors.push(Morphism {
                        name: if a == b {
                            format!("id:{}", names[a])
                        } else {
                            format!("{}<{}", names[a], names[b])
                        },
                        src: a,
                        dst: b,
                    });
                }
            }
        }
        let ids = (0..n).map(|a| index[&(a, a)]).collect();
        Self::new_unchecked(names.to_vec(), mors.clone(), ids, |g, f| index[&(mors[f].src, mors[g].dst)])
            .expect("poset tables are well formed")
    }

    /// Two objects and an isomorphism between them.
    pub fn walking_iso() -> Self {
        let names = ["a".to_string(), "b".to_string()];
        Self::poset(&names, |_, _| true)
    }

    /// The one-object category of the cyclic group of order `n`.
    pub fn cyclic_group(n: usize) -> Self {
        let mors = (0..n)
            .map(|k| Morphism {
                name: if k == 0 { "id:*".into() } else { format!("g{k}") },
                src: 0,
                dst: 0,
            })
            .collect();
        Self::new_unchecked(vec!["*".into()], mors, vec![0], |g, f| (g + f) % n).expect("group table")
    }

    /// `• <- • -> •`.
    pub fn span() -> Self {
        let names = ["l", "m", "r"].map(String::from);
        Self::poset(&names, |a, b| a == b || (a == 1 && b != 1))
    }

    /// `• -> • <- •`.
    pub fn cospan() -> Self {
        let names = ["l", "m", "r"].map(String::from);
        Self::poset(&names, |a, b| a == b || (b == 1 && a != 1))
    }

    pub fn opposite(&self) -> Self {
        let mors = self
            .mors
            .iter()
            .map(|m| Morphism {
                name: m.name.clone(),
                src: m.dst,
                dst: m.src,
            })
            .collect();
        Self::new_unchecked(self.objects.clone(), mors, self.ids.clone(), |g, f| self.compose(f, g))
            .expect("opposite of a valid category")
    }

    pub fn product(&self, other: &Self) -> Self {
        let no = other.objects.len();
        let nm = other.mors.len();
        let objects = self
            .objects
            .iter()
            .flat_map(|a| other.objects.iter().map(move |b| format!("({a},{b})")))
            .collect();
        let mors = self
            .mors
            .iter()
            .flat_map(|f| {
                other.mors.iter().map(move |g| Morphism {
                    name: format!("({},{})", f.name, g.name),
                    src: f.src * no + g.src,
                    dst: f.dst * no + g.dst,
                })
            })
            .collect();
        let ids = (0..self.objects.len())
            .flat_map(|a| (0..no).map(move |b| (a, b)))
            .map(|(a, b)| self.ids[a] * nm + other.ids[b])
            .collect();
        Self::new_unchecked(objects, mors, ids, |g, f| {
            self.compose(g / nm, f / nm) * nm + other.compose(g % nm, f % nm)
        })
        .expect("product of valid categories")
    }

    /// Whether some object is terminal.
    pub fn has_terminal(&self) -> bool {
        (0..self.objects.len()).any(|t| (0..self.objects.len()).all(|a| self.hom(a, t).len() == 1))
    }
}

/// A functor between finite categories.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Functor {
    pub obj: Vec<usize>,
    pub mor: Vec<usize>,
}

impl Functor {
    pub fn identity(c: &FiniteCategory) -> Self {
        Self {
            obj: (0..c.num_objects()).collect(),
            mor: (0..c.num_morphisms()).collect(),
        }
    }

    pub fn validate(&self, src: &FiniteCategory, dst: &FiniteCategory) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidFunctor(m));
        if self.obj.len() != src.num_objects() || self.mor.len() != src.num_morphisms() {
            return bad("functor tables do not match the source".into());
        }
        if self.obj.iter().any(|&o| o >= dst.num_objects()) || self.mor.iter().any(|&m| m >= dst.num_morphisms()) {
            return bad("functor lands outside the target".into());
        }
        for (f, m) in src.mors.iter().enumerate() {
            let im = &dst.mors[self.mor[f]];
            if im.src != self.obj[m.src] || im.dst != self.obj[m.dst] {
                return bad(format!("image of `{}` has the wrong ends", m.name));
            }
        }
        for (a, &i) in src.ids.iter().enumerate() {
            if self.mor[i] != dst.ids[self.obj[a]] {
                return bad(format!("identity of `{}` not preserved", src.objects[a]));
            }
        }
        for f in 0..src.num_morphisms() {
            for &g in src.outs(src.dst(f)) {
                if self.mor[src.compose(g, f)] != dst.compose(self.mor[g], self.mor[f]) {
                    return bad(format!(
                        "composite `{}` ∘ `{}` not preserved",
                        src.mors[g].name, src.mors[f].name
                    ));
                }
            }
        }
        Ok(())
    }

    /// `self ∘ other`.
    pub fn after(&self, other: &Functor) -> Functor {
        Functor {
            obj: other.obj.iter().map(|&o| self.obj[o]).collect(),
            mor: other.mor.iter().map(|&m| self.mor[m]).collect(),
        }
    }

    /// The same tables, read as a functor between opposite categories.
    pub fn opposite(&self) -> Functor {
        self.clone()
    }
}

/// All functors `src -> dst`, only injective ones if asked, within `budget`
/// search nodes.
pub fn enumerate_functors(
    src: &FiniteCategory,
    dst: &FiniteCategory,
    injective: bool,
    budget: u64,
) -> Result<Vec<Functor>> {
    let mut out = Vec::new();
    let mut nodes = 0u64;
    let mut obj = vec![usize::MAX; src.num_objects()];
    search_objects(src, dst, injective, 0, &mut obj, &mut nodes, budget, &mut |f| {
        out.push(f);
        true
    })?;
    Ok(out)
}

/// An isomorphism of finite categories, if any.
pub fn find_category_iso(a: &FiniteCategory, b: &FiniteCategory, budget: u64) -> Result<Option<Functor>> {
    if a.num_objects() != b.num_objects() || a.num_morphisms() != b.num_morphisms() {
        return Ok(None);
    }
    let mut found = None;
    let mut nodes = 0u64;
    let mut obj = vec![usize::MAX; a.num_objects()];
    search_objects(a, b, true, 0, &mut obj, &mut nodes, budget, &mut |f| {
        found = Some(f);
        false
    })?;
    Ok(found)
}

type Visit<'a> = dyn FnMut(Functor) -> bool + 'a;

#[allow(clippy::too_many_arguments)]
fn search_objects(
    src: &FiniteCategory,
    dst: &FiniteCategory,
    injective: bool,
    pos: usize,
    obj: &mut Vec<usize>,
    nodes: &mut u64,
    budget: u64,
    visit: &mut Visit<'_>,
) -> Result<bool> {
    *nodes += 1;
    if *nodes > budget {
        return Err(Error::BudgetExceeded(budget));
    }
    if pos == obj.len() {
        let mut mor = vec![usize::MAX; src.num_morphisms()];
        for (a, &i) in src.ids.iter().enumerate() {
            mor[i] = dst.ids[obj[a]];
        }
        let order: Vec<usize> = (0..src.num_morphisms()).filter(|&f| !src.is_identity(f)).collect();
        let mut used = vec![false; dst.num_morphisms()];
        if injective {
            for &i in &src.ids {
                used[mor[i]] = true;
            }
        }
        return search_morphisms(src, dst, injective, &order, 0, obj, &mut mor, &mut used, nodes, budget, visit);
    }
    for o in 0..dst.num_objects() {
        if injective && obj[..pos].contains(&o) {
            continue;
        }
        // hom-set sizes must match for an isomorphism; for plain functors the
        // target hom-sets only need to be nonempty
        let ok = (0..pos).chain(std::iter::once(pos)).all(|a| {
            let oa = if a == pos { o } else { obj[a] };
            let sa = src.hom(a, pos).len();
            let sb = src.hom(pos, a).len();
            let ta = dst.hom(oa, o).len();
            let tb = dst.hom(o, oa).len();
            if injective && src.num_objects() == dst.num_objects() && src.num_morphisms() == dst.num_morphisms() {
                sa == ta && sb == tb
            } else {
                (sa == 0 || ta > 0) && (sb == 0 || tb > 0)
            }
        });
        if !ok {
            continue;
        }
        obj[pos] = o;
        let cont = search_objects(src, dst, injective, pos + 1, obj, nodes, budget, visit)?;
        obj[pos] = usize::MAX;
        if !cont {
            return Ok(false);
        }
    }
    Ok(true)
}

#[allow(clippy::too_many_arguments)]
fn search_morphisms(
    src: &FiniteCategory,
    dst: &FiniteCategory,
    injective: bool,
    order: &[usize],
    pos: usize,
    obj: &[usize],
    mor: &mut Vec<usize>,
    used: &mut Vec<bool>,
    nodes: &mut u64,
    budget: u64,
    visit: &mut Visit<'_>,
) -> Result<bool> {
    *nodes += 1;
    if *nodes > budget {
        return Err(Error::BudgetExceeded(budget));
    }
    if pos == order.len() {
        return Ok(visit(Functor {
            obj: obj.to_vec(),
            mor: mor.clone(),
        }));
    }
    let f = order[pos];
    let (a, b) = (src.src(f), src.dst(f));
    for h in dst.hom(obj[a], obj[b]) {
        if injective && used[h] {
            continue;
        }
        mor[f] = h;
        if composites_ok(src, dst, mor, f) {
            used[h] = true;
            let cont = search_morphisms(src, dst, injective, order, pos + 1, obj, mor, used, nodes, budget, visit)?;
            used[h] = false;
            if !cont {
                mor[f] = usize::MAX;
                return Ok(false);
            }
        }
        mor[f] = usize::MAX;
    }
    Ok(true)
}

/// Every composite involving `f` whose three morphisms are assigned agrees.
fn composites_ok(src: &FiniteCategory, dst: &FiniteCategory, mor: &[usize], f: usize) -> bool {
    let set = |x: usize| mor[x] != usize::MAX;
    let check = |g: usize, h: usize| {
        let gh = src.compose(g, h);
        !(set(g) && set(h) && set(gh)) || mor[gh] == dst.compose(mor[g], mor[h])
    };
    src.outs(src.dst(f)).iter().all(|&g| check(g, f))
        && src.ins(src.src(f)).iter().all(|&h| check(f, h))
        && (0..src.num_morphisms()).all(|h| {
            // f as a composite
            let b = src.dst(h);
            src.outs(b).iter().all(|&g| src.compose(g, h) != f || check(g, h))
        })
}

/// A diagram `J -> Cat`.
#[derive(Debug, Clone)]
pub struct CatDiagram {
    pub shape: FiniteCategory,
    pub values: Vec<FiniteCategory>,
    /// One functor per morphism of the shape.
    pub maps: Vec<Functor>,
}

impl CatDiagram {
    pub fn new(shape: FiniteCategory, values: Vec<FiniteCategory>, maps: Vec<Functor>) -> Result<Self> {
        let d = Self { shape, values, maps };
        d.validate()?;
        Ok(d)
    }

    pub fn constant(shape: FiniteCategory, value: FiniteCategory) -> Self {
        let id = Functor::identity(&value);
        Self {
            values: vec![value; shape.num_objects()],
            maps: vec![id; shape.num_morphisms()],
            shape,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let j = &self.shape;
        if self.values.len() != j.num_objects() || self.maps.len() != j.num_morphisms() {
            return Err(Error::InvalidFunctor("diagram tables do not match the shape".into()));
        }
        for v in &self.values {
            v.validate()?;
        }
        for f in 0..j.num_morphisms() {
            self.maps[f].validate(&self.values[j.src(f)], &self.values[j.dst(f)])?;
        }
        for a in 0..j.num_objects() {
            if self.maps[j.id(a)] != Functor::identity(&self.values[a]) {
                return Err(Error::InvalidFunctor(format!("identity of `{}` not sent to identity", j.objects()[a])));
            }
        }
        for f in 0..j.num_morphisms() {
            for &g in j.outs(j.dst(f)) {
                if self.maps[j.compose(g, f)] != self.maps[g].after(&self.maps[f]) {
                    return Err(Error::InvalidFunctor("diagram not functorial".into()));
                }
            }
        }
        Ok(())
    }

    /// `x ↦ F(x)^op`.
    pub fn opposite_values(&self) -> Self {
        Self {
            shape: self.shape.clone(),
            values: self.values.iter().map(FiniteCategory::opposite).collect(),
            maps: self.maps.iter().map(Functor::opposite).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_categories_validate() {
        for c in [
            FiniteCategory::terminal(),
            FiniteCategory::ordinal(3),
            FiniteCategory::walking_iso(),
            FiniteCategory::cyclic_group(3),
            FiniteCategory::span(),
            FiniteCategory::cospan(),
            FiniteCategory::ordinal(1).product(&FiniteCategory::cyclic_group(2)),
        ] {
            c.validate().unwrap();
            c.opposite().validate().unwrap();
        }
        assert_eq!(FiniteCategory::ordinal(2).num_morphisms(), 6);
    }

    #[test]
    fn rejects_non_associative() {
        // a one-object "category" with a non-associative table
        let mors = (0..3)
            .map(|k| Morphism {
                name: format!("m{k}"),
                src: 0,
                dst: 0,
            })
            .collect();
        let table = [[0, 1, 2], [1, 2, 2], [2, 1, 2]];
        let c = FiniteCategory::new(vec!["*".into()], mors, vec![0], |g, f| table[g][f]);
        assert!(matches!(c, Err(Error::InvalidCategory(_))));
    }

    #[test]
    fn functor_counts() {
        // functors [1] -> [1] are monotone maps: 3
        let c = FiniteCategory::ordinal(1);
        assert_eq!(enumerate_functors(&c, &c, false, 10_000).unwrap().len(), 3);
        // endofunctors of Z/3 are group endomorphisms: 3
        let g = FiniteCategory::cyclic_group(3);
        assert_eq!(enumerate_functors(&g, &g, false, 10_000).unwrap().len(), 3);
        for f in enumerate_functors(&g, &g, false, 10_000).unwrap() {
            f.validate(&g, &g).unwrap();
        }
    }

    #[test]
    fn iso_search() {
        let a = FiniteCategory::ordinal(1).product(&FiniteCategory::ordinal(1));
        let b = FiniteCategory::ordinal(1).product(&FiniteCategory::ordinal(1)).opposite();
        assert!(find_category_iso(&a, &b, 100_000).unwrap().is_some());
        assert!(find_category_iso(&FiniteCategory::span(), &FiniteCategory::cospan(), 100_000)
            .unwrap()
            .is_none());
        assert!(find_category_iso(&FiniteCategory::span(), &FiniteCategory::cospan().opposite(), 100_000)
            .unwrap()
            .is_some());
    }
}
