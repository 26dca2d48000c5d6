//! The box category: objects `[n] = {0<1}^n`, morphisms generated by cofaces
//! and codegeneracies.
//!
//! A morphism `[m] -> [n]` is stored in normal form as its list of `n` output
//! coordinates, each either a constant or one of the input coordinates. Input
//! coordinates are used at most once and in increasing order, which is exactly
//! the image of the generators (no symmetries, diagonals or connections).

use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};

/// One output coordinate of a cube morphism. `Var(j)` is 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Entry {
    Const(u8),
    Var(usize),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CubeMor {
    src: usize,
    entries: Vec<Entry>,
}

impl fmt::Debug for CubeMor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]->[{}](", self.src, self.dst())?;
        for e in &self.entries {
            match e {
                Entry::Const(c) => write!(f, "{c}")?,
                Entry::Var(j) => write!(f, "x{j}")?,
            }
        }
        write!(f, ")")
    }
}

/// A generator of the box category, used for word input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    /// `delta_k^i : [n] -> [n+1]`
    Coface { n: usize, k: usize, i: u8 },
    /// `sigma_k : [n+1] -> [n]`
    Codegeneracy { n: usize, k: usize },
}

impl CubeMor {
    /// Build from raw entries, checking the normal-form invariants.
    pub fn new(src: usize, entries: Vec<Entry>) -> Result<Self> {
        let mut last = 0;
        for e in &entries {
            match *e {
                Entry::Const(c) if c > 1 => {
                    return Err(Error::OutOfRange(format!("constant {c} not in {{0,1}}")))
                }
                Entry::Var(j) if j == 0 || j > src => {
                    return Err(Error::OutOfRange(format!("variable {j} not in 1..={src}")))
                }
                Entry::Var(j) if j <= last => {
                    return Err(Error::Precondition(format!(
                        "variable {j} repeated or out of order"
                    )))
                }
                Entry::Var(j) => last = j,
                Entry::Const(_) => {}
            }
        }
        Ok(Self { src, entries })
    }

    pub(crate) fn from_parts_unchecked(src: usize, entries: Vec<Entry>) -> Self {
        Self { src, entries }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            src: n,
            entries: (1..=n).map(Entry::Var).collect(),
        }
    }

    pub fn coface(n: usize, k: usize, i: u8) -> Result<Self> {
        if k > n {
            return Err(Error::OutOfRange(format!("coface position {k} > {n}")));
        }
        if i > 1 {
            return Err(Error::OutOfRange(format!("coface end {i}")));
        }
        let mut entries: Vec<Entry> = (1..=k).map(Entry::Var).collect();
        entries.push(Entry::Const(i));
        entries.extend((k + 1..=n).map(Entry::Var));
        Ok(Self { src: n, entries })
    }

    pub fn codegeneracy(n: usize, k: usize) -> Result<Self> {
        if k > n {
            return Err(Error::OutOfRange(format!("codegeneracy position {k} > {n}")));
        }
        let entries = (1..=n)
            .map(|j| if j <= k { Entry::Var(j) } else { Entry::Var(j + 1) })
            .collect();
        Ok(Self { src: n + 1, entries })
    }

    #[inline]
    pub fn src(&self) -> usize {
        self.src
    }

    #[inline]
    pub fn dst(&self) -> usize {
        self.entries.len()
    }

    #[inline]
    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn is_identity(&self) -> bool {
        self.src == self.dst() && self.entries.iter().enumerate().all(|(i, e)| *e == Entry::Var(i + 1))
    }

    /// Uses every input coordinate.
    pub fn is_mono(&self) -> bool {
        self.used_vars().len() == self.src
    }

    /// No constant coordinates: a projection that drops unused coordinates.
    pub fn is_epi(&self) -> bool {
        self.entries.iter().all(|e| matches!(e, Entry::Var(_)))
    }

    pub fn used_vars(&self) -> Vec<usize> {
        self.entries
            .iter()
            .filter_map(|e| match e {
                Entry::Var(j) => Some(*j),
                Entry::Const(_) => None,
            })
            .collect()
    }

    /// `self ∘ f`, defined when `f.dst() == self.src()`.
    pub fn compose(&self, f: &CubeMor) -> Result<CubeMor> {
        if f.dst() != self.src {
            return Err(Error::DimensionMismatch(format!(
                "compose {:?} after {:?}",
                self, f
            )));
        }
        Ok(self.after(f))
    }

    /// Unchecked composition `self ∘ f`.
    pub fn after(&self, f: &CubeMor) -> CubeMor {
        debug_assert_eq!(f.dst(), self.src);
        let entries = self
            .entries
            .iter()
            .map(|e| match *e {
                Entry::Const(c) => Entry::Const(c),
                Entry::Var(j) => f.entries[j - 1],
            })
            .collect();
        CubeMor { src: f.src, entries }
    }

    /// Monoidal product: coordinates of `self` followed by those of `g`.
    pub fn tensor(&self, g: &CubeMor) -> CubeMor {
        let mut entries = self.entries.clone();
        entries.extend(g.entries.iter().map(|e| match *e {
            Entry::Var(j) => Entry::Var(j + self.src),
            c => c,
        }));
        CubeMor {
            src: self.src + g.src,
            entries,
        }
    }

    /// Evaluate on a vertex of `{0,1}^src`.
    pub fn eval(&self, v: &[u8]) -> Vec<u8> {
        assert_eq!(v.len(), self.src);
        self.entries
            .iter()
            .map(|e| match *e {
                Entry::Const(c) => c,
                Entry::Var(j) => v[j - 1],
            })
            .collect()
    }

    /// Unique factorization `self = mono ∘ epi` with `epi` dropping exactly the
    /// unused coordinates.
    pub fn ez_factor(&self) -> (CubeMor, CubeMor) {
        let used = self.used_vars();
        let k = used.len();
        let epi = CubeMor {
            src: self.src,
            entries: used.iter().map(|&u| Entry::Var(u)).collect(),
        };
        let mut r = 0;
        let mono_entries = self
            .entries
            .iter()
            .map(|e| match *e {
                Entry::Var(_) => {
                    r += 1;
                    Entry::Var(r)
                }
                c => c,
            })
            .collect();
        (epi, CubeMor { src: k, entries: mono_entries })
    }

    /// For a morphism with a constant coordinate, split off the first one:
    /// `self = coface(n-1, p, i) ∘ rest`.
    pub fn split_first_constant(&self) -> Option<(usize, u8, CubeMor)> {
        let p = self.entries.iter().position(|e| matches!(e, Entry::Const(_)))?;
        let Entry::Const(i) = self.entries[p] else { unreachable!() };
        let mut entries = self.entries.clone();
        entries.remove(p);
        Some((p, i, CubeMor { src: self.src, entries }))
    }

    /// For a morphism with an unused input coordinate, split off the largest
    /// one: `self = rest ∘ codegeneracy(src-1, q)`.
    pub fn split_last_unused(&self) -> Option<(usize, CubeMor)> {
        let used = self.used_vars();
        let q = (1..=self.src).rev().find(|j| !used.contains(j))?;
        let entries = self
            .entries
            .iter()
            .map(|e| match *e {
                Entry::Var(j) if j > q => Entry::Var(j - 1),
                c => c,
            })
            .collect();
        Some((q - 1, CubeMor { src: self.src - 1, entries }))
    }

    /// Normalize a composable generator word `g_1 ∘ g_2 ∘ ... ∘ g_k`
    /// (rightmost applied first) into normal form.
    pub fn from_word(word: &[Generator]) -> Result<CubeMor> {
        let mut acc: Option<CubeMor> = None;
        for g in word.iter().rev() {
            let m = match *g {
                Generator::Coface { n, k, i } => CubeMor::coface(n, k, i)?,
                Generator::Codegeneracy { n, k } => CubeMor::codegeneracy(n, k)?,
            };
            acc = Some(match acc {
                None => m,
                Some(a) => m.compose(&a)?,
            });
        }
        acc.ok_or_else(|| Error::Precondition("empty generator word".into()))
    }

    /// Serialized form: array of `"0"`, `"1"` or `{"var": j}` with 0-based `j`.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.entries
                .iter()
                .map(|e| match *e {
                    Entry::Const(c) => json!(c.to_string()),
                    Entry::Var(j) => json!({ "var": j - 1 }),
                })
                .collect(),
        )
    }

    /// Parse the serialized form; the source dimension is supplied by context.
    pub fn from_json(src: usize, v: &Value) -> Result<CubeMor> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::schema("", "cube morphism must be an array"))?;
        let mut entries = Vec::with_capacity(arr.len());
        for (i, e) in arr.iter().enumerate() {
            let entry = match e {
                Value::String(s) if s == "0" => Entry::Const(0),
                Value::String(s) if s == "1" => Entry::Const(1),
                Value::Object(o) => {
                    let j = o
                        .get("var")
                        .and_then(Value::as_u64)
                        .ok_or_else(|| Error::schema(format!("[{i}]"), "expected {\"var\": j}"))?;
                    Entry::Var(j as usize + 1)
                }
                _ => return Err(Error::schema(format!("[{i}]"), "expected \"0\", \"1\" or {\"var\": j}")),
            };
            entries.push(entry);
        }
        CubeMor::new(src, entries).map_err(|e| Error::schema("", e.to_string()))
    }
}

/// All morphisms `[m] -> [n]`, in a fixed deterministic order.
pub fn enumerate_hom(m: usize, n: usize) -> Vec<CubeMor> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(m: usize, n: usize, next_var: usize, cur: &mut Vec<Entry>, out: &mut Vec<CubeMor>) {
        if cur.len() == n {
            out.push(CubeMor { src: m, entries: cur.clone() });
            return;
        }
        for c in 0..2u8 {
            cur.push(Entry::Const(c));
            rec(m, n, next_var, cur, out);
            cur.pop();
        }
        for j in next_var..=m {
            cur.push(Entry::Var(j));
            rec(m, n, j + 1, cur, out);
            cur.pop();
        }
    }
    rec(m, n, 1, &mut cur, &mut out);
    out
}

/// Monomorphisms `[m] -> [n]`.
pub fn enumerate_monos(m: usize, n: usize) -> Vec<CubeMor> {
    enumerate_hom(m, n).into_iter().filter(CubeMor::is_mono).collect()
}

/// Epimorphisms `[m] -> [n]` (choices of `n` kept coordinates).
pub fn enumerate_epis(m: usize, n: usize) -> Vec<CubeMor> {
    enumerate_hom(m, n).into_iter().filter(CubeMor::is_epi).collect()
}

/// `sum_k C(n,k) C(m,k) 2^(n-k)`.
pub fn hom_count(m: usize, n: usize) -> u64 {
    (0..=m.min(n))
        .map(|k| binom(n, k) * binom(m, k) * (1u64 << (n - k)))
        .sum()
}

pub fn binom(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let mut r = 1u64;
    for i in 0..k {
        r = r * (n - i) as u64 / (i + 1) as u64;
    }
    r
}
