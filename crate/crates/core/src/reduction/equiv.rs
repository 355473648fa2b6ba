//! Structural equivalence: commutativity and associativity of cut at the
//! root of a process, closed under reflexivity, symmetry and transitivity.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use super::Reducible;
use crate::syntax::binding::{all_names, is_free_in, rename};
use crate::syntax::{alpha_eq, canonical, fresh, Canon};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum EquivRule {
    Comm,
    Assoc,
    Refl,
    Trans,
    Sym,
}

impl EquivRule {
    pub fn name(self) -> &'static str {
        match self {
            EquivRule::Comm => "comm",
            EquivRule::Assoc => "assoc",
            EquivRule::Refl => "refl",
            EquivRule::Trans => "trans",
            EquivRule::Sym => "sym",
        }
    }
}

impl fmt::Display for EquivRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A derivation of `sides.0 ≡ sides.1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EquivDerivation<P> {
    pub rule: EquivRule,
    pub sides: (P, P),
    pub premises: Vec<EquivDerivation<P>>,
}

impl<P: Reducible> EquivDerivation<P> {
    pub fn refl(p: &P) -> Self {
        EquivDerivation {
            rule: EquivRule::Refl,
            sides: (p.clone(), p.clone()),
            premises: vec![],
        }
    }

    /// Chains single rewrites left to right; one rewrite is returned as is.
    fn chain(mut links: Vec<EquivDerivation<P>>) -> Self {
        match links.len() {
            0 => panic!("empty chain"),
            1 => links.pop().unwrap(),
            _ => {
                let first = links[0].sides.0.clone();
                let last = links[links.len() - 1].sides.1.clone();
                EquivDerivation {
                    rule: EquivRule::Trans,
                    sides: (first, last),
                    premises: links,
                }
            }
        }
    }

    /// The number of comm/assoc rewrites used.
    pub fn rewrites(&self) -> usize {
        match self.rule {
            EquivRule::Comm | EquivRule::Assoc => 1,
            EquivRule::Refl => 0,
            EquivRule::Sym | EquivRule::Trans => self.premises.iter().map(|p| p.rewrites()).sum(),
        }
    }

    /// Checks every node against its rule.
    pub fn validate(&self) -> bool {
        let (l, r) = &self.sides;
        let here = match self.rule {
            EquivRule::Refl => self.premises.is_empty() && alpha_eq(l, r),
            EquivRule::Comm => self.premises.is_empty() && comm(l).is_some_and(|c| alpha_eq(&c, r)),
            EquivRule::Assoc => {
                self.premises.is_empty() && assoc(l).is_some_and(|c| alpha_eq(&c, r))
            }
            EquivRule::Sym => {
                self.premises.len() == 1
                    && alpha_eq(&self.premises[0].sides.0, r)
                    && alpha_eq(&self.premises[0].sides.1, l)
            }
            EquivRule::Trans => {
                !self.premises.is_empty()
                    && alpha_eq(&self.premises[0].sides.0, l)
                    && alpha_eq(&self.premises[self.premises.len() - 1].sides.1, r)
                    && self
                        .premises
                        .windows(2)
                        .all(|w| alpha_eq(&w[0].sides.1, &w[1].sides.0))
            }
        };
        here && self.premises.iter().all(|p| p.validate())
    }
}

/// `nu x:A (P | Q) ≡ nu x:A^⊥ (Q | P)`.
pub fn comm<P: Reducible>(p: &P) -> Option<P> {
    let (x, a, l, r) = p.as_cut()?;
    Some(P::cut(x.clone(), a.dual(), r.clone(), l.clone()))
}

/// `nu y:B (nu x:A (P | Q) | R) ≡ nu x:A (P | nu y:B (Q | R))`, provided `P`
/// does not use `y`. The inner binder is renamed if `R` mentions it.
pub fn assoc<P: Reducible>(p: &P) -> Option<P> {
    let (y, b, left, r) = p.as_cut()?;
    let (x, a, pl, q) = left.as_cut()?;
    if x != y && is_free_in(y, pl) {
        return None;
    }
    let (x, pl, q) = if x == y || is_free_in(x, r) {
        let mut used = all_names(p);
        used.insert(y.clone());
        let nx = fresh(&used, x.base());
        (nx.clone(), rename(pl, x, &nx), rename(q, x, &nx))
    } else {
        (x.clone(), pl.clone(), q.clone())
    };
    let inner = P::cut(y.clone(), b.clone(), q, r.clone());
    Some(P::cut(x, a.clone(), pl, inner))
}

/// The reverse of [`assoc`]: `nu x:A (P | nu y:B (Q | R)) ≡ nu y:B (nu x:A (P | Q) | R)`,
/// provided `R` does not use `x`.
pub fn assoc_reverse<P: Reducible>(p: &P) -> Option<P> {
    let (x, a, pl, right) = p.as_cut()?;
    let (y, b, q, r) = right.as_cut()?;
    if x != y && is_free_in(x, r) {
        return None;
    }
    let (y, q, r) = if x == y || is_free_in(y, pl) {
        let mut used = all_names(p);
        used.insert(x.clone());
        let ny = fresh(&used, y.base());
        (ny.clone(), rename(q, y, &ny), rename(r, y, &ny))
    } else {
        (y.clone(), q.clone(), r.clone())
    };
    let inner = P::cut(x.clone(), a.clone(), pl.clone(), q);
    Some(P::cut(y, b.clone(), inner, r))
}

/// Every process reachable from `p` by one root rewrite, with its derivation.
pub fn rewrites<P: Reducible>(p: &P) -> Vec<(P, EquivDerivation<P>)> {
    let mut out = Vec::new();
    let single = |rule, from: &P, to: &P| EquivDerivation {
        rule,
        sides: (from.clone(), to.clone()),
        premises: vec![],
    };
    if let Some(q) = comm(p) {
        out.push((q.clone(), single(EquivRule::Comm, p, &q)));
    }
    if let Some(q) = assoc(p) {
        out.push((q.clone(), single(EquivRule::Assoc, p, &q)));
    }
    if let Some(q) = assoc_reverse(p) {
        let d = EquivDerivation {
            rule: EquivRule::Sym,
            sides: (p.clone(), q.clone()),
            premises: vec![single(EquivRule::Assoc, &q, p)],
        };
        out.push((q, d));
    }
    out
}

/// All processes reachable from `p` by between 1 and `depth` rewrites and
/// not α-equivalent to `p`, each with a shortest derivation.
pub fn equivalents<P: Reducible>(p: &P, depth: usize) -> Vec<(P, EquivDerivation<P>)> {
    let mut seen: HashSet<Canon> = HashSet::from([canonical(p)]);
    let mut out = Vec::new();
    let mut frontier: Vec<(P, Vec<EquivDerivation<P>>)> = vec![(p.clone(), vec![])];
    for _ in 0..depth {
        let mut next = Vec::new();
        for (q, links) in frontier {
            for (r, d) in rewrites(&q) {
                if seen.insert(canonical(&r)) {
                    let mut l = links.clone();
                    l.push(d);
                    out.push((r.clone(), EquivDerivation::chain(l.clone())));
                    next.push((r, l));
                }
            }
        }
        frontier = next;
    }
    out
}

/// Searches for a derivation of `p ≡ q` using at most `depth` rewrites.
pub fn equiv_check<P: Reducible>(p: &P, q: &P, depth: usize) -> Option<EquivDerivation<P>> {
    if alpha_eq(p, q) {
        return Some(EquivDerivation::refl(p));
    }
    let goal = canonical(q);
    let mut seen: HashSet<Canon> = HashSet::from([canonical(p)]);
    let mut queue: VecDeque<(P, Vec<EquivDerivation<P>>)> = VecDeque::from([(p.clone(), vec![])]);
    while let Some((r, links)) = queue.pop_front() {
        if links.len() == depth {
            continue;
        }
        for (s, d) in rewrites(&r) {
            let c = canonical(&s);
            let mut l = links.clone();
            l.push(d);
            if c == goal {
                return Some(EquivDerivation::chain(l));
            }
            if seen.insert(c) {
                queue.push_back((s, l));
            }
        }
    }
    None
}

/// Re-applies the rewrites recorded in `d` to `start`.
pub fn replay_equiv<P: Reducible>(d: &EquivDerivation<P>, start: &P) -> Option<P> {
    if !alpha_eq(&d.sides.0, start) {
        return None;
    }
    match d.rule {
        EquivRule::Refl => Some(start.clone()),
        EquivRule::Comm => comm(start),
        EquivRule::Assoc => assoc(start),
        EquivRule::Sym => match d.premises[0].rule {
            EquivRule::Assoc => assoc_reverse(start),
            EquivRule::Comm => comm(start),
            _ => d.validate().then(|| d.sides.1.clone()),
        },
        EquivRule::Trans => d
            .premises
            .iter()
            .try_fold(start.clone(), |cur, link| replay_equiv(link, &cur)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::CpProcess;
    use crate::textio::parse_cp;

    fn cp(s: &str) -> CpProcess {
        parse_cp(s).unwrap()
    }

    #[test]
    fn comm_flips_the_annotation() {
        let p = cp("nu x:1 (close x | wait x. close z)");
        let q = cp("nu x:bot (wait x. close z | close x)");
        let d = equiv_check(&p, &q, 1).unwrap();
        assert_eq!(d.rule, EquivRule::Comm);
        assert!(d.validate());
    }

    #[test]
    fn assoc_needs_independence() {
        let p = cp("nu y:1 (nu x:1 (close x | wait x. close y) | wait y. close z)");
        let q = cp("nu x:1 (close x | nu y:1 (wait x. close y | wait y. close z))");
        let d = equiv_check(&p, &q, 1).unwrap();
        assert_eq!(d.rule, EquivRule::Assoc);
        let back = equiv_check(&q, &p, 1).unwrap();
        assert_eq!(back.rule, EquivRule::Sym);
        assert!(back.validate());
        // P uses y: no association
        let p = cp("nu y:1 (nu x:1 (wait y. close x | wait x. close z) | close y)");
        assert!(assoc(&p).is_none());
    }

    #[test]
    fn reflexivity_and_depth() {
        let p = cp("nu x:1 (close x | wait x. close z)");
        assert_eq!(equiv_check(&p, &p, 0).unwrap().rule, EquivRule::Refl);
        let q = comm(&p).unwrap();
        assert!(equiv_check(&p, &q, 0).is_none());
    }
}
