use std::collections::{BTreeMap, BTreeSet};

use tokenspace::rep::{
    graph, ords, rep_map, rep_structured, ring, top_reverse, RingTables, StructuredObject, Topology,
};
use tokenspace::{mk_map, Symbol, SymbolMap, TokenClass};

use crate::common::{ensure, functions};

/// A finite structure with binary relations given on element indices.
struct Item {
    elems: Vec<Symbol>,
    obj: StructuredObject,
    rep: TokenClass,
    pairs: BTreeSet<(usize, usize)>,
}

fn elems(prefix: &str, n: usize) -> Vec<Symbol> {
    (0..n)
        .map(|i| Symbol::atom(format!("{prefix}{i}")))
        .collect()
}

fn item(
    elems: Vec<Symbol>,
    pairs: BTreeSet<(usize, usize)>,
    build: fn(BTreeSet<Symbol>, Vec<(Symbol, Symbol)>) -> StructuredObject,
) -> Item {
    let sym_pairs = pairs
        .iter()
        .map(|&(x, y)| (elems[x].clone(), elems[y].clone()))
        .collect();
    let obj = build(elems.iter().cloned().collect(), sym_pairs);
    let rep = rep_structured(&obj).expect("valid structure");
    Item {
        elems,
        obj,
        rep,
        pairs,
    }
}

fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).collect()
}

fn relations(pool: &[(usize, usize)]) -> impl Iterator<Item = BTreeSet<(usize, usize)>> + '_ {
    (0u32..(1 << pool.len())).map(move |m| {
        pool.iter()
            .enumerate()
            .filter(|(i, _)| m & (1 << i) != 0)
            .map(|(_, p)| *p)
            .collect()
    })
}

fn posets() -> Vec<Item> {
    let mut out = Vec::new();
    for n in 0..=3 {
        let off: Vec<(usize, usize)> = all_pairs(n).into_iter().filter(|(x, y)| x != y).collect();
        for rel in relations(&off) {
            let mut ge = rel.clone();
            ge.extend((0..n).map(|x| (x, x)));
            let antisym = rel.iter().all(|&(x, y)| !rel.contains(&(y, x)));
            let trans = ge.iter().all(|&(x, y)| {
                ge.iter()
                    .filter(|&&(y2, _)| y2 == y)
                    .all(|&(_, z)| ge.contains(&(x, z)))
            });
            if antisym && trans {
                out.push(item(elems("p", n), ge, ords));
            }
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    functions(n, n)
        .into_iter()
        .filter(|f| f.iter().collect::<BTreeSet<_>>().len() == n)
        .collect()
}

/// Directed graphs with loops on at most three vertices, one per isomorphism class.
fn graphs() -> Vec<Item> {
    let mut out = Vec::new();
    for n in 0..=3 {
        let perms = permutations(n);
        let mut seen = BTreeSet::new();
        for rel in relations(&all_pairs(n)) {
            let canon = perms
                .iter()
                .map(|p| {
                    rel.iter()
                        .map(|&(x, y)| (p[x], p[y]))
                        .collect::<BTreeSet<_>>()
                })
                .min()
                .expect("identity permutation");
            if seen.insert(canon) {
                out.push(item(elems("v", n), rel, graph));
            }
        }
    }
    out
}

fn preserves(f: &[usize], a: &Item, b: &Item) -> bool {
    a.pairs
        .iter()
        .all(|&(x, y)| b.pairs.contains(&(f[x], f[y])))
}

fn symbol_map(f: &[usize], dom: &[Symbol], cod: &[Symbol]) -> SymbolMap {
    f.iter()
        .enumerate()
        .map(|(i, &j)| (dom[i].clone(), cod[j].clone()))
        .collect()
}

/// Compares the brute-force preserving maps with the maps accepted by
/// `rep_map` and by plain heap containment between the Rep classes.
fn compare(items: &[Item], what: &str) -> Result<usize, String> {
    let mut preserving = 0;
    for a in items {
        for b in items {
            for f in functions(a.elems.len(), b.elems.len()) {
                let m = symbol_map(&f, &a.elems, &b.elems);
                let oracle = preserves(&f, a, b);
                let via_rep = rep_map(&m, &a.obj, &b.obj).is_ok();
                let via_heap = mk_map(&a.rep, &b.rep, m.clone()).is_ok();
                ensure(oracle == via_rep && oracle == via_heap, || {
                    format!("{what}: {m:?} oracle={oracle} rep_map={via_rep} heap={via_heap}")
                })?;
                preserving += oracle as usize;
            }
        }
    }
    Ok(preserving)
}

fn ring_homs() -> Result<usize, String> {
    let rings = [RingTables::zn(2), RingTables::zn(4), RingTables::z2xz2()];
    let mut homs = 0;
    for r in &rings {
        for s in &rings {
            let (ro, so) = (
                ring(r).map_err(|e| e.to_string())?,
                ring(s).map_err(|e| e.to_string())?,
            );
            let (rr, sr) = (
                rep_structured(&ro).map_err(|e| e.to_string())?,
                rep_structured(&so).map_err(|e| e.to_string())?,
            );
            for f in functions(r.carrier.len(), s.carrier.len()) {
                let m = symbol_map(&f, &r.carrier, &s.carrier);
                let oracle = m[&r.zero] == s.zero
                    && r.carrier.iter().all(|x| m[&r.neg[x]] == s.neg[&m[x]])
                    && r.carrier.iter().all(|x| {
                        r.carrier.iter().all(|y| {
                            let (k, l) = ((x.clone(), y.clone()), (m[x].clone(), m[y].clone()));
                            m[&r.add[&k]] == s.add[&l] && m[&r.mul[&k]] == s.mul[&l]
                        })
                    });
                let via_rep = rep_map(&m, &ro, &so).is_ok();
                let via_heap = mk_map(&rr, &sr, m.clone()).is_ok();
                ensure(oracle == via_rep && oracle == via_heap, || {
                    format!("ring: {m:?} oracle={oracle} rep_map={via_rep} heap={via_heap}")
                })?;
                homs += oracle as usize;
            }
        }
    }
    Ok(homs)
}

fn topologies() -> Vec<(Vec<Symbol>, Topology)> {
    let mut out = Vec::new();
    for n in 0..=3 {
        let pts = elems("x", n);
        let subsets: Vec<BTreeSet<Symbol>> = (0u32..(1 << n))
            .map(|m| {
                pts.iter()
                    .enumerate()
                    .filter(|(i, _)| m & (1 << i) != 0)
                    .map(|(_, p)| p.clone())
                    .collect()
            })
            .collect();
        for family in 0u32..(1 << subsets.len()) {
            let opens: BTreeSet<BTreeSet<Symbol>> = subsets
                .iter()
                .enumerate()
                .filter(|(i, _)| family & (1 << i) != 0)
                .map(|(_, s)| s.clone())
                .collect();
            let all: BTreeSet<Symbol> = pts.iter().cloned().collect();
            let closed = opens.iter().all(|u| {
                opens.iter().all(|v| {
                    opens.contains(&u.union(v).cloned().collect())
                        && opens.contains(&u.intersection(v).cloned().collect())
                })
            });
            if opens.contains(&BTreeSet::new()) && opens.contains(&all) && closed {
                out.push((pts.clone(), Topology { points: all, opens }));
            }
        }
    }
    out
}

fn continuity() -> Result<(usize, usize), String> {
    let tops = topologies();
    let mut continuous = 0;
    for (xp, x) in &tops {
        for (yp, y) in &tops {
            let mut reversed: BTreeMap<SymbolMap, SymbolMap> = BTreeMap::new();
            for f in functions(xp.len(), yp.len()) {
                let m = symbol_map(&f, xp, yp);
                let oracle = y.opens.iter().all(|v| {
                    let pre: BTreeSet<Symbol> = m
                        .iter()
                        .filter(|(_, q)| v.contains(*q))
                        .map(|(p, _)| p.clone())
                        .collect();
                    x.opens.contains(&pre)
                });
                let op = top_reverse(&m, x, y);
                ensure(oracle == op.is_ok(), || {
                    format!(
                        "topology: {m:?} continuous={oracle} top_reverse={}",
                        op.is_ok()
                    )
                })?;
                if let Ok(op) = op {
                    continuous += 1;
                    ensure(
                        reversed.insert(op.f0().clone(), m.clone()).is_none(),
                        || format!("fᵒᵖ not injective at {m:?}"),
                    )?;
                }
            }
        }
    }
    Ok((tops.len(), continuous))
}

pub fn run() -> Result<String, String> {
    let ps = posets();
    let gs = graphs();
    ensure(ps.len() == 24, || {
        format!("{} posets on at most 3 points", ps.len())
    })?;
    ensure(gs.len() == 117, || {
        format!("{} graphs up to isomorphism", gs.len())
    })?;
    let monotone = compare(&ps, "poset")?;
    let homs = compare(&gs, "graph")?;
    let rings = ring_homs()?;
    let (tops, continuous) = continuity()?;
    Ok(format!(
        "{monotone} monotone maps over {} posets; {homs} homs over {} graphs; {rings} ring homs; {continuous} continuous maps over {tops} topologies",
        ps.len(),
        gs.len()
    ))
}
