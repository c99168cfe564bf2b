// SPDX-License-Identifier: Apache-2.0

//! Brute-force answers for small containment graphs.

use aibom_core::model::{
    new_document, Agent, AgentKind, CreationInfo, Document, ElementId, Package, Relationship, RelationshipType,
    Timestamp,
};

pub const NAMES: [&str; 6] = ["A", "B", "C", "D", "E", "F"];

pub fn id(s: &str) -> ElementId {
    ElementId::new(s).unwrap()
}

/// Packages `A..` plus a creator agent, joined by `contains` edges.
pub fn document(nodes: usize, edges: &[(usize, usize)]) -> Document {
    let info =
        CreationInfo::new(Timestamp::parse("2024-01-01T00:00:00Z").unwrap(), vec![id("z-agent")], "3.0.0").unwrap();
    let mut doc = new_document(info);
    doc.add_element(Agent::new(id("z-agent"), "agent", AgentKind::Person)).unwrap();
    for name in &NAMES[..nodes] {
        doc.add_element(Package::new(id(name))).unwrap();
    }
    for (from, to) in edges {
        doc.add_relationship(Relationship::new(id(NAMES[*from]), RelationshipType::Contains, vec![id(NAMES[*to])]));
    }
    doc
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, first) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, *first);
            out.push(tail);
        }
    }
    out
}

/// The least topological order among all permutations, or `None` if there is none.
pub fn least_order(nodes: usize, edges: &[(usize, usize)]) -> Option<Vec<usize>> {
    let all: Vec<usize> = (0..nodes).collect();
    permutations(&all)
        .into_iter()
        .filter(|p| {
            edges.iter().all(|(a, b)| {
                let pa = p.iter().position(|x| x == a).unwrap();
                let pb = p.iter().position(|x| x == b).unwrap();
                pa < pb
            })
        })
        .min()
}

/// Every simple cycle written from its least node, shortest first, then lexicographic.
pub fn least_cycle(nodes: usize, edges: &[(usize, usize)]) -> Option<Vec<usize>> {
    let has = |a: usize, b: usize| edges.contains(&(a, b));
    let mut best: Option<Vec<usize>> = None;
    let all: Vec<usize> = (0..nodes).collect();
    for mask in 1u32..(1 << nodes) {
        let subset: Vec<usize> = all.iter().copied().filter(|i| mask & (1 << i) != 0).collect();
        for p in permutations(&subset) {
            if p[0] != *subset.iter().min().unwrap() {
                continue;
            }
            let closed = (0..p.len()).all(|i| has(p[i], p[(i + 1) % p.len()]));
            if closed && best.as_ref().is_none_or(|b| (p.len(), &p) < (b.len(), b)) {
                best = Some(p);
            }
        }
    }
    best
}
