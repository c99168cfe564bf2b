// SPDX-License-Identifier: Apache-2.0

//! A second, deliberately different reading of the license grammar.
//!
//! The library parses by recursive descent. This oracle splits a flat token
//! list at the last occurrence of the weakest operator, which gives the same
//! left-associative precedence (`+` > WITH > AND > OR) without sharing code.

use aibom_core::license::{LicenseExpression, LicenseId};

pub const ALPHABET: [&str; 3] = ["MIT", "Apache-2.0", "BSD-3-Clause"];
pub const OPERATORS: [&str; 2] = ["AND", "OR"];

pub fn oracle(text: &str) -> LicenseExpression {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    split(&tokens)
}

fn split(tokens: &[&str]) -> LicenseExpression {
    for op in ["OR", "AND"] {
        if let Some(i) = tokens.iter().rposition(|t| *t == op) {
            let (left, right) = (split(&tokens[..i]), split(&tokens[i + 1..]));
            return match op {
                "OR" => LicenseExpression::Or(Box::new(left), Box::new(right)),
                _ => LicenseExpression::And(Box::new(left), Box::new(right)),
            };
        }
    }
    match tokens {
        [id] if id.starts_with("LicenseRef-") => LicenseExpression::LicenseRef(id.to_string()),
        [id] => LicenseExpression::License(license_id(id)),
        [id, "WITH", exception] => {
            LicenseExpression::With { license: license_id(id), exception: exception.to_string() }
        }
        other => panic!("oracle cannot read {other:?}"),
    }
}

fn license_id(word: &str) -> LicenseId {
    match word.strip_suffix('+') {
        Some(id) => LicenseId { id: id.to_string(), or_later: true },
        None => LicenseId::new(word),
    }
}

/// Every flat sequence of 1..=`max_ids` terms joined by AND/OR.
pub fn flat_sequences(terms: &[&str], max_ids: usize) -> Vec<String> {
    let mut out = Vec::new();
    let mut frontier: Vec<String> = terms.iter().map(|t| t.to_string()).collect();
    for n in 1..=max_ids {
        out.extend(frontier.iter().cloned());
        if n == max_ids {
            break;
        }
        let mut next = Vec::new();
        for prefix in &frontier {
            for op in OPERATORS {
                for t in terms {
                    next.push(format!("{prefix} {op} {t}"));
                }
            }
        }
        frontier = next;
    }
    out
}

/// Every binary tree with 1..=`max_leaves` leaves over the alphabet.
pub fn all_trees(max_leaves: usize) -> Vec<LicenseExpression> {
    let mut by_size: Vec<Vec<LicenseExpression>> = vec![Vec::new()];
    by_size.push(ALPHABET.iter().map(|id| LicenseExpression::License(LicenseId::new(*id))).collect());
    for n in 2..=max_leaves {
        let mut trees = Vec::new();
        for left_size in 1..n {
            for l in &by_size[left_size] {
                for r in &by_size[n - left_size] {
                    trees.push(LicenseExpression::And(Box::new(l.clone()), Box::new(r.clone())));
                    trees.push(LicenseExpression::Or(Box::new(l.clone()), Box::new(r.clone())));
                }
            }
        }
        by_size.push(trees);
    }
    by_size.into_iter().flatten().collect()
}
