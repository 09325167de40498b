//! String distance baselines: Levenshtein, Damerau-Levenshtein (restricted
//! variant), Needleman–Wunsch under a cost matrix, Hamming, and uniformly
//! weighted edit distance.
//!
//! These are provided for comparison and study; the retrieval path does
//! not use them. All distances operate on Unicode scalar values.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

fn chars(s: &str) -> Vec<char> {
    s.chars().collect()
}

/// Minimum number of single-character insertions, deletions and
/// substitutions transforming `s` into `t`.
pub fn levenshtein(s: &str, t: &str) -> usize {
    let (s, t) = (chars(s), chars(t));
    if s.is_empty() {
        return t.len();
    }
    if t.is_empty() {
        return s.len();
    }
    let mut prev: Vec<usize> = (0..=t.len()).collect();
    let mut cur = vec![0usize; t.len() + 1];
    for (i, &cs) in s.iter().enumerate() {
        cur[0] = i + 1;
        for (j, &ct) in t.iter().enumerate() {
            let sub = prev[j] + usize::from(cs != ct);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[t.len()]
}

/// Levenshtein extended with adjacent transposition as a single edit.
///
/// This is the restricted (optimal string alignment) variant: a
/// transposed pair cannot be edited again, so `damerau_levenshtein("ca",
/// "abc")` is 3 where the unrestricted distance would be 2.
pub fn damerau_levenshtein(s: &str, t: &str) -> usize {
    let (s, t) = (chars(s), chars(t));
    if s.is_empty() {
        return t.len();
    }
    if t.is_empty() {
        return s.len();
    }
    let width = t.len() + 1;
    let mut rows: Vec<Vec<usize>> = vec![(0..width).collect()];
    for (i, &cs) in s.iter().enumerate() {
        let mut row = vec![0usize; width];
        row[0] = i + 1;
        for (j, &ct) in t.iter().enumerate() {
            let sub = rows[i][j] + usize::from(cs != ct);
            let mut best = sub.min(rows[i][j + 1] + 1).min(row[j] + 1);
            if i >= 1 && j >= 1 && cs == t[j - 1] && s[i - 1] == ct {
                best = best.min(rows[i - 1][j - 1] + 1);
            }
            row[j + 1] = best;
        }
        rows.push(row);
    }
    rows[s.len()][t.len()]
}

/// Per-character insertion/deletion costs and per-pair substitution costs.
/// Substituting a character for itself always costs 0.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CostMatrix {
    insert: BTreeMap<char, f64>,
    delete: BTreeMap<char, f64>,
    substitute: BTreeMap<(char, char), f64>,
}

impl CostMatrix {
    pub fn new() -> Self {
        CostMatrix::default()
    }

    /// Unit costs over an alphabet: inserts, deletes, and off-diagonal
    /// substitutions all cost 1.
    pub fn unit<I: IntoIterator<Item = char>>(alphabet: I) -> Self {
        let letters: Vec<char> = alphabet.into_iter().collect();
        let mut m = CostMatrix::new();
        for &c in &letters {
            m.insert.insert(c, 1.0);
            m.delete.insert(c, 1.0);
            for &d in &letters {
                if c != d {
                    m.substitute.insert((c, d), 1.0);
                }
            }
        }
        m
    }

    pub fn set_insert(&mut self, c: char, cost: f64) -> Result<()> {
        Self::check(cost)?;
        self.insert.insert(c, cost);
        Ok(())
    }

    pub fn set_delete(&mut self, c: char, cost: f64) -> Result<()> {
        Self::check(cost)?;
        self.delete.insert(c, cost);
        Ok(())
    }

    pub fn set_substitute(&mut self, from: char, to: char, cost: f64) -> Result<()> {
        Self::check(cost)?;
        if from == to && cost != 0.0 {
            return Err(Error::domain(format!(
                "substituting `{from}` for itself must cost 0"
            )));
        }
        self.substitute.insert((from, to), cost);
        Ok(())
    }

    fn check(cost: f64) -> Result<()> {
        if cost.is_nan() || cost < 0.0 {
            return Err(Error::domain(format!(
                "costs must be non-negative, got {cost}"
            )));
        }
        Ok(())
    }

    pub fn insert_cost(&self, c: char) -> Result<f64> {
        self.insert
            .get(&c)
            .copied()
            .ok_or_else(|| Error::domain(format!("no insertion cost defined for `{c}`")))
    }

    pub fn delete_cost(&self, c: char) -> Result<f64> {
        self.delete
            .get(&c)
            .copied()
            .ok_or_else(|| Error::domain(format!("no deletion cost defined for `{c}`")))
    }

    pub fn substitute_cost(&self, from: char, to: char) -> Result<f64> {
        if from == to {
            return Ok(0.0);
        }
        self.substitute.get(&(from, to)).copied().ok_or_else(|| {
            Error::domain(format!(
                "no substitution cost defined for `{from}` -> `{to}`"
            ))
        })
    }

    /// Parse the cost matrix file format: `op<TAB>chars<TAB>cost` lines
    /// with op in {ins, del, sub}; sub takes a two-character from/to pair.
    pub fn parse(text: &str) -> Result<Self> {
        let mut m = CostMatrix::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            };
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
            if fields.len() != 3 {
                return Err(Error::parse_at(
                    idx + 1,
                    "expected `op<TAB>chars<TAB>cost`".to_string(),
                ));
            }
            let cost: f64 = fields[2].parse().map_err(|_| {
                Error::parse_at(idx + 1, format!("`{}` is not a number", fields[2]))
            })?;
            let cs: Vec<char> = fields[1].chars().collect();
            let op = fields[0];
            let result = match (op, cs.as_slice()) {
                ("ins", [c]) => m.set_insert(*c, cost),
                ("del", [c]) => m.set_delete(*c, cost),
                ("sub", [a, b]) => m.set_substitute(*a, *b, cost),
                ("ins" | "del", _) => Err(Error::domain("expects exactly one character")),
                ("sub", _) => Err(Error::domain("expects exactly two characters")),
                _ => Err(Error::domain(format!("unknown op `{op}`"))),
            };
            result.map_err(|e| Error::parse_at(idx + 1, e.to_string()))?;
        }
        Ok(m)
    }
}

/// Minimal total alignment cost under per-character costs.
pub fn needleman_wunsch(s: &str, t: &str, costs: &CostMatrix) -> Result<f64> {
    let (s, t) = (chars(s), chars(t));
    let width = t.len() + 1;
    let mut prev = vec![0.0f64; width];
    for j in 0..t.len() {
        prev[j + 1] = prev[j] + costs.insert_cost(t[j])?;
    }
    let mut cur = vec![0.0f64; width];
    for &cs in &s {
        cur[0] = prev[0] + costs.delete_cost(cs)?;
        for (j, &ct) in t.iter().enumerate() {
            let sub = prev[j] + costs.substitute_cost(cs, ct)?;
            let del = prev[j + 1] + costs.delete_cost(cs)?;
            let ins = cur[j] + costs.insert_cost(ct)?;
            cur[j + 1] = sub.min(del).min(ins);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    Ok(prev[width - 1])
}

/// Number of positions at which two equal-length strings differ.
pub fn hamming(s: &str, t: &str) -> Result<usize> {
    let (s, t) = (chars(s), chars(t));
    if s.len() != t.len() {
        return Err(Error::domain(format!(
            "hamming distance is defined for same-length inputs (got lengths {} and {})",
            s.len(),
            t.len()
        )));
    }
    Ok(s.iter().zip(&t).filter(|(a, b)| a != b).count())
}

/// Uniform per-operation weights for the weighted edit distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EditWeights {
    insert: f64,
    delete: f64,
    substitute: f64,
}

impl EditWeights {
    pub fn new(insert: f64, delete: f64, substitute: f64) -> Result<Self> {
        for (name, w) in [
            ("insert", insert),
            ("delete", delete),
            ("substitute", substitute),
        ] {
            if w.is_nan() || w < 0.0 {
                return Err(Error::domain(format!(
                    "{name} weight must be non-negative, got {w}"
                )));
            }
        }
        Ok(EditWeights {
            insert,
            delete,
            substitute,
        })
    }

    pub fn unit() -> Self {
        EditWeights {
            insert: 1.0,
            delete: 1.0,
            substitute: 1.0,
        }
    }

    pub fn insert(&self) -> f64 {
        self.insert
    }
    pub fn delete(&self) -> f64 {
        self.delete
    }
    pub fn substitute(&self) -> f64 {
        self.substitute
    }
}

impl Default for EditWeights {
    fn default() -> Self {
        EditWeights::unit()
    }
}

/// Minimal total weight of an edit script under uniform per-operation
/// weights.
pub fn weighted_edit(s: &str, t: &str, w: &EditWeights) -> f64 {
    let (s, t) = (chars(s), chars(t));
    let width = t.len() + 1;
    let mut prev: Vec<f64> = (0..width).map(|j| j as f64 * w.insert).collect();
    let mut cur = vec![0.0f64; width];
    for (i, &cs) in s.iter().enumerate() {
        cur[0] = (i + 1) as f64 * w.delete;
        for (j, &ct) in t.iter().enumerate() {
            let sub = prev[j] + if cs == ct { 0.0 } else { w.substitute };
            cur[j + 1] = sub.min(prev[j + 1] + w.delete).min(cur[j] + w.insert);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[width - 1]
}
