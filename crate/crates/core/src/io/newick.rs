use std::collections::HashMap;

use super::ParseError;
use crate::model::{pair_count, EquidistantTree, TaxonSet};

/// Decimal with at most 12 significant digits and no exponent,
/// e.g. `0.5`, `1`, `0.333333333333`.
pub fn format_length(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_finite() {
            "0".into()
        } else {
            x.to_string()
        };
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float");
    rounded.to_string()
}

fn needs_quotes(name: &str) -> bool {
    name.is_empty()
        || name
            .chars()
            .any(|c| c.is_whitespace() || "()[]':;,_".contains(c))
}

fn quote(name: &str) -> String {
    if needs_quotes(name) {
        format!("'{}'", name.replace('\'', "''"))
    } else {
        name.to_string()
    }
}

/// Newick text for `tree`, leaves named by `labels`.
///
/// Children appear in the order of their canonical topology strings, so
/// every ranking of the same tree prints the same apart from lengths.
pub fn emit_newick(tree: &EquidistantTree, labels: &[String]) -> String {
    let mut out = String::new();
    write_node(tree, labels, tree.root(), &mut out);
    out.push(';');
    out
}

fn write_node(tree: &EquidistantTree, labels: &[String], node: usize, out: &mut String) {
    let v = &tree.nodes()[node];
    match v.taxon {
        Some(t) => out.push_str(&quote(&labels[t])),
        None => {
            let mut children: Vec<(String, usize)> = v
                .children
                .iter()
                .map(|&c| (tree.subtree_topology(c, labels), c))
                .collect();
            children.sort();
            out.push('(');
            for (k, &(_, c)) in children.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                write_node(tree, labels, c, out);
            }
            out.push(')');
        }
    }
    if v.parent.is_some() {
        out.push(':');
        out.push_str(&format_length(tree.edge_weight(node)));
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NewickNode {
    pub name: Option<String>,
    pub length: Option<f64>,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
}

/// A parsed Newick tree. Missing branch lengths count as zero.
#[derive(Debug, Clone, PartialEq)]
pub struct NewickTree {
    pub nodes: Vec<NewickNode>,
    pub root: usize,
}

impl NewickTree {
    /// Named leaves in the order they appear.
    pub fn leaves(&self) -> Vec<(&str, usize)> {
        self.nodes
            .iter()
            .enumerate()
            .filter(|(_, v)| v.children.is_empty())
            .filter_map(|(i, v)| v.name.as_deref().map(|n| (n, i)))
            .collect()
    }

    pub fn root_distance(&self, node: usize) -> f64 {
        let mut total = 0.0;
        let mut v = node;
        while let Some(p) = self.nodes[v].parent {
            total += self.nodes[v].length.unwrap_or(0.0);
            v = p;
        }
        total
    }

    fn path(&self, node: usize) -> Vec<usize> {
        let mut path = vec![node];
        let mut v = node;
        while let Some(p) = self.nodes[v].parent {
            path.push(p);
            v = p;
        }
        path
    }

    pub fn distance(&self, a: usize, b: usize) -> f64 {
        let pa = self.path(a);
        let pb = self.path(b);
        let lca = *pa.iter().find(|v| pb.contains(v)).expect("connected tree");
        self.root_distance(a) + self.root_distance(b) - 2.0 * self.root_distance(lca)
    }

    /// Leaf-to-leaf distances in the pair order of `taxa`.
    pub fn distances_for(&self, taxa: &TaxonSet) -> Result<Vec<f64>, ParseError> {
        let by_name: HashMap<&str, usize> = self.leaves().into_iter().collect();
        let index: Vec<usize> = taxa
            .labels()
            .iter()
            .map(|l| {
                by_name
                    .get(l.as_str())
                    .copied()
                    .ok_or_else(|| ParseError::Newick {
                        position: 0,
                        message: format!("no leaf named `{l}`"),
                    })
            })
            .collect::<Result<_, _>>()?;
        let n = taxa.len();
        let mut out = Vec::with_capacity(pair_count(n));
        for i in 0..n {
            for j in i + 1..n {
                out.push(self.distance(index[i], index[j]));
            }
        }
        Ok(out)
    }
}

struct Parser<'a> {
    text: &'a [u8],
    pos: usize,
    nodes: Vec<NewickNode>,
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::Newick {
            position: self.pos,
            message: message.into(),
        }
    }

    fn skip(&mut self) {
        loop {
            match self.text.get(self.pos) {
                Some(c) if c.is_ascii_whitespace() => self.pos += 1,
                Some(b'[') => {
                    while self.pos < self.text.len() && self.text[self.pos] != b']' {
                        self.pos += 1;
                    }
                    self.pos += 1;
                }
                _ => return,
            }
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip();
        self.text.get(self.pos).copied()
    }

    fn node(&mut self, parent: Option<usize>) -> Result<usize, ParseError> {
        let id = self.nodes.len();
        self.nodes.push(NewickNode {
            name: None,
            length: None,
            parent,
            children: Vec::new(),
        });
        if self.peek() == Some(b'(') {
            self.pos += 1;
            loop {
                let child = self.node(Some(id))?;
                self.nodes[id].children.push(child);
                match self.peek() {
                    Some(b',') => self.pos += 1,
                    Some(b')') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return Err(self.error("expected `,` or `)`")),
                }
            }
        }
        self.nodes[id].name = self.label()?;
        if self.peek() == Some(b':') {
            self.pos += 1;
            self.skip();
            let start = self.pos;
            while self
                .text
                .get(self.pos)
                .is_some_and(|c| c.is_ascii_digit() || b"+-.eE".contains(c))
            {
                self.pos += 1;
            }
            let token = std::str::from_utf8(&self.text[start..self.pos]).expect("ascii");
            let length: f64 = token
                .parse()
                .map_err(|_| self.error(format!("bad branch length `{token}`")))?;
            self.nodes[id].length = Some(length);
        }
        Ok(id)
    }

    fn label(&mut self) -> Result<Option<String>, ParseError> {
        match self.peek() {
            Some(b'\'') => {
                self.pos += 1;
                let mut name = Vec::new();
                loop {
                    match self.text.get(self.pos) {
                        None => return Err(self.error("unterminated quoted label")),
                        Some(b'\'') if self.text.get(self.pos + 1) == Some(&b'\'') => {
                            name.push(b'\'');
                            self.pos += 2;
                        }
                        Some(b'\'') => {
                            self.pos += 1;
                            break;
                        }
                        Some(&c) => {
                            name.push(c);
                            self.pos += 1;
                        }
                    }
                }
                Ok(Some(
                    String::from_utf8(name).map_err(|_| self.error("invalid utf-8"))?,
                ))
            }
            _ => {
                let start = self.pos;
                while self
                    .text
                    .get(self.pos)
                    .is_some_and(|&c| !c.is_ascii_whitespace() && !b"()[]':;,".contains(&c))
                {
                    self.pos += 1;
                }
                if self.pos == start {
                    return Ok(None);
                }
                let raw = std::str::from_utf8(&self.text[start..self.pos])
                    .map_err(|_| self.error("invalid utf-8"))?;
                Ok(Some(raw.replace('_', " ")))
            }
        }
    }
}

/// Parses one Newick tree terminated by `;`.
pub fn parse_newick(text: &str) -> Result<NewickTree, ParseError> {
    let mut p = Parser {
        text: text.as_bytes(),
        pos: 0,
        nodes: Vec::new(),
    };
    if p.peek().is_none() {
        return Err(ParseError::Empty);
    }
    let root = p.node(None)?;
    if p.peek() != Some(b';') {
        return Err(p.error("expected `;`"));
    }
    p.pos += 1;
    if p.peek().is_some() {
        return Err(p.error("trailing text after `;`"));
    }
    Ok(NewickTree {
        nodes: p.nodes,
        root,
    })
}
