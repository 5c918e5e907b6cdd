//! Plain-text instance formats. Tokens are whitespace separated, ids are
//! 1-indexed in files and `#` starts a comment running to end of line.
//!
//! ```text
//! set system:        m_e m_s            then m_s lines   cost k e_1 … e_k
//! graph:             n m                then m lines     u v
//! weighted coverage: m_items m_sets     then m_items lines value,
//!                                       then m_sets lines cost k i_1 … i_k
//! ```

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::zoo::coverage::{SetSystemInstance, WeightedCoverageInstance};
use crate::zoo::graph::GraphInstance;

struct Tokens<'a> {
    items: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Tokens<'a> {
    fn new(text: &'a str) -> Self {
        let items = text
            .lines()
            .enumerate()
            .flat_map(|(i, line)| {
                let body = line.split('#').next().unwrap_or("");
                body.split_whitespace().map(move |t| (i + 1, t))
            })
            .collect();
        Tokens { items, pos: 0 }
    }

    fn line(&self) -> usize {
        self.items
            .get(self.pos)
            .or_else(|| self.items.last())
            .map_or(1, |(l, _)| *l)
    }

    fn next<T: FromStr>(&mut self, what: &str) -> Result<T> {
        let Some(&(line, tok)) = self.items.get(self.pos) else {
            return Err(Error::Parse {
                line: self.line(),
                msg: format!("unexpected end of input, expected {what}"),
            });
        };
        self.pos += 1;
        tok.parse().map_err(|_| Error::Parse {
            line,
            msg: format!("expected {what}, found {tok:?}"),
        })
    }

    /// A 1-indexed id in `1..=max`, returned 0-indexed.
    fn id(&mut self, what: &str, max: usize) -> Result<usize> {
        let line = self.line();
        let v: usize = self.next(what)?;
        if v == 0 || v > max {
            return Err(Error::Parse {
                line,
                msg: format!("{what} {v} out of range 1..={max}"),
            });
        }
        Ok(v - 1)
    }

    fn positive(&mut self, what: &str) -> Result<f64> {
        let line = self.line();
        let v: f64 = self.next(what)?;
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::Parse {
                line,
                msg: format!("{what} must be positive, found {v}"),
            });
        }
        Ok(v)
    }

    fn finish(&self) -> Result<()> {
        match self.items.get(self.pos) {
            Some((line, tok)) => Err(Error::Parse {
                line: *line,
                msg: format!("trailing token {tok:?}"),
            }),
            None => Ok(()),
        }
    }
}

fn parse_sets(t: &mut Tokens, count: usize, ids: usize, what: &str) -> Result<Vec<(f64, Vec<usize>)>> {
    (0..count)
        .map(|_| {
            let cost = t.positive("cost")?;
            let k: usize = t.next("member count")?;
            let members = (0..k).map(|_| t.id(what, ids)).collect::<Result<Vec<_>>>()?;
            Ok((cost, members))
        })
        .collect()
}

pub fn parse_set_system(text: &str, name: &str) -> Result<SetSystemInstance> {
    let mut t = Tokens::new(text);
    let universe: usize = t.next("element count")?;
    let count: usize = t.next("set count")?;
    let sets = parse_sets(&mut t, count, universe, "element id")?;
    t.finish()?;
    let inst = SetSystemInstance::new(name, universe, sets);
    inst.validate()?;
    Ok(inst)
}

pub fn parse_graph(text: &str, name: &str) -> Result<GraphInstance> {
    let mut t = Tokens::new(text);
    let n: usize = t.next("vertex count")?;
    let m: usize = t.next("edge count")?;
    let edges = (0..m)
        .map(|_| Ok((t.id("vertex", n)?, t.id("vertex", n)?)))
        .collect::<Result<Vec<_>>>()?;
    t.finish()?;
    GraphInstance::new(name, n, edges)
}

pub fn parse_weighted_coverage(text: &str, name: &str) -> Result<WeightedCoverageInstance> {
    let mut t = Tokens::new(text);
    let items: usize = t.next("item count")?;
    let count: usize = t.next("set count")?;
    let item_values = (0..items).map(|_| t.positive("item value")).collect::<Result<Vec<_>>>()?;
    let sets = parse_sets(&mut t, count, items, "item id")?;
    t.finish()?;
    let inst = WeightedCoverageInstance {
        name: name.to_string(),
        item_values,
        sets,
    };
    inst.validate()?;
    Ok(inst)
}

fn write_sets(out: &mut String, sets: &[(f64, Vec<usize>)]) {
    for (cost, members) in sets {
        write!(out, "{cost} {}", members.len()).unwrap();
        for e in members {
            write!(out, " {}", e + 1).unwrap();
        }
        out.push('\n');
    }
}

pub fn write_set_system(inst: &SetSystemInstance) -> String {
    let mut out = format!("# {}\n{} {}\n", inst.name, inst.universe, inst.sets.len());
    write_sets(&mut out, &inst.sets);
    out
}

pub fn write_graph(g: &GraphInstance) -> String {
    let mut out = format!("# {}\n{} {}\n", g.name, g.n(), g.edges().len());
    for (u, v) in g.edges() {
        writeln!(out, "{} {}", u + 1, v + 1).unwrap();
    }
    out
}

pub fn write_weighted_coverage(inst: &WeightedCoverageInstance) -> String {
    let mut out = format!("# {}\n{} {}\n", inst.name, inst.item_values.len(), inst.sets.len());
    for v in &inst.item_values {
        writeln!(out, "{v}").unwrap();
    }
    write_sets(&mut out, &inst.sets);
    out
}
