//! Bipartite instances for the online matching simulations.
//!
//! Text format: a header `n_offline n_online b`, then exactly `n_online`
//! lines, one per arrival in order, listing 1-based offline neighbor indices
//! separated by whitespace. An empty line is an arrival with no neighbors.

use std::io::{BufRead, Write};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimInstance {
    n_offline: usize,
    capacity: u32,
    /// Neighbor sets, 0-based.
    arrivals: Vec<Vec<usize>>,
}

impl SimInstance {
    /// `arrivals` hold 0-based offline indices; each set must be free of
    /// duplicates.
    pub fn new(n_offline: usize, capacity: u32, arrivals: Vec<Vec<usize>>) -> Result<Self> {
        if capacity == 0 {
            return Err(Error::invalid("capacity b must be at least 1"));
        }
        for (t, nbrs) in arrivals.iter().enumerate() {
            let mut seen = vec![false; n_offline];
            for &u in nbrs {
                if u >= n_offline {
                    return Err(Error::invalid(format!(
                        "arrival {t} names offline vertex {} but there are only {n_offline}",
                        u + 1
                    )));
                }
                if std::mem::replace(&mut seen[u], true) {
                    return Err(Error::invalid(format!("arrival {t} lists offline vertex {} twice", u + 1)));
                }
            }
        }
        Ok(Self { n_offline, capacity, arrivals })
    }

    pub fn n_offline(&self) -> usize {
        self.n_offline
    }

    pub fn n_online(&self) -> usize {
        self.arrivals.len()
    }

    pub fn capacity(&self) -> u32 {
        self.capacity
    }

    pub fn arrivals(&self) -> &[Vec<usize>] {
        &self.arrivals
    }

    /// Query `t` (for `t = 0..n`) is adjacent to offline vertices `t..n`,
    /// repeated `b` times in a row.
    pub fn triangular(n: usize, b: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("triangular instance needs n >= 1"));
        }
        let arrivals = (0..n)
            .flat_map(|t| std::iter::repeat_n((t..n).collect::<Vec<_>>(), b as usize))
            .collect();
        Self::new(n, b, arrivals)
    }

    /// `b` copies of a query adjacent to every offline vertex, per vertex.
    pub fn complete(n: usize, b: u32) -> Result<Self> {
        let all: Vec<usize> = (0..n).collect();
        Self::new(n, b, vec![all; n * b as usize])
    }

    /// A random instance that contains a perfect b-matching, so its offline
    /// optimum exhausts every budget. Each query is adjacent to its planted
    /// partner and up to `extra_degree` other offline vertices, and queries
    /// arrive in random order.
    pub fn planted(n: usize, b: u32, extra_degree: usize, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("planted instance needs n >= 1"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut arrivals = Vec::with_capacity(n * b as usize);
        for partner in 0..n {
            for _ in 0..b {
                let mut nbrs = vec![partner];
                let extra = rng.gen_range(0..=extra_degree.min(n - 1));
                while nbrs.len() < extra + 1 {
                    let u = rng.gen_range(0..n);
                    if !nbrs.contains(&u) {
                        nbrs.push(u);
                    }
                }
                nbrs.sort_unstable();
                arrivals.push(nbrs);
            }
        }
        arrivals.shuffle(&mut rng);
        Self::new(n, b, arrivals)
    }

    pub fn write<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{} {} {}", self.n_offline, self.arrivals.len(), self.capacity)?;
        for nbrs in &self.arrivals {
            let line: Vec<String> = nbrs.iter().map(|u| (u + 1).to_string()).collect();
            writeln!(out, "{}", line.join(" "))?;
        }
        Ok(())
    }

    pub fn read<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines();
        let header = lines.next().ok_or(Error::Parse { line: 1, msg: "empty instance file".into() })??;
        let fields: Vec<usize> = parse_numbers(&header, 1)?;
        let [n_offline, n_online, b] = fields[..] else {
            return Err(Error::Parse { line: 1, msg: "header must be `n_offline n_online b`".into() });
        };
        let capacity = u32::try_from(b).map_err(|_| Error::Parse { line: 1, msg: "capacity too large".into() })?;
        let mut arrivals = Vec::with_capacity(n_online);
        for k in 0..n_online {
            let line_no = k + 2;
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse { line: line_no, msg: format!("expected {n_online} arrival lines") })??;
            let nbrs = parse_numbers(&line, line_no)?;
            if nbrs.iter().any(|&u| u == 0 || u > n_offline) {
                return Err(Error::Parse { line: line_no, msg: format!("neighbor index outside 1..={n_offline}") });
            }
            arrivals.push(nbrs.into_iter().map(|u| u - 1).collect());
        }
        for (k, rest) in lines.enumerate() {
            if !rest?.trim().is_empty() {
                return Err(Error::Parse { line: n_online + 2 + k, msg: "unexpected content after arrivals".into() });
            }
        }
        Self::new(n_offline, capacity, arrivals)
    }
}

fn parse_numbers(line: &str, line_no: usize) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|tok| tok.parse().map_err(|_| Error::Parse { line: line_no, msg: format!("`{tok}` is not a non-negative integer") }))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let inst = SimInstance::new(3, 2, vec![vec![0, 2], vec![], vec![1]]).unwrap();
        let mut buf = Vec::new();
        inst.write(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "3 3 2\n1 3\n\n2\n");
        assert_eq!(SimInstance::read(buf.as_slice()).unwrap(), inst);
    }

    #[test]
    fn parse_errors() {
        let cases = ["", "3 1\n1\n", "2 1 1\n3\n", "2 1 1\n0\n", "2 2 1\n1\n", "2 1 1\n1\n2\n", "2 1 1\nx\n", "2 1 1\n1 1\n"];
        for c in cases {
            assert!(SimInstance::read(c.as_bytes()).is_err(), "{c:?}");
        }
        assert!(SimInstance::read("2 1 1\n1\n\n".as_bytes()).is_ok());
    }

    #[test]
    fn generators() {
        let tri = SimInstance::triangular(3, 2).unwrap();
        assert_eq!(tri.n_online(), 6);
        assert_eq!(tri.arrivals()[0], vec![0, 1, 2]);
        assert_eq!(tri.arrivals()[5], vec![2]);
        let p = SimInstance::planted(10, 3, 2, 7).unwrap();
        assert_eq!(p.n_online(), 30);
        assert_eq!(p, SimInstance::planted(10, 3, 2, 7).unwrap());
        assert!(p.arrivals().iter().all(|a| (1..=3).contains(&a.len())));
        assert!(SimInstance::new(2, 0, vec![]).is_err());
    }
}
