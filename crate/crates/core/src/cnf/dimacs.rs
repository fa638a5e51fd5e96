//! DIMACS CNF: `c` comment lines, a `p cnf N M` header, then clauses as
//! whitespace-separated signed integers terminated by `0`. A clause may
//! span several lines.

use std::io::{BufRead, Write};

use super::{Clause, Instance, Literal};
use crate::error::{Error, Result};

pub fn parse<R: BufRead>(reader: R) -> Result<Instance> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    let mut last_line = 0;

    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        last_line = lineno;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') || trimmed.starts_with('%') {
            continue;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(Error::Parse { line: lineno, msg: "duplicate header".into() });
            }
            let f: Vec<&str> = trimmed.split_whitespace().collect();
            if f.len() != 4 || f[1] != "cnf" {
                return Err(Error::Parse { line: lineno, msg: format!("bad header `{trimmed}`") });
            }
            let n = f[2].parse().map_err(|_| Error::Parse { line: lineno, msg: "bad variable count".into() })?;
            let m = f[3].parse().map_err(|_| Error::Parse { line: lineno, msg: "bad clause count".into() })?;
            header = Some((n, m));
            continue;
        }
        let (n_vars, _) = header.ok_or(Error::Parse { line: lineno, msg: "clause before header".into() })?;
        for tok in trimmed.split_whitespace() {
            let x: i64 = tok.parse().map_err(|_| Error::Parse { line: lineno, msg: format!("bad literal `{tok}`") })?;
            if x == 0 {
                let lits = std::mem::take(&mut current);
                if lits.is_empty() {
                    return Err(Error::Parse { line: lineno, msg: "empty clause".into() });
                }
                let clause = Clause::new(lits).map_err(|e| Error::Parse { line: lineno, msg: e.to_string() })?;
                clauses.push(clause);
            } else {
                let var = x.unsigned_abs() as usize;
                if var > n_vars {
                    return Err(Error::Parse { line: lineno, msg: format!("variable {var} exceeds declared {n_vars}") });
                }
                current.push(Literal { var: (var - 1) as u32, negated: x < 0 });
            }
        }
    }

    let (n_vars, n_clauses) = header.ok_or(Error::Parse { line: last_line, msg: "missing header".into() })?;
    if !current.is_empty() {
        return Err(Error::Parse { line: last_line, msg: "unterminated clause".into() });
    }
    if clauses.len() != n_clauses {
        return Err(Error::Parse { line: last_line, msg: format!("header declares {n_clauses} clauses, found {}", clauses.len()) });
    }
    Instance::new(n_vars, clauses)
}

pub fn parse_str(s: &str) -> Result<Instance> {
    parse(s.as_bytes())
}

pub fn write<W: Write>(instance: &Instance, mut w: W) -> Result<()> {
    writeln!(w, "p cnf {} {}", instance.n_vars(), instance.n_clauses())?;
    for c in instance.clauses() {
        for l in c.literals() {
            write!(w, "{} ", l.to_dimacs())?;
        }
        writeln!(w, "0")?;
    }
    Ok(())
}

pub fn to_string(instance: &Instance) -> String {
    let mut buf = Vec::new();
    write(instance, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("DIMACS output is ASCII")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::{examples, generate_random_instance};

    #[test]
    fn parses_multiline_clauses_and_comments() {
        let src = "c example\np cnf 3 2\n1 -2\n 3 0 -1 0\n";
        let inst = parse_str(src).unwrap();
        assert_eq!(inst.n_vars(), 3);
        assert_eq!(inst.clauses()[0].literals(), &[Literal::pos(0), Literal::neg(1), Literal::pos(2)]);
        assert_eq!(inst.clauses()[1].literals(), &[Literal::neg(0)]);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(parse_str("1 2 0\n").is_err());
        assert!(parse_str("p cnf 2 1\n1 3 0\n").is_err());
        assert!(parse_str("p cnf 2 2\n1 2 0\n").is_err());
        assert!(parse_str("p cnf 2 1\n1 2\n").is_err());
        assert!(parse_str("p cnf 2 1\n0\n").is_err());
        assert!(parse_str("p cnf 4 1\n1 2 3 4 0\n").is_err());
        assert!(parse_str("p dnf 2 1\n1 0\n").is_err());
    }

    #[test]
    fn round_trips() {
        for inst in [examples::three_variables(), generate_random_instance(30, 10, 90, 5).unwrap()] {
            assert_eq!(parse_str(&to_string(&inst)).unwrap(), inst);
        }
    }
}
