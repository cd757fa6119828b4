//! QDIMACS (prenex CNF with `e`/`a` lines) and plain DIMACS for 2-CNF.

use std::fmt::Write as _;

use genreach_core::qbf::{QbfFormula, Quantifier};
use genreach_core::subclasses::{Lit, TwoSatFormula};

use crate::format::ParseError;

struct Cnf {
    vars: usize,
    prefix: Vec<(Quantifier, usize)>,
    clauses: Vec<Vec<i32>>,
    last_line: usize,
}

fn parse_cnf(text: &str, allow_prefix: bool) -> Result<Cnf, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut prefix = Vec::new();
    let mut clauses = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    let mut clause_line = 0;
    let mut last_line = 1;

    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let t: Vec<&str> = line.split_whitespace().collect();
        if t.is_empty() || t[0] == "c" || t[0].starts_with('%') {
            continue;
        }
        last_line = line_no;
        if t[0] == "p" {
            if header.is_some() {
                return Err(ParseError::new(line_no, "duplicate problem line"));
            }
            let ["p", "cnf", v, c] = t[..] else {
                return Err(ParseError::new(line_no, "expected `p cnf <vars> <clauses>`"));
            };
            let v = v
                .parse()
                .map_err(|_| ParseError::new(line_no, format!("bad variable count `{v}`")))?;
            let c = c
                .parse()
                .map_err(|_| ParseError::new(line_no, format!("bad clause count `{c}`")))?;
            header = Some((v, c));
            continue;
        }
        let (vars, _) = header.ok_or_else(|| ParseError::new(line_no, "missing problem line"))?;
        let numbers = |tokens: &[&str]| -> Result<Vec<i64>, ParseError> {
            tokens
                .iter()
                .map(|s| {
                    s.parse::<i64>()
                        .map_err(|_| ParseError::new(line_no, format!("bad literal `{s}`")))
                })
                .collect()
        };
        if t[0] == "e" || t[0] == "a" {
            if !allow_prefix {
                return Err(ParseError::new(line_no, "quantifier lines are not allowed here"));
            }
            if !clauses.is_empty() || !current.is_empty() {
                return Err(ParseError::new(line_no, "quantifier line after clauses"));
            }
            let q = if t[0] == "e" { Quantifier::Exists } else { Quantifier::Forall };
            let vs = numbers(&t[1..])?;
            if vs.last() != Some(&0) {
                return Err(ParseError::new(line_no, "quantifier line must end with 0"));
            }
            for &v in &vs[..vs.len() - 1] {
                if v <= 0 || v as usize > vars {
                    return Err(ParseError::new(line_no, format!("variable {v} outside 1..={vars}")));
                }
                if prefix.iter().any(|&(_, w)| w == v as usize) {
                    return Err(ParseError::new(line_no, format!("variable {v} quantified twice")));
                }
                prefix.push((q, v as usize));
            }
            continue;
        }
        for lit in numbers(&t)? {
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
                continue;
            }
            if lit.unsigned_abs() as usize > vars {
                return Err(ParseError::new(line_no, format!("literal {lit} outside 1..={vars}")));
            }
            if current.is_empty() {
                clause_line = line_no;
            }
            current.push(lit as i32);
        }
    }
    let (vars, count) = header.ok_or_else(|| ParseError::new(last_line, "missing problem line"))?;
    if !current.is_empty() {
        return Err(ParseError::new(clause_line, "clause is not terminated by 0"));
    }
    if clauses.len() != count {
        return Err(ParseError::new(
            last_line,
            format!("header announces {count} clauses, found {}", clauses.len()),
        ));
    }
    Ok(Cnf {
        vars,
        prefix,
        clauses,
        last_line,
    })
}

/// A parsed formula plus warnings, e.g. about unquantified variables.
#[derive(Debug, Clone)]
pub struct Qdimacs {
    pub formula: QbfFormula,
    pub warnings: Vec<String>,
}

/// Parses QDIMACS. Unquantified variables become innermost existentials.
pub fn parse_qdimacs(text: &str) -> Result<Qdimacs, ParseError> {
    let mut cnf = parse_cnf(text, true)?;
    let mut warnings = Vec::new();
    let free: Vec<usize> = (1..=cnf.vars).filter(|&v| !cnf.prefix.iter().any(|&(_, w)| w == v)).collect();
    if !free.is_empty() {
        let list: Vec<String> = free.iter().map(ToString::to_string).collect();
        warnings.push(format!("free variables {} treated as innermost existential", list.join(" ")));
        cnf.prefix.extend(free.into_iter().map(|v| (Quantifier::Exists, v)));
    }
    let formula =
        QbfFormula::new(cnf.vars, cnf.prefix, cnf.clauses).map_err(|e| ParseError::new(cnf.last_line, e.to_string()))?;
    Ok(Qdimacs { formula, warnings })
}

pub fn write_qdimacs(formula: &QbfFormula) -> String {
    let mut out = format!("p cnf {} {}\n", formula.vars(), formula.clauses().len());
    let mut blocks: Vec<(Quantifier, Vec<usize>)> = Vec::new();
    for &(q, v) in formula.prefix() {
        match blocks.last_mut() {
            Some((last, vs)) if *last == q => vs.push(v),
            _ => blocks.push((q, vec![v])),
        }
    }
    for (q, vs) in blocks {
        out.push(if q == Quantifier::Exists { 'e' } else { 'a' });
        for v in vs {
            write!(out, " {v}").unwrap();
        }
        out.push_str(" 0\n");
    }
    for clause in formula.clauses() {
        for l in clause {
            write!(out, "{l} ").unwrap();
        }
        out.push_str("0\n");
    }
    out
}

/// Parses DIMACS CNF whose clauses all have one or two literals.
pub fn parse_dimacs_2cnf(text: &str) -> Result<TwoSatFormula, ParseError> {
    let cnf = parse_cnf(text, false)?;
    let mut phi = TwoSatFormula::new(cnf.vars);
    for (i, clause) in cnf.clauses.iter().enumerate() {
        let lits: Vec<Lit> = clause.iter().map(|&l| Lit::from_dimacs(l as i64).unwrap()).collect();
        phi.push(&lits).map_err(|_| {
            ParseError::new(
                cnf.last_line,
                format!("clause {} has width {}, expected 1 or 2", i + 1, clause.len()),
            )
        })?;
    }
    Ok(phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use genreach_core::qbf::qbf1;

    const QBF1: &str = "c forall x exists y forall z\np cnf 3 2\na 1 0\ne 2 0\na 3 0\n1 -2 0\n-2 3 0\n";

    #[test]
    fn qbf1_document() {
        let q = parse_qdimacs(QBF1).unwrap();
        assert_eq!(q.formula, qbf1());
        assert!(q.warnings.is_empty());
        assert_eq!(parse_qdimacs(&write_qdimacs(&q.formula)).unwrap().formula, q.formula);
    }

    #[test]
    fn single_existential() {
        let q = parse_qdimacs("p cnf 1 1\ne 1 0\n1 0\n").unwrap();
        assert_eq!(q.formula.prefix(), [(Quantifier::Exists, 1)]);
        assert_eq!(q.formula.clauses(), [vec![1]]);
    }

    #[test]
    fn free_variables_warn() {
        let q = parse_qdimacs("p cnf 2 1\na 1 0\n1 2 0\n").unwrap();
        assert_eq!(q.formula.prefix(), [(Quantifier::Forall, 1), (Quantifier::Exists, 2)]);
        assert_eq!(q.warnings.len(), 1);
    }

    #[test]
    fn errors() {
        assert_eq!(parse_qdimacs("p cnf 3 1\ne 1 2 3 0\n5 0\n").unwrap_err().line, 3);
        assert_eq!(parse_qdimacs("p cnf 1 1\n1 0\ne 1 0\n").unwrap_err().line, 3);
        assert!(parse_qdimacs("p cnf 1 2\n1 0\n").is_err());
        assert!(parse_qdimacs("1 0\n").is_err());
    }

    #[test]
    fn two_cnf() {
        let phi = parse_dimacs_2cnf("c\np cnf 2 2\n1 2 0\n-1 2 0\n").unwrap();
        assert_eq!(phi.vars(), 2);
        assert!(phi.solve().is_sat());
        assert!(parse_dimacs_2cnf("p cnf 3 1\n1 2 3 0\n").is_err());
        assert!(parse_dimacs_2cnf("p cnf 1 1\ne 1 0\n1 0\n").is_err());
    }
}
