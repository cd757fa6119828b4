//! Quantified boolean formulas in prenex CNF and their reduction to games.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{Arena, Game, Objective, Player};
use crate::Limits;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Exists,
    Forall,
}

/// `Q1 x1 ... Qn xn . phi` with `phi` in CNF. Variables are numbered from 1;
/// a literal is `+v` or `-v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QbfFormula {
    vars: usize,
    prefix: Vec<(Quantifier, usize)>,
    clauses: Vec<Vec<i32>>,
}

impl QbfFormula {
    pub fn new(vars: usize, prefix: Vec<(Quantifier, usize)>, clauses: Vec<Vec<i32>>) -> Result<QbfFormula> {
        let mut seen = vec![false; vars + 1];
        for &(_, v) in &prefix {
            if v == 0 || v > vars {
                return Err(Error::InvalidFormula(format!("quantified variable {v} outside 1..={vars}")));
            }
            if core::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidFormula(format!("variable {v} quantified twice")));
            }
        }
        if let Some(v) = (1..=vars).find(|&v| !seen[v]) {
            return Err(Error::InvalidFormula(format!("variable {v} is not quantified")));
        }
        for clause in &clauses {
            if let Some(&lit) = clause.iter().find(|&&l| l == 0 || l.unsigned_abs() as usize > vars) {
                return Err(Error::InvalidFormula(format!("literal {lit} outside 1..={vars}")));
            }
        }
        Ok(QbfFormula { vars, prefix, clauses })
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn prefix(&self) -> &[(Quantifier, usize)] {
        &self.prefix
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    pub fn is_existential(&self) -> bool {
        self.prefix.iter().all(|&(q, _)| q == Quantifier::Exists)
    }
}

/// `forall x exists y forall z . (x | !y) & (!y | z)`.
pub fn qbf1() -> QbfFormula {
    QbfFormula::new(
        3,
        vec![(Quantifier::Forall, 1), (Quantifier::Exists, 2), (Quantifier::Forall, 3)],
        vec![vec![1, -2], vec![-2, 3]],
    )
    .expect("well formed")
}

/// Builds the game in which the owner of each choice vertex sets its variable
/// by moving to the positive or negative literal vertex, in prefix order, and
/// the play ends in a colorless sink. Color `i` holds the literal vertices of
/// clause `i`, so Eve wins iff the formula is true.
pub fn qbf_to_game(formula: &QbfFormula) -> Result<Game> {
    if formula.prefix.is_empty() {
        return Err(Error::EmptyPrefix);
    }
    let n = formula.prefix.len();
    // Per prefix position j: choice 3j, positive literal 3j+1, negative 3j+2.
    let sink = 3 * n;
    let mut names: Vec<String> = Vec::with_capacity(3 * n + 1);
    let mut owners = Vec::with_capacity(3 * n + 1);
    let mut slot = vec![0usize; formula.vars + 1];
    let mut edges = Vec::with_capacity(4 * n + 1);
    for (j, &(q, v)) in formula.prefix.iter().enumerate() {
        slot[v] = j;
        names.extend([format!("v{v}"), format!("x{v}"), format!("nx{v}")]);
        owners.extend([
            match q {
                Quantifier::Exists => Player::Eve,
                Quantifier::Forall => Player::Adam,
            },
            Player::Eve,
            Player::Eve,
        ]);
        let next = if j + 1 < n { 3 * (j + 1) } else { sink };
        edges.extend([(3 * j, 3 * j + 1), (3 * j, 3 * j + 2), (3 * j + 1, next), (3 * j + 2, next)]);
    }
    names.push("s".into());
    owners.push(Player::Eve);
    edges.push((sink, sink));
    let arena = Arena::new(names, owners, edges)?;

    let colors = formula
        .clauses
        .iter()
        .map(|c| {
            c.iter()
                .map(|&l| 3 * slot[l.unsigned_abs() as usize] + if l > 0 { 1 } else { 2 })
                .collect()
        })
        .collect();
    let objective = Objective::new(arena.n(), colors)?;
    Game::new(arena, objective, Some(0))
}

/// Truth value by expanding the prefix; refuses more than `qbf_var_cap`
/// variables.
pub fn eval_qbf_bruteforce(formula: &QbfFormula, limits: &Limits) -> Result<bool> {
    if formula.vars > limits.qbf_var_cap {
        return Err(Error::CapExceeded(formula.vars, limits.qbf_var_cap));
    }
    let mut assignment = vec![false; formula.vars + 1];
    Ok(expand(formula, 0, &mut assignment))
}

fn expand(f: &QbfFormula, depth: usize, assignment: &mut [bool]) -> bool {
    let Some(&(q, v)) = f.prefix.get(depth) else {
        return f
            .clauses
            .iter()
            .all(|c| c.iter().any(|&l| assignment[l.unsigned_abs() as usize] == (l > 0)));
    };
    let mut branch = |value| {
        assignment[v] = value;
        expand(f, depth + 1, assignment)
    };
    match q {
        Quantifier::Exists => branch(false) || branch(true),
        Quantifier::Forall => branch(false) && branch(true),
    }
}

/// Shape of a random formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomQbfParams {
    pub vars: usize,
    pub clauses: usize,
    /// Clause widths are drawn uniformly from `1..=max_width`.
    pub max_width: usize,
    /// Probability that a variable is universally quantified.
    pub forall_ratio: f64,
    pub seed: u64,
}

/// A random formula with a shuffled prefix.
pub fn random_qbf(params: &RandomQbfParams) -> Result<QbfFormula> {
    if params.vars == 0 || params.max_width == 0 || !(0.0..=1.0).contains(&params.forall_ratio) {
        return Err(Error::BadParams(format!("{params:?}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut order: Vec<usize> = (1..=params.vars).collect();
    for i in (1..order.len()).rev() {
        order.swap(i, rng.random_range(0..=i));
    }
    let prefix = order
        .into_iter()
        .map(|v| {
            let q = if rng.random_bool(params.forall_ratio) {
                Quantifier::Forall
            } else {
                Quantifier::Exists
            };
            (q, v)
        })
        .collect();
    let clauses = (0..params.clauses)
        .map(|_| {
            let width = rng.random_range(1..=params.max_width);
            (0..width)
                .map(|_| {
                    let v = rng.random_range(1..=params.vars) as i32;
                    if rng.random_bool(0.5) {
                        v
                    } else {
                        -v
                    }
                })
                .collect()
        })
        .collect();
    QbfFormula::new(params.vars, prefix, clauses)
}
