//! Direct semantics: truth tables and small finite models.

use std::collections::{BTreeMap, BTreeSet};

use easyprove::terms::{Expr, Quantifier, Sort, EQ, IFF, IMPLIES, AND, BOT, NOT, OR, TOP};

/// Free proposition variables, sorted.
pub fn atoms(e: &Expr) -> Vec<String> {
    e.free_var_sorts().into_iter().filter(|(_, s)| *s == Sort::Proposition).map(|(n, _)| n).collect()
}

/// Truth value of a quantifier-free propositional formula.
pub fn eval_prop(e: &Expr, val: &BTreeMap<String, bool>) -> bool {
    match e {
        Expr::Var(v) => val[&v.name],
        Expr::Const(s) if s.is(TOP) => true,
        Expr::Const(s) if s.is(BOT) => false,
        Expr::App(s, args) => {
            let a = |i: usize| eval_prop(&args[i], val);
            match s.name() {
                NOT => !a(0),
                AND => a(0) && a(1),
                OR => a(0) || a(1),
                IMPLIES => !a(0) || a(1),
                IFF => a(0) == a(1),
                other => panic!("not propositional: {other}"),
            }
        }
        other => panic!("not propositional: {other:?}"),
    }
}

/// Values of `e` on all assignments to `atoms`, in binary counting order.
pub fn truth_table(e: &Expr, atoms: &[String]) -> Vec<bool> {
    (0..1u32 << atoms.len())
        .map(|row| {
            let val = atoms.iter().enumerate().map(|(i, a)| (a.clone(), row >> i & 1 == 1)).collect();
            eval_prop(e, &val)
        })
        .collect()
}

pub fn is_tautology(e: &Expr) -> bool {
    truth_table(e, &atoms(e)).into_iter().all(|b| b)
}

/// An interpretation of predicate symbols and proposition variables over
/// the domain `0..size`.
#[derive(Debug, Clone)]
pub struct Model {
    pub size: usize,
    pub relations: BTreeMap<String, BTreeSet<Vec<usize>>>,
    pub props: BTreeMap<String, bool>,
}

/// Evaluates a set-free first-order formula whose terms are variables.
/// `=` is identity on the domain.
pub fn eval_fol(e: &Expr, m: &Model, env: &mut Vec<(String, Value)>) -> bool {
    let lookup = |env: &Vec<(String, Value)>, name: &str| {
        env.iter().rev().find(|(n, _)| n == name).map(|(_, v)| *v).unwrap_or_else(|| panic!("unbound {name}"))
    };
    match e {
        Expr::Var(v) => match lookup(env, &v.name) {
            Value::Bool(b) => b,
            Value::Elem(_) => panic!("individual in formula position"),
        },
        Expr::Const(s) if s.is(TOP) => true,
        Expr::Const(s) if s.is(BOT) => false,
        Expr::Const(s) => m.props[s.name()],
        Expr::App(s, args) => match s.name() {
            NOT => !eval_fol(&args[0], m, env),
            AND => eval_fol(&args[0], m, env) && eval_fol(&args[1], m, env),
            OR => eval_fol(&args[0], m, env) || eval_fol(&args[1], m, env),
            IMPLIES => !eval_fol(&args[0], m, env) || eval_fol(&args[1], m, env),
            IFF => eval_fol(&args[0], m, env) == eval_fol(&args[1], m, env),
            name => {
                let elems: Vec<usize> = args
                    .iter()
                    .map(|a| match a {
                        Expr::Var(v) => match lookup(env, &v.name) {
                            Value::Elem(i) => i,
                            Value::Bool(_) => panic!("proposition in term position"),
                        },
                        other => panic!("unsupported term {other:?}"),
                    })
                    .collect();
                if name == EQ {
                    elems[0] == elems[1]
                } else {
                    m.relations[name].contains(&elems)
                }
            }
        },
        Expr::Quant(q, v, body) => {
            let values: Vec<Value> = match v.sort {
                Sort::Individual => (0..m.size).map(Value::Elem).collect(),
                Sort::Proposition => vec![Value::Bool(false), Value::Bool(true)],
            };
            let mut check = |val: Value| {
                env.push((v.name.clone(), val));
                let r = eval_fol(body, m, env);
                env.pop();
                r
            };
            match q {
                Quantifier::Forall => values.into_iter().all(&mut check),
                Quantifier::Exists => values.into_iter().any(&mut check),
            }
        }
        Expr::Hole(_) => panic!("hole"),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Value {
    Elem(usize),
    Bool(bool),
}

fn predicates(e: &Expr, out: &mut BTreeMap<String, usize>) {
    if let Expr::App(s, args) = e {
        if ![NOT, AND, OR, IMPLIES, IFF, EQ].contains(&s.name()) {
            out.insert(s.name().to_string(), args.len());
        }
        for a in args {
            predicates(a, out);
        }
    }
    if let Expr::Quant(_, _, body) = e {
        predicates(body, out);
    }
}

/// Whether `e` holds in every model with at most `max_size` elements, under
/// every assignment to its free variables.
pub fn valid_up_to(e: &Expr, max_size: usize) -> bool {
    let mut preds = BTreeMap::new();
    predicates(e, &mut preds);
    let free: Vec<(String, Sort)> = e.free_var_sorts().into_iter().collect();
    for size in 1..=max_size {
        let tuples: Vec<(String, Vec<usize>)> = preds
            .iter()
            .flat_map(|(name, arity)| {
                let count = size.pow(*arity as u32);
                (0..count).map(move |mut k| {
                    let mut t = Vec::new();
                    for _ in 0..*arity {
                        t.push(k % size);
                        k /= size;
                    }
                    (name.clone(), t)
                })
            })
            .collect();
        assert!(tuples.len() <= 20, "model space too large");
        for bits in 0u64..1 << tuples.len() {
            let mut relations: BTreeMap<String, BTreeSet<Vec<usize>>> =
                preds.keys().map(|n| (n.clone(), BTreeSet::new())).collect();
            for (i, (name, t)) in tuples.iter().enumerate() {
                if bits >> i & 1 == 1 {
                    relations.get_mut(name).expect("declared").insert(t.clone());
                }
            }
            let m = Model { size, relations, props: BTreeMap::new() };
            if !all_assignments(e, &m, &free, &mut Vec::new()) {
                return false;
            }
        }
    }
    true
}

fn all_assignments(e: &Expr, m: &Model, free: &[(String, Sort)], env: &mut Vec<(String, Value)>) -> bool {
    let Some(((name, sort), rest)) = free.split_first() else {
        return eval_fol(e, m, env);
    };
    let values: Vec<Value> = match sort {
        Sort::Individual => (0..m.size).map(Value::Elem).collect(),
        Sort::Proposition => vec![Value::Bool(false), Value::Bool(true)],
    };
    values.into_iter().all(|v| {
        env.push((name.clone(), v));
        let r = all_assignments(e, m, rest, env);
        env.pop();
        r
    })
}
