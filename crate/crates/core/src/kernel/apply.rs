use crate::simplify::simplify;
use crate::terms::{fresh_name, Connective, Expr, Path, Quantifier, Sort, Var};

use super::rules::RuleKind;
use super::step::{Complement, Direction, RuleRef, Side, Step};
use super::{FormulaNo, KernelError, ProofState, Reason, Role, Shape};

pub(crate) struct Branch {
    pub assumptions: Vec<Expr>,
    pub goal: Expr,
}

/// What a step does to the active goal.
pub(crate) enum Change {
    /// New assumptions at the active goal.
    Forward(Vec<Expr>),
    /// The active goal is replaced by one or more new goals.
    Reduce(Vec<Branch>),
    Close,
}

impl Change {
    fn reduce(assumptions: Vec<Expr>, goal: Expr) -> Change {
        Change::Reduce(vec![Branch { assumptions, goal }])
    }

    /// The simplified form every stored formula takes.
    fn simplified(self) -> Change {
        match self {
            Change::Forward(fs) => Change::Forward(fs.iter().map(simplify).collect()),
            Change::Reduce(bs) => Change::Reduce(
                bs.into_iter()
                    .map(|b| Branch { assumptions: b.assumptions.iter().map(simplify).collect(), goal: simplify(&b.goal) })
                    .collect(),
            ),
            Change::Close => Change::Close,
        }
    }

    pub fn formulas(&self) -> Vec<(Role, &Expr)> {
        match self {
            Change::Forward(fs) => fs.iter().map(|f| (Role::Assumption, f)).collect(),
            Change::Reduce(bs) => bs
                .iter()
                .flat_map(|b| b.assumptions.iter().map(|a| (Role::Assumption, a)).chain([(Role::Goal, &b.goal)]))
                .collect(),
            Change::Close => Vec::new(),
        }
    }
}

fn shape(s: Shape) -> KernelError {
    KernelError::not(s.into())
}

impl From<Shape> for Reason {
    fn from(s: Shape) -> Self {
        Reason::Shape(s)
    }
}

fn binary(e: &Expr, c: Connective, s: Shape) -> Result<(&Expr, &Expr), KernelError> {
    e.as_binary(c).ok_or_else(|| shape(s))
}

fn quant(e: &Expr, q: Quantifier, s: Shape) -> Result<(&Var, &Expr), KernelError> {
    e.as_quant(q).ok_or_else(|| shape(s))
}

fn instantiate(body: &Expr, v: &Var, t: &Expr) -> Result<Expr, KernelError> {
    body.instantiate(&v.name, t).map_err(|e| KernelError::not(Reason::BadTerm(e.to_string())))
}

fn subterm<'e>(e: &'e Expr, path: &Path) -> Result<&'e Expr, KernelError> {
    e.subterm_at(path).map_err(|_| KernelError::not(Reason::BadPath(path.to_string())))
}

impl ProofState {
    pub(crate) fn active_or_err(&self) -> Result<FormulaNo, KernelError> {
        self.data.active.ok_or(KernelError::NoActiveGoal)
    }

    fn active_formula(&self) -> Result<&Expr, KernelError> {
        Ok(&self.data.formulas[&self.active_or_err()?].formula)
    }

    /// The active goal, which `g` must name.
    fn goal_target(&self, g: FormulaNo) -> Result<&Expr, KernelError> {
        let entry = self.data.formulas.get(&g).ok_or(KernelError::StaleState(g))?;
        if Some(g) != self.data.active {
            return Err(KernelError::not(Reason::NotActiveGoal(g)));
        }
        Ok(&entry.formula)
    }

    pub(crate) fn assumption(&self, k: FormulaNo) -> Result<&Expr, KernelError> {
        let entry = self.data.formulas.get(&k).ok_or(KernelError::StaleState(k))?;
        if entry.role != Role::Assumption {
            return Err(KernelError::not(Reason::NotAssumption(k)));
        }
        if !self.in_scope(k) {
            return Err(KernelError::OutOfScope(k));
        }
        Ok(&entry.formula)
    }

    /// The active goal or an assumption in scope.
    pub(crate) fn usable(&self, n: FormulaNo) -> Result<(&Expr, Role), KernelError> {
        let entry = self.data.formulas.get(&n).ok_or(KernelError::StaleState(n))?;
        match entry.role {
            Role::Goal if Some(n) == self.data.active => Ok((&entry.formula, Role::Goal)),
            Role::Goal => Err(KernelError::OutOfScope(n)),
            Role::Assumption => Ok((self.assumption(n)?, Role::Assumption)),
        }
    }

    fn check_term(&self, t: &Expr, sort: Sort, preview: bool) -> Result<(), KernelError> {
        if t.has_holes() && !preview {
            return Err(KernelError::not(Reason::BadTerm("the term contains a hole".into())));
        }
        if t.sort() != sort {
            return Err(KernelError::not(Reason::BadTerm(format!("expected {sort}, found {}", t.sort()))));
        }
        Ok(())
    }

    fn fresh(&self, v: &Var) -> Expr {
        Expr::var(fresh_name(&v.name, &self.taken_names()), v.sort)
    }

    /// Computes the effect of `step` on the current state without changing
    /// it. With `preview`, payload terms may contain holes.
    pub(crate) fn evaluate(&self, step: &Step, preview: bool) -> Result<Change, KernelError> {
        let g = self.active_or_err()?;
        let change = match step {
            Step::ByContradiction { goal } => {
                let phi = self.goal_target(*goal)?;
                Change::reduce(vec![Expr::not(phi.clone())], Expr::bot())
            }
            Step::ProveConjuncts { goal } => {
                let (a, b) = binary(self.goal_target(*goal)?, Connective::And, Shape::Conjunction)?;
                Change::Reduce(vec![
                    Branch { assumptions: vec![], goal: a.clone() },
                    Branch { assumptions: vec![], goal: b.clone() },
                ])
            }
            Step::IntroImplication { goal } => {
                let (a, b) = binary(self.goal_target(*goal)?, Connective::Implies, Shape::Implication)?;
                Change::reduce(vec![a.clone()], b.clone())
            }
            Step::IntroEquivalence { goal } => {
                let (a, b) = binary(self.goal_target(*goal)?, Connective::Iff, Shape::Equivalence)?;
                Change::Reduce(vec![
                    Branch { assumptions: vec![], goal: Expr::implies(a.clone(), b.clone()) },
                    Branch { assumptions: vec![], goal: Expr::implies(b.clone(), a.clone()) },
                ])
            }
            Step::IntroForall { goal } => {
                let (v, body) = quant(self.goal_target(*goal)?, Quantifier::Forall, Shape::Universal)?;
                Change::reduce(vec![], instantiate(body, v, &self.fresh(v))?)
            }
            Step::IntroExistsWitness { goal, term } => {
                let (v, body) = quant(self.goal_target(*goal)?, Quantifier::Exists, Shape::Existential)?;
                self.check_term(term, v.sort, preview)?;
                Change::reduce(vec![], instantiate(body, v, term)?)
            }
            Step::ProveDisjunctionClassical { goal, side } => {
                let (a, b) = binary(self.goal_target(*goal)?, Connective::Or, Shape::Disjunction)?;
                match side {
                    Side::Left => Change::reduce(vec![Expr::not(b.clone())], a.clone()),
                    Side::Right => Change::reduce(vec![Expr::not(a.clone())], b.clone()),
                }
            }
            Step::ProveLemma { goal, formula } => {
                let current = self.goal_target(*goal)?.clone();
                self.check_term(formula, Sort::Proposition, preview)?;
                Change::Reduce(vec![
                    Branch { assumptions: vec![], goal: formula.clone() },
                    Branch { assumptions: vec![formula.clone()], goal: current },
                ])
            }
            Step::CloseByAssumption { assumption } => {
                let goal = self.active_formula()?;
                if *assumption == g {
                    if !goal.is_top() {
                        return Err(shape(Shape::Truth));
                    }
                } else if !self.assumption(*assumption)?.alpha_eq(goal) {
                    return Err(KernelError::not(Reason::Mismatch));
                }
                Change::Close
            }
            Step::RewriteGoal { goal, rule, path } => {
                let phi = self.goal_target(*goal)?;
                Change::reduce(vec![], self.rewrite(phi, rule, path, Role::Goal)?)
            }
            Step::TakeThis { assumption } => {
                let (v, body) = quant(self.assumption(*assumption)?, Quantifier::Exists, Shape::Existential)?;
                Change::Forward(vec![instantiate(body, v, &self.fresh(v))?])
            }
            Step::Specialize { assumption, term } => {
                let (v, body) = quant(self.assumption(*assumption)?, Quantifier::Forall, Shape::Universal)?;
                self.check_term(term, v.sort, preview)?;
                Change::Forward(vec![instantiate(body, v, term)?])
            }
            Step::ElimConjunction { assumption } => {
                let (a, b) = binary(self.assumption(*assumption)?, Connective::And, Shape::Conjunction)?;
                Change::Forward(vec![a.clone(), b.clone()])
            }
            Step::ElimEquivalence { assumption } => {
                let (a, b) = binary(self.assumption(*assumption)?, Connective::Iff, Shape::Equivalence)?;
                Change::Forward(vec![Expr::implies(a.clone(), b.clone()), Expr::implies(b.clone(), a.clone())])
            }
            Step::ModusPonens { implication, antecedent } => {
                let (a, b) = binary(self.assumption(*implication)?, Connective::Implies, Shape::Implication)?;
                if !self.assumption(*antecedent)?.alpha_eq(a) {
                    return Err(KernelError::not(Reason::Mismatch));
                }
                Change::Forward(vec![b.clone()])
            }
            Step::CaseAnalysis { assumption } => {
                let (a, b) = binary(self.assumption(*assumption)?, Connective::Or, Shape::Disjunction)?;
                let goal = self.active_formula()?.clone();
                Change::Reduce(vec![
                    Branch { assumptions: vec![a.clone()], goal: goal.clone() },
                    Branch { assumptions: vec![b.clone()], goal },
                ])
            }
            Step::ExcludedMiddleSplit { formula, path, term } => self.split(*formula, path, term.as_ref(), preview)?,
            Step::ContradictionFromPair { formula, complement } => {
                let phi = self.assumption(*formula)?;
                let ok = match complement {
                    Complement::Falsum => phi.is_bot(),
                    Complement::Assumption(k) => {
                        let psi = self.assumption(*k)?;
                        simplify(&Expr::not(phi.clone())).alpha_eq(psi) || simplify(&Expr::not(psi.clone())).alpha_eq(phi)
                    }
                    Complement::Lemma(id) => self.env.rules.refutes(id, phi),
                };
                if !ok {
                    return Err(KernelError::not(Reason::Mismatch));
                }
                Change::Close
            }
            Step::RewriteAssumption { assumption, rule, path } => {
                let phi = self.assumption(*assumption)?;
                Change::Forward(vec![self.rewrite(phi, rule, path, Role::Assumption)?])
            }
            Step::EqualityRewrite { equation, direction, target, path } => {
                let (l, r) = self.assumption(*equation)?.as_equation().ok_or_else(|| shape(Shape::Equation))?;
                let (from, to) = match direction {
                    Direction::Ltr => (l, r),
                    Direction::Rtl => (r, l),
                };
                if *target == *equation {
                    return Err(KernelError::not(Reason::NoOp));
                }
                let (phi, role) = self.usable(*target)?;
                if !subterm(phi, path)?.alpha_eq(from) {
                    return Err(KernelError::not(Reason::Mismatch));
                }
                self.check_unbound_above(phi, path, [from, to])?;
                let out = phi.replace_at(path, to.clone()).map_err(|e| KernelError::not(Reason::BadTerm(e.to_string())))?;
                let out = simplify(&out);
                if out.alpha_eq(phi) {
                    return Err(KernelError::not(Reason::NoOp));
                }
                match role {
                    Role::Goal => Change::reduce(vec![], out),
                    Role::Assumption => Change::Forward(vec![out]),
                }
            }
        };
        Ok(change.simplified())
    }

    /// Fails when a free variable of `terms` is bound above `path` in `e`.
    fn check_unbound_above<'a>(
        &self,
        e: &Expr,
        path: &Path,
        terms: impl IntoIterator<Item = &'a Expr>,
    ) -> Result<(), KernelError> {
        let above = e.binders_above(path).map_err(|_| KernelError::not(Reason::BadPath(path.to_string())))?;
        for t in terms {
            let fv = t.free_vars();
            if above.iter().any(|v| fv.contains(&v.name)) {
                return Err(KernelError::not(Reason::Captured));
            }
        }
        Ok(())
    }

    fn split(&self, n: FormulaNo, path: &Path, term: Option<&Expr>, preview: bool) -> Result<Change, KernelError> {
        let goal = self.active_formula()?.clone();
        let (phi, role) = self.usable(n)?;
        let cases = |psi: &Expr| [psi.clone(), simplify(&Expr::not(psi.clone()))];
        if let Some(psi) = term {
            self.check_term(psi, Sort::Proposition, preview)?;
            let [yes, no] = cases(psi);
            return Ok(Change::Reduce(vec![
                Branch { assumptions: vec![yes], goal: goal.clone() },
                Branch { assumptions: vec![no], goal },
            ]));
        }
        let psi = subterm(phi, path)?;
        if psi.sort() != Sort::Proposition {
            return Err(shape(Shape::Proposition));
        }
        if psi.is_top() || psi.is_bot() {
            return Err(KernelError::not(Reason::Constant));
        }
        self.check_unbound_above(phi, path, [psi])?;
        let branches = cases(psi)
            .into_iter()
            .zip([Expr::top(), Expr::bot()])
            .map(|(case, value)| {
                let (replaced, _) = phi.replace_occurrences(psi, &value);
                let replaced = simplify(&replaced);
                match role {
                    Role::Goal => Branch { assumptions: vec![case], goal: replaced },
                    Role::Assumption => {
                        let mut assumptions = vec![case];
                        if !replaced.is_top() {
                            assumptions.push(replaced);
                        }
                        Branch { assumptions, goal: goal.clone() }
                    }
                }
            })
            .collect();
        Ok(Change::Reduce(branches))
    }

    /// Result of applying a lemma rule at `path` of `e`.
    fn rewrite(&self, e: &Expr, r: &RuleRef, path: &Path, role: Role) -> Result<Expr, KernelError> {
        let rule = self
            .env
            .rules
            .get(r)
            .ok_or_else(|| KernelError::not(Reason::UnknownRule(format!("{} ({})", r.lemma, r.orientation))))?;
        let sub = subterm(e, path)?;
        let at_root = path.is_root();
        match rule.kind {
            RuleKind::Forward if !(at_root && role == Role::Assumption) => {
                return Err(KernelError::not(Reason::RuleContext))
            }
            RuleKind::Backward if !(at_root && role == Role::Goal) => return Err(KernelError::not(Reason::RuleContext)),
            _ => {}
        }
        let bindings = rule.pattern.matches(sub).ok_or(KernelError::not(Reason::NoMatch))?;
        let new = rule.instantiate(&bindings).ok_or(KernelError::not(Reason::Unbound))?;
        let out = match rule.kind {
            RuleKind::Forward | RuleKind::Backward => new,
            RuleKind::Replace | RuleKind::Fact => {
                if new.alpha_eq(sub) {
                    return Err(KernelError::not(Reason::NoOp));
                }
                e.replace_at(path, new).map_err(|err| KernelError::not(Reason::BadTerm(err.to_string())))?
            }
        };
        let out = simplify(&out);
        if out.alpha_eq(e) {
            return Err(KernelError::not(Reason::NoOp));
        }
        Ok(out)
    }
}
