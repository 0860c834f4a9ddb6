use crate::index::Orientation;
use crate::syntax::print;
use crate::terms::{Connective, Expr, Path, Quantifier, Sort};

use super::apply::Change;
use super::step::{Complement, Direction, Side, Step};
use super::{FormulaNo, KernelError, ProofState, Reason, Role};

/// What an offered step would do, for menus and tooltips.
#[derive(Debug, Clone, PartialEq)]
pub struct Effect {
    /// Message-catalog key of the summary.
    pub key: String,
    pub args: Vec<String>,
    /// Formulas the step would add, in numbering order.
    pub formulas: Vec<(Role, Expr)>,
    pub closes_goal: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepDescriptor {
    /// The step; an incomplete payload holds a hole where user input goes.
    pub step: Step,
    pub target: FormulaNo,
    pub path: Path,
    pub complete: bool,
    pub effect: Effect,
}

impl StepDescriptor {
    /// Message-catalog key of the menu label.
    pub fn label_key(&self) -> String {
        format!("step.{}", self.step.kind())
    }
}

impl ProofState {
    /// Steps that apply to the subterm at `path` of formula `n`, in menu
    /// order.
    pub fn applicable_steps(&self, n: FormulaNo, path: &Path) -> Result<Vec<StepDescriptor>, KernelError> {
        let g = self.active_or_err()?;
        let (phi, role) = self.usable(n)?;
        let sub = phi.subterm_at(path).map_err(|_| KernelError::not(Reason::BadPath(path.to_string())))?;
        let goal = &self.data.formulas[&g].formula;
        let context = self.context(g);
        let formula = |k: FormulaNo| &self.data.formulas[&k].formula;
        let root = path.is_root();
        let mut cands: Vec<(Step, bool)> = Vec::new();

        if role == Role::Goal && root {
            cands.push((Step::ProveLemma { goal: g, formula: Expr::hole(0, Sort::Proposition) }, false));
            cands.push((Step::ByContradiction { goal: g }, true));
            if let Some((c, _)) = phi.connective() {
                match c {
                    Connective::And => cands.push((Step::ProveConjuncts { goal: g }, true)),
                    Connective::Implies => cands.push((Step::IntroImplication { goal: g }, true)),
                    Connective::Iff => cands.push((Step::IntroEquivalence { goal: g }, true)),
                    Connective::Or => {
                        for side in [Side::Left, Side::Right] {
                            cands.push((Step::ProveDisjunctionClassical { goal: g, side }, true));
                        }
                    }
                    Connective::Not => {}
                }
            }
            match phi {
                Expr::Quant(Quantifier::Forall, ..) => cands.push((Step::IntroForall { goal: g }, true)),
                Expr::Quant(Quantifier::Exists, v, _) => cands.push((
                    Step::IntroExistsWitness { goal: g, term: Expr::hole(0, v.sort) },
                    false,
                )),
                _ => {}
            }
            if phi.is_top() {
                cands.push((Step::CloseByAssumption { assumption: g }, true));
            }
            for &k in &context {
                if formula(k).alpha_eq(phi) {
                    cands.push((Step::CloseByAssumption { assumption: k }, true));
                }
            }
        }

        if role == Role::Assumption && root {
            match phi {
                Expr::Quant(Quantifier::Exists, ..) => cands.push((Step::TakeThis { assumption: n }, true)),
                Expr::Quant(Quantifier::Forall, v, _) => {
                    cands.push((Step::Specialize { assumption: n, term: Expr::hole(0, v.sort) }, false))
                }
                _ => {}
            }
            if phi.as_binary(Connective::And).is_some() {
                cands.push((Step::ElimConjunction { assumption: n }, true));
            }
            if phi.as_binary(Connective::Iff).is_some() {
                cands.push((Step::ElimEquivalence { assumption: n }, true));
            }
            if let Some((a, _)) = phi.as_binary(Connective::Implies) {
                for &k in &context {
                    if formula(k).alpha_eq(a) {
                        cands.push((Step::ModusPonens { implication: n, antecedent: k }, true));
                    }
                }
            }
            if phi.as_binary(Connective::Or).is_some() {
                cands.push((Step::CaseAnalysis { assumption: n }, true));
            }
            if phi.alpha_eq(goal) {
                cands.push((Step::CloseByAssumption { assumption: n }, true));
            }
            if phi.is_bot() {
                cands.push((Step::ContradictionFromPair { formula: n, complement: Complement::Falsum }, true));
            }
            for &k in context.iter().filter(|k| **k != n) {
                let step = Step::ContradictionFromPair { formula: n, complement: Complement::Assumption(k) };
                if self.evaluate(&step, false).is_ok() {
                    cands.push((step, true));
                }
            }
        }

        let mut lemma_steps: Vec<(String, Orientation, u8, Step)> = Vec::new();
        for (rule, _) in self.env.rules.matching(sub) {
            let step = match role {
                Role::Goal => Step::RewriteGoal { goal: n, rule: rule.reference(), path: path.clone() },
                Role::Assumption => Step::RewriteAssumption { assumption: n, rule: rule.reference(), path: path.clone() },
            };
            lemma_steps.push((rule.lemma.clone(), rule.orientation, 0, step));
        }
        if role == Role::Assumption && root {
            for id in self.env.rules.refuting(sub) {
                let step = Step::ContradictionFromPair { formula: n, complement: Complement::Lemma(id.clone()) };
                lemma_steps.push((id, Orientation::Whole, 1, step));
            }
        }
        lemma_steps.sort_by(|a, b| (&a.0, a.1, a.2).cmp(&(&b.0, b.1, b.2)));
        cands.extend(lemma_steps.into_iter().map(|(.., s)| (s, true)));

        for &k in context.iter().filter(|k| **k != n) {
            if let Some((l, r)) = formula(k).as_equation() {
                for (side, direction) in [(l, Direction::Ltr), (r, Direction::Rtl)] {
                    if side.alpha_eq(sub) {
                        let step = Step::EqualityRewrite { equation: k, direction, target: n, path: path.clone() };
                        cands.push((step, true));
                    }
                }
            }
        }

        if sub.sort() == Sort::Proposition {
            cands.push((Step::ExcludedMiddleSplit { formula: n, path: path.clone(), term: None }, true));
        }

        Ok(cands
            .into_iter()
            .filter_map(|(step, complete)| {
                let change = self.evaluate(&step, !complete).ok()?;
                let effect = effect(&step, &change, g);
                Some(StepDescriptor { step, target: n, path: path.clone(), complete, effect })
            })
            .collect())
    }
}

fn effect(step: &Step, change: &Change, goal: FormulaNo) -> Effect {
    let formulas: Vec<(Role, Expr)> = change.formulas().into_iter().map(|(r, e)| (r, e.clone())).collect();
    let texts: Vec<String> = formulas.iter().map(|(_, e)| print(e)).collect();
    let args = match (step, change) {
        (Step::CloseByAssumption { .. } | Step::ContradictionFromPair { .. }, _) => vec![goal.to_string()],
        (Step::RewriteGoal { rule, .. } | Step::RewriteAssumption { rule, .. }, _) => {
            let mut args = vec![rule.lemma.clone()];
            args.extend(texts);
            args
        }
        (Step::EqualityRewrite { equation, .. }, _) => {
            let mut args = vec![equation.to_string()];
            args.extend(texts);
            args
        }
        (Step::CaseAnalysis { .. } | Step::ExcludedMiddleSplit { .. }, Change::Reduce(branches)) => {
            branches.iter().filter_map(|b| b.assumptions.first().map(print)).collect()
        }
        _ => texts,
    };
    Effect {
        key: format!("effect.{}", step.kind()),
        args,
        formulas,
        closes_goal: matches!(change, Change::Close),
    }
}
