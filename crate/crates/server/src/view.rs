//! What clients see of a proof state: numbered formulas with roles,
//! statuses and markers, and localized step menus.

use easyprove::kernel::{GoalStatus, KernelError, Role, Step};
use easyprove::theory::find_lemma;
use easyprove::{print, ProofState, Sort, StepDescriptor, StepRecord};
use serde::{Deserialize, Serialize};

use crate::catalog::{render, text_or, Locale, Message};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Marker {
    /// Assumption usable at the active goal.
    BlueStar,
    /// Assumption of another branch.
    GrayStar,
    /// The active goal.
    RedFace,
    /// An unproved goal that is not active.
    YellowFace,
    GreenFace,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FormulaView {
    pub number: u32,
    pub text: String,
    pub role: Role,
    /// The goal owning an assumption; the goal itself for goals.
    pub branch: u32,
    pub status: Option<GoalStatus>,
    pub in_scope: bool,
    pub marker: Marker,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Sidebar {
    pub goals: Vec<u32>,
    pub assumptions: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ProofView {
    pub complete: bool,
    pub active_goal: Option<u32>,
    pub can_undo: bool,
    pub can_redo: bool,
    pub formulas: Vec<FormulaView>,
    pub sidebar: Sidebar,
}

impl ProofView {
    pub fn of(st: &ProofState) -> ProofView {
        let formulas = st
            .formulas()
            .map(|f| {
                let status = match f.role {
                    Role::Goal => st.goal_status(f.number),
                    Role::Assumption => None,
                };
                let in_scope = f.role == Role::Assumption && st.in_scope(f.number);
                let marker = match (f.role, status) {
                    (Role::Assumption, _) if in_scope => Marker::BlueStar,
                    (Role::Assumption, _) => Marker::GrayStar,
                    (_, Some(GoalStatus::Proved)) => Marker::GreenFace,
                    (_, Some(GoalStatus::Active)) => Marker::RedFace,
                    _ => Marker::YellowFace,
                };
                FormulaView {
                    number: f.number,
                    text: print(&f.formula),
                    role: f.role,
                    branch: f.branch,
                    status,
                    in_scope,
                    marker,
                }
            })
            .collect();
        let assumptions = st.active_goal().map(|g| st.context(g)).unwrap_or_default();
        ProofView {
            complete: st.is_complete(),
            active_goal: st.active_goal(),
            can_undo: st.can_undo(),
            can_redo: st.can_redo(),
            formulas,
            sidebar: Sidebar { goals: st.open_goals(), assumptions },
        }
    }

    /// A plain-text rendering for terminals.
    pub fn to_text(&self, locale: Locale) -> String {
        let mut out = String::new();
        for f in &self.formulas {
            let role = match f.role {
                Role::Goal => text_or(locale, "view.goal", "goal"),
                Role::Assumption => text_or(locale, "view.assumption", "assumption"),
            };
            let note = match (f.status, f.in_scope) {
                (Some(s), _) => {
                    let key = match s {
                        GoalStatus::Active => "view.status.active",
                        GoalStatus::Open => "view.status.open",
                        GoalStatus::Proved => "view.status.proved",
                    };
                    format!(" [{}]", text_or(locale, key, key))
                }
                (None, false) => format!(" [{}]", text_or(locale, "view.out-of-scope", "other branch")),
                (None, true) => String::new(),
            };
            out.push_str(&format!("{:>4}. {}  ({role}{note})\n", f.number, f.text));
        }
        let key = if self.complete { "view.complete" } else { "view.incomplete" };
        out.push_str(&text_or(locale, key, key));
        out.push('\n');
        out
    }
}

/// A menu entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DescriptorView {
    pub label: Message,
    pub effect: Message,
    /// The record to submit; for incomplete steps `term` is still to fill.
    pub record: StepRecord,
    pub complete: bool,
    /// Sort of the term the user must enter.
    pub needs: Option<Sort>,
    pub closes_goal: bool,
    pub formulas: Vec<(Role, String)>,
}

pub fn lemma_name(locale: Locale, id: &str) -> String {
    match find_lemma(id) {
        Ok(l) => text_or(locale, &l.name_key, id),
        Err(_) => id.to_string(),
    }
}

fn needed_sort(step: &Step) -> Option<Sort> {
    match step {
        Step::IntroExistsWitness { term, .. } | Step::Specialize { term, .. } => Some(term.sort()),
        Step::ProveLemma { .. } => Some(Sort::Proposition),
        _ => None,
    }
}

pub fn descriptor_view(locale: Locale, d: &StepDescriptor) -> DescriptorView {
    let mut record = d.step.record();
    let needs = if d.complete { None } else { needed_sort(&d.step) };
    if !d.complete {
        record.term = None;
    }
    let mut args = d.effect.args.clone();
    if matches!(d.step, Step::RewriteGoal { .. } | Step::RewriteAssumption { .. }) {
        if let Some(first) = args.first_mut() {
            *first = lemma_name(locale, first);
        }
    }
    DescriptorView {
        label: render(locale, &d.label_key(), &[]),
        effect: render(locale, &d.effect.key, &args),
        record,
        complete: d.complete,
        needs,
        closes_goal: d.effect.closes_goal,
        formulas: d.effect.formulas.iter().map(|(r, f)| (*r, print(f))).collect(),
    }
}

/// Catalog message for a kernel error.
pub fn kernel_message(locale: Locale, e: &KernelError) -> Message {
    let args = match e {
        KernelError::NotApplicable(r) => vec![render(locale, &r.key(), &r.args()).text],
        KernelError::StaleState(n) | KernelError::OutOfScope(n) | KernelError::EmptyBranch(n) => vec![n.to_string()],
        KernelError::IllFormedGoal(s) | KernelError::BadRecord(s) => vec![s.clone()],
        KernelError::Index(i) => vec![i.to_string()],
        KernelError::NoActiveGoal | KernelError::NothingToUndo | KernelError::NothingToRedo => vec![],
    };
    render(locale, &format!("error.{}", e.code()), &args)
}

#[cfg(test)]
mod tests {
    use super::*;
    use easyprove::demos::barber_task;
    use easyprove::Path;

    #[test]
    fn barber_markers() {
        let mut st = barber_task().start().unwrap();
        let v = ProofView::of(&st);
        assert_eq!(v.formulas[0].marker, Marker::RedFace);
        st.apply(Step::ByContradiction { goal: 1 }).unwrap();
        let v = ProofView::of(&st);
        let markers: Vec<_> = v.formulas.iter().map(|f| f.marker).collect();
        assert_eq!(markers, [Marker::YellowFace, Marker::BlueStar, Marker::RedFace]);
        assert_eq!(v.formulas[2].text, "⊥");
        assert_eq!(v.sidebar, Sidebar { goals: vec![3], assumptions: vec![2] });
    }

    #[test]
    fn menus_render_in_both_locales() {
        let st = barber_task().start().unwrap();
        let menu = st.applicable_steps(1, &Path::root()).unwrap();
        for l in Locale::ALL {
            let views: Vec<_> = menu.iter().map(|d| descriptor_view(l, d)).collect();
            assert!(views.iter().all(|v| v.label.text != v.label.key && v.effect.text != v.effect.key));
        }
        let first = descriptor_view(Locale::En, &menu[0]);
        assert_eq!(first.label.text, "Prove a lemma");
        assert_eq!(first.needs, Some(Sort::Proposition));
        assert_eq!(first.record.term, None);
        let second = descriptor_view(Locale::En, &menu[1]);
        assert_eq!(
            second.effect.text,
            "The negated goal ∃A∀B(shaves(A,B) ⇔ ¬shaves(B,B)) will be added as an assumption, and the new goal will be ⊥."
        );
    }
}
