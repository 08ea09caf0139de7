//! Proof trees, counter-models, replay checking, metrics and JSON.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::d1::{expand_d1, inconsistent_d1};
use crate::d3::{expand_d3, inconsistent_d3};
use crate::formula::{parse, Formula, ParseError};
use crate::rules::{Rule, RuleError, RuleInstance};
use crate::semantics::{Calculus, KripkeChain, Sign, SignError, SignedFormula};
use crate::Node;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchOptions {
    /// Extended inconsistency conditions and the refined multi-premise rule (D1).
    pub optimized: bool,
    /// Mark implications with implication-free antecedents directly (D3).
    pub sixopt: bool,
    /// Maximum branch length before the search gives up. Defaults to
    /// `10 * size(goal)^2`.
    pub step_budget: Option<usize>,
}

/// Counters collected during one search.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Rule applications.
    pub expansions: usize,
    /// Longest explored branch, counted in nodes.
    pub max_depth: usize,
    /// Applications of the multi-premise rule.
    pub world_steps: usize,
    /// Largest number of `⊨` recursion steps spent along one branch.
    pub max_branch_sat_steps: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofTree {
    pub node: Node,
    /// `None` marks a leaf.
    pub rule: Option<Rule>,
    pub principal: Vec<SignedFormula>,
    pub children: Vec<ProofTree>,
}

impl ProofTree {
    pub fn leaf(node: Node) -> ProofTree {
        ProofTree { node, rule: None, principal: Vec::new(), children: Vec::new() }
    }

    pub fn is_leaf(&self) -> bool {
        self.rule.is_none()
    }

    /// The subtree at `path` (child indices from the root).
    pub fn at(&self, path: &[usize]) -> Option<&ProofTree> {
        path.iter().try_fold(self, |t, &i| t.children.get(i))
    }

    pub fn at_mut(&mut self, path: &[usize]) -> Option<&mut ProofTree> {
        path.iter().try_fold(self, |t, &i| t.children.get_mut(i))
    }

    /// Every node of the tree, preorder.
    pub fn nodes(&self) -> Vec<&ProofTree> {
        let mut out = vec![self];
        let mut i = 0;
        while i < out.len() {
            let t = out[i];
            out.extend(t.children.iter());
            i += 1;
        }
        out
    }
}

/// A closed proof table together with the calculus and flags it was built with.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Proof {
    pub calculus: Calculus,
    pub optimized: bool,
    pub sixopt: bool,
    pub tree: ProofTree,
}

impl Proof {
    /// The formula this proves, when the root is `{Fl A}` (D1) or `{F A}` (D3).
    pub fn goal(&self) -> Option<&Formula> {
        let wanted = match self.calculus {
            Calculus::D1 => Sign::Fl,
            Calculus::D3 => Sign::F,
        };
        let mut it = self.tree.node.iter();
        match (it.next(), it.next()) {
            (Some(sf), None) if sf.sign() == wanted => Some(sf.formula()),
            _ => None,
        }
    }
}

/// The failed branch of a search read as a chain, root first, with the
/// node each world was read from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounterModel {
    pub chain: KripkeChain,
    pub worlds: Vec<Node>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Proved(Proof),
    Refuted(CounterModel),
}

impl Outcome {
    pub fn is_proved(&self) -> bool {
        matches!(self, Outcome::Proved(_))
    }
}

/// The answer of a search that did not keep its proof.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Proved,
    Refuted(KripkeChain),
}

impl Verdict {
    pub fn is_proved(&self) -> bool {
        matches!(self, Verdict::Proved)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decision {
    pub outcome: Outcome,
    pub stats: SearchStats,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ProofMetrics {
    /// Nodes on the longest root-to-leaf path.
    pub depth: usize,
    pub node_count: usize,
    pub max_branching: usize,
    pub tbar_firings: usize,
}

pub fn metrics(tree: &ProofTree) -> ProofMetrics {
    let child: Vec<ProofMetrics> = tree.children.iter().map(metrics).collect();
    ProofMetrics {
        depth: 1 + child.iter().map(|m| m.depth).max().unwrap_or(0),
        node_count: 1 + child.iter().map(|m| m.node_count).sum::<usize>(),
        max_branching: child.iter().map(|m| m.max_branching).fold(tree.children.len(), usize::max),
        tbar_firings: usize::from(tree.rule == Some(Rule::Tbar))
            + child.iter().map(|m| m.tbar_firings).sum::<usize>(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DefectKind {
    #[error("leaf is not inconsistent")]
    OpenLeaf,
    #[error("leaf carries a principal or children")]
    MalformedLeaf,
    #[error(transparent)]
    Rule(#[from] RuleError),
    #[error("rule yields {expected} conclusions, the proof has {found}")]
    ChildCount { expected: usize, found: usize },
    #[error("child {index} differs from the conclusion of the rule")]
    ChildMismatch { index: usize },
}

/// The first problem found by [`check_proof`], with the path of child
/// indices leading to the offending node.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub struct Defect {
    pub path: Vec<usize>,
    pub kind: DefectKind,
}

impl fmt::Display for Defect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path: Vec<String> = self.path.iter().map(|i| i.to_string()).collect();
        write!(f, "at node /{}: {}", path.join("/"), self.kind)
    }
}

/// Replays every step of `proof`: leaves must be inconsistent and every
/// internal node's children must be exactly the conclusions of its rule.
pub fn check_proof(proof: &Proof) -> Result<(), Defect> {
    let mut path = Vec::new();
    check_tree(proof, &proof.tree, &mut path)
}

fn check_tree(proof: &Proof, tree: &ProofTree, path: &mut Vec<usize>) -> Result<(), Defect> {
    let defect = |path: &Vec<usize>, kind: DefectKind| Err(Defect { path: path.clone(), kind });
    let Some(rule) = tree.rule else {
        if !tree.principal.is_empty() || !tree.children.is_empty() {
            return defect(path, DefectKind::MalformedLeaf);
        }
        let closed = match proof.calculus {
            Calculus::D1 => {
                tree.node.iter().all(|sf| sf.sign().belongs_to(Calculus::D1))
                    && inconsistent_d1(&tree.node, proof.optimized)
            }
            Calculus::D3 => {
                tree.node.iter().all(|sf| sf.sign().belongs_to(Calculus::D3)) && inconsistent_d3(&tree.node)
            }
        };
        return if closed { Ok(()) } else { defect(path, DefectKind::OpenLeaf) };
    };
    let inst = RuleInstance { rule, principal: tree.principal.clone() };
    let expected = match proof.calculus {
        Calculus::D1 => expand_d1(&tree.node, &inst, proof.optimized),
        Calculus::D3 => expand_d3(&tree.node, &inst, proof.sixopt),
    };
    let expected = match expected {
        Ok(e) => e,
        Err(e) => return defect(path, e.into()),
    };
    if expected.len() != tree.children.len() {
        return defect(path, DefectKind::ChildCount { expected: expected.len(), found: tree.children.len() });
    }
    for (index, (want, child)) in expected.iter().zip(&tree.children).enumerate() {
        if *want != child.node {
            return defect(path, DefectKind::ChildMismatch { index });
        }
    }
    for (index, child) in tree.children.iter().enumerate() {
        path.push(index);
        check_tree(proof, child, path)?;
        path.pop();
    }
    Ok(())
}

#[derive(Debug, Error)]
pub enum SchemaError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad formula {text:?}: {source}")]
    Formula { text: String, source: ParseError },
    #[error("unknown sign {0:?}")]
    UnknownSign(String),
    #[error(transparent)]
    Sign(#[from] SignError),
    #[error("unknown rule {0:?}")]
    UnknownRule(String),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SignedRepr {
    sign: String,
    formula: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TreeRepr {
    node: Vec<SignedRepr>,
    rule: String,
    principal: Vec<SignedRepr>,
    children: Vec<TreeRepr>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProofRepr {
    calculus: Calculus,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    optimized: bool,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    sixopt: bool,
    node: Vec<SignedRepr>,
    rule: String,
    principal: Vec<SignedRepr>,
    children: Vec<TreeRepr>,
}

fn canonical(a: &SignedFormula, b: &SignedFormula) -> Ordering {
    (a.sign(), a.formula().size(), a.formula().render()).cmp(&(b.sign(), b.formula().size(), b.formula().render()))
}

fn signed_repr(sf: &SignedFormula) -> SignedRepr {
    SignedRepr { sign: sf.sign().token().to_string(), formula: sf.formula().render() }
}

fn tree_repr(tree: &ProofTree) -> TreeRepr {
    let mut node: Vec<&SignedFormula> = tree.node.iter().collect();
    node.sort_by(|a, b| canonical(a, b));
    TreeRepr {
        node: node.into_iter().map(signed_repr).collect(),
        rule: tree.rule.map_or("leaf", Rule::token).to_string(),
        principal: tree.principal.iter().map(signed_repr).collect(),
        children: tree.children.iter().map(tree_repr).collect(),
    }
}

fn signed_from(repr: &SignedRepr) -> Result<SignedFormula, SchemaError> {
    let sign = Sign::from_token(&repr.sign).ok_or_else(|| SchemaError::UnknownSign(repr.sign.clone()))?;
    let formula =
        parse(&repr.formula).map_err(|source| SchemaError::Formula { text: repr.formula.clone(), source })?;
    Ok(SignedFormula::new(sign, formula)?)
}

fn tree_from(repr: &TreeRepr) -> Result<ProofTree, SchemaError> {
    let rule = match repr.rule.as_str() {
        "leaf" => None,
        token => Some(Rule::from_token(token).ok_or_else(|| SchemaError::UnknownRule(token.to_string()))?),
    };
    Ok(ProofTree {
        node: repr.node.iter().map(signed_from).collect::<Result<_, _>>()?,
        rule,
        principal: repr.principal.iter().map(signed_from).collect::<Result<_, _>>()?,
        children: repr.children.iter().map(tree_from).collect::<Result<_, _>>()?,
    })
}

impl Proof {
    pub fn to_json(&self) -> String {
        let tree = tree_repr(&self.tree);
        let repr = ProofRepr {
            calculus: self.calculus,
            optimized: self.optimized,
            sixopt: self.sixopt,
            node: tree.node,
            rule: tree.rule,
            principal: tree.principal,
            children: tree.children,
        };
        serde_json::to_string(&repr).expect("proof serializes")
    }

    pub fn from_json(text: &str) -> Result<Proof, SchemaError> {
        let repr: ProofRepr = serde_json::from_str(text)?;
        let tree = tree_from(&TreeRepr {
            node: repr.node,
            rule: repr.rule,
            principal: repr.principal,
            children: repr.children,
        })?;
        Ok(Proof { calculus: repr.calculus, optimized: repr.optimized, sixopt: repr.sixopt, tree })
    }
}

impl KripkeChain {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("chain serializes")
    }

    pub fn from_json(text: &str) -> Result<KripkeChain, SchemaError> {
        Ok(serde_json::from_str(text)?)
    }
}
