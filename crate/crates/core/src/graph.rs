//! The degeneration graph: catalog nodes with invariant profiles, edges
//! backed by verified certificates or trivial scalings, blocks from the
//! pairwise necessary-condition tests, transitive saturation and the
//! component-candidate report.

use std::collections::BTreeSet;
use std::fmt;

use serde_json::{json, Value};

use crate::algebra::Algebra;
use crate::catalog::Catalog;
use crate::degeneration::{
    check_necessary_conditions, family_closure_dimension_estimate, verify_certificate,
    BlockReason, Certificate, ClosureEstimate, NecessaryVerdict, Verdict, VerifyMode,
    VerifyOptions,
};
use crate::error::Error;
use crate::invariants::{invariant_profile, InvariantProfile, ProfileMode};
use crate::Result;

#[derive(Clone, Debug)]
pub struct NodeInfo {
    pub name: String,
    pub algebra: Algebra,
    pub profile: InvariantProfile,
    pub closure: ClosureEstimate,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum EdgeEvidence {
    Certificate(String),
    TrivialScaling,
    /// Derived by transitivity through the named intermediate node.
    Transitive { via: String },
}

impl fmt::Display for EdgeEvidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeEvidence::Certificate(name) => write!(f, "certificate {name}"),
            EdgeEvidence::TrivialScaling => write!(f, "trivial scaling"),
            EdgeEvidence::Transitive { via } => write!(f, "transitive via {via}"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Edge {
    pub source: String,
    pub target: String,
    pub evidence: EdgeEvidence,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Block {
    pub source: String,
    pub target: String,
    pub reasons: Vec<BlockReason>,
}

#[derive(Clone, Debug)]
pub struct DegenerationGraph {
    pub nodes: Vec<NodeInfo>,
    pub edges: Vec<Edge>,
    pub blocks: Vec<Block>,
}

#[derive(Clone, Debug)]
pub struct GraphOptions {
    pub samples: usize,
    pub seed: Option<u64>,
}

impl Default for GraphOptions {
    fn default() -> Self {
        GraphOptions {
            samples: 5,
            seed: None,
        }
    }
}

impl DegenerationGraph {
    pub fn node(&self, name: &str) -> Option<&NodeInfo> {
        self.nodes.iter().find(|n| n.name == name)
    }

    pub fn has_edge(&self, source: &str, target: &str) -> bool {
        self.edges
            .iter()
            .any(|e| e.source == source && e.target == target)
    }

    pub fn has_block(&self, source: &str, target: &str) -> bool {
        self.blocks
            .iter()
            .any(|b| b.source == source && b.target == target)
    }
}

/// Build the graph: one node per catalog entry, edges from verified
/// certificates plus automatic trivial scalings onto the zero algebra,
/// blocks from the pairwise paper-mode necessary conditions. A rejected
/// certificate aborts with its witness. Certificates mentioning radicals
/// are verified in sampled mode, everything else symbolically.
pub fn build_graph(
    catalog: &Catalog,
    certificates: &[Certificate],
    opts: &GraphOptions,
) -> Result<DegenerationGraph> {
    let mut nodes = Vec::new();
    for a in catalog.iter() {
        nodes.push(NodeInfo {
            name: a.name().to_owned(),
            algebra: a.clone(),
            profile: invariant_profile(a, ProfileMode::Extended),
            closure: family_closure_dimension_estimate(a, opts.samples, opts.seed)?,
        });
    }

    let mut edges: Vec<Edge> = Vec::new();
    for cert in certificates {
        let src = catalog
            .get(cert.source.name())
            .ok_or_else(|| Error::UnknownAlgebra(cert.source.name().to_owned()))?;
        let tgt = catalog
            .get(cert.target.name())
            .ok_or_else(|| Error::UnknownAlgebra(cert.target.name().to_owned()))?;
        if !src.structurally_equal(&cert.source) {
            return Err(Error::CertificateInvalid(format!(
                "certificate {} redefines catalog algebra {}",
                cert.name,
                src.name()
            )));
        }
        if !tgt.structurally_equal(&cert.target) || tgt.params() != cert.target.params() {
            return Err(Error::CertificateInvalid(format!(
                "certificate {} must target the full catalog entry {}",
                cert.name,
                tgt.name()
            )));
        }
        let mode = if cert.radicals().is_empty() {
            VerifyMode::Exact
        } else {
            VerifyMode::Sampled
        };
        let vopts = VerifyOptions {
            mode,
            samples: opts.samples,
            seed: opts.seed,
            ..VerifyOptions::default()
        };
        match verify_certificate(cert, &vopts)? {
            Verdict::Accepted { .. } => {
                if cert.source.name() != cert.target.name()
                    && !edges
                        .iter()
                        .any(|e| e.source == cert.source.name() && e.target == cert.target.name())
                {
                    edges.push(Edge {
                        source: cert.source.name().to_owned(),
                        target: cert.target.name().to_owned(),
                        evidence: EdgeEvidence::Certificate(cert.name.clone()),
                    });
                }
            }
            Verdict::Rejected { rejection } => {
                return Err(Error::CertificateRejected {
                    name: cert.name.clone(),
                    rejection: rejection.to_string(),
                });
            }
        }
    }

    // automatic trivial scalings onto the zero algebra of matching dimension
    for a in catalog.iter() {
        let zero_name = catalog
            .iter()
            .find(|z| {
                z.dim() == a.dim()
                    && z.params().is_empty()
                    && z.constants().iter().all(|c| c.is_zero())
            })
            .map(|z| z.name().to_owned());
        if let Some(zero_name) = zero_name {
            if zero_name != a.name() && !edges.iter().any(|e| e.source == a.name() && e.target == zero_name)
            {
                edges.push(Edge {
                    source: a.name().to_owned(),
                    target: zero_name,
                    evidence: EdgeEvidence::TrivialScaling,
                });
            }
        }
    }

    // pairwise necessary conditions in paper mode
    let mut blocks = Vec::new();
    for a in catalog.iter() {
        for b in catalog.iter() {
            if a.name() == b.name() || a.dim() != b.dim() {
                continue;
            }
            if let NecessaryVerdict::Blocked { reasons } =
                check_necessary_conditions(a, b, ProfileMode::Paper)?
            {
                blocks.push(Block {
                    source: a.name().to_owned(),
                    target: b.name().to_owned(),
                    reasons,
                });
            }
        }
    }

    let g = DegenerationGraph {
        nodes,
        edges,
        blocks,
    };
    check_consistency(&g)?;
    Ok(g)
}

fn check_consistency(g: &DegenerationGraph) -> Result<()> {
    let mut conflicts = Vec::new();
    for e in &g.edges {
        if g.has_block(&e.source, &e.target) {
            conflicts.push(format!("{} -> {} ({})", e.source, e.target, e.evidence));
        }
    }
    if conflicts.is_empty() {
        Ok(())
    } else {
        Err(Error::GraphInconsistent(format!(
            "edges contradict recorded blocks: {}",
            conflicts.join(", ")
        )))
    }
}

/// Transitive closure of the edge set. Derived edges cite the intermediate
/// node; a derived edge that lands on a recorded block is a hard
/// inconsistency. Idempotent and monotone.
pub fn saturate(g: &DegenerationGraph) -> Result<DegenerationGraph> {
    let mut out = g.clone();
    loop {
        let mut added = false;
        let snapshot = out.edges.clone();
        for e1 in &snapshot {
            for e2 in &snapshot {
                if e1.target != e2.source {
                    continue;
                }
                let (a, c) = (&e1.source, &e2.target);
                if a == c || out.has_edge(a, c) {
                    continue;
                }
                out.edges.push(Edge {
                    source: a.clone(),
                    target: c.clone(),
                    evidence: EdgeEvidence::Transitive {
                        via: e1.target.clone(),
                    },
                });
                added = true;
            }
        }
        if !added {
            break;
        }
    }
    check_consistency(&out)?;
    Ok(out)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ComponentCandidate {
    pub name: String,
    pub closure_dim: usize,
    pub family: bool,
    /// Nodes reachable from the candidate along edges.
    pub dominates: Vec<String>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ComponentsReport {
    pub candidates: Vec<ComponentCandidate>,
}

/// Caveat attached to every components report.
pub const COMPONENT_WARNING: &str = "absence of an edge is not proof of non-degeneration \
unless a block is recorded; candidates assume the catalog is complete";

/// Component candidates of a saturated graph: nodes not reachable from any
/// other node, each with its closure-dimension estimate and the set of
/// nodes it dominates.
pub fn components_report(g: &DegenerationGraph) -> ComponentsReport {
    let mut candidates = Vec::new();
    for n in &g.nodes {
        let reachable_from_other = g
            .edges
            .iter()
            .any(|e| e.target == n.name && e.source != n.name);
        if reachable_from_other {
            continue;
        }
        let mut dominates: Vec<String> = g
            .edges
            .iter()
            .filter(|e| e.source == n.name)
            .map(|e| e.target.clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        dominates.retain(|m| m != &n.name);
        candidates.push(ComponentCandidate {
            name: n.name.clone(),
            closure_dim: n.closure.dim,
            family: n.algebra.is_family(),
            dominates,
        });
    }
    ComponentsReport { candidates }
}

/// JSON report with top-level keys `nodes`, `edges`, `blocks`, `components`.
pub fn graph_to_json(g: &DegenerationGraph, report: &ComponentsReport) -> Value {
    let nodes: Vec<Value> = g
        .nodes
        .iter()
        .map(|n| {
            let ext = n.profile.extended.as_ref();
            json!({
                "name": n.name,
                "dim": n.algebra.dim(),
                "params": n.algebra.params().iter().map(|p| p.name()).collect::<Vec<_>>(),
                "family": n.algebra.is_family(),
                "profile": {
                    "square_dim": n.profile.square_dim,
                    "der_dim": n.profile.der_dim,
                    "orbit_dim": n.profile.orbit_dim,
                    "power_dims": ext.map(|e| e.power_dims.clone()),
                    "nilpotent": ext.map(|e| e.nilpotent),
                    "two_step": ext.map(|e| e.two_step),
                    "annihilator_dim": ext.map(|e| e.annihilator_dim),
                },
                "closure_dim_estimate": n.closure.dim,
                "closure": {
                    "param_count": n.closure.param_count,
                    "orbit_dims": n.closure.orbit_dims,
                    "constant": n.closure.constant,
                },
            })
        })
        .collect();
    let edges: Vec<Value> = g
        .edges
        .iter()
        .map(|e| match &e.evidence {
            EdgeEvidence::Certificate(name) => json!({
                "source": e.source, "target": e.target,
                "evidence": "certificate", "certificate": name,
            }),
            EdgeEvidence::TrivialScaling => json!({
                "source": e.source, "target": e.target,
                "evidence": "trivial-scaling",
            }),
            EdgeEvidence::Transitive { via } => json!({
                "source": e.source, "target": e.target,
                "evidence": "transitive", "via": via,
            }),
        })
        .collect();
    let blocks: Vec<Value> = g
        .blocks
        .iter()
        .map(|b| {
            json!({
                "source": b.source,
                "target": b.target,
                "reasons": b.reasons.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
            })
        })
        .collect();
    let components: Vec<Value> = report
        .candidates
        .iter()
        .map(|c| {
            json!({
                "candidate": c.name,
                "closure_dim_estimate": c.closure_dim,
                "family": c.family,
                "dominates": c.dominates,
            })
        })
        .collect();
    json!({
        "nodes": nodes,
        "edges": edges,
        "blocks": blocks,
        "components": components,
        "warning": COMPONENT_WARNING,
    })
}

fn dot_escape(s: &str) -> String {
    s.replace('"', "\\\"")
}

/// DOT export: solid edges are backed by certificates (trivial scalings
/// included), dashed edges are transitive, blocks are red dotted arrows
/// labeled with their reasons.
pub fn graph_to_dot(g: &DegenerationGraph) -> String {
    let mut out = String::from("digraph degenerations {\n");
    for n in &g.nodes {
        let label = format!(
            "{}\\nsq={} der={} orbit={}\\nclosure<={}",
            n.name, n.profile.square_dim, n.profile.der_dim, n.profile.orbit_dim, n.closure.dim
        );
        out.push_str(&format!(
            "    \"{}\" [label=\"{}\"];\n",
            dot_escape(&n.name),
            label
        ));
    }
    for e in &g.edges {
        let (style, label) = match &e.evidence {
            EdgeEvidence::Certificate(name) => ("solid", name.clone()),
            EdgeEvidence::TrivialScaling => ("solid", "scaling".to_owned()),
            EdgeEvidence::Transitive { via } => ("dashed", format!("via {via}")),
        };
        out.push_str(&format!(
            "    \"{}\" -> \"{}\" [style={}, label=\"{}\"];\n",
            dot_escape(&e.source),
            dot_escape(&e.target),
            style,
            dot_escape(&label)
        ));
    }
    for b in &g.blocks {
        let reasons: Vec<String> = b.reasons.iter().map(|r| r.to_string()).collect();
        out.push_str(&format!(
            "    \"{}\" -> \"{}\" [color=red, style=dotted, label=\"{}\"];\n",
            dot_escape(&b.source),
            dot_escape(&b.target),
            dot_escape(&reasons.join("; "))
        ));
    }
    out.push_str("}\n");
    out
}
