//! Report value shared by the text and machine renderings.

use std::fmt::Write as _;

use serde::Serialize;

use morse_orbit::engine::verify::CheckOutcome;
use morse_orbit::engine::{AnalysisResult, Certification};
use morse_orbit::groups::{EtaKind, EtaLocator};
use morse_orbit::model::{PieceKind, ProblemInstance, Target};
use morse_orbit::oracle::{OracleReport, OracleVerdict};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub instance: InstanceSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub analysis: Option<AnalysisReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerificationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<Vec<OraclePiece>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct InstanceSummary {
    pub file: String,
    pub genus: u32,
    pub boundary: u32,
    pub orientable: bool,
    pub target: String,
    pub pieces: usize,
    pub vertices: usize,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PieceReport {
    pub index: usize,
    pub kind: String,
    pub vertices: usize,
    pub source: String,
    pub target: String,
    pub p: usize,
    pub eta: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupReport {
    pub expression: String,
    pub name: String,
    pub order: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct MapReport {
    pub element: String,
    pub perm: Vec<usize>,
    pub trans: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FreenessReport {
    pub status: String,
    pub checked: Option<usize>,
    pub cap: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct HomologyReport {
    pub rank: usize,
    pub torsion: Vec<String>,
    pub display: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerdictReport {
    pub is_torus: bool,
    pub homotopy_type: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub pieces: Vec<PieceReport>,
    pub source: String,
    pub group: GroupReport,
    pub p: usize,
    pub action_generators: Vec<MapReport>,
    pub freeness: FreenessReport,
    pub pi1: Option<String>,
    pub h1: Option<HomologyReport>,
    pub verdict: VerdictReport,
    pub generic: bool,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub passed: bool,
    pub checks: Vec<CheckReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OraclePiece {
    pub piece: usize,
    pub verdict: String,
    pub automorphisms: u64,
    pub engine_order: u64,
    pub histogram: Vec<(u64, usize)>,
    pub abelianization: Vec<u64>,
    pub reasons: Vec<String>,
}

fn kind_name(kind: PieceKind) -> &'static str {
    match kind {
        PieceKind::Disk => "disk",
        PieceKind::Cylinder => "cylinder",
    }
}

fn eta_name(eta: &EtaLocator) -> String {
    let kind = match eta.kind {
        EtaKind::FreeFactor => "free factor",
        EtaKind::WreathShift => "wreath shift",
    };
    match eta.component {
        Some(c) => format!("{kind} in component {c}"),
        None => kind.to_string(),
    }
}

impl InstanceSummary {
    pub fn new(file: &str, instance: &ProblemInstance) -> Self {
        let s = &instance.surface;
        InstanceSummary {
            file: file.to_string(),
            genus: s.genus,
            boundary: s.boundary_count,
            orientable: s.orientable,
            target: match s.target {
                Target::Line => "line",
                Target::Circle => "circle",
            }
            .to_string(),
            pieces: instance.pieces.len(),
            vertices: instance.pieces.iter().map(|t| t.vertices().len()).sum(),
            warnings: instance.warnings.clone(),
        }
    }
}

impl AnalysisReport {
    pub fn new(instance: &ProblemInstance, a: &AnalysisResult, generators: Vec<MapReport>) -> Self {
        let pieces = instance
            .pieces
            .iter()
            .zip(&a.pieces)
            .enumerate()
            .map(|(index, (tree, r))| PieceReport {
                index,
                kind: kind_name(tree.kind()).to_string(),
                vertices: tree.vertices().len(),
                source: r.source.to_string(),
                target: r.target.to_string(),
                p: r.p,
                eta: r.eta.as_ref().map(eta_name),
            })
            .collect();
        let freeness = match &a.certification {
            Certification::Certified { checked } => {
                FreenessReport { status: "certified".into(), checked: Some(*checked), cap: None }
            }
            Certification::Skipped { cap, .. } => {
                FreenessReport { status: "skipped".into(), checked: None, cap: Some(*cap) }
            }
        };
        AnalysisReport {
            pieces,
            source: a.source.to_string(),
            group: GroupReport { expression: a.target.to_string(), name: a.target.pretty(), order: a.order.to_string() },
            p: a.p,
            action_generators: generators,
            freeness,
            pi1: a
                .crystal
                .as_ref()
                .map(|c| format!("extension of Z^{} by a group of order {}", c.dim(), c.order())),
            h1: a.h1.as_ref().map(|h| HomologyReport {
                rank: h.rank,
                torsion: h.torsion.iter().map(ToString::to_string).collect(),
                display: h.to_string(),
            }),
            verdict: VerdictReport { is_torus: a.verdict.is_torus, homotopy_type: a.verdict.description.clone() },
            generic: a.generic,
            notes: a.notes.clone(),
        }
    }

    /// `G ≅ Z_2, p = 1, H1 = Z, homotopy type: T^1/Z_2 ≃ S^1`
    pub fn headline(&self) -> String {
        let h1 = self.h1.as_ref().map_or("not computed".to_string(), |h| h.display.clone());
        format!(
            "G ≅ {}, p = {}, H1 = {h1}, homotopy type: {}",
            self.group.name, self.p, self.verdict.homotopy_type
        )
    }
}

impl VerificationReport {
    pub fn new(checks: &[CheckOutcome]) -> Self {
        VerificationReport {
            passed: checks.iter().all(|c| c.passed),
            checks: checks
                .iter()
                .map(|c| CheckReport { name: c.name.to_string(), passed: c.passed, detail: c.detail.clone() })
                .collect(),
        }
    }
}

impl OraclePiece {
    pub fn new(piece: usize, report: &OracleReport) -> Self {
        let (verdict, reasons) = match &report.verdict {
            OracleVerdict::Match => ("MATCH", Vec::new()),
            OracleVerdict::Mismatch(r) => ("MISMATCH", r.clone()),
        };
        OraclePiece {
            piece,
            verdict: verdict.to_string(),
            automorphisms: report.oracle.order,
            engine_order: report.engine.order,
            histogram: report.oracle.histogram.iter().map(|(k, v)| (*k, *v)).collect(),
            abelianization: report.oracle.abelianization.clone(),
            reasons,
        }
    }
}

impl Report {
    pub fn to_machine(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let i = &self.instance;
        let _ = writeln!(
            out,
            "instance: {} (genus {}, {} boundary, {}, target {}; pieces {}, vertices {})",
            i.file,
            i.genus,
            i.boundary,
            if i.orientable { "orientable" } else { "non-orientable" },
            i.target,
            i.pieces,
            i.vertices
        );
        if let Some(a) = &self.analysis {
            let _ = writeln!(out, "{}", a.headline());
            for p in &a.pieces {
                let eta = p.eta.as_deref().unwrap_or("none");
                let _ = writeln!(
                    out,
                    "  piece {} ({}, {} vertices): source {}, target {}, p = {}, eta: {eta}",
                    p.index, p.kind, p.vertices, p.source, p.target, p.p
                );
            }
            let _ = writeln!(out, "group: {} of order {}", a.group.expression, a.group.order);
            let _ = writeln!(out, "source: {}", a.source);
            if !a.action_generators.is_empty() {
                let _ = writeln!(out, "action generators:");
                for g in &a.action_generators {
                    let perm: Vec<String> = g.perm.iter().map(ToString::to_string).collect();
                    let _ =
                        writeln!(out, "  {}: perm=[{}] trans=[{}]", g.element, perm.join(","), g.trans.join(","));
                }
            }
            match (a.freeness.checked, a.freeness.cap) {
                (Some(n), _) => {
                    let _ = writeln!(out, "freeness: certified, {n} non-identity elements checked");
                }
                (_, cap) => {
                    let _ = writeln!(out, "freeness: SKIPPED, |G| exceeds the cap {}", cap.unwrap_or_default());
                }
            }
            if let Some(pi1) = &a.pi1 {
                let _ = writeln!(out, "pi1: {pi1}");
            }
            let _ = writeln!(out, "generic: {}", if a.generic { "yes" } else { "no" });
            for n in &a.notes {
                let _ = writeln!(out, "note: {n}");
            }
        }
        if let Some(v) = &self.verification {
            let _ = writeln!(out, "verification: {}", if v.passed { "PASS" } else { "FAIL" });
            for c in &v.checks {
                let _ = writeln!(out, "  [{}] {}: {}", if c.passed { "ok" } else { "FAIL" }, c.name, c.detail);
            }
        }
        if let Some(pieces) = &self.oracle {
            for p in pieces {
                let hist: Vec<String> = p.histogram.iter().map(|(o, n)| format!("{o}:{n}")).collect();
                let _ = writeln!(
                    out,
                    "oracle piece {}: {} ({} automorphisms, engine order {}, orders {{{}}}, abelianization {:?})",
                    p.piece,
                    p.verdict,
                    p.automorphisms,
                    p.engine_order,
                    hist.join(", "),
                    p.abelianization
                );
                for r in &p.reasons {
                    let _ = writeln!(out, "  {r}");
                }
            }
        }
        out
    }
}
