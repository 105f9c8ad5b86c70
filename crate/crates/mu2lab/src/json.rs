//! Deterministic JSON documents for the command-line front end: the
//! classification table, the semilinear table, the cross-check report and
//! serialized Hopf presentations. Field order is fixed by the struct
//! definitions and every collection is a vector in a deterministic order,
//! so identical inputs render byte-identical output.

use crate::breuil_kisin::{BkAmbient, BkTriple, CrossCheckReport};
use crate::classify::ModelRecord;
use crate::dvr::{DvrElement, DvrRing};
use crate::error::Result;
use crate::group_scheme::{DPoly, Frac, HopfPresentation, HopfReport, ModelDescriptor};
use crate::special_fiber::FiberClass;
use serde::Serialize;

pub const SCHEMA: &str = "mu2lab/1";

#[derive(Clone, Debug, Serialize)]
pub struct ConfigDoc {
    pub p: u64,
    pub case: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eisenstein: Option<Vec<i64>>,
    pub precision: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_max: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<u32>,
    pub seed: u64,
}

pub fn config_doc(dvr: &DvrRing, eis: Option<Vec<i64>>, seed: u64) -> ConfigDoc {
    ConfigDoc {
        p: dvr.p(),
        case: if dvr.is_mixed() {
            "mixed".into()
        } else {
            "equal".into()
        },
        q: if dvr.is_mixed() {
            None
        } else {
            Some(dvr.residue_field().q())
        },
        e: dvr.val_p(),
        eisenstein: eis,
        precision: dvr.spec().n_prec,
        m_max: None,
        n_max: None,
        seed,
    }
}

/// Canonical coefficient vector of a ring element (mixed: coefficients mod
/// p^N ascending in pi-degree; equal: residue-field indices).
pub fn element_doc(x: &DvrElement) -> Vec<u64> {
    if let Some(v) = x.mixed_coeffs() {
        v.to_vec()
    } else {
        x.equal_coeffs()
            .unwrap()
            .iter()
            .map(|&c| c as u64)
            .collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TermDoc {
    pub exps: Vec<u16>,
    pub coeff: Vec<u64>,
}

pub fn poly_doc(f: &DPoly) -> Vec<TermDoc> {
    f.terms
        .iter()
        .filter(|(_, c)| !f.ring.0.is_zero(c))
        .map(|(m, c)| TermDoc {
            exps: m.clone(),
            coeff: element_doc(c),
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct FracDoc {
    pub num: Vec<TermDoc>,
    pub den_exponents: Vec<u32>,
}

fn frac_doc(f: &Frac) -> FracDoc {
    FracDoc {
        num: poly_doc(&f.num),
        den_exponents: f.den.clone(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PresentationDoc {
    pub generators: Vec<String>,
    pub relations: Vec<Vec<TermDoc>>,
    pub comultiplication: Vec<Vec<TermDoc>>,
    pub counit: Vec<Vec<u64>>,
    pub antipode: Vec<FracDoc>,
    pub inverted: Vec<Vec<TermDoc>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<u64>,
}

pub fn presentation_doc(h: &HopfPresentation) -> PresentationDoc {
    PresentationDoc {
        generators: h.gens.clone(),
        relations: h.relations.iter().map(poly_doc).collect(),
        comultiplication: h.comul.iter().map(poly_doc).collect(),
        counit: h.counit.iter().map(element_doc).collect(),
        antipode: h.antipode.iter().map(frac_doc).collect(),
        inverted: h.inverted.iter().map(poly_doc).collect(),
        rank: h.rank,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DescriptorDoc {
    pub m: u32,
    pub n: u32,
    pub a: Vec<u8>,
    pub j: u64,
}

pub fn descriptor_doc(dvr: &DvrRing, d: &ModelDescriptor) -> DescriptorDoc {
    DescriptorDoc {
        m: dvr.valuation(&d.mu).unwrap_or(dvr.cap()),
        n: dvr.valuation(&d.lam).unwrap_or(dvr.cap()),
        a: crate::classify::descriptor_a(d).digits,
        j: d.j,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ModelDoc {
    pub m: u32,
    pub n: u32,
    pub a: Vec<u8>,
    pub fiber: FiberClass,
}

#[derive(Clone, Debug, Serialize)]
pub struct CellDoc {
    pub m: u32,
    pub n: u32,
    pub count: u64,
    pub classes: Vec<ModelDoc>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EnumerateDoc {
    pub schema: &'static str,
    pub command: &'static str,
    pub config: ConfigDoc,
    pub cells: Vec<CellDoc>,
    pub total: u64,
}

pub fn enumerate_doc(
    dvr: &DvrRing,
    mut config: ConfigDoc,
    m_max: u32,
    n_max: u32,
    models: &[ModelRecord],
) -> Result<EnumerateDoc> {
    config.m_max = Some(m_max);
    config.n_max = Some(n_max);
    let mut cells = Vec::new();
    for (m, n) in crate::classify::admissible_cells(dvr, m_max, n_max) {
        if m < n {
            continue;
        }
        let classes: Result<Vec<ModelDoc>> = models
            .iter()
            .filter(|r| r.m == m && r.n == n)
            .map(|r| {
                Ok(ModelDoc {
                    m: r.m,
                    n: r.n,
                    a: r.a.digits.clone(),
                    fiber: crate::special_fiber::classify_fiber(dvr, &r.descriptor)?,
                })
            })
            .collect();
        let classes = classes?;
        cells.push(CellDoc {
            m,
            n,
            count: classes.len() as u64,
            classes,
        });
    }
    Ok(EnumerateDoc {
        schema: SCHEMA,
        command: "enumerate",
        config,
        total: models.len() as u64,
        cells,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BkCellDoc {
    pub m: u32,
    pub n: u32,
    pub count: u64,
    pub a_representatives: Vec<Vec<u8>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BkDoc {
    pub schema: &'static str,
    pub command: &'static str,
    pub config: ConfigDoc,
    pub cells: Vec<BkCellDoc>,
    pub total: u64,
}

pub fn bk_doc(amb: &BkAmbient, config: ConfigDoc, triples: &[BkTriple]) -> BkDoc {
    let bound = amb.e / (amb.p as u32 - 1);
    let mut cells = Vec::new();
    for m in 0..=bound {
        for n in 0..=m {
            let reps: Vec<Vec<u8>> = triples
                .iter()
                .filter(|t| t.m == m && t.n == n)
                .map(|t| t.a_reduced())
                .collect();
            cells.push(BkCellDoc {
                m,
                n,
                count: reps.len() as u64,
                a_representatives: reps,
            });
        }
    }
    BkDoc {
        schema: SCHEMA,
        command: "bk",
        config,
        total: triples.len() as u64,
        cells,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossDoc {
    pub schema: &'static str,
    pub command: &'static str,
    pub config: ConfigDoc,
    pub report: CrossCheckReport,
}

pub fn cross_doc(config: ConfigDoc, report: CrossCheckReport) -> CrossDoc {
    CrossDoc {
        schema: SCHEMA,
        command: "crosscheck",
        config,
        report,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HopfDoc {
    pub schema: &'static str,
    pub command: &'static str,
    pub config: ConfigDoc,
    pub descriptor: DescriptorDoc,
    pub presentation: PresentationDoc,
    pub report: HopfReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct IsoDoc {
    pub schema: &'static str,
    pub command: &'static str,
    pub config: ConfigDoc,
    pub d1: DescriptorDoc,
    pub d2: DescriptorDoc,
    pub isomorphic: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FiberDoc {
    pub schema: &'static str,
    pub command: &'static str,
    pub config: ConfigDoc,
    pub descriptor: DescriptorDoc,
    pub fiber: FiberClass,
    /// recorded change of variables of the oracle match (coefficients of h)
    pub shift: Vec<u8>,
}

/// Render any document deterministically (pretty JSON, trailing newline).
pub fn render<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("serialization cannot fail");
    s.push('\n');
    s
}
