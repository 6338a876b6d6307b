//! JSON encodings. Elements are little-endian coefficient arrays over `F_p`,
//! maps are `{"coeffs": [...]}` with one element per `x^{p^k}`.

use serde::Serialize;
use serde_json::Value;

use crate::constructions::{BruteForce, StrongBranch, StrongIsoCertificate, Thm45};
use crate::field::{Elem, FieldCtx};
use crate::isotopy::{IsotopismTriple, NucleiReport, Verdict};
use crate::linpoly::LinearizedMap;
use crate::presemifield::{Presemifield, SpreadSet};

/// Where a presemifield's field context lives inside a report.
pub const CTX_REF: &str = "#/field";

pub type ElemJson = Vec<u32>;

pub fn elem(ctx: &FieldCtx, a: Elem) -> ElemJson {
    ctx.coeffs(a)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FieldJson {
    pub p: u32,
    pub h: u32,
    pub ell: u32,
    pub d: Option<u32>,
    pub modulus: Vec<u32>,
    pub generator: ElemJson,
}

impl FieldJson {
    pub fn new(ctx: &FieldCtx) -> Self {
        FieldJson {
            p: ctx.p(),
            h: ctx.h(),
            ell: ctx.ell(),
            d: ctx.d(),
            modulus: ctx.modulus().to_vec(),
            generator: elem(ctx, ctx.generator()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MapJson {
    pub coeffs: Vec<ElemJson>,
}

impl MapJson {
    pub fn new(ctx: &FieldCtx, map: &LinearizedMap) -> Self {
        MapJson {
            coeffs: map.coeffs().iter().map(|&c| elem(ctx, c)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PresemifieldJson {
    pub ctx: String,
    /// `coeff[i][j]` multiplies `x^{p^i} y^{p^j}`
    pub coeff: Vec<Vec<ElemJson>>,
    pub label: String,
}

impl PresemifieldJson {
    pub fn new(s: &Presemifield) -> Self {
        let ctx = s.ctx();
        let n = s.n();
        PresemifieldJson {
            ctx: CTX_REF.to_string(),
            coeff: (0..n)
                .map(|i| (0..n).map(|j| elem(ctx, s.form().get(i, j))).collect())
                .collect(),
            label: s.label().to_string(),
        }
    }
}

/// The distinct maps of a spread set, sorted by coefficient indices.
pub fn spread_set(ctx: &FieldCtx, set: &SpreadSet) -> Vec<MapJson> {
    set.canonical().iter().map(|m| MapJson::new(ctx, m)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "family")]
pub enum FamilyDescriptor {
    #[serde(rename = "LMPTB")]
    Lmptb { q: u64, ell: u32 },
    #[serde(rename = "BHB")]
    Bhb {
        q: u64,
        ell: u32,
        d: u32,
        beta: ElemJson,
        /// `β = g^beta_index`
        beta_index: u64,
    },
}

impl FamilyDescriptor {
    pub fn lmptb(ctx: &FieldCtx) -> Self {
        FamilyDescriptor::Lmptb { q: ctx.q(), ell: ctx.ell() }
    }

    pub fn bhb(ctx: &FieldCtx, d: u32, beta: Elem) -> crate::Result<Self> {
        Ok(FamilyDescriptor::Bhb {
            q: ctx.q(),
            ell: ctx.ell(),
            d,
            beta: elem(ctx, beta),
            beta_index: ctx.log(beta)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<ElemJson>,
    pub y: ElemJson,
}

fn witness(ctx: &FieldCtx, v: &Verdict) -> Option<WitnessJson> {
    v.witness().map(|w| WitnessJson {
        x: w.x.map(|x| elem(ctx, x)),
        y: elem(ctx, w.y),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TripleJson {
    #[serde(rename = "M")]
    pub m: MapJson,
    #[serde(rename = "N")]
    pub n: MapJson,
    #[serde(rename = "L")]
    pub l: MapJson,
    pub source: String,
    pub target: String,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessJson>,
}

impl TripleJson {
    pub fn new(ctx: &FieldCtx, t: &IsotopismTriple) -> Self {
        TripleJson {
            m: MapJson::new(ctx, &t.m),
            n: MapJson::new(ctx, &t.n),
            l: MapJson::new(ctx, &t.l),
            source: t.source.clone(),
            target: t.target.clone(),
            status: t.status.as_str(),
            witness: witness(ctx, &t.status),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct NucleiJson {
    pub left: u64,
    pub middle: u64,
    pub right: u64,
}

impl From<NucleiReport> for NucleiJson {
    fn from(r: NucleiReport) -> Self {
        NucleiJson {
            left: r.left,
            middle: r.middle,
            right: r.right,
        }
    }
}

/// The data shared by both isotopisms between the two families.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsotopyDataJson {
    pub omega: ElemJson,
    pub beta_bar: ElemJson,
    pub xi: ElemJson,
    pub xi_solutions: usize,
    pub phi: MapJson,
    pub psi: MapJson,
    #[serde(rename = "H")]
    pub h: MapJson,
    pub h_identity: bool,
}

impl IsotopyDataJson {
    pub fn new(ctx: &FieldCtx, t: &Thm45) -> Self {
        IsotopyDataJson {
            omega: elem(ctx, t.omega),
            beta_bar: elem(ctx, t.beta_bar),
            xi: elem(ctx, t.xi.xi),
            xi_solutions: t.xi.solutions.len(),
            phi: MapJson::new(ctx, &t.maps.phi),
            psi: MapJson::new(ctx, &t.maps.psi),
            h: MapJson::new(ctx, &t.h),
            h_identity: t.h_identity,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquationJson {
    pub exponent: u64,
    pub rhs: ElemJson,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FlagsJson {
    pub no_solution: bool,
    pub per_coefficient: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrongDetailJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<ElemJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<ElemJson>,
    #[serde(rename = "G", skip_serializing_if = "Option::is_none")]
    pub g: Option<MapJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g_companion: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strong_check: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<ElemJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_in_fq2: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub psi_inv_is_delta_phi_bar: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub brute_force: Option<BruteForceJson>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BruteForceJson {
    pub candidates: u64,
    pub survivors: u64,
    pub found: u64,
}

impl From<BruteForce> for BruteForceJson {
    fn from(b: BruteForce) -> Self {
        BruteForceJson {
            candidates: b.candidates,
            survivors: b.survivors,
            found: b.found,
        }
    }
}

/// `H` is present when a strong isotopism exists, `equation` and `flags`
/// when the certificate records its absence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateJson {
    pub q: u64,
    pub ell: u32,
    pub verdict: &'static str,
    #[serde(rename = "H", skip_serializing_if = "Option::is_none")]
    pub h: Option<MapJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub equation: Option<EquationJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flags: Option<FlagsJson>,
    pub beta_bar: ElemJson,
    pub omega: ElemJson,
    pub xi: ElemJson,
    pub detail: StrongDetailJson,
}

impl CertificateJson {
    pub fn new(ctx: &FieldCtx, c: &StrongIsoCertificate) -> Self {
        let mut out = CertificateJson {
            q: c.q,
            ell: c.ell,
            verdict: if c.exists() { "exists" } else { "not-exists" },
            h: None,
            equation: None,
            flags: None,
            beta_bar: elem(ctx, c.beta_bar),
            omega: elem(ctx, c.omega),
            xi: elem(ctx, c.xi),
            detail: StrongDetailJson {
                rho: None,
                b: None,
                g: None,
                g_companion: None,
                strong_check: None,
                delta: None,
                delta_in_fq2: None,
                psi_inv_is_delta_phi_bar: None,
                brute_force: None,
            },
        };
        match &c.branch {
            StrongBranch::Exists(t) => {
                out.h = Some(MapJson::new(ctx, &t.h));
                out.detail.rho = Some(elem(ctx, t.rho));
                out.detail.b = Some(elem(ctx, t.b));
                out.detail.g = Some(MapJson::new(ctx, &t.g));
                out.detail.g_companion = Some(t.g_companion);
                out.detail.strong_check = Some(t.strong.as_str());
            }
            StrongBranch::NotExists(t) => {
                out.equation = Some(EquationJson {
                    exponent: t.exponent,
                    rhs: elem(ctx, t.rhs),
                });
                out.flags = Some(FlagsJson {
                    no_solution: t.no_solution,
                    per_coefficient: t.per_coefficient,
                });
                out.detail.delta = Some(elem(ctx, t.delta));
                out.detail.delta_in_fq2 = Some(t.delta_in_fq2);
                out.detail.psi_inv_is_delta_phi_bar = Some(t.psi_inv_is_delta_phi_bar);
                out.detail.brute_force = t.brute_force.map(Into::into);
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Timing {
    pub wall_seconds: f64,
}

/// Top-level document printed by every command.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: Vec<String>,
    pub field: Option<FieldJson>,
    pub families: Vec<FamilyDescriptor>,
    pub results: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl RunReport {
    pub fn new(command: Vec<String>) -> Self {
        RunReport {
            tool: "semifield-forge",
            version: crate::VERSION,
            command,
            field: None,
            families: Vec::new(),
            results: Value::Object(Default::default()),
            timing: None,
        }
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::field::TowerParams;
    use serde_json::json;
    use std::sync::Arc;

    fn ctx33() -> Arc<FieldCtx> {
        Arc::new(FieldCtx::new(TowerParams::new(3, 1, 3), None).unwrap())
    }

    #[test]
    fn elements_are_little_endian() {
        let c = ctx33();
        // 1 + 2·3 + 1·9 = 16
        assert_eq!(elem(&c, c.elem(16)), vec![1, 2, 1, 0, 0, 0]);
        let f = FieldJson::new(&c);
        assert_eq!(f.modulus.len(), 7);
        assert_eq!(f.modulus[6], 1);
        assert_eq!(c.from_coeffs(&f.generator).unwrap(), c.generator());
    }

    #[test]
    fn family_descriptors() {
        let c = ctx33();
        let v = serde_json::to_value(FamilyDescriptor::lmptb(&c)).unwrap();
        assert_eq!(v, json!({"family": "LMPTB", "q": 3, "ell": 3}));
        let beta = families::beta_from_index(&c, 5);
        let v = serde_json::to_value(FamilyDescriptor::bhb(&c, 2, beta).unwrap()).unwrap();
        assert_eq!(v["family"], "BHB");
        assert_eq!(v["d"], 2);
        assert_eq!(v["beta_index"], 5);
        assert_eq!(v["beta"], json!(c.coeffs(beta)));
    }

    #[test]
    fn triple_omits_absent_witness() {
        let c = ctx33();
        let t = IsotopismTriple::identity(c.n());
        let v = serde_json::to_value(TripleJson::new(&c, &t)).unwrap();
        assert_eq!(v["status"], "unverified");
        assert!(v.get("witness").is_none());
        assert_eq!(v["M"]["coeffs"][0], json!([1, 0, 0, 0, 0, 0]));
        assert_eq!(v["L"]["coeffs"][1], json!([0, 0, 0, 0, 0, 0]));
    }

    #[test]
    fn presemifield_shape() {
        let c = ctx33();
        let p = families::lmptb(&c).unwrap();
        let v = serde_json::to_value(PresemifieldJson::new(&p)).unwrap();
        assert_eq!(v["ctx"], CTX_REF);
        assert_eq!(v["coeff"].as_array().unwrap().len(), 6);
        assert_eq!(v["coeff"][0].as_array().unwrap().len(), 6);
        assert_eq!(v["label"], p.label());
    }

    #[test]
    fn report_is_stable() {
        let c = ctx33();
        let mut r = RunReport::new(vec!["construct".into()]);
        r.field = Some(FieldJson::new(&c));
        let a = r.to_json_pretty();
        assert_eq!(a, r.clone().to_json_pretty());
        assert!(!a.contains("timing"));
    }
}
