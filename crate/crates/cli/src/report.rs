//! Serializable report shapes. Field names are part of the output format.

use std::fmt::Write as _;

use qlab::identities::{IdentityReport, RelationResult};
use qlab::radial::{DecomposedReport, RadialReport};
use qlab::{BigComplex, Cyclo};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexOut {
    pub re: String,
    pub im: String,
}

impl ComplexOut {
    pub fn new(z: &BigComplex, digits: usize) -> Self {
        ComplexOut { re: z.re_string(digits), im: z.im_string(digits) }
    }
}

/// An exact cyclotomic number: power-basis coefficients in `Q(ζ_order)`,
/// a readable form, and its decimal embedding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycloOut {
    pub order: u64,
    pub coefficients: Vec<String>,
    pub exact: String,
    pub re: String,
    pub im: String,
}

impl CycloOut {
    pub fn new(c: &Cyclo, digits: usize) -> Self {
        let z = c.embed(digits + 5);
        CycloOut {
            order: c.order(),
            coefficients: c.coeffs().iter().map(|r| r.to_string()).collect(),
            exact: c.to_string(),
            re: z.re_string(digits),
            im: z.im_string(digits),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MismatchOut {
    pub n: usize,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityOut {
    pub identity: String,
    pub order: usize,
    pub w: Option<String>,
    pub status: String,
    pub first_mismatch: Option<MismatchOut>,
}

impl From<&IdentityReport> for IdentityOut {
    fn from(r: &IdentityReport) -> Self {
        IdentityOut {
            identity: r.identity.name().to_string(),
            order: r.order,
            w: r.w.as_ref().map(|w| w.to_string()),
            status: if r.passed() { "pass" } else { "fail" }.to_string(),
            first_mismatch: r.first_mismatch.as_ref().map(|m| MismatchOut {
                n: m.n,
                lhs: m.lhs.clone(),
                rhs: m.rhs.clone(),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoeffsOut {
    pub series: String,
    pub order: usize,
    pub coefficients: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitOut {
    pub quantity: String,
    pub value: CycloOut,
    pub theta_multiplier: Option<CycloOut>,
    pub collapsing_residue: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleOut {
    pub t: u32,
    pub r: String,
    pub re: String,
    pub im: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialOut {
    pub label: String,
    pub samples: Vec<SampleOut>,
    /// Radii whose samples exceeded the precision cap.
    pub skipped: Vec<u32>,
    pub extrapolated: ComplexOut,
    pub error_estimate: f64,
    pub exact_target: Option<CycloOut>,
    pub agreement: Option<f64>,
    pub tolerance: f64,
    pub status: String,
}

impl RadialOut {
    pub fn new(r: &RadialReport, tolerance: f64) -> Self {
        let d = r.digits;
        RadialOut {
            label: r.label.clone(),
            samples: r
                .samples
                .iter()
                .map(|s| SampleOut {
                    t: s.t,
                    r: s.r.re_string(d),
                    re: s.value.re_string(d),
                    im: s.value.im_string(d),
                })
                .collect(),
            skipped: r.skipped.iter().map(|s| s.t).collect(),
            extrapolated: ComplexOut::new(&r.extrapolated, d),
            error_estimate: r.error_estimate,
            exact_target: r.exact_target.as_ref().map(|c| CycloOut::new(c, d)),
            agreement: r.agreement,
            tolerance,
            status: if r.within(tolerance) { "pass" } else { "fail" }.to_string(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == "pass"
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecomposedSampleOut {
    pub t: u32,
    pub r: String,
    pub prefactor_log10: f64,
    pub tr_sum: ComplexOut,
    pub u: ComplexOut,
    pub u_distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecomposedOut {
    pub k: u64,
    pub u_exact: CycloOut,
    pub parts: Vec<DecomposedSampleOut>,
    pub prefactor_decreasing: bool,
    pub tr_bounded: bool,
    pub u_distance_decreasing: bool,
    /// The recombined difference `-4u + c·(-q;q)²·TR`.
    pub composed: RadialOut,
    pub status: String,
}

impl DecomposedOut {
    pub fn new(r: &DecomposedReport, tolerance: f64) -> Self {
        let d = r.composed.digits;
        let composed = RadialOut::new(&r.composed, tolerance);
        let ok = r.prefactor_decreasing() && r.tr_bounded() && r.u_distance_decreasing() && composed.passed();
        DecomposedOut {
            k: r.k,
            u_exact: CycloOut::new(&r.u_target, d),
            parts: r
                .samples
                .iter()
                .map(|s| DecomposedSampleOut {
                    t: s.t,
                    r: s.r.re_string(d),
                    prefactor_log10: s.prefactor_log10,
                    tr_sum: ComplexOut::new(&s.tr_sum, d),
                    u: ComplexOut::new(&s.u_value, d),
                    u_distance: s.u_distance,
                })
                .collect(),
            prefactor_decreasing: r.prefactor_decreasing(),
            tr_bounded: r.tr_bounded(),
            u_distance_decreasing: r.u_distance_decreasing(),
            composed,
            status: if ok { "pass" } else { "fail" }.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonomialOut {
    pub q_power: u32,
    pub r_power: u32,
    pub coefficient: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationOut {
    pub weight: u32,
    pub found: bool,
    pub normalizing_constant: Option<String>,
    pub monomials: Vec<MonomialOut>,
    pub verified_order: usize,
    pub rank: usize,
    pub unknowns: usize,
}

impl From<&RelationResult> for RelationOut {
    fn from(r: &RelationResult) -> Self {
        RelationOut {
            weight: r.weight,
            found: r.found,
            normalizing_constant: r.normalizing_constant.as_ref().map(|c| c.to_string()),
            monomials: r
                .monomials
                .iter()
                .map(|(i, j, c)| MonomialOut { q_power: *i, r_power: *j, coefficient: c.to_string() })
                .collect(),
            verified_order: r.verified_order,
            rank: r.rank,
            unknowns: r.unknowns,
        }
    }
}

fn csv_string(f: impl FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>) -> std::io::Result<String> {
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    f(&mut w).map_err(std::io::Error::other)?;
    let bytes = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
    String::from_utf8(bytes).map_err(std::io::Error::other)
}

/// Text and CSV renderings; JSON goes through serde.
pub trait Render: Serialize {
    fn text(&self) -> String;
    fn csv(&self) -> std::io::Result<String>;
}

impl Render for Vec<IdentityOut> {
    fn text(&self) -> String {
        let mut s = String::new();
        for r in self {
            let w = r.w.as_deref().map(|w| format!(" w={w}")).unwrap_or_default();
            let _ = match &r.first_mismatch {
                None => writeln!(s, "{}{} order={} pass", r.identity, w, r.order),
                Some(m) => writeln!(
                    s,
                    "{}{} order={} FAIL at n={}: lhs={} rhs={}",
                    r.identity, w, r.order, m.n, m.lhs, m.rhs
                ),
            };
        }
        let passed = self.iter().filter(|r| r.status == "pass").count();
        let _ = writeln!(s, "{passed}/{} passed", self.len());
        s
    }

    fn csv(&self) -> std::io::Result<String> {
        csv_string(|w| {
            w.write_record(["identity", "order", "w", "status", "n", "lhs", "rhs"])?;
            for r in self {
                let (n, l, rh) = match &r.first_mismatch {
                    Some(m) => (m.n.to_string(), m.lhs.clone(), m.rhs.clone()),
                    None => Default::default(),
                };
                w.write_record([
                    r.identity.as_str(),
                    &r.order.to_string(),
                    r.w.as_deref().unwrap_or(""),
                    &r.status,
                    &n,
                    &l,
                    &rh,
                ])?;
            }
            Ok(())
        })
    }
}

impl Render for CoeffsOut {
    fn text(&self) -> String {
        let mut s = format!("{} to order {}\n", self.series, self.order);
        for (n, c) in self.coefficients.iter().enumerate() {
            let _ = writeln!(s, "{n}: {c}");
        }
        s
    }

    fn csv(&self) -> std::io::Result<String> {
        csv_string(|w| {
            w.write_record(["n", "coefficient"])?;
            for (n, c) in self.coefficients.iter().enumerate() {
                w.write_record([n.to_string().as_str(), c])?;
            }
            Ok(())
        })
    }
}

impl Render for LimitOut {
    fn text(&self) -> String {
        let mut s = format!("{} = {}\n", self.quantity, self.value.exact);
        let _ = writeln!(s, "  ≈ {} + {}·i", self.value.re, self.value.im);
        if let Some(t) = &self.theta_multiplier {
            let _ = writeln!(s, "theta multiplier = {}", t.exact);
        }
        if let Some(c) = self.collapsing_residue {
            let _ = writeln!(s, "collapsing residue = {c}");
        }
        s
    }

    fn csv(&self) -> std::io::Result<String> {
        csv_string(|w| {
            w.write_record(["quantity", "order", "coefficients", "re", "im"])?;
            w.write_record([
                self.quantity.as_str(),
                &self.value.order.to_string(),
                &self.value.coefficients.join(" "),
                &self.value.re,
                &self.value.im,
            ])?;
            Ok(())
        })
    }
}

fn radial_footer(r: &RadialOut) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# extrapolated,{},{}", r.extrapolated.re, r.extrapolated.im);
    let _ = writeln!(s, "# error_estimate,{:e}", r.error_estimate);
    if let Some(t) = &r.exact_target {
        let _ = writeln!(s, "# exact_target,{},{},{}", t.exact, t.re, t.im);
    }
    if let Some(a) = r.agreement {
        let _ = writeln!(s, "# agreement,{a:e}");
    }
    if !r.skipped.is_empty() {
        let ts: Vec<String> = r.skipped.iter().map(u32::to_string).collect();
        let _ = writeln!(s, "# skipped,{}", ts.join(" "));
    }
    let _ = writeln!(s, "# status,{}", r.status);
    s
}

fn radial_text(r: &RadialOut) -> String {
    let mut s = format!("{}\n", r.label);
    for x in &r.samples {
        let _ = writeln!(s, "t={:<3} r={}  D = {} + {}·i", x.t, x.r, x.re, x.im);
    }
    for t in &r.skipped {
        let _ = writeln!(s, "t={t:<3} skipped: precision cap reached");
    }
    let _ = writeln!(s, "extrapolated = {} + {}·i", r.extrapolated.re, r.extrapolated.im);
    let _ = writeln!(s, "error estimate = {:e}", r.error_estimate);
    if let Some(t) = &r.exact_target {
        let _ = writeln!(s, "exact = {}", t.exact);
    }
    if let Some(a) = r.agreement {
        let _ = writeln!(s, "agreement = {a:e} (tolerance {:e}): {}", r.tolerance, r.status);
    }
    s
}

impl Render for RadialOut {
    fn text(&self) -> String {
        radial_text(self)
    }

    fn csv(&self) -> std::io::Result<String> {
        let mut body = csv_string(|w| {
            w.write_record(["t", "r", "re", "im"])?;
            for x in &self.samples {
                w.write_record([x.t.to_string().as_str(), &x.r, &x.re, &x.im])?;
            }
            Ok(())
        })?;
        body.push_str(&radial_footer(self));
        Ok(body)
    }
}

impl Render for DecomposedOut {
    fn text(&self) -> String {
        let mut s = format!("decomposed route, k = {}, u(ζ) = {}\n", self.k, self.u_exact.exact);
        for p in &self.parts {
            let _ = writeln!(
                s,
                "t={:<3} log10|(-q;q)²|={:.4}  TR={} + {}·i  |u - u(ζ)|={:e}",
                p.t, p.prefactor_log10, p.tr_sum.re, p.tr_sum.im, p.u_distance
            );
        }
        let _ = writeln!(s, "prefactor decreasing: {}", self.prefactor_decreasing);
        let _ = writeln!(s, "TR bounded: {}", self.tr_bounded);
        let _ = writeln!(s, "u distance decreasing: {}", self.u_distance_decreasing);
        s.push_str(&radial_text(&self.composed));
        let _ = writeln!(s, "status: {}", self.status);
        s
    }

    fn csv(&self) -> std::io::Result<String> {
        let mut body = csv_string(|w| {
            w.write_record(["t", "r", "prefactor_log10", "tr_re", "tr_im", "u_re", "u_im", "u_distance", "re", "im"])?;
            for (p, c) in self.parts.iter().zip(&self.composed.samples) {
                w.write_record([
                    p.t.to_string().as_str(),
                    &p.r,
                    &p.prefactor_log10.to_string(),
                    &p.tr_sum.re,
                    &p.tr_sum.im,
                    &p.u.re,
                    &p.u.im,
                    &format!("{:e}", p.u_distance),
                    &c.re,
                    &c.im,
                ])?;
            }
            Ok(())
        })?;
        body.push_str(&radial_footer(&self.composed));
        Ok(body)
    }
}

impl Render for RelationOut {
    fn text(&self) -> String {
        if !self.found {
            return format!(
                "weight {}: no relation 1 + c·ζ_q({}) = poly(Q, R) (rank {} of {} unknowns)\n",
                self.weight, self.weight, self.rank, self.unknowns
            );
        }
        let terms: Vec<String> =
            self.monomials.iter().map(|m| format!("({})·Q^{}·R^{}", m.coefficient, m.q_power, m.r_power)).collect();
        format!(
            "1 + ({})·ζ_q({}) = {}\nverified to order {}; unique: {}\n",
            self.normalizing_constant.as_deref().unwrap_or("?"),
            self.weight,
            terms.join(" + "),
            self.verified_order,
            self.rank == self.unknowns
        )
    }

    fn csv(&self) -> std::io::Result<String> {
        csv_string(|w| {
            w.write_record(["weight", "found", "normalizing_constant", "q_power", "r_power", "coefficient"])?;
            let c = self.normalizing_constant.clone().unwrap_or_default();
            if self.monomials.is_empty() {
                w.write_record([self.weight.to_string().as_str(), &self.found.to_string(), &c, "", "", ""])?;
            }
            for m in &self.monomials {
                w.write_record([
                    self.weight.to_string().as_str(),
                    &self.found.to_string(),
                    &c,
                    &m.q_power.to_string(),
                    &m.r_power.to_string(),
                    &m.coefficient,
                ])?;
            }
            Ok(())
        })
    }
}
