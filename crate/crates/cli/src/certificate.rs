//! JSON certificates with 1-based indices into the original matrix.

use serde::{Deserialize, Serialize};
use serpar::{
    verify_n2, verify_reductions, verify_wheel, BinaryCertificate, Element, Mode, Reduction, ReductionKind, Sign,
    SparseMatrix, TernaryCertificate, WheelCertificate, WheelCheckMode, WheelKind,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    SeriesParallel,
    NotSeriesParallel,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub result: Verdict,
    pub reductions: Vec<ReductionRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Witness>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReductionType {
    Zero,
    Unit,
    Copy,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReductionRecord {
    pub element: String,
    pub kind: ReductionType,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partner: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub representative: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessKind {
    WheelCycle,
    WheelChordBlock,
    N2,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Witness {
    pub kind: WitnessKind,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cycle_sign_product: Option<i8>,
}

fn element_name(e: Element) -> String {
    match e {
        Element::Row(i) => format!("row {}", i + 1),
        Element::Column(j) => format!("col {}", j + 1),
    }
}

fn parse_element(s: &str) -> Result<Element, String> {
    let (kind, index) = s.split_once(' ').ok_or_else(|| format!("bad element {s:?}"))?;
    let index: usize = match index.trim().parse::<usize>() {
        Ok(i) if i >= 1 => i - 1,
        _ => return Err(format!("bad index in {s:?}")),
    };
    match kind {
        "row" => Ok(Element::Row(index)),
        "col" | "column" => Ok(Element::Column(index)),
        _ => Err(format!("bad element {s:?}")),
    }
}

fn record(r: &Reduction) -> ReductionRecord {
    let mut out = ReductionRecord {
        element: element_name(r.element),
        kind: ReductionType::Zero,
        partner: None,
        representative: None,
        sign: None,
    };
    match r.kind {
        ReductionKind::Zero => {}
        ReductionKind::Unit { partner } => {
            out.kind = ReductionType::Unit;
            out.partner = Some(element_name(partner));
        }
        ReductionKind::Copy { representative, sign } => {
            out.kind = ReductionType::Copy;
            out.representative = Some(element_name(representative));
            out.sign = Some(if sign == Sign::Plus { "+" } else { "-" }.to_string());
        }
    }
    out
}

fn parse_record(r: &ReductionRecord) -> Result<Reduction, String> {
    let element = parse_element(&r.element)?;
    fn need<'a>(r: &ReductionRecord, field: &'a Option<String>, name: &str) -> Result<&'a str, String> {
        field.as_deref().ok_or_else(|| format!("{} reduction of {} lacks `{name}`", kind_name(r.kind), r.element))
    }
    let kind = match r.kind {
        ReductionType::Zero => ReductionKind::Zero,
        ReductionType::Unit => ReductionKind::Unit { partner: parse_element(need(r, &r.partner, "partner")?)? },
        ReductionType::Copy => ReductionKind::Copy {
            representative: parse_element(need(r, &r.representative, "representative")?)?,
            sign: match need(r, &r.sign, "sign")? {
                "+" | "1" => Sign::Plus,
                "-" | "-1" => Sign::Minus,
                other => return Err(format!("bad sign {other:?}")),
            },
        },
    };
    Ok(Reduction { element, kind })
}

fn kind_name(kind: ReductionType) -> &'static str {
    match kind {
        ReductionType::Zero => "zero",
        ReductionType::Unit => "unit",
        ReductionType::Copy => "copy",
    }
}

fn one_based(indices: &[usize]) -> Vec<usize> {
    indices.iter().map(|i| i + 1).collect()
}

fn wheel_witness(wheel: &WheelCertificate, cycle_sign_product: Option<i8>) -> Witness {
    Witness {
        kind: match wheel.kind {
            WheelKind::Cycle => WitnessKind::WheelCycle,
            WheelKind::CycleWithChordBlock => WitnessKind::WheelChordBlock,
        },
        rows: one_based(&wheel.rows),
        cols: one_based(&wheel.cols),
        order: Some(wheel.order()),
        cycle_sign_product,
    }
}

impl Document {
    pub fn series_parallel(reductions: &[Reduction]) -> Self {
        Document {
            result: Verdict::SeriesParallel,
            reductions: reductions.iter().map(record).collect(),
            certificate: None,
        }
    }

    pub fn from_binary(cert: &BinaryCertificate) -> Self {
        match cert {
            BinaryCertificate::SeriesParallel(reductions) => Self::series_parallel(reductions),
            BinaryCertificate::Wheel { reductions, wheel } => Document {
                result: Verdict::NotSeriesParallel,
                reductions: reductions.iter().map(record).collect(),
                certificate: Some(wheel_witness(wheel, None)),
            },
        }
    }

    pub fn from_ternary(cert: &TernaryCertificate) -> Self {
        let certificate = match cert {
            TernaryCertificate::SeriesParallel(reductions) => return Self::series_parallel(reductions),
            TernaryCertificate::SignedWheel { wheel, cycle_sign_product, .. } => {
                wheel_witness(wheel, Some(*cycle_sign_product))
            }
            TernaryCertificate::N2 { rows, cols, .. } => Witness {
                kind: WitnessKind::N2,
                rows: one_based(rows),
                cols: one_based(cols),
                order: None,
                cycle_sign_product: None,
            },
        };
        Document {
            result: Verdict::NotSeriesParallel,
            reductions: cert.reductions().iter().map(record).collect(),
            certificate: Some(certificate),
        }
    }

    pub fn reductions(&self) -> Result<Vec<Reduction>, String> {
        self.reductions
            .iter()
            .enumerate()
            .map(|(i, r)| parse_record(r).map_err(|e| format!("reduction {}: {e}", i + 1)))
            .collect()
    }

    /// Checks the document against `matrix`; the error names the first
    /// violation.
    pub fn verify(&self, matrix: &SparseMatrix) -> Result<(), String> {
        let reductions = self.reductions()?;
        verify_reductions(matrix, &reductions).map_err(|e| {
            format!("reduction {} ({}) is invalid: {}", e.position + 1, self.reductions[e.position].element, e.reason)
        })?;
        match (self.result, &self.certificate) {
            (Verdict::SeriesParallel, Some(_)) => Err("a series-parallel result carries no certificate".into()),
            (Verdict::SeriesParallel, None) => {
                let total = matrix.rows() + matrix.cols();
                if reductions.len() == total {
                    Ok(())
                } else {
                    Err(format!("{} reductions do not remove all {total} rows and columns", reductions.len()))
                }
            }
            (Verdict::NotSeriesParallel, None) => Err("a not-series-parallel result needs a certificate".into()),
            (Verdict::NotSeriesParallel, Some(w)) => w.verify(matrix),
        }
    }
}

impl Witness {
    fn verify(&self, matrix: &SparseMatrix) -> Result<(), String> {
        let zero_based = |v: &[usize], what: &str| -> Result<Vec<usize>, String> {
            v.iter().map(|&i| i.checked_sub(1).ok_or_else(|| format!("{what} index 0, indices are 1-based"))).collect()
        };
        let (rows, cols) = (zero_based(&self.rows, "row")?, zero_based(&self.cols, "column")?);
        if self.kind == WitnessKind::N2 {
            let (Ok(r), Ok(c)) = (<[usize; 2]>::try_from(rows.as_slice()), <[usize; 2]>::try_from(cols.as_slice()))
            else {
                return Err("an n2 certificate has exactly two rows and two columns".into());
            };
            return verify_n2(matrix, r, c).map_err(|e| e.to_string());
        }
        let mode = match matrix.mode() {
            Mode::Binary => WheelCheckMode::ExactBinary,
            Mode::Ternary => WheelCheckMode::Support,
        };
        let info = verify_wheel(matrix, &rows, &cols, mode).map_err(|e| e.to_string())?;
        let kind = match info.kind {
            WheelKind::Cycle => WitnessKind::WheelCycle,
            WheelKind::CycleWithChordBlock => WitnessKind::WheelChordBlock,
        };
        if kind != self.kind {
            return Err(format!("submatrix is a {kind:?} wheel, certificate claims {:?}", self.kind));
        }
        if let Some(order) = self.order.filter(|&o| o != info.order) {
            return Err(format!("wheel has order {}, certificate claims {order}", info.order));
        }
        if let Some(p) = self.cycle_sign_product.filter(|&p| p != info.cycle_sign_product) {
            return Err(format!("cycle sign product is {}, certificate claims {p}", info.cycle_sign_product));
        }
        Ok(())
    }
}
