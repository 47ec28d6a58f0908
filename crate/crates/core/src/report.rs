//! The analysis summary behind the `analyze` command.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::blocks::{barcode_1d, gbcd_vector};
use crate::cmod::CModule;
use crate::error::Result;
use crate::ip::{check_ipc, obstruction_scan, IpVerdict, WipStructure};
use crate::local::{compute, LocalConfig, LocalStructure, Status};
use crate::poset::{product_of_chains, strongly_h_free, HFree};

pub const H_FREE_BUDGET: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObjectRow {
    pub name: String,
    pub dim: usize,
    pub flag_size: usize,
    /// `None` when the local structure did not stabilize.
    pub excess: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stabilization {
    pub stabilized: bool,
    /// First stable stage.
    pub index: Option<usize>,
    /// Refinements done before giving up.
    pub iterations: Option<usize>,
    pub trace: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockRow {
    pub support: Vec<String>,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Tameness {
    /// `e(M) = 0`; `None` without a stable local structure.
    pub tame: Option<bool>,
    pub product_of_chains: bool,
    /// `"yes"` or `"unknown"`.
    pub strongly_h_free: &'static str,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IpcRow {
    /// `verified`, `violated`, `obstructed`, `no_obstruction_found` or
    /// `not_checked`.
    pub verdict: &'static str,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnalysisReport {
    pub field: String,
    pub objects: Vec<ObjectRow>,
    pub total_dim: usize,
    pub stabilization: Stabilization,
    pub total_excess: Option<usize>,
    pub blocks: Vec<BlockRow>,
    pub block_dim_total: usize,
    /// Block dimension per support, supports written `a,b,c`.
    pub gbcd: BTreeMap<String, usize>,
    pub tameness: Tameness,
    pub ipc: IpcRow,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub barcode: Option<Vec<(usize, usize)>>,
}

pub fn verdict_row(v: &IpVerdict, m: &CModule) -> IpcRow {
    let verdict = match v {
        IpVerdict::Verified => "verified",
        IpVerdict::Violated { .. } => "violated",
        IpVerdict::Obstructed { .. } => "obstructed",
        IpVerdict::NoObstructionFound => "no_obstruction_found",
    };
    IpcRow { verdict, detail: v.describe(m.category()) }
}

/// Runs the local structure with `cfg` and fills in whatever it supports.
/// With `grams` the IPC row comes from `check_ipc`, otherwise from the
/// holonomy scan. Only functoriality failures are errors.
pub fn analyze(m: &CModule, cfg: LocalConfig, grams: Option<&WipStructure>) -> Result<(AnalysisReport, LocalStructure)> {
    let t = m.validate()?;
    let cat = m.category();
    let ls = compute(m, &t, cfg);
    let stable = ls.is_stabilized();
    let objects = (0..cat.len())
        .map(|x| ObjectRow {
            name: cat.name(x).to_string(),
            dim: m.dim(x),
            flag_size: ls.flag(x).len(),
            excess: stable.then(|| ls.flag(x).excess()),
        })
        .collect();
    let (index, iterations) = match ls.status {
        Status::Stabilized(i) => (Some(i), None),
        Status::CapHit { iterations } => (None, Some(iterations)),
    };
    let mut blocks = Vec::new();
    let mut gbcd = BTreeMap::new();
    let mut ipc = IpcRow { verdict: "not_checked", detail: String::new() };
    if stable {
        match gbcd_vector(m, &ls) {
            Ok(v) => {
                for (support, dim) in v.entries {
                    *gbcd.entry(support.join(",")).or_insert(0) += dim;
                    blocks.push(BlockRow { support, dim });
                }
            }
            Err(e) => ipc.detail = format!("blocks unavailable: {e}"),
        }
    }
    if m.field().is_rational() {
        if let Some(w) = grams {
            ipc = verdict_row(&check_ipc(m, &t, w)?.verdict, m);
        } else if stable {
            match obstruction_scan(m, &ls) {
                Ok(r) => ipc = verdict_row(&r.verdict, m),
                Err(e) => ipc.detail = e.to_string(),
            }
        } else {
            ipc.detail = "local structure did not stabilize".into();
        }
    } else {
        ipc.detail = "inner products need the rational field".into();
    }
    let barcode = if stable && cat.is_chain() {
        barcode_1d(m).ok().map(|b| b.bars)
    } else {
        None
    };
    let report = AnalysisReport {
        field: m.field().to_string(),
        objects,
        total_dim: m.total_dim(),
        stabilization: Stabilization { stabilized: stable, index, iterations, trace: ls.trace.clone() },
        total_excess: ls.total_excess,
        block_dim_total: blocks.iter().map(|b| b.dim).sum(),
        blocks,
        gbcd,
        tameness: Tameness {
            tame: ls.total_excess.map(|e| e == 0),
            product_of_chains: product_of_chains(cat).is_some(),
            strongly_h_free: match strongly_h_free(cat, H_FREE_BUDGET) {
                HFree::Yes => "yes",
                HFree::Unknown => "unknown",
            },
        },
        ipc,
        barcode,
    };
    Ok((report, ls))
}

impl AnalysisReport {
    /// Totals agree with their parts.
    pub fn is_consistent(&self) -> bool {
        let excess: Option<usize> = self.objects.iter().map(|o| o.excess).sum();
        let dims: usize = self.objects.iter().map(|o| o.dim).sum();
        excess == self.total_excess
            && dims == self.total_dim
            && self.blocks.iter().map(|b| b.dim).sum::<usize>() == self.block_dim_total
            && self.gbcd.values().sum::<usize>() == self.block_dim_total
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// A few lines for a terminal.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        let dims: Vec<String> = self.objects.iter().map(|o| format!("{}:{}", o.name, o.dim)).collect();
        let _ = writeln!(s, "module over {} with dims {}", self.field, dims.join(" "));
        match (self.stabilization.index, self.stabilization.iterations) {
            (Some(i), _) => {
                let _ = writeln!(s, "local structure stable at stage {i}, e(M) = {}", self.total_excess.unwrap_or(0));
            }
            (_, Some(n)) => {
                let _ = writeln!(s, "local structure not stable after {n} refinements");
            }
            _ => {}
        }
        if !self.blocks.is_empty() {
            let _ = writeln!(s, "{} blocks, total dim {}", self.blocks.len(), self.block_dim_total);
        }
        if let Some(b) = &self.barcode {
            let bars: Vec<String> = b.iter().map(|(a, c)| format!("[{a},{c}]")).collect();
            let _ = writeln!(s, "barcode {}", bars.join(" "));
        }
        let _ = writeln!(s, "ipc: {} {}", self.ipc.verdict, self.ipc.detail);
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;

    #[test]
    fn d5_report() {
        let m = gallery::d5_obstruction();
        let (r, _) = analyze(&m, LocalConfig::default(), None).unwrap();
        assert_eq!(r.total_excess, Some(0));
        assert_eq!(r.blocks, [BlockRow { support: vec!["x1".into(), "x2".into(), "y1".into(), "y2".into()], dim: 1 }]);
        assert_eq!(r.ipc.verdict, "obstructed");
        assert!(r.is_consistent());
    }

    #[test]
    fn shear_report_is_unstable() {
        let m = gallery::d4_shear();
        let cfg = LocalConfig { max_iters: 20, ..Default::default() };
        let (r, _) = analyze(&m, cfg, None).unwrap();
        assert!(!r.stabilization.stabilized);
        assert_eq!(r.total_excess, None);
        assert!(r.stabilization.trace.len() > 10);
        assert!(r.is_consistent());
    }

    #[test]
    fn reports_are_deterministic() {
        for name in gallery::NAMES {
            let m = gallery::by_name(name).unwrap();
            let cfg = LocalConfig { max_iters: 10, ..Default::default() };
            let a = analyze(&m, cfg, None).unwrap().0.to_json();
            let b = analyze(&m, cfg, None).unwrap().0.to_json();
            assert_eq!(a, b, "{name}");
        }
    }

    #[test]
    fn chain_report_has_bars() {
        let (r, _) = analyze(&gallery::chain_example(), LocalConfig::default(), None).unwrap();
        assert_eq!(r.barcode, Some(vec![(1, 3), (2, 4)]));
        assert!(r.tameness.product_of_chains);
    }
}
