use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table1Row {
    pub k: u32,
    pub s0: u32,
    pub u0: u32,
    pub sigma_inv: u32,
}

/// Exponent `β = num/den` for the pair `(k, s)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table2Row {
    pub k: u32,
    pub s: u32,
    pub beta_num: u32,
    pub beta_den: u32,
}

impl Table2Row {
    pub fn beta(&self) -> f64 {
        self.beta_num as f64 / self.beta_den as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table3Row {
    pub k: u32,
    pub u: u32,
    pub v: u32,
    pub w: u32,
}

/// Mean-value exponent `θ_{u,k}` for `∫|g|^{2u} ≪ P^{2u−k+θ+ε}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaConstant {
    pub u: u32,
    pub k: u32,
    pub theta: f64,
}

/// Stored parameter data for the exceptional-set theorems.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterTable {
    pub table1: Vec<Table1Row>,
    pub table2: Vec<Table2Row>,
    pub table3: Vec<Table3Row>,
    pub theta: Vec<ThetaConstant>,
    /// `Δ_{3,3} = (√2833 − 43)/41`
    pub delta_33: f64,
    /// `γ = (166 − √2833)/123`
    pub gamma: f64,
}

const TABLE1: [(u32, u32, u32, u32); 17] = [
    (4, 12, 4, 8),
    (5, 18, 6, 16),
    (6, 25, 7, 32),
    (7, 33, 0, 58),
    (8, 42, 0, 70),
    (9, 50, 0, 83),
    (10, 59, 0, 95),
    (11, 67, 0, 108),
    (12, 76, 0, 120),
    (13, 84, 0, 133),
    (14, 92, 0, 146),
    (15, 100, 0, 158),
    (16, 109, 0, 171),
    (17, 117, 0, 184),
    (18, 125, 0, 197),
    (19, 134, 0, 210),
    (20, 142, 0, 223),
];

const TABLE2: [(u32, u32, u32, u32); 11] = [
    (3, 7, 1, 3),
    (4, 13, 5, 8),
    (4, 14, 1, 2),
    (4, 15, 7, 16),
    (5, 25, 3, 4),
    (5, 26, 7, 10),
    (5, 27, 13, 20),
    (5, 28, 3, 5),
    (5, 29, 23, 40),
    (5, 30, 11, 20),
    (5, 31, 3, 8),
];

const TABLE3: [(u32, u32, u32, u32); 3] = [(4, 5, 12, 8), (5, 8, 20, 12), (6, 12, 26, 16)];

const THETA: [(u32, u32, f64); 3] = [(5, 4, 0.213431), (8, 5, 0.077363), (12, 6, 0.0)];

impl ParameterTable {
    pub fn standard() -> Self {
        Self {
            table1: TABLE1
                .iter()
                .map(|&(k, s0, u0, sigma_inv)| Table1Row {
                    k,
                    s0,
                    u0,
                    sigma_inv,
                })
                .collect(),
            table2: TABLE2
                .iter()
                .map(|&(k, s, beta_num, beta_den)| Table2Row {
                    k,
                    s,
                    beta_num,
                    beta_den,
                })
                .collect(),
            table3: TABLE3
                .iter()
                .map(|&(k, u, v, w)| Table3Row { k, u, v, w })
                .collect(),
            theta: THETA
                .iter()
                .map(|&(u, k, theta)| ThetaConstant { u, k, theta })
                .collect(),
            delta_33: (2833f64.sqrt() - 43.0) / 41.0,
            gamma: (166.0 - 2833f64.sqrt()) / 123.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TableId {
    Table1,
    /// Table 2 is keyed by `(k, s)`.
    Table2 {
        s: u32,
    },
    Table3,
    Theta,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum TableRecord {
    Table1(Table1Row),
    Table2(Table2Row),
    Table3(Table3Row),
    Theta(ThetaConstant),
}

pub fn parameter_lookup(k: u32, table: TableId) -> Result<TableRecord> {
    const OP: &str = "parameter_lookup";
    let t = ParameterTable::standard();
    let miss = || Error::lookup(OP, format!("no entry for k = {k} in {table:?}"));
    match table {
        TableId::Table1 => t
            .table1
            .iter()
            .find(|r| r.k == k)
            .map(|&r| TableRecord::Table1(r)),
        TableId::Table2 { s } => t
            .table2
            .iter()
            .find(|r| r.k == k && r.s == s)
            .map(|&r| TableRecord::Table2(r)),
        TableId::Table3 => t
            .table3
            .iter()
            .find(|r| r.k == k)
            .map(|&r| TableRecord::Table3(r)),
        TableId::Theta => t
            .theta
            .iter()
            .find(|r| r.k == k)
            .map(|&r| TableRecord::Theta(r)),
    }
    .ok_or_else(miss)
}
