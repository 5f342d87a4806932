//! The published experiments as ready-made configurations, with the values
//! they are expected to reproduce.

use crate::error::{Error, Result};
use crate::gf::{make_extension, FieldCtx, FqElem};
use crate::orbit::FamilySpec;
use crate::poly::Poly;

use super::SearchConfig;

/// Factor-degree table: distinct factor degrees of `P_n - β` for `n = 1..`.
#[derive(Clone, Debug)]
pub struct FactorTable {
    pub id: u32,
    pub p: u64,
    pub k: u32,
    pub d: u64,
    pub alpha: u64,
    pub beta: u64,
    /// Rows `n = 1..=required` must match; later rows are a stretch goal.
    pub required: u32,
    pub rows: &'static [&'static [usize]],
}

/// Success counts by degree, starting at degree 1.
#[derive(Clone, Debug)]
pub struct CountTable {
    pub id: u32,
    pub p: u64,
    pub k: u32,
    /// Pure `z^d` when `family_poly` is empty.
    pub d: u64,
    pub family_poly: &'static [u64],
    pub points: &'static [u64],
    pub beta: u64,
    /// Degrees `1..=required` must match; later degrees are a stretch goal.
    pub required: usize,
    pub counts: &'static [u64],
}

#[derive(Clone, Debug)]
pub enum Table {
    Factor(FactorTable),
    Count(CountTable),
}

pub const TABLE1: FactorTable = FactorTable {
    id: 1,
    p: 2,
    k: 1,
    d: 3,
    alpha: 0,
    beta: 1,
    required: 8,
    rows: &[
        &[1],
        &[3],
        &[1, 3, 5],
        &[27],
        &[1, 38, 42],
        &[18, 21, 43, 71, 90],
        &[1, 5, 38, 121, 564],
        &[3, 97, 214, 375, 1498],
        &[1, 12, 16, 1205, 5327],
        &[3, 15, 22, 22, 34, 61, 82, 161, 240, 334, 428, 4429, 13852],
        &[1, 16189, 42859],
    ],
};

pub const TABLE3: FactorTable = FactorTable {
    id: 3,
    p: 5,
    k: 1,
    d: 3,
    alpha: 1,
    beta: 2,
    required: 7,
    rows: &[
        &[1],
        &[1, 2],
        &[3, 6],
        &[4, 7, 16],
        &[1, 1, 11, 22, 45],
        &[2, 5, 10, 226],
        &[26, 52, 250, 401],
        &[1, 3, 3, 4, 5, 6, 13, 23, 64, 95, 149, 353, 1468],
        &[1, 20, 27, 757, 1082, 4674],
        &[2, 4, 21, 1632, 3932, 14092],
        &[1, 6, 99, 106, 205, 280, 446, 778, 2370, 22642, 32116],
        &[3, 3, 4, 7, 38, 71, 13680, 163341],
    ],
};

pub const COUNT_TABLES: [CountTable; 8] = [
    CountTable {
        id: 2,
        p: 2,
        k: 1,
        d: 3,
        family_poly: &[],
        points: &[1, 0],
        beta: 1,
        required: 13,
        counts: &[1, 0, 2, 0, 3, 0, 7, 0, 31, 1, 89, 4, 325],
    },
    CountTable {
        id: 4,
        p: 3,
        k: 1,
        d: 2,
        family_poly: &[],
        points: &[0, 1],
        beta: 2,
        required: 11,
        counts: &[2, 1, 1, 4, 1, 4, 7, 15, 24, 29, 53, 70, 120],
    },
    CountTable {
        id: 5,
        p: 3,
        k: 2,
        d: 2,
        family_poly: &[],
        points: &[1, 4],
        beta: 3,
        required: 5,
        counts: &[3, 1, 4, 7, 40, 60],
    },
    CountTable {
        id: 6,
        p: 2,
        k: 3,
        d: 3,
        family_poly: &[],
        points: &[1, 2],
        beta: 7,
        required: 5,
        counts: &[4, 2, 63, 7, 2265, 31],
    },
    CountTable {
        id: 7,
        p: 5,
        k: 1,
        d: 10,
        family_poly: &[],
        points: &[1, 2],
        beta: 3,
        required: 9,
        counts: &[1, 1, 1, 2, 8, 13, 18, 43, 103],
    },
    CountTable {
        id: 8,
        p: 5,
        k: 1,
        d: 3,
        family_poly: &[0, 1, 0, 1],
        points: &[1, 3],
        beta: 2,
        required: 9,
        counts: &[1, 0, 1, 5, 6, 17, 24, 32, 114],
    },
    CountTable {
        id: 9,
        p: 5,
        k: 1,
        d: 3,
        family_poly: &[],
        points: &[1, 2, 3],
        beta: 4,
        required: 6,
        counts: &[0, 1, 8, 2, 154, 6, 2732, 28],
    },
    CountTable {
        id: 10,
        p: 5,
        k: 1,
        d: 4,
        family_poly: &[0, 1, 0, 0, 1],
        points: &[1, 2, 3],
        beta: 4,
        required: 8,
        counts: &[1, 0, 3, 5, 7, 10, 24, 43],
    },
];

pub fn table(id: u32) -> Result<Table> {
    match id {
        1 => Ok(Table::Factor(TABLE1)),
        3 => Ok(Table::Factor(TABLE3)),
        _ => COUNT_TABLES
            .iter()
            .find(|t| t.id == id)
            .cloned()
            .map(Table::Count)
            .ok_or_else(|| Error::Config(format!("no table {id}; expected 1 to 10"))),
    }
}

impl FactorTable {
    pub fn field(&self) -> Result<FieldCtx> {
        make_extension(self.p, self.k)
    }

    pub fn family(&self) -> Result<FamilySpec> {
        FamilySpec::pure(self.d)
    }

    pub fn alpha(&self, ctx: &FieldCtx) -> Result<FqElem> {
        ctx.elem(self.alpha)
    }

    pub fn beta(&self, ctx: &FieldCtx) -> Result<FqElem> {
        ctx.elem(self.beta)
    }
}

impl CountTable {
    pub fn field(&self) -> Result<FieldCtx> {
        make_extension(self.p, self.k)
    }

    pub fn family(&self, ctx: &FieldCtx) -> Result<FamilySpec> {
        if self.family_poly.is_empty() {
            FamilySpec::pure(self.d)
        } else {
            FamilySpec::custom(Poly::new(ctx, self.family_poly.to_vec())?)
        }
    }

    /// Search configuration over degrees `1..=deg_max`.
    pub fn config(&self, deg_max: usize) -> Result<SearchConfig> {
        let ctx = self.field()?;
        let points = self
            .points
            .iter()
            .map(|&v| ctx.elem(v))
            .collect::<Result<Vec<_>>>()?;
        let target = ctx.elem(self.beta)?;
        SearchConfig::new(&ctx, self.family(&ctx)?, points, target, 1, deg_max)
    }
}
