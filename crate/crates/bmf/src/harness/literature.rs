//! Published benchmark numbers, shipped as cited constants.
//!
//! These are comparison context for freshly computed results and are never
//! recomputed here. `NA` cells (a method that could not run at that size)
//! are `None`.

/// Catalog row for one benchmark dataset.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DatasetInfo {
    /// Canonical lowercase key used in CLI flags and fixture names.
    pub name: &'static str,
    /// Human-readable name used in reports.
    pub display: &'static str,
    pub rows: usize,
    pub cols: usize,
    pub nnz: usize,
    /// Published density, 3 decimals.
    pub density: f64,
    /// Expected file name inside the fixture directory.
    pub fixture_file: &'static str,
}

pub const DATASETS: [DatasetInfo; 5] = [
    DatasetInfo {
        name: "chess",
        display: "Chess",
        rows: 3196,
        cols: 76,
        nnz: 118_252,
        density: 0.487,
        fixture_file: "chess.mtx",
    },
    DatasetInfo {
        name: "dblp",
        display: "DBLP",
        rows: 6980,
        cols: 19,
        nnz: 17_173,
        density: 0.130,
        fixture_file: "dblp.mtx",
    },
    DatasetInfo {
        name: "firewall1",
        display: "Firewall 1",
        rows: 365,
        cols: 709,
        nnz: 31_951,
        density: 0.124,
        fixture_file: "firewall1.mtx",
    },
    DatasetInfo {
        name: "mushroom",
        display: "Mushroom",
        rows: 8124,
        cols: 119,
        nnz: 186_852,
        density: 0.193,
        fixture_file: "mushroom.mtx",
    },
    DatasetInfo {
        name: "paleo",
        display: "Paleo",
        rows: 501,
        cols: 139,
        nnz: 3537,
        density: 0.051,
        fixture_file: "paleo.mtx",
    },
];

/// Look up a dataset by canonical name (case-insensitive).
pub fn dataset(name: &str) -> Option<&'static DatasetInfo> {
    DATASETS.iter().find(|d| d.name.eq_ignore_ascii_case(name))
}

/// Precision threshold used for all published fixed-rank (DBP) runs.
pub const DBP_T_P: f64 = 0.5;
/// Search limit used for all published fixed-rank (DBP) runs.
pub const DBP_SR: usize = 100;
/// Published minimum-rank (AFP) runs use `sr = k + AFP_SR_MARGIN`.
pub const AFP_SR_MARGIN: usize = 10;

/// One cell of the published fixed-rank coverage table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DbpCell {
    pub dataset: &'static str,
    pub k: usize,
    pub asso: f64,
    pub grecond_plus: f64,
    pub naivecol: f64,
    pub topfiberm: f64,
}

const fn dbp(
    dataset: &'static str,
    k: usize,
    asso: f64,
    grecond_plus: f64,
    naivecol: f64,
    topfiberm: f64,
) -> DbpCell {
    DbpCell {
        dataset,
        k,
        asso,
        grecond_plus,
        naivecol,
        topfiberm,
    }
}

pub const DBP_TABLE: [DbpCell; 20] = [
    dbp("chess", 1, 0.497, 0.447, 0.119, 0.610),
    dbp("chess", 2, 0.574, 0.506, 0.177, 0.625),
    dbp("chess", 5, 0.628, 0.621, 0.323, 0.667),
    dbp("chess", 10, 0.703, 0.710, 0.461, 0.724),
    dbp("dblp", 1, 0.111, 0.131, 0.111, 0.187),
    dbp("dblp", 2, 0.217, 0.238, 0.217, 0.293),
    dbp("dblp", 5, 0.475, 0.468, 0.475, 0.495),
    dbp("dblp", 10, 0.738, 0.692, 0.738, 0.738),
    dbp("firewall1", 1, 0.726, 0.688, 0.651, 0.724),
    dbp("firewall1", 2, 0.818, 0.841, 0.804, 0.847),
    dbp("firewall1", 5, 0.908, 0.951, 0.932, 0.953),
    dbp("firewall1", 10, 0.917, 0.979, 0.976, 0.980),
    dbp("mushroom", 1, 0.226, 0.131, 0.129, 0.253),
    dbp("mushroom", 2, 0.323, 0.235, 0.234, 0.305),
    dbp("mushroom", 5, 0.461, 0.504, 0.398, 0.425),
    dbp("mushroom", 10, 0.555, 0.613, 0.512, 0.522),
    dbp("paleo", 1, 0.027, 0.027, 0.027, 0.027),
    dbp("paleo", 2, 0.047, 0.047, 0.047, 0.049),
    dbp("paleo", 5, 0.105, 0.106, 0.105, 0.106),
    dbp("paleo", 10, 0.182, 0.181, 0.182, 0.182),
];

/// One row of the published minimum-rank table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AfpRow {
    pub dataset: &'static str,
    pub target_coverage: f64,
    /// Precision threshold the published run used at this target.
    pub t_p: f64,
    pub asso: Option<usize>,
    pub grecond_plus: usize,
    pub naivecol: usize,
    pub topfiberm: usize,
}

const fn afp(
    dataset: &'static str,
    target_coverage: f64,
    t_p: f64,
    asso: Option<usize>,
    grecond_plus: usize,
    naivecol: usize,
    topfiberm: usize,
) -> AfpRow {
    AfpRow {
        dataset,
        target_coverage,
        t_p,
        asso,
        grecond_plus,
        naivecol,
        topfiberm,
    }
}

pub const AFP_TABLE: [AfpRow; 20] = [
    afp("chess", 0.8, 0.7, Some(21), 19, 21, 19),
    afp("chess", 0.9, 0.8, None, 34, 34, 33),
    afp("chess", 0.95, 0.8, None, 48, 46, 45),
    afp("chess", 1.0, 1.0, None, 130, 72, 71),
    afp("dblp", 0.8, 0.7, Some(12), 13, 12, 12),
    afp("dblp", 0.9, 0.7, Some(15), 16, 15, 15),
    afp("dblp", 0.95, 0.7, Some(17), 18, 17, 17),
    afp("dblp", 1.0, 0.7, Some(19), 21, 19, 19),
    afp("firewall1", 0.8, 0.7, Some(2), 2, 2, 2),
    afp("firewall1", 0.9, 0.7, Some(5), 4, 4, 3),
    afp("firewall1", 0.95, 0.7, None, 6, 7, 5),
    afp("firewall1", 1.0, 0.9, None, 100, 71, 69),
    afp("mushroom", 0.8, 0.8, Some(47), 29, 32, 34),
    afp("mushroom", 0.9, 0.9, None, 46, 47, 50),
    afp("mushroom", 0.95, 0.9, None, 62, 62, 65),
    afp("mushroom", 1.0, 0.9, None, 120, 110, 109),
    afp("paleo", 0.8, 0.7, Some(84), 86, 83, 83),
    afp("paleo", 0.9, 0.7, Some(109), 110, 107, 106),
    afp("paleo", 0.95, 0.7, Some(125), 127, 122, 121),
    afp("paleo", 1.0, 0.8, None, 151, 139, 139),
];

/// Published aggregate coverage on the SWDF predicate slices at rank 100.
pub const SWDF_TOPFIBERM_COVERAGE: f64 = 0.4538;
pub const SWDF_GRECOND_COVERAGE: f64 = 0.4535;
pub const SWDF_ASSO_COVERAGE: f64 = 0.4460;
/// Predicate occurrence threshold the SWDF run used.
pub const SWDF_MIN_COUNT: usize = 1000;
/// Rank the SWDF run used.
pub const SWDF_RANK: usize = 100;
