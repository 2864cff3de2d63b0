//! Published results on the GSRC floorplanning suite, kept beside our own
//! numbers in summaries.

/// One circuit row of the method comparison table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PublishedRow {
    pub circuit: &'static str,
    /// HPWL of the suite's own reference floorplan.
    pub gsrc_hpwl: f64,
    pub rbsm: MethodResult,
    pub gd: MethodResult,
    pub adam: MethodResult,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MethodResult {
    pub hpwl: f64,
    pub overlap: f64,
    pub time_s: f64,
    pub lhpwl: f64,
}

const fn m(hpwl: f64, overlap: f64, time_s: f64, lhpwl: f64) -> MethodResult {
    MethodResult { hpwl, overlap, time_s, lhpwl }
}

pub const PUBLISHED: [PublishedRow; 6] = [
    PublishedRow {
        circuit: "n10",
        gsrc_hpwl: 64299.0,
        rbsm: m(56902.0, 7206.0, 7.48, 56894.0),
        gd: m(63959.0, 82.0, 0.45, 63955.0),
        adam: m(59631.0, 29460.0, 8.83, 62240.0),
    },
    PublishedRow {
        circuit: "n30",
        gsrc_hpwl: 179811.0,
        rbsm: m(156761.0, 1896.0, 6.89, 157261.0),
        gd: m(188770.0, 612.0, 0.40, 188192.0),
        adam: m(173825.0, 35613.0, 9.64, 185765.0),
    },
    PublishedRow {
        circuit: "n50",
        gsrc_hpwl: 234281.0,
        rbsm: m(199356.0, 602.0, 3.30, 199236.0),
        gd: m(224062.0, 1.0, 0.63, 224038.0),
        adam: m(217210.0, 42382.0, 5.69, 230797.0),
    },
    PublishedRow {
        circuit: "n100",
        gsrc_hpwl: 395719.0,
        rbsm: m(328705.0, 1470.0, 5.78, 328991.0),
        gd: m(366449.0, 1.0, 0.92, 366344.0),
        adam: m(376827.0, 20581.0, 8.31, 389947.0),
    },
    PublishedRow {
        circuit: "n200",
        gsrc_hpwl: 738707.0,
        rbsm: m(571720.0, 2450.0, 17.76, 574778.0),
        gd: m(728562.0, 0.0, 2.16, 728475.0),
        adam: m(697857.0, 19104.0, 20.18, 720499.0),
    },
    PublishedRow {
        circuit: "n300",
        gsrc_hpwl: 937608.0,
        rbsm: m(694527.0, 3634.0, 36.12, 698867.6),
        gd: m(978937.0, 60.0, 3.76, 978438.0),
        adam: m(797910.0, 71746.0, 47.87, 914895.0),
    },
];

pub fn published(circuit: &str) -> Option<&'static PublishedRow> {
    PUBLISHED.iter().find(|r| r.circuit == circuit)
}

/// Published legalized HPWL for `method` on `circuit`.
pub fn published_lhpwl(circuit: &str, method: &str) -> Option<f64> {
    let row = published(circuit)?;
    match method {
        "rbsm" => Some(row.rbsm.lhpwl),
        "gd" => Some(row.gd.lhpwl),
        "adam" => Some(row.adam.lhpwl),
        _ => None,
    }
}

/// `(hpwl, overlap, time_s)` of one ablation cell.
pub type AblationCell = (f64, f64, f64);

/// Ablation rows: `(label, [n100, n200, n300])`.
pub const PUBLISHED_ABLATION: [(&str, [AblationCell; 3]); 5] = [
    ("RBSM", [(328705.0, 1470.0, 5.78), (571720.0, 2450.0, 17.66), (694527.0, 3634.0, 36.12)]),
    ("Random batch", [(308666.0, 3500.0, 9.67), (553329.0, 4014.0, 17.81), (687753.0, 5288.0, 37.97)]),
    ("Fix gamma", [(368020.0, 1691.0, 2.52), (642329.0, 1349.0, 6.34), (871881.0, 2229.0, 16.18)]),
    ("No mean force", [(332958.0, 2099.0, 5.75), (622479.0, 1629.0, 14.99), (767695.0, 3317.0, 31.99)]),
    ("No perturbation", [(302856.0, 3575.0, 7.97), (539778.0, 7241.0, 18.49), (653182.0, 10041.0, 40.55)]),
];
