//! Published confusion counts with the percentages printed beside them.

/// A printed row: counts, then precision, recall, accuracy and CPR in
/// percent. `cpr_orig` is `(#correct, #patches, printed %)` where printed.
pub struct Published {
    pub name: &'static str,
    pub counts: (usize, usize, usize, usize),
    pub printed: [f64; 4],
    pub cpr_orig: Option<(usize, usize, f64)>,
}

const fn row(name: &'static str, counts: (usize, usize, usize, usize), printed: [f64; 4]) -> Published {
    Published { name, counts, printed, cpr_orig: None }
}

const fn tool(
    name: &'static str,
    o: usize,
    c: usize,
    cpr_orig: f64,
    counts: (usize, usize, usize, usize),
    printed: [f64; 4],
) -> Published {
    Published { name, counts, printed, cpr_orig: Some((c, o + c, cpr_orig)) }
}

/// Four approaches on the same 902 patches.
pub const APPROACHES: [Published; 4] = [
    row("PatchSim", (249, 51, 186, 392), [83.00, 38.85, 49.54, 32.18]),
    row("SimFeatures", (583, 87, 161, 71), [87.01, 89.14, 82.48, 69.40]),
    row("ProphetFeatures", (585, 73, 175, 69), [88.90, 89.45, 84.25, 71.72]),
    row("ODS", (620, 66, 182, 34), [90.38, 94.80, 88.91, 84.26]),
];

/// Leave-one-tool-out results for 19 repair tools.
pub const TOOLS: [Published; 19] = [
    tool("Arja", 52, 5, 8.77, (50, 3, 2, 2), [94.34, 96.15, 91.23, 50.00]),
    tool("ACS", 7, 15, 68.18, (4, 6, 9, 3), [40.00, 57.14, 59.09, 75.00]),
    tool("AVATAR", 38, 19, 33.33, (37, 5, 14, 1), [88.10, 97.37, 89.47, 93.33]),
    tool("CapGen", 41, 25, 37.88, (34, 4, 21, 7), [89.47, 82.93, 83.33, 75.00]),
    tool("Cardumen", 10, 2, 16.67, (10, 0, 2, 0), [100.0, 100.0, 100.0, 100.0]),
    tool("DynaMoth", 21, 1, 4.55, (21, 1, 0, 0), [95.45, 100.0, 95.45, 0.00]),
    tool("FixMiner", 20, 12, 37.5, (18, 1, 11, 2), [94.74, 90.00, 90.63, 84.62]),
    tool("GenProg", 45, 5, 10.00, (41, 3, 2, 4), [93.18, 91.11, 86.00, 33.33]),
    tool("Jaid", 41, 40, 49.38, (35, 19, 21, 6), [64.81, 85.37, 69.14, 77.78]),
    tool("jMutRepair", 17, 5, 22.73, (13, 0, 5, 4), [100.0, 76.47, 81.82, 55.56]),
    tool("Kali", 82, 6, 6.82, (70, 4, 2, 12), [94.59, 85.36, 81.82, 14.29]),
    tool("kPAR", 52, 10, 16.13, (48, 1, 9, 4), [97.96, 92.31, 91.94, 69.23]),
    tool("Nopol", 30, 1, 3.22, (17, 0, 1, 13), [100.0, 56.67, 58.06, 7.14]),
    tool("RSRepair", 39, 2, 4.88, (38, 1, 1, 1), [97.44, 97.44, 95.12, 50.00]),
    tool("SequenceR", 56, 17, 23.29, (18, 0, 17, 38), [100.0, 32.14, 47.95, 30.91]),
    tool("SimFix", 45, 22, 32.84, (18, 3, 19, 27), [85.71, 40.00, 55.22, 41.30]),
    tool("SketchFix", 9, 16, 64.00, (6, 3, 14, 3), [75.00, 66.67, 80.00, 82.35]),
    tool("SOFix", 2, 21, 91.30, (2, 4, 17, 0), [33.33, 100.0, 82.61, 100.0]),
    tool("TBar", 47, 24, 33.33, (40, 2, 22, 7), [95.24, 85.11, 87.32, 75.86]),
];

/// Cells whose printed value does not follow from the printed counts, as
/// `(row, metric)`. DynaMoth's CPR has a zero denominator yet prints 0.00.
pub const KNOWN_MISPRINTS: [(&str, &str); 4] =
    [("DynaMoth", "cpr"), ("SketchFix", "precision"), ("SketchFix", "accuracy"), ("TBar", "cpr_orig")];

/// Leave-one-project-out: per project `(name, tp, fp, tn, fn)`; projects
/// with only correct patches print `-` for tp and fn, read here as 0.
pub const PROJECTS: [(&str, usize, usize, usize, usize); 26] = [
    ("Math", 3056, 48, 172, 1618),
    ("Chart", 1026, 7, 18, 296),
    ("Lang", 767, 24, 39, 265),
    ("Jackrabbit", 248, 44, 198, 101),
    ("Flink", 244, 13, 53, 106),
    ("Accumulo", 225, 12, 69, 52),
    ("Traccar", 120, 2, 39, 47),
    ("Libra", 122, 0, 1, 6),
    ("Wicket", 0, 35, 210, 0),
    ("Closure", 0, 57, 115, 0),
    ("Camel", 0, 19, 105, 0),
    ("Jsoup", 0, 20, 68, 0),
    ("Log4J", 0, 6, 66, 0),
    ("Spoon", 0, 1, 49, 0),
    ("Maven", 0, 3, 39, 0),
    ("Mockito", 0, 8, 27, 0),
    ("Time", 0, 8, 21, 0),
    ("Cli", 0, 8, 20, 0),
    ("JacksonXml", 0, 2, 16, 0),
    ("Spring", 0, 0, 17, 0),
    ("Codec", 0, 2, 15, 0),
    ("Csv", 0, 3, 14, 0),
    ("Gson", 0, 3, 12, 0),
    ("Incubator", 0, 1, 6, 0),
    ("Fresco", 0, 0, 5, 0),
    ("Molgenis", 0, 1, 4, 0),
];

/// The printed total row: counts, then precision/recall/accuracy to one
/// decimal.
pub const PROJECT_TOTAL: ((usize, usize, usize, usize), [f64; 3]) = ((5808, 327, 1398, 2491), [94.7, 70.0, 71.9]);

/// Printed accuracies of the correct-only projects, to one decimal.
pub const CORRECT_ONLY_ACCURACY: [(&str, f64); 18] = [
    ("Wicket", 85.7),
    ("Closure", 66.9),
    ("Camel", 84.7),
    ("Jsoup", 77.3),
    ("Log4J", 91.7),
    ("Spoon", 98.0),
    ("Maven", 92.9),
    ("Mockito", 77.1),
    ("Time", 72.4),
    ("Cli", 71.4),
    ("JacksonXml", 88.9),
    ("Spring", 100.0),
    ("Codec", 88.2),
    ("Csv", 82.4),
    ("Gson", 80.0),
    ("Incubator", 85.7),
    ("Fresco", 100.0),
    ("Molgenis", 80.0),
];

/// Every metric cell that differs from its printed value by more than
/// `tol` percentage points, as `(row, metric, computed, printed)`.
pub fn mismatches(rows: &[Published], tol: f64) -> Vec<(&'static str, &'static str, Option<f64>, f64)> {
    use patchguard::eval::{cpr_orig, metrics, Confusion};
    let mut out = Vec::new();
    for r in rows {
        let (tp, fp, tn, fn_) = r.counts;
        let m = metrics(&Confusion::new(tp, fp, tn, fn_));
        let computed = [m.precision, m.recall, m.accuracy, m.cpr];
        for ((name, got), printed) in ["precision", "recall", "accuracy", "cpr"].into_iter().zip(computed).zip(r.printed) {
            if got.is_none_or(|v| (100.0 * v - printed).abs() > tol) {
                out.push((r.name, name, got.map(|v| 100.0 * v), printed));
            }
        }
        if let Some((c, n, printed)) = r.cpr_orig {
            let got = cpr_orig(c, n);
            if got.is_none_or(|v| (100.0 * v - printed).abs() > tol) {
                out.push((r.name, "cpr_orig", got.map(|v| 100.0 * v), printed));
            }
        }
    }
    out
}
