//! Tabular data ingestion and sampling plans.
//!
//! CSV tables come in as [`RawTable`], get optionally condensed by
//! [`group_average`], and are bound to class labels through a [`LabelRule`]
//! to produce the immutable [`LabeledDataset`] every other module consumes.
//! Bootstrap and stratified-fold plans live here too, since they are
//! properties of the data rather than of any one model.

use std::fmt;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

/// A parsed CSV table: header plus fully numeric rows.
#[derive(Debug, Clone, PartialEq)]
pub struct RawTable {
    pub column_names: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub source_path: String,
}

impl RawTable {
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_columns(&self) -> usize {
        self.column_names.len()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.column_names.iter().position(|c| c == name)
    }

    /// Serialize back to CSV text (header + shortest-roundtrip numbers).
    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.column_names.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// Threshold binning of a continuous target into ordered classes.
///
/// A value `v` maps to class 0 when `v <= upper_bounds[0]`, to class `i`
/// when `upper_bounds[i-1] < v <= upper_bounds[i]`, and to the last class
/// when it exceeds every bound. Bounds are inclusive on the lower class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelRule {
    pub class_names: Vec<String>,
    pub upper_bounds: Vec<f64>,
}

impl LabelRule {
    pub fn new(class_names: Vec<String>, upper_bounds: Vec<f64>) -> Result<Self> {
        if class_names.len() != upper_bounds.len() + 1 {
            return Err(Error::invalid(format!(
                "label rule needs one more class than bounds: {} classes, {} bounds",
                class_names.len(),
                upper_bounds.len()
            )));
        }
        if class_names.len() < 2 {
            return Err(Error::invalid("label rule needs at least 2 classes"));
        }
        if upper_bounds.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("label rule bounds must be strictly increasing"));
        }
        if upper_bounds.iter().any(|b| !b.is_finite()) {
            return Err(Error::invalid("label rule bounds must be finite"));
        }
        Ok(LabelRule {
            class_names,
            upper_bounds,
        })
    }

    /// Load from a JSON file of the shape
    /// `{"class_names":[...],"upper_bounds":[...]}`.
    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let parsed: LabelRule = serde_json::from_str(&text)?;
        LabelRule::new(parsed.class_names, parsed.upper_bounds)
    }

    /// Five-class rule for electrode mass load (mg/cm^2).
    pub fn mass_load_default() -> Self {
        LabelRule::new(five_class_names(), vec![15.0, 25.0, 35.0, 45.0]).expect("static rule")
    }

    /// Five-class rule for electrode porosity (%).
    pub fn porosity_default() -> Self {
        LabelRule::new(five_class_names(), vec![47.5, 50.0, 52.5, 55.0]).expect("static rule")
    }

    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn class_of(&self, value: f64) -> usize {
        self.upper_bounds.iter().filter(|&&b| value > b).count()
    }
}

fn five_class_names() -> Vec<String> {
    ["very low", "low", "medium", "high", "very high"]
        .iter()
        .map(|s| s.to_string())
        .collect()
}

/// The immutable observation matrix plus class labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledDataset {
    feature_names: Vec<String>,
    /// Row-major `n_obs x n_features`.
    features: Vec<f64>,
    labels: Vec<usize>,
    class_names: Vec<String>,
}

impl LabeledDataset {
    pub fn new(
        feature_names: Vec<String>,
        features: Vec<f64>,
        labels: Vec<usize>,
        class_names: Vec<String>,
    ) -> Result<Self> {
        let m = feature_names.len();
        let n = labels.len();
        if m == 0 {
            return Err(Error::invalid("dataset needs at least one feature"));
        }
        if n == 0 {
            return Err(Error::invalid("dataset needs at least one observation"));
        }
        if features.len() != n * m {
            return Err(Error::invalid(format!(
                "feature matrix has {} values, expected {} ({} rows x {} features)",
                features.len(),
                n * m,
                n,
                m
            )));
        }
        if class_names.is_empty() {
            return Err(Error::invalid("dataset needs a class vocabulary"));
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= class_names.len()) {
            return Err(Error::invalid(format!(
                "label index {bad} out of range for {} classes",
                class_names.len()
            )));
        }
        if features.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("feature matrix contains non-finite values"));
        }
        Ok(LabeledDataset {
            feature_names,
            features,
            labels,
            class_names,
        })
    }

    /// Bind a raw table to labels: `target` is binned through `rule`, every
    /// other column (minus `exclude`) becomes a feature.
    pub fn from_table(
        table: &RawTable,
        target: &str,
        rule: &LabelRule,
        exclude: &[String],
    ) -> Result<Self> {
        let target_idx = table
            .column_index(target)
            .ok_or_else(|| Error::invalid(format!("target column {target:?} not found")))?;
        let feature_cols: Vec<usize> = (0..table.n_columns())
            .filter(|&c| c != target_idx && !exclude.contains(&table.column_names[c]))
            .collect();
        if feature_cols.is_empty() {
            return Err(Error::invalid("no feature columns left after exclusions"));
        }
        let feature_names: Vec<String> = feature_cols
            .iter()
            .map(|&c| table.column_names[c].clone())
            .collect();
        let mut features = Vec::with_capacity(table.n_rows() * feature_cols.len());
        let mut target_values = Vec::with_capacity(table.n_rows());
        for row in &table.rows {
            for &c in &feature_cols {
                features.push(row[c]);
            }
            target_values.push(row[target_idx]);
        }
        let labels = apply_label_rule(&target_values, rule);
        LabeledDataset::new(feature_names, features, labels, rule.class_names.clone())
    }

    pub fn n_obs(&self) -> usize {
        self.labels.len()
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> usize {
        self.labels[i]
    }

    pub fn value(&self, obs: usize, feature: usize) -> f64 {
        self.features[obs * self.n_features() + feature]
    }

    pub fn row(&self, obs: usize) -> &[f64] {
        let m = self.n_features();
        &self.features[obs * m..(obs + 1) * m]
    }

    /// Copy of one feature column.
    pub fn column(&self, feature: usize) -> Vec<f64> {
        (0..self.n_obs()).map(|i| self.value(i, feature)).collect()
    }

    /// Restriction to a feature subset, keeping the given order.
    pub fn restrict_features(&self, subset: &[usize]) -> Result<Self> {
        if subset.is_empty() {
            return Err(Error::invalid("feature subset is empty"));
        }
        if let Some(&bad) = subset.iter().find(|&&f| f >= self.n_features()) {
            return Err(Error::invalid(format!(
                "feature index {bad} out of range for {} features",
                self.n_features()
            )));
        }
        let feature_names = subset
            .iter()
            .map(|&f| self.feature_names[f].clone())
            .collect();
        let mut features = Vec::with_capacity(self.n_obs() * subset.len());
        for i in 0..self.n_obs() {
            for &f in subset {
                features.push(self.value(i, f));
            }
        }
        LabeledDataset::new(feature_names, features, self.labels.clone(), self.class_names.clone())
    }

    /// Restriction to a row subset, keeping the given order.
    pub fn subset_rows(&self, rows: &[usize]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::invalid("row subset is empty"));
        }
        let mut features = Vec::with_capacity(rows.len() * self.n_features());
        let mut labels = Vec::with_capacity(rows.len());
        for &r in rows {
            if r >= self.n_obs() {
                return Err(Error::invalid(format!("row index {r} out of range")));
            }
            features.extend_from_slice(self.row(r));
            labels.push(self.labels[r]);
        }
        LabeledDataset::new(
            self.feature_names.clone(),
            features,
            labels,
            self.class_names.clone(),
        )
    }
}

impl fmt::Display for LabeledDataset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} obs x {} features, {} classes",
            self.n_obs(),
            self.n_features(),
            self.n_classes()
        )
    }
}

/// One bootstrap draw: `in_bag` holds n indices drawn with replacement,
/// `oob` the sorted complement of the drawn set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BootstrapSample {
    pub in_bag: Vec<usize>,
    pub oob: Vec<usize>,
}

impl BootstrapSample {
    /// True for indices never drawn into the bag.
    pub fn oob_mask(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![true; n];
        for &i in &self.in_bag {
            mask[i] = false;
        }
        mask
    }

    /// Degenerate "bag" that contains every index exactly once. Used for
    /// models trained on the full dataset rather than a resample.
    pub fn identity(n: usize) -> Self {
        BootstrapSample {
            in_bag: (0..n).collect(),
            oob: Vec::new(),
        }
    }
}

/// Assignment of every observation to one of `k` folds, stratified by class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldPlan {
    pub k: usize,
    pub fold_of: Vec<usize>,
    pub seed: u64,
}

impl FoldPlan {
    pub fn test_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.fold_of.len()).filter(|&i| self.fold_of[i] == fold).collect()
    }

    pub fn train_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.fold_of.len()).filter(|&i| self.fold_of[i] != fold).collect()
    }
}

/// Parse a CSV file: UTF-8, header row, comma-delimited, every cell numeric.
///
/// Missing or non-numeric cells are rejected with the 1-based data row and
/// column in the message.
pub fn load_csv(path: impl AsRef<Path>) -> Result<RawTable> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let mut table = parse_csv(&text)?;
    table.source_path = path.display().to_string();
    Ok(table)
}

/// [`load_csv`] over in-memory text; `source_path` is left empty.
pub fn parse_csv(text: &str) -> Result<RawTable> {
    let mut lines = text.lines();
    let header = match lines.next() {
        Some(h) if !h.trim().is_empty() => h,
        _ => return Err(Error::invalid("no header: file is empty")),
    };
    let column_names: Vec<String> = header.split(',').map(|c| c.trim().to_string()).collect();
    if column_names.iter().any(|c| c.is_empty()) {
        return Err(Error::invalid("header contains an empty column name"));
    }
    let n_cols = column_names.len();

    let mut rows = Vec::new();
    for (line_idx, line) in lines.enumerate() {
        let row_no = line_idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != n_cols {
            return Err(Error::CellParse {
                row: row_no,
                column: cells.len().min(n_cols),
                message: format!("expected {} cells, found {}", n_cols, cells.len()),
            });
        }
        let mut row = Vec::with_capacity(n_cols);
        for (col_idx, cell) in cells.iter().enumerate() {
            let trimmed = cell.trim();
            if trimmed.is_empty() {
                return Err(Error::CellParse {
                    row: row_no,
                    column: col_idx + 1,
                    message: "missing value (missing cells are unsupported)".to_string(),
                });
            }
            let value: f64 = trimmed.parse().map_err(|_| Error::CellParse {
                row: row_no,
                column: col_idx + 1,
                message: format!("not a number: {trimmed:?}"),
            })?;
            if !value.is_finite() {
                return Err(Error::CellParse {
                    row: row_no,
                    column: col_idx + 1,
                    message: format!("non-finite value: {trimmed:?}"),
                });
            }
            row.push(value);
        }
        rows.push(row);
    }
    Ok(RawTable {
        column_names,
        rows,
        source_path: String::new(),
    })
}

/// Condense consecutive blocks of `group_size` rows into their column means.
pub fn group_average(table: &RawTable, group_size: usize) -> Result<RawTable> {
    if group_size == 0 {
        return Err(Error::invalid("group size must be positive"));
    }
    let remainder = table.n_rows() % group_size;
    if remainder != 0 {
        return Err(Error::invalid(format!(
            "row count {} is not divisible by group size {} (remainder {})",
            table.n_rows(),
            group_size,
            remainder
        )));
    }
    let rows = table
        .rows
        .chunks(group_size)
        .map(|chunk| {
            (0..table.n_columns())
                .map(|c| chunk.iter().map(|r| r[c]).sum::<f64>() / group_size as f64)
                .collect()
        })
        .collect();
    Ok(RawTable {
        column_names: table.column_names.clone(),
        rows,
        source_path: table.source_path.clone(),
    })
}

/// Bin each value through the rule. Total on finite inputs.
pub fn apply_label_rule(values: &[f64], rule: &LabelRule) -> Vec<usize> {
    values.iter().map(|&v| rule.class_of(v)).collect()
}

/// Draw `n` indices uniformly with replacement from `0..n`; the out-of-bag
/// set is the complement of the drawn set. Deterministic per seed.
pub fn bootstrap_sample(n: usize, seed: u64) -> BootstrapSample {
    assert!(n >= 1, "bootstrap over an empty index set");
    let mut rng = rng::stream(seed, "bootstrap", 0);
    let mut drawn = vec![false; n];
    let in_bag: Vec<usize> = (0..n)
        .map(|_| {
            let i = rng.random_range(0..n);
            drawn[i] = true;
            i
        })
        .collect();
    let oob = (0..n).filter(|&i| !drawn[i]).collect();
    BootstrapSample { in_bag, oob }
}

/// Stratified k-fold plan: within each class, members are shuffled by a
/// seeded stream and dealt round-robin over the folds, so per-class fold
/// counts differ by at most one.
pub fn stratified_kfold(dataset: &LabeledDataset, k: usize, seed: u64) -> Result<FoldPlan> {
    let n = dataset.n_obs();
    if k < 2 {
        return Err(Error::invalid("fold count must be at least 2"));
    }
    if k > n {
        return Err(Error::invalid(format!(
            "fold count {k} exceeds observation count {n}"
        )));
    }
    let mut fold_of = vec![0usize; n];
    for class in 0..dataset.n_classes() {
        let mut members: Vec<usize> = (0..n).filter(|&i| dataset.label(i) == class).collect();
        if members.is_empty() {
            continue;
        }
        let mut rng = rng::stream(seed, "kfold", class as u64);
        members.shuffle(&mut rng);
        for (t, &i) in members.iter().enumerate() {
            fold_of[i] = t % k;
        }
    }
    Ok(FoldPlan { k, fold_of, seed })
}
