use std::collections::HashSet;

use super::EvalReport;
use crate::error::{Error, Result};

/// Method × dataset accuracy table (percent, one decimal).
#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonTable {
    pub datasets: Vec<String>,
    /// `(method, dim, accuracy per dataset)`
    pub rows: Vec<(String, usize, Vec<Option<f64>>)>,
}

/// Arrange reports into one row per method and one column per dataset, in
/// order of first appearance.
pub fn compare_methods(reports: &[EvalReport]) -> Result<ComparisonTable> {
    if reports.is_empty() {
        return Err(Error::config("no reports to compare"));
    }
    let mut seen = HashSet::new();
    let mut datasets: Vec<String> = Vec::new();
    let mut methods: Vec<(String, usize)> = Vec::new();
    for r in reports {
        if !seen.insert((r.method.as_str(), r.dataset.as_str())) {
            return Err(Error::config(format!(
                "duplicate report for {} on {}",
                r.method, r.dataset
            )));
        }
        if !datasets.contains(&r.dataset) {
            datasets.push(r.dataset.clone());
        }
        if !methods.iter().any(|(m, _)| m == &r.method) {
            methods.push((r.method.clone(), r.dim));
        }
    }
    let rows = methods
        .into_iter()
        .map(|(method, dim)| {
            let cells = datasets
                .iter()
                .map(|d| {
                    reports
                        .iter()
                        .find(|r| r.method == method && &r.dataset == d)
                        .map(|r| r.mean_accuracy * 100.0)
                })
                .collect();
            (method, dim, cells)
        })
        .collect();
    Ok(ComparisonTable { datasets, rows })
}

fn cell(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_owned(), |x| format!("{x:.1}"))
}

impl ComparisonTable {
    fn header(&self) -> Vec<String> {
        ["Method".to_owned(), "Dim".to_owned()]
            .into_iter()
            .chain(self.datasets.iter().cloned())
            .collect()
    }

    fn body(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|(m, dim, cells)| {
                [m.clone(), dim.to_string()]
                    .into_iter()
                    .chain(cells.iter().map(|&c| cell(c)))
                    .collect()
            })
            .collect()
    }

    /// Space-aligned text, first column left-aligned, numbers right-aligned.
    pub fn to_text(&self) -> String {
        let mut lines = vec![self.header()];
        lines.extend(self.body());
        let widths: Vec<usize> = (0..lines[0].len())
            .map(|c| lines.iter().map(|l| l[c].len()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for line in &lines {
            let cells: Vec<String> = line
                .iter()
                .enumerate()
                .map(|(c, s)| {
                    if c == 0 {
                        format!("{s:<w$}", w = widths[c])
                    } else {
                        format!("{s:>w$}", w = widths[c])
                    }
                })
                .collect();
            out.push_str(cells.join("  ").trim_end());
            out.push('\n');
        }
        out
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
        writer.write_record(self.header()).map_err(csv_err)?;
        for row in self.body() {
            writer.write_record(row).map_err(csv_err)?;
        }
        let bytes = writer
            .into_inner()
            .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(method: &str, dataset: &str, dim: usize, acc: f64) -> EvalReport {
        EvalReport::new(method, dataset, dim, vec![vec![acc]])
    }

    #[test]
    fn three_methods_one_dataset() {
        let table = compare_methods(&[
            report("Word2Vec", "MR", 300, 0.793),
            report("GloVe", "MR", 300, 0.792),
            report("IWV", "MR", 356, 0.798),
        ])
        .unwrap();
        assert_eq!(table.rows.len(), 3);
        assert_eq!(
            table.to_csv().unwrap(),
            "Method,Dim,MR\nWord2Vec,300,79.3\nGloVe,300,79.2\nIWV,356,79.8\n"
        );
        let text = table.to_text();
        assert_eq!(text.lines().next().unwrap(), "Method    Dim    MR");
        assert_eq!(text.lines().nth(3).unwrap(), "IWV       356  79.8");
    }

    #[test]
    fn missing_cells_and_column_order() {
        let table = compare_methods(&[
            report("IWV", "MR", 356, 0.5),
            report("IWV", "CR", 356, 0.6),
            report("Word2Vec", "CR", 300, 0.55),
        ])
        .unwrap();
        assert_eq!(table.datasets, ["MR", "CR"]);
        assert_eq!(
            table.to_csv().unwrap(),
            "Method,Dim,MR,CR\nIWV,356,50.0,60.0\nWord2Vec,300,-,55.0\n"
        );
    }

    #[test]
    fn single_and_invalid() {
        assert_eq!(compare_methods(&[report("IWV", "CR", 356, 0.8)]).unwrap().rows.len(), 1);
        assert!(matches!(compare_methods(&[]), Err(Error::Config(_))));
        assert!(matches!(
            compare_methods(&[report("IWV", "CR", 356, 0.8), report("IWV", "CR", 356, 0.7)]),
            Err(Error::Config(_))
        ));
    }
}
