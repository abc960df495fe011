use std::fmt;

use crate::Label;

/// Counts with gold labels as rows and predictions as columns, both in
/// E, C, N order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Confusion {
    pub counts: [[usize; 3]; 3],
}

/// `count / total` in tenths of a percent, rounded half up.
pub fn tenths_of_percent(count: usize, total: usize) -> usize {
    if total == 0 {
        return 0;
    }
    (2000 * count + total) / (2 * total)
}

fn show_tenths(t: usize) -> String {
    format!("{}.{}", t / 10, t % 10)
}

impl Confusion {
    pub fn add(&mut self, gold: Label, predicted: Label) {
        self.counts[gold.index()][predicted.index()] += 1;
    }

    pub fn total(&self) -> usize {
        self.counts.iter().flatten().sum()
    }

    pub fn correct(&self) -> usize {
        (0..3).map(|i| self.counts[i][i]).sum()
    }

    pub fn accuracy(&self) -> f64 {
        match self.total() {
            0 => 0.0,
            t => self.correct() as f64 / t as f64,
        }
    }

    /// Accuracy as a one-decimal percentage string.
    pub fn accuracy_display(&self) -> String {
        show_tenths(tenths_of_percent(self.correct(), self.total()))
    }

    /// Each cell as tenths of a percent of all problems.
    pub fn percentages(&self) -> [[usize; 3]; 3] {
        let total = self.total();
        self.counts.map(|row| row.map(|c| tenths_of_percent(c, total)))
    }
}

impl fmt::Display for Confusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "gold\\pred\tE\tC\tN")?;
        let pct = self.percentages();
        for gold in Label::ALL {
            let row: Vec<String> = pct[gold.index()].iter().map(|&t| show_tenths(t)).collect();
            writeln!(f, "{}\t{}", gold.short(), row.join("\t"))?;
        }
        write!(f, "accuracy\t{}% ({}/{})", self.accuracy_display(), self.correct(), self.total())
    }
}
