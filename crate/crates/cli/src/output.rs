use std::io::Write;

use crate::config::Format;
use crate::CliError;

/// Twelve significant digits, fixed notation where it stays readable.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..12).contains(&exp) {
        format!("{:.*}", (11 - exp) as usize, x)
    } else {
        format!("{:.11e}", x)
    }
}

/// Rows of preformatted cells, rendered as an aligned table or as CSV.
#[derive(Debug, Clone, Default)]
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn write(&self, out: &mut dyn Write, format: Format) -> Result<(), CliError> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.header)?;
                for row in &self.rows {
                    w.write_record(row)?;
                }
                w.flush()?;
            }
            Format::Table => {
                let widths: Vec<usize> = (0..self.header.len())
                    .map(|c| self.rows.iter().map(|r| r[c].len()).chain([self.header[c].len()]).max().unwrap_or(0))
                    .collect();
                let line = |cells: &[String]| -> String {
                    cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect::<Vec<_>>().join("  ")
                };
                writeln!(out, "{}", line(&self.header))?;
                for row in &self.rows {
                    writeln!(out, "{}", line(row))?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_number(-0.5), "-0.500000000000");
        assert_eq!(format_number(-0.00413223140496), "-0.00413223140496");
        assert_eq!(format_number(7.428251816372), "7.42825181637");
        assert_eq!(format_number(1.5e-11), "1.50000000000e-11");
        assert_eq!(format_number(0.0), "0");
        for x in [-0.0555555555556f64, 123.456789012345, 3.2e-7] {
            let back: f64 = format_number(x).parse().unwrap();
            assert!((back - x).abs() <= 1e-11 * x.abs());
        }
    }

    #[test]
    fn csv_and_table_layouts() {
        let mut t = Table::new(&["n", "energy"]);
        t.push(vec!["0".into(), "-0.5".into()]);
        let mut buf = Vec::new();
        t.write(&mut buf, Format::Csv).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "n,energy\n0,-0.5\n");
        let mut buf = Vec::new();
        t.write(&mut buf, Format::Table).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "n  energy\n0    -0.5\n");
    }
}
