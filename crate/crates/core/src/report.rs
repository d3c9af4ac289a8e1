//! Fixed number formatting and a small CSV emitter shared by the
//! command-line front end and the tests.

/// Formats `x` with 10 significant digits.
///
/// Rounding is the standard library's correctly rounded decimal conversion
/// (ties to even). Magnitudes in [1e-5, 1e10) print positionally, others in
/// scientific notation, so the same value always produces the same bytes.
pub fn sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let e = format!("{x:.9e}");
    let exp: i32 = e[e.find('e').expect("exponent") + 1..].parse().expect("exponent digits");
    if (-5..10).contains(&exp) {
        let decimals = (9 - exp) as usize;
        format!("{x:.decimals$}")
    } else {
        e
    }
}

/// Fixed 10-decimal rendering used in one-line summaries.
pub fn fixed10(x: f64) -> String {
    format!("{x:.10}")
}

/// Minimal CSV table with a fixed header; values formatted by [`sig`].
#[derive(Debug, Clone)]
pub struct CsvTable {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        CsvTable { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: &[f64]) {
        assert_eq!(row.len(), self.header.len(), "row width");
        self.rows.push(row.iter().map(|&v| sig(v)).collect());
    }

    pub fn push_raw(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.header.len(), "row width");
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn render(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.join(","));
            s.push('\n');
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ten_digits() {
        assert_eq!(sig(std::f64::consts::PI), "3.141592654");
        assert_eq!(sig(-1.0), "-1.000000000");
        assert_eq!(sig(1234.5), "1234.500000");
        assert_eq!(sig(1.0e-7), "1.000000000e-7");
        assert_eq!(sig(9.9999999996), "10.00000000");
        assert_eq!(sig(0.0), "0");
    }

    #[test]
    fn csv_render() {
        let mut t = CsvTable::new(&["a", "b"]);
        t.push(&[1.0, 0.5]);
        assert_eq!(t.render(), "a,b\n1.000000000,0.5000000000\n");
    }
}
