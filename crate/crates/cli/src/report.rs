//! Output formats: CSV tables and the plain-text `key: value` report.

use std::fmt;

use hkslope::hk::HkFunctionTable;
use hkslope::p1::SplittingType;
use hkslope::rational::{abs, int, parse_rational};
use hkslope::slopes::HnData;
use hkslope::Rational;

use crate::config::RunConfig;

fn csv_body(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("ascii output"))
}

pub fn per_degree_csv(config: &RunConfig, table: &HkFunctionTable) -> Result<String, csv::Error> {
    let rows = table.rows.values().flat_map(|row| {
        row.per_degree.iter().enumerate().map(move |(m, c)| vec![row.q.to_string(), m.to_string(), c.to_string()])
    });
    Ok(config.echo() + &csv_body(&["q", "m", "colength"], rows)?)
}

pub fn summary_csv(config: &RunConfig, table: &HkFunctionTable) -> Result<String, csv::Error> {
    let rows = table.summary().into_iter().map(|(q, phi)| vec![q.to_string(), phi.to_string()]);
    Ok(config.echo() + &csv_body(&["q", "phi"], rows)?)
}

/// Rows under a `q,phi` header; `#` lines and other sections are skipped.
pub fn read_summary(text: &str) -> Result<Vec<(u64, u64)>, String> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut in_summary = false;
    let mut out = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| e.to_string())?;
        let fields: Vec<&str> = rec.iter().collect();
        if fields.first().is_some_and(|f| *f == "q") {
            in_summary = fields == ["q", "phi"];
            continue;
        }
        if !in_summary {
            continue;
        }
        let [q, phi] = fields[..] else {
            return Err(format!("expected two fields in `{}`", fields.join(",")));
        };
        let parse = |s: &str| s.parse::<u64>().map_err(|_| format!("`{s}` is not a nonnegative integer"));
        out.push((parse(q)?, parse(phi)?));
    }
    if out.is_empty() {
        return Err("no `q,phi` rows found".into());
    }
    Ok(out)
}

/// `r1:nu1,r2:nu2,...`.
pub fn parse_hn(text: &str, n: usize, deg_y: u64) -> Result<HnData, String> {
    let mut ranks = Vec::new();
    let mut thresholds = Vec::new();
    for part in text.split(',').map(str::trim) {
        let (r, nu) = part.split_once(':').ok_or_else(|| format!("`{part}` is not `rank:threshold`"))?;
        ranks.push(r.trim().parse::<u64>().map_err(|_| format!("bad rank `{r}`"))?);
        thresholds.push(parse_rational(nu.trim()).map_err(|e| e.to_string())?);
    }
    Ok(HnData::new(n, deg_y, ranks, thresholds))
}

/// Plain-text report: the echoed config, then `key: value` lines in a fixed
/// order.
pub struct Report {
    head: String,
    lines: Vec<(String, String)>,
}

impl Report {
    pub fn new(config: Option<&RunConfig>, command: &str) -> Self {
        let head = config.map(RunConfig::echo).unwrap_or_default();
        Report { head, lines: vec![("command".into(), command.into())] }
    }

    pub fn line(&mut self, key: impl Into<String>, value: impl fmt::Display) {
        self.lines.push((key.into(), value.to_string()));
    }

    pub fn twists(&mut self, s: &SplittingType) {
        let t: Vec<String> = s.twists.iter().map(u64::to_string).collect();
        self.line(format!("twists q={}", s.q), t.join(","));
    }

    /// `phi(q)`, `|phi(q) - e q^2|` and that difference over `q`.
    pub fn residuals(&mut self, table: &HkFunctionTable, ehk: &Rational) {
        for (q, phi) in table.summary() {
            let qr = int(q as i128);
            let diff = abs(&(int(phi as i128) - ehk * qr * qr));
            self.line(format!("phi q={q}"), phi);
            self.line(format!("residual q={q}"), diff);
            self.line(format!("residual_over_q q={q}"), diff / qr);
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.head)?;
        for (k, v) in &self.lines {
            writeln!(f, "{k}: {v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use hkslope::rational::rat;

    #[test]
    fn summary_round_trip() {
        let config = RunConfig::parse("p = 2\nvars = x, y\ngens = x; y\nq = 2, 4\n").unwrap();
        let t = HkFunctionTable::from_summary(&[(2, 4), (4, 16)]);
        let text = per_degree_csv(&config, &t).unwrap() + "\n" + &summary_csv(&config, &t).unwrap();
        assert_eq!(read_summary(&text).unwrap(), vec![(2, 4), (4, 16)]);
        assert!(read_summary("q,m,colength\n2,0,1\n").is_err());
    }

    #[test]
    fn hn_syntax() {
        let hn = parse_hn("1:4/3, 1:5/3", 3, 3).unwrap();
        assert_eq!(hn.thresholds, vec![rat(4, 3), rat(5, 3)]);
        assert_eq!(hn.to_string(), "1:4/3,1:5/3");
        assert!(parse_hn("2-3/2", 3, 3).is_err());
    }

    #[test]
    fn report_lines() {
        let mut r = Report::new(None, "formula");
        r.line("ehk", rat(-14, 6));
        assert_eq!(r.to_string(), "command: formula\nehk: -7/3\n");
    }
}
