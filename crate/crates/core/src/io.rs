use crate::error::Result;
use std::io::Write;

/// CSV with a leading `#` provenance line and 17 significant digits per value.
pub fn write_csv<W: Write>(mut out: W, provenance: &str, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    writeln!(out, "# {provenance}")?;
    writeln!(out, "{}", header.join(","))?;
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
        writeln!(out, "{}", cells.join(","))?;
    }
    Ok(())
}

/// Pretty JSON followed by a newline.
pub fn write_json<W: Write, T: serde::Serialize>(mut out: W, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        write_csv(&mut buf, "demo", &["a", "b"], &[vec![1.0, -0.25]]).unwrap();
        let s = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "# demo");
        assert_eq!(lines[1], "a,b");
        let vals: Vec<f64> = lines[2].split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(vals, vec![1.0, -0.25]);
        assert_eq!(lines[2].split(',').next().unwrap().len(), "1.0000000000000000e0".len());
    }
}
