//! CSV formats for sweeps, theory curves and comparisons.

use std::io::{Read, Write};

use super::{ComparisonReport, ComparisonRow, CurvePoint, Engine, Property};
use crate::error::{Error, Result};
use crate::gen::clauses_for_density;
use crate::theory::{CurveId, TheoryCurve};

const SWEEP_HEADER: [&str; 12] = [
    "c", "n", "m", "a", "e", "property", "engine", "samples", "true_count", "p_hat", "ci_lo", "ci_hi",
];
const THEORY_HEADER: [&str; 3] = ["c", "curve", "value"];
const COMPARISON_HEADER: [&str; 5] = ["c", "p_hat", "theory", "residual", "ci_excludes_theory"];

/// `x` with `digits` significant digits, shortest form, like C's `%g`.
pub(crate) fn sig(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if exp < -5 || exp >= digits as i32 {
        return format!("{}e{exp}", trim_zeros(mantissa));
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn check_header(found: &csv::StringRecord, expected: &[&str]) -> Result<()> {
    if found.iter().ne(expected.iter().copied()) {
        return Err(Error::parse(1, format!("expected header {}", expected.join(","))));
    }
    Ok(())
}

fn field<T: std::str::FromStr>(rec: &csv::StringRecord, i: usize, name: &str, line: usize) -> Result<T> {
    rec.get(i)
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::parse(line, format!("bad {name} field")))
}

fn records<R: Read>(input: R, header: &[&str]) -> Result<Vec<(usize, csv::StringRecord)>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    check_header(rdr.headers()?, header)?;
    rdr.records()
        .enumerate()
        .map(|(i, rec)| {
            let rec = rec.map_err(|e| Error::parse(i + 2, e.to_string()))?;
            if rec.len() != header.len() {
                return Err(Error::parse(i + 2, format!("expected {} fields", header.len())));
            }
            Ok((i + 2, rec))
        })
        .collect()
}

pub fn write_sweep_csv<W: Write>(out: W, points: &[CurvePoint]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_HEADER)?;
    for p in points {
        w.write_record([
            sig(p.c, 6),
            p.n.to_string(),
            p.m.to_string(),
            p.a.to_string(),
            p.e.to_string(),
            p.property.to_string(),
            p.engine.to_string(),
            p.samples.to_string(),
            p.true_count.to_string(),
            sig(p.p_hat, 6),
            sig(p.ci_lo, 6),
            sig(p.ci_hi, 6),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_sweep_csv<R: Read>(input: R) -> Result<Vec<CurvePoint>> {
    records(input, &SWEEP_HEADER)?
        .into_iter()
        .map(|(line, r)| {
            let c: f64 = field(&r, 0, "c", line)?;
            let n: usize = field(&r, 1, "n", line)?;
            let property: Property = field(&r, 5, "property", line)?;
            let engine: Engine = field(&r, 6, "engine", line)?;
            Ok(CurvePoint {
                c,
                n,
                m: field(&r, 2, "m", line)?,
                a: field(&r, 3, "a", line)?,
                e: field(&r, 4, "e", line)?,
                property,
                engine,
                clauses: clauses_for_density(c, n),
                samples: field(&r, 7, "samples", line)?,
                true_count: field(&r, 8, "true_count", line)?,
                p_hat: field(&r, 9, "p_hat", line)?,
                ci_lo: field(&r, 10, "ci_lo", line)?,
                ci_hi: field(&r, 11, "ci_hi", line)?,
            })
        })
        .collect()
}

pub fn write_theory_csv<W: Write>(out: W, curves: &[TheoryCurve]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(THEORY_HEADER)?;
    for curve in curves {
        let id = curve.id.to_string();
        for &(c, v) in &curve.points {
            w.write_record([sig(c, 9), id.clone(), sig(v, 9)])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Curves in order of first appearance.
pub fn read_theory_csv<R: Read>(input: R) -> Result<Vec<TheoryCurve>> {
    let mut curves: Vec<TheoryCurve> = Vec::new();
    for (line, r) in records(input, &THEORY_HEADER)? {
        let id: CurveId = field(&r, 1, "curve", line)?;
        let point = (field(&r, 0, "c", line)?, field(&r, 2, "value", line)?);
        match curves.iter_mut().find(|t| t.id == id) {
            Some(t) => t.points.push(point),
            None => curves.push(TheoryCurve { id, points: vec![point] }),
        }
    }
    Ok(curves)
}

pub fn write_comparison_csv<W: Write>(out: W, report: &ComparisonReport) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COMPARISON_HEADER)?;
    for r in &report.rows {
        w.write_record([
            sig(r.c, 6),
            sig(r.p_hat, 6),
            sig(r.theory, 9),
            sig(r.residual, 6),
            r.ci_excludes_theory.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_comparison_csv<R: Read>(input: R) -> Result<Vec<ComparisonRow>> {
    records(input, &COMPARISON_HEADER)?
        .into_iter()
        .map(|(line, r)| {
            Ok(ComparisonRow {
                c: field(&r, 0, "c", line)?,
                p_hat: field(&r, 1, "p_hat", line)?,
                theory: field(&r, 2, "theory", line)?,
                residual: field(&r, 3, "residual", line)?,
                ci_excludes_theory: field(&r, 4, "ci_excludes_theory", line)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exp::{compare, run_sweep, MMode, SweepConfig};
    use crate::theory::{tabulate, DensityGrid};

    #[test]
    fn significant_digits() {
        assert_eq!(sig(0.0, 6), "0");
        assert_eq!(sig(1.0, 6), "1");
        assert_eq!(sig(0.05, 6), "0.05");
        assert_eq!(sig(0.15000000000000002, 6), "0.15");
        assert_eq!(sig(0.907_943_079_355_784, 9), "0.907943079");
        assert_eq!(sig(0.907_943_079_355_784, 6), "0.907943");
        assert_eq!(sig(-0.0123456789, 6), "-0.0123457");
        assert_eq!(sig(1.5e-7, 6), "1.5e-7");
        assert_eq!(sig(1234567.0, 6), "1.23457e6");
        assert_eq!(sig(999999.7, 6), "1e6");
        assert_eq!(sig(0.999_999_7, 6), "1");
    }

    fn sample_points() -> Vec<CurvePoint> {
        let cfg = SweepConfig {
            grid: DensityGrid::new(0.0, 0.5, 0.05).unwrap(),
            samples: 30,
            seed: 3,
            matched: true,
            ..SweepConfig::new(Property::Qxor, 1, 2, 40, MMode::Constant(2))
        };
        run_sweep(&cfg).unwrap()
    }

    #[test]
    fn sweep_round_trip() {
        let pts = sample_points();
        let mut buf = Vec::new();
        write_sweep_csv(&mut buf, &pts).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("c,n,m,a,e,property,engine,samples,true_count,p_hat,ci_lo,ci_hi\n"));
        assert_eq!(text.lines().count(), pts.len() + 1);
        let back = read_sweep_csv(&buf[..]).unwrap();
        for (p, q) in pts.iter().zip(&back) {
            assert!((p.c - q.c).abs() < 1e-12);
            assert_eq!((p.property, p.engine, p.true_count, p.clauses), (q.property, q.engine, q.true_count, q.clauses));
            assert!((p.ci_hi - q.ci_hi).abs() < 1e-6);
        }
        let mut again = Vec::new();
        write_sweep_csv(&mut again, &back).unwrap();
        assert_eq!(again, buf);
    }

    #[test]
    fn theory_round_trip() {
        let grid = DensityGrid::new(0.0, 0.5, 0.25).unwrap();
        let curves = vec![
            tabulate(CurveId::HInf, &grid).unwrap(),
            tabulate(CurveId::Hm(3), &grid).unwrap(),
        ];
        let mut buf = Vec::new();
        write_theory_csv(&mut buf, &curves).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("c,curve,value\n0,hinf,1\n0.25,hinf,0.907943079\n0.5,hinf,0\n0,hm(3),1\n"));
        let back = read_theory_csv(&buf[..]).unwrap();
        assert_eq!(back.len(), 2);
        assert_eq!(back[1].id, CurveId::Hm(3));
        assert!((back[0].points[1].1 - curves[0].points[1].1).abs() < 1e-9);
    }

    #[test]
    fn comparison_round_trip() {
        let pts: Vec<CurvePoint> = sample_points().into_iter().filter(|p| p.property == Property::Maxrank).collect();
        let curve = tabulate(CurveId::HInf, &DensityGrid::new(0.0, 0.5, 0.05).unwrap()).unwrap();
        let report = compare(&pts, &curve).unwrap();
        let mut buf = Vec::new();
        write_comparison_csv(&mut buf, &report).unwrap();
        let rows = read_comparison_csv(&buf[..]).unwrap();
        assert_eq!(rows.len(), report.rows.len());
        assert_eq!(
            rows.iter().filter(|r| r.ci_excludes_theory).count(),
            report.excluded_count
        );
    }

    #[test]
    fn malformed_input() {
        assert!(matches!(read_theory_csv(&b"c,value\n"[..]), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(
            read_theory_csv(&b"c,curve,value\n0.1,hx,0.5\n"[..]),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            read_theory_csv(&b"c,curve,value\n0.1,h0\n"[..]),
            Err(Error::Parse { line: 2, .. })
        ));
        let bad_sweep = "c,n,m,a,e,property,engine,samples,true_count,p_hat,ci_lo,ci_hi\n0.1,10,10,1,2,sat,graph,1,1,1,0,1\n";
        assert!(read_sweep_csv(bad_sweep.as_bytes()).is_err());
    }
}
