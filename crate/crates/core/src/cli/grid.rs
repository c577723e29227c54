//! Parameter grids: `start:step:stop` ranges, comma lists, and grid files.

use num_complex::Complex64;
use serde_json::Value;

use crate::params::{parse_complex, IntegrandSpec};

/// Largest number of values a single range may expand to.
pub const MAX_RANGE_LEN: usize = 1_000_000;

fn parse_f64(s: &str) -> Result<f64, String> {
    s.trim().parse::<f64>().map_err(|_| format!("bad number '{s}'"))
}

fn expand_range(start: f64, step: f64, stop: f64) -> Result<Vec<f64>, String> {
    if !(start.is_finite() && step.is_finite() && stop.is_finite()) {
        return Err("range bounds must be finite".into());
    }
    if step == 0.0 {
        return Err("range step must be nonzero".into());
    }
    let span = (stop - start) / step;
    if span < -0.5 {
        return Err(format!("range {start}:{step}:{stop} is empty"));
    }
    // stop is included if it lies within half a step of the last point
    let count = (span + 0.5).floor() as usize + 1;
    if count > MAX_RANGE_LEN {
        return Err(format!("range expands to {count} values"));
    }
    Ok((0..count).map(|i| start + i as f64 * step).collect())
}

/// Real axis values: `start:step:stop`, a comma list, or one number.
pub fn parse_real_grid(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.len() {
        1 => s.split(',').map(parse_f64).collect(),
        3 => expand_range(parse_f64(parts[0])?, parse_f64(parts[1])?, parse_f64(parts[2])?),
        _ => Err(format!("bad range '{s}', expected start:step:stop")),
    }
}

/// Complex values: a real range, or a comma list of complex literals.
pub fn parse_complex_grid(s: &str) -> Result<Vec<Complex64>, String> {
    if s.contains(':') {
        return Ok(parse_real_grid(s)?.into_iter().map(|x| Complex64::new(x, 0.0)).collect());
    }
    s.split(',').map(|t| parse_complex(t).map_err(|e| e.to_string())).collect()
}

fn spec_from_value(v: Value) -> Result<IntegrandSpec, String> {
    let v = match v {
        Value::Object(mut m) if m.contains_key("spec") => m.remove("spec").unwrap_or(Value::Null),
        other => other,
    };
    let s: IntegrandSpec = serde_json::from_value(v).map_err(|e| e.to_string())?;
    IntegrandSpec::new(s.n, s.p, s.theta, s.zeta, s.upper).map_err(|e| e.to_string())
}

/// Read a grid file: a JSON array, or JSON lines. Each entry is a spec or an
/// object carrying one under `spec`, so report streams read back as grids.
pub fn read_specs(text: &str) -> Result<Vec<IntegrandSpec>, String> {
    let trimmed = text.trim_start();
    let values: Vec<Value> = if trimmed.starts_with('[') {
        serde_json::from_str(trimmed).map_err(|e| format!("bad grid file: {e}"))?
    } else {
        text.lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| serde_json::from_str(l).map_err(|e| format!("bad grid line {}: {e}", i + 1)))
            .collect::<Result<_, _>>()?
    };
    if values.is_empty() {
        return Err("grid file has no entries".into());
    }
    values
        .into_iter()
        .enumerate()
        .map(|(i, v)| spec_from_value(v).map_err(|e| format!("grid entry {i}: {e}")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::UpperLimit;

    #[test]
    fn ranges() {
        assert_eq!(parse_real_grid("0:0.5:2").unwrap(), vec![0.0, 0.5, 1.0, 1.5, 2.0]);
        // stop within half a step is included, beyond it is not
        assert_eq!(parse_real_grid("0.3:0.4:2.7").unwrap().len(), 7);
        assert_eq!(parse_real_grid("0:1:2.4").unwrap().len(), 3);
        assert_eq!(parse_real_grid("1:-0.5:0").unwrap(), vec![1.0, 0.5, 0.0]);
        assert_eq!(parse_real_grid("1,2.5,-3").unwrap(), vec![1.0, 2.5, -3.0]);
        assert!(parse_real_grid("0:0:1").is_err());
        assert!(parse_real_grid("1:1:0").is_err());
        assert!(parse_real_grid("1:2").is_err());
    }

    #[test]
    fn complex_lists() {
        let g = parse_complex_grid("0.5,1+2i,-0.5i").unwrap();
        assert_eq!(g, vec![Complex64::new(0.5, 0.0), Complex64::new(1.0, 2.0), Complex64::new(0.0, -0.5)]);
        assert_eq!(parse_complex_grid("0:0.1:0.9").unwrap().len(), 10);
    }

    #[test]
    fn grid_files() {
        let arr = r#"[{"n":1,"p":"0.5","theta":1.0,"zeta":2.0,"upper":"1"},
                      {"n":2,"p":"0.5i","theta":1.0,"zeta":2.0,"upper":"inf"}]"#;
        let specs = read_specs(arr).unwrap();
        assert_eq!(specs.len(), 2);
        assert_eq!(specs[1].upper, UpperLimit::Infinity);
        assert_eq!(specs[1].p, Complex64::new(0.0, 0.5));
        let lines = r#"{"spec":{"n":1,"p":"0.5","theta":1.0,"zeta":2.0,"upper":0.5},"verdict":"Agree"}

{"n":3,"p":"1","theta":1.0,"zeta":2.0,"upper":"1"}"#;
        let specs = read_specs(lines).unwrap();
        assert_eq!(specs[0].upper, UpperLimit::Finite(0.5));
        assert_eq!(specs[1].n, 3.0);
        assert!(read_specs("[]").is_err());
        assert!(read_specs("{not json").is_err());
        assert!(read_specs(r#"[{"n":-1,"p":"0","theta":1,"zeta":1,"upper":"1"}]"#).is_err());
    }
}
