//! JSON input formats and 17-significant-digit output.

use std::io;

use num_complex::Complex64;
use serde::ser::Serialize;
use serde::Deserialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::error::{DwError, Result};
use crate::space::{BiDegreeSeries, PowerSeries, TrigPoly, VectorSeries, WeightParam};
use crate::wolff::{SolveOptions, WolffInstance};

/// A coefficient: a real number or a [re, im] pair.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
pub enum Coef {
    Real(f64),
    Pair([f64; 2]),
}

impl From<Coef> for Complex64 {
    fn from(c: Coef) -> Self {
        match c {
            Coef::Real(x) => Complex64::new(x, 0.0),
            Coef::Pair([re, im]) => Complex64::new(re, im),
        }
    }
}

/// Power series as its coefficient list a_0, a_1, ...
#[derive(Debug, Clone, Deserialize)]
#[serde(transparent)]
pub struct SeriesJson(pub Vec<Coef>);

impl From<SeriesJson> for PowerSeries {
    fn from(s: SeriesJson) -> Self {
        PowerSeries::new(s.0.into_iter().map(Complex64::from).collect())
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct BiTerm {
    pub j: u32,
    pub k: u32,
    pub c: Coef,
}

/// {"terms": [{"j":..,"k":..,"c":..}, ...]}
#[derive(Debug, Clone, Deserialize)]
pub struct BiDegreeJson {
    pub terms: Vec<BiTerm>,
}

impl From<BiDegreeJson> for BiDegreeSeries {
    fn from(b: BiDegreeJson) -> Self {
        BiDegreeSeries::new(b.terms.into_iter().map(|t| ((t.j, t.k), t.c.into())))
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct TrigTerm {
    pub n: i32,
    pub c: Coef,
}

/// {"modes": [{"n":..,"c":..}, ...]}
#[derive(Debug, Clone, Deserialize)]
pub struct TrigJson {
    pub modes: Vec<TrigTerm>,
}

impl From<TrigJson> for TrigPoly {
    fn from(t: TrigJson) -> Self {
        TrigPoly::new(t.modes.into_iter().map(|m| (m.n, m.c.into())))
    }
}

/// {"alpha": .., "F": [series, ..], "H": series, "h": series, "options": {..}}
#[derive(Debug, Clone, Deserialize)]
pub struct InstanceJson {
    pub alpha: f64,
    #[serde(rename = "F")]
    pub f: Vec<SeriesJson>,
    #[serde(rename = "H")]
    pub big_h: SeriesJson,
    pub h: SeriesJson,
    #[serde(default)]
    pub options: Option<SolveOptions>,
}

pub fn parse_instance(text: &str) -> Result<(WolffInstance, SolveOptions)> {
    let j: InstanceJson = serde_json::from_str(text).map_err(|e| DwError::Parse(e.to_string()))?;
    let alpha = WeightParam::new(j.alpha)?;
    let f = VectorSeries::new(j.f.into_iter().map(PowerSeries::from).collect());
    Ok((WolffInstance::new(f, j.big_h.into(), j.h.into(), alpha), j.options.unwrap_or_default()))
}

pub fn parse_bidegree(text: &str) -> Result<BiDegreeSeries> {
    let j: BiDegreeJson = serde_json::from_str(text).map_err(|e| DwError::Parse(e.to_string()))?;
    Ok(j.into())
}

pub fn parse_trig(text: &str) -> Result<TrigPoly> {
    let j: TrigJson = serde_json::from_str(text).map_err(|e| DwError::Parse(e.to_string()))?;
    Ok(j.into())
}

/// x with 17 significant digits.
pub fn fmt17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

/// Pretty JSON whose floats carry 17 significant digits.
struct Digits17(PrettyFormatter<'static>);

macro_rules! delegate {
    ($($name:ident($($arg:ident: $ty:ty),*)),* $(,)?) => {
        $(fn $name<W: ?Sized + io::Write>(&mut self, w: &mut W $(, $arg: $ty)*) -> io::Result<()> {
            self.0.$name(w $(, $arg)*)
        })*
    };
}

impl Formatter for Digits17 {
    delegate! {
        begin_array(),
        end_array(),
        begin_array_value(first: bool),
        end_array_value(),
        begin_object(),
        end_object(),
        begin_object_key(first: bool),
        begin_object_value(),
        end_object_value(),
    }

    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(fmt17(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }
}

pub fn to_json17<T: Serialize>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Digits17(PrettyFormatter::new()));
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    String::from_utf8(buf).map_err(|e| DwError::Io(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_instance() {
        let text = r#"{"alpha": 0.5, "F": [[0, 0.5], [0.5]], "H": [0, [0.5, 0]], "h": [1],
                       "options": {"n_r": 24}}"#;
        let (inst, opts) = parse_instance(text).unwrap();
        assert_eq!(inst.f.len(), 2);
        assert_eq!(inst.big_h, PowerSeries::from_real(&[0.0, 0.5]));
        assert_eq!(opts.n_r, 24);
        assert_eq!(opts.m, SolveOptions::default().m);
        assert!(matches!(parse_instance(r#"{"alpha": 1.5, "F": [], "H": [], "h": []}"#), Err(DwError::InvalidAlpha(_))));
        assert!(matches!(parse_instance("{"), Err(DwError::Parse(_))));
    }

    #[test]
    fn parses_series_forms() {
        let b = parse_bidegree(r#"{"terms": [{"j": 0, "k": 1, "c": 1}, {"j": 2, "k": 0, "c": [0, -1]}]}"#).unwrap();
        assert_eq!(b.coeff(0, 1), Complex64::new(1.0, 0.0));
        assert_eq!(b.coeff(2, 0), Complex64::new(0.0, -1.0));
        let t = parse_trig(r#"{"modes": [{"n": -2, "c": 1}]}"#).unwrap();
        assert_eq!(t.max_mode(), 2);
    }

    #[test]
    fn seventeen_digits() {
        assert_eq!(fmt17(0.1), "1.0000000000000001e-1");
        let s = to_json17(&serde_json::json!({"x": 1.0 / 3.0, "v": [2.0, f64::NAN]})).unwrap();
        assert!(s.contains("3.3333333333333331e-1"), "{s}");
        assert!(s.contains("null"));
        let back: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["x"].as_f64().unwrap(), 1.0 / 3.0);
    }
}
