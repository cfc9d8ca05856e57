//! Run configuration: `key = value` files, flag overrides and value parsing.
//!
//! Precedence is flag, then config file, then (for `out_dir` only) the
//! `RIFSCAT_OUT_DIR` environment variable, then the built-in default.

use std::collections::BTreeMap;
use std::path::Path;

use rifscat::medium::{velocity_matched, MuRule, StepConfig, DEFAULT_LAMBDA_REF};
use rifscat::{Medium, C_LIGHT};

use crate::error::CliError;

pub const OUT_DIR_ENV: &str = "RIFSCAT_OUT_DIR";

/// Every key a config file may set. Flags use the same names with `-` for `_`.
pub const KNOWN_KEYS: &[&str] = &[
    "out_dir",
    "output",
    "format",
    "threads",
    "delta_n",
    "u",
    "lambda_ref",
    "mu_rule",
    "omega_min",
    "omega_max",
    "points",
    "grid_spacing",
    "side",
    "interval_points",
    "omega",
    "lambda",
    "lambda_min",
    "lambda_max",
    "delta_n_list",
    "velocities",
    "scan_points",
    "configs",
    "seed",
];

/// Keys that only move or schedule the output; they are left out of the config hash.
pub const PLACEMENT_KEYS: &[&str] = &["out_dir", "output", "threads"];

pub fn normalize_key(k: &str) -> String {
    k.trim().replace('-', "_")
}

/// Parses a `key = value` file. `#` starts a comment; blank lines are skipped.
pub fn parse_config_text(text: &str, origin: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(CliError::Config(format!("{origin}:{}: expected `key = value`, got `{line}`", n + 1)));
        };
        let key = normalize_key(k);
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(CliError::Config(format!("{origin}:{}: unknown key `{key}`", n + 1)));
        }
        let value = v.trim().trim_matches('"').to_string();
        if value.is_empty() {
            return Err(CliError::Config(format!("{origin}:{}: empty value for `{key}`", n + 1)));
        }
        if map.insert(key.clone(), value).is_some() {
            return Err(CliError::Config(format!("{origin}:{}: `{key}` set twice", n + 1)));
        }
    }
    Ok(map)
}

pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read config file {}: {e}", path.display())))?;
    parse_config_text(&text, &path.display().to_string())
}

/// Layered lookup that remembers every value it hands out.
#[derive(Debug, Default)]
pub struct Resolver {
    flags: BTreeMap<String, String>,
    file: BTreeMap<String, String>,
    env_out_dir: Option<String>,
    pub resolved: BTreeMap<String, String>,
}

impl Resolver {
    pub fn new(
        flags: BTreeMap<String, String>,
        file: BTreeMap<String, String>,
        env_out_dir: Option<String>,
    ) -> Self {
        Self { flags, file, env_out_dir, resolved: BTreeMap::new() }
    }

    fn raw(&self, key: &str) -> Option<String> {
        let env = (key == "out_dir").then(|| self.env_out_dir.clone()).flatten();
        self.flags.get(key).or_else(|| self.file.get(key)).cloned().or(env)
    }

    pub fn get<T>(&mut self, key: &str, default: &str, parse: impl Fn(&str) -> Result<T, String>) -> Result<T, CliError> {
        let raw = self.raw(key).unwrap_or_else(|| default.to_string());
        let v = parse(&raw).map_err(|e| CliError::Config(format!("{key} = `{raw}`: {e}")))?;
        self.resolved.insert(key.to_string(), raw);
        Ok(v)
    }

    pub fn get_opt<T>(&mut self, key: &str, parse: impl Fn(&str) -> Result<T, String>) -> Result<Option<T>, CliError> {
        let Some(raw) = self.raw(key) else { return Ok(None) };
        let v = parse(&raw).map_err(|e| CliError::Config(format!("{key} = `{raw}`: {e}")))?;
        self.resolved.insert(key.to_string(), raw);
        Ok(Some(v))
    }

    /// Resolved values that determine the numerical content, as `key=value` lines.
    pub fn canonical(&self, command: &str) -> String {
        let mut s = format!("command={command}\n");
        for (k, v) in &self.resolved {
            if !PLACEMENT_KEYS.contains(&k.as_str()) {
                s.push_str(&format!("{k}={v}\n"));
            }
        }
        s
    }
}

pub fn parse_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| "not a number".to_string())?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err("not finite".into())
    }
}

pub fn parse_positive(s: &str) -> Result<f64, String> {
    let v = parse_f64(s)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err("must be > 0".into())
    }
}

pub fn parse_delta_n(s: &str) -> Result<f64, String> {
    let v = parse_f64(s)?;
    if v >= 0.0 {
        Ok(v)
    } else {
        Err("must be >= 0".into())
    }
}

pub fn parse_count(min: usize) -> impl Fn(&str) -> Result<usize, String> {
    move |s| {
        let v: usize = s.trim().parse().map_err(|_| "not a non-negative integer".to_string())?;
        if v >= min {
            Ok(v)
        } else {
            Err(format!("must be at least {min}"))
        }
    }
}

pub fn parse_u64(s: &str) -> Result<u64, String> {
    s.trim().parse().map_err(|_| "not a non-negative integer".to_string())
}

/// Length in metres: `800nm`, `1.26um`, `3.6µm`, `8e-7m` or a bare number of metres.
pub fn parse_length(s: &str) -> Result<f64, String> {
    let t = s.trim();
    let (num, scale) = if let Some(n) = t.strip_suffix("nm") {
        (n, 1e-9)
    } else if let Some(n) = t.strip_suffix("um").or_else(|| t.strip_suffix("µm")) {
        (n, 1e-6)
    } else if let Some(n) = t.strip_suffix("mm") {
        (n, 1e-3)
    } else if let Some(n) = t.strip_suffix('m') {
        (n, 1.0)
    } else {
        (t, 1.0)
    };
    let v = parse_positive(num)? * scale;
    Ok(v)
}

pub fn parse_list<T>(parse: impl Fn(&str) -> Result<T, String>) -> impl Fn(&str) -> Result<Vec<T>, String> {
    move |s| {
        let items: Vec<&str> = s.split(',').map(str::trim).filter(|x| !x.is_empty()).collect();
        if items.is_empty() {
            return Err("empty list".into());
        }
        items.into_iter().map(&parse).collect()
    }
}

/// Front speed as written by the user.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Velocity {
    /// u/c.
    Fraction(f64),
    MetresPerSecond(f64),
    /// u equals the lab group velocity at this vacuum wavelength.
    CenterWavelength(f64),
}

/// `2/3c`, `0.6667c`, `1.98e8m/s`, `400nm`; a bare number is u/c when <= 1 and m/s otherwise.
pub fn parse_velocity(s: &str) -> Result<Velocity, String> {
    let t = s.trim();
    if let Some(v) = t.strip_suffix("m/s") {
        return Ok(Velocity::MetresPerSecond(parse_positive(v)?));
    }
    if let Some(f) = t.strip_suffix('c') {
        let frac = match f.split_once('/') {
            Some((a, b)) => parse_f64(a)? / parse_positive(b)?,
            None => parse_f64(f)?,
        };
        return if frac > 0.0 && frac < 1.0 {
            Ok(Velocity::Fraction(frac))
        } else {
            Err("u/c must lie in (0, 1)".into())
        };
    }
    if t.ends_with('m') {
        return Ok(Velocity::CenterWavelength(parse_length(t)?));
    }
    let v = parse_positive(t)?;
    if v < 1.0 {
        Ok(Velocity::Fraction(v))
    } else {
        Ok(Velocity::MetresPerSecond(v))
    }
}

impl Velocity {
    pub fn resolve(&self, medium: &Medium) -> Result<f64, String> {
        let u = match *self {
            Velocity::Fraction(f) => f * C_LIGHT,
            Velocity::MetresPerSecond(v) => v,
            Velocity::CenterWavelength(l) => velocity_matched(medium, l).map_err(|e| e.to_string())?,
        };
        if u > 0.0 && u < C_LIGHT {
            Ok(u)
        } else {
            Err(format!("resolved front speed {u} m/s is not in (0, c)"))
        }
    }
}

pub fn parse_mu_rule(s: &str) -> Result<MuRule, String> {
    match s.trim() {
        "linear" => Ok(MuRule::Linear),
        "exact" => Ok(MuRule::Exact),
        _ => Err("expected `linear` or `exact`".into()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

pub fn parse_format(s: &str) -> Result<Format, String> {
    match s.trim() {
        "csv" => Ok(Format::Csv),
        "json" => Ok(Format::Json),
        _ => Err("expected `csv` or `json`".into()),
    }
}

/// Step parameters shared by all physics subcommands.
#[derive(Debug, Clone)]
pub struct StepArgs {
    pub delta_n: f64,
    pub velocity: Velocity,
    pub lambda_ref: f64,
    pub mu_rule: MuRule,
}

pub const DEFAULT_DELTA_N: &str = "2e-6";
pub const DEFAULT_U: &str = "2/3c";
pub const DEFAULT_LADDER: &str = "1e-6,1e-5,1e-4,1e-3,1e-2,1e-1";
pub const DEFAULT_VELOCITIES: &str = "396.34nm,800nm,2.0525/3c,1990nm";

impl StepArgs {
    pub fn resolve(r: &mut Resolver) -> Result<Self, CliError> {
        Ok(Self {
            delta_n: r.get("delta_n", DEFAULT_DELTA_N, parse_delta_n)?,
            velocity: r.get("u", DEFAULT_U, parse_velocity)?,
            lambda_ref: r.get("lambda_ref", &format!("{DEFAULT_LAMBDA_REF:e}"), parse_length)?,
            mu_rule: r.get("mu_rule", "linear", parse_mu_rule)?,
        })
    }

    pub fn step(&self, delta_n: f64, velocity: Velocity) -> Result<StepConfig<f64>, CliError> {
        let m = Medium::fused_silica();
        let u = velocity.resolve(&m).map_err(CliError::Config)?;
        StepConfig::with_reference(m, delta_n, u, self.lambda_ref, self.mu_rule)
            .map_err(|e| CliError::Config(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_text_parses_and_rejects() {
        let m = parse_config_text("# run\ndelta-n = 2e-6 # step\nu = \"400nm\"\n\n", "t").unwrap();
        assert_eq!(m["delta_n"], "2e-6");
        assert_eq!(m["u"], "400nm");
        assert!(matches!(parse_config_text("bogus = 1", "t"), Err(CliError::Config(_))));
        assert!(matches!(parse_config_text("delta_n 1", "t"), Err(CliError::Config(_))));
        assert!(matches!(parse_config_text("u = 1\nu = 2", "t"), Err(CliError::Config(_))));
    }

    #[test]
    fn flags_override_file_and_env_is_last() {
        let flags = BTreeMap::from([("delta_n".to_string(), "1e-4".to_string())]);
        let file = BTreeMap::from([
            ("delta_n".to_string(), "1e-3".to_string()),
            ("points".to_string(), "7".to_string()),
        ]);
        let mut r = Resolver::new(flags, file, Some("/env".into()));
        assert_eq!(r.get("delta_n", "2e-6", parse_delta_n).unwrap(), 1e-4);
        assert_eq!(r.get("points", "9", parse_count(2)).unwrap(), 7);
        assert_eq!(r.get("out_dir", ".", |s| Ok(s.to_string())).unwrap(), "/env");
        assert_eq!(r.get("seed", "5", parse_u64).unwrap(), 5);
        let canon = r.canonical("x");
        assert!(canon.contains("delta_n=1e-4") && !canon.contains("out_dir"));
    }

    #[test]
    fn velocity_forms() {
        assert_eq!(parse_velocity("2/3c").unwrap(), Velocity::Fraction(2.0 / 3.0));
        assert_eq!(parse_velocity("0.5c").unwrap(), Velocity::Fraction(0.5));
        assert_eq!(parse_velocity("0.5").unwrap(), Velocity::Fraction(0.5));
        assert_eq!(parse_velocity("1.9e8m/s").unwrap(), Velocity::MetresPerSecond(1.9e8));
        assert_eq!(parse_velocity("1.9e8").unwrap(), Velocity::MetresPerSecond(1.9e8));
        match parse_velocity("1.26um").unwrap() {
            Velocity::CenterWavelength(l) => assert!((l - 1.26e-6).abs() < 1e-18),
            v => panic!("{v:?}"),
        }
        assert!(parse_velocity("1.2c").is_err());
        assert!(parse_velocity("fast").is_err());
        let u = parse_velocity("400nm").unwrap().resolve(&Medium::fused_silica()).unwrap();
        assert!(u > 0.6 * C_LIGHT && u < 0.7 * C_LIGHT);
        assert!(Velocity::MetresPerSecond(4e8).resolve(&Medium::fused_silica()).is_err());
    }

    #[test]
    fn lists_and_lengths() {
        assert_eq!(parse_list(parse_positive)("1e-6, 1e-5").unwrap(), vec![1e-6, 1e-5]);
        assert!(parse_list(parse_positive)(" , ").is_err());
        assert!((parse_length("800nm").unwrap() / 800e-9 - 1.0).abs() < 1e-15);
        assert_eq!(parse_length("8e-7").unwrap(), 8e-7);
        assert!(parse_length("-3nm").is_err());
    }
}
