//! Run configuration: defaults, INI file loading, flag overrides, and
//! per-subcommand validation. The file format is flat `key = value` lines
//! under one `[subcommand]` section per command (a bare `[global]` section
//! applies everywhere), chosen for diff-friendliness and zero-dependency
//! parsing.

use std::collections::BTreeMap;

use crate::spectral::DiagonalOperator;

pub const USAGE: &str = "\
usage: tfschro <command> [--config FILE] [--key value ...]

commands:
  mlf eval            one Mittag-Leffler value on the ray (needs --t)
  mlf scan            table of E_{α,β}(-it) over a log-spaced t range
  solve               linear solve of the time-fractional Schrödinger equation
  verify <check>      coercivity|mrconstant|ialpha|mikhlin|homogeneous|
                      continuity|embedding|fklemma
  semilinear          Picard run of the cubic semilinear equation
  quasilinear         Picard run of the diagonal quasilinear family
  oracle regen        regenerate the extended-precision reference table
  accept              run the full acceptance suite (exit 0 iff all pass)

common keys (flags override --config):
  --alpha A --beta B --p P --horizon T --steps N --modes M
  --operator dirichlet|λ1,λ2,... --ensemble K --seed S --mode-decay D
  --tol E --max-iter K --delta D --radius R --u0-scale S --f-scale S
  --t X --t-min A --t-max B --points N --out DIR --plot-data";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    MlfEval,
    MlfScan,
    Solve,
    Verify(String),
    Semilinear,
    Quasilinear,
    OracleRegen,
    Accept,
}

impl Command {
    pub fn section(&self) -> String {
        match self {
            Command::MlfEval => "mlf-eval".into(),
            Command::MlfScan => "mlf-scan".into(),
            Command::Solve => "solve".into(),
            Command::Verify(c) => format!("verify-{c}"),
            Command::Semilinear => "semilinear".into(),
            Command::Quasilinear => "quasilinear".into(),
            Command::OracleRegen => "oracle-regen".into(),
            Command::Accept => "accept".into(),
        }
    }
}

pub const VERIFY_CHECKS: [&str; 8] = [
    "coercivity",
    "mrconstant",
    "ialpha",
    "mikhlin",
    "homogeneous",
    "continuity",
    "embedding",
    "fklemma",
];

#[derive(Clone, Debug, PartialEq)]
pub enum OperatorSpec {
    Dirichlet1d,
    Explicit(Vec<f64>),
}

impl OperatorSpec {
    pub fn build(&self, modes: usize) -> Result<DiagonalOperator, String> {
        match self {
            OperatorSpec::Dirichlet1d => Ok(DiagonalOperator::dirichlet_laplacian_1d(modes)),
            OperatorSpec::Explicit(eigs) => {
                DiagonalOperator::new(eigs.clone()).map_err(|e| e.to_string())
            }
        }
    }

    fn format(&self) -> String {
        match self {
            OperatorSpec::Dirichlet1d => "dirichlet".into(),
            OperatorSpec::Explicit(eigs) => eigs
                .iter()
                .map(|l| format!("{l}"))
                .collect::<Vec<_>>()
                .join(","),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub alpha: f64,
    pub beta: f64,
    pub p: f64,
    pub horizon: f64,
    pub steps: usize,
    pub modes: usize,
    pub operator: OperatorSpec,
    pub ensemble: usize,
    pub seed: u64,
    pub mode_decay: f64,
    pub smoothness: usize,
    pub tol: f64,
    pub max_iter: usize,
    pub delta: f64,
    pub radius: f64,
    pub u0_scale: f64,
    pub f_scale: f64,
    pub t_point: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
    pub out_dir: String,
    pub plot_data: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            alpha: 0.5,
            beta: 1.0,
            p: 2.0,
            horizon: 1.0,
            steps: 1024,
            modes: 64,
            operator: OperatorSpec::Dirichlet1d,
            ensemble: 20,
            seed: 1,
            mode_decay: 1.0,
            smoothness: 3,
            tol: 1e-8,
            max_iter: 50,
            delta: 0.02,
            radius: 0.5,
            u0_scale: 1.0,
            f_scale: 1.0,
            t_point: 1.0,
            t_min: 1e-3,
            t_max: 100.0,
            points: 200,
            out_dir: "out".into(),
            plot_data: false,
        }
    }
}

impl RunConfig {
    pub fn build_operator(&self) -> Result<DiagonalOperator, String> {
        self.operator.build(self.modes)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let bad = |k: &str, v: &str| format!("invalid value `{v}` for key `{k}`");
        match key {
            "alpha" => self.alpha = value.parse().map_err(|_| bad(key, value))?,
            "beta" => self.beta = value.parse().map_err(|_| bad(key, value))?,
            "p" => self.p = value.parse().map_err(|_| bad(key, value))?,
            "horizon" => self.horizon = value.parse().map_err(|_| bad(key, value))?,
            "steps" => self.steps = value.parse().map_err(|_| bad(key, value))?,
            "modes" => self.modes = value.parse().map_err(|_| bad(key, value))?,
            "operator" => {
                self.operator = if value == "dirichlet" || value.starts_with("dirichlet_laplacian_1d")
                {
                    OperatorSpec::Dirichlet1d
                } else {
                    let eigs: Result<Vec<f64>, _> =
                        value.split(',').map(|s| s.trim().parse()).collect();
                    OperatorSpec::Explicit(eigs.map_err(|_| bad(key, value))?)
                }
            }
            "ensemble" => self.ensemble = value.parse().map_err(|_| bad(key, value))?,
            "seed" => self.seed = value.parse().map_err(|_| bad(key, value))?,
            "mode-decay" | "mode_decay" => {
                self.mode_decay = value.parse().map_err(|_| bad(key, value))?
            }
            "smoothness" => self.smoothness = value.parse().map_err(|_| bad(key, value))?,
            "tol" => self.tol = value.parse().map_err(|_| bad(key, value))?,
            "max-iter" | "max_iter" => self.max_iter = value.parse().map_err(|_| bad(key, value))?,
            "delta" => self.delta = value.parse().map_err(|_| bad(key, value))?,
            "radius" => self.radius = value.parse().map_err(|_| bad(key, value))?,
            "u0-scale" | "u0_scale" => self.u0_scale = value.parse().map_err(|_| bad(key, value))?,
            "f-scale" | "f_scale" => self.f_scale = value.parse().map_err(|_| bad(key, value))?,
            "t" => self.t_point = value.parse().map_err(|_| bad(key, value))?,
            "t-min" | "t_min" => self.t_min = value.parse().map_err(|_| bad(key, value))?,
            "t-max" | "t_max" => self.t_max = value.parse().map_err(|_| bad(key, value))?,
            "points" => self.points = value.parse().map_err(|_| bad(key, value))?,
            "out" => self.out_dir = value.to_string(),
            "plot-data" | "plot_data" => {
                self.plot_data = value.parse().map_err(|_| bad(key, value))?
            }
            _ => return Err(format!("unknown key `{key}`")),
        }
        Ok(())
    }

    /// Apply `key = value` lines from the (sub)sections that match.
    fn apply_ini(&mut self, text: &str, section: &str) -> Result<(), String> {
        let mut current = String::from("global");
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
                continue;
            }
            if line.starts_with('[') && line.ends_with(']') {
                current = line[1..line.len() - 1].trim().to_string();
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected `key = value`", lineno + 1))?;
            if current == "global" || current == section {
                self.set(key.trim(), value.trim())
                    .map_err(|e| format!("line {}: {e}", lineno + 1))?;
            }
        }
        Ok(())
    }

    /// Full effective configuration as INI, parseable back into the same
    /// RunConfig.
    pub fn echo_ini(&self, cmd: &Command) -> String {
        let mut kv = BTreeMap::new();
        kv.insert("alpha", format!("{}", self.alpha));
        kv.insert("beta", format!("{}", self.beta));
        kv.insert("p", format!("{}", self.p));
        kv.insert("horizon", format!("{}", self.horizon));
        kv.insert("steps", format!("{}", self.steps));
        kv.insert("modes", format!("{}", self.modes));
        kv.insert("operator", self.operator.format());
        kv.insert("ensemble", format!("{}", self.ensemble));
        kv.insert("seed", format!("{}", self.seed));
        kv.insert("mode-decay", format!("{}", self.mode_decay));
        kv.insert("smoothness", format!("{}", self.smoothness));
        kv.insert("tol", format!("{}", self.tol));
        kv.insert("max-iter", format!("{}", self.max_iter));
        kv.insert("delta", format!("{}", self.delta));
        kv.insert("radius", format!("{}", self.radius));
        kv.insert("u0-scale", format!("{}", self.u0_scale));
        kv.insert("f-scale", format!("{}", self.f_scale));
        kv.insert("t", format!("{}", self.t_point));
        kv.insert("t-min", format!("{}", self.t_min));
        kv.insert("t-max", format!("{}", self.t_max));
        kv.insert("points", format!("{}", self.points));
        kv.insert("out", self.out_dir.clone());
        kv.insert("plot-data", format!("{}", self.plot_data));
        let mut out = format!("[{}]\n", cmd.section());
        for (k, v) in kv {
            out.push_str(&format!("{k} = {v}\n"));
        }
        out
    }

    pub fn validate(&self, cmd: &Command) -> Result<(), String> {
        if self.steps < 8 {
            return Err(format!("steps = {} violates steps >= 8", self.steps));
        }
        if self.modes < 1 {
            return Err("modes must be >= 1".into());
        }
        if !(self.horizon > 0.0) {
            return Err(format!("horizon = {} must be positive", self.horizon));
        }
        let needs_strict_alpha = matches!(
            cmd,
            Command::Solve
                | Command::Verify(_)
                | Command::Semilinear
                | Command::Quasilinear
                | Command::Accept
        );
        if needs_strict_alpha && !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(format!("alpha = {} must lie in (0,1)", self.alpha));
        }
        if matches!(cmd, Command::MlfEval | Command::MlfScan)
            && !(self.alpha > 0.0 && self.alpha <= 1.0)
        {
            return Err(format!("alpha = {} must lie in (0,1]", self.alpha));
        }
        let needs_alpha_p = matches!(cmd, Command::Semilinear | Command::Quasilinear)
            || matches!(cmd, Command::Verify(c) if c == "continuity" || c == "embedding" || c == "fklemma" || c == "homogeneous");
        if needs_alpha_p && self.alpha * self.p <= 1.0 {
            return Err(format!(
                "alpha*p must exceed 1 (alpha = {}, p = {})",
                self.alpha, self.p
            ));
        }
        if let Command::Verify(check) = cmd {
            if !VERIFY_CHECKS.contains(&check.as_str()) {
                return Err(format!(
                    "unknown check `{check}` (expected one of {})",
                    VERIFY_CHECKS.join("|")
                ));
            }
        }
        if self.ensemble < 1 {
            return Err("ensemble must be >= 1".into());
        }
        Ok(())
    }
}

pub fn parse(args: &[String]) -> Result<(Command, RunConfig), String> {
    let mut it = args.iter().peekable();
    let first = it.next().ok_or("missing command")?;
    let cmd = match first.as_str() {
        "mlf" => match it.next().map(|s| s.as_str()) {
            Some("eval") => Command::MlfEval,
            Some("scan") => Command::MlfScan,
            other => return Err(format!("mlf needs eval|scan, got {other:?}")),
        },
        "solve" => Command::Solve,
        "verify" => {
            let check = it.next().ok_or("verify needs a check name")?;
            Command::Verify(check.to_string())
        }
        "semilinear" => Command::Semilinear,
        "quasilinear" => Command::Quasilinear,
        "oracle" => match it.next().map(|s| s.as_str()) {
            Some("regen") => Command::OracleRegen,
            other => return Err(format!("oracle needs regen, got {other:?}")),
        },
        "accept" => Command::Accept,
        other => return Err(format!("unknown command `{other}`")),
    };

    // collect flags first so --config is applied before overrides
    let mut flags: Vec<(String, String)> = Vec::new();
    let mut config_path: Option<String> = None;
    while let Some(arg) = it.next() {
        let key = arg
            .strip_prefix("--")
            .ok_or_else(|| format!("expected --flag, got `{arg}`"))?;
        if key == "plot-data" {
            // boolean flag without a value
            flags.push((key.to_string(), "true".to_string()));
            continue;
        }
        let value = it
            .next()
            .ok_or_else(|| format!("flag --{key} needs a value"))?;
        if key == "config" {
            config_path = Some(value.to_string());
        } else {
            flags.push((key.to_string(), value.to_string()));
        }
    }

    let mut cfg = RunConfig::default();
    if let Some(path) = config_path {
        let text = std::fs::read_to_string(&path)
            .map_err(|e| format!("cannot read config {path}: {e}"))?;
        cfg.apply_ini(&text, &cmd.section())?;
    }
    for (k, v) in flags {
        cfg.set(&k, &v)?;
    }
    Ok((cmd, cfg))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn defaults_and_overrides() {
        let (cmd, cfg) = parse(&sv(&["solve", "--alpha", "0.5"])).unwrap();
        assert_eq!(cmd, Command::Solve);
        assert_eq!(cfg.horizon, 1.0);
        assert_eq!(cfg.steps, 1024);
        assert_eq!(cfg.modes, 64);
        assert_eq!(cfg.operator, OperatorSpec::Dirichlet1d);
        assert!(cfg.validate(&cmd).is_ok());
    }

    #[test]
    fn alpha_one_rejected_for_solve() {
        let (cmd, cfg) = parse(&sv(&["solve", "--alpha", "1.0"])).unwrap();
        let err = cfg.validate(&cmd).unwrap_err();
        assert!(err.contains("must lie in (0,1)"), "{err}");
    }

    #[test]
    fn alpha_p_precondition_for_semilinear() {
        let (cmd, cfg) = parse(&sv(&["semilinear", "--alpha", "0.5", "--p", "1.5"])).unwrap();
        let err = cfg.validate(&cmd).unwrap_err();
        assert!(err.contains("alpha*p must exceed 1"), "{err}");
    }

    #[test]
    fn echo_ini_roundtrip() {
        let (cmd, cfg) = parse(&sv(&[
            "verify",
            "mrconstant",
            "--alpha",
            "0.8",
            "--steps",
            "256",
            "--operator",
            "1.0,2.5,7.0",
        ]))
        .unwrap();
        let echo = cfg.echo_ini(&cmd);
        let mut back = RunConfig::default();
        back.apply_ini(&echo, &cmd.section()).unwrap();
        assert_eq!(back.alpha, cfg.alpha);
        assert_eq!(back.steps, cfg.steps);
        assert_eq!(back.operator, cfg.operator);
        assert_eq!(back.out_dir, cfg.out_dir);
    }

    #[test]
    fn ini_sections_scope_keys() {
        let mut cfg = RunConfig::default();
        let text = "alpha = 0.3\n[solve]\nsteps = 64\n[semilinear]\nsteps = 128\n";
        cfg.apply_ini(text, "solve").unwrap();
        assert_eq!(cfg.alpha, 0.3); // global
        assert_eq!(cfg.steps, 64); // [solve]
    }

    #[test]
    fn unknown_key_and_check_rejected() {
        let mut cfg = RunConfig::default();
        assert!(cfg.set("bogus", "1").is_err());
        let cmd = Command::Verify("nonsense".into());
        assert!(cfg.validate(&cmd).unwrap_err().contains("unknown check"));
    }
}
