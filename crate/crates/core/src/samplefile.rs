//! Line-oriented text format for sample sets.
//!
//! ```text
//! plwe-samples v1 p=2 n=4 A=2 q=29 rho=12 sigma=1 sigma-meaning=std-dev oracle=plwe seed=42 count=2 secret=<sha256 hex|none>
//! 0 <a_0> ... <a_{N-1}> | <b_0> ... <b_{N-1}>
//! 1 ...
//! ```
//!
//! Coefficients are decimal integers in `[0, q)`, ascending degree. The
//! header carries everything needed to regenerate the set from its seed.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::ring::{NoiseModel, RingElement, SigmaMeaning};
use crate::subring::{OracleKind, Sample, SampleMeta, TraceContext};
use crate::params::AttackParams;

const MAGIC: &str = "plwe-samples";
const VERSION: &str = "v1";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleHeader {
    pub p: u64,
    pub n: u32,
    pub a: u32,
    pub q: u64,
    pub rho: u64,
    pub sigma: f64,
    pub sigma_meaning: SigmaMeaning,
    pub oracle: OracleKind,
    pub seed: u64,
    pub count: u32,
    /// SHA-256 of the secret's coefficients; `None` for the uniform oracle.
    pub secret_commitment: Option<String>,
}

impl SampleHeader {
    pub fn params(&self) -> Result<AttackParams> {
        AttackParams::explicit(
            self.q,
            self.p,
            self.n,
            self.a,
            self.rho,
            NoiseModel {
                sigma: self.sigma,
                meaning: self.sigma_meaning,
            },
        )
    }

    fn render(&self) -> String {
        let meaning = match self.sigma_meaning {
            SigmaMeaning::StdDev => "std-dev",
            SigmaMeaning::Variance => "variance",
        };
        format!(
            "{MAGIC} {VERSION} p={} n={} A={} q={} rho={} sigma={} sigma-meaning={meaning} oracle={} seed={} count={} secret={}",
            self.p,
            self.n,
            self.a,
            self.q,
            self.rho,
            self.sigma,
            self.oracle,
            self.seed,
            self.count,
            self.secret_commitment.as_deref().unwrap_or("none"),
        )
    }

    fn parse(line: &str) -> Result<Self> {
        let bad = |msg: String| Error::Format { line: 1, msg };
        let mut tokens = line.split_whitespace();
        if tokens.next() != Some(MAGIC) || tokens.next() != Some(VERSION) {
            return Err(bad(format!("expected '{MAGIC} {VERSION}' header")));
        }
        let mut fields = std::collections::HashMap::new();
        for tok in tokens {
            let (k, v) = tok
                .split_once('=')
                .ok_or_else(|| bad(format!("malformed header field '{tok}'")))?;
            fields.insert(k, v);
        }
        fn get<T: std::str::FromStr>(
            fields: &std::collections::HashMap<&str, &str>,
            key: &str,
        ) -> Result<T> {
            let raw = fields.get(key).ok_or_else(|| Error::Format {
                line: 1,
                msg: format!("missing header field '{key}'"),
            })?;
            raw.parse().map_err(|_| Error::Format {
                line: 1,
                msg: format!("bad value '{raw}' for '{key}'"),
            })
        }
        let sigma_meaning = match get::<String>(&fields, "sigma-meaning")?.as_str() {
            "std-dev" => SigmaMeaning::StdDev,
            "variance" => SigmaMeaning::Variance,
            other => return Err(bad(format!("unknown sigma-meaning '{other}'"))),
        };
        let oracle: String = get(&fields, "oracle")?;
        let secret: String = get(&fields, "secret")?;
        Ok(Self {
            p: get(&fields, "p")?,
            n: get(&fields, "n")?,
            a: get(&fields, "A")?,
            q: get(&fields, "q")?,
            rho: get(&fields, "rho")?,
            sigma: get(&fields, "sigma")?,
            sigma_meaning,
            oracle: oracle.parse().map_err(|_| bad(format!("unknown oracle '{oracle}'")))?,
            seed: get(&fields, "seed")?,
            count: get(&fields, "count")?,
            secret_commitment: (secret != "none").then_some(secret),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampleSetFile {
    pub header: SampleHeader,
    pub samples: Vec<Sample>,
}

pub fn commit_secret(secret: &RingElement) -> String {
    let mut h = Sha256::new();
    for &c in secret.coeffs() {
        h.update(c.to_le_bytes());
    }
    hex::encode(h.finalize())
}

/// Draws `count` samples from the chosen oracle. The PLWE oracle uses one
/// uniformly drawn secret for the whole set, which is returned as well.
pub fn generate_sample_set(
    params: &AttackParams,
    oracle: OracleKind,
    count: u32,
    seed: u64,
) -> Result<(SampleSetFile, Option<RingElement>)> {
    let ctx = params.trace_context()?;
    let (samples, secret) = match oracle {
        OracleKind::Plwe => {
            let secret = ctx.sample_secret(seed);
            let samples = (0..count)
                .map(|i| Ok(ctx.plwe_oracle(&secret, &params.noise, seed, i)?.0))
                .collect::<Result<Vec<_>>>()?;
            (samples, Some(secret))
        }
        OracleKind::Uniform => ((0..count).map(|i| ctx.uniform_oracle(seed, i)).collect(), None),
    };
    let header = SampleHeader {
        p: params.p(),
        n: params.n,
        a: params.a(),
        q: params.q(),
        rho: params.rho,
        sigma: params.noise.sigma,
        sigma_meaning: params.noise.meaning,
        oracle,
        seed,
        count,
        secret_commitment: secret.as_ref().map(commit_secret),
    };
    Ok((SampleSetFile { header, samples }, secret))
}

impl SampleSetFile {
    /// Rebuilds the set from the header alone.
    pub fn regenerate(header: &SampleHeader) -> Result<Self> {
        let params = header.params()?;
        Ok(generate_sample_set(&params, header.oracle, header.count, header.seed)?.0)
    }

    pub fn to_text(&self) -> String {
        let mut out = self.header.render();
        out.push('\n');
        for s in &self.samples {
            write!(out, "{}", s.meta.index).unwrap();
            for c in s.a.coeffs() {
                write!(out, " {c}").unwrap();
            }
            out.push_str(" |");
            for c in s.b.coeffs() {
                write!(out, " {c}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = SampleHeader::parse(lines.next().ok_or(Error::Format {
            line: 1,
            msg: "empty file".into(),
        })?)?;
        let params = header.params()?;
        let ctx: TraceContext = params.trace_context()?;
        let ring = ctx.ring();
        let q = header.q;
        let mut samples = Vec::new();
        for (k, line) in lines.enumerate() {
            let lineno = k + 2;
            if line.trim().is_empty() {
                continue;
            }
            let bad = |msg: String| Error::Format { line: lineno, msg };
            let (left, right) = line
                .split_once('|')
                .ok_or_else(|| bad("missing '|' separator".into()))?;
            let mut left = left.split_whitespace();
            let index: u32 = left
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| bad("missing sample index".into()))?;
            let parse_coeffs = |it: &mut dyn Iterator<Item = &str>| -> Result<RingElement> {
                let coeffs = it
                    .map(|t| match t.parse::<u64>() {
                        Ok(c) if c < q => Ok(c),
                        _ => Err(bad(format!("coefficient '{t}' is not in [0, {q})"))),
                    })
                    .collect::<Result<Vec<u64>>>()?;
                ring.element(coeffs).map_err(|e| bad(e.to_string()))
            };
            let a = parse_coeffs(&mut left)?;
            let b = parse_coeffs(&mut right.split_whitespace())?;
            let meta = SampleMeta {
                oracle: header.oracle,
                seed: header.seed,
                index,
            };
            samples.push(Sample { a, b, meta });
        }
        if samples.len() != header.count as usize {
            return Err(Error::Format {
                line: 1,
                msg: format!("header declares {} samples, found {}", header.count, samples.len()),
            });
        }
        Ok(Self { header, samples })
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?)
    }

    /// Writes to a temporary file next to `path`, then renames over it.
    pub fn write(&self, path: &Path) -> Result<()> {
        write_atomic(path, self.to_text().as_bytes())
    }
}

pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let name = path
        .file_name()
        .ok_or_else(|| Error::InvalidParams(format!("'{}' is not a file path", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    Ok(result?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> AttackParams {
        AttackParams::search(2, 4, 2, 20, NoiseModel::std_dev(1.0), 0).unwrap().0
    }

    #[test]
    fn text_roundtrip_and_regeneration() {
        for oracle in [OracleKind::Plwe, OracleKind::Uniform] {
            let (set, secret) = generate_sample_set(&params(), oracle, 5, 99).unwrap();
            assert_eq!(secret.is_some(), oracle == OracleKind::Plwe);
            let text = set.to_text();
            let back = SampleSetFile::parse(&text).unwrap();
            assert_eq!(back, set);
            assert_eq!(SampleSetFile::regenerate(&back.header).unwrap(), set);
        }
    }

    #[test]
    fn header_format() {
        let (set, secret) = generate_sample_set(&params(), OracleKind::Plwe, 1, 7).unwrap();
        let first = set.to_text().lines().next().unwrap().to_string();
        assert!(first.starts_with("plwe-samples v1 p=2 n=4 A=2 q=29 rho=12 sigma=1 sigma-meaning=std-dev oracle=plwe seed=7 count=1 secret="));
        assert!(first.ends_with(&commit_secret(&secret.unwrap())));
    }

    #[test]
    fn malformed_inputs() {
        let (set, _) = generate_sample_set(&params(), OracleKind::Uniform, 2, 1).unwrap();
        let text = set.to_text();
        let mut lines: Vec<&str> = text.lines().collect();
        assert!(matches!(SampleSetFile::parse(""), Err(Error::Format { line: 1, .. })));
        assert!(SampleSetFile::parse(&lines[..2].join("\n")).is_err());
        let bad_coeff = lines[1].replacen(' ', " 29 ", 1);
        lines[1] = &bad_coeff;
        assert!(matches!(
            SampleSetFile::parse(&lines.join("\n")),
            Err(Error::Format { line: 2, .. })
        ));
    }
}
