//! Text format for WZ pairs.
//!
//! ```text
//! # comment
//! pair wz-pair-1
//!   kernel gamma 1/2 1 1 1      # Γ(1/2 + n + k)^1, shared by F and G
//!   kernel geom 1/4 1 0         # (1/4)^(1·n + 0·k)
//!   F num -n
//!   F den 2*n + 2*k
//!   G gamma 1 0 1 -1            # factor for G only
//!   G num k
//! end
//! ```
//!
//! A gamma line is `c0 cn ck exponent`; a geom line is `base en ek`. Omitted
//! `num`/`den` default to 1. [`print_pairs`] writes per-term lines only, and
//! parsing its output reproduces the same pairs.

use std::fmt::Write as _;

use rug::Rational;

use super::hyperterm::{Geom, HyperTerm, LinForm};
use super::poly::MultiPoly;
use super::ratfunc::RatFunc;
use super::wz::WzPair;
use crate::error::{Error, Result};

/// The verified pairs shipped with the crate.
pub const BUILTIN_PAIRS: &str = include_str!("../../data/wz_pairs.txt");

#[derive(Default)]
struct TermDraft {
    gammas: Vec<(LinForm, i32)>,
    geom: Option<Geom>,
    num: Option<MultiPoly>,
    den: Option<MultiPoly>,
}

impl TermDraft {
    fn build(self, line: usize) -> Result<HyperTerm> {
        let num = self.num.unwrap_or_else(MultiPoly::one);
        let den = self.den.unwrap_or_else(MultiPoly::one);
        let pre = RatFunc::new(num, den).map_err(|e| perr(line, e.to_string()))?;
        Ok(HyperTerm::new(
            self.gammas,
            self.geom.unwrap_or_else(Geom::trivial),
            pre,
        ))
    }
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn rational(tok: &str, line: usize) -> Result<Rational> {
    tok.parse::<Rational>()
        .map_err(|_| perr(line, format!("`{tok}` is not a rational number")))
}

fn integer(tok: &str, line: usize) -> Result<i64> {
    tok.parse::<i64>()
        .map_err(|_| perr(line, format!("`{tok}` is not an integer")))
}

fn poly(text: &str, line: usize) -> Result<MultiPoly> {
    text.parse::<MultiPoly>().map_err(|e| match e {
        Error::Parse { msg, .. } => perr(line, msg),
        other => other,
    })
}

/// Parses every pair in `text`.
pub fn parse_pairs(text: &str) -> Result<Vec<WzPair>> {
    let mut out = Vec::new();
    let mut current: Option<(
        String,
        TermDraft,
        TermDraft,
        Vec<(LinForm, i32)>,
        Option<Geom>,
    )> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let words: Vec<&str> = content.split_whitespace().collect();
        match words[0] {
            "pair" => {
                if current.is_some() {
                    return Err(perr(line, "`pair` inside an open pair"));
                }
                if words.len() != 2 {
                    return Err(perr(line, "expected `pair <name>`"));
                }
                current = Some((
                    words[1].to_string(),
                    TermDraft::default(),
                    TermDraft::default(),
                    Vec::new(),
                    None,
                ));
            }
            "end" => {
                let (name, mut f, mut g, kernel, kgeom) = current
                    .take()
                    .ok_or_else(|| perr(line, "`end` without `pair`"))?;
                for draft in [&mut f, &mut g] {
                    draft.gammas.extend(kernel.iter().cloned());
                    if draft.geom.is_none() {
                        draft.geom = kgeom.clone();
                    }
                }
                out.push(WzPair {
                    name,
                    f: f.build(line)?,
                    g: g.build(line)?,
                });
            }
            target @ ("kernel" | "F" | "G") => {
                let cur = current
                    .as_mut()
                    .ok_or_else(|| perr(line, "term line outside a pair"))?;
                if words.len() < 2 {
                    return Err(perr(line, "missing field name"));
                }
                let field = words[1];
                let rest = &words[2..];
                match field {
                    "gamma" => {
                        if rest.len() != 4 {
                            return Err(perr(line, "gamma takes `c0 cn ck exponent`"));
                        }
                        let lf = LinForm::new(
                            rational(rest[0], line)?,
                            rational(rest[1], line)?,
                            rational(rest[2], line)?,
                        );
                        let e = i32::try_from(integer(rest[3], line)?)
                            .map_err(|_| perr(line, "exponent out of range"))?;
                        match target {
                            "kernel" => cur.3.push((lf, e)),
                            "F" => cur.1.gammas.push((lf, e)),
                            _ => cur.2.gammas.push((lf, e)),
                        }
                    }
                    "geom" => {
                        if rest.len() != 3 {
                            return Err(perr(line, "geom takes `base en ek`"));
                        }
                        let geom = Geom::new(
                            rational(rest[0], line)?,
                            integer(rest[1], line)?,
                            integer(rest[2], line)?,
                        )
                        .map_err(|e| perr(line, e.to_string()))?;
                        match target {
                            "kernel" => cur.4 = Some(geom),
                            "F" => cur.1.geom = Some(geom),
                            _ => cur.2.geom = Some(geom),
                        }
                    }
                    "num" | "den" if target != "kernel" => {
                        let p = poly(&rest.join(" "), line)?;
                        let draft = if target == "F" {
                            &mut cur.1
                        } else {
                            &mut cur.2
                        };
                        if field == "num" {
                            draft.num = Some(p);
                        } else {
                            draft.den = Some(p);
                        }
                    }
                    other => {
                        return Err(perr(line, format!("unknown field `{other}` for {target}")))
                    }
                }
            }
            other => return Err(perr(line, format!("unknown directive `{other}`"))),
        }
    }
    if current.is_some() {
        return Err(perr(text.lines().count(), "missing `end`"));
    }
    Ok(out)
}

/// Looks up a pair by name in the built-in fixture.
pub fn builtin_pair(name: &str) -> Result<WzPair> {
    parse_pairs(BUILTIN_PAIRS)?
        .into_iter()
        .find(|p| p.name == name)
        .ok_or_else(|| Error::UnknownIdentity(name.to_string()))
}

/// Canonical text for `pairs`.
pub fn print_pairs(pairs: &[WzPair]) -> String {
    let mut s = String::new();
    for p in pairs {
        writeln!(s, "pair {}", p.name).unwrap();
        for (tag, t) in [("F", &p.f), ("G", &p.g)] {
            for (l, e) in t.gammas() {
                writeln!(s, "  {tag} gamma {} {} {} {e}", l.c0, l.cn, l.ck).unwrap();
            }
            if !t.geom.is_trivial() {
                writeln!(
                    s,
                    "  {tag} geom {} {} {}",
                    t.geom.base, t.geom.en, t.geom.ek
                )
                .unwrap();
            }
            writeln!(s, "  {tag} num {}", t.pre.num()).unwrap();
            writeln!(s, "  {tag} den {}", t.pre.den()).unwrap();
        }
        writeln!(s, "end").unwrap();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_round_trip() {
        let pairs = parse_pairs(BUILTIN_PAIRS).unwrap();
        assert!(pairs.len() >= 3);
        let text = print_pairs(&pairs);
        assert_eq!(parse_pairs(&text).unwrap(), pairs);
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse_pairs("pair x\n  F gamma 1 2\nend\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        assert!(parse_pairs("pair x\n").is_err());
        assert!(parse_pairs("F num n\n").is_err());
    }
}
