//! Textual strategy specs for the command line.
//!
//! Grammar: `base:i=<n>,xi=<rat>`, `classic:xi=<rat>`,
//! `full:eps=<rat>,sched=loglog|file:<path>`, `observer:<spec>`,
//! `lifted:<reduction-file>`, `stationary:q=<rat>`.

use super::StrategyError;
use crate::numeric::{parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScheduleSpec {
    LogLog,
    File(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StrategySpec {
    Base { index: u32, xi: Rational },
    Classic { xi: Rational },
    Full { eps: Rational, sched: ScheduleSpec },
    Observer(Box<StrategySpec>),
    Lifted { reduction_path: String },
    Stationary { q: Rational },
}

pub fn parse_p1_spec(text: &str) -> Result<StrategySpec, StrategyError> {
    let bad = |msg: String| StrategyError::BadSpec(msg);
    let (head, rest) = text
        .split_once(':')
        .ok_or_else(|| bad(format!("missing `:` in `{text}`")))?;
    match head {
        "base" => {
            let kv = parse_kv(rest)?;
            Ok(StrategySpec::Base {
                index: get(&kv, "i")?
                    .parse()
                    .map_err(|_| bad("bad index".into()))?,
                xi: rat_of(get(&kv, "xi")?)?,
            })
        }
        "classic" => {
            let kv = parse_kv(rest)?;
            Ok(StrategySpec::Classic {
                xi: rat_of(get(&kv, "xi")?)?,
            })
        }
        "full" => {
            let kv = parse_kv(rest)?;
            let sched = match get(&kv, "sched")? {
                "loglog" => ScheduleSpec::LogLog,
                other => match other.strip_prefix("file:") {
                    Some(path) => ScheduleSpec::File(path.to_owned()),
                    None => {
                        return Err(bad(format!(
                            "sched must be `loglog` or `file:<path>`, got `{other}`"
                        )))
                    }
                },
            };
            Ok(StrategySpec::Full {
                eps: rat_of(get(&kv, "eps")?)?,
                sched,
            })
        }
        "observer" => Ok(StrategySpec::Observer(Box::new(parse_p1_spec(rest)?))),
        "lifted" => Ok(StrategySpec::Lifted {
            reduction_path: rest.to_owned(),
        }),
        "stationary" => {
            let kv = parse_kv(rest)?;
            Ok(StrategySpec::Stationary {
                q: rat_of(get(&kv, "q")?)?,
            })
        }
        other => Err(bad(format!("unknown strategy `{other}`"))),
    }
}

fn parse_kv(s: &str) -> Result<Vec<(String, String)>, StrategyError> {
    // `sched=file:...` may contain commas in paths; split on commas that
    // precede a `key=` shape only.
    let mut pairs = Vec::new();
    let mut rest = s;
    while !rest.is_empty() {
        let (key, after) = rest
            .split_once('=')
            .ok_or_else(|| StrategyError::BadSpec(format!("expected key=value in `{rest}`")))?;
        // the value ends at the last comma that starts another key=...
        let mut value_end = after.len();
        let mut scan = 0usize;
        while let Some(pos) = after[scan..].find(',') {
            let idx = scan + pos;
            let tail = &after[idx + 1..];
            if tail
                .split_once('=')
                .is_some_and(|(k, _)| k.chars().all(|c| c.is_ascii_alphanumeric() || c == '_'))
            {
                value_end = idx;
                break;
            }
            scan = idx + 1;
        }
        pairs.push((key.to_owned(), after[..value_end].to_owned()));
        rest = if value_end == after.len() {
            ""
        } else {
            &after[value_end + 1..]
        };
    }
    Ok(pairs)
}

fn get<'a>(kv: &'a [(String, String)], key: &str) -> Result<&'a str, StrategyError> {
    kv.iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| v.as_str())
        .ok_or_else(|| StrategyError::BadSpec(format!("missing `{key}=`")))
}

fn rat_of(s: &str) -> Result<Rational, StrategyError> {
    parse_rational(s).map_err(|e| StrategyError::BadSpec(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::ratio;

    #[test]
    fn parses_all_forms() {
        assert_eq!(
            parse_p1_spec("base:i=3,xi=1/2").unwrap(),
            StrategySpec::Base {
                index: 3,
                xi: ratio(1, 2)
            }
        );
        assert_eq!(
            parse_p1_spec("classic:xi=1/4").unwrap(),
            StrategySpec::Classic { xi: ratio(1, 4) }
        );
        assert_eq!(
            parse_p1_spec("full:eps=1/5,sched=loglog").unwrap(),
            StrategySpec::Full {
                eps: ratio(1, 5),
                sched: ScheduleSpec::LogLog
            }
        );
        assert_eq!(
            parse_p1_spec("full:eps=1/5,sched=file:sched.txt").unwrap(),
            StrategySpec::Full {
                eps: ratio(1, 5),
                sched: ScheduleSpec::File("sched.txt".into())
            }
        );
        assert_eq!(
            parse_p1_spec("observer:full:eps=1/5,sched=loglog").unwrap(),
            StrategySpec::Observer(Box::new(StrategySpec::Full {
                eps: ratio(1, 5),
                sched: ScheduleSpec::LogLog
            }))
        );
        assert_eq!(
            parse_p1_spec("lifted:out/red.txt").unwrap(),
            StrategySpec::Lifted {
                reduction_path: "out/red.txt".into()
            }
        );
        assert_eq!(
            parse_p1_spec("stationary:q=1/100").unwrap(),
            StrategySpec::Stationary { q: ratio(1, 100) }
        );
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["", "full", "full:eps=2,sched=banana", "base:i=x,xi=1/2"] {
            assert!(parse_p1_spec(bad).is_err(), "accepted `{bad}`");
        }
    }
}
