//! Text formats for profiles (`.prof`), choice tables (`.ct`) and margin
//! matrices (`.mg`).
//!
//! All three start with an `alts:` header naming the alternatives; `#`
//! starts a comment and blank lines are ignored.
//!
//! ```text
//! alts: a b c          alts: x y z          alts: a b c
//! 3: c > a > b         x y z : x y          a b 1
//! b > c > a            x y : x              b c 3
//!                      y z : y              c a 5
//!                      x z : x
//! ```

use std::fmt::Write as _;
use std::sync::Arc;

use thiserror::Error;

use crate::choice::ChoiceTable;
use crate::majority::{MarginMatrix, Profile};
use crate::universe::{FSet, SharedUniverse, Universe, UniverseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown alternative `{label}`")]
    UnknownAlternative { line: usize, label: String },
    #[error("line {line}: ballot must rank every alternative exactly once")]
    IncompleteBallot { line: usize },
    #[error("no line for feasible set {0}")]
    MissingSet(String),
    #[error("line {line}: chosen alternatives are not all in the set")]
    ChoiceNotSubset { line: usize },
    #[error("line {line}: nothing chosen")]
    EmptyChoice { line: usize },
    #[error("line {line}: set listed twice")]
    DuplicateSet { line: usize },
    #[error("line {line}: margin contradicts an earlier line")]
    ContradictoryMargin { line: usize },
    #[error("invalid header: {0}")]
    Header(#[from] UniverseError),
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        message: message.into(),
    }
}

/// Non-empty lines with comments stripped, numbered from 1.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn parse_header<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
) -> Result<SharedUniverse, FormatError> {
    let (line, text) = lines
        .next()
        .ok_or_else(|| syntax(1, "missing `alts:` header"))?;
    let rest = text
        .strip_prefix("alts:")
        .ok_or_else(|| syntax(line, "expected `alts:` header"))?;
    let labels: Vec<&str> = rest.split_whitespace().collect();
    if let Some(bad) = labels.iter().find(|l| l.contains([':', '>', ','])) {
        return Err(syntax(
            line,
            format!("label `{bad}` contains a reserved character"),
        ));
    }
    Ok(Arc::new(Universe::new(labels)?))
}

fn lookup(u: &Universe, line: usize, label: &str) -> Result<usize, FormatError> {
    u.index_of(label)
        .ok_or_else(|| FormatError::UnknownAlternative {
            line,
            label: label.to_string(),
        })
}

fn parse_members(u: &Universe, line: usize, text: &str) -> Result<FSet, FormatError> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .try_fold(FSet::EMPTY, |set, label| {
            Ok(set.with(lookup(u, line, label)?))
        })
}

fn header(u: &Universe) -> String {
    format!("alts: {}\n", u.labels().join(" "))
}

pub fn parse_profile(text: &str) -> Result<Profile, FormatError> {
    let mut lines = content_lines(text);
    let u = parse_header(&mut lines)?;
    let mut ballots = Vec::new();
    for (line, text) in lines {
        let (count, order) = match text.split_once(':') {
            Some((c, rest)) => {
                let count: u32 = c
                    .trim()
                    .parse()
                    .map_err(|_| syntax(line, format!("bad voter count `{}`", c.trim())))?;
                if count == 0 {
                    return Err(syntax(line, "voter count must be positive"));
                }
                (count, rest)
            }
            None => (1, text),
        };
        let order = order
            .split('>')
            .map(|label| {
                let label = label.trim();
                if label.is_empty() {
                    return Err(syntax(line, "empty rank in ballot"));
                }
                lookup(&u, line, label)
            })
            .collect::<Result<Vec<usize>, _>>()?;
        let mut seen = FSet::EMPTY;
        for &x in &order {
            if seen.contains(x) {
                return Err(FormatError::IncompleteBallot { line });
            }
            seen = seen.with(x);
        }
        if order.len() != u.len() {
            return Err(FormatError::IncompleteBallot { line });
        }
        ballots.push((count, order));
    }
    if ballots.is_empty() {
        return Err(syntax(1, "profile has no ballots"));
    }
    Ok(Profile::new(u, ballots).expect("validated while parsing"))
}

pub fn serialize_profile(p: &Profile) -> String {
    let u = p.universe();
    let mut out = header(u);
    for b in p.ballots() {
        let ranks: Vec<&str> = b.order().iter().map(|&x| u.label(x)).collect();
        let _ = writeln!(out, "{}: {}", b.count(), ranks.join(" > "));
    }
    out
}

pub fn parse_choice_table(text: &str) -> Result<ChoiceTable, FormatError> {
    let mut lines = content_lines(text);
    let u = parse_header(&mut lines)?;
    let mut choice = vec![FSet::EMPTY; 1 << u.len()];
    let mut seen = vec![false; 1 << u.len()];
    for (line, text) in lines {
        let (set, chosen) = text
            .split_once(':')
            .ok_or_else(|| syntax(line, "expected `<set> : <chosen>`"))?;
        let set = parse_members(&u, line, set)?;
        let chosen = parse_members(&u, line, chosen)?;
        if set.is_empty() {
            return Err(syntax(line, "empty feasible set"));
        }
        if seen[set.index()] {
            return Err(FormatError::DuplicateSet { line });
        }
        if chosen.is_empty() {
            return Err(FormatError::EmptyChoice { line });
        }
        if !chosen.is_subset(set) {
            return Err(FormatError::ChoiceNotSubset { line });
        }
        seen[set.index()] = true;
        choice[set.index()] = chosen;
    }
    for a in u.feasible_sets() {
        if !seen[a.index()] {
            if a.len() > 1 {
                return Err(FormatError::MissingSet(u.format_set(a)));
            }
            choice[a.index()] = a;
        }
    }
    Ok(ChoiceTable::new(u, choice).expect("validated while parsing"))
}

/// Non-singleton sets by size, then by mask; members in universe order.
pub fn serialize_choice_table(c: &ChoiceTable) -> String {
    let u = c.universe();
    let mut out = header(u);
    let mut sets: Vec<FSet> = u.feasible_sets().filter(|a| a.len() > 1).collect();
    sets.sort_by_key(|a| (std::cmp::Reverse(a.len()), *a));
    let names = |s: FSet| s.iter().map(|x| u.label(x)).collect::<Vec<_>>().join(" ");
    for a in sets {
        let _ = writeln!(out, "{} : {}", names(a), names(c.get(a)));
    }
    out
}

pub fn parse_margins(text: &str) -> Result<MarginMatrix, FormatError> {
    let mut lines = content_lines(text);
    let u = parse_header(&mut lines)?;
    let n = u.len();
    let mut m = vec![0i64; n * n];
    let mut given = vec![false; n * n];
    for (line, text) in lines {
        let parts: Vec<&str> = text.split_whitespace().collect();
        let [x, y, v] = parts[..] else {
            return Err(syntax(line, "expected `<x> <y> <margin>`"));
        };
        let (x, y) = (lookup(&u, line, x)?, lookup(&u, line, y)?);
        let v: i64 = v
            .parse()
            .map_err(|_| syntax(line, format!("bad margin `{v}`")))?;
        if x == y {
            if v != 0 {
                return Err(syntax(line, "self-margin must be 0"));
            }
            continue;
        }
        if given[x * n + y] && m[x * n + y] != v {
            return Err(FormatError::ContradictoryMargin { line });
        }
        m[x * n + y] = v;
        m[y * n + x] = -v;
        given[x * n + y] = true;
        given[y * n + x] = true;
    }
    Ok(MarginMatrix::new(u, m).expect("antisymmetric by construction"))
}

/// One line per pair with a positive margin, winner first.
pub fn serialize_margins(m: &MarginMatrix) -> String {
    let u = m.universe();
    let mut out = header(u);
    for x in 0..u.len() {
        for y in 0..u.len() {
            if m.get(x, y) > 0 {
                let _ = writeln!(out, "{} {} {}", u.label(x), u.label(y), m.get(x, y));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::choice::example_table;
    use crate::populations::{random_margins, random_profile, sample_rng, TableSpace};

    const T0: &str = "alts: x y z\nx y z : x y\nx y : x\nx z : x\ny z : y\n";

    #[test]
    fn example_table_file() {
        assert_eq!(parse_choice_table(T0).unwrap(), example_table());
        assert_eq!(serialize_choice_table(&example_table()), T0);
    }

    #[test]
    fn table_errors() {
        assert_eq!(
            parse_choice_table("alts: x y z\nx y z : x\nx y : x\nx z : x\n"),
            Err(FormatError::MissingSet("{y,z}".into()))
        );
        assert_eq!(
            parse_choice_table("alts: x y\nx y : z\n"),
            Err(FormatError::UnknownAlternative {
                line: 2,
                label: "z".into()
            })
        );
        assert_eq!(
            parse_choice_table("alts: x y z\nx y : z\n"),
            Err(FormatError::ChoiceNotSubset { line: 2 })
        );
        assert_eq!(
            parse_choice_table("alts: x y\nx y :\n"),
            Err(FormatError::EmptyChoice { line: 2 })
        );
        assert_eq!(
            parse_choice_table("alts: x y\nx y : x\ny x : y\n"),
            Err(FormatError::DuplicateSet { line: 3 })
        );
        assert!(matches!(
            parse_choice_table("x y : x\n"),
            Err(FormatError::Syntax { line: 1, .. })
        ));
    }

    #[test]
    fn table_accepts_any_order_and_comments() {
        let text =
            "# example\nalts: x y z\n\nx z : x # pair\ny z: y\nz y x : y x\ny x : x\nx : x\n";
        assert_eq!(parse_choice_table(text).unwrap(), example_table());
    }

    #[test]
    fn cycle_profile() {
        let p = parse_profile("alts: a b c\n1: a>b>c\n1: b>c>a\n1: c>a>b").unwrap();
        let m = p.margins();
        assert_eq!(m.get(0, 1), 1);
        assert_eq!(m.get(1, 2), 1);
        assert_eq!(m.get(2, 0), 1);
        assert_eq!(p.voters(), 3);
    }

    #[test]
    fn profile_cases() {
        assert_eq!(parse_profile("alts: a\n1: a").unwrap().voters(), 1);
        assert_eq!(
            parse_profile("alts: a b\nb > a\n")
                .unwrap()
                .margins()
                .get(1, 0),
            1
        );
        assert_eq!(
            parse_profile("alts: a b\n1: a>c"),
            Err(FormatError::UnknownAlternative {
                line: 2,
                label: "c".into()
            })
        );
        assert_eq!(
            parse_profile("alts: a b c\n2: a > b"),
            Err(FormatError::IncompleteBallot { line: 2 })
        );
        assert_eq!(
            parse_profile("alts: a b\n2: a > a"),
            Err(FormatError::IncompleteBallot { line: 2 })
        );
        assert!(matches!(
            parse_profile("alts: a b\nx: a > b"),
            Err(FormatError::Syntax { line: 2, .. })
        ));
    }

    #[test]
    fn margins_file() {
        let m = parse_margins("alts: a b c\na b 1\nb c 3\nc a 5\n").unwrap();
        assert_eq!(m.get(1, 0), -1);
        assert_eq!(m.get(0, 2), -5);
        assert_eq!(
            parse_margins("alts: a b\na b 1\nb a 1\n"),
            Err(FormatError::ContradictoryMargin { line: 3 })
        );
        assert!(parse_margins("alts: a b\na b 1\nb a -1\n").is_ok());
        assert_eq!(parse_margins("alts: a b\n").unwrap().get(0, 1), 0);
    }

    proptest! {
        #[test]
        fn table_round_trip(seed in any::<u64>(), n in 1usize..=5) {
            let u = Arc::new(Universe::alphabetic(n).unwrap());
            let t = TableSpace::all(u).sample(&mut sample_rng(seed, 0));
            prop_assert_eq!(parse_choice_table(&serialize_choice_table(&t)).unwrap(), t);
        }

        #[test]
        fn profile_round_trip(seed in any::<u64>(), n in 1usize..=5, voters in 1u32..=9) {
            let u = Arc::new(Universe::alphabetic(n).unwrap());
            let p = random_profile(u, voters, &mut sample_rng(seed, 0)).unwrap();
            prop_assert_eq!(parse_profile(&serialize_profile(&p)).unwrap(), p);
        }

        #[test]
        fn margins_round_trip(seed in any::<u64>(), n in 1usize..=6) {
            let u = Arc::new(Universe::alphabetic(n).unwrap());
            let m = random_margins(u, 4, &mut sample_rng(seed, 0)).unwrap();
            prop_assert_eq!(parse_margins(&serialize_margins(&m)).unwrap(), m);
        }
    }
}
