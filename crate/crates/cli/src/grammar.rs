//! Text formats for presentations and characters.
//!
//! ```text
//! gens a t
//! rel t a t^-1 a^-2
//! backend bs 1 2
//! ```
//!
//! Backends: `free`, `abelian`, `bs 1 <n>`, `product <factor>…` with factors
//! `free[a,b]`, `abelian[t]`, `bs(1,n)[a,t]`, and `rewrite [<file>]`, whose
//! rules come from the file and from `rule <lhs> -> <rhs>` lines.

use std::path::Path;
use std::str::FromStr;

use sha2::{Digest, Sha256};
use sigma_core::backend::Factor;
use sigma_core::rewriting::{RewritingSystem, Rule, DEFAULT_MAX_STEPS};
use sigma_core::{Backend, Character, Error, Presentation, Rational, Word};

use crate::error::{CliError, Result};

/// Whitespace-separated tokens with their 1-based byte columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn is_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_') && chars.all(|c| c.is_alphanumeric() || c == '_')
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// Parses `text`, which starts at `column` of `line`.
fn word_at(text: &str, line: usize, column: usize, names: &[String]) -> Result<Word> {
    Word::parse(text, names).map_err(|e| match e {
        Error::MalformedWord { column: c, message } => CliError::parse(line, column + c - 1, message),
        Error::UnknownGenerator(name) => {
            let at = tokens(text)
                .into_iter()
                .find(|(_, t)| t.split('^').next() == Some(name.as_str()))
                .map(|(c, _)| c)
                .unwrap_or(1);
            CliError::parse(line, column + at - 1, format!("unknown generator `{name}`"))
        }
        other => CliError::Core(other),
    })
}

fn rule_at(text: &str, line: usize, column: usize, names: &[String]) -> Result<Rule> {
    let Some(arrow) = text.find("->") else {
        return Err(CliError::parse(line, column, "expected `<lhs> -> <rhs>`"));
    };
    let lhs = word_at(&text[..arrow], line, column, names)?;
    let rhs = word_at(&text[arrow + 2..], line, column + arrow + 2, names)?;
    Ok(Rule { lhs, rhs })
}

fn generator_index(name: &str, names: &[String], line: usize, column: usize) -> Result<u32> {
    names
        .iter()
        .position(|n| n == name)
        .map(|i| i as u32)
        .ok_or_else(|| CliError::parse(line, column, format!("unknown generator `{name}`")))
}

fn bs_parameter(text: &str, line: usize, column: usize) -> Result<u32> {
    text.parse::<u32>()
        .map_err(|_| CliError::parse(line, column, format!("expected an integer n >= 2, found `{text}`")))
}

/// `free[a,b]`, `abelian[t]` or `bs(1,n)[a,t]`.
fn factor_at(token: &str, line: usize, column: usize, names: &[String]) -> Result<Factor> {
    let (Some(open), true) = (token.find('['), token.ends_with(']')) else {
        return Err(CliError::parse(line, column, format!("expected `<kind>[<gens>]`, found `{token}`")));
    };
    let kind = &token[..open];
    let backend = match kind {
        "free" => Backend::Free,
        "abelian" => Backend::FreeAbelian,
        _ if kind.starts_with("bs(1,") && kind.ends_with(')') => {
            let n = bs_parameter(&kind[5..kind.len() - 1], line, column + 5)?;
            Backend::BaumslagSolitar { n }
        }
        _ => return Err(CliError::parse(line, column, format!("unknown factor kind `{kind}`"))),
    };
    let mut generators = Vec::new();
    let mut offset = open + 1;
    for name in token[open + 1..token.len() - 1].split(',') {
        generators.push(generator_index(name, names, line, column + offset)?);
        offset += name.len() + 1;
    }
    Ok(Factor { backend, generators })
}

enum BackendDecl {
    Ready(Backend),
    Rewrite(Option<(String, usize, usize)>),
}

fn backend_at(toks: &[(usize, &str)], line: usize, names: &[String]) -> Result<BackendDecl> {
    let Some(&(column, kind)) = toks.first() else {
        return Err(CliError::parse(line, 8, "missing backend kind"));
    };
    let rest = &toks[1..];
    let no_args = |decl: BackendDecl| match rest.first() {
        Some((c, t)) => Err(CliError::parse(line, *c, format!("unexpected `{t}`"))),
        None => Ok(decl),
    };
    match kind {
        "free" => no_args(BackendDecl::Ready(Backend::Free)),
        "abelian" => no_args(BackendDecl::Ready(Backend::FreeAbelian)),
        "bs" => match rest {
            [(c1, one), (c2, n)] => {
                if *one != "1" {
                    return Err(CliError::parse(line, *c1, "only bs 1 <n> is supported"));
                }
                Ok(BackendDecl::Ready(Backend::BaumslagSolitar { n: bs_parameter(n, line, *c2)? }))
            }
            _ => Err(CliError::parse(line, column, "expected `bs 1 <n>`")),
        },
        "product" => {
            if rest.is_empty() {
                return Err(CliError::parse(line, column, "product needs at least one factor"));
            }
            let factors = rest.iter().map(|&(c, t)| factor_at(t, line, c, names)).collect::<Result<_>>()?;
            Ok(BackendDecl::Ready(Backend::DirectProduct(factors)))
        }
        "rewrite" => match rest {
            [] => Ok(BackendDecl::Rewrite(None)),
            [(c, file)] => Ok(BackendDecl::Rewrite(Some((file.to_string(), line, *c)))),
            [_, (c, t), ..] => Err(CliError::parse(line, *c, format!("unexpected `{t}`"))),
        },
        other => Err(CliError::parse(line, column, format!("unknown backend `{other}`"))),
    }
}

fn read_rules(path: &Path, names: &[String]) -> Result<Vec<Rule>> {
    let text =
        std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    let mut rules = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = strip_comment(raw);
        if content.trim().is_empty() {
            continue;
        }
        rules.push(rule_at(content, i + 1, 1, names).map_err(|e| match e {
            CliError::Parse { line, column, message } => {
                CliError::Parse { line, column, message: format!("{}: {message}", path.display()) }
            }
            other => other,
        })?);
    }
    Ok(rules)
}

/// Parses a presentation. A `rewrite` rules file is resolved against
/// `base_dir`.
pub fn parse_presentation(text: &str, base_dir: Option<&Path>) -> Result<Presentation> {
    let mut names: Vec<String> = Vec::new();
    let mut relators = Vec::new();
    let mut backend: Option<BackendDecl> = None;
    let mut rules = Vec::new();
    let mut central = Vec::new();
    let mut seen_body = false;
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let content = strip_comment(raw);
        let toks = tokens(content);
        let Some(&(column, keyword)) = toks.first() else {
            continue;
        };
        let rest_column = toks.get(1).map(|t| t.0).unwrap_or(content.len() + 1);
        let rest = content.get(rest_column - 1..).unwrap_or("");
        match keyword {
            "gens" => {
                if seen_body {
                    return Err(CliError::parse(line, column, "`gens` must precede all other lines"));
                }
                if toks.len() == 1 {
                    return Err(CliError::parse(line, column, "`gens` needs at least one name"));
                }
                for &(c, name) in &toks[1..] {
                    if !is_name(name) {
                        return Err(CliError::parse(line, c, format!("invalid generator name `{name}`")));
                    }
                    if names.iter().any(|n| n == name) {
                        return Err(CliError::parse(line, c, format!("duplicate generator `{name}`")));
                    }
                    names.push(name.to_string());
                }
            }
            "rel" => {
                seen_body = true;
                relators.push(word_at(rest, line, rest_column, &names)?);
            }
            "rule" => {
                seen_body = true;
                rules.push(rule_at(rest, line, rest_column, &names)?);
            }
            "backend" => {
                seen_body = true;
                if backend.is_some() {
                    return Err(CliError::parse(line, column, "backend declared twice"));
                }
                backend = Some(backend_at(&toks[1..], line, &names)?);
            }
            "center" => {
                seen_body = true;
                for &(c, name) in &toks[1..] {
                    central.push(generator_index(name, &names, line, c)?);
                }
            }
            other => return Err(CliError::parse(line, column, format!("unknown keyword `{other}`"))),
        }
    }
    if names.is_empty() {
        return Err(CliError::parse(1, 1, "missing `gens` line"));
    }
    let backend = match backend {
        None => return Err(CliError::parse(last_line.max(1), 1, "missing `backend` line")),
        Some(BackendDecl::Ready(b)) => {
            if !rules.is_empty() {
                return Err(CliError::Usage("`rule` lines need `backend rewrite`".into()));
            }
            b
        }
        Some(BackendDecl::Rewrite(file)) => {
            let mut all = Vec::new();
            if let Some((file, line, column)) = file {
                let path = base_dir.map(|d| d.join(&file)).unwrap_or_else(|| file.clone().into());
                if !path.exists() {
                    return Err(CliError::parse(line, column, format!("rules file `{file}` not found")));
                }
                all = read_rules(&path, &names)?;
            }
            all.extend(rules);
            Backend::Rewriting(RewritingSystem::new(all, DEFAULT_MAX_STEPS)?)
        }
    };
    Ok(Presentation::new(names, relators, backend, central)?)
}

fn factor_text(f: &Factor, names: &[String]) -> Result<String> {
    let kind = match &f.backend {
        Backend::Free => "free".to_string(),
        Backend::FreeAbelian => "abelian".to_string(),
        Backend::BaumslagSolitar { n } => format!("bs(1,{n})"),
        _ => return Err(CliError::Usage("nested product factors have no text form".into())),
    };
    let gens: Vec<&str> = f.generators.iter().map(|&g| names[g as usize].as_str()).collect();
    Ok(format!("{kind}[{}]", gens.join(",")))
}

/// The canonical text of `p`; `parse_presentation` inverts it.
pub fn print_presentation(p: &Presentation) -> Result<String> {
    let names = p.names();
    let mut out = format!("gens {}\n", names.join(" "));
    for r in p.relators() {
        out.push_str(&format!("rel {}\n", r.display(names)));
    }
    let mut rules = Vec::new();
    let backend = match p.backend() {
        Backend::Free => "free".to_string(),
        Backend::FreeAbelian => "abelian".to_string(),
        Backend::BaumslagSolitar { n } => format!("bs 1 {n}"),
        Backend::DirectProduct(factors) => {
            let parts = factors.iter().map(|f| factor_text(f, names)).collect::<Result<Vec<_>>>()?;
            format!("product {}", parts.join(" "))
        }
        Backend::Rewriting(system) => {
            if system.max_steps() != DEFAULT_MAX_STEPS {
                return Err(CliError::Usage("rewriting step budget has no text form".into()));
            }
            rules = system.rules().to_vec();
            "rewrite".to_string()
        }
        Backend::Reencoded { .. } => return Err(CliError::Usage("re-encoded presentations have no text form".into())),
    };
    out.push_str(&format!("backend {backend}\n"));
    for rule in rules {
        out.push_str(&format!("rule {} -> {}\n", rule.lhs.display(names), rule.rhs.display(names)));
    }
    if !p.central().is_empty() {
        let central: Vec<&str> = p.central().iter().map(|&z| names[z as usize].as_str()).collect();
        out.push_str(&format!("center {}\n", central.join(" ")));
    }
    Ok(out)
}

/// Hex SHA-256 of the canonical text.
pub fn digest(p: &Presentation) -> Result<String> {
    Ok(hex::encode(Sha256::digest(print_presentation(p)?.as_bytes())))
}

/// `int[/int]` with an optional sign and a nonzero denominator.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let unsigned = text.strip_prefix(['-', '+']).unwrap_or(text);
    let (num, den) = match unsigned.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (unsigned, None),
    };
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    if !digits(num) || !den.is_none_or(digits) {
        return None;
    }
    if den.is_some_and(|d| d.bytes().all(|b| b == b'0')) {
        return None;
    }
    Rational::from_str(text).ok()
}

/// `name=rat` assignments; generators not mentioned get 0.
pub fn parse_character(text: &str, p: &Presentation) -> Result<Character> {
    let mut values: Vec<Option<Rational>> = vec![None; p.rank()];
    for (column, token) in tokens(text) {
        let Some((name, value)) = token.split_once('=') else {
            return Err(CliError::parse(1, column, format!("expected `name=value`, found `{token}`")));
        };
        let g = generator_index(name, p.names(), 1, column)? as usize;
        if values[g].is_some() {
            return Err(CliError::parse(1, column, format!("generator `{name}` assigned twice")));
        }
        let v = parse_rational(value).ok_or_else(|| {
            CliError::parse(1, column + name.len() + 1, format!("`{value}` is not a rational literal"))
        })?;
        values[g] = Some(v);
    }
    let values = values.into_iter().map(Option::unwrap_or_default).collect();
    Ok(Character::for_presentation(p, values)?)
}

pub fn print_character(chi: &Character, p: &Presentation) -> String {
    p.names().iter().zip(chi.values()).map(|(n, v)| format!("{n}={v}")).collect::<Vec<_>>().join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    const BS: &str = "gens a t\nrel t a t^-1 a^-2\nbackend bs 1 2\n";

    #[test]
    fn minimal_free() {
        let p = parse_presentation("gens a\nbackend free", None).unwrap();
        assert_eq!(p, Presentation::free(&["a"]));
    }

    #[test]
    fn bs_file() {
        let p = parse_presentation(BS, None).unwrap();
        assert_eq!(p.relators().len(), 1);
        // four tokens, five letters once `a^-2` is expanded
        assert_eq!(tokens("t a t^-1 a^-2").len(), 4);
        assert_eq!(p.relators()[0].len(), 5);
        assert_eq!(p, Presentation::baumslag_solitar(2).unwrap());
    }

    #[test]
    fn malformed_exponent_column() {
        let err = parse_presentation("gens a b\nrel a b a^\nbackend free\n", None).unwrap_err();
        match err {
            CliError::Parse { line, column, .. } => assert_eq!((line, column), (2, 11)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_generator_column() {
        let err = parse_presentation("gens a\nrel a  c\nbackend free\n", None).unwrap_err();
        assert!(matches!(err, CliError::Parse { line: 2, column: 8, .. }), "{err:?}");
    }

    #[test]
    fn rejected_inputs() {
        for (text, line) in [
            ("gens a a\nbackend free", 1),
            ("gens a\nbackend magma", 2),
            ("gens a\nbackend free\nbackend free", 3),
            ("gens a t\nbackend bs 2 2", 2),
            ("gens a\nfrobnicate a", 2),
        ] {
            match parse_presentation(text, None) {
                Err(CliError::Parse { line: l, .. }) => assert_eq!(l, line, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
        assert!(parse_presentation("gens a\n", None).is_err());
    }

    #[test]
    fn comments_and_center() {
        let text = "# F2 x Z\ngens a b t  # three\nrel a t a^-1 t^-1\nrel b t b^-1 t^-1\nbackend product free[a,b] abelian[t]\ncenter t\n";
        let p = parse_presentation(text, None).unwrap();
        assert_eq!(p, Presentation::f2_times_z());
    }

    #[test]
    fn round_trips() {
        let texts = [
            "gens a t\nrel t a t^-1 a^-1 a^-1\nbackend bs 1 2\n",
            "gens a b\nrel a b a^-1 b^-1\nbackend abelian\n",
            "gens a b t\nrel a t a^-1 t^-1\nbackend product free[a,b] abelian[t]\ncenter t\n",
            "gens a b\nrel a b a^-1 b^-1\nbackend rewrite\nrule b a -> a b\nrule b^-1 a -> a b^-1\nrule b a^-1 -> a^-1 b\nrule b^-1 a^-1 -> a^-1 b^-1\n",
        ];
        for text in texts {
            let p = parse_presentation(text, None).unwrap();
            let printed = print_presentation(&p).unwrap();
            assert_eq!(printed, text);
            assert_eq!(parse_presentation(&printed, None).unwrap(), p);
        }
    }

    #[test]
    fn characters() {
        let z2 = Presentation::free_abelian(&["a", "b"]);
        let chi = parse_character("a=1 b=0", &z2).unwrap();
        assert_eq!(chi, Character::from_ints(&[1, 0]));
        assert_eq!(parse_character(&print_character(&chi, &z2), &z2).unwrap(), chi);
        let bs = Presentation::baumslag_solitar(2).unwrap();
        let err = parse_character("a=1", &bs).unwrap_err();
        assert!(
            matches!(err, CliError::Core(Error::InvalidCharacter { relator: 0, ref residual }) if residual == "-1")
        );
        let half = parse_character("t=-1/2", &bs).unwrap();
        assert_eq!(half.values()[1], Rational::new((-1).into(), 2.into()));
        assert_eq!(print_character(&half, &bs), "a=0 t=-1/2");
        for bad in ["a=x", "a=1/0", "a", "c=1", "a=1 a=2", "a=1/"] {
            assert!(parse_character(bad, &z2).is_err(), "{bad}");
        }
    }
}
