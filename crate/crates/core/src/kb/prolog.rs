//! Reader for WordNet prolog fact files (`wn_s.pl`, `wn_hyp.pl`, ...).

use std::collections::HashSet;
use std::path::Path;

use thiserror::Error;

use super::{PosClass, WordNet};

#[derive(Debug, Error)]
pub enum PrologError {
    #[error("{file}:{line}: malformed fact: {msg}")]
    MalformedFact { file: String, line: usize, msg: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq)]
enum Arg {
    Atom(String),
    Int(i64),
}

/// Parses `name(arg, ...).` with quoted atoms (`''` escapes a quote).
fn parse_fact(line: &str) -> Result<(String, Vec<Arg>), String> {
    let line = line.trim();
    let body = line.strip_suffix('.').ok_or("missing final '.'")?.trim_end();
    let open = body.find('(').ok_or("missing '('")?;
    let name = body[..open].trim();
    if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(format!("bad predicate name {name:?}"));
    }
    let inner = body[open + 1..].strip_suffix(')').ok_or("missing ')'")?;
    let mut args = Vec::new();
    let mut chars = inner.chars().peekable();
    loop {
        while chars.peek().is_some_and(|c| c.is_whitespace()) {
            chars.next();
        }
        match chars.peek() {
            None => return Err("empty argument".into()),
            Some('\'') => {
                chars.next();
                let mut s = String::new();
                loop {
                    match chars.next() {
                        None => return Err("unterminated quoted atom".into()),
                        Some('\'') => {
                            if chars.peek() == Some(&'\'') {
                                chars.next();
                                s.push('\'');
                            } else {
                                break;
                            }
                        }
                        Some(c) => s.push(c),
                    }
                }
                args.push(Arg::Atom(s));
            }
            Some(_) => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c == ',' || c.is_whitespace() {
                        break;
                    }
                    s.push(c);
                    chars.next();
                }
                if s.is_empty() {
                    return Err("empty argument".into());
                }
                args.push(match s.parse::<i64>() {
                    Ok(i) => Arg::Int(i),
                    Err(_) => Arg::Atom(s),
                });
            }
        }
        while chars.peek().is_some_and(|c| c.is_whitespace()) {
            chars.next();
        }
        match chars.next() {
            None => break,
            Some(',') => continue,
            Some(c) => return Err(format!("unexpected {c:?}")),
        }
    }
    Ok((name.to_string(), args))
}

fn int(a: &Arg) -> Result<i64, String> {
    match a {
        Arg::Int(i) => Ok(*i),
        Arg::Atom(s) => Err(format!("expected a number, found {s:?}")),
    }
}

fn atom(a: &Arg) -> Result<String, String> {
    match a {
        Arg::Atom(s) => Ok(s.clone()),
        Arg::Int(i) => Ok(i.to_string()),
    }
}

/// Canonical form of a WordNet word: lowercase, spaces as underscores.
pub fn normalize_word(w: &str) -> String {
    w.trim().to_lowercase().split_whitespace().collect::<Vec<_>>().join("_")
}

#[derive(Default)]
pub(super) struct Builder {
    pub wn: WordNet,
    ant_raw: Vec<(i64, i64, i64, i64)>,
    der_raw: Vec<(i64, i64, i64, i64)>,
    pub errors: Vec<PrologError>,
}

impl Builder {
    pub fn add_source(&mut self, file: &str, src: &str) {
        for (i, line) in src.lines().enumerate() {
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('%') {
                continue;
            }
            if let Err(msg) = self.add_line(trimmed) {
                let err = PrologError::MalformedFact { file: file.to_string(), line: i + 1, msg };
                log::warn!("{err}");
                self.errors.push(err);
            }
        }
    }

    fn add_line(&mut self, line: &str) -> Result<(), String> {
        let (name, args) = parse_fact(line)?;
        let arity = |n: usize| {
            if args.len() == n {
                Ok(())
            } else {
                Err(format!("{name}/{} has {} arguments", n, args.len()))
            }
        };
        match name.as_str() {
            "s" => {
                arity(6)?;
                let id = int(&args[0])?;
                let wnum = int(&args[1])?;
                let word = normalize_word(&atom(&args[2])?);
                let pos = PosClass::from_wordnet(&atom(&args[3])?).ok_or("unknown synset type")?;
                let sense = int(&args[4])?;
                self.wn.add_member(id, pos, wnum, &word, sense);
            }
            "hyp" => {
                arity(2)?;
                self.wn.hypernyms.entry(int(&args[0])?).or_default().push(int(&args[1])?);
            }
            "sim" => {
                arity(2)?;
                let (a, b) = (int(&args[0])?, int(&args[1])?);
                self.wn.similar.insert((a, b));
                self.wn.similar.insert((b, a));
            }
            "ant" => {
                arity(4)?;
                self.ant_raw.push((int(&args[0])?, int(&args[1])?, int(&args[2])?, int(&args[3])?));
            }
            "der" => {
                arity(4)?;
                self.der_raw.push((int(&args[0])?, int(&args[1])?, int(&args[2])?, int(&args[3])?));
            }
            other => return Err(format!("unsupported predicate {other}")),
        }
        Ok(())
    }

    /// Resolves word-number pairs once all synsets are known.
    pub fn finish(mut self) -> (WordNet, Vec<PrologError>) {
        let mut resolved = [HashSet::new(), HashSet::new()];
        for (raw, out) in [&self.ant_raw, &self.der_raw].into_iter().zip(resolved.iter_mut()) {
            for &(s1, w1, s2, w2) in raw {
                match (self.wn.sense_key(s1, w1), self.wn.sense_key(s2, w2)) {
                    (Some(a), Some(b)) => {
                        out.insert((a.clone(), b.clone()));
                        out.insert((b, a));
                    }
                    _ => log::warn!("relation over unknown word {s1}/{w1} {s2}/{w2}"),
                }
            }
        }
        let [ant, der] = resolved;
        self.wn.antonyms = ant;
        self.wn.derived = der;
        (self.wn, self.errors)
    }
}

/// Loads every `.pl` file under the given paths (files or directories).
pub fn load_prolog_kb<P: AsRef<Path>>(paths: &[P]) -> Result<(WordNet, Vec<PrologError>), PrologError> {
    let mut files = Vec::new();
    for p in paths {
        let p = p.as_ref();
        if p.is_dir() {
            let entries =
                std::fs::read_dir(p).map_err(|source| PrologError::Io { path: p.display().to_string(), source })?;
            let mut found: Vec<_> = entries
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| f.extension().is_some_and(|x| x == "pl"))
                .collect();
            found.sort();
            files.extend(found);
        } else {
            files.push(p.to_path_buf());
        }
    }
    let mut b = Builder::default();
    for f in files {
        let src =
            std::fs::read_to_string(&f).map_err(|source| PrologError::Io { path: f.display().to_string(), source })?;
        b.add_source(&f.display().to_string(), &src);
    }
    Ok(b.finish())
}

/// Parses facts from a string, for fixtures and tests.
pub fn parse_prolog_kb(src: &str) -> (WordNet, Vec<PrologError>) {
    let mut b = Builder::default();
    b.add_source("<string>", src);
    b.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fact_syntax() {
        let (name, args) = parse_fact("s(100001740,1,'entity',n,1,11).").unwrap();
        assert_eq!(name, "s");
        assert_eq!(args[2], Arg::Atom("entity".into()));
        let (_, args) = parse_fact("s(1, 1, 'jack-o''-lantern', n, 1, 0).").unwrap();
        assert_eq!(args[2], Arg::Atom("jack-o'-lantern".into()));
        assert!(parse_fact("s(1,2").is_err());
        assert!(parse_fact("hyp(1,,2).").is_err());
        assert!(parse_fact("s(1,'open).").is_err());
    }

    #[test]
    fn malformed_lines_are_skipped() {
        let (wn, errs) =
            parse_prolog_kb("s(1,1,'hond',n,1,0).\nthis is junk\nhyp(1,2\n% comment\ns(2,1,'dier',n,1,0).\n");
        assert_eq!(errs.len(), 2);
        assert_eq!(wn.synset_count(), 2);
    }

    #[test]
    fn multiword_normalization() {
        assert_eq!(normalize_word("Musical Instrument"), "musical_instrument");
    }
}
