//! The plain-text presentation format.
//!
//! ```text
//! # the walking arrow, with f inverted
//! ob 0
//! ob 1
//! mor f : 0 -> 1
//! sigma f
//! ```
//!
//! `comp g . f = h` declares `g ∘ f = h`. Identities `1_<ob>` exist
//! implicitly; comp lines involving them are optional but checked. Every
//! composable pair of non-identity morphisms needs exactly one comp line.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::cat::{identity_name, CatError, CategoryBuilder, CompositionTable, FiniteCategory, Functor, SigmaSet, Violation};
use crate::words::{Token, ZigzagWord};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: syntax error: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: unknown identifier `{ident}`")]
    UnknownIdent { line: usize, ident: String },
    #[error("line {line}: `{ident}` declared twice")]
    DuplicateDecl { line: usize, ident: String },
    #[error("line {line}: `{ident}` is reserved for an identity")]
    ReservedIdentity { line: usize, ident: String },
    #[error("line {line}: composite `{g} . {f}` given twice")]
    DuplicateComp { line: usize, g: String, f: String },
    #[error("line {line}: `{g}` and `{f}` are not composable")]
    NotComposable { line: usize, g: String, f: String },
    #[error("line {line}: composite has wrong endpoints")]
    CompositeEndpoints { line: usize },
    #[error("line {line}: composite with an identity contradicts the unit law")]
    IdentityComposite { line: usize },
    #[error("not a category: {0}")]
    Validation(Violation),
    #[error("bad word `{word}`: {msg}")]
    Word { word: String, msg: String },
}

/// A parsed file: the category and Σ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub category: FiniteCategory,
    pub sigma: SigmaSet,
}

fn is_ident(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

struct Line<'a> {
    no: usize,
    words: Vec<&'a str>,
}

fn tokenize(text: &str) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let body = raw.split('#').next().unwrap_or("");
            let words: Vec<&str> = body.split_whitespace().collect();
            (!words.is_empty()).then_some(Line { no: i + 1, words })
        })
        .collect()
}

pub fn parse(text: &str) -> Result<Presentation, FormatError> {
    let lines = tokenize(text);
    let syntax = |line: usize, msg: &str| FormatError::Syntax {
        line,
        msg: msg.to_string(),
    };
    let ident = |line: usize, s: &str| {
        if is_ident(s) {
            Ok(s.to_string())
        } else {
            Err(syntax(line, &format!("`{s}` is not an identifier")))
        }
    };

    // declarations first, so comp and sigma lines may come in any order
    let mut objects: Vec<String> = Vec::new();
    let mut mors: Vec<(String, String, String, usize)> = Vec::new();
    let mut decl_line: HashMap<String, usize> = HashMap::new();
    for l in &lines {
        match l.words[0] {
            "ob" => {
                if l.words.len() != 2 {
                    return Err(syntax(l.no, "expected `ob <ident>`"));
                }
                let name = ident(l.no, l.words[1])?;
                if objects.contains(&name) {
                    return Err(FormatError::DuplicateDecl { line: l.no, ident: name });
                }
                objects.push(name);
            }
            "mor" => {
                let w = &l.words;
                if w.len() != 6 || w[2] != ":" || w[4] != "->" {
                    return Err(syntax(l.no, "expected `mor <ident> : <ident> -> <ident>`"));
                }
                let name = ident(l.no, w[1])?;
                if decl_line.insert(name.clone(), l.no).is_some() {
                    return Err(FormatError::DuplicateDecl { line: l.no, ident: name });
                }
                mors.push((name, ident(l.no, w[3])?, ident(l.no, w[5])?, l.no));
            }
            "comp" | "sigma" => {}
            other => return Err(syntax(l.no, &format!("unknown keyword `{other}`"))),
        }
    }
    let mut ends: HashMap<String, (String, String)> = HashMap::new();
    for o in &objects {
        ends.insert(identity_name(o), (o.clone(), o.clone()));
    }
    for (name, s, t, no) in &mors {
        if ends.contains_key(name) {
            return Err(FormatError::ReservedIdentity {
                line: *no,
                ident: name.clone(),
            });
        }
        for o in [s, t] {
            if !objects.contains(o) {
                return Err(FormatError::UnknownIdent {
                    line: *no,
                    ident: o.clone(),
                });
            }
        }
        ends.insert(name.clone(), (s.clone(), t.clone()));
    }
    let is_id = |m: &str| objects.iter().any(|o| identity_name(o) == m);

    let mut b = CategoryBuilder::new();
    for o in &objects {
        b.object(o);
    }
    for (name, s, t, _) in &mors {
        b.morphism(name, s, t);
    }
    let mut seen_comp: HashMap<(String, String), usize> = HashMap::new();
    let mut sigma_names: Vec<String> = Vec::new();
    for l in &lines {
        let w = &l.words;
        match w[0] {
            "comp" => {
                if w.len() != 6 || w[2] != "." || w[4] != "=" {
                    return Err(syntax(l.no, "expected `comp <g> . <f> = <h>`"));
                }
                let (g, f, h) = (ident(l.no, w[1])?, ident(l.no, w[3])?, ident(l.no, w[5])?);
                for m in [&g, &f, &h] {
                    if !ends.contains_key(m) {
                        return Err(FormatError::UnknownIdent {
                            line: l.no,
                            ident: m.clone(),
                        });
                    }
                }
                let ((gs, gt), (fs, ft), (hs, ht)) = (&ends[&g], &ends[&f], &ends[&h]);
                if gs != ft {
                    return Err(FormatError::NotComposable { line: l.no, g, f });
                }
                if hs != fs || ht != gt {
                    return Err(FormatError::CompositeEndpoints { line: l.no });
                }
                if seen_comp.insert((g.clone(), f.clone()), l.no).is_some() {
                    return Err(FormatError::DuplicateComp { line: l.no, g, f });
                }
                if is_id(&g) || is_id(&f) {
                    let other = if is_id(&g) { &f } else { &g };
                    if &h != other {
                        return Err(FormatError::IdentityComposite { line: l.no });
                    }
                    continue;
                }
                b.compose(&g, &f, &h);
            }
            "sigma" => {
                let rest = w[1..].join(" ");
                for item in rest.split(',') {
                    let item = item.trim();
                    if item.is_empty() {
                        if rest.trim().is_empty() {
                            break;
                        }
                        return Err(syntax(l.no, "empty sigma entry"));
                    }
                    let name = ident(l.no, item)?;
                    if !ends.contains_key(&name) {
                        return Err(FormatError::UnknownIdent { line: l.no, ident: name });
                    }
                    sigma_names.push(name);
                }
            }
            _ => {}
        }
    }
    let category = b.build().map_err(|e| match e {
        CatError::Invalid(v) => FormatError::Validation(v),
        other => FormatError::Syntax {
            line: 0,
            msg: other.to_string(),
        },
    })?;
    let sigma = SigmaSet::new(&category, sigma_names.iter().map(|n| category.m(n)));
    Ok(Presentation { category, sigma })
}

/// Canonical form: objects, morphisms and comp lines in canonical order, then
/// one sigma line.
pub fn serialize(c: &FiniteCategory, s: &SigmaSet) -> String {
    let mut out = String::new();
    for x in c.objects() {
        writeln!(out, "ob {}", c.obj_name(x)).unwrap();
    }
    for m in c.morphisms().filter(|&m| !c.is_identity(m)) {
        writeln!(
            out,
            "mor {} : {} -> {}",
            c.mor_name(m),
            c.obj_name(c.source(m)),
            c.obj_name(c.target(m))
        )
        .unwrap();
    }
    for g in c.morphisms().filter(|&m| !c.is_identity(m)) {
        for f in c.into_obj(c.source(g)).filter(|&m| !c.is_identity(m)) {
            writeln!(out, "comp {} . {} = {}", c.mor_name(g), c.mor_name(f), c.mor_name(c.comp(g, f))).unwrap();
        }
    }
    if !s.is_empty() {
        let names: Vec<&str> = s.members().map(|m| c.mor_name(m)).collect();
        writeln!(out, "sigma {}", names.join(", ")).unwrap();
    }
    out
}

/// A functor as comment lines, one per object and morphism.
pub fn serialize_functor(name: &str, f: &Functor) -> String {
    let (c, x) = (f.source(), f.target());
    let mut out = String::new();
    for o in c.objects() {
        writeln!(out, "# functor {name} ob {} -> {}", c.obj_name(o), x.obj_name(f.ob(o))).unwrap();
    }
    for m in c.morphisms() {
        writeln!(out, "# functor {name} mor {} -> {}", c.mor_name(m), x.mor_name(f.mor(m))).unwrap();
    }
    out
}

/// `f.~t.g` reads left to right; `~t` walks back along `t ∈ Σ`; `@x` is the
/// empty word at `x`.
pub fn parse_word(c: &FiniteCategory, s: &SigmaSet, text: &str) -> Result<ZigzagWord, FormatError> {
    let text = text.trim();
    let err = |msg: String| FormatError::Word {
        word: text.to_string(),
        msg,
    };
    if let Some(obj) = text.strip_prefix('@') {
        let x = c.object(obj).ok_or_else(|| err(format!("unknown object `{obj}`")))?;
        return Ok(ZigzagWord::empty(x));
    }
    let mut tokens = Vec::new();
    for part in text.split('.') {
        let (back, name) = match part.strip_prefix('~') {
            Some(rest) => (true, rest),
            None => (false, part),
        };
        let m = c.mor(name).ok_or_else(|| err(format!("unknown morphism `{name}`")))?;
        tokens.push(if back { Token::Bwd(m) } else { Token::Fwd(m) });
    }
    ZigzagWord::from_tokens(c, s, tokens).map_err(|e| err(e.to_string()))
}

pub fn format_word(c: &FiniteCategory, w: &ZigzagWord) -> String {
    w.display(c).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    const FIX_I: &str = "ob 0\nob 1\nmor f : 0 -> 1\nsigma f\n";

    #[test]
    fn parse_walking_arrow() {
        let p = parse(FIX_I).unwrap();
        assert_eq!(p.category, fixtures::walking_arrow());
        assert_eq!(p.sigma.len(), 1);
    }

    #[test]
    fn round_trip() {
        let text = "# comment\nob Z\nob X\nob Y\nmor t : Y -> Z\nmor h : X -> Z\nmor g : X -> Y\nmor f : X -> Y\n\
                    comp t . f = h  # trailing\ncomp t . g = h\ncomp 1_Z . t = t\nsigma t\nsigma 1_X, 1_Y, 1_Z\n";
        let p = parse(text).unwrap();
        assert_eq!(p.category, fixtures::parallel_pair());
        let canon = serialize(&p.category, &p.sigma);
        let again = parse(&canon).unwrap();
        assert_eq!(again, p);
        assert_eq!(serialize(&again.category, &again.sigma), canon);
    }

    #[test]
    fn errors_carry_lines() {
        let text = "ob X\nob Y\nmor f : X -> Y\nmor t : Y -> Y\ncomp t . f = q\n";
        assert_eq!(
            parse(text),
            Err(FormatError::UnknownIdent {
                line: 5,
                ident: "q".into()
            })
        );
        assert!(matches!(parse("ob X\nob X\n"), Err(FormatError::DuplicateDecl { line: 2, .. })));
        assert!(matches!(parse("ob X\nmor 1_X : X -> X\n"), Err(FormatError::ReservedIdentity { line: 2, .. })));
        assert!(matches!(parse("obj X\n"), Err(FormatError::Syntax { line: 1, .. })));
        assert!(matches!(
            parse("ob X\nmor e : X -> X\n"),
            Err(FormatError::Validation(Violation::MissingComposite { .. }))
        ));
        assert!(matches!(
            parse("ob X\nmor e : X -> X\ncomp e . e = e\ncomp e . e = e\n"),
            Err(FormatError::DuplicateComp { line: 4, .. })
        ));
        assert!(matches!(
            parse("ob X\nmor e : X -> X\ncomp e . e = e\ncomp e . 1_X = 1_X\n"),
            Err(FormatError::IdentityComposite { line: 4 })
        ));
    }

    #[test]
    fn words() {
        let p = parse(FIX_I).unwrap();
        let (c, s) = (&p.category, &p.sigma);
        let w = parse_word(c, s, "f.~f").unwrap();
        assert_eq!(w.len(), 2);
        assert_eq!(format_word(c, &w), "f.~f");
        let e = parse_word(c, s, "@0").unwrap();
        assert!(e.is_empty());
        assert_eq!(format_word(c, &e), "@0");
        assert!(parse_word(c, s, "f.f").is_err());
        assert!(parse_word(c, &SigmaSet::identities(c), "~f").is_err());
        assert!(parse_word(c, s, "q").is_err());
    }
}
