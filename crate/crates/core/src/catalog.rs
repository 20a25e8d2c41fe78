//! Text formats for algebras and certificates, and the built-in catalog.
//!
//! Algebra files are line-oriented UTF-8 with `#` comments:
//!
//! ```text
//! algebra N2
//! dim 4
//! params alpha
//! e1*e1 = e3
//! e1*e2 = e4
//! e2*e1 = -alpha*e3
//! e2*e2 = -e4
//! ```
//!
//! Unlisted products are zero; one product per line, left factor first.
//! Certificate files name a source and a target (from the catalog or from
//! algebra blocks earlier in the same file), an optional parametric index,
//! and one row per basis element:
//!
//! ```text
//! degeneration name_of_proof
//! source D401
//! index lambda = t, alpha = 0, beta = 0
//! target N2 with alpha = 1
//! E1 = t*e1
//! E2 = t*e2 + t^2*e3
//! E3 = t^2*e3
//! E4 = t^2*e4
//! ```
//!
//! The macros `Theta(X) = (1 + sqrt(1 - 4*X))/2` and `Psi(X) = 1 - Theta(X)`
//! are available in index and basis expressions (sampled mode only).

use std::collections::BTreeMap;

use crate::algebra::Algebra;
use crate::degeneration::Certificate;
use crate::error::Error;
use crate::scalars::{parse_with_location, ExprMode, Scalar, SqrtExpr, Sym};
use crate::Result;

/// A named collection of algebras, iterated in insertion order.
#[derive(Clone, Debug, Default)]
pub struct Catalog {
    map: BTreeMap<String, Algebra>,
    order: Vec<String>,
}

impl Catalog {
    pub fn new() -> Catalog {
        Catalog::default()
    }

    pub fn with_builtins() -> Catalog {
        let mut c = Catalog::new();
        for a in builtin_catalog() {
            c.insert(a).expect("builtin names are unique");
        }
        c
    }

    pub fn insert(&mut self, algebra: Algebra) -> Result<()> {
        let name = algebra.name().to_owned();
        if self.map.contains_key(&name) {
            return Err(Error::DuplicateAlgebra(name));
        }
        self.order.push(name.clone());
        self.map.insert(name, algebra);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&Algebra> {
        self.map.get(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Algebra> {
        self.order.iter().map(|n| &self.map[n])
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }
}

/// The algebras the classification displays explicitly, transcribed verbatim,
/// plus zero algebras of dimensions 1 through 4.
pub fn builtin_catalog() -> Vec<Algebra> {
    let sources = [
        "algebra D401\n\
         dim 4\n\
         params lambda, alpha, beta\n\
         e1*e1 = lambda*e3 + e4\n\
         e1*e3 = alpha*e4\n\
         e2*e1 = e3\n\
         e2*e2 = e3\n\
         e2*e3 = beta*e4\n\
         e3*e1 = e4\n",
        "algebra N2\n\
         dim 4\n\
         params alpha\n\
         e1*e1 = e3\n\
         e1*e2 = e4\n\
         e2*e1 = -alpha*e3\n\
         e2*e2 = -e4\n",
        "algebra N3\n\
         dim 4\n\
         params alpha\n\
         e1*e1 = e4\n\
         e1*e2 = alpha*e4\n\
         e2*e1 = -alpha*e4\n\
         e2*e2 = e4\n\
         e3*e3 = e4\n",
    ];
    let mut out: Vec<Algebra> = sources
        .iter()
        .map(|s| parse_algebra_file(s).expect("builtin tables parse"))
        .collect();
    for n in 1..=4 {
        out.push(Algebra::zero_algebra(format!("zero{}", n), n));
    }
    out
}

/// `(line number, text)` with comments stripped; blank lines dropped.
fn logical_lines(text: &str) -> Vec<(usize, String)> {
    text.lines()
        .enumerate()
        .map(|(i, line)| {
            let stripped = match line.find('#') {
                Some(p) => &line[..p],
                None => line,
            };
            (i + 1, stripped.to_owned())
        })
        .filter(|(_, l)| !l.trim().is_empty())
        .collect()
}

fn first_word(line: &str) -> &str {
    line.trim().split_whitespace().next().unwrap_or("")
}

/// Parse a single-algebra file.
pub fn parse_algebra_file(text: &str) -> Result<Algebra> {
    let mut algebras = parse_algebra_blocks(text)?;
    match algebras.len() {
        1 => Ok(algebras.pop().expect("one element")),
        0 => Err(Error::parse(1, 1, "expected an algebra block")),
        n => Err(Error::parse(
            1,
            1,
            format!("expected exactly one algebra block, found {n}"),
        )),
    }
}

/// Parse every `algebra` block in a file.
pub fn parse_algebra_blocks(text: &str) -> Result<Vec<Algebra>> {
    let lines = logical_lines(text);
    let mut out = Vec::new();
    let mut i = 0;
    while i < lines.len() {
        let (ln, line) = &lines[i];
        if first_word(line) != "algebra" {
            return Err(Error::parse(
                *ln,
                1,
                format!("expected 'algebra', found {:?}", first_word(line)),
            ));
        }
        let mut end = i + 1;
        while end < lines.len() && first_word(&lines[end].1) != "algebra" {
            end += 1;
        }
        out.push(parse_algebra_lines(&lines[i..end])?);
        i = end;
    }
    Ok(out)
}

fn ident_after_keyword<'a>(ln: usize, line: &'a str, keyword: &str) -> Result<&'a str> {
    let rest = line.trim().strip_prefix(keyword).unwrap_or("").trim();
    if rest.is_empty() || rest.split_whitespace().count() != 1 {
        return Err(Error::parse(
            ln,
            1,
            format!("expected '{keyword} <name>'"),
        ));
    }
    let name = rest.split_whitespace().next().expect("nonempty");
    let mut chars = name.chars();
    let head_ok = chars.next().is_some_and(|c| c.is_ascii_alphabetic());
    if !head_ok || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(Error::parse(ln, 1, format!("invalid name {:?}", name)));
    }
    Ok(name)
}

fn parse_algebra_lines(lines: &[(usize, String)]) -> Result<Algebra> {
    let (first_ln, first) = &lines[0];
    let name = ident_after_keyword(*first_ln, first, "algebra")?.to_owned();

    let mut rest = lines[1..].iter();
    let (dim_ln, dim_line) = rest
        .next()
        .ok_or_else(|| Error::parse(*first_ln, 1, "missing 'dim' line"))?;
    if first_word(dim_line) != "dim" {
        return Err(Error::parse(*dim_ln, 1, "expected 'dim <n>'"));
    }
    let dim: usize = dim_line
        .trim()
        .strip_prefix("dim")
        .unwrap_or("")
        .trim()
        .parse()
        .map_err(|_| Error::parse(*dim_ln, 1, "expected 'dim <n>'"))?;
    if dim == 0 {
        return Err(Error::parse(*dim_ln, 1, "dim must be at least 1"));
    }

    let mut params: Vec<Sym> = Vec::new();
    let mut product_lines: Vec<(usize, String)> = Vec::new();
    let mut params_seen = false;
    for (ln, line) in rest {
        match first_word(line) {
            "params" => {
                if params_seen || !product_lines.is_empty() {
                    return Err(Error::parse(
                        *ln,
                        1,
                        "params must be declared once, before products",
                    ));
                }
                params_seen = true;
                let body = line.trim().strip_prefix("params").unwrap_or("");
                for raw in body.split(',').flat_map(str::split_whitespace) {
                    if raw == "t" {
                        return Err(Error::parse(*ln, 1, "t is reserved"));
                    }
                    let sym = Sym::new(raw);
                    if params.contains(&sym) {
                        return Err(Error::parse(*ln, 1, format!("duplicate parameter {raw}")));
                    }
                    params.push(sym);
                }
                if params.is_empty() {
                    return Err(Error::parse(*ln, 1, "empty params line"));
                }
            }
            _ => product_lines.push((*ln, line.clone())),
        }
    }

    let evars: Vec<Sym> = (1..=dim).map(|i| Sym::new(&format!("e{}", i))).collect();
    let mut allowed: Vec<Sym> = params.clone();
    allowed.extend(evars.iter().copied());

    let mut builder = Algebra::builder(name, dim, params);
    let mut seen: Vec<(usize, usize)> = Vec::new();
    for (ln, line) in &product_lines {
        let eq = line
            .find('=')
            .ok_or_else(|| Error::parse(*ln, 1, "expected 'ei*ej = ...'"))?;
        let (lhs, rhs) = (&line[..eq], &line[eq + 1..]);
        let (i, j) = parse_product_lhs(*ln, lhs, dim)?;
        if seen.contains(&(i, j)) {
            return Err(Error::parse(
                *ln,
                1,
                format!("duplicate product line for e{}*e{}", i + 1, j + 1),
            ));
        }
        seen.push((i, j));
        let parsed = parse_with_location(rhs, &allowed, ExprMode::Exact, *ln, eq + 1)?;
        let value = parsed.into_scalar()?;
        let row = extract_linear(*ln, &value, &evars)?;
        for (k, coeff) in row.into_iter().enumerate() {
            if !coeff.is_zero() {
                builder.set(i, j, k, coeff);
            }
        }
    }
    builder.finish()
}

/// Parse `e<i> * e<j>` on the left of a product line; returns 0-based indices.
fn parse_product_lhs(ln: usize, lhs: &str, dim: usize) -> Result<(usize, usize)> {
    let compact: String = lhs.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::parse(ln, 1, "left side must look like 'e1*e2'");
    let star = compact.find('*').ok_or_else(bad)?;
    let (a, b) = (&compact[..star], &compact[star + 1..]);
    let parse_e = |s: &str| -> Result<usize> {
        let digits = s.strip_prefix('e').ok_or_else(bad)?;
        let idx: usize = digits.parse().map_err(|_| bad())?;
        if idx == 0 || idx > dim {
            return Err(Error::parse(
                ln,
                1,
                format!("index out of range: e{idx} in dimension {dim}"),
            ));
        }
        Ok(idx - 1)
    };
    Ok((parse_e(a)?, parse_e(b)?))
}

/// Split a scalar that is linear-homogeneous in the basis symbols into its
/// per-basis-vector coefficients.
fn extract_linear(ln: usize, value: &Scalar, evars: &[Sym]) -> Result<Vec<Scalar>> {
    for &e in evars {
        if value.denom().contains_var(e) {
            return Err(Error::parse(ln, 1, "basis vectors cannot appear in denominators"));
        }
    }
    let mut coeffs = Vec::with_capacity(evars.len());
    let mut recombined = Scalar::zero();
    for &e in evars {
        let num_k = value.numer().coeff_of_power(e, 1);
        let coeff = Scalar::new(num_k, value.denom().clone())?;
        for &other in evars {
            if coeff.contains_var(other) {
                return Err(Error::parse(
                    ln,
                    1,
                    "right side must be linear in the basis vectors",
                ));
            }
        }
        recombined = recombined.add(&coeff.mul(&Scalar::var(e)));
        coeffs.push(coeff);
    }
    if &recombined != value {
        return Err(Error::parse(
            ln,
            1,
            "right side must be a linear combination of basis vectors",
        ));
    }
    Ok(coeffs)
}

/// Render an algebra in the file grammar; the output reparses to a
/// structurally equal algebra.
pub fn serialize_algebra(a: &Algebra) -> String {
    let mut out = format!("algebra {}\ndim {}\n", a.name(), a.dim());
    if !a.params().is_empty() {
        let names: Vec<&str> = a.params().iter().map(|p| p.name()).collect();
        out.push_str(&format!("params {}\n", names.join(", ")));
    }
    for (i, j, row) in a.nonzero_products() {
        let mut terms: Vec<String> = Vec::new();
        for (k, coeff) in row.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            terms.push(render_term(coeff, &format!("e{}", k + 1)));
        }
        let mut rhs = String::new();
        for (idx, term) in terms.iter().enumerate() {
            if idx == 0 {
                rhs.push_str(term);
            } else if let Some(rest) = term.strip_prefix('-') {
                rhs.push_str(" - ");
                rhs.push_str(rest);
            } else {
                rhs.push_str(" + ");
                rhs.push_str(term);
            }
        }
        out.push_str(&format!("e{}*e{} = {}\n", i + 1, j + 1, rhs));
    }
    out
}

fn render_term(coeff: &Scalar, basis: &str) -> String {
    if coeff.is_one() {
        return basis.to_owned();
    }
    if coeff.neg().is_one() {
        return format!("-{}", basis);
    }
    let s = coeff.to_input_string();
    if coeff.is_simple_factor() {
        format!("{}*{}", s, basis)
    } else if coeff.denom().is_one() {
        format!("({})*{}", s, basis)
    } else {
        // already in the shape (num)/(den)
        format!("{}*{}", s, basis)
    }
}

/// Parse a certificate file against a catalog. Algebra blocks at the top of
/// the file define local names that take precedence over catalog entries.
pub fn parse_certificate_file(text: &str, catalog: &Catalog) -> Result<Certificate> {
    let lines = logical_lines(text);
    // inline algebra blocks come first
    let mut split = 0;
    while split < lines.len() && first_word(&lines[split].1) != "degeneration" {
        split += 1;
    }
    if split == lines.len() {
        return Err(Error::parse(1, 1, "missing 'degeneration' block"));
    }
    let mut inline = Catalog::new();
    if split > 0 {
        let head: String = lines[..split]
            .iter()
            .map(|(_, l)| format!("{}\n", l))
            .collect();
        for a in parse_algebra_blocks(&head)? {
            inline.insert(a)?;
        }
    }
    let lookup = |name: &str| -> Result<Algebra> {
        inline
            .get(name)
            .or_else(|| catalog.get(name))
            .cloned()
            .ok_or_else(|| Error::UnknownAlgebra(name.to_owned()))
    };

    let body = &lines[split..];
    let (head_ln, head) = &body[0];
    let cert_name = ident_after_keyword(*head_ln, head, "degeneration")?.to_owned();

    let mut source: Option<Algebra> = None;
    let mut target_line: Option<(usize, String)> = None;
    let mut index_lines: Vec<(usize, String)> = Vec::new();
    let mut row_lines: Vec<(usize, String)> = Vec::new();
    for (ln, line) in &body[1..] {
        match first_word(line) {
            "source" => {
                if source.is_some() {
                    return Err(Error::parse(*ln, 1, "duplicate source line"));
                }
                let name = ident_after_keyword(*ln, line, "source")?;
                source = Some(lookup(name)?);
            }
            "target" => {
                if target_line.is_some() {
                    return Err(Error::parse(*ln, 1, "duplicate target line"));
                }
                target_line = Some((*ln, line.clone()));
            }
            "index" => index_lines.push((*ln, line.clone())),
            "degeneration" => {
                return Err(Error::parse(
                    *ln,
                    1,
                    "only one degeneration block per file",
                ));
            }
            _ => row_lines.push((*ln, line.clone())),
        }
    }
    let source =
        source.ok_or_else(|| Error::parse(*head_ln, 1, "missing 'source' line"))?;
    let n = source.dim();

    // index assignments: names now, expressions once the free set is known
    let mut index_raw: Vec<(Sym, usize, usize, String)> = Vec::new();
    for (ln, line) in &index_lines {
        let body = line.trim_start();
        let offset = line.len() - body.len() + "index".len();
        let body = body.strip_prefix("index").unwrap_or("");
        let mut col = offset;
        for piece in body.split(',') {
            let eq = piece.find('=').ok_or_else(|| {
                Error::parse(*ln, col + 1, "index entries look like 'name = expr'")
            })?;
            let name = piece[..eq].trim();
            if name.is_empty() {
                return Err(Error::parse(*ln, col + 1, "missing parameter name"));
            }
            let sym = Sym::new(name);
            if !source.params().contains(&sym) {
                return Err(Error::parse(
                    *ln,
                    col + 1,
                    format!("{} is not a parameter of {}", name, source.name()),
                ));
            }
            if index_raw.iter().any(|(s, ..)| *s == sym) {
                return Err(Error::parse(
                    *ln,
                    col + 1,
                    format!("parameter {} assigned twice", name),
                ));
            }
            index_raw.push((sym, *ln, col + eq + 1, piece[eq + 1..].to_owned()));
            col += piece.len() + 1;
        }
    }

    // target, with optional `with` specialization
    let (target_ln, target_text) =
        target_line.ok_or_else(|| Error::parse(*head_ln, 1, "missing 'target' line"))?;
    let trimmed = target_text.trim();
    let after = trimmed.strip_prefix("target").unwrap_or("").trim();
    let (target_name, with_clause) = match after.find(" with ") {
        Some(p) => (&after[..p], Some(&after[p + 6..])),
        None => (after, None),
    };
    let target_name = target_name.trim();
    if target_name.is_empty() || target_name.contains(char::is_whitespace) {
        return Err(Error::parse(target_ln, 1, "expected 'target <name> [with ...]'"));
    }
    let mut target = lookup(target_name)?;
    let indexed: Vec<Sym> = index_raw.iter().map(|(s, ..)| *s).collect();
    let unassigned: Vec<Sym> = source
        .params()
        .iter()
        .copied()
        .filter(|p| !indexed.contains(p))
        .collect();
    if let Some(clause) = with_clause {
        let mut assignment = BTreeMap::new();
        for piece in clause.split(',') {
            let eq = piece.find('=').ok_or_else(|| {
                Error::parse(target_ln, 1, "with entries look like 'name = expr'")
            })?;
            let name = piece[..eq].trim();
            let sym = Sym::new(name);
            if !target.params().contains(&sym) {
                return Err(Error::parse(
                    target_ln,
                    1,
                    format!("{} is not a parameter of {}", name, target_name),
                ));
            }
            let parsed =
                parse_with_location(&piece[eq + 1..], &unassigned, ExprMode::Exact, target_ln, 0)?;
            assignment.insert(sym, parsed.into_scalar()?);
        }
        target = target.substitute_params(&assignment)?;
        target = target.with_name(format!("{} with {}", target_name, clause.trim()));
    }

    // Expressions may use t, the target's free parameters and any source
    // parameter name. The index substitutes simultaneously, so a parameter
    // name on a right-hand side is a free variable; `index alpha = alpha`
    // keeps alpha free, which is how a family degenerates as a whole.
    let mut allowed: Vec<Sym> = vec![Sym::t()];
    for &p in target.params() {
        if !allowed.contains(&p) {
            allowed.push(p);
        }
    }
    for &p in source.params() {
        if !allowed.contains(&p) {
            allowed.push(p);
        }
    }

    let mut index: Vec<(Sym, SqrtExpr)> = Vec::new();
    for (sym, ln, col, text) in index_raw {
        let parsed = parse_with_location(&text, &allowed, ExprMode::Sampled, ln, col)?;
        index.push((sym, parsed.into_sqrt_expr()));
    }

    // basis rows E1..En
    let mut rows: Vec<Option<Vec<SqrtExpr>>> = vec![None; n];
    let evars: Vec<Sym> = (1..=n).map(|i| Sym::new(&format!("e{}", i))).collect();
    let mut row_allowed = allowed.clone();
    row_allowed.extend(evars.iter().copied());
    for (ln, line) in &row_lines {
        let trimmed = line.trim_start();
        if !trimmed.starts_with('E') {
            return Err(Error::parse(
                *ln,
                1,
                format!("unexpected line {:?} in certificate", first_word(line)),
            ));
        }
        let eq = line
            .find('=')
            .ok_or_else(|| Error::parse(*ln, 1, "basis rows look like 'E1 = ...'"))?;
        let lhs = line[..eq].trim();
        let idx: usize = lhs[1..]
            .parse()
            .map_err(|_| Error::parse(*ln, 1, "basis rows look like 'E1 = ...'"))?;
        if idx == 0 || idx > n {
            return Err(Error::parse(
                *ln,
                1,
                format!("index out of range: E{idx} in dimension {n}"),
            ));
        }
        if rows[idx - 1].is_some() {
            return Err(Error::parse(*ln, 1, format!("duplicate basis row E{idx}")));
        }
        let parsed =
            parse_with_location(&line[eq + 1..], &row_allowed, ExprMode::Sampled, *ln, eq + 1)?;
        let expr = parsed.into_sqrt_expr();
        // split the linear combination into per-e_j coefficients
        for &e in &evars {
            if expr.value.denom().contains_var(e) {
                return Err(Error::parse(*ln, 1, "basis vectors cannot appear in denominators"));
            }
        }
        let mut coeffs = Vec::with_capacity(n);
        let mut recombined = Scalar::zero();
        for &e in &evars {
            let num_k = expr.value.numer().coeff_of_power(e, 1);
            let coeff = Scalar::new(num_k, expr.value.denom().clone())?;
            for &other in &evars {
                if coeff.contains_var(other) {
                    return Err(Error::parse(
                        *ln,
                        1,
                        "basis rows must be linear in the basis vectors",
                    ));
                }
            }
            recombined = recombined.add(&coeff.mul(&Scalar::var(e)));
            coeffs.push(coeff);
        }
        if recombined != expr.value {
            return Err(Error::parse(
                *ln,
                1,
                "basis rows must be linear combinations of basis vectors",
            ));
        }
        let radicals = expr.radicals;
        rows[idx - 1] = Some(
            coeffs
                .into_iter()
                .map(|value| {
                    let used: Vec<_> = radicals
                        .iter()
                        .filter(|r| value.contains_var(r.sym))
                        .cloned()
                        .collect();
                    SqrtExpr {
                        value,
                        radicals: used,
                    }
                })
                .collect(),
        );
    }
    let mut basis = Vec::with_capacity(n);
    for (i, row) in rows.into_iter().enumerate() {
        match row {
            Some(r) => basis.push(r),
            None => {
                return Err(Error::CertificateInvalid(format!(
                    "basis row E{} missing",
                    i + 1
                )))
            }
        }
    }

    let cert = Certificate {
        name: cert_name,
        source,
        index,
        basis,
        target,
    };
    cert.validate()?;
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degeneration::{verify_certificate, Verdict, VerifyMode, VerifyOptions};
    use crate::identities::check_cd;
    use crate::invariants::power_series_dims;
    use crate::scalars::Rational;

    const N2_TEXT: &str = "algebra N2\n\
        dim 4\n\
        params alpha\n\
        e1*e1 = e3\n\
        e1*e2 = e4\n\
        e2*e1 = -alpha*e3\n\
        e2*e2 = -e4\n";

    #[test]
    fn parses_the_n2_table() {
        let a = parse_algebra_file(N2_TEXT).unwrap();
        assert_eq!(a.dim(), 4);
        assert_eq!(a.params(), &[Sym::new("alpha")]);
        assert!(a.c(0, 0, 2).is_one());
        assert!(a.c(0, 1, 3).is_one());
        assert_eq!(*a.c(1, 0, 2), Scalar::var(Sym::new("alpha")).neg());
        assert_eq!(*a.c(1, 1, 3), Scalar::from_int(-1));
        assert!(a.c(2, 2, 0).is_zero());
    }

    #[test]
    fn bare_header_gives_zero_algebra() {
        let a = parse_algebra_file("algebra Z\ndim 3\n").unwrap();
        assert!(a.structurally_equal(&Algebra::zero_algebra("Z", 3)));
    }

    #[test]
    fn index_out_of_range() {
        let err = parse_algebra_file("algebra A\ndim 4\ne1*e5 = e2\n").unwrap_err();
        match err {
            Error::Parse { msg, line, .. } => {
                assert_eq!(line, 3);
                assert!(msg.contains("index out of range"));
            }
            other => panic!("unexpected {:?}", other),
        }
        let err2 = parse_algebra_file("algebra A\ndim 4\ne1*e2 = e7\n").unwrap_err();
        match err2 {
            Error::Parse { msg, .. } => assert!(msg.contains("unknown variable e7")),
            other => panic!("unexpected {:?}", other),
        }
    }

    #[test]
    fn duplicate_and_malformed_lines() {
        let dup = "algebra A\ndim 2\ne1*e1 = e2\ne1*e1 = e2\n";
        assert!(matches!(
            parse_algebra_file(dup).unwrap_err(),
            Error::Parse { line: 4, .. }
        ));
        assert!(parse_algebra_file("algebra A\ne1*e1 = e2\n").is_err());
        assert!(parse_algebra_file("algebra A\ndim 2\nparams t\n").is_err());
        assert!(parse_algebra_file("algebra A\ndim 2\ne1*e1 = e1*e2\n").is_err());
        assert!(parse_algebra_file("algebra A\ndim 2\ne1*e1 = 1 + e2\n").is_err());
        // comments and blank lines are fine
        let ok = "# table\nalgebra A\n\ndim 2\ne1*e1 = e2 # central\n";
        assert!(parse_algebra_file(ok).is_ok());
    }

    #[test]
    fn builtins_match_the_displayed_tables() {
        let catalog = Catalog::with_builtins();
        assert_eq!(catalog.len(), 7);
        // N3: e3 e3 = e4 present
        let n3 = catalog.get("N3").unwrap();
        assert!(n3.c(2, 2, 3).is_one());
        // D401: c_{3,1}^4 = 1
        let d401 = catalog.get("D401").unwrap();
        assert!(d401.c(2, 0, 3).is_one());
        assert_eq!(d401.params().len(), 3);
        // zero4: everything zero
        let z4 = catalog.get("zero4").unwrap();
        assert!(z4.constants().iter().all(|c| c.is_zero()));
    }

    #[test]
    fn builtins_are_cd_and_nilpotent() {
        for a in builtin_catalog() {
            assert!(check_cd(&a).is_cd(), "{} fails a CD flag", a.name());
            assert!(
                power_series_dims(&a).nilpotent,
                "{} is not nilpotent",
                a.name()
            );
        }
    }

    #[test]
    fn builtin_invariants_match_the_tables() {
        use crate::invariants::{annihilator_dimension, square_dimension};
        let catalog = Catalog::with_builtins();
        let n2 = catalog.get("N2").unwrap();
        let n3 = catalog.get("N3").unwrap();
        let d401 = catalog.get("D401").unwrap();

        // squares: span{e3,e4}, span{e4}, span{e3,e4}
        assert_eq!(square_dimension(n2), 2);
        assert_eq!(square_dimension(n3), 1);
        assert_eq!(square_dimension(d401), 2);

        // power chains
        let ps2 = power_series_dims(n2);
        assert_eq!(ps2.dims, vec![4, 2, 0]);
        assert!(ps2.two_step);
        let ps3 = power_series_dims(n3);
        assert_eq!(ps3.dims, vec![4, 1, 0]);
        assert!(ps3.two_step);
        let psd = power_series_dims(d401);
        assert_eq!(psd.dims, vec![4, 2, 1, 0]);
        assert!(!psd.two_step);

        // N3 at alpha = 1: the annihilator is span{e4}
        let mut at_one = std::collections::BTreeMap::new();
        at_one.insert(Sym::new("alpha"), Scalar::from_int(1));
        let n3_at_1 = n3.substitute_params(&at_one).unwrap();
        assert_eq!(annihilator_dimension(&n3_at_1), 1);

        // N3: left multiplication by e3 has a single nonzero column, L e3 = e4
        let e3 = crate::algebra::unit_vector(4, 2);
        let (l, _) = n3.mul_operators(&e3).unwrap();
        for j in 0..4 {
            let col = l.column(j);
            if j == 2 {
                assert!(col[3].is_one() && col[0].is_zero() && col[1].is_zero() && col[2].is_zero());
            } else {
                assert!(col.iter().all(|c| c.is_zero()));
            }
        }

        // symmetry of N3 members: neither at alpha = 1, commutative at alpha = 0
        use crate::identities::{check_symmetry, Symmetry};
        assert_eq!(check_symmetry(&n3_at_1).kind(), Symmetry::Neither);
        let mut at_zero = std::collections::BTreeMap::new();
        at_zero.insert(Sym::new("alpha"), Scalar::from_int(0));
        let n3_at_0 = n3.substitute_params(&at_zero).unwrap();
        assert_eq!(check_symmetry(&n3_at_0).kind(), Symmetry::Commutative);

        // D401 with all parameters zeroed keeps exactly the four listed products
        let mut zeroed = std::collections::BTreeMap::new();
        for name in ["lambda", "alpha", "beta"] {
            zeroed.insert(Sym::new(name), Scalar::from_int(0));
        }
        let d = d401.substitute_params(&zeroed).unwrap();
        let expected = parse_algebra_file(
            "algebra D401at0\ndim 4\ne1*e1 = e4\ne2*e1 = e3\ne2*e2 = e3\ne3*e1 = e4\n",
        )
        .unwrap();
        assert!(d.structurally_equal(&expected));
    }

    #[test]
    fn round_trip_serialization() {
        for a in builtin_catalog() {
            let text = serialize_algebra(&a);
            let back = parse_algebra_file(&text).unwrap();
            assert!(back.structurally_equal(&a), "round trip changed {}", a.name());
            assert_eq!(back.params(), a.params());
        }
        // fractional and polynomial coefficients round-trip as well
        let lam = Sym::new("lambda");
        let mut b = Algebra::builder("Frac", 2, vec![lam]);
        b.set(0, 0, 1, Scalar::from_rational(Rational::new(3.into(), 4.into())));
        b.set(
            0,
            1,
            1,
            Scalar::one()
                .add(&Scalar::var(lam))
                .div(&Scalar::var(lam).sub(&Scalar::from_int(2)))
                .unwrap(),
        );
        b.set(1, 0, 0, Scalar::var(lam).pow(2).neg());
        let a = b.finish().unwrap();
        let back = parse_algebra_file(&serialize_algebra(&a)).unwrap();
        assert!(back.structurally_equal(&a));
    }

    #[test]
    fn certificate_scaling_text_verifies() {
        let catalog = Catalog::with_builtins();
        // the identity index keeps alpha free; acceptance is symbolic in it
        let text = "degeneration scale_n2\n\
            source N2\n\
            index alpha = alpha\n\
            target zero4\n\
            E1 = t*e1\nE2 = t*e2\nE3 = t*e3\nE4 = t*e4\n";
        let cert = parse_certificate_file(text, &catalog).unwrap();
        match verify_certificate(&cert, &VerifyOptions::default()).unwrap() {
            Verdict::Accepted { samples, .. } => assert_eq!(samples, 0),
            other => panic!("expected symbolic acceptance, got {:?}", other),
        }

        // pinning the parameter instead also verifies
        let text2 = "degeneration scale_n2_at_1\n\
            source N2\n\
            index alpha = 1\n\
            target zero4\n\
            E1 = t*e1\nE2 = t*e2\nE3 = t*e3\nE4 = t*e4\n";
        let cert = parse_certificate_file(text2, &catalog).unwrap();
        assert!(verify_certificate(&cert, &VerifyOptions::default())
            .unwrap()
            .is_accepted());
    }

    #[test]
    fn certificate_with_inline_algebra_and_with_clause() {
        let catalog = Catalog::with_builtins();
        let text = "algebra Line\n\
            dim 4\n\
            params mu\n\
            e1*e1 = mu*e3\n\
            \n\
            degeneration line_to_n2_special\n\
            source N2\n\
            index alpha = 0\n\
            target N2 with alpha = 0\n\
            E1 = e1\nE2 = e2\nE3 = e3\nE4 = e4\n";
        let cert = parse_certificate_file(text, &catalog).unwrap();
        assert_eq!(cert.target.name(), "N2 with alpha = 0");
        assert!(verify_certificate(&cert, &VerifyOptions::default())
            .unwrap()
            .is_accepted());
    }

    #[test]
    fn certificate_missing_row_and_unknowns() {
        let catalog = Catalog::with_builtins();
        let missing = "degeneration m\nsource zero2\ntarget zero2\nE1 = t*e1\n";
        // zero2 is built in with dim 2; row E2 missing
        assert!(matches!(
            parse_certificate_file(missing, &catalog).unwrap_err(),
            Error::CertificateInvalid(msg) if msg.contains("E2")
        ));
        let unknown = "degeneration u\nsource NoSuch\ntarget zero2\nE1 = e1\nE2 = e2\n";
        assert!(matches!(
            parse_certificate_file(unknown, &catalog).unwrap_err(),
            Error::UnknownAlgebra(name) if name == "NoSuch"
        ));
    }

    #[test]
    fn certificate_theta_macro_sampled() {
        // a free target parameter L feeds Theta; sampling must solve 1-4L = s^2
        let catalog = Catalog::with_builtins();
        let text = "algebra TgtL\n\
            dim 2\n\
            params L\n\
            \n\
            degeneration theta_scaling\n\
            source zero2\n\
            target TgtL\n\
            E1 = Theta(L)*t*e1\n\
            E2 = t*e2\n";
        let cert = parse_certificate_file(text, &catalog).unwrap();
        assert_eq!(cert.radicals().len(), 1);
        let opts = VerifyOptions {
            mode: VerifyMode::Sampled,
            samples: 3,
            seed: Some(5),
            max_retries: 64,
        };
        assert!(verify_certificate(&cert, &opts).unwrap().is_accepted());
    }
}
