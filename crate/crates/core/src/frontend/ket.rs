//! Recursive-descent parser for ket expressions.
//!
//! ```text
//! expr    := ('+'|'-')? term (('+'|'-') term)*
//! term    := factor+                      juxtaposition multiplies
//! factor  := primary ('/' primary)*       divisors must be scalars
//! primary := number | 'i' | 'sqrt(' expr ')' | ket | '(' expr ')'
//! ket     := '|' int (',' int)* '>'
//! ```
//!
//! Kets are 0-based. Adjacent kets tensor together, so `|0>|1>` is the same
//! expression as `|0,1>`. Scalar sub-expressions are folded into exact
//! values while parsing.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use super::exact::ExactScalar;
use crate::error::{Error, Result};
use crate::state::PureState;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KetExpr {
    Ket(Vec<usize>),
    Scaled(ExactScalar, Box<KetExpr>),
    /// Tensor product; never nested and never two kets side by side.
    Product(Vec<KetExpr>),
    /// Never nested.
    Sum(Vec<KetExpr>),
}

impl KetExpr {
    /// Number of subsystems.
    pub fn arity(&self) -> usize {
        match self {
            KetExpr::Ket(idx) => idx.len(),
            KetExpr::Scaled(_, inner) => inner.arity(),
            KetExpr::Product(fs) => fs.iter().map(KetExpr::arity).sum(),
            KetExpr::Sum(ts) => ts.first().map_or(0, KetExpr::arity),
        }
    }

    fn fmt_factor(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KetExpr::Sum(_) | KetExpr::Scaled(..) => write!(f, "({self})"),
            _ => write!(f, "{self}"),
        }
    }
}

impl fmt::Display for KetExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KetExpr::Ket(idx) => {
                write!(f, "|")?;
                for (n, i) in idx.iter().enumerate() {
                    if n > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{i}")?;
                }
                write!(f, ">")
            }
            KetExpr::Scaled(s, inner) => {
                write!(f, "({s}) ")?;
                inner.fmt_factor(f)
            }
            KetExpr::Product(fs) => {
                for factor in fs {
                    factor.fmt_factor(f)?;
                }
                Ok(())
            }
            KetExpr::Sum(ts) => {
                for (n, t) in ts.iter().enumerate() {
                    if n > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{t}")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Number(String),
    Int(usize),
    Ident(String),
    Sym(char),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    column: usize,
}

fn syntax(column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        column,
        message: message.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut pos = 0;
    let mut in_ket = false;
    while pos < chars.len() {
        let ch = chars[pos];
        let column = pos + 1;
        if ch.is_whitespace() {
            pos += 1;
        } else if ch.is_ascii_digit() || ch == '.' {
            let start = pos;
            while pos < chars.len() && (chars[pos].is_ascii_digit() || chars[pos] == '.') {
                pos += 1;
            }
            let lit: String = chars[start..pos].iter().collect();
            let tok = if in_ket {
                Tok::Int(
                    lit.parse()
                        .map_err(|_| syntax(column, format!("bad ket index `{lit}`")))?,
                )
            } else {
                Tok::Number(lit)
            };
            out.push(Token { tok, column });
        } else if ch.is_ascii_alphabetic() {
            let start = pos;
            while pos < chars.len() && chars[pos].is_ascii_alphabetic() {
                pos += 1;
            }
            let word: String = chars[start..pos].iter().collect();
            // `0.8i` and `2isqrt(2)` style juxtapositions split on `i`
            let mut rest = word.as_str();
            let mut col = column;
            while !rest.is_empty() {
                if let Some(tail) = rest.strip_prefix("sqrt") {
                    out.push(Token {
                        tok: Tok::Ident("sqrt".into()),
                        column: col,
                    });
                    rest = tail;
                    col += 4;
                } else if let Some(tail) = rest.strip_prefix('i') {
                    out.push(Token {
                        tok: Tok::Ident("i".into()),
                        column: col,
                    });
                    rest = tail;
                    col += 1;
                } else {
                    return Err(syntax(col, format!("unknown name `{rest}`")));
                }
            }
        } else if "|>,()+-/".contains(ch) {
            if ch == '|' {
                in_ket = true;
            } else if ch == '>' {
                in_ket = false;
            }
            out.push(Token {
                tok: Tok::Sym(ch),
                column,
            });
            pos += 1;
        } else {
            return Err(syntax(column, format!("unexpected character `{ch}`")));
        }
    }
    Ok(out)
}

/// A parsed sub-expression: either a folded scalar or a ket-valued node.
enum Value {
    Scalar(ExactScalar),
    Expr(KetExpr),
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    end_column: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn column(&self) -> usize {
        self.toks
            .get(self.pos)
            .map_or(self.end_column, |t| t.column)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.tok.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, ch: char) -> Result<()> {
        let column = self.column();
        match self.bump() {
            Some(Tok::Sym(c)) if c == ch => Ok(()),
            Some(other) => Err(syntax(column, format!("expected `{ch}`, found {other:?}"))),
            None => Err(syntax(
                column,
                format!("expected `{ch}`, found end of input"),
            )),
        }
    }

    fn starts_primary(&self) -> bool {
        matches!(
            self.peek(),
            Some(Tok::Number(_)) | Some(Tok::Ident(_)) | Some(Tok::Sym('|')) | Some(Tok::Sym('('))
        )
    }

    fn expr(&mut self) -> Result<Value> {
        let start = self.column();
        let mut negate = match self.peek() {
            Some(Tok::Sym('-')) => {
                self.bump();
                true
            }
            Some(Tok::Sym('+')) => {
                self.bump();
                false
            }
            _ => false,
        };
        let mut terms = Vec::new();
        loop {
            let column = self.column();
            let t = self.term()?;
            terms.push((column, if negate { negated(t) } else { t }));
            match self.peek() {
                Some(Tok::Sym('+')) => negate = false,
                Some(Tok::Sym('-')) => negate = true,
                _ => break,
            }
            self.bump();
        }
        combine_sum(start, terms)
    }

    fn term(&mut self) -> Result<Value> {
        if !self.starts_primary() {
            let column = self.column();
            return Err(match self.peek() {
                Some(t) => syntax(column, format!("expected a term, found {t:?}")),
                None => syntax(column, "expected a term, found end of input"),
            });
        }
        let mut scalar = ExactScalar::one();
        let mut factors: Vec<KetExpr> = Vec::new();
        while self.starts_primary() {
            let mut value = self.primary()?;
            while let Some(Tok::Sym('/')) = self.peek() {
                self.bump();
                let column = self.column();
                let divisor = match self.primary()? {
                    Value::Scalar(s) => s,
                    Value::Expr(_) => return Err(syntax(column, "cannot divide by a ket")),
                };
                let inverse = ExactScalar::one()
                    .div(&divisor)
                    .map_err(|e| syntax(column, e.to_string()))?;
                value = match value {
                    Value::Scalar(s) => Value::Scalar(s.mul(&inverse)),
                    Value::Expr(e) => {
                        scalar = scalar.mul(&inverse);
                        Value::Expr(e)
                    }
                };
            }
            match value {
                Value::Scalar(s) => scalar = scalar.mul(&s),
                Value::Expr(KetExpr::Product(fs)) => {
                    for f in fs {
                        push_factor(&mut factors, f);
                    }
                }
                Value::Expr(e) => push_factor(&mut factors, e),
            }
        }
        Ok(match factors.len() {
            0 => Value::Scalar(scalar),
            n => {
                let node = if n == 1 {
                    factors.pop().unwrap()
                } else {
                    KetExpr::Product(factors)
                };
                if scalar.is_one() {
                    Value::Expr(node)
                } else {
                    Value::Expr(KetExpr::Scaled(scalar, Box::new(node)))
                }
            }
        })
    }

    fn primary(&mut self) -> Result<Value> {
        let column = self.column();
        match self.bump() {
            Some(Tok::Number(lit)) => ExactScalar::from_decimal(&lit)
                .map(Value::Scalar)
                .ok_or_else(|| syntax(column, format!("bad number `{lit}`"))),
            Some(Tok::Ident(name)) if name == "i" => {
                Ok(Value::Scalar(ExactScalar::imaginary_unit()))
            }
            Some(Tok::Ident(_)) => {
                self.expect('(')?;
                let inner_col = self.column();
                let arg = match self.expr()? {
                    Value::Scalar(s) => s,
                    Value::Expr(_) => return Err(syntax(inner_col, "sqrt of a ket")),
                };
                self.expect(')')?;
                let q = arg
                    .as_rational()
                    .ok_or_else(|| syntax(inner_col, "sqrt needs a rational argument"))?;
                ExactScalar::sqrt_of(&q)
                    .map(Value::Scalar)
                    .map_err(|e| syntax(inner_col, e.to_string()))
            }
            Some(Tok::Sym('(')) => {
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Some(Tok::Sym('|')) => {
                let mut idx = Vec::new();
                loop {
                    let col = self.column();
                    match self.bump() {
                        Some(Tok::Int(i)) => idx.push(i),
                        _ => return Err(syntax(col, "expected a ket index")),
                    }
                    let col = self.column();
                    match self.bump() {
                        Some(Tok::Sym(',')) => continue,
                        Some(Tok::Sym('>')) => break,
                        _ => return Err(syntax(col, "expected `,` or `>` in ket")),
                    }
                }
                Ok(Value::Expr(KetExpr::Ket(idx)))
            }
            Some(other) => Err(syntax(column, format!("unexpected {other:?}"))),
            None => Err(syntax(column, "unexpected end of input")),
        }
    }
}

fn push_factor(factors: &mut Vec<KetExpr>, f: KetExpr) {
    if let (Some(KetExpr::Ket(prev)), KetExpr::Ket(next)) = (factors.last_mut(), &f) {
        prev.extend_from_slice(next);
    } else {
        factors.push(f);
    }
}

fn negated(v: Value) -> Value {
    match v {
        Value::Scalar(s) => Value::Scalar(s.neg()),
        Value::Expr(KetExpr::Scaled(s, inner)) => Value::Expr(KetExpr::Scaled(s.neg(), inner)),
        Value::Expr(e) => Value::Expr(KetExpr::Scaled(ExactScalar::one().neg(), Box::new(e))),
    }
}

fn combine_sum(start: usize, mut terms: Vec<(usize, Value)>) -> Result<Value> {
    if terms.len() == 1 {
        return Ok(terms.pop().unwrap().1);
    }
    let scalars = terms
        .iter()
        .filter(|(_, t)| matches!(t, Value::Scalar(_)))
        .count();
    if scalars == terms.len() {
        let sum = terms
            .into_iter()
            .fold(ExactScalar::zero(), |acc, (_, t)| match t {
                Value::Scalar(s) => acc.add(&s),
                Value::Expr(_) => unreachable!(),
            });
        return Ok(Value::Scalar(sum));
    }
    if scalars > 0 {
        return Err(Error::ArityMismatch(format!(
            "sum starting at column {start} adds a scalar to a ket"
        )));
    }
    let mut out: Vec<KetExpr> = Vec::new();
    let mut arity = None;
    for (column, t) in terms {
        let Value::Expr(e) = t else { unreachable!() };
        let a = e.arity();
        match arity {
            None => arity = Some(a),
            Some(prev) if prev != a => {
                return Err(Error::ArityMismatch(format!(
                    "term at column {column} has {a} slots, earlier terms have {prev}"
                )))
            }
            _ => {}
        }
        match e {
            KetExpr::Sum(inner) => out.extend(inner),
            other => out.push(other),
        }
    }
    Ok(Value::Expr(KetExpr::Sum(out)))
}

/// Parses a ket expression. The result always contains at least one ket.
pub fn parse_ket(text: &str) -> Result<KetExpr> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end_column: text.chars().count() + 1,
    };
    let value = p.expr()?;
    if let Some(t) = p.peek() {
        let column = p.column();
        return Err(syntax(column, format!("unexpected {t:?}")));
    }
    match value {
        Value::Expr(e) => Ok(e),
        Value::Scalar(_) => Err(syntax(1, "expression contains no ket")),
    }
}

/// Exact amplitudes keyed by multi-index. Kets that cancel keep their key.
fn expand(expr: &KetExpr) -> BTreeMap<Vec<usize>, ExactScalar> {
    match expr {
        KetExpr::Ket(idx) => BTreeMap::from([(idx.clone(), ExactScalar::one())]),
        KetExpr::Scaled(s, inner) => expand(inner)
            .into_iter()
            .map(|(k, v)| (k, v.mul(s)))
            .collect(),
        KetExpr::Product(fs) => {
            let mut acc = BTreeMap::from([(Vec::new(), ExactScalar::one())]);
            for f in fs {
                let rhs = expand(f);
                let mut next = BTreeMap::new();
                for (k1, v1) in &acc {
                    for (k2, v2) in &rhs {
                        let key: Vec<usize> = k1.iter().chain(k2).copied().collect();
                        let entry = next.entry(key).or_insert_with(ExactScalar::zero);
                        *entry = entry.add(&v1.mul(v2));
                    }
                }
                acc = next;
            }
            acc
        }
        KetExpr::Sum(ts) => {
            let mut acc: BTreeMap<Vec<usize>, ExactScalar> = BTreeMap::new();
            for t in ts {
                for (k, v) in expand(t) {
                    let entry = acc.entry(k).or_insert_with(ExactScalar::zero);
                    *entry = entry.add(&v);
                }
            }
            acc
        }
    }
}

/// Evaluates to a (not necessarily normalized) state. Without `dims`, each
/// slot's dimension is one more than the largest index used in it.
pub fn evaluate(expr: &KetExpr, dims: Option<&[usize]>) -> Result<PureState> {
    let amps = expand(expr);
    let m = expr.arity();
    if m == 0 {
        return Err(Error::InvalidDims("expression has zero-slot kets".into()));
    }
    let dims: Vec<usize> = match dims {
        Some(d) => {
            if d.len() != m {
                return Err(Error::DimTooSmall(format!(
                    "{} dims supplied for kets with {m} slots",
                    d.len()
                )));
            }
            for idx in amps.keys() {
                if let Some(j) = (0..m).find(|&j| idx[j] >= d[j]) {
                    return Err(Error::DimTooSmall(format!(
                        "ket {idx:?} uses index {} in slot {j}, dimension is {}",
                        idx[j], d[j]
                    )));
                }
            }
            d.to_vec()
        }
        None => (0..m)
            .map(|j| amps.keys().map(|idx| idx[j] + 1).max().unwrap_or(1))
            .collect(),
    };
    let mut state = PureState::basis(dims, &vec![0; m])?;
    let mut values = vec![Complex64::new(0.0, 0.0); state.total_dim()];
    for (idx, v) in &amps {
        values[state.flat_index(idx)?] = v.to_complex();
    }
    state = PureState::new(state.dims().to_vec(), values)?;
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn amps(text: &str) -> (Vec<usize>, Vec<Complex64>) {
        let s = evaluate(&parse_ket(text).unwrap(), None).unwrap();
        (s.dims().to_vec(), s.amplitudes().to_vec())
    }

    #[test]
    fn bell() {
        let (dims, a) = amps("(1/sqrt(2))(|0,0> + |1,1>)");
        assert_eq!(dims, vec![2, 2]);
        assert_eq!(a[0], Complex64::new(FRAC_1_SQRT_2, 0.0));
        assert_eq!(a[3], Complex64::new(FRAC_1_SQRT_2, 0.0));
        assert_eq!(a[1], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn juxtaposed_kets_merge() {
        assert_eq!(parse_ket("|0>|1>").unwrap(), KetExpr::Ket(vec![0, 1]));
        assert_eq!(parse_ket("|0> |1,2>").unwrap(), KetExpr::Ket(vec![0, 1, 2]));
    }

    #[test]
    fn w_state() {
        let (dims, a) = amps("(1/sqrt(3))(|0,0,1>+|0,1,0>+|1,0,0>)");
        assert_eq!(dims, vec![2, 2, 2]);
        let w = a[1].re;
        assert!((w - 1.0 / 3f64.sqrt()).abs() < 2e-16);
        assert_eq!(a[1], a[2]);
        assert_eq!(a[1], a[4]);
    }

    #[test]
    fn decimal_and_imaginary() {
        let (_, a) = amps("0.6|0,0> + 0.8i|1,1>");
        assert_eq!(a[0], Complex64::new(0.6, 0.0));
        assert_eq!(a[3], Complex64::new(0.0, 0.8));
        let s = evaluate(&parse_ket("0.6|0,0> + 0.8i|1,1>").unwrap(), None).unwrap();
        s.validate(1e-15).unwrap();
    }

    #[test]
    fn explicit_dims() {
        let e = parse_ket("|2>").unwrap();
        assert!(matches!(
            evaluate(&e, Some(&[2])),
            Err(Error::DimTooSmall(_))
        ));
        let s = evaluate(&e, Some(&[4])).unwrap();
        assert_eq!(s.dims(), &[4]);
        assert!(matches!(
            evaluate(&e, Some(&[4, 4])),
            Err(Error::DimTooSmall(_))
        ));
    }

    #[test]
    fn syntax_errors_carry_columns() {
        let col = |t: &str| match parse_ket(t) {
            Err(Error::Syntax { column, .. }) => column,
            other => panic!("{t}: expected syntax error, got {other:?}"),
        };
        assert_eq!(col("|0,>"), 4);
        assert_eq!(col("|0> + "), 7);
        assert_eq!(col("|0> $ |1>"), 5);
        assert_eq!(col("(|0>"), 5);
        assert_eq!(col("2/3"), 1);
        assert_eq!(col("|0>/|1>"), 5);
        assert_eq!(col("sqrt(-2)|0>"), 6);
        assert_eq!(col("1/0 |0>"), 3);
        assert_eq!(col("foo|0>"), 1);
    }

    #[test]
    fn arity_mismatch() {
        assert!(matches!(
            parse_ket("|0,0> + |1>"),
            Err(Error::ArityMismatch(_))
        ));
        assert!(matches!(parse_ket("|0> + 2"), Err(Error::ArityMismatch(_))));
    }

    #[test]
    fn minus_and_division() {
        let (_, a) = amps("(|0> - |1>)/sqrt(2)");
        assert_eq!(a[0], Complex64::new(FRAC_1_SQRT_2, 0.0));
        assert_eq!(a[1], Complex64::new(-FRAC_1_SQRT_2, 0.0));
        let (_, a) = amps("-|0>/i");
        assert_eq!(a[0], Complex64::new(0.0, 1.0));
    }

    #[test]
    fn cancelled_kets_still_size_the_state() {
        let (dims, a) = amps("|0,2> - |0,2> + |1,0>");
        assert_eq!(dims, vec![2, 3]);
        assert_eq!(a[3], Complex64::new(1.0, 0.0));
        assert_eq!(a[2], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn pretty_print_reparses() {
        for text in [
            "(1/sqrt(2))(|0,0> + |1,1>)",
            "|0>(|0> - 2i|1>)/3",
            "(2)((3)|0>) + |1>",
            "((|0>+|1>)(|0>-|1>))/2",
            "(sqrt(2) + i)|0,0> - (1/2 - sqrt(3)/2 i)|1,1>",
        ] {
            let e = parse_ket(text).unwrap();
            let printed = e.to_string();
            assert_eq!(parse_ket(&printed).unwrap(), e, "{text} -> {printed}");
        }
    }
}
