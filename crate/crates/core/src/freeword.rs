//! Reduced words in a free group with a fixed, named basis.
//!
//! Letters are packed into a signed integer (`±(index + 1)`), so inversion is
//! negation and free reduction is a single stack pass.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::{invalid, Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
#[repr(transparent)]
pub struct Letter(i32);

impl Letter {
    pub fn new(index: usize, positive: bool) -> Letter {
        let v = index as i32 + 1;
        Letter(if positive { v } else { -v })
    }

    pub fn gen(index: usize) -> Letter {
        Letter::new(index, true)
    }

    pub fn index(self) -> usize {
        (self.0.unsigned_abs() - 1) as usize
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    pub fn sign(self) -> i32 {
        self.0.signum()
    }

    pub fn inverse(self) -> Letter {
        Letter(-self.0)
    }

    /// Sort key: basis order first, then `x` before `x^-1`.
    pub fn key(self) -> u32 {
        2 * self.index() as u32 + u32::from(self.0 < 0)
    }
}

fn push_reduced(out: &mut Vec<Letter>, l: Letter) {
    if out.last() == Some(&l.inverse()) {
        out.pop();
    } else {
        out.push(l);
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|l| {
                let c = (b'a' + (l.index() % 26) as u8) as char;
                if l.is_positive() {
                    c.to_string()
                } else {
                    format!("{c}^-1")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl Word {
    pub fn identity() -> Word {
        Word::default()
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Word {
        let mut out = Vec::new();
        for l in letters {
            push_reduced(&mut out, l);
        }
        Word { letters: out }
    }

    pub fn letter(l: Letter) -> Word {
        Word { letters: vec![l] }
    }

    pub fn gen(index: usize) -> Word {
        Word::letter(Letter::gen(index))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.letters.iter().map(|l| l.index()).max()
    }

    pub fn mul(&self, other: &Word) -> Word {
        let k = cancellation(self, other);
        let mut letters = Vec::with_capacity(self.len() + other.len() - 2 * k);
        letters.extend_from_slice(&self.letters[..self.len() - k]);
        letters.extend_from_slice(&other.letters[k..]);
        Word { letters }
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn pow(&self, n: i64) -> Word {
        if n == 0 || self.is_identity() {
            return Word::identity();
        }
        let base = if n > 0 { self.clone() } else { self.inverse() };
        let n = n.unsigned_abs() as usize;
        // Only the cyclically cancelling ends interact between copies.
        let (c, core) = split_core(&base.letters);
        let mut letters = Vec::with_capacity(2 * c + n * core.len());
        letters.extend_from_slice(&base.letters[..c]);
        for _ in 0..n {
            letters.extend_from_slice(core);
        }
        letters.extend_from_slice(&base.letters[base.len() - c..]);
        Word { letters }
    }

    /// `g self g^-1`.
    pub fn conjugate_by(&self, g: &Word) -> Word {
        g.mul(self).mul(&g.inverse())
    }

    /// Returns `(c, r)` with `r = c self c^-1` cyclically reduced and in
    /// canonical rotation.
    pub fn cyclic_reduce(&self) -> (Word, CyclicWord) {
        let (p, core) = split_core(&self.letters);
        let shift = least_rotation(core);
        let mut letters = Vec::with_capacity(core.len());
        letters.extend_from_slice(&core[shift..]);
        letters.extend_from_slice(&core[..shift]);
        let xy = Word::from_letters(self.letters[..p].iter().chain(core[..shift].iter()).copied());
        (xy.inverse(), CyclicWord { letters })
    }

    pub fn cyclic_length(&self) -> usize {
        let (p, _) = split_core(&self.letters);
        self.len() - 2 * p
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.letters.first(), self.letters.last()) {
            (Some(a), Some(b)) => self.len() == 1 || *a != b.inverse(),
            _ => true,
        }
    }

    /// Lexicographic order on letter keys, a proper prefix sorting first.
    pub fn lex_cmp(&self, other: &Word) -> Ordering {
        for (a, b) in self.letters.iter().zip(&other.letters) {
            match a.key().cmp(&b.key()) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        self.len().cmp(&other.len())
    }

    /// Length first, then [`Word::lex_cmp`].
    pub fn shortlex_cmp(&self, other: &Word) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.lex_cmp(other))
    }

    /// Whether `self` occurs as a contiguous subword of `other`.
    pub fn occurs_in(&self, other: &Word) -> bool {
        self.is_empty() || other.letters.windows(self.len()).any(|w| w == self.letters.as_slice())
    }
}

/// Splits a reduced word as `x core x^-1`, returning `(|x|, core)`.
fn split_core(letters: &[Letter]) -> (usize, &[Letter]) {
    let n = letters.len();
    let mut p = 0;
    while 2 * p + 1 < n && letters[p] == letters[n - 1 - p].inverse() {
        p += 1;
    }
    (p, &letters[p..n - p])
}

/// Start of the lexicographically least rotation (two-pointer scan).
fn least_rotation(s: &[Letter]) -> usize {
    let n = s.len();
    let (mut i, mut j, mut k) = (0usize, 1usize, 0usize);
    while i < n && j < n && k < n {
        let a = s[(i + k) % n].key();
        let b = s[(j + k) % n].key();
        if a == b {
            k += 1;
            continue;
        }
        if a > b {
            i += k + 1;
        } else {
            j += k + 1;
        }
        if i == j {
            j += 1;
        }
        k = 0;
    }
    if n == 0 {
        0
    } else {
        i.min(j)
    }
}

/// A cyclically reduced word stored in its least rotation; equality of
/// cyclic words is conjugacy.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct CyclicWord {
    letters: Vec<Letter>,
}

impl CyclicWord {
    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn to_word(&self) -> Word {
        Word {
            letters: self.letters.clone(),
        }
    }
}

/// Reduces `letters`, which must all lie in `basis`.
pub fn reduce(basis: &Basis, letters: &[Letter]) -> Result<Word> {
    if let Some(l) = letters.iter().find(|l| l.index() >= basis.rank()) {
        return invalid(format!("letter index {} outside basis of rank {}", l.index(), basis.rank()));
    }
    Ok(Word::from_letters(letters.iter().copied()))
}

/// Length of the longest common prefix of `u^-1` and `v`.
pub fn cancellation(u: &Word, v: &Word) -> usize {
    u.letters
        .iter()
        .rev()
        .zip(&v.letters)
        .take_while(|(a, b)| a.inverse() == **b)
        .count()
}

/// A `g` with `g u g^-1 = v`, if `u` and `v` are conjugate.
pub fn is_conjugate(u: &Word, v: &Word) -> Option<Word> {
    let (cu, ru) = u.cyclic_reduce();
    let (cv, rv) = v.cyclic_reduce();
    if ru != rv {
        return None;
    }
    let g = cv.inverse().mul(&cu);
    assert_eq!(&u.conjugate_by(&g), v, "conjugator failed substitution check");
    Some(g)
}

/// `(r, k)` with `u = r^k`, `k >= 1` maximal.
pub fn primitive_root(u: &Word) -> Result<(Word, i64)> {
    if u.is_identity() {
        return Err(Error::Domain("primitive root of the identity".into()));
    }
    let (c, r) = u.cyclic_reduce();
    let n = r.len();
    let d = (1..=n)
        .filter(|d| n % d == 0)
        .find(|&d| (d..n).all(|i| r.letters[i] == r.letters[i - d]))
        .unwrap_or(n);
    let core = Word {
        letters: r.letters[..d].to_vec(),
    };
    Ok((core.conjugate_by(&c.inverse()), (n / d) as i64))
}

/// The shared primitive root of `u` and `v` when they commute.
pub fn common_root(u: &Word, v: &Word) -> Result<Option<Word>> {
    if u.is_identity() || v.is_identity() {
        return Err(Error::Domain("common root with the identity".into()));
    }
    if u.mul(v) != v.mul(u) {
        return Ok(None);
    }
    Ok(Some(primitive_root(u)?.0))
}

/// Generator of the centralizer of `<u>`.
pub fn centralizer_generator(u: &Word) -> Result<Word> {
    Ok(primitive_root(u)?.0)
}

/// The exponent `k` with `w = u^k`, if any.
pub fn is_power_of(w: &Word, u: &Word) -> Option<i64> {
    if u.is_identity() {
        return w.is_identity().then_some(0);
    }
    if w.is_identity() {
        return Some(0);
    }
    let (c, r) = u.cyclic_reduce();
    let (_, m) = primitive_root(u).ok()?;
    let period = r.len() as i64 / m;
    let x = w.conjugate_by(&c);
    if x.len() as i64 % period != 0 {
        return None;
    }
    let root = Word {
        letters: r.letters[..period as usize].to_vec(),
    };
    let j = x.len() as i64 / period;
    let j = if root.pow(j) == x {
        j
    } else if root.pow(-j) == x {
        -j
    } else {
        return None;
    };
    (j % m == 0).then_some(j / m)
}

/// An ordered basis of named generators.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Basis {
    symbols: Vec<String>,
    index: HashMap<String, usize>,
}

fn valid_symbol(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Basis {
    /// A basis of rank at least one.
    pub fn new<S: Into<String>>(symbols: impl IntoIterator<Item = S>) -> Result<Basis> {
        let b = Basis::with_symbols(symbols)?;
        if b.rank() == 0 {
            return invalid("basis must have rank at least one");
        }
        Ok(b)
    }

    /// Like [`Basis::new`] but also accepts the empty basis of the trivial group.
    pub fn with_symbols<S: Into<String>>(symbols: impl IntoIterator<Item = S>) -> Result<Basis> {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        let mut index = HashMap::new();
        for (i, s) in symbols.iter().enumerate() {
            if !valid_symbol(s) {
                return invalid(format!("invalid generator name {s:?}"));
            }
            if index.insert(s.clone(), i).is_some() {
                return invalid(format!("duplicate generator {s:?}"));
            }
        }
        Ok(Basis { symbols, index })
    }

    pub fn trivial() -> Basis {
        Basis::default()
    }

    pub fn rank(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn symbol(&self, i: usize) -> &str {
        &self.symbols[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn contains(&self, w: &Word) -> bool {
        w.max_index().is_none_or(|m| m < self.rank())
    }

    pub fn generators(&self) -> Vec<Word> {
        (0..self.rank()).map(Word::gen).collect()
    }

    pub fn parse(&self, text: &str) -> Result<Word> {
        let mut p = Parser {
            basis: self,
            src: text.as_bytes(),
            pos: 0,
        };
        let w = p.sequence()?;
        p.skip_space();
        if p.pos != p.src.len() {
            return invalid(format!("unexpected {:?} at offset {} in {text:?}", p.src[p.pos] as char, p.pos));
        }
        Ok(w)
    }

    /// Formats `w` with runs collapsed, e.g. `a^3 b^-1`; the identity is `1`.
    pub fn format(&self, w: &Word) -> String {
        if w.is_identity() {
            return "1".into();
        }
        let mut parts = Vec::new();
        let ls = w.letters();
        let mut i = 0;
        while i < ls.len() {
            let mut j = i;
            while j < ls.len() && ls[j] == ls[i] {
                j += 1;
            }
            let n = (j - i) as i64 * ls[i].sign() as i64;
            let name = self.symbols.get(ls[i].index()).map(String::as_str).unwrap_or("?");
            parts.push(if n == 1 { name.to_string() } else { format!("{name}^{n}") });
            i = j;
        }
        parts.join(" ")
    }
}

struct Parser<'a> {
    basis: &'a Basis,
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_space(&mut self) {
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_whitespace() || self.src[self.pos] == b'*') {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_space();
        self.src.get(self.pos).copied()
    }

    fn sequence(&mut self) -> Result<Word> {
        let mut w = Word::identity();
        while let Some(c) = self.peek() {
            if c == b')' {
                break;
            }
            let atom = self.atom()?;
            let atom = if self.peek() == Some(b'^') {
                self.pos += 1;
                atom.pow(self.integer()?)
            } else {
                atom
            };
            w = w.mul(&atom);
        }
        Ok(w)
    }

    fn atom(&mut self) -> Result<Word> {
        let start = self.pos;
        match self.src[self.pos] {
            b'(' => {
                self.pos += 1;
                let w = self.sequence()?;
                if self.peek() != Some(b')') {
                    return invalid(format!("unclosed parenthesis at offset {start}"));
                }
                self.pos += 1;
                Ok(w)
            }
            b'1' => {
                self.pos += 1;
                Ok(Word::identity())
            }
            c if c.is_ascii_alphabetic() => {
                while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
                match self.basis.index_of(name) {
                    Some(i) => Ok(Word::gen(i)),
                    None => invalid(format!("unknown generator {name:?}")),
                }
            }
            c => invalid(format!("unexpected {:?} at offset {start}", c as char)),
        }
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_space();
        let start = self.pos;
        if self.src.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::InvalidInput(format!("expected an exponent at offset {start}")))
    }
}

/// A homomorphism between free groups given by generator images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    images: Vec<Word>,
}

impl Morphism {
    pub fn new(images: Vec<Word>) -> Morphism {
        Morphism { images }
    }

    pub fn identity(rank: usize) -> Morphism {
        Morphism::new((0..rank).map(Word::gen).collect())
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn image(&self, i: usize) -> &Word {
        &self.images[i]
    }

    pub fn apply(&self, w: &Word) -> Word {
        let mut out = Vec::with_capacity(w.len());
        for &l in w.letters() {
            let img = &self.images[l.index()];
            if l.is_positive() {
                for &x in img.letters() {
                    push_reduced(&mut out, x);
                }
            } else {
                for &x in img.letters().iter().rev() {
                    push_reduced(&mut out, x.inverse());
                }
            }
        }
        Word { letters: out }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Morphism) -> Morphism {
        Morphism::new(other.images.iter().map(|w| self.apply(w)).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, w)| *w == Word::gen(i))
    }
}
