//! Growth of words under iteration, iterated products, T-words and the
//! cancellation bounds behind quadratic growth.

use num_rational::Ratio;

use crate::freeword::{common_root, primitive_root, Word};
use crate::gog::{Syllable, TreeIdentification};
use crate::hconj::{h_reduce, is_phi_zero};
use crate::twist::DehnTwist;
use crate::{invalid, Error, Result};

/// Highest degree [`estimate_degree`] will report.
pub const MAX_DEGREE: u32 = 6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthTable {
    pub subject: String,
    /// `(k, length)` for `k = 0, 1, ...`.
    pub values: Vec<(u64, u64)>,
    pub cyclic: bool,
}

impl GrowthTable {
    pub fn lengths(&self) -> Vec<u64> {
        self.values.iter().map(|&(_, n)| n).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,length\n");
        for (k, n) in &self.values {
            out.push_str(&format!("{k},{n}\n"));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeEstimate {
    pub degree: u32,
    /// Bracket of `value(k) / k^degree` over the second half of the table.
    pub c_low: Ratio<u128>,
    pub c_high: Ratio<u128>,
    pub ok: bool,
}

fn measure(w: &Word, cyclic: bool) -> u64 {
    (if cyclic { w.cyclic_length() } else { w.len() }) as u64
}

/// `|φ^k(g)|` (or the cyclic length) for `k = 0..=n`.
pub fn growth_table(phi: impl Fn(&Word) -> Word, g: &Word, n: usize, cyclic: bool) -> Result<GrowthTable> {
    if n == 0 {
        return invalid("growth table needs at least one iteration");
    }
    let mut cur = g.clone();
    let mut values = Vec::with_capacity(n + 1);
    for k in 0..=n {
        if k > 0 {
            cur = phi(&cur);
        }
        values.push((k as u64, measure(&cur, cyclic)));
    }
    Ok(GrowthTable {
        subject: "powers".into(),
        values,
        cyclic,
    })
}

/// `w φ(w) ... φ^(k-1)(w)`.
pub fn iterated_product(phi: impl Fn(&Word) -> Word, w: &Word, k: usize) -> Word {
    let mut prod = Word::identity();
    let mut power = w.clone();
    for i in 0..k {
        prod = prod.mul(&power);
        if i + 1 < k {
            power = phi(&power);
        }
    }
    prod
}

/// `φ^k1(w) ... φ^k2(w)`.
pub fn partial_iterated_product(phi: impl Fn(&Word) -> Word, w: &Word, k1: usize, k2: usize) -> Result<Word> {
    if k1 > k2 {
        return invalid("partial iterated product needs k1 <= k2");
    }
    let mut power = w.clone();
    for _ in 0..k1 {
        power = phi(&power);
    }
    let mut prod = power.clone();
    for _ in k1..k2 {
        power = phi(&power);
        prod = prod.mul(&power);
    }
    Ok(prod)
}

/// Lengths of the iterated products `φ^(k)(w)` for `k = 0..=n`.
pub fn iterated_table(phi: impl Fn(&Word) -> Word, w: &Word, n: usize, cyclic: bool) -> GrowthTable {
    let mut prod = Word::identity();
    let mut power = w.clone();
    let mut values = Vec::with_capacity(n + 1);
    for k in 0..=n {
        values.push((k as u64, measure(&prod, cyclic)));
        if k < n {
            prod = prod.mul(&power);
            power = phi(&power);
        }
    }
    GrowthTable {
        subject: "iterated products".into(),
        values,
        cyclic,
    }
}

fn sum(xs: &[i128]) -> i128 {
    xs.iter().sum()
}

/// Smallest `d` whose `d`-th forward differences have the same mean, to
/// within 5%, over the last two quarters of the table.
pub fn estimate_degree(t: &GrowthTable) -> Result<DegreeEstimate> {
    if t.values.len() < 16 {
        return invalid("degree estimation needs at least 16 rows");
    }
    let mut diffs: Vec<i128> = t.values.iter().map(|&(_, n)| n as i128).collect();
    let mut degree = None;
    for d in 0..=MAX_DEGREE {
        let len = diffs.len();
        if len < 8 {
            break;
        }
        let q3 = &diffs[len / 2..3 * len / 4];
        let q4 = &diffs[3 * len / 4..];
        let (s3, n3, s4, n4) = (sum(q3), q3.len() as i128, sum(q4), q4.len() as i128);
        // |s4/n4 - s3/n3| <= |s4/n4| / 20
        if 20 * (s4 * n3 - s3 * n4).abs() <= s4.abs() * n3 {
            degree = Some(d);
            break;
        }
        diffs = diffs.windows(2).map(|w| w[1] - w[0]).collect();
    }
    let found = degree.is_some();
    let degree = degree.unwrap_or(MAX_DEGREE);
    let n = t.values.len();
    let mut bracket: Option<(Ratio<u128>, Ratio<u128>)> = None;
    for &(k, v) in &t.values[n / 2..] {
        if k == 0 {
            continue;
        }
        let r = Ratio::new(v as u128, (k as u128).pow(degree));
        bracket = Some(match bracket {
            None => (r, r),
            Some((lo, hi)) => (lo.min(r), hi.max(r)),
        });
    }
    let (c_low, c_high) = bracket.expect("table has nonzero indices");
    let ok = found && c_high <= c_low * Ratio::from_integer(4);
    Ok(DegreeEstimate { degree, c_low, c_high, ok })
}

/// `w_0 y_1^n_1 w_1 ... y_q^n_q w_q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TWord {
    pub intermediates: Vec<Word>,
    pub twistors: Vec<Word>,
}

/// Whether `x^m = y^m'` for some `m, m' >= 1`.
fn share_positive_power(x: &Word, y: &Word) -> bool {
    match (primitive_root(x), primitive_root(y)) {
        (Ok((rx, _)), Ok((ry, _))) => rx == ry,
        _ => false,
    }
}

impl TWord {
    pub fn t_length(&self) -> usize {
        self.twistors.len()
    }

    pub fn instantiate(&self, exponents: &[i64]) -> Result<Word> {
        if exponents.len() != self.twistors.len() {
            return invalid(format!("expected {} exponents, got {}", self.twistors.len(), exponents.len()));
        }
        let mut out = self.intermediates[0].clone();
        for (i, y) in self.twistors.iter().enumerate() {
            out = out.mul(&y.pow(exponents[i])).mul(&self.intermediates[i + 1]);
        }
        Ok(out)
    }

    /// All exponents equal to `n`.
    pub fn instantiate_uniform(&self, n: i64) -> Word {
        self.instantiate(&vec![n; self.t_length()]).expect("arity matches")
    }

    /// No `y_i^-m = w_i y_(i+1)^m' w_i^-1` with `m, m' >= 1`.
    pub fn is_t_reduced(&self) -> bool {
        self.twistors.windows(2).enumerate().all(|(i, ys)| {
            let w = &self.intermediates[i + 1];
            !share_positive_power(&ys[0].inverse(), &ys[1].conjugate_by(w))
        })
    }

    pub fn is_cyclically_t_reduced(&self) -> bool {
        let q = self.t_length();
        if q == 0 {
            return true;
        }
        let w = self.intermediates[q].mul(&self.intermediates[0]);
        self.is_t_reduced() && !share_positive_power(&self.twistors[q - 1].inverse(), &self.twistors[0].conjugate_by(&w))
    }
}

fn require_efficient(d: &DehnTwist) -> Result<()> {
    let report = crate::efficiency::is_efficient(d);
    if !report.efficient {
        return Err(Error::Precondition(format!("Dehn twist is not efficient: {report:?}")));
    }
    Ok(())
}

/// Cuts a syllable sequence at the twisted stable letters: `D^n` of it lifts
/// to the T-word instantiated at `n`.
fn cut_twisted(d: &DehnTwist, id: &TreeIdentification, syllables: &[Syllable]) -> TWord {
    let g = d.base();
    let h = d.aut();
    let mut intermediates = Vec::new();
    let mut twistors = Vec::new();
    let mut cur: Vec<Syllable> = Vec::new();
    for s in syllables {
        if let Syllable::Stable(e) = s {
            let e = *e;
            let before = h.correction(g.bar(e));
            if !before.is_identity() {
                intermediates.push(id.lift(&cur));
                twistors.push(id.lift(&[Syllable::Vertex(g.initial(e), before.clone())]));
                cur.clear();
            }
            cur.push(Syllable::Stable(e));
            let after = h.correction(e);
            if !after.is_identity() {
                intermediates.push(id.lift(&cur));
                twistors.push(id.lift(&[Syllable::Vertex(g.terminal(e), after.inverse())]));
                cur.clear();
            }
        } else {
            cur.push(s.clone());
        }
    }
    intermediates.push(id.lift(&cur));
    TWord { intermediates, twistors }
}

impl TWord {
    fn inverse(&self) -> TWord {
        TWord {
            intermediates: self.intermediates.iter().rev().map(Word::inverse).collect(),
            twistors: self.twistors.iter().rev().map(Word::inverse).collect(),
        }
    }

    fn append(&mut self, other: &TWord) {
        let last = self.intermediates.pop().expect("non-empty");
        self.intermediates.push(last.mul(&other.intermediates[0]));
        self.intermediates.extend(other.intermediates[1..].iter().cloned());
        self.twistors.extend(other.twistors.iter().cloned());
    }

    /// Merges `y_i^n w_i y_(i+1)^n = (y_i w_i y_(i+1) w_i^-1)^n w_i` while
    /// some adjacent pair violates T-reducedness.
    fn t_reduce(&mut self) {
        loop {
            let Some(i) = (0..self.t_length().saturating_sub(1)).find(|&i| {
                share_positive_power(&self.twistors[i].inverse(), &self.twistors[i + 1].conjugate_by(&self.intermediates[i + 1]))
            }) else {
                return;
            };
            let w = self.intermediates.remove(i + 1);
            let y2 = self.twistors.remove(i + 1);
            let merged = self.twistors[i].mul(&y2.conjugate_by(&w));
            self.intermediates[i + 1] = w.mul(&self.intermediates[i + 1]);
            if merged.is_identity() {
                self.twistors.remove(i);
                let right = self.intermediates.remove(i + 1);
                self.intermediates[i] = self.intermediates[i].mul(&right);
            } else {
                self.twistors[i] = merged;
            }
        }
    }
}

/// Splits the normal form of `w` at the twisted stable letters. When the
/// identification does not lift that normal form back to `w`, the basis
/// realizations of the letters of `w` are split instead and the pieces
/// merged until T-reduced. Either way the result is checked against the
/// induced automorphism for `n <= 3`.
pub fn t_decompose(d: &DehnTwist, id: &TreeIdentification, w: &Word) -> Result<TWord> {
    require_efficient(d)?;
    let g = d.base();
    let phi = d.aut().induced_morphism(id)?;
    let matches = |tw: &TWord| {
        let mut power = w.clone();
        for n in 0..=3 {
            if tw.instantiate_uniform(n) != power {
                return false;
            }
            power = phi.apply(&power);
        }
        true
    };
    let p = id.encode(g, w)?;
    let tw = cut_twisted(d, id, &p.syllables());
    if matches(&tw) {
        return Ok(tw);
    }
    let per_letter: Vec<TWord> = (0..id.basis().rank()).map(|i| cut_twisted(d, id, &id.realization(i).syllables())).collect();
    let mut tw = TWord {
        intermediates: vec![Word::identity()],
        twistors: Vec::new(),
    };
    for l in w.letters() {
        let piece = &per_letter[l.index()];
        if l.is_positive() {
            tw.append(piece);
        } else {
            tw.append(&piece.inverse());
        }
    }
    tw.t_reduce();
    if matches(&tw) {
        Ok(tw)
    } else {
        Err(Error::Unsupported(format!("no T-word found for {}", id.basis().format(w))))
    }
}

/// Both `|D^(k)(w)|` and its cyclic length estimate to degree 2 over
/// `k <= n`.
pub fn verify_quadratic_iterated(d: &DehnTwist, id: &TreeIdentification, w: &Word, n: usize) -> Result<bool> {
    if is_phi_zero(d, id, w)? {
        return Err(Error::Precondition(format!("{} is zero for the twist", id.basis().format(w))));
    }
    let p = id.encode(d.base(), w)?;
    if !h_reduce(d.aut(), &p)?.steps.is_empty() {
        return Err(Error::Precondition(format!("{} is not reduced for the twist", id.basis().format(w))));
    }
    let phi = d.aut().induced_morphism(id)?;
    for cyclic in [false, true] {
        let est = estimate_degree(&iterated_table(|x| phi.apply(x), w, n, cyclic))?;
        if est.degree != 2 || !est.ok {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Blocker {
    pub v: Word,
    /// Bound on `2|w_i| + |v| - |w_i v w_i^-1|` over the surviving indices.
    pub bound: usize,
    pub surviving: Vec<usize>,
}

/// `2|w| + |v| - |w v w^-1|`.
pub fn conjugation_cancellation(w: &Word, v: &Word) -> usize {
    2 * w.len() + v.len() - v.conjugate_by(w).len()
}

/// Tries `v_1^m` then `v_2^m` for `m = 1..=m_max` and returns the first
/// power left partly uncancelled in `w_i v w_i^-1` for at least half of
/// the family.
pub fn find_cancellation_blocker(ws: &[Word], fix_gens: &[Word], m_max: usize) -> Result<Blocker> {
    if fix_gens.len() < 2 {
        return Err(Error::Precondition("need two generators".into()));
    }
    if common_root(&fix_gens[0], &fix_gens[1])?.is_some() {
        return Err(Error::Precondition("generators span a cyclic subgroup".into()));
    }
    for m in 1..=m_max {
        for gen in &fix_gens[..2] {
            let v = gen.pow(m as i64);
            let costs: Vec<usize> = ws.iter().map(|w| conjugation_cancellation(w, &v)).collect();
            let surviving: Vec<usize> = (0..ws.len()).filter(|&i| costs[i] < 2 * v.len()).collect();
            if 2 * surviving.len() >= ws.len() {
                let bound = surviving.iter().map(|&i| costs[i]).max().unwrap_or(0);
                return Ok(Blocker { v, bound, surviving });
            }
        }
    }
    Err(Error::NotFound(format!("no blocker up to power {m_max}")))
}

/// `|X^n1 b Y^n2| - n1 ||X|| - n2 ||Y||`.
pub fn triplet_defect(x: &Word, b: &Word, y: &Word, n1: i64, n2: i64) -> i64 {
    let len = x.pow(n1).mul(b).mul(&y.pow(n2)).len() as i64;
    len - n1 * x.cyclic_length() as i64 - n2 * y.cyclic_length() as i64
}

pub fn is_valid_triplet(x: &Word, b: &Word, y: &Word) -> bool {
    x.cyclic_length() > 0 && y.cyclic_length() > 0 && !share_positive_power(&x.inverse(), &y.conjugate_by(b))
}

/// `(N0, K0)`: the defect is constant for exponents in `[N0, n_max]` and
/// never below `K0` for exponents in `[0, n_max]`, over every triplet.
pub fn lower_bound_constants(triplets: &[(Word, Word, Word)], n_max: usize) -> Result<(usize, i64)> {
    let mut n0 = 0;
    let mut k0 = 0i64;
    for (i, (x, b, y)) in triplets.iter().enumerate() {
        if !is_valid_triplet(x, b, y) {
            return Err(Error::Precondition(format!("triplet {i} violates the hypothesis")));
        }
        let n = n_max as i64;
        let table: Vec<Vec<i64>> = (0..=n).map(|n1| (0..=n).map(|n2| triplet_defect(x, b, y, n1, n2)).collect()).collect();
        let limit = table[n_max][n_max];
        let onset = (0..=n_max)
            .find(|&s| table[s..].iter().all(|row| row[s..].iter().all(|&v| v == limit)))
            .expect("onset at n_max at the latest");
        let kmin = table.iter().flatten().copied().min().expect("non-empty");
        if i == 0 || kmin < k0 {
            k0 = kmin;
        }
        n0 = n0.max(onset);
    }
    Ok((n0, k0))
}
