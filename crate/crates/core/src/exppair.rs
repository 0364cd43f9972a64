//! Exact van der Corput exponent-pair calculus and the search for the pair
//! that maximizes the saving in the Rankin–Selberg error term.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ExpPairError {
    #[error("objective denominator 97 + 82k - 72l is not positive")]
    DegenerateDenominator,
    #[error("cannot parse pair {0:?}")]
    Parse(String),
    #[error("({0}, {1}) is not an exponent pair")]
    Invalid(String, String),
    #[error("depth {0} exceeds the supported maximum of {MAX_DEPTH}")]
    DepthTooLarge(usize),
}

pub const MAX_DEPTH: usize = 30;

/// An exponent pair with its derivation `word` applied (leftmost last) to a named base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentPair {
    pub k: BigRational,
    pub l: BigRational,
    pub word: String,
    pub base: String,
    /// Base pair is only known up to an unspecified `ε`.
    pub conditional: bool,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn rat_to_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn parse_rat(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            (!d.is_zero()).then(|| BigRational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

impl ExponentPair {
    pub fn new(k: BigRational, l: BigRational, base: impl Into<String>, conditional: bool) -> Self {
        ExponentPair { k, l, word: String::new(), base: base.into(), conditional }
    }

    /// Base pair labelled by its own value.
    pub fn base(kn: i64, kd: i64, ln: i64, ld: i64) -> Self {
        let (k, l) = (rat(kn, kd), rat(ln, ld));
        let label = format!("({},{})", rat_to_string(&k), rat_to_string(&l));
        Self::new(k, l, label, false)
    }

    /// The trivial pair `(0, 1)`.
    pub fn trivial() -> Self {
        Self::base(0, 1, 1, 1)
    }

    /// Parse `"k/kd,l/ld"`.
    pub fn parse(s: &str) -> Result<Self, ExpPairError> {
        let (a, b) = s.split_once(',').ok_or_else(|| ExpPairError::Parse(s.into()))?;
        let k = parse_rat(a).ok_or_else(|| ExpPairError::Parse(s.into()))?;
        let l = parse_rat(b).ok_or_else(|| ExpPairError::Parse(s.into()))?;
        let label = format!("({},{})", rat_to_string(&k), rat_to_string(&l));
        let pair = Self::new(k, l, label, false);
        if !pair.is_valid() {
            return Err(ExpPairError::Invalid(rat_to_string(&pair.k), rat_to_string(&pair.l)));
        }
        Ok(pair)
    }

    pub fn with_conditional(mut self, conditional: bool) -> Self {
        self.conditional = conditional;
        self
    }

    /// `0 <= k <= 1/2 <= l <= 1`.
    pub fn is_valid(&self) -> bool {
        let half = rat(1, 2);
        !self.k.is_negative() && self.k <= half && half <= self.l && self.l <= BigRational::one()
    }

    pub fn value(&self) -> (&BigRational, &BigRational) {
        (&self.k, &self.l)
    }

    /// `"k,l"` in lowest terms.
    pub fn value_string(&self) -> String {
        format!("{},{}", rat_to_string(&self.k), rat_to_string(&self.l))
    }

    /// Word followed by base label, with a trailing marker for conditional bases.
    pub fn derivation(&self) -> String {
        let mark = if self.conditional { "?" } else { "" };
        format!("{}{}{}", self.word, self.base, mark)
    }
}

impl fmt::Display for ExponentPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}) = {}", rat_to_string(&self.k), rat_to_string(&self.l), self.derivation())
    }
}

/// A-process: `(k/(2k+2), (k+l+1)/(2k+2))`.
pub fn apply_a(p: &ExponentPair) -> ExponentPair {
    let one = BigRational::one();
    let den = (&p.k + &one) * BigInt::from(2);
    ExponentPair {
        k: &p.k / &den,
        l: (&p.k + &p.l + &one) / &den,
        word: format!("A{}", p.word),
        base: p.base.clone(),
        conditional: p.conditional,
    }
}

/// B-process: `(l − 1/2, k + 1/2)`.
pub fn apply_b(p: &ExponentPair) -> ExponentPair {
    let half = rat(1, 2);
    ExponentPair {
        k: &p.l - &half,
        l: &p.k + &half,
        word: format!("B{}", p.word),
        base: p.base.clone(),
        conditional: p.conditional,
    }
}

/// `(57 + 52k − 42l) / (97 + 82k − 72l)`, the exponent of the error term.
pub fn exponent_objective(p: &ExponentPair) -> Result<BigRational, ExpPairError> {
    let lin = |c: i64, a: i64, b: i64| {
        BigRational::from_integer(BigInt::from(c)) + &p.k * BigInt::from(a) - &p.l * BigInt::from(b)
    };
    let den = lin(97, 82, 72);
    if !den.is_positive() {
        return Err(ExpPairError::DegenerateDenominator);
    }
    Ok(lin(57, 52, 42) / den)
}

/// Saving over the exponent `3/5`.
pub fn delta_from_pair(p: &ExponentPair) -> Result<BigRational, ExpPairError> {
    Ok(rat(3, 5) - exponent_objective(p)?)
}

/// Best pair found by [`search_best_pair`].
#[derive(Clone, Debug)]
pub struct SearchResult {
    pub pair: ExponentPair,
    pub delta: BigRational,
    pub nodes_visited: usize,
}

/// JSON shape of the `exppair` subcommand.
#[derive(Clone, Debug, serde::Serialize, serde::Deserialize, PartialEq)]
pub struct SearchSummary {
    pub pair: [String; 2],
    pub word: String,
    pub conditional: bool,
    pub delta_num: String,
    pub delta_den: String,
    pub decimal: f64,
}

impl SearchResult {
    pub fn summary(&self) -> SearchSummary {
        SearchSummary {
            pair: [rat_to_string(&self.pair.k), rat_to_string(&self.pair.l)],
            word: self.pair.derivation(),
            conditional: self.pair.conditional,
            delta_num: self.delta.numer().to_string(),
            delta_den: self.delta.denom().to_string(),
            decimal: self.delta.to_f64().unwrap_or(f64::NAN),
        }
    }
}

/// Order on derivations: shorter word first, then lexicographic word, then base label.
fn derivation_key(p: &ExponentPair) -> (usize, &str, &str, bool) {
    (p.word.len(), p.word.as_str(), p.base.as_str(), p.conditional)
}

/// Breadth-first search over all `{A, B}` words of length `<= max_depth`
/// applied to every base; pairs are deduplicated by value, keeping the
/// first (shortest, then lexicographically smallest) derivation.
pub fn search_best_pair(bases: &[ExponentPair], max_depth: usize) -> Result<SearchResult, ExpPairError> {
    if max_depth > MAX_DEPTH {
        return Err(ExpPairError::DepthTooLarge(max_depth));
    }
    let mut seen: HashSet<(BigRational, BigRational)> = HashSet::new();
    let mut best: Option<(BigRational, ExponentPair)> = None;
    let mut visited = 0usize;

    let consider = |p: &ExponentPair, best: &mut Option<(BigRational, ExponentPair)>| -> Result<(), ExpPairError> {
        let d = delta_from_pair(p)?;
        let better = match best {
            None => true,
            Some((bd, bp)) => d > *bd || (d == *bd && derivation_key(p) < derivation_key(bp)),
        };
        if better {
            *best = Some((d, p.clone()));
        }
        Ok(())
    };

    let mut level: BTreeMap<(BigRational, BigRational), ExponentPair> = BTreeMap::new();
    for b in bases {
        insert_min(&mut level, b.clone());
    }
    for depth in 0..=max_depth {
        level.retain(|key, _| !seen.contains(key));
        for (key, p) in &level {
            seen.insert(key.clone());
            visited += 1;
            consider(p, &mut best)?;
        }
        if depth == max_depth {
            break;
        }
        let mut next = BTreeMap::new();
        for p in level.values() {
            for child in [apply_a(p), apply_b(p)] {
                insert_min(&mut next, child);
            }
        }
        level = next;
    }
    let (delta, pair) = best.ok_or_else(|| ExpPairError::Parse("empty base list".into()))?;
    Ok(SearchResult { pair, delta, nodes_visited: visited })
}

fn insert_min(map: &mut BTreeMap<(BigRational, BigRational), ExponentPair>, p: ExponentPair) {
    let key = (p.k.clone(), p.l.clone());
    match map.get(&key) {
        Some(existing) if derivation_key(existing) <= derivation_key(&p) => {}
        _ => {
            map.insert(key, p);
        }
    }
}

/// Bourgain's pair `(13/84, 55/84)`, conditional on an `ε`.
pub fn bourgain_pair() -> ExponentPair {
    ExponentPair::base(13, 84, 55, 84).with_conditional(true)
}
