//! Integer affine maps realized as digit transducers.
//!
//! Each `d x d` integer matrix `M` with a translation vector `v` acts on
//! `Z^d` as `z -> v + M z`. Writing vectors in base `n` (componentwise,
//! least significant digit first, with `n` coprime to the nonzero
//! determinants), the map becomes a complete deterministic automaton on
//! digit vectors: a state holds the pending carry vector, consumes one
//! digit vector, emits one and moves to the next carry. The resulting
//! semigroup of automaton states is isomorphic to the semigroup of affine
//! maps, so products of matrices and products of states have exactly the
//! same relations.
//!
//! The module also provides the standard embedding of the free group on
//! two generators into two-by-two integer matrices and the block encoding
//! of word-pair instances used to turn correspondence questions into
//! matrix questions.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::automaton::{Automaton, LetterId, StateId, Transition};
use crate::error::{Error, Result};

/// A dense square integer matrix with exact entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    dim: usize,
    /// Row-major entries.
    entries: Vec<BigInt>,
}

impl Matrix {
    pub fn new(dim: usize, entries: Vec<BigInt>) -> Result<Matrix> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::InvalidArgument(format!(
                "matrix needs {dim}x{dim} entries"
            )));
        }
        Ok(Matrix { dim, entries })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Matrix {
        let dim = rows.len();
        let entries = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), dim);
                r.iter().map(|&x| BigInt::from(x))
            })
            .collect();
        Matrix { dim, entries }
    }

    pub fn identity(dim: usize) -> Matrix {
        let mut entries = vec![BigInt::zero(); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = BigInt::one();
        }
        Matrix { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> &BigInt {
        &self.entries[row * self.dim + col]
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.dim, other.dim);
        let d = self.dim;
        let mut entries = vec![BigInt::zero(); d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.entry(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    entries[i * d + j] += a * other.entry(k, j);
                }
            }
        }
        Matrix { dim: d, entries }
    }

    pub fn apply(&self, vector: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(vector.len(), self.dim);
        (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| self.entry(i, j) * &vector[j])
                    .sum::<BigInt>()
            })
            .collect()
    }

    /// Bareiss elimination; exact.
    pub fn determinant(&self) -> BigInt {
        let d = self.dim;
        let mut m = self.entries.clone();
        let mut prev = BigInt::one();
        let mut sign = BigInt::one();
        for k in 0..d {
            if m[k * d + k].is_zero() {
                match (k + 1..d).find(|&r| !m[r * d + k].is_zero()) {
                    Some(r) => {
                        for c in 0..d {
                            m.swap(k * d + c, r * d + c);
                        }
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..d {
                for j in k + 1..d {
                    let val = &m[i * d + j] * &m[k * d + k] - &m[i * d + k] * &m[k * d + j];
                    m[i * d + j] = &val / &prev;
                }
                m[i * d + k] = BigInt::zero();
            }
            prev = m[k * d + k].clone();
        }
        sign * m[(d - 1) * d + (d - 1)].clone()
    }

    /// The maximum over rows of the sum of absolute entries.
    pub fn row_norm(&self) -> BigInt {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.entry(i, j).abs()).sum::<BigInt>())
            .max()
            .expect("dim >= 1")
    }

    /// Places `self` and `other` as diagonal blocks of a larger matrix.
    pub fn block_diagonal(&self, other: &Matrix) -> Matrix {
        let d = self.dim + other.dim;
        let mut entries = vec![BigInt::zero(); d * d];
        for i in 0..self.dim {
            for j in 0..self.dim {
                entries[i * d + j] = self.entry(i, j).clone();
            }
        }
        for i in 0..other.dim {
            for j in 0..other.dim {
                entries[(self.dim + i) * d + (self.dim + j)] = other.entry(i, j).clone();
            }
        }
        Matrix { dim: d, entries }
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim).map(|j| self.entry(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// The smallest modulus `n >= 2` coprime to every nonzero determinant of
/// the given matrices.
pub fn choose_modulus(matrices: &[Matrix]) -> Result<u64> {
    if matrices.is_empty() {
        return Err(Error::InvalidArgument("matrix list must be non-empty".into()));
    }
    let dets: Vec<BigInt> = matrices
        .iter()
        .map(Matrix::determinant)
        .filter(|d| !d.is_zero())
        .collect();
    let mut n: u64 = 2;
    loop {
        let candidate = BigInt::from(n);
        if dets.iter().all(|d| candidate.gcd(d).is_one()) {
            return Ok(n);
        }
        n += 1;
    }
}

/// A finite set of integer matrices with the data the digit construction
/// needs: per matrix, the carry range `V_M = [-|M|, |M|-1]^d` (`|M|` the
/// row norm), and a modulus coprime to all nonzero determinants.
#[derive(Debug, Clone)]
pub struct AffineGeneratorSet {
    dim: usize,
    matrices: Vec<Matrix>,
    modulus: u64,
}

impl AffineGeneratorSet {
    /// Validates coprimality of the modulus explicitly.
    pub fn new(matrices: Vec<Matrix>, modulus: u64) -> Result<AffineGeneratorSet> {
        if matrices.is_empty() {
            return Err(Error::InvalidArgument("matrix list must be non-empty".into()));
        }
        let dim = matrices[0].dim();
        if matrices.iter().any(|m| m.dim() != dim) {
            return Err(Error::InvalidArgument("matrices must share one dimension".into()));
        }
        if modulus < 2 {
            return Err(Error::InvalidArgument("modulus must be >= 2".into()));
        }
        for m in &matrices {
            let det = m.determinant();
            if !det.is_zero() && !BigInt::from(modulus).gcd(&det).is_one() {
                return Err(Error::NonCoprimeModulus {
                    modulus: modulus.to_string(),
                    determinant: det.to_string(),
                });
            }
        }
        Ok(AffineGeneratorSet {
            dim,
            matrices,
            modulus,
        })
    }

    /// Picks the smallest valid modulus automatically.
    pub fn with_auto_modulus(matrices: Vec<Matrix>) -> Result<AffineGeneratorSet> {
        let modulus = choose_modulus(&matrices)?;
        AffineGeneratorSet::new(matrices, modulus)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// The carry range of one matrix, in lexicographic order.
    pub fn carry_range(&self, matrix: usize) -> Vec<Vec<BigInt>> {
        let norm = self.matrices[matrix].row_norm();
        let lo = -norm.clone();
        let hi = &norm - 1;
        let mut range = vec![Vec::new()];
        for _ in 0..self.dim {
            let mut next = Vec::new();
            for prefix in &range {
                let mut value = lo.clone();
                while value <= hi {
                    let mut v = prefix.clone();
                    v.push(value.clone());
                    next.push(v);
                    value += 1;
                }
            }
            range = next;
        }
        range
    }

    /// JSON rendering of the matrix set.
    pub fn to_json(&self) -> String {
        let matrices: Vec<Vec<Vec<String>>> = self
            .matrices
            .iter()
            .map(|m| {
                (0..m.dim())
                    .map(|i| (0..m.dim()).map(|j| m.entry(i, j).to_string()).collect())
                    .collect()
            })
            .collect();
        // Entries are numbers when they fit, strings otherwise.
        let matrices: Vec<serde_json::Value> = matrices
            .iter()
            .map(|rows| {
                serde_json::Value::Array(
                    rows.iter()
                        .map(|row| {
                            serde_json::Value::Array(
                                row.iter()
                                    .map(|e| match e.parse::<i64>() {
                                        Ok(x) => serde_json::json!(x),
                                        Err(_) => serde_json::json!(e),
                                    })
                                    .collect(),
                            )
                        })
                        .collect(),
                )
            })
            .collect();
        serde_json::json!({ "d": self.dim, "matrices": matrices }).to_string()
    }

    /// Parses the matrix-set JSON format `{"d":2,"matrices":[[[1,2],[0,1]]]}`.
    /// An optional modulus overrides the automatic choice.
    pub fn from_json(text: &str, modulus: Option<u64>) -> Result<AffineGeneratorSet> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let dim = value["d"]
            .as_u64()
            .ok_or_else(|| Error::Parse("missing dimension field \"d\"".into()))?
            as usize;
        let rows = value["matrices"]
            .as_array()
            .ok_or_else(|| Error::Parse("missing \"matrices\" array".into()))?;
        let mut matrices = Vec::new();
        for m in rows {
            let m_rows = m
                .as_array()
                .ok_or_else(|| Error::Parse("matrix must be an array of rows".into()))?;
            if m_rows.len() != dim {
                return Err(Error::Parse(format!("matrix must have {dim} rows")));
            }
            let mut entries = Vec::with_capacity(dim * dim);
            for row in m_rows {
                let cols = row
                    .as_array()
                    .ok_or_else(|| Error::Parse("matrix row must be an array".into()))?;
                if cols.len() != dim {
                    return Err(Error::Parse(format!("matrix row must have {dim} entries")));
                }
                for e in cols {
                    let entry = match e {
                        serde_json::Value::Number(x) => x
                            .as_i64()
                            .map(BigInt::from)
                            .ok_or_else(|| Error::Parse(format!("bad entry {x}")))?,
                        serde_json::Value::String(s) => s
                            .parse::<BigInt>()
                            .map_err(|_| Error::Parse(format!("bad entry {s:?}")))?,
                        other => return Err(Error::Parse(format!("bad entry {other}"))),
                    };
                    entries.push(entry);
                }
            }
            matrices.push(Matrix::new(dim, entries)?);
        }
        match modulus {
            Some(n) => AffineGeneratorSet::new(matrices, n),
            None => AffineGeneratorSet::with_auto_modulus(matrices),
        }
    }
}

/// The digit automaton of an affine generator set, with lookup tables
/// from (matrix, carry vector) to states and from digit vectors to
/// letters.
#[derive(Debug, Clone)]
pub struct DigitAutomaton {
    pub automaton: Automaton,
    generators: AffineGeneratorSet,
    /// Per matrix, the carry range in state order.
    carries: Vec<Vec<Vec<BigInt>>>,
    /// Per matrix, the id of its first state.
    state_offset: Vec<usize>,
}

fn digit_letters(dim: usize, modulus: u64) -> Result<Vec<Vec<u64>>> {
    let count = (modulus as f64).powi(dim as i32);
    if count > 1_000_000.0 {
        return Err(Error::InvalidArgument(format!(
            "digit alphabet {modulus}^{dim} is too large"
        )));
    }
    let mut letters = vec![Vec::new()];
    for _ in 0..dim {
        let mut next = Vec::new();
        for prefix in &letters {
            for digit in 0..modulus {
                let mut v = prefix.clone();
                v.push(digit);
                next.push(v);
            }
        }
        letters = next;
    }
    Ok(letters)
}

fn letter_name(digits: &[u64]) -> String {
    let parts: Vec<String> = digits.iter().map(|d| d.to_string()).collect();
    format!("({})", parts.join(","))
}

fn state_name(matrix: usize, carry: &[BigInt]) -> String {
    let parts: Vec<String> = carry.iter().map(|c| c.to_string()).collect();
    format!("m{matrix}[{}]", parts.join(","))
}

/// Builds the digit automaton: for the state `(M, v)` reading the digit
/// vector `a`, let `u = v + M a`; the output digit is `u mod n`
/// componentwise and the next state carries `(u - (u mod n)) / n`. The
/// automaton is complete and deterministic, and inverse-deterministic when
/// the matrices are invertible modulo `n`. A carry leaving its range is
/// reported as [`Error::CarryRangeViolation`] rather than widened.
pub fn build_digit_automaton(generators: &AffineGeneratorSet) -> Result<DigitAutomaton> {
    let dim = generators.dim();
    let n = BigInt::from(generators.modulus());
    let letters = digit_letters(dim, generators.modulus())?;
    let letter_names: Vec<String> = letters.iter().map(|d| letter_name(d)).collect();
    let letter_index = |digits: &[BigInt]| -> usize {
        digits.iter().fold(0usize, |acc, d| {
            acc * generators.modulus() as usize
                + usize::try_from(d).expect("digit in range")
        })
    };

    let mut states = Vec::new();
    let mut carries = Vec::new();
    let mut state_offset = Vec::new();
    let mut total_states = 0usize;
    for (mi, _) in generators.matrices().iter().enumerate() {
        let range = generators.carry_range(mi);
        state_offset.push(total_states);
        total_states += range.len();
        if total_states > 2_000_000 {
            return Err(Error::InvalidArgument(
                "digit automaton state set is too large".into(),
            ));
        }
        for v in &range {
            states.push(state_name(mi, v));
        }
        carries.push(range);
    }

    let carry_index = |mi: usize, v: &[BigInt]| -> Option<usize> {
        let norm = generators.matrices()[mi].row_norm();
        let span = 2u64 * u64::try_from(&norm).ok()?;
        let mut idx = 0usize;
        for c in v {
            let shifted = c + &norm;
            if shifted.is_negative() || shifted >= BigInt::from(span) {
                return None;
            }
            idx = idx * span as usize + usize::try_from(&shifted).ok()?;
        }
        Some(state_offset[mi] + idx)
    };

    let mut transitions = Vec::new();
    for (mi, matrix) in generators.matrices().iter().enumerate() {
        for (vi, v) in carries[mi].iter().enumerate() {
            let from = StateId((state_offset[mi] + vi) as u32);
            for digits in &letters {
                let a: Vec<BigInt> = digits.iter().map(|&d| BigInt::from(d)).collect();
                let mut u = matrix.apply(&a);
                for (ui, vi_entry) in u.iter_mut().zip(v.iter()) {
                    *ui += vi_entry;
                }
                let out: Vec<BigInt> = u.iter().map(|x| x.mod_floor(&n)).collect();
                let carry: Vec<BigInt> = u
                    .iter()
                    .zip(out.iter())
                    .map(|(x, b)| (x - b) / &n)
                    .collect();
                let to = carry_index(mi, &carry).ok_or_else(|| {
                    Error::CarryRangeViolation(format!(
                        "carry {:?} left the range of matrix {mi}",
                        carry.iter().map(|c| c.to_string()).collect::<Vec<_>>()
                    ))
                })?;
                transitions.push(Transition {
                    from,
                    input: LetterId(letter_index(&a) as u32),
                    output: LetterId(letter_index(&out) as u32),
                    to: StateId(to as u32),
                });
            }
        }
    }
    Ok(DigitAutomaton {
        automaton: Automaton::from_parts(states, Arc::new(letter_names), transitions),
        generators: generators.clone(),
        carries,
        state_offset,
    })
}

impl DigitAutomaton {
    pub fn generators(&self) -> &AffineGeneratorSet {
        &self.generators
    }

    /// The state realizing `z -> v + M z` for matrix index `mi`.
    pub fn state_of(&self, mi: usize, carry: &[BigInt]) -> Option<StateId> {
        let range = self.carries.get(mi)?;
        range
            .iter()
            .position(|c| c == carry)
            .map(|i| StateId((self.state_offset[mi] + i) as u32))
    }

    /// The zero-carry state of matrix `mi`.
    pub fn zero_state(&self, mi: usize) -> StateId {
        self.state_of(mi, &vec![BigInt::zero(); self.generators.dim()])
            .expect("zero belongs to every carry range")
    }

    /// Which matrix a state belongs to.
    pub fn matrix_of_state(&self, q: StateId) -> usize {
        match self.state_offset.binary_search(&q.idx()) {
            Ok(i) => i,
            Err(i) => i - 1,
        }
    }

    /// The letter of a digit vector.
    pub fn letter_of(&self, digits: &[u64]) -> Option<LetterId> {
        let n = self.generators.modulus();
        if digits.len() != self.generators.dim() || digits.iter().any(|&d| d >= n) {
            return None;
        }
        let idx = digits.iter().fold(0usize, |acc, &d| acc * n as usize + d as usize);
        Some(LetterId(idx as u32))
    }

    /// The digit vector of a letter.
    pub fn digits_of(&self, letter: LetterId) -> Vec<u64> {
        let n = self.generators.modulus();
        let d = self.generators.dim();
        let mut idx = letter.idx();
        let mut digits = vec![0u64; d];
        for i in (0..d).rev() {
            digits[i] = (idx % n as usize) as u64;
            idx /= n as usize;
        }
        digits
    }
}

/// The first `length` digits of the base-`n` expansion of each component:
/// the digits of `z mod n^length`, least significant first.
pub fn encode_vector(vector: &[BigInt], modulus: u64, length: usize) -> Result<Vec<Vec<u64>>> {
    if length == 0 {
        return Err(Error::InvalidArgument("encoding length must be >= 1".into()));
    }
    let n = BigInt::from(modulus);
    let mut components: Vec<BigInt> = vector.to_vec();
    let mut word = Vec::with_capacity(length);
    for _ in 0..length {
        let mut digits = Vec::with_capacity(vector.len());
        for c in components.iter_mut() {
            let digit = c.mod_floor(&n);
            *c = (&*c - &digit) / &n;
            digits.push(u64::try_from(&digit).expect("digit below modulus"));
        }
        word.push(digits);
    }
    Ok(word)
}

/// Reassembles a digit word into the represented vector modulo
/// `n^length`.
pub fn decode_word(word: &[Vec<u64>], modulus: u64) -> Vec<BigInt> {
    if word.is_empty() {
        return Vec::new();
    }
    let dim = word[0].len();
    let n = BigInt::from(modulus);
    let mut out = vec![BigInt::zero(); dim];
    let mut weight = BigInt::one();
    for digits in word {
        for (o, &d) in out.iter_mut().zip(digits.iter()) {
            *o += &weight * BigInt::from(d);
        }
        weight *= &n;
    }
    out
}

/// Checks that the state `(M, v)` transforms the encoding of `z` into the
/// encoding of `v + M z`, to `depth` digits.
pub fn verify_affine_action(
    digit: &DigitAutomaton,
    machine: &crate::semantics::SAutomaton,
    mi: usize,
    carry: &[BigInt],
    z: &[BigInt],
    depth: usize,
) -> Result<bool> {
    let state = digit
        .state_of(mi, carry)
        .ok_or_else(|| Error::InputError("no such state".into()))?;
    let n = digit.generators().modulus();
    let word: Vec<LetterId> = encode_vector(z, n, depth)?
        .iter()
        .map(|d| digit.letter_of(d).expect("digits below modulus"))
        .collect();
    let image = match crate::semantics::act(machine, &[state], &word)? {
        Some(w) => w,
        None => return Ok(false),
    };
    let digits: Vec<Vec<u64>> = image.iter().map(|&l| digit.digits_of(l)).collect();
    let decoded = decode_word(&digits, n);
    let mut expected = digit.generators().matrices()[mi].apply(z);
    for (e, c) in expected.iter_mut().zip(carry.iter()) {
        *e += c;
    }
    let modulus_pow = BigInt::from(n).pow(depth as u32);
    Ok(decoded
        .iter()
        .zip(expected.iter())
        .all(|(got, want)| (got - want).mod_floor(&modulus_pow).is_zero()))
}

/// A letter of the free group on `a` and `b`: the generator and its sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FreeLetter {
    pub generator: char,
    pub inverse: bool,
}

/// A freely reduced word over `a, b, a^-1, b^-1`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FreeWord(Vec<FreeLetter>);

impl FreeWord {
    /// Parses words like `"ab-1a"`, where `-1` inverts the preceding
    /// generator, and reduces them freely.
    pub fn parse(text: &str) -> Result<FreeWord> {
        let mut letters = Vec::new();
        let mut chars = text.chars().peekable();
        while let Some(c) = chars.next() {
            if !matches!(c, 'a' | 'b') {
                return Err(Error::Parse(format!("unexpected character {c:?} in free word")));
            }
            let mut inverse = false;
            if chars.peek() == Some(&'-') {
                chars.next();
                if chars.next() != Some('1') {
                    return Err(Error::Parse("expected \"-1\" after generator".into()));
                }
                inverse = true;
            }
            letters.push(FreeLetter {
                generator: c,
                inverse,
            });
        }
        Ok(FreeWord::reduce(letters))
    }

    fn reduce(letters: Vec<FreeLetter>) -> FreeWord {
        let mut out: Vec<FreeLetter> = Vec::with_capacity(letters.len());
        for l in letters {
            match out.last() {
                Some(last) if last.generator == l.generator && last.inverse != l.inverse => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        FreeWord(out)
    }

    pub fn letters(&self) -> &[FreeLetter] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{}", l.generator)?;
            if l.inverse {
                write!(f, "-1")?;
            }
        }
        Ok(())
    }
}

/// The image of one free generator under the standard embedding into
/// two-by-two integer matrices.
pub fn generator_matrix(letter: FreeLetter) -> Matrix {
    match (letter.generator, letter.inverse) {
        ('a', false) => Matrix::from_i64(&[&[1, 2], &[0, 1]]),
        ('a', true) => Matrix::from_i64(&[&[1, -2], &[0, 1]]),
        ('b', false) => Matrix::from_i64(&[&[1, 0], &[2, 1]]),
        ('b', true) => Matrix::from_i64(&[&[1, 0], &[-2, 1]]),
        _ => unreachable!("free words only contain a and b"),
    }
}

/// The matrix of a free word: the product of its generator images, left
/// to right. The empty word maps to the identity.
pub fn word_to_matrix(word: &FreeWord) -> Matrix {
    word.letters()
        .iter()
        .fold(Matrix::identity(2), |acc, &l| acc.mul(&generator_matrix(l)))
}

/// An instance of the word-pair correspondence problem: a finite list of
/// pairs of free-group words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IcpInstance {
    pub pairs: Vec<(FreeWord, FreeWord)>,
}

impl IcpInstance {
    /// Parses `{"pairs":[["ab","ba-1"], ...]}`.
    pub fn from_json(text: &str) -> Result<IcpInstance> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let raw = value["pairs"]
            .as_array()
            .ok_or_else(|| Error::Parse("missing \"pairs\" array".into()))?;
        let mut pairs = Vec::new();
        for p in raw {
            let two = p
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| Error::Parse("each pair must be a two-element array".into()))?;
            let left = two[0]
                .as_str()
                .ok_or_else(|| Error::Parse("pair entries must be strings".into()))?;
            let right = two[1]
                .as_str()
                .ok_or_else(|| Error::Parse("pair entries must be strings".into()))?;
            pairs.push((FreeWord::parse(left)?, FreeWord::parse(right)?));
        }
        if pairs.is_empty() {
            return Err(Error::InvalidArgument("instance needs at least one pair".into()));
        }
        Ok(IcpInstance { pairs })
    }

    pub fn to_json(&self) -> String {
        let pairs: Vec<serde_json::Value> = self
            .pairs
            .iter()
            .map(|(s, t)| serde_json::json!([s.to_string(), t.to_string()]))
            .collect();
        serde_json::json!({ "pairs": pairs }).to_string()
    }
}

/// Encodes an instance as one four-dimensional matrix per pair: the images
/// of the two words as diagonal blocks. A product of these blocks is the
/// identity exactly when both word products are trivial, which ties the
/// instance to positive relations of the digit automaton.
pub fn icp_to_generators(instance: &IcpInstance) -> Result<AffineGeneratorSet> {
    let matrices: Vec<Matrix> = instance
        .pairs
        .iter()
        .map(|(s, t)| word_to_matrix(s).block_diagonal(&word_to_matrix(t)))
        .collect();
    AffineGeneratorSet::with_auto_modulus(matrices)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::SAutomaton;

    fn bigs(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn modulus_avoids_determinants() {
        let double = Matrix::from_i64(&[&[2]]);
        assert_eq!(choose_modulus(&[double]).unwrap(), 3);
        let a = generator_matrix(FreeLetter { generator: 'a', inverse: false });
        let b = generator_matrix(FreeLetter { generator: 'b', inverse: false });
        assert_eq!(choose_modulus(&[a, b]).unwrap(), 2);
        assert_eq!(choose_modulus(&[Matrix::identity(3)]).unwrap(), 2);
    }

    #[test]
    fn determinants_are_exact() {
        assert_eq!(Matrix::identity(4).determinant(), BigInt::one());
        let m = Matrix::from_i64(&[&[2, 1], &[7, 4]]);
        assert_eq!(m.determinant(), BigInt::one());
        let m = Matrix::from_i64(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]);
        assert!(m.determinant().is_zero());
        let m = Matrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(m.determinant(), BigInt::from(-1));
    }

    #[test]
    fn free_words_reduce_and_map_to_matrices() {
        let w = FreeWord::parse("aa-1b").unwrap();
        assert_eq!(w.to_string(), "b");
        assert!(FreeWord::parse("aa-1").unwrap().is_empty());
        assert_eq!(word_to_matrix(&FreeWord::default()), Matrix::identity(2));
        let ab = word_to_matrix(&FreeWord::parse("ab").unwrap());
        assert_eq!(ab, Matrix::from_i64(&[&[5, 2], &[2, 1]]));
        // The embedding is faithful: the commutator is not the identity.
        let commutator = word_to_matrix(&FreeWord::parse("aba-1b-1").unwrap());
        assert_ne!(commutator, Matrix::identity(2));
    }

    #[test]
    fn block_encoding_of_pairs() {
        let instance = IcpInstance {
            pairs: vec![(
                FreeWord::parse("a").unwrap(),
                FreeWord::parse("a-1").unwrap(),
            )],
        };
        let gens = icp_to_generators(&instance).unwrap();
        assert_eq!(gens.dim(), 4);
        let h = &gens.matrices()[0];
        assert_eq!(h.entry(0, 1), &BigInt::from(2));
        assert_eq!(h.entry(2, 3), &BigInt::from(-2));
        assert_eq!(h.entry(0, 2), &BigInt::zero());

        let solvable = IcpInstance {
            pairs: vec![
                (FreeWord::parse("a").unwrap(), FreeWord::parse("a").unwrap()),
                (FreeWord::parse("a-1").unwrap(), FreeWord::parse("a-1").unwrap()),
            ],
        };
        let gens = icp_to_generators(&solvable).unwrap();
        let product = gens.matrices()[0].mul(&gens.matrices()[1]);
        assert_eq!(product, Matrix::identity(4));
        let ident = IcpInstance {
            pairs: vec![(FreeWord::default(), FreeWord::default())],
        };
        let gens = icp_to_generators(&ident).unwrap();
        assert_eq!(gens.matrices()[0], Matrix::identity(4));
    }

    #[test]
    fn encoding_round_trip() {
        assert_eq!(
            encode_vector(&bigs(&[5]), 2, 4).unwrap(),
            vec![vec![1], vec![0], vec![1], vec![0]]
        );
        assert_eq!(
            encode_vector(&bigs(&[0]), 3, 3).unwrap(),
            vec![vec![0], vec![0], vec![0]]
        );
        assert_eq!(
            encode_vector(&bigs(&[-1]), 2, 3).unwrap(),
            vec![vec![1], vec![1], vec![1]]
        );
        let word = encode_vector(&bigs(&[-7, 12]), 3, 5).unwrap();
        let decoded = decode_word(&word, 3);
        let modulus = BigInt::from(3).pow(5);
        assert!( (&decoded[0] - BigInt::from(-7)).mod_floor(&modulus).is_zero());
        assert_eq!(decoded[1], BigInt::from(12));
    }

    #[test]
    fn digit_single_matrix_transitions() {
        // One-dimensional doubling map in base 3.
        let gens =
            AffineGeneratorSet::with_auto_modulus(vec![Matrix::from_i64(&[&[2]])]).unwrap();
        assert_eq!(gens.modulus(), 3);
        let digit = build_digit_automaton(&gens).unwrap();
        let aut = SAutomaton::new(digit.automaton.clone()).unwrap();
        let zero = digit.zero_state(0);
        // 2*1 = 2: digit 2, no carry.
        let (out, to) = aut.step(zero, digit.letter_of(&[1]).unwrap()).unwrap();
        assert_eq!(digit.digits_of(out), vec![2]);
        assert_eq!(to, zero);
        // 2*2 = 4 = 1 + 3: digit 1, carry 1.
        let (out, to) = aut.step(zero, digit.letter_of(&[2]).unwrap()).unwrap();
        assert_eq!(digit.digits_of(out), vec![1]);
        assert_eq!(to, digit.state_of(0, &bigs(&[1])).unwrap());
    }

    #[test]
    fn identity_zero_state_acts_trivially() {
        let gens =
            AffineGeneratorSet::with_auto_modulus(vec![Matrix::identity(1)]).unwrap();
        let digit = build_digit_automaton(&gens).unwrap();
        let aut = SAutomaton::new(digit.automaton.clone()).unwrap();
        assert!(crate::elements::acts_as_identity(
            &aut,
            &[digit.zero_state(0)]
        ));
    }

    #[test]
    fn state_count_matches_carry_ranges() {
        let a = generator_matrix(FreeLetter { generator: 'a', inverse: false });
        let gens = AffineGeneratorSet::with_auto_modulus(vec![a]).unwrap();
        let digit = build_digit_automaton(&gens).unwrap();
        // Row norm 3 gives carries in [-3,2]^2: 36 states over 4 letters.
        assert_eq!(digit.automaton.state_count(), 36);
        assert_eq!(digit.automaton.letter_count(), 4);
        let props = digit.automaton.properties();
        assert!(props.deterministic && props.complete && props.inverse_deterministic);
    }

    #[test]
    fn affine_action_verifies() {
        let gens = AffineGeneratorSet::with_auto_modulus(vec![Matrix::from_i64(&[&[2]])]).unwrap();
        let digit = build_digit_automaton(&gens).unwrap();
        let aut = SAutomaton::new(digit.automaton.clone()).unwrap();
        // v = 1, z = 3: 1 + 2*3 = 7.
        assert!(verify_affine_action(&digit, &aut, 0, &bigs(&[1]), &bigs(&[3]), 4).unwrap());

        let a = generator_matrix(FreeLetter { generator: 'a', inverse: false });
        let gens = AffineGeneratorSet::with_auto_modulus(vec![a]).unwrap();
        let digit = build_digit_automaton(&gens).unwrap();
        let aut = SAutomaton::new(digit.automaton.clone()).unwrap();
        assert!(verify_affine_action(
            &digit,
            &aut,
            0,
            &bigs(&[0, 0]),
            &bigs(&[1, 1]),
            5
        )
        .unwrap());
        // And the expected image really is (3, 1).
        let m = &gens.matrices()[0];
        assert_eq!(m.apply(&bigs(&[1, 1])), bigs(&[3, 1]));
    }
}
