//! Quantum Turing machines on a tape truncated to cells `-t..=t`.
//!
//! A configuration is `(p, q, s)`: head position `p` in `-t..=t`, internal
//! state `q`, and tape contents `s` over the `2t + 1` cells. The flat index
//! puts the head position in the most significant digit, the internal state
//! next, and the tape last as a little-endian base-`|Sigma|` number starting
//! at cell `-t`. Transitions that would move the head outside the window are
//! dropped, so the truncated matrix is unitary only away from the boundary.

use std::borrow::Cow;
use std::collections::HashMap;
use std::f64::consts::FRAC_PI_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::dilation::DilationPipeline;
use crate::error::{Error, Result};
use crate::sparse::{column_gram_defect, RowAccess, SparseMatrix, StateVector, C64, DROP_TOLERANCE};
use crate::trotter::Order;

/// Tolerance on the per-`(q, sigma)` outgoing squared norm.
pub const RULE_NORM_TOL: f64 = 1e-10;
/// Interior columns of a well-formed rule must be orthonormal to this tolerance.
pub const INTERIOR_TOL: f64 = 1e-10;
/// Default cap on the truncated dimension when materializing the matrix.
pub const TRUNCATION_CAP: usize = 1_000_000;
/// Default cap on the dense state-vector length used by [`qtm_run`].
pub const RUN_CAP: usize = 1 << 23;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    L,
    R,
    S,
}

impl Direction {
    pub fn offset(self) -> i64 {
        match self {
            Direction::L => -1,
            Direction::R => 1,
            Direction::S => 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Transition {
    pub state: usize,
    pub symbol: usize,
    pub dir: Direction,
    pub amp: C64,
}

/// A transition table `(q, sigma) -> sum of amp |q', sigma', dir>`.
#[derive(Clone, Debug, PartialEq)]
pub struct TransitionRule {
    states: Vec<String>,
    alphabet: Vec<String>,
    blank: usize,
    allow_stay: bool,
    outgoing: Vec<Vec<Transition>>,
    /// `(q', sigma', dir) -> [(q, sigma, amp)]`, for row computation.
    incoming: Incoming,
}

type Incoming = HashMap<(usize, usize, Direction), Vec<(usize, usize, C64)>>;

#[derive(Clone, Debug, Serialize, Deserialize)]
struct RuleFile {
    states: Vec<String>,
    alphabet: Vec<String>,
    blank: String,
    delta: Vec<DeltaEntry>,
    #[serde(default)]
    allow_stay: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct DeltaEntry {
    q: String,
    sigma: String,
    q2: String,
    sigma2: String,
    dir: Direction,
    amp: [f64; 2],
}

impl TransitionRule {
    /// Builds a rule from `(q, sigma, q', sigma', dir, amp)` index tuples.
    ///
    /// Structure is checked here (ranges, duplicates, stay moves only when
    /// allowed); normalization is checked by [`TransitionRule::check_normalized`].
    pub fn new(
        states: Vec<String>,
        alphabet: Vec<String>,
        blank: usize,
        allow_stay: bool,
        entries: impl IntoIterator<Item = (usize, usize, usize, usize, Direction, C64)>,
    ) -> Result<Self> {
        let (nq, ns) = (states.len(), alphabet.len());
        if nq == 0 || ns == 0 {
            return Err(Error::InvalidRule("state set and alphabet must be non-empty".into()));
        }
        if blank >= ns {
            return Err(Error::InvalidRule(format!("blank symbol index {blank} out of range")));
        }
        let mut outgoing: Vec<Vec<Transition>> = vec![Vec::new(); nq * ns];
        for (q, s, q2, s2, dir, amp) in entries {
            if q >= nq || q2 >= nq || s >= ns || s2 >= ns {
                return Err(Error::InvalidRule(format!("transition ({q},{s})->({q2},{s2}) out of range")));
            }
            if dir == Direction::S && !allow_stay {
                return Err(Error::InvalidRule(format!(
                    "stay move from ({}, {}) but allow_stay is false",
                    states[q], alphabet[s]
                )));
            }
            let slot = &mut outgoing[q * ns + s];
            if slot.iter().any(|t| t.state == q2 && t.symbol == s2 && t.dir == dir) {
                return Err(Error::InvalidRule(format!(
                    "duplicate transition ({}, {}) -> ({}, {}, {:?})",
                    states[q], alphabet[s], states[q2], alphabet[s2], dir
                )));
            }
            if amp.norm() >= DROP_TOLERANCE {
                slot.push(Transition { state: q2, symbol: s2, dir, amp });
            }
        }
        let mut incoming = Incoming::new();
        for (key, ts) in outgoing.iter_mut().enumerate() {
            ts.sort_by_key(|t| (t.dir, t.state, t.symbol));
            for t in ts.iter() {
                incoming.entry((t.state, t.symbol, t.dir)).or_default().push((key / ns, key % ns, t.amp));
            }
        }
        Ok(Self { states, alphabet, blank, allow_stay, outgoing, incoming })
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_symbols(&self) -> usize {
        self.alphabet.len()
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn blank(&self) -> usize {
        self.blank
    }

    pub fn allow_stay(&self) -> bool {
        self.allow_stay
    }

    pub fn outgoing(&self, q: usize, sigma: usize) -> &[Transition] {
        &self.outgoing[q * self.num_symbols() + sigma]
    }

    pub fn state_index(&self, name: &str) -> Result<usize> {
        self.states
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| Error::InvalidRule(format!("unknown state `{name}`")))
    }

    pub fn symbol_index(&self, name: &str) -> Result<usize> {
        self.alphabet
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| Error::InvalidRule(format!("unknown symbol `{name}`")))
    }

    /// Every `(q, sigma)` must send out amplitudes of squared norm 1.
    pub fn check_normalized(&self) -> Result<()> {
        for q in 0..self.num_states() {
            for s in 0..self.num_symbols() {
                let norm_sqr: f64 = self.outgoing(q, s).iter().map(|t| t.amp.norm_sqr()).sum();
                if (norm_sqr - 1.0).abs() > RULE_NORM_TOL {
                    return Err(Error::UnnormalizedRule {
                        state: self.states[q].clone(),
                        symbol: self.alphabet[s].clone(),
                        norm_sqr,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: RuleFile = serde_json::from_str(text)?;
        let index = |names: &[String], n: &str, what: &str| {
            names
                .iter()
                .position(|x| x == n)
                .ok_or_else(|| Error::InvalidRule(format!("unknown {what} `{n}`")))
        };
        let blank = index(&file.alphabet, &file.blank, "symbol")?;
        let entries = file
            .delta
            .iter()
            .map(|e| {
                Ok((
                    index(&file.states, &e.q, "state")?,
                    index(&file.alphabet, &e.sigma, "symbol")?,
                    index(&file.states, &e.q2, "state")?,
                    index(&file.alphabet, &e.sigma2, "symbol")?,
                    e.dir,
                    C64::new(e.amp[0], e.amp[1]),
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(file.states, file.alphabet, blank, file.allow_stay, entries)
    }

    pub fn to_json(&self) -> Result<String> {
        let mut delta = Vec::new();
        for q in 0..self.num_states() {
            for s in 0..self.num_symbols() {
                for t in self.outgoing(q, s) {
                    delta.push(DeltaEntry {
                        q: self.states[q].clone(),
                        sigma: self.alphabet[s].clone(),
                        q2: self.states[t.state].clone(),
                        sigma2: self.alphabet[t.symbol].clone(),
                        dir: t.dir,
                        amp: [t.amp.re, t.amp.im],
                    });
                }
            }
        }
        let file = RuleFile {
            states: self.states.clone(),
            alphabet: self.alphabet.clone(),
            blank: self.alphabet[self.blank].clone(),
            delta,
            allow_stay: self.allow_stay,
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    /// The head always moves right and nothing else changes.
    pub fn move_right(num_states: usize, num_symbols: usize) -> Result<Self> {
        let entries = (0..num_states)
            .flat_map(|q| (0..num_symbols).map(move |s| (q, s, q, s, Direction::R, C64::new(1.0, 0.0))));
        Self::new(names("q", num_states), names("", num_symbols), 0, false, entries)
    }

    /// Hadamard walk of the head: state `q0` moves left, `q1` moves right, and
    /// the state is mixed by a Hadamard coin. The tape is left untouched.
    pub fn hadamard_walk(num_symbols: usize) -> Result<Self> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut entries = Vec::new();
        for s in 0..num_symbols {
            entries.push((0, s, 0, s, Direction::L, C64::new(h, 0.0)));
            entries.push((0, s, 1, s, Direction::R, C64::new(h, 0.0)));
            entries.push((1, s, 0, s, Direction::L, C64::new(h, 0.0)));
            entries.push((1, s, 1, s, Direction::R, C64::new(-h, 0.0)));
        }
        Self::new(names("q", 2), names("", num_symbols), 0, false, entries)
    }

    /// A random unidirectional rule: each target state is entered from one
    /// fixed direction and the local map `(q, sigma) -> (q', sigma')` is a
    /// random unitary, which makes the infinite-tape evolution unitary.
    pub fn random_unidirectional(num_states: usize, num_symbols: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = num_states * num_symbols;
        let v = random_unitary_dense(k, &mut rng);
        let dirs: Vec<Direction> = (0..num_states)
            .map(|_| if rng.gen::<bool>() { Direction::L } else { Direction::R })
            .collect();
        let mut entries = Vec::new();
        for q in 0..num_states {
            for s in 0..num_symbols {
                for q2 in 0..num_states {
                    for s2 in 0..num_symbols {
                        let amp = v[(q2 * num_symbols + s2) * k + q * num_symbols + s];
                        entries.push((q, s, q2, s2, dirs[q2], amp));
                    }
                }
            }
        }
        Self::new(names("q", num_states), names("", num_symbols), 0, false, entries)
    }
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// Row-major `k x k` unitary from Gram-Schmidt on complex Gaussian columns.
fn random_unitary_dense(k: usize, rng: &mut ChaCha8Rng) -> Vec<C64> {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(k);
    while cols.len() < k {
        let mut v: Vec<C64> = (0..k)
            .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        for _ in 0..2 {
            for c in &cols {
                let overlap: C64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, ci) in v.iter_mut().zip(c) {
                    *vi -= overlap * ci;
                }
            }
        }
        let n = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-6 {
            cols.push(v.into_iter().map(|a| a / n).collect());
        }
    }
    let mut out = vec![C64::new(0.0, 0.0); k * k];
    for (j, c) in cols.iter().enumerate() {
        for (i, &a) in c.iter().enumerate() {
            out[i * k + j] = a;
        }
    }
    out
}

/// A decoded configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    pub head: i64,
    pub state: usize,
    /// Symbols of cells `-t..=t`.
    pub tape: Vec<usize>,
}

/// The transition rule restricted to radius `t`, computable row by row or column by column.
#[derive(Clone, Debug)]
pub struct TruncatedQtm {
    rule: TransitionRule,
    radius: usize,
    tape_states: usize,
    dim: usize,
}

/// `(2t + 1) |Q| |Sigma|^(2t + 1)`, or `None` on overflow.
pub fn truncated_dim(radius: usize, num_states: usize, num_symbols: usize) -> Option<usize> {
    let cells = u32::try_from(2 * radius + 1).ok()?;
    num_symbols
        .checked_pow(cells)?
        .checked_mul(num_states)?
        .checked_mul(2 * radius + 1)
}

impl TruncatedQtm {
    pub fn new(rule: &TransitionRule, radius: usize, cap: usize) -> Result<Self> {
        if radius == 0 {
            return Err(Error::invalid("truncation radius must be at least 1"));
        }
        let dim = truncated_dim(radius, rule.num_states(), rule.num_symbols())
            .ok_or(Error::SizeCapExceeded { size: usize::MAX, cap })?;
        if dim > cap {
            return Err(Error::SizeCapExceeded { size: dim, cap });
        }
        let tape_states = rule.num_symbols().pow((2 * radius + 1) as u32);
        Ok(Self { rule: rule.clone(), radius, tape_states, dim })
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn rule(&self) -> &TransitionRule {
        &self.rule
    }

    fn cell_weight(&self, head: i64) -> usize {
        self.rule.num_symbols().pow((head + self.radius as i64) as u32)
    }

    pub fn encode(&self, c: &Config) -> Result<usize> {
        let t = self.radius as i64;
        if c.head.abs() > t || c.state >= self.rule.num_states() || c.tape.len() != 2 * self.radius + 1 {
            return Err(Error::invalid(format!("configuration {c:?} does not fit radius {t}")));
        }
        let ns = self.rule.num_symbols();
        let mut code = 0usize;
        for &s in c.tape.iter().rev() {
            if s >= ns {
                return Err(Error::invalid(format!("symbol {s} out of range")));
            }
            code = code * ns + s;
        }
        Ok((((c.head + t) as usize) * self.rule.num_states() + c.state) * self.tape_states + code)
    }

    pub fn decode(&self, idx: usize) -> Config {
        let ns = self.rule.num_symbols();
        let mut code = idx % self.tape_states;
        let rest = idx / self.tape_states;
        let state = rest % self.rule.num_states();
        let head = (rest / self.rule.num_states()) as i64 - self.radius as i64;
        let tape = (0..2 * self.radius + 1)
            .map(|_| {
                let s = code % ns;
                code /= ns;
                s
            })
            .collect();
        Config { head, state, tape }
    }

    fn split(&self, idx: usize) -> (i64, usize, usize) {
        let code = idx % self.tape_states;
        let rest = idx / self.tape_states;
        let q = rest % self.rule.num_states();
        let p = (rest / self.rule.num_states()) as i64 - self.radius as i64;
        (p, q, code)
    }

    fn join(&self, p: i64, q: usize, code: usize) -> usize {
        (((p + self.radius as i64) as usize) * self.rule.num_states() + q) * self.tape_states + code
    }

    /// Nonzeros of column `idx`: the image of one configuration, sorted by row.
    pub fn column(&self, idx: usize) -> Vec<(usize, C64)> {
        let (p, q, code) = self.split(idx);
        let ns = self.rule.num_symbols();
        let w = self.cell_weight(p);
        let sigma = (code / w) % ns;
        let t = self.radius as i64;
        let mut out: Vec<(usize, C64)> = self
            .rule
            .outgoing(q, sigma)
            .iter()
            .filter_map(|tr| {
                let p2 = p + tr.dir.offset();
                (p2.abs() <= t).then(|| {
                    let code2 = code - sigma * w + tr.symbol * w;
                    (self.join(p2, tr.state, code2), tr.amp)
                })
            })
            .collect();
        out.sort_by_key(|&(r, _)| r);
        out
    }

    /// One step of the truncated evolution, without materializing the matrix.
    pub fn step(&self, v: &StateVector) -> Result<StateVector> {
        if v.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: v.dim() });
        }
        let mut out = vec![C64::new(0.0, 0.0); self.dim];
        for (idx, &a) in v.amps().iter().enumerate() {
            if a == C64::new(0.0, 0.0) {
                continue;
            }
            for (r, amp) in self.column(idx) {
                out[r] += amp * a;
            }
        }
        Ok(StateVector::new(out))
    }

    /// Index of the same configuration in a machine of radius `other.radius() >= self.radius()`.
    pub fn embed_index(&self, idx: usize, other: &TruncatedQtm) -> Result<usize> {
        let c = self.decode(idx);
        let pad = other.radius.checked_sub(self.radius).ok_or_else(|| Error::invalid("target radius is smaller"))?;
        let blank = self.rule.blank;
        let mut tape = vec![blank; pad];
        tape.extend(&c.tape);
        tape.extend(std::iter::repeat_n(blank, pad));
        other.encode(&Config { head: c.head, state: c.state, tape })
    }

    /// Index in a smaller machine, if the head and every non-blank cell fit.
    pub fn restrict_index(&self, idx: usize, smaller: &TruncatedQtm) -> Option<usize> {
        let c = self.decode(idx);
        let pad = self.radius.checked_sub(smaller.radius)?;
        if c.head.unsigned_abs() as usize > smaller.radius {
            return None;
        }
        let n = c.tape.len();
        let blank = self.rule.blank;
        if c.tape[..pad].iter().chain(&c.tape[n - pad..]).any(|&s| s != blank) {
            return None;
        }
        smaller
            .encode(&Config { head: c.head, state: c.state, tape: c.tape[pad..n - pad].to_vec() })
            .ok()
    }

    /// Projects a state of this machine onto a smaller radius.
    pub fn restrict_state(&self, v: &StateVector, smaller: &TruncatedQtm) -> StateVector {
        let mut out = vec![C64::new(0.0, 0.0); smaller.dim];
        for (idx, &a) in v.amps().iter().enumerate() {
            if a != C64::new(0.0, 0.0) {
                if let Some(j) = self.restrict_index(idx, smaller) {
                    out[j] = a;
                }
            }
        }
        StateVector::new(out)
    }
}

impl RowAccess for TruncatedQtm {
    fn dim(&self) -> usize {
        self.dim
    }

    fn row_entries(&self, i: usize) -> Result<Cow<'_, [(usize, C64)]>> {
        if i >= self.dim {
            return Err(Error::IndexOutOfRange { index: i, dim: self.dim });
        }
        let (p2, q2, code2) = self.split(i);
        let ns = self.rule.num_symbols();
        let t = self.radius as i64;
        let mut out = Vec::new();
        for dir in [Direction::L, Direction::R, Direction::S] {
            let p = p2 - dir.offset();
            if p.abs() > t {
                continue;
            }
            let w = self.cell_weight(p);
            let written = (code2 / w) % ns;
            if let Some(preds) = self.rule.incoming.get(&(q2, written, dir)) {
                for &(q, sigma, amp) in preds {
                    let code = code2 - written * w + sigma * w;
                    out.push((self.join(p, q, code), amp));
                }
            }
        }
        out.sort_by_key(|&(c, _)| c);
        Ok(Cow::Owned(out))
    }

    fn to_sparse(&self) -> Result<SparseMatrix> {
        let triplets = (0..self.dim).flat_map(|j| self.column(j).into_iter().map(move |(r, a)| (r, j, a)));
        SparseMatrix::from_triplets(self.dim, triplets)
    }
}

/// The truncated transition matrix at radius `t` (dimension capped at 10^6).
pub fn qtm_truncate(rule: &TransitionRule, t: usize) -> Result<SparseMatrix> {
    qtm_truncate_capped(rule, t, TRUNCATION_CAP)
}

pub fn qtm_truncate_capped(rule: &TransitionRule, t: usize, cap: usize) -> Result<SparseMatrix> {
    TruncatedQtm::new(rule, t, cap)?.to_sparse()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QtmValidation {
    /// Largest entry of `|G - I|` over columns with the head at `|p| <= t - 1`.
    pub interior_defect: f64,
    /// The same over all columns, boundary included.
    pub full_defect: f64,
    pub interior_unitary: bool,
}

/// Checks normalization of the table and orthonormality of the interior
/// columns of the truncated matrix at `probe_t`.
pub fn qtm_validate(rule: &TransitionRule, probe_t: usize) -> Result<QtmValidation> {
    if probe_t == 0 {
        return Err(Error::invalid("probe radius must be at least 1"));
    }
    rule.check_normalized()?;
    let machine = TruncatedQtm::new(rule, probe_t, TRUNCATION_CAP)?;
    let m = machine.to_sparse()?;
    let inner = probe_t as i64 - 1;
    let interior_defect = column_gram_defect(&m, |j| machine.split(j).0.abs() <= inner);
    let full_defect = column_gram_defect(&m, |_| true);
    Ok(QtmValidation { interior_defect, full_defect, interior_unitary: interior_defect <= INTERIOR_TOL })
}

/// `2 * sum_{n >= t} (pi/2)^n / n!`, summed until terms drop under 1e-18.
///
/// This bounds the per-step error of evolving with the radius-`2t` dilation
/// instead of the infinite machine.
pub fn qtm_step_bound(t: usize) -> f64 {
    let x = FRAC_PI_2;
    let mut term = 1.0;
    for k in 1..=t {
        term *= x / k as f64;
    }
    let mut sum = 0.0;
    let mut n = t;
    while term >= 1e-18 || n == t {
        sum += term;
        n += 1;
        term *= x / n as f64;
        if term == 0.0 {
            break;
        }
    }
    2.0 * sum
}

/// Initial tape (written from cell 0 rightwards), head at cell 0.
#[derive(Clone, Debug, PartialEq)]
pub struct QtmInput {
    pub tape: Vec<usize>,
    pub state: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum QtmMethod {
    Direct,
    /// Each step through the dilation of the radius-`2t` matrix, evolved by a
    /// product formula certified to `epsilon`.
    Dilation { epsilon: f64, order: Order },
}

#[derive(Clone, Debug)]
pub struct QtmRunOptions {
    /// Truncation radius; defaults to `steps + 1`.
    pub radius: Option<usize>,
    pub method: QtmMethod,
    pub size_cap: usize,
}

impl Default for QtmRunOptions {
    fn default() -> Self {
        Self { radius: None, method: QtmMethod::Direct, size_cap: RUN_CAP }
    }
}

#[derive(Clone, Debug)]
pub struct QtmRun {
    /// Raw (unnormalized) state in the radius-`t` encoding.
    pub state: StateVector,
    pub machine: TruncatedQtm,
    /// `|1 - ||state|||`.
    pub norm_deviation: f64,
    /// The allowed deviation: `steps * qtm_step_bound(t)`, plus `steps * epsilon`
    /// for the dilation method.
    pub bound: f64,
}

impl QtmRun {
    pub fn radius(&self) -> usize {
        self.machine.radius()
    }
}

/// Runs `steps` transitions from `input` on the radius-`t` truncation.
pub fn qtm_run(rule: &TransitionRule, input: &QtmInput, steps: usize, opts: &QtmRunOptions) -> Result<QtmRun> {
    rule.check_normalized()?;
    let t = opts.radius.unwrap_or(steps + 1);
    if steps >= t {
        return Err(Error::invalid(format!(
            "steps ({steps}) must be smaller than the radius ({t}) so the head stays inside the window"
        )));
    }
    if input.tape.len() > t + 1 {
        return Err(Error::invalid(format!("input of length {} does not fit in cells 0..={t}", input.tape.len())));
    }
    let machine = TruncatedQtm::new(rule, t, opts.size_cap)?;
    let mut tape = vec![rule.blank(); 2 * t + 1];
    tape[t..t + input.tape.len()].copy_from_slice(&input.tape);
    let start = machine.encode(&Config { head: 0, state: input.state, tape })?;

    let (state, bound) = match opts.method {
        QtmMethod::Direct => {
            let mut v = StateVector::basis(machine.dim, start)?;
            for _ in 0..steps {
                v = machine.step(&v)?;
            }
            (v, steps as f64 * qtm_step_bound(t))
        }
        QtmMethod::Dilation { epsilon, order } => {
            let wide = TruncatedQtm::new(rule, 2 * t, opts.size_cap)?;
            let pipeline = DilationPipeline::new_truncated(&wide, epsilon, order)?;
            let mut v = StateVector::basis(wide.dim, machine.embed_index(start, &wide)?)?;
            for _ in 0..steps {
                v = pipeline.apply(&v)?.state;
            }
            (wide.restrict_state(&v, &machine), steps as f64 * (qtm_step_bound(t) + epsilon))
        }
    };
    let norm_deviation = (1.0 - state.norm()).abs();
    if norm_deviation > bound {
        return Err(Error::BoundViolated { deviation: norm_deviation, bound });
    }
    Ok(QtmRun { state, machine, norm_deviation, bound })
}
