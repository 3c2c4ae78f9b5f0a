use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::CoxeterError;

/// A word in the generators, as 0-based generator indices.
pub type Word = Vec<u8>;

pub const DEFAULT_ORBIT_CAP: usize = 200_000;

/// Matrix file format; `0` stands for an infinite entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawCoxeter {
    pub rank: usize,
    pub m: Vec<Vec<u32>>,
}

/// A Coxeter matrix together with a memo of canonical reduced words.
pub struct CoxeterSystem {
    rank: usize,
    m: Vec<Vec<u32>>,
    orbit_cap: usize,
    memo: Mutex<HashMap<Word, Word>>,
}

impl Clone for CoxeterSystem {
    fn clone(&self) -> Self {
        CoxeterSystem {
            rank: self.rank,
            m: self.m.clone(),
            orbit_cap: self.orbit_cap,
            memo: Mutex::new(HashMap::new()),
        }
    }
}

impl fmt::Debug for CoxeterSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoxeterSystem").field("rank", &self.rank).field("m", &self.m).finish()
    }
}

impl PartialEq for CoxeterSystem {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m
    }
}

enum Orbit {
    Shorter(Word),
    Reduced(Vec<Word>),
}

/// Cancels adjacent equal letters until none remain.
fn free_reduce(w: &[u8]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &a in w {
        if out.last() == Some(&a) {
            out.pop();
        } else {
            out.push(a);
        }
    }
    out
}

impl CoxeterSystem {
    pub fn parse(raw: &RawCoxeter) -> Result<Self, CoxeterError> {
        let n = raw.rank;
        for (row, r) in raw.m.iter().enumerate() {
            if r.len() != n {
                return Err(CoxeterError::NotSquare { rank: n, row, found: r.len() });
            }
        }
        if raw.m.len() != n {
            return Err(CoxeterError::NotSquare {
                rank: n,
                row: raw.m.len(),
                found: 0,
            });
        }
        if n > u8::MAX as usize {
            return Err(CoxeterError::LetterOutOfRange { letter: n, rank: u8::MAX as usize });
        }
        for i in 0..n {
            if raw.m[i][i] != 1 {
                return Err(CoxeterError::BadDiagonal(i));
            }
            for j in 0..n {
                if raw.m[i][j] != raw.m[j][i] {
                    return Err(CoxeterError::NotSymmetric { i: i.min(j), j: i.max(j) });
                }
                if i != j && raw.m[i][j] == 1 {
                    return Err(CoxeterError::EntryBelowTwo { i: i.min(j), j: i.max(j) });
                }
            }
        }
        Ok(CoxeterSystem {
            rank: n,
            m: raw.m.clone(),
            orbit_cap: DEFAULT_ORBIT_CAP,
            memo: Mutex::new(HashMap::new()),
        })
    }

    /// Builds from a matrix with `0` for infinity; panics on invalid input.
    pub fn from_matrix(m: Vec<Vec<u32>>) -> Self {
        Self::parse(&RawCoxeter { rank: m.len(), m }).expect("valid Coxeter matrix")
    }

    pub fn from_json(text: &str) -> Result<Self, CoxeterError> {
        Self::parse(&serde_json::from_str(text)?)
    }

    pub fn to_raw(&self) -> RawCoxeter {
        RawCoxeter {
            rank: self.rank,
            m: self.m.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_raw()).expect("serializable")
    }

    /// Dihedral group of order `2m` (`m = 0` gives the infinite dihedral group).
    pub fn dihedral(m: u32) -> Self {
        Self::from_matrix(vec![vec![1, m], vec![m, 1]])
    }

    /// The affine group with all off-diagonal entries 3.
    pub fn affine_a2() -> Self {
        Self::from_matrix(vec![vec![1, 3, 3], vec![3, 1, 3], vec![3, 3, 1]])
    }

    /// PGL(2,Z): m12 = 3, m23 = infinity, m13 = 2.
    pub fn pgl2z() -> Self {
        Self::from_matrix(vec![vec![1, 3, 2], vec![3, 1, 0], vec![2, 0, 1]])
    }

    /// Universal Coxeter group: every off-diagonal entry infinite.
    pub fn universal(rank: usize) -> Self {
        Self::from_matrix((0..rank).map(|i| (0..rank).map(|j| u32::from(i == j)).collect()).collect())
    }

    pub fn with_orbit_cap(mut self, cap: usize) -> Self {
        self.orbit_cap = cap;
        self
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `m_ij`, with `None` for infinity.
    pub fn order(&self, i: usize, j: usize) -> Option<u32> {
        match self.m[i][j] {
            0 => None,
            k => Some(k),
        }
    }

    /// Edges of the Coxeter diagram: pairs with `m_ij >= 3` or infinite.
    pub fn diagram(&self) -> Vec<(usize, usize, Option<u32>)> {
        let mut out = Vec::new();
        for i in 0..self.rank {
            for j in i + 1..self.rank {
                let m = self.order(i, j);
                if m.map_or(true, |k| k >= 3) {
                    out.push((i, j, m));
                }
            }
        }
        out
    }

    pub fn check_word(&self, w: &[u8]) -> Result<(), CoxeterError> {
        match w.iter().find(|&&a| a as usize >= self.rank) {
            Some(&a) => Err(CoxeterError::LetterOutOfRange {
                letter: a as usize,
                rank: self.rank,
            }),
            None => Ok(()),
        }
    }

    fn braid_neighbors(&self, w: &[u8], out: &mut Vec<Word>) {
        for i in 0..w.len().saturating_sub(1) {
            let (a, b) = (w[i], w[i + 1]);
            if a == b {
                continue;
            }
            let m = self.m[a as usize][b as usize] as usize;
            if m == 0 || i + m > w.len() {
                continue;
            }
            if (0..m).all(|k| w[i + k] == if k % 2 == 0 { a } else { b }) {
                let mut v = w.to_vec();
                for k in 0..m {
                    v[i + k] = if k % 2 == 0 { b } else { a };
                }
                out.push(v);
            }
        }
    }

    /// Braid-move orbit of `w`, stopping early at the first word with two
    /// equal adjacent letters (returned with them deleted).
    fn orbit(&self, w: Word) -> Result<Orbit, CoxeterError> {
        let mut seen: HashSet<Word> = HashSet::from([w.clone()]);
        let mut order = vec![w.clone()];
        let mut queue = VecDeque::from([w]);
        let mut next = Vec::new();
        while let Some(v) = queue.pop_front() {
            if let Some(i) = v.windows(2).position(|p| p[0] == p[1]) {
                let mut shorter = v;
                shorter.drain(i..i + 2);
                return Ok(Orbit::Shorter(shorter));
            }
            next.clear();
            self.braid_neighbors(&v, &mut next);
            for u in next.drain(..) {
                if !seen.contains(&u) {
                    if seen.len() >= self.orbit_cap {
                        return Err(CoxeterError::OrbitCapExceeded { cap: self.orbit_cap });
                    }
                    seen.insert(u.clone());
                    order.push(u.clone());
                    queue.push_back(u);
                }
            }
        }
        Ok(Orbit::Reduced(order))
    }

    fn memo_get(&self, w: &[u8]) -> Option<Word> {
        self.memo.lock().expect("memo lock").get(w).cloned()
    }

    /// Lexicographically least reduced word representing the same element.
    pub fn reduce(&self, w: &[u8]) -> Result<Word, CoxeterError> {
        self.check_word(w)?;
        if let Some(c) = self.memo_get(w) {
            return Ok(c);
        }
        let mut cur = free_reduce(w);
        let canonical = loop {
            if let Some(c) = self.memo_get(&cur) {
                break c;
            }
            match self.orbit(cur)? {
                Orbit::Shorter(s) => cur = free_reduce(&s),
                Orbit::Reduced(words) => {
                    let c = words.iter().min().expect("orbit is nonempty").clone();
                    let mut memo = self.memo.lock().expect("memo lock");
                    for v in words {
                        memo.insert(v, c.clone());
                    }
                    break c;
                }
            }
        };
        self.memo.lock().expect("memo lock").insert(w.to_vec(), canonical.clone());
        Ok(canonical)
    }

    pub fn length(&self, w: &[u8]) -> Result<usize, CoxeterError> {
        Ok(self.reduce(w)?.len())
    }

    pub fn equal(&self, a: &[u8], b: &[u8]) -> Result<bool, CoxeterError> {
        Ok(self.reduce(a)? == self.reduce(b)?)
    }

    pub fn multiply(&self, a: &[u8], b: &[u8]) -> Result<Word, CoxeterError> {
        let mut w = a.to_vec();
        w.extend_from_slice(b);
        self.reduce(&w)
    }

    /// Word distance `l(a^-1 b)`.
    pub fn distance(&self, a: &[u8], b: &[u8]) -> Result<usize, CoxeterError> {
        let mut w: Word = a.iter().rev().copied().collect();
        w.extend_from_slice(b);
        self.length(&w)
    }

    /// Canonical form of the reflection `u s u^-1`.
    pub fn reflection(&self, u: &[u8], s: u8) -> Result<Word, CoxeterError> {
        let mut w = u.to_vec();
        w.push(s);
        w.extend(u.iter().rev());
        self.reduce(&w)
    }

    pub fn format(&self, w: &[u8]) -> String {
        format_word(w, self.rank)
    }

    pub fn parse_word(&self, s: &str) -> Result<Word, CoxeterError> {
        parse_word(s, self.rank)
    }
}

/// 1-based letters, concatenated for rank at most 9 and comma-separated
/// otherwise; the identity prints as `e`.
pub fn format_word(w: &[u8], rank: usize) -> String {
    if w.is_empty() {
        return "e".into();
    }
    let letters: Vec<String> = w.iter().map(|&a| (a as usize + 1).to_string()).collect();
    if rank <= 9 {
        letters.concat()
    } else {
        letters.join(",")
    }
}

pub fn parse_word(s: &str, rank: usize) -> Result<Word, CoxeterError> {
    let s = s.trim();
    if s.is_empty() || s == "e" {
        return Ok(Vec::new());
    }
    let letters: Vec<&str> = if s.contains(',') || s.contains(' ') {
        s.split([',', ' ']).filter(|t| !t.is_empty()).collect()
    } else if rank <= 9 {
        s.split("").filter(|t| !t.is_empty()).collect()
    } else {
        vec![s]
    };
    letters
        .iter()
        .map(|t| match t.parse::<usize>() {
            Ok(k) if (1..=rank).contains(&k) => Ok((k - 1) as u8),
            Ok(k) => Err(CoxeterError::LetterOutOfRange { letter: k, rank }),
            Err(_) => Err(CoxeterError::BadWord(s.to_string())),
        })
        .collect()
}
