//! Two-bridge codes, continued fractions and 4-plat diagrams.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::{Crossing, Diagram, Kind, Port};
use crate::error::{Error, Result};

/// Normalized pair `(p, q)` with its all-positive continued fraction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TwoBridgeCode {
    pub p: i64,
    pub q: i64,
    pub cf: Vec<i64>,
}

impl TwoBridgeCode {
    pub fn unknot() -> Self {
        TwoBridgeCode { p: 1, q: 0, cf: vec![1] }
    }

    pub fn is_knot(&self) -> bool {
        self.p % 2 == 1
    }

    /// Odd-length word used to draw the plat.
    pub fn word(&self) -> Vec<i64> {
        odd_word(&self.cf)
    }
}

/// Relative orientation of the second component of a two-component plat.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LinkOrientation {
    Standard,
    Reversed,
}

impl LinkOrientation {
    pub fn flipped(self) -> Self {
        match self {
            LinkOrientation::Standard => LinkOrientation::Reversed,
            LinkOrientation::Reversed => LinkOrientation::Standard,
        }
    }
}

fn mod_inverse(q: i64, p: i64) -> i64 {
    let e = q.extended_gcd(&p);
    e.x.rem_euclid(p)
}

/// Canonical representative of the class of `(p, q)`.
pub fn normalize_code(p: i64, q: i64) -> Result<TwoBridgeCode> {
    if p == 0 && q == 0 {
        return Ok(TwoBridgeCode { p: 0, q: 0, cf: Vec::new() });
    }
    let p = p.abs();
    if p == 0 || p.gcd(&q) != 1 {
        return Err(Error::InvalidCode { p, q });
    }
    if p == 1 {
        return Ok(TwoBridgeCode::unknot());
    }
    let q0 = q.rem_euclid(p);
    let qi = mod_inverse(q0, p);
    let q = q0.min(qi);
    Ok(TwoBridgeCode { p, q, cf: continued_fraction(p, q) })
}

/// All-positive continued fraction of `p / q` for `0 < q < p`.
pub fn continued_fraction(p: i64, q: i64) -> Vec<i64> {
    let (mut a, mut b) = (p, q);
    let mut out = Vec::new();
    while b != 0 {
        out.push(a / b);
        let r = a % b;
        a = b;
        b = r;
    }
    out
}

/// `(numerator, denominator)` of `[a1, ..., an] = a1 + 1/(a2 + ...)`,
/// from the product of the matrices `[[a, 1], [1, 0]]`. The empty word
/// gives `1/0`.
pub fn fraction(word: &[i64]) -> (i64, i64) {
    let (mut m00, mut m01, mut m10, mut m11) = (1i64, 0i64, 0i64, 1i64);
    for &a in word {
        let (n00, n01) = (m00 * a + m01, m00);
        let (n10, n11) = (m10 * a + m11, m10);
        m00 = n00;
        m01 = n01;
        m10 = n10;
        m11 = n11;
    }
    (m00, m10)
}

/// Two-bridge class of the plat drawn from an arbitrary integer word.
pub fn code_of_word(word: &[i64]) -> Result<TwoBridgeCode> {
    let (num, den) = fraction(word);
    if num == 0 {
        return normalize_code(0, 0);
    }
    let (p, q) = if num < 0 { (-num, -den) } else { (num, den) };
    normalize_code(p, q)
}

/// Class of the plat left after smoothing the top crossing of `word` so
/// that its first block disappears. The remaining blocks change rows, which
/// mirrors the link.
pub fn vertical_code(word: &[i64]) -> Result<TwoBridgeCode> {
    let tail: Vec<i64> = word[1..].iter().map(|b| -b).collect();
    code_of_word(&tail)
}

/// Odd-length word with the same fraction. `[]` becomes `[0]`, the
/// crossingless two-component plat.
pub fn odd_word(cf: &[i64]) -> Vec<i64> {
    if cf.is_empty() {
        return vec![0];
    }
    let mut w = cf.to_vec();
    if w.len().is_multiple_of(2) {
        let last = w.pop().unwrap();
        if last == 1 {
            // [.., a, 1] = [.., a + 1]
            *w.last_mut().unwrap() += 1;
        } else {
            w.push(last - 1);
            w.push(1);
        }
    }
    w
}

/// Over axis of a positive entry in the middle column; calibrated so that
/// `[3]` is the positive trefoil.
const MIDDLE_POSITIVE_AXIS: u8 = 0;

#[derive(Clone, Copy)]
enum End {
    Port(Port),
    Top(usize),
    Bottom(usize),
}

struct Builder {
    ports: Vec<[Option<End>; 4]>,
    kinds: Vec<Kind>,
    top: [Option<End>; 4],
    bottom: [Option<End>; 4],
    width: usize,
}

impl Builder {
    fn new(width: usize) -> Self {
        Builder { ports: Vec::new(), kinds: Vec::new(), top: [None; 4], bottom: [None; 4], width }
    }

    fn set(&mut self, e: End, to: End) {
        match e {
            End::Port(p) => self.ports[p.c()][p.slot as usize] = Some(to),
            End::Top(k) => self.top[k] = Some(to),
            End::Bottom(k) => self.bottom[k] = Some(to),
        }
    }

    fn link(&mut self, a: End, b: End) {
        self.set(a, b);
        self.set(b, a);
    }

    fn get(&self, e: End) -> End {
        match e {
            End::Port(p) => self.ports[p.c()][p.slot as usize].unwrap(),
            End::Top(k) => self.top[k].unwrap(),
            End::Bottom(k) => self.bottom[k].unwrap(),
        }
    }

    /// Runs the word of crossings `(position, over_axis)` downward from the
    /// top markers. Slots: 0 = SW, 1 = SE, 2 = NE, 3 = NW.
    fn run(&mut self, crossings: &[(usize, u8)]) {
        let mut dangling: Vec<End> = (0..self.width).map(End::Top).collect();
        for &(i, ax) in crossings {
            let c = self.ports.len();
            self.ports.push([None; 4]);
            self.kinds.push(Kind::Over(ax));
            self.link(dangling[i], End::Port(Port::new(c, 3)));
            self.link(dangling[i + 1], End::Port(Port::new(c, 2)));
            dangling[i] = End::Port(Port::new(c, 0));
            dangling[i + 1] = End::Port(Port::new(c, 1));
        }
        for (k, d) in dangling.into_iter().enumerate() {
            self.link(d, End::Bottom(k));
        }
    }

    /// Orients and contracts the marker ends. `through` gives the partner of
    /// a marker across its cap, cup or closing arc; `starts` lists top
    /// positions to leave downward, in order, for each new component.
    #[allow(clippy::needless_range_loop)]
    fn finish(self, through: impl Fn(End) -> End, starts: &[usize]) -> Diagram {
        let n = self.ports.len();
        let mut incoming = vec![[None::<bool>; 4]; n];
        let mut basepoint = None;
        let partner = |e: End| -> End {
            match e {
                End::Port(p) => End::Port(p.rot(2)),
                m => through(m),
            }
        };
        let oriented_from = |start: usize, incoming: &mut Vec<[Option<bool>; 4]>, bp: &mut Option<Port>| {
            if let End::Port(p) = self.get(End::Top(start)) {
                if incoming[p.c()][p.slot as usize].is_some() {
                    return;
                }
            }
            let first = End::Top(start);
            let mut leave = first;
            loop {
                let arrive = self.get(leave);
                if let End::Port(p) = arrive {
                    if incoming[p.c()][p.slot as usize].is_some() {
                        return;
                    }
                    incoming[p.c()][p.slot as usize] = Some(true);
                    if bp.is_none() {
                        *bp = Some(p);
                    }
                }
                leave = partner(arrive);
                if let End::Port(p) = leave {
                    incoming[p.c()][p.slot as usize] = Some(false);
                }
                if let (End::Top(a), End::Top(b)) = (leave, first) {
                    if a == b {
                        return;
                    }
                }
                if let (End::Top(a), End::Top(b)) = (arrive, first) {
                    if a == b {
                        return;
                    }
                }
            }
        };
        for &s in starts {
            oriented_from(s, &mut incoming, &mut basepoint);
        }
        let mut seen_markers = vec![false; 2 * self.width];
        let marker_index = |e: End| -> Option<usize> {
            match e {
                End::Top(k) => Some(k),
                End::Bottom(k) => Some(self.width + k),
                End::Port(_) => None,
            }
        };
        let mut crossings = Vec::with_capacity(n);
        for c in 0..n {
            let mut nbr = [Port::new(0, 0); 4];
            for s in 0..4u8 {
                let mut e = self.get(End::Port(Port::new(c, s)));
                while let Some(m) = marker_index(e) {
                    seen_markers[m] = true;
                    let t = through(e);
                    seen_markers[marker_index(t).unwrap()] = true;
                    e = self.get(t);
                }
                let End::Port(p) = e else { unreachable!() };
                nbr[s as usize] = p;
            }
            crossings.push(Crossing {
                nbr,
                incoming: incoming[c].map(|x| x.expect("all ports oriented")),
                kind: self.kinds[c],
            });
        }
        let mut loops = 0;
        for m in 0..2 * self.width {
            if seen_markers[m] {
                continue;
            }
            loops += 1;
            let mut e = if m < self.width { End::Top(m) } else { End::Bottom(m - self.width) };
            loop {
                let i = marker_index(e).unwrap();
                if seen_markers[i] {
                    break;
                }
                seen_markers[i] = true;
                let t = through(e);
                seen_markers[marker_index(t).unwrap()] = true;
                e = self.get(t);
            }
        }
        let d = Diagram { crossings, free_loops: loops, basepoint };
        debug_assert!(d.validate().is_ok(), "{:?}", d.validate());
        d
    }
}

fn word_crossings(word: &[i64]) -> Vec<(usize, u8)> {
    let mut out = Vec::new();
    for (j, &a) in word.iter().enumerate() {
        let middle = j % 2 == 0;
        let pos = if middle { 1 } else { 0 };
        let positive_axis = if middle { MIDDLE_POSITIVE_AXIS } else { 1 - MIDDLE_POSITIVE_AXIS };
        let ax = if a > 0 { positive_axis } else { 1 - positive_axis };
        for _ in 0..a.unsigned_abs() {
            out.push((pos, ax));
        }
    }
    out
}

/// 4-plat for an arbitrary word: caps `(1,2)`, `(3,4)` on top, then
/// `σ2^{w1} σ1^{-w2} σ2^{w3} ...`, then cups `(1,2)`, `(3,4)`. The top
/// crossing, when the first entry is nonzero, is crossing 0.
pub fn plat_from_word(word: &[i64], orientation: LinkOrientation) -> Diagram {
    let mut b = Builder::new(4);
    b.run(&word_crossings(word));
    let through = |e: End| match e {
        End::Top(k) => End::Top(k ^ 1),
        End::Bottom(k) => End::Bottom(k ^ 1),
        p => p,
    };
    let second = match orientation {
        LinkOrientation::Standard => 2,
        LinkOrientation::Reversed => 3,
    };
    b.finish(through, &[0, second])
}

pub fn plat_from_cf(code: &TwoBridgeCode, orientation: LinkOrientation) -> Diagram {
    plat_from_word(&code.word(), orientation)
}

/// Plat whose top crossing is singular. The first entry must be nonzero.
pub fn singular_plat(word: &[i64], orientation: LinkOrientation) -> Result<Diagram> {
    if word.first().is_none_or(|&a| a == 0) {
        return Err(Error::InvalidParameter("singular plat needs a top crossing".into()));
    }
    plat_from_word(word, orientation).make_singular(0)
}

/// Closure of a braid on `strands` strands; generator `±i` (1-based) is
/// `σ_i^{±1}`, positive when both strands run downward.
pub fn closed_braid(strands: usize, word: &[i64]) -> Result<Diagram> {
    if strands < 2 || word.iter().any(|&g| g == 0 || g.unsigned_abs() as usize >= strands) {
        return Err(Error::InvalidParameter("bad braid word".into()));
    }
    let mut b = Builder::new(strands);
    let crossings: Vec<(usize, u8)> = word
        .iter()
        .map(|&g| (g.unsigned_abs() as usize - 1, if g > 0 { 0 } else { 1 }))
        .collect();
    b.run(&crossings);
    let through = |e: End| match e {
        End::Top(k) => End::Bottom(k),
        End::Bottom(k) => End::Top(k),
        p => p,
    };
    let starts: Vec<usize> = (0..strands).collect();
    Ok(b.finish(through, &starts))
}

/// Orientation relation of the two strands at the top crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TopStrands {
    /// Both strands run the same vertical direction; the oriented smoothing
    /// reduces the twist count of the top block.
    Parallel,
    /// The oriented smoothing joins the two top strands.
    Antiparallel,
}

pub fn top_strands(d: &Diagram) -> TopStrands {
    let c = &d.crossings()[0];
    // NW = 3, NE = 2: parallel iff both enter from above or both from below.
    if c.incoming[3] == c.incoming[2] {
        TopStrands::Parallel
    } else {
        TopStrands::Antiparallel
    }
}

/// The two smoothings of the top crossing of a canonical plat, as
/// `(oriented, unoriented, top_sign)` codes.
pub fn top_resolutions(
    code: &TwoBridgeCode,
    orientation: LinkOrientation,
) -> Result<(TwoBridgeCode, TwoBridgeCode, i32)> {
    if code.p < 2 {
        return Err(Error::InvalidParameter("top resolutions need p >= 2".into()));
    }
    let word = code.word();
    let d = plat_from_word(&word, orientation);
    let sign = d.crossings()[0].sign();
    let twist = {
        let mut w = word.clone();
        w[0] -= 1;
        code_of_word(&w)?
    };
    let vertical = vertical_code(&word)?;
    Ok(match top_strands(&d) {
        TopStrands::Parallel => (twist, vertical, sign),
        TopStrands::Antiparallel => (vertical, twist, sign),
    })
}
