//! Oriented planar diagrams with at most one singular crossing.
//!
//! A diagram is stored as a port graph. Every crossing has four slots in
//! counter-clockwise order; a port `(c, s)` is joined by an edge to exactly
//! one other port. The strand entering slot `s` leaves through slot `s + 2`.

pub mod goeritz;
pub mod pd;
pub mod plat;

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Port {
    pub crossing: u32,
    pub slot: u8,
}

impl Port {
    pub fn new(crossing: usize, slot: u8) -> Self {
        Port { crossing: crossing as u32, slot: slot % 4 }
    }

    pub fn c(self) -> usize {
        self.crossing as usize
    }

    /// Port on the same crossing, `k` slots counter-clockwise.
    pub fn rot(self, k: u8) -> Port {
        Port { crossing: self.crossing, slot: (self.slot + k) % 4 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    /// Classical crossing; the strand through slots `{axis, axis + 2}` is over.
    Over(u8),
    Singular,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Crossing {
    pub nbr: [Port; 4],
    pub incoming: [bool; 4],
    pub kind: Kind,
}

impl Crossing {
    /// Incoming slot whose counter-clockwise neighbour is also incoming.
    pub fn first_in(&self) -> u8 {
        (0..4u8)
            .find(|&s| self.incoming[s as usize] && self.incoming[((s + 1) % 4) as usize])
            .expect("crossing has two adjacent incoming slots")
    }

    pub fn is_singular(&self) -> bool {
        matches!(self.kind, Kind::Singular)
    }

    /// `+1` or `-1` for classical crossings, `0` for the singular one.
    pub fn sign(&self) -> i32 {
        match self.kind {
            Kind::Singular => 0,
            Kind::Over(ax) => {
                let o = (0..4u8).find(|&s| s % 2 == ax && self.incoming[s as usize]).unwrap();
                let u = (0..4u8).find(|&s| s % 2 != ax && self.incoming[s as usize]).unwrap();
                if (u + 3) % 4 == o {
                    1
                } else {
                    -1
                }
            }
        }
    }

    /// Over axis realising the requested sign with the current orientation.
    pub fn axis_for_sign(&self, sign: i32) -> u8 {
        let x = self.first_in();
        // Under entering at x with over entering at x + 1 is negative.
        let negative_over = (x + 1) % 2;
        if sign < 0 {
            negative_over
        } else {
            1 - negative_over
        }
    }

    pub fn is_over_at(&self, slot: u8) -> bool {
        matches!(self.kind, Kind::Over(ax) if ax == slot % 2)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Resolution {
    Switch,
    OrientedSmooth,
    MakeSingular,
    UnorientedSmooth,
}

/// Component data of a (possibly singular) diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkClass {
    pub num_components: usize,
    pub i_parity: u8,
    /// Twice the linking number; zero unless there are exactly two components.
    pub twice_lk: i64,
    pub writhe: i64,
    pub n_plus: usize,
    pub n_minus: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Diagram {
    crossings: Vec<Crossing>,
    free_loops: u32,
    basepoint: Option<Port>,
}

const STRAIGHT: [u8; 4] = [2, 3, 0, 1];

impl Diagram {
    pub fn unknot() -> Self {
        Self::unlink(1)
    }

    pub fn unlink(n: u32) -> Self {
        Diagram { crossings: Vec::new(), free_loops: n, basepoint: None }
    }

    /// Builds and validates a diagram. The basepoint, if any, must be an
    /// incoming port.
    pub fn from_parts(crossings: Vec<Crossing>, free_loops: u32, basepoint: Option<Port>) -> Result<Self> {
        let mut d = Diagram { crossings, free_loops, basepoint };
        if d.basepoint.is_none() && !d.crossings.is_empty() {
            d.basepoint = Some(d.default_basepoint());
        }
        d.validate()?;
        Ok(d)
    }

    fn default_basepoint(&self) -> Port {
        let c = &self.crossings[0];
        let s = (0..4u8).find(|&s| c.incoming[s as usize]).unwrap();
        Port::new(0, s)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.crossings.len();
        let mut singular = 0;
        for (i, c) in self.crossings.iter().enumerate() {
            if c.is_singular() {
                singular += 1;
            }
            if let Kind::Over(ax) = c.kind {
                if ax > 1 {
                    return Err(Error::MalformedDiagram(format!("crossing {i}: bad axis")));
                }
            }
            for s in 0..4u8 {
                let p = c.nbr[s as usize];
                if p.c() >= n || p.slot > 3 {
                    return Err(Error::MalformedDiagram(format!("crossing {i}: dangling port")));
                }
                if self.nbr(p) != Port::new(i, s) {
                    return Err(Error::MalformedDiagram(format!("crossing {i}: asymmetric edge")));
                }
                if c.incoming[s as usize] == c.incoming[STRAIGHT[s as usize] as usize] {
                    return Err(Error::MalformedDiagram(format!("crossing {i}: strand not oriented")));
                }
                if c.incoming[s as usize] == self.is_incoming(p) {
                    return Err(Error::MalformedDiagram(format!("crossing {i}: edge not oriented")));
                }
            }
        }
        if singular > 1 {
            return Err(Error::SecondSingularCrossing);
        }
        if let Some(bp) = self.basepoint {
            if bp.c() >= n || !self.is_incoming(bp) {
                return Err(Error::MalformedDiagram("basepoint must be an incoming port".into()));
            }
        }
        Ok(())
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn num_crossings(&self) -> usize {
        self.crossings.len()
    }

    pub fn free_loops(&self) -> u32 {
        self.free_loops
    }

    pub fn basepoint(&self) -> Option<Port> {
        self.basepoint
    }

    pub fn nbr(&self, p: Port) -> Port {
        self.crossings[p.c()].nbr[p.slot as usize]
    }

    pub fn is_incoming(&self, p: Port) -> bool {
        self.crossings[p.c()].incoming[p.slot as usize]
    }

    pub fn singular_crossing(&self) -> Option<usize> {
        self.crossings.iter().position(|c| c.is_singular())
    }

    pub fn is_singular(&self) -> bool {
        self.singular_crossing().is_some()
    }

    pub fn writhe(&self) -> i64 {
        self.crossings.iter().map(|c| c.sign() as i64).sum()
    }

    fn check_crossing(&self, c: usize) -> Result<()> {
        if c >= self.crossings.len() {
            return Err(Error::CrossingNotFound(c));
        }
        Ok(())
    }

    pub fn switch(&self, c: usize) -> Result<Self> {
        self.check_crossing(c)?;
        let mut d = self.clone();
        match d.crossings[c].kind {
            Kind::Over(ax) => d.crossings[c].kind = Kind::Over(1 - ax),
            Kind::Singular => {
                return Err(Error::InvalidParameter("cannot switch a singular crossing".into()))
            }
        }
        Ok(d)
    }

    pub fn make_singular(&self, c: usize) -> Result<Self> {
        self.check_crossing(c)?;
        if self.crossings[c].is_singular() {
            return Ok(self.clone());
        }
        if self.is_singular() {
            return Err(Error::SecondSingularCrossing);
        }
        let mut d = self.clone();
        d.crossings[c].kind = Kind::Singular;
        Ok(d)
    }

    /// Replaces crossing `c` by a classical crossing of the given sign.
    pub fn with_sign(&self, c: usize, sign: i32) -> Result<Self> {
        self.check_crossing(c)?;
        let mut d = self.clone();
        let ax = d.crossings[c].axis_for_sign(sign);
        d.crossings[c].kind = Kind::Over(ax);
        Ok(d)
    }

    pub fn oriented_smooth(&self, c: usize) -> Result<Self> {
        self.check_crossing(c)?;
        let x = self.crossings[c].first_in();
        // in x -> out x+3, in x+1 -> out x+2
        let mut pair = [0u8; 4];
        for (a, b) in [(x, (x + 3) % 4), ((x + 1) % 4, (x + 2) % 4)] {
            pair[a as usize] = b;
            pair[b as usize] = a;
        }
        Ok(self.excise(&[c], |p| p.rot((pair[p.slot as usize] + 4 - p.slot) % 4)))
    }

    pub fn unoriented_smooth(&self, c: usize) -> Result<Self> {
        self.check_crossing(c)?;
        let x = self.crossings[c].first_in();
        let mut pair = [0u8; 4];
        for (a, b) in [(x, (x + 1) % 4), ((x + 2) % 4, (x + 3) % 4)] {
            pair[a as usize] = b;
            pair[b as usize] = a;
        }
        let mut d = self.excise(&[c], |p| p.rot((pair[p.slot as usize] + 4 - p.slot) % 4));
        d.reorient();
        Ok(d)
    }

    pub fn resolve(&self, c: usize, mode: Resolution) -> Result<Self> {
        match mode {
            Resolution::Switch => self.switch(c),
            Resolution::OrientedSmooth => self.oriented_smooth(c),
            Resolution::MakeSingular => self.make_singular(c),
            Resolution::UnorientedSmooth => self.unoriented_smooth(c),
        }
    }

    /// Adds a twist of the given sign between the two strands leaving the
    /// singular crossing.
    pub fn add_twist(&self, sign: i32) -> Result<Self> {
        let c = self
            .singular_crossing()
            .ok_or_else(|| Error::InvalidParameter("twisting needs a singular crossing".into()))?;
        let x = self.crossings[c].first_in();
        let o2 = Port::new(c, x + 2);
        let o3 = Port::new(c, x + 3);
        let a = self.nbr(o2);
        let b = self.nbr(o3);
        let mut d = self.clone();
        let t = d.crossings.len();
        // New crossing t: slot 3 <- o2, slot 2 <- o3, slot 0 -> a, slot 1 -> b.
        let nbr = [a, b, o3, o2];
        d.crossings.push(Crossing {
            nbr,
            incoming: [false, false, true, true],
            kind: Kind::Over(0),
        });
        d.set_link(Port::new(t, 0), a);
        d.set_link(Port::new(t, 1), b);
        d.set_link(Port::new(t, 2), o3);
        d.set_link(Port::new(t, 3), o2);
        let ax = d.crossings[t].axis_for_sign(sign);
        d.crossings[t].kind = Kind::Over(ax);
        debug_assert!(d.validate().is_ok());
        Ok(d)
    }

    fn set_link(&mut self, p: Port, q: Port) {
        self.crossings[p.c()].nbr[p.slot as usize] = q;
        self.crossings[q.c()].nbr[q.slot as usize] = p;
    }

    /// Removes the given crossings, reconnecting strands through them with
    /// `through`, which maps a port of a removed crossing to its partner
    /// on the same crossing.
    fn excise(&self, removed: &[usize], through: impl Fn(Port) -> Port) -> Self {
        let n = self.crossings.len();
        let mut gone = vec![false; n];
        for &c in removed {
            gone[c] = true;
        }
        let mut visited: HashMap<Port, bool> = HashMap::new();
        let mut new_nbr: Vec<[Port; 4]> = self.crossings.iter().map(|c| c.nbr).collect();
        for c in 0..n {
            if gone[c] {
                continue;
            }
            for s in 0..4u8 {
                let mut p = self.nbr(Port::new(c, s));
                while gone[p.c()] {
                    visited.insert(p, true);
                    let q = through(p);
                    visited.insert(q, true);
                    p = self.nbr(q);
                }
                new_nbr[c][s as usize] = p;
            }
        }
        let mut loops = 0;
        for &c in removed {
            for s in 0..4u8 {
                let start = Port::new(c, s);
                if visited.contains_key(&start) {
                    continue;
                }
                loops += 1;
                let mut p = start;
                loop {
                    visited.insert(p, true);
                    let q = through(p);
                    visited.insert(q, true);
                    p = self.nbr(q);
                    if p == start {
                        break;
                    }
                }
            }
        }
        let mut basepoint = None;
        if let Some(bp) = self.basepoint {
            let mut p = bp;
            let mut steps = 0;
            while gone[p.c()] && steps <= 4 * removed.len() + 1 {
                p = self.nbr(through(p));
                steps += 1;
            }
            if !gone[p.c()] {
                basepoint = Some(p);
            }
        }
        let mut index = vec![usize::MAX; n];
        let mut k = 0;
        for c in 0..n {
            if !gone[c] {
                index[c] = k;
                k += 1;
            }
        }
        let remap = |p: Port| Port::new(index[p.c()], p.slot);
        let crossings: Vec<Crossing> = (0..n)
            .filter(|&c| !gone[c])
            .map(|c| Crossing {
                nbr: new_nbr[c].map(remap),
                incoming: self.crossings[c].incoming,
                kind: self.crossings[c].kind,
            })
            .collect();
        let mut d = Diagram {
            crossings,
            free_loops: self.free_loops + loops,
            basepoint: basepoint.map(remap),
        };
        if d.basepoint.is_none() && !d.crossings.is_empty() {
            d.basepoint = Some(d.default_basepoint());
        }
        d
    }

    /// Re-derives edge orientations by tracing strands, keeping the
    /// orientation at the basepoint and at the first port of each other
    /// component.
    fn reorient(&mut self) {
        let n = self.crossings.len();
        let mut seen = vec![[false; 4]; n];
        let mut starts = Vec::new();
        if let Some(bp) = self.basepoint {
            starts.push((bp, true));
        }
        for c in 0..n {
            for s in 0..4u8 {
                starts.push((Port::new(c, s), self.crossings[c].incoming[s as usize]));
            }
        }
        let mut incoming = vec![[false; 4]; n];
        for (start, inc) in starts {
            if seen[start.c()][start.slot as usize] {
                continue;
            }
            // Walk so that `start` is entered when inc, or left when !inc.
            let mut p = if inc { start } else { self.nbr(start) };
            loop {
                let out = p.rot(2);
                seen[p.c()][p.slot as usize] = true;
                seen[out.c()][out.slot as usize] = true;
                incoming[p.c()][p.slot as usize] = true;
                incoming[out.c()][out.slot as usize] = false;
                p = self.nbr(out);
                if seen[p.c()][p.slot as usize] {
                    break;
                }
            }
        }
        for (c, inc) in incoming.into_iter().enumerate() {
            self.crossings[c].incoming = inc;
        }
        if let Some(bp) = self.basepoint {
            if !self.is_incoming(bp) {
                self.basepoint = Some(self.nbr(bp));
            }
        }
    }

    /// Reverses the orientation of every strand in the component through `p`.
    pub fn reverse_component(&self, p: Port) -> Self {
        let mut d = self.clone();
        let start = if self.is_incoming(p) { p } else { self.nbr(p) };
        let mut q = start;
        loop {
            let out = q.rot(2);
            d.crossings[q.c()].incoming[q.slot as usize] = false;
            d.crossings[out.c()].incoming[out.slot as usize] = true;
            q = self.nbr(out);
            if q == start {
                break;
            }
        }
        if let Some(bp) = d.basepoint {
            if !d.is_incoming(bp) {
                d.basepoint = Some(d.nbr(bp));
            }
        }
        d
    }

    /// Mirror image: every classical crossing switched.
    pub fn mirror(&self) -> Self {
        let mut d = self.clone();
        for c in &mut d.crossings {
            if let Kind::Over(ax) = c.kind {
                c.kind = Kind::Over(1 - ax);
            }
        }
        d
    }

    /// Component labels of every port. At the singular crossing strands are
    /// paired by `singular_pair` (slot to slot); elsewhere straight through.
    fn component_labels(&self, singular_pair: Option<[u8; 4]>) -> (Vec<[usize; 4]>, usize) {
        let n = self.crossings.len();
        let mut label = vec![[usize::MAX; 4]; n];
        let mut count = 0;
        let partner = |p: Port| -> Port {
            match (self.crossings[p.c()].kind, singular_pair) {
                (Kind::Singular, Some(pair)) => Port::new(p.c(), pair[p.slot as usize]),
                _ => p.rot(2),
            }
        };
        let mut order: Vec<Port> = Vec::new();
        if let Some(bp) = self.basepoint {
            order.push(bp);
        }
        for c in 0..n {
            for s in 0..4u8 {
                order.push(Port::new(c, s));
            }
        }
        for start in order {
            if label[start.c()][start.slot as usize] != usize::MAX {
                continue;
            }
            let mut p = start;
            loop {
                let q = partner(p);
                label[p.c()][p.slot as usize] = count;
                label[q.c()][q.slot as usize] = count;
                p = self.nbr(q);
                if label[p.c()][p.slot as usize] != usize::MAX {
                    break;
                }
            }
            count += 1;
        }
        (label, count)
    }

    fn smoothing_pair(&self, c: usize) -> [u8; 4] {
        let x = self.crossings[c].first_in();
        let mut pair = [0u8; 4];
        for (a, b) in [(x, (x + 3) % 4), ((x + 1) % 4, (x + 2) % 4)] {
            pair[a as usize] = b;
            pair[b as usize] = a;
        }
        pair
    }

    fn class_with(&self, pair: Option<[u8; 4]>) -> (usize, i64) {
        let (label, count) = self.component_labels(pair);
        let comps = count + self.free_loops as usize;
        let mut twice_lk = 0;
        if comps == 2 {
            for (i, c) in self.crossings.iter().enumerate() {
                if c.is_singular() {
                    continue;
                }
                let x = c.first_in();
                if label[i][x as usize] != label[i][((x + 1) % 4) as usize] {
                    twice_lk += c.sign() as i64;
                }
            }
        }
        (comps, twice_lk)
    }

    /// Components, parity, writhe and linking data. For a singular diagram
    /// the components are those of whichever of `L_-`, `L_0` has more.
    pub fn link_class(&self) -> LinkClass {
        let writhe = self.writhe();
        let n_plus = self.crossings.iter().filter(|c| c.sign() > 0).count();
        let n_minus = self.crossings.iter().filter(|c| c.sign() < 0).count();
        match self.singular_crossing() {
            None => {
                let (comps, twice_lk) = self.class_with(None);
                LinkClass {
                    num_components: comps,
                    i_parity: ((1 + comps) % 2) as u8,
                    twice_lk,
                    writhe,
                    n_plus,
                    n_minus,
                }
            }
            Some(s) => {
                let (c_minus, lk_minus) = self.class_with(Some(STRAIGHT));
                let (c_zero, lk_zero) = self.class_with(Some(self.smoothing_pair(s)));
                let (comps, twice_lk) =
                    if c_minus >= c_zero { (c_minus, lk_minus) } else { (c_zero, lk_zero) };
                LinkClass {
                    num_components: comps,
                    i_parity: ((1 + c_minus) % 2) as u8,
                    twice_lk,
                    writhe,
                    n_plus,
                    n_minus,
                }
            }
        }
    }

    pub fn num_components(&self) -> usize {
        self.link_class().num_components
    }

    /// Incoming ports of each traced component (regular pairing), starting
    /// with the basepoint component.
    pub fn components(&self) -> Vec<Vec<Port>> {
        let (label, count) = self.component_labels(None);
        let mut out = vec![Vec::new(); count];
        let mut seen = vec![false; count];
        let mut order: Vec<Port> = Vec::new();
        if let Some(bp) = self.basepoint {
            order.push(bp);
        }
        for c in 0..self.crossings.len() {
            for s in 0..4u8 {
                let p = Port::new(c, s);
                if self.is_incoming(p) {
                    order.push(p);
                }
            }
        }
        for start in order {
            let l = label[start.c()][start.slot as usize];
            if seen[l] {
                continue;
            }
            seen[l] = true;
            let mut p = start;
            loop {
                out[l].push(p);
                p = self.nbr(p.rot(2));
                if p == start {
                    break;
                }
            }
        }
        out.sort_by_key(|v| {
            let l = label[v[0].c()][v[0].slot as usize];
            (self.basepoint.map(|bp| label[bp.c()][bp.slot as usize] != l).unwrap_or(true), v[0])
        });
        out
    }

    /// First crossing met as an under-crossing in the descending traversal
    /// from the basepoint, if any.
    pub fn first_ascending_crossing(&self) -> Option<usize> {
        let n = self.crossings.len();
        let mut met = vec![false; n];
        let (label, count) = self.component_labels(None);
        let mut done = vec![false; count];
        let mut starts: Vec<Port> = Vec::new();
        if let Some(bp) = self.basepoint {
            starts.push(bp);
        }
        for c in 0..n {
            for s in 0..4u8 {
                if self.crossings[c].incoming[s as usize] {
                    starts.push(Port::new(c, s));
                }
            }
        }
        for start in starts {
            let l = label[start.c()][start.slot as usize];
            if done[l] {
                continue;
            }
            done[l] = true;
            let mut p = start;
            loop {
                let c = p.c();
                if !met[c] {
                    met[c] = true;
                    if !self.crossings[c].is_over_at(p.slot) && !self.crossings[c].is_singular() {
                        return Some(c);
                    }
                }
                p = self.nbr(p.rot(2));
                if p == start {
                    break;
                }
            }
        }
        None
    }

    fn find_r1(&self) -> Option<usize> {
        for (i, c) in self.crossings.iter().enumerate() {
            if c.is_singular() {
                continue;
            }
            for s in 0..4u8 {
                if c.nbr[s as usize] == Port::new(i, s + 1) {
                    return Some(i);
                }
            }
        }
        None
    }

    fn find_r2(&self) -> Option<(usize, usize)> {
        for (i, c) in self.crossings.iter().enumerate() {
            if c.is_singular() {
                continue;
            }
            for s in 0..4u8 {
                let p = c.nbr[s as usize];
                let q = c.nbr[((s + 1) % 4) as usize];
                let j = p.c();
                if j == i || q.c() != j || self.crossings[j].is_singular() {
                    continue;
                }
                // Bigon: (i,s)-(j,u+1) and (i,s+1)-(j,u).
                if p.slot != (q.slot + 1) % 4 {
                    continue;
                }
                if c.is_over_at(s) == self.crossings[j].is_over_at(p.slot) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Applies Reidemeister I and II reductions away from the singular
    /// crossing until none apply. Preserves the oriented link type.
    pub fn simplified(&self) -> Self {
        let mut d = self.clone();
        loop {
            if let Some(c) = d.find_r1() {
                d = d.excise(&[c], |p| p.rot(2));
                continue;
            }
            if let Some((i, j)) = d.find_r2() {
                d = d.excise(&[i, j], |p| p.rot(2));
                continue;
            }
            return d;
        }
    }

    /// Connected pieces of the crossing graph, each as its own diagram
    /// without free loops. The basepoint piece comes first.
    pub fn pieces(&self) -> Vec<Diagram> {
        let n = self.crossings.len();
        let mut piece = vec![usize::MAX; n];
        let mut count = 0;
        let mut order: Vec<usize> = Vec::new();
        if let Some(bp) = self.basepoint {
            order.push(bp.c());
        }
        order.extend(0..n);
        for start in order {
            if piece[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            piece[start] = count;
            while let Some(c) = stack.pop() {
                for p in self.crossings[c].nbr {
                    if piece[p.c()] == usize::MAX {
                        piece[p.c()] = count;
                        stack.push(p.c());
                    }
                }
            }
            count += 1;
        }
        (0..count)
            .map(|k| {
                let members: Vec<usize> = (0..n).filter(|&c| piece[c] == k).collect();
                let mut index = vec![usize::MAX; n];
                for (i, &c) in members.iter().enumerate() {
                    index[c] = i;
                }
                let crossings = members
                    .iter()
                    .map(|&c| {
                        let x = &self.crossings[c];
                        Crossing {
                            nbr: x.nbr.map(|p| Port::new(index[p.c()], p.slot)),
                            incoming: x.incoming,
                            kind: x.kind,
                        }
                    })
                    .collect();
                let basepoint = self
                    .basepoint
                    .filter(|bp| piece[bp.c()] == k)
                    .map(|bp| Port::new(index[bp.c()], bp.slot));
                let mut d = Diagram { crossings, free_loops: 0, basepoint };
                if d.basepoint.is_none() {
                    d.basepoint = Some(d.default_basepoint());
                }
                d
            })
            .collect()
    }

    pub fn without_free_loops(&self) -> Self {
        Diagram { free_loops: 0, ..self.clone() }
    }

    /// Face label of every corner; corner `(c, k)` lies between slots `k`
    /// and `k + 1`. Returns the labels and the number of faces.
    pub fn faces(&self) -> (Vec<[usize; 4]>, usize) {
        let n = self.crossings.len();
        let mut face = vec![[usize::MAX; 4]; n];
        let mut count = 0;
        for c in 0..n {
            for k in 0..4u8 {
                if face[c][k as usize] != usize::MAX {
                    continue;
                }
                let mut cur = Port::new(c, k);
                loop {
                    face[cur.c()][cur.slot as usize] = count;
                    cur = self.nbr(cur.rot(1));
                    if face[cur.c()][cur.slot as usize] != usize::MAX {
                        break;
                    }
                }
                count += 1;
            }
        }
        (face, count)
    }

    /// Canonical byte key: equal for diagrams that agree up to relabelling
    /// of crossings, choice of basepoint, and splitting off free loops.
    pub fn canonical_key(&self) -> Vec<u8> {
        let mut keys: Vec<Vec<u32>> = self.pieces().iter().map(|p| p.piece_key()).collect();
        if self.crossings.is_empty() {
            keys.clear();
        }
        keys.sort();
        let mut out = Vec::new();
        out.extend_from_slice(&self.free_loops.to_le_bytes());
        out.extend_from_slice(&(keys.len() as u32).to_le_bytes());
        for k in keys {
            out.extend_from_slice(&(k.len() as u32).to_le_bytes());
            for w in k {
                out.extend_from_slice(&w.to_le_bytes());
            }
        }
        out
    }

    fn piece_key(&self) -> Vec<u32> {
        let mut best: Option<Vec<u32>> = None;
        for c in 0..self.crossings.len() {
            for s in 0..4u8 {
                if self.crossings[c].incoming[s as usize] {
                    let enc = self.encode_from(Port::new(c, s));
                    if best.as_ref().is_none_or(|b| enc < *b) {
                        best = Some(enc);
                    }
                }
            }
        }
        best.unwrap_or_default()
    }

    fn encode_from(&self, start: Port) -> Vec<u32> {
        let n = self.crossings.len();
        let mut label = vec![u32::MAX; n];
        let mut reference = vec![0u8; n];
        let mut order: Vec<usize> = Vec::with_capacity(n);
        let mut entered: BTreeSet<(u32, u8)> = BTreeSet::new();
        let mut next = Some(start);
        while let Some(st) = next {
            let mut p = st;
            loop {
                if label[p.c()] == u32::MAX {
                    label[p.c()] = order.len() as u32;
                    reference[p.c()] = p.slot;
                    order.push(p.c());
                }
                entered.insert((p.crossing, p.slot));
                p = self.nbr(p.rot(2));
                if p == st {
                    break;
                }
            }
            next = None;
            'search: for &c in &order {
                for k in 0..4u8 {
                    let s = (reference[c] + k) % 4;
                    if self.crossings[c].incoming[s as usize] && !entered.contains(&(c as u32, s)) {
                        next = Some(Port::new(c, s));
                        break 'search;
                    }
                }
            }
        }
        let mut enc = Vec::with_capacity(order.len() * 6);
        for &c in &order {
            let x = &self.crossings[c];
            let r = reference[c];
            let kind = match x.kind {
                Kind::Singular => 2,
                Kind::Over(ax) => ((ax + 4 - r) % 2) as u32,
            };
            let mut inc = 0u32;
            for k in 0..4u8 {
                if x.incoming[((r + k) % 4) as usize] {
                    inc |= 1 << k;
                }
            }
            enc.push(kind << 4 | inc);
            for k in 0..4u8 {
                let p = x.nbr[((r + k) % 4) as usize];
                let rel = (p.slot + 4 - reference[p.c()]) % 4;
                enc.push(label[p.c()] << 2 | rel as u32);
            }
        }
        enc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::plat::{plat_from_cf, plat_from_word, LinkOrientation};

    fn trefoil() -> Diagram {
        plat_from_word(&[3], LinkOrientation::Standard)
    }

    #[test]
    fn switch_is_involution() {
        let d = trefoil();
        for c in 0..d.num_crossings() {
            let s = d.switch(c).unwrap();
            assert_ne!(s.canonical_key(), d.canonical_key());
            assert_eq!(s.switch(c).unwrap(), d);
            assert_eq!(s.crossings[c].sign(), -d.crossings[c].sign());
        }
    }

    #[test]
    fn switch_moves_one_crossing_between_sign_counts() {
        let d = plat_from_word(&[2, 2], LinkOrientation::Standard);
        let before = d.link_class();
        let c = (0..d.num_crossings()).find(|&c| d.crossings[c].sign() > 0).unwrap();
        let after = d.switch(c).unwrap().link_class();
        assert_eq!(after.n_plus + 1, before.n_plus);
        assert_eq!(after.n_minus, before.n_minus + 1);
    }

    #[test]
    fn smoothing_changes_components_by_one() {
        for p in 2..20i64 {
            for q in 1..p {
                if num_integer::gcd(p, q) != 1 {
                    continue;
                }
                let code = plat::normalize_code(p, q).unwrap();
                let d = plat_from_cf(&code, LinkOrientation::Standard);
                let c0 = d.num_components() as i64;
                for c in 0..d.num_crossings() {
                    let s = d.oriented_smooth(c).unwrap();
                    assert_eq!((s.num_components() as i64 - c0).abs(), 1);
                }
            }
        }
    }

    #[test]
    fn key_ignores_relabelling() {
        let d = plat_from_word(&[2, 1, 1], LinkOrientation::Standard);
        let n = d.num_crossings();
        let perm: Vec<usize> = (0..n).rev().collect();
        let mut crossings = vec![d.crossings[0].clone(); n];
        for (old, &new) in perm.iter().enumerate() {
            let x = &d.crossings[old];
            crossings[new] = Crossing {
                nbr: x.nbr.map(|p| Port::new(perm[p.c()], p.slot)),
                incoming: x.incoming,
                kind: x.kind,
            };
        }
        let e = Diagram::from_parts(crossings, 0, None).unwrap();
        assert_eq!(d.canonical_key(), e.canonical_key());
        // rotating every crossing's slot numbering also leaves the key fixed
        let rotated: Vec<Crossing> = d
            .crossings
            .iter()
            .map(|x| {
                let mut nbr = x.nbr;
                let mut incoming = x.incoming;
                for s in 0..4 {
                    nbr[(s + 1) % 4] = x.nbr[s].rot(1);
                    incoming[(s + 1) % 4] = x.incoming[s];
                }
                let kind = match x.kind {
                    Kind::Over(ax) => Kind::Over(1 - ax),
                    k => k,
                };
                Crossing { nbr, incoming, kind }
            })
            .collect();
        let r = Diagram::from_parts(rotated, 0, None).unwrap();
        assert_eq!(d.canonical_key(), r.canonical_key());
    }

    #[test]
    fn keys_distinguish() {
        let t = trefoil();
        let f = plat_from_word(&[2, 1, 1], LinkOrientation::Standard);
        assert_ne!(t.canonical_key(), f.canonical_key());
        assert_ne!(t.canonical_key(), t.mirror().canonical_key());
    }

    #[test]
    fn euler_characteristic_of_faces() {
        for w in [vec![3], vec![2, 1, 1], vec![1, 2, 3], vec![4, 1, 2]] {
            let d = plat_from_word(&w, LinkOrientation::Standard).simplified();
            let (_, f) = d.faces();
            assert_eq!(f, d.num_crossings() + 2);
        }
    }

    #[test]
    fn simplification_reduces_kinks() {
        let d = plat_from_word(&[1], LinkOrientation::Standard);
        assert_eq!(d.num_crossings(), 1);
        let s = d.simplified();
        assert_eq!(s.num_crossings(), 0);
        assert_eq!(s.free_loops(), 1);
        // [1, 2, 1] = 1 + 1/(2 + 1) = 4/3 ; [0, 5, 3] collapses to [3]
        let z = plat_from_word(&[0, 5, 3], LinkOrientation::Standard).simplified();
        assert_eq!(z.num_crossings(), 3);
    }

    #[test]
    fn twist_adds_one_crossing() {
        let d = trefoil().make_singular(0).unwrap();
        let t = d.add_twist(-1).unwrap();
        t.validate().unwrap();
        assert_eq!(t.num_crossings(), d.num_crossings() + 1);
        assert_eq!(t.link_class().twice_lk, d.link_class().twice_lk - 1);
        let u = d.add_twist(1).unwrap();
        assert_eq!(u.link_class().twice_lk, d.link_class().twice_lk + 1);
    }

    #[test]
    fn unoriented_smoothing_is_consistent() {
        let d = plat_from_word(&[2, 1, 1], LinkOrientation::Standard);
        for c in 0..d.num_crossings() {
            let u = d.unoriented_smooth(c).unwrap();
            u.validate().unwrap();
        }
    }

    #[test]
    fn hopf_class() {
        let d = plat_from_word(&[2], LinkOrientation::Standard);
        let lc = d.link_class();
        assert_eq!(lc.num_components, 2);
        assert_eq!(lc.i_parity, 1);
        assert_eq!(lc.twice_lk.abs(), 2);
    }
}
