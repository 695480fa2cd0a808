//! Planar diagram codes.
//!
//! `X[i,j,k,l]` lists the edges at a classical crossing counter-clockwise,
//! starting from the incoming under edge. `X+[..]` and `X-[..]` fix the sign
//! explicitly; otherwise the direction of the over strand is inferred from
//! the rest of the diagram, falling back to consecutive edge labels.
//! `S[a,b,c,d]` is a singular crossing with `a`, `b` incoming (`a -> c`,
//! `b -> d`). `O[..]` is a crossingless unknotted component.

use std::collections::HashMap;
use std::fmt::Write as _;

use super::{Crossing, Diagram, Kind, Port};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tag {
    X(Option<i32>),
    S,
    O,
}

fn tokens(src: &str) -> Result<Vec<(Tag, Vec<i64>)>> {
    let s = src.trim();
    let s = s.strip_prefix("PD[").and_then(|r| r.strip_suffix(']')).unwrap_or(s);
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        match b[i] {
            b' ' | b'\t' | b',' => i += 1,
            b'X' | b'S' | b'O' => {
                let (tag, skip) = match (b[i], b.get(i + 1)) {
                    (b'X', Some(b'+')) => (Tag::X(Some(1)), 2),
                    (b'X', Some(b'-')) => (Tag::X(Some(-1)), 2),
                    (b'X', _) => (Tag::X(None), 1),
                    (b'S', _) => (Tag::S, 1),
                    _ => (Tag::O, 1),
                };
                i += skip;
                if b.get(i) != Some(&b'[') {
                    return Err(Error::Parse(format!("expected '[' at offset {i}")));
                }
                let end = s[i..].find(']').ok_or_else(|| Error::Parse("unclosed '['".into()))? + i;
                let body = &s[i + 1..end];
                let nums = if body.trim().is_empty() {
                    Vec::new()
                } else {
                    body.split(',')
                        .map(|t| t.trim().parse::<i64>().map_err(|e| Error::Parse(format!("{t:?}: {e}"))))
                        .collect::<Result<Vec<_>>>()?
                };
                out.push((tag, nums));
                i = end + 1;
            }
            c => return Err(Error::Parse(format!("unexpected character {:?}", c as char))),
        }
    }
    Ok(out)
}

/// Parses one diagram.
pub fn parse(src: &str) -> Result<Diagram> {
    let toks = tokens(src)?;
    let mut loops = 0u32;
    let mut rows: Vec<(Tag, [i64; 4])> = Vec::new();
    for (tag, nums) in toks {
        match tag {
            Tag::O => loops += 1,
            _ => {
                let arr: [i64; 4] = nums
                    .try_into()
                    .map_err(|v: Vec<i64>| Error::Parse(format!("crossing needs 4 labels, got {}", v.len())))?;
                rows.push((tag, arr));
            }
        }
    }
    if rows.iter().filter(|r| r.0 == Tag::S).count() > 1 {
        return Err(Error::SecondSingularCrossing);
    }
    let mut at: HashMap<i64, Vec<Port>> = HashMap::new();
    for (c, (_, arr)) in rows.iter().enumerate() {
        for (s, &l) in arr.iter().enumerate() {
            at.entry(l).or_default().push(Port::new(c, s as u8));
        }
    }
    let mut mate: HashMap<Port, Port> = HashMap::new();
    for (l, ps) in &at {
        if ps.len() != 2 {
            return Err(Error::MalformedDiagram(format!("edge {l} appears {} times", ps.len())));
        }
        mate.insert(ps[0], ps[1]);
        mate.insert(ps[1], ps[0]);
    }
    let n = rows.len();
    let mut dir: Vec<[Option<bool>; 4]> = vec![[None; 4]; n];
    let mut queue: Vec<Port> = Vec::new();
    let set = |p: Port, v: bool, dir: &mut Vec<[Option<bool>; 4]>, queue: &mut Vec<Port>| -> Result<()> {
        match dir[p.c()][p.slot as usize] {
            Some(old) if old != v => Err(Error::MalformedDiagram("inconsistent orientation".into())),
            Some(_) => Ok(()),
            None => {
                dir[p.c()][p.slot as usize] = Some(v);
                queue.push(p);
                Ok(())
            }
        }
    };
    for (c, (tag, _)) in rows.iter().enumerate() {
        set(Port::new(c, 0), true, &mut dir, &mut queue)?;
        set(Port::new(c, 2), false, &mut dir, &mut queue)?;
        if *tag == Tag::S {
            set(Port::new(c, 1), true, &mut dir, &mut queue)?;
            set(Port::new(c, 3), false, &mut dir, &mut queue)?;
        }
    }
    loop {
        while let Some(p) = queue.pop() {
            let v = dir[p.c()][p.slot as usize].unwrap();
            set(p.rot(2), !v, &mut dir, &mut queue)?;
            set(mate[&p], !v, &mut dir, &mut queue)?;
        }
        // components that only pass over: orient by consecutive labels
        let Some(c) = (0..n).find(|&c| dir[c][1].is_none()) else { break };
        let (j, l) = (rows[c].1[1], rows[c].1[3]);
        let j_to_l = l == j + 1 || j > l + 1;
        set(Port::new(c, 1), j_to_l, &mut dir, &mut queue)?;
    }
    let mut crossings = Vec::with_capacity(n);
    for (c, (tag, _)) in rows.iter().enumerate() {
        let incoming = dir[c].map(|x| x.unwrap());
        let nbr = [0u8, 1, 2, 3].map(|s| mate[&Port::new(c, s)]);
        let mut x = Crossing { nbr, incoming, kind: Kind::Over(1) };
        match tag {
            Tag::S => x.kind = Kind::Singular,
            Tag::X(Some(sign)) => {
                x.kind = Kind::Over(x.axis_for_sign(*sign));
                if x.sign() != *sign {
                    return Err(Error::MalformedDiagram(format!("crossing {c}: sign does not fit orientation")));
                }
            }
            Tag::X(None) | Tag::O => {}
        }
        crossings.push(x);
    }
    let basepoint = rows
        .iter()
        .enumerate()
        .flat_map(|(c, (_, arr))| (0..4u8).map(move |s| (arr[s as usize], Port::new(c, s))))
        .filter(|&(_, p)| dir[p.c()][p.slot as usize] == Some(true))
        .min()
        .map(|(_, p)| p);
    Diagram::from_parts(crossings, loops, basepoint)
}

/// Parses a file: one diagram per non-empty line, `#` starts a comment.
pub fn parse_many(src: &str) -> Result<Vec<Diagram>> {
    src.lines()
        .map(|l| l.split('#').next().unwrap().trim())
        .filter(|l| !l.is_empty())
        .map(parse)
        .collect()
}

/// PD code with explicit signs and edges numbered along the components.
pub fn write(d: &Diagram) -> String {
    let n = d.num_crossings();
    let mut label = vec![[0i64; 4]; n];
    let mut next = 1;
    for comp in d.components() {
        for p in comp {
            label[p.c()][p.slot as usize] = next;
            let o = d.nbr(p);
            label[o.c()][o.slot as usize] = next;
            next += 1;
        }
    }
    let mut parts = Vec::new();
    for (c, x) in d.crossings().iter().enumerate() {
        let (start, tag) = match x.kind {
            Kind::Singular => (x.first_in(), "S".to_string()),
            Kind::Over(ax) => {
                let u = (0..4u8).find(|&s| s % 2 != ax && x.incoming[s as usize]).unwrap();
                (u, if x.sign() > 0 { "X+".into() } else { "X-".into() })
            }
        };
        let mut s = format!("{tag}[");
        for k in 0..4u8 {
            if k > 0 {
                s.push(',');
            }
            write!(s, "{}", label[c][((start + k) % 4) as usize]).unwrap();
        }
        s.push(']');
        parts.push(s);
    }
    for _ in 0..d.free_loops() {
        parts.push(format!("O[{next}]"));
        next += 1;
    }
    format!("PD[{}]", parts.join(", "))
}
