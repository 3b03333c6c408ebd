//! The workspace document: a line-oriented structured text format with
//! explicit ids. Parsing and serialization are exact inverses on
//! canonical documents, and serialization is deterministic, so corpora
//! stay diffable.

use std::collections::BTreeMap;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};

use h1lab::action::{EquivariantPair, GammaGroupAction, SetAction};
use h1lab::group::{FiniteGroup, GroupHom, Subgroup};
use h1lab::groupoid::{FiniteGroupoid, GFunctor, NatIso};
use h1lab::shimura::ToyShimuraDatum;
use h1lab::weak::{WeakAction, WeakEquivariantMap};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupDecl {
    Table { order: usize, rows: Vec<Vec<usize>> },
    Perms { degree: usize, gens: Vec<Vec<usize>> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupDecl {
    pub of: String,
    pub gens: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapDecl {
    pub from: String,
    pub to: String,
    pub images: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionDecl {
    pub gamma: String,
    pub module: String,
    /// automorphism tables attached to generators of gamma
    pub autos: Vec<(usize, Vec<usize>)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetActionDecl {
    pub gamma: String,
    pub degree: usize,
    pub perms: Vec<(usize, Vec<usize>)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairDecl {
    pub action: String,
    pub sets: String,
    /// the module action on the carrier, one row per module element
    pub rows: Vec<(usize, Vec<usize>)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatumDecl {
    pub gamma: String,
    pub hq: String,
    pub ha: String,
    pub k: Vec<usize>,
    pub embed: Vec<usize>,
    pub ysize: usize,
    pub yh: Vec<(usize, Vec<usize>)>,
    pub ygamma: Vec<(usize, Vec<usize>)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupoidDecl {
    pub objects: usize,
    pub mors: Vec<(usize, usize)>,
    pub identities: Vec<usize>,
    pub compose: Vec<(usize, usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeakActionDecl {
    pub gamma: String,
    pub base: String,
    /// per gamma element: object map, morphism map
    pub functors: Vec<(Vec<usize>, Vec<usize>)>,
    pub etaid: Vec<usize>,
    pub etacomp: Vec<(usize, usize, Vec<usize>)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeakMapDecl {
    pub from: String,
    pub to: String,
    pub objects: Vec<usize>,
    pub mors: Vec<usize>,
    pub eps: Vec<(usize, Vec<usize>)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseDecl {
    pub suite: String,
    pub args: BTreeMap<String, String>,
}

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Workspace {
    pub groups: BTreeMap<String, GroupDecl>,
    pub subgroups: BTreeMap<String, SubgroupDecl>,
    pub maps: BTreeMap<String, MapDecl>,
    pub actions: BTreeMap<String, ActionDecl>,
    pub setactions: BTreeMap<String, SetActionDecl>,
    pub pairs: BTreeMap<String, PairDecl>,
    pub groupoids: BTreeMap<String, GroupoidDecl>,
    pub weakactions: BTreeMap<String, WeakActionDecl>,
    pub weakmaps: BTreeMap<String, WeakMapDecl>,
    pub datums: BTreeMap<String, DatumDecl>,
    /// case id -> declaration
    pub cases: BTreeMap<String, CaseDecl>,
    /// case ids annotated as expected failures
    pub expect_fail: BTreeMap<String, String>,
}

fn parse_nums(parts: &[&str]) -> Result<Vec<usize>> {
    parts
        .iter()
        .map(|p| p.parse::<usize>().map_err(|_| anyhow!("bad number: {p}")))
        .collect()
}

impl Workspace {
    pub fn parse(text: &str) -> Result<Workspace> {
        let mut ws = Workspace::default();
        let mut lines = text.lines().enumerate().peekable();
        while let Some((ln, raw)) = lines.next() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let ctx = || format!("line {}", ln + 1);
            match parts[0] {
                "group" => {
                    let id = parts.get(1).context("group needs an id")?.to_string();
                    match *parts.get(2).context("group needs a kind")? {
                        "order" => {
                            let order: usize = parts[3].parse()?;
                            let mut rows = Vec::new();
                            loop {
                                let (ln2, raw2) =
                                    lines.next().context("unterminated group block")?;
                                let l2 = raw2.split('#').next().unwrap_or("").trim();
                                if l2 == "end" {
                                    break;
                                }
                                let p2: Vec<&str> = l2.split_whitespace().collect();
                                if p2.first() != Some(&"row") {
                                    bail!("line {}: expected row or end", ln2 + 1);
                                }
                                rows.push(parse_nums(&p2[1..])?);
                            }
                            ws.groups.insert(id, GroupDecl::Table { order, rows });
                        }
                        "perms" => {
                            let degree: usize = parts[3].parse()?;
                            let mut gens = Vec::new();
                            loop {
                                let (ln2, raw2) =
                                    lines.next().context("unterminated group block")?;
                                let l2 = raw2.split('#').next().unwrap_or("").trim();
                                if l2 == "end" {
                                    break;
                                }
                                let p2: Vec<&str> = l2.split_whitespace().collect();
                                if p2.first() != Some(&"gen") {
                                    bail!("line {}: expected gen or end", ln2 + 1);
                                }
                                gens.push(parse_nums(&p2[1..])?);
                            }
                            ws.groups.insert(id, GroupDecl::Perms { degree, gens });
                        }
                        other => bail!("{}: unknown group kind {other}", ctx()),
                    }
                }
                "subgroup" => {
                    // subgroup <id> of <group> gens <elements...>
                    let id = parts.get(1).context("subgroup needs an id")?.to_string();
                    if parts.get(2) != Some(&"of") || parts.get(4) != Some(&"gens") {
                        bail!("{}: subgroup <id> of <group> gens <elts>", ctx());
                    }
                    ws.subgroups.insert(
                        id,
                        SubgroupDecl {
                            of: parts[3].to_string(),
                            gens: parse_nums(&parts[5..])?,
                        },
                    );
                }
                "map" => {
                    // map <id> from <g1> to <g2> / images ... / end
                    let id = parts.get(1).context("map needs an id")?.to_string();
                    let from = parts.get(3).context("map needs from")?.to_string();
                    let to = parts.get(5).context("map needs to")?.to_string();
                    let mut images = Vec::new();
                    loop {
                        let (ln2, raw2) = lines.next().context("unterminated map block")?;
                        let l2 = raw2.split('#').next().unwrap_or("").trim();
                        if l2 == "end" {
                            break;
                        }
                        let p2: Vec<&str> = l2.split_whitespace().collect();
                        if p2.first() != Some(&"images") {
                            bail!("line {}: expected images or end", ln2 + 1);
                        }
                        images.extend(parse_nums(&p2[1..])?);
                    }
                    ws.maps.insert(id, MapDecl { from, to, images });
                }
                "action" => {
                    let id = parts.get(1).context("action needs an id")?.to_string();
                    let gamma = parts.get(3).context("action needs gamma")?.to_string();
                    let module = parts.get(5).context("action needs module")?.to_string();
                    let mut autos = Vec::new();
                    loop {
                        let (ln2, raw2) = lines.next().context("unterminated action")?;
                        let l2 = raw2.split('#').next().unwrap_or("").trim();
                        if l2 == "end" {
                            break;
                        }
                        let p2: Vec<&str> = l2.split_whitespace().collect();
                        if p2.first() != Some(&"auto") || p2.get(2) != Some(&":") {
                            bail!("line {}: expected `auto <g> : <table>`", ln2 + 1);
                        }
                        autos.push((p2[1].parse()?, parse_nums(&p2[3..])?));
                    }
                    ws.actions.insert(id, ActionDecl { gamma, module, autos });
                }
                "setaction" => {
                    let id = parts.get(1).context("setaction needs an id")?.to_string();
                    let gamma = parts.get(3).context("setaction needs gamma")?.to_string();
                    let degree: usize = parts.get(5).context("setaction needs degree")?.parse()?;
                    let mut perms = Vec::new();
                    loop {
                        let (ln2, raw2) = lines.next().context("unterminated setaction")?;
                        let l2 = raw2.split('#').next().unwrap_or("").trim();
                        if l2 == "end" {
                            break;
                        }
                        let p2: Vec<&str> = l2.split_whitespace().collect();
                        if p2.first() != Some(&"perm") || p2.get(2) != Some(&":") {
                            bail!("line {}: expected `perm <g> : <table>`", ln2 + 1);
                        }
                        perms.push((p2[1].parse()?, parse_nums(&p2[3..])?));
                    }
                    ws.setactions.insert(id, SetActionDecl { gamma, degree, perms });
                }
                "pair" => {
                    let id = parts.get(1).context("pair needs an id")?.to_string();
                    let action = parts.get(3).context("pair needs action")?.to_string();
                    let sets = parts.get(5).context("pair needs sets")?.to_string();
                    let mut rows = Vec::new();
                    loop {
                        let (ln2, raw2) = lines.next().context("unterminated pair")?;
                        let l2 = raw2.split('#').next().unwrap_or("").trim();
                        if l2 == "end" {
                            break;
                        }
                        let p2: Vec<&str> = l2.split_whitespace().collect();
                        if p2.first() != Some(&"act") || p2.get(2) != Some(&":") {
                            bail!("line {}: expected `act <g> : <row>`", ln2 + 1);
                        }
                        rows.push((p2[1].parse()?, parse_nums(&p2[3..])?));
                    }
                    ws.pairs.insert(id, PairDecl { action, sets, rows });
                }
                "groupoid" => {
                    let id = parts.get(1).context("groupoid needs an id")?.to_string();
                    let objects: usize = parts.get(3).context("groupoid needs objects")?.parse()?;
                    let mut mors = Vec::new();
                    let mut identity_pairs: Vec<(usize, usize)> = Vec::new();
                    let mut compose = Vec::new();
                    loop {
                        let (ln2, raw2) = lines.next().context("unterminated groupoid")?;
                        let l2 = raw2.split('#').next().unwrap_or("").trim();
                        if l2 == "end" {
                            break;
                        }
                        let p2: Vec<&str> = l2.split_whitespace().collect();
                        match p2.first() {
                            Some(&"mor") => mors.push((p2[1].parse()?, p2[2].parse()?)),
                            Some(&"identity") => {
                                identity_pairs.push((p2[1].parse()?, p2[3].parse()?))
                            }
                            Some(&"compose") => {
                                compose.push((p2[1].parse()?, p2[2].parse()?, p2[4].parse()?))
                            }
                            _ => bail!("line {}: unknown groupoid entry", ln2 + 1),
                        }
                    }
                    identity_pairs.sort();
                    if identity_pairs.iter().enumerate().any(|(i, &(x, _))| i != x) {
                        bail!("groupoid {id}: need one identity per object");
                    }
                    let identities = identity_pairs.into_iter().map(|(_, m)| m).collect();
                    ws.groupoids
                        .insert(id, GroupoidDecl { objects, mors, identities, compose });
                }
                "weakaction" => {
                    let id = parts.get(1).context("weakaction needs an id")?.to_string();
                    let gamma = parts.get(3).context("weakaction needs gamma")?.to_string();
                    let base = parts.get(5).context("weakaction needs base")?.to_string();
                    let mut functors: BTreeMap<usize, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
                    let mut etaid = Vec::new();
                    let mut etacomp = Vec::new();
                    loop {
                        let (ln2, raw2) = lines.next().context("unterminated weakaction")?;
                        let l2 = raw2.split('#').next().unwrap_or("").trim();
                        if l2 == "end" {
                            break;
                        }
                        let p2: Vec<&str> = l2.split_whitespace().collect();
                        match p2.first() {
                            Some(&"functor") => {
                                let g: usize = p2[1].parse()?;
                                let entry = functors.entry(g).or_default();
                                match p2.get(2) {
                                    Some(&"objects") => entry.0 = parse_nums(&p2[4..])?,
                                    Some(&"mors") => entry.1 = parse_nums(&p2[4..])?,
                                    _ => bail!("line {}: functor objects|mors", ln2 + 1),
                                }
                            }
                            Some(&"etaid") => etaid = parse_nums(&p2[2..])?,
                            Some(&"etacomp") => {
                                etacomp.push((p2[1].parse()?, p2[2].parse()?, parse_nums(&p2[4..])?))
                            }
                            _ => bail!("line {}: unknown weakaction entry", ln2 + 1),
                        }
                    }
                    ws.weakactions.insert(
                        id,
                        WeakActionDecl {
                            gamma,
                            base,
                            functors: functors.into_values().collect(),
                            etaid,
                            etacomp,
                        },
                    );
                }
                "weakmap" => {
                    let id = parts.get(1).context("weakmap needs an id")?.to_string();
                    let from = parts.get(3).context("weakmap needs from")?.to_string();
                    let to = parts.get(5).context("weakmap needs to")?.to_string();
                    let mut objects = Vec::new();
                    let mut mors = Vec::new();
                    let mut eps = Vec::new();
                    loop {
                        let (ln2, raw2) = lines.next().context("unterminated weakmap")?;
                        let l2 = raw2.split('#').next().unwrap_or("").trim();
                        if l2 == "end" {
                            break;
                        }
                        let p2: Vec<&str> = l2.split_whitespace().collect();
                        match p2.first() {
                            Some(&"objects") => objects = parse_nums(&p2[2..])?,
                            Some(&"mors") => mors = parse_nums(&p2[2..])?,
                            Some(&"eps") => eps.push((p2[1].parse()?, parse_nums(&p2[3..])?)),
                            _ => bail!("line {}: unknown weakmap entry", ln2 + 1),
                        }
                    }
                    ws.weakmaps.insert(id, WeakMapDecl { from, to, objects, mors, eps });
                }
                "datum" => {
                    // datum <id> gamma <g> hq <action> ha <action> k <elts...>
                    let id = parts.get(1).context("datum needs an id")?.to_string();
                    let gamma = parts.get(3).context("datum needs gamma")?.to_string();
                    let hq = parts.get(5).context("datum needs hq")?.to_string();
                    let ha = parts.get(7).context("datum needs ha")?.to_string();
                    if parts.get(8) != Some(&"k") {
                        bail!("{}: datum needs `k <elts>`", ctx());
                    }
                    let k = parse_nums(&parts[9..])?;
                    let mut embed = Vec::new();
                    let mut ysize = 0;
                    let mut yh = Vec::new();
                    let mut ygamma = Vec::new();
                    loop {
                        let (ln2, raw2) = lines.next().context("unterminated datum")?;
                        let l2 = raw2.split('#').next().unwrap_or("").trim();
                        if l2 == "end" {
                            break;
                        }
                        let p2: Vec<&str> = l2.split_whitespace().collect();
                        match p2.first() {
                            Some(&"embed") => embed = parse_nums(&p2[2..])?,
                            Some(&"ysize") => ysize = p2[1].parse()?,
                            Some(&"yh") => yh.push((p2[1].parse()?, parse_nums(&p2[3..])?)),
                            Some(&"ygamma") => {
                                ygamma.push((p2[1].parse()?, parse_nums(&p2[3..])?))
                            }
                            _ => bail!("line {}: unknown datum entry", ln2 + 1),
                        }
                    }
                    ws.datums.insert(
                        id,
                        DatumDecl { gamma, hq, ha, k, embed, ysize, yh, ygamma },
                    );
                }
                "case" => {
                    // case <suite> <id> key=value ...
                    let suite = parts.get(1).context("case needs a suite")?.to_string();
                    let id = parts.get(2).context("case needs an id")?.to_string();
                    let mut args = BTreeMap::new();
                    for kv in &parts[3..] {
                        let (k, v) = kv
                            .split_once('=')
                            .with_context(|| format!("{}: expected key=value", ctx()))?;
                        args.insert(k.to_string(), v.to_string());
                    }
                    ws.cases.insert(id, CaseDecl { suite, args });
                }
                "expect" => {
                    // expect <case-id> fail [note...]
                    let id = parts.get(1).context("expect needs a case id")?.to_string();
                    if parts.get(2) != Some(&"fail") {
                        bail!("{}: only `expect <id> fail` is supported", ctx());
                    }
                    ws.expect_fail.insert(id, parts[3..].join(" "));
                }
                other => bail!("{}: unknown directive {other}", ctx()),
            }
        }
        Ok(ws)
    }

    /// Canonical serialization: blocks by kind, ids in order.
    pub fn serialize(&self) -> String {
        let mut out = String::from("# h1lab workspace\n");
        let nums = |v: &[usize]| {
            v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
        };
        for (id, g) in &self.groups {
            match g {
                GroupDecl::Table { order, rows } => {
                    out += &format!("group {id} order {order}\n");
                    for r in rows {
                        out += &format!("row {}\n", nums(r));
                    }
                }
                GroupDecl::Perms { degree, gens } => {
                    out += &format!("group {id} perms {degree}\n");
                    for g in gens {
                        out += &format!("gen {}\n", nums(g));
                    }
                }
            }
            out += "end\n";
        }
        for (id, s) in &self.subgroups {
            out += &format!("subgroup {id} of {} gens {}\n", s.of, nums(&s.gens));
        }
        for (id, m) in &self.maps {
            out += &format!("map {id} from {} to {}\n", m.from, m.to);
            out += &format!("images {}\nend\n", nums(&m.images));
        }
        for (id, a) in &self.actions {
            out += &format!("action {id} gamma {} module {}\n", a.gamma, a.module);
            for (g, t) in &a.autos {
                out += &format!("auto {g} : {}\n", nums(t));
            }
            out += "end\n";
        }
        for (id, a) in &self.setactions {
            out += &format!("setaction {id} gamma {} degree {}\n", a.gamma, a.degree);
            for (g, t) in &a.perms {
                out += &format!("perm {g} : {}\n", nums(t));
            }
            out += "end\n";
        }
        for (id, p) in &self.pairs {
            out += &format!("pair {id} action {} sets {}\n", p.action, p.sets);
            for (g, t) in &p.rows {
                out += &format!("act {g} : {}\n", nums(t));
            }
            out += "end\n";
        }
        for (id, g) in &self.groupoids {
            out += &format!("groupoid {id} objects {}\n", g.objects);
            for &(s, d) in &g.mors {
                out += &format!("mor {s} {d}\n");
            }
            for (x, m) in g.identities.iter().enumerate() {
                out += &format!("identity {x} : {m}\n");
            }
            for &(f, gth, h) in &g.compose {
                out += &format!("compose {f} {gth} : {h}\n");
            }
            out += "end\n";
        }
        for (id, w) in &self.weakactions {
            out += &format!("weakaction {id} gamma {} base {}\n", w.gamma, w.base);
            for (g, (objs, mors)) in w.functors.iter().enumerate() {
                out += &format!("functor {g} objects : {}\n", nums(objs));
                out += &format!("functor {g} mors : {}\n", nums(mors));
            }
            out += &format!("etaid : {}\n", nums(&w.etaid));
            for (g1, g2, comps) in &w.etacomp {
                out += &format!("etacomp {g1} {g2} : {}\n", nums(comps));
            }
            out += "end\n";
        }
        for (id, w) in &self.weakmaps {
            out += &format!("weakmap {id} from {} to {}\n", w.from, w.to);
            out += &format!("objects : {}\n", nums(&w.objects));
            out += &format!("mors : {}\n", nums(&w.mors));
            for (g, comps) in &w.eps {
                out += &format!("eps {g} : {}\n", nums(comps));
            }
            out += "end\n";
        }
        for (id, d) in &self.datums {
            out += &format!(
                "datum {id} gamma {} hq {} ha {} k {}\n",
                d.gamma,
                d.hq,
                d.ha,
                nums(&d.k)
            );
            out += &format!("embed : {}\n", nums(&d.embed));
            out += &format!("ysize {}\n", d.ysize);
            for (g, t) in &d.yh {
                out += &format!("yh {g} : {}\n", nums(t));
            }
            for (g, t) in &d.ygamma {
                out += &format!("ygamma {g} : {}\n", nums(t));
            }
            out += "end\n";
        }
        for (id, c) in &self.cases {
            out += &format!("case {} {id}", c.suite);
            for (k, v) in &c.args {
                out += &format!(" {k}={v}");
            }
            out += "\n";
        }
        for (id, note) in &self.expect_fail {
            if note.is_empty() {
                out += &format!("expect {id} fail\n");
            } else {
                out += &format!("expect {id} fail {note}\n");
            }
        }
        out
    }

    /// Resolves a group reference: a declared group or the induced group
    /// of a declared subgroup.
    pub fn group(&self, id: &str) -> Result<FiniteGroup> {
        if let Some(decl) = self.groups.get(id) {
            return match decl {
                GroupDecl::Table { order, rows } => {
                    let mut table = Vec::with_capacity(order * order);
                    if rows.len() != *order {
                        bail!("group {id}: expected {order} rows");
                    }
                    for r in rows {
                        if r.len() != *order {
                            bail!("group {id}: ragged row");
                        }
                        table.extend(r.iter().map(|&x| x as u32));
                    }
                    Ok(FiniteGroup::from_table(*order, table)?)
                }
                GroupDecl::Perms { degree, gens } => {
                    Ok(FiniteGroup::from_permutations(*degree, gens)?)
                }
            };
        }
        if let Some(sub) = self.subgroups.get(id) {
            return Ok(self.subgroup(id, sub)?.group);
        }
        bail!("unknown group reference: {id}")
    }

    fn subgroup(&self, id: &str, decl: &SubgroupDecl) -> Result<Subgroup> {
        let parent = self
            .group(&decl.of)
            .with_context(|| format!("subgroup {id}"))?;
        for &g in &decl.gens {
            if g >= parent.order() {
                bail!("subgroup {id}: generator {g} out of range");
            }
        }
        Ok(parent.subgroup(&decl.gens))
    }

    pub fn subgroup_by_id(&self, id: &str) -> Result<(FiniteGroup, Subgroup)> {
        let decl = self
            .subgroups
            .get(id)
            .with_context(|| format!("unknown subgroup: {id}"))?;
        Ok((self.group(&decl.of)?, self.subgroup(id, decl)?))
    }

    pub fn group_hom(&self, id: &str) -> Result<GroupHom> {
        let decl = self.maps.get(id).with_context(|| format!("unknown map: {id}"))?;
        Ok(GroupHom::new(
            self.group(&decl.from)?,
            self.group(&decl.to)?,
            decl.images.clone(),
        )?)
    }

    pub fn action(&self, id: &str) -> Result<GammaGroupAction> {
        let decl = self
            .actions
            .get(id)
            .with_context(|| format!("unknown action: {id}"))?;
        let gamma = self.group(&decl.gamma)?;
        let module = self.group(&decl.module)?;
        let gens: Vec<usize> = decl.autos.iter().map(|(g, _)| *g).collect();
        let tables: Vec<Vec<usize>> = decl.autos.iter().map(|(_, t)| t.clone()).collect();
        Ok(GammaGroupAction::from_generator_images(gamma, module, &gens, &tables)?)
    }

    pub fn set_action(&self, id: &str) -> Result<SetAction> {
        let decl = self
            .setactions
            .get(id)
            .with_context(|| format!("unknown setaction: {id}"))?;
        let gamma = self.group(&decl.gamma)?;
        // complete from generators like actions
        let gens: Vec<usize> = decl.perms.iter().map(|(g, _)| *g).collect();
        if gamma.subgroup(&gens).order() != gamma.order() {
            bail!("setaction {id}: listed elements do not generate gamma");
        }
        let decomp = gamma.word_decomposition(&gens)?;
        let mut perms: Vec<Option<Vec<usize>>> = vec![None; gamma.order()];
        perms[0] = Some((0..decl.degree).collect());
        let mut remaining = gamma.order() - 1;
        while remaining > 0 {
            let mut progressed = false;
            for g in 1..gamma.order() {
                if perms[g].is_some() {
                    continue;
                }
                let (prev, gi) = decomp[g].expect("generated");
                if let Some(prev_p) = perms[prev].clone() {
                    let gen_p = &decl.perms[gi].1;
                    perms[g] = Some((0..decl.degree).map(|x| prev_p[gen_p[x]]).collect());
                    remaining -= 1;
                    progressed = true;
                }
            }
            if !progressed {
                bail!("setaction {id}: could not extend");
            }
        }
        Ok(SetAction::new(
            gamma,
            decl.degree,
            perms.into_iter().map(|p| p.unwrap()).collect(),
        )?)
    }

    pub fn pair(&self, id: &str) -> Result<EquivariantPair> {
        let decl = self.pairs.get(id).with_context(|| format!("unknown pair: {id}"))?;
        let group_action = self.action(&decl.action)?;
        let set_action = self.set_action(&decl.sets)?;
        let module = group_action.module.clone();
        let mut rows = vec![None; module.order()];
        for (g, row) in &decl.rows {
            rows[*g] = Some(row.clone());
        }
        let perms: Vec<Vec<usize>> = rows
            .into_iter()
            .enumerate()
            .map(|(g, r)| r.with_context(|| format!("pair {id}: missing act row {g}")))
            .collect::<Result<_>>()?;
        let module_action = SetAction::new(module, set_action.degree, perms)?;
        Ok(EquivariantPair::new(group_action, set_action, module_action)?)
    }

    pub fn groupoid(&self, id: &str) -> Result<Arc<FiniteGroupoid>> {
        let decl = self
            .groupoids
            .get(id)
            .with_context(|| format!("unknown groupoid: {id}"))?;
        let compose = decl.compose.iter().map(|&(f, g, h)| ((f, g), h)).collect();
        let gpd = FiniteGroupoid::new(
            decl.objects,
            decl.mors.clone(),
            decl.identities.clone(),
            compose,
        )?;
        let violations = gpd.check_groupoid();
        if !violations.is_empty() {
            bail!("groupoid {id} fails the axioms: {violations:?}");
        }
        Ok(Arc::new(gpd))
    }

    pub fn weak_action(&self, id: &str) -> Result<WeakAction> {
        let decl = self
            .weakactions
            .get(id)
            .with_context(|| format!("unknown weakaction: {id}"))?;
        let gamma = self.group(&decl.gamma)?;
        let base = self.groupoid(&decl.base)?;
        if decl.functors.len() != gamma.order() {
            bail!("weakaction {id}: one functor per group element");
        }
        let functors: Vec<GFunctor> = decl
            .functors
            .iter()
            .map(|(objs, mors)| {
                Ok(GFunctor::new(base.clone(), base.clone(), objs.clone(), mors.clone())?)
            })
            .collect::<Result<_>>()?;
        let n = gamma.order();
        let mut eta_comp = vec![None; n * n];
        for (g1, g2, comps) in &decl.etacomp {
            eta_comp[g1 * n + g2] = Some(NatIso { components: comps.clone() });
        }
        let eta_comp: Vec<NatIso> = eta_comp
            .into_iter()
            .enumerate()
            .map(|(i, c)| c.with_context(|| format!("weakaction {id}: missing etacomp {i}")))
            .collect::<Result<_>>()?;
        let w = WeakAction {
            gamma,
            base,
            functors,
            eta_id: NatIso { components: decl.etaid.clone() },
            eta_comp,
        };
        let violations = h1lab::weak::check_weak_action(&w);
        if !violations.is_empty() {
            bail!("weakaction {id} fails the axioms: {violations:?}");
        }
        Ok(w)
    }

    pub fn weak_map(&self, id: &str) -> Result<WeakEquivariantMap> {
        let decl = self
            .weakmaps
            .get(id)
            .with_context(|| format!("unknown weakmap: {id}"))?;
        let source = self.weak_action(&decl.from)?;
        let target = self.weak_action(&decl.to)?;
        let alpha = GFunctor::new(
            source.base.clone(),
            target.base.clone(),
            decl.objects.clone(),
            decl.mors.clone(),
        )?;
        let mut eps = vec![None; source.gamma.order()];
        for (g, comps) in &decl.eps {
            eps[*g] = Some(NatIso { components: comps.clone() });
        }
        let eps: Vec<NatIso> = eps
            .into_iter()
            .enumerate()
            .map(|(g, c)| c.with_context(|| format!("weakmap {id}: missing eps {g}")))
            .collect::<Result<_>>()?;
        Ok(WeakEquivariantMap::new(source, target, alpha, eps)?)
    }

    pub fn datum(&self, id: &str) -> Result<ToyShimuraDatum> {
        let decl = self
            .datums
            .get(id)
            .with_context(|| format!("unknown datum: {id}"))?;
        let hq_action = self.action(&decl.hq)?;
        let ha_action = self.action(&decl.ha)?;
        let embed = GroupHom::new(
            hq_action.module.clone(),
            ha_action.module.clone(),
            decl.embed.clone(),
        )?;
        let k = ha_action.module.subgroup(&decl.k);
        let build_perms = |entries: &[(usize, Vec<usize>)],
                           group: &FiniteGroup|
         -> Result<Vec<Vec<usize>>> {
            let gens: Vec<usize> = entries.iter().map(|(g, _)| *g).collect();
            if group.subgroup(&gens).order() != group.order() {
                bail!("datum {id}: listed elements do not generate");
            }
            let decomp = group.word_decomposition(&gens)?;
            let mut perms: Vec<Option<Vec<usize>>> = vec![None; group.order()];
            perms[0] = Some((0..decl.ysize).collect());
            let mut remaining = group.order() - 1;
            while remaining > 0 {
                let mut progressed = false;
                for g in 1..group.order() {
                    if perms[g].is_some() {
                        continue;
                    }
                    let (prev, gi) = decomp[g].expect("generated");
                    if let Some(prev_p) = perms[prev].clone() {
                        let gen_p = &entries[gi].1;
                        perms[g] = Some((0..decl.ysize).map(|x| prev_p[gen_p[x]]).collect());
                        remaining -= 1;
                        progressed = true;
                    }
                }
                if !progressed {
                    bail!("datum {id}: could not extend Y action");
                }
            }
            Ok(perms.into_iter().map(|p| p.unwrap()).collect())
        };
        let y_hq = SetAction::new(
            hq_action.module.clone(),
            decl.ysize,
            build_perms(&decl.yh, &hq_action.module)?,
        )?;
        let y_gamma = SetAction::new(
            hq_action.gamma.clone(),
            decl.ysize,
            build_perms(&decl.ygamma, &hq_action.gamma)?,
        )?;
        Ok(ToyShimuraDatum::new(hq_action, ha_action, embed, y_hq, y_gamma, k)?)
    }

    /// Case ids of a suite, in id order.
    pub fn cases_for(&self, suite: &str) -> Vec<(String, CaseDecl)> {
        self.cases
            .iter()
            .filter(|(_, c)| c.suite == suite)
            .map(|(id, c)| (id.clone(), c.clone()))
            .collect()
    }

    pub fn expects_fail(&self, case_id: &str) -> bool {
        self.expect_fail.contains_key(case_id)
    }
}
