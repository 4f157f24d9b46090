//! Netlist representation and its line-oriented text format.
//!
//! A netlist is an ordered list of ports and elements wired between named
//! nodes; node `0` is ground. The text grammar is one item per line:
//!
//! ```text
//! # comment
//! PORT      <name> <node> 0                Z0=<ohms (optional, default 50)>
//! RES       <name> <node> <node>           R=<ohms>
//! CAP       <name> <node> <node>           C=<farads>
//! IND       <name> <node> <node>           L=<henries>
//! TLINE     <name> <node> <node>           Z0=<ohms> EL=<degrees> F0=<hz>
//! CLINE     <name> <l1> <l2> <r1> <r2>     ZE=<ohms> ZO=<ohms> EL=<degrees> F0=<hz>
//! OPENSTUB  <name> <node>                  Z0=<ohms> EL=<degrees> F0=<hz>
//! SHORTSTUB <name> <node>                  Z0=<ohms> EL=<degrees> F0=<hz>
//! ```
//!
//! Values accept the SI suffixes f, p, n, u, m, k, M, G (case-sensitive).
//! Electrical lengths are given in degrees at the reference frequency F0
//! and scale linearly with frequency. Ports are ground-referenced: the
//! second port node must be `0`.

use crate::error::{Error, Result};

/// Electrical behavior of a netlist element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ElementKind {
    Resistor {
        r: f64,
    },
    Capacitor {
        c: f64,
    },
    Inductor {
        l: f64,
    },
    TLine {
        z0: f64,
        el_deg: f64,
        f_ref: f64,
    },
    CoupledLine {
        z_even: f64,
        z_odd: f64,
        el_deg: f64,
        f_ref: f64,
    },
    OpenStub {
        z0: f64,
        el_deg: f64,
        f_ref: f64,
    },
    ShortStub {
        z0: f64,
        el_deg: f64,
        f_ref: f64,
    },
}

impl ElementKind {
    /// Number of nodes the element connects.
    pub fn node_count(&self) -> usize {
        match self {
            ElementKind::Resistor { .. }
            | ElementKind::Capacitor { .. }
            | ElementKind::Inductor { .. }
            | ElementKind::TLine { .. } => 2,
            ElementKind::CoupledLine { .. } => 4,
            ElementKind::OpenStub { .. } | ElementKind::ShortStub { .. } => 1,
        }
    }

    fn keyword(&self) -> &'static str {
        match self {
            ElementKind::Resistor { .. } => "RES",
            ElementKind::Capacitor { .. } => "CAP",
            ElementKind::Inductor { .. } => "IND",
            ElementKind::TLine { .. } => "TLINE",
            ElementKind::CoupledLine { .. } => "CLINE",
            ElementKind::OpenStub { .. } => "OPENSTUB",
            ElementKind::ShortStub { .. } => "SHORTSTUB",
        }
    }

    fn validate(&self) -> Result<()> {
        let check = |name: &str, v: f64| -> Result<()> {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::invalid(format!("{name} must be positive, got {v}")));
            }
            Ok(())
        };
        match *self {
            ElementKind::Resistor { r } => check("R", r),
            ElementKind::Capacitor { c } => check("C", c),
            ElementKind::Inductor { l } => check("L", l),
            ElementKind::TLine { z0, el_deg, f_ref }
            | ElementKind::OpenStub { z0, el_deg, f_ref }
            | ElementKind::ShortStub { z0, el_deg, f_ref } => {
                check("Z0", z0)?;
                check("EL", el_deg)?;
                check("F0", f_ref)
            }
            ElementKind::CoupledLine {
                z_even,
                z_odd,
                el_deg,
                f_ref,
            } => {
                check("ZE", z_even)?;
                check("ZO", z_odd)?;
                check("EL", el_deg)?;
                check("F0", f_ref)
            }
        }
    }
}

/// A named element wired to a list of nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    name: String,
    kind: ElementKind,
    nodes: Vec<String>,
}

impl Element {
    pub fn new(name: impl Into<String>, kind: ElementKind, nodes: Vec<String>) -> Result<Self> {
        let name = name.into();
        if name.is_empty() || name.contains(['=', '#']) || name.contains(char::is_whitespace) {
            return Err(Error::invalid(format!("bad element name '{name}'")));
        }
        kind.validate()?;
        if nodes.len() != kind.node_count() {
            return Err(Error::invalid(format!(
                "element '{name}' needs {} node(s), got {}",
                kind.node_count(),
                nodes.len()
            )));
        }
        for n in &nodes {
            validate_node_name(n)?;
        }
        Ok(Element { name, kind, nodes })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> ElementKind {
        self.kind
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }
}

/// A ground-referenced measurement/drive port attached to one node.
#[derive(Debug, Clone, PartialEq)]
pub struct Port {
    name: String,
    node: String,
    z0: f64,
}

impl Port {
    pub fn new(name: impl Into<String>, node: impl Into<String>, z0: f64) -> Result<Self> {
        let name = name.into();
        let node = node.into();
        if name.is_empty() || name.contains(['=', '#']) || name.contains(char::is_whitespace) {
            return Err(Error::invalid(format!("bad port name '{name}'")));
        }
        validate_node_name(&node)?;
        if node == "0" {
            return Err(Error::invalid(format!(
                "port '{name}' must attach to a non-ground node"
            )));
        }
        if !(z0 > 0.0) || !z0.is_finite() {
            return Err(Error::invalid(format!(
                "port '{name}' reference impedance must be positive, got {z0}"
            )));
        }
        Ok(Port { name, node, z0 })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn node(&self) -> &str {
        &self.node
    }

    pub fn z0(&self) -> f64 {
        self.z0
    }
}

fn validate_node_name(n: &str) -> Result<()> {
    if n.is_empty() || n.contains(['=', '#']) || n.contains(char::is_whitespace) {
        return Err(Error::invalid(format!("bad node name '{n}'")));
    }
    Ok(())
}

/// One line of a netlist, in file order.
#[derive(Debug, Clone, PartialEq)]
pub enum Item {
    Port(Port),
    Element(Element),
}

/// An immutable, validated circuit description.
#[derive(Debug, Clone)]
pub struct Netlist {
    items: Vec<Item>,
    /// Non-ground nodes in order of first appearance.
    node_order: Vec<String>,
}

impl PartialEq for Netlist {
    fn eq(&self, other: &Self) -> bool {
        self.items == other.items
    }
}

impl Netlist {
    /// Validate and index a list of items.
    ///
    /// Checks: unique names, every port node touched by at least one
    /// element, and full connectivity to ground through the element graph.
    pub fn new(items: Vec<Item>) -> Result<Self> {
        let mut names: Vec<&str> = Vec::new();
        for item in &items {
            let name = match item {
                Item::Port(p) => p.name(),
                Item::Element(e) => e.name(),
            };
            if names.contains(&name) {
                return Err(Error::DuplicateName {
                    name: name.to_string(),
                });
            }
            names.push(name);
        }

        let mut node_order: Vec<String> = Vec::new();
        let mut note = |n: &str| {
            if n != "0" && !node_order.iter().any(|x| x == n) {
                node_order.push(n.to_string());
            }
        };
        for item in &items {
            match item {
                Item::Port(p) => note(p.node()),
                Item::Element(e) => e.nodes().iter().for_each(|n| note(n)),
            }
        }

        // Port nodes must belong to the element graph.
        for item in &items {
            if let Item::Port(p) = item {
                let touched = items.iter().any(|it| match it {
                    Item::Element(e) => e.nodes().iter().any(|n| n == p.node()),
                    Item::Port(_) => false,
                });
                if !touched {
                    return Err(Error::UnknownNode {
                        name: p.node().to_string(),
                    });
                }
            }
        }

        // Connectivity to ground: union-find over ground + named nodes,
        // merging every element's node set (stubs and ports tie to ground).
        let idx_of = |n: &str| -> usize {
            if n == "0" {
                0
            } else {
                1 + node_order.iter().position(|x| x == n).unwrap()
            }
        };
        let mut parent: Vec<usize> = (0..=node_order.len()).collect();
        fn find(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        let union = |parent: &mut [usize], a: usize, b: usize| {
            let (ra, rb) = (find(parent, a), find(parent, b));
            parent[ra] = rb;
        };
        for item in &items {
            match item {
                Item::Port(p) => union(&mut parent, idx_of(p.node()), 0),
                Item::Element(e) => {
                    let first = idx_of(&e.nodes()[0]);
                    for n in e.nodes().iter().skip(1) {
                        union(&mut parent, idx_of(n), first);
                    }
                    if matches!(
                        e.kind(),
                        ElementKind::OpenStub { .. } | ElementKind::ShortStub { .. }
                    ) {
                        union(&mut parent, first, 0);
                    }
                }
            }
        }
        let ground_root = find(&mut parent, 0);
        for (i, name) in node_order.iter().enumerate() {
            if find(&mut parent, i + 1) != ground_root {
                return Err(Error::Parse {
                    line: 0,
                    col: 0,
                    message: format!("node '{name}' is not connected to ground"),
                });
            }
        }

        Ok(Netlist { items, node_order })
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn elements(&self) -> impl Iterator<Item = &Element> {
        self.items.iter().filter_map(|it| match it {
            Item::Element(e) => Some(e),
            Item::Port(_) => None,
        })
    }

    pub fn ports(&self) -> impl Iterator<Item = &Port> {
        self.items.iter().filter_map(|it| match it {
            Item::Port(p) => Some(p),
            Item::Element(_) => None,
        })
    }

    pub fn port_count(&self) -> usize {
        self.ports().count()
    }

    /// Index of the named port in port order.
    pub fn port_index(&self, name: &str) -> Option<usize> {
        self.ports().position(|p| p.name() == name)
    }

    /// Number of non-ground nodes.
    pub fn node_count(&self) -> usize {
        self.node_order.len()
    }

    /// Matrix index of a non-ground node; `None` for ground or unknown.
    pub fn node_index(&self, name: &str) -> Option<usize> {
        self.node_order.iter().position(|x| x == name)
    }

    pub fn node_name(&self, index: usize) -> &str {
        &self.node_order[index]
    }

    /// Canonical text form; `parse_netlist(render())` reproduces the
    /// netlist exactly (floats print with round-trip precision).
    pub fn render(&self) -> String {
        let mut out = String::new();
        for item in &self.items {
            match item {
                Item::Port(p) => {
                    out.push_str(&format!(
                        "PORT {} {} 0 Z0={:e}\n",
                        p.name(),
                        p.node(),
                        p.z0()
                    ));
                }
                Item::Element(e) => {
                    out.push_str(e.kind().keyword());
                    out.push(' ');
                    out.push_str(e.name());
                    for n in e.nodes() {
                        out.push(' ');
                        out.push_str(n);
                    }
                    match e.kind() {
                        ElementKind::Resistor { r } => out.push_str(&format!(" R={r:e}")),
                        ElementKind::Capacitor { c } => out.push_str(&format!(" C={c:e}")),
                        ElementKind::Inductor { l } => out.push_str(&format!(" L={l:e}")),
                        ElementKind::TLine { z0, el_deg, f_ref }
                        | ElementKind::OpenStub { z0, el_deg, f_ref }
                        | ElementKind::ShortStub { z0, el_deg, f_ref } => {
                            out.push_str(&format!(" Z0={z0:e} EL={el_deg:e} F0={f_ref:e}"));
                        }
                        ElementKind::CoupledLine {
                            z_even,
                            z_odd,
                            el_deg,
                            f_ref,
                        } => {
                            out.push_str(&format!(
                                " ZE={z_even:e} ZO={z_odd:e} EL={el_deg:e} F0={f_ref:e}"
                            ));
                        }
                    }
                    out.push('\n');
                }
            }
        }
        out
    }
}

/// Multiplier for a case-sensitive SI suffix character.
fn si_multiplier(c: char) -> Option<f64> {
    Some(match c {
        'f' => 1e-15,
        'p' => 1e-12,
        'n' => 1e-9,
        'u' => 1e-6,
        'm' => 1e-3,
        'k' => 1e3,
        'M' => 1e6,
        'G' => 1e9,
        _ => return None,
    })
}

/// Parse a numeric value with an optional SI suffix.
fn parse_value(tok: &str) -> Option<f64> {
    let suffixed = tok
        .chars()
        .last()
        .and_then(si_multiplier)
        .and_then(|mult| tok[..tok.len() - 1].parse::<f64>().ok().map(|v| v * mult));
    suffixed
        .or_else(|| tok.parse::<f64>().ok())
        .filter(|v| v.is_finite())
}

struct Token<'a> {
    text: &'a str,
    col: usize,
}

fn err(line: usize, col: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        col,
        message: message.into(),
    }
}

/// Parse netlist text into a validated [`Netlist`].
pub fn parse_netlist(text: &str) -> Result<Netlist> {
    let mut items = Vec::new();
    let mut seen_names: Vec<String> = Vec::new();
    for (line_no, raw) in text.lines().enumerate() {
        let line_no = line_no + 1;
        let body = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let tokens: Vec<Token> = body
            .char_indices()
            .fold((Vec::new(), true), |(mut acc, prev_ws), (i, ch)| {
                let ws = ch.is_whitespace();
                if !ws && prev_ws {
                    acc.push(Token {
                        text: &body[i..i + 1],
                        col: i + 1,
                    });
                } else if !ws {
                    let last = acc.last_mut().unwrap();
                    let start = last.col - 1;
                    last.text = &body[start..i + ch.len_utf8()];
                }
                (acc, ws)
            })
            .0;
        if tokens.is_empty() {
            continue;
        }
        let end_col = body.len() + 1;

        let kind_tok = &tokens[0];
        let (node_count, required, optional): (usize, &[&str], &[&str]) = match kind_tok.text {
            "PORT" => (2, &[], &["Z0"]),
            "RES" => (2, &["R"], &[]),
            "CAP" => (2, &["C"], &[]),
            "IND" => (2, &["L"], &[]),
            "TLINE" => (2, &["Z0", "EL", "F0"], &[]),
            "CLINE" => (4, &["ZE", "ZO", "EL", "F0"], &[]),
            "OPENSTUB" | "SHORTSTUB" => (1, &["Z0", "EL", "F0"], &[]),
            other => {
                return Err(err(
                    line_no,
                    kind_tok.col,
                    format!("unknown element kind '{other}'"),
                ))
            }
        };

        let positional = 1 + 1 + node_count; // kind, name, nodes
        if tokens.len() < positional {
            return Err(err(
                line_no,
                end_col,
                format!(
                    "{} expects a name and {} node(s)",
                    kind_tok.text, node_count
                ),
            ));
        }
        let name_tok = &tokens[1];
        if name_tok.text.contains('=') {
            return Err(err(
                line_no,
                name_tok.col,
                "expected a name, found KEY=VALUE",
            ));
        }
        if seen_names.iter().any(|n| n == name_tok.text) {
            return Err(err(
                line_no,
                name_tok.col,
                format!("duplicate name '{}'", name_tok.text),
            ));
        }
        let nodes: Vec<String> = tokens[2..positional]
            .iter()
            .map(|t| {
                if t.text.contains('=') {
                    Err(err(line_no, t.col, "expected a node name, found KEY=VALUE"))
                } else {
                    Ok(t.text.to_string())
                }
            })
            .collect::<Result<_>>()?;

        let mut values: Vec<(&str, f64)> = Vec::new();
        for t in &tokens[positional..] {
            let Some(eq) = t.text.find('=') else {
                return Err(err(
                    line_no,
                    t.col,
                    format!("expected KEY=VALUE, found '{}'", t.text),
                ));
            };
            let key = &t.text[..eq];
            let val_text = &t.text[eq + 1..];
            if !required.contains(&key) && !optional.contains(&key) {
                return Err(err(
                    line_no,
                    t.col,
                    format!("unknown key '{key}' for {}", kind_tok.text),
                ));
            }
            if values.iter().any(|(k, _)| *k == key) {
                return Err(err(line_no, t.col, format!("duplicate key '{key}'")));
            }
            let Some(v) = parse_value(val_text) else {
                return Err(err(
                    line_no,
                    t.col + eq + 1,
                    format!("cannot parse value '{val_text}'"),
                ));
            };
            values.push((key, v));
        }
        for k in required {
            if !values.iter().any(|(key, _)| key == k) {
                return Err(err(line_no, end_col, format!("missing required key '{k}'")));
            }
        }
        let get = |k: &str| values.iter().find(|(key, _)| *key == k).map(|(_, v)| *v);

        let item = if kind_tok.text == "PORT" {
            if nodes[1] != "0" {
                return Err(err(
                    line_no,
                    tokens[3].col,
                    "ports are ground-referenced; the second port node must be '0'",
                ));
            }
            Item::Port(
                Port::new(name_tok.text, nodes[0].clone(), get("Z0").unwrap_or(50.0))
                    .map_err(|e| err(line_no, kind_tok.col, e.to_string()))?,
            )
        } else {
            let kind = match kind_tok.text {
                "RES" => ElementKind::Resistor {
                    r: get("R").unwrap(),
                },
                "CAP" => ElementKind::Capacitor {
                    c: get("C").unwrap(),
                },
                "IND" => ElementKind::Inductor {
                    l: get("L").unwrap(),
                },
                "TLINE" => ElementKind::TLine {
                    z0: get("Z0").unwrap(),
                    el_deg: get("EL").unwrap(),
                    f_ref: get("F0").unwrap(),
                },
                "CLINE" => ElementKind::CoupledLine {
                    z_even: get("ZE").unwrap(),
                    z_odd: get("ZO").unwrap(),
                    el_deg: get("EL").unwrap(),
                    f_ref: get("F0").unwrap(),
                },
                "OPENSTUB" => ElementKind::OpenStub {
                    z0: get("Z0").unwrap(),
                    el_deg: get("EL").unwrap(),
                    f_ref: get("F0").unwrap(),
                },
                "SHORTSTUB" => ElementKind::ShortStub {
                    z0: get("Z0").unwrap(),
                    el_deg: get("EL").unwrap(),
                    f_ref: get("F0").unwrap(),
                },
                _ => unreachable!(),
            };
            Item::Element(
                Element::new(name_tok.text, kind, nodes)
                    .map_err(|e| err(line_no, kind_tok.col, e.to_string()))?,
            )
        };
        seen_names.push(name_tok.text.to_string());
        items.push(item);
    }
    Netlist::new(items)
}
