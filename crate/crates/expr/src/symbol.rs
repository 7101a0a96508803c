use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::SymbolError;
use crate::poly::Kernel;

/// An interned symbol name. Ordering is lexicographic on the name.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Self {
        Symbol(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Assumption {
    Nonzero,
    Positive,
}

impl Assumption {
    pub fn as_str(self) -> &'static str {
        match self {
            Assumption::Nonzero => "nonzero",
            Assumption::Positive => "positive",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "nonzero" => Some(Assumption::Nonzero),
            "positive" => Some(Assumption::Positive),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymbolKind {
    Coordinate,
    Parameter,
}

/// Ordered coordinates (index 1..n follows declaration order), parameters,
/// and per-symbol assumptions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolTable {
    coordinates: Vec<Symbol>,
    parameters: Vec<Symbol>,
    assumptions: BTreeMap<Symbol, Assumption>,
}

fn valid_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl SymbolTable {
    pub fn new<S: AsRef<str>>(coordinates: &[S], parameters: &[S]) -> Result<Self, SymbolError> {
        let mut table = SymbolTable {
            coordinates: Vec::new(),
            parameters: Vec::new(),
            assumptions: BTreeMap::new(),
        };
        for c in coordinates {
            table.push(c.as_ref(), SymbolKind::Coordinate)?;
        }
        for p in parameters {
            table.push(p.as_ref(), SymbolKind::Parameter)?;
        }
        Ok(table)
    }

    fn push(&mut self, name: &str, kind: SymbolKind) -> Result<(), SymbolError> {
        if !valid_identifier(name) {
            return Err(SymbolError::InvalidName(name.to_string()));
        }
        if Kernel::from_name(name).is_some() {
            return Err(SymbolError::ReservedName(name.to_string()));
        }
        if self.lookup(name).is_some() {
            return Err(SymbolError::Duplicate(name.to_string()));
        }
        let sym = Symbol::new(name);
        match kind {
            SymbolKind::Coordinate => self.coordinates.push(sym),
            SymbolKind::Parameter => self.parameters.push(sym),
        }
        Ok(())
    }

    pub fn add_parameter(&mut self, name: &str) -> Result<Symbol, SymbolError> {
        self.push(name, SymbolKind::Parameter)?;
        Ok(Symbol::new(name))
    }

    pub fn assume(&mut self, name: &str, assumption: Assumption) -> Result<(), SymbolError> {
        let sym = self
            .lookup(name)
            .ok_or_else(|| SymbolError::Unknown(name.to_string()))?;
        self.assumptions.insert(sym, assumption);
        Ok(())
    }

    pub fn with_assumption(mut self, name: &str, assumption: Assumption) -> Result<Self, SymbolError> {
        self.assume(name, assumption)?;
        Ok(self)
    }

    pub fn coordinates(&self) -> &[Symbol] {
        &self.coordinates
    }

    pub fn parameters(&self) -> &[Symbol] {
        &self.parameters
    }

    pub fn dimension(&self) -> usize {
        self.coordinates.len()
    }

    pub fn lookup(&self, name: &str) -> Option<Symbol> {
        self.coordinates
            .iter()
            .chain(self.parameters.iter())
            .find(|s| s.name() == name)
            .cloned()
    }

    pub fn kind(&self, sym: &Symbol) -> Option<SymbolKind> {
        if self.coordinates.contains(sym) {
            Some(SymbolKind::Coordinate)
        } else if self.parameters.contains(sym) {
            Some(SymbolKind::Parameter)
        } else {
            None
        }
    }

    pub fn coordinate_index(&self, sym: &Symbol) -> Option<usize> {
        self.coordinates.iter().position(|s| s == sym)
    }

    pub fn assumption(&self, sym: &Symbol) -> Option<Assumption> {
        self.assumptions.get(sym).copied()
    }

    pub fn assumptions(&self) -> &BTreeMap<Symbol, Assumption> {
        &self.assumptions
    }

    /// All registered symbols, coordinates first.
    pub fn symbols(&self) -> impl Iterator<Item = &Symbol> {
        self.coordinates.iter().chain(self.parameters.iter())
    }

    pub fn contains(&self, sym: &Symbol) -> bool {
        self.kind(sym).is_some()
    }
}
