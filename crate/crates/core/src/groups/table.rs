use crate::text::{self, FormatError, Lines};

use super::GroupError;

/// Largest order accepted from a table file.
pub const MAX_TABLE_ORDER: usize = 1024;

/// Full associativity is checked up to this order; above it Light's test
/// over a generating set is used.
const FULL_ASSOCIATIVITY_ORDER: usize = 64;

/// A finite group on `0..order` with identity `0`.
pub trait FiniteGroup {
    fn order(&self) -> usize;
    fn mul(&self, a: usize, b: usize) -> usize;
    fn inv(&self, a: usize) -> usize;

    fn label(&self, a: usize) -> String {
        a.to_string()
    }

    fn pow(&self, a: usize, mut e: usize) -> usize {
        let mut acc = 0;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut n = 1;
        while x != 0 {
            x = self.mul(x, a);
            n += 1;
        }
        n
    }
}

/// A group given by its multiplication table, with optional labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableGroup {
    order: usize,
    table: Vec<u32>,
    inverses: Vec<u32>,
    labels: Option<Vec<String>>,
}

impl FiniteGroup for TableGroup {
    fn order(&self) -> usize {
        self.order
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    fn inv(&self, a: usize) -> usize {
        self.inverses[a] as usize
    }

    fn label(&self, a: usize) -> String {
        match &self.labels {
            Some(l) => l[a].clone(),
            None => a.to_string(),
        }
    }
}

impl TableGroup {
    /// Validates a row-major table: closure, identity `0`, inverses and
    /// associativity.
    pub fn from_table(order: usize, table: Vec<u32>) -> Result<Self, GroupError> {
        if order == 0 {
            return Err(GroupError::Invalid("order must be positive".into()));
        }
        if table.len() != order * order {
            return Err(GroupError::Invalid("table size does not match order".into()));
        }
        if table.iter().any(|&x| x as usize >= order) {
            return Err(GroupError::Invalid("table entry out of range".into()));
        }
        for a in 0..order {
            if table[a] as usize != a || table[a * order] as usize != a {
                return Err(GroupError::Invalid("0 is not the identity".into()));
            }
        }
        // Latin square rows give unique solvability, hence inverses.
        for a in 0..order {
            let mut seen = vec![false; order];
            for b in 0..order {
                let x = table[a * order + b] as usize;
                if std::mem::replace(&mut seen[x], true) {
                    return Err(GroupError::Invalid(format!("row {a} repeats an element")));
                }
            }
        }
        let mut inverses = vec![0u32; order];
        for a in 0..order {
            let b = (0..order).find(|&b| table[a * order + b] == 0).expect("latin row contains 0");
            if table[b * order + a] != 0 {
                return Err(GroupError::Invalid(format!("left and right inverse of {a} differ")));
            }
            inverses[a] = b as u32;
        }
        let g = TableGroup { order, table, inverses, labels: None };
        g.check_associative()?;
        Ok(g)
    }

    /// Builds the table of any finite group implementation.
    pub fn from_group<G: FiniteGroup + ?Sized>(g: &G) -> Self {
        let order = g.order();
        let mut table = Vec::with_capacity(order * order);
        for a in 0..order {
            for b in 0..order {
                table.push(g.mul(a, b) as u32);
            }
        }
        let inverses = (0..order).map(|a| g.inv(a) as u32).collect();
        TableGroup { order, table, inverses, labels: None }
    }

    fn check_associative(&self) -> Result<(), GroupError> {
        let n = self.order;
        let gens: Vec<usize> =
            if n <= FULL_ASSOCIATIVITY_ORDER { (0..n).collect() } else { super::series::generating_set(self) };
        // (x g) y = x (g y) for all x, y and g in a generating set.
        for &g in &gens {
            for x in 0..n {
                let xg = self.mul(x, g);
                for y in 0..n {
                    if self.mul(xg, y) != self.mul(x, self.mul(g, y)) {
                        return Err(GroupError::Invalid(format!("not associative at ({x}, {g}, {y})")));
                    }
                }
            }
        }
        // Light's test is only conclusive if the generating set really
        // generates under the table's product.
        if super::series::closure(self, &gens).len() != n {
            return Err(GroupError::Invalid("generating set does not generate".into()));
        }
        Ok(())
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, GroupError> {
        if labels.len() != self.order {
            return Err(GroupError::Invalid("label count does not match order".into()));
        }
        let mut sorted = labels.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != labels.len() {
            return Err(GroupError::Invalid("labels are not distinct".into()));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Element by label, or by decimal index.
    pub fn element(&self, name: &str) -> Option<usize> {
        if let Some(i) = self.labels.as_ref().and_then(|l| l.iter().position(|x| x == name)) {
            return Some(i);
        }
        text::parse_dec::<usize>(name).ok().filter(|&i| i < self.order)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// `order=<dec>` followed by one row of space-separated indices per
    /// element.
    pub fn to_text(&self) -> String {
        let mut out = format!("order={}\n", self.order);
        for a in 0..self.order {
            let row: Vec<String> = (0..self.order).map(|b| self.mul(a, b).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(s: &str) -> Result<Self, GroupError> {
        let mut lines = Lines::new(s);
        let (no, order) = lines.expect_kv("order")?;
        let order: usize = text::parse_dec(order).map_err(|_| FormatError::syntax(no, "bad order"))?;
        if order == 0 || order > MAX_TABLE_ORDER {
            return Err(GroupError::Invalid(format!("order must be in 1..={MAX_TABLE_ORDER}")));
        }
        let mut table = Vec::with_capacity(order * order);
        for _ in 0..order {
            let (no, row) = lines.next_line("table row")?;
            let start = table.len();
            for tok in row.split(' ') {
                let v: u32 = text::parse_dec(tok).map_err(|_| FormatError::syntax(no, "bad entry"))?;
                table.push(v);
            }
            if table.len() - start != order {
                return Err(FormatError::syntax(no, format!("expected {order} entries")).into());
            }
        }
        if !lines.is_done() {
            return Err(FormatError::syntax(lines.line_no(), "trailing data").into());
        }
        TableGroup::from_table(order, table)
    }
}
