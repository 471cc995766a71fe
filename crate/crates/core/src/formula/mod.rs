//! Formula representation, parsing, printing, and structural queries.

mod parser;
mod printer;

pub use parser::{parse, ParseError};

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

/// A propositional variable, possibly a starred twin such as `p_star`.
///
/// Starred variables are the fresh atoms introduced by the literal-renaming
/// translation; they are never unified with their base variable.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    pub name: String,
    pub starred: bool,
}

impl Var {
    pub fn plain(name: impl Into<String>) -> Var {
        Var { name: name.into(), starred: false }
    }

    pub fn starred(name: impl Into<String>) -> Var {
        Var { name: name.into(), starred: true }
    }

    pub fn star_of(&self) -> Var {
        Var { name: self.name.clone(), starred: true }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.starred {
            write!(f, "{}_star", self.name)
        } else {
            write!(f, "{}", self.name)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModalShape {
    Box,
    Diamond,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModalFamily {
    /// `[]` / `<>`: truth support and falsity support aggregate dually.
    Standard,
    /// `[#]` / `<#>`: both supports aggregate the same way.
    Informational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModalPolarity {
    Plain,
    /// `[^]` / `<^>`: the relation roles of the two support tracks are swapped.
    Overline,
}

/// Relation index for the two-relation single-valuation language.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RelIndex {
    One,
    Two,
}

/// Which modality: shape + family + polarity + optional relation index.
///
/// Indexed descriptors are always standard and plain; the constructor upholds
/// this.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModalOp {
    pub shape: ModalShape,
    pub family: ModalFamily,
    pub polarity: ModalPolarity,
    pub index: Option<RelIndex>,
}

impl ModalOp {
    pub fn standard(shape: ModalShape) -> ModalOp {
        ModalOp {
            shape,
            family: ModalFamily::Standard,
            polarity: ModalPolarity::Plain,
            index: None,
        }
    }

    pub fn overline(shape: ModalShape) -> ModalOp {
        ModalOp { polarity: ModalPolarity::Overline, ..ModalOp::standard(shape) }
    }

    pub fn informational(shape: ModalShape) -> ModalOp {
        ModalOp { family: ModalFamily::Informational, ..ModalOp::standard(shape) }
    }

    pub fn informational_overline(shape: ModalShape) -> ModalOp {
        ModalOp {
            family: ModalFamily::Informational,
            polarity: ModalPolarity::Overline,
            ..ModalOp::standard(shape)
        }
    }

    pub fn indexed(shape: ModalShape, index: RelIndex) -> ModalOp {
        ModalOp { index: Some(index), ..ModalOp::standard(shape) }
    }

    pub const BOX: ModalOp = ModalOp {
        shape: ModalShape::Box,
        family: ModalFamily::Standard,
        polarity: ModalPolarity::Plain,
        index: None,
    };

    pub const DIAMOND: ModalOp = ModalOp {
        shape: ModalShape::Diamond,
        family: ModalFamily::Standard,
        polarity: ModalPolarity::Plain,
        index: None,
    };

    pub fn is_standard_plain(&self) -> bool {
        self.family == ModalFamily::Standard
            && self.polarity == ModalPolarity::Plain
            && self.index.is_none()
    }
}

/// AST of all the formula languages handled by the toolkit.
///
/// The constants `0`, `1`, and `B` are primitive nodes rather than
/// abbreviations, so they introduce no spurious variables.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Var(Var),
    Zero,
    One,
    BConst,
    /// Gödel negation `~`.
    StrongNeg(Box<Formula>),
    /// De Morgan negation `neg`.
    DeMorganNeg(Box<Formula>),
    /// Baaz Delta `tri`.
    Delta(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    /// Gödel implication `->`.
    Impl(Box<Formula>, Box<Formula>),
    /// Coimplication `-<`.
    Coimpl(Box<Formula>, Box<Formula>),
    Modal(ModalOp, Box<Formula>),
}

impl Formula {
    pub fn var(name: impl Into<String>) -> Formula {
        Formula::Var(Var::plain(name))
    }

    pub fn star_var(name: impl Into<String>) -> Formula {
        Formula::Var(Var::starred(name))
    }

    pub fn strong_neg(f: Formula) -> Formula {
        Formula::StrongNeg(Box::new(f))
    }

    pub fn de_morgan_neg(f: Formula) -> Formula {
        Formula::DeMorganNeg(Box::new(f))
    }

    pub fn delta(f: Formula) -> Formula {
        Formula::Delta(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn impl_(a: Formula, b: Formula) -> Formula {
        Formula::Impl(Box::new(a), Box::new(b))
    }

    pub fn coimpl(a: Formula, b: Formula) -> Formula {
        Formula::Coimpl(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(Formula::impl_(a.clone(), b.clone()), Formula::impl_(b, a))
    }

    pub fn modal(op: ModalOp, f: Formula) -> Formula {
        Formula::Modal(op, Box::new(f))
    }

    pub fn boxed(f: Formula) -> Formula {
        Formula::modal(ModalOp::BOX, f)
    }

    pub fn diamond(f: Formula) -> Formula {
        Formula::modal(ModalOp::DIAMOND, f)
    }

    /// `n`-fold application of a modality.
    pub fn modal_power(op: ModalOp, n: usize, f: Formula) -> Formula {
        let mut out = f;
        for _ in 0..n {
            out = Formula::modal(op, out);
        }
        out
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Var(_) | Formula::Zero | Formula::One | Formula::BConst => vec![],
            Formula::StrongNeg(a) | Formula::DeMorganNeg(a) | Formula::Delta(a) => vec![a],
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Impl(a, b)
            | Formula::Coimpl(a, b) => vec![a, b],
            Formula::Modal(_, a) => vec![a],
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    /// Deepest nesting of modal operators.
    pub fn modal_depth(&self) -> usize {
        let inner = self.children().iter().map(|c| c.modal_depth()).max().unwrap_or(0);
        match self {
            Formula::Modal(..) => inner + 1,
            _ => inner,
        }
    }

    /// The subformula set together with the constants `0` and `1`.
    pub fn subformulas01(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        out.insert(Formula::Zero);
        out.insert(Formula::One);
        fn walk(f: &Formula, out: &mut BTreeSet<Formula>) {
            out.insert(f.clone());
            for c in f.children() {
                walk(c, out);
            }
        }
        walk(self, &mut out);
        out
    }

    /// All variables, in sorted order.
    pub fn variables(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        fn walk(f: &Formula, out: &mut BTreeSet<Var>) {
            if let Formula::Var(v) = f {
                out.insert(v.clone());
            }
            for c in f.children() {
                walk(c, out);
            }
        }
        walk(self, &mut out);
        out
    }

    pub fn contains_de_morgan_neg(&self) -> bool {
        matches!(self, Formula::DeMorganNeg(_))
            || self.children().iter().any(|c| c.contains_de_morgan_neg())
    }

    pub fn contains_b(&self) -> bool {
        matches!(self, Formula::BConst) || self.children().iter().any(|c| c.contains_b())
    }

    fn modal_ops(&self) -> Vec<ModalOp> {
        let mut out = Vec::new();
        fn walk(f: &Formula, out: &mut Vec<ModalOp>) {
            if let Formula::Modal(op, _) = f {
                out.push(*op);
            }
            for c in f.children() {
                walk(c, out);
            }
        }
        walk(self, &mut out);
        out
    }

    /// Whether the single-valuation engines can evaluate this formula:
    /// no De Morgan negation and no informational modalities.
    pub fn is_single_evaluable(&self) -> bool {
        !self.contains_de_morgan_neg()
            && self.modal_ops().iter().all(|op| op.family == ModalFamily::Standard)
    }

    /// The least language of the grammar hierarchy containing this formula.
    pub fn language(&self) -> LanguageTag {
        let ops = self.modal_ops();
        let has_neg = self.contains_de_morgan_neg();
        let has_info = ops.iter().any(|op| op.family == ModalFamily::Informational);
        let has_std = ops.iter().any(|op| op.family == ModalFamily::Standard);
        let has_overline = ops.iter().any(|op| op.polarity == ModalPolarity::Overline);
        let has_index = ops.iter().any(|op| op.index.is_some());
        let base = match (has_std, has_info) {
            (true, true) => LangBase::Mixed,
            (false, false) => {
                if has_neg {
                    LangBase::NegProp
                } else {
                    LangBase::Prop
                }
            }
            (false, true) => {
                if has_overline {
                    LangBase::NegInfoBar
                } else {
                    LangBase::NegInfo
                }
            }
            (true, false) => {
                if has_index && (has_overline || has_neg) {
                    LangBase::Mixed
                } else if has_index {
                    LangBase::BoxDia2
                } else if has_overline {
                    LangBase::NegBoxDiaBar
                } else if has_neg {
                    LangBase::NegBoxDia
                } else {
                    LangBase::BoxDia
                }
            }
        };
        LanguageTag { base, with_b: self.contains_b() }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        printer::print_into(self, f)
    }
}

impl FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        parse(s)
    }
}

/// Core grammar a formula belongs to, before accounting for `B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LangBase {
    /// Propositional: `~`, `tri`, `&`, `|`, `->`, `-<`.
    Prop,
    /// Propositional plus `neg`; the meet of the two `neg`-languages.
    NegProp,
    /// Plus plain `[]` and `<>`.
    BoxDia,
    /// Plus indexed `[]1`, `[]2`, `<>1`, `<>2`.
    BoxDia2,
    /// Propositional plus `neg` and plain standard modalities.
    NegBoxDia,
    /// `NegBoxDia` plus the overline modalities.
    NegBoxDiaBar,
    /// Propositional plus `neg` and informational modalities.
    NegInfo,
    /// `NegInfo` plus the overline informational modalities.
    NegInfoBar,
    /// Not in any single grammar of the hierarchy.
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LanguageTag {
    pub base: LangBase,
    pub with_b: bool,
}

impl LanguageTag {
    /// Grammar inclusion order, with `Mixed` as the top element.
    pub fn le(&self, other: &LanguageTag) -> bool {
        if self.with_b && !other.with_b {
            return false;
        }
        use LangBase::*;
        if self.base == other.base || other.base == Mixed {
            return true;
        }
        match self.base {
            Prop => true,
            NegProp => matches!(other.base, NegBoxDia | NegBoxDiaBar | NegInfo | NegInfoBar),
            BoxDia => matches!(other.base, BoxDia2 | NegBoxDia | NegBoxDiaBar),
            NegBoxDia => matches!(other.base, NegBoxDiaBar),
            NegInfo => matches!(other.base, NegInfoBar),
            BoxDia2 | NegBoxDiaBar | NegInfoBar | Mixed => false,
        }
    }
}

impl fmt::Display for LanguageTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.base {
            LangBase::Prop => "L(tri)",
            LangBase::NegProp => "L(neg,tri)",
            LangBase::BoxDia => "L(tri,[],<>)",
            LangBase::BoxDia2 => "L(tri,[],<>)(2)",
            LangBase::NegBoxDia => "L(neg,tri,[],<>)",
            LangBase::NegBoxDiaBar => "L(neg,tri,[],<>)+bar",
            LangBase::NegInfo => "L(neg,tri,[#],<#>)",
            LangBase::NegInfoBar => "L(neg,tri,[#],<#>)+bar",
            LangBase::Mixed => "mixed",
        };
        write!(f, "{}{}", name, if self.with_b { "+B" } else { "" })
    }
}
