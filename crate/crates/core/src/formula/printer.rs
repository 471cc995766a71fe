//! Minimal-parenthesis ASCII printer; `parse(print(f)) == f`.

use super::{Formula, ModalFamily, ModalOp, ModalPolarity, ModalShape, RelIndex};
use std::fmt;

fn modal_token(op: &ModalOp) -> &'static str {
    use ModalFamily::*;
    use ModalPolarity::*;
    use ModalShape::*;
    match (op.shape, op.family, op.polarity, op.index) {
        (Box, Standard, Plain, None) => "[]",
        (Box, Standard, Plain, Some(RelIndex::One)) => "[]1",
        (Box, Standard, Plain, Some(RelIndex::Two)) => "[]2",
        (Box, Standard, Overline, None) => "[^]",
        (Box, Informational, Plain, None) => "[#]",
        (Box, Informational, Overline, None) => "[#^]",
        (Diamond, Standard, Plain, None) => "<>",
        (Diamond, Standard, Plain, Some(RelIndex::One)) => "<>1",
        (Diamond, Standard, Plain, Some(RelIndex::Two)) => "<>2",
        (Diamond, Standard, Overline, None) => "<^>",
        (Diamond, Informational, Plain, None) => "<#>",
        (Diamond, Informational, Overline, None) => "<#^>",
        _ => unreachable!("indexed modalities are standard and plain"),
    }
}

const PREC_ARROW: u8 = 1;
const PREC_OR: u8 = 2;
const PREC_AND: u8 = 3;
const PREC_UNARY: u8 = 4;

fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Impl(..) | Formula::Coimpl(..) => PREC_ARROW,
        Formula::Or(..) => PREC_OR,
        Formula::And(..) => PREC_AND,
        _ => PREC_UNARY,
    }
}

/// Emits `tok` followed by the child, inserting a space only where the two
/// tokens would otherwise fuse into one. `[] 1` needs the space because
/// `[]1` is the indexed-box token.
fn unary(out: &mut String, tok: &str, child: &Formula) {
    out.push_str(tok);
    let mut rendered = String::new();
    emit(child, PREC_UNARY, &mut rendered);
    let fuse = (tok.ends_with(|c: char| c.is_ascii_alphanumeric())
        && rendered.starts_with(|c: char| c.is_ascii_alphanumeric()))
        || (tok.ends_with([']', '>']) && rendered.starts_with(|c: char| c.is_ascii_digit()));
    if fuse {
        out.push(' ');
    }
    out.push_str(&rendered);
}

fn emit(f: &Formula, min_prec: u8, out: &mut String) {
    if prec(f) < min_prec {
        out.push('(');
        emit(f, 0, out);
        out.push(')');
        return;
    }
    match f {
        Formula::Var(v) => out.push_str(&v.to_string()),
        Formula::Zero => out.push('0'),
        Formula::One => out.push('1'),
        Formula::BConst => out.push('B'),
        Formula::StrongNeg(a) => unary(out, "~", a),
        Formula::DeMorganNeg(a) => unary(out, "neg", a),
        Formula::Delta(a) => unary(out, "tri", a),
        Formula::Modal(op, a) => unary(out, modal_token(op), a),
        Formula::And(a, b) => {
            emit(a, PREC_AND, out);
            out.push_str(" & ");
            emit(b, PREC_AND + 1, out);
        }
        Formula::Or(a, b) => {
            emit(a, PREC_OR, out);
            out.push_str(" | ");
            emit(b, PREC_OR + 1, out);
        }
        Formula::Impl(a, b) => {
            emit(a, PREC_ARROW + 1, out);
            out.push_str(" -> ");
            // right-associative: a bare implication chain may continue
            if matches!(**b, Formula::Impl(..)) {
                emit(b, PREC_ARROW, out);
            } else {
                emit(b, PREC_ARROW + 1, out);
            }
        }
        Formula::Coimpl(a, b) => {
            // left-associative
            if matches!(**a, Formula::Coimpl(..)) {
                emit(a, PREC_ARROW, out);
            } else {
                emit(a, PREC_ARROW + 1, out);
            }
            out.push_str(" -< ");
            emit(b, PREC_ARROW + 1, out);
        }
    }
}

pub(super) fn print_into(f: &Formula, w: &mut fmt::Formatter<'_>) -> fmt::Result {
    let mut out = String::new();
    emit(f, 0, &mut out);
    w.write_str(&out)
}
