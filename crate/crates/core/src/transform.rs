//! Syntactic translations: negation normal form, the literal-renaming `*`
//! and dualizing `partial` pair, the modality-family renamings, and the
//! two-valued classical encoding.

use crate::formula::{Formula, ModalFamily, ModalOp, ModalPolarity, ModalShape, RelIndex, Var};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TransformError {
    #[error("indexed modalities cannot appear under `neg`")]
    IndexedUnderNeg,
    #[error("input is not in negation normal form")]
    NotNnf,
    #[error("input already contains starred variables")]
    StarredInput,
    #[error("`neg` must be eliminated (apply nnf and star first)")]
    NegPresent,
    #[error("expected a formula over {expected} modalities")]
    FamilyMismatch { expected: &'static str },
    #[error("formula is outside the {0} fragment")]
    FragmentViolation(&'static str),
}

/// Negation of a modal descriptor: polarity flips; standard modalities also
/// flip shape while informational ones keep it.
fn negate_modal(op: &ModalOp) -> Result<ModalOp, TransformError> {
    if op.index.is_some() {
        return Err(TransformError::IndexedUnderNeg);
    }
    let shape = match op.family {
        ModalFamily::Standard => match op.shape {
            ModalShape::Box => ModalShape::Diamond,
            ModalShape::Diamond => ModalShape::Box,
        },
        ModalFamily::Informational => op.shape,
    };
    let polarity = match op.polarity {
        ModalPolarity::Plain => ModalPolarity::Overline,
        ModalPolarity::Overline => ModalPolarity::Plain,
    };
    Ok(ModalOp { shape, family: op.family, polarity, index: None })
}

/// Pushes De Morgan negation down to variables.
///
/// The result is strongly equivalent to the input in twin evaluation, and
/// `neg` survives only directly above variables.
pub fn to_nnf(f: &Formula) -> Result<Formula, TransformError> {
    Ok(match f {
        Formula::DeMorganNeg(inner) => match &**inner {
            Formula::Var(_) => f.clone(),
            Formula::One => Formula::Zero,
            Formula::Zero => Formula::One,
            // B is its own negation: both supports are full.
            Formula::BConst => Formula::BConst,
            Formula::DeMorganNeg(a) => to_nnf(a)?,
            Formula::StrongNeg(a) => {
                Formula::coimpl(Formula::One, to_nnf(&Formula::de_morgan_neg((**a).clone()))?)
            }
            Formula::Delta(a) => Formula::strong_neg(Formula::strong_neg(to_nnf(
                &Formula::de_morgan_neg((**a).clone()),
            )?)),
            Formula::And(a, b) => Formula::or(
                to_nnf(&Formula::de_morgan_neg((**a).clone()))?,
                to_nnf(&Formula::de_morgan_neg((**b).clone()))?,
            ),
            Formula::Or(a, b) => Formula::and(
                to_nnf(&Formula::de_morgan_neg((**a).clone()))?,
                to_nnf(&Formula::de_morgan_neg((**b).clone()))?,
            ),
            Formula::Impl(a, b) => Formula::coimpl(
                to_nnf(&Formula::de_morgan_neg((**b).clone()))?,
                to_nnf(&Formula::de_morgan_neg((**a).clone()))?,
            ),
            Formula::Coimpl(a, b) => Formula::impl_(
                to_nnf(&Formula::de_morgan_neg((**b).clone()))?,
                to_nnf(&Formula::de_morgan_neg((**a).clone()))?,
            ),
            Formula::Modal(op, a) => Formula::modal(
                negate_modal(op)?,
                to_nnf(&Formula::de_morgan_neg((**a).clone()))?,
            ),
        },
        Formula::Var(_) | Formula::Zero | Formula::One | Formula::BConst => f.clone(),
        Formula::StrongNeg(a) => Formula::strong_neg(to_nnf(a)?),
        Formula::Delta(a) => Formula::delta(to_nnf(a)?),
        Formula::And(a, b) => Formula::and(to_nnf(a)?, to_nnf(b)?),
        Formula::Or(a, b) => Formula::or(to_nnf(a)?, to_nnf(b)?),
        Formula::Impl(a, b) => Formula::impl_(to_nnf(a)?, to_nnf(b)?),
        Formula::Coimpl(a, b) => Formula::coimpl(to_nnf(a)?, to_nnf(b)?),
        Formula::Modal(op, a) => Formula::modal(*op, to_nnf(a)?),
    })
}

/// Whether `neg` occurs only directly above variables.
pub fn is_nnf(f: &Formula) -> bool {
    match f {
        Formula::DeMorganNeg(a) => matches!(**a, Formula::Var(_)),
        _ => f.children().iter().all(|c| is_nnf(c)),
    }
}

/// Replaces every literal `neg p` with the fresh starred variable `p_star`.
///
/// Input must be in negation normal form and free of starred variables, so
/// the translation is injective; [`unstar`] inverts it.
pub fn star(f: &Formula) -> Result<Formula, TransformError> {
    if !is_nnf(f) {
        return Err(TransformError::NotNnf);
    }
    if f.variables().iter().any(|v| v.starred) {
        return Err(TransformError::StarredInput);
    }
    fn go(f: &Formula) -> Formula {
        match f {
            Formula::DeMorganNeg(a) => match &**a {
                Formula::Var(v) => Formula::Var(v.star_of()),
                _ => unreachable!("checked NNF"),
            },
            Formula::Var(_) | Formula::Zero | Formula::One | Formula::BConst => f.clone(),
            Formula::StrongNeg(a) => Formula::strong_neg(go(a)),
            Formula::Delta(a) => Formula::delta(go(a)),
            Formula::And(a, b) => Formula::and(go(a), go(b)),
            Formula::Or(a, b) => Formula::or(go(a), go(b)),
            Formula::Impl(a, b) => Formula::impl_(go(a), go(b)),
            Formula::Coimpl(a, b) => Formula::coimpl(go(a), go(b)),
            Formula::Modal(op, a) => Formula::modal(*op, go(a)),
        }
    }
    Ok(go(f))
}

/// Inverse of [`star`]: starred variables become negated literals again.
pub fn unstar(f: &Formula) -> Formula {
    match f {
        Formula::Var(v) if v.starred => Formula::de_morgan_neg(Formula::var(v.name.clone())),
        Formula::Var(_) | Formula::Zero | Formula::One | Formula::BConst => f.clone(),
        Formula::StrongNeg(a) => Formula::strong_neg(unstar(a)),
        Formula::DeMorganNeg(a) => Formula::de_morgan_neg(unstar(a)),
        Formula::Delta(a) => Formula::delta(unstar(a)),
        Formula::And(a, b) => Formula::and(unstar(a), unstar(b)),
        Formula::Or(a, b) => Formula::or(unstar(a), unstar(b)),
        Formula::Impl(a, b) => Formula::impl_(unstar(a), unstar(b)),
        Formula::Coimpl(a, b) => Formula::coimpl(unstar(a), unstar(b)),
        Formula::Modal(op, a) => Formula::modal(*op, unstar(a)),
    }
}

/// Target family for inverting the dualizing translation on indexed input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Standard,
    Informational,
}

/// The modal step of the dualizing translation.
///
/// Forward rows (twin languages to the indexed language) collapse the two
/// families, so inverting an indexed modality needs a target family; the
/// standard side forms an involution on descriptors.
fn partial_modal(op: &ModalOp, family: Family, mono: bool) -> ModalOp {
    use ModalShape::*;
    let flipped = |s: ModalShape| if s == Box { Diamond } else { Box };
    if mono {
        let shape = match op.family {
            ModalFamily::Standard => flipped(op.shape),
            ModalFamily::Informational => op.shape,
        };
        return ModalOp::standard(shape);
    }
    match (op.family, op.polarity, op.index) {
        // box <-> dia2, dia <-> box2, bar-box <-> dia1, bar-dia <-> box1
        (ModalFamily::Standard, ModalPolarity::Plain, None) => {
            ModalOp::indexed(flipped(op.shape), RelIndex::Two)
        }
        (ModalFamily::Standard, ModalPolarity::Overline, None) => {
            ModalOp::indexed(flipped(op.shape), RelIndex::One)
        }
        (ModalFamily::Standard, _, Some(idx)) => {
            let shape = match family {
                Family::Standard => flipped(op.shape),
                Family::Informational => op.shape,
            };
            let polarity = match (family, idx) {
                (Family::Standard, RelIndex::Two) => ModalPolarity::Plain,
                (Family::Standard, RelIndex::One) => ModalPolarity::Overline,
                (Family::Informational, RelIndex::Two) => ModalPolarity::Plain,
                (Family::Informational, RelIndex::One) => ModalPolarity::Overline,
            };
            ModalOp { shape, family: family_of(family), polarity, index: None }
        }
        // info-box -> box2, info-dia -> dia2, bar versions -> index 1
        (ModalFamily::Informational, ModalPolarity::Plain, None) => {
            ModalOp::indexed(op.shape, RelIndex::Two)
        }
        (ModalFamily::Informational, ModalPolarity::Overline, None) => {
            ModalOp::indexed(op.shape, RelIndex::One)
        }
        (ModalFamily::Informational, _, Some(_)) => {
            unreachable!("indexed modalities are standard by construction")
        }
    }
}

fn family_of(f: Family) -> ModalFamily {
    match f {
        Family::Standard => ModalFamily::Standard,
        Family::Informational => ModalFamily::Informational,
    }
}

/// The dualizing translation on `neg`-free formulas: swaps each connective
/// with its falsity-track dual and exchanges variables with their starred
/// twins. `mono` drops relation indices, for use on mono-relational frames.
pub fn partial(f: &Formula, mono: bool) -> Result<Formula, TransformError> {
    partial_toward(f, Family::Standard, mono)
}

/// [`partial`] with an explicit target family for indexed modalities; needed
/// to invert the translation back into the informational language.
pub fn partial_toward(f: &Formula, family: Family, mono: bool) -> Result<Formula, TransformError> {
    Ok(match f {
        Formula::DeMorganNeg(_) => return Err(TransformError::NegPresent),
        Formula::Var(v) => Formula::Var(Var { name: v.name.clone(), starred: !v.starred }),
        Formula::One => Formula::Zero,
        Formula::Zero => Formula::One,
        Formula::BConst => Formula::One,
        Formula::StrongNeg(a) => Formula::coimpl(Formula::One, partial_toward(a, family, mono)?),
        Formula::Delta(a) => Formula::strong_neg(Formula::strong_neg(partial_toward(a, family, mono)?)),
        Formula::And(a, b) => {
            Formula::or(partial_toward(a, family, mono)?, partial_toward(b, family, mono)?)
        }
        Formula::Or(a, b) => {
            Formula::and(partial_toward(a, family, mono)?, partial_toward(b, family, mono)?)
        }
        Formula::Impl(a, b) => {
            Formula::coimpl(partial_toward(b, family, mono)?, partial_toward(a, family, mono)?)
        }
        Formula::Coimpl(a, b) => {
            Formula::impl_(partial_toward(b, family, mono)?, partial_toward(a, family, mono)?)
        }
        Formula::Modal(op, a) => {
            Formula::modal(partial_modal(op, family, mono), partial_toward(a, family, mono)?)
        }
    })
}

/// Renames informational modalities to their standard counterparts.
pub fn circ(f: &Formula) -> Result<Formula, TransformError> {
    map_family(f, ModalFamily::Informational, ModalFamily::Standard, "informational")
}

/// Renames standard modalities to their informational counterparts.
pub fn plus_bullet(f: &Formula) -> Result<Formula, TransformError> {
    map_family(f, ModalFamily::Standard, ModalFamily::Informational, "standard")
}

fn map_family(
    f: &Formula,
    from: ModalFamily,
    to: ModalFamily,
    expected: &'static str,
) -> Result<Formula, TransformError> {
    Ok(match f {
        Formula::Modal(op, a) => {
            if op.family != from || op.index.is_some() {
                return Err(TransformError::FamilyMismatch { expected });
            }
            let new = ModalOp { family: to, ..*op };
            Formula::modal(new, map_family(a, from, to, expected)?)
        }
        Formula::Var(_) | Formula::Zero | Formula::One | Formula::BConst => f.clone(),
        Formula::StrongNeg(a) => Formula::strong_neg(map_family(a, from, to, expected)?),
        Formula::DeMorganNeg(a) => Formula::de_morgan_neg(map_family(a, from, to, expected)?),
        Formula::Delta(a) => Formula::delta(map_family(a, from, to, expected)?),
        Formula::And(a, b) => {
            Formula::and(map_family(a, from, to, expected)?, map_family(b, from, to, expected)?)
        }
        Formula::Or(a, b) => {
            Formula::or(map_family(a, from, to, expected)?, map_family(b, from, to, expected)?)
        }
        Formula::Impl(a, b) => {
            Formula::impl_(map_family(a, from, to, expected)?, map_family(b, from, to, expected)?)
        }
        Formula::Coimpl(a, b) => {
            Formula::coimpl(map_family(a, from, to, expected)?, map_family(b, from, to, expected)?)
        }
    })
}

/// Two-valued classical encoding for formulas over `{0, /\, \/, ->, []}`:
/// variables become `tri p & neg~tri p` and every box gains a leading `tri`.
pub fn bang(f: &Formula) -> Result<Formula, TransformError> {
    Ok(match f {
        Formula::Var(v) => {
            let p = Formula::Var(v.clone());
            Formula::and(
                Formula::delta(p.clone()),
                Formula::de_morgan_neg(Formula::strong_neg(Formula::delta(p))),
            )
        }
        Formula::Zero => Formula::Zero,
        Formula::And(a, b) => Formula::and(bang(a)?, bang(b)?),
        Formula::Or(a, b) => Formula::or(bang(a)?, bang(b)?),
        Formula::Impl(a, b) => Formula::impl_(bang(a)?, bang(b)?),
        Formula::Modal(op, a) if op.is_standard_plain() && op.shape == ModalShape::Box => {
            Formula::delta(Formula::modal(*op, bang(a)?))
        }
        _ => return Err(TransformError::FragmentViolation("{0, &, |, ->, []}")),
    })
}

/// The two-formula embedding of a twin-language formula into the indexed
/// single-valuation language: strong validity of the input on a pointed
/// frame is equivalent to validity of the conjunction of the pair.
///
/// For informational input the first component is additionally renamed into
/// standard modalities.
pub fn embedding_pair(f: &Formula, mono: bool) -> Result<(Formula, Formula), TransformError> {
    let nnf = to_nnf(f)?;
    let starred = star(&nnf)?;
    let is_info = matches!(
        f.language().base,
        crate::formula::LangBase::NegInfo | crate::formula::LangBase::NegInfoBar
    );
    let first = if is_info { circ(&starred)? } else { starred.clone() };
    let second = Formula::strong_neg(partial(&starred, mono)?);
    Ok((first, second))
}
