//! Dropping the cardinal state: the plain program a club-recognizing one
//! falls back to between club stages.

use crate::builder::NamedProgram;
use crate::machine::{Program, StateId};

use super::TransformError;

/// Removes the cardinal state: rules out of it are dropped and every
/// reference into it is remapped to the limit state.
pub fn tilde_transform(p: &NamedProgram) -> Result<NamedProgram, TransformError> {
    let src = &p.program;
    let cardinal = src.cardinal.ok_or(TransformError::AlreadyPlain)?;
    let remap = |s: StateId| -> StateId {
        let s = if s == cardinal { src.limit } else { s };
        if s > cardinal {
            s - 1
        } else {
            s
        }
    };
    let mut rules = Vec::new();
    for state in 0..src.n_states {
        if state == src.halt || state == cardinal {
            continue;
        }
        for code in 0..8u8 {
            let rule = *src.rule_by_code(state, code).expect("source is total");
            let mut rule = rule;
            rule.next = remap(rule.next);
            rules.push(((remap(state), code), rule));
        }
    }
    let program = Program::new(
        src.n_states - 1,
        remap(src.start),
        remap(src.limit),
        remap(src.halt),
        None,
        rules,
    )
    .map_err(|_| TransformError::NotClubRecognizing)
    .expect("dropping the cardinal state preserves validity");
    let names = p
        .names
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != cardinal as usize)
        .map(|(_, n)| n.clone())
        .collect();
    Ok(NamedProgram { program, names })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::{write_one, ProgramBuilder, ANY, KEEP, SCR};
    use crate::machine::Move;

    #[test]
    fn cardinal_references_become_limit() {
        let mut b = ProgramBuilder::new();
        let s = b.state("start");
        b.set_start(s);
        let card = b.state("card");
        b.set_cardinal(card);
        b.rule(s, ANY, KEEP, Move::Right, s);
        b.rule(b.limit_state(), ANY, KEEP, Move::Right, s);
        b.rule(card, ANY, write_one(SCR, true), Move::Right, b.halt_state());
        let p = b.finish();
        assert!(p.program.is_club_recognizing());

        let q = tilde_transform(&p).unwrap();
        assert!(!q.program.is_club_recognizing());
        assert_eq!(q.program.n_states, p.program.n_states - 1);
        assert!(q.program.validate().is_empty());
        assert!(q.find_state("card").is_none());
        // The limit state's behaviour is unchanged.
        let lim = q.program.limit;
        let rule = q.program.rule(lim, [false, false, false]).unwrap();
        assert_eq!(rule.next, q.program.start);
    }

    #[test]
    fn tilde_of_plain_program_errors() {
        let mut b = ProgramBuilder::new();
        let s = b.state("start");
        b.set_start(s);
        b.rule(s, ANY, KEEP, Move::Right, b.halt_state());
        b.rule(b.limit_state(), ANY, KEEP, Move::Right, b.halt_state());
        let p = b.finish();
        assert_eq!(
            tilde_transform(&p).unwrap_err(),
            TransformError::AlreadyPlain
        );
    }
}
