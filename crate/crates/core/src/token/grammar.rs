// SPDX-License-Identifier: Apache-2.0

//! Deterministic automaton over token classes.

use std::fmt;

use super::vocab::{class_of, TokenClass};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum GrammarState {
    #[default]
    ExpectSOS,
    ExpectFill,
    ExpectColor,
    ExpectM,
    ExpectMCoord,
    InSubpath,
    ExpectLCoord,
    ExpectCCoord1,
    ExpectCCoord2,
    ExpectCCoord3,
    ExpectARadii,
    ExpectAAngle,
    ExpectAFlags,
    ExpectACoord,
    AfterZ,
    Done,
}

impl fmt::Display for GrammarState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Set of token classes as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ClassSet(u16);

impl ClassSet {
    pub const EMPTY: ClassSet = ClassSet(0);

    pub fn of(classes: &[TokenClass]) -> ClassSet {
        ClassSet(classes.iter().fold(0, |m, &c| m | 1 << c as u8))
    }

    pub fn contains(self, class: TokenClass) -> bool {
        self.0 & (1 << class as u8) != 0
    }

    pub fn contains_id(self, id: u32) -> bool {
        self.contains(class_of(id))
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn classes(self) -> impl Iterator<Item = TokenClass> {
        TokenClass::ALL.into_iter().filter(move |&c| self.contains(c))
    }

    /// Every legal id, ascending.
    pub fn ids(self) -> impl Iterator<Item = u32> {
        self.classes().flat_map(TokenClass::ids)
    }

    pub fn id_count(self) -> usize {
        self.classes().map(|c| c.ids().len()).sum()
    }

    /// Dense boolean mask of length `VOCAB_SIZE`.
    pub fn to_mask(self) -> Vec<bool> {
        let mut mask = vec![false; super::vocab::VOCAB_SIZE as usize];
        for id in self.ids() {
            mask[id as usize] = true;
        }
        mask
    }
}

impl fmt::Debug for ClassSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.classes()).finish()
    }
}

/// A token that has no transition from the current state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IllegalToken {
    pub state: GrammarState,
    pub token: u32,
}

fn step(state: GrammarState, class: TokenClass) -> Option<GrammarState> {
    use GrammarState::*;
    use TokenClass as T;
    Some(match (state, class) {
        (ExpectSOS, T::Sos) => ExpectFill,
        (ExpectFill, T::CmdFill) => ExpectColor,
        (ExpectColor, T::Color) => ExpectM,
        (ExpectM, T::CmdM) => ExpectMCoord,
        (ExpectMCoord, T::Coord) => InSubpath,
        (InSubpath, T::CmdL) => ExpectLCoord,
        (InSubpath, T::CmdC) => ExpectCCoord1,
        (InSubpath, T::CmdA) => ExpectARadii,
        (InSubpath, T::CmdZ) => AfterZ,
        (InSubpath | AfterZ, T::CmdM) => ExpectMCoord,
        (InSubpath | AfterZ, T::CmdFill) => ExpectColor,
        (InSubpath | AfterZ, T::Eos) => Done,
        (ExpectLCoord, T::Coord) => InSubpath,
        (ExpectCCoord1, T::Coord) => ExpectCCoord2,
        (ExpectCCoord2, T::Coord) => ExpectCCoord3,
        (ExpectCCoord3, T::Coord) => InSubpath,
        (ExpectARadii, T::Coord) => ExpectAAngle,
        (ExpectAAngle, T::Angle) => ExpectAFlags,
        (ExpectAFlags, T::Flags) => ExpectACoord,
        (ExpectACoord, T::Coord) => InSubpath,
        _ => return None,
    })
}

/// Classes with a defined transition out of `state`. Empty for `Done`.
pub fn legal_next(state: GrammarState) -> ClassSet {
    ClassSet::of(&TokenClass::ALL.into_iter().filter(|&c| step(state, c).is_some()).collect::<Vec<_>>())
}

pub fn advance(state: GrammarState, token: u32) -> Result<GrammarState, IllegalToken> {
    step(state, class_of(token)).ok_or(IllegalToken { state, token })
}

/// Fewest tokens that take `state` to `Done`.
pub fn distance_to_done(state: GrammarState) -> usize {
    use GrammarState::*;
    match state {
        Done => 0,
        InSubpath | AfterZ => 1,
        ExpectMCoord | ExpectLCoord | ExpectCCoord3 | ExpectACoord => 2,
        ExpectM | ExpectCCoord2 | ExpectAFlags => 3,
        ExpectColor | ExpectCCoord1 | ExpectAAngle => 4,
        ExpectFill | ExpectARadii => 5,
        ExpectSOS => 6,
    }
}

#[cfg(test)]
mod tests {
    use super::super::vocab::*;
    use super::*;
    use GrammarState::*;

    const STATES: [GrammarState; 16] = [
        ExpectSOS,
        ExpectFill,
        ExpectColor,
        ExpectM,
        ExpectMCoord,
        InSubpath,
        ExpectLCoord,
        ExpectCCoord1,
        ExpectCCoord2,
        ExpectCCoord3,
        ExpectARadii,
        ExpectAAngle,
        ExpectAFlags,
        ExpectACoord,
        AfterZ,
        Done,
    ];

    #[test]
    fn legal_sets() {
        use TokenClass as T;
        assert_eq!(legal_next(ExpectSOS), ClassSet::of(&[T::Sos]));
        assert_eq!(legal_next(ExpectColor), ClassSet::of(&[T::Color]));
        assert_eq!(legal_next(ExpectColor).ids().next(), Some(40016));
        assert_eq!(legal_next(ExpectColor).id_count(), 4096);
        assert_eq!(legal_next(ExpectAFlags).ids().collect::<Vec<_>>(), vec![44472, 44473, 44474, 44475]);
        assert_eq!(
            legal_next(InSubpath),
            ClassSet::of(&[T::CmdL, T::CmdC, T::CmdA, T::CmdZ, T::CmdM, T::CmdFill, T::Eos])
        );
        assert_eq!(legal_next(AfterZ), ClassSet::of(&[T::CmdM, T::CmdFill, T::Eos]));
        assert!(legal_next(Done).is_empty());
    }

    #[test]
    fn transitions() {
        assert_eq!(advance(ExpectFill, CMD_FILL), Ok(ExpectColor));
        let c = coord_token(1, 2);
        let mut s = advance(InSubpath, CMD_C).unwrap();
        assert_eq!(s, ExpectCCoord1);
        s = advance(s, c).unwrap();
        assert_eq!(s, ExpectCCoord2);
        s = advance(s, c).unwrap();
        assert_eq!(s, ExpectCCoord3);
        assert_eq!(advance(s, c), Ok(InSubpath));
        assert_eq!(advance(ExpectMCoord, CMD_L), Err(IllegalToken { state: ExpectMCoord, token: CMD_L }));
        assert!(advance(InSubpath, PAD).is_err());
        assert!(advance(InSubpath, 12).is_err());
        assert!(advance(ExpectLCoord, VOCAB_SIZE).is_err());
    }

    /// advance accepts exactly the ids in legal_next, checked per class.
    #[test]
    fn advance_agrees_with_legal_next() {
        for s in STATES {
            let legal = legal_next(s);
            for class in TokenClass::ALL {
                let probe = class.ids().next().unwrap_or(VOCAB_SIZE);
                assert_eq!(advance(s, probe).is_ok(), legal.contains(class), "{s:?} {class:?}");
            }
        }
    }

    #[test]
    fn distance_is_shortest_path() {
        // breadth-first search over representative ids
        for s in STATES {
            let mut frontier = vec![s];
            let mut d = 0;
            while !frontier.contains(&Done) {
                frontier =
                    frontier.iter().flat_map(|&f| legal_next(f).classes().map(move |c| step(f, c).unwrap())).collect();
                d += 1;
            }
            assert_eq!(distance_to_done(s), d, "{s:?}");
        }
    }
}
