// SPDX-License-Identifier: Apache-2.0

//! Fixed token id layout.

pub const PAD: u32 = 0;
pub const SOS: u32 = 1;
pub const EOS: u32 = 2;
pub const CMD_M: u32 = 3;
pub const CMD_L: u32 = 4;
pub const CMD_C: u32 = 5;
pub const CMD_A: u32 = 6;
pub const CMD_Z: u32 = 7;
pub const CMD_FILL: u32 = 8;

pub const COORD_BASE: u32 = 16;
pub const COORD_COUNT: u32 = 200 * 200;
pub const COLOR_BASE: u32 = COORD_BASE + COORD_COUNT;
pub const COLOR_COUNT: u32 = 16 * 16 * 16;
pub const ANGLE_BASE: u32 = COLOR_BASE + COLOR_COUNT;
pub const ANGLE_COUNT: u32 = 360;
pub const FLAGS_BASE: u32 = ANGLE_BASE + ANGLE_COUNT;
pub const FLAGS_COUNT: u32 = 4;
pub const VOCAB_SIZE: u32 = FLAGS_BASE + FLAGS_COUNT;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum TokenClass {
    Pad,
    Sos,
    Eos,
    CmdM,
    CmdL,
    CmdC,
    CmdA,
    CmdZ,
    CmdFill,
    Reserved,
    Coord,
    Color,
    Angle,
    Flags,
    /// Any id at or above [`VOCAB_SIZE`].
    OutOfRange,
}

impl TokenClass {
    pub const ALL: [TokenClass; 15] = [
        TokenClass::Pad,
        TokenClass::Sos,
        TokenClass::Eos,
        TokenClass::CmdM,
        TokenClass::CmdL,
        TokenClass::CmdC,
        TokenClass::CmdA,
        TokenClass::CmdZ,
        TokenClass::CmdFill,
        TokenClass::Reserved,
        TokenClass::Coord,
        TokenClass::Color,
        TokenClass::Angle,
        TokenClass::Flags,
        TokenClass::OutOfRange,
    ];

    /// Ids belonging to the class. Empty for `OutOfRange`.
    pub fn ids(self) -> std::ops::Range<u32> {
        match self {
            TokenClass::Pad => PAD..PAD + 1,
            TokenClass::Sos => SOS..SOS + 1,
            TokenClass::Eos => EOS..EOS + 1,
            TokenClass::CmdM => CMD_M..CMD_M + 1,
            TokenClass::CmdL => CMD_L..CMD_L + 1,
            TokenClass::CmdC => CMD_C..CMD_C + 1,
            TokenClass::CmdA => CMD_A..CMD_A + 1,
            TokenClass::CmdZ => CMD_Z..CMD_Z + 1,
            TokenClass::CmdFill => CMD_FILL..CMD_FILL + 1,
            TokenClass::Reserved => CMD_FILL + 1..COORD_BASE,
            TokenClass::Coord => COORD_BASE..COLOR_BASE,
            TokenClass::Color => COLOR_BASE..ANGLE_BASE,
            TokenClass::Angle => ANGLE_BASE..FLAGS_BASE,
            TokenClass::Flags => FLAGS_BASE..VOCAB_SIZE,
            TokenClass::OutOfRange => VOCAB_SIZE..VOCAB_SIZE,
        }
    }
}

pub fn class_of(id: u32) -> TokenClass {
    match id {
        PAD => TokenClass::Pad,
        SOS => TokenClass::Sos,
        EOS => TokenClass::Eos,
        CMD_M => TokenClass::CmdM,
        CMD_L => TokenClass::CmdL,
        CMD_C => TokenClass::CmdC,
        CMD_A => TokenClass::CmdA,
        CMD_Z => TokenClass::CmdZ,
        CMD_FILL => TokenClass::CmdFill,
        9..COORD_BASE => TokenClass::Reserved,
        COORD_BASE..COLOR_BASE => TokenClass::Coord,
        COLOR_BASE..ANGLE_BASE => TokenClass::Color,
        ANGLE_BASE..FLAGS_BASE => TokenClass::Angle,
        FLAGS_BASE..VOCAB_SIZE => TokenClass::Flags,
        _ => TokenClass::OutOfRange,
    }
}

/// Panics if either coordinate exceeds 199.
pub fn coord_token(x: u32, y: u32) -> u32 {
    assert!(x < 200 && y < 200, "coordinate ({x},{y}) off grid");
    COORD_BASE + x * 200 + y
}

pub fn coord_of(id: u32) -> Option<(u32, u32)> {
    (class_of(id) == TokenClass::Coord).then(|| {
        let k = id - COORD_BASE;
        (k / 200, k % 200)
    })
}

/// Channel to 4-bit level: round(c/17), which is already within 0..=15.
pub fn color_level(c: u8) -> u32 {
    (c as u32 * 2 + 17) / 34
}

pub fn color_token(rgb: [u8; 3]) -> u32 {
    let [r, g, b] = rgb.map(color_level);
    COLOR_BASE + r * 256 + g * 16 + b
}

pub fn color_of(id: u32) -> Option<[u8; 3]> {
    (class_of(id) == TokenClass::Color).then(|| {
        let k = id - COLOR_BASE;
        [k / 256, (k / 16) % 16, k % 16].map(|v| (v * 17) as u8)
    })
}

pub fn angle_token(deg: u32) -> u32 {
    assert!(deg < 360, "angle {deg} out of range");
    ANGLE_BASE + deg
}

pub fn angle_of(id: u32) -> Option<u32> {
    (class_of(id) == TokenClass::Angle).then(|| id - ANGLE_BASE)
}

pub fn flags_token(large_arc: bool, sweep: bool) -> u32 {
    FLAGS_BASE + 2 * large_arc as u32 + sweep as u32
}

pub fn flags_of(id: u32) -> Option<(bool, bool)> {
    (class_of(id) == TokenClass::Flags).then(|| {
        let k = id - FLAGS_BASE;
        (k & 2 != 0, k & 1 != 0)
    })
}
