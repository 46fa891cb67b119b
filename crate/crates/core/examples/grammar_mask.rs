// SPDX-License-Identifier: Apache-2.0

//! Step the token grammar through a short document and print the legal
//! next classes at each position. A sampler applies the same mask.

use atomsvg::token::vocab::{color_token, coord_token, CMD_FILL, CMD_L, CMD_M, CMD_Z, EOS, SOS};
use atomsvg::token::{advance, distance_to_done, legal_next, GrammarState};

fn main() {
    let doc = [
        SOS,
        CMD_FILL,
        color_token([255, 0, 0]),
        CMD_M,
        coord_token(10, 10),
        CMD_L,
        coord_token(190, 10),
        CMD_L,
        coord_token(100, 190),
        CMD_Z,
        EOS,
    ];
    let mut state = GrammarState::default();
    for id in doc {
        println!("{state:<14} needs >= {} more; legal {:?}", distance_to_done(state), legal_next(state));
        state = advance(state, id).expect("document follows the grammar");
    }
    println!("{state}");

    // an illegal continuation is rejected with the offending state
    let err = advance(GrammarState::default(), CMD_M).unwrap_err();
    println!("M at start: illegal in {}", err.state);
}
