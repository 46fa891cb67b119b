// SPDX-License-Identifier: Apache-2.0

use crate::atomize::{AtomicCommand, AtomicSvg};

fn digits(v: f64) -> usize {
    let n = v.abs().round() as u64;
    n.checked_ilog10().map_or(1, |l| l as usize + 1)
}

/// Length of `svg` under a per-digit text tokenization.
///
/// One token per command letter, one per decimal digit of every integer
/// argument and one delimiter after each number. A path's fill costs a
/// marker plus six hex digits and a delimiter. SOS and EOS add two.
pub fn digit_baseline_len(svg: &AtomicSvg) -> usize {
    let number = |v: f64| digits(v) + 1;
    let pair = |x: f64, y: f64| number(x) + number(y);
    let mut n = 2;
    for path in &svg.paths {
        n += 1 + 6 + 1;
        for cmd in &path.commands {
            n += 1;
            n += match *cmd {
                AtomicCommand::M(p) | AtomicCommand::L(p) => pair(p.x, p.y),
                AtomicCommand::C(a, b, p) => pair(a.x, a.y) + pair(b.x, b.y) + pair(p.x, p.y),
                AtomicCommand::A(a) => {
                    pair(a.rx, a.ry)
                        + number(a.rot_deg)
                        + number(a.large_arc as u8 as f64)
                        + number(a.sweep as u8 as f64)
                        + pair(a.to.x, a.to.y)
                }
                AtomicCommand::Z => 0,
            };
        }
    }
    n
}
