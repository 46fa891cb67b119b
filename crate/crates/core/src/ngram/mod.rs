// SPDX-License-Identifier: Apache-2.0

//! Order-k token model sampled under the grammar mask.

mod io;

pub use io::{read_model, write_model, ModelIoError};

use std::collections::{HashMap, HashSet};

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use thiserror::Error;

use crate::token::vocab::{SOS, VOCAB_SIZE};
use crate::token::{advance, distance_to_done, legal_next, ClassSet, GrammarState, TokenSeq};

/// Multiplier applied once per backoff step.
pub const BACKOFF: f64 = 0.4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NgramError {
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("sequence {index} breaks the grammar at position {position}")]
    InvalidSequence { index: usize, position: usize },
}

/// Continuation counts of one context.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Table {
    pub total: u64,
    pub next: HashMap<u32, u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NgramModel {
    pub order: usize,
    pub vocab_size: u32,
    /// Keyed by contexts of every length `0..=order`.
    pub counts: HashMap<Vec<u32>, Table>,
}

/// The `len` ids before `pos`, left-padded with SOS.
fn context(ids: &[u32], pos: usize, len: usize) -> Vec<u32> {
    (0..len)
        .map(|i| {
            let back = len - i;
            if back > pos {
                SOS
            } else {
                ids[pos - back]
            }
        })
        .collect()
}

impl NgramModel {
    pub fn fit(corpus: &[TokenSeq], order: usize) -> Result<NgramModel, NgramError> {
        if corpus.is_empty() {
            return Err(NgramError::EmptyCorpus);
        }
        let mut m = NgramModel { order, vocab_size: VOCAB_SIZE, counts: HashMap::new() };
        for seq in corpus {
            let ids = &seq.ids;
            for pos in 1..ids.len() {
                for len in 0..=order {
                    m.add(context(ids, pos, len), ids[pos], 1);
                }
            }
        }
        Ok(m)
    }

    pub(crate) fn add(&mut self, ctx: Vec<u32>, next: u32, count: u32) {
        let t = self.counts.entry(ctx).or_default();
        t.total += count as u64;
        *t.next.entry(next).or_insert(0) += count;
    }

    /// Longest seen suffix of `ctx` that has a continuation inside `mask`,
    /// with the number of backoff steps taken. `None` means no level has
    /// any masked evidence.
    fn level(&self, ctx: &[u32], mask: ClassSet) -> Option<(&Table, usize)> {
        let full = ctx.len().min(self.order);
        (0..=full).rev().find_map(|len| {
            let t = self.counts.get(&ctx[ctx.len() - len..])?;
            t.next.keys().any(|&id| mask.contains_id(id)).then_some((t, full - len))
        })
    }

    /// Unnormalized weights: seen ids inside the mask, the weight every
    /// other masked id gets, and the normalizer.
    fn weights(&self, ctx: &[u32], mask: ClassSet) -> (Vec<(u32, f64)>, f64, f64) {
        let size = mask.id_count() as f64;
        match self.level(ctx, mask) {
            None => (Vec::new(), 1.0, size),
            Some((t, steps)) => {
                let scale = BACKOFF.powi(steps as i32);
                let mut seen: Vec<(u32, f64)> = t
                    .next
                    .iter()
                    .filter(|(&id, _)| mask.contains_id(id))
                    .map(|(&id, &c)| (id, scale * (c as f64 + 1.0)))
                    .collect();
                seen.sort_unstable_by_key(|&(id, _)| id);
                let total = seen.iter().map(|&(_, w)| w).sum::<f64>() + scale * (size - seen.len() as f64);
                (seen, scale, total)
            }
        }
    }

    /// Add-one smoothed probabilities over every id in `mask`, ascending.
    ///
    /// Uses the longest context suffix with evidence inside the mask; the
    /// `0.4` backoff multiplier cancels on renormalization. With no
    /// evidence at any order the result is uniform.
    pub fn next_distribution(&self, ctx: &[u32], mask: ClassSet) -> Vec<(u32, f64)> {
        let (seen, unseen, total) = self.weights(ctx, mask);
        let seen: HashMap<u32, f64> = seen.into_iter().collect();
        mask.ids().map(|id| (id, seen.get(&id).copied().unwrap_or(unseen) / total)).collect()
    }

    pub fn probability(&self, ctx: &[u32], mask: ClassSet, id: u32) -> f64 {
        if !mask.contains_id(id) {
            return 0.0;
        }
        let (seen, unseen, total) = self.weights(ctx, mask);
        let w = seen.iter().find(|&&(s, _)| s == id).map_or(unseen, |&(_, w)| w);
        w / total
    }

    /// Ids with the `k` largest probabilities under `mask`, ties broken by
    /// ascending id, as `(id, probability)`.
    pub fn top_k(&self, ctx: &[u32], mask: ClassSet, k: usize) -> Vec<(u32, f64)> {
        let (seen, unseen, total) = self.weights(ctx, mask);
        let seen_ids: HashSet<u32> = seen.iter().map(|&(id, _)| id).collect();
        // unseen ids all tie, so only the k lowest can make the cut
        let mut cand = seen;
        cand.extend(mask.ids().filter(|id| !seen_ids.contains(id)).take(k).map(|id| (id, unseen)));
        cand.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        cand.truncate(k);
        cand.into_iter().map(|(id, w)| (id, w / total)).collect()
    }

    fn ctx_at(&self, ids: &[u32]) -> Vec<u32> {
        context(ids, ids.len(), self.order)
    }

    /// Draws one grammar-valid sequence. Sequences are at most `max_len`
    /// long whenever `max_len` admits the shortest document (6 tokens).
    pub fn sample(&self, cfg: &SamplerConfig) -> TokenSeq {
        let mut rng = SplitMix64::seed_from_u64(cfg.seed);
        let mut ids = vec![SOS];
        let mut state = advance(GrammarState::ExpectSOS, SOS).expect("SOS starts every sequence");
        while state != GrammarState::Done {
            let mask = legal_next(state);
            // once some legal class could no longer finish within max_len,
            // switch to greedy completion
            let fits = mask.classes().all(|c| {
                let next = advance(state, c.ids().start).expect("legal class");
                ids.len() + 1 + distance_to_done(next) <= cfg.max_len
            });
            let id = if fits { self.draw(&ids, mask, cfg, &mut rng) } else { self.complete_step(&ids, state) };
            state = advance(state, id).expect("sampled from the legal set");
            ids.push(id);
        }
        TokenSeq::new(ids)
    }

    /// `n` independent samples; sample `i` uses seed `cfg.seed + i * PHI`
    /// (wrapping), so results do not depend on thread scheduling.
    pub fn sample_many(&self, cfg: &SamplerConfig, n: usize) -> Vec<TokenSeq> {
        use rayon::prelude::*;
        (0..n as u64)
            .into_par_iter()
            .map(|i| {
                let seed = cfg.seed.wrapping_add(i.wrapping_mul(0x9E37_79B9_7F4A_7C15));
                self.sample(&SamplerConfig { seed, ..*cfg })
            })
            .collect()
    }

    /// Greedy step toward Done: the most likely id among the classes that
    /// shorten the remaining distance.
    fn complete_step(&self, ids: &[u32], state: GrammarState) -> u32 {
        let best = legal_next(state)
            .classes()
            .filter_map(|c| {
                let id = c.ids().next()?;
                Some((distance_to_done(advance(state, id).ok()?), c))
            })
            .min_by_key(|&(d, _)| d)
            .expect("non-final state has a transition")
            .1;
        let mask = ClassSet::of(&[best]);
        if best.ids().len() == 1 {
            return best.ids().start;
        }
        self.top_k(&self.ctx_at(ids), mask, 1)[0].0
    }

    fn draw(&self, ids: &[u32], mask: ClassSet, cfg: &SamplerConfig, rng: &mut SplitMix64) -> u32 {
        let ctx = self.ctx_at(ids);
        let mut cand = self.top_k(&ctx, mask, cfg.top_k.max(1));
        if cfg.temperature <= 0.0 || cand.len() == 1 {
            return cand[0].0;
        }
        if cfg.temperature != 1.0 {
            for c in &mut cand {
                c.1 = c.1.powf(1.0 / cfg.temperature);
            }
        }
        let sum: f64 = cand.iter().map(|c| c.1).sum();
        let mut keep = 0;
        let mut cum = 0.0;
        for c in &cand {
            cum += c.1 / sum;
            keep += 1;
            if cum >= cfg.top_p {
                break;
            }
        }
        cand.truncate(keep);
        let sum: f64 = cand.iter().map(|c| c.1).sum();
        let u = unit_f64(rng.next_u64()) * sum;
        let mut acc = 0.0;
        for &(id, w) in &cand {
            acc += w;
            if u < acc {
                return id;
            }
        }
        cand.last().unwrap().0
    }

    /// `exp` of the mean negative log probability of every token after SOS.
    pub fn perplexity(&self, heldout: &[TokenSeq]) -> Result<f64, NgramError> {
        let mut nll = 0.0;
        let mut n = 0usize;
        for (index, seq) in heldout.iter().enumerate() {
            let ids = &seq.ids;
            let mut state = GrammarState::ExpectSOS;
            for (pos, &id) in ids.iter().enumerate() {
                if pos > 0 {
                    let p = self.probability(&context(ids, pos, self.order), legal_next(state), id);
                    nll -= p.ln();
                    n += 1;
                }
                state = advance(state, id).map_err(|_| NgramError::InvalidSequence { index, position: pos })?;
            }
        }
        if n == 0 {
            return Err(NgramError::EmptyCorpus);
        }
        Ok((nll / n as f64).exp())
    }
}

/// Top 53 bits of a SplitMix64 output as a float in [0, 1).
pub fn unit_f64(x: u64) -> f64 {
    (x >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SamplerConfig {
    pub top_k: usize,
    pub top_p: f64,
    pub temperature: f64,
    pub seed: u64,
    pub max_len: usize,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig { top_k: 50, top_p: 0.95, temperature: 1.0, seed: 0, max_len: 4096 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::token::vocab::*;
    use crate::token::{decode, encode, TokenClass};

    fn tri(x: u32, fill: [u8; 3]) -> TokenSeq {
        TokenSeq::new(vec![
            SOS,
            CMD_FILL,
            color_token(fill),
            CMD_M,
            coord_token(x, 10),
            CMD_L,
            coord_token(x + 50, 10),
            CMD_L,
            coord_token(x, 60),
            CMD_Z,
            EOS,
        ])
    }

    fn corpus() -> Vec<TokenSeq> {
        vec![tri(10, [255, 0, 0]), tri(20, [255, 0, 0]), tri(30, [0, 0, 255])]
    }

    #[test]
    fn direct_counts() {
        let c = coord_token(4, 4);
        let m = NgramModel::fit(&[TokenSeq::new(vec![1, 8, 40016, 3, c, 7, 2])], 1).unwrap();
        assert_eq!(m.counts[&vec![1]].next[&8], 1);
        assert_eq!(m.counts[&vec![c]].next[&7], 1);
        assert_eq!(m.counts[&vec![]].total, 6);
        assert_eq!(NgramModel::fit(&corpus(), 3).unwrap(), NgramModel::fit(&corpus(), 3).unwrap());
        assert_eq!(NgramModel::fit(&[], 3), Err(NgramError::EmptyCorpus));
    }

    #[test]
    fn unigram_frequencies() {
        let m = NgramModel::fit(&corpus(), 0).unwrap();
        assert_eq!(m.counts.len(), 1);
        assert_eq!(m.counts[&vec![]].next[&CMD_L], 6);
    }

    #[test]
    fn sos_padding() {
        let m = NgramModel::fit(&corpus(), 3).unwrap();
        assert_eq!(m.counts[&vec![SOS, SOS, SOS]].next[&CMD_FILL], 3);
        assert_eq!(m.counts[&vec![SOS, SOS, CMD_FILL]].total, 3);
    }

    #[test]
    fn distributions() {
        let m = NgramModel::fit(&corpus(), 2).unwrap();
        let colors = ClassSet::of(&[TokenClass::Color]);
        // no color outside the two seen ones at any order -> still seen; an
        // angle mask was never observed anywhere -> uniform
        let angles = ClassSet::of(&[TokenClass::Angle]);
        let d = m.next_distribution(&[77, 78], angles);
        assert_eq!(d.len(), 360);
        assert!(d.iter().all(|&(_, p)| (p - 1.0 / 360.0).abs() < 1e-15));

        let only = ClassSet::of(&[TokenClass::CmdFill]);
        assert_eq!(m.next_distribution(&[SOS, SOS], only), vec![(CMD_FILL, 1.0)]);

        let d = m.next_distribution(&[SOS, CMD_FILL], colors);
        let sum: f64 = d.iter().map(|p| p.1).sum();
        assert!((sum - 1.0).abs() < 1e-9);
        let best = d.iter().max_by(|a, b| a.1.total_cmp(&b.1)).unwrap();
        assert_eq!(best.0, color_token([255, 0, 0]));
        let p = m.probability(&[SOS, CMD_FILL], colors, best.0);
        assert!((p - best.1).abs() < 1e-15);
    }

    #[test]
    fn top_k_breaks_ties_by_id() {
        let m = NgramModel::fit(&corpus(), 2).unwrap();
        let colors = ClassSet::of(&[TokenClass::Color]);
        let top = m.top_k(&[SOS, CMD_FILL], colors, 4);
        let ids: Vec<u32> = top.iter().map(|t| t.0).collect();
        assert_eq!(ids, vec![color_token([255, 0, 0]), color_token([0, 0, 255]), COLOR_BASE, COLOR_BASE + 1]);
    }

    #[test]
    fn sampling_is_deterministic_and_valid() {
        let m = NgramModel::fit(&corpus(), 3).unwrap();
        for seed in 0..200 {
            let cfg = SamplerConfig { seed, ..Default::default() };
            let a = m.sample(&cfg);
            assert_eq!(a, m.sample(&cfg));
            let svg = decode(&a).unwrap();
            assert_eq!(encode(&svg).unwrap().ids, a.ids);
        }
    }

    #[test]
    fn greedy_is_argmax() {
        let m = NgramModel::fit(&corpus(), 3).unwrap();
        let cfg = SamplerConfig { top_k: 1, ..Default::default() };
        let a = m.sample(&cfg);
        assert_eq!(a, m.sample(&SamplerConfig { seed: 99, ..cfg }));
        decode(&a).unwrap();
    }

    #[test]
    fn forced_completion_respects_max_len() {
        // uniform model: free running would take long to hit EOS
        let m = NgramModel::fit(&[tri(0, [0, 0, 0])], 0).unwrap();
        for max_len in [6, 7, 12, 40] {
            for seed in 0..20 {
                let s = m.sample(&SamplerConfig { seed, max_len, top_k: 100_000, top_p: 1.0, ..Default::default() });
                assert!(s.len() <= max_len, "{} > {max_len}", s.len());
                decode(&s).unwrap();
            }
        }
    }

    #[test]
    fn perplexity_properties() {
        let train = corpus();
        let m = NgramModel::fit(&train, 3).unwrap();
        let self_ppl = m.perplexity(&train).unwrap();
        // swap coordinates between positions: grammar-valid but unseen
        let shuffled: Vec<TokenSeq> = train
            .iter()
            .map(|s| {
                let mut ids = s.ids.clone();
                ids.swap(4, 8);
                TokenSeq::new(ids)
            })
            .collect();
        assert!(self_ppl <= m.perplexity(&shuffled).unwrap());
        assert_eq!(m.perplexity(&[]), Err(NgramError::EmptyCorpus));
        assert!(m.perplexity(&[TokenSeq::new(vec![1, 2])]).is_err());

        // a sequence whose only free choices are fully determined has ppl 1
        let single = vec![TokenSeq::new(vec![SOS, CMD_FILL])];
        let m1 = NgramModel::fit(&single, 1).unwrap();
        assert_eq!(m1.perplexity(&single).unwrap(), 1.0);
    }

    #[test]
    fn uniform_fallback_contributes_log_n() {
        // model trained on a corpus with no colors seen in the mask's class
        let m = NgramModel { order: 1, vocab_size: VOCAB_SIZE, counts: HashMap::new() };
        let seq = TokenSeq::new(vec![SOS, CMD_FILL, COLOR_BASE]);
        // SOS->FILL forced (log 1), FILL->color uniform over 4096
        let ppl = m.perplexity(&[seq]).unwrap();
        assert!((ppl.ln() - (4096f64).ln() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn unit_float_range() {
        assert_eq!(unit_f64(0), 0.0);
        assert!(unit_f64(u64::MAX) < 1.0);
    }
}
