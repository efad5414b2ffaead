//! Ready-made models.

use num_traits::{One, Zero};

use crate::model::{normalize_dist, Memdp, Names, ParityObjective};
use crate::rational::{rat, Rat};

/// Parameters of the two-environment card-guessing game.
///
/// From `D` a card is drawn (`C1` with probability `alpha1[e]`). At a card
/// the player draws again (back to `D` with probability `1 - alpha0`,
/// otherwise forced to `G`) or guesses. At `G`, `g1` bets on `E1` and `g2`
/// on `E2`; a correct bet reaches the winning sink `W`.
#[derive(Debug, Clone)]
pub struct CardGame {
    pub alpha0: Rat,
    pub alpha1: [Rat; 2],
}

impl CardGame {
    /// Card 1 is duplicated in `E1`, card 2 in `E2`.
    pub fn symmetric(alpha0: Rat) -> Self {
        CardGame {
            alpha0,
            alpha1: [rat(2, 3), rat(1, 3)],
        }
    }

    /// Card 1 drawn with probability 3/5 in `E1` and 1/4 in `E2`.
    pub fn asymmetric(alpha0: Rat) -> Self {
        CardGame {
            alpha0,
            alpha1: [rat(3, 5), rat(1, 4)],
        }
    }
}

pub const D: usize = 0;
pub const C1: usize = 1;
pub const C2: usize = 2;
pub const G: usize = 3;
pub const W: usize = 4;
pub const L: usize = 5;

pub const DRAW: usize = 0;
pub const GUESS: usize = 1;
pub const G1: usize = 2;
pub const G2: usize = 3;

pub fn card_game(p: &CardGame) -> (Memdp, ParityObjective) {
    let states = Names::new(["D", "C1", "C2", "G", "W", "L"]);
    let actions = Names::new(["draw", "guess", "g1", "g2"]);
    let environments = Names::new(["E1", "E2"]);
    let enabled = vec![
        vec![DRAW],
        vec![DRAW, GUESS],
        vec![DRAW, GUESS],
        vec![G1, G2],
        vec![DRAW, GUESS, G1, G2],
        vec![DRAW, GUESS, G1, G2],
    ];
    let one = Rat::one();
    let zero = Rat::zero();
    let delta = (0..2)
        .map(|e| {
            let a1 = p.alpha1[e].clone();
            let draw_on = normalize_dist(vec![
                (D, &one - &p.alpha0),
                (G, p.alpha0.clone()),
            ]);
            let card = vec![draw_on, vec![(G, one.clone())]];
            let (win1, win2) = if e == 0 {
                (one.clone(), zero.clone())
            } else {
                (zero.clone(), one.clone())
            };
            vec![
                vec![normalize_dist(vec![(C1, a1.clone()), (C2, &one - &a1)])],
                card.clone(),
                card,
                vec![
                    normalize_dist(vec![(W, win1.clone()), (L, &one - &win1)]),
                    normalize_dist(vec![(W, win2.clone()), (L, &one - &win2)]),
                ],
                vec![vec![(W, one.clone())]; 4],
                vec![vec![(L, one.clone())]; 4],
            ]
        })
        .collect();
    let m = Memdp {
        states,
        actions,
        environments,
        enabled,
        delta,
    };
    (m, ParityObjective::new(vec![1, 1, 1, 1, 2, 1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate;

    #[test]
    fn card_games_are_valid() {
        for a0 in [rat(0, 1), rat(1, 3), rat(1, 1)] {
            let (m, _) = card_game(&CardGame::symmetric(a0.clone()));
            assert!(validate(&m).is_valid());
            let (m, _) = card_game(&CardGame::asymmetric(a0));
            assert!(validate(&m).is_valid());
        }
    }
}
