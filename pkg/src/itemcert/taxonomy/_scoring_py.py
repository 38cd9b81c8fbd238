"""Pure-Python scoring kernel.

Mirrors the compiled kernel in ``_scoring_cy.pyx`` operation for operation so
both produce bit-identical raw scores. Any change here must be applied to the
compiled kernel as well.

Feature model over a token sequence:
  * each lexicon token adds its weight to its level, multiplied by the
    leading-verb boost when it is the first token of the sequence;
  * one interrogative bonus per sequence when a "why"/"how" token is present
    (two target levels);
  * one noun-pair bonus per sequence when the sequence holds at least two
    domain nouns (non-stopword, non-lexicon, non-cue tokens) and a joiner
    token ("and"/"versus");
  * ``skip`` removes exactly one token occurrence, emulating leave-one-out
    re-tokenization (the next token becomes the leading one when index 0 is
    skipped).
"""

from __future__ import annotations

BACKEND_NAME = "python"


def score_sequence(
    lex_level,
    lex_weight,
    is_stop,
    is_joiner,
    is_interrog,
    n_levels: int,
    boost: float,
    interrog_bonus: float,
    interrog_a: int,
    interrog_b: int,
    pair_bonus: float,
    pair_target: int,
    skip: int = -1,
) -> list:
    raw = [0.0] * n_levels
    first = True
    has_interrog = False
    has_joiner = False
    nouns = 0
    for i in range(len(lex_level)):
        if i == skip:
            continue
        lv = lex_level[i]
        if lv >= 0:
            w = lex_weight[i]
            if first:
                w = w * boost
            raw[lv] += w
        elif is_interrog[i]:
            has_interrog = True
        elif is_joiner[i]:
            has_joiner = True
        elif not is_stop[i]:
            nouns += 1
        first = False
    if has_interrog and interrog_a >= 0:
        raw[interrog_a] += interrog_bonus
        raw[interrog_b] += interrog_bonus
    if has_joiner and nouns >= 2 and pair_target >= 0:
        raw[pair_target] += pair_bonus
    return raw


def leave_one_out(
    lex_level,
    lex_weight,
    is_stop,
    is_joiner,
    is_interrog,
    n_levels: int,
    boost: float,
    interrog_bonus: float,
    interrog_a: int,
    interrog_b: int,
    pair_bonus: float,
    pair_target: int,
) -> list:
    return [
        score_sequence(
            lex_level,
            lex_weight,
            is_stop,
            is_joiner,
            is_interrog,
            n_levels,
            boost,
            interrog_bonus,
            interrog_a,
            interrog_b,
            pair_bonus,
            pair_target,
            skip=k,
        )
        for k in range(len(lex_level))
    ]
