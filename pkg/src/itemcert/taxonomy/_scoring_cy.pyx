# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled scoring kernel.

Mirrors ``_scoring_py`` operation for operation; compiled with
-ffp-contract=off so float results stay bit-identical to the pure kernel.
The speedup matters in leave-one-out attribution, which re-scores the token
sequence once per token (quadratic in stem length).
"""

BACKEND_NAME = "cython"


cdef void _score_into(
    const int[::1] lex_level,
    const double[::1] lex_weight,
    const unsigned char[::1] is_stop,
    const unsigned char[::1] is_joiner,
    const unsigned char[::1] is_interrog,
    double* raw,
    int n_levels,
    double boost,
    double interrog_bonus,
    int interrog_a,
    int interrog_b,
    double pair_bonus,
    int pair_target,
    int skip,
) noexcept nogil:
    cdef int i, lv
    cdef int n = lex_level.shape[0]
    cdef bint first = True
    cdef bint has_interrog = False
    cdef bint has_joiner = False
    cdef int nouns = 0
    cdef double w
    for i in range(n_levels):
        raw[i] = 0.0
    for i in range(n):
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


def score_sequence(
    lex_level,
    lex_weight,
    is_stop,
    is_joiner,
    is_interrog,
    int n_levels,
    double boost,
    double interrog_bonus,
    int interrog_a,
    int interrog_b,
    double pair_bonus,
    int pair_target,
    int skip=-1,
):
    cdef const int[::1] lv = lex_level
    cdef const double[::1] wt = lex_weight
    cdef const unsigned char[::1] st = is_stop
    cdef const unsigned char[::1] jn = is_joiner
    cdef const unsigned char[::1] ig = is_interrog
    cdef double raw[16]
    if n_levels > 16:
        raise ValueError("kernel supports at most 16 levels")
    _score_into(lv, wt, st, jn, ig, raw, n_levels, boost, interrog_bonus,
                interrog_a, interrog_b, pair_bonus, pair_target, skip)
    return [raw[i] for i in range(n_levels)]


def leave_one_out(
    lex_level,
    lex_weight,
    is_stop,
    is_joiner,
    is_interrog,
    int n_levels,
    double boost,
    double interrog_bonus,
    int interrog_a,
    int interrog_b,
    double pair_bonus,
    int pair_target,
):
    cdef const int[::1] lv = lex_level
    cdef const double[::1] wt = lex_weight
    cdef const unsigned char[::1] st = is_stop
    cdef const unsigned char[::1] jn = is_joiner
    cdef const unsigned char[::1] ig = is_interrog
    cdef int n = lv.shape[0]
    cdef double raw[16]
    cdef int k
    if n_levels > 16:
        raise ValueError("kernel supports at most 16 levels")
    out = []
    for k in range(n):
        _score_into(lv, wt, st, jn, ig, raw, n_levels, boost, interrog_bonus,
                    interrog_a, interrog_b, pair_bonus, pair_target, k)
        out.append([raw[i] for i in range(n_levels)])
    return out
