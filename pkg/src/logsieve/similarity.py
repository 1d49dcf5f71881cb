"""Numeric core: sequence similarity, adaptive thresholds, LCS, template similarity.

A mined template is a list of tokens where ``None`` stands for a wildcard
position (rendered as ``*``). All functions here are pure; threshold state is
mutated only by the graph code.
"""

import math
from dataclasses import dataclass

from .preprocess import has_digit

# Template token: a literal string, or None for a wildcard position.
Token = str | None

WILDCARD: Token = None


def literal_count(event: list[Token]) -> int:
    """Number of non-wildcard tokens in a template."""
    return sum(1 for t in event if t is not None)


def equ(message_token: str, event_token: Token) -> int:
    """Token-pair match score: 1 only for equal literals, 0 for wildcards."""
    return 1 if event_token is not None and message_token == event_token else 0


def sim_seq(message: list[str], event: list[Token]) -> float:
    """Similarity between a message and a template of equal length.

    Token-wise matches over the template's literal positions, normalized by
    the literal count. An all-wildcard template constrains nothing and
    accepts any message of its length (similarity 1.0).
    """
    assert len(message) == len(event), "length layer must guarantee equal lengths"
    n_c = literal_count(event)
    if n_c == 0:
        return 1.0
    matched = sum(equ(m, e) for m, e in zip(message, event))
    return matched / n_c


@dataclass
class ThresholdState:
    """Per-group adaptive acceptance threshold.

    ``dig_len``, ``seq_len`` and ``base`` are frozen at group creation;
    ``eta`` counts template tokens replaced by wildcards so far.
    """

    st_init: float
    base: int
    eta: int
    dig_len: int
    seq_len: int


def new_threshold_state(tokens: list[str]) -> ThresholdState:
    """Initialize threshold state from a new group's first (all-literal) message.

    The initial threshold estimates the constant ratio of the template:
    digit-bearing tokens are presumed variables and discounted.
    """
    seq_len = len(tokens)
    dig_len = sum(1 for t in tokens if has_digit(t))
    st_init = 0.5 * (seq_len - dig_len) / seq_len
    base = max(2, dig_len + 1)
    return ThresholdState(st_init=st_init, base=base, eta=0, dig_len=dig_len, seq_len=seq_len)


def current_st(state: ThresholdState) -> float:
    """Current acceptance threshold, growing with found wildcards, capped at 1."""
    return min(1.0, state.st_init + 0.5 * math.log(state.eta + 1, state.base))


def lcs(a: list, b: list) -> list:
    """Longest common subsequence over exact element equality.

    Ties in the dynamic-programming backtrace are broken deterministically so
    merged templates are reproducible run-to-run.
    """
    la, lb = len(a), len(b)
    table = [[0] * (lb + 1) for _ in range(la + 1)]
    for i in range(1, la + 1):
        row = table[i]
        prev = table[i - 1]
        ai = a[i - 1]
        for j in range(1, lb + 1):
            if ai == b[j - 1]:
                row[j] = prev[j - 1] + 1
            else:
                row[j] = prev[j] if prev[j] >= row[j - 1] else row[j - 1]
    out = []
    i, j = la, lb
    while i > 0 and j > 0:
        if a[i - 1] == b[j - 1] and table[i][j] == table[i - 1][j - 1] + 1:
            out.append(a[i - 1])
            i -= 1
            j -= 1
        elif table[i - 1][j] >= table[i][j - 1]:
            i -= 1
        else:
            j -= 1
    out.reverse()
    return out


def tem_sim(new_event: list[Token], exist_event: list[Token]) -> float:
    """Similarity of two templates: LCS length over the shorter length."""
    common = lcs(new_event, exist_event)
    return len(common) / min(len(new_event), len(exist_event))
