"""String-similarity measures, all normalized to the unit interval.

Three families are implemented: edit-based measures on whole strings
(Levenshtein, Jaro, Jaro-Winkler, Smith-Waterman) and token/hybrid
measures on token collections (Jaccard, Monge-Elkan).

Shared conventions:

* every function returns a float in [0, 1];
* identical non-empty inputs score exactly 1.0;
* every function is symmetric in its two operands (Monge-Elkan is
  symmetrized by averaging both directions);
* inputs are assumed to be normalized text (see
  :func:`authorlink.records.normalize_text`); no case folding or
  whitespace handling happens here.

Empty-input conventions: the edit and set measures treat two empty
operands as vacuously equal (1.0), while the alignment and hybrid
measures return 0.0 whenever either operand is empty.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from authorlink.errors import ConfigError

__all__ = [
    "AlignmentParams",
    "INNER_METRICS",
    "jaccard_sim",
    "jaro",
    "jaro_winkler",
    "levenshtein_sim",
    "monge_elkan",
    "smith_waterman_sim",
    "token_list",
    "token_set",
]

_WINKLER_PREFIX_SCALE = 0.1
_WINKLER_PREFIX_CAP = 4


def token_list(text: str) -> list[str]:
    """Whitespace tokens of ``text``, in order, empty tokens dropped."""
    return text.split()


def token_set(text: str) -> set[str]:
    """Whitespace tokens of ``text`` with set semantics."""
    return set(text.split())


def _edit_distance(a: str, b: str) -> int:
    """Unit-cost edit distance via the classic two-row dynamic program."""
    la, lb = len(a), len(b)
    if la < lb:
        a, b, la, lb = b, a, lb, la
    if lb == 0:
        return la
    prev = list(range(lb + 1))
    for i in range(1, la + 1):
        ca = a[i - 1]
        cur = [i] + [0] * lb
        for j in range(1, lb + 1):
            best = prev[j - 1] + (ca != b[j - 1])
            up = prev[j] + 1
            if up < best:
                best = up
            left = cur[j - 1] + 1
            if left < best:
                best = left
            cur[j] = best
        prev = cur
    return prev[lb]


def levenshtein_sim(a: str, b: str) -> float:
    """1 - dist(a, b) / max(|a|, |b|); 1.0 when both strings are empty."""
    if a == b:
        return 1.0
    la, lb = len(a), len(b)
    if la == 0 or lb == 0:
        return 0.0
    return 1.0 - _edit_distance(a, b) / max(la, lb)


def jaro(a: str, b: str) -> float:
    """Jaro similarity.

    Characters match when equal and within a window of
    floor(max(|a|, |b|) / 2) - 1 positions; t is half the number of
    positions where the two matched sequences disagree.  Returns 0.0
    when nothing matches and 1.0 when both strings are empty.
    """
    if a == b:
        return 1.0
    la, lb = len(a), len(b)
    if la == 0 or lb == 0:
        return 0.0
    window = max(la, lb) // 2 - 1
    if window < 0:
        window = 0
    a_matched = [False] * la
    b_matched = [False] * lb
    m = 0
    for i, ch in enumerate(a):
        lo = i - window if i > window else 0
        hi = i + window + 1
        if hi > lb:
            hi = lb
        for j in range(lo, hi):
            if not b_matched[j] and b[j] == ch:
                a_matched[i] = True
                b_matched[j] = True
                m += 1
                break
    if m == 0:
        return 0.0
    b_seq = [b[j] for j in range(lb) if b_matched[j]]
    k = 0
    mismatches = 0
    for i in range(la):
        if a_matched[i]:
            if a[i] != b_seq[k]:
                mismatches += 1
            k += 1
    t = mismatches / 2.0
    return (m / la + m / lb + (m - t) / m) / 3.0


def jaro_winkler(a: str, b: str) -> float:
    """Jaro with a prefix boost: j + l * 0.1 * (1 - j), prefix capped at 4.

    The boost is applied for any Jaro value (no boost threshold), so the
    result always dominates :func:`jaro`.
    """
    j = jaro(a, b)
    prefix = 0
    for ca, cb in zip(a[:_WINKLER_PREFIX_CAP], b[:_WINKLER_PREFIX_CAP]):
        if ca != cb:
            break
        prefix += 1
    return j + prefix * _WINKLER_PREFIX_SCALE * (1.0 - j)


def jaccard_sim(a: Iterable[str], b: Iterable[str]) -> float:
    """|a & b| / |a | b| on token sets; 1.0 when both sets are empty."""
    sa, sb = set(a), set(b)
    if not sa and not sb:
        return 1.0
    union = len(sa | sb)
    if union == 0:
        return 1.0
    return len(sa & sb) / union


@dataclass(frozen=True)
class AlignmentParams:
    """Smith-Waterman scoring scheme.

    The match reward must be positive; mismatch and gap penalties must
    not be positive.
    """

    match_score: float = 1.0
    mismatch_penalty: float = -1.0
    gap_penalty: float = -1.0

    def __post_init__(self) -> None:
        if self.match_score <= 0:
            raise ConfigError(f"match_score must be positive, got {self.match_score}")
        if self.mismatch_penalty > 0:
            raise ConfigError(
                f"mismatch_penalty must be <= 0, got {self.mismatch_penalty}"
            )
        if self.gap_penalty > 0:
            raise ConfigError(f"gap_penalty must be <= 0, got {self.gap_penalty}")


_DEFAULT_ALIGNMENT = AlignmentParams()


def smith_waterman_sim(
    a: str, b: str, params: AlignmentParams = _DEFAULT_ALIGNMENT
) -> float:
    """Best local-alignment score, normalized to [0, 1].

    The dynamic program floors every cell at zero (local alignment) and
    the best score is divided by match_score * min(|a|, |b|), the score
    of a perfect alignment of the shorter string.  Returns 0.0 when
    either string is empty.
    """
    la, lb = len(a), len(b)
    if la == 0 or lb == 0:
        return 0.0
    if a == b:
        return 1.0
    match = params.match_score
    mismatch = params.mismatch_penalty
    gap = params.gap_penalty
    best = 0.0
    prev = [0.0] * (lb + 1)
    for i in range(1, la + 1):
        ca = a[i - 1]
        cur = [0.0] * (lb + 1)
        for j in range(1, lb + 1):
            score = prev[j - 1] + (match if ca == b[j - 1] else mismatch)
            up = prev[j] + gap
            if up > score:
                score = up
            left = cur[j - 1] + gap
            if left > score:
                score = left
            if score < 0.0:
                score = 0.0
            cur[j] = score
            if score > best:
                best = score
        prev = cur
    return best / (match * min(la, lb))


#: Character-level measures usable as the inner metric of Monge-Elkan.
INNER_METRICS: dict[str, Callable[[str, str], float]] = {
    "levenshtein": levenshtein_sim,
    "jaro": jaro,
    "jaro_winkler": jaro_winkler,
    "smith_waterman": smith_waterman_sim,
}


def monge_elkan(
    a: Sequence[str], b: Sequence[str], inner: str = "jaro_winkler"
) -> float:
    """Symmetrized Monge-Elkan similarity over two token sequences.

    The directed score me(a, b) averages, per token of ``a``, the best
    inner-metric match among tokens of ``b``; the result is the mean of
    both directions, which makes the measure symmetric and invariant
    under token reordering.  Returns 0.0 when either sequence is empty.
    """
    try:
        inner_fn = INNER_METRICS[inner]
    except KeyError:
        raise ConfigError(
            f"unknown inner metric {inner!r}; expected one of {sorted(INNER_METRICS)}"
        ) from None
    if not a or not b:
        return 0.0
    return (_directed_monge_elkan(a, b, inner_fn) + _directed_monge_elkan(b, a, inner_fn)) / 2.0


def _directed_monge_elkan(
    xs: Sequence[str], ys: Sequence[str], inner_fn: Callable[[str, str], float]
) -> float:
    total = 0.0
    for x in xs:
        best = 0.0
        for y in ys:
            s = inner_fn(x, y)
            if s > best:
                best = s
                if best >= 1.0:
                    break
        total += best
    return total / len(xs)
