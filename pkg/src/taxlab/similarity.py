"""String normalization and similarity primitives for keyword matching.

All comparisons are case-insensitive: inputs are Unicode-normalized (NFKC)
and case-folded before anything else happens.
"""

from __future__ import annotations

import re
import unicodedata

_WORD_RE = re.compile(r"[^\W_]+(?:-[^\W_]+)*", re.UNICODE)
_NEG_INF = float("-inf")


def _fold(text: str) -> str:
    return unicodedata.normalize("NFKC", text).casefold()


def normalize(text: str) -> list[str]:
    """Tokenize text for matching.

    Case-folds, Unicode-normalizes, splits on non-alphanumeric runs.
    A hyphenated word contributes BOTH its joined form and its parts, so
    "Self-Checksumming!" -> ["selfchecksumming", "self", "checksumming"].
    """
    tokens: list[str] = []
    for match in _WORD_RE.finditer(_fold(text)):
        word = match.group(0)
        if "-" in word:
            tokens.append(word.replace("-", ""))
            tokens.extend(part for part in word.split("-") if part)
        else:
            tokens.append(word)
    return tokens


def normalize_term(term: str) -> list[str]:
    """Tokenize a search term. Hyphenated words keep only the joined form
    (expanding them would corrupt the token-window width)."""
    tokens: list[str] = []
    for match in _WORD_RE.finditer(_fold(term)):
        tokens.append(match.group(0).replace("-", ""))
    return tokens


def _bigrams(s: str) -> dict[str, int]:
    counts: dict[str, int] = {}
    for i in range(len(s) - 1):
        pair = s[i : i + 2]
        counts[pair] = counts.get(pair, 0) + 1
    return counts


def dice_similarity(a: str, b: str) -> float:
    """Dice coefficient over character-bigram multisets of the folded inputs.

    Strings shorter than 2 characters compare by exact equality (1.0/0.0).
    dice_similarity("night", "nacht") == 0.25.
    """
    a, b = _fold(a), _fold(b)
    if len(a) < 2 or len(b) < 2:
        return 1.0 if a == b else 0.0
    xs, ys = _bigrams(a), _bigrams(b)
    shared = sum(min(count, ys.get(pair, 0)) for pair, count in xs.items())
    return 2.0 * shared / (len(a) - 1 + len(b) - 1)


def levenshtein_distance(a: str, b: str) -> int:
    """Classic edit distance (insert/delete/substitute, unit costs) on the
    folded inputs. levenshtein_distance("kitten", "sitting") == 3."""
    a, b = _fold(a), _fold(b)
    if a == b:
        return 0
    if len(a) < len(b):
        a, b = b, a
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            current.append(
                min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + (ca != cb))
            )
        previous = current
    return previous[-1]


def levenshtein_within(a: str, b: str, limit: int) -> bool:
    """True iff edit distance <= limit. Banded DP, cheap rejection first."""
    a, b = _fold(a), _fold(b)
    if limit < 0:
        return False
    if abs(len(a) - len(b)) > limit:
        return False
    if a == b:
        return True
    if len(a) < len(b):
        a, b = b, a
    width = limit
    previous = list(range(len(b) + 1))
    big = limit + 1
    for i, ca in enumerate(a, start=1):
        lo = max(1, i - width)
        hi = min(len(b), i + width)
        current = [big] * (len(b) + 1)
        if lo == 1:
            current[0] = i
        for j in range(lo, hi + 1):
            cb = b[j - 1]
            current[j] = min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + (ca != cb))
        if min(current[lo - 1 : hi + 1]) > limit:
            return False
        previous = current
    return previous[len(b)] <= limit


def fuzzy_score(query: str, target: str) -> float | None:
    """Subsequence match score, 0 for exact equality, more negative is worse.

    None when the folded query is not a subsequence of the folded target
    (or the query is empty). Otherwise the best score over all match
    embeddings of::

        0 - (target chars skipped inside the match span)
          - 3 * (non-contiguous runs beyond the first)
          - (target chars after the match span)

    which reduces to maximizing span_start - 3*(runs-1), since the skip and
    trailing terms sum to len(target) - span_start - len(query).
    """
    q, t = _fold(query), _fold(target)
    if not q or len(q) > len(t):
        return None
    nq, nt = len(q), len(t)
    # best[i]: max over embeddings of q[..j] ending at t[i] of span_start - 3*(runs-1)
    best = [_NEG_INF] * nt
    first = q[0]
    for i, ch in enumerate(t):
        if ch == first:
            best[i] = float(i)
    for j in range(1, nq):
        qc = q[j]
        nxt = [_NEG_INF] * nt
        prefix_max = _NEG_INF  # max(best[i']) for i' <= i-2
        for i in range(j, nt):
            if i >= 2:
                prefix_max = max(prefix_max, best[i - 2])
            if t[i] != qc:
                continue
            contiguous = best[i - 1]  # valid only if q[j-1] matched at i-1
            broken = prefix_max - 3.0 if prefix_max != _NEG_INF else _NEG_INF
            nxt[i] = max(contiguous, broken)
        best = nxt
    top = max(best)
    if top == _NEG_INF:
        return None
    return top + nq - nt
