"""Title normalization used for dedup, query building and overlap matching."""

import re
import unicodedata

_PUNCT_RE = re.compile(r"[^\w\s]|_")
_WS_RE = re.compile(r"\s+")


def normalize_title(text: str) -> str:
    """Normalize a title so near-identical strings compare equal.

    Steps: Unicode NFKD decomposition, drop combining marks (folds diacritics
    to base letters), lowercase, replace punctuation with spaces, collapse
    whitespace runs, trim. Idempotent by construction.
    """
    if not text:
        return ""
    decomposed = unicodedata.normalize("NFKD", text)
    stripped = "".join(c for c in decomposed if unicodedata.category(c) != "Mn")
    lowered = stripped.lower()
    no_punct = _PUNCT_RE.sub(" ", lowered)
    return _WS_RE.sub(" ", no_punct).strip()


def title_tokens(text: str) -> list[str]:
    """Normalized title split into tokens (empty list for blank input)."""
    norm = normalize_title(text)
    return norm.split() if norm else []


def ascii_letter_ratio(text: str) -> float:
    """Fraction of letters in `text` that are ASCII; 1.0 when no letters.

    Used by the optional language filter: retain records whose title is
    mostly ASCII letters, approximating an English-only search.
    """
    letters = [c for c in text if c.isalpha()]
    if not letters:
        return 1.0
    ascii_count = sum(1 for c in letters if ord(c) < 128)
    return ascii_count / len(letters)
