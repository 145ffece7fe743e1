"""Clone indicators: machine-checkable traits of hijacked journal sites.

Each indicator inspects one trait (reused ISSN, mutated title, malformed
DOIs, recent domain registration, self-reported impact factor, free-mail
contacts, shared archive content) and reports Flagged/Clear/Unknown with a
normalized weight input. A weighted sum folds the bundle into a 0..1 score
that supports, but never replaces, the analyst's verdict.
"""

from __future__ import annotations

import csv
import enum
import logging
import re
from dataclasses import dataclass, field
from datetime import date, datetime
from pathlib import Path
from typing import Callable, Mapping, Optional, Sequence

from .textnorm import title_tokens

logger = logging.getLogger(__name__)


class IndicatorKind(enum.Enum):
    ISSN_REUSE = "issn_reuse"
    TITLE_MUTATION = "title_mutation"
    FAKE_DOI = "fake_doi"
    RECENT_DOMAIN = "recent_domain"
    IMPACT_FACTOR_CLAIM = "impact_factor_claim"
    FREE_EMAIL_CONTACT = "free_email_contact"
    SHARED_CONTENT_OVERLAP = "shared_content_overlap"


class IndicatorStatus(enum.Enum):
    FLAGGED = "flagged"
    CLEAR = "clear"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Indicator:
    kind: IndicatorKind
    status: IndicatorStatus
    detail: str = ""
    weight_input: float = 0.0

    def __post_init__(self):
        if self.status is IndicatorStatus.UNKNOWN and self.weight_input != 0.0:
            object.__setattr__(self, "weight_input", 0.0)

    def to_json(self) -> dict:
        return {
            "kind": self.kind.value,
            "status": self.status.value,
            "detail": self.detail,
            "weight_input": self.weight_input,
        }

    @classmethod
    def from_json(cls, data: dict) -> "Indicator":
        return cls(
            kind=IndicatorKind(data["kind"]),
            status=IndicatorStatus(data["status"]),
            detail=data.get("detail", ""),
            weight_input=data.get("weight_input", 0.0),
        )


def flagged(kind: IndicatorKind, detail: str, weight_input: float = 1.0) -> Indicator:
    return Indicator(kind, IndicatorStatus.FLAGGED, detail, weight_input)


def clear(kind: IndicatorKind, detail: str = "") -> Indicator:
    return Indicator(kind, IndicatorStatus.CLEAR, detail, 0.0)


def unknown(kind: IndicatorKind, detail: str = "") -> Indicator:
    return Indicator(kind, IndicatorStatus.UNKNOWN, detail, 0.0)


# -- ISSN ---------------------------------------------------------------

_ISSN_RE = re.compile(r"^\d{4}-\d{3}[\dX]$")


def validate_issn(issn: str) -> bool:
    """True iff `issn` has the NNNN-NNNC shape and its mod-11 checksum holds.

    Weights 8..2 over the first seven digits; check digit 11 - (sum mod 11),
    with 10 written as X and 11 as 0. Malformed input is simply False.
    """
    if not issn or not _ISSN_RE.match(issn):
        return False
    digits = issn.replace("-", "")
    total = sum(int(d) * w for d, w in zip(digits[:7], range(8, 1, -1)))
    remainder = total % 11
    check = 0 if remainder == 0 else 11 - remainder
    expected = "X" if check == 10 else str(check)
    return digits[7] == expected


def issn_check_digit(seven_digits: str) -> str:
    """Check digit for a 7-digit ISSN body (X means 10)."""
    if len(seven_digits) != 7 or not seven_digits.isdigit():
        raise ValueError("seven digits required")
    total = sum(int(d) * w for d, w in zip(seven_digits, range(8, 1, -1)))
    remainder = total % 11
    check = 0 if remainder == 0 else 11 - remainder
    return "X" if check == 10 else str(check)


# -- DOI ----------------------------------------------------------------

_DOI_RE = re.compile(r"^10\.\d{4,9}/\S+$")


def check_doi(doi: Optional[str],
              resolver: Callable[[str], Optional[bool]] | None = None) -> Indicator:
    """Syntax check a claimed DOI; optionally verify registration.

    Every real DOI starts with "10." followed by a numeric registrant code
    and a suffix. The optional resolver returns True (registered), False
    (not found -> flagged as unregistered) or None (lookup failed -> the
    syntax verdict stands, or Unknown if we had nothing else).
    """
    if not doi:
        return unknown(IndicatorKind.FAKE_DOI, "no DOI claimed")
    doi = doi.strip()
    if not doi.startswith("10."):
        return flagged(IndicatorKind.FAKE_DOI, f"does not start with 10.: {doi!r}")
    if not _DOI_RE.match(doi):
        return flagged(IndicatorKind.FAKE_DOI, f"malformed DOI: {doi!r}")
    if resolver is not None:
        try:
            resolved = resolver(doi)
        except Exception:
            resolved = None
        if resolved is False:
            return flagged(IndicatorKind.FAKE_DOI, f"unregistered: {doi!r}")
        if resolved is None and doi:
            # lookup failed; fall through to the syntax verdict
            pass
    return clear(IndicatorKind.FAKE_DOI, "well-formed DOI")


# -- title mutation -------------------------------------------------------

# The mutation vocabulary observed on clone sites ("Journal", "Journal of",
# "Multidisciplinary Journal", "Research", "Research journal of"), plus the
# connectives and articles those phrases decompose into.
DEFAULT_MUTATION_LEXICON = frozenset({
    "journal", "of", "research", "multidisciplinary",
    "the", "a", "an", "for", "and",
})

_LEADING_ARTICLES = ("the", "a", "an", "la", "le", "les", "der", "die", "das", "el")


def _strip_leading_article(tokens: list[str]) -> list[str]:
    if len(tokens) > 1 and tokens[0] in _LEADING_ARTICLES:
        return tokens[1:]
    return tokens


def _edit_distance(a: str, b: str, cap: int = 3) -> int:
    if abs(len(a) - len(b)) > cap:
        return cap + 1
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            current.append(min(
                previous[j] + 1,
                current[j - 1] + 1,
                previous[j - 1] + (ca != cb),
            ))
        if min(current) > cap:
            return cap + 1
        previous = current
    return previous[-1]


def _is_subsequence(needle: list[str], haystack: list[str]) -> bool:
    it = iter(haystack)
    return all(tok in it for tok in needle)


def detect_title_mutation(
    original_title: str,
    candidate_title: str,
    lexicon: frozenset[str] = DEFAULT_MUTATION_LEXICON,
) -> Indicator:
    """Compare a candidate masthead against a known legitimate title.

    Clear on an exact normalized match. Flagged when the difference is the
    classic clone pattern: decoration tokens added/removed, the whole title
    kept as a subsequence with words bolted on, a dropped leading article,
    or small spelling changes (edit distance <= 2 once decoration tokens are
    stripped). Anything bigger is Unknown: too different to call a mutation.
    """
    kind = IndicatorKind.TITLE_MUTATION
    orig = title_tokens(original_title)
    cand = title_tokens(candidate_title)
    if not orig or not cand:
        return unknown(kind, "empty title")
    if orig == cand:
        return clear(kind, "exact normalized match")

    if _strip_leading_article(orig) == _strip_leading_article(cand):
        return flagged(kind, "leading article changed", 1.0)

    added = _multiset_diff(cand, orig)
    removed = _multiset_diff(orig, cand)
    if added or removed:
        if all(tok in lexicon for tok in added + removed):
            return flagged(kind, _diff_detail(added, removed), 1.0)

    shorter, longer = (orig, cand) if len(orig) <= len(cand) else (cand, orig)
    if _is_subsequence(shorter, longer) and (
        len(shorter) >= 2 or any(tok in lexicon for tok in added + removed)
    ):
        return flagged(kind, _diff_detail(added, removed), 1.0)

    orig_stripped = " ".join(t for t in orig if t not in lexicon)
    cand_stripped = " ".join(t for t in cand if t not in lexicon)
    distance = _edit_distance(orig_stripped, cand_stripped, cap=2)
    if distance <= 2:
        extras = _diff_detail(added, removed)
        return flagged(kind, f"letters changed (edit distance {distance}); {extras}", 1.0)

    return unknown(kind, "titles differ beyond the mutation patterns")


def _multiset_diff(a: list[str], b: list[str]) -> list[str]:
    from collections import Counter

    diff = Counter(a) - Counter(b)
    return sorted(diff.elements())


def _diff_detail(added: list[str], removed: list[str]) -> str:
    parts = []
    if added:
        parts.append("added: " + " ".join(added))
    if removed:
        parts.append("removed: " + " ".join(removed))
    return "; ".join(parts) or "token order changed"


# -- impact factor / emails ------------------------------------------------

FAKE_IF_RANGE = (1.07, 6.3)
FAKE_IF_MODE = 6.1

DEFAULT_FREEMAIL_PROVIDERS = frozenset({
    "gmail.com", "yahoo.com", "yahoo.in", "hotmail.com", "outlook.com",
    "aol.com", "mail.ru", "yandex.ru", "rediffmail.com", "protonmail.com",
    "zoho.com", "gmx.com", "qq.com", "163.com", "126.com", "icloud.com",
    "live.com", "msn.com", "ymail.com", "inbox.ru",
})


def flag_impact_factor(claimed: Optional[float]) -> Indicator:
    """Any self-reported impact factor on a journal's own site is a flag.

    Legitimate impact factors are assigned by citation databases, not
    self-declared. The detail notes when the value sits inside the range
    observed on clone sites, and calls out the modal value.
    """
    kind = IndicatorKind.IMPACT_FACTOR_CLAIM
    if claimed is None:
        return unknown(kind, "no impact factor claim found")
    lo, hi = FAKE_IF_RANGE
    if lo <= claimed <= hi:
        detail = f"self-reported impact factor {claimed:g} within observed fake range"
        if abs(claimed - FAKE_IF_MODE) < 1e-9:
            detail += "; modal value"
        return flagged(kind, detail, 1.0)
    return flagged(kind, f"self-reported impact factor {claimed:g}", 1.0)


def flag_contact_emails(
    emails: Sequence[str],
    freemail_providers: frozenset[str] = DEFAULT_FREEMAIL_PROVIDERS,
) -> Indicator:
    """Flag when at least half of the contact addresses are free-mail."""
    kind = IndicatorKind.FREE_EMAIL_CONTACT
    if not emails:
        return unknown(kind, "no contact emails found")
    domains = [e.rsplit("@", 1)[-1].lower() for e in emails if "@" in e]
    if not domains:
        return unknown(kind, "no parseable contact emails")
    free = [d for d in domains if d in freemail_providers]
    fraction = len(free) / len(domains)
    if fraction >= 0.5:
        return flagged(
            kind,
            f"{len(free)}/{len(domains)} contact addresses on free providers "
            f"({', '.join(sorted(set(free)))})",
            fraction,
        )
    if free:
        return clear(kind, f"minority free-mail ({len(free)}/{len(domains)})")
    return clear(kind, "all contact addresses institutional")


# -- domain age -------------------------------------------------------------


class RegistrationSource(enum.Enum):
    RDAP = "rdap"
    WHOIS_TEXT = "whois_text"
    UNAVAILABLE = "unavailable"


@dataclass(frozen=True)
class DomainRegistration:
    domain: str
    created: Optional[date] = None
    updated: Optional[date] = None
    registrant_redacted: bool = False
    source: RegistrationSource = RegistrationSource.UNAVAILABLE

    def to_json(self) -> dict:
        return {
            "domain": self.domain,
            "created": self.created.isoformat() if self.created else None,
            "updated": self.updated.isoformat() if self.updated else None,
            "registrant_redacted": self.registrant_redacted,
            "source": self.source.value,
        }

    @classmethod
    def from_json(cls, data: dict) -> "DomainRegistration":
        return cls(
            domain=data["domain"],
            created=date.fromisoformat(data["created"]) if data.get("created") else None,
            updated=date.fromisoformat(data["updated"]) if data.get("updated") else None,
            registrant_redacted=data.get("registrant_redacted", False),
            source=RegistrationSource(data.get("source", "unavailable")),
        )


def assess_domain_age(
    domain: str,
    registration_provider,
    run_date: date,
    window_months: int = 36,
) -> tuple[DomainRegistration, Indicator]:
    """Flag domains registered or updated within the recency window.

    Expired domains re-registered by hijackers keep an old creation date but
    show a fresh update, so the later of the two dates is what counts.
    Lookup failures degrade to Unknown, never to errors.
    """
    kind = IndicatorKind.RECENT_DOMAIN
    try:
        registration: DomainRegistration = registration_provider.lookup(domain)
    except Exception as exc:
        logger.warning("registration lookup failed for %s: %s", domain, exc)
        registration = DomainRegistration(domain=domain)
    if registration.source is RegistrationSource.UNAVAILABLE or (
        registration.created is None and registration.updated is None
    ):
        return registration, unknown(kind, "registration dates unavailable")
    candidates = [d for d in (registration.created, registration.updated) if d]
    latest = max(candidates)
    age_months = (run_date.year - latest.year) * 12 + (run_date.month - latest.month)
    detail = (
        f"created {registration.created.isoformat() if registration.created else 'n/a'}, "
        f"updated {registration.updated.isoformat() if registration.updated else 'n/a'}"
    )
    if 0 <= age_months <= window_months:
        freshness = max(0.0, 1.0 - age_months / max(window_months, 1))
        return registration, flagged(
            kind, f"{detail}; active within {window_months} months of run date",
            max(freshness, 0.25),
        )
    return registration, clear(kind, detail)


# -- evidence bundle and score ----------------------------------------------

DEFAULT_WEIGHTS: Mapping[IndicatorKind, float] = {
    IndicatorKind.SHARED_CONTENT_OVERLAP: 0.35,
    IndicatorKind.ISSN_REUSE: 0.15,
    IndicatorKind.TITLE_MUTATION: 0.15,
    IndicatorKind.FAKE_DOI: 0.10,
    IndicatorKind.RECENT_DOMAIN: 0.10,
    IndicatorKind.IMPACT_FACTOR_CLAIM: 0.10,
    IndicatorKind.FREE_EMAIL_CONTACT: 0.05,
}

OVERLAP_SATURATION = 5  # shared titles at which the overlap signal maxes out


@dataclass
class EvidenceBundle:
    domain: str
    indicators: list[Indicator] = field(default_factory=list)
    shared_titles: list[tuple[str, str]] = field(default_factory=list)
    registration: Optional[DomainRegistration] = None
    collected_at: str = ""

    def __post_init__(self):
        kinds = [i.kind for i in self.indicators]
        if len(kinds) != len(set(kinds)):
            raise ValueError("at most one indicator per kind")

    def indicator(self, kind: IndicatorKind) -> Optional[Indicator]:
        for ind in self.indicators:
            if ind.kind is kind:
                return ind
        return None

    def to_json(self) -> dict:
        return {
            "domain": self.domain,
            "indicators": [i.to_json() for i in self.indicators],
            "shared_titles": [list(pair) for pair in self.shared_titles],
            "registration": self.registration.to_json() if self.registration else None,
            "collected_at": self.collected_at,
        }

    @classmethod
    def from_json(cls, data: dict) -> "EvidenceBundle":
        return cls(
            domain=data["domain"],
            indicators=[Indicator.from_json(i) for i in data.get("indicators", [])],
            shared_titles=[tuple(p) for p in data.get("shared_titles", [])],
            registration=(
                DomainRegistration.from_json(data["registration"])
                if data.get("registration")
                else None
            ),
            collected_at=data.get("collected_at", ""),
        )


@dataclass(frozen=True)
class CloneScore:
    value: float
    contributing: tuple[tuple[IndicatorKind, float], ...]

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "contributing": [[k.value, c] for k, c in self.contributing],
        }


def shared_overlap_indicator(shared_count: int,
                             saturation: int = OVERLAP_SATURATION) -> Indicator:
    kind = IndicatorKind.SHARED_CONTENT_OVERLAP
    if shared_count <= 0:
        return unknown(kind, "no shared titles observed")
    return flagged(
        kind,
        f"{shared_count} archive titles shared with known sites",
        min(1.0, shared_count / saturation),
    )


def score(evidence: EvidenceBundle,
          weights: Mapping[IndicatorKind, float] = DEFAULT_WEIGHTS) -> CloneScore:
    """Weighted sum of flagged indicators, clamped to [0, 1].

    Monotone in every indicator and invariant under reordering; the
    contribution list sums to the pre-clamp value.
    """
    contributions: list[tuple[IndicatorKind, float]] = []
    for kind in IndicatorKind:
        ind = evidence.indicator(kind)
        if ind is None or ind.status is not IndicatorStatus.FLAGGED:
            continue
        weight = weights.get(kind, 0.0)
        if weight < 0:
            raise ValueError(f"negative weight for {kind}")
        contributions.append((kind, weight * ind.weight_input))
    total = sum(c for _, c in contributions)
    return CloneScore(value=min(1.0, total), contributing=tuple(contributions))


# -- site fact extraction ------------------------------------------------------

_EMAIL_RE = re.compile(r"[\w.+-]+@[\w-]+(?:\.[\w-]+)+")
_ISSN_SCAN_RE = re.compile(r"\b(\d{4}-\d{3}[\dXx])\b")
_IF_SCAN_RE = re.compile(r"impact\s*factor\s*[:=]?\s*(\d+(?:\.\d+)?)", re.IGNORECASE)
_DOI_SCAN_RE = re.compile(r"\bDOI\s*:?\s*([^\s<>\"']+)", re.IGNORECASE)


@dataclass
class SiteFacts:
    """What a single landing page reveals about a site."""

    masthead_title: str = ""
    issns: list[str] = field(default_factory=list)
    impact_factor: Optional[float] = None
    emails: list[str] = field(default_factory=list)
    dois: list[str] = field(default_factory=list)


def extract_site_facts(html_text: str) -> SiteFacts:
    from . import htmlparse

    root = htmlparse.parse_html(html_text)
    masthead = ""
    h1 = htmlparse.select_one(root, "h1")
    if h1 is not None:
        masthead = h1.text()
    if not masthead:
        title_node = htmlparse.select_one(root, "title")
        if title_node is not None:
            masthead = title_node.text()
    flat = root.text()
    issns = sorted({m.upper() for m in _ISSN_SCAN_RE.findall(flat)})
    if_match = _IF_SCAN_RE.search(flat)
    impact = float(if_match.group(1)) if if_match else None
    emails = sorted({m.lower() for m in _EMAIL_RE.findall(flat)})
    dois = [m.rstrip(".,;") for m in _DOI_SCAN_RE.findall(flat)]
    return SiteFacts(
        masthead_title=masthead,
        issns=issns,
        impact_factor=impact,
        emails=emails,
        dois=dois,
    )


# -- registry of legitimate journals ----------------------------------------


@dataclass(frozen=True)
class RegistryEntry:
    """One known legitimate journal: title alternatives plus its ISSNs."""

    titles: tuple[str, ...]
    issns: tuple[str, ...]


def _split_alternatives(raw_title: str) -> tuple[str, ...]:
    """Split dual-language/renamed titles and drop parenthetical qualifiers."""
    alts: list[str] = []
    for part in re.split(r"\s*/\s*", raw_title):
        part = part.strip()
        if not part:
            continue
        no_paren = re.sub(r"\s*\([^)]*\)", "", part).strip()
        for candidate in (part, no_paren):
            if candidate and candidate not in alts:
                alts.append(candidate)
        paren = re.findall(r"\(([^)]+)\)", part)
        for inner in paren:
            inner = inner.strip()
            # parenthetical alternates, but not ISSNs or date ranges
            if inner and not re.search(r"\d{4}", inner) and inner not in alts:
                alts.append(inner)
    return tuple(alts)


def load_registry(path: str | Path) -> list[RegistryEntry]:
    """Load the legitimate-journal registry CSV.

    Expected columns: clone_title, clone_url, clone_issn, original_title,
    original_issn. Multiple ISSNs in one cell are ';'-separated.
    """
    entries: list[RegistryEntry] = []
    with open(path, newline="", encoding="utf-8") as fp:
        for row in csv.DictReader(fp):
            title = row.get("original_title", "").strip()
            issns = tuple(
                s.strip() for s in row.get("original_issn", "").split(";") if s.strip()
            )
            if title:
                entries.append(RegistryEntry(titles=_split_alternatives(title), issns=issns))
    return entries


def registry_lookup_by_issn(registry: Sequence[RegistryEntry], issns: Sequence[str]):
    wanted = set(issns)
    for entry in registry:
        if wanted & set(entry.issns):
            return entry
    return None


def best_title_mutation(
    entry: RegistryEntry,
    candidate_title: str,
    lexicon: frozenset[str] = DEFAULT_MUTATION_LEXICON,
) -> Indicator:
    """Mutation verdict against the best-matching title alternative."""
    order = {IndicatorStatus.CLEAR: 0, IndicatorStatus.FLAGGED: 1,
             IndicatorStatus.UNKNOWN: 2}
    best: Indicator | None = None
    for alt in entry.titles:
        result = detect_title_mutation(alt, candidate_title, lexicon)
        if best is None or order[result.status] < order[best.status]:
            best = result
        if best.status is IndicatorStatus.CLEAR:
            break
    return best if best is not None else unknown(IndicatorKind.TITLE_MUTATION)


# -- bundle assembly -----------------------------------------------------------


def build_evidence(
    domain: str,
    facts: SiteFacts | None,
    shared_titles: Sequence[tuple[str, str]],
    registry: Sequence[RegistryEntry] | None,
    registration_provider,
    run_date: date,
    collected_at: str,
    window_months: int = 36,
    freemail_providers: frozenset[str] = DEFAULT_FREEMAIL_PROVIDERS,
    lexicon: frozenset[str] = DEFAULT_MUTATION_LEXICON,
    overlap_saturation: int = OVERLAP_SATURATION,
) -> EvidenceBundle:
    """Fold site facts, hit overlap and registration data into one bundle."""
    indicators: list[Indicator] = []

    if facts is None:
        indicators.append(unknown(IndicatorKind.ISSN_REUSE, "site not probed"))
        indicators.append(unknown(IndicatorKind.TITLE_MUTATION, "site not probed"))
        indicators.append(unknown(IndicatorKind.FAKE_DOI, "site not probed"))
        indicators.append(unknown(IndicatorKind.IMPACT_FACTOR_CLAIM, "site not probed"))
        indicators.append(unknown(IndicatorKind.FREE_EMAIL_CONTACT, "site not probed"))
    else:
        entry = registry_lookup_by_issn(registry, facts.issns) if registry else None
        if entry is not None:
            indicators.append(flagged(
                IndicatorKind.ISSN_REUSE,
                f"ISSN {', '.join(sorted(set(facts.issns) & set(entry.issns)))} "
                f"belongs to {entry.titles[0]!r}",
                1.0,
            ))
        elif facts.issns:
            invalid = [i for i in facts.issns if not validate_issn(i)]
            if invalid:
                indicators.append(flagged(
                    IndicatorKind.ISSN_REUSE,
                    f"displayed ISSN fails checksum: {', '.join(invalid)}",
                    0.5,
                ))
            else:
                indicators.append(clear(IndicatorKind.ISSN_REUSE,
                                        "displayed ISSN not tied to a known journal"))
        else:
            indicators.append(unknown(IndicatorKind.ISSN_REUSE, "no ISSN displayed"))

        if entry is not None and facts.masthead_title:
            indicators.append(best_title_mutation(entry, facts.masthead_title, lexicon))
        else:
            indicators.append(unknown(IndicatorKind.TITLE_MUTATION,
                                      "no registry match for displayed ISSN"))

        if facts.dois:
            results = [check_doi(d) for d in facts.dois]
            bad = [r for r in results if r.status is IndicatorStatus.FLAGGED]
            if bad:
                indicators.append(flagged(
                    IndicatorKind.FAKE_DOI,
                    f"{len(bad)}/{len(results)} displayed DOIs malformed "
                    f"(e.g. {bad[0].detail})",
                    len(bad) / len(results),
                ))
            else:
                indicators.append(clear(IndicatorKind.FAKE_DOI,
                                        "all displayed DOIs well-formed"))
        else:
            indicators.append(unknown(IndicatorKind.FAKE_DOI, "no DOIs displayed"))

        indicators.append(flag_impact_factor(facts.impact_factor))
        indicators.append(flag_contact_emails(facts.emails, freemail_providers))

    registration, recent = assess_domain_age(
        domain, registration_provider, run_date, window_months
    )
    indicators.append(recent)
    indicators.append(shared_overlap_indicator(len(shared_titles), overlap_saturation))

    return EvidenceBundle(
        domain=domain,
        indicators=indicators,
        shared_titles=sorted(set(shared_titles)),
        registration=registration,
        collected_at=collected_at,
    )


class StaticRegistrationProvider:
    """Registration dates from a fixed mapping (corpus manifests, tests)."""

    def __init__(self, table: Mapping[str, DomainRegistration]):
        self.table = dict(table)

    def lookup(self, domain: str) -> DomainRegistration:
        if domain not in self.table:
            return DomainRegistration(domain=domain)
        return self.table[domain]


class NullRegistrationProvider:
    """Always unavailable; for runs where registration data is not wanted."""

    def lookup(self, domain: str) -> DomainRegistration:
        return DomainRegistration(domain=domain)


def parse_date_loose(value: str) -> Optional[date]:
    """Parse the date shapes RDAP and whois dumps actually produce."""
    value = value.strip()
    for fmt in ("%Y-%m-%dT%H:%M:%S%z", "%Y-%m-%dT%H:%M:%SZ", "%Y-%m-%d",
                "%d-%b-%Y", "%Y.%m.%d", "%d.%m.%Y"):
        try:
            parsed = datetime.strptime(value, fmt)
            return parsed.date()
        except ValueError:
            continue
    match = re.match(r"(\d{4})-(\d{2})-(\d{2})", value)
    if match:
        return date(int(match.group(1)), int(match.group(2)), int(match.group(3)))
    return None
