"""Registrable-domain (eTLD+1) reduction against a vendored suffix snapshot.

Every module that needs a canonical site identity goes through
:func:`registrable_domain`, so the suffix snapshot is versioned with the
package and domain reduction is deterministic across runs and machines.
"""

from functools import lru_cache
from importlib import resources
from urllib.parse import urlsplit

from .errors import MalformedUrl

_SNAPSHOT_RESOURCE = "public_suffix_snapshot.dat"


@lru_cache(maxsize=1)
def _suffix_rules() -> tuple[frozenset[str], frozenset[str], frozenset[str]]:
    """Parsed snapshot: (exact rules, wildcard parents, exceptions)."""
    exact: set[str] = set()
    wildcard: set[str] = set()
    exception: set[str] = set()
    text = (
        resources.files("clonewatch.data")
        .joinpath(_SNAPSHOT_RESOURCE)
        .read_text(encoding="utf-8")
    )
    for line in text.splitlines():
        rule = line.strip().lower()
        if not rule or rule.startswith("//"):
            continue
        if rule.startswith("!"):
            exception.add(rule[1:])
        elif rule.startswith("*."):
            wildcard.add(rule[2:])
        else:
            exact.add(rule)
    return frozenset(exact), frozenset(wildcard), frozenset(exception)


def _host_of(url: str) -> str:
    try:
        parts = urlsplit(url)
    except ValueError as exc:
        raise MalformedUrl(f"cannot parse URL: {url!r}") from exc
    host = parts.hostname
    if not host:
        raise MalformedUrl(f"no host in URL: {url!r}")
    return host.strip(".").lower()


def public_suffix(host: str) -> str:
    """Longest matching public suffix for `host` (default rule: last label)."""
    exact, wildcard, exception = _suffix_rules()
    labels = host.split(".")
    for i in range(len(labels)):
        candidate = ".".join(labels[i:])
        if candidate in exception:
            # Exception rules mark the registrable domain itself.
            return ".".join(labels[i + 1 :])
        if candidate in exact:
            return candidate
        parent = ".".join(labels[i + 1 :])
        if parent and parent in wildcard:
            return candidate
    return labels[-1]


def registrable_domain(url: str) -> str:
    """Reduce a URL to its lowercased public-suffix-plus-one form.

    A leading ``www.`` label is ignored. IP literals are returned verbatim.
    Raises MalformedUrl when no host can be extracted.
    """
    host = _host_of(url)
    if _looks_like_ip(host):
        return host
    if host.startswith("www.") and host.count(".") >= 2:
        host = host[4:]
    suffix = public_suffix(host)
    if host == suffix:
        # The host IS a public suffix (e.g. "com"); nothing registrable below it.
        return host
    suffix_labels = suffix.count(".") + 1
    labels = host.split(".")
    return ".".join(labels[-(suffix_labels + 1) :])


def _looks_like_ip(host: str) -> bool:
    if ":" in host:  # bracketless IPv6 from urlsplit().hostname
        return True
    parts = host.split(".")
    return len(parts) == 4 and all(p.isdigit() for p in parts)
