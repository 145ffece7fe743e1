"""RDAP domain registration lookups with caching and a whois-text fallback.

RDAP is the structured successor to whois; rdap.org redirects to the
registry responsible for each TLD. Lookups are rate limited, cached through
the store, and degrade to "unavailable" rather than raising: a missing
registration date just weakens one indicator.
"""

from __future__ import annotations

import json
import logging
import re
import time

from .heuristics import DomainRegistration, RegistrationSource, parse_date_loose

logger = logging.getLogger(__name__)

DEFAULT_RDAP_ENDPOINT = "https://rdap.org/domain/"


class RdapClient:
    def __init__(self, endpoint: str = DEFAULT_RDAP_ENDPOINT, store=None,
                 min_interval: float = 1.0, timeout: float = 15.0):
        self.endpoint = endpoint.rstrip("/") + "/"
        self.store = store
        self.min_interval = min_interval
        self.timeout = timeout
        self._last_call = 0.0

    def lookup(self, domain: str) -> DomainRegistration:
        if self.store is not None:
            cached = self.store.cache_get("rdap", domain)
            if cached is not None:
                return DomainRegistration.from_json(json.loads(cached.decode("utf-8")))
        registration = self._lookup_live(domain)
        if self.store is not None and registration.source is not RegistrationSource.UNAVAILABLE:
            self.store.cache_put(
                "rdap", domain,
                json.dumps(registration.to_json()).encode("utf-8"),
            )
        return registration

    def _lookup_live(self, domain: str) -> DomainRegistration:
        import requests

        wait = self.min_interval - (time.monotonic() - self._last_call)
        if wait > 0:
            time.sleep(wait)
        self._last_call = time.monotonic()
        try:
            resp = requests.get(self.endpoint + domain, timeout=self.timeout,
                                headers={"Accept": "application/rdap+json"})
        except requests.RequestException as exc:
            logger.warning("RDAP lookup failed for %s: %s", domain, exc)
            return DomainRegistration(domain=domain)
        if resp.status_code != 200:
            logger.warning("RDAP answered %s for %s", resp.status_code, domain)
            return DomainRegistration(domain=domain)
        try:
            return parse_rdap_response(domain, resp.json())
        except ValueError:
            return DomainRegistration(domain=domain)


def parse_rdap_response(domain: str, data: dict) -> DomainRegistration:
    created = updated = None
    for event in data.get("events", []):
        action = event.get("eventAction", "").lower()
        stamp = event.get("eventDate", "")
        parsed = parse_date_loose(stamp) if stamp else None
        if parsed is None:
            continue
        if action == "registration":
            created = parsed
        elif action in ("last changed", "last update of rdap database", "last updated"):
            if action == "last changed":
                updated = parsed
    redacted = _looks_redacted(data)
    if created and updated and updated < created:
        updated = None  # inconsistent registries; keep the trustworthy date
    return DomainRegistration(
        domain=domain,
        created=created,
        updated=updated,
        registrant_redacted=redacted,
        source=RegistrationSource.RDAP,
    )


def _looks_redacted(data: dict) -> bool:
    blob = json.dumps(data.get("entities", []))
    return bool(re.search(r"redact|privacy|data protected", blob, re.IGNORECASE))


_WHOIS_CREATED_RE = re.compile(
    r"(?:creation date|created(?: on)?|registered(?: on)?)\s*[:.]?\s*(\S+)",
    re.IGNORECASE,
)
_WHOIS_UPDATED_RE = re.compile(
    r"(?:updated date|last updated(?: on)?|changed)\s*[:.]?\s*(\S+)",
    re.IGNORECASE,
)


def parse_whois_text(domain: str, text: str) -> DomainRegistration:
    """Fallback parser for cached plain-text whois responses."""
    created = updated = None
    created_match = _WHOIS_CREATED_RE.search(text)
    if created_match:
        created = parse_date_loose(created_match.group(1))
    updated_match = _WHOIS_UPDATED_RE.search(text)
    if updated_match:
        updated = parse_date_loose(updated_match.group(1))
    if created is None and updated is None:
        return DomainRegistration(domain=domain)
    if created and updated and updated < created:
        updated = None
    redacted = bool(re.search(r"redact|privacy", text, re.IGNORECASE))
    return DomainRegistration(
        domain=domain,
        created=created,
        updated=updated,
        registrant_redacted=redacted,
        source=RegistrationSource.WHOIS_TEXT,
    )
