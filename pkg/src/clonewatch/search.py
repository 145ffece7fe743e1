"""Query building and execution against a pluggable search provider.

A query is built per retained archive record in one of three formats: the
exact title as a quoted phrase, optionally followed by author names and then
affiliation strings as unquoted terms. Providers only need to turn a query
string into a ranked URL list, so a fixture index and a live HTTP API are
interchangeable.
"""

from __future__ import annotations

import json
import logging
import time
from typing import Protocol, Sequence

from .clock import Clock, SystemClock
from .domains import registrable_domain
from .errors import MalformedUrl, ProviderError, QuotaExhausted
from .models import Query, QueryType, SearchHit, SiteArchive
from .textnorm import ascii_letter_ratio

logger = logging.getLogger(__name__)

DEFAULT_DEPTH = 10  # top-10 capture; calibrated against exact-title result counts
DEFAULT_LANGUAGE_MIN_RATIO = 0.8


class SearchProvider(Protocol):
    def search(self, query_string: str, depth: int) -> Sequence[str]:
        """Ranked result URLs, best first, at most `depth` entries."""
        ...


def passes_language_filter(title: str, min_ratio: float = DEFAULT_LANGUAGE_MIN_RATIO) -> bool:
    """ASCII-letter-ratio heuristic for "English titles only" runs."""
    return ascii_letter_ratio(title) >= min_ratio


def compose_query_string(
    title: str,
    authors: Sequence[str],
    affiliations: Sequence[str],
    query_type: QueryType,
) -> str:
    """Quoted exact-phrase title plus unquoted author/affiliation terms."""
    parts = [f'"{title}"']
    if query_type in (QueryType.TITLE_AUTHORS, QueryType.TITLE_AUTHORS_AFFILIATION):
        parts.extend(a for a in authors if a)
    if query_type is QueryType.TITLE_AUTHORS_AFFILIATION:
        parts.extend(f for f in affiliations if f)
    return " ".join(parts)


def build_queries(
    archive: SiteArchive,
    query_type: QueryType,
    language_min_ratio: float | None = DEFAULT_LANGUAGE_MIN_RATIO,
) -> list[Query]:
    """Exactly one query per retained record, in archive order.

    Records failing the language filter are skipped (pass None to disable
    the filter). Records whose optional fields are empty degrade gracefully:
    a title-only record under TITLE_AUTHORS_AFFILIATION yields just the
    quoted title.
    """
    queries: list[Query] = []
    for index, record in enumerate(archive.records):
        if language_min_ratio is not None and not passes_language_filter(
            record.title, language_min_ratio
        ):
            continue
        qs = compose_query_string(
            record.title, record.authors, record.affiliations, query_type
        )
        # the record index keeps ids unique even when two retained records
        # compose identical strings; the query cache still collapses the
        # provider call
        qid = Query.make_id(archive.site, query_type, f"{index}\x1f{qs}")
        queries.append(
            Query(
                id=qid,
                origin_site=archive.site,
                origin_title=record.normalized_title,
                query_type=query_type,
                query_string=qs,
            )
        )
    return queries


def count_language_skipped(
    archive: SiteArchive, language_min_ratio: float = DEFAULT_LANGUAGE_MIN_RATIO
) -> int:
    return sum(
        1 for r in archive.records
        if not passes_language_filter(r.title, language_min_ratio)
    )


class QueryCache:
    """Store-backed cache for executed queries (namespace ``queries``).

    Serving a repeat of an identical (query string, depth) pair from the
    cache is what keeps the provider-call count equal to the number of
    distinct queries.
    """

    def __init__(self, store):
        self.store = store

    @staticmethod
    def _key(query_string: str, depth: int) -> str:
        return f"{depth}\x1f{query_string}"

    def get(self, query_string: str, depth: int) -> list[dict] | None:
        raw = self.store.cache_get("queries", self._key(query_string, depth))
        if raw is None:
            return None
        return json.loads(raw.decode("utf-8"))

    def put(self, query_string: str, depth: int, hits: list[dict]) -> None:
        self.store.cache_put(
            "queries",
            self._key(query_string, depth),
            json.dumps(hits, ensure_ascii=False).encode("utf-8"),
        )


def execute_query(
    provider: SearchProvider,
    query: Query,
    depth: int = DEFAULT_DEPTH,
    cache: QueryCache | None = None,
    clock: Clock | None = None,
    retries: int = 2,
    backoff: float = 1.0,
) -> list[SearchHit]:
    """Run one query, returning at most `depth` hits with contiguous ranks.

    The result is persisted to the query cache before it is returned; a
    repeated identical query is served from the cache without touching the
    provider. Transient provider failures are retried with backoff, then
    surfaced as ProviderError. QuotaExhausted always propagates untouched.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    clock = clock or SystemClock()

    if cache is not None:
        cached = cache.get(query.query_string, depth)
        if cached is not None:
            return [
                SearchHit(query_id=query.id, rank=entry["rank"], url=entry["url"],
                          domain=entry["domain"], retrieved_at=entry["retrieved_at"])
                for entry in cached
            ]

    last_error: Exception | None = None
    urls: Sequence[str] | None = None
    for attempt in range(retries + 1):
        try:
            urls = provider.search(query.query_string, depth)
            break
        except QuotaExhausted:
            raise
        except Exception as exc:  # transient provider failure
            last_error = exc
            if attempt < retries and backoff:
                time.sleep(backoff * (2 ** attempt))
    if urls is None:
        raise ProviderError(
            f"query {query.id} failed after {retries + 1} attempts: {last_error}"
        )

    retrieved_at = clock.now_iso()
    hits: list[SearchHit] = []
    for url in urls[:depth]:
        try:
            domain = registrable_domain(url)
        except MalformedUrl:
            logger.warning("dropping malformed result URL %r", url)
            continue
        hits.append(
            SearchHit(
                query_id=query.id,
                rank=len(hits) + 1,
                url=url,
                domain=domain,
                retrieved_at=retrieved_at,
            )
        )
    if cache is not None:
        cache.put(
            query.query_string,
            depth,
            [{"rank": h.rank, "url": h.url, "domain": h.domain,
              "retrieved_at": h.retrieved_at} for h in hits],
        )
    return hits


class LiveSearchProvider:
    """JSON-over-HTTP search API adapter (key via environment variable).

    Expects a response shaped like the common custom-search APIs:
    ``{"items": [{"link": ...}, ...]}``. A 429 or an exhausted daily cap
    raises QuotaExhausted so the run can suspend resumably.
    """

    def __init__(
        self,
        endpoint: str,
        api_key: str,
        extra_params: dict | None = None,
        daily_cap: int | None = None,
        min_interval: float = 1.0,
    ):
        import requests

        self._session = requests.Session()
        self.endpoint = endpoint
        self.api_key = api_key
        self.extra_params = extra_params or {}
        self.daily_cap = daily_cap
        self.min_interval = min_interval
        self._calls_today = 0
        self._last_call = 0.0

    def search(self, query_string: str, depth: int) -> list[str]:
        import requests

        if self.daily_cap is not None and self._calls_today >= self.daily_cap:
            raise QuotaExhausted(f"daily cap of {self.daily_cap} requests reached")
        wait = self.min_interval - (time.monotonic() - self._last_call)
        if wait > 0:
            time.sleep(wait)
        self._last_call = time.monotonic()
        self._calls_today += 1
        try:
            resp = self._session.get(
                self.endpoint,
                params={"key": self.api_key, "q": query_string,
                        "num": depth, **self.extra_params},
                timeout=30,
            )
        except requests.RequestException as exc:
            raise ProviderError(str(exc)) from exc
        if resp.status_code == 429:
            raise QuotaExhausted("provider answered 429")
        resp.raise_for_status()
        items = resp.json().get("items", [])
        return [item["link"] for item in items if "link" in item][:depth]
