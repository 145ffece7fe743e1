"""Archive harvesting: fetch a journal site and extract its article records.

The crawl is confined to the site's registrable domain, follows only links
matching the profile's archive patterns, and is bounded in depth and page
count. Extraction is best-effort: unparseable pages yield warnings, never
failures.
"""

from __future__ import annotations

import logging
import threading
import time
from pathlib import Path
from typing import Protocol
from urllib.parse import urljoin, urlsplit

from . import htmlparse
from .domains import registrable_domain
from .errors import Forbidden, ProfileMismatch, Unreachable
from .clock import utc_now_iso
from .models import ArticleRecord, RawPage, SiteArchive
from .profiles import ExtractionProfile

logger = logging.getLogger(__name__)

MAX_DEPTH = 3
MAX_PAGES_PER_SITE = 500


class Fetcher(Protocol):
    def fetch(self, url: str) -> RawPage:
        """Return the page at `url`; raise Unreachable on DNS/connect failure."""
        ...


class HttpFetcher:
    """requests-backed fetcher with a per-host minimum inter-request delay.

    Requests to the same host are strictly serialized; distinct hosts may be
    fetched concurrently.
    """

    def __init__(self, min_delay: float = 1.0, timeout: float = 20.0,
                 user_agent: str = "clonewatch/0.1"):
        import requests

        self._session = requests.Session()
        self._session.headers["User-Agent"] = user_agent
        self.min_delay = min_delay
        self.timeout = timeout
        self._host_locks: dict[str, threading.Lock] = {}
        self._last_request: dict[str, float] = {}
        self._guard = threading.Lock()

    def _lock_for(self, host: str) -> threading.Lock:
        with self._guard:
            return self._host_locks.setdefault(host, threading.Lock())

    def fetch(self, url: str) -> RawPage:
        import requests

        host = urlsplit(url).hostname or ""
        with self._lock_for(host):
            elapsed = time.monotonic() - self._last_request.get(host, 0.0)
            if elapsed < self.min_delay:
                time.sleep(self.min_delay - elapsed)
            try:
                resp = self._session.get(url, timeout=self.timeout)
            except requests.RequestException as exc:
                raise Unreachable(f"{url}: {exc}") from exc
            finally:
                self._last_request[host] = time.monotonic()
        return RawPage(
            url=url,
            fetched_at=utc_now_iso(),
            status=resp.status_code,
            body=resp.content,
            content_type=resp.headers.get("Content-Type", ""),
        )


class DirectoryFetcher:
    """Serves a rendered corpus bundle (``sites/<domain>/<path>``) from disk.

    Stands in for the live web in tests: any URL whose registrable domain has
    a directory under the bundle resolves to a file; anything else is
    unreachable, mirroring a dead host.
    """

    def __init__(self, bundle_dir: str | Path):
        self.sites_dir = Path(bundle_dir) / "sites"

    def fetch(self, url: str) -> RawPage:
        parts = urlsplit(url)
        domain = registrable_domain(url)
        site_dir = self.sites_dir / domain
        if not site_dir.is_dir():
            raise Unreachable(f"no such fixture site: {domain}")
        path = parts.path.lstrip("/") or "index.html"
        target = (site_dir / path).resolve()
        if site_dir.resolve() not in target.parents and target != site_dir.resolve():
            raise Unreachable(f"path escapes fixture site: {url}")
        if not target.is_file():
            return RawPage(url=url, fetched_at=utc_now_iso(), status=404,
                           body=b"not found", content_type="text/plain")
        return RawPage(
            url=url,
            fetched_at=utc_now_iso(),
            status=200,
            body=target.read_bytes(),
            content_type="text/html; charset=utf-8",
        )


class CachingFetcher:
    """Wraps a fetcher with the page cache (namespace ``pages``)."""

    def __init__(self, inner: Fetcher, store, ttl: float | None = None):
        self.inner = inner
        self.store = store
        self.ttl = ttl

    def fetch(self, url: str) -> RawPage:
        import json

        cached = self.store.cache_get("pages", url)
        if cached is not None:
            meta = json.loads(cached.decode("utf-8"))
            return RawPage(
                url=meta["url"],
                fetched_at=meta["fetched_at"],
                status=meta["status"],
                body=bytes.fromhex(meta["body_hex"]),
                content_type=meta["content_type"],
            )
        page = self.inner.fetch(url)
        payload = json.dumps({
            "url": page.url,
            "fetched_at": page.fetched_at,
            "status": page.status,
            "body_hex": page.body.hex(),
            "content_type": page.content_type,
        }).encode("utf-8")
        self.store.cache_put("pages", url, payload, ttl=self.ttl)
        return page


def decode_body(page: RawPage) -> tuple[str, str | None]:
    """Decode page bytes honoring the declared charset; lossy UTF-8 fallback.

    Returns (text, warning-or-None).
    """
    charset = None
    if "charset=" in page.content_type:
        charset = page.content_type.split("charset=")[-1].split(";")[0].strip()
    if charset:
        try:
            return page.body.decode(charset), None
        except (LookupError, UnicodeDecodeError):
            pass
    try:
        return page.body.decode("utf-8"), None
    except UnicodeDecodeError:
        return (
            page.body.decode("utf-8", errors="replace"),
            f"lossy decode of {page.url}",
        )


def _extract(page: RawPage, profile: ExtractionProfile) -> tuple[list[ArticleRecord], list[str]]:
    text, warning = decode_body(page)
    warnings = [warning] if warning else []
    try:
        site = registrable_domain(page.url)
    except Exception:
        site = ""
    root = htmlparse.parse_html(text)
    records: list[ArticleRecord] = []
    for entry in htmlparse.select(root, profile.record_selector):
        title = _field(entry, profile, "title")
        if not title:
            continue
        authors = _split_names(_field(entry, profile, "authors"))
        affiliation = _field(entry, profile, "affiliation")
        doi = _clean_doi(_field(entry, profile, "doi"))
        records.append(
            ArticleRecord.build(
                site=site,
                source_url=page.url,
                title=title,
                authors=authors,
                affiliations=(affiliation,) if affiliation else (),
                claimed_doi=doi,
            )
        )
    return records, warnings


def _field(entry: htmlparse.Node, profile: ExtractionProfile, key: str) -> str | None:
    selector = profile.field_selectors.get(key)
    if not selector:
        return None
    value = htmlparse.select_value(entry, selector)
    return value.strip() if value else None


def _split_names(raw: str | None) -> tuple[str, ...]:
    if not raw:
        return ()
    sep = ";" if ";" in raw else ","
    return tuple(part.strip() for part in raw.split(sep) if part.strip())


def _clean_doi(raw: str | None) -> str | None:
    if not raw:
        return None
    value = raw.strip()
    if value.lower().startswith("doi:"):
        value = value[4:].strip()
    return value or None


def extract_articles(page: RawPage, profile: ExtractionProfile) -> list[ArticleRecord]:
    """One record per matched entry node, in document order.

    Missing optional fields are left empty, never fabricated. Unparseable
    pages yield an empty list (warnings are logged).
    """
    records, warnings = _extract(page, profile)
    for w in warnings:
        logger.warning(w)
    return records


def _archive_links(page_url: str, root: htmlparse.Node,
                   profile: ExtractionProfile, site: str) -> list[str]:
    """On-site links whose URL or anchor text matches an archive pattern."""
    found: list[str] = []
    for href, anchor in htmlparse.links(root):
        absolute = urljoin(page_url, href)
        if urlsplit(absolute).scheme not in ("http", "https"):
            continue
        try:
            if registrable_domain(absolute) != site:
                continue  # never follow off-site links
        except Exception:
            continue
        haystacks = (absolute.lower(), anchor.lower())
        if any(pat.lower() in hay for pat in profile.archive_link_patterns
               for hay in haystacks):
            found.append(absolute)
    return found


def harvest_site(
    root_url: str,
    profile: ExtractionProfile,
    fetcher: Fetcher,
    max_depth: int = MAX_DEPTH,
    max_pages: int = MAX_PAGES_PER_SITE,
) -> SiteArchive:
    """Crawl archive pages under one site and return its deduplicated records.

    Raises Unreachable on connect failure at the root, Forbidden on a 4xx
    root response, and ProfileMismatch when three or more archive pages
    matched zero records (the profile needs adjustment, not an empty journal).
    """
    profile.validate()
    site = registrable_domain(root_url)
    archive = SiteArchive(site=site, root_url=root_url)
    seen_keys: set = set()
    visited_urls: set[str] = set()
    queue: list[tuple[str, int]] = [(root_url, 0)]
    archive_pages = 0
    empty_archive_pages = 0

    while queue and archive.pages_visited < max_pages:
        url, depth = queue.pop(0)
        normalized = url.rstrip("/") or url
        if normalized in visited_urls:
            continue
        visited_urls.add(normalized)
        page = fetcher.fetch(url)  # Unreachable propagates
        if depth == 0 and 400 <= page.status < 500:
            raise Forbidden(f"{url} answered {page.status}")
        if page.status < 200 or page.status >= 300:
            archive.warnings.append(f"skipped {url}: status {page.status}")
            continue
        archive.pages_visited += 1
        text, warning = decode_body(page)
        if warning:
            archive.warnings.append(warning)
        root = htmlparse.parse_html(text)
        if depth > 0:
            archive_pages += 1
        records, warnings = _extract(page, profile)
        archive.warnings.extend(w for w in warnings if w not in archive.warnings)
        if depth > 0 and not records:
            empty_archive_pages += 1
        for record in records:
            key = record.dedup_key()
            if key not in seen_keys:
                seen_keys.add(key)
                archive.records.append(record)
        if depth < max_depth:
            for link in _archive_links(url, root, profile, site):
                if (link.rstrip("/") or link) not in visited_urls:
                    queue.append((link, depth + 1))

    if archive_pages >= 3 and empty_archive_pages == archive_pages and not archive.records:
        raise ProfileMismatch(
            f"{site}: {archive_pages} archive pages matched zero records "
            f"with profile {profile.name!r}"
        )
    if archive_pages == 0 and not archive.records:
        archive.warnings.append("no archive pages")
    return archive


def write_archive_jsonl(archive: SiteArchive, out_dir: str | Path) -> Path:
    """Persist an archive as JSON-lines, one record per line."""
    import json

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{archive.site}.jsonl"
    with path.open("w", encoding="utf-8") as fp:
        for record in archive.records:
            fp.write(json.dumps(record.to_json(), ensure_ascii=False) + "\n")
    return path
