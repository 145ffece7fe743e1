"""Shared data model: archive records, queries, hits, candidates, verdicts."""

from __future__ import annotations

import enum
import hashlib
from dataclasses import dataclass, field
from typing import Optional

from .textnorm import normalize_title


class QueryType(enum.Enum):
    TITLE_ONLY = "title"
    TITLE_AUTHORS = "title_authors"
    TITLE_AUTHORS_AFFILIATION = "title_authors_affiliation"


class Verdict(enum.Enum):
    PENDING = "pending"
    CONFIRMED_CLONE = "confirmed_clone"
    LEGITIMATE = "legitimate"
    PREDATORY = "predatory"
    UNKNOWN = "unknown"


class VerdictSource(enum.Enum):
    ANALYST = "analyst"
    AUTO_RULE = "auto_rule"


@dataclass(frozen=True)
class RawPage:
    """One fetched page, exactly as retrieved."""

    url: str
    fetched_at: str  # ISO 8601 UTC
    status: int
    body: bytes
    content_type: str = "text/html"


@dataclass(frozen=True)
class ArticleRecord:
    """One archive entry extracted from a journal site."""

    site: str
    source_url: str
    title: str
    normalized_title: str
    authors: tuple[str, ...] = ()
    affiliations: tuple[str, ...] = ()
    claimed_doi: Optional[str] = None
    issue_label: Optional[str] = None

    @classmethod
    def build(
        cls,
        site: str,
        source_url: str,
        title: str,
        authors: tuple[str, ...] = (),
        affiliations: tuple[str, ...] = (),
        claimed_doi: Optional[str] = None,
        issue_label: Optional[str] = None,
    ) -> "ArticleRecord":
        return cls(
            site=site,
            source_url=source_url,
            title=title,
            normalized_title=normalize_title(title),
            authors=authors,
            affiliations=affiliations,
            claimed_doi=claimed_doi,
            issue_label=issue_label,
        )

    def dedup_key(self) -> tuple[str, tuple[str, ...]]:
        return (self.normalized_title, tuple(sorted(self.authors)))

    def to_json(self) -> dict:
        return {
            "site": self.site,
            "source_url": self.source_url,
            "title": self.title,
            "normalized_title": self.normalized_title,
            "authors": list(self.authors),
            "affiliations": list(self.affiliations),
            "claimed_doi": self.claimed_doi,
            "issue_label": self.issue_label,
        }

    @classmethod
    def from_json(cls, data: dict) -> "ArticleRecord":
        return cls(
            site=data["site"],
            source_url=data["source_url"],
            title=data["title"],
            normalized_title=data["normalized_title"],
            authors=tuple(data.get("authors", ())),
            affiliations=tuple(data.get("affiliations", ())),
            claimed_doi=data.get("claimed_doi"),
            issue_label=data.get("issue_label"),
        )


@dataclass
class SiteArchive:
    """All article records harvested from one site."""

    site: str
    root_url: str
    records: list[ArticleRecord] = field(default_factory=list)
    pages_visited: int = 0
    warnings: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "site": self.site,
            "root_url": self.root_url,
            "records": [r.to_json() for r in self.records],
            "pages_visited": self.pages_visited,
            "warnings": list(self.warnings),
        }

    @classmethod
    def from_json(cls, data: dict) -> "SiteArchive":
        return cls(
            site=data["site"],
            root_url=data["root_url"],
            records=[ArticleRecord.from_json(r) for r in data.get("records", [])],
            pages_visited=data.get("pages_visited", 0),
            warnings=list(data.get("warnings", [])),
        )


@dataclass(frozen=True)
class Query:
    """One search query derived from an archive record."""

    id: str
    origin_site: str
    origin_title: str  # normalized title of the origin record
    query_type: QueryType
    query_string: str

    @staticmethod
    def make_id(origin_site: str, query_type: QueryType, query_string: str) -> str:
        digest = hashlib.sha1(
            f"{origin_site}\x1f{query_type.value}\x1f{query_string}".encode()
        ).hexdigest()
        return f"q-{digest[:12]}"

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "origin_site": self.origin_site,
            "origin_title": self.origin_title,
            "query_type": self.query_type.value,
            "query_string": self.query_string,
        }

    @classmethod
    def from_json(cls, data: dict) -> "Query":
        return cls(
            id=data["id"],
            origin_site=data["origin_site"],
            origin_title=data["origin_title"],
            query_type=QueryType(data["query_type"]),
            query_string=data["query_string"],
        )


@dataclass(frozen=True)
class SearchHit:
    """One captured result URL for a query."""

    query_id: str
    rank: int
    url: str
    domain: str
    retrieved_at: str

    def to_json(self) -> dict:
        return {
            "query_id": self.query_id,
            "rank": self.rank,
            "url": self.url,
            "domain": self.domain,
            "retrieved_at": self.retrieved_at,
        }

    @classmethod
    def from_json(cls, data: dict) -> "SearchHit":
        return cls(
            query_id=data["query_id"],
            rank=data["rank"],
            url=data["url"],
            domain=data["domain"],
            retrieved_at=data["retrieved_at"],
        )
