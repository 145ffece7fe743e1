"""The snowball loop: harvest, search, aggregate, verdict, iterate to fixpoint.

Every state mutation flows through an event: the engine computes inputs,
appends the event to the run ledger, then applies it with the same pure
fold used by replay. Resuming a run is therefore just replaying its log,
and replayed state equals live state by construction.

Aggregation runs in two modes mirroring the original procedure: the
per-site pass surfaces domains that recur within a single journal's search
results, and the pooled pass (run before declaring fixpoint) joins all
results, which catches domains that never recurred enough within any one
site's results alone.
"""

from __future__ import annotations

import json
import logging
from collections import Counter
from dataclasses import dataclass, field
from datetime import date
from typing import Iterable, Mapping, Protocol

from . import harvest as harvest_mod
from . import heuristics
from .clock import Clock, SystemClock
from .errors import IllegalTransition, ProviderError, QuotaExhausted, UnknownDomain
from .models import Query, QueryType, SearchHit, SiteArchive, Verdict, VerdictSource
from .profiles import ExtractionProfile
from .search import QueryCache, build_queries, execute_query
from .store import Store

logger = logging.getLogger(__name__)

DEFAULT_DENYLIST = (
    "academia.edu", "archive.org", "baidu.com", "bing.com", "core.ac.uk",
    "crossref.org", "doaj.org", "doi.org", "duckduckgo.com", "ebsco.com",
    "elibrary.ru", "elsevier.com", "facebook.com", "google.com", "ieee.org",
    "issn.org", "jstor.org", "linkedin.com", "proquest.com", "researchgate.net",
    "scholar.google.com", "scimagojr.com", "sciencedirect.com", "scopus.com",
    "scribd.com", "semanticscholar.org", "springer.com", "twitter.com",
    "wikipedia.org", "yandex.ru", "youtube.com",
)


@dataclass(frozen=True)
class RunConfig:
    threshold: int = 5
    depth: int = 10
    query_type: QueryType = QueryType.TITLE_AUTHORS_AFFILIATION
    language_min_ratio: float | None = 0.8
    confirm_score: float = 0.5
    min_shared_titles: int = 3
    predatory_max_side_score: float = 0.15
    overlap_saturation: int = 5
    recency_window_months: int = 36
    run_date: str = "2020-10-01"
    weights: tuple[tuple[str, float], ...] = tuple(
        sorted((k.value, v) for k, v in heuristics.DEFAULT_WEIGHTS.items())
    )
    mutation_lexicon: tuple[str, ...] = tuple(sorted(heuristics.DEFAULT_MUTATION_LEXICON))
    denylist: tuple[str, ...] = DEFAULT_DENYLIST
    freemail_providers: tuple[str, ...] = tuple(sorted(heuristics.DEFAULT_FREEMAIL_PROVIDERS))
    max_crawl_depth: int = 3
    max_pages_per_site: int = 500
    auto_verdicts: bool = True
    provider_retries: int = 2
    provider_backoff: float = 1.0

    def weight_table(self) -> dict[heuristics.IndicatorKind, float]:
        return {heuristics.IndicatorKind(k): v for k, v in self.weights}

    def to_json(self) -> dict:
        data = {
            "threshold": self.threshold,
            "depth": self.depth,
            "query_type": self.query_type.value,
            "language_min_ratio": self.language_min_ratio,
            "confirm_score": self.confirm_score,
            "min_shared_titles": self.min_shared_titles,
            "predatory_max_side_score": self.predatory_max_side_score,
            "overlap_saturation": self.overlap_saturation,
            "recency_window_months": self.recency_window_months,
            "run_date": self.run_date,
            "weights": [list(w) for w in self.weights],
            "mutation_lexicon": list(self.mutation_lexicon),
            "denylist": list(self.denylist),
            "freemail_providers": list(self.freemail_providers),
            "max_crawl_depth": self.max_crawl_depth,
            "max_pages_per_site": self.max_pages_per_site,
            "auto_verdicts": self.auto_verdicts,
            "provider_retries": self.provider_retries,
            "provider_backoff": self.provider_backoff,
        }
        return data

    @classmethod
    def from_json(cls, data: dict) -> "RunConfig":
        kwargs = dict(data)
        kwargs["query_type"] = QueryType(kwargs["query_type"])
        kwargs["weights"] = tuple((k, v) for k, v in kwargs["weights"])
        for key in ("mutation_lexicon", "denylist", "freemail_providers"):
            kwargs[key] = tuple(kwargs[key])
        return cls(**kwargs)


@dataclass
class CandidateDomain:
    domain: str
    first_seen_iteration: int
    surfaced_by: str  # "per-site" | "pooled" | "harvest"
    hit_count: int = 0
    origin_articles: set[tuple[str, str]] = field(default_factory=set)
    origin_sites: set[str] = field(default_factory=set)
    evidence: heuristics.EvidenceBundle | None = None
    score: float = 0.0
    verdict: Verdict = Verdict.PENDING
    verdict_rationale: str = ""
    verdict_source: VerdictSource | None = None

    @property
    def distinct_origin_articles(self) -> int:
        return len(self.origin_articles)

    @property
    def distinct_origin_sites(self) -> int:
        return len(self.origin_sites)

    def shared_titles(self) -> list[tuple[str, str]]:
        return sorted(self.origin_articles)

    def overlap_by_site(self) -> Counter:
        counts: Counter = Counter()
        for site, _title in self.origin_articles:
            counts[site] += 1
        return counts


@dataclass
class RunState:
    run_id: str
    seeds: tuple[str, ...] = ()
    config: RunConfig = field(default_factory=RunConfig)
    iteration: int = 0
    frontier: list[str] = field(default_factory=list)
    visited: set[str] = field(default_factory=set)
    root_urls: dict[str, str] = field(default_factory=dict)
    archives: dict[str, SiteArchive] = field(default_factory=dict)
    hit_ledger: list[SearchHit] = field(default_factory=list)
    queries: dict[str, Query] = field(default_factory=dict)
    candidates: dict[str, CandidateDomain] = field(default_factory=dict)
    query_count: int = 0
    denylist: set[str] = field(default_factory=set)
    stop_reason: str | None = None

    def confirmed_domains(self) -> set[str]:
        return {
            d for d, c in self.candidates.items()
            if c.verdict is Verdict.CONFIRMED_CLONE
        }

    def pending_domains(self) -> list[str]:
        return sorted(
            d for d, c in self.candidates.items() if c.verdict is Verdict.PENDING
        )


@dataclass(frozen=True)
class RunReport:
    run_id: str
    detected_urls: tuple[str, ...]
    detected_domains: tuple[str, ...]
    iterations: int
    query_count: int
    stop_reason: str
    graph_summary: dict
    verdict_counts: dict

    def to_json(self) -> dict:
        return {
            "run_id": self.run_id,
            "detected_urls": list(self.detected_urls),
            "detected_domains": list(self.detected_domains),
            "iterations": self.iterations,
            "query_count": self.query_count,
            "stop_reason": self.stop_reason,
            "graph_summary": self.graph_summary,
            "verdict_counts": self.verdict_counts,
        }

    def to_json_text(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    def to_text(self) -> str:
        lines = [
            f"run            {self.run_id}",
            f"stop reason    {self.stop_reason}",
            f"iterations     {self.iterations}",
            f"queries        {self.query_count}",
            f"clone domains  {len(self.detected_domains)}",
            f"clone URLs     {len(self.detected_urls)}",
            "",
            "graph: {nodes} nodes, {edges} edges, {components} component(s), "
            "average degree {average_degree:.2f}".format(**self.graph_summary),
            "",
            "verdicts:",
        ]
        for verdict, count in sorted(self.verdict_counts.items()):
            lines.append(f"  {verdict:<16} {count}")
        lines.append("")
        lines.append("detected clone URLs:")
        for url in self.detected_urls:
            lines.append(f"  {url}")
        return "\n".join(lines) + "\n"


# -- aggregation -----------------------------------------------------------------


def aggregate_hits(
    hits: Iterable[SearchHit],
    denylist: set[str] | frozenset[str],
    threshold: int,
    visited: set[str] | frozenset[str] = frozenset(),
    queries: Mapping[str, Query] | None = None,
    mode: str = "per-site",
) -> list[CandidateDomain]:
    """Group hits by registrable domain and surface the recurring ones.

    In ``per-site`` mode a domain qualifies when at least `threshold`
    distinct articles from one single origin site led to it; in ``pooled``
    mode the distinct-article count is taken across all origin sites.
    Denylisted and already-visited domains are excluded. Output is sorted
    by (hit count desc, domain asc) and is deterministic.
    """
    if threshold < 1:
        raise ValueError("threshold must be >= 1")
    queries = queries or {}
    per_domain: dict[str, CandidateDomain] = {}
    for hit in hits:
        domain = hit.domain
        if domain in denylist or domain in visited:
            continue
        query = queries.get(hit.query_id)
        origin_site = query.origin_site if query else ""
        if origin_site == domain:
            continue  # a site finding its own article is not evidence
        cand = per_domain.setdefault(
            domain, CandidateDomain(domain=domain, first_seen_iteration=0,
                                    surfaced_by=mode)
        )
        cand.hit_count += 1
        origin_title = query.origin_title if query else hit.query_id
        cand.origin_articles.add((origin_site, origin_title))
        if origin_site:
            cand.origin_sites.add(origin_site)

    selected = []
    for cand in per_domain.values():
        if mode == "pooled":
            qualifies = cand.distinct_origin_articles >= threshold
        else:
            by_site = cand.overlap_by_site()
            qualifies = bool(by_site) and max(by_site.values()) >= threshold
        if qualifies:
            selected.append(cand)
    selected.sort(key=lambda c: (-c.hit_count, c.domain))
    return selected


# -- verdict transitions ------------------------------------------------------------

_ALLOWED_TRANSITIONS = {
    Verdict.PENDING: {Verdict.CONFIRMED_CLONE, Verdict.LEGITIMATE,
                      Verdict.PREDATORY, Verdict.UNKNOWN},
    Verdict.UNKNOWN: {Verdict.CONFIRMED_CLONE, Verdict.LEGITIMATE,
                      Verdict.PREDATORY, Verdict.PENDING, Verdict.UNKNOWN},
}


def record_verdict(
    state: RunState,
    domain: str,
    verdict: Verdict,
    rationale: str,
    source: VerdictSource,
    override: bool = False,
) -> int:
    """Apply a verdict to a known candidate; returns the frontier delta.

    Confirming a clone pushes it onto the frontier (if unvisited). Leaving
    a decided verdict requires `override`; everything else is untouched.
    """
    cand = state.candidates.get(domain)
    if cand is None:
        raise UnknownDomain(domain)
    allowed = _ALLOWED_TRANSITIONS.get(cand.verdict, set())
    if verdict not in allowed and not override:
        raise IllegalTransition(
            f"{domain}: {cand.verdict.value} -> {verdict.value} requires override"
        )
    cand.verdict = verdict
    cand.verdict_rationale = rationale
    cand.verdict_source = source
    delta = 0
    if (
        verdict is Verdict.CONFIRMED_CLONE
        and domain not in state.visited
        and domain not in state.frontier
    ):
        state.frontier.append(domain)
        delta = 1
    return delta


# -- event fold ------------------------------------------------------------------


def apply_event(state: RunState, kind: str, payload: dict) -> None:
    """Pure state fold; both the live engine and replay go through here."""
    if kind == "RunStarted":
        state.seeds = tuple(payload["seeds"])
        state.config = RunConfig.from_json(payload["config"])
        state.denylist = set(state.config.denylist)
        for seed_url, seed_domain in payload["seed_domains"]:
            state.root_urls[seed_domain] = seed_url
            if seed_domain not in state.frontier:
                state.frontier.append(seed_domain)
    elif kind == "HarvestDone":
        domain = payload["domain"]
        archive = SiteArchive.from_json(payload["archive"])
        state.archives[domain] = archive
        state.root_urls.setdefault(domain, payload["root_url"])
        if domain in state.frontier:
            state.frontier.remove(domain)
        state.visited.add(domain)
        if domain not in state.candidates:
            cand = CandidateDomain(
                domain=domain,
                first_seen_iteration=state.iteration,
                surfaced_by="harvest",
            )
            _init_candidate_stats(state, cand)
            state.candidates[domain] = cand
    elif kind == "QueryExecuted":
        query = Query.from_json(payload["query"])
        hits = [SearchHit.from_json(h) for h in payload["hits"]]
        if payload.get("counted", True) and query.id not in state.queries:
            state.query_count += 1
        state.queries[query.id] = query
        state.hit_ledger.extend(hits)
        for hit in hits:
            cand = state.candidates.get(hit.domain)
            if cand is not None and query.origin_site != hit.domain:
                cand.hit_count += 1
                cand.origin_articles.add((query.origin_site, query.origin_title))
                cand.origin_sites.add(query.origin_site)
    elif kind == "CandidateSurfaced":
        domain = payload["domain"]
        if domain not in state.candidates:
            cand = CandidateDomain(
                domain=domain,
                first_seen_iteration=payload["iteration"],
                surfaced_by=payload["pass"],
            )
            _init_candidate_stats(state, cand)
            state.candidates[domain] = cand
    elif kind == "EvidenceAttached":
        domain = payload["domain"]
        cand = state.candidates.get(domain)
        if cand is not None:
            cand.evidence = heuristics.EvidenceBundle.from_json(payload["evidence"])
            cand.score = payload["score"]
    elif kind == "VerdictRecorded":
        record_verdict(
            state,
            payload["domain"],
            Verdict(payload["verdict"]),
            payload["rationale"],
            VerdictSource(payload["source"]),
            override=payload.get("override", False),
        )
    elif kind == "IterationClosed":
        state.iteration = payload["iteration"]
    elif kind == "RunFinished":
        state.stop_reason = payload["stop_reason"]
    else:
        raise ValueError(f"unknown event kind {kind!r}")


def _init_candidate_stats(state: RunState, cand: CandidateDomain) -> None:
    for hit in state.hit_ledger:
        if hit.domain != cand.domain:
            continue
        query = state.queries.get(hit.query_id)
        if query is None or query.origin_site == cand.domain:
            continue
        cand.hit_count += 1
        cand.origin_articles.add((query.origin_site, query.origin_title))
        cand.origin_sites.add(query.origin_site)


def replay_state(store: Store, run_id: str) -> RunState:
    """Fold the run's event log back into a RunState."""
    state = RunState(run_id=run_id)
    for event in store.ledger_events(run_id):
        apply_event(state, event.kind, event.payload)
    return state


# -- verdict sources ----------------------------------------------------------------


class VerdictPolicy(Protocol):
    def decide(self, cand: CandidateDomain, state: RunState) -> tuple[Verdict, str] | None:
        """Return (verdict, rationale), or None to leave the candidate as is."""
        ...


class AutoVerdictPolicy:
    """Headless stand-in for the analyst.

    Confirm when the clone score clears the bar and the candidate shares
    enough titles with an already-confirmed clone. Operator seeds are
    confirmed on their own indicators (they were designated as suspects, and
    there is nothing confirmed to overlap with yet). Shared content without
    any clone traits is the predatory pattern. Everything else is recorded
    as Unknown so the run can still reach a clean fixpoint; Unknown
    candidates are re-examined every iteration.
    """

    def __init__(self, config: RunConfig):
        self.config = config

    def decide(self, cand: CandidateDomain, state: RunState) -> tuple[Verdict, str] | None:
        cfg = self.config
        value = cand.score
        shared_contribution = 0.0
        if cand.evidence is not None:
            result = heuristics.score(cand.evidence, cfg.weight_table())
            value = result.value
            for kind, contribution in result.contributing:
                if kind is heuristics.IndicatorKind.SHARED_CONTENT_OVERLAP:
                    shared_contribution = contribution
        side_score = value - shared_contribution

        confirmed = state.confirmed_domains()
        overlap_with_confirmed = 0
        for site, count in cand.overlap_by_site().items():
            if site in confirmed and count > overlap_with_confirmed:
                overlap_with_confirmed = count

        if cand.surfaced_by == "harvest" and value >= cfg.confirm_score:
            return (
                Verdict.CONFIRMED_CLONE,
                f"operator seed; clone score {value:.2f} >= {cfg.confirm_score:.2f}",
            )
        if value >= cfg.confirm_score and overlap_with_confirmed >= cfg.min_shared_titles:
            return (
                Verdict.CONFIRMED_CLONE,
                f"clone score {value:.2f}; shares {overlap_with_confirmed} titles "
                f"with a confirmed clone",
            )
        if cand.verdict is Verdict.PENDING:
            if (
                cand.distinct_origin_articles >= cfg.min_shared_titles
                and side_score < cfg.predatory_max_side_score
            ):
                return (
                    Verdict.PREDATORY,
                    f"hosts {cand.distinct_origin_articles} shared texts but shows "
                    f"no clone-site traits (side score {side_score:.2f})",
                )
            return (
                Verdict.UNKNOWN,
                f"insufficient evidence (score {value:.2f}, "
                f"confirmed-overlap {overlap_with_confirmed})",
            )
        return None


class QueueVerdictPolicy:
    """Interactive mode: never decides; candidates wait in the triage queue."""

    def decide(self, cand: CandidateDomain, state: RunState) -> None:
        return None


# -- engine --------------------------------------------------------------------


class Engine:
    """Single state-owner for one run; all mutations are evented."""

    def __init__(
        self,
        run_id: str,
        seeds: list[str],
        config: RunConfig,
        store: Store,
        provider,
        fetcher,
        registration_provider,
        registry: list[heuristics.RegistryEntry] | None = None,
        profile: ExtractionProfile | None = None,
        clock: Clock | None = None,
        policy: VerdictPolicy | None = None,
    ):
        from .profiles import default_profile

        self.store = store
        self.provider = provider
        self.fetcher = fetcher
        self.registration_provider = registration_provider
        self.registry = registry or []
        self.profile = profile or default_profile()
        self.clock = clock or SystemClock()
        self.config = config
        self.policy = policy or (
            AutoVerdictPolicy(config) if config.auto_verdicts else QueueVerdictPolicy()
        )
        self.query_cache = QueryCache(store)
        self.state = replay_state(store, run_id)
        self._seeds = list(seeds)
        self._landing_cache: dict[str, heuristics.SiteFacts | None] = {}

    # - plumbing -

    def _emit(self, kind: str, payload: dict) -> None:
        self.store.ledger_append(self.state.run_id, kind, payload, self.clock.now_iso())
        apply_event(self.state, kind, payload)

    @property
    def started(self) -> bool:
        return bool(self.state.seeds)

    def start(self) -> None:
        if self.started:
            return
        from .domains import registrable_domain

        seed_domains = []
        seen = set()
        for url in self._seeds:
            domain = registrable_domain(url)
            if domain not in seen:
                seen.add(domain)
                seed_domains.append([url, domain])
        self._emit("RunStarted", {
            "seeds": list(self._seeds),
            "seed_domains": seed_domains,
            "config": self.config.to_json(),
        })

    # - iteration pieces -

    def _harvest(self, domain: str) -> SiteArchive:
        root_url = self.state.root_urls.get(domain, f"http://{domain}/")
        try:
            archive = harvest_mod.harvest_site(
                root_url,
                self.profile,
                self.fetcher,
                max_depth=self.config.max_crawl_depth,
                max_pages=self.config.max_pages_per_site,
            )
        except Exception as exc:
            logger.warning("harvest failed for %s: %s", domain, exc)
            archive = SiteArchive(
                site=domain, root_url=root_url,
                warnings=[f"harvest failed: {exc}"],
            )
        self._emit("HarvestDone", {
            "domain": domain,
            "root_url": root_url,
            "archive": archive.to_json(),
        })
        return archive

    def _execute_queries(self, archive: SiteArchive) -> None:
        queries = build_queries(
            archive, self.config.query_type, self.config.language_min_ratio
        )
        for query in queries:
            if query.id in self.state.queries:
                continue  # resumed run: already executed and evented
            cached = self.query_cache.get(query.query_string, self.config.depth)
            try:
                hits = execute_query(
                    self.provider, query, self.config.depth,
                    cache=self.query_cache, clock=self.clock,
                    retries=self.config.provider_retries,
                    backoff=self.config.provider_backoff,
                )
            except ProviderError as exc:
                # not evented, so a later iteration or resume retries it
                logger.warning("query %s left retryable: %s", query.id, exc)
                continue
            self._emit("QueryExecuted", {
                "query": query.to_json(),
                "hits": [h.to_json() for h in hits],
                "from_cache": cached is not None,
                "counted": True,
            })

    def _probe_landing(self, domain: str) -> heuristics.SiteFacts | None:
        """Single landing-page fetch for evidence; archives wait for a verdict."""
        if domain in self._landing_cache:
            return self._landing_cache[domain]
        url = self.state.root_urls.get(domain, f"http://{domain}/")
        facts: heuristics.SiteFacts | None
        try:
            page = self.fetcher.fetch(url)
            if 200 <= page.status < 300:
                text, _ = harvest_mod.decode_body(page)
                facts = heuristics.extract_site_facts(text)
            else:
                facts = None
        except Exception as exc:
            logger.warning("landing probe failed for %s: %s", domain, exc)
            facts = None
        self._landing_cache[domain] = facts
        return facts

    def _attach_evidence(self, domain: str) -> None:
        cand = self.state.candidates[domain]
        facts = self._probe_landing(domain)
        bundle = heuristics.build_evidence(
            domain=domain,
            facts=facts,
            shared_titles=cand.shared_titles(),
            registry=self.registry,
            registration_provider=self.registration_provider,
            run_date=date.fromisoformat(self.config.run_date),
            collected_at=self.clock.now_iso(),
            window_months=self.config.recency_window_months,
            freemail_providers=frozenset(self.config.freemail_providers),
            lexicon=frozenset(self.config.mutation_lexicon),
            overlap_saturation=self.config.overlap_saturation,
        )
        value = heuristics.score(bundle, self.config.weight_table()).value
        self._emit("EvidenceAttached", {
            "domain": domain,
            "evidence": bundle.to_json(),
            "score": value,
        })

    def _surface_candidates(self, mode: str) -> int:
        surfaced = aggregate_hits(
            self.state.hit_ledger,
            denylist=self.state.denylist,
            threshold=self.config.threshold,
            visited=self.state.visited,
            queries=self.state.queries,
            mode=mode,
        )
        new = 0
        for cand in surfaced:
            if cand.domain in self.state.candidates:
                continue
            self._emit("CandidateSurfaced", {
                "domain": cand.domain,
                "iteration": self.state.iteration,
                "pass": mode,
                "hit_count": cand.hit_count,
                "distinct_origin_articles": cand.distinct_origin_articles,
                "distinct_origin_sites": cand.distinct_origin_sites,
            })
            new += 1
        return new

    def _refresh_evidence(self) -> None:
        for domain in sorted(self.state.candidates):
            cand = self.state.candidates[domain]
            if cand.verdict in (Verdict.PENDING, Verdict.UNKNOWN):
                self._attach_evidence(domain)

    def _verdict_pass(self) -> int:
        """Ask the policy about every open candidate; returns new confirmations."""
        confirmed = 0
        open_candidates = sorted(
            (d for d, c in self.state.candidates.items()
             if c.verdict in (Verdict.PENDING, Verdict.UNKNOWN)),
            key=lambda d: (
                0 if self.state.candidates[d].surfaced_by == "harvest" else 1,
                self.state.candidates[d].first_seen_iteration,
                d,
            ),
        )
        for domain in open_candidates:
            cand = self.state.candidates[domain]
            decision = self.policy.decide(cand, self.state)
            if decision is None:
                continue
            verdict, rationale = decision
            if verdict is cand.verdict:
                continue
            self.record_verdict(domain, verdict, rationale, VerdictSource.AUTO_RULE)
            if verdict is Verdict.CONFIRMED_CLONE:
                confirmed += 1
        return confirmed

    def record_verdict(
        self,
        domain: str,
        verdict: Verdict,
        rationale: str,
        source: VerdictSource,
        override: bool = False,
    ) -> int:
        """Validate, event, and apply one verdict; returns the frontier delta."""
        cand = self.state.candidates.get(domain)
        if cand is None:
            raise UnknownDomain(domain)
        allowed = _ALLOWED_TRANSITIONS.get(cand.verdict, set())
        if verdict not in allowed and not override:
            raise IllegalTransition(
                f"{domain}: {cand.verdict.value} -> {verdict.value} requires override"
            )
        before = len(self.state.frontier)
        self._emit("VerdictRecorded", {
            "domain": domain,
            "verdict": verdict.value,
            "rationale": rationale,
            "source": source.value,
            "override": override,
        })
        return len(self.state.frontier) - before

    def run_iteration(self) -> None:
        """Process the whole frontier once: harvest, query, surface, verdict."""
        if not self.started:
            self.start()
        batch = list(self.state.frontier)
        for domain in batch:
            archive = self._harvest(domain)
            self._execute_queries(archive)
        self._surface_candidates("per-site")
        self._refresh_evidence()
        self._verdict_pass()
        self._emit("IterationClosed", {"iteration": self.state.iteration + 1})

    def _pooled_pass(self) -> tuple[int, int]:
        """The joined re-aggregation over all results; (new candidates, new confirms)."""
        new = self._surface_candidates("pooled")
        if new:
            self._refresh_evidence()
        confirmed = self._verdict_pass()
        return new, confirmed

    def _resume_pending_queries(self) -> None:
        """After a suspension, finish queries for already-harvested archives."""
        for domain in sorted(self.state.archives):
            self._execute_queries(self.state.archives[domain])

    def run_to_fixpoint(self, max_iterations: int = 1000) -> RunReport:
        if not self.started:
            self.start()
        stop_reason = "fixpoint"
        try:
            if self.state.archives:
                self._resume_pending_queries()
            while self.state.iteration < max_iterations:
                while self.state.frontier and self.state.iteration < max_iterations:
                    self.run_iteration()
                new, confirmed = self._pooled_pass()
                if not self.state.frontier and new == 0 and confirmed == 0:
                    break
        except QuotaExhausted as exc:
            logger.warning("run %s suspended: %s", self.state.run_id, exc)
            stop_reason = "quota_suspend"
        if self.state.stop_reason != stop_reason:
            self._emit("RunFinished", {"stop_reason": stop_reason})
        return self.report()

    def report(self) -> RunReport:
        from . import graph as graph_mod

        state = self.state
        confirmed = sorted(state.confirmed_domains())
        urls = tuple(
            state.root_urls.get(d, f"http://{d}/") for d in confirmed
        )
        try:
            g = graph_mod.build_graph(state)
            components = graph_mod.connected_components(g)
            summary = {
                "nodes": len(g.nodes),
                "edges": len(g.edges),
                "components": len(components),
                "average_degree": graph_mod.average_degree(g) if g.nodes else 0.0,
            }
        except Exception:
            summary = {"nodes": 0, "edges": 0, "components": 0, "average_degree": 0.0}
        counts = Counter(c.verdict.value for c in state.candidates.values())
        return RunReport(
            run_id=state.run_id,
            detected_urls=tuple(sorted(urls)),
            detected_domains=tuple(confirmed),
            iterations=state.iteration,
            query_count=state.query_count,
            stop_reason=state.stop_reason or "manual_stop",
            graph_summary=summary,
            verdict_counts=dict(sorted(counts.items())),
        )

    def write_query_ledger(self) -> None:
        """One {query, hits[]} JSON line per distinct executed query."""
        run_dir = self.store.run_dir(self.state.run_id)
        run_dir.mkdir(parents=True, exist_ok=True)
        by_query: dict[str, list[SearchHit]] = {qid: [] for qid in self.state.queries}
        for hit in self.state.hit_ledger:
            by_query.setdefault(hit.query_id, []).append(hit)
        with (run_dir / "queries.jsonl").open("w", encoding="utf-8") as fp:
            for qid in sorted(by_query):
                query = self.state.queries.get(qid)
                fp.write(json.dumps({
                    "query": query.to_json() if query else {"id": qid},
                    "hits": [h.to_json() for h in sorted(
                        by_query[qid], key=lambda h: h.rank)],
                }, sort_keys=True, ensure_ascii=False) + "\n")
