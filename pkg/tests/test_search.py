import pytest

from clonewatch.errors import ProviderError, QuotaExhausted
from clonewatch.models import ArticleRecord, Query, QueryType, SiteArchive
from clonewatch.search import (
    QueryCache,
    build_queries,
    compose_query_string,
    count_language_skipped,
    execute_query,
    passes_language_filter,
)
from clonewatch.store import Store


def make_archive(titles_with_meta):
    records = [
        ArticleRecord.build(site="origin.test", source_url="http://origin.test/i",
                            title=t, authors=a, affiliations=f)
        for t, a, f in titles_with_meta
    ]
    return SiteArchive(site="origin.test", root_url="http://origin.test/",
                       records=records, pages_visited=1)


class ListProvider:
    def __init__(self, urls):
        self.urls = urls
        self.calls = 0

    def search(self, query_string, depth):
        self.calls += 1
        return self.urls[:depth]


class FlakyProvider:
    def __init__(self, failures):
        self.failures = failures
        self.calls = 0

    def search(self, query_string, depth):
        self.calls += 1
        if self.calls <= self.failures:
            raise RuntimeError("transient")
        return ["http://late.test/x"]


class QuotaProvider:
    def search(self, query_string, depth):
        raise QuotaExhausted("cap")


def test_one_query_per_record():
    archive = make_archive([(f"Title {i}", (), ()) for i in range(3)])
    queries = build_queries(archive, QueryType.TITLE_ONLY)
    assert len(queries) == 3
    assert all(q.query_string == f'"Title {i}"' for i, q in enumerate(queries))


def test_query_string_composition():
    qs = compose_query_string("T", ["A1", "A2"], ["F"],
                              QueryType.TITLE_AUTHORS_AFFILIATION)
    assert qs == '"T" A1 A2 F'
    qs = compose_query_string("T", ["A1", "A2"], ["F"], QueryType.TITLE_AUTHORS)
    assert qs == '"T" A1 A2'
    qs = compose_query_string("T", ["A1"], ["F"], QueryType.TITLE_ONLY)
    assert qs == '"T"'


def test_empty_archive():
    archive = SiteArchive(site="origin.test", root_url="http://origin.test/")
    assert build_queries(archive, QueryType.TITLE_ONLY) == []


def test_language_filter_accounting():
    archive = make_archive([
        ("An English title about things", (), ()),
        ("Совершенно русское название статьи", (), ()),
        ("Another plain English title", (), ()),
    ])
    queries = build_queries(archive, QueryType.TITLE_ONLY, language_min_ratio=0.8)
    skipped = count_language_skipped(archive, 0.8)
    assert len(queries) + skipped == len(archive.records)
    assert skipped == 1
    assert not passes_language_filter("Совершенно русское название статьи")


def test_filter_disabled_keeps_everything():
    archive = make_archive([("Русское название", (), ())])
    assert len(build_queries(archive, QueryType.TITLE_ONLY, None)) == 1


def test_query_ids_unique_and_deterministic():
    archive = make_archive([(f"Title {i}", ("A",), ()) for i in range(10)])
    ids1 = [q.id for q in build_queries(archive, QueryType.TITLE_AUTHORS)]
    ids2 = [q.id for q in build_queries(archive, QueryType.TITLE_AUTHORS)]
    assert ids1 == ids2
    assert len(set(ids1)) == 10


def test_one_query_per_record_even_with_identical_strings():
    # same title under different authors composes the same TITLE_ONLY string
    archive = make_archive([("Shared Title", ("A One",), ()),
                            ("Shared Title", ("B Two",), ())])
    queries = build_queries(archive, QueryType.TITLE_ONLY)
    assert len(queries) == len(archive.records) == 2
    assert len({q.id for q in queries}) == 2
    assert queries[0].query_string == queries[1].query_string


class FakeSession:
    """Stands in for requests.Session in live-provider tests."""

    def __init__(self, responses):
        self.responses = list(responses)
        self.requests = []

    def get(self, url, params=None, timeout=None):
        self.requests.append((url, params))
        return self.responses.pop(0)


class FakeResponse:
    def __init__(self, status_code, payload=None):
        self.status_code = status_code
        self.payload = payload or {}

    def json(self):
        return self.payload

    def raise_for_status(self):
        if self.status_code >= 400:
            raise RuntimeError(f"status {self.status_code}")


def live_provider(responses, daily_cap=None):
    from clonewatch.search import LiveSearchProvider

    provider = LiveSearchProvider("https://search.example/v1", "key",
                                  daily_cap=daily_cap, min_interval=0)
    provider._session = FakeSession(responses)
    return provider


def test_live_provider_parses_items_and_caps_depth():
    payload = {"items": [{"link": f"http://r{i}.test/x"} for i in range(15)]}
    provider = live_provider([FakeResponse(200, payload)])
    urls = provider.search('"t"', 10)
    assert len(urls) == 10
    assert urls[0] == "http://r0.test/x"


def test_live_provider_429_raises_quota():
    provider = live_provider([FakeResponse(429)])
    with pytest.raises(QuotaExhausted):
        provider.search('"t"', 10)


def test_live_provider_daily_cap():
    payload = {"items": []}
    provider = live_provider([FakeResponse(200, payload)] * 2, daily_cap=2)
    provider.search('"a"', 10)
    provider.search('"b"', 10)
    with pytest.raises(QuotaExhausted):
        provider.search('"c"', 10)


def _query(qid="q-1", qs='"Title"'):
    return Query(id=qid, origin_site="origin.test", origin_title="title",
                 query_type=QueryType.TITLE_ONLY, query_string=qs)


def test_depth_cap_and_contiguous_ranks():
    provider = ListProvider([f"http://site{i}.test/p" for i in range(15)])
    hits = execute_query(provider, _query(), depth=10)
    assert len(hits) == 10
    assert [h.rank for h in hits] == list(range(1, 11))


def test_short_result_preserves_order():
    provider = ListProvider([f"http://site{i}.test/p" for i in range(4)])
    hits = execute_query(provider, _query(), depth=10)
    assert [h.url for h in hits] == provider.urls
    assert [h.rank for h in hits] == [1, 2, 3, 4]


def test_domain_matches_url():
    from clonewatch.domains import registrable_domain

    provider = ListProvider(["http://www.somewhere.test/a/b"])
    hits = execute_query(provider, _query(), depth=5)
    assert hits[0].domain == registrable_domain(hits[0].url)


def test_malformed_result_urls_skipped_with_contiguous_ranks():
    provider = ListProvider(["http://ok1.test/a", "not a url", "http://ok2.test/b"])
    hits = execute_query(provider, _query(), depth=5)
    assert [h.domain for h in hits] == ["ok1.test", "ok2.test"]
    assert [h.rank for h in hits] == [1, 2]


def test_cache_soundness(tmp_path):
    store = Store(tmp_path)
    cache = QueryCache(store)
    provider = ListProvider(["http://a.test/1", "http://b.test/2"])
    first = execute_query(provider, _query(), depth=10, cache=cache)
    second = execute_query(provider, _query(), depth=10, cache=cache)
    assert provider.calls == 1
    assert [h.to_json() for h in first] == [h.to_json() for h in second]


def test_cache_is_depth_sensitive(tmp_path):
    store = Store(tmp_path)
    cache = QueryCache(store)
    provider = ListProvider([f"http://site{i}.test/p" for i in range(10)])
    execute_query(provider, _query(), depth=5, cache=cache)
    execute_query(provider, _query(), depth=10, cache=cache)
    assert provider.calls == 2


def test_retry_then_success():
    provider = FlakyProvider(failures=2)
    hits = execute_query(provider, _query(), depth=5, retries=2, backoff=0)
    assert provider.calls == 3
    assert len(hits) == 1


def test_provider_error_after_retries():
    provider = FlakyProvider(failures=10)
    with pytest.raises(ProviderError):
        execute_query(provider, _query(), depth=5, retries=2, backoff=0)


def test_quota_exhausted_propagates_immediately():
    with pytest.raises(QuotaExhausted):
        execute_query(QuotaProvider(), _query(), depth=5, retries=3, backoff=0)


def test_depth_must_be_positive():
    with pytest.raises(ValueError):
        execute_query(ListProvider([]), _query(), depth=0)
