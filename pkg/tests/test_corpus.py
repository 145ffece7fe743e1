from itertools import combinations

import pytest

from clonewatch.corpus import (
    CorpusSpec,
    FixtureIndex,
    build_fixture_index,
    fixture_search,
    generate_corpus,
    write_bundle,
)
from clonewatch.errors import InfeasibleSpec
from clonewatch.textnorm import normalize_title


def small_spec(**overrides):
    base = dict(n_clones=3, n_legit=1, n_predatory=1, pool_size=40,
                archive_size_range=(8, 12), pairwise_overlap_min=3, seed=11)
    base.update(overrides)
    return CorpusSpec(**base)


def clone_title_sets(bundle):
    out = {}
    for domain, kind in bundle.ground_truth.items():
        if kind == "clone":
            out[domain] = {normalize_title(a.title)
                           for a, _url in bundle.site_articles[domain]}
    return out


def test_determinism_byte_identical():
    b1 = generate_corpus(small_spec())
    b2 = generate_corpus(small_spec())
    assert b1.manifest == b2.manifest
    assert set(b1.sites) == set(b2.sites)
    for domain in b1.sites:
        assert b1.sites[domain] == b2.sites[domain]


def test_different_seed_different_bundle():
    b1 = generate_corpus(small_spec())
    b2 = generate_corpus(small_spec(seed=12))
    assert b1.manifest["content_hashes"] != b2.manifest["content_hashes"]


def test_pairwise_overlap_guarantee_brute_force():
    spec = small_spec(n_clones=5, pool_size=80, archive_size_range=(10, 20),
                      pairwise_overlap_min=4)
    bundle = generate_corpus(spec)
    titles = clone_title_sets(bundle)
    for a, b in combinations(titles.values(), 2):
        assert len(a & b) >= 4


def test_single_clone_archive_subset_of_pool():
    spec = CorpusSpec(n_clones=1, n_legit=0, n_predatory=0, pool_size=10,
                      archive_size_range=(4, 8), pairwise_overlap_min=1, seed=3)
    bundle = generate_corpus(spec)
    pool_titles = {normalize_title(a.title) for a in bundle.article_pool}
    (clone_titles,) = clone_title_sets(bundle).values()
    assert clone_titles <= pool_titles


def test_overlap_bigger_than_archive_infeasible():
    with pytest.raises(InfeasibleSpec):
        generate_corpus(small_spec(pairwise_overlap_min=50, archive_size_range=(8, 30)))


def test_pool_smaller_than_archive_infeasible():
    with pytest.raises(InfeasibleSpec):
        generate_corpus(small_spec(pool_size=10, archive_size_range=(8, 30)))


def test_legit_archives_disjoint_from_pool():
    bundle = generate_corpus(small_spec())
    pool_titles = {normalize_title(a.title) for a in bundle.article_pool}
    for domain, kind in bundle.ground_truth.items():
        if kind == "legit":
            titles = {normalize_title(a.title)
                      for a, _url in bundle.site_articles[domain]}
            assert not titles & pool_titles


def test_predatory_sites_reuse_pool_titles_with_other_authors():
    bundle = generate_corpus(small_spec())
    pool_by_title = {normalize_title(a.title): a for a in bundle.article_pool}
    reused = 0
    for domain, kind in bundle.ground_truth.items():
        if kind != "predatory":
            continue
        for article, _url in bundle.site_articles[domain]:
            pooled = pool_by_title.get(normalize_title(article.title))
            if pooled is not None:
                reused += 1
                assert article.authors != pooled.authors
    assert reused > 0


def test_clone_pages_embed_indicator_traits():
    bundle = generate_corpus(small_spec())
    registry_issns = {row["original_issn"] for row in bundle.registry_rows}
    for domain, kind in bundle.ground_truth.items():
        landing = bundle.sites[domain]["index.html"].decode("utf-8")
        if kind == "clone":
            assert "Impact Factor:" in landing
            assert any(issn in landing for issn in registry_issns)
            assert any(p in landing for p in ("gmail.com", "yahoo.com", "hotmail.com",
                                              "outlook.com", "mail.ru"))
        else:
            assert "Impact Factor:" not in landing


def test_manifest_hashes_match_rendered_bytes(tmp_path):
    import hashlib

    bundle = generate_corpus(small_spec())
    for key, digest in bundle.manifest["content_hashes"].items():
        domain, path = key.split("/", 1)
        assert hashlib.sha256(bundle.sites[domain][path]).hexdigest() == digest


def test_write_bundle_layout(tmp_path):
    bundle = generate_corpus(small_spec())
    out = write_bundle(bundle, tmp_path / "c")
    assert (out / "manifest.json").is_file()
    assert (out / "registry.csv").is_file()
    assert (out / "index.json").is_file()
    for domain in bundle.sites:
        assert (out / "sites" / domain / "index.html").is_file()


# -- fixture index -------------------------------------------------------------


def test_every_pooled_title_retrievable():
    bundle = generate_corpus(small_spec())
    index = build_fixture_index(bundle)
    hosted = {}
    for domain, articles in bundle.site_articles.items():
        for article, _url in articles:
            hosted.setdefault(normalize_title(article.title), set()).add(domain)
    for article in bundle.article_pool:
        norm = normalize_title(article.title)
        hosts = hosted.get(norm, set())
        if not hosts:
            continue  # pooled article dealt to nobody
        urls = fixture_search(index, f'"{article.title}"', depth=len(hosts) + 5)
        from clonewatch.domains import registrable_domain

        assert {registrable_domain(u) for u in urls} == hosts


def test_depth_cap():
    bundle = generate_corpus(small_spec())
    index = build_fixture_index(bundle)
    core_title = bundle.article_pool[0].title  # hosted by every clone
    full = fixture_search(index, f'"{core_title}"', depth=10)
    top2 = fixture_search(index, f'"{core_title}"', depth=2)
    assert top2 == full[:2]
    assert len(full) >= 3


def test_gibberish_returns_empty():
    bundle = generate_corpus(small_spec())
    index = build_fixture_index(bundle)
    assert fixture_search(index, '"no such title anywhere at all"', depth=10) == []


def test_index_rebuild_identical_bytes():
    bundle = generate_corpus(small_spec())
    blob1 = build_fixture_index(bundle).to_json_text()
    blob2 = build_fixture_index(bundle).to_json_text()
    assert blob1 == blob2
    assert FixtureIndex.from_json_text(blob1).to_json_text() == blob1


def test_ranking_is_deterministic_and_author_tokens_boost():
    bundle = generate_corpus(small_spec())
    index = build_fixture_index(bundle)
    article = bundle.article_pool[0]
    with_authors = fixture_search(
        index, f'"{article.title}" ' + " ".join(article.authors), depth=10)
    again = fixture_search(
        index, f'"{article.title}" ' + " ".join(article.authors), depth=10)
    assert with_authors == again
