"""Deterministic synthetic networks of clone, legitimate and predatory sites.

The generator deals a shared pool of synthetic articles across the clone
sites (every clone pair is guaranteed a minimum title overlap), renders each
site from the same small set of HTML templates, and embeds the clone traits
(reused ISSN, decorated masthead, impact-factor claim, free-mail contact,
malformed DOIs, fresh registration) so the indicator machinery has something
real to fire on. A fixture index over the rendered corpus stands in for the
live search provider, letting the whole pipeline run offline.
"""

from __future__ import annotations

import hashlib
import json
import random
import re
from dataclasses import dataclass, field
from datetime import date, timedelta
from importlib import resources
from pathlib import Path

from .errors import InfeasibleSpec
from .heuristics import DomainRegistration, RegistrationSource, issn_check_digit
from .textnorm import normalize_title, title_tokens

DEFAULT_MUTATION_TOKENS = ("Journal", "Journal of", "Research", "Multidisciplinary Journal",
                           "Research Journal of")

_FIRST_NAMES = (
    "Amit", "Priya", "Rahul", "Sunita", "Vikram", "Anita", "Rajesh", "Kavita",
    "Sanjay", "Meera", "Arun", "Deepa", "Manoj", "Lakshmi", "Suresh", "Nisha",
    "Wei", "Li", "Chen", "Yan", "Omar", "Fatima", "Hassan", "Aisha",
    "Ivan", "Olga", "Dmitri", "Elena", "Carlos", "Maria", "Jose", "Lucia",
    "John", "Sarah", "David", "Emma", "Peter", "Anna", "Thomas", "Julia",
)
_LAST_NAMES = (
    "Sharma", "Patel", "Kumar", "Singh", "Gupta", "Reddy", "Iyer", "Nair",
    "Wang", "Zhang", "Liu", "Chen", "Ahmed", "Khan", "Ali", "Hussain",
    "Petrov", "Ivanova", "Smirnov", "Volkova", "Garcia", "Silva", "Santos",
    "Novak", "Kowalski", "Meyer", "Fischer", "Weber", "Rossi", "Bianchi",
    "Johnson", "Brown", "Wilson", "Taylor", "Anderson", "Thompson",
)
_PLACES = (
    "Nagpur", "Pune", "Chennai", "Jaipur", "Lucknow", "Bhopal", "Indore",
    "Shenyang", "Wuhan", "Chengdu", "Kazan", "Samara", "Porto", "Valencia",
    "Leipzig", "Graz", "Brno", "Gdansk", "Ankara", "Tabriz", "Giza",
)
_TLDS = (".com", ".org", ".net", ".in")

_FREEMAIL = ("gmail.com", "yahoo.com", "hotmail.com", "outlook.com", "mail.ru")

# self-reported impact factors observed on clone sites; 6.1 is the mode
_IF_VALUES = (6.1, 6.1, 6.1, 6.3, 5.6, 4.2, 3.8, 2.9, 2.1, 1.5, 1.07)


@dataclass(frozen=True)
class CorpusSpec:
    n_clones: int
    n_legit: int
    n_predatory: int
    pool_size: int
    archive_size_range: tuple[int, int]
    pairwise_overlap_min: int = 3
    mutation_lexicon: tuple[str, ...] = DEFAULT_MUTATION_TOKENS
    seed: int = 0
    fake_doi_fraction: float = 0.5
    articles_per_issue: int = 10
    epoch: str = "2020-10-01"  # reference "today" for registration recency

    def validate(self) -> None:
        lo, hi = self.archive_size_range
        if lo < 1 or hi < lo:
            raise InfeasibleSpec(f"bad archive size range {self.archive_size_range}")
        if self.pairwise_overlap_min < 1:
            raise InfeasibleSpec("pairwise overlap must be >= 1")
        if self.pairwise_overlap_min > lo:
            raise InfeasibleSpec(
                f"overlap {self.pairwise_overlap_min} exceeds minimum archive size {lo}"
            )
        if self.pool_size < hi:
            raise InfeasibleSpec(
                f"pool size {self.pool_size} smaller than maximum archive size {hi}"
            )

    def to_json(self) -> dict:
        return {
            "n_clones": self.n_clones,
            "n_legit": self.n_legit,
            "n_predatory": self.n_predatory,
            "pool_size": self.pool_size,
            "archive_size_range": list(self.archive_size_range),
            "pairwise_overlap_min": self.pairwise_overlap_min,
            "mutation_lexicon": list(self.mutation_lexicon),
            "seed": self.seed,
            "fake_doi_fraction": self.fake_doi_fraction,
            "articles_per_issue": self.articles_per_issue,
            "epoch": self.epoch,
        }

    @classmethod
    def from_json(cls, data: dict) -> "CorpusSpec":
        return cls(
            n_clones=data["n_clones"],
            n_legit=data.get("n_legit", 0),
            n_predatory=data.get("n_predatory", 0),
            pool_size=data["pool_size"],
            archive_size_range=tuple(data["archive_size_range"]),
            pairwise_overlap_min=data.get("pairwise_overlap_min", 3),
            mutation_lexicon=tuple(data.get("mutation_lexicon", DEFAULT_MUTATION_TOKENS)),
            seed=data.get("seed", 0),
            fake_doi_fraction=data.get("fake_doi_fraction", 0.5),
            articles_per_issue=data.get("articles_per_issue", 10),
            epoch=data.get("epoch", "2020-10-01"),
        )


@dataclass(frozen=True)
class Article:
    title: str
    authors: tuple[str, ...]
    affiliation: str
    doi: str


@dataclass
class CorpusBundle:
    spec: CorpusSpec
    sites: dict[str, dict[str, bytes]]             # domain -> {relative path -> bytes}
    ground_truth: dict[str, str]                   # domain -> clone|legit|predatory
    article_pool: list[Article]
    site_articles: dict[str, list[tuple[Article, str]]]  # domain -> [(article, page url)]
    registry_rows: list[dict]
    registrations: dict[str, DomainRegistration]
    manifest: dict


def _load_words() -> list[str]:
    text = resources.files("clonewatch.data").joinpath("words.txt").read_text("utf-8")
    return [w for w in text.split() if w]


def _make_title(rng: random.Random, words: list[str], used: set[str]) -> str:
    while True:
        length = rng.randint(6, 14)
        tokens = [rng.choice(words) for _ in range(length)]
        title = " ".join(tokens).capitalize()
        norm = normalize_title(title)
        if norm not in used:
            used.add(norm)
            return title


def _make_issn(rng: random.Random, used: set[str]) -> str:
    while True:
        body = "".join(str(rng.randint(0, 9)) for _ in range(7))
        issn = f"{body[:4]}-{body[4:]}{issn_check_digit(body)}"
        if issn not in used:
            used.add(issn)
            return issn


def _make_domain(rng: random.Random, words: list[str], used: set[str]) -> str:
    while True:
        name = rng.choice(words) + rng.choice(words)
        domain = name[:24] + rng.choice(_TLDS)
        if domain not in used:
            used.add(domain)
            return domain


def _make_person(rng: random.Random) -> str:
    return f"{rng.choice(_FIRST_NAMES)} {rng.choice(_LAST_NAMES)}"


def _make_affiliation(rng: random.Random, words: list[str]) -> str:
    return (
        f"Department of {rng.choice(words).capitalize()} Engineering, "
        f"University of {rng.choice(_PLACES)}"
    )


def _make_doi(rng: random.Random, fake: bool) -> str:
    registrant = rng.randint(1000, 99999)
    suffix = f"{rng.choice('abcdefgh')}{rng.randint(100, 999)}-{rng.randint(10, 99)}"
    if fake:
        # clone-style DOI that does not start with "10."
        return f"{rng.randint(11, 99)}.{registrant}/{suffix}"
    return f"10.{registrant}/{suffix}"


def _mutate_masthead(rng: random.Random, original: str, lexicon: tuple[str, ...]) -> str:
    token = rng.choice(lexicon)
    if token.lower().endswith(" of"):
        return f"{token} {original}"
    return f"{original} {token}"


_PAGE_TEMPLATE = """<!DOCTYPE html>
<html>
<head><title>{masthead}</title></head>
<body>
<h1 class="masthead">{masthead}</h1>
<p class="issn">ISSN: {issn}</p>
{impact_line}<p class="contact">Contact: <a href="mailto:{email}">{email}</a></p>
{body}
<p class="footer">{footer}</p>
</body>
</html>
"""


def _render_article(article: Article) -> str:
    return (
        '<div class="article">'
        f'<h3 class="title">{article.title}</h3>'
        f'<span class="authors">{"; ".join(article.authors)}</span>'
        f'<span class="affiliation">{article.affiliation}</span>'
        f'<span class="doi">DOI: {article.doi}</span>'
        "</div>"
    )


def generate_corpus(spec: CorpusSpec) -> CorpusBundle:
    """Render a full synthetic network; a pure function of the spec."""
    spec.validate()
    rng = random.Random(spec.seed)
    words = _load_words()
    used_titles: set[str] = set()
    used_issns: set[str] = set()
    used_domains: set[str] = set()

    # Shared article pool dealt across the clone sites.
    pool = [
        Article(
            title=_make_title(rng, words, used_titles),
            authors=tuple(_make_person(rng) for _ in range(rng.randint(2, 4))),
            affiliation=_make_affiliation(rng, words),
            doi=_make_doi(rng, fake=False),
        )
        for _ in range(spec.pool_size)
    ]
    # The core block appears in every clone archive, guaranteeing the
    # pairwise overlap floor; the rest is dealt at random.
    core = pool[: spec.pairwise_overlap_min]
    rest = pool[spec.pairwise_overlap_min :]

    epoch = date.fromisoformat(spec.epoch)
    sites: dict[str, dict[str, bytes]] = {}
    ground_truth: dict[str, str] = {}
    site_articles: dict[str, list[tuple[Article, str]]] = {}
    registry_rows: list[dict] = []
    registrations: dict[str, DomainRegistration] = {}

    cluster_day = epoch - timedelta(days=rng.randint(200, 260))

    for i in range(spec.n_clones):
        domain = _make_domain(rng, words, used_domains)
        original_title = " ".join(
            rng.choice(words).capitalize() for _ in range(rng.randint(2, 4))
        )
        original_issn = _make_issn(rng, used_issns)
        masthead = _mutate_masthead(rng, original_title, spec.mutation_lexicon)
        size = rng.randint(*spec.archive_size_range)
        archive = list(core) + rng.sample(rest, size - len(core))
        # clone trait: a fraction of displayed DOIs do not start with "10."
        display = [
            Article(a.title, a.authors, a.affiliation,
                    _make_doi(rng, fake=True) if rng.random() < spec.fake_doi_fraction
                    else a.doi)
            for a in archive
        ]
        email = f"editor.{re.sub(r'[^a-z0-9]', '', domain.split('.')[0])}@{rng.choice(_FREEMAIL)}"
        impact = rng.choice(_IF_VALUES)
        # half the clones sit on one registration day, mirroring batch setup
        if i < spec.n_clones // 2:
            created = cluster_day
        else:
            created = epoch - timedelta(days=rng.randint(30, 330))
        registrations[domain] = DomainRegistration(
            domain=domain, created=created, updated=created,
            registrant_redacted=True, source=RegistrationSource.RDAP,
        )
        ground_truth[domain] = "clone"
        registry_rows.append({
            "clone_title": masthead,
            "clone_url": f"http://{domain}/",
            "clone_issn": original_issn,
            "original_title": original_title,
            "original_issn": original_issn,
        })
        sites[domain], site_articles[domain] = _render_site(
            domain, masthead, original_issn, email, display, spec,
            impact_factor=impact,
        )

    for _ in range(spec.n_predatory):
        domain = _make_domain(rng, words, used_domains)
        masthead = " ".join(
            rng.choice(words).capitalize() for _ in range(rng.randint(2, 4))
        ) + " International"
        issn = _make_issn(rng, used_issns)
        size = rng.randint(*spec.archive_size_range)
        shared = rng.sample(pool, max(1, size // 2))
        own = [
            Article(
                title=_make_title(rng, words, used_titles),
                authors=tuple(_make_person(rng) for _ in range(rng.randint(2, 3))),
                affiliation=_make_affiliation(rng, words),
                doi=_make_doi(rng, fake=False),
            )
            for _ in range(size - len(shared))
        ]
        # pooled texts but signed by different authors
        resigned = [
            Article(a.title, tuple(_make_person(rng) for _ in range(2)),
                    _make_affiliation(rng, words), _make_doi(rng, fake=False))
            for a in shared
        ]
        email = f"editor@{domain}"
        registrations[domain] = DomainRegistration(
            domain=domain,
            created=date(rng.randint(2005, 2015), rng.randint(1, 12), rng.randint(1, 28)),
            updated=None, registrant_redacted=False, source=RegistrationSource.RDAP,
        )
        ground_truth[domain] = "predatory"
        sites[domain], site_articles[domain] = _render_site(
            domain, masthead, issn, email, resigned + own, spec, impact_factor=None,
        )

    for _ in range(spec.n_legit):
        domain = _make_domain(rng, words, used_domains)
        masthead = " ".join(
            rng.choice(words).capitalize() for _ in range(rng.randint(2, 4))
        )
        issn = _make_issn(rng, used_issns)
        size = rng.randint(*spec.archive_size_range)
        own = [
            Article(
                title=_make_title(rng, words, used_titles),
                authors=tuple(_make_person(rng) for _ in range(rng.randint(2, 4))),
                affiliation=_make_affiliation(rng, words),
                doi=_make_doi(rng, fake=False),
            )
            for _ in range(size)
        ]
        email = f"office@{domain}"
        registrations[domain] = DomainRegistration(
            domain=domain,
            created=date(rng.randint(1995, 2012), rng.randint(1, 12), rng.randint(1, 28)),
            updated=None, registrant_redacted=False, source=RegistrationSource.RDAP,
        )
        ground_truth[domain] = "legit"
        sites[domain], site_articles[domain] = _render_site(
            domain, masthead, issn, email, own, spec, impact_factor=None,
        )

    manifest = {
        "spec": spec.to_json(),
        "epoch": spec.epoch,
        "ground_truth": dict(sorted(ground_truth.items())),
        "registrations": {
            d: r.to_json() for d, r in sorted(registrations.items())
        },
        "roots": {d: f"http://{d}/" for d in sorted(sites)},
        "content_hashes": {
            f"{domain}/{path}": hashlib.sha256(blob).hexdigest()
            for domain in sorted(sites)
            for path, blob in sorted(sites[domain].items())
        },
    }
    return CorpusBundle(
        spec=spec,
        sites=sites,
        ground_truth=ground_truth,
        article_pool=pool,
        site_articles=site_articles,
        registry_rows=registry_rows,
        registrations=registrations,
        manifest=manifest,
    )


def _render_site(
    domain: str,
    masthead: str,
    issn: str,
    email: str,
    articles: list[Article],
    spec: CorpusSpec,
    impact_factor: float | None,
) -> tuple[dict[str, bytes], list[tuple[Article, str]]]:
    per_issue = spec.articles_per_issue
    issues = [articles[i : i + per_issue] for i in range(0, len(articles), per_issue)]
    impact_line = (
        f'<p class="impact">Impact Factor: {impact_factor:g}</p>\n'
        if impact_factor is not None
        else ""
    )
    pages: dict[str, bytes] = {}
    placed: list[tuple[Article, str]] = []

    recent = "\n".join(_render_article(a) for a in articles[:5])
    index_body = (
        '<div class="recent"><h2>Recent Articles</h2>\n' + recent + "\n</div>\n"
        '<p><a class="nav" href="/archive.html">Archive</a></p>'
    )
    pages["index.html"] = _PAGE_TEMPLATE.format(
        masthead=masthead, issn=issn, impact_line=impact_line, email=email,
        body=index_body, footer=f"{masthead}: open access, fast publication",
    ).encode("utf-8")

    issue_links = "\n".join(
        f'<li><a class="issue-link" href="/issue-{n}.html">Issue {n}</a></li>'
        for n in range(1, len(issues) + 1)
    )
    pages["archive.html"] = _PAGE_TEMPLATE.format(
        masthead=masthead, issn=issn, impact_line=impact_line, email=email,
        body=f'<h2>Archive</h2>\n<ul class="issues">\n{issue_links}\n</ul>',
        footer="archive",
    ).encode("utf-8")

    for n, issue in enumerate(issues, start=1):
        body = f"<h2>Issue {n}</h2>\n" + "\n".join(_render_article(a) for a in issue)
        url = f"http://{domain}/issue-{n}.html"
        pages[f"issue-{n}.html"] = _PAGE_TEMPLATE.format(
            masthead=masthead, issn=issn, impact_line=impact_line, email=email,
            body=body, footer=f"issue {n}",
        ).encode("utf-8")
        placed.extend((a, url) for a in issue)

    return pages, placed


def write_bundle(bundle: CorpusBundle, out_dir: str | Path) -> Path:
    """Lay the bundle out as static files servable by any web server."""
    out = Path(out_dir)
    for domain, pages in sorted(bundle.sites.items()):
        site_dir = out / "sites" / domain
        site_dir.mkdir(parents=True, exist_ok=True)
        for path, blob in sorted(pages.items()):
            (site_dir / path).write_bytes(blob)
    (out / "manifest.json").write_text(
        json.dumps(bundle.manifest, indent=2, sort_keys=True, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )
    with (out / "registry.csv").open("w", encoding="utf-8", newline="") as fp:
        import csv

        writer = csv.DictWriter(fp, fieldnames=[
            "clone_title", "clone_url", "clone_issn", "original_title", "original_issn",
        ])
        writer.writeheader()
        for row in bundle.registry_rows:
            writer.writerow(row)
    index = build_fixture_index(bundle)
    (out / "index.json").write_text(index.to_json_text(), encoding="utf-8")
    return out


# -- fixture search index ------------------------------------------------------


@dataclass
class FixtureIndex:
    """Inverted index over a rendered corpus; offline search provider."""

    postings: dict[str, list[tuple[str, str, int]]] = field(default_factory=dict)
    extra_tokens: dict[str, list[str]] = field(default_factory=dict)

    @staticmethod
    def _jitter(title_norm: str, domain: str) -> int:
        digest = hashlib.sha1(f"{title_norm}|{domain}".encode()).hexdigest()
        return int(digest[:6], 16) % 100

    def add(self, title: str, domain: str, url: str, extra_tokens: list[str]) -> None:
        norm = normalize_title(title)
        if not norm:
            return
        entry = (domain, url, self._jitter(norm, domain))
        bucket = self.postings.setdefault(norm, [])
        if all(e[0] != domain or e[1] != url for e in bucket):
            bucket.append(entry)
        self.extra_tokens[f"{norm}|{domain}"] = sorted(set(extra_tokens))

    def finalize(self) -> None:
        for bucket in self.postings.values():
            bucket.sort(key=lambda e: (e[0], e[1]))

    def to_json_text(self) -> str:
        return json.dumps(
            {
                "postings": {k: [list(e) for e in v]
                             for k, v in sorted(self.postings.items())},
                "extra_tokens": dict(sorted(self.extra_tokens.items())),
            },
            sort_keys=True,
            ensure_ascii=False,
        )

    @classmethod
    def from_json_text(cls, text: str) -> "FixtureIndex":
        data = json.loads(text)
        return cls(
            postings={k: [tuple(e) for e in v] for k, v in data["postings"].items()},
            extra_tokens={k: list(v) for k, v in data["extra_tokens"].items()},
        )


def build_fixture_index(bundle: CorpusBundle) -> FixtureIndex:
    index = FixtureIndex()
    for domain in sorted(bundle.site_articles):
        for article, url in bundle.site_articles[domain]:
            tokens = []
            for author in article.authors:
                tokens.extend(title_tokens(author))
            tokens.extend(title_tokens(article.affiliation))
            index.add(article.title, domain, url, tokens)
    index.finalize()
    return index


_QUOTED_RE = re.compile(r'"([^"]+)"')


def fixture_search(index: FixtureIndex, query_string: str, depth: int) -> list[str]:
    """Exact-phrase match on the quoted segment, token bonus on the rest."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    match = _QUOTED_RE.search(query_string)
    if match:
        phrase = match.group(1)
        rest = query_string[: match.start()] + query_string[match.end() :]
    else:
        phrase = query_string
        rest = ""
    norm = normalize_title(phrase)
    bucket = index.postings.get(norm, [])
    if not bucket:
        return []
    rest_tokens = set(title_tokens(rest))
    scored = []
    for domain, url, jitter in bucket:
        extra = set(index.extra_tokens.get(f"{norm}|{domain}", ()))
        bonus = 10 * len(rest_tokens & extra)
        scored.append((-(1000 + bonus + jitter), domain, url))
    scored.sort()
    return [url for _, _, url in scored[:depth]]


class FixtureSearchProvider:
    """SearchProvider over a fixture index (optionally loaded from a bundle dir)."""

    def __init__(self, index: FixtureIndex):
        self.index = index
        self.calls = 0

    @classmethod
    def from_dir(cls, bundle_dir: str | Path) -> "FixtureSearchProvider":
        text = (Path(bundle_dir) / "index.json").read_text(encoding="utf-8")
        return cls(FixtureIndex.from_json_text(text))

    def search(self, query_string: str, depth: int) -> list[str]:
        self.calls += 1
        return fixture_search(self.index, query_string, depth)


def load_manifest(bundle_dir: str | Path) -> dict:
    return json.loads((Path(bundle_dir) / "manifest.json").read_text(encoding="utf-8"))


class BundleFetcher:
    """Serves a bundle's rendered pages straight from memory (no disk)."""

    def __init__(self, bundle: CorpusBundle):
        self.bundle = bundle

    def fetch(self, url: str):
        from urllib.parse import urlsplit

        from .domains import registrable_domain
        from .errors import Unreachable
        from .models import RawPage

        domain = registrable_domain(url)
        pages = self.bundle.sites.get(domain)
        if pages is None:
            raise Unreachable(f"no such fixture site: {domain}")
        path = urlsplit(url).path.lstrip("/") or "index.html"
        blob = pages.get(path)
        if blob is None:
            return RawPage(url=url, fetched_at="1970-01-01T00:00:00.000000Z",
                           status=404, body=b"not found", content_type="text/plain")
        return RawPage(url=url, fetched_at="1970-01-01T00:00:00.000000Z",
                       status=200, body=blob,
                       content_type="text/html; charset=utf-8")


def registry_entries(bundle: CorpusBundle):
    """The bundle's original-journal registry as heuristics entries."""
    from .heuristics import RegistryEntry, _split_alternatives

    return [
        RegistryEntry(
            titles=_split_alternatives(row["original_title"]),
            issns=tuple(row["original_issn"].split(";")),
        )
        for row in bundle.registry_rows
    ]
