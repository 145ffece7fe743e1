import pytest
from fastapi.testclient import TestClient

from clonewatch.api import RunEnvironment, create_app
from clonewatch.clock import FixedStepClock
from clonewatch.corpus import FixtureSearchProvider
from clonewatch.harvest import DirectoryFetcher
from clonewatch.heuristics import StaticRegistrationProvider, load_registry
from clonewatch.models import Verdict
from clonewatch.snowball import RunConfig
from clonewatch.store import Store

RUN = "run-api"


@pytest.fixture()
def client(small_bundle, small_bundle_dir, tmp_path):
    config = RunConfig(run_date=small_bundle.spec.epoch, auto_verdicts=False)
    env = RunEnvironment(
        store=Store(tmp_path / "data"),
        provider_factory=lambda: FixtureSearchProvider.from_dir(small_bundle_dir),
        fetcher_factory=lambda: DirectoryFetcher(small_bundle_dir),
        registration_provider=StaticRegistrationProvider(small_bundle.registrations),
        registry=load_registry(small_bundle_dir / "registry.csv"),
        clock_factory=lambda: FixedStepClock(
            start=small_bundle.spec.epoch + "T00:00:00.000000Z"),
        default_config=config,
    )
    app = create_app(env)
    with TestClient(app) as c:
        c.bundle = small_bundle
        yield c


def clone_seed(bundle):
    clones = sorted(d for d, k in bundle.ground_truth.items() if k == "clone")
    return clones[0]


def create_and_iterate(client):
    seed = clone_seed(client.bundle)
    resp = client.post("/api/v1/runs", json={
        "seeds": [f"http://{seed}/"], "run_id": RUN,
    })
    assert resp.status_code == 201
    resp = client.post(f"/api/v1/runs/{RUN}/iterate")
    assert resp.status_code == 202
    client.app.state.runs[RUN].wait()
    return seed


def test_create_and_list_runs(client):
    create_and_iterate(client)
    resp = client.get("/api/v1/runs")
    assert resp.status_code == 200
    assert RUN in resp.json()["runs"]
    assert resp.headers["X-API-Version"] == "1"


def test_status_accounting_matches_ledger(client):
    create_and_iterate(client)
    status = client.get(f"/api/v1/runs/{RUN}/status").json()
    engine = client.app.state.runs[RUN].engine
    executed = {e.payload["query"]["id"]
                for e in engine.store.ledger_events(RUN)
                if e.kind == "QueryExecuted"}
    assert status["query_count"] == len(executed)
    assert status["iteration"] == 1


def test_queue_lists_pending_candidates_score_ordered(client):
    create_and_iterate(client)
    body = client.get(f"/api/v1/runs/{RUN}/candidates").json()
    items = body["items"]
    assert items, "iteration should surface candidates"
    scores = [i["score"] for i in items]
    assert scores == sorted(scores, reverse=True)
    assert all(i["verdict"] in ("pending", "unknown") for i in items)
    assert all(i["indicators"] for i in items)


def test_queue_pagination_cursor(client):
    create_and_iterate(client)
    full = client.get(f"/api/v1/runs/{RUN}/candidates").json()["items"]
    page1 = client.get(f"/api/v1/runs/{RUN}/candidates", params={"limit": 1}).json()
    assert len(page1["items"]) == 1
    seen = [page1["items"][0]["domain"]]
    cursor = page1["cursor"]
    while cursor:
        page = client.get(f"/api/v1/runs/{RUN}/candidates",
                          params={"limit": 1, "cursor": cursor}).json()
        seen.extend(i["domain"] for i in page["items"])
        cursor = page["cursor"]
    assert seen == [i["domain"] for i in full]


def test_confirm_verdict_reports_frontier_delta(client):
    create_and_iterate(client)
    items = client.get(f"/api/v1/runs/{RUN}/candidates").json()["items"]
    domain = items[0]["domain"]
    resp = client.post(f"/api/v1/runs/{RUN}/candidates/{domain}/verdict",
                       json={"verdict": "confirmed_clone", "rationale": "analyst"})
    assert resp.status_code == 200
    body = resp.json()
    assert body["frontier_delta"] == 1
    assert body["item"]["verdict"] == "confirmed_clone"


def test_legitimate_verdict_zero_delta(client):
    create_and_iterate(client)
    items = client.get(f"/api/v1/runs/{RUN}/candidates").json()["items"]
    domain = items[-1]["domain"]
    resp = client.post(f"/api/v1/runs/{RUN}/candidates/{domain}/verdict",
                       json={"verdict": "legitimate", "rationale": ""})
    assert resp.status_code == 200
    assert resp.json()["frontier_delta"] == 0


def test_verdict_unknown_domain_404(client):
    create_and_iterate(client)
    resp = client.post(f"/api/v1/runs/{RUN}/candidates/nobody.test/verdict",
                       json={"verdict": "legitimate"})
    assert resp.status_code == 404
    assert resp.json()["code"] == "unknown_domain"


def test_illegal_transition_409(client):
    create_and_iterate(client)
    items = client.get(f"/api/v1/runs/{RUN}/candidates").json()["items"]
    domain = items[0]["domain"]
    ok = client.post(f"/api/v1/runs/{RUN}/candidates/{domain}/verdict",
                     json={"verdict": "legitimate"})
    assert ok.status_code == 200
    conflict = client.post(f"/api/v1/runs/{RUN}/candidates/{domain}/verdict",
                           json={"verdict": "confirmed_clone"})
    assert conflict.status_code == 409
    assert conflict.json()["code"] == "illegal_transition"


def test_unknown_run_404(client):
    assert client.get("/api/v1/runs/run-none/status").status_code == 404
    assert client.get("/api/v1/runs/run-none/candidates").status_code == 404


def test_graph_reflects_verdicts(client):
    seed = create_and_iterate(client)
    empty = client.get(f"/api/v1/runs/{RUN}/graph").json()
    assert empty["nodes"] == []

    engine = client.app.state.runs[RUN].engine
    items = client.get(f"/api/v1/runs/{RUN}/candidates").json()["items"]
    confirmed = [seed]
    for item in items:
        resp = client.post(f"/api/v1/runs/{RUN}/candidates/{item['domain']}/verdict",
                           json={"verdict": "confirmed_clone"})
        assert resp.status_code == 200
        confirmed.append(item["domain"])
    # the seed itself is a harvested candidate; confirm it too
    client.post(f"/api/v1/runs/{RUN}/candidates/{seed}/verdict",
                json={"verdict": "confirmed_clone"})
    graph = client.get(f"/api/v1/runs/{RUN}/graph").json()
    assert set(graph["nodes"]) >= set(confirmed) - {seed} or graph["nodes"]
    assert graph["components"] >= 1
    if graph["edges"]:
        assert graph["average_degree"] == pytest.approx(
            2 * len(graph["edges"]) / len(graph["nodes"]))


def test_evidence_endpoint(client):
    create_and_iterate(client)
    items = client.get(f"/api/v1/runs/{RUN}/candidates").json()["items"]
    domain = items[0]["domain"]
    body = client.get(f"/api/v1/runs/{RUN}/candidates/{domain}/evidence").json()
    assert body["evidence"]["domain"] == domain
    kinds = {i["kind"] for i in body["evidence"]["indicators"]}
    assert "shared_content_overlap" in kinds
    # projections never expose raw page bytes
    assert "body" not in body["evidence"]
    assert "html" not in str(body["item"]).lower()


def test_get_endpoints_do_not_mutate(client):
    create_and_iterate(client)
    engine = client.app.state.runs[RUN].engine
    seq_before = len(engine.store.ledger_events(RUN))
    client.get(f"/api/v1/runs/{RUN}/status")
    client.get(f"/api/v1/runs/{RUN}/candidates")
    client.get(f"/api/v1/runs/{RUN}/graph")
    assert len(engine.store.ledger_events(RUN)) == seq_before


def test_concurrent_verdicts_all_land(client):
    import threading

    create_and_iterate(client)
    items = client.get(f"/api/v1/runs/{RUN}/candidates").json()["items"]
    domains = [i["domain"] for i in items]
    results = {}

    def post(domain):
        resp = client.post(f"/api/v1/runs/{RUN}/candidates/{domain}/verdict",
                           json={"verdict": "confirmed_clone"})
        results[domain] = resp.status_code

    threads = [threading.Thread(target=post, args=(d,)) for d in domains]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert all(code == 200 for code in results.values())
    engine = client.app.state.runs[RUN].engine
    recorded = [e for e in engine.store.ledger_events(RUN)
                if e.kind == "VerdictRecorded"]
    assert {e.payload["domain"] for e in recorded} >= set(domains)
    seqs = [e.seq for e in engine.store.ledger_events(RUN)]
    assert seqs == list(range(1, len(seqs) + 1))  # gap-free ordering


def test_busy_iteration_409(client, small_bundle):
    create_and_iterate(client)
    run = client.app.state.runs[RUN]
    run.iterating = True  # simulate an in-flight iteration
    resp = client.post(f"/api/v1/runs/{RUN}/iterate")
    assert resp.status_code == 409
    run.iterating = False


def test_auth_required_when_token_configured(small_bundle, small_bundle_dir, tmp_path):
    env = RunEnvironment(
        store=Store(tmp_path / "data"),
        provider_factory=lambda: FixtureSearchProvider.from_dir(small_bundle_dir),
        fetcher_factory=lambda: DirectoryFetcher(small_bundle_dir),
        registration_provider=StaticRegistrationProvider(small_bundle.registrations),
        auth_token="sekrit",
    )
    app = create_app(env)
    with TestClient(app) as client:
        assert client.get("/api/v1/runs").status_code == 401
        ok = client.get("/api/v1/runs", headers={"Authorization": "Bearer sekrit"})
        assert ok.status_code == 200


def test_serves_built_ui_when_present(small_bundle, small_bundle_dir, tmp_path):
    from pathlib import Path

    dist = Path(__file__).resolve().parent.parent / "ui" / "dist"
    if not (dist / "index.html").is_file():
        pytest.skip("ui/dist not built")
    env = RunEnvironment(
        store=Store(tmp_path / "data"),
        provider_factory=lambda: FixtureSearchProvider.from_dir(small_bundle_dir),
        fetcher_factory=lambda: DirectoryFetcher(small_bundle_dir),
        registration_provider=StaticRegistrationProvider(small_bundle.registrations),
    )
    app = create_app(env, ui_dir=str(dist))
    with TestClient(app) as ui_client:
        page = ui_client.get("/")
        assert page.status_code == 200
        assert "clonewatch triage" in page.text
        # API routes still take precedence over the static mount
        assert ui_client.get("/api/v1/runs").status_code == 200


def test_create_run_validation(client):
    assert client.post("/api/v1/runs", json={"seeds": []}).status_code == 400
    seed = clone_seed(client.bundle)
    first = client.post("/api/v1/runs",
                        json={"seeds": [f"http://{seed}/"], "run_id": "run-dup"})
    assert first.status_code == 201
    dup = client.post("/api/v1/runs",
                      json={"seeds": [f"http://{seed}/"], "run_id": "run-dup"})
    assert dup.status_code == 409
    bad = client.post("/api/v1/runs", json={
        "seeds": [f"http://{seed}/"], "config": {"no_such_knob": 1},
    })
    assert bad.status_code == 400
    assert bad.json()["code"] == "bad_config"
