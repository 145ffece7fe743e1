#!/usr/bin/env python3
"""Re-record the UI contract fixtures in ui/test/fixtures/.

Runs a deterministic fixture corpus through the triage API and snapshots the
responses the browser client is tested against. Run from the repo root after
changing API payload shapes, then re-run `npm test` in ui/.
"""

import json
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from clonewatch.api import RunEnvironment, create_app
from clonewatch.clock import FixedStepClock
from clonewatch.corpus import (
    CorpusSpec,
    FixtureSearchProvider,
    generate_corpus,
    write_bundle,
)
from clonewatch.harvest import DirectoryFetcher
from clonewatch.heuristics import StaticRegistrationProvider, load_registry
from clonewatch.snowball import RunConfig
from clonewatch.store import Store

OUT = Path(__file__).resolve().parent.parent / "ui" / "test" / "fixtures"
RUN = "run-ui"

SPEC = CorpusSpec(
    n_clones=4, n_legit=2, n_predatory=1, pool_size=60,
    archive_size_range=(10, 16), pairwise_overlap_min=3, seed=7,
)


def dump(name: str, data) -> None:
    (OUT / name).write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    bundle = generate_corpus(SPEC)
    tmp = Path(tempfile.mkdtemp())
    bundle_dir = tmp / "corpus"
    write_bundle(bundle, bundle_dir)
    env = RunEnvironment(
        store=Store(tmp / "data"),
        provider_factory=lambda: FixtureSearchProvider.from_dir(bundle_dir),
        fetcher_factory=lambda: DirectoryFetcher(bundle_dir),
        registration_provider=StaticRegistrationProvider(bundle.registrations),
        registry=load_registry(bundle_dir / "registry.csv"),
        clock_factory=lambda: FixedStepClock(start=SPEC.epoch + "T00:00:00.000000Z"),
        default_config=RunConfig(run_date=SPEC.epoch, auto_verdicts=False),
    )
    app = create_app(env)
    client = TestClient(app)
    clones = sorted(d for d, k in bundle.ground_truth.items() if k == "clone")
    seed = clones[0]

    assert client.post("/api/v1/runs", json={
        "seeds": [f"http://{seed}/"], "run_id": RUN,
    }).status_code == 201
    assert client.post(f"/api/v1/runs/{RUN}/iterate").status_code == 202
    app.state.runs[RUN].wait()

    first_queue = client.get(f"/api/v1/runs/{RUN}/candidates").json()
    first = first_queue["items"][0]["domain"]
    ok = client.post(f"/api/v1/runs/{RUN}/candidates/{first}/verdict",
                     json={"verdict": "confirmed_clone", "rationale": "analyst check"})
    assert ok.status_code == 200 and ok.json()["frontier_delta"] == 1
    dump("verdict_ok.json", ok.json())
    conflict = client.post(f"/api/v1/runs/{RUN}/candidates/{first}/verdict",
                           json={"verdict": "legitimate"})
    assert conflict.status_code == 409
    dump("verdict_409.json", conflict.json())

    assert client.post(f"/api/v1/runs/{RUN}/iterate").status_code == 202
    app.state.runs[RUN].wait()
    candidates = client.get(f"/api/v1/runs/{RUN}/candidates").json()
    dump("candidates.json", candidates)
    dump("status.json", client.get(f"/api/v1/runs/{RUN}/status").json())
    top = candidates["items"][0]["domain"]
    dump("evidence.json",
         client.get(f"/api/v1/runs/{RUN}/candidates/{top}/evidence").json())

    for item in candidates["items"]:
        client.post(f"/api/v1/runs/{RUN}/candidates/{item['domain']}/verdict",
                    json={"verdict": "confirmed_clone"})
    dump("graph.json", client.get(f"/api/v1/runs/{RUN}/graph").json())
    dump("empty_graph.json",
         {"nodes": [], "edges": [], "components": 0, "average_degree": 0.0})
    print("recorded:", ", ".join(sorted(p.name for p in OUT.iterdir())))


if __name__ == "__main__":
    main()
