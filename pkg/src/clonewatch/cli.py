"""Command-line entry point: harvest, snowball, graph export, corpus, report."""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from pathlib import Path

from .clock import FixedStepClock, SystemClock, utc_now_iso
from .models import QueryType
from .snowball import Engine, RunConfig
from .store import Store

ENV_API_KEY = "CLONEWATCH_SEARCH_API_KEY"
ENV_ENDPOINT = "CLONEWATCH_SEARCH_ENDPOINT"
ENV_DATA_ROOT = "CLONEWATCH_DATA_ROOT"

DEFAULT_ENDPOINT = "https://www.googleapis.com/customsearch/v1"


def _data_root(args) -> Path:
    root = getattr(args, "data_root", None) or os.environ.get(ENV_DATA_ROOT) or "data"
    return Path(root)


def _load_config_file(path: str | None) -> dict:
    """Plain key=value config file; values parsed as JSON when possible."""
    if not path:
        return {}
    overrides: dict = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise SystemExit(f"{path}:{lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        value = value.strip()
        try:
            overrides[key.strip()] = json.loads(value)
        except ValueError:
            overrides[key.strip()] = value
    return overrides


def _build_fixture_env(bundle_dir: Path, store: Store):
    from .corpus import FixtureSearchProvider, load_manifest
    from .harvest import DirectoryFetcher
    from .heuristics import DomainRegistration, StaticRegistrationProvider, load_registry

    manifest = load_manifest(bundle_dir)
    provider = FixtureSearchProvider.from_dir(bundle_dir)
    fetcher = DirectoryFetcher(bundle_dir)
    registrations = {
        d: DomainRegistration.from_json(r)
        for d, r in manifest.get("registrations", {}).items()
    }
    registration_provider = StaticRegistrationProvider(registrations)
    registry_path = bundle_dir / "registry.csv"
    registry = load_registry(registry_path) if registry_path.is_file() else []
    return provider, fetcher, registration_provider, registry, manifest


def _build_live_env(args, store: Store):
    from .harvest import CachingFetcher, HttpFetcher
    from .heuristics import load_registry
    from .rdap import RdapClient
    from .search import LiveSearchProvider

    api_key = os.environ.get(ENV_API_KEY, "")
    if not api_key:
        raise SystemExit(f"live provider needs {ENV_API_KEY} in the environment")
    endpoint = os.environ.get(ENV_ENDPOINT, DEFAULT_ENDPOINT)
    provider = LiveSearchProvider(endpoint, api_key, daily_cap=args.daily_cap)
    fetcher = CachingFetcher(HttpFetcher(min_delay=args.fetch_delay), store)
    registration_provider = RdapClient(store=store)
    registry = []
    if args.registry and Path(args.registry).is_file():
        registry = load_registry(args.registry)
    return provider, fetcher, registration_provider, registry, {}


def _derive_run_id(seeds: list[str], config: RunConfig, manifest: dict) -> str:
    blob = json.dumps(
        {"seeds": sorted(seeds), "config": config.to_json(),
         "manifest": manifest.get("content_hashes", {})},
        sort_keys=True,
    ).encode("utf-8")
    return "run-" + hashlib.sha256(blob).hexdigest()[:10]


def cmd_harvest(args) -> int:
    from .harvest import DirectoryFetcher, HttpFetcher, harvest_site, write_archive_jsonl
    from .profiles import resolve_profile

    profile = resolve_profile(args.profile)
    if args.fixture:
        fetcher = DirectoryFetcher(args.fixture)
    else:
        fetcher = HttpFetcher(min_delay=args.fetch_delay)
    archive = harvest_site(args.url, profile, fetcher)
    out_dir = _data_root(args) / "archives"
    path = write_archive_jsonl(archive, out_dir)
    print(f"{archive.site}: {len(archive.records)} records "
          f"from {archive.pages_visited} page(s) -> {path}")
    for warning in archive.warnings:
        print(f"  warning: {warning}", file=sys.stderr)
    return 0


def cmd_snowball(args) -> int:
    data_root = _data_root(args)
    store = Store(data_root)

    overrides = _load_config_file(args.config)
    manifest: dict = {}
    if args.provider.startswith("fixture:"):
        bundle_dir = Path(args.provider.split(":", 1)[1])
        provider, fetcher, registration_provider, registry, manifest = (
            _build_fixture_env(bundle_dir, store)
        )
        clock = FixedStepClock(start=manifest.get("epoch", "2020-10-01") + "T00:00:00.000000Z")
        run_date = manifest.get("epoch", RunConfig.run_date)
    elif args.provider == "live":
        provider, fetcher, registration_provider, registry, manifest = (
            _build_live_env(args, store)
        )
        clock = SystemClock()
        run_date = utc_now_iso()[:10]
    else:
        print(f"unknown provider {args.provider!r} (use live or fixture:<dir>)",
              file=sys.stderr)
        return 2

    config_fields = {
        "threshold": args.threshold,
        "depth": args.depth,
        "query_type": QueryType(args.query_type).value,
        "run_date": run_date,
        "auto_verdicts": args.auto,
        **overrides,
    }
    config = RunConfig.from_json({**RunConfig().to_json(), **config_fields})

    seeds = [
        line.strip()
        for line in Path(args.seeds).read_text(encoding="utf-8").splitlines()
        if line.strip() and not line.startswith("#")
    ]
    if not seeds:
        print("seeds file is empty", file=sys.stderr)
        return 1

    run_id = args.run_id or _derive_run_id(seeds, config, manifest)
    engine = Engine(
        run_id=run_id, seeds=seeds, config=config, store=store,
        provider=provider, fetcher=fetcher,
        registration_provider=registration_provider, registry=registry,
        clock=clock,
    )

    if args.serve:
        from .api import RunEnvironment, create_app

        env = RunEnvironment(
            store=store,
            provider_factory=lambda: provider,
            fetcher_factory=lambda: fetcher,
            registration_provider=registration_provider,
            registry=registry,
            clock_factory=lambda: clock,
            default_config=config,
            auth_token=os.environ.get("CLONEWATCH_API_TOKEN") or None,
        )
        engine.start()
        app = create_app(env, ui_dir=args.ui_dir)
        from .api import ServerRun

        app.state.runs[run_id] = ServerRun(engine)
        print(f"run {run_id} ready; serving triage API on port {args.port}")
        import uvicorn

        uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
        return 0

    started_at = utc_now_iso()
    report = engine.run_to_fixpoint()
    engine.write_query_ledger()
    run_dir = store.run_dir(run_id)
    run_dir.mkdir(parents=True, exist_ok=True)
    (run_dir / "report.json").write_text(report.to_json_text(), encoding="utf-8")
    (run_dir / "report.txt").write_text(report.to_text(), encoding="utf-8")
    (run_dir / "manifest.json").write_text(json.dumps({
        "run_id": run_id,
        "started_at": started_at,
        "finished_at": utc_now_iso(),
        "provider": args.provider,
        "seeds": seeds,
    }, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(report.to_text())
    print(f"report written to {run_dir / 'report.json'}")
    return 0


def cmd_graph(args) -> int:
    from . import graph as graph_mod
    from .errors import EmptyGraph
    from .snowball import replay_state

    store = Store(_data_root(args))
    if args.run not in store.list_runs():
        print(f"no run named {args.run!r}", file=sys.stderr)
        return 1
    state = replay_state(store, args.run)
    try:
        g = graph_mod.build_graph(state)
    except EmptyGraph:
        print("run has no confirmed clones; nothing to export", file=sys.stderr)
        return 1
    blob = graph_mod.export_graph(g, args.format)
    out = Path(args.out) if args.out else None
    if out is None:
        sys.stdout.buffer.write(blob)
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_bytes(blob)
        print(f"{args.format} graph with {len(g.nodes)} nodes, "
              f"{len(g.edges)} edges -> {out}")
    return 0


def cmd_corpus(args) -> int:
    from .corpus import CorpusSpec, generate_corpus, write_bundle

    spec = CorpusSpec.from_json(json.loads(Path(args.spec).read_text(encoding="utf-8")))
    bundle = generate_corpus(spec)
    out = write_bundle(bundle, args.out)
    counts = {}
    for kind in bundle.ground_truth.values():
        counts[kind] = counts.get(kind, 0) + 1
    print(f"corpus written to {out}: " +
          ", ".join(f"{v} {k}" for k, v in sorted(counts.items())))
    return 0


def cmd_report(args) -> int:
    store = Store(_data_root(args))
    run_dir = store.run_dir(args.run)
    report_path = run_dir / ("report.json" if args.json else "report.txt")
    if report_path.is_file():
        print(report_path.read_text(encoding="utf-8"))
        return 0
    if args.run not in store.list_runs():
        print(f"no run named {args.run!r}", file=sys.stderr)
        return 1
    # run exists but never finished; report the replayed state so far
    from .snowball import replay_state

    state = replay_state(store, args.run)
    print(json.dumps({
        "run_id": args.run,
        "iteration": state.iteration,
        "query_count": state.query_count,
        "visited": sorted(state.visited),
        "confirmed": sorted(state.confirmed_domains()),
        "pending": state.pending_domains(),
        "stop_reason": state.stop_reason,
    }, indent=2, sort_keys=True))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="clonewatch",
        description="Detect networks of hijacked (clone) journals by their archives.",
    )
    parser.add_argument("--data-root",
                        help=f"artifact root (default: ${ENV_DATA_ROOT} or ./data)")
    sub = parser.add_subparsers(dest="command", required=True)

    p_harvest = sub.add_parser("harvest", help="harvest one journal site's archive")
    p_harvest.add_argument("url")
    p_harvest.add_argument("--profile", default=None,
                           help="extraction profile file (default: shipped network profile)")
    p_harvest.add_argument("--fixture", default=None,
                           help="serve pages from a corpus bundle directory instead of HTTP")
    p_harvest.add_argument("--fetch-delay", type=float, default=1.0)
    p_harvest.set_defaults(func=cmd_harvest)

    p_snow = sub.add_parser("snowball", help="run the snowball loop")
    p_snow.add_argument("--seeds", required=True, help="file with one seed URL per line")
    p_snow.add_argument("--provider", required=True,
                        help="'live' or 'fixture:<bundle dir>'")
    p_snow.add_argument("--threshold", type=int, default=5)
    p_snow.add_argument("--depth", type=int, default=10)
    p_snow.add_argument("--query-type", default=QueryType.TITLE_AUTHORS_AFFILIATION.value,
                        choices=[t.value for t in QueryType])
    p_snow.add_argument("--run-id", default=None)
    p_snow.add_argument("--config", default=None, help="key=value config file")
    p_snow.add_argument("--registry", default="fixtures/appendix2.csv",
                        help="legitimate-journal registry CSV (live runs)")
    p_snow.add_argument("--daily-cap", type=int, default=None)
    p_snow.add_argument("--fetch-delay", type=float, default=1.0)
    mode = p_snow.add_mutually_exclusive_group(required=True)
    mode.add_argument("--auto", action="store_true",
                      help="headless: auto-verdict rule, run to fixpoint")
    mode.add_argument("--serve", action="store_true",
                      help="interactive: start the triage API and wait for verdicts")
    p_snow.add_argument("--host", default="127.0.0.1")
    p_snow.add_argument("--port", type=int, default=8600)
    p_snow.add_argument("--ui-dir", default="ui/dist")
    p_snow.set_defaults(func=cmd_snowball)

    p_graph = sub.add_parser("graph", help="graph operations")
    graph_sub = p_graph.add_subparsers(dest="graph_command", required=True)
    p_export = graph_sub.add_parser("export", help="export the shared-content graph")
    p_export.add_argument("--run", required=True)
    p_export.add_argument("--format", default="json", choices=["dot", "graphml", "json"])
    p_export.add_argument("--out", default=None)
    p_export.set_defaults(func=cmd_graph)

    p_corpus = sub.add_parser("corpus", help="synthetic corpus operations")
    corpus_sub = p_corpus.add_subparsers(dest="corpus_command", required=True)
    p_generate = corpus_sub.add_parser("generate", help="render a synthetic network")
    p_generate.add_argument("--spec", required=True, help="corpus spec JSON file")
    p_generate.add_argument("--out", required=True)
    p_generate.set_defaults(func=cmd_corpus)

    p_report = sub.add_parser("report", help="print a run's report")
    p_report.add_argument("--run", required=True)
    p_report.add_argument("--json", action="store_true")
    p_report.set_defaults(func=cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except SystemExit as exc:
        if exc.code not in (0, None):
            print(str(exc), file=sys.stderr)
            return exc.code if isinstance(exc.code, int) else 1
        return 0
    except KeyboardInterrupt:
        return 130
    except Exception as exc:  # runtime failure -> exit 1, message on stderr
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
