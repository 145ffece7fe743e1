import pytest

from clonewatch.clock import FixedStepClock
from clonewatch.corpus import (
    CorpusSpec,
    FixtureSearchProvider,
    build_fixture_index,
    generate_corpus,
    write_bundle,
)
from clonewatch.harvest import DirectoryFetcher
from clonewatch.heuristics import StaticRegistrationProvider, load_registry
from clonewatch.snowball import Engine, RunConfig
from clonewatch.store import Store

SMALL_SPEC = CorpusSpec(
    n_clones=4, n_legit=2, n_predatory=1, pool_size=60,
    archive_size_range=(10, 16), pairwise_overlap_min=3, seed=7,
)


@pytest.fixture(scope="session")
def small_bundle_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("corpus") / "small"
    bundle = generate_corpus(SMALL_SPEC)
    write_bundle(bundle, out)
    return out


@pytest.fixture(scope="session")
def small_bundle():
    return generate_corpus(SMALL_SPEC)


@pytest.fixture()
def small_index(small_bundle):
    return build_fixture_index(small_bundle)


def make_engine(bundle, bundle_dir, data_root, run_id="run-t", seeds=None,
                config=None, policy=None):
    clones = sorted(d for d, k in bundle.ground_truth.items() if k == "clone")
    seeds = seeds if seeds is not None else [f"http://{clones[0]}/"]
    config = config or RunConfig(run_date=bundle.spec.epoch)
    store = Store(data_root)
    return Engine(
        run_id=run_id,
        seeds=seeds,
        config=config,
        store=store,
        provider=FixtureSearchProvider.from_dir(bundle_dir),
        fetcher=DirectoryFetcher(bundle_dir),
        registration_provider=StaticRegistrationProvider(bundle.registrations),
        registry=load_registry(bundle_dir / "registry.csv"),
        clock=FixedStepClock(start=bundle.spec.epoch + "T00:00:00.000000Z"),
        policy=policy,
    )


@pytest.fixture()
def engine_factory(small_bundle, small_bundle_dir, tmp_path):
    def factory(**kwargs):
        return make_engine(small_bundle, small_bundle_dir, tmp_path / "data", **kwargs)

    return factory
