from __future__ import annotations

import itertools

import pytest

from xaidesk.gateway import LexiconClassifier
from xaidesk.service import AppConfig, build_state
from xaidesk.store import ArtifactStore, FilesystemBackend, S3Backend

from s3double import start_double

_PREFIX_COUNTER = itertools.count()


@pytest.fixture(scope="session")
def s3_server():
    server = start_double(page_size=3)
    yield server
    server.shutdown()


@pytest.fixture(params=["filesystem", "s3"])
def backend_factory(request, tmp_path, s3_server):
    """Callable building a backend over the same persisted data each call.

    Calling it twice simulates a process restart against surviving storage.
    """
    if request.param == "filesystem":
        root = tmp_path / "store"
        return lambda: FilesystemBackend(root)
    prefix = f"t{next(_PREFIX_COUNTER)}-"
    return lambda: S3Backend(
        s3_server.endpoint, access_key="ak", secret_key="sk", bucket_prefix=prefix
    )


@pytest.fixture
def fs_store(tmp_path):
    return ArtifactStore(FilesystemBackend(tmp_path / "store"))


@pytest.fixture
def app_state(tmp_path):
    return build_state(AppConfig(data_dir=str(tmp_path / "data")))


@pytest.fixture
def tiny_lexicon():
    """Hand-sized lexicon for tests whose expectations are derived by hand."""
    return LexiconClassifier(
        weights={
            "strong": {"positive": 1.0},
            "growth": {"positive": 1.5},
            "weak": {"negative": 1.2},
            "plunge": {"negative": 1.6},
            "steady": {"neutral": 0.8},
        },
        label_set=("negative", "neutral", "positive"),
        temperature=1.0,
        identifier="lexicon:tiny",
    )
