from .artifact_store import METADATA_BUCKET, ArtifactStore
from .backends import FilesystemBackend, S3Backend, StorageBackend
from .records import (
    BUCKETS,
    ArtifactRecord,
    Provenance,
    RagSummary,
    StorageRef,
    new_artifact_id,
)

__all__ = [
    "ArtifactRecord",
    "ArtifactStore",
    "BUCKETS",
    "FilesystemBackend",
    "METADATA_BUCKET",
    "Provenance",
    "RagSummary",
    "S3Backend",
    "StorageBackend",
    "StorageRef",
    "new_artifact_id",
]
