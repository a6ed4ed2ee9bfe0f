"""Artifact persistence over a storage backend.

Key layout: ``metadata/{user_id}/{artifact_id}.json`` for records and
``{bucket}/{user_id}/{artifact_id}/{name}`` for payloads. Payloads are
written before the metadata record, so a listed record never has dangling
payload references.
"""

from __future__ import annotations

from ..errors import SchemaViolationError
from .backends import StorageBackend
from .records import ArtifactRecord, StorageRef, check_safe_id

METADATA_BUCKET = "metadata"


class ArtifactStore:
    def __init__(self, backend: StorageBackend):
        self.backend = backend

    def _metadata_key(self, user_id: str, artifact_id: str) -> str:
        return f"{user_id}/{artifact_id}.json"

    def put_artifact(
        self,
        user_id: str,
        record: ArtifactRecord,
        payloads: list[tuple[StorageRef, bytes]] | None = None,
    ) -> str:
        payloads = payloads or []
        record.validate()
        if record.user_id != user_id:
            raise SchemaViolationError(
                f"record user {record.user_id!r} does not match caller {user_id!r}"
            )
        given = {ref for ref, _ in payloads}
        declared = set(record.payload_refs)
        if given != declared:
            raise SchemaViolationError("payloads do not match record.payload_refs")

        # payloads first, metadata last: a listed record always has its payloads
        for ref, data in payloads:
            self.backend.put(ref.bucket, ref.key, data)
        self.backend.put(
            METADATA_BUCKET,
            self._metadata_key(user_id, record.artifact_id),
            record.to_json(),
        )
        return record.artifact_id

    def get_artifact(self, user_id: str, artifact_id: str) -> ArtifactRecord:
        raw = self.backend.get(METADATA_BUCKET, self._metadata_key(user_id, artifact_id))
        return ArtifactRecord.from_json(raw)

    def list_metadata(self, user_id: str) -> list[ArtifactRecord]:
        """All records owned by ``user_id``, sorted by artifact id."""
        check_safe_id(user_id, "user_id")
        prefix = f"{user_id}/"
        keys = [
            k
            for k in self.backend.list_keys(METADATA_BUCKET, prefix=prefix)
            # records live at {user}/{id}.json; deeper keys are payload blobs
            if k.endswith(".json") and k.count("/") == 1
        ]
        records = [ArtifactRecord.from_json(self.backend.get(METADATA_BUCKET, k)) for k in keys]
        return sorted(records, key=lambda r: r.artifact_id)

    def put_blob(self, ref: StorageRef, data: bytes) -> None:
        self.backend.put(ref.bucket, ref.key, data)

    def get_blob(self, ref: StorageRef) -> bytes:
        return self.backend.get(ref.bucket, ref.key)
