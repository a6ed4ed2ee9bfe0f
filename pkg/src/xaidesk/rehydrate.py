"""Rebuild a user's in-memory vector collection from persisted metadata.

The index lives in RAM and is lost on restart; the first query after a
restart finds an empty collection and triggers a full metadata scan for that
user. Rebuilding is all-or-nothing: on any fetch error the collection is
cleared so a partial index can never answer queries.
"""

from __future__ import annotations

import logging
import threading

from .store import ArtifactStore
from .vindex import VectorIndex

logger = logging.getLogger(__name__)


class Rehydrator:
    def __init__(self, store: ArtifactStore, index: VectorIndex):
        self.store = store
        self.index = index
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()

    def _lock(self, user_id: str) -> threading.Lock:
        with self._registry_lock:
            if user_id not in self._locks:
                self._locks[user_id] = threading.Lock()
            return self._locks[user_id]

    def rehydrate_if_empty(self, user_id: str) -> int:
        """Scan stored metadata and rebuild the collection if it is empty.

        Returns the number of entries inserted; 0 when the collection was
        already warm. Concurrent callers for one user coalesce into a single
        scan.
        """
        if self.index.collection_size(user_id) > 0:
            return 0
        with self._lock(user_id):
            if self.index.collection_size(user_id) > 0:
                return 0
            try:
                records = self.store.list_metadata(user_id)
                for record in records:
                    entry = self.index.make_entry(
                        artifact_id=record.artifact_id,
                        summary_text=record.summary_for_rag.text,
                        plot_type=record.plot_type,
                        keywords=record.summary_for_rag.keywords,
                    )
                    self.index.upsert(user_id, entry)
            except Exception:
                self.index.clear(user_id)
                raise
            if records:
                logger.info("rehydrated %d artifacts for user %s", len(records), user_id)
            return len(records)
