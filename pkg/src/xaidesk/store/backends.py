"""Storage backends: local filesystem and an S3-compatible HTTP object store.

Both expose the same minimal contract (put/get/list within a logical bucket)
and are behaviorally indistinguishable under the shared contract test suite.
The S3 client speaks the PutObject, GetObject and ListObjectsV2 subset with
SigV4 request signing, path-style addressing.
"""

from __future__ import annotations

import hashlib
import hmac
import os
import tempfile
import urllib.parse
import xml.etree.ElementTree as ET
from datetime import datetime, timezone
from pathlib import Path
from typing import Protocol, runtime_checkable

import httpx

from ..errors import BackendUnavailableError, NotFoundError
from .records import BUCKETS


@runtime_checkable
class StorageBackend(Protocol):
    """Read-after-write consistent key-value store with prefix listing."""

    def put(self, bucket: str, key: str, data: bytes) -> None: ...

    def get(self, bucket: str, key: str) -> bytes: ...

    def list_keys(self, bucket: str, prefix: str = "") -> list[str]: ...


class FilesystemBackend:
    """One directory per logical bucket; atomic writes via rename."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        for bucket in BUCKETS:
            (self.root / bucket).mkdir(parents=True, exist_ok=True)

    def _path(self, bucket: str, key: str) -> Path:
        path = (self.root / bucket / key).resolve()
        if not str(path).startswith(str((self.root / bucket).resolve())):
            raise ValueError(f"key {key!r} escapes the bucket directory")
        return path

    def put(self, bucket: str, key: str, data: bytes) -> None:
        path = self._path(bucket, key)
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-")
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(data)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def get(self, bucket: str, key: str) -> bytes:
        try:
            return self._path(bucket, key).read_bytes()
        except FileNotFoundError:
            raise NotFoundError(f"{bucket}/{key}") from None

    def list_keys(self, bucket: str, prefix: str = "") -> list[str]:
        base = self.root / bucket
        keys = []
        for path in base.rglob("*"):
            if path.is_file() and not path.name.startswith(".tmp-"):
                key = path.relative_to(base).as_posix()
                if key.startswith(prefix):
                    keys.append(key)
        return sorted(keys)


def _sigv4_headers(
    method: str,
    url: str,
    payload: bytes,
    access_key: str,
    secret_key: str,
    region: str,
    now: datetime | None = None,
) -> dict[str, str]:
    """Minimal AWS Signature Version 4 for the s3 service."""
    parsed = urllib.parse.urlsplit(url)
    now = now or datetime.now(timezone.utc)
    amz_date = now.strftime("%Y%m%dT%H%M%SZ")
    date_stamp = now.strftime("%Y%m%d")
    payload_hash = hashlib.sha256(payload).hexdigest()

    canonical_uri = urllib.parse.quote(parsed.path or "/", safe="/-_.~")
    query_pairs = urllib.parse.parse_qsl(parsed.query, keep_blank_values=True)
    canonical_query = "&".join(
        f"{urllib.parse.quote(k, safe='-_.~')}={urllib.parse.quote(v, safe='-_.~')}"
        for k, v in sorted(query_pairs)
    )
    headers = {
        "host": parsed.netloc,
        "x-amz-content-sha256": payload_hash,
        "x-amz-date": amz_date,
    }
    signed_headers = ";".join(sorted(headers))
    canonical_headers = "".join(f"{k}:{headers[k]}\n" for k in sorted(headers))
    canonical_request = "\n".join(
        [method, canonical_uri, canonical_query, canonical_headers, signed_headers, payload_hash]
    )

    scope = f"{date_stamp}/{region}/s3/aws4_request"
    string_to_sign = "\n".join(
        [
            "AWS4-HMAC-SHA256",
            amz_date,
            scope,
            hashlib.sha256(canonical_request.encode()).hexdigest(),
        ]
    )

    def _hmac(key: bytes, msg: str) -> bytes:
        return hmac.new(key, msg.encode(), hashlib.sha256).digest()

    signing_key = _hmac(
        _hmac(_hmac(_hmac(b"AWS4" + secret_key.encode(), date_stamp), region), "s3"),
        "aws4_request",
    )
    signature = hmac.new(signing_key, string_to_sign.encode(), hashlib.sha256).hexdigest()
    return {
        "x-amz-content-sha256": payload_hash,
        "x-amz-date": amz_date,
        "Authorization": (
            f"AWS4-HMAC-SHA256 Credential={access_key}/{scope}, "
            f"SignedHeaders={signed_headers}, Signature={signature}"
        ),
    }


class S3Backend:
    """S3-compatible object store client, path-style addressing.

    Logical buckets map to object-store buckets named ``{prefix}{bucket}``.
    Only PutObject, GetObject and ListObjectsV2 (with prefix and
    continuation tokens) are used.
    """

    def __init__(
        self,
        endpoint: str,
        access_key: str = "",
        secret_key: str = "",
        bucket_prefix: str = "xai-",
        region: str = "us-east-1",
        timeout: float = 30.0,
    ):
        self.endpoint = endpoint.rstrip("/")
        self.access_key = access_key
        self.secret_key = secret_key
        self.bucket_prefix = bucket_prefix
        self.region = region
        self._client = httpx.Client(timeout=timeout)

    def _bucket_name(self, bucket: str) -> str:
        return f"{self.bucket_prefix}{bucket}"

    def _request(self, method: str, url: str, payload: bytes = b"") -> httpx.Response:
        headers = _sigv4_headers(
            method, url, payload, self.access_key, self.secret_key, self.region
        )
        try:
            return self._client.request(method, url, content=payload or None, headers=headers)
        except httpx.HTTPError as exc:
            raise BackendUnavailableError(f"object store unreachable: {exc}") from exc

    def put(self, bucket: str, key: str, data: bytes) -> None:
        url = f"{self.endpoint}/{self._bucket_name(bucket)}/{urllib.parse.quote(key)}"
        response = self._request("PUT", url, data)
        if response.status_code // 100 != 2:
            raise BackendUnavailableError(f"PutObject failed: {response.status_code}")

    def get(self, bucket: str, key: str) -> bytes:
        url = f"{self.endpoint}/{self._bucket_name(bucket)}/{urllib.parse.quote(key)}"
        response = self._request("GET", url)
        if response.status_code == 404:
            raise NotFoundError(f"{bucket}/{key}")
        if response.status_code // 100 != 2:
            raise BackendUnavailableError(f"GetObject failed: {response.status_code}")
        return response.content

    def list_keys(self, bucket: str, prefix: str = "") -> list[str]:
        keys: list[str] = []
        token: str | None = None
        while True:
            params = {"list-type": "2", "prefix": prefix}
            if token:
                params["continuation-token"] = token
            query = urllib.parse.urlencode(sorted(params.items()))
            url = f"{self.endpoint}/{self._bucket_name(bucket)}?{query}"
            response = self._request("GET", url)
            if response.status_code == 404:
                return []  # bucket not created yet: nothing stored
            if response.status_code // 100 != 2:
                raise BackendUnavailableError(f"ListObjectsV2 failed: {response.status_code}")
            root = ET.fromstring(response.content)
            keys.extend(el.text or "" for el in root.iterfind(".//{*}Contents/{*}Key"))
            if (root.findtext(".//{*}IsTruncated") or "false").lower() != "true":
                break
            token = root.findtext(".//{*}NextContinuationToken")
            if not token:
                break
        return sorted(keys)
