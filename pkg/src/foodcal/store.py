"""Player identity and profile persistence.

Anonymous players are identified by a 128-bit random token minted at first
run; the client keeps it for automatic login. Profiles live in a document
store with per-key optimistic concurrency: every write names the version it
read, and a mismatch rejects the write without mutating anything.

Two backends: an in-memory map for tests and a single-file-per-profile JSON
store that survives crashes (fsync on file and directory).
"""
from __future__ import annotations

import hmac
import json
import os
import secrets
import tempfile
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Union

from .errors import StorageUnavailableError, UnknownTokenError, VersionConflictError
from .scoring import PlayerProfile, empty_profile, profile_from_json, profile_to_json

DATA_DIR_ENV_VAR = "FOODCAL_DATA_DIR"

TOKEN_BYTES = 16  # 128-bit identity, 32 hex chars


def new_token() -> str:
    return secrets.token_hex(TOKEN_BYTES)


@dataclass(frozen=True)
class StoredDocument:
    key: str
    profile: PlayerProfile
    version: int


class MemoryStore:
    """Thread-safe in-memory profile store; contents die with the process."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._docs: dict[str, tuple[str, int]] = {}

    def create_anonymous_player(self) -> str:
        with self._lock:
            while True:
                token = new_token()
                if token not in self._docs:
                    break
            self._docs[token] = (profile_to_json(empty_profile(token)), 0)
            return token

    def _lookup(self, token: str) -> tuple[str, int]:
        # Scan with constant-time comparison so lookups do not leak prefix
        # matches through timing.
        for stored, doc in self._docs.items():
            if hmac.compare_digest(stored, token):
                return doc
        raise UnknownTokenError("unknown player token")

    def get_profile(self, token: str) -> StoredDocument:
        with self._lock:
            body, version = self._lookup(token)
        return StoredDocument(key=token, profile=profile_from_json(body), version=version)

    def put_profile(self, token: str, profile: PlayerProfile, expected_version: int) -> int:
        with self._lock:
            _, version = self._lookup(token)
            if version != expected_version:
                raise VersionConflictError(
                    f"expected version {expected_version}, stored version is {version}"
                )
            new_version = version + 1
            self._docs[token] = (profile_to_json(profile), new_version)
            return new_version


class FileStore:
    """One JSON document per player under DATA_DIR/profiles plus a token index.

    Writes go through a temp file, fsync, then atomic rename followed by a
    directory fsync, so an acknowledged write survives a crash. A token is
    only acknowledged once both its profile document and the index entry are
    durable.
    """

    def __init__(self, data_dir: Union[str, Path, None] = None) -> None:
        if data_dir is None:
            data_dir = os.environ.get(DATA_DIR_ENV_VAR, "./foodcal-data")
        self._root = Path(data_dir)
        self._profiles = self._root / "profiles"
        self._index_path = self._root / "tokens.json"
        self._lock = threading.Lock()
        try:
            self._profiles.mkdir(parents=True, exist_ok=True)
            if not self._index_path.exists():
                self._write_atomic(self._index_path, "[]")
        except OSError as exc:
            raise StorageUnavailableError(f"cannot initialize store at {self._root}: {exc}") from exc

    @staticmethod
    def _write_atomic(path: Path, text: str) -> None:
        fd, tmp_name = tempfile.mkstemp(dir=str(path.parent), prefix=path.name + ".")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as handle:
                handle.write(text)
                handle.flush()
                os.fsync(handle.fileno())
            os.replace(tmp_name, path)
            dir_fd = os.open(str(path.parent), os.O_RDONLY)
            try:
                os.fsync(dir_fd)
            finally:
                os.close(dir_fd)
        except OSError as exc:
            try:
                os.unlink(tmp_name)
            except OSError:
                pass
            raise StorageUnavailableError(f"write to {path} failed: {exc}") from exc

    def _read_index(self) -> list[str]:
        try:
            return json.loads(self._index_path.read_text(encoding="utf-8"))
        except OSError as exc:
            raise StorageUnavailableError(f"cannot read token index: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise StorageUnavailableError(f"token index is corrupt: {exc}") from exc

    def _token_known(self, token: str) -> bool:
        return any(hmac.compare_digest(stored, token) for stored in self._read_index())

    def _doc_path(self, token: str) -> Path:
        return self._profiles / f"{token}.json"

    def create_anonymous_player(self) -> str:
        with self._lock:
            index = self._read_index()
            while True:
                token = new_token()
                if token not in index:
                    break
            document = {"version": 0, "profile": profile_to_json(empty_profile(token))}
            # Profile first, index second: a crash in between leaves an
            # orphan file but never an acknowledged token without a profile.
            self._write_atomic(self._doc_path(token), json.dumps(document))
            self._write_atomic(self._index_path, json.dumps(index + [token]))
            return token

    def get_profile(self, token: str) -> StoredDocument:
        with self._lock:
            if not self._token_known(token):
                raise UnknownTokenError("unknown player token")
            raw = self._read_document(token)
        return StoredDocument(
            key=token,
            profile=profile_from_json(raw["profile"]),
            version=raw["version"],
        )

    def _read_document(self, token: str) -> dict:
        try:
            return json.loads(self._doc_path(token).read_text(encoding="utf-8"))
        except OSError as exc:
            raise StorageUnavailableError(f"cannot read profile document: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise StorageUnavailableError(f"profile document is corrupt: {exc}") from exc

    def put_profile(self, token: str, profile: PlayerProfile, expected_version: int) -> int:
        with self._lock:
            if not self._token_known(token):
                raise UnknownTokenError("unknown player token")
            raw = self._read_document(token)
            if raw["version"] != expected_version:
                raise VersionConflictError(
                    f"expected version {expected_version}, stored version is {raw['version']}"
                )
            new_version = expected_version + 1
            document = {"version": new_version, "profile": profile_to_json(profile)}
            self._write_atomic(self._doc_path(token), json.dumps(document))
            return new_version
