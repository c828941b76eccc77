"""User accounts and bearer-token sessions.

Passwords are stored as scrypt digests with per-user random salts.
Login hands out an opaque random token with a fixed time-to-live;
tokens live server-side, so logout revokes immediately.  The clock is
injectable so expiry is testable without sleeping.
"""

from __future__ import annotations

import hashlib
import hmac
import secrets
import threading
import time
from typing import Any, Callable

from .errors import AuthRequiredError, CredentialError, NameConflictError, ValidationError
from .store import DocumentStore

_SCRYPT_N = 2**14
_SCRYPT_R = 8
_SCRYPT_P = 1
_MIN_PASSWORD_LEN = 8

USER_KIND = "user"


def _digest(password: str, salt: bytes) -> bytes:
    return hashlib.scrypt(
        password.encode("utf-8"), salt=salt, n=_SCRYPT_N, r=_SCRYPT_R, p=_SCRYPT_P, dklen=32
    )


class AuthService:
    def __init__(
        self,
        store: DocumentStore,
        token_ttl_hours: float = 24.0,
        clock: Callable[[], float] = time.time,
    ):
        self.store = store
        self.token_ttl_seconds = token_ttl_hours * 3600.0
        self.clock = clock
        self._tokens: dict[str, tuple[str, float]] = {}  # token -> (username, expires_at)
        self._lock = threading.Lock()

    # -- accounts ----------------------------------------------------------

    def register(self, username: str, password: str) -> dict[str, Any]:
        username = (username or "").strip()
        if not username:
            raise ValidationError("username must be non-empty")
        if len(password or "") < _MIN_PASSWORD_LEN:
            raise ValidationError(
                f"password must be at least {_MIN_PASSWORD_LEN} characters"
            )
        key = username.casefold()
        if self.store.get(USER_KIND, key) is not None:
            raise NameConflictError("username is taken", username=username)
        salt = secrets.token_bytes(16)
        record = {
            "username": username,
            "kdf": "scrypt",  # recorded so stored hashes can be migrated later
            "password_salt": salt.hex(),
            "password_hash": _digest(password, salt).hex(),
            "created_at": self.clock(),
        }
        self.store.put(USER_KIND, key, record)
        return {"username": username}

    def _verify(self, username: str, password: str) -> dict[str, Any]:
        record = self.store.get(USER_KIND, (username or "").strip().casefold())
        if record is None:
            # Same error and comparable cost as a wrong password.
            _digest(password or "", b"\x00" * 16)
            raise CredentialError("invalid username or password")
        expected = bytes.fromhex(record["password_hash"])
        actual = _digest(password or "", bytes.fromhex(record["password_salt"]))
        if not hmac.compare_digest(expected, actual):
            raise CredentialError("invalid username or password")
        return record

    # -- sessions ----------------------------------------------------------

    def login(self, username: str, password: str) -> dict[str, Any]:
        record = self._verify(username, password)
        token = secrets.token_urlsafe(32)
        expires = self.clock() + self.token_ttl_seconds
        with self._lock:
            self._prune()
            self._tokens[token] = (record["username"], expires)
        return {"token": token, "username": record["username"], "expires_at": expires}

    def logout(self, token: str) -> bool:
        with self._lock:
            return self._tokens.pop(token, None) is not None

    def authenticate(self, token: str | None) -> str:
        """Username for a live token; raises otherwise."""
        if not token:
            raise AuthRequiredError("authentication required")
        with self._lock:
            entry = self._tokens.get(token)
            if entry is None:
                raise AuthRequiredError("invalid or expired token")
            username, expires = entry
            if self.clock() >= expires:
                del self._tokens[token]
                raise AuthRequiredError("invalid or expired token")
            return username

    def _prune(self) -> None:
        now = self.clock()
        for token in [t for t, (_, exp) in self._tokens.items() if now >= exp]:
            del self._tokens[token]
