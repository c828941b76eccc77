import pytest

from taxlab import AuthService, DocumentStore
from taxlab.errors import (
    AuthRequiredError,
    CredentialError,
    NameConflictError,
    ValidationError,
)


class FakeClock:
    def __init__(self, start=1_000_000.0):
        self.now = start

    def __call__(self):
        return self.now

    def advance(self, seconds):
        self.now += seconds


def make_auth(store=None, ttl_hours=24.0, clock=None):
    return AuthService(store or DocumentStore(None), token_ttl_hours=ttl_hours, clock=clock or FakeClock())


class TestRegister:
    def test_register_and_login(self):
        auth = make_auth()
        user = auth.register("Alice", "correct horse battery")
        assert user["username"] == "Alice"
        session = auth.login("Alice", "correct horse battery")
        assert session["username"] == "Alice"
        assert auth.authenticate(session["token"]) == "Alice"

    def test_username_taken_case_insensitive(self):
        auth = make_auth()
        auth.register("Alice", "password-one")
        with pytest.raises(NameConflictError):
            auth.register("ALICE", "password-two")

    def test_short_password_rejected(self):
        auth = make_auth()
        with pytest.raises(ValidationError):
            auth.register("bob", "short")

    def test_blank_username_rejected(self):
        auth = make_auth()
        with pytest.raises(ValidationError):
            auth.register("  ", "long enough password")

    def test_password_not_stored_in_plaintext(self):
        store = DocumentStore(None)
        auth = make_auth(store)
        auth.register("alice", "super secret phrase")
        doc = store.get("user", "alice")
        assert doc is not None
        flat = repr(doc)
        assert "super secret phrase" not in flat
        assert "scrypt" in flat  # records the KDF used

    def test_users_persist_across_service_restarts(self, tmp_path):
        store = DocumentStore(tmp_path)
        make_auth(store).register("alice", "super secret phrase")
        again = make_auth(DocumentStore(tmp_path))
        assert again.login("alice", "super secret phrase")["token"]


class TestLogin:
    def test_wrong_password_uniform_error(self):
        auth = make_auth()
        auth.register("alice", "super secret phrase")
        with pytest.raises(CredentialError) as wrong_pw:
            auth.login("alice", "wrong password!")
        with pytest.raises(CredentialError) as no_user:
            auth.login("nobody", "wrong password!")
        # identical message for unknown user and bad password
        assert str(wrong_pw.value) == str(no_user.value)

    def test_login_case_insensitive_username_canonical_casing_returned(self):
        auth = make_auth()
        auth.register("Alice", "super secret phrase")
        session = auth.login("alice", "super secret phrase")
        assert session["username"] == "Alice"

    def test_tokens_are_unique_per_login(self):
        auth = make_auth()
        auth.register("alice", "super secret phrase")
        t1 = auth.login("alice", "super secret phrase")["token"]
        t2 = auth.login("alice", "super secret phrase")["token"]
        assert t1 != t2
        # both tokens remain valid simultaneously
        assert auth.authenticate(t1) == "alice"
        assert auth.authenticate(t2) == "alice"


class TestTokens:
    def test_expiry_via_clock(self):
        clock = FakeClock()
        auth = make_auth(ttl_hours=1.0, clock=clock)
        auth.register("alice", "super secret phrase")
        session = auth.login("alice", "super secret phrase")
        assert session["expires_at"] == pytest.approx(clock.now + 3600.0)
        clock.advance(3599.0)
        assert auth.authenticate(session["token"]) == "alice"
        clock.advance(2.0)
        with pytest.raises(AuthRequiredError):
            auth.authenticate(session["token"])

    def test_logout_revokes(self):
        auth = make_auth()
        auth.register("alice", "super secret phrase")
        token = auth.login("alice", "super secret phrase")["token"]
        auth.logout(token)
        with pytest.raises(AuthRequiredError):
            auth.authenticate(token)
        auth.logout(token)  # idempotent

    def test_garbage_token(self):
        auth = make_auth()
        with pytest.raises(AuthRequiredError):
            auth.authenticate("not-a-token")
        with pytest.raises(AuthRequiredError):
            auth.authenticate("")
