"""Error types shared across the platform.

Every error carries a stable machine-readable ``code`` plus a ``details``
payload so HTTP responses and CLI messages stay parseable.
"""

from __future__ import annotations

from typing import Any


class TaxlabError(Exception):
    """Base class for domain errors."""

    code = "error"

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self) -> dict[str, Any]:
        return {"code": self.code, "message": self.message, "details": self.details}


class ValidationError(TaxlabError):
    code = "validation"


class NameConflictError(TaxlabError):
    code = "name_conflict"


class NotFoundError(TaxlabError):
    code = "not_found"


class HierarchyCycleError(TaxlabError):
    code = "hierarchy_cycle"


class MergeRejectedError(TaxlabError):
    code = "merge_rejected"


class VersionConflictError(TaxlabError):
    code = "version_conflict"


class CredentialError(TaxlabError):
    code = "invalid_credentials"


class AuthRequiredError(TaxlabError):
    code = "auth_required"


class UndefinedBaselineError(TaxlabError):
    code = "undefined_baseline"


class ConfigError(TaxlabError):
    code = "config"


class StorageError(TaxlabError):
    code = "storage"
