"""HTTP API over the platform.

All routes live under /api/v1.  POST /auth/register and POST /auth/login
are the only unauthenticated writes; every other mutation requires a
bearer token.  Read-only views (matrix, surface, circles, coverage,
hierarchy, layout, document, detail) are served without credentials when
the taxonomy is public.  Mutating routes honor an If-Match header
carrying the taxonomy version as an optimistic precondition; GETs return
the version in an ETag header.
"""

from __future__ import annotations

import csv
import io
from typing import Any

from fastapi import APIRouter, Depends, FastAPI, Request, Response
from fastapi.encoders import jsonable_encoder
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel, ConfigDict

from .analysis import Filter
from .auth import AuthService
from .biblio import Paper
from .errors import AuthRequiredError, TaxlabError, ValidationError
from .importer import MatchConfig
from .model import Taxonomy, new_id
from .platform import Platform

_STATUS_BY_CODE = {
    "validation": 400,
    "config": 400,
    "undefined_baseline": 400,
    "invalid_credentials": 401,
    "auth_required": 401,
    "not_found": 404,
    "name_conflict": 409,
    "hierarchy_cycle": 409,
    "merge_rejected": 409,
    "version_conflict": 409,
    "storage": 500,
}


# -- request bodies ----------------------------------------------------------


class RegisterBody(BaseModel):
    username: str
    password: str


class LoginBody(BaseModel):
    username: str
    password: str


class CreateTaxonomyBody(BaseModel):
    name: str


class ForkBody(BaseModel):
    name: str | None = None


class MergeBody(BaseModel):
    fork_id: str


class PublicBody(BaseModel):
    public: bool


class DimensionBody(BaseModel):
    name: str
    description: str = ""


class ConceptBody(BaseModel):
    dimension_id: str
    name: str
    kind: str = "node"
    notes: str = ""


class ConceptPatch(BaseModel):
    name: str | None = None
    kind: str | None = None
    notes: str | None = None


class ConceptMergeBody(BaseModel):
    absorb: str


class RelationBody(BaseModel):
    source_id: str
    target_id: str
    rel_type: str = "unspecified"
    annotation: str = ""


class RelationPatch(BaseModel):
    rel_type: str | None = None
    annotation: str | None = None


class SynonymBody(BaseModel):
    concept_id: str
    term: str


class LayoutBody(BaseModel):
    positions: dict[str, tuple[float, float]]


class PaperBody(BaseModel):
    model_config = ConfigDict(extra="allow")
    title: str
    id: str | None = None


class MappingBody(BaseModel):
    paper_id: str
    concept_id: str


class SuggestBody(BaseModel):
    method: str = "levenshtein"
    threshold: float | None = None
    min_occurrences: int = 3
    use_synonyms: bool = True
    paper_ids: list[str] | None = None
    dry_run: bool = False


class ImportTagsBody(BaseModel):
    dimension_id: str
    min_tag_count: int = 1


class ImportDocumentBody(BaseModel):
    document: dict[str, Any]
    replace: bool = False


class RecordsBody(BaseModel):
    records: list[dict[str, Any]]


class BibtexBody(BaseModel):
    text: str


class VoteBody(BaseModel):
    value: str
    note: str = ""


class TagBody(BaseModel):
    keyword: str
    note: str = ""


# -- serialization helpers ----------------------------------------------------


def _tax_summary(t: Taxonomy) -> dict[str, Any]:
    return {
        "id": t.id,
        "name": t.name,
        "version": t.version,
        "public": t.public,
        "parent_id": t.parent_id,
        "dimension_count": len(t.dimensions),
        "concept_count": len(t.concepts),
        "relation_count": len(t.relations),
        "paper_count": len(t.papers),
        "mapping_count": len(t.mappings),
    }


def _tax_detail(t: Taxonomy) -> dict[str, Any]:
    detail = _tax_summary(t)
    detail.update(
        {
            "dimensions": [d.to_dict() for d in t.dimensions.values()],
            "concepts": [c.to_dict() for c in t.concepts.values()],
            "relations": [r.to_dict() for r in t.relations.values()],
            "synonyms": [s.to_dict() for s in t.synonyms],
            "mappings": [m.to_dict() for m in t.mappings.values()],
            "positions": {cid: [x, y] for cid, (x, y) in t.positions.items()},
        }
    )
    return detail


def _expected_version(request: Request) -> int | None:
    raw = request.headers.get("if-match")
    if raw is None:
        return None
    value = raw.strip()
    if value.startswith("W/"):
        value = value[2:]
    value = value.strip('"')
    try:
        return int(value)
    except ValueError:
        raise ValidationError(
            "If-Match must carry a taxonomy version number", if_match=raw
        ) from None


def _matrix_csv(payload: dict[str, Any]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow([""] + payload["names"])
    for name, row in zip(payload["names"], payload["cells"]):
        writer.writerow([name] + list(row))
    return out.getvalue()


def _coverage_csv(payload: dict[str, Any]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["concept_id", "name", "depth", "paper_count"])
    for entry in payload["entries"]:
        writer.writerow([entry["concept_id"], entry["name"], entry["depth"], entry["paper_count"]])
    return out.getvalue()


def create_app(platform: Platform, auth: AuthService) -> FastAPI:
    app = FastAPI(title="taxlab", docs_url=None, redoc_url=None, openapi_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
        expose_headers=["ETag"],
    )

    # -- auth plumbing ------------------------------------------------------

    def _token_of(request: Request) -> str | None:
        header = request.headers.get("authorization")
        if header is None:
            return None
        scheme, _, token = header.partition(" ")
        if scheme.lower() != "bearer" or not token.strip():
            raise AuthRequiredError("authorization header must be 'Bearer <token>'")
        return token.strip()

    def require_user(request: Request) -> str:
        return auth.authenticate(_token_of(request))

    def optional_user(request: Request) -> str | None:
        token = _token_of(request)
        return auth.authenticate(token) if token else None

    def readable_taxonomy(taxonomy_id: str, user: str | None) -> Taxonomy:
        tax = platform.get_taxonomy(taxonomy_id)
        if not tax.public and user is None:
            raise AuthRequiredError("authentication required")
        return tax

    # -- error envelope -----------------------------------------------------

    @app.exception_handler(TaxlabError)
    async def _taxlab_error(request: Request, exc: TaxlabError) -> JSONResponse:
        status = _STATUS_BY_CODE.get(exc.code, 400)
        return JSONResponse(status_code=status, content=exc.to_dict())

    @app.exception_handler(RequestValidationError)
    async def _body_error(request: Request, exc: RequestValidationError) -> JSONResponse:
        return JSONResponse(
            status_code=400,
            content={
                "code": "validation",
                "message": "invalid request",
                "details": {"errors": jsonable_encoder(exc.errors())},
            },
        )

    public = APIRouter(prefix="/api/v1")
    guarded = APIRouter(prefix="/api/v1", dependencies=[Depends(require_user)])

    # -- health and auth ------------------------------------------------------

    @public.get("/health")
    def health() -> dict[str, Any]:
        return {"ok": True}

    @public.post("/auth/register", status_code=201)
    def register(body: RegisterBody) -> dict[str, Any]:
        return auth.register(body.username, body.password)

    @public.post("/auth/login")
    def login(body: LoginBody) -> dict[str, Any]:
        return auth.login(body.username, body.password)

    @guarded.post("/auth/logout")
    def logout(request: Request) -> dict[str, Any]:
        return {"ok": auth.logout(_token_of(request))}

    # -- taxonomy lifecycle ---------------------------------------------------

    @guarded.get("/taxonomies")
    def list_taxonomies() -> dict[str, Any]:
        return {"taxonomies": [_tax_summary(t) for t in platform.list_taxonomies()]}

    @guarded.post("/taxonomies", status_code=201)
    def create_taxonomy(body: CreateTaxonomyBody) -> dict[str, Any]:
        return _tax_summary(platform.create_taxonomy(body.name))

    @public.get("/taxonomies/{tid}")
    def get_taxonomy(
        tid: str, response: Response, user: str | None = Depends(optional_user)
    ) -> dict[str, Any]:
        tax = readable_taxonomy(tid, user)
        response.headers["ETag"] = f'"{tax.version}"'
        return _tax_detail(tax)

    @guarded.delete("/taxonomies/{tid}")
    def delete_taxonomy(tid: str) -> dict[str, Any]:
        platform.delete_taxonomy(tid)
        return {"ok": True}

    @guarded.post("/taxonomies/{tid}/fork", status_code=201)
    def fork_taxonomy(tid: str, body: ForkBody) -> dict[str, Any]:
        return _tax_summary(platform.fork_taxonomy(tid, body.name))

    @guarded.post("/taxonomies/{tid}/merge")
    def merge_fork(tid: str, body: MergeBody, request: Request) -> dict[str, Any]:
        report = platform.merge_fork(tid, body.fork_id, _expected_version(request))
        return {"report": report.to_dict(), "version": platform.get_taxonomy(tid).version}

    @guarded.post("/taxonomies/{tid}/public")
    def set_public(tid: str, body: PublicBody, request: Request) -> dict[str, Any]:
        changed, version = platform.mutate(
            tid, lambda t: (t.set_public(body.public), t.version), _expected_version(request)
        )
        return {"public": body.public, "changed": changed, "version": version}

    @guarded.post("/taxonomies/import")
    def import_document(body: ImportDocumentBody) -> dict[str, Any]:
        return _tax_summary(platform.import_document(body.document, replace=body.replace))

    @public.get("/taxonomies/{tid}/document")
    def export_document(
        tid: str, response: Response, user: str | None = Depends(optional_user)
    ) -> dict[str, Any]:
        tax = readable_taxonomy(tid, user)
        response.headers["ETag"] = f'"{tax.version}"'
        return platform.export_document(tid)

    # -- structure mutations ----------------------------------------------------

    @guarded.post("/taxonomies/{tid}/dimensions", status_code=201)
    def add_dimension(tid: str, body: DimensionBody, request: Request) -> dict[str, Any]:
        dim, version = platform.mutate(
            tid,
            lambda t: (t.add_dimension(body.name, body.description).to_dict(), t.version),
            _expected_version(request),
        )
        return {"dimension": dim, "version": version}

    @guarded.post("/taxonomies/{tid}/concepts", status_code=201)
    def add_concept(tid: str, body: ConceptBody, request: Request) -> dict[str, Any]:
        concept, version = platform.mutate(
            tid,
            lambda t: (
                t.add_concept(body.dimension_id, body.name, body.kind, body.notes).to_dict(),
                t.version,
            ),
            _expected_version(request),
        )
        return {"concept": concept, "version": version}

    @guarded.patch("/taxonomies/{tid}/concepts/{cid}")
    def patch_concept(tid: str, cid: str, body: ConceptPatch, request: Request) -> dict[str, Any]:
        def apply(t: Taxonomy) -> tuple[dict[str, Any], int]:
            if body.name is not None:
                t.rename_concept(cid, body.name)
            concept = t.update_concept(cid, kind=body.kind, notes=body.notes)
            return concept.to_dict(), t.version

        concept, version = platform.mutate(tid, apply, _expected_version(request))
        return {"concept": concept, "version": version}

    @guarded.delete("/taxonomies/{tid}/concepts/{cid}")
    def remove_concept(tid: str, cid: str, request: Request) -> dict[str, Any]:
        version = platform.mutate(
            tid, lambda t: (t.remove_concept(cid), t.version)[1], _expected_version(request)
        )
        return {"ok": True, "version": version}

    @guarded.post("/taxonomies/{tid}/concepts/{cid}/merge")
    def merge_concepts(
        tid: str, cid: str, body: ConceptMergeBody, request: Request
    ) -> dict[str, Any]:
        survivor, version = platform.mutate(
            tid,
            lambda t: (t.merge_concepts(cid, body.absorb).to_dict(), t.version),
            _expected_version(request),
        )
        return {"concept": survivor, "version": version}

    @guarded.post("/taxonomies/{tid}/relations", status_code=201)
    def add_relation(tid: str, body: RelationBody, request: Request) -> dict[str, Any]:
        relation, version = platform.mutate(
            tid,
            lambda t: (
                t.add_relation(body.source_id, body.target_id, body.rel_type, body.annotation).to_dict(),
                t.version,
            ),
            _expected_version(request),
        )
        return {"relation": relation, "version": version}

    @guarded.patch("/taxonomies/{tid}/relations/{rid}")
    def patch_relation(tid: str, rid: str, body: RelationPatch, request: Request) -> dict[str, Any]:
        def apply(t: Taxonomy) -> tuple[dict[str, Any], int]:
            if body.rel_type is not None:
                t.set_relation_type(rid, body.rel_type)
            if body.annotation is not None:
                t.annotate_relation(rid, body.annotation)
            return t.require_relation(rid).to_dict(), t.version

        relation, version = platform.mutate(tid, apply, _expected_version(request))
        return {"relation": relation, "version": version}

    @guarded.delete("/taxonomies/{tid}/relations/{rid}")
    def remove_relation(tid: str, rid: str, request: Request) -> dict[str, Any]:
        version = platform.mutate(
            tid, lambda t: (t.remove_relation(rid), t.version)[1], _expected_version(request)
        )
        return {"ok": True, "version": version}

    @guarded.post("/taxonomies/{tid}/synonyms", status_code=201)
    def add_synonym(tid: str, body: SynonymBody, request: Request) -> dict[str, Any]:
        result, version = platform.mutate(
            tid,
            lambda t: (t.add_synonym(body.concept_id, body.term), t.version),
            _expected_version(request),
        )
        synonym, created = result
        return {"synonym": synonym.to_dict(), "created": created, "version": version}

    @guarded.delete("/taxonomies/{tid}/synonyms")
    def remove_synonym(tid: str, concept_id: str, term: str, request: Request) -> dict[str, Any]:
        removed, version = platform.mutate(
            tid,
            lambda t: (t.remove_synonym(concept_id, term), t.version),
            _expected_version(request),
        )
        return {"ok": True, "removed": removed, "version": version}

    @public.get("/taxonomies/{tid}/layout")
    def get_layout(
        tid: str, response: Response, user: str | None = Depends(optional_user)
    ) -> dict[str, Any]:
        tax = readable_taxonomy(tid, user)
        response.headers["ETag"] = f'"{tax.version}"'
        return {"positions": {cid: [x, y] for cid, (x, y) in tax.positions.items()}}

    @guarded.put("/taxonomies/{tid}/layout")
    def put_layout(tid: str, body: LayoutBody, request: Request) -> dict[str, Any]:
        version = platform.mutate(
            tid,
            lambda t: (t.save_layout(dict(body.positions)), t.version)[1],
            _expected_version(request),
        )
        return {"ok": True, "version": version}

    @public.get("/taxonomies/{tid}/hierarchy")
    def get_hierarchy(
        tid: str, response: Response, user: str | None = Depends(optional_user)
    ) -> dict[str, Any]:
        tax = readable_taxonomy(tid, user)
        response.headers["ETag"] = f'"{tax.version}"'
        return tax.derive_hierarchy().to_dict()

    # -- papers and mappings within a taxonomy -----------------------------------

    @guarded.post("/taxonomies/{tid}/papers", status_code=201)
    def register_paper(tid: str, body: PaperBody, request: Request) -> dict[str, Any]:
        record = body.model_dump()
        if not record.get("id"):
            record["id"] = new_id("paper")
        paper = Paper.from_dict(record)
        changed, version = platform.mutate(
            tid, lambda t: (t.register_paper(paper), t.version), _expected_version(request)
        )
        return {"paper": paper.to_dict(), "changed": changed, "version": version}

    @guarded.post("/taxonomies/{tid}/mappings", status_code=201)
    def map_paper(tid: str, body: MappingBody, request: Request) -> dict[str, Any]:
        result, version = platform.mutate(
            tid,
            lambda t: (t.map_paper(body.paper_id, body.concept_id), t.version),
            _expected_version(request),
        )
        mapping, changed = result
        return {"mapping": mapping.to_dict(), "changed": changed, "version": version}

    @guarded.delete("/taxonomies/{tid}/mappings")
    def unmap_paper(tid: str, paper_id: str, concept_id: str, request: Request) -> dict[str, Any]:
        removed, version = platform.mutate(
            tid,
            lambda t: (t.unmap_paper(paper_id, concept_id), t.version),
            _expected_version(request),
        )
        return {"ok": True, "removed": removed, "version": version}

    @guarded.post("/taxonomies/{tid}/suggestions")
    def suggest(tid: str, body: SuggestBody, request: Request) -> dict[str, Any]:
        config = MatchConfig(
            method=body.method,
            threshold=body.threshold,
            min_occurrences=body.min_occurrences,
            use_synonyms=body.use_synonyms,
        )
        if body.paper_ids is None:
            papers = platform.board.list_papers()
        else:
            papers = [platform.board.require_paper(pid) for pid in body.paper_ids]
        return platform.import_corpus(
            tid, papers, config, dry_run=body.dry_run, expected_version=_expected_version(request)
        )

    @guarded.post("/taxonomies/{tid}/import-tags")
    def import_tags(tid: str, body: ImportTagsBody, request: Request) -> dict[str, Any]:
        def apply(t: Taxonomy) -> tuple[list[dict[str, Any]], int]:
            created = platform.board.import_tags_as_concepts(t, body.dimension_id, body.min_tag_count)
            return (
                [
                    {"concept": concept.to_dict(), "mappings": [m.to_dict() for m in mappings]}
                    for concept, mappings in created
                ],
                t.version,
            )

        created, version = platform.mutate(tid, apply, _expected_version(request))
        return {"created": created, "version": version}

    # -- derived views ------------------------------------------------------------

    def _filter_params(
        dimensions: str | None = None,
        subtree_roots: str | None = None,
        year_min: int | None = None,
        year_max: int | None = None,
        min_votes: int | None = None,
        tag: str | None = None,
        min_cell: int = 0,
    ) -> Filter:
        if min_cell < 0:
            raise ValidationError("min_cell must be >= 0", min_cell=min_cell)
        split = lambda s: [p for p in (s or "").split(",") if p] or None
        return Filter.create(
            dimensions=split(dimensions),
            subtree_roots=split(subtree_roots),
            year_min=year_min,
            year_max=year_max,
            min_votes=min_votes,
            tag=tag,
            min_cell=min_cell,
        )

    @public.get("/taxonomies/{tid}/views/matrix")
    def view_matrix(
        tid: str,
        flt: Filter = Depends(_filter_params),
        stale: bool = False,
        format: str = "json",
        user: str | None = Depends(optional_user),
    ) -> Response:
        readable_taxonomy(tid, user)
        payload, status, version = platform.matrix_view(tid, flt, allow_stale=stale)
        headers = {"ETag": f'"{version}"', "X-View-Status": status}
        if format == "csv":
            return PlainTextResponse(_matrix_csv(payload), media_type="text/csv", headers=headers)
        return JSONResponse(payload, headers=headers)

    @public.get("/taxonomies/{tid}/views/surface")
    def view_surface(
        tid: str,
        z: str = "paper_count",
        flt: Filter = Depends(_filter_params),
        stale: bool = False,
        user: str | None = Depends(optional_user),
    ) -> Response:
        readable_taxonomy(tid, user)
        payload, status, version = platform.surface_view(tid, z, flt, allow_stale=stale)
        return JSONResponse(
            {"z_property": z, "points": payload},
            headers={"ETag": f'"{version}"', "X-View-Status": status},
        )

    @public.get("/taxonomies/{tid}/views/circles")
    def view_circles(
        tid: str, stale: bool = False, user: str | None = Depends(optional_user)
    ) -> Response:
        readable_taxonomy(tid, user)
        payload, status, version = platform.circles_view(tid, allow_stale=stale)
        return JSONResponse(payload, headers={"ETag": f'"{version}"', "X-View-Status": status})

    @public.get("/taxonomies/{tid}/views/coverage")
    def view_coverage(
        tid: str,
        stale: bool = False,
        format: str = "json",
        user: str | None = Depends(optional_user),
    ) -> Response:
        readable_taxonomy(tid, user)
        payload, status, version = platform.coverage_view(tid, allow_stale=stale)
        headers = {"ETag": f'"{version}"', "X-View-Status": status}
        if format == "csv":
            return PlainTextResponse(_coverage_csv(payload), media_type="text/csv", headers=headers)
        return JSONResponse(payload, headers=headers)

    # -- review board ---------------------------------------------------------------

    @guarded.get("/papers")
    def list_papers() -> dict[str, Any]:
        return {"papers": [p.to_dict() for p in platform.board.list_papers()]}

    @guarded.post("/papers", status_code=201)
    def import_papers(body: RecordsBody) -> dict[str, Any]:
        created, rejections = platform.board.import_records(body.records)
        return {
            "created": [p.to_dict() for p in created],
            "rejections": [r.to_dict() for r in rejections],
        }

    @guarded.post("/papers/bibtex", status_code=201)
    def import_bibtex(body: BibtexBody) -> dict[str, Any]:
        created, rejections = platform.board.import_bibtex(body.text)
        return {
            "created": [p.to_dict() for p in created],
            "rejections": [r.to_dict() for r in rejections],
        }

    @guarded.get("/papers/shortlist")
    def shortlist(min_votes: int = 1) -> dict[str, Any]:
        return {"papers": [p.to_dict() for p in platform.board.papers_by_min_votes(min_votes)]}

    @guarded.delete("/papers/{pid}")
    def remove_paper(pid: str) -> dict[str, Any]:
        platform.board.remove_paper(pid)
        return {"ok": True}

    @guarded.post("/papers/{pid}/votes")
    def cast_vote(pid: str, body: VoteBody, user: str = Depends(require_user)) -> dict[str, Any]:
        vote = platform.board.cast_vote(user, pid, body.value, body.note)
        return {"vote": vote.to_dict()}

    @guarded.post("/papers/{pid}/tags")
    def tag_paper(pid: str, body: TagBody) -> dict[str, Any]:
        tag, created = platform.board.tag_paper(pid, body.keyword, body.note)
        return {"tag": tag.to_dict(), "created": created}

    @guarded.delete("/papers/{pid}/tags/{keyword}")
    def untag_paper(pid: str, keyword: str) -> dict[str, Any]:
        return {"ok": True, "removed": platform.board.untag_paper(pid, keyword)}

    app.include_router(public)
    app.include_router(guarded)
    app.state.platform = platform
    app.state.auth = auth
    return app
