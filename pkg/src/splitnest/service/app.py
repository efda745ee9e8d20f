"""FastAPI application exposing the pipeline operations.

Every endpoint accepts and produces the package's text formats embedded in
JSON (see models).  Library failure kinds map onto the HTTP surface:
validation problems become 400, resource caps become 507, and negative
decisions (not circular, not maximal, not equal) are ordinary 200 replies
with decision=false plus a witness.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__, oracle
from ..buneman import buneman_graph, embed_network, extract_network
from ..core import SplitSystem
from ..closure import i_closure, int_closure
from ..errors import NotCircularError, ResourceCapError, ValidationError
from ..formats import (
    describe_embedding,
    describe_marguerites,
    emit_buneman_text,
    emit_dot,
    emit_network,
    emit_split_system,
    parse_network,
    parse_split_system,
)
from ..incompat import components, is_maximal_generator
from ..network import (
    Network,
    equivalent,
    maximal_partial_resolution,
    partially_resolve,
    split_multiplicity,
    splits_of,
)
from ..synthesis import buneman_tree, is_circular, minimal_1nested
from .models import (
    BunemanRequest,
    CheckEqualRequest,
    CircularRequest,
    ErrorResponse,
    HealthResponse,
    MultiplicityRequest,
    NetworkRequest,
    ResolveRequest,
    ResultResponse,
    SplitsOfRequest,
    SynthesizeRequest,
    SystemRequest,
)


def _system_warnings(sigma: SplitSystem) -> list[str]:
    if not sigma.splits:
        return ["empty split system"]
    return []


def _net_output(net: Network, fmt: str) -> str:
    return emit_dot(net) if fmt == "dot" else emit_network(net)


def create_app() -> FastAPI:
    app = FastAPI(title="splitnest", version=__version__)

    @app.exception_handler(ValidationError)
    async def _validation(request: Request, exc: ValidationError):
        return JSONResponse(
            status_code=400,
            content=ErrorResponse(kind="validation", error=str(exc)).model_dump(),
        )

    @app.exception_handler(ResourceCapError)
    async def _resource(request: Request, exc: ResourceCapError):
        return JSONResponse(
            status_code=507,
            content=ErrorResponse(kind="resource", error=str(exc)).model_dump(),
        )

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok", version=__version__)

    @app.post("/v1/closure", response_model=ResultResponse)
    def closure_endpoint(req: SystemRequest) -> ResultResponse:
        sigma = parse_split_system(req.system)
        return ResultResponse(
            output=emit_split_system(int_closure(sigma)), warnings=_system_warnings(sigma)
        )

    @app.post("/v1/iclosure", response_model=ResultResponse)
    def iclosure_endpoint(req: SystemRequest) -> ResultResponse:
        sigma = parse_split_system(req.system)
        return ResultResponse(
            output=emit_split_system(i_closure(sigma)), warnings=_system_warnings(sigma)
        )

    @app.post("/v1/components", response_model=ResultResponse)
    def components_endpoint(req: SystemRequest) -> ResultResponse:
        sigma = parse_split_system(req.system)
        parts = components(sigma)
        lines = ["TAXA " + " ".join(sigma.taxa.names)]
        for i, part in enumerate(parts):
            lines.append("# component %d (%d splits)" % (i, len(part)))
            for s in part:
                lines.append("SPLIT " + s.format(sigma.taxa))
        return ResultResponse(
            output="\n".join(lines) + "\n", warnings=_system_warnings(sigma)
        )

    @app.post("/v1/is-circular", response_model=ResultResponse)
    def is_circular_endpoint(req: CircularRequest) -> ResultResponse:
        sigma = parse_split_system(req.system)
        ordering = oracle.brute_circular(sigma) if req.brute_force else is_circular(sigma)
        if ordering is None:
            return ResultResponse(decision=False, witness="no displaying circular ordering")
        return ResultResponse(
            decision=True,
            output="ORDER " + ordering.format(sigma.taxa) + "\n",
            warnings=_system_warnings(sigma),
        )

    @app.post("/v1/is-maximal", response_model=ResultResponse)
    def is_maximal_endpoint(req: SystemRequest) -> ResultResponse:
        sigma = parse_split_system(req.system)
        if is_circular(sigma) is None:
            return ResultResponse(
                decision=False, witness="input is not circular; the test is meaningless"
            )
        res = is_maximal_generator(sigma)
        if res.is_maximal_generator:
            return ResultResponse(decision=True, output="MAXIMAL-GENERATOR\n")
        return ResultResponse(decision=False, witness=res.describe(sigma.taxa))

    @app.post("/v1/synthesize", response_model=ResultResponse)
    def synthesize_endpoint(req: SynthesizeRequest) -> ResultResponse:
        sigma = parse_split_system(req.system)
        warnings = _system_warnings(sigma)
        if not sigma.has_all_trivial():
            warnings.append("trivial splits added automatically")
        try:
            net = minimal_1nested(sigma)
        except NotCircularError as exc:
            return ResultResponse(decision=False, witness="%s (%s)" % (exc, exc.witness))
        return ResultResponse(
            decision=True, output=_net_output(net, req.format), warnings=warnings
        )

    @app.post("/v1/splits-of", response_model=ResultResponse)
    def splits_of_endpoint(req: SplitsOfRequest) -> ResultResponse:
        net = parse_network(req.network)
        sigma = oracle.brute_min_cuts(net) if req.oracle else splits_of(net)
        return ResultResponse(output=emit_split_system(sigma))

    @app.post("/v1/multiplicity", response_model=ResultResponse)
    def multiplicity_endpoint(req: MultiplicityRequest) -> ResultResponse:
        net = parse_network(req.network)
        probe = parse_split_system(
            "TAXA " + " ".join(net.taxa.names) + "\nSPLIT " + req.split
        )
        if len(probe.splits) != 1:
            raise ValidationError("exactly one split expected")
        (split,) = probe.splits
        return ResultResponse(output="%d\n" % split_multiplicity(net, split))

    @app.post("/v1/resolve", response_model=ResultResponse)
    def resolve_endpoint(req: ResolveRequest) -> ResultResponse:
        net = parse_network(req.network)
        if req.move is None:
            out = maximal_partial_resolution(net)
        else:
            if req.vertex is None:
                raise ValidationError("a single move needs its vertex")
            out = partially_resolve(net, req.vertex, req.move, req.detail)
        return ResultResponse(output=_net_output(out, req.format))

    @app.post("/v1/buneman", response_model=ResultResponse)
    def buneman_endpoint(req: BunemanRequest) -> ResultResponse:
        sigma = parse_split_system(req.system)
        g = buneman_graph(sigma, req.max_vertices)
        out = emit_dot(g) if req.format == "dot" else emit_buneman_text(g)
        return ResultResponse(output=out, warnings=_system_warnings(sigma))

    @app.post("/v1/marguerites", response_model=ResultResponse)
    def marguerites_endpoint(req: BunemanRequest) -> ResultResponse:
        sigma = parse_split_system(req.system)
        g = buneman_graph(sigma, req.max_vertices)
        return ResultResponse(output=describe_marguerites(g))

    @app.post("/v1/embed", response_model=ResultResponse)
    def embed_endpoint(req: NetworkRequest) -> ResultResponse:
        net = parse_network(req.network)
        return ResultResponse(output=describe_embedding(embed_network(net)))

    @app.post("/v1/extract", response_model=ResultResponse)
    def extract_endpoint(req: BunemanRequest) -> ResultResponse:
        sigma = parse_split_system(req.system)
        g = buneman_graph(sigma, req.max_vertices)
        try:
            net = extract_network(g)
        except NotCircularError as exc:
            return ResultResponse(decision=False, witness="%s (%s)" % (exc, exc.witness))
        return ResultResponse(decision=True, output=_net_output(net, req.format))

    @app.post("/v1/check-equal", response_model=ResultResponse)
    def check_equal_endpoint(req: CheckEqualRequest) -> ResultResponse:
        n1 = parse_network(req.network)
        n2 = parse_network(req.other)
        same = equivalent(n1, n2)
        return ResultResponse(decision=same, witness=None if same else "split systems differ")

    @app.post("/v1/tree", response_model=ResultResponse)
    def tree_endpoint(req: SynthesizeRequest) -> ResultResponse:
        sigma = parse_split_system(req.system)
        return ResultResponse(
            output=_net_output(buneman_tree(sigma), req.format),
            warnings=_system_warnings(sigma),
        )

    return app


app = create_app()
