"""Named verification checks on a horospherical model and report assembly."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .horolie import (
    DEFAULT_EMBEDDING_CAP,
    EmbeddingCapExceeded,
    FamilyError,
    HoroModel,
    build_embedding,
    build_model,
    family_spec,
    gradation_table,
    hermitian_form,
    match_b3_table,
    trace_form_report,
    verify_bracket_rank,
    verify_dimension_identity,
    verify_fundamental,
    verify_gradation,
    verify_structure,
    verify_transitive,
)
from .prolong import verify_prolongation
from .report import FAIL, PASS, SKIPPED, CheckResult, jsonable, outcome, skipped
from .spencer import (
    cohomology,
    dd_zero,
    equivariance_check,
    filtration_F1,
    hodge_check,
    kostant_check,
    pair_for,
    worker_count,
)

SCHEMA_VERSION = "1"

CHECK_GROUPS = (
    "gradation",
    "fundamental",
    "transitive",
    "rank",
    "dimension",
    "cohomology",
    "hodge",
    "equivariance",
    "prolongation",
)


@dataclass(frozen=True)
class Options:
    family: str
    m: Optional[int] = None
    i: Optional[int] = None
    checks: Tuple[str, ...] = CHECK_GROUPS
    p_max: Optional[int] = None
    gram: str = "both"
    seed: int = 0
    samples: int = 200
    embedding_dim_cap: int = DEFAULT_EMBEDDING_CAP
    timings: bool = False
    certify_rank: bool = False

    def modes(self) -> List[str]:
        return ["weight", "trace"] if self.gram == "both" else [self.gram]


class Context:
    """Model plus lazily built embedding and cohomology tables shared across checks."""

    def __init__(self, model: HoroModel, opts: Options):
        self.model = model
        self.opts = opts
        self._embedding = None
        self._embedding_error: Optional[str] = None
        self._tables: Dict[str, object] = {}

    def embedding(self):
        if self._embedding is None and self._embedding_error is None:
            try:
                self._embedding = build_embedding(self.model, cap=self.opts.embedding_dim_cap)
            except EmbeddingCapExceeded as exc:
                self._embedding_error = f"dimension cap: {exc}"
        return self._embedding

    def gram(self, mode: str):
        if mode == "weight":
            return hermitian_form(self.model, "weight")
        emb = self.embedding()
        if emb is None:
            return None
        return hermitian_form(self.model, "trace", emb)

    def p_range(self, pair) -> Optional[range]:
        if self.opts.p_max is None:
            return None
        low = min(pair.gamma_degree) + 1
        return range(min(low, 0), self.opts.p_max + 1)

    def table(self, which: str):
        if which not in self._tables:
            pair = pair_for(self.model, which)
            self._tables[which] = cohomology(pair, p_range=self.p_range(pair), q_max=1, workers=1)
        return self._tables[which]


def _gradation(ctx: Context) -> List[CheckResult]:
    out = [verify_gradation(ctx.model), verify_structure(ctx.model)]
    if ctx.model.spec.id == "b3":
        out.append(
            outcome(
                "b3_bracket_table",
                match_b3_table(ctx.model),
                {"zero_pattern_matches": match_b3_table(ctx.model), "image_labels_match": match_b3_table(ctx.model, targets=True)},
                "zero pattern of the l_-1 x U_~0 table differs from the reference",
            )
        )
    emb = ctx.embedding()
    if emb is None:
        out.append(skipped("embedding", ctx._embedding_error or "unavailable"))
    else:
        out.append(outcome("embedding", True, {"n_alpha": emb.n_alpha, "n_beta": emb.n_beta, "n": emb.n, "homomorphism": True}))
        out.append(trace_form_report(ctx.model, emb))
    return out


def _cohomology(ctx: Context) -> List[CheckResult]:
    model = ctx.model
    res = []
    for which, name in (("m,g", "cohomology"), ("l-,l", "cohomology_l_minus_l"), ("l-,u", "cohomology_l_minus_u")):
        t = ctx.table(which)
        pair = pair_for(model, which)
        ok = t.vanishing(1) and t.double_check
        res.append(
            outcome(
                name,
                ok,
                {
                    "pair": which,
                    "p_range": [min(p for p, _ in t.entries), max(p for p, _ in t.entries)],
                    "h_p1_vanishes_for_p_ge_1": t.vanishing(1),
                    "hodge_consistent": t.double_check,
                    "table": t.to_json(),
                },
                "H^{p,1} is nonzero for some p >= 1" if t.double_check else "rank and harmonic dimensions disagree",
            )
        )
    pair = pair_for(model, "m,g")
    res.append(outcome("coboundary_squares_to_zero", dd_zero(pair, 0), {"q": [0]}, "d d != 0"))
    res.append(kostant_check(model, ctx.table("l-,u")))
    return res


def _hodge(ctx: Context) -> List[CheckResult]:
    res = []
    for mode in ctx.opts.modes():
        gram = ctx.gram(mode)
        if gram is None:
            res.append(skipped(f"hodge_{mode}", ctx._embedding_error or "no embedding"))
            continue
        pair = pair_for(ctx.model, "m,g", gram)
        parts = [hodge_check(pair, q) for q in (1, 2)]
        direct, counts = filtration_F1(pair)
        ok = all(parts) and counts["direct"] == counts["sum_over_p"]
        res.append(
            outcome(
                f"hodge_{mode}",
                ok,
                {"q1": parts[0].details, "q2": parts[1].details, "f1_dims": counts},
                "Hodge decomposition fails",
            )
        )
    return res


def _equivariance(ctx: Context) -> List[CheckResult]:
    model = ctx.model
    g = model.g
    cartan = [a for a in model.g0_idx if g.labels[a][0] in "tc"]
    l_g0 = [a for a in model.g0_idx if a in set(model.l_idx) or a == model.c_idx]
    u_g0 = [a for a in model.g0_idx if a in set(model.u_idx)]
    l_f1 = [a for a in model.f1h_idx if a in set(model.l_idx)]
    u_f1 = [a for a in model.f1h_idx if a in set(model.u_idx)]
    res = []
    for mode in ctx.opts.modes():
        gram = ctx.gram(mode)
        if gram is None:
            res.append(skipped(f"equivariance_{mode}", ctx._embedding_error or "no embedding"))
            continue
        pair = pair_for(model, "m,g", gram)
        parts = {
            "a_l0_and_c": equivariance_check(pair, l_g0),
            "a_u_tilde0": equivariance_check(pair, u_g0),
            "b_l_plus": equivariance_check(pair, l_f1),
            "b_u_plus": equivariance_check(pair, u_f1),
        }
        summary = {k: {"status": v.status, "elements": len(v.details["elements"]), "failures": v.details["failures"]} for k, v in parts.items()}
        if mode == "weight":
            cart = equivariance_check(pair, cartan)
            summary["cartan"] = {"status": cart.status, "elements": len(cartan), "failures": cart.details["failures"]}
            res.append(
                outcome(
                    "equivariance_weight",
                    cart.passed,
                    {"asserted": "cartan", "parts": summary},
                    "d* does not commute with the Cartan action",
                )
            )
        else:
            ok = all(v.passed for v in parts.values())
            failing = [k for k, v in parts.items() if not v.passed]
            res.append(
                outcome(
                    "equivariance_trace",
                    ok,
                    {"asserted": "all", "parts": summary},
                    "d* does not commute with rho_*(A) for A in " + ", ".join(failing),
                )
            )
    return res


def _prolongation(ctx: Context) -> List[CheckResult]:
    return [verify_prolongation(ctx.model, extra_degrees=2, cohomology_table=ctx.table("m,g"))]


RUNNERS = {
    "gradation": _gradation,
    "fundamental": lambda ctx: [verify_fundamental(ctx.model)],
    "transitive": lambda ctx: [verify_transitive(ctx.model)],
    "rank": lambda ctx: [verify_bracket_rank(ctx.model, ctx.opts.samples, ctx.opts.seed, certify=ctx.opts.certify_rank)],
    "dimension": lambda ctx: [verify_dimension_identity(ctx.model)],
    "cohomology": _cohomology,
    "hodge": _hodge,
    "equivariance": _equivariance,
    "prolongation": _prolongation,
}


def _run_group(ctx: Context, group: str) -> Tuple[List[CheckResult], float]:
    t0 = time.perf_counter()
    out = RUNNERS[group](ctx)
    return out, time.perf_counter() - t0


def _worker(args: Tuple[Options, str]) -> Tuple[List[CheckResult], float]:
    opts, group = args
    model = build_model(family_spec(opts.family, opts.m, opts.i))
    return _run_group(Context(model, opts), group)


def run_checks(opts: Options, workers: Optional[int] = None) -> Dict[str, object]:
    """Build the model, run the requested check groups and assemble the report."""
    spec = family_spec(opts.family, opts.m, opts.i)
    model = build_model(spec)
    workers = worker_count() if workers is None else workers
    groups = [g for g in CHECK_GROUPS if g in opts.checks]
    if workers > 1 and len(groups) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(groups))) as ex:
            outs = list(ex.map(_worker, [(opts, g) for g in groups]))
    else:
        ctx = Context(model, opts)
        outs = [_run_group(ctx, g) for g in groups]
    checks: Dict[str, CheckResult] = {}
    timings: Dict[str, float] = {}
    for group, (results, dt) in zip(groups, outs):
        timings[group] = round(dt, 3)
        for r in results:
            checks[r.name] = r
    failed = [n for n, r in checks.items() if r.status == FAIL]
    report: Dict[str, object] = {
        "schema_version": SCHEMA_VERSION,
        "family": {
            "id": spec.id,
            "label": spec.label,
            "m": spec.m,
            "i": spec.i,
            "l_type": spec.l_type,
            "rank": spec.rank,
            "alpha_index": spec.alpha_index,
            "beta_index": spec.beta_index,
            "u_weight": spec.u_weight,
            "v_alpha_weight": spec.v_alpha_weight,
            "v_beta_weight": spec.v_beta_weight,
        },
        "options": {
            "checks": groups,
            "gram": opts.gram,
            "seed": opts.seed,
            "samples": opts.samples,
            "p_max": opts.p_max,
            "embedding_dim_cap": opts.embedding_dim_cap,
            "certify_rank": opts.certify_rank,
        },
        "dimensions": gradation_table(model),
        "checks": {n: r.to_json() for n, r in checks.items()},
        "failed": failed,
        "status": FAIL if failed else PASS,
    }
    if opts.timings:
        report["timings_seconds"] = timings
    return jsonable(report)
