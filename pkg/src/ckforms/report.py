"""Reports: one completed check rendered as a dict, JSON, or text.

The JSON form is the source of truth; text is rendered from the same dict so
the two never disagree.  No floats appear anywhere: coefficients are exact
strings and timing, when requested, is whole milliseconds.
"""

from __future__ import annotations

import json
from typing import Any

from . import __version__
from .liegroups import GroupSpec
from .obstruction import ObstructionResult, PairSpec, Verdict

VERDICT_TEXT = {
    Verdict.OBSTRUCTION_FOUND: "obstruction found: G/H admits no compact Clifford–Klein form",
    Verdict.INCONCLUSIVE: "inconclusive: no witness up to degree {d} (this does NOT imply existence)",
    Verdict.INAPPLICABLE: "criterion inapplicable",
}

REASON_TEXT = {
    "equal_rank_hk": "rank H = rank K_H, so restriction to the torus of K_H is injective",
    "complexification": "G is the complexification of H, so the ideal contains the whole kernel",
}


def verdict_text(verdict: Verdict, max_degree: int) -> str:
    return VERDICT_TEXT[verdict].format(d=max_degree)


def _tensor_name(group: GroupSpec, name: str) -> str:
    base, _, slot = name.partition("@")
    if not slot:
        return base
    slots = ["1"] * len(group.factors)
    slots[int(slot) - 1] = base
    return " ⊗ ".join(slots)


def legend(group: GroupSpec, names) -> dict[str, str]:
    return {n: _tensor_name(group, n) for n in names}


def build_report(
    pair: PairSpec,
    result: ObstructionResult,
    *,
    description: str = "",
    params: tuple[int, ...] | None = None,
    elapsed_ms: int | None = None,
) -> dict[str, Any]:
    w = result.witness
    used = sorted(n for n in set(_names(w)) if "@" in n) if w else []
    out: dict[str, Any] = {
        "tool": "ckforms",
        "version": __version__,
        "pair": pair.id,
        "description": description,
        "g_u": str(pair.g_u),
        "h_u": str(pair.h_u),
        "ranks": {"g": pair.rank_g, "h": pair.rank_h, "kg": pair.rank_kg, "kh": pair.rank_kh},
        "max_degree": result.max_degree,
        "verdict": result.verdict.value,
        "verdict_text": verdict_text(result.verdict, result.max_degree),
        "reason": result.reason.value if result.reason else None,
        "rank_criterion": result.rank_criterion,
        "witness": w.pretty if w else None,
        "poly_degree": result.degree,
        "coh_degree": 2 * result.degree if result.degree is not None else None,
        "coefficients": w.coefficient_strings() if w else {},
        "legend": legend(pair.h_u, used),
        "certificate": (
            {
                "restricts_to_zero": result.certificate.restricts_to_zero,
                "outside_ideal": result.certificate.outside_ideal,
            }
            if result.certificate
            else None
        ),
        "degrees": [
            {
                "degree": s.degree,
                "coh_degree": s.coh_degree,
                "hilbert_dim": s.hilbert_dim,
                "kernel_dim": s.kernel_dim,
                "image_rank": s.image_rank,
                "ideal_rank": s.ideal_rank,
            }
            for s in result.stats
        ],
    }
    if params is not None:
        out["params"] = list(params)
    if elapsed_ms is not None:
        out["elapsed_ms"] = int(elapsed_ms)
    return out


def _names(w) -> list[str]:
    names = []
    for monomial in w.coefficient_strings():
        for factor in monomial.split("*"):
            names.append(factor.partition("^")[0])
    return names


def to_json(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


def render_text(r: dict[str, Any]) -> str:
    lines = [f"pair: {r['pair']}" + (f"  {r['description']}" if r["description"] else "")]
    k = r["ranks"]
    lines.append(
        f"G_U = {r['g_u']}, H_U = {r['h_u']}; ranks g={k['g']} h={k['h']} kg={k['kg']} kh={k['kh']}"
    )
    lines.append(f"verdict: {r['verdict_text']}")
    if r["reason"]:
        lines.append(f"reason: {r['reason']} ({REASON_TEXT[r['reason']]})")
    if r["witness"]:
        lines.append(f"witness: {r['witness']}")
        lines.append(
            f"  polynomial degree {r['poly_degree']}, cohomological degree {r['coh_degree']}"
        )
        coeffs = ", ".join(f"{m} = {c}" for m, c in r["coefficients"].items())
        lines.append(f"  coefficients: {coeffs}")
        if r["legend"]:
            lines.append("  legend: " + ", ".join(f"{n} = {t}" for n, t in r["legend"].items()))
        cert = r["certificate"]
        lines.append(
            f"certificate: restricts to zero on the torus of K_H: {_yes(cert['restricts_to_zero'])}; "
            f"outside the ideal piece: {_yes(cert['outside_ideal'])}"
        )
    lines.append(f"rank criterion (rank G = rank H, rank K_G > rank K_H): {_yes(r['rank_criterion'])}")
    if r["degrees"]:
        lines.append("  deg  coh  invariants  kernel  image  ideal")
        for s in r["degrees"]:
            lines.append(
                f"  {s['degree']:>3}  {s['coh_degree']:>3}  {s['hilbert_dim']:>10}  "
                f"{s['kernel_dim']:>6}  {s['image_rank']:>5}  {s['ideal_rank']:>5}"
            )
    if "elapsed_ms" in r:
        lines.append(f"time: {r['elapsed_ms']} ms")
    lines.append(f"{r['tool']} {r['version']}")
    return "\n".join(lines) + "\n"


def summarize(reports: list[dict[str, Any]]) -> dict[str, int]:
    counts = {v.value: 0 for v in Verdict}
    for r in reports:
        counts[r["verdict"]] += 1
    return counts


def summary_line(counts: dict[str, int]) -> str:
    return "summary: " + ", ".join(f"{k}={v}" for k, v in counts.items())
