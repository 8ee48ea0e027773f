"""Batch experiment harness: existence rates and rule hit rates over models.

For every (model, committee size, instance) triple the harness generates a
profile, computes the exact entitlement vector, decides IR and semi-strong JR
existence, and optionally probes a list of voting rules.  Results stream into
a CSV whose rows are keyed by a per-instance seed derived from the base seed,
so output is byte-identical across runs and independent of the parallelism
degree (rows are order-normalized before writing).
"""

from __future__ import annotations

import csv
import hashlib
import io
import time
from dataclasses import dataclass, field
from multiprocessing import Pool
from pathlib import Path
from typing import Mapping, Sequence

from .cohesion import f_vector
from .search import BudgetExceededError
from .gen import GenSpec, generate
from .rules import RuleId, run_rule
from .solver import SolveRequest, find_committee

DEFAULT_MODELS = ("vi_euclid", "ci_euclid", "euclid_2d", "ic", "urn", "mallows")
DEFAULT_RULES = (
    "av",
    "pav",
    "seq_pav",
    "greedy_monroe",
    "rule_x",
    "seq_phragmen",
    "seq_cc",
)

# Radius scales re-calibrated for the desk-scale grid (n=40, m=16) so the
# existence curves keep their qualitative shape at this size (voter-interval
# and urn near 1, candidate-interval near 0 until k grows large, 2D in
# between).  The generator defaults themselves keep the original constants.
DESK_SCALE_GEN_PARAMS: Mapping[str, Mapping[str, object]] = {
    "vi_euclid": {"sigma": 0.10},
    "ci_euclid": {"sigma": 0.45},
}


@dataclass(frozen=True)
class ExperimentSpec:
    models: tuple[str, ...] = DEFAULT_MODELS
    n: int = 40
    m: int = 16
    k_values: tuple[int, ...] = tuple(range(2, 13))
    instances: int = 300
    rules: tuple[RuleId, ...] = ()
    seed: int = 1
    jobs: int = 1
    node_cap: int = 10**6
    include_timing: bool = True
    gen_params: Mapping[str, Mapping[str, object]] = field(
        default_factory=lambda: DESK_SCALE_GEN_PARAMS
    )

    def __post_init__(self):
        if self.instances < 1:
            raise ValueError("instances must be at least 1")
        for k in self.k_values:
            if not 1 <= k <= self.m:
                raise ValueError(f"k={k} outside [1, {self.m}]")


@dataclass(frozen=True)
class ExperimentRow:
    model: str
    k: int
    seed: int
    ir_exists: bool | None  # None when undecided
    ssjr_exists: bool | None
    rule_hits: tuple[tuple[str, bool, bool], ...]  # (rule, found_ir, found_ssjr)
    undecided: bool
    ms: int


def instance_seed(base_seed: int, model: str, k: int, index: int) -> int:
    key = f"{base_seed}:{model}:{k}:{index}".encode()
    return int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "big") >> 1


def _run_instance(args) -> ExperimentRow:
    spec, model, k, index = args
    seed = instance_seed(spec.seed, model, k, index)
    t0 = time.perf_counter()
    gspec = GenSpec(
        model=model,
        n=spec.n,
        m=spec.m,
        seed=seed,
        params=dict(spec.gen_params.get(model, {})),
    )
    election = generate(gspec, k=k)
    try:
        fvec = tuple(f_vector(election, node_cap=spec.node_cap))
    except BudgetExceededError:
        # without entitlements nothing about this instance is decidable;
        # record the row as undecided rather than aborting the batch
        ms = int((time.perf_counter() - t0) * 1000)
        return ExperimentRow(
            model=model,
            k=k,
            seed=seed,
            ir_exists=None,
            ssjr_exists=None,
            rule_hits=tuple((str(rule), False, False) for rule in spec.rules),
            undecided=True,
            ms=ms,
        )
    ir_res = find_committee(
        SolveRequest(election, fvec, "FIND_IR", node_cap=spec.node_cap)
    )
    ssjr_res = find_committee(
        SolveRequest(election, fvec, "FIND_SSJR", node_cap=spec.node_cap)
    )
    undecided = ir_res.status == "undecided" or ssjr_res.status == "undecided"
    rule_hits = []
    for rule in spec.rules:
        mode = "single" if rule.is_sequential else "all_tied"
        outcome = run_rule(election, rule, mode=mode)
        found_ir = found_ssjr = False
        for committee in outcome.committees:
            wmask = committee.mask()
            counts = [
                (b & wmask).bit_count() for b in election.ballot_masks
            ]
            if not found_ir and all(c >= cert.f for c, cert in zip(counts, fvec)):
                found_ir = True
            if not found_ssjr and all(
                c >= min(cert.f, 1) for c, cert in zip(counts, fvec)
            ):
                found_ssjr = True
        rule_hits.append((str(rule), found_ir, found_ssjr))
    ms = int((time.perf_counter() - t0) * 1000)
    return ExperimentRow(
        model=model,
        k=k,
        seed=seed,
        ir_exists=None if ir_res.status == "undecided" else ir_res.status == "found",
        ssjr_exists=None if ssjr_res.status == "undecided" else ssjr_res.status == "found",
        rule_hits=tuple(rule_hits),
        undecided=undecided,
        ms=ms,
    )


def run_experiment(spec: ExperimentSpec) -> list[ExperimentRow]:
    """All rows, ordered by (model, k, instance index) regardless of jobs."""
    tasks = [
        (spec, model, k, index)
        for model in spec.models
        for k in spec.k_values
        for index in range(spec.instances)
    ]
    if spec.jobs > 1:
        with Pool(spec.jobs) as pool:
            rows = pool.map(_run_instance, tasks, chunksize=16)
    else:
        rows = [_run_instance(t) for t in tasks]
    return rows


def csv_header(spec: ExperimentSpec) -> list[str]:
    cols = ["model", "k", "seed", "ir_exists", "ssjr_exists"]
    for rule in spec.rules:
        cols.append(f"{rule}_ir")
        cols.append(f"{rule}_ssjr")
    cols += ["undecided", "ms"]
    return cols


def rows_to_csv(spec: ExperimentSpec, rows: Sequence[ExperimentRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(csv_header(spec))

    def flag(b: bool | None) -> str:
        return "" if b is None else str(int(b))

    for row in rows:
        record = [
            row.model,
            row.k,
            row.seed,
            flag(row.ir_exists),
            flag(row.ssjr_exists),
        ]
        for _, found_ir, found_ssjr in row.rule_hits:
            record.append(int(found_ir))
            record.append(int(found_ssjr))
        record.append(int(row.undecided))
        record.append(row.ms if spec.include_timing else 0)
        writer.writerow(record)
    return buf.getvalue()


def existence_rates(rows: Sequence[ExperimentRow]) -> dict[tuple[str, int], dict[str, float]]:
    """Per (model, k): fraction of instances admitting IR / semi-strong JR.

    Undecided instances count toward the denominator and never the numerator.
    """
    grouped: dict[tuple[str, int], list[ExperimentRow]] = {}
    for row in rows:
        grouped.setdefault((row.model, row.k), []).append(row)
    out = {}
    for key, bucket in grouped.items():
        total = len(bucket)
        out[key] = {
            "ir_rate": sum(1 for r in bucket if r.ir_exists) / total,
            "ssjr_rate": sum(1 for r in bucket if r.ssjr_exists) / total,
            "undecided_rate": sum(1 for r in bucket if r.undecided) / total,
        }
    return out


def rule_rates(rows: Sequence[ExperimentRow]) -> dict[tuple[str, str], dict[str, float]]:
    """Per (model, rule), averaged over all k: hit ratio for IR and ssJR."""
    grouped: dict[tuple[str, str], list[tuple[bool, bool]]] = {}
    for row in rows:
        for rule, found_ir, found_ssjr in row.rule_hits:
            grouped.setdefault((row.model, rule), []).append((found_ir, found_ssjr))
    out = {}
    for key, hits in grouped.items():
        total = len(hits)
        out[key] = {
            "ir_found_rate": sum(1 for ir, _ in hits if ir) / total,
            "ssjr_found_rate": sum(1 for _, ss in hits if ss) / total,
        }
    return out


def write_outputs(spec: ExperimentSpec, rows: Sequence[ExperimentRow], out_dir) -> None:
    """results.csv plus summary tables and gnuplot-ready existence curves."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "results.csv").write_text(rows_to_csv(spec, rows))

    rates = existence_rates(rows)
    with (out / "summary_existence.csv").open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["model", "k", "ir_rate", "ssjr_rate", "undecided_rate"])
        for (model, k) in sorted(rates):
            r = rates[(model, k)]
            writer.writerow(
                [model, k, f"{r['ir_rate']:.4f}", f"{r['ssjr_rate']:.4f}", f"{r['undecided_rate']:.4f}"]
            )

    if spec.rules:
        rrates = rule_rates(rows)
        with (out / "summary_rules.csv").open("w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["model", "rule", "ir_found_rate", "ssjr_found_rate"])
            for (model, rule) in sorted(rrates):
                r = rrates[(model, rule)]
                writer.writerow(
                    [model, rule, f"{r['ir_found_rate']:.4f}", f"{r['ssjr_found_rate']:.4f}"]
                )

    for metric in ("ir_rate", "ssjr_rate"):
        name = "plot_ir_existence.dat" if metric == "ir_rate" else "plot_ssjr_existence.dat"
        with (out / name).open("w") as fh:
            fh.write(f"# columns: k then {metric} per model: {' '.join(spec.models)}\n")
            for k in spec.k_values:
                cells = [str(k)]
                for model in spec.models:
                    cells.append(f"{rates[(model, k)][metric]:.4f}")
                fh.write(" ".join(cells) + "\n")
