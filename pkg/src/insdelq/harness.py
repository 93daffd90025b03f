"""Experiment sweeps and exhaustive verification suites, with JSON/CSV reports.

Seeds: every random object is drawn from ``np.random.SeedSequence([master, stream, index])``
where ``stream`` is 0 for per-run sampling seeds, 1 for messages and 2 for
random inserted states.  Reports therefore do not depend on execution order.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import logging
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import basecode, checks
from .basecode import CodeIsometry, builtin_code, load_code
from .decoder import ChannelSpec, apply_insdel, decode, decode_branches
from .editgraph import BOT_ORDER, TOP_ORDER
from .mhcode import MHCode, mh_deletion_decode, mh_encode
from .qsim import Ensemble, PureState, apply_site_operator, delete_qudits, fidelity, insert_qudits
from .seqcore import DEFAULT_BUDGET, detecting_sequences, indel_ball, monotone_periodic

log = logging.getLogger(__name__)

REPORT_VERSION = 1
CSV_COLUMNS = ["run_id", "J1", "J2", "sigma_kind", "branch", "S1", "S2", "fidelity", "pass"]
STREAM_RUN, STREAM_MESSAGE, STREAM_SIGMA = 0, 1, 2


def derived_seed(master: int, stream: int, index: int) -> int:
    return int(np.random.SeedSequence([master, stream, index]).generate_state(1, dtype=np.uint64)[0])


@dataclass
class ExperimentConfig:
    n: int = 5
    l: int = 2
    t: int = 2
    base: str = "five_qudit"
    base_file: str | None = None
    insert_indices: list[int] | None = None
    delete_indices: list[int] | None = None
    sigma_catalogue: list[str] = field(default_factory=lambda: ["basis", "random_pure", "maximally_mixed"])
    random_pure_count: int = 3
    messages: int = 5
    mode: str = "branches"
    seed: int = 0
    threshold: float = 1 - 1e-9
    threads: int = 1

    def __post_init__(self):
        if self.insert_indices is None:
            self.insert_indices = list(range(1, self.n + 2))
        if self.delete_indices is None:
            self.delete_indices = list(range(1, self.n + 2))
        self.validate()

    def validate(self) -> None:
        for idx in list(self.insert_indices) + list(self.delete_indices):
            if not 1 <= idx <= self.n + 1:
                raise ValueError(f"channel index {idx} outside [1, {self.n + 1}]")
        if self.messages < 1 or self.random_pure_count < 0:
            raise ValueError("message and trial counts must be at least 1")
        if not 0 < self.threshold:
            raise ValueError(f"threshold must be positive, got {self.threshold}")
        if self.mode not in ("branches", "sample"):
            raise ValueError(f"mode must be 'branches' or 'sample', got {self.mode!r}")
        unknown = set(self.sigma_catalogue) - {"basis", "random_pure", "maximally_mixed"}
        if unknown:
            raise ValueError(f"unknown sigma kinds {sorted(unknown)}")
        if self.threads < 1:
            raise ValueError("threads must be at least 1")

    @classmethod
    def from_dict(cls, data: dict) -> ExperimentConfig:
        known = {f for f in cls.__dataclass_fields__}
        extra = set(data) - known
        if extra:
            raise ValueError(f"unknown config keys {sorted(extra)}")
        return cls(**data)

    @classmethod
    def load(cls, path) -> ExperimentConfig:
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self) -> dict:
        return asdict(self)

    def build_code(self) -> MHCode:
        base = load_code(self.base_file) if self.base_file else builtin_code(self.base)
        return MHCode(self.n, self.l, self.t, base)


def code_from_config(data: dict) -> MHCode:
    """Build an ``MHCode`` from the ``n``, ``l``, ``t``, ``base``/``base_file`` keys."""
    base: CodeIsometry = load_code(data["base_file"]) if data.get("base_file") else builtin_code(data.get("base", "five_qudit"))
    return MHCode(int(data.get("n", base.n0)), int(data.get("l", base.l)), int(data.get("t", 2)), base)


def sigma_catalogue(config: ExperimentConfig, site_dim: int) -> list[tuple[str, Ensemble]]:
    out = []
    for kind in config.sigma_catalogue:
        if kind == "basis":
            out += [(f"basis:{k}", Ensemble.pure(PureState.basis((site_dim,), (k,)))) for k in range(site_dim)]
        elif kind == "random_pure":
            out += [
                (f"random_pure:{i}", Ensemble.pure(PureState.random((site_dim,), derived_seed(config.seed, STREAM_SIGMA, i))))
                for i in range(config.random_pure_count)
            ]
        else:
            out.append(("maximally_mixed", Ensemble.maximally_mixed((site_dim,))))
    return out


@dataclass
class SweepReport:
    kind: str
    config: dict
    runs: list[dict] = field(default_factory=list)
    checks: dict = field(default_factory=dict)
    counterexamples: list[dict] = field(default_factory=list)
    wall_clock: dict = field(default_factory=dict)

    @property
    def passed(self) -> int:
        if self.runs:
            return sum(r["pass"] for r in self.runs)
        return sum(c["cases"] - c["failures"] for c in self.checks.values())

    @property
    def failed(self) -> int:
        if self.runs:
            return sum(not r["pass"] for r in self.runs)
        return sum(c["failures"] for c in self.checks.values())

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def summary(self) -> dict:
        out = {"passed": self.passed, "failed": self.failed, "runs": self.passed + self.failed}
        if self.runs:
            out["min_fidelity"] = min(r["fidelity"] for r in self.runs)
            out["branches"] = sorted({r["branch"] for r in self.runs})
        return out

    def to_dict(self) -> dict:
        """Deterministic content only; wall-clock figures are kept out."""
        return {
            "version": REPORT_VERSION,
            "kind": self.kind,
            "config": self.config,
            "summary": self.summary(),
            "checks": self.checks,
            "counterexamples": self.counterexamples,
            "runs": self.runs,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for r in self.runs:
            writer.writerow({
                "run_id": r["run_id"], "J1": r["J1"], "J2": r["J2"], "sigma_kind": r["sigma_kind"],
                "branch": r["branch"], "S1": " ".join(map(str, r["S1"])), "S2": " ".join(map(str, r["S2"])),
                "fidelity": repr(r["fidelity"]), "pass": int(r["pass"]),
            })
        return buf.getvalue()

    def write(self, path_prefix) -> None:
        with open(f"{path_prefix}.json", "w") as fh:
            fh.write(self.to_json())
        if self.runs:
            with open(f"{path_prefix}.csv", "w") as fh:
                fh.write(self.to_csv())


def _run_case(code, config, case_id, message_idx, mu, psi, j1, j2, label, sigma) -> list[dict]:
    rho = apply_insdel(psi, ChannelSpec(j2, j1, sigma))
    if config.mode == "branches":
        outcomes = decode_branches(code, rho, mu)
    else:
        msg, rep = decode(code, rho, derived_seed(config.seed, STREAM_RUN, case_id))
        rep.fidelity = fidelity(mu, msg)
        outcomes = [(msg, rep)]
    rows = []
    for _, rep in outcomes:
        rows.append({
            "case": case_id,
            "message": message_idx,
            "J1": j1,
            "J2": j2,
            "sigma_kind": label,
            "results": list(rep.results),
            "branch": rep.branch,
            "S1": list(rep.S1),
            "S2": list(rep.S2),
            "probability": rep.probability,
            "fidelity": rep.fidelity,
            "seed": rep.seed,
            "pass": bool(rep.fidelity >= config.threshold),
        })
    return rows


def cmd_experiment(config: ExperimentConfig) -> SweepReport:
    """End-to-end sweep: encode, apply every configured channel, decode, score fidelity."""
    start = time.perf_counter()
    code = config.build_code()
    sigmas = sigma_catalogue(config, code.site_dim)
    cases = []
    for mi in range(config.messages):
        mu = PureState.random((code.l,) * code.base.k, derived_seed(config.seed, STREAM_MESSAGE, mi))
        psi = mh_encode(code, mu)
        for j1, j2 in itertools.product(config.delete_indices, config.insert_indices):
            for label, sigma in sigmas:
                cases.append((mi, mu, psi, j1, j2, label, sigma))

    def work(idx):
        mi, mu, psi, j1, j2, label, sigma = cases[idx]
        return _run_case(code, config, idx, mi, mu, psi, j1, j2, label, sigma)

    if config.threads > 1:
        with ThreadPoolExecutor(config.threads) as pool:
            per_case = list(pool.map(work, range(len(cases))))
    else:
        per_case = [work(i) for i in range(len(cases))]
    runs = []
    for rows in per_case:
        for row in rows:
            runs.append({"run_id": len(runs), **row})
    report = SweepReport("experiment", config.to_dict(), runs=runs)
    report.wall_clock = {"seconds": time.perf_counter() - start, "cases": len(cases)}
    log.info("experiment: %d runs, %s", len(runs), report.summary())
    return report


@dataclass
class ClassicalConfig:
    t_values: list[int] = field(default_factory=lambda: [2, 3])
    n_min: int = 5
    n_max: int = 10
    enumerate_n_max: int = 8
    enumerate_q_max: int = 3
    random_pairs: int = 500
    random_len_max: int = 7
    seed: int = 0
    budget: int = DEFAULT_BUDGET
    path_cap: int = 12
    max_counterexamples: int = 20
    orders: tuple = (BOT_ORDER, TOP_ORDER)

    @classmethod
    def from_dict(cls, data: dict) -> ClassicalConfig:
        data = dict(data)
        if "orders" in data:
            data["orders"] = tuple(tuple(o) for o in data["orders"])
        return cls(**data)


class _Tally:
    def __init__(self, limit: int):
        self.checks: dict[str, dict] = {}
        self.examples: list[dict] = []
        self.limit = limit

    def add(self, name: str, bad: list[dict]) -> None:
        entry = self.checks.setdefault(name, {"cases": 0, "failures": 0})
        entry["cases"] += 1
        if bad:
            entry["failures"] += 1
            room = self.limit - len(self.examples)
            self.examples.extend(bad[:max(room, 0)])


def _indel_suite(tally: _Tally, x, t: int, q: int, cfg: ClassicalConfig) -> None:
    ball = indel_ball(x, 1, q)
    for y in sorted(ball):
        tally.add("candidates", checks.check_candidates(x, y, cfg.orders))
        tally.add("out_degree", checks.check_out_degree(x, y))
        tally.add("paths", checks.check_paths(x, y, cfg.orders, cap=cfg.path_cap))
    tally.add("close_repeats", checks.check_close_repeats(x, t))
    tally.add("common_deletions", checks.check_common_deletions(x, ball))
    tally.add("repeated_neighbours", checks.check_repeated_neighbours(x, q, ball))


def cmd_verify_classical(cfg: ClassicalConfig) -> SweepReport:
    """Exhaustive checks of candidate sets, DP path properties and indel-ball identities."""
    if any(t < 2 for t in cfg.t_values):
        raise ValueError("the candidate-set guarantee needs t >= 2; refusing t < 2")
    start = time.perf_counter()
    tally = _Tally(cfg.max_counterexamples)
    for t in cfg.t_values:
        for n in range(cfg.n_min, cfg.n_max + 1):
            _indel_suite(tally, monotone_periodic(n, t), t, t + 1, cfg)
    for t in cfg.t_values:
        for q in range(2, cfg.enumerate_q_max + 1):
            for n in range(t + 1, cfg.enumerate_n_max + 1):
                for x in detecting_sequences(n, q, t, cfg.budget):
                    _indel_suite(tally, x, t, q, cfg)
    rng = random.Random(cfg.seed)
    for _ in range(cfg.random_pairs):
        q = rng.randint(1, 4)
        x = tuple(rng.randrange(q) for _ in range(rng.randint(0, cfg.random_len_max)))
        y = tuple(rng.randrange(q) for _ in range(rng.randint(0, cfg.random_len_max)))
        tally.add("random_out_degree", checks.check_out_degree(x, y))
        tally.add("random_paths", checks.check_paths(x, y, cfg.orders, cap=cfg.path_cap))
    config = {k: (list(map(list, v)) if k == "orders" else v) for k, v in asdict(cfg).items()}
    report = SweepReport("verify-classical", config, checks=tally.checks, counterexamples=tally.examples)
    report.wall_clock = {"seconds": time.perf_counter() - start}
    return report


def cmd_verify_quantum(config: ExperimentConfig, trials: int = 3) -> SweepReport:
    """Base-code certificate, channel identities and deletion decoding at desk scale."""
    start = time.perf_counter()
    code = config.build_code()
    base = code.base
    tally = _Tally(20)

    defect = base.isometry_defect()
    tally.add("isometry", [] if defect < 1e-10 else [{"check": "isometry", "defect": defect}])
    _, residual = basecode.kl_matrix(base, basecode.weight_one_errors(base.n0, base.l))
    tally.add("knill_laflamme", [] if residual < 1e-10 else [{"check": "knill_laflamme", "residual": residual}])

    for trial in range(trials):
        mu = PureState.random((base.l,) * base.k, derived_seed(config.seed, STREAM_MESSAGE, trial))
        psi = basecode.encode(base, mu)
        for J in itertools.combinations(range(1, base.n0 + 1), base.erasures):
            filler = PureState.basis((base.l,) * len(J), (0,) * len(J))
            state = insert_qudits(delete_qudits(psi, J), J, filler)
            f = fidelity(mu, basecode.correct_erasures(base, state, J))
            tally.add("erasures", [] if f >= config.threshold else [{"check": "erasures", "J": J, "fidelity": f}])
        for site in range(1, base.n0 + 1):
            for E in basecode.error_basis(base.l)[1:]:
                f = fidelity(mu, basecode.correct_single_error(base, apply_site_operator(psi, site, E)))
                tally.add("single_errors", [] if f >= config.threshold else
                          [{"check": "single_errors", "site": site, "fidelity": f}])

        cw = mh_encode(code, mu)
        for d in range(code.t + 1):
            for S in itertools.combinations(range(1, code.n + 1), d):
                out = mh_deletion_decode(code, delete_qudits(cw, S) if S else cw,
                                         derived_seed(config.seed, STREAM_RUN, trial))
                f = fidelity(mu, out)
                tally.add("deletions", [] if f >= config.threshold else
                          [{"check": "deletions", "S": S, "fidelity": f}])
        for label, sigma in sigma_catalogue(config, code.site_dim):
            for j in range(1, code.n + 2):
                back = delete_qudits(insert_qudits(cw, [j], sigma), [j])
                f = fidelity(cw, back)
                tally.add("insert_delete_identity", [] if f >= config.threshold else
                          [{"check": "insert_delete_identity", "J": j, "sigma": label, "fidelity": f}])
    report = SweepReport("verify-quantum", config.to_dict(), checks=tally.checks, counterexamples=tally.examples)
    report.wall_clock = {"seconds": time.perf_counter() - start}
    return report
