"""Command-line experiment runner.

Three subcommands:

* gen       materialize an instance generator to a JSON pmf file
* describe  print exact statistics of a pmf file
* test      run a tester for many seeded trials and report accept rates,
            sample usage, and peak memory

Instance files are {"n": int, "pmf": [floats]}; reports are JSON with a
schema version. Exit code 0 means the run completed (whatever the verdicts),
2 means the configuration was invalid.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import os
import sys
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .distributions import (ExplicitDistribution, distance_to_monotone,
                            flattened_distance_certificate, gen_half_uniform,
                            gen_monotone, gen_no_instance, gen_point_mass,
                            gen_uniform, l2_norm_sq, tv_distance)
from .oracles import MemoryBudgetExceeded, PcondOracle, Sampler, SampleStream
from .testers import (PROFILES, ConfigError, TesterConfig,
                      assess_window, bipartite_collision_monotonicity,
                      closeness_monotone_streaming, collision_monotonicity,
                      identity_monotone_streaming, learn_decomposable_streaming,
                      pcond_identity_streaming, pcond_window,
                      streaming_monotonicity, streaming_monotonicity_window,
                      test_decomposable_property, window_midpoint)

REPORT_SCHEMA = 1

TESTERS = (
    "identity-monotone",
    "closeness-monotone",
    "pcond-identity",
    "collision-monotonicity",
    "bipartite-collision-monotonicity",
    "streaming-monotonicity",
    "learn-decomposable",
    "decomposable-monotone",
)

_WINDOWS = {
    "pcond-identity": pcond_window,
    "streaming-monotonicity": streaming_monotonicity_window,
    "learn-decomposable": assess_window,
    "decomposable-monotone": assess_window,
}


@dataclass
class ExperimentConfig:
    tester: str
    instance: str
    eps: float
    trials: int = 1
    target: str | None = None
    m: int | None = None
    auto_m: bool = False
    big_l: int = 4
    constants: str = "calibrated"
    seed: int = 0
    jobs: int = 1
    out: str | None = None
    csv: str | None = None

    def __post_init__(self):
        if self.tester not in TESTERS:
            raise ConfigError(f"unknown tester {self.tester!r}")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.constants not in PROFILES:
            raise ConfigError(f"unknown constants profile {self.constants!r}")
        if self.jobs < 1:
            raise ConfigError("jobs must be >= 1")


@dataclass
class ExperimentReport:
    config: dict
    trials: list = field(default_factory=list)
    failures: list = field(default_factory=list)
    accept_rate: float = 0.0
    mean_samples: float = 0.0
    max_samples: int = 0
    mean_peak_bits: float = 0.0
    max_peak_bits: float = 0.0
    wall_clock_s: float = 0.0

    def to_json(self) -> dict:
        return {"schema": REPORT_SCHEMA, **asdict(self)}


def build_instance(kind: str, params: dict, seed: int = 0) -> ExplicitDistribution:
    """Materialize a generator spec; shared by `gen` and generator-form files."""
    params = dict(params)
    if kind == "uniform":
        return gen_uniform(params["n"])
    if kind == "point":
        return gen_point_mass(params["n"], at=params.get("at", 1))
    if kind == "half":
        return gen_half_uniform(params["n"])
    if kind in ("geometric", "power", "step"):
        n = params.pop("n")
        return gen_monotone(kind, n, **params)
    if kind == "no-instance":
        rng = np.random.default_rng(seed)
        return gen_no_instance(params["half_n"], params.get("eps0", 0.5), rng)
    raise ConfigError(f"unknown generator {kind!r}")


def load_instance(path: str) -> ExplicitDistribution:
    """Read {"n", "pmf"} or {"generator": {"kind", "params", "seed"}} JSON."""
    with open(path) as fh:
        data = json.load(fh)
    try:
        if "generator" in data:
            g = data["generator"]
            return build_instance(g["kind"], g.get("params", {}), g.get("seed", 0))
        pmf = np.asarray(data["pmf"], dtype=np.float64)
        if "n" in data and int(data["n"]) != pmf.size:
            raise ValueError(f"n={data['n']} does not match pmf length {pmf.size}")
        return ExplicitDistribution(pmf)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def save_instance(dist: ExplicitDistribution, path: str) -> None:
    with open(path, "w") as fh:
        json.dump({"n": dist.n, "pmf": dist.pmf.tolist()}, fh)
        fh.write("\n")


def resolve_m(cfg: ExperimentConfig, n: int, tcfg: TesterConfig) -> int | None:
    if cfg.auto_m:
        window_fn = _WINDOWS.get(cfg.tester)
        if window_fn is None:
            raise ConfigError(f"{cfg.tester} takes no memory budget; drop --m")
        return window_midpoint(window_fn(n, cfg.eps, tcfg))
    return cfg.m


def run_trial(cfg: ExperimentConfig, instance: ExplicitDistribution,
              target: ExplicitDistribution | None, m: int | None,
              trial_seed: int) -> dict:
    """One seeded trial; sub-streams and tester randomness derive from one seed."""
    ss = np.random.SeedSequence(trial_seed)
    r_stream, r_aux, r_tester = (np.random.default_rng(c) for c in ss.spawn(3))
    tcfg = TesterConfig(eps=cfg.eps, m=m, constants=dict(PROFILES[cfg.constants]),
                        rng=r_tester)
    stream = SampleStream(Sampler(instance.pmf, r_stream))
    ref = target or instance

    if cfg.tester == "identity-monotone":
        verdict = identity_monotone_streaming(stream, ref, tcfg)
    elif cfg.tester == "closeness-monotone":
        stream2 = SampleStream(Sampler(ref.pmf, r_aux))
        verdict = closeness_monotone_streaming(stream, stream2, instance.n, tcfg)
    elif cfg.tester == "pcond-identity":
        oracle = PcondOracle(instance.pmf, r_aux)
        verdict = pcond_identity_streaming(stream, oracle, ref, tcfg)
    elif cfg.tester == "collision-monotonicity":
        verdict = collision_monotonicity(stream, tcfg)
    elif cfg.tester == "bipartite-collision-monotonicity":
        verdict = bipartite_collision_monotonicity(stream, tcfg)
    elif cfg.tester == "streaming-monotonicity":
        verdict = streaming_monotonicity(stream, tcfg)
    elif cfg.tester == "learn-decomposable":
        learned = learn_decomposable_streaming(stream, cfg.big_l, tcfg)
        verdict = learned.verdict
        if learned.view is not None:
            verdict.diagnostics["tv_to_instance"] = tv_distance(
                learned.view.as_distribution().pmf, instance.pmf)
    else:  # decomposable-monotone
        verdict = test_decomposable_property(
            stream, lambda d: distance_to_monotone(d.pmf), cfg.big_l, tcfg)

    record = verdict.to_json()
    record["trial_seed"] = trial_seed
    return record


def _trial_worker(payload: tuple) -> tuple[int, dict | None, str | None]:
    cfg, instance, target, m, index, trial_seed = payload
    try:
        return index, run_trial(cfg, instance, target, m, trial_seed), None
    except MemoryBudgetExceeded as exc:
        return index, None, f"budget exceeded: {exc}"


def run_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    instance = load_instance(cfg.instance)
    target = load_instance(cfg.target) if cfg.target else None
    probe_cfg = TesterConfig(eps=cfg.eps, m=None,
                             constants=dict(PROFILES[cfg.constants]), seed=0)
    m = resolve_m(cfg, instance.n, probe_cfg)

    started = time.monotonic()
    payloads = [(cfg, instance, target, m, i, cfg.seed + i) for i in range(cfg.trials)]
    results: list[tuple[int, dict | None, str | None]] = []
    if cfg.jobs == 1:
        results = [_trial_worker(p) for p in payloads]
    else:
        with concurrent.futures.ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_trial_worker, payloads))
    results.sort(key=lambda r: r[0])

    report = ExperimentReport(config={**asdict(cfg), "m_resolved": m, "n": instance.n})
    for index, record, error in results:
        if error is not None:
            report.failures.append({"trial": index, "error": error})
        else:
            report.trials.append(record)
    done = report.trials
    if done:
        accepts = sum(1 for t in done if t["decision"] == "Accept")
        report.accept_rate = accepts / len(done)
        report.mean_samples = float(np.mean([t["samples"] for t in done]))
        report.max_samples = int(max(t["samples"] for t in done))
        report.mean_peak_bits = float(np.mean([t["peak_bits"] for t in done]))
        report.max_peak_bits = float(max(t["peak_bits"] for t in done))
    report.wall_clock_s = time.monotonic() - started
    return report


def _write_report(report: ExperimentReport, cfg: ExperimentConfig) -> None:
    doc = json.dumps(report.to_json(), indent=2)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(doc + "\n")
    else:
        print(doc)
    if cfg.csv:
        cols = ("trial_seed", "decision", "samples", "cond_queries", "peak_bits")
        lines = [",".join(cols)]
        lines += [",".join(str(t.get(c, "")) for c in cols) for t in report.trials]
        with open(cfg.csv, "w") as fh:
            fh.write("\n".join(lines) + "\n")


def _cmd_gen(args: argparse.Namespace) -> int:
    by_kind = {
        "uniform": {"n": args.n},
        "point": {"n": args.n, "at": args.at},
        "half": {"n": args.n},
        "geometric": {"n": args.n, "ratio": args.ratio},
        "power": {"n": args.n, "alpha": args.alpha},
        "step": {"n": args.n, "levels": args.levels, "decay": args.decay},
        "no-instance": {"half_n": args.half_n, "eps0": args.eps0},
    }
    params = {k: v for k, v in by_kind[args.kind].items() if v is not None}
    save_instance(build_instance(args.kind, params, args.seed), args.out)
    return 0


def _cmd_describe(args: argparse.Namespace) -> int:
    dist = load_instance(args.file)
    uniform = np.full(dist.n, 1.0 / dist.n)
    stats = {
        "n": dist.n,
        "l2_norm_sq": l2_norm_sq(dist.pmf),
        "tv_to_uniform": tv_distance(dist.pmf, uniform),
        "distance_to_monotone": distance_to_monotone(dist.pmf),
        "flattening_distance_alpha_0.1": flattened_distance_certificate(dist.pmf, 0.1),
    }
    print(json.dumps(stats, indent=2))
    return 0


def _cmd_test(args: argparse.Namespace) -> int:
    auto_m = args.m == "mid"
    m = None if args.m in (None, "mid") else int(args.m)
    cfg = ExperimentConfig(
        tester=args.tester, instance=args.instance, eps=args.eps, trials=args.trials,
        target=args.target, m=m, auto_m=auto_m, big_l=args.L,
        constants=args.constants, seed=args.seed, jobs=args.jobs,
        out=args.out, csv=args.csv,
    )
    report = run_experiment(cfg)
    _write_report(report, cfg)
    return 0


def _default_seed() -> int:
    return int(os.environ.get("STREAMDIST_SEED", "0"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="streamdist",
                                     description="streaming distribution testers")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="materialize an instance to a JSON pmf file")
    gen.add_argument("kind", choices=["uniform", "point", "half", "geometric",
                                      "power", "step", "no-instance"])
    gen.add_argument("--n", type=int, default=None)
    gen.add_argument("--half-n", type=int, default=None, dest="half_n")
    gen.add_argument("--at", type=int, default=1)
    gen.add_argument("--ratio", type=float, default=None)
    gen.add_argument("--alpha", type=float, default=None)
    gen.add_argument("--levels", type=int, default=None)
    gen.add_argument("--decay", type=float, default=None)
    gen.add_argument("--eps0", type=float, default=0.5)
    gen.add_argument("--seed", type=int, default=_default_seed())
    gen.add_argument("--out", required=True)
    gen.set_defaults(func=_cmd_gen)

    desc = sub.add_parser("describe", help="print exact statistics of a pmf file")
    desc.add_argument("file")
    desc.set_defaults(func=_cmd_describe)

    test = sub.add_parser("test", help="run seeded tester trials")
    test.add_argument("--tester", required=True, choices=list(TESTERS))
    test.add_argument("--instance", required=True, help="JSON pmf file (stream source)")
    test.add_argument("--target", default=None,
                      help="JSON pmf file for identity/closeness references")
    test.add_argument("--eps", type=float, required=True)
    test.add_argument("--m", default=None,
                      help="memory budget in bits, or 'mid' for the window midpoint")
    test.add_argument("--trials", type=int, default=1)
    test.add_argument("--seed", type=int, default=_default_seed())
    test.add_argument("--constants", default="calibrated", choices=list(PROFILES))
    test.add_argument("--jobs", type=int, default=1)
    test.add_argument("--L", type=int, default=4, help="decomposability parameter")
    test.add_argument("--out", default=None, help="report JSON path (default stdout)")
    test.add_argument("--csv", default=None, help="optional flat per-trial CSV")
    test.set_defaults(func=_cmd_test)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, FileNotFoundError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
