"""Command-line front end: codebook search, SNR sweeps, distance profiles
and baseline code export.

Every command writes a manifest.json (command, config path, seed, artifact
checksums) into the output directory; re-running with the same config and
seed reproduces byte-identical CSV and codebook files.  Exit codes:
0 success, 1 usage error, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from pathlib import Path

from . import __version__, codes, kernels, optimize, sim
from .decode import DecodeMethod
from .loss import LossSpec
from .symbols import SymbolSpace

CONFIG_SCHEMA = 1

BASELINES = ("hamming74", "hamming128", "hadamard83")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        raise SystemExit(self._usage_exit(message))

    @staticmethod
    def _usage_exit(message):
        print(f"error: {message}", file=sys.stderr)
        return 1


def _check_keys(obj: dict, allowed: set[str], context: str) -> None:
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise UsageError(f"unknown field(s) in {context}: {', '.join(unknown)}")


def _require(obj: dict, key: str, context: str):
    if key not in obj:
        raise UsageError(f"missing field {key!r} in {context}")
    return obj[key]


def _load_config(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            cfg = json.load(fh)
    except FileNotFoundError:
        raise UsageError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON in {path}: {exc}") from None
    if not isinstance(cfg, dict):
        raise UsageError(f"config root must be a JSON object: {path}")
    schema = _require(cfg, "schema", "config")
    if schema != CONFIG_SCHEMA:
        raise UsageError(f"unsupported config schema {schema!r}, expected {CONFIG_SCHEMA}")
    return cfg


def _parse_space(obj, context: str) -> SymbolSpace:
    _check_keys(obj, {"k", "signed"}, context)
    k = _require(obj, "k", context)
    return SymbolSpace(k=int(k), signed=bool(obj.get("signed", False)))


def _parse_loss(obj, context: str) -> LossSpec:
    _check_keys(obj, {"kind", "weights", "csv", "m"}, context)
    kind = _require(obj, "kind", context)
    if kind == "abs":
        return LossSpec.abs_diff()
    if kind == "sq":
        return LossSpec.squared_diff()
    if kind == "weighted_bits":
        return LossSpec.weighted_bits_loss(_require(obj, "weights", context))
    if kind == "table":
        return LossSpec.from_csv(_require(obj, "csv", context))
    if kind == "zero_one":
        return LossSpec.zero_one(int(_require(obj, "m", context)))
    raise UsageError(f"unknown loss kind {kind!r} in {context}")


def _parse_search(obj, context: str, seed_override) -> optimize.SearchConfig:
    allowed = {
        "algorithm",
        "population_size",
        "generations",
        "crossover_rate",
        "mutation_rate",
        "elitism_count",
        "mutation_op",
        "restarts",
        "seed",
    }
    _check_keys(obj, allowed, context)
    fields = dict(obj)
    if seed_override is not None:
        fields["seed"] = seed_override
    try:
        return optimize.SearchConfig(**fields)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"bad search config: {exc}") from None


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(65536), b""):
            digest.update(block)
    return "sha256:" + digest.hexdigest()


def _write_manifest(out_dir: Path, command: str, config_path, seed, artifacts) -> None:
    manifest = {
        "schema": CONFIG_SCHEMA,
        "command": command,
        "config": str(config_path) if config_path else None,
        "config_checksum": _sha256(Path(config_path)) if config_path else None,
        "seed": seed,
        "out_dir": str(out_dir),
        "artifacts": {name: _sha256(out_dir / name) for name in artifacts},
    }
    with open(out_dir / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


# ---------------------------------------------------------------------------
# optimize


def _cmd_optimize(args) -> int:
    cfg = _load_config(args.config)
    _check_keys(
        cfg,
        {"schema", "space", "n", "loss", "sigma", "linear", "duplicate_penalty", "search"},
        "optimize config",
    )
    space = _parse_space(_require(cfg, "space", "config"), "space")
    n = int(_require(cfg, "n", "config"))
    loss = _parse_loss(_require(cfg, "loss", "config"), "loss")
    sigma = float(_require(cfg, "sigma", "config"))
    linear = bool(cfg.get("linear", False)) or args.linear
    fitness_cfg = optimize.FitnessConfig(
        loss=loss, sigma=sigma, duplicate_penalty=cfg.get("duplicate_penalty")
    )
    search = _parse_search(cfg.get("search", {}), "search", args.seed)

    result, wall = optimize.run_search(space, n, fitness_cfg, search, linear=linear)

    out = _out_dir(args)
    if linear:
        artifact = "generator.txt"
        artifact_text = codes.generator_to_text(result.generator, space)
    else:
        artifact = "codebook.txt"
        artifact_text = codes.codebook_to_text(result.codebook)
    with open(out / artifact, "w", encoding="ascii") as fh:
        fh.write(artifact_text)

    ledger = {
        "schema": CONFIG_SCHEMA,
        "command": "optimize",
        "config": cfg,
        "seed": search.seed,
        "linear": linear,
        "kernel_backend": kernels.backend_name(),
        "final_fitness": result.fitness,
        "trace": result.trace,
        "wall_time_s": wall,
        "artifact": artifact,
        "result_text": artifact_text,
        "version": __version__,
    }
    with open(out / "run_ledger.json", "w", encoding="utf-8") as fh:
        json.dump(ledger, fh, indent=2)
        fh.write("\n")

    _write_manifest(out, "optimize", args.config, search.seed, [artifact, "run_ledger.json"])
    print(f"wrote {out / artifact} (fitness {result.fitness:.6g}, {wall:.2f}s)")
    return 0


# ---------------------------------------------------------------------------
# simulate


def _codebook_from_entry(entry, context: str) -> tuple[str, codes.Codebook]:
    _check_keys(entry, {"id", "path", "baseline", "reference", "generator_path"}, context)
    sources = [key for key in ("path", "baseline", "reference", "generator_path") if key in entry]
    if len(sources) != 1:
        raise UsageError(
            f"{context} needs exactly one of 'path', 'baseline', 'reference', 'generator_path'"
        )
    source = sources[0]
    if source == "path":
        cb = codes.load_codebook(entry["path"])
    elif source == "generator_path":
        gen, space = codes.load_generator(entry["generator_path"])
        cb = codes.from_generator(gen, space)
    elif source == "reference":
        cb = codes.reference_codebook(entry["reference"])
    else:
        name = entry["baseline"]
        if name == "hamming74":
            cb = codes.from_generator(codes.baseline_hamming_7_4(), SymbolSpace.unsigned(4))
        elif name == "hamming128":
            cb = codes.from_generator(codes.baseline_hamming_12_8(), SymbolSpace.unsigned(8))
        elif name == "hadamard83":
            cb = codes.baseline_hadamard_8_3()
        else:
            raise UsageError(f"unknown baseline {name!r}; expected one of {BASELINES}")
    cb_id = entry.get("id", entry[source] if source != "baseline" else entry["baseline"])
    return str(cb_id), cb


def _parse_snr(obj) -> list[float]:
    if isinstance(obj, list):
        return [float(x) for x in obj]
    _check_keys(obj, {"start", "stop", "step"}, "snr_db")
    start = float(_require(obj, "start", "snr_db"))
    stop = float(_require(obj, "stop", "snr_db"))
    step = float(obj.get("step", 1.0))
    if step <= 0:
        raise UsageError("snr_db.step must be positive")
    grid = []
    snr = start
    while snr <= stop + 1e-9:
        grid.append(round(snr, 9))
        snr += step
    return grid


def _cmd_simulate(args) -> int:
    cfg = _load_config(args.config)
    allowed = {
        "schema",
        "codebooks",
        "decoders",
        "metric",
        "bayes_loss",
        "snr_db",
        "num_symbols",
        "sigma_source",
        "seed",
    }
    _check_keys(cfg, allowed, "simulate config")
    metric = _parse_loss(_require(cfg, "metric", "config"), "metric")
    bayes_loss = _parse_loss(cfg["bayes_loss"], "bayes_loss") if "bayes_loss" in cfg else metric
    snr_grid = _parse_snr(_require(cfg, "snr_db", "config"))
    num_symbols = int(cfg.get("num_symbols", 100_000))
    seed = args.seed if args.seed is not None else int(cfg.get("seed", 0))

    sigma_source = "true"
    num_probe_words = 10_000
    if "sigma_source" in cfg:
        src = cfg["sigma_source"]
        _check_keys(src, {"kind", "num_probe_words"}, "sigma_source")
        sigma_source = _require(src, "kind", "sigma_source")
        num_probe_words = int(src.get("num_probe_words", 10_000))

    decoder_names = _require(cfg, "decoders", "config")
    decoders = []
    for name in decoder_names:
        if name in ("hard", "soft"):
            decoders.append(DecodeMethod(name))
        elif name == "bayes":
            decoders.append(DecodeMethod("bayes", loss=bayes_loss))
        else:
            raise UsageError(f"unknown decoder {name!r}; expected hard, soft or bayes")

    entries = _require(cfg, "codebooks", "config")
    if not entries:
        raise UsageError("simulate config needs at least one codebook")
    sim_cfgs = []
    for entry in entries:
        cb_id, cb = _codebook_from_entry(entry, "codebook entry")
        for decoder in decoders:
            try:
                sim_cfgs.append(
                    sim.SimulationConfig(
                        codebook=cb,
                        decoder=decoder,
                        metric=metric,
                        snr_db=list(snr_grid),
                        num_symbols=num_symbols,
                        seed=seed,
                        sigma_source=sigma_source,
                        num_probe_words=num_probe_words,
                        codebook_id=cb_id,
                    )
                )
            except ValueError as exc:
                raise UsageError(f"bad simulate config: {exc}") from None

    rows = sim.sweep(sim_cfgs, jobs=args.jobs)
    out = _out_dir(args)
    sim.write_csv(rows, out / "results.csv")
    _write_manifest(out, "simulate", args.config, seed, ["results.csv"])
    print(f"wrote {out / 'results.csv'} ({len(rows)} rows)")
    return 0


# ---------------------------------------------------------------------------
# profile


def _cmd_profile(args) -> int:
    cb = codes.load_codebook(args.codebook)
    profile = codes.distance_profile(cb)
    out = _out_dir(args)
    path = out / "profile.csv"
    with open(path, "w", encoding="ascii") as fh:
        fh.write("abs_value_diff,hamming_distance\n")
        for vdiff, dist in profile:
            fh.write(f"{vdiff},{dist}\n")
    _write_manifest(out, "profile", None, args.seed, ["profile.csv"])
    print(f"wrote {path} ({profile.shape[0]} pairs)")
    return 0


# ---------------------------------------------------------------------------
# baselines


def _cmd_baselines(args) -> int:
    name = args.name
    out = _out_dir(args)
    path = out / f"{name}.txt"
    if name == "hamming74":
        cb = codes.from_generator(codes.baseline_hamming_7_4(), SymbolSpace.unsigned(4))
    elif name == "hamming128":
        cb = codes.from_generator(codes.baseline_hamming_12_8(), SymbolSpace.unsigned(8))
    elif name == "hadamard83":
        cb = codes.baseline_hadamard_8_3()
    else:
        raise UsageError(f"unknown baseline {name!r}; expected one of {BASELINES}")
    codes.save_codebook(cb, path)
    _write_manifest(out, "baselines", None, args.seed, [f"{name}.txt"])
    print(f"wrote {path}")
    return 0


# ---------------------------------------------------------------------------


def _add_common(parser: argparse.ArgumentParser, config_required: bool) -> None:
    if config_required:
        parser.add_argument("--config", required=True, help="JSON config file")
    parser.add_argument("--seed", type=int, default=None, help="override the config seed")
    parser.add_argument("--out", default=".", help="output directory")
    parser.add_argument(
        "--jobs",
        type=int,
        default=os.cpu_count() or 1,
        help="worker processes for sweeps (default: machine parallelism)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sigecc", description=__doc__)
    parser.add_argument("--version", action="version", version=f"sigecc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_opt = sub.add_parser("optimize", help="search for a codebook or generator matrix")
    p_opt.add_argument("--linear", action="store_true", help="search generator matrices")
    _add_common(p_opt, config_required=True)
    p_opt.set_defaults(func=_cmd_optimize)

    p_sim = sub.add_parser("simulate", help="run an SNR sweep and write results.csv")
    _add_common(p_sim, config_required=True)
    p_sim.set_defaults(func=_cmd_simulate)

    p_prof = sub.add_parser("profile", help="distance profile of a codebook file")
    p_prof.add_argument("codebook", help="codebook text file")
    _add_common(p_prof, config_required=False)
    p_prof.set_defaults(func=_cmd_profile)

    p_base = sub.add_parser("baselines", help="write a baseline codebook file")
    p_base.add_argument("name", choices=BASELINES)
    _add_common(p_base, config_required=False)
    p_base.set_defaults(func=_cmd_baselines)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, KeyError, OSError, optimize.SearchFailure) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
