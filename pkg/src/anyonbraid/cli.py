"""``anyonbraid`` command line.

Exit codes: 0 ok, 1 verification failure, 2 input error, 3 protocol misuse.
"""

from __future__ import annotations

import json
import secrets
import sys
from pathlib import Path

import click

from . import __version__
from .errors import AnyonBraidError, ProtocolError
from .lattice import load_code, validate
from .protocols import ground_state_circuit, ramsey_experiment, run_on_engines, self_statistics_experiment

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_PROTOCOL = 0, 1, 2, 3
ENGINE_CHOICES = ("tableau", "statevector", "both")


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _fail(message: str, code: int):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        click.echo(text, nl=False)


def _load(ref: str):
    try:
        return load_code(ref)
    except AnyonBraidError as exc:
        _fail(str(exc), EXIT_INPUT)


@click.group()
@click.version_option(__version__, prog_name="anyonbraid")
def main():
    """Simulate anyon braiding on planar stabilizer codes."""


@main.group()
def lattice():
    """Validate lattices and synthesize their ground-state circuits."""


@lattice.command("validate")
@click.argument("ref")
def lattice_validate(ref):
    """Print the validation report of a builtin code or JSON lattice file."""
    code = _load(ref)
    report = validate(code)
    click.echo(_dumps({"code": code.name, **report.to_dict()}), nl=False)
    sys.exit(EXIT_OK if report.valid else EXIT_VERIFY)


@lattice.command("synth")
@click.argument("ref")
@click.option("--output", "-o", type=click.Path(dir_okay=False), help="Write the circuit here.")
def lattice_synth(ref, output):
    """Print a ground-state preparation circuit in the text circuit format."""
    code = _load(ref)
    try:
        circuit = ground_state_circuit(code)
    except AnyonBraidError as exc:
        _fail(str(exc), EXIT_INPUT)
    _emit(circuit.to_text(), output)


def _parse_seed(value: str | None, config_seed) -> int:
    if value is None:
        value = config_seed if config_seed is not None else 0
    if value == "random":
        return secrets.randbits(32)
    try:
        return int(value)
    except (TypeError, ValueError):
        _fail(f"seed must be an integer or 'random', got {value!r}", EXIT_INPUT)


def _read_protocol(path: str) -> dict:
    try:
        cfg = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        _fail(f"{path}: {exc}", EXIT_INPUT)
    if not isinstance(cfg, dict) or "code" not in cfg:
        _fail(f"{path}: protocol file must be a JSON object with a 'code' entry", EXIT_INPUT)
    ref = str(cfg["code"])
    local = Path(path).parent / ref
    if local.is_file():
        cfg["code"] = str(local)
    return cfg


@main.command("run")
@click.argument("protocol", type=click.Path(exists=True, dir_okay=False))
@click.option("--engine", type=click.Choice(ENGINE_CHOICES), help="Override the file's engine.")
@click.option("--seed", help="Integer seed or 'random' (default: the file's seed, else 0).")
@click.option("--trace", is_flag=True, help="Record the syndrome after every gate.")
@click.option("--output", "-o", type=click.Path(dir_okay=False), help="Write the report here.")
def run(protocol, engine, seed, trace, output):
    """Run a protocol file (JSON) and emit its report as JSON."""
    cfg = _read_protocol(protocol)
    code = _load(cfg["code"])
    engine = engine or cfg.get("engine", "tableau")
    if engine not in ENGINE_CHOICES:
        _fail(f"unknown engine {engine!r}", EXIT_INPUT)
    seed_value = _parse_seed(seed, cfg.get("seed"))
    experiment = cfg.get("experiment", "ramsey")
    try:
        loop = [int(e) for e in cfg.get("loop", [])]
        if experiment == "ramsey":
            report = run_on_engines(ramsey_experiment, code, int(cfg["e_edge"]), int(cfg["m_edge"]), loop,
                                    engine=engine, seed=seed_value, trace=trace)
        elif experiment == "self_statistics":
            report = run_on_engines(self_statistics_experiment, code, str(cfg["species"]),
                                    int(cfg["pair_edge"]), loop, engine=engine, seed=seed_value, trace=trace)
        else:
            _fail(f"unknown experiment {experiment!r}", EXIT_INPUT)
    except KeyError as exc:
        _fail(f"protocol file is missing {exc}", EXIT_INPUT)
    except ProtocolError as exc:
        _fail(str(exc), EXIT_PROTOCOL)
    except (AnyonBraidError, ValueError, TypeError) as exc:
        _fail(str(exc), EXIT_INPUT)
    _emit(_dumps(report.to_dict()), output)


@main.command("bench")
@click.option("--size", "-L", type=click.IntRange(min=2), default=50, show_default=True,
              help="Patch side length L (2 L^2 qubits).")
@click.option("--seed", type=int, default=0, show_default=True)
def bench(size, seed):
    """Time ground-state synthesis plus one Ramsey run on square:LxL:planar."""
    from .bench import benchmark

    click.echo(_dumps(benchmark(size, seed)), nl=False)


@main.command("verify")
@click.option("--filter", "tag", default=None, help="Only criteria carrying this tag (e.g. primary).")
@click.option("--only", default=None, help="Comma-separated criterion numbers.")
@click.option("--json", "as_json", is_flag=True, help="Machine-readable results.")
def verify(tag, only, as_json):
    """Run the acceptance suite; exit 1 if any criterion fails."""
    from . import acceptance

    numbers = None
    if only:
        try:
            numbers = [int(x) for x in only.split(",") if x.strip()]
        except ValueError:
            _fail(f"--only expects comma-separated integers, got {only!r}", EXIT_INPUT)
    chosen = acceptance.select(tag, numbers)
    if not chosen:
        _fail("no acceptance criteria match the selection", EXIT_INPUT)
    results = []
    for c in chosen:
        r = acceptance.run_criterion(c)
        results.append(r)
        if not as_json:
            click.echo(r.line)
    failed = [r.number for r in results if not r.passed]
    if as_json:
        click.echo(_dumps({"passed": not failed, "results": [r.to_dict() for r in results]}), nl=False)
    else:
        click.echo(f"{len(results) - len(failed)}/{len(results)} criteria passed"
                   + (f"; failing: {', '.join(map(str, failed))}" if failed else ""))
    sys.exit(EXIT_VERIFY if failed else EXIT_OK)


if __name__ == "__main__":
    main()
